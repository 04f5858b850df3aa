use std::fmt;

use num_traits::Zero;

/// Sparse matrix stored as `(row, col, value)` triples, sorted by `(row, col)`.
///
/// No stored entry is zero and each position appears at most once.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, T)>,
}

impl<T: fmt::Debug> fmt::Debug for SparseMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SparseMatrix")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("nnz", &self.entries.len())
            .finish()
    }
}

impl<T> SparseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize, T)] {
        &self.entries
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, mut f: F) -> SparseMatrix<U> {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|(r, c, v)| (*r, *c, f(v))).collect(),
        }
    }
}

impl<T> SparseMatrix<T>
where
    T: Clone + Zero + PartialEq,
{
    /// Builds a matrix from triples. Repeated positions are summed and zeros dropped.
    ///
    /// Panics if a triple lies outside `rows x cols`.
    pub fn from_triples(rows: usize, cols: usize, mut triples: Vec<(usize, usize, T)>) -> Self {
        for &(r, c, _) in &triples {
            assert!(r < rows && c < cols, "entry ({r}, {c}) outside {rows}x{cols}");
        }
        triples.sort_by_key(|a| (a.0, a.1));
        let mut entries: Vec<(usize, usize, T)> = Vec::with_capacity(triples.len());
        for (r, c, v) in triples {
            match entries.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 = last.2.clone() + v,
                _ => entries.push((r, c, v)),
            }
        }
        entries.retain(|e| !e.2.is_zero());
        SparseMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_dense(dense: &[Vec<T>], cols: usize) -> Self {
        let triples = dense
            .iter()
            .enumerate()
            .flat_map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(move |(c, v)| (r, c, v.clone()))
            })
            .collect();
        Self::from_triples(dense.len(), cols, triples)
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.entries
            .binary_search_by(|e| (e.0, e.1).cmp(&(row, col)))
            .map(|i| self.entries[i].2.clone())
            .unwrap_or_else(|_| T::zero())
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::zero(); self.cols]; self.rows];
        for (r, c, v) in &self.entries {
            out[*r][*c] = v.clone();
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let triples = self
            .entries
            .iter()
            .map(|(r, c, v)| (*c, *r, v.clone()))
            .collect();
        Self::from_triples(self.cols, self.rows, triples)
    }

    /// Row lists `(col, value)` sorted by column.
    pub fn row_lists(&self) -> Vec<Vec<(u32, T)>> {
        let mut out = vec![Vec::new(); self.rows];
        for (r, c, v) in &self.entries {
            out[*r].push((*c as u32, v.clone()));
        }
        out
    }

    /// Column lists `(row, value)` sorted by row.
    pub fn col_lists(&self) -> Vec<Vec<(u32, T)>> {
        let mut out = vec![Vec::new(); self.cols];
        for (r, c, v) in &self.entries {
            out[*c].push((*r as u32, v.clone()));
        }
        out
    }
}

impl<T> SparseMatrix<T>
where
    T: Clone + Zero + PartialEq + std::ops::Mul<Output = T>,
{
    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix<T>) -> SparseMatrix<T> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let rhs_rows = rhs.row_lists();
        let mut triples = Vec::new();
        for (r, k, a) in &self.entries {
            for (c, b) in &rhs_rows[*k] {
                triples.push((*r, *c as usize, a.clone() * b.clone()));
            }
        }
        SparseMatrix::from_triples(self.rows, rhs.cols, triples)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_are_summed_and_zeros_dropped() {
        let m = SparseMatrix::from_triples(2, 2, vec![(0, 0, 1i64), (0, 0, -1), (1, 1, 2), (1, 0, 3)]);
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.get(0, 0), 0);
        assert_eq!(m.get(1, 0), 3);
        assert_eq!(m.entries()[0], (1, 0, 3));
    }

    #[test]
    fn product_and_transpose() {
        let a = SparseMatrix::from_dense(&[vec![1i64, 2], vec![0, 1]], 2);
        let b = a.transpose();
        let p = a.mul(&b);
        assert_eq!(p.to_dense(), vec![vec![5, 2], vec![2, 1]]);
    }
}
