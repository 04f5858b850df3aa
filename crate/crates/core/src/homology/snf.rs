//! Smith normal form and rank by sparse elimination.
//!
//! Elimination proceeds in two phases. The sparse phase repeatedly picks a
//! unit pivot with low Markowitz cost, clears its column with row operations
//! and drops its row and column (a unit pivot contributes an invariant factor
//! of 1 and splits off as a direct summand). Over a field this phase finishes
//! the job. Over Z whatever is left has no unit entries and goes through a
//! dense Smith reduction.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::sparse::SparseMatrix;
use crate::scalar::{IntScalar, Integers, Overflow, PrimeField, Ring};

/// Invariant factors `d_1 | d_2 | ... | d_r`, all positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    factors: Vec<BigInt>,
}

impl SmithForm {
    pub fn new(mut factors: Vec<BigInt>) -> Self {
        factors.sort();
        debug_assert!(factors.iter().all(|d| d.is_positive()));
        debug_assert!(factors.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
        SmithForm { factors }
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

/// What the sparse phase leaves behind.
#[derive(Debug, Clone)]
pub struct Elimination<E> {
    pub unit_pivots: usize,
    /// Rows that still carry entries, none of them a unit.
    pub remainder: Vec<Vec<(u32, E)>>,
}

struct Eliminator<'r, R: Ring> {
    ring: &'r R,
    rows: Vec<Vec<(u32, R::Elem)>>,
    col_rows: Vec<BTreeSet<u32>>,
}

impl<'r, R: Ring> Eliminator<'r, R> {
    fn new(ring: &'r R, rows: Vec<Vec<(u32, R::Elem)>>, cols: usize) -> Self {
        let mut col_rows = vec![BTreeSet::new(); cols];
        for (r, row) in rows.iter().enumerate() {
            for (c, _) in row {
                col_rows[*c as usize].insert(r as u32);
            }
        }
        Eliminator {
            ring,
            rows,
            col_rows,
        }
    }

    /// Unit entry of `row` whose column is sparsest.
    fn best_unit(&self, row: usize) -> Option<(usize, R::Elem)> {
        self.rows[row]
            .iter()
            .enumerate()
            .filter_map(|(pos, (c, v))| {
                self.ring
                    .unit_inverse(v)
                    .map(|inv| (self.col_rows[*c as usize].len(), pos, inv))
            })
            .min_by_key(|(count, pos, _)| (*count, *pos))
            .map(|(_, pos, inv)| (pos, inv))
    }

    /// `target -= factor * pivot`, keeping column occupancy in sync.
    fn axpy(&mut self, target: usize, factor: &R::Elem, pivot: &[(u32, R::Elem)]) -> Result<(), Overflow> {
        let ring = self.ring;
        let old = std::mem::take(&mut self.rows[target]);
        let mut merged = Vec::with_capacity(old.len() + pivot.len());
        let (mut i, mut j) = (0, 0);
        while i < old.len() || j < pivot.len() {
            let take_old = j == pivot.len() || (i < old.len() && old[i].0 < pivot[j].0);
            let take_piv = i == old.len() || (j < pivot.len() && pivot[j].0 < old[i].0);
            if take_old {
                merged.push(old[i].clone());
                i += 1;
            } else if take_piv {
                let c = pivot[j].0;
                let v = ring.neg(&ring.mul(factor, &pivot[j].1)?)?;
                self.col_rows[c as usize].insert(target as u32);
                merged.push((c, v));
                j += 1;
            } else {
                let c = old[i].0;
                let v = ring.sub(&old[i].1, &ring.mul(factor, &pivot[j].1)?)?;
                if ring.is_zero(&v) {
                    self.col_rows[c as usize].remove(&(target as u32));
                } else {
                    merged.push((c, v));
                }
                i += 1;
                j += 1;
            }
        }
        self.rows[target] = merged;
        Ok(())
    }

    fn run(mut self) -> Result<Elimination<R::Elem>, Overflow> {
        let mut heap: BinaryHeap<Reverse<(usize, u32)>> = self
            .rows
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_empty())
            .map(|(i, r)| Reverse((r.len(), i as u32)))
            .collect();
        let mut unit_pivots = 0;
        while let Some(Reverse((len, r))) = heap.pop() {
            let r = r as usize;
            if self.rows[r].len() != len || len == 0 {
                continue;
            }
            let Some((pos, inv)) = self.best_unit(r) else {
                // parked until an update gives it a unit
                continue;
            };
            let pivot = std::mem::take(&mut self.rows[r]);
            let col = pivot[pos].0;
            for (c, _) in &pivot {
                self.col_rows[*c as usize].remove(&(r as u32));
            }
            let others: Vec<u32> = self.col_rows[col as usize].iter().copied().collect();
            for s in others {
                let s = s as usize;
                let entry = self.rows[s]
                    .binary_search_by_key(&col, |e| e.0)
                    .map(|i| self.rows[s][i].1.clone())
                    .expect("column occupancy out of sync");
                let factor = self.ring.mul(&entry, &inv)?;
                self.axpy(s, &factor, &pivot)?;
                if !self.rows[s].is_empty() {
                    heap.push(Reverse((self.rows[s].len(), s as u32)));
                }
            }
            debug_assert!(self.col_rows[col as usize].is_empty());
            unit_pivots += 1;
        }
        let remainder = self.rows.into_iter().filter(|r| !r.is_empty()).collect();
        Ok(Elimination {
            unit_pivots,
            remainder,
        })
    }
}

/// Sparse phase of elimination over `ring`.
pub fn eliminate<R: Ring>(ring: &R, m: &SparseMatrix<R::Elem>) -> Result<Elimination<R::Elem>, Overflow>
where
    R::Elem: Zero,
{
    Eliminator::new(ring, m.row_lists(), m.cols()).run()
}

/// Diagonal of the Smith form of a dense matrix, unsorted and possibly signed.
#[allow(clippy::needless_range_loop)]
pub fn dense_smith_diagonal<T: IntScalar>(mut a: Vec<Vec<T>>, cols: usize) -> Result<Vec<T>, Overflow> {
    let rows = a.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero magnitude in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, v) in row.iter().enumerate().skip(t) {
                if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut settled = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let v = a[i][j].checked_sub(&q.checked_mul(&a[t][j]).ok_or(Overflow)?).ok_or(Overflow)?;
                    a[i][j] = v;
                }
                if !a[i][t].is_zero() {
                    settled = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let v = row[j].checked_sub(&q.checked_mul(&row[t]).ok_or(Overflow)?).ok_or(Overflow)?;
                    row[j] = v;
                }
                if !a[t][j].is_zero() {
                    settled = false;
                }
            }
            if settled {
                // pivot must divide the whole trailing block
                let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
                match bad {
                    None => break,
                    Some(i) => {
                        for j in t..cols {
                            let v = a[t][j].checked_add(&a[i][j]).ok_or(Overflow)?;
                            a[t][j] = v;
                        }
                        continue;
                    }
                }
            }
            // move the smallest entry of the pivot row/column into place
            let mut best = (t, t);
            for i in t..rows {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(a[t][t].clone());
        t += 1;
    }
    Ok(diag)
}

/// Invariant factors of `m`, computed in `T` and failing on overflow.
pub fn smith_factors_in<T: IntScalar>(m: &SparseMatrix<T>) -> Result<Vec<T>, Overflow> {
    let ring = Integers::<T>::new();
    let elim = eliminate(&ring, m)?;
    let mut factors = vec![T::one(); elim.unit_pivots];
    if !elim.remainder.is_empty() {
        let mut used: Vec<u32> = elim.remainder.iter().flat_map(|r| r.iter().map(|e| e.0)).collect();
        used.sort_unstable();
        used.dedup();
        let mut dense = vec![vec![T::zero(); used.len()]; elim.remainder.len()];
        for (i, row) in elim.remainder.iter().enumerate() {
            for (c, v) in row {
                let j = used.binary_search(c).expect("column collected above");
                dense[i][j] = v.clone();
            }
        }
        let diag = dense_smith_diagonal(dense, used.len())?;
        factors.extend(diag.into_iter().map(|d| d.abs()));
    }
    Ok(factors)
}

/// Smith normal form over Z. Tries 64-bit arithmetic first and redoes the
/// whole computation with big integers if anything overflows.
pub fn smith_normal_form<T: IntScalar>(m: &SparseMatrix<T>) -> SmithForm {
    let narrow: Option<SparseMatrix<i64>> = m
        .entries()
        .iter()
        .all(|e| e.2.to_i64().is_some())
        .then(|| m.map(|v| v.to_i64().expect("checked above")));
    if let Some(narrow) = narrow {
        if let Ok(f) = smith_factors_in(&narrow) {
            return SmithForm::new(f.into_iter().map(BigInt::from).collect());
        }
    }
    let wide = m.map(|v| v.clone().into());
    let f = smith_factors_in(&wide).expect("big integers do not overflow");
    SmithForm::new(f)
}

/// Rank over Z (equivalently over Q).
pub fn rank_over_integers<T: IntScalar>(m: &SparseMatrix<T>) -> usize {
    smith_normal_form(m).rank()
}

/// Rank over Z/p of an integer matrix.
pub fn rank_mod_p<T: IntScalar>(m: &SparseMatrix<T>, field: &PrimeField) -> usize {
    let p = field.modulus();
    let reduced = SparseMatrix::from_triples(
        m.rows(),
        m.cols(),
        m.entries()
            .iter()
            .map(|(r, c, v)| {
                let residue: BigInt = v.clone().into() % BigInt::from(p);
                let residue = if residue.is_negative() { residue + p } else { residue };
                (*r, *c, residue.to_u64().expect("residue below p"))
            })
            .collect(),
    );
    let elim = eliminate(field, &reduced).expect("field arithmetic cannot overflow");
    debug_assert!(elim.remainder.is_empty());
    elim.unit_pivots
}
