use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::sparse::SparseMatrix;
use crate::error::Error;

/// Finite abstract simplicial complex on `u32` vertex ids.
///
/// Simplices of dimension `d` are stored flat, `d + 1` ids each, every
/// simplex ascending and the list lexicographically sorted. Orientation is
/// the ascending vertex order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SimplicialComplex {
    simplices: Vec<Vec<u32>>,
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        SimplicialComplex::default()
    }

    /// Downward closure of a list of simplices (typically the facets).
    pub fn from_facets<I, S>(facets: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u32]>,
    {
        let mut by_dim: Vec<BTreeSet<Vec<u32>>> = Vec::new();
        let mut stack: Vec<Vec<u32>> = Vec::new();
        for f in facets {
            let mut s = f.as_ref().to_vec();
            s.sort_unstable();
            s.dedup();
            if !s.is_empty() {
                stack.push(s);
            }
        }
        while let Some(s) = stack.pop() {
            let d = s.len() - 1;
            if by_dim.len() <= d {
                by_dim.resize_with(d + 1, BTreeSet::new);
            }
            if by_dim[d].contains(&s) {
                continue;
            }
            if d > 0 {
                for skip in 0..s.len() {
                    let face: Vec<u32> = s
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != skip)
                        .map(|(_, v)| *v)
                        .collect();
                    stack.push(face);
                }
            }
            by_dim[d].insert(s);
        }
        let simplices = by_dim
            .into_iter()
            .map(|set| set.into_iter().flatten().collect())
            .collect();
        SimplicialComplex { simplices }
    }

    /// Builds from simplices that already form a closed family, each group
    /// holding the `d`-simplices. Sorts, and verifies closure.
    pub fn from_closed(groups: Vec<Vec<Vec<u32>>>) -> Result<Self, Error> {
        let mut simplices = Vec::with_capacity(groups.len());
        for (d, mut group) in groups.into_iter().enumerate() {
            for s in group.iter_mut() {
                s.sort_unstable();
                if s.len() != d + 1 || s.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::Malformed(format!("bad {d}-simplex {s:?}")));
                }
            }
            group.sort();
            group.dedup();
            simplices.push(group.into_iter().flatten().collect::<Vec<u32>>());
        }
        while simplices.last().is_some_and(|s: &Vec<u32>| s.is_empty()) {
            simplices.pop();
        }
        let c = SimplicialComplex { simplices };
        for d in 1..c.simplices.len() {
            for s in c.iter(d) {
                for face in faces(s) {
                    if c.index_of(&face).is_none() {
                        return Err(Error::Malformed(format!("face {face:?} of {s:?} missing")));
                    }
                }
            }
        }
        Ok(c)
    }

    /// Top dimension, `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.len().checked_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn count(&self, d: usize) -> usize {
        self.simplices.get(d).map_or(0, |s| s.len() / (d + 1))
    }

    /// Number of simplices in every dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        (0..self.simplices.len()).map(|d| self.count(d)).collect()
    }

    pub fn iter(&self, d: usize) -> impl Iterator<Item = &[u32]> + '_ {
        self.simplices
            .get(d)
            .map(|s| s.as_slice())
            .unwrap_or(&[])
            .chunks_exact(d + 1)
    }

    pub fn simplex(&self, d: usize, index: usize) -> &[u32] {
        &self.simplices[d][index * (d + 1)..(index + 1) * (d + 1)]
    }

    pub fn vertices(&self) -> Vec<u32> {
        self.iter(0).map(|s| s[0]).collect()
    }

    /// Position of an ascending simplex within its dimension.
    pub fn index_of(&self, s: &[u32]) -> Option<usize> {
        let d = s.len().checked_sub(1)?;
        let n = self.count(d);
        let (mut lo, mut hi) = (0, n);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.simplex(d, mid).cmp(s) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn contains(&self, s: &[u32]) -> bool {
        self.index_of(s).is_some()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    /// Simplices present in both complexes.
    pub fn intersection(&self, other: &SimplicialComplex) -> SimplicialComplex {
        self.filter(|s| other.contains(s))
    }

    /// Full subcomplex spanned by the vertices accepted by `keep`.
    pub fn full_subcomplex<F: Fn(u32) -> bool>(&self, keep: F) -> SimplicialComplex {
        self.filter(|s| s.iter().all(|&v| keep(v)))
    }

    /// Simplices accepted by a predicate that is closed under taking faces.
    fn filter<F: Fn(&[u32]) -> bool>(&self, pred: F) -> SimplicialComplex {
        let mut simplices: Vec<Vec<u32>> = (0..self.simplices.len())
            .map(|d| self.iter(d).filter(|s| pred(s)).flatten().copied().collect())
            .collect();
        while simplices.last().is_some_and(|s| s.is_empty()) {
            simplices.pop();
        }
        SimplicialComplex { simplices }
    }

    /// Applies an injective vertex relabeling.
    pub fn relabel<F: Fn(u32) -> u32>(&self, map: F) -> SimplicialComplex {
        let groups = (0..self.simplices.len())
            .map(|d| self.iter(d).map(|s| s.iter().map(|&v| map(v)).collect()).collect())
            .collect();
        SimplicialComplex::from_closed(groups).expect("injective relabeling preserves closure")
    }

    /// Boundary map from `q`-chains to `(q-1)`-chains.
    pub fn boundary_matrix(&self, q: usize) -> Result<SparseMatrix<i64>, Error> {
        let dim = self.dim();
        if q == 0 || dim.is_none_or(|d| q > d) {
            return Err(Error::DegreeOutOfRange { degree: q, dim });
        }
        Ok(self.boundary_unchecked(q))
    }

    /// Boundary map in any degree; zero-sized outside `1..=dim`.
    pub(crate) fn boundary_unchecked(&self, q: usize) -> SparseMatrix<i64> {
        if q == 0 {
            return SparseMatrix::zeros(0, self.count(0));
        }
        let mut triples = Vec::with_capacity(self.count(q) * (q + 1));
        for (col, s) in self.iter(q).enumerate() {
            for (t, face) in faces(s).enumerate() {
                let row = self.index_of(&face).expect("complex is closed under faces");
                let sign = if t % 2 == 0 { 1 } else { -1 };
                triples.push((row, col, sign));
            }
        }
        SparseMatrix::from_triples(self.count(q - 1), self.count(q), triples)
    }

    pub fn to_json(&self) -> SimplicialJson {
        SimplicialJson {
            vertices: self.vertices(),
            simplices: (0..self.simplices.len())
                .map(|d| (d.to_string(), self.iter(d).map(|s| s.to_vec()).collect()))
                .collect(),
        }
    }

    pub fn from_json(json: &SimplicialJson) -> Result<Self, Error> {
        let mut groups: Vec<Vec<Vec<u32>>> = Vec::new();
        for (key, list) in &json.simplices {
            let d: usize = key
                .parse()
                .map_err(|_| Error::Malformed(format!("dimension key {key:?}")))?;
            if groups.len() <= d {
                groups.resize(d + 1, Vec::new());
            }
            groups[d] = list.clone();
        }
        let c = Self::from_closed(groups)?;
        let mut declared = json.vertices.clone();
        declared.sort_unstable();
        declared.dedup();
        if declared != c.vertices() {
            return Err(Error::Malformed("vertex list does not match the 0-simplices".into()));
        }
        Ok(c)
    }
}

/// Faces of an ascending simplex in omitted-position order.
pub fn faces(s: &[u32]) -> impl Iterator<Item = Vec<u32>> + '_ {
    (0..s.len()).map(move |skip| {
        s.iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, v)| *v)
            .collect()
    })
}

/// On-disk form: `{"vertices": [...], "simplices": {"0": [[..]], "1": [[..]], ...}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialJson {
    pub vertices: Vec<u32>,
    pub simplices: BTreeMap<String, Vec<Vec<u32>>>,
}

/// Facet-list input form: `{"facets": [[...], ...]}`; closure is computed on load.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetListJson {
    pub facets: Vec<Vec<u32>>,
}

impl From<&FacetListJson> for SimplicialComplex {
    fn from(f: &FacetListJson) -> Self {
        SimplicialComplex::from_facets(&f.facets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hollow_triangle() -> SimplicialComplex {
        SimplicialComplex::from_facets([[0, 1], [1, 2], [0, 2]])
    }

    #[test]
    fn closure_of_a_tetrahedron() {
        let c = SimplicialComplex::from_facets([[3u32, 1, 2, 0]]);
        assert_eq!(c.f_vector(), vec![4, 6, 4, 1]);
        assert_eq!(c.euler_characteristic(), 1);
        assert!(c.contains(&[0, 2, 3]));
    }

    #[test]
    fn triangle_boundary_squares_to_zero() {
        let c = hollow_triangle();
        let d1 = c.boundary_matrix(1).unwrap();
        assert_eq!((d1.rows(), d1.cols()), (3, 3));
        // every column is v_hi - v_lo
        for col in 0..3 {
            let sum: i64 = (0..3).map(|r| d1.get(r, col)).sum();
            assert_eq!(sum, 0);
        }
        let filled = SimplicialComplex::from_facets([[0u32, 1, 2]]);
        let d1 = filled.boundary_matrix(1).unwrap();
        let d2 = filled.boundary_matrix(2).unwrap();
        assert!(d1.mul(&d2).is_zero());
    }

    #[test]
    fn single_simplex_boundary_alternates() {
        let c = SimplicialComplex::from_facets([[0u32, 1, 2, 3]]);
        let d3 = c.boundary_matrix(3).unwrap();
        assert_eq!(d3.nnz(), 4);
        let signs: Vec<i64> = faces(&[0, 1, 2, 3])
            .map(|f| d3.get(c.index_of(&f).unwrap(), 0))
            .collect();
        assert_eq!(signs, vec![1, -1, 1, -1]);
    }

    #[test]
    fn degree_out_of_range() {
        let c = hollow_triangle();
        assert!(matches!(c.boundary_matrix(0), Err(Error::DegreeOutOfRange { .. })));
        assert!(matches!(c.boundary_matrix(2), Err(Error::DegreeOutOfRange { .. })));
    }

    #[test]
    fn from_closed_rejects_missing_faces() {
        let err = SimplicialComplex::from_closed(vec![vec![vec![0], vec![1]], vec![vec![0, 2]]]);
        assert!(err.is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = SimplicialComplex::from_facets([[0u32, 1, 2], [2, 3, 4]]);
        let text = serde_json::to_string(&c.to_json()).unwrap();
        let back: SimplicialJson = serde_json::from_str(&text).unwrap();
        assert_eq!(SimplicialComplex::from_json(&back).unwrap(), c);
        let facets: FacetListJson = serde_json::from_str(r#"{"facets": [[0,1,2],[2,3,4]]}"#).unwrap();
        assert_eq!(SimplicialComplex::from(&facets), c);
    }

    #[test]
    fn subcomplexes() {
        let c = SimplicialComplex::from_facets([vec![0u32, 1, 2], vec![2, 3]]);
        let sub = c.full_subcomplex(|v| v != 0);
        assert_eq!(sub.f_vector(), vec![3, 2]);
        let other = SimplicialComplex::from_facets([[1u32, 2, 3]]);
        assert_eq!(c.intersection(&other).f_vector(), vec![3, 2]);
    }
}
