//! Exact homology of finite chain complexes over Z and Z/p.

pub mod simplicial;
pub mod snf;
pub mod sparse;

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{IntScalar, PrimeField};
pub use simplicial::{faces, FacetListJson, SimplicialComplex, SimplicialJson};
pub use snf::{rank_mod_p, rank_over_integers, smith_normal_form, SmithForm};
pub use sparse::SparseMatrix;

/// Coefficients for a homology computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coefficients {
    Integers,
    Mod(PrimeField),
}

impl Coefficients {
    pub fn mod_p(p: u64) -> Result<Self> {
        PrimeField::new(p).map(Coefficients::Mod).ok_or(Error::NotPrime(p))
    }

    pub fn tag(&self) -> CoeffTag {
        match self {
            Coefficients::Integers => CoeffTag::Z,
            Coefficients::Mod(f) => CoeffTag::Zp(f.modulus()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoeffTag {
    Z,
    Zp(u64),
}

impl fmt::Display for CoeffTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffTag::Z => write!(f, "Z"),
            CoeffTag::Zp(p) => write!(f, "Z/{p}"),
        }
    }
}

/// `H_q` as a rank plus torsion invariant factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyResult {
    pub degree: usize,
    pub betti: usize,
    /// Invariant factors greater than one; always empty over a field.
    pub torsion: Vec<BigInt>,
    pub coeff: CoeffTag,
}

impl fmt::Display for HomologyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.coeff {
            CoeffTag::Z => "Z".to_string(),
            CoeffTag::Zp(p) => format!("(Z/{p})"),
        };
        let mut parts = Vec::new();
        if self.betti > 0 {
            parts.push(if self.betti == 1 { base.clone() } else { format!("{base}^{}", self.betti) });
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "H_{} = 0", self.degree)
        } else {
            write!(f, "H_{} = {}", self.degree, parts.join(" + "))
        }
    }
}

/// Rank and torsion of one boundary map.
struct BoundaryData {
    rank: usize,
    torsion: Vec<BigInt>,
}

fn analyze<T: IntScalar>(m: &SparseMatrix<T>, coeff: Coefficients) -> BoundaryData {
    match coeff {
        Coefficients::Integers => {
            let s = smith_normal_form(m);
            BoundaryData {
                rank: s.rank(),
                torsion: s.torsion(),
            }
        }
        Coefficients::Mod(field) => BoundaryData {
            rank: rank_mod_p(m, &field),
            torsion: Vec::new(),
        },
    }
}

/// Homology of a chain complex `C_top -> ... -> C_0`.
///
/// `dims[q]` is the rank of `C_q`; `boundary(q)` returns the matrix of
/// `d_q: C_q -> C_{q-1}` for `1 <= q <= top`. Computes degrees in `degrees`.
pub fn chain_homology<T, F>(dims: &[usize], boundary: F, degrees: std::ops::RangeInclusive<usize>, coeff: Coefficients) -> Vec<HomologyResult>
where
    T: IntScalar,
    F: Fn(usize) -> SparseMatrix<T> + Sync,
{
    let top = dims.len().saturating_sub(1);
    let lo = *degrees.start();
    let hi = (*degrees.end()).min(top);
    if dims.is_empty() || lo > hi {
        return Vec::new();
    }
    // boundary maps d_lo ..= d_{hi+1}; d_0 and d_{top+1} vanish
    let needed: Vec<usize> = (lo.max(1)..=(hi + 1).min(top)).collect();
    let data: Vec<(usize, BoundaryData)> = {
        use rayon::prelude::*;
        needed
            .par_iter()
            .map(|&q| {
                let m = boundary(q);
                assert_eq!((m.rows(), m.cols()), (dims[q - 1], dims[q]), "boundary {q} has wrong shape");
                (q, analyze(&m, coeff))
            })
            .collect()
    };
    let lookup = |q: usize| data.iter().find(|(d, _)| *d == q).map(|(_, b)| b);
    (lo..=hi)
        .map(|q| {
            let rank_out = lookup(q).map_or(0, |b| b.rank);
            let incoming = lookup(q + 1);
            let rank_in = incoming.map_or(0, |b| b.rank);
            HomologyResult {
                degree: q,
                betti: dims[q] - rank_out - rank_in,
                torsion: incoming.map_or_else(Vec::new, |b| b.torsion.clone()),
                coeff: coeff.tag(),
            }
        })
        .collect()
}

/// `H_q(c)` for `0 <= q <= dim(c)`.
pub fn homology(c: &SimplicialComplex, q: usize, coeff: Coefficients) -> Result<HomologyResult> {
    let dim = c.dim();
    if dim.is_none_or(|d| q > d) {
        return Err(Error::DegreeOutOfRange { degree: q, dim });
    }
    Ok(homology_range(c, q..=q, coeff).remove(0))
}

/// Homology in every degree `0..=dim(c)`; empty for the empty complex.
pub fn homology_all(c: &SimplicialComplex, coeff: Coefficients) -> Vec<HomologyResult> {
    match c.dim() {
        None => Vec::new(),
        Some(d) => homology_range(c, 0..=d, coeff),
    }
}

/// Homology in a range of degrees, clipped to the dimension of `c`.
pub fn homology_range(c: &SimplicialComplex, degrees: std::ops::RangeInclusive<usize>, coeff: Coefficients) -> Vec<HomologyResult> {
    chain_homology(&c.f_vector(), |q| c.boundary_unchecked(q), degrees, coeff)
}

/// Betti numbers of `c` in every degree.
pub fn betti_numbers(c: &SimplicialComplex, coeff: Coefficients) -> Vec<usize> {
    homology_all(c, coeff).iter().map(|h| h.betti).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle() -> SimplicialComplex {
        SimplicialComplex::from_facets([[0u32, 1], [1, 2], [0, 2]])
    }

    #[test]
    fn circle_homology() {
        let c = circle();
        let d1 = c.boundary_matrix(1).unwrap();
        let s = smith_normal_form(&d1);
        assert_eq!(s.rank(), 2);
        assert!(s.torsion().is_empty());
        assert_eq!(betti_numbers(&c, Coefficients::Integers), vec![1, 1]);
    }

    #[test]
    fn projective_plane_has_two_torsion() {
        // six-vertex triangulation of RP^2 (hemi-icosahedron)
        let rp2 = SimplicialComplex::from_facets([
            [0u32, 1, 2],
            [0, 2, 3],
            [0, 3, 4],
            [0, 4, 5],
            [0, 1, 5],
            [1, 2, 4],
            [1, 3, 4],
            [1, 3, 5],
            [2, 3, 5],
            [2, 4, 5],
        ]);
        assert_eq!(rp2.f_vector(), vec![6, 15, 10]);
        let h = homology_all(&rp2, Coefficients::Integers);
        assert_eq!(h[1].betti, 0);
        assert_eq!(h[1].torsion, vec![BigInt::from(2)]);
        assert_eq!(h[2].betti, 0);
        let h2 = homology_all(&rp2, Coefficients::mod_p(2).unwrap());
        assert_eq!(h2.iter().map(|h| h.betti).collect::<Vec<_>>(), vec![1, 1, 1]);
    }

    #[test]
    fn non_prime_modulus_rejected() {
        assert_eq!(Coefficients::mod_p(6), Err(Error::NotPrime(6)));
    }

    #[test]
    fn degree_beyond_dimension() {
        assert!(homology(&circle(), 2, Coefficients::Integers).is_err());
        assert!(homology_all(&SimplicialComplex::empty(), Coefficients::Integers).is_empty());
    }

    #[test]
    fn display() {
        let h = HomologyResult {
            degree: 1,
            betti: 2,
            torsion: vec![BigInt::from(2)],
            coeff: CoeffTag::Z,
        };
        assert_eq!(h.to_string(), "H_1 = Z^2 + Z/2");
    }
}
