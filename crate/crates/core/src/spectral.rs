//! The Mayer–Vietoris spectral sequence of the cover `{U_{i,j}}` of
//! `K_{n+1}(Γ_k)`, where `U_{i,j}` holds the states with particle `i` on
//! leaf `j`.
//!
//! Only rows `q = 0, 1` exist since the complex is a graph. Every summand of
//! the `E¹` page is an intersection of covers, kept as a mask of the ambient
//! complex, so the maps induced by inclusion are literal chain inclusions:
//! a cycle of a smaller intersection is re-expressed in the fundamental-cycle
//! coordinates of the larger one by reading off its non-tree coefficients.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{cover_subcomplex, Cycle, ConfigComplex, SubcomplexMask};
use crate::error::{Error, Result};
use crate::homology::{chain_homology, homology_range, rank_mod_p, rank_over_integers, Coefficients, HomologyResult, SparseMatrix};
use crate::nerve::{cover_mask_for, nerve, nerve_matches_cover, NerveComplex};
use crate::scalar::{PrimeField, LARGE_PRIME};

/// H₁ of one summand: its fundamental cycles, with the non-tree edges that
/// serve as coordinates.
#[derive(Debug, Clone)]
pub struct H1Basis {
    non_tree: Vec<u32>,
    cycles: Vec<Cycle>,
}

impl H1Basis {
    fn of(mask: &SubcomplexMask<'_>) -> Self {
        let basis = mask.cycle_basis();
        H1Basis {
            non_tree: basis.forest.non_tree_edges().to_vec(),
            cycles: basis.cycles,
        }
    }

    pub fn rank(&self) -> usize {
        self.cycles.len()
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    /// Coefficients of a cycle of this summand in the basis.
    pub fn coordinates(&self, cycle: &[(u32, i64)]) -> Vec<(usize, i64)> {
        cycle
            .iter()
            .filter_map(|&(e, c)| self.non_tree.binary_search(&e).ok().map(|i| (i, c)))
            .collect()
    }
}

/// `U_σ` for one nerve simplex `σ`.
#[derive(Debug, Clone)]
pub struct Summand<'a> {
    pub simplex: Vec<u32>,
    pub mask: SubcomplexMask<'a>,
    pub components: usize,
    pub h1: H1Basis,
}

/// Columns `0..=max_p` of the `E¹` page.
#[derive(Debug, Clone)]
pub struct E1Page<'a> {
    complex: &'a ConfigComplex,
    nerve: NerveComplex,
    summands: Vec<Vec<Summand<'a>>>,
    h1_offsets: Vec<Vec<usize>>,
    /// Whether every column of the nerve was built.
    complete: bool,
}

/// Builds columns `0..=max_p` of the page for `complex = K_{n+1}(Γ_k)`
/// (clipped to the dimension of the nerve).
pub fn e1_page(complex: &ConfigComplex, max_p: usize) -> E1Page<'_> {
    let nv = nerve(complex.n(), complex.k());
    let top = nv.complex().dim().map_or(0, |d| d.min(max_p));
    let mut summands = Vec::new();
    if nv.complex().dim().is_some() {
        for p in 0..=top {
            let column: Vec<Summand<'_>> = nv
                .complex()
                .iter(p)
                .collect::<Vec<_>>()
                .par_iter()
                .map(|s| {
                    let mask = cover_mask_for(complex, &nv, s);
                    Summand {
                        simplex: s.to_vec(),
                        components: mask.betti().0,
                        h1: H1Basis::of(&mask),
                        mask,
                    }
                })
                .collect();
            summands.push(column);
        }
    }
    let h1_offsets = summands
        .iter()
        .map(|column| {
            let mut acc = 0;
            let mut offsets: Vec<usize> = column
                .iter()
                .map(|s| {
                    let at = acc;
                    acc += s.h1.rank();
                    at
                })
                .collect();
            offsets.push(acc);
            offsets
        })
        .collect();
    E1Page {
        complex,
        complete: nv.complex().dim().is_none_or(|d| d <= max_p),
        nerve: nv,
        summands,
        h1_offsets,
    }
}

impl<'a> E1Page<'a> {
    pub fn complex(&self) -> &'a ConfigComplex {
        self.complex
    }

    pub fn nerve(&self) -> &NerveComplex {
        &self.nerve
    }

    /// Number of built columns.
    pub fn columns(&self) -> usize {
        self.summands.len()
    }

    pub fn summands(&self, p: usize) -> &[Summand<'a>] {
        self.summands.get(p).map_or(&[], |c| c.as_slice())
    }

    /// Rank of `E¹_{p,q}`.
    pub fn rank(&self, p: usize, q: usize) -> usize {
        match q {
            0 => self.summands(p).iter().map(|s| s.components).sum(),
            1 => self.h1_offsets.get(p).map_or(0, |o| *o.last().unwrap()),
            _ => 0,
        }
    }

    fn face_index(&self, face: &[u32]) -> usize {
        self.nerve.complex().index_of(face).expect("faces of nerve simplices are nerve simplices")
    }

    /// `d¹: E¹_{p,q} -> E¹_{p-1,q}` for `1 <= p < columns()`, the alternating
    /// sum over faces of the maps induced by inclusion.
    pub fn d1(&self, p: usize, q: usize) -> Result<SparseMatrix<i64>> {
        if p == 0 || p >= self.columns() || q > 1 {
            return Err(Error::DegreeOutOfRange {
                degree: p,
                dim: self.columns().checked_sub(1),
            });
        }
        if q == 0 {
            return self.d1_bottom(p);
        }
        let rows = self.rank(p - 1, 1);
        let cols = self.rank(p, 1);
        let offsets_in = &self.h1_offsets[p];
        let offsets_out = &self.h1_offsets[p - 1];
        let triples: Vec<(usize, usize, i64)> = self.summands[p]
            .par_iter()
            .enumerate()
            .flat_map_iter(|(s, summand)| {
                let mut out = Vec::new();
                for t in 0..summand.simplex.len() {
                    let mut face = summand.simplex.clone();
                    face.remove(t);
                    let f = self.face_index(&face);
                    let target = &self.summands[p - 1][f].h1;
                    let sign = if t % 2 == 0 { 1 } else { -1 };
                    for (b, z) in summand.h1.cycles.iter().enumerate() {
                        for (i, c) in target.coordinates(z) {
                            out.push((offsets_out[f] + i, offsets_in[s] + b, sign * c));
                        }
                    }
                }
                out
            })
            .collect();
        Ok(SparseMatrix::from_triples(rows, cols, triples))
    }

    /// Bottom row: one generator per component; each component of `U_σ`
    /// lands in the component of `U_τ` containing it.
    fn d1_bottom(&self, p: usize) -> Result<SparseMatrix<i64>> {
        let offsets = |column: &[Summand<'_>]| {
            let mut acc = 0;
            column
                .iter()
                .map(|s| {
                    let at = acc;
                    acc += s.components;
                    at
                })
                .collect::<Vec<_>>()
        };
        let (off_in, off_out) = (offsets(&self.summands[p]), offsets(&self.summands[p - 1]));
        let mut triples = Vec::new();
        for (s, summand) in self.summands[p].iter().enumerate() {
            if summand.components != 1 {
                return Err(Error::Mismatch(format!("intersection {:?} is not connected", summand.simplex)));
            }
            for t in 0..summand.simplex.len() {
                let mut face = summand.simplex.clone();
                face.remove(t);
                let f = self.face_index(&face);
                let larger = &self.summands[p - 1][f];
                if larger.components != 1 || !summand.mask.is_subset(&larger.mask) {
                    return Err(Error::Mismatch(format!("{:?} does not sit inside {:?}", summand.simplex, face)));
                }
                triples.push((off_out[f], off_in[s], if t % 2 == 0 { 1 } else { -1 }));
            }
        }
        Ok(SparseMatrix::from_triples(self.rank(p - 1, 0), self.rank(p, 0), triples))
    }

    /// Homology of the bottom row `(E¹_{*,0}, d¹)` over the built columns.
    pub fn bottom_row_homology(&self, degrees: std::ops::RangeInclusive<usize>) -> Result<Vec<HomologyResult>> {
        let dims: Vec<usize> = (0..self.columns()).map(|p| self.rank(p, 0)).collect();
        let maps = (1..self.columns()).map(|p| self.d1(p, 0)).collect::<Result<Vec<_>>>()?;
        // the last built column has no incoming map unless it is the top one
        let top = if self.complete { self.columns() } else { self.columns().saturating_sub(1) };
        let hi = (*degrees.end()).min(top.saturating_sub(1));
        Ok(chain_homology(&dims, |q| maps[q - 1].clone(), *degrees.start()..=hi, Coefficients::Integers))
    }

    /// Rank of `E²_{0,1} = E¹_{0,1} / im d¹`.
    pub fn e2_01(&self) -> usize {
        let image = if self.columns() > 1 {
            rank_over_integers(&self.d1(1, 1).expect("column 1 is built"))
        } else {
            0
        };
        self.rank(0, 1) - image
    }
}

/// Ranks of `E²_{p,0}` for `p = 0, 1, 2`, i.e. the homology of the nerve.
///
/// Also checks that the nerve describes the cover and that the bottom row of
/// the page, built from the intersections themselves, has the same homology.
pub fn e2_row0(n_plus_1: usize, k: usize) -> Result<Vec<HomologyResult>> {
    if !nerve_matches_cover(n_plus_1, k)? {
        return Err(Error::Mismatch(format!(
            "chessboard nerve does not describe the cover of K_{n_plus_1}(Γ_{k})"
        )));
    }
    let direct = homology_range(nerve(n_plus_1, k).complex(), 0..=2, Coefficients::Integers);
    let complex = ConfigComplex::build(n_plus_1, k)?;
    let page = e1_page(&complex, 3);
    let via_page = page.bottom_row_homology(0..=2)?;
    if via_page != direct {
        return Err(Error::Mismatch(format!("bottom row {via_page:?} against nerve {direct:?}")));
    }
    Ok(direct)
}

/// Rank of `E²_{0,1}` for the cover of `K_{n+1}(Γ_k)`.
pub fn e2_01(n_plus_1: usize, k: usize) -> Result<usize> {
    let complex = ConfigComplex::build(n_plus_1, k)?;
    Ok(e1_page(&complex, 1).e2_01())
}

/// How much of `H₁(K_{n+1}(Γ_k))` the covers reach.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationReport {
    pub n_plus_1: usize,
    pub k: usize,
    #[serde(rename = "Q")]
    pub q: usize,
    pub image_rank: usize,
    pub cokernel_rank: usize,
    /// Ambient fundamental cycles completing the image to full rank.
    pub witnesses: Vec<Cycle>,
    /// `rank E²_{0,1} - image_rank`. Reported, never checked.
    pub inferred_d2_rank: usize,
}

/// Image of `⊕ H₁(U_{i,j}) -> H₁(K_{n+1}(Γ_k))`, with the rank of `d²`
/// onto `E²_{0,1}` inferred from the page.
///
/// The rank is first computed modulo a large prime; when that already equals
/// `Q` the image is everything. Otherwise an exact echelon form over Z,
/// pivoting on the largest coordinate, gives the rank, and the coordinates
/// that are never pivots give the witnesses: the greedy completion of the
/// image by ambient basis cycles taken in ascending order.
pub fn generation_check(n_plus_1: usize, k: usize) -> Result<GenerationReport> {
    let complex = ConfigComplex::build(n_plus_1, k)?;
    Ok(generation_report(&complex))
}

fn generation_report(complex: &ConfigComplex) -> GenerationReport {
    let ambient = SubcomplexMask::full(complex).cycle_basis();
    let q = ambient.len();
    let columns = cover_cycle_coordinates(complex, &ambient.forest);
    let (image_rank, pivots) = image_of(q, &columns);
    let witnesses = match pivots {
        None => Vec::new(),
        Some(pivots) => (0..q).filter(|i| !pivots.contains_key(i)).map(|i| ambient.cycles[i].clone()).collect(),
    };
    GenerationReport {
        n_plus_1: complex.n(),
        k: complex.k(),
        q,
        image_rank,
        cokernel_rank: q - image_rank,
        inferred_d2_rank: e1_page(complex, 1).e2_01() - image_rank,
        witnesses,
    }
}

/// Every cover cycle in the ambient fundamental coordinates.
fn cover_cycle_coordinates(complex: &ConfigComplex, forest: &crate::config::SpanningForest) -> Vec<Vec<(usize, i64)>> {
    let covers: Vec<(u8, usize)> = (1..=complex.n() as u8)
        .flat_map(|i| (1..=complex.k()).map(move |j| (i, j)))
        .collect();
    covers
        .par_iter()
        .flat_map_iter(|&(i, j)| {
            let basis = cover_subcomplex(complex, i, j).cycle_basis();
            basis.cycles.into_iter().map(|z| forest.coordinates(&z)).collect::<Vec<_>>()
        })
        .collect()
}

type Pivots = HashMap<usize, Vec<(usize, BigInt)>>;

/// Rank of the span of `columns` in `Z^q`, plus the exact echelon basis
/// keyed by pivot unless the rank was certified full modulo a prime.
fn image_of(q: usize, columns: &[Vec<(usize, i64)>]) -> (usize, Option<Pivots>) {
    let field = PrimeField::new(LARGE_PRIME).expect("prime");
    let matrix = SparseMatrix::from_triples(
        q,
        columns.len(),
        columns
            .iter()
            .enumerate()
            .flat_map(|(col, v)| v.iter().map(move |&(row, c)| (row, col, c)))
            .collect(),
    );
    if rank_mod_p(&matrix, &field) == q {
        return (q, None);
    }
    let pivots = echelon(columns);
    (pivots.len(), Some(pivots))
}

/// Fraction-free echelon form with each vector's pivot at its largest index.
fn echelon(columns: &[Vec<(usize, i64)>]) -> Pivots {
    let mut basis: Pivots = HashMap::new();
    for column in columns {
        let mut v: Vec<(usize, BigInt)> = column.iter().map(|&(i, c)| (i, BigInt::from(c))).collect();
        v.retain(|(_, c)| !c.is_zero());
        while let Some((pivot, lead)) = v.last().cloned() {
            let Some(w) = basis.get(&pivot) else {
                normalize(&mut v);
                basis.insert(pivot, v);
                break;
            };
            let w_lead = &w.last().expect("basis vectors are nonzero").1;
            v = combine(&v, w_lead, w, &-lead);
            normalize(&mut v);
        }
    }
    basis
}

/// `a * v + b * w` on sorted sparse vectors, dropping zeros.
fn combine(v: &[(usize, BigInt)], a: &BigInt, w: &[(usize, BigInt)], b: &BigInt) -> Vec<(usize, BigInt)> {
    let mut out = Vec::with_capacity(v.len() + w.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < w.len() {
        let (idx, val) = match (v.get(i), w.get(j)) {
            (Some(x), Some(y)) if x.0 == y.0 => {
                i += 1;
                j += 1;
                (x.0, a * &x.1 + b * &y.1)
            }
            (Some(x), y) if y.is_none_or(|y| x.0 < y.0) => {
                i += 1;
                (x.0, a * &x.1)
            }
            (_, Some(y)) => {
                j += 1;
                (y.0, b * &y.1)
            }
            _ => unreachable!(),
        };
        if !val.is_zero() {
            out.push((idx, val));
        }
    }
    out
}

/// Divides out the content and makes the leading entry positive.
fn normalize(v: &mut [(usize, BigInt)]) {
    let g = v.iter().fold(BigInt::zero(), |g, (_, c)| g.gcd(c));
    if g.is_zero() {
        return;
    }
    let g = if v.last().is_some_and(|(_, c)| c.is_negative()) { -g } else { g };
    for (_, c) in v.iter_mut() {
        *c /= &g;
    }
}

/// One line of the generation-degree table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationRow {
    pub k: usize,
    pub n_plus_1: usize,
    #[serde(rename = "Q")]
    pub q: usize,
    pub image_rank: usize,
    pub cokernel_rank: usize,
    pub nerve_beta1: usize,
}

/// Generation check for `n + 1 = 2..=max_n_plus_1`.
pub fn generation_degree_table(k: usize, max_n_plus_1: usize) -> Result<Vec<GenerationRow>> {
    (2..=max_n_plus_1)
        .map(|n1| {
            let report = generation_check(n1, k)?;
            let h1 = homology_range(nerve(n1, k).complex(), 1..=1, Coefficients::Integers);
            let nerve_beta1 = h1.first().map_or(0, |h| h.betti);
            Ok(GenerationRow {
                k,
                n_plus_1: n1,
                q: report.q,
                image_rank: report.image_rank,
                cokernel_rank: report.cokernel_rank,
                nerve_beta1,
            })
        })
        .collect()
}

/// Largest `n + 1` in the table with a nonzero cokernel.
pub fn generation_degree(rows: &[GenerationRow]) -> Option<usize> {
    rows.iter().filter(|r| r.cokernel_rank > 0).map(|r| r.n_plus_1).max()
}

/// One line of the presentation-evidence table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationRow {
    pub k: usize,
    pub n_plus_1: usize,
    pub beta2: usize,
    /// Invariant factors of the torsion of `H₂`, joined by `;`.
    pub torsion: String,
}

/// Integral `H₂` of `nerve(n + 1, k)` for each `n + 1` in `range`.
pub fn presentation_evidence(k: usize, range: std::ops::RangeInclusive<usize>) -> Vec<PresentationRow> {
    range
        .map(|n1| {
            let h = homology_range(nerve(n1, k).complex(), 2..=2, Coefficients::Integers);
            let (beta2, torsion) = h.first().map_or((0, String::new()), |h| {
                (h.betti, h.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(";"))
            });
            PresentationRow {
                k,
                n_plus_1: n1,
                beta2,
                torsion,
            }
        })
        .collect()
}

/// CSV with a header row taken from the field names.
pub fn table_csv<T: Serialize>(rows: &[T]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
}
