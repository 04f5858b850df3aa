//! Nerves of the outermost-particle cover and the star cover of a nerve.
//!
//! The nerve of `{U_{i,j}}` on `K_m(Γ_k)` is the chessboard complex on an
//! `m x k` board: vertex `(i, j)` is the cover element "particle `i` is
//! outermost on edge `j`", and a set of vertices spans a simplex when no two
//! share a row or a column. Vertex `(i, j)` has id `(i - 1) * k + (j - 1)`.

use serde::Serialize;

use crate::config::{cover_subcomplex, ConfigComplex, SubcomplexMask};
use crate::error::{Error, Result};
use crate::homology::{homology_range, Coefficients, HomologyResult, SimplicialComplex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NerveComplex {
    rows: usize,
    cols: usize,
    complex: SimplicialComplex,
}

impl NerveComplex {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    /// Id of the 1-based cell `(row, col)`.
    pub fn vertex(&self, row: usize, col: usize) -> u32 {
        debug_assert!((1..=self.rows).contains(&row) && (1..=self.cols).contains(&col));
        ((row - 1) * self.cols + (col - 1)) as u32
    }

    /// 1-based `(row, col)` of a vertex id.
    pub fn cell(&self, v: u32) -> (usize, usize) {
        let v = v as usize;
        (v / self.cols + 1, v % self.cols + 1)
    }

    /// Non-attacking rook test for a set of vertex ids.
    pub fn is_rook_set(&self, vertices: &[u32]) -> bool {
        let mut rows = vec![false; self.rows + 1];
        let mut cols = vec![false; self.cols + 1];
        vertices.iter().all(|&v| {
            let (r, c) = self.cell(v);
            !std::mem::replace(&mut rows[r], true) && !std::mem::replace(&mut cols[c], true)
        })
    }
}

/// `C(m, p+1) C(k, p+1) (p+1)!`, the number of `p`-simplices of `nerve(m, k)`.
pub fn simplex_count(m: usize, k: usize, p: usize) -> u128 {
    let choose = |n: usize, r: usize| -> u128 {
        if r > n {
            0
        } else {
            (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
        }
    };
    let s = p + 1;
    choose(m, s) * choose(k, s) * (1..=s as u128).product::<u128>()
}

/// The chessboard complex on an `m x k` board.
pub fn nerve(m: usize, k: usize) -> NerveComplex {
    assert!(m >= 1 && k >= 1, "board must be nonempty");
    let top = m.min(k);
    let mut groups: Vec<Vec<Vec<u32>>> = vec![Vec::new(); top];
    let mut current = Vec::new();
    let mut used_cols = vec![false; k];
    rook_sets(0, m, k, &mut used_cols, &mut current, &mut groups);
    let complex = SimplicialComplex::from_closed(groups).expect("rook sets are closed under faces");
    NerveComplex { rows: m, cols: k, complex }
}

fn rook_sets(row: usize, m: usize, k: usize, used: &mut [bool], current: &mut Vec<u32>, out: &mut [Vec<Vec<u32>>]) {
    if row == m {
        if !current.is_empty() {
            out[current.len() - 1].push(current.clone());
        }
        return;
    }
    rook_sets(row + 1, m, k, used, current, out);
    for col in 0..k {
        if !used[col] {
            used[col] = true;
            current.push((row * k + col) as u32);
            rook_sets(row + 1, m, k, used, current, out);
            current.pop();
            used[col] = false;
        }
    }
}

/// Swaps the roles of rows and columns, `(i, j) -> (j, i)`.
pub fn transpose(nv: &NerveComplex) -> NerveComplex {
    let (m, k) = (nv.rows, nv.cols);
    let complex = nv.complex.relabel(|v| {
        let (i, j) = (v as usize / k, v as usize % k);
        (j * m + i) as u32
    });
    NerveComplex {
        rows: k,
        cols: m,
        complex,
    }
}

/// Closed star of vertex `(row, edge)` in a nerve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarCoverElement {
    pub edge: usize,
    pub row: usize,
    pub complex: SimplicialComplex,
}

impl SimplicialComplex {
    /// Simplices `s` with `s ∪ {v}` in the complex.
    pub fn closed_star(&self, v: u32) -> SimplicialComplex {
        let groups: Vec<Vec<Vec<u32>>> = (0..=self.dim().unwrap_or(0))
            .map(|d| {
                self.iter(d)
                    .filter(|s| {
                        if s.contains(&v) {
                            return true;
                        }
                        let mut joined = s.to_vec();
                        joined.push(v);
                        joined.sort_unstable();
                        self.contains(&joined)
                    })
                    .map(|s| s.to_vec())
                    .collect()
            })
            .collect();
        SimplicialComplex::from_closed(groups).expect("a closed star is a subcomplex")
    }
}

/// One closed star per row, all centered in column `edge` (1-based).
pub fn star_cover(nv: &NerveComplex, edge: usize) -> Result<Vec<StarCoverElement>> {
    if edge == 0 || edge > nv.cols {
        return Err(Error::Domain(format!("edge {edge} out of range 1..={}", nv.cols)));
    }
    Ok((1..=nv.rows)
        .map(|row| StarCoverElement {
            edge,
            row,
            complex: nv.complex.closed_star(nv.vertex(row, edge)),
        })
        .collect())
}

/// Intersection of at least two stars with distinct rows and a common edge.
pub fn star_intersection(stars: &[&StarCoverElement]) -> Result<SimplicialComplex> {
    if stars.len() < 2 {
        return Err(Error::Domain("need at least two stars".into()));
    }
    let edge = stars[0].edge;
    let mut rows: Vec<usize> = stars.iter().map(|s| s.row).collect();
    rows.sort_unstable();
    rows.dedup();
    if rows.len() != stars.len() || stars.iter().any(|s| s.edge != edge) {
        return Err(Error::Domain("stars must have distinct rows and a common edge".into()));
    }
    Ok(stars[1..]
        .iter()
        .fold(stars[0].complex.clone(), |acc, s| acc.intersection(&s.complex)))
}

/// Nerve of a finite family of subcomplexes: vertex `t` is the `t`-th
/// element, and a set spans a simplex when the elements share a simplex.
pub fn nerve_of_family(family: &[SimplicialComplex]) -> SimplicialComplex {
    let mut groups: Vec<Vec<Vec<u32>>> = Vec::new();
    let mut current = Vec::new();
    grow_family(family, 0, None, &mut current, &mut groups);
    if groups.is_empty() {
        return SimplicialComplex::empty();
    }
    SimplicialComplex::from_closed(groups).expect("nonempty intersections are closed under subsets")
}

fn grow_family(
    family: &[SimplicialComplex],
    start: usize,
    acc: Option<&SimplicialComplex>,
    current: &mut Vec<u32>,
    out: &mut Vec<Vec<Vec<u32>>>,
) {
    for t in start..family.len() {
        let next = match acc {
            None => family[t].clone(),
            Some(a) => a.intersection(&family[t]),
        };
        if next.is_empty() {
            continue;
        }
        current.push(t as u32);
        if out.len() < current.len() {
            out.push(Vec::new());
        }
        out[current.len() - 1].push(current.clone());
        grow_family(family, t + 1, Some(&next), current, out);
        current.pop();
    }
}

/// Checks that the chessboard rule reproduces the intersection pattern of
/// `{U_{i,j}}` on `K_m(Γ_k)` for every vertex set of size at most
/// `min(m, k)`, and that every nonempty intersection is connected.
pub fn nerve_matches_cover(m: usize, k: usize) -> Result<bool> {
    let c = ConfigComplex::build(m, k)?;
    let nv = nerve(m, k);
    let covers: Vec<SubcomplexMask<'_>> = (1..=m)
        .flat_map(|i| (1..=k).map(move |j| (i, j)))
        .map(|(i, j)| cover_subcomplex(&c, i as u8, j))
        .collect();
    let limit = m.min(k);
    let mut current = Vec::new();
    Ok(check_subsets(&nv, &covers, 0, None, limit, &mut current))
}

fn check_subsets<'a>(
    nv: &NerveComplex,
    covers: &[SubcomplexMask<'a>],
    start: usize,
    acc: Option<&SubcomplexMask<'a>>,
    limit: usize,
    current: &mut Vec<u32>,
) -> bool {
    if current.len() == limit {
        return true;
    }
    for v in start..covers.len() {
        let next = match acc {
            None => covers[v].clone(),
            Some(a) => a.intersection(&covers[v]),
        };
        current.push(v as u32);
        let simplex = nv.is_rook_set(current);
        let nonempty = !next.is_empty();
        let ok = simplex == nonempty && (!nonempty || next.betti().0 == 1);
        let deeper = ok && (!nonempty || check_subsets(nv, covers, v + 1, Some(&next), limit, current));
        current.pop();
        if !deeper {
            return false;
        }
    }
    true
}

/// One line of a homology table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyRow {
    pub m: usize,
    pub k: usize,
    pub degree: usize,
    pub betti: usize,
    /// Invariant factors joined by `;`.
    pub torsion: String,
    pub coeff: String,
}

impl HomologyRow {
    pub fn new(m: usize, k: usize, h: &HomologyResult) -> Self {
        HomologyRow {
            m,
            k,
            degree: h.degree,
            betti: h.betti,
            torsion: h.torsion.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(";"),
            coeff: h.coeff.to_string(),
        }
    }
}

/// Homology of `nerve(m, k)` in the given degrees (clipped to its dimension).
pub fn nerve_homology(m: usize, k: usize, degrees: std::ops::RangeInclusive<usize>, coeff: Coefficients) -> Vec<HomologyResult> {
    homology_range(nerve(m, k).complex(), degrees, coeff)
}

/// CSV with header `m,k,degree,betti,torsion,coeff`.
pub fn homology_csv(rows: &[HomologyRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
}

/// Intersection of the covers named by the vertices of a nerve simplex.
pub fn cover_mask_for<'a>(c: &'a ConfigComplex, nv: &NerveComplex, simplex: &[u32]) -> SubcomplexMask<'a> {
    let masks: Vec<SubcomplexMask<'a>> = simplex
        .iter()
        .map(|&v| {
            let (i, j) = nv.cell(v);
            cover_subcomplex(c, i as u8, j)
        })
        .collect();
    crate::config::cover_intersection(&masks)
}
