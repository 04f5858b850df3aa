//! The cube complex model of ordered configurations on a star graph.
//!
//! For a star graph with one essential vertex the model is a graph: its
//! vertices are particle placements in which every particle sits on the
//! central vertex, on a leaf, or in the interior of an edge whose leaf is
//! occupied, and its edges move the particle at the center to the slot of an
//! edge nearest the center (the leaf when that edge is otherwise empty).

mod cover;
mod export;
mod graph;
mod maps;
mod state;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
pub use cover::{cover_intersection, cover_subcomplex, SubcomplexMask};
pub use export::{ComplexJson, DOT_VERTEX_LIMIT};
pub use graph::{betti, cycle_basis, Cycle, CycleBasis, SpanningForest};
pub use maps::{insertion_map, permutation_map, CellularMap, Permutation};
pub use state::{EdgeState, Particle, ParticleState};

/// Vertex cap used when `STARCONFIG_MAX_VERTICES` is unset.
pub const DEFAULT_MAX_VERTICES: u128 = 10_000_000;

/// Vertex cap from `STARCONFIG_MAX_VERTICES`, or the default.
pub fn max_vertices() -> u128 {
    std::env::var("STARCONFIG_MAX_VERTICES")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_VERTICES)
}

/// The star graph with `k` leaves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StarGraph {
    k: usize,
}

impl StarGraph {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("a star graph needs at least one leaf".into()));
        }
        Ok(StarGraph { k })
    }

    pub fn leaves(&self) -> usize {
        self.k
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    TowardCenter,
    AwayFromCenter,
}

/// A 1-cell. Stored once, oriented toward the center: `source` has the
/// moving particle in the near-center slot of `edge`, `target` has it on the
/// central vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Move {
    pub source: u32,
    pub target: u32,
    pub particle: Particle,
    /// 1-based edge index.
    pub edge: u8,
    pub direction: Direction,
}

const NO_EDGE: u32 = u32::MAX;

/// `K_n(Γ_k)` with deterministic vertex and edge ids.
#[derive(Debug, Clone)]
pub struct ConfigComplex {
    n: usize,
    graph: StarGraph,
    key_data: Vec<u8>,
    key_offsets: Vec<usize>,
    /// First edge id leaving a center-occupied vertex; `NO_EDGE` otherwise.
    edge_base: Vec<u32>,
    edges: Vec<Move>,
    adj_offsets: Vec<usize>,
    adj_edges: Vec<u32>,
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

fn binomial(n: usize, r: usize) -> BigInt {
    if r > n {
        return BigInt::zero();
    }
    (0..r).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Number of vertices of `K_n(Γ_k)`: arrangements of the particles into `k`
/// ordered stacks, with or without one particle at the center.
pub fn vertex_count(n: usize, k: usize) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let off_center = factorial(n) * binomial(n + k - 1, k - 1);
    let with_center = BigInt::from(n) * factorial(n - 1) * binomial(n + k - 2, k - 1);
    off_center + with_center
}

/// Number of edges of `K_n(Γ_k)`.
pub fn edge_count(n: usize, k: usize) -> BigInt {
    if n == 0 {
        return BigInt::zero();
    }
    BigInt::from(n * k) * factorial(n - 1) * binomial(n + k - 2, k - 1)
}

/// Rank of `H_1(F_n(Γ_k))`: `1 + (nk - 2n - k + 1)(n + k - 2)!/(k - 1)!`.
pub fn ghrist_rank(n: usize, k: usize) -> Result<BigInt> {
    if k < 3 {
        return Err(Error::Domain(format!("rank formula needs k >= 3, got k = {k}")));
    }
    if n == 0 {
        return Err(Error::Domain("rank formula needs n >= 1".into()));
    }
    let (n, k) = (BigInt::from(n), BigInt::from(k));
    let coeff = &n * &k - BigInt::from(2) * &n - &k + 1;
    let top: usize = (&n + &k - 2u32).try_into().expect("small");
    let bottom: usize = (&k - 1u32).try_into().expect("small");
    let ratio = factorial(top) / factorial(bottom);
    Ok(BigInt::one() + coeff * ratio)
}

impl ConfigComplex {
    /// Builds `K_n(Γ_k)` under the cap from [`max_vertices`].
    pub fn build(n: usize, k: usize) -> Result<Self> {
        Self::build_with_cap(n, k, max_vertices())
    }

    pub fn build_with_cap(n: usize, k: usize, cap: u128) -> Result<Self> {
        let graph = StarGraph::new(k)?;
        let projected = vertex_count(n, k);
        let projected: u128 = projected.try_into().unwrap_or(u128::MAX);
        if projected > cap {
            return Err(Error::ResourceLimit { projected, cap });
        }
        if n > Particle::MAX as usize || k > u8::MAX as usize {
            return Err(Error::Domain(format!("n = {n}, k = {k} exceeds label width")));
        }

        let mut keys: Vec<Vec<u8>> = Vec::with_capacity(projected as usize);
        let centers = std::iter::once(None).chain((1..=n as u8).map(Some));
        for center in centers {
            let mut stacks: Vec<Vec<Particle>> = vec![Vec::new(); k];
            let rest: Vec<Particle> = (1..=n as u8).filter(|&p| Some(p) != center).collect();
            place(&rest, &mut stacks, &mut |stacks| {
                let state = ParticleState {
                    center,
                    edges: stacks
                        .iter()
                        .map(|s| match s.split_last() {
                            None => EdgeState::default(),
                            Some((leaf, inner)) => EdgeState {
                                leaf: Some(*leaf),
                                interior: inner.to_vec(),
                            },
                        })
                        .collect(),
                };
                keys.push(state.encode());
            });
        }
        keys.sort_unstable();
        debug_assert!(keys.windows(2).all(|w| w[0] < w[1]));

        let mut key_data = Vec::with_capacity(keys.iter().map(|k| k.len()).sum());
        let mut key_offsets = Vec::with_capacity(keys.len() + 1);
        key_offsets.push(0);
        for key in &keys {
            key_data.extend_from_slice(key);
            key_offsets.push(key_data.len());
        }
        drop(keys);

        let mut c = ConfigComplex {
            n,
            graph,
            key_data,
            key_offsets,
            edge_base: Vec::new(),
            edges: Vec::new(),
            adj_offsets: Vec::new(),
            adj_edges: Vec::new(),
        };
        c.build_edges();
        Ok(c)
    }

    fn build_edges(&mut self) {
        let v_count = self.vertex_count();
        let mut edge_base = vec![NO_EDGE; v_count];
        let mut edges = Vec::new();
        for (v, base) in edge_base.iter_mut().enumerate() {
            let state = self.state(v as u32);
            let Some(p) = state.center else { continue };
            *base = edges.len() as u32;
            for j in 0..self.k() {
                let mut source = state.clone();
                source.center = None;
                source.edges[j].push_near_center(p);
                let s = self.vertex_id(&source).expect("moved state is a vertex");
                edges.push(Move {
                    source: s,
                    target: v as u32,
                    particle: p,
                    edge: (j + 1) as u8,
                    direction: Direction::TowardCenter,
                });
            }
        }
        let mut degree = vec![0usize; v_count];
        for e in &edges {
            degree[e.source as usize] += 1;
            degree[e.target as usize] += 1;
        }
        let mut adj_offsets = Vec::with_capacity(v_count + 1);
        adj_offsets.push(0);
        for d in &degree {
            adj_offsets.push(adj_offsets.last().unwrap() + d);
        }
        let mut fill = adj_offsets[..v_count].to_vec();
        let mut adj_edges = vec![0u32; *adj_offsets.last().unwrap()];
        for (id, e) in edges.iter().enumerate() {
            for v in [e.source, e.target] {
                adj_edges[fill[v as usize]] = id as u32;
                fill[v as usize] += 1;
            }
        }
        self.edge_base = edge_base;
        self.edges = edges;
        self.adj_offsets = adj_offsets;
        self.adj_edges = adj_edges;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.graph.leaves()
    }

    pub fn graph(&self) -> StarGraph {
        self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.key_offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical byte key of vertex `v`.
    pub fn key(&self, v: u32) -> &[u8] {
        let v = v as usize;
        &self.key_data[self.key_offsets[v]..self.key_offsets[v + 1]]
    }

    pub fn state(&self, v: u32) -> ParticleState {
        ParticleState::decode(self.key(v), self.k()).expect("stored keys are well formed")
    }

    pub fn states(&self) -> impl Iterator<Item = ParticleState> + '_ {
        (0..self.vertex_count() as u32).map(|v| self.state(v))
    }

    /// Leaf occupant of 0-based edge `j` at vertex `v`, read from the key.
    pub fn leaf_at(&self, v: u32, j: usize) -> Option<Particle> {
        let key = self.key(v);
        let mut pos = 1;
        for _ in 0..j {
            pos += 2 + key[pos + 1] as usize;
        }
        (key[pos] != 0).then_some(key[pos])
    }

    /// Vertex id by binary search on canonical keys.
    pub fn vertex_id_by_key(&self, key: &[u8]) -> Option<u32> {
        let (mut lo, mut hi) = (0usize, self.vertex_count());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.key(mid as u32).cmp(key) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return Some(mid as u32),
            }
        }
        None
    }

    pub fn vertex_id(&self, state: &ParticleState) -> Option<u32> {
        self.vertex_id_by_key(&state.encode())
    }

    pub fn edges(&self) -> &[Move] {
        &self.edges
    }

    pub fn edge(&self, e: u32) -> &Move {
        &self.edges[e as usize]
    }

    /// Id of the move taking the center particle of `center_vertex` onto
    /// 0-based edge `j`.
    pub fn edge_from_center(&self, center_vertex: u32, j: usize) -> Option<u32> {
        let base = self.edge_base[center_vertex as usize];
        (base != NO_EDGE && j < self.k()).then(|| base + j as u32)
    }

    /// Edge ids incident to `v`, ascending.
    pub fn incident_edges(&self, v: u32) -> &[u32] {
        let v = v as usize;
        &self.adj_edges[self.adj_offsets[v]..self.adj_offsets[v + 1]]
    }

    /// The cellular boundary of a 1-chain, as a vertex chain.
    pub fn boundary(&self, chain: &[(u32, i64)]) -> Vec<(u32, i64)> {
        let mut acc: std::collections::BTreeMap<u32, i64> = Default::default();
        for &(e, c) in chain {
            let m = self.edge(e);
            *acc.entry(m.target).or_default() += c;
            *acc.entry(m.source).or_default() -= c;
        }
        acc.into_iter().filter(|(_, c)| *c != 0).collect()
    }
}

/// Calls `visit` once for every arrangement of `rest` into the ordered stacks.
fn place<F: FnMut(&[Vec<Particle>])>(rest: &[Particle], stacks: &mut Vec<Vec<Particle>>, visit: &mut F) {
    let Some((&p, tail)) = rest.split_first() else {
        visit(stacks);
        return;
    };
    for j in 0..stacks.len() {
        for pos in 0..=stacks[j].len() {
            stacks[j].insert(pos, p);
            place(tail, stacks, visit);
            stacks[j].remove(pos);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Every assignment of labels to center, leaves and interior slots of
    /// bounded length, filtered by the state invariants.
    fn brute_force_states(n: usize, k: usize) -> Vec<ParticleState> {
        // slots: 0 = center, then per edge (leaf, interior positions 0..n)
        let mut out = Vec::new();
        let slots = 1 + k * (1 + n);
        let mut assignment = vec![0usize; n];
        loop {
            let mut taken = vec![false; slots];
            if assignment.iter().all(|&s| !std::mem::replace(&mut taken[s], true)) {
                let mut state = ParticleState::empty(k);
                let mut interior_slots: Vec<Vec<(usize, Particle)>> = vec![Vec::new(); k];
                for (i, &s) in assignment.iter().enumerate() {
                    let p = (i + 1) as Particle;
                    if s == 0 {
                        state.center = Some(p);
                    } else {
                        let (j, within) = ((s - 1) / (1 + n), (s - 1) % (1 + n));
                        if within == 0 {
                            state.edges[j].leaf = Some(p);
                        } else {
                            interior_slots[j].push((within - 1, p));
                        }
                    }
                }
                // interior positions must be packed 0..len
                let packed = interior_slots.iter_mut().all(|slots| {
                    slots.sort();
                    slots.iter().enumerate().all(|(i, (pos, _))| *pos == i)
                });
                if packed {
                    for (j, slots) in interior_slots.into_iter().enumerate() {
                        state.edges[j].interior = slots.into_iter().map(|(_, p)| p).collect();
                    }
                    if state.is_valid(n) {
                        out.push(state);
                    }
                }
            }
            // odometer
            let mut i = 0;
            loop {
                if i == n {
                    return out;
                }
                assignment[i] += 1;
                if assignment[i] < slots {
                    break;
                }
                assignment[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for (n, k) in [(0, 3), (1, 3), (2, 3), (2, 4), (3, 3), (3, 2), (2, 1)] {
            let c = ConfigComplex::build(n, k).unwrap();
            let mut expected: Vec<Vec<u8>> = brute_force_states(n, k).iter().map(|s| s.encode()).collect();
            expected.sort();
            let got: Vec<Vec<u8>> = (0..c.vertex_count() as u32).map(|v| c.key(v).to_vec()).collect();
            assert_eq!(got, expected, "n={n} k={k}");
        }
    }

    #[test]
    fn small_cell_counts() {
        let c = ConfigComplex::build(0, 3).unwrap();
        assert_eq!((c.vertex_count(), c.edge_count()), (1, 0));
        let c = ConfigComplex::build(1, 3).unwrap();
        assert_eq!((c.vertex_count(), c.edge_count()), (4, 3));
        let c = ConfigComplex::build(2, 3).unwrap();
        assert_eq!((c.vertex_count(), c.edge_count()), (18, 18));
        for (n, k) in [(3, 4), (4, 3), (2, 5)] {
            let c = ConfigComplex::build(n, k).unwrap();
            assert_eq!(BigInt::from(c.vertex_count()), vertex_count(n, k));
            assert_eq!(BigInt::from(c.edge_count()), edge_count(n, k));
        }
    }

    #[test]
    fn moves_change_one_particle() {
        let c = ConfigComplex::build(3, 3).unwrap();
        for m in c.edges() {
            let (s, t) = (c.state(m.source), c.state(m.target));
            assert_eq!(t.center, Some(m.particle));
            assert_eq!(s.center, None);
            let mut back = s.clone();
            assert_eq!(back.edges[m.edge as usize - 1].pop_near_center(), Some(m.particle));
            back.center = Some(m.particle);
            assert_eq!(back, t);
        }
        assert!(c.states().all(|s| s.is_valid(3)));
    }

    #[test]
    fn resource_cap() {
        let err = ConfigComplex::build_with_cap(3, 4, 100).unwrap_err();
        assert_eq!(err, Error::ResourceLimit { projected: 180, cap: 100 });
        assert!(ConfigComplex::build(2, 0).is_err());
    }

    #[test]
    fn ghrist_values() {
        for k in 3..8 {
            assert_eq!(ghrist_rank(1, k).unwrap(), BigInt::zero());
        }
        assert_eq!(ghrist_rank(2, 3).unwrap(), BigInt::from(1));
        assert_eq!(ghrist_rank(2, 4).unwrap(), BigInt::from(5));
        assert_eq!(ghrist_rank(3, 4).unwrap(), BigInt::from(61));
        assert_eq!(ghrist_rank(2, 5).unwrap(), BigInt::from(11));
        assert!(ghrist_rank(2, 2).is_err());
    }

    #[test]
    fn lookup_round_trip() {
        let c = ConfigComplex::build(3, 3).unwrap();
        for v in 0..c.vertex_count() as u32 {
            assert_eq!(c.vertex_id(&c.state(v)), Some(v));
            for j in 0..3 {
                assert_eq!(c.leaf_at(v, j), c.state(v).edges[j].leaf);
            }
        }
    }
}
