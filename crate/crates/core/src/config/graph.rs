//! Homology of 1-dimensional complexes: components and fundamental cycles.

use std::collections::VecDeque;

use petgraph::unionfind::UnionFind;

use super::cover::SubcomplexMask;
use super::ConfigComplex;

const NONE: u32 = u32::MAX;

/// An integral 1-chain as `(edge id, coefficient)` pairs sorted by edge id.
pub type Cycle = Vec<(u32, i64)>;

/// `(b0, b1)` of the whole complex.
pub fn betti(c: &ConfigComplex) -> (usize, usize) {
    SubcomplexMask::full(c).betti()
}

/// Fundamental cycles of a breadth-first spanning forest of the whole complex.
pub fn cycle_basis(c: &ConfigComplex) -> CycleBasis {
    SubcomplexMask::full(c).cycle_basis()
}

impl SubcomplexMask<'_> {
    /// Components by union-find, then `b1 = |E| - |V| + b0`.
    pub fn betti(&self) -> (usize, usize) {
        let c = self.parent();
        let mut uf = UnionFind::<u32>::new(c.vertex_count());
        let mut merges = 0;
        for e in self.edges() {
            let m = c.edge(e);
            if uf.union(m.source, m.target) {
                merges += 1;
            }
        }
        let b0 = self.vertex_count() - merges;
        let b1 = self.edge_count() + b0 - self.vertex_count();
        (b0, b1)
    }

    pub fn spanning_forest(&self) -> SpanningForest {
        SpanningForest::new(self)
    }

    pub fn cycle_basis(&self) -> CycleBasis {
        let forest = self.spanning_forest();
        let cycles = forest.non_tree.iter().map(|&e| forest.fundamental_cycle(self.parent(), e)).collect();
        CycleBasis { forest, cycles }
    }
}

/// Breadth-first spanning forest, roots taken in ascending vertex order and
/// neighbors in ascending edge order.
#[derive(Debug, Clone)]
pub struct SpanningForest {
    parent_edge: Vec<u32>,
    parent: Vec<u32>,
    depth: Vec<u32>,
    components: usize,
    /// Retained edges outside the forest, ascending.
    non_tree: Vec<u32>,
    /// Position of each edge in `non_tree`, or `NONE`.
    coordinate: Vec<u32>,
}

impl SpanningForest {
    fn new(mask: &SubcomplexMask<'_>) -> Self {
        let c = mask.parent();
        let (nv, ne) = (c.vertex_count(), c.edge_count());
        let mut parent_edge = vec![NONE; nv];
        let mut parent = vec![NONE; nv];
        let mut depth = vec![0u32; nv];
        let mut seen = vec![false; nv];
        let mut is_tree = vec![false; ne];
        let mut components = 0;
        let mut queue = VecDeque::new();
        for root in mask.vertices() {
            if seen[root as usize] {
                continue;
            }
            components += 1;
            seen[root as usize] = true;
            queue.push_back(root);
            while let Some(v) = queue.pop_front() {
                for &e in c.incident_edges(v) {
                    if !mask.has_edge(e) {
                        continue;
                    }
                    let m = c.edge(e);
                    let w = if m.source == v { m.target } else { m.source };
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        parent_edge[w as usize] = e;
                        parent[w as usize] = v;
                        depth[w as usize] = depth[v as usize] + 1;
                        is_tree[e as usize] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        let non_tree: Vec<u32> = mask.edges().filter(|&e| !is_tree[e as usize]).collect();
        let mut coordinate = vec![NONE; ne];
        for (i, &e) in non_tree.iter().enumerate() {
            coordinate[e as usize] = i as u32;
        }
        SpanningForest {
            parent_edge,
            parent,
            depth,
            components,
            non_tree,
            coordinate,
        }
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn non_tree_edges(&self) -> &[u32] {
        &self.non_tree
    }

    /// Cycle made of non-tree edge `e` and the forest path closing it up.
    /// The coefficient on `e` is `+1`.
    pub fn fundamental_cycle(&self, c: &ConfigComplex, e: u32) -> Cycle {
        let m = c.edge(e);
        // boundary of e is target - source; walk target -> source in the forest
        let mut chain = vec![(e, 1i64)];
        let (mut a, mut b) = (m.target, m.source);
        let mut tail = Vec::new();
        while a != b {
            if self.depth[a as usize] >= self.depth[b as usize] {
                let f = self.parent_edge[a as usize];
                // stepping a -> parent(a)
                let sign = if c.edge(f).source == a { 1 } else { -1 };
                chain.push((f, sign));
                a = self.parent[a as usize];
            } else {
                let f = self.parent_edge[b as usize];
                // stepping parent(b) -> b, collected in reverse
                let sign = if c.edge(f).source == b { -1 } else { 1 };
                tail.push((f, sign));
                b = self.parent[b as usize];
            }
        }
        chain.extend(tail);
        chain.sort_unstable();
        chain
    }

    /// Coordinates of a cycle of the masked subcomplex in the fundamental
    /// basis: its coefficients on the non-tree edges.
    pub fn coordinates(&self, cycle: &[(u32, i64)]) -> Vec<(usize, i64)> {
        let mut out: Vec<(usize, i64)> = cycle
            .iter()
            .filter_map(|&(e, coeff)| {
                let i = self.coordinate[e as usize];
                (i != NONE).then_some((i as usize, coeff))
            })
            .collect();
        out.sort_unstable();
        out
    }
}

/// Fundamental cycles in the order of their non-tree edges.
#[derive(Debug, Clone)]
pub struct CycleBasis {
    pub forest: SpanningForest,
    pub cycles: Vec<Cycle>,
}

impl CycleBasis {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ghrist_rank;
    use num_bigint::BigInt;

    #[test]
    fn small_betti_numbers() {
        for k in 3..6 {
            assert_eq!(betti(&ConfigComplex::build(1, k).unwrap()), (1, 0));
        }
        assert_eq!(betti(&ConfigComplex::build(2, 3).unwrap()), (1, 1));
        assert_eq!(betti(&ConfigComplex::build(3, 4).unwrap()), (1, 61));
        // two leaves: a segment, contractible pieces per ordering
        assert_eq!(betti(&ConfigComplex::build(2, 2).unwrap()).1, 0);
    }

    #[test]
    fn cycles_are_closed_and_counted() {
        for (n, k) in [(1, 3), (2, 3), (2, 4), (3, 3), (3, 4)] {
            let c = ConfigComplex::build(n, k).unwrap();
            let basis = cycle_basis(&c);
            assert_eq!(BigInt::from(basis.len()), ghrist_rank(n, k).unwrap());
            assert_eq!(basis.forest.components(), 1);
            for (i, z) in basis.cycles.iter().enumerate() {
                assert!(c.boundary(z).is_empty(), "cycle {i} has boundary");
                assert_eq!(basis.forest.coordinates(z), vec![(i, 1)]);
            }
        }
    }

    #[test]
    fn basis_lengths_from_the_appendix() {
        assert!(cycle_basis(&ConfigComplex::build(1, 3).unwrap()).is_empty());
        assert_eq!(cycle_basis(&ConfigComplex::build(2, 3).unwrap()).len(), 1);
        assert_eq!(cycle_basis(&ConfigComplex::build(2, 4).unwrap()).len(), 5);
    }

    #[test]
    fn forest_components_agree_with_union_find() {
        let c = ConfigComplex::build(3, 3).unwrap();
        let mask = SubcomplexMask::induced(&c, |v| v % 3 != 0);
        assert_eq!(mask.spanning_forest().components(), mask.betti().0);
        assert_eq!(mask.cycle_basis().len(), mask.betti().1);
    }
}
