use fixedbitset::FixedBitSet;

use super::{ConfigComplex, Particle};

/// A subcomplex of a [`ConfigComplex`] given by vertex and edge bitmasks.
///
/// Every retained edge has both endpoints retained.
#[derive(Debug, Clone)]
pub struct SubcomplexMask<'a> {
    parent: &'a ConfigComplex,
    vertices: FixedBitSet,
    edges: FixedBitSet,
}

impl PartialEq for SubcomplexMask<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.parent, other.parent) && self.vertices == other.vertices && self.edges == other.edges
    }
}

impl<'a> SubcomplexMask<'a> {
    /// Panics if an edge is retained without both endpoints.
    pub fn new(parent: &'a ConfigComplex, vertices: FixedBitSet, edges: FixedBitSet) -> Self {
        assert_eq!(vertices.len(), parent.vertex_count());
        assert_eq!(edges.len(), parent.edge_count());
        for e in edges.ones() {
            let m = parent.edge(e as u32);
            assert!(
                vertices.contains(m.source as usize) && vertices.contains(m.target as usize),
                "edge {e} retained without its endpoints"
            );
        }
        SubcomplexMask {
            parent,
            vertices,
            edges,
        }
    }

    pub fn full(parent: &'a ConfigComplex) -> Self {
        let mut vertices = FixedBitSet::with_capacity(parent.vertex_count());
        vertices.insert_range(..);
        let mut edges = FixedBitSet::with_capacity(parent.edge_count());
        edges.insert_range(..);
        SubcomplexMask {
            parent,
            vertices,
            edges,
        }
    }

    pub fn empty(parent: &'a ConfigComplex) -> Self {
        SubcomplexMask {
            parent,
            vertices: FixedBitSet::with_capacity(parent.vertex_count()),
            edges: FixedBitSet::with_capacity(parent.edge_count()),
        }
    }

    /// Full subcomplex on the vertices accepted by `keep`.
    pub fn induced<F: Fn(u32) -> bool>(parent: &'a ConfigComplex, keep: F) -> Self {
        let mut vertices = FixedBitSet::with_capacity(parent.vertex_count());
        for v in 0..parent.vertex_count() {
            if keep(v as u32) {
                vertices.insert(v);
            }
        }
        let mut edges = FixedBitSet::with_capacity(parent.edge_count());
        for (id, m) in parent.edges().iter().enumerate() {
            if vertices.contains(m.source as usize) && vertices.contains(m.target as usize) {
                edges.insert(id);
            }
        }
        SubcomplexMask {
            parent,
            vertices,
            edges,
        }
    }

    pub fn parent(&self) -> &'a ConfigComplex {
        self.parent
    }

    pub fn vertex_mask(&self) -> &FixedBitSet {
        &self.vertices
    }

    pub fn edge_mask(&self) -> &FixedBitSet {
        &self.edges
    }

    pub fn has_vertex(&self, v: u32) -> bool {
        self.vertices.contains(v as usize)
    }

    pub fn has_edge(&self, e: u32) -> bool {
        self.edges.contains(e as usize)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.count_ones(..)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_clear()
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> + '_ {
        self.vertices.ones().map(|v| v as u32)
    }

    pub fn edges(&self) -> impl Iterator<Item = u32> + '_ {
        self.edges.ones().map(|e| e as u32)
    }

    pub fn intersection(&self, other: &SubcomplexMask<'a>) -> SubcomplexMask<'a> {
        assert!(std::ptr::eq(self.parent, other.parent), "masks over different complexes");
        let mut vertices = self.vertices.clone();
        vertices.intersect_with(&other.vertices);
        let mut edges = self.edges.clone();
        edges.intersect_with(&other.edges);
        SubcomplexMask {
            parent: self.parent,
            vertices,
            edges,
        }
    }

    pub fn union(&self, other: &SubcomplexMask<'a>) -> SubcomplexMask<'a> {
        assert!(std::ptr::eq(self.parent, other.parent), "masks over different complexes");
        let mut vertices = self.vertices.clone();
        vertices.union_with(&other.vertices);
        let mut edges = self.edges.clone();
        edges.union_with(&other.edges);
        SubcomplexMask {
            parent: self.parent,
            vertices,
            edges,
        }
    }

    pub fn is_subset(&self, other: &SubcomplexMask<'a>) -> bool {
        self.vertices.is_subset(&other.vertices) && self.edges.is_subset(&other.edges)
    }
}

/// `U_{i,j}`: states whose outermost particle on edge `j` is `i`, which by
/// the leaf condition means leaf `j` holds `i`. Both indices are 1-based.
pub fn cover_subcomplex(c: &ConfigComplex, particle: Particle, edge: usize) -> SubcomplexMask<'_> {
    assert!(particle >= 1 && particle as usize <= c.n(), "particle {particle} out of range");
    assert!(edge >= 1 && edge <= c.k(), "edge {edge} out of range");
    SubcomplexMask::induced(c, |v| c.leaf_at(v, edge - 1) == Some(particle))
}

/// Intersection of masks over one complex.
pub fn cover_intersection<'a>(masks: &[SubcomplexMask<'a>]) -> SubcomplexMask<'a> {
    let (first, rest) = masks.split_first().expect("at least one mask");
    rest.iter().fold(first.clone(), |acc, m| acc.intersection(m))
}
