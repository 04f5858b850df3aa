use super::{ConfigComplex, Particle};
use crate::error::{Error, Result};

/// A bijection of `1..=n`, stored as the images of `1, 2, ..., n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<Particle>);

impl Permutation {
    pub fn new(images: Vec<Particle>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &p in &images {
            let p = p as usize;
            if p == 0 || p > n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::BadPermutation(format!("{images:?} is not a bijection of 1..={n}")));
            }
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n as Particle).collect())
    }

    /// The transposition swapping `a` and `b` in `1..=n`.
    pub fn transposition(n: usize, a: Particle, b: Particle) -> Self {
        let mut images: Vec<Particle> = (1..=n as Particle).collect();
        images.swap(a as usize - 1, b as usize - 1);
        Permutation(images)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[Particle] {
        &self.0
    }

    pub fn apply(&self, p: Particle) -> Particle {
        self.0[p as usize - 1]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Permutation(other.0.iter().map(|&p| self.apply(p)).collect())
    }

    /// Image under `[n] ↪ [n+1]`, fixing `n + 1`.
    pub fn extend(&self) -> Permutation {
        let mut images = self.0.clone();
        images.push(self.len() as Particle + 1);
        Permutation(images)
    }

    /// All permutations of `1..=n` in lexicographic order of images.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current: Vec<Particle> = (1..=n as Particle).collect();
        loop {
            out.push(Permutation(current.clone()));
            // next lexicographic permutation
            let Some(i) = (1..current.len()).rev().find(|&i| current[i - 1] < current[i]) else {
                return out;
            };
            let j = (i..current.len()).rev().find(|&j| current[j] > current[i - 1]).unwrap();
            current.swap(i - 1, j);
            current[i..].reverse();
        }
    }
}

/// A cellular map between configuration complexes, as vertex and edge maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellularMap {
    pub vertex_map: Vec<u32>,
    pub edge_map: Vec<u32>,
}

impl CellularMap {
    pub fn identity(c: &ConfigComplex) -> Self {
        CellularMap {
            vertex_map: (0..c.vertex_count() as u32).collect(),
            edge_map: (0..c.edge_count() as u32).collect(),
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &CellularMap) -> CellularMap {
        CellularMap {
            vertex_map: inner.vertex_map.iter().map(|&v| self.vertex_map[v as usize]).collect(),
            edge_map: inner.edge_map.iter().map(|&e| self.edge_map[e as usize]).collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        fn distinct(v: &[u32]) -> bool {
            let mut s = v.to_vec();
            s.sort_unstable();
            s.windows(2).all(|w| w[0] != w[1])
        }
        distinct(&self.vertex_map) && distinct(&self.edge_map)
    }

    /// Image of a 1-chain.
    pub fn push_chain(&self, chain: &[(u32, i64)]) -> Vec<(u32, i64)> {
        let mut out: Vec<(u32, i64)> = chain.iter().map(|&(e, c)| (self.edge_map[e as usize], c)).collect();
        out.sort_unstable();
        out
    }
}

/// Relabels every particle by `sigma`.
pub fn permutation_map(c: &ConfigComplex, sigma: &Permutation) -> Result<CellularMap> {
    if sigma.len() != c.n() {
        return Err(Error::BadPermutation(format!(
            "permutation of {} letters on {} particles",
            sigma.len(),
            c.n()
        )));
    }
    let vertex_map: Vec<u32> = (0..c.vertex_count() as u32)
        .map(|v| {
            let image = c.state(v).relabel(sigma.images());
            c.vertex_id(&image).expect("relabeling preserves validity")
        })
        .collect();
    let edge_map = c
        .edges()
        .iter()
        .map(|m| {
            c.edge_from_center(vertex_map[m.target as usize], m.edge as usize - 1)
                .expect("image of a center state has its center occupied")
        })
        .collect();
    Ok(CellularMap { vertex_map, edge_map })
}

/// `ι_{n,j}`: adds particle `n + 1` on leaf `j` (1-based), pushing the old
/// leaf occupant to the outermost interior slot of edge `j`.
pub fn insertion_map(c: &ConfigComplex, target: &ConfigComplex, j: usize) -> Result<CellularMap> {
    if target.n() != c.n() + 1 || target.k() != c.k() {
        return Err(Error::Mismatch(format!(
            "insertion from K_{}(Γ_{}) into K_{}(Γ_{})",
            c.n(),
            c.k(),
            target.n(),
            target.k()
        )));
    }
    if j == 0 || j > c.k() {
        return Err(Error::Domain(format!("edge {j} out of range 1..={}", c.k())));
    }
    let label = (c.n() + 1) as Particle;
    let vertex_map: Vec<u32> = (0..c.vertex_count() as u32)
        .map(|v| {
            let image = c.state(v).insert_at_leaf(j - 1, label);
            target.vertex_id(&image).expect("inserted state is a vertex")
        })
        .collect();
    let edge_map = c
        .edges()
        .iter()
        .map(|m| {
            target
                .edge_from_center(vertex_map[m.target as usize], m.edge as usize - 1)
                .expect("center stays occupied")
        })
        .collect();
    Ok(CellularMap { vertex_map, edge_map })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::cover::{cover_subcomplex, SubcomplexMask};

    fn image_mask<'a>(target: &'a ConfigComplex, map: &CellularMap) -> SubcomplexMask<'a> {
        let mut vertices = fixedbitset::FixedBitSet::with_capacity(target.vertex_count());
        let mut edges = fixedbitset::FixedBitSet::with_capacity(target.edge_count());
        map.vertex_map.iter().for_each(|&v| vertices.insert(v as usize));
        map.edge_map.iter().for_each(|&e| edges.insert(e as usize));
        SubcomplexMask::new(target, vertices, edges)
    }

    #[test]
    fn permutations_enumerate() {
        assert_eq!(Permutation::all(3).len(), 6);
        assert_eq!(Permutation::all(0), vec![Permutation(vec![])]);
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
    }

    #[test]
    fn identity_and_automorphism() {
        let c = ConfigComplex::build(3, 3).unwrap();
        assert_eq!(permutation_map(&c, &Permutation::identity(3)).unwrap(), CellularMap::identity(&c));
        for sigma in Permutation::all(3) {
            let f = permutation_map(&c, &sigma).unwrap();
            assert!(f.is_injective());
            // preserves incidence
            for (e, m) in c.edges().iter().enumerate() {
                let image = c.edge(f.edge_map[e]);
                assert_eq!(image.source, f.vertex_map[m.source as usize]);
                assert_eq!(image.target, f.vertex_map[m.target as usize]);
            }
        }
        assert!(permutation_map(&c, &Permutation::identity(2)).is_err());
    }

    #[test]
    fn permutation_maps_compose() {
        for n in 0..=3 {
            let c = ConfigComplex::build(n, 3).unwrap();
            let perms = Permutation::all(n);
            for s in &perms {
                for t in &perms {
                    let lhs = permutation_map(&c, &s.compose(t)).unwrap();
                    let rhs = permutation_map(&c, s).unwrap().compose(&permutation_map(&c, t).unwrap());
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn insertion_of_first_particle() {
        let c0 = ConfigComplex::build(0, 3).unwrap();
        let c1 = ConfigComplex::build(1, 3).unwrap();
        for j in 1..=3 {
            let f = insertion_map(&c0, &c1, j).unwrap();
            let image = c1.state(f.vertex_map[0]);
            assert_eq!(image.edges[j - 1].leaf, Some(1));
            assert_eq!(image.particle_count(), 1);
        }
    }

    #[test]
    fn insertion_image_is_the_cover() {
        for (n, k) in [(1, 3), (2, 3), (2, 4), (3, 3)] {
            let c = ConfigComplex::build(n, k).unwrap();
            let t = ConfigComplex::build(n + 1, k).unwrap();
            for j in 1..=k {
                let f = insertion_map(&c, &t, j).unwrap();
                assert!(f.is_injective());
                let cover = cover_subcomplex(&t, (n + 1) as Particle, j);
                assert_eq!(image_mask(&t, &f), cover, "n={n} k={k} j={j}");
            }
        }
        let c = ConfigComplex::build(1, 3).unwrap();
        let t = ConfigComplex::build(2, 3).unwrap();
        let u = image_mask(&t, &insertion_map(&c, &t, 1).unwrap());
        assert_eq!((u.vertex_count(), u.edge_count()), (4, 3));
        assert_eq!(u.betti(), (1, 0));
    }

    #[test]
    fn insertion_commutes_with_permutations() {
        for n in 0..=3 {
            let c = ConfigComplex::build(n, 3).unwrap();
            let t = ConfigComplex::build(n + 1, 3).unwrap();
            for j in 1..=3 {
                let iota = insertion_map(&c, &t, j).unwrap();
                for sigma in Permutation::all(n) {
                    let lhs = iota.compose(&permutation_map(&c, &sigma).unwrap());
                    let rhs = permutation_map(&t, &sigma.extend()).unwrap().compose(&iota);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn distinct_insertions_are_unordered() {
        for k in 3..=5 {
            for n in 0..=(if k == 5 { 2 } else { 3 }) {
                let c0 = ConfigComplex::build(n, k).unwrap();
                let c1 = ConfigComplex::build(n + 1, k).unwrap();
                let c2 = ConfigComplex::build(n + 2, k).unwrap();
                let swap = permutation_map(&c2, &Permutation::transposition(n + 2, n as u8 + 1, n as u8 + 2)).unwrap();
                for j in 1..=k {
                    for l in (1..=k).filter(|&l| l != j) {
                        let lhs = swap
                            .compose(&insertion_map(&c1, &c2, l).unwrap())
                            .compose(&insertion_map(&c0, &c1, j).unwrap());
                        let rhs = insertion_map(&c1, &c2, j).unwrap().compose(&insertion_map(&c0, &c1, l).unwrap());
                        assert_eq!(lhs, rhs, "n={n} k={k} j={j} l={l}");
                    }
                }
            }
        }
    }
}
