//! Morphisms of FI_{d,o}: injections `[n] -> [m]` together with a
//! `d`-coloring of the complement of the image and a total order on each
//! color class.
//!
//! Orders are stored as ranks `1..=class size`. When composing `g ∘ f`, the
//! complement elements inherited from `f` (through `g`) come first in their
//! color class, in their `f`-order, followed by the elements contributed by
//! `g` in their `g`-order. Under this rule a chain of elementary insertions
//! gives the earliest inserted element rank 1.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::config::{insertion_map, permutation_map, CellularMap, ConfigComplex, Permutation};
use crate::error::{Error, Result};

/// Color and rank of one element outside the image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ComplementEntry {
    pub elem: usize,
    pub color: usize,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FioMorphism {
    n: usize,
    m: usize,
    d: usize,
    /// `f[t - 1]` is the image of `t`, 1-based.
    f: Vec<usize>,
    /// Sorted by element.
    complement: Vec<ComplementEntry>,
}

/// JSON form `{n, m, d, f, complement: [{elem, color, rank}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub f: Vec<usize>,
    pub complement: Vec<ComplementEntry>,
}

impl FioMorphism {
    pub fn new(n: usize, m: usize, d: usize, f: Vec<usize>, mut complement: Vec<ComplementEntry>) -> Result<Self> {
        let bad = |why: String| Err(Error::Malformed(why));
        if d == 0 {
            return bad("color count must be positive".into());
        }
        if f.len() != n || m < n {
            return bad(format!("injection of length {} for [{n}] -> [{m}]", f.len()));
        }
        let mut in_image = vec![false; m + 1];
        for &x in &f {
            if x == 0 || x > m || std::mem::replace(&mut in_image[x], true) {
                return bad(format!("{f:?} is not an injection into [{m}]"));
            }
        }
        complement.sort();
        let expected: Vec<usize> = (1..=m).filter(|&x| !in_image[x]).collect();
        if complement.iter().map(|e| e.elem).collect::<Vec<_>>() != expected {
            return bad("colors must be given exactly on the complement of the image".into());
        }
        for color in 1..=d {
            let mut ranks: Vec<usize> = complement.iter().filter(|e| e.color == color).map(|e| e.rank).collect();
            ranks.sort_unstable();
            if ranks.iter().enumerate().any(|(i, &r)| r != i + 1) {
                return bad(format!("ranks of color {color} are not 1..={}", ranks.len()));
            }
        }
        if complement.iter().any(|e| e.color == 0 || e.color > d) {
            return bad(format!("color outside 1..={d}"));
        }
        Ok(FioMorphism {
            n,
            m,
            d,
            f,
            complement,
        })
    }

    pub fn identity(n: usize, d: usize) -> Self {
        FioMorphism {
            n,
            m: n,
            d,
            f: (1..=n).collect(),
            complement: Vec::new(),
        }
    }

    pub fn from_permutation(sigma: &Permutation, d: usize) -> Self {
        FioMorphism {
            n: sigma.len(),
            m: sigma.len(),
            d,
            f: sigma.images().iter().map(|&p| p as usize).collect(),
            complement: Vec::new(),
        }
    }

    /// The standard inclusion `[l] -> [l + 1]` with `l + 1` colored `color`.
    pub fn insertion(l: usize, color: usize, d: usize) -> Self {
        assert!((1..=d).contains(&color), "color {color} outside 1..={d}");
        FioMorphism {
            n: l,
            m: l + 1,
            d,
            f: (1..=l).collect(),
            complement: vec![ComplementEntry {
                elem: l + 1,
                color,
                rank: 1,
            }],
        }
    }

    pub fn source(&self) -> usize {
        self.n
    }

    pub fn target(&self) -> usize {
        self.m
    }

    pub fn colors(&self) -> usize {
        self.d
    }

    pub fn injection(&self) -> &[usize] {
        &self.f
    }

    pub fn complement(&self) -> &[ComplementEntry] {
        &self.complement
    }

    fn entry(&self, elem: usize) -> Option<&ComplementEntry> {
        self.complement
            .binary_search_by_key(&elem, |e| e.elem)
            .ok()
            .map(|i| &self.complement[i])
    }

    pub fn to_json(&self) -> MorphismJson {
        MorphismJson {
            n: self.n,
            m: self.m,
            d: self.d,
            f: self.f.clone(),
            complement: self.complement.clone(),
        }
    }

    pub fn from_json(j: &MorphismJson) -> Result<Self> {
        Self::new(j.n, j.m, j.d, j.f.clone(), j.complement.clone())
    }
}

/// `g ∘ f`.
pub fn compose(g: &FioMorphism, f: &FioMorphism) -> Result<FioMorphism> {
    if f.m != g.n || f.d != g.d {
        return Err(Error::Mismatch(format!(
            "cannot compose [{}]->[{}] (d={}) after [{}]->[{}] (d={})",
            g.n, g.m, g.d, f.n, f.m, f.d
        )));
    }
    let image: Vec<usize> = f.f.iter().map(|&x| g.f[x - 1]).collect();
    // (color, inherited-first key, elem)
    let mut keyed: Vec<(usize, (u8, usize), usize)> = Vec::with_capacity(g.m - f.n);
    for (y, &gy) in g.f.iter().enumerate() {
        if let Some(e) = f.entry(y + 1) {
            keyed.push((e.color, (0, e.rank), gy));
        }
    }
    for e in &g.complement {
        keyed.push((e.color, (1, e.rank), e.elem));
    }
    keyed.sort_unstable();
    let mut complement = Vec::with_capacity(keyed.len());
    let mut rank = 0;
    let mut last_color = 0;
    for (color, _, elem) in keyed {
        rank = if color == last_color { rank + 1 } else { 1 };
        last_color = color;
        complement.push(ComplementEntry { elem, color, rank });
    }
    complement.sort();
    Ok(FioMorphism {
        n: f.n,
        m: g.m,
        d: f.d,
        f: image,
        complement,
    })
}

/// Canonical factorization `f = σ ∘ ι_{m-1, c_m} ∘ ... ∘ ι_{n, c_{n+1}}`.
///
/// The insertion colors run class by class (all of color 1 first), and `σ`
/// sends `t <= n` to `f(t)` and the `s`-th inserted element of color `c` to
/// the complement element of color `c` and rank `s`.
pub fn decompose(f: &FioMorphism) -> (Permutation, Vec<usize>) {
    let mut colors: Vec<usize> = f.complement.iter().map(|e| e.color).collect();
    colors.sort_unstable();
    let mut images: Vec<u8> = f.f.iter().map(|&x| x as u8).collect();
    let mut seen = vec![0usize; f.d + 1];
    for &c in &colors {
        seen[c] += 1;
        let target = f
            .complement
            .iter()
            .find(|e| e.color == c && e.rank == seen[c])
            .expect("ranks form 1..=class size");
        images.push(target.elem as u8);
    }
    let sigma = Permutation::new(images).expect("decomposition yields a bijection");
    (sigma, colors)
}

/// Rebuilds a morphism from its factorization.
pub fn recompose(n: usize, d: usize, sigma: &Permutation, insertions: &[usize]) -> Result<FioMorphism> {
    let mut acc = FioMorphism::identity(n, d);
    for (step, &c) in insertions.iter().enumerate() {
        acc = compose(&FioMorphism::insertion(n + step, c, d), &acc)?;
    }
    compose(&FioMorphism::from_permutation(sigma, d), &acc)
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

/// Size of `Hom([n], [m])` two ways.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismCount {
    /// Injections times, for each weak composition of `m - n` into `d`
    /// parts, the colorings with those class sizes times the orderings.
    pub morphisms: BigInt,
    /// `m! C(m - n + d - 1, d - 1)`.
    pub free_dimension: BigInt,
}

pub fn count_morphisms(n: usize, m: usize, d: usize) -> Result<MorphismCount> {
    if m < n {
        return Err(Error::Domain(format!("no morphisms [{n}] -> [{m}]")));
    }
    if d == 0 {
        return Err(Error::Domain("color count must be positive".into()));
    }
    let free = m - n;
    let injections = factorial(m) / factorial(free);
    let mut sum = BigInt::zero();
    weak_compositions(free, d, &mut Vec::new(), &mut |parts| {
        // multinomial(free; parts) * prod(parts!) = free!
        let multinomial = parts.iter().fold(factorial(free), |acc, &a| acc / factorial(a));
        let orderings = parts.iter().fold(BigInt::one(), |acc, &a| acc * factorial(a));
        sum += multinomial * orderings;
    });
    Ok(MorphismCount {
        morphisms: injections * sum,
        free_dimension: factorial(m) * binomial(free + d - 1, d - 1),
    })
}

fn weak_compositions<F: FnMut(&[usize])>(total: usize, parts: usize, current: &mut Vec<usize>, visit: &mut F) {
    if parts == 1 {
        current.push(total);
        visit(current);
        current.pop();
        return;
    }
    for first in 0..=total {
        current.push(first);
        weak_compositions(total - first, parts - 1, current, visit);
        current.pop();
    }
}

/// Largest hom-set [`enumerate_morphisms`] will list by default.
pub const ENUMERATION_CAP: u64 = 1_000_000;

/// Every morphism `[n] -> [m]`, sorted by `(f, colors, ranks)` with colors
/// and ranks read in element order.
pub fn enumerate_morphisms(n: usize, m: usize, d: usize) -> Result<Vec<FioMorphism>> {
    enumerate_morphisms_capped(n, m, d, ENUMERATION_CAP)
}

pub fn enumerate_morphisms_capped(n: usize, m: usize, d: usize, cap: u64) -> Result<Vec<FioMorphism>> {
    let count = count_morphisms(n, m, d)?.morphisms;
    if count > BigInt::from(cap) {
        return Err(Error::ResourceLimit {
            projected: count.try_into().unwrap_or(u128::MAX),
            cap: cap as u128,
        });
    }
    let mut out = Vec::new();
    let mut f = Vec::with_capacity(n);
    let mut used = vec![false; m + 1];
    injections(n, m, &mut f, &mut used, &mut |f| {
        let comp: Vec<usize> = (1..=m).filter(|x| !f.contains(x)).collect();
        let mut colors = vec![1usize; comp.len()];
        loop {
            // every ordering of every color class
            let classes: Vec<Vec<usize>> = (1..=d)
                .map(|c| (0..comp.len()).filter(|&i| colors[i] == c).collect())
                .collect();
            let mut ranks = vec![0usize; comp.len()];
            class_orders(&classes, 0, &mut ranks, &mut |ranks| {
                let complement = comp
                    .iter()
                    .enumerate()
                    .map(|(i, &elem)| ComplementEntry {
                        elem,
                        color: colors[i],
                        rank: ranks[i],
                    })
                    .collect();
                out.push(FioMorphism {
                    n,
                    m,
                    d,
                    f: f.to_vec(),
                    complement,
                });
            });
            // next coloring, odometer with the last element fastest
            let Some(i) = (0..colors.len()).rev().find(|&i| colors[i] < d) else {
                break;
            };
            colors[i] += 1;
            colors[i + 1..].iter_mut().for_each(|c| *c = 1);
        }
    });
    out.sort_by(|a, b| {
        let key = |x: &FioMorphism| {
            (
                x.f.clone(),
                x.complement.iter().map(|e| e.color).collect::<Vec<_>>(),
                x.complement.iter().map(|e| e.rank).collect::<Vec<_>>(),
            )
        };
        key(a).cmp(&key(b))
    });
    Ok(out)
}

fn injections<F: FnMut(&[usize])>(n: usize, m: usize, f: &mut Vec<usize>, used: &mut [bool], visit: &mut F) {
    if f.len() == n {
        visit(f);
        return;
    }
    for x in 1..=m {
        if !used[x] {
            used[x] = true;
            f.push(x);
            injections(n, m, f, used, visit);
            f.pop();
            used[x] = false;
        }
    }
}

fn class_orders<F: FnMut(&[usize])>(classes: &[Vec<usize>], c: usize, ranks: &mut [usize], visit: &mut F) {
    if c == classes.len() {
        visit(ranks);
        return;
    }
    let members = &classes[c];
    for perm in Permutation::all(members.len()) {
        for (slot, &r) in members.iter().zip(perm.images()) {
            ranks[*slot] = r as usize;
        }
        class_orders(classes, c + 1, ranks, visit);
    }
}

/// The cellular map `K_n(Γ_k) -> K_m(Γ_k)` induced by `f`: the insertion
/// maps of its factorization followed by the relabeling `σ`.
pub fn act(f: &FioMorphism, source: &ConfigComplex, target: &ConfigComplex) -> Result<CellularMap> {
    if f.d != source.k() || source.k() != target.k() || source.n() != f.n || target.n() != f.m {
        return Err(Error::Mismatch(format!(
            "morphism [{}]->[{}] with d={} against K_{}(Γ_{}) -> K_{}(Γ_{})",
            f.n,
            f.m,
            f.d,
            source.n(),
            source.k(),
            target.n(),
            target.k()
        )));
    }
    let (sigma, insertions) = decompose(f);
    let mut map = CellularMap::identity(source);
    let mut current: Option<ConfigComplex> = None;
    for (step, &color) in insertions.iter().enumerate() {
        let next_n = f.n + step + 1;
        let next = if next_n == target.n() {
            None
        } else {
            Some(ConfigComplex::build(next_n, target.k())?)
        };
        let from = current.as_ref().unwrap_or(source);
        let to = next.as_ref().unwrap_or(target);
        map = insertion_map(from, to, color)?.compose(&map);
        current = next;
    }
    Ok(permutation_map(target, &sigma)?.compose(&map))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_up_to(max: usize, d: usize) -> Vec<FioMorphism> {
        (0..=max)
            .flat_map(|n| (n..=max).map(move |m| (n, m)))
            .flat_map(|(n, m)| enumerate_morphisms(n, m, d).unwrap())
            .collect()
    }

    #[test]
    fn validation() {
        let ok = FioMorphism::new(1, 2, 2, vec![2], vec![ComplementEntry { elem: 1, color: 2, rank: 1 }]);
        assert!(ok.is_ok());
        assert!(FioMorphism::new(2, 2, 1, vec![1, 1], vec![]).is_err());
        assert!(FioMorphism::new(0, 1, 1, vec![], vec![]).is_err());
        assert!(FioMorphism::new(0, 2, 1, vec![], vec![
            ComplementEntry { elem: 1, color: 1, rank: 1 },
            ComplementEntry { elem: 2, color: 1, rank: 1 },
        ])
        .is_err());
    }

    #[test]
    fn identities() {
        for f in all_up_to(3, 2) {
            assert_eq!(compose(&FioMorphism::identity(f.m, 2), &f).unwrap(), f);
            assert_eq!(compose(&f, &FioMorphism::identity(f.n, 2)).unwrap(), f);
        }
    }

    #[test]
    fn mismatched_composition() {
        let f = FioMorphism::insertion(1, 1, 2);
        assert!(compose(&f, &f).is_err());
        let g = FioMorphism::insertion(2, 1, 3);
        assert!(compose(&g, &f).is_err());
    }

    #[test]
    fn chained_insertions_rank_by_arrival() {
        let a = FioMorphism::insertion(0, 1, 1);
        let b = FioMorphism::insertion(1, 1, 1);
        let ba = compose(&b, &a).unwrap();
        assert_eq!(ba.complement()[0], ComplementEntry { elem: 1, color: 1, rank: 1 });
        assert_eq!(ba.complement()[1], ComplementEntry { elem: 2, color: 1, rank: 2 });
    }

    #[test]
    fn distinct_insertions_are_unordered() {
        let d = 3;
        for n in 0..3 {
            for j in 1..=d {
                for l in (1..=d).filter(|&l| l != j) {
                    let swap = FioMorphism::from_permutation(
                        &Permutation::transposition(n + 2, n as u8 + 1, n as u8 + 2),
                        d,
                    );
                    let lhs = compose(
                        &swap,
                        &compose(&FioMorphism::insertion(n + 1, l, d), &FioMorphism::insertion(n, j, d)).unwrap(),
                    )
                    .unwrap();
                    let rhs = compose(&FioMorphism::insertion(n + 1, j, d), &FioMorphism::insertion(n, l, d)).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn decomposition_of_simple_morphisms() {
        let sigma = Permutation::new(vec![2, 3, 1]).unwrap();
        let (s, ins) = decompose(&FioMorphism::from_permutation(&sigma, 2));
        assert_eq!((s, ins), (sigma, vec![]));
        let (s, ins) = decompose(&FioMorphism::insertion(3, 2, 2));
        assert_eq!((s, ins), (Permutation::identity(4), vec![2]));
    }

    #[test]
    fn counts() {
        let c = count_morphisms(0, 1, 2).unwrap();
        assert_eq!((c.morphisms.clone(), c.free_dimension.clone()), (BigInt::from(2), BigInt::from(2)));
        for m in 0..5 {
            let c = count_morphisms(m, m, 3).unwrap();
            assert_eq!(c.morphisms, factorial(m));
            assert_eq!(c.free_dimension, factorial(m));
        }
        assert_eq!(count_morphisms(1, 2, 3).unwrap().free_dimension, BigInt::from(6));
        assert!(count_morphisms(2, 1, 1).is_err());
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_morphisms(0, 0, 2).unwrap(), vec![FioMorphism::identity(0, 2)]);
        assert_eq!(enumerate_morphisms(0, 2, 1).unwrap().len(), 2);
        let list = enumerate_morphisms(1, 3, 2).unwrap();
        assert_eq!(BigInt::from(list.len()), count_morphisms(1, 3, 2).unwrap().morphisms);
        assert!(enumerate_morphisms_capped(0, 4, 3, 10).is_err());
    }

    #[test]
    fn json_round_trip() {
        for f in enumerate_morphisms(1, 3, 2).unwrap() {
            let text = serde_json::to_string(&f.to_json()).unwrap();
            let back: MorphismJson = serde_json::from_str(&text).unwrap();
            assert_eq!(FioMorphism::from_json(&back).unwrap(), f);
        }
    }

    #[test]
    fn act_on_elementary_insertion_and_identity() {
        let c2 = ConfigComplex::build(2, 3).unwrap();
        let c3 = ConfigComplex::build(3, 3).unwrap();
        assert_eq!(act(&FioMorphism::identity(2, 3), &c2, &c2).unwrap(), CellularMap::identity(&c2));
        for j in 1..=3 {
            let via_act = act(&FioMorphism::insertion(2, j, 3), &c2, &c3).unwrap();
            assert_eq!(via_act, insertion_map(&c2, &c3, j).unwrap());
        }
        assert!(act(&FioMorphism::identity(2, 4), &c2, &c2).is_err());
    }
}
