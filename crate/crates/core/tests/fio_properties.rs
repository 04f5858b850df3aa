use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use starconfig::config::{cover_subcomplex, permutation_map, CellularMap, ConfigComplex, Particle, SubcomplexMask};
use starconfig::fio::{act, compose, count_morphisms, decompose, enumerate_morphisms, recompose, FioMorphism};

fn hom(n: usize, m: usize, d: usize) -> Vec<FioMorphism> {
    enumerate_morphisms(n, m, d).unwrap()
}

#[test]
fn enumeration_matches_both_counts() {
    for d in 1..=3 {
        for m in 0..=4 {
            for n in 0..=m {
                let list = hom(n, m, d);
                let count = count_morphisms(n, m, d).unwrap();
                assert_eq!(BigInt::from(list.len()), count.morphisms, "n={n} m={m} d={d}");
                let distinct: BTreeSet<_> = list.iter().cloned().collect();
                assert_eq!(distinct.len(), list.len());
                if n == 0 {
                    assert_eq!(count.free_dimension, count.morphisms);
                }
            }
        }
    }
}

#[test]
fn enumeration_is_sorted_by_f_then_colors_then_ranks() {
    let key = |x: &FioMorphism| {
        (
            x.injection().to_vec(),
            x.complement().iter().map(|e| e.color).collect::<Vec<_>>(),
            x.complement().iter().map(|e| e.rank).collect::<Vec<_>>(),
        )
    };
    let list = hom(1, 4, 2);
    assert!(list.windows(2).all(|w| key(&w[0]) < key(&w[1])));
}

#[test]
fn composition_is_associative() {
    for d in 1..=2 {
        for l in 0..=3 {
            for m in 0..=l {
                for n in 0..=m {
                    let fs = hom(n, m, d);
                    let gs = hom(m, l, d);
                    for h in hom(l, l, d) {
                        for g in &gs {
                            let hg = compose(&h, g).unwrap();
                            for f in &fs {
                                let lhs = compose(&h, &compose(g, f).unwrap()).unwrap();
                                assert_eq!(lhs, compose(&hg, f).unwrap());
                            }
                        }
                    }
                    // a non-bijective outer map as well
                    if l < 3 {
                        for h in hom(l, l + 1, d) {
                            for g in &gs {
                                for f in &fs {
                                    let lhs = compose(&h, &compose(g, f).unwrap()).unwrap();
                                    let rhs = compose(&compose(&h, g).unwrap(), f).unwrap();
                                    assert_eq!(lhs, rhs);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn decomposition_round_trips() {
    for d in 1..=3 {
        for m in 0..=4 {
            for n in 0..=m.min(2) {
                for f in hom(n, m, d) {
                    let (sigma, insertions) = decompose(&f);
                    assert_eq!(insertions.len(), m - n);
                    assert!(insertions.windows(2).all(|w| w[0] <= w[1]));
                    for t in 1..=n {
                        assert_eq!(sigma.apply(t as Particle) as usize, f.injection()[t - 1]);
                    }
                    assert_eq!(recompose(n, d, &sigma, &insertions).unwrap(), f);
                }
            }
        }
    }
}

fn complexes(max_n: usize, k: usize) -> HashMap<usize, ConfigComplex> {
    (0..=max_n).map(|n| (n, ConfigComplex::build(n, k).unwrap())).collect()
}

#[test]
fn act_is_a_functor() {
    let k = 3;
    let cs = complexes(3, k);
    for m in 0..=3 {
        let id = FioMorphism::identity(m, k);
        assert_eq!(act(&id, &cs[&m], &cs[&m]).unwrap(), CellularMap::identity(&cs[&m]));
    }
    for n in 0..=1 {
        for m in n..=3 {
            for l in m..=3 {
                let fs = hom(n, m, k);
                let acted_f: Vec<_> = fs.iter().map(|f| act(f, &cs[&n], &cs[&m]).unwrap()).collect();
                for g in hom(m, l, k) {
                    let acted_g = act(&g, &cs[&m], &cs[&l]).unwrap();
                    for (f, af) in fs.iter().zip(&acted_f) {
                        let gf = compose(&g, f).unwrap();
                        assert_eq!(act(&gf, &cs[&n], &cs[&l]).unwrap(), acted_g.compose(af));
                    }
                }
            }
        }
    }
}

#[test]
fn permutations_act_by_relabeling() {
    let k = 3;
    let c = ConfigComplex::build(3, k).unwrap();
    for f in hom(3, 3, k) {
        let (sigma, insertions) = decompose(&f);
        assert!(insertions.is_empty());
        assert_eq!(act(&f, &c, &c).unwrap(), permutation_map(&c, &sigma).unwrap());
    }
}

#[test]
fn elementary_insertions_land_on_covers() {
    for (n, k) in [(0, 3), (1, 3), (2, 3), (3, 3), (2, 4), (2, 5)] {
        let source = ConfigComplex::build(n, k).unwrap();
        let target = ConfigComplex::build(n + 1, k).unwrap();
        for j in 1..=k {
            let map = act(&FioMorphism::insertion(n, j, k), &source, &target).unwrap();
            let mut vertices = FixedBitSet::with_capacity(target.vertex_count());
            let mut edges = FixedBitSet::with_capacity(target.edge_count());
            map.vertex_map.iter().for_each(|&v| vertices.insert(v as usize));
            map.edge_map.iter().for_each(|&e| edges.insert(e as usize));
            let image = SubcomplexMask::new(&target, vertices, edges);
            assert_eq!(image, cover_subcomplex(&target, (n + 1) as Particle, j), "n={n} k={k} j={j}");
        }
    }
}
