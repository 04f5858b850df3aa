//! The reproducibility suite: a fixed list of exact claims, each checked by
//! recomputing it from scratch.

use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{
    betti, ghrist_rank, insertion_map, permutation_map, ConfigComplex, Particle, Permutation,
};
use crate::error::Result;
use crate::fio::{act, compose, count_morphisms, enumerate_morphisms, recompose, decompose, FioMorphism};
use crate::homology::{homology_all, homology_range, Coefficients, HomologyResult, SimplicialComplex};
use crate::nerve::{nerve, nerve_of_family, star_cover, star_intersection};
use crate::spectral::generation_check;

/// Version of the report layout.
pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Budget {
    /// Instances with `n + 1 <= 5` and `k <= 5` only.
    Small,
    Full,
}

impl std::str::FromStr for Budget {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "small" => Ok(Budget::Small),
            "full" => Ok(Budget::Full),
            _ => Err(format!("unknown budget {s:?}, expected small or full")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub claim: String,
    pub locator: String,
    pub expected: String,
    pub computed: String,
    pub status: Status,
    /// Omitted from reports unless timings are requested, so that reports
    /// stay byte-identical between runs.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_ms: Option<u64>,
}

type Compute = Box<dyn Fn() -> Result<String> + Send + Sync>;

/// One exact check.
pub struct Claim {
    pub id: String,
    pub locator: String,
    pub expected: String,
    /// Largest `(n + 1, k)` touched, used for budgeting.
    pub size: (usize, usize),
    compute: Compute,
}

impl Claim {
    fn new<F>(id: impl Into<String>, locator: &str, expected: impl ToString, size: (usize, usize), compute: F) -> Self
    where
        F: Fn() -> Result<String> + Send + Sync + 'static,
    {
        Claim {
            id: id.into(),
            locator: locator.to_string(),
            expected: expected.to_string(),
            size,
            compute: Box::new(compute),
        }
    }

    pub fn in_budget(&self, budget: Budget) -> bool {
        budget == Budget::Full || (self.size.0 <= 5 && self.size.1 <= 5)
    }

    pub fn run(&self, budget: Budget) -> VerificationRecord {
        let mut record = VerificationRecord {
            claim: self.id.clone(),
            locator: self.locator.clone(),
            expected: self.expected.clone(),
            computed: String::new(),
            status: Status::Skipped,
            wall_ms: None,
        };
        if !self.in_budget(budget) {
            return record;
        }
        let start = Instant::now();
        let computed = (self.compute)();
        record.wall_ms = Some(start.elapsed().as_millis() as u64);
        match computed {
            Ok(value) => {
                record.status = if value == self.expected { Status::Pass } else { Status::Fail };
                record.computed = value;
            }
            Err(e) => {
                record.status = Status::Fail;
                record.computed = format!("error: {e}");
            }
        }
        record
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub budget: Budget,
    pub summary: Summary,
    pub records: Vec<VerificationRecord>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    /// Pretty JSON, with or without per-record wall times.
    pub fn to_json(&self, timings: bool) -> String {
        let mut copy = self.clone();
        if !timings {
            copy.records.iter_mut().for_each(|r| r.wall_ms = None);
        }
        serde_json::to_string_pretty(&copy).expect("report serializes") + "\n"
    }
}

/// Runs claims in parallel; records come back sorted by claim id.
pub fn run_claims(claims: &[Claim], budget: Budget) -> Report {
    let mut records: Vec<VerificationRecord> = claims.par_iter().map(|c| c.run(budget)).collect();
    records.sort_by(|a, b| a.claim.cmp(&b.claim));
    let count = |s: Status| records.iter().filter(|r| r.status == s).count();
    Report {
        schema: SCHEMA,
        budget,
        summary: Summary {
            pass: count(Status::Pass),
            fail: count(Status::Fail),
            skipped: count(Status::Skipped),
        },
        records,
    }
}

pub fn verify(budget: Budget) -> Report {
    run_claims(&claims(), budget)
}

fn homology_profile(h: &[HomologyResult]) -> String {
    h.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")
}

fn betti_list(h: &[HomologyResult]) -> String {
    format!("{:?}", h.iter().map(|r| r.betti).collect::<Vec<_>>())
}

fn nerve_betti(m: usize, k: usize, q: usize, coeff: Coefficients) -> usize {
    homology_range(nerve(m, k).complex(), q..=q, coeff).first().map_or(0, |h| h.betti)
}

fn nonzero(v: usize) -> String {
    if v == 0 { "0".into() } else { "nonzero".into() }
}

fn failures(failed: usize, checked: usize) -> String {
    if failed == 0 {
        "0 failures".into()
    } else {
        format!("{failed} failures in {checked} cases")
    }
}

/// Every claim of the suite, in id order.
pub fn claims() -> Vec<Claim> {
    let mut out = Vec::new();
    rank_law(&mut out);
    torus_nerve(&mut out);
    nerve_h1(&mut out);
    nerve_h2(&mut out);
    mod_two(&mut out);
    generation(&mut out);
    nerve_h2_cubic(&mut out);
    star_lemmas(&mut out);
    fi_calculus(&mut out);
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

fn rank_law(out: &mut Vec<Claim>) {
    let mut sizes: Vec<(usize, usize)> = (1..=5).flat_map(|n| (3..=5).map(move |k| (n, k))).collect();
    sizes.extend([(6, 3), (4, 7)]);
    for (n, k) in sizes {
        let q = ghrist_rank(n, k).expect("k >= 3");
        out.push(Claim::new(
            format!("01.rank-law.n{n}.k{k}"),
            "Ghrist rank law: K_n(Γ_k) is connected with free H₁ of rank Q(n,k)",
            format!("(1, {q})"),
            (n, k),
            move || Ok(format!("{:?}", betti(&ConfigComplex::build(n, k)?))),
        ));
    }
}

fn torus_nerve(out: &mut Vec<Claim>) {
    let loc = "nerve(4,3) is a 2-torus";
    out.push(Claim::new("02.torus.cells", loc, "[12, 36, 24]", (4, 3), || {
        Ok(format!("{:?}", nerve(4, 3).complex().f_vector()))
    }));
    out.push(Claim::new("02.torus.homology", loc, "H_0 = Z, H_1 = Z^2, H_2 = Z", (4, 3), || {
        Ok(homology_profile(&homology_all(nerve(4, 3).complex(), Coefficients::Integers)))
    }));
}

fn nerve_h1(out: &mut Vec<Claim>) {
    let loc = "lemma: first homology of the nerve vanishes for large boards";
    for (m, k, b) in [(5, 3, 0), (6, 3, 0), (4, 4, 0), (3, 5, 0), (3, 6, 0), (4, 3, 2), (3, 3, 4), (3, 4, 2)] {
        out.push(Claim::new(format!("03.nerve-h1.m{m}.k{k}"), loc, b, (m, k), move || {
            Ok(nerve_betti(m, k, 1, Coefficients::Integers).to_string())
        }));
    }
}

fn nerve_h2(out: &mut Vec<Claim>) {
    let loc = "lemma: second homology of the nerve";
    for (m, k) in [(7, 4), (6, 5), (5, 6), (4, 7)] {
        out.push(Claim::new(format!("04.nerve-h2.m{m}.k{k}"), loc, 0, (m, k), move || {
            Ok(nerve_betti(m, k, 2, Coefficients::Integers).to_string())
        }));
    }
    out.push(Claim::new("04.nerve-h2.m7.k3", loc, "nonzero", (7, 3), || {
        Ok(nonzero(nerve_betti(7, 3, 2, Coefficients::Integers)))
    }));
    for k in [5usize, 6] {
        let k = k as i64;
        let expected = k * k * k - 6 * k * k + 8 * k - 1;
        let k = k as usize;
        out.push(Claim::new(format!("04.nerve-h2.m3.k{k}"), loc, expected, (3, k), move || {
            Ok(nerve_betti(3, k, 2, Coefficients::Integers).to_string())
        }));
    }
}

fn mod_two(out: &mut Vec<Claim>) {
    let loc = "remark: second homology of the nerve with Z/2 coefficients";
    for (m, k, b) in [(6, 4, 5), (5, 5, 0)] {
        out.push(Claim::new(format!("05.mod2-h2.m{m}.k{k}"), loc, b, (m, k), move || {
            Ok(nerve_betti(m, k, 2, Coefficients::mod_p(2)?).to_string())
        }));
    }
}

fn generation(out: &mut Vec<Claim>) {
    let cases: [(usize, &[(usize, usize)]); 3] = [
        (3, &[(2, 1), (3, 4), (4, 2), (5, 0), (6, 0)]),
        (4, &[(2, 5), (3, 2), (4, 0), (5, 0)]),
        (5, &[(2, 11), (3, 0)]),
    ];
    for (k, rows) in cases {
        for &(n1, cokernel) in rows {
            out.push(Claim::new(
                format!("06.generation.k{k}.n{n1}"),
                "generation degree: rank of H₁ not reached by the covers",
                cokernel,
                (n1, k),
                move || Ok(generation_check(n1, k)?.cokernel_rank.to_string()),
            ));
            let q = ghrist_rank(n1, k).expect("k >= 3");
            out.push(Claim::new(
                format!("07.additivity.k{k}.n{n1}"),
                "filtration: image rank plus first nerve homology is Q(n+1,k)",
                q,
                (n1, k),
                move || {
                    let image = generation_check(n1, k)?.image_rank;
                    Ok((image + nerve_betti(n1, k, 1, Coefficients::Integers)).to_string())
                },
            ));
        }
    }
}

fn nerve_h2_cubic(out: &mut Vec<Claim>) {
    for n in [4usize, 5, 6, 7] {
        let v = n as i64;
        let expected = v * v * v - 3 * v * v - v + 2;
        out.push(Claim::new(
            format!("08.presentation.k3.n{}", n + 1),
            "second homology of nerve(n+1,3) has rank n³-3n²-n+2",
            expected,
            (n + 1, 3),
            move || Ok(nerve_betti(n + 1, 3, 2, Coefficients::Integers).to_string()),
        ));
    }
}

fn star_lemmas(out: &mut Vec<Claim>) {
    let point = "[1]";
    for (m, k) in [(5, 4), (6, 4), (5, 5)] {
        out.push(Claim::new(
            format!("09.star.contractible.m{m}.k{k}"),
            "closed stars have the homology of a point",
            point,
            (m, k),
            move || {
                let nv = nerve(m, k);
                let profiles: Vec<String> = star_cover(&nv, 1)?
                    .iter()
                    .map(|s| betti_list(&reduced_to_nonzero(&homology_all(&s.complex, Coefficients::Integers))))
                    .collect();
                Ok(common(profiles))
            },
        ));
        out.push(Claim::new(
            format!("09.star.nerve.m{m}.k{k}"),
            "the nerve of the star cover has vanishing H₁ and H₂",
            "[0, 0]",
            (m, k),
            move || {
                let nv = nerve(m, k);
                let family: Vec<SimplicialComplex> = star_cover(&nv, 1)?.into_iter().map(|s| s.complex).collect();
                let h = homology_range(&nerve_of_family(&family), 1..=2, Coefficients::Integers);
                Ok(betti_list(&h))
            },
        ));
    }
    for (m, k) in [(6, 4), (5, 5)] {
        for size in [2usize, 3] {
            out.push(Claim::new(
                format!("09.star.intersections.m{m}.k{k}.size{size}"),
                "intersections of l+1 stars have the homology of nerve(n-l, k-1)",
                "0 failures",
                (m, k),
                move || {
                    let nv = nerve(m, k);
                    let stars = star_cover(&nv, 1)?;
                    let expected = homology_all(nerve(m - size, k - 1).complex(), Coefficients::Integers);
                    let mut failed = 0;
                    let mut checked = 0;
                    for subset in subsets(m, size) {
                        let chosen: Vec<_> = subset.iter().map(|&i| &stars[i]).collect();
                        let h = homology_all(&star_intersection(&chosen)?, Coefficients::Integers);
                        checked += 1;
                        failed += usize::from(h != expected);
                    }
                    Ok(failures(failed, checked))
                },
            ));
        }
    }
}

/// Drops trailing zero Betti numbers.
fn reduced_to_nonzero(h: &[HomologyResult]) -> Vec<HomologyResult> {
    let keep = h.iter().rposition(|r| r.betti != 0 || !r.torsion.is_empty()).map_or(0, |i| i + 1);
    h[..keep].to_vec()
}

fn common(values: Vec<String>) -> String {
    let first = values.first().cloned().unwrap_or_default();
    if values.iter().all(|v| *v == first) {
        first
    } else {
        format!("{values:?}")
    }
}

fn subsets(m: usize, size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![Vec::new()];
    }
    (size - 1..m)
        .flat_map(|last| {
            subsets(last, size - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            })
        })
        .collect()
}

fn fi_calculus(out: &mut Vec<Claim>) {
    let loc = "FI_{d,o}: counts, composition and the insertion axioms";
    out.push(Claim::new("10.fi.counts", loc, "0 failures", (4, 3), || {
        let (mut failed, mut checked) = (0, 0);
        for d in 1..=3 {
            for m in 0..=4 {
                for n in 0..=m {
                    checked += 1;
                    let listed = BigInt::from(enumerate_morphisms(n, m, d)?.len());
                    failed += usize::from(listed != count_morphisms(n, m, d)?.morphisms);
                }
            }
        }
        Ok(failures(failed, checked))
    }));
    out.push(Claim::new("10.fi.associativity", loc, "0 failures", (3, 2), || {
        let (mut failed, mut checked) = (0, 0);
        for d in 1..=2 {
            for l in 0..=3 {
                for m in 0..=l {
                    for n in 0..=m {
                        let fs = enumerate_morphisms(n, m, d)?;
                        let gs = enumerate_morphisms(m, l, d)?;
                        for h in enumerate_morphisms(l, l, d)? {
                            for g in &gs {
                                let hg = compose(&h, g)?;
                                for f in &fs {
                                    checked += 1;
                                    failed += usize::from(compose(&h, &compose(g, f)?)? != compose(&hg, f)?);
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(failures(failed, checked))
    }));
    out.push(Claim::new("10.fi.decomposition", loc, "0 failures", (3, 2), || {
        let (mut failed, mut checked) = (0, 0);
        for d in 1..=2 {
            for m in 0..=3 {
                for n in 0..=m.min(1) {
                    for f in enumerate_morphisms(n, m, d)? {
                        let (sigma, insertions) = decompose(&f);
                        checked += 1;
                        failed += usize::from(recompose(n, d, &sigma, &insertions)? != f);
                    }
                }
            }
        }
        Ok(failures(failed, checked))
    }));
    out.push(Claim::new("10.fi.functoriality", loc, "0 failures", (3, 3), || {
        let k = 3;
        let cs = (0..=3).map(|n| ConfigComplex::build(n, k)).collect::<Result<Vec<_>>>()?;
        let (mut failed, mut checked) = (0, 0);
        for n in 0..=1 {
            for m in n..=3 {
                for l in m..=3 {
                    for g in enumerate_morphisms(m, l, k)? {
                        let ag = act(&g, &cs[m], &cs[l])?;
                        for f in enumerate_morphisms(n, m, k)? {
                            let lhs = act(&compose(&g, &f)?, &cs[n], &cs[l])?;
                            checked += 1;
                            failed += usize::from(lhs != ag.compose(&act(&f, &cs[n], &cs[m])?));
                        }
                    }
                }
            }
        }
        Ok(failures(failed, checked))
    }));
    out.push(Claim::new("10.insertion.permutations", loc, "0 failures", (4, 3), || {
        let (mut failed, mut checked) = (0, 0);
        for n in 0..=3 {
            let c = ConfigComplex::build(n, 3)?;
            let t = ConfigComplex::build(n + 1, 3)?;
            for j in 1..=3 {
                let iota = insertion_map(&c, &t, j)?;
                for sigma in Permutation::all(n) {
                    let lhs = iota.compose(&permutation_map(&c, &sigma)?);
                    let rhs = permutation_map(&t, &sigma.extend())?.compose(&iota);
                    checked += 1;
                    failed += usize::from(lhs != rhs);
                }
            }
        }
        Ok(failures(failed, checked))
    }));
    out.push(Claim::new("10.insertion.unordered", loc, "0 failures", (5, 3), || {
        let (mut failed, mut checked) = (0, 0);
        for n in 0..=3 {
            let c0 = ConfigComplex::build(n, 3)?;
            let c1 = ConfigComplex::build(n + 1, 3)?;
            let c2 = ConfigComplex::build(n + 2, 3)?;
            let swap = Permutation::transposition(n + 2, n as Particle + 1, n as Particle + 2);
            let swap = permutation_map(&c2, &swap)?;
            for j in 1..=3 {
                for l in (1..=3).filter(|&l| l != j) {
                    let lhs = swap.compose(&insertion_map(&c1, &c2, l)?).compose(&insertion_map(&c0, &c1, j)?);
                    let rhs = insertion_map(&c1, &c2, j)?.compose(&insertion_map(&c0, &c1, l)?);
                    checked += 1;
                    failed += usize::from(lhs != rhs);
                }
            }
        }
        Ok(failures(failed, checked))
    }));
    // the identity morphism acts as the identity
    out.push(Claim::new("10.fi.identity", loc, "0 failures", (3, 3), || {
        let mut failed = 0;
        for n in 0..=3 {
            let c = ConfigComplex::build(n, 3)?;
            failed += usize::from(act(&FioMorphism::identity(n, 3), &c, &c)? != crate::config::CellularMap::identity(&c));
        }
        Ok(failures(failed, 4))
    }));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_sorted() {
        let all = claims();
        assert!(all.windows(2).all(|w| w[0].id < w[1].id));
    }

    #[test]
    fn tampered_claim_fails() {
        let mut all: Vec<Claim> = claims().into_iter().filter(|c| c.id.starts_with("02.")).collect();
        let honest = run_claims(&all, Budget::Small);
        assert!(honest.passed());
        all[0].expected = "[12, 36, 25]".into();
        let tampered = run_claims(&all, Budget::Small);
        assert!(!tampered.passed());
        assert_eq!(tampered.summary.fail, 1);
        assert_eq!(tampered.records[0].status, Status::Fail);
    }

    #[test]
    fn budgets_skip_large_instances() {
        let all: Vec<Claim> = claims().into_iter().filter(|c| c.id.starts_with("04.nerve-h2.m7")).collect();
        let report = run_claims(&all, Budget::Small);
        assert_eq!(report.summary.skipped, all.len());
        assert!(report.passed());
    }

    #[test]
    fn subsets_in_order() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(4, 3).len(), 4);
    }

    #[test]
    fn reports_are_deterministic() {
        let all: Vec<Claim> = claims().into_iter().filter(|c| c.id.starts_with("03.")).collect();
        let a = run_claims(&all, Budget::Small).to_json(false);
        let b = run_claims(&all, Budget::Small).to_json(false);
        assert_eq!(a, b);
        assert!(a.contains("\"schema\": 1"));
    }
}
