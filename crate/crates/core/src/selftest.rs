//! Seeded self-test suites: fixed fixtures plus randomized property checks.
//!
//! Every random suite draws from its own stream derived from the seed and
//! the suite name, so a suite reproduces on its own. The first failing case
//! of a suite is kept as its counterexample.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::certificate::{build_certificate, verify_certificate, Certificate};
use crate::corpus::{manifest, nilpotent_corpus, nilpotent_jordan};
use crate::exterior::{blade_indices, blades, dual_iso, dual_iso_inverse, Multivector, Variance, Volume};
use crate::g2::{
    classify_three_form, covector_norm, decompose_along, dual_gram, hodge_dual_pattern, hodge_star, induced_bilinear,
    standard_three_form, standard_volume, Classification, Kind, StandardFormSpec,
};
use crate::io::{from_json, to_json, LieAlgebraRecord, MatrixRecord};
use crate::jordan::{partition_search, JnfLayout, PairPartition};
use crate::lie::{iso_test, iso_test_matrices, nilpotent_partition, similar, LieAlgebra};
use crate::matrix::Matrix;
use crate::oracle::{invariant_symplectic_form, max_length};
use crate::random::{
    conjugate, invertible, nonzero_rational, random_form, random_matrix, random_model_matrix, random_vector,
    small_gaussian, suite_rng, TestRng,
};
use crate::report::{decide_matrix, DecisionReport, Tolerances};
use crate::scalar::{FieldMode, Scalar};

pub const DEFAULT_SEED: u64 = 20_240_601;

pub type CaseResult = std::result::Result<(), String>;
pub type Metrics = BTreeMap<String, u64>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub counterexample: Option<String>,
    pub metrics: Metrics,
    pub elapsed_ms: u64,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn metric(&self, key: &str) -> u64 {
        self.metrics.get(key).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelftestSummary {
    pub seed: u64,
    /// Cases per random suite; `None` means each suite's default count.
    pub trials: Option<usize>,
    pub passed: bool,
    pub elapsed_ms: u64,
    pub suites: Vec<SuiteResult>,
}

impl SelftestSummary {
    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }
}

type Fixed = fn(&mut Metrics) -> Vec<(&'static str, CaseResult)>;
type Random = fn(&mut TestRng, &mut Metrics) -> CaseResult;

enum Body {
    Fixed(Fixed),
    Random(usize, Random),
}

pub struct Suite {
    pub name: &'static str,
    body: Body,
}

impl Suite {
    pub fn default_cases(&self) -> Option<usize> {
        match self.body {
            Body::Fixed(_) => None,
            Body::Random(n, _) => Some(n),
        }
    }
}

pub fn suites() -> Vec<Suite> {
    let s = |name, body| Suite { name, body };
    vec![
        s("standard_forms", Body::Fixed(standard_forms)),
        s("nilpotent_corpus", Body::Fixed(corpus_fixture)),
        s("decision_examples", Body::Fixed(decision_examples)),
        s("random_models", Body::Random(300, random_models)),
        s("null_direction", Body::Random(200, null_direction)),
        s("d_squared", Body::Random(1000, d_squared)),
        s("semidirect_differential", Body::Random(500, semidirect_differential)),
        s("length_preservation", Body::Random(500, length_preservation)),
        s("decision_invariance", Body::Random(100, decision_invariance)),
        s("isomorphism_moves", Body::Random(100, isomorphism_moves)),
        s("ideal_recovery", Body::Random(100, ideal_recovery)),
        s("round_trip", Body::Random(200, round_trip)),
        s("polarization", Body::Random(100, polarization)),
        s("exterior_laws", Body::Random(500, exterior_laws)),
        s("linear_algebra", Body::Random(200, linear_algebra)),
    ]
}

fn guarded<T>(f: impl FnOnce() -> std::result::Result<T, String>) -> std::result::Result<T, String> {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(r) => r,
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panic: {msg}"))
        }
    }
}

pub fn run_suite(suite: &Suite, seed: u64, trials: Option<usize>) -> SuiteResult {
    let start = Instant::now();
    let mut metrics = Metrics::new();
    let mut cases = 0;
    let mut failures = 0;
    let mut counterexample = None;
    let mut record = |label: String, r: CaseResult, cases: &mut usize| {
        *cases += 1;
        if let Err(e) = r {
            failures += 1;
            if counterexample.is_none() {
                counterexample = Some(format!("{label}: {e}"));
            }
        }
    };
    match &suite.body {
        Body::Fixed(f) => {
            let checks = guarded(|| Ok(f(&mut metrics))).unwrap_or_else(|e| vec![("fixture", Err(e))]);
            for (name, r) in checks {
                record(name.to_string(), r, &mut cases);
            }
        }
        Body::Random(default, f) => {
            let n = trials.unwrap_or(*default);
            let mut rng = suite_rng(seed, suite.name);
            for i in 0..n {
                let r = guarded(|| f(&mut rng, &mut metrics));
                record(format!("case {i}"), r, &mut cases);
            }
        }
    }
    SuiteResult {
        name: suite.name.to_string(),
        cases,
        failures,
        counterexample,
        metrics,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

/// Run the suites whose names are in `only` (all when empty).
pub fn run_selftest(seed: u64, trials: Option<usize>, only: &[String]) -> SelftestSummary {
    let start = Instant::now();
    let results: Vec<SuiteResult> = suites()
        .iter()
        .filter(|s| only.is_empty() || only.iter().any(|o| o == s.name))
        .map(|s| run_suite(s, seed, trials))
        .collect();
    SelftestSummary {
        seed,
        trials,
        passed: results.iter().all(SuiteResult::passed),
        elapsed_ms: start.elapsed().as_millis() as u64,
        suites: results,
    }
}

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err(format!($($arg)*));
        }
    };
}

fn bump(m: &mut Metrics, key: &str) {
    *m.entry(key.to_string()).or_default() += 1;
}

fn s(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn diag(d: &[i64]) -> Matrix {
    Matrix::diagonal(&d.iter().map(|&x| Scalar::from_i64(x)).collect::<Vec<_>>())
}

fn rows_str(m: &Matrix) -> String {
    let rows: Vec<String> = m.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).collect();
    format!("[{}]", rows.join("; "))
}

fn form(terms: &[(&[usize], i64)]) -> Multivector {
    Multivector::from_int_terms(7, Variance::Form, terms)
}

/// `ε(e^{1256}+e^{3456}) + e^{1234} − e^{2467} + e^{2357} + e^{1457} + e^{1367}`, written out.
fn literal_hodge_dual(eps: i64) -> Multivector {
    form(&[
        (&[1, 2, 5, 6], eps),
        (&[3, 4, 5, 6], eps),
        (&[1, 2, 3, 4], 1),
        (&[2, 4, 6, 7], -1),
        (&[2, 3, 5, 7], 1),
        (&[1, 4, 5, 7], 1),
        (&[1, 3, 6, 7], 1),
    ])
}

fn check_certificate(cert: &Certificate, f: &Matrix, m: &mut Metrics) -> CaseResult {
    let r = verify_certificate(cert, f).map_err(s)?;
    ensure!(r.passed(), "certificate for {} fails: {:?}", cert.kind, r.failures());
    match cert.kind {
        Kind::G2 => ensure!(r.signature == Some((7, 0)), "G2 signature {:?}", r.signature),
        Kind::G2Star => ensure!(r.signature == Some((3, 4)), "G2STAR signature {:?}", r.signature),
        Kind::G2C => ensure!(r.classification == Some(Classification::G2C), "G2C classification {:?}", r.classification),
    }
    bump(m, "certificates_verified");
    Ok(())
}

fn standard_forms(m: &mut Metrics) -> Vec<(&'static str, CaseResult)> {
    let vol = standard_volume();
    let g2 = standard_three_form(StandardFormSpec::of(Kind::G2));
    let g2s = standard_three_form(StandardFormSpec::of(Kind::G2Star));
    let mut out: Vec<(&'static str, CaseResult)> = Vec::new();
    out.push(("gram of the standard G2 form is the identity", (|| {
        let g = induced_bilinear(&g2, &vol).map_err(s)?;
        ensure!(g == Matrix::identity(7), "gram = {}", rows_str(&g));
        Ok(())
    })()));
    out.push(("gram of the standard G2* form is diag(-1,-1,-1,-1,1,1,1)", (|| {
        let g = induced_bilinear(&g2s, &vol).map_err(s)?;
        ensure!(g == diag(&[-1, -1, -1, -1, 1, 1, 1]), "gram = {}", rows_str(&g));
        Ok(())
    })()));
    for (name, phi, eps) in [("hodge dual of the G2 form", &g2, 1), ("hodge dual of the G2* form", &g2s, -1)] {
        out.push((name, (|| {
            let g = induced_bilinear(phi, &vol).map_err(s)?;
            let star = hodge_star(phi, &g, &vol).map_err(s)?;
            ensure!(star == literal_hodge_dual(eps), "star phi = {star}");
            ensure!(hodge_dual_pattern(eps as i8) == literal_hodge_dual(eps), "pattern constant differs");
            Ok(())
        })()));
    }
    out.push(("complex hodge dual", (|| {
        let phi = standard_three_form(StandardFormSpec::of(Kind::G2C));
        ensure!(classify_three_form(&phi, true).map_err(s)? == Classification::G2C, "not G2C");
        let g = induced_bilinear(&phi, &vol).map_err(s)?;
        let star = hodge_star(&phi, &g, &vol).map_err(s)?;
        let eq2 = form(&[
            (&[1, 2, 3, 4], 1),
            (&[1, 2, 5, 6], 1),
            (&[3, 4, 5, 6], 1),
            (&[2, 4, 6, 7], -1),
            (&[2, 3, 5, 7], 1),
            (&[1, 4, 5, 7], 1),
            (&[1, 3, 6, 7], 1),
        ]);
        ensure!(star == eq2, "star phi = {star}");
        Ok(())
    })()));
    out.push(("star star is the identity in every degree", (|| {
        for phi in [&g2, &g2s] {
            let g = induced_bilinear(phi, &vol).map_err(s)?;
            for k in 0..=7 {
                for b in blades(7, k) {
                    let e = Multivector::basis(7, Variance::Form, &blade_indices(b));
                    let once = hodge_star(&e, &g, &vol).map_err(s)?;
                    let twice = hodge_star(&once, &g, &vol).map_err(s)?;
                    ensure!(twice == e, "star star {e} = {twice}");
                    bump(m, "star_star_checks");
                }
            }
        }
        Ok(())
    })()));
    out.push(("recognition of standard and degenerate forms", (|| {
        ensure!(classify_three_form(&g2, false).map_err(s)? == Classification::G2, "G2 form");
        ensure!(classify_three_form(&g2s, false).map_err(s)? == Classification::G2Star, "G2* form");
        let sig = induced_bilinear(&g2s, &vol).map_err(s)?.signature().map_err(s)?;
        ensure!((sig.positive, sig.negative) == (3, 4), "G2* signature {sig:?}");
        let e123 = form(&[(&[1, 2, 3], 1)]);
        ensure!(classify_three_form(&e123, false).map_err(s)? == Classification::None, "e^123");
        Ok(())
    })()));
    out.push(("standard certificate for F = 0", (|| {
        let f = Matrix::zeros(6, 6);
        let c = build_certificate(&f, Kind::G2, FieldMode::Rational).map_err(s)?;
        ensure!(c.psi == literal_hodge_dual(1), "psi = {}", c.psi);
        ensure!(c.scale.is_one(), "scale {}", c.scale);
        ensure!(c.exhibited_basis.matrix().map_err(s)? == Matrix::identity(7), "basis not the identity");
        check_certificate(&c, &f, m)?;
        let mut bad = c.clone();
        bad.psi = bad.psi.add(&form(&[(&[1, 2, 3, 4], 1)]));
        let r = verify_certificate(&bad, &f).map_err(s)?;
        ensure!(r.failures().iter().any(|x| x.starts_with("pattern")), "perturbed certificate passed the pattern check");
        Ok(())
    })()));
    out
}

fn corpus_fixture(m: &mut Metrics) -> Vec<(&'static str, CaseResult)> {
    let man = manifest();
    let mut out: Vec<(&'static str, CaseResult)> = Vec::new();
    for (entry, row) in nilpotent_corpus().into_iter().zip(&man.rows) {
        let r = (|| {
            let g = entry.record.to_algebra().map_err(s)?;
            let rep = crate::report::decide_algebra(&g, Tolerances::default(), String::new()).map_err(s)?;
            let d = rep.decisions;
            ensure!(rep.exact, "{:?}: not exact", entry.partition);
            ensure!(d.g2 == Some(row.expected_g2), "{:?}: g2 = {:?}", entry.partition, d.g2);
            ensure!(d.g2star == Some(row.expected_g2star), "{:?}: g2star = {:?}", entry.partition, d.g2star);
            ensure!(
                (rep.oracle.g2, rep.oracle.g2star) == (row.expected_g2, row.expected_g2star),
                "{:?}: oracle {:?}",
                entry.partition,
                rep.oracle
            );
            let f = &entry.f;
            if row.expected_g2 {
                check_certificate(&build_certificate(f, Kind::G2, FieldMode::Rational).map_err(s)?, f, m)?;
            }
            check_certificate(&build_certificate(f, Kind::G2Star, FieldMode::Rational).map_err(s)?, f, m)?;
            check_certificate(&build_certificate(f, Kind::G2C, FieldMode::GaussianRational).map_err(s)?, f, m)?;
            bump(m, "partitions");
            Ok(())
        })();
        out.push(("nilpotent partition", r.map_err(|e| format!("{:?}: {e}", entry.partition))));
    }
    out
}

fn decision_examples(m: &mut Metrics) -> Vec<(&'static str, CaseResult)> {
    let tol = Tolerances::default();
    let dec = |f: &Matrix| decide_matrix(f, FieldMode::Rational, tol, String::new()).map_err(s);
    let mut out: Vec<(&'static str, CaseResult)> = Vec::new();
    out.push(("identity decides false everywhere", (|| {
        let d = dec(&Matrix::identity(6))?.decisions;
        ensure!(d.g2 == Some(false) && d.g2star == Some(false) && !d.g2c, "{d:?}");
        Ok(())
    })()));
    out.push(("diag(1,-1,2,-2,0,0) is symplectic", (|| {
        let d = dec(&diag(&[1, -1, 2, -2, 0, 0]))?.decisions;
        ensure!(d.g2 == Some(true), "{d:?}");
        Ok(())
    })()));
    out.push(("diag(2,2,2,2,-2,-2) is split only", (|| {
        let f = diag(&[2, 2, 2, 2, -2, -2]);
        let d = dec(&f)?.decisions;
        ensure!(d.g2 == Some(false) && d.g2star == Some(true), "{d:?}");
        check_certificate(&build_certificate(&f, Kind::G2Star, FieldMode::Rational).map_err(s)?, &f, m)?;
        Ok(())
    })()));
    out.push(("partition search examples", (|| {
        let two = |x: i64| (Scalar::from_i64(x), 1);
        let l = JnfLayout::from_blocks(&[two(2), two(2), two(2), two(2), two(-2), two(-2)]);
        let p = partition_search(&l, 1e-9).ok_or("no partition for (2,2,2,2,-2,-2)")?;
        ensure!(p.one_based() == [[1, 2], [3, 4], [5, 6]], "{:?}", p.one_based());
        let ones = JnfLayout::from_blocks(&[two(1), two(1), two(1), two(1), two(1), two(1)]);
        ensure!(partition_search(&ones, 1e-9).is_none(), "identity layout has a partition");
        let j6 = JnfLayout::from_blocks(&[(Scalar::zero(), 6)]);
        let p = partition_search(&j6, 1e-9).ok_or("no partition for J6(0)")?;
        ensure!(p == PairPartition::enumerate()[0], "{:?}", p.one_based());
        Ok(())
    })()));
    out.push(("invariant symplectic forms", (|| {
        let w = invariant_symplectic_form(&Matrix::zeros(6, 6)).ok_or("none for F = 0")?;
        ensure!(!w.wedge_power(3).is_zero(), "degenerate");
        ensure!(invariant_symplectic_form(&Matrix::identity(6)).is_none(), "identity has one");
        Ok(())
    })()));
    out.push(("isomorphism examples", (|| {
        let r = iso_test_matrices(&diag(&[1, 2, 3, 4, 5, 6]), &diag(&[2, 4, 6, 8, 10, 12]), FieldMode::Rational, 1e-7, 1e-9);
        ensure!(r.isomorphic && r.exact && r.gamma == Some(Scalar::ratio(1, 2)), "{r:?}");
        let r = iso_test_matrices(&diag(&[1, 2, 3, 4, 5, 6]), &nilpotent_jordan(&[2, 1, 1, 1, 1]), FieldMode::Rational, 1e-7, 1e-9);
        ensure!(!r.isomorphic, "{r:?}");
        Ok(())
    })()));
    out.push(("heisenberg plus abelian has an ideal", (|| {
        let mut v = vec![Scalar::zero(); 7];
        v[2] = Scalar::one();
        let g = LieAlgebra::from_brackets(7, FieldMode::Rational, &[(0, 1, v)]).map_err(s)?;
        let data = g.find_codim1_abelian_ideal().data.ok_or("no ideal")?;
        ensure!(g.is_abelian_subspace(&data.ideal_basis), "not Abelian");
        ensure!(nilpotent_partition(&data.f) == Some(vec![2, 1, 1, 1, 1]), "{:?}", nilpotent_partition(&data.f));
        Ok(())
    })()));
    out
}

/// Jordan decisions against the oracle, symplectic forms, report invariants
/// and certificates on one random conjugated block model.
fn random_models(rng: &mut TestRng, m: &mut Metrics) -> CaseResult {
    let (model, f) = random_model_matrix(rng);
    let field = model.field;
    let ctx = || format!("{} model {:?} conjugated to {}", model.template, model.blocks, rows_str(&f));
    // the report runs both algorithms and fails on exact disagreement
    let report = decide_matrix(&f, field, Tolerances::default(), String::new()).map_err(|e| format!("{e} for {}", ctx()))?;
    bump(m, "cases");
    bump(m, "reports_checked");
    if field == FieldMode::GaussianRational {
        bump(m, "gaussian_field");
    }
    ensure!(report.exact, "spectrum not exact for {}", ctx());
    bump(m, "exact");
    if report.route_b == Some(report.route_a) {
        bump(m, "route_agree");
    }
    let (g2, g2star) = (report.route_a, report.partition.is_some());
    let oracle = &report.oracle;
    ensure!((g2, g2star) == (oracle.g2, oracle.g2star), "jordan ({g2}, {g2star}) vs oracle {:?} for {}", oracle, ctx());
    bump(m, "oracle_agree");
    let omega = invariant_symplectic_form(&f);
    ensure!(omega.is_some() == g2, "symplectic form {} but sp_similar {g2} for {}", omega.is_some(), ctx());
    if let Some(w) = &omega {
        ensure!(Multivector::derivation_action(&f, w).is_zero(), "returned form is not invariant");
        ensure!(!w.wedge_power(3).is_zero(), "returned form is degenerate");
    }
    bump(m, "symplectic_agree");
    ensure!(!g2 || g2star, "sp_similar without a partition for {}", ctx());
    let mut kinds = Vec::new();
    if f.is_real() {
        if g2 {
            kinds.push(Kind::G2);
        }
        if g2star {
            kinds.push(Kind::G2Star);
        }
    } else if report.decisions.g2c {
        kinds.push(Kind::G2C);
    }
    if g2 {
        bump(m, "g2_true");
    }
    if g2star {
        bump(m, "g2star_true");
    }
    for kind in kinds {
        bump(m, "positive_decisions");
        let cert = build_certificate(&f, kind, field).map_err(|e| format!("{kind} certificate: {e} for {}", ctx()))?;
        bump(m, &format!("path_{}", cert.path));
        check_certificate(&cert, &f, m).map_err(|e| format!("{e} for {}", ctx()))?;
    }
    Ok(())
}

/// Null covector of `diag(-1,-1,-1,-1,1,1,1)`: matching squares on both sides.
fn random_null_covector(rng: &mut TestRng) -> Vec<Scalar> {
    loop {
        let xs: Vec<i64> = (0..3).map(|_| rng.random_range(-3..=3)).collect();
        if xs.iter().all(|&x| x == 0) {
            continue;
        }
        let mut left: Vec<i64> = xs.clone();
        left.push(0);
        let mut right = xs.clone();
        for v in [&mut left[..], &mut right[..]] {
            for i in (1..v.len()).rev() {
                v.swap(i, rng.random_range(0..=i));
            }
            for x in v.iter_mut() {
                if rng.random_bool(0.5) {
                    *x = -*x;
                }
            }
        }
        let q = nonzero_rational(rng);
        return left.iter().chain(&right).map(|&x| &Scalar::from_i64(x) * &q).collect();
    }
}

fn null_direction(rng: &mut TestRng, m: &mut Metrics) -> CaseResult {
    let alpha = if rng.random_bool(0.5) {
        random_null_covector(rng)
    } else {
        loop {
            let a = random_vector(rng, 7, 3);
            if a.iter().any(|x| !x.is_zero()) {
                break a;
            }
        }
    };
    let vol6 = Volume::standard(6, Variance::Vector);
    let dual_split = dual_gram(&induced_bilinear(&standard_three_form(StandardFormSpec::of(Kind::G2Star)), &standard_volume()).map_err(s)?)
        .map_err(s)?;
    let null = covector_norm(&dual_split, &alpha).is_zero();
    let omega = decompose_along(&hodge_dual_pattern(-1), &alpha).map_err(s)?.omega;
    let len = omega.length_cograde2(&vol6).map_err(s)?;
    ensure!(len == if null { 2 } else { 3 }, "split dual: alpha {alpha:?} null {null} but length {len}");
    bump(m, if null { "null" } else { "non_null" });
    let omega = decompose_along(&hodge_dual_pattern(1), &alpha).map_err(s)?.omega;
    let len = omega.length_cograde2(&vol6).map_err(s)?;
    ensure!(len == 3, "compact dual: alpha {alpha:?} gives length {len}");
    bump(m, "compact");
    Ok(())
}

fn e(n: usize, k: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[k] = Scalar::one();
    v
}

fn sample_algebra(rng: &mut TestRng) -> LieAlgebra {
    match rng.random_range(0..5) {
        0 => {
            let parts = crate::random::partitions_of(6);
            LieAlgebra::from_matrix(&nilpotent_jordan(parts.choose(rng).unwrap()), FieldMode::Rational).unwrap()
        }
        1 => {
            let (model, f) = random_model_matrix(rng);
            LieAlgebra::from_matrix(&f, model.field).unwrap()
        }
        2 => LieAlgebra::from_brackets(7, FieldMode::Rational, &[(0, 1, e(7, 2))]).unwrap(),
        3 => {
            // sl(2) ⊕ abelian: [h,x] = 2x, [h,y] = −2y, [x,y] = h
            let two = |k: usize, c: i64| {
                let mut v = vec![Scalar::zero(); 7];
                v[k] = Scalar::from_i64(c);
                v
            };
            LieAlgebra::from_brackets(7, FieldMode::Rational, &[(0, 1, two(1, 2)), (0, 2, two(2, -2)), (1, 2, two(0, 1))]).unwrap()
        }
        _ => {
            // free 2-step nilpotent on three generators plus a line
            LieAlgebra::from_brackets(7, FieldMode::Rational, &[(0, 1, e(7, 3)), (0, 2, e(7, 4)), (1, 2, e(7, 5))]).unwrap()
        }
    }
}

fn d_squared(rng: &mut TestRng, m: &mut Metrics) -> CaseResult {
    let g = sample_algebra(rng);
    g.validate().map_err(s)?;
    let k = rng.random_range(0..=5);
    let rho = random_form(rng, 7, k, Variance::Form, 0.3);
    let dd = g.ce_differential(&g.ce_differential(&rho));
    ensure!(dd.is_zero(), "d d rho = {dd} for rho = {rho}");
    bump(m, "checked");
    Ok(())
}

fn semidirect_differential(rng: &mut TestRng, m: &mut Metrics) -> CaseResult {
    let (field, f) = if rng.random_bool(0.5) {
        let (model, f) = random_model_matrix(rng);
        (model.field, f)
    } else {
        (FieldMode::Rational, random_matrix(rng, 6, 3))
    };
    let g = LieAlgebra::from_matrix(&f, field).map_err(s)?;
    let k = rng.random_range(0..=6);
    let rho = random_form(rng, 6, k, Variance::Form, 0.4);
    let rho7 = rho.reembed(7).map_err(s)?;
    let e7 = Multivector::basis(7, Variance::Form, &[6]);
    let expected = e7.wedge(&Multivector::derivation_action(&f, &rho).reembed(7).map_err(s)?);
    let got = g.ce_differential(&rho7);
    ensure!(got == expected, "d rho = {got}, expected {expected}, F = {}", rows_str(&f));
    ensure!(g.ce_differential(&e7.wedge(&rho7)).is_zero(), "d(e7 ^ rho) != 0");
    ensure!(g.ce_differential(&e7).is_zero(), "d e7 != 0");
    bump(m, "checked");
    Ok(())
}

fn random_bivector(rng: &mut TestRng, dim: usize, terms: usize) -> Multivector {
    let mut x = Multivector::zero(dim, 2, Variance::Vector);
    for _ in 0..terms {
        let u = Multivector::vector_from_coords(&random_vector(rng, dim, 2), Variance::Vector);
        let v = Multivector::vector_from_coords(&random_vector(rng, dim, 2), Variance::Vector);
        x = x.add(&u.wedge(&v));
    }
    x
}

fn length_preservation(rng: &mut TestRng, m: &mut Metrics) -> CaseResult {
    let terms = rng.random_range(0..=3);
    let x = random_bivector(rng, 6, terms);
    let f = invertible(rng, 6, 3);
    let (a, b) = (x.length_grade2(), x.pushforward(&f).length_grade2());
    ensure!(a == b, "length {a} becomes {b} under {}", rows_str(&f));
    bump(m, "gcp");
    let n = rng.random_range(5..=7);
    let y = random_form(rng, n, n - 2, Variance::Form, 0.3);
    let vol = Volume::standard(n, Variance::Vector);
    let l1 = y.length_cograde2(&vol).map_err(s)?;
    let l2 = dual_iso(&y, &vol).map_err(s)?.length_grade2();
    let q = Scalar::ratio(rng.random_range(1..=9), rng.random_range(1..=9));
    let l3 = y.length_cograde2(&Volume::scaled(n, Variance::Vector, q).map_err(s)?).map_err(s)?;
    let l4 = dual_iso_inverse(&y, &Volume::standard(n, Variance::Form)).map_err(s)?.length_grade2();
    ensure!(l1 == l2 && l2 == l3 && l3 == l4, "dual lengths {l1} {l2} {l3} {l4} for {y}");
    bump(m, "dual");
    Ok(())
}

fn same_decisions(a: &DecisionReport, b: &DecisionReport) -> bool {
    a.decisions == b.decisions && a.nilpotent_partition == b.nilpotent_partition
}

fn decision_invariance(rng: &mut TestRng, m: &mut Metrics) -> CaseResult {
    let (model, f) = random_model_matrix(rng);
    let tol = Tolerances::default();
    let base = decide_matrix(&f, model.field, tol, String::new()).map_err(s)?;
    let conj = conjugate(rng, &f);
    let r = decide_matrix(&conj, model.field, tol, String::new()).map_err(s)?;
    ensure!(same_decisions(&base, &r), "conjugation changes {:?} to {:?} for {}", base.decisions, r.decisions, rows_str(&f));
    bump(m, "conjugation");
    let gamma = if model.field == FieldMode::GaussianRational && rng.random_bool(0.5) {
        loop {
            let g = small_gaussian(rng);
            if !g.is_zero() {
                break g;
            }
        }
    } else {
        nonzero_rational(rng)
    };
    let r = decide_matrix(&f.scale(&gamma), model.field, tol, String::new()).map_err(s)?;
    // a non-real factor leaves only the complex structures comparable
    let same = if gamma.is_real() {
        same_decisions(&base, &r)
    } else {
        (base.decisions.g2c, base.decisions.g2c_nondeg_u) == (r.decisions.g2c, r.decisions.g2c_nondeg_u)
    };
    ensure!(same, "scaling by {gamma} changes {:?} to {:?}", base.decisions, r.decisions);
    bump(m, "scaling");
    Ok(())
}

/// The algebra in the basis given by the columns of `q`.
fn change_basis(g: &LieAlgebra, q: &Matrix) -> LieAlgebra {
    let n = g.dim();
    let mut brackets = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let b = g.bracket(&q.column(i), &q.column(j));
            let coords = q.solve(&b).expect("invertible basis change");
            if coords.iter().any(|c| !c.is_zero()) {
                brackets.push((i, j, coords));
            }
        }
    }
    LieAlgebra::from_brackets(n, g.field(), &brackets).expect("valid brackets")
}

fn isomorphism_moves(rng: &mut TestRng, m: &mut Metrics) -> CaseResult {
    let (model, f) = random_model_matrix(rng);
    let field = model.field;
    let gamma = nonzero_rational(rng);
    let moved = conjugate(rng, &f.scale(&gamma));
    let g = LieAlgebra::from_matrix(&f, field).map_err(s)?;
    let h = LieAlgebra::from_matrix(&moved, field).map_err(s)?;
    let tol = Tolerances::default();
    let r = iso_test(&g, &h, tol.cluster_tol, tol.numeric_tol).map_err(s)?;
    ensure!(r.isomorphic && r.exact, "iso_test {r:?} for F = {} and gamma = {gamma}", rows_str(&f));
    let back = iso_test(&h, &g, tol.cluster_tol, tol.numeric_tol).map_err(s)?;
    ensure!(back.isomorphic, "iso_test is not symmetric");
    ensure!(iso_test(&g, &g, tol.cluster_tol, tol.numeric_tol).map_err(s)?.isomorphic, "iso_test is not reflexive");
    let a = decide_matrix(&f, field, tol, String::new()).map_err(s)?;
    let b = decide_matrix(&moved, field, tol, String::new()).map_err(s)?;
    ensure!(a.decisions == b.decisions, "decisions {:?} vs {:?}", a.decisions, b.decisions);
    bump(m, "moves");
    // a basis change of the whole algebra keeps the answer; only when the
    // ideal is forced (F invertible) so the search is exact
    if !f.det().is_zero() {
        let q = invertible(rng, 7, 2);
        let h2 = change_basis(&h, &q);
        let r = iso_test(&g, &h2, tol.cluster_tol, tol.numeric_tol).map_err(s)?;
        ensure!(r.isomorphic, "basis change of the second algebra breaks iso_test");
        bump(m, "basis_changes");
    }
    Ok(())
}

fn ideal_recovery(rng: &mut TestRng, m: &mut Metrics) -> CaseResult {
    let (model, f) = random_model_matrix(rng);
    let g = LieAlgebra::from_matrix(&f, model.field).map_err(s)?;
    g.validate().map_err(s)?;
    let data = g.find_codim1_abelian_ideal().data.ok_or_else(|| format!("no ideal for {}", rows_str(&f)))?;
    ensure!(similar(&data.f, &f), "recovered F is not similar: {} vs {}", rows_str(&data.f), rows_str(&f));
    ensure!(nilpotent_partition(&data.f) == nilpotent_partition(&f), "partition changed");
    bump(m, "recovered");
    Ok(())
}

fn round_trip(rng: &mut TestRng, m: &mut Metrics) -> CaseResult {
    let x = if rng.random_bool(0.5) { small_gaussian(rng) } else { nonzero_rational(rng) };
    let back: Scalar = x.to_string().parse().map_err(s)?;
    ensure!(back == x, "scalar {x} parsed as {back}");
    let n = rng.random_range(1..=7);
    let k = rng.random_range(0..=n);
    let var = if rng.random_bool(0.5) { Variance::Form } else { Variance::Vector };
    let rho = random_form(rng, n, k, var, 0.5);
    let back: Multivector = from_json(&to_json(&rho).map_err(s)?).map_err(s)?;
    ensure!(back == rho, "form {rho} round-trips to {back}");
    let (model, f) = random_model_matrix(rng);
    let rec = MatrixRecord::new(model.field, &f);
    let back: MatrixRecord = from_json(&to_json(&rec).map_err(s)?).map_err(s)?;
    ensure!(back.to_matrix().map_err(s)? == f, "matrix record");
    let g = LieAlgebra::from_matrix(&f, model.field).map_err(s)?;
    let rec = LieAlgebraRecord::from_algebra(&g);
    let back: LieAlgebraRecord = from_json(&to_json(&rec).map_err(s)?).map_err(s)?;
    ensure!(back == rec && back.to_algebra().map_err(s)? == g, "Lie algebra record");
    let report = decide_matrix(&f, model.field, Tolerances::default(), String::new()).map_err(s)?;
    let back: DecisionReport = from_json(&to_json(&report).map_err(s)?).map_err(s)?;
    ensure!(back == report, "decision report");
    if rng.random_range(0..10) == 0 && report.decisions.g2c {
        let kind = if f.is_real() { Kind::G2Star } else { Kind::G2C };
        let cert = build_certificate(&f, kind, model.field).map_err(s)?;
        let back: Certificate = from_json(&to_json(&cert).map_err(s)?).map_err(s)?;
        ensure!(back == cert, "certificate");
        bump(m, "certificates");
    }
    bump(m, "values");
    Ok(())
}

fn polarization(rng: &mut TestRng, m: &mut Metrics) -> CaseResult {
    let xs: Vec<Multivector> = (0..3)
        .map(|_| {
            let t = rng.random_range(1..=2);
            random_bivector(rng, 6, t)
        })
        .collect();
    // coefficients of the cubic in (a, b, c) are multiples of X^i Y^j Z^k
    let mut cubic_nonzero = false;
    for i in 0..=3 {
        for j in 0..=3 - i {
            let k = 3 - i - j;
            let t = xs[0].wedge_power(i).wedge(&xs[1].wedge_power(j)).wedge(&xs[2].wedge_power(k));
            cubic_nonzero |= !t.is_zero();
        }
    }
    let ml = max_length(&xs);
    ensure!((ml.maxlen == 3) == cubic_nonzero, "grid maxlen {} but cubic nonzero = {cubic_nonzero}", ml.maxlen);
    if let Some(c) = &ml.witness {
        let w = xs.iter().zip(c).fold(Multivector::zero(6, 2, Variance::Vector), |acc, (x, k)| acc.add(&x.scale(k)));
        ensure!(w.length_grade2() == ml.maxlen, "witness has length {}", w.length_grade2());
    }
    bump(m, if cubic_nonzero { "length3" } else { "below3" });
    Ok(())
}

fn exterior_laws(rng: &mut TestRng, m: &mut Metrics) -> CaseResult {
    let n = rng.random_range(3..=7);
    let var = if rng.random_bool(0.5) { Variance::Form } else { Variance::Vector };
    let (ga, gb, gc) = (rng.random_range(0..=n), rng.random_range(0..=n), rng.random_range(0..=n));
    let a = random_form(rng, n, ga, var, 0.4);
    let b = random_form(rng, n, gb, var, 0.4);
    let c = random_form(rng, n, gc, var, 0.4);
    let sign = Scalar::from_i64(if (ga * gb) % 2 == 0 { 1 } else { -1 });
    if ga + gb <= n {
        ensure!(a.wedge(&b) == b.wedge(&a).scale(&sign), "graded commutativity fails for {a} and {b}");
    }
    if ga + gb + gc <= n {
        ensure!(a.wedge(&b).wedge(&c) == a.wedge(&b.wedge(&c)), "associativity fails");
    }
    let f = random_matrix(rng, n, 2);
    let g = random_matrix(rng, n, 2);
    let rho = random_form(rng, n, ga, Variance::Form, 0.4);
    let lhs = Multivector::derivation_action(&f.mul(&g).sub(&g.mul(&f)), &rho);
    let rhs = Multivector::derivation_action(&f, &Multivector::derivation_action(&g, &rho))
        .sub(&Multivector::derivation_action(&g, &Multivector::derivation_action(&f, &rho)));
    ensure!(lhs == rhs, "derivation action is not a Lie action on {rho}");
    let p = invertible(rng, n, 2);
    let back = a.pushforward(&p).pushforward(&p.inverse().map_err(s)?);
    ensure!(back == a, "pushforward is not inverted by the inverse matrix");
    if m.get("rewedge").copied().unwrap_or(0) < 100 {
        let terms = rng.random_range(0..=3);
        let x = random_bivector(rng, n.max(4), terms);
        let sb = x.symplectic_basis();
        let v = |i: usize| Multivector::vector_from_coords(&sb.vectors[i], Variance::Vector);
        let rebuilt = (0..sb.length).fold(Multivector::zero(x.dim(), 2, Variance::Vector), |acc, i| acc.add(&v(2 * i).wedge(&v(2 * i + 1))));
        ensure!(rebuilt == x, "symplectic basis re-wedges to {rebuilt}, not {x}");
        ensure!(sb.length == x.length_grade2(), "length mismatch");
        bump(m, "rewedge");
    }
    bump(m, "checked");
    Ok(())
}

fn linear_algebra(rng: &mut TestRng, m: &mut Metrics) -> CaseResult {
    let a = random_matrix(rng, 6, 3);
    let c = conjugate(rng, &a);
    ensure!(similar(&a, &c), "{} not similar to its conjugate", rows_str(&a));
    let sym = {
        let r = random_matrix(rng, 5, 3);
        r.add(&r.transpose())
    };
    let p = invertible(rng, 5, 3);
    let (s1, s2) = (sym.signature().map_err(s)?, p.transpose().mul(&sym).mul(&p).signature().map_err(s)?);
    ensure!(s1 == s2, "signature {s1:?} vs {s2:?} under congruence");
    bump(m, "checked");
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_pass_with_zero_trials() {
        let s = run_selftest(DEFAULT_SEED, Some(0), &[]);
        assert!(s.passed, "{:#?}", s.suites.iter().filter(|x| !x.passed()).collect::<Vec<_>>());
        assert!(s.suites.iter().filter(|x| x.name == "random_models").all(|x| x.cases == 0));
        assert!(s.suite("standard_forms").unwrap().cases > 0);
    }

    #[test]
    fn small_runs_are_reproducible() {
        let only: Vec<String> = vec!["random_models".into(), "null_direction".into()];
        let a = run_selftest(7, Some(5), &only);
        let b = run_selftest(7, Some(5), &only);
        assert!(a.passed, "{a:#?}");
        assert_eq!(a.suites.iter().map(|x| &x.metrics).collect::<Vec<_>>(), b.suites.iter().map(|x| &x.metrics).collect::<Vec<_>>());
    }
}
