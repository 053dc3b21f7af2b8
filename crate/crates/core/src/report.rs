//! Decision reports: the Jordan-level decisions, the closed-form oracle and
//! the consistency checks between them.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::certificate::CertificatePath;
use crate::error::{Error, Result};
use crate::exterior::Multivector;
use crate::g2::hodge_dual_pattern;
use crate::jordan::{JnfLayout, JordanDecisions, PairPartition};
use crate::lie::{nilpotent_partition, LieAlgebra};
use crate::matrix::Matrix;
use crate::oracle::{oracle_decide, OracleDecision};
use crate::scalar::{FieldMode, Scalar};

/// Tolerances for the numeric fallbacks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub numeric_tol: f64,
    pub cluster_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { numeric_tol: 1e-9, cluster_tol: 1e-7 }
    }
}

pub fn digest_bytes(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// The five existence answers. Real-structure answers are `None` when `F`
/// has non-real entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decisions {
    pub g2: Option<bool>,
    pub g2star: Option<bool>,
    pub g2star_nondeg_u: Option<bool>,
    pub g2c: bool,
    pub g2c_nondeg_u: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Methods {
    pub g2: String,
    pub g2star: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegreRecord {
    pub eigenvalue: String,
    pub blocks: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificatePaths {
    pub g2: Option<CertificatePath>,
    pub g2star: Option<CertificatePath>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionReport {
    pub input_digest: String,
    pub field: FieldMode,
    /// Always `"codim_one_abelian_ideal"`; other algebra classes would carry a different tag.
    pub scope: String,
    pub ideal_found: bool,
    pub ideal_search_exhaustive: bool,
    pub f: Vec<Vec<Scalar>>,
    /// True when the Jordan-level routes ran on exact eigenvalues.
    pub exact: bool,
    pub decisions: Decisions,
    pub methods: Methods,
    pub route_a: bool,
    pub route_b: Option<bool>,
    pub segre: Vec<SegreRecord>,
    /// Eigenvalue at each Jordan position; partition indices refer to this order.
    pub layout: Vec<String>,
    pub partition: Option<PairPartition>,
    pub nilpotent_partition: Option<Vec<usize>>,
    pub oracle: OracleDecision,
    pub certificate_path: CertificatePaths,
    pub warnings: Vec<String>,
}

fn planned_path(f: &Matrix, eps: &[i8], maxlen: usize) -> CertificatePath {
    let canonical = eps.iter().any(|&e| Multivector::derivation_action(f, &hodge_dual_pattern(e).split_last().0).is_zero());
    if canonical {
        CertificatePath::Canonical
    } else if maxlen == 3 {
        CertificatePath::Length3
    } else {
        CertificatePath::Length2
    }
}

/// Decide everything for `F = ad(e₇)|_u`.
pub fn decide_matrix(f: &Matrix, field: FieldMode, tol: Tolerances, input_digest: String) -> Result<DecisionReport> {
    if f.rows() != 6 || !f.is_square() {
        return Err(Error::Dimension("decisions need a 6×6 matrix".into()));
    }
    f.check_field(field)?;
    let mut warnings = Vec::new();
    let jd = JordanDecisions::compute(f, tol.cluster_tol, tol.numeric_tol)?;
    let oracle = oracle_decide(f);
    let exact = jd.segre.exact;
    let (nondeg, mut full) = (jd.g2(), jd.g2star());
    let oracle_nondeg = oracle.g2;
    let oracle_full = oracle.g2star;
    let mut methods = Methods {
        g2: if exact { "sp_similar:route_a+route_b".into() } else { "sp_similar:route_a".into() },
        g2star: if exact { "partition_search".into() } else { "oracle".into() },
    };
    if nondeg != oracle_nondeg {
        return Err(Error::CrossCheck(format!("sp_similar = {nondeg} but closed-form oracle gives {oracle_nondeg}")));
    }
    if full != oracle_full {
        if exact {
            return Err(Error::CrossCheck(format!("partition_search = {full} but closed-form oracle gives {oracle_full}")));
        }
        warnings.push(format!("numeric partition search gave {full}; using the exact oracle answer {oracle_full}"));
        full = oracle_full;
    }
    if !exact {
        warnings.push("spectrum not exact in the field; Jordan block pairing is advisory".into());
        methods.g2star = "oracle (partition_search advisory)".into();
    }
    let real = f.is_real();
    if !real {
        warnings.push("F has non-real entries; only complex structures are decided".into());
    }
    let decisions = Decisions {
        g2: real.then_some(nondeg),
        g2star: real.then_some(full),
        g2star_nondeg_u: real.then_some(nondeg),
        g2c: full,
        g2c_nondeg_u: nondeg,
    };
    let certificate_path = CertificatePaths {
        g2: (nondeg && real).then(|| planned_path(f, &[1], oracle.maxlen)),
        g2star: full.then(|| planned_path(f, &[-1], oracle.maxlen)),
    };
    let report = DecisionReport {
        input_digest,
        field,
        scope: "codim_one_abelian_ideal".into(),
        ideal_found: true,
        ideal_search_exhaustive: true,
        f: f.to_rows(),
        exact,
        decisions,
        methods,
        route_a: jd.sp.route_a,
        route_b: jd.sp.route_b,
        segre: jd.segre.entries.iter().map(|e| SegreRecord { eigenvalue: e.eigenvalue.to_string(), blocks: e.blocks.clone() }).collect(),
        layout: JnfLayout::from_segre(&jd.segre).lambdas.iter().map(|l| l.to_string()).collect(),
        partition: if exact { jd.partition } else { None },
        nilpotent_partition: nilpotent_partition(f),
        oracle,
        certificate_path,
        warnings,
    };
    check_invariants(&report)?;
    Ok(report)
}

/// Validate, locate the ideal, then decide.
pub fn decide_algebra(g: &LieAlgebra, tol: Tolerances, input_digest: String) -> Result<DecisionReport> {
    if g.dim() != 7 {
        return Err(Error::InvalidAlgebra(format!("expected a 7-dimensional algebra, got dimension {}", g.dim())));
    }
    g.validate()?;
    let search = g.find_codim1_abelian_ideal();
    let Some(data) = search.data else {
        return Err(Error::NoIdeal(search.warnings.join("; ")));
    };
    let mut report = decide_matrix(&data.f, g.field(), tol, input_digest)?;
    report.ideal_search_exhaustive = search.exhaustive;
    report.warnings.extend(search.warnings);
    Ok(report)
}

/// Report-level consistency: G₂ ⇒ G₂*, the nondegenerate channels agree,
/// and the real and complex G₂* answers agree on real input.
pub fn check_invariants(r: &DecisionReport) -> Result<()> {
    let d = &r.decisions;
    let mut bad = Vec::new();
    if let (Some(a), Some(b)) = (d.g2, d.g2star) {
        if a && !b {
            bad.push("g2 without g2star");
        }
        if Some(a) != d.g2star_nondeg_u || a != d.g2c_nondeg_u {
            bad.push("g2, g2star_nondeg_u and g2c_nondeg_u differ");
        }
        if b != d.g2c {
            bad.push("g2star differs from g2c");
        }
    }
    if d.g2c_nondeg_u && !d.g2c {
        bad.push("g2c_nondeg_u without g2c");
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::CrossCheck(format!("report invariants violated: {}", bad.join(", "))))
    }
}

fn show(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "yes",
        Some(false) => "no",
        None => "n/a",
    }
}

impl DecisionReport {
    pub fn render_text(&self) -> String {
        let d = &self.decisions;
        let mut s = String::new();
        let _ = writeln!(s, "input      {}", self.input_digest);
        let _ = writeln!(s, "field      {}", self.field.as_str());
        let _ = writeln!(s, "exact      {}", self.exact);
        let segre: Vec<String> = self.segre.iter().map(|e| format!("{}: {:?}", e.eigenvalue, e.blocks)).collect();
        let _ = writeln!(s, "segre      {}", segre.join(", "));
        if let Some(p) = &self.nilpotent_partition {
            let _ = writeln!(s, "nilpotent  {p:?}");
        }
        let _ = writeln!(s, "G2         {}   ({})", show(d.g2), self.methods.g2);
        let _ = writeln!(s, "G2*        {}   ({})", show(d.g2star), self.methods.g2star);
        let _ = writeln!(s, "G2* nondeg {}", show(d.g2star_nondeg_u));
        let _ = writeln!(s, "G2C        {}", show(Some(d.g2c)));
        let _ = writeln!(s, "G2C nondeg {}", show(Some(d.g2c_nondeg_u)));
        if let Some(p) = &self.partition {
            let [a, b, c] = p.one_based();
            let _ = writeln!(s, "layout     {}", self.layout.join(" "));
            let _ = writeln!(s, "partition  I1={a:?} I2={b:?} I3={c:?}");
        }
        let _ = writeln!(s, "oracle     maxlen {} on {} closed four-forms", self.oracle.maxlen, self.oracle.closed_dim);
        for w in &self.warnings {
            let _ = writeln!(s, "warning    {w}");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(d: &[i64]) -> Matrix {
        Matrix::diagonal(&d.iter().map(|&x| Scalar::from_i64(x)).collect::<Vec<_>>())
    }

    #[test]
    fn abelian_report() {
        let g = LieAlgebra::abelian(7, FieldMode::Rational);
        let r = decide_algebra(&g, Tolerances::default(), digest_bytes(b"")).unwrap();
        assert_eq!(r.decisions, Decisions { g2: Some(true), g2star: Some(true), g2star_nondeg_u: Some(true), g2c: true, g2c_nondeg_u: true });
        assert_eq!(r.certificate_path.g2, Some(CertificatePath::Canonical));
    }

    #[test]
    fn identity_and_split_reports() {
        let r = decide_matrix(&Matrix::identity(6), FieldMode::Rational, Tolerances::default(), String::new()).unwrap();
        assert_eq!(r.decisions.g2, Some(false));
        assert!(!r.decisions.g2c);
        let r = decide_matrix(&diag(&[2, 2, 2, 2, -2, -2]), FieldMode::Rational, Tolerances::default(), String::new()).unwrap();
        assert_eq!((r.decisions.g2, r.decisions.g2star), (Some(false), Some(true)));
        assert_eq!(r.layout, ["-2/1", "-2/1", "2/1", "2/1", "2/1", "2/1"]);
        assert_eq!(r.partition.unwrap().one_based(), [[3, 4], [5, 6], [1, 2]]);
        assert_eq!(r.certificate_path.g2star, Some(CertificatePath::Length2));
    }

    #[test]
    fn violated_invariant_is_an_error() {
        let mut r = decide_matrix(&Matrix::identity(6), FieldMode::Rational, Tolerances::default(), String::new()).unwrap();
        r.decisions.g2 = Some(true);
        assert!(matches!(check_invariants(&r), Err(Error::CrossCheck(_))));
    }

    #[test]
    fn numeric_spectrum_falls_back_to_oracle() {
        // companion matrix of (x² − 2)³ = x⁶ − 6x⁴ + 12x² − 8
        let mut f = Matrix::zeros(6, 6);
        for i in 1..6 {
            f.set(i, i - 1, Scalar::one());
        }
        for (i, c) in [(0, 8), (2, -12), (4, 6)] {
            f.set(i, 5, Scalar::from_i64(c));
        }
        let r = decide_matrix(&f, FieldMode::Rational, Tolerances::default(), String::new()).unwrap();
        assert!(!r.exact);
        assert_eq!(r.decisions.g2, Some(r.oracle.g2));
        assert_eq!(r.decisions.g2star, Some(r.oracle.g2star));
    }
}
