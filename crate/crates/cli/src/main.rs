//! `cocal`: decide, construct and verify cocalibrated G₂-type structures on
//! seven-dimensional Lie algebras with a codimension-one Abelian ideal.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cocal_core::certificate::{build_certificate, verify_certificate, Certificate, VerificationReport};
use cocal_core::corpus::{manifest, nilpotent_corpus};
use cocal_core::g2::{classify_three_form, induced_bilinear, standard_volume, Classification, Kind};
use cocal_core::io::{read_json, to_json, write_json, LieAlgebraRecord, MatrixRecord};
use cocal_core::lie::{iso_test_matrices, IsoResult, LieAlgebra};
use cocal_core::oracle::{invariant_symplectic_form, oracle_decide, OracleDecision};
use cocal_core::report::{decide_algebra, decide_matrix, digest_bytes, DecisionReport, Tolerances};
use cocal_core::selftest::{run_selftest, SelftestSummary, DEFAULT_SEED};
use cocal_core::{Error, FieldMode, Matrix, Multivector};

const EXIT_DECISION_FALSE: u8 = 5;
const EXIT_SELFTEST: u8 = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "cocal", version, about = "Cocalibrated G2, G2* and (G2)_C structures on almost Abelian Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Lie algebra file (repeat for `iso`).
    #[arg(long, global = true)]
    input: Vec<PathBuf>,
    /// Matrix file holding F = ad(e7) on the ideal (repeat for `iso`).
    #[arg(long, global = true)]
    matrix: Vec<PathBuf>,
    /// Field of the input; defaults to the field declared in the file.
    #[arg(long, global = true)]
    field: Option<FieldMode>,
    #[arg(long, global = true, default_value_t = 1e-9)]
    numeric_tol: f64,
    #[arg(long, global = true, default_value_t = 1e-7)]
    cluster_tol: f64,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output file (a directory for `corpus`); stdout when omitted.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide all five existence questions.
    Decide,
    /// Build and verify a certificate.
    Construct {
        /// G2, G2STAR or G2C.
        #[arg(long)]
        kind: Kind,
    },
    /// Classify a three-form file.
    Recognize,
    /// Test whether two algebras are isomorphic.
    Iso,
    /// Brute-force answers from the closed four-forms.
    Oracle,
    /// Write the nilpotent corpus and its manifest.
    Corpus,
    /// Run the self-test suites.
    Selftest {
        /// Cases per random suite (0 runs fixtures only); suite defaults when omitted.
        #[arg(long)]
        trials: Option<usize>,
        /// Restrict to the named suites.
        #[arg(long)]
        suite: Vec<String>,
    },
}

/// A command failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: e.exit_code() as u8, message: e.to_string() }
    }
}

type Outcome = Result<(), Failure>;

struct Input {
    field: FieldMode,
    f: Matrix,
    digest: String,
    algebra: Option<LieAlgebra>,
}

impl Cli {
    fn tol(&self) -> Tolerances {
        Tolerances { numeric_tol: self.numeric_tol, cluster_tol: self.cluster_tol }
    }

    fn inputs(&self) -> Result<Vec<(PathBuf, bool)>, Failure> {
        let all: Vec<(PathBuf, bool)> =
            self.input.iter().map(|p| (p.clone(), true)).chain(self.matrix.iter().map(|p| (p.clone(), false))).collect();
        if all.is_empty() {
            return Err(usage("an --input or --matrix file is required"));
        }
        Ok(all)
    }

    fn load(&self, path: &Path, is_algebra: bool) -> Result<Input, Failure> {
        let bytes = std::fs::read(path).map_err(|e| Failure { code: 1, message: format!("{}: {e}", path.display()) })?;
        let digest = digest_bytes(&bytes);
        if is_algebra {
            let mut rec: LieAlgebraRecord = read_json(path)?;
            if let Some(field) = self.field {
                rec.field = field;
            }
            let g = rec.to_algebra()?;
            if g.dim() != 7 {
                return Err(Error::InvalidAlgebra(format!("expected dimension 7, got {}", g.dim())).into());
            }
            g.validate()?;
            let search = g.find_codim1_abelian_ideal();
            let data = search.data.ok_or_else(|| Error::NoIdeal(search.warnings.join("; ")))?;
            Ok(Input { field: rec.field, f: data.f, digest, algebra: Some(g) })
        } else {
            let mut rec: MatrixRecord = read_json(path)?;
            if let Some(field) = self.field {
                rec.field = field;
            }
            let f = rec.to_matrix()?;
            Ok(Input { field: rec.field, f, digest, algebra: None })
        }
    }

    fn single(&self) -> Result<Input, Failure> {
        let inputs = self.inputs()?;
        if inputs.len() != 1 {
            return Err(usage("exactly one --input or --matrix file is expected"));
        }
        self.load(&inputs[0].0, inputs[0].1)
    }

    fn emit<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String) -> Outcome {
        let body = match self.format {
            Format::Json => to_json(value)?,
            Format::Text => text(),
        };
        match &self.output {
            Some(p) => std::fs::write(p, body).map_err(Error::from)?,
            None => print!("{body}"),
        }
        Ok(())
    }
}

fn usage(msg: &str) -> Failure {
    Failure { code: 1, message: msg.to_string() }
}

fn decide(cli: &Cli) -> Outcome {
    let input = cli.single()?;
    let report = match &input.algebra {
        Some(g) => decide_algebra(g, cli.tol(), input.digest)?,
        None => decide_matrix(&input.f, input.field, cli.tol(), input.digest)?,
    };
    cli.emit(&report, || report.render_text())
}

#[derive(Serialize)]
struct ConstructOutput<'a> {
    certificate: &'a Certificate,
    verification: &'a VerificationReport,
}

fn decision_for(report: &DecisionReport, kind: Kind) -> Option<bool> {
    match kind {
        Kind::G2 => report.decisions.g2,
        Kind::G2Star => report.decisions.g2star,
        Kind::G2C => Some(report.decisions.g2c),
    }
}

fn construct(cli: &Cli, kind: Kind) -> Outcome {
    let input = cli.single()?;
    let report = decide_matrix(&input.f, input.field, cli.tol(), input.digest)?;
    match decision_for(&report, kind) {
        Some(true) => {}
        Some(false) => {
            return Err(Failure { code: EXIT_DECISION_FALSE, message: format!("no cocalibrated {kind}-structure exists") })
        }
        None => {
            return Err(Failure {
                code: EXIT_DECISION_FALSE,
                message: format!("{kind} is a real structure but the input is not real"),
            })
        }
    }
    let cert = build_certificate(&input.f, kind, input.field)?;
    let verification = verify_certificate(&cert, &input.f)?;
    if !verification.passed() {
        return Err(Error::Verification(verification.failures().join("; ")).into());
    }
    let out = ConstructOutput { certificate: &cert, verification: &verification };
    cli.emit(&out, || {
        let mut s = format!("{kind} certificate via {} path, scale {}\n", cert.path, cert.scale);
        for c in &verification.checks {
            s.push_str(&format!("  {:<14} {}\n", c.name, if c.passed { "ok" } else { "FAILED" }));
        }
        s
    })
}

#[derive(Serialize)]
struct Recognition {
    classification: Classification,
    signature: Option<(usize, usize)>,
}

fn recognize(cli: &Cli) -> Outcome {
    let [path] = cli.input.as_slice() else {
        return Err(usage("recognize takes one --input form file"));
    };
    let phi: Multivector = read_json(path)?;
    if phi.dim() != 7 || phi.grade() != 3 || phi.variance() != cocal_core::Variance::Form {
        return Err(Error::Dimension("recognize needs a three-form in dimension 7".into()).into());
    }
    let complex = cli.field == Some(FieldMode::GaussianRational) || !phi.is_real();
    let classification = classify_three_form(&phi, complex)?;
    let gram = induced_bilinear(&phi, &standard_volume())?;
    let signature = if complex { None } else { gram.signature().ok().map(|s| (s.positive, s.negative)) };
    let out = Recognition { classification, signature };
    cli.emit(&out, || match signature {
        Some((p, n)) => format!("{classification} ({p},{n})\n"),
        None => format!("{classification}\n"),
    })
}

fn iso(cli: &Cli) -> Outcome {
    let inputs = cli.inputs()?;
    if inputs.len() != 2 {
        return Err(usage("iso takes two inputs"));
    }
    let a = cli.load(&inputs[0].0, inputs[0].1)?;
    let b = cli.load(&inputs[1].0, inputs[1].1)?;
    let field = if a.field == FieldMode::GaussianRational || b.field == FieldMode::GaussianRational {
        FieldMode::GaussianRational
    } else {
        FieldMode::Rational
    };
    let r: IsoResult = iso_test_matrices(&a.f, &b.f, field, cli.cluster_tol, cli.numeric_tol);
    cli.emit(&r, || format!("isomorphic {} (exact {}, {})\n", r.isomorphic, r.exact, r.method))
}

#[derive(Serialize)]
struct OracleOutput {
    oracle: OracleDecision,
    invariant_symplectic_form: Option<Multivector>,
}

fn oracle(cli: &Cli) -> Outcome {
    let input = cli.single()?;
    let out = OracleOutput { oracle: oracle_decide(&input.f), invariant_symplectic_form: invariant_symplectic_form(&input.f) };
    cli.emit(&out, || {
        format!(
            "closed four-forms {}, max dual length {}, G2 {}, G2* {}\n",
            out.oracle.closed_dim, out.oracle.maxlen, out.oracle.g2, out.oracle.g2star
        )
    })
}

fn corpus(cli: &Cli) -> Outcome {
    let dir = cli.output.clone().ok_or_else(|| usage("corpus needs --output DIR"))?;
    std::fs::create_dir_all(&dir).map_err(Error::from)?;
    for entry in nilpotent_corpus() {
        write_json(&dir.join(&entry.file), &entry.record)?;
    }
    write_json(&dir.join("manifest.json"), &manifest())?;
    if cli.format == Format::Text {
        println!("wrote 11 algebras and manifest.json to {}", dir.display());
    }
    Ok(())
}

fn selftest(cli: &Cli, trials: Option<usize>, only: &[String]) -> Outcome {
    let summary: SelftestSummary = run_selftest(cli.seed, trials, only);
    cli.emit(&summary, || {
        let mut s = String::new();
        for r in &summary.suites {
            let status = if r.passed() { "pass" } else { "FAIL" };
            s.push_str(&format!("{status} {:<26} {:>5} cases {:>7} ms\n", r.name, r.cases, r.elapsed_ms));
            if let Some(c) = &r.counterexample {
                s.push_str(&format!("     counterexample: {c}\n"));
            }
        }
        s.push_str(&format!("seed {} total {} ms\n", summary.seed, summary.elapsed_ms));
        s
    })?;
    if summary.passed {
        Ok(())
    } else {
        let failed: Vec<&str> = summary.suites.iter().filter(|r| !r.passed()).map(|r| r.name.as_str()).collect();
        Err(Failure { code: EXIT_SELFTEST, message: format!("failing suites: {}", failed.join(", ")) })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Decide => decide(&cli),
        Command::Construct { kind } => construct(&cli, *kind),
        Command::Recognize => recognize(&cli),
        Command::Iso => iso(&cli),
        Command::Oracle => oracle(&cli),
        Command::Corpus => corpus(&cli),
        Command::Selftest { trials, suite } => selftest(&cli, *trials, suite),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("cocal: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
