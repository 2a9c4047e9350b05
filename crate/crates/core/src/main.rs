use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use curved_koszul::curved_coalgebra::check_curved_axioms;
use curved_koszul::enveloping::derived_enveloping_check;
use curved_koszul::enveloping::sampling::lemma_suite;
use curved_koszul::facthom::{derived_vs_underived_check, facthom_homology, FacthomError, PDModel};
use curved_koszul::koszul_dual::{check_maurer_cartan_kappa, koszul_complex_strand};
use curved_koszul::operad_core::{builtin, operad_stratum, presentation_from_json, OperadPresentation};
use curved_koszul::symplectic_poisson::{build_a_koszul_dual, verify_koszulity, SymplecticAlgebraSpec};

#[derive(Parser)]
#[command(name = "curved-koszul", version, about = "Exact checks of curved Koszul duality for unital Poisson-type operads")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the report here (atomically) instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for every randomized check.
    #[arg(long, default_value_t = 48, global = true)]
    seed: u64,
    /// Worker threads; defaults to all cores.
    #[arg(long, env = "CURVED_KOSZUL_THREADS", global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone, Copy)]
struct AlgebraArgs {
    /// Poisson degree n of the bracket.
    #[arg(long, allow_negative_numbers = true, default_value_t = 2)]
    n: i64,
    /// Number of symplectic pairs (x_i, ξ_i).
    #[arg(long = "D", default_value_t = 1)]
    d: usize,
}

impl AlgebraArgs {
    fn spec(self) -> SymplecticAlgebraSpec {
        SymplecticAlgebraSpec::new(self.n, self.d)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Operad strata against closed-form dimensions, κ⋆κ = 0 and acyclicity of the Koszul complex.
    VerifyOperad {
        /// Built-in operad: com, ucom, lie, lie_n, clie_n, pois_n, upois_n.
        #[arg(long, default_value = "pois_n")]
        operad: String,
        /// JSON presentation file, used instead of --operad.
        #[arg(long)]
        presentation: Option<PathBuf>,
        #[arg(long, allow_negative_numbers = true, default_value_t = 2)]
        n: i64,
        #[arg(long, default_value_t = 4)]
        max_arity: usize,
    },
    /// Builds the curved Koszul dual coalgebra of the symplectic algebra and checks its axioms.
    KoszulDual {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, default_value_t = 3)]
        max_weight: usize,
    },
    /// Compares the cobar resolution with the algebra, weight by weight.
    VerifyKoszul {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, default_value_t = 3)]
        max_weight: usize,
    },
    /// Derived enveloping algebra check, plus a seeded suite of random cLie quasi-isomorphisms.
    Envelope {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, default_value_t = 3)]
        max_weight: usize,
        /// Random cases for the quasi-isomorphism suite (0 skips it).
        #[arg(long, default_value_t = 20)]
        cases: usize,
    },
    /// Factorization homology of a Poincaré duality model with coefficients in the symplectic algebra.
    Facthom {
        /// Model JSON file.
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, default_value_t = 6)]
        max_length: usize,
        /// Accept an uncertified answer when the Euler splitting is unavailable.
        #[arg(long)]
        assume_hypotheses: bool,
    },
    /// Derived versus underived Chevalley-Eilenberg model on weight strata.
    DerivedCheck {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, default_value_t = 4)]
        max_length: usize,
        #[arg(long, default_value_t = 4)]
        max_weight: usize,
    },
}

/// Why a run did not produce a passing report.
enum Failure {
    /// Malformed input; exit code 2.
    Input(String),
    /// A check ran and found a violation; exit code 1.
    Check { kind: &'static str, message: String },
}

fn input(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

fn check(kind: &'static str) -> impl Fn(String) -> Failure {
    move |message| Failure::Check { kind, message }
}

struct Outcome {
    passed: bool,
    json: Value,
    csv: String,
}

impl Outcome {
    fn new(passed: bool, report: &impl Serialize, csv: String) -> Self {
        Outcome { passed, json: serde_json::to_value(report).expect("reports serialize"), csv }
    }
}

fn facthom_error(e: FacthomError) -> Failure {
    use FacthomError::*;
    match e {
        Parse(_) | ProductNotCommutative(_) | ProductNotAssociative(_) | DifferentialNotDerivation(_) | PairingDegenerate(_)
        | EpsilonNotClosed(_) => Failure::Input(e.to_string()),
        DifferentialSquareNonzero(m) => Failure::Check { kind: "differential_square_nonzero", message: m },
        other => Failure::Check { kind: "unsupported", message: other.to_string() },
    }
}

fn load_model(path: &Path) -> Result<PDModel, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    PDModel::from_json(&text).map_err(facthom_error)
}

/// Closed-form dimension of arity `k` for the built-in families.
fn expected_dim(name: &str, k: usize) -> Option<usize> {
    let fact = |m: usize| (1..=m).product::<usize>();
    match name {
        "com" | "ucom" => Some(1),
        "lie" | "lie_n" | "clie_n" => Some(fact(k - 1)),
        "pois_n" | "upois_n" => Some(fact(k)),
        _ => None,
    }
}

fn verify_operad(p: &OperadPresentation, family: Option<&str>, max_arity: usize) -> Result<Outcome, Failure> {
    let aug = p.augmented();
    let mut rows = Vec::new();
    let mut csv = String::from("arity,dim,expected,koszul_homology\n");
    let mut passed = true;
    for k in 1..=max_arity {
        let dim = operad_stratum(&aug, k, max_arity).map_err(input)?.dim();
        let expected = family.and_then(|f| expected_dim(f, k));
        let strand = koszul_complex_strand(&aug, k).map_err(|e| check("koszul_complex")(e.to_string()))?;
        strand.squares_to_zero().map_err(|e| check("koszul_complex_square")(format!("arity {k}: {e}")))?;
        let homology = strand.homology().map_err(|e| check("koszul_complex")(e.to_string()))?;
        // The arity-one strand is the ground field; acyclicity starts at arity two.
        let acyclic = k == 1 || homology.iter().all(|&h| h == 0);
        let ok = expected.is_none_or(|x| x == dim) && acyclic;
        passed &= ok;
        let shown = expected.map_or(String::new(), |x| x.to_string());
        let hs: Vec<String> = homology.iter().map(usize::to_string).collect();
        csv.push_str(&format!("{k},{dim},{shown},{}\n", hs.join(" ")));
        rows.push(json!({ "arity": k, "dim": dim, "expected": expected, "koszul_homology": homology, "pass": ok }));
    }
    let mc = check_maurer_cartan_kappa(&aug).map_err(|e| check("maurer_cartan")(e.to_string()))?;
    let report = json!({ "operad": p.name, "strata": rows, "maurer_cartan_checked": mc.checked });
    Ok(Outcome { passed, json: report, csv })
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::VerifyOperad { operad, presentation, n, max_arity } => {
            let (p, family) = match presentation {
                Some(path) => {
                    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                    (presentation_from_json(&text).map_err(input)?, None)
                }
                None => (builtin(operad, *n).map_err(input)?, Some(operad.as_str())),
            };
            verify_operad(&p, family, *max_arity)
        }
        Command::KoszulDual { algebra, max_weight } => {
            let c = build_a_koszul_dual(algebra.spec(), *max_weight);
            let report = check_curved_axioms(&c);
            let mut csv = String::from("weight,dim\n");
            for (w, d) in report.stratum_dims.iter().enumerate() {
                csv.push_str(&format!("{w},{d}\n"));
            }
            Ok(Outcome::new(report.passed(), &report, csv))
        }
        Command::VerifyKoszul { algebra, max_weight } => {
            let report = verify_koszulity(algebra.spec(), *max_weight).map_err(|e| check("cobar")(e.to_string()))?;
            Ok(Outcome::new(report.passed(), &report, report.curved.to_csv()))
        }
        Command::Envelope { algebra, max_weight, cases } => {
            let betti = derived_enveloping_check(algebra.spec(), *max_weight).map_err(|e| check("enveloping")(e.to_string()))?;
            let suite = (*cases > 0).then(|| lemma_suite(cli.seed, *cases, 3));
            let passed = betti.passed() && suite.as_ref().is_none_or(|s| s.all_passed());
            let report = json!({ "betti": betti, "lemma_suite": suite });
            Ok(Outcome { passed, json: report, csv: betti.to_csv() })
        }
        Command::Facthom { model, algebra, max_length, assume_hypotheses } => {
            let p = load_model(model)?;
            let report = facthom_homology(&p, algebra.spec(), *max_length).map_err(facthom_error)?;
            let certified = report.certified_euler.is_some() || *assume_hypotheses;
            let passed = report.total == 1 && certified && report.representative_certified;
            Ok(Outcome::new(passed, &report, report.to_csv()))
        }
        Command::DerivedCheck { model, algebra, max_length, max_weight } => {
            let p = load_model(model)?;
            let report = derived_vs_underived_check(&p, algebra.spec(), *max_length, *max_weight).map_err(facthom_error)?;
            Ok(Outcome::new(report.passed(), &report, report.betti.to_csv()))
        }
    }
}

/// Writes through a sibling temporary file so readers never see a partial report.
fn write_atomically(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let mut f = fs::File::create(&tmp)?;
    f.write_all(contents.as_bytes())?;
    f.sync_all()?;
    fs::rename(&tmp, path)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let (code, json, csv) = match run(&cli) {
        Ok(o) => {
            let json = json!({ "passed": o.passed, "report": o.json });
            (if o.passed { 0 } else { 1 }, json, o.csv)
        }
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            return ExitCode::from(2);
        }
        Err(Failure::Check { kind, message }) => {
            let json = json!({ "passed": false, "violation": { "kind": kind, "witness": message } });
            (1, json, format!("violation,witness\n{kind},\"{}\"\n", message.replace('"', "\"\"")))
        }
    };
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&json).expect("json") + "\n",
        Format::Csv => csv,
    };
    match &cli.output {
        Some(path) => {
            if let Err(e) = write_atomically(path, &text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code)
}
