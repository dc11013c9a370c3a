//! Command-line surface: subalgebra I/O, catalog access, classification,
//! orbit sampling, properness reports, and the SL(3,R) demonstrations.
//!
//! Exit codes: 0 success, 2 input error, 3 inconclusive or insufficient
//! data. Every verdict's rule chain is echoed on stderr.

use cartanlab_core::catalog::{emit, list_labels, ExemplarParams, Subalgebra};
use cartanlab_core::classify::{
    ck_verdict, classify_type, normalize_compatible, su_conjugacy, CkOutcome, SuDecision,
    TypeLabel,
};
use cartanlab_core::error::Error as CoreError;
use cartanlab_core::growth::{default_t_grid, fit_window, predicted_window, sample_orbit};
use cartanlab_core::lie::{alg_from_matrix, an_element, ANCoords, AlgElement, Ambient};
use cartanlab_core::properness::{
    appendix_constant, cone_separation, proper_pair_predicted, sample_reductive_orbit,
    sl3_bplus_crossing, Properness, ReductiveTag,
};
use cartanlab_core::rat::{rat_from_f64, rat_to_f64, RatMat};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_INPUT: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "cartanlab",
    version,
    about = "Cartan projections and subalgebra classification for SO(2,n) and SL(3,R)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List catalog labels or write one entry as a subalgebra file.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Classify a subalgebra: structural type, predicted growth window, and
    /// the compact-quotient verdict.
    Classify(ClassifyArgs),
    /// Sample the Cartan projection over a subgroup and fit its growth
    /// window.
    Mu(MuArgs),
    /// Empirical properness test between two sampled subgroups.
    Proper(ProperArgs),
    /// Decide block-diagonal conjugacy of a deformation matrix.
    Conjsu(ConjsuArgs),
    /// SL(3,R) demonstrations.
    Sl3 {
        #[command(subcommand)]
        action: Sl3Action,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Print the label table.
    List {
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
    /// Write one catalog entry as a subalgebra file.
    Emit {
        #[arg(long)]
        label: String,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ClassifyArgs {
    /// Subalgebra file (JSON); alternative to --label.
    #[arg(long, conflicts_with = "label")]
    input: Option<PathBuf>,
    /// Catalog label; alternative to --input.
    #[arg(long)]
    label: Option<String>,
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Treat the conjectural odd-dimension branch as settled.
    #[arg(long, default_value_t = false)]
    assume_su_conjecture: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MuArgs {
    #[arg(long, conflicts_with = "label")]
    input: Option<PathBuf>,
    #[arg(long)]
    label: Option<String>,
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 24.0)]
    t_max: f64,
    #[arg(long, default_value_t = 40)]
    steps: usize,
    /// Number of random sample directions.
    #[arg(long, default_value_t = 16)]
    samples: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Ignore points with u1 below this when fitting.
    #[arg(long, default_value_t = 3.0)]
    t_min: f64,
    /// Write the orbit sample as CSV (direction_id, t, u1, u2).
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ProperArgs {
    /// Left subgroup: catalog label, "so1n_full", or "su1m_full".
    #[arg(long)]
    left: String,
    #[arg(long)]
    right: String,
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Sampling horizon; annuli run dyadically up to this radius.
    #[arg(long, default_value_t = 24.0)]
    radius: f64,
    #[arg(long, default_value_t = 10)]
    samples: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write per-annulus distances as CSV.
    #[arg(long)]
    out_csv: Option<PathBuf>,
}

#[derive(Args)]
struct ConjsuArgs {
    /// JSON file {"matrix": [[...], ...]}.
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Sl3Action {
    /// Sweep the interpolation arc and report per-t minima of the distance
    /// to the fixed ray of the opposition involution.
    BplusCross {
        #[arg(long, default_value = "sl2-top-left")]
        label: String,
        #[arg(long, default_value_t = 12.0)]
        t_max: f64,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit the displacement-bound constant across radius scales.
    MuPerturb {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Comma-separated list of radius scales.
        #[arg(long, default_value = "1e2,1e4,1e6")]
        scales: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Subalgebra file: basis entries are either a+n coordinates or full
/// matrices. Numbers convert exactly (every finite double is dyadic).
#[derive(Deserialize)]
struct SubalgebraFile {
    ambient: String,
    #[serde(default)]
    n: Option<usize>,
    basis: Vec<BasisEntry>,
    #[serde(default)]
    label: Option<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BasisEntry {
    Coords { t1: f64, t2: f64, phi: f64, x: Vec<f64>, y: Vec<f64>, eta: f64 },
    Matrix { matrix: Vec<Vec<f64>> },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &CoreError) -> u8 {
    match e {
        CoreError::InsufficientData(_) | CoreError::NoPrediction(_) => EXIT_INCONCLUSIVE,
        _ => EXIT_INPUT,
    }
}

fn seed_or_env(seed: Option<u64>) -> u64 {
    seed.or_else(|| std::env::var("CARTANLAB_SEED").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(2024)
}

fn run(cli: Cli) -> Result<ExitCode, CoreError> {
    match cli.command {
        Command::Catalog { action } => match action {
            CatalogAction::List { n } => {
                for (label, desc, realizable) in list_labels(n) {
                    let marker = if realizable { " " } else { "!" };
                    println!("{marker} {label:24} {desc}");
                }
                Ok(ExitCode::SUCCESS)
            }
            CatalogAction::Emit { label, n, out } => {
                let h = emit(&label, n, &ExemplarParams::default())?;
                let doc = subalgebra_to_json(&h);
                write_out(out.as_deref(), &serde_json::to_string_pretty(&doc).unwrap())?;
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::Classify(args) => cmd_classify(args),
        Command::Mu(args) => cmd_mu(args),
        Command::Proper(args) => cmd_proper(args),
        Command::Conjsu(args) => cmd_conjsu(args),
        Command::Sl3 { action } => cmd_sl3(action),
    }
}

fn write_out(path: Option<&std::path::Path>, content: &str) -> Result<(), CoreError> {
    match path {
        Some(p) => std::fs::write(p, content.as_bytes())
            .map_err(|e| CoreError::Parse(format!("cannot write {}: {e}", p.display()))),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

fn load_subalgebra(
    input: &Option<PathBuf>,
    label: &Option<String>,
    n: usize,
) -> Result<Subalgebra, CoreError> {
    match (input, label) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CoreError::Parse(format!("cannot read {}: {e}", path.display())))?;
            parse_subalgebra(&text)
        }
        (None, Some(l)) => emit(l, n, &ExemplarParams::default()),
        _ => Err(CoreError::Parse("exactly one of --input and --label is required".to_string())),
    }
}

fn parse_subalgebra(text: &str) -> Result<Subalgebra, CoreError> {
    let file: SubalgebraFile = serde_json::from_str(text)
        .map_err(|e| CoreError::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
    let ambient = match file.ambient.as_str() {
        "so2n" => {
            let n = file
                .n
                .ok_or_else(|| CoreError::Parse("field n is required for so2n".to_string()))?;
            Ambient::So2n { n }
        }
        "sl3" => Ambient::Sl3,
        other => return Err(CoreError::Parse(format!("unknown ambient {other:?}"))),
    };
    let mut elements: Vec<AlgElement> = Vec::new();
    for (i, entry) in file.basis.iter().enumerate() {
        let el = match entry {
            BasisEntry::Coords { t1, t2, phi, x, y, eta } => {
                let n = match ambient {
                    Ambient::So2n { n } => n,
                    Ambient::Sl3 => {
                        return Err(CoreError::Parse(format!(
                            "basis[{i}]: coordinate entries apply to so2n only"
                        )))
                    }
                };
                let c = ANCoords::from_f64(*t1, *t2, *phi, x, y, *eta)
                    .map_err(|e| CoreError::Parse(format!("basis[{i}]: {e}")))?;
                an_element(n, &c).map_err(|e| CoreError::Parse(format!("basis[{i}]: {e}")))?
            }
            BasisEntry::Matrix { matrix } => {
                let m = matrix_from_f64(matrix)
                    .map_err(|e| CoreError::Parse(format!("basis[{i}]: {e}")))?;
                alg_from_matrix(ambient, m)
                    .map_err(|e| CoreError::Parse(format!("basis[{i}]: {e}")))?
            }
        };
        elements.push(el);
    }
    let mut h = Subalgebra::from_basis_unchecked(ambient, elements)?;
    h.label = file.label;
    Ok(h)
}

fn matrix_from_f64(rows: &[Vec<f64>]) -> Result<RatMat, CoreError> {
    let nrows = rows.len();
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    if nrows == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(CoreError::Parse("matrix must be rectangular and nonempty".to_string()));
    }
    let mut m = RatMat::zeros(nrows, ncols);
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let r = rat_from_f64(*v)
                .ok_or_else(|| CoreError::Parse(format!("non-finite entry at ({i},{j})")))?;
            m.set(i, j, r);
        }
    }
    Ok(m)
}

fn subalgebra_to_json(h: &Subalgebra) -> serde_json::Value {
    let basis: Vec<serde_json::Value> = h
        .basis
        .iter()
        .map(|e| match &e.coords {
            Some(c) => serde_json::json!({
                "t1": rat_to_f64(&c.t1),
                "t2": rat_to_f64(&c.t2),
                "phi": rat_to_f64(&c.phi),
                "x": c.x.iter().map(rat_to_f64).collect::<Vec<_>>(),
                "y": c.y.iter().map(rat_to_f64).collect::<Vec<_>>(),
                "eta": rat_to_f64(&c.eta),
            }),
            None => {
                let m = e.mat.to_f64();
                let rows: Vec<Vec<f64>> =
                    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect();
                serde_json::json!({ "matrix": rows })
            }
        })
        .collect();
    let (ambient, n) = match h.ambient {
        Ambient::So2n { n } => ("so2n", Some(n)),
        Ambient::Sl3 => ("sl3", None),
    };
    serde_json::json!({
        "ambient": ambient,
        "n": n,
        "label": h.label,
        "basis": basis,
    })
}

fn report_shell(command: &str, seed: Option<u64>) -> serde_json::Map<String, serde_json::Value> {
    let mut m = serde_json::Map::new();
    m.insert("tool".into(), "cartanlab".into());
    m.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    m.insert("command".into(), command.into());
    if let Some(s) = seed {
        m.insert("seed".into(), s.into());
    }
    m
}

fn cmd_classify(args: ClassifyArgs) -> Result<ExitCode, CoreError> {
    let h = load_subalgebra(&args.input, &args.label, args.n)?;
    let norm = normalize_compatible(&h);
    let verdict = classify_type(&norm.subalgebra)?;
    let window = predicted_window(&verdict).ok();
    let ck = ck_verdict(&norm.subalgebra, args.assume_su_conjecture)?;
    eprintln!("justification: {}", ck.justification.join(" > "));
    let mut report = report_shell("classify", None);
    report.insert("label".into(), serde_json::json!(h.label));
    report.insert("normalized".into(), serde_json::json!(norm.changed));
    report.insert("normalization_resolved".into(), serde_json::json!(norm.resolved));
    report.insert("type_verdict".into(), verdict.to_json());
    if let Some(w) = window {
        report.insert("predicted_window".into(), serde_json::to_value(w).unwrap());
    }
    report.insert("ck_verdict".into(), ck.to_json());
    write_out(args.out.as_deref(), &serde_json::to_string_pretty(&report).unwrap())?;
    if ck.verdict == CkOutcome::Inconclusive || verdict.label == TypeLabel::IncompatibleUnresolved {
        return Ok(ExitCode::from(EXIT_INCONCLUSIVE));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_mu(args: MuArgs) -> Result<ExitCode, CoreError> {
    let seed = seed_or_env(args.seed);
    let h = load_subalgebra(&args.input, &args.label, args.n)?;
    let grid = default_t_grid(args.t_max, args.steps.max(2));
    let sample = sample_orbit(&h, &grid, args.samples, seed)?;
    if let Some(path) = &args.out_csv {
        std::fs::write(path, sample.to_csv())
            .map_err(|e| CoreError::Parse(format!("cannot write {}: {e}", path.display())))?;
    }
    let window = fit_window(&sample, args.t_min)?;
    let mut report = report_shell("mu", Some(seed));
    report.insert("label".into(), serde_json::json!(sample.label));
    report.insert("points".into(), serde_json::json!(sample.rows.len()));
    report.insert("fitted_window".into(), serde_json::to_value(window).unwrap());
    if let Ok(v) = classify_type(&h) {
        report.insert("type_verdict".into(), v.to_json());
        if let Ok(w) = predicted_window(&v) {
            report.insert("predicted_window".into(), serde_json::to_value(w).unwrap());
        }
    }
    write_out(args.out.as_deref(), &serde_json::to_string_pretty(&report).unwrap())?;
    Ok(ExitCode::SUCCESS)
}

/// Resolve a properness operand: a reductive tag or a catalog label, with
/// the theorem-exact window when the classification provides one.
fn resolve_side(
    label: &str,
    n: usize,
    grid: &[f64],
    samples: usize,
    seed: u64,
) -> Result<
    (cartanlab_core::growth::OrbitSample, Option<cartanlab_core::growth::GrowthWindow>),
    CoreError,
> {
    match label {
        "so1n_full" => {
            let s = sample_reductive_orbit(ReductiveTag::So1n, n, grid, samples, seed)?;
            Ok((s, Some(cartanlab_core::growth::GrowthWindow::exact(1.0, 1.0))))
        }
        "su1m_full" => {
            let s = sample_reductive_orbit(ReductiveTag::Su1m, n, grid, samples, seed)?;
            Ok((s, Some(cartanlab_core::growth::GrowthWindow::exact(2.0, 2.0))))
        }
        other => {
            let h = emit(other, n, &ExemplarParams::default())?;
            let window = classify_type(&h).ok().and_then(|v| predicted_window(&v).ok());
            let s = sample_orbit(&h, grid, samples, seed)?;
            Ok((s, window))
        }
    }
}

fn cmd_proper(args: ProperArgs) -> Result<ExitCode, CoreError> {
    let seed = seed_or_env(args.seed);
    let grid = default_t_grid(args.radius, 40);
    let (left, wl) = resolve_side(&args.left, args.n, &grid, args.samples, seed)?;
    let (right, wr) = resolve_side(&args.right, args.n, &grid, args.samples, seed + 1)?;
    let predicted = match (&wl, &wr) {
        (Some(a), Some(b)) => proper_pair_predicted(a, b),
        _ => Properness::Unknown,
    };
    let radii: Vec<f64> = (0..4).map(|k| args.radius / 2f64.powi(3 - k)).collect();
    let report = cone_separation(&left, &right, &radii, predicted)?;
    eprintln!("predicted: {:?}; fitted separation slope {:.4}", report.predicted, report.slope);
    if let Some(path) = &args.out_csv {
        let mut csv = String::from("radius,distance,left_count,right_count\n");
        for a in &report.per_annulus {
            csv.push_str(&format!(
                "{},{},{},{}\n",
                a.radius, a.distance, a.left_count, a.right_count
            ));
        }
        std::fs::write(path, csv)
            .map_err(|e| CoreError::Parse(format!("cannot write {}: {e}", path.display())))?;
    }
    let mut shell = report_shell("proper", Some(seed));
    shell.insert("report".into(), serde_json::to_value(&report).unwrap());
    write_out(args.out.as_deref(), &serde_json::to_string_pretty(&shell).unwrap())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_conjsu(args: ConjsuArgs) -> Result<ExitCode, CoreError> {
    let text = std::fs::read_to_string(&args.matrix)
        .map_err(|e| CoreError::Parse(format!("cannot read {}: {e}", args.matrix.display())))?;
    #[derive(Deserialize)]
    struct MatrixFile {
        matrix: Vec<Vec<f64>>,
    }
    let file: MatrixFile = serde_json::from_str(&text)
        .map_err(|e| CoreError::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
    let m = matrix_from_f64(&file.matrix)?;
    let decision = su_conjugacy(&m)?;
    let mut report = report_shell("conjsu", None);
    match decision {
        SuDecision::Yes(w) => {
            report.insert("decision".into(), "yes".into());
            report.insert("a".into(), serde_json::json!(rat_to_f64(&w.a)));
            report.insert("b".into(), serde_json::json!(rat_to_f64(&w.b_squared).sqrt()));
            report.insert("b_squared".into(), serde_json::json!(rat_to_f64(&w.b_squared)));
            eprintln!("justification: scalar-symmetric-part > isotropic-skew-gram");
        }
        SuDecision::No => {
            report.insert("decision".into(), "no".into());
            eprintln!("justification: block-form-obstruction");
        }
    }
    write_out(args.out.as_deref(), &serde_json::to_string_pretty(&report).unwrap())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_sl3(action: Sl3Action) -> Result<ExitCode, CoreError> {
    match action {
        Sl3Action::BplusCross { label, t_max, steps, out } => {
            let h = emit(&label, 3, &ExemplarParams::default())?;
            let ev = sl3_bplus_crossing(&h, t_max, steps)?;
            let worst_late = ev
                .t_values
                .iter()
                .zip(&ev.min_distance)
                .filter(|(t, _)| **t >= 5.0)
                .map(|(_, d)| *d)
                .fold(0.0f64, f64::max);
            eprintln!("justification: fixed-ray-crossing (max late minimum {worst_late:.4})");
            let mut report = report_shell("sl3 bplus-cross", None);
            report.insert("label".into(), serde_json::json!(label));
            report.insert("evidence".into(), serde_json::to_value(&ev).unwrap());
            report.insert("max_minimum_beyond_t5".into(), serde_json::json!(worst_late));
            write_out(out.as_deref(), &serde_json::to_string_pretty(&report).unwrap())?;
            Ok(ExitCode::SUCCESS)
        }
        Sl3Action::MuPerturb { samples, scales, seed, out } => {
            let seed = seed_or_env(seed);
            let mut fits = Vec::new();
            for part in scales.split(',') {
                let scale: f64 = part
                    .trim()
                    .parse()
                    .map_err(|_| CoreError::Parse(format!("bad scale {part:?}")))?;
                let fit = appendix_constant(Ambient::Sl3, samples, scale, seed)?;
                fits.push(fit);
            }
            let max = fits.iter().map(|f| f.constant).fold(0.0f64, f64::max);
            let min = fits.iter().map(|f| f.constant).fold(f64::INFINITY, f64::min);
            eprintln!(
                "justification: displacement-bound (constants within {:.2}x across scales)",
                max / min
            );
            let mut report = report_shell("sl3 mu-perturb", Some(seed));
            report.insert("fits".into(), serde_json::to_value(&fits).unwrap());
            report.insert("spread_factor".into(), serde_json::json!(max / min));
            write_out(out.as_deref(), &serde_json::to_string_pretty(&report).unwrap())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
