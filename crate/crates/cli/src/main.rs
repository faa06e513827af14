use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use slocc_rank::{
    classify_with, invariance_trial, read_state_file, Backend, Catalog, ClassificationResult,
    EntryStatus, Pyramid, PureState, RankOptions, ScalarKind, System, Verification, Warning,
    WarningCode, DEFAULT_TOL_REL,
};

/// Expected layer count of the 2x2x2x4 pyramid.
const REFERENCE_LAYERS_D4: usize = 22;

#[derive(Parser)]
#[command(name = "slocc-rank", version, about = "SLOCC classification by coefficient-matrix ranks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a state file.
    Classify {
        path: PathBuf,
        #[arg(long, value_enum)]
        backend: Option<BackendArg>,
        /// Relative tolerance for the numeric backend.
        #[arg(long, default_value_t = DEFAULT_TOL_REL)]
        tol: f64,
        #[arg(long)]
        json: bool,
        /// Fail with exit code 3 on ambiguous numeric ranks.
        #[arg(long)]
        strict: bool,
    },
    /// Verify or list the representative catalog.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Subfamily count for d = 2..=dmax as CSV.
    ReportCounts {
        #[arg(long, default_value_t = 12)]
        dmax: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Export the 2x2x2xd subfamily pyramid.
    Pyramid {
        #[arg(long, default_value_t = 8)]
        d: usize,
        #[arg(long, value_enum, default_value_t = PyramidFormat::Dot)]
        format: PyramidFormat,
    },
    /// Check that random invertible local operators preserve the label.
    SloccTest {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Catalog id or state file path.
        #[arg(long)]
        state: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Classify entries and compare with the manifest. Ambiguous ranks fail.
    Verify {
        #[arg(long)]
        system: Option<System>,
        /// Re-embed 2x2x2xd entries with last dimension d.
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Print ids and expected labels.
    List {
        #[arg(long)]
        system: Option<System>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Exact,
    Numeric,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum PyramidFormat {
    Dot,
    Json,
}

/// Ways a command can end other than success.
enum Failure {
    Mismatch(String),
    Input(String),
    Ambiguous(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Mismatch(_) => 1,
            Failure::Input(_) => 2,
            Failure::Ambiguous(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Mismatch(m) | Failure::Input(m) | Failure::Ambiguous(m) => m,
        }
    }
}

impl From<slocc_rank::Error> for Failure {
    fn from(e: slocc_rank::Error) -> Self {
        let msg = format!("{}: {e}", e.code());
        if e.is_input_error() || matches!(e, slocc_rank::Error::KindMismatch) {
            Failure::Input(msg)
        } else {
            Failure::Mismatch(msg)
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn envelope(command: &str, inputs: Value, results: impl Serialize, warnings: &[Warning]) -> String {
    let doc = json!({
        "command": command,
        "inputs": inputs,
        "results": results,
        "warnings": warnings,
    });
    serde_json::to_string_pretty(&doc).expect("reports serialize")
}

fn load_catalog() -> Result<Catalog, Failure> {
    Ok(Catalog::load()?)
}

fn ambiguous(warnings: &[Warning]) -> bool {
    warnings.iter().any(|w| w.code == WarningCode::RankAmbiguous)
}

fn rank_table(r: &ClassificationResult) -> Value {
    let cuts: Vec<Value> = r
        .signature
        .cuts()
        .iter()
        .map(|c| {
            let rows: Vec<Value> = c
                .permutations
                .iter()
                .zip(&c.ranks)
                .map(|(p, rank)| {
                    let qudits: Vec<usize> = p.row_qudits(c.l).iter().map(|q| q + 1).collect();
                    json!({ "permutation": p.to_string(), "row_qudits": qudits, "rank": rank })
                })
                .collect();
            json!({ "l": c.l, "ranks": rows })
        })
        .collect();
    Value::Array(cuts)
}

fn classify_cmd(path: &Path, backend: Option<BackendArg>, tol: f64, as_json: bool, strict: bool) -> Outcome {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Failure::Input(format!("--tol must be positive, got {tol}")));
    }
    let state = read_state_file(path)?;
    let opts = RankOptions {
        backend: backend.map(|b| match b {
            BackendArg::Exact => Backend::Exact,
            BackendArg::Numeric => Backend::Numeric,
        }),
        tol_rel: tol,
    };
    let used = opts.backend.unwrap_or(match state.kind() {
        ScalarKind::Exact => Backend::Exact,
        ScalarKind::Numeric => Backend::Numeric,
    });
    let r = classify_with(&state, &opts)?;

    if as_json {
        let results = json!({
            "dims": state.dims(),
            "backend": used,
            "label": r.label,
            "family": r.family.to_string(),
            "genuinely_entangled": r.genuinely_entangled,
            "cuts": rank_table(&r),
        });
        let inputs = json!({ "path": path, "backend": used, "tol": tol, "strict": strict });
        println!("{}", envelope("classify", inputs, results, &r.warnings));
    } else {
        print!("{}", classify_text(path, &state, used, &r));
    }
    if strict && ambiguous(&r.warnings) {
        return Err(Failure::Ambiguous("ambiguous numeric rank under --strict".into()));
    }
    Ok(())
}

fn classify_text(path: &Path, state: &PureState, backend: Backend, r: &ClassificationResult) -> String {
    let dims: Vec<String> = state.dims().iter().map(usize::to_string).collect();
    let mut out = String::new();
    writeln!(out, "state:   {} (dims {}, {} terms)", path.display(), dims.join("x"), state.len()).unwrap();
    writeln!(out, "backend: {backend}").unwrap();
    writeln!(out, "label:   {}", r.label).unwrap();
    writeln!(out, "family:  {}", r.family).unwrap();
    writeln!(out, "genuinely entangled: {}", if r.genuinely_entangled { "yes" } else { "no" }).unwrap();
    for c in r.signature.cuts() {
        writeln!(out, "l={}:", c.l).unwrap();
        for (p, rank) in c.permutations.iter().zip(&c.ranks) {
            let rows: Vec<String> = p.row_qudits(c.l).iter().map(|q| (q + 1).to_string()).collect();
            writeln!(out, "  {:<16} rows {:<10} rank {rank}", p.to_string(), rows.join(",")).unwrap();
        }
    }
    for w in &r.warnings {
        writeln!(out, "warning: {w}").unwrap();
    }
    out
}

fn catalog_verify(system: Option<System>, d: Option<usize>, as_json: bool) -> Outcome {
    if let Some(d) = d {
        if d < 2 {
            return Err(Failure::Input(format!("--d must be at least 2, got {d}")));
        }
    }
    let catalog = load_catalog()?;
    let entries: Vec<_> = catalog
        .entries()
        .iter()
        .filter(|e| system.is_none_or(|s| e.system == s))
        .collect();
    let results = catalog.verify(&entries, d)?;
    let failures: Vec<&Verification> = results.iter().filter(|v| !v.passed()).collect();
    let warnings: Vec<Warning> = results
        .iter()
        .flat_map(|v| {
            v.warnings.iter().map(|w| Warning {
                code: w.code,
                detail: format!("{}: {}", v.id, w.detail),
            })
        })
        .collect();

    let counted: Vec<&Verification> = results.iter().filter(|v| v.status != EntryStatus::Disputed).collect();
    let labels: BTreeSet<&str> = counted.iter().map(|v| v.computed_label.as_str()).collect();
    let families: BTreeSet<&str> = counted.iter().map(|v| v.computed_family.as_str()).collect();
    let degenerate = families.iter().filter(|f| f.contains('|')).count();

    if as_json {
        let inputs = json!({ "system": system.map(System::as_str), "d": d });
        let results_doc = json!({
            "entries": results,
            "passed": results.len() - failures.len(),
            "total": results.len(),
            "distinct_labels": labels.len(),
            "distinct_families": families.len(),
            "degenerate_families": degenerate,
        });
        println!("{}", envelope("catalog verify", inputs, results_doc, &warnings));
    } else {
        for v in &results {
            let mark = if v.passed() { "ok  " } else { "FAIL" };
            let note = match v.status {
                EntryStatus::Disputed => format!("  [disputed: claimed {}]", v.claimed_label),
                EntryStatus::Corrected => "  [corrected]".into(),
                EntryStatus::Derived => "  [derived]".into(),
                EntryStatus::Printed => String::new(),
            };
            println!("{mark} {:<28} {:<26} {}{note}", v.id, v.computed_label, v.computed_family);
            if !v.passed() {
                println!("     expected {} {}", v.expected_label, v.expected_family);
            }
        }
        for w in &warnings {
            println!("warning: {w}");
        }
        println!("{}/{} entries pass", results.len() - failures.len(), results.len());
        println!(
            "{} distinct labels, {} distinct families ({degenerate} degenerate) over {} counted entries",
            labels.len(),
            families.len(),
            counted.len()
        );
    }
    if !failures.is_empty() {
        return Err(Failure::Mismatch(format!("{} entries do not match the manifest", failures.len())));
    }
    if ambiguous(&warnings) {
        return Err(Failure::Ambiguous("ambiguous numeric rank during verification".into()));
    }
    Ok(())
}

fn catalog_list(system: Option<System>, as_json: bool) -> Outcome {
    let catalog = load_catalog()?;
    let entries: Vec<_> = catalog
        .entries()
        .iter()
        .filter(|e| system.is_none_or(|s| e.system == s))
        .collect();
    if as_json {
        let rows: Vec<Value> = entries
            .iter()
            .map(|e| {
                json!({
                    "id": e.id,
                    "system": e.system.as_str(),
                    "status": e.status,
                    "claimed_label": e.claimed_label,
                    "expected_label": e.expected_label,
                    "expected_family": e.expected_family.to_string(),
                    "min_d": e.min_d,
                })
            })
            .collect();
        let inputs = json!({ "system": system.map(System::as_str) });
        println!("{}", envelope("catalog list", inputs, rows, &[]));
    } else {
        for e in entries {
            println!("{:<28} {:<8} {:<26} {}", e.id, e.system.as_str(), e.expected_label, e.expected_family);
        }
    }
    Ok(())
}

fn report_counts(dmax: usize, out: Option<&Path>, as_json: bool) -> Outcome {
    if dmax < 2 {
        return Err(Failure::Input(format!("--dmax must be at least 2, got {dmax}")));
    }
    let catalog = load_catalog()?;
    let counts = (2..=dmax)
        .map(|d| Ok((d, catalog.subfamily_count(d)?)))
        .collect::<Result<Vec<_>, slocc_rank::Error>>()?;
    let mut csv = String::from("d,count\n");
    for (d, c) in &counts {
        writeln!(csv, "{d},{c}").unwrap();
    }
    if let Some(path) = out {
        fs::write(path, &csv)?;
    }
    if as_json {
        let rows: Vec<Value> = counts.iter().map(|(d, c)| json!({ "d": d, "count": c })).collect();
        let inputs = json!({ "dmax": dmax, "out": out });
        println!("{}", envelope("report-counts", inputs, rows, &[]));
    } else if out.is_none() {
        print!("{csv}");
    }
    Ok(())
}

fn pyramid_cmd(d: usize, format: PyramidFormat) -> Outcome {
    if d < 2 {
        return Err(Failure::Input(format!("--d must be at least 2, got {d}")));
    }
    let catalog = load_catalog()?;
    let pyramid = Pyramid::build(&catalog, d)?;
    let mut warnings = Vec::new();
    eprintln!(
        "{} subfamilies in {} layers ({} layering)",
        pyramid.node_count(),
        pyramid.layers.len(),
        pyramid.convention
    );
    if d == 4 && pyramid.layers.len() != REFERENCE_LAYERS_D4 {
        let w = Warning {
            code: WarningCode::LayerConvention,
            detail: format!(
                "{} layering gives {} layers at d=4; the reference layering has {REFERENCE_LAYERS_D4}, so its layering convention differs",
                pyramid.convention,
                pyramid.layers.len()
            ),
        };
        eprintln!("warning: {w}");
        warnings.push(w);
    }
    match format {
        PyramidFormat::Dot => print!("{}", pyramid.to_dot()),
        PyramidFormat::Json => {
            let inputs = json!({ "d": d, "format": "json" });
            println!("{}", envelope("pyramid", inputs, &pyramid, &warnings));
        }
    }
    Ok(())
}

fn slocc_test(trials: usize, seed: u64, state_ref: &str, as_json: bool) -> Outcome {
    let catalog = load_catalog()?;
    let state = match catalog.get(state_ref) {
        Ok(entry) => entry.state.clone(),
        Err(_) if Path::new(state_ref).exists() => read_state_file(Path::new(state_ref))?,
        Err(e) => return Err(e.into()),
    };
    if state.kind() != ScalarKind::Exact {
        return Err(Failure::Input(format!("{state_ref} has numeric amplitudes; SLOCC trials need an exact state")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for t in 0..trials {
        let r = invariance_trial(&state, &mut rng)?;
        if !r.passed {
            failures.push(json!({ "trial": t, "before": r.before, "after": r.after }));
        }
    }
    let passed = trials - failures.len();
    if as_json {
        let inputs = json!({ "state": state_ref, "trials": trials, "seed": seed });
        let results = json!({ "passed": passed, "trials": trials, "failures": failures });
        println!("{}", envelope("slocc-test", inputs, results, &[]));
    } else {
        for f in &failures {
            println!("trial {}: {} became {}", f["trial"], f["before"], f["after"]);
        }
        println!("{passed}/{trials} trials preserved the label");
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!("{} trials changed the label", failures.len())))
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Classify { path, backend, tol, json, strict } => classify_cmd(&path, backend, tol, json, strict),
        Command::Catalog { action } => match action {
            CatalogAction::Verify { system, d, json } => catalog_verify(system, d, json),
            CatalogAction::List { system, json } => catalog_list(system, json),
        },
        Command::ReportCounts { dmax, out, json } => report_counts(dmax, out.as_deref(), json),
        Command::Pyramid { d, format } => pyramid_cmd(d, format),
        Command::SloccTest { trials, seed, state, json } => slocc_test(trials, seed, &state, json),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            e.print().ok();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
