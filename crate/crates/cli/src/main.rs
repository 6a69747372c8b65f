//! Command-line front end: validation, barcodes, invariants, cone and tensor
//! construction, and the randomized verification campaigns.
//!
//! Exit codes: 0 success, 1 parse/validation error, 2 property violation in
//! a verify/demo run, 3 usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use filtra::complex::FilteredComplex;
use filtra::cone::{mapping_cone, reassociate, tensor_product, ConeInput};
use filtra::ext::render;
use filtra::invariants::profile;
use filtra::io::{self, ComplexRef};
use filtra::map::{FilteredLinearMap, FilteredMap};
use filtra::persistence::{barcode, Barcode};
use filtra::verify::{run_campaign, theorem_demo, CampaignConfig, Suite, TheoremDemoConfig};

#[derive(Parser)]
#[command(name = "filtra", version, about = "Filtered chain complexes over F2: barcodes, spectral invariants, cones, and a randomized verifier")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the complex axioms of a JSON complex file.
    Validate { file: PathBuf },
    /// Compute the barcode of a complex.
    Barcode {
        file: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Print sigma+, sigma-, rho and beta of a complex.
    Invariants {
        file: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Build the filtered mapping cone of a map file.
    Cone {
        /// JSON map file (inline complexes or paths).
        #[arg(long)]
        map: PathBuf,
        /// Cone filtration shift; defaults to the map's declared shift.
        #[arg(long)]
        shift: Option<f64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Tensor product of two complexes.
    Tensor {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Reassociate a nested cone described by a spec file.
    Reassoc {
        spec: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run a randomized verification campaign.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run the synthetic cone-decomposition demo.
    Demo {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 17)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        tail_cap: f64,
        #[arg(long, default_value_t = 1.0)]
        shift_cap: f64,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Args)]
struct OutArg {
    /// Write a JSON report to this path, or to stdout when "-" is given
    /// (human-readable output then moves to stderr).
    #[arg(long)]
    out: Option<String>,
}

/// Reassociation input: an inner cone map f: F -> G, an attachment complex E
/// and the two components of its map into the inner cone.
#[derive(Deserialize)]
struct ReassocSpec {
    e: ComplexRef,
    f: io::MapFile,
    #[serde(default)]
    s_f: Option<f64>,
    #[serde(default)]
    g_f: std::collections::BTreeMap<String, Vec<String>>,
    #[serde(default)]
    g_g: std::collections::BTreeMap<String, Vec<String>>,
    s_g: f64,
}

enum Failure {
    /// Parse or validation problem (exit 1).
    Input(String),
    /// A verify/demo run found a violation (exit 2).
    Violation(String),
}

impl From<filtra::Error> for Failure {
    fn from(err: filtra::Error) -> Failure {
        Failure::Input(err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let benign = matches!(
                err.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = err.print();
            return if benign { ExitCode::SUCCESS } else { ExitCode::from(3) };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Violation(message)) => {
            eprintln!("violation: {message}");
            ExitCode::from(2)
        }
    }
}

/// Print human-readable lines to stdout, or to stderr when JSON owns stdout.
struct Output {
    json_to_stdout: bool,
    file: Option<PathBuf>,
}

impl Output {
    fn new(out: &OutArg) -> Output {
        match out.out.as_deref() {
            Some("-") => Output { json_to_stdout: true, file: None },
            Some(path) => Output { json_to_stdout: false, file: Some(PathBuf::from(path)) },
            None => Output { json_to_stdout: false, file: None },
        }
    }

    fn human(&self, line: impl std::fmt::Display) {
        if self.json_to_stdout {
            eprintln!("{line}");
        } else {
            println!("{line}");
        }
    }

    fn emit_json(&self, json: &str) -> Result<(), Failure> {
        if self.json_to_stdout {
            println!("{json}");
        } else if let Some(path) = &self.file {
            std::fs::write(path, format!("{json}\n"))
                .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
        }
        Ok(())
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { file } => {
            let complex = io::load_complex(&file)?;
            let violations = complex.validate();
            if violations.is_empty() {
                println!("ok: {} ({} generators)", complex.name(), complex.len());
                Ok(())
            } else {
                for v in &violations {
                    eprintln!("violation: {v}");
                }
                Err(Failure::Input(format!(
                    "{} has {} violation(s)",
                    complex.name(),
                    violations.len()
                )))
            }
        }
        Command::Barcode { file, out } => {
            let complex = io::load_complex(&file)?;
            let bc = barcode(&complex)?;
            let output = Output::new(&out);
            output.human(format_barcode(&bc));
            output.emit_json(&barcode_json(&bc))
        }
        Command::Invariants { file, out } => {
            let complex = io::load_complex(&file)?;
            let p = profile(&complex)?;
            let output = Output::new(&out);
            output.human(format!(
                "sigma+ = {}, sigma- = {}, rho = {}, beta = {}",
                p.sigma_plus,
                p.sigma_minus,
                p.rho,
                render(p.beta)
            ));
            let json = serde_json::json!({
                "sigma_plus": p.sigma_plus,
                "sigma_minus": p.sigma_minus,
                "rho": p.rho,
                "beta": p.beta,
            });
            output.emit_json(&serde_json::to_string_pretty(&json).unwrap())
        }
        Command::Cone { map, shift, out } => {
            let f = io::load_map(&map)?;
            let report = f.validate();
            if !report.ok() {
                return Err(Failure::Input(format!(
                    "map fails validation: {}",
                    report
                        .violations
                        .iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join("; ")
                )));
            }
            let s = shift.unwrap_or_else(|| f.shift());
            let cone = mapping_cone(&ConeInput::new(f, s)?);
            describe_complex(&cone, &Output::new(&out))
        }
        Command::Tensor { a, b, out } => {
            let left = io::load_complex(&a)?;
            let right = io::load_complex(&b)?;
            ensure_valid(&left)?;
            ensure_valid(&right)?;
            let product = tensor_product(&left, &right);
            describe_complex(&product, &Output::new(&out))
        }
        Command::Reassoc { spec, out } => {
            let text = std::fs::read_to_string(&spec)
                .map_err(|e| Failure::Input(format!("cannot read {}: {e}", spec.display())))?;
            let parsed: ReassocSpec = serde_json::from_str(&text)
                .map_err(|e| Failure::Input(format!("parse error in {}: {e}", spec.display())))?;
            let base = spec.parent().unwrap_or_else(|| Path::new("."));
            let report = run_reassoc(parsed, base)?;
            let output = Output::new(&out);
            output.human(format!(
                "nested:  sigma+ = {}, sigma- = {}, beta = {}",
                report.profile_nested.sigma_plus,
                report.profile_nested.sigma_minus,
                render(report.profile_nested.beta)
            ));
            output.human(format!(
                "flat:    sigma+ = {}, sigma- = {}, beta = {}",
                report.profile_flat.sigma_plus,
                report.profile_flat.sigma_minus,
                render(report.profile_flat.beta)
            ));
            output.human(format!(
                "identity shift: {} forward, {} backward",
                render(report.identity_shift_forward),
                render(report.identity_shift_backward)
            ));
            for check in &report.checks {
                output.human(format!(
                    "  {} {}: {} vs {}",
                    if check.ok { "ok " } else { "FAIL" },
                    check.label,
                    check.lhs,
                    check.rhs
                ));
            }
            output.emit_json(&serde_json::to_string_pretty(&report.checks).unwrap())?;
            if report.ok() {
                Ok(())
            } else {
                Err(Failure::Violation("reassociation bounds violated".to_string()))
            }
        }
        Command::Verify { suite, count, seed, tol, out } => {
            let suite = Suite::parse(&suite).ok_or_else(|| {
                Failure::Input(format!(
                    "unknown suite {suite:?}; expected one of cone, quasieq, homotopy_diff, \
                     tensor, refilter, reassoc, iterated, cone_equiv, all"
                ))
            })?;
            let mut config = CampaignConfig::new(suite, count, seed);
            config.tolerance = tol;
            let report = run_campaign(&config)?;
            let output = Output::new(&out);
            summarize_campaign(&report, &output, 0);
            output.emit_json(&serde_json::to_string_pretty(&report).unwrap())?;
            if report.ok() {
                Ok(())
            } else {
                Err(Failure::Violation(format!(
                    "{} failure(s) in suite {}",
                    report.failures, report.suite
                )))
            }
        }
        Command::Demo { k, trials, seed, tail_cap, shift_cap, out } => {
            let mut config = TheoremDemoConfig::new(k, trials, seed);
            config.tail_beta_cap = tail_cap;
            config.shift_cap = shift_cap;
            let report = theorem_demo(&config)?;
            let output = Output::new(&out);
            let passed = report.trial_records.iter().filter(|t| t.pass).count();
            output.human(format!(
                "k = {}, attachments = {}, trials: {passed}/{} within rho <= {} + {}·max_beta",
                report.k,
                report.attachments,
                report.trials,
                render(report.bound_offset),
                render(report.bound_slope)
            ));
            output.human(format!("note: {}", report.note));
            output.emit_json(&serde_json::to_string_pretty(&report).unwrap())?;
            if report.all_pass {
                Ok(())
            } else {
                Err(Failure::Violation("demo bound violated in at least one trial".to_string()))
            }
        }
    }
}

fn ensure_valid(complex: &FilteredComplex) -> Result<(), Failure> {
    let violations = complex.validate();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::Input(format!(
            "{}: {}",
            complex.name(),
            violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
        )))
    }
}

fn run_reassoc(spec: ReassocSpec, base: &Path) -> Result<filtra::cone::ReassocReport, Failure> {
    let e = spec.e.resolve(base)?;
    let shift = spec.s_f.unwrap_or(spec.f.shift);
    let inner_map = spec.f.into_map(base)?;
    let inner = ConeInput::new(inner_map, shift)?;
    let inner_cone = mapping_cone(&inner);

    // assemble the outer map from its F and G components
    let f_complex = inner.map().source().clone();
    let g_complex = inner.map().target().clone();
    let mut cols = vec![filtra::f2::F2Vec::zero(); e.len()];
    let f_count = f_complex.len();
    let lookup = |complex: &FilteredComplex, id: &str| -> Result<usize, Failure> {
        complex
            .position(id)
            .ok_or_else(|| Failure::Input(format!("unknown generator {id:?} in reassoc spec")))
    };
    for (gen, support) in &spec.g_f {
        let g = lookup(&e, gen)?;
        for t in support {
            let raw = lookup(&f_complex, t)?;
            // F generators sit first in the inner cone, prefixed by the
            // source complex's name
            let cone_pos = inner_cone
                .position(&format!("{}.{}", f_complex.name(), f_complex.id(raw)))
                .expect("cone contains every source generator");
            cols[g].flip(cone_pos);
            debug_assert!(cone_pos < f_count);
        }
    }
    for (gen, support) in &spec.g_g {
        let g = lookup(&e, gen)?;
        for t in support {
            let raw = lookup(&g_complex, t)?;
            cols[g].flip(f_count + raw);
        }
    }
    let outer = FilteredMap::new(FilteredLinearMap::from_columns(
        e,
        inner_cone,
        spec.s_g,
        cols,
    ));
    let outer_report = outer.validate();
    if !outer_report.ok() {
        return Err(Failure::Input(format!(
            "outer map fails validation: {}",
            outer_report
                .violations
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("; ")
        )));
    }
    Ok(reassociate(&inner, &outer, spec.s_g)?)
}

fn describe_complex(complex: &FilteredComplex, output: &Output) -> Result<(), Failure> {
    let p = profile(complex)?;
    let bc = barcode(complex)?;
    output.human(format!("{} ({} generators)", complex.name(), complex.len()));
    output.human(format_barcode(&bc));
    output.human(format!(
        "sigma+ = {}, sigma- = {}, rho = {}, beta = {}",
        p.sigma_plus,
        p.sigma_minus,
        p.rho,
        render(p.beta)
    ));
    output.emit_json(io::complex_to_json(complex).trim_end())
}

fn summarize_campaign(report: &filtra::CampaignReport, output: &Output, depth: usize) {
    let indent = "  ".repeat(depth);
    let vacuous = if report.vacuous_instances > 0 {
        format!(", {} vacuous", report.vacuous_instances)
    } else {
        String::new()
    };
    let slack = match (report.worst_slack, &report.worst_slack_label) {
        (Some(s), Some(label)) => format!(", worst slack {} ({label})", render(s)),
        _ => String::new(),
    };
    let extras = match (report.literal_form_violations, report.max_shift_ratio) {
        (Some(n), _) => format!(", literal-form violations: {n}"),
        (_, Some(r)) => format!(", max shift ratio {}", render(r)),
        _ => String::new(),
    };
    output.human(format!(
        "{indent}suite {}: {} passed, {} failed{vacuous}{slack}{extras}",
        report.suite, report.passes, report.failures
    ));
    for sub in &report.sub_reports {
        summarize_campaign(sub, output, depth + 1);
    }
}

fn format_barcode(bc: &Barcode) -> String {
    if bc.is_empty() {
        return "barcode: (empty)".to_string();
    }
    let bars: Vec<String> = bc
        .bars()
        .iter()
        .map(|b| format!("[{}, {})", render(b.birth), render(b.death)))
        .collect();
    format!("barcode: {}", bars.join(" "))
}

fn barcode_json(bc: &Barcode) -> String {
    let bars: Vec<serde_json::Value> = bc
        .bars()
        .iter()
        .map(|b| {
            serde_json::json!({
                "birth": b.birth,
                "death": if b.is_infinite() {
                    serde_json::Value::String("inf".to_string())
                } else {
                    serde_json::json!(b.death)
                },
            })
        })
        .collect();
    serde_json::to_string_pretty(&serde_json::json!({ "bars": bars })).unwrap()
}
