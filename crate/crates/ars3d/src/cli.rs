//! The `ars3d` command line tool: scenario validation, locus CSV export,
//! crossing reports, bundled examples and the verification suites.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::ars::SimpleARS;
use crate::crossing::{exp_curve_profile, flow_crossing, CrossingBehavior, CrossingProfile};
use crate::group::{AlgebraElement, GroupElement, ThetaKind};
use crate::linalg2::Vec2;
use crate::locus::{ComponentCount, GraphParametrization, LocusFunction, LocusShape, Side};
use crate::scenario::{bundled, Scenario};
use crate::symmetry::derivation_residual;
use crate::verify::{parse_suites, run_suites, SuiteReport};
use crate::{Error, Window};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_INVARIANT: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

const DEFAULT_SEED: u64 = 42;
/// Residual ceiling for every point written to a locus CSV.
const CSV_RESIDUAL_CEILING: f64 = 1e-8;
/// Ceiling for the bundled examples' printed closed forms.
const CLOSED_FORM_CEILING: f64 = 1e-10;

#[derive(Parser)]
#[command(
    name = "ars3d",
    version,
    about = "Singular loci and crossing analysis for simple almost-Riemannian \
             structures on 3D solvable Lie groups R ⋉ R²"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a scenario file and print its verdict block.
    Validate {
        /// Scenario JSON file.
        scenario: PathBuf,
    },
    /// Export locus plot data as CSV.
    Locus {
        /// Scenario JSON file.
        scenario: PathBuf,
        /// Lower end of the t window.
        #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
        t_min: f64,
        /// Upper end of the t window.
        #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
        t_max: f64,
        /// Grid resolution per parameter axis (at least 2).
        #[arg(long, default_value_t = 64)]
        samples: usize,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report how a curve from a base point meets the singular locus.
    Crossing {
        /// Scenario JSON file.
        scenario: PathBuf,
        /// Base point as t,x,y.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Algebra direction as a,w1,w2: follow the exponential curve
        /// s ↦ g·exp(sY).
        #[arg(long, allow_hyphen_values = true, required_unless_present = "flow", conflicts_with = "flow")]
        dir: Option<String>,
        /// Follow the flow of the structure's field instead.
        #[arg(long)]
        flow: bool,
        /// Lower end of the curve-parameter window.
        #[arg(long, default_value_t = -3.0, allow_hyphen_values = true)]
        s_min: f64,
        /// Upper end of the curve-parameter window.
        #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
        s_max: f64,
        /// Also write the located zeros as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the randomized property suites.
    Verify {
        /// One of: all, lambda, group, symmetry, ars, locus, crossing,
        /// covering.
        #[arg(long, default_value = "all")]
        suite: String,
        /// RNG seed; the ARS3D_SEED environment variable overrides the
        /// built-in default, an explicit flag overrides both.
        #[arg(long)]
        seed: Option<u64>,
        /// Base number of sampled cases per property.
        #[arg(long, default_value_t = 1000)]
        cases: usize,
    },
    /// Write a bundled example scenario plus its locus CSV and check the
    /// printed closed form of its locus.
    Example {
        /// Example id: 4.3 (plane stack) or 4.4 (exponential graph).
        id: String,
        /// Directory the files are written into.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

/// Entry point used by the binary; returns the process exit code.
pub fn run(args: &[String]) -> i32 {
    let mut argv = Vec::with_capacity(args.len() + 1);
    argv.push("ars3d".to_string());
    argv.extend_from_slice(args);
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Validate { scenario } => cmd_validate(&scenario),
        Command::Locus { scenario, t_min, t_max, samples, out } => {
            cmd_locus(&scenario, t_min, t_max, samples, out.as_deref())
        }
        Command::Crossing { scenario, point, dir, flow, s_min, s_max, out } => {
            cmd_crossing(&scenario, &point, dir.as_deref(), flow, s_min, s_max, out.as_deref())
        }
        Command::Verify { suite, seed, cases } => cmd_verify(&suite, seed, cases),
        Command::Example { id, out_dir } => cmd_example(&id, &out_dir),
    }
}

/// The invariant name shown in exit-2 diagnostics.
fn invariant_name(e: &Error) -> &'static str {
    match e {
        Error::InvalidInput(_) => "InvalidInput",
        Error::SingularMatrix(_) => "SingularMatrix",
        Error::InvalidLinearField(_) => "InvalidLinearField",
        Error::InvalidAutomorphism(_) => "InvalidAutomorphism",
        Error::DegenerateDistribution(_) => "DegenerateDistribution",
        Error::LarcFailed(_) => "LarcFailed",
        Error::WitnessNotFound => "WitnessNotFound",
        Error::CannotNormalize(_) => "CannotNormalize",
        Error::SampleNotOnLocus { .. } => "SampleNotOnLocus",
        Error::WrongShape(_) => "WrongShape",
        Error::UnsupportedTheta(_) => "UnsupportedTheta",
    }
}

fn load_scenario(path: &Path) -> Result<Scenario, i32> {
    Scenario::from_path(path).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_PARSE
    })
}

fn build_scenario(scenario: &Scenario) -> Result<SimpleARS, i32> {
    scenario.build().map_err(|e| {
        eprintln!("invariant violated: {}: {e}", invariant_name(&e));
        EXIT_INVARIANT
    })
}

fn theta_line(kind: ThetaKind) -> String {
    match kind {
        ThetaKind::Jordan => "jordan".to_string(),
        ThetaKind::Diagonal(l) => format!("diagonal (lambda = {l})"),
        ThetaKind::Complex(l) => format!("complex (lambda = {l})"),
    }
}

fn shape_line(ars: &SimpleARS, window: Window) -> String {
    let lf = LocusFunction::new(ars);
    match lf.describe(window) {
        Ok(desc) => {
            let connect = if desc.connected { "connected" } else { "disconnected" };
            let count = match desc.component_count {
                ComponentCount::Finite(n) => format!("{n} component(s)"),
                ComponentCount::Infinite => "infinitely many components".to_string(),
            };
            match desc.shape {
                LocusShape::PlaneStack { times, period } => {
                    let mut s = format!(
                        "stack of fiber planes; {connect}; {count}; {} plane(s) in t ∈ [{}, {}]",
                        times.len(),
                        window.lo,
                        window.hi
                    );
                    if let Some(p) = period {
                        let _ = write!(s, "; plane times repeat with period {p:.6}");
                    }
                    s
                }
                LocusShape::GraphOverPlane { map: GraphParametrization::Hmap } => {
                    format!("graph over the base plane (full-rank map); {connect}; {count}")
                }
                LocusShape::GraphOverPlane { map: GraphParametrization::Imap { .. } } => {
                    format!("graph over the base plane (rank-one map); {connect}; {count}")
                }
            }
        }
        Err(e) => format!("not described: {e}"),
    }
}

fn cmd_validate(path: &Path) -> i32 {
    let scenario = match load_scenario(path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let ars = match build_scenario(&scenario) {
        Ok(a) => a,
        Err(code) => return code,
    };
    let field = ars.field();
    let theta = ars.theta();
    let residual = derivation_residual(&theta, &field.a_mat());
    let verdict = ars.larc_verdict();
    let w = ars.witness();
    println!("theta: {}", theta_line(theta.kind()));
    println!("derivation: ok (commutation residual {residual:.3e})");
    println!("larc: satisfied (reason: {:?})", verdict.reason);
    println!("witness: ({}, {}, {})", w.t, w.v.x, w.v.y);
    println!(
        "locus: {}",
        shape_line(&ars, Window::new(-2.0 * std::f64::consts::PI, 2.0 * std::f64::consts::PI))
    );
    EXIT_OK
}

/// Emit `x` with 17 significant digits, enough to reconstruct the exact
/// binary double.
fn csv_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_output(path: Option<&Path>, contents: &str, label: &str) -> i32 {
    match path {
        Some(p) => {
            if let Err(e) = std::fs::write(p, contents) {
                eprintln!("error: cannot write {}: {e}", p.display());
                return EXIT_PARSE;
            }
            println!("wrote {label} to {}", p.display());
            EXIT_OK
        }
        None => {
            print!("{contents}");
            EXIT_OK
        }
    }
}

/// Locus CSV rows: graph loci get `t,x,y,f_residual`; plane stacks add a
/// `plane_index` column tying each row to its plane.
fn locus_csv(ars: &SimpleARS, window: Window, samples: usize) -> Result<(String, usize), i32> {
    let lf = LocusFunction::new(ars);
    let desc = lf.describe(window).map_err(|e| {
        eprintln!("invariant violated: {}: {e}", invariant_name(&e));
        EXIT_INVARIANT
    })?;
    let points = lf.sample(window, samples).map_err(|e| {
        eprintln!("invariant violated: {}: {e}", invariant_name(&e));
        EXIT_INVARIANT
    })?;
    let plane_times: Option<Vec<f64>> = match &desc.shape {
        LocusShape::PlaneStack { times, .. } => Some(times.iter().map(|p| p.t).collect()),
        LocusShape::GraphOverPlane { .. } => None,
    };
    let mut csv = String::new();
    csv.push_str(if plane_times.is_some() {
        "t,x,y,f_residual,plane_index\n"
    } else {
        "t,x,y,f_residual\n"
    });
    for g in &points {
        let residual = lf.eval(*g).abs();
        if residual > CSV_RESIDUAL_CEILING {
            eprintln!(
                "invariant violated: SampleNotOnLocus: point ({}, {}, {}) has |F| = {residual:.3e}",
                g.t, g.v.x, g.v.y
            );
            return Err(EXIT_INVARIANT);
        }
        let _ = write!(
            csv,
            "{},{},{},{}",
            csv_float(g.t),
            csv_float(g.v.x),
            csv_float(g.v.y),
            csv_float(residual)
        );
        if let Some(times) = &plane_times {
            let idx = times
                .iter()
                .position(|t| *t == g.t)
                .expect("every stack sample sits on a reported plane");
            let _ = write!(csv, ",{idx}");
        }
        csv.push('\n');
    }
    Ok((csv, points.len()))
}

fn cmd_locus(path: &Path, t_min: f64, t_max: f64, samples: usize, out: Option<&Path>) -> i32 {
    if samples < 2 {
        eprintln!("usage error: --samples must be at least 2");
        return EXIT_USAGE;
    }
    if !(t_min < t_max) {
        eprintln!("usage error: --t-min must be below --t-max");
        return EXIT_USAGE;
    }
    let scenario = match load_scenario(path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let ars = match build_scenario(&scenario) {
        Ok(a) => a,
        Err(code) => return code,
    };
    let (csv, rows) = match locus_csv(&ars, Window::new(t_min, t_max), samples) {
        Ok(x) => x,
        Err(code) => return code,
    };
    write_output(out, &csv, &format!("{rows} locus points"))
}

fn parse_triple(text: &str, what: &str) -> Result<[f64; 3], i32> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        eprintln!("invalid {what}: expected three comma-separated numbers, got {text:?}");
        return Err(EXIT_INVARIANT);
    }
    let mut out = [0.0; 3];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part.trim().parse::<f64>().map_err(|e| {
            eprintln!("invalid {what}: {part:?}: {e}");
            EXIT_INVARIANT
        })?;
        if !slot.is_finite() {
            eprintln!("invalid {what}: {part:?} is not finite");
            return Err(EXIT_INVARIANT);
        }
    }
    Ok(out)
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::CMinus => "CMinus",
        Side::OnLocus => "OnLocus",
        Side::CPlus => "CPlus",
    }
}

fn behavior_name(b: &CrossingBehavior) -> &'static str {
    match b {
        CrossingBehavior::StaysInComponent => "StaysInComponent",
        CrossingBehavior::DiscreteCrossings { .. } => "DiscreteCrossings",
        CrossingBehavior::RemainsInLocus => "RemainsInLocus",
    }
}

fn print_crossing_report(
    ars: &SimpleARS,
    profile: &CrossingProfile,
    window: Window,
    curve_point: impl Fn(f64) -> GroupElement,
) -> String {
    let lf = LocusFunction::new(ars);
    let g = profile.base_point;
    let mut csv = String::from("s,sign_change\n");
    println!(
        "base point: ({}, {}, {})  [{}]",
        g.t,
        g.v.x,
        g.v.y,
        side_name(lf.component_of(g))
    );
    match &profile.direction {
        Some(y) => println!("curve: s -> g·exp(sY) with Y = ({}, {}, {})", y.a, y.w.x, y.w.y),
        None => println!("curve: flow of the structure's field through g"),
    }
    println!("window: s ∈ [{}, {}]", window.lo, window.hi);
    if profile.best_effort {
        println!(
            "note: A = 0, so the locus is a plane stack and the discreteness \
             guarantees do not apply; the zero report below is numerical only"
        );
    }
    println!("behavior: {}", behavior_name(&profile.behavior));
    match &profile.behavior {
        CrossingBehavior::RemainsInLocus => {
            println!("the curve stays inside the singular locus for every s");
        }
        CrossingBehavior::StaysInComponent => {
            println!(
                "no locus intersection in the window; the curve stays in {}",
                side_name(lf.component_of(g))
            );
        }
        CrossingBehavior::DiscreteCrossings { zeros } => {
            println!("{} intersection(s) with the locus:", zeros.len());
            for (i, z) in zeros.iter().enumerate() {
                // Probe just inside the gap toward each neighbor.
                let left_gap = if i == 0 { z.location - window.lo } else {
                    z.location - zeros[i - 1].location
                };
                let right_gap = if i + 1 == zeros.len() { window.hi - z.location } else {
                    zeros[i + 1].location - z.location
                };
                let eps_l = (left_gap * 0.5).min(1e-2).max(1e-9);
                let eps_r = (right_gap * 0.5).min(1e-2).max(1e-9);
                let before = side_name(lf.component_of(curve_point(z.location - eps_l)));
                let after = side_name(lf.component_of(curve_point(z.location + eps_r)));
                println!(
                    "  s = {:+.12e}  sign change: {}  {} -> {}",
                    z.location,
                    if z.sign_change { "yes" } else { "no " },
                    before,
                    after
                );
                let _ = writeln!(
                    csv,
                    "{},{}",
                    csv_float(z.location),
                    u8::from(z.sign_change)
                );
            }
        }
    }
    csv
}

#[allow(clippy::too_many_arguments)]
fn cmd_crossing(
    path: &Path,
    point: &str,
    dir: Option<&str>,
    flow: bool,
    s_min: f64,
    s_max: f64,
    out: Option<&Path>,
) -> i32 {
    if !(s_min < s_max) {
        eprintln!("usage error: --s-min must be below --s-max");
        return EXIT_USAGE;
    }
    let scenario = match load_scenario(path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let ars = match build_scenario(&scenario) {
        Ok(a) => a,
        Err(code) => return code,
    };
    let [t, x, y] = match parse_triple(point, "--point") {
        Ok(p) => p,
        Err(code) => return code,
    };
    let g = GroupElement::new(t, Vec2::new(x, y));
    let window = Window::new(s_min, s_max);
    let theta = ars.theta();
    let field = ars.field();

    let csv = if flow {
        let profile = flow_crossing(&ars, g, window);
        print_crossing_report(&ars, &profile, window, |s| field.flow(s, g))
    } else {
        let [a, w1, w2] = match parse_triple(dir.expect("clap enforces --dir xor --flow"), "--dir")
        {
            Ok(d) => d,
            Err(code) => return code,
        };
        let y_dir = AlgebraElement::new(a, Vec2::new(w1, w2));
        if y_dir.norm() == 0.0 {
            eprintln!("invalid --dir: the direction must be nonzero");
            return EXIT_INVARIANT;
        }
        let profile = exp_curve_profile(&ars, g, y_dir, window);
        print_crossing_report(&ars, &profile, window, |s| theta.mul(g, theta.exp(y_dir * s)))
    };
    match out {
        Some(p) => write_output(Some(p), &csv, "crossing zeros"),
        None => EXIT_OK,
    }
}

fn print_suite_reports(reports: &[SuiteReport], seed: u64, cases: usize) -> bool {
    let name_width = reports
        .iter()
        .flat_map(|r| r.results.iter())
        .map(|p| p.name.len())
        .max()
        .unwrap_or(8)
        .max("property".len());
    println!("seed {seed}, base cases per property {cases}");
    println!();
    println!("{:<10} {:<name_width$} {:>7} {:>13} {:>10} {:>7}",
        "suite", "property", "cases", "max residual", "tolerance", "status");
    let mut all_ok = true;
    let mut failures: Vec<(String, String)> = Vec::new();
    for report in reports {
        for p in &report.results {
            let ok = p.passed();
            all_ok &= ok;
            println!(
                "{:<10} {:<name_width$} {:>7} {:>13.3e} {:>10.1e} {:>7}",
                report.suite.name(),
                p.name,
                p.cases,
                p.max_residual,
                p.tolerance,
                if ok { "ok" } else { "FAIL" }
            );
            if let Some(ce) = &p.counterexample {
                failures.push((format!("{}/{}", report.suite.name(), p.name), ce.clone()));
            }
        }
    }
    println!();
    if all_ok {
        let total: usize = reports.iter().map(|r| r.results.len()).sum();
        println!("all {total} properties passed");
    } else {
        for (name, ce) in &failures {
            println!("counterexample [{name}]: {ce}");
        }
    }
    all_ok
}

fn cmd_verify(suite: &str, seed_flag: Option<u64>, cases: usize) -> i32 {
    let Some(suites) = parse_suites(suite) else {
        eprintln!(
            "usage error: unknown suite {suite:?} (expected all, lambda, group, symmetry, \
             ars, locus, crossing or covering)"
        );
        return EXIT_USAGE;
    };
    if cases == 0 {
        eprintln!("usage error: --cases must be positive");
        return EXIT_USAGE;
    }
    let seed = match seed_flag {
        Some(s) => s,
        None => match std::env::var("ARS3D_SEED") {
            Ok(text) => match text.trim().parse::<u64>() {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("usage error: ARS3D_SEED={text:?} is not a valid seed: {e}");
                    return EXIT_USAGE;
                }
            },
            Err(_) => DEFAULT_SEED,
        },
    };
    let reports = run_suites(&suites, seed, cases);
    if print_suite_reports(&reports, seed, cases) {
        EXIT_OK
    } else {
        EXIT_VERIFY
    }
}

/// Worst deviation of the plane-stack times from `sin t + cos t = 1`, the
/// closed form of the bundled plane-stack locus with ξ = (1, 1).
fn plane_stack_closed_form(ars: &SimpleARS, window: Window) -> Result<(f64, usize), String> {
    let lf = LocusFunction::new(ars);
    let desc = lf.describe(window).map_err(|e| e.to_string())?;
    let LocusShape::PlaneStack { times, .. } = &desc.shape else {
        return Err("expected a stack of fiber planes".to_string());
    };
    if desc.connected || desc.component_count == ComponentCount::Finite(1) {
        return Err("expected a disconnected stack".to_string());
    }
    let mut worst = 0.0f64;
    for p in times {
        worst = worst.max((p.t.sin() + p.t.cos() - 1.0).abs());
    }
    Ok((worst, times.len()))
}

/// Worst deviation of locus samples from `2y = 3(1 - e^t)`, the closed form
/// of the bundled exponential-graph locus.
fn graph_closed_form(ars: &SimpleARS, window: Window, samples: usize) -> Result<f64, String> {
    let lf = LocusFunction::new(ars);
    let desc = lf.describe(window).map_err(|e| e.to_string())?;
    if desc.shape != (LocusShape::GraphOverPlane { map: GraphParametrization::Hmap }) {
        return Err("expected the full-rank graph parametrization".to_string());
    }
    if !desc.connected {
        return Err("expected a connected locus".to_string());
    }
    let points = lf.sample(window, samples).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for g in points {
        worst = worst.max((2.0 * g.v.y - 3.0 * (1.0 - g.t.exp())).abs());
    }
    Ok(worst)
}

fn cmd_example(id: &str, out_dir: &Path) -> i32 {
    let Some((_, scenario)) = bundled().into_iter().find(|(name, _)| *name == id) else {
        eprintln!("usage error: unknown example {id:?} (expected 4.3 or 4.4)");
        return EXIT_USAGE;
    };
    // Only the two closed-form examples are exposed here.
    if id != "4.3" && id != "4.4" {
        eprintln!("usage error: unknown example {id:?} (expected 4.3 or 4.4)");
        return EXIT_USAGE;
    }
    let ars = match build_scenario(&scenario) {
        Ok(a) => a,
        Err(code) => return code,
    };
    if let Err(e) = std::fs::create_dir_all(out_dir) {
        eprintln!("error: cannot create {}: {e}", out_dir.display());
        return EXIT_PARSE;
    }
    let tag = id.replace('.', "-");
    let scenario_path = out_dir.join(format!("example-{tag}.json"));
    let csv_path = out_dir.join(format!("example-{tag}-locus.csv"));
    if let Err(e) = std::fs::write(&scenario_path, scenario.to_json()) {
        eprintln!("error: cannot write {}: {e}", scenario_path.display());
        return EXIT_PARSE;
    }
    println!("wrote scenario to {}", scenario_path.display());

    let window = if id == "4.3" {
        Window::new(0.0, 4.0 * std::f64::consts::PI)
    } else {
        Window::new(-2.0, 2.0)
    };
    let (csv, rows) = match locus_csv(&ars, window, 64) {
        Ok(x) => x,
        Err(code) => return code,
    };
    if let Err(e) = std::fs::write(&csv_path, csv) {
        eprintln!("error: cannot write {}: {e}", csv_path.display());
        return EXIT_PARSE;
    }
    println!("wrote {rows} locus points to {}", csv_path.display());

    if id == "4.4" {
        println!(
            "note: a rotation matrix is sometimes quoted for this example, but it is \
             inconsistent with the example's own bracket [(1,0),(0,e1)] = (0,e1) and \
             with its locus equation 2y = 3(1 - e^t); this scenario uses the unipotent \
             family [[1,1],[0,1]], which satisfies both"
        );
    }
    let check = if id == "4.3" {
        plane_stack_closed_form(&ars, window).map(|(worst, planes)| {
            println!("plane times in [0, 4π]: {planes} planes, disconnected stack");
            (worst, "sin(t) + cos(t) = 1 at every plane time")
        })
    } else {
        graph_closed_form(&ars, window, 64).map(|worst| (worst, "2y = 3(1 - e^t) on every sample"))
    };
    match check {
        Ok((worst, label)) => {
            println!("closed form {label}: max residual {worst:.3e}");
            if worst > CLOSED_FORM_CEILING {
                eprintln!(
                    "verification failure: closed-form residual {worst:.3e} exceeds \
                     {CLOSED_FORM_CEILING:.1e}"
                );
                return EXIT_VERIFY;
            }
            EXIT_OK
        }
        Err(msg) => {
            eprintln!("verification failure: {msg}");
            EXIT_VERIFY
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> i32 {
        let owned: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        run(&owned)
    }

    #[test]
    fn usage_errors_exit_64() {
        assert_eq!(run_args(&["no-such-command"]), EXIT_USAGE);
        assert_eq!(run_args(&[]), EXIT_USAGE);
        assert_eq!(run_args(&["verify", "--suite", "bogus"]), EXIT_USAGE);
        assert_eq!(run_args(&["example", "9.9"]), EXIT_USAGE);
    }

    #[test]
    fn help_and_version_exit_0() {
        assert_eq!(run_args(&["--help"]), EXIT_OK);
        assert_eq!(run_args(&["--version"]), EXIT_OK);
    }

    #[test]
    fn triple_parsing() {
        assert_eq!(parse_triple("1,2.5,-3", "--point").unwrap(), [1.0, 2.5, -3.0]);
        assert_eq!(parse_triple(" 0 , 1 , 2 ", "--point").unwrap(), [0.0, 1.0, 2.0]);
        assert_eq!(parse_triple("1,2", "--point").unwrap_err(), EXIT_INVARIANT);
        assert_eq!(parse_triple("1,2,zebra", "--dir").unwrap_err(), EXIT_INVARIANT);
        assert_eq!(parse_triple("1,2,inf", "--dir").unwrap_err(), EXIT_INVARIANT);
    }

    #[test]
    fn csv_floats_are_full_precision() {
        let x = 0.1f64 + 0.2f64;
        let printed = csv_float(x);
        assert_eq!(printed.parse::<f64>().unwrap(), x);
        assert!(printed.contains('e'));
    }

    #[test]
    fn invariant_names_cover_every_variant() {
        assert_eq!(invariant_name(&Error::WitnessNotFound), "WitnessNotFound");
        assert_eq!(
            invariant_name(&Error::DegenerateDistribution(String::new())),
            "DegenerateDistribution"
        );
        assert_eq!(invariant_name(&Error::WrongShape("x")), "WrongShape");
    }
}
