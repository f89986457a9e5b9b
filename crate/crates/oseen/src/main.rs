//! Command-line front end: solve runs, verification suites, wake
//! profiles, and config inspection.
//!
//! Exit codes: 0 on success (all thresholds met), 2 on usage or
//! validation problems (bad arguments, malformed files, violated
//! hypotheses), 3 on numerical failure (a computation ran but missed its
//! tolerance or could not produce a fit).

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use oseen::analysis::{
    boundary_quadrature_check, catalogue, kernel_identity_check, KernelKind,
};
use oseen::config::RunConfig;
use oseen::error::{Error, Result};
use oseen::experiments::{
    asymptotics_report, corpus_entry, corpus_with_seed, max_ratio, pairs_from_corpus,
    pressure_estimate_sweep, trace_forcing_family, trace_theorem_check, velocity_estimate_sweep,
    wake_profile_halfplane, wake_profile_plane, BoundaryPair, EstimateReport, RhsVariant,
};
use oseen::grids::SpatialGrid1D;
use oseen::halfplane::{residual, solve_slip, BoundarySignal};
use oseen::report::{
    write_csv, write_json, write_wake_csv, J1Row, MultiplierReport, SweepSummary,
};
use oseen::symbols::OseenParams;
use oseen::wholeplane::fundamental_solution_field;

#[derive(Parser)]
#[command(
    name = "oseen",
    version,
    about = "Spectral solver and verification harness for the planar Oseen system \
             with slip boundary conditions",
    after_help = "Run `oseen config show` to see every setting and its default. \
                  Set RUST_LOG=debug for solver diagnostics."
)]
struct Cli {
    /// Key=value config file; defaults apply when omitted.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Override one config key, e.g. --set params.a2=0.5 (repeatable).
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the slip problem; writes the field dump and a residual report.
    Solve(SolveArgs),
    /// Run one verification suite; writes its reports.
    Verify(VerifyArgs),
    /// Fit wake decay lengths; writes the profile CSV.
    Wake(WakeArgs),
    /// Config utilities.
    Config(ConfigArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Tangential stress data: a corpus profile name, a CSV path
    /// (columns x,value on the run grid), or `none`.
    #[arg(long, default_value = "gauss")]
    b: String,

    /// Normal velocity data, same forms as --b.
    #[arg(long, default_value = "none")]
    d: String,

    /// Threshold on the interior equation residual.
    #[arg(long, default_value_t = 1e-6)]
    pde_tol: f64,

    /// Threshold on the divergence residual.
    #[arg(long, default_value_t = 1e-10)]
    div_tol: f64,

    /// Threshold on the boundary-condition residuals.
    #[arg(long, default_value_t = 1e-8)]
    bc_tol: f64,

    /// Also write the compact binary field dump.
    #[arg(long)]
    binary: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Which suite to run.
    #[arg(value_enum)]
    suite: Suite,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    /// Pressure-gradient estimate sweep with 2x refinement.
    Pressure,
    /// Velocity-Hessian estimate sweep with 2x refinement.
    Velocity,
    /// Boundary-trace estimate for wall-directed drift.
    Trace,
    /// Eigenvalue decay power laws in all regimes.
    Asymptotics,
    /// Multiplier catalogue boundedness and scan stability.
    Multipliers,
    /// Kernel symbol/profile identities.
    Kernels,
    /// Explicit-constant boundary quadrature inequality.
    J1,
}

#[derive(Args)]
struct WakeArgs {
    /// Drift component along the wake axis.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    a1: f64,

    /// Drift component across the wake axis.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    a2: f64,

    /// Where to fit the wake.
    #[arg(long, value_enum, default_value_t = WakeDomain::Plane)]
    domain: WakeDomain,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WakeDomain {
    /// Decay of the fundamental solution around a point source.
    Plane,
    /// Decay of a slip-problem solution along the boundary.
    Halfplane,
}

#[derive(Args)]
struct ConfigArgs {
    #[command(subcommand)]
    action: ConfigAction,
}

#[derive(Subcommand)]
enum ConfigAction {
    /// Print the active configuration in canonical form.
    Show,
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(i32::from(e.exit_code()));
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    for assignment in &cli.set {
        let (key, value) = assignment.split_once('=').ok_or_else(|| {
            Error::InvalidArgument(format!("--set expects KEY=VALUE, got `{assignment}`"))
        })?;
        cfg.set(key.trim(), value.trim(), 0).map_err(|e| match e {
            Error::Config { message, .. } => {
                Error::InvalidArgument(format!("--set {assignment}: {message}"))
            }
            other => other,
        })?;
    }
    let threads = cfg.effective_threads()?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    }

    match cli.command {
        Command::Solve(args) => cmd_solve(&cfg, &args),
        Command::Verify(args) => cmd_verify(&cfg, args.suite),
        Command::Wake(args) => cmd_wake(&cfg, &args),
        Command::Config(args) => match args.action {
            ConfigAction::Show => {
                print!("{}", cfg.dump());
                Ok(0)
            }
        },
    }
}

/// Resolves a boundary-data argument: `none`, a corpus profile name, or a
/// CSV path.
fn boundary_data(source: &str, grid: &SpatialGrid1D, seed: u64) -> Result<BoundarySignal> {
    if source == "none" {
        return BoundarySignal::new(*grid, vec![0.0; grid.n()]);
    }
    if let Some(signal) = corpus_with_seed(seed).into_iter().find(|s| s.name == source) {
        return signal.sample(grid);
    }
    let looks_like_path = source.ends_with(".csv") || source.contains('/') || source.contains('\\');
    if looks_like_path {
        return read_boundary_csv(Path::new(source), grid);
    }
    Err(Error::InvalidArgument(format!(
        "`{source}` is neither `none`, a corpus profile, nor a CSV path; \
         corpus profiles include gauss, dgauss, modlow, modmid, modhigh, bump"
    )))
}

/// Reads `x,value` rows sampled on the run grid. An optional `x,value`
/// header is allowed; every data row must sit on its grid node.
fn read_boundary_csv(path: &Path, grid: &SpatialGrid1D) -> Result<BoundarySignal> {
    let text = fs::read_to_string(path)?;
    let mut samples = Vec::new();
    let mut first_data = true;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let row = raw.trim();
        if row.is_empty() {
            continue;
        }
        let (xs, vs) = row.split_once(',').ok_or_else(|| Error::CsvFormat {
            line,
            message: format!("expected two comma-separated fields, got `{row}`"),
        })?;
        let (xs, vs) = (xs.trim(), vs.trim());
        if first_data && xs.parse::<f64>().is_err() {
            // Header row.
            first_data = false;
            continue;
        }
        first_data = false;
        let x: f64 = xs.parse().map_err(|_| Error::CsvFormat {
            line,
            message: format!("bad x value `{xs}`"),
        })?;
        let v: f64 = vs.parse().map_err(|_| Error::CsvFormat {
            line,
            message: format!("bad sample value `{vs}`"),
        })?;
        let i = samples.len();
        if i < grid.n() {
            let node = grid.node(i);
            if (x - node).abs() > 1e-6 * grid.half_width().max(1.0) {
                return Err(Error::CsvFormat {
                    line,
                    message: format!(
                        "x = {x} does not match grid node {node} (row {i} of an L = {}, \
                         n = {} grid)",
                        grid.half_width(),
                        grid.n()
                    ),
                });
            }
        }
        samples.push(v);
    }
    if samples.len() != grid.n() {
        return Err(Error::GridMismatch(format!(
            "{} has {} data rows; the run grid needs exactly n = {}",
            path.display(),
            samples.len(),
            grid.n()
        )));
    }
    BoundarySignal::new(*grid, samples)
}

#[derive(Serialize)]
struct SolveSummary {
    residuals: oseen::halfplane::ResidualReport,
    pde_tol: f64,
    div_tol: f64,
    bc_tol: f64,
    pass: bool,
}

fn cmd_solve(cfg: &RunConfig, args: &SolveArgs) -> Result<i32> {
    let params = cfg.params()?;
    let grid = cfg.grid()?;
    let levels = cfg.levels(&grid)?;
    let b = boundary_data(&args.b, &grid, cfg.seed)?;
    let d = boundary_data(&args.d, &grid, cfg.seed)?;
    let fields = solve_slip(&params, &b, &d, &levels)?;
    let residuals = residual(&params, &fields)?;

    let pass = residuals.pde_residual_linf < args.pde_tol
        && residuals.divergence_linf < args.div_tol
        && residuals.bc_slip_residual_linf < args.bc_tol
        && residuals.bc_normal_residual_linf < args.bc_tol;

    fs::create_dir_all(&cfg.output_dir)?;
    let csv_path = cfg.output_dir.join("solve-fields.csv");
    let file = fs::File::create(&csv_path)?;
    fields.write_csv(std::io::BufWriter::new(file))?;
    if args.binary {
        let bin_path = cfg.output_dir.join("solve-fields.bin");
        let file = fs::File::create(&bin_path)?;
        fields.write_binary(std::io::BufWriter::new(file))?;
    }
    let summary = SolveSummary {
        residuals,
        pde_tol: args.pde_tol,
        div_tol: args.div_tol,
        bc_tol: args.bc_tol,
        pass,
    };
    write_json(&cfg.output_dir.join("solve-residuals.json"), &summary)?;

    let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
    let r = &summary.residuals;
    println!(
        "pde_residual_linf = {:.3e} (tol {:.0e}) {}",
        r.pde_residual_linf,
        args.pde_tol,
        verdict(r.pde_residual_linf < args.pde_tol)
    );
    println!(
        "divergence_linf = {:.3e} (tol {:.0e}) {}",
        r.divergence_linf,
        args.div_tol,
        verdict(r.divergence_linf < args.div_tol)
    );
    println!(
        "bc_slip_residual_linf = {:.3e} (tol {:.0e}) {}",
        r.bc_slip_residual_linf,
        args.bc_tol,
        verdict(r.bc_slip_residual_linf < args.bc_tol)
    );
    println!(
        "bc_normal_residual_linf = {:.3e} (tol {:.0e}) {}",
        r.bc_normal_residual_linf,
        args.bc_tol,
        verdict(r.bc_normal_residual_linf < args.bc_tol)
    );
    println!("solve: {} (fields in {})", verdict(pass), csv_path.display());
    Ok(if pass { 0 } else { 3 })
}

/// Relative change between two positive maxima.
fn rel_delta(coarse: f64, fine: f64) -> f64 {
    (coarse - fine).abs() / fine.max(f64::MIN_POSITIVE)
}

#[derive(Serialize)]
struct RefinementSummary {
    coarse: SweepSummary,
    fine: SweepSummary,
    refinement_delta: f64,
    delta_tol: f64,
    pass: bool,
}

fn sweep_suite(
    cfg: &RunConfig,
    name: &str,
    exponents: &[f64],
    run: impl Fn(&OseenParams, &[BoundaryPair], &SpatialGrid1D) -> Result<Vec<EstimateReport>>,
) -> Result<i32> {
    let params = cfg.params()?;
    let signals = corpus_with_seed(cfg.seed);
    let mut results = Vec::new();
    for scale in [1, 2] {
        let grid = SpatialGrid1D::new(cfg.half_width, cfg.n * scale)?;
        let pairs = pairs_from_corpus(&signals, &grid)?;
        results.push(run(&params, &pairs, &grid)?);
    }
    let fine = results.pop().expect("two resolutions");
    let coarse = results.pop().expect("two resolutions");
    let delta = rel_delta(max_ratio(&coarse), max_ratio(&fine));
    let finite = fine
        .iter()
        .chain(&coarse)
        .all(|r| r.ratio.is_finite() && r.lhs_norm.is_finite() && r.rhs_norm.is_finite());
    let pass = finite && delta < 0.10;

    write_csv(&cfg.output_dir.join(format!("{name}-rows.csv")), &fine)?;
    let summary = RefinementSummary {
        coarse: SweepSummary::from_reports(&coarse).expect("nonempty sweep"),
        fine: SweepSummary::from_reports(&fine).expect("nonempty sweep"),
        refinement_delta: delta,
        delta_tol: 0.10,
        pass,
    };
    write_json(&cfg.output_dir.join(format!("{name}-summary.json")), &summary)?;

    println!(
        "{name}: exponents {exponents:?}, max ratio {:.6} -> {:.6} under 2x refinement \
         (delta {:.2e}, tol 1e-1) {}",
        summary.coarse.max_ratio,
        summary.fine.max_ratio,
        delta,
        if pass { "PASS" } else { "FAIL" }
    );
    Ok(if pass { 0 } else { 3 })
}

#[derive(Serialize)]
struct TraceSuiteRow {
    datum: String,
    ratio_coarse: f64,
    ratio_fine: f64,
    delta: f64,
}

#[derive(Serialize)]
struct TraceSuiteSummary {
    exponent: f64,
    rows: Vec<TraceSuiteRow>,
    max_delta: f64,
    delta_tol: f64,
    pass: bool,
}

fn trace_suite(cfg: &RunConfig) -> Result<i32> {
    let drift = [cfg.a1, cfg.a2];
    let p = 2.0;
    let mut per_resolution = Vec::new();
    for scale in [1, 2] {
        let grid = SpatialGrid1D::new(cfg.half_width, cfg.n * scale)?;
        let family = trace_forcing_family(&grid)?;
        per_resolution.push(trace_theorem_check(drift, &family, p)?);
    }
    let fine = per_resolution.pop().expect("two resolutions");
    let coarse = per_resolution.pop().expect("two resolutions");
    let rows: Vec<TraceSuiteRow> = coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| TraceSuiteRow {
            datum: c.datum.clone(),
            ratio_coarse: c.ratio,
            ratio_fine: f.ratio,
            delta: rel_delta(c.ratio, f.ratio),
        })
        .collect();
    let max_delta = rows.iter().fold(0.0f64, |m, r| m.max(r.delta));
    let finite = fine.iter().all(|r| r.ratio.is_finite() && r.ratio > 0.0);
    let pass = finite && max_delta < 0.10;

    write_csv(&cfg.output_dir.join("trace-rows.csv"), &fine)?;
    let summary = TraceSuiteSummary {
        exponent: p,
        rows,
        max_delta,
        delta_tol: 0.10,
        pass,
    };
    write_json(&cfg.output_dir.join("trace-summary.json"), &summary)?;
    println!(
        "trace: p = {p}, max ratio delta {:.2e} under 2x refinement (tol 1e-1) {}",
        max_delta,
        if pass { "PASS" } else { "FAIL" }
    );
    Ok(if pass { 0 } else { 3 })
}

fn asymptotics_suite(cfg: &RunConfig) -> Result<i32> {
    let canonical = [
        OseenParams::new(0.0, 1.0, 1.0)?,
        OseenParams::new(1.0, 0.0, 1.0)?,
        OseenParams::new(1.0, -1.0, 1.0)?,
    ];
    let rows = asymptotics_report(&canonical)?;
    write_csv(&cfg.output_dir.join("asymptotics.csv"), &rows)?;
    let mut pass = true;
    for row in &rows {
        // A zero expected slope (constant-rate regime) is checked absolutely.
        let small_ok = if row.small_k_expected == 0.0 {
            row.small_k_slope.abs() < 0.03
        } else {
            (row.small_k_slope / row.small_k_expected - 1.0).abs() < 0.03
        };
        let large_ok = (row.large_k_slope / row.large_k_expected - 1.0).abs() < 0.03;
        pass &= small_ok && large_ok;
        println!(
            "asymptotics {} ({}): small-k {:.4} (expect {}), large-k {:.4} (expect {}) {}",
            row.label,
            row.regime,
            row.small_k_slope,
            row.small_k_expected,
            row.large_k_slope,
            row.large_k_expected,
            if small_ok && large_ok { "PASS" } else { "FAIL" }
        );
    }
    println!("asymptotics: {}", if pass { "PASS" } else { "FAIL" });
    Ok(if pass { 0 } else { 3 })
}

fn multipliers_suite(cfg: &RunConfig) -> Result<i32> {
    let mut reports = Vec::new();
    let mut pass = true;
    for family in catalogue() {
        let report = MultiplierReport::evaluate(&family)?;
        let ok = report.m.is_finite() && report.refinement_delta < 0.05;
        pass &= ok;
        println!(
            "multiplier {:<22} M = {:>12.6} (refinement delta {:.2e}, tol 5e-2) {}",
            report.name,
            report.m,
            report.refinement_delta,
            if ok { "PASS" } else { "FAIL" }
        );
        reports.push(report);
    }
    write_json(&cfg.output_dir.join("multipliers.json"), &reports)?;
    println!("multipliers: {}", if pass { "PASS" } else { "FAIL" });
    Ok(if pass { 0 } else { 3 })
}

#[derive(Serialize)]
struct KernelRow {
    kernel: String,
    t: f64,
    sup_error: f64,
    n_used: usize,
    pass: bool,
}

fn kernels_suite(cfg: &RunConfig) -> Result<i32> {
    let mut rows = Vec::new();
    let mut pass = true;
    for kind in KernelKind::ALL {
        for t in [0.1, 1.0, 10.0] {
            let check = kernel_identity_check(kind, t, 40.0, 2048)?;
            let ok = check.sup_error < 1e-6;
            pass &= ok;
            println!(
                "kernel {:<18} t = {t:<4}: sup error {:.3e} at n = {} (tol 1e-6) {}",
                kind.name(),
                check.sup_error,
                check.n_used,
                if ok { "PASS" } else { "FAIL" }
            );
            rows.push(KernelRow {
                kernel: kind.name().to_string(),
                t,
                sup_error: check.sup_error,
                n_used: check.n_used,
                pass: ok,
            });
        }
    }
    write_json(&cfg.output_dir.join("kernels.json"), &rows)?;
    println!("kernels: {}", if pass { "PASS" } else { "FAIL" });
    Ok(if pass { 0 } else { 3 })
}

fn j1_suite(cfg: &RunConfig) -> Result<i32> {
    let grid = cfg.grid()?;
    let levels = cfg.levels(&grid)?;
    let mut rows = Vec::new();
    let mut pass = true;
    for signal in corpus_with_seed(cfg.seed) {
        let b = signal.sample(&grid)?;
        for p in [2.0, 3.0] {
            let check = boundary_quadrature_check(b.samples(), &grid, &levels, p)?;
            let ok = check.ratio <= 1.05;
            pass &= ok;
            rows.push(J1Row {
                datum: signal.name.clone(),
                exponent: p,
                lhs: check.lhs,
                rhs: check.rhs,
                ratio: check.ratio,
            });
        }
    }
    let worst = rows.iter().fold(0.0f64, |m, r| m.max(r.ratio));
    write_csv(&cfg.output_dir.join("j1.csv"), &rows)?;
    println!(
        "j1: {} checks, worst ratio {:.6} (tol 1.05) {}",
        rows.len(),
        worst,
        if pass { "PASS" } else { "FAIL" }
    );
    Ok(if pass { 0 } else { 3 })
}

fn cmd_verify(cfg: &RunConfig, suite: Suite) -> Result<i32> {
    match suite {
        Suite::Pressure => sweep_suite(cfg, "pressure", &[2.0, 3.0], |params, pairs, grid| {
            let levels = cfg.levels(grid)?;
            pressure_estimate_sweep(params, pairs, &[2.0, 3.0], &levels, RhsVariant::Full)
        }),
        Suite::Velocity => sweep_suite(cfg, "velocity", &[3.5, 4.0], |params, pairs, grid| {
            let levels = cfg.levels(grid)?;
            velocity_estimate_sweep(params, pairs, &[3.5, 4.0], &levels, RhsVariant::Full)
        }),
        Suite::Trace => trace_suite(cfg),
        Suite::Asymptotics => asymptotics_suite(cfg),
        Suite::Multipliers => multipliers_suite(cfg),
        Suite::Kernels => kernels_suite(cfg),
        Suite::J1 => j1_suite(cfg),
    }
}

fn cmd_wake(cfg: &RunConfig, args: &WakeArgs) -> Result<i32> {
    let drift = [args.a1, args.a2];
    let profile = match args.domain {
        WakeDomain::Plane => {
            let grid = cfg.grid()?;
            let field = fundamental_solution_field(drift, grid, grid)?;
            wake_profile_plane(drift, &field, None)?
        }
        WakeDomain::Halfplane => {
            let params = OseenParams::new(drift[0], drift[1], cfg.friction)?;
            let grid = cfg.grid()?;
            let levels = cfg.levels(&grid)?;
            let b = corpus_entry("gauss")
                .expect("pinned corpus entry")
                .sample(&grid)?;
            let d = BoundarySignal::new(grid, vec![0.0; grid.n()])?;
            let fields = solve_slip(&params, &b, &d, &levels)?;
            wake_profile_halfplane(&fields)?
        }
    };
    let path = cfg.output_dir.join("wake.csv");
    write_wake_csv(&path, &profile)?;
    for ray in &profile.rays {
        println!(
            "wake ray {:>5.1} deg: decay length {:.6}",
            ray.angle_degrees, ray.decay_length
        );
    }
    println!(
        "wake: anisotropy {:.6}{} ({})",
        profile.anisotropy_ratio,
        profile
            .transverse_ratio
            .map_or(String::new(), |t| format!(", transverse {t:.6}")),
        path.display()
    );
    Ok(0)
}
