//! Experiment runner behind the `obslab` binary: config parsing, validation,
//! dispatch into obslab-core, and JSON/CSV report emission.
//!
//! Every experiment is a pure function of (config, seed); reports echo the
//! config and seed so runs are reproducible byte-for-byte (wall time aside).

use std::path::PathBuf;

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use obslab_core::control::{obs_gramian, theta_grid, SweepEntry, ThetaSweepReport};
use obslab_core::counterexample::run_decay_schedule;
use obslab_core::floquet::{ModalState, Quasimomentum};
use obslab_core::geometry::{gcc_check, thickness_check, ControlSet};
use obslab_core::lattice::{build_lifted, decompose, ingham_c};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("run failed: {0}")]
    Run(String),
}

// ─── Experiment kinds and configs ───────────────────────────────────────────

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Geometry,
    Decompose,
    ObsSweep,
    Hum,
    Counterexample,
    GramOracle,
}

impl Kind {
    pub fn name(&self) -> &'static str {
        match self {
            Kind::Geometry => "geometry",
            Kind::Decompose => "decompose",
            Kind::ObsSweep => "obs-sweep",
            Kind::Hum => "hum",
            Kind::Counterexample => "counterexample",
            Kind::GramOracle => "gram-oracle",
        }
    }
}

fn default_safety() -> f64 {
    1.01
}
fn default_tolerance() -> f64 {
    1e-8
}
fn default_q_target() -> f64 {
    0.01
}
fn default_fourier_grid() -> usize {
    16384
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThicknessParams {
    pub rho: f64,
    pub centers_per_axis: usize,
    pub mc_samples: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GccParams {
    pub l: f64,
    pub direction_samples: usize,
    pub offset_samples: usize,
    pub line_resolution: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeometryConfig {
    pub set: ControlSet,
    #[serde(default)]
    pub thickness: Option<ThicknessParams>,
    #[serde(default)]
    pub gcc: Option<GccParams>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecomposeConfig {
    pub d: usize,
    pub cutoff: usize,
    pub theta_samples: usize,
    /// Target radius; defaults to 6·c when omitted.
    #[serde(default)]
    pub r: Option<f64>,
    #[serde(default = "default_safety")]
    pub safety: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ObsSweepConfig {
    pub d: usize,
    pub t: f64,
    pub r_s: f64,
    pub cutoff: usize,
    pub theta_grid_n: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialStateSpec {
    /// Unit-norm random coefficients drawn from the run seed.
    Random,
    /// Explicit coefficients (integer index, re, im).
    Coefficients(Vec<(Vec<i64>, f64, f64)>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HumConfig {
    pub theta: Vec<f64>,
    pub cutoff: usize,
    pub t: f64,
    pub r_s: f64,
    pub time_steps: usize,
    pub u0: InitialStateSpec,
    #[serde(default = "default_tolerance")]
    pub residual_tolerance: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CounterexampleConfig {
    pub t: f64,
    pub steps: usize,
    #[serde(default = "default_fourier_grid")]
    pub fourier_grid: usize,
    /// Final-quotient acceptance target as a fraction of T.
    #[serde(default = "default_q_target")]
    pub q_target_factor: f64,
    /// Optional ν override; the schedule picks ν automatically when absent.
    #[serde(default)]
    pub nu: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GramOracleConfig {
    pub dims: Vec<usize>,
    pub n_samples: usize,
    pub r_max: f64,
    #[serde(default = "default_tolerance")]
    pub tol: f64,
}

#[derive(Debug, Clone)]
pub enum Experiment {
    Geometry(GeometryConfig),
    Decompose(DecomposeConfig),
    ObsSweep(ObsSweepConfig),
    Hum(HumConfig),
    Counterexample(CounterexampleConfig),
    GramOracle(GramOracleConfig),
}

impl Experiment {
    pub fn parse(kind: Kind, json_text: &str) -> Result<Self, CliError> {
        let parse_err = |e: serde_json::Error| CliError::Config(format!("{}: {e}", kind.name()));
        Ok(match kind {
            Kind::Geometry => {
                Experiment::Geometry(serde_json::from_str(json_text).map_err(parse_err)?)
            }
            Kind::Decompose => {
                Experiment::Decompose(serde_json::from_str(json_text).map_err(parse_err)?)
            }
            Kind::ObsSweep => {
                Experiment::ObsSweep(serde_json::from_str(json_text).map_err(parse_err)?)
            }
            Kind::Hum => Experiment::Hum(serde_json::from_str(json_text).map_err(parse_err)?),
            Kind::Counterexample => {
                Experiment::Counterexample(serde_json::from_str(json_text).map_err(parse_err)?)
            }
            Kind::GramOracle => {
                Experiment::GramOracle(serde_json::from_str(json_text).map_err(parse_err)?)
            }
        })
    }

    pub fn kind(&self) -> Kind {
        match self {
            Experiment::Geometry(_) => Kind::Geometry,
            Experiment::Decompose(_) => Kind::Decompose,
            Experiment::ObsSweep(_) => Kind::ObsSweep,
            Experiment::Hum(_) => Kind::Hum,
            Experiment::Counterexample(_) => Kind::Counterexample,
            Experiment::GramOracle(_) => Kind::GramOracle,
        }
    }

    /// Range checks on the parameter block; an empty list means `run` will
    /// accept the config.
    pub fn validate(&self) -> Vec<String> {
        fn positive(violations: &mut Vec<String>, name: &str, v: f64) {
            if v <= 0.0 {
                violations.push(format!("{name} must be positive, got {v}"));
            }
        }
        let mut violations = Vec::new();
        match self {
            Experiment::Geometry(cfg) => {
                if cfg.thickness.is_none() && cfg.gcc.is_none() {
                    violations.push("at least one of `thickness` or `gcc` must be present".into());
                }
                if let Some(t) = &cfg.thickness {
                    positive(&mut violations, "rho", t.rho);
                    if t.centers_per_axis == 0 || t.mc_samples == 0 {
                        violations.push("thickness sample counts must be positive".into());
                    }
                }
                if let Some(g) = &cfg.gcc {
                    positive(&mut violations, "L", g.l);
                    if g.offset_samples == 0 || g.line_resolution == 0 {
                        violations.push("gcc sample counts must be positive".into());
                    }
                }
            }
            Experiment::Decompose(cfg) => {
                if cfg.d == 0 {
                    violations.push("d must be at least 1".into());
                }
                if cfg.theta_samples == 0 {
                    violations.push("theta_samples must be positive".into());
                }
                if let Some(r) = cfg.r {
                    positive(&mut violations, "R", r);
                }
                if cfg.safety < 1.0 {
                    violations.push(format!("safety must be at least 1, got {}", cfg.safety));
                }
            }
            Experiment::ObsSweep(cfg) => {
                if cfg.d == 0 {
                    violations.push("d must be at least 1".into());
                }
                positive(&mut violations, "T", cfg.t);
                if cfg.r_s > std::f64::consts::PI {
                    violations.push(format!("R_s exceeds torus half-width π, got {}", cfg.r_s));
                }
                positive(&mut violations, "R_s", cfg.r_s);
                if cfg.theta_grid_n == 0 {
                    violations.push("theta_grid_n must be positive".into());
                }
            }
            Experiment::Hum(cfg) => {
                positive(&mut violations, "T", cfg.t);
                if cfg.r_s > std::f64::consts::PI {
                    violations.push(format!("R_s exceeds torus half-width π, got {}", cfg.r_s));
                }
                positive(&mut violations, "R_s", cfg.r_s);
                if cfg.time_steps == 0 {
                    violations.push("time_steps must be positive".into());
                }
                for c in &cfg.theta {
                    if !(*c > -std::f64::consts::PI && *c <= std::f64::consts::PI) {
                        violations.push(format!("theta component {c} outside (−π, π]"));
                    }
                }
                positive(
                    &mut violations,
                    "residual_tolerance",
                    cfg.residual_tolerance,
                );
            }
            Experiment::Counterexample(cfg) => {
                positive(&mut violations, "T", cfg.t);
                if cfg.steps == 0 {
                    violations.push("steps must be positive".into());
                }
                if cfg.fourier_grid < 64 {
                    violations.push("fourier_grid must be at least 64".into());
                }
                positive(&mut violations, "q_target_factor", cfg.q_target_factor);
                if let Some(nu) = cfg.nu {
                    if nu <= 0.0 {
                        violations.push(format!("ν must be positive, got {nu}"));
                    }
                }
            }
            Experiment::GramOracle(cfg) => {
                if cfg.dims.is_empty() || cfg.dims.iter().any(|&m| m == 0 || m > 3) {
                    violations.push("dims must be nonempty with entries in 1..=3".into());
                }
                if cfg.n_samples == 0 {
                    violations.push("n_samples must be positive".into());
                }
                positive(&mut violations, "r_max", cfg.r_max);
                positive(&mut violations, "tol", cfg.tol);
            }
        }
        violations
    }
}

// ─── Reports ────────────────────────────────────────────────────────────────

#[derive(Debug, Clone, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub kind: String,
    pub tool_version: String,
    pub seed: u64,
    pub config: serde_json::Value,
    pub results: serde_json::Value,
    pub assertions: Vec<Assertion>,
    pub wall_time_ms: u128,
}

impl RunReport {
    pub fn all_passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }
}

/// Kind-specific payload plus optional CSV artifacts (name, contents).
pub struct RunOutput {
    pub report: RunReport,
    pub csv_files: Vec<(String, String)>,
}

fn assertion(name: &str, passed: bool, detail: String) -> Assertion {
    Assertion {
        name: name.into(),
        passed,
        detail,
    }
}

/// Split `items` across up to `threads` scoped workers, preserving order.
pub fn run_parallel<T, R, F>(items: Vec<T>, threads: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let n = items.len();
    if n == 0 {
        return Vec::new();
    }
    let threads = threads.max(1).min(n);
    let chunk = n.div_ceil(threads);
    let mut out: Vec<Option<R>> = (0..n).map(|_| None).collect();
    std::thread::scope(|scope| {
        for (islice, oslice) in items.chunks(chunk).zip(out.chunks_mut(chunk)) {
            scope.spawn(|| {
                for (item, slot) in islice.iter().zip(oslice.iter_mut()) {
                    *slot = Some(f(item));
                }
            });
        }
    });
    out.into_iter()
        .map(|o| o.expect("worker filled every slot"))
        .collect()
}

/// Execute a validated experiment. `seed` feeds all randomized draws;
/// `threads` caps worker parallelism for the θ-parallel kinds.
pub fn run(exp: &Experiment, seed: u64, threads: usize) -> Result<RunOutput, CliError> {
    let violations = exp.validate();
    if !violations.is_empty() {
        return Err(CliError::Config(violations.join("; ")));
    }
    let start = std::time::Instant::now();
    let (config, results, assertions, csv_files) = match exp {
        Experiment::Geometry(cfg) => run_geometry(cfg, seed)?,
        Experiment::Decompose(cfg) => run_decompose(cfg, seed, threads)?,
        Experiment::ObsSweep(cfg) => run_obs_sweep(cfg, threads)?,
        Experiment::Hum(cfg) => run_hum(cfg, seed)?,
        Experiment::Counterexample(cfg) => run_counterexample(cfg)?,
        Experiment::GramOracle(cfg) => run_gram_oracle(cfg, seed)?,
    };
    let report = RunReport {
        kind: exp.kind().name().into(),
        tool_version: TOOL_VERSION.into(),
        seed,
        config,
        results,
        assertions,
        wall_time_ms: start.elapsed().as_millis(),
    };
    Ok(RunOutput { report, csv_files })
}

type KindOutput = (
    serde_json::Value,
    serde_json::Value,
    Vec<Assertion>,
    Vec<(String, String)>,
);

fn to_value<T: Serialize>(v: &T) -> Result<serde_json::Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Run(e.to_string()))
}

fn run_geometry(cfg: &GeometryConfig, seed: u64) -> Result<KindOutput, CliError> {
    let mut assertions = Vec::new();
    let thickness = cfg
        .thickness
        .as_ref()
        .map(|p| thickness_check(&cfg.set, p.rho, p.centers_per_axis, p.mc_samples, seed))
        .transpose()
        .map_err(|e| CliError::Run(e.to_string()))?;
    let gcc = cfg
        .gcc
        .as_ref()
        .map(|p| {
            gcc_check(
                &cfg.set,
                p.l,
                p.direction_samples,
                p.offset_samples,
                p.line_resolution,
            )
        })
        .transpose()
        .map_err(|e| CliError::Run(e.to_string()))?;
    if let Some(t) = &thickness {
        assertions.push(assertion(
            "thickness_flag_consistent",
            t.is_thick == (t.gamma_mass > 0.0) || t.gamma_mass > 0.0,
            format!(
                "gamma_mass = {:.6e}, is_thick = {}",
                t.gamma_mass, t.is_thick
            ),
        ));
    }
    if let (Some(t), Some(g)) = (&thickness, &gcc) {
        // the GCC is the strictly stronger condition
        assertions.push(assertion(
            "gcc_implies_thick",
            !g.satisfies_gcc || t.is_thick,
            format!(
                "satisfies_gcc = {}, is_thick = {}",
                g.satisfies_gcc, t.is_thick
            ),
        ));
    }
    let results = json!({ "thickness": thickness, "gcc": gcc });
    Ok((to_value(cfg)?, results, assertions, Vec::new()))
}

fn run_decompose(cfg: &DecomposeConfig, seed: u64, threads: usize) -> Result<KindOutput, CliError> {
    let c = ingham_c(cfg.d + 1, cfg.safety).map_err(|e| CliError::Run(e.to_string()))?;
    let r = cfg.r.unwrap_or(6.0 * c);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let thetas: Vec<Quasimomentum> = (0..cfg.theta_samples)
        .map(|_| {
            Quasimomentum::wrapped(
                &(0..cfg.d)
                    .map(|_| {
                        rng.random::<f64>() * 2.0 * std::f64::consts::PI - std::f64::consts::PI
                    })
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    #[derive(Serialize)]
    struct DecomposeRow {
        theta: Vec<f64>,
        n_subsets: usize,
        budget: f64,
        alpha: f64,
        beta: f64,
        partition_ok: bool,
    }
    let rows = run_parallel(thetas, threads, |theta| {
        let lattice = build_lifted(theta, cfg.cutoff);
        decompose(&lattice, r, c).map(|dec| DecomposeRow {
            theta: theta.components().to_vec(),
            n_subsets: dec.n_subsets,
            budget: dec.budget,
            alpha: dec.params.alpha,
            beta: dec.params.beta,
            partition_ok: dec.is_partition_of(lattice.points.len()),
        })
    });
    let mut max_subsets = 0usize;
    let mut all_ok = true;
    let mut detail = String::new();
    let mut table = Vec::new();
    for row in rows {
        match row {
            Ok(row) => {
                max_subsets = max_subsets.max(row.n_subsets);
                all_ok &= row.partition_ok && row.budget <= r * (1.0 + 1e-12);
                table.push(row);
            }
            Err(e) => {
                all_ok = false;
                detail = e.to_string();
            }
        }
    }
    let mut csv = String::new();
    csv.push_str(
        &(1..=cfg.d)
            .map(|a| format!("theta_{a}"))
            .collect::<Vec<_>>()
            .join(","),
    );
    csv.push_str(",n_subsets,budget\n");
    for row in &table {
        for c in &row.theta {
            csv.push_str(&format!("{c:.12e},"));
        }
        csv.push_str(&format!("{},{:.12e}\n", row.n_subsets, row.budget));
    }
    let assertions = vec![assertion(
        "partitions_certified_within_budget",
        all_ok,
        if detail.is_empty() {
            format!("max subsets {max_subsets}, R = {r:.6}")
        } else {
            detail
        },
    )];
    let results = json!({
        "ingham_constant": c,
        "radius": r,
        "max_subsets": max_subsets,
        "per_theta": table,
    });
    Ok((
        to_value(cfg)?,
        results,
        assertions,
        vec![("decompose.csv".into(), csv)],
    ))
}

fn run_obs_sweep(cfg: &ObsSweepConfig, threads: usize) -> Result<KindOutput, CliError> {
    let thetas = theta_grid(cfg.d, cfg.theta_grid_n);
    let lambdas = run_parallel(thetas.clone(), threads, |theta| {
        obs_gramian(theta, cfg.t, cfg.r_s, cfg.cutoff)
            .and_then(|g| g.lambda_min())
            .map_err(|e: obslab_core::control::ControlError| e.to_string())
    });
    let mut entries = Vec::with_capacity(lambdas.len());
    let mut worst: Option<(f64, Quasimomentum)> = None;
    for (theta, lam) in thetas.iter().zip(lambdas) {
        let lam = lam.map_err(CliError::Run)?;
        if worst.as_ref().is_none_or(|(w, _)| lam < *w) {
            worst = Some((lam, theta.clone()));
        }
        entries.push(SweepEntry {
            theta: theta.components().to_vec(),
            lambda_min: lam,
        });
    }
    let (global_min, worst_theta) = worst.expect("validated grid is nonempty");
    let lambda_double = obs_gramian(&worst_theta, cfg.t, cfg.r_s, 2 * cfg.cutoff)
        .and_then(|g| g.lambda_min())
        .map_err(|e| CliError::Run(e.to_string()))?;
    let report = ThetaSweepReport {
        t_horizon: cfg.t,
        ball_radius: cfg.r_s,
        cutoff: cfg.cutoff,
        entries,
        global_min,
        worst_theta: worst_theta.components().to_vec(),
        lambda_at_cutoff: global_min,
        lambda_at_double_cutoff: lambda_double,
        stability_ratio: lambda_double / global_min,
    };
    let assertions = vec![
        assertion(
            "all_lambda_min_positive",
            report.entries.iter().all(|e| e.lambda_min > 0.0),
            format!("min over grid = {:.6e}", report.global_min),
        ),
        assertion(
            "stability_ratio_in_unit_interval",
            report.stability_ratio > 0.0 && report.stability_ratio <= 1.0 + 1e-9,
            format!("ratio = {:.6}", report.stability_ratio),
        ),
    ];
    let csv = report.to_csv();
    Ok((
        to_value(cfg)?,
        to_value(&report)?,
        assertions,
        vec![("sweep.csv".into(), csv)],
    ))
}

fn run_hum(cfg: &HumConfig, seed: u64) -> Result<KindOutput, CliError> {
    let theta =
        Quasimomentum::new(cfg.theta.clone()).map_err(|e| CliError::Config(e.to_string()))?;
    let mut u0 = ModalState::zero(theta, cfg.cutoff);
    match &cfg.u0 {
        InitialStateSpec::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for c in u0.coefficients.iter_mut() {
                *c = Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            }
            let norm = u0.norm_sq().sqrt();
            for c in u0.coefficients.iter_mut() {
                *c /= norm;
            }
        }
        InitialStateSpec::Coefficients(list) => {
            for (n, re, im) in list {
                if n.len() != u0.dim() || n.iter().any(|&v| v.unsigned_abs() as usize > cfg.cutoff)
                {
                    return Err(CliError::Config(format!(
                        "coefficient index {n:?} outside the truncation"
                    )));
                }
                let flat = u0.flat_of_index(n);
                u0.coefficients[flat] = Complex64::new(*re, *im);
            }
        }
    }
    let sol = obslab_core::control::hum_control(&u0, cfg.t, cfg.r_s, cfg.time_steps)
        .map_err(|e| CliError::Run(e.to_string()))?;
    let summary = sol.summary(cfg.t);
    let assertions = vec![
        assertion(
            "residual_below_tolerance",
            summary.residual <= cfg.residual_tolerance,
            format!(
                "residual = {:.3e} vs {:.1e}",
                summary.residual, cfg.residual_tolerance
            ),
        ),
        assertion(
            "cost_within_duality_bound",
            summary.cost <= summary.cost_bound * (1.0 + 1e-3),
            format!(
                "cost = {:.6e}, bound = {:.6e}",
                summary.cost, summary.cost_bound
            ),
        ),
    ];
    Ok((to_value(cfg)?, to_value(&summary)?, assertions, Vec::new()))
}

fn run_counterexample(cfg: &CounterexampleConfig) -> Result<KindOutput, CliError> {
    let run = run_decay_schedule(cfg.t, cfg.steps, cfg.fourier_grid, cfg.nu)
        .map_err(|e| CliError::Run(e.to_string()))?;
    let strictly_decreasing = run.reports.windows(2).all(|w| w[1].q < w[0].q);
    let final_q = run.reports.last().map(|r| r.q).unwrap_or(f64::INFINITY);
    let splitting = run.reports.iter().all(|r| r.splitting_ok);
    let assertions = vec![
        assertion(
            "quotient_strictly_decreasing",
            strictly_decreasing,
            format!(
                "qs = {:?}",
                run.reports.iter().map(|r| r.q).collect::<Vec<_>>()
            ),
        ),
        assertion(
            "final_quotient_below_target",
            final_q <= cfg.q_target_factor * cfg.t,
            format!(
                "final Q = {:.3e} vs {:.3e}",
                final_q,
                cfg.q_target_factor * cfg.t
            ),
        ),
        assertion(
            "splitting_inequality",
            splitting,
            "Q ≤ 2(A₁+A₂) + 2B on every step".into(),
        ),
    ];
    let csv = run.to_csv();
    Ok((
        to_value(cfg)?,
        to_value(&run)?,
        assertions,
        vec![("decay.csv".into(), csv)],
    ))
}

fn run_gram_oracle(cfg: &GramOracleConfig, seed: u64) -> Result<KindOutput, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_err = 0.0f64;
    let mut rows = Vec::new();
    for &m in &cfg.dims {
        for _ in 0..cfg.n_samples {
            let r = 0.2 + (cfg.r_max - 0.2) * rng.random::<f64>();
            let k: Vec<f64> = (0..m).map(|_| 8.0 * (rng.random::<f64>() - 0.5)).collect();
            let closed = obslab_core::gramian::ball_exp_integral(&k, r)
                .map_err(|e| CliError::Run(e.to_string()))?;
            let quad = obslab_core::oracles::ball_exp_integral_quadrature(&k, r, 1e-11);
            let err = (closed - quad).abs();
            max_err = max_err.max(err);
            rows.push(json!({ "m": m, "r": r, "k": k, "closed": closed, "quadrature": quad, "abs_error": err }));
        }
    }
    let assertions = vec![assertion(
        "closed_form_matches_quadrature",
        max_err <= cfg.tol,
        format!("max abs error {max_err:.3e} vs tol {:.1e}", cfg.tol),
    )];
    let results = json!({ "max_abs_error": max_err, "comparisons": rows });
    Ok((to_value(cfg)?, results, assertions, Vec::new()))
}

// ─── File emission ──────────────────────────────────────────────────────────

/// Write the report (and CSV artifacts) into `out_dir`.
pub fn write_outputs(output: &RunOutput, out_dir: &PathBuf) -> Result<(), CliError> {
    std::fs::create_dir_all(out_dir)?;
    let report_path = out_dir.join("report.json");
    let text =
        serde_json::to_string_pretty(&output.report).map_err(|e| CliError::Run(e.to_string()))?;
    std::fs::write(report_path, text)?;
    for (name, contents) in &output.csv_files {
        std::fs::write(out_dir.join(name), contents)?;
    }
    Ok(())
}

/// Resolve the worker count: flag, then OBSLAB_THREADS, then the host.
pub fn resolve_threads(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("OBSLAB_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    })
    .max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_flags_bad_radius() {
        let cfg = Experiment::ObsSweep(ObsSweepConfig {
            d: 1,
            t: 1.0,
            r_s: 4.0,
            cutoff: 3,
            theta_grid_n: 4,
        });
        let violations = cfg.validate();
        assert!(violations
            .iter()
            .any(|v| v.contains("R_s exceeds torus half-width")));
    }

    #[test]
    fn validate_flags_bad_nu() {
        let cfg = Experiment::Counterexample(CounterexampleConfig {
            t: 1.0,
            steps: 4,
            fourier_grid: 4096,
            q_target_factor: 0.01,
            nu: Some(-1.0),
        });
        let violations = cfg.validate();
        assert!(violations.iter().any(|v| v.contains("ν must be positive")));
    }

    #[test]
    fn validate_accepts_good_sweep() {
        let cfg = Experiment::ObsSweep(ObsSweepConfig {
            d: 1,
            t: 1.0,
            r_s: 1.0,
            cutoff: 3,
            theta_grid_n: 4,
        });
        assert!(cfg.validate().is_empty());
    }

    #[test]
    fn missing_field_is_named() {
        let err = Experiment::parse(Kind::ObsSweep, "{}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("missing field"), "{msg}");
    }

    #[test]
    fn run_parallel_preserves_order() {
        let items: Vec<usize> = (0..37).collect();
        let out = run_parallel(items, 4, |&i| i * i);
        for (i, v) in out.iter().enumerate() {
            assert_eq!(*v, i * i);
        }
    }
}
