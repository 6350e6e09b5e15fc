//! Observability Gramians for the torus Schrödinger group and HUM control.
//!
//! At a fixed quasimomentum θ the observed mass of a modal state over the
//! ball B_{R_s} and the window [0, T] is the Hermitian quadratic form
//!
//! ```text
//! ∫₀ᵀ ∫_{B_{R_s}} |Σ_γ α_γ e^{i(yγ − t|γ|²)}|² dy dt = α* M α,
//! M[γ][γ'] = (∫_{B_{R_s}} e^{iy(γ−γ')} dy) · (∫₀ᵀ e^{it(|γ|²−|γ'|²)} dt),
//! ```
//!
//! both factors in closed form. The smallest eigenvalue of M is the best
//! observability constant of the truncation; divided by (2π)^d it becomes the
//! constant of the L²-normalized inequality and bounds the HUM control cost
//! by ‖u₀‖²_{L²} / (λ_min/(2π)^d).
//!
//! The HUM null-control is the adjoint trajectory v(s) = e^{i(T−s)Δ_θ} w
//! restricted to the ball, with w solving the controllability Gramian system.
//! Its end state is evaluated through the same closed-form time integrals, so
//! the reported residual reflects only the linear solve. The generic
//! [`simulate_duhamel`] path integrates sampled trajectories with composite
//! trapezoid weights and is second-order in the step for smooth forcing.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::floquet::{propagate, ModalState, Quasimomentum};
use crate::gramian::{ball_exp_integral, gram_matrix, smallest_eigenvalue_hermitian, GramianError};
use crate::lattice::build_lifted;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Error)]
pub enum ControlError {
    #[error("observation radius must lie in (0, π], got {0}")]
    InvalidRadius(f64),
    #[error("time horizon must be positive, got {0}")]
    InvalidHorizon(f64),
    #[error("time grid needs at least one step")]
    EmptyTimeGrid,
    #[error("gramian numerically singular: λ_min = {lambda_min:.3e} vs norm {norm:.3e}; the truncation is under-observed")]
    SingularGramian { lambda_min: f64, norm: f64 },
    #[error("trajectory and state grids do not match: {0}")]
    GridMismatch(String),
    #[error(transparent)]
    Gramian(#[from] GramianError),
}

// ─── Observability Gramians ─────────────────────────────────────────────────

/// Closed-form observability Gramian of a mode truncation at fixed θ.
#[derive(Debug, Clone)]
pub struct ObservabilityGramian {
    pub theta: Quasimomentum,
    pub t_horizon: f64,
    pub ball_radius: f64,
    pub cutoff: usize,
    pub matrix: DMatrix<Complex64>,
}

/// ∫₀ᵀ e^{itλ} dt, with the small-|λT| series to stay smooth through λ = 0.
fn time_factor(lambda: f64, t: f64) -> Complex64 {
    let x = lambda * t;
    if x.abs() < 1e-6 {
        // T (1 + ix/2 − x²/6 − ix³/24)
        Complex64::new(t * (1.0 - x * x / 6.0), t * (x / 2.0 - x * x * x / 24.0))
    } else {
        (Complex64::new(0.0, x).exp() - 1.0) / Complex64::new(0.0, lambda)
    }
}

/// ∫_{−T/2}^{T/2} e^{itλ} dt = 2 sin(λT/2)/λ (real).
fn time_factor_centered(lambda: f64, t: f64) -> f64 {
    let x = lambda * t / 2.0;
    if x.abs() < 1e-6 {
        t * (1.0 - x * x / 6.0)
    } else {
        2.0 * x.sin() / lambda
    }
}

fn validated(t: f64, r_s: f64) -> Result<(), ControlError> {
    if !(r_s > 0.0 && r_s <= std::f64::consts::PI) {
        return Err(ControlError::InvalidRadius(r_s));
    }
    if t <= 0.0 {
        return Err(ControlError::InvalidHorizon(t));
    }
    Ok(())
}

fn assemble_gramian(
    theta: &Quasimomentum,
    t: f64,
    r_s: f64,
    cutoff: usize,
    centered: bool,
) -> Result<DMatrix<Complex64>, ControlError> {
    let probe = ModalState::zero(theta.clone(), cutoff);
    let gammas = probe.gammas();
    let n = gammas.len();
    let d = theta.dim();
    let mut matrix = DMatrix::<Complex64>::zeros(n, n);
    let mut diff = vec![0.0; d];
    for j in 0..n {
        let lam_j: f64 = gammas[j].iter().map(|g| g * g).sum();
        for k in j..n {
            let lam_k: f64 = gammas[k].iter().map(|g| g * g).sum();
            for a in 0..d {
                diff[a] = gammas[j][a] - gammas[k][a];
            }
            let space = ball_exp_integral(&diff, r_s)?;
            let entry = if centered {
                Complex64::new(space * time_factor_centered(lam_j - lam_k, t), 0.0)
            } else {
                space * time_factor(lam_j - lam_k, t)
            };
            matrix[(j, k)] = entry;
            matrix[(k, j)] = entry.conj();
        }
    }
    Ok(matrix)
}

/// Observability Gramian over the window [0, T].
pub fn obs_gramian(
    theta: &Quasimomentum,
    t: f64,
    r_s: f64,
    cutoff: usize,
) -> Result<ObservabilityGramian, ControlError> {
    validated(t, r_s)?;
    let matrix = assemble_gramian(theta, t, r_s, cutoff, false)?;
    Ok(ObservabilityGramian {
        theta: theta.clone(),
        t_horizon: t,
        ball_radius: r_s,
        cutoff,
        matrix,
    })
}

/// Observability Gramian over the shifted window [−T/2, T/2]; unitarily
/// equivalent to [`obs_gramian`], hence the same spectrum.
pub fn obs_gramian_centered(
    theta: &Quasimomentum,
    t: f64,
    r_s: f64,
    cutoff: usize,
) -> Result<ObservabilityGramian, ControlError> {
    validated(t, r_s)?;
    let matrix = assemble_gramian(theta, t, r_s, cutoff, true)?;
    Ok(ObservabilityGramian {
        theta: theta.clone(),
        t_horizon: t,
        ball_radius: r_s,
        cutoff,
        matrix,
    })
}

/// The (d+1)-dimensional ball Gramian over the lifted lattice with radius
/// R' = min(R_s, T/2). The centered cylinder region contains this ball, so
/// λ_min(centered Gramian) ≥ λ_min(ball Gramian) — the one-sided reduction
/// from cylinder to ball is itself a testable inequality.
pub fn ball_lower_gramian(
    theta: &Quasimomentum,
    t: f64,
    r_s: f64,
    cutoff: usize,
) -> Result<crate::gramian::GramMatrix, ControlError> {
    validated(t, r_s)?;
    let r = r_s.min(t / 2.0);
    let lifted = build_lifted(theta, cutoff);
    Ok(gram_matrix(&lifted.coords(), r)?)
}

impl ObservabilityGramian {
    pub fn n_modes(&self) -> usize {
        self.matrix.nrows()
    }

    /// Smallest eigenvalue (the truncation's observability constant in the
    /// modal ℓ² normalization).
    pub fn lambda_min(&self) -> Result<f64, ControlError> {
        Ok(smallest_eigenvalue_hermitian(&self.matrix)?)
    }

    /// λ_min / (2π)^d: the constant of the L²-normalized observability
    /// inequality, the one that bounds HUM control costs.
    pub fn observability_constant(&self) -> Result<f64, ControlError> {
        Ok(self.lambda_min()? / TWO_PI.powi(self.theta.dim() as i32))
    }

    /// Quadratic form α* M α (the observed mass of the state).
    pub fn quadratic_form(&self, state: &ModalState) -> f64 {
        let n = self.n_modes();
        let mut total = Complex64::new(0.0, 0.0);
        for j in 0..n {
            for k in 0..n {
                total += state.coefficients[j].conj() * self.matrix[(j, k)] * state.coefficients[k];
            }
        }
        total.re
    }
}

// ─── θ sweeps ───────────────────────────────────────────────────────────────

#[derive(Debug, Clone, Serialize)]
pub struct SweepEntry {
    pub theta: Vec<f64>,
    pub lambda_min: f64,
}

/// λ_min over a uniform θ grid, with a truncation-stability probe at the
/// worst grid point.
#[derive(Debug, Clone, Serialize)]
pub struct ThetaSweepReport {
    pub t_horizon: f64,
    pub ball_radius: f64,
    pub cutoff: usize,
    pub entries: Vec<SweepEntry>,
    pub global_min: f64,
    pub worst_theta: Vec<f64>,
    pub lambda_at_cutoff: f64,
    pub lambda_at_double_cutoff: f64,
    /// λ_min(2·cutoff) / λ_min(cutoff) at the worst θ, in (0, 1] by
    /// eigenvalue interlacing.
    pub stability_ratio: f64,
}

/// Uniform grid {−π + 2πk/n : k = 1..n} per axis.
pub fn theta_grid(d: usize, n: usize) -> Vec<Quasimomentum> {
    let axis: Vec<f64> = (1..=n)
        .map(|k| -std::f64::consts::PI + TWO_PI * k as f64 / n as f64)
        .collect();
    let mut out = Vec::with_capacity(n.pow(d as u32));
    let mut idx = vec![0usize; d];
    loop {
        out.push(Quasimomentum::wrapped(
            &idx.iter().map(|&i| axis[i]).collect::<Vec<_>>(),
        ));
        let mut a = d;
        loop {
            if a == 0 {
                return out;
            }
            a -= 1;
            idx[a] += 1;
            if idx[a] < n {
                break;
            }
            idx[a] = 0;
        }
    }
}

/// Sweep λ_min(obs_gramian(θ)) over the uniform θ grid.
pub fn theta_sweep(
    d: usize,
    t: f64,
    r_s: f64,
    cutoff: usize,
    theta_grid_n: usize,
) -> Result<ThetaSweepReport, ControlError> {
    validated(t, r_s)?;
    if theta_grid_n == 0 {
        return Err(ControlError::EmptyTimeGrid);
    }
    let mut entries = Vec::with_capacity(theta_grid_n.pow(d as u32));
    let mut worst: Option<(f64, Quasimomentum)> = None;
    for theta in theta_grid(d, theta_grid_n) {
        let lam = obs_gramian(&theta, t, r_s, cutoff)?.lambda_min()?;
        if worst.as_ref().is_none_or(|(w, _)| lam < *w) {
            worst = Some((lam, theta.clone()));
        }
        entries.push(SweepEntry {
            theta: theta.components().to_vec(),
            lambda_min: lam,
        });
    }
    let (global_min, worst_theta) = worst.expect("grid is nonempty");
    let lambda_double = obs_gramian(&worst_theta, t, r_s, 2 * cutoff)?.lambda_min()?;
    Ok(ThetaSweepReport {
        t_horizon: t,
        ball_radius: r_s,
        cutoff,
        entries,
        global_min,
        worst_theta: worst_theta.components().to_vec(),
        lambda_at_cutoff: global_min,
        lambda_at_double_cutoff: lambda_double,
        stability_ratio: lambda_double / global_min,
    })
}

impl ThetaSweepReport {
    /// CSV rows (θ components..., λ_min), one sweep entry per line.
    pub fn to_csv(&self) -> String {
        let d = self.worst_theta.len();
        let mut out = String::new();
        out.push_str(
            &(1..=d)
                .map(|a| format!("theta_{a}"))
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push_str(",lambda_min\n");
        for e in &self.entries {
            for c in &e.theta {
                out.push_str(&format!("{c:.12e},"));
            }
            out.push_str(&format!("{:.12e}\n", e.lambda_min));
        }
        out
    }
}

// ─── HUM control synthesis ──────────────────────────────────────────────────

/// Modal samples of a control trajectory on a uniform time grid.
///
/// Frames hold the adjoint state v(s_i); the physical control is 𝟙_{B_{R_s}} v,
/// and the Duhamel map applies the ball restriction itself.
#[derive(Debug, Clone)]
pub struct ControlTrajectory {
    pub theta: Quasimomentum,
    pub cutoff: usize,
    pub ball_radius: f64,
    pub times: Vec<f64>,
    pub frames: Vec<Vec<Complex64>>,
}

impl ControlTrajectory {
    /// All-zero trajectory (no forcing).
    pub fn zero(
        theta: Quasimomentum,
        cutoff: usize,
        ball_radius: f64,
        t: f64,
        steps: usize,
    ) -> Self {
        let d = theta.dim();
        let n = (2 * cutoff + 1).pow(d as u32);
        let times = (0..=steps).map(|i| t * i as f64 / steps as f64).collect();
        let frames = vec![vec![Complex64::new(0.0, 0.0); n]; steps + 1];
        Self {
            theta,
            cutoff,
            ball_radius,
            times,
            frames,
        }
    }
}

/// Result of a HUM null-control run.
#[derive(Debug, Clone)]
pub struct ControlSolution {
    pub trajectory: ControlTrajectory,
    /// ‖𝟙_B v‖²_{L²(S×(0,T))} of the synthesized control.
    pub cost: f64,
    /// ‖u(T)‖_{L²} / ‖u₀‖_{L²} after applying the control.
    pub residual: f64,
    pub lambda_min: f64,
    pub observability_constant: f64,
    /// ‖u₀‖²_{L²} / observability_constant: the duality bound on the cost.
    pub cost_bound: f64,
    pub final_state: ModalState,
}

/// Serializable summary of a control run.
#[derive(Debug, Clone, Serialize)]
pub struct ControlSummary {
    pub theta: Vec<f64>,
    pub cutoff: usize,
    pub t_horizon: f64,
    pub ball_radius: f64,
    pub time_steps: usize,
    pub cost: f64,
    pub residual: f64,
    pub lambda_min: f64,
    pub observability_constant: f64,
    pub cost_bound: f64,
}

impl ControlSolution {
    pub fn summary(&self, t_horizon: f64) -> ControlSummary {
        ControlSummary {
            theta: self.trajectory.theta.components().to_vec(),
            cutoff: self.trajectory.cutoff,
            t_horizon,
            ball_radius: self.trajectory.ball_radius,
            time_steps: self.trajectory.times.len().saturating_sub(1),
            cost: self.cost,
            residual: self.residual,
            lambda_min: self.lambda_min,
            observability_constant: self.observability_constant,
            cost_bound: self.cost_bound,
        }
    }
}

/// Mode-basis matrix of multiplication by 𝟙_{B_R}: B[j][k] = S(γ_k − γ_j)/(2π)^d.
fn ball_multiplier(gammas: &[Vec<f64>], d: usize, r_s: f64) -> Result<DMatrix<f64>, ControlError> {
    let n = gammas.len();
    let mut b = DMatrix::<f64>::zeros(n, n);
    let scale = TWO_PI.powi(-(d as i32));
    let mut diff = vec![0.0; d];
    for j in 0..n {
        for k in j..n {
            for a in 0..d {
                diff[a] = gammas[k][a] - gammas[j][a];
            }
            let s = ball_exp_integral(&diff, r_s)? * scale;
            b[(j, k)] = s;
            b[(k, j)] = s;
        }
    }
    Ok(b)
}

/// Synthesize the minimal-L² null control for `u0` over [0, T] observed on
/// B_{R_s}, and verify the end state through the closed-form Duhamel
/// integrals of the adjoint trajectory.
///
/// Steps: assemble M, solve the controllability system
/// (conj(M)/(2π)^d) w = −e^{iTΔ}u₀, take v(s) = e^{i(T−s)Δ} w as the control
/// trajectory (the physical control is 𝟙_B v), and report
/// cost = w* conj(M) w together with the relative end-state residual.
pub fn hum_control(
    u0: &ModalState,
    t: f64,
    r_s: f64,
    time_steps: usize,
) -> Result<ControlSolution, ControlError> {
    validated(t, r_s)?;
    if time_steps == 0 {
        return Err(ControlError::EmptyTimeGrid);
    }
    let theta = u0.theta.clone();
    let cutoff = u0.cutoff;
    let d = u0.dim();
    let n = u0.n_modes();
    let vol_factor = TWO_PI.powi(d as i32);

    let gramian = obs_gramian(&theta, t, r_s, cutoff)?;
    let lambda_min = gramian.lambda_min()?;
    let norm = matrix_spectral_bound(&gramian.matrix);
    if lambda_min <= 1e-10 * norm {
        return Err(ControlError::SingularGramian { lambda_min, norm });
    }
    let observability_constant = lambda_min / vol_factor;

    let u0_norm_l2 = u0.l2_norm_sq().sqrt();
    if u0_norm_l2 == 0.0 {
        let trajectory = ControlTrajectory::zero(theta, cutoff, r_s, t, time_steps);
        return Ok(ControlSolution {
            trajectory,
            cost: 0.0,
            residual: 0.0,
            lambda_min,
            observability_constant,
            cost_bound: 0.0,
            final_state: ModalState::zero(u0.theta.clone(), cutoff),
        });
    }

    // controllability Gramian in coefficient space: conj(M)/(2π)^d
    let g_coeff = gramian.matrix.map(|z| z.conj()) / Complex64::new(vol_factor, 0.0);
    let propagated = propagate(u0, t);
    let a = DVector::<Complex64>::from_iterator(n, propagated.coefficients.iter().map(|c| -c));
    let lu = g_coeff.clone().lu();
    let w = lu
        .solve(&a)
        .ok_or(ControlError::SingularGramian { lambda_min, norm })?;

    // end state u(T) = e^{iTΔ}u₀ + G w; its distance from zero is the solve residual
    let end = &g_coeff * &w - &a;
    let residual = (end.norm() * vol_factor.sqrt()) / u0_norm_l2;
    let mut final_state = ModalState::zero(theta.clone(), cutoff);
    for (c, e) in final_state.coefficients.iter_mut().zip(end.iter()) {
        *c = *e;
    }

    // cost = w* conj(M) w = (2π)^d w* G w
    let cost = {
        let gw = &g_coeff * &w;
        let mut acc = Complex64::new(0.0, 0.0);
        for (wi, gi) in w.iter().zip(gw.iter()) {
            acc += wi.conj() * gi;
        }
        vol_factor * acc.re
    };

    // adjoint trajectory samples v_j(s) = e^{i(T−s)λ_j} w_j
    let lambdas: Vec<f64> = (0..n)
        .map(|f| u0.gamma_of_flat(f).iter().map(|g| g * g).sum())
        .collect();
    let times: Vec<f64> = (0..=time_steps)
        .map(|i| t * i as f64 / time_steps as f64)
        .collect();
    let frames: Vec<Vec<Complex64>> = times
        .iter()
        .map(|&s| {
            (0..n)
                .map(|j| Complex64::new(0.0, (t - s) * lambdas[j]).exp() * w[j])
                .collect()
        })
        .collect();

    Ok(ControlSolution {
        trajectory: ControlTrajectory {
            theta,
            cutoff,
            ball_radius: r_s,
            times,
            frames,
        },
        cost,
        residual,
        lambda_min,
        observability_constant,
        cost_bound: u0.l2_norm_sq() / observability_constant,
        final_state,
    })
}

fn matrix_spectral_bound(m: &DMatrix<Complex64>) -> f64 {
    // row-sum bound is enough for the singularity guard
    let n = m.nrows();
    let mut best = 0.0f64;
    for i in 0..n {
        let row: f64 = (0..n).map(|j| m[(i, j)].norm()).sum();
        best = best.max(row);
    }
    best
}

/// Integrate the Duhamel formula
/// u(T) = e^{iTΔ_θ}u₀ + ∫₀ᵀ e^{i(T−s)Δ_θ} 𝟙_{B_{R_s}} f(s) ds
/// with composite trapezoid weights on the trajectory's time grid.
/// With f = 0 this reduces exactly to `propagate(u0, T)`.
pub fn simulate_duhamel(
    u0: &ModalState,
    trajectory: &ControlTrajectory,
) -> Result<ModalState, ControlError> {
    if trajectory.theta != u0.theta || trajectory.cutoff != u0.cutoff {
        return Err(ControlError::GridMismatch(
            "trajectory quasimomentum/cutoff differ from the state".into(),
        ));
    }
    let steps = trajectory.times.len().saturating_sub(1);
    if steps == 0 {
        return Err(ControlError::EmptyTimeGrid);
    }
    if trajectory.frames.len() != trajectory.times.len() {
        return Err(ControlError::GridMismatch(
            "one frame per time node required".into(),
        ));
    }
    let t = *trajectory.times.last().unwrap();
    let h = t / steps as f64;
    for (i, &s) in trajectory.times.iter().enumerate() {
        if (s - i as f64 * h).abs() > 1e-9 * t.max(1.0) {
            return Err(ControlError::GridMismatch(
                "time nodes must be uniform".into(),
            ));
        }
    }

    let d = u0.dim();
    let n = u0.n_modes();
    let gammas = u0.gammas();
    let lambdas: Vec<f64> = gammas
        .iter()
        .map(|g| g.iter().map(|x| x * x).sum())
        .collect();
    let b = ball_multiplier(&gammas, d, trajectory.ball_radius)?;

    let mut out = propagate(u0, t);
    for (i, frame) in trajectory.frames.iter().enumerate() {
        if frame.len() != n {
            return Err(ControlError::GridMismatch("frame size mismatch".into()));
        }
        let weight = if i == 0 || i == steps { 0.5 * h } else { h };
        let s = trajectory.times[i];
        // restricted forcing g = B f(s), then free flow over T − s
        for j in 0..n {
            let mut g = Complex64::new(0.0, 0.0);
            for k in 0..n {
                g += b[(j, k)] * frame[k];
            }
            let phase = Complex64::new(0.0, -(t - s) * lambdas[j]).exp();
            out.coefficients[j] += weight * phase * g;
        }
    }
    Ok(out)
}

/// Steer `u0` to `u_target` in time T: null-control the shifted initial state
/// ũ₀ = u₀ − e^{−iTΔ}u_target and reuse its control.
pub fn steer_to(
    u0: &ModalState,
    u_target: &ModalState,
    t: f64,
    r_s: f64,
    time_steps: usize,
) -> Result<ControlSolution, ControlError> {
    if u_target.theta != u0.theta || u_target.cutoff != u0.cutoff {
        return Err(ControlError::GridMismatch(
            "target lives on a different truncation".into(),
        ));
    }
    let back = propagate(u_target, -t);
    let mut shifted = u0.clone();
    for (c, b) in shifted.coefficients.iter_mut().zip(&back.coefficients) {
        *c -= b;
    }
    hum_control(&shifted, t, r_s, time_steps)
}
