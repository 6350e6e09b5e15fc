//! Gram matrices of exponential systems over Euclidean balls.
//!
//! For points x_1, …, x_n ∈ ℝ^m the matrix
//!
//! ```text
//! G[j][k] = ∫_{B_R} e^{i z·(x_j − x_k)} dz
//! ```
//!
//! is real symmetric positive semidefinite, and its smallest eigenvalue is the
//! best constant C in the truncated lower bound
//! ∫_{B_R} |Σ_j α_j e^{i x_j·z}|² dz ≥ C Σ_j |α_j|².
//!
//! Entries are evaluated in closed form through the radial Fourier transform
//! of the ball indicator,
//!
//! ```text
//! ∫_{B_R} e^{i z·k} dz = (2π)^{m/2} R^m (R|k|)^{−m/2} J_{m/2}(R|k|),
//! ```
//!
//! so the module carries its own Bessel-function evaluator for integer and
//! half-integer orders, plus root bracketing for the separation constants of
//! Ingham-type inequalities.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::util::pairwise_min_distance;

#[derive(Debug, Error)]
pub enum GramianError {
    #[error("Bessel order must be a nonnegative integer or half-integer, got {0}")]
    InvalidOrder(f64),
    #[error("Bessel argument must be nonnegative, got {0}")]
    NegativeArgument(f64),
    #[error("ball radius must be positive, got {0}")]
    InvalidRadius(f64),
    #[error("ambient dimension must be at least 1")]
    InvalidDimension,
    #[error("points {0} and {1} coincide; the exponential system is degenerate")]
    DuplicatePoints(usize, usize),
    #[error("matrix is not Hermitian within tolerance")]
    NonHermitian,
    #[error("eigensolver residual {residual:.3e} exceeds {bound:.3e}")]
    SolverResidual { residual: f64, bound: f64 },
    #[error("declared gap {delta} exceeds the measured gap {gap}")]
    DeltaExceedsGap { delta: f64, gap: f64 },
    #[error("point dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

// ─── Gamma and Bessel evaluation ────────────────────────────────────────────

/// Γ(h/2) for positive integer h, exact via the half-integer recurrence.
pub fn gamma_half(h: u32) -> f64 {
    assert!(h >= 1);
    // Γ(1/2) = √π, Γ(1) = 1, Γ(z+1) = z Γ(z).
    let mut z = if h % 2 == 1 { 0.5 } else { 1.0 };
    let mut g = if h % 2 == 1 {
        std::f64::consts::PI.sqrt()
    } else {
        1.0
    };
    while 2.0 * z < h as f64 {
        g *= z;
        z += 1.0;
    }
    g
}

const SERIES_CUTOFF: f64 = 16.0;

/// Bessel function of the first kind J_ν(x) for ν ∈ {0, 1/2, 1, 3/2, …}.
///
/// Power series below x = 16 (cancellation stays mild there), closed-form
/// spherical recurrences for half-integer orders above, and the Hankel
/// asymptotic expansion for integer orders above. Absolute error is below
/// 10⁻¹⁰ on x ∈ [0, 100] for the orders used in this crate (ν ≤ 6); the test
/// suite checks this against an independent integral representation.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64, GramianError> {
    if x < 0.0 {
        return Err(GramianError::NegativeArgument(x));
    }
    let two_nu = 2.0 * nu;
    if nu < 0.0 || (two_nu - two_nu.round()).abs() > 1e-12 {
        return Err(GramianError::InvalidOrder(nu));
    }
    let two_nu = two_nu.round() as u32;
    if x < SERIES_CUTOFF {
        return Ok(bessel_series(two_nu, x));
    }
    if two_nu % 2 == 1 {
        Ok(bessel_spherical((two_nu - 1) / 2, x))
    } else {
        Ok(bessel_hankel(two_nu / 2, x))
    }
}

/// Power series Σ_j (−1)^j (x/2)^{2j+ν} / (j! Γ(j+ν+1)); `two_nu` = 2ν.
fn bessel_series(two_nu: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let nu = two_nu as f64 / 2.0;
    let mut term = half.powf(nu) / gamma_half(two_nu + 2);
    let mut sum = term;
    let q = half * half;
    for j in 0..200u32 {
        let jf = j as f64;
        term *= -q / ((jf + 1.0) * (jf + 1.0 + nu));
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-30) {
            break;
        }
    }
    sum
}

/// J_{n+1/2}(x) by the upward spherical recurrence; stable for x > n.
fn bessel_spherical(n: u32, x: f64) -> f64 {
    let mut s_prev = x.sin(); // S_0
    if n == 0 {
        return (2.0 / (std::f64::consts::PI * x)).sqrt() * s_prev;
    }
    let mut s = x.sin() / x - x.cos(); // S_1
    for k in 1..n {
        let next = (2.0 * k as f64 + 1.0) / x * s - s_prev;
        s_prev = s;
        s = next;
    }
    (2.0 / (std::f64::consts::PI * x)).sqrt() * s
}

/// Hankel asymptotic expansion for integer order, x ≥ 14.
fn bessel_hankel(nu: u32, x: f64) -> f64 {
    let mu = 4.0 * (nu as f64) * (nu as f64);
    let omega = x - nu as f64 * std::f64::consts::FRAC_PI_2 - std::f64::consts::FRAC_PI_4;
    let mut p = 0.0;
    let mut q = 0.0;
    // t_k = a_k(ν) / x^k with the sign pattern of the P/Q series.
    let mut t = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..60u32 {
        if k > 0 {
            let kf = k as f64;
            t *= (mu - (2.0 * kf - 1.0) * (2.0 * kf - 1.0)) / (8.0 * kf * x);
        }
        if t.abs() > last {
            break; // divergent tail of the asymptotic series
        }
        last = t.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * t;
        } else {
            q += sign * t;
        }
        if t.abs() < 1e-18 {
            break;
        }
    }
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * omega.cos() - q * omega.sin())
}

/// First positive root of J_ν, by sign-change bracketing and bisection.
pub fn first_bessel_root(nu: f64) -> Result<f64, GramianError> {
    let f = |x: f64| bessel_j(nu, x).expect("order validated");
    // J_ν > 0 just right of the origin; scan for the first sign change.
    let step = 0.05;
    let mut lo = 1e-6 + nu * 0.5;
    let mut hi = lo;
    let limit = nu + 12.0;
    let mut bracketed = false;
    while hi < limit {
        hi = lo + step;
        if f(lo) > 0.0 && f(hi) <= 0.0 {
            bracketed = true;
            break;
        }
        lo = hi;
    }
    if !bracketed {
        return Err(GramianError::InvalidOrder(nu));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

// ─── Ball integrals ─────────────────────────────────────────────────────────

/// Volume of the m-dimensional ball of radius r: π^{m/2} r^m / Γ(m/2 + 1).
pub fn vol_ball(m: usize, r: f64) -> f64 {
    std::f64::consts::PI.powf(m as f64 / 2.0) * r.powi(m as i32) / gamma_half(m as u32 + 2)
}

/// J_{m/2}(x) / x^{m/2}, continuous at x = 0, via the ratio power series for
/// small arguments and the direct quotient elsewhere.
fn bessel_ratio(m: usize, x: f64) -> f64 {
    if x < SERIES_CUTOFF {
        let mf = m as f64;
        let mut term = 1.0 / (2f64.powf(mf / 2.0) * gamma_half(m as u32 + 2));
        let mut sum = term;
        let q = x * x;
        for j in 0..200u32 {
            let jf = j as f64;
            term *= -q / (4.0 * (jf + 1.0) * (jf + 1.0 + mf / 2.0));
            sum += term;
            if term.abs() < 1e-18 * sum.abs().max(1e-30) {
                break;
            }
        }
        sum
    } else {
        bessel_j(m as f64 / 2.0, x).expect("valid order") / x.powf(m as f64 / 2.0)
    }
}

/// ∫_{B_R} e^{i z·k} dz over the m-ball, m = k.len().
///
/// Real (the phase integrates to a radial function), equals Vol(B_R^m) at
/// k = 0 and is continuous there.
pub fn ball_exp_integral(k: &[f64], r: f64) -> Result<f64, GramianError> {
    if r <= 0.0 {
        return Err(GramianError::InvalidRadius(r));
    }
    let m = k.len();
    if m == 0 {
        return Err(GramianError::InvalidDimension);
    }
    let norm_k = k.iter().map(|v| v * v).sum::<f64>().sqrt();
    let x = r * norm_k;
    let mf = m as f64;
    Ok((2.0 * std::f64::consts::PI).powf(mf / 2.0) * r.powi(m as i32) * bessel_ratio(m, x))
}

// ─── Gram matrices ──────────────────────────────────────────────────────────

/// Gram matrix of the exponential system (e^{i x_j·z})_j over the ball B_R.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    pub points: Vec<Vec<f64>>,
    pub radius: f64,
    pub matrix: DMatrix<f64>,
}

/// Assemble the Gram matrix; entries depend only on pairwise differences.
pub fn gram_matrix(points: &[Vec<f64>], r: f64) -> Result<GramMatrix, GramianError> {
    if r <= 0.0 {
        return Err(GramianError::InvalidRadius(r));
    }
    let n = points.len();
    if n == 0 {
        return Err(GramianError::InvalidDimension);
    }
    let m = points[0].len();
    for (i, p) in points.iter().enumerate() {
        if p.len() != m {
            return Err(GramianError::DimensionMismatch {
                expected: m,
                got: p.len(),
            });
        }
        for (j, q) in points.iter().enumerate().skip(i + 1) {
            if crate::util::dist_sq(p, q) == 0.0 {
                return Err(GramianError::DuplicatePoints(i, j));
            }
        }
    }
    let mut matrix = DMatrix::<f64>::zeros(n, n);
    let diag = vol_ball(m, r);
    let mut diff = vec![0.0; m];
    for i in 0..n {
        matrix[(i, i)] = diag;
        for j in (i + 1)..n {
            for a in 0..m {
                diff[a] = points[i][a] - points[j][a];
            }
            let v = ball_exp_integral(&diff, r)?;
            matrix[(i, j)] = v;
            matrix[(j, i)] = v;
        }
    }
    Ok(GramMatrix {
        points: points.to_vec(),
        radius: r,
        matrix,
    })
}

impl GramMatrix {
    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    /// Smallest eigenvalue; the optimal constant of the truncated inequality.
    pub fn lambda_min(&self) -> Result<f64, GramianError> {
        smallest_eigenvalue(&self.matrix)
    }

    /// Plain CSV dump of the entries, one row per line.
    pub fn to_csv(&self) -> String {
        let n = self.size();
        let mut out = String::new();
        for i in 0..n {
            let row: Vec<String> = (0..n)
                .map(|j| format!("{:.17e}", self.matrix[(i, j)]))
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

const RESIDUAL_TOL: f64 = 1e-8;

/// Smallest eigenvalue of a real symmetric matrix, with a residual check
/// ‖Gv − λv‖ ≤ 10⁻⁸ ‖G‖ on the returned pair.
pub fn smallest_eigenvalue(m: &DMatrix<f64>) -> Result<f64, GramianError> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(GramianError::NonHermitian);
    }
    let scale = m.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    for i in 0..n {
        for j in (i + 1)..n {
            if (m[(i, j)] - m[(j, i)]).abs() > 1e-10 * scale.max(1.0) {
                return Err(GramianError::NonHermitian);
            }
        }
    }
    let eig = m.clone().symmetric_eigen();
    let (mut idx, mut lambda) = (0, f64::INFINITY);
    for (i, &v) in eig.eigenvalues.iter().enumerate() {
        if v < lambda {
            lambda = v;
            idx = i;
        }
    }
    let norm = eig.eigenvalues.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let v = eig.eigenvectors.column(idx);
    let residual = (m * v - v * lambda).norm();
    let bound = RESIDUAL_TOL * norm.max(1e-300);
    if residual > bound {
        return Err(GramianError::SolverResidual { residual, bound });
    }
    Ok(lambda)
}

/// Smallest eigenvalue of a complex Hermitian matrix, residual-checked.
pub fn smallest_eigenvalue_hermitian(m: &DMatrix<Complex64>) -> Result<f64, GramianError> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(GramianError::NonHermitian);
    }
    let scale = m.iter().fold(0.0f64, |a, v| a.max(v.norm()));
    for i in 0..n {
        for j in i..n {
            if (m[(i, j)] - m[(j, i)].conj()).norm() > 1e-10 * scale.max(1.0) {
                return Err(GramianError::NonHermitian);
            }
        }
    }
    let eig = m.clone().symmetric_eigen();
    let (mut idx, mut lambda) = (0, f64::INFINITY);
    for (i, &v) in eig.eigenvalues.iter().enumerate() {
        if v < lambda {
            lambda = v;
            idx = i;
        }
    }
    let norm = eig.eigenvalues.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let v = eig.eigenvectors.column(idx);
    let residual = (m * v - v * Complex64::new(lambda, 0.0)).norm();
    let bound = RESIDUAL_TOL * norm.max(1e-300);
    if residual > bound {
        return Err(GramianError::SolverResidual { residual, bound });
    }
    Ok(lambda)
}

// ─── Ingham certificates ────────────────────────────────────────────────────

/// Outcome of a finite-section Ingham check: the smallest Gram eigenvalue of
/// a separated point set over B_R, together with the regime flag R ≥ c/δ.
#[derive(Debug, Clone, Serialize)]
pub struct InghamCertificate {
    pub points: Vec<Vec<f64>>,
    pub radius: f64,
    pub lambda_min: f64,
    pub satisfied: bool,
    pub gap_delta: f64,
    pub ingham_constant: f64,
    pub in_regime: bool,
}

/// Certify λ_min > 0 for a point set with declared gap δ over B_R.
///
/// `delta` must not exceed the measured pairwise minimum distance; the regime
/// flag records whether R ≥ c/δ, where c is the caller's Ingham constant.
pub fn ingham_certify(
    points: &[Vec<f64>],
    r: f64,
    c: f64,
    delta: f64,
) -> Result<InghamCertificate, GramianError> {
    let measured = pairwise_min_distance(points);
    if delta > measured * (1.0 + 1e-12) {
        return Err(GramianError::DeltaExceedsGap {
            delta,
            gap: measured,
        });
    }
    let gram = gram_matrix(points, r)?;
    let lambda_min = gram.lambda_min()?;
    let in_regime = r >= c / delta;
    Ok(InghamCertificate {
        points: points.to_vec(),
        radius: r,
        lambda_min,
        satisfied: lambda_min > 0.0,
        gap_delta: delta,
        ingham_constant: c,
        in_regime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_half_values() {
        assert_relative_eq!(gamma_half(1), std::f64::consts::PI.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(gamma_half(2), 1.0, epsilon = 1e-15);
        assert_relative_eq!(
            gamma_half(3),
            0.5 * std::f64::consts::PI.sqrt(),
            epsilon = 1e-15
        );
        assert_relative_eq!(gamma_half(8), 6.0, epsilon = 1e-12); // Γ(4) = 3!
    }

    #[test]
    fn bessel_j0_at_zero() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn bessel_half_closed_form() {
        // J_{1/2}(x) = √(2/(πx)) sin x, checked at x = π/2.
        let x = std::f64::consts::FRAC_PI_2;
        let expect = (2.0 / (std::f64::consts::PI * x)).sqrt();
        assert_relative_eq!(bessel_j(0.5, x).unwrap(), expect, epsilon = 1e-14);
    }

    #[test]
    fn bessel_rejects_bad_input() {
        assert!(bessel_j(0.3, 1.0).is_err());
        assert!(bessel_j(1.0, -0.1).is_err());
    }

    #[test]
    fn bessel_first_roots() {
        // Classical values: j_{0,1}, j_{1/2,1} = π, j_{1,1}, j_{3/2,1}.
        assert_relative_eq!(
            first_bessel_root(0.0).unwrap(),
            2.404825557695773,
            epsilon = 1e-10
        );
        assert_relative_eq!(
            first_bessel_root(0.5).unwrap(),
            std::f64::consts::PI,
            epsilon = 1e-10
        );
        let j1 = first_bessel_root(1.0).unwrap();
        assert_relative_eq!(j1, 3.831705970207512, epsilon = 1e-9);
        assert!(bessel_j(1.0, j1).unwrap().abs() < 1e-12);
        // j_{3/2,1} solves tan x = x.
        let j32 = first_bessel_root(1.5).unwrap();
        assert!((j32.tan() - j32).abs() < 1e-6);
        assert_relative_eq!(j32, 4.493409457909064, epsilon = 1e-9);
    }

    #[test]
    fn series_asymptotic_crossover_is_smooth() {
        // Step small enough that the function's own variation (|J'| ≤ 1) is
        // negligible next to the per-branch accuracy target.
        for two_nu in 0..=6u32 {
            let nu = two_nu as f64 / 2.0;
            let below = bessel_j(nu, SERIES_CUTOFF - 1e-12).unwrap();
            let above = bessel_j(nu, SERIES_CUTOFF + 1e-12).unwrap();
            assert!(
                (below - above).abs() < 2e-10,
                "order {nu}: {below} vs {above}"
            );
        }
    }

    #[test]
    fn ball_integral_matches_elementary_1d() {
        // m = 1: ∫_{-R}^{R} e^{iκz} dz = 2 sin(κR)/κ.
        let kappa = 1.7f64;
        let r = 2.3f64;
        let expect = 2.0 * (kappa * r).sin() / kappa;
        assert_relative_eq!(
            ball_exp_integral(&[kappa], r).unwrap(),
            expect,
            epsilon = 1e-12
        );
    }

    #[test]
    fn ball_integral_zero_frequency_is_volume() {
        assert_relative_eq!(
            ball_exp_integral(&[0.0, 0.0], 1.0).unwrap(),
            std::f64::consts::PI,
            epsilon = 1e-14
        );
        assert_relative_eq!(
            ball_exp_integral(&[0.0, 0.0, 0.0], 2.0).unwrap(),
            vol_ball(3, 2.0),
            epsilon = 1e-12
        );
    }

    #[test]
    fn ball_integral_continuous_at_origin() {
        let v0 = ball_exp_integral(&[0.0, 0.0], 1.5).unwrap();
        let v1 = ball_exp_integral(&[1e-9, 0.0], 1.5).unwrap();
        assert!((v0 - v1).abs() < 1e-12);
    }

    #[test]
    fn gram_two_points_closed_form() {
        // m = 1, two points at distance ρ: off-diagonal 2 sin(ρR)/ρ and
        // λ_min = 2R − 2|sin(ρR)|/ρ.
        let rho = 0.9;
        let r = 1.4;
        let g = gram_matrix(&[vec![0.0], vec![rho]], r).unwrap();
        let off = 2.0 * (rho * r).sin() / rho;
        assert_relative_eq!(g.matrix[(0, 1)], off, epsilon = 1e-12);
        assert_relative_eq!(g.matrix[(0, 0)], 2.0 * r, epsilon = 1e-12);
        let expect = 2.0 * r - off.abs();
        assert_relative_eq!(g.lambda_min().unwrap(), expect, epsilon = 1e-10);
    }

    #[test]
    fn gram_rejects_duplicates() {
        let err = gram_matrix(&[vec![1.0, 0.0], vec![1.0, 0.0]], 1.0).unwrap_err();
        assert!(matches!(err, GramianError::DuplicatePoints(0, 1)));
    }

    #[test]
    fn single_point_gram_is_volume() {
        let g = gram_matrix(&[vec![0.3, -0.2]], 1.1).unwrap();
        assert_relative_eq!(g.lambda_min().unwrap(), vol_ball(2, 1.1), epsilon = 1e-12);
    }

    #[test]
    fn csv_export_round_trips() {
        let g = gram_matrix(&[vec![0.0], vec![1.0], vec![2.2]], 0.9).unwrap();
        let csv = g.to_csv();
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows.len(), 3);
        for (i, row) in rows.iter().enumerate() {
            let entries: Vec<f64> = row.split(',').map(|s| s.parse().unwrap()).collect();
            assert_eq!(entries.len(), 3);
            for (j, v) in entries.iter().enumerate() {
                assert_relative_eq!(*v, g.matrix[(i, j)], epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn smallest_eigenvalue_scaled_identity() {
        let m = DMatrix::<f64>::identity(5, 5) * 3.25;
        assert_relative_eq!(smallest_eigenvalue(&m).unwrap(), 3.25, epsilon = 1e-13);
    }

    #[test]
    fn smallest_eigenvalue_rejects_asymmetric() {
        let mut m = DMatrix::<f64>::identity(3, 3);
        m[(0, 1)] = 1.0;
        assert!(matches!(
            smallest_eigenvalue(&m),
            Err(GramianError::NonHermitian)
        ));
    }

    #[test]
    fn eigenvalue_interlacing_under_point_addition() {
        let mut pts = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.5, 0.3]];
        let r = 1.0;
        let mut prev = gram_matrix(&pts, r).unwrap().lambda_min().unwrap();
        for extra in [vec![0.4, -1.2], vec![3.3, 2.0], vec![-1.0, 0.5]] {
            pts.push(extra);
            let next = gram_matrix(&pts, r).unwrap().lambda_min().unwrap();
            assert!(
                next <= prev + 1e-10,
                "λ_min must not increase: {prev} -> {next}"
            );
            prev = next;
        }
    }

    #[test]
    fn lambda_min_nondecreasing_in_radius() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.5]];
        let mut prev = -f64::INFINITY;
        for i in 1..=8 {
            let r = 0.5 * i as f64;
            let lam = gram_matrix(&pts, r).unwrap().lambda_min().unwrap();
            assert!(lam >= prev - 1e-10);
            prev = lam;
        }
    }

    #[test]
    fn psd_floor_on_random_like_sets() {
        // Deterministic pseudo-random cloud; PSD within solver tolerance.
        let mut pts = Vec::new();
        let mut s = 1.0f64;
        for i in 0..12 {
            s = (s * 997.0 + i as f64).sin();
            let a = 3.0 * s;
            s = (s * 811.0).sin();
            let b = 3.0 * s;
            pts.push(vec![a, b]);
        }
        let g = gram_matrix(&pts, 1.2).unwrap();
        let lam = g.lambda_min().unwrap();
        let norm = g.matrix.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        assert!(lam >= -1e-9 * norm, "λ_min = {lam}, norm = {norm}");
    }

    #[test]
    fn certify_single_point() {
        let cert = ingham_certify(&[vec![0.0, 0.0]], 1.0, std::f64::consts::PI, 1.0).unwrap();
        assert!(cert.satisfied);
        assert_relative_eq!(cert.lambda_min, std::f64::consts::PI, epsilon = 1e-12);
    }

    #[test]
    fn certify_integer_lift_in_regime() {
        // lift of {0, ±1, …, ±5} at θ = 0 with declared gap 1 and R = 1.01π:
        // inside the regime R ≥ c/δ, the section stays positive
        let c = std::f64::consts::PI;
        let pts: Vec<Vec<f64>> = (-5i64..=5)
            .map(|n| vec![n as f64, (n * n) as f64])
            .collect();
        let cert = ingham_certify(&pts, 1.01 * c, c, 1.0).unwrap();
        assert!(cert.in_regime);
        assert!(
            cert.satisfied && cert.lambda_min > 0.0,
            "λ_min = {}",
            cert.lambda_min
        );
    }

    #[test]
    fn certify_rejects_overstated_gap() {
        let err = ingham_certify(&[vec![0.0], vec![0.5]], 1.0, 1.0, 0.8).unwrap_err();
        assert!(matches!(err, GramianError::DeltaExceedsGap { .. }));
    }

    #[test]
    fn union_of_two_separated_subsets_stays_positive() {
        // Two progressions of gap 3 whose union still has gap ≥ 1; the
        // combined system over B_R with R = 2(c/δ₁ + c/δ₂) keeps λ_min > 0.
        let c = std::f64::consts::PI;
        let (d1, d2) = (3.0, 3.0);
        let r = 2.0 * (c / d1 + c / d2);
        let mut pts = Vec::new();
        for k in -3i64..=3 {
            pts.push(vec![3.0 * k as f64, 0.0]);
            pts.push(vec![3.0 * k as f64 + 1.5, 5.0]);
        }
        let union_gap = pairwise_min_distance(&pts);
        assert!(union_gap >= 1.0);
        let cert = ingham_certify(&pts, r, c, 1.0).unwrap();
        assert!(cert.lambda_min > 0.0, "λ_min = {}", cert.lambda_min);
    }

    #[test]
    fn hermitian_solver_matches_real_embedding() {
        let mut m = DMatrix::<Complex64>::zeros(3, 3);
        for i in 0..3 {
            m[(i, i)] = Complex64::new(2.0 + i as f64, 0.0);
        }
        m[(0, 1)] = Complex64::new(0.4, 0.9);
        m[(1, 0)] = Complex64::new(0.4, -0.9);
        m[(1, 2)] = Complex64::new(-0.3, 0.2);
        m[(2, 1)] = Complex64::new(-0.3, -0.2);
        let lam = smallest_eigenvalue_hermitian(&m).unwrap();
        // Real 2n×2n embedding [[Re, −Im],[Im, Re]] has the same spectrum.
        let n = 3;
        let mut big = DMatrix::<f64>::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                big[(i, j)] = m[(i, j)].re;
                big[(i + n, j + n)] = m[(i, j)].re;
                big[(i, j + n)] = -m[(i, j)].im;
                big[(i + n, j)] = m[(i, j)].im;
            }
        }
        let lam2 = smallest_eigenvalue(&big).unwrap();
        assert_relative_eq!(lam, lam2, epsilon = 1e-10);
    }
}
