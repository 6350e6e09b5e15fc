//! Gauss-Legendre quadrature nodes and basic composite rules.
//!
//! These are plain quadrature building blocks. The reference evaluators that
//! cross-check closed-form results live in [`crate::oracles`].

use std::f64::consts::PI;

/// Gauss-Legendre nodes and weights on [−1, 1].
///
/// Nodes are computed by Newton iteration on the Legendre polynomial with the
/// usual Chebyshev initial guess; accurate to machine precision for n ≤ 10⁴.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature order must be positive");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// ∫_a^b f(x) dx by an n-point Gauss-Legendre rule.
pub fn gl_integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut sum = 0.0;
    for (x, w) in nodes.iter().zip(&weights) {
        sum += w * f(mid + half * x);
    }
    sum * half
}

/// ∫_a^b f(x) dx with node doubling until two successive levels agree to
/// `tol` (absolute). Starts at `n0` nodes; returns the finer value.
pub fn gl_adaptive(f: impl Fn(f64) -> f64, a: f64, b: f64, n0: usize, tol: f64) -> f64 {
    let mut n = n0.max(4);
    let mut prev = gl_integrate(&f, a, b, n);
    for _ in 0..12 {
        n *= 2;
        let next = gl_integrate(&f, a, b, n);
        if (next - prev).abs() <= tol {
            return next;
        }
        prev = next;
    }
    prev
}

/// Composite Simpson rule over `n` intervals (n even) on [a, b].
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    assert!(
        n >= 2 && n.is_multiple_of(2),
        "Simpson needs an even interval count"
    );
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// Simpson weights on `n + 1` uniform nodes spanning [0, t] (n even).
/// All weights are nonnegative, which keeps integral inequalities between
/// nonnegative integrands valid after discretization.
pub fn simpson_weights(n: usize, t: f64) -> Vec<f64> {
    assert!(n >= 2 && n.is_multiple_of(2));
    let h = t / n as f64;
    let mut w = vec![0.0; n + 1];
    w[0] = h / 3.0;
    w[n] = h / 3.0;
    for (i, wi) in w.iter_mut().enumerate().take(n).skip(1) {
        *wi = if i % 2 == 1 {
            4.0 * h / 3.0
        } else {
            2.0 * h / 3.0
        };
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_exact_for_polynomials() {
        // 5-point rule integrates degree ≤ 9 exactly.
        let val = gl_integrate(|x| x.powi(8), -1.0, 1.0, 5);
        assert!((val - 2.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn gl_oscillatory() {
        let val = gl_integrate(|x| (10.0 * x).cos(), 0.0, 1.0, 40);
        assert!((val - 10.0f64.sin() / 10.0).abs() < 1e-13);
    }

    #[test]
    fn adaptive_converges() {
        let val = gl_adaptive(|x| (-x * x).exp(), 0.0, 3.0, 8, 1e-12);
        // ∫_0^3 e^{-x²} dx = √π/2 · erf(3)
        assert!((val - 0.8862073482595214).abs() < 1e-10);
    }

    #[test]
    fn simpson_second_order_sine() {
        let val = simpson(|x| x.sin(), 0.0, PI, 64);
        assert!((val - 2.0).abs() < 1e-7);
    }

    #[test]
    fn simpson_weights_sum_to_t() {
        let w = simpson_weights(16, 2.5);
        let total: f64 = w.iter().sum();
        assert!((total - 2.5).abs() < 1e-13);
    }
}
