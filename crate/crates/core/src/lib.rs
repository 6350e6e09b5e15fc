//! obslab-core: a desk-scale numerical laboratory for observability and
//! control of the free Schrödinger equation on ℝ^d with periodic control sets.
//!
//! The pipeline mirrors the constructive chain behind internal controllability
//! from periodic observation regions:
//!
//! 1. [`geometry`] — control-set geometry: indicator functions, thickness and
//!    the geometric control condition, measured numerically.
//! 2. [`floquet`] — the discrete Floquet-Bloch transform, θ-pseudoperiodic
//!    eigenbases on the torus and exact modal propagation.
//! 3. [`lattice`] — the lifted frequency lattice Γ̃_θ = {(γ, |γ|²)} and its
//!    gap-decomposition with certified per-subset gaps and a budget
//!    2Σ c/δ_j ≤ R.
//! 4. [`gramian`] — closed-form Gram matrices of exponential systems over
//!    Euclidean balls (Bessel evaluation included) and smallest-eigenvalue
//!    observability constants.
//! 5. [`control`] — observability Gramians for the torus Schrödinger group,
//!    θ-swept constants, and HUM null-control synthesis verified through the
//!    Duhamel formula.
//! 6. [`counterexample`] — Gaussian states concentrated in clearings of a
//!    non-thick set, driving the observability quotient to zero.
//!
//! [`oracles`] holds independent quadrature reference evaluators used by the
//! test suite and by the `gram-oracle` experiment of the CLI; they never share
//! code with the closed-form paths they validate.

pub mod control;
pub mod counterexample;
pub mod floquet;
pub mod geometry;
pub mod gramian;
pub mod lattice;
pub mod oracles;
pub mod quad;

mod util;

pub use num_complex::Complex64;
