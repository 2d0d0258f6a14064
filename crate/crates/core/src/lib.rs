//! Worst-case analysis of gradient descent with relatively inexact gradients
//! on `L`-smooth convex functions.
//!
//! The method iterates `x_{k+1} = x_k − (h/L) d_k` where the oracle output
//! satisfies `‖d_k − ∇f(x_k)‖ ≤ δ‖∇f(x_k)‖`. The crate provides
//!
//! * closed-form worst-case rates and stepsize regimes ([`rates`], [`stepsize`]);
//! * machine-checkable dual certificates for the one-step rates ([`certificate`]);
//! * explicit worst-case functions and adversarial oracles ([`instances`]);
//! * a simulator for the method ([`simulator`]);
//! * a brute-force one-step worst-case search giving numerical lower bounds ([`pep`]).

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certificate;
pub mod cubic;
pub mod error;
pub mod instances;
pub mod interpolation;
pub mod linalg;
pub mod pep;
pub mod rates;
pub mod simulator;
pub mod stepsize;

pub use certificate::{
    build_proof_matrices, certificate_params, verify_certificate, verify_certificate_exact, CertReport,
    Certificate, ProofMatrices,
};
pub use cubic::{CubicCoeffs, RealRoot};
pub use error::{Error, Result};
pub use instances::{make_huber, make_quadratic, Instance, InstanceKind, Oracle, Orientation};
pub use interpolation::{interpolation_check, InterpolationReport, PepPoint};
pub use pep::{compare_1d_2d, orthogonality_diagnostic, search_one_step, Criterion, PepCandidate, SearchConfig};
pub use rates::{
    classify_regime, compare_h_max, cubic_coeffs, h_max, h_max_prior, lambda_tilde, lower_bound_n,
    rate_exact_n, rate_exact_one_step, rate_n_steps, rate_one_step_to_f1, rate_one_step_to_fstar,
    regime_boundaries, Bound, RateQuery, Regime, RegimeBoundaries,
};
pub use simulator::{divergence_probe, metrics, run, Metrics, Trace};
pub use stepsize::{approx_optimal_stepsize, optimal_stepsize, OptimalStepsize};
