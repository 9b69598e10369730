//! Numerical kernels: Gamma-type functions, ₂F₁, Jacobi polynomials,
//! semi-infinite quadrature and finite-difference monotonicity probes.

mod gamma;
mod hyp2f1;
mod jacobi;
mod probe;
mod quad;

pub use gamma::{digamma, gamma_ratio, ln_gamma_ratio, ln_gamma_signed, log_gamma, EULER_MASCHERONI};
pub use hyp2f1::{hyp2f1, hyp2f1_dz, hyp2f1_dz_log, hyp2f1_log, hyp2f1_with, SeriesPolicy, SignedLog};
pub use jacobi::jacobi_poly;
pub use probe::{alternating_fd_probe, default_probe_step, Sign};
pub use quad::{integrate_semiinf, integrate_semiinf_estimate, QuadEstimate, QuadratureConfig};
