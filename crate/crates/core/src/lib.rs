//! Stable phase retrieval from symmetrized Fourier magnitudes.
//!
//! A complex signal x ∈ ℂⁿ cannot be recovered from the magnitudes of its
//! Fourier transform alone. This crate implements a measurement design that
//! restores recoverability up to a global sign: the signal is conjugate-
//! symmetrized and zero-padded before the transform, and the resulting
//! intensity map becomes injective on the quotient ℂⁿ/{±1} — with a uniform
//! lower stability bound, so nearby intensity patterns come from nearby
//! signals.
//!
//! The pipeline:
//!
//! 1. [`symmetrization`] — embed x into a longer vector with conjugate
//!    symmetry (two paddings: variant A of length 4n−3 for signals with real
//!    leading entry, variant B of length 4n−1 for arbitrary signals).
//! 2. [`measurement`] — take squared moduli of the unitary DFT of the
//!    symmetrized vector, optionally perturbed by seeded noise.
//! 3. [`recovery`] — invert the map: the inverse DFT of the intensities is a
//!    cyclic autocorrelation whose unrolled form is a perfect polynomial
//!    square; a spectral square root ([`factor`]) yields the signal directly,
//!    with an alternating-projection solver as iterative alternative and
//!    refinement stage.
//! 4. [`stability`] — a small numerical laboratory measuring the constants
//!    that govern the stability inequality, including the restricted
//!    norm-multiplicativity constant of the convolution map.
//!
//! Everything is deterministic given explicit seeds; artifacts serialize via
//! [`io`] with a fixed 17-significant-digit float rendering.
//!
//! ```
//! use num_complex::Complex64;
//! use symphase::{measure, recover_direct, dist_up_to_sign, Variant};
//!
//! let x = vec![Complex64::new(1.0, 0.0), Complex64::new(0.5, -0.25)];
//! let m = measure(&x, Variant::B).unwrap();
//! let r = recover_direct(&m).unwrap();
//! assert!(dist_up_to_sign(&x, &r.estimate).unwrap() < 1e-10);
//! ```

pub mod algebra;
pub mod error;
pub mod factor;
pub mod io;
pub mod measurement;
pub mod recovery;
pub mod stability;
pub mod symmetrization;

pub use algebra::{
    circ_conv, circ_corr, conj, cyclic_shift, dft, idft, is_k_sparse, l2_dist, l2_norm,
    linear_conv, linf_norm, support, time_reverse,
};
pub use error::{Error, Result};
pub use factor::{poly_sqrt, DEFAULT_SQUARE_TOL};
pub use measurement::{add_noise, measure, MeasurementVector, NoiseKind, NoiseModel};
pub use recovery::{
    dist_up_to_sign, recover_alternating, recover_direct, recover_direct_with, AltInit,
    AlternatingOptions, DirectOptions, Method, RecoveryResult,
};
pub use stability::{
    estimate_alpha, linear_conv_matrix, noise_robustness_sweep, verify_rnmp_bounds,
    verify_stability_inequality, NoiseSweepReport, NoiseSweepRow, RnmpBoundsReport, RnmpEstimate,
    StabilityReport,
};
pub use symmetrization::{
    is_conjugate_symmetric, symmetrize, symmetrize_padded, symmetrize_padded_a,
    symmetrize_padded_b, SymmetrizedVector, SymmetryKind, Variant,
};

/// Version string embedded in every serialized artifact.
pub fn version() -> &'static str {
    concat!("v", env!("CARGO_PKG_VERSION"))
}

#[cfg(test)]
mod tests {
    #[test]
    fn version_has_expected_shape() {
        let v = super::version();
        assert!(v.starts_with('v'));
        assert_eq!(v.trim_start_matches('v').split('.').count(), 3);
    }
}
