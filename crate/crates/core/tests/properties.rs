//! Property-based checks of the algebraic identities the recovery pipeline
//! rests on. Each property states an exact identity; assertions allow a small
//! relative tolerance for floating-point noise.

use num_complex::Complex64;
use proptest::prelude::*;

use symphase::algebra::{direct_circ_conv, direct_dft};
use symphase::{
    circ_conv, circ_corr, cyclic_shift, dft, dist_up_to_sign, idft, l2_dist, l2_norm, measure,
    poly_sqrt, symmetrize_padded, time_reverse, Variant,
};

const RTOL: f64 = 1e-10;

fn cx() -> impl Strategy<Value = Complex64> {
    (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn cvec(max_len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(cx(), 1..=max_len)
}

/// Vectors admissible for variant A: real leading entry.
fn cvec_real_head(max_len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    cvec(max_len).prop_map(|mut v| {
        v[0].im = 0.0;
        v
    })
}

fn scale(v: &[Complex64]) -> f64 {
    1.0 + l2_norm(v)
}

fn close(a: &[Complex64], b: &[Complex64], s: f64) -> bool {
    l2_dist(a, b).unwrap() <= RTOL * s
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn dft_is_unitary(x in cvec(64)) {
        let fx = dft(&x).unwrap();
        prop_assert!((l2_norm(&fx) - l2_norm(&x)).abs() <= RTOL * scale(&x));
        prop_assert!(close(&idft(&fx).unwrap(), &x, scale(&x)));
    }

    #[test]
    fn dft_squared_is_time_reversal(x in cvec(64)) {
        let ffx = dft(&dft(&x).unwrap()).unwrap();
        prop_assert!(close(&ffx, &time_reverse(&x), scale(&x)));
        let f4 = dft(&dft(&ffx).unwrap()).unwrap();
        prop_assert!(close(&f4, &x, scale(&x)));
    }

    #[test]
    fn dft_matches_quadratic_oracle(x in cvec(48)) {
        prop_assert!(close(&dft(&x).unwrap(), &direct_dft(&x).unwrap(), scale(&x)));
    }

    #[test]
    fn convolution_is_commutative_and_matches_oracle(
        (x, y) in cvec(48).prop_flat_map(|x| {
            let n = x.len();
            (Just(x), prop::collection::vec(cx(), n..=n))
        })
    ) {
        let xy = circ_conv(&x, &y).unwrap();
        let s = scale(&x) * scale(&y);
        prop_assert!(close(&xy, &circ_conv(&y, &x).unwrap(), s));
        prop_assert!(close(&xy, &direct_circ_conv(&x, &y).unwrap(), s));
    }

    #[test]
    fn convolution_commutes_with_simultaneous_shifts(
        (x, y, i) in cvec(32).prop_flat_map(|x| {
            let n = x.len();
            (Just(x), prop::collection::vec(cx(), n..=n), 0..64i64)
        })
    ) {
        // x ⊛ y is shift-covariant: shifting one factor shifts the output.
        let shifted = circ_conv(&cyclic_shift(&x, i), &y).unwrap();
        let expected = cyclic_shift(&circ_conv(&x, &y).unwrap(), i);
        prop_assert!(close(&shifted, &expected, scale(&x) * scale(&y)));
    }

    #[test]
    fn autocorrelation_spectrum_is_scaled_intensity(x in cvec(48)) {
        // F(x ⋆ x) = √n |Fx|², the identity that turns intensity
        // measurements into autocorrelation data.
        let n = x.len() as f64;
        let lhs = dft(&circ_corr(&x, &x).unwrap()).unwrap();
        let fx = dft(&x).unwrap();
        let rhs: Vec<Complex64> = fx
            .iter()
            .map(|z| Complex64::new(n.sqrt() * z.norm_sqr(), 0.0))
            .collect();
        prop_assert!(close(&lhs, &rhs, scale(&x) * scale(&x)));
    }

    #[test]
    fn binomial_identity_for_autoconvolutions(
        (x1, x2) in cvec(48).prop_flat_map(|x| {
            let n = x.len();
            (Just(x), prop::collection::vec(cx(), n..=n))
        })
    ) {
        // A(x1) − A(x2) = B(x1−x2, x1+x2) for the symmetric bilinear map
        // B = ⊛: differences of measurements are controlled by convolutions.
        let a1 = circ_conv(&x1, &x1).unwrap();
        let a2 = circ_conv(&x2, &x2).unwrap();
        let lhs: Vec<Complex64> = a1.iter().zip(&a2).map(|(a, b)| a - b).collect();
        let diff: Vec<Complex64> = x1.iter().zip(&x2).map(|(a, b)| a - b).collect();
        let sum: Vec<Complex64> = x1.iter().zip(&x2).map(|(a, b)| a + b).collect();
        let rhs = circ_conv(&diff, &sum).unwrap();
        prop_assert!(close(&lhs, &rhs, scale(&x1) * scale(&x2)));
    }

    #[test]
    fn symmetrized_vectors_have_real_spectrum(x in cvec_real_head(32), pick_b in any::<bool>()) {
        let variant = if pick_b { Variant::B } else { Variant::A };
        let s = symmetrize_padded(&x, variant).unwrap();
        let spectrum = dft(s.entries()).unwrap();
        let max_im = spectrum.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        prop_assert!(max_im <= RTOL * scale(&x));
    }

    #[test]
    fn norm_sandwich_for_symmetrization(x in cvec_real_head(32), pick_b in any::<bool>()) {
        let variant = if pick_b { Variant::B } else { Variant::A };
        let s = symmetrize_padded(&x, variant).unwrap();
        let xn = l2_norm(&x).powi(2);
        let sn = l2_norm(s.entries()).powi(2);
        let tol = RTOL * (1.0 + xn);
        prop_assert!(sn >= xn - tol && sn <= 2.0 * xn + tol);
        if variant == Variant::B {
            // The padded-B embedding stores x and its conjugate verbatim.
            prop_assert!((sn - 2.0 * xn).abs() <= tol);
        }
    }

    #[test]
    fn extraction_inverts_symmetrization(x in cvec_real_head(32), pick_b in any::<bool>()) {
        let variant = if pick_b { Variant::B } else { Variant::A };
        let s = symmetrize_padded(&x, variant).unwrap();
        prop_assert_eq!(s.extract(), x);
    }

    #[test]
    fn measurement_is_sign_blind(x in cvec_real_head(24), pick_b in any::<bool>()) {
        let variant = if pick_b { Variant::B } else { Variant::A };
        let neg: Vec<Complex64> = x.iter().map(|z| -z).collect();
        let m_pos = measure(&x, variant).unwrap();
        let m_neg = measure(&neg, variant).unwrap();
        prop_assert_eq!(m_pos.intensities(), m_neg.intensities());
    }

    #[test]
    fn measured_energy_matches_symmetrized_norm(x in cvec_real_head(24), pick_b in any::<bool>()) {
        // Parseval: intensities sum to the squared norm of the symmetrized
        // vector.
        let variant = if pick_b { Variant::B } else { Variant::A };
        let s = symmetrize_padded(&x, variant).unwrap();
        let m = measure(&x, variant).unwrap();
        let energy: f64 = m.intensities().iter().sum();
        prop_assert!((energy - l2_norm(s.entries()).powi(2)).abs() <= RTOL * scale(&x).powi(2));
    }

    #[test]
    fn poly_sqrt_recovers_random_squares(
        p in prop::collection::vec(
            (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(re, im)| Complex64::new(re, im)),
            1..=12,
        )
    ) {
        let sq = symphase::linear_conv(&p, &p);
        let q = poly_sqrt(&sq, 1e-8).unwrap();
        let d = dist_up_to_sign(&q, &p).unwrap();
        prop_assert!(d <= 1e-7 * (1.0 + l2_norm(&p)), "dist {d:e}");
    }
}
