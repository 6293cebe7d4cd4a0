//! Circular algebra on complex vectors.
//!
//! All transforms use the unitary DFT with kernel `exp(+2*pi*i*k*l/n) / sqrt(n)`.
//! With that convention `F^2` is the time-reversal permutation, `F^4 = I`, and
//! circular convolution satisfies `conv(x, y) = sqrt(n) * F^H (F x .* F y)`.
//!
//! Every FFT-backed operation has an `O(n^2)` direct-summation counterpart
//! (`direct_dft`, `direct_circ_conv`) kept as an independent oracle; the two
//! families are cross-checked in the test suite and must never share code.

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftDirection;

use crate::error::{Error, Result};

thread_local! {
    static PLANNER: RefCell<rustfft::FftPlanner<f64>> = RefCell::new(rustfft::FftPlanner::new());
}

/// Unnormalized in-place FFT. `Inverse` is the `+i` kernel, matching our
/// forward transform; `Forward` is the `-i` kernel.
fn fft_in_place(buf: &mut [Complex64], direction: FftDirection) {
    PLANNER.with(|planner| {
        let fft = planner.borrow_mut().plan_fft(buf.len(), direction);
        fft.process(buf);
    });
}

pub(crate) fn ensure_nonempty(v: &[Complex64]) -> Result<()> {
    if v.is_empty() {
        Err(Error::EmptyInput)
    } else {
        Ok(())
    }
}

pub(crate) fn ensure_finite(v: &[Complex64]) -> Result<()> {
    if v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFiniteInput)
    }
}

pub(crate) fn ensure_same_len(x: &[Complex64], y: &[Complex64]) -> Result<()> {
    if x.len() == y.len() {
        Ok(())
    } else {
        Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        })
    }
}

/// Euclidean norm.
pub fn l2_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entry modulus; 0 for the empty vector.
pub fn linf_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Euclidean distance between two equal-length vectors.
pub fn l2_dist(x: &[Complex64], y: &[Complex64]) -> Result<f64> {
    ensure_same_len(x, y)?;
    Ok(x.iter()
        .zip(y)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Unitary DFT with the `+i` kernel: `out[k] = sum_l v[l] exp(+2*pi*i*k*l/n) / sqrt(n)`.
pub fn dft(v: &[Complex64]) -> Result<Vec<Complex64>> {
    ensure_nonempty(v)?;
    ensure_finite(v)?;
    let mut buf = v.to_vec();
    fft_in_place(&mut buf, FftDirection::Inverse);
    let scale = 1.0 / (v.len() as f64).sqrt();
    for z in &mut buf {
        *z *= scale;
    }
    Ok(buf)
}

/// Inverse of [`dft`]: the unitary transform with the `-i` kernel.
pub fn idft(s: &[Complex64]) -> Result<Vec<Complex64>> {
    ensure_nonempty(s)?;
    ensure_finite(s)?;
    let mut buf = s.to_vec();
    fft_in_place(&mut buf, FftDirection::Forward);
    let scale = 1.0 / (s.len() as f64).sqrt();
    for z in &mut buf {
        *z *= scale;
    }
    Ok(buf)
}

/// Time reversal `(v[0], v[n-1], ..., v[1])`, i.e. index negation modulo n.
/// Coincides with applying the DFT twice.
pub fn time_reverse(v: &[Complex64]) -> Vec<Complex64> {
    let n = v.len();
    (0..n).map(|k| v[(n - k) % n]).collect()
}

/// Entrywise complex conjugate.
pub fn conj(v: &[Complex64]) -> Vec<Complex64> {
    v.iter().map(|z| z.conj()).collect()
}

/// Cyclic shift by `i` positions: `out[k] = v[(k - i) mod n]`. Negative `i`
/// shifts towards lower indices; `i` is taken modulo `n`.
pub fn cyclic_shift(v: &[Complex64], i: i64) -> Vec<Complex64> {
    let n = v.len();
    if n == 0 {
        return Vec::new();
    }
    let shift = i.rem_euclid(n as i64) as usize;
    (0..n).map(|k| v[(k + n - shift) % n]).collect()
}

/// Circular convolution `out[k] = sum_l x[l] * y[(k - l) mod n]`, evaluated as
/// `sqrt(n) * idft(dft(x) .* dft(y))`.
pub fn circ_conv(x: &[Complex64], y: &[Complex64]) -> Result<Vec<Complex64>> {
    ensure_same_len(x, y)?;
    let fx = dft(x)?;
    let fy = dft(y)?;
    let prod: Vec<Complex64> = fx.iter().zip(&fy).map(|(a, b)| a * b).collect();
    let mut out = idft(&prod)?;
    let scale = (x.len() as f64).sqrt();
    for z in &mut out {
        *z *= scale;
    }
    Ok(out)
}

/// Circular correlation: convolution against the conjugated time reversal,
/// `corr(x, y) = conv(x, time_reverse(conj(y)))`.
pub fn circ_corr(x: &[Complex64], y: &[Complex64]) -> Result<Vec<Complex64>> {
    ensure_same_len(x, y)?;
    let reversed = time_reverse(&conj(y));
    circ_conv(x, &reversed)
}

/// Linear (acyclic) convolution by direct summation; output length
/// `x.len() + y.len() - 1`.
pub fn linear_conv(x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
    if x.is_empty() || y.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::new(0.0, 0.0); x.len() + y.len() - 1];
    for (i, &a) in x.iter().enumerate() {
        for (j, &b) in y.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// `O(n^2)` direct-summation DFT, used as an oracle for [`dft`].
pub fn direct_dft(v: &[Complex64]) -> Result<Vec<Complex64>> {
    ensure_nonempty(v)?;
    ensure_finite(v)?;
    let n = v.len();
    let scale = 1.0 / (n as f64).sqrt();
    let out = (0..n)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (l, &z) in v.iter().enumerate() {
                let angle = 2.0 * std::f64::consts::PI * ((k * l) % n) as f64 / n as f64;
                acc += z * Complex64::new(angle.cos(), angle.sin());
            }
            acc * scale
        })
        .collect();
    Ok(out)
}

/// `O(n^2)` direct-summation circular convolution, used as an oracle for
/// [`circ_conv`].
pub fn direct_circ_conv(x: &[Complex64], y: &[Complex64]) -> Result<Vec<Complex64>> {
    ensure_same_len(x, y)?;
    ensure_nonempty(x)?;
    ensure_finite(x)?;
    ensure_finite(y)?;
    let n = x.len();
    let out = (0..n)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (l, &a) in x.iter().enumerate() {
                acc += a * y[(k + n - l) % n];
            }
            acc
        })
        .collect();
    Ok(out)
}

/// Significance threshold, relative to the Euclidean norm, below which an
/// entry is ignored when fixing the global sign of a vector.
pub(crate) const SIGN_TOL_FACTOR: f64 = 1e-9;

/// Flips the global sign of `v` so that its first significant entry has a
/// positive real part (ties broken towards positive imaginary part). Returns
/// whether a flip happened. No-op on (numerically) zero vectors.
pub(crate) fn flip_to_canonical_sign(v: &mut [Complex64]) -> bool {
    let nrm = l2_norm(v);
    if nrm == 0.0 {
        return false;
    }
    let thresh = SIGN_TOL_FACTOR * nrm;
    if let Some(e) = v.iter().find(|z| z.norm() > thresh) {
        if e.re < 0.0 || (e.re == 0.0 && e.im < 0.0) {
            for z in v.iter_mut() {
                *z = -*z;
            }
            return true;
        }
    }
    false
}

/// Indices whose entry modulus strictly exceeds `tol`.
pub fn support(v: &[Complex64], tol: f64) -> Vec<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, z)| z.norm() > tol)
        .map(|(i, _)| i)
        .collect()
}

/// True when at most `k` entries exceed `tol` in modulus.
pub fn is_k_sparse(v: &[Complex64], k: usize, tol: f64) -> bool {
    support(v, tol).len() <= k
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn reals(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| c(x, 0.0)).collect()
    }

    fn assert_close(actual: &[Complex64], expected: &[Complex64], tol: f64) {
        assert_eq!(actual.len(), expected.len());
        let scale = 1.0_f64.max(linf_norm(expected));
        for (k, (a, e)) in actual.iter().zip(expected).enumerate() {
            assert!(
                (a - e).norm() <= tol * scale,
                "entry {k}: got {a}, want {e}"
            );
        }
    }

    #[test]
    fn dft_of_symmetric_binary_vector_is_real_cosine_profile() {
        // (1,1,0,0,1) is conjugate-symmetric, so its spectrum must be real:
        // spectrum[k] = (1 + 2 cos(2 pi k / 5)) / sqrt(5).
        let v = reals(&[1.0, 1.0, 0.0, 0.0, 1.0]);
        let s = dft(&v).unwrap();
        for (k, z) in s.iter().enumerate() {
            let want =
                (1.0 + 2.0 * (2.0 * std::f64::consts::PI * k as f64 / 5.0).cos()) / 5.0_f64.sqrt();
            assert!((z.re - want).abs() < 1e-14, "k={k}: {} vs {}", z.re, want);
            assert!(z.im.abs() < 1e-14);
        }
    }

    #[test]
    fn dft_matches_direct_oracle() {
        let v = vec![
            c(0.3, -1.2),
            c(2.0, 0.5),
            c(-0.7, 0.1),
            c(0.0, 3.0),
            c(1.0, 1.0),
            c(-2.0, 0.25),
            c(0.5, -0.5),
        ];
        let fast = dft(&v).unwrap();
        let slow = direct_dft(&v).unwrap();
        assert_close(&fast, &slow, 1e-13);
    }

    #[test]
    fn idft_inverts_dft() {
        let v = vec![c(1.0, 2.0), c(-3.0, 0.5), c(0.0, -1.0), c(4.0, 4.0)];
        let round = idft(&dft(&v).unwrap()).unwrap();
        assert_close(&round, &v, 1e-14);
    }

    #[test]
    fn dft_preserves_norm() {
        let v = vec![c(1.0, -1.0), c(2.5, 0.0), c(0.0, 0.75)];
        let s = dft(&v).unwrap();
        assert!((l2_norm(&s) - l2_norm(&v)).abs() < 1e-13);
    }

    #[test]
    fn double_dft_is_time_reversal() {
        let v = vec![
            c(1.0, 0.5),
            c(2.0, -1.0),
            c(-0.5, 0.25),
            c(3.0, 0.0),
            c(0.0, 1.5),
        ];
        let twice = dft(&dft(&v).unwrap()).unwrap();
        assert_close(&twice, &time_reverse(&v), 1e-13);
    }

    #[test]
    fn time_reverse_fixes_index_zero() {
        let v = reals(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(time_reverse(&v), reals(&[1.0, 4.0, 3.0, 2.0]));
        assert_eq!(time_reverse(&time_reverse(&v)), v);
    }

    #[test]
    fn cyclic_shift_moves_content_forward() {
        let v = reals(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(cyclic_shift(&v, 2), reals(&[4.0, 5.0, 1.0, 2.0, 3.0]));
        assert_eq!(cyclic_shift(&v, -1), cyclic_shift(&v, 4));
        assert_eq!(cyclic_shift(&v, 5), v);
        assert_eq!(cyclic_shift(&v, 0), v);
    }

    #[test]
    fn circ_conv_matches_hand_computed_values() {
        // conv((1,2),(3,4)) on Z_2: (1*3 + 2*4, 1*4 + 2*3) = (11, 10).
        let out = circ_conv(&reals(&[1.0, 2.0]), &reals(&[3.0, 4.0])).unwrap();
        assert_close(&out, &reals(&[11.0, 10.0]), 1e-14);

        // Symmetrized (1,1) convolved with itself.
        let s = reals(&[1.0, 1.0, 0.0, 0.0, 1.0]);
        let out = circ_conv(&s, &s).unwrap();
        assert_close(&out, &reals(&[3.0, 2.0, 1.0, 1.0, 2.0]), 1e-14);
    }

    #[test]
    fn circ_conv_matches_direct_oracle() {
        let x = vec![
            c(1.0, 0.2),
            c(-0.4, 1.1),
            c(0.9, -2.0),
            c(0.0, 0.3),
            c(2.2, 0.0),
            c(-1.0, -1.0),
        ];
        let y = vec![
            c(0.5, -0.5),
            c(1.5, 0.0),
            c(0.0, 2.0),
            c(-0.25, 0.75),
            c(1.0, 1.0),
            c(0.1, -0.9),
        ];
        let fast = circ_conv(&x, &y).unwrap();
        let slow = direct_circ_conv(&x, &y).unwrap();
        assert_close(&fast, &slow, 1e-13);
    }

    #[test]
    fn circ_corr_against_delta_recovers_signal() {
        let x = vec![c(1.0, 1.0), c(2.0, -0.5), c(3.0, 0.25)];
        let delta = reals(&[1.0, 0.0, 0.0]);
        let out = circ_corr(&x, &delta).unwrap();
        assert_close(&out, &x, 1e-14);
    }

    #[test]
    fn linear_conv_of_ones_is_triangle() {
        let x = reals(&[1.0, 1.0, 1.0]);
        let out = linear_conv(&x, &x);
        assert_close(&out, &reals(&[1.0, 2.0, 3.0, 2.0, 1.0]), 1e-15);
    }

    #[test]
    fn support_uses_strict_threshold() {
        let v = reals(&[1.0, 1.0, 0.0, 0.0, 1.0]);
        assert_eq!(support(&v, 0.0), vec![0, 1, 4]);
        assert_eq!(support(&v, 1.0), Vec::<usize>::new());
        assert!(is_k_sparse(&v, 3, 0.0));
        assert!(!is_k_sparse(&v, 2, 0.0));
    }

    #[test]
    fn dimension_mismatch_and_empty_inputs_are_rejected() {
        let x = reals(&[1.0, 2.0]);
        let y = reals(&[1.0, 2.0, 3.0]);
        assert!(matches!(
            circ_conv(&x, &y),
            Err(crate::Error::LengthMismatch { left: 2, right: 3 })
        ));
        assert!(matches!(dft(&[]), Err(crate::Error::EmptyInput)));
        let bad = vec![c(f64::NAN, 0.0)];
        assert!(matches!(dft(&bad), Err(crate::Error::NonFiniteInput)));
    }
}
