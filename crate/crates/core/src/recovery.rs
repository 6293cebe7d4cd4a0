//! Signal recovery from intensity measurements, up to global sign.
//!
//! The key structural fact: the symmetrized embedding is conjugate-symmetric,
//! so its spectrum is *real*, and the intensities determine that spectrum up
//! to one unknown sign per bin. `recover_direct` resolves the signs by
//! synchronization: the squared spectrum is interpolated onto an oversampled
//! grid (exact — it is a trigonometric polynomial of degree at most half the
//! bin count), where consecutive signed values are predictable by cubic
//! extrapolation to far better than the local amplitude, pinning each sign
//! except within a vanishing neighbourhood of the zero crossings. Once every
//! sign is right the inverse DFT *is* the solution, so a short projection
//! polish reaches machine precision.
//!
//! A second algebraic route backs this up: the inverse DFT of the
//! intensities is the cyclic autocorrelation of the embedding; because the
//! embedding lives on one cyclic block of length L with total length
//! >= 2L-1, rotating the autocorrelation by L-1 unrolls it into the *linear*
//! > autocorrelation of the block, and a polynomial square root returns the
//! > block up to sign. The candidate that measures closer to the data wins.
//!
//! `recover_alternating` is the classical projection heuristic between the
//! set with prescribed spectral magnitudes and the subspace of conjugate-
//! symmetric vectors supported on the variant's block. It can stall from a
//! cold start, but needs no exact square structure, which makes it the
//! refinement stage under noise and the fallback when factorization fails.
//!
//! Both methods fix the sign ambiguity the same way: variant A estimates are
//! flipped so the (real) leading entry is positive; otherwise the first
//! significant entry gets a positive real part.

use num_complex::Complex64;

use crate::algebra::{
    cyclic_shift, dft, ensure_finite, ensure_same_len, flip_to_canonical_sign, idft, l2_norm,
    SIGN_TOL_FACTOR,
};
use crate::error::{Error, Result};
use crate::factor::{default_anchor_tol, poly_sqrt_lenient};
use crate::measurement::{autocorrelation_from, measure, MeasurementVector};
use crate::symmetrization::{SymmetrizedVector, Variant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Relative intensity residual below which a noiseless direct recovery is
/// accepted without refinement.
const CLEAN_RESIDUAL_FACTOR: f64 = 1e-9;

/// Oversampling factor of the sign-synchronization grid. At 8x the fastest
/// active harmonic advances by at most ~pi/16 per step, so a short linear
/// predictor pins each sign to a small fraction of the local amplitude.
const UNWRAP_OVERSAMPLE: usize = 8;

/// Projection iterations spent locking in the synchronized signs; once the
/// pattern is right the iteration is stationary, so a handful suffices.
const UNWRAP_POLISH_ITERS: usize = 8;

/// Frequency nodes per predictor section; order `2 * PREDICTOR_SECTIONS`.
const PREDICTOR_SECTIONS: usize = 3;

/// Mirror pairs of bins whose sign is flipped when escaping a stuck sign
/// pattern; only near-vanishing bins can end up wrong, so few candidates
/// are ever needed.
const FLIP_CANDIDATES: usize = 4;

/// Off-subspace energy below this fraction of the pattern norm counts as
/// consistent; no sign repair is attempted.
const SIGN_CONSISTENT_FACTOR: f64 = 1e-12;

/// Which algorithm produced a [`RecoveryResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Direct,
    Alternating,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::Direct => write!(f, "direct"),
            Method::Alternating => write!(f, "alternating"),
        }
    }
}

/// Output of a recovery run.
#[derive(Debug, Clone)]
pub struct RecoveryResult {
    /// Estimated signal of length `origin_n`, sign-canonicalized.
    pub estimate: Vec<Complex64>,
    /// Euclidean distance between the measurement of `estimate` and the input
    /// intensities (absolute, in intensity units).
    pub residual: f64,
    /// Algorithm that produced `estimate`.
    pub method: Method,
    /// Alternating iterations spent (0 for a pure direct solve).
    pub iterations: usize,
    /// Sign rule that was applied: `"x0-positive"`,
    /// `"first-entry-positive-real"`, or `"zero"`.
    pub sign_convention: String,
}

/// Options for [`recover_direct_with`].
#[derive(Debug, Clone)]
pub struct DirectOptions {
    /// Relative residual above which the autocorrelation is declared not a
    /// perfect square (strict mode only).
    pub square_tol: f64,
    /// When the factorization fails structurally, fall back to a cold
    /// alternating run instead of returning an error.
    pub fallback: bool,
    /// Warm alternating steps appended when the input is noisy or the direct
    /// residual is poor; 0 disables refinement.
    pub refine_steps: usize,
}

impl Default for DirectOptions {
    fn default() -> Self {
        DirectOptions {
            square_tol: 1e-8,
            fallback: true,
            refine_steps: 20,
        }
    }
}

/// Initialization of the alternating scheme.
#[derive(Debug, Clone)]
pub enum AltInit {
    /// Start from the spectrum `+sqrt(m)` (all signs positive).
    AllPlus,
    /// Independent uniform random sign per bin, drawn from this seed.
    RandomSigns(u64),
    /// Start from a caller-supplied symmetrized iterate of measured length.
    Warm(Vec<Complex64>),
}

/// Options for [`recover_alternating`].
#[derive(Debug, Clone)]
pub struct AlternatingOptions {
    pub max_iter: usize,
    /// Stop once the intensity residual changes by less than
    /// `tol * ||m||` between consecutive iterations.
    pub tol: f64,
    pub init: AltInit,
}

impl Default for AlternatingOptions {
    fn default() -> Self {
        AlternatingOptions {
            max_iter: 200,
            tol: 1e-12,
            init: AltInit::AllPlus,
        }
    }
}

/// Distance between two vectors modulo global sign:
/// `min(||x - y||, ||x + y||)`.
pub fn dist_up_to_sign(x: &[Complex64], y: &[Complex64]) -> Result<f64> {
    ensure_same_len(x, y)?;
    let mut minus = 0.0;
    let mut plus = 0.0;
    for (a, b) in x.iter().zip(y) {
        minus += (a - b).norm_sqr();
        plus += (a + b).norm_sqr();
    }
    Ok(minus.min(plus).sqrt())
}

/// Algebraic recovery with default options; see [`recover_direct_with`].
pub fn recover_direct(m: &MeasurementVector) -> Result<RecoveryResult> {
    recover_direct_with(m, &DirectOptions::default())
}

/// Recovers the signal by inverting the measurement map.
///
/// The primary path synchronizes the signs of `±sqrt(m)` on an oversampled
/// spectral grid (see the module docs) and locks them in with a short
/// projection polish; a clean noiseless residual ends the run there. Harder
/// inputs also get the algebraic route — unroll the cyclic autocorrelation by
/// `block_len - 1` and take the polynomial square root — and the candidate
/// that measures closer to the data survives. Noisy input (or a poor
/// residual) then triggers `refine_steps` of warm-started alternating
/// projections, keeping whichever iterate measures closer.
///
/// With `fallback` disabled the polynomial square root *is* the contract:
/// structurally impossible factorizations surface as `NotAPerfectSquare` /
/// `OddLeadingIndex` instead of being papered over.
pub fn recover_direct_with(m: &MeasurementVector, opts: &DirectOptions) -> Result<RecoveryResult> {
    let variant = m.variant();
    let n = m.origin_n();
    let m_norm = m.l2_norm();
    if m_norm == 0.0 {
        return Ok(RecoveryResult {
            estimate: vec![ZERO; n],
            residual: 0.0,
            method: Method::Direct,
            iterations: 0,
            sign_convention: "zero".to_string(),
        });
    }

    let autocorrelation = autocorrelation_from(m);
    let block = variant.block_len(n);
    debug_assert_eq!(2 * block - 1, m.len());
    let unrolled = cyclic_shift(&autocorrelation, block as i64 - 1);
    // Widen the significance threshold in proportion to the noise that the
    // intensity perturbation induces on autocorrelation coefficients.
    let anchor_tol =
        default_anchor_tol(&unrolled).max(3.0 * m.noise_sigma() * (m.len() as f64).sqrt());

    if !opts.fallback {
        let (p, res) = poly_sqrt_lenient(&unrolled, anchor_tol)?;
        if res > opts.square_tol {
            return Err(Error::NotAPerfectSquare {
                residual: res,
                tol: opts.square_tol,
            });
        }
        let s = embed_block(&p, variant, n);
        return polish_and_finish(s, m, opts, m_norm);
    }

    let candidate = repair_signs(m, unwrap_candidate(m));
    let (mut s, residual, _) = alternating_core(m, candidate, UNWRAP_POLISH_ITERS, 0.0);
    if m.noise_sigma() == 0.0 && residual <= CLEAN_RESIDUAL_FACTOR * m_norm {
        return finish(s, m, Method::Direct, 0);
    }

    // Second opinion from the algebraic route; errors here just mean the
    // intensities are not an exact square, which the polish handles anyway.
    if let Ok((p, _)) = poly_sqrt_lenient(&unrolled, anchor_tol) {
        let sp = embed_block(&p, variant, n);
        if intensity_residual(&sp, m) < residual {
            s = sp;
        }
    }
    polish_and_finish(s, m, opts, m_norm)
}

/// Shared tail of the direct method: optional warm refinement, then extract
/// and canonicalize.
fn polish_and_finish(
    mut s: Vec<Complex64>,
    m: &MeasurementVector,
    opts: &DirectOptions,
    m_norm: f64,
) -> Result<RecoveryResult> {
    let residual = intensity_residual(&s, m);
    let mut iterations = 0;
    if opts.refine_steps > 0 && (m.noise_sigma() > 0.0 || residual > CLEAN_RESIDUAL_FACTOR * m_norm)
    {
        let (refined, refined_res, spent) = alternating_core(m, s.clone(), opts.refine_steps, 0.0);
        if refined_res < residual {
            s = refined;
        }
        iterations += spent;
    }
    finish(s, m, Method::Direct, iterations)
}

/// Time-domain candidate from sign synchronization of the spectrum.
///
/// The real spectrum factors as `v_k = carrier_k * R(theta_k)` where the
/// carrier is `+1` everywhere (odd block, centered) or `(-1)^k` (even block,
/// centered on a half-integer) and `R` is a smooth low-pass real function —
/// a trigonometric polynomial in half-integer harmonics up to
/// `(block_len - 1) / 2`. Its square has integer harmonics up to
/// `block_len - 1 <= (len - 1) / 2`, so the intensities determine `R^2`
/// exactly and zero-padding the Fourier coefficients evaluates it on an
/// `UNWRAP_OVERSAMPLE`-times finer grid without error.
///
/// The walk starts at the largest magnitude (safely away from any crossing)
/// and predicts each next signed value of `R`, keeping whichever sign agrees
/// better; a linear predictor with roots on the block's exact frequency band
/// makes the prediction error a ~1e-6 fraction of the active amplitude, so a
/// sign can only come out wrong where `R` nearly vanishes — where it hardly
/// matters and the projection polish repairs it. For an even block `R` is
/// anti-periodic, so signs assigned after the walk wraps past the seam live
/// on the opposite sheet and are flipped on export. Only signs at original
/// grid points are consumed; magnitudes come from the measurement itself.
fn unwrap_candidate(m: &MeasurementVector) -> Vec<Complex64> {
    let len = m.len();
    let fine_len = UNWRAP_OVERSAMPLE * len;
    let as_complex: Vec<Complex64> = m
        .intensities()
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    let coeffs = idft(&as_complex).expect("measurement invariant: finite, nonempty");
    // Split at the frequency fold; the measured length is odd, so the
    // positive/negative halves are unambiguous.
    let h = len.div_ceil(2);
    let mut padded = vec![ZERO; fine_len];
    padded[..h].copy_from_slice(&coeffs[..h]);
    padded[fine_len - (len - h)..].copy_from_slice(&coeffs[h..]);
    let fine = dft(&padded).expect("zero padding keeps entries finite");
    // Positive multiple of R^2; clamp interpolation round-off below zero
    // before taking magnitudes.
    let mag: Vec<f64> = fine.iter().map(|z| z.re.max(0.0).sqrt()).collect();

    let block = m.variant().block_len(m.origin_n());
    let even_block = block.is_multiple_of(2);
    // Active band of R in radians per fine-grid step.
    let step = 2.0 * std::f64::consts::PI / fine_len as f64;
    let theta_lo = if even_block { 0.5 * step } else { 0.0 };
    let theta_hi = (0.5 * (block - 1) as f64 * step).max(theta_lo);
    let weights = band_predictor(theta_lo, theta_hi);

    let start = mag
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(t, _)| t)
        .unwrap_or(0);
    // Walk coordinates: v[i] tracks the smooth continuation of R from the
    // start point, which crosses the anti-periodic seam at most once.
    let mut v = vec![0.0_f64; fine_len];
    v[0] = mag[start];
    for i in 1..fine_len {
        let r = mag[(start + i) % fine_len];
        let pred = match i {
            1 => v[i - 1],
            2 => 2.0 * v[i - 1] - v[i - 2],
            3 => 3.0 * v[i - 1] - 3.0 * v[i - 2] + v[i - 3],
            4 | 5 => 4.0 * v[i - 1] - 6.0 * v[i - 2] + 4.0 * v[i - 3] - v[i - 4],
            _ => weights
                .iter()
                .enumerate()
                .map(|(d, w)| w * v[i - 1 - d])
                .sum(),
        };
        v[i] = if (pred - r).abs() <= (pred + r).abs() {
            r
        } else {
            -r
        };
    }

    let spectrum: Vec<Complex64> = m
        .intensities()
        .iter()
        .enumerate()
        .map(|(k, &value)| {
            let i = (UNWRAP_OVERSAMPLE * k + fine_len - start) % fine_len;
            let mut sign = if v[i] < 0.0 { -1.0 } else { 1.0 };
            if even_block {
                // Opposite sheet once the walk wrapped past the seam.
                if start + i >= fine_len {
                    sign = -sign;
                }
                // Carrier relating R to the spectrum at original bins.
                if k % 2 == 1 {
                    sign = -sign;
                }
            }
            Complex64::new(sign * value.sqrt(), 0.0)
        })
        .collect();
    idft(&spectrum).expect("signed roots of finite intensities are finite")
}

/// Escape hatch for the rare stuck sign. A wrong sign can only land on a bin
/// where the spectrum nearly vanishes, and there the intensity residual is
/// blind to it (the bin enters squared), so the projection polish happily
/// converges onto the wrong pattern. Membership in the symmetrized-support
/// subspace is not blind: one flipped sign sits off the subspace by twice
/// the bin magnitude, and a single flip keeps the pattern real, so the
/// conjugate time symmetry survives. Rank bins by their conflict under one
/// support projection and keep each flip that lowers the off-subspace
/// energy.
fn repair_signs(m: &MeasurementVector, s: Vec<Complex64>) -> Vec<Complex64> {
    let len = m.len();
    let variant = m.variant();
    let n = m.origin_n();
    let project = |z: &[Complex64]| -> (Vec<Complex64>, f64) {
        let mut t = idft(z).expect("iterates stay finite");
        time_project(&mut t, variant, n);
        let w = dft(&t).expect("iterates stay finite");
        let e = z
            .iter()
            .zip(&w)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        (w, e)
    };

    let mut z = dft(&s).expect("iterates stay finite");
    let (w, mut e) = project(&z);
    let scale = z.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if e <= SIGN_CONSISTENT_FACTOR * scale {
        return s;
    }

    let mut scores: Vec<(f64, usize)> = (0..len).map(|k| ((z[k] - w[k]).norm(), k)).collect();
    scores.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut changed = false;
    for &(score, k) in scores.iter().take(FLIP_CANDIDATES) {
        if score <= 0.0 {
            break;
        }
        z[k] = -z[k];
        let (_, ef) = project(&z);
        if ef < e {
            e = ef;
            changed = true;
        } else {
            z[k] = -z[k];
        }
    }
    if changed {
        idft(&z).expect("iterates stay finite")
    } else {
        s
    }
}

/// Weights of the linear predictor whose characteristic roots sit on the
/// unit circle at `PREDICTOR_SECTIONS` Chebyshev nodes (in cos theta) of the
/// band `[theta_lo, theta_hi]`, conjugate-paired so the weights are real.
/// The prediction error of a harmonic at theta scales with the distance of
/// cos theta from the node set, which the Chebyshev placement makes
/// uniformly tiny across the band.
fn band_predictor(theta_lo: f64, theta_hi: f64) -> Vec<f64> {
    let hi = theta_lo.cos();
    let lo = theta_hi.cos();
    let mid = 0.5 * (hi + lo);
    let rad = 0.5 * (hi - lo);
    // Characteristic polynomial, descending powers, leading 1.
    let mut poly = vec![1.0_f64];
    for i in 0..PREDICTOR_SECTIONS {
        let angle = (2 * i + 1) as f64 * std::f64::consts::PI / (2 * PREDICTOR_SECTIONS) as f64;
        let u = mid + rad * angle.cos();
        let section = [1.0, -2.0 * u, 1.0];
        let mut next = vec![0.0; poly.len() + 2];
        for (a, &pa) in poly.iter().enumerate() {
            for (b, &sb) in section.iter().enumerate() {
                next[a + b] += pa * sb;
            }
        }
        poly = next;
    }
    poly.iter().skip(1).map(|&c| -c).collect()
}

/// Alternating projections between the magnitude constraint in frequency and
/// the symmetrized-support subspace in time. Returns the best iterate seen
/// (by intensity residual), not the last one.
pub fn recover_alternating(
    m: &MeasurementVector,
    opts: &AlternatingOptions,
) -> Result<RecoveryResult> {
    if let AltInit::Warm(v) = &opts.init {
        if v.len() != m.len() {
            return Err(Error::VariantMismatch {
                expected: m.len(),
                actual: v.len(),
            });
        }
        ensure_finite(v)?;
    }
    let s0 = initial_iterate(m, &opts.init);
    let (s, _, iterations) = alternating_core(m, s0, opts.max_iter.max(1), opts.tol);
    finish(s, m, Method::Alternating, iterations)
}

/// Extracts, canonicalizes, and measures the final iterate.
fn finish(
    s: Vec<Complex64>,
    m: &MeasurementVector,
    method: Method,
    iterations: usize,
) -> Result<RecoveryResult> {
    let variant = m.variant();
    let sym = SymmetrizedVector::from_parts(s, variant.kind(), m.origin_n())?;
    let mut estimate = sym.extract();
    let sign_convention = canonicalize_sign(&mut estimate, variant);
    let remeasured =
        measure(&estimate, variant).expect("extracted estimates satisfy the variant preconditions");
    let residual = m
        .l2_dist(&remeasured)
        .expect("geometry preserved by measure");
    Ok(RecoveryResult {
        estimate,
        residual,
        method,
        iterations,
        sign_convention,
    })
}

/// Applies the sign convention in place and reports which rule fired.
fn canonicalize_sign(estimate: &mut [Complex64], variant: Variant) -> String {
    let nrm = l2_norm(estimate);
    if nrm == 0.0 {
        return "zero".to_string();
    }
    if variant == Variant::A && estimate[0].norm() > SIGN_TOL_FACTOR * nrm {
        if estimate[0].re < 0.0 {
            for z in estimate.iter_mut() {
                *z = -*z;
            }
        }
        return "x0-positive".to_string();
    }
    flip_to_canonical_sign(estimate);
    "first-entry-positive-real".to_string()
}

/// Writes block coefficients back to their cyclic positions.
fn embed_block(p: &[Complex64], variant: Variant, n: usize) -> Vec<Complex64> {
    let len = variant.measured_len(n);
    let start = variant.block_start(n);
    let mut s = vec![ZERO; len];
    for (t, &v) in p.iter().enumerate() {
        s[(start + t) % len] = v;
    }
    s
}

/// Initial time-domain iterate for the alternating scheme.
fn initial_iterate(m: &MeasurementVector, init: &AltInit) -> Vec<Complex64> {
    match init {
        AltInit::Warm(v) => v.clone(),
        AltInit::AllPlus => {
            let spectrum: Vec<Complex64> = m
                .intensities()
                .iter()
                .map(|&v| Complex64::new(v.sqrt(), 0.0))
                .collect();
            idft(&spectrum).expect("measurement invariant: finite, nonempty")
        }
        AltInit::RandomSigns(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let spectrum: Vec<Complex64> = m
                .intensities()
                .iter()
                .map(|&v| {
                    let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                    Complex64::new(sign * v.sqrt(), 0.0)
                })
                .collect();
            idft(&spectrum).expect("measurement invariant: finite, nonempty")
        }
    }
}

/// The projection loop. Returns `(best iterate, its residual, iterations)`.
fn alternating_core(
    m: &MeasurementVector,
    init: Vec<Complex64>,
    max_iter: usize,
    tol: f64,
) -> (Vec<Complex64>, f64, usize) {
    let variant = m.variant();
    let n = m.origin_n();
    let m_norm = m.l2_norm();
    let sqrt_m: Vec<f64> = m.intensities().iter().map(|&v| v.sqrt()).collect();

    let mut s = init;
    let mut best_s: Vec<Complex64> = Vec::new();
    let mut best_res = f64::INFINITY;
    let mut prev_res = f64::INFINITY;
    let mut iterations = 0;

    for it in 1..=max_iter.max(1) {
        time_project(&mut s, variant, n);
        let spectrum = dft(&s).expect("iterates stay finite");
        let res: f64 = spectrum
            .iter()
            .zip(m.intensities())
            .map(|(z, &v)| {
                let d = z.norm_sqr() - v;
                d * d
            })
            .sum::<f64>()
            .sqrt();
        iterations = it;
        if res < best_res {
            best_res = res;
            best_s = s.clone();
        }
        if (prev_res - res).abs() <= tol * m_norm {
            break;
        }
        prev_res = res;

        let constrained: Vec<Complex64> = spectrum
            .iter()
            .zip(&sqrt_m)
            .map(|(z, &r)| {
                let sign = if z.re < 0.0 { -1.0 } else { 1.0 };
                Complex64::new(sign * r, 0.0)
            })
            .collect();
        s = idft(&constrained).expect("measurement invariant: finite, nonempty");
    }
    (best_s, best_res, iterations)
}

/// Orthogonal projection onto the intersection of the block-support subspace
/// and the conjugate-symmetric subspace (the block is mirror-invariant, so
/// the two projections commute).
fn time_project(s: &mut [Complex64], variant: Variant, n: usize) {
    let len = s.len();
    let start = variant.block_start(n);
    let block = variant.block_len(n);
    for (k, entry) in s.iter_mut().enumerate() {
        let rel = (k + len - start) % len;
        if rel >= block {
            *entry = ZERO;
        }
    }
    s[0] = Complex64::new(s[0].re, 0.0);
    for k in 1..=(len - 1) / 2 {
        let mirror = len - k;
        let avg = 0.5 * (s[k] + s[mirror].conj());
        s[k] = avg;
        s[mirror] = avg.conj();
    }
}

/// Euclidean distance between `|dft(s)|^2` and the measured intensities.
fn intensity_residual(s: &[Complex64], m: &MeasurementVector) -> f64 {
    let spectrum = dft(s).expect("iterates stay finite");
    spectrum
        .iter()
        .zip(m.intensities())
        .map(|(z, &v)| {
            let d = z.norm_sqr() - v;
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::{add_noise, NoiseKind, NoiseModel};
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_signal(rng: &mut ChaCha8Rng, n: usize, variant: Variant) -> Vec<Complex64> {
        let mut x: Vec<Complex64> = (0..n)
            .map(|_| {
                c(
                    rng.sample::<f64, _>(StandardNormal),
                    rng.sample::<f64, _>(StandardNormal),
                )
            })
            .collect();
        if variant == Variant::A {
            x[0] = c(x[0].re, 0.0);
        }
        x
    }

    #[test]
    fn dist_up_to_sign_identifies_antipodes() {
        let x = vec![c(1.0, 2.0), c(-3.0, 0.5)];
        let neg: Vec<Complex64> = x.iter().map(|z| -z).collect();
        assert_eq!(dist_up_to_sign(&x, &x).unwrap(), 0.0);
        assert_eq!(dist_up_to_sign(&x, &neg).unwrap(), 0.0);
        let y = vec![c(1.0, 2.0), c(3.0, 0.5)];
        assert!(dist_up_to_sign(&x, &y).unwrap() > 1.0);
        assert!(dist_up_to_sign(&x, &[c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn direct_recovers_ones_pair() {
        let x = vec![c(1.0, 0.0), c(1.0, 0.0)];
        let m = measure(&x, Variant::A).unwrap();
        let r = recover_direct(&m).unwrap();
        assert_eq!(r.method, Method::Direct);
        assert_eq!(r.iterations, 0);
        assert_eq!(r.sign_convention, "x0-positive");
        assert!(dist_up_to_sign(&r.estimate, &x).unwrap() < 1e-10);
        assert!(r.residual < 1e-10);
        // Positive leading entry by convention.
        assert!(r.estimate[0].re > 0.0);
    }

    #[test]
    fn direct_round_trips_random_signals_both_variants() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xD1BEC7);
        for variant in [Variant::A, Variant::B] {
            for n in [1usize, 2, 3, 5, 8, 13, 21] {
                for _ in 0..5 {
                    let x = random_signal(&mut rng, n, variant);
                    let nrm = l2_norm(&x);
                    let m = measure(&x, variant).unwrap();
                    let r = recover_direct(&m).unwrap();
                    let d = dist_up_to_sign(&r.estimate, &x).unwrap();
                    assert!(
                        d <= 1e-8 * nrm,
                        "variant {variant}, n={n}: dist {d:e} vs norm {nrm:e}"
                    );
                    assert!(r.residual <= 1e-8 * m.l2_norm());
                }
            }
        }
    }

    #[test]
    fn recovery_is_sign_blind_and_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x = random_signal(&mut rng, 6, Variant::B);
        let neg: Vec<Complex64> = x.iter().map(|z| -z).collect();
        let r1 = recover_direct(&measure(&x, Variant::B).unwrap()).unwrap();
        let r2 = recover_direct(&measure(&neg, Variant::B).unwrap()).unwrap();
        assert_eq!(r1.estimate, r2.estimate);
        let r3 = recover_direct(&measure(&x, Variant::B).unwrap()).unwrap();
        assert_eq!(r1.estimate, r3.estimate);
    }

    #[test]
    fn alternating_converges_on_small_noiseless_instance() {
        // |x0| > 2(|x1| + |x2|), so the symmetrized vector has strictly
        // positive spectrum and the all-plus sign guess is exact.
        let x = vec![c(2.0, 0.0), c(0.3, -0.2), c(0.1, 0.15)];
        let m = measure(&x, Variant::A).unwrap();
        let r = recover_alternating(&m, &AlternatingOptions::default()).unwrap();
        assert_eq!(r.method, Method::Alternating);
        assert!(r.iterations <= 200);
        let d = dist_up_to_sign(&r.estimate, &x).unwrap();
        assert!(d <= 1e-6, "dist {d:e} after {} iterations", r.iterations);
    }

    #[test]
    fn alternating_with_random_restarts_solves_a_generic_instance() {
        // Outside the positive-spectrum basin a fixed init may stall, which
        // is how these projections behave; restarts are the standard remedy.
        let x = vec![c(1.0, 0.0), c(0.6, -0.4)];
        let m = measure(&x, Variant::A).unwrap();
        let solved = (0..64u64).any(|seed| {
            let r = recover_alternating(
                &m,
                &AlternatingOptions {
                    max_iter: 500,
                    init: AltInit::RandomSigns(seed),
                    ..AlternatingOptions::default()
                },
            )
            .unwrap();
            dist_up_to_sign(&r.estimate, &x).unwrap() <= 1e-6
        });
        assert!(solved, "no random-sign restart out of 64 converged");
    }

    #[test]
    fn alternating_with_warm_start_stays_at_solution() {
        let x = vec![c(0.8, 0.0), c(-0.2, 1.1)];
        let m = measure(&x, Variant::A).unwrap();
        let warm = crate::symmetrization::symmetrize_padded(&x, Variant::A)
            .unwrap()
            .into_entries();
        let r = recover_alternating(
            &m,
            &AlternatingOptions {
                max_iter: 50,
                tol: 0.0,
                init: AltInit::Warm(warm),
            },
        )
        .unwrap();
        assert!(dist_up_to_sign(&r.estimate, &x).unwrap() < 1e-12);
    }

    #[test]
    fn warm_start_length_is_validated() {
        let m = measure(&[c(1.0, 0.0), c(2.0, 0.0)], Variant::A).unwrap();
        let err = recover_alternating(
            &m,
            &AlternatingOptions {
                init: AltInit::Warm(vec![ZERO; 4]),
                ..Default::default()
            },
        )
        .unwrap_err();
        assert!(matches!(
            err,
            Error::VariantMismatch {
                expected: 5,
                actual: 4
            }
        ));
    }

    #[test]
    fn zero_measurement_recovers_zero() {
        let m = measure(&[ZERO, ZERO, ZERO], Variant::B).unwrap();
        let r = recover_direct(&m).unwrap();
        assert_eq!(r.estimate, vec![ZERO; 3]);
        assert_eq!(r.sign_convention, "zero");
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn strict_mode_rejects_tampered_intensities() {
        let x = vec![c(1.0, 0.0), c(0.3, 0.7), c(-0.5, 0.1)];
        let m = measure(&x, Variant::B).unwrap();
        let mut broken = m.intensities().to_vec();
        broken[0] *= 1.5;
        broken[3] += 0.8;
        let tampered = MeasurementVector::new(broken, Variant::B, 3, 0.0).unwrap();
        let strict = DirectOptions {
            fallback: false,
            refine_steps: 0,
            ..Default::default()
        };
        let err = recover_direct_with(&tampered, &strict).unwrap_err();
        assert!(
            matches!(
                err,
                Error::NotAPerfectSquare { .. } | Error::OddLeadingIndex { .. }
            ),
            "unexpected error {err:?}"
        );
        // Best-effort mode still returns something.
        let r = recover_direct(&tampered).unwrap();
        assert_eq!(r.estimate.len(), 3);
        assert!(r.residual.is_finite());
    }

    #[test]
    fn noisy_direct_recovery_uses_refinement_and_stays_close() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xBAD5EED);
        let x = random_signal(&mut rng, 8, Variant::A);
        let m = measure(&x, Variant::A).unwrap();
        let sigma = 1e-4 * m.intensities().iter().cloned().fold(0.0, f64::max);
        let noisy = add_noise(
            &m,
            &NoiseModel {
                kind: NoiseKind::Intensity,
                sigma,
                seed: 11,
            },
        );
        let r = recover_direct(&noisy).unwrap();
        assert_eq!(r.method, Method::Direct);
        assert!(r.iterations > 0, "noise must trigger refinement");
        let d = dist_up_to_sign(&r.estimate, &x).unwrap();
        assert!(d < 0.05 * l2_norm(&x), "dist {d:e}");
    }

    #[test]
    fn alternating_random_signs_is_deterministic_per_seed() {
        let x = vec![c(0.4, 0.0), c(1.0, -0.8), c(0.2, 0.3), c(-0.7, 0.0)];
        let m = measure(&x, Variant::B).unwrap();
        let opts = |seed| AlternatingOptions {
            max_iter: 60,
            tol: 0.0,
            init: AltInit::RandomSigns(seed),
        };
        let r1 = recover_alternating(&m, &opts(5)).unwrap();
        let r2 = recover_alternating(&m, &opts(5)).unwrap();
        assert_eq!(r1.estimate, r2.estimate);
        assert_eq!(r1.residual, r2.residual);
    }
}
