//! Polynomial square roots: given coefficients of `c = p * p` (linear
//! convolution), reconstruct `p` up to global sign.
//!
//! The workhorse is a direct coefficient recursion anchored at the first
//! significant coefficient: with `c = p*p` and `p[j0]` the first nonzero
//! entry,
//!
//! ```text
//! p[j0]     = sqrt(c[2*j0])
//! p[j0 + k] = (c[2*j0 + k] - sum_{i=1}^{k-1} p[j0+i] * p[j0+k-i]) / (2 * p[j0])
//! ```
//!
//! The recursion divides by the anchor at every step, so a small `|p[j0]|`
//! amplifies rounding in later coefficients. When the anchor is weak — or the
//! recursion's verification residual is poor — a second candidate is built by
//! factoring `c` over its roots: every root of a perfect square has even
//! multiplicity, so the roots come in near-identical pairs; averaging each
//! pair and polishing with a multiplicity-2 Newton step recovers the roots of
//! `p`, which is then re-expanded and rescaled. The candidate with the
//! smaller verification residual `||p*p - c|| / ||c||` wins.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::algebra::{ensure_finite, flip_to_canonical_sign, l2_norm, linear_conv, linf_norm};
use crate::error::{Error, Result};

/// Default relative residual above which an input is declared not a square.
pub const DEFAULT_SQUARE_TOL: f64 = 1e-8;

/// Anchor weaker than this fraction of the peak coefficient routes the
/// factorization through the root path first.
const WEAK_ANCHOR_FACTOR: f64 = 1e-6;

/// Recursion residual above which the root path is tried as well.
const RETRY_RESIDUAL: f64 = 1e-10;

/// Coefficients at or below this fraction of the peak are treated as zero
/// when locating the leading/trailing significant coefficients.
const ANCHOR_TOL_FACTOR: f64 = 1e-12;

/// Trailing coefficients below this fraction of the peak are clipped before
/// the root factorization; dividing by a barely-significant leading
/// coefficient would blow up the monic normalization. The Newton polish
/// restores any clipped tail.
const TAIL_TRIM_FACTOR: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Coefficient threshold used to locate the significant part of `c`.
pub(crate) fn default_anchor_tol(c: &[Complex64]) -> f64 {
    ANCHOR_TOL_FACTOR * linf_norm(c)
}

/// Square root of a polynomial given by its `2L-1` coefficients `c`,
/// returning `L` coefficients `p` with `linear_conv(p, p) ~= c`. The result
/// is canonicalized so its first significant entry has positive real part.
///
/// Fails with `NotAPerfectSquare` when the best achievable relative residual
/// exceeds `tol`, and with `OddLeadingIndex` when the leading significant
/// coefficient sits at an odd position (no square can produce that).
pub fn poly_sqrt(c: &[Complex64], tol: f64) -> Result<Vec<Complex64>> {
    let (mut p, residual) = poly_sqrt_lenient(c, default_anchor_tol(c))?;
    if residual > tol {
        return Err(Error::NotAPerfectSquare { residual, tol });
    }
    flip_to_canonical_sign(&mut p);
    Ok(p)
}

/// Best-effort square root: returns the winning candidate together with its
/// relative residual instead of enforcing a tolerance. `anchor_tol` is the
/// absolute coefficient threshold (callers widen it for noisy input).
pub(crate) fn poly_sqrt_lenient(c: &[Complex64], anchor_tol: f64) -> Result<(Vec<Complex64>, f64)> {
    if c.is_empty() {
        return Err(Error::EmptyInput);
    }
    ensure_finite(c)?;
    if c.len().is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "a squared polynomial has an odd number of coefficients, got {}",
            c.len()
        )));
    }
    let half = c.len().div_ceil(2);
    let peak = linf_norm(c);
    if peak == 0.0 {
        return Ok((vec![ZERO; half], 0.0));
    }
    // Never let a caller-widened threshold swallow the whole vector.
    let threshold = anchor_tol.clamp(0.0, 0.5 * peak);
    let lead = c
        .iter()
        .position(|z| z.norm() > threshold)
        .expect("peak exceeds threshold");
    if lead % 2 == 1 {
        return Err(Error::OddLeadingIndex { index: lead });
    }

    let c_norm = l2_norm(c);
    let residual_of = |p: &[Complex64]| -> f64 {
        if !p.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return f64::INFINITY;
        }
        let sq = linear_conv(p, p);
        let err: f64 = sq
            .iter()
            .zip(c)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        err / c_norm
    };

    let j0 = lead / 2;
    let mut best: Option<(Vec<Complex64>, f64)> = None;
    if c[lead].norm() >= WEAK_ANCHOR_FACTOR * peak {
        let p = sqrt_by_recursion(c, j0, half);
        let r = residual_of(&p);
        // Polishing costs a QR per step; skip it when the recursion already
        // sits at the accuracy floor.
        best = Some(if r <= NEWTON_GATE {
            (p, r)
        } else {
            newton_polish(c, p, j0, &residual_of)
        });
    }
    let recursion_is_poor = best.as_ref().is_none_or(|(_, r)| *r > RETRY_RESIDUAL);
    if recursion_is_poor {
        let p = sqrt_by_roots(c, lead, threshold, half);
        let (p, r) = newton_polish(c, p, j0, &residual_of);
        if best.as_ref().is_none_or(|(_, br)| r < *br) {
            best = Some((p, r));
        }
    }
    if best.as_ref().is_none_or(|(_, r)| !r.is_finite()) {
        // Last resort when the preferred path produced garbage.
        let p = sqrt_by_recursion(c, j0, half);
        let r = residual_of(&p);
        if best.as_ref().is_none_or(|(_, br)| r < *br) {
            best = Some((p, r));
        }
    }
    let (p, residual) = best.expect("at least one candidate was produced");
    if !residual.is_finite() {
        // Every candidate overflowed; surface the structural failure rather
        // than hand back garbage coefficients.
        return Err(Error::NotAPerfectSquare {
            residual: f64::INFINITY,
            tol: DEFAULT_SQUARE_TOL,
        });
    }
    Ok((p, residual))
}

const NEWTON_STEPS: usize = 6;
const NEWTON_FLOOR: f64 = 1e-14;
const NEWTON_GATE: f64 = 1e-12;

/// Coefficient-space Gauss–Newton iteration for `p ⋆ p = c`. The Jacobian is
/// `δ ↦ 2 p ⋆ δ`, a tall convolution matrix; each step solves the linearized
/// least-squares problem by QR. Solving in the least-squares sense keeps the
/// step accuracy tied to the smallest singular value of the convolution map
/// rather than to the leading coefficient, so weak anchors — where the
/// forward recursion loses digits geometrically — still polish cleanly.
/// Returns the best iterate seen by residual.
fn newton_polish<F>(
    c: &[Complex64],
    start: Vec<Complex64>,
    j0: usize,
    residual_of: &F,
) -> (Vec<Complex64>, f64)
where
    F: Fn(&[Complex64]) -> f64,
{
    let half = start.len();
    let width = half - j0;
    let mut p = start.clone();
    let mut best = (start, f64::INFINITY);
    best.1 = residual_of(&best.0);
    for _ in 0..NEWTON_STEPS {
        if best.1 == 0.0 {
            break;
        }
        let sq = linear_conv(&p, &p);
        let rows = 2 * width - 1;
        let mut jac = DMatrix::<Complex64>::zeros(rows, width);
        for i in 0..width {
            for j in 0..width {
                jac[(i + j, j)] += 2.0 * p[j0 + i];
            }
        }
        let rhs = DVector::<Complex64>::from_fn(rows, |t, _| c[2 * j0 + t] - sq[2 * j0 + t]);
        let qr = jac.qr();
        let mut delta = qr.q().adjoint() * rhs;
        if !qr.r().solve_upper_triangular_mut(&mut delta) {
            break;
        }
        for t in 0..width {
            p[j0 + t] += delta[t];
        }
        let r = residual_of(&p);
        if !r.is_finite() {
            break;
        }
        if r < best.1 {
            best = (p.clone(), r);
        }
        if best.1 <= NEWTON_FLOOR {
            break;
        }
    }
    best
}

fn sqrt_by_recursion(c: &[Complex64], j0: usize, half: usize) -> Vec<Complex64> {
    let mut p = vec![ZERO; half];
    p[j0] = c[2 * j0].sqrt();
    let inv_double_anchor = Complex64::new(0.5, 0.0) / p[j0];
    for k in 1..(half - j0) {
        let mut acc = c[2 * j0 + k];
        for i in 1..k {
            acc -= p[j0 + i] * p[j0 + k - i];
        }
        p[j0 + k] = acc * inv_double_anchor;
    }
    p
}

fn sqrt_by_roots(c: &[Complex64], lead: usize, threshold: f64, half: usize) -> Vec<Complex64> {
    let trim = threshold.max(TAIL_TRIM_FACTOR * linf_norm(c));
    let mut end = c.len() - 1;
    while end > lead && c[end].norm() <= trim {
        end -= 1;
    }
    if (end - lead) % 2 == 1 {
        // A square has even degree; extend or shrink to the more plausible
        // even-degree window.
        if end + 1 < c.len() && c[end + 1].norm() >= c[end - 1].norm() {
            end += 1;
        } else {
            end -= 1;
        }
    }
    let j0 = lead / 2;
    let mut p = vec![ZERO; half];
    if end == lead {
        p[j0] = c[lead].sqrt();
        return p;
    }
    let leading = c[end];
    let monic: Vec<Complex64> = c[lead..=end].iter().map(|z| z / leading).collect();
    let roots = aberth_roots(&monic);
    let means = pair_cluster_means(roots);
    let mut q = poly_from_roots(
        &means
            .into_iter()
            .map(|z| polish_double_root(&monic, z))
            .collect::<Vec<_>>(),
    );
    let scale = leading.sqrt();
    for a in &mut q {
        *a *= scale;
    }
    if !q.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        // Ill-placed roots overflowed the expansion; keep the bare anchor so
        // the polish stage starts from something finite.
        p[j0] = c[lead].sqrt();
        return p;
    }
    // deg(q) = (end - lead) / 2, and end/2 <= half - 1, so this fits.
    for (t, &a) in q.iter().enumerate() {
        p[j0 + t] = a;
    }
    p
}

/// All roots of a monic polynomial (ascending coefficients) via the
/// Aberth–Ehrlich simultaneous iteration. Deterministic: fixed initial
/// circle, fixed sweep order, fixed iteration cap.
fn aberth_roots(monic: &[Complex64]) -> Vec<Complex64> {
    let deg = monic.len() - 1;
    let radius = 1.0 + monic[..deg].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / deg as f64 + 0.37;
            radius * Complex64::new(angle.cos(), angle.sin())
        })
        .collect();
    for _ in 0..400 {
        let mut max_step = 0.0_f64;
        for k in 0..deg {
            let (p, dp) = horner(monic, z[k]);
            if p == ZERO {
                continue;
            }
            let newton = if dp == ZERO { p } else { p / dp };
            let mut repulsion = ZERO;
            for j in 0..deg {
                if j != k {
                    let d = z[k] - z[j];
                    if d.norm_sqr() > 1e-300 {
                        repulsion += d.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm_sqr() > 1e-300 {
                newton / denom
            } else {
                newton
            };
            // Overflow in Horner far from the root cluster yields a
            // non-finite step; skipping it keeps every iterate finite.
            let cand = z[k] - step;
            if !cand.re.is_finite() || !cand.im.is_finite() {
                continue;
            }
            z[k] = cand;
            max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
        }
        if max_step < 1e-14 {
            break;
        }
    }
    z
}

/// Polynomial value and derivative by Horner's scheme.
fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for &a in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Greedy nearest-neighbour pairing of an even set of roots; each pair is
/// replaced by its mean. Roots of a square cluster in twos around the true
/// roots, so averaging cancels the leading-order split.
fn pair_cluster_means(mut roots: Vec<Complex64>) -> Vec<Complex64> {
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut used = vec![false; roots.len()];
    let mut means = Vec::with_capacity(roots.len() / 2);
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut nearest = None;
        let mut nearest_dist = f64::INFINITY;
        for (j, &taken) in used.iter().enumerate().skip(i + 1) {
            if taken {
                continue;
            }
            let d = (roots[i] - roots[j]).norm_sqr();
            if d < nearest_dist {
                nearest_dist = d;
                nearest = Some(j);
            }
        }
        let j = nearest.expect("even number of roots");
        used[j] = true;
        means.push(0.5 * (roots[i] + roots[j]));
    }
    means
}

/// Newton iteration adapted to a double root: `z <- z - 2 p(z) / p'(z)`.
fn polish_double_root(coeffs: &[Complex64], mut z: Complex64) -> Complex64 {
    for _ in 0..40 {
        let (p, dp) = horner(coeffs, z);
        if dp == ZERO {
            break;
        }
        let step = 2.0 * p / dp;
        z -= step;
        if step.norm() <= 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

/// Monic polynomial (ascending coefficients) with the given roots.
fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![ZERO; coeffs.len() + 1];
        for (k, &a) in coeffs.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= r * a;
        }
        coeffs = next;
    }
    coeffs
}
