//! Conjugate-symmetric embeddings of complex vectors.
//!
//! `symmetrize` maps `x` of length n to `(x[0], ..., x[n-1], conj(x[n-1]), ..., conj(x[1]))`
//! of length 2n-1, which is invariant under conjugation followed by time
//! reversal exactly when `x[0]` is real. The padded variants first extend `x`
//! with zeros so that the embedded vector carries an isolated copy of the
//! signal:
//!
//! * variant A symmetrizes `(x, 0_{n-1})` into length 4n-3 and requires a real
//!   leading entry;
//! * variant B symmetrizes `(0, x, 0_{n-2})` shifted so that no entry of `x`
//!   is pinned to the real axis, giving length 4n-1 and accepting any `x`.
//!
//! Both variants place data plus mirrored copy in one contiguous cyclic block
//! whose geometry is exposed through [`Variant::block_start`] and
//! [`Variant::block_len`]; the recovery pipeline relies on those offsets.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::algebra::{self, l2_norm};
use crate::error::{Error, Result};

/// Relative tolerance for the real-leading-entry precondition of variant A.
pub const LEADING_IMAG_TOL: f64 = 1e-12;

/// Zero-padded measurement variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Length 4n-3; requires `Im(x[0]) = 0`.
    A,
    /// Length 4n-1; accepts arbitrary complex vectors.
    B,
}

impl Variant {
    /// Length of the symmetrized, zero-padded vector for a signal of length `n`.
    pub fn measured_len(self, n: usize) -> usize {
        match self {
            Variant::A => 4 * n - 3,
            Variant::B => 4 * n - 1,
        }
    }

    /// Length of the contiguous cyclic block holding data plus mirror copy.
    pub fn block_len(self, n: usize) -> usize {
        match self {
            Variant::A => 2 * n - 1,
            Variant::B => 2 * n,
        }
    }

    /// Start offset of that block inside the symmetrized vector.
    pub fn block_start(self, n: usize) -> usize {
        match self {
            // Data occupies 0..n-1 and mirrors occupy 3n-2..4n-4, so the
            // cyclic block starts at 3n-2 and wraps around index 0.
            Variant::A => (3 * n - 2) % self.measured_len(n),
            Variant::B => n,
        }
    }

    /// The [`SymmetryKind`] tag produced by this variant's embedding.
    pub fn kind(self) -> SymmetryKind {
        match self {
            Variant::A => SymmetryKind::PaddedA,
            Variant::B => SymmetryKind::PaddedB,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::A => write!(f, "A"),
            Variant::B => write!(f, "B"),
        }
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Variant::A),
            "B" | "b" => Ok(Variant::B),
            other => Err(Error::Parse(format!(
                "unknown variant {other:?}; expected \"A\" or \"B\""
            ))),
        }
    }
}

/// How a [`SymmetrizedVector`] was produced from its originating signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryKind {
    /// Plain symmetrization, length 2n-1.
    Plain,
    /// Variant A zero padding, length 4n-3.
    PaddedA,
    /// Variant B zero padding, length 4n-1.
    PaddedB,
}

impl SymmetryKind {
    pub fn expected_len(self, n: usize) -> usize {
        match self {
            SymmetryKind::Plain => 2 * n - 1,
            SymmetryKind::PaddedA => 4 * n - 3,
            SymmetryKind::PaddedB => 4 * n - 1,
        }
    }

    pub fn variant(self) -> Option<Variant> {
        match self {
            SymmetryKind::Plain => None,
            SymmetryKind::PaddedA => Some(Variant::A),
            SymmetryKind::PaddedB => Some(Variant::B),
        }
    }
}

/// A symmetrized embedding together with the metadata needed to undo it.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetrizedVector {
    entries: Vec<Complex64>,
    kind: SymmetryKind,
    origin_n: usize,
}

impl SymmetrizedVector {
    /// Reassembles a symmetrized vector from raw entries, checking only the
    /// length contract; the entries themselves may be approximately symmetric
    /// (e.g. an iterate of an alternating scheme).
    pub fn from_parts(
        entries: Vec<Complex64>,
        kind: SymmetryKind,
        origin_n: usize,
    ) -> Result<Self> {
        if origin_n == 0 {
            return Err(Error::EmptyInput);
        }
        let expected = kind.expected_len(origin_n);
        if entries.len() != expected {
            return Err(Error::VariantMismatch {
                expected,
                actual: entries.len(),
            });
        }
        Ok(SymmetrizedVector {
            entries,
            kind,
            origin_n,
        })
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    pub fn kind(&self) -> SymmetryKind {
        self.kind
    }

    /// Length of the originating signal.
    pub fn origin_n(&self) -> usize {
        self.origin_n
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Recovers the originating signal. The two redundant copies of each entry
    /// are averaged, `x[i] <- (s[i] + conj(s[mirror(i)])) / 2`, so the result
    /// is exact for vectors built by the `symmetrize*` constructors and is the
    /// natural projection for approximately symmetric input. Positions that
    /// are their own mirror (the leading entry of plain/variant-A embeddings)
    /// come out exactly real.
    pub fn extract(&self) -> Vec<Complex64> {
        let v = &self.entries;
        let m = v.len();
        let n = self.origin_n;
        match self.kind {
            SymmetryKind::Plain | SymmetryKind::PaddedA => (0..n)
                .map(|i| {
                    let mirror = (m - i) % m;
                    0.5 * (v[i] + v[mirror].conj())
                })
                .collect(),
            SymmetryKind::PaddedB => (0..n)
                .map(|i| 0.5 * (v[n + i] + v[3 * n - 1 - i].conj()))
                .collect(),
        }
    }
}

/// Plain symmetrization `S(x) = (x, conj(x) reversed)` of length 2n-1.
pub fn symmetrize(x: &[Complex64]) -> Result<SymmetrizedVector> {
    algebra::ensure_nonempty(x)?;
    algebra::ensure_finite(x)?;
    let n = x.len();
    let mut entries = Vec::with_capacity(2 * n - 1);
    entries.extend_from_slice(x);
    for i in (1..n).rev() {
        entries.push(x[i].conj());
    }
    Ok(SymmetrizedVector {
        entries,
        kind: SymmetryKind::Plain,
        origin_n: n,
    })
}

/// Variant A: plain symmetrization of `(x, 0_{n-1})`, length 4n-3. Requires
/// `|Im(x[0])| <= LEADING_IMAG_TOL * ||x||`.
pub fn symmetrize_padded_a(x: &[Complex64]) -> Result<SymmetrizedVector> {
    algebra::ensure_nonempty(x)?;
    algebra::ensure_finite(x)?;
    let tol = LEADING_IMAG_TOL * l2_norm(x);
    if x[0].im.abs() > tol {
        return Err(Error::NonRealLeadingEntry {
            imag: x[0].im.abs(),
            tol,
        });
    }
    let n = x.len();
    let mut padded = x.to_vec();
    padded.resize(2 * n - 1, Complex64::new(0.0, 0.0));
    let plain = symmetrize(&padded)?;
    Ok(SymmetrizedVector {
        entries: plain.entries,
        kind: SymmetryKind::PaddedA,
        origin_n: n,
    })
}

/// Variant B: `(0_n, x, conj(x) reversed, 0_{n-1})`, length 4n-1. Total on
/// nonempty finite input.
pub fn symmetrize_padded_b(x: &[Complex64]) -> Result<SymmetrizedVector> {
    algebra::ensure_nonempty(x)?;
    algebra::ensure_finite(x)?;
    let n = x.len();
    let mut entries = vec![Complex64::new(0.0, 0.0); 4 * n - 1];
    for (i, &z) in x.iter().enumerate() {
        entries[n + i] = z;
        entries[3 * n - 1 - i] = z.conj();
    }
    Ok(SymmetrizedVector {
        entries,
        kind: SymmetryKind::PaddedB,
        origin_n: n,
    })
}

/// Dispatches to [`symmetrize_padded_a`] or [`symmetrize_padded_b`].
pub fn symmetrize_padded(x: &[Complex64], variant: Variant) -> Result<SymmetrizedVector> {
    match variant {
        Variant::A => symmetrize_padded_a(x),
        Variant::B => symmetrize_padded_b(x),
    }
}

/// True when `v` equals the conjugate of its own time reversal within
/// `tol * ||v||` (absolute `tol` for the zero vector).
pub fn is_conjugate_symmetric(v: &[Complex64], tol: f64) -> bool {
    let n = v.len();
    let err: f64 = (0..n)
        .map(|k| (v[k] - v[(n - k) % n].conj()).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let nrm = l2_norm(v);
    err <= tol * if nrm == 0.0 { 1.0 } else { nrm }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn plain_symmetrization_layout() {
        // S((1, i)) = (1, i, -i).
        let s = symmetrize(&[c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert_eq!(s.entries(), &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)]);
        assert_eq!(s.len(), 3);
        assert_eq!(s.origin_n(), 2);
        assert_eq!(s.kind(), SymmetryKind::Plain);
    }

    #[test]
    fn variant_a_layout_for_n2() {
        // S_z((1, 1)) = (1, 1, 0, 0, 1) with n~ = 5.
        let s = symmetrize_padded_a(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(
            s.entries(),
            &[
                c(1.0, 0.0),
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(1.0, 0.0)
            ]
        );
        assert!(is_conjugate_symmetric(s.entries(), 0.0));
    }

    #[test]
    fn variant_b_layout_for_n2() {
        // (0, 0, x0, x1, conj(x1), conj(x0), 0) with n~ = 7.
        let x = [c(1.0, 2.0), c(3.0, -4.0)];
        let s = symmetrize_padded_b(&x).unwrap();
        assert_eq!(
            s.entries(),
            &[
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(1.0, 2.0),
                c(3.0, -4.0),
                c(3.0, 4.0),
                c(1.0, -2.0),
                c(0.0, 0.0)
            ]
        );
        assert!(is_conjugate_symmetric(s.entries(), 1e-15));
    }

    #[test]
    fn measured_lengths_and_blocks() {
        for n in 1..40 {
            assert_eq!(Variant::A.measured_len(n), 4 * n - 3);
            assert_eq!(Variant::B.measured_len(n), 4 * n - 1);
            assert_eq!(Variant::A.block_len(n), 2 * n - 1);
            assert_eq!(Variant::B.block_len(n), 2 * n);
            // The block must cover exactly the nonzero positions of a generic
            // symmetrized vector.
            let x: Vec<Complex64> = (0..n).map(|i| c(1.0 + i as f64, 0.0)).collect();
            for variant in [Variant::A, Variant::B] {
                let s = symmetrize_padded(&x, variant).unwrap();
                let m = s.len();
                let start = variant.block_start(n);
                let inside: Vec<usize> =
                    (0..variant.block_len(n)).map(|j| (start + j) % m).collect();
                for k in 0..m {
                    if !inside.contains(&k) {
                        assert_eq!(
                            s.entries()[k],
                            c(0.0, 0.0),
                            "variant {variant}, n={n}, k={k}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn variant_a_rejects_complex_leading_entry() {
        let err = symmetrize_padded_a(&[c(0.0, 1.0), c(1.0, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::NonRealLeadingEntry { .. }));
        // Variant B accepts the same vector.
        assert!(symmetrize_padded_b(&[c(0.0, 1.0), c(1.0, 0.0)]).is_ok());
        // A tiny imaginary component within tolerance passes.
        assert!(symmetrize_padded_a(&[c(1.0, 1e-14), c(1.0, 0.0)]).is_ok());
    }

    #[test]
    fn extract_inverts_padded_embeddings() {
        let x = vec![c(0.5, 0.0), c(-1.25, 2.0), c(3.0, -0.125)];
        let back_a = symmetrize_padded_a(&x).unwrap().extract();
        assert_eq!(back_a, x);
        let x_complex = vec![c(0.5, -7.0), c(-1.25, 2.0), c(3.0, -0.125)];
        let back_b = symmetrize_padded_b(&x_complex).unwrap().extract();
        assert_eq!(back_b, x_complex);
    }

    #[test]
    fn extract_averages_asymmetric_input() {
        // Perturb one mirror copy; extract must average the two copies.
        let x = vec![c(1.0, 0.0), c(2.0, 1.0)];
        let mut entries = symmetrize_padded_a(&x).unwrap().into_entries();
        // x[1] has copies at positions 1 and 4; nudge position 4.
        entries[4] += c(0.0, 0.2);
        let s = SymmetrizedVector::from_parts(entries, SymmetryKind::PaddedA, 2).unwrap();
        let got = s.extract();
        assert_eq!(got[0], c(1.0, 0.0));
        assert!((got[1] - c(2.0, 1.0 - 0.1)).norm() < 1e-15);
    }

    #[test]
    fn from_parts_checks_length() {
        let err = SymmetrizedVector::from_parts(vec![c(0.0, 0.0); 6], SymmetryKind::PaddedA, 2)
            .unwrap_err();
        assert!(matches!(
            err,
            Error::VariantMismatch {
                expected: 5,
                actual: 6
            }
        ));
    }

    #[test]
    fn symmetry_test_detects_asymmetry() {
        assert!(is_conjugate_symmetric(
            &[c(2.0, 0.0), c(1.0, 1.0), c(1.0, -1.0)],
            1e-15
        ));
        assert!(!is_conjugate_symmetric(
            &[c(2.0, 0.0), c(1.0, 1.0), c(1.0, 1.0)],
            1e-6
        ));
        // Zero vector is symmetric.
        assert!(is_conjugate_symmetric(&[c(0.0, 0.0); 5], 1e-15));
    }

    #[test]
    fn single_entry_signals_are_handled() {
        let x = [c(2.5, 0.0)];
        let sa = symmetrize_padded_a(&x).unwrap();
        assert_eq!(sa.entries(), &[c(2.5, 0.0)]);
        assert_eq!(sa.extract(), x);
        let sb = symmetrize_padded_b(&x).unwrap();
        assert_eq!(sb.entries(), &[c(0.0, 0.0), c(2.5, 0.0), c(2.5, 0.0)]);
        assert_eq!(sb.extract(), x);
    }
}
