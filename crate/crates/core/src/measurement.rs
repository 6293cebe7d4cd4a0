//! Magnitude-squared Fourier measurements of symmetrized, zero-padded signals.
//!
//! Because the symmetrized vector is conjugate-symmetric, its spectrum is
//! real, so the squared magnitudes determine that spectrum up to a sign per
//! bin — the source of the global sign ambiguity in recovery. The inverse DFT
//! of the intensity vector is exactly the cyclic autocorrelation of the
//! embedded signal (Wiener–Khinchin on the cyclic group), which is what the
//! direct recovery path factorizes.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra;
use crate::error::{Error, Result};
use crate::symmetrization::{symmetrize_padded, Variant};

/// Noise placement for [`add_noise`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    /// Additive Gaussian perturbation of each intensity, clipped at zero.
    Intensity,
    /// Complex Gaussian perturbation of the underlying field amplitude
    /// (the nonnegative root of each intensity) before squaring.
    Field,
}

/// Parameters of a noise draw. `sigma` is an absolute scale; `seed` fully
/// determines the perturbation.
#[derive(Debug, Clone, Copy)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    pub sigma: f64,
    pub seed: u64,
}

/// Intensities `|F s|^2` of a symmetrized embedding, plus provenance metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementVector {
    intensities: Vec<f64>,
    variant: Variant,
    origin_n: usize,
    noise_sigma: f64,
    clipped: usize,
}

impl MeasurementVector {
    /// Validating constructor for measurements coming from files or foreign
    /// code: length must match the variant geometry and entries must be
    /// finite and nonnegative.
    pub fn new(
        intensities: Vec<f64>,
        variant: Variant,
        origin_n: usize,
        noise_sigma: f64,
    ) -> Result<Self> {
        if origin_n == 0 {
            return Err(Error::EmptyInput);
        }
        let expected = variant.measured_len(origin_n);
        if intensities.len() != expected {
            return Err(Error::VariantMismatch {
                expected,
                actual: intensities.len(),
            });
        }
        if !intensities.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFiniteInput);
        }
        if let Some(bad) = intensities.iter().find(|&&v| v < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "intensities must be nonnegative, found {bad}"
            )));
        }
        if !noise_sigma.is_finite() || noise_sigma < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "noise sigma must be finite and nonnegative, got {noise_sigma}"
            )));
        }
        Ok(MeasurementVector {
            intensities,
            variant,
            origin_n,
            noise_sigma,
            clipped: 0,
        })
    }

    pub fn intensities(&self) -> &[f64] {
        &self.intensities
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Length of the signal the measurement was taken from.
    pub fn origin_n(&self) -> usize {
        self.origin_n
    }

    /// Noise scale recorded by the most recent [`add_noise`] (0 for clean data).
    pub fn noise_sigma(&self) -> f64 {
        self.noise_sigma
    }

    /// Number of entries clipped to zero by intensity noise.
    pub fn clipped(&self) -> usize {
        self.clipped
    }

    pub fn len(&self) -> usize {
        self.intensities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intensities.is_empty()
    }

    /// Sum of intensities; equals the squared norm of the embedded signal for
    /// clean measurements (Parseval).
    pub fn total_energy(&self) -> f64 {
        self.intensities.iter().sum()
    }

    /// Euclidean norm of the intensity vector.
    pub fn l2_norm(&self) -> f64 {
        self.intensities.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Euclidean distance to another measurement of identical geometry.
    pub fn l2_dist(&self, other: &MeasurementVector) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(self
            .intensities
            .iter()
            .zip(&other.intensities)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt())
    }
}

/// Measures `x` through the chosen variant: symmetrize with zero padding,
/// apply the unitary DFT, square the magnitudes.
pub fn measure(x: &[Complex64], variant: Variant) -> Result<MeasurementVector> {
    let s = symmetrize_padded(x, variant)?;
    let spectrum = algebra::dft(s.entries())?;
    let intensities = spectrum.iter().map(|z| z.norm_sqr()).collect();
    Ok(MeasurementVector {
        intensities,
        variant,
        origin_n: x.len(),
        noise_sigma: 0.0,
        clipped: 0,
    })
}

/// Returns a noisy copy of `m`. The draw is fully determined by
/// `model.seed`; `sigma = 0` returns `m` bit-for-bit unchanged.
pub fn add_noise(m: &MeasurementVector, model: &NoiseModel) -> MeasurementVector {
    if model.sigma == 0.0 {
        return m.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
    let mut clipped = 0;
    let intensities: Vec<f64> = match model.kind {
        NoiseKind::Intensity => m
            .intensities
            .iter()
            .map(|&v| {
                let g: f64 = rng.sample(StandardNormal);
                let noisy = v + model.sigma * g;
                if noisy < 0.0 {
                    clipped += 1;
                    0.0
                } else {
                    noisy
                }
            })
            .collect(),
        NoiseKind::Field => m
            .intensities
            .iter()
            .map(|&v| {
                let g_re: f64 = rng.sample(StandardNormal);
                let g_im: f64 = rng.sample(StandardNormal);
                let amp = v.sqrt();
                let field = Complex64::new(
                    amp + model.sigma * g_re * std::f64::consts::FRAC_1_SQRT_2,
                    model.sigma * g_im * std::f64::consts::FRAC_1_SQRT_2,
                );
                field.norm_sqr()
            })
            .collect(),
    };
    MeasurementVector {
        intensities,
        variant: m.variant,
        origin_n: m.origin_n,
        noise_sigma: model.sigma,
        clipped,
    }
}

/// Cyclic autocorrelation of the embedded signal, computed from intensities
/// alone: `a = sqrt(n~) * idft(m)`. For clean measurements this equals
/// `circ_corr(s, s)` of the symmetrized vector `s`.
pub fn autocorrelation_from(m: &MeasurementVector) -> Vec<Complex64> {
    let as_complex: Vec<Complex64> = m
        .intensities
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    let mut a = algebra::idft(&as_complex).expect("measurement invariant: finite, nonempty");
    let scale = (m.len() as f64).sqrt();
    for z in &mut a {
        *z *= scale;
    }
    a
}
