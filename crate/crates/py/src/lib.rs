//! Python bindings: thin functional wrappers over the library. Complex
//! vectors cross the boundary as lists of Python complex numbers, reports
//! come back as dicts, and library errors surface as `ValueError` whose
//! message starts with the error name.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: symphase::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_variant(label: &str) -> PyResult<symphase::Variant> {
    label.parse::<symphase::Variant>().map_err(err)
}

fn rebuild_measurement(
    intensities: Vec<f64>,
    variant: &str,
    n: usize,
    noise_sigma: f64,
) -> PyResult<symphase::MeasurementVector> {
    symphase::MeasurementVector::new(intensities, parse_variant(variant)?, n, noise_sigma)
        .map_err(err)
}

fn recovery_dict(py: Python<'_>, r: symphase::RecoveryResult) -> PyResult<Py<PyDict>> {
    let d = PyDict::new(py);
    d.set_item("estimate", r.estimate)?;
    d.set_item("residual", r.residual)?;
    d.set_item("method", r.method.to_string())?;
    d.set_item("iterations", r.iterations)?;
    d.set_item("sign_convention", r.sign_convention)?;
    Ok(d.into())
}

/// Unitary discrete Fourier transform.
#[pyfunction]
fn dft(x: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
    symphase::dft(&x).map_err(err)
}

/// Inverse of [`dft`].
#[pyfunction]
fn idft(x: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
    symphase::idft(&x).map_err(err)
}

/// Circular convolution of equal-length vectors.
#[pyfunction]
fn circ_conv(x: Vec<Complex64>, y: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
    symphase::circ_conv(&x, &y).map_err(err)
}

/// Circular correlation of equal-length vectors.
#[pyfunction]
fn circ_corr(x: Vec<Complex64>, y: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
    symphase::circ_corr(&x, &y).map_err(err)
}

/// Modular time reversal `x[-t]`.
#[pyfunction]
fn time_reverse(x: Vec<Complex64>) -> Vec<Complex64> {
    symphase::time_reverse(&x)
}

/// Cyclic shift by `shift` positions (negative shifts go backwards).
#[pyfunction]
fn cyclic_shift(x: Vec<Complex64>, shift: i64) -> Vec<Complex64> {
    symphase::cyclic_shift(&x, shift)
}

/// Euclidean distance between `a` and `b` minimized over the global sign.
#[pyfunction]
fn dist_up_to_sign(a: Vec<Complex64>, b: Vec<Complex64>) -> PyResult<f64> {
    symphase::dist_up_to_sign(&a, &b).map_err(err)
}

/// Zero-padded conjugate-symmetric embedding of `x` ("A" or "B").
#[pyfunction]
fn symmetrize(x: Vec<Complex64>, variant: &str) -> PyResult<Vec<Complex64>> {
    Ok(symphase::symmetrize_padded(&x, parse_variant(variant)?)
        .map_err(err)?
        .into_entries())
}

/// Inverse of [`symmetrize`]: the original `n` entries of an embedding.
#[pyfunction]
fn extract(s: Vec<Complex64>, variant: &str, n: usize) -> PyResult<Vec<Complex64>> {
    let kind = match parse_variant(variant)? {
        symphase::Variant::A => symphase::SymmetryKind::PaddedA,
        symphase::Variant::B => symphase::SymmetryKind::PaddedB,
    };
    Ok(symphase::SymmetrizedVector::from_parts(s, kind, n)
        .map_err(err)?
        .extract())
}

/// Intensities of the symmetrized embedding: `|F S x|^2`.
#[pyfunction]
fn measure(x: Vec<Complex64>, variant: &str) -> PyResult<Vec<f64>> {
    Ok(symphase::measure(&x, parse_variant(variant)?)
        .map_err(err)?
        .intensities()
        .to_vec())
}

/// Seeded noise on a measurement; `kind` is "intensity" or "field".
#[pyfunction]
#[pyo3(signature = (intensities, variant, n, sigma, seed, kind = "intensity"))]
fn add_noise(
    intensities: Vec<f64>,
    variant: &str,
    n: usize,
    sigma: f64,
    seed: u64,
    kind: &str,
) -> PyResult<Vec<f64>> {
    let kind = match kind {
        "intensity" => symphase::NoiseKind::Intensity,
        "field" => symphase::NoiseKind::Field,
        other => {
            return Err(PyValueError::new_err(format!(
                "noise kind must be \"intensity\" or \"field\", got {other:?}"
            )))
        }
    };
    let m = rebuild_measurement(intensities, variant, n, 0.0)?;
    let model = symphase::NoiseModel { kind, sigma, seed };
    Ok(symphase::add_noise(&m, &model).intensities().to_vec())
}

/// Cyclic autocorrelation of the embedding, recovered from intensities.
#[pyfunction]
fn autocorrelation(intensities: Vec<f64>, variant: &str, n: usize) -> PyResult<Vec<Complex64>> {
    let m = rebuild_measurement(intensities, variant, n, 0.0)?;
    Ok(symphase::measurement::autocorrelation_from(&m))
}

/// Direct recovery (spectral square root plus polish) from intensities.
#[pyfunction]
#[pyo3(signature = (intensities, variant, n, noise_sigma = 0.0, strict = false, tol = None))]
fn recover_direct(
    py: Python<'_>,
    intensities: Vec<f64>,
    variant: &str,
    n: usize,
    noise_sigma: f64,
    strict: bool,
    tol: Option<f64>,
) -> PyResult<Py<PyDict>> {
    let m = rebuild_measurement(intensities, variant, n, noise_sigma)?;
    let mut opts = symphase::DirectOptions::default();
    if strict {
        opts.fallback = false;
    }
    if let Some(tol) = tol {
        opts.square_tol = tol;
    }
    let r = symphase::recover_direct_with(&m, &opts).map_err(err)?;
    recovery_dict(py, r)
}

/// Alternating-projection recovery from intensities; `seed` switches the
/// all-plus start to random signs.
#[pyfunction]
#[pyo3(signature = (intensities, variant, n, noise_sigma = 0.0, max_iter = 200, tol = 1e-12, seed = None))]
#[allow(clippy::too_many_arguments)]
fn recover_alternating(
    py: Python<'_>,
    intensities: Vec<f64>,
    variant: &str,
    n: usize,
    noise_sigma: f64,
    max_iter: usize,
    tol: f64,
    seed: Option<u64>,
) -> PyResult<Py<PyDict>> {
    let m = rebuild_measurement(intensities, variant, n, noise_sigma)?;
    let opts = symphase::AlternatingOptions {
        max_iter,
        tol,
        init: match seed {
            Some(s) => symphase::AltInit::RandomSigns(s),
            None => symphase::AltInit::AllPlus,
        },
    };
    let r = symphase::recover_alternating(&m, &opts).map_err(err)?;
    recovery_dict(py, r)
}

/// Polynomial square root: `p` with `p * p = c`, up to global sign.
#[pyfunction]
#[pyo3(signature = (c, tol = None))]
fn poly_sqrt(c: Vec<Complex64>, tol: Option<f64>) -> PyResult<Vec<Complex64>> {
    symphase::poly_sqrt(&c, tol.unwrap_or(symphase::DEFAULT_SQUARE_TOL)).map_err(err)
}

/// Restricted minimal convolution norm over unit vectors with support sizes
/// `(s, f)` in dimension `n`.
#[pyfunction]
#[pyo3(signature = (s, f, n, restarts = 32, seed = 0))]
fn estimate_alpha(
    py: Python<'_>,
    s: usize,
    f: usize,
    n: usize,
    restarts: usize,
    seed: u64,
) -> PyResult<Py<PyDict>> {
    let est = symphase::estimate_alpha(s, f, n, restarts, seed).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("s", est.s)?;
    d.set_item("f", est.f)?;
    d.set_item("n", est.n)?;
    d.set_item("alpha", est.alpha)?;
    d.set_item("trials", est.trials)?;
    d.set_item("converged", est.converged)?;
    d.set_item("exhaustive", est.exhaustive)?;
    d.set_item("best_x", est.best_x)?;
    d.set_item("best_y", est.best_y)?;
    Ok(d.into())
}

/// Sampled stability ratios of the measurement map (see the library's
/// `verify_stability_inequality`).
#[pyfunction]
#[pyo3(signature = (variant, n, pairs = 1000, c_lower = 0.0, seed = 0))]
fn verify_stability(
    py: Python<'_>,
    variant: &str,
    n: usize,
    pairs: usize,
    c_lower: f64,
    seed: u64,
) -> PyResult<Py<PyDict>> {
    let rep =
        symphase::verify_stability_inequality(parse_variant(variant)?, n, pairs, c_lower, seed)
            .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("variant", rep.variant.to_string())?;
    d.set_item("n", rep.n)?;
    d.set_item("num_pairs", rep.num_pairs)?;
    d.set_item("c_lower", rep.c_lower)?;
    d.set_item("violations", rep.violations)?;
    d.set_item("min_ratio", rep.min_ratio)?;
    d.set_item("max_ratio", rep.max_ratio)?;
    d.set_item("mean_ratio", rep.mean_ratio)?;
    d.set_item("seed", rep.seed)?;
    Ok(d.into())
}

#[pymodule]
fn symphase_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(dft, m)?)?;
    m.add_function(wrap_pyfunction!(idft, m)?)?;
    m.add_function(wrap_pyfunction!(circ_conv, m)?)?;
    m.add_function(wrap_pyfunction!(circ_corr, m)?)?;
    m.add_function(wrap_pyfunction!(time_reverse, m)?)?;
    m.add_function(wrap_pyfunction!(cyclic_shift, m)?)?;
    m.add_function(wrap_pyfunction!(dist_up_to_sign, m)?)?;
    m.add_function(wrap_pyfunction!(symmetrize, m)?)?;
    m.add_function(wrap_pyfunction!(extract, m)?)?;
    m.add_function(wrap_pyfunction!(measure, m)?)?;
    m.add_function(wrap_pyfunction!(add_noise, m)?)?;
    m.add_function(wrap_pyfunction!(autocorrelation, m)?)?;
    m.add_function(wrap_pyfunction!(recover_direct, m)?)?;
    m.add_function(wrap_pyfunction!(recover_alternating, m)?)?;
    m.add_function(wrap_pyfunction!(poly_sqrt, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(verify_stability, m)?)?;
    Ok(())
}
