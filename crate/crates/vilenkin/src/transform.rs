//! The Vilenkin-Fourier transform: direct summation and a fast
//! mixed-radix factorization.
//!
//! The transform pair at resolution `N` is
//!
//! ```text
//! analyze:     c_n = (1/M_N) sum_x f(x) conj(psi_n(x))
//! synthesize:  f(x) = sum_n c_n psi_n(x)
//! ```
//!
//! The direct routines evaluate these sums literally in `O(M_N^2)` work and
//! serve as the oracle.  The fast routines factor the sum through one
//! small DFT per coordinate — `O(M_N * sum_k m_k)` work — exploiting that
//! `psi_n` is a product of per-digit roots of unity.  On the lexicographic
//! point grid each stage acts along one digit axis; the final pass converts
//! between the point layout (digit 0 slowest) and the frequency layout
//! (digit 0 least significant), which are digit-reversals of each other.
//!
//! On Walsh groups all stages are `(a+b, a-b)` butterflies, so integer
//! inputs stay integers; `walsh_analyze_exact` / `walsh_synthesize_exact`
//! expose that path in exact `i64` arithmetic (the analyzer returns the
//! *unnormalized* sums `M_N c_n`, which are always integers).

use num_complex::Complex64;

use crate::characters::{character_row, unit_roots};
use crate::error::{Error, Result};
use crate::group::GeneratorSequence;
use crate::step::{Spectrum, StepFunction};

/// Direct `O(M^2)` analyzer: literal inner products with every character.
pub fn analyze_direct(f: &StepFunction) -> Spectrum {
    let gen = f.generator();
    let resolution = f.resolution();
    let total = f.len();
    let coefficients = (0..total)
        .map(|n| {
            let row = character_row(gen, n, resolution).expect("n < M_N by construction");
            let sum: Complex64 = f
                .values()
                .iter()
                .zip(&row)
                .map(|(&v, &psi)| v * psi.conj())
                .sum();
            sum / total as f64
        })
        .collect();
    Spectrum::new(gen, resolution, coefficients).expect("length M_N by construction")
}

/// Direct `O(M^2)` synthesizer: literal character sums.
pub fn synthesize_direct(spectrum: &Spectrum) -> StepFunction {
    let gen = spectrum.generator();
    let resolution = spectrum.resolution();
    let total = spectrum.len();
    let mut values = vec![Complex64::new(0.0, 0.0); total];
    for (n, &c) in spectrum.coefficients().iter().enumerate() {
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let row = character_row(gen, n, resolution).expect("n < M_N by construction");
        for (v, &psi) in values.iter_mut().zip(&row) {
            *v += c * psi;
        }
    }
    StepFunction::new(gen, resolution, values).expect("length M_N by construction")
}

/// Fast analyzer; agrees with [`analyze_direct`] to rounding error.
pub fn analyze(f: &StepFunction) -> Spectrum {
    let gen = f.generator();
    let resolution = f.resolution();
    let total = f.len();
    let mut data = f.values().to_vec();
    dft_stages(gen, resolution, &mut data, Direction::Forward);
    // data is indexed by frequency digits in point layout; reorder to the
    // generalized number system and apply the 1/M normalization.
    let perm = layout_permutation(gen, resolution);
    let mut coefficients = vec![Complex64::new(0.0, 0.0); total];
    let scale = 1.0 / total as f64;
    for (i, &freq) in perm.iter().enumerate() {
        coefficients[freq] = data[i] * scale;
    }
    Spectrum::new(gen, resolution, coefficients).expect("length M_N by construction")
}

/// Fast synthesizer; agrees with [`synthesize_direct`] to rounding error.
pub fn synthesize(spectrum: &Spectrum) -> StepFunction {
    let gen = spectrum.generator();
    let resolution = spectrum.resolution();
    let perm = layout_permutation(gen, resolution);
    let mut data: Vec<Complex64> = perm
        .iter()
        .map(|&freq| spectrum.coefficient(freq))
        .collect();
    dft_stages(gen, resolution, &mut data, Direction::Inverse);
    StepFunction::new(gen, resolution, data).expect("length M_N by construction")
}

/// The partial sum `S_n f = sum_{k < n} c_k psi_k`, with `S_0 f = 0`.
///
/// For `n >= M_N` every remaining coefficient vanishes, so `S_n f = f`.
pub fn partial_sum(f: &StepFunction, n: usize) -> Result<StepFunction> {
    if n >= f.len() {
        return Ok(f.clone());
    }
    let spectrum = analyze(f);
    let mut truncated = spectrum.coefficients().to_vec();
    for c in truncated.iter_mut().skip(n) {
        *c = Complex64::new(0.0, 0.0);
    }
    let spectrum = Spectrum::new(f.generator(), f.resolution(), truncated)?;
    Ok(synthesize(&spectrum))
}

/// Convolution `(f * g)(x) = (1/M_N) sum_t f(t) g(x - t)`, the discrete
/// form of the Haar-measure convolution integral.
pub fn convolve(f: &StepFunction, g: &StepFunction) -> Result<StepFunction> {
    if f.generator() != g.generator() {
        return Err(Error::StructureMismatch(
            "convolution requires functions on the same group".into(),
        ));
    }
    if f.resolution() != g.resolution() {
        return Err(Error::Resolution(format!(
            "convolution requires equal resolutions, got {} and {}",
            f.resolution(),
            g.resolution()
        )));
    }
    let gen = f.generator();
    let resolution = f.resolution();
    let total = f.len();
    let scale = 1.0 / total as f64;
    let values = (0..total)
        .map(|x| {
            let sum: Complex64 = (0..total)
                .map(|t| f.value(t) * g.value(gen.point_sub(x, t, resolution)))
                .sum();
            sum * scale
        })
        .collect();
    StepFunction::new(gen, resolution, values)
}

/// Exact Walsh analyzer: returns the unnormalized integer coefficient
/// sums `M_N c_n = sum_x f(x) psi_n(x)`, indexed by frequency.
pub fn walsh_analyze_exact(
    gen: &GeneratorSequence,
    resolution: usize,
    values: &[i64],
) -> Result<Vec<i64>> {
    let mut data = check_walsh_args(gen, resolution, values)?;
    walsh_stages(&mut data);
    let perm = layout_permutation(gen, resolution);
    let mut out = vec![0i64; data.len()];
    for (i, &freq) in perm.iter().enumerate() {
        out[freq] = data[i];
    }
    Ok(out)
}

/// Exact Walsh synthesizer: `f(x) = sum_n c_n psi_n(x)` for integer
/// coefficients indexed by frequency.  Composing with
/// [`walsh_analyze_exact`] multiplies by `M_N`.
pub fn walsh_synthesize_exact(
    gen: &GeneratorSequence,
    resolution: usize,
    coefficients: &[i64],
) -> Result<Vec<i64>> {
    check_walsh_args(gen, resolution, coefficients)?;
    let perm = layout_permutation(gen, resolution);
    let mut data: Vec<i64> = perm.iter().map(|&freq| coefficients[freq]).collect();
    // Walsh characters are real, so the forward and inverse butterflies
    // coincide; only the normalization differs, and this entry point is
    // deliberately unnormalized.
    walsh_stages(&mut data);
    Ok(data)
}

#[derive(Clone, Copy, PartialEq)]
enum Direction {
    Forward,
    Inverse,
}

/// Applies one small DFT along every digit axis of the lexicographic grid.
/// `Forward` uses conjugated roots (analysis), `Inverse` plain roots.
fn dft_stages(
    gen: &GeneratorSequence,
    resolution: usize,
    data: &mut [Complex64],
    direction: Direction,
) {
    let total = data.len();
    let mut stride = total;
    let mut scratch = vec![Complex64::new(0.0, 0.0); gen.max_radix()];
    for k in 0..resolution {
        let m = gen.radix(k);
        let span = stride;
        stride /= m;
        let roots = unit_roots(m);
        for base in (0..total).step_by(span) {
            for lo in 0..stride {
                let start = base + lo;
                for (d, slot) in scratch[..m].iter_mut().enumerate() {
                    *slot = data[start + d * stride];
                }
                for out_digit in 0..m {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (d, &v) in scratch[..m].iter().enumerate() {
                        let mut root = roots[(out_digit * d) % m];
                        if direction == Direction::Forward {
                            root = root.conj();
                        }
                        acc += v * root;
                    }
                    data[start + out_digit * stride] = acc;
                }
            }
        }
    }
}

/// Radix-2 butterflies along every axis, in exact integer arithmetic.
fn walsh_stages(data: &mut [i64]) {
    let total = data.len();
    let mut stride = total;
    while stride > 1 {
        let span = stride;
        stride /= 2;
        for base in (0..total).step_by(span) {
            for lo in 0..stride {
                let a = data[base + lo];
                let b = data[base + lo + stride];
                data[base + lo] = a + b;
                data[base + lo + stride] = a - b;
            }
        }
    }
}

/// For each lexicographic point-layout index, the frequency index carrying
/// the same digit vector: `perm[sum d_k W_k] = sum d_k M_k`.
fn layout_permutation(gen: &GeneratorSequence, resolution: usize) -> Vec<usize> {
    let total = gen.cardinality(resolution);
    let mut perm = vec![0usize; total];
    // Odometer over digits, least-significant position (digit N-1) fastest,
    // mirroring lexicographic point order.
    let mut digits = vec![0usize; resolution];
    let mut freq = 0usize;
    for slot in perm.iter_mut() {
        *slot = freq;
        for k in (0..resolution).rev() {
            digits[k] += 1;
            if digits[k] < gen.radix(k) {
                freq += gen.cardinality(k);
                break;
            }
            digits[k] = 0;
            freq -= (gen.radix(k) - 1) * gen.cardinality(k);
        }
    }
    perm
}

fn check_walsh_args(
    gen: &GeneratorSequence,
    resolution: usize,
    values: &[i64],
) -> Result<Vec<i64>> {
    if !gen.is_walsh() {
        return Err(Error::Domain(
            "exact integer transforms require every radix to equal 2".into(),
        ));
    }
    if resolution == 0 || resolution > gen.depth() {
        return Err(Error::Resolution(format!(
            "resolution {resolution} outside 1..={}",
            gen.depth()
        )));
    }
    let expected = gen.cardinality(resolution);
    if values.len() != expected {
        return Err(Error::StructureMismatch(format!(
            "resolution {resolution} needs {expected} values, got {}",
            values.len()
        )));
    }
    Ok(values.to_vec())
}
