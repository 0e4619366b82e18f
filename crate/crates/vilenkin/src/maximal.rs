//! Weighted maximal operators and the strong-convergence experiments
//! built on them.
//!
//! The true maximal operators take a sup over all indices; here every sup
//! runs over an explicit finite range `1..=n_max` and boundedness is
//! probed by stability of the results as `n_max` grows.  The weighted
//! variant damps the mean of index `n` by `log2(n+1)^{1+alpha}`.  All
//! logarithms are base 2, matching the dyadic block structure of the
//! index sweeps.

use num_complex::Complex64;
use serde::Serialize;

use crate::analysis::{
    hardy_integral, lp_integral, make_atom, summability_mean, Atom, AtomProfile,
};
use crate::characters::character_row;
use crate::error::{Error, Result};
use crate::group::GeneratorSequence;
use crate::rng::SplitMix64;
use crate::step::StepFunction;
use crate::transform::analyze;
use crate::weights::{Verdict, WeightSequence};

/// Sweep window for a finite maximal operator.
#[derive(Debug, Clone, Copy)]
pub struct MaximalConfig {
    n_max: usize,
    alpha: f64,
}

impl MaximalConfig {
    pub fn new(n_max: usize, alpha: f64) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::OutOfRange("maximal sweep needs n_max >= 1".into()));
        }
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::Domain(format!(
                "weight exponent must be positive and finite, got {alpha}"
            )));
        }
        Ok(MaximalConfig { n_max, alpha })
    }

    /// Default window for a rank-`level` scale: `n_max = 4 * M_level`.
    pub fn standard(gen: &GeneratorSequence, level: usize, alpha: f64) -> Result<Self> {
        MaximalConfig::new(4 * gen.cardinality(level), alpha)
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Pointwise sups of a mean family over a finite index window.
#[derive(Debug, Clone)]
pub struct MaximalSweep {
    weighted: StepFunction,
    unweighted: StepFunction,
    argmax: Vec<usize>,
    skipped: usize,
    lo: usize,
    hi: usize,
    alpha: f64,
}

impl MaximalSweep {
    /// `sup_n |t_n f| / log2(n+1)^{1+alpha}` over the window, per cell.
    pub fn weighted(&self) -> &StepFunction {
        &self.weighted
    }

    /// `sup_n |t_n f|` over the window, per cell.
    pub fn unweighted(&self) -> &StepFunction {
        &self.unweighted
    }

    /// Per cell, the first index attaining the weighted sup.
    pub fn argmax(&self) -> &[usize] {
        &self.argmax
    }

    /// Indices skipped because the mean is undefined there (for example a
    /// zero normalizer).
    pub fn skipped(&self) -> usize {
        self.skipped
    }

    /// The swept window as `(lo, hi)`, inclusive.
    pub fn window(&self) -> (usize, usize) {
        (self.lo, self.hi)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Pointwise sup of `|t_n f| / log2(n+1)^{1+alpha}` over `lo <= n <= hi`,
/// alongside the unweighted sup and the per-cell argmax.
///
/// Indices where the mean is undefined (zero normalizer, or below the
/// first valid index of the family) are skipped and counted; the sweep
/// fails only if every index is skipped.
pub fn maximal_sweep(
    q: &WeightSequence,
    f: &StepFunction,
    alpha: f64,
    lo: usize,
    hi: usize,
) -> Result<MaximalSweep> {
    if lo < 1 || lo > hi {
        return Err(Error::OutOfRange(format!(
            "maximal sweep needs 1 <= lo <= hi, got {lo}..={hi}"
        )));
    }
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::Domain(format!(
            "weight exponent must be positive and finite, got {alpha}"
        )));
    }
    if q.n_max() + 1 < hi {
        return Err(Error::OutOfRange(format!(
            "weight sequence covers indices up to {}, sweep reaches {hi}",
            q.n_max()
        )));
    }
    let cells = f.len();
    let mut weighted = vec![0.0f64; cells];
    let mut unweighted = vec![0.0f64; cells];
    let mut argmax = vec![0usize; cells];
    let mut skipped = 0usize;
    let mut evaluated = 0usize;
    for n in lo..=hi {
        let mean = match summability_mean(q, n, f) {
            Ok(mean) => mean,
            Err(Error::DegenerateWeights(_)) | Err(Error::OutOfRange(_)) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        evaluated += 1;
        let damping = ((n + 1) as f64).log2().powf(1.0 + alpha);
        for (cell, value) in mean.values().iter().enumerate() {
            let magnitude = value.norm();
            if magnitude > unweighted[cell] {
                unweighted[cell] = magnitude;
            }
            let damped = magnitude / damping;
            if damped > weighted[cell] {
                weighted[cell] = damped;
                argmax[cell] = n;
            }
        }
    }
    if evaluated == 0 {
        return Err(Error::DegenerateWeights(format!(
            "every index in {lo}..={hi} was skipped for family {}",
            q.label()
        )));
    }
    Ok(MaximalSweep {
        weighted: StepFunction::from_real(f.generator(), f.resolution(), &weighted)?,
        unweighted: StepFunction::from_real(f.generator(), f.resolution(), &unweighted)?,
        argmax,
        skipped,
        lo,
        hi,
        alpha,
    })
}

/// The weighted maximal operator over the standard window `1..=n_max`.
pub fn weighted_maximal(
    q: &WeightSequence,
    f: &StepFunction,
    cfg: &MaximalConfig,
) -> Result<MaximalSweep> {
    maximal_sweep(q, f, cfg.alpha, 1, cfg.n_max)
}

/// `int_{complement of I_N} |sup-weighted mean of a|^{1/(1+alpha)} dmu`,
/// the tail integral of the weighted maximal function of an atom, with the
/// sup over `M_N < n <= n_max` (means at or below `M_N` annihilate the
/// atom, so the window starts past them).
///
/// The integral is an exact finite sum over the standard coset
/// decomposition of the complement of the support.
pub fn atom_tail_integral(
    gen: &GeneratorSequence,
    q: &WeightSequence,
    alpha: f64,
    atom: &Atom,
    n_max: usize,
) -> Result<f64> {
    let level = atom.level();
    let scale_point = gen.cardinality(level);
    if n_max <= scale_point {
        return Err(Error::OutOfRange(format!(
            "tail window is empty: n_max = {n_max} <= M_{level} = {scale_point}"
        )));
    }
    let sweep = maximal_sweep(q, atom.function(), alpha, scale_point + 1, n_max)?;
    let p = 1.0 / (1.0 + alpha);
    let resolution = atom.function().resolution();
    let cell_measure = 1.0 / atom.function().len() as f64;
    let mut total = 0.0f64;
    for coset in gen.complement_decomposition(level)? {
        for cell in coset.point_range(gen, resolution)? {
            total += sweep.weighted().value(cell).re.powf(p) * cell_measure;
        }
    }
    Ok(total)
}

/// Parameter grid for the atom tail-integral experiment.
#[derive(Debug, Clone)]
pub struct ExperimentGrid {
    /// Support ranks `N` to build atoms at.
    pub levels: Vec<usize>,
    /// Sweep tops as multiples of `M_N`.
    pub n_max_factors: Vec<usize>,
    /// Random atoms per level.
    pub atom_count: usize,
    /// Base seed; atom seeds are derived per (level, index).
    pub seed: u64,
    /// Atom exponent.
    pub p: f64,
}

/// One experiment measurement.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentRow {
    #[serde(rename = "N")]
    pub level: usize,
    pub n_max: usize,
    pub atom_seed: u64,
    pub value: f64,
}

/// Atom tail-integral experiment report: the per-row table and its max.
#[derive(Debug, Clone, Serialize)]
pub struct AtomIntegralReport {
    pub family: String,
    pub alpha: f64,
    pub p: f64,
    pub max_value: f64,
    pub table: Vec<ExperimentRow>,
    pub warnings: Vec<String>,
}

impl AtomIntegralReport {
    /// The rows as CSV with the experiment's column layout.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,n_max,atom_seed,value\n");
        for row in &self.table {
            out.push_str(&format!(
                "{},{},{},{}\n",
                row.level,
                row.n_max,
                row.atom_seed,
                crate::step::format_f64(row.value)
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Largest value among rows at the given level.
    pub fn level_max(&self, level: usize) -> Option<f64> {
        self.table
            .iter()
            .filter(|r| r.level == level)
            .map(|r| r.value)
            .fold(None, |best: Option<f64>, v| Some(best.map_or(v, |b| b.max(v))))
    }

    /// Largest value among rows at the given sweep top.
    pub fn n_max_max(&self, n_max: usize) -> Option<f64> {
        self.table
            .iter()
            .filter(|r| r.n_max == n_max)
            .map(|r| r.value)
            .fold(None, |best: Option<f64>, v| Some(best.map_or(v, |b| b.max(v))))
    }
}

/// Probes the atom-integral bound: for seeded random atoms at each level,
/// computes the tail integral of the weighted maximal function over the
/// complement of the support, sweeping `n_max` through the given
/// multiples of `M_N`.
///
/// Weight preconditions (non-increasing weights, normalizer growth,
/// increment decay) are probed empirically first; violations become
/// warnings and the experiment still runs as a negative control.
pub fn atom_integral_experiment(
    gen: &GeneratorSequence,
    q: &WeightSequence,
    alpha: f64,
    grid: &ExperimentGrid,
) -> Result<AtomIntegralReport> {
    if grid.levels.is_empty() || grid.n_max_factors.is_empty() || grid.atom_count == 0 {
        return Err(Error::Contract(
            "experiment grid needs at least one level, factor, and atom".into(),
        ));
    }
    let mut top = 0usize;
    for &level in &grid.levels {
        if level == 0 || level + 1 > gen.depth() {
            return Err(Error::OutOfRange(format!(
                "level {level} leaves no room for sub-cosets at depth {}",
                gen.depth()
            )));
        }
        let scale_point = gen.cardinality(level);
        for &factor in &grid.n_max_factors {
            if factor < 2 {
                return Err(Error::OutOfRange(
                    "sweep factors must be at least 2 so the tail window is nonempty".into(),
                ));
            }
            top = top.max(factor * scale_point);
        }
    }
    if q.n_max() + 1 < top {
        return Err(Error::OutOfRange(format!(
            "weight sequence covers indices up to {}, experiment reaches {top}",
            q.n_max()
        )));
    }
    let warnings = weight_precondition_warnings(q, alpha);
    let mut table = Vec::new();
    let mut max_value = 0.0f64;
    for &level in &grid.levels {
        let scale_point = gen.cardinality(level);
        for index in 0..grid.atom_count {
            let label = ((level as u64) << 32) | index as u64;
            let seed = SplitMix64::derive_seed(grid.seed, label);
            let atom = make_atom(gen, grid.p, level, AtomProfile::Random(seed))?;
            for &factor in &grid.n_max_factors {
                let n_max = factor * scale_point;
                let value = atom_tail_integral(gen, q, alpha, &atom, n_max)?;
                max_value = max_value.max(value);
                table.push(ExperimentRow {
                    level,
                    n_max,
                    atom_seed: seed,
                    value,
                });
            }
        }
    }
    Ok(AtomIntegralReport {
        family: q.label().to_string(),
        alpha,
        p: grid.p,
        max_value,
        table,
        warnings,
    })
}

/// Empirical checks of the hypotheses the atom-integral bound rests on:
/// non-increasing weights, bounded normalizer growth, and increment decay.
/// Returns human-readable warnings for whichever fail; empty means all
/// probes passed or the sequence is too short to probe.
pub fn weight_precondition_warnings(q: &WeightSequence, alpha: f64) -> Vec<String> {
    let mut warnings = Vec::new();
    if !q.non_increasing() {
        warnings.push(format!(
            "family {}: weights are not non-increasing",
            q.label()
        ));
    }
    // The growth conditions concern the family, not the truncation the
    // caller happens to hold, so named families are re-extended to a
    // canonical probe length; unnamed values are probed as given.
    let extended;
    let q = if q.n_max() < (1 << 12) {
        match WeightSequence::make(q.label(), 1 << 12) {
            Ok(longer) => {
                extended = longer;
                &extended
            }
            Err(_) => q,
        }
    } else {
        q
    };
    let probe = q.n_max().min(1 << 12);
    if probe >= 16 && alpha > 0.0 && alpha <= 1.0 {
        match q.normalizer_growth_report(alpha, probe) {
            Ok(report) if report.verdict == Verdict::Violated => warnings.push(format!(
                "family {}: normalizer growth n^alpha/Q_n keeps rising at alpha = {alpha} \
                 (sup {:.3e} at n = {})",
                q.label(),
                report.global_sup,
                report.global_argmax,
            )),
            _ => {}
        }
        match q.increment_decay_report(alpha, probe) {
            Ok(report) if report.verdict == Verdict::Violated => warnings.push(format!(
                "family {}: increment decay |q_n - q_(n+1)| n^(2-alpha) keeps rising at \
                 alpha = {alpha} (sup {:.3e} at n = {})",
                q.label(),
                report.global_sup,
                report.global_argmax,
            )),
            _ => {}
        }
    }
    warnings
}

/// One strong-convergence measurement: the logarithmic average of the
/// `L_p` integrals of the means, `p = 1/(1+alpha)`.
#[derive(Debug, Clone, Serialize)]
pub struct StrongSumReport {
    pub n: usize,
    pub p: f64,
    /// `(1/log2 n) sum_{k=1}^{n} int |t_k f|^p / k`.
    pub value: f64,
    /// Same average with the maximal-function integral `int |(t_k f)*|^p`.
    pub hardy_value: f64,
    /// `int |f*|^p`, the reference the averages are compared against.
    pub reference: f64,
    /// `value / reference`.
    pub ratio: f64,
    /// Indices skipped because the mean is undefined there.
    pub skipped: usize,
}

/// Computes the strong-convergence average of the means of `f` up to
/// index `n`: `(1/log2 n) sum_{k=1}^{n} int |t_k f|^{1/(1+alpha)} dmu / k`,
/// plus the same average over maximal-function integrals, and both
/// relative to `int |f*|^{1/(1+alpha)}`.
pub fn strong_sum(
    q: &WeightSequence,
    alpha: f64,
    f: &StepFunction,
    n: usize,
) -> Result<StrongSumReport> {
    if n < 2 {
        return Err(Error::OutOfRange(
            "strong-convergence average needs n >= 2".into(),
        ));
    }
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::Domain(format!(
            "weight exponent must be positive and finite, got {alpha}"
        )));
    }
    if q.n_max() + 1 < n {
        return Err(Error::OutOfRange(format!(
            "weight sequence covers indices up to {}, average reaches {n}",
            q.n_max()
        )));
    }
    let p = 1.0 / (1.0 + alpha);
    let mut value = 0.0f64;
    let mut hardy_value = 0.0f64;
    let mut skipped = 0usize;
    for k in 1..=n {
        let mean = match summability_mean(q, k, f) {
            Ok(mean) => mean,
            Err(Error::DegenerateWeights(_)) | Err(Error::OutOfRange(_)) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        value += lp_integral(&mean, p)? / k as f64;
        hardy_value += hardy_integral(&mean, p)? / k as f64;
    }
    let log_n = (n as f64).log2();
    value /= log_n;
    hardy_value /= log_n;
    let reference = hardy_integral(f, p)?;
    Ok(StrongSumReport {
        n,
        p,
        value,
        hardy_value,
        reference,
        ratio: value / reference,
        skipped,
    })
}

/// Diagnostic strong sums over partial sums and Fejer means.
#[derive(Debug, Clone, Serialize)]
pub struct BackgroundSums {
    pub n: usize,
    pub p: f64,
    /// `(1/log2^[p] n) sum_{k=1}^{n} int |S_k f|^p / k^(2-p)`.
    pub partial_sums: f64,
    /// `(1/log2^[1/2+p] n) sum_{k=1}^{n} int |sigma_k f|^p / k^(2-2p)`.
    pub fejer_means: f64,
    /// `(1/log2 n) sum_{k=1}^{n} int |S_k f - f| / k`.
    pub deviations: f64,
}

/// Computes the three diagnostic averages in one pass over a running
/// partial-sum ladder: the restricted strong sum of partial sums, its
/// Fejer-mean analogue, and the logarithmic average of `L_1` deviations.
pub fn background_sums(f: &StepFunction, p: f64, n: usize) -> Result<BackgroundSums> {
    if n < 2 {
        return Err(Error::OutOfRange(
            "background averages need n >= 2".into(),
        ));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Domain(format!(
            "background exponent must lie in (0, 1], got {p}"
        )));
    }
    let cells = f.len();
    let measure = 1.0 / cells as f64;
    let spectrum = analyze(f);
    // running = S_k f, cumulative = sum_{j<=k} S_j f; both advance in O(M).
    let mut running = vec![Complex64::ZERO; cells];
    let mut cumulative = vec![Complex64::ZERO; cells];
    let mut partial_sums = 0.0f64;
    let mut fejer_means = 0.0f64;
    let mut deviations = 0.0f64;
    for k in 1..=n {
        if k <= cells {
            let row = character_row(f.generator(), k - 1, f.resolution())?;
            let coefficient = spectrum.coefficient(k - 1);
            for i in 0..cells {
                running[i] += coefficient * row[i];
            }
        }
        for i in 0..cells {
            cumulative[i] += running[i];
        }
        let kf = k as f64;
        let mut s_norm = 0.0f64;
        let mut fejer_norm = 0.0f64;
        let mut deviation = 0.0f64;
        for i in 0..cells {
            s_norm += running[i].norm().powf(p);
            fejer_norm += (cumulative[i] / kf).norm().powf(p);
            deviation += (running[i] - f.value(i)).norm();
        }
        partial_sums += s_norm * measure / kf.powf(2.0 - p);
        fejer_means += fejer_norm * measure / kf.powf(2.0 - 2.0 * p);
        deviations += deviation * measure / kf;
    }
    let log_n = (n as f64).log2();
    // Integer-part exponents: the damping only engages once p (resp.
    // 1/2 + p) reaches 1.
    if p >= 1.0 {
        partial_sums /= log_n;
    }
    if 0.5 + p >= 1.0 {
        fejer_means /= log_n;
    }
    deviations /= log_n;
    Ok(BackgroundSums {
        n,
        p,
        partial_sums,
        fejer_means,
        deviations,
    })
}
