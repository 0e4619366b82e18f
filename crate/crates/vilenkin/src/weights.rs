//! Weight sequences for Norlund means and their growth diagnostics.
//!
//! A weight sequence `(q_k)` drives the Norlund mean
//! `t_n f = (1/Q_n) sum_{k=1}^{n} q_{n-k} S_k f` with `Q_n = q_0 + ... +
//! q_{n-1}`.  The built-in families cover the classical examples: constant
//! weights (Fejer means), Cesaro weights `q_k = A_k^{alpha-1}`, logarithmic
//! weights `q_k = 1/k`, and `q_k = 1/sqrt(k)`.  The Riesz logarithmic
//! family stores the same values but attaches `1/k` to `S_k` rather than
//! `S_{n-k}`; it is kept in this type for uniform handling and flagged so
//! the means module can dispatch on it.
//!
//! The diagnostics quantify, over a finite range, the two growth conditions
//! under which the summability theory for non-increasing weights applies:
//!
//! * **normalizer growth** — `n^alpha / Q_n` stays bounded;
//! * **increment decay** — `(q_n - q_{n+1}) n^{2-alpha}` stays bounded.
//!
//! Boundedness cannot be decided from finitely many terms, so the verdicts
//! are explicitly empirical: the reports record the sup of the ratio over
//! each dyadic block `[2^j, 2^{j+1})` and classify the trend of the top
//! blocks.  The classification thresholds are configuration, not truth
//! claims, and are documented on [`TrendThresholds`].

use serde::Serialize;

use crate::error::{Error, Result};

/// The built-in weight families plus user-supplied values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum WeightKind {
    /// `q_k = 1`: Fejer means.
    Constant,
    /// `q_k = A_k^{alpha - 1}` with `alpha` in `(0, 1]`: Cesaro means.
    Cesaro(f64),
    /// `q_0 = 0`, `q_k = 1/k`: Norlund logarithmic means.
    NorlundLog,
    /// Same values as [`WeightKind::NorlundLog`] but attached to `S_k`
    /// instead of `S_{n-k}`; not a Norlund family.
    RieszLog,
    /// `q_0 = 0`, `q_k = 1/sqrt(k)`.
    InverseSqrt,
    /// Explicit values from the caller or a file.
    Custom,
}

/// An immutable weight sequence `q_0 ... q_{n_max}` with its prefix sums
/// `Q_0 ... Q_{n_max + 1}` precomputed.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence {
    kind: WeightKind,
    label: String,
    values: Vec<f64>,
    /// `prefix[n] = Q_n = q_0 + ... + q_{n-1}`; length `values.len() + 1`.
    prefix: Vec<f64>,
    non_increasing: bool,
}

impl WeightSequence {
    /// Parses a family specification:
    /// `constant | cesaro:<alpha> | norlund_log | riesz_log | inverse_sqrt
    /// | file:<path>`.
    pub fn make(spec: &str, n_max: usize) -> Result<Self> {
        let spec = spec.trim();
        if let Some(alpha) = spec.strip_prefix("cesaro:") {
            let alpha: f64 = alpha
                .parse()
                .map_err(|_| Error::Parse(format!("invalid Cesaro exponent {alpha:?}")))?;
            return Self::cesaro(alpha, n_max);
        }
        if let Some(path) = spec.strip_prefix("file:") {
            return Self::from_file(std::path::Path::new(path), n_max);
        }
        match spec {
            "constant" => Ok(Self::constant(n_max)),
            "norlund_log" => Ok(Self::norlund_log(n_max)),
            "riesz_log" => Ok(Self::riesz_log(n_max)),
            "inverse_sqrt" => Ok(Self::inverse_sqrt(n_max)),
            other => Err(Error::Parse(format!(
                "unknown weight family {other:?}; expected constant, cesaro:<alpha>, \
                 norlund_log, riesz_log, inverse_sqrt, or file:<path>"
            ))),
        }
    }

    /// `q_k = 1` for all `k`.
    pub fn constant(n_max: usize) -> Self {
        Self::build(
            WeightKind::Constant,
            "constant".into(),
            vec![1.0; n_max + 1],
        )
        .expect("constant weights are valid")
    }

    /// Cesaro weights `q_k = A_k^{alpha - 1}` for `alpha` in `(0, 1]`.
    /// At `alpha = 1` this is the constant family and `Q_n = n` exactly.
    pub fn cesaro(alpha: f64, n_max: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) || !alpha.is_finite() {
            return Err(Error::Contract(format!(
                "Cesaro exponent must lie in (0, 1], got {alpha}"
            )));
        }
        let beta = alpha - 1.0;
        let mut values = Vec::with_capacity(n_max + 1);
        let mut a = 1.0f64;
        values.push(a);
        for k in 1..=n_max {
            a *= (beta + k as f64) / k as f64;
            values.push(a);
        }
        Self::build(WeightKind::Cesaro(alpha), format!("cesaro:{alpha}"), values)
    }

    /// `q_0 = 0`, `q_k = 1/k`; then `Q_n` is the partial harmonic sum
    /// `l_n = sum_{k=1}^{n-1} 1/k`.
    pub fn norlund_log(n_max: usize) -> Self {
        let values = harmonic_values(n_max, |k| 1.0 / k as f64);
        Self::build(WeightKind::NorlundLog, "norlund_log".into(), values)
            .expect("logarithmic weights are valid")
    }

    /// Same stored values as [`WeightSequence::norlund_log`] but flagged as
    /// a Riesz (forward-weighted) family.
    pub fn riesz_log(n_max: usize) -> Self {
        let values = harmonic_values(n_max, |k| 1.0 / k as f64);
        Self::build(WeightKind::RieszLog, "riesz_log".into(), values)
            .expect("logarithmic weights are valid")
    }

    /// `q_0 = 0`, `q_k = 1/sqrt(k)`.
    pub fn inverse_sqrt(n_max: usize) -> Self {
        let values = harmonic_values(n_max, |k| 1.0 / (k as f64).sqrt());
        Self::build(WeightKind::InverseSqrt, "inverse_sqrt".into(), values)
            .expect("inverse-sqrt weights are valid")
    }

    /// Explicit values.  All must be finite and non-negative, with at
    /// least one positive.
    pub fn custom(values: Vec<f64>) -> Result<Self> {
        Self::build(WeightKind::Custom, "custom".into(), values)
    }

    /// Reads one weight per line (blank lines and `#` comments ignored).
    /// The file must provide at least `n_max + 1` values; extras are
    /// dropped.
    pub fn from_file(path: &std::path::Path, n_max: usize) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let value: f64 = line.parse().map_err(|_| {
                Error::Parse(format!(
                    "bad weight on line {} of {}: {line:?}",
                    lineno + 1,
                    path.display()
                ))
            })?;
            values.push(value);
        }
        if values.len() < n_max + 1 {
            return Err(Error::Parse(format!(
                "{} provides {} weights but {} are required",
                path.display(),
                values.len(),
                n_max + 1
            )));
        }
        values.truncate(n_max + 1);
        let mut built = Self::build(WeightKind::Custom, String::new(), values)?;
        built.label = format!("file:{}", path.display());
        Ok(built)
    }

    fn build(kind: WeightKind, label: String, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::DegenerateWeights("empty weight sequence".into()));
        }
        for (k, &q) in values.iter().enumerate() {
            if !q.is_finite() || q < 0.0 {
                return Err(Error::DegenerateWeights(format!(
                    "q_{k} = {q} is not a finite non-negative weight"
                )));
            }
        }
        if values.iter().all(|&q| q == 0.0) {
            return Err(Error::DegenerateWeights(
                "all weights vanish; every normalizer Q_n would be zero".into(),
            ));
        }
        let mut prefix = Vec::with_capacity(values.len() + 1);
        let mut total = 0.0f64;
        prefix.push(total);
        for &q in &values {
            total += q;
            prefix.push(total);
        }
        // Monotonicity is assessed from the first nonzero entry on: a
        // leading q_0 = 0 is the conventional seam of several classical
        // families, not a violation.
        let first_nonzero = values.iter().position(|&q| q > 0.0).unwrap_or(0);
        let non_increasing = values[first_nonzero..].windows(2).all(|w| w[1] <= w[0]);
        Ok(Self {
            kind,
            label,
            values,
            prefix,
            non_increasing,
        })
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    /// The canonical specification string this sequence was built from.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Largest stored index `n_max`.
    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    /// The weight `q_k` for `k <= n_max`.
    pub fn q(&self, k: usize) -> f64 {
        self.values[k]
    }

    /// The normalizer `Q_n = q_0 + ... + q_{n-1}` for `n <= n_max + 1`.
    pub fn big_q(&self, n: usize) -> f64 {
        self.prefix[n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// True for every family except the Riesz one, whose weights attach to
    /// `S_k` rather than `S_{n-k}`.
    pub fn is_norlund(&self) -> bool {
        !matches!(self.kind, WeightKind::RieszLog)
    }

    /// Non-increasing from the first positive entry on (leading zeros are
    /// ignored; see [`WeightSequence::build`]).
    pub fn non_increasing(&self) -> bool {
        self.non_increasing
    }

    /// Smallest `n >= 1` with `Q_n > 0`; operations that divide by `Q_n`
    /// are defined from here on.
    pub fn first_valid_n(&self) -> usize {
        self.values
            .iter()
            .position(|&q| q > 0.0)
            .map(|k| k + 1)
            .expect("some weight is positive by construction")
    }

    // ----- growth diagnostics -----

    /// Empirical check that `n^alpha / Q_n` stays bounded: the normalizer
    /// must grow at least like `n^alpha`.
    pub fn normalizer_growth_report(&self, alpha: f64, n_max: usize) -> Result<ConditionReport> {
        self.normalizer_growth_report_with(alpha, n_max, &TrendThresholds::default())
    }

    /// [`WeightSequence::normalizer_growth_report`] with explicit
    /// thresholds.
    pub fn normalizer_growth_report_with(
        &self,
        alpha: f64,
        n_max: usize,
        thresholds: &TrendThresholds,
    ) -> Result<ConditionReport> {
        let n_max = self.check_range(n_max)?;
        let start = self.first_valid_n();
        let ratios = (start..=n_max)
            .map(|n| (n, (n as f64).powf(alpha) / self.big_q(n)))
            .collect::<Vec<_>>();
        Ok(classify_trend(
            "normalizer-growth",
            alpha,
            n_max,
            &ratios,
            thresholds,
        ))
    }

    /// Empirical check that the increments `q_n - q_{n+1}` decay like
    /// `n^{alpha - 2}`: the ratio `|q_n - q_{n+1}| n^{2 - alpha}` must stay
    /// bounded.
    pub fn increment_decay_report(&self, alpha: f64, n_max: usize) -> Result<ConditionReport> {
        self.increment_decay_report_with(alpha, n_max, &TrendThresholds::default())
    }

    /// [`WeightSequence::increment_decay_report`] with explicit thresholds.
    pub fn increment_decay_report_with(
        &self,
        alpha: f64,
        n_max: usize,
        thresholds: &TrendThresholds,
    ) -> Result<ConditionReport> {
        let n_max = self.check_range(n_max)?;
        let ratios = (1..n_max)
            .map(|n| {
                let diff = (self.q(n) - self.q(n + 1)).abs();
                (n, diff * (n as f64).powf(2.0 - alpha))
            })
            .collect::<Vec<_>>();
        Ok(classify_trend(
            "increment-decay",
            alpha,
            n_max,
            &ratios,
            thresholds,
        ))
    }

    /// Regularity probe: a summability method of this shape is regular
    /// exactly when `q_{n-1} / Q_n` tends to zero.  The report samples the
    /// ratio at powers of two and applies the documented finite criterion.
    pub fn regularity_report(&self, n_max: usize) -> Result<RegularityReport> {
        let n_max = self.check_range(n_max)?;
        let start = self.first_valid_n();
        let mut samples = Vec::new();
        let mut n = 1usize;
        while n <= n_max {
            if n >= start {
                samples.push(RatioSample {
                    n,
                    ratio: self.q(n - 1) / self.big_q(n),
                });
            }
            n *= 2;
        }
        if samples.is_empty() {
            return Err(Error::DegenerateWeights(
                "no index with a positive normalizer in range".into(),
            ));
        }
        let peak = samples.iter().map(|s| s.ratio).fold(0.0, f64::max);
        let last = samples.last().expect("non-empty").ratio;
        // Finite-range criterion: the tail sample must have decayed both in
        // absolute terms and relative to the peak.  Thresholds are
        // configuration, not truth claims.
        let regular = last < 0.05 && last <= 0.5 * peak;
        Ok(RegularityReport {
            label: self.label.clone(),
            samples,
            final_ratio: last,
            regular,
        })
    }

    fn check_range(&self, n_max: usize) -> Result<usize> {
        if n_max < 16 {
            return Err(Error::Contract(format!(
                "growth diagnostics need n_max >= 16, got {n_max}"
            )));
        }
        if n_max > self.n_max() {
            return Err(Error::OutOfRange(format!(
                "n_max {n_max} exceeds the stored range {}",
                self.n_max()
            )));
        }
        Ok(n_max)
    }
}

fn harmonic_values(n_max: usize, f: impl Fn(usize) -> f64) -> Vec<f64> {
    let mut values = Vec::with_capacity(n_max + 1);
    values.push(0.0);
    values.extend((1..=n_max).map(f));
    values
}

/// The Cesaro number `A_k^beta = (beta+1)(beta+2)...(beta+k) / k!`, with
/// `A_0^beta = 1`, computed by the stable multiplicative recurrence
/// `A_k = A_{k-1} (beta + k) / k`.
pub fn cesaro_number(beta: f64, k: usize) -> f64 {
    let mut a = 1.0f64;
    for j in 1..=k {
        a *= (beta + j as f64) / j as f64;
    }
    a
}

/// Verdict of an empirical boundedness check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Satisfied,
    Violated,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let text = match self {
            Verdict::Satisfied => "satisfied",
            Verdict::Violated => "violated",
            Verdict::Inconclusive => "inconclusive",
        };
        write!(f, "{text}")
    }
}

/// Classification thresholds for the block-sup trend of a ratio sequence.
///
/// A bounded ratio cannot be distinguished from a slowly diverging one by
/// finitely many terms; these cutoffs implement the working rule.  With
/// per-block growth `g` over the top [`TrendThresholds::tail_blocks`]
/// consecutive dyadic blocks:
///
/// * every `g >= violation_growth` reads as genuine power growth
///   (`violated`);
/// * some `g <= saturation_growth` reads as a bounded plateau or decay
///   (`satisfied`);
/// * anything between is reported as `inconclusive`.
///
/// The defaults separate a flat trend (growth `~1`) from the mildest power
/// trend the library is asked to detect (`2^{1/4} ~ 1.19` per block).
#[derive(Debug, Clone, Serialize)]
pub struct TrendThresholds {
    pub violation_growth: f64,
    pub saturation_growth: f64,
    pub tail_blocks: usize,
}

impl Default for TrendThresholds {
    fn default() -> Self {
        Self {
            violation_growth: 1.1,
            saturation_growth: 1.05,
            tail_blocks: 3,
        }
    }
}

/// One sampled point of a ratio sequence.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RatioSample {
    pub n: usize,
    pub ratio: f64,
}

/// Sup of a ratio over one dyadic block `[2^j, 2^{j+1})`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BlockSup {
    /// The exponent `j`.
    pub exponent: u32,
    /// Sup of the ratio over the block (restricted to the sampled range).
    pub sup: f64,
    /// The `n` attaining the sup.
    pub argmax: usize,
    /// Whether the whole block lay inside the sampled range.  Partial
    /// blocks are reported but excluded from the trend classification:
    /// a block truncated to a few points understates its sup.
    pub complete: bool,
}

/// Result of an empirical boundedness check for one growth condition.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    /// Which condition: `normalizer-growth` or `increment-decay`.
    pub condition: &'static str,
    pub alpha: f64,
    pub n_max: usize,
    pub global_sup: f64,
    /// The `n` attaining the global sup.
    pub global_argmax: usize,
    pub block_sups: Vec<BlockSup>,
    /// Consecutive block-sup growth factors across the tail blocks.
    pub tail_growth: Vec<f64>,
    pub verdict: Verdict,
}

/// Tabulates both growth conditions for `q_k = 1/sqrt(k)` across a list of
/// exponents, demonstrating that the two conditions hold or fail
/// independently of each other: below the critical exponent `1/2` the
/// normalizer condition holds while increment decay fails, above it the
/// situation is the opposite, and at the boundary no pattern is asserted.
pub fn condition_independence_table(
    alphas: &[f64],
    n_max: usize,
) -> Result<Vec<IndependenceRow>> {
    let weights = WeightSequence::inverse_sqrt(n_max);
    alphas
        .iter()
        .map(|&alpha| {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(Error::Contract(format!(
                    "exponent must lie in (0, 1), got {alpha}"
                )));
            }
            let growth = weights.normalizer_growth_report(alpha, n_max)?;
            let decay = weights.increment_decay_report(alpha, n_max)?;
            let expected = if alpha < 0.5 {
                Some((Verdict::Satisfied, Verdict::Violated))
            } else if alpha > 0.5 {
                Some((Verdict::Violated, Verdict::Satisfied))
            } else {
                None
            };
            let matches_expected =
                expected.map(|(g, d)| growth.verdict == g && decay.verdict == d);
            Ok(IndependenceRow {
                alpha,
                normalizer_growth: growth,
                increment_decay: decay,
                expected,
                matches_expected,
            })
        })
        .collect()
}

/// One row of [`condition_independence_table`].
#[derive(Debug, Clone, Serialize)]
pub struct IndependenceRow {
    pub alpha: f64,
    pub normalizer_growth: ConditionReport,
    pub increment_decay: ConditionReport,
    /// Expected verdict pair away from the critical exponent, if any.
    pub expected: Option<(Verdict, Verdict)>,
    pub matches_expected: Option<bool>,
}

/// Regularity probe result.
#[derive(Debug, Clone, Serialize)]
pub struct RegularityReport {
    pub label: String,
    pub samples: Vec<RatioSample>,
    pub final_ratio: f64,
    pub regular: bool,
}

fn classify_trend(
    condition: &'static str,
    alpha: f64,
    n_max: usize,
    ratios: &[(usize, f64)],
    thresholds: &TrendThresholds,
) -> ConditionReport {
    let mut global = (0.0f64, ratios.first().map_or(0, |r| r.0));
    for &(n, ratio) in ratios {
        if ratio > global.0 {
            global = (ratio, n);
        }
    }
    let lo = ratios.first().map_or(0, |r| r.0);
    let hi = ratios.last().map_or(0, |r| r.0);
    // Dyadic block sups, in increasing block order.  The sampled range is
    // contiguous, so a block is complete exactly when both endpoints of
    // [2^j, 2^{j+1}) fall inside it.
    let mut block_sups: Vec<BlockSup> = Vec::new();
    for &(n, ratio) in ratios {
        let exponent = n.ilog2();
        match block_sups.last_mut() {
            Some(last) if last.exponent == exponent => {
                if ratio > last.sup {
                    last.sup = ratio;
                    last.argmax = n;
                }
            }
            _ => block_sups.push(BlockSup {
                exponent,
                sup: ratio,
                argmax: n,
                complete: (1usize << exponent) >= lo && (1usize << (exponent + 1)) - 1 <= hi,
            }),
        }
    }
    let complete: Vec<&BlockSup> = block_sups.iter().filter(|b| b.complete).collect();
    let growth: Vec<f64> = complete
        .windows(2)
        .map(|w| {
            if w[0].sup == 0.0 && w[1].sup == 0.0 {
                1.0
            } else if w[0].sup == 0.0 {
                f64::INFINITY
            } else {
                w[1].sup / w[0].sup
            }
        })
        .collect();
    let tail = thresholds.tail_blocks;
    let (tail_growth, verdict) = if growth.len() < tail {
        (growth.clone(), Verdict::Inconclusive)
    } else {
        let tail_growth: Vec<f64> = growth[growth.len() - tail..].to_vec();
        let lowest = tail_growth.iter().copied().fold(f64::INFINITY, f64::min);
        let verdict = if lowest >= thresholds.violation_growth {
            Verdict::Violated
        } else if lowest <= thresholds.saturation_growth {
            Verdict::Satisfied
        } else {
            Verdict::Inconclusive
        };
        (tail_growth, verdict)
    };
    ConditionReport {
        condition,
        alpha,
        n_max,
        global_sup: global.0,
        global_argmax: global.1,
        block_sups,
        tail_growth,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn constant_family_has_linear_normalizer() {
        let w = WeightSequence::constant(10);
        assert_eq!(w.kind(), &WeightKind::Constant);
        assert!(w.is_norlund());
        assert!(w.non_increasing());
        for n in 0..=11 {
            assert_eq!(w.big_q(n), n as f64, "Q_n = n exactly for q = 1");
        }
        assert_eq!(w.first_valid_n(), 1);
    }

    #[test]
    fn cesaro_one_is_the_constant_family() {
        let c = WeightSequence::cesaro(1.0, 12).unwrap();
        let k = WeightSequence::constant(12);
        assert_eq!(c.values(), k.values());
    }

    #[test]
    fn cesaro_prefix_sums_telescope() {
        // sum_{k=0}^{n-1} A_k^{alpha-1} = A_{n-1}^alpha, relative 1e-12.
        for alpha in [0.25, 0.5, 0.75, 1.0] {
            let w = WeightSequence::cesaro(alpha, 64).unwrap();
            for n in 1..=64 {
                let direct = cesaro_number(alpha, n - 1);
                let rel = (w.big_q(n) - direct).abs() / direct.abs();
                assert!(
                    rel < 1e-12,
                    "alpha={alpha}, n={n}: Q_n={} vs A={direct}",
                    w.big_q(n)
                );
            }
        }
    }

    #[test]
    fn cesaro_rejects_out_of_range_exponents() {
        assert!(WeightSequence::cesaro(0.0, 4).is_err());
        assert!(WeightSequence::cesaro(1.5, 4).is_err());
        assert!(WeightSequence::cesaro(-0.5, 4).is_err());
        assert!(WeightSequence::cesaro(f64::NAN, 4).is_err());
    }

    #[test]
    fn logarithmic_families_share_values_but_not_dispatch() {
        let n = WeightSequence::norlund_log(8);
        let r = WeightSequence::riesz_log(8);
        assert_eq!(n.values(), r.values());
        assert!(n.is_norlund());
        assert!(!r.is_norlund());
        assert_eq!(n.q(0), 0.0);
        assert_eq!(n.q(3), 1.0 / 3.0);
        // Q_4 = 1 + 1/2 + 1/3 = 11/6.
        assert!((n.big_q(4) - 11.0 / 6.0).abs() < 1e-15);
        // Leading zero is ignored by the monotonicity flag.
        assert!(n.non_increasing());
        assert_eq!(n.first_valid_n(), 2);
        // Q_1 = q_0 = 0: the first usable mean is n = 2.
        assert_eq!(n.big_q(1), 0.0);
    }

    #[test]
    fn inverse_sqrt_values() {
        let w = WeightSequence::inverse_sqrt(6);
        assert_eq!(w.q(0), 0.0);
        assert_eq!(w.q(4), 0.5);
        assert!((w.big_q(3) - (1.0 + 1.0 / 2.0f64.sqrt())).abs() < 1e-15);
        assert!(w.non_increasing());
    }

    #[test]
    fn custom_weights_are_validated() {
        assert!(WeightSequence::custom(vec![]).is_err());
        assert!(WeightSequence::custom(vec![0.0, 0.0]).is_err());
        assert!(WeightSequence::custom(vec![1.0, -0.5]).is_err());
        assert!(WeightSequence::custom(vec![1.0, f64::NAN]).is_err());
        assert!(WeightSequence::custom(vec![1.0, f64::INFINITY]).is_err());
        let w = WeightSequence::custom(vec![0.0, 2.0, 1.0]).unwrap();
        assert!(w.non_increasing());
        let growing = WeightSequence::custom(vec![1.0, 2.0, 4.0]).unwrap();
        assert!(!growing.non_increasing());
    }

    #[test]
    fn make_parses_the_family_grammar() {
        assert_eq!(
            WeightSequence::make("constant", 4).unwrap().values(),
            WeightSequence::constant(4).values()
        );
        assert_eq!(
            WeightSequence::make("cesaro:0.5", 4).unwrap().values(),
            WeightSequence::cesaro(0.5, 4).unwrap().values()
        );
        assert_eq!(
            WeightSequence::make(" inverse_sqrt ", 4).unwrap().kind(),
            &WeightKind::InverseSqrt
        );
        assert!(WeightSequence::make("cesaro:abc", 4).is_err());
        assert!(WeightSequence::make("fejer", 4).is_err());
        assert!(WeightSequence::make("file:/definitely/not/here", 4).is_err());
    }

    #[test]
    fn file_weights_round_trip() {
        let path = std::env::temp_dir().join(format!(
            "vilenkin-weights-{}.txt",
            std::process::id()
        ));
        std::fs::write(&path, "# custom weights\n1.0\n0.5\n\n0.25\n0.125\n").unwrap();
        let w = WeightSequence::from_file(&path, 3).unwrap();
        assert_eq!(w.values(), &[1.0, 0.5, 0.25, 0.125]);
        assert!(w.non_increasing());
        // Asking for more values than the file provides fails.
        assert!(WeightSequence::from_file(&path, 10).is_err());
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn normalizer_growth_constant_weights_is_flat() {
        let w = WeightSequence::constant(256);
        let report = w.normalizer_growth_report(1.0, 256).unwrap();
        // n^1 / Q_n = 1 exactly.
        assert_eq!(report.global_sup, 1.0);
        assert_eq!(report.verdict, Verdict::Satisfied);
        for block in &report.block_sups {
            assert_eq!(block.sup, 1.0);
        }
    }

    #[test]
    fn increment_decay_constant_weights_is_zero() {
        let w = WeightSequence::constant(256);
        let report = w.increment_decay_report(1.0, 256).unwrap();
        assert_eq!(report.global_sup, 0.0);
        assert_eq!(report.verdict, Verdict::Satisfied);
    }

    #[test]
    fn inverse_sqrt_conditions_flip_across_the_critical_exponent() {
        let n_max = 1 << 12;
        let w = WeightSequence::inverse_sqrt(n_max);
        let growth_low = w.normalizer_growth_report(0.25, n_max).unwrap();
        let decay_low = w.increment_decay_report(0.25, n_max).unwrap();
        assert_eq!(growth_low.verdict, Verdict::Satisfied);
        assert_eq!(decay_low.verdict, Verdict::Violated);
        // The violated ratio grows like n^{1/4}: factor 2^{1/4} per block.
        for &g in &decay_low.tail_growth {
            assert!((1.1..=1.3).contains(&g), "block growth {g} off 2^(1/4)");
        }
        let growth_high = w.normalizer_growth_report(0.75, n_max).unwrap();
        let decay_high = w.increment_decay_report(0.75, n_max).unwrap();
        assert_eq!(growth_high.verdict, Verdict::Violated);
        assert_eq!(decay_high.verdict, Verdict::Satisfied);
    }

    #[test]
    fn independence_table_matches_expected_pattern() {
        let rows = condition_independence_table(&[0.25, 0.5, 0.75], 1 << 12).unwrap();
        assert_eq!(rows[0].matches_expected, Some(true));
        assert!(rows[1].expected.is_none(), "boundary carries no verdict");
        assert_eq!(rows[2].matches_expected, Some(true));
        assert!(condition_independence_table(&[1.5], 64).is_err());
    }

    #[test]
    fn regularity_examples() {
        // q = 1: ratio 1/n -> 0, regular.
        let constant = WeightSequence::constant(1 << 10);
        let report = constant.regularity_report(1 << 10).unwrap();
        assert!(report.regular, "constant weights are regular");
        // Cesaro: ratio ~ alpha/n -> 0, regular.
        let cesaro = WeightSequence::cesaro(0.5, 1 << 10).unwrap();
        assert!(cesaro.regularity_report(1 << 10).unwrap().regular);
        // Geometric growth: ratio -> 1/2, not regular.
        let geometric =
            WeightSequence::custom((0..=1024).map(|k| 2.0f64.powi(k.min(900))).collect())
                .unwrap();
        let report = geometric.regularity_report(512).unwrap();
        assert!(!report.regular, "geometric weights are not regular");
        assert!((report.final_ratio - 0.5).abs() < 1e-12);
    }

    #[test]
    fn diagnostics_validate_their_range() {
        let w = WeightSequence::constant(64);
        assert!(w.normalizer_growth_report(1.0, 8).is_err(), "n_max too small");
        assert!(w.normalizer_growth_report(1.0, 128).is_err(), "beyond stored range");
        assert!(w.regularity_report(8).is_err());
    }

    proptest! {
        #[test]
        fn prefix_sums_increase_exactly_where_weights_are_positive(
            raw in proptest::collection::vec(0.0f64..4.0, 2..40)
        ) {
            prop_assume!(raw.iter().any(|&q| q > 0.0));
            let w = WeightSequence::custom(raw.clone()).unwrap();
            for n in 0..=w.n_max() {
                let strict = w.big_q(n + 1) > w.big_q(n);
                prop_assert_eq!(strict, w.q(n) > 0.0);
            }
        }

        #[test]
        fn monotonicity_flag_matches_bruteforce_tail_scan(
            raw in proptest::collection::vec(0.0f64..4.0, 2..40)
        ) {
            prop_assume!(raw.iter().any(|&q| q > 0.0));
            let w = WeightSequence::custom(raw.clone()).unwrap();
            let first = raw.iter().position(|&q| q > 0.0).unwrap();
            let expected = raw[first..].windows(2).all(|p| p[1] <= p[0]);
            prop_assert_eq!(w.non_increasing(), expected);
        }
    }
}
