//! Summability means of Fourier partial sums, `L_p` machinery, and
//! p-atoms.
//!
//! The central object is the Norlund mean
//! `t_n f = (1/Q_n) sum_{k=1}^{n} q_{n-k} S_k f`.  Classical means are
//! specializations: constant weights give the Fejer mean `sigma_n`, Cesaro
//! weights give an unnormalized form of `sigma_n^alpha`, and logarithmic
//! weights give `L_n`.  The Riesz logarithmic mean `R_n` attaches `1/k` to
//! `S_k` rather than `S_{n-k}` and is handled by its own evaluation path.
//!
//! For a resolution-`N` function every partial sum with `k >= M_N` equals
//! `f`, so means at arbitrarily large `n` collapse to a finite ladder plus
//! one closing term with weight `Q_{n - M_N + 1}`.

use num_complex::Complex64;

use crate::characters::character_row;
use crate::error::{Error, Result};
use crate::group::{Coset, GeneratorSequence};
use crate::rng::SplitMix64;
use crate::step::StepFunction;
use crate::transform::analyze;
use crate::weights::{WeightKind, WeightSequence};

/// Norlund mean `t_n f = (1/Q_n) sum_{k=1}^{n} q_{n-k} S_k f`.
///
/// For `n` beyond the grid size `M_N` of `f`, the trailing partial sums
/// all equal `f` and are folded into a single term with weight
/// `Q_{n - M_N + 1}`.
pub fn norlund_mean(
    q: &WeightSequence,
    n: usize,
    f: &StepFunction,
) -> Result<StepFunction> {
    if !q.is_norlund() {
        return Err(Error::Contract(format!(
            "weight family {} attaches to leading partial sums; use summability_mean",
            q.label()
        )));
    }
    if n == 0 {
        return Err(Error::OutOfRange("Norlund mean needs n >= 1".into()));
    }
    let normalizer = q.big_q(n);
    if normalizer <= 0.0 {
        return Err(Error::DegenerateWeights(format!(
            "normalizer Q_{n} = {normalizer} is not positive"
        )));
    }
    let sum = weighted_ladder(f, n, |k| q.q(n - k), |m| q.big_q(n - m + 1))?;
    Ok(sum.scale(Complex64::new(1.0 / normalizer, 0.0)))
}

/// Norlund mean through the kernel: `t_n f = (f * F_n)` by literal
/// convolution.  Requires `n <= M_N` so the kernel is representable on the
/// grid of `f`; must agree with [`norlund_mean`] pointwise.
pub fn norlund_mean_convolution(
    q: &WeightSequence,
    n: usize,
    f: &StepFunction,
) -> Result<StepFunction> {
    let kernel = crate::kernels::norlund_kernel(f.generator(), q, n, f.resolution())?;
    crate::transform::convolve(f, &kernel)
}

/// Fejer mean `sigma_n f = (1/n) sum_{k=1}^{n} S_k f`; the constant-weight
/// Norlund mean.
pub fn fejer_mean(n: usize, f: &StepFunction) -> Result<StepFunction> {
    if n == 0 {
        return Err(Error::OutOfRange("Fejer mean needs n >= 1".into()));
    }
    let q = WeightSequence::constant(n);
    norlund_mean(&q, n, f)
}

/// Cesaro mean `sigma_n^alpha f = (1/A_n^alpha) sum_{k=1}^{n}
/// A_{n-k}^{alpha-1} S_k f`, normalized by `A_n^alpha` exactly as
/// displayed.  The coefficient sum is `A_{n-1}^alpha`, not `A_n^alpha`, so
/// at `alpha = 1` this is `(n/(n+1)) sigma_n f`, slightly below the Fejer
/// mean at every finite `n`.
pub fn cesaro_mean(alpha: f64, n: usize, f: &StepFunction) -> Result<StepFunction> {
    if n == 0 {
        return Err(Error::OutOfRange("Cesaro mean needs n >= 1".into()));
    }
    let q = WeightSequence::cesaro(alpha, n)?;
    // norlund_mean divides by Q_n = A_{n-1}^alpha; rescale to the
    // displayed normalizer A_n^alpha.
    let mean = norlund_mean(&q, n, f)?;
    let ratio = q.big_q(n) / crate::weights::cesaro_number(alpha, n);
    Ok(mean.scale(Complex64::new(ratio, 0.0)))
}

/// Riesz logarithmic mean `R_n f = (1/l_n) sum_{k=1}^{n-1} S_k f / k`,
/// with `l_n` the partial harmonic sum.  Not a Norlund mean: the weights
/// attach to the leading index.
pub fn riesz_log_mean(n: usize, f: &StepFunction) -> Result<StepFunction> {
    if n < 2 {
        return Err(Error::OutOfRange(
            "Riesz logarithmic mean needs n >= 2".into(),
        ));
    }
    let grid = f.len();
    let ladder_top = (n - 1).min(grid);
    let mut normalizer = 0.0f64;
    for k in 1..n {
        normalizer += 1.0 / k as f64;
    }
    // Leading-index weights: ladder over k < n, folding S_k = f for
    // k >= M_N into one closing coefficient.
    let spectrum = analyze(f);
    let mut running = vec![Complex64::ZERO; grid];
    let mut sum = vec![Complex64::ZERO; grid];
    for k in 1..=ladder_top {
        let row = character_row(f.generator(), k - 1, f.resolution())?;
        let coefficient = spectrum.coefficient(k - 1);
        let weight = 1.0 / k as f64;
        for i in 0..grid {
            running[i] += coefficient * row[i];
            sum[i] += weight * running[i];
        }
    }
    if n - 1 > grid {
        let tail: f64 = (grid + 1..n).map(|k| 1.0 / k as f64).sum();
        for (s, v) in sum.iter_mut().zip(f.values()) {
            *s += tail * v;
        }
    }
    let scale = Complex64::new(1.0 / normalizer, 0.0);
    StepFunction::new(f.generator(), f.resolution(), sum).map(|g| g.scale(scale))
}

/// Norlund logarithmic mean `L_n f = (1/l_n) sum_{k=1}^{n-1} S_k f /
/// (n-k)`; the Norlund mean of the logarithmic weight family.
pub fn norlund_log_mean(n: usize, f: &StepFunction) -> Result<StepFunction> {
    if n < 2 {
        return Err(Error::OutOfRange(
            "Norlund logarithmic mean needs n >= 2".into(),
        ));
    }
    let q = WeightSequence::norlund_log(n);
    norlund_mean(&q, n, f)
}

/// Evaluates the mean a weight sequence stands for: Norlund families go
/// through [`norlund_mean`]; the Riesz logarithmic family dispatches to
/// [`riesz_log_mean`].
pub fn summability_mean(
    q: &WeightSequence,
    n: usize,
    f: &StepFunction,
) -> Result<StepFunction> {
    match q.kind() {
        WeightKind::RieszLog => riesz_log_mean(n, f),
        _ => norlund_mean(q, n, f),
    }
}

/// Shared ladder: `sum_{k=1}^{n} w(k) S_k f`, with the spectral shortcut
/// `S_k f = f` for `k >= M_N` folded into `closing(M_N) * f`.
fn weighted_ladder(
    f: &StepFunction,
    n: usize,
    weight: impl Fn(usize) -> f64,
    closing: impl Fn(usize) -> f64,
) -> Result<StepFunction> {
    let grid = f.len();
    let spectrum = analyze(f);
    let ladder_top = if n < grid { n } else { grid - 1 };
    let mut running = vec![Complex64::ZERO; grid];
    let mut sum = vec![Complex64::ZERO; grid];
    for k in 1..=ladder_top {
        let row = character_row(f.generator(), k - 1, f.resolution())?;
        let coefficient = spectrum.coefficient(k - 1);
        let w = weight(k);
        for i in 0..grid {
            running[i] += coefficient * row[i];
            sum[i] += w * running[i];
        }
    }
    if n >= grid {
        let tail = closing(grid);
        for (s, v) in sum.iter_mut().zip(f.values()) {
            *s += tail * v;
        }
    }
    StepFunction::new(f.generator(), f.resolution(), sum)
}

// ----- L_p machinery -----

fn check_exponent(p: f64) -> Result<()> {
    if p <= 0.0 || !p.is_finite() {
        return Err(Error::Domain(format!(
            "integrability exponent must be positive, got {p}"
        )));
    }
    Ok(())
}

/// `int |f|^p dmu`, an exact finite sum.
pub fn lp_integral(f: &StepFunction, p: f64) -> Result<f64> {
    check_exponent(p)?;
    let sum: f64 = f.values().iter().map(|v| v.norm().powf(p)).sum();
    Ok(sum / f.len() as f64)
}

/// The `L_p` quasi-norm `(int |f|^p)^{1/p}`.
pub fn lp_quasinorm(f: &StepFunction, p: f64) -> Result<f64> {
    Ok(lp_integral(f, p)?.powf(1.0 / p))
}

/// The weak-`L_p` quantity `sup_{lambda>0} lambda^p mu(|f| > lambda)`,
/// computed exactly: for a step function the sup is attained at a jump,
/// approaching a value `v` of `|f|` from below, where it equals
/// `v^p mu(|f| >= v)`.
pub fn weak_lp(f: &StepFunction, p: f64) -> Result<f64> {
    check_exponent(p)?;
    let mut magnitudes: Vec<f64> = f.values().iter().map(|v| v.norm()).collect();
    magnitudes.sort_by(|a, b| b.partial_cmp(a).expect("finite magnitudes"));
    let total = magnitudes.len() as f64;
    let mut best = 0.0f64;
    for (i, &v) in magnitudes.iter().enumerate() {
        if v <= 0.0 {
            break;
        }
        // count(|f| >= v) = i + 1 at the last index of an equal run.
        if i + 1 == magnitudes.len() || magnitudes[i + 1] < v {
            best = best.max(v.powf(p) * (i as f64 + 1.0) / total);
        }
    }
    Ok(best)
}

/// The martingale maximal function `f* = max_{0<=n<=N} |S_{M_n} f|`:
/// the largest block average of `f` over the nested coset ladder through
/// each point.
pub fn maximal_function(f: &StepFunction) -> Result<StepFunction> {
    let mut best: Vec<f64> = vec![0.0; f.len()];
    for rank in 0..=f.resolution() {
        let level = f.condition(rank)?;
        for (b, v) in best.iter_mut().zip(level.values()) {
            *b = b.max(v.norm());
        }
    }
    StepFunction::from_real(f.generator(), f.resolution(), &best)
}

/// `int |f*|^p dmu`: the Hardy-space integral of the maximal function.
pub fn hardy_integral(f: &StepFunction, p: f64) -> Result<f64> {
    lp_integral(&maximal_function(f)?, p)
}

/// The Hardy quasi-norm `(int |f*|^p)^{1/p}`.
pub fn hardy_norm(f: &StepFunction, p: f64) -> Result<f64> {
    Ok(hardy_integral(f, p)?.powf(1.0 / p))
}

// ----- p-atoms -----

/// Oscillation pattern of an atom on the sub-cosets of its support.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomProfile {
    /// `(m-1, -1, ..., -1)` across the `m` sub-cosets.
    Haar,
    /// Seeded random integers, antisymmetrized to exact zero sum.
    Random(u64),
}

impl std::fmt::Display for AtomProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AtomProfile::Haar => write!(f, "haar"),
            AtomProfile::Random(seed) => write!(f, "random:{seed}"),
        }
    }
}

/// A `p`-atom supported on the coset `I_N(0)`: zero mean, sup bounded by
/// `mu(I_N)^{-1/p} = M_N^{1/p}`, vanishing off the support.
///
/// The atom keeps its integer oscillation profile alongside the scaled
/// function: the profile has exact zero sum, which carries the zero-mean
/// and annihilation properties into exact integer arithmetic on Walsh
/// groups.
#[derive(Debug, Clone)]
pub struct Atom {
    p: f64,
    level: usize,
    support: Coset,
    function: StepFunction,
    profile: Vec<i64>,
    scale: f64,
    source: AtomProfile,
}

impl Atom {
    pub fn p(&self) -> f64 {
        self.p
    }

    /// The support rank `N`: the atom lives on `I_N(0)`.
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn support(&self) -> &Coset {
        &self.support
    }

    /// The atom as a step function at resolution `N + 1`.
    pub fn function(&self) -> &StepFunction {
        &self.function
    }

    /// Integer values per sub-coset of the support; exact zero sum.
    pub fn profile(&self) -> &[i64] {
        &self.profile
    }

    /// Common factor from integers to function values.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// The oscillation pattern the atom was built from.
    pub fn source(&self) -> AtomProfile {
        self.source
    }

    /// The seed behind a random profile, if any.
    pub fn seed(&self) -> Option<u64> {
        match self.source {
            AtomProfile::Haar => None,
            AtomProfile::Random(seed) => Some(seed),
        }
    }

    /// The sup bound `M_N^{1/p}` the atom is normalized against.
    pub fn sup_bound(&self, gen: &GeneratorSequence) -> f64 {
        (gen.cardinality(self.level) as f64).powf(1.0 / self.p)
    }

    /// Integer values per grid cell at the atom's resolution.
    pub fn cell_integers(&self) -> Vec<i64> {
        let mut cells = vec![0i64; self.function.len()];
        cells[..self.profile.len()].copy_from_slice(&self.profile);
        cells
    }

    /// Verifies the three defining properties; all are construction
    /// invariants, so failures indicate a bug rather than bad input.
    pub fn check(&self, gen: &GeneratorSequence) -> Result<()> {
        let profile_sum: i64 = self.profile.iter().sum();
        if profile_sum != 0 {
            return Err(Error::Contract(format!(
                "atom profile sums to {profile_sum}, not zero"
            )));
        }
        let mean = self.function.integral().norm();
        if mean > 1e-12 {
            return Err(Error::Contract(format!("atom mean {mean} exceeds 1e-12")));
        }
        let bound = self.sup_bound(gen);
        let sup = self.function.sup_norm();
        if sup > bound {
            return Err(Error::Contract(format!(
                "atom sup {sup} exceeds the bound {bound}"
            )));
        }
        let off = self
            .function
            .values()
            .iter()
            .skip(self.profile.len())
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        if off != 0.0 {
            return Err(Error::Contract(format!(
                "atom leaks {off} outside its support"
            )));
        }
        Ok(())
    }
}

/// Builds a `p`-atom on `I_N(0)`, oscillating across the `m_N` rank-`(N+1)`
/// sub-cosets.
///
/// The integer profile is scaled by one common factor chosen so the sup
/// does not exceed `M_N^{1/p}` even after rounding (the factor is nudged
/// down by single ulps until the product passes).
pub fn make_atom(
    gen: &GeneratorSequence,
    p: f64,
    level: usize,
    profile: AtomProfile,
) -> Result<Atom> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Domain(format!(
            "atom exponent must lie in (0, 1], got {p}"
        )));
    }
    if level == 0 || level + 1 > gen.depth() {
        return Err(Error::OutOfRange(format!(
            "atom level must satisfy 1 <= N <= {}, got {level}: the support needs \
             sub-cosets to oscillate on",
            gen.depth() - 1
        )));
    }
    let m = gen.radix(level);
    let integers: Vec<i64> = match profile {
        AtomProfile::Haar => {
            let mut v = vec![-1i64; m];
            v[0] = m as i64 - 1;
            v
        }
        AtomProfile::Random(seed) => {
            let mut rng = SplitMix64::new(seed);
            loop {
                let draws: Vec<i64> = (0..m).map(|_| rng.signed(9)).collect();
                let total: i64 = draws.iter().sum();
                // v_i = m u_i - sum(u): exact zero sum by construction.
                let v: Vec<i64> = draws.iter().map(|&u| m as i64 * u - total).collect();
                if v.iter().any(|&x| x != 0) {
                    break v;
                }
            }
        }
    };
    let peak = integers.iter().map(|v| v.abs()).max().expect("nonempty") as f64;
    let bound = (gen.cardinality(level) as f64).powf(1.0 / p);
    let mut scale = bound / peak;
    // One rounding step may push peak * scale above the bound; back off by
    // ulps until the scaled sup satisfies it exactly.
    while peak * scale > bound {
        scale = f64::from_bits(scale.to_bits() - 1);
    }
    let resolution = level + 1;
    let mut values = vec![Complex64::ZERO; gen.cardinality(resolution)];
    for (cell, &v) in integers.iter().enumerate() {
        values[cell] = Complex64::new(v as f64 * scale, 0.0);
    }
    let atom = Atom {
        p,
        level,
        support: gen.coset(level, &gen.zero())?,
        function: StepFunction::new(gen, resolution, values)?,
        profile: integers,
        scale,
        source: profile,
    };
    atom.check(gen)?;
    Ok(atom)
}
