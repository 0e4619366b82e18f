//! Dirichlet, Fejer, and Norlund kernels, their closed forms, and the
//! decomposition identities relating them.
//!
//! Definitions, with `psi_k` the characters in frequency order:
//!
//! * Dirichlet kernel `D_n = sum_{k=0}^{n-1} psi_k`, `D_0 = 0`;
//! * Fejer kernel `K_n = (1/n) sum_{k=1}^{n} D_k`;
//! * Norlund kernel `F_n = (1/Q_n) sum_{k=1}^{n} q_{n-k} D_k` for a weight
//!   sequence `(q_k)` with normalizer `Q_n`.
//!
//! Every verification in this module compares an algebraic closed form
//! against the literal character sum.  On Walsh groups (all radices 2) the
//! character values are `+-1` and every quantity below is an integer or an
//! integer divided by a power of two, so double-precision evaluation is
//! exact and deviations of identities come out as literal `0.0`.

use num_complex::Complex64;

use crate::characters::{character_row, unit_roots, CharacterBasis};
use crate::error::{Error, Result};
use crate::group::GeneratorSequence;
use crate::report::VerificationReport;
use crate::step::{Spectrum, StepFunction};
use crate::weights::WeightSequence;

/// Dirichlet kernel `D_n` by direct character summation.
pub fn dirichlet(gen: &GeneratorSequence, n: usize, resolution: usize) -> Result<StepFunction> {
    check_index(gen, n, resolution)?;
    let len = gen.cardinality(resolution);
    let mut values = vec![Complex64::ZERO; len];
    for k in 0..n {
        let row = character_row(gen, k, resolution)?;
        for (v, r) in values.iter_mut().zip(&row) {
            *v += r;
        }
    }
    StepFunction::new(gen, resolution, values)
}

/// Fejer kernel `K_n = (1/n) sum_{k=1}^{n} D_k`, `n >= 1`.
///
/// Shares the Norlund summation path with constant weights so the two
/// spellings produce bit-identical values.
pub fn fejer(gen: &GeneratorSequence, n: usize, resolution: usize) -> Result<StepFunction> {
    if n == 0 {
        return Err(Error::OutOfRange("Fejer kernel needs n >= 1".into()));
    }
    let weights = WeightSequence::constant(n);
    norlund_kernel(gen, &weights, n, resolution)
}

/// Normalized Norlund kernel `F_n = (1/Q_n) sum_{k=1}^{n} q_{n-k} D_k`.
pub fn norlund_kernel(
    gen: &GeneratorSequence,
    q: &WeightSequence,
    n: usize,
    resolution: usize,
) -> Result<StepFunction> {
    if n == 0 {
        return Err(Error::OutOfRange("Norlund kernel needs n >= 1".into()));
    }
    let normalizer = checked_normalizer(q, n)?;
    let sum = norlund_kernel_sum(gen, q, n, resolution)?;
    Ok(sum.scale(Complex64::new(1.0 / normalizer, 0.0)))
}

/// Unnormalized Norlund kernel sum `sum_{k=1}^{n} q_{n-k} D_k`.
///
/// Defined for every `n` (including those with `Q_n = 0`, where the
/// normalized kernel does not exist); `n = 0` gives the zero function.
pub fn norlund_kernel_sum(
    gen: &GeneratorSequence,
    q: &WeightSequence,
    n: usize,
    resolution: usize,
) -> Result<StepFunction> {
    check_index(gen, n, resolution)?;
    check_weight_range(q, n)?;
    let len = gen.cardinality(resolution);
    let mut dirichlet = vec![Complex64::ZERO; len];
    let mut sum = vec![Complex64::ZERO; len];
    for k in 1..=n {
        let row = character_row(gen, k - 1, resolution)?;
        let weight = q.q(n - k);
        for i in 0..len {
            dirichlet[i] += row[i];
            sum[i] += weight * dirichlet[i];
        }
    }
    StepFunction::new(gen, resolution, sum)
}

/// Norlund kernel through the summation-by-parts form
/// `Q_n F_n = sum_{j=1}^{n-1} (q_{n-j} - q_{n-j-1}) * j K_j + q_0 * n K_n`,
/// normalized by `Q_n`.  Must agree with [`norlund_kernel`] pointwise.
pub fn norlund_kernel_abel(
    gen: &GeneratorSequence,
    q: &WeightSequence,
    n: usize,
    resolution: usize,
) -> Result<StepFunction> {
    if n == 0 {
        return Err(Error::OutOfRange("Norlund kernel needs n >= 1".into()));
    }
    check_index(gen, n, resolution)?;
    check_weight_range(q, n)?;
    let normalizer = checked_normalizer(q, n)?;
    let len = gen.cardinality(resolution);
    let mut dirichlet = vec![Complex64::ZERO; len];
    // cumulative[j] state = j K_j = sum_{k=1}^{j} D_k.
    let mut cumulative = vec![Complex64::ZERO; len];
    let mut sum = vec![Complex64::ZERO; len];
    for j in 1..=n {
        let row = character_row(gen, j - 1, resolution)?;
        for i in 0..len {
            dirichlet[i] += row[i];
            cumulative[i] += dirichlet[i];
        }
        let coefficient = if j < n { q.q(n - j) - q.q(n - j - 1) } else { q.q(0) };
        for i in 0..len {
            sum[i] += coefficient * cumulative[i];
        }
    }
    let scale = Complex64::new(1.0 / normalizer, 0.0);
    StepFunction::new(gen, resolution, sum).map(|f| f.scale(scale))
}

/// Deviation of the scalar summation-by-parts identity
/// `Q_n = sum_{j=1}^{n-1} (q_{n-j} - q_{n-j-1}) * j + q_0 * n`.
pub fn abel_normalizer_deviation(q: &WeightSequence, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::OutOfRange("identity needs n >= 1".into()));
    }
    check_weight_range(q, n)?;
    let mut rhs = q.q(0) * n as f64;
    for j in 1..n {
        rhs += (q.q(n - j) - q.q(n - j - 1)) * j as f64;
    }
    Ok((q.big_q(n) - rhs).abs())
}

/// Spectral form of the Norlund kernel: `F_n` has coefficient
/// `Q_{n-j} / Q_n` at frequency `j < n` and `0` beyond.
pub fn norlund_spectrum(
    gen: &GeneratorSequence,
    q: &WeightSequence,
    n: usize,
    resolution: usize,
) -> Result<Spectrum> {
    if n == 0 {
        return Err(Error::OutOfRange("Norlund kernel needs n >= 1".into()));
    }
    check_index(gen, n, resolution)?;
    check_weight_range(q, n)?;
    let normalizer = checked_normalizer(q, n)?;
    let len = gen.cardinality(resolution);
    let coefficients = (0..len)
        .map(|j| {
            let c = if j < n { q.big_q(n - j) / normalizer } else { 0.0 };
            Complex64::new(c, 0.0)
        })
        .collect();
    Spectrum::new(gen, resolution, coefficients)
}

// ----- closed forms -----

/// Closed form of `D_{M_t}`: the value `M_t` on the coset `I_t(0)` and `0`
/// elsewhere.
pub fn dirichlet_block(
    gen: &GeneratorSequence,
    rank: usize,
    resolution: usize,
) -> Result<StepFunction> {
    check_rank(gen, rank, resolution)?;
    let coset = gen.coset(rank, &gen.zero())?;
    let indicator = StepFunction::indicator(gen, &coset, resolution)?;
    Ok(indicator.scale(Complex64::new(gen.cardinality(rank) as f64, 0.0)))
}

/// Closed form of `D_{s M_t}` for `1 <= s < m_t`:
/// `D_{M_t} * sum_{k=0}^{s-1} r_t^k` with `r_t` the rank-`t` coordinate
/// character.  Built on top of [`dirichlet_block`], independent of direct
/// summation.
pub fn dirichlet_scaled_block(
    gen: &GeneratorSequence,
    s: usize,
    rank: usize,
    resolution: usize,
) -> Result<StepFunction> {
    check_scale(gen, s, rank)?;
    check_index(gen, s * gen.cardinality(rank), resolution)?;
    let block = dirichlet_block(gen, rank, resolution)?;
    let roots = unit_roots(gen.radix(rank));
    let len = gen.cardinality(resolution);
    let factors: Vec<Complex64> = (0..len)
        .map(|i| {
            let digit = gen.point_digits(i, resolution)[rank];
            (0..s).map(|k| roots[(digit * k) % roots.len()]).sum()
        })
        .collect();
    let factor = StepFunction::new(gen, resolution, factors)?;
    block.zip_with(&factor, |a, b| a * b)
}

/// Closed form of `D_{s M_t - j}` for `1 <= j <= M_t - 1`:
/// `D_{s M_t} - psi_{s M_t - 1} * conj(D_j)`, with the first term from
/// [`dirichlet_scaled_block`].
pub fn dirichlet_near_block(
    gen: &GeneratorSequence,
    s: usize,
    rank: usize,
    j: usize,
    resolution: usize,
) -> Result<StepFunction> {
    check_scale(gen, s, rank)?;
    let block_index = s * gen.cardinality(rank);
    if j == 0 || j >= gen.cardinality(rank) {
        return Err(Error::OutOfRange(format!(
            "offset j must satisfy 1 <= j <= M_rank - 1, got j={j} at rank {rank}"
        )));
    }
    check_index(gen, block_index, resolution)?;
    let scaled = dirichlet_scaled_block(gen, s, rank, resolution)?;
    let twist = character_row(gen, block_index - 1, resolution)?;
    let small = dirichlet(gen, j, resolution)?;
    let values = scaled
        .values()
        .iter()
        .zip(&twist)
        .zip(small.values())
        .map(|((&d, &t), &s)| d - t * s.conj())
        .collect();
    StepFunction::new(gen, resolution, values)
}

/// Three-branch closed form of the Fejer kernel at a block index,
/// `K_{M_t}`: with `u` the first nonzero coordinate of `x`,
///
/// * `(M_t + 1) / 2` when `x` lies in `I_t(0)`;
/// * `M_u / (1 - r_u(x))` when zeroing coordinate `u` puts `x` in `I_t(0)`;
/// * `0` otherwise.
pub fn fejer_block_closed_form(
    gen: &GeneratorSequence,
    rank: usize,
    resolution: usize,
) -> Result<StepFunction> {
    check_rank(gen, rank, resolution)?;
    let len = gen.cardinality(resolution);
    let one = Complex64::new(1.0, 0.0);
    let values = (0..len)
        .map(|i| {
            let digits = gen.point_digits(i, resolution);
            match digits[..rank].iter().position(|&d| d != 0) {
                None => Complex64::new((gen.cardinality(rank) as f64 + 1.0) / 2.0, 0.0),
                Some(u) if digits[u + 1..rank].iter().all(|&d| d == 0) => {
                    let root = unit_roots(gen.radix(u))[digits[u]];
                    Complex64::new(gen.cardinality(u) as f64, 0.0) / (one - root)
                }
                Some(_) => Complex64::ZERO,
            }
        })
        .collect();
    StepFunction::new(gen, resolution, values)
}

// ----- closed-form verification sweeps -----

/// Checks `D_{M_t} = M_t 1_{I_t}` for every rank `t <= N`.
pub fn dirichlet_block_report(
    gen: &GeneratorSequence,
    resolution: usize,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("dirichlet-block")
        .param("m", gen)
        .param("resolution", resolution);
    for rank in 0..=resolution {
        let direct = dirichlet(gen, gen.cardinality(rank), resolution)?;
        let closed = dirichlet_block(gen, rank, resolution)?;
        let (dev, cell) = direct.max_deviation(&closed)?;
        report.observe_deviation(dev, || format!("rank={rank}, cell={cell}"));
    }
    Ok(report)
}

/// Checks `D_{s M_t} = D_{M_t} sum_{k<s} r_t^k` for every rank `t` and
/// every `1 <= s < m_t` with `s M_t <= M_N`.
pub fn dirichlet_scaled_block_report(
    gen: &GeneratorSequence,
    resolution: usize,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("dirichlet-scaled-block")
        .param("m", gen)
        .param("resolution", resolution);
    for rank in 0..resolution.min(gen.depth()) {
        for s in 1..gen.radix(rank) {
            if s * gen.cardinality(rank) > gen.cardinality(resolution) {
                break;
            }
            let direct = dirichlet(gen, s * gen.cardinality(rank), resolution)?;
            let closed = dirichlet_scaled_block(gen, s, rank, resolution)?;
            let (dev, cell) = direct.max_deviation(&closed)?;
            report.observe_deviation(dev, || format!("rank={rank}, s={s}, cell={cell}"));
        }
    }
    Ok(report)
}

/// Checks `D_{s M_t - j} = D_{s M_t} - psi_{s M_t - 1} conj(D_j)` for every
/// admissible `(t, s, j)` with `s M_t <= M_N` and `1 <= j <= M_t - 1`.
pub fn dirichlet_near_block_report(
    gen: &GeneratorSequence,
    resolution: usize,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("dirichlet-near-block")
        .param("m", gen)
        .param("resolution", resolution);
    for rank in 0..resolution.min(gen.depth()) {
        for s in 1..gen.radix(rank) {
            let block_index = s * gen.cardinality(rank);
            if block_index > gen.cardinality(resolution) {
                break;
            }
            for j in 1..gen.cardinality(rank) {
                let direct = dirichlet(gen, block_index - j, resolution)?;
                let closed = dirichlet_near_block(gen, s, rank, j, resolution)?;
                let (dev, cell) = direct.max_deviation(&closed)?;
                report.observe_deviation(dev, || {
                    format!("rank={rank}, s={s}, j={j}, cell={cell}")
                });
            }
        }
    }
    Ok(report)
}

/// Checks the three-branch closed form of `K_{M_t}` for every rank
/// `t <= N`, classifying each cell into its branch.
pub fn fejer_block_report(
    gen: &GeneratorSequence,
    resolution: usize,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("fejer-block")
        .param("m", gen)
        .param("resolution", resolution);
    for rank in 0..=resolution {
        let direct = fejer(gen, gen.cardinality(rank), resolution)?;
        let closed = fejer_block_closed_form(gen, rank, resolution)?;
        let (dev, cell) = direct.max_deviation(&closed)?;
        report.observe_deviation(dev, || format!("rank={rank}, cell={cell}"));
    }
    Ok(report)
}

// ----- cached kernel ladders for sweeps -----

/// Cache of all Dirichlet kernels `D_0 ... D_{M_N}` and their cumulative
/// sums `n K_n` on one grid, for parameter sweeps that would otherwise
/// recompute the same ladders per index.
pub struct KernelTable {
    gen: GeneratorSequence,
    resolution: usize,
    /// `dirichlet[n]` holds `D_n`; index range `0 ..= M_N`.
    dirichlet: Vec<Vec<Complex64>>,
    /// `scaled_fejer[n]` holds `n K_n = sum_{k=1}^{n} D_k`.
    scaled_fejer: Vec<Vec<Complex64>>,
}

impl KernelTable {
    pub fn new(gen: &GeneratorSequence, resolution: usize) -> Result<Self> {
        let basis = CharacterBasis::new(gen, resolution)?;
        let len = gen.cardinality(resolution);
        let max = len;
        let mut dirichlet = Vec::with_capacity(max + 1);
        let mut scaled_fejer = Vec::with_capacity(max + 1);
        dirichlet.push(vec![Complex64::ZERO; len]);
        scaled_fejer.push(vec![Complex64::ZERO; len]);
        for n in 1..=max {
            let mut d = dirichlet[n - 1].clone();
            for (v, r) in d.iter_mut().zip(basis.row(n - 1)) {
                *v += r;
            }
            let mut c = scaled_fejer[n - 1].clone();
            for (v, r) in c.iter_mut().zip(&d) {
                *v += r;
            }
            dirichlet.push(d);
            scaled_fejer.push(c);
        }
        Ok(Self {
            gen: gen.clone(),
            resolution,
            dirichlet,
            scaled_fejer,
        })
    }

    pub fn generator(&self) -> &GeneratorSequence {
        &self.gen
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Largest cached kernel index, `M_N`.
    pub fn max_index(&self) -> usize {
        self.dirichlet.len() - 1
    }

    pub fn dirichlet(&self, n: usize) -> Result<StepFunction> {
        self.cached(&self.dirichlet, n, "Dirichlet kernel")
    }

    /// `n K_n`, defined for all `n` (zero at `n = 0`).
    pub fn scaled_fejer(&self, n: usize) -> Result<StepFunction> {
        self.cached(&self.scaled_fejer, n, "scaled Fejer kernel")
    }

    pub fn fejer(&self, n: usize) -> Result<StepFunction> {
        if n == 0 {
            return Err(Error::OutOfRange("Fejer kernel needs n >= 1".into()));
        }
        Ok(self
            .scaled_fejer(n)?
            .scale(Complex64::new(1.0 / n as f64, 0.0)))
    }

    /// Unnormalized Norlund sum `sum_{k=1}^{n} q_{n-k} D_k`.
    pub fn norlund_sum(&self, q: &WeightSequence, n: usize) -> Result<StepFunction> {
        if n > self.max_index() {
            return Err(Error::OutOfRange(format!(
                "kernel index {n} exceeds cached range {}",
                self.max_index()
            )));
        }
        check_weight_range(q, n)?;
        let len = self.dirichlet[0].len();
        let mut sum = vec![Complex64::ZERO; len];
        for k in 1..=n {
            let weight = q.q(n - k);
            if weight == 0.0 {
                continue;
            }
            for (v, d) in sum.iter_mut().zip(&self.dirichlet[k]) {
                *v += weight * d;
            }
        }
        StepFunction::new(&self.gen, self.resolution, sum)
    }

    pub fn norlund(&self, q: &WeightSequence, n: usize) -> Result<StepFunction> {
        if n == 0 {
            return Err(Error::OutOfRange("Norlund kernel needs n >= 1".into()));
        }
        let normalizer = checked_normalizer(q, n)?;
        Ok(self
            .norlund_sum(q, n)?
            .scale(Complex64::new(1.0 / normalizer, 0.0)))
    }

    fn cached(&self, table: &[Vec<Complex64>], n: usize, what: &str) -> Result<StepFunction> {
        if n >= table.len() {
            return Err(Error::OutOfRange(format!(
                "{what} index {n} exceeds cached range {}",
                table.len() - 1
            )));
        }
        StepFunction::new(&self.gen, self.resolution, table[n].clone())
    }
}

// ----- block decomposition of the Norlund sum -----

/// Both sides of the block decomposition of the unnormalized Norlund sum
/// at `r`, together with their pointwise deviation.
///
/// For `s M_t < r <= (s+1) M_t` with `1 <= s < m_t`, the sum
/// `U_r = sum_{k=1}^{r} q_{r-k} D_k` (`= Q_r F_r` whenever `Q_r > 0`)
/// decomposes as
///
/// ```text
/// U_r = Q_r D_{sM_t}
///     - psi_{sM_t-1} [ sum_{l=1}^{sM_t-2} (q_{r-sM_t+l} - q_{r-sM_t+l+1}) l conj(K_l)
///                      + q_{r-1} (sM_t-1) conj(K_{sM_t-1}) ]
///     + psi_{sM_t} U_{r-sM_t}
/// ```
///
/// The unnormalized form keeps the identity meaningful even for weight
/// families with `q_0 = 0`, where `Q_1 = 0` makes the trailing normalized
/// kernel undefined.
pub fn block_decomposition(
    table: &KernelTable,
    q: &WeightSequence,
    r: usize,
    rank: usize,
    s: usize,
) -> Result<(StepFunction, StepFunction, VerificationReport)> {
    let gen = table.generator();
    check_scale(gen, s, rank)?;
    let block_index = s * gen.cardinality(rank);
    if r <= block_index || r > block_index + gen.cardinality(rank) {
        return Err(Error::OutOfRange(format!(
            "index r must satisfy s M_t < r <= (s+1) M_t, got r={r}, s={s}, M_t={}",
            gen.cardinality(rank)
        )));
    }
    if r > table.max_index() {
        return Err(Error::OutOfRange(format!(
            "index r={r} exceeds cached range {}",
            table.max_index()
        )));
    }
    check_weight_range(q, r)?;
    let resolution = table.resolution();
    let lhs = table.norlund_sum(q, r)?;

    let head = table
        .dirichlet(block_index)?
        .scale(Complex64::new(q.big_q(r), 0.0));
    // Bracketed middle term: summation-by-parts ladder of conjugated
    // scaled Fejer kernels.
    let mut middle = StepFunction::zero(gen, resolution)?;
    for l in 1..=block_index.saturating_sub(2) {
        let coefficient = q.q(r - block_index + l) - q.q(r - block_index + l + 1);
        if coefficient == 0.0 {
            continue;
        }
        let term = table.scaled_fejer(l)?;
        middle = middle.zip_with(&term, |acc, t| acc + coefficient * t.conj())?;
    }
    let last = table.scaled_fejer(block_index - 1)?;
    let q_edge = q.q(r - 1);
    middle = middle.zip_with(&last, |acc, t| acc + q_edge * t.conj())?;
    let twist = character_row(gen, block_index - 1, resolution)?;
    let tail_twist = character_row(gen, block_index, resolution)?;
    let tail = table.norlund_sum(q, r - block_index)?;

    let values = head
        .values()
        .iter()
        .zip(middle.values())
        .zip(&twist)
        .zip(&tail_twist)
        .zip(tail.values())
        .map(|((((&h, &m), &w), &tw), &t)| h - w * m + tw * t)
        .collect();
    let rhs = StepFunction::new(gen, resolution, values)?;

    let (dev, cell) = lhs.max_deviation(&rhs)?;
    let mut report = VerificationReport::new("norlund-block-decomposition")
        .param("m", gen)
        .param("weights", q.label())
        .param("r", r)
        .param("rank", rank)
        .param("s", s);
    report.observe_deviation(dev, || format!("cell={cell}"));
    Ok((lhs, rhs, report))
}

// ----- guards -----

fn check_index(gen: &GeneratorSequence, n: usize, resolution: usize) -> Result<()> {
    if resolution > gen.depth() {
        return Err(Error::Resolution(format!(
            "resolution {resolution} exceeds depth {}",
            gen.depth()
        )));
    }
    if n > gen.cardinality(resolution) {
        return Err(Error::Resolution(format!(
            "kernel index {n} is not representable at resolution {resolution} (max {})",
            gen.cardinality(resolution)
        )));
    }
    Ok(())
}

fn check_rank(gen: &GeneratorSequence, rank: usize, resolution: usize) -> Result<()> {
    if rank > resolution || resolution > gen.depth() {
        return Err(Error::Resolution(format!(
            "block rank {rank} needs rank <= resolution <= depth, got resolution {resolution}"
        )));
    }
    Ok(())
}

fn check_scale(gen: &GeneratorSequence, s: usize, rank: usize) -> Result<()> {
    if rank >= gen.depth() {
        return Err(Error::OutOfRange(format!(
            "rank {rank} exceeds the last coordinate {}",
            gen.depth() - 1
        )));
    }
    if s == 0 || s >= gen.radix(rank) {
        return Err(Error::OutOfRange(format!(
            "scale s must satisfy 1 <= s < m_rank = {}, got {s}",
            gen.radix(rank)
        )));
    }
    Ok(())
}

fn check_weight_range(q: &WeightSequence, n: usize) -> Result<()> {
    if n > 0 && q.n_max() < n - 1 {
        return Err(Error::OutOfRange(format!(
            "weight sequence covers indices up to {}, but index {} is required",
            q.n_max(),
            n - 1
        )));
    }
    Ok(())
}

fn checked_normalizer(q: &WeightSequence, n: usize) -> Result<f64> {
    check_weight_range(q, n)?;
    let normalizer = q.big_q(n);
    if normalizer <= 0.0 {
        return Err(Error::DegenerateWeights(format!(
            "normalizer Q_{n} = {normalizer} is not positive"
        )));
    }
    Ok(normalizer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::{analyze, convolve, partial_sum};
    use crate::SplitMix64;

    fn walsh3() -> GeneratorSequence {
        GeneratorSequence::uniform(2, 3).unwrap()
    }

    fn mixed() -> GeneratorSequence {
        GeneratorSequence::new(vec![2, 3, 2]).unwrap()
    }

    fn random_function(
        gen: &GeneratorSequence,
        resolution: usize,
        seed: u64,
    ) -> StepFunction {
        let mut rng = SplitMix64::new(seed);
        let values = (0..gen.cardinality(resolution))
            .map(|_| Complex64::new(2.0 * rng.next_f64() - 1.0, 2.0 * rng.next_f64() - 1.0))
            .collect();
        StepFunction::new(gen, resolution, values).unwrap()
    }

    #[test]
    fn dirichlet_base_cases() {
        let gen = mixed();
        let d0 = dirichlet(&gen, 0, 2).unwrap();
        assert!(d0.values().iter().all(|v| *v == Complex64::ZERO));
        let d1 = dirichlet(&gen, 1, 2).unwrap();
        assert!(d1.values().iter().all(|v| *v == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn walsh_dirichlet_two_is_an_indicator() {
        // D_2 = 2 on the half where the first coordinate vanishes.
        let gen = walsh3();
        let d2 = dirichlet(&gen, 2, 3).unwrap();
        for i in 0..8 {
            let expected = if i < 4 { 2.0 } else { 0.0 };
            assert_eq!(d2.value(i), Complex64::new(expected, 0.0));
        }
    }

    #[test]
    fn kernel_means_are_one() {
        let gen = mixed();
        let q = WeightSequence::inverse_sqrt(16);
        for n in 1..=12 {
            assert!((dirichlet(&gen, n, 3).unwrap().integral() - 1.0).norm() < 1e-12);
            assert!((fejer(&gen, n, 3).unwrap().integral() - 1.0).norm() < 1e-12);
            if n >= 2 {
                let f = norlund_kernel(&gen, &q, n, 3).unwrap();
                assert!((f.integral() - 1.0).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn fejer_values_match_hand_computation() {
        // K_2 = (D_1 + D_2)/2 = 3/2 where the first coordinate vanishes,
        // 1/2 elsewhere.
        let gen = walsh3();
        let k2 = fejer(&gen, 2, 3).unwrap();
        for i in 0..8 {
            let expected = if i < 4 { 1.5 } else { 0.5 };
            assert_eq!(k2.value(i), Complex64::new(expected, 0.0));
        }
        // K_4 at the point with first coordinate 1, rest 0.
        let k4 = fejer(&gen, 4, 3).unwrap();
        let e0 = gen.point_index(&[1, 0, 0]).unwrap();
        assert_eq!(k4.value(e0), Complex64::new(0.5, 0.0));
    }

    #[test]
    fn fejer_matches_spectral_form() {
        // n K_n = sum_{j<n} (n-j) psi_j: cross-check through the analyzer.
        let gen = mixed();
        for n in 1..=12 {
            let k = fejer(&gen, n, 3).unwrap();
            let spectrum = analyze(&k);
            for j in 0..gen.cardinality(3) {
                let expected = if j < n { (n - j) as f64 / n as f64 } else { 0.0 };
                assert!(
                    (spectrum.coefficient(j) - expected).norm() < 1e-12,
                    "n={n}, j={j}"
                );
            }
        }
    }

    #[test]
    fn constant_weights_reproduce_fejer_bitwise() {
        let gen = mixed();
        let q = WeightSequence::constant(12);
        for n in 1..=12 {
            let k = fejer(&gen, n, 3).unwrap();
            let f = norlund_kernel(&gen, &q, n, 3).unwrap();
            assert_eq!(k.values(), f.values(), "n={n}");
        }
    }

    #[test]
    fn cesaro_one_reproduces_fejer() {
        let gen = mixed();
        let q = WeightSequence::cesaro(1.0, 12).unwrap();
        for n in 1..=12 {
            let k = fejer(&gen, n, 3).unwrap();
            let f = norlund_kernel(&gen, &q, n, 3).unwrap();
            assert_eq!(k.values(), f.values(), "n={n}");
        }
    }

    #[test]
    fn norlund_kernel_at_one_is_the_first_character() {
        let gen = mixed();
        let q = WeightSequence::cesaro(0.5, 8).unwrap();
        let f = norlund_kernel(&gen, &q, 1, 2).unwrap();
        assert!(f.values().iter().all(|v| (*v - 1.0).norm() < 1e-15));
    }

    #[test]
    fn degenerate_normalizer_is_rejected() {
        let gen = walsh3();
        let q = WeightSequence::norlund_log(8);
        // Q_1 = q_0 = 0.
        assert!(matches!(
            norlund_kernel(&gen, &q, 1, 3),
            Err(Error::DegenerateWeights(_))
        ));
        assert!(norlund_kernel(&gen, &q, 2, 3).is_ok());
        // The unnormalized sum exists regardless.
        let u1 = norlund_kernel_sum(&gen, &q, 1, 3).unwrap();
        assert!(u1.values().iter().all(|v| *v == Complex64::ZERO));
    }

    #[test]
    fn spectral_form_matches_direct_kernel() {
        let gen = mixed();
        for (label, q) in [
            ("constant", WeightSequence::constant(12)),
            ("cesaro", WeightSequence::cesaro(0.5, 12).unwrap()),
            ("log", WeightSequence::norlund_log(12)),
        ] {
            for n in 2..=12 {
                let direct = norlund_kernel(&gen, &q, n, 3).unwrap();
                let spectrum = analyze(&direct);
                let expected = norlund_spectrum(&gen, &q, n, 3).unwrap();
                for j in 0..gen.cardinality(3) {
                    assert!(
                        (spectrum.coefficient(j) - expected.coefficient(j)).norm() < 1e-12,
                        "{label}: n={n}, j={j}"
                    );
                }
            }
        }
    }

    #[test]
    fn closed_form_reports_are_exact_on_walsh_groups() {
        for depth in [3, 4] {
            let gen = GeneratorSequence::uniform(2, depth).unwrap();
            for report in [
                dirichlet_block_report(&gen, depth).unwrap(),
                dirichlet_scaled_block_report(&gen, depth).unwrap(),
                dirichlet_near_block_report(&gen, depth).unwrap(),
                fejer_block_report(&gen, depth).unwrap(),
            ] {
                assert_eq!(
                    report.max_deviation,
                    Some(0.0),
                    "{} not exact: {:?}",
                    report.identity,
                    report.argmax_witness
                );
            }
        }
    }

    #[test]
    fn closed_form_reports_hold_on_mixed_groups() {
        let gen = mixed();
        for report in [
            dirichlet_block_report(&gen, 3).unwrap(),
            dirichlet_scaled_block_report(&gen, 3).unwrap(),
            dirichlet_near_block_report(&gen, 3).unwrap(),
            fejer_block_report(&gen, 3).unwrap(),
        ] {
            assert!(
                report.within(1e-12),
                "{}: {:?}",
                report.identity,
                report.max_deviation
            );
        }
    }

    #[test]
    fn scaled_block_matches_hand_example() {
        // D_4 = D_2 (1 + r_1) on a group with second radix 3.
        let gen = mixed();
        let closed = dirichlet_scaled_block(&gen, 2, 1, 3).unwrap();
        let direct = dirichlet(&gen, 4, 3).unwrap();
        let (dev, _) = closed.max_deviation(&direct).unwrap();
        assert!(dev < 1e-12);
    }

    #[test]
    fn near_block_walsh_base_case() {
        // D_1 = D_2 - psi_1 conj(D_1).
        let gen = walsh3();
        let closed = dirichlet_near_block(&gen, 1, 1, 1, 3).unwrap();
        let direct = dirichlet(&gen, 1, 3).unwrap();
        assert_eq!(closed.values(), direct.values());
    }

    #[test]
    fn fejer_branch_values() {
        // Mixed group, rank 2: the inner branch value is (M_2 + 1)/2 = 3.5.
        let gen = mixed();
        let closed = fejer_block_closed_form(&gen, 2, 3).unwrap();
        assert_eq!(closed.value(0), Complex64::new(3.5, 0.0));
        // Zero branch: first coordinate nonzero and second nonzero.
        let cell = gen.point_index(&[1, 1, 0]).unwrap();
        assert_eq!(closed.value(cell), Complex64::ZERO);
    }

    #[test]
    fn abel_form_matches_direct_norlund() {
        let gen = mixed();
        for (label, q) in [
            ("constant", WeightSequence::constant(16)),
            ("cesaro:0.5", WeightSequence::cesaro(0.5, 16).unwrap()),
            ("norlund_log", WeightSequence::norlund_log(16)),
            ("inverse_sqrt", WeightSequence::inverse_sqrt(16)),
        ] {
            for n in 2..=12 {
                let direct = norlund_kernel(&gen, &q, n, 3).unwrap();
                let abel = norlund_kernel_abel(&gen, &q, n, 3).unwrap();
                let (dev, _) = direct.max_deviation(&abel).unwrap();
                assert!(dev < 1e-10, "{label}: n={n}, dev={dev}");
            }
        }
    }

    #[test]
    fn abel_form_is_exact_for_constant_weights() {
        // All difference coefficients vanish; only n K_n / n survives.
        let gen = walsh3();
        let q = WeightSequence::constant(8);
        for n in 1..=8 {
            let abel = norlund_kernel_abel(&gen, &q, n, 3).unwrap();
            let k = fejer(&gen, n, 3).unwrap();
            let (dev, _) = abel.max_deviation(&k).unwrap();
            assert_eq!(dev, 0.0, "n={n}");
        }
    }

    #[test]
    fn scalar_abel_identity() {
        for q in [
            WeightSequence::constant(64),
            WeightSequence::cesaro(0.5, 64).unwrap(),
            WeightSequence::norlund_log(64),
            WeightSequence::inverse_sqrt(64),
        ] {
            for n in 1..=64 {
                let dev = abel_normalizer_deviation(&q, n).unwrap();
                assert!(dev < 1e-12, "{}: n={n}, dev={dev}", q.label());
            }
        }
    }

    #[test]
    fn block_decomposition_hand_example() {
        // Walsh group, rank 1, s = 1, r = 3, constant weights:
        // both sides equal 3 + 2 psi_1 + psi_2.
        let gen = walsh3();
        let table = KernelTable::new(&gen, 3).unwrap();
        let q = WeightSequence::constant(8);
        let (lhs, rhs, report) = block_decomposition(&table, &q, 3, 1, 1).unwrap();
        assert_eq!(report.max_deviation, Some(0.0));
        let psi1 = character_row(&gen, 1, 3).unwrap();
        let psi2 = character_row(&gen, 2, 3).unwrap();
        for i in 0..8 {
            let expected = 3.0 + 2.0 * psi1[i] + psi2[i];
            assert_eq!(lhs.value(i), expected);
            assert_eq!(rhs.value(i), expected);
        }
    }

    #[test]
    fn block_decomposition_sweep() {
        let gen = mixed();
        let table = KernelTable::new(&gen, 3).unwrap();
        let m = gen.cardinality(3);
        for q in [
            WeightSequence::constant(m),
            WeightSequence::cesaro(0.5, m).unwrap(),
            WeightSequence::norlund_log(m),
            WeightSequence::inverse_sqrt(m),
        ] {
            for rank in 0..gen.depth() {
                for s in 1..gen.radix(rank) {
                    let block = s * gen.cardinality(rank);
                    for r in block + 1..=(block + gen.cardinality(rank)).min(m) {
                        let (_, _, report) =
                            block_decomposition(&table, &q, r, rank, s).unwrap();
                        assert!(
                            report.within(1e-10),
                            "{}: rank={rank}, s={s}, r={r}, dev={:?}",
                            q.label(),
                            report.max_deviation
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn block_decomposition_validates_parameters() {
        let gen = walsh3();
        let table = KernelTable::new(&gen, 3).unwrap();
        let q = WeightSequence::constant(8);
        // r not in (s M_t, (s+1) M_t].
        assert!(block_decomposition(&table, &q, 2, 1, 1).is_err());
        assert!(block_decomposition(&table, &q, 5, 1, 1).is_err());
        // s out of range for radix 2.
        assert!(block_decomposition(&table, &q, 3, 1, 2).is_err());
    }

    #[test]
    fn kernel_table_matches_free_functions() {
        let gen = mixed();
        let table = KernelTable::new(&gen, 3).unwrap();
        let q = WeightSequence::cesaro(0.5, 12).unwrap();
        for n in 1..=12 {
            assert_eq!(
                table.dirichlet(n).unwrap().values(),
                dirichlet(&gen, n, 3).unwrap().values()
            );
            let (dev, _) = table
                .fejer(n)
                .unwrap()
                .max_deviation(&fejer(&gen, n, 3).unwrap())
                .unwrap();
            assert!(dev < 1e-13);
            let (dev, _) = table
                .norlund(&q, n)
                .unwrap()
                .max_deviation(&norlund_kernel(&gen, &q, n, 3).unwrap())
                .unwrap();
            assert!(dev < 1e-13, "n={n}");
        }
    }

    #[test]
    fn partial_sum_is_convolution_with_dirichlet() {
        for gen in [walsh3(), mixed()] {
            let resolution = gen.depth();
            for seed in 0..5 {
                let f = random_function(&gen, resolution, seed);
                for n in [1, 2, 3, gen.cardinality(resolution)] {
                    let d = dirichlet(&gen, n, resolution).unwrap();
                    let via_kernel = convolve(&f, &d).unwrap();
                    let via_spectrum = partial_sum(&f, n).unwrap();
                    let (dev, _) = via_kernel.max_deviation(&via_spectrum).unwrap();
                    assert!(dev < 1e-11, "seed={seed}, n={n}, dev={dev}");
                }
            }
        }
    }

    #[test]
    fn out_of_range_parameters_error() {
        let gen = walsh3();
        assert!(dirichlet(&gen, 9, 3).is_err(), "index beyond grid");
        assert!(dirichlet(&gen, 4, 4).is_err(), "resolution beyond depth");
        assert!(fejer(&gen, 0, 3).is_err());
        assert!(dirichlet_near_block(&gen, 1, 1, 0, 3).is_err());
        assert!(dirichlet_near_block(&gen, 1, 1, 2, 3).is_err());
        assert!(dirichlet_scaled_block(&gen, 2, 1, 3).is_err(), "s = m_t");
    }
}
