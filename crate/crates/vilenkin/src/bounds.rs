//! Empirical constants for the kernel majorant and integral bounds.
//!
//! Each check here sweeps a ratio `quantity / bound_expression` whose
//! boundedness the summability theory asserts, and reports the observed
//! sup together with where it was attained.  A finite, stable constant is
//! evidence for the bound at desk scale; a constant that grows with the
//! sweep range is evidence against it.  Cells where bound and quantity
//! both vanish are skipped; a vanishing bound against a nonvanishing
//! quantity is counted as a violation.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::group::{Coset, GeneratorSequence};
use crate::kernels::{norlund_kernel_sum, KernelTable};
use crate::report::VerificationReport;
use crate::weights::WeightSequence;

/// Empirical constant for the Fejer kernel majorant
/// `n |K_n(x)| <= c * sum_{A=0}^{|n|} M_A |K_{M_A}(x)|`,
/// swept over `1 <= n <= n_max` and all rank-`N` cells.
pub fn fejer_majorant_report(
    gen: &GeneratorSequence,
    n_max: usize,
    resolution: usize,
) -> Result<VerificationReport> {
    let table = KernelTable::new(gen, resolution)?;
    if n_max == 0 || n_max > table.max_index() {
        return Err(Error::OutOfRange(format!(
            "sweep range must satisfy 1 <= n_max <= {}, got {n_max}",
            table.max_index()
        )));
    }
    let majorants = block_majorants(gen, &table, 1.0, resolution)?;
    let mut report = VerificationReport::new("fejer-kernel-majorant")
        .param("m", gen)
        .param("resolution", resolution)
        .param("n_max", n_max);
    let mut violations = 0usize;
    for n in 1..=n_max {
        let order = order_within(gen, n, resolution);
        let scaled = table.scaled_fejer(n)?;
        for (cell, value) in scaled.values().iter().enumerate() {
            let numerator = value.norm();
            let denominator = majorants[order][cell];
            match classify_cell(numerator, denominator) {
                CellKind::Skip => {}
                CellKind::Violation => violations += 1,
                CellKind::Ratio(ratio) => {
                    report.observe_ratio(ratio, || format!("n={n}, cell={cell}"));
                }
            }
        }
    }
    report.set_param("violations", violations);
    Ok(report)
}

/// Sup of a bounded ratio over one index block `[M_j, M_{j+1})`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct BlockRatio {
    /// Block order `j`: indices with `M_j <= n < M_{j+1}`.
    pub order: usize,
    pub lo: usize,
    pub hi: usize,
    pub sup: f64,
    pub argmax_n: usize,
    pub argmax_cell: usize,
}

/// Outcome of the Norlund kernel majorant sweep, with per-block structure:
/// a genuine bound shows block sups that stop growing.
#[derive(Debug, Clone, serde::Serialize)]
pub struct MajorantReport {
    pub identity: String,
    pub parameters: BTreeMap<String, String>,
    pub empirical_constant: f64,
    pub argmax_witness: String,
    /// Sup of the ratio restricted to each block `[M_j, M_{j+1})`.
    pub block_sups: Vec<BlockRatio>,
    /// Cells with a vanishing bound against a nonvanishing quantity.
    pub violations: usize,
    /// Indices skipped because the normalizer `Q_n` vanishes there.
    pub skipped: usize,
}

impl MajorantReport {
    /// Flattened form for uniform serialization alongside identity checks.
    pub fn to_verification(&self) -> VerificationReport {
        let mut report = VerificationReport::new(self.identity.clone());
        report.parameters = self.parameters.clone();
        for block in &self.block_sups {
            report.set_param(
                &format!("block_sup_{:02}", block.order),
                crate::step::format_f64(block.sup),
            );
        }
        report.set_param("violations", self.violations);
        report.set_param("skipped", self.skipped);
        report.empirical_constant = Some(self.empirical_constant);
        report.argmax_witness = Some(self.argmax_witness.clone());
        report
    }
}

/// Empirical constant for the Norlund kernel majorant: for non-increasing
/// weights satisfying the growth conditions at exponent `alpha`,
/// `|F_n(x)| <= (c / n^alpha) * sum_{j=0}^{|n|} M_j^alpha |K_{M_j}(x)|`.
///
/// Sweeps `n^alpha |F_n(x)| / sum_j M_j^alpha |K_{M_j}(x)|` over
/// `1 <= n <= n_max` (skipping indices with `Q_n = 0`) and reports the
/// global sup plus the sup within each block `[M_j, M_{j+1})` — the
/// constant is credible only if the block sups stop growing.
pub fn norlund_majorant_report(
    gen: &GeneratorSequence,
    q: &WeightSequence,
    alpha: f64,
    n_max: usize,
    resolution: usize,
) -> Result<MajorantReport> {
    if !q.non_increasing() {
        return Err(Error::Contract(
            "the kernel majorant applies to non-increasing weights only".into(),
        ));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Contract(format!(
            "majorant exponent must lie in (0, 1], got {alpha}"
        )));
    }
    let table = KernelTable::new(gen, resolution)?;
    if n_max == 0 || n_max > table.max_index() {
        return Err(Error::OutOfRange(format!(
            "sweep range must satisfy 1 <= n_max <= {}, got {n_max}",
            table.max_index()
        )));
    }
    let majorants = block_majorants(gen, &table, alpha, resolution)?;
    let mut parameters = BTreeMap::new();
    parameters.insert("m".into(), gen.to_string());
    parameters.insert("weights".into(), q.label().to_string());
    parameters.insert("alpha".into(), alpha.to_string());
    parameters.insert("resolution".into(), resolution.to_string());
    parameters.insert("n_max".into(), n_max.to_string());

    let mut global = (0.0f64, String::new());
    let mut blocks: Vec<BlockRatio> = Vec::new();
    let mut violations = 0usize;
    let mut skipped = 0usize;
    for n in 1..=n_max {
        if q.big_q(n) <= 0.0 {
            skipped += 1;
            continue;
        }
        let order = order_within(gen, n, resolution);
        let kernel = table.norlund(q, n)?;
        let weight = (n as f64).powf(alpha);
        for (cell, value) in kernel.values().iter().enumerate() {
            let numerator = weight * value.norm();
            let denominator = majorants[order][cell];
            let ratio = match classify_cell(numerator, denominator) {
                CellKind::Skip => continue,
                CellKind::Violation => {
                    violations += 1;
                    continue;
                }
                CellKind::Ratio(r) => r,
            };
            if ratio > global.0 {
                global = (ratio, format!("n={n}, cell={cell}"));
            }
            match blocks.last_mut() {
                Some(last) if last.order == order => {
                    last.hi = n;
                    if ratio > last.sup {
                        last.sup = ratio;
                        last.argmax_n = n;
                        last.argmax_cell = cell;
                    }
                }
                _ => blocks.push(BlockRatio {
                    order,
                    lo: n,
                    hi: n,
                    sup: ratio,
                    argmax_n: n,
                    argmax_cell: cell,
                }),
            }
        }
    }
    Ok(MajorantReport {
        identity: "norlund-kernel-majorant".into(),
        parameters,
        empirical_constant: global.0,
        argmax_witness: global.1,
        block_sups: blocks,
        violations,
        skipped,
    })
}

/// Per-family outcome of the translated-kernel integral bound.
#[derive(Debug, Clone, serde::Serialize)]
pub struct FamilyBound {
    /// `pair` (two fixed nonzero coordinates) or `single` (one).
    pub family: &'static str,
    pub cosets: usize,
    pub empirical_constant: f64,
    pub argmax_witness: String,
}

/// Outcome of the translated-kernel integral check over the complement
/// decomposition.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ComplementBoundReport {
    pub identity: String,
    pub parameters: BTreeMap<String, String>,
    pub pair_family: FamilyBound,
    pub single_family: FamilyBound,
    /// Max of the two family constants.
    pub empirical_constant: f64,
}

impl ComplementBoundReport {
    pub fn to_verification(&self) -> VerificationReport {
        let mut report = VerificationReport::new(self.identity.clone());
        report.parameters = self.parameters.clone();
        report.set_param(
            "pair_family_constant",
            crate::step::format_f64(self.pair_family.empirical_constant),
        );
        report.set_param(
            "single_family_constant",
            crate::step::format_f64(self.single_family.empirical_constant),
        );
        report.empirical_constant = Some(self.empirical_constant);
        report.argmax_witness = Some(
            if self.pair_family.empirical_constant >= self.single_family.empirical_constant {
                self.pair_family.argmax_witness.clone()
            } else {
                self.single_family.argmax_witness.clone()
            },
        );
        report
    }
}

/// Empirical constants for the integral bound on translated Norlund
/// kernels with `r` beyond the grid scale: for `r >= M_N`,
///
/// * on a pair coset `I_{l+1}(x_k e_k + x_l e_l)`:
///   `int_{I_N} |F_r(x - t)| dt <= c * M_l^alpha M_k / (r^alpha M_N)`;
/// * on a single coset `I_N(x_k e_k)`:
///   `int_{I_N} |F_r(x - t)| dt <= c * M_k / M_N`.
///
/// Since `t` ranges over `I_N(0)`, the translated integral equals the
/// integral of `|F_r|` over the coset `I_N(x)`, evaluated exactly at
/// resolution `|r| + 1` where `F_r` is representable.  The sup is taken
/// over every rank-`N` coset inside each decomposition coset.
pub fn complement_integral_report(
    gen: &GeneratorSequence,
    q: &WeightSequence,
    alpha: f64,
    r: usize,
    base_rank: usize,
) -> Result<ComplementBoundReport> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Contract(format!(
            "bound exponent must lie in (0, 1], got {alpha}"
        )));
    }
    let base_cells = gen.cardinality(base_rank.min(gen.depth()));
    if base_rank == 0 || base_rank + 1 > gen.depth() {
        return Err(Error::OutOfRange(format!(
            "base rank must satisfy 1 <= N <= {}, got {base_rank}",
            gen.depth() - 1
        )));
    }
    if r < base_cells {
        return Err(Error::OutOfRange(format!(
            "index r must satisfy r >= M_N = {base_cells}, got {r}"
        )));
    }
    let resolution = gen.min_resolution(r)?;
    // |F_r| integrated over each rank-N coset; cosets are contiguous cell
    // ranges, so one pass accumulates all integrals.
    let kernel = norlund_kernel_sum(gen, q, r, resolution)?;
    let normalizer = q.big_q(r);
    if normalizer <= 0.0 {
        return Err(Error::DegenerateWeights(format!(
            "normalizer Q_{r} = {normalizer} is not positive"
        )));
    }
    let total_cells = gen.cardinality(resolution);
    let width = total_cells / base_cells;
    let integrals: Vec<f64> = (0..base_cells)
        .map(|b| {
            let cells = &kernel.values()[b * width..(b + 1) * width];
            cells.iter().map(|v| v.norm()).sum::<f64>() / (normalizer * total_cells as f64)
        })
        .collect();

    let mut pair = FamilyBound {
        family: "pair",
        cosets: 0,
        empirical_constant: 0.0,
        argmax_witness: String::new(),
    };
    let mut single = FamilyBound {
        family: "single",
        cosets: 0,
        empirical_constant: 0.0,
        argmax_witness: String::new(),
    };
    let r_alpha = (r as f64).powf(alpha);
    for coset in gen.complement_decomposition(base_rank)? {
        let nonzero: Vec<usize> = (0..coset.rank())
            .filter(|&i| coset.anchor().digit(i) != 0)
            .collect();
        let (family, bound) = match nonzero.as_slice() {
            [k, l] => {
                let bound = (gen.cardinality(*l) as f64).powf(alpha)
                    * gen.cardinality(*k) as f64
                    / (r_alpha * base_cells as f64);
                (&mut pair, bound)
            }
            [k] => (&mut single, gen.cardinality(*k) as f64 / base_cells as f64),
            _ => unreachable!("decomposition anchors have one or two nonzero digits"),
        };
        family.cosets += 1;
        observe_coset(gen, &coset, base_rank, &integrals, bound, family)?;
    }
    let empirical_constant = pair.empirical_constant.max(single.empirical_constant);
    let mut parameters = BTreeMap::new();
    parameters.insert("m".into(), gen.to_string());
    parameters.insert("weights".into(), q.label().to_string());
    parameters.insert("alpha".into(), alpha.to_string());
    parameters.insert("r".into(), r.to_string());
    parameters.insert("base_rank".into(), base_rank.to_string());
    parameters.insert("resolution".into(), resolution.to_string());
    Ok(ComplementBoundReport {
        identity: "translated-kernel-integrals".into(),
        parameters,
        pair_family: pair,
        single_family: single,
        empirical_constant,
    })
}

fn observe_coset(
    gen: &GeneratorSequence,
    coset: &Coset,
    base_rank: usize,
    integrals: &[f64],
    bound: f64,
    family: &mut FamilyBound,
) -> Result<()> {
    // Rank-N sub-cosets of the decomposition coset, as base-cell indices.
    for b in coset.point_range(gen, base_rank)? {
        let ratio = integrals[b] / bound;
        if ratio > family.empirical_constant {
            family.empirical_constant = ratio;
            family.argmax_witness = format!("coset={coset}, base_cell={b}");
        }
    }
    Ok(())
}

/// `majorants[j][cell] = sum_{A=0}^{j} M_A^alpha |K_{M_A}(cell)|`.
fn block_majorants(
    gen: &GeneratorSequence,
    table: &KernelTable,
    alpha: f64,
    resolution: usize,
) -> Result<Vec<Vec<f64>>> {
    let len = gen.cardinality(resolution);
    let mut majorants: Vec<Vec<f64>> = Vec::with_capacity(resolution + 1);
    let mut running = vec![0.0f64; len];
    for a in 0..=resolution {
        let block = gen.cardinality(a);
        let fejer = table.fejer(block)?;
        let scale = (block as f64).powf(alpha);
        for (acc, v) in running.iter_mut().zip(fejer.values()) {
            *acc += scale * v.norm();
        }
        majorants.push(running.clone());
    }
    Ok(majorants)
}

/// Largest `j <= resolution` with `M_j <= n`.
fn order_within(gen: &GeneratorSequence, n: usize, resolution: usize) -> usize {
    (0..=resolution)
        .rev()
        .find(|&j| gen.cardinality(j) <= n)
        .expect("M_0 = 1 <= n for n >= 1")
}

enum CellKind {
    Skip,
    Violation,
    Ratio(f64),
}

fn classify_cell(numerator: f64, denominator: f64) -> CellKind {
    if denominator == 0.0 {
        if numerator == 0.0 {
            CellKind::Skip
        } else {
            CellKind::Violation
        }
    } else {
        CellKind::Ratio(numerator / denominator)
    }
}
