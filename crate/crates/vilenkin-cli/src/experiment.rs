//! The `experiment` subcommand: seeded, reproducible numerical
//! experiments emitting per-row tables plus a trailing summary row with
//! the global maximum.

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{anyhow, Result};
use clap::{Args, ValueEnum};
use num_complex::Complex64;
use vilenkin::analysis::{make_atom, AtomProfile};
use vilenkin::characters::character_row;
use vilenkin::maximal::{atom_integral_experiment, background_sums, strong_sum};
use vilenkin::{ExperimentGrid, GeneratorSequence, SplitMix64, StepFunction, WeightSequence};

use crate::output::{format_f64, target_path, write_atomic, OutputFormat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// Tail integrals of maximal means of random atoms across support
    /// levels and window sizes.
    AtomIntegral,
    /// Logarithmic averages of mean integrals against the maximal-function
    /// reference, per atom and window.
    StrongSum,
    /// The three background averages of partial sums, averaging means, and
    /// deviations along a doubling index ladder.
    Background,
}

impl Kind {
    fn label(self) -> &'static str {
        match self {
            Kind::AtomIntegral => "atom-integral",
            Kind::StrongSum => "strong-sum",
            Kind::Background => "background",
        }
    }
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    /// Group radices, comma-separated.
    #[arg(long = "m", default_value = "2,2,2,2,2")]
    pub m: String,
    /// Weight family driving the means.
    #[arg(long, default_value = "constant")]
    pub weights: String,
    /// Weight exponent.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Integrability exponent; defaults to `1/(1+alpha)` for atom
    /// experiments and `1` for the background averages.
    #[arg(long)]
    pub p: Option<f64>,
    /// Inclusive range of support levels (atom-integral) or window orders
    /// (strong-sum), written `a..b`.
    #[arg(long = "N", value_parser = parse_range)]
    pub levels: Option<(usize, usize)>,
    /// Window sizes as multiples of the support scale.
    #[arg(long, value_delimiter = ',', default_value = "2,4,8")]
    pub factors: Vec<usize>,
    /// Atoms (or random probes) per configuration.
    #[arg(long, default_value_t = 20)]
    pub atoms: usize,
    /// Base seed; every atom and probe derives its own stream from it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Support level for strong-sum atoms.
    #[arg(long, default_value_t = 1)]
    pub level: usize,
    /// Top index for the background ladder.
    #[arg(long = "r-max", default_value_t = 4096)]
    pub r_max: usize,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

fn parse_range(text: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| format!("expected a..b, got {text}"))?;
    let lo: usize = lo.trim().parse().map_err(|e| format!("bad start: {e}"))?;
    let hi: usize = hi.trim().parse().map_err(|e| format!("bad end: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

pub fn run(args: &ExperimentArgs) -> Result<()> {
    let gen = GeneratorSequence::parse(&args.m)?;
    let (header, rows, summary) = match args.kind {
        Kind::AtomIntegral => atom_integral(&gen, args)?,
        Kind::StrongSum => strong_sum_table(&gen, args)?,
        Kind::Background => background(&gen, args)?,
    };

    let stem = format!("experiment_{}", args.kind.label());
    let path = target_path(&args.out, &stem, args.format.extension())?;
    let content = match args.format {
        OutputFormat::Csv => render_csv(&header, &rows, &summary),
        OutputFormat::Json => render_json(&header, &rows, &summary),
    };
    write_atomic(&path, &content)?;
    println!(
        "experiment {}: {} rows, global max {} -> {}",
        args.kind.label(),
        rows.len(),
        summary,
        path.display()
    );
    Ok(())
}

type Table = (Vec<&'static str>, Vec<Vec<String>>, String);

fn atom_integral(gen: &GeneratorSequence, args: &ExperimentArgs) -> Result<Table> {
    let (level_lo, level_hi) = args.levels.unwrap_or((1, 3));
    let levels: Vec<usize> = (level_lo..=level_hi).collect();
    let top_level = *levels.last().expect("range is nonempty");
    let top_factor = args.factors.iter().copied().max().unwrap_or(2);
    if top_level + 1 > gen.depth() {
        return Err(anyhow!(
            "support level {top_level} needs depth > {top_level}, group {gen} has {}",
            gen.depth()
        ));
    }
    let weights = WeightSequence::make(&args.weights, top_factor * gen.cardinality(top_level))?;
    let grid = ExperimentGrid {
        levels,
        n_max_factors: args.factors.clone(),
        atom_count: args.atoms,
        seed: args.seed,
        p: args.p.unwrap_or(1.0 / (1.0 + args.alpha)),
    };
    let report = atom_integral_experiment(gen, &weights, args.alpha, &grid)?;
    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }
    let rows = report
        .table
        .iter()
        .map(|row| {
            vec![
                row.level.to_string(),
                row.n_max.to_string(),
                row.atom_seed.to_string(),
                format_f64(row.value),
            ]
        })
        .collect();
    Ok((
        vec!["N", "n_max", "atom_seed", "value"],
        rows,
        format_f64(report.max_value),
    ))
}

fn strong_sum_table(gen: &GeneratorSequence, args: &ExperimentArgs) -> Result<Table> {
    let (order_lo, order_hi) = args.levels.unwrap_or((3, 5));
    if order_hi > gen.depth() {
        return Err(anyhow!(
            "window order {order_hi} exceeds group depth {}",
            gen.depth()
        ));
    }
    if args.level + 1 > gen.depth() {
        return Err(anyhow!(
            "support level {} needs depth > {}, group {gen} has {}",
            args.level,
            args.level,
            gen.depth()
        ));
    }
    let p = args.p.unwrap_or(1.0 / (1.0 + args.alpha));
    let weights = WeightSequence::make(&args.weights, gen.cardinality(order_hi))?;
    let mut rows = Vec::new();
    let mut max_ratio = 0.0f64;
    for index in 0..args.atoms {
        let atom_seed = SplitMix64::derive_seed(args.seed, index as u64);
        let atom = make_atom(gen, p, args.level, AtomProfile::Random(atom_seed))?;
        for order in order_lo..=order_hi {
            let n = gen.cardinality(order);
            let report = strong_sum(&weights, args.alpha, atom.function(), n)?;
            max_ratio = max_ratio.max(report.ratio);
            rows.push(vec![
                order.to_string(),
                n.to_string(),
                atom_seed.to_string(),
                format_f64(report.value),
                format_f64(report.reference),
                format_f64(report.ratio),
            ]);
        }
    }
    Ok((
        vec!["order", "n", "atom_seed", "value", "reference", "ratio"],
        rows,
        format_f64(max_ratio),
    ))
}

/// Probe 0 is the first nonconstant character; later probes are seeded
/// random functions on the full grid.
fn background(gen: &GeneratorSequence, args: &ExperimentArgs) -> Result<Table> {
    let depth = gen.depth();
    let p = args.p.unwrap_or(1.0);
    if args.r_max < 2 {
        return Err(anyhow!("background ladder needs --r-max >= 2"));
    }
    let mut probes = vec![(
        0u64,
        StepFunction::new(gen, depth, character_row(gen, 1, depth)?)?,
    )];
    for index in 0..args.atoms {
        let probe_seed = SplitMix64::derive_seed(args.seed, index as u64);
        let mut rng = SplitMix64::new(probe_seed);
        let values: Vec<Complex64> = (0..gen.cardinality(depth))
            .map(|_| Complex64::new(2.0 * rng.next_f64() - 1.0, 2.0 * rng.next_f64() - 1.0))
            .collect();
        probes.push((probe_seed, StepFunction::new(gen, depth, values)?));
    }

    let mut ladder = Vec::new();
    let mut n = 2usize;
    while n < args.r_max {
        ladder.push(n);
        n *= 2;
    }
    ladder.push(args.r_max);

    let mut rows = Vec::new();
    let mut max_deviation = 0.0f64;
    for (probe, (probe_seed, f)) in probes.iter().enumerate() {
        for &n in &ladder {
            let sums = background_sums(f, p, n)?;
            if n == args.r_max {
                max_deviation = max_deviation.max(sums.deviations);
            }
            rows.push(vec![
                probe.to_string(),
                probe_seed.to_string(),
                n.to_string(),
                format_f64(sums.partial_sums),
                format_f64(sums.fejer_means),
                format_f64(sums.deviations),
            ]);
        }
    }
    Ok((
        vec![
            "probe",
            "probe_seed",
            "n",
            "partial_sums",
            "fejer_means",
            "deviations",
        ],
        rows,
        format_f64(max_deviation),
    ))
}

/// Data rows, then one summary row: `max` in the first column, the global
/// maximum in the last, empty fields between.
fn render_csv(header: &[&str], rows: &[Vec<String>], summary: &str) -> String {
    let mut text = header.join(",");
    text.push('\n');
    for row in rows {
        text.push_str(&row.join(","));
        text.push('\n');
    }
    let _ = writeln!(
        text,
        "max,{}{summary}",
        ",".repeat(header.len().saturating_sub(2))
    );
    text
}

fn render_json(header: &[&str], rows: &[Vec<String>], summary: &str) -> String {
    let mut text = String::from("{\n  \"rows\": [\n");
    for (i, row) in rows.iter().enumerate() {
        if i > 0 {
            text.push_str(",\n");
        }
        text.push_str("    {");
        for (j, (key, value)) in header.iter().zip(row).enumerate() {
            if j > 0 {
                text.push_str(", ");
            }
            let _ = write!(text, "\"{key}\": \"{value}\"");
        }
        text.push('}');
    }
    let _ = write!(text, "\n  ],\n  \"global_max\": \"{summary}\"\n}}\n");
    text
}
