//! The `kernel` subcommand: evaluates one summability kernel on its grid
//! and writes the cell values (and optionally the coefficient table).

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, ValueEnum};
use vilenkin::kernels::{dirichlet, fejer, norlund_kernel};
use vilenkin::transform::analyze;
use vilenkin::{GeneratorSequence, StepFunction, WeightSequence};

use crate::output::{format_f64, target_path, write_atomic, OutputFormat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelKind {
    Dirichlet,
    Fejer,
    Norlund,
}

impl KernelKind {
    fn label(self) -> &'static str {
        match self {
            KernelKind::Dirichlet => "dirichlet",
            KernelKind::Fejer => "fejer",
            KernelKind::Norlund => "norlund",
        }
    }
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    /// Group radices, comma-separated.
    #[arg(long = "m", default_value = "2,2,2")]
    pub m: String,
    /// Kernel family.
    #[arg(long, value_enum, default_value_t = KernelKind::Fejer)]
    pub kind: KernelKind,
    /// Kernel index (>= 1).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    /// Weight family for the weighted kernel.
    #[arg(long, default_value = "constant")]
    pub weights: String,
    /// Grid resolution; defaults to one rank past the index's leading
    /// digit, so the kernel's plateau structure stays visible.
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Also write the kernel's coefficient table.
    #[arg(long)]
    pub spectrum: bool,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

pub fn run(args: &KernelArgs) -> Result<()> {
    let gen = GeneratorSequence::parse(&args.m)?;
    let n = args.n as usize;
    let resolution = match args.resolution {
        Some(r) => r,
        None => gen
            .order_of(n)
            .map(|order| (order + 1).min(gen.depth()))
            .unwrap_or_else(|_| gen.depth()),
    };
    let kernel = match args.kind {
        KernelKind::Dirichlet => dirichlet(&gen, n, resolution)?,
        KernelKind::Fejer => fejer(&gen, n, resolution)?,
        KernelKind::Norlund => {
            let weights = WeightSequence::make(&args.weights, n)?;
            norlund_kernel(&gen, &weights, n, resolution)?
        }
    };

    let stem = format!("kernel_{}_n{n}", args.kind.label());
    let path = target_path(&args.out, &stem, args.format.extension())?;
    write_atomic(&path, &render_function(&kernel, args.format)?)?;
    println!(
        "kernel {} n={n} on {} at resolution {resolution}: {} cells -> {}",
        args.kind.label(),
        gen,
        kernel.len(),
        path.display()
    );

    if args.spectrum {
        let spectrum = analyze(&kernel);
        let spectrum_path =
            target_path(&args.out, &format!("{stem}_spectrum"), args.format.extension())?;
        let content = match args.format {
            OutputFormat::Csv => {
                let mut buffer = Vec::new();
                spectrum.write_csv(&mut buffer)?;
                String::from_utf8(buffer).expect("csv output is ascii")
            }
            OutputFormat::Json => {
                render_rows("frequency", spectrum.coefficients().iter().copied())
            }
        };
        write_atomic(&spectrum_path, &content)?;
        println!(
            "kernel {} n={n} coefficients -> {}",
            args.kind.label(),
            spectrum_path.display()
        );
    }
    Ok(())
}

/// Cell values only, so two spellings of the same kernel (for example the
/// averaging kernel against the constant-weight family) produce identical
/// bytes.
fn render_function(f: &StepFunction, format: OutputFormat) -> Result<String> {
    Ok(match format {
        OutputFormat::Csv => {
            let mut buffer = Vec::new();
            f.write_csv(&mut buffer)?;
            String::from_utf8(buffer).expect("csv output is ascii")
        }
        OutputFormat::Json => render_rows("coset_index", f.values().iter().copied()),
    })
}

fn render_rows(
    key: &str,
    values: impl Iterator<Item = num_complex::Complex64>,
) -> String {
    let mut text = String::from("[\n");
    for (i, v) in values.enumerate() {
        if i > 0 {
            text.push_str(",\n");
        }
        let _ = write!(
            text,
            "  {{\"{key}\": {i}, \"re\": \"{}\", \"im\": \"{}\"}}",
            format_f64(v.re),
            format_f64(v.im)
        );
    }
    text.push_str("\n]\n");
    text
}
