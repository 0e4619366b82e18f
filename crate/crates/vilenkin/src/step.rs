//! Step functions and spectra at finite resolution.
//!
//! A resolution-`N` step function is constant on the rank-`N` cosets, so it
//! is determined by one complex value per coset.  Values are stored in
//! lexicographic point order (digit 0 slowest), under which every coarser
//! coset is a contiguous block; integrals, conditional expectations, and
//! refinements are all block operations.
//!
//! A [`Spectrum`] stores Vilenkin-Fourier coefficients indexed by frequency
//! `0..M_N` in the generalized number system.  The two containers are kept
//! distinct because their index semantics differ even though both hold
//! `M_N` complex numbers.

use std::io::{BufRead, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{Coset, GeneratorSequence, GroupElement};

/// Formats a float with 17 significant digits, enough to round-trip any
/// IEEE double exactly.
pub(crate) fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// A complex-valued step function of resolution `N`: one value per
/// rank-`N` coset, in lexicographic point order.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    gen: GeneratorSequence,
    resolution: usize,
    values: Vec<Complex64>,
}

impl StepFunction {
    /// Wraps explicit values; the length must be `M_N`.
    pub fn new(gen: &GeneratorSequence, resolution: usize, values: Vec<Complex64>) -> Result<Self> {
        check_resolution(gen, resolution)?;
        let expected = gen.cardinality(resolution);
        if values.len() != expected {
            return Err(Error::StructureMismatch(format!(
                "resolution {resolution} needs {expected} values, got {}",
                values.len()
            )));
        }
        Ok(Self {
            gen: gen.clone(),
            resolution,
            values,
        })
    }

    /// Builds from real samples.
    pub fn from_real(gen: &GeneratorSequence, resolution: usize, values: &[f64]) -> Result<Self> {
        Self::new(
            gen,
            resolution,
            values.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    /// The constant function `c`.
    pub fn constant(gen: &GeneratorSequence, resolution: usize, c: Complex64) -> Result<Self> {
        check_resolution(gen, resolution)?;
        Ok(Self {
            gen: gen.clone(),
            resolution,
            values: vec![c; gen.cardinality(resolution)],
        })
    }

    /// The zero function.
    pub fn zero(gen: &GeneratorSequence, resolution: usize) -> Result<Self> {
        Self::constant(gen, resolution, Complex64::new(0.0, 0.0))
    }

    /// The indicator of a coset, evaluated at the given resolution.
    pub fn indicator(gen: &GeneratorSequence, coset: &Coset, resolution: usize) -> Result<Self> {
        let range = coset.point_range(gen, resolution)?;
        let mut values = vec![Complex64::new(0.0, 0.0); gen.cardinality(resolution)];
        for v in &mut values[range] {
            *v = Complex64::new(1.0, 0.0);
        }
        Ok(Self {
            gen: gen.clone(),
            resolution,
            values,
        })
    }

    pub fn generator(&self) -> &GeneratorSequence {
        &self.gen
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, index: usize) -> Complex64 {
        self.values[index]
    }

    /// Number of stored values `M_N`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Evaluates at a group element by truncating to the first `N` digits.
    pub fn eval(&self, x: &GroupElement) -> Result<Complex64> {
        self.gen.check_element(x)?;
        let prefix: Vec<usize> = x.digits()[..self.resolution].to_vec();
        Ok(self.values[self.gen.point_index(&prefix)?])
    }

    /// The Haar integral: the mean of the values.
    pub fn integral(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.len() as f64
    }

    /// The integral restricted to a coset of rank at most `N`.
    pub fn integral_over(&self, coset: &Coset) -> Result<Complex64> {
        let range = coset.point_range(&self.gen, self.resolution)?;
        let sum: Complex64 = self.values[range].iter().sum();
        Ok(sum / self.len() as f64)
    }

    /// The sup norm `max |f|`.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Pointwise combination with another function over the same group at
    /// the same resolution.
    pub fn zip_with(
        &self,
        other: &StepFunction,
        mut op: impl FnMut(Complex64, Complex64) -> Complex64,
    ) -> Result<StepFunction> {
        self.check_compatible(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| op(a, b))
            .collect();
        Ok(StepFunction {
            gen: self.gen.clone(),
            resolution: self.resolution,
            values,
        })
    }

    /// Pointwise map.
    pub fn map(&self, mut op: impl FnMut(Complex64) -> Complex64) -> StepFunction {
        StepFunction {
            gen: self.gen.clone(),
            resolution: self.resolution,
            values: self.values.iter().map(|&v| op(v)).collect(),
        }
    }

    /// Pointwise sum.
    pub fn add(&self, other: &StepFunction) -> Result<StepFunction> {
        self.zip_with(other, |a, b| a + b)
    }

    /// Pointwise difference.
    pub fn sub(&self, other: &StepFunction) -> Result<StepFunction> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Scalar multiple.
    pub fn scale(&self, c: Complex64) -> StepFunction {
        self.map(|v| c * v)
    }

    /// Re-expresses the function on a finer grid by repeating each value
    /// over the sub-cosets it covers.  Requires `N' >= N`.
    pub fn refine(&self, resolution: usize) -> Result<StepFunction> {
        if resolution < self.resolution {
            return Err(Error::Resolution(format!(
                "cannot refine from resolution {} down to {resolution}",
                self.resolution
            )));
        }
        check_resolution(&self.gen, resolution)?;
        let factor = self.gen.cardinality(resolution) / self.gen.cardinality(self.resolution);
        let mut values = Vec::with_capacity(self.len() * factor);
        for &v in &self.values {
            values.extend(std::iter::repeat_n(v, factor));
        }
        Ok(StepFunction {
            gen: self.gen.clone(),
            resolution,
            values,
        })
    }

    /// The conditional expectation at rank `n <= N`: averages over each
    /// rank-`n` coset, returned on the original grid.  This equals the
    /// partial sum `S_{M_n} f`.
    pub fn condition(&self, rank: usize) -> Result<StepFunction> {
        if rank > self.resolution {
            return Err(Error::OutOfRange(format!(
                "conditioning rank {rank} exceeds resolution {}",
                self.resolution
            )));
        }
        let block = self.len() / self.gen.cardinality(rank);
        let mut values = Vec::with_capacity(self.len());
        for chunk in self.values.chunks(block) {
            let mean = chunk.iter().sum::<Complex64>() / block as f64;
            values.extend(std::iter::repeat_n(mean, block));
        }
        Ok(StepFunction {
            gen: self.gen.clone(),
            resolution: self.resolution,
            values,
        })
    }

    /// The translate `x -> f(x - t)`.
    pub fn translate(&self, t: &GroupElement) -> Result<StepFunction> {
        self.gen.check_element(t)?;
        let prefix: Vec<usize> = t.digits()[..self.resolution].to_vec();
        let t_index = self.gen.point_index(&prefix)?;
        let values = (0..self.len())
            .map(|i| self.values[self.gen.point_sub(i, t_index, self.resolution)])
            .collect();
        Ok(StepFunction {
            gen: self.gen.clone(),
            resolution: self.resolution,
            values,
        })
    }

    /// The reflection `x -> f(-x)`.
    pub fn reflect(&self) -> StepFunction {
        let values = (0..self.len())
            .map(|i| self.values[self.gen.point_sub(0, i, self.resolution)])
            .collect();
        StepFunction {
            gen: self.gen.clone(),
            resolution: self.resolution,
            values,
        }
    }

    /// Largest pointwise deviation from another function, with the point
    /// index attaining it.
    pub fn max_deviation(&self, other: &StepFunction) -> Result<(f64, usize)> {
        self.check_compatible(other)?;
        let mut worst = (0.0f64, 0usize);
        for (i, (a, b)) in self.values.iter().zip(&other.values).enumerate() {
            let d = (a - b).norm();
            if d > worst.0 {
                worst = (d, i);
            }
        }
        Ok(worst)
    }

    fn check_compatible(&self, other: &StepFunction) -> Result<()> {
        if self.gen != other.gen {
            return Err(Error::StructureMismatch(
                "step functions live on different groups".into(),
            ));
        }
        if self.resolution != other.resolution {
            return Err(Error::Resolution(format!(
                "step functions have resolutions {} and {}",
                self.resolution, other.resolution
            )));
        }
        Ok(())
    }

    /// Writes `coset_index,re,im` rows (17 significant digits) in point
    /// order, preceded by a header.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "coset_index,re,im")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(out, "{i},{},{}", format_f64(v.re), format_f64(v.im))?;
        }
        Ok(())
    }

    /// Reads a function written by [`StepFunction::write_csv`].  The
    /// resolution is inferred from the row count.
    pub fn read_csv<R: BufRead>(gen: &GeneratorSequence, input: R) -> Result<Self> {
        let values = read_rows(input, "coset_index")?;
        let resolution = resolution_for_len(gen, values.len())?;
        Self::new(gen, resolution, values)
    }
}

/// Vilenkin-Fourier coefficients of a resolution-`N` function, indexed by
/// frequency `0..M_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    gen: GeneratorSequence,
    resolution: usize,
    coefficients: Vec<Complex64>,
}

impl Spectrum {
    /// Wraps explicit coefficients; the length must be `M_N`.
    pub fn new(
        gen: &GeneratorSequence,
        resolution: usize,
        coefficients: Vec<Complex64>,
    ) -> Result<Self> {
        check_resolution(gen, resolution)?;
        let expected = gen.cardinality(resolution);
        if coefficients.len() != expected {
            return Err(Error::StructureMismatch(format!(
                "resolution {resolution} needs {expected} coefficients, got {}",
                coefficients.len()
            )));
        }
        Ok(Self {
            gen: gen.clone(),
            resolution,
            coefficients,
        })
    }

    pub fn generator(&self) -> &GeneratorSequence {
        &self.gen
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn coefficient(&self, n: usize) -> Complex64 {
        self.coefficients[n]
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Energy `sum |c_n|^2`, the spectral side of the Parseval identity.
    pub fn energy(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Writes `frequency,re,im` rows (17 significant digits).
    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "frequency,re,im")?;
        for (n, c) in self.coefficients.iter().enumerate() {
            writeln!(out, "{n},{},{}", format_f64(c.re), format_f64(c.im))?;
        }
        Ok(())
    }

    /// Reads a spectrum written by [`Spectrum::write_csv`].
    pub fn read_csv<R: BufRead>(gen: &GeneratorSequence, input: R) -> Result<Self> {
        let coefficients = read_rows(input, "frequency")?;
        let resolution = resolution_for_len(gen, coefficients.len())?;
        Self::new(gen, resolution, coefficients)
    }
}

fn check_resolution(gen: &GeneratorSequence, resolution: usize) -> Result<()> {
    if resolution == 0 || resolution > gen.depth() {
        return Err(Error::Resolution(format!(
            "resolution {resolution} outside 1..={}",
            gen.depth()
        )));
    }
    Ok(())
}

fn resolution_for_len(gen: &GeneratorSequence, len: usize) -> Result<usize> {
    (1..=gen.depth())
        .find(|&n| gen.cardinality(n) == len)
        .ok_or_else(|| {
            Error::StructureMismatch(format!(
                "{len} rows do not match any grid size of the group {gen}"
            ))
        })
}

fn read_rows<R: BufRead>(input: R, index_column: &str) -> Result<Vec<Complex64>> {
    let mut values = Vec::new();
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty file".into()))??;
    let expected_header = format!("{index_column},re,im");
    if header.trim() != expected_header {
        return Err(Error::Parse(format!(
            "expected header {expected_header:?}, found {header:?}"
        )));
    }
    for (row, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.trim().split(',').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("malformed row {row}: {line:?}")));
        }
        let index: usize = parts[0]
            .parse()
            .map_err(|_| Error::Parse(format!("bad index in row {row}: {line:?}")))?;
        if index != row {
            return Err(Error::Parse(format!(
                "rows must be consecutive from 0; row {row} carries index {index}"
            )));
        }
        let re: f64 = parts[1]
            .parse()
            .map_err(|_| Error::Parse(format!("bad real part in row {row}: {line:?}")))?;
        let im: f64 = parts[2]
            .parse()
            .map_err(|_| Error::Parse(format!("bad imaginary part in row {row}: {line:?}")))?;
        values.push(Complex64::new(re, im));
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gs(radices: &[usize]) -> GeneratorSequence {
        GeneratorSequence::new(radices.to_vec()).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn construction_validates_length_and_resolution() {
        let g = gs(&[2, 3]);
        assert!(StepFunction::new(&g, 2, vec![c(1.0, 0.0); 6]).is_ok());
        assert!(StepFunction::new(&g, 2, vec![c(1.0, 0.0); 5]).is_err());
        assert!(StepFunction::new(&g, 3, vec![c(1.0, 0.0); 12]).is_err());
        assert!(StepFunction::new(&g, 0, vec![]).is_err());
    }

    #[test]
    fn integral_is_the_mean() {
        let g = gs(&[2, 3]);
        let f = StepFunction::from_real(&g, 2, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        assert!((f.integral() - c(3.5, 0.0)).norm() < 1e-15);
        let coset = g.coset(1, &g.zero()).unwrap();
        // Mean over I_1(0) = first three points, scaled by measure 1/2.
        assert!((f.integral_over(&coset).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn indicator_matches_membership() {
        let g = gs(&[2, 3, 2]);
        let coset = g.coset(2, &g.element(vec![1, 1, 0]).unwrap()).unwrap();
        let ind = StepFunction::indicator(&g, &coset, 3).unwrap();
        for i in 0..12 {
            let x = g.element(g.point_digits(i, 3)).unwrap();
            let expected = if coset.contains(&x) { 1.0 } else { 0.0 };
            assert_eq!(ind.value(i).re, expected);
        }
        assert!((ind.integral().re - coset.measure(&g)).abs() < 1e-15);
    }

    #[test]
    fn eval_truncates_to_resolution() {
        let g = gs(&[2, 3, 2]);
        let f = StepFunction::from_real(&g, 1, &[10.0, 20.0]).unwrap();
        let x = g.element(vec![1, 2, 1]).unwrap();
        assert_eq!(f.eval(&x).unwrap().re, 20.0);
    }

    #[test]
    fn refine_then_condition_returns_block_means() {
        let g = gs(&[2, 2, 2]);
        let f = StepFunction::from_real(&g, 3, &[1.0, 3.0, 5.0, 7.0, 2.0, 4.0, 6.0, 8.0]).unwrap();
        let cond = f.condition(1).unwrap();
        for i in 0..4 {
            assert_eq!(cond.value(i).re, 4.0);
        }
        for i in 4..8 {
            assert_eq!(cond.value(i).re, 5.0);
        }
        // Conditioning at full rank is the identity.
        assert_eq!(f.condition(3).unwrap(), f);
        // Refinement repeats values over sub-cosets.
        let coarse = StepFunction::from_real(&g, 1, &[1.0, 2.0]).unwrap();
        let fine = coarse.refine(3).unwrap();
        assert_eq!(
            fine.values().iter().map(|v| v.re).collect::<Vec<_>>(),
            vec![1.0, 1.0, 1.0, 1.0, 2.0, 2.0, 2.0, 2.0]
        );
        assert!(fine.refine(1).is_err());
    }

    #[test]
    fn translation_shifts_support() {
        let g = gs(&[2, 2]);
        let f = StepFunction::from_real(&g, 2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        let t = g.element(vec![1, 0]).unwrap();
        let shifted = f.translate(&t).unwrap();
        // f(x - t) = 1 iff x = t.
        assert_eq!(
            shifted.values().iter().map(|v| v.re).collect::<Vec<_>>(),
            vec![0.0, 0.0, 1.0, 0.0]
        );
        // Translating by zero is the identity; reflection at the origin of
        // a Walsh group is also the identity (every element is its own
        // inverse).
        assert_eq!(f.translate(&g.zero()).unwrap(), f);
        assert_eq!(f.reflect(), f);
    }

    #[test]
    fn reflection_reverses_cyclic_digits() {
        let g = gs(&[3]);
        let f = StepFunction::from_real(&g, 1, &[10.0, 20.0, 30.0]).unwrap();
        let r = f.reflect();
        assert_eq!(
            r.values().iter().map(|v| v.re).collect::<Vec<_>>(),
            vec![10.0, 30.0, 20.0]
        );
    }

    #[test]
    fn arithmetic_checks_structure() {
        let g = gs(&[2, 3]);
        let h = gs(&[3, 2]);
        let f = StepFunction::constant(&g, 2, c(1.0, 0.0)).unwrap();
        let other = StepFunction::constant(&h, 2, c(1.0, 0.0)).unwrap();
        assert!(f.add(&other).is_err());
        let coarser = StepFunction::constant(&g, 1, c(1.0, 0.0)).unwrap();
        assert!(f.add(&coarser).is_err());
        let sum = f.add(&f).unwrap();
        assert_eq!(sum.value(0).re, 2.0);
        assert_eq!(f.scale(c(0.0, 1.0)).value(0), c(0.0, 1.0));
    }

    #[test]
    fn csv_round_trip_preserves_bytes() {
        let g = gs(&[2, 3]);
        let f = StepFunction::new(
            &g,
            2,
            vec![
                c(1.0, 0.0),
                c(-0.5, 0.25),
                c(1.0 / 3.0, -2.0 / 7.0),
                c(0.0, 0.0),
                c(1e-17, 3.5),
                c(2.5, -1.0),
            ],
        )
        .unwrap();
        let mut bytes = Vec::new();
        f.write_csv(&mut bytes).unwrap();
        let back = StepFunction::read_csv(&g, bytes.as_slice()).unwrap();
        assert_eq!(back, f);
        let mut again = Vec::new();
        back.write_csv(&mut again).unwrap();
        assert_eq!(bytes, again, "rewriting must be byte-identical");
        // Header is fixed.
        assert!(String::from_utf8(bytes).unwrap().starts_with("coset_index,re,im\n"));
    }

    #[test]
    fn spectrum_csv_round_trip() {
        let g = gs(&[2, 2]);
        let s = Spectrum::new(&g, 2, vec![c(1.0, 2.0), c(0.5, 0.0), c(0.0, -1.0), c(3.0, 4.0)])
            .unwrap();
        let mut bytes = Vec::new();
        s.write_csv(&mut bytes).unwrap();
        assert!(String::from_utf8(bytes.clone()).unwrap().starts_with("frequency,re,im\n"));
        let back = Spectrum::read_csv(&g, bytes.as_slice()).unwrap();
        assert_eq!(back, s);
        assert!((s.energy() - (5.0 + 0.25 + 1.0 + 25.0)).abs() < 1e-15);
    }

    #[test]
    fn csv_rejects_malformed_input() {
        let g = gs(&[2, 2]);
        assert!(StepFunction::read_csv(&g, "nonsense\n".as_bytes()).is_err());
        assert!(StepFunction::read_csv(&g, "coset_index,re,im\n0,1.0\n".as_bytes()).is_err());
        // Gap in the index column.
        let gap = "coset_index,re,im\n0,1,0\n2,1,0\n";
        assert!(StepFunction::read_csv(&g, gap.as_bytes()).is_err());
        // Row count must match a grid size (here 3 rows on a 2,2 group).
        let bad_len = "coset_index,re,im\n0,1,0\n1,1,0\n2,1,0\n";
        assert!(StepFunction::read_csv(&g, bad_len.as_bytes()).is_err());
    }

    #[test]
    fn max_deviation_reports_witness() {
        let g = gs(&[2, 2]);
        let f = StepFunction::from_real(&g, 2, &[1.0, 1.0, 1.0, 1.0]).unwrap();
        let h = StepFunction::from_real(&g, 2, &[1.0, 1.0, 4.0, 1.0]).unwrap();
        let (dev, arg) = f.max_deviation(&h).unwrap();
        assert_eq!(dev, 3.0);
        assert_eq!(arg, 2);
    }
}
