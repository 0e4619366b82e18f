//! Rademacher functions and Vilenkin characters.
//!
//! The generalized Rademacher functions are `r_k(x) = exp(2 pi i x_k / m_k)`;
//! the Vilenkin characters are their digit-power products
//! `psi_n(x) = prod_k r_k(x)^{n_k}` where `n = sum n_k M_k` in the
//! generalized number system.  They form a complete orthonormal system for
//! the normalized counting measure, and every character is multiplicative:
//! `psi_n(x + y) = psi_n(x) psi_n(y)`.
//!
//! On Walsh groups (all radices 2) every character takes values in
//! `{-1, +1}`; the `*_sign` variants expose that case in exact integer
//! arithmetic.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{GeneratorSequence, GroupElement};

/// The `m`-th roots of unity `exp(2 pi i t / m)` for `t = 0..m`.
///
/// Radices 2 and 4 are returned exactly; other radices go through
/// `cos`/`sin`, which are correctly rounded to within 1 ulp on all
/// supported platforms.
pub fn unit_roots(m: usize) -> Vec<Complex64> {
    assert!(m >= 1, "radix must be positive");
    match m {
        1 => vec![Complex64::new(1.0, 0.0)],
        2 => vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
        4 => vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        ],
        _ => (0..m)
            .map(|t| {
                let angle = 2.0 * std::f64::consts::PI * t as f64 / m as f64;
                Complex64::new(angle.cos(), angle.sin())
            })
            .collect(),
    }
}

/// The generalized Rademacher function `r_k(x) = exp(2 pi i x_k / m_k)`.
pub fn rademacher(gen: &GeneratorSequence, k: usize, x: &GroupElement) -> Result<Complex64> {
    gen.check_element(x)?;
    if k >= gen.depth() {
        return Err(Error::OutOfRange(format!(
            "Rademacher index {k} exceeds depth {}",
            gen.depth()
        )));
    }
    Ok(unit_roots(gen.radix(k))[x.digit(k)])
}

/// The Vilenkin character `psi_n(x) = prod_k r_k(x)^{n_k}`.
///
/// Requires `n < M_D` so the digit expansion of `n` exists.
pub fn character(gen: &GeneratorSequence, n: usize, x: &GroupElement) -> Result<Complex64> {
    gen.check_element(x)?;
    let exponents = gen.index_digits(n)?;
    let mut value = Complex64::new(1.0, 0.0);
    for (k, &nk) in exponents.iter().enumerate() {
        if nk == 0 {
            continue;
        }
        let m = gen.radix(k);
        value *= unit_roots(m)[(nk * x.digit(k)) % m];
    }
    Ok(value)
}

/// Exact character value on a Walsh group, as a sign in `{-1, +1}`.
///
/// Errors if any radix differs from 2.
pub fn character_sign(gen: &GeneratorSequence, n: usize, x: &GroupElement) -> Result<i64> {
    require_walsh(gen)?;
    gen.check_element(x)?;
    let exponents = gen.index_digits(n)?;
    let parity: usize = exponents
        .iter()
        .zip(x.digits())
        .map(|(&nk, &xk)| nk * xk)
        .sum();
    Ok(if parity.is_multiple_of(2) { 1 } else { -1 })
}

/// Samples `psi_n` over the full resolution-`N` point grid, in
/// lexicographic point order.
///
/// Requires `n < M_N` so that the character is constant on rank-`N` cosets
/// and the sample grid faithfully represents it.
pub fn character_row(gen: &GeneratorSequence, n: usize, resolution: usize) -> Result<Vec<Complex64>> {
    check_row_args(gen, n, resolution)?;
    let exponents = gen.index_digits(n)?;
    let total = gen.cardinality(resolution);
    let mut row = vec![Complex64::new(1.0, 0.0); total];
    let mut span = total;
    for (k, &nk) in exponents.iter().enumerate().take(resolution) {
        let m = gen.radix(k);
        span /= m;
        if nk == 0 {
            continue;
        }
        let roots = unit_roots(m);
        // Digit k of the lex point index i is (i / span) % m.
        for (i, value) in row.iter_mut().enumerate() {
            let digit = (i / span) % m;
            *value *= roots[(nk * digit) % m];
        }
    }
    Ok(row)
}

/// Exact sign row of `psi_n` on a Walsh group.
pub fn character_row_sign(
    gen: &GeneratorSequence,
    n: usize,
    resolution: usize,
) -> Result<Vec<i64>> {
    require_walsh(gen)?;
    check_row_args(gen, n, resolution)?;
    let exponents = gen.index_digits(n)?;
    let total = gen.cardinality(resolution);
    let mut row = vec![1i64; total];
    let mut span = total;
    for &nk in exponents.iter().take(resolution) {
        span /= 2;
        if nk == 0 {
            continue;
        }
        for (i, value) in row.iter_mut().enumerate() {
            if (i / span) % 2 == 1 {
                *value = -*value;
            }
        }
    }
    Ok(row)
}

/// All character rows `psi_0, ..., psi_{M_N - 1}` on the resolution-`N`
/// grid, cached for kernel construction and direct transforms.
///
/// Memory is `M_N^2` complex numbers, which is intentional: the cache is
/// meant for the moderate resolutions at which identity verification runs.
pub struct CharacterBasis {
    gen: GeneratorSequence,
    resolution: usize,
    rows: Vec<Vec<Complex64>>,
}

impl CharacterBasis {
    /// Builds the full basis at the given resolution.
    pub fn new(gen: &GeneratorSequence, resolution: usize) -> Result<Self> {
        if resolution == 0 || resolution > gen.depth() {
            return Err(Error::Resolution(format!(
                "resolution {resolution} outside 1..={}",
                gen.depth()
            )));
        }
        let total = gen.cardinality(resolution);
        let rows = (0..total)
            .map(|n| character_row(gen, n, resolution))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            gen: gen.clone(),
            resolution,
            rows,
        })
    }

    pub fn generator(&self) -> &GeneratorSequence {
        &self.gen
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// The sampled row of `psi_n`.
    pub fn row(&self, n: usize) -> &[Complex64] {
        &self.rows[n]
    }

    /// Number of characters (= grid size) `M_N`.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

fn require_walsh(gen: &GeneratorSequence) -> Result<()> {
    if gen.is_walsh() {
        Ok(())
    } else {
        Err(Error::Domain(
            "exact sign arithmetic requires every radix to equal 2".into(),
        ))
    }
}

fn check_row_args(gen: &GeneratorSequence, n: usize, resolution: usize) -> Result<()> {
    if resolution == 0 || resolution > gen.depth() {
        return Err(Error::Resolution(format!(
            "resolution {resolution} outside 1..={}",
            gen.depth()
        )));
    }
    if n >= gen.cardinality(resolution) {
        return Err(Error::Resolution(format!(
            "character {n} is not constant on rank-{resolution} cosets; raise the resolution"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gs(radices: &[usize]) -> GeneratorSequence {
        GeneratorSequence::new(radices.to_vec()).unwrap()
    }

    #[test]
    fn rademacher_values_on_small_groups() {
        let g = gs(&[2, 3]);
        let e0 = g.unit(0).unwrap();
        let e1 = g.unit(1).unwrap();
        assert_eq!(rademacher(&g, 0, &e0).unwrap(), Complex64::new(-1.0, 0.0));
        assert_eq!(rademacher(&g, 0, &e1).unwrap(), Complex64::new(1.0, 0.0));
        let omega = rademacher(&g, 1, &e1).unwrap();
        assert!((omega.re - (-0.5)).abs() < 1e-15);
        assert!((omega.im - (3.0f64.sqrt() / 2.0)).abs() < 1e-15);
        assert!(rademacher(&g, 2, &e0).is_err());
    }

    #[test]
    fn character_zero_is_identically_one() {
        let g = gs(&[2, 3, 2]);
        for i in 0..12 {
            let x = g.element(g.point_digits(i, 3)).unwrap();
            assert_eq!(character(&g, 0, &x).unwrap(), Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn characters_factor_over_digits() {
        // psi_3 on the Walsh group of depth 2: 3 = e_0 + e_1 digits, so
        // psi_3(x) = (-1)^{x_0 + x_1}.
        let g = gs(&[2, 2]);
        let expect = [1.0, -1.0, -1.0, 1.0];
        for (i, &value) in expect.iter().enumerate() {
            let x = g.element(g.point_digits(i, 2)).unwrap();
            assert_eq!(character(&g, 3, &x).unwrap().re, value);
            assert_eq!(character_sign(&g, 3, &x).unwrap(), value as i64);
        }
    }

    #[test]
    fn characters_are_multiplicative() {
        let g = gs(&[2, 3, 2]);
        let total = g.cardinality(3);
        for n in 0..total {
            for i in 0..total {
                for j in 0..total {
                    let x = g.element(g.point_digits(i, 3)).unwrap();
                    let y = g.element(g.point_digits(j, 3)).unwrap();
                    let sum = g.add(&x, &y).unwrap();
                    let lhs = character(&g, n, &sum).unwrap();
                    let rhs = character(&g, n, &x).unwrap() * character(&g, n, &y).unwrap();
                    assert!(
                        (lhs - rhs).norm() < 1e-12,
                        "psi_{n}({x}+{y}) must factor"
                    );
                }
            }
        }
    }

    #[test]
    fn characters_are_orthonormal() {
        // Exhaustive orthonormality on m = (2,3,2): the direct oracle for
        // every transform identity downstream.
        let g = gs(&[2, 3, 2]);
        let total = g.cardinality(3);
        let basis = CharacterBasis::new(&g, 3).unwrap();
        for a in 0..total {
            for b in 0..total {
                let mut inner = Complex64::new(0.0, 0.0);
                for i in 0..total {
                    inner += basis.row(a)[i] * basis.row(b)[i].conj();
                }
                inner /= total as f64;
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!(
                    (inner - expected).norm() < 1e-12,
                    "<psi_{a}, psi_{b}> = {inner}"
                );
            }
        }
    }

    #[test]
    fn negation_conjugates_characters() {
        let g = gs(&[3, 3, 2]);
        let total = g.cardinality(3);
        for n in 0..total {
            for i in 0..total {
                let x = g.element(g.point_digits(i, 3)).unwrap();
                let neg = g.negate(&x).unwrap();
                let lhs = character(&g, n, &neg).unwrap();
                let rhs = character(&g, n, &x).unwrap().conj();
                assert!((lhs - rhs).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn rows_match_pointwise_evaluation() {
        for g in [gs(&[2, 3, 2]), gs(&[3, 3, 2])] {
            let total = g.cardinality(3);
            for n in 0..total {
                let row = character_row(&g, n, 3).unwrap();
                for (i, value) in row.iter().enumerate() {
                    let x = g.element(g.point_digits(i, 3)).unwrap();
                    assert!((value - character(&g, n, &x).unwrap()).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn sign_rows_are_exact_on_walsh_groups() {
        let g = gs(&[2, 2, 2]);
        for n in 0..8 {
            let signs = character_row_sign(&g, n, 3).unwrap();
            let row = character_row(&g, n, 3).unwrap();
            for i in 0..8 {
                assert_eq!(signs[i] as f64, row[i].re);
                assert_eq!(row[i].im, 0.0);
            }
        }
        assert!(character_row_sign(&gs(&[2, 3]), 1, 2).is_err());
    }

    #[test]
    fn row_requires_enough_resolution() {
        let g = gs(&[2, 3, 2]);
        // psi_7 depends on digit 2, so resolution 2 is too coarse.
        assert!(character_row(&g, 7, 2).is_err());
        assert!(character_row(&g, 5, 2).is_ok());
        assert!(character_row(&g, 0, 0).is_err());
    }
}
