//! Bounded Vilenkin groups, their cosets, and the generalized number system.
//!
//! A bounded Vilenkin group is the complete direct product of finite cyclic
//! groups `Z_{m_0} x Z_{m_1} x ...` with all radices `m_k >= 2` drawn from a
//! finite list.  This module works with the first `D` coordinates (the
//! *depth*), which is all any finite computation sees: a point is a digit
//! vector `(x_0, ..., x_{D-1})` with `x_k < m_k`, addition is coordinatewise
//! modulo `m_k`, and Haar measure is the normalized counting measure on the
//! digit grid.
//!
//! Two indexing schemes coexist and must not be confused:
//!
//! * **Point indices** enumerate the `M_N` points of the resolution-`N` grid
//!   in lexicographic digit order with digit 0 varying slowest.  Under this
//!   order every coset `I_n(x)` of rank `n <= N` is a *contiguous* block of
//!   indices, which makes integrals over cosets cheap and file output
//!   canonical.
//! * **Frequency indices** enumerate characters through the generalized
//!   number system `n = sum_k n_k M_k` built on the cumulative cardinalities
//!   `M_0 = 1`, `M_{k+1} = m_k M_k` (digit 0 is the *least* significant).
//!
//! Both run over `0..M_N`; the conversion between them is a digit-reversal
//! style permutation, handled explicitly where transforms need it.

use serde::Serialize;

use crate::error::{Error, Result};

/// The radix list `(m_0, ..., m_{D-1})` of a bounded Vilenkin group
/// together with the cumulative cardinalities `M_0, ..., M_D`.
///
/// Immutable after construction.  Equality is structural (same radices), so
/// two independently parsed sequences compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSequence {
    radices: Vec<usize>,
    /// `ladder[k] = M_k`; length `depth + 1`.
    ladder: Vec<usize>,
}

impl GeneratorSequence {
    /// Builds a generator sequence from explicit radices.
    ///
    /// Errors if the list is empty, any radix is below 2, or the total
    /// cardinality `M_D` overflows the platform word.
    pub fn new(radices: Vec<usize>) -> Result<Self> {
        if radices.is_empty() {
            return Err(Error::Parse("generator sequence must be non-empty".into()));
        }
        let mut ladder = Vec::with_capacity(radices.len() + 1);
        ladder.push(1usize);
        for (k, &m) in radices.iter().enumerate() {
            if m < 2 {
                return Err(Error::Parse(format!(
                    "radix m_{k} = {m} is invalid: every radix must be at least 2"
                )));
            }
            let next = ladder[k]
                .checked_mul(m)
                .ok_or_else(|| Error::OutOfRange("group cardinality overflows usize".into()))?;
            ladder.push(next);
        }
        Ok(Self { radices, ladder })
    }

    /// A sequence with the same radix at every coordinate; `uniform(2, d)`
    /// is the Walsh group of depth `d`.
    pub fn uniform(radix: usize, depth: usize) -> Result<Self> {
        Self::new(vec![radix; depth])
    }

    /// Parses a comma-separated radix list such as `"2,3,2,3"`.
    pub fn parse(text: &str) -> Result<Self> {
        let radices = text
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("invalid radix {part:?} in generator list")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(radices)
    }

    /// Number of explicit coordinates `D`.
    pub fn depth(&self) -> usize {
        self.radices.len()
    }

    /// The radix `m_k`.  Panics if `k >= depth`; indexing past the depth is
    /// a programming error, not a data error.
    pub fn radix(&self, k: usize) -> usize {
        self.radices[k]
    }

    /// All radices in order.
    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    /// The cumulative cardinality `M_n` for `0 <= n <= depth`.
    pub fn cardinality(&self, n: usize) -> usize {
        self.ladder[n]
    }

    /// Largest radix in the sequence (the boundedness constant).
    pub fn max_radix(&self) -> usize {
        *self.radices.iter().max().expect("non-empty by construction")
    }

    /// True when every radix equals 2.  In that case all characters are
    /// real signs and several kernels admit exact integer arithmetic.
    pub fn is_walsh(&self) -> bool {
        self.radices.iter().all(|&m| m == 2)
    }

    // ----- generalized number system (frequency side) -----

    /// Mixed-radix digits `(n_0, ..., n_{D-1})` of `n = sum n_k M_k`.
    ///
    /// Errors if `n >= M_D`.
    pub fn index_digits(&self, n: usize) -> Result<Vec<usize>> {
        let total = self.cardinality(self.depth());
        if n >= total {
            return Err(Error::OutOfRange(format!(
                "index {n} exceeds the addressable range 0..{total}"
            )));
        }
        let mut rest = n;
        let digits = self
            .radices
            .iter()
            .map(|&m| {
                let d = rest % m;
                rest /= m;
                d
            })
            .collect();
        Ok(digits)
    }

    /// Recomposes `n = sum n_k M_k` from mixed-radix digits.
    ///
    /// Errors on a length mismatch or a digit at or above its radix.
    pub fn digits_index(&self, digits: &[usize]) -> Result<usize> {
        self.check_digits(digits)?;
        Ok(digits
            .iter()
            .zip(&self.ladder)
            .map(|(&d, &weight)| d * weight)
            .sum())
    }

    /// The order `|n|`: the unique `j` with `M_j <= n < M_{j+1}`.
    ///
    /// Errors for `n = 0` (no such `j` exists) and for `n >= M_D`.
    pub fn order_of(&self, n: usize) -> Result<usize> {
        if n == 0 {
            return Err(Error::Domain("the order of 0 is undefined".into()));
        }
        let total = self.cardinality(self.depth());
        if n >= total {
            return Err(Error::OutOfRange(format!(
                "order of {n} is undefined below depth {}: {n} >= M_D = {total}",
                self.depth()
            )));
        }
        // ladder is strictly increasing, so the partition point is unique.
        Ok((0..self.depth())
            .rev()
            .find(|&j| self.ladder[j] <= n)
            .expect("n >= 1 = M_0"))
    }

    /// The smallest resolution whose character range `0..M_N` contains all
    /// frequencies below `n`, i.e. suffices to represent `D_n`; equals
    /// `|n| + 1` for `0 < n < M_D` and `depth` for `n = M_D`.
    pub fn min_resolution(&self, n: usize) -> Result<usize> {
        let total = self.cardinality(self.depth());
        if n > total {
            return Err(Error::OutOfRange(format!(
                "index {n} exceeds the addressable range 0..={total}"
            )));
        }
        if n == total {
            return Ok(self.depth());
        }
        match n {
            0 | 1 => Ok(1),
            _ => Ok(self.order_of(n - 1)? + 1),
        }
    }

    /// Decomposes `n` into its leading terms `n = sum_i s_i M_{r_i}` with
    /// strictly decreasing ranks `r_1 > r_2 > ...` and coefficients
    /// `1 <= s_i < m_{r_i}`.  Each entry also records the *tail*: the value
    /// left after subtracting that term and all earlier ones.
    ///
    /// Errors for `n = 0` (empty decomposition is ambiguous) and `n >= M_D`.
    pub fn leading_terms(&self, n: usize) -> Result<Vec<LeadingTerm>> {
        if n == 0 {
            return Err(Error::Domain(
                "leading-term decomposition of 0 is undefined".into(),
            ));
        }
        let digits = self.index_digits(n)?;
        let mut terms = Vec::new();
        let mut remaining = n;
        for rank in (0..self.depth()).rev() {
            if digits[rank] != 0 {
                remaining -= digits[rank] * self.ladder[rank];
                terms.push(LeadingTerm {
                    rank,
                    coefficient: digits[rank],
                    tail: remaining,
                });
            }
        }
        Ok(terms)
    }

    // ----- point indexing (lexicographic, digit 0 slowest) -----

    /// Digit weights of the resolution-`N` point grid: `W_k = M_N / M_{k+1}`,
    /// so that `point_index = sum x_k W_k` enumerates digit vectors in
    /// lexicographic order with digit 0 most significant.
    fn point_weight(&self, k: usize, resolution: usize) -> usize {
        self.ladder[resolution] / self.ladder[k + 1]
    }

    /// Digits of the point with lexicographic index `i` on the
    /// resolution-`N` grid.  Panics if `i >= M_N` or `N > depth`.
    pub fn point_digits(&self, index: usize, resolution: usize) -> Vec<usize> {
        assert!(resolution <= self.depth(), "resolution exceeds depth");
        assert!(
            index < self.ladder[resolution],
            "point index {index} out of range 0..{}",
            self.ladder[resolution]
        );
        let mut span = self.ladder[resolution];
        let mut rest = index;
        (0..resolution)
            .map(|k| {
                span /= self.radices[k];
                let d = rest / span;
                rest %= span;
                d
            })
            .collect()
    }

    /// Lexicographic index of a digit vector on the grid of resolution
    /// `digits.len()`.  Errors if any digit is at or above its radix.
    pub fn point_index(&self, digits: &[usize]) -> Result<usize> {
        self.check_digits(digits)?;
        let resolution = digits.len();
        Ok(digits
            .iter()
            .enumerate()
            .map(|(k, &d)| d * self.point_weight(k, resolution))
            .sum())
    }

    /// Pointwise sum of two grid points given by index, staying on the
    /// resolution-`N` grid.  Hot path for convolutions, so digit vectors
    /// are not allocated.
    pub fn point_add(&self, i: usize, j: usize, resolution: usize) -> usize {
        let mut span = self.ladder[resolution];
        let (mut a, mut b, mut out) = (i, j, 0usize);
        for k in 0..resolution {
            span /= self.radices[k];
            let da = a / span;
            let db = b / span;
            a %= span;
            b %= span;
            out += ((da + db) % self.radices[k]) * span;
        }
        out
    }

    /// Pointwise difference `i - j` of two grid points given by index.
    pub fn point_sub(&self, i: usize, j: usize, resolution: usize) -> usize {
        let mut span = self.ladder[resolution];
        let (mut a, mut b, mut out) = (i, j, 0usize);
        for k in 0..resolution {
            span /= self.radices[k];
            let da = a / span;
            let db = b / span;
            a %= span;
            b %= span;
            out += ((da + self.radices[k] - db) % self.radices[k]) * span;
        }
        out
    }

    // ----- group elements -----

    /// Wraps a digit vector of full depth as a group element, validating
    /// every digit.
    pub fn element(&self, digits: Vec<usize>) -> Result<GroupElement> {
        if digits.len() != self.depth() {
            return Err(Error::StructureMismatch(format!(
                "element has {} digits but the group has depth {}",
                digits.len(),
                self.depth()
            )));
        }
        self.check_digits(&digits)?;
        Ok(GroupElement { digits })
    }

    /// The identity element (all digits zero).
    pub fn zero(&self) -> GroupElement {
        GroupElement {
            digits: vec![0; self.depth()],
        }
    }

    /// The unit vector `e_k` (digit 1 at coordinate `k`, zero elsewhere).
    pub fn unit(&self, k: usize) -> Result<GroupElement> {
        if k >= self.depth() {
            return Err(Error::OutOfRange(format!(
                "coordinate {k} exceeds depth {}",
                self.depth()
            )));
        }
        let mut digits = vec![0; self.depth()];
        digits[k] = 1;
        Ok(GroupElement { digits })
    }

    /// Coordinatewise sum modulo the radices.
    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.check_element(x)?;
        self.check_element(y)?;
        let digits = x
            .digits
            .iter()
            .zip(&y.digits)
            .zip(&self.radices)
            .map(|((&a, &b), &m)| (a + b) % m)
            .collect();
        Ok(GroupElement { digits })
    }

    /// Coordinatewise additive inverse.
    pub fn negate(&self, x: &GroupElement) -> Result<GroupElement> {
        self.check_element(x)?;
        let digits = x
            .digits
            .iter()
            .zip(&self.radices)
            .map(|(&a, &m)| (m - a) % m)
            .collect();
        Ok(GroupElement { digits })
    }

    /// Coordinatewise difference `x - y`.
    pub fn sub(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.add(x, &self.negate(y)?)
    }

    /// Scales an element by an integer: `scalar_mul(c, x) = x + ... + x`.
    pub fn scalar_mul(&self, c: usize, x: &GroupElement) -> Result<GroupElement> {
        self.check_element(x)?;
        let digits = x
            .digits
            .iter()
            .zip(&self.radices)
            .map(|(&a, &m)| (a * c) % m)
            .collect();
        Ok(GroupElement { digits })
    }

    /// Validates that an element belongs to this group.
    pub fn check_element(&self, x: &GroupElement) -> Result<()> {
        if x.digits.len() != self.depth() {
            return Err(Error::StructureMismatch(format!(
                "element has {} digits but the group has depth {}",
                x.digits.len(),
                self.depth()
            )));
        }
        self.check_digits(&x.digits)
    }

    fn check_digits(&self, digits: &[usize]) -> Result<()> {
        if digits.len() > self.depth() {
            return Err(Error::StructureMismatch(format!(
                "{} digits exceed the group depth {}",
                digits.len(),
                self.depth()
            )));
        }
        for (k, &d) in digits.iter().enumerate() {
            if d >= self.radices[k] {
                return Err(Error::OutOfRange(format!(
                    "digit x_{k} = {d} is out of range for radix {}",
                    self.radices[k]
                )));
            }
        }
        Ok(())
    }

    // ----- cosets and the complement decomposition -----

    /// The coset `I_n(x)`: all points sharing the first `n` digits of `x`.
    /// Digits of the anchor beyond the rank are normalized to zero.
    pub fn coset(&self, rank: usize, anchor: &GroupElement) -> Result<Coset> {
        self.check_element(anchor)?;
        if rank > self.depth() {
            return Err(Error::OutOfRange(format!(
                "coset rank {rank} exceeds depth {}",
                self.depth()
            )));
        }
        let mut digits = anchor.digits.clone();
        for d in digits.iter_mut().skip(rank) {
            *d = 0;
        }
        Ok(Coset {
            rank,
            anchor: GroupElement { digits },
        })
    }

    /// Splits the complement of `I_N` into disjoint cosets:
    /// for every first nonzero digit position `k < N` and value `x_k`,
    /// either a second nonzero digit appears at some `l <= N - 1` (giving
    /// the rank-`(l+1)` coset anchored at `x_k e_k + x_l e_l`), or all
    /// remaining digits up to `N` vanish (giving the rank-`N` coset anchored
    /// at `x_k e_k`).  The returned cosets are pairwise disjoint and their
    /// union has measure `1 - 1/M_N`.
    ///
    /// Requires `1 <= N <= depth - 1` so that every rank-`(l+1)` coset is a
    /// proper subset of the grid.
    pub fn complement_decomposition(&self, big_n: usize) -> Result<Vec<Coset>> {
        if big_n == 0 || big_n + 1 > self.depth() {
            return Err(Error::OutOfRange(format!(
                "complement decomposition needs 1 <= N <= {}, got {big_n}",
                self.depth() - 1
            )));
        }
        let mut cosets = Vec::new();
        // Two nonzero digits before N: anchored at x_k e_k + x_l e_l.
        for k in 0..big_n.saturating_sub(1) {
            for xk in 1..self.radices[k] {
                for l in (k + 1)..big_n {
                    for xl in 1..self.radices[l] {
                        let mut digits = vec![0; self.depth()];
                        digits[k] = xk;
                        digits[l] = xl;
                        cosets.push(Coset {
                            rank: l + 1,
                            anchor: GroupElement { digits },
                        });
                    }
                }
            }
        }
        // Exactly one nonzero digit before N: anchored at x_k e_k.
        for k in 0..big_n {
            for xk in 1..self.radices[k] {
                let mut digits = vec![0; self.depth()];
                digits[k] = xk;
                cosets.push(Coset {
                    rank: big_n,
                    anchor: GroupElement { digits },
                });
            }
        }
        Ok(cosets)
    }
}

impl std::fmt::Display for GeneratorSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.radices.iter().map(|m| m.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl std::str::FromStr for GeneratorSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// A point of the group: the digit vector `(x_0, ..., x_{D-1})`.
///
/// Elements are plain data; all arithmetic lives on [`GeneratorSequence`]
/// so that digit validity is checked against the owning group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct GroupElement {
    digits: Vec<usize>,
}

impl GroupElement {
    /// The digit vector.
    pub fn digits(&self) -> &[usize] {
        &self.digits
    }

    /// Digit at coordinate `k`.
    pub fn digit(&self, k: usize) -> usize {
        self.digits[k]
    }

    /// Position of the first nonzero digit, if any.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.digits.iter().position(|&d| d != 0)
    }

    /// True when every digit vanishes.
    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }
}

impl std::fmt::Display for GroupElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// One term `s M_r` of a leading-term decomposition, with the `tail` that
/// remains after subtracting this and all higher-rank terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LeadingTerm {
    pub rank: usize,
    pub coefficient: usize,
    pub tail: usize,
}

/// The coset `I_n(x)` of rank `n`: all points sharing the first `n` digits
/// of the anchor.  The anchor is stored with digits beyond the rank zeroed,
/// so equal cosets compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coset {
    rank: usize,
    anchor: GroupElement,
}

impl Coset {
    /// The rank `n`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The normalized anchor.
    pub fn anchor(&self) -> &GroupElement {
        &self.anchor
    }

    /// Haar measure `1 / M_n`.
    pub fn measure(&self, gen: &GeneratorSequence) -> f64 {
        1.0 / gen.cardinality(self.rank) as f64
    }

    /// Membership test: does `x` share the first `rank` digits?
    pub fn contains(&self, x: &GroupElement) -> bool {
        x.digits()
            .iter()
            .zip(self.anchor.digits())
            .take(self.rank)
            .all(|(a, b)| a == b)
    }

    /// The contiguous range of lexicographic point indices this coset
    /// occupies on the resolution-`N` grid.  Requires `rank <= N <= depth`.
    pub fn point_range(&self, gen: &GeneratorSequence, resolution: usize) -> Result<std::ops::Range<usize>> {
        if resolution < self.rank || resolution > gen.depth() {
            return Err(Error::Resolution(format!(
                "coset of rank {} is not representable at resolution {resolution}",
                self.rank
            )));
        }
        gen.check_element(&self.anchor)?;
        // The prefix indexes a cell of the rank grid; each such cell expands
        // to `width` consecutive points of the finer grid.
        let width = gen.cardinality(resolution) / gen.cardinality(self.rank);
        let prefix: Vec<usize> = self.anchor.digits()[..self.rank].to_vec();
        let base = gen.point_index(&prefix)? * width;
        Ok(base..base + width)
    }
}

impl std::fmt::Display for Coset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "I_{}{}", self.rank, self.anchor)
    }
}
