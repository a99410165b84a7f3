//! Triangular index sets and symmetric block-table storage.
//!
//! All sets are enumerated in the canonical order: `k1` ascending, then
//! `k2` ascending. Every API and file format uses this order.

use std::fmt;

use crate::error::{Error, Result};

/// Lattice point `(k1, k2)` of a triangular index set. The third barycentric
/// index `k3 = n - k1 - k2` depends on the degree and is never stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    pub k1: usize,
    pub k2: usize,
}

impl MultiIndex {
    pub const fn new(k1: usize, k2: usize) -> Self {
        MultiIndex { k1, k2 }
    }

    /// `|k| = k1 + k2`.
    pub fn total(&self) -> usize {
        self.k1 + self.k2
    }

    /// `k3 = n - |k|`.
    pub fn k3(&self, n: usize) -> usize {
        n - self.total()
    }

    pub fn swapped(&self) -> Self {
        MultiIndex::new(self.k2, self.k1)
    }

    /// `(k1, k3)`
    pub fn hat(&self, n: usize) -> Self {
        MultiIndex::new(self.k1, self.k3(n))
    }

    /// `(k3, k1)`
    pub fn check(&self, n: usize) -> Self {
        MultiIndex::new(self.k3(n), self.k1)
    }

    /// `(k2, k3)`
    pub fn star(&self, n: usize) -> Self {
        MultiIndex::new(self.k2, self.k3(n))
    }

    /// `(k3, k2)`
    pub fn circ(&self, n: usize) -> Self {
        MultiIndex::new(self.k3(n), self.k2)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.k1, self.k2)
    }
}

impl From<(usize, usize)> for MultiIndex {
    fn from((k1, k2): (usize, usize)) -> Self {
        MultiIndex::new(k1, k2)
    }
}

/// Boundary constraint orders `(c1, c2, c3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ConstraintVector {
    pub c1: usize,
    pub c2: usize,
    pub c3: usize,
}

impl ConstraintVector {
    pub const NONE: ConstraintVector = ConstraintVector { c1: 0, c2: 0, c3: 0 };

    pub const fn new(c1: usize, c2: usize, c3: usize) -> Self {
        ConstraintVector { c1, c2, c3 }
    }

    pub fn total(&self) -> usize {
        self.c1 + self.c2 + self.c3
    }

    pub fn is_none(&self) -> bool {
        self.total() == 0
    }

    /// `c' = (c1, c2)`
    pub fn shift(&self) -> MultiIndex {
        MultiIndex::new(self.c1, self.c2)
    }

    pub fn check_degree(&self, n: usize) -> Result<()> {
        if self.total() >= n && !(self.is_none() && n == 0) {
            return Err(Error::ConstraintTooLarge { c: self.total(), n });
        }
        Ok(())
    }

    /// Membership in the constrained set of degree `n`.
    pub fn admits(&self, n: usize, k: MultiIndex) -> bool {
        k.k1 >= self.c1 && k.k2 >= self.c2 && k.total() + self.c3 <= n
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    Theta,
    Omega(ConstraintVector),
    Gamma(ConstraintVector),
}

/// An ordered triangular index set.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexDomain {
    n: usize,
    kind: DomainKind,
    indices: Vec<MultiIndex>,
    // canonical position in theta(n) -> position in this domain
    lookup: Vec<Option<usize>>,
}

impl IndexDomain {
    fn build(n: usize, kind: DomainKind, keep: impl Fn(MultiIndex) -> bool) -> Self {
        let mut indices = Vec::new();
        let mut lookup = Vec::with_capacity(theta_len(n));
        for k1 in 0..=n {
            for k2 in 0..=(n - k1) {
                let k = MultiIndex::new(k1, k2);
                if keep(k) {
                    lookup.push(Some(indices.len()));
                    indices.push(k);
                } else {
                    lookup.push(None);
                }
            }
        }
        IndexDomain {
            n,
            kind,
            indices,
            lookup,
        }
    }

    pub fn theta(n: usize) -> Self {
        Self::build(n, DomainKind::Theta, |_| true)
    }

    pub fn omega(n: usize, c: ConstraintVector) -> Result<Self> {
        c.check_degree(n)?;
        Ok(Self::build(n, DomainKind::Omega(c), |k| c.admits(n, k)))
    }

    pub fn gamma_set(n: usize, c: ConstraintVector) -> Result<Self> {
        c.check_degree(n)?;
        Ok(Self::build(n, DomainKind::Gamma(c), |k| !c.admits(n, k)))
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn iter(&self) -> std::slice::Iter<'_, MultiIndex> {
        self.indices.iter()
    }

    pub fn contains(&self, k: MultiIndex) -> bool {
        self.position(k).is_some()
    }

    /// Position of `k` in this domain's order.
    pub fn position(&self, k: MultiIndex) -> Option<usize> {
        theta_position(self.n, k).and_then(|p| self.lookup[p])
    }
}

impl<'a> IntoIterator for &'a IndexDomain {
    type Item = &'a MultiIndex;
    type IntoIter = std::slice::Iter<'a, MultiIndex>;

    fn into_iter(self) -> Self::IntoIter {
        self.indices.iter()
    }
}

/// `|theta(n)| = (n+1)(n+2)/2`.
pub fn theta_len(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

/// First canonical position of row `k1` in `theta(n)`.
#[inline]
pub fn row_offset(n: usize, k1: usize) -> usize {
    // sum_{j < k1} (n - j + 1)
    k1 * (n + 1) - k1 * k1.saturating_sub(1) / 2
}

/// Canonical position of `k` in `theta(n)`, or `None` outside the triangle.
#[inline]
pub fn theta_position(n: usize, k: MultiIndex) -> Option<usize> {
    if k.total() > n {
        None
    } else {
        Some(row_offset(n, k.k1) + k.k2)
    }
}

/// Binomial coefficient as a float.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut b = 1.0;
    for j in 0..k {
        b = b * (n - j) as f64 / (j + 1) as f64;
    }
    b.round()
}

/// Trinomial coefficient `n! / (k1! k2! (n-|k|)!)`; zero when `|k| > n`.
pub fn trinomial(n: usize, k: MultiIndex) -> f64 {
    if k.total() > n {
        return 0.0;
    }
    binomial(n, k.k1) * binomial(n - k.k1, k.k2)
}

#[inline]
fn packed_cell(i: usize, j: usize) -> usize {
    let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
    hi * (hi + 1) / 2 + lo
}

/// Symmetric table of values indexed by pairs of `theta(n)`.
///
/// One physical cell per unordered pair, so `get(k, l)` and `get(l, k)` read
/// the same memory. Reads outside the triangle return zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffTable {
    n: usize,
    size: usize,
    values: Vec<f64>,
}

impl CoeffTable {
    pub fn zeros(n: usize) -> Self {
        let size = theta_len(n);
        CoeffTable {
            n,
            size,
            values: vec![0.0; size * (size + 1) / 2],
        }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// Number of indices, `|theta(n)|`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of physical cells.
    pub fn cell_count(&self) -> usize {
        self.values.len()
    }

    /// Read by canonical positions.
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[packed_cell(i, j)]
    }

    /// Write by canonical positions; both orders share the cell.
    #[inline]
    pub fn set_position(&mut self, i: usize, j: usize, v: f64) {
        self.values[packed_cell(i, j)] = v;
    }

    /// Read with signed coordinates; zero whenever either index lies
    /// outside `theta(n)`.
    #[inline]
    pub fn get_signed(&self, k: (i64, i64), l: (i64, i64)) -> f64 {
        match (self.signed_position(k), self.signed_position(l)) {
            (Some(i), Some(j)) => self.at(i, j),
            _ => 0.0,
        }
    }

    pub fn get(&self, k: MultiIndex, l: MultiIndex) -> f64 {
        match (theta_position(self.n, k), theta_position(self.n, l)) {
            (Some(i), Some(j)) => self.at(i, j),
            _ => 0.0,
        }
    }

    pub fn set(&mut self, k: MultiIndex, l: MultiIndex, v: f64) -> Result<()> {
        let i = theta_position(self.n, k)
            .ok_or(Error::IndexOutOfRange(k.k1 as i64, k.k2 as i64, self.n))?;
        let j = theta_position(self.n, l)
            .ok_or(Error::IndexOutOfRange(l.k1 as i64, l.k2 as i64, self.n))?;
        self.set_position(i, j, v);
        Ok(())
    }

    #[inline]
    fn signed_position(&self, k: (i64, i64)) -> Option<usize> {
        if k.0 < 0 || k.1 < 0 {
            return None;
        }
        theta_position(self.n, MultiIndex::new(k.0 as usize, k.1 as usize))
    }

    /// Row `k` of the logical `|theta| x |theta|` matrix.
    pub fn row(&self, i: usize) -> Vec<f64> {
        (0..self.size).map(|j| self.at(i, j)).collect()
    }

    /// Dense row-major copy of the logical matrix.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.size * self.size);
        for i in 0..self.size {
            for j in 0..self.size {
                out.push(self.at(i, j));
            }
        }
        out
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}
