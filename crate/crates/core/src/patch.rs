//! Triangular Bezier patches: Bernstein basis, de Casteljau evaluation,
//! rational patches and the Jacobi weight on the standard triangle
//! `T = {x1, x2 >= 0, x1 + x2 <= 1}`.
//!
//! Control values may be vectors of a fixed dimension `dim`. They are stored
//! row-major: the value of index `k` occupies
//! `values[pos(k) * dim .. (pos(k) + 1) * dim]` with `pos` the canonical
//! position in `theta(n)`.

use statrs::function::gamma::ln_gamma;

use crate::dual::AlphaParams;
use crate::error::{Error, Result};
use crate::index::{row_offset, theta_len, theta_position, trinomial, MultiIndex};

/// Relative spread below which weights count as equal.
pub const EQUAL_WEIGHT_TOL: f64 = 1e-14;

// slack for x1 + x2 slightly above 1 after rounding
const EDGE_SLACK: f64 = 4.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainPoint {
    pub x1: f64,
    pub x2: f64,
}

impl DomainPoint {
    pub const fn new(x1: f64, x2: f64) -> Self {
        DomainPoint { x1, x2 }
    }

    /// `x3 = 1 - x1 - x2`, clamped at zero.
    pub fn x3(&self) -> f64 {
        (1.0 - self.x1 - self.x2).max(0.0)
    }

    pub fn in_triangle(&self) -> bool {
        self.x1 >= 0.0 && self.x2 >= 0.0 && self.x1 + self.x2 <= 1.0 + EDGE_SLACK
    }

    pub fn check(&self) -> Result<()> {
        if self.in_triangle() {
            Ok(())
        } else {
            Err(Error::Domain(self.x1, self.x2))
        }
    }
}

impl From<(f64, f64)> for DomainPoint {
    fn from((x1, x2): (f64, f64)) -> Self {
        DomainPoint::new(x1, x2)
    }
}

/// `B^n_k(x) = binom(n, k) x1^k1 x2^k2 x3^k3`, with `0^0 = 1`.
pub fn bernstein_eval(n: usize, k: MultiIndex, x: DomainPoint) -> f64 {
    if k.total() > n {
        return 0.0;
    }
    trinomial(n, k) * x.x1.powi(k.k1 as i32) * x.x2.powi(k.k2 as i32) * x.x3().powi(k.k3(n) as i32)
}

/// All `B^n_k(x)` in canonical order.
pub fn bernstein_all(n: usize, x: DomainPoint) -> Vec<f64> {
    let powers = |t: f64| {
        let mut p = Vec::with_capacity(n + 1);
        let mut acc = 1.0;
        for _ in 0..=n {
            p.push(acc);
            acc *= t;
        }
        p
    };
    let (p1, p2, p3) = (powers(x.x1), powers(x.x2), powers(x.x3()));
    let mut out = Vec::with_capacity(theta_len(n));
    for k1 in 0..=n {
        for k2 in 0..=(n - k1) {
            let k = MultiIndex::new(k1, k2);
            out.push(trinomial(n, k) * p1[k1] * p2[k2] * p3[n - k1 - k2]);
        }
    }
    out
}

/// `A_alpha = Gamma(|alpha|+3) / (Gamma(a1+1) Gamma(a2+1) Gamma(a3+1))`,
/// which makes the weight integrate to one over `T`.
pub fn weight_normalization(alpha: &AlphaParams) -> f64 {
    let [a1, a2, a3] = alpha.0;
    (ln_gamma(alpha.sum() + 3.0) - ln_gamma(a1 + 1.0) - ln_gamma(a2 + 1.0) - ln_gamma(a3 + 1.0)).exp()
}

/// `w_alpha(x) = A_alpha x1^a1 x2^a2 x3^a3`.
pub fn weight_eval(alpha: &AlphaParams, x: DomainPoint) -> Result<f64> {
    x.check()?;
    let coords = [x.x1, x.x2, x.x3()];
    let mut w = weight_normalization(alpha);
    for (a, t) in alpha.0.into_iter().zip(coords) {
        if a < 0.0 && t == 0.0 {
            return Err(Error::Domain(x.x1, x.x2));
        }
        w *= t.powf(a);
    }
    Ok(w)
}

/// Triangular Bezier patch, optionally rational.
#[derive(Debug, Clone, PartialEq)]
pub struct TriPatch {
    degree: usize,
    dim: usize,
    values: Vec<f64>,
    weights: Option<Vec<f64>>,
}

impl TriPatch {
    pub fn new(degree: usize, dim: usize, values: Vec<f64>, weights: Option<Vec<f64>>) -> Result<Self> {
        let len = theta_len(degree);
        if dim == 0 {
            return Err(Error::Dimension("control values need dimension >= 1".into()));
        }
        if values.len() != len * dim {
            return Err(Error::Dimension(format!(
                "degree {degree} with dimension {dim} needs {} values, got {}",
                len * dim,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("control values must be finite".into()));
        }
        if let Some(w) = &weights {
            if w.len() != len {
                return Err(Error::Dimension(format!(
                    "degree {degree} needs {len} weights, got {}",
                    w.len()
                )));
            }
            if let Some(bad) = w.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
                return Err(Error::InvalidParameter(format!("weights must be positive, got {bad}")));
            }
        }
        Ok(TriPatch {
            degree,
            dim,
            values,
            weights,
        })
    }

    pub fn polynomial(degree: usize, dim: usize, values: Vec<f64>) -> Result<Self> {
        Self::new(degree, dim, values, None)
    }

    /// Every control value equal to `value`.
    pub fn constant(degree: usize, value: &[f64]) -> Result<Self> {
        let values = value.repeat(theta_len(degree));
        Self::new(degree, value.len(), values, None)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        theta_len(self.degree)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn is_rational(&self) -> bool {
        self.weights.is_some()
    }

    /// Control value at canonical position `i`.
    pub fn value_at(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn value(&self, k: MultiIndex) -> Option<&[f64]> {
        theta_position(self.degree, k).map(|i| self.value_at(i))
    }

    /// True when there are no weights or they agree up to
    /// [`EQUAL_WEIGHT_TOL`], in which case the patch is a polynomial.
    pub fn has_equal_weights(&self) -> bool {
        match &self.weights {
            None => true,
            Some(w) => w.iter().all(|wk| (wk / w[0] - 1.0).abs() <= EQUAL_WEIGHT_TOL),
        }
    }

    /// Rational basis `Q^n_k(x) = w_k B^n_k(x) / sum_j w_j B^n_j(x)`, or the
    /// Bernstein basis when there are no weights.
    pub fn basis(&self, x: DomainPoint) -> Result<Vec<f64>> {
        x.check()?;
        let mut b = bernstein_all(self.degree, x);
        if let Some(w) = &self.weights {
            let mut den = 0.0;
            for (bk, wk) in b.iter_mut().zip(w) {
                *bk *= wk;
                den += *bk;
            }
            if den < 1e-300 {
                return Err(Error::Degenerate(format!(
                    "rational denominator underflows at ({}, {})",
                    x.x1, x.x2
                )));
            }
            for bk in &mut b {
                *bk /= den;
            }
        }
        Ok(b)
    }

    /// Value at `x` by triangular de Casteljau; rational patches run it on
    /// homogeneous coordinates `(w r, w)`.
    pub fn eval(&self, x: DomainPoint) -> Result<Vec<f64>> {
        x.check()?;
        match &self.weights {
            None => Ok(de_casteljau(self.degree, self.dim, &self.values, x)),
            Some(w) => {
                let d = self.dim + 1;
                let mut hom = Vec::with_capacity(w.len() * d);
                for (i, wk) in w.iter().enumerate() {
                    hom.extend(self.value_at(i).iter().map(|v| v * wk));
                    hom.push(*wk);
                }
                let mut out = de_casteljau(self.degree, d, &hom, x);
                let den = out.pop().unwrap_or(0.0);
                if den < 1e-300 {
                    return Err(Error::Degenerate(format!(
                        "rational denominator underflows at ({}, {})",
                        x.x1, x.x2
                    )));
                }
                Ok(out.into_iter().map(|v| v / den).collect())
            }
        }
    }

    /// The same function written at degree `n + 1`.
    pub fn elevate(&self) -> TriPatch {
        let n = self.degree;
        match &self.weights {
            None => TriPatch {
                degree: n + 1,
                dim: self.dim,
                values: elevate_net(n, self.dim, &self.values),
                weights: None,
            },
            Some(w) => {
                let mut hom = Vec::with_capacity(w.len() * self.dim);
                for (i, wk) in w.iter().enumerate() {
                    hom.extend(self.value_at(i).iter().map(|v| v * wk));
                }
                let new_w = elevate_net(n, 1, w);
                let mut values = elevate_net(n, self.dim, &hom);
                for (chunk, wk) in values.chunks_mut(self.dim).zip(&new_w) {
                    for v in chunk {
                        *v /= wk;
                    }
                }
                TriPatch {
                    degree: n + 1,
                    dim: self.dim,
                    values,
                    weights: Some(new_w),
                }
            }
        }
    }

    /// Component `j` of every control value, in canonical order.
    pub fn component(&self, j: usize) -> Vec<f64> {
        self.values.iter().skip(j).step_by(self.dim).copied().collect()
    }
}

fn de_casteljau(n: usize, dim: usize, net: &[f64], x: DomainPoint) -> Vec<f64> {
    let (x1, x2, x3) = (x.x1, x.x2, x.x3());
    let mut level = net.to_vec();
    for d in (0..n).rev() {
        // level has degree d + 1; fold it to degree d in place
        for k1 in 0..=d {
            for k2 in 0..=(d - k1) {
                let dst = (row_offset(d, k1) + k2) * dim;
                let e1 = (row_offset(d + 1, k1 + 1) + k2) * dim;
                let e2 = (row_offset(d + 1, k1) + k2 + 1) * dim;
                let e3 = (row_offset(d + 1, k1) + k2) * dim;
                for c in 0..dim {
                    level[dst + c] = x1 * level[e1 + c] + x2 * level[e2 + c] + x3 * level[e3 + c];
                }
            }
        }
    }
    level.truncate(dim);
    level
}

fn elevate_net(n: usize, dim: usize, net: &[f64]) -> Vec<f64> {
    let up = n + 1;
    let mut out = vec![0.0; theta_len(up) * dim];
    let nf = up as f64;
    for k1 in 0..=up {
        for k2 in 0..=(up - k1) {
            let k3 = up - k1 - k2;
            let dst = (row_offset(up, k1) + k2) * dim;
            let mut add = |src_k1: usize, src_k2: usize, f: f64| {
                let src = (row_offset(n, src_k1) + src_k2) * dim;
                for c in 0..dim {
                    out[dst + c] += f * net[src + c];
                }
            };
            if k1 > 0 {
                add(k1 - 1, k2, k1 as f64 / nf);
            }
            if k2 > 0 {
                add(k1, k2 - 1, k2 as f64 / nf);
            }
            if k3 > 0 {
                add(k1, k2, k3 as f64 / nf);
            }
        }
    }
    out
}
