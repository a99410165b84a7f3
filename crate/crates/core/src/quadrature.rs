//! Gauss-Jacobi quadrature on the triangle against `w_alpha`.
//!
//! The Duffy map `x1 = u, x2 = v (1 - u)` turns the weighted triangle
//! integral into a product of two Jacobi-weighted integrals on `[0, 1]`:
//! `u^a1 (1-u)^(a2+a3+1)` in `u` and `v^a2 (1-v)^a3` in `v`. A rule with `q`
//! nodes per direction integrates every polynomial of total degree
//! `<= 2q - 1` exactly. Weights are normalized so that they sum to one,
//! which is the integral of `w_alpha` over `T`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::dual::AlphaParams;
use crate::error::{Error, Result};
use crate::patch::DomainPoint;

/// Orders tried by the adaptive integrators.
pub const ADAPTIVE_ORDERS: [usize; 16] = [4, 8, 12, 16, 20, 24, 28, 32, 36, 40, 44, 48, 52, 56, 60, 64];

/// Gauss rule on `[0, 1]` for the weight `u^a (1-u)^b`, nodes ascending,
/// weights summing to one.
///
/// Golub-Welsch: the nodes are the eigenvalues of the Jacobi matrix of the
/// monic Jacobi recurrence, the weights the squared first components of the
/// normalized eigenvectors.
pub fn gauss_jacobi(q: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if q == 0 {
        return Err(Error::InvalidParameter("quadrature order must be >= 1".into()));
    }
    if !(a > -1.0 && b > -1.0) {
        return Err(Error::InvalidParameter(format!(
            "Jacobi exponents must exceed -1, got ({a}, {b})"
        )));
    }
    // standard Jacobi on [-1, 1] with (1-x)^al (1+x)^be; u = (1+x)/2
    let (al, be) = (b, a);
    let ab = al + be;
    let mut j = DMatrix::<f64>::zeros(q, q);
    for k in 0..q {
        let kf = k as f64;
        let diag = if k == 0 {
            (be - al) / (ab + 2.0)
        } else {
            (be * be - al * al) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
        j[(k, k)] = (1.0 + diag) / 2.0;
        if k + 1 < q {
            let n = kf + 1.0;
            let b2 = if k == 0 {
                4.0 * (1.0 + al) * (1.0 + be) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                let s = 2.0 * n + ab;
                4.0 * n * (n + al) * (n + be) * (n + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
            let off = b2.sqrt() / 2.0;
            j[(k, k + 1)] = off;
            j[(k + 1, k)] = off;
        }
    }
    let eig = SymmetricEigen::try_new(j, 1e-15, 10_000)
        .ok_or_else(|| Error::NoConvergence(format!("Jacobi matrix eigenproblem, order {q}")))?;
    let mut pairs: Vec<(f64, f64)> = (0..q)
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    Ok(pairs.into_iter().map(|(x, w)| (x, w / total)).unzip())
}

/// Tensor rule on the triangle for `w_alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriRule {
    pub alpha: AlphaParams,
    pub order: usize,
    pub points: Vec<DomainPoint>,
    pub weights: Vec<f64>,
}

impl TriRule {
    pub fn apply<F: FnMut(DomainPoint) -> f64>(&self, mut f: F) -> f64 {
        self.points.iter().zip(&self.weights).map(|(x, w)| w * f(*x)).sum()
    }
}

pub fn build_rule(alpha: &AlphaParams, q: usize) -> Result<TriRule> {
    let [a1, a2, a3] = alpha.0;
    let (u, wu) = gauss_jacobi(q, a1, a2 + a3 + 1.0)?;
    let (v, wv) = gauss_jacobi(q, a2, a3)?;
    let mut points = Vec::with_capacity(q * q);
    let mut weights = Vec::with_capacity(q * q);
    for (ui, wui) in u.iter().zip(&wu) {
        for (vj, wvj) in v.iter().zip(&wv) {
            points.push(DomainPoint::new(*ui, vj * (1.0 - ui)));
            weights.push(wui * wvj);
        }
    }
    Ok(TriRule {
        alpha: *alpha,
        order: q,
        points,
        weights,
    })
}

type RuleKey = ([u64; 3], usize);

fn cache() -> &'static RwLock<HashMap<RuleKey, Arc<TriRule>>> {
    static CACHE: OnceLock<RwLock<HashMap<RuleKey, Arc<TriRule>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Shared, cached rule for `(alpha, q)`.
pub fn rule(alpha: &AlphaParams, q: usize) -> Result<Arc<TriRule>> {
    let key = (alpha.0.map(f64::to_bits), q);
    if let Some(r) = cache().read().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok(Arc::clone(r));
    }
    let built = Arc::new(build_rule(alpha, q)?);
    let mut map = cache().write().unwrap_or_else(|e| e.into_inner());
    Ok(Arc::clone(map.entry(key).or_insert(built)))
}

/// Fixed-order estimate of `int_T w_alpha f`.
pub fn integrate<F: FnMut(DomainPoint) -> f64>(f: F, alpha: &AlphaParams, q: usize) -> Result<f64> {
    Ok(rule(alpha, q)?.apply(f))
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Order of the rule that produced `value`.
    pub order: usize,
}

/// Raises the order in steps of four until two successive estimates differ
/// by at most `tol (1 + |estimate|)`.
pub fn integrate_adaptive<F: FnMut(DomainPoint) -> f64>(mut f: F, alpha: &AlphaParams, tol: f64) -> Result<Estimate> {
    let mut prev: Option<f64> = None;
    for q in ADAPTIVE_ORDERS {
        let est = integrate(&mut f, alpha, q)?;
        if !est.is_finite() {
            return Err(Error::NoConvergence(format!("non-finite estimate at order {q}")));
        }
        if let Some(p) = prev {
            if (est - p).abs() <= tol * (1.0 + est.abs()) {
                return Ok(Estimate { value: est, order: q });
            }
        }
        prev = Some(est);
    }
    Err(Error::NoConvergence(format!(
        "tolerance {tol:e} not met at order {}",
        ADAPTIVE_ORDERS[ADAPTIVE_ORDERS.len() - 1]
    )))
}

/// Adaptive integration of `count` integrands at once. `f` writes all
/// integrand values at a point into its output slice. Every entry must meet
/// the tolerance; the error names the first one that does not, using
/// `label` to describe it.
pub fn integrate_adaptive_many<F, L>(
    mut f: F,
    count: usize,
    alpha: &AlphaParams,
    tol: f64,
    label: L,
) -> Result<(Vec<f64>, usize)>
where
    F: FnMut(DomainPoint, &mut [f64]),
    L: Fn(usize) -> String,
{
    let mut prev: Option<Vec<f64>> = None;
    let mut buf = vec![0.0; count];
    let mut worst = 0;
    for q in ADAPTIVE_ORDERS {
        let r = rule(alpha, q)?;
        let mut est = vec![0.0; count];
        for (x, w) in r.points.iter().zip(&r.weights) {
            f(*x, &mut buf);
            for (e, b) in est.iter_mut().zip(&buf) {
                *e += w * b;
            }
        }
        if let Some(i) = est.iter().position(|v| !v.is_finite()) {
            return Err(Error::NoConvergence(format!("{}: non-finite estimate at order {q}", label(i))));
        }
        if let Some(p) = &prev {
            match est.iter().zip(p).position(|(e, p)| (e - p).abs() > tol * (1.0 + e.abs())) {
                None => return Ok((est, q)),
                Some(i) => worst = i,
            }
        }
        prev = Some(est);
    }
    Err(Error::NoConvergence(format!(
        "{}: tolerance {tol:e} not met at order {}",
        label(worst),
        ADAPTIVE_ORDERS[ADAPTIVE_ORDERS.len() - 1]
    )))
}
