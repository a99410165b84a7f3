//! Constrained L2 approximation of a triangular patch by a polynomial patch.
//!
//! Given a source patch `R` of degree `n` (polynomial or rational), a target
//! degree `m`, a constraint vector `c` and prescribed control values `g` on
//! `gamma(m, c)`, [`solve`] returns the degree-`m` polynomial patch `P` with
//! `p_k = g_k` on `gamma(m, c)` that minimizes `int_T w_alpha (R - P)^2`.
//!
//! The free control points are
//!
//! ```text
//! p_k = sum_{l in omega} binom(m, l) E^k_l(alpha, c, m) (u_l - v_l)
//! u_l = sum_h r_h I_{h,l} / binom(m, l),     I_{h,l} = <Q^n_h, B^m_l>
//! v_l = sum_{h in gamma} g_h <B^m_h, B^m_l> / binom(m, l)
//! ```
//!
//! so that `binom(m, l) (u_l - v_l) = <R - G, B^m_l>` with `G` the part of
//! the result fixed by `g`. No Gram system is solved.

use nalgebra::DMatrix;

use crate::dual::{constrained_table, AlphaParams};
use crate::error::{Error, Result};
use crate::index::{trinomial, ConstraintVector, IndexDomain};
use crate::oracles::gram_entry;
use crate::patch::TriPatch;
use crate::quadrature::{integrate_adaptive, integrate_adaptive_many};
use crate::special::pochhammer;

/// How the integrals `I_{h,l}` were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegralMethod {
    /// Closed form, used when the source weights are equal.
    ClosedForm,
    /// Adaptive quadrature; `order` nodes per direction at convergence.
    Quadrature { order: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub integrals: IntegralMethod,
    /// Rule order at which the distance converged, if it was computed.
    pub distance_order: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxProblem {
    pub source: TriPatch,
    pub m: usize,
    pub c: ConstraintVector,
    /// Prescribed values over `gamma(m, c)` in canonical order, row-major
    /// with the source dimension.
    pub g: Vec<f64>,
    pub alpha: AlphaParams,
}

impl ApproxProblem {
    pub fn new(source: TriPatch, m: usize, c: ConstraintVector, g: Vec<f64>, alpha: AlphaParams) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("target degree must be >= 1".into()));
        }
        c.check_degree(m)?;
        let gamma = IndexDomain::gamma_set(m, c)?;
        let want = gamma.len() * source.dim();
        if g.len() != want {
            return Err(Error::Dimension(format!(
                "{} boundary indices of dimension {} need {want} values, got {}",
                gamma.len(),
                source.dim(),
                g.len()
            )));
        }
        if g.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("boundary values must be finite".into()));
        }
        Ok(ApproxProblem {
            source,
            m,
            c,
            g,
            alpha,
        })
    }

    /// No constraints, so nothing is prescribed.
    pub fn unconstrained(source: TriPatch, m: usize, alpha: AlphaParams) -> Result<Self> {
        Self::new(source, m, ConstraintVector::NONE, Vec::new(), alpha)
    }

    pub fn omega(&self) -> IndexDomain {
        IndexDomain::omega(self.m, self.c).expect("validated constraint")
    }

    pub fn gamma(&self) -> IndexDomain {
        IndexDomain::gamma_set(self.m, self.c).expect("validated constraint")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxSolution {
    pub result: TriPatch,
    /// `int_T w_alpha (R - P)^2`, summed over components; `NaN` when not
    /// requested.
    pub distance: f64,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Tolerance of the adaptive quadrature for `I_{h,l}`.
    pub integral_tol: f64,
    /// Tolerance of the adaptive quadrature for the reported distance.
    pub distance_tol: f64,
    pub compute_distance: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            integral_tol: 1e-12,
            distance_tol: 1e-12,
            compute_distance: true,
        }
    }
}

/// `I_{h,l} = <Q^n_h, B^m_l>_alpha` over `theta(n) x omega(m, c)`.
pub fn integrals_i(problem: &ApproxProblem, tol: f64) -> Result<(DMatrix<f64>, IntegralMethod)> {
    let src = &problem.source;
    let n = src.degree();
    let rows = IndexDomain::theta(n);
    let omega = problem.omega();
    if src.has_equal_weights() {
        let mut out = DMatrix::zeros(rows.len(), omega.len());
        for (i, h) in rows.iter().enumerate() {
            for (j, l) in omega.iter().enumerate() {
                out[(i, j)] = gram_entry(&problem.alpha, n, problem.m, *h, *l)?;
            }
        }
        return Ok((out, IntegralMethod::ClosedForm));
    }

    let (nr, nc) = (rows.len(), omega.len());
    let full = IndexDomain::theta(problem.m);
    let cols: Vec<usize> = omega.iter().map(|l| full.position(*l).expect("omega inside theta")).collect();
    let integrand = |x, out: &mut [f64]| {
        // the rule nodes are interior, so the basis is always defined
        let q = src.basis(x).expect("interior node");
        let b = crate::patch::bernstein_all(problem.m, x);
        for j in 0..nc {
            let bj = b[cols[j]];
            for i in 0..nr {
                out[j * nr + i] = q[i] * bj;
            }
        }
    };
    let label = |e: usize| format!("integral I(h = {}, l = {})", rows.indices()[e % nr], omega.indices()[e / nr]);
    let (vals, order) = integrate_adaptive_many(integrand, nr * nc, &problem.alpha, tol, label)?;
    Ok((DMatrix::from_column_slice(nr, nc, &vals), IntegralMethod::Quadrature { order }))
}

/// `u_l` over `omega(m, c)`, row-major with the source dimension.
pub fn compute_u(problem: &ApproxProblem, integrals: &DMatrix<f64>) -> Vec<f64> {
    let src = &problem.source;
    let dim = src.dim();
    let omega = problem.omega();
    let mut u = vec![0.0; omega.len() * dim];
    for (j, l) in omega.iter().enumerate() {
        let scale = trinomial(problem.m, *l);
        for h in 0..src.len() {
            let ihl = integrals[(h, j)];
            for (d, r) in src.value_at(h).iter().enumerate() {
                u[j * dim + d] += r * ihl;
            }
        }
        for d in 0..dim {
            u[j * dim + d] /= scale;
        }
    }
    u
}

/// `v_l` over `omega(m, c)`; all zero when `gamma(m, c)` is empty.
pub fn compute_v(problem: &ApproxProblem) -> Vec<f64> {
    let dim = problem.source.dim();
    let m = problem.m;
    let omega = problem.omega();
    let gamma = problem.gamma();
    let [a1, a2, a3] = problem.alpha.0;
    let den = pochhammer(problem.alpha.sum() + 3.0, 2 * m);
    let mut v = vec![0.0; omega.len() * dim];
    for (j, l) in omega.iter().enumerate() {
        for (i, h) in gamma.iter().enumerate() {
            let f = trinomial(m, *h)
                * pochhammer(a1 + 1.0, h.k1 + l.k1)
                * pochhammer(a2 + 1.0, h.k2 + l.k2)
                * pochhammer(a3 + 1.0, h.k3(m) + l.k3(m))
                / den;
            for d in 0..dim {
                v[j * dim + d] += f * problem.g[i * dim + d];
            }
        }
    }
    v
}

pub fn solve(problem: &ApproxProblem) -> Result<ApproxSolution> {
    solve_with(problem, &SolveOptions::default())
}

pub fn solve_with(problem: &ApproxProblem, opts: &SolveOptions) -> Result<ApproxSolution> {
    let m = problem.m;
    let dim = problem.source.dim();
    let table = constrained_table(&problem.alpha, problem.c, m)?;
    let (integrals, method) = integrals_i(problem, opts.integral_tol)?;
    let u = compute_u(problem, &integrals);
    let v = compute_v(problem);

    let omega = problem.omega();
    let full = IndexDomain::theta(m);
    // binom(m, l) (u_l - v_l)
    let mut rhs = vec![0.0; omega.len() * dim];
    for (j, l) in omega.iter().enumerate() {
        let b = trinomial(m, *l);
        for d in 0..dim {
            rhs[j * dim + d] = b * (u[j * dim + d] - v[j * dim + d]);
        }
    }

    let mut values = vec![0.0; full.len() * dim];
    for (i, k) in omega.iter().enumerate() {
        let dst = full.position(*k).expect("omega inside theta") * dim;
        for j in 0..omega.len() {
            let e = table.at(i, j);
            for d in 0..dim {
                values[dst + d] += e * rhs[j * dim + d];
            }
        }
    }
    for (i, h) in problem.gamma().iter().enumerate() {
        let dst = full.position(*h).expect("gamma inside theta") * dim;
        values[dst..dst + dim].copy_from_slice(&problem.g[i * dim..(i + 1) * dim]);
    }
    let result = TriPatch::polynomial(m, dim, values)?;

    let (dist, distance_order) = if opts.compute_distance {
        let est = distance(&problem.source, &result, &problem.alpha, opts.distance_tol)?;
        (est.0, Some(est.1))
    } else {
        (f64::NAN, None)
    };
    Ok(ApproxSolution {
        result,
        distance: dist,
        diagnostics: Diagnostics {
            integrals: method,
            distance_order,
        },
    })
}

/// `int_T w_alpha |P - Q|^2` and the rule order at which it converged.
pub fn distance(p: &TriPatch, q: &TriPatch, alpha: &AlphaParams, tol: f64) -> Result<(f64, usize)> {
    if p.dim() != q.dim() {
        return Err(Error::Dimension(format!(
            "patches of dimension {} and {} cannot be compared",
            p.dim(),
            q.dim()
        )));
    }
    let mut failure = None;
    let est = integrate_adaptive(
        |x| match (p.eval(x), q.eval(x)) {
            (Ok(a), Ok(b)) => a.iter().zip(&b).map(|(a, b)| (a - b) * (a - b)).sum(),
            (Err(e), _) | (_, Err(e)) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        alpha,
        tol,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let est = est?;
    Ok((est.value.max(0.0), est.order))
}
