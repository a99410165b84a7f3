//! Reference computations for the dual coefficient table.
//!
//! Both are independent of the recurrence engine:
//!
//! * [`dual_table_via_gram_inverse`] inverts the Bernstein Gram matrix, since
//!   the coefficient matrix `E` satisfies `E G = I`;
//! * [`dual_entry_direct`] sums the bivariate Hahn expansion of each entry.
//!
//! Neither is meant for large degrees.

use nalgebra::{DMatrix, DVector};

use crate::approx::ApproxProblem;
use crate::dual::AlphaParams;
use crate::error::{Error, Result};
use crate::index::{trinomial, CoeffTable, ConstraintVector, IndexDomain, MultiIndex};
use crate::special::{hahn_biv_eval, lambda_sq, pochhammer};

/// Largest degree accepted by the Gram-inverse oracle.
pub const GRAM_MAX_DEGREE: usize = 12;

/// `<B^n_h, B^m_l>_alpha` in closed form (Dirichlet integral).
///
/// The three numerator Pochhammer symbols have `n + m` factors in total,
/// as does the denominator `(|alpha|+3)_{n+m}`; they are divided pairwise.
pub fn gram_entry(alpha: &AlphaParams, n: usize, m: usize, h: MultiIndex, l: MultiIndex) -> Result<f64> {
    for (idx, deg) in [(h, n), (l, m)] {
        if idx.total() > deg {
            return Err(Error::IndexOutOfRange(idx.k1 as i64, idx.k2 as i64, deg));
        }
    }
    let [a1, a2, a3] = alpha.0;
    let abs = alpha.sum();
    let counts = [
        (a1, h.k1 + l.k1),
        (a2, h.k2 + l.k2),
        (a3, n + m - h.total() - l.total()),
    ];
    let mut v = trinomial(n, h) * trinomial(m, l);
    let mut j = 0usize;
    for (a, cnt) in counts {
        for i in 0..cnt {
            v *= (a + 1.0 + i as f64) / (abs + 3.0 + j as f64);
            j += 1;
        }
    }
    Ok(v)
}

/// `<B^n_h, 1>_alpha`, a row sum of the Gram matrix.
pub fn bernstein_moment(alpha: &AlphaParams, n: usize, h: MultiIndex) -> f64 {
    let [a1, a2, a3] = alpha.0;
    trinomial(n, h) * pochhammer(a1 + 1.0, h.k1) * pochhammer(a2 + 1.0, h.k2) * pochhammer(a3 + 1.0, h.k3(n))
        / pochhammer(alpha.sum() + 3.0, n)
}

/// Matrix of `<B^n_h, B^m_l>_alpha` over `theta(n) x theta(m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    pub n: usize,
    pub m: usize,
    pub alpha: AlphaParams,
    pub matrix: DMatrix<f64>,
}

impl GramMatrix {
    pub fn new(alpha: &AlphaParams, n: usize, m: usize) -> Result<Self> {
        let rows = IndexDomain::theta(n);
        let cols = IndexDomain::theta(m);
        let mut matrix = DMatrix::zeros(rows.len(), cols.len());
        for (i, h) in rows.iter().enumerate() {
            for (j, l) in cols.iter().enumerate() {
                matrix[(i, j)] = gram_entry(alpha, n, m, *h, *l)?;
            }
        }
        Ok(GramMatrix {
            n,
            m,
            alpha: *alpha,
            matrix,
        })
    }
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let z = s - a;
    (s, (a - (s - z)) + (b - z))
}

/// Dot product evaluated as if in twice the working precision.
fn dot2(x: impl Iterator<Item = (f64, f64)>) -> f64 {
    let (mut s, mut c) = (0.0, 0.0);
    for (a, b) in x {
        let p = a * b;
        let ep = a.mul_add(b, -p);
        let (t, es) = two_sum(s, p);
        s = t;
        c += ep + es;
    }
    s + c
}

/// The coefficient table obtained by solving `E G = I` with a Cholesky
/// factorisation of `G` and iterative refinement. The refinement residual
/// `I - G E` is accumulated with compensated dot products.
pub fn dual_table_via_gram_inverse(alpha: &AlphaParams, n: usize) -> Result<CoeffTable> {
    check_gram_degree(n)?;
    let g = GramMatrix::new(alpha, n, n)?.matrix;
    let x = refined_inverse(&g, n)?;
    Ok(symmetric_table(&x, n))
}

/// Constrained coefficients `E^k_l(alpha, c, n)` from the inverse of the
/// Gram matrix restricted to `omega(n, c)`. Positions follow the canonical
/// order of `omega(n, c)`, stored like a table of degree `n - |c|`.
pub fn constrained_table_via_gram_inverse(alpha: &AlphaParams, c: ConstraintVector, n: usize) -> Result<CoeffTable> {
    check_gram_degree(n)?;
    let omega = IndexDomain::omega(n, c)?;
    let idx = omega.indices();
    let mut g = DMatrix::zeros(idx.len(), idx.len());
    for i in 0..idx.len() {
        for j in 0..idx.len() {
            g[(i, j)] = gram_entry(alpha, n, n, idx[i], idx[j])?;
        }
    }
    let x = refined_inverse(&g, n)?;
    Ok(symmetric_table(&x, n - c.total()))
}

fn check_gram_degree(n: usize) -> Result<()> {
    if n > GRAM_MAX_DEGREE {
        return Err(Error::Conditioning(format!(
            "Gram inverse oracle is limited to n <= {GRAM_MAX_DEGREE}, got {n}"
        )));
    }
    Ok(())
}

fn refined_inverse(g: &DMatrix<f64>, n: usize) -> Result<DMatrix<f64>> {
    let size = g.nrows();
    let chol = g
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Conditioning(format!("Gram matrix of degree {n} is not numerically SPD")))?;
    let identity = DMatrix::<f64>::identity(size, size);
    let mut x = chol.solve(&identity);

    let residual = |x: &DMatrix<f64>| {
        DMatrix::from_fn(size, size, |i, j| {
            let gx = dot2((0..size).map(|p| (g[(i, p)], x[(p, j)])));
            identity[(i, j)] - gx
        })
    };
    let mut r = residual(&x);
    for _ in 0..3 {
        x += chol.solve(&r);
        r = residual(&x);
    }

    let norm_inf = |m: &DMatrix<f64>| {
        m.row_iter()
            .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0f64, f64::max)
    };
    let bound = 1e-10 * norm_inf(g) * norm_inf(&x);
    let worst = r.amax();
    if !(worst <= bound) {
        return Err(Error::Conditioning(format!(
            "Gram solve residual {worst:e} exceeds {bound:e} at n = {n}"
        )));
    }
    Ok(x)
}

fn symmetric_table(x: &DMatrix<f64>, degree: usize) -> CoeffTable {
    let mut table = CoeffTable::zeros(degree);
    for i in 0..x.nrows() {
        for j in i..x.nrows() {
            table.set_position(i, j, 0.5 * (x[(i, j)] + x[(j, i)]));
        }
    }
    table
}

/// `C^2_{q,i} = binom(q,i)^2 / ((q!)^2 ((-n)_q)^2 lambda^2_{q,i})`.
fn hahn_weight_sq(alpha: &AlphaParams, n: usize, q: usize, i: usize) -> f64 {
    let binom = crate::index::binomial(q, i);
    let fact = pochhammer(1.0, q);
    let fall = pochhammer(-(n as f64), q);
    binom * binom / (fact * fact * fall * fall * lambda_sq(q, i, alpha))
}

/// `e^k_l` as the double sum over bivariate Hahn polynomials evaluated at
/// `k* = (k2, k3)` and `l* = (l2, l3)`. `O(n^3)` per entry.
pub fn dual_entry_direct(alpha: &AlphaParams, n: usize, k: MultiIndex, l: MultiIndex) -> Result<f64> {
    for idx in [k, l] {
        if idx.total() > n {
            return Err(Error::IndexOutOfRange(idx.k1 as i64, idx.k2 as i64, n));
        }
    }
    let ks = k.star(n);
    let ls = l.star(n);
    let mut total = 0.0;
    for q in 0..=n {
        for i in 0..=q {
            let hk = hahn_biv_eval(q, i, (ks.k1 as i64, ks.k2 as i64), alpha, n)?;
            let hl = hahn_biv_eval(q, i, (ls.k1 as i64, ls.k2 as i64), alpha, n)?;
            total += hahn_weight_sq(alpha, n, q, i) * hk * hl;
        }
    }
    Ok(total)
}

/// Full table from the Hahn double sum, sharing the polynomial values
/// between entries.
pub fn dual_table_direct(alpha: &AlphaParams, n: usize) -> Result<CoeffTable> {
    let theta = IndexDomain::theta(n);
    let pairs: Vec<(usize, usize)> = (0..=n).flat_map(|q| (0..=q).map(move |i| (q, i))).collect();
    let weights: Vec<f64> = pairs.iter().map(|&(q, i)| hahn_weight_sq(alpha, n, q, i)).collect();
    let mut values = Vec::with_capacity(theta.len());
    for k in theta.iter() {
        let ks = k.star(n);
        let row = pairs
            .iter()
            .map(|&(q, i)| hahn_biv_eval(q, i, (ks.k1 as i64, ks.k2 as i64), alpha, n))
            .collect::<Result<Vec<f64>>>()?;
        values.push(row);
    }
    let mut table = CoeffTable::zeros(n);
    for i in 0..theta.len() {
        for j in i..theta.len() {
            let v = weights
                .iter()
                .zip(values[i].iter().zip(&values[j]))
                .map(|(w, (a, b))| w * a * b)
                .sum();
            table.set_position(i, j, v);
        }
    }
    Ok(table)
}

/// Constrained least squares by the normal equations: for `j` in
/// `omega(m, c)`,
/// `sum_{l in omega} p_l <B_l, B_j> = <R, B_j> - sum_{h in gamma} g_h <B_h, B_j>`,
/// solved by Cholesky with the closed-form Gram matrices. Only for
/// polynomial (equal-weight) sources. Returns every control value over
/// `theta(m)`, row-major with the source dimension.
pub fn constrained_least_squares(problem: &ApproxProblem) -> Result<Vec<f64>> {
    let src = &problem.source;
    if !src.has_equal_weights() {
        return Err(Error::InvalidParameter(
            "the normal-equations oracle needs a polynomial source".into(),
        ));
    }
    let (n, m, dim) = (src.degree(), problem.m, src.dim());
    if m > GRAM_MAX_DEGREE || n > GRAM_MAX_DEGREE {
        return Err(Error::Conditioning(format!(
            "normal-equations oracle is limited to degrees <= {GRAM_MAX_DEGREE}"
        )));
    }
    let theta = IndexDomain::theta(m);
    let omega = problem.omega();
    let gamma = problem.gamma();
    let gmm = GramMatrix::new(&problem.alpha, m, m)?.matrix;
    let gnm = GramMatrix::new(&problem.alpha, n, m)?.matrix;
    let pos = |k: &MultiIndex| theta.position(*k).expect("index inside theta");

    let free: Vec<usize> = omega.iter().map(pos).collect();
    let fixed: Vec<usize> = gamma.iter().map(pos).collect();
    let a = DMatrix::from_fn(free.len(), free.len(), |i, j| gmm[(free[i], free[j])]);
    let chol = a
        .cholesky()
        .ok_or_else(|| Error::Conditioning("constrained Gram matrix is not positive definite".into()))?;

    let mut out = vec![0.0; theta.len() * dim];
    for (i, f) in fixed.iter().enumerate() {
        out[f * dim..(f + 1) * dim].copy_from_slice(&problem.g[i * dim..(i + 1) * dim]);
    }
    for d in 0..dim {
        let rhs = DVector::from_fn(free.len(), |j, _| {
            let col = free[j];
            let source: f64 = (0..src.len()).map(|h| src.value_at(h)[d] * gnm[(h, col)]).sum();
            let boundary: f64 = fixed
                .iter()
                .enumerate()
                .map(|(i, f)| problem.g[i * dim + d] * gmm[(*f, col)])
                .sum();
            source - boundary
        });
        let p = chol.solve(&rhs);
        for (j, f) in free.iter().enumerate() {
            out[f * dim + d] = p[j];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::compute_table;

    fn a0() -> AlphaParams {
        AlphaParams::zero()
    }

    #[test]
    fn gram_entries_small() {
        let o = MultiIndex::new(0, 0);
        assert_eq!(gram_entry(&a0(), 0, 0, o, o).unwrap(), 1.0);
        assert!((gram_entry(&a0(), 1, 1, o, o).unwrap() - 1.0 / 6.0).abs() < 1e-16);
        assert!((gram_entry(&a0(), 1, 1, o, MultiIndex::new(1, 0)).unwrap() - 1.0 / 12.0).abs() < 1e-16);
        assert!(gram_entry(&a0(), 1, 1, MultiIndex::new(1, 1), o).is_err());
    }

    #[test]
    fn gram_symmetry_positivity_and_row_sums() {
        let a = AlphaParams::new(0.5, -0.4, 2.0).unwrap();
        for n in 0..=5 {
            for m in 0..=5 {
                let g = GramMatrix::new(&a, n, m).unwrap();
                let rows = IndexDomain::theta(n);
                for (i, h) in rows.iter().enumerate() {
                    let sum: f64 = g.matrix.row(i).iter().sum();
                    let want = bernstein_moment(&a, n, *h);
                    assert!((sum - want).abs() <= 1e-14 * want);
                    assert!(g.matrix.row(i).iter().all(|v| *v > 0.0));
                }
                if n == m {
                    assert_eq!(g.matrix, g.matrix.transpose());
                }
            }
        }
    }

    #[test]
    fn gram_inverse_degree_one() {
        let t = dual_table_via_gram_inverse(&a0(), 1).unwrap();
        let want = [[9.0, -3.0, -3.0], [-3.0, 9.0, -3.0], [-3.0, -3.0, 9.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((t.at(i, j) - want[i][j]).abs() < 1e-12);
            }
        }
        assert_eq!(dual_table_via_gram_inverse(&a0(), 0).unwrap().at(0, 0), 1.0);
        assert!(dual_table_via_gram_inverse(&a0(), 13).is_err());
    }

    #[test]
    fn direct_small() {
        let o = MultiIndex::new(0, 0);
        assert!((dual_entry_direct(&a0(), 0, o, o).unwrap() - 1.0).abs() < 1e-14);
        assert!((dual_entry_direct(&a0(), 1, o, o).unwrap() - 9.0).abs() < 1e-12);
    }

    #[test]
    fn oracles_agree_with_each_other() {
        for alpha in [[0.0, 0.0, 0.0], [0.5, 0.0, -0.3], [-0.5, -0.5, -0.5], [1.0, 2.0, 3.0]] {
            let a = AlphaParams(alpha);
            for n in 0..=6 {
                let g = dual_table_via_gram_inverse(&a, n).unwrap();
                let d = dual_table_direct(&a, n).unwrap();
                for i in 0..g.size() {
                    let scale = g.row(i).iter().fold(0.0f64, |m, v| m.max(v.abs()));
                    for j in 0..g.size() {
                        assert!(
                            (g.at(i, j) - d.at(i, j)).abs() <= 1e-9 * scale,
                            "alpha {alpha:?} n {n}: {} vs {}",
                            g.at(i, j),
                            d.at(i, j)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn direct_entries_match_engine() {
        let a = AlphaParams::new(0.8, 1.5, -0.6).unwrap();
        let n = 6;
        let t = compute_table(&a, n).unwrap();
        let theta = IndexDomain::theta(n);
        for (i, k) in theta.iter().enumerate().step_by(3) {
            for (j, l) in theta.iter().enumerate().step_by(2) {
                let d = dual_entry_direct(&a, n, *k, *l).unwrap();
                assert!((d - t.at(i, j)).abs() <= 1e-9 * d.abs().max(1.0));
            }
        }
    }

    #[test]
    fn constrained_gram_inverse_matches_engine() {
        let a = AlphaParams::new(0.3, -0.2, 0.9).unwrap();
        for (n, c) in [(5, ConstraintVector::new(1, 0, 1)), (7, ConstraintVector::new(0, 2, 1)), (4, ConstraintVector::NONE)] {
            let oracle = constrained_table_via_gram_inverse(&a, c, n).unwrap();
            let engine = crate::dual::constrained_table(&a, c, n).unwrap();
            let size = engine.domain().len();
            for i in 0..size {
                let scale = (0..size).map(|j| engine.at(i, j).abs()).fold(0.0, f64::max);
                for j in 0..size {
                    assert!((oracle.at(i, j) - engine.at(i, j)).abs() <= 1e-9 * scale);
                }
            }
        }
    }
}
