//! Bezier coefficients of the dual bivariate Bernstein polynomials.
//!
//! For `k, l` in `theta(n)` the table holds `e^k_l(alpha, n)`, the
//! coefficients of `D^n_k = sum_l e^k_l B^n_l`. The full table is built in
//! `O(n^4)` operations from three ingredients:
//!
//! * the corner block `e^{(0,0)}_l`, a Hahn series per row `l1`, summed with
//!   Clenshaw's algorithm;
//! * a recurrence in `k2` that climbs each column of blocks `(k1, .)`;
//! * a recurrence in `k1` that seeds the bottom block of the next column.
//!
//! Symmetry `e^k_l = e^l_k` is structural: both orders share one cell of
//! [`CoeffTable`].
//!
//! The constrained coefficients `E^k_l(alpha, c, n)` are a rescaling of the
//! unconstrained table of degree `n - |c|` with parameters `alpha + 2c`.

use crate::error::{Error, Result};
use crate::index::{row_offset, theta_len, trinomial, CoeffTable, ConstraintVector, IndexDomain, MultiIndex};
use crate::special::{hahn_clenshaw, HahnParams};

/// Jacobi weight exponents `(alpha1, alpha2, alpha3)`, each `> -1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaParams(pub [f64; 3]);

impl AlphaParams {
    pub fn new(a1: f64, a2: f64, a3: f64) -> Result<Self> {
        for a in [a1, a2, a3] {
            if !(a > -1.0) || !a.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "weight exponents must be finite and > -1, got ({a1}, {a2}, {a3})"
                )));
            }
        }
        Ok(AlphaParams([a1, a2, a3]))
    }

    pub fn zero() -> Self {
        AlphaParams([0.0; 3])
    }

    /// `|alpha|`
    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// `(alpha2, alpha1, alpha3)`
    pub fn swapped(&self) -> Self {
        let [a1, a2, a3] = self.0;
        AlphaParams([a2, a1, a3])
    }

    /// `alpha + 2c`
    pub fn shifted(&self, c: ConstraintVector) -> Self {
        let [a1, a2, a3] = self.0;
        AlphaParams([
            a1 + 2.0 * c.c1 as f64,
            a2 + 2.0 * c.c2 as f64,
            a3 + 2.0 * c.c3 as f64,
        ])
    }
}

/// Which recurrence coefficient family to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coef {
    Zero,
    One,
    Two,
}

/// `sigma_i(t)`: coefficients of the recurrence in the second index.
pub fn sigma(t: (i64, i64), i: Coef, alpha: &AlphaParams, n: usize) -> f64 {
    let [_, a2, a3] = alpha.0;
    let total = (t.0 + t.1) as f64;
    let nf = n as f64;
    let t2 = t.1 as f64;
    let s0 = (total - nf) * (t2 + a2 + 1.0);
    let s2 = t2 * (total - a3 - nf - 1.0);
    match i {
        Coef::Zero => s0,
        Coef::One => s0 + s2,
        Coef::Two => s2,
    }
}

/// `tau_i(t) = sigma_i` with the roles of the first two coordinates and
/// parameters exchanged.
pub fn tau(t: (i64, i64), i: Coef, alpha: &AlphaParams, n: usize) -> f64 {
    sigma((t.1, t.0), i, &alpha.swapped(), n)
}

/// `e^{(0,0)}_l(alpha, n)` for every `l` in `theta(n)`, in canonical order.
///
/// Each row `l1` is a Hahn series in `l2` with parameters
/// `(alpha2, alpha3, n - l1)`, evaluated by Clenshaw summation. The row
/// `l1 = n` (a single `i = 0` term) is included.
pub fn corner_block(alpha: &AlphaParams, n: usize) -> Result<Vec<f64>> {
    let [a1, a2, a3] = alpha.0;
    let abs = alpha.sum();
    let eta = a2 + a3 + 1.0;
    let nf = n as f64;

    // (|alpha|+3)_n / n!, factor by factor
    let mut head = 1.0;
    for j in 0..n {
        head *= (abs + 3.0 + j as f64) / (j + 1) as f64;
    }

    let mut out = Vec::with_capacity(theta_len(n));
    let mut gamma = Vec::with_capacity(n + 1);
    for l1 in 0..=n {
        let m = n - l1;
        let mf = m as f64;
        let params = HahnParams::new(a2, a3, m)?;

        // (-1)^{l1} (|alpha|+3)_n (alpha1+2)_n / (n! (alpha1+2)_{l1} (eta+1)_m)
        let mut g0 = head;
        for j in 0..m {
            g0 *= (a1 + 2.0 + (l1 + j) as f64) / (eta + 1.0 + j as f64);
        }
        if l1 % 2 == 1 {
            g0 = -g0;
        }

        gamma.clear();
        gamma.push(g0);
        for i in 1..=m {
            let fi = i as f64;
            let growth = if i == 1 {
                (2.0 + eta) / (a3 + 1.0)
            } else {
                (2.0 * fi + eta) / (2.0 * fi - 2.0 + eta) * (eta + fi - 1.0) / (fi * (a3 + fi))
            };
            let ratio = -growth * (abs + nf + 2.0 + fi) / ((a1 + 2.0 + nf - fi) * (eta + fi + mf));
            let prev = gamma[i - 1];
            gamma.push(prev * ratio);
        }

        for l2 in 0..=m {
            out.push(hahn_clenshaw(&gamma, l2 as f64, &params)?);
        }
    }
    Ok(out)
}

fn signed(k: MultiIndex) -> (i64, i64) {
    (k.k1 as i64, k.k2 as i64)
}

/// One application of the recurrence in `k2`: returns `e^{k+v2}_l` from
/// entries of blocks `k` and `k - v2` already present in `table`.
pub fn first_recurrence_step(
    table: &CoeffTable,
    k: MultiIndex,
    l: MultiIndex,
    alpha: &AlphaParams,
) -> Result<f64> {
    let n = table.degree();
    let (ks, ls) = (signed(k), signed(l));
    let s0k = sigma(ks, Coef::Zero, alpha, n);
    if s0k == 0.0 {
        return Err(Error::Degenerate(format!("sigma_0{k} vanishes")));
    }
    let num = (sigma(ks, Coef::One, alpha, n) - sigma(ls, Coef::One, alpha, n)) * table.get_signed(ks, ls)
        - sigma(ks, Coef::Two, alpha, n) * table.get_signed((ks.0, ks.1 - 1), ls)
        + sigma(ls, Coef::Zero, alpha, n) * table.get_signed(ks, (ls.0, ls.1 + 1))
        + sigma(ls, Coef::Two, alpha, n) * table.get_signed(ks, (ls.0, ls.1 - 1));
    Ok(num / s0k)
}

/// One application of the recurrence in `k1`: returns `e^{k+v1}_l`.
pub fn second_recurrence_step(
    table: &CoeffTable,
    k: MultiIndex,
    l: MultiIndex,
    alpha: &AlphaParams,
) -> Result<f64> {
    let n = table.degree();
    let (ks, ls) = (signed(k), signed(l));
    let t0k = tau(ks, Coef::Zero, alpha, n);
    if t0k == 0.0 {
        return Err(Error::Degenerate(format!("tau_0{k} vanishes")));
    }
    let num = (tau(ks, Coef::One, alpha, n) - tau(ls, Coef::One, alpha, n)) * table.get_signed(ks, ls)
        - tau(ks, Coef::Two, alpha, n) * table.get_signed((ks.0 - 1, ks.1), ls)
        + tau(ls, Coef::Zero, alpha, n) * table.get_signed(ks, (ls.0 + 1, ls.1))
        + tau(ls, Coef::Two, alpha, n) * table.get_signed(ks, (ls.0 - 1, ls.1));
    Ok(num / t0k)
}

/// Per-index recurrence coefficients, laid out in canonical order.
struct Coefs {
    s0: Vec<f64>,
    s1: Vec<f64>,
    s2: Vec<f64>,
    t0: Vec<f64>,
    t1: Vec<f64>,
    t2: Vec<f64>,
}

impl Coefs {
    fn new(alpha: &AlphaParams, n: usize) -> Self {
        let len = theta_len(n);
        let mut c = Coefs {
            s0: Vec::with_capacity(len),
            s1: Vec::with_capacity(len),
            s2: Vec::with_capacity(len),
            t0: Vec::with_capacity(len),
            t1: Vec::with_capacity(len),
            t2: Vec::with_capacity(len),
        };
        for k1 in 0..=n as i64 {
            for k2 in 0..=(n as i64 - k1) {
                let t = (k1, k2);
                c.s0.push(sigma(t, Coef::Zero, alpha, n));
                c.s1.push(sigma(t, Coef::One, alpha, n));
                c.s2.push(sigma(t, Coef::Two, alpha, n));
                c.t0.push(tau(t, Coef::Zero, alpha, n));
                c.t1.push(tau(t, Coef::One, alpha, n));
                c.t2.push(tau(t, Coef::Two, alpha, n));
            }
        }
        c
    }
}

/// Fills block `(k1, k2 + 1)` for all `l` with `l1 >= k1`.
fn climb_column(table: &mut CoeffTable, c: &Coefs, n: usize, k1: usize, k2: usize) {
    let pk = row_offset(n, k1) + k2;
    let pnext = pk + 1;
    let pprev = if k2 > 0 { Some(pk - 1) } else { None };
    let inv = 1.0 / c.s0[pk];
    let (s1k, s2k) = (c.s1[pk], c.s2[pk]);
    for l1 in k1..=n {
        let start = row_offset(n, l1);
        let last = start + (n - l1);
        for pl in start..=last {
            let mut v = (s1k - c.s1[pl]) * table.at(pk, pl);
            if let Some(pp) = pprev {
                v -= s2k * table.at(pp, pl);
            }
            if pl < last {
                v += c.s0[pl] * table.at(pk, pl + 1);
            }
            if pl > start {
                v += c.s2[pl] * table.at(pk, pl - 1);
            }
            table.set_position(pnext, pl, v * inv);
        }
    }
}

/// Fills block `(k1 + 1, 0)` for all `l` with `l1 > k1`.
fn seed_next_column(table: &mut CoeffTable, c: &Coefs, n: usize, k1: usize) {
    let pk = row_offset(n, k1);
    let pnext = row_offset(n, k1 + 1);
    let pprev = if k1 > 0 { Some(row_offset(n, k1 - 1)) } else { None };
    let inv = 1.0 / c.t0[pk];
    let (t1k, t2k) = (c.t1[pk], c.t2[pk]);
    for l1 in (k1 + 1)..=n {
        let start = row_offset(n, l1);
        let below = row_offset(n, l1 - 1);
        let above = if l1 < n { row_offset(n, l1 + 1) } else { 0 };
        for l2 in 0..=(n - l1) {
            let pl = start + l2;
            let mut v = (t1k - c.t1[pl]) * table.at(pk, pl);
            if let Some(pp) = pprev {
                v -= t2k * table.at(pp, pl);
            }
            if l1 + 1 + l2 <= n {
                v += c.t0[pl] * table.at(pk, above + l2);
            }
            v += c.t2[pl] * table.at(pk, below + l2);
            table.set_position(pnext, pl, v * inv);
        }
    }
}

/// Block column heights used by the table builder.
enum Heights {
    Full,
    /// Only blocks with `k2 <= (n - k1) / 2`.
    LowerHalf,
}

fn build_table(alpha: &AlphaParams, n: usize, heights: Heights) -> Result<CoeffTable> {
    let mut table = CoeffTable::zeros(n);
    for (pl, v) in corner_block(alpha, n)?.into_iter().enumerate() {
        table.set_position(0, pl, v);
    }
    let coefs = Coefs::new(alpha, n);
    for k1 in 0..n {
        let top = match heights {
            Heights::Full => n - k1,
            Heights::LowerHalf => (n - k1) / 2,
        };
        for k2 in 0..top {
            climb_column(&mut table, &coefs, n, k1, k2);
        }
        seed_next_column(&mut table, &coefs, n, k1);
    }
    Ok(table)
}

/// The complete table `e^k_l(alpha, n)`, `k, l` in `theta(n)`.
pub fn compute_table(alpha: &AlphaParams, n: usize) -> Result<CoeffTable> {
    build_table(alpha, n, Heights::Full)
}

/// Same table as [`compute_table`], computing roughly half of it when two
/// weight exponents coincide and filling the rest by reflection.
///
/// With `alpha2 = alpha3` only the lower half of every block column is run
/// through the recurrences and `e^k_l = e^{k^}_{l^}` with `k^ = (k1, k3)`
/// supplies the rest. `alpha1 = alpha3` and `alpha1 = alpha2` are reduced to
/// that case by permuting barycentric coordinates together with the
/// exponents. Equalities are tested exactly.
pub fn compute_table_symmetric(alpha: &AlphaParams, n: usize) -> Result<CoeffTable> {
    let [a1, a2, a3] = alpha.0;
    if a2 == a3 {
        reduced_table(alpha, n)
    } else if a1 == a3 {
        // e^k_l(alpha) = e^{~k}_{~l}(~alpha), ~k = (k2, k1)
        let inner = reduced_table(&alpha.swapped(), n)?;
        Ok(permuted(&inner, |k| k.swapped()))
    } else if a1 == a2 {
        // e^k_l(alpha) = e^{k°}_{l°}(alpha°), k° = (k3, k2), alpha° = (a3, a2, a1)
        let inner = reduced_table(&AlphaParams([a3, a2, a1]), n)?;
        Ok(permuted(&inner, |k| k.circ(n)))
    } else {
        Err(Error::SymmetryPrecondition(alpha.0))
    }
}

fn permuted(inner: &CoeffTable, map: impl Fn(MultiIndex) -> MultiIndex) -> CoeffTable {
    let n = inner.degree();
    let theta = IndexDomain::theta(n);
    let images: Vec<usize> = theta
        .iter()
        .map(|k| crate::index::theta_position(n, map(*k)).expect("permutation stays in theta"))
        .collect();
    let mut out = CoeffTable::zeros(n);
    for i in 0..theta.len() {
        for j in i..theta.len() {
            out.set_position(i, j, inner.at(images[i], images[j]));
        }
    }
    out
}

fn reduced_table(alpha: &AlphaParams, n: usize) -> Result<CoeffTable> {
    let mut table = build_table(alpha, n, Heights::LowerHalf)?;
    let theta = IndexDomain::theta(n);
    let lower = |k: &MultiIndex| 2 * k.k2 <= n - k.k1;
    for (i, a) in theta.iter().enumerate() {
        for (j, b) in theta.iter().enumerate().skip(i) {
            // i <= j implies a.k1 <= b.k1
            let computed = lower(a) || (a.k1 == b.k1 && lower(b));
            if computed {
                continue;
            }
            let ia = row_offset(n, a.k1) + a.k3(n);
            let jb = row_offset(n, b.k1) + b.k3(n);
            let v = table.at(ia, jb);
            table.set_position(i, j, v);
        }
    }
    Ok(table)
}

/// `U = (|alpha|+3)_{2|c|} / prod_i (alpha_i+1)_{2c_i}`, factor by factor.
fn constraint_scale(alpha: &AlphaParams, c: ConstraintVector) -> f64 {
    let abs = alpha.sum();
    let den: Vec<f64> = [c.c1, c.c2, c.c3]
        .iter()
        .zip(alpha.0)
        .flat_map(|(&ci, a)| (0..2 * ci).map(move |j| a + 1.0 + j as f64))
        .collect();
    den.iter()
        .enumerate()
        .fold(1.0, |u, (j, d)| u * (abs + 3.0 + j as f64) / d)
}

/// `V_k(n) = multinomial(n - |c|, k - c') / multinomial(n, k)`.
fn constraint_weight(n: usize, c: ConstraintVector, k: MultiIndex) -> f64 {
    let inner = MultiIndex::new(k.k1 - c.c1, k.k2 - c.c2);
    trinomial(n - c.total(), inner) / trinomial(n, k)
}

/// A single constrained coefficient `E^k_l(alpha, c, n)` from the shifted
/// unconstrained table `compute_table(alpha + 2c, n - |c|)`.
pub fn constrained_coefficient(
    alpha: &AlphaParams,
    c: ConstraintVector,
    n: usize,
    k: MultiIndex,
    l: MultiIndex,
    shifted: &CoeffTable,
) -> Result<f64> {
    for idx in [k, l] {
        if !c.admits(n, idx) {
            return Err(Error::IndexOutOfRange(idx.k1 as i64, idx.k2 as i64, n));
        }
    }
    if shifted.degree() + c.total() != n {
        return Err(Error::Dimension(format!(
            "shifted table has degree {}, expected {}",
            shifted.degree(),
            n - c.total()
        )));
    }
    let cs = c.shift();
    let inner = |x: MultiIndex| MultiIndex::new(x.k1 - cs.k1, x.k2 - cs.k2);
    Ok(constraint_scale(alpha, c)
        * constraint_weight(n, c, k)
        * constraint_weight(n, c, l)
        * shifted.get(inner(k), inner(l)))
}

/// The constrained coefficients `E^k_l(alpha, c, n)` for `k, l` in `omega(n, c)`.
///
/// Values are stored in a symmetric table of degree `n - |c|`, addressed
/// through the shift `k -> k - (c1, c2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstrainedCoeffTable {
    n: usize,
    c: ConstraintVector,
    alpha: AlphaParams,
    domain: IndexDomain,
    values: CoeffTable,
}

impl ConstrainedCoeffTable {
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn constraint(&self) -> ConstraintVector {
        self.c
    }

    pub fn alpha(&self) -> &AlphaParams {
        &self.alpha
    }

    /// The index set `omega(n, c)`.
    pub fn domain(&self) -> &IndexDomain {
        &self.domain
    }

    /// `E^k_l`; zero when `k` or `l` is outside `omega(n, c)`.
    pub fn get(&self, k: MultiIndex, l: MultiIndex) -> f64 {
        match (self.domain.position(k), self.domain.position(l)) {
            (Some(i), Some(j)) => self.values.at(i, j),
            _ => 0.0,
        }
    }

    /// Read by positions in `omega(n, c)`.
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values.at(i, j)
    }
}

/// All constrained coefficients from one shifted table computation.
pub fn constrained_table(alpha: &AlphaParams, c: ConstraintVector, n: usize) -> Result<ConstrainedCoeffTable> {
    c.check_degree(n)?;
    let domain = IndexDomain::omega(n, c)?;
    let shifted = compute_table(&alpha.shifted(c), n - c.total())?;
    let u = constraint_scale(alpha, c);
    let weights: Vec<f64> = domain.iter().map(|k| constraint_weight(n, c, *k)).collect();
    let mut values = CoeffTable::zeros(n - c.total());
    // omega(n, c) and theta(n - |c|) share the canonical order
    for i in 0..domain.len() {
        for j in i..domain.len() {
            values.set_position(i, j, u * weights[i] * weights[j] * shifted.at(i, j));
        }
    }
    Ok(ConstrainedCoeffTable {
        n,
        c,
        alpha: *alpha,
        domain,
        values,
    })
}
