//! Shifted factorials and Hahn polynomials.
//!
//! The univariate Hahn polynomials are normalised as
//!
//! ```text
//! h_l(t; a, b, M) = (a+1)_l (-M)_l 3F2(-l, l+a+b+1, -t; a+1, -M; 1)
//! ```
//!
//! which is a polynomial in `t` and `M` even when `l > M`. Production code
//! evaluates them with the three-term recurrence; [`hahn_sum`] is the
//! terminating hypergeometric sum, kept as a reference evaluation.

use std::ops::Mul;

use crate::dual::AlphaParams;
use crate::error::{Error, Result};

/// Shifted factorial `(a)_k = a (a+1) ... (a+k-1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: f64, k: usize) -> f64 {
    let mut p = 1.0;
    for j in 0..k {
        p *= a + j as f64;
    }
    p
}

/// A real number stored as sign and natural log of its magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLogReal {
    sign: i8,
    log_magnitude: f64,
}

impl SignedLogReal {
    pub const ZERO: SignedLogReal = SignedLogReal {
        sign: 0,
        log_magnitude: f64::NEG_INFINITY,
    };
    pub const ONE: SignedLogReal = SignedLogReal {
        sign: 1,
        log_magnitude: 0.0,
    };

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            SignedLogReal {
                sign: if x > 0.0 { 1 } else { -1 },
                log_magnitude: x.abs().ln(),
            }
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// `ln |x|`; `-inf` for zero.
    pub fn log_magnitude(&self) -> f64 {
        self.log_magnitude
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn recip(self) -> Self {
        assert!(self.sign != 0, "reciprocal of zero");
        SignedLogReal {
            sign: self.sign,
            log_magnitude: -self.log_magnitude,
        }
    }

    /// Back to binary64. Overflows to `±inf` and underflows to `±0`.
    pub fn value(&self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => s as f64 * self.log_magnitude.exp(),
        }
    }
}

impl Mul for SignedLogReal {
    type Output = SignedLogReal;

    fn mul(self, rhs: SignedLogReal) -> SignedLogReal {
        if self.sign == 0 || rhs.sign == 0 {
            return Self::ZERO;
        }
        SignedLogReal {
            sign: self.sign * rhs.sign,
            log_magnitude: self.log_magnitude + rhs.log_magnitude,
        }
    }
}

/// `(a)_k` in sign/log form; exact zero as soon as one factor vanishes.
pub fn pochhammer_log(a: f64, k: usize) -> SignedLogReal {
    let mut sign = 1i8;
    let mut log = 0.0;
    for j in 0..k {
        let f = a + j as f64;
        if f == 0.0 {
            return SignedLogReal::ZERO;
        }
        if f < 0.0 {
            sign = -sign;
        }
        log += f.abs().ln();
    }
    SignedLogReal {
        sign,
        log_magnitude: log,
    }
}

/// Parameters `(a, b, M)` of the univariate Hahn polynomials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HahnParams {
    pub a: f64,
    pub b: f64,
    pub m: usize,
}

impl HahnParams {
    pub fn new(a: f64, b: f64, m: usize) -> Result<Self> {
        if !(a > -1.0 && a.is_finite()) || !(b > -1.0 && b.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Hahn parameters must exceed -1, got a = {a}, b = {b}"
            )));
        }
        Ok(HahnParams { a, b, m })
    }

    /// `s = a + b + 1`.
    pub fn s(&self) -> f64 {
        self.a + self.b + 1.0
    }
}

/// Coefficients `(A_l(t), B_l)` of `h_{l+1} = A_l h_l + B_l h_{l-1}`.
///
/// The factor `(2l+s-1)` cancels between `C_l` and the Pochhammer symbol in
/// front of `t`, and `D_0 = 0`, so `l = 0` reduces to
/// `A_0 = (s+1) t - (a+1) M`. For `l >= 1` the denominator
/// `(l+s)(2l+s-1)` is checked and reported if it vanishes.
pub fn hahn_rec_coeffs(l: usize, t: f64, p: &HahnParams) -> Result<(f64, f64)> {
    let s = p.s();
    let m = p.m as f64;
    if l == 0 {
        return Ok(((s + 1.0) * t - (p.a + 1.0) * m, 0.0));
    }
    let lf = l as f64;
    let den = (lf + s) * (2.0 * lf + s - 1.0);
    if den == 0.0 || !den.is_finite() {
        return Err(Error::Degenerate(format!(
            "Hahn recurrence denominator vanishes at l = {l}, a = {}, b = {}",
            p.a, p.b
        )));
    }
    let c = (2.0 * lf + s + 1.0) / den;
    let d = c * lf * (lf + m + s) * (lf + p.b);
    let e = (lf + p.a + 1.0) * (m - lf);
    let e_prev = (lf + p.a) * (m - lf + 1.0);
    let a_coef = (2.0 * lf + s + 1.0) * (2.0 * lf + s) / (lf + s) * t - d - e;
    Ok((a_coef, -d * e_prev))
}

/// Highest degree that can be nonzero at `t`. At the grid points
/// `t = 0, ..., M` every `h_l` with `l > M` vanishes exactly, while the
/// forward recurrence would amplify rounding errors there.
fn live_degree(l_max: usize, t: f64, p: &HahnParams) -> usize {
    if t >= 0.0 && t <= p.m as f64 && t.fract() == 0.0 {
        l_max.min(p.m)
    } else {
        l_max
    }
}

/// `h_0(t), ..., h_{l_max}(t)` by forward recurrence.
pub fn hahn_values(l_max: usize, t: f64, p: &HahnParams) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(l_max + 1);
    out.push(1.0);
    let mut prev = 0.0;
    let live = live_degree(l_max, t, p);
    for l in 0..l_max {
        if l >= live {
            out.push(0.0);
            continue;
        }
        let (a, b) = hahn_rec_coeffs(l, t, p)?;
        let next = a * out[l] + b * prev;
        prev = out[l];
        out.push(next);
    }
    Ok(out)
}

/// `h_l(t; a, b, M)` by forward recurrence from `h_0 = 1`, `h_{-1} = 0`.
pub fn hahn_eval(l: usize, t: f64, p: &HahnParams) -> Result<f64> {
    if live_degree(l, t, p) < l {
        return Ok(0.0);
    }
    let mut prev = 0.0;
    let mut cur = 1.0;
    for j in 0..l {
        let (a, b) = hahn_rec_coeffs(j, t, p)?;
        let next = a * cur + b * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Terminating hypergeometric sum for `h_l(t; a, b, M)`.
///
/// The prefactor is distributed into each term as
/// `(a+1+j)_{l-j} (-M+j)_{l-j}`, which stays finite when `M < l`.
/// `O(l^2)`; used as a reference for the recurrence.
pub fn hahn_sum(l: usize, t: f64, p: &HahnParams) -> f64 {
    let s = p.s();
    let m = p.m as f64;
    let lf = l as f64;
    let mut total = 0.0;
    let mut head = 1.0; // (-l)_j (l+s)_j (-t)_j / j!
    for j in 0..=l {
        let jf = j as f64;
        let tail = pochhammer(p.a + 1.0 + jf, l - j) * pochhammer(-m + jf, l - j);
        total += head * tail;
        head *= (-lf + jf) * (lf + s + jf) * (-t + jf) / (jf + 1.0);
    }
    total
}

/// `sum_i gamma[i] h_i(t; a, b, M)` by Clenshaw's backward recurrence.
pub fn hahn_clenshaw(gamma: &[f64], t: f64, p: &HahnParams) -> Result<f64> {
    let mut v1 = 0.0; // V_{i+1}
    let mut v2 = 0.0; // V_{i+2}
    let top = match gamma.len() {
        0 => return Ok(0.0),
        len => live_degree(len - 1, t, p) + 1,
    };
    for i in (0..top).rev() {
        let (a_i, _) = hahn_rec_coeffs(i, t, p)?;
        let (_, b_next) = hahn_rec_coeffs(i + 1, t, p)?;
        let v = gamma[i] + a_i * v1 + b_next * v2;
        v2 = v1;
        v1 = v;
    }
    Ok(v1)
}

/// The second-order difference operator that has the Hahn polynomials as
/// eigenfunctions: `U F(t+1) - V F(t) + W F(t-1)`.
pub fn hahn_difference_apply<F>(f: F, t: i64, p: &HahnParams) -> f64
where
    F: Fn(i64) -> f64,
{
    let tf = t as f64;
    let m = p.m as f64;
    let u = (tf - m) * (tf + p.a + 1.0);
    let w = tf * (tf - p.b - m - 1.0);
    u * f(t + 1) - (u + w) * f(t) + w * f(t - 1)
}

/// Bivariate Hahn polynomial
/// `H_{q,i}(t) = h_i(t1; a2, a3, t1+t2) h_{q-i}(t1+t2-i; a2+a3+2i+1, a1, n-i)`.
pub fn hahn_biv_eval(
    q: usize,
    i: usize,
    t: (i64, i64),
    alpha: &AlphaParams,
    n: usize,
) -> Result<f64> {
    if i > q || q > n {
        return Err(Error::InvalidParameter(format!(
            "bivariate Hahn index needs 0 <= i <= q <= n, got i = {i}, q = {q}, n = {n}"
        )));
    }
    let [a1, a2, a3] = alpha.0;
    let span = t.0 + t.1;
    if span < 0 {
        return Err(Error::IndexOutOfRange(t.0, t.1, n));
    }
    let first = HahnParams::new(a2, a3, span as usize)?;
    let second = HahnParams::new(a2 + a3 + 2.0 * i as f64 + 1.0, a1, n - i)?;
    Ok(hahn_eval(i, t.0 as f64, &first)? * hahn_eval(q - i, (span - i as i64) as f64, &second)?)
}

/// Squared normalisation constant `lambda^2_{q,i}` of the orthonormal
/// bivariate Jacobi polynomials on the triangle.
///
/// The removable singularities at `2i + eta = 0` and `sigma = 0` are
/// cancelled symbolically.
pub fn lambda_sq(q: usize, i: usize, alpha: &AlphaParams) -> f64 {
    assert!(i <= q, "lambda_sq needs i <= q");
    let [a1, a2, a3] = alpha.0;
    let eta = a2 + a3 + 1.0;
    let sigma = alpha.sum() + 2.0;
    let fi = i as f64;
    let fq = q as f64;

    let eta_part = if i == 0 {
        pochhammer(eta + 1.0, q)
    } else {
        pochhammer(fi + eta, q + 1) / (2.0 * fi + eta)
    };
    let sigma_part = if q + i == 0 {
        1.0
    } else {
        (2.0 * fq + sigma) * pochhammer(sigma + 1.0, q + i - 1)
    };
    let num = pochhammer(a1 + 1.0, q - i) * pochhammer(a2 + 1.0, i) * pochhammer(a3 + 1.0, i) * eta_part;
    let den = pochhammer(1.0, i) * pochhammer(1.0, q - i) * sigma_part;
    num / den
}
