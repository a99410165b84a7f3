//! Plain-text patch, boundary and table files.
//!
//! Numbers are written with 17 significant digits, so a write followed by a
//! read reproduces every binary64 value exactly. `#` starts a comment that
//! runs to the end of the line.
//!
//! Patch file:
//!
//! ```text
//! degree 1
//! dim 1
//! weights yes        # optional, default no
//! 0 0 1.0 2.0        # k1 k2 v_1 .. v_dim [w]
//! 0 1 ...
//! 1 0 ...
//! ```
//!
//! Boundary file: records `k1 k2 v_1 .. v_dim`, one per index of the
//! constrained-out set. Table file: header lines `n`, `alpha` and optionally
//! `c`, then `k1 k2 l1 l2 value` for every unordered pair `k <= l`.

use std::collections::HashMap;
use std::fmt::Write as _;

use dualbern::index::{theta_len, theta_position, IndexDomain, MultiIndex};
use dualbern::{AlphaParams, CoeffTable, ConstraintVector, TriPatch};

/// A file that could not be parsed, with the offending line when known.
#[derive(Debug, Clone, PartialEq)]
pub struct FormatError(pub String);

impl std::fmt::Display for FormatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for FormatError {}

type Result<T> = std::result::Result<T, FormatError>;

fn err<T>(line: usize, msg: impl std::fmt::Display) -> Result<T> {
    Err(FormatError(format!("line {line}: {msg}")))
}

/// Non-empty lines with comments removed, numbered from one.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("");
        let fields: Vec<&str> = body.split_whitespace().collect();
        (!fields.is_empty()).then_some((i + 1, fields))
    })
}

fn parse_num<T: std::str::FromStr>(line: usize, s: &str) -> Result<T> {
    s.parse().or_else(|_| err(line, format!("cannot parse '{s}' as a number")))
}

fn parse_real(line: usize, s: &str) -> Result<f64> {
    let v: f64 = parse_num(line, s)?;
    if v.is_finite() {
        Ok(v)
    } else {
        err(line, format!("'{s}' is not a finite number"))
    }
}

pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn read_patch(text: &str) -> Result<TriPatch> {
    let mut lines = content_lines(text).peekable();
    let mut degree = None;
    let mut dim = None;
    let mut weighted = false;
    while let Some((no, fields)) = lines.peek() {
        let no = *no;
        match fields[0] {
            "degree" | "dim" | "weights" if fields.len() != 2 => {
                return err(no, format!("'{}' takes exactly one value", fields[0]))
            }
            "degree" => degree = Some(parse_num::<usize>(no, fields[1])?),
            "dim" => dim = Some(parse_num::<usize>(no, fields[1])?),
            "weights" => {
                weighted = match fields[1] {
                    "yes" => true,
                    "no" => false,
                    other => return err(no, format!("weights must be 'yes' or 'no', got '{other}'")),
                }
            }
            _ => break,
        }
        lines.next();
    }
    let n = degree.ok_or_else(|| FormatError("missing 'degree' header".into()))?;
    let dim = dim.ok_or_else(|| FormatError("missing 'dim' header".into()))?;
    if dim == 0 {
        return Err(FormatError("'dim' must be at least 1".into()));
    }

    let len = theta_len(n);
    let width = 2 + dim + usize::from(weighted);
    let mut values = vec![0.0; len * dim];
    let mut weights = vec![0.0; len];
    let mut seen = vec![false; len];
    for (no, fields) in lines {
        if fields.len() != width {
            return err(no, format!("expected {width} fields, found {}", fields.len()));
        }
        let k = MultiIndex::new(parse_num(no, fields[0])?, parse_num(no, fields[1])?);
        let Some(p) = theta_position(n, k) else {
            return err(no, format!("index {k} is outside degree {n}"));
        };
        if std::mem::replace(&mut seen[p], true) {
            return err(no, format!("index {k} appears twice"));
        }
        for d in 0..dim {
            values[p * dim + d] = parse_real(no, fields[2 + d])?;
        }
        if weighted {
            weights[p] = parse_real(no, fields[2 + dim])?;
        }
    }
    let missing: Vec<String> = IndexDomain::theta(n)
        .iter()
        .zip(&seen)
        .filter(|(_, s)| !**s)
        .map(|(k, _)| k.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(FormatError(format!("missing control points {}", missing.join(", "))));
    }
    TriPatch::new(n, dim, values, weighted.then_some(weights)).map_err(|e| FormatError(e.to_string()))
}

pub fn write_patch(p: &TriPatch) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "degree {}", p.degree());
    let _ = writeln!(out, "dim {}", p.dim());
    let _ = writeln!(out, "weights {}", if p.is_rational() { "yes" } else { "no" });
    for (i, k) in IndexDomain::theta(p.degree()).iter().enumerate() {
        let _ = write!(out, "{} {}", k.k1, k.k2);
        for v in p.value_at(i) {
            let _ = write!(out, " {}", fmt_real(*v));
        }
        if let Some(w) = p.weights() {
            let _ = write!(out, " {}", fmt_real(w[i]));
        }
        out.push('\n');
    }
    out
}

/// Boundary values over `gamma(m, c)` in canonical order, row-major.
pub fn read_boundary(text: &str, m: usize, c: ConstraintVector, dim: usize) -> Result<Vec<f64>> {
    let gamma = IndexDomain::gamma_set(m, c).map_err(|e| FormatError(e.to_string()))?;
    let mut found: HashMap<MultiIndex, Vec<f64>> = HashMap::new();
    for (no, fields) in content_lines(text) {
        if fields.len() != 2 + dim {
            return err(no, format!("expected {} fields, found {}", 2 + dim, fields.len()));
        }
        let k = MultiIndex::new(parse_num(no, fields[0])?, parse_num(no, fields[1])?);
        if !gamma.contains(k) {
            return err(no, format!("index {k} is not a prescribed boundary index"));
        }
        let vals = fields[2..].iter().map(|f| parse_real(no, f)).collect::<Result<Vec<_>>>()?;
        if found.insert(k, vals).is_some() {
            return err(no, format!("index {k} appears twice"));
        }
    }
    let missing: Vec<String> = gamma.iter().filter(|k| !found.contains_key(k)).map(|k| k.to_string()).collect();
    if !missing.is_empty() {
        return Err(FormatError(format!("missing boundary values for {}", missing.join(", "))));
    }
    Ok(gamma.iter().flat_map(|k| found.remove(k).expect("checked")).collect())
}

pub fn write_boundary(m: usize, c: ConstraintVector, dim: usize, g: &[f64]) -> String {
    let mut out = String::new();
    let gamma = IndexDomain::gamma_set(m, c).expect("valid constraint");
    for (i, k) in gamma.iter().enumerate() {
        let _ = write!(out, "{} {}", k.k1, k.k2);
        for v in &g[i * dim..(i + 1) * dim] {
            let _ = write!(out, " {}", fmt_real(*v));
        }
        out.push('\n');
    }
    out
}

/// Table file contents: header data and the coefficients by canonical
/// position in the table's domain.
#[derive(Debug, Clone, PartialEq)]
pub struct TableFile {
    pub n: usize,
    pub alpha: AlphaParams,
    pub c: Option<ConstraintVector>,
    pub values: CoeffTable,
}

impl TableFile {
    pub fn domain(&self) -> IndexDomain {
        match self.c {
            Some(c) => IndexDomain::omega(self.n, c).expect("valid constraint"),
            None => IndexDomain::theta(self.n),
        }
    }
}

pub fn write_table(t: &TableFile) -> String {
    let mut out = String::new();
    let [a1, a2, a3] = t.alpha.0;
    let _ = writeln!(out, "n {}", t.n);
    let _ = writeln!(out, "alpha {} {} {}", fmt_real(a1), fmt_real(a2), fmt_real(a3));
    if let Some(c) = t.c {
        let _ = writeln!(out, "c {} {} {}", c.c1, c.c2, c.c3);
    }
    let idx = t.domain();
    let idx = idx.indices();
    for i in 0..idx.len() {
        for j in i..idx.len() {
            let (k, l) = (idx[i], idx[j]);
            let _ = writeln!(out, "{} {} {} {} {}", k.k1, k.k2, l.k1, l.k2, fmt_real(t.values.at(i, j)));
        }
    }
    out
}

pub fn read_table(text: &str) -> Result<TableFile> {
    let mut lines = content_lines(text).peekable();
    let mut n = None;
    let mut alpha = None;
    let mut c = None;
    while let Some((no, fields)) = lines.peek() {
        let no = *no;
        match fields[0] {
            "n" if fields.len() == 2 => n = Some(parse_num::<usize>(no, fields[1])?),
            "alpha" if fields.len() == 4 => {
                let a: Vec<f64> = fields[1..].iter().map(|f| parse_real(no, f)).collect::<Result<_>>()?;
                alpha = Some(AlphaParams::new(a[0], a[1], a[2]).map_err(|e| FormatError(format!("line {no}: {e}")))?);
            }
            "c" if fields.len() == 4 => {
                let v: Vec<usize> = fields[1..].iter().map(|f| parse_num(no, f)).collect::<Result<_>>()?;
                c = Some(ConstraintVector::new(v[0], v[1], v[2]));
            }
            "n" | "alpha" | "c" => return err(no, format!("malformed '{}' header", fields[0])),
            _ => break,
        }
        lines.next();
    }
    let n = n.ok_or_else(|| FormatError("missing 'n' header".into()))?;
    let alpha = alpha.ok_or_else(|| FormatError("missing 'alpha' header".into()))?;
    let domain = match c {
        Some(c) => IndexDomain::omega(n, c).map_err(|e| FormatError(e.to_string()))?,
        None => IndexDomain::theta(n),
    };
    let degree = n - c.map_or(0, |c| c.total());
    let mut values = CoeffTable::zeros(degree);
    let size = domain.len();
    let mut seen = vec![false; size * (size + 1) / 2];
    for (no, fields) in lines {
        if fields.len() != 5 {
            return err(no, format!("expected 5 fields, found {}", fields.len()));
        }
        let k = MultiIndex::new(parse_num(no, fields[0])?, parse_num(no, fields[1])?);
        let l = MultiIndex::new(parse_num(no, fields[2])?, parse_num(no, fields[3])?);
        let (Some(i), Some(j)) = (domain.position(k), domain.position(l)) else {
            return err(no, format!("pair {k} {l} is outside the table domain"));
        };
        let (lo, hi) = (i.min(j), i.max(j));
        if std::mem::replace(&mut seen[hi * (hi + 1) / 2 + lo], true) {
            return err(no, format!("pair {k} {l} appears twice"));
        }
        values.set_position(i, j, parse_real(no, fields[4])?);
    }
    if let Some(p) = seen.iter().position(|s| !s) {
        return Err(FormatError(format!("table is missing {} entries, first at cell {p}", seen.iter().filter(|s| !**s).count())));
    }
    Ok(TableFile { n, alpha, c, values })
}
