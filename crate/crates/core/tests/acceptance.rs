//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line for
//! each and exits with a failure status if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use dualbern::approx::{distance, solve, ApproxProblem};
use dualbern::dual::{compute_table, compute_table_symmetric, constrained_table, sigma, tau, AlphaParams, Coef};
use dualbern::index::{theta_len, theta_position, CoeffTable, ConstraintVector, IndexDomain, MultiIndex};
use dualbern::oracles::{constrained_least_squares, dual_table_direct, dual_table_via_gram_inverse, gram_entry, GramMatrix};
use dualbern::patch::{bernstein_eval, DomainPoint, TriPatch};
use dualbern::quadrature::{integrate, integrate_adaptive};
use dualbern::special::{hahn_clenshaw, hahn_difference_apply, hahn_eval, hahn_values, pochhammer, HahnParams};

type Outcome = Result<String, String>;

fn grid_alphas() -> Vec<AlphaParams> {
    [[0.0, 0.0, 0.0], [-0.5, -0.5, -0.5], [1.0, 2.0, 3.0], [0.5, 0.0, -0.3]]
        .into_iter()
        .map(|[a, b, c]| AlphaParams::new(a, b, c).unwrap())
        .collect()
}

/// Largest `|a - b| / max_row(k)` over the table, with `max_row(k)` the
/// largest entry of row `k` of either table.
fn row_relative_gap(a: &CoeffTable, b: &CoeffTable) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..a.size() {
        let (ra, rb) = (a.row(i), b.row(i));
        let scale = ra.iter().chain(&rb).fold(0.0f64, |m, v| m.max(v.abs()));
        for (x, y) in ra.iter().zip(&rb) {
            worst = worst.max((x - y).abs() / scale);
        }
    }
    worst
}

fn criterion_oracles() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for alpha in grid_alphas() {
        for n in 0..=8 {
            let e = compute_table(&alpha, n).map_err(|e| e.to_string())?;
            let g = dual_table_via_gram_inverse(&alpha, n).map_err(|e| e.to_string())?;
            let d = dual_table_direct(&alpha, n).map_err(|e| e.to_string())?;
            for (x, y, what) in [(&e, &g, "engine/gram"), (&e, &d, "engine/direct"), (&g, &d, "gram/direct")] {
                let gap = row_relative_gap(x, y);
                worst = worst.max(gap);
                if gap > 1e-8 {
                    return Err(format!("{what} differ by {gap:.3e} at n = {n}, alpha = {:?}", alpha.0));
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 30.0 {
        return Err(format!("took {secs:.1} s"));
    }
    Ok(format!("max row-relative gap {worst:.2e}, {secs:.2} s"))
}

fn inf_norm(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> f64 {
    (0..rows).map(|i| (0..cols).map(|j| f(i, j).abs()).sum::<f64>()).fold(0.0, f64::max)
}

fn criterion_duality() -> Outcome {
    let mut worst = 0.0f64;
    for alpha in grid_alphas() {
        for n in 0..=8 {
            let e = compute_table(&alpha, n).map_err(|e| e.to_string())?;
            let g = GramMatrix::new(&alpha, n, n).map_err(|e| e.to_string())?.matrix;
            let size = theta_len(n);
            let bound = 1e-8 * inf_norm(size, size, |i, j| e.at(i, j)) * inf_norm(size, size, |i, j| g[(i, j)]);
            for k in 0..size {
                for m in 0..size {
                    let s: f64 = (0..size).map(|l| e.at(k, l) * g[(l, m)]).sum();
                    let dev = (s - if k == m { 1.0 } else { 0.0 }).abs();
                    worst = worst.max(dev / bound * 1e-8);
                    if dev > bound {
                        return Err(format!("n = {n}, alpha = {:?}: deviation {dev:.3e} > {bound:.3e}", alpha.0));
                    }
                }
            }
        }
    }
    Ok(format!("max deviation {worst:.2e} relative to ||E|| ||G||"))
}

fn criterion_constrained_duality() -> Outcome {
    let alpha = AlphaParams::zero();
    let mut report = Vec::new();
    for (n, c) in [(5, ConstraintVector::new(1, 0, 1)), (11, ConstraintVector::new(2, 1, 3))] {
        let table = constrained_table(&alpha, c, n).map_err(|e| e.to_string())?;
        let omega = IndexDomain::omega(n, c).map_err(|e| e.to_string())?;
        let size = omega.len();
        let idx = omega.indices();
        let mut g = vec![0.0; size * size];
        for i in 0..size {
            for j in 0..size {
                g[i * size + j] = gram_entry(&alpha, n, n, idx[i], idx[j]).map_err(|e| e.to_string())?;
            }
        }
        let scale = inf_norm(size, size, |i, j| table.at(i, j)) * inf_norm(size, size, |i, j| g[i * size + j]);
        let mut worst = 0.0f64;
        for k in 0..size {
            for m in 0..size {
                let s: f64 = (0..size).map(|l| table.at(k, l) * g[l * size + m]).sum();
                worst = worst.max((s - if k == m { 1.0 } else { 0.0 }).abs());
            }
        }
        if worst > 1e-7 * scale {
            return Err(format!("n = {n}, c = {c:?}: deviation {worst:.3e}, scale {scale:.3e}"));
        }
        report.push(format!("n={n}: {:.2e}", worst / scale));
    }
    Ok(format!("relative deviations {}", report.join(", ")))
}

/// Largest residuals of both recurrence identities. The first is relative
/// to the local scale, the sum of the absolute coefficients times the
/// largest entry in the rows the stencil touches; the second is relative to
/// the sum of the absolute values of the terms themselves.
fn recurrence_residual(table: &CoeffTable, alpha: &AlphaParams) -> (f64, f64) {
    let n = table.degree();
    let theta = IndexDomain::theta(n);
    let row_max: Vec<f64> = (0..theta.len())
        .map(|i| table.row(i).iter().fold(0.0f64, |m, v| m.max(v.abs())))
        .collect();
    let row_scale = |t: (i64, i64)| {
        if t.0 < 0 || t.1 < 0 {
            return 0.0;
        }
        theta_position(n, MultiIndex::new(t.0 as usize, t.1 as usize)).map_or(0.0, |p| row_max[p])
    };
    let e = |k: (i64, i64), l: (i64, i64)| table.get_signed(k, l);
    let (mut local, mut strict) = (0.0f64, 0.0f64);
    for k in theta.iter() {
        for l in theta.iter() {
            let (k, l) = ((k.k1 as i64, k.k2 as i64), (l.k1 as i64, l.k2 as i64));
            let families: [(fn((i64, i64), Coef, &AlphaParams, usize) -> f64, (i64, i64)); 2] =
                [(sigma, (0, 1)), (tau, (1, 0))];
            for (phi, v) in families {
                let up = |t: (i64, i64)| (t.0 + v.0, t.1 + v.1);
                let down = |t: (i64, i64)| (t.0 - v.0, t.1 - v.1);
                let coefs = [
                    phi(k, Coef::Zero, alpha, n),
                    -phi(k, Coef::One, alpha, n),
                    phi(k, Coef::Two, alpha, n),
                    -phi(l, Coef::Zero, alpha, n),
                    phi(l, Coef::One, alpha, n),
                    -phi(l, Coef::Two, alpha, n),
                ];
                let entries = [e(up(k), l), e(k, l), e(down(k), l), e(k, up(l)), e(k, l), e(k, down(l))];
                let residual = coefs.iter().zip(&entries).map(|(c, x)| c * x).sum::<f64>().abs();
                let rows = row_scale(up(k)).max(row_scale(k)).max(row_scale(down(k)));
                let scale = coefs.iter().map(|c| c.abs()).sum::<f64>() * rows;
                if scale > 0.0 {
                    local = local.max(residual / scale);
                }
                let terms: f64 = coefs.iter().zip(&entries).map(|(c, x)| (c * x).abs()).sum();
                if terms > 0.0 {
                    strict = strict.max(residual / terms);
                }
            }
        }
    }
    (local, strict)
}

fn criterion_recurrences() -> Outcome {
    let mut alphas = grid_alphas();
    alphas.push(AlphaParams::new(-0.9, 4.5, 0.25).unwrap());
    let (mut worst, mut worst_strict) = (0.0f64, 0.0f64);
    for alpha in &alphas {
        for n in 0..=12 {
            let table = compute_table(alpha, n).map_err(|e| e.to_string())?;
            let (r, strict) = recurrence_residual(&table, alpha);
            worst = worst.max(r);
            worst_strict = worst_strict.max(strict);
            if r > 1e-9 {
                return Err(format!("n = {n}, alpha = {:?}: residual {r:.3e}", alpha.0));
            }
        }
    }
    Ok(format!(
        "max residual {worst:.2e} of local scale ({worst_strict:.2e} relative to the terms alone)"
    ))
}

/// Largest `|e^k_l - f^{pk}_{pl}|` relative to the row maximum of `e`.
fn permutation_gap(e: &CoeffTable, f: &CoeffTable, p: impl Fn(MultiIndex) -> MultiIndex) -> f64 {
    let n = e.degree();
    let theta = IndexDomain::theta(n);
    let mut worst = 0.0f64;
    for (i, k) in theta.iter().enumerate() {
        let scale = e.row(i).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for l in theta.iter() {
            worst = worst.max((e.get(*k, *l) - f.get(p(*k), p(*l))).abs() / scale);
        }
    }
    worst
}

fn criterion_symmetry() -> Outcome {
    let mut worst = 0.0f64;
    let mut check = |what: &str, n: usize, gap: f64| -> Result<(), String> {
        worst = worst.max(gap);
        if gap > 1e-10 {
            Err(format!("{what} fails at n = {n}: {gap:.3e}"))
        } else {
            Ok(())
        }
    };
    let general = AlphaParams::new(0.7, -0.4, 1.9).unwrap();
    let equal23 = AlphaParams::new(1.5, 0.25, 0.25).unwrap();
    let equal13 = AlphaParams::new(-0.3, 2.0, -0.3).unwrap();
    let equal12 = AlphaParams::new(0.6, 0.6, -0.8).unwrap();
    let equal = AlphaParams::new(0.4, 0.4, 0.4).unwrap();
    for n in 0..=6 {
        let theta = IndexDomain::theta(n);
        let e = compute_table(&general, n).map_err(|e| e.to_string())?;
        for k in theta.iter() {
            for l in theta.iter() {
                if e.get(*k, *l).to_bits() != e.get(*l, *k).to_bits() {
                    return Err(format!("transposition symmetry fails at n = {n}"));
                }
            }
        }

        let e = compute_table(&equal23, n).map_err(|e| e.to_string())?;
        check("reflection under alpha2 = alpha3", n, permutation_gap(&e, &e, |k| k.hat(n)))?;

        let e = compute_table(&general, n).map_err(|e| e.to_string())?;
        let s = compute_table(&general.swapped(), n).map_err(|e| e.to_string())?;
        check("parameter swap", n, permutation_gap(&e, &s, |k| k.swapped()))?;

        let e = compute_table(&equal, n).map_err(|e| e.to_string())?;
        let perms: [&dyn Fn(MultiIndex) -> MultiIndex; 5] = [
            &|k: MultiIndex| k.swapped(),
            &|k: MultiIndex| k.hat(n),
            &|k: MultiIndex| k.check(n),
            &|k: MultiIndex| k.star(n),
            &|k: MultiIndex| k.circ(n),
        ];
        for p in perms {
            check("full permutation symmetry", n, permutation_gap(&e, &e, p))?;
        }

        for alpha in [equal23, equal13, equal12, equal] {
            let full = compute_table(&alpha, n).map_err(|e| e.to_string())?;
            let half = compute_table_symmetric(&alpha, n).map_err(|e| e.to_string())?;
            check("reduced table", n, row_relative_gap(&full, &half))?;
        }
    }
    Ok(format!("max relative gap {worst:.2e}"))
}

fn time_table(alpha: &AlphaParams, n: usize) -> f64 {
    // minimum over repetitions, at least five and at least ~0.2 s in total
    let mut best = f64::INFINITY;
    let mut spent = 0.0;
    let mut reps = 0;
    while reps < 5 || spent < 0.2 {
        let t = Instant::now();
        let table = compute_table(alpha, n).expect("table");
        let dt = t.elapsed().as_secs_f64();
        std::hint::black_box(table);
        best = best.min(dt);
        spent += dt;
        reps += 1;
    }
    best
}

fn criterion_complexity() -> Outcome {
    let alpha = AlphaParams::new(0.5, 0.0, -0.3).unwrap();
    time_table(&alpha, 20); // warm-up
    let sizes = [16usize, 32, 64];
    let times: Vec<f64> = sizes.iter().map(|&n| time_table(&alpha, n)).collect();
    // least squares in log space for t = C n^4
    let log_c = sizes
        .iter()
        .zip(&times)
        .map(|(&n, t)| (t / (n as f64).powi(4)).ln())
        .sum::<f64>()
        / sizes.len() as f64;
    let c = log_c.exp();
    let devs: Vec<f64> = sizes
        .iter()
        .zip(&times)
        .map(|(&n, t)| t / (c * (n as f64).powi(4)) - 1.0)
        .collect();
    let t = Instant::now();
    std::hint::black_box(compute_table(&alpha, 50).map_err(|e| e.to_string())?);
    let t50 = t.elapsed().as_secs_f64();
    let summary = format!(
        "t = {:.3e}/{:.3e}/{:.3e} s at n = 16/32/64, deviations {:+.0}%/{:+.0}%/{:+.0}%, n = 50 in {:.3} s",
        times[0],
        times[1],
        times[2],
        devs[0] * 100.0,
        devs[1] * 100.0,
        devs[2] * 100.0,
        t50
    );
    if devs.iter().any(|d| d.abs() > 0.35) || t50 >= 2.0 {
        Err(summary)
    } else {
        Ok(summary)
    }
}

fn random_values(len: usize, rng: &mut StdRng) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn criterion_degree_reduction() -> Outcome {
    let mut rng = StdRng::seed_from_u64(20240521);
    let mut worst_match = 0.0f64;
    let mut worst_orth = 0.0f64;
    for case in 0..20 {
        let m = rng.gen_range(1..=4usize);
        let n = rng.gen_range(m..=6usize).max(1);
        let c = loop {
            let c = ConstraintVector::new(rng.gen_range(0..m), rng.gen_range(0..m), rng.gen_range(0..m));
            if c.total() < m {
                break c;
            }
        };
        let alpha = AlphaParams::new(rng.gen_range(-0.7..2.0), rng.gen_range(-0.7..2.0), rng.gen_range(-0.7..2.0)).unwrap();
        let dim = if case % 4 == 0 { 3 } else { 1 };
        let weights = (case % 3 == 0).then(|| vec![rng.gen_range(0.5..2.0); theta_len(n)]);
        let src = TriPatch::new(n, dim, random_values(theta_len(n) * dim, &mut rng), weights).unwrap();
        let gamma_len = IndexDomain::gamma_set(m, c).unwrap().len();
        let g = random_values(gamma_len * dim, &mut rng);
        let problem = ApproxProblem::new(src.clone(), m, c, g, alpha).map_err(|e| e.to_string())?;
        let sol = solve(&problem).map_err(|e| e.to_string())?;
        let oracle = constrained_least_squares(&problem).map_err(|e| e.to_string())?;
        let scale = oracle.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        for (a, b) in sol.result.values().iter().zip(&oracle) {
            let gap = (a - b).abs() / scale;
            worst_match = worst_match.max(gap);
            if gap > 1e-8 {
                return Err(format!("case {case} (n = {n}, m = {m}, c = {c:?}): solver/oracle gap {gap:.3e}"));
            }
        }

        // <R - P, x1^c1 x2^c2 x3^c3 B^{m-|c|}_j> for every j, per component
        let inner = m - c.total();
        let norm_r = distance(&src, &TriPatch::constant(0, &vec![0.0; dim]).unwrap(), &alpha, 1e-13)
            .map_err(|e| e.to_string())?
            .0
            .sqrt();
        for j in IndexDomain::theta(inner).iter() {
            let phi = |x: DomainPoint| {
                x.x1.powi(c.c1 as i32) * x.x2.powi(c.c2 as i32) * x.x3().powi(c.c3 as i32) * bernstein_eval(inner, *j, x)
            };
            let norm_phi = integrate_adaptive(|x| phi(x).powi(2), &alpha, 1e-13)
                .map_err(|e| e.to_string())?
                .value
                .sqrt();
            for d in 0..dim {
                let f = |x: DomainPoint| (src.eval(x).unwrap()[d] - sol.result.eval(x).unwrap()[d]) * phi(x);
                let ip = integrate_adaptive(f, &alpha, 1e-14).map_err(|e| e.to_string())?.value;
                let rel = ip.abs() / (norm_r * norm_phi);
                worst_orth = worst_orth.max(rel);
                if rel > 1e-8 {
                    return Err(format!("case {case}: residual not orthogonal to index {j}: {rel:.3e}"));
                }
            }
        }
    }
    Ok(format!("max oracle gap {worst_match:.2e}, max orthogonality residual {worst_orth:.2e}"))
}

fn criterion_reproduction() -> Outcome {
    let mut rng = StdRng::seed_from_u64(77);
    let mut worst = 0.0f64;
    let mut record = |got: &[f64], want: &[f64], what: &str| -> Result<(), String> {
        for (a, b) in got.iter().zip(want) {
            let gap = (a - b).abs() / b.abs().max(1.0);
            worst = worst.max(gap);
            if gap > 1e-9 {
                return Err(format!("{what}: {a} vs {b}"));
            }
        }
        Ok(())
    };
    for m in 1..=6 {
        let alpha = AlphaParams::new(rng.gen_range(-0.8..3.0), rng.gen_range(-0.8..3.0), rng.gen_range(-0.8..3.0)).unwrap();
        let value = [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
        // constant as a rational patch with unequal weights
        let n = rng.gen_range(0..=4);
        let weights: Vec<f64> = (0..theta_len(n)).map(|_| rng.gen_range(0.5..2.0)).collect();
        let src = TriPatch::new(n, 2, value.repeat(theta_len(n)), Some(weights)).unwrap();
        let sol = solve(&ApproxProblem::unconstrained(src, m, alpha).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        record(sol.result.values(), &value.repeat(theta_len(m)), "rational constant")?;

        // polynomial of degree d <= m, written at degree m by elevation
        let d = rng.gen_range(0..=m);
        let mut poly = TriPatch::polynomial(d, 1, random_values(theta_len(d), &mut rng)).unwrap();
        for _ in d..m {
            poly = poly.elevate();
        }
        let sol = solve(&ApproxProblem::unconstrained(poly.clone(), m, alpha).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        record(sol.result.values(), poly.values(), "polynomial")?;

        // same polynomial with its own boundary values prescribed
        if m >= 2 {
            let c = ConstraintVector::new(1, 0, m - 2);
            let gamma = IndexDomain::gamma_set(m, c).unwrap();
            let g: Vec<f64> = gamma.iter().map(|k| poly.value(*k).unwrap()[0]).collect();
            let sol = solve(&ApproxProblem::new(poly.clone(), m, c, g, alpha).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            record(sol.result.values(), poly.values(), "constrained polynomial")?;
        }

        // boundary values copied bitwise, even when they do not fit the source
        let c = ConstraintVector::new(0, (m - 1).min(1), 0);
        let gamma = IndexDomain::gamma_set(m, c).unwrap();
        let g: Vec<f64> = random_values(gamma.len() * 2, &mut rng).iter().map(|v| v * 1e3 / 7.0).collect();
        let src = TriPatch::polynomial(3, 2, random_values(20, &mut rng)).unwrap();
        let sol = solve(&ApproxProblem::new(src, m, c, g.clone(), alpha).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        for (i, k) in gamma.iter().enumerate() {
            let got = sol.result.value(*k).unwrap();
            if got[0].to_bits() != g[2 * i].to_bits() || got[1].to_bits() != g[2 * i + 1].to_bits() {
                return Err(format!("boundary value at {k} was not copied exactly"));
            }
        }
    }
    Ok(format!("max relative error {worst:.2e}, boundary values bit-exact"))
}

fn criterion_micro_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(9);
    let mut worst_diff = 0.0f64;
    let mut worst_clenshaw = 0.0f64;
    for _ in 0..300 {
        let p = HahnParams::new(rng.gen_range(-0.95..4.0), rng.gen_range(-0.95..4.0), rng.gen_range(0..14)).unwrap();
        let j = rng.gen_range(0..=10usize);
        let t = rng.gen_range(0..=p.m) as i64;
        let h = |x: i64| hahn_eval(j, x as f64, &p).unwrap();
        let lhs = hahn_difference_apply(h, t, &p);
        let hj = h(t);
        let rhs = j as f64 * (j as f64 + p.a + p.b + 1.0) * hj;
        let rel = (lhs - rhs).abs() / (1.0 + hj.abs());
        worst_diff = worst_diff.max(rel);
        if rel > 1e-9 {
            return Err(format!("difference equation residual {rel:.3e} for {p:?}, j = {j}, t = {t}"));
        }

        let len = rng.gen_range(1..=11);
        let coeffs: Vec<f64> = random_values(len, &mut rng);
        let x = rng.gen_range(0.0..10.0);
        let s = hahn_clenshaw(&coeffs, x, &p).unwrap();
        let hs = hahn_values(len - 1, x, &p).unwrap();
        let naive: f64 = coeffs.iter().zip(&hs).map(|(c, h)| c * h).sum();
        let mass: f64 = coeffs.iter().zip(&hs).map(|(c, h)| (c * h).abs()).sum();
        let rel = (s - naive).abs() / naive.abs().max(1e-3 * mass);
        worst_clenshaw = worst_clenshaw.max(rel);
        if rel > 1e-11 {
            return Err(format!("Clenshaw differs from the naive sum by {rel:.3e}"));
        }
    }

    let mut worst_quad = 0.0f64;
    for [a1, a2, a3] in [[0.0, 0.0, 0.0], [-0.5, -0.5, -0.5], [1.0, 2.0, 3.0]] {
        let alpha = AlphaParams::new(a1, a2, a3).unwrap();
        for q in [2usize, 4, 8] {
            for a in 0..2 * q {
                for b in 0..2 * q - a {
                    let got = integrate(|x| x.x1.powi(a as i32) * x.x2.powi(b as i32), &alpha, q).unwrap();
                    let want = pochhammer(a1 + 1.0, a) * pochhammer(a2 + 1.0, b) / pochhammer(alpha.sum() + 3.0, a + b);
                    let rel = (got - want).abs() / want;
                    worst_quad = worst_quad.max(rel);
                    if rel > 1e-11 {
                        return Err(format!("monomial ({a}, {b}) with q = {q}, alpha = {:?}: {rel:.3e}", alpha.0));
                    }
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 5.0 {
        return Err(format!("took {secs:.2} s"));
    }
    Ok(format!(
        "difference equation {worst_diff:.1e}, Clenshaw {worst_clenshaw:.1e}, quadrature {worst_quad:.1e}, {secs:.2} s"
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 oracle triangulation", criterion_oracles),
        ("2 duality identity", criterion_duality),
        ("3 constrained duality", criterion_constrained_duality),
        ("4 recurrence residuals", criterion_recurrences),
        ("5 symmetry suite", criterion_symmetry),
        ("6 complexity scaling", criterion_complexity),
        ("7 degree reduction", criterion_degree_reduction),
        ("8 reproduction", criterion_reproduction),
        ("9 Hahn/Clenshaw/quadrature", criterion_micro_suite),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
