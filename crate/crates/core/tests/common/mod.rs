//! Brute-force oracles shared by the integration suites. None of them calls
//! into the library beyond constructing tables.

#![allow(dead_code)]

use compat_core::Table2x2;

fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

fn expit(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Binomial log-likelihood of the table at log OR `b`, maximized over the
/// baseline log odds by Newton's method.
pub fn profile_log_lik(t: &Table2x2, b: f64) -> f64 {
    let (a, n1, c, n0) = (t.a() as f64, t.exposed() as f64, t.c() as f64, t.unexposed() as f64);
    let mut al = ((c + 0.5) / (n0 - c + 0.5)).ln();
    for _ in 0..100 {
        let (p1, p0) = (expit(al + b), expit(al));
        let g = a + c - n1 * p1 - n0 * p0;
        let h = n1 * p1 * (1.0 - p1) + n0 * p0 * (1.0 - p0);
        let step = g / h;
        al += step;
        if step.abs() < 1e-12 {
            break;
        }
    }
    a * (al + b) - n1 * softplus(al + b) + c * al - n0 * softplus(al)
}

/// Maximizer of profile likelihood × normal(center, se) prior over a grid of
/// log OR values from -1 to 2 in steps of 1e-4.
pub fn grid_posterior_mode(t: &Table2x2, center: f64, se: f64) -> f64 {
    let mut best = (f64::NAN, f64::NEG_INFINITY);
    for i in 0..=30_000 {
        let b = -1.0 + i as f64 * 1e-4;
        let v = profile_log_lik(t, b) - (b - center).powi(2) / (2.0 * se * se);
        if v > best.1 {
            best = (b, v);
        }
    }
    best.0
}

/// Conditional distribution of the exposed-case count by listing every way
/// to assign `cases` outcomes among `total` subjects, the first `exposed` of
/// whom are exposed, each assignment weighted by `psi^a`.
pub fn enumerate_pmf(cases: u32, exposed: u32, total: u32, psi: f64) -> Vec<(u32, f64)> {
    let exposed_mask = (1u32 << exposed) - 1;
    let mut weight = vec![0.0f64; (total + 1) as usize];
    for mask in 0u32..(1 << total) {
        if mask.count_ones() == cases {
            let a = (mask & exposed_mask).count_ones();
            weight[a as usize] += psi.powi(a as i32);
        }
    }
    let z: f64 = weight.iter().sum();
    weight.iter().enumerate().filter(|(_, w)| **w > 0.0).map(|(a, w)| (a as u32, w / z)).collect()
}
