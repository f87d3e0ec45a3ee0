//! Differential entropy of one-dimensional Gaussian mixtures.

use std::f64::consts::{E, PI};

use crate::error::{Error, Result};

const WINDOW_SIGMAS: f64 = 8.0;
const ABS_TOL: f64 = 1e-9;
const MAX_DEPTH: u32 = 40;

/// `½ log2(2πe σ²)`.
pub fn gaussian_diff_entropy(variance: f64) -> f64 {
    0.5 * (2.0 * PI * E * variance).log2()
}

struct Mixture<'a> {
    weights: &'a [f64],
    means: &'a [f64],
    inv_var: Vec<f64>,
    log_norm: Vec<f64>,
}

impl Mixture<'_> {
    /// `-f(y) log2 f(y)`, evaluated through log-sum-exp.
    fn integrand(&self, y: f64) -> f64 {
        let mut max_exp = f64::NEG_INFINITY;
        let mut exps = [0.0f64; 16];
        let mut heap;
        let buf: &mut [f64] = if self.weights.len() <= 16 {
            &mut exps[..self.weights.len()]
        } else {
            heap = vec![0.0; self.weights.len()];
            &mut heap
        };
        for (i, slot) in buf.iter_mut().enumerate() {
            if self.weights[i] <= 0.0 {
                *slot = f64::NEG_INFINITY;
                continue;
            }
            let d = y - self.means[i];
            *slot = self.weights[i].ln() + self.log_norm[i] - 0.5 * d * d * self.inv_var[i];
            max_exp = max_exp.max(*slot);
        }
        if max_exp == f64::NEG_INFINITY {
            return 0.0;
        }
        let s: f64 = buf.iter().map(|e| (e - max_exp).exp()).sum();
        let ln_f = max_exp + s.ln();
        -ln_f.exp() * ln_f / std::f64::consts::LN_2
    }
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth >= MAX_DEPTH || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)
        + adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)
}

/// Differential entropy (bits) of `Σ wᵢ N(μᵢ, σᵢ²)`.
///
/// Integrates over `[min μ − 8σmax, max μ + 8σmax]`, split into `quad_points`
/// initial panels that are each refined adaptively.
pub fn gm_diff_entropy(weights: &[f64], means: &[f64], variances: &[f64], quad_points: usize) -> Result<f64> {
    if weights.is_empty() || weights.len() != means.len() || weights.len() != variances.len() {
        return Err(Error::Dimension("mixture parameter lists differ in length".into()));
    }
    if let Some(v) = variances.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::Domain(format!("variance {v} must be positive")));
    }
    if weights.iter().any(|w| *w < 0.0 || !w.is_finite()) {
        return Err(Error::InvalidPmf("negative mixture weight".into()));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidPmf(format!("mixture weights sum to {total}")));
    }
    let live: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] > 0.0).collect();
    let sigma_max = live.iter().map(|&i| variances[i].sqrt()).fold(0.0, f64::max);
    let lo = live.iter().map(|&i| means[i]).fold(f64::INFINITY, f64::min) - WINDOW_SIGMAS * sigma_max;
    let hi = live.iter().map(|&i| means[i]).fold(f64::NEG_INFINITY, f64::max) + WINDOW_SIGMAS * sigma_max;

    let mix = Mixture {
        weights,
        means,
        inv_var: variances.iter().map(|v| 1.0 / v).collect(),
        log_norm: variances.iter().map(|v| -0.5 * (2.0 * PI * v).ln()).collect(),
    };
    let f = |y: f64| mix.integrand(y);
    let panels = quad_points.max(1);
    let width = (hi - lo) / panels as f64;
    let tol = ABS_TOL / panels as f64;
    let mut acc = 0.0;
    for k in 0..panels {
        let a = lo + k as f64 * width;
        let b = if k + 1 == panels { hi } else { a + width };
        let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
        let whole = simpson(a, b, fa, fm, fb);
        acc += adaptive(&f, a, b, fa, fm, fb, whole, tol, 0);
    }
    Ok(acc)
}
