//! Small deterministic optimizers: golden-section search, monotone bisection,
//! Nelder-Mead, and multi-start ascent over products of probability simplices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Maximizes a unimodal `f` on `[a, b]`. Returns `(argmax, max)`; the
/// endpoints are also compared so boundary maxima are not lost.
pub fn golden_max(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (mut lo, mut hi) = (a.min(b), a.max(b));
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = f(x1);
        }
    }
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    for x in [a.min(b), a.max(b)] {
        let fx = f(x);
        if fx > best.1 {
            best = (x, fx);
        }
    }
    best
}

/// Minimizes a unimodal `f` on `[a, b]`.
pub fn golden_min(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (x, v) = golden_max(|x| -f(x), a, b, tol);
    (x, -v)
}

/// Largest `x` in `[lo, hi]` with `feasible(x)`, for a predicate that is true
/// on an initial segment. Returns `lo` if nothing beyond it is feasible.
pub fn bisect_last_true(mut feasible: impl FnMut(f64) -> bool, lo: f64, hi: f64, iters: usize) -> f64 {
    if feasible(hi) {
        return hi;
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..iters {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if feasible(m) {
            a = m;
        } else {
            b = m;
        }
    }
    a
}

/// Root of an increasing function `g` on `[lo, hi]` by bisection, assuming
/// `g(lo) ≤ 0 ≤ g(hi)`.
pub fn bisect_increasing(mut g: impl FnMut(f64) -> f64, lo: f64, hi: f64, iters: usize) -> f64 {
    bisect_last_true(|x| g(x) <= 0.0, lo, hi, iters)
}

/// Nelder-Mead minimization. Returns `(argmin, min)`.
pub fn nelder_mead(mut f: impl FnMut(&[f64]) -> f64, x0: &[f64], scale: f64, max_iter: usize, ftol: f64) -> (Vec<f64>, f64) {
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += scale;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    for _ in 0..max_iter {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();
        if (values[n] - values[0]).abs() <= ftol {
            break;
        }
        let mut centroid = vec![0.0; n];
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid.iter().zip(&simplex[n]).map(|(c, w)| c + t * (w - c)).collect()
        };
        let reflected = along(-1.0);
        let fr = f(&reflected);
        if fr < values[0] {
            let expanded = along(-2.0);
            let fe = f(&expanded);
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
        } else {
            let contracted = if fr < values[n] { along(-0.5) } else { along(0.5) };
            let fc = f(&contracted);
            if fc < values[n].min(fr) {
                simplex[n] = contracted;
                values[n] = fc;
            } else {
                let best = simplex[0].clone();
                for i in 1..=n {
                    for (x, b) in simplex[i].iter_mut().zip(&best) {
                        *x = b + 0.5 * (*x - b);
                    }
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }
    let (i, v) = values.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    (simplex[i].clone(), *v)
}

/// `-τ ln Σ exp(-tᵢ/τ)`, a smooth lower approximation of `min tᵢ`.
pub fn softmin(terms: &[f64], tau: f64) -> f64 {
    let m = terms.iter().copied().fold(f64::INFINITY, f64::min);
    if !m.is_finite() {
        return m;
    }
    let s: f64 = terms.iter().map(|t| (-(t - m) / tau).exp()).sum();
    m - tau * s.ln()
}

/// Whether the minimum of the terms is to be maximized or minimized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    MaxMin,
    MinMin,
}

#[derive(Debug, Clone)]
pub struct SimplexConfig {
    /// Random Dirichlet starts, in addition to any structured starts.
    pub restarts: usize,
    pub seed: u64,
    /// Gradient iterations per smoothing level.
    pub max_iters: usize,
    /// Smoothing temperatures, applied in order.
    pub taus: Vec<f64>,
    pub polish: bool,
}

impl Default for SimplexConfig {
    fn default() -> Self {
        SimplexConfig {
            restarts: 8,
            seed: 0x5eed_d1a3,
            max_iters: 120,
            taus: vec![1e-1, 1e-2, 1e-3, 1e-4, 1e-5],
            polish: true,
        }
    }
}

impl SimplexConfig {
    pub fn quick() -> Self {
        SimplexConfig { restarts: 3, max_iters: 60, taus: vec![1e-2, 1e-3, 1e-4], ..Default::default() }
    }
}

/// Best point found by [`optimize_min_terms`].
#[derive(Debug, Clone)]
pub struct Candidate {
    pub point: Vec<f64>,
    /// Exact `min` of the terms at `point`.
    pub value: f64,
    /// Index of the start that produced it (structured starts come first).
    pub start: usize,
}

/// Dirichlet(1, .., 1) sample on each block.
pub fn random_simplex_point(blocks: &[usize], rng: &mut impl Rng) -> Vec<f64> {
    let mut out = Vec::with_capacity(blocks.iter().sum());
    for &k in blocks {
        let e: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        let s: f64 = e.iter().sum();
        out.extend(e.iter().map(|x| x / s));
    }
    out
}

/// Generator for restart `stream` of a multi-start run.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

struct Problem<'a, F> {
    blocks: &'a [usize],
    terms: &'a F,
    sense: Sense,
}

impl<F: Fn(&[f64]) -> Vec<f64>> Problem<'_, F> {
    fn exact(&self, p: &[f64]) -> f64 {
        let m = self.terms.as_ref_min(p);
        match self.sense {
            Sense::MaxMin => m,
            Sense::MinMin => -m,
        }
    }

    fn smooth(&self, p: &[f64], tau: f64) -> f64 {
        let s = softmin(&(self.terms)(p), tau);
        match self.sense {
            Sense::MaxMin => s,
            Sense::MinMin => -s,
        }
    }

    fn to_point(&self, logits: &[f64], out: &mut [f64]) {
        let mut off = 0;
        for &k in self.blocks {
            let block = &logits[off..off + k];
            let m = block.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mut s = 0.0;
            for i in 0..k {
                out[off + i] = (block[i] - m).exp();
                s += out[off + i];
            }
            for v in &mut out[off..off + k] {
                *v /= s;
            }
            off += k;
        }
    }

    fn smooth_at_logits(&self, logits: &[f64], tau: f64, scratch: &mut [f64]) -> f64 {
        self.to_point(logits, scratch);
        self.smooth(scratch, tau)
    }

    fn ascend(&self, start: &[f64], cfg: &SimplexConfig) -> Vec<f64> {
        let n = start.len();
        let mut logits: Vec<f64> = start.iter().map(|p| p.max(1e-12).ln()).collect();
        let mut scratch = vec![0.0; n];
        let mut best_point = start.to_vec();
        let mut best_exact = self.exact(start);
        let h = 1e-6;
        for &tau in &cfg.taus {
            let mut step = 1.0;
            let mut fcur = self.smooth_at_logits(&logits, tau, &mut scratch);
            for _ in 0..cfg.max_iters {
                let mut grad = vec![0.0; n];
                for i in 0..n {
                    let orig = logits[i];
                    logits[i] = orig + h;
                    let fp = self.smooth_at_logits(&logits, tau, &mut scratch);
                    logits[i] = orig - h;
                    let fm = self.smooth_at_logits(&logits, tau, &mut scratch);
                    logits[i] = orig;
                    grad[i] = (fp - fm) / (2.0 * h);
                }
                let g2: f64 = grad.iter().map(|g| g * g).sum();
                if g2 < 1e-24 {
                    break;
                }
                let mut trial = vec![0.0; n];
                let mut accepted = false;
                while step > 1e-12 {
                    for i in 0..n {
                        trial[i] = logits[i] + step * grad[i];
                    }
                    let ft = self.smooth_at_logits(&trial, tau, &mut scratch);
                    if ft >= fcur + 1e-4 * step * g2 {
                        logits.copy_from_slice(&trial);
                        fcur = ft;
                        accepted = true;
                        step *= 2.0;
                        break;
                    }
                    step *= 0.5;
                }
                if !accepted {
                    break;
                }
            }
            self.to_point(&logits, &mut scratch);
            let e = self.exact(&scratch);
            if e > best_exact {
                best_exact = e;
                best_point.copy_from_slice(&scratch);
            }
        }
        best_point
    }

    /// Moves mass between pairs of coordinates of a block while the exact
    /// objective improves, with geometrically shrinking move sizes.
    fn polish(&self, point: &mut [f64]) {
        let mut cur = self.exact(point);
        let mut step: f64 = 1.0 / 16.0;
        while step > 1e-10 {
            let mut sweeps = 0;
            loop {
                let mut improved = false;
                let mut off = 0;
                for &k in self.blocks {
                    for i in 0..k {
                        for j in 0..k {
                            if i == j {
                                continue;
                            }
                            let d = step.min(point[off + i]);
                            if d <= 0.0 {
                                continue;
                            }
                            point[off + i] -= d;
                            point[off + j] += d;
                            let v = self.exact(point);
                            if v > cur {
                                cur = v;
                                improved = true;
                            } else {
                                point[off + i] += d;
                                point[off + j] -= d;
                            }
                        }
                    }
                    off += k;
                }
                sweeps += 1;
                if !improved || sweeps >= 20 {
                    break;
                }
            }
            step *= 0.5;
        }
    }
}

trait MinOfTerms {
    fn as_ref_min(&self, p: &[f64]) -> f64;
}

impl<F: Fn(&[f64]) -> Vec<f64>> MinOfTerms for F {
    fn as_ref_min(&self, p: &[f64]) -> f64 {
        self(p).into_iter().fold(f64::INFINITY, f64::min)
    }
}

/// Optimizes `min terms(p)` over a product of simplices whose sizes are
/// `blocks`; `p` is the concatenation of the block pmfs.
///
/// Every structured start is run, followed by `cfg.restarts` random starts
/// drawn from per-start streams of `cfg.seed`. Starts run in parallel and the
/// winner is chosen by value, then by start index, so the result does not
/// depend on the number of workers.
pub fn optimize_min_terms<F>(blocks: &[usize], terms: &F, structured: &[Vec<f64>], sense: Sense, cfg: &SimplexConfig) -> Candidate
where
    F: Fn(&[f64]) -> Vec<f64> + Sync,
{
    let problem = Problem { blocks, terms, sense };
    let total = structured.len() + cfg.restarts;
    let results: Vec<Candidate> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let start = if idx < structured.len() {
                structured[idx].clone()
            } else {
                let mut rng = stream_rng(cfg.seed, idx as u64);
                random_simplex_point(blocks, &mut rng)
            };
            let mut point = problem.ascend(&start, cfg);
            if cfg.polish {
                problem.polish(&mut point);
            }
            let value = terms.as_ref_min(&point);
            Candidate { point, value, start: idx }
        })
        .collect();
    results
        .into_iter()
        .reduce(|a, b| {
            let better = match sense {
                Sense::MaxMin => b.value > a.value,
                Sense::MinMin => b.value < a.value,
            };
            if better { b } else { a }
        })
        .expect("at least one start")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_interior_and_boundary_maxima() {
        let (x, v) = golden_max(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-6 && v.abs() < 1e-12);
        let (x, _) = golden_max(|x| x, 0.0, 2.0, 1e-10);
        assert_eq!(x, 2.0);
    }

    #[test]
    fn bisection_finds_threshold() {
        let r = bisect_last_true(|x| x * x <= 2.0, 0.0, 2.0, 200);
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
        assert_eq!(bisect_last_true(|_| true, 0.0, 1.0, 10), 1.0);
    }

    #[test]
    fn nelder_mead_rosenbrock() {
        let (x, v) = nelder_mead(|p| (1.0 - p[0]).powi(2) + 100.0 * (p[1] - p[0] * p[0]).powi(2), &[-1.0, 1.0], 0.5, 5000, 1e-16);
        assert!(v < 1e-10 && (x[0] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn softmin_bounds() {
        let t = [1.0, 2.0, 1.5];
        let s = softmin(&t, 1e-3);
        assert!(s <= 1.0 && s > 1.0 - 1e-3);
    }

    #[test]
    fn maxmin_on_simplex() {
        // max over p of min(p0, p1, p2) is 1/3
        let f = |p: &[f64]| p.to_vec();
        let c = optimize_min_terms(&[3], &f, &[], Sense::MaxMin, &SimplexConfig::quick());
        assert!((c.value - 1.0 / 3.0).abs() < 1e-6, "{}", c.value);
        // min over p of min(p) is 0 at a vertex
        let c = optimize_min_terms(&[3], &f, &[], Sense::MinMin, &SimplexConfig::quick());
        assert!(c.value < 1e-6);
    }

    #[test]
    fn independent_of_worker_count() {
        let f = |p: &[f64]| vec![p[0] * 2.0 + p[3], 1.0 - p[1] * p[4], p[2] + p[5]];
        let cfg = SimplexConfig::quick();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let a = one.install(|| optimize_min_terms(&[3, 3], &f, &[], Sense::MaxMin, &cfg));
        let b = optimize_min_terms(&[3, 3], &f, &[], Sense::MaxMin, &cfg);
        assert_eq!(a.point, b.point);
        assert_eq!(a.start, b.start);
    }
}
