//! Gaussian MAC `Y = X1 + X2 + Z` with unit noise: lower and upper bounds,
//! threshold constants and regime classification.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optim::{bisect_increasing, bisect_last_true, golden_max, golden_min, nelder_mead, stream_rng};
use crate::quad::gm_diff_entropy;
use crate::report::BoundReport;

fn half_log(x: f64) -> f64 {
    0.5 * x.log2()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianNet {
    pub p1: f64,
    pub p2: f64,
    pub c1: f64,
    pub c2: f64,
}

impl GaussianNet {
    pub fn new(p1: f64, p2: f64, c1: f64, c2: f64) -> Result<Self> {
        if !(p1 > 0.0 && p2 > 0.0 && p1.is_finite() && p2.is_finite()) {
            return Err(Error::Domain(format!("powers ({p1}, {p2}) must be positive")));
        }
        if !(c1 >= 0.0 && c2 >= 0.0 && c1.is_finite() && c2.is_finite()) {
            return Err(Error::Domain(format!("bit-pipe capacities ({c1}, {c2}) must be >= 0")));
        }
        Ok(GaussianNet { p1, p2, c1, c2 })
    }

    pub fn symmetric(p: f64, c: f64) -> Result<Self> {
        GaussianNet::new(p, p, c, c)
    }

    pub fn is_symmetric(&self) -> bool {
        self.p1 == self.p2 && self.c1 == self.c2
    }

    fn s(&self) -> f64 {
        (self.p1 * self.p2).sqrt()
    }

    fn sum(&self) -> f64 {
        self.c1 + self.c2
    }

    /// `½ log(1 + P1 + P2 + 2ρ√(P1P2))`.
    pub fn sum_rate(&self, rho: f64) -> f64 {
        half_log(1.0 + self.p1 + self.p2 + 2.0 * rho * self.s())
    }

    /// `C1 + ½ log(1 + P2(1 − ρ²))`.
    pub fn relay1_term(&self, rho: f64) -> f64 {
        self.c1 + half_log(1.0 + self.p2 * (1.0 - rho * rho))
    }

    /// `C2 + ½ log(1 + P1(1 − ρ²))`.
    pub fn relay2_term(&self, rho: f64) -> f64 {
        self.c2 + half_log(1.0 + self.p1 * (1.0 - rho * rho))
    }

    /// `C1 + C2 − ½ log(1/(1 − ρ²))`.
    pub fn correlation_cost_term(&self, rho: f64) -> f64 {
        if rho >= 1.0 {
            f64::NEG_INFINITY
        } else {
            self.sum() + half_log(1.0 - rho * rho)
        }
    }

    /// Half of `C1 + C2 + sum_rate(ρ) − ½ log(1/(1 − ρ²))`.
    pub fn markov_pair_term(&self, rho: f64) -> f64 {
        0.5 * (self.correlation_cost_term(rho) + self.sum_rate(rho))
    }
}

/// Correlation coefficient in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Rho(f64);

impl Rho {
    pub fn new(v: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&v) {
            Ok(Rho(v))
        } else {
            Err(Error::Domain(format!("correlation {v} outside [0, 1]")))
        }
    }
    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Rho {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Rho::new(v)
    }
}

impl From<Rho> for f64 {
    fn from(r: Rho) -> f64 {
        r.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussConstants {
    /// Maximizer of the Markov-pair term.
    pub rho1: f64,
    /// Largest correlation for which a degraded `U` makes `X1 − U − X2`.
    pub rho2: f64,
    /// Closed-form crossing of the correlation-cost and sum-rate terms.
    pub rho0: Option<f64>,
    /// The same crossing found by bisection.
    pub lambda: Option<f64>,
    /// Auxiliary noise variance matched to `lambda`, clamped at 0.
    pub n_lambda: Option<f64>,
    /// Set when the crossing does not exist and the cut-set bound is met.
    pub regime: Option<String>,
}

pub fn gauss_constants(net: &GaussianNet) -> GaussConstants {
    let s = net.s();
    let a = 1.0 + net.p1 + net.p2;
    let rho1 = (-a + (a * a + 12.0 * s * s).sqrt()) / (6.0 * s);
    let k = 1.0 / (4.0 * s * s);
    let rho2 = (1.0 + k).sqrt() - k.sqrt();
    let target = net.sum();
    let crossing = |rho: f64| half_log((a + 2.0 * rho * s) / (1.0 - rho * rho));
    let (rho0, lambda, regime) = if target < half_log(a) {
        (None, None, Some("cut-set matching".to_string()))
    } else {
        let e = 2f64.powf(2.0 * target);
        let r0 = (-s + (s * s + e * (e - 1.0 - net.p1 - net.p2)).sqrt()) / e;
        let lam = bisect_increasing(|r| crossing(r) - target, 0.0, 1.0 - 1e-15, 200);
        (Some(r0), Some(lam), None)
    };
    let n_lambda = lambda.filter(|l| *l > 0.0).map(|l| markov_noise(net, l));
    GaussConstants { rho1, rho2, rho0, lambda, n_lambda, regime }
}

/// `(√(P1P2)(1/ρ − ρ) − 1)⁺`: the variance of `Z'` that makes `X1 − U − X2`.
pub fn markov_noise(net: &GaussianNet, rho: f64) -> f64 {
    if rho <= 0.0 {
        return f64::INFINITY;
    }
    (net.s() * (1.0 / rho - rho) - 1.0).max(0.0)
}

/// `I(X1;X2|U)` in closed form for jointly Gaussian inputs and `U = Y + Z'`.
pub fn gauss_cmi_given_u(net: &GaussianNet, rho: Rho, n: f64) -> f64 {
    let (p1, p2, rho) = (net.p1, net.p2, rho.value());
    let c = rho * net.s();
    let v = 1.0 + n + p1 + p2 + 2.0 * c;
    let k11 = p1 - (p1 + c).powi(2) / v;
    let k22 = p2 - (p2 + c).powi(2) / v;
    let k12 = c - (p1 + c) * (p2 + c) / v;
    let det = k11 * k22 - k12 * k12;
    if det <= 0.0 {
        return f64::INFINITY;
    }
    half_log(k11 * k22 / det).max(0.0)
}

/// Lower bound with jointly Gaussian inputs and no auxiliary.
pub fn gauss_lower_jg(net: &GaussianNet, rho: Rho) -> BoundReport {
    let r = rho.value();
    let report = BoundReport::from_constraints([
        ("C1+C2-corr", net.correlation_cost_term(r)),
        ("C1+relay", net.relay1_term(r)),
        ("C2+relay", net.relay2_term(r)),
        ("sum-rate", net.sum_rate(r)),
    ])
    .with_witness("rho", vec![r]);
    if r >= 1.0 {
        return report.with_value(0.0).with_regime("infeasible rho");
    }
    let v = report.value.max(0.0);
    report.with_value(v)
}

/// Maximizes `f` over `[0, 1]`: coarse grid, a `1e-4` grid around the best
/// coarse point, then golden section.
fn max_over_rho(mut f: impl FnMut(f64) -> f64, breaks: &[f64]) -> (f64, f64) {
    let mut best = (0.0, f64::NEG_INFINITY);
    let consider = |r: f64, f: &mut dyn FnMut(f64) -> f64, best: &mut (f64, f64)| {
        let v = f(r);
        if v > best.1 {
            *best = (r, v);
        }
    };
    for i in 0..=100 {
        consider(i as f64 / 100.0, &mut f, &mut best);
    }
    for &b in breaks.iter().filter(|b| (0.0..=1.0).contains(*b)) {
        consider(b, &mut f, &mut best);
    }
    let centre = best.0;
    for i in -100..=100 {
        let r = centre + i as f64 * 1e-4;
        if (0.0..=1.0).contains(&r) {
            consider(r, &mut f, &mut best);
        }
    }
    let (lo, hi) = ((best.0 - 1e-4).max(0.0), (best.0 + 1e-4).min(1.0));
    let (r, v) = golden_max(&mut f, lo, hi, 1e-12);
    if v > best.1 {
        best = (r, v);
    }
    best
}

fn jg_value(net: &GaussianNet, r: f64) -> f64 {
    net.correlation_cost_term(r).min(net.relay1_term(r)).min(net.relay2_term(r)).min(net.sum_rate(r))
}

/// Which families the lower bound searches over.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerModes {
    pub jointly_gaussian: bool,
    pub full_coop: bool,
    pub two_mixture: bool,
}

impl Default for LowerModes {
    fn default() -> Self {
        LowerModes { jointly_gaussian: true, full_coop: true, two_mixture: false }
    }
}

impl LowerModes {
    pub fn all() -> Self {
        LowerModes { jointly_gaussian: true, full_coop: true, two_mixture: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixtureConfig {
    pub starts: usize,
    pub seed: u64,
    pub max_iter: usize,
    pub quad_points: usize,
}

impl Default for MixtureConfig {
    fn default() -> Self {
        MixtureConfig { starts: 16, seed: 0x6a55_2b1d, max_iter: 600, quad_points: 16 }
    }
}

/// One component of a two-component input mixture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixtureComponent {
    pub weight: f64,
    pub p1: f64,
    pub p2: f64,
    pub rho: f64,
}

/// Time-shared jointly Gaussian input, used with `U` equal to the component
/// label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussMixtureInput {
    pub components: Vec<MixtureComponent>,
}

impl GaussMixtureInput {
    pub fn new(net: &GaussianNet, components: Vec<MixtureComponent>) -> Result<Self> {
        let total: f64 = components.iter().map(|c| c.weight).sum();
        if components.is_empty() || (total - 1.0).abs() > 1e-9 || components.iter().any(|c| c.weight < 0.0) {
            return Err(Error::InvalidPmf(format!("mixture weights sum to {total}")));
        }
        let pw1: f64 = components.iter().map(|c| c.weight * c.p1).sum();
        let pw2: f64 = components.iter().map(|c| c.weight * c.p2).sum();
        if pw1 > net.p1 * (1.0 + 1e-9) || pw2 > net.p2 * (1.0 + 1e-9) {
            return Err(Error::Domain(format!("average powers ({pw1}, {pw2}) exceed the budget")));
        }
        if components.iter().any(|c| !(0.0..1.0).contains(&c.rho) || c.p1 < 0.0 || c.p2 < 0.0) {
            return Err(Error::Domain("component correlation must lie in [0, 1)".into()));
        }
        Ok(GaussMixtureInput { components })
    }
}

/// The five achievable-rate terms for a mixture input.
pub fn mixture_terms(net: &GaussianNet, input: &GaussMixtureInput, quad_points: usize) -> Result<[f64; 5]> {
    let mut cmi = 0.0;
    let mut r1 = 0.0;
    let mut r2 = 0.0;
    let mut sum_u = 0.0;
    let mut weights = Vec::new();
    let mut vars = Vec::new();
    for c in &input.components {
        let s = (c.p1 * c.p2).sqrt();
        let v = 1.0 + c.p1 + c.p2 + 2.0 * c.rho * s;
        cmi += c.weight * -half_log(1.0 - c.rho * c.rho);
        r1 += c.weight * half_log(1.0 + c.p1 * (1.0 - c.rho * c.rho));
        r2 += c.weight * half_log(1.0 + c.p2 * (1.0 - c.rho * c.rho));
        sum_u += c.weight * half_log(v);
        weights.push(c.weight);
        vars.push(v);
    }
    let means = vec![0.0; weights.len()];
    let h_y = gm_diff_entropy(&weights, &means, &vars, quad_points)?;
    let i_y = h_y - crate::quad::gaussian_diff_entropy(1.0);
    Ok([net.sum() - cmi, net.c2 + r1, net.c1 + r2, 0.5 * (net.sum() + sum_u - cmi), i_y])
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn decode_mixture(net: &GaussianNet, x: &[f64]) -> GaussMixtureInput {
    let w = sigmoid(x[0]).clamp(1e-9, 1.0 - 1e-9);
    let share = sigmoid(x[2]);
    let (ta, tb) = (share / w, (1.0 - share) / (1.0 - w));
    let comp = |weight: f64, t: f64, rho: f64| MixtureComponent {
        weight,
        p1: net.p1 * t,
        p2: net.p2 * t,
        rho: rho.min(1.0 - 1e-12),
    };
    GaussMixtureInput { components: vec![comp(w, ta, sigmoid(x[1])), comp(1.0 - w, tb, sigmoid(x[3]))] }
}

fn logit(p: f64) -> f64 {
    let p = p.clamp(1e-9, 1.0 - 1e-9);
    (p / (1.0 - p)).ln()
}

/// Best achievable-region value over two-component mixtures, with `U` the label.
pub fn two_mixture_lower(net: &GaussianNet, cfg: &MixtureConfig) -> BoundReport {
    let objective = |x: &[f64]| -> f64 {
        let input = decode_mixture(net, x);
        match mixture_terms(net, &input, cfg.quad_points) {
            Ok(t) => -t.iter().copied().fold(f64::INFINITY, f64::min),
            Err(_) => f64::INFINITY,
        }
    };
    let (rho_jg, _) = max_over_rho(|r| jg_value(net, r), &[]);
    let structured = [
        vec![0.0, logit(rho_jg), 0.0, logit(rho_jg)],
        vec![0.0, logit(0.05), 0.0, logit(0.9)],
        vec![logit(0.8), logit(rho_jg), logit(0.8), logit(0.99)],
    ];
    let starts: Vec<Vec<f64>> = (0..cfg.starts)
        .map(|i| {
            if i < structured.len() {
                structured[i].clone()
            } else {
                let mut rng = stream_rng(cfg.seed, i as u64);
                (0..4).map(|_| rng.gen_range(-4.0..4.0)).collect()
            }
        })
        .collect();
    let results: Vec<(f64, usize, Vec<f64>)> = starts
        .par_iter()
        .enumerate()
        .map(|(i, x0)| {
            let (x, v) = nelder_mead(objective, x0, 0.5, cfg.max_iter, 1e-12);
            (-v, i, x)
        })
        .collect();
    let (value, _, x) = results
        .into_iter()
        .max_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)))
        .expect("at least one start");
    let input = decode_mixture(net, &x);
    let terms = mixture_terms(net, &input, cfg.quad_points).unwrap_or([value; 5]);
    let witness: Vec<f64> = input.components.iter().flat_map(|c| [c.weight, c.p1, c.p2, c.rho]).collect();
    BoundReport::from_constraints([
        ("C1+C2-I(X1;X2|U)", terms[0]),
        ("C2+I(X1;Y|X2U)", terms[1]),
        ("C1+I(X2;Y|X1U)", terms[2]),
        ("half-sum", terms[3]),
        ("I(X1X2;Y)", terms[4]),
    ])
    .with_witness("mixture", witness)
    .with_regime("two-mixture")
}

/// Full cooperation: `U = X1/√P1 = X2/√P2` scaled.
pub fn full_coop_lower(net: &GaussianNet) -> BoundReport {
    BoundReport::from_constraints([("C1", net.c1), ("C2", net.c2), ("sum-rate", net.sum_rate(1.0))])
        .with_regime("full-coop")
}

pub fn gauss_lower_best(net: &GaussianNet, modes: LowerModes, cfg: &MixtureConfig) -> BoundReport {
    let mut best: Option<BoundReport> = None;
    let mut offer = |r: BoundReport| {
        if best.as_ref().is_none_or(|b| r.value > b.value) {
            best = Some(r);
        }
    };
    if modes.jointly_gaussian || !(modes.full_coop || modes.two_mixture) {
        let (rho, _) = max_over_rho(|r| jg_value(net, r), &[]);
        offer(gauss_lower_jg(net, Rho(rho)).with_regime("jointly-gaussian"));
    }
    if modes.full_coop {
        offer(full_coop_lower(net));
    }
    if modes.two_mixture {
        offer(two_mixture_lower(net, cfg));
    }
    best.expect("at least one mode")
}

pub fn gauss_cutset(net: &GaussianNet) -> BoundReport {
    let f = |r: f64| net.sum().min(net.relay1_term(r)).min(net.relay2_term(r)).min(net.sum_rate(r));
    let (rho, _) = max_over_rho(f, &[]);
    BoundReport::from_constraints([
        ("C1+C2", net.sum()),
        ("C1+relay", net.relay1_term(rho)),
        ("C2+relay", net.relay2_term(rho)),
        ("sum-rate", net.sum_rate(rho)),
    ])
    .with_witness("rho", vec![rho])
    .with_regime("cut-set")
}

/// Markov-pair term below `rho2`, the relay term above it.
pub fn cor1_switched_term(net: &GaussianNet, rho: f64) -> f64 {
    let rho2 = gauss_constants(net).rho2;
    if rho <= rho2 {
        net.markov_pair_term(rho)
    } else {
        net.relay1_term(rho).min(net.relay2_term(rho))
    }
}

fn cor1_value(net: &GaussianNet, rho2: f64, r: f64) -> f64 {
    let base = net.sum().min(net.relay1_term(r)).min(net.relay2_term(r)).min(net.sum_rate(r));
    if r <= rho2 {
        base.min(net.markov_pair_term(r))
    } else {
        base
    }
}

/// Converse with the auxiliary `U = Y + Z'` and the Markov choice of the
/// noise variance.
pub fn gauss_upper_cor1(net: &GaussianNet) -> BoundReport {
    let k = gauss_constants(net);
    let (rho, _) = max_over_rho(|r| cor1_value(net, k.rho2, r), &[k.rho1, k.rho2]);
    let mut items = vec![
        ("C1+C2", net.sum()),
        ("C1+relay", net.relay1_term(rho)),
        ("C2+relay", net.relay2_term(rho)),
        ("sum-rate", net.sum_rate(rho)),
    ];
    let regime = if rho <= k.rho2 {
        items.push(("markov-pair", net.markov_pair_term(rho)));
        "rho<=rho2"
    } else {
        "rho>rho2"
    };
    BoundReport::from_constraints(items).with_witness("rho", vec![rho]).with_regime(regime)
}

fn thm3_rhs(net: &GaussianNet, rho: f64, n: f64, r: f64) -> f64 {
    let q = 1.0 - rho * rho;
    net.sum() - half_log(n + 2f64.powf(2.0 * r)) - half_log(1.0 + n)
        + half_log(1.0 + n + net.p1 * q)
        + half_log(1.0 + n + net.p2 * q)
}

/// Largest `R` with `R ≤ rhs(R)` for fixed `(ρ, N)`; the right side falls in `R`.
pub fn thm3_fixed_point(net: &GaussianNet, rho: Rho, n: f64) -> f64 {
    let rho = rho.value();
    if thm3_rhs(net, rho, n, 0.0) < 0.0 {
        return 0.0;
    }
    bisect_last_true(|r| r <= thm3_rhs(net, rho, n, r), 0.0, net.sum(), 80)
}

/// Closed-form solution of the same fixed point.
pub fn thm3_closed_form(net: &GaussianNet, rho: Rho, n: f64) -> f64 {
    let q = 1.0 - rho.value().powi(2);
    let k = 2f64.powf(2.0 * (net.sum() + 1.0)) * (1.0 + n + net.p1 * q) * (1.0 + n + net.p2 * q) / (1.0 + n);
    half_log((-n + (n * n + k).sqrt()) / 2.0)
}

/// `min over N ≥ 0` of the fixed point; returns `(N, R)`.
fn thm3_min_over_noise(net: &GaussianNet, rho: f64, n_lambda: Option<f64>) -> (f64, f64) {
    let fp = |n: f64| thm3_fixed_point(net, Rho(rho), n);
    let mut cands: Vec<f64> = (-12..=12).map(|i| 10f64.powf(i as f64 / 4.0)).collect();
    cands.push(0.0);
    cands.extend(n_lambda);
    let m = markov_noise(net, rho);
    if m.is_finite() {
        cands.push(m);
    }
    cands.sort_by(f64::total_cmp);
    cands.dedup();
    let vals: Vec<f64> = cands.iter().map(|&n| fp(n)).collect();
    let (i, _) = vals.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("nonempty");
    let mut best = (cands[i], vals[i]);
    let lo = if i > 0 { cands[i - 1] } else { cands[i] };
    let hi = if i + 1 < cands.len() { cands[i + 1] } else { cands[i] };
    if hi > lo {
        let (n, v) = golden_min(fp, lo, hi, 1e-10 * (1.0 + hi));
        if v < best.1 {
            best = (n, v);
        }
    }
    best
}

fn thm3_value(net: &GaussianNet, r: f64, n_lambda: Option<f64>, floor: f64) -> f64 {
    let base = net.sum().min(net.relay1_term(r)).min(net.relay2_term(r)).min(net.sum_rate(r));
    if base <= floor {
        return base;
    }
    base.min(thm3_min_over_noise(net, r, n_lambda).1)
}

/// Converse from time sharing with the entropy power inequality.
pub fn gauss_upper_thm3(net: &GaussianNet) -> BoundReport {
    let k = gauss_constants(net);
    let mut floor = f64::NEG_INFINITY;
    let (rho, _) = max_over_rho(
        |r| {
            let v = thm3_value(net, r, k.n_lambda, floor);
            floor = floor.max(v);
            v
        },
        &[k.rho1, k.rho2, k.lambda.unwrap_or(0.0)],
    );
    let (n, fp) = thm3_min_over_noise(net, rho, k.n_lambda);
    BoundReport::from_constraints([
        ("C1+C2", net.sum()),
        ("C1+relay", net.relay1_term(rho)),
        ("C2+relay", net.relay2_term(rho)),
        ("sum-rate", net.sum_rate(rho)),
        ("epi-fixed-point", fp),
    ])
    .with_witness("rho", vec![rho])
    .with_witness("N", vec![n])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussRegime {
    pub label: String,
    pub matching: bool,
    /// Whether the simpler converse (no time sharing) is already tight.
    pub cor1_tight: bool,
}

/// Classifies a net by the sufficient conditions for the bounds to meet.
pub fn gauss_regime(net: &GaussianNet) -> GaussRegime {
    let k = gauss_constants(net);
    let full = net.c1.min(net.c2) >= net.sum_rate(1.0);
    let reg = |label: &str, matching: bool, cor1_tight: bool| GaussRegime { label: label.into(), matching, cor1_tight };
    if net.is_symmetric() {
        let p = net.p1;
        let c = net.c1;
        let window = |r: f64| 0.25 * ((1.0 + 2.0 * p * (1.0 + r)) / (1.0 - r * r)).log2();
        if c <= 0.25 * (1.0 + 2.0 * p).log2() {
            return reg("no-cooperation", true, true);
        }
        if full {
            return reg("full-cooperation", true, true);
        }
        let upper = window(k.rho2);
        if c >= window(k.rho1) && c <= upper {
            return reg("partial-cooperation", true, true);
        }
        if c <= upper {
            return reg("partial-cooperation (time-sharing)", true, false);
        }
        return reg("open-gap", false, false);
    }
    if full {
        return reg("full-cooperation", true, false);
    }
    let a = 1.0 + net.p1 + net.p2;
    let pp0 = net.sum() <= half_log((a + 2.0 * k.rho2 * net.s()) / (1.0 - k.rho2 * k.rho2));
    if pp0 {
        return reg("asymmetric-pp0", true, false);
    }
    if let Some(r0) = k.rho0 {
        let top = a + 2.0 * r0 * net.s();
        if net.c1 <= half_log(top / (1.0 + net.p2 * (1.0 - r0 * r0))) {
            return reg("asymmetric-pp1", true, false);
        }
        if net.c2 <= half_log(top / (1.0 + net.p1 * (1.0 - r0 * r0))) {
            return reg("asymmetric-pp2", true, false);
        }
    }
    reg("open-gap", false, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(p: f64, c: f64) -> GaussianNet {
        GaussianNet::symmetric(p, c).unwrap()
    }

    #[test]
    fn jg_examples() {
        let r = gauss_lower_jg(&sym(1.0, 0.3), Rho(0.0));
        assert!((r.value - 0.6).abs() < 1e-12);
        assert!((r.constraint("sum-rate").unwrap() - 0.792_481).abs() < 1e-6);
        let r = gauss_lower_jg(&sym(1.0, 0.3), Rho(1.0));
        assert_eq!(r.value, 0.0);
        assert_eq!(r.regime, "infeasible rho");
        let lam = gauss_constants(&sym(1.0, 0.45)).lambda.unwrap();
        assert!((lam - 0.18288).abs() < 1e-4);
        let r = gauss_lower_jg(&sym(1.0, 0.45), Rho(lam));
        assert!((r.value - 0.87548).abs() < 1e-4, "{}", r.value);
    }

    #[test]
    fn constants_examples() {
        let k = gauss_constants(&sym(1.0, 0.45));
        assert!((k.rho1 - (-3.0 + 21f64.sqrt()) / 6.0).abs() < 1e-12);
        assert!((k.rho2 - (1.25f64.sqrt() - 0.5)).abs() < 1e-12);
        assert!((k.rho0.unwrap() - k.lambda.unwrap()).abs() < 1e-9);
        let k = gauss_constants(&sym(0.25, 0.1));
        assert!((k.rho2 - 0.236_068).abs() < 1e-6);
        let k = gauss_constants(&sym(1.0, 0.1));
        assert!(k.lambda.is_none());
        assert_eq!(k.regime.as_deref(), Some("cut-set matching"));
    }

    #[test]
    fn lower_best_examples() {
        let cfg = MixtureConfig::default();
        let r = gauss_lower_best(&sym(1.0, 1.3), LowerModes::default(), &cfg);
        assert!((r.value - 1.160_964).abs() < 1e-6);
        let r = gauss_lower_best(&sym(1.0, 0.3), LowerModes::default(), &cfg);
        assert!((r.value - 0.6).abs() < 1e-9);
    }

    #[test]
    fn cor1_examples() {
        assert!((gauss_upper_cor1(&sym(1.0, 0.3)).value - 0.6).abs() < 1e-9);
        assert!((gauss_upper_cor1(&sym(1.0, 1.2)).value - 1.160_964).abs() < 1e-6);
        let net = sym(1.0, 0.55);
        let lower = gauss_lower_best(&net, LowerModes { jointly_gaussian: true, full_coop: false, two_mixture: false }, &MixtureConfig::default());
        assert!((gauss_upper_cor1(&net).value - lower.value).abs() < 1e-4);
    }

    #[test]
    fn thm3_examples() {
        let r = gauss_upper_thm3(&sym(0.25, 0.15));
        assert!((r.value - 0.29936).abs() < 1e-3, "{}", r.value);
        let r = gauss_upper_thm3(&sym(1.0, 0.45));
        assert!((r.value - 0.87548).abs() < 1e-3, "{}", r.value);
        let r = gauss_upper_thm3(&sym(1.0, 1.2));
        assert!((r.value - 1.160_964).abs() < 1e-6, "{}", r.value);
    }

    #[test]
    fn closed_form_agrees_with_bisection() {
        let net = GaussianNet::new(1.0, 0.5, 0.4, 0.6).unwrap();
        for rho in [0.0, 0.2, 0.7, 0.95] {
            for n in [0.0, 0.3, 2.0, 50.0] {
                let a = thm3_fixed_point(&net, Rho(rho), n);
                let b = thm3_closed_form(&net, Rho(rho), n);
                assert!((a - b).abs() < 1e-9, "rho={rho} n={n} {a} {b}");
            }
        }
    }

    #[test]
    fn regime_examples() {
        let r = gauss_regime(&sym(1.0, 0.42));
        assert!(r.matching && !r.cor1_tight);
        assert_eq!(gauss_regime(&sym(1.0, 0.9)).label, "open-gap");
        let r = gauss_regime(&sym(1.0, 1.3));
        assert_eq!(r.label, "full-cooperation");
        assert!(r.matching);
    }
}
