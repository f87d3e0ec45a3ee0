//! Binary adder MAC `Y = X1 + X2`: closed-form bounds and the capacity.
//!
//! Input distributions are doubly symmetric with parameter `p = P(X1 ≠ X2)`;
//! the auxiliary channel is [`AuxChannelU::adder_symmetric`](crate::dmc::AuxChannelU::adder_symmetric).

use serde::{Deserialize, Serialize};

use crate::entropy::{binary_conv as conv, binary_entropy as h2, inverse_binary_entropy as h2inv, Prob};
use crate::error::{Error, Result};
use crate::optim::{bisect_last_true, golden_max};
use crate::report::BoundReport;

const P_TOL: f64 = 1e-12;

/// Bit-pipe capacities ordered so that `c1 ≤ c2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdderNet {
    pub c1: f64,
    pub c2: f64,
}

impl AdderNet {
    pub fn new(c1: f64, c2: f64) -> Result<Self> {
        if !(c1.is_finite() && c2.is_finite() && c1 >= 0.0 && c2 >= 0.0) {
            return Err(Error::Domain(format!("bit-pipe capacities ({c1}, {c2}) must be finite and >= 0")));
        }
        Ok(AdderNet { c1: c1.min(c2), c2: c1.max(c2) })
    }

    pub fn symmetric(c: f64) -> Result<Self> {
        AdderNet::new(c, c)
    }

    pub fn sum(&self) -> f64 {
        self.c1 + self.c2
    }

    /// Crossing point `2 − C1 − C2` of the sum-rate and full-cooperation terms.
    pub fn eta(&self) -> f64 {
        2.0 - self.sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdderConstants {
    /// `1 / (1 + √2)`.
    pub p1: f64,
    /// Crossing of `h2(p) + 1 − p` with `(C1 + C2)/2 + h2(p) − p/2`.
    pub p3: f64,
    pub eta: f64,
}

pub fn adder_constants(net: &AdderNet) -> AdderConstants {
    AdderConstants { p1: 1.0 / (1.0 + 2f64.sqrt()), p3: 2.0 - net.sum(), eta: net.eta() }
}

fn g0(net: &AdderNet, p: f64) -> f64 {
    net.sum() - 1.0 + h2(p)
}
fn g2(net: &AdderNet, p: f64) -> f64 {
    net.c1 + h2(p)
}
fn g3(p: f64) -> f64 {
    h2(p) + 1.0 - p
}
fn g4(net: &AdderNet, p: f64) -> f64 {
    0.5 * net.sum() + h2(p) - 0.5 * p
}

fn lower_min(net: &AdderNet, p: f64) -> f64 {
    g0(net, p).min(g2(net, p)).min(g3(p))
}

/// Achievable rate with a doubly symmetric input and no common message.
pub fn adder_lower(net: &AdderNet, p: Prob) -> BoundReport {
    let p = p.value();
    let r = BoundReport::from_constraints([
        ("C1+C2-1+h2(p)", g0(net, p)),
        ("C1+h2(p)", g2(net, p)),
        ("h2(p)+1-p", g3(p)),
    ]);
    let v = r.value.max(0.0);
    r.with_value(v).with_witness("p", vec![p])
}

fn maximize_on_half(f: impl Fn(f64) -> f64) -> (f64, f64) {
    golden_max(f, 0.0, 0.5, 1e-12)
}

/// Capacity: the best doubly symmetric lower bound, which meets the converse.
pub fn adder_capacity(net: &AdderNet) -> BoundReport {
    let (p, _) = maximize_on_half(|p| lower_min(net, p));
    let regime = if net.c2 >= 1.0 {
        "cut-set (C2>=1)"
    } else if net.sum() >= 5.0 / 3.0 {
        "full cooperation (p=1/3)"
    } else if net.sum() <= 1.5 {
        "no cooperation (p=1/2)"
    } else {
        "crossing (p=eta)"
    };
    adder_lower(net, Prob::new(p).expect("p in [0, 1/2]")).with_regime(regime)
}

/// Cut-set bound under doubly symmetric inputs.
pub fn adder_cutset(net: &AdderNet) -> BoundReport {
    let f = |p: f64| net.sum().min(g2(net, p)).min(g3(p));
    let (p, _) = maximize_on_half(f);
    BoundReport::from_constraints([("C1+C2", net.sum()), ("C1+h2(p)", g2(net, p)), ("h2(p)+1-p", g3(p))])
        .with_witness("p", vec![p])
        .with_regime("cut-set")
}

/// Converse from the symmetric auxiliary channel with the Markov choice of
/// its crossover.
pub fn adder_upper_cor2(net: &AdderNet) -> BoundReport {
    let f = |p: f64| net.sum().min(g2(net, p)).min(g3(p)).min(g4(net, p));
    let (p, _) = maximize_on_half(f);
    BoundReport::from_constraints([
        ("C1+C2", net.sum()),
        ("C1+h2(p)", g2(net, p)),
        ("h2(p)+1-p", g3(p)),
        ("(C1+C2)/2+h2(p)-p/2", g4(net, p)),
    ])
    .with_witness("p", vec![p])
}

/// Crossover `α ≤ ½` with `α(1 − α) = (p / (2(1 − p)))²`.
pub fn adder_aux_alpha(p: Prob) -> Result<Prob> {
    let p = p.value();
    if p > 0.5 + P_TOL {
        return Err(Error::Domain(format!("auxiliary crossover needs p <= 1/2, got {p}")));
    }
    Prob::new(alpha_for(p))
}

fn alpha_for(p: f64) -> f64 {
    let p = p.clamp(0.0, 0.5);
    let k = (p / (2.0 * (1.0 - p))).powi(2);
    0.5 * (1.0 - (1.0 - 4.0 * k).max(0.0).sqrt())
}

/// `I(X1;X2|U)` for a doubly symmetric input with parameter `p` and the
/// symmetric auxiliary channel with crossover `α`.
pub fn mi_given_u(p: Prob, alpha: Prob) -> f64 {
    let (p, a) = (p.value(), alpha.value());
    2.0 * h2(conv(a, p / 2.0)) - (1.0 - p) * h2(a) - h2(p) - p
}

/// `H(U | X1)` for an arbitrary input pmf `[p00, p01, p10, p11]` and the
/// symmetric auxiliary channel.
pub fn h_u_given_x1(pxx: &[f64; 4], alpha: f64) -> f64 {
    let [p00, p01, p10, p11] = *pxx;
    let mut h = 0.0;
    // X1 = 0: U = 0 from Y = 0 w.p. 1 − α, from Y = 1 w.p. ½
    let m0 = p00 + p01;
    if m0 > 0.0 {
        h += m0 * h2((p00 * (1.0 - alpha) + p01 / 2.0) / m0);
    }
    let m1 = p10 + p11;
    if m1 > 0.0 {
        h += m1 * h2((p11 * (1.0 - alpha) + p10 / 2.0) / m1);
    }
    h
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=0.5 + P_TOL).contains(&alpha) {
        return Err(Error::Domain(format!("crossover {alpha} outside [0, 1/2]")));
    }
    Ok(())
}

/// `h2(α⋆(y/2 + (1−y) h2⁻¹((x − h2(y))⁺ / (1−y)))) − h2(α⋆(y/2))`, jointly
/// convex in `(x, y)`. At `y = 1` the inner ratio is taken as 0.
pub fn gerber_g(x: f64, y: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::Domain(format!("y = {y} outside [0, 1]")));
    }
    let x_max = 1.0 + h2(y) - y;
    if !(x >= -P_TOL && x <= x_max + 1e-9) {
        return Err(Error::Domain(format!("x = {x} outside [0, {x_max}]")));
    }
    Ok(gerber_unchecked(x, y, alpha))
}

fn gerber_unchecked(x: f64, y: f64, alpha: f64) -> f64 {
    let ratio = if y >= 1.0 { 0.0 } else { ((x - h2(y)).max(0.0) / (1.0 - y)).min(1.0) };
    h2(conv(alpha, y / 2.0 + (1.0 - y) * h2inv(ratio))) - h2(conv(alpha, y / 2.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GerberKernels {
    pub r: f64,
    pub r_prime: f64,
    pub t: f64,
    /// `t(0, y, z) / ((1−y)² (1−2z)⁴)`; `None` at `z = ½`, where it is 0/0.
    pub f: Option<f64>,
}

/// `r(x) = x(1−x) ln((1−x)/x)`.
pub fn kernel_r(x: f64) -> f64 {
    x * (1.0 - x) * ((1.0 - x) / x).ln()
}

/// `r'(x) = (1−2x) ln((1−x)/x) − 1`.
pub fn kernel_r_prime(x: f64) -> f64 {
    (1.0 - 2.0 * x) * ((1.0 - x) / x).ln() - 1.0
}

fn kernel_t(alpha: f64, y: f64, z: f64) -> f64 {
    let s = conv(alpha, y / 2.0 + (1.0 - y) * z);
    let (rs, rz) = (kernel_r(s), kernel_r(z));
    let d = 1.0 - 2.0 * alpha;
    let w = (1.0 - y) * (1.0 - y);
    -0.25 * y * w * ((1.0 - z) / z).ln() * rz + rs * rs / (d * d) - w * rs * rz / d
}

/// Kernels of the convexity certificate. Requires `0 ≤ α < ½`, `0 ≤ y < 1`
/// and `0 < z ≤ ½`; the boundary values where a kernel is singular are
/// rejected.
pub fn gerber_kernels(alpha: f64, y: f64, z: f64) -> Result<GerberKernels> {
    if !(0.0..0.5).contains(&alpha) {
        return Err(Error::Singular(format!("crossover {alpha} must lie in [0, 1/2)")));
    }
    if !(0.0..1.0).contains(&y) {
        return Err(Error::Singular(format!("y = {y} must lie in [0, 1)")));
    }
    if !(z > 0.0 && z <= 0.5) {
        return Err(Error::Singular(format!("z = {z} must lie in (0, 1/2]")));
    }
    let denom = (1.0 - y).powi(2) * (1.0 - 2.0 * z).powi(4);
    let f = if z < 0.5 && denom > 0.0 { Some(kernel_t(0.0, y, z) / denom) } else { None };
    Ok(GerberKernels { r: kernel_r(z), r_prime: kernel_r_prime(z), t: kernel_t(alpha, y, z), f })
}

/// How the auxiliary crossover is chosen in the time-sharing converse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AlphaStrategy {
    /// The Markov choice at `η = 2 − C1 − C2`; falls back to a grid when `η`
    /// leaves `[0, ½]`.
    Analytic { fallback_step: f64 },
    /// Minimum over a uniform grid on `[0, ½]`, refined by golden section.
    Grid { step: f64 },
}

impl Default for AlphaStrategy {
    fn default() -> Self {
        AlphaStrategy::Analytic { fallback_step: 1e-3 }
    }
}

/// `H(U|Q)` lower bound used inside the time-sharing converse.
#[derive(Debug, Clone, Copy, PartialEq)]
enum EntropyBound {
    Generalized,
    Classical,
}

fn g5(net: &AdderNet, q: f64, alpha: f64, inner: f64, kind: EntropyBound) -> f64 {
    let h_u_q = match kind {
        EntropyBound::Generalized => h2(conv(alpha, q / 2.0 + (1.0 - q) * inner)),
        EntropyBound::Classical => h2(conv(alpha, inner)),
    };
    net.sum() - h_u_q - (1.0 - q) * h2(alpha) - q + 2.0 * h2(conv(alpha, q / 2.0))
}

fn inner_arg(r: f64, q: f64, kind: EntropyBound) -> f64 {
    match kind {
        EntropyBound::Generalized => {
            if q >= 1.0 {
                0.0
            } else {
                h2inv(((r - h2(q)).max(0.0) / (1.0 - q)).min(1.0))
            }
        }
        EntropyBound::Classical => h2inv((r - h2(q) + q).clamp(0.0, 1.0)),
    }
}

/// Whether `R ≤ min_α g5(R, q, α)` for the candidate crossovers.
fn admissible(net: &AdderNet, r: f64, q: f64, alphas: &AlphaSet, kind: EntropyBound) -> bool {
    let z = inner_arg(r, q, kind);
    let f = |a: f64| g5(net, q, a, z, kind);
    match alphas {
        AlphaSet::Single(a) => r <= f(*a),
        AlphaSet::Grid(step) => {
            let n = (0.5 / step).round() as usize;
            let mut best = (f64::INFINITY, 0usize);
            for i in 0..=n {
                let v = f((i as f64 * step).min(0.5));
                if v < r {
                    return false;
                }
                if v < best.0 {
                    best = (v, i);
                }
            }
            let lo = (best.1 as f64 - 1.0).max(0.0) * step;
            let hi = ((best.1 as f64 + 1.0) * step).min(0.5);
            let (_, refined) = golden_max(|a| -f(a), lo, hi, 1e-9);
            r <= -refined
        }
    }
}

enum AlphaSet {
    Single(f64),
    Grid(f64),
}

fn fixed_point(net: &AdderNet, q: f64, alphas: &AlphaSet, kind: EntropyBound) -> f64 {
    if !admissible(net, 0.0, q, alphas, kind) {
        return 0.0;
    }
    bisect_last_true(|r| admissible(net, r, q, alphas, kind), 0.0, net.sum(), 100)
}

fn time_sharing_bound(net: &AdderNet, alphas: AlphaSet, kind: EntropyBound, label: &str) -> BoundReport {
    let outer = |q: f64| net.sum().min(g2(net, q)).min(g3(q));
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    let eval = |q: f64, best: &mut (f64, f64, f64)| -> f64 {
        let o = outer(q);
        if o <= best.0 {
            return o;
        }
        let fp = fixed_point(net, q, &alphas, kind);
        let v = o.min(fp);
        if v > best.0 {
            *best = (v, q, fp);
        }
        v
    };
    // the maximizer of the outer terms first, so that pruning bites early
    let (q0, _) = golden_max(outer, 0.0, 0.5, 1e-12);
    eval(q0, &mut best);
    let mut breaks = vec![0.0, 1.0 / 3.0, 0.5, 1.0, q0];
    let cap = adder_capacity(net).value;
    if cap > 1.0 && cap < 3f64.log2() {
        let left = bisect_last_true(|q| g3(q) <= cap, 0.0, 1.0 / 3.0, 100);
        let right = bisect_last_true(|q| g3(q) >= cap, 1.0 / 3.0, 1.0, 100);
        breaks.extend([left, right]);
    }
    let grid_n = 200;
    let mut grid: Vec<f64> = (0..=grid_n).map(|i| i as f64 / grid_n as f64).chain(breaks).collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let values: Vec<f64> = grid.iter().map(|&q| eval(q, &mut best)).collect();
    // refine around the best grid points
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    for &i in order.iter().take(3) {
        let lo = if i > 0 { grid[i - 1] } else { grid[i] };
        let hi = if i + 1 < grid.len() { grid[i + 1] } else { grid[i] };
        if hi > lo {
            golden_max(|q| eval(q, &mut best), lo, hi, 1e-11);
        }
    }
    let (_, q, fp) = best;
    BoundReport::from_constraints([("C1+C2", net.sum()), ("C1+h2(q)", g2(net, q)), ("h2(q)+1-q", g3(q)), (label, fp)])
        .with_witness("q", vec![q])
}

/// Converse from time sharing with the generalized entropy bound; the
/// implicit constraint is solved by bisection in the rate.
pub fn adder_upper_thm3(net: &AdderNet, strategy: AlphaStrategy) -> BoundReport {
    let eta = net.eta();
    let (alphas, regime) = match strategy {
        AlphaStrategy::Analytic { fallback_step } => {
            if (0.0..=0.5).contains(&eta) {
                (AlphaSet::Single(alpha_for(eta)), "analytic alpha")
            } else {
                (AlphaSet::Grid(fallback_step), "alpha grid")
            }
        }
        AlphaStrategy::Grid { step } => (AlphaSet::Grid(step), "alpha grid"),
    };
    let alpha = match alphas {
        AlphaSet::Single(a) => vec![a],
        AlphaSet::Grid(_) => vec![],
    };
    time_sharing_bound(net, alphas, EntropyBound::Generalized, "g5(R,q,alpha)")
        .with_witness("alpha", alpha)
        .with_regime(regime)
}

/// The same converse with the classical entropy bound in place of the
/// generalized one.
pub fn adder_upper_mgl(net: &AdderNet, alpha_step: f64) -> BoundReport {
    time_sharing_bound(net, AlphaSet::Grid(alpha_step), EntropyBound::Classical, "g5-classical(R,q,alpha)")
        .with_regime("alpha grid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: f64) -> Prob {
        Prob::new(v).unwrap()
    }

    #[test]
    fn lower_examples() {
        let net = AdderNet::symmetric(0.75).unwrap();
        assert!((adder_lower(&net, p(0.5)).value - 1.5).abs() < 1e-12);
        let zero = adder_lower(&AdderNet::symmetric(0.3).unwrap(), p(0.0));
        assert_eq!(zero.value, 0.0);
        let r = adder_lower(&AdderNet::symmetric(0.8).unwrap(), p(0.4));
        assert!((r.value - 1.570_950_594_454_669).abs() < 1e-9);
    }

    #[test]
    fn capacity_regimes() {
        let r = adder_capacity(&AdderNet::symmetric(2.0).unwrap());
        assert!((r.value - 3f64.log2()).abs() < 1e-9);
        let r = adder_capacity(&AdderNet::symmetric(0.7).unwrap());
        assert!((r.value - 1.4).abs() < 1e-9);
        assert_eq!(r.regime, "no cooperation (p=1/2)");
        // C1 + C2 = 1.8 >= 5/3: the unconstrained maximizer p = 1/3 is feasible
        let r = adder_capacity(&AdderNet::symmetric(0.9).unwrap());
        assert!((r.value - 3f64.log2()).abs() < 1e-9);
        let r = adder_capacity(&AdderNet::symmetric(0.78).unwrap());
        assert!((r.value - (0.56 + h2(0.44))).abs() < 1e-9);
        assert_eq!(r.regime, "crossing (p=eta)");
    }

    #[test]
    fn cor2_examples() {
        assert!((adder_upper_cor2(&AdderNet::symmetric(0.7).unwrap()).value - 1.4).abs() < 1e-9);
        let c = AdderNet::symmetric(0.85).unwrap();
        assert!((adder_upper_cor2(&c).value - adder_capacity(&c).value).abs() < 1e-4);
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(adder_aux_alpha(p(0.0)).unwrap().value(), 0.0);
        assert!((adder_aux_alpha(p(0.5)).unwrap().value() - 0.5).abs() < 1e-12);
        let a = adder_aux_alpha(p(0.4)).unwrap();
        assert!((a.value() - (1.0 - (5.0f64 / 9.0).sqrt()) / 2.0).abs() < 1e-12);
        assert!((a.value() - 0.127322).abs() < 1e-6);
        assert!(mi_given_u(p(0.4), a).abs() < 1e-10);
        assert!(adder_aux_alpha(p(0.6)).is_err());
    }

    #[test]
    fn mi_given_u_examples() {
        assert!(mi_given_u(p(0.5), p(0.5)).abs() < 1e-12);
        assert!((mi_given_u(p(0.0), p(0.2)) - h2(0.2)).abs() < 1e-12);
        assert!((h2(0.2) - 0.721928).abs() < 1e-6);
    }

    #[test]
    fn gerber_examples() {
        let a = 0.2;
        for x in [0.1, 0.5, 0.9] {
            let classical = h2(conv(a, h2inv(x))) - h2(a);
            assert!((gerber_g(x, 0.0, a).unwrap() - classical).abs() < 1e-12);
        }
        assert_eq!(gerber_g(0.3, 0.3, a).unwrap(), 0.0);
        for y in [0.0, 0.2, 0.7, 1.0] {
            let top = 1.0 + h2(y) - y;
            let want = 1.0 - h2(conv(a, y / 2.0));
            assert!((gerber_g(top, y, a).unwrap() - want).abs() < 1e-9, "y={y}");
        }
        assert!(gerber_g(0.5, 1.2, a).is_err());
        assert!(gerber_g(2.0, 0.5, a).is_err());
        assert!(gerber_g(0.5, 0.5, 0.7).is_err());
    }

    #[test]
    fn kernel_examples() {
        let k = gerber_kernels(0.2, 0.3, 0.5).unwrap();
        assert_eq!(k.r, 0.0);
        assert_eq!(k.r_prime, -1.0);
        assert!(k.t.abs() < 1e-15);
        assert!(k.f.is_none());
        assert!(gerber_kernels(0.5, 0.3, 0.2).is_err());
        assert!(gerber_kernels(0.2, 1.0, 0.2).is_err());
        assert!(gerber_kernels(0.2, 0.3, 0.0).is_err());
        assert!(gerber_kernels(0.2, 0.3, 0.2).unwrap().f.is_some());
    }

    #[test]
    fn time_sharing_examples() {
        let r = adder_upper_thm3(&AdderNet::symmetric(0.8).unwrap(), AlphaStrategy::default());
        assert!((r.value - 1.570_950_594_454_669).abs() < 1e-4, "{}", r.value);
        let net = AdderNet::symmetric(0.78).unwrap();
        let r = adder_upper_thm3(&net, AlphaStrategy::default());
        assert!((r.value - adder_capacity(&net).value).abs() < 1e-3);
        let net = AdderNet::new(0.3, 1.2).unwrap();
        let r = adder_upper_thm3(&net, AlphaStrategy::default());
        assert!((r.value - adder_cutset(&net).value).abs() < 1e-6);
    }
}
