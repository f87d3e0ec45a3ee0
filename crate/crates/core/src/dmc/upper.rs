//! Converse bounds: cut-set, the auxiliary-channel bound and its
//! time-sharing refinement.

use super::{AuxChannelU, BitPipes, MacChannel, TimeShareQ};
use crate::error::{Error, Result};
use crate::optim::{optimize_min_terms, Sense, SimplexConfig};
use crate::pmf::JointTable;
use crate::report::BoundReport;

pub const CUTSET_LABELS: [&str; 4] = ["C1+C2", "C1+I(X2;Y|X1)", "C2+I(X1;Y|X2)", "I(X1X2;Y)"];
pub const THM2_AUX_LABEL: &str = "(C1+C2+I(X1X2;Y|U)+I(X1;U|X2)+I(X2;U|X1))/2";
pub const THM3_LABELS: [&str; 5] =
    ["C1+C2", "C1+I(X2;Y|X1Q)", "C2+I(X1;Y|X2Q)", "I(X1X2;Y|Q)", "C1+C2-I(X1X2;U|Q)+I(X2;U|X1Q)+I(X1;U|X2Q)"];

fn check_input(mac: &MacChannel, pxx: &[f64]) -> Result<()> {
    if pxx.len() != mac.input_size() {
        return Err(Error::Dimension(format!("input pmf has {} entries, channel needs {}", pxx.len(), mac.input_size())));
    }
    Ok(())
}

fn check_aux(mac: &MacChannel, aux: &AuxChannelU) -> Result<()> {
    if aux.y_size != mac.y_size {
        return Err(Error::Dimension(format!("aux channel input {} does not match |Y| = {}", aux.y_size, mac.y_size)));
    }
    Ok(())
}

/// Cut-set terms at a fixed `p(x1, x2)`.
pub fn cutset_terms(mac: &MacChannel, pipes: &BitPipes, pxx: &[f64]) -> Result<[f64; 4]> {
    check_input(mac, pxx)?;
    Ok(cutset_terms_unchecked(mac, pipes, pxx))
}

fn cutset_terms_unchecked(mac: &MacChannel, pipes: &BitPipes, pxx: &[f64]) -> [f64; 4] {
    let t = JointTable::new(&[mac.x1_size, mac.x2_size, mac.y_size], &mac.joint_with(pxx));
    let (x1, x2, y) = (1, 2, 4);
    [pipes.sum(), pipes.c1 + t.cmi(x2, y, x1), pipes.c2 + t.cmi(x1, y, x2), t.cmi(x1 | x2, y, 0)]
}

fn joint_xyu(mac: &MacChannel, pxx: &[f64], aux_w: &[f64], u_size: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(pxx.len() * mac.y_size * u_size);
    for (i, &m) in pxx.iter().enumerate() {
        let (x1, x2) = (i / mac.x2_size, i % mac.x2_size);
        for (y, &py) in mac.row(x1, x2).iter().enumerate() {
            for u in 0..u_size {
                out.push(m * py * aux_w[y * u_size + u]);
            }
        }
    }
    out
}

/// The auxiliary-channel term alone, for a flat `p(u|y)` matrix.
fn thm2_aux_term(mac: &MacChannel, pipes: &BitPipes, pxx: &[f64], aux_w: &[f64], u_size: usize) -> f64 {
    let t = JointTable::new(&[mac.x1_size, mac.x2_size, mac.y_size, u_size], &joint_xyu(mac, pxx, aux_w, u_size));
    let (x1, x2, y, u) = (1, 2, 4, 8);
    0.5 * (pipes.sum() + t.cmi(x1 | x2, y, u) + t.cmi(x1, u, x2) + t.cmi(x2, u, x1))
}

/// All five terms of the auxiliary-channel bound at a fixed `p(x1, x2)`.
pub fn thm2_terms(mac: &MacChannel, pipes: &BitPipes, pxx: &[f64], aux: &AuxChannelU) -> Result<[f64; 5]> {
    check_input(mac, pxx)?;
    check_aux(mac, aux)?;
    let c = cutset_terms_unchecked(mac, pipes, pxx);
    Ok([c[0], c[1], c[2], c[3], thm2_aux_term(mac, pipes, pxx, aux.matrix(), aux.u_size)])
}

/// Five terms of the time-sharing bound for a joint `p(q, x1, x2)` stored
/// with `x2` fastest.
pub fn thm3_terms(mac: &MacChannel, pipes: &BitPipes, q_size: usize, pqxx: &[f64], aux: &AuxChannelU) -> Result<[f64; 5]> {
    check_aux(mac, aux)?;
    if q_size == 0 || q_size > TimeShareQ::MAX_SIZE || pqxx.len() != q_size * mac.input_size() {
        return Err(Error::Dimension(format!("time-sharing joint has {} entries for |Q| = {q_size}", pqxx.len())));
    }
    Ok(thm3_terms_unchecked(mac, pipes, q_size, pqxx, aux))
}

fn thm3_terms_unchecked(mac: &MacChannel, pipes: &BitPipes, q_size: usize, pqxx: &[f64], aux: &AuxChannelU) -> [f64; 5] {
    let k = mac.input_size();
    let mut full = Vec::with_capacity(pqxx.len() * mac.y_size * aux.u_size);
    for q in 0..q_size {
        full.extend(joint_xyu(mac, &pqxx[q * k..(q + 1) * k], aux.matrix(), aux.u_size));
    }
    let t = JointTable::new(&[q_size, mac.x1_size, mac.x2_size, mac.y_size, aux.u_size], &full);
    let (q, x1, x2, y, u) = (1, 2, 4, 8, 16);
    let c = pipes.sum();
    [
        c,
        pipes.c1 + t.cmi(x2, y, x1 | q),
        pipes.c2 + t.cmi(x1, y, x2 | q),
        t.cmi(x1 | x2, y, q),
        c - t.cmi(x1 | x2, u, q) + t.cmi(x2, u, x1 | q) + t.cmi(x1, u, x2 | q),
    ]
}

/// `|I(X1;X2) − [I(X1X2;U) − I(X1;U|X2) − I(X2;U|X1) + I(X1;X2|U)]|` for a
/// pmf over `(X1, X2, U)` stored with `u` fastest.
pub fn mi_identity_residual(x1_size: usize, x2_size: usize, u_size: usize, mass: &[f64]) -> Result<f64> {
    if mass.len() != x1_size * x2_size * u_size || mass.is_empty() {
        return Err(Error::Dimension("pmf does not match the declared sizes".into()));
    }
    crate::pmf::FinitePmf::new(mass.to_vec())?;
    let t = JointTable::new(&[x1_size, x2_size, u_size], mass);
    let (x1, x2, u) = (1, 2, 4);
    let rhs = t.cmi(x1 | x2, u, 0) - t.cmi(x1, u, x2) - t.cmi(x2, u, x1) + t.cmi(x1, x2, u);
    Ok((t.cmi(x1, x2, 0) - rhs).abs())
}

#[derive(Debug, Clone)]
pub struct UpperConfig {
    /// Auxiliary alphabet size; defaults to `|Y|`.
    pub u_size: Option<usize>,
    pub q_size: usize,
    /// Optimizer for the maximization over input distributions.
    pub outer: SimplexConfig,
    /// Optimizer for the minimization over auxiliary channels.
    pub inner: SimplexConfig,
    /// Cutting-plane rounds of the max-min search.
    pub rounds: usize,
}

impl Default for UpperConfig {
    fn default() -> Self {
        UpperConfig {
            u_size: None,
            q_size: TimeShareQ::MAX_SIZE,
            outer: SimplexConfig::default(),
            inner: SimplexConfig { restarts: 32, ..SimplexConfig::quick() },
            rounds: 6,
        }
    }
}

impl UpperConfig {
    pub fn quick() -> Self {
        UpperConfig {
            outer: SimplexConfig::quick(),
            inner: SimplexConfig { restarts: 8, ..SimplexConfig::quick() },
            rounds: 4,
            ..Default::default()
        }
    }
}

/// Maximizes the cut-set bound over `p(x1, x2)`.
pub fn cutset_bound(mac: &MacChannel, pipes: &BitPipes, cfg: &SimplexConfig) -> Result<BoundReport> {
    let k = mac.input_size();
    let terms = |p: &[f64]| cutset_terms_unchecked(mac, pipes, p).to_vec();
    let best = optimize_min_terms(&[k], &terms, &[vec![1.0 / k as f64; k]], Sense::MaxMin, cfg);
    let t = cutset_terms_unchecked(mac, pipes, &best.point);
    Ok(BoundReport::from_constraints(CUTSET_LABELS.iter().copied().zip(t))
        .with_witness("p_x1_x2", best.point)
        .with_regime("cut-set"))
}

/// Matrix of `aux` padded with zero columns to `u_size` outputs.
fn padded(aux: &AuxChannelU, u_size: usize) -> Option<Vec<f64>> {
    if aux.u_size > u_size {
        return None;
    }
    let mut w = vec![0.0; aux.y_size * u_size];
    for y in 0..aux.y_size {
        for u in 0..aux.u_size {
            w[y * u_size + u] = aux.prob(y, u);
        }
    }
    Some(w)
}

fn structured_aux(y_size: usize, u_size: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let mut cands = vec![AuxChannelU::identity(y_size), AuxChannelU::erasing(y_size)];
    if y_size == 3 {
        cands.extend((0..=10).map(|i| AuxChannelU::adder_symmetric(0.05 * i as f64)));
    }
    for c in &cands {
        if let Some(w) = padded(c, u_size) {
            out.push(w);
        }
    }
    out
}

/// Max over `p(x1, x2)` of min over `p(u|y)` of the auxiliary-channel bound.
///
/// Cutting-plane search: keep a finite set of auxiliary channels, maximize
/// the bound against all of them (a concave problem), then search for a
/// channel that lowers the bound at the maximizer and add it. The reported
/// value is the max over inputs against the final set, which is an upper
/// bound whenever the outer maximization is exact; `saddle` is the best
/// inner minimum found at the final maximizer.
pub fn upper_bound_thm2(mac: &MacChannel, pipes: &BitPipes, cfg: &UpperConfig) -> Result<BoundReport> {
    let k = mac.input_size();
    let y_size = mac.y_size;
    let u_size = cfg.u_size.unwrap_or(y_size);
    if u_size == 0 || u_size > y_size + 4 {
        return Err(Error::Dimension(format!("|U| = {u_size} outside 1..={}", y_size + 4)));
    }
    let mut set: Vec<Vec<f64>> = structured_aux(y_size, u_size);
    let mut p_star = vec![1.0 / k as f64; k];
    let mut outer_value = f64::INFINITY;
    let mut inner_value = f64::NEG_INFINITY;
    let mut inner_w = set[0].clone();
    for _ in 0..cfg.rounds.max(1) {
        let outer_terms = |p: &[f64]| {
            let mut t = cutset_terms_unchecked(mac, pipes, p).to_vec();
            t.extend(set.iter().map(|w| thm2_aux_term(mac, pipes, p, w, u_size)));
            t
        };
        let starts = vec![vec![1.0 / k as f64; k], p_star.clone()];
        let best = optimize_min_terms(&[k], &outer_terms, &starts, Sense::MaxMin, &cfg.outer);
        p_star = best.point;
        outer_value = best.value;

        let p_ref = &p_star;
        let inner_terms = |w: &[f64]| vec![thm2_aux_term(mac, pipes, p_ref, w, u_size)];
        let blocks = vec![u_size; y_size];
        let found = optimize_min_terms(&blocks, &inner_terms, &set, Sense::MinMin, &cfg.inner);
        let cut = cutset_terms_unchecked(mac, pipes, &p_star);
        inner_value = cut.iter().copied().fold(found.value, f64::min);
        inner_w = found.point.clone();
        if inner_value >= outer_value - 1e-7 {
            break;
        }
        set.push(found.point);
    }
    let aux = AuxChannelU::new(y_size, u_size, inner_w.clone())?;
    let terms = thm2_terms(mac, pipes, &p_star, &aux)?;
    let mut labels: Vec<&str> = CUTSET_LABELS.to_vec();
    labels.push(THM2_AUX_LABEL);
    let gap = outer_value - inner_value;
    Ok(BoundReport::from_constraints(labels.into_iter().zip(terms))
        .with_value(outer_value)
        .with_witness("p_x1_x2", p_star)
        .with_witness("p_u_given_y", inner_w)
        .with_witness("saddle", vec![inner_value])
        .with_witness("aux_set_size", vec![set.len() as f64])
        .with_regime("max-min")
        .with_certified(gap <= 1e-6))
}

/// Max over `p(q, x1, x2)` of the time-sharing bound for a fixed auxiliary
/// channel (the order in which `|Q| ≤ 4` suffices).
pub fn upper_bound_thm3_loose(mac: &MacChannel, pipes: &BitPipes, aux: &AuxChannelU, cfg: &UpperConfig) -> Result<BoundReport> {
    check_aux(mac, aux)?;
    let q_size = cfg.q_size;
    if q_size == 0 || q_size > TimeShareQ::MAX_SIZE {
        return Err(Error::Dimension(format!("|Q| = {q_size} outside 1..=4")));
    }
    let k = mac.input_size();
    let n = q_size * k;
    let terms = |p: &[f64]| thm3_terms_unchecked(mac, pipes, q_size, p, aux).to_vec();
    let mut constant_q = vec![0.0; n];
    constant_q[..k].iter_mut().for_each(|v| *v = 1.0 / k as f64);
    let starts = vec![constant_q, vec![1.0 / n as f64; n]];
    let best = optimize_min_terms(&[n], &terms, &starts, Sense::MaxMin, &cfg.outer);
    let t = thm3_terms_unchecked(mac, pipes, q_size, &best.point, aux);
    let mut pxx = vec![0.0; k];
    for (i, m) in best.point.iter().enumerate() {
        pxx[i % k] += m;
    }
    let mut q_given_x = vec![0.0; k * q_size];
    for i in 0..k {
        for q in 0..q_size {
            q_given_x[i * q_size + q] = if pxx[i] > 0.0 { best.point[q * k + i] / pxx[i] } else { 1.0 / q_size as f64 };
        }
    }
    Ok(BoundReport::from_constraints(THM3_LABELS.iter().copied().zip(t))
        .with_witness("p_x1_x2", pxx)
        .with_witness("p_q_given_x1x2", q_given_x)
        .with_witness("p_q_x1_x2", best.point)
        .with_regime("fixed-aux"))
}
