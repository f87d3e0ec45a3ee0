//! Achievable rates from superposition and Marton coding.

use super::{BitPipes, MacChannel};
use crate::error::{Error, Result};
use crate::optim::{optimize_min_terms, Sense, SimplexConfig};
use crate::pmf::{Joint3Pmf, JointTable};
use crate::report::BoundReport;

pub const LOWER_LABELS: [&str; 5] =
    ["C1+C2-I(X1;X2|U)", "C2+I(X1;Y|X2U)", "C1+I(X2;Y|X1U)", "(C1+C2+I(X1X2;Y|U)-I(X1;X2|U))/2", "I(X1X2;Y)"];

// variable masks in the (U, X1, X2, Y) table
const U: usize = 1;
const X1: usize = 2;
const X2: usize = 4;
const Y: usize = 8;

/// Largest `|U|` allowed for the given channel.
pub fn u_cap(mac: &MacChannel) -> usize {
    (mac.input_size() + 3).min(mac.y_size + 4)
}

/// The information quantities entering the region, in the order
/// `[I(X1;X2|U), I(X1;Y|X2U), I(X2;Y|X1U), I(X1X2;Y|U), I(X1X2;Y)]`.
pub(crate) fn region_informations(u_size: usize, mass_ux: &[f64], mac: &MacChannel) -> [f64; 5] {
    let k = mac.input_size();
    let mut full = Vec::with_capacity(mass_ux.len() * mac.y_size);
    for u in 0..u_size {
        full.extend(mac.joint_with(&mass_ux[u * k..(u + 1) * k]));
    }
    let t = JointTable::new(&[u_size, mac.x1_size, mac.x2_size, mac.y_size], &full);
    [
        t.cmi(X1, X2, U),
        t.cmi(X1, Y, X2 | U),
        t.cmi(X2, Y, X1 | U),
        t.cmi(X1 | X2, Y, U),
        t.cmi(X1 | X2, Y, 0),
    ]
}

pub(crate) fn terms_from_informations(info: &[f64; 5], pipes: &BitPipes) -> [f64; 5] {
    let [i0, i1, i2, iu, iy] = *info;
    let c = pipes.sum();
    [c - i0, pipes.c2 + i1, pipes.c1 + i2, 0.5 * (c + iu - i0), iy]
}

fn check_dims(joint: &Joint3Pmf, mac: &MacChannel) -> Result<()> {
    if joint.x1_size != mac.x1_size || joint.x2_size != mac.x2_size {
        return Err(Error::Dimension(format!(
            "joint input alphabet {}x{} does not match channel {}x{}",
            joint.x1_size, joint.x2_size, mac.x1_size, mac.x2_size
        )));
    }
    if joint.u_size > u_cap(mac) {
        return Err(Error::Dimension(format!("|U| = {} exceeds the cap {}", joint.u_size, u_cap(mac))));
    }
    Ok(())
}

/// Five right-hand sides of the achievable region for a fixed `p(u, x1, x2)`.
pub fn lower_terms(joint: &Joint3Pmf, mac: &MacChannel, pipes: &BitPipes) -> Result<[f64; 5]> {
    check_dims(joint, mac)?;
    let info = region_informations(joint.u_size, joint.mass(), mac);
    Ok(terms_from_informations(&info, pipes))
}

pub fn lower_region_value(joint: &Joint3Pmf, mac: &MacChannel, pipes: &BitPipes) -> Result<BoundReport> {
    let terms = lower_terms(joint, mac, pipes)?;
    Ok(BoundReport::from_constraints(LOWER_LABELS.iter().copied().zip(terms))
        .with_value(terms.iter().copied().fold(f64::INFINITY, f64::min).max(0.0))
        .with_witness("p_u_x1_x2", joint.mass().to_vec()))
}

#[derive(Debug, Clone, Default)]
pub struct LowerConfig {
    /// Auxiliary alphabet size; defaults to `|Y| + 4` capped by `|X1||X2| + 3`.
    pub u_size: Option<usize>,
    pub simplex: SimplexConfig,
}

fn structured_starts(u_size: usize, mac: &MacChannel) -> Vec<Vec<f64>> {
    let k = mac.input_size();
    let n = u_size * k;
    let mut starts = vec![vec![1.0 / n as f64; n]];
    // U constant, inputs independent and uniform
    let mut constant = vec![0.0; n];
    constant[..k].iter_mut().for_each(|v| *v = 1.0 / k as f64);
    starts.push(constant);
    // U determines the input pair
    if u_size >= k {
        let mut coop = vec![0.0; n];
        for i in 0..k {
            coop[i * k + i] = 1.0 / k as f64;
        }
        starts.push(coop);
    }
    starts
}

/// Maximizes the region value over `p(u, x1, x2)`. Any returned value is
/// achievable; optimality is heuristic.
pub fn lower_bound_optimize(mac: &MacChannel, pipes: &BitPipes, cfg: &LowerConfig) -> Result<BoundReport> {
    let u_size = cfg.u_size.unwrap_or_else(|| u_cap(mac));
    if u_size == 0 || u_size > u_cap(mac) {
        return Err(Error::Dimension(format!("|U| = {u_size} outside 1..={}", u_cap(mac))));
    }
    let n = u_size * mac.input_size();
    let terms = |p: &[f64]| -> Vec<f64> {
        terms_from_informations(&region_informations(u_size, p, mac), pipes).to_vec()
    };
    let best = optimize_min_terms(&[n], &terms, &structured_starts(u_size, mac), Sense::MaxMin, &cfg.simplex);
    let joint = Joint3Pmf::from_unnormalized(u_size, mac.x1_size, mac.x2_size, best.point)?;
    Ok(lower_region_value(&joint, mac, pipes)?.with_regime("heuristic-max").with_certified(false))
}
