//! Feasibility of the rate-split system by Fourier-Motzkin elimination.

use serde::{Deserialize, Serialize};

use super::lower::region_informations;
use super::{BitPipes, MacChannel, RateTuple};
use crate::error::Result;
use crate::pmf::Joint3Pmf;

const COEF_EPS: f64 = 1e-14;

/// `a · x ≤ b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ineq {
    pub a: Vec<f64>,
    pub b: f64,
}

impl Ineq {
    pub fn new(a: Vec<f64>, b: f64) -> Self {
        Ineq { a, b }
    }

    fn normalized(mut self) -> Self {
        let s = self.a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if s > COEF_EPS {
            self.a.iter_mut().for_each(|v| *v /= s);
            self.b /= s;
        }
        for v in &mut self.a {
            if v.abs() <= COEF_EPS {
                *v = 0.0;
            }
        }
        self
    }
}

/// Eliminates variable `j` from the system.
pub fn eliminate(rows: &[Ineq], j: usize) -> Vec<Ineq> {
    let mut out: Vec<Ineq> = Vec::new();
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for r in rows {
        if r.a[j] > COEF_EPS {
            pos.push(r);
        } else if r.a[j] < -COEF_EPS {
            neg.push(r);
        } else {
            let mut keep = r.clone();
            keep.a[j] = 0.0;
            out.push(keep);
        }
    }
    for p in &pos {
        for q in &neg {
            let (sp, sq) = (-q.a[j], p.a[j]);
            let a: Vec<f64> = p.a.iter().zip(&q.a).map(|(x, y)| sp * x + sq * y).collect();
            let mut row = Ineq::new(a, sp * p.b + sq * q.b);
            row.a[j] = 0.0;
            out.push(row.normalized());
        }
    }
    // drop exact duplicates and rows dominated by an identical left side
    out.sort_by(|x, y| {
        x.a.iter().zip(&y.a).map(|(u, v)| u.total_cmp(v)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal).then(x.b.total_cmp(&y.b))
    });
    out.dedup_by(|later, earlier| later.a == earlier.a);
    out
}

/// Decides `A x ≤ b` by eliminating every variable; returns a point when
/// feasible. Constant rows may be violated by at most `tol`.
pub fn solve(n: usize, rows: Vec<Ineq>, tol: f64) -> Option<Vec<f64>> {
    let mut stages = vec![rows];
    for j in 0..n {
        let next = eliminate(stages.last().unwrap(), j);
        stages.push(next);
    }
    if stages[n].iter().any(|r| r.b < -tol) {
        return None;
    }
    let mut x = vec![0.0; n];
    for j in (0..n).rev() {
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for r in &stages[j] {
            let aj = r.a[j];
            if aj.abs() <= COEF_EPS {
                continue;
            }
            let rest: f64 = ((j + 1)..n).map(|k| r.a[k] * x[k]).sum();
            let bound = (r.b - rest) / aj;
            if aj > 0.0 {
                hi = hi.min(bound);
            } else {
                lo = lo.max(bound);
            }
        }
        x[j] = match (lo.is_finite(), hi.is_finite()) {
            (true, true) if lo <= hi => 0.5 * (lo + hi),
            (true, true) => 0.5 * (lo + hi),
            (true, false) => lo,
            (false, true) => hi,
            (false, false) => 0.0,
        };
    }
    Some(x)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FmeOutcome {
    pub feasible: bool,
    pub witness: Option<RateTuple>,
    /// Largest constraint violation of the witness (0 when none).
    pub max_violation: f64,
}

/// Rate-split constraints in the variables `(R12, R1, R2, R1', R2')`, with
/// strict inequalities closed.
pub fn rate_split_system(rate: f64, info: &[f64; 5], pipes: &BitPipes) -> Vec<Ineq> {
    let [i0, i1, i2, iu, iy] = *info;
    let row = |a: [f64; 5], b: f64| Ineq::new(a.to_vec(), b);
    let mut rows = vec![
        row([0.0, 0.0, 0.0, -1.0, -1.0], -i0),
        row([1.0, 1.0, 0.0, 1.0, 0.0], pipes.c1),
        row([1.0, 0.0, 1.0, 0.0, 1.0], pipes.c2),
        row([1.0, 1.0, 1.0, 1.0, 1.0], iy + i0),
        row([0.0, 1.0, 1.0, 1.0, 1.0], iu + i0),
        row([0.0, 0.0, 1.0, 0.0, 1.0], i2 + i0),
        row([0.0, 1.0, 0.0, 1.0, 0.0], i1 + i0),
        row([1.0, 1.0, 1.0, 0.0, 0.0], rate),
        row([-1.0, -1.0, -1.0, 0.0, 0.0], -rate),
    ];
    for j in 0..5 {
        let mut a = [0.0; 5];
        a[j] = -1.0;
        rows.push(row(a, 0.0));
    }
    rows
}

fn max_violation(rows: &[Ineq], x: &[f64]) -> f64 {
    rows.iter()
        .map(|r| r.a.iter().zip(x).map(|(a, v)| a * v).sum::<f64>() - r.b)
        .fold(0.0, f64::max)
}

/// Whether `rate` admits a rate split for the given input distribution.
pub fn pre_fme_feasible(rate: f64, joint: &Joint3Pmf, mac: &MacChannel, pipes: &BitPipes) -> Result<FmeOutcome> {
    // dimension checks are shared with the region evaluator
    super::lower::lower_terms(joint, mac, pipes)?;
    let info = region_informations(joint.u_size, joint.mass(), mac);
    Ok(feasible_for_informations(rate, &info, pipes))
}

pub(crate) fn feasible_for_informations(rate: f64, info: &[f64; 5], pipes: &BitPipes) -> FmeOutcome {
    let rows = rate_split_system(rate, info, pipes);
    match solve(5, rows.clone(), 1e-12) {
        Some(x) => {
            let xs: Vec<f64> = x.iter().map(|v| v.max(0.0)).collect();
            let witness = RateTuple { r12: xs[0], r1: xs[1], r2: xs[2], r1p: xs[3], r2p: xs[4] };
            FmeOutcome { feasible: true, witness: Some(witness), max_violation: max_violation(&rows, &xs) }
        }
        None => FmeOutcome { feasible: false, witness: None, max_violation: 0.0 },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dmc::lower_region_value;

    #[test]
    fn small_system() {
        // x + y <= 1, x >= 0.4, y >= 0.4
        let rows = vec![
            Ineq::new(vec![1.0, 1.0], 1.0),
            Ineq::new(vec![-1.0, 0.0], -0.4),
            Ineq::new(vec![0.0, -1.0], -0.4),
        ];
        let x = solve(2, rows.clone(), 1e-12).unwrap();
        assert!(max_violation(&rows, &x) <= 1e-12);
        let mut tight = rows;
        tight[0].b = 0.7;
        assert!(solve(2, tight, 1e-12).is_none());
    }

    #[test]
    fn threshold_matches_region_value() {
        let mac = MacChannel::binary_adder();
        let joint = Joint3Pmf::new(2, 2, 2, vec![0.2, 0.1, 0.05, 0.15, 0.05, 0.1, 0.1, 0.25]).unwrap();
        let pipes = BitPipes::new(0.6, 0.8).unwrap();
        let v = lower_region_value(&joint, &mac, &pipes).unwrap().value;
        let below = pre_fme_feasible(v - 1e-9, &joint, &mac, &pipes).unwrap();
        assert!(below.feasible && below.max_violation <= 1e-9);
        assert!(!pre_fme_feasible(v + 1e-6, &joint, &mac, &pipes).unwrap().feasible);
        let zero = pre_fme_feasible(0.0, &joint, &mac, &BitPipes::symmetric(1.0).unwrap()).unwrap();
        assert!(zero.feasible);
    }
}
