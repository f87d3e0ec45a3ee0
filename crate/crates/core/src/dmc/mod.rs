//! Bounds for diamond networks with a finite-alphabet MAC.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod fme;
pub mod lower;
pub mod upper;

pub use fme::{pre_fme_feasible, FmeOutcome};
pub use lower::{lower_bound_optimize, lower_region_value, LowerConfig};
pub use upper::{
    cutset_bound, cutset_terms, mi_identity_residual, thm2_terms, thm3_terms, upper_bound_thm2,
    upper_bound_thm3_loose, UpperConfig,
};

/// Row-sum tolerance for channels read from JSON.
pub const JSON_ROW_TOL: f64 = 1e-9;

/// A MAC `p(y | x1, x2)`; `p` is stored as `[(x1 * x2_size + x2) * y_size + y]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MacJson", into = "MacJson")]
pub struct MacChannel {
    pub x1_size: usize,
    pub x2_size: usize,
    pub y_size: usize,
    p: Vec<f64>,
}

/// On-disk channel format: `p_y_given_x1x2[x1][x2][y]`.
#[derive(Clone, Serialize, Deserialize)]
pub struct MacJson {
    x1_size: usize,
    x2_size: usize,
    y_size: usize,
    p_y_given_x1x2: Vec<Vec<Vec<f64>>>,
}

fn normalize_rows(rows: &mut [f64], width: usize, tol: f64, what: &str) -> Result<()> {
    for (r, row) in rows.chunks_mut(width).enumerate() {
        if row.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidPmf(format!("{what} row {r} has a negative or non-finite entry")));
        }
        let s: f64 = row.iter().sum();
        if (s - 1.0).abs() > tol {
            return Err(Error::InvalidPmf(format!("{what} row {r} sums to {s}")));
        }
        for v in row.iter_mut() {
            *v /= s;
        }
    }
    Ok(())
}

impl MacChannel {
    /// `p` is indexed `[(x1 * x2_size + x2) * y_size + y]`; rows must sum to 1 within 1e-12.
    pub fn new(x1_size: usize, x2_size: usize, y_size: usize, mut p: Vec<f64>) -> Result<Self> {
        if x1_size == 0 || x2_size == 0 || y_size == 0 {
            return Err(Error::Dimension("alphabet sizes must be positive".into()));
        }
        if p.len() != x1_size * x2_size * y_size {
            return Err(Error::Dimension(format!(
                "transition table has {} entries, expected {}",
                p.len(),
                x1_size * x2_size * y_size
            )));
        }
        normalize_rows(&mut p, y_size, 1e-12, "channel")?;
        Ok(MacChannel { x1_size, x2_size, y_size, p })
    }

    /// `Y = X1 + X2` over binary inputs.
    pub fn binary_adder() -> Self {
        let mut p = vec![0.0; 12];
        for x1 in 0..2 {
            for x2 in 0..2 {
                p[(x1 * 2 + x2) * 3 + x1 + x2] = 1.0;
            }
        }
        MacChannel { x1_size: 2, x2_size: 2, y_size: 3, p }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        MacChannel::try_from(serde_json::from_str::<MacJson>(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&MacJson::from(self.clone())).expect("channel serializes")
    }

    #[inline]
    pub fn row(&self, x1: usize, x2: usize) -> &[f64] {
        let o = (x1 * self.x2_size + x2) * self.y_size;
        &self.p[o..o + self.y_size]
    }

    pub fn input_size(&self) -> usize {
        self.x1_size * self.x2_size
    }

    /// Joint `p(x1, x2, y)` for an input pmf `p(x1, x2)`.
    pub fn joint_with(&self, pxx: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(pxx.len() * self.y_size);
        for (i, &m) in pxx.iter().enumerate() {
            let o = i * self.y_size;
            out.extend(self.p[o..o + self.y_size].iter().map(|w| w * m));
        }
        out
    }
}

impl TryFrom<MacJson> for MacChannel {
    type Error = Error;
    fn try_from(raw: MacJson) -> Result<Self> {
        if raw.p_y_given_x1x2.len() != raw.x1_size
            || raw.p_y_given_x1x2.iter().any(|r| r.len() != raw.x2_size || r.iter().any(|c| c.len() != raw.y_size))
        {
            return Err(Error::Dimension("p_y_given_x1x2 does not match the declared sizes".into()));
        }
        let mut flat: Vec<f64> = raw.p_y_given_x1x2.into_iter().flatten().flatten().collect();
        if raw.y_size == 0 || flat.is_empty() {
            return Err(Error::Dimension("alphabet sizes must be positive".into()));
        }
        normalize_rows(&mut flat, raw.y_size, JSON_ROW_TOL, "channel")?;
        MacChannel::new(raw.x1_size, raw.x2_size, raw.y_size, flat)
    }
}

impl From<MacChannel> for MacJson {
    fn from(m: MacChannel) -> MacJson {
        let nested = (0..m.x1_size)
            .map(|a| (0..m.x2_size).map(|b| m.row(a, b).to_vec()).collect())
            .collect();
        MacJson { x1_size: m.x1_size, x2_size: m.x2_size, y_size: m.y_size, p_y_given_x1x2: nested }
    }
}

/// Bit-pipe capacities of the broadcast hop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BitPipes {
    pub c1: f64,
    pub c2: f64,
}

impl BitPipes {
    pub fn new(c1: f64, c2: f64) -> Result<Self> {
        if !(c1.is_finite() && c2.is_finite() && c1 >= 0.0 && c2 >= 0.0) {
            return Err(Error::Domain(format!("bit-pipe capacities ({c1}, {c2}) must be finite and >= 0")));
        }
        Ok(BitPipes { c1, c2 })
    }

    pub fn symmetric(c: f64) -> Result<Self> {
        BitPipes::new(c, c)
    }

    pub fn sum(&self) -> f64 {
        self.c1 + self.c2
    }
}

/// Auxiliary channel `p(u | y)`, stored as rows indexed by `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxChannelU {
    pub u_size: usize,
    pub y_size: usize,
    w: Vec<f64>,
}

impl AuxChannelU {
    pub fn new(y_size: usize, u_size: usize, mut w: Vec<f64>) -> Result<Self> {
        if u_size == 0 || y_size == 0 || w.len() != u_size * y_size {
            return Err(Error::Dimension(format!("aux channel of {} entries is not {y_size} x {u_size}", w.len())));
        }
        if u_size > y_size + 4 {
            return Err(Error::Dimension(format!("|U| = {u_size} exceeds |Y| + 4")));
        }
        normalize_rows(&mut w, u_size, 1e-12, "aux channel")?;
        Ok(AuxChannelU { u_size, y_size, w })
    }

    /// `U = Y`.
    pub fn identity(y_size: usize) -> Self {
        let mut w = vec![0.0; y_size * y_size];
        for y in 0..y_size {
            w[y * y_size + y] = 1.0;
        }
        AuxChannelU { u_size: y_size, y_size, w }
    }

    /// `U` independent of `Y` (a single output symbol).
    pub fn erasing(y_size: usize) -> Self {
        AuxChannelU { u_size: 1, y_size, w: vec![1.0; y_size] }
    }

    /// The symmetric binary-output channel on a ternary `Y`: the outer
    /// symbols pass through a BSC with crossover `alpha`, the middle symbol
    /// maps to a fair coin.
    pub fn adder_symmetric(alpha: f64) -> Self {
        let a = alpha.clamp(0.0, 1.0);
        AuxChannelU { u_size: 2, y_size: 3, w: vec![1.0 - a, a, 0.5, 0.5, a, 1.0 - a] }
    }

    #[inline]
    pub fn prob(&self, y: usize, u: usize) -> f64 {
        self.w[y * self.u_size + u]
    }

    pub fn matrix(&self) -> &[f64] {
        &self.w
    }
}

/// Time-sharing channel `p(q | x1, x2)`, rows indexed by `x1 * x2_size + x2`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeShareQ {
    pub q_size: usize,
    w: Vec<f64>,
}

impl TimeShareQ {
    pub const MAX_SIZE: usize = 4;

    pub fn new(q_size: usize, mut w: Vec<f64>) -> Result<Self> {
        if q_size == 0 || q_size > Self::MAX_SIZE || w.is_empty() || !w.len().is_multiple_of(q_size) {
            return Err(Error::Dimension(format!("time-sharing alphabet {q_size} must lie in 1..=4")));
        }
        normalize_rows(&mut w, q_size, 1e-12, "time-sharing channel")?;
        Ok(TimeShareQ { q_size, w })
    }

    pub fn matrix(&self) -> &[f64] {
        &self.w
    }
}

/// Rate split of the source message.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateTuple {
    pub r12: f64,
    pub r1: f64,
    pub r2: f64,
    pub r1p: f64,
    pub r2p: f64,
}

impl RateTuple {
    pub fn total(&self) -> f64 {
        self.r12 + self.r1 + self.r2
    }

    pub fn as_array(&self) -> [f64; 5] {
        [self.r12, self.r1, self.r2, self.r1p, self.r2p]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_schema_roundtrip_and_validation() {
        let mac = MacChannel::binary_adder();
        let text = mac.to_json();
        assert_eq!(MacChannel::from_json(&text).unwrap(), mac);
        let bad = r#"{"x1_size":1,"x2_size":1,"y_size":2,"p_y_given_x1x2":[[[0.5,0.6]]]}"#;
        assert!(MacChannel::from_json(bad).is_err());
        let near = r#"{"x1_size":1,"x2_size":1,"y_size":2,"p_y_given_x1x2":[[[0.5,0.5000000001]]]}"#;
        assert!(MacChannel::from_json(near).is_ok());
        let shape = r#"{"x1_size":2,"x2_size":1,"y_size":2,"p_y_given_x1x2":[[[0.5,0.5]]]}"#;
        assert!(MacChannel::from_json(shape).is_err());
    }

    #[test]
    fn aux_cardinality_cap() {
        assert!(AuxChannelU::new(2, 7, vec![1.0 / 7.0; 14]).is_err());
        assert!(AuxChannelU::new(2, 6, vec![1.0 / 6.0; 12]).is_ok());
        assert!(TimeShareQ::new(5, vec![0.2; 5]).is_err());
        assert!(BitPipes::new(-0.1, 1.0).is_err());
    }
}
