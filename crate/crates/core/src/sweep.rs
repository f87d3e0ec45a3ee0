//! Parameter sweeps over bit-pipe capacities, written as CSV.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adder::{adder_capacity, adder_cutset, adder_upper_cor2, adder_upper_thm3, AdderNet, AlphaStrategy};
use crate::error::{Error, Result};
use crate::gaussian::{
    gauss_cutset, gauss_lower_best, gauss_regime, gauss_upper_cor1, gauss_upper_thm3, GaussianNet, LowerModes,
    MixtureConfig,
};

pub const CSV_HEADER: &str = "C1,C2,lower_jg,lower_best,upper_cutset,upper_thm2,upper_thm3,capacity,regime,binding";

/// Allowed excess of the lower column over any upper column.
pub const SANDWICH_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub c1: f64,
    pub c2: f64,
    pub lower_jg: f64,
    pub lower_best: f64,
    pub upper_cutset: f64,
    /// Auxiliary-channel converse (Markov-choice auxiliary for the
    /// closed-form families).
    pub upper_thm2: f64,
    pub upper_thm3: f64,
    pub capacity: Option<f64>,
    pub regime: String,
    pub binding: String,
}

impl CsvRow {
    pub fn min_upper(&self) -> f64 {
        self.upper_cutset.min(self.upper_thm2).min(self.upper_thm3)
    }

    fn to_line(&self) -> String {
        let cap = self.capacity.map(sig9).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            sig9(self.c1),
            sig9(self.c2),
            sig9(self.lower_jg),
            sig9(self.lower_best),
            sig9(self.upper_cutset),
            sig9(self.upper_thm2),
            sig9(self.upper_thm3),
            cap,
            csv_field(&self.regime),
            csv_field(&self.binding)
        )
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Nine significant digits, fixed notation, no trailing zeros.
pub fn sig9(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v.is_finite() { "0".into() } else { format!("{v}") };
    }
    let mag = v.abs().log10().floor() as i32;
    let decimals = (8 - mag).max(0) as usize;
    let mut s = format!("{v:.decimals$}");
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

pub fn to_csv(rows: &[CsvRow]) -> String {
    let mut out = String::new();
    writeln!(out, "{CSV_HEADER}").expect("string write");
    for r in rows {
        writeln!(out, "{}", r.to_line()).expect("string write");
    }
    out
}

/// Range of capacities `c_min, c_min + step, .., c_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub c_min: f64,
    pub c_max: f64,
    pub step: f64,
}

impl Grid {
    pub fn points(&self) -> Result<Vec<f64>> {
        let Grid { c_min, c_max, step } = *self;
        if !(c_min.is_finite() && c_max.is_finite() && step.is_finite()) {
            return Err(Error::Config("grid bounds must be finite".into()));
        }
        if step <= 0.0 {
            return Err(Error::Config(format!("step {step} must be positive")));
        }
        if c_max < c_min || c_min < 0.0 {
            return Err(Error::Config(format!("empty or negative range [{c_min}, {c_max}]")));
        }
        let count = ((c_max - c_min) / step + 1e-9).floor() as usize + 1;
        Ok((0..count).map(|i| c_min + i as f64 * step).collect())
    }
}

fn check_sandwich(rows: &[CsvRow]) -> Result<()> {
    for r in rows {
        if r.lower_best > r.min_upper() + SANDWICH_TOL {
            return Err(Error::Verification(format!(
                "lower bound {} exceeds upper bound {} at C1={}, C2={}",
                r.lower_best,
                r.min_upper(),
                r.c1,
                r.c2
            )));
        }
    }
    Ok(())
}

/// Pairs `(C1, C2)`: symmetric when `c2` is `None`, else `C2` held fixed.
fn pairs(grid: &Grid, c2: Option<f64>) -> Result<Vec<(f64, f64)>> {
    if let Some(c) = c2 {
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::Config(format!("C2 = {c} must be finite and >= 0")));
        }
    }
    Ok(grid.points()?.into_iter().map(|c| (c, c2.unwrap_or(c))).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianSweep {
    pub power: f64,
    pub grid: Grid,
    pub c2: Option<f64>,
    pub modes: LowerModes,
}

pub fn sweep_gaussian(spec: &GaussianSweep) -> Result<Vec<CsvRow>> {
    let pts = pairs(&spec.grid, spec.c2)?;
    let nets: Vec<GaussianNet> =
        pts.iter().map(|&(a, b)| GaussianNet::new(spec.power, spec.power, a, b)).collect::<Result<_>>()?;
    let mix = MixtureConfig::default();
    let jg_only = LowerModes { jointly_gaussian: true, full_coop: false, two_mixture: false };
    let rows: Vec<CsvRow> = nets
        .par_iter()
        .map(|net| {
            let jg = gauss_lower_best(net, jg_only, &mix);
            let best = gauss_lower_best(net, spec.modes, &mix);
            let thm3 = gauss_upper_thm3(net);
            let regime = gauss_regime(net);
            CsvRow {
                c1: net.c1,
                c2: net.c2,
                lower_jg: jg.value,
                lower_best: best.value,
                upper_cutset: gauss_cutset(net).value,
                upper_thm2: gauss_upper_cor1(net).value,
                upper_thm3: thm3.value,
                capacity: regime.matching.then_some(best.value),
                regime: regime.label,
                binding: thm3.binding_label(),
            }
        })
        .collect();
    check_sandwich(&rows)?;
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdderSweep {
    pub grid: Grid,
    pub c2: Option<f64>,
}

pub fn sweep_adder(spec: &AdderSweep) -> Result<Vec<CsvRow>> {
    let pts = pairs(&spec.grid, spec.c2)?;
    let rows: Vec<CsvRow> = pts
        .par_iter()
        .map(|&(a, b)| -> Result<CsvRow> {
            let net = AdderNet::new(a, b)?;
            let cap = adder_capacity(&net);
            let thm3 = adder_upper_thm3(&net, AlphaStrategy::default());
            Ok(CsvRow {
                c1: a,
                c2: b,
                lower_jg: cap.value,
                lower_best: cap.value,
                upper_cutset: adder_cutset(&net).value,
                upper_thm2: adder_upper_cor2(&net).value,
                upper_thm3: thm3.value,
                capacity: Some(cap.value),
                regime: cap.regime.clone(),
                binding: thm3.binding_label(),
            })
        })
        .collect::<Result<_>>()?;
    check_sandwich(&rows)?;
    Ok(rows)
}
