//! Monte-Carlo simulation of the superposition + mutual-covering scheme at
//! short blocklengths.
//!
//! Typicality is strong: every cell of the empirical joint type must lie
//! within `ε·p` of its probability, so zero-probability cells must be empty.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dmc::{MacChannel, RateTuple};
use crate::error::{Error, Result};
use crate::optim::stream_rng;
use crate::pmf::{Joint3Pmf, JointTable};

/// Below this `I(X1;X2|U)` the inputs are conditionally independent and any
/// pair in a bin will do.
const INDEPENDENT_TOL: f64 = 1e-12;

/// Smallest slack for which the error falls over n = 8, 12, 16 on the adder.
fn default_epsilon() -> f64 {
    0.75
}
fn default_budget() -> u64 {
    1 << 26
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n: usize,
    pub rates: RateTuple,
    pub joint: Joint3Pmf,
    pub mac: MacChannel,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    pub trials: u64,
    pub seed: u64,
    /// Cap on stored codeword symbols.
    #[serde(default = "default_budget")]
    pub max_symbols: u64,
}

impl SimConfig {
    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("blocklength must be >= 1".into()));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::Config(format!("typicality slack {} must be positive", self.epsilon)));
        }
        if self.rates.as_array().iter().any(|r| !(*r >= 0.0 && r.is_finite())) {
            return Err(Error::Config("rates must be finite and >= 0".into()));
        }
        if self.joint.x1_size != self.mac.x1_size || self.joint.x2_size != self.mac.x2_size {
            return Err(Error::Dimension("joint pmf and channel input alphabets differ".into()));
        }
        // re-validate masses that came in through serde
        Joint3Pmf::new(self.joint.u_size, self.joint.x1_size, self.joint.x2_size, self.joint.mass().to_vec())?;
        Ok(())
    }

    fn count(&self, rate: f64) -> f64 {
        (2f64.powf(self.n as f64 * rate) + 1e-9).floor().max(1.0)
    }

    /// `(m12, m1, m1', m2, m2')` codebook dimensions.
    pub fn sizes(&self) -> Result<[usize; 5]> {
        self.validate()?;
        let r = &self.rates;
        let dims = [self.count(r.r12), self.count(r.r1), self.count(r.r1p), self.count(r.r2), self.count(r.r2p)];
        let symbols = self.n as f64 * dims[0] * (1.0 + dims[1] * dims[2] + dims[3] * dims[4]);
        if symbols > self.max_symbols as f64 {
            return Err(Error::Budget(format!(
                "codebook needs {symbols:.3e} symbols, budget is {}",
                self.max_symbols
            )));
        }
        Ok(dims.map(|d| d as usize))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    Codebook = 1,
    Message = 2,
    Channel = 3,
}

fn rng_for(seed: u64, role: Role, index: u64) -> ChaCha8Rng {
    stream_rng(seed, ((role as u64) << 56) | index)
}

fn sample(cdf: &[f64], rng: &mut impl Rng) -> u8 {
    let x: f64 = rng.gen();
    cdf.iter().position(|c| x < *c).unwrap_or(cdf.len() - 1) as u8
}

fn cumulative(p: &[f64]) -> Vec<f64> {
    let total: f64 = p.iter().sum();
    let mut acc = 0.0;
    p.iter()
        .map(|v| {
            acc += v / total;
            acc
        })
        .collect()
}

/// Strong typicality test against one pmf over a product alphabet.
#[derive(Debug, Clone)]
struct TypicalSet {
    pmf: Vec<f64>,
    eps: f64,
}

impl TypicalSet {
    fn accepts(&self, cells: impl Iterator<Item = usize>, n: usize, counts: &mut Vec<u32>) -> bool {
        counts.clear();
        counts.resize(self.pmf.len(), 0);
        for c in cells {
            counts[c] += 1;
        }
        let n = n as f64;
        self.pmf
            .iter()
            .zip(counts.iter())
            .all(|(p, &k)| (k as f64 / n - p).abs() <= self.eps * p + 1e-12)
    }
}

/// All sequences plus the pair chosen in each bin.
#[derive(Debug, Clone)]
pub struct Codebook {
    pub n: usize,
    /// `(m12, m1, m1', m2, m2')`.
    pub sizes: [usize; 5],
    u: Vec<u8>,
    x1: Vec<u8>,
    x2: Vec<u8>,
    /// Per bin `(m12, m1, m2)`: chosen `(m1', m2')`.
    chosen: Vec<(u32, u32)>,
    covered: Vec<bool>,
    /// Set when the covering test was skipped because `X1 ⊥ X2 | U`.
    pub covering_vacuous: bool,
}

impl Codebook {
    fn u_seq(&self, m12: usize) -> &[u8] {
        &self.u[m12 * self.n..(m12 + 1) * self.n]
    }
    fn x1_seq(&self, m12: usize, m1: usize, m1p: usize) -> &[u8] {
        let [_, a, ap, _, _] = self.sizes;
        let i = (m12 * a + m1) * ap + m1p;
        &self.x1[i * self.n..(i + 1) * self.n]
    }
    fn x2_seq(&self, m12: usize, m2: usize, m2p: usize) -> &[u8] {
        let [_, _, _, b, bp] = self.sizes;
        let i = (m12 * b + m2) * bp + m2p;
        &self.x2[i * self.n..(i + 1) * self.n]
    }
    fn bin(&self, m12: usize, m1: usize, m2: usize) -> usize {
        let [_, a, _, b, _] = self.sizes;
        (m12 * a + m1) * b + m2
    }

    pub fn num_bins(&self) -> usize {
        self.chosen.len()
    }

    pub fn covering_failures(&self) -> usize {
        self.covered.iter().filter(|c| !**c).count()
    }

    /// The stored pair of one bin and whether it was found typical.
    pub fn stored_pair(&self, m12: usize, m1: usize, m2: usize) -> (&[u8], &[u8], &[u8], bool) {
        let b = self.bin(m12, m1, m2);
        let (p1, p2) = self.chosen[b];
        (self.u_seq(m12), self.x1_seq(m12, m1, p1 as usize), self.x2_seq(m12, m2, p2 as usize), self.covered[b])
    }
}

struct Tables {
    dims: [usize; 4],
    /// `(u, x1, x2, y)`.
    full: TypicalSet,
    /// `(u, x1, x2)`.
    inputs: TypicalSet,
    uy: TypicalSet,
    ux1y: TypicalSet,
    ux2y: TypicalSet,
}

fn tables(cfg: &SimConfig) -> Tables {
    let (nu, n1, n2, ny) = (cfg.joint.u_size, cfg.mac.x1_size, cfg.mac.x2_size, cfg.mac.y_size);
    let mut full = vec![0.0; nu * n1 * n2 * ny];
    let mut uy = vec![0.0; nu * ny];
    let mut ux1y = vec![0.0; nu * n1 * ny];
    let mut ux2y = vec![0.0; nu * n2 * ny];
    for u in 0..nu {
        for a in 0..n1 {
            for b in 0..n2 {
                let m = cfg.joint.at(u, a, b);
                for (y, w) in cfg.mac.row(a, b).iter().enumerate() {
                    let v = m * w;
                    full[((u * n1 + a) * n2 + b) * ny + y] += v;
                    uy[u * ny + y] += v;
                    ux1y[(u * n1 + a) * ny + y] += v;
                    ux2y[(u * n2 + b) * ny + y] += v;
                }
            }
        }
    }
    let eps = cfg.epsilon;
    let set = |pmf: Vec<f64>| TypicalSet { pmf, eps };
    Tables {
        dims: [nu, n1, n2, ny],
        full: set(full),
        inputs: set(cfg.joint.mass().to_vec()),
        uy: set(uy),
        ux1y: set(ux1y),
        ux2y: set(ux2y),
    }
}

/// Draws the codebook and runs the covering step in every bin.
pub fn build_codebook(cfg: &SimConfig) -> Result<Codebook> {
    let sizes = cfg.sizes()?;
    let [m12, m1, m1p, m2, m2p] = sizes;
    let n = cfg.n;
    let j = &cfg.joint;
    let (nu, n1, n2) = (j.u_size, j.x1_size, j.x2_size);
    let mut pu = vec![0.0; nu];
    let mut pu1 = vec![0.0; nu * n1];
    let mut pu2 = vec![0.0; nu * n2];
    for u in 0..nu {
        for a in 0..n1 {
            for b in 0..n2 {
                let m = j.at(u, a, b);
                pu[u] += m;
                pu1[u * n1 + a] += m;
                pu2[u * n2 + b] += m;
            }
        }
    }
    let cdf_u = cumulative(&pu);
    let cdf_1: Vec<Vec<f64>> = (0..nu).map(|u| cumulative(&pu1[u * n1..(u + 1) * n1])).collect();
    let cdf_2: Vec<Vec<f64>> = (0..nu).map(|u| cumulative(&pu2[u * n2..(u + 1) * n2])).collect();

    let mut rng = rng_for(cfg.seed, Role::Codebook, 0);
    let u: Vec<u8> = (0..m12 * n).map(|_| sample(&cdf_u, &mut rng)).collect();
    let mut x1 = Vec::with_capacity(m12 * m1 * m1p * n);
    for w in 0..m12 {
        for _ in 0..m1 * m1p {
            for l in 0..n {
                x1.push(sample(&cdf_1[u[w * n + l] as usize], &mut rng));
            }
        }
    }
    let mut x2 = Vec::with_capacity(m12 * m2 * m2p * n);
    for w in 0..m12 {
        for _ in 0..m2 * m2p {
            for l in 0..n {
                x2.push(sample(&cdf_2[u[w * n + l] as usize], &mut rng));
            }
        }
    }

    let info = JointTable::new(&[nu, n1, n2], j.mass());
    let covering_vacuous = info.cmi(2, 4, 1) <= INDEPENDENT_TOL;
    let mut book = Codebook {
        n,
        sizes,
        u,
        x1,
        x2,
        chosen: vec![(0, 0); m12 * m1 * m2],
        covered: vec![covering_vacuous; m12 * m1 * m2],
        covering_vacuous,
    };
    if !covering_vacuous {
        let t = tables(cfg);
        let mut counts = Vec::new();
        for w in 0..m12 {
            let us = book.u_seq(w).to_vec();
            for a in 0..m1 {
                for b in 0..m2 {
                    let found = (0..m1p).flat_map(|p| (0..m2p).map(move |q| (p, q))).find(|&(p, q)| {
                        let s1 = book.x1_seq(w, a, p);
                        let s2 = book.x2_seq(w, b, q);
                        let cells = (0..n).map(|l| (us[l] as usize * n1 + s1[l] as usize) * n2 + s2[l] as usize);
                        t.inputs.accepts(cells, n, &mut counts)
                    });
                    let bin = book.bin(w, a, b);
                    if let Some((p, q)) = found {
                        book.chosen[bin] = (p as u32, q as u32);
                        book.covered[bin] = true;
                    }
                }
            }
        }
    }
    Ok(book)
}

/// Whether the stored pair of a bin passes the covering test it was picked by.
pub fn stored_pair_typical(cfg: &SimConfig, book: &Codebook, m12: usize, m1: usize, m2: usize) -> bool {
    let t = tables(cfg);
    let (us, s1, s2, _) = book.stored_pair(m12, m1, m2);
    let [_, n1, n2, _] = t.dims;
    let cells = (0..book.n).map(|l| (us[l] as usize * n1 + s1[l] as usize) * n2 + s2[l] as usize);
    t.inputs.accepts(cells, book.n, &mut Vec::new())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventCounts {
    pub errors: u64,
    /// No typical tuple in the transmitted bin.
    pub e1: u64,
    /// A typical tuple with a wrong common index.
    pub e2_common: u64,
    /// Right common index, both private indices wrong.
    pub e2_both: u64,
    /// Only the second private index wrong.
    pub e2_second: u64,
    /// Only the first private index wrong.
    pub e2_first: u64,
    /// Trials whose bin failed the covering step.
    pub covering: u64,
}

impl EventCounts {
    fn add(self, o: EventCounts) -> EventCounts {
        EventCounts {
            errors: self.errors + o.errors,
            e1: self.e1 + o.e1,
            e2_common: self.e2_common + o.e2_common,
            e2_both: self.e2_both + o.e2_both,
            e2_second: self.e2_second + o.e2_second,
            e2_first: self.e2_first + o.e2_first,
            covering: self.covering + o.covering,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EventRates {
    pub e1: f64,
    pub e2_common: f64,
    pub e2_both: f64,
    pub e2_second: f64,
    pub e2_first: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimOutcome {
    pub n: usize,
    pub epsilon: f64,
    pub typicality: String,
    pub seed: u64,
    pub trials: u64,
    pub sizes: [usize; 5],
    pub error_estimate: f64,
    /// Half-width of the 95% Wilson interval.
    pub wilson_radius: f64,
    /// Fraction of bins with no typical pair.
    pub covering_failure_rate: f64,
    pub covering_vacuous: bool,
    pub breakdown: EventRates,
    pub counts: EventCounts,
}

pub fn wilson_radius(successes: u64, trials: u64) -> f64 {
    if trials == 0 {
        return 1.0;
    }
    let z = 1.959_963_984_540_054_f64;
    let t = trials as f64;
    let p = successes as f64 / t;
    z / (1.0 + z * z / t) * (p * (1.0 - p) / t + z * z / (4.0 * t * t)).sqrt()
}

fn one_trial(cfg: &SimConfig, book: &Codebook, t: &Tables, trial: u64) -> EventCounts {
    let [m12s, m1s, m1ps, m2s, m2ps] = book.sizes;
    let n = book.n;
    let [_, n1, n2, ny] = t.dims;
    let mut rng = rng_for(cfg.seed, Role::Message, trial);
    let msg = (rng.gen_range(0..m12s), rng.gen_range(0..m1s), rng.gen_range(0..m2s));
    let (_, s1, s2, covered) = book.stored_pair(msg.0, msg.1, msg.2);
    let mut rng = rng_for(cfg.seed, Role::Channel, trial);
    let cdfs: Vec<Vec<f64>> =
        (0..n1 * n2).map(|i| cumulative(cfg.mac.row(i / n2, i % n2))).collect();
    let y: Vec<u8> = (0..n).map(|l| sample(&cdfs[s1[l] as usize * n2 + s2[l] as usize], &mut rng)).collect();

    let mut counts = Vec::new();
    let mut out = EventCounts { covering: u64::from(!covered), ..Default::default() };
    let mut found_true = false;
    let mut wrong = [false; 4];
    for w in 0..m12s {
        let u = book.u_seq(w);
        if !t.uy.accepts((0..n).map(|l| u[l] as usize * ny + y[l] as usize), n, &mut counts) {
            continue;
        }
        let mut list1 = Vec::new();
        for a in 0..m1s {
            for p in 0..m1ps {
                let x = book.x1_seq(w, a, p);
                let cells = (0..n).map(|l| (u[l] as usize * n1 + x[l] as usize) * ny + y[l] as usize);
                if t.ux1y.accepts(cells, n, &mut counts) {
                    list1.push((a, p));
                }
            }
        }
        if list1.is_empty() {
            continue;
        }
        let mut list2 = Vec::new();
        for b in 0..m2s {
            for q in 0..m2ps {
                let x = book.x2_seq(w, b, q);
                let cells = (0..n).map(|l| (u[l] as usize * n2 + x[l] as usize) * ny + y[l] as usize);
                if t.ux2y.accepts(cells, n, &mut counts) {
                    list2.push((b, q));
                }
            }
        }
        for &(a, p) in &list1 {
            let xa = book.x1_seq(w, a, p);
            for &(b, q) in &list2 {
                let xb = book.x2_seq(w, b, q);
                let cells = (0..n).map(|l| {
                    ((u[l] as usize * n1 + xa[l] as usize) * n2 + xb[l] as usize) * ny + y[l] as usize
                });
                if !t.full.accepts(cells, n, &mut counts) {
                    continue;
                }
                match (w == msg.0, a == msg.1, b == msg.2) {
                    (true, true, true) => found_true = true,
                    (false, _, _) => wrong[0] = true,
                    (true, false, false) => wrong[1] = true,
                    (true, true, false) => wrong[2] = true,
                    (true, false, true) => wrong[3] = true,
                }
            }
        }
    }
    out.e1 = u64::from(!found_true);
    out.e2_common = u64::from(wrong[0]);
    out.e2_both = u64::from(wrong[1]);
    out.e2_second = u64::from(wrong[2]);
    out.e2_first = u64::from(wrong[3]);
    out.errors = u64::from(!found_true || wrong.iter().any(|w| *w));
    out
}

/// Runs `cfg.trials` independent transmissions over one codebook.
pub fn run_trials(cfg: &SimConfig) -> Result<SimOutcome> {
    let book = build_codebook(cfg)?;
    let t = tables(cfg);
    let counts = (0..cfg.trials)
        .into_par_iter()
        .map(|i| one_trial(cfg, &book, &t, i))
        .reduce(EventCounts::default, EventCounts::add);
    let trials = cfg.trials;
    let rate = |k: u64| if trials == 0 { 0.0 } else { k as f64 / trials as f64 };
    Ok(SimOutcome {
        n: cfg.n,
        epsilon: cfg.epsilon,
        typicality: "strong: |N(a)/n - p(a)| <= eps p(a) on every cell".into(),
        seed: cfg.seed,
        trials,
        sizes: book.sizes,
        error_estimate: rate(counts.errors),
        wilson_radius: wilson_radius(counts.errors, trials),
        covering_failure_rate: book.covering_failures() as f64 / book.num_bins() as f64,
        covering_vacuous: book.covering_vacuous,
        breakdown: EventRates {
            e1: rate(counts.e1),
            e2_common: rate(counts.e2_common),
            e2_both: rate(counts.e2_both),
            e2_second: rate(counts.e2_second),
            e2_first: rate(counts.e2_first),
        },
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_adder(n: usize, r: f64, trials: u64) -> SimConfig {
        SimConfig {
            n,
            rates: RateTuple { r12: 0.0, r1: r, r2: r, r1p: 0.0, r2p: 0.0 },
            joint: Joint3Pmf::new(1, 2, 2, vec![0.25; 4]).unwrap(),
            mac: MacChannel::binary_adder(),
            epsilon: default_epsilon(),
            trials,
            seed: 7,
            max_symbols: default_budget(),
        }
    }

    #[test]
    fn empty_run_has_unit_radius() {
        let out = run_trials(&uniform_adder(8, 0.5, 0)).unwrap();
        assert_eq!(out.wilson_radius, 1.0);
        assert_eq!(out.error_estimate, 0.0);
    }

    #[test]
    fn blocklength_one_runs() {
        let out = run_trials(&uniform_adder(1, 0.5, 20)).unwrap();
        assert!((0.0..=1.0).contains(&out.error_estimate));
    }

    #[test]
    fn independent_inputs_always_cover() {
        let book = build_codebook(&uniform_adder(8, 0.5, 0)).unwrap();
        assert!(book.covering_vacuous);
        assert_eq!(book.covering_failures(), 0);
    }

    #[test]
    fn oversized_codebook_is_a_budget_error() {
        let cfg = uniform_adder(64, 0.65, 1);
        assert!(matches!(cfg.sizes(), Err(Error::Budget(_))));
    }

    #[test]
    fn wilson_examples() {
        assert!((wilson_radius(50, 100) - 0.0961).abs() < 1e-3);
        assert!(wilson_radius(0, 100) > 0.0);
    }

    #[test]
    fn config_round_trips_through_json() {
        let cfg = uniform_adder(8, 0.5, 3);
        let text = serde_json::to_string(&cfg).unwrap();
        let back: SimConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
    }
}
