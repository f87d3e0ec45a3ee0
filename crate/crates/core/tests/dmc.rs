use diamond_core::dmc::*;
use diamond_core::optim::SimplexConfig;
use diamond_core::pmf::Joint3Pmf;
use proptest::prelude::*;

fn adder() -> MacChannel {
    MacChannel::binary_adder()
}

fn normalize(raw: &[f64]) -> Vec<f64> {
    let s: f64 = raw.iter().sum();
    raw.iter().map(|v| v / s).collect()
}

#[test]
fn lower_optimize_on_adder() {
    let cfg = LowerConfig::default();
    let r = lower_bound_optimize(&adder(), &BitPipes::symmetric(0.6).unwrap(), &cfg).unwrap();
    assert!(r.value >= 1.2 - 1e-6, "{}", r.value);
    let r = lower_bound_optimize(&adder(), &BitPipes::symmetric(2.0).unwrap(), &cfg).unwrap();
    assert!((r.value - 3f64.log2()).abs() < 1e-4, "{}", r.value);
    let r = lower_bound_optimize(&adder(), &BitPipes::symmetric(0.0).unwrap(), &cfg).unwrap();
    assert!(r.value.abs() < 1e-12);
    let bad = LowerConfig { u_size: Some(99), simplex: SimplexConfig::quick() };
    assert!(lower_bound_optimize(&adder(), &BitPipes::symmetric(1.0).unwrap(), &bad).is_err());
}

#[test]
fn cutset_on_adder() {
    let cfg = SimplexConfig::default();
    let r = cutset_bound(&adder(), &BitPipes::symmetric(2.0).unwrap(), &cfg).unwrap();
    assert!((r.value - 3f64.log2()).abs() < 1e-4, "{}", r.value);
    let r = cutset_bound(&adder(), &BitPipes::symmetric(0.7).unwrap(), &cfg).unwrap();
    assert!((r.value - 1.4).abs() < 1e-4, "{}", r.value);
}

#[test]
fn aux_converse_is_tight_at_point_eight() {
    let r = upper_bound_thm2(&adder(), &BitPipes::symmetric(0.8).unwrap(), &UpperConfig::default()).unwrap();
    assert!((r.value - 1.570_950_594).abs() < 1e-4, "{}", r.value);
}

#[test]
fn time_sharing_with_matched_aux() {
    let eta: f64 = 0.4;
    let k = (eta / (2.0 * (1.0 - eta))).powi(2);
    let alpha = (1.0 - (1.0 - 4.0 * k).sqrt()) / 2.0;
    let aux = AuxChannelU::adder_symmetric(alpha);
    let r = upper_bound_thm3_loose(&adder(), &BitPipes::symmetric(0.8).unwrap(), &aux, &UpperConfig::quick()).unwrap();
    assert!((r.value - 1.570_951).abs() < 1e-3, "{}", r.value);
}

#[test]
fn sandwich_on_random_channel() {
    let mac = MacChannel::new(2, 2, 2, vec![0.9, 0.1, 0.3, 0.7, 0.2, 0.8, 0.6, 0.4]).unwrap();
    let pipes = BitPipes::new(0.3, 0.5).unwrap();
    let lower = lower_bound_optimize(&mac, &pipes, &LowerConfig { u_size: None, simplex: SimplexConfig::quick() }).unwrap();
    let upper = upper_bound_thm2(&mac, &pipes, &UpperConfig::quick()).unwrap();
    let cut = cutset_bound(&mac, &pipes, &SimplexConfig::quick()).unwrap();
    assert!(lower.value <= upper.value + 1e-6, "{} > {}", lower.value, upper.value);
    assert!(upper.value <= cut.value + 1e-6);
}

#[test]
fn feasibility_witness_satisfies_pipes() {
    let joint = Joint3Pmf::with_constant_u(2, 2, &[0.25; 4]).unwrap();
    let pipes = BitPipes::symmetric(0.7).unwrap();
    let v = lower_region_value(&joint, &adder(), &pipes).unwrap().value;
    assert!((v - 1.4).abs() < 1e-12);
    let out = pre_fme_feasible(v - 1e-6, &joint, &adder(), &pipes).unwrap();
    let w = out.witness.unwrap();
    assert!(w.r12 + w.r1 + w.r1p <= 0.7 + 1e-9);
    assert!(w.r12 + w.r2 + w.r2p <= 0.7 + 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn identity_residual_vanishes(raw in proptest::collection::vec(0.01f64..1.0, 12)) {
        let m = normalize(&raw);
        prop_assert!(mi_identity_residual(2, 2, 3, &m).unwrap() <= 1e-10);
    }

    #[test]
    fn pointwise_ordering(raw in proptest::collection::vec(0.01f64..1.0, 4), alpha in 0.0f64..0.5, c1 in 0.0f64..2.0, c2 in 0.0f64..2.0) {
        let pxx = normalize(&raw);
        let pipes = BitPipes::new(c1, c2).unwrap();
        let aux = AuxChannelU::adder_symmetric(alpha);
        let min = |t: &[f64]| t.iter().copied().fold(f64::INFINITY, f64::min);
        let t3 = min(&thm3_terms(&adder(), &pipes, 1, &pxx, &aux).unwrap());
        let t2 = min(&thm2_terms(&adder(), &pipes, &pxx, &aux).unwrap());
        let cs = min(&cutset_terms(&adder(), &pipes, &pxx).unwrap());
        prop_assert!(t3 <= t2 + 1e-9 && t2 <= cs + 1e-9);
    }

    #[test]
    fn region_value_is_feasibility_threshold(raw in proptest::collection::vec(0.01f64..1.0, 8), c1 in 0.0f64..2.0, c2 in 0.0f64..2.0) {
        let joint = Joint3Pmf::new(2, 2, 2, normalize(&raw)).unwrap();
        let pipes = BitPipes::new(c1, c2).unwrap();
        let v = lower_region_value(&joint, &adder(), &pipes).unwrap().value;
        prop_assert!(pre_fme_feasible((v - 1e-7).max(0.0), &joint, &adder(), &pipes).unwrap().feasible);
        prop_assert!(!pre_fme_feasible(v + 1e-6, &joint, &adder(), &pipes).unwrap().feasible);
    }
}
