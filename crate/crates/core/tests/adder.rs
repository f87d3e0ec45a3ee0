use diamond_core::adder::*;
use diamond_core::entropy::{binary_entropy as h2, Prob};
use proptest::prelude::*;

#[test]
fn capacity_spot_values() {
    let cap = |c1: f64, c2: f64| adder_capacity(&AdderNet::new(c1, c2).unwrap()).value;
    assert!((cap(0.8, 0.8) - 1.570_950_594_454_669).abs() < 1e-9);
    assert!((cap(0.78, 0.78) - 1.549_587_5).abs() < 1e-6);
    assert!((cap(0.9, 0.9) - 3f64.log2()).abs() < 1e-12);
    assert!((cap(0.5, 0.6) - 1.1).abs() < 1e-12);
    assert!((cap(0.3, 1.2) - 1.3).abs() < 1e-12);
    assert!(AdderNet::new(-0.1, 1.0).is_err());
}

#[test]
fn markov_aux_gap_near_point_seven_eight() {
    let net = AdderNet::symmetric(0.78).unwrap();
    let gap = adder_upper_cor2(&net).value - adder_capacity(&net).value;
    assert!((1.5e-3..=2.5e-3).contains(&gap), "{gap}");
    for c in [0.75, 0.8] {
        let net = AdderNet::symmetric(c).unwrap();
        assert!(adder_upper_cor2(&net).value - adder_capacity(&net).value <= 1e-4);
    }
}

#[test]
fn alpha_strategies_agree() {
    for c in [0.76, 0.78, 0.8] {
        let net = AdderNet::symmetric(c).unwrap();
        let a = adder_upper_thm3(&net, AlphaStrategy::default()).value;
        let g = adder_upper_thm3(&net, AlphaStrategy::Grid { step: 1e-3 }).value;
        assert!((a - g).abs() < 1e-4, "{c}: {a} vs {g}");
    }
}

#[test]
fn mgl_is_close() {
    for i in 0..=40 {
        let net = AdderNet::symmetric(0.7 + i as f64 * 0.0025).unwrap();
        let gap = adder_upper_mgl(&net, 1e-3).value - adder_capacity(&net).value;
        assert!((-1e-9..=1e-3).contains(&gap), "{gap}");
    }
}

#[test]
fn alpha_matches_eta() {
    // the auxiliary makes the conditional information vanish at q = eta
    for eta in [0.1, 0.25, 0.4] {
        let a = adder_aux_alpha(Prob::new(eta).unwrap()).unwrap();
        assert!(mi_given_u(Prob::new(eta).unwrap(), a).abs() < 1e-10);
    }
}

proptest! {
    #[test]
    fn upper_sits_above_capacity(c1 in 0.0f64..2.0, c2 in 0.0f64..2.0) {
        let net = AdderNet::new(c1, c2).unwrap();
        let cap = adder_capacity(&net).value;
        let t3 = adder_upper_thm3(&net, AlphaStrategy::default()).value;
        prop_assert!(t3 >= cap - 1e-9 && t3 <= cap + 1e-3);
        prop_assert!(adder_upper_cor2(&net).value <= adder_cutset(&net).value + 1e-9);
    }

    #[test]
    fn lower_is_concave_in_p(c in 0.0f64..1.5, p in 0.0f64..1.0, q in 0.0f64..1.0) {
        let net = AdderNet::symmetric(c).unwrap();
        // the reported value is clipped at zero, so test the raw minimum
        let v = |x: f64| adder_lower(&net, Prob::new(x).unwrap()).constraints.iter().map(|t| t.value).fold(f64::INFINITY, f64::min);
        prop_assert!(v((p + q) / 2.0) >= (v(p) + v(q)) / 2.0 - 1e-12);
    }

    #[test]
    fn gerber_difference_nonnegative_and_increasing(y in 0.0f64..1.0, s in 0.0f64..1.0, t in 0.0f64..1.0, alpha in 0.0f64..0.5) {
        let x_max = 1.0 + h2(y) - y;
        let (a, b) = (s.min(t) * x_max, s.max(t) * x_max);
        let (ga, gb) = (gerber_g(a, y, alpha).unwrap(), gerber_g(b, y, alpha).unwrap());
        prop_assert!(ga >= -1e-12 && gb >= ga - 1e-12);
    }
}
