//! Scalar information-theoretic primitives.
//!
//! All quantities are in bits. The raw `f64` functions ([`binary_entropy`],
//! [`inverse_binary_entropy`], [`binary_conv`]) are what the numerical code
//! uses in its inner loops; the typed wrappers ([`h2`], [`h2_inv`], [`star`])
//! validate their arguments and are the public entry points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed when validating probabilities that came out of arithmetic.
const PROB_SLACK: f64 = 1e-12;

/// A probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Prob(f64);

impl Prob {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && (-PROB_SLACK..=1.0 + PROB_SLACK).contains(&value) {
            Ok(Prob(value.clamp(0.0, 1.0)))
        } else {
            Err(Error::Domain(format!("probability {value} outside [0, 1]")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Prob {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Prob::new(v)
    }
}

impl From<Prob> for f64 {
    fn from(p: Prob) -> f64 {
        p.0
    }
}

/// A non-negative information quantity measured in bits.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Bits(f64);

impl Bits {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value >= -PROB_SLACK {
            Ok(Bits(value.max(0.0)))
        } else {
            Err(Error::Domain(format!("bit quantity {value} must be finite and >= 0")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Bits {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Bits::new(v)
    }
}

impl From<Bits> for f64 {
    fn from(b: Bits) -> f64 {
        b.0
    }
}

/// `-x log2 x` with the convention `0 log 0 = 0`.
#[inline]
pub fn plogp(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Binary entropy in bits. Arguments are clamped into `[0, 1]`.
#[inline]
pub fn binary_entropy(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    plogp(p) + plogp(1.0 - p)
}

/// Inverse of the binary entropy on the branch `[0, 1/2]`, by bisection.
///
/// Values outside `[0, 1]` are clamped.
pub fn inverse_binary_entropy(v: f64) -> f64 {
    if v <= 0.0 {
        return 0.0;
    }
    if v >= 1.0 {
        return 0.5;
    }
    let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if binary_entropy(mid) < v {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Binary convolution `a(1-b) + b(1-a)`.
#[inline]
pub fn binary_conv(a: f64, b: f64) -> f64 {
    a * (1.0 - b) + b * (1.0 - a)
}

pub fn h2(p: Prob) -> Bits {
    Bits(binary_entropy(p.0))
}

/// Inverse binary entropy on `[0, 1/2]`; `v` must lie in `[0, 1]`.
pub fn h2_inv(v: Bits) -> Result<Prob> {
    if v.0 > 1.0 + PROB_SLACK {
        return Err(Error::Domain(format!("h2_inv argument {} exceeds 1 bit", v.0)));
    }
    Ok(Prob(inverse_binary_entropy(v.0)))
}

pub fn star(a: Prob, b: Prob) -> Prob {
    Prob(binary_conv(a.0, b.0).clamp(0.0, 1.0))
}

/// Entropy of a probability vector in bits.
pub fn entropy(mass: &[f64]) -> f64 {
    mass.iter().copied().map(plogp).sum()
}

/// Mutual information `I(A;B)` of a joint pmf stored row-major as
/// `rows x cols` (rows index `A`, columns index `B`).
pub fn mutual_info(joint: &[f64], rows: usize, cols: usize) -> Result<f64> {
    if rows == 0 || cols == 0 || joint.len() != rows * cols {
        return Err(Error::Dimension(format!(
            "joint of length {} cannot be split as {rows} x {cols}",
            joint.len()
        )));
    }
    let mut pa = vec![0.0; rows];
    let mut pb = vec![0.0; cols];
    for a in 0..rows {
        for b in 0..cols {
            let m = joint[a * cols + b];
            pa[a] += m;
            pb[b] += m;
        }
    }
    let mut acc = 0.0;
    for a in 0..rows {
        for b in 0..cols {
            let m = joint[a * cols + b];
            if m > 0.0 {
                acc += m * (m / (pa[a] * pb[b])).log2();
            }
        }
    }
    Ok(acc.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn h2_examples() {
        assert_eq!(binary_entropy(0.5), 1.0);
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        assert!((binary_entropy(1.0 / 3.0) - 0.918296).abs() < 1e-6);
        assert!(Prob::new(1.2).is_err());
        assert!(Prob::new(-0.1).is_err());
        assert!(Prob::new(f64::NAN).is_err());
    }

    #[test]
    fn h2_inv_examples() {
        let inv = |v: f64| h2_inv(Bits::new(v).unwrap()).unwrap().value();
        assert_eq!(inv(1.0), 0.5);
        assert_eq!(inv(0.0), 0.0);
        assert!((inv(0.918296) - 1.0 / 3.0).abs() < 1e-6);
        assert!(h2_inv(Bits::new(1.5).unwrap()).is_err());
        assert!(Bits::new(-1.0).is_err());
        // residual of the bisection
        for v in [1e-9, 0.01, 0.3, 0.77, 0.999_999] {
            let p = inverse_binary_entropy(v);
            assert!((binary_entropy(p) - v).abs() <= 1e-12, "v={v}");
        }
    }

    #[test]
    fn star_examples() {
        let p = |v| Prob::new(v).unwrap();
        assert_eq!(star(p(0.0), p(0.37)).value(), 0.37);
        assert_eq!(star(p(0.5), p(0.37)).value(), 0.5);
        assert!((star(p(0.3), p(0.2)).value() - 0.38).abs() < 1e-15);
    }

    #[test]
    fn mutual_info_examples() {
        let product = [0.3 * 0.6, 0.3 * 0.4, 0.7 * 0.6, 0.7 * 0.4];
        assert!(mutual_info(&product, 2, 2).unwrap().abs() < 1e-12);
        let copy = [0.5, 0.0, 0.0, 0.5];
        assert!((mutual_info(&copy, 2, 2).unwrap() - 1.0).abs() < 1e-15);
        let p = 0.25;
        let dsbs = [(1.0 - p) / 2.0, p / 2.0, p / 2.0, (1.0 - p) / 2.0];
        let expected = 1.0 - binary_entropy(p);
        assert!((mutual_info(&dsbs, 2, 2).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 0.188722).abs() < 1e-6);
        assert!(mutual_info(&dsbs, 3, 2).is_err());
    }

    proptest! {
        #[test]
        fn h2_inv_inverts_h2(p in 0.0f64..=0.5) {
            let back = inverse_binary_entropy(binary_entropy(p));
            prop_assert!((back - p).abs() <= 1e-10, "p={} back={}", p, back);
        }

        #[test]
        fn star_commutes_and_associates(a in 0.0f64..=1.0, b in 0.0f64..=1.0, c in 0.0f64..=1.0) {
            prop_assert!((binary_conv(a, b) - binary_conv(b, a)).abs() <= 1e-14);
            let l = binary_conv(binary_conv(a, b), c);
            let r = binary_conv(a, binary_conv(b, c));
            prop_assert!((l - r).abs() <= 1e-14);
        }

        #[test]
        fn h2_is_concave(p in 0.0f64..=1.0, q in 0.0f64..=1.0, t in 0.0f64..=1.0) {
            let mid = binary_entropy(t * p + (1.0 - t) * q);
            let chord = t * binary_entropy(p) + (1.0 - t) * binary_entropy(q);
            prop_assert!(mid >= chord - 1e-12);
        }

        #[test]
        fn mutual_info_nonnegative(raw in proptest::collection::vec(0.0f64..1.0, 6)) {
            let total: f64 = raw.iter().sum();
            prop_assume!(total > 1e-6);
            let joint: Vec<f64> = raw.iter().map(|x| x / total).collect();
            prop_assert!(mutual_info(&joint, 2, 3).unwrap() >= 0.0);
            // product of the marginals carries no information
            let pa = [joint[0] + joint[1] + joint[2], joint[3] + joint[4] + joint[5]];
            let pb = [joint[0] + joint[3], joint[1] + joint[4], joint[2] + joint[5]];
            let prod: Vec<f64> = (0..6).map(|i| pa[i / 3] * pb[i % 3]).collect();
            prop_assert!(mutual_info(&prod, 2, 3).unwrap().abs() <= 1e-12);
        }
    }
}
