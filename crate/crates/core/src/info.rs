//! Entropy, mutual information and divergences, all in bits.

use serde::Serialize;

use crate::channel::{output_mix, Channel, Distribution};
use crate::error::{Error, Result};

/// Pinsker constant in bits: `TV <= c * sqrt(D)` with `c = sqrt(2 ln 2)`.
pub const PINSKER_CONSTANT: f64 = 1.177_410_022_515_474_7;

#[inline]
fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

/// Shannon entropy of a probability slice (zeros contribute nothing).
pub(crate) fn entropy_of(p: &[f64]) -> f64 {
    p.iter().map(|&x| plogp(x)).sum::<f64>().max(0.0)
}

pub fn entropy(p: &Distribution) -> f64 {
    entropy_of(p.probs())
}

/// `h(x) = -x log x - (1-x) log(1-x)`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::invalid(format!("binary entropy argument {x} outside [0, 1]")));
    }
    Ok(plogp(x) + plogp(1.0 - x))
}

/// `H(W|p) = sum_a p(a) H(W(.|a))`.
pub fn conditional_entropy(p: &Distribution, channel: &Channel) -> Result<f64> {
    check_input(p, channel)?;
    Ok(conditional_entropy_of(p.probs(), channel))
}

pub(crate) fn conditional_entropy_of(p: &[f64], channel: &Channel) -> f64 {
    p.iter()
        .enumerate()
        .filter(|(_, pa)| **pa > 0.0)
        .map(|(a, pa)| pa * entropy_of(channel.row(a)))
        .sum()
}

/// `I(p, W) = H(pW) - H(W|p)`, clamped at zero against rounding.
pub fn mutual_information(p: &Distribution, channel: &Channel) -> Result<f64> {
    check_input(p, channel)?;
    Ok(mi_of(p.probs(), channel))
}

/// Computed as `sum_a p(a) D(W_a || pW)` so that each term is non-negative.
pub(crate) fn mi_of(p: &[f64], channel: &Channel) -> f64 {
    let q = output_mix(p, channel);
    let mut total = 0.0;
    for (a, pa) in p.iter().enumerate() {
        if *pa <= 0.0 {
            continue;
        }
        let mut d = 0.0;
        for (w, qb) in channel.row(a).iter().zip(&q) {
            if *w > 0.0 {
                d += w * (w / qb).log2();
            }
        }
        total += pa * d;
    }
    total.max(0.0)
}

fn check_input(p: &Distribution, channel: &Channel) -> Result<()> {
    if p.len() != channel.input_size() {
        return Err(Error::invalid(format!(
            "distribution over {} symbols, channel has {} inputs",
            p.len(),
            channel.input_size()
        )));
    }
    Ok(())
}

/// Total variation `sum |p - q|`: the unhalved l1 distance, in `[0, 2]`.
pub fn variational_distance(p: &Distribution, q: &Distribution) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::invalid("distributions over different alphabets"));
    }
    Ok(l1(p.probs(), q.probs()))
}

pub(crate) fn l1(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum()
}

/// Relative entropy, which can be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Divergence {
    Finite(f64),
    Infinite,
}

impl Divergence {
    pub fn finite(self) -> Option<f64> {
        match self {
            Divergence::Finite(v) => Some(v),
            Divergence::Infinite => None,
        }
    }
}

/// `D(p || q)` in bits.
pub fn kl_divergence(p: &Distribution, q: &Distribution) -> Result<Divergence> {
    if p.len() != q.len() {
        return Err(Error::invalid("distributions over different alphabets"));
    }
    let mut d = 0.0;
    for (a, b) in p.probs().iter().zip(q.probs()) {
        if *a > 0.0 {
            if *b == 0.0 {
                return Ok(Divergence::Infinite);
            }
            d += a * (a / b).log2();
        }
    }
    Ok(Divergence::Finite(d.max(0.0)))
}

/// `c * sqrt(I)`, the Pinsker bound on total variation given `I` bits.
pub fn pinsker_tv_bound(information: f64) -> Result<f64> {
    if !(information >= 0.0) {
        return Err(Error::invalid(format!(
            "information {information} must be non-negative"
        )));
    }
    Ok(PINSKER_CONSTANT * information.sqrt())
}

/// `|H(P) - H(Q)| <= -theta log(theta / K)` for `theta = ||P - Q||_1 <= 1/2`
/// over an alphabet of size `K`. `None` outside the range of validity.
pub fn entropy_continuity_bound(theta: f64, alphabet: usize) -> Option<f64> {
    if !(0.0..=0.5).contains(&theta) || alphabet == 0 {
        return None;
    }
    if theta == 0.0 {
        return Some(0.0);
    }
    Some(-theta * (theta / alphabet as f64).log2())
}

/// Joint distribution over `X x Y`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDistribution {
    rows: usize,
    cols: usize,
    probs: Vec<f64>,
}

impl JointDistribution {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let cols = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::invalid("ragged joint distribution"));
        }
        let flat: Vec<f64> = rows.concat();
        let d = Distribution::new(flat)?;
        Ok(JointDistribution {
            rows: rows.len(),
            cols,
            probs: d.into(),
        })
    }

    /// `P(a, b) = p(a) W(b|a)`.
    pub fn from_channel(p: &Distribution, channel: &Channel) -> Result<Self> {
        check_input(p, channel)?;
        let mut probs = Vec::with_capacity(p.len() * channel.output_size());
        for (a, pa) in p.probs().iter().enumerate() {
            probs.extend(channel.row(a).iter().map(|w| pa * w));
        }
        Ok(JointDistribution {
            rows: p.len(),
            cols: channel.output_size(),
            probs,
        })
    }

    pub fn marginal_x(&self) -> Vec<f64> {
        self.probs.chunks_exact(self.cols).map(|r| r.iter().sum()).collect()
    }

    pub fn marginal_y(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.cols];
        for r in self.probs.chunks_exact(self.cols) {
            for (o, x) in m.iter_mut().zip(r) {
                *o += x;
            }
        }
        m
    }

    pub fn entropy(&self) -> f64 {
        entropy_of(&self.probs)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
}

/// `I(X;Y) = H(X) + H(Y) - H(X,Y)`, clamped at zero.
pub fn mutual_information_joint(joint: &JointDistribution) -> f64 {
    (entropy_of(&joint.marginal_x()) + entropy_of(&joint.marginal_y()) - joint.entropy()).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::bsc;

    fn d(v: &[f64]) -> Distribution {
        Distribution::new(v.to_vec()).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert!((entropy(&Distribution::uniform(2)) - 1.0).abs() < 1e-15);
        assert!((entropy(&Distribution::uniform(4)) - 2.0).abs() < 1e-15);
        assert_eq!(entropy(&Distribution::point(3, 1)), 0.0);
        assert!((entropy(&d(&[0.5, 0.25, 0.25])) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn binary_entropy_examples() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!((binary_entropy(0.11).unwrap() - 0.499_915_958_164_528_9).abs() < 1e-12);
        assert!(binary_entropy(1.2).is_err());
    }

    #[test]
    fn mutual_information_examples() {
        let u = Distribution::uniform(2);
        let i = mutual_information(&u, &bsc(0.1).unwrap()).unwrap();
        assert!((i - (1.0 - binary_entropy(0.1).unwrap())).abs() < 1e-12);
        assert!(mutual_information(&u, &bsc(0.5).unwrap()).unwrap().abs() < 1e-15);
        let i = mutual_information(&Distribution::uniform(3), &Channel::identity(3)).unwrap();
        assert!((i - 3f64.log2()).abs() < 1e-12);
        let c = Channel::constant(3, &d(&[0.2, 0.8]));
        assert_eq!(mutual_information(&d(&[0.1, 0.3, 0.6]), &c).unwrap(), 0.0);
    }

    #[test]
    fn conditional_entropy_example() {
        let h = conditional_entropy(&Distribution::uniform(2), &bsc(0.2).unwrap()).unwrap();
        assert!((h - binary_entropy(0.2).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn divergence_examples() {
        assert_eq!(
            kl_divergence(&d(&[0.5, 0.5]), &d(&[1.0, 0.0])).unwrap(),
            Divergence::Infinite
        );
        let v = kl_divergence(&d(&[0.5, 0.5]), &d(&[0.25, 0.75]))
            .unwrap()
            .finite()
            .unwrap();
        let expect = 0.5 * (2f64).log2() + 0.5 * (0.5f64 / 0.75).log2();
        assert!((v - expect).abs() < 1e-15);
        assert_eq!(
            kl_divergence(&d(&[0.3, 0.7]), &d(&[0.3, 0.7])).unwrap(),
            Divergence::Finite(0.0)
        );
    }

    #[test]
    fn joint_matches_channel_form() {
        let p = d(&[0.3, 0.7]);
        let w = Channel::new(vec![vec![0.1, 0.6, 0.3], vec![0.5, 0.25, 0.25]]).unwrap();
        let j = JointDistribution::from_channel(&p, &w).unwrap();
        assert!((mutual_information_joint(&j) - mutual_information(&p, &w).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn continuity_bound_range() {
        assert_eq!(entropy_continuity_bound(0.6, 2), None);
        assert_eq!(entropy_continuity_bound(0.0, 4), Some(0.0));
        assert!((entropy_continuity_bound(0.25, 4).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pinsker_constant_value() {
        assert!((PINSKER_CONSTANT - (2.0 * std::f64::consts::LN_2).sqrt()).abs() < 1e-15);
        assert_eq!(pinsker_tv_bound(0.0).unwrap(), 0.0);
        assert!((pinsker_tv_bound(1.0).unwrap() - 1.17741).abs() < 1e-5);
        assert!(pinsker_tv_bound(-0.1).is_err());
    }

    #[test]
    fn spec_like_values() {
        assert!((binary_entropy(0.2).unwrap() - 0.7219).abs() < 1e-4);
        let h = conditional_entropy(&d(&[0.25, 0.75]), &bsc(0.3).unwrap()).unwrap();
        assert!((h - 0.8813).abs() < 1e-4);
        assert!((variational_distance(&d(&[0.6, 0.4]), &d(&[0.5, 0.5])).unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(variational_distance(&d(&[1.0, 0.0]), &d(&[0.0, 1.0])).unwrap(), 2.0);
        let j = JointDistribution::new(vec![vec![0.4, 0.1], vec![0.1, 0.4]]).unwrap();
        assert!((mutual_information_joint(&j) - 0.2781).abs() < 1e-4);
        let j = JointDistribution::new(vec![vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        assert!((mutual_information_joint(&j) - 1.0).abs() < 1e-15);
    }
}
