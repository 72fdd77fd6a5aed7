//! Truncated input distributions and the eavesdropper output proxy `Θ`.

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::typical::{conditional_typical_set, digits, sequence_probability, typical_set, TypicalityParams};
use crate::channel::{Channel, Distribution};
use crate::error::{checked_power, Error, Result};

/// `p^n` restricted to its typical set and renormalized.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TruncatedInput {
    pub base: Distribution,
    pub params: TypicalityParams,
    /// Typical sequences, ascending.
    pub support: Vec<u64>,
    /// Renormalized probabilities, aligned with `support`.
    pub mass: Vec<f64>,
    /// `p^n(T^n_{p,delta})` before renormalization.
    pub typical_mass: f64,
    #[serde(skip)]
    cumulative: Vec<f64>,
}

impl TruncatedInput {
    pub fn input_size(&self) -> usize {
        self.base.len()
    }

    /// Sequence at cumulative position `u` in `[0, 1)`.
    pub fn draw(&self, u: f64) -> u64 {
        let k = self.cumulative.partition_point(|c| *c <= u);
        self.support[k.min(self.support.len() - 1)]
    }
}

pub fn build_truncated_input(p: &Distribution, params: TypicalityParams, budget: u64) -> Result<TruncatedInput> {
    let support = typical_set(p, params, budget)?;
    if support.is_empty() {
        return Err(Error::invalid(format!(
            "typical set is empty at n = {}, delta = {}; delta is too small for this blocklength",
            params.n, params.delta
        )));
    }
    let raw: Vec<f64> = support
        .iter()
        .map(|&x| sequence_probability(p.probs(), x, params.n))
        .collect();
    let typical_mass: f64 = raw.iter().sum();
    let mass: Vec<f64> = raw.iter().map(|m| m / typical_mass).collect();
    let mut acc = 0.0;
    let cumulative = mass
        .iter()
        .map(|m| {
            acc += m;
            acc
        })
        .collect();
    Ok(TruncatedInput {
        base: p.clone(),
        params,
        support,
        mass,
        typical_mass,
        cumulative,
    })
}

/// `Θ'`, the set `S = {Θ' >= epsilon alpha}` and `Θ = Θ' 1_S` on `C^n`.
#[derive(Clone, Debug)]
pub struct Theta {
    pub theta_prime: Vec<f64>,
    pub in_s: FixedBitSet,
    pub epsilon: f64,
    pub alpha: f64,
    /// `Σ_{z in S} Θ(z)`.
    pub mass_on_s: f64,
    /// `max Q̃_{x}(z)` over typical `x` and `z`; the exact normalizer for the
    /// concentration bounds.
    pub q_max: f64,
}

impl Theta {
    pub fn theta(&self, z: usize) -> f64 {
        if self.in_s.contains(z) {
            self.theta_prime[z]
        } else {
            0.0
        }
    }

    pub fn s_size(&self) -> usize {
        self.in_s.count_ones(..)
    }
}

/// Builds `Θ` for the truncated input and eavesdropper channel, thresholding
/// at `epsilon * alpha`.
pub fn build_theta(trunc: &TruncatedInput, eaves: &Channel, epsilon: f64, alpha: f64, budget: u64) -> Result<Theta> {
    if eaves.input_size() != trunc.input_size() {
        return Err(Error::invalid(
            "eavesdropper channel input alphabet does not match the input distribution",
        ));
    }
    let n = trunc.params.n;
    let size = checked_power(eaves.output_size(), n, budget, "eavesdropper output space")? as usize;
    let mut theta_prime = vec![0.0; size];
    let mut q_max: f64 = 0.0;
    for (&x, &m) in trunc.support.iter().zip(&trunc.mass) {
        let xs = digits(x, trunc.input_size(), n);
        for (z, q) in tilde_q(eaves, &xs, trunc.params, budget)? {
            theta_prime[z as usize] += m * q;
            q_max = q_max.max(q);
        }
    }
    let threshold = epsilon * alpha;
    let mut in_s = FixedBitSet::with_capacity(size);
    let mut mass_on_s = 0.0;
    for (z, &v) in theta_prime.iter().enumerate() {
        if v > 0.0 && v >= threshold {
            in_s.insert(z);
            mass_on_s += v;
        }
    }
    Ok(Theta {
        theta_prime,
        in_s,
        epsilon,
        alpha,
        mass_on_s,
        q_max,
    })
}

/// Nonzero entries of `Q̃_x = V^n(.|x) 1_{T_{V,delta}(x)}`.
pub(crate) fn tilde_q(eaves: &Channel, x: &[usize], params: TypicalityParams, budget: u64) -> Result<Vec<(u64, f64)>> {
    let set = conditional_typical_set(eaves, x, params, budget)?;
    let nc = eaves.output_size();
    Ok(set
        .into_iter()
        .map(|z| {
            let zs = digits(z, nc, x.len());
            let q: f64 = x.iter().zip(&zs).map(|(&a, &c)| eaves.get(a, c)).product();
            (z, q)
        })
        .filter(|(_, q)| *q > 0.0)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::bsc;

    fn params(n: usize, delta: f64) -> TypicalityParams {
        TypicalityParams::new(n, delta).unwrap()
    }

    #[test]
    fn deterministic_input_is_single_atom() {
        let t = build_truncated_input(&Distribution::point(3, 2), params(4, 0.05), 1 << 20).unwrap();
        assert_eq!(t.support, vec![80]);
        assert_eq!(t.mass, vec![1.0]);
    }

    #[test]
    fn balanced_sequences_are_uniform() {
        let t = build_truncated_input(&Distribution::uniform(2), params(4, 0.1), 1 << 20).unwrap();
        assert_eq!(t.support.len(), 6);
        assert!(t.mass.iter().all(|m| (m - 1.0 / 6.0).abs() < 1e-15));
        assert!((t.typical_mass - 6.0 / 16.0).abs() < 1e-15);
        assert_eq!(t.draw(0.0), 0b0011);
        assert_eq!(t.draw(0.999_999), 0b1100);
    }

    #[test]
    fn empty_typical_set_is_rejected() {
        let p = Distribution::new(vec![0.3, 0.7]).unwrap();
        assert!(matches!(
            build_truncated_input(&p, params(3, 0.01), 1 << 20),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn identity_eavesdropper_pushes_input_forward() {
        let t = build_truncated_input(&Distribution::uniform(2), params(4, 0.1), 1 << 20).unwrap();
        let th = build_theta(&t, &Channel::identity(2), 0.0, 1.0, 1 << 20).unwrap();
        for z in 0..16 {
            let expect = if t.support.contains(&(z as u64)) {
                1.0 / 6.0
            } else {
                0.0
            };
            assert!((th.theta_prime[z] - expect).abs() < 1e-15);
        }
        assert!((th.mass_on_s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_threshold_keeps_support() {
        let t = build_truncated_input(&Distribution::uniform(2), params(6, 1.0 / 6.0), 1 << 20).unwrap();
        let th = build_theta(&t, &bsc(0.3).unwrap(), 0.0, 0.5, 1 << 20).unwrap();
        let support = th.theta_prime.iter().filter(|v| **v > 0.0).count();
        assert_eq!(th.s_size(), support);
        let total: f64 = th.theta_prime.iter().sum();
        assert!((th.mass_on_s - total).abs() < 1e-12);
    }
}
