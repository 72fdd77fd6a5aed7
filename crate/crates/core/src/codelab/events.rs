//! Concentration events `ι_j`: for every `z` the randomisation average of
//! `Q_{x_{jl}}(z)` lies within `(1 ± ε) Θ(z)`. Outside `S` both sides vanish,
//! so only `z ∈ S` is checked.

use std::collections::HashMap;

use rand::Rng;
use serde::Serialize;

use super::codebook::Codebook;
use super::evaluate::message_outputs;
use super::theta::{tilde_q, Theta, TruncatedInput};
use super::typical::{digits, TypicalityParams};
use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::rng;

const TRIAL_TAG: u64 = 0xE7E4_7000;

/// `2 exp(-L ε² μ / 3)` for i.i.d. variables in `[0, 1]` with mean `μ`.
pub fn concentration_bound(l: usize, epsilon: f64, mu: f64) -> f64 {
    2.0 * (-(l as f64) * epsilon * epsilon * mu / 3.0).exp()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MessageEvent {
    pub holds: bool,
    /// `||(1/L) Σ_l V^n(.|x_{jl}) - Θ||`.
    pub tv: f64,
    /// `(1/L) Σ_l V^n(T_{V,δ}(x_{jl})^c | x_{jl})`.
    pub atypical: f64,
    /// `tv <= atypical + 4ε`; implied by `holds` and `Σ_S Θ >= 1 - 2ε`.
    pub chain_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EventReport {
    pub block: usize,
    pub eaves: usize,
    pub epsilon: f64,
    pub alpha: f64,
    /// `ε >= 1`: the lower end of every interval is non-positive.
    pub vacuous: bool,
    /// `0 < ε < 1/2`, the range of the concentration bound.
    pub bound_applicable: bool,
    pub theta_mass: f64,
    pub s_size: usize,
    /// `Σ_S Θ >= 1 - 2ε`.
    pub mass_condition: bool,
    pub q_max: f64,
    /// Union over `z ∈ S` of the concentration bound with the exact means
    /// `Θ(z) / q_max`.
    pub failure_bound: f64,
    pub messages: Vec<MessageEvent>,
    pub all_hold: bool,
}

/// Randomisation averages of `Q_x` restricted to `S`, plus the atypical mass.
fn averaged_q(
    eaves: &Channel,
    words: &[u64],
    radix: usize,
    params: TypicalityParams,
    theta: &Theta,
    budget: u64,
) -> Result<(HashMap<usize, f64>, f64)> {
    let l = words.len() as f64;
    let mut avg = HashMap::new();
    let mut typical = 0.0;
    for &x in words {
        for (z, q) in tilde_q(eaves, &digits(x, radix, params.n), params, budget)? {
            typical += q / l;
            if theta.in_s.contains(z as usize) {
                *avg.entry(z as usize).or_insert(0.0) += q / l;
            }
        }
    }
    Ok((avg, (1.0 - typical).max(0.0)))
}

fn within(avg: &HashMap<usize, f64>, theta: &Theta) -> bool {
    let eps = theta.epsilon;
    theta.in_s.ones().all(|z| {
        let th = theta.theta_prime[z];
        let a = avg.get(&z).copied().unwrap_or(0.0);
        a >= (1.0 - eps) * th && a <= (1.0 + eps) * th
    })
}

pub fn check_chernoff_events(
    codebook: &Codebook,
    block: usize,
    eaves_state: usize,
    eaves: &Channel,
    theta: &Theta,
    budget: u64,
) -> Result<EventReport> {
    let b = codebook
        .blocks
        .get(block)
        .ok_or_else(|| Error::invalid(format!("block {block} out of range")))?;
    let params = TypicalityParams::new(codebook.n, codebook.delta)?;
    let eps = theta.epsilon;
    let outputs = message_outputs(codebook, b, eaves, budget)?;
    let theta_vec: Vec<f64> = (0..theta.theta_prime.len()).map(|z| theta.theta(z)).collect();
    let mass_condition = theta.mass_on_s >= 1.0 - 2.0 * eps;
    let mut messages = Vec::with_capacity(codebook.messages);
    for (row, out) in b.words.iter().zip(&outputs) {
        let (avg, atypical) = averaged_q(eaves, row, codebook.input_size, params, theta, budget)?;
        let tv: f64 = out.iter().zip(&theta_vec).map(|(a, t)| (a - t).abs()).sum();
        messages.push(MessageEvent {
            holds: within(&avg, theta),
            tv,
            atypical,
            chain_holds: tv <= atypical + 4.0 * eps + 1e-12,
        });
    }
    let l = b.randomization();
    let failure_bound = if theta.q_max > 0.0 {
        theta
            .in_s
            .ones()
            .map(|z| concentration_bound(l, eps, theta.theta_prime[z] / theta.q_max))
            .sum()
    } else {
        0.0
    };
    Ok(EventReport {
        block,
        eaves: eaves_state,
        epsilon: eps,
        alpha: theta.alpha,
        vacuous: eps >= 1.0,
        bound_applicable: eps > 0.0 && eps < 0.5,
        theta_mass: theta.mass_on_s,
        s_size: theta.s_size(),
        mass_condition,
        q_max: theta.q_max,
        failure_bound,
        all_hold: messages.iter().all(|m| m.holds),
        messages,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EventTrials {
    pub trials: usize,
    pub failures: usize,
    pub failure_rate: f64,
    pub failure_bound: f64,
}

/// Fresh `L`-word draws from the truncated input, counting how often `ι`
/// fails; compared with the union concentration bound.
pub fn event_failure_rate(
    trunc: &TruncatedInput,
    eaves: &Channel,
    theta: &Theta,
    l: usize,
    trials: usize,
    seed: u64,
    budget: u64,
) -> Result<EventTrials> {
    let params = trunc.params;
    let mut failures = 0;
    for trial in 0..trials {
        let mut r = rng::keyed(seed, &[TRIAL_TAG, trial as u64]);
        let words: Vec<u64> = (0..l).map(|_| trunc.draw(r.random::<f64>())).collect();
        let (avg, _) = averaged_q(eaves, &words, trunc.input_size(), params, theta, budget)?;
        if !within(&avg, theta) {
            failures += 1;
        }
    }
    let failure_bound = theta
        .in_s
        .ones()
        .map(|z| concentration_bound(l, theta.epsilon, theta.theta_prime[z] / theta.q_max))
        .sum();
    Ok(EventTrials {
        trials,
        failures,
        failure_rate: failures as f64 / trials.max(1) as f64,
        failure_bound,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChernoffExperiment {
    pub mu: f64,
    pub trials: usize,
    pub failures: usize,
    pub failure_rate: f64,
    pub bound: f64,
}

/// Empirical frequency of `(1/L) Σ Z_i ∉ [(1 ± ε) μ]` for i.i.d. `Z_i` with
/// values `values` in `[0, 1]` and probabilities `probs`.
pub fn chernoff_experiment(
    values: &[f64],
    probs: &[f64],
    l: usize,
    epsilon: f64,
    trials: usize,
    seed: u64,
) -> Result<ChernoffExperiment> {
    if values.len() != probs.len() || values.is_empty() {
        return Err(Error::invalid("values and probabilities must be non-empty and aligned"));
    }
    if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(Error::invalid("values must lie in [0, 1]"));
    }
    if l == 0 {
        return Err(Error::invalid("sample size must be positive"));
    }
    let dist = crate::channel::Distribution::new(probs.to_vec())?;
    let mu: f64 = values.iter().zip(dist.probs()).map(|(v, p)| v * p).sum();
    let mut cumulative = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in dist.probs() {
        acc += p;
        cumulative.push(acc);
    }
    let mut r = rng::keyed(seed, &[TRIAL_TAG + 1]);
    let mut failures = 0;
    for _ in 0..trials {
        let mut sum = 0.0;
        for _ in 0..l {
            let u: f64 = r.random();
            let k = cumulative.partition_point(|c| *c <= u).min(values.len() - 1);
            sum += values[k];
        }
        let mean = sum / l as f64;
        if mean < (1.0 - epsilon) * mu || mean > (1.0 + epsilon) * mu {
            failures += 1;
        }
    }
    Ok(ChernoffExperiment {
        mu,
        trials,
        failures,
        failure_rate: failures as f64 / trials.max(1) as f64,
        bound: concentration_bound(l, epsilon, mu),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{bsc, CompoundWiretap, Distribution};
    use crate::codelab::codebook::{sample_codebook, CodingRegime, Overrides};
    use crate::codelab::theta::{build_theta, build_truncated_input};

    #[test]
    fn chernoff_rate_below_bound() {
        let e = chernoff_experiment(&[0.0, 0.5, 1.0], &[0.2, 0.3, 0.5], 200, 0.2, 1000, 5).unwrap();
        assert!((e.mu - 0.65).abs() < 1e-12);
        assert!(e.failure_rate <= e.bound, "{e:?}");
    }

    #[test]
    fn huge_randomization_makes_events_hold() {
        let params = TypicalityParams::new(4, 0.25).unwrap();
        let v = bsc(0.3).unwrap();
        let trunc = build_truncated_input(&Distribution::uniform(2), params, 1 << 20).unwrap();
        let theta = build_theta(&trunc, &v, 0.3, 0.0, 1 << 20).unwrap();
        let t = event_failure_rate(&trunc, &v, &theta, 20_000, 20, 1, 1 << 20).unwrap();
        assert_eq!(t.failures, 0);
    }

    #[test]
    fn vacuous_epsilon_is_flagged() {
        let c = CompoundWiretap::single(bsc(0.05).unwrap(), bsc(0.3).unwrap()).unwrap();
        let params = TypicalityParams::new(4, 0.25).unwrap();
        let inputs = [Distribution::uniform(2)];
        let over = Overrides {
            messages: Some(2),
            randomization: Some(2),
        };
        let code = sample_codebook(&c, CodingRegime::Csi, &inputs, params, 0.1, over, 0, 1 << 20).unwrap();
        let theta = build_theta(&code.truncated[0], &c.eaves()[0], 1.5, 0.0, 1 << 20).unwrap();
        let r = check_chernoff_events(&code.codebook, 0, 0, &c.eaves()[0], &theta, 1 << 20).unwrap();
        assert!(r.vacuous && !r.bound_applicable);
        assert!(r
            .messages
            .iter()
            .all(|m| m.chain_holds || !(m.holds && r.mass_condition)));
    }
}
