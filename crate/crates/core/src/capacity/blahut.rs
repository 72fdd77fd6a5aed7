//! Plain channel capacity by Blahut–Arimoto iteration.

use serde::Serialize;

use crate::channel::{output_mix, Channel, CompoundWiretap, Distribution};
use crate::info::mi_of;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CapacityEstimate {
    /// `I(p, W)` at the returned input.
    pub value: f64,
    /// `max_a D(W_a || pW)`, an upper bound on the capacity.
    pub upper: f64,
    pub input: Distribution,
}

fn divergences(p: &[f64], channel: &Channel) -> Vec<f64> {
    let q = output_mix(p, channel);
    channel
        .rows()
        .map(|row| {
            row.iter()
                .zip(&q)
                .filter(|(w, _)| **w > 0.0)
                .map(|(w, qb)| w * (w / qb).log2())
                .sum()
        })
        .collect()
}

/// Capacity of a single channel, iterated until the duality gap is below 1e-12.
pub fn channel_capacity(channel: &Channel) -> CapacityEstimate {
    let k = channel.input_size();
    let mut p = vec![1.0 / k as f64; k];
    let mut upper = f64::INFINITY;
    for _ in 0..100_000 {
        let d = divergences(&p, channel);
        upper = d.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lower = mi_of(&p, channel);
        if upper - lower < 1e-12 {
            break;
        }
        let mut next: Vec<f64> = p.iter().zip(&d).map(|(pa, da)| pa * da.exp2()).collect();
        let total: f64 = next.iter().sum();
        for x in &mut next {
            *x /= total;
        }
        p = next;
    }
    CapacityEstimate {
        value: mi_of(&p, channel),
        upper,
        input: Distribution::normalized(p).expect("iterates stay on the simplex"),
    }
}

/// `min_t max_p I(p, W_t)`: the legitimate-side ceiling for every secrecy rate.
pub fn compound_capacity(compound: &CompoundWiretap) -> CapacityEstimate {
    let mut best: Option<CapacityEstimate> = None;
    for w in compound.legit() {
        let c = channel_capacity(w);
        if best.as_ref().is_none_or(|b| c.value < b.value) {
            best = Some(c);
        }
    }
    best.expect("compounds are nonempty")
}
