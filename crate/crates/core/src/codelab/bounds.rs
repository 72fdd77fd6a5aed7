//! Parametric cardinality and probability bounds next to the exact
//! quantities they bound.
//!
//! The slack functions `f1, f2, f` only have to exist and vanish as
//! `delta -> 0`; they are parameters here. The default is linear,
//! `c0 |A| |out| delta` with `c0 = 4`.

use std::collections::BTreeSet;

use serde::Serialize;

use super::typical::{conditional_typical_set, digits, typical_set, TypicalityParams};
use crate::channel::{output_distribution, Channel, Distribution};
use crate::error::{Error, Result};
use crate::info::{conditional_entropy_of, entropy, mi_of};

pub const DEFAULT_SLACK_COEFFICIENT: f64 = 4.0;

/// `c0 |A| |out| delta`.
pub fn default_slack(inputs: usize, outputs: usize, delta: f64) -> f64 {
    DEFAULT_SLACK_COEFFICIENT * (inputs * outputs) as f64 * delta
}

/// `epsilon = 2^{-n c' delta^2}`, `c' = 1/(4 ln 2)`.
pub fn default_epsilon(params: TypicalityParams) -> f64 {
    let c = 1.0 / (4.0 * std::f64::consts::LN_2);
    (-(params.n as f64) * c * params.delta * params.delta).exp2()
}

/// `alpha = 2^{-n (H(pV) + f1)}`.
pub fn alpha(p: &Distribution, eaves: &Channel, n: usize, f1: f64) -> f64 {
    let q = output_distribution(p, eaves).expect("matching alphabets");
    (-(n as f64) * (entropy(&q) + f1)).exp2()
}

/// `beta = 2^{-n (H(V|p) - f2)}`.
pub fn beta(p: &Distribution, eaves: &Channel, n: usize, f2: f64) -> f64 {
    (-(n as f64) * (conditional_entropy_of(p.probs(), eaves) - f2)).exp2()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundBundle {
    pub f1: f64,
    pub f2: f64,
    pub f: f64,
    pub alpha: f64,
    pub beta: f64,
    /// `|T^n_{pV, 2|A| delta}|`, bounded above by `1/alpha`.
    pub output_typical_size: u64,
    /// `max V^n(z|x)` over typical `x` and `z` in `T_{V,delta}(x)`, bounded by `beta`.
    pub max_conditional_probability: f64,
    /// `(n+1)^{|A||B|} 2^{-n (I(p,W) - f)}`.
    pub output_bound: f64,
    /// `max q^n(T_{W,delta}(x))` over typical `x`, with `q = pW`.
    pub max_output_mass: f64,
}

impl BoundBundle {
    pub fn alpha_holds(&self) -> bool {
        self.output_typical_size as f64 <= 1.0 / self.alpha
    }

    pub fn beta_holds(&self) -> bool {
        self.max_conditional_probability <= self.beta
    }

    pub fn output_bound_holds(&self) -> bool {
        self.max_output_mass <= self.output_bound
    }
}

/// Slack functions; `None` entries take the linear default.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Slack {
    pub f1: Option<f64>,
    pub f2: Option<f64>,
    pub f: Option<f64>,
}

/// One representative sequence per type class of `T^n_{p,delta}`; every
/// exact quantity below depends on `x` only through its type.
fn type_representatives(p: &Distribution, params: TypicalityParams, budget: u64) -> Result<Vec<Vec<usize>>> {
    let k = p.len();
    let mut seen = BTreeSet::new();
    for x in typical_set(p, params, budget)? {
        let mut d = digits(x, k, params.n);
        d.sort_unstable();
        seen.insert(d);
    }
    Ok(seen.into_iter().collect())
}

pub fn analytic_bounds(
    p: &Distribution,
    legit: &Channel,
    eaves: &Channel,
    params: TypicalityParams,
    slack: Slack,
    budget: u64,
) -> Result<BoundBundle> {
    let na = p.len();
    if legit.input_size() != na || eaves.input_size() != na {
        return Err(Error::invalid("channel input alphabets must match the distribution"));
    }
    let nb = legit.output_size();
    let limit = 1.0 / (4.0 * (na * nb) as f64);
    if params.delta >= limit {
        return Err(Error::precondition(format!(
            "output bound needs delta < 1/(4|A||B|) = {limit}, got {}",
            params.delta
        )));
    }
    let n = params.n;
    let nc = eaves.output_size();
    let f1 = slack.f1.unwrap_or_else(|| default_slack(na, nc, params.delta));
    let f2 = slack.f2.unwrap_or_else(|| default_slack(na, nc, params.delta));
    let f = slack.f.unwrap_or_else(|| default_slack(na, nb, params.delta));

    let pv = output_distribution(p, eaves)?;
    let wide = TypicalityParams::new(n, 2.0 * na as f64 * params.delta)?;
    let output_typical_size = typical_set(&pv, wide, budget)?.len() as u64;

    let reps = type_representatives(p, params, budget)?;
    let pw = output_distribution(p, legit)?;
    let mut max_conditional_probability: f64 = 0.0;
    let mut max_output_mass: f64 = 0.0;
    for x in &reps {
        for z in conditional_typical_set(eaves, x, params, budget)? {
            let zs = digits(z, nc, n);
            let v: f64 = x.iter().zip(&zs).map(|(&a, &c)| eaves.get(a, c)).product();
            max_conditional_probability = max_conditional_probability.max(v);
        }
        let mass: f64 = conditional_typical_set(legit, x, params, budget)?
            .into_iter()
            .map(|y| digits(y, nb, n).iter().map(|&b| pw.probs()[b]).product::<f64>())
            .sum();
        max_output_mass = max_output_mass.max(mass);
    }
    let output_bound = ((n + 1) as f64).powi((na * nb) as i32) * (-(n as f64) * (mi_of(p.probs(), legit) - f)).exp2();

    Ok(BoundBundle {
        f1,
        f2,
        f,
        alpha: alpha(p, eaves, n, f1),
        beta: beta(p, eaves, n, f2),
        output_typical_size,
        max_conditional_probability,
        output_bound,
        max_output_mass,
    })
}
