//! The two binary-symmetric worked examples.
//!
//! Example 1: with state information at the transmitter, sending message and
//! randomisation jointly at rate `I(p0,W0) - 3ν/4` exceeds the capacity of
//! the compound `{W0, W1}`, while the message alone is still reliable.
//!
//! Example 2: convex families `W_t = D_{f(t)}`, `V_t = D_τ W_t`, where every
//! state has a positive secrecy rate but a single code for all states has
//! none.

use serde::Serialize;

use crate::capacity::{channel_capacity, csi_rate_no_prefix, no_csi_lower, SearchOptions};
use crate::channel::{
    bsc, compose, convex_combine, find_degradation, product_extension, Channel, CompoundWiretap, Distribution, Pairing,
};
use crate::error::{Error, Result, DEFAULT_BUDGET};
use crate::info::{binary_entropy, mi_of};

/// `a ⋆ b = a + b - 2ab`, the crossover of two cascaded binary symmetric channels.
pub fn star(a: f64, b: f64) -> f64 {
    a + b - 2.0 * a * b
}

/// Crossover of `W_t = (1-t) W_0 + t W_1` in the second example.
pub fn example2_crossover(t: f64, eta: f64, tau: f64) -> f64 {
    let s = 2.0 * tau - 2.0 * tau * tau;
    eta + t * s - 2.0 * eta * t * s
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    fn above(name: &str, value: f64, threshold: f64) -> Check {
        Check {
            name: name.to_string(),
            value,
            threshold,
            passed: value > threshold,
        }
    }

    fn at_most(name: &str, value: f64, threshold: f64) -> Check {
        Check {
            name: name.to_string(),
            value,
            threshold,
            passed: value <= threshold,
        }
    }
}

fn binary_grid(points: usize) -> impl Iterator<Item = [f64; 2]> {
    (0..=points).map(move |k| {
        let x = k as f64 / points as f64;
        [1.0 - x, x]
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Example1Params {
    pub eta: f64,
    pub tau: f64,
    pub tau_hat: f64,
    pub nu: f64,
    /// Grid points per unit interval for the input sweeps.
    pub grid: usize,
}

impl Default for Example1Params {
    fn default() -> Self {
        Example1Params {
            eta: 0.01,
            tau: 0.05,
            tau_hat: 0.45,
            nu: 0.01,
            grid: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Example1Report {
    pub params: Example1Params,
    pub legit: Vec<Channel>,
    pub eaves: Vec<Channel>,
    pub i_p0_w0: f64,
    pub i_p0_v0: f64,
    pub i_p0_w1: f64,
    /// `max_p I(p, W1)` over the grid, and its argmax.
    pub grid_capacity_w1: f64,
    pub grid_argmax_w1: Distribution,
    /// Blahut–Arimoto value of `max_p I(p, W1)`.
    pub capacity_w1: f64,
    /// `max_p I(p, V1)` over the grid.
    pub grid_max_v1: f64,
    /// `I(p0,W0) - 3ν/4`, the rate of jointly decoding `(j, l)`.
    pub joint_rate: f64,
    /// `I(p0,W0) - I(p0,V0) - ν`.
    pub message_rate: f64,
    pub checks: Vec<Check>,
}

pub fn example1_compound(p: &Example1Params) -> Result<CompoundWiretap> {
    let w0 = bsc(p.eta)?;
    let v0 = compose(&w0, &bsc(p.tau)?)?;
    let w1 = compose(&v0, &bsc(p.tau_hat)?)?;
    let v1 = bsc(0.5)?;
    CompoundWiretap::new(vec![w0, w1], vec![v0, v1], Pairing::Matched)
}

pub fn run_example1(params: &Example1Params) -> Result<Example1Report> {
    if params.grid == 0 {
        return Err(Error::invalid("grid must have at least one step"));
    }
    let c = example1_compound(params)?;
    let (w0, w1) = (&c.legit()[0], &c.legit()[1]);
    let (v0, v1) = (&c.eaves()[0], &c.eaves()[1]);
    let p0 = [0.5, 0.5];
    let i_p0_w0 = mi_of(&p0, w0);
    let i_p0_v0 = mi_of(&p0, v0);
    let i_p0_w1 = mi_of(&p0, w1);
    let mut best = (f64::NEG_INFINITY, [1.0, 0.0]);
    let mut grid_max_v1: f64 = 0.0;
    for p in binary_grid(params.grid) {
        let v = mi_of(&p, w1);
        if v > best.0 {
            best = (v, p);
        }
        grid_max_v1 = grid_max_v1.max(mi_of(&p, v1));
    }
    let capacity_w1 = channel_capacity(w1).value;
    let joint_rate = i_p0_w0 - 0.75 * params.nu;
    let message_rate = i_p0_w0 - i_p0_v0 - params.nu;
    let checks = vec![
        Check::above(
            "joint rate exceeds max_p I(p,W1) + 1e-3",
            joint_rate - best.0.max(capacity_w1),
            1e-3,
        ),
        Check::above("message rate I(p0,W0) - I(p0,V0) - nu > 1e-3", message_rate, 1e-3),
        Check::at_most("max over grid of I(p,V1)", grid_max_v1, 1e-12),
        Check::at_most("grid argmax of I(p,W1) is uniform", (best.1[0] - 0.5).abs(), 0.0),
    ];
    Ok(Example1Report {
        params: params.clone(),
        legit: c.legit().to_vec(),
        eaves: c.eaves().to_vec(),
        i_p0_w0,
        i_p0_v0,
        i_p0_w1,
        grid_capacity_w1: best.0,
        grid_argmax_w1: Distribution::from_computed(best.1.to_vec()),
        capacity_w1,
        grid_max_v1,
        joint_rate,
        message_rate,
        checks,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Example2Params {
    pub eta: f64,
    pub tau: f64,
    /// Number of equally spaced states on `[0, 1]`.
    pub states: usize,
    /// Grid points per unit interval for binary sweeps.
    pub grid: usize,
    /// Resolution of the simplex grid on pairs of letters.
    pub pair_grid: usize,
}

impl Default for Example2Params {
    fn default() -> Self {
        Example2Params {
            eta: 0.1,
            tau: 0.1,
            states: 21,
            grid: 1000,
            pair_grid: 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Example2State {
    pub t: f64,
    pub f: f64,
    /// `max |W_t - D_f|` entrywise.
    pub legit_residual: f64,
    /// `max |V_t - D_{τ⋆f}|` entrywise.
    pub eaves_residual: f64,
    /// `h(τ⋆f) - h(f)`.
    pub gap: f64,
    /// `V_t` is degraded with respect to `V_0`.
    pub eaves_degraded: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Example2Report {
    pub params: Example2Params,
    pub states: Vec<Example2State>,
    pub min_gap: f64,
    pub csi_rate: f64,
    pub no_csi_raw: f64,
    /// `max_p (I(p, W_1) - max_t I(p, V_t))` over binary inputs.
    pub single_letter_margin: f64,
    /// The same on pairs of letters, over a simplex grid of `P({0,1}^2)`.
    pub two_letter_margin: f64,
    /// `max_p |max_t I(p, V_t^n) - I(p, V_0^n)|` over the tested inputs, `n = 1, 2`.
    pub worst_eaves_deviation: f64,
    pub checks: Vec<Check>,
}

/// The discretized convex family, states paired `(W_t, V_t)`.
pub fn example2_compound(p: &Example2Params) -> Result<CompoundWiretap> {
    if p.states < 2 {
        return Err(Error::invalid("the family needs at least two states"));
    }
    let w0 = bsc(p.eta)?;
    let v0 = compose(&w0, &bsc(p.tau)?)?;
    let w1 = compose(&v0, &bsc(p.tau)?)?;
    let v1 = compose(&w1, &bsc(p.tau)?)?;
    let mut legit = Vec::with_capacity(p.states);
    let mut eaves = Vec::with_capacity(p.states);
    for k in 0..p.states {
        let t = k as f64 / (p.states - 1) as f64;
        let weights = Distribution::new(vec![1.0 - t, t])?;
        legit.push(convex_combine(&[w0.clone(), w1.clone()], &weights)?);
        eaves.push(convex_combine(&[v0.clone(), v1.clone()], &weights)?);
    }
    CompoundWiretap::new(legit, eaves, Pairing::Matched)
}

fn simplex_grid(dim: usize, resolution: usize) -> Vec<Vec<f64>> {
    fn rec(dim: usize, left: usize, res: usize, cur: &mut Vec<f64>, out: &mut Vec<Vec<f64>>) {
        if dim == 1 {
            cur.push(left as f64 / res as f64);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in 0..=left {
            cur.push(k as f64 / res as f64);
            rec(dim - 1, left - k, res, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, resolution, resolution, &mut Vec::new(), &mut out);
    out
}

pub fn run_example2(params: &Example2Params, opts: &SearchOptions) -> Result<Example2Report> {
    let c = example2_compound(params)?;
    let (eta, tau) = (params.eta, params.tau);
    let v0 = &c.eaves()[0];
    let w1 = &c.legit()[params.states - 1];
    let mut states = Vec::with_capacity(params.states);
    for (k, (w, v)) in c.legit().iter().zip(c.eaves()).enumerate() {
        let t = k as f64 / (params.states - 1) as f64;
        let f = example2_crossover(t, eta, tau);
        let legit_residual = w.max_abs_diff(&bsc(f)?).expect("binary channels");
        let eaves_residual = v.max_abs_diff(&bsc(star(tau, f))?).expect("binary channels");
        states.push(Example2State {
            t,
            f,
            legit_residual,
            eaves_residual,
            gap: binary_entropy(star(tau, f))? - binary_entropy(f)?,
            eaves_degraded: find_degradation(v0, v)?.is_some(),
        });
    }
    let min_gap = states.iter().map(|s| s.gap).fold(f64::INFINITY, f64::min);
    let csi_rate = csi_rate_no_prefix(&c, opts)?.value;
    let no_csi_raw = no_csi_lower(&c, opts)?.raw_value;

    let margin = |p: &[f64], w: &Channel, vs: &[Channel], v0: &Channel, dev: &mut f64| {
        let worst = vs.iter().map(|v| mi_of(p, v)).fold(f64::NEG_INFINITY, f64::max);
        *dev = dev.max((worst - mi_of(p, v0)).abs());
        mi_of(p, w) - worst
    };
    let mut deviation: f64 = 0.0;
    let single_letter_margin = binary_grid(params.grid)
        .map(|p| margin(&p, w1, c.eaves(), v0, &mut deviation))
        .fold(f64::NEG_INFINITY, f64::max);
    let w1_2 = product_extension(w1, 2, DEFAULT_BUDGET)?;
    let v0_2 = product_extension(v0, 2, DEFAULT_BUDGET)?;
    let vs_2 = c
        .eaves()
        .iter()
        .map(|v| product_extension(v, 2, DEFAULT_BUDGET))
        .collect::<Result<Vec<_>>>()?;
    let two_letter_margin = simplex_grid(4, params.pair_grid)
        .iter()
        .map(|p| margin(p, &w1_2, &vs_2, &v0_2, &mut deviation))
        .fold(f64::NEG_INFINITY, f64::max);

    let max_residual = states
        .iter()
        .map(|s| s.legit_residual.max(s.eaves_residual))
        .fold(0.0, f64::max);
    let checks = vec![
        Check::at_most("W_t equals D_f entrywise", max_residual, 1e-12),
        Check::above("min_t h(tau*f) - h(f)", min_gap, 1e-3),
        Check::above("state-wise secrecy rate of the family", csi_rate, 0.0),
        Check::at_most("no-CSI single-letter rate (raw)", no_csi_raw, 1e-6),
        Check::at_most(
            "V_t degraded from V_0 for all t (violations)",
            states.iter().filter(|s| !s.eaves_degraded).count() as f64,
            0.0,
        ),
        Check::at_most(
            "max_p I(p,W_1) - max_t I(p,V_t), one letter",
            single_letter_margin,
            1e-12,
        ),
        Check::at_most(
            "max_p I(p,W_1^2) - max_t I(p,V_t^2), two letters",
            two_letter_margin,
            1e-12,
        ),
        Check::at_most("|max_t I(p,V_t^n) - I(p,V_0^n)|", deviation, 1e-12),
    ];
    Ok(Example2Report {
        params: params.clone(),
        states,
        min_gap,
        csi_rate,
        no_csi_raw,
        single_letter_margin,
        two_letter_margin,
        worst_eaves_deviation: deviation,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossover_endpoints() {
        assert_eq!(example2_crossover(0.0, 0.1, 0.1), 0.1);
        let f1 = example2_crossover(1.0, 0.1, 0.1);
        assert!((f1 - 0.244).abs() < 1e-15);
        assert!((star(0.1, f1) - 0.2952).abs() < 1e-15);
    }

    #[test]
    fn simplex_grid_size() {
        assert_eq!(simplex_grid(4, 20).len(), 1771);
        assert!(simplex_grid(3, 5)
            .iter()
            .all(|p| (p.iter().sum::<f64>() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn example1_checks_pass() {
        let r = run_example1(&Example1Params::default()).unwrap();
        for c in &r.checks {
            assert!(c.passed, "{c:?}");
        }
    }
}
