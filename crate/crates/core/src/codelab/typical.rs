//! Exact enumeration of frequency-typical sets.
//!
//! `x^n` is `(p, delta)`-typical when `|N(a|x^n) - n p(a)| <= n delta` for
//! every `a`, and `N(a|x^n) = 0` wherever `p(a) = 0`. `y^n` is conditionally
//! `(W, delta)`-typical given `x^n` when the joint counts satisfy
//! `|N(a,b) - N(a) W(b|a)| <= n delta`, with `N(a,b) = 0` wherever
//! `W(b|a) = 0`.
//!
//! Sequences are indices in radix `|alphabet|` with position 0 the most
//! significant digit; every set comes back sorted ascending.

use serde::Serialize;

use crate::channel::{Channel, Distribution};
use crate::error::{checked_power, Error, Result};

/// Slack on count comparisons so that exact boundary cases are kept.
const COUNT_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TypicalityParams {
    pub n: usize,
    pub delta: f64,
}

impl TypicalityParams {
    pub fn new(n: usize, delta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("blocklength must be positive"));
        }
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::invalid(format!("delta must be positive, got {delta}")));
        }
        Ok(TypicalityParams { n, delta })
    }
}

/// Digits of sequence `index` (most significant first).
pub fn digits(mut index: u64, radix: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for i in (0..n).rev() {
        out[i] = (index % radix as u64) as usize;
        index /= radix as u64;
    }
    out
}

pub fn index_of(seq: &[usize], radix: usize) -> u64 {
    seq.iter().fold(0u64, |acc, &d| acc * radix as u64 + d as u64)
}

/// Count bounds `(lo, hi)` for `N(a, b)` given `N(a) = total`.
fn count_bounds(total: usize, prob: f64, slack: f64) -> (usize, usize) {
    if prob == 0.0 {
        return (0, 0);
    }
    let centre = total as f64 * prob;
    let lo = (centre - slack - COUNT_SLACK).ceil().max(0.0) as usize;
    let hi = ((centre + slack + COUNT_SLACK).floor() as usize).min(total);
    (lo, hi)
}

/// Conditionally typical outputs given the input sequence `x`.
pub fn conditional_typical_set(
    channel: &Channel,
    x: &[usize],
    params: TypicalityParams,
    budget: u64,
) -> Result<Vec<u64>> {
    if x.len() != params.n {
        return Err(Error::invalid(format!(
            "input sequence has length {}, blocklength is {}",
            x.len(),
            params.n
        )));
    }
    checked_power(channel.output_size(), params.n, budget, "output sequence space")?;
    let nb = channel.output_size();
    let na = channel.input_size();
    if let Some(a) = x.iter().find(|&&a| a >= na) {
        return Err(Error::invalid(format!(
            "input symbol {a} outside alphabet of size {na}"
        )));
    }
    let slack = params.n as f64 * params.delta;
    let mut totals = vec![0usize; na];
    for &a in x {
        totals[a] += 1;
    }
    let mut lo = vec![0usize; na * nb];
    let mut hi = vec![0usize; na * nb];
    for a in 0..na {
        if totals[a] == 0 {
            continue;
        }
        let mut sum_lo = 0;
        let mut sum_hi = 0;
        for b in 0..nb {
            let (l, h) = count_bounds(totals[a], channel.get(a, b), slack);
            if l > h {
                return Ok(Vec::new());
            }
            lo[a * nb + b] = l;
            hi[a * nb + b] = h;
            sum_lo += l;
            sum_hi += h;
        }
        if sum_lo > totals[a] || sum_hi < totals[a] {
            return Ok(Vec::new());
        }
    }
    let mut out = Vec::new();
    let mut counts = vec![0usize; na * nb];
    let mut remaining = totals.clone();
    // deficit[a] = sum_b max(0, lo(a,b) - counts(a,b))
    let mut deficit: Vec<usize> = (0..na).map(|a| lo[a * nb..(a + 1) * nb].iter().sum()).collect();
    dfs(
        x,
        0,
        0,
        nb,
        &hi,
        &lo,
        &mut counts,
        &mut remaining,
        &mut deficit,
        &mut out,
    );
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    x: &[usize],
    pos: usize,
    prefix: u64,
    nb: usize,
    hi: &[usize],
    lo: &[usize],
    counts: &mut [usize],
    remaining: &mut [usize],
    deficit: &mut [usize],
    out: &mut Vec<u64>,
) {
    if pos == x.len() {
        out.push(prefix);
        return;
    }
    let a = x[pos];
    remaining[a] -= 1;
    for b in 0..nb {
        let cell = a * nb + b;
        if counts[cell] >= hi[cell] {
            continue;
        }
        let fills = counts[cell] < lo[cell];
        let new_deficit = deficit[a] - usize::from(fills);
        if new_deficit > remaining[a] {
            continue;
        }
        counts[cell] += 1;
        deficit[a] = new_deficit;
        dfs(
            x,
            pos + 1,
            prefix * nb as u64 + b as u64,
            nb,
            hi,
            lo,
            counts,
            remaining,
            deficit,
            out,
        );
        counts[cell] -= 1;
        deficit[a] += usize::from(fills);
    }
    remaining[a] += 1;
}

/// Typical sequences of `p`; the one-row-channel case of the conditional set.
pub fn typical_set(p: &Distribution, params: TypicalityParams, budget: u64) -> Result<Vec<u64>> {
    let row = Channel::from_distribution(p);
    conditional_typical_set(&row, &vec![0; params.n], params, budget)
}

/// `p^n(x^n)` for a sequence index.
pub fn sequence_probability(p: &[f64], index: u64, n: usize) -> f64 {
    digits(index, p.len(), n).iter().map(|&a| p[a]).product()
}

/// `W^n(y^n | x^n)`.
pub fn transition_probability(channel: &Channel, x: &[usize], y: u64) -> f64 {
    let ys = digits(y, channel.output_size(), x.len());
    x.iter().zip(&ys).map(|(&a, &b)| channel.get(a, b)).product()
}

/// Explicit lower bound `1 - (n+1)^k 2^{-n c delta^2}`, `c = 1/(2 ln 2)`, on
/// typical-set mass; `k = |A|` unconditionally and `|A||B|` conditionally.
pub fn typical_mass_bound(n: usize, k: usize, delta: f64) -> f64 {
    let c = 1.0 / (2.0 * std::f64::consts::LN_2);
    1.0 - ((n + 1) as f64).powi(k as i32) * (-(n as f64) * c * delta * delta).exp2()
}
