//! Rate formulas with an auxiliary prefix channel `U -> A` (or `U -> A^n`).

use rayon::prelude::*;
use serde::Serialize;

use super::objective::{Objective, PrefixObjective};
use super::optimizer::maximize;
use super::regimes::{no_csi_lower, per_unit_optima};
use super::{first_min, term, to_distribution, AuxiliaryChannel, RateReport, Regime, SearchOptions};
use crate::channel::{output_mix, product_extension, Channel, CompoundWiretap};
use crate::error::{checked_power, Error, Result};

const KEY_PREFIX: u64 = 4 << 32;
const KEY_LADDER: u64 = 5 << 32;

fn auxiliary(obj: &PrefixObjective<'_>, x: &[f64]) -> (AuxiliaryChannel, Vec<f64>) {
    let (pi, prefix) = obj.split(x);
    let rows: Vec<Vec<f64>> = prefix
        .chunks_exact(obj.inputs())
        .map(|r| {
            let total: f64 = r.iter().sum();
            r.iter().map(|v| v / total).collect()
        })
        .collect();
    let prefix = Channel::new(rows).expect("optimizer rows lie on the simplex");
    let prior = to_distribution(pi);
    let induced = output_mix(prior.probs(), &prefix);
    (AuxiliaryChannel { prior, prefix }, induced)
}

/// Flat point putting the input `p` on the first `|A|` auxiliary symbols
/// with a noiseless prefix; the remaining symbols get zero prior.
fn identity_embedding(p: &[f64], aux: usize) -> Vec<f64> {
    let k = p.len();
    let mut x = vec![0.0; aux + aux * k];
    x[..k].copy_from_slice(p);
    for u in 0..aux {
        let row = &mut x[aux + u * k..aux + (u + 1) * k];
        if u < k {
            row[u] = 1.0;
        } else {
            row.fill(1.0 / k as f64);
        }
    }
    x
}

/// `min_{(t,s)} max_{U -> A} (I(U; Y_t) - I(U; Z_s))` with `|U| = aux`.
///
/// Each pair is seeded with its no-prefix optimum embedded through the
/// identity prefix (when `aux >= |A|`), so the result never falls below the
/// no-prefix rate.
pub fn csi_rate_with_prefix(compound: &CompoundWiretap, aux: usize, opts: &SearchOptions) -> Result<RateReport> {
    if aux == 0 {
        return Err(Error::invalid("auxiliary cardinality must be at least 1"));
    }
    let k = compound.input_size();
    let base = per_unit_optima(compound, opts);
    let solved: Vec<_> = base
        .par_iter()
        .enumerate()
        .map(|(i, &((t, s), ref opt))| {
            let obj = PrefixObjective::new(
                vec![&compound.legit()[t]],
                vec![&compound.eaves()[s]],
                vec![(0, 0)],
                aux,
            );
            let seeds = if aux >= k {
                vec![identity_embedding(&opt.x, aux)]
            } else {
                Vec::new()
            };
            let best = maximize(&obj, &opts.plan(KEY_PREFIX + i as u64, &seeds));
            let e = obj.evaluate(&best.x, false);
            let (aux_ch, induced) = auxiliary(&obj, &best.x);
            ((t, s), e.legit[0], e.eaves[0], aux_ch, induced, best.method)
        })
        .collect();
    let mut report = RateReport {
        regime: Regime::CsiPrefix,
        value: 0.0,
        raw_value: 0.0,
        inputs: Vec::new(),
        auxiliaries: Vec::new(),
        terms: Vec::new(),
        binding: 0,
        method: solved[0].5,
        lower_bound: true,
        upper_bound: None,
        blocklength: 1,
    };
    let mut methods = Vec::new();
    for (i, ((t, s), il, ie, aux_ch, induced, method)) in solved.into_iter().enumerate() {
        report.terms.push(term(t, s, i, il, ie));
        report.auxiliaries.push(aux_ch);
        report.inputs.push(to_distribution(&induced));
        methods.push(method);
    }
    let (raw, binding) = first_min(&report.terms);
    report.value = raw;
    report.raw_value = raw;
    report.binding = binding;
    report.method = methods[binding];
    Ok(report)
}

/// One rung of the multi-letter ladder.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LadderLevel {
    pub n: usize,
    /// `max_{U -> A^n} (min_t I(U; Y_t^n) - max_s I(U; Z_s^n))`, in bits per block.
    pub a_n: f64,
    /// The level's report, normalized per letter (`value = a_n / n`).
    pub report: RateReport,
}

/// Product of two auxiliaries: `U = (U1, U2)` and prefix `P1 x P2`, with the
/// first factor on the most significant digits.
fn product_point(x1: &[f64], aux1: usize, k1: usize, x2: &[f64], aux2: usize, k2: usize, aux: usize) -> Vec<f64> {
    let inputs = k1 * k2;
    let mut x = vec![0.0; aux + aux * inputs];
    let (pi1, pre1) = x1.split_at(aux1);
    let (pi2, pre2) = x2.split_at(aux2);
    for u1 in 0..aux1 {
        for u2 in 0..aux2 {
            let u = u1 * aux2 + u2;
            x[u] = pi1[u1] * pi2[u2];
            let row = &mut x[aux + u * inputs..aux + (u + 1) * inputs];
            for a1 in 0..k1 {
                for a2 in 0..k2 {
                    row[a1 * k2 + a2] = pre1[u1 * k1 + a1] * pre2[u2 * k2 + a2];
                }
            }
        }
    }
    for u in aux1 * aux2..aux {
        x[aux + u * inputs..aux + (u + 1) * inputs].fill(1.0 / inputs as f64);
    }
    x
}

/// Ladder `a_1, ..., a_{n_max}` for the no-CSI multi-letter expression.
///
/// `aux = None` uses `|U| = (|A| + 1)^n` at level `n`, which is closed under
/// the product construction: each level is seeded with products of every
/// pair of lower-level solutions, so the computed ladder is superadditive up
/// to rounding.
pub fn multiletter_ladder(
    compound: &CompoundWiretap,
    n_max: usize,
    aux: Option<usize>,
    opts: &SearchOptions,
) -> Result<Vec<LadderLevel>> {
    if n_max == 0 {
        return Err(Error::invalid("ladder needs at least one level"));
    }
    if aux == Some(0) {
        return Err(Error::invalid("auxiliary cardinality must be at least 1"));
    }
    let k = compound.input_size();
    let base = no_csi_lower(compound, opts)?;
    let p1 = base.inputs[0].probs().to_vec();
    let mut solutions: Vec<(Vec<f64>, usize)> = Vec::new();
    let mut levels = Vec::new();
    for n in 1..=n_max {
        let kn = checked_power(k, n, opts.budget, "multi-letter input alphabet")? as usize;
        let card = match aux {
            Some(a) => a,
            None => checked_power(k + 1, n, opts.budget, "multi-letter auxiliary alphabet")? as usize,
        };
        let vars = card as u128 * (kn as u128 + 1);
        if vars > opts.budget as u128 {
            return Err(Error::Resource {
                what: format!("{n}-letter prefix channel"),
                required: vars,
                budget: opts.budget as u128,
            });
        }
        let legit: Vec<Channel> = compound
            .legit()
            .iter()
            .map(|w| product_extension(w, n, opts.budget))
            .collect::<Result<_>>()?;
        let eaves: Vec<Channel> = compound
            .eaves()
            .iter()
            .map(|v| product_extension(v, n, opts.budget))
            .collect::<Result<_>>()?;
        let units: Vec<(usize, usize)> = (0..legit.len())
            .flat_map(|t| (0..eaves.len()).map(move |s| (t, s)))
            .collect();
        let obj = PrefixObjective::new(legit.iter().collect(), eaves.iter().collect(), units, card);

        let mut seeds = Vec::new();
        if card >= kn {
            let mut iid = vec![1.0];
            for _ in 0..n {
                iid = iid.iter().flat_map(|a| p1.iter().map(move |b| a * b)).collect();
            }
            seeds.push(identity_embedding(&iid, card));
        }
        for m in 1..n {
            let (x1, c1) = &solutions[m - 1];
            let (x2, c2) = &solutions[n - m - 1];
            if c1 * c2 <= card {
                seeds.push(product_point(
                    x1,
                    *c1,
                    k.pow(m as u32),
                    x2,
                    *c2,
                    k.pow((n - m) as u32),
                    card,
                ));
            }
        }
        let best = maximize(&obj, &opts.plan(KEY_LADDER + n as u64, &seeds));
        let e = obj.evaluate(&best.x, false);
        let (aux_ch, induced) = auxiliary(&obj, &best.x);
        let nf = n as f64;
        let mut terms = Vec::new();
        for (t, il) in e.legit.iter().enumerate() {
            for (s, ie) in e.eaves.iter().enumerate() {
                terms.push(term(t, s, 0, il / nf, ie / nf));
            }
        }
        let (raw, binding) = first_min(&terms);
        let a_n = e.value(obj.units()).0;
        levels.push(LadderLevel {
            n,
            a_n,
            report: RateReport {
                regime: Regime::Multiletter,
                value: raw,
                raw_value: raw,
                inputs: vec![to_distribution(&induced)],
                auxiliaries: vec![aux_ch],
                terms,
                binding,
                method: best.method,
                lower_bound: true,
                upper_bound: None,
                blocklength: n,
            },
        });
        solutions.push((best.x, card));
    }
    Ok(levels)
}

/// `a_n / n` at level `n` of [`multiletter_ladder`].
pub fn multiletter_rate(
    compound: &CompoundWiretap,
    n: usize,
    aux: Option<usize>,
    opts: &SearchOptions,
) -> Result<RateReport> {
    let mut ladder = multiletter_ladder(compound, n, aux, opts)?;
    Ok(ladder.pop().expect("ladder has n levels").report)
}
