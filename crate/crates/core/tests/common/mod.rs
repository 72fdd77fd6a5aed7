//! Brute-force reference implementations used as oracles. They share nothing
//! with the library beyond reading channel entries.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wiretap_core::{Channel, CompoundWiretap, Pairing};

pub fn seq(mut index: u64, radix: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for i in (0..n).rev() {
        out[i] = (index % radix as u64) as usize;
        index /= radix as u64;
    }
    out
}

pub fn pow(radix: usize, n: usize) -> u64 {
    (radix as u64).pow(n as u32)
}

pub fn is_typical(x: &[usize], p: &[f64], delta: f64) -> bool {
    let n = x.len() as f64;
    (0..p.len()).all(|a| {
        let count = x.iter().filter(|&&s| s == a).count() as f64;
        if p[a] == 0.0 {
            count == 0.0
        } else {
            (count / n - p[a]).abs() <= delta + 1e-12
        }
    })
}

pub fn is_cond_typical(x: &[usize], y: &[usize], w: &Channel, delta: f64) -> bool {
    let n = x.len() as f64;
    for a in 0..w.input_size() {
        let na = x.iter().filter(|&&s| s == a).count() as f64;
        for b in 0..w.output_size() {
            let nab = x.iter().zip(y).filter(|(&s, &t)| s == a && t == b).count() as f64;
            if w.get(a, b) == 0.0 {
                if nab > 0.0 {
                    return false;
                }
            } else if ((nab - na * w.get(a, b)) / n).abs() > delta + 1e-12 {
                return false;
            }
        }
    }
    true
}

pub fn trans(w: &Channel, x: &[usize], y: &[usize]) -> f64 {
    x.iter().zip(y).map(|(&a, &b)| w.get(a, b)).product()
}

/// Entropy in bits.
pub fn h(p: &[f64]) -> f64 {
    p.iter().filter(|x| **x > 0.0).map(|x| -x * x.log2()).sum()
}

pub fn h2(x: f64) -> f64 {
    h(&[x, 1.0 - x])
}

pub fn mi(p: &[f64], w: &Channel) -> f64 {
    let nb = w.output_size();
    let mut q = vec![0.0; nb];
    let mut joint = 0.0;
    for (a, pa) in p.iter().enumerate() {
        for b in 0..nb {
            q[b] += pa * w.get(a, b);
            if pa * w.get(a, b) > 0.0 {
                joint -= pa * w.get(a, b) * (pa * w.get(a, b)).log2();
            }
        }
    }
    let hp = h(p);
    (hp + h(&q) - joint).max(0.0)
}

/// Exact average error of the decoder built from conditional typicality,
/// by testing every output against every word.
pub fn naive_error(words: &[Vec<u64>], w: &Channel, radix: usize, n: usize, delta: f64) -> (f64, Vec<f64>) {
    let nb = w.output_size();
    let j_count = words.len();
    let mut hits = vec![0.0; j_count];
    for y in 0..pow(nb, n) {
        let ys = seq(y, nb, n);
        let members: Vec<usize> = (0..j_count)
            .filter(|&j| {
                words[j]
                    .iter()
                    .any(|&x| is_cond_typical(&seq(x, radix, n), &ys, w, delta))
            })
            .collect();
        if members.len() == 1 {
            let j = members[0];
            let l = words[j].len() as f64;
            hits[j] += words[j].iter().map(|&x| trans(w, &seq(x, radix, n), &ys)).sum::<f64>() / l;
        }
    }
    let per: Vec<f64> = hits.iter().map(|x| 1.0 - x).collect();
    (per.iter().sum::<f64>() / j_count as f64, per)
}

pub fn message_output(words: &[u64], v: &Channel, radix: usize, n: usize) -> Vec<f64> {
    let nc = v.output_size();
    (0..pow(nc, n))
        .map(|z| {
            let zs = seq(z, nc, n);
            words.iter().map(|&x| trans(v, &seq(x, radix, n), &zs)).sum::<f64>() / words.len() as f64
        })
        .collect()
}

/// `I(J; Z^n) = (1/J) Σ_j D(V̂_j || V̄)`.
pub fn naive_leakage(words: &[Vec<u64>], v: &Channel, radix: usize, n: usize) -> f64 {
    let outs: Vec<Vec<f64>> = words.iter().map(|row| message_output(row, v, radix, n)).collect();
    let j = outs.len() as f64;
    let size = outs[0].len();
    let mean: Vec<f64> = (0..size).map(|z| outs.iter().map(|o| o[z]).sum::<f64>() / j).collect();
    outs.iter()
        .map(|o| {
            o.iter()
                .zip(&mean)
                .filter(|(a, _)| **a > 0.0)
                .map(|(a, m)| a * (a / m).log2())
                .sum::<f64>()
        })
        .sum::<f64>()
        / j
}

/// `max over the 1e-3 grid of min_k (I(p,W_t) - I(p,V_s))` on the given pairs,
/// binary inputs.
pub fn sweep_binary(legit: &[Channel], eaves: &[Channel], units: &[(usize, usize)], steps: usize) -> f64 {
    (0..=steps)
        .map(|k| {
            let x = k as f64 / steps as f64;
            let p = [1.0 - x, x];
            units
                .iter()
                .map(|&(t, s)| mi(&p, &legit[t]) - mi(&p, &eaves[s]))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_channel(r: &mut ChaCha8Rng, inputs: usize, outputs: usize) -> Channel {
    let rows = (0..inputs)
        .map(|_| {
            let w: Vec<f64> = (0..outputs).map(|_| r.random::<f64>() + 1e-3).collect();
            let s: f64 = w.iter().sum();
            w.iter().map(|x| x / s).collect()
        })
        .collect();
    Channel::new(rows).unwrap()
}

/// Random channel pulled towards the constant uniform channel, so that
/// secrecy rates are not all zero.
pub fn blurred_channel(r: &mut ChaCha8Rng, inputs: usize, outputs: usize) -> Channel {
    let base = random_channel(r, inputs, outputs);
    let lambda = r.random_range(0.2..0.8);
    let rows = base
        .rows()
        .map(|row| {
            row.iter()
                .map(|x| (1.0 - lambda) * x + lambda / outputs as f64)
                .collect()
        })
        .collect();
    Channel::new(rows).unwrap()
}

/// Binary-input compound with up to `max_states` states per side.
pub fn random_binary_compound(r: &mut ChaCha8Rng, max_states: usize) -> CompoundWiretap {
    let t = r.random_range(1..=max_states);
    let s = r.random_range(1..=max_states);
    let nb = r.random_range(2..=3);
    let nc = r.random_range(2..=3);
    let legit = (0..t).map(|_| random_channel(r, 2, nb)).collect();
    let eaves = (0..s).map(|_| blurred_channel(r, 2, nc)).collect();
    let pairing = if t == s && r.random::<bool>() {
        Pairing::Matched
    } else {
        Pairing::Product
    };
    CompoundWiretap::new(legit, eaves, pairing).unwrap()
}
