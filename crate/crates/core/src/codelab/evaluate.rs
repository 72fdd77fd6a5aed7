//! Exact decoding error, leakage and expurgation by full enumeration of the
//! output spaces.

use rayon::prelude::*;
use serde::Serialize;

use super::codebook::{CodeBlock, Codebook};
use super::decoder::DecoderSets;
use super::typical::digits;
use crate::channel::{Channel, CompoundWiretap};
use crate::error::{checked_power, Error, Result};
use crate::info::{entropy_of, l1};

/// `V^n(.|x)` over all output sequences, position 0 most significant.
pub fn output_vector(channel: &Channel, x: &[usize]) -> Vec<f64> {
    let nc = channel.output_size();
    let mut out = vec![1.0];
    for &a in x {
        let row = channel.row(a);
        let mut next = Vec::with_capacity(out.len() * nc);
        for v in &out {
            next.extend(row.iter().map(|w| v * w));
        }
        out = next;
    }
    out
}

/// `(1/L) Σ_l V^n(.|x_{jl})` for every message of a block.
pub fn message_outputs(
    codebook: &Codebook,
    block: &CodeBlock,
    channel: &Channel,
    budget: u64,
) -> Result<Vec<Vec<f64>>> {
    let size = checked_power(channel.output_size(), codebook.n, budget, "output space")? as usize;
    let l = block.randomization() as f64;
    Ok(block
        .words
        .par_iter()
        .map(|row| {
            let mut acc = vec![0.0; size];
            for &x in row {
                let v = output_vector(channel, &digits(x, codebook.input_size, codebook.n));
                for (a, b) in acc.iter_mut().zip(&v) {
                    *a += b / l;
                }
            }
            acc
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StateError {
    pub block: usize,
    pub legit: usize,
    pub avg_error: f64,
    pub per_message: Vec<f64>,
}

/// Average over messages and randomisation of `W_t^n(D_j^c | x_{jl})`, for
/// every block and legitimate state of the block.
pub fn evaluate_error(
    codebook: &Codebook,
    decoder: &DecoderSets,
    compound: &CompoundWiretap,
    budget: u64,
) -> Result<Vec<StateError>> {
    if decoder.sets.len() != codebook.messages {
        return Err(Error::invalid("decoder and codebook disagree on the message count"));
    }
    let mut out = Vec::new();
    for (b, block) in codebook.blocks.iter().enumerate() {
        for &t in &block.legit {
            let outputs = message_outputs(codebook, block, &compound.legit()[t], budget)?;
            let per_message: Vec<f64> = outputs
                .iter()
                .zip(&decoder.sets)
                .map(|(v, set)| {
                    let hit: f64 = set.ones().map(|y| v[y]).sum();
                    (1.0 - hit).clamp(0.0, 1.0)
                })
                .collect();
            let avg_error = per_message.iter().sum::<f64>() / per_message.len() as f64;
            out.push(StateError {
                block: b,
                legit: t,
                avg_error,
                per_message,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StateLeakage {
    pub block: usize,
    pub eaves: usize,
    /// `I(J; Z^n)` for uniform messages.
    pub leakage_bits: f64,
    /// `max_j ||V̂_j - V̄||`.
    pub max_tv: f64,
}

/// `I(J;Z^n)` from the message-conditional output distributions.
pub fn leakage_of(outputs: &[Vec<f64>]) -> (f64, f64) {
    let count = outputs.len() as f64;
    let mut mean = vec![0.0; outputs[0].len()];
    for v in outputs {
        for (m, x) in mean.iter_mut().zip(v) {
            *m += x / count;
        }
    }
    let conditional: f64 = outputs.iter().map(|v| entropy_of(v)).sum::<f64>() / count;
    let leakage = (entropy_of(&mean) - conditional).max(0.0);
    let max_tv = outputs.iter().map(|v| l1(v, &mean)).fold(0.0, f64::max);
    (leakage, max_tv)
}

pub fn evaluate_leakage(codebook: &Codebook, compound: &CompoundWiretap, budget: u64) -> Result<Vec<StateLeakage>> {
    let mut out = Vec::new();
    for (b, block) in codebook.blocks.iter().enumerate() {
        for &s in &block.eaves {
            let outputs = message_outputs(codebook, block, &compound.eaves()[s], budget)?;
            let (leakage_bits, max_tv) = leakage_of(&outputs);
            out.push(StateLeakage {
                block: b,
                eaves: s,
                leakage_bits,
                max_tv,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Expurgation {
    pub eta: f64,
    /// Original indices of the surviving messages, ascending.
    pub kept: Vec<usize>,
    pub removed_fraction: f64,
    /// Largest per-message error over kept messages, per error state.
    pub max_error: Vec<f64>,
    /// `Σ_t λ_t / sqrt(eta)`, the Markov count of removed messages.
    pub markov_bound: f64,
    /// `T sqrt(eta)`; dominates `markov_bound` when `eta >= max_t λ_t`.
    pub count_bound: f64,
    pub empty: bool,
    #[serde(skip)]
    pub codebook: Codebook,
    #[serde(skip)]
    pub decoder: DecoderSets,
}

/// Removes every message whose error exceeds `sqrt(eta)` in some state and
/// relabels the rest; decoding sets of kept messages are unchanged.
pub fn expurgate(codebook: &Codebook, decoder: &DecoderSets, errors: &[StateError], eta: f64) -> Result<Expurgation> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::invalid(format!("eta must lie in (0, 1], got {eta}")));
    }
    let threshold = eta.sqrt();
    let kept: Vec<usize> = (0..codebook.messages)
        .filter(|&j| errors.iter().all(|e| e.per_message[j] <= threshold))
        .collect();
    let max_error = errors
        .iter()
        .map(|e| kept.iter().map(|&j| e.per_message[j]).fold(0.0, f64::max))
        .collect();
    let markov_bound = errors.iter().map(|e| e.avg_error).sum::<f64>() / threshold;
    Ok(Expurgation {
        eta,
        removed_fraction: 1.0 - kept.len() as f64 / codebook.messages as f64,
        max_error,
        markov_bound,
        count_bound: errors.len() as f64 * threshold,
        empty: kept.is_empty(),
        codebook: codebook.restrict(&kept),
        decoder: decoder.restrict(&kept),
        kept,
    })
}
