//! Optimal eavesdropper strategies against a fixed stochastic encoder: the
//! maximum-a-posteriori message decoder and per-message likelihood-ratio
//! identification tests, each next to its leakage-based lower bound.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::Channel;
use crate::codelab::{leakage_of, message_outputs, Codebook};
use crate::error::{Error, Result};
use crate::info::PINSKER_CONSTANT;
use crate::rng;

const PARTITION_TAG: u64 = 0x9A27_1710;
const BOUND_SLACK: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecodingAttack {
    pub messages: usize,
    /// Exact average error of the MAP decoder.
    pub avg_error: f64,
    pub leakage_bits: f64,
    /// `1 - 1/J - c sqrt(leakage)`.
    pub bound: f64,
    pub holds: bool,
    /// MAP guess per eavesdropper output; ties go to the smaller message.
    #[serde(skip)]
    pub partition: Vec<usize>,
}

fn block_outputs(codebook: &Codebook, block: usize, eaves: &Channel, budget: u64) -> Result<Vec<Vec<f64>>> {
    let b = codebook
        .blocks
        .get(block)
        .ok_or_else(|| Error::invalid(format!("block {block} out of range ({} blocks)", codebook.blocks.len())))?;
    if eaves.input_size() != codebook.input_size {
        return Err(Error::invalid(
            "eavesdropper channel does not match the codebook alphabet",
        ));
    }
    if codebook.messages == 0 {
        return Err(Error::invalid("codebook has no messages"));
    }
    message_outputs(codebook, b, eaves, budget)
}

/// Error of a decoder that maps output `z` to message `partition[z]`.
pub fn partition_error(outputs: &[Vec<f64>], partition: &[usize]) -> f64 {
    let correct: f64 = partition.iter().enumerate().map(|(z, &j)| outputs[j][z]).sum();
    (1.0 - correct / outputs.len() as f64).clamp(0.0, 1.0)
}

pub fn map_partition(outputs: &[Vec<f64>]) -> Vec<usize> {
    (0..outputs[0].len())
        .map(|z| {
            let mut best = 0;
            for j in 1..outputs.len() {
                if outputs[j][z] > outputs[best][z] {
                    best = j;
                }
            }
            best
        })
        .collect()
}

pub fn best_decoding_attack(codebook: &Codebook, block: usize, eaves: &Channel, budget: u64) -> Result<DecodingAttack> {
    let outputs = block_outputs(codebook, block, eaves, budget)?;
    let (leakage_bits, _) = leakage_of(&outputs);
    let partition = map_partition(&outputs);
    let avg_error = partition_error(&outputs, &partition);
    let j = outputs.len() as f64;
    let bound = 1.0 - 1.0 / j - PINSKER_CONSTANT * leakage_bits.sqrt();
    Ok(DecodingAttack {
        messages: outputs.len(),
        avg_error,
        leakage_bits,
        bound,
        holds: avg_error >= bound - BOUND_SLACK,
        partition,
    })
}

/// Errors of `count` uniformly random partitions, for comparison with MAP.
pub fn random_partition_errors(
    codebook: &Codebook,
    block: usize,
    eaves: &Channel,
    count: usize,
    seed: u64,
    budget: u64,
) -> Result<Vec<f64>> {
    let outputs = block_outputs(codebook, block, eaves, budget)?;
    let j = outputs.len();
    Ok((0..count)
        .into_par_iter()
        .map(|k| {
            let mut r = rng::keyed(seed, &[PARTITION_TAG, k as u64]);
            let partition: Vec<usize> = (0..outputs[0].len()).map(|_| r.random_range(0..j)).collect();
            partition_error(&outputs, &partition)
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentificationAttack {
    /// `g(j)` under the optimal test for each message, in `[0, 2]`.
    pub g: Vec<f64>,
    pub average: f64,
    pub leakage_bits: f64,
    /// `1 - c sqrt(leakage) (2J - 1)/(J - 1)`.
    pub bound: f64,
    pub holds: bool,
    /// Fraction of messages with `g(j) < 1/2`.
    pub reliable_fraction: f64,
    /// `1 - average`, the measured slack.
    pub slack: f64,
    /// Markov limit `(2/3)(1 + slack)` on `reliable_fraction`.
    pub markov_limit: f64,
}

/// For each `j`, the test `K_j = {z : P_j(z) > Q_j(z)}` against the
/// leave-one-out mixture `Q_j` minimizes `P_j(K_j^c) + Q_j(K_j)`, whose
/// minimum is `Σ_z min(P_j(z), Q_j(z))`.
pub fn identification_attack(
    codebook: &Codebook,
    block: usize,
    eaves: &Channel,
    budget: u64,
) -> Result<IdentificationAttack> {
    if codebook.messages < 2 {
        return Err(Error::invalid("identification needs at least two messages"));
    }
    let outputs = block_outputs(codebook, block, eaves, budget)?;
    let (leakage_bits, _) = leakage_of(&outputs);
    let jn = outputs.len();
    let mut total = vec![0.0; outputs[0].len()];
    for v in &outputs {
        for (t, x) in total.iter_mut().zip(v) {
            *t += x;
        }
    }
    let g: Vec<f64> = outputs
        .par_iter()
        .map(|p| {
            p.iter()
                .zip(&total)
                .map(|(pz, tz)| {
                    let q = ((tz - pz) / (jn - 1) as f64).max(0.0);
                    if *pz > q {
                        q
                    } else {
                        *pz
                    }
                })
                .sum::<f64>()
                .clamp(0.0, 2.0)
        })
        .collect();
    let average = g.iter().sum::<f64>() / jn as f64;
    let j = jn as f64;
    let bound = 1.0 - PINSKER_CONSTANT * leakage_bits.sqrt() * (2.0 * j - 1.0) / (j - 1.0);
    let slack = 1.0 - average;
    Ok(IdentificationAttack {
        reliable_fraction: g.iter().filter(|x| **x < 0.5).count() as f64 / j,
        markov_limit: 2.0 / 3.0 * (1.0 + slack),
        holds: average >= bound - BOUND_SLACK,
        g,
        average,
        leakage_bits,
        bound,
        slack,
    })
}
