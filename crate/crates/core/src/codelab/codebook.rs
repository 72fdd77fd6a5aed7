//! Random codebooks at the construction's rates.
//!
//! A codebook is a list of blocks. Each block carries its own input
//! distribution, the legitimate and eavesdropper states it is built for and
//! a `J x L` matrix of words drawn i.i.d. from the truncated input:
//!
//! * CSI: one block per state pair, rates from that pair;
//! * no CSI: a single block shared by all states;
//! * CSI at the legitimate side only: one block per legitimate state,
//!   protected against every eavesdropper state.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::theta::{build_truncated_input, TruncatedInput};
use super::typical::TypicalityParams;
use crate::channel::{CompoundWiretap, Distribution, Pairing};
use crate::error::{checked_power, Error, Result};
use crate::info::mi_of;
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CodingRegime {
    Csi,
    NoCsi,
    CsiT,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeBlock {
    pub legit: Vec<usize>,
    pub eaves: Vec<usize>,
    pub input: Distribution,
    /// `words[j][l]`, a sequence index in radix `|A|`.
    pub words: Vec<Vec<u64>>,
}

impl CodeBlock {
    pub fn randomization(&self) -> usize {
        self.words.first().map_or(0, Vec::len)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Codebook {
    pub regime: CodingRegime,
    pub n: usize,
    pub delta: f64,
    pub input_size: usize,
    pub messages: usize,
    pub seed: u64,
    /// `false` when `J` or `L` were overridden instead of taken from the
    /// rate formulas.
    pub paper_scaled: bool,
    pub blocks: Vec<CodeBlock>,
}

impl Codebook {
    /// Shape checks against a compound, for codebooks read from disk.
    pub fn validate(&self, compound: &CompoundWiretap) -> Result<()> {
        if self.input_size != compound.input_size() {
            return Err(Error::invalid(format!(
                "codebook input alphabet {} does not match the channels ({})",
                self.input_size,
                compound.input_size()
            )));
        }
        if self.n == 0 || self.messages == 0 || self.blocks.is_empty() {
            return Err(Error::invalid(
                "codebook needs n >= 1, at least one message and one block",
            ));
        }
        let space = checked_power(self.input_size, self.n, u64::MAX, "input sequence space")?;
        for (b, block) in self.blocks.iter().enumerate() {
            if block.input.len() != self.input_size {
                return Err(Error::invalid(format!(
                    "block {b}: input distribution has the wrong size"
                )));
            }
            if let Some(t) = block.legit.iter().find(|&&t| t >= compound.legit().len()) {
                return Err(Error::invalid(format!("block {b}: legitimate state {t} out of range")));
            }
            if let Some(s) = block.eaves.iter().find(|&&s| s >= compound.eaves().len()) {
                return Err(Error::invalid(format!(
                    "block {b}: eavesdropper state {s} out of range"
                )));
            }
            if block.words.len() != self.messages {
                return Err(Error::invalid(format!(
                    "block {b}: expected {} messages",
                    self.messages
                )));
            }
            let l = block.randomization();
            if l == 0 || block.words.iter().any(|row| row.len() != l) {
                return Err(Error::invalid(format!("block {b}: ragged or empty randomization rows")));
            }
            if block.words.iter().flatten().any(|&x| x >= space) {
                return Err(Error::invalid(format!(
                    "block {b}: word outside the input sequence space"
                )));
            }
        }
        Ok(())
    }

    /// Keeps the listed messages (in order) in every block.
    pub fn restrict(&self, keep: &[usize]) -> Codebook {
        let mut out = self.clone();
        out.messages = keep.len();
        for block in &mut out.blocks {
            block.words = keep.iter().map(|&j| block.words[j].clone()).collect();
        }
        out
    }

    pub fn message_rate(&self) -> f64 {
        (self.messages as f64).log2() / self.n as f64
    }

    pub fn randomization_rates(&self) -> Vec<f64> {
        self.blocks
            .iter()
            .map(|b| (b.randomization() as f64).log2() / self.n as f64)
            .collect()
    }
}

/// Legit and eavesdropper states of each block.
pub fn regime_blocks(compound: &CompoundWiretap, regime: CodingRegime) -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
    let all_legit: Vec<usize> = (0..compound.legit().len()).collect();
    let all_eaves: Vec<usize> = (0..compound.eaves().len()).collect();
    Ok(match regime {
        CodingRegime::Csi => compound.pairs().into_iter().map(|(t, s)| (vec![t], vec![s])).collect(),
        CodingRegime::NoCsi => vec![(all_legit, all_eaves)],
        CodingRegime::CsiT => {
            if compound.pairing() != Pairing::Product {
                return Err(Error::invalid(
                    "legitimate-only state information needs product pairing (independent eavesdropper state)",
                ));
            }
            all_legit.iter().map(|&t| (vec![t], all_eaves.clone())).collect()
        }
    })
}

/// Exponents and floored sizes of the rate formulas.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatePlan {
    /// `min (legit - eaves) - tau` per letter.
    pub message_exponent: f64,
    /// `eaves + tau/4` per letter, one per block.
    pub randomization_exponents: Vec<f64>,
    /// `floor(2^{n * exponent})`, saturated at `u64::MAX`.
    pub message_floor: u64,
    pub randomization_floors: Vec<u64>,
}

fn floor_pow2(n: usize, exponent: f64) -> u64 {
    let v = (n as f64 * exponent).exp2().floor();
    if v >= u64::MAX as f64 {
        u64::MAX
    } else {
        v as u64
    }
}

pub fn rate_plan(
    compound: &CompoundWiretap,
    regime: CodingRegime,
    inputs: &[Distribution],
    n: usize,
    tau: f64,
) -> Result<RatePlan> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::invalid(format!("tau must be positive, got {tau}")));
    }
    let blocks = regime_blocks(compound, regime)?;
    if inputs.len() != blocks.len() {
        return Err(Error::invalid(format!(
            "{} input distributions supplied, the regime has {} blocks",
            inputs.len(),
            blocks.len()
        )));
    }
    if let Some(p) = inputs.iter().find(|p| p.len() != compound.input_size()) {
        return Err(Error::invalid(format!(
            "input distribution of size {} for alphabet of size {}",
            p.len(),
            compound.input_size()
        )));
    }
    let mut differences = Vec::new();
    let mut eaves_terms = Vec::new();
    for ((legit, eaves), p) in blocks.iter().zip(inputs) {
        let il = legit
            .iter()
            .map(|&t| mi_of(p.probs(), &compound.legit()[t]))
            .fold(f64::INFINITY, f64::min);
        let ie = eaves
            .iter()
            .map(|&s| mi_of(p.probs(), &compound.eaves()[s]))
            .fold(f64::NEG_INFINITY, f64::max);
        differences.push(il - ie);
        eaves_terms.push(ie);
    }
    let message_exponent = differences.iter().copied().fold(f64::INFINITY, f64::min) - tau;
    let randomization_exponents: Vec<f64> = eaves_terms.iter().map(|e| e + tau / 4.0).collect();
    Ok(RatePlan {
        message_exponent,
        message_floor: floor_pow2(n, message_exponent),
        randomization_floors: randomization_exponents.iter().map(|e| floor_pow2(n, *e)).collect(),
        randomization_exponents,
    })
}

/// Explicit sizes replacing the floors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Overrides {
    pub messages: Option<usize>,
    pub randomization: Option<usize>,
}

pub struct SampledCode {
    pub codebook: Codebook,
    pub plan: RatePlan,
    pub truncated: Vec<TruncatedInput>,
}

#[allow(clippy::too_many_arguments)]
pub fn sample_codebook(
    compound: &CompoundWiretap,
    regime: CodingRegime,
    inputs: &[Distribution],
    params: TypicalityParams,
    tau: f64,
    overrides: Overrides,
    seed: u64,
    budget: u64,
) -> Result<SampledCode> {
    let plan = rate_plan(compound, regime, inputs, params.n, tau)?;
    let messages = match overrides.messages {
        Some(0) => return Err(Error::invalid("message override must be at least 1")),
        Some(j) => j,
        None if plan.message_floor == 0 => {
            return Err(Error::precondition(format!(
                "message count floors to 0 at n = {} (exponent {:.6}); supply an explicit message override",
                params.n, plan.message_exponent
            )))
        }
        None => plan.message_floor.try_into().unwrap_or(usize::MAX),
    };
    let randomization: Vec<usize> = match overrides.randomization {
        Some(0) => return Err(Error::invalid("randomization override must be at least 1")),
        Some(l) => vec![l; plan.randomization_floors.len()],
        None => plan
            .randomization_floors
            .iter()
            .map(|&l| l.try_into().unwrap_or(usize::MAX))
            .collect(),
    };
    let words: u128 = randomization.iter().map(|&l| messages as u128 * l as u128).sum();
    if words > budget as u128 {
        return Err(Error::Resource {
            what: "codebook words".into(),
            required: words,
            budget: budget as u128,
        });
    }
    let truncated = inputs
        .iter()
        .map(|p| build_truncated_input(p, params, budget))
        .collect::<Result<Vec<_>>>()?;
    let layout = regime_blocks(compound, regime)?;
    let blocks = layout
        .into_iter()
        .enumerate()
        .map(|(b, (legit, eaves))| {
            let trunc = &truncated[b];
            let l = randomization[b];
            let words = (0..messages)
                .into_par_iter()
                .map(|j| {
                    (0..l)
                        .map(|k| trunc.draw(rng::keyed(seed, &[b as u64, j as u64, k as u64]).random::<f64>()))
                        .collect()
                })
                .collect();
            CodeBlock {
                legit,
                eaves,
                input: inputs[b].clone(),
                words,
            }
        })
        .collect();
    Ok(SampledCode {
        codebook: Codebook {
            regime,
            n: params.n,
            delta: params.delta,
            input_size: compound.input_size(),
            messages,
            seed,
            paper_scaled: overrides.messages.is_none() && overrides.randomization.is_none(),
            blocks,
        },
        plan,
        truncated,
    })
}
