//! Randomisation-robust decoding sets.
//!
//! `D'_j` is the union, over blocks, legitimate states of the block and
//! randomisation indices, of the conditionally typical sets of message `j`'s
//! words. `D_j = D'_j` minus every other `D'_{j'}`, so the sets are disjoint
//! and neither the state nor the randomisation index is decoded.

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use super::codebook::Codebook;
use super::typical::{conditional_typical_set, digits, TypicalityParams};
use crate::channel::CompoundWiretap;
use crate::error::{checked_power, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct DecoderSets {
    pub output_space: usize,
    pub sets: Vec<FixedBitSet>,
}

impl DecoderSets {
    /// Decoded message for output `y`, if any.
    pub fn decode(&self, y: usize) -> Option<usize> {
        self.sets.iter().position(|s| s.contains(y))
    }

    pub fn is_disjoint(&self) -> bool {
        let mut seen = FixedBitSet::with_capacity(self.output_space);
        for s in &self.sets {
            if !seen.is_disjoint(s) {
                return false;
            }
            seen.union_with(s);
        }
        true
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.sets.iter().map(|s| s.count_ones(..)).collect()
    }

    pub fn restrict(&self, keep: &[usize]) -> DecoderSets {
        DecoderSets {
            output_space: self.output_space,
            sets: keep.iter().map(|&j| self.sets[j].clone()).collect(),
        }
    }
}

pub fn build_decoder(codebook: &Codebook, compound: &CompoundWiretap, budget: u64) -> Result<DecoderSets> {
    let n = codebook.n;
    let params = TypicalityParams::new(n, codebook.delta)?;
    let nb = compound.legit_output_size();
    let output_space = checked_power(nb, n, budget, "legitimate output space")? as usize;
    let primed = (0..codebook.messages)
        .into_par_iter()
        .map(|j| {
            let mut set = FixedBitSet::with_capacity(output_space);
            for block in &codebook.blocks {
                for &x in &block.words[j] {
                    let xs = digits(x, codebook.input_size, n);
                    for &t in &block.legit {
                        for y in conditional_typical_set(&compound.legit()[t], &xs, params, budget)? {
                            set.insert(y as usize);
                        }
                    }
                }
            }
            Ok(set)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut seen = FixedBitSet::with_capacity(output_space);
    let mut multi = FixedBitSet::with_capacity(output_space);
    for set in &primed {
        multi.union_with(&(&seen & set));
        seen.union_with(set);
    }
    let sets = primed
        .into_iter()
        .map(|mut s| {
            s.difference_with(&multi);
            s
        })
        .collect();
    let decoder = DecoderSets { output_space, sets };
    assert!(decoder.is_disjoint(), "decoding sets must be disjoint by construction");
    Ok(decoder)
}
