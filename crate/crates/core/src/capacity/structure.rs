//! Saturating structure: a worst legitimate channel degraded from every
//! other, and a best eavesdropper channel from which every other is
//! degraded. Under product pairing both together force the no-CSI lower
//! bound to meet the CSI capacity.

use serde::Serialize;

use super::regimes::csi_rate_no_prefix;
use super::SearchOptions;
use crate::channel::{find_degradation, Channel, CompoundWiretap, Distribution, Pairing};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructureReport {
    /// `false` when the pairing leaves the legit and eavesdropper states
    /// coupled; the criterion is stated for product families.
    pub applicable: bool,
    /// `t̂` with `W_t̂` degraded with respect to every `W_t`.
    pub legit_hat: Option<usize>,
    /// `ŝ` with every `V_s` degraded with respect to `V_ŝ`.
    pub eaves_hat: Option<usize>,
    pub saturating: bool,
    /// `max_p (I(p, W_t̂) - I(p, V_ŝ))`, the common value of both capacities.
    pub common_value: Option<f64>,
    pub input: Option<Distribution>,
}

fn first_index(chans: &[Channel], ok: impl Fn(&Channel) -> Result<bool>) -> Result<Option<usize>> {
    for (i, c) in chans.iter().enumerate() {
        if ok(c)? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

pub fn check_saturating_structure(compound: &CompoundWiretap, opts: &SearchOptions) -> Result<StructureReport> {
    let single = compound.legit().len() == 1 && compound.eaves().len() == 1;
    let applicable = compound.pairing() == Pairing::Product || single;
    let legit = compound.legit();
    let eaves = compound.eaves();
    let legit_hat = first_index(legit, |cand| {
        for w in legit {
            if find_degradation(w, cand)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    })?;
    let eaves_hat = first_index(eaves, |cand| {
        for v in eaves {
            if find_degradation(cand, v)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    })?;
    let saturating = applicable && legit_hat.is_some() && eaves_hat.is_some();
    let (common_value, input) = if let (true, Some(t), Some(s)) = (saturating, legit_hat, eaves_hat) {
        let pair = CompoundWiretap::single(legit[t].clone(), eaves[s].clone())?;
        let r = csi_rate_no_prefix(&pair, opts)?;
        (Some(r.value), Some(r.inputs[0].clone()))
    } else {
        (None, None)
    };
    Ok(StructureReport {
        applicable,
        legit_hat,
        eaves_hat,
        saturating,
        common_value,
        input,
    })
}
