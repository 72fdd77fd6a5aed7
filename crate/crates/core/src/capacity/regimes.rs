//! Single-letter rate formulas over input distributions.

use rayon::prelude::*;

use super::objective::InputObjective;
use super::optimizer::{maximize, Optimum};
use super::{first_min, term, to_distribution, Method, RateReport, Regime, SearchOptions, StateTerm};
use crate::channel::{CompoundWiretap, Pairing};
use crate::error::{Error, Result};
use crate::info::mi_of;

const KEY_CSI: u64 = 1 << 32;
const KEY_NO_CSI: u64 = 2 << 32;
const KEY_CSI_T: u64 = 3 << 32;

/// Per-unit optimum of `I(p, W_t) - I(p, V_s)`, one unit per pair.
pub(crate) fn per_unit_optima(compound: &CompoundWiretap, opts: &SearchOptions) -> Vec<((usize, usize), Optimum)> {
    let pairs = compound.pairs();
    pairs
        .par_iter()
        .enumerate()
        .map(|(k, &(t, s))| {
            let obj = InputObjective::new(vec![&compound.legit()[t]], vec![&compound.eaves()[s]], vec![(0, 0)]);
            ((t, s), maximize(&obj, &opts.plan(KEY_CSI + k as u64, &[])))
        })
        .collect()
}

fn assemble(
    regime: Regime,
    inputs: Vec<Vec<f64>>,
    terms: Vec<StateTerm>,
    methods: &[Method],
    clamp: bool,
) -> RateReport {
    let (raw, binding) = first_min(&terms);
    RateReport {
        regime,
        value: if clamp { raw.max(0.0) } else { raw },
        raw_value: raw,
        inputs: inputs.iter().map(|x| to_distribution(x)).collect(),
        auxiliaries: Vec::new(),
        terms: terms.clone(),
        binding,
        method: methods[terms[binding].input],
        lower_bound: true,
        upper_bound: None,
        blocklength: 1,
    }
}

/// `min_{(t,s)} max_p (I(p, W_t) - I(p, V_s))` over the compound's pairs,
/// each pair with its own input.
pub fn csi_rate_no_prefix(compound: &CompoundWiretap, opts: &SearchOptions) -> Result<RateReport> {
    let optima = per_unit_optima(compound, opts);
    let mut inputs = Vec::new();
    let mut terms = Vec::new();
    let mut methods = Vec::new();
    for (k, ((t, s), opt)) in optima.into_iter().enumerate() {
        let il = mi_of(&opt.x, &compound.legit()[t]);
        let ie = mi_of(&opt.x, &compound.eaves()[s]);
        terms.push(term(t, s, k, il, ie));
        methods.push(opt.method);
        inputs.push(opt.x);
    }
    Ok(assemble(Regime::Csi, inputs, terms, &methods, false))
}

/// Evaluates `min_t I(p, W_t) - max_s I(p, V_s)` at a fixed input as terms.
pub(crate) fn shared_input_terms(compound: &CompoundWiretap, p: &[f64]) -> Vec<StateTerm> {
    let il: Vec<f64> = compound.legit().iter().map(|w| mi_of(p, w)).collect();
    let ie: Vec<f64> = compound.eaves().iter().map(|v| mi_of(p, v)).collect();
    let mut terms = Vec::with_capacity(il.len() * ie.len());
    for (t, a) in il.iter().enumerate() {
        for (s, b) in ie.iter().enumerate() {
            terms.push(term(t, s, 0, *a, *b));
        }
    }
    terms
}

/// `max_p (min_t I(p, W_t) - max_s I(p, V_s))`. `raw_value` keeps the sign;
/// `value` is clamped at zero.
pub fn no_csi_lower(compound: &CompoundWiretap, opts: &SearchOptions) -> Result<RateReport> {
    let obj = InputObjective::all_pairs(compound.legit().iter().collect(), compound.eaves().iter().collect());
    let opt = maximize(&obj, &opts.plan(KEY_NO_CSI, &[]));
    let terms = shared_input_terms(compound, &opt.x);
    Ok(assemble(Regime::NoCsi, vec![opt.x], terms, &[opt.method], true))
}

/// `min_t max_p (I(p, W_t) - max_s I(p, V_s))`; requires product pairing.
pub fn csi_t_lower(compound: &CompoundWiretap, opts: &SearchOptions) -> Result<RateReport> {
    if compound.pairing() != Pairing::Product {
        return Err(Error::invalid(
            "legitimate-only state information needs product pairing (independent eavesdropper state)",
        ));
    }
    let eaves: Vec<_> = compound.eaves().iter().collect();
    let optima: Vec<Optimum> = (0..compound.legit().len())
        .into_par_iter()
        .map(|t| {
            let units = (0..eaves.len()).map(|s| (0, s)).collect();
            let obj = InputObjective::new(vec![&compound.legit()[t]], eaves.clone(), units);
            maximize(&obj, &opts.plan(KEY_CSI_T + t as u64, &[]))
        })
        .collect();
    let mut inputs = Vec::new();
    let mut terms = Vec::new();
    let mut methods = Vec::new();
    for (t, opt) in optima.into_iter().enumerate() {
        let il = mi_of(&opt.x, &compound.legit()[t]);
        for (s, v) in compound.eaves().iter().enumerate() {
            terms.push(term(t, s, t, il, mi_of(&opt.x, v)));
        }
        methods.push(opt.method);
        inputs.push(opt.x);
    }
    Ok(assemble(Regime::CsiT, inputs, terms, &methods, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::bsc;
    use crate::info::binary_entropy;

    fn opts() -> SearchOptions {
        SearchOptions::default()
    }

    #[test]
    fn useless_eavesdropper_gives_plain_capacity() {
        let c = CompoundWiretap::new(
            vec![bsc(0.1).unwrap(), bsc(0.2).unwrap()],
            vec![bsc(0.5).unwrap(), bsc(0.5).unwrap()],
            Pairing::Matched,
        )
        .unwrap();
        let r = csi_rate_no_prefix(&c, &opts()).unwrap();
        assert!((r.value - (1.0 - binary_entropy(0.2).unwrap())).abs() < 1e-9);
        assert_eq!(r.binding, 1);
    }

    #[test]
    fn identical_channels_give_zero() {
        let w = bsc(0.15).unwrap();
        let c = CompoundWiretap::single(w.clone(), w).unwrap();
        assert!(csi_rate_no_prefix(&c, &opts()).unwrap().value.abs() < 1e-12);
        assert!(no_csi_lower(&c, &opts()).unwrap().value.abs() < 1e-12);
    }

    #[test]
    fn single_state_no_csi_equals_csi() {
        let c = CompoundWiretap::single(bsc(0.05).unwrap(), bsc(0.25).unwrap()).unwrap();
        let a = csi_rate_no_prefix(&c, &opts()).unwrap();
        let b = no_csi_lower(&c, &opts()).unwrap();
        assert!((a.value - b.raw_value).abs() < 1e-10);
        let expect = binary_entropy(0.25).unwrap() - binary_entropy(0.05).unwrap();
        assert!((a.value - expect).abs() < 1e-9);
    }

    #[test]
    fn csi_t_requires_product() {
        let c = CompoundWiretap::single(bsc(0.05).unwrap(), bsc(0.25).unwrap()).unwrap();
        assert!(matches!(csi_t_lower(&c, &opts()), Err(Error::InvalidArgument(_))));
        let p = c.with_pairing(Pairing::Product).unwrap();
        let r = csi_t_lower(&p, &opts()).unwrap();
        let a = csi_rate_no_prefix(&p, &opts()).unwrap();
        assert!((r.value - a.value).abs() < 1e-10);
    }

    #[test]
    fn report_value_is_min_of_terms() {
        let c = CompoundWiretap::new(
            vec![bsc(0.02).unwrap(), bsc(0.1).unwrap()],
            vec![bsc(0.3).unwrap(), bsc(0.2).unwrap()],
            Pairing::Product,
        )
        .unwrap();
        for r in [
            csi_rate_no_prefix(&c, &opts()).unwrap(),
            csi_t_lower(&c, &opts()).unwrap(),
            no_csi_lower(&c, &opts()).unwrap(),
        ] {
            let m = r.terms.iter().map(|t| t.difference).fold(f64::INFINITY, f64::min);
            assert!((m - r.raw_value).abs() < 1e-12);
        }
    }
}
