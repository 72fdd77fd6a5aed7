//! Exact small-blocklength laboratory for the random-coding construction:
//! typical sets, truncated inputs, codebooks at the construction's rates,
//! the randomisation-robust decoder, expurgation and exact error and
//! leakage.

mod bounds;
mod codebook;
mod decoder;
mod evaluate;
mod events;
mod theta;
mod typical;

use serde::Serialize;

use crate::capacity::{csi_rate_no_prefix, csi_t_lower, no_csi_lower, SearchOptions};
use crate::channel::{CompoundWiretap, Distribution};
use crate::error::{Error, Result, DEFAULT_BUDGET};
use crate::info::entropy_continuity_bound;

pub use bounds::{
    alpha, analytic_bounds, beta, default_epsilon, default_slack, BoundBundle, Slack, DEFAULT_SLACK_COEFFICIENT,
};
pub use codebook::{
    rate_plan, regime_blocks, sample_codebook, CodeBlock, Codebook, CodingRegime, Overrides, RatePlan, SampledCode,
};
pub use decoder::{build_decoder, DecoderSets};
pub use evaluate::{
    evaluate_error, evaluate_leakage, expurgate, leakage_of, message_outputs, output_vector, Expurgation, StateError,
    StateLeakage,
};
pub use events::{
    check_chernoff_events, chernoff_experiment, concentration_bound, event_failure_rate, ChernoffExperiment,
    EventReport, EventTrials, MessageEvent,
};
pub use theta::{build_theta, build_truncated_input, Theta, TruncatedInput};
pub use typical::{
    conditional_typical_set, digits, index_of, sequence_probability, transition_probability, typical_mass_bound,
    typical_set, TypicalityParams,
};

/// How block input distributions are chosen.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputChoice {
    /// Maximizers of the single-letter rate formula of the regime.
    #[default]
    Optimized,
    Uniform,
    Explicit(Vec<Distribution>),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CodingParams {
    pub regime: CodingRegime,
    pub n: usize,
    pub delta: f64,
    pub tau: f64,
    pub seed: u64,
    pub overrides: Overrides,
    pub inputs: InputChoice,
    /// Concentration tolerance; defaults to `2^{-n δ² / (4 ln 2)}`.
    pub epsilon: Option<f64>,
    /// Slack `f1` in the cardinality bound `alpha`; defaults to the linear rule.
    pub f1: Option<f64>,
    /// Expurgation level; defaults to the largest average error.
    pub eta: Option<f64>,
    pub budget: u64,
}

impl CodingParams {
    pub fn new(regime: CodingRegime, n: usize, delta: f64, tau: f64) -> Self {
        CodingParams {
            regime,
            n,
            delta,
            tau,
            seed: 0,
            overrides: Overrides::default(),
            inputs: InputChoice::Optimized,
            epsilon: None,
            f1: None,
            eta: None,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Leakage next to the entropy-continuity bound evaluated at the measured
/// distance, and the `10ε` form when its hypotheses hold.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LeakageCheck {
    pub block: usize,
    pub eaves: usize,
    pub leakage_bits: f64,
    pub max_tv: f64,
    /// `-θ log(θ / |C|^n)` at `θ = max_tv`, when `θ <= 1/2`.
    pub continuity_bound: Option<f64>,
    /// `-10ε log(10ε) + 10 n ε log|C|`, when `max_tv <= 10ε <= 1/e`.
    pub epsilon_bound: Option<f64>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CodingReport {
    pub regime: CodingRegime,
    pub n: usize,
    pub delta: f64,
    pub tau: f64,
    pub epsilon: f64,
    pub seed: u64,
    pub paper_scaled: bool,
    pub notes: Vec<String>,
    pub inputs: Vec<Distribution>,
    pub plan: RatePlan,
    pub messages: usize,
    pub randomization: Vec<usize>,
    pub message_rate: f64,
    pub randomization_rates: Vec<f64>,
    pub decoder_sizes: Vec<usize>,
    pub errors: Vec<StateError>,
    pub leakage: Vec<LeakageCheck>,
    pub events: Vec<EventReport>,
    pub expurgation: Expurgation,
}

impl CodingReport {
    pub fn max_avg_error(&self) -> f64 {
        self.errors.iter().map(|e| e.avg_error).fold(0.0, f64::max)
    }

    pub fn max_leakage(&self) -> f64 {
        self.leakage.iter().map(|l| l.leakage_bits).fold(0.0, f64::max)
    }
}

pub struct CodingOutcome {
    pub codebook: Codebook,
    pub decoder: DecoderSets,
    pub report: CodingReport,
}

fn block_inputs(compound: &CompoundWiretap, params: &CodingParams) -> Result<Vec<Distribution>> {
    let blocks = regime_blocks(compound, params.regime)?.len();
    match &params.inputs {
        InputChoice::Uniform => Ok(vec![Distribution::uniform(compound.input_size()); blocks]),
        InputChoice::Explicit(list) => Ok(list.clone()),
        InputChoice::Optimized => {
            let opts = SearchOptions {
                seed: params.seed,
                ..SearchOptions::default()
            };
            Ok(match params.regime {
                CodingRegime::Csi => csi_rate_no_prefix(compound, &opts)?.inputs,
                CodingRegime::NoCsi => no_csi_lower(compound, &opts)?.inputs,
                CodingRegime::CsiT => csi_t_lower(compound, &opts)?.inputs,
            })
        }
    }
}

/// Samples a codebook, builds the decoder and evaluates everything exactly.
pub fn simulate(compound: &CompoundWiretap, params: &CodingParams) -> Result<CodingOutcome> {
    let typ = TypicalityParams::new(params.n, params.delta)?;
    let epsilon = params.epsilon.unwrap_or_else(|| default_epsilon(typ));
    if !(epsilon >= 0.0) {
        return Err(Error::invalid(format!("epsilon must be non-negative, got {epsilon}")));
    }
    let inputs = block_inputs(compound, params)?;
    let sampled = sample_codebook(
        compound,
        params.regime,
        &inputs,
        typ,
        params.tau,
        params.overrides,
        params.seed,
        params.budget,
    )?;
    let code = &sampled.codebook;
    let decoder = build_decoder(code, compound, params.budget)?;
    let errors = evaluate_error(code, &decoder, compound, params.budget)?;
    let leak = evaluate_leakage(code, compound, params.budget)?;

    let mut events = Vec::new();
    for (b, block) in code.blocks.iter().enumerate() {
        for &s in &block.eaves {
            let v = &compound.eaves()[s];
            let f1 = params
                .f1
                .unwrap_or_else(|| default_slack(compound.input_size(), v.output_size(), params.delta));
            let a = alpha(&block.input, v, params.n, f1);
            let theta = build_theta(&sampled.truncated[b], v, epsilon, a, params.budget)?;
            events.push(check_chernoff_events(code, b, s, v, &theta, params.budget)?);
        }
    }

    let nc = compound.eaves_output_size();
    let total = (nc as f64).powi(params.n as i32);
    let leakage = leak
        .into_iter()
        .map(|l| {
            let continuity_bound = entropy_continuity_bound(l.max_tv, total as usize);
            let ten = 10.0 * epsilon;
            let epsilon_bound = (l.max_tv <= ten && ten <= (-1.0f64).exp() && ten > 0.0)
                .then(|| -ten * ten.log2() + ten * params.n as f64 * (nc as f64).log2());
            let holds = continuity_bound.is_none_or(|b| l.leakage_bits <= b + 1e-12)
                && epsilon_bound.is_none_or(|b| l.leakage_bits <= b + 1e-12);
            LeakageCheck {
                block: l.block,
                eaves: l.eaves,
                leakage_bits: l.leakage_bits,
                max_tv: l.max_tv,
                continuity_bound,
                epsilon_bound,
                holds,
            }
        })
        .collect();

    let max_lambda = errors.iter().map(|e| e.avg_error).fold(0.0, f64::max);
    let eta = params.eta.unwrap_or(max_lambda).clamp(f64::MIN_POSITIVE, 1.0);
    let expurgation = expurgate(code, &decoder, &errors, eta)?;

    let mut notes = Vec::new();
    if !code.paper_scaled {
        notes.push("rates not paper-scaled: message or randomization count overridden".to_string());
    }
    if epsilon >= 0.5 {
        notes.push(format!(
            "epsilon = {epsilon:.6} is outside the concentration range (0, 1/2)"
        ));
    }
    if expurgation.empty {
        notes.push("expurgation removed every message".to_string());
    }

    let report = CodingReport {
        regime: params.regime,
        n: params.n,
        delta: params.delta,
        tau: params.tau,
        epsilon,
        seed: params.seed,
        paper_scaled: code.paper_scaled,
        notes,
        inputs,
        plan: sampled.plan.clone(),
        messages: code.messages,
        randomization: code.blocks.iter().map(CodeBlock::randomization).collect(),
        message_rate: code.message_rate(),
        randomization_rates: code.randomization_rates(),
        decoder_sizes: decoder.sizes(),
        errors,
        leakage,
        events,
        expurgation,
    };
    Ok(CodingOutcome {
        codebook: sampled.codebook,
        decoder,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::bsc;

    #[test]
    fn small_run_is_consistent() {
        let c = CompoundWiretap::single(bsc(0.03).unwrap(), bsc(0.35).unwrap()).unwrap();
        let mut p = CodingParams::new(CodingRegime::Csi, 6, 1.0 / 6.0, 0.1);
        p.inputs = InputChoice::Uniform;
        p.overrides = Overrides {
            messages: Some(2),
            randomization: Some(4),
        };
        let out = simulate(&c, &p).unwrap();
        let r = &out.report;
        assert!(!r.paper_scaled);
        assert_eq!(r.messages, 2);
        assert!((0.0..=1.0).contains(&r.errors[0].avg_error));
        assert!(r.leakage[0].leakage_bits >= 0.0);
        assert!(r.expurgation.max_error.iter().all(|e| *e <= r.expurgation.eta.sqrt()));
    }

    #[test]
    fn resource_refusal() {
        let c = CompoundWiretap::single(bsc(0.03).unwrap(), bsc(0.35).unwrap()).unwrap();
        let mut p = CodingParams::new(CodingRegime::Csi, 30, 0.1, 0.1);
        p.overrides.messages = Some(2);
        assert!(matches!(simulate(&c, &p), Err(Error::Resource { .. })));
    }
}
