//! Secrecy-rate formulas for the CSI, CSI_t and no-CSI regimes, the exact
//! capacity of degraded compounds, the multi-letter ladder and the
//! saturating-structure test.
//!
//! Every maximization is over a compact simplex product; the objectives are
//! differences of concave functions, so all values not marked exact are
//! certified *lower* bounds on the true maxima.

mod blahut;
mod degraded;
mod objective;
mod optimizer;
mod prefix;
mod regimes;
mod structure;

use serde::Serialize;

use crate::channel::{Channel, Distribution};
use crate::error::DEFAULT_BUDGET;

pub use blahut::{channel_capacity, compound_capacity, CapacityEstimate};
pub use degraded::degraded_capacity;
pub use prefix::{csi_rate_with_prefix, multiletter_ladder, multiletter_rate, LadderLevel};
pub use regimes::{csi_rate_no_prefix, csi_t_lower, no_csi_lower};
pub use structure::{check_saturating_structure, StructureReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Csi,
    CsiPrefix,
    CsiT,
    NoCsi,
    Degraded,
    Multiletter,
}

/// How the winning point of a maximization was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    GridSearch,
    MultiStart,
    Exhaustive,
    CuttingPlane,
}

/// Auxiliary variable `U` with prior and prefix channel `U -> A`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuxiliaryChannel {
    pub prior: Distribution,
    pub prefix: Channel,
}

/// One `(legit, eaves)` term of a rate expression, evaluated at the input
/// (or auxiliary) with index `input`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StateTerm {
    pub legit: usize,
    pub eaves: usize,
    pub input: usize,
    pub i_legit: f64,
    pub i_eaves: f64,
    pub difference: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateReport {
    pub regime: Regime,
    /// Reported rate in bits per channel use (clamped at 0 for no-CSI).
    pub value: f64,
    /// Minimum over `terms` of their differences.
    pub raw_value: f64,
    /// Optimizing input distributions (induced by the auxiliaries, if any).
    pub inputs: Vec<Distribution>,
    pub auxiliaries: Vec<AuxiliaryChannel>,
    pub terms: Vec<StateTerm>,
    /// Index into `terms` of the first term attaining the minimum.
    pub binding: usize,
    pub method: Method,
    /// `true` when the value comes from a local search and is only a lower
    /// bound on the formula it evaluates.
    pub lower_bound: bool,
    /// Certified upper bound on the formula, when one is available.
    pub upper_bound: Option<f64>,
    /// Letters per super-symbol; terms are normalized per letter.
    pub blocklength: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchOptions {
    /// Simplex grid resolution for inputs with at most three symbols; 0 disables.
    pub grid: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Output-space budget for multi-letter extensions.
    pub budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            grid: 1000,
            restarts: 32,
            seed: 0,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl SearchOptions {
    pub(crate) fn plan<'s>(&self, key: u64, seeds: &'s [Vec<f64>]) -> optimizer::Plan<'s> {
        optimizer::Plan {
            grid: self.grid,
            restarts: self.restarts,
            seed: self.seed,
            key,
            seeds,
        }
    }
}

fn first_min(terms: &[StateTerm]) -> (f64, usize) {
    let mut best = (f64::INFINITY, 0);
    for (k, t) in terms.iter().enumerate() {
        if t.difference < best.0 {
            best = (t.difference, k);
        }
    }
    best
}

fn term(legit: usize, eaves: usize, input: usize, i_legit: f64, i_eaves: f64) -> StateTerm {
    StateTerm {
        legit,
        eaves,
        input,
        i_legit,
        i_eaves,
        difference: i_legit - i_eaves,
    }
}

/// Wraps an optimizer point as a distribution; projection leaves it on the
/// simplex up to rounding.
fn to_distribution(x: &[f64]) -> Distribution {
    Distribution::normalized(x.to_vec()).expect("optimizer points lie on the simplex")
}
