//! Exact secrecy capacity when every eavesdropper channel is degraded with
//! respect to every legitimate channel.
//!
//! Then each `I(p, W_t) - I(p, V_s) = I(X; Y_t | Z_s)` is concave in `p`, and
//! the capacity `max_p min_{(t,s)} (...)` is solved by Kelley's cutting-plane
//! method: an outer LP over supergradient cuts gives a certified upper
//! bound, evaluated iterates give the lower bound.

use super::objective::{InputObjective, Objective};
use super::regimes::shared_input_terms;
use super::{first_min, to_distribution, Method, RateReport, Regime, SearchOptions};
use crate::channel::{find_degradation, CompoundWiretap};
use crate::error::{Error, Result};
use crate::lp;

const GAP: f64 = 1e-10;
const MAX_CUTS: usize = 2000;
const STALL_LIMIT: usize = 25;
/// Cuts are taken slightly inside the simplex, where every gradient is finite.
const SHIFT: f64 = 1e-9;

pub fn degraded_capacity(compound: &CompoundWiretap, _opts: &SearchOptions) -> Result<RateReport> {
    for (t, w) in compound.legit().iter().enumerate() {
        for (s, v) in compound.eaves().iter().enumerate() {
            if find_degradation(w, v)?.is_none() {
                return Err(Error::precondition(format!(
                    "eavesdropper channel {s} is not degraded with respect to legitimate channel {t}"
                )));
            }
        }
    }
    let obj = InputObjective::all_pairs(compound.legit().iter().collect(), compound.eaves().iter().collect());
    let k = compound.input_size();
    let units = obj.units().to_vec();

    let mut best_x = vec![1.0 / k as f64; k];
    let mut lower = obj.value(&best_x);
    let mut upper = f64::INFINITY;
    // cut rows: (constant, coefficients) meaning z <= constant + coeffs . p
    let mut cuts: Vec<(f64, Vec<f64>)> = Vec::new();
    let add_cuts = |x: &[f64], cuts: &mut Vec<(f64, Vec<f64>)>| {
        let shifted: Vec<f64> = x.iter().map(|v| (1.0 - SHIFT) * v + SHIFT / k as f64).collect();
        let e = obj.evaluate(&shifted, true);
        for &(t, s) in &units {
            let g = e.unit_gradient((t, s));
            let f = e.legit[t] - e.eaves[s];
            let c = f - g.iter().zip(&shifted).map(|(a, b)| a * b).sum::<f64>();
            cuts.push((c, g));
        }
    };
    add_cuts(&best_x.clone(), &mut cuts);
    for a in 0..k {
        let mut v = vec![0.0; k];
        v[a] = 1.0;
        add_cuts(&v, &mut cuts);
    }

    let mut iterations = 0;
    let mut last_progress = f64::INFINITY;
    let mut stalled = 0;
    while iterations < MAX_CUTS {
        iterations += 1;
        let mut prog = lp::Program::maximize();
        let p: Vec<lp::Var> = (0..k).map(|_| prog.var(0.0, 0.0, 1.0)).collect();
        let z = prog.var(1.0, f64::NEG_INFINITY, f64::INFINITY);
        prog.eq(&p.iter().map(|v| (*v, 1.0)).collect::<Vec<_>>(), 1.0);
        for (c, g) in &cuts {
            let mut terms: Vec<_> = p.iter().zip(g).map(|(v, gi)| (*v, -gi)).collect();
            terms.push((z, 1.0));
            prog.le(&terms, *c);
        }
        let sol = prog
            .solve()
            .ok_or_else(|| Error::precondition("cutting-plane program became infeasible"))?;
        upper = sol.objective();
        let x: Vec<f64> = p.iter().map(|v| sol.value(*v).max(0.0)).collect();
        let total: f64 = x.iter().sum();
        let x: Vec<f64> = x.iter().map(|v| v / total).collect();
        let value = obj.value(&x);
        if value > lower {
            lower = value;
            best_x = x.clone();
        }
        if upper - lower <= GAP {
            break;
        }
        // Shifted cuts leave a tiny floor under the gap; stop once the upper
        // bound no longer moves.
        if upper < last_progress - GAP {
            last_progress = upper;
            stalled = 0;
        } else {
            stalled += 1;
            if stalled >= STALL_LIMIT {
                break;
            }
        }
        add_cuts(&x, &mut cuts);
    }

    let terms = shared_input_terms(compound, &best_x);
    let (raw, binding) = first_min(&terms);
    Ok(RateReport {
        regime: Regime::Degraded,
        value: raw.max(0.0),
        raw_value: raw,
        inputs: vec![to_distribution(&best_x)],
        auxiliaries: Vec::new(),
        terms,
        binding,
        method: Method::CuttingPlane,
        lower_bound: false,
        upper_bound: Some(upper.max(raw)),
        blocklength: 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{bsc, compose, Channel, Pairing};
    use crate::info::binary_entropy;

    #[test]
    fn bsc_cascade_capacity() {
        let w = bsc(0.05).unwrap();
        let v = compose(&w, &bsc(0.2).unwrap()).unwrap();
        let c = CompoundWiretap::single(w, v).unwrap();
        let r = degraded_capacity(&c, &SearchOptions::default()).unwrap();
        let star = 0.05 + 0.2 - 2.0 * 0.05 * 0.2;
        let expect = binary_entropy(star).unwrap() - binary_entropy(0.05).unwrap();
        assert!((r.value - expect).abs() < 1e-9, "{} vs {expect}", r.value);
        assert!(r.upper_bound.unwrap() >= r.value);
    }

    #[test]
    fn equal_channels_zero() {
        let w = Channel::new(vec![vec![0.7, 0.3], vec![0.2, 0.8]]).unwrap();
        let c = CompoundWiretap::single(w.clone(), w).unwrap();
        let r = degraded_capacity(&c, &SearchOptions::default()).unwrap();
        assert!(r.value.abs() < 1e-9);
    }

    #[test]
    fn non_degraded_names_pair() {
        let c = CompoundWiretap::new(
            vec![bsc(0.1).unwrap(), bsc(0.3).unwrap()],
            vec![bsc(0.2).unwrap()],
            Pairing::Product,
        )
        .unwrap();
        match degraded_capacity(&c, &SearchOptions::default()) {
            Err(Error::Precondition(m)) => assert!(m.contains("channel 0") && m.contains("channel 1"), "{m}"),
            other => panic!("expected precondition failure, got {other:?}"),
        }
    }
}
