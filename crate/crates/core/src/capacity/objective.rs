//! Rate objectives of the form `min_{(t,s) in units} (L_t(x) - E_s(x))`,
//! where `x` ranges over a product of simplices and every `L_t`, `E_s` is a
//! mutual information with a closed-form gradient.

use crate::channel::{output_mix, Channel};
use crate::info::mi_of;

/// Floor applied inside gradients only, so that boundary points give finite
/// (if steep) directions.
const GRAD_FLOOR: f64 = 1e-12;

/// Per-term values and (optionally) gradients at one point.
#[derive(Clone, Debug)]
pub(crate) struct Eval {
    pub legit: Vec<f64>,
    pub eaves: Vec<f64>,
    pub legit_grad: Vec<Vec<f64>>,
    pub eaves_grad: Vec<Vec<f64>>,
}

impl Eval {
    /// Objective value and the first unit attaining it.
    pub fn value(&self, units: &[(usize, usize)]) -> (f64, usize) {
        let mut best = (f64::INFINITY, 0);
        for (k, &(t, s)) in units.iter().enumerate() {
            let d = self.legit[t] - self.eaves[s];
            if d < best.0 {
                best = (d, k);
            }
        }
        best
    }

    pub fn unit_gradient(&self, unit: (usize, usize)) -> Vec<f64> {
        self.legit_grad[unit.0]
            .iter()
            .zip(&self.eaves_grad[unit.1])
            .map(|(a, b)| a - b)
            .collect()
    }
}

pub(crate) trait Objective: Sync {
    /// Sizes of the simplices whose product is the domain, in flat order.
    fn blocks(&self) -> &[usize];
    fn units(&self) -> &[(usize, usize)];
    fn evaluate(&self, x: &[f64], gradients: bool) -> Eval;

    fn value(&self, x: &[f64]) -> f64 {
        self.evaluate(x, false).value(self.units()).0
    }
}

/// `d/dp(a) I(p, W) = D(W_a || pW) - log e`; the constant is dropped since it
/// is orthogonal to the simplex.
fn input_gradient(p: &[f64], channel: &Channel) -> Vec<f64> {
    let q = output_mix(p, channel);
    (0..channel.input_size())
        .map(|a| {
            channel
                .row(a)
                .iter()
                .zip(&q)
                .filter(|(w, _)| **w > 0.0)
                .map(|(w, qb)| w * (w / qb.max(GRAD_FLOOR)).log2())
                .sum()
        })
        .collect()
}

/// Objective over a single input distribution.
pub(crate) struct InputObjective<'a> {
    legit: Vec<&'a Channel>,
    eaves: Vec<&'a Channel>,
    units: Vec<(usize, usize)>,
    blocks: [usize; 1],
}

impl<'a> InputObjective<'a> {
    pub fn new(legit: Vec<&'a Channel>, eaves: Vec<&'a Channel>, units: Vec<(usize, usize)>) -> Self {
        let inputs = legit[0].input_size();
        InputObjective {
            legit,
            eaves,
            units,
            blocks: [inputs],
        }
    }

    /// Every legit term against every eavesdropper term.
    pub fn all_pairs(legit: Vec<&'a Channel>, eaves: Vec<&'a Channel>) -> Self {
        let units = (0..legit.len())
            .flat_map(|t| (0..eaves.len()).map(move |s| (t, s)))
            .collect();
        InputObjective::new(legit, eaves, units)
    }
}

impl Objective for InputObjective<'_> {
    fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    fn units(&self) -> &[(usize, usize)] {
        &self.units
    }

    fn evaluate(&self, x: &[f64], gradients: bool) -> Eval {
        let legit = self.legit.iter().map(|w| mi_of(x, w)).collect();
        let eaves = self.eaves.iter().map(|v| mi_of(x, v)).collect();
        let (legit_grad, eaves_grad) = if gradients {
            (
                self.legit.iter().map(|w| input_gradient(x, w)).collect(),
                self.eaves.iter().map(|v| input_gradient(x, v)).collect(),
            )
        } else {
            (Vec::new(), Vec::new())
        };
        Eval {
            legit,
            eaves,
            legit_grad,
            eaves_grad,
        }
    }
}

/// Objective over an auxiliary prior `pi` on `U` and a prefix channel
/// `P: U -> A`. Flat layout: `pi` first, then the rows of `P`.
pub(crate) struct PrefixObjective<'a> {
    legit: Vec<&'a Channel>,
    eaves: Vec<&'a Channel>,
    units: Vec<(usize, usize)>,
    aux: usize,
    inputs: usize,
    blocks: Vec<usize>,
}

impl<'a> PrefixObjective<'a> {
    pub fn new(legit: Vec<&'a Channel>, eaves: Vec<&'a Channel>, units: Vec<(usize, usize)>, aux: usize) -> Self {
        let inputs = legit[0].input_size();
        let mut blocks = vec![aux];
        blocks.extend(std::iter::repeat_n(inputs, aux));
        PrefixObjective {
            legit,
            eaves,
            units,
            aux,
            inputs,
            blocks,
        }
    }

    pub fn split<'x>(&self, x: &'x [f64]) -> (&'x [f64], &'x [f64]) {
        x.split_at(self.aux)
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    /// `I(U; Y)` and, if asked, its gradient in flat layout.
    fn term(&self, pi: &[f64], prefix: &[f64], channel: &Channel, gradients: bool) -> (f64, Vec<f64>) {
        let prefix_ch = Channel::from_flat_unchecked(self.aux, self.inputs, prefix.to_vec());
        let m = crate::channel::compose(&prefix_ch, channel).expect("prefix maps into channel inputs");
        let value = mi_of(pi, &m);
        if !gradients {
            return (value, Vec::new());
        }
        let q = output_mix(pi, &m);
        let nb = channel.output_size();
        let mut grad = Vec::with_capacity(self.aux * (1 + self.inputs));
        // d/dpi_u = D(M_u || q) (up to a constant)
        for u in 0..self.aux {
            grad.push(
                m.row(u)
                    .iter()
                    .zip(&q)
                    .filter(|(x, _)| **x > 0.0)
                    .map(|(x, qb)| x * (x / qb.max(GRAD_FLOOR)).log2())
                    .sum(),
            );
        }
        // d/dP(u, a) = pi_u sum_b W(b|a) log(M_ub / q_b)
        let mut logratio = vec![0.0; nb];
        for u in 0..self.aux {
            for (b, lr) in logratio.iter_mut().enumerate() {
                *lr = (m.get(u, b).max(GRAD_FLOOR) / q[b].max(GRAD_FLOOR)).log2();
            }
            for a in 0..self.inputs {
                let s: f64 = channel.row(a).iter().zip(&logratio).map(|(w, lr)| w * lr).sum();
                grad.push(pi[u] * s);
            }
        }
        (value, grad)
    }
}

impl Objective for PrefixObjective<'_> {
    fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    fn units(&self) -> &[(usize, usize)] {
        &self.units
    }

    fn evaluate(&self, x: &[f64], gradients: bool) -> Eval {
        let (pi, prefix) = self.split(x);
        let mut eval = Eval {
            legit: Vec::with_capacity(self.legit.len()),
            eaves: Vec::with_capacity(self.eaves.len()),
            legit_grad: Vec::new(),
            eaves_grad: Vec::new(),
        };
        for w in &self.legit {
            let (v, g) = self.term(pi, prefix, w, gradients);
            eval.legit.push(v);
            if gradients {
                eval.legit_grad.push(g);
            }
        }
        for v in &self.eaves {
            let (val, g) = self.term(pi, prefix, v, gradients);
            eval.eaves.push(val);
            if gradients {
                eval.eaves_grad.push(g);
            }
        }
        eval
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::bsc;

    fn numeric_gradient(obj: &dyn Objective, x: &[f64], unit: (usize, usize)) -> Vec<f64> {
        let h = 1e-6;
        let f = |y: &[f64]| {
            let e = obj.evaluate(y, false);
            e.legit[unit.0] - e.eaves[unit.1]
        };
        (0..x.len())
            .map(|i| {
                let mut up = x.to_vec();
                let mut dn = x.to_vec();
                up[i] += h;
                dn[i] -= h;
                (f(&up) - f(&dn)) / (2.0 * h)
            })
            .collect()
    }

    /// Compares directional derivatives along within-block directions, where
    /// dropped constants cancel.
    fn check_directional(obj: &dyn Objective, x: &[f64]) {
        let e = obj.evaluate(x, true);
        for &unit in obj.units() {
            let g = e.unit_gradient(unit);
            let num = numeric_gradient(obj, x, unit);
            let mut offset = 0;
            for &b in obj.blocks() {
                for i in 1..b {
                    let analytic = g[offset + i] - g[offset];
                    let numeric = num[offset + i] - num[offset];
                    assert!(
                        (analytic - numeric).abs() < 1e-5 * (1.0 + numeric.abs()),
                        "{analytic} vs {numeric}"
                    );
                }
                offset += b;
            }
        }
    }

    #[test]
    fn input_gradient_matches_finite_differences() {
        let w = Channel::new(vec![vec![0.7, 0.2, 0.1], vec![0.1, 0.5, 0.4], vec![0.3, 0.3, 0.4]]).unwrap();
        let v = Channel::new(vec![vec![0.5, 0.5], vec![0.2, 0.8], vec![0.6, 0.4]]).unwrap();
        let obj = InputObjective::all_pairs(vec![&w], vec![&v]);
        check_directional(&obj, &[0.2, 0.5, 0.3]);
    }

    #[test]
    fn prefix_gradient_matches_finite_differences() {
        let w = bsc(0.1).unwrap();
        let v = bsc(0.3).unwrap();
        let obj = PrefixObjective::new(vec![&w], vec![&v], vec![(0, 0)], 3);
        let x = [0.2, 0.5, 0.3, 0.9, 0.1, 0.4, 0.6, 0.25, 0.75];
        check_directional(&obj, &x);
    }

    #[test]
    fn identity_prefix_reproduces_input_objective() {
        let w = bsc(0.1).unwrap();
        let v = bsc(0.3).unwrap();
        let pre = PrefixObjective::new(vec![&w], vec![&v], vec![(0, 0)], 3);
        let inp = InputObjective::all_pairs(vec![&w], vec![&v]);
        let x = [0.35, 0.65, 0.0, 1.0, 0.0, 0.0, 1.0, 0.5, 0.5];
        assert!((pre.value(&x) - inp.value(&[0.35, 0.65])).abs() < 1e-14);
    }
}
