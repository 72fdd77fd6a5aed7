//! Finite-alphabet probability vectors, stochastic matrices and compound
//! wiretap families.
//!
//! Alphabets are `0..k`; every symbol is a plain index. Validation happens at
//! construction and values are immutable afterwards.

use serde::{Deserialize, Serialize};

use crate::error::{checked_power, Error, Result};
use crate::lp;

/// Tolerance on the unit-sum condition of a probability vector.
pub const PROB_TOL: f64 = 1e-12;

/// Acceptance threshold on the max-abs residual of a degradation witness.
pub const DEGRADATION_TOL: f64 = 1e-9;

/// A probability vector over a finite alphabet.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Distribution(Vec<f64>);

impl Distribution {
    /// Validates `probs`: nonempty, finite, non-negative, unit sum within [`PROB_TOL`].
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        check_probability_row(&probs).map_err(Error::InvalidArgument)?;
        Ok(Distribution(probs))
    }

    /// Rescales non-negative weights to unit sum. This is the only place a
    /// vector gets renormalized.
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("empty weight vector"));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::invalid("weights must be finite and non-negative"));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::invalid("weights sum to zero"));
        }
        Ok(Distribution(weights.into_iter().map(|w| w / total).collect()))
    }

    pub fn uniform(size: usize) -> Self {
        assert!(size > 0, "uniform distribution over an empty alphabet");
        Distribution(vec![1.0 / size as f64; size])
    }

    /// Point mass on `symbol`.
    pub fn point(size: usize, symbol: usize) -> Self {
        assert!(symbol < size);
        let mut probs = vec![0.0; size];
        probs[symbol] = 1.0;
        Distribution(probs)
    }

    /// Wraps a vector that is a distribution by construction (e.g. a convex
    /// combination of rows). Rounding drift is far below [`PROB_TOL`].
    pub(crate) fn from_computed(probs: Vec<f64>) -> Self {
        debug_assert!(check_probability_row_with(&probs, 1e-9).is_ok());
        Distribution(probs)
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, p)| **p > 0.0).map(|(i, _)| i)
    }

    /// Product distribution, `self` indexing the most significant digit.
    pub fn product(&self, other: &Distribution) -> Distribution {
        let mut out = Vec::with_capacity(self.len() * other.len());
        for p in &self.0 {
            for q in &other.0 {
                out.push(p * q);
            }
        }
        Distribution(out)
    }
}

impl TryFrom<Vec<f64>> for Distribution {
    type Error = Error;

    fn try_from(value: Vec<f64>) -> Result<Self> {
        Distribution::new(value)
    }
}

impl From<Distribution> for Vec<f64> {
    fn from(d: Distribution) -> Self {
        d.0
    }
}

fn check_probability_row(row: &[f64]) -> std::result::Result<(), String> {
    check_probability_row_with(row, PROB_TOL)
}

fn check_probability_row_with(row: &[f64], tol: f64) -> std::result::Result<(), String> {
    if row.is_empty() {
        return Err("empty probability vector".into());
    }
    for (i, p) in row.iter().enumerate() {
        if !p.is_finite() {
            return Err(format!("entry {i} is not finite"));
        }
        if *p < 0.0 {
            return Err(format!("entry {i} is negative ({p})"));
        }
    }
    let total: f64 = row.iter().sum();
    if (total - 1.0).abs() > tol {
        return Err(format!("entries sum to {total}, not 1"));
    }
    Ok(())
}

/// Row-stochastic matrix from an input alphabet to an output alphabet.
///
/// Stored flat, row-major: `get(a, b)` is the probability of output `b` given input `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct Channel {
    inputs: usize,
    outputs: usize,
    data: Vec<f64>,
}

impl Channel {
    /// Builds a channel from its rows, validating each as a distribution.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::invalid("channel has no rows"));
        }
        let outputs = rows[0].len();
        let mut data = Vec::with_capacity(rows.len() * outputs);
        for (a, row) in rows.iter().enumerate() {
            if row.len() != outputs {
                return Err(Error::invalid(format!(
                    "row {a} has {} entries, expected {outputs}",
                    row.len()
                )));
            }
            check_probability_row(row).map_err(|e| Error::invalid(format!("row {a}: {e}")))?;
            data.extend_from_slice(row);
        }
        Ok(Channel {
            inputs: rows.len(),
            outputs,
            data,
        })
    }

    pub(crate) fn from_flat_unchecked(inputs: usize, outputs: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), inputs * outputs);
        Channel { inputs, outputs, data }
    }

    /// Channel with a single input symbol whose row is `row`.
    pub fn from_distribution(row: &Distribution) -> Self {
        Channel {
            inputs: 1,
            outputs: row.len(),
            data: row.probs().to_vec(),
        }
    }

    /// Noiseless channel on `size` symbols.
    pub fn identity(size: usize) -> Self {
        let mut data = vec![0.0; size * size];
        for a in 0..size {
            data[a * size + a] = 1.0;
        }
        Channel {
            inputs: size,
            outputs: size,
            data,
        }
    }

    /// Every input produces the same output distribution.
    pub fn constant(inputs: usize, row: &Distribution) -> Self {
        let mut data = Vec::with_capacity(inputs * row.len());
        for _ in 0..inputs {
            data.extend_from_slice(row.probs());
        }
        Channel {
            inputs,
            outputs: row.len(),
            data,
        }
    }

    pub fn input_size(&self) -> usize {
        self.inputs
    }

    pub fn output_size(&self) -> usize {
        self.outputs
    }

    pub fn row(&self, a: usize) -> &[f64] {
        &self.data[a * self.outputs..(a + 1) * self.outputs]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.outputs)
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.data[a * self.outputs + b]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(|r| r.to_vec()).collect()
    }

    /// Largest entrywise absolute difference; `None` on shape mismatch.
    pub fn max_abs_diff(&self, other: &Channel) -> Option<f64> {
        if self.inputs != other.inputs || self.outputs != other.outputs {
            return None;
        }
        Some(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max),
        )
    }

    /// Relabels outputs: output `b` of `self` becomes output `perm[b]`.
    pub fn permute_outputs(&self, perm: &[usize]) -> Result<Channel> {
        let mut seen = vec![false; self.outputs];
        if perm.len() != self.outputs
            || perm
                .iter()
                .any(|&p| p >= self.outputs || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::invalid("output permutation is not a bijection"));
        }
        let mut data = vec![0.0; self.data.len()];
        for a in 0..self.inputs {
            for b in 0..self.outputs {
                data[a * self.outputs + perm[b]] = self.get(a, b);
            }
        }
        Ok(Channel::from_flat_unchecked(self.inputs, self.outputs, data))
    }

    /// Parallel use of two channels: input `(a, a')` maps to `(b, b')`,
    /// with `self` on the most significant digit.
    pub fn kronecker(&self, other: &Channel) -> Channel {
        let inputs = self.inputs * other.inputs;
        let outputs = self.outputs * other.outputs;
        let mut data = Vec::with_capacity(inputs * outputs);
        for a in 0..self.inputs {
            for a2 in 0..other.inputs {
                for b in 0..self.outputs {
                    let w = self.get(a, b);
                    data.extend(other.row(a2).iter().map(|v| w * v));
                }
            }
        }
        Channel::from_flat_unchecked(inputs, outputs, data)
    }
}

impl Serialize for Channel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Channel {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(deserializer)?;
        Channel::new(rows).map_err(serde::de::Error::custom)
    }
}

/// Binary symmetric channel with crossover probability `eta`.
pub fn bsc(eta: f64) -> Result<Channel> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::invalid(format!("crossover {eta} outside [0, 1]")));
    }
    Ok(Channel::from_flat_unchecked(2, 2, vec![1.0 - eta, eta, eta, 1.0 - eta]))
}

/// Cascade `first` then `second`: the matrix product `first · second`.
pub fn compose(first: &Channel, second: &Channel) -> Result<Channel> {
    if first.outputs != second.inputs {
        return Err(Error::invalid(format!(
            "cannot compose {}x{} with {}x{}",
            first.inputs, first.outputs, second.inputs, second.outputs
        )));
    }
    let mut data = vec![0.0; first.inputs * second.outputs];
    for a in 0..first.inputs {
        let out = &mut data[a * second.outputs..(a + 1) * second.outputs];
        for (b, w) in first.row(a).iter().enumerate() {
            if *w == 0.0 {
                continue;
            }
            for (o, d) in out.iter_mut().zip(second.row(b)) {
                *o += w * d;
            }
        }
    }
    Ok(Channel::from_flat_unchecked(first.inputs, second.outputs, data))
}

/// Entrywise convex combination `sum_k weights[k] * channels[k]`.
pub fn convex_combine(channels: &[Channel], weights: &Distribution) -> Result<Channel> {
    let first = channels
        .first()
        .ok_or_else(|| Error::invalid("no channels to combine"))?;
    if weights.len() != channels.len() {
        return Err(Error::invalid(format!(
            "{} weights for {} channels",
            weights.len(),
            channels.len()
        )));
    }
    if channels
        .iter()
        .any(|c| c.inputs != first.inputs || c.outputs != first.outputs)
    {
        return Err(Error::invalid("channels of different shapes"));
    }
    let mut data = vec![0.0; first.data.len()];
    for (c, w) in channels.iter().zip(weights.probs()) {
        for (o, x) in data.iter_mut().zip(&c.data) {
            *o += w * x;
        }
    }
    Ok(Channel::from_flat_unchecked(first.inputs, first.outputs, data))
}

/// `n`-fold memoryless extension. Sequence indices put position 0 on the
/// most significant digit. Fails if the matrix would exceed `budget` entries.
pub fn product_extension(channel: &Channel, n: usize, budget: u64) -> Result<Channel> {
    if n == 0 {
        return Err(Error::invalid("blocklength must be positive"));
    }
    let ins = checked_power(channel.inputs, n, budget, "product extension inputs")?;
    let outs = checked_power(channel.outputs, n, budget, "product extension outputs")?;
    if (ins as u128) * (outs as u128) > budget as u128 {
        return Err(Error::Resource {
            what: format!("{n}-fold extension matrix"),
            required: ins as u128 * outs as u128,
            budget: budget as u128,
        });
    }
    let mut acc = channel.clone();
    for _ in 1..n {
        acc = acc.kronecker(channel);
    }
    Ok(acc)
}

/// Output distribution `pW`.
pub fn output_distribution(p: &Distribution, channel: &Channel) -> Result<Distribution> {
    if p.len() != channel.inputs {
        return Err(Error::invalid(format!(
            "distribution over {} symbols, channel has {} inputs",
            p.len(),
            channel.inputs
        )));
    }
    Ok(Distribution::from_computed(output_mix(p.probs(), channel)))
}

pub(crate) fn output_mix(p: &[f64], channel: &Channel) -> Vec<f64> {
    let mut q = vec![0.0; channel.outputs];
    for (a, pa) in p.iter().enumerate() {
        if *pa == 0.0 {
            continue;
        }
        for (o, w) in q.iter_mut().zip(channel.row(a)) {
            *o += pa * w;
        }
    }
    q
}

/// Stochastic kernel `D` with `base · D = target`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegradationWitness {
    pub kernel: Channel,
    /// Max-abs entry of `base · kernel - target`.
    pub residual: f64,
}

/// Searches for a row-stochastic `D` with `base · D = target`.
///
/// Solves `min r` subject to `|base · D - target| <= r` entrywise and `D`
/// row-stochastic, then accepts when the recomputed residual of the cleaned
/// kernel is at most [`DEGRADATION_TOL`].
pub fn find_degradation(base: &Channel, target: &Channel) -> Result<Option<DegradationWitness>> {
    if base.inputs != target.inputs {
        return Err(Error::invalid(format!(
            "input alphabets differ ({} vs {})",
            base.inputs, target.inputs
        )));
    }
    let (nb, nc) = (base.outputs, target.outputs);
    let mut prob = lp::Program::minimize();
    let kernel: Vec<lp::Var> = (0..nb * nc).map(|_| prob.var(0.0, 0.0, f64::INFINITY)).collect();
    let r = prob.var(1.0, 0.0, f64::INFINITY);
    for y in 0..nb {
        let terms: Vec<_> = (0..nc).map(|z| (kernel[y * nc + z], 1.0)).collect();
        prob.eq(&terms, 1.0);
    }
    for x in 0..base.inputs {
        for z in 0..nc {
            let mut terms: Vec<_> = (0..nb)
                .filter(|&y| base.get(x, y) != 0.0)
                .map(|y| (kernel[y * nc + z], base.get(x, y)))
                .collect();
            terms.push((r, -1.0));
            prob.le(&terms, target.get(x, z));
            let last = terms.len() - 1;
            terms[last].1 = 1.0;
            prob.ge(&terms, target.get(x, z));
        }
    }
    let solution = match prob.solve() {
        Some(s) => s,
        None => return Ok(None),
    };
    let mut rows = Vec::with_capacity(nb);
    for y in 0..nb {
        let raw: Vec<f64> = (0..nc).map(|z| solution.value(kernel[y * nc + z]).max(0.0)).collect();
        let total: f64 = raw.iter().sum();
        rows.push(if total > 0.0 {
            raw.iter().map(|v| v / total).collect()
        } else {
            let mut row = vec![0.0; nc];
            row[0] = 1.0;
            row
        });
    }
    let kernel = Channel::new(rows).map_err(|e| Error::invalid(format!("degradation kernel: {e}")))?;
    let residual = compose(base, &kernel)?
        .max_abs_diff(target)
        .expect("shapes agree by construction");
    Ok((residual <= DEGRADATION_TOL).then_some(DegradationWitness { kernel, residual }))
}

/// How legitimate and eavesdropper states combine into channel pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pairing {
    /// `(W_t, V_t)` share one state index.
    Matched,
    /// Every `(W_t, V_s)` combination is a possible state.
    Product,
}

/// A compound wiretap channel: legitimate family `{W_t}`, eavesdropper
/// family `{V_s}` and their pairing.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompoundWiretap {
    legit: Vec<Channel>,
    eaves: Vec<Channel>,
    pairing: Pairing,
}

impl CompoundWiretap {
    pub fn new(legit: Vec<Channel>, eaves: Vec<Channel>, pairing: Pairing) -> Result<Self> {
        let first = legit
            .first()
            .ok_or_else(|| Error::invalid("compound has no legitimate channels"))?;
        let first_eaves = eaves
            .first()
            .ok_or_else(|| Error::invalid("compound has no eavesdropper channels"))?;
        let inputs = first.input_size();
        for (family, chans) in [("legit", &legit), ("eaves", &eaves)] {
            let outputs = chans[0].output_size();
            for (i, c) in chans.iter().enumerate() {
                if c.input_size() != inputs {
                    return Err(Error::invalid(format!(
                        "{family}[{i}] has {} inputs, expected {inputs}",
                        c.input_size()
                    )));
                }
                if c.output_size() != outputs {
                    return Err(Error::invalid(format!(
                        "{family}[{i}] has {} outputs, expected {outputs}",
                        c.output_size()
                    )));
                }
            }
        }
        let _ = first_eaves;
        if pairing == Pairing::Matched && legit.len() != eaves.len() {
            return Err(Error::invalid(format!(
                "matched pairing needs equal family sizes (got {} and {})",
                legit.len(),
                eaves.len()
            )));
        }
        Ok(CompoundWiretap { legit, eaves, pairing })
    }

    /// Ordinary wiretap channel as a one-state compound.
    pub fn single(legit: Channel, eaves: Channel) -> Result<Self> {
        CompoundWiretap::new(vec![legit], vec![eaves], Pairing::Matched)
    }

    pub fn legit(&self) -> &[Channel] {
        &self.legit
    }

    pub fn eaves(&self) -> &[Channel] {
        &self.eaves
    }

    pub fn pairing(&self) -> Pairing {
        self.pairing
    }

    pub fn input_size(&self) -> usize {
        self.legit[0].input_size()
    }

    pub fn legit_output_size(&self) -> usize {
        self.legit[0].output_size()
    }

    pub fn eaves_output_size(&self) -> usize {
        self.eaves[0].output_size()
    }

    /// State pairs `(t, s)`: the diagonal for matched pairing, all
    /// combinations (legit-major) for product pairing.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        match self.pairing {
            Pairing::Matched => (0..self.legit.len()).map(|t| (t, t)).collect(),
            Pairing::Product => (0..self.legit.len())
                .flat_map(|t| (0..self.eaves.len()).map(move |s| (t, s)))
                .collect(),
        }
    }

    pub fn with_pairing(&self, pairing: Pairing) -> Result<Self> {
        CompoundWiretap::new(self.legit.clone(), self.eaves.clone(), pairing)
    }

    /// Applies output permutations to every channel of each family.
    pub fn permute_outputs(&self, legit_perm: &[usize], eaves_perm: &[usize]) -> Result<Self> {
        let legit = self
            .legit
            .iter()
            .map(|c| c.permute_outputs(legit_perm))
            .collect::<Result<Vec<_>>>()?;
        let eaves = self
            .eaves
            .iter()
            .map(|c| c.permute_outputs(eaves_perm))
            .collect::<Result<Vec<_>>>()?;
        CompoundWiretap::new(legit, eaves, self.pairing)
    }
}
