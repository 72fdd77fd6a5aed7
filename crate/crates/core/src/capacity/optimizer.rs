//! Multi-start maximization over products of simplices.
//!
//! Search: projected (sub)gradient ascent from the uniform point and random
//! Dirichlet starts, an exhaustive grid for single-block domains with at most
//! three symbols, golden-section refinement on binary inputs, and a
//! trust-region successive-LP polish that handles the kinks of the min.

use rayon::prelude::*;

use super::objective::Objective;
use super::Method;
use crate::lp;
use crate::rng;

#[derive(Clone, Debug)]
pub(crate) struct Optimum {
    pub x: Vec<f64>,
    pub method: Method,
}

pub(crate) struct Plan<'s> {
    pub grid: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Distinguishes independent problems sharing one seed.
    pub key: u64,
    /// Additional fixed starting points (ascended, then polished).
    pub seeds: &'s [Vec<f64>],
}

const MAX_ASCENT_ITERS: usize = 2000;
const MIN_STEP: f64 = 1e-13;
const POLISH_CANDIDATES: usize = 3;

/// Euclidean projection onto the probability simplex (sort-based).
pub(crate) fn project_simplex(v: &mut [f64]) {
    let mut u: Vec<f64> = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).expect("finite coordinates"));
    let mut css = 0.0;
    let mut theta = 0.0;
    for (j, x) in u.iter().enumerate() {
        css += x;
        let t = (css - 1.0) / (j + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - theta).max(0.0);
    }
    let total: f64 = v.iter().sum();
    for x in v.iter_mut() {
        *x /= total;
    }
}

fn project_blocks(x: &mut [f64], blocks: &[usize]) {
    let mut offset = 0;
    for &b in blocks {
        project_simplex(&mut x[offset..offset + b]);
        offset += b;
    }
}

fn uniform_point(blocks: &[usize]) -> Vec<f64> {
    blocks
        .iter()
        .flat_map(|&b| std::iter::repeat_n(1.0 / b as f64, b))
        .collect()
}

fn random_point(blocks: &[usize], seed: u64, key: u64, start: u64) -> Vec<f64> {
    let mut r = rng::keyed(seed, &[0x00A5_CE47, key, start]);
    blocks.iter().flat_map(|&b| rng::dirichlet_flat(&mut r, b)).collect()
}

/// Step-doubling projected ascent along the gradient of the active unit.
/// Only strict improvements are accepted.
pub(crate) fn ascend(obj: &dyn Objective, x0: &[f64]) -> (Vec<f64>, f64) {
    let blocks = obj.blocks();
    let units = obj.units();
    let mut x = x0.to_vec();
    project_blocks(&mut x, blocks);
    let mut eval = obj.evaluate(&x, true);
    let (mut value, mut active) = eval.value(units);
    let mut step = 0.05;
    for _ in 0..MAX_ASCENT_ITERS {
        let g = eval.unit_gradient(units[active]);
        let scale = g.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let mut y: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a + step * b / scale).collect();
        project_blocks(&mut y, blocks);
        let ey = obj.evaluate(&y, true);
        let (vy, ay) = ey.value(units);
        if vy > value {
            x = y;
            eval = ey;
            value = vy;
            active = ay;
            step = (step * 2.0).min(1.0);
        } else {
            step *= 0.5;
            if step < MIN_STEP {
                break;
            }
        }
    }
    (x, value)
}

/// Trust-region successive linear programming on `min_k f_k`.
pub(crate) fn polish(obj: &dyn Objective, x0: &[f64]) -> (Vec<f64>, f64) {
    let blocks = obj.blocks();
    let units = obj.units();
    let mut x = x0.to_vec();
    let mut eval = obj.evaluate(&x, true);
    let (mut value, _) = eval.value(units);
    let mut radius = 0.05;
    for _ in 0..200 {
        if radius < 1e-11 {
            break;
        }
        let grads: Vec<Vec<f64>> = units.iter().map(|&u| eval.unit_gradient(u)).collect();
        let vals: Vec<f64> = units.iter().map(|&(t, s)| eval.legit[t] - eval.eaves[s]).collect();
        let norms: Vec<f64> = grads.iter().map(|g| g.iter().map(|v| v.abs()).sum()).collect();
        // the model optimum is at most value + radius * |g_k|_1 for every k,
        // so units that cannot come within that reach are dropped
        let reach = vals
            .iter()
            .zip(&norms)
            .map(|(v, n)| v + radius * n)
            .fold(f64::INFINITY, f64::min);
        let mut prog = lp::Program::maximize();
        let d: Vec<lp::Var> = x.iter().map(|xi| prog.var(0.0, (-radius).max(-xi), radius)).collect();
        let z = prog.var(1.0, f64::NEG_INFINITY, f64::INFINITY);
        let mut offset = 0;
        for &b in blocks {
            let terms: Vec<_> = (offset..offset + b).map(|i| (d[i], 1.0)).collect();
            prog.eq(&terms, 0.0);
            offset += b;
        }
        for k in 0..units.len() {
            if vals[k] - radius * norms[k] > reach {
                continue;
            }
            let mut terms: Vec<_> = d
                .iter()
                .zip(&grads[k])
                .filter(|(_, g)| **g != 0.0)
                .map(|(v, g)| (*v, -g))
                .collect();
            terms.push((z, 1.0));
            prog.le(&terms, vals[k]);
        }
        let Some(sol) = prog.solve() else {
            radius *= 0.25;
            continue;
        };
        let mut y: Vec<f64> = x.iter().zip(&d).map(|(xi, v)| (xi + sol.value(*v)).max(0.0)).collect();
        let mut offset = 0;
        for &b in blocks {
            let total: f64 = y[offset..offset + b].iter().sum();
            for v in &mut y[offset..offset + b] {
                *v /= total;
            }
            offset += b;
        }
        let ey = obj.evaluate(&y, true);
        let (vy, _) = ey.value(units);
        if vy > value {
            x = y;
            eval = ey;
            value = vy;
            radius = (radius * 2.0).min(0.5);
        } else {
            radius *= 0.25;
        }
    }
    (x, value)
}

/// Simplex grid of resolution `n` over `k <= 3` symbols, in lexicographic order.
fn grid_points(k: usize, n: usize) -> Vec<Vec<f64>> {
    let nf = n as f64;
    match k {
        1 => vec![vec![1.0]],
        2 => (0..=n).map(|i| vec![i as f64 / nf, (n - i) as f64 / nf]).collect(),
        3 => (0..=n)
            .flat_map(|i| (0..=n - i).map(move |j| vec![i as f64 / nf, j as f64 / nf, (n - i - j) as f64 / nf]))
            .collect(),
        _ => unreachable!("grid search only for at most three symbols"),
    }
}

/// Index and value of the best grid point; ties go to the first point.
pub(crate) fn grid_search(obj: &dyn Objective, n: usize) -> (Vec<f64>, f64) {
    let k = obj.blocks()[0];
    let points = grid_points(k, n);
    let values: Vec<f64> = points.par_iter().map(|p| obj.value(p)).collect();
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    (points[best].clone(), values[best])
}

/// Golden-section search on `p0 in [lo, hi]` for binary inputs.
fn golden_binary(obj: &dyn Objective, lo: f64, hi: f64) -> (Vec<f64>, f64) {
    let f = |s: f64| obj.value(&[s, 1.0 - s]);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..100 {
        if b - a < 1e-15 {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    let mut best = (lo, f(lo));
    for s in [hi, c, d, (a + b) / 2.0] {
        let v = f(s);
        if v > best.1 {
            best = (s, v);
        }
    }
    (vec![best.0, 1.0 - best.0], best.1)
}

/// Runs every search route and returns the best point. The candidate order
/// is fixed, so ties resolve to the earliest candidate independently of
/// thread count.
pub(crate) fn maximize(obj: &dyn Objective, plan: &Plan<'_>) -> Optimum {
    let blocks = obj.blocks().to_vec();
    let single = blocks.len() == 1;

    if single && blocks[0] == 1 {
        return Optimum {
            x: vec![1.0],
            method: Method::Exhaustive,
        };
    }

    let mut starts: Vec<(Vec<f64>, Method)> = vec![(uniform_point(&blocks), Method::MultiStart)];
    for s in plan.seeds {
        starts.push((s.clone(), Method::MultiStart));
    }
    for r in 0..plan.restarts {
        starts.push((random_point(&blocks, plan.seed, plan.key, r as u64), Method::MultiStart));
    }
    let mut candidates: Vec<(Vec<f64>, f64, Method)> = starts
        .par_iter()
        .map(|(x0, m)| {
            let (x, v) = ascend(obj, x0);
            (x, v, *m)
        })
        .collect();

    if single {
        let k = blocks[0];
        for a in 0..k {
            let mut x = vec![0.0; k];
            x[a] = 1.0;
            let v = obj.value(&x);
            candidates.push((x, v, Method::MultiStart));
        }
        if k <= 3 && plan.grid > 0 {
            let (g, gv) = grid_search(obj, plan.grid);
            candidates.push((g.clone(), gv, Method::GridSearch));
            if k == 2 {
                let h = 1.0 / plan.grid as f64;
                let (x, v) = golden_binary(obj, (g[0] - h).max(0.0), (g[0] + h).min(1.0));
                candidates.push((x, v, Method::GridSearch));
            }
            let (x, v) = ascend(obj, &g);
            candidates.push((x, v, Method::GridSearch));
        }
    }

    // polish the leading candidates
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&i, &j| {
        candidates[j]
            .1
            .partial_cmp(&candidates[i].1)
            .expect("finite objective")
            .then(i.cmp(&j))
    });
    let picked: Vec<usize> = order.into_iter().take(POLISH_CANDIDATES).collect();
    let polished: Vec<(Vec<f64>, f64, Method)> = picked
        .par_iter()
        .map(|&i| {
            let (x, v) = polish(obj, &candidates[i].0);
            (x, v, candidates[i].2)
        })
        .collect();
    candidates.extend(polished);

    let mut best = 0;
    for (i, c) in candidates.iter().enumerate() {
        if c.1 > candidates[best].1 {
            best = i;
        }
    }
    let (x, _, method) = candidates.swap_remove(best);
    Optimum { x, method }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_examples() {
        let mut v = vec![0.5, 0.5];
        project_simplex(&mut v);
        assert_eq!(v, vec![0.5, 0.5]);
        let mut v = vec![2.0, 0.0, 0.0];
        project_simplex(&mut v);
        assert_eq!(v, vec![1.0, 0.0, 0.0]);
        let mut v = vec![0.4, 0.4, 0.4];
        project_simplex(&mut v);
        for x in v {
            assert!((x - 1.0 / 3.0).abs() < 1e-15);
        }
        let mut v = vec![-1.0, 0.3, 0.9];
        project_simplex(&mut v);
        assert!((v[0]).abs() < 1e-15 && (v[1] - 0.2).abs() < 1e-12 && (v[2] - 0.8).abs() < 1e-12);
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(grid_points(2, 10).len(), 11);
        assert_eq!(grid_points(3, 10).len(), 66);
    }
}
