//! Benchmarks for the hot paths: information measures, typical-set
//! enumeration, decoder construction with exact evaluation, and the rate
//! optimizers.

use std::hint::black_box;

use criterion::{BenchmarkId, Criterion};
use wiretap_core::capacity::{csi_rate_no_prefix, no_csi_lower, SearchOptions};
use wiretap_core::codelab::{
    build_decoder, conditional_typical_set, evaluate_error, evaluate_leakage, sample_codebook, typical_set,
    CodingRegime, Overrides, TypicalityParams,
};
use wiretap_core::info::mutual_information;
use wiretap_core::{bsc, Channel, CompoundWiretap, Distribution, Pairing, DEFAULT_BUDGET};

fn skewed_channel(inputs: usize, outputs: usize) -> Channel {
    let rows = (0..inputs)
        .map(|a| {
            let w: Vec<f64> = (0..outputs).map(|b| 1.0 + ((a * 7 + b * 3) % 5) as f64).collect();
            let s: f64 = w.iter().sum();
            w.into_iter().map(|x| x / s).collect()
        })
        .collect();
    Channel::new(rows).unwrap()
}

pub fn information(c: &mut Criterion) {
    let mut group = c.benchmark_group("mutual information");
    for k in [2, 8, 32] {
        let w = skewed_channel(k, k);
        let p = Distribution::uniform(k);
        group.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, _| {
            b.iter(|| mutual_information(black_box(&p), black_box(&w)).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("typical set");
    let p = Distribution::new(vec![0.3, 0.7]).unwrap();
    for n in [8, 12, 16] {
        let params = TypicalityParams::new(n, 0.1).unwrap();
        group.bench_with_input(BenchmarkId::new("unconditional", n), &n, |b, _| {
            b.iter(|| typical_set(&p, params, DEFAULT_BUDGET).unwrap())
        });
        let w = bsc(0.1).unwrap();
        let x: Vec<usize> = (0..n).map(|i| i % 2).collect();
        group.bench_with_input(BenchmarkId::new("conditional", n), &n, |b, _| {
            b.iter(|| conditional_typical_set(&w, &x, params, DEFAULT_BUDGET).unwrap())
        });
    }
    group.finish();
}

pub fn codes(c: &mut Criterion) {
    let compound = CompoundWiretap::single(bsc(0.03).unwrap(), bsc(0.35).unwrap()).unwrap();
    let inputs = vec![Distribution::uniform(2)];
    let over = Overrides {
        messages: Some(4),
        randomization: Some(4),
    };
    let mut group = c.benchmark_group("code");
    group.sample_size(20);
    for n in [8, 10, 12] {
        let params = TypicalityParams::new(n, 1.0 / n as f64).unwrap();
        let code = sample_codebook(
            &compound,
            CodingRegime::Csi,
            &inputs,
            params,
            0.1,
            over,
            0,
            DEFAULT_BUDGET,
        )
        .unwrap()
        .codebook;
        group.bench_with_input(BenchmarkId::new("decoder", n), &n, |b, _| {
            b.iter(|| build_decoder(&code, &compound, DEFAULT_BUDGET).unwrap())
        });
        let dec = build_decoder(&code, &compound, DEFAULT_BUDGET).unwrap();
        group.bench_with_input(BenchmarkId::new("exact error", n), &n, |b, _| {
            b.iter(|| evaluate_error(&code, &dec, &compound, DEFAULT_BUDGET).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("exact leakage", n), &n, |b, _| {
            b.iter(|| evaluate_leakage(&code, &compound, DEFAULT_BUDGET).unwrap())
        });
    }
    group.finish();
}

pub fn rates(c: &mut Criterion) {
    let compound = CompoundWiretap::new(
        vec![bsc(0.05).unwrap(), bsc(0.1).unwrap(), skewed_channel(2, 2)],
        vec![bsc(0.3).unwrap(), bsc(0.4).unwrap()],
        Pairing::Product,
    )
    .unwrap();
    let mut group = c.benchmark_group("rates");
    group.sample_size(20);
    for grid in [100, 1000] {
        let opts = SearchOptions {
            grid,
            ..SearchOptions::default()
        };
        group.bench_with_input(BenchmarkId::new("no-csi", grid), &grid, |b, _| {
            b.iter(|| no_csi_lower(&compound, &opts).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("csi", grid), &grid, |b, _| {
            b.iter(|| csi_rate_no_prefix(&compound, &opts).unwrap())
        });
    }
    group.finish();
}
