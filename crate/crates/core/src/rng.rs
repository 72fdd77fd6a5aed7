//! Keyed generator streams: one independent ChaCha8 stream per key tuple,
//! so results never depend on the order in which work is scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stream for `(seed, tags[0], tags[1], tags[2])`; missing tags are zero.
pub(crate) fn keyed(seed: u64, tags: &[u64]) -> ChaCha8Rng {
    assert!(tags.len() <= 3, "at most three key tags");
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    for (i, t) in tags.iter().enumerate() {
        key[8 * (i + 1)..8 * (i + 2)].copy_from_slice(&t.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Uniform point of the simplex (flat Dirichlet).
pub(crate) fn dirichlet_flat<R: Rng>(rng: &mut R, size: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..size).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = w.iter().sum();
    for x in &mut w {
        *x /= total;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_keyed() {
        let a: u64 = keyed(1, &[2, 3]).random();
        let b: u64 = keyed(1, &[2, 3]).random();
        let c: u64 = keyed(1, &[3, 2]).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
        let d = dirichlet_flat(&mut keyed(0, &[]), 5);
        assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(d.iter().all(|x| *x > 0.0));
    }
}
