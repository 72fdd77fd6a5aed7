//! Compound wiretap channels over finite alphabets: channel algebra,
//! information measures, secrecy-rate optimizers, an exact small-blocklength
//! random-coding laboratory and optimal eavesdropper attacks.

pub mod adversary;
pub mod capacity;
pub mod channel;
pub mod channel_file;
pub mod codelab;
pub mod error;
pub mod info;
mod lp;
mod rng;
pub mod scenarios;

pub use channel::{
    bsc, compose, convex_combine, find_degradation, output_distribution, product_extension, Channel, CompoundWiretap,
    DegradationWitness, Distribution, Pairing,
};
pub use error::{Error, Result, DEFAULT_BUDGET};
