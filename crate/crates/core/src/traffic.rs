//! Reproducible demand traces.
//!
//! A trace is fully determined by `(seed, lambda, mu, num_demands,
//! number of nodes)`. Randomness comes from ChaCha20 keyed with the seed
//! (little-endian in the first 8 key bytes, remaining key bytes zero) and
//! split into three independent streams selected by the ChaCha stream id:
//!
//! | stream | draws per demand, in order                                 |
//! |--------|------------------------------------------------------------|
//! | 1      | inter-arrival gap                                          |
//! | 2      | holding time                                               |
//! | 3      | source, destination, bitrate                               |
//!
//! Every draw consumes whole 64-bit outputs. Continuous uniforms are
//! `((x >> 11) + 0.5) / 2^53`, strictly inside (0, 1); exponentials with rate
//! `r` are `-ln(U) / r`. Integers below `n` use rejection: outputs below
//! `2^64 mod n` are discarded, then `x mod n`. The destination is drawn
//! below `N - 1` and shifted past the source.

use std::io::{Read, Write};
use std::path::Path;

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::topology::{NodeId, Topology};

pub const DEFAULT_LAMBDA: f64 = 10.0;
pub const DEFAULT_NUM_DEMANDS: usize = 10_000;
pub const MIN_BITRATE_GBPS: u32 = 1;
pub const MAX_BITRATE_GBPS: u32 = 50;

const ARRIVAL_STREAM: u64 = 1;
const HOLDING_STREAM: u64 = 2;
const ATTRIBUTE_STREAM: u64 = 3;

/// One connection request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Demand {
    pub id: u64,
    pub arrival_time: f64,
    pub source: NodeId,
    pub destination: NodeId,
    pub bitrate_gbps: u32,
    pub holding_time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrafficConfig {
    /// Arrival rate.
    pub lambda: f64,
    /// Service rate; mean holding time is `1 / mu`.
    pub mu: f64,
    pub num_demands: usize,
    pub seed: u64,
}

impl TrafficConfig {
    pub fn new(lambda: f64, mu: f64, num_demands: usize, seed: u64) -> Self {
        TrafficConfig {
            lambda,
            mu,
            num_demands,
            seed,
        }
    }

    /// Offered load in Erlang.
    pub fn load_erlang(&self) -> f64 {
        self.lambda / self.mu
    }
}

/// Stream `stream` of the ChaCha20 generator keyed by `seed`.
pub fn substream(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    let mut rng = ChaCha20Rng::from_seed(key);
    rng.set_stream(stream);
    rng
}

/// Uniform in the open interval (0, 1).
pub fn open_unit(rng: &mut impl RngCore) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Exponential variate with the given rate.
pub fn exponential(rng: &mut impl RngCore, rate: f64) -> f64 {
    -open_unit(rng).ln() / rate
}

/// Unbiased integer in `0..n`.
pub fn below(rng: &mut impl RngCore, n: u64) -> u64 {
    assert!(n > 0);
    let threshold = n.wrapping_neg() % n;
    loop {
        let x = rng.next_u64();
        if x >= threshold {
            return x % n;
        }
    }
}

/// Generates `config.num_demands` demands over the nodes of `topology`.
pub fn generate_trace(config: &TrafficConfig, topology: &Topology) -> Vec<Demand> {
    generate_trace_for(config, topology.num_nodes())
}

/// Same as [`generate_trace`] given only the node count.
pub fn generate_trace_for(config: &TrafficConfig, num_nodes: usize) -> Vec<Demand> {
    assert!(num_nodes >= 2, "traffic needs at least two nodes");
    assert!(config.lambda > 0.0 && config.mu > 0.0);
    let mut arrivals = substream(config.seed, ARRIVAL_STREAM);
    let mut holdings = substream(config.seed, HOLDING_STREAM);
    let mut attributes = substream(config.seed, ATTRIBUTE_STREAM);
    let n = num_nodes as u64;
    let span = (MAX_BITRATE_GBPS - MIN_BITRATE_GBPS + 1) as u64;

    let mut time = 0.0f64;
    let mut trace = Vec::with_capacity(config.num_demands);
    for id in 0..config.num_demands as u64 {
        let mut next = time + exponential(&mut arrivals, config.lambda);
        if next <= time {
            next = f64::from_bits(time.to_bits() + 1);
        }
        time = next;
        let holding_time = exponential(&mut holdings, config.mu);
        let source = below(&mut attributes, n);
        let mut destination = below(&mut attributes, n - 1);
        if destination >= source {
            destination += 1;
        }
        let bitrate_gbps = MIN_BITRATE_GBPS + below(&mut attributes, span) as u32;
        trace.push(Demand {
            id,
            arrival_time: time,
            source: NodeId(source as usize),
            destination: NodeId(destination as usize),
            bitrate_gbps,
            holding_time,
        });
    }
    trace
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("demand {id}: {msg}")]
    Invalid { id: u64, msg: String },
}

/// Writes `id,arrival_time,source,destination,bitrate_gbps,holding_time`.
/// Floats use shortest round-trip formatting, so a read-back trace is
/// bit-identical.
pub fn write_trace_csv<W: Write>(trace: &[Demand], out: W) -> Result<(), TraceError> {
    let mut w = csv::Writer::from_writer(out);
    for d in trace {
        w.serialize(d)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trace_csv<R: Read>(input: R) -> Result<Vec<Demand>, TraceError> {
    let mut r = csv::Reader::from_reader(input);
    let trace = r.deserialize().collect::<Result<Vec<Demand>, _>>()?;
    Ok(trace)
}

pub fn load_trace(path: impl AsRef<Path>) -> Result<Vec<Demand>, TraceError> {
    read_trace_csv(std::fs::File::open(path)?)
}

/// Checks field invariants: sequential ids, strictly increasing arrivals,
/// distinct in-range endpoints, bitrate in 1..=50, positive holding time.
pub fn validate_trace(trace: &[Demand], num_nodes: usize) -> Result<(), TraceError> {
    let mut last = f64::NEG_INFINITY;
    for (i, d) in trace.iter().enumerate() {
        let bad = |msg: String| Err(TraceError::Invalid { id: d.id, msg });
        if d.id != i as u64 {
            return bad(format!("expected id {i}"));
        }
        if !(d.arrival_time >= 0.0 && d.arrival_time > last) {
            return bad("arrival times must be non-negative and strictly increasing".into());
        }
        last = d.arrival_time;
        if d.source == d.destination {
            return bad("source equals destination".into());
        }
        if d.source.0 >= num_nodes || d.destination.0 >= num_nodes {
            return bad(format!("endpoint outside 0..{num_nodes}"));
        }
        if !(MIN_BITRATE_GBPS..=MAX_BITRATE_GBPS).contains(&d.bitrate_gbps) {
            return bad(format!("bitrate {} outside 1..=50", d.bitrate_gbps));
        }
        if !(d.holding_time.is_finite() && d.holding_time > 0.0) {
            return bad(format!("holding time {} not positive", d.holding_time));
        }
    }
    Ok(())
}
