//! Discrete-event loop over a demand trace, plus the sweep harness.
//!
//! Events are processed in `(time, kind, id)` order with departures ahead of
//! arrivals at equal timestamps. Grids start and end empty.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};
use std::cmp::Reverse;

use rayon::prelude::*;
use thiserror::Error;

use crate::cost::CostSpec;
use crate::rmsa::{Admission, BlockReason, Connection, ModulationFormat, Network, RmsaError};
use crate::spectrum::DEFAULT_SLOTS;
use crate::topology::Topology;
use crate::traffic::{generate_trace, validate_trace, Demand, TraceError, TrafficConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EventKind {
    Departure,
    Arrival,
}

/// A processed event; `id` is the demand id (connections share it).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub time: f64,
    pub kind: EventKind,
    pub id: u64,
}

impl Event {
    fn key_cmp(&self, other: &Self) -> Ordering {
        self.time
            .total_cmp(&other.time)
            .then(self.kind.cmp(&other.kind))
            .then(self.id.cmp(&other.id))
    }
}

impl Eq for Event {}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key_cmp(other)
    }
}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error("empty trace")]
    EmptyTrace,
    #[error("invalid trace: {0}")]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Rmsa(#[from] RmsaError),
    #[error("audit failed after event {event:?}: {msg}")]
    Audit { event: Event, msg: String },
    #[error("failed to build worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimOptions {
    pub slots: usize,
    /// Leading demands simulated but excluded from the counters.
    pub warmup_demands: usize,
    /// Full occupancy recheck after every event.
    pub audit: bool,
    pub record_outcomes: bool,
    pub record_events: bool,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            slots: DEFAULT_SLOTS,
            warmup_demands: 0,
            audit: false,
            record_outcomes: false,
            record_events: false,
        }
    }
}

/// Counters for one run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SimStats {
    pub num_demands: usize,
    pub served: usize,
    pub blocked_distance: usize,
    pub blocked_spectrum: usize,
    pub transceivers_total: usize,
}

impl SimStats {
    pub fn blocked_total(&self) -> usize {
        self.blocked_distance + self.blocked_spectrum
    }

    pub fn blocking_probability(&self) -> f64 {
        if self.num_demands == 0 {
            0.0
        } else {
            self.blocked_total() as f64 / self.num_demands as f64
        }
    }

    pub fn transceivers_per_served(&self) -> f64 {
        if self.served == 0 {
            0.0
        } else {
            self.transceivers_total as f64 / self.served as f64
        }
    }
}

/// One row of the per-demand outcome log.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub demand_id: u64,
    pub block_reason: Option<BlockReason>,
    pub path_nodes: Option<String>,
    pub modulation: Option<ModulationFormat>,
    pub slot_start: Option<usize>,
    pub slot_count: Option<usize>,
    pub path_length_km: Option<f64>,
}

impl Outcome {
    pub fn is_served(&self) -> bool {
        self.block_reason.is_none()
    }

    fn from_admission(demand_id: u64, admission: &Admission) -> Self {
        match admission {
            Admission::Admitted(c) => Outcome {
                demand_id,
                block_reason: None,
                path_nodes: Some(c.path.node_string()),
                modulation: Some(c.modulation),
                slot_start: Some(c.slots.start),
                slot_count: Some(c.slots.count),
                path_length_km: Some(c.path.total_length_km),
            },
            Admission::Blocked {
                reason,
                path,
                modulation,
            } => Outcome {
                demand_id,
                block_reason: Some(*reason),
                path_nodes: path.as_ref().map(|p| p.node_string()),
                modulation: *modulation,
                slot_start: None,
                slot_count: None,
                path_length_km: path.as_ref().map(|p| p.total_length_km),
            },
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOutput {
    pub stats: SimStats,
    pub outcomes: Vec<Outcome>,
    pub events: Vec<Event>,
    /// Every admitted connection, in admission order. Only kept when
    /// outcomes are recorded.
    pub connections: Vec<Connection>,
}

/// Simulates `trace` on a fresh network.
pub fn run(
    topology: &Topology,
    spec: &CostSpec,
    trace: &[Demand],
    options: &SimOptions,
) -> Result<RunOutput, SimError> {
    if trace.is_empty() {
        return Err(SimError::EmptyTrace);
    }
    validate_trace(trace, topology.num_nodes())?;

    let mut net = Network::new(topology, options.slots);
    let mut active: BTreeMap<u64, Connection> = BTreeMap::new();
    let mut departures: BinaryHeap<Reverse<Event>> = BinaryHeap::new();
    let mut out = RunOutput::default();
    let mut last: Option<Event> = None;

    let mut process = |event: Event,
                       net: &mut Network,
                       active: &mut BTreeMap<u64, Connection>,
                       out: &mut RunOutput|
     -> Result<(), SimError> {
        if options.audit {
            if let Some(prev) = last {
                if prev.key_cmp(&event) != Ordering::Less {
                    return Err(SimError::Audit {
                        event,
                        msg: format!("out of order after {prev:?}"),
                    });
                }
            }
            audit(net, active).map_err(|msg| SimError::Audit { event, msg })?;
        }
        last = Some(event);
        if options.record_events {
            out.events.push(event);
        }
        Ok(())
    };

    for (idx, demand) in trace.iter().enumerate() {
        let arrival = Event {
            time: demand.arrival_time,
            kind: EventKind::Arrival,
            id: demand.id,
        };
        while let Some(&Reverse(dep)) = departures.peek() {
            if dep > arrival {
                break;
            }
            departures.pop();
            depart(&mut net, &mut active, dep)?;
            process(dep, &mut net, &mut active, &mut out)?;
        }

        let admission = net.try_admit(spec, demand)?;
        let counted = idx >= options.warmup_demands;
        if counted {
            out.stats.num_demands += 1;
        }
        if options.record_outcomes {
            out.outcomes
                .push(Outcome::from_admission(demand.id, &admission));
        }
        match admission {
            Admission::Admitted(conn) => {
                if counted {
                    out.stats.served += 1;
                    out.stats.transceivers_total += conn.transceivers();
                }
                departures.push(Reverse(Event {
                    time: conn.departure_time,
                    kind: EventKind::Departure,
                    id: conn.demand_id,
                }));
                if options.record_outcomes {
                    out.connections.push(conn.clone());
                }
                active.insert(conn.demand_id, conn);
            }
            Admission::Blocked { reason, .. } => {
                if counted {
                    match reason {
                        BlockReason::Distance => out.stats.blocked_distance += 1,
                        BlockReason::Spectrum => out.stats.blocked_spectrum += 1,
                    }
                }
            }
        }
        process(arrival, &mut net, &mut active, &mut out)?;
    }

    while let Some(Reverse(dep)) = departures.pop() {
        depart(&mut net, &mut active, dep)?;
        process(dep, &mut net, &mut active, &mut out)?;
    }

    if !net.is_empty() || !active.is_empty() {
        return Err(SimError::Audit {
            event: last.expect("at least one event"),
            msg: "spectrum still occupied after the final departure".into(),
        });
    }
    Ok(out)
}

fn depart(
    net: &mut Network,
    active: &mut BTreeMap<u64, Connection>,
    event: Event,
) -> Result<(), SimError> {
    let conn = active.remove(&event.id).ok_or_else(|| SimError::Audit {
        event,
        msg: "departure for an unknown connection".into(),
    })?;
    net.release(&conn)?;
    Ok(())
}

/// Recomputes occupancy from the active connections and compares it with
/// the grids. Also checks the per-connection continuity/contiguity/reach
/// properties.
fn audit(net: &Network, active: &BTreeMap<u64, Connection>) -> Result<(), String> {
    let topology = net.topology();
    let slots = net.slots_per_link();
    let mut owner: Vec<Vec<Option<u64>>> = vec![vec![None; slots]; topology.num_links()];
    for conn in active.values() {
        if conn.path.total_length_km > conn.modulation.max_reach_km() {
            return Err(format!("connection {} exceeds modulation reach", conn.demand_id));
        }
        if conn.slots.count != conn.data_slots + crate::rmsa::GUARD_SLOTS {
            return Err(format!("connection {} has wrong guard band", conn.demand_id));
        }
        for &link in &conn.path.links {
            for slot in conn.slots.slots() {
                if let Some(other) = owner[link.0][slot].replace(conn.demand_id) {
                    return Err(format!(
                        "link {link} slot {slot} held by {other} and {}",
                        conn.demand_id
                    ));
                }
            }
        }
    }
    for (i, grid) in net.grids().iter().enumerate() {
        if grid.recount() != grid.used_slots() {
            return Err(format!("link {i}: cached used count disagrees with occupancy"));
        }
        for (slot, &busy) in grid.occupancy().iter().enumerate() {
            if busy != owner[i][slot].is_some() {
                return Err(format!(
                    "link {i} slot {slot}: grid says {busy}, connections disagree"
                ));
            }
        }
    }
    Ok(())
}

/// Offered traffic point: arrival rate and service rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Load {
    pub lambda: f64,
    pub mu: f64,
}

impl Load {
    pub fn new(lambda: f64, mu: f64) -> Self {
        Load { lambda, mu }
    }

    /// Load point with the given Erlang value at arrival rate `lambda`.
    pub fn erlang(lambda: f64, erlang: f64) -> Self {
        Load {
            lambda,
            mu: lambda / erlang,
        }
    }

    pub fn load_erlang(&self) -> f64 {
        self.lambda / self.mu
    }
}

/// Summary of one simulated `(spec, load, seed)` point.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub topology: String,
    pub spec: CostSpec,
    pub lambda: f64,
    pub mu: f64,
    pub seed: u64,
    pub stats: SimStats,
}

impl SimResult {
    pub fn load_erlang(&self) -> f64 {
        self.lambda / self.mu
    }

    pub fn blocking_probability(&self) -> f64 {
        self.stats.blocking_probability()
    }

    pub fn transceivers_per_served(&self) -> f64 {
        self.stats.transceivers_per_served()
    }
}

#[derive(Debug, Clone)]
pub struct SweepRun {
    pub result: SimResult,
    pub outcomes: Vec<Outcome>,
}

/// Everything a sweep needs besides the topology.
#[derive(Debug, Clone)]
pub struct Sweep {
    pub specs: Vec<CostSpec>,
    pub loads: Vec<Load>,
    pub seeds: Vec<u64>,
    pub num_demands: usize,
    pub options: SimOptions,
    /// Worker threads; 0 picks the rayon default.
    pub jobs: usize,
}

impl Sweep {
    pub fn new(specs: Vec<CostSpec>, loads: Vec<Load>, seeds: Vec<u64>, num_demands: usize) -> Self {
        Sweep {
            specs,
            loads,
            seeds,
            num_demands,
            options: SimOptions::default(),
            jobs: 0,
        }
    }

    pub fn traffic(&self, load: Load, seed: u64) -> TrafficConfig {
        TrafficConfig::new(load.lambda, load.mu, self.num_demands, seed)
    }

    /// Runs every `(spec, load, seed)` combination. Results are ordered by
    /// spec, then load, then seed, regardless of scheduling. All specs see
    /// the same trace for a given `(load, seed)`.
    pub fn run(&self, topology: &Topology) -> Result<Vec<SweepRun>, SimError> {
        if self.specs.is_empty() || self.loads.is_empty() || self.seeds.is_empty() {
            return Ok(Vec::new());
        }
        let mut builder = rayon::ThreadPoolBuilder::new();
        if self.jobs > 0 {
            builder = builder.num_threads(self.jobs);
        }
        let pool = builder.build().map_err(|e| SimError::Pool(e.to_string()))?;
        pool.install(|| self.run_in_pool(topology))
    }

    fn run_in_pool(&self, topology: &Topology) -> Result<Vec<SweepRun>, SimError> {
        let points: Vec<(usize, usize)> = (0..self.loads.len())
            .flat_map(|l| (0..self.seeds.len()).map(move |s| (l, s)))
            .collect();
        let traces: Vec<Vec<Demand>> = points
            .par_iter()
            .map(|&(l, s)| generate_trace(&self.traffic(self.loads[l], self.seeds[s]), topology))
            .collect();

        let tasks: Vec<(usize, usize)> = (0..self.specs.len())
            .flat_map(|spec| (0..points.len()).map(move |p| (spec, p)))
            .collect();
        tasks
            .par_iter()
            .map(|&(spec_idx, point)| {
                let spec = &self.specs[spec_idx];
                let (l, s) = points[point];
                let out = run(topology, spec, &traces[point], &self.options)?;
                Ok(SweepRun {
                    result: SimResult {
                        topology: topology.name().to_string(),
                        spec: *spec,
                        lambda: self.loads[l].lambda,
                        mu: self.loads[l].mu,
                        seed: self.seeds[s],
                        stats: out.stats,
                    },
                    outcomes: out.outcomes,
                })
            })
            .collect()
    }
}
