//! Discrete-event simulator for elastic optical networks.
//!
//! Demands arrive as a Poisson process with exponential holding times and
//! are served by single shortest-path routing under a configurable link-cost
//! metric, distance-adaptive modulation and first-fit spectrum assignment.
//! The crate reports blocking probability and transceivers per served
//! demand for each metric.
//!
//! The main pieces, bottom-up:
//!
//! - [`topology`]: network graph and the `.topo` file format
//! - [`spectrum`]: per-link slot occupancy, usage and accommodation probability
//! - [`cost`]: link-cost metrics and merge functions
//! - [`routing`]: deterministic Dijkstra
//! - [`rmsa`]: modulation choice, slot sizing and admission
//! - [`traffic`]: seeded demand traces
//! - [`sim`]: the event loop and parameter sweeps
//! - [`cli`] / [`report`]: configs, orchestration and CSV output

pub mod cli;
pub mod cost;
pub mod report;
pub mod rmsa;
pub mod routing;
pub mod sim;
pub mod spectrum;
pub mod topology;
pub mod traffic;

pub use cost::{CostSpec, Merge, Metric};
pub use rmsa::{Admission, BlockReason, Connection, ModulationFormat, Network};
pub use routing::{shortest_path, Path};
pub use sim::{run, Load, SimOptions, SimResult, SimStats, Sweep, SweepRun};
pub use spectrum::{first_fit, SlotRange, SpectrumGrid};
pub use topology::{Link, LinkId, NodeId, Topology};
pub use traffic::{generate_trace, Demand, TrafficConfig};
