//! Per-demand admission: route, pick a modulation format by reach, size the
//! slot range (one guard slice included) and assign spectrum first-fit.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::cost::{CostError, CostSpec};
use crate::routing::{length_weights, shortest_path, Path, RoutingError};
use crate::spectrum::{first_fit, SlotRange, SpectrumError, SpectrumGrid};
use crate::topology::{LinkId, Topology};
use crate::traffic::Demand;

/// Slices reserved per connection to separate it from its neighbours.
pub const GUARD_SLOTS: usize = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModulationFormat {
    Bpsk,
    Qpsk,
    Qam8,
    Qam16,
}

impl ModulationFormat {
    /// Ordered by decreasing reach, increasing spectral efficiency.
    pub const ALL: [ModulationFormat; 4] = [
        ModulationFormat::Bpsk,
        ModulationFormat::Qpsk,
        ModulationFormat::Qam8,
        ModulationFormat::Qam16,
    ];

    /// Maximum line rate carried by one slot, Gb/s.
    pub fn max_rate_per_slot_gbps(self) -> f64 {
        match self {
            ModulationFormat::Bpsk => 12.5,
            ModulationFormat::Qpsk => 25.0,
            ModulationFormat::Qam8 => 37.5,
            ModulationFormat::Qam16 => 50.0,
        }
    }

    /// Maximum transparent reach, km.
    pub fn max_reach_km(self) -> f64 {
        match self {
            ModulationFormat::Bpsk => 5000.0,
            ModulationFormat::Qpsk => 2500.0,
            ModulationFormat::Qam8 => 1250.0,
            ModulationFormat::Qam16 => 625.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModulationFormat::Bpsk => "BPSK",
            ModulationFormat::Qpsk => "QPSK",
            ModulationFormat::Qam8 => "8QAM",
            ModulationFormat::Qam16 => "16QAM",
        }
    }
}

impl fmt::Display for ModulationFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModulationFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ModulationFormat::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown modulation format {s:?}"))
    }
}

/// Most spectrally efficient format whose reach covers `path_length_km`
/// (boundary inclusive). `None` means the path is beyond every reach.
pub fn select_modulation(path_length_km: f64) -> Option<ModulationFormat> {
    ModulationFormat::ALL
        .into_iter()
        .rev()
        .find(|m| path_length_km <= m.max_reach_km())
}

/// Data slots plus the guard slice: `ceil(bitrate / rate_per_slot) + 1`.
pub fn required_slots(bitrate_gbps: f64, modulation: ModulationFormat) -> usize {
    data_slots(bitrate_gbps, modulation) + GUARD_SLOTS
}

/// Data slots only, which is also the number of transceivers a connection
/// consumes.
pub fn data_slots(bitrate_gbps: f64, modulation: ModulationFormat) -> usize {
    (bitrate_gbps / modulation.max_rate_per_slot_gbps()).ceil() as usize
}

/// Why a demand was not admitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockReason {
    /// The chosen path is longer than every modulation reach.
    Distance,
    /// No slot range is jointly free along the chosen path.
    Spectrum,
}

impl fmt::Display for BlockReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlockReason::Distance => "distance",
            BlockReason::Spectrum => "spectrum",
        })
    }
}

/// An admitted lightpath.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    pub demand_id: u64,
    pub path: Path,
    pub modulation: ModulationFormat,
    pub slots: SlotRange,
    pub data_slots: usize,
    pub departure_time: f64,
}

impl Connection {
    pub fn transceivers(&self) -> usize {
        self.data_slots
    }
}

/// Result of one admission attempt. A blocked attempt may still carry the
/// path that was tried.
#[derive(Debug, Clone, PartialEq)]
pub enum Admission {
    Admitted(Connection),
    Blocked {
        reason: BlockReason,
        path: Option<Path>,
        modulation: Option<ModulationFormat>,
    },
}

#[derive(Debug, Error)]
pub enum RmsaError {
    #[error("demand {id}: bitrate {bitrate} Gb/s outside (0, 50]")]
    BadBitrate { id: u64, bitrate: f64 },
    #[error(transparent)]
    Routing(#[from] RoutingError),
    #[error(transparent)]
    Cost(#[from] CostError),
    #[error("link {link}: {source}")]
    Spectrum {
        link: LinkId,
        #[source]
        source: SpectrumError,
    },
    #[error("no route between {0} and {1} in a connected topology")]
    Unreachable(usize, usize),
}

/// Topology plus one spectrum grid per link.
#[derive(Debug, Clone)]
pub struct Network<'t> {
    topology: &'t Topology,
    grids: Vec<SpectrumGrid>,
    length_weights: Vec<f64>,
    weights: Vec<f64>,
}

impl<'t> Network<'t> {
    pub fn new(topology: &'t Topology, slots_per_link: usize) -> Self {
        Network {
            topology,
            grids: vec![SpectrumGrid::new(slots_per_link); topology.num_links()],
            length_weights: length_weights(topology),
            weights: vec![0.0; topology.num_links()],
        }
    }

    pub fn topology(&self) -> &'t Topology {
        self.topology
    }

    pub fn grids(&self) -> &[SpectrumGrid] {
        &self.grids
    }

    pub fn grid(&self, link: LinkId) -> &SpectrumGrid {
        &self.grids[link.0]
    }

    pub fn grid_mut(&mut self, link: LinkId) -> &mut SpectrumGrid {
        &mut self.grids[link.0]
    }

    pub fn slots_per_link(&self) -> usize {
        self.grids[0].total_slots()
    }

    pub fn is_empty(&self) -> bool {
        self.grids.iter().all(SpectrumGrid::is_empty)
    }

    /// Fills `self.weights` from the current grid state. `needed` is the
    /// slot count used for the accommodation probability.
    fn compute_weights(&mut self, spec: &CostSpec, needed: usize) -> Result<(), CostError> {
        for (i, grid) in self.grids.iter().enumerate() {
            let length = self.topology.normalized_length(LinkId(i));
            let probability = if spec.needs_probability() {
                grid.accommodation_probability(needed)
            } else {
                1.0
            };
            self.weights[i] = spec.link_cost(length, grid.usage(), probability)?;
        }
        Ok(())
    }

    /// Current per-link weights under `spec` for a demand needing `needed`
    /// slots.
    pub fn link_weights(&mut self, spec: &CostSpec, needed: usize) -> Result<Vec<f64>, CostError> {
        self.compute_weights(spec, needed)?;
        Ok(self.weights.clone())
    }

    /// Routes, sizes and assigns spectrum for one demand. On admission every
    /// link of the path is updated; on blocking no grid changes.
    pub fn try_admit(&mut self, spec: &CostSpec, demand: &Demand) -> Result<Admission, RmsaError> {
        let bitrate = demand.bitrate_gbps as f64;
        if !(bitrate > 0.0 && bitrate <= 50.0) {
            return Err(RmsaError::BadBitrate {
                id: demand.id,
                bitrate,
            });
        }
        let (src, dst) = (demand.source, demand.destination);

        // The length-shortest path bounds every other path from below, so a
        // pair beyond every reach is distance-blocked under any metric. For
        // LLP its modulation also provides the provisional slot count.
        let shortest = shortest_path(self.topology, &self.length_weights, src, dst)?
            .ok_or(RmsaError::Unreachable(src.0, dst.0))?;
        let Some(provisional) = select_modulation(shortest.total_length_km) else {
            return Ok(Admission::Blocked {
                reason: BlockReason::Distance,
                path: Some(shortest),
                modulation: None,
            });
        };

        let needed_estimate = required_slots(bitrate, provisional);
        self.compute_weights(spec, needed_estimate)?;
        let path = shortest_path(self.topology, &self.weights, src, dst)?
            .ok_or(RmsaError::Unreachable(src.0, dst.0))?;

        let Some(modulation) = select_modulation(path.total_length_km) else {
            return Ok(Admission::Blocked {
                reason: BlockReason::Distance,
                path: Some(path),
                modulation: None,
            });
        };
        let needed = required_slots(bitrate, modulation);
        let Some(slots) = first_fit(path.links.iter().map(|l| &self.grids[l.0]), needed) else {
            return Ok(Admission::Blocked {
                reason: BlockReason::Spectrum,
                path: Some(path),
                modulation: Some(modulation),
            });
        };

        for &link in &path.links {
            self.grids[link.0]
                .allocate(slots)
                .map_err(|source| RmsaError::Spectrum { link, source })?;
        }
        Ok(Admission::Admitted(Connection {
            demand_id: demand.id,
            path,
            modulation,
            slots,
            data_slots: needed - GUARD_SLOTS,
            departure_time: demand.arrival_time + demand.holding_time,
        }))
    }

    /// Frees the spectrum held by `conn` on every link of its path.
    pub fn release(&mut self, conn: &Connection) -> Result<(), RmsaError> {
        for &link in &conn.path.links {
            self.grids[link.0]
                .release(conn.slots)
                .map_err(|source| RmsaError::Spectrum { link, source })?;
        }
        Ok(())
    }
}
