//! CSV emission for sweep results and per-demand outcome logs.

use std::io::{self, Write};
use std::path::Path;

use crate::sim::{Outcome, SimResult};

pub const RESULTS_HEADER: [&str; 15] = [
    "topology",
    "metric",
    "merge",
    "alpha",
    "lambda",
    "mu",
    "load_erlang",
    "seed",
    "num_demands",
    "served",
    "blocked_total",
    "blocked_distance",
    "blocked_spectrum",
    "blocking_probability",
    "transceivers_per_served",
];

pub const OUTCOME_HEADER: [&str; 8] = [
    "demand_id",
    "outcome",
    "block_reason",
    "path_nodes",
    "modulation",
    "slot_start",
    "slot_count",
    "path_length_km",
];

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

pub fn write_results_csv<'a, W, I>(results: I, out: W) -> csv::Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a SimResult>,
{
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RESULTS_HEADER)?;
    for r in results {
        let s = &r.stats;
        w.write_record([
            r.topology.clone(),
            r.spec.metric.to_string(),
            r.spec.merge.to_string(),
            r.spec.alpha.to_string(),
            r.lambda.to_string(),
            r.mu.to_string(),
            r.load_erlang().to_string(),
            r.seed.to_string(),
            s.num_demands.to_string(),
            s.served.to_string(),
            s.blocked_total().to_string(),
            s.blocked_distance.to_string(),
            s.blocked_spectrum.to_string(),
            s.blocking_probability().to_string(),
            s.transceivers_per_served().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_outcomes_csv<W: Write>(outcomes: &[Outcome], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(OUTCOME_HEADER)?;
    for o in outcomes {
        w.write_record([
            o.demand_id.to_string(),
            if o.is_served() { "served" } else { "blocked" }.to_string(),
            opt(&o.block_reason),
            o.path_nodes.clone().unwrap_or_default(),
            opt(&o.modulation),
            opt(&o.slot_start),
            opt(&o.slot_count),
            opt(&o.path_length_km),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `bytes` to a temporary file beside `path`, then renames it into
/// place, so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::{CostSpec, Metric};
    use crate::rmsa::{BlockReason, ModulationFormat};
    use crate::sim::SimStats;

    #[test]
    fn results_header_and_row() {
        let r = SimResult {
            topology: "nsfnet".into(),
            spec: CostSpec::new(Metric::LLU),
            lambda: 10.0,
            mu: 0.05,
            seed: 3,
            stats: SimStats {
                num_demands: 4,
                served: 3,
                blocked_distance: 0,
                blocked_spectrum: 1,
                transceivers_total: 6,
            },
        };
        let mut buf = Vec::new();
        write_results_csv([&r], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], RESULTS_HEADER.join(","));
        assert_eq!(lines[1], "nsfnet,LLU,linear,1,10,0.05,200,3,4,3,1,0,1,0.25,2");
    }

    #[test]
    fn outcome_rows() {
        let served = Outcome {
            demand_id: 0,
            block_reason: None,
            path_nodes: Some("0-2-5".into()),
            modulation: Some(ModulationFormat::Qam8),
            slot_start: Some(4),
            slot_count: Some(3),
            path_length_km: Some(900.0),
        };
        let blocked = Outcome {
            demand_id: 1,
            block_reason: Some(BlockReason::Spectrum),
            path_nodes: Some("0-1".into()),
            modulation: Some(ModulationFormat::Qpsk),
            slot_start: None,
            slot_count: None,
            path_length_km: Some(1500.0),
        };
        let mut buf = Vec::new();
        write_outcomes_csv(&[served, blocked], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "demand_id,outcome,block_reason,path_nodes,modulation,slot_start,slot_count,path_length_km\n\
             0,served,,0-2-5,8QAM,4,3,900\n\
             1,blocked,spectrum,0-1,QPSK,,,1500\n"
        );
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub/out.csv");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(path.parent().unwrap()).unwrap().count(), 1);
    }
}
