//! Replays a demand trace from CSV under all four metrics, so every metric
//! sees exactly the same workload. Without an argument a trace is generated
//! and round-tripped through a temporary file first.
//!
//! ```bash
//! cargo run --release -p eonsim --example replay_trace -- /tmp/trace.csv nsfnet
//! ```

use eonsim::sim::{run, SimOptions};
use eonsim::traffic::{generate_trace, load_trace, write_trace_csv, TrafficConfig};
use eonsim::{CostSpec, Metric, Topology};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let trace_path = args.next();
    let name = args.next().unwrap_or_else(|| "nsfnet".into());
    let topology = Topology::load(format!("{}/data/{name}.topo", env!("CARGO_MANIFEST_DIR")))?;

    let trace = match trace_path {
        Some(path) => load_trace(path)?,
        None => {
            let generated = generate_trace(&TrafficConfig::new(10.0, 0.03, 10_000, 7), &topology);
            let file = tempfile::NamedTempFile::new()?;
            write_trace_csv(&generated, file.as_file())?;
            let reloaded = load_trace(file.path())?;
            assert_eq!(reloaded, generated);
            reloaded
        }
    };

    println!("{} demands on {}", trace.len(), topology.name());
    for metric in Metric::ALL {
        let stats = run(&topology, &CostSpec::new(metric), &trace, &SimOptions::default())?.stats;
        println!(
            "{metric:<4} blocking {:.5}  transceivers/served {:.4}",
            stats.blocking_probability(),
            stats.transceivers_per_served()
        );
    }
    Ok(())
}
