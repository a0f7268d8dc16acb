//! One audited simulation run with its per-demand outcome log.
//!
//! ```bash
//! cargo run --release -p eonsim --example simulate -- usbackbone LLP 300 /tmp/outcomes.csv
//! ```

use eonsim::report::write_outcomes_csv;
use eonsim::sim::{run, SimOptions};
use eonsim::traffic::{generate_trace, TrafficConfig};
use eonsim::{CostSpec, Metric, Topology};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "nsfnet".into());
    let metric: Metric = args.next().unwrap_or_else(|| "LLU".into()).parse()?;
    let erlang: f64 = args.next().map_or(Ok(300.0), |s| s.parse())?;
    let out = args.next();

    let topology = Topology::load(format!("{}/data/{name}.topo", env!("CARGO_MANIFEST_DIR")))?;
    let trace = generate_trace(&TrafficConfig::new(10.0, 10.0 / erlang, 10_000, 1), &topology);
    let options = SimOptions {
        audit: true,
        record_outcomes: true,
        ..Default::default()
    };
    let result = run(&topology, &CostSpec::new(metric), &trace, &options)?;
    let s = result.stats;
    println!(
        "{} {metric} at {erlang} Erlang: served {}, blocked {} (distance {}, spectrum {})",
        topology.name(),
        s.served,
        s.blocked_total(),
        s.blocked_distance,
        s.blocked_spectrum
    );
    println!(
        "blocking probability {:.5}, transceivers per served demand {:.4}",
        s.blocking_probability(),
        s.transceivers_per_served()
    );

    if let Some(path) = out {
        write_outcomes_csv(&result.outcomes, std::fs::File::create(&path)?)?;
        println!("outcome log written to {path}");
    }
    Ok(())
}
