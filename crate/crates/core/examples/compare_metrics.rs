//! Blocking probability and transceivers per served demand for all four
//! metrics over a load sweep, averaged across seeds.
//!
//! ```bash
//! cargo run --release -p eonsim --example compare_metrics -- usbackbone 200,300,400,500,600
//! ```

use std::collections::BTreeMap;

use eonsim::{CostSpec, Load, Metric, Sweep, Topology};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "nsfnet".into());
    let erlangs: Vec<f64> = args
        .next()
        .unwrap_or_else(|| "150,200,250,300,350".into())
        .split(',')
        .map(str::parse)
        .collect::<Result<_, _>>()?;
    let seeds: u64 = args.next().map_or(Ok(5), |s| s.parse())?;

    let path = format!("{}/data/{name}.topo", env!("CARGO_MANIFEST_DIR"));
    let topology = Topology::load(path)?;
    let specs: Vec<CostSpec> = Metric::ALL.iter().map(|&m| CostSpec::new(m)).collect();
    let loads: Vec<Load> = erlangs.iter().map(|&e| Load::erlang(10.0, e)).collect();
    let sweep = Sweep::new(specs, loads, (1..=seeds).collect(), 10_000);
    let runs = sweep.run(&topology)?;

    // (metric, load) -> (sum blocking, sum transceivers/served, n)
    let mut acc: BTreeMap<(String, u64), (f64, f64, f64)> = BTreeMap::new();
    for run in &runs {
        let r = &run.result;
        let e = acc
            .entry((r.spec.metric.to_string(), r.load_erlang().round() as u64))
            .or_default();
        e.0 += r.blocking_probability();
        e.1 += r.transceivers_per_served();
        e.2 += 1.0;
    }
    println!("{}: mean over {seeds} seeds, 10000 demands each", topology.name());
    println!("{:<6} {:>8} {:>12} {:>14}", "metric", "erlang", "blocking", "trx/served");
    for ((metric, load), (b, t, n)) in &acc {
        println!("{metric:<6} {load:>8} {:>12.5} {:>14.4}", b / n, t / n);
    }
    Ok(())
}
