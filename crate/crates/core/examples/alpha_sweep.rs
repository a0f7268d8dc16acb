//! Sensitivity of LLU and LLP blocking to the weight of the dynamic term.
//!
//! ```bash
//! cargo run --release -p eonsim --example alpha_sweep -- usbackbone 300
//! ```

use eonsim::{CostSpec, Load, Metric, Sweep, Topology};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "usbackbone".into());
    let erlang: f64 = args.next().map_or(Ok(300.0), |s| s.parse())?;
    let topology = Topology::load(format!("{}/data/{name}.topo", env!("CARGO_MANIFEST_DIR")))?;

    let alphas = [0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0];
    let seeds: Vec<u64> = (1..=5).collect();
    println!("{} at {erlang} Erlang, mean blocking over {} seeds", topology.name(), seeds.len());
    println!("{:>6} {:>10} {:>10}", "alpha", "LLU", "LLP");
    for alpha in alphas {
        let specs = vec![
            CostSpec::new(Metric::LLU).with_alpha(alpha),
            CostSpec::new(Metric::LLP).with_alpha(alpha),
        ];
        let runs = Sweep::new(specs, vec![Load::erlang(10.0, erlang)], seeds.clone(), 10_000)
            .run(&topology)?;
        let mean = |chunk: &[eonsim::SweepRun]| {
            chunk.iter().map(|r| r.result.blocking_probability()).sum::<f64>() / chunk.len() as f64
        };
        let (llu, llp) = runs.split_at(seeds.len());
        println!("{alpha:>6} {:>10.5} {:>10.5}", mean(llu), mean(llp));
    }
    Ok(())
}
