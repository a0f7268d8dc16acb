//! Linear, quadratic and square-root merging of the usage term under the
//! LLU metric, averaged across seeds.
//!
//! ```bash
//! cargo run --release -p eonsim --example merge_functions -- usbackbone 100,200,300,400,500 5 1.0
//! ```

use eonsim::{CostSpec, Load, Merge, Metric, Sweep, Topology};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "usbackbone".into());
    let erlangs: Vec<f64> = args
        .next()
        .unwrap_or_else(|| "100,200,300,400,500".into())
        .split(',')
        .map(str::parse)
        .collect::<Result<_, _>>()?;
    let seeds: u64 = args.next().map_or(Ok(5), |s| s.parse())?;
    let alpha: f64 = args.next().map_or(Ok(1.0), |s| s.parse())?;

    let topology = Topology::load(format!("{}/data/{name}.topo", env!("CARGO_MANIFEST_DIR")))?;
    let specs: Vec<CostSpec> = Merge::ALL
        .iter()
        .map(|&m| CostSpec::new(Metric::LLU).with_merge(m).with_alpha(alpha))
        .collect();
    let loads: Vec<Load> = erlangs.iter().map(|&e| Load::erlang(10.0, e)).collect();
    let per_spec = loads.len() * seeds as usize;
    let runs = Sweep::new(specs.clone(), loads, (1..=seeds).collect(), 10_000).run(&topology)?;

    println!("{} LLU alpha={alpha}: mean blocking over {seeds} seeds", topology.name());
    print!("{:>8}", "erlang");
    for spec in &specs {
        print!(" {:>11}", spec.merge.to_string());
    }
    println!();
    for (li, erlang) in erlangs.iter().enumerate() {
        print!("{erlang:>8}");
        for si in 0..specs.len() {
            let chunk = &runs[si * per_spec + li * seeds as usize..][..seeds as usize];
            let mean: f64 =
                chunk.iter().map(|r| r.result.blocking_probability()).sum::<f64>() / seeds as f64;
            print!(" {mean:>11.5}");
        }
        println!();
    }
    Ok(())
}
