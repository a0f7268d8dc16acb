//! Generates a seeded demand trace, writes it as CSV and prints summary
//! statistics next to their expected values.
//!
//! ```bash
//! cargo run -p eonsim --example traffic_trace -- 250 42 /tmp/trace.csv
//! ```

use eonsim::traffic::{generate_trace_for, write_trace_csv, TrafficConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let erlang: f64 = args.next().map_or(Ok(250.0), |s| s.parse())?;
    let seed: u64 = args.next().map_or(Ok(42), |s| s.parse())?;
    let out = args.next();

    let config = TrafficConfig::new(10.0, 10.0 / erlang, 10_000, seed);
    let trace = generate_trace_for(&config, 14);

    let n = trace.len() as f64;
    let span = trace.last().unwrap().arrival_time;
    let mean_hold = trace.iter().map(|d| d.holding_time).sum::<f64>() / n;
    let mean_rate = trace.iter().map(|d| d.bitrate_gbps as f64).sum::<f64>() / n;
    println!("offered load     {:.1} Erlang", config.load_erlang());
    println!("mean gap         {:.5} (expected {:.5})", span / n, 1.0 / config.lambda);
    println!("mean holding     {mean_hold:.3} (expected {:.3})", 1.0 / config.mu);
    println!("mean bitrate     {mean_rate:.2} Gb/s (expected 25.50)");
    for d in trace.iter().take(5) {
        println!("{d:?}");
    }

    if let Some(path) = out {
        write_trace_csv(&trace, std::fs::File::create(&path)?)?;
        println!("wrote {path}");
    }
    Ok(())
}
