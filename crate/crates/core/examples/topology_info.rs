//! Loads a bundled topology and prints node degrees, normalized link
//! lengths and, for every node pair, the length-shortest path with the
//! modulation format it allows.
//!
//! ```bash
//! cargo run -p eonsim --example topology_info -- nsfnet
//! ```

use eonsim::rmsa::select_modulation;
use eonsim::routing::length_weights;
use eonsim::{shortest_path, Topology};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "nsfnet".into());
    let topology = Topology::load(format!("{}/data/{name}.topo", env!("CARGO_MANIFEST_DIR")))?;
    println!(
        "{}: {} nodes, {} links, longest link {} km",
        topology.name(),
        topology.num_nodes(),
        topology.num_links(),
        topology.max_link_length_km()
    );

    for node in topology.nodes() {
        let links: Vec<String> = topology.incident_links(node).map(|l| l.id.to_string()).collect();
        println!("node {node:>2}: degree {} links [{}]", topology.degree(node), links.join(", "));
    }

    println!("\nlink  nodes     km  normalized");
    for link in topology.links() {
        println!(
            "{:>4}  {:>2}-{:<2} {:>6}  {:.3}",
            link.id,
            link.a,
            link.b,
            link.length_km,
            topology.normalized_length(link.id)
        );
    }

    let weights = length_weights(&topology);
    let mut histogram = std::collections::BTreeMap::new();
    for s in topology.nodes() {
        for d in topology.nodes().filter(|&d| d > s) {
            let path = shortest_path(&topology, &weights, s, d)?.expect("connected");
            let format = select_modulation(path.total_length_km)
                .map_or("out of reach".to_string(), |m| m.to_string());
            *histogram.entry(format).or_insert(0) += 1;
        }
    }
    println!("\nmodulation on length-shortest paths (unordered pairs):");
    for (format, count) in histogram {
        println!("  {format:<12} {count}");
    }
    Ok(())
}
