//! Walks through routing, modulation selection and spectrum assignment for a
//! few hand-made demands on NSFNet, then releases them.
//!
//! ```bash
//! cargo run -p eonsim --example admit_demand
//! ```

use eonsim::{Admission, CostSpec, Demand, Metric, Network, NodeId, Topology};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let topology = Topology::load(concat!(env!("CARGO_MANIFEST_DIR"), "/data/nsfnet.topo"))?;
    let mut network = Network::new(&topology, 180);
    let spec = CostSpec::new(Metric::LLP);

    let demands = [(0, 13, 40), (0, 13, 50), (3, 8, 25), (1, 12, 10)];
    let mut admitted = Vec::new();
    for (id, &(src, dst, rate)) in demands.iter().enumerate() {
        let demand = Demand {
            id: id as u64,
            arrival_time: id as f64,
            source: NodeId(src),
            destination: NodeId(dst),
            bitrate_gbps: rate,
            holding_time: 10.0,
        };
        match network.try_admit(&spec, &demand)? {
            Admission::Admitted(conn) => {
                println!(
                    "demand {id}: {src}->{dst} {rate} Gb/s via {} ({} km, {}), slots {} ({} transceivers)",
                    conn.path.node_string(),
                    conn.path.total_length_km,
                    conn.modulation,
                    conn.slots,
                    conn.transceivers()
                );
                admitted.push(conn);
            }
            Admission::Blocked { reason, .. } => println!("demand {id}: blocked ({reason})"),
        }
    }

    let busiest = topology
        .links()
        .iter()
        .max_by_key(|l| network.grid(l.id).used_slots())
        .unwrap();
    println!(
        "busiest link {} ({}-{}): usage {:.3}",
        busiest.id,
        busiest.a,
        busiest.b,
        network.grid(busiest.id).usage()
    );

    for conn in &admitted {
        network.release(conn)?;
    }
    assert!(network.is_empty());
    println!("all connections released");
    Ok(())
}
