//! End-to-end simulation properties on random and bundled topologies.

use std::path::PathBuf;

use eonsim::sim::{run, SimOptions};
use eonsim::traffic::{generate_trace, TrafficConfig};
use eonsim::{CostSpec, Link, LinkId, Merge, Metric, NodeId, Topology};
use proptest::prelude::*;

fn bundled(name: &str) -> Topology {
    Topology::load(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("data/{name}.topo")))
        .unwrap()
}

fn all_specs() -> Vec<CostSpec> {
    let mut specs = Vec::new();
    for metric in Metric::ALL {
        for merge in Merge::ALL {
            specs.push(CostSpec::new(metric).with_merge(merge));
        }
    }
    specs.push(CostSpec::new(Metric::LLP).literal_llp(true));
    specs
}

fn random_topology() -> impl Strategy<Value = Topology> {
    (3usize..8).prop_flat_map(|n| {
        let tree = prop::collection::vec((any::<prop::sample::Index>(), 100.0f64..3000.0), n - 1);
        let extra = prop::collection::vec((0..n, 0..n, 100.0f64..3000.0), 0..n);
        (Just(n), tree, extra).prop_map(|(n, tree, extra)| {
            let mut edges: Vec<(usize, usize, f64)> = tree
                .iter()
                .enumerate()
                .map(|(i, (idx, len))| (idx.index(i + 1), i + 1, *len))
                .collect();
            for (a, b, len) in extra {
                let dup = edges
                    .iter()
                    .any(|&(x, y, _)| (x == a && y == b) || (x == b && y == a));
                if a != b && !dup {
                    edges.push((a, b, len));
                }
            }
            let links = edges
                .iter()
                .enumerate()
                .map(|(i, &(a, b, len))| Link {
                    id: LinkId(i),
                    a: NodeId(a),
                    b: NodeId(b),
                    length_km: len,
                })
                .collect();
            Topology::new("random", n, links).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn audited_runs_hold_invariants(
        topo in random_topology(),
        spec_idx in 0usize..13,
        seed in any::<u64>(),
        slots in 8usize..40,
        erlang in 1.0f64..60.0,
    ) {
        let spec = all_specs()[spec_idx];
        let trace = generate_trace(&TrafficConfig::new(10.0, 10.0 / erlang, 300, seed), &topo);
        let opts = SimOptions { slots, audit: true, record_outcomes: true, ..Default::default() };
        let out = run(&topo, &spec, &trace, &opts).unwrap();
        let s = out.stats;
        prop_assert_eq!(s.served + s.blocked_total(), 300);
        prop_assert_eq!(out.outcomes.len(), 300);
        prop_assert_eq!(out.connections.len(), s.served);
        let trx: usize = out.connections.iter().map(|c| c.data_slots).sum();
        prop_assert_eq!(trx, s.transceivers_total);
        for c in &out.connections {
            prop_assert!(c.path.total_length_km <= c.modulation.max_reach_km());
            prop_assert!(c.slots.end() <= slots);
        }
        // Same inputs, same outcome log.
        let again = run(&topo, &spec, &trace, &opts).unwrap();
        prop_assert_eq!(again.outcomes, out.outcomes);
    }
}

#[test]
fn trace_is_independent_of_metric() {
    let topo = bundled("nsfnet");
    let cfg = TrafficConfig::new(10.0, 0.04, 1000, 5);
    let reference = generate_trace(&cfg, &topo);
    for spec in all_specs() {
        // Running a metric never perturbs the trace it was given, and a
        // regenerated trace is identical.
        let trace = generate_trace(&cfg, &topo);
        assert_eq!(trace, reference);
        run(&topo, &spec, &trace, &SimOptions::default()).unwrap();
    }
}

#[test]
fn static_metric_routes_ignore_load() {
    // Under LL every admitted demand between a pair takes the same path.
    let topo = bundled("usbackbone");
    let trace = generate_trace(&TrafficConfig::new(10.0, 0.02, 3000, 9), &topo);
    let opts = SimOptions {
        record_outcomes: true,
        ..Default::default()
    };
    let out = run(&topo, &CostSpec::new(Metric::LL), &trace, &opts).unwrap();
    let mut seen = std::collections::HashMap::new();
    for (d, o) in trace.iter().zip(&out.outcomes) {
        let path = o.path_nodes.clone().unwrap();
        let prev = seen.entry((d.source, d.destination)).or_insert(path.clone());
        assert_eq!(*prev, path);
    }
}

#[test]
fn blocking_grows_with_load() {
    let topo = bundled("nsfnet");
    let spec = CostSpec::new(Metric::LL);
    let mut last = -1.0;
    for erlang in [100.0, 300.0, 600.0] {
        let mut total = 0.0;
        for seed in 1..=3 {
            let trace = generate_trace(&TrafficConfig::new(10.0, 10.0 / erlang, 5000, seed), &topo);
            total += run(&topo, &spec, &trace, &SimOptions::default())
                .unwrap()
                .stats
                .blocking_probability();
        }
        assert!(total / 3.0 > last, "load {erlang}");
        last = total / 3.0;
    }
}
