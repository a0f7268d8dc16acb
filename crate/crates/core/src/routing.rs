//! Single-path minimum-cost routing.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::topology::{LinkId, NodeId, Topology};

#[derive(Debug, Error, PartialEq)]
pub enum RoutingError {
    #[error("source and destination are both node {0}")]
    SameEndpoints(NodeId),
    #[error("node {0} is not in the topology")]
    UnknownNode(NodeId),
    #[error("expected {expected} link weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("link {link} has invalid weight {weight}")]
    BadWeight { link: LinkId, weight: f64 },
}

/// A simple path with its physical length and routing cost.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    pub nodes: Vec<NodeId>,
    pub links: Vec<LinkId>,
    pub total_length_km: f64,
    pub total_cost: f64,
}

impl Path {
    pub fn source(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn destination(&self) -> NodeId {
        *self.nodes.last().unwrap()
    }

    pub fn hops(&self) -> usize {
        self.links.len()
    }

    /// Node sequence as `a-b-c`.
    pub fn node_string(&self) -> String {
        self.nodes
            .iter()
            .map(|n| n.0.to_string())
            .collect::<Vec<_>>()
            .join("-")
    }
}

#[derive(Clone, Copy, PartialEq)]
struct State {
    cost: f64,
    node: usize,
}

impl Eq for State {}

impl Ord for State {
    // Reversed so the max-heap pops the lowest (cost, node) first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra over per-link `weights` (indexed by link id).
///
/// Ties between equal tentative costs pop the lower node index first; among
/// equal-cost predecessors the lower predecessor index wins. Weights must be
/// finite and non-negative.
pub fn shortest_path(
    topology: &Topology,
    weights: &[f64],
    src: NodeId,
    dst: NodeId,
) -> Result<Option<Path>, RoutingError> {
    let n = topology.num_nodes();
    for node in [src, dst] {
        if node.0 >= n {
            return Err(RoutingError::UnknownNode(node));
        }
    }
    if src == dst {
        return Err(RoutingError::SameEndpoints(src));
    }
    if weights.len() != topology.num_links() {
        return Err(RoutingError::WeightCount {
            expected: topology.num_links(),
            got: weights.len(),
        });
    }
    if let Some((i, &w)) = weights
        .iter()
        .enumerate()
        .find(|(_, w)| !(w.is_finite() && **w >= 0.0))
    {
        return Err(RoutingError::BadWeight {
            link: LinkId(i),
            weight: w,
        });
    }

    let mut dist = vec![f64::INFINITY; n];
    let mut pred: Vec<Option<(NodeId, LinkId)>> = vec![None; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[src.0] = 0.0;
    heap.push(State {
        cost: 0.0,
        node: src.0,
    });

    while let Some(State { cost, node }) = heap.pop() {
        if settled[node] || cost > dist[node] {
            continue;
        }
        settled[node] = true;
        if node == dst.0 {
            break;
        }
        for &(next, link) in topology.neighbors(NodeId(node)) {
            if settled[next.0] {
                continue;
            }
            let candidate = cost + weights[link.0];
            let better = candidate < dist[next.0]
                || (candidate == dist[next.0]
                    && pred[next.0].is_some_and(|(p, _)| node < p.0));
            if better {
                let improved = candidate < dist[next.0];
                dist[next.0] = candidate;
                pred[next.0] = Some((NodeId(node), link));
                if improved {
                    heap.push(State {
                        cost: candidate,
                        node: next.0,
                    });
                }
            }
        }
    }

    if !settled[dst.0] {
        return Ok(None);
    }
    let mut nodes = vec![dst];
    let mut links = Vec::new();
    let mut cur = dst;
    while let Some((prev, link)) = pred[cur.0] {
        nodes.push(prev);
        links.push(link);
        cur = prev;
    }
    nodes.reverse();
    links.reverse();
    let total_length_km = links.iter().map(|&l| topology.link(l).length_km).sum();
    Ok(Some(Path {
        nodes,
        links,
        total_length_km,
        total_cost: dist[dst.0],
    }))
}

/// Weights equal to the physical link length, for length-shortest routing.
pub fn length_weights(topology: &Topology) -> Vec<f64> {
    topology.links().iter().map(|l| l.length_km).collect()
}
