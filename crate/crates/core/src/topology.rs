//! Network graph: nodes, bidirectional fiber links and the `.topo` text format.
//!
//! ```text
//! # comment lines start with '#'
//! NODES <N>
//! LINK <id> <nodeA> <nodeB> <length_km>
//! ```
//!
//! Node ids are dense `0..N`, link ids are dense `0..L` (any order in the
//! file), lengths are positive kilometres. The graph must be connected and
//! may not contain self-loops or parallel links.

use std::collections::{HashSet, VecDeque};
use std::fmt::{self, Write as _};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense node index in `0..N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

/// Dense link index in `0..L`; also the index of the link's spectrum grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinkId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for LinkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Link {
    pub id: LinkId,
    pub a: NodeId,
    pub b: NodeId,
    pub length_km: f64,
}

impl Link {
    /// The endpoint opposite to `node`, if `node` is an endpoint at all.
    pub fn other(&self, node: NodeId) -> Option<NodeId> {
        if node == self.a {
            Some(self.b)
        } else if node == self.b {
            Some(self.a)
        } else {
            None
        }
    }

    pub fn connects(&self, x: NodeId, y: NodeId) -> bool {
        (self.a == x && self.b == y) || (self.a == y && self.b == x)
    }
}

#[derive(Debug, Error)]
pub enum TopologyError {
    #[error("failed to read topology file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid topology: {0}")]
    Invalid(String),
}

/// Immutable, validated network graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    name: String,
    num_nodes: usize,
    links: Vec<Link>,
    max_link_length_km: f64,
    /// Per node: incident `(neighbor, link)` pairs ordered by link id.
    adjacency: Vec<Vec<(NodeId, LinkId)>>,
}

impl Topology {
    /// Builds and validates a topology. `links` must carry ids `0..links.len()`
    /// in any order.
    pub fn new(
        name: impl Into<String>,
        num_nodes: usize,
        mut links: Vec<Link>,
    ) -> Result<Self, TopologyError> {
        if num_nodes < 2 {
            return Err(TopologyError::Invalid(format!(
                "need at least 2 nodes, got {num_nodes}"
            )));
        }
        links.sort_by_key(|l| l.id);
        let mut pairs = HashSet::new();
        for (i, link) in links.iter().enumerate() {
            if link.id.0 != i {
                return Err(TopologyError::Invalid(format!(
                    "link ids must be unique and dense 0..{}, found gap or duplicate at id {}",
                    links.len(),
                    link.id
                )));
            }
            if link.a.0 >= num_nodes || link.b.0 >= num_nodes {
                return Err(TopologyError::Invalid(format!(
                    "link {} references a node outside 0..{num_nodes}",
                    link.id
                )));
            }
            if link.a == link.b {
                return Err(TopologyError::Invalid(format!(
                    "link {} is a self-loop on node {}",
                    link.id, link.a
                )));
            }
            if !(link.length_km.is_finite() && link.length_km > 0.0) {
                return Err(TopologyError::Invalid(format!(
                    "link {} has non-positive length {}",
                    link.id, link.length_km
                )));
            }
            let key = (link.a.min(link.b), link.a.max(link.b));
            if !pairs.insert(key) {
                return Err(TopologyError::Invalid(format!(
                    "duplicate link between nodes {} and {}",
                    key.0, key.1
                )));
            }
        }

        let max_link_length_km = links.iter().map(|l| l.length_km).fold(0.0, f64::max);
        let mut topo = Topology {
            name: name.into(),
            num_nodes,
            links,
            max_link_length_km,
            adjacency: Vec::new(),
        };
        topo.rebuild_adjacency();
        if !topo.is_connected() {
            return Err(TopologyError::Invalid("graph is not connected".into()));
        }
        Ok(topo)
    }

    fn rebuild_adjacency(&mut self) {
        let mut adjacency = vec![Vec::new(); self.num_nodes];
        for link in &self.links {
            adjacency[link.a.0].push((link.b, link.id));
            adjacency[link.b.0].push((link.a, link.id));
        }
        self.adjacency = adjacency;
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.num_nodes];
        let mut queue = VecDeque::from([NodeId(0)]);
        seen[0] = true;
        let mut count = 1;
        while let Some(node) = queue.pop_front() {
            for &(next, _) in &self.adjacency[node.0] {
                if !seen[next.0] {
                    seen[next.0] = true;
                    count += 1;
                    queue.push_back(next);
                }
            }
        }
        count == self.num_nodes
    }

    /// Parses the `.topo` text format. `name` labels the result.
    pub fn parse(name: impl Into<String>, text: &str) -> Result<Self, TopologyError> {
        let mut num_nodes = None;
        let mut links = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perr = |msg: String| TopologyError::Parse { line: line_no, msg };
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields[0] {
                "NODES" => {
                    if num_nodes.is_some() {
                        return Err(perr("NODES declared twice".into()));
                    }
                    if fields.len() != 2 {
                        return Err(perr("expected `NODES <N>`".into()));
                    }
                    let n = fields[1]
                        .parse::<usize>()
                        .map_err(|e| perr(format!("bad node count {:?}: {e}", fields[1])))?;
                    num_nodes = Some(n);
                }
                "LINK" => {
                    if fields.len() != 5 {
                        return Err(perr(
                            "expected `LINK <id> <nodeA> <nodeB> <length_km>`".into(),
                        ));
                    }
                    let int = |s: &str, what: &str| {
                        s.parse::<usize>()
                            .map_err(|e| perr(format!("bad {what} {s:?}: {e}")))
                    };
                    let length_km = fields[4]
                        .parse::<f64>()
                        .map_err(|e| perr(format!("bad length {:?}: {e}", fields[4])))?;
                    links.push(Link {
                        id: LinkId(int(fields[1], "link id")?),
                        a: NodeId(int(fields[2], "node id")?),
                        b: NodeId(int(fields[3], "node id")?),
                        length_km,
                    });
                }
                other => return Err(perr(format!("unknown directive {other:?}"))),
            }
        }
        let num_nodes = num_nodes.ok_or(TopologyError::Parse {
            line: 0,
            msg: "missing NODES line".into(),
        })?;
        Topology::new(name, num_nodes, links)
    }

    /// Loads a `.topo` file; the topology is named after the file stem.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, TopologyError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| TopologyError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "topology".into());
        Topology::parse(name, &text)
    }

    /// Serializes back to the `.topo` format (comments are not preserved).
    pub fn to_topo_string(&self) -> String {
        let mut out = format!("NODES {}\n", self.num_nodes);
        for l in &self.links {
            writeln!(out, "LINK {} {} {} {}", l.id, l.a, l.b, l.length_km).unwrap();
        }
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_links(&self) -> usize {
        self.links.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.num_nodes).map(NodeId)
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn link(&self, id: LinkId) -> &Link {
        &self.links[id.0]
    }

    pub fn max_link_length_km(&self) -> f64 {
        self.max_link_length_km
    }

    /// Link length divided by the longest link in the topology, in (0, 1].
    pub fn normalized_length(&self, id: LinkId) -> f64 {
        self.links[id.0].length_km / self.max_link_length_km
    }

    /// Links touching `node`, ordered by link id.
    pub fn incident_links(&self, node: NodeId) -> impl Iterator<Item = &Link> + '_ {
        self.adjacency[node.0].iter().map(|&(_, l)| &self.links[l.0])
    }

    /// `(neighbor, link)` pairs for `node`, ordered by link id.
    pub fn neighbors(&self, node: NodeId) -> &[(NodeId, LinkId)] {
        &self.adjacency[node.0]
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.adjacency[node.0].len()
    }

    /// The link joining `x` and `y`, if any.
    pub fn link_between(&self, x: NodeId, y: NodeId) -> Option<LinkId> {
        self.adjacency
            .get(x.0)?
            .iter()
            .find(|&&(n, _)| n == y)
            .map(|&(_, l)| l)
    }
}
