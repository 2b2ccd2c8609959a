//! Two-hop routing on tree metrics in the fixed-port model.
//!
//! Every vertex stores, for each centroid above it in the `k = 2` recursion
//! tree, the port leading to that centroid; its address lists the same
//! centroids with the port each centroid uses to reach it. A packet for `v`
//! leaving `u` goes to the deepest centroid shared by both lists, which
//! forwards it straight to `v`. Vertices sharing a base node route through a
//! small local table instead.
//!
//! [`decide`] sees only the local table and the header.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cover::{FiniteMetric, MetricNavigator, TreeCover};
use crate::spanner::{build, Navigator, NodeKind};
use crate::tree::{Vertex, WeightedTree};
use crate::{Error, Result};

/// A port number; real ports are `1..=degree`, 0 means "this vertex".
pub type Port = u32;

/// `(recursion node id, port)` pairs ordered from the root down.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Address {
    pub vertex: Vertex,
    pub entries: Vec<(u32, Port)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoutingTable {
    pub vertex: Vertex,
    /// Port from this vertex towards each centroid above it.
    pub up: Vec<(u32, Port)>,
    /// Vertices sharing this vertex's base node with the first-hop port.
    pub local: Vec<(Vertex, Port)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub target: Address,
    /// Cover tree chosen by the source, for cover routing.
    pub tree: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Decision {
    Deliver,
    Forward(Port),
    Drop(&'static str),
}

/// Routing decision at one vertex, with the number of entry comparisons
/// spent. Pure in `(table, header)`.
pub fn decide(table: &RoutingTable, header: &Header) -> (Decision, usize) {
    let target = &header.target;
    if target.vertex == table.vertex {
        return (Decision::Deliver, 0);
    }
    if let Some(&(_, port)) = table.local.iter().find(|(v, _)| *v == target.vertex) {
        return (Decision::Forward(port), 0);
    }
    // largest j with up[j] and entries[j] naming the same node; the two lists
    // agree on a prefix, so the predicate is monotone
    let (up, down) = (&table.up, &target.entries);
    let len = up.len().min(down.len());
    let (mut lo, mut hi) = (0usize, len);
    let mut comparisons = 0;
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        comparisons += 1;
        if up[mid - 1].0 == down[mid - 1].0 {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    if lo == 0 {
        return (Decision::Drop("no common centroid in header"), comparisons);
    }
    let j = lo - 1;
    let decision = if up[j].1 == 0 {
        Decision::Forward(down[j].1)
    } else {
        Decision::Forward(up[j].1)
    };
    (decision, comparisons)
}

/// Ports of the spanner graph: a seeded random bijection onto `1..=deg`.
#[derive(Debug, Clone)]
pub struct PortedGraph {
    /// `by_port[v][p - 1]` is the neighbour behind port `p`.
    by_port: Vec<Vec<Vertex>>,
    port_of: Vec<HashMap<Vertex, Port>>,
}

impl PortedGraph {
    fn new(nav: &Navigator, rng: &mut ChaCha8Rng) -> Self {
        let n = nav.tree().len();
        let sp = nav.spanner();
        let mut by_port = Vec::with_capacity(n);
        let mut port_of = Vec::with_capacity(n);
        for v in 0..n {
            let mut nbrs: Vec<Vertex> = sp
                .incident(v)
                .iter()
                .map(|&id| {
                    let e = &sp.edges()[id];
                    if e.u == v {
                        e.v
                    } else {
                        e.u
                    }
                })
                .collect();
            nbrs.shuffle(rng);
            port_of.push(nbrs.iter().enumerate().map(|(i, &w)| (w, i as Port + 1)).collect());
            by_port.push(nbrs);
        }
        PortedGraph { by_port, port_of }
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.by_port[v].len()
    }

    pub fn neighbor(&self, v: Vertex, port: Port) -> Option<Vertex> {
        (port >= 1).then(|| self.by_port[v].get(port as usize - 1).copied()).flatten()
    }

    pub fn port(&self, v: Vertex, to: Vertex) -> Option<Port> {
        self.port_of[v].get(&to).copied()
    }
}

/// A delivered (or dropped) packet's path.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RouteTrace {
    pub vertices: Vec<Vertex>,
    pub weight: f64,
    pub delivered: bool,
    pub comparisons: usize,
}

impl RouteTrace {
    pub fn hops(&self) -> usize {
        self.vertices.len() - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SizeAudit {
    /// Largest per-vertex count of centroid entries plus local entries.
    pub max_entries: usize,
    /// Largest per-vertex address plus table size in bits.
    pub max_bits: usize,
}

fn bits(count: usize) -> usize {
    (usize::BITS - count.saturating_sub(1).leading_zeros()) as usize
}

#[derive(Debug, Clone)]
pub struct RoutingScheme {
    nav: Navigator,
    ports: PortedGraph,
    addresses: Vec<Address>,
    tables: Vec<RoutingTable>,
}

impl RoutingScheme {
    /// Builds the 2-hop spanner of `tree` and derives ports, addresses and
    /// tables. Every vertex of `tree` must be required.
    pub fn new(tree: &WeightedTree, seed: u64) -> Result<Self> {
        if tree.required_count() != tree.len() {
            return Err(Error::input("routing needs every vertex required"));
        }
        let nav = build(tree, 2)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ports = PortedGraph::new(&nav, &mut rng);
        let rt = nav.recursion_tree();
        let n = tree.len();
        let mut addresses = Vec::with_capacity(n);
        let mut tables = Vec::with_capacity(n);
        for u in 0..n {
            let node = rt.eta(u).ok_or_else(|| Error::internal(format!("vertex {u} has no node")))?;
            let mut down = Vec::new();
            let mut up = Vec::new();
            let mut local = Vec::new();
            for a in rt.path_from_root(node) {
                match &rt.node(a).kind {
                    NodeKind::Regular { vertex } => {
                        let c = *vertex;
                        let (pd, pu) = if c == u {
                            (0, 0)
                        } else {
                            let miss = || Error::internal(format!("centroid {c} not adjacent to {u}"));
                            (ports.port(c, u).ok_or_else(miss)?, ports.port(u, c).ok_or_else(miss)?)
                        };
                        down.push((a as u32, pd));
                        up.push((a as u32, pu));
                    }
                    NodeKind::Base { vertices, .. } => {
                        for &v in vertices.iter().filter(|&&v| v != u) {
                            let path = nav.find_path(u, v)?;
                            let hop = path.vertices[1];
                            let p = ports
                                .port(u, hop)
                                .ok_or_else(|| Error::internal("base hop is not an edge"))?;
                            local.push((v, p));
                        }
                    }
                    NodeKind::Composite { .. } => {
                        return Err(Error::internal("composite node in a k = 2 recursion tree"))
                    }
                }
            }
            addresses.push(Address {
                vertex: u,
                entries: down,
            });
            tables.push(RoutingTable { vertex: u, up, local });
        }
        Ok(RoutingScheme {
            nav,
            ports,
            addresses,
            tables,
        })
    }

    pub fn navigator(&self) -> &Navigator {
        &self.nav
    }

    pub fn ports(&self) -> &PortedGraph {
        &self.ports
    }

    pub fn address(&self, v: Vertex) -> &Address {
        &self.addresses[v]
    }

    pub fn table(&self, v: Vertex) -> &RoutingTable {
        &self.tables[v]
    }

    /// Simulates delivery of a packet addressed to `header.target` starting
    /// at `u`. Gives up after `limit` hops.
    pub fn simulate(&self, u: Vertex, header: &Header, limit: usize) -> Result<RouteTrace> {
        self.nav.tree().check(u)?;
        let mut at = u;
        let mut trace = RouteTrace {
            vertices: vec![u],
            weight: 0.0,
            delivered: false,
            comparisons: 0,
        };
        for _ in 0..=limit {
            let (d, c) = decide(&self.tables[at], header);
            trace.comparisons += c;
            match d {
                Decision::Deliver => {
                    trace.delivered = true;
                    return Ok(trace);
                }
                Decision::Drop(_) => return Ok(trace),
                Decision::Forward(port) => {
                    let next = self
                        .ports
                        .neighbor(at, port)
                        .ok_or_else(|| Error::internal(format!("vertex {at} has no port {port}")))?;
                    trace.weight += self.nav.spanner().edge(at, next).expect("ported edge").weight;
                    trace.vertices.push(next);
                    at = next;
                }
            }
        }
        Ok(trace)
    }

    /// Routes from `u` to `v` using `v`'s address.
    pub fn route(&self, u: Vertex, v: Vertex) -> Result<RouteTrace> {
        self.nav.tree().check(v)?;
        let header = Header {
            target: self.addresses[v].clone(),
            tree: None,
        };
        self.simulate(u, &header, 2)
    }

    pub fn audit(&self) -> SizeAudit {
        let n = self.nav.tree().len();
        let node_bits = bits(self.nav.recursion_tree().len());
        let port_bits = (0..n).map(|v| bits(self.ports.degree(v) + 1)).max().unwrap_or(0);
        let vertex_bits = bits(n);
        let mut audit = SizeAudit {
            max_entries: 0,
            max_bits: 0,
        };
        for v in 0..n {
            let t = &self.tables[v];
            let a = &self.addresses[v];
            audit.max_entries = audit.max_entries.max(t.up.len() + t.local.len());
            let b = (t.up.len() + a.entries.len()) * (node_bits + port_bits)
                + t.local.len() * (vertex_bits + port_bits)
                + 2 * vertex_bits;
            audit.max_bits = audit.max_bits.max(b);
        }
        audit
    }
}

/// Routing through a Ramsey cover: the source picks its own tree, records it
/// in the header, and the packet follows that tree's scheme.
#[derive(Debug, Clone)]
pub struct CoverRouting {
    nav: MetricNavigator,
    schemes: Vec<RoutingScheme>,
}

/// A cover route over union-spanner ids.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverTrace {
    pub tree: usize,
    pub vertices: Vec<usize>,
    pub weight: f64,
    pub delivered: bool,
}

impl CoverRouting {
    pub fn new(metric: &FiniteMetric, cover: &TreeCover, seed: u64) -> Result<Self> {
        if cover.ramsey().is_none() {
            return Err(Error::input("cover routing needs a Ramsey cover"));
        }
        for (i, t) in cover.trees().iter().enumerate() {
            if t.required_count() != t.len() {
                return Err(Error::input(format!("cover tree {i} has Steiner vertices")));
            }
        }
        let nav = MetricNavigator::new(metric, cover, 2)?;
        let schemes = cover
            .trees()
            .iter()
            .enumerate()
            .map(|(i, t)| RoutingScheme::new(t, seed.wrapping_add(i as u64)))
            .collect::<Result<Vec<_>>>()?;
        Ok(CoverRouting { nav, schemes })
    }

    pub fn schemes(&self) -> &[RoutingScheme] {
        &self.schemes
    }

    pub fn route(&self, u: usize, v: usize) -> Result<CoverTrace> {
        let metric = self.nav.metric();
        metric.check(u)?;
        metric.check(v)?;
        let i = self.nav.cover().ramsey().expect("checked at build")[u];
        let t = &self.nav.cover().trees()[i];
        let (a, b) = (t.vertex(u as u64).unwrap(), t.vertex(v as u64).unwrap());
        let scheme = &self.schemes[i];
        let header = Header {
            target: scheme.address(b).clone(),
            tree: Some(i),
        };
        let tr = scheme.simulate(a, &header, 2)?;
        Ok(CoverTrace {
            tree: i,
            vertices: tr.vertices.iter().map(|&x| self.nav.global_id(i, x)).collect(),
            weight: tr.weight,
            delivered: tr.delivered,
        })
    }
}
