//! Small weighted-graph utilities used by the drivers: Dijkstra, Prim over a
//! metric, and a greedy spanner generator for sparsification inputs.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::cover::FiniteMetric;

/// Undirected weighted graph on `0..n`.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    adj: Vec<Vec<(usize, f64)>>,
    edges: usize,
    weight: f64,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edges: 0,
            weight: 0.0,
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Self {
        let mut g = Graph::new(n);
        for &(a, b, w) in edges {
            g.add_edge(a, b, w);
        }
        g
    }

    pub fn add_edge(&mut self, a: usize, b: usize, w: f64) {
        self.adj[a].push((b, w));
        self.adj[b].push((a, w));
        self.edges += 1;
        self.weight += w;
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn total_weight(&self) -> f64 {
        self.weight
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adj[v]
    }

    /// Shortest-path distances from `s`; unreachable vertices get infinity.
    /// Settling stops once every vertex is at least `limit` away.
    pub fn dijkstra(&self, s: usize, limit: f64) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.len()];
        dist[s] = 0.0;
        let mut heap = BinaryHeap::from([Item(0.0, s)]);
        while let Some(Item(d, v)) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            if d > limit {
                break;
            }
            for &(w, c) in &self.adj[v] {
                let nd = d + c;
                if nd < dist[w] {
                    dist[w] = nd;
                    heap.push(Item(nd, w));
                }
            }
        }
        dist
    }
}

#[derive(PartialEq)]
struct Item(f64, usize);

impl Eq for Item {}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact minimum spanning tree of a metric in `O(n^2)` distance evaluations,
/// as `(parent, child, weight)` edges in insertion order.
pub fn prim(metric: &FiniteMetric) -> Vec<(usize, usize, f64)> {
    let n = metric.len();
    let mut key = vec![f64::INFINITY; n];
    let mut from = vec![0usize; n];
    let mut done = vec![false; n];
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    let mut next = 0;
    for step in 0..n {
        let x = next;
        done[x] = true;
        if step > 0 {
            out.push((from[x], x, key[x]));
        }
        let row = metric.row(x);
        let mut best = f64::INFINITY;
        for y in 0..n {
            if done[y] {
                continue;
            }
            if row[y] < key[y] {
                key[y] = row[y];
                from[y] = x;
            }
            if key[y] < best {
                best = key[y];
                next = y;
            }
        }
    }
    out
}

/// All pairs of the metric, as a complete graph.
pub fn complete_graph(metric: &FiniteMetric) -> Vec<(usize, usize, f64)> {
    let n = metric.len();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for x in 0..n {
        let row = metric.row(x);
        out.extend((x + 1..n).map(|y| (x, y, row[y])));
    }
    out
}

/// Greedy `t`-spanner: pairs in increasing distance order are kept when the
/// current graph does not already connect them within `t` times their
/// distance.
pub fn greedy_spanner(metric: &FiniteMetric, t: f64) -> Vec<(usize, usize, f64)> {
    let mut pairs = complete_graph(metric);
    pairs.sort_by(|a, b| a.2.total_cmp(&b.2).then((a.0, a.1).cmp(&(b.0, b.1))));
    let mut g = Graph::new(metric.len());
    let mut out = Vec::new();
    for (x, y, d) in pairs {
        if g.dijkstra(x, t * d)[y] > t * d {
            g.add_edge(x, y, d);
            out.push((x, y, d));
        }
    }
    out
}
