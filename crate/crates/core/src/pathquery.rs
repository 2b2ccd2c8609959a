//! `O(k)` path queries over a built [`Navigator`], edge annotations and
//! semigroup products along the returned paths.

use std::collections::VecDeque;

use serde::Serialize;

use crate::payload::PathValue;
use crate::spanner::{build_edges, Navigator, NodeKind};
use crate::tree::Vertex;
use crate::{Error, Result};

/// A path of spanner edges between two vertices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpannerPath {
    pub vertices: Vec<Vertex>,
    pub weight: f64,
    /// Number of recursion trees the query descended into.
    pub depth: usize,
    /// Position of a vertex strictly inside the path whose two incident path
    /// edges come from the innermost instance the query reached: the centroid
    /// of a regular node, or the second vertex of a base-graph path of two or
    /// more hops.
    pub core: Option<usize>,
}

impl SpannerPath {
    pub fn hops(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }
}

struct Trace {
    depth: usize,
    center: Option<Vertex>,
}

fn push_collapsed(out: &mut Vec<Vertex>, v: Vertex) {
    if out.last() != Some(&v) {
        out.push(v);
    }
}

impl Navigator {
    /// A spanner path of at most `k` hops whose weight is the tree distance.
    /// Both endpoints must be required vertices.
    pub fn find_path(&self, u: Vertex, v: Vertex) -> Result<SpannerPath> {
        for x in [u, v] {
            self.tree.check(x)?;
            if !self.tree.is_required(x) {
                return Err(Error::input(format!(
                    "vertex {} is a Steiner vertex",
                    self.tree.label(x)
                )));
            }
        }
        let mut trace = Trace {
            depth: 0,
            center: None,
        };
        let mut vertices = Vec::with_capacity(self.k + 1);
        self.walk(0, u, v, 1, &mut trace, &mut vertices)?;
        let mut weight = 0.0;
        for w in vertices.windows(2) {
            let e = self
                .spanner
                .edge(w[0], w[1])
                .ok_or_else(|| Error::internal(format!("no spanner edge ({}, {})", w[0], w[1])))?;
            weight += e.weight;
        }
        let core = trace
            .center
            .and_then(|c| vertices.iter().position(|&x| x == c))
            .filter(|&i| i > 0 && i + 1 < vertices.len());
        Ok(SpannerPath {
            vertices,
            weight,
            depth: trace.depth,
            core,
        })
    }

    fn walk(&self, sid: usize, u: Vertex, v: Vertex, depth: usize, trace: &mut Trace, out: &mut Vec<Vertex>) -> Result<()> {
        trace.depth = trace.depth.max(depth);
        if u == v {
            push_collapsed(out, u);
            return Ok(());
        }
        let rt = &self.structures[sid];
        let lookup = |x: Vertex| {
            rt.eta(x)
                .ok_or_else(|| Error::internal(format!("vertex {x} missing from recursion tree {sid}")))
        };
        let (au, av) = (lookup(u)?, lookup(v)?);
        if au == av {
            if let NodeKind::Base { vertices, edges } = &rt.node(au).kind {
                let path = bfs(vertices, edges, u, v)?;
                if path.len() >= 3 {
                    trace.center = Some(path[1]);
                }
                for x in path {
                    push_collapsed(out, x);
                }
                return Ok(());
            }
        }
        let beta = rt.lca_node(au, av)?;
        match &rt.node(beta).kind {
            NodeKind::Regular { vertex } => {
                trace.center = Some(*vertex);
                push_collapsed(out, u);
                push_collapsed(out, *vertex);
                push_collapsed(out, v);
                Ok(())
            }
            NodeKind::Composite { next, contracted } => {
                let side = |a: usize, x: Vertex| match contracted.cut_node(x) {
                    Some(c) if a == beta => Ok(c),
                    _ => rt
                        .node(rt.child_towards(beta, a))
                        .rep
                        .ok_or_else(|| Error::internal("child of a composite node has no representative")),
                };
                let (ta, tb) = (side(au, u)?, side(av, v)?);
                let x = if au == beta { u } else { contracted.border_towards(ta, tb) };
                let y = if av == beta { v } else { contracted.border_towards(tb, ta) };
                push_collapsed(out, u);
                match next {
                    None => {
                        push_collapsed(out, x);
                        push_collapsed(out, y);
                    }
                    Some(next) => self.walk(*next, x, y, depth + 1, trace, out)?,
                }
                push_collapsed(out, v);
                Ok(())
            }
            NodeKind::Base { .. } => Err(Error::internal("base node above two distinct nodes")),
        }
    }
}

/// Fewest-hop path inside a small base graph.
fn bfs(vertices: &[Vertex], edges: &[(Vertex, Vertex)], u: Vertex, v: Vertex) -> Result<Vec<Vertex>> {
    let pos = |x: Vertex| vertices.iter().position(|&y| y == x);
    let (s, t) = match (pos(u), pos(v)) {
        (Some(s), Some(t)) => (s, t),
        _ => return Err(Error::internal("endpoint missing from base node")),
    };
    let n = vertices.len();
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        let (a, b) = (pos(a).unwrap(), pos(b).unwrap());
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut prev = vec![usize::MAX; n];
    prev[s] = s;
    let mut queue = VecDeque::from([s]);
    while let Some(a) = queue.pop_front() {
        if a == t {
            break;
        }
        for &b in &adj[a] {
            if prev[b] == usize::MAX {
                prev[b] = a;
                queue.push_back(b);
            }
        }
    }
    if prev[t] == usize::MAX {
        return Err(Error::internal("base graph is disconnected"));
    }
    let mut path = vec![vertices[t]];
    let mut a = t;
    while a != s {
        a = prev[a];
        path.push(vertices[a]);
    }
    path.reverse();
    Ok(path)
}

/// Per-edge values folded along each spanner edge's tree path, aligned with
/// [`crate::spanner::HopSpanner::edges`] and oriented from `u` to `v`.
#[derive(Debug, Clone)]
pub struct Annotations<P> {
    values: Vec<P>,
}

impl<P: PathValue> Annotations<P> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value of spanner edge `id` walked `from -> to`.
    pub fn value(&self, nav: &Navigator, id: usize, from: Vertex) -> P {
        let e = &nav.spanner.edges()[id];
        if e.u == from {
            self.values[id].clone()
        } else {
            self.values[id].reverse()
        }
    }
}

/// Result of [`Navigator::product`].
#[derive(Debug, Clone, PartialEq)]
pub struct Product<P> {
    /// `None` for `u = v` when no identity was supplied.
    pub value: Option<P>,
    pub ops: usize,
    pub path: SpannerPath,
}

impl Navigator {
    /// Annotates every spanner edge with the fold of per-tree-edge values.
    /// `value_of(child, parent)` gives the value of the tree edge walked from
    /// `child` to `parent`.
    pub fn annotate<P: PathValue>(&self, mut value_of: impl FnMut(Vertex, Vertex) -> Option<P>) -> Result<Annotations<P>> {
        let t = &self.tree;
        let mut up = Vec::with_capacity(t.len());
        for v in 0..t.len() {
            match t.parent(v) {
                None => up.push(None),
                Some(p) => match value_of(v, p) {
                    Some(val) => up.push(Some(val)),
                    None => {
                        return Err(Error::input(format!(
                            "missing value for tree edge ({}, {})",
                            t.label(v),
                            t.label(p)
                        )))
                    }
                },
            }
        }
        let raw = build_edges(t, self.k, up)?;
        if raw.len() != self.spanner.len() {
            return Err(Error::internal("annotated rebuild produced a different edge count"));
        }
        let mut values: Vec<Option<P>> = vec![None; raw.len()];
        for (a, b, val) in raw {
            let id = self
                .spanner
                .edge_id(a, b)
                .ok_or_else(|| Error::internal("annotated rebuild produced an unknown edge"))?;
            let e = &self.spanner.edges()[id];
            values[id] = Some(if e.u == a { val } else { val.reverse() });
        }
        Ok(Annotations {
            values: values.into_iter().map(|v| v.expect("every edge annotated")).collect(),
        })
    }

    /// Left-to-right fold of the annotations along the spanner path from `u`
    /// to `v`, counting binary operations.
    pub fn product<P: PathValue>(&self, ann: &Annotations<P>, u: Vertex, v: Vertex, identity: Option<P>) -> Result<Product<P>> {
        let path = self.find_path(u, v)?;
        let mut acc: Option<P> = None;
        let mut ops = 0;
        for w in path.vertices.windows(2) {
            let id = self.spanner.edge_id(w[0], w[1]).expect("path edges exist");
            let val = ann.value(self, id, w[0]);
            acc = Some(match acc {
                None => val,
                Some(a) => {
                    ops += 1;
                    a.concat(&val)
                }
            });
        }
        Ok(Product {
            value: acc.or(identity),
            ops,
            path,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::payload::{Concat, Directed, Max};
    use crate::spanner::build;
    use crate::tree::WeightedTree;

    fn p5() -> WeightedTree {
        WeightedTree::from_edges(1, &[(1, 2, 1.0), (2, 3, 2.0), (3, 4, 1.0), (4, 5, 3.0)], None).unwrap()
    }

    fn labels(t: &WeightedTree, p: &SpannerPath) -> Vec<u64> {
        p.vertices.iter().map(|&v| t.label(v)).collect()
    }

    #[test]
    fn p5_paths() {
        let t = p5();
        let nav = build(&t, 2).unwrap();
        let id = |l| t.vertex(l).unwrap();
        let p = nav.find_path(id(1), id(5)).unwrap();
        assert_eq!(labels(&t, &p), vec![1, 3, 5]);
        assert_eq!(p.weight, 7.0);
        let p = nav.find_path(id(2), id(4)).unwrap();
        assert_eq!(labels(&t, &p), vec![2, 3, 4]);
        assert_eq!(p.weight, 3.0);
        let p = nav.find_path(id(4), id(4)).unwrap();
        assert_eq!(labels(&t, &p), vec![4]);
        assert_eq!(p.hops(), 0);
        let p = nav.find_path(id(3), id(5)).unwrap();
        assert_eq!(labels(&t, &p), vec![3, 5]);
        assert!(nav.find_path(0, 99).is_err());
    }

    #[test]
    fn string_annotation_is_directional() {
        // edge 1-2 carries "a", edge 2-3 carries "b"; rooted at 2 so the base
        // case adds the shortcut (1, 3)
        let t = WeightedTree::from_edges(2, &[(2, 1, 1.0), (2, 3, 1.0)], None).unwrap();
        let nav = build(&t, 2).unwrap();
        let name = |c: Vertex| if t.label(c) == 1 { "a" } else { "b" };
        let ann = nav
            .annotate(|c, _| {
                // walked child -> parent: "a" for 1 -> 2, "b" for 3 -> 2
                Some(Directed::edge(Concat(name(c).to_string())))
            })
            .unwrap();
        let (one, three) = (t.vertex(1).unwrap(), t.vertex(3).unwrap());
        let id = nav.spanner().edge_id(one, three).unwrap();
        let fwd = ann.value(&nav, id, one);
        assert_eq!(fwd.forward, Concat("ab".into()));
        assert_eq!(fwd.backward, Concat("ba".into()));

        let prod = nav.product(&ann, one, three, None).unwrap();
        assert_eq!(prod.ops, 0);
        assert_eq!(prod.value.unwrap().forward, Concat("ab".into()));

        let same = nav.product(&ann, one, one, None).unwrap();
        assert_eq!((same.value, same.ops), (None, 0));
    }

    #[test]
    fn max_annotation_and_counter() {
        let t = p5();
        let nav = build(&t, 2).unwrap();
        let ann = nav
            .annotate(|c, _| Some(Directed::edge(Max(t.parent_weight(c)))))
            .unwrap();
        let (one, five) = (t.vertex(1).unwrap(), t.vertex(5).unwrap());
        let prod = nav.product(&ann, one, five, None).unwrap();
        assert_eq!(prod.ops, 1);
        assert_eq!(prod.value.unwrap().forward, Max(3.0));
    }

    #[test]
    fn missing_edge_value_is_an_input_error() {
        let t = p5();
        let nav = build(&t, 3).unwrap();
        let r = nav.annotate(|c, _| if c == 2 { None } else { Some(1.0) });
        assert!(matches!(r, Err(Error::Input(_))));
    }
}
