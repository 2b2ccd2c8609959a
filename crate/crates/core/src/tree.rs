//! Rooted edge-weighted trees with required and Steiner vertices, plus the
//! two structural primitives the spanner construction is built from:
//! pruning to the Steiner closure of a vertex set, and cutting a tree into
//! components with few required vertices each.
//!
//! Vertices are stored densely in breadth-first order from the root, so every
//! non-root vertex has a smaller-indexed parent. External labels (the ids
//! used in files) are kept alongside and can be translated either way.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use crate::payload::PathValue;
use crate::{Error, Result};

pub(crate) const NONE: usize = usize::MAX;

/// Dense vertex index into a [`WeightedTree`].
pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedTree {
    labels: Vec<u64>,
    index: HashMap<u64, Vertex>,
    parent: Vec<usize>,
    weight: Vec<f64>,
    children: Vec<Vec<Vertex>>,
    required: Vec<bool>,
    depth: Vec<usize>,
}

/// A walk between two vertices together with its total weight.
#[derive(Debug, Clone, PartialEq)]
pub struct TreePath {
    pub vertices: Vec<Vertex>,
    pub weight: f64,
}

impl WeightedTree {
    /// Builds a tree from labelled edges `(u, v, w)`.
    ///
    /// `required` lists the required labels; `None` makes every vertex
    /// required. Rejects disconnected input, cycles, duplicate edges and
    /// negative or non-finite weights.
    pub fn from_edges(root: u64, edges: &[(u64, u64, f64)], required: Option<&[u64]>) -> Result<Self> {
        let mut adj: HashMap<u64, Vec<(u64, f64)>> = HashMap::new();
        adj.entry(root).or_default();
        let mut seen = HashSet::new();
        for &(u, v, w) in edges {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::input(format!("edge ({u}, {v}) has invalid weight {w}")));
            }
            if u == v {
                return Err(Error::input(format!("self-loop at {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::input(format!("duplicate edge ({u}, {v})")));
            }
            adj.entry(u).or_default().push((v, w));
            adj.entry(v).or_default().push((u, w));
        }
        let n = adj.len();
        if edges.len() + 1 != n {
            return Err(Error::input(format!(
                "{} edges over {} vertices is not a tree",
                edges.len(),
                n
            )));
        }

        let mut labels = Vec::with_capacity(n);
        let mut index = HashMap::with_capacity(n);
        let mut parent = Vec::with_capacity(n);
        let mut weight = Vec::with_capacity(n);
        let mut queue = VecDeque::new();
        index.insert(root, 0);
        labels.push(root);
        parent.push(NONE);
        weight.push(0.0);
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            let ui = index[&u];
            for &(v, w) in &adj[&u] {
                if index.contains_key(&v) {
                    continue;
                }
                index.insert(v, labels.len());
                labels.push(v);
                parent.push(ui);
                weight.push(w);
                queue.push_back(v);
            }
        }
        if labels.len() != n {
            return Err(Error::input("edges do not form a connected tree"));
        }

        let required_flags = match required {
            None => vec![true; n],
            Some(list) => {
                let mut flags = vec![false; n];
                for l in list {
                    let &i = index
                        .get(l)
                        .ok_or_else(|| Error::input(format!("required vertex {l} is not in the tree")))?;
                    flags[i] = true;
                }
                flags
            }
        };
        Ok(Self::assemble(labels, index, parent, weight, required_flags))
    }

    /// Tree from a parent array already in the dense layout (`parent[i] < i`).
    pub(crate) fn from_layout(
        labels: Vec<u64>,
        parent: Vec<usize>,
        weight: Vec<f64>,
        required: Vec<bool>,
    ) -> Self {
        let index = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        Self::assemble(labels, index, parent, weight, required)
    }

    fn assemble(
        labels: Vec<u64>,
        index: HashMap<u64, Vertex>,
        parent: Vec<usize>,
        weight: Vec<f64>,
        required: Vec<bool>,
    ) -> Self {
        let n = labels.len();
        let mut children = vec![Vec::new(); n];
        let mut depth = vec![0; n];
        for v in 1..n {
            let p = parent[v];
            debug_assert!(p < v);
            children[p].push(v);
            depth[v] = depth[p] + 1;
        }
        WeightedTree {
            labels,
            index,
            parent,
            weight,
            children,
            required,
            depth,
        }
    }

    /// Path `0 - 1 - ... - (n-1)` rooted at 0 with the given edge weights.
    pub fn path(weights: &[f64]) -> Result<Self> {
        let edges: Vec<_> = weights
            .iter()
            .enumerate()
            .map(|(i, &w)| (i as u64, i as u64 + 1, w))
            .collect();
        Self::from_edges(0, &edges, None)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn root(&self) -> Vertex {
        0
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        let p = self.parent[v];
        (p != NONE).then_some(p)
    }

    pub(crate) fn parents(&self) -> &[usize] {
        &self.parent
    }

    /// Weight of the edge from `v` to its parent (0 at the root).
    pub fn parent_weight(&self, v: Vertex) -> f64 {
        self.weight[v]
    }

    pub fn children(&self, v: Vertex) -> &[Vertex] {
        &self.children[v]
    }

    pub fn depth(&self, v: Vertex) -> usize {
        self.depth[v]
    }

    pub fn is_required(&self, v: Vertex) -> bool {
        self.required[v]
    }

    pub(crate) fn required_flags(&self) -> &[bool] {
        &self.required
    }

    pub fn required(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.len()).filter(|&v| self.required[v])
    }

    pub fn required_count(&self) -> usize {
        self.required.iter().filter(|&&r| r).count()
    }

    pub fn label(&self, v: Vertex) -> u64 {
        self.labels[v]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn vertex(&self, label: u64) -> Option<Vertex> {
        self.index.get(&label).copied()
    }

    pub(crate) fn check(&self, v: Vertex) -> Result<()> {
        if v < self.len() {
            Ok(())
        } else {
            Err(Error::input(format!("vertex index {v} out of range 0..{}", self.len())))
        }
    }

    /// Tree edges as `(child, parent, weight)`.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex, f64)> + '_ {
        (1..self.len()).map(|v| (v, self.parent[v], self.weight[v]))
    }

    /// Whether `u` and `v` are joined by a tree edge.
    pub fn is_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.parent[u] == v || self.parent[v] == u
    }

    /// Same topology and weights with a different required set.
    pub fn with_required(&self, required: Vec<bool>) -> Self {
        assert_eq!(required.len(), self.len());
        WeightedTree {
            required,
            ..self.clone()
        }
    }

    /// The unique tree path between `u` and `v` and its weight, found by
    /// walking parent links from both ends to their meeting vertex.
    pub fn tree_distance(&self, u: Vertex, v: Vertex) -> Result<(f64, TreePath)> {
        self.check(u)?;
        self.check(v)?;
        let (mut a, mut b) = (u, v);
        let mut up = vec![a];
        let mut down = vec![b];
        let mut wa = 0.0;
        let mut wb = 0.0;
        while self.depth[a] > self.depth[b] {
            wa += self.weight[a];
            a = self.parent[a];
            up.push(a);
        }
        while self.depth[b] > self.depth[a] {
            wb += self.weight[b];
            b = self.parent[b];
            down.push(b);
        }
        while a != b {
            wa += self.weight[a];
            a = self.parent[a];
            up.push(a);
            wb += self.weight[b];
            b = self.parent[b];
            down.push(b);
        }
        down.pop();
        up.extend(down.into_iter().rev());
        let weight = wa + wb;
        Ok((
            weight,
            TreePath {
                vertices: up,
                weight,
            },
        ))
    }

    /// Weighted distance from `src` to every vertex.
    pub fn distances_from(&self, src: Vertex) -> Vec<f64> {
        let n = self.len();
        let mut dist = vec![f64::NAN; n];
        dist[src] = 0.0;
        let mut stack = vec![src];
        while let Some(u) = stack.pop() {
            let du = dist[u];
            if let Some(p) = self.parent(u) {
                if dist[p].is_nan() {
                    dist[p] = du + self.weight[u];
                    stack.push(p);
                }
            }
            for &c in &self.children[u] {
                if dist[c].is_nan() {
                    dist[c] = du + self.weight[c];
                    stack.push(c);
                }
            }
        }
        dist
    }

    /// Steiner closure of `required`: drops Steiner subtrees holding no
    /// required vertex and splices out Steiner vertices with a single
    /// required-bearing child. Kept Steiner vertices branch, so there are at
    /// most `|required| - 1` of them. Output edges weigh the tree distance
    /// between their endpoints; labels are preserved. Returns the pruned tree
    /// and, for each of its vertices, the originating vertex of `self`.
    pub fn prune(&self, required: &[Vertex]) -> Result<(WeightedTree, Vec<Vertex>)> {
        if required.is_empty() {
            return Err(Error::input("prune needs a non-empty required set"));
        }
        let mut flags = vec![false; self.len()];
        for &r in required {
            self.check(r)?;
            flags[r] = true;
        }
        let up: Vec<Option<f64>> = (0..self.len())
            .map(|v| self.parent(v).map(|_| self.weight[v]))
            .collect();
        let pruned = prune_layout(&self.parent, &up, &flags);
        let labels = pruned.origin.iter().map(|&v| self.labels[v]).collect();
        let weights = pruned.up.iter().map(|w| w.unwrap_or(0.0)).collect();
        let req = pruned.origin.iter().map(|&v| flags[v]).collect();
        Ok((
            WeightedTree::from_layout(labels, pruned.parent, weights, req),
            pruned.origin,
        ))
    }

    /// Cut vertices leaving at most `ell` required vertices per component.
    ///
    /// Returns the empty set when the whole tree already qualifies, the
    /// required-weighted centroid when one vertex suffices
    /// (`|R| <= 2 * ell`), and otherwise the bottom-up greedy cut, which has at
    /// most `|R| / (ell + 1)` vertices.
    pub fn decompose(&self, ell: usize) -> Result<Vec<Vertex>> {
        if ell == 0 {
            return Err(Error::input("decompose needs ell >= 1"));
        }
        let mut cut = cut_vertices(&self.parent, &self.required, ell, &self.labels);
        cut.sort_unstable();
        Ok(cut)
    }

    /// Parses the text tree format: `n root`, then `n-1` lines `u v w`, then an
    /// optional `R: id id ...` line. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty tree file"))?;
        let head: Vec<&str> = header.split_whitespace().collect();
        if head.len() != 2 {
            return Err(Error::parse(hl, "expected header `n root`"));
        }
        let n: usize = head[0]
            .parse()
            .map_err(|_| Error::parse(hl, format!("bad vertex count {:?}", head[0])))?;
        let root: u64 = head[1]
            .parse()
            .map_err(|_| Error::parse(hl, format!("bad root {:?}", head[1])))?;
        if n == 0 {
            return Err(Error::parse(hl, "tree must have at least one vertex"));
        }
        let mut edges = Vec::with_capacity(n - 1);
        let mut required: Option<Vec<u64>> = None;
        for (ln, line) in lines {
            if let Some(rest) = line.strip_prefix("R:") {
                if required.is_some() {
                    return Err(Error::parse(ln, "duplicate R: line"));
                }
                let ids = rest
                    .split_whitespace()
                    .map(|t| t.parse::<u64>().map_err(|_| Error::parse(ln, format!("bad id {t:?}"))))
                    .collect::<Result<Vec<_>>>()?;
                required = Some(ids);
                continue;
            }
            if required.is_some() {
                return Err(Error::parse(ln, "edge after R: line"));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(Error::parse(ln, "expected `u v w`"));
            }
            let u = parts[0].parse::<u64>().map_err(|_| Error::parse(ln, "bad vertex id"))?;
            let v = parts[1].parse::<u64>().map_err(|_| Error::parse(ln, "bad vertex id"))?;
            let w = parts[2].parse::<f64>().map_err(|_| Error::parse(ln, "bad weight"))?;
            edges.push((u, v, w));
        }
        if edges.len() != n - 1 {
            return Err(Error::parse(
                hl,
                format!("header declares {n} vertices but {} edges follow", edges.len()),
            ));
        }
        let tree = Self::from_edges(root, &edges, required.as_deref())?;
        if tree.len() != n {
            return Err(Error::parse(hl, format!("header declares {n} vertices, found {}", tree.len())));
        }
        Ok(tree)
    }

    /// Inverse of [`WeightedTree::parse`]. The `R:` line is written only when
    /// some vertex is Steiner.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {}", self.len(), self.labels[0]).unwrap();
        for (v, p, w) in self.edges() {
            writeln!(out, "{} {} {}", self.labels[p], self.labels[v], fmt_weight(w)).unwrap();
        }
        if self.required.iter().any(|r| !r) {
            out.push_str("R:");
            for v in self.required() {
                write!(out, " {}", self.labels[v]).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Formats integral weights without a fractional part.
pub fn fmt_weight(w: f64) -> String {
    if w.fract() == 0.0 && w.abs() < 1e15 {
        format!("{}", w as i64)
    } else {
        format!("{w}")
    }
}

/// Result of [`prune_layout`]: a tree in the dense layout whose vertex `i`
/// came from `origin[i]`, with `up[i]` folding the original path from `i` to
/// its new parent.
pub(crate) struct PrunedLayout<P> {
    pub origin: Vec<usize>,
    pub parent: Vec<usize>,
    pub up: Vec<Option<P>>,
}

/// Steiner closure over a dense layout (`parent[i] < i`, `up[i]` the value of
/// the edge from `i` to its parent).
pub(crate) fn prune_layout<P: PathValue>(
    parent: &[usize],
    up: &[Option<P>],
    required: &[bool],
) -> PrunedLayout<P> {
    let n = parent.len();
    let mut count = vec![0usize; n];
    let mut branches = vec![0usize; n];
    for v in (0..n).rev() {
        if required[v] {
            count[v] += 1;
        }
        if v > 0 && count[v] > 0 {
            count[parent[v]] += count[v];
            branches[parent[v]] += 1;
        }
    }
    let keep: Vec<bool> = (0..n).map(|v| required[v] || branches[v] >= 2).collect();

    // nearest kept ancestor-or-self and the fold from v up to it
    let mut near = vec![NONE; n];
    let mut to_near: Vec<Option<P>> = vec![None; n];
    let mut new_id = vec![NONE; n];
    let mut out = PrunedLayout {
        origin: Vec::new(),
        parent: Vec::new(),
        up: Vec::new(),
    };
    for v in 0..n {
        if count[v] == 0 {
            continue;
        }
        let p = parent[v];
        let above = if p == NONE { NONE } else { near[p] };
        if keep[v] {
            new_id[v] = out.origin.len();
            out.origin.push(v);
            if above == NONE {
                out.parent.push(NONE);
                out.up.push(None);
            } else {
                let edge = up[v].clone().expect("non-root has an edge");
                let val = match &to_near[p] {
                    Some(rest) => edge.concat(rest),
                    None => edge,
                };
                out.parent.push(new_id[above]);
                out.up.push(Some(val));
            }
            near[v] = v;
        } else {
            near[v] = above;
            if above != NONE {
                let edge = up[v].clone().expect("non-root has an edge");
                to_near[v] = Some(match &to_near[p] {
                    Some(rest) => edge.concat(rest),
                    None => edge,
                });
            }
        }
    }
    out
}

/// Required-weighted centroid: minimizes the largest required count over the
/// components left by its removal, ties broken by smallest label.
pub(crate) fn required_centroid(parent: &[usize], required: &[bool], labels: &[u64]) -> usize {
    let n = parent.len();
    let mut count = vec![0usize; n];
    let mut heaviest_child = vec![0usize; n];
    for v in (0..n).rev() {
        if required[v] {
            count[v] += 1;
        }
        if v > 0 {
            let p = parent[v];
            count[p] += count[v];
            heaviest_child[p] = heaviest_child[p].max(count[v]);
        }
    }
    let total = count[0];
    (0..n)
        .min_by_key(|&v| (heaviest_child[v].max(total - count[v]), labels[v]))
        .expect("non-empty tree")
}

/// Cut vertex selection shared by [`WeightedTree::decompose`] and the builder.
pub(crate) fn cut_vertices(parent: &[usize], required: &[bool], ell: usize, labels: &[u64]) -> Vec<usize> {
    let total = required.iter().filter(|&&r| r).count();
    if total <= ell {
        return Vec::new();
    }
    if total <= 2 * ell {
        return vec![required_centroid(parent, required, labels)];
    }
    let n = parent.len();
    let mut residual = vec![0usize; n];
    let mut cut = Vec::new();
    for v in (0..n).rev() {
        if required[v] {
            residual[v] += 1;
        }
        if residual[v] > ell {
            cut.push(v);
        } else if v > 0 {
            residual[parent[v]] += residual[v];
        }
    }
    cut.reverse();
    cut
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p5() -> WeightedTree {
        WeightedTree::from_edges(
            1,
            &[(1, 2, 1.0), (2, 3, 2.0), (3, 4, 1.0), (4, 5, 3.0)],
            None,
        )
        .unwrap()
    }

    #[test]
    fn distance_examples() {
        let t = WeightedTree::from_edges(1, &[(1, 2, 1.0), (2, 3, 2.0)], None).unwrap();
        let (w, path) = t.tree_distance(t.vertex(1).unwrap(), t.vertex(3).unwrap()).unwrap();
        assert_eq!(w, 3.0);
        let labels: Vec<u64> = path.vertices.iter().map(|&v| t.label(v)).collect();
        assert_eq!(labels, vec![1, 2, 3]);

        let (w, path) = t.tree_distance(1, 1).unwrap();
        assert_eq!(w, 0.0);
        assert_eq!(path.vertices, vec![1]);

        // star: center c = 0, leaves a = 1, b = 2
        let s = WeightedTree::from_edges(0, &[(0, 1, 2.0), (0, 2, 5.0)], None).unwrap();
        let (w, path) = s.tree_distance(1, 2).unwrap();
        assert_eq!(w, 7.0);
        assert_eq!(path.vertices, vec![1, 0, 2]);

        assert!(t.tree_distance(0, 7).is_err());
    }

    #[test]
    fn prune_nothing_to_remove() {
        let t = p5();
        let all: Vec<_> = (0..t.len()).collect();
        let (p, origin) = t.prune(&all).unwrap();
        assert_eq!(p, t);
        assert_eq!(origin, all);
    }

    #[test]
    fn prune_splices_degree_two_steiner() {
        let t = WeightedTree::from_edges(1, &[(1, 2, 1.0), (2, 3, 2.0)], None).unwrap();
        let r = [t.vertex(1).unwrap(), t.vertex(3).unwrap()];
        let (p, _) = t.prune(&r).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.edges().count(), 1);
        let (c, par, w) = p.edges().next().unwrap();
        assert_eq!((p.label(par), p.label(c), w), (1, 3, 3.0));
        assert_eq!(p.required_count(), 2);
    }

    #[test]
    fn prune_keeps_branching_steiner() {
        // spider: center 0, legs 0-1-2, 0-3-4, 0-5-6
        let t = WeightedTree::from_edges(
            0,
            &[(0, 1, 1.0), (1, 2, 1.0), (0, 3, 2.0), (3, 4, 2.0), (0, 5, 3.0), (5, 6, 3.0)],
            None,
        )
        .unwrap();
        let tips: Vec<_> = [2, 4, 6].iter().map(|&l| t.vertex(l).unwrap()).collect();
        let (p, _) = t.prune(&tips).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.label(p.root()), 0);
        assert!(!p.is_required(p.root()));
        let mut ws: Vec<f64> = p.edges().map(|e| e.2).collect();
        ws.sort_by(f64::total_cmp);
        assert_eq!(ws, vec![2.0, 4.0, 6.0]);
    }

    #[test]
    fn prune_rejects_empty() {
        assert!(p5().prune(&[]).is_err());
    }

    #[test]
    fn decompose_examples() {
        let t = WeightedTree::path(&[1.0; 4]).unwrap();
        assert_eq!(t.decompose(3).unwrap(), vec![2]);
        assert_eq!(t.decompose(5).unwrap(), Vec::<usize>::new());

        let t9 = WeightedTree::path(&[1.0; 8]).unwrap();
        let cut = t9.decompose(3).unwrap();
        assert!(cut.len() <= 9 / 4);
        assert_eq!(cut, vec![1, 5]);
    }

    #[test]
    fn centroid_tie_breaks_on_label() {
        // path of 4: vertices 1 and 2 both leave max component 2
        let t = WeightedTree::path(&[1.0; 3]).unwrap();
        assert_eq!(t.decompose(2).unwrap(), vec![1]);
    }

    #[test]
    fn parse_roundtrip_and_errors() {
        let text = "5 1\n1 2 1\n2 3 2\n3 4 1\n4 5 3\n";
        let t = WeightedTree::parse(text).unwrap();
        assert_eq!(t, p5());
        assert_eq!(WeightedTree::parse(&t.to_text()).unwrap(), t);

        let with_r = "3 1\n1 2 1\n2 3 2\nR: 1 3\n";
        let t = WeightedTree::parse(with_r).unwrap();
        assert_eq!(t.required_count(), 2);
        assert!(!t.is_required(t.vertex(2).unwrap()));
        assert_eq!(WeightedTree::parse(&t.to_text()).unwrap(), t);

        assert!(WeightedTree::parse("3 1\n1 2 1\n1 2 1\n").is_err());
        assert!(WeightedTree::parse("3 1\n1 2 1\n").is_err());
        assert!(WeightedTree::parse("3 1\n1 2 1\n3 4 1\n").is_err());
        assert!(WeightedTree::parse("2 1\n1 2 -1\n").is_err());
        assert!(WeightedTree::parse("1 7\n").unwrap().len() == 1);
    }
}
