//! k-hop 1-spanners for tree metrics and the recursion tree that navigates
//! them.
//!
//! The construction cuts the tree into components with few required vertices
//! each, recurses into every component, and links components through the cut
//! vertices:
//!
//! * `k = 2`: one centroid, joined to every required vertex;
//! * `k = 3`: all pairs of cut vertices are joined directly;
//! * `k >= 4`: the cut vertices are pruned into their own tree and connected by
//!   a recursive `(k - 2)`-hop spanner.
//!
//! For `k >= 3` every cut vertex is also joined to the required vertices of
//! the components it borders. The recursion is recorded in a [`RecursionTree`]
//! whose LCA and level-ancestor indices let [`Navigator::find_path`] walk it
//! in `O(k)` time.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::ackermann::alpha_prime;
use crate::ancestry::AncestryIndex;
use crate::payload::PathValue;
use crate::tree::{cut_vertices, fmt_weight, prune_layout, Vertex, WeightedTree, NONE};
use crate::{Error, Result};

pub type NodeId = usize;

/// One edge of a spanner; `weight` is the tree distance of its endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpannerEdge {
    pub u: Vertex,
    pub v: Vertex,
    pub weight: f64,
}

#[derive(Debug, Clone)]
pub struct HopSpanner {
    edges: Vec<SpannerEdge>,
    index: HashMap<(Vertex, Vertex), usize>,
    adjacency: Vec<Vec<usize>>,
}

impl HopSpanner {
    fn new(vertices: usize, raw: Vec<(Vertex, Vertex, f64)>) -> Self {
        let mut adjacency = vec![Vec::new(); vertices];
        let mut index = HashMap::with_capacity(raw.len());
        let edges: Vec<SpannerEdge> = raw
            .into_iter()
            .enumerate()
            .map(|(i, (u, v, weight))| {
                index.insert(key(u, v), i);
                adjacency[u].push(i);
                adjacency[v].push(i);
                SpannerEdge { u, v, weight }
            })
            .collect();
        HopSpanner {
            edges,
            index,
            adjacency,
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[SpannerEdge] {
        &self.edges
    }

    pub fn edge_id(&self, a: Vertex, b: Vertex) -> Option<usize> {
        self.index.get(&key(a, b)).copied()
    }

    pub fn edge(&self, a: Vertex, b: Vertex) -> Option<&SpannerEdge> {
        self.edge_id(a, b).map(|i| &self.edges[i])
    }

    /// Edge ids incident to `v`.
    pub fn incident(&self, v: Vertex) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }
}

fn key(a: Vertex, b: Vertex) -> (Vertex, Vertex) {
    (a.min(b), a.max(b))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ContractedVertex {
    /// Stands for one component; holds the component's number.
    Representative(usize),
    Cut(Vertex),
}

/// Components of `T - CV` contracted to single vertices, interleaved with the
/// cut vertices and rooted like `T`.
#[derive(Debug, Clone)]
pub struct ContractedTree {
    vertices: Vec<ContractedVertex>,
    parent: Vec<usize>,
    cut_index: HashMap<Vertex, usize>,
    index: AncestryIndex,
}

impl ContractedTree {
    /// Contracts the components of `tree - cut`. Returns the contracted tree
    /// and, per vertex of `tree`, its node in it.
    pub fn from_cut(tree: &WeightedTree, cut: &[Vertex]) -> Result<(Self, Vec<usize>)> {
        let mut is_cut = vec![false; tree.len()];
        for &c in cut {
            tree.check(c)?;
            is_cut[c] = true;
        }
        if cut.is_empty() {
            return Err(Error::input("contracting needs at least one cut vertex"));
        }
        let ids: Vec<Vertex> = (0..tree.len()).collect();
        let (ct, node_of, _) = contract(tree.parents(), &is_cut, &ids);
        Ok((ct, node_of))
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &ContractedVertex {
        &self.vertices[i]
    }

    pub fn root(&self) -> usize {
        self.index.root()
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        let p = self.parent[i];
        (p != NONE).then_some(p)
    }

    pub fn depth(&self, i: usize) -> usize {
        self.index.depth(i)
    }

    pub fn cut_node(&self, v: Vertex) -> Option<usize> {
        self.cut_index.get(&v).copied()
    }

    pub fn lca(&self, a: usize, b: usize) -> usize {
        self.index.lca(a, b)
    }

    /// The cut vertex adjacent to `a` on the path from `a` to `b`.
    pub fn border_towards(&self, a: usize, b: usize) -> Vertex {
        match &self.vertices[self.index.step_towards(a, b)] {
            ContractedVertex::Cut(v) => *v,
            ContractedVertex::Representative(_) => {
                unreachable!("representatives are never adjacent")
            }
        }
    }
}

/// Builds the contracted tree over a dense layout. `vert` maps local indices
/// to the ids stored in cut nodes. Returns the tree, each local vertex's node,
/// and each component's representative node.
fn contract(parent: &[usize], is_cut: &[bool], vert: &[Vertex]) -> (ContractedTree, Vec<usize>, Vec<usize>) {
    let n = parent.len();
    let mut vertices = Vec::new();
    let mut cparent = Vec::new();
    let mut cut_index = HashMap::new();
    let mut node_of = vec![NONE; n];
    let mut reps = Vec::new();
    for v in 0..n {
        let p = parent[v];
        let above = if p == NONE { NONE } else { node_of[p] };
        if is_cut[v] {
            node_of[v] = vertices.len();
            cut_index.insert(vert[v], vertices.len());
            vertices.push(ContractedVertex::Cut(vert[v]));
            cparent.push(above);
        } else if p == NONE || is_cut[p] {
            node_of[v] = vertices.len();
            reps.push(vertices.len());
            vertices.push(ContractedVertex::Representative(reps.len() - 1));
            cparent.push(above);
        } else {
            node_of[v] = above;
        }
    }
    let index = AncestryIndex::new(&cparent);
    (
        ContractedTree {
            vertices,
            parent: cparent,
            cut_index,
            index,
        },
        node_of,
        reps,
    )
}

#[derive(Debug, Clone)]
pub enum NodeKind {
    /// A `k = 2` centroid.
    Regular { vertex: Vertex },
    /// A `k >= 3` split; `next` indexes the structure built over the cut
    /// vertices with `k - 2` (absent for `k = 3`).
    Composite {
        next: Option<usize>,
        contracted: ContractedTree,
    },
    /// A small instance answered by breadth-first search over its edges.
    Base {
        vertices: Vec<Vertex>,
        edges: Vec<(Vertex, Vertex)>,
    },
}

#[derive(Debug, Clone)]
pub struct Node {
    pub kind: NodeKind,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    /// Representative of this node's component in the parent's contracted tree.
    pub rep: Option<usize>,
}

/// The recursion of one spanner construction.
#[derive(Debug, Clone)]
pub struct RecursionTree {
    k: usize,
    nodes: Vec<Node>,
    eta: HashMap<Vertex, NodeId>,
    index: AncestryIndex,
}

impl RecursionTree {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> NodeId {
        self.index.root()
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn level(&self, id: NodeId) -> usize {
        self.index.depth(id)
    }

    /// The node whose vertex set holds `v`.
    pub fn eta(&self, v: Vertex) -> Option<NodeId> {
        self.eta.get(&v).copied()
    }

    pub fn covered_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.eta.keys().copied()
    }

    fn check(&self, id: NodeId) -> Result<()> {
        if id < self.nodes.len() {
            Ok(())
        } else {
            Err(Error::input(format!("node {id} out of range 0..{}", self.nodes.len())))
        }
    }

    pub fn lca_node(&self, a: NodeId, b: NodeId) -> Result<NodeId> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.index.lca(a, b))
    }

    pub fn level_ancestor(&self, a: NodeId, level: usize) -> Result<NodeId> {
        self.check(a)?;
        self.index.level_ancestor(a, level).ok_or_else(|| {
            Error::input(format!("level {level} is below node {a} at level {}", self.level(a)))
        })
    }

    pub(crate) fn child_towards(&self, a: NodeId, b: NodeId) -> NodeId {
        self.index
            .level_ancestor(b, self.index.depth(a) + 1)
            .expect("descendant is deeper")
    }

    /// Ancestors of `id` from the root down to `id` itself.
    pub fn path_from_root(&self, id: NodeId) -> Vec<NodeId> {
        let mut out = vec![id];
        let mut v = id;
        while let Some(p) = self.nodes[v].parent {
            out.push(p);
            v = p;
        }
        out.reverse();
        out
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildStats {
    pub regular_nodes: usize,
    pub composite_nodes: usize,
    pub base_nodes: usize,
    /// Recursion trees built, the top-level one included.
    pub structures: usize,
    /// Largest recursion tree depth over all structures.
    pub max_level: usize,
}

/// A built spanner together with everything needed to navigate it.
#[derive(Debug, Clone)]
pub struct Navigator {
    pub(crate) k: usize,
    pub(crate) tree: WeightedTree,
    pub(crate) spanner: HopSpanner,
    pub(crate) structures: Vec<RecursionTree>,
}

impl Navigator {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn tree(&self) -> &WeightedTree {
        &self.tree
    }

    pub fn spanner(&self) -> &HopSpanner {
        &self.spanner
    }

    /// The top-level recursion tree.
    pub fn recursion_tree(&self) -> &RecursionTree {
        &self.structures[0]
    }

    /// Recursion tree `id`; `Composite::next` values index here.
    pub fn structure(&self, id: usize) -> &RecursionTree {
        &self.structures[id]
    }

    pub fn structures(&self) -> &[RecursionTree] {
        &self.structures
    }

    pub fn stats(&self) -> BuildStats {
        let mut s = BuildStats {
            structures: self.structures.len(),
            ..Default::default()
        };
        for rt in &self.structures {
            for (id, node) in rt.nodes.iter().enumerate() {
                match node.kind {
                    NodeKind::Regular { .. } => s.regular_nodes += 1,
                    NodeKind::Composite { .. } => s.composite_nodes += 1,
                    NodeKind::Base { .. } => s.base_nodes += 1,
                }
                s.max_level = s.max_level.max(rt.level(id));
            }
        }
        s
    }

    /// For `k = 2`: how many centroids serve each vertex, counting the vertex
    /// itself if it is one. Empty for other `k`.
    pub fn centroid_load(&self) -> Vec<usize> {
        if self.k != 2 {
            return Vec::new();
        }
        let rt = self.recursion_tree();
        (0..self.tree.len())
            .map(|v| match rt.eta(v) {
                Some(id) => rt
                    .path_from_root(id)
                    .into_iter()
                    .filter(|&a| matches!(rt.nodes[a].kind, NodeKind::Regular { .. }))
                    .count(),
                None => 0,
            })
            .collect()
    }

    /// Spanner edges as `u v w` lines over vertex labels.
    pub fn spanner_text(&self) -> String {
        let mut out = String::new();
        for e in self.spanner.edges() {
            writeln!(
                out,
                "{} {} {}",
                self.tree.label(e.u),
                self.tree.label(e.v),
                fmt_weight(e.weight)
            )
            .unwrap();
        }
        out
    }
}

/// Builds a `k`-hop 1-spanner for the required vertices of `tree`, plus its
/// recursion tree. Steiner vertices are pruned away first.
pub fn build(tree: &WeightedTree, k: usize) -> Result<Navigator> {
    let up: Vec<Option<f64>> = (0..tree.len())
        .map(|v| tree.parent(v).map(|_| tree.parent_weight(v)))
        .collect();
    let (edges, drafts) = run(tree, k, up)?;
    let spanner = HopSpanner::new(tree.len(), edges);
    let structures = drafts.into_iter().map(Draft::finish).collect();
    Ok(Navigator {
        k,
        tree: tree.clone(),
        spanner,
        structures,
    })
}

/// The base case alone: only valid when at most `k + 1` vertices are required.
pub fn handle_base_case(tree: &WeightedTree, k: usize) -> Result<Navigator> {
    if tree.required_count() > k + 1 {
        return Err(Error::internal(format!(
            "base case called with {} required vertices and k = {k}",
            tree.required_count()
        )));
    }
    build(tree, k)
}

/// Reruns the construction with a different payload; the decomposition does
/// not depend on the payload, so the edges come out in the same order.
pub(crate) fn build_edges<P: PathValue>(
    tree: &WeightedTree,
    k: usize,
    up: Vec<Option<P>>,
) -> Result<Vec<(Vertex, Vertex, P)>> {
    Ok(run(tree, k, up)?.0)
}

type Drafted<P> = (Vec<(Vertex, Vertex, P)>, Vec<Draft>);

fn run<P: PathValue>(tree: &WeightedTree, k: usize, up: Vec<Option<P>>) -> Result<Drafted<P>> {
    if k < 2 {
        return Err(Error::input(format!("hop parameter k = {k} must be at least 2")));
    }
    if tree.required_count() == 0 {
        return Err(Error::input("tree has no required vertices"));
    }
    let mut inst = Instance {
        vert: (0..tree.len()).collect(),
        parent: tree.parents().to_vec(),
        up,
        required: tree.required_flags().to_vec(),
    };
    if inst.required.iter().any(|r| !r) {
        inst = inst.pruned(&inst.required.clone());
    }
    let mut b = Builder {
        labels: tree.labels(),
        edges: Vec::new(),
        seen: HashSet::new(),
        drafts: Vec::new(),
    };
    b.structure(inst, k);
    Ok((b.edges, b.drafts))
}

/// A tree in dense layout whose vertices are vertices of the input tree.
struct Instance<P> {
    vert: Vec<Vertex>,
    parent: Vec<usize>,
    up: Vec<Option<P>>,
    required: Vec<bool>,
}

impl<P: PathValue> Instance<P> {
    fn len(&self) -> usize {
        self.vert.len()
    }

    fn required_count(&self) -> usize {
        self.required.iter().filter(|&&r| r).count()
    }

    fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.len()];
        for v in 1..self.len() {
            ch[self.parent[v]].push(v);
        }
        ch
    }

    /// Path values from `src` to every vertex reachable without entering a
    /// blocked vertex.
    fn values_from(&self, children: &[Vec<usize>], src: usize, blocked: Option<&[bool]>) -> Vec<(usize, P)> {
        let mut out: Vec<(usize, P)> = Vec::new();
        // (vertex, came from, index into out of the value reaching it)
        let mut stack: Vec<(usize, usize, usize)> = Vec::new();
        let open = |w: usize| blocked.is_none_or(|b| !b[w]);
        let push = |w: usize, val: P, from: usize, out: &mut Vec<(usize, P)>, stack: &mut Vec<_>| {
            out.push((w, val));
            stack.push((w, from, out.len() - 1));
        };
        for &c in &children[src] {
            if open(c) {
                push(c, self.up[c].clone().unwrap().reverse(), src, &mut out, &mut stack);
            }
        }
        let p = self.parent[src];
        if p != NONE && open(p) {
            push(p, self.up[src].clone().unwrap(), src, &mut out, &mut stack);
        }
        while let Some((w, from, at)) = stack.pop() {
            let base = out[at].1.clone();
            for &c in &children[w] {
                if c != from && open(c) {
                    let val = base.concat(&self.up[c].clone().unwrap().reverse());
                    push(c, val, w, &mut out, &mut stack);
                }
            }
            let p = self.parent[w];
            if p != NONE && p != from && open(p) {
                let val = base.concat(self.up[w].as_ref().unwrap());
                push(p, val, w, &mut out, &mut stack);
            }
        }
        out
    }

    /// Steiner closure of `keep`, which becomes the required set.
    fn pruned(&self, keep: &[bool]) -> Instance<P> {
        let p = prune_layout(&self.parent, &self.up, keep);
        Instance {
            vert: p.origin.iter().map(|&v| self.vert[v]).collect(),
            required: p.origin.iter().map(|&v| keep[v]).collect(),
            parent: p.parent,
            up: p.up,
        }
    }

    /// The subtree induced by `members` (increasing, connected, first is top).
    fn induced(&self, members: &[usize], local: &mut [usize]) -> Instance<P> {
        for (i, &v) in members.iter().enumerate() {
            local[v] = i;
        }
        let parent = members
            .iter()
            .enumerate()
            .map(|(i, &v)| if i == 0 { NONE } else { local[self.parent[v]] })
            .collect();
        Instance {
            vert: members.iter().map(|&v| self.vert[v]).collect(),
            parent,
            up: members
                .iter()
                .enumerate()
                .map(|(i, &v)| if i == 0 { None } else { self.up[v].clone() })
                .collect(),
            required: members.iter().map(|&v| self.required[v]).collect(),
        }
    }
}

/// A recursion tree under construction.
struct Draft {
    k: usize,
    nodes: Vec<Node>,
    eta: HashMap<Vertex, NodeId>,
}

impl Draft {
    fn finish(self) -> RecursionTree {
        let parent: Vec<usize> = self.nodes.iter().map(|n| n.parent.unwrap_or(NONE)).collect();
        let index = AncestryIndex::new(&parent);
        RecursionTree {
            k: self.k,
            nodes: self.nodes,
            eta: self.eta,
            index,
        }
    }
}

struct Builder<'a, P> {
    labels: &'a [u64],
    edges: Vec<(Vertex, Vertex, P)>,
    seen: HashSet<(Vertex, Vertex)>,
    drafts: Vec<Draft>,
}

impl<P: PathValue> Builder<'_, P> {
    fn add_edge(&mut self, a: Vertex, b: Vertex, value: P) {
        if a != b && self.seen.insert(key(a, b)) {
            self.edges.push((a, b, value));
        }
    }

    fn structure(&mut self, inst: Instance<P>, k: usize) -> usize {
        let id = self.drafts.len();
        self.drafts.push(Draft {
            k,
            nodes: Vec::new(),
            eta: HashMap::new(),
        });
        self.node(id, inst, k);
        id
    }

    fn push_node(&mut self, sid: usize, kind: NodeKind) -> NodeId {
        let nodes = &mut self.drafts[sid].nodes;
        nodes.push(Node {
            kind,
            parent: None,
            children: Vec::new(),
            rep: None,
        });
        nodes.len() - 1
    }

    fn node(&mut self, sid: usize, inst: Instance<P>, k: usize) -> NodeId {
        let n = inst.required_count();
        if n <= k + 1 {
            return self.base(sid, inst, k);
        }
        let ell = (alpha_prime(k as u32 - 2, n as u64) as usize).clamp(1, n - 1);
        let local_labels: Vec<u64> = inst.vert.iter().map(|&v| self.labels[v]).collect();
        let cut = cut_vertices(&inst.parent, &inst.required, ell, &local_labels);
        debug_assert!(!cut.is_empty());
        let mut is_cut = vec![false; inst.len()];
        for &c in &cut {
            is_cut[c] = true;
        }

        // components of inst - cut, numbered in order of their top vertex
        let mut comp = vec![NONE; inst.len()];
        let mut members: Vec<Vec<usize>> = Vec::new();
        for v in 0..inst.len() {
            if is_cut[v] {
                continue;
            }
            let p = inst.parent[v];
            comp[v] = if p == NONE || is_cut[p] {
                members.push(Vec::new());
                members.len() - 1
            } else {
                comp[p]
            };
            members[comp[v]].push(v);
        }

        let mut local = vec![NONE; inst.len()];
        let mut kids: Vec<(usize, NodeId)> = Vec::new();
        for (c, m) in members.iter().enumerate() {
            let mut sub = inst.induced(m, &mut local);
            match sub.required_count() {
                0 => continue,
                r if r < sub.len() => sub = sub.pruned(&sub.required.clone()),
                _ => {}
            }
            kids.push((c, self.node(sid, sub, k)));
        }

        let children = inst.children();
        let beta = if k == 2 {
            let v = cut[0];
            let beta = self.push_node(sid, NodeKind::Regular { vertex: inst.vert[v] });
            self.drafts[sid].eta.insert(inst.vert[v], beta);
            for (w, val) in inst.values_from(&children, v, None) {
                if inst.required[w] {
                    self.add_edge(inst.vert[v], inst.vert[w], val);
                }
            }
            beta
        } else {
            let (contracted, _, reps) = contract(&inst.parent, &is_cut, &inst.vert);
            let cv_tree = inst.pruned(&is_cut);
            let next = if k == 3 {
                let ch = cv_tree.children();
                for a in 0..cv_tree.len() {
                    if !cv_tree.required[a] {
                        continue;
                    }
                    for (b, val) in cv_tree.values_from(&ch, a, None) {
                        if cv_tree.required[b] && a < b {
                            self.add_edge(cv_tree.vert[a], cv_tree.vert[b], val);
                        }
                    }
                }
                None
            } else {
                Some(self.structure(cv_tree, k - 2))
            };
            for &u in &cut {
                for (w, val) in inst.values_from(&children, u, Some(&is_cut)) {
                    if inst.required[w] {
                        self.add_edge(inst.vert[u], inst.vert[w], val);
                    }
                }
            }
            let beta = self.push_node(sid, NodeKind::Composite { next, contracted });
            for &u in &cut {
                self.drafts[sid].eta.insert(inst.vert[u], beta);
            }
            for &(c, child) in &kids {
                self.drafts[sid].nodes[child].rep = Some(reps[c]);
            }
            beta
        };
        for &(_, child) in &kids {
            self.drafts[sid].nodes[child].parent = Some(beta);
            self.drafts[sid].nodes[beta].children.push(child);
        }
        beta
    }

    fn base(&mut self, sid: usize, inst: Instance<P>, k: usize) -> NodeId {
        let mut pairs = Vec::with_capacity(inst.len());
        for v in 1..inst.len() {
            let (a, b) = (inst.vert[v], inst.vert[inst.parent[v]]);
            self.add_edge(a, b, inst.up[v].clone().unwrap());
            pairs.push((a, b));
        }
        if inst.required_count() == k + 1 {
            let top: Vec<usize> = (1..inst.len()).filter(|&v| inst.parent[v] == 0).collect();
            if let [x, y] = top[..] {
                let val = inst.up[x].clone().unwrap().concat(&inst.up[y].clone().unwrap().reverse());
                self.add_edge(inst.vert[x], inst.vert[y], val);
                pairs.push((inst.vert[x], inst.vert[y]));
            }
        }
        let id = self.push_node(
            sid,
            NodeKind::Base {
                vertices: inst.vert.clone(),
                edges: pairs,
            },
        );
        for &v in &inst.vert {
            self.drafts[sid].eta.insert(v, id);
        }
        id
    }
}
