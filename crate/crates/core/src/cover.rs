//! Finite metrics, tree covers and navigation of a metric through the
//! spanners of its cover trees.
//!
//! Points of an `n`-point metric are `0..n`. In every cover tree the vertex
//! labelled `x < n` is point `x`; vertices with larger labels are Steiner.
//! Paths over the union spanner report points by their id and the Steiner
//! vertices of tree `i` as `n + offset(i) + index`, so ids never collide
//! across trees.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::spanner::{build, Navigator};
use crate::tree::{fmt_weight, Vertex, WeightedTree};
use crate::{Error, Result};

/// Relative slack used whenever two computed distances are compared.
pub const REL_TOL: f64 = 1e-12;

/// `a <= b` up to relative rounding.
pub fn le_tol(a: f64, b: f64) -> bool {
    a <= b + REL_TOL * a.abs().max(b.abs())
}

/// Up to this many points, matrix metrics are checked exhaustively for the
/// triangle inequality; larger ones are sampled.
const EXHAUSTIVE_TRIANGLE: usize = 512;

#[derive(Debug, Clone)]
enum Storage {
    Matrix(Vec<f64>),
    Points(Vec<Vec<f64>>),
    Tree(WeightedTree),
}

#[derive(Debug, Clone)]
pub struct FiniteMetric {
    n: usize,
    storage: Storage,
}

impl FiniteMetric {
    /// Full distance matrix; validated for symmetry, zero diagonal, positive
    /// off-diagonal entries and the triangle inequality.
    pub fn from_matrix(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::input("metric needs at least one point"));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::input(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            flat.extend_from_slice(row);
        }
        let m = FiniteMetric {
            n,
            storage: Storage::Matrix(flat),
        };
        m.validate_matrix()?;
        Ok(m)
    }

    /// Euclidean distances between coordinate vectors of equal dimension.
    pub fn from_points(points: Vec<Vec<f64>>) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(Error::input("metric needs at least one point"));
        }
        let d = points[0].len();
        if points.iter().any(|p| p.len() != d || p.iter().any(|c| !c.is_finite())) {
            return Err(Error::input("points must share one dimension and be finite"));
        }
        for i in 0..n {
            for j in 0..i {
                if points[i] == points[j] {
                    return Err(Error::input(format!("points {j} and {i} coincide")));
                }
            }
        }
        Ok(FiniteMetric {
            n,
            storage: Storage::Points(points),
        })
    }

    /// The shortest-path metric of a tree over all of its vertices; point `i`
    /// is dense vertex `i`.
    pub fn from_tree(tree: &WeightedTree) -> Result<Self> {
        if tree.edges().any(|(_, _, w)| w <= 0.0) {
            return Err(Error::input("tree metrics need positive edge weights"));
        }
        Ok(FiniteMetric {
            n: tree.len(),
            storage: Storage::Tree(tree.clone()),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dist(&self, x: usize, y: usize) -> f64 {
        match &self.storage {
            Storage::Matrix(m) => m[x * self.n + y],
            Storage::Points(p) => p[x]
                .iter()
                .zip(&p[y])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt(),
            Storage::Tree(t) => t.tree_distance(x, y).expect("points are tree vertices").0,
        }
    }

    /// Distances from `x` to every point.
    pub fn row(&self, x: usize) -> Vec<f64> {
        match &self.storage {
            Storage::Tree(t) => t.distances_from(x),
            _ => (0..self.n).map(|y| self.dist(x, y)).collect(),
        }
    }

    pub fn check(&self, x: usize) -> Result<()> {
        if x < self.n {
            Ok(())
        } else {
            Err(Error::input(format!("point {x} out of range 0..{}", self.n)))
        }
    }

    fn validate_matrix(&self) -> Result<()> {
        let n = self.n;
        let d = |i: usize, j: usize| self.dist(i, j);
        for i in 0..n {
            if d(i, i) != 0.0 {
                return Err(Error::input(format!("d({i}, {i}) = {} is not zero", d(i, i))));
            }
            for j in 0..i {
                let v = d(i, j);
                if !v.is_finite() || v <= 0.0 {
                    return Err(Error::input(format!("d({i}, {j}) = {v} must be positive and finite")));
                }
                if v != d(j, i) {
                    return Err(Error::input(format!("d({i}, {j}) != d({j}, {i})")));
                }
            }
        }
        let triangle = |i: usize, j: usize, m: usize| {
            if le_tol(d(i, j), d(i, m) + d(m, j)) {
                Ok(())
            } else {
                Err(Error::input(format!(
                    "triangle inequality fails: d({i}, {j}) > d({i}, {m}) + d({m}, {j})"
                )))
            }
        };
        if n <= EXHAUSTIVE_TRIANGLE {
            for i in 0..n {
                for j in 0..i {
                    for m in 0..n {
                        triangle(i, j, m)?;
                    }
                }
            }
        } else {
            use rand::{Rng, SeedableRng};
            let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..EXHAUSTIVE_TRIANGLE.pow(3) {
                triangle(r.gen_range(0..n), r.gen_range(0..n), r.gen_range(0..n))?;
            }
        }
        Ok(())
    }

    /// Parses `matrix n` followed by `n` rows, or `points n d` followed by `n`
    /// coordinate lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty metric file"))?;
        let head: Vec<&str> = header.split_whitespace().collect();
        let num = |s: &str, ln: usize| s.parse::<f64>().map_err(|_| Error::parse(ln, format!("bad number {s:?}")));
        let count = |s: &str| s.parse::<usize>().map_err(|_| Error::parse(hl, format!("bad count {s:?}")));
        let (kind, n, width) = match head.as_slice() {
            ["matrix", n] => ("matrix", count(n)?, count(n)?),
            ["points", n, d] => ("points", count(n)?, count(d)?),
            _ => return Err(Error::parse(hl, "expected `matrix n` or `points n d`")),
        };
        let mut rows = Vec::with_capacity(n);
        for (ln, line) in lines {
            let row = line.split_whitespace().map(|t| num(t, ln)).collect::<Result<Vec<_>>>()?;
            if row.len() != width {
                return Err(Error::parse(ln, format!("expected {width} values, found {}", row.len())));
            }
            rows.push(row);
        }
        if rows.len() != n {
            return Err(Error::parse(hl, format!("header declares {n} rows, found {}", rows.len())));
        }
        if kind == "matrix" {
            Self::from_matrix(rows)
        } else {
            Self::from_points(rows)
        }
    }

    /// Text form: points are written as coordinates, everything else as a
    /// matrix.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match &self.storage {
            Storage::Points(p) => {
                writeln!(out, "points {} {}", self.n, p[0].len()).unwrap();
                for row in p {
                    let cells: Vec<String> = row.iter().map(|&c| fmt_weight(c)).collect();
                    writeln!(out, "{}", cells.join(" ")).unwrap();
                }
            }
            _ => {
                writeln!(out, "matrix {}", self.n).unwrap();
                for x in 0..self.n {
                    let cells: Vec<String> = self.row(x).into_iter().map(fmt_weight).collect();
                    writeln!(out, "{}", cells.join(" ")).unwrap();
                }
            }
        }
        out
    }
}

/// A set of dominating trees over a metric.
#[derive(Debug, Clone)]
pub struct TreeCover {
    pub gamma: f64,
    trees: Vec<WeightedTree>,
    /// Point `x` maps to a tree that serves every pair `(x, y)`.
    ramsey: Option<Vec<usize>>,
}

impl TreeCover {
    /// Trees whose labels `0..n` are the points; every other label is
    /// Steiner. The required sets are reset to exactly the points.
    pub fn new(n: usize, gamma: f64, trees: Vec<WeightedTree>, ramsey: Option<Vec<usize>>) -> Result<Self> {
        if trees.is_empty() {
            return Err(Error::input("a cover needs at least one tree"));
        }
        if !(gamma >= 1.0) {
            return Err(Error::input(format!("stretch {gamma} must be at least 1")));
        }
        let mut fixed = Vec::with_capacity(trees.len());
        for (i, t) in trees.into_iter().enumerate() {
            let mut req = vec![false; t.len()];
            for x in 0..n as u64 {
                let v = t
                    .vertex(x)
                    .ok_or_else(|| Error::input(format!("tree {i} lacks point {x}")))?;
                req[v] = true;
            }
            fixed.push(t.with_required(req));
        }
        if let Some(map) = &ramsey {
            if map.len() != n {
                return Err(Error::input(format!("Ramsey map covers {} of {n} points", map.len())));
            }
            if let Some(&bad) = map.iter().find(|&&i| i >= fixed.len()) {
                return Err(Error::input(format!("Ramsey map names tree {bad} of {}", fixed.len())));
            }
        }
        Ok(TreeCover {
            gamma,
            trees: fixed,
            ramsey,
        })
    }

    pub fn trees(&self) -> &[WeightedTree] {
        &self.trees
    }

    pub fn zeta(&self) -> usize {
        self.trees.len()
    }

    pub fn ramsey(&self) -> Option<&[usize]> {
        self.ramsey.as_deref()
    }

    /// Checks domination for every tree and pair, and (optionally) that some
    /// tree, or the Ramsey tree of the first point, stretches each pair by at
    /// most `gamma`. Errors carry the first offending pair.
    pub fn validate(&self, metric: &FiniteMetric, coverage: bool) -> Result<()> {
        let n = metric.len();
        let mut best = vec![f64::INFINITY; n * n];
        for (i, t) in self.trees.iter().enumerate() {
            for x in 0..n {
                let from = t.distances_from(t.vertex(x as u64).unwrap());
                let row = metric.row(x);
                for y in 0..n {
                    let td = from[t.vertex(y as u64).unwrap()];
                    if !le_tol(row[y], td) {
                        return Err(Error::Domination {
                            tree: i,
                            x,
                            y,
                            tree_dist: td,
                            metric_dist: row[y],
                        });
                    }
                    let use_it = match &self.ramsey {
                        Some(map) => map[x] == i,
                        None => true,
                    };
                    if use_it {
                        best[x * n + y] = best[x * n + y].min(td);
                    }
                }
            }
        }
        if coverage {
            for x in 0..n {
                let row = metric.row(x);
                for y in 0..n {
                    if !le_tol(best[x * n + y], self.gamma * row[y]) {
                        return Err(Error::Coverage {
                            gamma: self.gamma,
                            x,
                            y,
                            best: best[x * n + y],
                            metric_dist: row[y],
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// `cover.txt` plus one file per tree, all under `dir`.
    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        let io = |e: std::io::Error| Error::input(format!("cannot write cover: {e}"));
        std::fs::create_dir_all(dir).map_err(io)?;
        let mut head = format!("{} {}", fmt_weight(self.gamma), self.zeta());
        if self.ramsey.is_some() {
            head.push_str(" ramsey");
        }
        head.push('\n');
        for (i, t) in self.trees.iter().enumerate() {
            let name = format!("tree{i}.txt");
            std::fs::write(dir.join(&name), t.to_text()).map_err(io)?;
            writeln!(head, "{name}").unwrap();
        }
        if let Some(map) = &self.ramsey {
            for (x, i) in map.iter().enumerate() {
                writeln!(head, "{x} {i}").unwrap();
            }
        }
        std::fs::write(dir.join("cover.txt"), head).map_err(io)
    }
}

/// Star cover: one star per point `x`, centred at `x` with edges of length
/// `d(x, y)`. Stretch 1, `n` trees, Ramsey map `x -> x`.
pub fn star_cover(metric: &FiniteMetric) -> Result<TreeCover> {
    let n = metric.len();
    let trees = (0..n)
        .map(|x| {
            let row = metric.row(x);
            let edges: Vec<_> = (0..n)
                .filter(|&y| y != x)
                .map(|y| (x as u64, y as u64, row[y]))
                .collect();
            WeightedTree::from_edges(x as u64, &edges, None)
        })
        .collect::<Result<Vec<_>>>()?;
    TreeCover::new(n, 1.0, trees, Some((0..n).collect()))
}

/// A tree metric as its own cover, relabelled so that point `i` is dense
/// vertex `i` of `tree`.
pub fn single_tree_cover(tree: &WeightedTree) -> Result<TreeCover> {
    let edges: Vec<_> = tree.edges().map(|(c, p, w)| (p as u64, c as u64, w)).collect();
    let t = WeightedTree::from_edges(0, &edges, None)?;
    TreeCover::new(tree.len(), 1.0, vec![t], Some(vec![0; tree.len()]))
}

/// Parses a cover description: `gamma zeta [ramsey]`, then `zeta` tree file
/// names, then `point tree-index` lines. `read` fetches a named tree file.
pub fn parse_cover(text: &str, n: usize, mut read: impl FnMut(&str) -> Result<String>) -> Result<TreeCover> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty cover file"))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    let (gamma, zeta, ramsey) = match head.as_slice() {
        [g, z] => (*g, *z, false),
        [g, z, "ramsey"] => (*g, *z, true),
        _ => return Err(Error::parse(hl, "expected `gamma zeta [ramsey]`")),
    };
    let gamma: f64 = gamma.parse().map_err(|_| Error::parse(hl, "bad gamma"))?;
    let zeta: usize = zeta.parse().map_err(|_| Error::parse(hl, "bad zeta"))?;
    if zeta == 0 {
        return Err(Error::input("a cover needs at least one tree"));
    }
    let mut trees = Vec::with_capacity(zeta);
    let mut map = vec![usize::MAX; n];
    for (ln, line) in lines {
        if trees.len() < zeta {
            let body = read(line)?;
            trees.push(WeightedTree::parse(&body).map_err(|e| match e {
                Error::Parse { line: l, msg } => Error::input(format!("{line}: line {l}: {msg}")),
                other => other,
            })?);
            continue;
        }
        if !ramsey {
            return Err(Error::parse(ln, "map lines need the ramsey flag"));
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let (x, i) = match parts.as_slice() {
            [x, i] => (
                x.parse::<usize>().map_err(|_| Error::parse(ln, "bad point"))?,
                i.parse::<usize>().map_err(|_| Error::parse(ln, "bad tree index"))?,
            ),
            _ => return Err(Error::parse(ln, "expected `point tree-index`")),
        };
        if x >= n {
            return Err(Error::parse(ln, format!("point {x} out of range")));
        }
        map[x] = i;
    }
    if trees.len() < zeta {
        return Err(Error::input(format!("cover declares {zeta} trees, found {}", trees.len())));
    }
    let ramsey = if ramsey {
        if let Some(x) = map.iter().position(|&i| i == usize::MAX) {
            return Err(Error::input(format!("Ramsey map misses point {x}")));
        }
        Some(map)
    } else {
        None
    };
    TreeCover::new(n, gamma, trees, ramsey)
}

/// Reads `cover.txt`-style file `path`; tree names resolve relative to its
/// directory. Validation is exhaustive over all pairs.
pub fn load_cover(path: &Path, metric: &FiniteMetric, check_coverage: bool) -> Result<TreeCover> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let cover = parse_cover(&text, metric.len(), |name| {
        std::fs::read_to_string(dir.join(name)).map_err(|e| Error::input(format!("cannot read {name}: {e}")))
    })?;
    cover.validate(metric, check_coverage)?;
    Ok(cover)
}

/// A path through the union spanner.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricPath {
    /// Cover tree whose spanner carried the path.
    pub tree: usize,
    /// Union-spanner vertex ids (points first, then per-tree Steiner ids).
    pub vertices: Vec<usize>,
    /// Weight of each hop, in path order.
    pub hop_weights: Vec<f64>,
    pub weight: f64,
    /// Cover trees whose paths were evaluated.
    pub trees_scanned: usize,
}

impl MetricPath {
    pub fn hops(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }
}

/// Per-tree spanners of a cover.
#[derive(Debug, Clone)]
pub struct MetricNavigator {
    metric: FiniteMetric,
    cover: TreeCover,
    k: usize,
    navs: Vec<Navigator>,
    offsets: Vec<usize>,
}

impl MetricNavigator {
    pub fn new(metric: &FiniteMetric, cover: &TreeCover, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::input(format!("hop parameter k = {k} must be at least 2")));
        }
        let navs = cover.trees().iter().map(|t| build(t, k)).collect::<Result<Vec<_>>>()?;
        let mut offsets = Vec::with_capacity(navs.len());
        let mut acc = 0;
        for t in cover.trees() {
            offsets.push(acc);
            acc += t.len();
        }
        Ok(MetricNavigator {
            metric: metric.clone(),
            cover: cover.clone(),
            k,
            navs,
            offsets,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn metric(&self) -> &FiniteMetric {
        &self.metric
    }

    pub fn cover(&self) -> &TreeCover {
        &self.cover
    }

    pub fn navigators(&self) -> &[Navigator] {
        &self.navs
    }

    /// Union-spanner id of vertex `v` of cover tree `i`.
    pub fn global_id(&self, i: usize, v: Vertex) -> usize {
        let t = &self.cover.trees()[i];
        let label = t.label(v);
        if (label as usize) < self.metric.len() {
            label as usize
        } else {
            self.metric.len() + self.offsets[i] + v
        }
    }

    /// Number of ids used by the union spanner.
    pub fn id_space(&self) -> usize {
        self.metric.len() + self.offsets.last().unwrap() + self.cover.trees().last().unwrap().len()
    }

    /// Sum of per-tree spanner sizes.
    pub fn total_edges(&self) -> usize {
        self.navs.iter().map(|n| n.spanner().len()).sum()
    }

    /// Edges of the union spanner over global ids; a pair present in several
    /// trees keeps its smallest weight.
    pub fn union_edges(&self) -> Vec<(usize, usize, f64)> {
        let mut best: std::collections::HashMap<(usize, usize), f64> = std::collections::HashMap::new();
        for (i, nav) in self.navs.iter().enumerate() {
            for e in nav.spanner().edges() {
                let (a, b) = (self.global_id(i, e.u), self.global_id(i, e.v));
                let key = (a.min(b), a.max(b));
                let w = best.entry(key).or_insert(e.weight);
                *w = w.min(e.weight);
            }
        }
        let mut out: Vec<_> = best.into_iter().map(|((a, b), w)| (a, b, w)).collect();
        out.sort_by_key(|x| (x.0, x.1));
        out
    }

    fn path_in(&self, i: usize, u: usize, v: usize) -> Result<MetricPath> {
        let t = &self.cover.trees()[i];
        let (a, b) = (t.vertex(u as u64).unwrap(), t.vertex(v as u64).unwrap());
        let nav = &self.navs[i];
        let p = nav.find_path(a, b)?;
        let hop_weights = p
            .vertices
            .windows(2)
            .map(|w| nav.spanner().edge(w[0], w[1]).expect("path edges exist").weight)
            .collect();
        Ok(MetricPath {
            tree: i,
            vertices: p.vertices.iter().map(|&x| self.global_id(i, x)).collect(),
            hop_weights,
            weight: p.weight,
            trees_scanned: 1,
        })
    }

    /// A path of at most `k` hops with weight at most `gamma * d(u, v)`.
    /// Ramsey covers consult one tree; other covers scan all trees and keep
    /// the lightest candidate.
    pub fn find_path(&self, u: usize, v: usize) -> Result<MetricPath> {
        self.metric.check(u)?;
        self.metric.check(v)?;
        if let Some(map) = self.cover.ramsey() {
            return self.path_in(map[u], u, v);
        }
        let mut best: Option<MetricPath> = None;
        for i in 0..self.navs.len() {
            let p = self.path_in(i, u, v)?;
            if best.as_ref().is_none_or(|b| p.weight < b.weight) {
                best = Some(p);
            }
        }
        let mut best = best.expect("a cover has at least one tree");
        best.trees_scanned = self.navs.len();
        Ok(best)
    }
}
