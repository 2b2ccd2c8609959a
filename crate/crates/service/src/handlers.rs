use std::collections::BTreeMap;
use std::time::Instant;

use axum::extract::{Path, State};
use axum::Json;
use hopnav_core::ackermann::{alpha_k, alpha_prime, ceil_log2};
use hopnav_core::applications::{self, eval_lower_bound};
use hopnav_core::cover::{parse_cover, single_tree_cover, star_cover, FiniteMetric, MetricNavigator};
use hopnav_core::gen::{random_points, random_tree, uniform_line};
use hopnav_core::graph::{complete_graph, greedy_spanner, Graph};
use hopnav_core::payload::{Directed, Mat2, Max, Min, Semigroup, Sum};
use hopnav_core::routing::{CoverRouting, RoutingScheme};
use hopnav_core::spanner::{build, Navigator};
use hopnav_core::{Error, Vertex, WeightedTree};
use serde_json::{json, Value};

use crate::api::*;
use crate::state::{AppState, MetricEntry, TreeEntry};
use crate::ApiError;

type Reply<T> = Result<Json<T>, ApiError>;

/// Largest `|E| / (n * alpha'_k(n))` the benchmark accepts.
const BENCH_CONSTANT: f64 = 4.0;

/// Rows beyond this are constant for every `n` that fits in 64 bits.
const MAX_ALPHA_K: u32 = 64;

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, ApiError> + Send + 'static) -> Reply<T> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::internal(format!("worker failed: {e}")))?
        .map(Json)
}

pub async fn health() -> Json<Value> {
    Json(json!({ "status": "ok" }))
}

pub async fn alpha(Json(req): Json<AlphaRequest>) -> Reply<AlphaResponse> {
    if req.k > MAX_ALPHA_K {
        return Err(ApiError::input(format!("k must be at most {MAX_ALPHA_K}")));
    }
    blocking(move || {
        Ok(AlphaResponse {
            k: req.k,
            n: req.n,
            alpha: alpha_k(req.k, req.n),
            alpha_prime: alpha_prime(req.k, req.n),
            lower_bound: eval_lower_bound(req.n, req.k as usize).ok(),
        })
    })
    .await
}

pub async fn generate(Json(req): Json<GenRequest>) -> Reply<GenResponse> {
    blocking(move || {
        let points = || random_points(req.n, req.dim.unwrap_or(2), req.side.unwrap_or(1000), req.seed);
        let text = match req.kind {
            GenKind::UniformLine => uniform_line(req.n)?.to_text(),
            GenKind::RandomTree => random_tree(req.n, req.max_weight.unwrap_or(100), req.seed)?.to_text(),
            GenKind::RandomPoints => FiniteMetric::from_points(points()?)?.to_text(),
            GenKind::RandomMatrix => {
                let m = FiniteMetric::from_points(points()?)?;
                FiniteMetric::from_matrix((0..m.len()).map(|x| m.row(x)).collect())?.to_text()
            }
        };
        Ok(GenResponse { text })
    })
    .await
}

pub async fn bench(Json(req): Json<BenchRequest>) -> Reply<BenchResponse> {
    blocking(move || {
        let mut records = Vec::new();
        let mut violations = Vec::new();
        for &n in &req.ns {
            let t = uniform_line(n)?;
            for &k in &req.ks {
                let start = Instant::now();
                let nav = build(&t, k)?;
                let millis = start.elapsed().as_secs_f64() * 1e3;
                let edges = nav.spanner().len();
                let ap = alpha_prime(k as u32, n as u64);
                let lower_bound = eval_lower_bound(n as u64, k).ok();
                let ratio = edges as f64 / (n as f64 * ap.max(1) as f64);
                if n >= 2 && edges + 1 < n {
                    violations.push(format!("n={n} k={k}: {edges} edges cannot connect {n} vertices"));
                }
                if let Some(lb) = lower_bound {
                    if (edges as f64) < lb.ceil() {
                        violations.push(format!("n={n} k={k}: {edges} edges below the lower bound {lb:.1}"));
                    }
                }
                if ratio > BENCH_CONSTANT {
                    violations.push(format!("n={n} k={k}: ratio {ratio:.3} above {BENCH_CONSTANT}"));
                }
                records.push(BenchRecord {
                    n,
                    k,
                    edges,
                    alpha_prime: ap,
                    lower_bound,
                    ratio,
                    millis,
                });
            }
        }
        Ok(BenchResponse {
            records,
            constant: BENCH_CONSTANT,
            violations,
        })
    })
    .await
}

pub async fn build_tree(State(st): State<AppState>, Json(req): Json<BuildRequest>) -> Reply<BuildResponse> {
    blocking(move || {
        let t = WeightedTree::parse(&req.tree)?;
        let start = Instant::now();
        let nav = build(&t, req.k)?;
        let millis = start.elapsed().as_secs_f64() * 1e3;
        let resp = BuildResponse {
            id: 0,
            n: t.len(),
            required: t.required_count(),
            k: req.k,
            edges: nav.spanner().len(),
            total_weight: nav.spanner().total_weight(),
            alpha_prime: alpha_prime(req.k as u32, t.required_count() as u64),
            stats: nav.stats(),
            millis,
        };
        let id = st.add_tree(TreeEntry::new(nav));
        Ok(BuildResponse { id, ..resp })
    })
    .await
}

pub async fn drop_tree(State(st): State<AppState>, Path(id): Path<u64>) -> Reply<Value> {
    st.remove_tree(id)?;
    Ok(Json(json!({ "deleted": id })))
}

pub async fn spanner(State(st): State<AppState>, Path(id): Path<u64>) -> Reply<SpannerResponse> {
    let e = st.tree(id)?;
    let t = e.nav.tree();
    let edges = e
        .nav
        .spanner()
        .edges()
        .iter()
        .map(|x| EdgeOut {
            u: t.label(x.u),
            v: t.label(x.v),
            weight: x.weight,
        })
        .collect();
    Ok(Json(SpannerResponse { k: e.nav.k(), edges }))
}

fn vertex(t: &WeightedTree, label: u64) -> Result<Vertex, ApiError> {
    t.vertex(label)
        .ok_or_else(|| ApiError::input(format!("unknown vertex {label}")))
}

/// Dense vertex pairs of a request; `all` means every ordered pair of
/// required vertices.
fn tree_pairs(t: &WeightedTree, req: &PairsRequest) -> Result<Vec<(Vertex, Vertex)>, ApiError> {
    if req.all {
        let r: Vec<Vertex> = t.required().collect();
        return Ok(r.iter().flat_map(|&u| r.iter().map(move |&v| (u, v))).collect());
    }
    req.pairs.iter().map(|&(a, b)| Ok((vertex(t, a)?, vertex(t, b)?))).collect()
}

/// Tree distances from the most recent source, recomputed when it changes.
struct DistanceCache<'a> {
    tree: &'a WeightedTree,
    source: Option<Vertex>,
    dist: Vec<f64>,
}

impl<'a> DistanceCache<'a> {
    fn new(tree: &'a WeightedTree) -> Self {
        DistanceCache {
            tree,
            source: None,
            dist: Vec::new(),
        }
    }

    fn get(&mut self, u: Vertex, v: Vertex) -> f64 {
        if self.source != Some(u) {
            self.dist = self.tree.distances_from(u);
            self.source = Some(u);
        }
        self.dist[v]
    }
}

pub async fn tree_paths(State(st): State<AppState>, Path(id): Path<u64>, Json(req): Json<PairsRequest>) -> Reply<PathsResponse> {
    let e = st.tree(id)?;
    blocking(move || {
        let t = e.nav.tree();
        let mut dist = DistanceCache::new(t);
        let mut summary = PathSummary::default();
        let mut paths = Vec::new();
        for (u, v) in tree_pairs(t, &req)? {
            let p = e.nav.find_path(u, v)?;
            summary.queries += 1;
            summary.max_hops = summary.max_hops.max(p.hops());
            summary.max_depth = summary.max_depth.max(p.depth);
            if p.weight != dist.get(u, v) {
                summary.inexact += 1;
            }
            if req.detail {
                paths.push(PathOut {
                    u: t.label(u),
                    v: t.label(v),
                    hops: p.hops(),
                    vertices: p.vertices.iter().map(|&x| t.label(x)).collect(),
                    weight: p.weight,
                    depth: p.depth,
                });
            }
        }
        Ok(PathsResponse { paths, summary })
    })
    .await
}

fn run_products<S: Semigroup>(
    nav: &Navigator,
    req: &PairsRequest,
    value: impl Fn(f64) -> S,
    out: impl Fn(&S) -> ProductValue,
) -> Result<ProductResponse, ApiError> {
    let t = nav.tree();
    let ann = nav.annotate(|c, _| Some(Directed::edge(value(t.parent_weight(c)))))?;
    let mut results = Vec::new();
    let (mut queries, mut max_ops) = (0, 0);
    for (u, v) in tree_pairs(t, req)? {
        let p = applications::tree_product(nav, &ann, u, v, None)?;
        queries += 1;
        max_ops = max_ops.max(p.ops);
        if req.detail {
            results.push(ProductOut {
                u: t.label(u),
                v: t.label(v),
                value: p.value.as_ref().map(|d| out(&d.forward)),
                ops: p.ops,
                hops: p.path.hops(),
            });
        }
    }
    Ok(ProductResponse {
        results,
        queries,
        max_ops,
    })
}

fn edge_matrix(w: f64) -> Mat2 {
    Mat2([[(w.abs().round() as u64 % Mat2::MODULUS as u64) as u32, 1], [1, 0]])
}

pub async fn products(State(st): State<AppState>, Path(id): Path<u64>, Json(req): Json<ProductRequest>) -> Reply<ProductResponse> {
    let e = st.tree(id)?;
    blocking(move || {
        let (nav, pairs) = (&e.nav, &req.pairs);
        let num = ProductValue::Number;
        match req.semigroup {
            SemigroupKind::Sum => run_products(nav, pairs, Sum, |s| num(s.0)),
            SemigroupKind::Max => run_products(nav, pairs, Max, |s| num(s.0)),
            SemigroupKind::Min => run_products(nav, pairs, Min, |s| num(s.0)),
            SemigroupKind::Mat2 => run_products(nav, pairs, edge_matrix, |m| ProductValue::Matrix(m.0)),
        }
    })
    .await
}

pub async fn verify(State(st): State<AppState>, Path(id): Path<u64>, Json(req): Json<VerifyRequest>) -> Reply<VerifyResponse> {
    let e = st.tree(id)?;
    blocking(move || {
        let ver = e.verifier()?;
        let t = e.nav.tree();
        let mut results = Vec::with_capacity(req.queries.len());
        for &(a, b, w) in &req.queries {
            let r = ver.verify(vertex(t, a)?, vertex(t, b)?, w, req.mode)?;
            results.push(VerifyOut {
                u: a,
                v: b,
                weight: w,
                heavier: r.heavier,
                path_max: r.path_max,
                comparisons: r.comparisons,
                hops: r.hops,
            });
        }
        let max_comparisons = results.iter().map(|r| r.comparisons).max().unwrap_or(0);
        Ok(VerifyResponse {
            results,
            max_comparisons,
        })
    })
    .await
}

pub async fn build_routing(State(st): State<AppState>, Json(req): Json<RoutingRequest>) -> Reply<RoutingResponse> {
    blocking(move || {
        let t = WeightedTree::parse(&req.tree)?;
        let s = RoutingScheme::new(&t, req.seed)?;
        let audit = s.audit();
        let n = t.len();
        let id = st.add_routing(s);
        Ok(RoutingResponse {
            id,
            n,
            max_entries: audit.max_entries,
            max_bits: audit.max_bits,
            entry_bound: ceil_log2(n as u64) as usize + 2,
        })
    })
    .await
}

pub async fn routes(State(st): State<AppState>, Path(id): Path<u64>, Json(req): Json<PairsRequest>) -> Reply<RoutesResponse> {
    let s = st.routing(id)?;
    blocking(move || {
        let t = s.navigator().tree();
        let mut dist = DistanceCache::new(t);
        let mut summary = RouteSummary::default();
        let mut routes = Vec::new();
        for (u, v) in tree_pairs(t, &req)? {
            let r = s.route(u, v)?;
            summary.routes += 1;
            summary.max_hops = summary.max_hops.max(r.hops());
            if !r.delivered {
                summary.undelivered += 1;
            } else if r.weight != dist.get(u, v) {
                summary.inexact += 1;
            }
            if req.detail {
                routes.push(RouteOut {
                    u: t.label(u),
                    v: t.label(v),
                    vertices: r.vertices.iter().map(|&x| t.label(x)).collect(),
                    weight: r.weight,
                    delivered: r.delivered,
                    comparisons: r.comparisons,
                });
            }
        }
        Ok(RoutesResponse { routes, summary })
    })
    .await
}

pub async fn build_metric(State(st): State<AppState>, Json(req): Json<MetricRequest>) -> Reply<MetricResponse> {
    blocking(move || {
        let (metric, tree) = match &req.metric {
            MetricSource::Text { text } => (FiniteMetric::parse(text)?, None),
            MetricSource::Tree { text } => {
                let t = WeightedTree::parse(text)?;
                (FiniteMetric::from_tree(&t)?, Some(t))
            }
        };
        let cover = match (&req.cover, &tree) {
            (CoverSource::Star, _) => star_cover(&metric)?,
            (CoverSource::SingleTree, Some(t)) => single_tree_cover(t)?,
            (CoverSource::SingleTree, None) => {
                return Err(ApiError::input("the single-tree cover needs a tree metric"))
            }
            (CoverSource::External { text, trees, check_coverage }, _) => {
                let cover = parse_cover(text, metric.len(), |name| {
                    trees
                        .get(name)
                        .cloned()
                        .ok_or_else(|| Error::input(format!("cover names tree file {name:?}, which was not sent")))
                })?;
                cover.validate(&metric, *check_coverage)?;
                cover
            }
        };
        let nav = MetricNavigator::new(&metric, &cover, req.k)?;
        let resp = MetricResponse {
            id: 0,
            n: metric.len(),
            k: req.k,
            zeta: cover.zeta(),
            gamma: cover.gamma,
            ramsey: cover.ramsey().is_some(),
            total_edges: nav.total_edges(),
            union_edges: nav.union_edges().len(),
            points: tree.map(|t| t.labels().to_vec()),
        };
        let points = resp.points.clone();
        let id = st.add_metric(MetricEntry { nav, points });
        Ok(MetricResponse { id, ..resp })
    })
    .await
}

fn point_pairs(n: usize, req: &PairsRequest<usize>) -> Vec<(usize, usize)> {
    if req.all {
        (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).collect()
    } else {
        req.pairs.clone()
    }
}

fn stretch(weight: f64, distance: f64) -> f64 {
    if distance > 0.0 {
        weight / distance
    } else {
        1.0
    }
}

pub async fn metric_paths(
    State(st): State<AppState>,
    Path(id): Path<u64>,
    Json(req): Json<PairsRequest<usize>>,
) -> Reply<MetricPathsResponse> {
    let e = st.metric(id)?;
    blocking(move || {
        let m = e.nav.metric();
        let mut summary = MetricPathSummary {
            max_stretch: 1.0,
            ..Default::default()
        };
        let mut paths = Vec::new();
        for (u, v) in point_pairs(m.len(), &req) {
            let p = e.nav.find_path(u, v)?;
            let d = m.dist(u, v);
            summary.queries += 1;
            summary.max_hops = summary.max_hops.max(p.hops());
            summary.max_stretch = summary.max_stretch.max(stretch(p.weight, d));
            summary.max_trees_scanned = summary.max_trees_scanned.max(p.trees_scanned);
            if req.detail {
                paths.push(MetricPathOut {
                    u,
                    v,
                    tree: p.tree,
                    hops: p.hops(),
                    vertices: p.vertices,
                    weight: p.weight,
                    distance: d,
                });
            }
        }
        Ok(MetricPathsResponse { paths, summary })
    })
    .await
}

pub async fn spt(State(st): State<AppState>, Path(id): Path<u64>, Json(req): Json<SptRequest>) -> Reply<SptResponse> {
    let e = st.metric(id)?;
    blocking(move || {
        let r = applications::approximate_spt(&e.nav, req.root, req.instrument)?;
        let m = e.nav.metric();
        let exact = m.row(req.root);
        let dist = (0..m.len())
            .map(|v| r.dist[v].ok_or_else(|| ApiError::internal(format!("point {v} unreached"))))
            .collect::<Result<Vec<_>, _>>()?;
        let max_stretch = dist.iter().zip(&exact).map(|(&d, &x)| stretch(d, x)).fold(1.0, f64::max);
        Ok(SptResponse {
            root: r.root,
            edges: r.edges(),
            dist,
            relaxations: r.relaxations,
            updates: r.updates,
            max_stretch,
        })
    })
    .await
}

pub async fn mst(State(st): State<AppState>, Path(id): Path<u64>) -> Reply<MstResponse> {
    let e = st.metric(id)?;
    blocking(move || {
        let r = applications::approximate_mst(&e.nav)?;
        Ok(MstResponse {
            edges: r.edges,
            weight: r.weight,
            base_weight: r.base_weight,
            union_edges: r.union_edges,
            gamma: e.nav.cover().gamma,
        })
    })
    .await
}

/// Largest ratio of graph distance to metric distance over all point pairs.
fn measured_stretch(m: &FiniteMetric, edges: &[(usize, usize, f64)]) -> f64 {
    let mut ids: BTreeMap<usize, usize> = (0..m.len()).map(|x| (x, x)).collect();
    for &(a, b, _) in edges {
        for x in [a, b] {
            let next = ids.len();
            ids.entry(x).or_insert(next);
        }
    }
    let g = Graph::from_edges(ids.len(), &edges.iter().map(|&(a, b, w)| (ids[&a], ids[&b], w)).collect::<Vec<_>>());
    let mut worst: f64 = 1.0;
    for a in 0..m.len() {
        let d = g.dijkstra(a, f64::INFINITY);
        let row = m.row(a);
        for b in a + 1..m.len() {
            worst = worst.max(stretch(d[b], row[b]));
        }
    }
    worst
}

pub async fn sparsify(State(st): State<AppState>, Path(id): Path<u64>, Json(req): Json<SparsifyRequest>) -> Reply<SparsifyResponse> {
    let e = st.metric(id)?;
    blocking(move || {
        let m = e.nav.metric();
        let g = match req.graph {
            GraphSource::Complete => complete_graph(m),
            GraphSource::Greedy { stretch } if stretch >= 1.0 => greedy_spanner(m, stretch),
            GraphSource::Greedy { stretch } => return Err(ApiError::input(format!("stretch {stretch} is below 1"))),
            GraphSource::Edges { edges } => edges,
        };
        let r = applications::sparsify(&e.nav, &g)?;
        let weight = |edges: &[(usize, usize, f64)]| edges.iter().map(|x| x.2).sum::<f64>();
        let max_replacement_ratio = g
            .iter()
            .zip(&r.replacement)
            .map(|(x, &w)| stretch(w, x.2))
            .fold(1.0, f64::max);
        Ok(SparsifyResponse {
            input_edges: g.len(),
            input_weight: weight(&g),
            weight: weight(&r.edges),
            max_replacement_ratio,
            input_stretch: req.measure.then(|| measured_stretch(m, &g)),
            stretch: req.measure.then(|| measured_stretch(m, &r.edges)),
            edges: r.edges,
        })
    })
    .await
}

pub async fn cover_routes(
    State(st): State<AppState>,
    Path(id): Path<u64>,
    Json(req): Json<CoverRoutesRequest>,
) -> Reply<CoverRoutesResponse> {
    let e = st.metric(id)?;
    blocking(move || {
        let m = e.nav.metric();
        let r = CoverRouting::new(m, e.nav.cover(), req.seed)?;
        let mut summary = CoverRouteSummary {
            max_stretch: 1.0,
            ..Default::default()
        };
        let mut routes = Vec::new();
        for (u, v) in point_pairs(m.len(), &req.pairs) {
            let tr = r.route(u, v)?;
            summary.routes += 1;
            summary.max_hops = summary.max_hops.max(tr.vertices.len().saturating_sub(1));
            if tr.delivered {
                summary.max_stretch = summary.max_stretch.max(stretch(tr.weight, m.dist(u, v)));
            } else {
                summary.undelivered += 1;
            }
            if req.pairs.detail {
                routes.push(CoverRouteOut {
                    u,
                    v,
                    tree: tr.tree,
                    vertices: tr.vertices,
                    weight: tr.weight,
                    delivered: tr.delivered,
                });
            }
        }
        Ok(CoverRoutesResponse { routes, summary })
    })
    .await
}
