//! Request and response bodies of the HTTP/JSON interface.
//!
//! Tree vertices travel as their labels. Metric points are `0..n`; Steiner
//! vertices of cover trees appear under the ids described in
//! [`hopnav_core::cover`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use hopnav_core::applications::VerifyMode;
pub use hopnav_core::spanner::BuildStats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorKind {
    Input,
    NotFound,
    Violation,
    Internal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub kind: ErrorKind,
    pub message: String,
    /// Offending point pair for cover violations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlphaRequest {
    pub k: u32,
    pub n: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaResponse {
    pub k: u32,
    pub n: u64,
    pub alpha: u64,
    pub alpha_prime: u64,
    /// Edge lower bound on the uniform line, for `k` in {2, 3}.
    pub lower_bound: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenKind {
    UniformLine,
    RandomTree,
    RandomPoints,
    RandomMatrix,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenRequest {
    pub kind: GenKind,
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
    /// Largest edge weight of random trees.
    #[serde(default)]
    pub max_weight: Option<u64>,
    #[serde(default)]
    pub dim: Option<usize>,
    /// Coordinates of random points lie in `[0, side)`.
    #[serde(default)]
    pub side: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenResponse {
    pub text: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BuildRequest {
    /// Tree in the text format.
    pub tree: String,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildResponse {
    pub id: u64,
    pub n: usize,
    pub required: usize,
    pub k: usize,
    pub edges: usize,
    pub total_weight: f64,
    pub alpha_prime: u64,
    pub stats: BuildStats,
    pub millis: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeOut {
    pub u: u64,
    pub v: u64,
    pub weight: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpannerResponse {
    pub k: usize,
    pub edges: Vec<EdgeOut>,
}

/// Pairs to query, or every ordered pair of required vertices when `all`
/// is set. With `detail` off only the summary is returned.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairsRequest<T = u64> {
    #[serde(default = "Vec::new")]
    pub pairs: Vec<(T, T)>,
    #[serde(default)]
    pub all: bool,
    #[serde(default = "yes")]
    pub detail: bool,
}

fn yes() -> bool {
    true
}

impl<T> PairsRequest<T> {
    pub fn pairs(pairs: Vec<(T, T)>) -> Self {
        PairsRequest {
            pairs,
            all: false,
            detail: true,
        }
    }

    pub fn all(detail: bool) -> Self {
        PairsRequest {
            pairs: Vec::new(),
            all: true,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathOut {
    pub u: u64,
    pub v: u64,
    pub vertices: Vec<u64>,
    pub weight: f64,
    pub hops: usize,
    pub depth: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PathSummary {
    pub queries: usize,
    pub max_hops: usize,
    pub max_depth: usize,
    /// Paths whose weight differs from the tree distance.
    pub inexact: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathsResponse {
    pub paths: Vec<PathOut>,
    pub summary: PathSummary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SemigroupKind {
    Sum,
    Max,
    Min,
    /// Edge of weight `w` maps to `[[w mod 97, 1], [1, 0]]`.
    Mat2,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProductRequest {
    pub semigroup: SemigroupKind,
    #[serde(flatten)]
    pub pairs: PairsRequest,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProductValue {
    Number(f64),
    Matrix([[u32; 2]; 2]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductOut {
    pub u: u64,
    pub v: u64,
    /// Missing for `u = v`.
    pub value: Option<ProductValue>,
    pub ops: usize,
    pub hops: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProductResponse {
    pub results: Vec<ProductOut>,
    pub queries: usize,
    pub max_ops: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyRequest {
    /// `(u, v, weight)` of candidate non-tree edges.
    pub queries: Vec<(u64, u64, f64)>,
    pub mode: VerifyMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOut {
    pub u: u64,
    pub v: u64,
    pub weight: f64,
    /// The candidate is heavier than every tree edge it would close a cycle
    /// with, so the tree stays minimum.
    pub heavier: bool,
    pub path_max: f64,
    pub comparisons: usize,
    pub hops: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyResponse {
    pub results: Vec<VerifyOut>,
    pub max_comparisons: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RoutingRequest {
    pub tree: String,
    /// Seed of the port assignment.
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoutingResponse {
    pub id: u64,
    pub n: usize,
    pub max_entries: usize,
    pub max_bits: usize,
    /// `ceil(log2 n) + 2`.
    pub entry_bound: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteOut {
    pub u: u64,
    pub v: u64,
    pub vertices: Vec<u64>,
    pub weight: f64,
    pub delivered: bool,
    pub comparisons: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RouteSummary {
    pub routes: usize,
    pub max_hops: usize,
    pub undelivered: usize,
    /// Routes whose weight differs from the tree distance.
    pub inexact: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RoutesResponse {
    pub routes: Vec<RouteOut>,
    pub summary: RouteSummary,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MetricSource {
    /// `matrix` or `points` text.
    Text { text: String },
    /// Shortest-path metric of a tree; point `i` is the `i`-th vertex in
    /// breadth-first order.
    Tree { text: String },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CoverSource {
    Star,
    /// Only for tree metrics: the tree itself.
    SingleTree,
    /// A cover description with the contents of the tree files it names.
    External {
        text: String,
        trees: BTreeMap<String, String>,
        #[serde(default)]
        check_coverage: bool,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricRequest {
    pub metric: MetricSource,
    pub cover: CoverSource,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricResponse {
    pub id: u64,
    pub n: usize,
    pub k: usize,
    pub zeta: usize,
    pub gamma: f64,
    pub ramsey: bool,
    pub total_edges: usize,
    pub union_edges: usize,
    /// Tree labels of the points, for tree metrics.
    pub points: Option<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricPathOut {
    pub u: usize,
    pub v: usize,
    pub tree: usize,
    pub vertices: Vec<usize>,
    pub weight: f64,
    pub distance: f64,
    pub hops: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricPathSummary {
    pub queries: usize,
    pub max_hops: usize,
    pub max_stretch: f64,
    pub max_trees_scanned: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricPathsResponse {
    pub paths: Vec<MetricPathOut>,
    pub summary: MetricPathSummary,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SptRequest {
    pub root: usize,
    #[serde(default)]
    pub instrument: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SptResponse {
    pub root: usize,
    /// `(parent, child, weight)`.
    pub edges: Vec<(usize, usize, f64)>,
    /// Tree distance from the root to each point.
    pub dist: Vec<f64>,
    pub relaxations: usize,
    pub updates: usize,
    pub max_stretch: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MstResponse {
    pub edges: Vec<(usize, usize, f64)>,
    pub weight: f64,
    pub base_weight: f64,
    pub union_edges: usize,
    pub gamma: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GraphSource {
    Complete,
    Greedy { stretch: f64 },
    Edges { edges: Vec<(usize, usize, f64)> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SparsifyRequest {
    pub graph: GraphSource,
    /// Also measure all-pairs stretch of the input and output graphs.
    #[serde(default)]
    pub measure: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparsifyResponse {
    pub input_edges: usize,
    pub input_weight: f64,
    pub edges: Vec<(usize, usize, f64)>,
    pub weight: f64,
    /// Largest replacement-path weight over input edge weight.
    pub max_replacement_ratio: f64,
    pub input_stretch: Option<f64>,
    pub stretch: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverRoutesRequest {
    #[serde(default)]
    pub seed: u64,
    #[serde(flatten)]
    pub pairs: PairsRequest<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverRouteOut {
    pub u: usize,
    pub v: usize,
    pub tree: usize,
    pub vertices: Vec<usize>,
    pub weight: f64,
    pub delivered: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CoverRouteSummary {
    pub routes: usize,
    pub max_hops: usize,
    pub max_stretch: f64,
    pub undelivered: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverRoutesResponse {
    pub routes: Vec<CoverRouteOut>,
    pub summary: CoverRouteSummary,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchRequest {
    pub ns: Vec<usize>,
    pub ks: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub n: usize,
    pub k: usize,
    pub edges: usize,
    pub alpha_prime: u64,
    pub lower_bound: Option<f64>,
    /// `edges / (n * alpha_prime)`.
    pub ratio: f64,
    pub millis: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchResponse {
    pub records: Vec<BenchRecord>,
    /// Largest allowed ratio.
    pub constant: f64,
    pub violations: Vec<String>,
}
