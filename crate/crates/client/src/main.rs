//! `hopnav`: command-line client of the hop-spanner service. Without
//! `--server` an embedded service is started on a loopback port.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hopnav_client::{Client, ClientError};
use hopnav_service::api::*;

#[derive(Parser)]
#[command(name = "hopnav", version, about = "Low-hop spanners for tree metrics and their applications")]
struct Cli {
    /// Service root URL; an embedded service is used when absent.
    #[arg(long, global = true)]
    server: Option<String>,
    /// Seed for generators and port assignments.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Inverse Ackermann values and the uniform-line edge lower bound.
    Alpha {
        #[arg(short)]
        k: u32,
        #[arg(short, required = true, num_args = 1..)]
        n: Vec<u64>,
    },
    /// Generate an instance file.
    Gen {
        #[arg(value_enum)]
        kind: GenArg,
        #[arg(short)]
        n: usize,
        #[arg(long)]
        max_weight: Option<u64>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        side: Option<u64>,
    },
    /// Build a spanner and report its size.
    Build {
        #[command(flatten)]
        tree: TreeArgs,
        /// Print the edge list.
        #[arg(long)]
        edges: bool,
    },
    /// Spanner paths between tree vertices.
    Query {
        #[command(flatten)]
        tree: TreeArgs,
        #[command(flatten)]
        pairs: PairArgs,
    },
    /// Two-hop routes on a tree, or through a Ramsey cover of a metric.
    Route {
        /// Tree file; otherwise the metric options select a cover.
        #[arg(long, conflicts_with_all = ["metric", "tree_metric"])]
        tree: Option<PathBuf>,
        #[command(flatten)]
        metric: OptionalMetricArgs,
        #[command(flatten)]
        pairs: PairArgs,
    },
    /// Approximate shortest-path tree from a root point.
    Spt {
        #[command(flatten)]
        metric: MetricArgs,
        #[arg(long)]
        root: usize,
        /// Check the tree invariants after every relaxation.
        #[arg(long)]
        instrument: bool,
    },
    /// Approximate minimum spanning tree.
    Mst {
        #[command(flatten)]
        metric: MetricArgs,
    },
    /// Replace every edge of a graph over the points by its spanner path.
    Sparsify {
        #[command(flatten)]
        metric: MetricArgs,
        /// `complete`, `greedy`, or an edge-list file of `u v w` lines.
        #[arg(long, default_value = "complete")]
        graph: String,
        /// Stretch of the greedy input graph.
        #[arg(long, default_value_t = 3.0)]
        stretch: f64,
        /// Measure all-pairs stretch of input and output.
        #[arg(long)]
        measure: bool,
    },
    /// Check candidate non-tree edges against tree path maxima.
    VerifyMst {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Basic)]
        mode: ModeArg,
        /// File of `u v w` lines.
        #[arg(long)]
        queries: Option<PathBuf>,
        /// One candidate edge `u v w`; repeatable.
        #[arg(long, num_args = 3, value_names = ["U", "V", "W"])]
        query: Vec<String>,
    },
    /// Semigroup products of edge weights along tree paths.
    Product {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long, value_enum)]
        semigroup: SemigroupArg,
        #[command(flatten)]
        pairs: PairArgs,
    },
    /// Spanner sizes on uniform lines against the size bounds.
    Bench {
        #[arg(short, value_delimiter = ',', num_args = 0..)]
        n: Vec<usize>,
        #[arg(short, value_delimiter = ',', num_args = 0..)]
        k: Vec<usize>,
    },
    /// Run the service in the foreground.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: std::net::SocketAddr,
    },
}

#[derive(Args)]
struct TreeArgs {
    /// Tree file.
    #[arg(long)]
    tree: PathBuf,
    #[arg(short, default_value_t = 2)]
    k: usize,
}

#[derive(Args)]
struct PairArgs {
    /// A vertex pair `u v`; repeatable.
    #[arg(long, num_args = 2, value_names = ["U", "V"])]
    pair: Vec<u64>,
    /// Every ordered pair; prints only the summary unless `--detail`.
    #[arg(long)]
    all: bool,
    #[arg(long)]
    detail: bool,
}

impl PairArgs {
    fn request(&self) -> Result<PairsRequest, Failure> {
        if self.all {
            Ok(PairsRequest::all(self.detail))
        } else if self.pair.is_empty() {
            Err(Failure::Input("give --pair u v or --all".into()))
        } else {
            Ok(PairsRequest::pairs(self.pair.chunks(2).map(|c| (c[0], c[1])).collect()))
        }
    }

    fn points(&self) -> Result<PairsRequest<usize>, Failure> {
        let r = self.request()?;
        Ok(PairsRequest {
            pairs: r.pairs.into_iter().map(|(a, b)| (a as usize, b as usize)).collect(),
            all: r.all,
            detail: r.detail,
        })
    }
}

#[derive(Args)]
struct MetricArgs {
    /// Metric file (`matrix n` or `points n d`).
    #[arg(long, conflicts_with = "tree_metric", required_unless_present = "tree_metric")]
    metric: Option<PathBuf>,
    /// Tree file whose shortest-path metric is used.
    #[arg(long)]
    tree_metric: Option<PathBuf>,
    /// `star`, `single-tree`, or a cover file.
    #[arg(long, default_value = "star")]
    cover: String,
    /// Also require every pair to be covered within the declared stretch.
    #[arg(long)]
    check_coverage: bool,
    #[arg(short, default_value_t = 2)]
    k: usize,
}

#[derive(Args)]
struct OptionalMetricArgs {
    #[arg(long, conflicts_with = "tree_metric")]
    metric: Option<PathBuf>,
    #[arg(long)]
    tree_metric: Option<PathBuf>,
    #[arg(long, default_value = "star")]
    cover: String,
    #[arg(long)]
    check_coverage: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenArg {
    UniformLine,
    RandomTree,
    RandomPoints,
    RandomMatrix,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Basic,
    Ranked,
}

#[derive(Clone, Copy, ValueEnum)]
enum SemigroupArg {
    Sum,
    Max,
    Min,
    Mat2,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Violation(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Violation(_) => 3,
            Failure::Internal(_) => 4,
        }
    }
}

impl From<ClientError> for Failure {
    fn from(e: ClientError) -> Self {
        let msg = e.to_string();
        match e.kind() {
            ErrorKind::Input | ErrorKind::NotFound => Failure::Input(msg),
            ErrorKind::Violation => Failure::Violation(msg),
            ErrorKind::Internal => Failure::Internal(msg),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn metric_request(
    metric: &Option<PathBuf>,
    tree_metric: &Option<PathBuf>,
    cover: &str,
    check_coverage: bool,
    k: usize,
) -> Result<MetricRequest, Failure> {
    let metric = match (metric, tree_metric) {
        (Some(p), _) => MetricSource::Text { text: read(p)? },
        (None, Some(p)) => MetricSource::Tree { text: read(p)? },
        (None, None) => return Err(Failure::Input("give --metric or --tree-metric".into())),
    };
    let cover = match cover {
        "star" => CoverSource::Star,
        "single-tree" => CoverSource::SingleTree,
        path => {
            let path = Path::new(path);
            let text = read(path)?;
            let dir = path.parent().unwrap_or(Path::new("."));
            let (_, zeta) = cover_header(&text)?;
            let mut trees = BTreeMap::new();
            for name in text
                .lines()
                .map(|l| l.split('#').next().unwrap_or("").trim())
                .filter(|l| !l.is_empty())
                .skip(1)
                .take(zeta)
            {
                trees.insert(name.to_string(), read(&dir.join(name))?);
            }
            CoverSource::External {
                text,
                trees,
                check_coverage,
            }
        }
    };
    Ok(MetricRequest { metric, cover, k })
}

fn cover_header(text: &str) -> Result<(String, usize), Failure> {
    let head = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .ok_or_else(|| Failure::Input("empty cover file".into()))?;
    let parts: Vec<&str> = head.split_whitespace().collect();
    let zeta = parts
        .get(1)
        .and_then(|z| z.parse().ok())
        .ok_or_else(|| Failure::Input("cover header must be `gamma zeta [ramsey]`".into()))?;
    Ok((parts[0].to_string(), zeta))
}

fn parse_triples(text: &str) -> Result<Vec<(u64, u64, f64)>, Failure> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .map(|(ln, l)| {
            let p: Vec<&str> = l.split_whitespace().collect();
            let bad = || Failure::Input(format!("line {ln}: expected `u v w`"));
            if p.len() != 3 {
                return Err(bad());
            }
            Ok((
                p[0].parse().map_err(|_| bad())?,
                p[1].parse().map_err(|_| bad())?,
                p[2].parse().map_err(|_| bad())?,
            ))
        })
        .collect()
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn edge_lines(out: &mut String, csv: bool, edges: &[(usize, usize, f64)]) {
    if csv {
        out.push_str("u,v,weight\n");
    }
    for (a, b, w) in edges {
        if csv {
            writeln!(out, "{a},{b},{w}").unwrap();
        } else {
            writeln!(out, "{a} {b} {w}").unwrap();
        }
    }
}

async fn run(cli: &Cli, client: &Client) -> Result<String, Failure> {
    let csv = cli.format == Format::Csv;
    let mut out = String::new();
    match &cli.command {
        Command::Alpha { k, n } => {
            if csv {
                out.push_str("k,n,alpha,alpha_prime,lower_bound\n");
            }
            for &n in n {
                let a = client.alpha(*k, n).await?;
                let lb = a.lower_bound.map(|x| x.to_string()).unwrap_or_default();
                if csv {
                    writeln!(out, "{},{},{},{},{lb}", a.k, a.n, a.alpha, a.alpha_prime).unwrap();
                } else {
                    write!(out, "alpha_{k}({n}) = {}  alpha'_{k}({n}) = {}", a.alpha, a.alpha_prime).unwrap();
                    if !lb.is_empty() {
                        write!(out, "  lower bound {lb}").unwrap();
                    }
                    out.push('\n');
                }
            }
        }
        Command::Gen { kind, n, max_weight, dim, side } => {
            let kind = match kind {
                GenArg::UniformLine => GenKind::UniformLine,
                GenArg::RandomTree => GenKind::RandomTree,
                GenArg::RandomPoints => GenKind::RandomPoints,
                GenArg::RandomMatrix => GenKind::RandomMatrix,
            };
            let req = GenRequest {
                kind,
                n: *n,
                seed: cli.seed,
                max_weight: *max_weight,
                dim: *dim,
                side: *side,
            };
            out = client.generate(&req).await?.text;
        }
        Command::Build { tree, edges } => {
            let b = client.build_tree(&read(&tree.tree)?, tree.k).await?;
            if *edges {
                let sp = client.spanner(b.id).await?;
                let list: Vec<_> = sp.edges.iter().map(|e| (e.u as usize, e.v as usize, e.weight)).collect();
                edge_lines(&mut out, csv, &list);
            } else if csv {
                out.push_str("n,required,k,edges,total_weight,alpha_prime,regular,composite,base,structures,millis\n");
                let s = b.stats;
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{:.3}",
                    b.n, b.required, b.k, b.edges, b.total_weight, b.alpha_prime, s.regular_nodes,
                    s.composite_nodes, s.base_nodes, s.structures, b.millis
                )
                .unwrap();
            } else {
                writeln!(out, "vertices {} (required {}), k = {}", b.n, b.required, b.k).unwrap();
                writeln!(out, "edges {} (alpha'_k = {}), total weight {}", b.edges, b.alpha_prime, b.total_weight).unwrap();
                writeln!(
                    out,
                    "recursion: {} regular, {} composite, {} base nodes in {} structures; built in {:.3} ms",
                    b.stats.regular_nodes, b.stats.composite_nodes, b.stats.base_nodes, b.stats.structures, b.millis
                )
                .unwrap();
            }
        }
        Command::Query { tree, pairs } => {
            let b = client.build_tree(&read(&tree.tree)?, tree.k).await?;
            let r = client.tree_paths(b.id, &pairs.request()?).await?;
            if csv {
                out.push_str("u,v,weight,hops,depth,vertices\n");
            }
            for p in &r.paths {
                if csv {
                    writeln!(out, "{},{},{},{},{},{}", p.u, p.v, p.weight, p.hops, p.depth, join(&p.vertices)).unwrap();
                } else {
                    writeln!(out, "{} -> {}: {} (weight {}, {} hops)", p.u, p.v, join(&p.vertices), p.weight, p.hops).unwrap();
                }
            }
            let s = &r.summary;
            if !csv {
                writeln!(
                    out,
                    "{} queries, max hops {}, max depth {}, inexact {}",
                    s.queries, s.max_hops, s.max_depth, s.inexact
                )
                .unwrap();
            }
            if s.inexact > 0 || s.max_hops > tree.k {
                return Err(Failure::Violation(format!("{out}path property violated")));
            }
        }
        Command::Route { tree: Some(path), pairs, .. } => {
            let r = client.build_routing(&read(path)?, cli.seed).await?;
            let routes = client.routes(r.id, &pairs.request()?).await?;
            if csv {
                out.push_str("u,v,weight,delivered,comparisons,vertices\n");
            }
            for x in &routes.routes {
                if csv {
                    writeln!(out, "{},{},{},{},{},{}", x.u, x.v, x.weight, x.delivered, x.comparisons, join(&x.vertices)).unwrap();
                } else {
                    writeln!(out, "{} -> {}: {} (weight {}, {} comparisons)", x.u, x.v, join(&x.vertices), x.weight, x.comparisons).unwrap();
                }
            }
            let s = &routes.summary;
            if !csv {
                writeln!(
                    out,
                    "{} routes, max hops {}, undelivered {}, inexact {}; table entries {} <= {}, {} bits",
                    s.routes, s.max_hops, s.undelivered, s.inexact, r.max_entries, r.entry_bound, r.max_bits
                )
                .unwrap();
            }
            if s.undelivered > 0 || s.inexact > 0 || s.max_hops > 2 || r.max_entries > r.entry_bound {
                return Err(Failure::Violation(format!("{out}routing property violated")));
            }
        }
        Command::Route { tree: None, metric, pairs } => {
            let req = metric_request(&metric.metric, &metric.tree_metric, &metric.cover, metric.check_coverage, 2)?;
            let m = client.build_metric(&req).await?;
            let routes = client
                .cover_routes(m.id, &CoverRoutesRequest { seed: cli.seed, pairs: pairs.points()? })
                .await?;
            if csv {
                out.push_str("u,v,tree,weight,delivered,vertices\n");
            }
            for x in &routes.routes {
                if csv {
                    writeln!(out, "{},{},{},{},{},{}", x.u, x.v, x.tree, x.weight, x.delivered, join(&x.vertices)).unwrap();
                } else {
                    writeln!(out, "{} -> {} via tree {}: {} (weight {})", x.u, x.v, x.tree, join(&x.vertices), x.weight).unwrap();
                }
            }
            let s = &routes.summary;
            if !csv {
                writeln!(out, "{} routes, max hops {}, max stretch {}, undelivered {}", s.routes, s.max_hops, s.max_stretch, s.undelivered).unwrap();
            }
            if s.undelivered > 0 || s.max_hops > 2 || s.max_stretch > m.gamma * (1.0 + 1e-12) {
                return Err(Failure::Violation(format!("{out}routing property violated")));
            }
        }
        Command::Spt { metric, root, instrument } => {
            let m = client.build_metric(&metric_request(&metric.metric, &metric.tree_metric, &metric.cover, metric.check_coverage, metric.k)?).await?;
            let r = client.spt(m.id, *root, *instrument).await?;
            edge_lines(&mut out, csv, &r.edges);
            if !csv {
                writeln!(out, "distances: {}", join(&r.dist)).unwrap();
                writeln!(out, "relaxations {}, updates {}, max stretch {} (gamma {})", r.relaxations, r.updates, r.max_stretch, m.gamma).unwrap();
            }
        }
        Command::Mst { metric } => {
            let m = client.build_metric(&metric_request(&metric.metric, &metric.tree_metric, &metric.cover, metric.check_coverage, metric.k)?).await?;
            let r = client.mst(m.id).await?;
            edge_lines(&mut out, csv, &r.edges);
            if !csv {
                writeln!(
                    out,
                    "weight {} vs exact MST {} (gamma {}); {} union edges",
                    r.weight, r.base_weight, r.gamma, r.union_edges
                )
                .unwrap();
            }
        }
        Command::Sparsify { metric, graph, stretch, measure } => {
            let m = client.build_metric(&metric_request(&metric.metric, &metric.tree_metric, &metric.cover, metric.check_coverage, metric.k)?).await?;
            let graph = match graph.as_str() {
                "complete" => GraphSource::Complete,
                "greedy" => GraphSource::Greedy { stretch: *stretch },
                path => GraphSource::Edges {
                    edges: parse_triples(&read(Path::new(path))?)?
                        .into_iter()
                        .map(|(a, b, w)| (a as usize, b as usize, w))
                        .collect(),
                },
            };
            let r = client.sparsify(m.id, &SparsifyRequest { graph, measure: *measure }).await?;
            edge_lines(&mut out, csv, &r.edges);
            if !csv {
                writeln!(
                    out,
                    "input {} edges, weight {}; output {} edges, weight {}; max replacement ratio {}",
                    r.input_edges,
                    r.input_weight,
                    r.edges.len(),
                    r.weight,
                    r.max_replacement_ratio
                )
                .unwrap();
                if let (Some(a), Some(b)) = (r.input_stretch, r.stretch) {
                    writeln!(out, "stretch: input {a}, output {b}").unwrap();
                }
            }
        }
        Command::VerifyMst { tree, mode, queries, query } => {
            let mut qs = match queries {
                Some(p) => parse_triples(&read(p)?)?,
                None => Vec::new(),
            };
            qs.extend(parse_triples(&query.chunks(3).map(|c| c.join(" ")).collect::<Vec<_>>().join("\n"))?);
            if qs.is_empty() {
                return Err(Failure::Input("give --query u v w or --queries FILE".into()));
            }
            let mode = match mode {
                ModeArg::Basic => VerifyMode::Basic,
                ModeArg::Ranked => VerifyMode::Ranked,
            };
            let b = client.build_tree(&read(&tree.tree)?, tree.k).await?;
            let r = client.verify(b.id, &VerifyRequest { queries: qs, mode }).await?;
            if csv {
                out.push_str("u,v,weight,heavier,path_max,comparisons,hops\n");
            }
            for x in &r.results {
                if csv {
                    writeln!(out, "{},{},{},{},{},{},{}", x.u, x.v, x.weight, x.heavier, x.path_max, x.comparisons, x.hops).unwrap();
                } else {
                    let verdict = if x.heavier { "heavier" } else { "not heavier" };
                    writeln!(out, "({}, {}, {}): {verdict} than path max {} ({} comparisons)", x.u, x.v, x.weight, x.path_max, x.comparisons).unwrap();
                }
            }
            let budget = match mode {
                VerifyMode::Ranked if tree.k % 2 == 0 => tree.k - 1,
                _ => tree.k,
            };
            if !csv {
                writeln!(out, "max comparisons {} (budget {budget})", r.max_comparisons).unwrap();
            }
            if r.max_comparisons > budget {
                return Err(Failure::Violation(format!("{out}comparison budget exceeded")));
            }
        }
        Command::Product { tree, semigroup, pairs } => {
            let semigroup = match semigroup {
                SemigroupArg::Sum => SemigroupKind::Sum,
                SemigroupArg::Max => SemigroupKind::Max,
                SemigroupArg::Min => SemigroupKind::Min,
                SemigroupArg::Mat2 => SemigroupKind::Mat2,
            };
            let b = client.build_tree(&read(&tree.tree)?, tree.k).await?;
            let r = client.products(b.id, &ProductRequest { semigroup, pairs: pairs.request()? }).await?;
            if csv {
                out.push_str("u,v,value,ops,hops\n");
            }
            for x in &r.results {
                let value = match &x.value {
                    None => "-".to_string(),
                    Some(ProductValue::Number(v)) => v.to_string(),
                    Some(ProductValue::Matrix(m)) => format!("[[{} {}] [{} {}]]", m[0][0], m[0][1], m[1][0], m[1][1]),
                };
                if csv {
                    writeln!(out, "{},{},{value},{},{}", x.u, x.v, x.ops, x.hops).unwrap();
                } else {
                    writeln!(out, "{} -> {}: {value} ({} ops)", x.u, x.v, x.ops).unwrap();
                }
            }
            if !csv {
                writeln!(out, "{} queries, max ops {}", r.queries, r.max_ops).unwrap();
            }
            if r.max_ops >= tree.k.max(1) {
                return Err(Failure::Violation(format!("{out}operation budget exceeded")));
            }
        }
        Command::Bench { n, k } => {
            let r = client.bench(n.clone(), k.clone()).await?;
            if csv {
                out.push_str("n,k,edges,alpha_prime,lower_bound,ratio,millis\n");
            } else if !r.records.is_empty() {
                writeln!(out, "{:>8} {:>3} {:>9} {:>7} {:>12} {:>7} {:>10}", "n", "k", "edges", "alpha'", "lower bound", "ratio", "ms").unwrap();
            }
            for x in &r.records {
                let lb = x.lower_bound.map(|v| format!("{v:.1}")).unwrap_or_default();
                if csv {
                    writeln!(out, "{},{},{},{},{lb},{:.4},{:.3}", x.n, x.k, x.edges, x.alpha_prime, x.ratio, x.millis).unwrap();
                } else {
                    writeln!(out, "{:>8} {:>3} {:>9} {:>7} {:>12} {:>7.3} {:>10.3}", x.n, x.k, x.edges, x.alpha_prime, lb, x.ratio, x.millis).unwrap();
                }
            }
            if !r.violations.is_empty() {
                return Err(Failure::Violation(format!("{out}{}", r.violations.join("\n"))));
            }
        }
        Command::Serve { .. } => unreachable!("handled before connecting"),
    }
    Ok(out)
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

async fn main_async(cli: Cli) -> Result<(), Failure> {
    if let Command::Serve { addr } = cli.command {
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .map_err(|e| Failure::Input(format!("cannot bind {addr}: {e}")))?;
        eprintln!("listening on {}", listener.local_addr().map_err(|e| Failure::Internal(e.to_string()))?);
        return hopnav_service::serve(listener).await.map_err(|e| Failure::Internal(e.to_string()));
    }
    let (client, _server) = match &cli.server {
        Some(url) => (Client::new(url.clone()), None),
        None => {
            let (addr, handle) = hopnav_service::spawn(([127, 0, 0, 1], 0).into())
                .await
                .map_err(|e| Failure::Internal(format!("cannot start the embedded service: {e}")))?;
            (Client::new(format!("http://{addr}")), Some(handle))
        }
    };
    match run(&cli, &client).await {
        Ok(text) => emit(&cli, &text),
        Err(Failure::Violation(text)) => {
            // partial output still helps locate the violation
            let (body, reason) = text.rsplit_once('\n').unwrap_or(("", &text));
            if !body.is_empty() {
                emit(&cli, &format!("{body}\n"))?;
            }
            Err(Failure::Violation(reason.to_string()))
        }
        Err(e) => Err(e),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let rt = match tokio::runtime::Builder::new_multi_thread().enable_all().build() {
        Ok(rt) => rt,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(4);
        }
    };
    match rt.block_on(main_async(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = match &e {
                Failure::Input(m) | Failure::Violation(m) | Failure::Internal(m) => m,
            };
            eprintln!("error: {msg}");
            ExitCode::from(e.code())
        }
    }
}
