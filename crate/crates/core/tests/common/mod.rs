#![allow(dead_code)]

use hopnav_core::cover::FiniteMetric;
use hopnav_core::{Vertex, WeightedTree};

/// Vertices of the tree path from `u` to `v`, walking parent pointers.
pub fn tree_path(t: &WeightedTree, u: Vertex, v: Vertex) -> Vec<Vertex> {
    let up = |mut x: Vertex| {
        let mut out = vec![x];
        while let Some(p) = t.parent(x) {
            out.push(p);
            x = p;
        }
        out
    };
    let (mut a, mut b) = (up(u), up(v));
    while a.len() > 1 && b.len() > 1 && a[a.len() - 2] == b[b.len() - 2] {
        a.pop();
        b.pop();
    }
    b.pop();
    a.extend(b.into_iter().rev());
    a
}

pub fn path_weight(t: &WeightedTree, path: &[Vertex]) -> f64 {
    path.windows(2)
        .map(|e| if t.parent(e[0]) == Some(e[1]) { t.parent_weight(e[0]) } else { t.parent_weight(e[1]) })
        .sum()
}

/// All-pairs shortest paths by Floyd-Warshall.
pub fn floyd(n: usize, edges: &[(usize, usize, f64)]) -> Vec<Vec<f64>> {
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for &(a, b, w) in edges {
        if w < d[a][b] {
            d[a][b] = w;
            d[b][a] = w;
        }
    }
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][m] + d[m][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Minimum spanning tree weight by Kruskal over all pairs.
pub fn kruskal_weight(m: &FiniteMetric) -> f64 {
    let n = m.len();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            pairs.push((m.dist(a, b), a, b));
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(c: &mut Vec<usize>, x: usize) -> usize {
        if c[x] != x {
            let r = find(c, c[x]);
            c[x] = r;
        }
        c[x]
    }
    let mut total = 0.0;
    for (w, a, b) in pairs {
        let (ra, rb) = (find(&mut comp, a), find(&mut comp, b));
        if ra != rb {
            comp[ra] = rb;
            total += w;
        }
    }
    total
}

/// `true` when `edges` form a spanning tree of `0..n` (ids beyond the
/// points may appear as extra vertices).
pub fn is_spanning_tree(points: usize, edges: &[(usize, usize, f64)]) -> bool {
    let mut ids: Vec<usize> = (0..points).collect();
    for &(a, b, _) in edges {
        ids.push(a);
        ids.push(b);
    }
    ids.sort();
    ids.dedup();
    if edges.len() + 1 != ids.len() {
        return false;
    }
    let pos = |x: usize| ids.binary_search(&x).unwrap();
    let d = floyd(ids.len(), &edges.iter().map(|&(a, b, w)| (pos(a), pos(b), w)).collect::<Vec<_>>());
    d[0].iter().all(|x| x.is_finite())
}

pub fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

/// Shortest-path distances among points `0..points` in a graph whose other
/// vertex ids may be sparse.
pub fn point_distances(points: usize, edges: &[(usize, usize, f64)]) -> Vec<Vec<f64>> {
    let mut ids: Vec<usize> = (0..points).collect();
    ids.extend(edges.iter().flat_map(|e| [e.0, e.1]));
    ids.sort();
    ids.dedup();
    let pos = |x: usize| ids.binary_search(&x).unwrap();
    let mut d = floyd(ids.len(), &edges.iter().map(|&(a, b, w)| (pos(a), pos(b), w)).collect::<Vec<_>>());
    d.truncate(points);
    for row in &mut d {
        row.truncate(points);
    }
    d
}
