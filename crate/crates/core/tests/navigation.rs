use hopnav_core::gen::random_tree;
use hopnav_core::payload::{Directed, Mat2, Semigroup};
use hopnav_core::spanner::build;
use hopnav_core::WeightedTree;

fn is_subsequence(sub: &[usize], of: &[usize]) -> bool {
    let mut it = of.iter();
    sub.iter().all(|x| it.any(|y| y == x))
}

fn check_all_pairs(t: &WeightedTree, k: usize) {
    let nav = build(t, k).unwrap();
    for e in nav.spanner().edges() {
        assert_eq!(e.weight, t.tree_distance(e.u, e.v).unwrap().0);
    }
    for u in 0..t.len() {
        let dist = t.distances_from(u);
        for v in 0..t.len() {
            let p = nav.find_path(u, v).unwrap();
            assert!(p.hops() <= k, "k={k} n={} ({u},{v}) -> {:?}", t.len(), p.vertices);
            assert_eq!(p.weight, dist[v], "({u},{v})");
            assert!(p.depth <= k / 2);
            let (_, tp) = t.tree_distance(u, v).unwrap();
            assert!(is_subsequence(&p.vertices, &tp.vertices), "{:?} vs {:?}", p.vertices, tp.vertices);
        }
    }
}

#[test]
fn all_pairs_on_random_trees() {
    for seed in 0..40u64 {
        let n = 1 + (seed as usize * 37) % 160;
        let t = random_tree(n, 20, seed).unwrap();
        for k in 2..=8 {
            check_all_pairs(&t, k);
        }
    }
}

#[test]
fn all_pairs_on_paths_and_stars() {
    for n in [2usize, 3, 4, 5, 9, 17, 64, 200] {
        let path = WeightedTree::path(&vec![1.0; n - 1]).unwrap();
        let star_edges: Vec<_> = (1..n as u64).map(|i| (0, i, i as f64)).collect();
        let star = WeightedTree::from_edges(0, &star_edges, None).unwrap();
        for k in 2..=8 {
            check_all_pairs(&path, k);
            check_all_pairs(&star, k);
        }
    }
}

#[test]
fn matrix_products_match_brute_force() {
    for seed in 0..6u64 {
        let t = random_tree(60 + seed as usize * 10, 96, 100 + seed).unwrap();
        let mat = |v: usize| {
            let w = t.parent_weight(v) as u32;
            Mat2([[w % 97, (w * 7 + 1) % 97], [(w * 3) % 97, 1]])
        };
        for k in 2..=6 {
            let nav = build(&t, k).unwrap();
            let ann = nav.annotate(|c, _| Some(Directed::edge(mat(c)))).unwrap();
            for u in 0..t.len() {
                for v in 0..t.len() {
                    let prod = nav.product(&ann, u, v, Some(Directed::edge(Mat2::identity()))).unwrap();
                    let (_, tp) = t.tree_distance(u, v).unwrap();
                    let mut brute = Mat2::identity();
                    for w in tp.vertices.windows(2) {
                        let child = if t.parent(w[0]) == Some(w[1]) { w[0] } else { w[1] };
                        brute = brute.op(&mat(child));
                    }
                    assert_eq!(prod.value.unwrap().forward, brute);
                    assert!(prod.ops + 1 <= k.max(1));
                }
            }
        }
    }
}

mod props {
    use super::*;
    use proptest::prelude::*;

    /// Parent choices, weights and a required mask for trees of up to 60
    /// vertices; vertex `i` hangs below some vertex `< i`.
    fn trees() -> impl Strategy<Value = (Vec<(u64, u64, f64)>, Vec<u64>)> {
        (2usize..60).prop_flat_map(|n| {
            (
                proptest::collection::vec((any::<prop::sample::Index>(), 1u32..50), n - 1),
                proptest::collection::vec(any::<bool>(), n),
            )
                .prop_map(move |(links, mask)| {
                    let edges = links
                        .iter()
                        .enumerate()
                        .map(|(i, (p, w))| (p.index(i + 1) as u64, i as u64 + 1, *w as f64))
                        .collect();
                    let mut required: Vec<u64> = (0..n as u64).filter(|&v| mask[v as usize]).collect();
                    if required.is_empty() {
                        required.push(0);
                    }
                    (edges, required)
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn required_pairs_get_exact_short_paths((edges, required) in trees(), k in 2usize..7) {
            let t = WeightedTree::from_edges(0, &edges, Some(&required)).unwrap();
            let nav = build(&t, k).unwrap();
            let req: Vec<_> = t.required().collect();
            for &u in &req {
                for &v in &req {
                    let p = nav.find_path(u, v).unwrap();
                    let (d, tp) = t.tree_distance(u, v).unwrap();
                    prop_assert!(p.hops() <= k);
                    prop_assert_eq!(p.weight, d);
                    prop_assert!(is_subsequence(&p.vertices, &tp.vertices));
                }
            }
        }
    }
}
