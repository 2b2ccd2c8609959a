mod common;

use common::*;
use hopnav_core::cover::{star_cover, FiniteMetric};
use hopnav_core::gen::{random_points, random_tree};
use hopnav_core::routing::{CoverRouting, RoutingScheme};

#[test]
fn two_hop_routes_are_exact() {
    for seed in 0..15 {
        let t = random_tree(2 + seed as usize * 9, 50, seed).unwrap();
        let bound = (t.len() as f64).log2().ceil() as usize + 2;
        for ports in 0..3 {
            let s = RoutingScheme::new(&t, ports).unwrap();
            assert!(s.audit().max_entries <= bound);
            for u in 0..t.len() {
                for v in 0..t.len() {
                    let r = s.route(u, v).unwrap();
                    assert!(r.delivered && r.hops() <= 2);
                    assert_eq!(r.vertices.first(), Some(&u));
                    assert_eq!(r.vertices.last(), Some(&v));
                    assert_eq!(r.weight, path_weight(&t, &tree_path(&t, u, v)));
                }
            }
        }
    }
}

#[test]
fn cover_routing_on_star_cover() {
    let m = FiniteMetric::from_points(random_points(20, 3, 100, 2).unwrap()).unwrap();
    let r = CoverRouting::new(&m, &star_cover(&m).unwrap(), 9).unwrap();
    for u in 0..m.len() {
        for v in 0..m.len() {
            let t = r.route(u, v).unwrap();
            assert!(t.delivered && t.vertices.len() <= 3);
            assert!(close(t.weight, m.dist(u, v)));
        }
    }
}
