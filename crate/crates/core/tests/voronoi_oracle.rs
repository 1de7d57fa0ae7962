mod common;

use std::collections::BTreeSet;

use cdk_core::kernel::distance;
use cdk_core::voronoi::{self, EdgeEnd};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn cells_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..150 {
        let n = 3 + trial % 10;
        let rmax = [1.5, 3.0, 5.0][trial % 3];
        let sites = common::random_sites(&mut rng, n, rmax);
        let d = voronoi::build(&sites).unwrap();
        let got: BTreeSet<Vec<usize>> = d
            .vertices
            .iter()
            .map(|v| {
                let mut s = v.sites.clone();
                s.sort();
                s
            })
            .collect();
        assert_eq!(got, common::brute_force_cells(&sites), "trial {trial}");
        assert!(voronoi::validate_empty_disk(&d).is_empty());
    }
}

#[test]
fn edge_points_are_nearest_to_their_sites() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..40 {
        let sites = common::random_sites(&mut rng, 14, 4.0);
        let d = voronoi::build(&sites).unwrap();
        for e in &d.edges {
            let [s, t] = e.sites;
            // a point on the edge: vertex midpoint or a point near an ideal end
            let p = match e.ends {
                [EdgeEnd::Vertex(a), EdgeEnd::Vertex(b)] => {
                    cdk_core::kernel::midpoint(&d.vertices[a].position, &d.vertices[b].position)
                }
                _ => continue,
            };
            let ds = distance(&p, &sites[s]);
            assert!((ds - distance(&p, &sites[t])).abs() < 1e-8);
            for (k, q) in sites.iter().enumerate() {
                if k != s && k != t {
                    assert!(distance(&p, q) > ds - 1e-9);
                }
            }
        }
        for ei in 0..d.edges.len() {
            if !d.edges[ei].is_compact() {
                voronoi::ideal_horocycle(&d, ei).unwrap();
            }
        }
    }
}
