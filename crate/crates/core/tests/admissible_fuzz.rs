mod common;

use cdk_core::admissible::{self, Membership, MinimizeOutcome, Variant};
use cdk_core::centered::{self, CellKind};
use cdk_core::{voronoi, Tolerances};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: Tolerances = Tolerances::DEFAULT;

#[test]
fn minimizer_certificates_and_bounds_on_random_trees() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut found = [0usize; 2];
    let mut multi_vertex = 0;
    for k in 0..160 {
        let variant = if k % 2 == 0 { Variant::Compact } else { Variant::Noncompact };
        let tree = admissible::random_tree(&mut rng, 5, 5, variant);
        let d: f64 = rng.gen_range(0.2..2.0);
        let frontier: Vec<f64> = (0..tree.frontier_count()).map(|_| rng.gen_range(d..3.0 * d)).collect();
        let res = admissible::minimize(&tree, &frontier, &TOL).unwrap();
        match res {
            MinimizeOutcome::Empty => {}
            MinimizeOutcome::Found(m) => {
                found[k % 2] += 1;
                if tree.vertex_count() > 1 {
                    multi_vertex += 1;
                }
                assert!(!m.certificates.is_empty(), "tree {k}: {tree:?} {m:?}");
                assert!(m.residual <= admissible::IMPROVEMENT, "tree {k}: residual {}", m.residual);
                let lb = admissible::lower_bound(&tree, d).unwrap();
                assert!(m.value >= lb - 1e-9, "tree {k}: {} < {lb}", m.value);
                assert_ne!(admissible::membership(&tree, &m.lengths, &TOL).unwrap().tag, Membership::Outside);
            }
        }
    }
    assert!(found[0] > 20 && found[1] > 20 && multi_vertex > 10, "{found:?} {multi_vertex}");
}

#[test]
fn one_edge_minimum_matches_grid_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    for _ in 0..60 {
        let nr = rng.gen_range(3..6);
        let nc = rng.gen_range(3..6);
        let tree = admissible::RootedTree::one_edge(nr, nc).unwrap();
        let d: f64 = rng.gen_range(0.3..1.5);
        let frontier: Vec<f64> = (0..tree.frontier_count()).map(|_| rng.gen_range(d..2.0 * d)).collect();
        let MinimizeOutcome::Found(m) = admissible::minimize(&tree, &frontier, &TOL).unwrap() else { continue };
        let b = admissible::outside_in(&tree, &frontier, &TOL).unwrap();
        let mut grid_best = f64::INFINITY;
        for i in 0..=2000 {
            let x = b.b[0] + (b.h[0] - b.b[0]) * i as f64 / 2000.0;
            let p = admissible::Lengths { edges: vec![x], frontier: frontier.clone() };
            if let Ok(v) = admissible::tree_defect(&tree, &p, &TOL) {
                grid_best = grid_best.min(v);
            }
        }
        assert!(m.value <= grid_best + 1e-9, "{} vs grid {grid_best}", m.value);
        checked += 1;
    }
    assert!(checked > 10, "{checked}");
}

#[test]
fn voronoi_tree_cells_are_admissible() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut seen = 0;
    for trial in 0..120 {
        let sites = common::random_sites(&mut rng, 6 + trial % 20, [2.0, 4.0][trial % 2]);
        let d = voronoi::build(&sites).unwrap();
        let f = centered::non_centered_forest(&d).unwrap();
        for cell in centered::build_cells(&d, &f) {
            if cell.kind != CellKind::TreeCell {
                continue;
            }
            let (tree, lengths) = admissible::tree_from_cell(&d, &f, &cell).unwrap();
            assert_eq!(tree.variant() == Variant::Compact, cell.is_compact());
            let rep = admissible::membership(&tree, &lengths, &TOL).unwrap();
            assert_ne!(rep.tag, Membership::Outside, "trial {trial}: {rep:?}");
            let dt = admissible::tree_defect(&tree, &lengths, &TOL).unwrap();
            let area = centered::cell_area(&d, &cell).unwrap();
            assert!((dt - area).abs() < 1e-9, "trial {trial}: {dt} vs {area}");
            seen += 1;
        }
    }
    assert!(seen > 20, "{seen}");
}
