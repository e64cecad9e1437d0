//! Behavior of the spectral estimators across growing ball families.

use graph_spectra::cheeger::cheeger;
use graph_spectra::{cheeger_inequality_check, mu0, CheegerMode, Graph, GraphKind};

#[test]
fn tree_ball_mu0_sequence_decreases_and_stays_above_cheeger_floor() {
    // Depth 2..6 balls of the 3-regular tree.  h is exact (enumerated) while
    // the interior fits the cap; beyond that the best-BFS-ball bound stands
    // in, which only raises the floor h^2/(2v) and strengthens the assertion.
    let mut last = f64::INFINITY;
    for d in 2..=6usize {
        let g = Graph::build(&GraphKind::RegularTree { v: 3, depth: d }).unwrap();
        let m = mu0(&g, true).unwrap().value;
        assert!(m < last, "depth {d}: {m} !< {last}");
        last = m;

        let h = if d <= 3 {
            cheeger(&g, &CheegerMode::exhaustive()).unwrap().upper
        } else {
            cheeger(&g, &CheegerMode::FolnerBalls { center: 0 }).unwrap().upper
        };
        // On tree balls the best ball is the whole interior: outermost
        // interior shell 3*2^(d-2) over interior size 3*2^(d-1) - 2.
        let shell = 3.0 * f64::powi(2.0, d as i32 - 2);
        let size = 3.0 * f64::powi(2.0, d as i32 - 1) - 2.0;
        assert!((h - shell / size).abs() < 1e-12, "depth {d}: h = {h}");
        assert!(m >= h * h / 6.0 - 1e-10, "depth {d}: mu0 = {m}, h = {h}");
    }
}

#[test]
fn one_dimensional_ball_ratios_shrink_toward_zero() {
    // Balls in Z have ratio 2/(2r - 1); the infimum over the family is 0.
    let mut last = f64::INFINITY;
    for radius in 2..=8usize {
        let g = Graph::build(&GraphKind::Lattice { d: 1, radius }).unwrap();
        let est = cheeger(&g, &CheegerMode::FolnerBalls { center: radius }).unwrap();
        let want = 2.0 / (2.0 * radius as f64 - 1.0);
        assert!((est.upper - want).abs() < 1e-15);
        assert!(est.upper < last);
        last = est.upper;
    }
}

#[test]
fn untagged_graph_gets_a_zero_cheeger_certificate() {
    // With no tagged shell the full vertex set has empty boundary, so both
    // estimators certify h = 0 (the finite-graph face of amenability).
    let edges = [(0usize, 1usize), (1, 2), (2, 3), (3, 0)];
    let g = Graph::new(4, &edges, &[], Some(2)).unwrap();
    let ex = cheeger(&g, &CheegerMode::exhaustive()).unwrap();
    assert_eq!(ex.upper, 0.0);
    assert_eq!(ex.ratio_counts, (0, 4));
    assert_eq!(ex.witness_subset.as_ref().unwrap(), &vec![0, 1, 2, 3]);

    let fo = cheeger(&g, &CheegerMode::FolnerBalls { center: 0 }).unwrap();
    assert_eq!(fo.upper, 0.0);
}

#[test]
fn exhaustive_result_is_independent_of_thread_count() {
    let g = Graph::build(&GraphKind::Lattice { d: 2, radius: 3 }).unwrap();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| cheeger(&g, &CheegerMode::exhaustive()).unwrap())
    };
    let a = run(1);
    let b = run(4);
    assert_eq!(a.upper.to_bits(), b.upper.to_bits());
    assert_eq!(a.ratio_counts, b.ratio_counts);
    assert_eq!(a.witness_subset, b.witness_subset);
}

#[test]
fn sandwich_family_for_acceptance_runs_clean() {
    // Five 1-D balls (valence 2) and a 2x5 ladder (valence 3): the full
    // two-sided inequality holds on each.
    let mut graphs: Vec<Graph> = (2..=6)
        .map(|radius| Graph::build(&GraphKind::Lattice { d: 1, radius }).unwrap())
        .collect();
    let mut edges = Vec::new();
    for i in 0..5usize {
        edges.push((2 * i, 2 * i + 1));
        if i + 1 < 5 {
            edges.push((2 * i, 2 * (i + 1)));
            edges.push((2 * i + 1, 2 * (i + 1) + 1));
        }
    }
    graphs.push(Graph::new(10, &edges, &[0, 1, 8, 9], Some(3)).unwrap());

    for (i, g) in graphs.iter().enumerate() {
        let rep = cheeger_inequality_check(g)
            .unwrap_or_else(|e| panic!("graph {i}: {e}"));
        assert!(rep.lower <= rep.mu0 + 1e-10 && rep.mu0 <= rep.h + 1e-10);
    }
}
