//! Behavior of the two-sided bound report: population, serialization,
//! degenerate graphs, and the two hard-failure paths.

use approx::assert_abs_diff_eq;
use graph_spectra::{cheeger, mu0, CheegerMode, Graph, GraphKind};
use spectral_bounds::{
    a1, a2, buser_constant, sandwich_report, BoundReport, BoundsError, CellSpectra, GraphData,
};
use std::f64::consts::PI;

fn demo_cell() -> CellSpectra {
    CellSpectra {
        lambda0_neumann: 0.05,
        lambda1_neumann: 0.35,
        psi0_cuff: 0.3,
        cuff_length: 1.0,
        valence: 3,
        core_volume: 4.0 * PI,
    }
}

#[test]
fn report_populates_bounds_from_components() {
    let cell = demo_cell();
    let graph = GraphData {
        mu0: 0.4,
        h_lower: 0.35,
        h_upper: 0.8,
    };
    let report = sandwich_report(&cell, &graph, &[0.30, 0.22, 0.185]).unwrap();

    let eta = 0.35 - 0.05;
    assert_abs_diff_eq!(report.eta.value, eta, epsilon = 1e-15);
    let lower = 0.05 + a1(eta, 0.35, 1.0, 0.3) * 0.4;
    let upper = 0.05 + a2(3, 1.0, 0.05) * 0.8;
    assert_abs_diff_eq!(report.lower_bound.value, lower, epsilon = 1e-14);
    assert_abs_diff_eq!(report.upper_bound.value, upper, epsilon = 1e-14);
    // best approximant is the smallest Dirichlet value
    assert_eq!(report.measured_lambda0.value, 0.185);
    assert!(report.lower_holds);
    assert!(!report.degenerate_lower);
    // boundary length v*l over the core volume, scaled by R_2
    assert_abs_diff_eq!(
        report.buser_upper.value,
        buser_constant(2).unwrap() * 3.0 * 1.0 / (4.0 * PI),
        epsilon = 1e-14
    );
    assert!(report.lower_bound.value <= report.upper_bound.value);
}

#[test]
fn report_serializes_17_significant_digits() {
    let cell = demo_cell();
    let graph = GraphData {
        mu0: 0.4,
        h_lower: 0.35,
        h_upper: 0.8,
    };
    let report = sandwich_report(&cell, &graph, &[0.185]).unwrap();

    let header: Vec<&str> = BoundReport::csv_header().split(',').collect();
    let row = report.to_csv_row();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(header.len(), fields.len());

    // every tagged value round-trips exactly through its printed form
    for (name, tagged) in report.entries() {
        let idx = header.iter().position(|h| *h == name).unwrap();
        let parsed: f64 = fields[idx].parse().unwrap();
        assert_eq!(parsed, tagged.value, "column {name} fails to round-trip");
    }

    let text = report.to_text();
    assert!(text.contains("lower_bound"));
    assert!(text.contains("measured"));
    assert!(text.contains("closed_form"));
    assert!(text.contains("PASS"));
}

#[test]
fn degenerate_single_cell_report_collapses_to_cell_data() {
    // one-vertex ball: no edges, so mu0 = 0 and the exhaustive Cheeger
    // ratio is 0/1
    let ball = Graph::build(&GraphKind::Lattice { d: 1, radius: 0 }).unwrap();
    let mu = mu0(&ball, true).unwrap();
    let ch = cheeger(&ball, &CheegerMode::exhaustive()).unwrap();
    assert_eq!(mu.value, 0.0);
    assert_eq!(ch.upper, 0.0);

    let cell = demo_cell();
    let graph = GraphData {
        mu0: mu.value,
        h_lower: ch.lower,
        h_upper: ch.upper,
    };
    let report = sandwich_report(&cell, &graph, &[0.185]).unwrap();
    assert_eq!(report.lower_bound.value, cell.lambda0_neumann);
    assert_eq!(report.upper_bound.value, cell.lambda0_neumann);
}

#[test]
fn amenable_inputs_collapse_both_bounds_to_cell_value() {
    let cell = demo_cell();
    let graph = GraphData {
        mu0: 1e-9,
        h_lower: 0.0,
        h_upper: 1e-9,
    };
    let report = sandwich_report(&cell, &graph, &[0.0501]).unwrap();
    assert!((report.upper_bound.value - report.lower_bound.value).abs() < 1e-8);
    assert!((report.lower_bound.value - 0.05).abs() < 1e-8);
}

#[test]
fn report_hard_fails_when_lower_exceeds_dirichlet() {
    let cell = demo_cell();
    let graph = GraphData {
        mu0: 0.4,
        h_lower: 0.35,
        h_upper: 0.8,
    };
    let err = sandwich_report(&cell, &graph, &[0.02]).unwrap_err();
    assert!(matches!(err, BoundsError::LowerBoundExceedsMeasured { .. }));
}

#[test]
fn report_rejects_inconsistent_sandwich_inputs() {
    // inputs far outside the geometric regime force A1*mu0 > A2*h_upper
    let cell = CellSpectra {
        lambda0_neumann: 0.0,
        lambda1_neumann: 2.0,
        psi0_cuff: 2.0,
        cuff_length: 0.3,
        valence: 2,
        core_volume: 2.0 * PI,
    };
    let graph = GraphData {
        mu0: 1.0,
        h_lower: 1.0,
        h_upper: 1.0,
    };
    let err = sandwich_report(&cell, &graph, &[0.9]).unwrap_err();
    assert!(matches!(err, BoundsError::SandwichOrderViolated { .. }));
}

#[test]
fn report_requires_approximants_and_finite_inputs() {
    let cell = demo_cell();
    let graph = GraphData {
        mu0: 0.4,
        h_lower: 0.35,
        h_upper: 0.8,
    };
    assert!(matches!(
        sandwich_report(&cell, &graph, &[]).unwrap_err(),
        BoundsError::MissingField { .. }
    ));

    let mut bad = demo_cell();
    bad.psi0_cuff = f64::NAN;
    assert!(sandwich_report(&bad, &graph, &[0.185]).is_err());
}

#[test]
fn zero_cuff_trace_degenerates_lower_bound_with_warning_flag() {
    let mut cell = demo_cell();
    cell.psi0_cuff = 0.0;
    let graph = GraphData {
        mu0: 0.4,
        h_lower: 0.35,
        h_upper: 0.8,
    };
    let report = sandwich_report(&cell, &graph, &[0.185]).unwrap();
    assert!(report.degenerate_lower);
    assert_eq!(report.lower_bound.value, 0.05);
    assert!(report.to_text().contains("degenerate"));
}
