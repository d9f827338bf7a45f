//! Shared fixtures for the benchmarks.

use std::sync::Arc;

use ssf_core::geometry::discretize_curve;
use ssf_core::{AlphaSpec, BoundaryGrid, Curve2D, SsfSetup, WeylMode};

pub fn circle_grid(n: usize) -> Arc<BoundaryGrid> {
    Arc::new(discretize_curve(&Curve2D::circle(1.0), n).expect("circle discretizes"))
}

pub fn ellipse_grid(n: usize) -> Arc<BoundaryGrid> {
    Arc::new(discretize_curve(&Curve2D::ellipse(1.0, 0.6), n).expect("ellipse discretizes"))
}

pub fn negative_setup(n: usize) -> SsfSetup {
    SsfSetup::from_grid(circle_grid(n), AlphaSpec::constant(-2.0), WeylMode::AlphaNegative).expect("valid regime")
}
