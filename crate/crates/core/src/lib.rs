//! Spectral shift functions for Schrödinger operators with δ-interactions
//! supported on closed curves, computed from boundary integral operators and
//! logarithms of dissipative Weyl functions.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod layer;
pub mod linalg;
pub mod oplog;
pub mod oracles;
pub mod specfun;
pub mod ssf;
pub mod triple_lab;
pub mod weyl;

pub use error::{Result, SsfError};
pub use faer::{c64, Mat};
pub use geometry::{AlphaSpec, BoundaryGrid, Curve2D, FourierSeries};
pub use layer::BoundaryOperator;
pub use oplog::LogRoute;
pub use oracles::OracleGeometry;
pub use specfun::{ComplexEnergy, Dimension};
pub use ssf::{EpsSchedule, SsfCurve, SsfPoint, SsfSetup, TraceReport, ValidateOptions};
pub use triple_lab::{FuzzReport, FuzzSizes, FuzzThresholds, KreinModel};
pub use weyl::{WeylConfig, WeylMode};
