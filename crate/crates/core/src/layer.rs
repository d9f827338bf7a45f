//! Nyström discretization of the two-dimensional single-layer operator
//! `(E(z)φ)(x) = ∫_C G(z, x, y) φ(y) dσ(y)` and of its `z`-derivative.
//!
//! The parametrized kernel is split as
//! `G(x(t), x(τ)) = A(t, τ) ln(4 sin²((t-τ)/2)) + B(t, τ)` with
//! `A = -J_0(wr)/(4π)`. The logarithmic part is integrated with the periodic
//! product rule
//! `R_j(t) = -(2π/n) Σ_{m=1}^{n-1} cos(m(t-t_j))/m - (π/n²) cos(n(t-t_j))`
//! (`N = 2n` nodes), the smooth part with the trapezoid rule. On the diagonal
//! `B(t, t) = i/4 - γ/(2π) - ln(w|x'(t)|/2)/(2π)`.
//!
//! Matrices are stored in the symmetrized form `W^{1/2} K W^{1/2}`, where `K`
//! holds the kernel values (log part folded in) and `W = diag(w_j)`.

use std::f64::consts::PI;
use std::sync::Arc;

use faer::{c64, Mat, MatRef};
use rayon::prelude::*;

use crate::error::{Result, SsfError};
use crate::geometry::BoundaryGrid;
use crate::specfun::{kernel_bessel, ComplexEnergy, EULER_GAMMA};

const I: c64 = c64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorRole {
    SingleLayer,
    SingleLayerDz,
    Weyl,
    WeylDz,
    Log,
}

/// Dense operator on boundary samples, in the symmetrized convention.
#[derive(Debug, Clone)]
pub struct BoundaryOperator {
    matrix: Mat<c64>,
    grid: Arc<BoundaryGrid>,
    energy: ComplexEnergy,
    role: OperatorRole,
}

impl BoundaryOperator {
    pub fn new(matrix: Mat<c64>, grid: Arc<BoundaryGrid>, energy: ComplexEnergy, role: OperatorRole) -> Self {
        assert_eq!(matrix.nrows(), grid.len());
        assert_eq!(matrix.ncols(), grid.len());
        Self { matrix, grid, energy, role }
    }

    pub fn matrix(&self) -> MatRef<'_, c64> {
        self.matrix.as_ref()
    }

    pub fn into_matrix(self) -> Mat<c64> {
        self.matrix
    }

    pub fn grid(&self) -> &Arc<BoundaryGrid> {
        &self.grid
    }

    pub fn energy(&self) -> ComplexEnergy {
        self.energy
    }

    pub fn role(&self) -> OperatorRole {
        self.role
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Same operator relabelled with a new matrix and role.
    pub fn with_matrix(&self, matrix: Mat<c64>, role: OperatorRole) -> Self {
        Self::new(matrix, Arc::clone(&self.grid), self.energy, role)
    }

    /// The nodal Nyström matrix `W^{-1/2} S W^{1/2}` acting on samples `φ(x_j)`.
    pub fn nodal_matrix(&self) -> Mat<c64> {
        let w = self.grid.weights();
        Mat::from_fn(self.dim(), self.dim(), |i, j| self.matrix[(i, j)] * (w[j] / w[i]).sqrt())
    }
}

/// Log-weight rule `R(d)` for node offset `d = |i - j|`.
fn log_weights(n_nodes: usize) -> Vec<f64> {
    let n = n_nodes / 2;
    let nf = n as f64;
    (0..n_nodes)
        .map(|d| {
            let arg = 2.0 * PI * d as f64 / n_nodes as f64;
            let s: f64 = (1..n).map(|m| (m as f64 * arg).cos() / m as f64).sum();
            let alt = if d % 2 == 0 { 1.0 } else { -1.0 };
            -(2.0 * PI / nf) * s - PI / (nf * nf) * alt
        })
        .collect()
}

#[derive(Clone, Copy)]
enum Kernel {
    Value,
    Dz,
}

fn assemble(grid: &Arc<BoundaryGrid>, energy: ComplexEnergy, which: Kernel) -> Result<Mat<c64>> {
    let n_nodes = grid.len();
    let h = 2.0 * PI / n_nodes as f64;
    let rw = log_weights(n_nodes);
    let w = energy.w();
    let z = energy.z();
    let t = grid.params();
    let sqrt_w: Vec<f64> = grid.weights().iter().map(|v| v.sqrt()).collect();

    let rows: Vec<Vec<c64>> = (0..n_nodes)
        .into_par_iter()
        .map(|i| -> Result<Vec<c64>> {
            let mut row = Vec::with_capacity(n_nodes - i);
            for j in i..n_nodes {
                let k = if i == j {
                    match which {
                        Kernel::Value => {
                            let b = 0.25 * I - EULER_GAMMA / (2.0 * PI)
                                - (w * (0.5 * grid.speeds()[i])).ln() / (2.0 * PI);
                            rw[0] * (-1.0 / (4.0 * PI)) / h + b
                        }
                        Kernel::Dz => c64::new(-1.0, 0.0) / (4.0 * PI * z),
                    }
                } else {
                    let r = grid.distance(i, j);
                    let kb = kernel_bessel(w * r)?;
                    let lg = (4.0 * (0.5 * (t[i] - t[j])).sin().powi(2)).ln();
                    let (a, phi) = match which {
                        Kernel::Value => (-kb.j0 / (4.0 * PI), 0.25 * I * kb.h0),
                        Kernel::Dz => (r * kb.j1 / (8.0 * PI * w), -(I * r / (8.0 * w)) * kb.h1),
                    };
                    let b = phi - a * lg;
                    rw[j - i] * a / h + b
                };
                row.push(sqrt_w[i] * k * sqrt_w[j]);
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;

    let mut m = Mat::<c64>::zeros(n_nodes, n_nodes);
    for (i, row) in rows.into_iter().enumerate() {
        for (off, v) in row.into_iter().enumerate() {
            m[(i, i + off)] = v;
            m[(i + off, i)] = v;
        }
    }
    Ok(m)
}

/// Symmetrized single-layer matrix `W^{1/2} K(z) W^{1/2}`.
pub fn assemble_single_layer(grid: &Arc<BoundaryGrid>, z: ComplexEnergy) -> Result<BoundaryOperator> {
    let m = assemble(grid, z, Kernel::Value)?;
    Ok(BoundaryOperator::new(m, Arc::clone(grid), z, OperatorRole::SingleLayer))
}

/// Symmetrized matrix of `∂E/∂z`.
pub fn assemble_single_layer_dz(grid: &Arc<BoundaryGrid>, z: ComplexEnergy) -> Result<BoundaryOperator> {
    let m = assemble(grid, z, Kernel::Dz)?;
    Ok(BoundaryOperator::new(m, Arc::clone(grid), z, OperatorRole::SingleLayerDz))
}

/// Least-squares line through `(ln j, ln σ_j)` for `j` in `from..=to`
/// (1-based, singular values in decreasing order).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    pub from: usize,
    pub to: usize,
}

pub fn singular_value_decay(op: &BoundaryOperator, from: usize, to: usize) -> Result<DecayFit> {
    let mut s = op.matrix().singular_values().map_err(|e| SsfError::Eigen(format!("{e:?}")))?;
    s.sort_by(|a, b| b.total_cmp(a));
    if from < 1 || to <= from || to > s.len() {
        return Err(SsfError::InvalidInput(format!("fit range {from}..={to} outside 1..={}", s.len())));
    }
    let pts: Vec<(f64, f64)> = (from..=to).map(|j| ((j as f64).ln(), s[j - 1].ln())).collect();
    let k = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / k, pts.iter().map(|p| p.1).sum::<f64>() / k);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = sxy / sxx;
    Ok(DecayFit { slope, intercept: my - slope * mx, from, to })
}
