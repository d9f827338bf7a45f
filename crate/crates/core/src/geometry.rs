//! Smooth closed curves in the plane, their quadrature grids and sampled
//! interaction strengths.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SsfError};

/// Truncated Fourier series `Σ_k cos[k]·cos(kt) + Σ_k sin[k-1]·sin(kt)`.
///
/// `cos[0]` is the constant term; `sin[0]` multiplies `sin(t)`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FourierSeries {
    #[serde(default)]
    pub cos: Vec<f64>,
    #[serde(default)]
    pub sin: Vec<f64>,
}

impl FourierSeries {
    /// Value and first two derivatives at `t`.
    pub fn eval(&self, t: f64) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (k, &a) in self.cos.iter().enumerate() {
            let kf = k as f64;
            let (s, c) = (kf * t).sin_cos();
            out[0] += a * c;
            out[1] -= a * kf * s;
            out[2] -= a * kf * kf * c;
        }
        for (idx, &b) in self.sin.iter().enumerate() {
            let kf = (idx + 1) as f64;
            let (s, c) = (kf * t).sin_cos();
            out[0] += b * s;
            out[1] += b * kf * c;
            out[2] -= b * kf * kf * s;
        }
        out
    }

    fn is_finite(&self) -> bool {
        self.cos.iter().chain(&self.sin).all(|v| v.is_finite())
    }
}

/// A simple closed `C²` curve parametrized over `[0, 2π)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Curve2D {
    Circle { radius: f64 },
    Fourier { x: FourierSeries, y: FourierSeries },
}

/// Samples used for the speed and self-intersection checks.
const CHECK_SAMPLES: usize = 1024;

impl Curve2D {
    pub fn circle(radius: f64) -> Self {
        Self::Circle { radius }
    }

    pub fn ellipse(a: f64, b: f64) -> Self {
        Self::Fourier {
            x: FourierSeries { cos: vec![0.0, a], sin: vec![] },
            y: FourierSeries { cos: vec![], sin: vec![b] },
        }
    }

    /// Point, first and second derivative at parameter `t`.
    pub fn eval(&self, t: f64) -> [[f64; 2]; 3] {
        match self {
            Self::Circle { radius } => {
                let (s, c) = t.sin_cos();
                [[radius * c, radius * s], [-radius * s, radius * c], [-radius * c, -radius * s]]
            }
            Self::Fourier { x, y } => {
                let fx = x.eval(t);
                let fy = y.eval(t);
                [[fx[0], fy[0]], [fx[1], fy[1]], [fx[2], fy[2]]]
            }
        }
    }

    /// Checks finiteness, nonvanishing speed and injectivity on a sample grid.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Circle { radius } => {
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(SsfError::InvalidInput(format!(
                        "geometry.radius must be positive, got {radius}"
                    )));
                }
                Ok(())
            }
            Self::Fourier { x, y } => {
                if !(x.is_finite() && y.is_finite()) {
                    return Err(SsfError::InvalidInput("geometry Fourier coefficients must be finite".into()));
                }
                let pts: Vec<[f64; 2]> = (0..CHECK_SAMPLES)
                    .map(|j| {
                        let [p, d, _] = self.eval(2.0 * PI * j as f64 / CHECK_SAMPLES as f64);
                        if d[0].hypot(d[1]) <= 1e-10 {
                            Err(SsfError::InvalidInput(format!(
                                "curve speed vanishes near t = {:.6}",
                                2.0 * PI * j as f64 / CHECK_SAMPLES as f64
                            )))
                        } else {
                            Ok(p)
                        }
                    })
                    .collect::<Result<_>>()?;
                check_simple_polygon(&pts)
            }
        }
    }
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn segments_cross(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

fn check_simple_polygon(pts: &[[f64; 2]]) -> Result<()> {
    let n = pts.len();
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_cross(a, b, pts[j], pts[(j + 1) % n]) {
                return Err(SsfError::InvalidInput(format!(
                    "curve self-intersects near t = {:.6}",
                    2.0 * PI * i as f64 / n as f64
                )));
            }
        }
    }
    Ok(())
}

/// Equispaced parameter grid on a closed curve with trapezoidal weights.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryGrid {
    t: Vec<f64>,
    points: Vec<[f64; 2]>,
    tangents: Vec<[f64; 2]>,
    speeds: Vec<f64>,
    weights: Vec<f64>,
    normals: Vec<[f64; 2]>,
}

impl BoundaryGrid {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn params(&self) -> &[f64] {
        &self.t
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    /// `p'(t_j)`.
    pub fn tangents(&self) -> &[[f64; 2]] {
        &self.tangents
    }

    pub fn speeds(&self) -> &[f64] {
        &self.speeds
    }

    /// `w_j = 2π s_j / N`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Unit normals pointing out of the enclosed domain.
    pub fn normals(&self) -> &[[f64; 2]] {
        &self.normals
    }

    pub fn length(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (self.points[i], self.points[j]);
        (a[0] - b[0]).hypot(a[1] - b[1])
    }
}

/// Samples the curve at `t_j = 2πj/N`; `N` must be even and at least 16.
pub fn discretize_curve(curve: &Curve2D, n: usize) -> Result<BoundaryGrid> {
    if n < 16 || n % 2 != 0 {
        return Err(SsfError::InvalidInput(format!(
            "discretization N must be even and at least 16, got {n}"
        )));
    }
    curve.validate()?;
    let t: Vec<f64> = (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect();
    let evals: Vec<[[f64; 2]; 3]> = t.iter().map(|&tj| curve.eval(tj)).collect();
    let points: Vec<[f64; 2]> = evals.iter().map(|e| e[0]).collect();
    let tangents: Vec<[f64; 2]> = evals.iter().map(|e| e[1]).collect();
    let speeds: Vec<f64> = tangents.iter().map(|d| d[0].hypot(d[1])).collect();
    if let Some(j) = speeds.iter().position(|&s| !(s > 1e-10)) {
        return Err(SsfError::InvalidInput(format!("degenerate speed at node {j}")));
    }
    let weights = speeds.iter().map(|s| 2.0 * PI * s / n as f64).collect();

    // shoelace area fixes the orientation of the outward normal
    let area: f64 = (0..n)
        .map(|j| {
            let (a, b) = (points[j], points[(j + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum();
    let orient = if area >= 0.0 { 1.0 } else { -1.0 };
    let normals = tangents
        .iter()
        .zip(&speeds)
        .map(|(d, s)| [orient * d[1] / s, -orient * d[0] / s])
        .collect();
    Ok(BoundaryGrid { t, points, tangents, speeds, weights, normals })
}

/// Real interaction strength `α` on the curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlphaSpec {
    Constant { value: f64 },
    Fourier {
        #[serde(flatten)]
        series: FourierSeries,
    },
}

impl AlphaSpec {
    pub fn constant(value: f64) -> Self {
        Self::Constant { value }
    }

    pub fn at(&self, t: f64) -> f64 {
        match self {
            Self::Constant { value } => *value,
            Self::Fourier { series } => series.eval(t)[0],
        }
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self {
            Self::Constant { value } => Some(*value),
            Self::Fourier { .. } => None,
        }
    }
}

/// `α(p(t_j))` at every node.
pub fn sample_alpha(alpha: &AlphaSpec, grid: &BoundaryGrid) -> Vec<f64> {
    grid.params().iter().map(|&t| alpha.at(t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_length_and_nodes() {
        let g = discretize_curve(&Curve2D::circle(1.0), 64).unwrap();
        assert!((g.length() - 2.0 * PI).abs() < 1e-12);
        for p in g.points() {
            assert!((p[0].hypot(p[1]) - 1.0).abs() < 1e-14);
        }
        let g = discretize_curve(&Curve2D::circle(2.0), 16).unwrap();
        for w in g.weights() {
            assert!((w - 2.0 * PI * 2.0 / 16.0).abs() < 1e-15);
        }
    }

    #[test]
    fn outward_normals_on_circle() {
        let g = discretize_curve(&Curve2D::circle(1.5), 32).unwrap();
        for (p, nrm) in g.points().iter().zip(g.normals()) {
            assert!((p[0] / 1.5 - nrm[0]).abs() < 1e-14 && (p[1] / 1.5 - nrm[1]).abs() < 1e-14);
        }
    }

    /// Adaptive Simpson on the arc-length integrand.
    fn adaptive_length(curve: &Curve2D) -> f64 {
        fn speed(c: &Curve2D, t: f64) -> f64 {
            let d = c.eval(t)[1];
            d[0].hypot(d[1])
        }
        #[allow(clippy::too_many_arguments)]
        fn rec(c: &Curve2D, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (speed(c, lm), speed(c, rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() < 1e-15 {
                return left + right + (left + right - whole) / 15.0;
            }
            rec(c, a, m, fa, flm, fm, left, depth - 1) + rec(c, m, b, fm, frm, fb, right, depth - 1)
        }
        let (fa, fm, fb) = (speed(curve, 0.0), speed(curve, PI), speed(curve, 2.0 * PI));
        rec(curve, 0.0, 2.0 * PI, fa, fm, fb, 2.0 * PI / 6.0 * (fa + 4.0 * fm + fb), 40)
    }

    #[test]
    fn ellipse_perimeter() {
        let e = Curve2D::ellipse(1.0, 0.5);
        let g = discretize_curve(&e, 256).unwrap();
        let oracle = adaptive_length(&e);
        assert!((g.length() - oracle).abs() < 1e-10 * oracle);
        assert!((g.length() - 4.844_224_110_3).abs() < 1e-9);
        let g2 = discretize_curve(&e, 512).unwrap();
        assert!((g.length() - g2.length()).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(discretize_curve(&Curve2D::circle(1.0), 17).is_err());
        assert!(discretize_curve(&Curve2D::circle(1.0), 8).is_err());
        assert!(discretize_curve(&Curve2D::circle(-1.0), 16).is_err());
        // x = cos t, y = sin 2t traces a figure eight
        let eight = Curve2D::Fourier {
            x: FourierSeries { cos: vec![0.0, 1.0], sin: vec![] },
            y: FourierSeries { cos: vec![], sin: vec![0.0, 1.0] },
        };
        assert!(discretize_curve(&eight, 32).is_err());
    }

    #[test]
    fn alpha_sampling() {
        let g = discretize_curve(&Curve2D::circle(1.0), 16).unwrap();
        assert!(sample_alpha(&AlphaSpec::constant(-2.0), &g).iter().all(|&a| a == -2.0));
        assert!(sample_alpha(&AlphaSpec::constant(0.0), &g).iter().all(|&a| a == 0.0));
        let f = AlphaSpec::Fourier { series: FourierSeries { cos: vec![1.0, 0.3], sin: vec![] } };
        assert!((sample_alpha(&f, &g)[0] - 1.3).abs() < 1e-15);
    }
}
