//! Run configuration: one TOML file per run.

use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use ssf_core::{AlphaSpec, Curve2D, EpsSchedule, FourierSeries, LogRoute, OracleGeometry, SsfSetup, WeylMode};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeometryConfig {
    Circle { radius: f64 },
    Fourier { x: FourierSeries, y: FourierSeries },
    /// Evaluated through the mode sums only.
    Sphere {
        #[serde(alias = "a")]
        radius: f64,
    },
}

impl GeometryConfig {
    pub fn curve(&self) -> Option<Curve2D> {
        match self {
            Self::Circle { radius } => Some(Curve2D::circle(*radius)),
            Self::Fourier { x, y } => Some(Curve2D::Fourier { x: x.clone(), y: y.clone() }),
            Self::Sphere { .. } => None,
        }
    }

    pub fn oracle(&self) -> Option<OracleGeometry> {
        match self {
            Self::Circle { radius } => Some(OracleGeometry::Circle { radius: *radius }),
            Self::Sphere { radius } => Some(OracleGeometry::Sphere { radius: *radius }),
            Self::Fourier { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Discretization {
    /// Nyström nodes on a boundary curve.
    pub n: usize,
    /// Highest mode for oracle geometries.
    pub m_max: usize,
    pub route: LogRoute,
}

impl Default for Discretization {
    fn default() -> Self {
        Self { n: 128, m_max: 63, route: LogRoute::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Segment {
    Linear { min: f64, max: f64, count: usize },
    /// Geometric spacing, `0 < min < max`.
    Log { min: f64, max: f64, count: usize },
    List { values: Vec<f64> },
}

impl Segment {
    fn points(&self) -> Vec<f64> {
        let spaced = |count: usize, f: &dyn Fn(f64) -> f64| -> Vec<f64> {
            if count == 1 {
                return vec![f(0.0)];
            }
            (0..count).map(|k| f(k as f64 / (count - 1) as f64)).collect()
        };
        match self {
            Self::Linear { min, max, count } => spaced(*count, &|s| min + (max - min) * s),
            Self::Log { min, max, count } => spaced(*count, &|s| (min.ln() + (max.ln() - min.ln()) * s).exp()),
            Self::List { values } => values.clone(),
        }
    }

    fn check(&self, key: &str) -> Result<()> {
        match self {
            Self::Linear { min, max, count } | Self::Log { min, max, count } => {
                ensure!(*count >= 1, "{key}.count must be at least 1");
                ensure!(min.is_finite() && max.is_finite(), "{key}.min and {key}.max must be finite");
                ensure!(min < max || (*count == 1 && min == max), "{key}.min must be below {key}.max");
                if matches!(self, Self::Log { .. }) {
                    ensure!(*min > 0.0, "{key}.min must be positive for log spacing");
                }
            }
            Self::List { values } => {
                ensure!(values.iter().all(|v| v.is_finite()), "{key}.values must be finite");
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub segments: Vec<Segment>,
}

impl GridSpec {
    /// Union of all segments, sorted, exact duplicates removed.
    pub fn lambdas(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self.segments.iter().flat_map(Segment::points).collect();
        all.sort_by(f64::total_cmp);
        all.dedup();
        all
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub curve: String,
    pub manifest: String,
    pub report: String,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { curve: "xi.csv".into(), manifest: "run.json".into(), report: "validate.json".into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Ceiling on the extrapolation error estimate per point.
    pub err_ceiling: f64,
    pub exclusion_radius: f64,
    /// Relative trace-formula error accepted by `validate`.
    pub validate: f64,
    /// Tail bound accepted by `validate`, relative to the trace.
    pub coverage: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { err_ceiling: 1e-5, exclusion_radius: 1e-3, validate: 1e-2, coverage: 1e-2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidateConfig {
    /// Spectral parameters as `[re, im]`.
    pub z: Vec<[f64; 2]>,
}

impl Default for ValidateConfig {
    fn default() -> Self {
        Self { z: vec![[-1.0, 0.0]] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub geometry: GeometryConfig,
    pub alpha: AlphaSpec,
    pub mode: WeylMode,
    #[serde(default)]
    pub discretization: Discretization,
    #[serde(default)]
    pub schedule: EpsSchedule,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub validate: ValidateConfig,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).context("malformed config")?;
        config.check()?;
        Ok(config)
    }

    pub fn check(&self) -> Result<()> {
        match &self.geometry {
            GeometryConfig::Circle { radius } | GeometryConfig::Sphere { radius } => {
                ensure!(*radius > 0.0 && radius.is_finite(), "geometry.radius must be positive, got {radius}");
            }
            GeometryConfig::Fourier { .. } => {}
        }
        if let GeometryConfig::Sphere { .. } = self.geometry {
            if self.alpha.as_constant().is_none() {
                bail!("alpha: sphere supports constant alpha only");
            }
            ensure!(self.discretization.m_max <= 63, "discretization.m_max must be at most 63");
        } else {
            let n = self.discretization.n;
            ensure!(n >= 8 && n % 2 == 0, "discretization.n must be even and at least 8, got {n}");
        }
        self.schedule.validate().context("schedule")?;
        for (i, s) in self.grid.segments.iter().enumerate() {
            s.check(&format!("grid.segments[{i}]"))?;
        }
        let t = &self.tolerances;
        for (key, v) in [
            ("err_ceiling", t.err_ceiling),
            ("exclusion_radius", t.exclusion_radius),
            ("validate", t.validate),
            ("coverage", t.coverage),
        ] {
            ensure!(v > 0.0 && v.is_finite(), "tolerances.{key} must be positive, got {v}");
        }
        for (i, z) in self.validate.z.iter().enumerate() {
            ensure!(z.iter().all(|v| v.is_finite()), "validate.z[{i}] must be finite");
        }
        if let Some(curve) = self.geometry.curve() {
            curve.validate().context("geometry")?;
        }
        Ok(())
    }

    /// Nyström setup for boundary geometries; `None` for the sphere.
    pub fn setup(&self) -> Result<Option<SsfSetup>> {
        let Some(curve) = self.geometry.curve() else {
            return Ok(None);
        };
        let setup = SsfSetup::new(&curve, self.discretization.n, self.alpha.clone(), self.mode)
            .context("mode")?
            .with_route(self.discretization.route)
            .with_err_ceiling(self.tolerances.err_ceiling)
            .context("tolerances.err_ceiling")?
            .with_exclusion_radius(self.tolerances.exclusion_radius)
            .context("tolerances.exclusion_radius")?;
        Ok(Some(setup))
    }
}

/// A parsed config together with the hash of its bytes.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: RunConfig,
    pub sha256: String,
}

impl LoadedConfig {
    pub fn from_text(text: &str) -> Result<Self> {
        Ok(Self { config: RunConfig::parse(text)?, sha256: sha256_hex(text.as_bytes()) })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_text(&text).with_context(|| format!("in {}", path.display()))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
        geometry = { kind = "circle", radius = 1.0 }
        alpha = { kind = "constant", value = -2.0 }
        mode = { kind = "alpha_negative" }
    "#;

    #[test]
    fn defaults_fill_in() {
        let c = RunConfig::parse(BASE).unwrap();
        assert_eq!(c.discretization.n, 128);
        assert_eq!(c.schedule, EpsSchedule::default());
        assert!(c.grid.lambdas().is_empty());
        assert!(c.setup().unwrap().is_some());
    }

    #[test]
    fn grid_segments_merge() {
        let text = format!(
            "{BASE}\n[[grid.segments]]\nkind = \"linear\"\nmin = 0.0\nmax = 1.0\ncount = 3\n\
             [[grid.segments]]\nkind = \"list\"\nvalues = [1.0, -2.0]\n\
             [[grid.segments]]\nkind = \"log\"\nmin = 1.0\nmax = 100.0\ncount = 3\n"
        );
        let c = RunConfig::parse(&text).unwrap();
        let l = c.grid.lambdas();
        assert_eq!(l.len(), 6);
        assert_eq!(l[..4], [-2.0, 0.0, 0.5, 1.0]);
        assert!((l[4] - 10.0).abs() < 1e-12 && (l[5] - 100.0).abs() < 1e-12);
    }

    #[test]
    fn errors_name_the_key() {
        let odd = format!("{BASE}\n[discretization]\nn = 63\n");
        assert!(format!("{:#}", RunConfig::parse(&odd).unwrap_err()).contains("discretization.n"));
        let bad_log = format!("{BASE}\n[[grid.segments]]\nkind = \"log\"\nmin = 0.0\nmax = 1.0\ncount = 3\n");
        assert!(format!("{:#}", RunConfig::parse(&bad_log).unwrap_err()).contains("grid.segments[0].min"));
        let bad_tol = format!("{BASE}\n[tolerances]\nvalidate = -1.0\n");
        assert!(format!("{:#}", RunConfig::parse(&bad_tol).unwrap_err()).contains("tolerances.validate"));
        let unknown = format!("{BASE}\n[discretization]\nnodes = 64\n");
        assert!(RunConfig::parse(&unknown).is_err());
    }

    #[test]
    fn sphere_needs_constant_alpha() {
        let text = r#"
            geometry = { kind = "sphere", a = 1.0 }
            alpha = { kind = "fourier", cos = [1.0, 0.5] }
            mode = { kind = "pair_with_c", c = 3.0 }
        "#;
        let err = format!("{:#}", RunConfig::parse(text).unwrap_err());
        assert!(err.contains("sphere supports constant alpha only"), "{err}");
    }

    #[test]
    fn regime_violation_is_reported_at_setup() {
        let text = BASE.replace("-2.0", "1.0");
        let err = format!("{:#}", RunConfig::parse(&text).unwrap().setup().unwrap_err());
        assert!(err.starts_with("mode"), "{err}");
    }

    #[test]
    fn hash_is_of_the_bytes() {
        let a = LoadedConfig::from_text(BASE).unwrap();
        let b = LoadedConfig::from_text(&format!("{BASE}\n")).unwrap();
        assert_eq!(a.config, b.config);
        assert_ne!(a.sha256, b.sha256);
        assert_eq!(a.sha256.len(), 64);
    }
}
