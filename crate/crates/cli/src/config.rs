//! Experiment configuration, read from TOML. See docs/config.md for the schema.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExampleId {
    Galilean,
    Heisenberg,
    Virasoro,
    Siegel,
    Unitary,
    #[serde(alias = "user")]
    UserAlgebraFile,
}

impl ExampleId {
    pub const ALL: [ExampleId; 6] = [
        ExampleId::Galilean,
        ExampleId::Heisenberg,
        ExampleId::Virasoro,
        ExampleId::Siegel,
        ExampleId::Unitary,
        ExampleId::UserAlgebraFile,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExampleId::Galilean => "galilean",
            ExampleId::Heisenberg => "heisenberg",
            ExampleId::Virasoro => "virasoro",
            ExampleId::Siegel => "siegel",
            ExampleId::Unitary => "unitary",
            ExampleId::UserAlgebraFile => "user-algebra-file",
        }
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExampleId {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        if s == "user" {
            return Ok(ExampleId::UserAlgebraFile);
        }
        ExampleId::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| CliError::Config(format!("unknown example `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Sampling {
    /// Random points per momentum-identity scan.
    pub points: usize,
    /// Random (ξ, X) pairs per point.
    pub directions: usize,
    /// Group pairs for cocycle comparisons.
    pub pairs: usize,
    /// Group triples for cocycle identities.
    pub triples: usize,
    /// Directions for Hessian comparisons.
    pub hessian_directions: usize,
}

impl Default for Sampling {
    fn default() -> Self {
        Self { points: 20, directions: 20, pairs: 100, triples: 500, hessian_directions: 10 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GalileanConfig {
    pub mass: f64,
    pub spin: f64,
    /// Parameters for the second critical family, which needs s² > 4m².
    pub second_mass: f64,
    pub second_spin: f64,
    /// Unit vectors x sampled for the first-family check.
    pub first_family_samples: usize,
}

impl Default for GalileanConfig {
    fn default() -> Self {
        Self { mass: 1.0, spin: 1.0, second_mass: 1.0, second_spin: 10.0, first_family_samples: 50 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HeisenbergConfig {
    pub n: usize,
}

impl Default for HeisenbergConfig {
    fn default() -> Self {
        Self { n: 2 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UnitaryConfig {
    pub n: usize,
    pub level: f64,
}

impl Default for UnitaryConfig {
    fn default() -> Self {
        Self { n: 3, level: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SiegelConfig {
    pub dims: Vec<usize>,
    /// Random compatible structures per dimension.
    pub structures: usize,
    /// Spread of the random symplectic conjugation.
    pub scale: f64,
}

impl Default for SiegelConfig {
    fn default() -> Self {
        Self { dims: vec![1, 2], structures: 10, scale: 0.4 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VirasoroConfig {
    /// Fourier modes N of the truncation.
    pub modes: usize,
    /// Grid M for spectral evaluation, a power of two ≥ 8N.
    pub grid: usize,
    pub bott_thurston_grid: usize,
    pub schwarzian_grid: usize,
    /// Random diffeomorphisms (Schwarzian) and triples (Bott–Thurston).
    pub diffeos: usize,
    /// Largest mode in random diffeomorphisms and band-limited classes.
    pub max_mode: usize,
    /// Bound on |p′| for random diffeomorphisms φ = θ + p(θ).
    pub slope: f64,
}

impl Default for VirasoroConfig {
    fn default() -> Self {
        Self { modes: 12, grid: 128, bott_thurston_grid: 2048, schwarzian_grid: 256, diffeos: 10, max_mode: 3, slope: 0.4 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StartFamily {
    /// Near the first Galilean family, or the level sphere for unitary.
    #[default]
    First,
    /// Near the second Galilean family.
    Second,
    /// The origin (or base point) itself.
    Origin,
    /// A random point.
    Random,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CriticalConfig {
    pub start: StartFamily,
    /// Explicit starting point; overrides `start`.
    pub point: Option<Vec<f64>>,
    pub perturbation: f64,
    pub max_iterations: usize,
    pub step: f64,
    pub tolerance: f64,
}

impl Default for CriticalConfig {
    fn default() -> Self {
        Self { start: StartFamily::First, point: None, perturbation: 0.02, max_iterations: 20_000, step: 0.1, tolerance: 1e-10 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PointConfig {
    /// Evaluate at this point instead of the example's known critical point.
    pub point: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    /// Gauss–Legendre nodes; results are confirmed against twice as many.
    pub nodes: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { nodes: 32 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UserConfig {
    /// TOML file with `dim`, `gram`, `brackets`.
    pub algebra: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    pub svg: bool,
}

/// A full experiment description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub example: ExampleId,
    pub seed: u64,
    /// Replaces every check tolerance when set.
    pub tol: Option<f64>,
    /// Per-check tolerance overrides, keyed by check name.
    pub tolerances: BTreeMap<String, f64>,
    pub sampling: Sampling,
    pub quadrature: QuadratureConfig,
    pub galilean: GalileanConfig,
    pub heisenberg: HeisenbergConfig,
    pub unitary: UnitaryConfig,
    pub siegel: SiegelConfig,
    pub virasoro: VirasoroConfig,
    pub critical: CriticalConfig,
    pub hessian: PointConfig,
    pub decompose: PointConfig,
    pub user: UserConfig,
    pub output: OutputConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            example: ExampleId::Galilean,
            seed: 0,
            tol: None,
            tolerances: BTreeMap::new(),
            sampling: Sampling::default(),
            quadrature: QuadratureConfig::default(),
            galilean: GalileanConfig::default(),
            heisenberg: HeisenbergConfig::default(),
            unitary: UnitaryConfig::default(),
            siegel: SiegelConfig::default(),
            virasoro: VirasoroConfig::default(),
            critical: CriticalConfig::default(),
            hessian: PointConfig::default(),
            decompose: PointConfig::default(),
            user: UserConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn for_example(example: ExampleId) -> Self {
        Self { example, ..Self::default() }
    }

    pub fn from_toml_str(text: &str) -> Result<Self, CliError> {
        let cfg: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_toml_str(&text)?;
        // Relative algebra paths are relative to the config file.
        if let (Some(a), Some(dir)) = (&cfg.user.algebra, path.parent()) {
            if a.is_relative() {
                cfg.user.algebra = Some(dir.join(a));
            }
        }
        Ok(cfg)
    }

    /// Rejects values no experiment could run with. A tolerance of exactly zero is
    /// allowed: every check still runs and is reported, and any nonzero defect fails.
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |what: &str| Err(CliError::Config(what.to_string()));
        if let Some(t) = self.tol {
            if !(t >= 0.0) || !t.is_finite() {
                return bad("`tol` must be a finite non-negative number");
            }
        }
        for (k, t) in &self.tolerances {
            if !(*t >= 0.0) || !t.is_finite() {
                return Err(CliError::Config(format!("tolerance `{k}` must be finite and non-negative")));
            }
        }
        let s = &self.sampling;
        if s.points == 0 || s.directions == 0 || s.pairs == 0 || s.triples == 0 || s.hessian_directions == 0 {
            return bad("sampling counts must be positive");
        }
        if self.quadrature.nodes < 2 {
            return bad("quadrature.nodes must be at least 2");
        }
        let g = &self.galilean;
        if [g.mass, g.second_mass].iter().any(|m| *m == 0.0 || !m.is_finite()) {
            return bad("galilean masses must be finite and nonzero");
        }
        if [g.spin, g.second_spin].iter().any(|s| !(*s > 0.0) || !s.is_finite()) {
            return bad("galilean spins must be finite and positive");
        }
        if self.heisenberg.n == 0 || self.unitary.n == 0 {
            return bad("dimension n must be at least 1");
        }
        if !self.unitary.level.is_finite() {
            return bad("unitary.level must be finite");
        }
        if self.siegel.dims.is_empty() || self.siegel.dims.contains(&0) || self.siegel.structures == 0 {
            return bad("siegel.dims must be non-empty positive and siegel.structures positive");
        }
        if !(self.siegel.scale > 0.0) {
            return bad("siegel.scale must be positive");
        }
        let v = &self.virasoro;
        if v.modes < 4 {
            return bad("virasoro.modes must be at least 4");
        }
        for (name, m) in [("grid", v.grid), ("bott_thurston_grid", v.bott_thurston_grid), ("schwarzian_grid", v.schwarzian_grid)] {
            if !m.is_power_of_two() || m < 8 {
                return Err(CliError::Config(format!("virasoro.{name} must be a power of two ≥ 8")));
            }
        }
        if v.grid < 8 * v.modes {
            return bad("virasoro.grid must be at least 8 × modes");
        }
        if v.diffeos == 0 || v.max_mode == 0 || v.max_mode > v.modes / 3 {
            return bad("virasoro.diffeos must be positive and 1 ≤ max_mode ≤ modes/3");
        }
        if !(v.slope > 0.0 && v.slope < 1.0) {
            return bad("virasoro.slope must lie in (0, 1)");
        }
        let c = &self.critical;
        if !(c.tolerance > 0.0) || !(c.step > 0.0) || c.max_iterations == 0 || !(c.perturbation >= 0.0) {
            return bad("critical.tolerance, step and max_iterations must be positive");
        }
        if self.example == ExampleId::UserAlgebraFile && self.user.algebra.is_none() {
            return bad("example user-algebra-file needs user.algebra");
        }
        Ok(())
    }

    /// Tolerance for a check: global override, then per-check override, then the default.
    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tol.or_else(|| self.tolerances.get(name).copied()).unwrap_or(default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_and_round_trip() {
        let cfg = ExperimentConfig::default();
        cfg.validate().unwrap();
        let text = toml::to_string(&cfg).unwrap();
        assert_eq!(ExperimentConfig::from_toml_str(&text).unwrap(), cfg);
    }

    #[test]
    fn parses_partial_files() {
        let cfg = ExperimentConfig::from_toml_str(
            "example = \"unitary\"\nseed = 9\n[unitary]\nn = 2\n[tolerances]\n\"momentum.analytic\" = 1e-6\n",
        )
        .unwrap();
        assert_eq!(cfg.example, ExampleId::Unitary);
        assert_eq!(cfg.unitary.n, 2);
        assert_eq!(cfg.unitary.level, 1.0);
        assert_eq!(cfg.tolerance("momentum.analytic", 1e-9), 1e-6);
        assert_eq!(cfg.tolerance("other", 1e-9), 1e-9);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(ExperimentConfig::from_toml_str("example = \"nope\"").is_err());
        assert!(ExperimentConfig::from_toml_str("tol = -1.0").is_err());
        assert!(ExperimentConfig::from_toml_str("bogus = 1").is_err());
        assert!(ExperimentConfig::from_toml_str("[virasoro]\ngrid = 100").is_err());
        assert!(ExperimentConfig::from_toml_str("example = \"user\"").is_err());
        assert!(ExperimentConfig::from_toml_str("tol = 0.0").is_ok());
    }

    #[test]
    fn example_ids_parse() {
        for e in ExampleId::ALL {
            assert_eq!(e.as_str().parse::<ExampleId>().unwrap(), e);
        }
        assert_eq!("user".parse::<ExampleId>().unwrap(), ExampleId::UserAlgebraFile);
    }
}
