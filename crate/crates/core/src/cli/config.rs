//! JSON run configuration.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "space": { "construction": "standard", "domain": { "kind": "interval", "lo": 0, "hi": 1 } },
//!   "map": { "kind": "scale", "factor": 0.5 },
//!   "contraction": { "k": 0.5 },
//!   "solver": { "seeds": [1.0, 0.7, 0.3], "epsilon": 1e-8 },
//!   "sampler": { "sample_count": 10000, "t_grid": [0.1, 1, 10], "seed": 7 }
//! }
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::audit::{SampleMode, SamplerConfig};
use crate::contraction::{ControlFn, KContraction, PsiPhiPair, SelfMap};
use crate::norm::{TConorm, TNorm};
use crate::solver::SolverConfig;
use crate::space::{crisp_threshold_space, standard_space, IFSpace, Point, PointDomain, TriangleMode};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("field `{field}`: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: &str, message: impl ToString) -> ConfigError {
    ConfigError::Invalid {
        field: field.to_string(),
        message: message.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub space: SpaceSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contraction: Option<ContractionSpec>,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default)]
    pub sampler: SamplerSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    Standard,
    CrispThreshold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormName {
    Product,
    Minimum,
    Lukasiewicz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConormName {
    ProbabilisticSum,
    Maximum,
    BoundedSum,
}

fn default_norm() -> NormName {
    NormName::Product
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub construction: Construction,
    pub domain: DomainSpec,
    #[serde(default = "default_norm")]
    pub tnorm: NormName,
    /// Defaults to the De Morgan dual of `tnorm`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tconorm: Option<ConormName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triangle_mode: Option<TriangleMode>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    Interval {
        lo: f64,
        hi: f64,
    },
    /// `n` points with `d(i, j) = |i - j| / (n - 1)`.
    Line {
        n: usize,
    },
    Table {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
        metric: Vec<Vec<f64>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapSpec {
    Scale { factor: f64 },
    AffineClamped { slope: f64, offset: f64 },
    Constant { value: f64 },
    Identity,
    Table { images: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ControlSpec {
    PsiFromK { k: f64 },
    PhiFromK { k: f64 },
    Power { p: f64 },
    Identity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContractionSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<ControlSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<ControlSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EngineName {
    Picard,
    Edelstein,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSpec {
    pub engine: EngineName,
    pub epsilon: f64,
    pub t_grid: Vec<f64>,
    pub max_iter: usize,
    pub point_tol: f64,
    pub window: usize,
    /// Reals for interval domains, indices for finite ones.
    pub seeds: Vec<f64>,
}

impl Default for SolverSpec {
    fn default() -> Self {
        let d = SolverConfig::default();
        SolverSpec {
            engine: EngineName::Picard,
            epsilon: d.epsilon,
            t_grid: d.t_grid,
            max_iter: d.max_iter,
            point_tol: d.point_tol,
            window: d.window,
            seeds: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerMode {
    Random,
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplerSpec {
    pub mode: SamplerMode,
    pub sample_count: usize,
    pub t_grid: Vec<f64>,
    pub seed: u64,
}

impl Default for SamplerSpec {
    fn default() -> Self {
        SamplerSpec {
            mode: SamplerMode::Random,
            sample_count: 10_000,
            t_grid: vec![0.1, 1.0, 10.0],
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config is serializable")
    }

    /// Builds every component once so that range errors surface before any
    /// work is done.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(invalid(
                "schema_version",
                format!("unsupported version {} (expected {SCHEMA_VERSION})", self.schema_version),
            ));
        }
        let space = self.build_space()?;
        if self.map.is_some() {
            self.build_map(&space)?;
        }
        if self.contraction.is_some() {
            self.build_contraction()?;
        }
        self.build_solver(&space)?;
        self.build_sampler()?;
        Ok(())
    }

    pub fn build_space(&self) -> Result<IFSpace, ConfigError> {
        let spec = &self.space;
        let domain = match &spec.domain {
            DomainSpec::Interval { lo, hi } => PointDomain::interval(*lo, *hi),
            DomainSpec::Line { n } => PointDomain::line(*n),
            DomainSpec::Table { labels, metric } => {
                let labels = labels
                    .clone()
                    .unwrap_or_else(|| (0..metric.len()).map(|i| i.to_string()).collect());
                PointDomain::finite(labels, metric.clone())
            }
        }
        .map_err(|e| invalid("space.domain", e))?;
        let tnorm = match spec.tnorm {
            NormName::Product => TNorm::Product,
            NormName::Minimum => TNorm::Minimum,
            NormName::Lukasiewicz => TNorm::Lukasiewicz,
        };
        let tconorm = match spec.tconorm {
            None => tnorm.dual(),
            Some(ConormName::ProbabilisticSum) => TConorm::ProbabilisticSum,
            Some(ConormName::Maximum) => TConorm::Maximum,
            Some(ConormName::BoundedSum) => TConorm::BoundedSum,
        };
        let space = match spec.construction {
            Construction::Standard => standard_space(domain, tnorm, tconorm),
            Construction::CrispThreshold => {
                crisp_threshold_space(domain, tnorm, tconorm).map_err(|e| invalid("space.domain", e))?
            }
        };
        Ok(match spec.triangle_mode {
            Some(mode) => space.with_triangle_mode(mode),
            None => space,
        })
    }

    fn point(&self, domain: &PointDomain, value: f64, field: &str) -> Result<Point, ConfigError> {
        let p = match domain {
            PointDomain::RealInterval { .. } => Point::Real(value),
            PointDomain::FiniteTable { .. } => {
                if value < 0.0 || value.fract() != 0.0 {
                    return Err(invalid(field, format!("{value} is not a point index")));
                }
                Point::Index(value as usize)
            }
        };
        domain.check(&p).map_err(|e| invalid(field, e))?;
        Ok(p)
    }

    pub fn build_map(&self, space: &IFSpace) -> Result<SelfMap, ConfigError> {
        let spec = self.map.as_ref().ok_or_else(|| invalid("map", "a map is required for this command"))?;
        let map = match spec {
            MapSpec::Scale { factor } => SelfMap::Scale(*factor),
            MapSpec::AffineClamped { slope, offset } => SelfMap::AffineClamped {
                slope: *slope,
                offset: *offset,
            },
            MapSpec::Constant { value } => SelfMap::Constant(self.point(&space.domain, *value, "map.value")?),
            MapSpec::Identity => SelfMap::Identity,
            MapSpec::Table { images } => SelfMap::Table(images.clone()),
        };
        map.validate(&space.domain).map_err(|e| invalid("map", e))?;
        if let PointDomain::RealInterval { lo, hi } = space.domain {
            for x in [lo, hi] {
                map.apply(&space.domain, &Point::Real(x)).map_err(|e| invalid("map", e))?;
            }
        }
        Ok(map)
    }

    /// The optional k-contraction and the ψ-φ pair to check.
    pub fn build_contraction(&self) -> Result<(Option<KContraction>, PsiPhiPair), ConfigError> {
        let spec = self
            .contraction
            .as_ref()
            .ok_or_else(|| invalid("contraction", "a contraction spec is required for this command"))?;
        let k = spec
            .k
            .map(|k| KContraction::new(k).map_err(|e| invalid("contraction.k", e)))
            .transpose()?;
        let control = |c: &ControlSpec, field: &str| -> Result<ControlFn, ConfigError> {
            Ok(match c {
                ControlSpec::PsiFromK { k } => crate::contraction::psi_from_k(*k).map_err(|e| invalid(field, e))?,
                ControlSpec::PhiFromK { k } => crate::contraction::phi_from_k(*k).map_err(|e| invalid(field, e))?,
                ControlSpec::Power { p } => {
                    if !(*p > 0.0 && p.is_finite()) {
                        return Err(invalid(field, format!("power {p} must be positive")));
                    }
                    ControlFn::Power(*p)
                }
                ControlSpec::Identity => ControlFn::Identity,
            })
        };
        let pair = match (&spec.psi, &spec.phi, k) {
            (Some(psi), Some(phi), _) => {
                PsiPhiPair::custom(control(psi, "contraction.psi")?, control(phi, "contraction.phi")?)
            }
            (None, None, Some(k)) => PsiPhiPair::from_k(k.get()).expect("k validated"),
            (None, None, None) => return Err(invalid("contraction", "give `k` or both `psi` and `phi`")),
            _ => return Err(invalid("contraction", "`psi` and `phi` must be given together")),
        };
        Ok((k, pair))
    }

    pub fn build_solver(&self, space: &IFSpace) -> Result<SolverConfig, ConfigError> {
        let s = &self.solver;
        let seeds = s
            .seeds
            .iter()
            .enumerate()
            .map(|(i, v)| self.point(&space.domain, *v, &format!("solver.seeds[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let config = SolverConfig {
            epsilon: s.epsilon,
            t_grid: s.t_grid.clone(),
            max_iter: s.max_iter,
            point_tol: s.point_tol,
            seeds,
            window: s.window,
        };
        config.validate().map_err(|e| invalid("solver", e))?;
        if s.engine == EngineName::Edelstein && !space.domain.is_finite() {
            return Err(invalid("solver.engine", "edelstein needs a finite domain"));
        }
        Ok(config)
    }

    pub fn build_sampler(&self) -> Result<SamplerConfig, ConfigError> {
        let s = &self.sampler;
        let config = SamplerConfig {
            mode: match s.mode {
                SamplerMode::Random => SampleMode::RandomUniform,
                SamplerMode::Exhaustive => SampleMode::ExhaustiveFinite,
            },
            sample_count: s.sample_count,
            t_grid: s.t_grid.clone(),
            seed: s.seed,
        };
        config.validate().map_err(|e| invalid("sampler", e))?;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HALVING: &str = r#"{
        "schema_version": 1,
        "space": { "construction": "standard", "domain": { "kind": "interval", "lo": 0, "hi": 1 } },
        "map": { "kind": "scale", "factor": 0.5 },
        "contraction": { "k": 0.5 },
        "solver": { "seeds": [1.0, 0.7] }
    }"#;

    #[test]
    fn parses_minimal_config() {
        let cfg = RunConfig::from_json(HALVING).unwrap();
        assert_eq!(cfg.sampler, SamplerSpec::default());
        let space = cfg.build_space().unwrap();
        assert!(matches!(space.tconorm, TConorm::ProbabilisticSum));
    }

    #[test]
    fn k_out_of_range_names_field() {
        let text = HALVING.replace("\"k\": 0.5", "\"k\": 1.5");
        match RunConfig::from_json(&text) {
            Err(ConfigError::Invalid { field, .. }) => assert_eq!(field, "contraction.k"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_position() {
        match RunConfig::from_json("{\n  \"schema_version\": 1,\n  oops\n}") {
            Err(ConfigError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn schema_version_is_mandatory() {
        let text = HALVING.replace("\"schema_version\": 1,", "");
        assert!(matches!(RunConfig::from_json(&text), Err(ConfigError::Parse { .. })));
        let text = HALVING.replace("\"schema_version\": 1", "\"schema_version\": 2");
        assert!(matches!(RunConfig::from_json(&text), Err(ConfigError::Invalid { .. })));
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = HALVING.replace("\"factor\": 0.5", "\"factor\": 0.5, \"extra\": 1");
        assert!(RunConfig::from_json(&text).is_err());
    }

    #[test]
    fn seeds_checked_against_domain() {
        let text = HALVING.replace("[1.0, 0.7]", "[1.5]");
        match RunConfig::from_json(&text) {
            Err(ConfigError::Invalid { field, .. }) => assert_eq!(field, "solver.seeds[0]"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn escaping_map_rejected() {
        let text = HALVING.replace("\"factor\": 0.5", "\"factor\": 2.0");
        assert!(RunConfig::from_json(&text).is_err());
    }

    #[test]
    fn dump_round_trips() {
        let cfg = RunConfig::from_json(HALVING).unwrap();
        assert_eq!(RunConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    }
}
