//! JSON run configuration: a preset name or explicit shapes, plus solver
//! settings. Unset settings fall back to the preset's, then to the defaults
//! (degree 12, 200 Lawson steps, damping 0.95, sign blending on).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{build_sample_set, SampleSet, ShapeSpec};
use crate::presets::preset_by_name;
use crate::zolotarev::ProblemSpec;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    #[serde(rename = "E")]
    pub e: Vec<ShapeSpec>,
    #[serde(rename = "F")]
    pub f: Vec<ShapeSpec>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lawson_steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub damping: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign_blend: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacity: Option<f64>,
}

/// A configuration with every setting filled in and the samples built.
#[derive(Clone, Debug, PartialEq)]
pub struct ResolvedConfig {
    pub samples: SampleSet,
    pub degree: usize,
    pub lawson_steps: usize,
    pub damping: f64,
    pub sign_blend: bool,
    pub capacity: Option<f64>,
}

impl RunConfig {
    pub fn from_preset(name: &str) -> Self {
        Self { preset: Some(name.to_string()), ..Default::default() }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid config: {e}")))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn resolve(&self) -> Result<ResolvedConfig> {
        let (samples, mut resolved) = match (&self.preset, &self.geometry) {
            (Some(_), Some(_)) => return Err(Error::Config("give either preset or geometry, not both".into())),
            (None, None) => return Err(Error::Config("config needs a preset or a geometry".into())),
            (Some(name), None) => {
                let p = preset_by_name(name)?;
                let r = ResolvedConfig {
                    samples: SampleSet { points_e: vec![], points_f: vec![] },
                    degree: p.degree,
                    lawson_steps: p.lawson_steps,
                    damping: p.damping,
                    sign_blend: true,
                    capacity: p.capacity,
                };
                (p.samples()?, r)
            }
            (None, Some(g)) => {
                let r = ResolvedConfig {
                    samples: SampleSet { points_e: vec![], points_f: vec![] },
                    degree: 12,
                    lawson_steps: 200,
                    damping: 0.95,
                    sign_blend: true,
                    capacity: None,
                };
                (build_sample_set(&g.e, &g.f)?, r)
            }
        };
        resolved.samples = samples;
        if let Some(n) = self.degree {
            resolved.degree = n;
        }
        if let Some(s) = self.lawson_steps {
            resolved.lawson_steps = s;
        }
        if let Some(d) = self.damping {
            resolved.damping = d;
        }
        if let Some(b) = self.sign_blend {
            resolved.sign_blend = b;
        }
        if self.capacity.is_some() {
            resolved.capacity = self.capacity;
        }
        if !(resolved.damping > 0.0 && resolved.damping <= 1.0) {
            return Err(Error::Config(format!("damping must lie in (0, 1], got {}", resolved.damping)));
        }
        if let Some(c) = resolved.capacity {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::Config(format!("capacity must be positive, got {c}")));
            }
        }
        Ok(resolved)
    }
}

impl ResolvedConfig {
    pub fn problem(&self) -> ProblemSpec {
        let mut spec = ProblemSpec::new(self.samples.clone(), self.degree);
        spec.aaa_opts.sign_blend = self.sign_blend;
        spec.lawson_opts.sign_blend = self.sign_blend;
        spec.lawson_opts.steps = self.lawson_steps;
        spec.lawson_opts.delta = self.damping;
        spec
    }
}
