//! JSON model configuration shared by the CLI, the figure pipeline and tests.

use std::path::Path;

use nmdiff_core::simulate::RandomTimeModel;
use nmdiff_core::timedens::law_from_kernel;
use nmdiff_core::{MemoryKernel, NonMarkovModel, ParentModel, ScalingFunction, TimeLaw};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
}

impl ConfigError {
    fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Invalid {
            field: field.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ParentSpec {
    Bm,
    DriftBm { mu: f64, sigma: f64 },
    Gbm { mu: f64, sigma: f64, x0: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelSpec {
    Power { beta: f64 },
    Exp { a: f64 },
    PowerExp { beta: f64, a: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScalingSpec {
    Identity,
    Power { p: f64 },
    Log1p,
}

/// Random-time construction used by simulations. Rates and orders are taken
/// from the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TimeModelSpec {
    AbsBm,
    InverseStable,
    MinExp,
    MinExpNoise,
    BernoulliMix,
    Delta,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    #[serde(default = "default_parent")]
    pub parent: ParentSpec,
    pub kernel: KernelSpec,
    #[serde(default = "default_scaling")]
    pub scaling: ScalingSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_model: Option<TimeModelSpec>,
}

fn default_parent() -> ParentSpec {
    ParentSpec::Bm
}

fn default_scaling() -> ScalingSpec {
    ScalingSpec::Identity
}

fn check(field: &str, value: f64, ok: bool, rule: &str) -> Result<(), ConfigError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(ConfigError::invalid(field, format!("{value} {rule}")))
    }
}

impl ModelConfig {
    /// Parse and validate a configuration document.
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Self::from_json_with_overrides(text, &[])
    }

    /// Parse, apply `field.path=value` overrides, then validate. Overrides
    /// win over the document.
    pub fn from_json_with_overrides(text: &str, overrides: &[String]) -> Result<Self, ConfigError> {
        let mut doc: Value = serde_json::from_str(text).map_err(syntax)?;
        for o in overrides {
            apply_override(&mut doc, o)?;
        }
        let cfg: Self = serde_json::from_value(doc).map_err(|e| ConfigError::invalid(locate(&e.to_string()), e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path, overrides: &[String]) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json_with_overrides(&text, overrides)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Field-level checks. Kernel orders above 1 are accepted here so that
    /// unsuitable kernels can still be examined; building a model rejects them.
    pub fn validate(&self) -> Result<(), ConfigError> {
        match self.parent {
            ParentSpec::Bm => {}
            ParentSpec::DriftBm { mu, sigma } => {
                check("parent.mu", mu, true, "must be finite")?;
                check("parent.sigma", sigma, sigma > 0.0, "must be positive")?;
            }
            ParentSpec::Gbm { mu, sigma, x0 } => {
                check("parent.mu", mu, true, "must be finite")?;
                check("parent.sigma", sigma, sigma > 0.0, "must be positive")?;
                check("parent.x0", x0, x0 > 0.0, "must be positive")?;
            }
        }
        match self.kernel {
            KernelSpec::Power { beta } => check("kernel.beta", beta, beta > 0.0, "must be positive")?,
            KernelSpec::Exp { a } => check("kernel.a", a, a >= 0.0, "must be non-negative")?,
            KernelSpec::PowerExp { beta, a } => {
                check("kernel.beta", beta, beta > 0.0, "must be positive")?;
                check("kernel.a", a, a >= 0.0, "must be non-negative")?;
            }
        }
        if let ScalingSpec::Power { p } = self.scaling {
            check("scaling.p", p, p > 0.0, "must be positive")?;
        }
        if let Some(tm) = self.time_model {
            self.random_time_for(tm)?;
        }
        Ok(())
    }

    pub fn parent(&self) -> ParentModel {
        match self.parent {
            ParentSpec::Bm => ParentModel::StandardBM,
            ParentSpec::DriftBm { mu, sigma } => ParentModel::DriftBM { mu, sigma },
            ParentSpec::Gbm { mu, sigma, x0 } => ParentModel::GeometricBM { mu, sigma, x0 },
        }
    }

    pub fn kernel(&self) -> MemoryKernel {
        match self.kernel {
            KernelSpec::Power { beta } => MemoryKernel::PowerLaw { beta },
            KernelSpec::Exp { a } => MemoryKernel::ExponentialDecay { a },
            KernelSpec::PowerExp { beta, a } => MemoryKernel::PowerExp { beta, a },
        }
    }

    pub fn scaling(&self) -> ScalingFunction {
        match self.scaling {
            ScalingSpec::Identity => ScalingFunction::Identity,
            ScalingSpec::Power { p } => ScalingFunction::Power { p },
            ScalingSpec::Log1p => ScalingFunction::Log1p,
        }
    }

    /// The fully validated equation.
    pub fn model(&self) -> Result<NonMarkovModel, ConfigError> {
        if let KernelSpec::Power { beta } | KernelSpec::PowerExp { beta, .. } = self.kernel {
            check("kernel.beta", beta, beta <= 1.0, "must lie in (0, 1]")?;
        }
        NonMarkovModel::new(self.parent(), self.kernel(), self.scaling())
            .map_err(|e| ConfigError::invalid("model", e.to_string()))
    }

    /// Random-time model for simulation: the configured one, or the default
    /// for the kernel (|b| at order 1/2, inverse stable otherwise, `min(X, t)`
    /// for the exponential kernel).
    pub fn random_time(&self) -> Result<RandomTimeModel, ConfigError> {
        let tm = match self.time_model {
            Some(tm) => tm,
            None => match self.kernel {
                KernelSpec::Power { beta } if beta == 1.0 => TimeModelSpec::Delta,
                KernelSpec::Power { beta } if beta == 0.5 => TimeModelSpec::AbsBm,
                KernelSpec::Power { .. } => TimeModelSpec::InverseStable,
                KernelSpec::Exp { a } if a == 0.0 => TimeModelSpec::Delta,
                KernelSpec::Exp { .. } => TimeModelSpec::MinExp,
                KernelSpec::PowerExp { .. } => {
                    return Err(ConfigError::invalid("time_model", "the power_exp kernel has no random-time sampler"))
                }
            },
        };
        self.random_time_for(tm)
    }

    fn random_time_for(&self, tm: TimeModelSpec) -> Result<RandomTimeModel, ConfigError> {
        let law = law_from_kernel(&self.kernel()).map_err(|e| ConfigError::invalid("kernel", e.to_string()))?;
        let mismatch = |name: &str| {
            ConfigError::invalid(
                "time_model.kind",
                format!("`{name}` does not produce the time law of kernel {:?}", self.kernel),
            )
        };
        match (tm, law) {
            (TimeModelSpec::AbsBm, TimeLaw::WrightLaw { beta }) if beta == 0.5 => Ok(RandomTimeModel::AbsBM),
            (TimeModelSpec::AbsBm, _) => Err(mismatch("abs_bm")),
            (TimeModelSpec::InverseStable, TimeLaw::WrightLaw { beta }) => Ok(RandomTimeModel::InverseStable { beta }),
            (TimeModelSpec::InverseStable, _) => Err(mismatch("inverse_stable")),
            (TimeModelSpec::MinExp, TimeLaw::ExpMixture { a }) => Ok(RandomTimeModel::MinExp { a }),
            (TimeModelSpec::MinExp, _) => Err(mismatch("min_exp")),
            (TimeModelSpec::MinExpNoise, TimeLaw::ExpMixture { a }) => Ok(RandomTimeModel::MinExpNoise { a }),
            (TimeModelSpec::MinExpNoise, _) => Err(mismatch("min_exp_noise")),
            (TimeModelSpec::BernoulliMix, TimeLaw::ExpMixture { a }) => Ok(RandomTimeModel::BernoulliMixture { a }),
            (TimeModelSpec::BernoulliMix, _) => Err(mismatch("bernoulli_mix")),
            (TimeModelSpec::Delta, TimeLaw::DeltaLaw) => Ok(RandomTimeModel::DeltaTime),
            (TimeModelSpec::Delta, _) => Err(mismatch("delta")),
        }
    }
}

fn syntax(e: serde_json::Error) -> ConfigError {
    ConfigError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Best-effort field name from a serde message such as "missing field `beta`".
fn locate(msg: &str) -> String {
    match (msg.find('`'), msg.rfind('`')) {
        (Some(a), Some(b)) if b > a => msg[a + 1..b].to_string(),
        _ => "config".to_string(),
    }
}

/// Set `a.b.c` in `doc` to the JSON value `v`; bare words become strings.
fn apply_override(doc: &mut Value, spec: &str) -> Result<(), ConfigError> {
    let (path, raw) = spec
        .split_once('=')
        .ok_or_else(|| ConfigError::invalid(spec, "override must look like field.path=value"))?;
    let value: Value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = doc;
    let parts: Vec<&str> = path.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let obj = node
            .as_object_mut()
            .ok_or_else(|| ConfigError::invalid(path, "cannot descend into a non-object"))?;
        if i + 1 == parts.len() {
            obj.insert((*part).to_string(), value);
            return Ok(());
        }
        node = obj
            .entry((*part).to_string())
            .or_insert_with(|| Value::Object(Default::default()));
    }
    Err(ConfigError::invalid(path, "empty override path"))
}
