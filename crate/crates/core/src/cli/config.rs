//! Experiment configuration: compiled presets plus strict JSON files.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::topology::{Initial, Method};
use crate::wigner::GridSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    LinearResponse,
    Sta,
    Sweep,
    WignerMovie,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Preset {
    #[serde(rename = "fig1")]
    Fig1,
    #[serde(rename = "fig2-4")]
    Fig24,
}

impl Preset {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "fig1" => Some(Preset::Fig1),
            "fig2-4" => Some(Preset::Fig24),
            _ => None,
        }
    }

    pub fn params(self) -> ModelParams {
        match self {
            Preset::Fig1 => ModelParams::linear_response(),
            Preset::Fig24 => ModelParams::sta(),
        }
    }

    pub fn method(self) -> Method {
        match self {
            Preset::Fig1 => Method::LinearResponse,
            Preset::Fig24 => Method::StaPolar,
        }
    }

    pub fn default_steps(self) -> usize {
        match self {
            Preset::Fig1 => 20_000,
            Preset::Fig24 => 4_000,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preset::Fig1 => "fig1",
            Preset::Fig24 => "fig2-4",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub chi: Vec<f64>,
    pub method: Option<Method>,
}

/// Contents of a config file. Everything except `protocol` is optional;
/// `params` holds overrides on top of the preset.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub protocol: Protocol,
    #[serde(default)]
    pub preset: Option<Preset>,
    #[serde(default)]
    pub params: Map<String, Value>,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub initial: Option<Initial>,
    #[serde(default)]
    pub sta: Option<bool>,
    #[serde(default)]
    pub n_steps: Option<usize>,
    #[serde(default)]
    pub n_samples: Option<usize>,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub output: OutputConfig,
}

impl ExperimentConfig {
    pub fn for_preset(preset: Preset, protocol: Protocol) -> Self {
        Self {
            protocol,
            preset: Some(preset),
            params: Map::new(),
            sweep: None,
            initial: None,
            sta: None,
            n_steps: None,
            n_samples: None,
            grid: None,
            output: OutputConfig::default(),
        }
    }

    pub fn from_json(text: &str, origin: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("{origin}: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text, &path.display().to_string())
    }

    /// The preset in force: explicit, else implied by the protocol.
    pub fn effective_preset(&self) -> Preset {
        self.preset.unwrap_or(match self.protocol {
            Protocol::LinearResponse => Preset::Fig1,
            _ => Preset::Fig24,
        })
    }

    /// Preset parameters with the `params` overrides applied.
    pub fn model_params(&self) -> Result<ModelParams> {
        let base = serde_json::to_value(self.effective_preset().params()).map_err(|e| Error::Config(e.to_string()))?;
        let Value::Object(mut merged) = base else {
            unreachable!("model parameters serialize to an object")
        };
        for (key, value) in &self.params {
            merged.insert(key.clone(), value.clone());
        }
        serde_json::from_value(Value::Object(merged)).map_err(|e| Error::Config(format!("params: {e}")))
    }

    pub fn method(&self) -> Method {
        match self.protocol {
            Protocol::LinearResponse => Method::LinearResponse,
            Protocol::Sta | Protocol::WignerMovie => Method::StaPolar,
            Protocol::Sweep => self
                .sweep
                .as_ref()
                .and_then(|s| s.method)
                .unwrap_or(self.effective_preset().method()),
        }
    }

    pub fn sta(&self) -> bool {
        self.sta.unwrap_or(self.method() == Method::StaPolar)
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps.unwrap_or(self.effective_preset().default_steps())
    }
}
