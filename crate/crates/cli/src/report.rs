use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use trendlab::{RegimePartition, SweepCurve, TheoryParams};

use crate::config::{OutputFormat, RunConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledCurve {
    pub label: String,
    #[serde(flatten)]
    pub curve: SweepCurve,
}

impl LabeledCurve {
    pub fn new(label: impl Into<String>, curve: SweepCurve) -> Self {
        Self {
            label: label.into(),
            curve,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: RunConfig,
    pub curves: Vec<LabeledCurve>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<RegimePartition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<TheoryParams>,
    pub diagnostics: Map<String, Value>,
}

impl Report {
    pub fn curve(&self, label: &str) -> Option<&SweepCurve> {
        self.curves.iter().find(|c| c.label == label).map(|c| &c.curve)
    }

    pub fn render(&self) -> Result<String, crate::CliError> {
        match self.config.format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(self)?;
                s.push('\n');
                Ok(s)
            }
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["label", "N", "value", "stderr"])?;
                for c in &self.curves {
                    for (i, (n, v)) in c.curve.lookbacks.iter().zip(&c.curve.values).enumerate() {
                        let se = c
                            .curve
                            .standard_errors
                            .as_ref()
                            .map(|se| se[i].to_string())
                            .unwrap_or_default();
                        w.write_record([c.label.clone(), n.to_string(), v.to_string(), se])?;
                    }
                }
                w.flush()?;
                let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
                Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
            }
        }
    }

    /// Writes to the configured output path, or `out` when none is set.
    pub fn write(&self, out: &mut dyn Write) -> Result<(), crate::CliError> {
        let text = self.render()?;
        match &self.config.output {
            Some(path) => std::fs::write(path, text).map_err(|source| crate::CliError::Io {
                path: path.clone(),
                source,
            }),
            None => {
                out.write_all(text.as_bytes())?;
                out.flush()?;
                Ok(())
            }
        }
    }
}
