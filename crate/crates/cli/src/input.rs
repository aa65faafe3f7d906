//! The TOML system description read by every subcommand.
//!
//! ```toml
//! n = 6
//! colors = [[4, 5, 1, 3, 1, 4], [2, 4, 5, 6, 3, 1]]
//! weights = ["1/2", "1/2"]   # optional, defaults to uniform
//!
//! [options]                  # optional
//! levels = [1, 2, 3]
//! cap = 200000
//! ```

use semihier::rational;
use semihier::{ColorSystem, Rational, Transformation};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub n: usize,
    pub colors: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<String>>,
    #[serde(default)]
    pub options: AnalysisOptions,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
}

impl SystemSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let spec: Self = toml::from_str(text).map_err(|e| CliError::Parse(e.message().to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn transformations(&self) -> Result<Vec<Transformation>, CliError> {
        self.colors
            .iter()
            .map(|c| Transformation::from_oneline(c, self.n))
            .collect::<semihier::Result<_>>()
            .map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn weights(&self) -> Result<Vec<Rational>, CliError> {
        match &self.weights {
            None => {
                let d = self.colors.len().max(1) as i64;
                Ok(vec![rational::ratio(1, d); self.colors.len()])
            }
            Some(ws) => ws
                .iter()
                .map(|w| rational::parse(w))
                .collect::<semihier::Result<_>>()
                .map_err(|e| CliError::Parse(e.to_string())),
        }
    }

    pub fn system(&self) -> Result<ColorSystem, CliError> {
        ColorSystem::with_weights(self.transformations()?, self.weights()?).map_err(|e| CliError::Parse(e.to_string()))
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.n == 0 {
            return Err(CliError::Parse("n must be positive".into()));
        }
        self.system().map(|_| ())
    }
}
