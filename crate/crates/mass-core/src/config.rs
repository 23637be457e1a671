//! Configuration file handling: one flat TOML document whose keys mirror
//! [`SimConfig`] field for field. Unknown keys are rejected so a manifest
//! plus config file always reproduces a run exactly.

use std::path::Path;

use crate::engine::SimConfig;
use crate::error::{Error, Result};

/// Parse and validate a configuration file.
pub fn load_config(path: &Path) -> Result<SimConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

/// Parse and validate configuration text.
pub fn parse_config(text: &str) -> Result<SimConfig> {
    let config: SimConfig =
        toml::from_str(text).map_err(|e| Error::Config(format!("invalid config: {e}")))?;
    config.validate().map_err(|e| Error::Config(e.to_string()))?;
    Ok(config)
}

/// Canonical single-line JSON rendering of a resolved configuration,
/// the input to the manifest's config digest.
pub fn canonical_json(config: &SimConfig) -> String {
    serde_json::to_string(config).expect("config serializes")
}
