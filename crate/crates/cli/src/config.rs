//! Optional JSON config file. Flags override config values override
//! defaults; the merged effective configuration is echoed into the output
//! directory as `run.json` so every run is replayable.

use std::path::Path;

use serde::Deserialize;

use pslab_core::{Error, Result};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub out: Option<String>,
    pub seed: Option<u64>,
    pub grid: Option<String>,
    pub levels: Option<String>,
    pub n: Option<usize>,
    pub samples: Option<usize>,
    pub sizes: Option<String>,
    pub props: Option<String>,
    pub study: Option<String>,
    pub tol: Option<f64>,
    pub thetas: Option<usize>,
    pub r: Option<f64>,
    pub threshold: Option<f64>,
    pub ladder: Option<String>,
    pub series: Option<String>,
    pub svg: Option<bool>,
    pub svg_size: Option<f64>,
    pub elide_blocks: Option<bool>,
    pub ladder_cap: Option<usize>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<FileConfig> {
        match path {
            None => Ok(FileConfig::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| {
                    Error::invalid(format!("cannot read config `{}`: {e}", p.display()))
                })?;
                serde_json::from_str(&text)
                    .map_err(|e| Error::invalid(format!("config `{}`: {e}", p.display())))
            }
        }
    }
}

/// Default seed when neither flag nor config provides one.
pub const DEFAULT_SEED: u64 = 0x5EED;
