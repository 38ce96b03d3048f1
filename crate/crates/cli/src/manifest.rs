use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tonks_core::lattice::ConfigFile;
use tonks_core::{Error, Result};

use crate::args::Command;

/// Record of one run, written as `<out>.manifest.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Parsed arguments, replayed verbatim apart from the config.
    pub arguments: Command,
    /// Fully resolved configuration (lattice, N, seed, samples).
    pub config: ConfigFile,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub workers: usize,
    pub outputs: Vec<PathBuf>,
    pub wall_time_s: f64,
}

impl RunManifest {
    pub fn path_for(out: &Path) -> PathBuf {
        let mut name = out.as_os_str().to_owned();
        name.push(".manifest.json");
        PathBuf::from(name)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read manifest {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("invalid manifest {}: {e}", path.display())))
    }
}
