use tonks_core::lattice::{ConfigFile, LatticeConfig};
use tonks_core::observables::McConfig;
use tonks_core::{Error, ManyBodyState, Result};

use crate::args::{Common, McArgs, StateArgs};

/// Everything a run needs after merging config file, flags and environment.
#[derive(Debug, Clone)]
pub struct Resolved {
    /// Fully explicit form, recorded in the manifest and used on replay.
    pub file: ConfigFile,
    pub lattice: LatticeConfig,
    pub workers: usize,
}

impl Resolved {
    pub fn particles(&self) -> Result<usize> {
        self.file.particles.ok_or_else(|| {
            Error::Config("particle number missing: pass --N or set N in the config".into())
        })
    }

    pub fn mc(&self) -> McConfig {
        let defaults = McConfig::default();
        McConfig {
            samples: self.file.samples.unwrap_or(defaults.samples),
            seed: self.file.seed.unwrap_or(defaults.seed),
            workers: self.workers,
        }
    }

    pub fn ground_state(&self, state: &StateArgs, tol: f64) -> Result<ManyBodyState> {
        let n = self.particles()?;
        if state.allow_even_n {
            ManyBodyState::ground_state_allow_even(&self.lattice, n, tol)
        } else {
            ManyBodyState::ground_state(&self.lattice, n, tol)
        }
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Merge order, lowest to highest: built-in defaults, config file, flags
/// (with `TG_SEED` standing in for `--seed`). A `preset` (from a manifest)
/// replaces the file and flags entirely.
pub fn resolve(
    common: &Common,
    particles: Option<usize>,
    mc: Option<&McArgs>,
    preset: Option<&ConfigFile>,
) -> Result<Resolved> {
    let workers = common.workers.unwrap_or_else(default_workers);
    if workers == 0 {
        return Err(Error::Config("--workers must be >= 1".into()));
    }
    if let Some(file) = preset {
        let lattice = file.lattice()?;
        return Ok(Resolved {
            file: file.clone(),
            lattice,
            workers,
        });
    }

    let mut file = match &common.config {
        Some(path) => ConfigFile::load(path).map_err(|e| match e {
            Error::Io(io) => Error::Config(format!("cannot read config {}: {io}", path.display())),
            other => other,
        })?,
        None => ConfigFile::default(),
    };
    if let Some(m) = common.cycles {
        file.cycles = m;
    }
    if file.cycles == 0 {
        return Err(Error::Config(
            "lattice size missing: pass --M or set M in the config".into(),
        ));
    }
    if let Some(q) = common.q {
        file.q = Some(q);
        file.field_t = None;
        file.omega_per_m = None;
        file.mass_kg = None;
        file.mu_j_per_t = None;
    }
    let lattice = if file.q.is_none() && file.field_t.is_none() && file.omega_per_m.is_none() {
        LatticeConfig::scan_defaults(file.cycles)?
    } else {
        file.lattice()?
    };

    let mut resolved = ConfigFile::from_lattice(&lattice);
    resolved.particles = particles.or(file.particles);
    if let Some(mc) = mc {
        let defaults = McConfig::default();
        resolved.seed = Some(mc.seed.or(file.seed).unwrap_or(defaults.seed));
        resolved.samples = Some(mc.samples.or(file.samples).unwrap_or(defaults.samples));
    }
    Ok(Resolved {
        file: resolved,
        lattice,
        workers,
    })
}
