//! Command-line front end: resolves configuration, runs one computation and
//! writes its data files plus a replayable manifest.
//!
//! Exit codes: 0 success, 1 numerical or I/O failure, 2 usage error.

pub mod args;
pub mod commands;
pub mod manifest;
pub mod resolve;

use std::ffi::OsString;
use std::time::Instant;

use clap::Parser;
use tonks_core::emit::write_file;
use tonks_core::lattice::ConfigFile;
use tonks_core::{Error, Result};

use args::{Cli, Command};
use manifest::RunManifest;
use resolve::{resolve, Resolved};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NUMERICAL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> u8 {
    if err.is_numerical() || matches!(err, Error::Io(_)) {
        EXIT_NUMERICAL
    } else {
        EXIT_USAGE
    }
}

fn resolve_for(command: &Command, preset: Option<&ConfigFile>) -> Result<Resolved> {
    let common = command.common().expect("replay has no common options");
    match command {
        Command::Bands(_) | Command::GapScan(_) => resolve(common, None, None, preset),
        Command::Density(a) | Command::PairDist(a) => resolve(common, a.particles, None, preset),
        Command::Rspdm(a) | Command::Momentum(a) | Command::Antidiag(a) => {
            resolve(common, a.state.particles, Some(&a.mc), preset)
        }
        Command::Compare(a) => resolve(common, a.state.particles, Some(&a.mc), preset),
        Command::Replay(_) => unreachable!(),
    }
}

/// Runs `command` and writes its outputs and manifest; returns the written paths.
pub fn execute(command: &Command, preset: Option<&ConfigFile>) -> Result<Vec<std::path::PathBuf>> {
    if let Command::Replay(args) = command {
        let recorded = RunManifest::load(&args.manifest)?;
        let mut replayed = recorded.arguments.clone();
        if let (Some(out), Some(common)) = (&args.out, replayed.common_mut()) {
            common.out = out.clone();
        }
        if let Some(common) = replayed.common_mut() {
            common.workers = Some(recorded.workers);
        }
        log::info!(
            "replaying {} from {}",
            recorded.command,
            args.manifest.display()
        );
        return execute(&replayed, Some(&recorded.config));
    }

    let start = Instant::now();
    let resolved = resolve_for(command, preset)?;
    let outputs = match command {
        Command::Bands(a) => commands::bands(a, &resolved)?,
        Command::GapScan(a) => commands::gap_scan(a, &resolved)?,
        Command::Density(a) => commands::density(a, &resolved)?,
        Command::PairDist(a) => commands::pair_dist(a, &resolved)?,
        Command::Rspdm(a) => commands::rspdm(a, &resolved)?,
        Command::Momentum(a) => commands::momentum(a, &resolved)?,
        Command::Antidiag(a) => commands::antidiag(a, &resolved)?,
        Command::Compare(a) => commands::compare(a, &resolved)?,
        Command::Replay(_) => unreachable!(),
    };
    for (path, contents) in &outputs {
        write_file(path, contents)?;
    }

    let mut arguments = command.clone();
    if let Some(common) = arguments.common_mut() {
        // the resolved config below supersedes the file
        common.config = None;
    }
    let common = command.common().expect("computing command");
    let paths: Vec<_> = outputs.into_iter().map(|(p, _)| p).collect();
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: command.name().to_string(),
        arguments,
        seed: resolved.file.seed,
        samples: resolved.file.samples,
        config: resolved.file.clone(),
        workers: resolved.workers,
        outputs: paths.clone(),
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    write_file(
        &RunManifest::path_for(&common.out),
        &tonks_core::emit::to_json(&manifest)?,
    )?;
    Ok(paths)
}

/// Parses `argv` (program name first), runs, reports errors on stderr and
/// returns the exit code.
pub fn dispatch<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli.command, None) {
        Ok(paths) => {
            for p in paths {
                log::info!("wrote {}", p.display());
            }
            EXIT_OK
        }
        Err(err) => {
            eprintln!("error: {err}");
            exit_code(&err)
        }
    }
}
