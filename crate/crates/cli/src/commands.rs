use std::path::{Path, PathBuf};

use serde::Serialize;
use tonks_core::bands::{compute_bands, gap_scan_with_tol, linspace};
use tonks_core::emit::{self, ComparisonRow};
use tonks_core::manybody::total_energy;
use tonks_core::observables::{
    antidiagonal_cut, antidiagonal_variance, averages_from_density, batch_stderr, density_profile,
    fermi_momentum_distribution, momentum_distribution, pair_distribution, rspdm_bose_mc,
    rspdm_fermi, rspdm_quadrature_oracle, second_moment, total_momentum, Averages,
    DensityMatrixGrid, Estimate, Grid1D, MomentumInput,
};
use tonks_core::{Error, ManyBodyState, Result, Statistics};

use crate::args::{
    BandsArgs, Common, CompareArgs, GapScanArgs, MatrixArgs, McArgs, MethodArg, OutputFormat,
    StateArgs,
};
use crate::resolve::Resolved;

/// Interior fraction of the antidiagonal used for its variance.
const CUT_INTERIOR: f64 = 0.8;
/// Minimum quadrature panels for the oracle method.
const MIN_PANELS: usize = 512;

/// A file to be written: path and full contents.
pub type Output = (PathBuf, String);

/// `dir/stem.tag.ext` next to `path`.
pub fn sibling(path: &Path, tag: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.{tag}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{tag}"),
    };
    path.with_file_name(name)
}

fn single(
    common: &Common,
    csv: impl FnOnce() -> String,
    json: impl FnOnce() -> Result<String>,
) -> Result<Vec<Output>> {
    let text = match common.format {
        OutputFormat::Csv => csv(),
        OutputFormat::Json => json()?,
    };
    Ok(vec![(common.out.clone(), text)])
}

pub fn bands(args: &BandsArgs, r: &Resolved) -> Result<Vec<Output>> {
    let bands = compute_bands(&r.lattice, args.n_bands, args.common.tol)?;
    single(
        &args.common,
        || emit::bands_csv(&bands),
        || emit::to_json(&bands.entries()),
    )
}

pub fn gap_scan(args: &GapScanArgs, r: &Resolved) -> Result<Vec<Output>> {
    if args.points < 2 {
        return Err(Error::Config(format!(
            "--points must be >= 2, got {}",
            args.points
        )));
    }
    let values = linspace(args.from, args.to, args.points);
    let scan = gap_scan_with_tol(&r.lattice, args.param.into(), &values, args.common.tol)?;
    single(
        &args.common,
        || emit::gap_scan_csv(&scan),
        || emit::to_json(&scan),
    )
}

fn grid(state: &ManyBodyState, args: &StateArgs) -> Result<Grid1D> {
    Grid1D::symmetric(state.box_length(), args.grid)
}

#[derive(Serialize)]
struct DensityJson<'a> {
    grid: &'a Grid1D,
    density: &'a [f64],
    averages: Averages,
}

pub fn density(args: &StateArgs, r: &Resolved) -> Result<Vec<Output>> {
    let state = r.ground_state(args, args.common.tol)?;
    let grid = grid(&state, args)?;
    let rho = density_profile(&state, &grid);
    single(
        &args.common,
        || emit::density_csv(&grid, &rho, None),
        || {
            emit::to_json(&DensityJson {
                grid: &grid,
                density: &rho,
                averages: averages_from_density(&state, &grid, &rho, None),
            })
        },
    )
}

pub fn pair_dist(args: &StateArgs, r: &Resolved) -> Result<Vec<Output>> {
    let state = r.ground_state(args, args.common.tol)?;
    let pd = pair_distribution(&state, &grid(&state, args)?);
    single(
        &args.common,
        || emit::pair_distribution_csv(&pd),
        || emit::to_json(&pd),
    )
}

fn default_panels(grid_points: usize) -> usize {
    let step = grid_points.saturating_sub(1).max(1);
    MIN_PANELS.div_ceil(step) * step
}

/// The density matrix for one statistics tag and method.
fn density_matrix(
    state: &ManyBodyState,
    grid: &Grid1D,
    statistics: Statistics,
    method: MethodArg,
    mc: &McArgs,
    r: &Resolved,
) -> Result<DensityMatrixGrid> {
    match (statistics, method) {
        (Statistics::Fermi, MethodArg::Closed) => Ok(rspdm_fermi(state, grid)),
        (Statistics::Bose, MethodArg::Mc) => rspdm_bose_mc(state, grid, &r.mc()),
        (_, MethodArg::Oracle) => {
            let panels = mc.panels.unwrap_or_else(|| default_panels(grid.len()));
            rspdm_quadrature_oracle(state, grid, statistics, panels)
        }
        (Statistics::Bose, MethodArg::Closed) => Err(Error::Config(
            "no closed form for the Bose density matrix; use --method mc or oracle".into(),
        )),
        (Statistics::Fermi, MethodArg::Mc) => Err(Error::Config(
            "the Fermi density matrix is exact in closed form; use --method closed or oracle"
                .into(),
        )),
    }
}

fn default_method(statistics: Statistics) -> MethodArg {
    match statistics {
        Statistics::Bose => MethodArg::Mc,
        Statistics::Fermi => MethodArg::Closed,
    }
}

struct MatrixRun {
    state: ManyBodyState,
    dm: DensityMatrixGrid,
}

fn matrix_run(args: &MatrixArgs, r: &Resolved) -> Result<MatrixRun> {
    let statistics: Statistics = args.statistics.into();
    let state = r
        .ground_state(&args.state, args.state.common.tol)?
        .with_statistics(statistics);
    let grid = grid(&state, &args.state)?;
    let method = args.method.unwrap_or_else(|| default_method(statistics));
    let dm = density_matrix(&state, &grid, statistics, method, &args.mc, r)?;
    Ok(MatrixRun { state, dm })
}

pub fn rspdm(args: &MatrixArgs, r: &Resolved) -> Result<Vec<Output>> {
    let run = matrix_run(args, r)?;
    let common = &args.state.common;
    match common.format {
        OutputFormat::Csv => {
            let mut out = vec![(common.out.clone(), emit::density_matrix_csv(&run.dm))];
            if let Some(err) = emit::density_matrix_stderr_csv(&run.dm) {
                out.push((sibling(&common.out, "stderr"), err));
            }
            Ok(out)
        }
        OutputFormat::Json => Ok(vec![(common.out.clone(), emit::to_json(&run.dm)?)]),
    }
}

pub fn momentum(args: &MatrixArgs, r: &Resolved) -> Result<Vec<Output>> {
    let statistics: Statistics = args.statistics.into();
    let md = match (statistics, args.method) {
        (Statistics::Fermi, None | Some(MethodArg::Closed)) => {
            let state = r.ground_state(&args.state, args.state.common.tol)?;
            fermi_momentum_distribution(&state)
        }
        _ => {
            let run = matrix_run(args, r)?;
            momentum_distribution(MomentumInput::Grid(&run.dm), statistics)?
        }
    };
    single(
        &args.state.common,
        || emit::momentum_csv(&md),
        || emit::to_json(&md),
    )
}

#[derive(Serialize)]
struct CutJson<'a> {
    statistics: Statistics,
    cut: &'a [tonks_core::observables::CutPoint],
    interior_variance: Estimate,
}

pub fn antidiag(args: &MatrixArgs, r: &Resolved) -> Result<Vec<Output>> {
    let run = matrix_run(args, r)?;
    let cut = antidiagonal_cut(&run.dm)?;
    let variance = antidiagonal_variance(&run.dm, CUT_INTERIOR)?;
    log::info!(
        "{} cut: interior variance {:.6e} ± {:.1e}",
        run.state.statistics(),
        variance.value,
        variance.sigma()
    );
    single(
        &args.state.common,
        || emit::cut_csv(&cut),
        || {
            emit::to_json(&CutJson {
                statistics: run.dm.statistics,
                cut: &cut,
                interior_variance: variance,
            })
        },
    )
}

fn row(quantity: &str, fermi: f64, bose: Estimate) -> ComparisonRow {
    ComparisonRow {
        quantity: quantity.to_string(),
        fermi,
        bose: bose.value,
        bose_stderr: bose.stderr,
    }
}

pub fn compare(args: &CompareArgs, r: &Resolved) -> Result<Vec<Output>> {
    let fermi_state = r.ground_state(&args.state, args.state.common.tol)?;
    let bose_state = fermi_state.clone().with_statistics(Statistics::Bose);
    let grid = grid(&fermi_state, &args.state)?;
    let method = match args.method {
        MethodArg::Closed => {
            return Err(Error::Config(
                "compare needs --method mc or oracle for the Bose side".into(),
            ))
        }
        m => m,
    };
    let fermi = rspdm_fermi(&fermi_state, &grid);
    let bose = density_matrix(&bose_state, &grid, Statistics::Bose, method, &args.mc, r)?;

    let rho_f = density_profile(&fermi_state, &grid);
    let rho_b = bose.diagonal();
    let diag_batches: Option<Vec<Vec<f64>>> = bose.batches.as_ref().map(|bs| {
        let n = grid.len();
        bs.iter()
            .map(|b| (0..n).map(|i| b[i * n + i]).collect())
            .collect()
    });
    let trace_b = Estimate {
        value: grid.integrate(&rho_b),
        stderr: diag_batches
            .as_ref()
            .map(|bs| batch_stderr(bs.iter().map(|d| grid.integrate(d)))),
    };
    let avg_f = averages_from_density(&fermi_state, &grid, &rho_f, None);
    let avg_b = averages_from_density(&bose_state, &grid, &rho_b, diag_batches.as_deref());

    let md_f = fermi_momentum_distribution(&fermi_state);
    let md_b = momentum_distribution(MomentumInput::Grid(&bose), Statistics::Bose)?;
    let occ0 = Estimate {
        value: md_b.occupation(0).unwrap_or(0.0),
        stderr: md_b.stderr_of(0),
    };
    let energy = total_energy(&fermi_state).lambda_sum;
    let var_f = antidiagonal_variance(&fermi, CUT_INTERIOR)?;
    let var_b = antidiagonal_variance(&bose, CUT_INTERIOR)?;

    let rows = vec![
        row("density_trace", grid.integrate(&rho_f), trace_b),
        row(
            "mean_z",
            avg_f.mean_z,
            Estimate {
                value: avg_b.mean_z,
                stderr: avg_b.mean_z_stderr,
            },
        ),
        row(
            "mean_potential_lambda",
            avg_f.mean_potential_lambda,
            Estimate {
                value: avg_b.mean_potential_lambda,
                stderr: avg_b.mean_potential_lambda_stderr,
            },
        ),
        // identical by the mapping; listed for completeness
        row(
            "total_energy_lambda",
            energy,
            Estimate::exact(total_energy(&bose_state).lambda_sum),
        ),
        row(
            "momentum_total",
            md_f.total(),
            md_b.linear_functional(|_| 1.0),
        ),
        row("n0", md_f.occupation(0).unwrap_or(0.0), occ0),
        row(
            "kappa_second_moment",
            second_moment(&md_f).value,
            second_moment(&md_b),
        ),
        row(
            "total_momentum",
            total_momentum(&md_f).value,
            total_momentum(&md_b),
        ),
        row("antidiagonal_variance", var_f.value, var_b),
    ];
    single(
        &args.state.common,
        || emit::comparison_csv(&rows),
        || emit::to_json(&rows),
    )
}
