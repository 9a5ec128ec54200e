//! Task runners behind the CLI subcommands: compute, then write CSV
//! tables plus a manifest into the output directory.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, Context, Result};
use rayon::prelude::*;
use serde_json::{json, Value};

use dce_core::{
    build_mode_function, enumerate_lowest_modes, error_order_fit, kx_te_first_order,
    kx_tm_first_order, photon_number_rwa, resonant_drive, solve_mode, squeezing_rate,
    CavityGeometry, EvolutionResult, ModeIndex, PermittivityPair, Polarization, SolvedMode,
};

use crate::config::{EstimateConfig, EvolveConfig, ScenarioConfig, SpectrumConfig, SweepConfig};
use crate::estimate::estimate_physical;
use crate::output::{num, write_csv, write_manifest};

/// Execute a parsed scenario, writing per-task tables and a manifest.
/// Identical configs produce bitwise-identical files.
pub fn run_scenario(config: &ScenarioConfig, out_dir: &Path) -> Result<()> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let results = match config {
        ScenarioConfig::Spectrum(c) => run_spectrum(c, out_dir)?,
        ScenarioConfig::Sweep(c) => run_sweep(c, out_dir)?,
        ScenarioConfig::Evolve(c) => run_evolve(c, out_dir)?,
        ScenarioConfig::Estimate(c) => run_estimate(c, out_dir)?,
    };
    write_manifest(out_dir, config, results)?;
    Ok(())
}

fn run_spectrum(config: &SpectrumConfig, out_dir: &Path) -> Result<Value> {
    let geom = config.geometry;
    geom.validate()?;
    config.permittivity.validate()?;
    let solved: Vec<SolvedMode> = if let Some(modes) = &config.modes {
        modes
            .par_iter()
            .map(|mode| {
                solve_mode(mode, &geom, &config.permittivity)
                    .map(|solution| SolvedMode { mode: *mode, solution })
                    .map_err(anyhow::Error::from)
            })
            .collect::<Result<_>>()?
    } else {
        let count = config
            .count
            .ok_or_else(|| anyhow!("spectrum task needs either `count` or `modes`"))?;
        enumerate_lowest_modes(&geom, &config.permittivity, count)?
    };

    let rows: Vec<Vec<String>> = solved
        .iter()
        .map(|sm| {
            vec![
                sm.mode.n_x.to_string(),
                sm.mode.n_y.to_string(),
                sm.mode.n_z.to_string(),
                sm.mode.pol.label().to_string(),
                num(sm.solution.omega),
                num(sm.solution.omega_sq()),
                num(sm.solution.s_slab),
                num(sm.solution.s_bulk),
                num(sm.solution.k_par_sq),
                num(sm.solution.k_perp),
            ]
        })
        .collect();
    write_csv(
        &out_dir.join("spectrum.csv"),
        &[
            "n_x", "n_y", "n_z", "pol", "omega", "omega_sq", "s_slab", "s_bulk", "k_par_sq",
            "k_perp",
        ],
        &rows,
    )?;
    Ok(json!({ "modes": solved.len() }))
}

fn run_sweep(config: &SweepConfig, out_dir: &Path) -> Result<Value> {
    let eps = config.permittivity;
    eps.validate()?;
    // one grid point per (mode, a/L); dispatched to the worker pool and
    // written in grid order
    let grid: Vec<(usize, &ModeIndex, f64)> = config
        .modes
        .iter()
        .flat_map(|m| config.a_over_l.iter().map(move |a| (m, *a)))
        .enumerate()
        .map(|(i, (m, a))| (i, m, a))
        .collect();
    let mut rows: Vec<(usize, Vec<String>)> = grid
        .par_iter()
        .map(|(i, mode, a_over_l)| -> Result<(usize, Vec<String>)> {
            let geom = CavityGeometry::new(
                config.l,
                config.l_y,
                config.l_z,
                a_over_l * config.l,
            )?;
            let sol = solve_mode(mode, &geom, &eps)?;
            if sol.s_bulk <= 0.0 {
                return Err(anyhow!("bulk wavenumber imaginary at a/L = {a_over_l}"));
            }
            let exact = sol.s_bulk.sqrt();
            let first_order = match mode.pol {
                Polarization::Te => kx_te_first_order(mode, &geom)?,
                Polarization::Tm => kx_tm_first_order(mode, &geom, &eps)?,
            };
            Ok((
                *i,
                vec![
                    mode.n_x.to_string(),
                    mode.n_y.to_string(),
                    mode.n_z.to_string(),
                    mode.pol.label().to_string(),
                    num(*a_over_l),
                    num(exact),
                    num(first_order),
                    num((exact - first_order).abs()),
                ],
            ))
        })
        .collect::<Result<_>>()?;
    rows.sort_by_key(|(i, _)| *i);
    write_csv(
        &out_dir.join("sweep.csv"),
        &[
            "n_x",
            "n_y",
            "n_z",
            "pol",
            "a_over_l",
            "kx_bulk_exact",
            "kx_bulk_first_order",
            "abs_residual",
        ],
        &rows.into_iter().map(|(_, r)| r).collect::<Vec<_>>(),
    )?;

    // per-mode error-order fits over the same sweep
    let base = CavityGeometry::new(config.l, config.l_y, config.l_z, 0.5 * config.l)?;
    let mut fit_rows = Vec::new();
    let mut fits = Vec::new();
    for mode in &config.modes {
        let fit = error_order_fit(mode, &base, &config.a_over_l, &eps)?;
        fit_rows.push(vec![
            mode.n_x.to_string(),
            mode.n_y.to_string(),
            mode.n_z.to_string(),
            mode.pol.label().to_string(),
            num(fit.slope),
            fit.claimed_order.to_string(),
        ]);
        fits.push(json!({
            "mode": format!("{mode}"),
            "slope": fit.slope,
            "claimed_order": fit.claimed_order,
        }));
    }
    write_csv(
        &out_dir.join("error_order_fits.csv"),
        &["n_x", "n_y", "n_z", "pol", "fitted_slope", "claimed_order"],
        &fit_rows,
    )?;
    Ok(json!({ "fits": fits }))
}

/// Shared by the CLI task and the acceptance scenarios: resonant drive,
/// evolution (with optional auto step doubling), and the first-order
/// rate for the rotating-wave reference.
pub fn evolve_from_config(config: &EvolveConfig) -> Result<(EvolutionResult, f64)> {
    let geom = config.geometry;
    let drive = resonant_drive(
        &config.mode,
        &geom,
        config.drive.xi,
        config.drive.chi,
        config.drive.eps_bulk,
        config.drive.delta,
    )?;
    let duration = config.periods as f64 * drive.period();
    let result = if config.auto_steps {
        dce_core::evolve_auto(
            &config.mode,
            &geom,
            &drive,
            duration,
            config.steps_per_period,
            config.method,
        )?
    } else {
        dce_core::evolve_bogoliubov(
            &config.mode,
            &geom,
            &drive,
            duration,
            config.steps_per_period,
            config.method,
        )?
    };
    let rate = squeezing_rate(&config.mode, &geom, &drive)?;
    Ok((result, rate))
}

fn run_evolve(config: &EvolveConfig, out_dir: &Path) -> Result<Value> {
    let (result, rate) = evolve_from_config(config)?;
    let rows: Vec<Vec<String>> = result
        .times
        .iter()
        .enumerate()
        .map(|(j, t)| {
            vec![
                j.to_string(),
                num(*t),
                num(result.alpha[j].re),
                num(result.alpha[j].im),
                num(result.beta[j].re),
                num(result.beta[j].im),
                num(result.photon_number[j]),
                num(photon_number_rwa(rate, *t)),
            ]
        })
        .collect();
    write_csv(
        &out_dir.join("evolve.csv"),
        &[
            "period",
            "time",
            "alpha_re",
            "alpha_im",
            "beta_re",
            "beta_im",
            "photon_number",
            "photon_number_rwa",
        ],
        &rows,
    )?;
    Ok(json!({
        "omega0": result.omega0,
        "squeezing_rate": rate,
        "steps_per_period": result.steps_per_period,
        "wronskian_drift": result.wronskian_drift,
        "final_photon_number": result.final_photon_number(),
    }))
}

fn run_estimate(config: &EstimateConfig, out_dir: &Path) -> Result<Value> {
    let est = estimate_physical(
        config.wavelength_cm,
        config.chi_over_eps_bulk,
        config.a_over_l,
        config.target_photons,
    )?;
    let warning_text = est.warnings.join("; ");
    write_csv(
        &out_dir.join("estimate.csv"),
        &[
            "wavelength_cm",
            "cavity_side_cm",
            "drive_frequency_ghz",
            "squeezing_rate_per_s",
            "target_photons",
            "time_to_target_s",
            "warnings",
        ],
        &[vec![
            num(config.wavelength_cm),
            num(est.cavity_side_cm),
            num(est.drive_frequency_ghz),
            num(est.squeezing_rate_per_s),
            num(est.target_photons),
            num(est.time_to_target_s),
            format!("\"{warning_text}\""),
        ]],
    )?;
    Ok(serde_json::to_value(&est)?)
}

/// Gram matrix of the lowest modes of a slab cavity; exposed for the
/// orthonormality scenario.
pub fn gram_matrix(
    geom: &CavityGeometry,
    eps: &PermittivityPair,
    count: usize,
) -> Result<Vec<Vec<f64>>> {
    let solved = enumerate_lowest_modes(geom, eps, count)?;
    let functions: Vec<_> = solved
        .iter()
        .map(|sm| build_mode_function(&sm.solution, &sm.mode, geom, eps))
        .collect::<dce_core::Result<_>>()?;
    let n = functions.len();
    let mut gram = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = dce_core::overlap(&functions[i], &functions[j])?;
            gram[i][j] = v;
            gram[j][i] = v;
        }
    }
    Ok(gram)
}
