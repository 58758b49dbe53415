use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::array_model::{array_gain, ArrayConfig, CouplingModel, Direction, SectorPlan};
use crate::error::{Error, Result};
use crate::estimator::{estimate, rmse, Mode};
use crate::exec::Execution;
use crate::numerics::C64;
use crate::scene_synth::{
    gen_combiner, normalized_power, random_phase_coupling, random_reflections, snr_to_noise, synth_snapshots,
    AcquisitionPlan, Scene, SnapshotSet, Target,
};

use super::config::{AngleSpec, ExperimentConfig, PowerSpec, ReflectionSpec};
use super::table::ResultTable;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const SWEEP_COLUMNS: [&str; 5] = ["mode", "snr_db", "rmse_deg", "trials", "failures"];
pub const SPECTRUM_COLUMNS: [&str; 4] = ["mode", "m", "theta_deg", "value"];
pub const GAIN_COLUMNS: [&str; 3] = ["m", "theta_bar", "gain"];

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub exec: Execution,
    /// Adds a `wall_time_s` column; output is then no longer reproducible.
    pub timing: bool,
}

/// RNG for one sweep cell trial, independent of every other cell.
pub fn trial_rng(master: u64, mode: Mode, snr_index: usize, trial: usize) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update(mode.name().as_bytes());
    h.update((snr_index as u64).to_le_bytes());
    h.update((trial as u64).to_le_bytes());
    ChaCha8Rng::from_seed(h.finalize().into())
}

/// Target angles in degrees, ascending.
pub fn draw_angles<R: Rng + ?Sized>(cfg: &ExperimentConfig, rng: &mut R) -> Vec<f64> {
    let k = cfg.scene.n_targets;
    let mut angles = match &cfg.scene.angles {
        AngleSpec::Fixed(a) => a.clone(),
        AngleSpec::Random(_) => {
            let bound = cfg.sweep.angle_bound_deg;
            let sep = cfg.sweep.min_separation_deg;
            loop {
                let mut a: Vec<f64> = (0..k).map(|_| rng.gen_range(-bound..=bound)).collect();
                a.sort_by(f64::total_cmp);
                if a.windows(2).all(|w| w[1] - w[0] >= sep) {
                    break a;
                }
            }
        }
    };
    angles.sort_by(f64::total_cmp);
    angles
}

pub fn draw_coupling<R: Rng + ?Sized>(cfg: &ExperimentConfig, rng: &mut R) -> Result<CouplingModel> {
    let c = &cfg.scene.coupling;
    let sectors = SectorPlan::uniform(c.sectors)?;
    let n_sub = cfg.array.n_subcarriers;
    if !c.enabled {
        return Ok(CouplingModel::identity(c.band, sectors, n_sub));
    }
    match &c.phases_deg {
        None => random_phase_coupling(&c.magnitudes, sectors, n_sub, rng),
        Some(phases) => {
            let coeffs = (0..sectors.count())
                .map(|s| {
                    let p = s % c.magnitudes.len();
                    let v: Vec<C64> = c.magnitudes[p]
                        .iter()
                        .zip(&phases[p])
                        .map(|(&r, &ph)| C64::from_polar(r, ph.to_radians()))
                        .collect();
                    vec![v; n_sub]
                })
                .collect();
            CouplingModel::new(c.band, sectors, coeffs)
        }
    }
}

/// One synthesized scenario. `snr_db = None` gives noiseless data.
pub fn synth_trial<R: Rng + ?Sized>(
    cfg: &ExperimentConfig,
    array: &ArrayConfig,
    snr_db: Option<f64>,
    rng: &mut R,
) -> Result<SnapshotSet> {
    let angles = draw_angles(cfg, rng);
    let k = angles.len();
    let reflections = match cfg.scene.reflection {
        ReflectionSpec::UnitRandomPhase => random_reflections(k, rng),
        ReflectionSpec::Unit => vec![C64::new(1.0, 0.0); k],
    };
    let coupling = draw_coupling(cfg, rng)?;
    let targets = angles
        .iter()
        .zip(reflections)
        .map(|(&a, reflection)| Ok(Target { direction: Direction::from_degrees(a)?, reflection }))
        .collect::<Result<Vec<_>>>()?;
    let power = match cfg.acquisition.power {
        PowerSpec::Linear(p) => p,
        PowerSpec::Named(_) => normalized_power(array),
    };
    let rho = power / normalized_power(array);
    let noise_var = snr_db.map_or(0.0, |s| snr_to_noise(s, rho));
    let combiner = gen_combiner(array, rng);
    let seed = rng.gen();
    let scene = Scene::new(targets, coupling, seed)?;
    let plan = AcquisitionPlan { snapshots: cfg.acquisition.snapshots, power, noise_var, combiner };
    synth_snapshots(array, &scene, &plan, rng)
}

fn header(table: &mut ResultTable, cfg: &ExperimentConfig, kind: &str) {
    table.push_meta("tool", format!("thz-doa {VERSION}"));
    table.push_meta("table", kind);
    table.push_meta("config_hash", cfg.hash());
    table.push_meta("seed", cfg.sweep.seed);
}

#[derive(Debug, Clone)]
struct TrialOutcome {
    estimate_deg: Option<Vec<f64>>,
    truth_deg: Vec<f64>,
}

/// Monte-Carlo RMSE for every (mode, SNR) cell, one row per cell in config
/// order. Trials that fail are excluded from the RMSE and counted.
pub fn run_sweep(cfg: &ExperimentConfig, opts: RunOptions) -> Result<ResultTable> {
    cfg.validate()?;
    let array = cfg.array_config()?;
    let est = cfg.estimator_options(Execution::Sequential)?;
    let modes = &cfg.estimator.modes;
    let snrs = &cfg.sweep.snr_db;
    let trials = cfg.sweep.trials;
    let k = cfg.scene.n_targets;

    let mut columns = SWEEP_COLUMNS.to_vec();
    if opts.timing {
        columns.push("wall_time_s");
    }
    let mut table = ResultTable::new(&columns);
    header(&mut table, cfg, "sweep");

    for &mode in modes {
        for (si, &snr) in snrs.iter().enumerate() {
            let start = Instant::now();
            let outcomes: Vec<Result<TrialOutcome>> = opts.exec.map(trials, |t| {
                let mut rng = trial_rng(cfg.sweep.seed, mode, si, t);
                let set = synth_trial(cfg, &array, Some(snr), &mut rng)?;
                let truth_deg = set.scene.sorted_angles().iter().map(|a| a.to_degrees()).collect();
                let estimate_deg = estimate(&array, &set.observations, set.combiner(), k, mode, &est)
                    .ok()
                    .map(|r| r.doas.iter().map(|d| d.to_degrees()).collect());
                Ok(TrialOutcome { estimate_deg, truth_deg })
            });
            let outcomes = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
            let (ok, failed): (Vec<_>, Vec<_>) = outcomes.into_iter().partition(|o| o.estimate_deg.is_some());
            if ok.is_empty() {
                return Err(Error::Estimation(format!("every trial failed for {mode} at {snr} dB")));
            }
            let est_deg: Vec<Vec<f64>> = ok.iter().map(|o| o.estimate_deg.clone().unwrap_or_default()).collect();
            let truth: Vec<Vec<f64>> = ok.iter().map(|o| o.truth_deg.clone()).collect();
            let value = rmse(&est_deg, &truth)?;
            let mut row = vec![
                mode.name().to_string(),
                snr.to_string(),
                value.to_string(),
                trials.to_string(),
                failed.len().to_string(),
            ];
            if opts.timing {
                row.push(format!("{:.3}", start.elapsed().as_secs_f64()));
            }
            table.push_row(row)?;
        }
    }
    Ok(table)
}

/// Spectra of one seeded scenario for every configured mode: one row per
/// grid angle for each subcarrier (`m` = 1..M) and for the sum (`m` = sum).
/// Targets come from the config; `snr_db = None` gives noiseless data.
pub fn run_spectra(cfg: &ExperimentConfig, snr_db: Option<f64>, opts: RunOptions) -> Result<ResultTable> {
    cfg.validate()?;
    let array = cfg.array_config()?;
    let est = cfg.estimator_options(opts.exec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.sweep.seed);
    let set = synth_trial(cfg, &array, snr_db, &mut rng)?;

    let mut table = ResultTable::new(&SPECTRUM_COLUMNS);
    header(&mut table, cfg, "spectra");
    table.push_meta("snr_db", snr_db.map_or("noiseless".to_string(), |s| s.to_string()));
    let truth: Vec<String> = set.scene.sorted_angles().iter().map(|a| a.to_degrees().to_string()).collect();
    table.push_meta("targets_deg", truth.join(" "));

    for &mode in &cfg.estimator.modes {
        let r = estimate(&array, &set.observations, set.combiner(), cfg.scene.n_targets, mode, &est)?;
        let spec = &r.spectrum;
        let angles_deg: Vec<f64> = spec.angles.iter().map(|a| a.to_degrees()).collect();
        for (m, values) in spec.per_subcarrier.iter().enumerate() {
            let label = (m + 1).to_string();
            for (a, v) in angles_deg.iter().zip(values) {
                table.push_row(vec![mode.name().into(), label.clone(), a.to_string(), v.to_string()])?;
            }
        }
        for (a, v) in angles_deg.iter().zip(&spec.total) {
            table.push_row(vec![mode.name().into(), "sum".into(), a.to_string(), v.to_string()])?;
        }
        let doas: Vec<String> = r.doas.iter().map(|d| d.to_degrees().to_string()).collect();
        table.push_meta(&format!("doa_deg_{}", mode.name()), doas.join(" "));
    }
    Ok(table)
}

/// Normalized array gain over θ̄ ∈ [-1, 1] for a target at `angle_deg`
/// received at subcarrier `m` (1-based). The analytic argmax η_m sin θ̃ is
/// recorded in the header.
pub fn run_gain(cfg: &ExperimentConfig, angle_deg: f64, m: usize, step: f64) -> Result<ResultTable> {
    cfg.validate()?;
    let array = cfg.array_config()?;
    if m == 0 || m > array.n_subcarriers() {
        return Err(Error::Index(format!("subcarrier {m} outside 1..={}", array.n_subcarriers())));
    }
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::Parameter(format!("gain grid step {step} must lie in (0, 1]")));
    }
    let dir = Direction::from_degrees(angle_deg)?;
    let idx = m - 1;
    let argmax = array.ratio(idx)? * dir.spatial();

    let mut table = ResultTable::new(&GAIN_COLUMNS);
    header(&mut table, cfg, "gain");
    table.push_meta("angle_deg", angle_deg);
    table.push_meta("argmax_theta_bar", argmax);
    let n = (2.0 / step).round() as usize;
    for i in 0..=n {
        let tb = (-1.0 + i as f64 * step).min(1.0);
        let g = array_gain(&array, dir.spatial(), tb, idx)?;
        table.push_row(vec![m.to_string(), tb.to_string(), g.to_string()])?;
    }
    Ok(table)
}

/// Physical angle (degrees) of the PLAIN per-subcarrier peak for a target at
/// `angle_deg`: asin(η_m sin θ̃).
pub fn split_peak_deg(array: &ArrayConfig, angle_deg: f64, m: usize) -> Result<f64> {
    let s = array.ratio(m)? * angle_deg.to_radians().sin();
    Ok(s.clamp(-1.0, 1.0).asin() * 180.0 / PI)
}
