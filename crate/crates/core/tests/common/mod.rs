#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thz_doa::array_model::{ArrayConfig, CouplingModel, Direction, SectorPlan};
use thz_doa::numerics::C64;
use thz_doa::scene_synth::*;

pub fn desk() -> ArrayConfig {
    ArrayConfig::new(64, 8, 300e9, 30e9, 16).unwrap()
}

pub fn reference_coupling(cfg: &ArrayConfig, rng: &mut ChaCha8Rng) -> CouplingModel {
    let profiles: Vec<Vec<f64>> = REFERENCE_COUPLING_MAGNITUDES.iter().map(|p| p.to_vec()).collect();
    random_phase_coupling(&profiles, SectorPlan::uniform(6).unwrap(), cfg.n_subcarriers(), rng).unwrap()
}

/// Targets at `angles_deg` with random unit reflections; `snr_db = None` is noiseless.
pub fn synth(
    cfg: &ArrayConfig,
    angles_deg: &[f64],
    coupling: CouplingModel,
    snr_db: Option<f64>,
    snapshots: usize,
    seed: u64,
) -> SnapshotSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let refl = random_reflections(angles_deg.len(), &mut rng);
    let targets = angles_deg
        .iter()
        .zip(refl)
        .map(|(&a, reflection)| Target { direction: Direction::from_degrees(a).unwrap(), reflection })
        .collect();
    let scene = Scene::new(targets, coupling, seed).unwrap();
    let plan = AcquisitionPlan {
        snapshots,
        power: normalized_power(cfg),
        noise_var: snr_db.map_or(0.0, |s| snr_to_noise(s, 1.0)),
        combiner: gen_combiner(cfg, &mut rng),
    };
    synth_snapshots(cfg, &scene, &plan, &mut rng).unwrap()
}

pub fn rel_err(a: &[C64], b: &[C64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (num / den).sqrt()
}
