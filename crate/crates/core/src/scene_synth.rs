//! Echo synthesis for a subarrayed wideband receiver.
//!
//! Each subcarrier observation is `Y_m = W^H (D_m Π D_m^T X_m + N̄_m)` where
//! `D_m` stacks the beam-split and coupling corrupted steering vectors and `W`
//! is the block-diagonal analog combiner that tiles the J = N / N_RF slots.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::array_model::{steering_corrupted, ArrayConfig, CouplingModel, Direction, SectorPlan};
use crate::error::{Error, Result};
use crate::numerics::{CMatrix, C64};

/// Magnitude profiles of the two coupling vectors used in the reference
/// experiments, leading 1 included.
pub const REFERENCE_COUPLING_MAGNITUDES: [[f64; 5]; 2] = [[1.0, 0.85, 0.8, 0.4, 0.2], [1.0, 0.9, 0.75, 0.45, 0.25]];

#[derive(Debug, Clone, PartialEq)]
pub struct Target {
    pub direction: Direction,
    pub reflection: C64,
}

#[derive(Debug, Clone)]
pub struct Scene {
    pub targets: Vec<Target>,
    pub coupling: CouplingModel,
    pub seed: u64,
}

impl Scene {
    pub fn new(targets: Vec<Target>, coupling: CouplingModel, seed: u64) -> Result<Self> {
        if targets.is_empty() {
            return Err(Error::Input("a scene needs at least one target".into()));
        }
        Ok(Self { targets, coupling, seed })
    }

    /// True physical angles, ascending.
    pub fn sorted_angles(&self) -> Vec<f64> {
        let mut a: Vec<f64> = self.targets.iter().map(|t| t.direction.physical()).collect();
        a.sort_by(f64::total_cmp);
        a
    }
}

/// Block-diagonal combiner with one N_RF×N_RF block per time slot.
#[derive(Debug, Clone)]
pub struct Combiner {
    pub blocks: Vec<CMatrix>,
    pub matrix: CMatrix,
}

#[derive(Debug, Clone)]
pub struct AcquisitionPlan {
    pub snapshots: usize,
    /// Radar transmit power P_r (linear).
    pub power: f64,
    /// Per-element noise variance σ_n² (linear).
    pub noise_var: f64,
    pub combiner: Combiner,
}

impl AcquisitionPlan {
    pub fn slots(&self) -> usize {
        self.combiner.blocks.len()
    }
}

#[derive(Debug, Clone)]
pub struct SnapshotSet {
    /// One N×T matrix per subcarrier.
    pub observations: Vec<CMatrix>,
    pub plan: AcquisitionPlan,
    pub scene: Scene,
}

impl SnapshotSet {
    pub fn combiner(&self) -> &CMatrix {
        &self.plan.combiner.matrix
    }
}

/// Power that makes ρ = P_r / (M N²) equal to one.
pub fn normalized_power(cfg: &ArrayConfig) -> f64 {
    let n = cfg.n_antennas() as f64;
    cfg.n_subcarriers() as f64 * n * n
}

/// σ_n² such that 10 log10(ρ / σ_n²) = snr_db.
pub fn snr_to_noise(snr_db: f64, rho: f64) -> f64 {
    rho * 10f64.powf(-snr_db / 10.0)
}

/// Circularly-symmetric complex Gaussian sample with the given variance.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> C64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re * s, im * s)
}

/// N×T probing block with i.i.d. CN(0, P_r / (M N)) entries.
pub fn gen_probing<R: Rng + ?Sized>(cfg: &ArrayConfig, plan: &AcquisitionPlan, rng: &mut R) -> CMatrix {
    let n = cfg.n_antennas();
    let var = plan.power / (cfg.n_subcarriers() as f64 * n as f64);
    if var == 0.0 {
        return CMatrix::zeros(n, plan.snapshots);
    }
    CMatrix::from_fn(n, plan.snapshots, |_, _| complex_gaussian(rng, var))
}

/// Random analog combiner: entries e^{jψ}/√N with ψ ~ U[-1, 1] rad, block j
/// occupying rows and columns j·N_RF .. (j+1)·N_RF.
pub fn gen_combiner<R: Rng + ?Sized>(cfg: &ArrayConfig, rng: &mut R) -> Combiner {
    let n = cfg.n_antennas();
    let n_rf = cfg.n_rf();
    let amp = 1.0 / (n as f64).sqrt();
    let blocks: Vec<CMatrix> = (0..cfg.n_slots())
        .map(|_| CMatrix::from_fn(n_rf, n_rf, |_, _| C64::from_polar(amp, rng.gen_range(-1.0..=1.0))))
        .collect();
    let mut matrix = CMatrix::zeros(n, n);
    for (j, block) in blocks.iter().enumerate() {
        let off = j * n_rf;
        for r in 0..n_rf {
            for c in 0..n_rf {
                matrix[(off + r, off + c)] = block[(r, c)];
            }
        }
    }
    Combiner { blocks, matrix }
}

/// Unit-magnitude reflection coefficients with uniform phase.
pub fn random_reflections<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Vec<C64> {
    (0..count).map(|_| C64::from_polar(1.0, rng.gen_range(-PI..PI))).collect()
}

/// Coupling model whose sector `s` uses magnitude profile `s mod profiles.len()`
/// with independent uniform phases on every off-diagonal coefficient, per
/// subcarrier.
pub fn random_phase_coupling<R: Rng + ?Sized>(
    profiles: &[Vec<f64>],
    sectors: SectorPlan,
    n_subcarriers: usize,
    rng: &mut R,
) -> Result<CouplingModel> {
    let band = profiles.first().map_or(0, Vec::len);
    if band == 0 || profiles.iter().any(|p| p.len() != band) {
        return Err(Error::Config("coupling magnitude profiles must share a positive length".into()));
    }
    let coeffs = (0..sectors.count())
        .map(|s| {
            let mags = &profiles[s % profiles.len()];
            (0..n_subcarriers)
                .map(|_| {
                    let mut c = Vec::with_capacity(band);
                    c.push(C64::new(1.0, 0.0));
                    c.extend(mags[1..].iter().map(|&r| C64::from_polar(r, rng.gen_range(-PI..PI))));
                    c
                })
                .collect()
        })
        .collect();
    CouplingModel::new(band, sectors, coeffs)
}

/// Per-subcarrier corrupted steering matrix D_m (N×K).
pub fn corrupted_steering_matrix(cfg: &ArrayConfig, scene: &Scene, m: usize) -> Result<CMatrix> {
    let cols = scene
        .targets
        .iter()
        .map(|t| steering_corrupted(cfg, &scene.coupling, t.direction, m, scene.coupling.sector_of(t.direction)))
        .collect::<Result<Vec<_>>>()?;
    CMatrix::from_columns(&cols)
}

pub fn synth_snapshots<R: Rng + ?Sized>(
    cfg: &ArrayConfig,
    scene: &Scene,
    plan: &AcquisitionPlan,
    rng: &mut R,
) -> Result<SnapshotSet> {
    let n = cfg.n_antennas();
    let t = plan.snapshots;
    if t == 0 {
        return Err(Error::Input("at least one snapshot is required".into()));
    }
    if plan.combiner.matrix.rows() != n || plan.combiner.matrix.cols() != n {
        return Err(Error::Dimension("combiner does not match the array size".into()));
    }
    if scene.coupling.n_subcarriers() != cfg.n_subcarriers() {
        return Err(Error::Dimension("coupling model and array disagree on subcarrier count".into()));
    }
    if scene.coupling.band() > n {
        return Err(Error::Dimension("coupling band wider than the array".into()));
    }
    let w_h = plan.combiner.matrix.adjoint();
    let k = scene.targets.len();
    let mut observations = Vec::with_capacity(cfg.n_subcarriers());
    for m in 0..cfg.n_subcarriers() {
        let d = corrupted_steering_matrix(cfg, scene, m)?;
        let x = gen_probing(cfg, plan, rng);
        // S = Π D^T X  (K×T)
        let mut s = CMatrix::zeros(k, t);
        for (kk, target) in scene.targets.iter().enumerate() {
            for ti in 0..t {
                let mut acc = C64::new(0.0, 0.0);
                for ni in 0..n {
                    acc += d[(ni, kk)] * x[(ni, ti)];
                }
                s[(kk, ti)] = target.reflection * acc;
            }
        }
        let mut field = d.matmul(&s)?;
        if plan.noise_var > 0.0 {
            for i in 0..n {
                for ti in 0..t {
                    field[(i, ti)] += complex_gaussian(rng, plan.noise_var);
                }
            }
        }
        observations.push(w_h.matmul(&field)?);
    }
    Ok(SnapshotSet { observations, plan: plan.clone(), scene: scene.clone() })
}
