//! Alternating DoA / beam-split / coupling estimation.
//!
//! Each pass builds the sector-wise spectra with the current coupling
//! estimates, picks the K strongest peaks, then re-estimates the coupling of
//! every (subcarrier, target) pair in closed form and files it under the
//! sector holding the estimated direction. Covariances and subspaces do not
//! depend on the calibration parameters and are computed once up front.

use crate::array_model::{steering_spatial, ArrayConfig, CouplingModel, SectorPlan};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::numerics::{CMatrix, C64};

use super::coupling::{coupling_cost, estimate_coupling_from_form};
use super::peaks::find_peaks_or_largest;
use super::spectrum::{AngleGrid, Mode, NullForms, SpectrumGrid, SpectrumModel};
use super::subspace::SubspaceDecomposition;

const POLISH_ITERATIONS: usize = 60;

#[derive(Debug, Clone)]
pub struct EstimatorOptions {
    pub grid_step_deg: f64,
    /// Stop once Σ_k |Δ sin θ̂_k| between passes falls to this value.
    pub epsilon: f64,
    pub max_iter: usize,
    pub sectors: SectorPlan,
    /// Number of coupling coefficients L, leading 1 included.
    pub band: usize,
    /// Golden-section refinement of each grid peak on the continuous spectrum.
    pub polish: bool,
    pub exec: Execution,
}

impl Default for EstimatorOptions {
    fn default() -> Self {
        Self {
            grid_step_deg: 0.02,
            epsilon: 1e-4,
            max_iter: 50,
            sectors: SectorPlan::uniform(6).expect("non-zero sector count"),
            band: 5,
            polish: true,
            exec: Execution::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CalibrationResult {
    /// Estimated physical DoAs (radians), ascending.
    pub doas: Vec<f64>,
    /// Δ̂[k][m] = (η_m - 1) sin θ̂_k.
    pub beam_split: Vec<Vec<f64>>,
    /// ĉ[k][m], leading entry exactly 1.
    pub coupling: Vec<Vec<Vec<C64>>>,
    /// Sector-wise coupling used for the next spectrum.
    pub sector_coupling: CouplingModel,
    /// DoA estimates after every pass.
    pub trace: Vec<Vec<f64>>,
    /// Σ_k Σ_m f(m, k) at (θ̂, ĉ) after every pass.
    pub objective: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    /// Spectrum of the final pass.
    pub spectrum: SpectrumGrid,
}

/// Per-subcarrier covariance and eigendecomposition.
pub fn decompose_all(observations: &[CMatrix], k: usize, exec: Execution) -> Result<Vec<SubspaceDecomposition>> {
    exec.map(observations.len(), |m| SubspaceDecomposition::new(&observations[m], k)).into_iter().collect()
}

/// Reusable per-run state: subspaces and the null-space quadratic forms.
#[derive(Debug, Clone)]
pub struct Workspace {
    pub decompositions: Vec<SubspaceDecomposition>,
    pub forms: NullForms,
}

impl Workspace {
    pub fn new(
        cfg: &ArrayConfig,
        observations: &[CMatrix],
        combiner: &CMatrix,
        k: usize,
        exec: Execution,
    ) -> Result<Self> {
        if observations.len() != cfg.n_subcarriers() {
            return Err(Error::Input(format!(
                "{} observation matrices for {} subcarriers",
                observations.len(),
                cfg.n_subcarriers()
            )));
        }
        let decompositions = decompose_all(observations, k, exec)?;
        let forms = NullForms::with_execution(&decompositions, combiner, exec)?;
        Ok(Self { decompositions, forms })
    }
}

/// Runs the estimator for `mode`. PLAIN and BSC are single-pass; MCC and
/// CREAM alternate with coupling estimation.
pub fn estimate(
    cfg: &ArrayConfig,
    observations: &[CMatrix],
    combiner: &CMatrix,
    k: usize,
    mode: Mode,
    opts: &EstimatorOptions,
) -> Result<CalibrationResult> {
    let ws = Workspace::new(cfg, observations, combiner, k, opts.exec)?;
    estimate_with(cfg, &ws, k, mode, opts)
}

/// The beam-split and coupling calibrated estimator.
pub fn cream_music(
    cfg: &ArrayConfig,
    observations: &[CMatrix],
    combiner: &CMatrix,
    k: usize,
    opts: &EstimatorOptions,
) -> Result<CalibrationResult> {
    estimate(cfg, observations, combiner, k, Mode::Cream, opts)
}

pub fn estimate_with(
    cfg: &ArrayConfig,
    ws: &Workspace,
    k: usize,
    mode: Mode,
    opts: &EstimatorOptions,
) -> Result<CalibrationResult> {
    if opts.epsilon <= 0.0 {
        return Err(Error::Parameter("convergence threshold must be positive".into()));
    }
    if opts.max_iter == 0 {
        return Err(Error::Parameter("at least one iteration is required".into()));
    }
    if opts.band == 0 || opts.band > cfg.n_antennas() {
        return Err(Error::Parameter(format!("coupling band {} invalid for {} antennas", opts.band, cfg.n_antennas())));
    }
    let grid = AngleGrid::new(opts.grid_step_deg)?;
    if grid.len() < 2 * k + 1 {
        return Err(Error::Parameter("angle grid too coarse for the number of sources".into()));
    }
    let n_sub = cfg.n_subcarriers();
    let ratios: Vec<f64> = if mode.compensates_split() { cfg.ratios().to_vec() } else { vec![1.0; n_sub] };
    let max_iter = if mode.uses_coupling() { opts.max_iter } else { 1 };

    let mut sector_coupling = CouplingModel::identity(opts.band, opts.sectors.clone(), n_sub);
    let mut trace: Vec<Vec<f64>> = Vec::new();
    let mut objective = Vec::new();
    let mut converged = false;
    let mut last: Option<(Vec<f64>, Vec<Vec<Vec<C64>>>, SpectrumGrid)> = None;

    for _ in 0..max_iter {
        let model = SpectrumModel::new(cfg, &ws.forms, mode, Some(&sector_coupling), opts.exec)?;
        let spec = model.evaluate(&grid, opts.exec);
        let mut doas = find_peaks_or_largest(&spec, k)?;
        if opts.polish {
            let h = opts.grid_step_deg.to_radians();
            for d in doas.iter_mut() {
                *d = polish_peak(&model, *d, h);
            }
            doas.sort_by(f64::total_cmp);
        }

        let coupling: Vec<Vec<Vec<C64>>> = if mode.uses_coupling() {
            doas.iter()
                .enumerate()
                .map(|(kk, &th)| {
                    (0..n_sub)
                        .map(|m| {
                            let a = steering_spatial(cfg.n_antennas(), ratios[m] * th.sin());
                            estimate_coupling_from_form(ws.forms.form(m), &a, opts.band).map_err(|e| {
                                Error::Numerical(format!("coupling estimate for subcarrier {m}, target {kk}: {e}"))
                            })
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            let mut unit = vec![C64::new(0.0, 0.0); opts.band];
            unit[0] = C64::new(1.0, 0.0);
            vec![vec![unit; n_sub]; k]
        };

        objective.push(
            doas.iter()
                .zip(&coupling)
                .map(|(&th, per_m)| {
                    (0..n_sub)
                        .map(|m| {
                            let a = steering_spatial(cfg.n_antennas(), ratios[m] * th.sin());
                            coupling_cost(ws.forms.form(m), &a, &per_m[m])
                        })
                        .sum::<f64>()
                })
                .sum(),
        );

        if mode.uses_coupling() {
            assign_sectors(&mut sector_coupling, &model, &doas, &coupling)?;
        }

        let done = trace.last().is_some_and(|prev: &Vec<f64>| {
            prev.iter().zip(&doas).map(|(a, b)| (a.sin() - b.sin()).abs()).sum::<f64>() <= opts.epsilon
        });
        trace.push(doas.clone());
        last = Some((doas, coupling, spec));
        if done || !mode.uses_coupling() {
            converged = true;
            break;
        }
    }

    let (doas, coupling, spectrum) = last.expect("at least one pass");
    let beam_split = doas.iter().map(|&th| cfg.ratios().iter().map(|eta| (eta - 1.0) * th.sin()).collect()).collect();
    Ok(CalibrationResult {
        doas,
        beam_split,
        coupling,
        sector_coupling,
        iterations: trace.len(),
        trace,
        objective,
        converged,
        spectrum,
    })
}

/// Files each target's coefficients under the sector of its estimate. When
/// several targets share a sector the one with the strongest peak wins.
fn assign_sectors(
    sector_coupling: &mut CouplingModel,
    model: &SpectrumModel,
    doas: &[f64],
    coupling: &[Vec<Vec<C64>>],
) -> Result<()> {
    let plan = sector_coupling.sectors().clone();
    for s in 0..plan.count() {
        let best = doas
            .iter()
            .enumerate()
            .filter(|(_, &th)| plan.sector_of(th) == s)
            .max_by(|(_, &a), (_, &b)| model.total(a).total_cmp(&model.total(b)))
            .map(|(kk, _)| kk);
        if let Some(kk) = best {
            for (m, c) in coupling[kk].iter().enumerate() {
                sector_coupling.set_coefficients(s, m, c.clone())?;
            }
        }
    }
    Ok(())
}

/// Golden-section search for the maximum of the summed spectrum within one
/// grid step of `center`.
fn polish_peak(model: &SpectrumModel, center: f64, h: f64) -> f64 {
    let lo_bound = -std::f64::consts::FRAC_PI_2;
    let hi_bound = std::f64::consts::FRAC_PI_2;
    let mut lo = (center - h).max(lo_bound);
    let mut hi = (center + h).min(hi_bound);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = model.total(x1);
    let mut f2 = model.total(x2);
    for _ in 0..POLISH_ITERATIONS {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = model.total(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = model.total(x1);
        }
    }
    let best = 0.5 * (lo + hi);
    if model.total(best) >= model.total(center) {
        best
    } else {
        center
    }
}

/// Root-mean-square error over trials. Estimates and truths are paired by
/// sorted order within each trial; the result is in the input's unit.
pub fn rmse(estimates: &[Vec<f64>], truths: &[Vec<f64>]) -> Result<f64> {
    if estimates.len() != truths.len() || estimates.is_empty() {
        return Err(Error::Input(format!("{} estimate sets for {} truth sets", estimates.len(), truths.len())));
    }
    let mut acc = 0.0;
    let mut count = 0usize;
    for (est, tru) in estimates.iter().zip(truths) {
        if est.len() != tru.len() {
            return Err(Error::Input(format!("{} estimates for {} targets", est.len(), tru.len())));
        }
        let mut e = est.clone();
        let mut t = tru.clone();
        e.sort_by(f64::total_cmp);
        t.sort_by(f64::total_cmp);
        acc += e.iter().zip(&t).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
        count += e.len();
    }
    Ok((acc / count as f64).sqrt())
}
