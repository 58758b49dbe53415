//! MUSIC pseudo-spectra for the four steering models.
//!
//! For a fixed subcarrier and coupling matrix the null-spectrum denominator
//! `a^H(x) C^H Q_m C a(x)`, with `Q_m = W U_N U_N^H W^H`, is a trigonometric
//! polynomial in `z = exp(jπx)` whose coefficients are the diagonal sums of
//! `C^H Q_m C`. Those coefficients are computed once per (subcarrier, sector)
//! so each grid point costs O(N) instead of O(N²).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::array_model::{apply_banded, ArrayConfig, CouplingModel};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::numerics::{CMatrix, C64};

use super::subspace::SubspaceDecomposition;

pub const DENOMINATOR_FLOOR: f64 = 1e-30;

/// Which corruptions the candidate steering vector accounts for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Mode {
    /// Nominal steering, no coupling.
    Plain,
    /// Beam-split compensated steering, no coupling.
    Bsc,
    /// Nominal steering with estimated coupling.
    Mcc,
    /// Beam-split compensated steering with estimated coupling.
    Cream,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Plain, Mode::Bsc, Mode::Mcc, Mode::Cream];

    pub fn compensates_split(self) -> bool {
        matches!(self, Mode::Bsc | Mode::Cream)
    }

    pub fn uses_coupling(self) -> bool {
        matches!(self, Mode::Mcc | Mode::Cream)
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Plain => "PLAIN",
            Mode::Bsc => "BSC",
            Mode::Mcc => "MCC",
            Mode::Cream => "CREAM",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Input(format!("unknown mode `{s}`")))
    }
}

/// Uniform physical-angle grid over [-90°, 90°].
#[derive(Debug, Clone, PartialEq)]
pub struct AngleGrid {
    step_deg: f64,
    angles: Vec<f64>,
}

impl AngleGrid {
    /// ⌈180 / step⌉ + 1 points; the last interval is shortened to end at 90°.
    pub fn new(step_deg: f64) -> Result<Self> {
        if !(step_deg > 0.0 && step_deg <= 90.0) {
            return Err(Error::Parameter(format!("grid step {step_deg}° must lie in (0, 90]")));
        }
        let intervals = (180.0 / step_deg - 1e-9).ceil() as usize;
        let angles = (0..=intervals)
            .map(|i| {
                let deg = if i == intervals { 90.0 } else { -90.0 + step_deg * i as f64 };
                deg.to_radians()
            })
            .collect();
        Ok(Self { step_deg, angles })
    }

    pub fn step_deg(&self) -> f64 {
        self.step_deg
    }

    /// Physical angles in radians, ascending.
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }
}

/// Spectra over a grid: one row per subcarrier plus their sum.
#[derive(Debug, Clone)]
pub struct SpectrumGrid {
    pub angles: Vec<f64>,
    pub per_subcarrier: Vec<Vec<f64>>,
    pub total: Vec<f64>,
}

/// Per-subcarrier `Q_m = W U_N U_N^H W^H`, the quadratic form behind every
/// null-spectrum and coupling cost.
#[derive(Debug, Clone)]
pub struct NullForms {
    forms: Vec<CMatrix>,
}

impl NullForms {
    pub fn new(decompositions: &[SubspaceDecomposition], combiner: &CMatrix) -> Result<Self> {
        Self::with_execution(decompositions, combiner, Execution::Sequential)
    }

    pub fn with_execution(
        decompositions: &[SubspaceDecomposition],
        combiner: &CMatrix,
        exec: Execution,
    ) -> Result<Self> {
        let forms = exec
            .map(decompositions.len(), |m| {
                let g = combiner.matmul(&decompositions[m].noise_subspace())?;
                Ok(g.matmul(&g.adjoint())?.hermitian_part())
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { forms })
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn form(&self, m: usize) -> &CMatrix {
        &self.forms[m]
    }

    /// Direct evaluation of v^H Q_m v.
    pub fn quadratic(&self, m: usize, v: &[C64]) -> f64 {
        let q = &self.forms[m];
        let qv = q.mul_vec(v).expect("vector length matches the array");
        crate::numerics::inner(v, &qv).re
    }
}

/// Coefficients r_d of f(z) = r_0 + 2 Re Σ_{d≥1} r_d z^d.
#[derive(Debug, Clone)]
pub(crate) struct NullPolynomial {
    coeffs: Vec<C64>,
}

impl NullPolynomial {
    /// From M = C^H Q C with C the banded Toeplitz of `coupling` (identity if `None`).
    pub(crate) fn new(q: &CMatrix, coupling: Option<&[C64]>) -> Self {
        let n = q.rows();
        let coeffs = match coupling {
            Some(c) if c.len() > 1 || c[0] != C64::new(1.0, 0.0) => {
                // C is symmetric, so row i of Q C is C applied to row i of Q,
                // and C^H = conj(C) acts on the columns of Q C.
                let qc_rows: Vec<Vec<C64>> = (0..n).map(|i| apply_banded(c, q.row(i))).collect();
                let conj_c: Vec<C64> = c.iter().map(|z| z.conj()).collect();
                let m_cols: Vec<Vec<C64>> = (0..n)
                    .map(|j| {
                        let col: Vec<C64> = qc_rows.iter().map(|row| row[j]).collect();
                        apply_banded(&conj_c, &col)
                    })
                    .collect();
                (0..n).map(|d| (0..n - d).map(|i| m_cols[i + d][i]).sum()).collect()
            }
            _ => (0..n).map(|d| (0..n - d).map(|i| q[(i, i + d)]).sum()).collect(),
        };
        Self { coeffs }
    }

    /// f at spatial angle x.
    pub(crate) fn eval(&self, x: f64) -> f64 {
        let z = C64::from_polar(1.0, std::f64::consts::PI * x);
        let mut acc = C64::new(0.0, 0.0);
        for &r in self.coeffs[1..].iter().rev() {
            acc = (acc + r) * z;
        }
        self.coeffs[0].re + 2.0 * acc.re
    }
}

/// Denominator polynomials for every (subcarrier, sector) under a given mode.
#[derive(Debug, Clone)]
pub struct SpectrumModel {
    mode: Mode,
    ratios: Vec<f64>,
    polys: Vec<Vec<NullPolynomial>>,
    sectors: Option<crate::array_model::SectorPlan>,
}

impl SpectrumModel {
    pub fn new(
        cfg: &ArrayConfig,
        forms: &NullForms,
        mode: Mode,
        coupling: Option<&CouplingModel>,
        exec: Execution,
    ) -> Result<Self> {
        let n_sub = cfg.n_subcarriers();
        if forms.len() != n_sub {
            return Err(Error::Input(format!("{} subspace decompositions for {n_sub} subcarriers", forms.len())));
        }
        let coupling = if mode.uses_coupling() { coupling } else { None };
        if let Some(model) = coupling {
            if model.n_subcarriers() != n_sub {
                return Err(Error::Input("coupling estimate does not cover every subcarrier".into()));
            }
            if model.band() > cfg.n_antennas() {
                return Err(Error::Dimension("coupling band wider than the array".into()));
            }
        }
        let n_sectors = coupling.map_or(1, |c| c.sectors().count());
        let polys = exec
            .map(n_sub * n_sectors, |idx| {
                let (m, s) = (idx / n_sectors, idx % n_sectors);
                let c = coupling.map(|model| model.coefficients(s, m).expect("validated shape"));
                NullPolynomial::new(forms.form(m), c)
            })
            .chunks(n_sectors)
            .map(<[NullPolynomial]>::to_vec)
            .collect();
        let ratios = if mode.compensates_split() { cfg.ratios().to_vec() } else { vec![1.0; n_sub] };
        Ok(Self { mode, ratios, polys, sectors: coupling.map(|c| c.sectors().clone()) })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    fn sector(&self, physical: f64) -> usize {
        self.sectors.as_ref().map_or(0, |p| p.sector_of(physical))
    }

    /// Null-spectrum denominator f_m at a physical angle.
    pub fn denominator(&self, m: usize, physical: f64) -> f64 {
        let s = self.sector(physical);
        self.polys[m][s].eval(self.ratios[m] * physical.sin())
    }

    /// P_m at a physical angle.
    pub fn value(&self, m: usize, physical: f64) -> f64 {
        1.0 / self.denominator(m, physical).max(DENOMINATOR_FLOOR)
    }

    /// Σ_m P_m at a physical angle.
    pub fn total(&self, physical: f64) -> f64 {
        (0..self.polys.len()).map(|m| self.value(m, physical)).sum()
    }

    pub fn evaluate(&self, grid: &AngleGrid, exec: Execution) -> SpectrumGrid {
        let n_sub = self.polys.len();
        let columns = exec.map(grid.len(), |i| {
            let th = grid.angles()[i];
            (0..n_sub).map(|m| self.value(m, th)).collect::<Vec<f64>>()
        });
        let per_subcarrier: Vec<Vec<f64>> = (0..n_sub).map(|m| columns.iter().map(|col| col[m]).collect()).collect();
        let total = columns.iter().map(|col| col.iter().sum()).collect();
        SpectrumGrid { angles: grid.angles().to_vec(), per_subcarrier, total }
    }
}

/// MUSIC spectra over `grid` for the given mode. Coupling estimates are used
/// by MCC and CREAM only; `None` means C = I.
pub fn spectrum(
    cfg: &ArrayConfig,
    grid: &AngleGrid,
    decompositions: &[SubspaceDecomposition],
    combiner: &CMatrix,
    mode: Mode,
    coupling: Option<&CouplingModel>,
) -> Result<SpectrumGrid> {
    if decompositions.len() != cfg.n_subcarriers() {
        return Err(Error::Input(format!(
            "{} subspace decompositions for {} subcarriers",
            decompositions.len(),
            cfg.n_subcarriers()
        )));
    }
    let forms = NullForms::new(decompositions, combiner)?;
    let model = SpectrumModel::new(cfg, &forms, mode, coupling, Execution::default())?;
    Ok(model.evaluate(grid, Execution::default()))
}
