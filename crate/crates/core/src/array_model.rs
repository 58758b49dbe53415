//! Uniform linear array physics: frequency grid, steering vectors, beam-split
//! and banded-Toeplitz mutual coupling.
//!
//! Angles are carried in the spatial (sine) domain, `θ = sin θ̃`, and every
//! steering vector has unit-modulus entries `exp(jπ n θ)` for the half-wavelength
//! spacing at the highest subcarrier. Subcarrier indices are zero-based.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::numerics::{banded_toeplitz, CMatrix, C64};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Array geometry plus the OFDM frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayConfig {
    n_antennas: usize,
    n_rf: usize,
    carrier_hz: f64,
    bandwidth_hz: f64,
    wave_speed: f64,
    freqs: Vec<f64>,
    f_max: f64,
    ratios: Vec<f64>,
}

impl ArrayConfig {
    pub fn new(
        n_antennas: usize,
        n_rf: usize,
        carrier_hz: f64,
        bandwidth_hz: f64,
        n_subcarriers: usize,
    ) -> Result<Self> {
        Self::with_wave_speed(n_antennas, n_rf, carrier_hz, bandwidth_hz, n_subcarriers, SPEED_OF_LIGHT)
    }

    pub fn with_wave_speed(
        n_antennas: usize,
        n_rf: usize,
        carrier_hz: f64,
        bandwidth_hz: f64,
        n_subcarriers: usize,
        wave_speed: f64,
    ) -> Result<Self> {
        if n_antennas == 0 || n_rf == 0 || n_subcarriers == 0 {
            return Err(Error::Config("antenna, RF-chain and subcarrier counts must be positive".into()));
        }
        if !n_antennas.is_multiple_of(n_rf) {
            return Err(Error::Config(format!(
                "{n_antennas} antennas cannot be split into subarrays of {n_rf} RF chains"
            )));
        }
        if !(carrier_hz > 0.0 && bandwidth_hz >= 0.0 && wave_speed > 0.0) {
            return Err(Error::Config("carrier, bandwidth and wave speed must be positive".into()));
        }
        let m = n_subcarriers as f64;
        let freqs: Vec<f64> =
            (0..n_subcarriers).map(|i| carrier_hz + bandwidth_hz / m * (i as f64 - (m - 1.0) / 2.0)).collect();
        if freqs[0] <= 0.0 {
            return Err(Error::Config("bandwidth exceeds twice the carrier frequency".into()));
        }
        let f_max = freqs.iter().copied().fold(f64::MIN, f64::max);
        let ratios = freqs.iter().map(|f| f / f_max).collect();
        Ok(Self { n_antennas, n_rf, carrier_hz, bandwidth_hz, wave_speed, freqs, f_max, ratios })
    }

    pub fn n_antennas(&self) -> usize {
        self.n_antennas
    }

    pub fn n_rf(&self) -> usize {
        self.n_rf
    }

    pub fn n_subcarriers(&self) -> usize {
        self.freqs.len()
    }

    /// Number of time slots J = N / N_RF.
    pub fn n_slots(&self) -> usize {
        self.n_antennas / self.n_rf
    }

    pub fn carrier_hz(&self) -> f64 {
        self.carrier_hz
    }

    pub fn bandwidth_hz(&self) -> f64 {
        self.bandwidth_hz
    }

    pub fn wave_speed(&self) -> f64 {
        self.wave_speed
    }

    pub fn subcarrier_freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn f_max(&self) -> f64 {
        self.f_max
    }

    /// Element spacing: half the wavelength at the highest subcarrier.
    pub fn spacing(&self) -> f64 {
        self.wave_speed / (2.0 * self.f_max)
    }

    /// f_m / f_max for every subcarrier.
    pub fn ratios(&self) -> &[f64] {
        &self.ratios
    }

    pub fn ratio(&self, m: usize) -> Result<f64> {
        self.check_subcarrier(m)?;
        Ok(self.ratios[m])
    }

    pub fn check_subcarrier(&self, m: usize) -> Result<()> {
        if m >= self.freqs.len() {
            return Err(Error::Index(format!("subcarrier {m} out of range for {} subcarriers", self.freqs.len())));
        }
        Ok(())
    }
}

/// Far-field direction. Stores the physical angle; the spatial angle is its sine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    physical: f64,
}

impl Direction {
    pub fn from_radians(physical: f64) -> Result<Self> {
        if !physical.is_finite() || physical.abs() > FRAC_PI_2 + 1e-12 {
            return Err(Error::Input(format!("physical angle {physical} rad outside [-pi/2, pi/2]")));
        }
        Ok(Self { physical: physical.clamp(-FRAC_PI_2, FRAC_PI_2) })
    }

    pub fn from_degrees(deg: f64) -> Result<Self> {
        Self::from_radians(deg.to_radians())
    }

    pub fn from_spatial(spatial: f64) -> Result<Self> {
        if !spatial.is_finite() || spatial.abs() > 1.0 {
            return Err(Error::Input(format!("spatial angle {spatial} outside [-1, 1]")));
        }
        Ok(Self { physical: spatial.asin() })
    }

    pub fn physical(&self) -> f64 {
        self.physical
    }

    pub fn degrees(&self) -> f64 {
        self.physical.to_degrees()
    }

    pub fn spatial(&self) -> f64 {
        self.physical.sin()
    }
}

/// Partition of [-π/2, π/2] (physical) into contiguous angular sectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorPlan {
    edges: Vec<f64>,
}

impl SectorPlan {
    pub fn uniform(count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::Parameter("sector count must be at least 1".into()));
        }
        let step = PI / count as f64;
        let mut edges: Vec<f64> = (0..=count).map(|s| -FRAC_PI_2 + step * s as f64).collect();
        edges[count] = FRAC_PI_2;
        Ok(Self { edges })
    }

    pub fn count(&self) -> usize {
        self.edges.len() - 1
    }

    /// Sector boundaries in physical radians, ascending, `count() + 1` entries.
    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    /// Sector containing a physical angle. Each sector is half-open `[lo, hi)`
    /// except the last, which also contains π/2.
    pub fn sector_of(&self, physical: f64) -> usize {
        let upper = self.edges.partition_point(|&e| e <= physical);
        upper.saturating_sub(1).min(self.count() - 1)
    }
}

/// Diagonal operator mapping the nominal steering vector onto its split
/// counterpart at one subcarrier.
#[derive(Debug, Clone)]
pub struct BeamSplitOp {
    pub subcarrier: usize,
    /// Spatial offset Δ = (η_m - 1) θ.
    pub offset: f64,
    pub diag: Vec<C64>,
}

impl BeamSplitOp {
    pub fn apply(&self, a: &[C64]) -> Vec<C64> {
        a.iter().zip(&self.diag).map(|(x, b)| x * b).collect()
    }
}

/// Direction-dependent coupling: one coefficient vector per (sector, subcarrier).
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingModel {
    band: usize,
    sectors: SectorPlan,
    coeffs: Vec<Vec<Vec<C64>>>,
}

impl CouplingModel {
    /// `coeffs[s][m]` must have length `band` and a leading 1.
    pub fn new(band: usize, sectors: SectorPlan, coeffs: Vec<Vec<Vec<C64>>>) -> Result<Self> {
        if band == 0 {
            return Err(Error::Parameter("coupling band must be at least 1".into()));
        }
        if coeffs.len() != sectors.count() {
            return Err(Error::Dimension(format!("{} coefficient sets for {} sectors", coeffs.len(), sectors.count())));
        }
        let n_sub = coeffs.first().map_or(0, Vec::len);
        for per_sector in &coeffs {
            if per_sector.len() != n_sub {
                return Err(Error::Dimension("sectors disagree on subcarrier count".into()));
            }
            for c in per_sector {
                if c.len() != band {
                    return Err(Error::Dimension(format!("coefficient vector of length {} for band {band}", c.len())));
                }
                if c[0] != C64::new(1.0, 0.0) {
                    return Err(Error::Input("leading coupling coefficient must be exactly 1".into()));
                }
            }
        }
        Ok(Self { band, sectors, coeffs })
    }

    /// Coupling-free model (C = I everywhere).
    pub fn identity(band: usize, sectors: SectorPlan, n_subcarriers: usize) -> Self {
        let mut unit = vec![C64::new(0.0, 0.0); band.max(1)];
        unit[0] = C64::new(1.0, 0.0);
        let coeffs = vec![vec![unit; n_subcarriers]; sectors.count()];
        Self { band: band.max(1), sectors, coeffs }
    }

    pub fn band(&self) -> usize {
        self.band
    }

    pub fn sectors(&self) -> &SectorPlan {
        &self.sectors
    }

    pub fn n_subcarriers(&self) -> usize {
        self.coeffs.first().map_or(0, Vec::len)
    }

    pub fn coefficients(&self, sector: usize, m: usize) -> Result<&[C64]> {
        self.coeffs
            .get(sector)
            .and_then(|s| s.get(m))
            .map(Vec::as_slice)
            .ok_or_else(|| Error::Index(format!("no coupling coefficients for sector {sector}, subcarrier {m}")))
    }

    pub fn set_coefficients(&mut self, sector: usize, m: usize, c: Vec<C64>) -> Result<()> {
        if c.len() != self.band || c[0] != C64::new(1.0, 0.0) {
            return Err(Error::Input("coefficient vector must have band length and a leading 1".into()));
        }
        let slot = self
            .coeffs
            .get_mut(sector)
            .and_then(|s| s.get_mut(m))
            .ok_or_else(|| Error::Index(format!("no slot for sector {sector}, subcarrier {m}")))?;
        *slot = c;
        Ok(())
    }

    pub fn sector_of(&self, dir: Direction) -> usize {
        self.sectors.sector_of(dir.physical())
    }
}

/// Unit-modulus ULA response exp(jπ n θ) at spatial angle θ.
pub fn steering_spatial(n_antennas: usize, spatial: f64) -> Vec<C64> {
    (0..n_antennas).map(|n| C64::from_polar(1.0, PI * n as f64 * spatial)).collect()
}

pub fn steering_nominal(cfg: &ArrayConfig, dir: Direction) -> Vec<C64> {
    steering_spatial(cfg.n_antennas(), dir.spatial())
}

/// Steering vector seen at subcarrier `m`: the nominal response at η_m θ.
pub fn steering_split(cfg: &ArrayConfig, dir: Direction, m: usize) -> Result<Vec<C64>> {
    let eta = cfg.ratio(m)?;
    Ok(steering_spatial(cfg.n_antennas(), eta * dir.spatial()))
}

/// Spatial beam-split offset Δ_m = (η_m - 1) θ.
pub fn beam_split_of(cfg: &ArrayConfig, dir: Direction, m: usize) -> Result<f64> {
    Ok((cfg.ratio(m)? - 1.0) * dir.spatial())
}

pub fn beam_split_op(cfg: &ArrayConfig, dir: Direction, m: usize) -> Result<BeamSplitOp> {
    let offset = beam_split_of(cfg, dir, m)?;
    Ok(BeamSplitOp { subcarrier: m, offset, diag: steering_spatial(cfg.n_antennas(), offset) })
}

/// Normalized array gain |a^H(θ) a(θ̄)|² / N² between a beam steered to the
/// split direction θ̄ and the nominal direction θ at subcarrier `m`, through
/// its Dirichlet-kernel closed form. Peaks at θ̄ = η_m θ with value 1.
pub fn array_gain(cfg: &ArrayConfig, theta: f64, theta_bar: f64, m: usize) -> Result<f64> {
    cfg.check_subcarrier(m)?;
    let f_m = cfg.subcarrier_freqs()[m];
    let mu = cfg.spacing() * (cfg.f_max() * theta_bar - f_m * theta) / cfg.wave_speed();
    let n = cfg.n_antennas() as f64;
    let den = n * (PI * mu).sin();
    if den == 0.0 {
        return Ok(1.0);
    }
    let ratio = (PI * n * mu).sin() / den;
    Ok((ratio * ratio).min(1.0))
}

pub fn coupling_matrix(cfg: &ArrayConfig, model: &CouplingModel, sector: usize, m: usize) -> Result<CMatrix> {
    banded_toeplitz(model.coefficients(sector, m)?, cfg.n_antennas())
}

/// y = C x for the symmetric banded Toeplitz C built from `coeffs`.
pub fn apply_banded(coeffs: &[C64], x: &[C64]) -> Vec<C64> {
    let n = x.len();
    (0..n)
        .map(|i| {
            let mut acc = coeffs[0] * x[i];
            for (l, &c) in coeffs.iter().enumerate().skip(1) {
                if i >= l {
                    acc += c * x[i - l];
                }
                if i + l < n {
                    acc += c * x[i + l];
                }
            }
            acc
        })
        .collect()
}

/// Steering vector corrupted by beam-split and by the coupling of `sector`.
pub fn steering_corrupted(
    cfg: &ArrayConfig,
    model: &CouplingModel,
    dir: Direction,
    m: usize,
    sector: usize,
) -> Result<Vec<C64>> {
    let split = steering_split(cfg, dir, m)?;
    let coeffs = model.coefficients(sector, m)?;
    if coeffs.len() > cfg.n_antennas() {
        return Err(Error::Dimension("coupling band wider than the array".into()));
    }
    Ok(apply_banded(coeffs, &split))
}

/// N×L matrix T with T c = C(c) a for every band-L coefficient vector c.
/// Column l collects the entries of `a` sitting l positions off the diagonal.
pub fn selection_transform(band: usize, a: &[C64]) -> Result<CMatrix> {
    let n = a.len();
    if band == 0 || band > n {
        return Err(Error::Dimension(format!("band {band} invalid for array of {n} elements")));
    }
    Ok(CMatrix::from_fn(n, band, |i, l| {
        if l == 0 {
            return a[i];
        }
        let mut acc = C64::new(0.0, 0.0);
        if i >= l {
            acc += a[i - l];
        }
        if i + l < n {
            acc += a[i + l];
        }
        acc
    }))
}
