//! Closed-form coupling estimate for a known direction.
//!
//! With `T` the selection transform of the (split) steering vector and
//! `Σ = T^H Q_m T`, the coefficient vector minimizing `c^H Σ c` subject to
//! `c[0] = 1` is `Σ^{-1} v / (v^T Σ^{-1} v)` with `v = e_0`. Partitioning Σ
//! around its first row/column gives the same minimizer as
//! `c[1..] = -Σ_rr^{-1} Σ_r0`, which stays well conditioned when the data are
//! noiseless and Σ itself is singular (the true c spans its null space).

use crate::array_model::{selection_transform, steering_spatial, ArrayConfig, Direction};
use crate::error::{Error, Result};
use crate::numerics::{solve_regularized, CMatrix, C64};

use super::spectrum::NullForms;
use super::subspace::SubspaceDecomposition;

/// Σ = T^H Q T for the given steering vector.
pub fn coupling_gram(q: &CMatrix, steering: &[C64], band: usize) -> Result<CMatrix> {
    let t = selection_transform(band, steering)?;
    let qt = q.matmul(&t)?;
    Ok(t.adjoint().matmul(&qt)?.hermitian_part())
}

/// Minimizer of c^H Σ c under c[0] = 1.
pub fn constrained_minimizer(sigma: &CMatrix) -> Result<Vec<C64>> {
    let l = sigma.rows();
    let mut c = vec![C64::new(1.0, 0.0); 1];
    if l == 1 {
        return Ok(c);
    }
    let reduced = CMatrix::from_fn(l - 1, l - 1, |i, j| sigma[(i + 1, j + 1)]);
    let rhs: Vec<C64> = (1..l).map(|i| -sigma[(i, 0)]).collect();
    c.extend(solve_regularized(&reduced, &rhs, 0.0)?);
    Ok(c)
}

/// Coupling estimate at subcarrier `m` for a target at spatial angle
/// `spatial` as seen through `steering` (split or nominal).
pub fn estimate_coupling_from_form(q: &CMatrix, steering: &[C64], band: usize) -> Result<Vec<C64>> {
    constrained_minimizer(&coupling_gram(q, steering, band)?)
}

/// Estimate of the band-`band` coefficient vector for direction `dir` at
/// subcarrier `m`, using the beam-split steering vector a(η_m θ).
pub fn estimate_coupling(
    cfg: &ArrayConfig,
    decomposition: &SubspaceDecomposition,
    combiner: &CMatrix,
    m: usize,
    dir: Direction,
    band: usize,
) -> Result<Vec<C64>> {
    let eta = cfg.ratio(m)?;
    let forms = NullForms::new(std::slice::from_ref(decomposition), combiner)?;
    let a = steering_spatial(cfg.n_antennas(), eta * dir.spatial());
    estimate_coupling_from_form(forms.form(0), &a, band)
        .map_err(|e| Error::Numerical(format!("coupling estimate at subcarrier {m}: {e}")))
}

/// f = (C a)^H Q (C a) for a coefficient vector and steering vector.
pub fn coupling_cost(q: &CMatrix, steering: &[C64], coeffs: &[C64]) -> f64 {
    let ca = crate::array_model::apply_banded(coeffs, steering);
    let qca = q.mul_vec(&ca).expect("length matches");
    crate::numerics::inner(&ca, &qca).re
}
