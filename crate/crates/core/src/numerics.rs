//! Dense complex linear algebra used by the rest of the crate.
//!
//! Matrices here are small (N ≤ 128), so everything is row-major `Vec`
//! storage with straightforward loops. The Hermitian eigensolver is cyclic
//! Jacobi, which gives eigenvectors orthonormal to working precision even
//! for the rank-deficient covariances produced by noiseless scenes.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_REL_TOL: f64 = 1e-12;
const PIVOT_REL_TOL: f64 = 1e-14;
const SOLVE_RESIDUAL_TOL: f64 = 1e-8;
const DEFAULT_RIDGE_SCALE: f64 = 1e-10;

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries supplied for a {rows}x{cols} matrix", data.len())));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Input("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<C64>]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::Dimension("columns of unequal length".into()));
        }
        Ok(Self::from_fn(rows, cols, |i, j| columns[j][i]))
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Sub-matrix made of the columns `range`.
    pub fn columns(&self, range: std::ops::Range<usize>) -> CMatrix {
        let start = range.start;
        CMatrix::from_fn(self.rows, range.len(), |i, j| self[(i, start + j)])
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[C64]) -> Result<Vec<C64>> {
        if self.cols != x.len() {
            return Err(Error::Dimension(format!(
                "cannot apply {}x{} matrix to vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows).map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum()).collect())
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn sub(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension("shape mismatch in subtraction".into()));
        }
        Ok(CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(C64::norm_sqr).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// (A + A^H) / 2.
    pub fn hermitian_part(&self) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn vec_norm(x: &[C64]) -> f64 {
    x.iter().map(C64::norm_sqr).sum::<f64>().sqrt()
}

/// x^H y
pub fn inner(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermEig {
    /// Sorted non-increasing.
    pub eigenvalues: Vec<f64>,
    /// Column `i` pairs with `eigenvalues[i]`.
    pub eigenvectors: CMatrix,
}

impl HermEig {
    /// U diag(λ) U^H.
    pub fn reconstruct(&self) -> CMatrix {
        let u = &self.eigenvectors;
        let n = u.rows();
        CMatrix::from_fn(n, n, |i, j| (0..u.cols()).map(|k| u[(i, k)] * self.eigenvalues[k] * u[(j, k)].conj()).sum())
    }
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized as (A + A^H)/2 before iterating. Sweeps stop once
/// the off-diagonal Frobenius norm drops below 1e-12 of the total norm.
pub fn eig_hermitian(a: &CMatrix) -> Result<HermEig> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let mut w = a.hermitian_part();
    let mut v = CMatrix::identity(n);
    let tol = JACOBI_REL_TOL * w.frobenius_norm();

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&w) <= tol {
            converged = true;
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                rotate(&mut w, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&w) > tol {
        return Err(Error::Numerical(format!(
            "Jacobi eigensolver did not converge for {n}x{n} matrix after {JACOBI_MAX_SWEEPS} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    // Stable: ties keep sweep order.
    order.sort_by(|&i, &j| w[(j, j)].re.total_cmp(&w[(i, i)].re));
    let eigenvalues = order.iter().map(|&i| w[(i, i)].re).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermEig { eigenvalues, eigenvectors })
}

fn off_diagonal_norm(w: &CMatrix) -> f64 {
    let n = w.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += w[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One complex Jacobi rotation annihilating w[p][q].
fn rotate(w: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = w[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = w[(p, p)].re;
    let aqq = w[(q, q)].re;
    let phase = apq / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_finite() { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) } else { 0.0 };
    if t == 0.0 {
        // r is negligible against the diagonal gap.
        w[(p, q)] = C64::new(0.0, 0.0);
        w[(q, p)] = C64::new(0.0, 0.0);
        return;
    }
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let s_conj_phase = phase.conj() * s;
    let s_phase = phase * s;

    let n = w.rows();
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = w[(k, p)];
        let akq = w[(k, q)];
        let new_kp = akp * c - s_conj_phase * akq;
        let new_kq = s_phase * akp + akq * c;
        w[(k, p)] = new_kp;
        w[(p, k)] = new_kp.conj();
        w[(k, q)] = new_kq;
        w[(q, k)] = new_kq.conj();
    }
    w[(p, p)] = C64::new(app - t * r, 0.0);
    w[(q, q)] = C64::new(aqq + t * r, 0.0);
    w[(p, q)] = C64::new(0.0, 0.0);
    w[(q, p)] = C64::new(0.0, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - s_conj_phase * vkq;
        v[(k, q)] = s_phase * vkp + vkq * c;
    }
}

/// Symmetric banded Toeplitz matrix: entry (i, j) = coeffs[|i - j|] inside the band, zero outside.
pub fn banded_toeplitz(coeffs: &[C64], n: usize) -> Result<CMatrix> {
    if coeffs.is_empty() {
        return Err(Error::Dimension("banded Toeplitz needs at least one coefficient".into()));
    }
    if coeffs.len() > n {
        return Err(Error::Dimension(format!("band of {} coefficients does not fit a {n}x{n} matrix", coeffs.len())));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| coeffs.get(i.abs_diff(j)).copied().unwrap_or(C64::new(0.0, 0.0))))
}

/// Solves A x = b, falling back to (A + ridge I) x = b if the plain solve is
/// ill-conditioned. A non-positive `ridge` selects 1e-10 · |tr A| / n.
pub fn solve_regularized(a: &CMatrix, b: &[C64], ridge: f64) -> Result<Vec<C64>> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("solve needs a square matrix, got {}x{}", a.rows(), a.cols())));
    }
    if b.len() != a.rows() {
        return Err(Error::Dimension(format!(
            "right-hand side of length {} for {}x{} system",
            b.len(),
            a.rows(),
            a.cols()
        )));
    }
    if let Some(x) = lu_solve(a, b).filter(|x| residual_ok(a, x, b)) {
        return Ok(x);
    }

    let n = a.rows();
    let ridge = if ridge > 0.0 {
        ridge
    } else {
        let scale = if a.trace().norm() > 0.0 { a.trace().norm() } else { a.frobenius_norm() };
        DEFAULT_RIDGE_SCALE * scale / n as f64
    };
    if ridge == 0.0 {
        return Err(Error::Numerical(format!("{n}x{n} system is identically zero")));
    }
    let mut shifted = a.clone();
    for i in 0..n {
        shifted[(i, i)] += ridge;
    }
    lu_solve(&shifted, b)
        .filter(|x| residual_ok(&shifted, x, b))
        .ok_or_else(|| Error::Numerical(format!("{n}x{n} system singular even with ridge {ridge:e}")))
}

fn residual_ok(a: &CMatrix, x: &[C64], b: &[C64]) -> bool {
    let Ok(ax) = a.mul_vec(x) else { return false };
    let res: f64 = ax.iter().zip(b).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt();
    res.is_finite() && res <= SOLVE_RESIDUAL_TOL * vec_norm(b).max(f64::MIN_POSITIVE)
}

/// Gaussian elimination with partial pivoting. `None` on a vanishing pivot.
fn lu_solve(a: &CMatrix, b: &[C64]) -> Option<Vec<C64>> {
    let n = a.rows();
    let scale = a.max_abs();
    if scale == 0.0 {
        return None;
    }
    let mut m = a.clone();
    let mut x = b.to_vec();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| m[(i, col)].norm().total_cmp(&m[(j, col)].norm()))?;
        if m[(pivot, col)].norm() <= PIVOT_REL_TOL * scale {
            return None;
        }
        if pivot != col {
            for j in 0..n {
                let tmp = m[(col, j)];
                m[(col, j)] = m[(pivot, j)];
                m[(pivot, j)] = tmp;
            }
            x.swap(col, pivot);
        }
        let d = m[(col, col)];
        for i in col + 1..n {
            let f = m[(i, col)] / d;
            if f.re == 0.0 && f.im == 0.0 {
                continue;
            }
            for j in col..n {
                let v = m[(col, j)];
                m[(i, j)] -= f * v;
            }
            let xc = x[col];
            x[i] -= f * xc;
        }
    }
    for i in (0..n).rev() {
        let mut acc = x[i];
        for j in i + 1..n {
            acc -= m[(i, j)] * x[j];
        }
        x[i] = acc / m[(i, i)];
    }
    x.iter().all(|z| z.re.is_finite() && z.im.is_finite()).then_some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        let g = CMatrix::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        g.hermitian_part()
    }

    #[test]
    fn identity_eigenvalues_are_ones() {
        let eig = eig_hermitian(&CMatrix::identity(4)).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0; 4]);
        let gram = eig.eigenvectors.adjoint().matmul(&eig.eigenvectors).unwrap();
        assert!(gram.sub(&CMatrix::identity(4)).unwrap().frobenius_norm() < 1e-12);
    }

    #[test]
    fn diagonal_eigenvectors_are_permuted_identity() {
        let a = CMatrix::from_diag(&[c(1.0, 0.0), c(3.0, 0.0)]);
        let eig = eig_hermitian(&a).unwrap();
        assert_eq!(eig.eigenvalues, vec![3.0, 1.0]);
        assert_eq!(eig.eigenvectors[(1, 0)].norm(), 1.0);
        assert_eq!(eig.eigenvectors[(0, 1)].norm(), 1.0);
        assert_eq!(eig.eigenvectors[(0, 0)].norm(), 0.0);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_hermitian(8, &mut rng);
        let eig = eig_hermitian(&a).unwrap();
        let err = eig.reconstruct().sub(&a).unwrap().frobenius_norm() / a.frobenius_norm();
        assert!(err < 1e-9, "reconstruction error {err}");
        let gram = eig.eigenvectors.adjoint().matmul(&eig.eigenvectors).unwrap();
        assert!(gram.sub(&CMatrix::identity(8)).unwrap().max_abs() < 1e-10);
        assert!(eig.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn shift_moves_eigenvalues() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_hermitian(6, &mut rng);
        let mut shifted = a.clone();
        for i in 0..6 {
            shifted[(i, i)] += 2.5;
        }
        let e0 = eig_hermitian(&a).unwrap().eigenvalues;
        let e1 = eig_hermitian(&shifted).unwrap().eigenvalues;
        for (x, y) in e0.iter().zip(&e1) {
            assert!((x + 2.5 - y).abs() < 1e-10);
        }
    }

    #[test]
    fn non_square_is_rejected() {
        assert!(matches!(eig_hermitian(&CMatrix::zeros(2, 3)), Err(Error::Dimension(_))));
    }

    #[test]
    fn zero_matrix_decomposes() {
        let eig = eig_hermitian(&CMatrix::zeros(3, 3)).unwrap();
        assert_eq!(eig.eigenvalues, vec![0.0; 3]);
    }

    #[test]
    fn toeplitz_single_coefficient_is_identity() {
        assert_eq!(banded_toeplitz(&[c(1.0, 0.0)], 3).unwrap(), CMatrix::identity(3));
    }

    #[test]
    fn toeplitz_three_band_layout() {
        let t = banded_toeplitz(&[c(1.0, 0.0), c(0.5, 0.0), c(0.2, 0.0)], 4).unwrap();
        let expected = [[1.0, 0.5, 0.2, 0.0], [0.5, 1.0, 0.5, 0.2], [0.2, 0.5, 1.0, 0.5], [0.0, 0.2, 0.5, 1.0]];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(t[(i, j)], c(expected[i][j], 0.0));
            }
        }
    }

    #[test]
    fn toeplitz_five_band_in_eight() {
        let mags = [1.0, 0.85, 0.8, 0.4, 0.2];
        let coeffs: Vec<C64> = mags.iter().enumerate().map(|(l, &m)| C64::from_polar(m, 0.3 * l as f64)).collect();
        let t = banded_toeplitz(&coeffs, 8).unwrap();
        for i in 0..8usize {
            for j in 0..8usize {
                let d = i.abs_diff(j);
                if d <= 4 {
                    assert_eq!(t[(i, j)], coeffs[d]);
                } else {
                    assert_eq!(t[(i, j)], c(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn toeplitz_band_too_wide() {
        assert!(matches!(banded_toeplitz(&[c(1.0, 0.0); 4], 3), Err(Error::Dimension(_))));
    }

    #[test]
    fn solve_identity_and_diagonal() {
        let x = solve_regularized(&CMatrix::identity(2), &[c(1.0, 0.0), c(2.0, 0.0)], 0.0).unwrap();
        assert_eq!(x, vec![c(1.0, 0.0), c(2.0, 0.0)]);
        let a = CMatrix::from_diag(&[c(2.0, 0.0), c(4.0, 0.0)]);
        let x = solve_regularized(&a, &[c(2.0, 0.0), c(4.0, 0.0)], 0.0).unwrap();
        assert_eq!(x, vec![c(1.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn solve_random_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut a = CMatrix::from_fn(5, 5, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        for i in 0..5 {
            a[(i, i)] += 4.0;
        }
        let b: Vec<C64> = (0..5).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let x = solve_regularized(&a, &b, 0.0).unwrap();
        let r = a.mul_vec(&x).unwrap();
        let res: Vec<C64> = r.iter().zip(&b).map(|(p, q)| p - q).collect();
        assert!(vec_norm(&res) / vec_norm(&b) < 1e-8);
    }

    #[test]
    fn solve_singular_uses_ridge() {
        // rank one: ridge makes it solvable
        let a = CMatrix::from_fn(2, 2, |_, _| c(1.0, 0.0));
        let b = [c(1.0, 0.0), c(1.0, 0.0)];
        let x = solve_regularized(&a, &b, 1e-3).unwrap();
        let mut shifted = a.clone();
        shifted[(0, 0)] += 1e-3;
        shifted[(1, 1)] += 1e-3;
        assert!(residual_ok(&shifted, &x, &b));
    }

    #[test]
    fn solve_zero_matrix_fails() {
        let r = solve_regularized(&CMatrix::zeros(2, 2), &[c(1.0, 0.0), c(0.0, 0.0)], 0.0);
        assert!(matches!(r, Err(Error::Numerical(_))));
    }

    #[test]
    fn solve_dimension_errors() {
        assert!(solve_regularized(&CMatrix::zeros(2, 3), &[c(1.0, 0.0); 2], 0.0).is_err());
        assert!(solve_regularized(&CMatrix::identity(2), &[c(1.0, 0.0); 3], 0.0).is_err());
    }

    #[test]
    fn unitary_solve_is_adjoint_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = eig_hermitian(&random_hermitian(6, &mut rng)).unwrap().eigenvectors;
        let b: Vec<C64> = (0..6).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let x = solve_regularized(&u, &b, 0.0).unwrap();
        let expected = u.adjoint().mul_vec(&b).unwrap();
        for (p, q) in x.iter().zip(&expected) {
            assert!((p - q).norm() < 1e-10);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            #[test]
            fn trace_equals_eigenvalue_sum(seed in any::<u64>(), n in 1usize..20) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let a = random_hermitian(n, &mut rng);
                let eig = eig_hermitian(&a).unwrap();
                let sum: f64 = eig.eigenvalues.iter().sum();
                let tr = a.trace().re;
                prop_assert!((sum - tr).abs() <= 1e-8 * a.frobenius_norm().max(1.0));
            }

            #[test]
            fn toeplitz_depends_only_on_offset(
                re in proptest::collection::vec(-1.0f64..1.0, 1..6),
                extra in 0usize..6,
            ) {
                let coeffs: Vec<C64> = re.iter().map(|&r| c(r, 0.0)).collect();
                let n = coeffs.len() + extra;
                let t = banded_toeplitz(&coeffs, n).unwrap();
                for i in 0..n {
                    for j in 0..n {
                        prop_assert_eq!(t[(i, j)], t[(j, i)]);
                        if i > 0 && j > 0 {
                            prop_assert_eq!(t[(i, j)], t[(i - 1, j - 1)]);
                        }
                    }
                }
            }
        }
    }
}
