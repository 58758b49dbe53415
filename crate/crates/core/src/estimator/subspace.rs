use crate::error::{Error, Result};
use crate::numerics::{eig_hermitian, CMatrix, HermEig, C64};

/// R = (1/T) Y Y^H, symmetrized.
pub fn sample_covariance(y: &CMatrix) -> Result<CMatrix> {
    let t = y.cols();
    if t == 0 {
        return Err(Error::Input("covariance needs at least one snapshot".into()));
    }
    let r = y.matmul(&y.adjoint())?;
    Ok(r.hermitian_part().scale(C64::new(1.0 / t as f64, 0.0)))
}

/// Covariance of one subcarrier and its signal/noise split.
#[derive(Debug, Clone)]
pub struct SubspaceDecomposition {
    pub covariance: CMatrix,
    pub eig: HermEig,
    pub n_sources: usize,
}

impl SubspaceDecomposition {
    pub fn new(y: &CMatrix, n_sources: usize) -> Result<Self> {
        let covariance = sample_covariance(y)?;
        Self::from_covariance(covariance, n_sources)
    }

    pub fn from_covariance(covariance: CMatrix, n_sources: usize) -> Result<Self> {
        let n = covariance.rows();
        if n_sources == 0 || n_sources >= n {
            return Err(Error::Parameter(format!(
                "source count {n_sources} must lie in 1..{n} for a {n}-element array"
            )));
        }
        let eig = eig_hermitian(&covariance)?;
        Ok(Self { covariance, eig, n_sources })
    }

    /// Eigenvectors of the K largest eigenvalues.
    pub fn signal_subspace(&self) -> CMatrix {
        self.eig.eigenvectors.columns(0..self.n_sources)
    }

    /// Eigenvectors of the N - K smallest eigenvalues.
    pub fn noise_subspace(&self) -> CMatrix {
        self.eig.eigenvectors.columns(self.n_sources..self.eig.eigenvectors.cols())
    }
}

/// Noise subspace of a covariance for `k` sources.
pub fn noise_subspace(r: &CMatrix, k: usize) -> Result<CMatrix> {
    Ok(SubspaceDecomposition::from_covariance(r.clone(), k)?.noise_subspace())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array_model::steering_spatial;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn projector(u: &CMatrix) -> CMatrix {
        u.matmul(&u.adjoint()).unwrap()
    }

    #[test]
    fn zero_data_gives_zero_covariance() {
        assert_eq!(sample_covariance(&CMatrix::zeros(3, 5)).unwrap(), CMatrix::zeros(3, 3));
    }

    #[test]
    fn single_snapshot_is_outer_product() {
        let y = CMatrix::new(2, 1, vec![C64::new(1.0, 1.0), C64::new(0.0, 2.0)]).unwrap();
        let r = sample_covariance(&y).unwrap();
        assert_eq!(r[(0, 1)], C64::new(1.0, 1.0) * C64::new(0.0, -2.0));
        let eig = crate::numerics::eig_hermitian(&r).unwrap();
        assert!(eig.eigenvalues[1].abs() < 1e-14);
    }

    #[test]
    fn covariance_is_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let y = CMatrix::from_fn(6, 4, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let eig = crate::numerics::eig_hermitian(&sample_covariance(&y).unwrap()).unwrap();
        assert!(eig.eigenvalues.iter().all(|&l| l >= -1e-12));
    }

    #[test]
    fn identity_noise_projector_has_rank_complement() {
        let un = noise_subspace(&CMatrix::identity(5), 1).unwrap();
        assert_eq!(un.cols(), 4);
        let p = CMatrix::identity(5).sub(&projector(&un)).unwrap();
        let eig = crate::numerics::eig_hermitian(&p).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!(eig.eigenvalues[1].abs() < 1e-12);
    }

    #[test]
    fn rank_one_noise_subspace_is_orthogonal() {
        let a = steering_spatial(8, 0.37);
        let r = CMatrix::from_fn(8, 8, |i, j| a[i] * a[j].conj());
        let un = noise_subspace(&r, 1).unwrap();
        let proj = un.adjoint().mul_vec(&a).unwrap();
        assert!(crate::numerics::vec_norm(&proj) < 1e-10);
    }

    #[test]
    fn diagonal_noise_subspace() {
        let r = CMatrix::from_diag(&[5.0, 3.0, 1.0, 1.0].map(|x| C64::new(x, 0.0)));
        let un = noise_subspace(&r, 2).unwrap();
        let p = projector(&un);
        let expected = CMatrix::from_diag(&[0.0, 0.0, 1.0, 1.0].map(|x| C64::new(x, 0.0)));
        assert!(p.sub(&expected).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn too_many_sources() {
        assert!(matches!(noise_subspace(&CMatrix::identity(3), 3), Err(Error::Parameter(_))));
    }
}
