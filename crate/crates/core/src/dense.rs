//! Dense complex matrix helpers shared by the oracle-facing operations:
//! Hermitian eigendecomposition, exact unitaries, spectral norms.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::SzeResult;
use crate::pauli::PauliSum;

pub type CMatrix = DMatrix<Complex64>;

/// Eigendecomposition of a Hermitian `PauliSum`, reusable for exact
/// evolution at many times.
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl HermitianEigen {
    pub fn of_sum(h: &PauliSum) -> SzeResult<Self> {
        Ok(Self::of_matrix(h.to_dense()?))
    }

    pub fn of_matrix(m: CMatrix) -> Self {
        let se = m.symmetric_eigen();
        HermitianEigen {
            eigenvalues: se.eigenvalues.iter().cloned().collect(),
            eigenvectors: se.eigenvectors,
        }
    }

    /// U(t) = V · diag(e^{−iλt}) · V†.
    pub fn evolution(&self, t: f64) -> CMatrix {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (j, lam) in self.eigenvalues.iter().enumerate() {
            let ph = Complex64::from_polar(1.0, -lam * t);
            scaled.column_mut(j).scale_mut(1.0);
            for r in 0..scaled.nrows() {
                scaled[(r, j)] *= ph;
            }
        }
        &scaled * v.adjoint()
    }

    /// Apply U(t) to a vector without forming the full matrix.
    pub fn evolve_vector(&self, psi: &[Complex64], t: f64) -> Vec<Complex64> {
        let v = &self.eigenvectors;
        let psi_v = nalgebra::DVector::from_column_slice(psi);
        let mut coeffs = v.adjoint() * &psi_v;
        for (j, lam) in self.eigenvalues.iter().enumerate() {
            coeffs[j] *= Complex64::from_polar(1.0, -lam * t);
        }
        (v * coeffs).iter().cloned().collect()
    }
}

/// exp(−itH) for a Hermitian PauliSum.
pub fn exact_unitary(h: &PauliSum, t: f64) -> SzeResult<CMatrix> {
    Ok(HermitianEigen::of_sum(h)?.evolution(t))
}

/// exp(M) for anti-Hermitian M, via the Hermitian generator iM.
pub fn exp_anti_hermitian(m: &CMatrix) -> CMatrix {
    let h = m.map(|z| z * Complex64::new(0.0, 1.0));
    HermitianEigen::of_matrix(h).evolution(1.0)
}

/// Largest singular value, computed from the Gram matrix.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    // eigenvalues of M†M are real nonnegative; clamp tiny negatives
    let gram = m.adjoint() * m;
    let eig = HermitianEigen::of_matrix(gram);
    eig.eigenvalues
        .iter()
        .fold(0.0f64, |acc, &v| acc.max(v.max(0.0)))
        .sqrt()
}

/// Sum of absolute eigenvalues of a Hermitian matrix (trace norm).
pub fn hermitian_trace_norm(m: &CMatrix) -> f64 {
    let eig = HermitianEigen::of_matrix(m.clone());
    eig.eigenvalues.iter().map(|v| v.abs()).sum()
}
