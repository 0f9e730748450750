use nalgebra::DMatrix;
use num_complex::Complex64;

use super::state::{Register, NORM_TOLERANCE};
use super::StateError;

/// Eigenvalues in `[-EIGEN_CLAMP, 0)` are treated as zero.
pub const EIGEN_CLAMP: f64 = 1e-9;

/// Reduced state of a subset of registers.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    registers: Vec<Register>,
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity (all within 1e-9).
    pub fn from_row_major(registers: Vec<Register>, dim: usize, entries: Vec<Complex64>) -> Result<Self, StateError> {
        if dim != 1 << registers.len() || entries.len() != dim * dim {
            return Err(StateError::DimensionMismatch {
                expected: (1 << registers.len()) * (1 << registers.len()),
                actual: entries.len(),
            });
        }
        let rho = Self {
            registers,
            matrix: DMatrix::from_row_slice(dim, dim, &entries),
        };
        rho.validate()?;
        Ok(rho)
    }

    pub fn from_diagonal(registers: Vec<Register>, diagonal: &[f64]) -> Result<Self, StateError> {
        let dim = diagonal.len();
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (k, &p) in diagonal.iter().enumerate() {
            entries[k * dim + k] = Complex64::new(p, 0.0);
        }
        Self::from_row_major(registers, dim, entries)
    }

    fn validate(&self) -> Result<(), StateError> {
        let dim = self.dim();
        for r in 0..dim {
            for c in 0..dim {
                if (self.matrix[(r, c)] - self.matrix[(c, r)].conj()).norm() > NORM_TOLERANCE {
                    return Err(StateError::InvalidDensity("not Hermitian"));
                }
            }
        }
        if (self.trace() - 1.0).abs() > NORM_TOLERANCE {
            return Err(StateError::InvalidDensity("trace differs from 1"));
        }
        if self.eigenvalues().iter().any(|&l| l < -EIGEN_CLAMP) {
            return Err(StateError::InvalidDensity("negative eigenvalue"));
        }
        Ok(())
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|d| d.re).sum()
    }

    /// Real eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut values: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        values.sort_by(f64::total_cmp);
        values
    }

    /// `-Σ λ log₂ λ` in bits, with `0·log 0 = 0`.
    pub fn von_neumann_entropy(&self) -> f64 {
        let entropy: f64 = self
            .eigenvalues()
            .into_iter()
            .map(|l| if (-EIGEN_CLAMP..0.0).contains(&l) { 0.0 } else { l })
            .filter(|&l| l > 0.0)
            .map(|l| -l * l.log2())
            .sum();
        entropy.clamp(0.0, (self.dim() as f64).log2())
    }

    /// Largest entry-wise distance to another matrix of the same dimension.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        assert_eq!(self.dim(), other.dim(), "density matrices of different dimension");
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}
