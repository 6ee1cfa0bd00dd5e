//! Bipartite density matrices with dimension metadata.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, Side};

/// Validation tolerances for density matrices: Hermiticity is relative,
/// trace and spectrum are absolute.
pub const TRACE_TOL: f64 = 1e-10;
pub const SPECTRUM_TOL: f64 = 1e-10;

/// A bipartite state: a dense complex matrix plus the split `d_a x d_b`.
///
/// Construction validates Hermiticity, unit trace and positivity, so a
/// `DensityMatrix` value is always physical within the stated tolerances.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    d_a: usize,
    d_b: usize,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, d_a: usize, d_b: usize) -> Result<Self> {
        if matrix.rows() != d_a * d_b || !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                context: "density matrix vs bipartite split",
                expected: d_a * d_b,
                got: matrix.rows(),
            });
        }
        if !matrix.is_hermitian(linalg::HERMITIAN_TOL) {
            return Err(Error::NotHermitian {
                residual: matrix.hermiticity_residual() / matrix.frobenius_norm().max(1.0),
            });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::NotUnitTrace { trace: tr.re });
        }
        let min = linalg::min_eigenvalue(&matrix)?;
        if min < -SPECTRUM_TOL {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        Ok(Self { matrix, d_a, d_b })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn dim(&self) -> usize {
        self.d_a * self.d_b
    }

    pub fn side_dim(&self, side: Side) -> usize {
        match side {
            Side::A => self.d_a,
            Side::B => self.d_b,
        }
    }

    /// Reduced state of subsystem `a` (traces out `b`).
    pub fn reduced_a(&self) -> ComplexMatrix {
        linalg::partial_trace(&self.matrix, self.d_a, self.d_b, Side::B)
            .expect("dimensions validated at construction")
    }

    /// Reduced state of subsystem `b`.
    pub fn reduced_b(&self) -> ComplexMatrix {
        linalg::partial_trace(&self.matrix, self.d_a, self.d_b, Side::A)
            .expect("dimensions validated at construction")
    }

    pub fn reduced(&self, side: Side) -> ComplexMatrix {
        match side {
            Side::A => self.reduced_a(),
            Side::B => self.reduced_b(),
        }
    }

    pub fn purity(&self) -> f64 {
        self.matrix.hs_inner(&self.matrix).re
    }

    /// Build from a pure state vector of length `d_a * d_b` (normalized here).
    pub fn from_pure(amplitudes: &[Complex64], d_a: usize, d_b: usize) -> Result<Self> {
        if amplitudes.len() != d_a * d_b {
            return Err(Error::DimensionMismatch {
                context: "pure state vector vs bipartite split",
                expected: d_a * d_b,
                got: amplitudes.len(),
            });
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InternalConsistency {
                detail: "zero state vector".into(),
            });
        }
        let v: Vec<Complex64> = amplitudes.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::projector_from_vec(&v), d_a, d_b)
    }

    pub fn maximally_mixed(d_a: usize, d_b: usize) -> Self {
        let n = d_a * d_b;
        Self {
            matrix: ComplexMatrix::identity(n).scale_re(1.0 / n as f64),
            d_a,
            d_b,
        }
    }

    /// The Bell state (|00> + |11>)/sqrt(2) on two qubits.
    pub fn bell_phi_plus() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = [
            Complex64::new(s, 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::new(s, 0.0),
        ];
        Self::from_pure(&v, 2, 2).expect("Bell state is valid")
    }

    /// Werner-type mixture `p |Phi+><Phi+| + (1-p) I/4`.
    pub fn werner(p: f64) -> Result<Self> {
        if !(-1.0 / 3.0..=1.0).contains(&p) {
            return Err(Error::ParameterRange {
                name: "p",
                value: p,
                min: -1.0 / 3.0,
                max: 1.0,
            });
        }
        let bell = Self::bell_phi_plus();
        let m = bell
            .matrix
            .scale_re(p)
            .add(&ComplexMatrix::identity(4).scale_re((1.0 - p) / 4.0));
        Self::new(m, 2, 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_is_pure_with_mixed_marginals() {
        let bell = DensityMatrix::bell_phi_plus();
        assert!((bell.purity() - 1.0).abs() < 1e-14);
        let ra = bell.reduced_a();
        assert!(ra.dist(&ComplexMatrix::identity(2).scale_re(0.5)) < 1e-14);
    }

    #[test]
    fn product_state_partial_trace_recovers_factor() {
        let rho_a = ComplexMatrix::from_real_diag(&[0.7, 0.3]);
        let rho_b = ComplexMatrix::from_real_diag(&[0.4, 0.35, 0.25]);
        let rho = DensityMatrix::new(rho_a.kron(&rho_b), 2, 3).unwrap();
        assert!(rho.reduced_a().dist(&rho_a) < 1e-14);
        assert!(rho.reduced_b().dist(&rho_b) < 1e-14);
    }

    #[test]
    fn rejects_wrong_trace() {
        let m = ComplexMatrix::identity(4).scale_re(0.22);
        assert!(matches!(
            DensityMatrix::new(m, 2, 2),
            Err(Error::NotUnitTrace { .. })
        ));
    }

    #[test]
    fn rejects_negative_spectrum() {
        let m = ComplexMatrix::from_real_diag(&[0.8, 0.5, -0.2, -0.1]);
        assert!(matches!(
            DensityMatrix::new(m, 2, 2),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn werner_parameter_range() {
        assert!(DensityMatrix::werner(0.8).is_ok());
        assert!(DensityMatrix::werner(1.2).is_err());
    }
}
