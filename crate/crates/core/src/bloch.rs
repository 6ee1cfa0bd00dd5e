//! Orthonormal generator bases and the map between density matrices and
//! their local Bloch vectors plus correlation tensor.
//!
//! Conventions, fixed once for the whole crate:
//!
//! * Generators are Hermitian, traceless and orthonormal, `tr(G_i G_j) =
//!   delta_ij`. For d = 2 they are the Paulis over sqrt(2) in the order
//!   sigma_1, sigma_2, sigma_3; for d = 3 the Gell-Mann matrices over
//!   sqrt(2) in the order lambda_1 .. lambda_8. Generator indices are
//!   1-based everywhere they appear in a public set (matching the physics
//!   labels); Rust slices remain 0-based.
//! * `x_i = tr[rho (X_i ox I)]`, `y_j = tr[rho (I ox Y_j)]`,
//!   `t_ij = tr[rho (X_i ox Y_j)]` in the normalized basis.
//! * Two-qubit closed forms use the unnormalized Pauli coordinates
//!   `x_sigma = sqrt(2) x`, `T_sigma = 2 T`, reachable via
//!   [`BlochForm::to_conventional`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, RealMatrix};
use crate::state::DensityMatrix;

/// Orthonormal traceless Hermitian basis for one subsystem.
#[derive(Debug, Clone)]
pub struct GeneratorBasis {
    dim: usize,
    generators: Vec<ComplexMatrix>,
}

impl GeneratorBasis {
    /// Generalized Gell-Mann construction. For d = 2 the list is exactly
    /// sigma_{1,2,3}/sqrt(2); for d = 3 exactly lambda_{1..8}/sqrt(2).
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::UnsupportedDimension {
                dim,
                context: "generator basis needs dimension >= 2",
            });
        }
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let mut generators = Vec::with_capacity(dim * dim - 1);
        for k in 1..dim {
            for j in 0..k {
                // Symmetric then antisymmetric off-diagonal pair (j, k).
                let mut sym = ComplexMatrix::zeros(dim, dim);
                sym[(j, k)] = Complex64::new(inv_sqrt2, 0.0);
                sym[(k, j)] = Complex64::new(inv_sqrt2, 0.0);
                generators.push(sym);
                let mut asym = ComplexMatrix::zeros(dim, dim);
                asym[(j, k)] = Complex64::new(0.0, -inv_sqrt2);
                asym[(k, j)] = Complex64::new(0.0, inv_sqrt2);
                generators.push(asym);
            }
            // Diagonal generator closing level k.
            let norm = (2.0 / (k as f64 * (k + 1) as f64)).sqrt() * inv_sqrt2;
            let mut diag = ComplexMatrix::zeros(dim, dim);
            for i in 0..k {
                diag[(i, i)] = Complex64::new(norm, 0.0);
            }
            diag[(k, k)] = Complex64::new(-(k as f64) * norm, 0.0);
            generators.push(diag);
        }
        Ok(Self { dim, generators })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }

    /// Generator by its 1-based physics index (sigma_k, lambda_k).
    pub fn generator(&self, k: usize) -> &ComplexMatrix {
        &self.generators[k - 1]
    }

    /// The unnormalized operator (sigma_k or lambda_k), `sqrt(2) G_k`.
    pub fn unnormalized(&self, k: usize) -> ComplexMatrix {
        self.generator(k).scale_re(std::f64::consts::SQRT_2)
    }
}

/// Bloch data (x, y, T) of a bipartite state in the normalized bases.
#[derive(Debug, Clone)]
pub struct BlochForm {
    pub d_a: usize,
    pub d_b: usize,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub t: RealMatrix,
}

impl BlochForm {
    pub fn zero(d_a: usize, d_b: usize) -> Self {
        Self {
            d_a,
            d_b,
            x: vec![0.0; d_a * d_a - 1],
            y: vec![0.0; d_b * d_b - 1],
            t: RealMatrix::zeros(d_a * d_a - 1, d_b * d_b - 1),
        }
    }

    pub fn x_norm(&self) -> f64 {
        self.x.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn y_norm(&self) -> f64 {
        self.y.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn t_norm(&self) -> f64 {
        self.t.frobenius_norm()
    }

    /// All Bloch components scaled by one factor (mixing toward I/d).
    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            d_a: self.d_a,
            d_b: self.d_b,
            x: self.x.iter().map(|v| v * alpha).collect(),
            y: self.y.iter().map(|v| v * alpha).collect(),
            t: self.t.scale(alpha),
        }
    }

    /// Unnormalized (Pauli / Gell-Mann) coordinates for either qubit or
    /// qutrit sides: `(sqrt(2) x, sqrt(2) y, 2 T)`.
    pub(crate) fn unnormalized_coords(&self) -> (Vec<f64>, Vec<f64>, RealMatrix) {
        let s = std::f64::consts::SQRT_2;
        (
            self.x.iter().map(|v| v * s).collect(),
            self.y.iter().map(|v| v * s).collect(),
            self.t.scale(2.0),
        )
    }

    /// Two-qubit conventional coordinates `(x_sigma, y_sigma, T_sigma)`
    /// with `(T_sigma)_ij = tr[rho (sigma_i ox sigma_j)]`.
    pub fn to_conventional(&self) -> Result<(Vec<f64>, Vec<f64>, RealMatrix)> {
        if self.d_a != 2 || self.d_b != 2 {
            return Err(Error::UnsupportedDimension {
                dim: self.d_a.max(self.d_b),
                context: "conventional Pauli coordinates are two-qubit only",
            });
        }
        Ok(self.unnormalized_coords())
    }
}

/// Decompose a state into its Bloch form.
pub fn decompose(rho: &DensityMatrix) -> BlochForm {
    let basis_a = GeneratorBasis::new(rho.d_a()).expect("state dims >= 2");
    let basis_b = GeneratorBasis::new(rho.d_b()).expect("state dims >= 2");
    let ra = rho.reduced_a();
    let rb = rho.reduced_b();

    let x: Vec<f64> = basis_a
        .generators()
        .iter()
        .map(|g| ra.hs_inner(g).re)
        .collect();
    let y: Vec<f64> = basis_b
        .generators()
        .iter()
        .map(|g| rb.hs_inner(g).re)
        .collect();

    let na = basis_a.len();
    let nb = basis_b.len();
    let m = rho.matrix();
    let (d_a, d_b) = (rho.d_a(), rho.d_b());
    let t = RealMatrix::from_fn(na, nb, |i, j| {
        // tr[rho (X_i ox Y_j)] without forming the Kronecker product.
        let xi = &basis_a.generators()[i];
        let yj = &basis_b.generators()[j];
        let mut acc = Complex64::ZERO;
        for a1 in 0..d_a {
            for a2 in 0..d_a {
                let xv = xi[(a2, a1)];
                if xv == Complex64::ZERO {
                    continue;
                }
                for b1 in 0..d_b {
                    for b2 in 0..d_b {
                        acc += m[(a1 * d_b + b1, a2 * d_b + b2)] * xv * yj[(b2, b1)];
                    }
                }
            }
        }
        acc.re
    });

    BlochForm {
        d_a,
        d_b,
        x,
        y,
        t,
    }
}

/// Rebuild the matrix `I/(d_a d_b) + sum_i x_i X_i ox I/d_b + sum_j y_j
/// I/d_a ox Y_j + sum_ij t_ij X_i ox Y_j`.
///
/// The result is Hermitian with unit trace by construction; positivity is
/// not guaranteed and is the caller's concern.
pub fn reconstruct(b: &BlochForm) -> Result<ComplexMatrix> {
    let basis_a = GeneratorBasis::new(b.d_a)?;
    let basis_b = GeneratorBasis::new(b.d_b)?;
    if b.x.len() != basis_a.len() || b.y.len() != basis_b.len() {
        return Err(Error::DimensionMismatch {
            context: "Bloch vector length vs basis size",
            expected: basis_a.len(),
            got: b.x.len(),
        });
    }
    if b.t.rows() != basis_a.len() || b.t.cols() != basis_b.len() {
        return Err(Error::DimensionMismatch {
            context: "correlation tensor shape vs basis sizes",
            expected: basis_a.len() * basis_b.len(),
            got: b.t.rows() * b.t.cols(),
        });
    }

    let n = b.d_a * b.d_b;
    let mut m = ComplexMatrix::identity(n).scale_re(1.0 / n as f64);
    let eye_a = ComplexMatrix::identity(b.d_a);
    let eye_b = ComplexMatrix::identity(b.d_b);
    for (i, xi) in b.x.iter().enumerate() {
        if *xi != 0.0 {
            m = m.add(
                &basis_a.generators()[i]
                    .kron(&eye_b)
                    .scale_re(xi / b.d_b as f64),
            );
        }
    }
    for (j, yj) in b.y.iter().enumerate() {
        if *yj != 0.0 {
            m = m.add(
                &eye_a
                    .kron(&basis_b.generators()[j])
                    .scale_re(yj / b.d_a as f64),
            );
        }
    }
    for i in 0..b.t.rows() {
        for j in 0..b.t.cols() {
            let tij = b.t[(i, j)];
            if tij != 0.0 {
                m = m.add(
                    &basis_a.generators()[i]
                        .kron(&basis_b.generators()[j])
                        .scale_re(tij),
                );
            }
        }
    }
    Ok(m)
}

/// The traceless operator `varrho = x.X ox I/d_b + rho_c` that one-sided
/// geometric measures are a function of.
pub fn varrho(b: &BlochForm) -> Result<ComplexMatrix> {
    let basis_a = GeneratorBasis::new(b.d_a)?;
    let basis_b = GeneratorBasis::new(b.d_b)?;
    let eye_b = ComplexMatrix::identity(b.d_b);
    let mut m = ComplexMatrix::zeros(b.d_a * b.d_b, b.d_a * b.d_b);
    for (i, xi) in b.x.iter().enumerate() {
        if *xi != 0.0 {
            m = m.add(
                &basis_a.generators()[i]
                    .kron(&eye_b)
                    .scale_re(xi / b.d_b as f64),
            );
        }
    }
    for i in 0..b.t.rows() {
        for j in 0..b.t.cols() {
            let tij = b.t[(i, j)];
            if tij != 0.0 {
                m = m.add(
                    &basis_a.generators()[i]
                        .kron(&basis_b.generators()[j])
                        .scale_re(tij),
                );
            }
        }
    }
    Ok(m)
}

/// Correlation matrix `R = [[1/sqrt(d_a d_b), y^t], [x, T]]`.
pub fn correlation_matrix(b: &BlochForm) -> RealMatrix {
    let na = b.x.len();
    let nb = b.y.len();
    let mut r = RealMatrix::zeros(na + 1, nb + 1);
    r[(0, 0)] = 1.0 / ((b.d_a * b.d_b) as f64).sqrt();
    for (j, yj) in b.y.iter().enumerate() {
        r[(0, j + 1)] = *yj;
    }
    for (i, xi) in b.x.iter().enumerate() {
        r[(i + 1, 0)] = *xi;
    }
    for i in 0..na {
        for j in 0..nb {
            r[(i + 1, j + 1)] = b.t[(i, j)];
        }
    }
    r
}

/// Index sets (1-based generator labels) where Bloch data exceeds `tol`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportPattern {
    pub x_support: Vec<usize>,
    pub y_support: Vec<usize>,
    pub t_row_support: Vec<usize>,
    pub t_col_support: Vec<usize>,
}

pub fn support_pattern(b: &BlochForm, tol: f64) -> SupportPattern {
    let x_support = b
        .x
        .iter()
        .enumerate()
        .filter(|(_, v)| v.abs() > tol)
        .map(|(i, _)| i + 1)
        .collect();
    let y_support = b
        .y
        .iter()
        .enumerate()
        .filter(|(_, v)| v.abs() > tol)
        .map(|(j, _)| j + 1)
        .collect();
    let t_row_support = (0..b.t.rows())
        .filter(|&i| (0..b.t.cols()).any(|j| b.t[(i, j)].abs() > tol))
        .map(|i| i + 1)
        .collect();
    let t_col_support = (0..b.t.cols())
        .filter(|&j| (0..b.t.rows()).any(|i| b.t[(i, j)].abs() > tol))
        .map(|j| j + 1)
        .collect();
    SupportPattern {
        x_support,
        y_support,
        t_row_support,
        t_col_support,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::DensityMatrix;

    #[test]
    fn pauli_basis_order_and_normalization() {
        let basis = GeneratorBasis::new(2).unwrap();
        assert_eq!(basis.len(), 3);
        let g3 = basis.generator(3);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((g3[(0, 0)].re - s).abs() < 1e-15);
        assert!((g3[(1, 1)].re + s).abs() < 1e-15);
        // G_1 is sigma_1/sqrt(2), G_2 is sigma_2/sqrt(2).
        assert!((basis.generator(1)[(0, 1)].re - s).abs() < 1e-15);
        assert!((basis.generator(2)[(0, 1)].im + s).abs() < 1e-15);
    }

    #[test]
    fn gell_mann_basis_matches_printed_list() {
        let basis = GeneratorBasis::new(3).unwrap();
        assert_eq!(basis.len(), 8);
        let g8 = basis.unnormalized(8);
        let inv_sqrt3 = 1.0 / 3.0_f64.sqrt();
        assert!((g8[(0, 0)].re - inv_sqrt3).abs() < 1e-14);
        assert!((g8[(1, 1)].re - inv_sqrt3).abs() < 1e-14);
        assert!((g8[(2, 2)].re + 2.0 * inv_sqrt3).abs() < 1e-14);
        // lambda_4 couples levels 0 and 2, lambda_6 couples 1 and 2.
        assert!((basis.unnormalized(4)[(0, 2)].re - 1.0).abs() < 1e-14);
        assert!((basis.unnormalized(6)[(1, 2)].re - 1.0).abs() < 1e-14);
        assert!((basis.unnormalized(7)[(1, 2)].im + 1.0).abs() < 1e-14);
    }

    #[test]
    fn gram_matrix_is_identity() {
        for d in 2..=4 {
            let basis = GeneratorBasis::new(d).unwrap();
            for (i, gi) in basis.generators().iter().enumerate() {
                assert!(gi.trace().norm() < 1e-14, "generator {i} not traceless");
                for (j, gj) in basis.generators().iter().enumerate() {
                    let inner = gi.hs_inner(gj);
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (inner.re - expected).abs() < 1e-12 && inner.im.abs() < 1e-12,
                        "gram ({i},{j}) = {inner}"
                    );
                }
            }
        }
    }

    #[test]
    fn basis_rejects_dimension_one() {
        assert!(GeneratorBasis::new(1).is_err());
    }

    #[test]
    fn maximally_mixed_decomposes_to_zero() {
        let b = decompose(&DensityMatrix::maximally_mixed(2, 2));
        assert!(b.x_norm() < 1e-14 && b.y_norm() < 1e-14 && b.t_norm() < 1e-14);
    }

    #[test]
    fn product_state_tensor_factorizes() {
        let rho_a = ComplexMatrix::from_real_diag(&[0.7, 0.3]);
        let rho_b = ComplexMatrix::from_real_diag(&[0.6, 0.4]);
        let rho = DensityMatrix::new(rho_a.kron(&rho_b), 2, 2).unwrap();
        let b = decompose(&rho);
        for i in 0..3 {
            for j in 0..3 {
                assert!((b.t[(i, j)] - b.x[i] * b.y[j]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn zero_bloch_reconstructs_maximally_mixed() {
        let m = reconstruct(&BlochForm::zero(2, 3)).unwrap();
        assert!(m.dist(&ComplexMatrix::identity(6).scale_re(1.0 / 6.0)) < 1e-15);
    }

    #[test]
    fn pure_x_exceeding_ball_gives_negative_eigenvalue() {
        let mut b = BlochForm::zero(2, 2);
        b.x[2] = 1.0; // beyond the qubit ball radius 1/sqrt(2)
        let m = reconstruct(&b).unwrap();
        let min = crate::linalg::min_eigenvalue(&m).unwrap();
        assert!(min < -1e-3, "expected nonphysical reconstruction, min eig {min}");
    }

    #[test]
    fn correlation_matrix_corner_and_block() {
        let bell = decompose(&DensityMatrix::bell_phi_plus());
        let r = correlation_matrix(&bell);
        assert!((r[(0, 0)] - 0.5).abs() < 1e-15);
        for j in 1..4 {
            assert!(r[(0, j)].abs() < 1e-12 && r[(j, 0)].abs() < 1e-12);
        }
        assert!((r[(1, 1)] - 0.5).abs() < 1e-12);
        assert!((r[(2, 2)] + 0.5).abs() < 1e-12);
        assert!((r[(3, 3)] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn support_pattern_of_bell() {
        let bell = decompose(&DensityMatrix::bell_phi_plus());
        let sp = support_pattern(&bell, 1e-9);
        assert!(sp.x_support.is_empty() && sp.y_support.is_empty());
        assert_eq!(sp.t_row_support, vec![1, 2, 3]);
        assert_eq!(sp.t_col_support, vec![1, 2, 3]);
    }

    #[test]
    fn support_pattern_single_row() {
        let mut b = BlochForm::zero(2, 2);
        b.t[(2, 0)] = 0.1;
        b.t[(2, 1)] = 0.05;
        b.t[(2, 2)] = -0.2;
        let sp = support_pattern(&b, 1e-9);
        assert_eq!(sp.t_row_support, vec![3]);
        assert_eq!(sp.t_col_support, vec![1, 2, 3]);
    }

    #[test]
    fn conventional_coordinates_of_bell() {
        let bell = decompose(&DensityMatrix::bell_phi_plus());
        let (x_s, _, t_s) = bell.to_conventional().unwrap();
        assert!(x_s.iter().all(|v| v.abs() < 1e-12));
        assert!((t_s[(0, 0)] - 1.0).abs() < 1e-12);
        assert!((t_s[(1, 1)] + 1.0).abs() < 1e-12);
        assert!((t_s[(2, 2)] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn conventional_rejects_qutrit() {
        let b = BlochForm::zero(2, 3);
        assert!(b.to_conventional().is_err());
    }
}
