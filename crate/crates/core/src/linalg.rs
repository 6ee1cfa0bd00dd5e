//! Dense complex matrix kernel for dimensions up to 9.
//!
//! Everything here is sized for bipartite qubit/qutrit work: Hermitian
//! eigendecomposition by cyclic Jacobi sweeps, singular values, Kronecker
//! products, partial traces, Schatten norms and the PSD square root.
//! Robustness is preferred over speed throughout; matrices are immutable
//! values and all operations are pure.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerance for treating a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Off-diagonal convergence target of the Jacobi sweeps.
const JACOBI_TOL: f64 = 1e-13;
/// Hard cap on Jacobi sweeps; dimensions <= 9 converge in far fewer.
const JACOBI_MAX_SWEEPS: usize = 200;

/// Dense complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Build from rows of (re, im) pairs. Rows must be equally long.
    pub fn from_rows(rows: &[Vec<(f64, f64)>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    context: "ragged rows in matrix literal",
                    expected: c,
                    got: row.len(),
                });
            }
            data.extend(row.iter().map(|&(re, im)| Complex64::new(re, im)));
        }
        Ok(Self { rows: r, cols: c, data })
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Outer product `v v^dag` of a column vector.
    pub fn projector_from_vec(v: &[Complex64]) -> Self {
        let n = v.len();
        Self::from_fn(n, n, |i, j| v[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "add: shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "sub: shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "mul: inner dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Standard Kronecker product; output dimensions multiply.
    pub fn kron(&self, other: &Self) -> Self {
        let (ra, ca) = (self.rows, self.cols);
        let (rb, cb) = (other.rows, other.cols);
        let mut out = Self::zeros(ra * rb, ca * cb);
        for i in 0..ra {
            for j in 0..ca {
                let a = self[(i, j)];
                if a == Complex64::ZERO {
                    continue;
                }
                for k in 0..rb {
                    for l in 0..cb {
                        out[(i * rb + k, j * cb + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Hilbert-Schmidt (Frobenius) norm, equal to the Schatten 2-norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `|| self - other ||_F`.
    pub fn dist(&self, other: &Self) -> f64 {
        self.sub(other).frobenius_norm()
    }

    /// `|| M - M^dag ||_F`, the Hermiticity residual.
    pub fn hermiticity_residual(&self) -> f64 {
        self.sub(&self.adjoint()).frobenius_norm()
    }

    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        self.is_square() && self.hermiticity_residual() <= rel_tol * self.frobenius_norm().max(1.0)
    }

    /// Hilbert-Schmidt inner product `tr(A^dag B)`.
    pub fn hs_inner(&self, other: &Self) -> Complex64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "hs_inner: shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Dense real matrix used for Bloch-vector and correlation-tensor algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "mul: inner dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "mul_vec: length mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| Complex64::new(self[(i, j)], 0.0))
    }

    /// Eigenvalues (ascending) of a real symmetric matrix.
    pub fn eig_symmetric(&self) -> Result<Vec<f64>> {
        Ok(eig_hermitian(&self.to_complex())?.eigenvalues)
    }
}

impl std::ops::Index<(usize, usize)> for RealMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RealMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Result of a Hermitian eigendecomposition: `H = V diag(w) V^dag` with the
/// eigenvalues `w` ascending and `V` unitary (eigenvectors in columns).
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    /// Rebuild `V f(diag) V^dag` for a scalar function of the eigenvalues.
    pub fn apply_spectral(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &w) in self.eigenvalues.iter().enumerate() {
            let fw = f(w);
            if fw == 0.0 {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += v[(i, k)] * v[(j, k)].conj() * fw;
                }
            }
        }
        out
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// The input must be Hermitian within `HERMITIAN_TOL` relative to its norm;
/// it is symmetrized before the sweeps so the rotations act on an exactly
/// Hermitian matrix.
pub fn eig_hermitian(h: &ComplexMatrix) -> Result<HermitianEig> {
    if !h.is_square() {
        return Err(Error::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    let norm = h.frobenius_norm();
    let residual = h.hermiticity_residual();
    if residual > HERMITIAN_TOL * norm.max(1.0) {
        return Err(Error::NotHermitian {
            residual: residual / norm.max(1.0),
        });
    }

    let n = h.rows();
    let mut a = h.add(&h.adjoint()).scale_re(0.5);
    let mut v = ComplexMatrix::identity(n);
    let scale = norm.max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += 2.0 * a[(i, j)].norm_sqr();
            }
        }
        if off.sqrt() <= JACOBI_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= 1e-300 {
                    continue;
                }
                let phase = apq / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * r);
                // Smaller root of t^2 + 2 tau t - 1 = 0 keeps rotations stable.
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // U acts on coordinates (p, q):
                //   U[p][p] = c*phase, U[p][q] = s*phase, U[q][p] = -s, U[q][q] = c.
                let upp = phase * c;
                let upq = phase * s;
                let uqp = Complex64::new(-s, 0.0);
                let uqq = Complex64::new(c, 0.0);

                // A <- U^dag A U: columns first, then rows.
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * upp + akq * uqp;
                    a[(k, q)] = akp * upq + akq * uqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = upp.conj() * apk + uqp.conj() * aqk;
                    a[(q, k)] = upq.conj() * apk + uqq.conj() * aqk;
                }
                // V <- V U.
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * upp + vkq * uqp;
                    v[(k, q)] = vkp * upq + vkq * uqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);

    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

/// Singular values in descending order, from the spectrum of `M^dag M`.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let gram = m.adjoint().mul(m);
    let eig = eig_hermitian(&gram).expect("Gram matrix is Hermitian by construction");
    let mut sv: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&w| w.max(0.0).sqrt())
        .collect();
    sv.reverse();
    sv
}

/// Schatten p-norm exponent supported by the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PNorm {
    One,
    Two,
}

impl PNorm {
    pub fn exponent(self) -> f64 {
        match self {
            PNorm::One => 1.0,
            PNorm::Two => 2.0,
        }
    }
}

/// Schatten p-norm: sum of singular values for p = 1, Hilbert-Schmidt norm
/// for p = 2.
pub fn schatten_norm(m: &ComplexMatrix, p: PNorm) -> f64 {
    match p {
        PNorm::One => singular_values(m).iter().sum(),
        PNorm::Two => m.frobenius_norm(),
    }
}

/// `|| M ||_p^p`, the form the geometric measures are defined with.
///
/// For Hermitian `M` the trace norm comes straight from the eigenvalues,
/// which is both cheaper and more accurate than the Gram-matrix route.
pub fn schatten_power(m: &ComplexMatrix, p: PNorm) -> f64 {
    match p {
        PNorm::One => {
            if m.is_hermitian(HERMITIAN_TOL) {
                let eig = eig_hermitian(m).expect("checked Hermitian");
                eig.eigenvalues.iter().map(|w| w.abs()).sum()
            } else {
                singular_values(m).iter().sum()
            }
        }
        PNorm::Two => m.data.iter().map(|z| z.norm_sqr()).sum(),
    }
}

/// Partial trace side selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::A => write!(f, "a"),
            Side::B => write!(f, "b"),
        }
    }
}

/// Trace out one subsystem of a `d_a * d_b` square matrix.
///
/// `side` names the subsystem that is traced out: `Side::B` returns the
/// reduced matrix on `a` and vice versa. The trace is preserved.
pub fn partial_trace(m: &ComplexMatrix, d_a: usize, d_b: usize, side: Side) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.rows() != d_a * d_b {
        return Err(Error::DimensionMismatch {
            context: "partial trace of bipartite matrix",
            expected: d_a * d_b,
            got: m.rows(),
        });
    }
    match side {
        Side::B => {
            let mut out = ComplexMatrix::zeros(d_a, d_a);
            for i in 0..d_a {
                for j in 0..d_a {
                    for b in 0..d_b {
                        out[(i, j)] += m[(i * d_b + b, j * d_b + b)];
                    }
                }
            }
            Ok(out)
        }
        Side::A => {
            let mut out = ComplexMatrix::zeros(d_b, d_b);
            for i in 0..d_b {
                for j in 0..d_b {
                    for a in 0..d_a {
                        out[(i, j)] += m[(a * d_b + i, a * d_b + j)];
                    }
                }
            }
            Ok(out)
        }
    }
}

/// PSD square root `R` with `R R = M`.
///
/// Eigenvalues in `[-1e-10, 0)` (relative to the matrix scale) are clamped
/// to zero; anything more negative is rejected. Eigenvalues below the
/// floating-point noise floor are also zeroed, since the square root would
/// amplify them from O(eps) to O(sqrt(eps)).
pub fn matrix_sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(m)?;
    let scale = m.frobenius_norm().max(1.0);
    let min = eig.min_eigenvalue();
    if min < -1e-10 * scale {
        return Err(Error::NotPositive {
            min_eigenvalue: min,
        });
    }
    let floor = 1e-13 * scale;
    Ok(eig.apply_spectral(|w| if w <= floor { 0.0 } else { w.sqrt() }))
}

/// Minimum eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    Ok(eig_hermitian(m)?.min_eigenvalue())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub fn sigma(k: usize) -> ComplexMatrix {
        match k {
            1 => ComplexMatrix::from_fn(2, 2, |i, j| if i != j { Complex64::ONE } else { Complex64::ZERO }),
            2 => {
                let mut m = ComplexMatrix::zeros(2, 2);
                m[(0, 1)] = c(0.0, -1.0);
                m[(1, 0)] = c(0.0, 1.0);
                m
            }
            3 => ComplexMatrix::from_real_diag(&[1.0, -1.0]),
            _ => panic!("no such Pauli"),
        }
    }

    #[test]
    fn kron_identity_case() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.kron(&i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_block_structure_sigma1_sigma3() {
        let m = sigma(1).kron(&sigma(3));
        let mut expected = ComplexMatrix::zeros(4, 4);
        expected[(0, 2)] = c(1.0, 0.0);
        expected[(1, 3)] = c(-1.0, 0.0);
        expected[(2, 0)] = c(1.0, 0.0);
        expected[(3, 1)] = c(-1.0, 0.0);
        assert!(m.dist(&expected) == 0.0);
    }

    #[test]
    fn partial_trace_maximally_mixed_2x3() {
        let m = ComplexMatrix::identity(6).scale_re(1.0 / 6.0);
        let out = partial_trace(&m, 2, 3, Side::A).unwrap();
        assert!(out.dist(&ComplexMatrix::identity(3).scale_re(1.0 / 3.0)) < 1e-15);
    }

    #[test]
    fn partial_trace_dimension_mismatch() {
        let m = ComplexMatrix::identity(5);
        assert!(matches!(
            partial_trace(&m, 2, 3, Side::B),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn eig_sigma3() {
        let eig = eig_hermitian(&sigma(3)).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eig_sigma1_vectors_up_to_phase() {
        let eig = eig_hermitian(&sigma(1)).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-14);
        // |<v|target>| = 1 up to phase.
        let minus = eig.eigenvectors.column(0);
        let overlap = (minus[0] - minus[1]).norm() / 2.0_f64.sqrt();
        assert!((overlap - 1.0).abs() < 1e-12, "overlap {overlap}");
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn schatten_trivial_values() {
        assert!((schatten_norm(&ComplexMatrix::from_real_diag(&[1.0, -1.0]), PNorm::One) - 2.0).abs() < 1e-12);
        assert!((schatten_norm(&sigma(1), PNorm::Two) - 2.0_f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn sqrt_of_quarter_identity() {
        let m = ComplexMatrix::identity(2).scale_re(0.25);
        let r = matrix_sqrt_psd(&m).unwrap();
        assert!(r.dist(&ComplexMatrix::identity(2).scale_re(0.5)) < 1e-12);
    }

    #[test]
    fn sqrt_of_projector_is_projector() {
        let v = [c(0.6, 0.0), c(0.0, 0.8)];
        let p = ComplexMatrix::projector_from_vec(&v);
        let r = matrix_sqrt_psd(&p).unwrap();
        assert!(r.dist(&p) < 1e-10);
    }

    #[test]
    fn sqrt_rejects_indefinite() {
        assert!(matches!(
            matrix_sqrt_psd(&sigma(3)),
            Err(Error::NotPositive { .. })
        ));
    }
}
