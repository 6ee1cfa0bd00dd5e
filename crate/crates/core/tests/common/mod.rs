//! Brute-force oracles shared by the integration and acceptance suites.
//!
//! Everything here recomputes measurement action from first principles
//! (explicit projector formulas, dense grids) so it stays independent of
//! the optimizer and closed-form code paths it is used to check.

use num_complex::Complex64;
use qcorr::linalg::{schatten_power, ComplexMatrix, PNorm, Side};
use qcorr::DensityMatrix;

/// Qubit projectors (I +- n.sigma)/2 for the Bloch axis (theta, phi),
/// written out entrywise.
pub fn qubit_projectors(theta: f64, phi: f64) -> [ComplexMatrix; 2] {
    let (nx, ny, nz) = (
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    );
    let mut plus = ComplexMatrix::zeros(2, 2);
    plus[(0, 0)] = Complex64::new(0.5 * (1.0 + nz), 0.0);
    plus[(0, 1)] = Complex64::new(0.5 * nx, -0.5 * ny);
    plus[(1, 0)] = Complex64::new(0.5 * nx, 0.5 * ny);
    plus[(1, 1)] = Complex64::new(0.5 * (1.0 - nz), 0.0);
    let mut minus = ComplexMatrix::zeros(2, 2);
    minus[(0, 0)] = Complex64::new(0.5 * (1.0 - nz), 0.0);
    minus[(0, 1)] = Complex64::new(-0.5 * nx, 0.5 * ny);
    minus[(1, 0)] = Complex64::new(-0.5 * nx, -0.5 * ny);
    minus[(1, 1)] = Complex64::new(0.5 * (1.0 + nz), 0.0);
    [plus, minus]
}

fn project_with(
    m: &ComplexMatrix,
    d_a: usize,
    d_b: usize,
    projectors: &[ComplexMatrix],
    side: Side,
) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(d_a * d_b, d_a * d_b);
    for p in projectors {
        let full = match side {
            Side::A => p.kron(&ComplexMatrix::identity(d_b)),
            Side::B => ComplexMatrix::identity(d_a).kron(p),
        };
        out = out.add(&full.mul(m).mul(&full));
    }
    out
}

/// Dense-grid optimum of `|| rho - Pi(rho) ||_p^p` over qubit
/// measurements on one side. `n_theta x n_phi` grid; returns (min, max).
pub fn grid_extrema_one_sided(
    rho: &DensityMatrix,
    side: Side,
    p: PNorm,
    n_theta: usize,
    n_phi: usize,
) -> (f64, f64) {
    assert_eq!(rho.side_dim(side), 2, "grid oracle is for qubit sides");
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n_theta {
        let theta = std::f64::consts::PI * (i as f64 + 0.5) / n_theta as f64;
        for j in 0..n_phi {
            let phi = std::f64::consts::TAU * j as f64 / n_phi as f64;
            let projected = project_with(
                rho.matrix(),
                rho.d_a(),
                rho.d_b(),
                &qubit_projectors(theta, phi),
                side,
            );
            let value = schatten_power(&rho.matrix().sub(&projected), p);
            lo = lo.min(value);
            hi = hi.max(value);
        }
    }
    (lo, hi)
}

/// Dense-grid minimum of the two-sided disturbance over qubit measurement
/// pairs.
pub fn grid_min_two_sided(rho: &DensityMatrix, p: PNorm, n_theta: usize, n_phi: usize) -> f64 {
    assert_eq!(rho.d_a(), 2);
    assert_eq!(rho.d_b(), 2);
    let axes: Vec<(f64, f64)> = (0..n_theta)
        .flat_map(|i| {
            let theta = std::f64::consts::PI * (i as f64 + 0.5) / n_theta as f64;
            (0..n_phi).map(move |j| {
                (theta, std::f64::consts::TAU * j as f64 / n_phi as f64)
            })
        })
        .collect();
    let mut best = f64::INFINITY;
    for &(ta, pa) in &axes {
        let once = project_with(rho.matrix(), 2, 2, &qubit_projectors(ta, pa), Side::A);
        for &(tb, pb) in &axes {
            let twice = project_with(&once, 2, 2, &qubit_projectors(tb, pb), Side::B);
            let value = schatten_power(&rho.matrix().sub(&twice), p);
            best = best.min(value);
        }
    }
    best
}
