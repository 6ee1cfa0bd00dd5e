//! Kraus-operator channels on one subsystem, local product channels, and
//! the scaling structure of their Heisenberg adjoints.
//!
//! A channel acts as `S(rho) = sum_mu E_mu rho E_mu^dag` with
//! `sum_mu E_mu^dag E_mu = I`. The adjoint `S^dag(A) = sum_mu E_mu^dag A
//! E_mu` satisfies the trace duality `tr[S(rho) A] = tr[rho S^dag(A)]`.
//! The scaling profile records which basis generators are eigen-operators
//! of the adjoint together with their factors; that is the hypothesis the
//! factorization theorems consume.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch::GeneratorBasis;
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, RealMatrix, Side};
use crate::state::DensityMatrix;

/// Completeness residual allowed for `sum E^dag E = I`.
pub const COMPLETENESS_TOL: f64 = 1e-10;
/// Residual below which a generator counts as scaled by the adjoint.
pub const SCALING_TOL: f64 = 1e-10;
/// Factors closer than this share one group.
pub const GROUPING_TOL: f64 = 1e-9;
/// Epsilon amplitudes above this negative threshold are rounding noise and
/// get clamped to zero; anything lower is an infeasible scaling request.
pub const EPSILON_CLAMP: f64 = -1e-12;

/// A CPTP channel on a single subsystem, stored as its Kraus operators.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    dim: usize,
    kraus: Vec<ComplexMatrix>,
}

impl KrausChannel {
    /// Validate and wrap a Kraus list: nonempty, square, one dimension,
    /// trace-preserving within [`COMPLETENESS_TOL`].
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or(Error::EmptyKrausList)?;
        if !first.is_square() {
            return Err(Error::NotSquare {
                rows: first.rows(),
                cols: first.cols(),
            });
        }
        let dim = first.rows();
        for e in &kraus {
            if e.rows() != dim || e.cols() != dim {
                return Err(Error::DimensionMismatch {
                    context: "Kraus operators must share one dimension",
                    expected: dim,
                    got: e.rows(),
                });
            }
        }
        let channel = Self { dim, kraus };
        let residual = channel.completeness_residual();
        if residual > COMPLETENESS_TOL {
            return Err(Error::NotTracePreserving { residual });
        }
        Ok(channel)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            kraus: vec![ComplexMatrix::identity(dim)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// `|| sum E^dag E - I ||_F`.
    pub fn completeness_residual(&self) -> f64 {
        let mut acc = ComplexMatrix::zeros(self.dim, self.dim);
        for e in &self.kraus {
            acc = acc.add(&e.adjoint().mul(e));
        }
        acc.dist(&ComplexMatrix::identity(self.dim))
    }

    /// Schroedinger action on a single-subsystem matrix.
    pub fn apply_single(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        if m.rows() != self.dim || m.cols() != self.dim {
            return Err(Error::DimensionMismatch {
                context: "channel input dimension",
                expected: self.dim,
                got: m.rows(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for e in &self.kraus {
            out = out.add(&e.mul(m).mul(&e.adjoint()));
        }
        Ok(out)
    }

    /// Heisenberg adjoint `S^dag(A) = sum E^dag A E`. Unital by
    /// trace preservation: `S^dag(I) = I`.
    pub fn adjoint_apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        if a.rows() != self.dim || a.cols() != self.dim {
            return Err(Error::DimensionMismatch {
                context: "adjoint input dimension",
                expected: self.dim,
                got: a.rows(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for e in &self.kraus {
            out = out.add(&e.adjoint().mul(a).mul(e));
        }
        Ok(out)
    }

    /// Per-generator adjoint scaling report; see [`ScalingProfile`].
    pub fn scaling_profile(&self) -> ScalingProfile {
        let basis = GeneratorBasis::new(self.dim).expect("channel dim >= 2");
        let n = basis.len();
        let sqrt_d = (self.dim as f64).sqrt();
        let mut entries = Vec::with_capacity(n);
        let mut trace_part = vec![0.0; n];
        let mut mixing = RealMatrix::zeros(n, n);
        for (i, g) in basis.generators().iter().enumerate() {
            let image = self
                .adjoint_apply(g)
                .expect("generator dimension matches channel");
            trace_part[i] = image.trace().re / sqrt_d;
            for (m, gm) in basis.generators().iter().enumerate() {
                mixing[(i, m)] = gm.hs_inner(&image).re;
            }
            // Orthonormal projection onto G_i; accept only if the full
            // residual (including any identity component) is tiny.
            let q = mixing[(i, i)];
            let residual = image.sub(&g.scale_re(q)).frobenius_norm();
            if residual <= SCALING_TOL {
                entries.push(GeneratorScaling::Scaled(q));
            } else {
                entries.push(GeneratorScaling::NotScaled);
            }
        }
        ScalingProfile::from_parts(self.dim, entries, AdjointTransfer { trace_part, mixing })
    }

    /// Choi matrix `sum_ij |i><j| ox S(|i><j|)`; PSD iff the map is CP.
    pub fn choi_matrix(&self) -> ComplexMatrix {
        let d = self.dim;
        let mut choi = ComplexMatrix::zeros(d * d, d * d);
        for i in 0..d {
            for j in 0..d {
                let mut unit = ComplexMatrix::zeros(d, d);
                unit[(i, j)] = Complex64::ONE;
                let image = self.apply_single(&unit).expect("dims match");
                choi = choi.add(&unit.kron(&image));
            }
        }
        choi
    }

    /// Minimum Choi eigenvalue; a consistency diagnostic, since Kraus form
    /// already guarantees complete positivity.
    pub fn choi_min_eigenvalue(&self) -> Result<f64> {
        linalg::min_eigenvalue(&self.choi_matrix())
    }
}

// ---------------------------------------------------------------------------
// Parametrized constructors
// ---------------------------------------------------------------------------

fn kraus_from_amplitudes(
    epsilons: &[(f64, ComplexMatrix)],
) -> Result<Vec<ComplexMatrix>> {
    let mut kraus = Vec::new();
    for (index, (eps, op)) in epsilons.iter().enumerate() {
        if *eps < EPSILON_CLAMP {
            return Err(Error::InfeasibleScaling {
                index,
                epsilon: *eps,
            });
        }
        let eps = eps.max(0.0);
        if eps > 0.0 {
            kraus.push(op.scale_re(eps.sqrt()));
        }
    }
    Ok(kraus)
}

impl KrausChannel {
    /// Depolarizing channel `rho -> q rho + (1-q) I/d` for d in {2, 3}.
    pub fn depolarizing(dim: usize, q: f64) -> Result<Self> {
        let min = match dim {
            2 | 3 => -1.0 / ((dim * dim - 1) as f64),
            _ => {
                return Err(Error::UnsupportedDimension {
                    dim,
                    context: "depolarizing channel supports d = 2 or 3",
                })
            }
        };
        if !(min..=1.0).contains(&q) {
            return Err(Error::ParameterRange {
                name: "q",
                value: q,
                min,
                max: 1.0,
            });
        }
        match dim {
            2 => Self::pauli_from_q(q, q, q),
            _ => Self::gellmann_from_q(&[q; 8]),
        }
    }

    /// Pauli channel realizing `S^dag(sigma_k) = q_k sigma_k`.
    pub fn pauli_from_q(q1: f64, q2: f64, q3: f64) -> Result<Self> {
        let eps0 = 0.25 * (1.0 + q1 + q2 + q3);
        let eps1 = 0.25 * (1.0 + q1 - q2 - q3);
        let eps2 = 0.25 * (1.0 - q1 + q2 - q3);
        let eps3 = 0.25 * (1.0 - q1 - q2 + q3);
        let basis = GeneratorBasis::new(2)?;
        let kraus = kraus_from_amplitudes(&[
            (eps0, ComplexMatrix::identity(2)),
            (eps1, basis.unnormalized(1)),
            (eps2, basis.unnormalized(2)),
            (eps3, basis.unnormalized(3)),
        ])?;
        Self::new(kraus)
    }

    /// Phase flip: `sigma_{1,2}` decay by `q`, `sigma_3` survives.
    pub fn phase_flip(q: f64) -> Result<Self> {
        Self::pauli_from_q(q, q, 1.0)
    }

    /// Bit flip: `sigma_1` survives.
    pub fn bit_flip(q: f64) -> Result<Self> {
        Self::pauli_from_q(1.0, q, q)
    }

    /// Bit-phase flip: `sigma_2` survives.
    pub fn bit_phase_flip(q: f64) -> Result<Self> {
        Self::pauli_from_q(q, 1.0, q)
    }

    /// Generalized amplitude damping with damping parameter `q` and
    /// thermal weight `eta`; `eta = 1` is the zero-temperature reservoir.
    pub fn gad(q: f64, eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::ParameterRange {
                name: "q",
                value: q,
                min: 0.0,
                max: 1.0,
            });
        }
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::ParameterRange {
                name: "eta",
                value: eta,
                min: 0.0,
                max: 1.0,
            });
        }
        let basis = GeneratorBasis::new(2)?;
        let eye = ComplexMatrix::identity(2);
        let sigma1 = basis.unnormalized(1);
        let sigma2 = basis.unnormalized(2);
        let sigma3 = basis.unnormalized(3);
        let sigma_minus = sigma1.sub(&sigma2.scale(Complex64::new(0.0, 1.0))).scale_re(0.5);
        let sigma_plus = sigma1.add(&sigma2.scale(Complex64::new(0.0, 1.0))).scale_re(0.5);

        let e0 = eye
            .scale_re(1.0 + q)
            .sub(&sigma3.scale_re(1.0 - q))
            .scale_re(0.5 * eta.sqrt());
        let e1 = eye
            .scale_re(1.0 + q)
            .add(&sigma3.scale_re(1.0 - q))
            .scale_re(0.5 * (1.0 - eta).sqrt());
        let e2 = sigma_minus.scale_re((eta * (1.0 - q * q)).sqrt());
        let e3 = sigma_plus.scale_re(((1.0 - eta) * (1.0 - q * q)).sqrt());

        Self::new(
            [e0, e1, e2, e3]
                .into_iter()
                .filter(|e| e.max_abs() > 0.0)
                .collect(),
        )
    }

    /// Gell-Mann channel realizing `S^dag(lambda_k) = q_k lambda_k` for all
    /// eight generators. The scaling vector must satisfy
    /// `q1+q2+q3 = q6+q7+q8` and `q4+q5 = q6+q7`.
    pub fn gellmann_from_q(q: &[f64; 8]) -> Result<Self> {
        let lhs1 = q[0] + q[1] + q[2];
        let rhs1 = q[5] + q[6] + q[7];
        if (lhs1 - rhs1).abs() > 1e-10 {
            return Err(Error::ScalingConstraint {
                detail: format!(
                    "q1+q2+q3 = {lhs1:.12} must equal q6+q7+q8 = {rhs1:.12}"
                ),
            });
        }
        let lhs2 = q[3] + q[4];
        let rhs2 = q[5] + q[6];
        if (lhs2 - rhs2).abs() > 1e-10 {
            return Err(Error::ScalingConstraint {
                detail: format!("q4+q5 = {lhs2:.12} must equal q6+q7 = {rhs2:.12}"),
            });
        }

        let (q1, q2, q3, q4, q5, q6, q7, q8) =
            (q[0], q[1], q[2], q[3], q[4], q[5], q[6], q[7]);
        let eps = [
            (1.0 + 3.0 * q6 + 3.0 * q7 + 2.0 * q8) / 9.0,
            (2.0 + 6.0 * q1 - 3.0 * q6 - 3.0 * q7 - 2.0 * q8) / 12.0,
            (2.0 + 6.0 * q2 - 3.0 * q6 - 3.0 * q7 - 2.0 * q8) / 12.0,
            (2.0 + 6.0 * q3 - 3.0 * q6 - 3.0 * q7 - 2.0 * q8) / 12.0,
            (2.0 + 3.0 * q4 - 3.0 * q5 - 2.0 * q8) / 12.0,
            (2.0 - 3.0 * q4 + 3.0 * q5 - 2.0 * q8) / 12.0,
            (2.0 + 3.0 * q6 - 3.0 * q7 - 2.0 * q8) / 12.0,
            (2.0 - 3.0 * q6 + 3.0 * q7 - 2.0 * q8) / 12.0,
            (2.0 - 3.0 * q6 - 3.0 * q7 + 4.0 * q8) / 12.0,
        ];
        let basis = GeneratorBasis::new(3)?;
        let mut amplitudes = vec![(eps[0], ComplexMatrix::identity(3))];
        for k in 1..=8 {
            amplitudes.push((eps[k], basis.unnormalized(k)));
        }
        Self::new(kraus_from_amplitudes(&amplitudes)?)
    }

    /// Qutrit channel freezing `{lambda_k1, lambda_8}` and scaling the rest
    /// by `q`; `k1` in {1, 2, 3}, `q` in [-1/2, 1].
    pub fn gellmann_identity_pair(k1: usize, q: f64) -> Result<Self> {
        if !(1..=3).contains(&k1) {
            return Err(Error::ScalingConstraint {
                detail: format!("k1 = {k1} must lie in {{1, 2, 3}}"),
            });
        }
        if !(-0.5..=1.0).contains(&q) {
            return Err(Error::ParameterRange {
                name: "q",
                value: q,
                min: -0.5,
                max: 1.0,
            });
        }
        let basis = GeneratorBasis::new(3)?;
        let kraus = kraus_from_amplitudes(&[
            ((1.0 + 2.0 * q) / 3.0, ComplexMatrix::identity(3)),
            ((1.0 - q) / 2.0, basis.unnormalized(k1)),
            ((1.0 - q) / 2.0, basis.unnormalized(8)),
        ])?;
        Self::new(kraus)
    }

    /// Qutrit channel scaling a chosen triple by `q` and the remaining
    /// generators by `3q - 2`; `q` in [1/2, 1].
    ///
    /// Kraus amplitudes are the square roots of `2q - 1` and `1 - q`, the
    /// unique choice that is trace-preserving on this range and reproduces
    /// the stated adjoint factors.
    pub fn gellmann_triple(k1: usize, k2: usize, k3: usize, q: f64) -> Result<Self> {
        if !(1..=3).contains(&k1) || !(4..=5).contains(&k2) || !(6..=7).contains(&k3) {
            return Err(Error::ScalingConstraint {
                detail: format!(
                    "triple ({k1}, {k2}, {k3}) must satisfy k1 in {{1,2,3}}, k2 in {{4,5}}, k3 in {{6,7}}"
                ),
            });
        }
        if !(0.5..=1.0).contains(&q) {
            return Err(Error::ParameterRange {
                name: "q",
                value: q,
                min: 0.5,
                max: 1.0,
            });
        }
        let basis = GeneratorBasis::new(3)?;
        let kraus = kraus_from_amplitudes(&[
            (2.0 * q - 1.0, ComplexMatrix::identity(3)),
            (1.0 - q, basis.unnormalized(k1)),
            (1.0 - q, basis.unnormalized(k2)),
            (1.0 - q, basis.unnormalized(k3)),
        ])?;
        Self::new(kraus)
    }
}

// ---------------------------------------------------------------------------
// Scaling profile
// ---------------------------------------------------------------------------

/// Whether the adjoint scales a given generator, and by how much.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneratorScaling {
    Scaled(f64),
    NotScaled,
}

/// Generators (1-based labels) sharing one scaling factor.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorGroup {
    pub factor: f64,
    pub indices: Vec<usize>,
}

/// Expansion of the adjoint in the generator basis:
/// `S^dag(X_i) = trace_part[i] * I/sqrt(d) + sum_m mixing[(i, m)] X_m`.
#[derive(Debug, Clone)]
pub struct AdjointTransfer {
    pub trace_part: Vec<f64>,
    pub mixing: RealMatrix,
}

/// Per-generator record of `S^dag(G_k) = q_k G_k` checks, the grouped
/// index sets sharing a common factor, and the full adjoint transfer.
#[derive(Debug, Clone)]
pub struct ScalingProfile {
    dim: usize,
    entries: Vec<GeneratorScaling>,
    groups: Vec<FactorGroup>,
    transfer: AdjointTransfer,
}

impl ScalingProfile {
    fn from_parts(dim: usize, entries: Vec<GeneratorScaling>, transfer: AdjointTransfer) -> Self {
        let mut scaled: Vec<(usize, f64)> = entries
            .iter()
            .enumerate()
            .filter_map(|(i, e)| match e {
                GeneratorScaling::Scaled(q) => Some((i + 1, *q)),
                GeneratorScaling::NotScaled => None,
            })
            .collect();
        scaled.sort_by(|a, b| a.1.total_cmp(&b.1));
        let mut groups: Vec<FactorGroup> = Vec::new();
        for (index, factor) in scaled {
            match groups.last_mut() {
                Some(g) if (factor - g.factor).abs() <= GROUPING_TOL => {
                    // Running mean keeps the group factor centered.
                    let n = g.indices.len() as f64;
                    g.factor = (g.factor * n + factor) / (n + 1.0);
                    g.indices.push(index);
                }
                _ => groups.push(FactorGroup {
                    factor,
                    indices: vec![index],
                }),
            }
        }
        for g in &mut groups {
            g.indices.sort_unstable();
        }
        // Deterministic order: larger groups first, then by first index.
        groups.sort_by(|a, b| {
            b.indices
                .len()
                .cmp(&a.indices.len())
                .then(a.indices[0].cmp(&b.indices[0]))
        });
        Self {
            dim,
            entries,
            groups,
            transfer,
        }
    }

    /// Profile of the identity channel: every factor exactly one.
    pub fn identity(dim: usize) -> Self {
        let n = dim * dim - 1;
        Self::from_parts(
            dim,
            vec![GeneratorScaling::Scaled(1.0); n],
            AdjointTransfer {
                trace_part: vec![0.0; n],
                mixing: RealMatrix::identity(n),
            },
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[GeneratorScaling] {
        &self.entries
    }

    pub fn groups(&self) -> &[FactorGroup] {
        &self.groups
    }

    pub fn transfer(&self) -> &AdjointTransfer {
        &self.transfer
    }

    /// Factor of generator `k` (1-based), if scaled.
    pub fn factor(&self, k: usize) -> Option<f64> {
        match self.entries[k - 1] {
            GeneratorScaling::Scaled(q) => Some(q),
            GeneratorScaling::NotScaled => None,
        }
    }

    /// All generators scaled and sharing a single factor.
    pub fn is_fully_scaled(&self) -> bool {
        self.groups.len() == 1
            && self.groups[0].indices.len() == self.entries.len()
    }

    pub fn common_factor(&self) -> Option<f64> {
        if self.is_fully_scaled() {
            Some(self.groups[0].factor)
        } else {
            None
        }
    }

    /// The channel acts as the identity on states.
    pub fn is_identity(&self) -> bool {
        self.common_factor()
            .is_some_and(|q| (q - 1.0).abs() <= SCALING_TOL)
    }

    /// `S^dag(X_i)` carries no identity component for any generator;
    /// equivalent to the channel being unital.
    pub fn is_unital(&self, tol: f64) -> bool {
        self.transfer.trace_part.iter().all(|a| a.abs() <= tol)
    }

    /// Generators outside `k_set` neither regenerate the identity nor leak
    /// into `k_set` under the adjoint. Together with the definition of the
    /// group this makes the span of {I, X_k : k in k_set} and its
    /// complement invariant, so zero patterns outside the group survive
    /// the channel. `k_set` carries 1-based labels.
    pub fn closure_ok(&self, k_set: &[usize], tol: f64) -> bool {
        let n = self.entries.len();
        (1..=n).filter(|k| !k_set.contains(k)).all(|i| {
            self.transfer.trace_part[i - 1].abs() <= tol
                && k_set
                    .iter()
                    .all(|&k| self.transfer.mixing[(i - 1, k - 1)].abs() <= tol)
        })
    }
}

// ---------------------------------------------------------------------------
// Local product channels
// ---------------------------------------------------------------------------

/// A pair of single-subsystem channels acting as `S_1 ox S_2`; either side
/// may be the identity channel.
#[derive(Debug, Clone)]
pub struct LocalChannel {
    side_a: KrausChannel,
    side_b: KrausChannel,
}

impl LocalChannel {
    pub fn tensor(side_a: KrausChannel, side_b: KrausChannel) -> Self {
        Self { side_a, side_b }
    }

    /// Channel on one side, identity of dimension `other_dim` on the other.
    pub fn one_sided(ch: KrausChannel, side: Side, other_dim: usize) -> Self {
        match side {
            Side::A => Self {
                side_a: ch,
                side_b: KrausChannel::identity(other_dim),
            },
            Side::B => Self {
                side_a: KrausChannel::identity(other_dim),
                side_b: ch,
            },
        }
    }

    pub fn side_a(&self) -> &KrausChannel {
        &self.side_a
    }

    pub fn side_b(&self) -> &KrausChannel {
        &self.side_b
    }

    /// Evolve a state: `sum_{mu nu} (E_mu ox E_nu) rho (E_mu ox E_nu)^dag`.
    /// The output is validated as a density matrix.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.d_a() != self.side_a.dim() || rho.d_b() != self.side_b.dim() {
            return Err(Error::DimensionMismatch {
                context: "local channel vs state split",
                expected: self.side_a.dim() * self.side_b.dim(),
                got: rho.dim(),
            });
        }
        let n = rho.dim();
        let mut out = ComplexMatrix::zeros(n, n);
        for ea in &self.side_a.kraus {
            for eb in &self.side_b.kraus {
                let e = ea.kron(eb);
                out = out.add(&e.mul(rho.matrix()).mul(&e.adjoint()));
            }
        }
        DensityMatrix::new(out, rho.d_a(), rho.d_b())
    }
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

/// JSON shape: `{"dim": d, "kraus": [matrix, ...]}` where a matrix is a
/// nested row-major array of `[re, im]` pairs.
#[derive(Serialize, Deserialize)]
struct ChannelFile {
    dim: usize,
    kraus: Vec<Vec<Vec<[f64; 2]>>>,
}

impl KrausChannel {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: ChannelFile = serde_json::from_str(text)?;
        let mut kraus = Vec::with_capacity(file.kraus.len());
        for raw in &file.kraus {
            if raw.len() != file.dim || raw.iter().any(|row| row.len() != file.dim) {
                return Err(Error::InvalidFile(format!(
                    "Kraus matrix is not {0}x{0}",
                    file.dim
                )));
            }
            kraus.push(ComplexMatrix::from_fn(file.dim, file.dim, |i, j| {
                Complex64::new(raw[i][j][0], raw[i][j][1])
            }));
        }
        Self::new(kraus)
    }

    pub fn to_json_string(&self) -> String {
        let kraus = self
            .kraus
            .iter()
            .map(|e| {
                (0..self.dim)
                    .map(|i| {
                        (0..self.dim)
                            .map(|j| [e[(i, j)].re, e[(i, j)].im])
                            .collect()
                    })
                    .collect()
            })
            .collect();
        serde_json::to_string_pretty(&ChannelFile {
            dim: self.dim,
            kraus,
        })
        .expect("channel file serializes")
    }
}
