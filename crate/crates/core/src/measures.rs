//! Correlation quantities: the general Schatten p-norm disturbance engine,
//! its symmetric (two-sided) variant, the Hellinger variant on sqrt(rho),
//! the two-qubit closed forms, and the teleportation / remote state
//! preparation / CHSH figures of merit.
//!
//! All one-sided quantities report `opt || sigma - Pi(sigma) ||_p^p`, the
//! p-th power, so a channel that scales the relevant Bloch data by `q`
//! scales the measure by `|q|^p`.

use std::fmt;
use std::str::FromStr;

use crate::bloch::{self, BlochForm};
use crate::error::{Error, Result};
use crate::linalg::{self, PNorm, Side};
use crate::measurements::{
    self, locally_invariant_family, optimize_family, optimize_pair, Direction, MeasurementFamily,
    OptimizeOutcome, OptimizerSettings, ProjectiveMeasurement,
};
use crate::state::DensityMatrix;

/// Agreement required between a closed form and the optimizer when both
/// routes exist.
pub const CROSS_CHECK_TOL: f64 = 1e-5;
/// Values in [-1e-10, 0) clamp to zero; anything lower is an internal
/// error.
pub const NEGATIVE_CLAMP: f64 = -1e-10;
/// Eigenvalue-gap tolerance when deriving the locally invariant family.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Correlation measure selector, addressable from the CLI by the strings
/// in its `Display`/`FromStr` impls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasureKind {
    GqdP1,
    GqdP2,
    MinP1,
    MinP2,
    HellingerP2,
    SymP1,
    SymP2,
    Nqt,
    Fqt,
    Frsp,
    Bmax,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 11] = [
        MeasureKind::GqdP1,
        MeasureKind::GqdP2,
        MeasureKind::MinP1,
        MeasureKind::MinP2,
        MeasureKind::HellingerP2,
        MeasureKind::SymP1,
        MeasureKind::SymP2,
        MeasureKind::Nqt,
        MeasureKind::Fqt,
        MeasureKind::Frsp,
        MeasureKind::Bmax,
    ];

    /// Schatten exponent for the disturbance-based kinds.
    pub fn p(self) -> Option<PNorm> {
        match self {
            MeasureKind::GqdP1 | MeasureKind::MinP1 | MeasureKind::SymP1 => Some(PNorm::One),
            MeasureKind::GqdP2
            | MeasureKind::MinP2
            | MeasureKind::HellingerP2
            | MeasureKind::SymP2 => Some(PNorm::Two),
            _ => None,
        }
    }

    /// Figure-of-merit kinds are functions of the correlation tensor only.
    pub fn is_figure_of_merit(self) -> bool {
        matches!(
            self,
            MeasureKind::Nqt | MeasureKind::Fqt | MeasureKind::Frsp | MeasureKind::Bmax
        )
    }

    pub fn is_two_sided(self) -> bool {
        matches!(self, MeasureKind::SymP1 | MeasureKind::SymP2)
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MeasureKind::GqdP1 => "gqd-p1",
            MeasureKind::GqdP2 => "gqd-p2",
            MeasureKind::MinP1 => "min-p1",
            MeasureKind::MinP2 => "min-p2",
            MeasureKind::HellingerP2 => "hellinger-p2",
            MeasureKind::SymP1 => "sym-p1",
            MeasureKind::SymP2 => "sym-p2",
            MeasureKind::Nqt => "nqt",
            MeasureKind::Fqt => "fqt",
            MeasureKind::Frsp => "frsp",
            MeasureKind::Bmax => "bmax",
        };
        f.write_str(s)
    }
}

impl FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MeasureKind::ALL
            .iter()
            .copied()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| Error::InvalidFile(format!("unknown measure kind '{s}'")))
    }
}

/// How to evaluate a measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    Optimize,
    ClosedForm,
    /// Closed form where one exists (cross-checked against the optimizer),
    /// optimizer otherwise.
    #[default]
    Auto,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "optimize" => Ok(Method::Optimize),
            "closed-form" => Ok(Method::ClosedForm),
            "auto" => Ok(Method::Auto),
            _ => Err(Error::InvalidFile(format!("unknown method '{s}'"))),
        }
    }
}

/// Full measure request: what to compute, on which side, and how.
#[derive(Debug, Clone, Copy)]
pub struct MeasureSpec {
    pub kind: MeasureKind,
    pub side: Side,
    pub method: Method,
}

impl MeasureSpec {
    pub fn new(kind: MeasureKind) -> Self {
        Self {
            kind,
            side: Side::A,
            method: Method::Auto,
        }
    }

    pub fn with_side(mut self, side: Side) -> Self {
        self.side = side;
        self
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }
}

/// Which route produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodUsed {
    Optimized,
    ClosedForm,
    ClosedFormCrossChecked,
}

impl fmt::Display for MethodUsed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MethodUsed::Optimized => f.write_str("optimize"),
            MethodUsed::ClosedForm => f.write_str("closed-form"),
            MethodUsed::ClosedFormCrossChecked => f.write_str("closed-form (cross-checked)"),
        }
    }
}

/// Optimizer diagnostics attached to optimizer-backed results.
#[derive(Debug, Clone)]
pub struct OptimizerDiagnostics {
    pub evaluations: usize,
    pub iterations: usize,
    pub cap_hit: bool,
    pub best_params: Vec<f64>,
    /// Optimizer value when the reported value came from a closed form.
    pub optimizer_value: Option<f64>,
}

/// A computed measure value.
#[derive(Debug, Clone)]
pub struct MeasureResult {
    pub value: f64,
    pub method: MethodUsed,
    pub diagnostics: Option<OptimizerDiagnostics>,
}

fn clamp_value(value: f64, what: &str) -> Result<f64> {
    if value < NEGATIVE_CLAMP {
        return Err(Error::InternalConsistency {
            detail: format!("{what} evaluated to {value:.3e} < {NEGATIVE_CLAMP:.0e}"),
        });
    }
    Ok(value.max(0.0))
}

fn check_dims(rho: &DensityMatrix) -> Result<()> {
    for d in [rho.d_a(), rho.d_b()] {
        if !(2..=3).contains(&d) {
            return Err(Error::UnsupportedDimension {
                dim: d,
                context: "measures support local dimensions 2 and 3",
            });
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

/// 2-norm geometric discord of a two-qubit state, in unnormalized Pauli
/// coordinates: `(||x||^2 + ||T||_2^2 - k_max(x x^t + T T^t)) / 4`.
pub fn d2_closed_two_qubit(rho: &DensityMatrix) -> Result<f64> {
    let b = bloch::decompose(rho);
    closed_gqd2_side(&b, Side::A)
}

pub(crate) fn closed_gqd2_side(b: &BlochForm, side: Side) -> Result<f64> {
    if b.d_a != 2 || b.d_b != 2 {
        return Err(Error::ClosedFormUnavailable {
            kind: "gqd-p2",
            d_a: b.d_a,
            d_b: b.d_b,
        });
    }
    let (x_s, y_s, t_s) = b.to_conventional()?;
    let (v, t) = match side {
        Side::A => (x_s, t_s),
        Side::B => (y_s, t_s.transpose()),
    };
    let v_sq: f64 = v.iter().map(|a| a * a).sum();
    let t_sq = t.frobenius_norm().powi(2);
    let mut k = t.mul(&t.transpose());
    for i in 0..3 {
        for j in 0..3 {
            k[(i, j)] += v[i] * v[j];
        }
    }
    let k_max = *k
        .eig_symmetric()?
        .last()
        .expect("3x3 spectrum is nonempty");
    clamp_value(0.25 * (v_sq + t_sq - k_max), "closed-form gqd-p2")
}

/// 2-norm measurement-induced nonlocality for a `2 x n` state (measured
/// side must be a qubit). When the marginal Bloch vector vanishes the
/// optimal axis is free and the smallest eigenvalue drops out instead.
pub fn min2_closed_2xn(rho: &DensityMatrix) -> Result<f64> {
    let b = bloch::decompose(rho);
    closed_min2_side(&b, Side::A)
}

pub(crate) fn closed_min2_side(b: &BlochForm, side: Side) -> Result<f64> {
    let measured_dim = match side {
        Side::A => b.d_a,
        Side::B => b.d_b,
    };
    if measured_dim != 2 {
        return Err(Error::ClosedFormUnavailable {
            kind: "min-p2",
            d_a: b.d_a,
            d_b: b.d_b,
        });
    }
    let (x_s, y_s, t_s) = b.unnormalized_coords();
    let (v, t) = match side {
        Side::A => (x_s, t_s),
        Side::B => (y_s, t_s.transpose()),
    };
    let m = t.mul(&t.transpose());
    let trace_m = (0..m.rows()).map(|i| m[(i, i)]).sum::<f64>();
    let v_norm_sq: f64 = v.iter().map(|a| a * a).sum();
    let value = if v_norm_sq.sqrt() > 1e-10 {
        let mv = m.mul_vec(&v);
        let quad: f64 = v.iter().zip(&mv).map(|(a, b)| a * b).sum();
        0.25 * (trace_m - quad / v_norm_sq)
    } else {
        let lambda_min = m.eig_symmetric()?[0];
        0.25 * (trace_m - lambda_min)
    };
    clamp_value(value, "closed-form min-p2")
}

/// Teleportation, remote-state-preparation, and CHSH figures of merit of a
/// two-qubit state, all functions of `T_sigma^t T_sigma` alone.
#[derive(Debug, Clone, Copy)]
pub struct FiguresOfMerit {
    /// `tr sqrt(T^t T)`.
    pub n_qt: f64,
    /// Average teleportation fidelity `1/2 + n_qt/6`.
    pub f_qt: f64,
    /// Remote-state-preparation fidelity `(E_2 + E_3)/2`.
    pub f_rsp: f64,
    /// Maximum CHSH value `2 sqrt(E_1 + E_2)`.
    pub b_max: f64,
}

impl FiguresOfMerit {
    pub fn get(&self, kind: MeasureKind) -> Result<f64> {
        match kind {
            MeasureKind::Nqt => Ok(self.n_qt),
            MeasureKind::Fqt => Ok(self.f_qt),
            MeasureKind::Frsp => Ok(self.f_rsp),
            MeasureKind::Bmax => Ok(self.b_max),
            _ => Err(Error::InternalConsistency {
                detail: format!("{kind} is not a figure of merit"),
            }),
        }
    }
}

pub fn figures_of_merit(rho: &DensityMatrix) -> Result<FiguresOfMerit> {
    let b = bloch::decompose(rho);
    figures_of_merit_from_bloch(&b)
}

pub(crate) fn figures_of_merit_from_bloch(b: &BlochForm) -> Result<FiguresOfMerit> {
    if b.d_a != 2 || b.d_b != 2 {
        return Err(Error::ClosedFormUnavailable {
            kind: "figures of merit",
            d_a: b.d_a,
            d_b: b.d_b,
        });
    }
    let (_, _, t_s) = b.to_conventional()?;
    let gram = t_s.transpose().mul(&t_s);
    let eigs = gram.eig_symmetric()?; // ascending: E3 <= E2 <= E1
    // Zero out eigenvalue noise of rank-deficient tensors; the square
    // root would amplify it from O(eps) to O(sqrt(eps)).
    let floor = 1e-14 * gram.frobenius_norm().max(1.0);
    let clamp = |e: f64| if e <= floor { 0.0 } else { e };
    let (e3, e2, e1) = (clamp(eigs[0]), clamp(eigs[1]), clamp(eigs[2]));
    let n_qt = e1.sqrt() + e2.sqrt() + e3.sqrt();
    Ok(FiguresOfMerit {
        n_qt,
        f_qt: 0.5 + n_qt / 6.0,
        f_rsp: 0.5 * (e2 + e3),
        b_max: 2.0 * (e1 + e2).sqrt(),
    })
}

// ---------------------------------------------------------------------------
// Optimizer-backed evaluation
// ---------------------------------------------------------------------------

fn optimizer_value(
    rho: &DensityMatrix,
    kind: MeasureKind,
    side: Side,
    settings: &OptimizerSettings,
    seed: u64,
) -> Result<OptimizeOutcome> {
    let p = kind.p().ok_or(Error::InternalConsistency {
        detail: format!("{kind} has no optimizer route"),
    })?;
    let (d_a, d_b) = (rho.d_a(), rho.d_b());

    if kind.is_two_sided() {
        let family_a = MeasurementFamily::AllProjective { dim: d_a };
        let family_b = MeasurementFamily::AllProjective { dim: d_b };
        let target = rho.matrix().clone();
        let objective = move |ma: &ProjectiveMeasurement, mb: &ProjectiveMeasurement| {
            let once = measurements::project_matrix(&target, d_a, d_b, ma, Side::A);
            let twice = measurements::project_matrix(&once, d_a, d_b, mb, Side::B);
            linalg::schatten_power(&target.sub(&twice), p)
        };
        return optimize_pair(&family_a, &family_b, objective, settings, seed);
    }

    let target = match kind {
        MeasureKind::HellingerP2 => linalg::matrix_sqrt_psd(rho.matrix())?,
        _ => rho.matrix().clone(),
    };
    let (family, direction) = match kind {
        MeasureKind::MinP1 | MeasureKind::MinP2 => (
            locally_invariant_family(&rho.reduced(side), DEGENERACY_TOL)?,
            Direction::Maximize,
        ),
        _ => (
            MeasurementFamily::AllProjective {
                dim: rho.side_dim(side),
            },
            Direction::Minimize,
        ),
    };
    let objective = move |m: &ProjectiveMeasurement| {
        let projected = measurements::project_matrix(&target, d_a, d_b, m, side);
        linalg::schatten_power(&target.sub(&projected), p)
    };
    let settings = settings.clone().with_direction(direction);
    optimize_family(&family, objective, &settings, seed)
}

fn closed_value(rho: &DensityMatrix, kind: MeasureKind, side: Side) -> Option<Result<f64>> {
    let b = bloch::decompose(rho);
    match kind {
        MeasureKind::GqdP2 if rho.d_a() == 2 && rho.d_b() == 2 => {
            Some(closed_gqd2_side(&b, side))
        }
        MeasureKind::MinP2 if rho.side_dim(side) == 2 => Some(closed_min2_side(&b, side)),
        MeasureKind::Nqt | MeasureKind::Fqt | MeasureKind::Frsp | MeasureKind::Bmax => {
            Some(figures_of_merit_from_bloch(&b).and_then(|f| f.get(kind)))
        }
        _ => None,
    }
}

/// Evaluate a correlation measure on a state.
///
/// With `Method::Auto` a closed form is used wherever one exists and is
/// cross-checked against the optimizer; disagreement beyond
/// [`CROSS_CHECK_TOL`] is an internal-consistency error.
pub fn geometric_measure(
    rho: &DensityMatrix,
    spec: &MeasureSpec,
    settings: &OptimizerSettings,
    seed: u64,
) -> Result<MeasureResult> {
    check_dims(rho)?;
    let closed = closed_value(rho, spec.kind, spec.side).transpose()?;

    if spec.kind.is_figure_of_merit() {
        // No optimization is defined for the figures of merit.
        return match spec.method {
            Method::Optimize => Err(Error::ClosedFormUnavailable {
                kind: "optimizer route",
                d_a: rho.d_a(),
                d_b: rho.d_b(),
            }),
            _ => Ok(MeasureResult {
                value: closed.expect("figure-of-merit closed form exists on validated dims"),
                method: MethodUsed::ClosedForm,
                diagnostics: None,
            }),
        };
    }

    match (spec.method, closed) {
        (Method::ClosedForm, Some(value)) => Ok(MeasureResult {
            value,
            method: MethodUsed::ClosedForm,
            diagnostics: None,
        }),
        (Method::ClosedForm, None) => Err(Error::ClosedFormUnavailable {
            kind: match spec.kind {
                MeasureKind::GqdP2 => "gqd-p2",
                MeasureKind::MinP2 => "min-p2",
                _ => "this measure",
            },
            d_a: rho.d_a(),
            d_b: rho.d_b(),
        }),
        (Method::Optimize, _) | (Method::Auto, None) => {
            let outcome = optimizer_value(rho, spec.kind, spec.side, settings, seed)?;
            let value = clamp_value(outcome.value, "optimized measure")?;
            Ok(MeasureResult {
                value,
                method: MethodUsed::Optimized,
                diagnostics: Some(OptimizerDiagnostics {
                    evaluations: outcome.evaluations,
                    iterations: outcome.iterations,
                    cap_hit: outcome.cap_hit,
                    best_params: outcome.params,
                    optimizer_value: None,
                }),
            })
        }
        (Method::Auto, Some(value)) => {
            let outcome = optimizer_value(rho, spec.kind, spec.side, settings, seed)?;
            let opt = clamp_value(outcome.value, "optimized measure")?;
            if (value - opt).abs() > CROSS_CHECK_TOL {
                return Err(Error::InternalConsistency {
                    detail: format!(
                        "closed form {value:.9e} and optimizer {opt:.9e} disagree for {} beyond {CROSS_CHECK_TOL:.0e}",
                        spec.kind
                    ),
                });
            }
            Ok(MeasureResult {
                value,
                method: MethodUsed::ClosedFormCrossChecked,
                diagnostics: Some(OptimizerDiagnostics {
                    evaluations: outcome.evaluations,
                    iterations: outcome.iterations,
                    cap_hit: outcome.cap_hit,
                    best_params: outcome.params,
                    optimizer_value: Some(opt),
                }),
            })
        }
    }
}

/// Two-sided (symmetric) geometric measure.
pub fn symmetric_measure(
    rho: &DensityMatrix,
    p: PNorm,
    settings: &OptimizerSettings,
    seed: u64,
) -> Result<MeasureResult> {
    let kind = match p {
        PNorm::One => MeasureKind::SymP1,
        PNorm::Two => MeasureKind::SymP2,
    };
    geometric_measure(rho, &MeasureSpec::new(kind), settings, seed)
}
