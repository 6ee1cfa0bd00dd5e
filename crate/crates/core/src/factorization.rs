//! Classification of (state, channel) pairs into the families for which
//! the geometric correlation measures obey a factorization decay law, the
//! predicted decay factors, and numerical verification of the law.
//!
//! The decision logic works on two inputs: the state's Bloch support
//! pattern and the channel's scaling profile. A family match additionally
//! requires the channel-side closure conditions (see
//! [`ScalingProfile::closure_ok`]): components the family forces to zero
//! must stay zero under the adjoint transfer, which for non-unital
//! channels is strictly stronger than membership of the support pattern
//! alone. Every match therefore comes with the guarantee that the scaled
//! Bloch data transforms exactly, so verification can only fail by
//! numerical noise.

use crate::bloch::{self, BlochForm};
use crate::channels::{self, LocalChannel, ScalingProfile};
use crate::error::{Error, Result};
use crate::linalg::Side;
use crate::measures::{self, geometric_measure, MeasureKind, MeasureSpec};
use crate::measurements::OptimizerSettings;
use crate::state::DensityMatrix;

/// Default tolerance for the state-side support conditions.
pub const SUPPORT_TOL: f64 = 1e-9;

/// Which factorization statement to classify against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    /// Full scaling on every generator, one-sided measures.
    T1,
    /// Partial scaling (factor groups), one-sided measures.
    T2,
    /// Full scaling, symmetric (two-sided) measures.
    T3,
    /// Partial scaling, symmetric measures.
    T4,
    /// Correlation-tensor-only scaling for the figures of merit.
    Eq12,
}

impl std::fmt::Display for Theorem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Theorem::T1 => f.write_str("t1"),
            Theorem::T2 => f.write_str("t2"),
            Theorem::T3 => f.write_str("t3"),
            Theorem::T4 => f.write_str("t4"),
            Theorem::Eq12 => f.write_str("eq12"),
        }
    }
}

impl std::str::FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "t1" => Ok(Theorem::T1),
            "t2" => Ok(Theorem::T2),
            "t3" => Ok(Theorem::T3),
            "t4" => Ok(Theorem::T4),
            "eq12" => Ok(Theorem::Eq12),
            _ => Err(Error::InvalidFile(format!("unknown theorem selector '{s}'"))),
        }
    }
}

/// Which family within a theorem matched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyMatch {
    Family(u8),
    /// The additional equal-factor two-sided family stated after the
    /// symmetric-measure theorems.
    ExtraSameChannel,
}

/// Outcome of a family classification.
#[derive(Debug, Clone)]
pub struct FamilyClassification {
    pub theorem: Theorem,
    pub member: bool,
    pub matched: Option<FamilyMatch>,
    /// Common factors of the matched groups (1.0 on an identity side).
    pub q_a: Option<f64>,
    pub q_b: Option<f64>,
    /// Effective factor multiplying the surviving Bloch data.
    pub factor: Option<f64>,
    pub group_k: Option<Vec<usize>>,
    pub group_l: Option<Vec<usize>>,
    /// Violated condition when not a member.
    pub witness: Option<String>,
}

impl FamilyClassification {
    fn non_member(theorem: Theorem, witness: String) -> Self {
        Self {
            theorem,
            member: false,
            matched: None,
            q_a: None,
            q_b: None,
            factor: None,
            group_k: None,
            group_l: None,
            witness: Some(witness),
        }
    }
}

struct Pattern {
    x_supp: Vec<usize>,
    y_supp: Vec<usize>,
    t_rows: Vec<usize>,
    t_cols: Vec<usize>,
    x_zero: bool,
    y_zero: bool,
    t_zero: bool,
}

fn pattern(b: &BlochForm, tol: f64) -> Pattern {
    let sp = bloch::support_pattern(b, tol);
    Pattern {
        x_zero: sp.x_support.is_empty(),
        y_zero: sp.y_support.is_empty(),
        t_zero: sp.t_row_support.is_empty(),
        x_supp: sp.x_support,
        y_supp: sp.y_support,
        t_rows: sp.t_row_support,
        t_cols: sp.t_col_support,
    }
}

fn subset(sub: &[usize], sup: &[usize]) -> bool {
    sub.iter().all(|i| sup.contains(i))
}

fn fmt_set(s: &[usize]) -> String {
    let inner: Vec<String> = s.iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

/// Classify a state's Bloch form against the families of the selected
/// theorem, given the scaling profiles of the two channel sides (use
/// [`ScalingProfile::identity`] for an untouched side). `tol` bounds the
/// state-side support conditions; channel-structure conditions use the
/// profile's own tolerances.
pub fn classify(
    b: &BlochForm,
    prof_a: &ScalingProfile,
    prof_b: &ScalingProfile,
    theorem: Theorem,
    tol: f64,
) -> Result<FamilyClassification> {
    if prof_a.dim() != b.d_a || prof_b.dim() != b.d_b {
        return Err(Error::ProfileMismatch {
            detail: format!(
                "profiles are for dims ({}, {}), state is {}x{}",
                prof_a.dim(),
                prof_b.dim(),
                b.d_a,
                b.d_b
            ),
        });
    }
    let pat = pattern(b, tol);
    let ctol = channels::SCALING_TOL;
    let a_id = prof_a.is_identity();
    let b_id = prof_b.is_identity();

    let found = |matched: FamilyMatch,
                 q_a: Option<f64>,
                 q_b: Option<f64>,
                 factor: f64,
                 group_k: Option<Vec<usize>>,
                 group_l: Option<Vec<usize>>| FamilyClassification {
        theorem,
        member: true,
        matched: Some(matched),
        q_a,
        q_b,
        factor: Some(factor),
        group_k,
        group_l,
        witness: None,
    };

    match theorem {
        Theorem::T1 | Theorem::T3 => {
            let q_a = prof_a.common_factor().ok_or_else(|| Error::ProfileMismatch {
                detail: "side-a channel does not scale every generator by one factor".into(),
            })?;
            let q_b = prof_b.common_factor().ok_or_else(|| Error::ProfileMismatch {
                detail: "side-b channel does not scale every generator by one factor".into(),
            })?;
            if theorem == Theorem::T1 {
                if b_id {
                    return Ok(found(FamilyMatch::Family(1), Some(q_a), Some(1.0), q_a, None, None));
                }
                if pat.x_zero {
                    return Ok(found(
                        FamilyMatch::Family(2),
                        Some(q_a),
                        Some(q_b),
                        q_a * q_b,
                        None,
                        None,
                    ));
                }
                if pat.t_zero {
                    return Ok(found(FamilyMatch::Family(2), Some(q_a), Some(q_b), q_a, None, None));
                }
                return Ok(FamilyClassification::non_member(
                    theorem,
                    "two-sided channel requires rho_a = I/d_a or rho_c = 0".into(),
                ));
            }
            // T3 families for the symmetric measure.
            if b_id {
                if pat.y_zero {
                    return Ok(found(FamilyMatch::Family(1), Some(q_a), Some(1.0), q_a, None, None));
                }
                if pat.x_zero && pat.t_zero {
                    return Ok(found(FamilyMatch::Family(1), Some(q_a), Some(1.0), 1.0, None, None));
                }
                return Ok(FamilyClassification::non_member(
                    theorem,
                    "one-sided channel on a requires rho_b = I/d_b, or rho_a = I/d_a with rho_c = 0"
                        .into(),
                ));
            }
            if a_id {
                if pat.x_zero {
                    return Ok(found(FamilyMatch::Family(2), Some(1.0), Some(q_b), q_b, None, None));
                }
                if pat.y_zero && pat.t_zero {
                    return Ok(found(FamilyMatch::Family(2), Some(1.0), Some(q_b), 1.0, None, None));
                }
                return Ok(FamilyClassification::non_member(
                    theorem,
                    "one-sided channel on b requires rho_a = I/d_a, or rho_b = I/d_b with rho_c = 0"
                        .into(),
                ));
            }
            if pat.x_zero && pat.y_zero {
                return Ok(found(
                    FamilyMatch::Family(3),
                    Some(q_a),
                    Some(q_b),
                    q_a * q_b,
                    None,
                    None,
                ));
            }
            if pat.x_zero && pat.t_zero {
                return Ok(found(FamilyMatch::Family(3), Some(q_a), Some(q_b), q_b, None, None));
            }
            if pat.y_zero && pat.t_zero {
                return Ok(found(FamilyMatch::Family(3), Some(q_a), Some(q_b), q_a, None, None));
            }
            if (q_a - q_b).abs() <= channels::GROUPING_TOL && pat.t_zero {
                return Ok(found(
                    FamilyMatch::ExtraSameChannel,
                    Some(q_a),
                    Some(q_b),
                    q_a,
                    None,
                    None,
                ));
            }
            Ok(FamilyClassification::non_member(
                theorem,
                "no marginal/correlation zero pattern matches the two-sided families".into(),
            ))
        }

        Theorem::T2 => {
            if b_id {
                for g in prof_a.groups() {
                    if subset(&pat.x_supp, &g.indices)
                        && subset(&pat.t_rows, &g.indices)
                        && prof_a.closure_ok(&g.indices, ctol)
                    {
                        return Ok(found(
                            FamilyMatch::Family(1),
                            Some(g.factor),
                            Some(1.0),
                            g.factor,
                            Some(g.indices.clone()),
                            None,
                        ));
                    }
                }
                return Ok(FamilyClassification::non_member(
                    theorem,
                    format!(
                        "x support {} and T row support {} fit no closed common-factor group on side a",
                        fmt_set(&pat.x_supp),
                        fmt_set(&pat.t_rows)
                    ),
                ));
            }
            if a_id {
                if pat.x_zero {
                    for g in prof_b.groups() {
                        if subset(&pat.t_cols, &g.indices) && prof_b.closure_ok(&g.indices, ctol) {
                            return Ok(found(
                                FamilyMatch::Family(2),
                                Some(1.0),
                                Some(g.factor),
                                g.factor,
                                None,
                                Some(g.indices.clone()),
                            ));
                        }
                    }
                }
                if pat.t_zero && prof_b.is_unital(ctol) {
                    return Ok(found(FamilyMatch::Family(2), Some(1.0), None, 1.0, None, None));
                }
                return Ok(FamilyClassification::non_member(
                    theorem,
                    format!(
                        "requires rho_a = I/d_a with T column support {} in a closed group, or rho_c = 0 under a unital channel",
                        fmt_set(&pat.t_cols)
                    ),
                ));
            }
            if pat.x_zero {
                for ga in prof_a.groups() {
                    if !subset(&pat.t_rows, &ga.indices) || !prof_a.closure_ok(&ga.indices, ctol) {
                        continue;
                    }
                    for gb in prof_b.groups() {
                        if subset(&pat.t_cols, &gb.indices) && prof_b.closure_ok(&gb.indices, ctol)
                        {
                            return Ok(found(
                                FamilyMatch::Family(3),
                                Some(ga.factor),
                                Some(gb.factor),
                                ga.factor * gb.factor,
                                Some(ga.indices.clone()),
                                Some(gb.indices.clone()),
                            ));
                        }
                    }
                }
            }
            if pat.t_zero && prof_b.is_unital(ctol) {
                for ga in prof_a.groups() {
                    if subset(&pat.x_supp, &ga.indices) && prof_a.closure_ok(&ga.indices, ctol) {
                        return Ok(found(
                            FamilyMatch::Family(3),
                            Some(ga.factor),
                            None,
                            ga.factor,
                            Some(ga.indices.clone()),
                            None,
                        ));
                    }
                }
            }
            Ok(FamilyClassification::non_member(
                theorem,
                "no (K, L) group pair matches the two-sided partial-scaling families".into(),
            ))
        }

        Theorem::T4 => {
            if b_id {
                for g in prof_a.groups() {
                    if subset(&pat.x_supp, &g.indices)
                        && pat.y_zero
                        && subset(&pat.t_rows, &g.indices)
                        && prof_a.closure_ok(&g.indices, ctol)
                    {
                        return Ok(found(
                            FamilyMatch::Family(1),
                            Some(g.factor),
                            Some(1.0),
                            g.factor,
                            Some(g.indices.clone()),
                            None,
                        ));
                    }
                }
                if pat.x_zero && pat.t_zero && prof_a.is_unital(ctol) {
                    return Ok(found(FamilyMatch::Family(1), None, Some(1.0), 1.0, None, None));
                }
                return Ok(FamilyClassification::non_member(
                    theorem,
                    "requires x and T rows inside one closed group with rho_b = I/d_b, or rho_a = I/d_a with rho_c = 0".into(),
                ));
            }
            if a_id {
                for g in prof_b.groups() {
                    if pat.x_zero
                        && subset(&pat.y_supp, &g.indices)
                        && subset(&pat.t_cols, &g.indices)
                        && prof_b.closure_ok(&g.indices, ctol)
                    {
                        return Ok(found(
                            FamilyMatch::Family(2),
                            Some(1.0),
                            Some(g.factor),
                            g.factor,
                            None,
                            Some(g.indices.clone()),
                        ));
                    }
                }
                if pat.y_zero && pat.t_zero && prof_b.is_unital(ctol) {
                    return Ok(found(FamilyMatch::Family(2), Some(1.0), None, 1.0, None, None));
                }
                return Ok(FamilyClassification::non_member(
                    theorem,
                    "requires y and T columns inside one closed group with rho_a = I/d_a, or rho_b = I/d_b with rho_c = 0".into(),
                ));
            }
            if pat.x_zero && pat.y_zero {
                for ga in prof_a.groups() {
                    if !subset(&pat.t_rows, &ga.indices) || !prof_a.closure_ok(&ga.indices, ctol) {
                        continue;
                    }
                    for gb in prof_b.groups() {
                        if subset(&pat.t_cols, &gb.indices) && prof_b.closure_ok(&gb.indices, ctol)
                        {
                            return Ok(found(
                                FamilyMatch::Family(3),
                                Some(ga.factor),
                                Some(gb.factor),
                                ga.factor * gb.factor,
                                Some(ga.indices.clone()),
                                Some(gb.indices.clone()),
                            ));
                        }
                    }
                }
            }
            if pat.t_zero {
                if pat.y_zero && prof_b.is_unital(ctol) {
                    for ga in prof_a.groups() {
                        if subset(&pat.x_supp, &ga.indices) && prof_a.closure_ok(&ga.indices, ctol)
                        {
                            return Ok(found(
                                FamilyMatch::Family(3),
                                Some(ga.factor),
                                None,
                                ga.factor,
                                Some(ga.indices.clone()),
                                None,
                            ));
                        }
                    }
                }
                if pat.x_zero && prof_a.is_unital(ctol) {
                    for gb in prof_b.groups() {
                        if subset(&pat.y_supp, &gb.indices) && prof_b.closure_ok(&gb.indices, ctol)
                        {
                            return Ok(found(
                                FamilyMatch::Family(3),
                                None,
                                Some(gb.factor),
                                gb.factor,
                                None,
                                Some(gb.indices.clone()),
                            ));
                        }
                    }
                }
                // Equal-factor extra family: x and y free inside groups
                // sharing one factor.
                for ga in prof_a.groups() {
                    if !subset(&pat.x_supp, &ga.indices) || !prof_a.closure_ok(&ga.indices, ctol) {
                        continue;
                    }
                    for gb in prof_b.groups() {
                        if (ga.factor - gb.factor).abs() <= channels::GROUPING_TOL
                            && subset(&pat.y_supp, &gb.indices)
                            && prof_b.closure_ok(&gb.indices, ctol)
                        {
                            return Ok(found(
                                FamilyMatch::ExtraSameChannel,
                                Some(ga.factor),
                                Some(gb.factor),
                                ga.factor,
                                Some(ga.indices.clone()),
                                Some(gb.indices.clone()),
                            ));
                        }
                    }
                }
            }
            Ok(FamilyClassification::non_member(
                theorem,
                "no zero pattern / group combination matches the symmetric two-sided families".into(),
            ))
        }

        Theorem::Eq12 => {
            if b_id {
                for g in prof_a.groups() {
                    if subset(&pat.t_rows, &g.indices) && prof_a.closure_ok(&g.indices, ctol) {
                        return Ok(found(
                            FamilyMatch::Family(1),
                            Some(g.factor),
                            Some(1.0),
                            g.factor,
                            Some(g.indices.clone()),
                            None,
                        ));
                    }
                }
                return Ok(FamilyClassification::non_member(
                    theorem,
                    format!(
                        "T row support {} fits no closed common-factor group on side a",
                        fmt_set(&pat.t_rows)
                    ),
                ));
            }
            if a_id {
                for g in prof_b.groups() {
                    if subset(&pat.t_cols, &g.indices) && prof_b.closure_ok(&g.indices, ctol) {
                        return Ok(found(
                            FamilyMatch::Family(2),
                            Some(1.0),
                            Some(g.factor),
                            g.factor,
                            None,
                            Some(g.indices.clone()),
                        ));
                    }
                }
                return Ok(FamilyClassification::non_member(
                    theorem,
                    format!(
                        "T column support {} fits no closed common-factor group on side b",
                        fmt_set(&pat.t_cols)
                    ),
                ));
            }
            for ga in prof_a.groups() {
                if !subset(&pat.t_rows, &ga.indices) || !prof_a.closure_ok(&ga.indices, ctol) {
                    continue;
                }
                for gb in prof_b.groups() {
                    if subset(&pat.t_cols, &gb.indices) && prof_b.closure_ok(&gb.indices, ctol) {
                        return Ok(found(
                            FamilyMatch::Family(3),
                            Some(ga.factor),
                            Some(gb.factor),
                            ga.factor * gb.factor,
                            Some(ga.indices.clone()),
                            Some(gb.indices.clone()),
                        ));
                    }
                }
            }
            Ok(FamilyClassification::non_member(
                theorem,
                "T support fits no closed (K, L) group pair".into(),
            ))
        }
    }
}

/// Decay factor of a measure, given a successful classification.
///
/// Disturbance measures scale with `|q|^p`, the teleportation norm and
/// CHSH value with `|q|`, and the remote-state-preparation fidelity with
/// `q^2`. The teleportation fidelity is affine in `|q|`; the returned
/// factor applies to `f_qt - 1/2` (see [`verify`]).
pub fn predicted_factor(kind: MeasureKind, family: &FamilyClassification) -> Result<f64> {
    if !family.member {
        return Err(Error::NotFamilyMember {
            theorem: family.theorem.to_string(),
            witness: family
                .witness
                .clone()
                .unwrap_or_else(|| "not classified".into()),
        });
    }
    let base = family
        .factor
        .expect("member classification carries a factor")
        .abs();
    Ok(match kind {
        MeasureKind::GqdP2
        | MeasureKind::MinP2
        | MeasureKind::HellingerP2
        | MeasureKind::SymP2
        | MeasureKind::Frsp => base * base,
        _ => base,
    })
}

/// Theorem a measure kind verifies against, given the side profiles:
/// fully scaling channels fall under the full-scaling statements, the
/// figures of merit under the tensor-only one.
pub fn theorem_for_kind(
    kind: MeasureKind,
    prof_a: &ScalingProfile,
    prof_b: &ScalingProfile,
) -> Theorem {
    let fully = prof_a.is_fully_scaled() && prof_b.is_fully_scaled();
    if kind.is_figure_of_merit() {
        Theorem::Eq12
    } else if kind.is_two_sided() {
        if fully {
            Theorem::T3
        } else {
            Theorem::T4
        }
    } else if fully {
        Theorem::T1
    } else {
        Theorem::T2
    }
}

/// Map a before-value through a measure's scaling law. All kinds are
/// multiplicative except the teleportation fidelity, which is affine with
/// the factor acting on `f - 1/2`.
pub fn predicted_value(kind: MeasureKind, factor: f64, before: f64) -> f64 {
    match kind {
        MeasureKind::Fqt => 0.5 + factor * (before - 0.5),
        _ => factor * before,
    }
}

/// Measured vs predicted decay of one measure under one channel.
#[derive(Debug, Clone)]
pub struct FactorizationReport {
    pub kind: MeasureKind,
    pub side: Side,
    pub value_before: f64,
    pub value_after: f64,
    pub predicted_factor: f64,
    pub predicted_after: f64,
    pub abs_error: f64,
    pub rel_error: f64,
    pub tol: f64,
    pub pass: bool,
    pub classification: FamilyClassification,
}

/// Verify the factorization law for one state, channel and measure: the
/// verdict is `|after - predicted| <= tol * max(1, before)`.
pub fn verify(
    rho: &DensityMatrix,
    ch: &LocalChannel,
    spec: &MeasureSpec,
    settings: &OptimizerSettings,
    seed: u64,
    tol: f64,
) -> Result<FactorizationReport> {
    let prof_a = ch.side_a().scaling_profile();
    let prof_b = ch.side_b().scaling_profile();
    let theorem = theorem_for_kind(spec.kind, &prof_a, &prof_b);
    let b = bloch::decompose(rho);
    let classification = classify(&b, &prof_a, &prof_b, theorem, SUPPORT_TOL)?;
    if !classification.member {
        return Err(Error::NotFamilyMember {
            theorem: theorem.to_string(),
            witness: classification
                .witness
                .unwrap_or_else(|| "unmatched".into()),
        });
    }

    let factor = predicted_factor(spec.kind, &classification)?;
    let before = geometric_measure(rho, spec, settings, seed)?.value;
    let evolved = ch.apply(rho)?;
    let after = geometric_measure(&evolved, spec, settings, seed)?.value;
    let predicted_after = predicted_value(spec.kind, factor, before);
    let abs_error = (after - predicted_after).abs();
    let rel_error = abs_error / before.abs().max(1.0);
    Ok(FactorizationReport {
        kind: spec.kind,
        side: spec.side,
        value_before: before,
        value_after: after,
        predicted_factor: factor,
        predicted_after,
        abs_error,
        rel_error,
        tol,
        pass: abs_error <= tol * before.abs().max(1.0),
        classification,
    })
}

/// Result of the direct mechanism check `varrho' = q varrho`.
#[derive(Debug, Clone)]
pub struct VarrhoCheck {
    /// `|| varrho' - q varrho ||_2`.
    pub residual: f64,
    /// Factor used: the classified one for members, least squares
    /// otherwise.
    pub factor: f64,
    pub member: bool,
    pub witness: Option<String>,
}

/// Check the scaling mechanism behind the one-sided theorems without any
/// optimization: build `varrho` from the Bloch data before and after the
/// channel and measure `|| varrho' - q varrho ||_2`. Usable at qutrit
/// dimensions where measurement optimization is expensive.
pub fn varrho_scaling_check(rho: &DensityMatrix, ch: &LocalChannel) -> Result<VarrhoCheck> {
    let before = bloch::decompose(rho);
    let evolved = ch.apply(rho)?;
    let after = bloch::decompose(&evolved);

    let prof_a = ch.side_a().scaling_profile();
    let prof_b = ch.side_b().scaling_profile();
    let theorem = if prof_a.is_fully_scaled() && prof_b.is_fully_scaled() {
        Theorem::T1
    } else {
        Theorem::T2
    };
    let classification = classify(&before, &prof_a, &prof_b, theorem, SUPPORT_TOL)?;

    // Parseval on the orthonormal product basis: the varrho operator has
    // squared norm ||x||^2/d_b + ||T||_2^2.
    let d_b = rho.d_b() as f64;
    let norm_sq = |b: &BlochForm| -> f64 {
        b.x.iter().map(|v| v * v).sum::<f64>() / d_b + b.t_norm().powi(2)
    };
    let inner = {
        let mut acc = 0.0;
        for (u, v) in before.x.iter().zip(&after.x) {
            acc += u * v / d_b;
        }
        for i in 0..before.t.rows() {
            for j in 0..before.t.cols() {
                acc += before.t[(i, j)] * after.t[(i, j)];
            }
        }
        acc
    };

    let factor = if classification.member {
        classification
            .factor
            .expect("member classification carries a factor")
    } else {
        let denom = norm_sq(&before);
        if denom > 1e-28 {
            inner / denom
        } else {
            1.0
        }
    };

    let mut residual_sq = 0.0;
    for (u, v) in before.x.iter().zip(&after.x) {
        residual_sq += (v - factor * u).powi(2) / d_b;
    }
    for i in 0..before.t.rows() {
        for j in 0..before.t.cols() {
            residual_sq += (after.t[(i, j)] - factor * before.t[(i, j)]).powi(2);
        }
    }

    Ok(VarrhoCheck {
        residual: residual_sq.max(0.0).sqrt(),
        factor,
        member: classification.member,
        witness: classification.witness,
    })
}

/// Outcome of the two-sided depolarizing lower bound on the 2-norm
/// geometric discord.
#[derive(Debug, Clone)]
pub struct WeylReport {
    pub d2_before: f64,
    pub d2_after: f64,
    /// `(q_a q_b)^2 * d2_before`.
    pub bound: f64,
    /// `d2_after - bound` (nonnegative up to noise when satisfied).
    pub gap: f64,
    pub satisfied: bool,
}

/// Check `D_2[(S_1 ox S_2) rho] >= (q_a q_b)^2 D_2(rho)` for two-sided
/// depolarizing channels on a two-qubit state, via the closed form on both
/// sides. Equality holds when the local Bloch vector `x` vanishes.
pub fn weyl_bound_check(rho: &DensityMatrix, q_a: f64, q_b: f64) -> Result<WeylReport> {
    for (name, q) in [("q_a", q_a), ("q_b", q_b)] {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::ParameterRange {
                name: if name == "q_a" { "q_a" } else { "q_b" },
                value: q,
                min: 0.0,
                max: 1.0,
            });
        }
    }
    let d2_before = measures::d2_closed_two_qubit(rho)?;
    let ch = LocalChannel::tensor(
        channels::KrausChannel::depolarizing(2, q_a)?,
        channels::KrausChannel::depolarizing(2, q_b)?,
    );
    let evolved = ch.apply(rho)?;
    let d2_after = measures::d2_closed_two_qubit(&evolved)?;
    let bound = (q_a * q_b).powi(2) * d2_before;
    let gap = d2_after - bound;
    Ok(WeylReport {
        d2_before,
        d2_after,
        bound,
        gap,
        satisfied: gap >= -1e-9,
    })
}
