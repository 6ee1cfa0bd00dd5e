//! Implementations of the four subcommands.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde_json::json;

use qcorr::bloch;
use qcorr::channels::{GeneratorScaling, KrausChannel, LocalChannel};
use qcorr::ensembles::{random_in_family, random_mixed, FamilyDescriptor};
use qcorr::factorization::{
    self, classify, predicted_factor, predicted_value, theorem_for_kind, varrho_scaling_check,
    FamilyMatch, Theorem,
};
use qcorr::linalg::Side;
use qcorr::measures::{geometric_measure, MeasureKind, MeasureSpec, Method};
use qcorr::DensityMatrix;

use crate::io::{self, fmt_sig, load_channel, load_state, parse_side};
use crate::{CliError, EvolveArgs, InspectArgs, MeasureArgs, VerifyArgs};

pub fn measure(args: MeasureArgs) -> Result<(), CliError> {
    let rho = load_state(&args.state)?;
    let kind = MeasureKind::from_str(&args.measure)?;
    let method = Method::from_str(&args.method)?;
    let side = parse_side(&args.side)?;
    let spec = MeasureSpec::new(kind).with_side(side).with_method(method);
    let settings = args.optimizer.settings();
    let result = geometric_measure(&rho, &spec, &settings, args.optimizer.seed)?;

    let diagnostics = result.diagnostics.as_ref().map(|d| {
        json!({
            "evaluations": d.evaluations,
            "iterations": d.iterations,
            "cap_hit": d.cap_hit,
            "best_params": d.best_params,
            "optimizer_value": d.optimizer_value,
        })
    });
    let output = json!({
        "kind": kind.to_string(),
        "side": side.to_string(),
        "value": result.value,
        "method": result.method.to_string(),
        "seed": args.optimizer.seed,
        "diagnostics": diagnostics,
    });
    println!("{}", serde_json::to_string_pretty(&output).expect("json"));
    Ok(())
}

enum SidePlacement {
    OneSided(Side),
    Both,
}

fn parse_placement(text: &str) -> Result<SidePlacement, CliError> {
    match text {
        "a" => Ok(SidePlacement::OneSided(Side::A)),
        "b" => Ok(SidePlacement::OneSided(Side::B)),
        "ab" => Ok(SidePlacement::Both),
        _ => Err(CliError::validation(format!(
            "side must be 'a', 'b' or 'ab', got '{text}'"
        ))),
    }
}

fn build_local(
    constructor: &str,
    q: f64,
    placement: &SidePlacement,
    rho: &DensityMatrix,
) -> Result<LocalChannel, CliError> {
    let ch = load_channel(constructor, Some(q))?;
    Ok(match placement {
        SidePlacement::OneSided(Side::A) => LocalChannel::one_sided(ch, Side::A, rho.d_b()),
        SidePlacement::OneSided(Side::B) => LocalChannel::one_sided(ch, Side::B, rho.d_a()),
        SidePlacement::Both => {
            let other = load_channel(constructor, Some(q))?;
            LocalChannel::tensor(ch, other)
        }
    })
}

pub fn evolve(args: EvolveArgs) -> Result<(), CliError> {
    let rho = load_state(&args.state)?;
    let placement = parse_placement(&args.side)?;
    let kinds: Vec<MeasureKind> = args
        .measure
        .split(',')
        .map(|s| MeasureKind::from_str(s.trim()).map_err(CliError::from))
        .collect::<Result<_, _>>()?;
    if kinds.is_empty() {
        return Err(CliError::validation("no measures given".into()));
    }

    // Schedule: (q, optional t) pairs.
    let schedule: Vec<(f64, Option<f64>)> = match (&args.q_list, args.q_from, args.gamma) {
        (Some(list), None, None) => list
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map(|q| (q, None))
                    .map_err(|_| CliError::validation(format!("bad q value '{v}'")))
            })
            .collect::<Result<_, _>>()?,
        (None, Some(q_from), None) => {
            let q_to = args
                .q_to
                .ok_or_else(|| CliError::validation("--q-from requires --q-to".into()))?;
            let steps = args
                .steps
                .ok_or_else(|| CliError::validation("--q-from requires --steps".into()))?;
            if steps < 2 {
                return Err(CliError::validation("--steps must be at least 2".into()));
            }
            (0..steps)
                .map(|i| {
                    let f = i as f64 / (steps - 1) as f64;
                    (q_from + f * (q_to - q_from), None)
                })
                .collect()
        }
        (None, None, Some(gamma)) => {
            let t_max = args
                .t_max
                .ok_or_else(|| CliError::validation("--gamma requires --t-max".into()))?;
            let steps = args
                .steps
                .ok_or_else(|| CliError::validation("--gamma requires --steps".into()))?;
            if steps < 2 {
                return Err(CliError::validation("--steps must be at least 2".into()));
            }
            (0..steps)
                .map(|i| {
                    let t = t_max * i as f64 / (steps - 1) as f64;
                    ((-gamma * t).exp(), Some(t))
                })
                .collect()
        }
        _ => {
            return Err(CliError::validation(
                "give exactly one schedule: --q-list, --q-from/--q-to/--steps, or --gamma/--t-max/--steps".into(),
            ))
        }
    };

    let settings = args.optimizer.settings();
    let seed = args.optimizer.seed;

    // Baseline values, reused for every prediction.
    let mut before = Vec::new();
    for &kind in &kinds {
        let spec = MeasureSpec::new(kind);
        before.push(geometric_measure(&rho, &spec, &settings, seed)?.value);
    }
    let b0 = bloch::decompose(&rho);

    let mut csv = String::from("q,t,measure,value,predicted,abs_err\n");
    for &(q, t) in &schedule {
        let local = build_local(&args.channel, q, &placement, &rho)?;
        let evolved = local.apply(&rho)?;
        let prof_a = local.side_a().scaling_profile();
        let prof_b = local.side_b().scaling_profile();
        for (ki, &kind) in kinds.iter().enumerate() {
            let spec = MeasureSpec::new(kind);
            let value = geometric_measure(&evolved, &spec, &settings, seed)?.value;
            let theorem = theorem_for_kind(kind, &prof_a, &prof_b);
            let prediction = classify(&b0, &prof_a, &prof_b, theorem, factorization::SUPPORT_TOL)
                .ok()
                .filter(|c| c.member)
                .and_then(|c| predicted_factor(kind, &c).ok())
                .map(|factor| predicted_value(kind, factor, before[ki]));
            let t_cell = t.map(|t| fmt_sig(t)).unwrap_or_default();
            let (pred_cell, err_cell) = match prediction {
                Some(p) => (fmt_sig(p), fmt_sig((value - p).abs())),
                None => (String::new(), String::new()),
            };
            writeln!(
                csv,
                "{},{},{},{},{},{}",
                fmt_sig(q),
                t_cell,
                kind,
                fmt_sig(value),
                pred_cell,
                err_cell
            )
            .expect("string write");
        }
    }
    std::fs::write(&args.out, csv)
        .map_err(|e| CliError::validation(format!("cannot write {}: {e}", args.out.display())))?;
    println!(
        "{}",
        json!({
            "state": args.state.display().to_string(),
            "channel": args.channel,
            "rows": schedule.len() * kinds.len(),
            "out": args.out.display().to_string(),
        })
    );
    Ok(())
}

struct TrialRow {
    trial: usize,
    kind: String,
    family: String,
    q_a: Option<f64>,
    q_b: Option<f64>,
    before: f64,
    after: f64,
    predicted: f64,
    abs_err: f64,
    residual: Option<f64>,
    pass: bool,
}

fn family_label(theorem: Theorem, matched: Option<FamilyMatch>) -> String {
    match matched {
        Some(FamilyMatch::Family(k)) => format!("{theorem}.f{k}"),
        Some(FamilyMatch::ExtraSameChannel) => format!("{theorem}.extra"),
        None => format!("{theorem}.none"),
    }
}

fn parse_dims(text: &str) -> Result<(usize, usize), CliError> {
    let (a, b) = text
        .split_once('x')
        .ok_or_else(|| CliError::validation(format!("dims must look like 2x2, got '{text}'")))?;
    let parse = |s: &str| {
        s.parse::<usize>()
            .ok()
            .filter(|d| (2..=3).contains(d))
            .ok_or_else(|| CliError::validation(format!("unsupported dimension '{s}'")))
    };
    Ok((parse(a)?, parse(b)?))
}

pub fn verify(args: VerifyArgs) -> Result<(), CliError> {
    let theorem = Theorem::from_str(&args.theorem)?;
    let (d_a, d_b) = parse_dims(&args.dims)?;
    let settings = args.optimizer.settings();
    let mut rng = ChaCha12Rng::seed_from_u64(args.seed);
    let mut rows: Vec<TrialRow> = Vec::new();

    for trial in 0..args.trials {
        let trial_seed = args.seed + trial as u64;
        match theorem {
            Theorem::T1 => {
                let rank = trial % (d_a * d_b) + 1;
                let rho = random_mixed(d_a, d_b, rank, trial_seed)?;
                let q = rng.random_range(0.1..0.95);
                let ch = LocalChannel::one_sided(
                    KrausChannel::depolarizing(d_a, q)?,
                    Side::A,
                    d_b,
                );
                let kinds: &[(MeasureKind, Method)] = if (d_a, d_b) == (2, 2) {
                    &[(MeasureKind::GqdP2, Method::Auto), (MeasureKind::GqdP1, Method::Optimize)]
                } else {
                    &[(MeasureKind::GqdP2, Method::Optimize)]
                };
                for &(kind, method) in kinds {
                    let spec = MeasureSpec::new(kind).with_method(method);
                    push_verify_row(&mut rows, trial, &rho, &ch, &spec, &settings, trial_seed, args.tol)?;
                }
            }
            Theorem::T2 => {
                let (ch, k_set): (KrausChannel, Vec<usize>) = if d_a == 2 {
                    let q = rng.random_range(0.1..0.95);
                    match trial % 4 {
                        0 => (KrausChannel::phase_flip(q)?, vec![1, 2]),
                        1 => (KrausChannel::bit_flip(q)?, vec![2, 3]),
                        2 => (KrausChannel::bit_phase_flip(q)?, vec![1, 3]),
                        _ => (KrausChannel::gad(q, 0.5)?, vec![1, 2]),
                    }
                } else {
                    let k1 = trial % 3 + 1;
                    if trial % 2 == 0 {
                        let q = rng.random_range(0.0..1.0);
                        (
                            KrausChannel::gellmann_identity_pair(k1, q)?,
                            (1..=8).filter(|&k| k != k1 && k != 8).collect(),
                        )
                    } else {
                        let q = rng.random_range(0.5..1.0);
                        let (k2, k3) = (4 + trial % 2, 6 + (trial / 2) % 2);
                        (
                            KrausChannel::gellmann_triple(k1, k2, k3, q)?,
                            vec![k1, k2, k3],
                        )
                    }
                };
                let desc = FamilyDescriptor::t2_row_family(d_a, d_b, k_set)?;
                let rho = random_in_family(&desc, trial_seed);
                let ch = LocalChannel::one_sided(ch, Side::A, d_b);
                let spec = MeasureSpec::new(MeasureKind::GqdP2);
                push_verify_row(&mut rows, trial, &rho, &ch, &spec, &settings, trial_seed, args.tol)?;
            }
            Theorem::T3 => {
                let desc = match trial % 4 {
                    0 => FamilyDescriptor::t3_xy_zero(d_a, d_b)?,
                    1 => FamilyDescriptor::t3_x_t_zero(d_a, d_b)?,
                    2 => FamilyDescriptor::t3_y_t_zero(d_a, d_b)?,
                    _ => FamilyDescriptor::t3_extra(d_a, d_b)?,
                };
                let rho = random_in_family(&desc, trial_seed);
                let q_a = rng.random_range(0.1..0.95);
                let q_b = if matches!(desc.family, FamilyMatch::ExtraSameChannel) {
                    q_a
                } else {
                    rng.random_range(0.1..0.95)
                };
                let ch = LocalChannel::tensor(
                    KrausChannel::depolarizing(d_a, q_a)?,
                    KrausChannel::depolarizing(d_b, q_b)?,
                );
                let spec = MeasureSpec::new(MeasureKind::SymP2);
                push_verify_row(&mut rows, trial, &rho, &ch, &spec, &settings, trial_seed, args.tol)?;
            }
            Theorem::T4 => {
                if (d_a, d_b) != (2, 2) {
                    return Err(CliError::validation(
                        "the t4 suite uses qubit Pauli channels; dims must be 2x2".into(),
                    ));
                }
                let q_a = rng.random_range(0.1..0.95);
                let q_b = rng.random_range(0.1..0.95);
                let (desc, ch) = match trial % 4 {
                    0 => (
                        FamilyDescriptor::t4_block_family(2, 2, vec![1, 2], vec![2, 3])?,
                        LocalChannel::tensor(
                            KrausChannel::phase_flip(q_a)?,
                            KrausChannel::bit_flip(q_b)?,
                        ),
                    ),
                    1 => (
                        FamilyDescriptor::t4_x_only(2, 2, vec![1, 2])?,
                        LocalChannel::tensor(
                            KrausChannel::phase_flip(q_a)?,
                            KrausChannel::bit_flip(q_b)?,
                        ),
                    ),
                    2 => (
                        FamilyDescriptor::t4_y_only(2, 2, vec![2, 3])?,
                        LocalChannel::tensor(
                            KrausChannel::phase_flip(q_a)?,
                            KrausChannel::bit_flip(q_b)?,
                        ),
                    ),
                    _ => (
                        FamilyDescriptor::t4_extra(2, 2, vec![1, 2], vec![1, 2])?,
                        LocalChannel::tensor(
                            KrausChannel::phase_flip(q_a)?,
                            KrausChannel::phase_flip(q_a)?,
                        ),
                    ),
                };
                let rho = random_in_family(&desc, trial_seed);
                let spec = MeasureSpec::new(MeasureKind::SymP2);
                push_verify_row(&mut rows, trial, &rho, &ch, &spec, &settings, trial_seed, args.tol)?;
            }
            Theorem::Eq12 => {
                if (d_a, d_b) != (2, 2) {
                    return Err(CliError::validation(
                        "the figures of merit are two-qubit quantities; dims must be 2x2".into(),
                    ));
                }
                let rho = random_mixed(2, 2, trial % 4 + 1, trial_seed)?;
                let q = rng.random_range(0.05..1.0);
                let ch =
                    LocalChannel::one_sided(KrausChannel::depolarizing(2, q)?, Side::A, 2);
                for kind in [MeasureKind::Nqt, MeasureKind::Frsp, MeasureKind::Bmax] {
                    let spec = MeasureSpec::new(kind);
                    push_verify_row(&mut rows, trial, &rho, &ch, &spec, &settings, trial_seed, args.tol)?;
                }
            }
        }
    }

    let passed = rows.iter().filter(|r| r.pass).count();
    let failed = rows.len() - passed;

    if let Some(out) = &args.out {
        let mut csv =
            String::from("trial,kind,family,q_a,q_b,before,after,predicted,abs_err,residual,pass\n");
        for r in &rows {
            let opt = |v: Option<f64>| v.map(fmt_sig).unwrap_or_default();
            writeln!(
                csv,
                "{},{},{},{},{},{},{},{},{},{},{}",
                r.trial,
                r.kind,
                r.family,
                opt(r.q_a),
                opt(r.q_b),
                fmt_sig(r.before),
                fmt_sig(r.after),
                fmt_sig(r.predicted),
                fmt_sig(r.abs_err),
                opt(r.residual),
                r.pass
            )
            .expect("string write");
        }
        std::fs::write(out, csv)
            .map_err(|e| CliError::validation(format!("cannot write {}: {e}", out.display())))?;
    }

    let summary = json!({
        "theorem": theorem.to_string(),
        "dims": format!("{d_a}x{d_b}"),
        "trials": args.trials,
        "checks": rows.len(),
        "passed": passed,
        "failed": failed,
        "tol": args.tol,
        "seed": args.seed,
    });
    println!("{}", serde_json::to_string_pretty(&summary).expect("json"));
    if failed > 0 {
        return Err(CliError::Verification(format!(
            "{failed} of {} checks exceeded tolerance {}",
            rows.len(),
            args.tol
        )));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn push_verify_row(
    rows: &mut Vec<TrialRow>,
    trial: usize,
    rho: &DensityMatrix,
    ch: &LocalChannel,
    spec: &MeasureSpec,
    settings: &qcorr::OptimizerSettings,
    seed: u64,
    tol: f64,
) -> Result<(), CliError> {
    let report = factorization::verify(rho, ch, spec, settings, seed, tol)?;
    let residual = if spec.kind.is_two_sided() {
        // The varrho mechanism covers the one-sided measures only.
        None
    } else {
        Some(varrho_scaling_check(rho, ch)?.residual)
    };
    rows.push(TrialRow {
        trial,
        kind: spec.kind.to_string(),
        family: family_label(report.classification.theorem, report.classification.matched),
        q_a: report.classification.q_a,
        q_b: report.classification.q_b,
        before: report.value_before,
        after: report.value_after,
        predicted: report.predicted_after,
        abs_err: report.abs_error,
        residual,
        pass: report.pass,
    });
    Ok(())
}

pub fn inspect(args: InspectArgs) -> Result<(), CliError> {
    let ch = io::load_channel(&args.channel, None)?;
    let profile = ch.scaling_profile();
    let entries: Vec<serde_json::Value> = profile
        .entries()
        .iter()
        .enumerate()
        .map(|(i, e)| match e {
            GeneratorScaling::Scaled(q) => json!({"generator": i + 1, "factor": q}),
            GeneratorScaling::NotScaled => {
                json!({"generator": i + 1, "factor": serde_json::Value::Null})
            }
        })
        .collect();
    let groups: Vec<serde_json::Value> = profile
        .groups()
        .iter()
        .map(|g| json!({"factor": g.factor, "generators": g.indices}))
        .collect();
    let choi = if args.choi_check {
        Some(ch.choi_min_eigenvalue()?)
    } else {
        None
    };
    let output = json!({
        "dim": ch.dim(),
        "kraus_operators": ch.kraus().len(),
        "completeness_residual": ch.completeness_residual(),
        "choi_min_eigenvalue": choi,
        "unital": profile.is_unital(1e-10),
        "scaling": {
            "entries": entries,
            "groups": groups,
            "fully_scaled": profile.is_fully_scaled(),
        },
    });
    println!("{}", serde_json::to_string_pretty(&output).expect("json"));
    Ok(())
}
