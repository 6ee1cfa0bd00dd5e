//! Seeded random states: Haar pure states, Ginibre mixed states, and
//! family-constrained draws for the verification suites.
//!
//! All generators are pure functions of their parameters and a 64-bit
//! seed, using the ChaCha12 stream-cipher generator so runs reproduce
//! across platforms. Batch callers derive per-trial seeds as
//! `base + trial_index`.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::bloch::{self, BlochForm};
use crate::error::{Error, Result};
use crate::factorization::{FamilyMatch, Theorem};
use crate::linalg::{self, ComplexMatrix, RealMatrix};
use crate::state::DensityMatrix;

fn complex_normal(rng: &mut ChaCha12Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-distributed pure state on `d_a x d_b`.
pub fn random_pure(d_a: usize, d_b: usize, seed: u64) -> DensityMatrix {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let n = d_a * d_b;
    let v: Vec<Complex64> = (0..n).map(|_| complex_normal(&mut rng)).collect();
    DensityMatrix::from_pure(&v, d_a, d_b).expect("normalized Gaussian vector is a valid state")
}

/// Ginibre mixed state `G G^dag / tr(G G^dag)` of the given rank.
pub fn random_mixed(d_a: usize, d_b: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    let n = d_a * d_b;
    if rank == 0 || rank > n {
        return Err(Error::ParameterRange {
            name: "rank",
            value: rank as f64,
            min: 1.0,
            max: n as f64,
        });
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let g = ComplexMatrix::from_fn(n, rank, |_, _| complex_normal(&mut rng));
    let gram = g.mul(&g.adjoint());
    let trace = gram.trace().re;
    DensityMatrix::new(gram.scale_re(1.0 / trace), d_a, d_b)
}

/// Haar-ish random unitary (QR of a Ginibre matrix via Gram-Schmidt).
pub fn random_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| complex_normal(&mut rng));
    let mut cols: Vec<Vec<Complex64>> = (0..dim).map(|j| g.column(j)).collect();
    for j in 0..dim {
        for k in 0..j {
            let proj: Complex64 = cols[k]
                .iter()
                .zip(&cols[j])
                .map(|(a, b)| a.conj() * b)
                .sum();
            let prev = cols[k].clone();
            for (c, p) in cols[j].iter_mut().zip(&prev) {
                *c -= proj * p;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for c in cols[j].iter_mut() {
            *c /= norm;
        }
    }
    ComplexMatrix::from_fn(dim, dim, |i, j| cols[j][i])
}

// ---------------------------------------------------------------------------
// Family-constrained generation
// ---------------------------------------------------------------------------

/// Allowed pattern of a Bloch vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternMode {
    Zero,
    /// Nonzero entries only at these 1-based generator labels.
    Support(Vec<usize>),
    Free,
}

/// Allowed pattern of the correlation tensor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TensorMode {
    Zero,
    Rows(Vec<usize>),
    Cols(Vec<usize>),
    Block(Vec<usize>, Vec<usize>),
    Free,
}

/// Concrete zero-pattern family: which theorem case it instantiates and
/// the allowed supports. Constructors encode the correspondence between
/// the theorem families and the patterns.
#[derive(Debug, Clone)]
pub struct FamilyDescriptor {
    pub theorem: Theorem,
    pub family: FamilyMatch,
    pub d_a: usize,
    pub d_b: usize,
    pub x_mode: PatternMode,
    pub y_mode: PatternMode,
    pub t_mode: TensorMode,
}

impl FamilyDescriptor {
    fn build(
        theorem: Theorem,
        family: FamilyMatch,
        d_a: usize,
        d_b: usize,
        x_mode: PatternMode,
        y_mode: PatternMode,
        t_mode: TensorMode,
    ) -> Result<Self> {
        let desc = Self {
            theorem,
            family,
            d_a,
            d_b,
            x_mode,
            y_mode,
            t_mode,
        };
        desc.validate()?;
        Ok(desc)
    }

    fn validate(&self) -> Result<()> {
        let na = self.d_a * self.d_a - 1;
        let nb = self.d_b * self.d_b - 1;
        let check = |set: &[usize], n: usize, what: &str| -> Result<()> {
            if set.is_empty() || set.iter().any(|&k| k == 0 || k > n) {
                return Err(Error::InvalidFile(format!(
                    "{what} index set must be nonempty with labels in 1..={n}"
                )));
            }
            Ok(())
        };
        if let PatternMode::Support(k) = &self.x_mode {
            check(k, na, "x support")?;
        }
        if let PatternMode::Support(l) = &self.y_mode {
            check(l, nb, "y support")?;
        }
        match &self.t_mode {
            TensorMode::Rows(k) => check(k, na, "T row")?,
            TensorMode::Cols(l) => check(l, nb, "T column")?,
            TensorMode::Block(k, l) => {
                check(k, na, "T row")?;
                check(l, nb, "T column")?;
            }
            _ => {}
        }
        Ok(())
    }

    /// One-sided full-scaling family: no restriction at all.
    pub fn t1_arbitrary(d_a: usize, d_b: usize) -> Result<Self> {
        Self::build(
            Theorem::T1,
            FamilyMatch::Family(1),
            d_a,
            d_b,
            PatternMode::Free,
            PatternMode::Free,
            TensorMode::Free,
        )
    }

    /// Two-sided full scaling, maximally mixed marginal on `a`.
    pub fn t1_mixed_marginal(d_a: usize, d_b: usize) -> Result<Self> {
        Self::build(
            Theorem::T1,
            FamilyMatch::Family(2),
            d_a,
            d_b,
            PatternMode::Zero,
            PatternMode::Free,
            TensorMode::Free,
        )
    }

    /// Two-sided full scaling, vanishing correlation operator.
    pub fn t1_zero_correlation(d_a: usize, d_b: usize) -> Result<Self> {
        Self::build(
            Theorem::T1,
            FamilyMatch::Family(2),
            d_a,
            d_b,
            PatternMode::Free,
            PatternMode::Free,
            TensorMode::Zero,
        )
    }

    /// Partial scaling on `a` only: x and the T rows confined to `k`.
    pub fn t2_row_family(d_a: usize, d_b: usize, k: Vec<usize>) -> Result<Self> {
        Self::build(
            Theorem::T2,
            FamilyMatch::Family(1),
            d_a,
            d_b,
            PatternMode::Support(k.clone()),
            PatternMode::Free,
            TensorMode::Rows(k),
        )
    }

    /// Partial scaling on `b` only: maximally mixed `rho_a`, T columns in `l`.
    pub fn t2_col_family(d_a: usize, d_b: usize, l: Vec<usize>) -> Result<Self> {
        Self::build(
            Theorem::T2,
            FamilyMatch::Family(2),
            d_a,
            d_b,
            PatternMode::Zero,
            PatternMode::Free,
            TensorMode::Cols(l),
        )
    }

    /// Two-sided partial scaling: maximally mixed `rho_a`, T inside `k x l`.
    pub fn t2_block_family(d_a: usize, d_b: usize, k: Vec<usize>, l: Vec<usize>) -> Result<Self> {
        Self::build(
            Theorem::T2,
            FamilyMatch::Family(3),
            d_a,
            d_b,
            PatternMode::Zero,
            PatternMode::Free,
            TensorMode::Block(k, l),
        )
    }

    /// Two-sided partial scaling: x inside `k`, no correlation.
    pub fn t2_x_only(d_a: usize, d_b: usize, k: Vec<usize>) -> Result<Self> {
        Self::build(
            Theorem::T2,
            FamilyMatch::Family(3),
            d_a,
            d_b,
            PatternMode::Support(k),
            PatternMode::Free,
            TensorMode::Zero,
        )
    }

    /// Symmetric measure, channel on `a`: maximally mixed `rho_b`.
    pub fn t3_y_zero(d_a: usize, d_b: usize) -> Result<Self> {
        Self::build(
            Theorem::T3,
            FamilyMatch::Family(1),
            d_a,
            d_b,
            PatternMode::Free,
            PatternMode::Zero,
            TensorMode::Free,
        )
    }

    /// Symmetric measure, two-sided: both marginals maximally mixed.
    pub fn t3_xy_zero(d_a: usize, d_b: usize) -> Result<Self> {
        Self::build(
            Theorem::T3,
            FamilyMatch::Family(3),
            d_a,
            d_b,
            PatternMode::Zero,
            PatternMode::Zero,
            TensorMode::Free,
        )
    }

    /// Symmetric measure, two-sided: `rho_a = I/d_a`, no correlation.
    pub fn t3_x_t_zero(d_a: usize, d_b: usize) -> Result<Self> {
        Self::build(
            Theorem::T3,
            FamilyMatch::Family(3),
            d_a,
            d_b,
            PatternMode::Zero,
            PatternMode::Free,
            TensorMode::Zero,
        )
    }

    /// Symmetric measure, two-sided: `rho_b = I/d_b`, no correlation.
    pub fn t3_y_t_zero(d_a: usize, d_b: usize) -> Result<Self> {
        Self::build(
            Theorem::T3,
            FamilyMatch::Family(3),
            d_a,
            d_b,
            PatternMode::Free,
            PatternMode::Zero,
            TensorMode::Zero,
        )
    }

    /// Symmetric measure, equal factors on both sides: only `rho_c = 0`.
    pub fn t3_extra(d_a: usize, d_b: usize) -> Result<Self> {
        Self::build(
            Theorem::T3,
            FamilyMatch::ExtraSameChannel,
            d_a,
            d_b,
            PatternMode::Free,
            PatternMode::Free,
            TensorMode::Zero,
        )
    }

    /// Symmetric measure, partial scaling on `a` only.
    pub fn t4_row_family(d_a: usize, d_b: usize, k: Vec<usize>) -> Result<Self> {
        Self::build(
            Theorem::T4,
            FamilyMatch::Family(1),
            d_a,
            d_b,
            PatternMode::Support(k.clone()),
            PatternMode::Zero,
            TensorMode::Rows(k),
        )
    }

    /// Symmetric measure, two-sided partial scaling: T confined to `k x l`.
    pub fn t4_block_family(d_a: usize, d_b: usize, k: Vec<usize>, l: Vec<usize>) -> Result<Self> {
        Self::build(
            Theorem::T4,
            FamilyMatch::Family(3),
            d_a,
            d_b,
            PatternMode::Zero,
            PatternMode::Zero,
            TensorMode::Block(k, l),
        )
    }

    /// Symmetric measure, two-sided: x inside `k`, everything else zero.
    pub fn t4_x_only(d_a: usize, d_b: usize, k: Vec<usize>) -> Result<Self> {
        Self::build(
            Theorem::T4,
            FamilyMatch::Family(3),
            d_a,
            d_b,
            PatternMode::Support(k),
            PatternMode::Zero,
            TensorMode::Zero,
        )
    }

    /// Symmetric measure, two-sided: y inside `l`, everything else zero.
    pub fn t4_y_only(d_a: usize, d_b: usize, l: Vec<usize>) -> Result<Self> {
        Self::build(
            Theorem::T4,
            FamilyMatch::Family(3),
            d_a,
            d_b,
            PatternMode::Zero,
            PatternMode::Support(l),
            TensorMode::Zero,
        )
    }

    /// Symmetric measure, equal factors: x in `k`, y in `l`, `rho_c = 0`.
    pub fn t4_extra(d_a: usize, d_b: usize, k: Vec<usize>, l: Vec<usize>) -> Result<Self> {
        Self::build(
            Theorem::T4,
            FamilyMatch::ExtraSameChannel,
            d_a,
            d_b,
            PatternMode::Support(k),
            PatternMode::Support(l),
            TensorMode::Zero,
        )
    }

    /// Figure-of-merit family, channel on `a`: T rows confined to `k`.
    pub fn eq12_rows(d_a: usize, d_b: usize, k: Vec<usize>) -> Result<Self> {
        Self::build(
            Theorem::Eq12,
            FamilyMatch::Family(1),
            d_a,
            d_b,
            PatternMode::Free,
            PatternMode::Free,
            TensorMode::Rows(k),
        )
    }

    /// Figure-of-merit family, two-sided: T confined to `k x l`.
    pub fn eq12_block(d_a: usize, d_b: usize, k: Vec<usize>, l: Vec<usize>) -> Result<Self> {
        Self::build(
            Theorem::Eq12,
            FamilyMatch::Family(3),
            d_a,
            d_b,
            PatternMode::Free,
            PatternMode::Free,
            TensorMode::Block(k, l),
        )
    }

    /// Parse a CLI family string such as `t2.f1:K=1,2` or
    /// `t4.extra:K=3;L=1`. Sub-cases of a family keep the paper's listing
    /// order as letters: `t1.f2a` is the mixed-marginal case, `t1.f2b`
    /// the zero-correlation case, and so on.
    pub fn parse(text: &str, d_a: usize, d_b: usize) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidFile(format!("family '{text}': {msg}"));
        let (head, args) = match text.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (text, None),
        };
        let mut k_set: Option<Vec<usize>> = None;
        let mut l_set: Option<Vec<usize>> = None;
        if let Some(args) = args {
            for part in args.split(';') {
                let (key, value) = part
                    .split_once('=')
                    .ok_or_else(|| bad("expected K=... or L=..."))?;
                let parsed: Result<Vec<usize>> = value
                    .split(',')
                    .map(|v| {
                        v.trim()
                            .parse::<usize>()
                            .map_err(|_| bad("index sets are comma-separated integers"))
                    })
                    .collect();
                match key.trim() {
                    "K" => k_set = Some(parsed?),
                    "L" => l_set = Some(parsed?),
                    other => return Err(bad(&format!("unknown key '{other}'"))),
                }
            }
        }
        let need_k = || k_set.clone().ok_or_else(|| bad("requires K=..."));
        let need_l = || l_set.clone().ok_or_else(|| bad("requires L=..."));
        match head {
            "t1.f1" => Self::t1_arbitrary(d_a, d_b),
            "t1.f2" | "t1.f2a" => Self::t1_mixed_marginal(d_a, d_b),
            "t1.f2b" => Self::t1_zero_correlation(d_a, d_b),
            "t2.f1" => Self::t2_row_family(d_a, d_b, need_k()?),
            "t2.f2" | "t2.f2a" => Self::t2_col_family(d_a, d_b, need_l()?),
            "t2.f3" | "t2.f3a" => Self::t2_block_family(d_a, d_b, need_k()?, need_l()?),
            "t2.f3b" => Self::t2_x_only(d_a, d_b, need_k()?),
            "t3.f1" => Self::t3_y_zero(d_a, d_b),
            "t3.f3" | "t3.f3a" => Self::t3_xy_zero(d_a, d_b),
            "t3.f3b" => Self::t3_x_t_zero(d_a, d_b),
            "t3.f3c" => Self::t3_y_t_zero(d_a, d_b),
            "t3.extra" => Self::t3_extra(d_a, d_b),
            "t4.f1" => Self::t4_row_family(d_a, d_b, need_k()?),
            "t4.f3" | "t4.f3a" => Self::t4_block_family(d_a, d_b, need_k()?, need_l()?),
            "t4.f3b" => Self::t4_x_only(d_a, d_b, need_k()?),
            "t4.f3c" => Self::t4_y_only(d_a, d_b, need_l()?),
            "t4.extra" => Self::t4_extra(d_a, d_b, need_k()?, need_l()?),
            "eq12.f1" => Self::eq12_rows(d_a, d_b, need_k()?),
            "eq12.f3" => Self::eq12_block(d_a, d_b, need_k()?, need_l()?),
            _ => Err(bad("unknown family name")),
        }
    }
}

fn draw_pattern(rng: &mut ChaCha12Rng, n: usize, mode: &PatternMode, scale: f64) -> Vec<f64> {
    let mut v = vec![0.0; n];
    match mode {
        PatternMode::Zero => {}
        PatternMode::Support(set) => {
            for &k in set {
                v[k - 1] = scale * rng.sample::<f64, _>(StandardNormal);
            }
        }
        PatternMode::Free => {
            for item in v.iter_mut() {
                *item = scale * rng.sample::<f64, _>(StandardNormal);
            }
        }
    }
    v
}

fn draw_tensor(
    rng: &mut ChaCha12Rng,
    na: usize,
    nb: usize,
    mode: &TensorMode,
    scale: f64,
) -> RealMatrix {
    let rows: Vec<usize> = match mode {
        TensorMode::Zero => vec![],
        TensorMode::Rows(k) | TensorMode::Block(k, _) => k.clone(),
        TensorMode::Cols(_) | TensorMode::Free => (1..=na).collect(),
    };
    let cols: Vec<usize> = match mode {
        TensorMode::Zero => vec![],
        TensorMode::Cols(l) | TensorMode::Block(_, l) => l.clone(),
        TensorMode::Rows(_) | TensorMode::Free => (1..=nb).collect(),
    };
    let mut t = RealMatrix::zeros(na, nb);
    for &i in &rows {
        for &j in &cols {
            t[(i - 1, j - 1)] = scale * rng.sample::<f64, _>(StandardNormal);
        }
    }
    t
}

/// Draw a valid state honoring the family's zero pattern: sample the
/// allowed Bloch data, then bisect a mixing parameter toward the
/// maximally mixed state until the reconstruction is safely PSD (boundary
/// plus a 1% margin). Mixing scales all components uniformly, so the
/// pattern is preserved.
pub fn random_in_family(desc: &FamilyDescriptor, seed: u64) -> DensityMatrix {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let na = desc.d_a * desc.d_a - 1;
    let nb = desc.d_b * desc.d_b - 1;
    let raw = BlochForm {
        d_a: desc.d_a,
        d_b: desc.d_b,
        x: draw_pattern(&mut rng, na, &desc.x_mode, 0.25),
        y: draw_pattern(&mut rng, nb, &desc.y_mode, 0.25),
        t: draw_tensor(&mut rng, na, nb, &desc.t_mode, 0.25),
    };

    let min_eig_at = |alpha: f64| -> f64 {
        let m = bloch::reconstruct(&raw.scaled(alpha)).expect("pattern shapes match dims");
        linalg::min_eigenvalue(&m).expect("reconstruction is Hermitian")
    };

    let alpha = if min_eig_at(1.0) > 1e-8 {
        1.0
    } else {
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if min_eig_at(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.99 * lo
    };

    let m = bloch::reconstruct(&raw.scaled(alpha)).expect("pattern shapes match dims");
    DensityMatrix::new(m, desc.d_a, desc.d_b)
        .expect("mixing toward I/d with margin yields a valid state")
}
