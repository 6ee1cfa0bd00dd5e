//! File formats, the channel constructor grammar, and numeric formatting.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use qcorr::linalg::{ComplexMatrix, Side};
use qcorr::{DensityMatrix, KrausChannel};

use crate::CliError;

/// State file: `{"dims": [d_a, d_b], "matrix": [[[re, im], ...], ...]}`,
/// row-major.
#[derive(Deserialize)]
pub struct StateFile {
    pub dims: [usize; 2],
    pub matrix: Vec<Vec<[f64; 2]>>,
}

pub fn load_state(path: &Path) -> Result<DensityMatrix, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))?;
    let file: StateFile = serde_json::from_str(&text)
        .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?;
    let [d_a, d_b] = file.dims;
    let n = d_a * d_b;
    if file.matrix.len() != n || file.matrix.iter().any(|row| row.len() != n) {
        return Err(CliError::validation(format!(
            "{}: matrix must be {n}x{n} for dims {d_a}x{d_b}",
            path.display()
        )));
    }
    let m = ComplexMatrix::from_fn(n, n, |i, j| {
        num_complex::Complex64::new(file.matrix[i][j][0], file.matrix[i][j][1])
    });
    DensityMatrix::new(m, d_a, d_b).map_err(CliError::from)
}

/// 12-significant-digit scientific formatting; locale-independent.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        // Avoid the -0 representation so output is byte-stable.
        return "0.00000000000e0".into();
    }
    format!("{:.11e}", x)
}

/// Parsed `name:key=value,...` constructor string.
pub struct ConstructorSpec {
    pub name: String,
    args: BTreeMap<String, f64>,
}

impl ConstructorSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let (name, rest) = match text.split_once(':') {
            Some((n, r)) => (n, Some(r)),
            None => (text, None),
        };
        let mut args = BTreeMap::new();
        if let Some(rest) = rest {
            for part in rest.split(',') {
                let (key, value) = part.split_once('=').ok_or_else(|| {
                    CliError::validation(format!("constructor '{text}': expected key=value, got '{part}'"))
                })?;
                let value: f64 = value.trim().parse().map_err(|_| {
                    CliError::validation(format!("constructor '{text}': '{value}' is not a number"))
                })?;
                if args.insert(key.trim().to_string(), value).is_some() {
                    return Err(CliError::validation(format!(
                        "constructor '{text}': duplicate key '{key}'"
                    )));
                }
            }
        }
        Ok(Self {
            name: name.to_string(),
            args,
        })
    }

    fn take(&mut self, key: &str) -> Result<f64, CliError> {
        self.args
            .remove(key)
            .ok_or_else(|| CliError::validation(format!("constructor '{}': missing key '{key}'", self.name)))
    }

    fn take_index(&mut self, key: &str) -> Result<usize, CliError> {
        let v = self.take(key)?;
        if v.fract() != 0.0 || v < 0.0 {
            return Err(CliError::validation(format!(
                "constructor '{}': key '{key}' must be a nonnegative integer",
                self.name
            )));
        }
        Ok(v as usize)
    }

    fn finish(self) -> Result<(), CliError> {
        if let Some(key) = self.args.keys().next() {
            return Err(CliError::validation(format!(
                "constructor '{}': unknown key '{key}'",
                self.name
            )));
        }
        Ok(())
    }

    /// Build the channel. `q_override` supplies the swept parameter for
    /// trajectory commands; it conflicts with an explicit `q=`.
    pub fn build(&self, q_override: Option<f64>) -> Result<KrausChannel, CliError> {
        let mut spec = ConstructorSpec {
            name: self.name.clone(),
            args: self.args.clone(),
        };
        let q_param = |spec: &mut ConstructorSpec| -> Result<f64, CliError> {
            match (q_override, spec.args.contains_key("q")) {
                (Some(q), false) => Ok(q),
                (Some(_), true) => Err(CliError::validation(format!(
                    "constructor '{}': q is supplied by the sweep, remove q=",
                    spec.name
                ))),
                (None, _) => spec.take("q"),
            }
        };
        let channel = match spec.name.as_str() {
            "identity" => {
                let d = spec.take_index("d")?;
                KrausChannel::identity(d)
            }
            "depol" => {
                let d = spec.take_index("d")?;
                let q = q_param(&mut spec)?;
                KrausChannel::depolarizing(d, q)?
            }
            "phase-flip" => KrausChannel::phase_flip(q_param(&mut spec)?)?,
            "bit-flip" => KrausChannel::bit_flip(q_param(&mut spec)?)?,
            "bit-phase-flip" => KrausChannel::bit_phase_flip(q_param(&mut spec)?)?,
            "pauli" => {
                let (q1, q2, q3) = (spec.take("q1")?, spec.take("q2")?, spec.take("q3")?);
                KrausChannel::pauli_from_q(q1, q2, q3)?
            }
            "gad" => {
                let q = q_param(&mut spec)?;
                let eta = spec.take("eta")?;
                KrausChannel::gad(q, eta)?
            }
            "gm" => {
                let mut q = [0.0; 8];
                for (k, item) in q.iter_mut().enumerate() {
                    *item = spec.take(&format!("q{}", k + 1))?;
                }
                KrausChannel::gellmann_from_q(&q)?
            }
            "gm-pair" => {
                let k1 = spec.take_index("k1")?;
                let q = q_param(&mut spec)?;
                KrausChannel::gellmann_identity_pair(k1, q)?
            }
            "gm-triple" => {
                let k1 = spec.take_index("k1")?;
                let k2 = spec.take_index("k2")?;
                let k3 = spec.take_index("k3")?;
                let q = q_param(&mut spec)?;
                KrausChannel::gellmann_triple(k1, k2, k3, q)?
            }
            other => {
                return Err(CliError::validation(format!(
                    "unknown channel constructor '{other}'"
                )))
            }
        };
        spec.finish()?;
        Ok(channel)
    }
}

/// A channel argument: either a JSON file path or a constructor string.
pub fn load_channel(text: &str, q_override: Option<f64>) -> Result<KrausChannel, CliError> {
    let path = Path::new(text);
    if text.ends_with(".json") || path.exists() {
        if q_override.is_some() {
            return Err(CliError::validation(
                "channel files cannot be swept; use a constructor string".into(),
            ));
        }
        let content = std::fs::read_to_string(path)
            .map_err(|e| CliError::validation(format!("cannot read {text}: {e}")))?;
        return KrausChannel::from_json_str(&content).map_err(CliError::from);
    }
    ConstructorSpec::parse(text)?.build(q_override)
}

pub fn parse_side(text: &str) -> Result<Side, CliError> {
    match text {
        "a" => Ok(Side::A),
        "b" => Ok(Side::B),
        _ => Err(CliError::validation(format!(
            "side must be 'a' or 'b', got '{text}'"
        ))),
    }
}
