//! Text forms of [`WeightModel`] and [`PhiSpec`] as used in config files:
//! `powerlaw(alpha=2.5, xmin=1.0)`, `twopoint(a=1, b=3, p=0.5)`,
//! `constant(c=3)`, `table(1:0.5, 3:0.5)`; `sqrt`, `identity`, `log`,
//! `pow(beta=0.3)`, `log(c=0.5)`, `table(1, 2, 4)`.

use std::str::FromStr;

use super::{LawError, PhiSpec, WeightModel};

fn parse_err(input: &str, reason: impl Into<String>) -> LawError {
    LawError::Parse { input: input.to_string(), reason: reason.into() }
}

/// Splits `name(arg, arg, …)` into the name and trimmed arguments.
fn split_call(input: &str) -> Result<(String, Vec<String>), LawError> {
    let s = input.trim();
    match s.find('(') {
        None => Ok((s.to_ascii_lowercase(), Vec::new())),
        Some(open) => {
            if !s.ends_with(')') {
                return Err(parse_err(input, "missing closing parenthesis"));
            }
            let name = s[..open].trim().to_ascii_lowercase();
            let inner = &s[open + 1..s.len() - 1];
            let args = inner
                .split(',')
                .map(|a| a.trim().to_string())
                .filter(|a| !a.is_empty())
                .collect();
            Ok((name, args))
        }
    }
}

fn number(input: &str, text: &str) -> Result<f64, LawError> {
    text.trim().parse::<f64>().map_err(|_| parse_err(input, format!("`{text}` is not a number")))
}

/// Reads `key=value` arguments, accepting any of `aliases` per slot; a bare
/// value fills the next slot positionally.
fn keyed(input: &str, args: &[String], slots: &[&[&str]]) -> Result<Vec<f64>, LawError> {
    let mut out: Vec<Option<f64>> = vec![None; slots.len()];
    let mut next = 0;
    for arg in args {
        let slot = match arg.split_once('=') {
            Some((key, value)) => {
                let key = key.trim().to_ascii_lowercase();
                let idx = slots
                    .iter()
                    .position(|names| names.contains(&key.as_str()))
                    .ok_or_else(|| parse_err(input, format!("unknown argument `{key}`")))?;
                out[idx] = Some(number(input, value)?);
                idx
            }
            None => {
                if next >= slots.len() {
                    return Err(parse_err(input, "too many arguments"));
                }
                out[next] = Some(number(input, arg)?);
                next
            }
        };
        next = next.max(slot + 1);
    }
    out.into_iter()
        .zip(slots)
        .map(|(v, names)| v.ok_or_else(|| parse_err(input, format!("missing argument `{}`", names[0]))))
        .collect()
}

impl FromStr for WeightModel {
    type Err = LawError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let (name, args) = split_call(input)?;
        match name.as_str() {
            "constant" | "const" => {
                let v = keyed(input, &args, &[&["c", "value"]])?;
                WeightModel::constant(v[0])
            }
            "twopoint" | "two_point" | "two-point" => {
                let v = keyed(input, &args, &[&["a", "low"], &["b", "high"], &["p", "prob", "p_low"]])?;
                WeightModel::two_point(v[0], v[1], v[2])
            }
            "powerlaw" | "power_law" | "pareto" => {
                let v = keyed(input, &args, &[&["alpha"], &["xmin", "x_m", "xm"]])?;
                WeightModel::power_law(v[0], v[1])
            }
            "table" | "empirical" => {
                let atoms = args
                    .iter()
                    .map(|a| {
                        let (v, p) = a
                            .split_once(':')
                            .ok_or_else(|| parse_err(input, format!("table entry `{a}` is not value:prob")))?;
                        Ok((number(input, v)?, number(input, p)?))
                    })
                    .collect::<Result<Vec<_>, LawError>>()?;
                WeightModel::table(atoms)
            }
            other => Err(parse_err(input, format!("unknown weight model `{other}`"))),
        }
    }
}

impl FromStr for PhiSpec {
    type Err = LawError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let (name, args) = split_call(input)?;
        let phi = match name.as_str() {
            "sqrt" => PhiSpec::sqrt(),
            "identity" | "linear" => PhiSpec::identity(),
            "log" if args.is_empty() => PhiSpec::log(),
            "log" => PhiSpec::Log { scale: keyed(input, &args, &[&["c", "scale"]])?[0] },
            "pow" | "power" => PhiSpec::Power { beta: keyed(input, &args, &[&["beta"]])?[0] },
            "table" => PhiSpec::Table(args.iter().map(|a| number(input, a)).collect::<Result<_, _>>()?),
            other => return Err(parse_err(input, format!("unknown phi `{other}`"))),
        };
        phi.validate()?;
        Ok(phi)
    }
}

impl std::fmt::Display for WeightModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WeightModel::Constant(c) => write!(f, "constant(c={c})"),
            WeightModel::TwoPoint { low, high, p_low } => write!(f, "twopoint(a={low}, b={high}, p={p_low})"),
            WeightModel::PowerLaw { alpha, xmin } => write!(f, "powerlaw(alpha={alpha}, xmin={xmin})"),
            WeightModel::Table(atoms) => {
                let body: Vec<String> = atoms.iter().map(|(v, p)| format!("{v}:{p}")).collect();
                write!(f, "table({})", body.join(", "))
            }
        }
    }
}

impl std::fmt::Display for PhiSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PhiSpec::Power { beta } => write!(f, "pow(beta={beta})"),
            PhiSpec::Log { scale } => write!(f, "log(c={scale})"),
            PhiSpec::Table(values) => {
                let body: Vec<String> = values.iter().map(|v| v.to_string()).collect();
                write!(f, "table({})", body.join(", "))
            }
        }
    }
}
