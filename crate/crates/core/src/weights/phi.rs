use super::LawError;

/// An increasing function `φ: {1, 2, …} → (0, ∞)` with `φ(k) → ∞`.
#[derive(Debug, Clone, PartialEq)]
pub enum PhiSpec {
    /// `φ(k) = k^beta`, `beta ∈ (0, 1]`.
    Power { beta: f64 },
    /// `φ(k) = scale · ln(1 + k)`.
    Log { scale: f64 },
    /// `φ(k) = values[k-1]`; linearly extrapolated past the end.
    Table(Vec<f64>),
}

impl PhiSpec {
    pub fn sqrt() -> Self {
        PhiSpec::Power { beta: 0.5 }
    }

    pub fn identity() -> Self {
        PhiSpec::Power { beta: 1.0 }
    }

    pub fn log() -> Self {
        PhiSpec::Log { scale: 1.0 }
    }

    pub fn table(values: Vec<f64>) -> Result<Self, LawError> {
        let phi = PhiSpec::Table(values);
        phi.validate()?;
        Ok(phi)
    }

    pub fn validate(&self) -> Result<(), LawError> {
        match self {
            PhiSpec::Power { beta } if !(*beta > 0.0 && *beta <= 1.0) => {
                Err(LawError::InvalidArgument(format!("phi exponent {beta} outside (0, 1]")))
            }
            PhiSpec::Log { scale } if !(scale.is_finite() && *scale > 0.0) => {
                Err(LawError::InvalidArgument(format!("phi log scale {scale} must be positive")))
            }
            PhiSpec::Table(values) => {
                if values.len() < 2 {
                    return Err(LawError::InvalidArgument("phi table needs at least two values".into()));
                }
                if values[0] <= 0.0 || values.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(LawError::InvalidArgument(
                        "phi table must be positive and strictly increasing".into(),
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, k: u64) -> f64 {
        let kf = k as f64;
        match self {
            PhiSpec::Power { beta } => kf.powf(*beta),
            PhiSpec::Log { scale } => scale * kf.ln_1p(),
            PhiSpec::Table(values) => {
                let len = values.len() as u64;
                if (1..=len).contains(&k) {
                    values[(k - 1) as usize]
                } else if k == 0 {
                    values[0] - (values[1] - values[0])
                } else {
                    let slope = values[values.len() - 1] - values[values.len() - 2];
                    values[values.len() - 1] + slope * (k - len) as f64
                }
            }
        }
    }
}
