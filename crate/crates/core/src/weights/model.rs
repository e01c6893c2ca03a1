use rand::Rng;

use super::quad;
use super::LawError;
use crate::rng::open_unit;

/// Relative tolerance for every power-law expectation.
pub const QUAD_RTOL: f64 = 1e-10;

/// Law of a vertex weight `w`. Every kind is supported on `[1, ∞)`.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightModel {
    Constant(f64),
    /// `w = low` with probability `p_low`, else `w = high`.
    TwoPoint { low: f64, high: f64, p_low: f64 },
    /// Pareto density `(alpha-1) xmin^(alpha-1) w^(-alpha)` on `[xmin, ∞)`.
    PowerLaw { alpha: f64, xmin: f64 },
    /// Finite list of `(value, probability)` atoms.
    Table(Vec<(f64, f64)>),
}

impl WeightModel {
    pub fn constant(c: f64) -> Result<Self, LawError> {
        let m = WeightModel::Constant(c);
        m.validate()?;
        Ok(m)
    }

    pub fn two_point(low: f64, high: f64, p_low: f64) -> Result<Self, LawError> {
        let m = WeightModel::TwoPoint { low, high, p_low };
        m.validate()?;
        Ok(m)
    }

    pub fn power_law(alpha: f64, xmin: f64) -> Result<Self, LawError> {
        let m = WeightModel::PowerLaw { alpha, xmin };
        m.validate()?;
        Ok(m)
    }

    pub fn table(atoms: Vec<(f64, f64)>) -> Result<Self, LawError> {
        let m = WeightModel::Table(atoms);
        m.validate()?;
        Ok(m)
    }

    /// Checks support in `[1, ∞)`, finite mean and normalised probabilities.
    pub fn validate(&self) -> Result<(), LawError> {
        let bad = |msg: String| Err(LawError::InvalidModel(msg));
        match self {
            WeightModel::Constant(c) => {
                if !(c.is_finite() && *c >= 1.0) {
                    return bad(format!("constant weight {c} must be finite and >= 1"));
                }
            }
            WeightModel::TwoPoint { low, high, p_low } => {
                if !(low.is_finite() && high.is_finite() && *low >= 1.0 && *high >= 1.0) {
                    return bad(format!("two-point atoms ({low}, {high}) must be finite and >= 1"));
                }
                if !(0.0..=1.0).contains(p_low) {
                    return bad(format!("two-point probability {p_low} outside [0, 1]"));
                }
            }
            WeightModel::PowerLaw { alpha, xmin } => {
                if !(xmin.is_finite() && *xmin >= 1.0) {
                    return bad(format!("power-law xmin {xmin} must be finite and >= 1"));
                }
                if !alpha.is_finite() || *alpha <= 2.0 {
                    return Err(LawError::InfiniteMean { alpha: *alpha });
                }
            }
            WeightModel::Table(atoms) => {
                if atoms.is_empty() {
                    return bad("empty weight table".into());
                }
                let mut total = 0.0;
                for &(v, p) in atoms {
                    if !(v.is_finite() && v >= 1.0) {
                        return bad(format!("table value {v} must be finite and >= 1"));
                    }
                    if !(p.is_finite() && p >= 0.0) {
                        return bad(format!("table probability {p} must be >= 0"));
                    }
                    total += p;
                }
                if (total - 1.0).abs() > 1e-9 {
                    return bad(format!("table probabilities sum to {total}, not 1"));
                }
            }
        }
        Ok(())
    }

    /// Atoms of a discrete law, `None` for the power law.
    pub fn atoms(&self) -> Option<Vec<(f64, f64)>> {
        match self {
            WeightModel::Constant(c) => Some(vec![(*c, 1.0)]),
            WeightModel::TwoPoint { low, high, p_low } => Some(vec![(*low, *p_low), (*high, 1.0 - p_low)]),
            WeightModel::Table(atoms) => Some(atoms.clone()),
            WeightModel::PowerLaw { .. } => None,
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            WeightModel::PowerLaw { alpha, xmin } => (alpha - 1.0) / (alpha - 2.0) * xmin,
            _ => self.atoms().unwrap().iter().map(|&(v, p)| v * p).sum(),
        }
    }

    /// `E(w²)`, infinite for power laws with `alpha <= 3`.
    pub fn second_moment(&self) -> f64 {
        match self {
            WeightModel::PowerLaw { alpha, xmin } => {
                if *alpha <= 3.0 {
                    f64::INFINITY
                } else {
                    (alpha - 1.0) / (alpha - 3.0) * xmin * xmin
                }
            }
            _ => self.atoms().unwrap().iter().map(|&(v, p)| v * v * p).sum(),
        }
    }

    /// Essential supremum; `None` when unbounded.
    pub fn ess_sup(&self) -> Option<f64> {
        match self {
            WeightModel::PowerLaw { .. } => None,
            _ => self
                .atoms()
                .unwrap()
                .iter()
                .filter(|&&(_, p)| p > 0.0)
                .map(|&(v, _)| v)
                .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v)))),
        }
    }

    /// `P(w > x)`.
    pub fn tail_prob(&self, x: f64) -> f64 {
        match self {
            WeightModel::PowerLaw { alpha, xmin } => {
                if x < *xmin {
                    1.0
                } else {
                    (x / xmin).powf(1.0 - alpha)
                }
            }
            _ => self.atoms().unwrap().iter().filter(|&&(v, _)| v > x).map(|&(_, p)| p).sum(),
        }
    }

    /// `E(w · 1(w > x))`.
    pub fn tail_mean(&self, x: f64) -> f64 {
        match self {
            WeightModel::PowerLaw { alpha, xmin } => {
                let x = x.max(*xmin);
                (alpha - 1.0) / (alpha - 2.0) * xmin.powf(alpha - 1.0) * x.powf(2.0 - alpha)
            }
            _ => self.atoms().unwrap().iter().filter(|&&(v, _)| v > x).map(|&(v, p)| v * p).sum(),
        }
    }

    /// `E(e^{-w} w^{k+shift} / k!)`: the mixed-Poisson mass at `k`, with
    /// `shift = 1` giving the size-biased numerator.
    pub fn mixed_poisson(&self, k: u64, shift: u32) -> f64 {
        let ln_kfact = ln_factorial(k);
        match self {
            WeightModel::PowerLaw { alpha, xmin } => {
                let s = k as f64 + shift as f64 - alpha;
                let ln_c = (alpha - 1.0).ln() + (alpha - 1.0) * xmin.ln() - ln_kfact;
                let log_f = move |w: f64| ln_c - w + s * w.ln();
                quad::integrate_unimodal_tail(log_f, *xmin, s, QUAD_RTOL)
            }
            _ => self
                .atoms()
                .unwrap()
                .iter()
                .filter(|&&(_, p)| p > 0.0)
                .map(|&(v, p)| p * (-v + (k as f64 + shift as f64) * v.ln() - ln_kfact).exp())
                .sum(),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            WeightModel::Constant(c) => *c,
            WeightModel::PowerLaw { alpha, xmin } => xmin * open_unit(rng).powf(-1.0 / (alpha - 1.0)),
            _ => sample_atoms(&self.atoms().unwrap(), rng),
        }
    }

    /// Draw from the size-biased law with density `w f(w) / E(w)`.
    pub fn sample_size_biased<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            WeightModel::Constant(c) => *c,
            WeightModel::PowerLaw { alpha, xmin } => xmin * open_unit(rng).powf(-1.0 / (alpha - 2.0)),
            _ => sample_atoms(&self.size_biased_atoms().unwrap(), rng),
        }
    }

    /// Atoms of the size-biased law for discrete kinds.
    pub fn size_biased_atoms(&self) -> Option<Vec<(f64, f64)>> {
        let atoms = self.atoms()?;
        let mu = self.mean();
        Some(atoms.into_iter().map(|(v, p)| (v, v * p / mu)).collect())
    }
}

fn sample_atoms<R: Rng + ?Sized>(atoms: &[(f64, f64)], rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for &(v, p) in atoms {
        acc += p;
        if u < acc {
            return v;
        }
    }
    atoms.iter().rev().find(|a| a.1 > 0.0).map_or(atoms[0].0, |a| a.0)
}

pub(crate) fn ln_factorial(k: u64) -> f64 {
    statrs::function::factorial::ln_factorial(k)
}

/// `P(Poi(mean) = k)`, evaluated in log space.
pub fn poisson_pmf(mean: f64, k: u64) -> f64 {
    if mean <= 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    (k as f64 * mean.ln() - mean - ln_factorial(k)).exp()
}
