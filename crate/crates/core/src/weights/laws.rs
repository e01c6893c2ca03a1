use rand::Rng;

use super::model::poisson_pmf;
use super::{LawError, PhiSpec, WeightModel};

/// Default `eps0` for [`select_k0`].
pub const DEFAULT_EPS0: f64 = 0.05;

/// Ratio of the geometric grid searched by [`kappa1`].
pub const KAPPA_GRID_RATIO: f64 = 1.01;

const K0_LIMIT: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    /// `E(w)`.
    pub mu: f64,
    /// `E(w²)/E(w)`, possibly infinite.
    pub nu: f64,
}

impl Moments {
    pub fn nu_is_finite(&self) -> bool {
        self.nu.is_finite()
    }

    pub fn is_supercritical(&self) -> bool {
        self.nu > 1.0
    }
}

pub fn mean_and_nu(model: &WeightModel) -> Result<Moments, LawError> {
    model.validate()?;
    let mu = model.mean();
    Ok(Moments { mu, nu: model.second_moment() / mu })
}

/// `p_k = E(e^{-w} w^k / k!)`.
pub fn pk_pmf(model: &WeightModel, k: u64) -> Result<f64, LawError> {
    model.validate()?;
    Ok(model.mixed_poisson(k, 0))
}

/// `g_k = E(e^{-w} w^{k+1} / k!) / E(w)`.
pub fn gk_pmf(model: &WeightModel, k: u64) -> Result<f64, LawError> {
    model.validate()?;
    Ok(model.mixed_poisson(k, 1) / model.mean())
}

/// `g_1, …, g_kmax` with index 0 holding `g_0`.
pub fn gk_table(model: &WeightModel, k_max: u64) -> Result<Vec<f64>, LawError> {
    model.validate()?;
    let mu = model.mean();
    Ok((0..=k_max).map(|k| model.mixed_poisson(k, 1) / mu).collect())
}

pub fn size_bias_sample<R: Rng + ?Sized>(model: &WeightModel, rng: &mut R) -> f64 {
    model.sample_size_biased(rng)
}

/// Offspring mass at `k` of the marked tree restricted to a source set `U`:
/// `Σ_{i∈U} P(Poi(w_i ℓ_U/ℓ_n) = k) · w_i/ℓ_U`.
pub fn gu_pmf(weights_u: &[f64], ell_n: f64, k: u64) -> Result<f64, LawError> {
    if weights_u.is_empty() {
        return Err(LawError::InvalidArgument("source set U is empty".into()));
    }
    let ell_u: f64 = weights_u.iter().sum();
    if ell_n < ell_u * (1.0 - 1e-12) {
        return Err(LawError::InvalidArgument(format!("ell_n = {ell_n} is below ell_U = {ell_u}")));
    }
    let ratio = ell_u / ell_n;
    Ok(weights_u.iter().map(|&w| poisson_pmf(w * ratio, k) * w).sum::<f64>() / ell_u)
}

/// The truncated law `g^{ε,K}`: `(1-ε) g_k` on `1..=K`, nothing above `K`,
/// remainder at zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationParams {
    epsilon: f64,
    cap: u64,
}

impl TruncationParams {
    /// `epsilon` is accepted on the closed interval `[0, 1]` so the two
    /// degenerate limits stay expressible.
    pub fn new(epsilon: f64, cap: u64) -> Result<Self, LawError> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(LawError::InvalidArgument(format!("epsilon {epsilon} outside [0, 1]")));
        }
        if cap == 0 {
            return Err(LawError::InvalidArgument("truncation cap K must be >= 1".into()));
        }
        Ok(TruncationParams { epsilon, cap })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }
}

pub fn g_trunc_pmf(model: &WeightModel, tp: &TruncationParams, k: u64) -> Result<f64, LawError> {
    let keep = 1.0 - tp.epsilon;
    if k > tp.cap {
        return Ok(0.0);
    }
    if k >= 1 {
        return Ok(keep * gk_pmf(model, k)?);
    }
    let table = gk_table(model, tp.cap)?;
    Ok(1.0 - keep * table[1..].iter().sum::<f64>())
}

/// `ν_{ε,K} = Σ_{k=1}^{K} k (1-ε) g_k`.
pub fn nu_eps_k(model: &WeightModel, tp: &TruncationParams) -> Result<f64, LawError> {
    let table = gk_table(model, tp.cap)?;
    let keep = 1.0 - tp.epsilon;
    Ok(keep * table.iter().enumerate().skip(1).map(|(k, g)| k as f64 * g).sum::<f64>())
}

/// Smallest `K` with `ν_{eps0,K} >= (1 + ν) / 2`.
pub fn select_k0(model: &WeightModel, eps0: f64) -> Result<u64, LawError> {
    let m = mean_and_nu(model)?;
    if !m.is_supercritical() {
        return Err(LawError::Subcritical { nu: m.nu });
    }
    if !m.nu_is_finite() {
        return Err(LawError::InfiniteNu);
    }
    let target = 0.5 * (1.0 + m.nu);
    let keep = 1.0 - eps0;
    if !(0.0..1.0).contains(&eps0) || keep * m.nu <= target {
        return Err(LawError::EpsilonTooLarge { eps0, reach: keep * m.nu, target });
    }
    let mu = model.mean();
    let mut acc = 0.0;
    for k in 1..=K0_LIMIT {
        acc += keep * k as f64 * model.mixed_poisson(k, 1) / mu;
        if acc >= target {
            return Ok(k);
        }
    }
    Err(LawError::NoK0Found { limit: K0_LIMIT })
}

/// A vertex budget that may exceed 64-bit range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Budget {
    Finite(u64),
    /// Larger than `2^63`.
    Overflow,
}

impl Budget {
    const LIMIT: u128 = 1u128 << 63;

    fn from_wide(v: Option<u128>) -> Self {
        match v {
            Some(v) if v <= Self::LIMIT => Budget::Finite(v as u64),
            _ => Budget::Overflow,
        }
    }

    pub fn allows(&self, consumed: u64) -> bool {
        match self {
            Budget::Finite(b) => consumed <= *b,
            Budget::Overflow => true,
        }
    }

    pub fn value(&self) -> Option<u64> {
        match self {
            Budget::Finite(b) => Some(*b),
            Budget::Overflow => None,
        }
    }

    /// `self · factor`, still flagged on overflow.
    pub fn times(&self, factor: u128) -> Budget {
        match self {
            Budget::Finite(b) => Budget::from_wide((*b as u128).checked_mul(factor)),
            Budget::Overflow => Budget::Overflow,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PsiValues {
    /// Search depth `⌊K / √φ(3K)⌋`.
    pub psi1: u64,
    /// Exploration budget `(3K)^(ψ₁+1)`.
    pub psi2: Budget,
    /// Experiment budget `K ψ₂`.
    pub psi3: Budget,
}

pub fn psi1(k: u64, phi: &PhiSpec) -> u64 {
    (k as f64 / phi.eval(3 * k).sqrt()).floor() as u64
}

pub fn psi_functions(k: u64, phi: &PhiSpec) -> Result<PsiValues, LawError> {
    if k == 0 {
        return Err(LawError::InvalidArgument("K must be >= 1".into()));
    }
    let p1 = psi1(k, phi);
    let wide = u32::try_from(p1 + 1).ok().and_then(|e| (3 * k as u128).checked_pow(e));
    let psi2 = Budget::from_wide(wide);
    Ok(PsiValues { psi1: p1, psi2, psi3: psi2.times(k as u128) })
}

/// `h(λ) = λ̄² / |ln λ̄|` with `λ̄ = min(λ, 1/2)`.
pub fn h_lambda(lambda: f64) -> Result<f64, LawError> {
    if !(lambda > 0.0) {
        return Err(LawError::InvalidArgument(format!("lambda {lambda} must be positive")));
    }
    let lb = lambda.min(0.5);
    Ok(lb * lb / lb.ln().abs())
}

#[derive(Debug, Clone, PartialEq)]
pub struct H3Row {
    pub k: u64,
    pub g_k: f64,
    /// `ln g_k + k/φ(k)`; the condition holds iff this is `>= 0`.
    pub log_score: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct H3Report {
    pub rows: Vec<H3Row>,
    pub all_pass: bool,
}

impl H3Report {
    pub fn failures(&self) -> impl Iterator<Item = u64> + '_ {
        self.rows.iter().filter(|r| !r.pass).map(|r| r.k)
    }
}

/// Checks `g_k e^{k/φ(k)} >= 1` for `1 <= k <= k_max`.
pub fn validate_h3(model: &WeightModel, phi: &PhiSpec, k_max: u64) -> Result<H3Report, LawError> {
    if k_max == 0 {
        return Err(LawError::InvalidArgument("k_max must be >= 1".into()));
    }
    phi.validate()?;
    let g = gk_table(model, k_max)?;
    let rows: Vec<H3Row> = (1..=k_max)
        .map(|k| {
            let g_k = g[k as usize];
            let log_score = if g_k > 0.0 { g_k.ln() + k as f64 / phi.eval(k) } else { f64::NEG_INFINITY };
            H3Row { k, g_k, log_score, pass: log_score >= 0.0 }
        })
        .collect();
    let all_pass = rows.iter().all(|r| r.pass);
    Ok(H3Report { rows, all_pass })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kappa1 {
    /// Tail threshold; the essential supremum for bounded laws.
    pub x: f64,
    pub kappa: f64,
}

/// Tail fraction for the weight-concentration bound.
///
/// Bounded laws return `μδ / (2 ess-sup)`. Unbounded laws search the grid
/// `xmin · 1.01^j` for the smallest `x` with `E(w 1(w > x)) <= μδ/2` and
/// return `P(w > x) / 2`.
pub fn kappa1(model: &WeightModel, delta: f64) -> Result<Kappa1, LawError> {
    model.validate()?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(LawError::InvalidArgument(format!("delta {delta} outside (0, 1)")));
    }
    let mu = model.mean();
    if let Some(sup) = model.ess_sup() {
        return Ok(Kappa1 { x: sup, kappa: mu * delta / (2.0 * sup) });
    }
    let WeightModel::PowerLaw { xmin, .. } = model else { unreachable!("only power laws are unbounded") };
    let target = mu * delta / 2.0;
    let mut j: i32 = 0;
    loop {
        let x = xmin * KAPPA_GRID_RATIO.powi(j);
        if model.tail_mean(x) <= target {
            return Ok(Kappa1 { x, kappa: model.tail_prob(x) / 2.0 });
        }
        j += 1;
    }
}
