//! Small statistics toolkit: goodness of fit, two-sample tests, fits and
//! survival estimates.

use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

/// One-sample Kolmogorov–Smirnov distance between `samples` and `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_unstable_by(f64::total_cmp);
    let m = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i + 1) as f64 / m - f).max(f - i as f64 / m);
    }
    d
}

/// KS distance to the unit-mean exponential law.
pub fn ks_exp1(samples: &[f64]) -> f64 {
    ks_statistic(samples, |x| if x <= 0.0 { 0.0 } else { -(-x).exp_m1() })
}

/// Two-sample KS distance between empirical laws.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable_by(f64::total_cmp);
    b.sort_unstable_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Kolmogorov survival function `Q(t) = 2 Σ (-1)^(j-1) exp(-2 j² t²)`.
pub fn kolmogorov_q(t: f64) -> f64 {
    if t < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for j in 1..=100 {
        let term = (-2.0 * (j * j) as f64 * t * t).exp();
        sum += if j % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Asymptotic p-value of a KS distance `d` from `m` samples, with Stephens'
/// small-sample correction.
pub fn ks_pvalue(d: f64, m: usize) -> f64 {
    let s = (m as f64).sqrt();
    kolmogorov_q((s + 0.12 + 0.11 / s) * d)
}

/// Dvoretzky–Kiefer–Wolfowitz band half-width at confidence `1 - alpha`.
pub fn dkw_epsilon(m: usize, alpha: f64) -> f64 {
    ((2.0 / alpha).ln() / (2.0 * m as f64)).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Category boundaries after pooling, as the first original category of
    /// each pooled cell.
    pub cells: Vec<usize>,
}

fn chi_square_upper(statistic: f64, dof: usize) -> f64 {
    if dof == 0 {
        return 1.0;
    }
    match ChiSquared::new(dof as f64) {
        Ok(d) => d.sf(statistic),
        Err(_) => f64::NAN,
    }
}

/// Pools adjacent categories left to right until each pooled cell has
/// `weight >= min`; a short tail cell is folded into its predecessor.
fn pool_cells(weight: &[f64], min: f64) -> Vec<usize> {
    let mut starts = Vec::new();
    let mut acc = 0.0;
    let mut open = None;
    for (i, w) in weight.iter().enumerate() {
        if open.is_none() {
            open = Some(i);
        }
        acc += w;
        if acc >= min {
            starts.push(open.take().unwrap());
            acc = 0.0;
        }
    }
    if open.is_some() && starts.is_empty() {
        starts.push(0);
    }
    starts
}

fn pooled(values: &[f64], starts: &[usize]) -> Vec<f64> {
    let mut out = vec![0.0; starts.len()];
    let mut cell = 0;
    for (i, v) in values.iter().enumerate() {
        while cell + 1 < starts.len() && i >= starts[cell + 1] {
            cell += 1;
        }
        out[cell] += v;
    }
    out
}

/// Chi-square goodness of fit of `observed` counts to category probabilities
/// `probs`. Mass of `probs` missing from the listed categories is added to the
/// last one. Cells are pooled to an expected count of at least 5.
pub fn chi_square_gof(observed: &[u64], probs: &[f64]) -> ChiSquareResult {
    assert_eq!(observed.len(), probs.len());
    let total: u64 = observed.iter().sum();
    let mut p = probs.to_vec();
    let missing = 1.0 - p.iter().sum::<f64>();
    if let Some(last) = p.last_mut() {
        *last += missing.max(0.0);
    }
    let expected: Vec<f64> = p.iter().map(|q| q * total as f64).collect();
    let starts = pool_cells(&expected, 5.0);
    let e = pooled(&expected, &starts);
    let o = pooled(&observed.iter().map(|&c| c as f64).collect::<Vec<_>>(), &starts);
    let statistic: f64 = o.iter().zip(&e).filter(|(_, e)| **e > 0.0).map(|(o, e)| (o - e).powi(2) / e).sum();
    let dof = starts.len().saturating_sub(1);
    ChiSquareResult { statistic, dof, p_value: chi_square_upper(statistic, dof), cells: starts }
}

/// Chi-square test of homogeneity for two count vectors over the same
/// ordered categories. Cells are pooled until each has an expected count of at
/// least 5 on both sides.
pub fn chi_square_homogeneity(a: &[u64], b: &[u64]) -> ChiSquareResult {
    let len = a.len().max(b.len());
    let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0) as f64;
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    let n = na + nb;
    if na == 0.0 || nb == 0.0 {
        return ChiSquareResult { statistic: 0.0, dof: 0, p_value: 1.0, cells: vec![0] };
    }
    let smaller = na.min(nb) / n;
    let combined: Vec<f64> = (0..len).map(|i| (get(a, i) + get(b, i)) * smaller).collect();
    let starts = pool_cells(&combined, 5.0);
    let pa = pooled(&(0..len).map(|i| get(a, i)).collect::<Vec<_>>(), &starts);
    let pb = pooled(&(0..len).map(|i| get(b, i)).collect::<Vec<_>>(), &starts);
    let mut statistic = 0.0;
    for (x, y) in pa.iter().zip(&pb) {
        let row = x + y;
        if row == 0.0 {
            continue;
        }
        let ea = row * na / n;
        let eb = row * nb / n;
        statistic += (x - ea).powi(2) / ea + (y - eb).powi(2) / eb;
    }
    let dof = starts.len().saturating_sub(1);
    ChiSquareResult { statistic, dof, p_value: chi_square_upper(statistic, dof), cells: starts }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MannWhitney {
    /// `U` statistic of the first sample.
    pub u: f64,
    pub z: f64,
    /// One-sided p-value for "first sample stochastically larger".
    pub p_value: f64,
}

/// One-sided Mann–Whitney test that `x` tends to exceed `y`, normal
/// approximation with tie correction.
pub fn mann_whitney_greater(x: &[f64], y: &[f64]) -> MannWhitney {
    let (n1, n2) = (x.len() as f64, y.len() as f64);
    let mut all: Vec<(f64, bool)> = x.iter().map(|&v| (v, true)).chain(y.iter().map(|&v| (v, false))).collect();
    all.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
    let n = all.len();
    let mut rank_sum_x = 0.0;
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && all[j + 1].0 == all[i].0 {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        rank_sum_x += all[i..=j].iter().filter(|e| e.1).count() as f64 * rank;
        i = j + 1;
    }
    let u = rank_sum_x - n1 * (n1 + 1.0) / 2.0;
    let nt = n1 + n2;
    let var = n1 * n2 / 12.0 * ((nt + 1.0) - tie_term / (nt * (nt - 1.0)));
    let z = if var > 0.0 { (u - n1 * n2 / 2.0) / var.sqrt() } else { 0.0 };
    let p_value = Normal::standard().sf(z);
    MannWhitney { u, z, p_value }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// Ordinary least squares `y = intercept + slope · x`.
///
/// Returns `None` for fewer than two points or constant `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Option<LinearFit> {
    let m = x.len();
    if m < 2 || m != y.len() {
        return None;
    }
    let mx = x.iter().sum::<f64>() / m as f64;
    let my = y.iter().sum::<f64>() / m as f64;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(LinearFit { slope, intercept, r_squared, points: m })
}

/// Median of a nonempty sample (mean of the two middle values for even size).
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    let m = v.len();
    Some(if m % 2 == 1 { v[m / 2] } else { 0.5 * (v[m / 2 - 1] + v[m / 2]) })
}

pub fn mean_and_std_error(values: &[f64]) -> (f64, f64) {
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0).max(1.0);
    (mean, (var / m).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurvivalPoint {
    pub t: f64,
    pub survival: f64,
    /// Subjects still under observation just before `t`.
    pub at_risk: usize,
}

/// Kaplan–Meier estimate from `(time, censored)` observations.
///
/// The curve starts with `(0, 1, m)` and has one point per distinct event
/// time; a trailing point marks the last censoring time if it comes after the
/// last event.
pub fn kaplan_meier(obs: &[(f64, bool)]) -> Vec<SurvivalPoint> {
    let mut sorted = obs.to_vec();
    // Events before censorings at equal times.
    sorted.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut curve = vec![SurvivalPoint { t: 0.0, survival: 1.0, at_risk: sorted.len() }];
    let mut s = 1.0;
    let mut i = 0;
    while i < sorted.len() {
        let t = sorted[i].0;
        let at_risk = sorted.len() - i;
        let mut deaths = 0;
        let mut j = i;
        while j < sorted.len() && sorted[j].0 == t {
            if !sorted[j].1 {
                deaths += 1;
            }
            j += 1;
        }
        if deaths > 0 {
            s *= 1.0 - deaths as f64 / at_risk as f64;
            curve.push(SurvivalPoint { t, survival: s, at_risk });
        } else if j == sorted.len() && t > curve.last().map_or(0.0, |p| p.t) {
            curve.push(SurvivalPoint { t, survival: s, at_risk });
        }
        i = j;
    }
    curve
}

/// Evaluates a right-continuous step curve at `t`.
pub fn survival_at(curve: &[SurvivalPoint], t: f64) -> f64 {
    curve.iter().take_while(|p| p.t <= t).last().map_or(1.0, |p| p.survival)
}
