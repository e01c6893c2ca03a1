//! Adaptive Gauss–Kronrod quadrature (15-point Kronrod / 7-point Gauss pair).

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: u32 = 60;

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: (f64, f64), tol: f64, depth: u32) -> f64 {
    let (value, err) = whole;
    if err <= tol || depth >= MAX_DEPTH || (b - a).abs() < 1e-14 * a.abs().max(1.0) {
        return value;
    }
    let mid = 0.5 * (a + b);
    let left = kronrod(f, a, mid);
    let right = kronrod(f, mid, b);
    adapt(f, a, mid, left, 0.5 * tol, depth + 1) + adapt(f, mid, b, right, 0.5 * tol, depth + 1)
}

/// Integrates `f` over `[a, b]` to relative tolerance `rtol` (with an
/// absolute floor of `atol`).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rtol: f64, atol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let whole = kronrod(&f, a, b);
    let tol = (rtol * whole.0.abs()).max(atol);
    adapt(&f, a, b, whole, tol, 0)
}

/// Integrates `exp(log_f)` over `[lo, ∞)` for a unimodal log-integrand.
///
/// `mode` is the maximiser of `log_f` on `[lo, ∞)`. The upper limit is pushed
/// out until the integrand drops below `1e-16` of its peak.
pub fn integrate_unimodal_tail<F: Fn(f64) -> f64>(log_f: F, lo: f64, mode: f64, rtol: f64) -> f64 {
    let mode = mode.max(lo);
    let peak = log_f(mode);
    if !peak.is_finite() {
        return 0.0;
    }
    let cutoff = peak + (1e-16f64).ln();
    let mut step = mode.sqrt().max(1.0);
    let mut hi = mode + step;
    while log_f(hi) > cutoff {
        step *= 2.0;
        hi = mode + step;
    }
    let f = |w: f64| (log_f(w) - peak).exp();
    let scale = peak.exp();
    let mut breaks = vec![lo];
    if mode > lo {
        breaks.push(mode);
    }
    // Geometric breakpoints past the mode keep each panel well resolved.
    let mut width = mode.sqrt().max(1.0);
    let mut x = mode;
    while x + width < hi {
        x += width;
        breaks.push(x);
        width *= 2.0;
    }
    breaks.push(hi);
    let mut total = 0.0;
    for pair in breaks.windows(2) {
        total += integrate(f, pair[0], pair[1], rtol * 1e-2, 1e-300);
    }
    total * scale
}
