use super::{check_params, ContactError, InitialSet};
use crate::graph::Graph;

pub const ORACLE_MAX_N: usize = 20;

const TOLERANCE: f64 = 1e-10;
const MAX_SWEEPS: usize = 1_000_000;

/// Exact `E[τ]` from `init` by solving the first-passage equations over all
/// `2^n` infection states.
///
/// For a nonempty state `s` with `r(s) = |s| + λ Σ_{v∉s} c_v(s)`:
/// `E[s] = (1 + Σ_{v∈s} E[s∖v] + λ Σ_{v∉s} c_v(s) E[s∪v]) / r(s)`,
/// iterated with symmetric Gauss–Seidel sweeps until the largest relative
/// residual is below `1e-10`.
pub fn exact_mean_extinction(g: &Graph, lambda: f64, init: &InitialSet) -> Result<f64, ContactError> {
    check_params(lambda, 1.0)?;
    let n = g.n();
    if n > ORACLE_MAX_N {
        return Err(ContactError::TooLarge { n, max: ORACLE_MAX_N });
    }
    let start: usize = match init {
        InitialSet::Full => (1usize << n) - 1,
        InitialSet::Vertices(s) => s.iter().fold(0, |m, v| m | (1 << v)),
    };
    if start == 0 {
        return Ok(0.0);
    }
    let nbr: Vec<usize> =
        (0..n as u32).map(|v| g.neighbors(v).iter().fold(0usize, |m, &u| m | (1 << u))).collect();
    let states = 1usize << n;
    let mut e = vec![0.0f64; states];

    let update = |e: &mut [f64], s: usize| -> f64 {
        let mut rate = 0.0;
        let mut acc = 1.0;
        for (v, &nv) in nbr.iter().enumerate() {
            let bit = 1usize << v;
            if s & bit != 0 {
                rate += 1.0;
                acc += e[s ^ bit];
            } else {
                let c = (nv & s).count_ones();
                if c > 0 {
                    let r = lambda * c as f64;
                    rate += r;
                    acc += r * e[s | bit];
                }
            }
        }
        let new = acc / rate;
        let change = (new - e[s]).abs() / new;
        e[s] = new;
        change
    };

    for sweep in 0..MAX_SWEEPS {
        let mut worst: f64 = 0.0;
        for s in 1..states {
            worst = worst.max(update(&mut e, s));
        }
        for s in (1..states).rev() {
            worst = worst.max(update(&mut e, s));
        }
        if worst < TOLERANCE {
            return Ok(e[start]);
        }
        if sweep + 1 == MAX_SWEEPS {
            return Err(ContactError::NotConverged { sweeps: MAX_SWEEPS, residual: worst });
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let one = Graph::empty(1);
        assert!((exact_mean_extinction(&one, 1.0, &InitialSet::Full).unwrap() - 1.0).abs() < 1e-9);
        let two = Graph::empty(2);
        assert!((exact_mean_extinction(&two, 0.7, &InitialSet::Full).unwrap() - 1.5).abs() < 1e-9);
        let k2 = Graph::unweighted(2, &[(0, 1)]);
        assert!((exact_mean_extinction(&k2, 1.0, &InitialSet::Full).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn refuses_large_graphs() {
        let g = Graph::empty(21);
        assert_eq!(
            exact_mean_extinction(&g, 1.0, &InitialSet::Full),
            Err(ContactError::TooLarge { n: 21, max: 20 })
        );
    }
}
