//! Plug-in information measures (natural log) and the G² independence test.

use alloc::format;

use crate::dataset::{ContingencyTable, Dataset};
use crate::{Error, Result};

/// Outcome of a G² conditional-independence test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CiResult {
    pub statistic: f64,
    pub df: u64,
    pub p_value: f64,
    /// `p_value > alpha`
    pub independent: bool,
}

fn xlogx_over(n: u64, total: f64) -> f64 {
    if n == 0 {
        0.0
    } else {
        let p = n as f64 / total;
        -p * libm::log(p)
    }
}

/// Entropy of a variable's empirical distribution, in nats.
pub fn entropy(d: &Dataset, x: usize) -> f64 {
    let mut freq = alloc::vec![0u64; d.arity(x)];
    for &v in d.column(x) {
        freq[v as usize] += 1;
    }
    let n = d.n_rows() as f64;
    freq.iter().map(|&c| xlogx_over(c, n)).sum()
}

/// Mutual information between two variables, in nats.
pub fn mutual_information(d: &Dataset, x: usize, y: usize) -> f64 {
    conditional_mi(d, x, y, &[])
}

/// `Σ_z p(z) · MI(x; y | Z = z)`, in nats.
pub fn conditional_mi(d: &Dataset, x: usize, y: usize, z: &[usize]) -> f64 {
    table_cmi(&d.counts(x, y, z))
}

/// Conditional mutual information of a stratified table.
#[allow(clippy::needless_range_loop)]
pub fn table_cmi(t: &ContingencyTable) -> f64 {
    let (xa, ya) = (t.x_arity(), t.y_arity());
    let n = t.total_count() as f64;
    let mut row = alloc::vec![0u64; xa];
    let mut col = alloc::vec![0u64; ya];
    let mut sum = 0.0;
    for s in t.observed_strata() {
        row.iter_mut().for_each(|r| *r = 0);
        col.iter_mut().for_each(|c| *c = 0);
        let mut nz = 0u64;
        for i in 0..xa {
            for j in 0..ya {
                let c = s.counts[i * ya + j];
                row[i] += c;
                col[j] += c;
                nz += c;
            }
        }
        for i in 0..xa {
            for j in 0..ya {
                let c = s.counts[i * ya + j];
                if c > 0 {
                    let ratio = (c as f64 * nz as f64) / (row[i] as f64 * col[j] as f64);
                    sum += c as f64 * libm::log(ratio);
                }
            }
        }
    }
    // rounding can leave a tiny negative residue on exactly independent tables
    (sum / n).max(0.0)
}

/// Degrees of freedom with per-stratum adjustment: each observed stratum
/// contributes `(r_x' − 1)(r_y' − 1)` where `r'` counts levels with a nonzero
/// marginal in that stratum; the total is floored at 1.
pub fn adjusted_df(t: &ContingencyTable) -> u64 {
    let (xa, ya) = (t.x_arity(), t.y_arity());
    let mut df = 0u64;
    for s in t.observed_strata() {
        let rx = (0..xa)
            .filter(|&i| (0..ya).any(|j| s.counts[i * ya + j] > 0))
            .count() as u64;
        let ry = (0..ya)
            .filter(|&j| (0..xa).any(|i| s.counts[i * ya + j] > 0))
            .count() as u64;
        df += rx.saturating_sub(1) * ry.saturating_sub(1);
    }
    df.max(1)
}

/// G² test on a precomputed table.
pub fn g2_from_table(t: &ContingencyTable, alpha: f64) -> CiResult {
    let statistic = 2.0 * t.total_count() as f64 * table_cmi(t);
    let df = adjusted_df(t);
    let p_value = chi_square_sf(statistic, df);
    CiResult {
        statistic,
        df,
        p_value,
        independent: p_value > alpha,
    }
}

/// Likelihood-ratio (G²) test of `x ⊥ y | z` at level `alpha`.
pub fn g2_test(d: &Dataset, x: usize, y: usize, z: &[usize], alpha: f64) -> Result<CiResult> {
    check_alpha(alpha)?;
    Ok(g2_from_table(&d.counts(x, y, z), alpha))
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )))
    }
}

/// Survival function of the chi-square distribution with `df` degrees of
/// freedom.
pub fn chi_square_sf(statistic: f64, df: u64) -> f64 {
    if statistic <= 0.0 {
        return 1.0;
    }
    regularized_gamma_q(df as f64 / 2.0, statistic / 2.0).clamp(0.0, 1.0)
}

const EPS: f64 = 1e-15;
const TINY: f64 = 1e-300;
const MAX_ITER: usize = 10_000;

/// Upper regularized incomplete gamma function `Q(a, x) = Γ(a, x) / Γ(a)`.
pub fn regularized_gamma_q(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        1.0
    } else if x < a + 1.0 {
        1.0 - gamma_p_series(a, x)
    } else {
        gamma_q_continued_fraction(a, x)
    }
}

fn prefactor(a: f64, x: f64) -> f64 {
    libm::exp(-x + a * libm::log(x) - libm::lgamma(a))
}

fn gamma_p_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    sum * prefactor(a, x)
}

// modified Lentz evaluation
fn gamma_q_continued_fraction(a: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    prefactor(a, x) * h
}
