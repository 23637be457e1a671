//! Nonparametric statistics shared by the simulation experiments and the
//! empirical log pipeline: Wasserstein-1 distance, rank tests with
//! mid-rank tie handling, two-sample KS, simple OLS and Spearman
//! correlation.
//!
//! Production p-values come from normal / chi-square approximations with
//! tie correction and continuity correction; exact enumeration exists
//! only as a test oracle. p-values are omitted below the documented
//! minimum sample sizes rather than reported as noise.

pub mod special;

use serde::Serialize;

use crate::error::{Error, Result};
pub use special::{chi2_sf, normal_cdf};

/// Minimum per-group size before a Mann-Whitney p-value is reported.
pub const MWU_MIN_GROUP: usize = 5;
/// Minimum count of nonzero differences before a Wilcoxon p-value is reported.
pub const WILCOXON_MIN_NONZERO: usize = 5;

/// Outcome of one hypothesis test.
#[derive(Debug, Clone, Serialize)]
pub struct TestResult {
    pub method: &'static str,
    pub statistic: f64,
    /// Absent when the sample is below the method's documented minimum.
    pub p_value: Option<f64>,
    /// Sample sizes the statistic was computed from.
    pub n: Vec<usize>,
}

/// Simple least-squares fit of `y` on `x`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OlsFit {
    pub slope: f64,
    pub intercept: f64,
    pub stderr_slope: f64,
    pub r_squared: f64,
    pub n: usize,
}

/// Alternative hypothesis for the signed-rank test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alternative {
    TwoSided,
    /// Differences tend to be positive.
    Greater,
}

fn ensure_finite(name: &str, xs: &[f64]) -> Result<()> {
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid(format!("{name} contains non-finite values")));
    }
    Ok(())
}

/// Mid-ranks (1-based, ties averaged) of `values`, plus the size of every
/// tie group with more than one member.
pub fn midranks(values: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite values"));
    let mut ranks = vec![0.0; values.len()];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j + 1) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = rank;
        }
        if j - i > 1 {
            ties.push(j - i);
        }
        i = j;
    }
    (ranks, ties)
}

/// Exact 1-D earth-mover distance between two empirical distributions,
/// computed as the integral of |F_a - F_b| over the merged support.
pub fn wasserstein1(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid("wasserstein1 requires nonempty samples"));
    }
    ensure_finite("sample a", a)?;
    ensure_finite("sample b", b)?;
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    sa.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());
    sb.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());
    let mut support: Vec<f64> = sa.iter().chain(sb.iter()).copied().collect();
    support.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());
    support.dedup();
    let (na, nb) = (sa.len() as f64, sb.len() as f64);
    let (mut ia, mut ib) = (0usize, 0usize);
    let mut dist = 0.0;
    for w in support.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        while ia < sa.len() && sa[ia] <= x0 {
            ia += 1;
        }
        while ib < sb.len() && sb[ib] <= x0 {
            ib += 1;
        }
        dist += (ia as f64 / na - ib as f64 / nb).abs() * (x1 - x0);
    }
    Ok(dist)
}

/// Two-sided Mann-Whitney U test.
///
/// The statistic is reported for sample `a` as the count of pairs with
/// `a_i < b_j` plus half the cross-group ties. The p-value uses the
/// normal approximation with tie-corrected variance and continuity
/// correction, and is omitted when either group has fewer than
/// [`MWU_MIN_GROUP`] observations.
pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> Result<TestResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid("mann-whitney requires nonempty samples"));
    }
    ensure_finite("sample a", a)?;
    ensure_finite("sample b", b)?;
    let (n1, n2) = (a.len(), b.len());
    let pooled: Vec<f64> = a.iter().chain(b.iter()).copied().collect();
    let (ranks, ties) = midranks(&pooled);
    let rank_sum_b: f64 = ranks[n1..].iter().sum();
    let u = rank_sum_b - (n2 * (n2 + 1)) as f64 / 2.0;
    let p_value = if n1.min(n2) >= MWU_MIN_GROUP {
        Some(mwu_normal_p(u, n1, n2, &ties))
    } else {
        None
    };
    Ok(TestResult {
        method: "mann-whitney-u",
        statistic: u,
        p_value,
        n: vec![n1, n2],
    })
}

fn mwu_normal_p(u: f64, n1: usize, n2: usize, ties: &[usize]) -> f64 {
    let (n1f, n2f) = (n1 as f64, n2 as f64);
    let nf = n1f + n2f;
    let tie_term: f64 = ties.iter().map(|&t| (t * t * t - t) as f64).sum();
    let variance = n1f * n2f / 12.0 * ((nf + 1.0) - tie_term / (nf * (nf - 1.0)));
    if variance <= 0.0 {
        return 1.0; // every pooled observation tied
    }
    let mean = n1f * n2f / 2.0;
    let z = ((u - mean).abs() - 0.5).max(0.0) / variance.sqrt();
    (2.0 * special::normal_sf(z)).min(1.0)
}

/// Kruskal-Wallis H test across two or more groups, chi-square p-value
/// with `groups - 1` degrees of freedom and mid-rank tie correction.
pub fn kruskal_wallis(groups: &[Vec<f64>]) -> Result<TestResult> {
    if groups.len() < 2 || groups.iter().any(|g| g.is_empty()) {
        return Err(Error::invalid(
            "kruskal-wallis requires at least two nonempty groups",
        ));
    }
    for g in groups {
        ensure_finite("group", g)?;
    }
    let pooled: Vec<f64> = groups.iter().flatten().copied().collect();
    let (ranks, ties) = midranks(&pooled);
    let n = pooled.len() as f64;
    let mut h = 0.0;
    let mut offset = 0;
    for g in groups {
        let r: f64 = ranks[offset..offset + g.len()].iter().sum();
        h += r * r / g.len() as f64;
        offset += g.len();
    }
    h = 12.0 / (n * (n + 1.0)) * h - 3.0 * (n + 1.0);
    let tie_term: f64 = ties.iter().map(|&t| (t * t * t - t) as f64).sum();
    let correction = 1.0 - tie_term / (n * n * n - n);
    let (statistic, p_value) = if correction <= 0.0 {
        (0.0, 1.0) // all observations identical
    } else {
        let h = h / correction;
        (h, chi2_sf(h, groups.len() - 1)?)
    };
    Ok(TestResult {
        method: "kruskal-wallis",
        statistic,
        p_value: Some(p_value),
        n: groups.iter().map(Vec::len).collect(),
    })
}

/// Wilcoxon signed-rank test on paired differences.
///
/// Zero differences are dropped; the statistic is the smaller of the
/// positive and negative mid-rank sums. The p-value uses the normal
/// approximation with tie correction and continuity correction and is
/// omitted when fewer than [`WILCOXON_MIN_NONZERO`] nonzero differences
/// remain.
pub fn wilcoxon_signed_rank(diffs: &[f64], alternative: Alternative) -> Result<TestResult> {
    ensure_finite("differences", diffs)?;
    let nonzero: Vec<f64> = diffs.iter().copied().filter(|d| *d != 0.0).collect();
    if nonzero.is_empty() {
        return Err(Error::degenerate("all paired differences are zero"));
    }
    let m = nonzero.len();
    let abs: Vec<f64> = nonzero.iter().map(|d| d.abs()).collect();
    let (ranks, ties) = midranks(&abs);
    let w_plus: f64 = nonzero
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| *r)
        .sum();
    let total = (m * (m + 1)) as f64 / 2.0;
    let w_minus = total - w_plus;
    let statistic = w_plus.min(w_minus);
    let p_value = if m >= WILCOXON_MIN_NONZERO {
        Some(wilcoxon_normal_p(w_plus, m, &ties, alternative))
    } else {
        None
    };
    Ok(TestResult {
        method: "wilcoxon-signed-rank",
        statistic,
        p_value,
        n: vec![m],
    })
}

fn wilcoxon_normal_p(w_plus: f64, m: usize, ties: &[usize], alternative: Alternative) -> f64 {
    let mf = m as f64;
    let mean = mf * (mf + 1.0) / 4.0;
    let tie_term: f64 = ties.iter().map(|&t| (t * t * t - t) as f64).sum();
    let variance = mf * (mf + 1.0) * (2.0 * mf + 1.0) / 24.0 - tie_term / 48.0;
    if variance <= 0.0 {
        return 1.0;
    }
    let sd = variance.sqrt();
    match alternative {
        Alternative::TwoSided => {
            let z = ((w_plus - mean).abs() - 0.5).max(0.0) / sd;
            (2.0 * special::normal_sf(z)).min(1.0)
        }
        Alternative::Greater => {
            let z = (w_plus - mean - 0.5) / sd;
            special::normal_sf(z)
        }
    }
}

/// Two-sample Kolmogorov-Smirnov test. D is the supremum CDF distance;
/// the p-value comes from the asymptotic Kolmogorov distribution with
/// effective size `|a||b| / (|a| + |b|)`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<TestResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid("ks test requires nonempty samples"));
    }
    ensure_finite("sample a", a)?;
    ensure_finite("sample b", b)?;
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    sa.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());
    sb.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());
    let (na, nb) = (sa.len() as f64, sb.len() as f64);
    let (mut ia, mut ib) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while ia < sa.len() || ib < sb.len() {
        let x = match (sa.get(ia), sb.get(ib)) {
            (Some(&xa), Some(&xb)) => xa.min(xb),
            (Some(&xa), None) => xa,
            (None, Some(&xb)) => xb,
            (None, None) => break,
        };
        while ia < sa.len() && sa[ia] <= x {
            ia += 1;
        }
        while ib < sb.len() && sb[ib] <= x {
            ib += 1;
        }
        d = d.max((ia as f64 / na - ib as f64 / nb).abs());
    }
    let effective = na * nb / (na + nb);
    let p = special::kolmogorov_sf(effective.sqrt() * d);
    Ok(TestResult {
        method: "ks-two-sample",
        statistic: d,
        p_value: Some(p),
        n: vec![sa.len(), sb.len()],
    })
}

/// Simple least-squares regression of `y` on `x` with slope standard
/// error and R-squared.
pub fn ols_simple(x: &[f64], y: &[f64]) -> Result<OlsFit> {
    if x.len() != y.len() {
        return Err(Error::invalid(format!(
            "predictor and response lengths differ: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::invalid("regression requires at least two points"));
    }
    ensure_finite("predictor", x)?;
    ensure_finite("response", y)?;
    let n = x.len();
    let nf = n as f64;
    let mean_x = x.iter().sum::<f64>() / nf;
    let mean_y = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mean_x) * (v - mean_x)).sum();
    if sxx == 0.0 {
        return Err(Error::degenerate("constant predictor"));
    }
    let sxy: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| (xi - mean_x) * (yi - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let sse: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| {
            let resid = yi - (intercept + slope * xi);
            resid * resid
        })
        .sum();
    let sst: f64 = y.iter().map(|v| (v - mean_y) * (v - mean_y)).sum();
    let stderr_slope = if n > 2 {
        (sse / ((nf - 2.0) * sxx)).sqrt()
    } else {
        0.0
    };
    let r_squared = if sst == 0.0 {
        0.0
    } else {
        (1.0 - sse / sst).clamp(0.0, 1.0)
    };
    Ok(OlsFit {
        slope,
        intercept,
        stderr_slope,
        r_squared,
        n,
    })
}

/// Spearman rank correlation with a Student-t p-value approximation on
/// `n - 2` degrees of freedom.
pub fn spearman_rho(x: &[f64], y: &[f64]) -> Result<TestResult> {
    if x.len() != y.len() {
        return Err(Error::invalid("spearman requires equal-length samples"));
    }
    if x.len() < 3 {
        return Err(Error::invalid("spearman requires at least three pairs"));
    }
    ensure_finite("x", x)?;
    ensure_finite("y", y)?;
    let (rx, _) = midranks(x);
    let (ry, _) = midranks(y);
    let n = x.len() as f64;
    let mean = (n + 1.0) / 2.0;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mean) * (b - mean);
        sxx += (a - mean) * (a - mean);
        syy += (b - mean) * (b - mean);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::degenerate("constant ranks"));
    }
    let rho = sxy / (sxx * syy).sqrt();
    let p = if rho.abs() >= 1.0 {
        0.0
    } else {
        let df = x.len() - 2;
        let t = rho.abs() * (df as f64 / (1.0 - rho * rho)).sqrt();
        (2.0 * special::student_t_sf(t, df)).min(1.0)
    };
    Ok(TestResult {
        method: "spearman-rho",
        statistic: rho,
        p_value: Some(p),
        n: vec![x.len()],
    })
}

/// Arithmetic mean; 0 for an empty slice.
pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

/// Population variance (normalized by n); 0 for an empty slice.
pub fn population_variance(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (normalized by n - 1); 0 when fewer than two values.
pub fn sample_std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    // p-value references cross-checked against scipy 1.15
    // (mannwhitneyu method='asymptotic', wilcoxon method='approx' with
    // correction, ks_2samp method='asymp', spearmanr).

    #[test]
    fn wasserstein_basics() {
        assert_eq!(wasserstein1(&[0.5, 0.1], &[0.5, 0.1]).unwrap(), 0.0);
        assert!((wasserstein1(&[0.0], &[1.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((wasserstein1(&[0.0, 0.0], &[0.0, 1.0]).unwrap() - 0.5).abs() < 1e-15);
        assert!((wasserstein1(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap() - 3.0).abs() < 1e-12);
        let d = wasserstein1(&[0.1, 0.4, 0.9, 0.2], &[0.3, 0.3, 0.8]).unwrap();
        assert!((d - 0.15).abs() < 1e-12);
        assert!(wasserstein1(&[], &[1.0]).is_err());
    }

    #[test]
    fn mwu_pair_count_convention() {
        let r = mann_whitney_u(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap();
        assert_eq!(r.statistic, 9.0);
        assert!(r.p_value.is_none(), "groups of three are underpowered");
    }

    #[test]
    fn mwu_symmetry_on_identical_samples() {
        let a = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let r = mann_whitney_u(&a, &a).unwrap();
        assert_eq!(r.statistic, 18.0);
        assert!((r.p_value.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mwu_matches_scipy_asymptotic() {
        let a: Vec<f64> = (1..=10).map(|v| v as f64).collect();
        let b: Vec<f64> = (0..10).map(|v| 3.5 + v as f64).collect();
        let r = mann_whitney_u(&a, &b).unwrap();
        assert_eq!(r.statistic, 72.0);
        assert!((r.p_value.unwrap() - 0.104_109_889_660_226_81).abs() < 1e-12);

        let a = [1.0, 1.0, 2.0, 2.0, 3.0, 3.0];
        let b = [2.0, 2.0, 3.0, 3.0, 4.0, 4.0];
        let r = mann_whitney_u(&a, &b).unwrap();
        assert_eq!(r.statistic, 28.0);
        assert!((r.p_value.unwrap() - 0.113_345_509_219_525_84).abs() < 1e-12);
    }

    #[test]
    fn mwu_u_sums_to_product_without_ties() {
        let a = [0.3, 1.7, 2.9, 5.2];
        let b = [0.9, 2.1, 3.3];
        let ua = mann_whitney_u(&a, &b).unwrap().statistic;
        let ub = mann_whitney_u(&b, &a).unwrap().statistic;
        assert!((ua + ub - 12.0).abs() < 1e-12);
    }

    #[test]
    fn kruskal_wallis_hand_example() {
        let groups = vec![
            vec![1.0, 2.0, 3.0],
            vec![4.0, 5.0, 6.0],
            vec![7.0, 8.0, 9.0],
        ];
        let r = kruskal_wallis(&groups).unwrap();
        assert!((r.statistic - 7.2).abs() < 1e-12);
        assert!((r.p_value.unwrap() - (-3.6f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn kruskal_wallis_degenerate_all_equal() {
        let groups = vec![vec![2.0, 2.0], vec![2.0, 2.0]];
        let r = kruskal_wallis(&groups).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, Some(1.0));
    }

    #[test]
    fn kruskal_wallis_rejects_fewer_than_two_groups() {
        assert!(kruskal_wallis(&[vec![1.0]]).is_err());
        assert!(kruskal_wallis(&[vec![1.0], vec![]]).is_err());
    }

    #[test]
    fn wilcoxon_all_positive() {
        let r = wilcoxon_signed_rank(&[1.0, 2.0, 3.0], Alternative::TwoSided).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!(r.p_value.is_none());
    }

    #[test]
    fn wilcoxon_perfect_symmetry() {
        let r = wilcoxon_signed_rank(&[-1.0, 1.0], Alternative::TwoSided).unwrap();
        assert_eq!(r.statistic, 1.5);
        assert!(r.p_value.is_none());
    }

    #[test]
    fn wilcoxon_all_zero_is_degenerate() {
        assert!(matches!(
            wilcoxon_signed_rank(&[0.0, 0.0], Alternative::TwoSided),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn wilcoxon_matches_scipy_approx() {
        let d = [1.0, -2.0, 3.0, -4.0, 5.0, 6.0, 7.0, -8.0, 9.0];
        let r2 = wilcoxon_signed_rank(&d, Alternative::TwoSided).unwrap();
        assert_eq!(r2.statistic, 14.0);
        assert!((r2.p_value.unwrap() - 0.343_252_562_436_031_08).abs() < 1e-12);
        let rg = wilcoxon_signed_rank(&d, Alternative::Greater).unwrap();
        assert!((rg.p_value.unwrap() - 0.171_626_281_218_015_54).abs() < 1e-12);

        // ties in |d|
        let d = [1.0, 1.0, -1.0, 2.0, 2.0, -2.0, 3.0];
        let r = wilcoxon_signed_rank(&d, Alternative::TwoSided).unwrap();
        assert_eq!(r.statistic, 7.0);
        assert!((r.p_value.unwrap() - 0.264_961_510_249_061_45).abs() < 1e-12);

        let d = [1.0, 2.0, 3.0, 4.0, 5.0];
        let rg = wilcoxon_signed_rank(&d, Alternative::Greater).unwrap();
        assert!((rg.p_value.unwrap() - 0.029_529_114_545_268_353).abs() < 1e-12);
    }

    #[test]
    fn ks_identical_and_disjoint() {
        let a = [1.0, 2.0, 3.0];
        let r = ks_two_sample(&a, &a).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!((r.p_value.unwrap() - 1.0).abs() < 1e-12);
        let r = ks_two_sample(&[0.0, 0.1], &[5.0, 6.0]).unwrap();
        assert_eq!(r.statistic, 1.0);
    }

    #[test]
    fn ks_hand_example_and_scipy_reference() {
        let r = ks_two_sample(&[1.0, 2.0, 3.0, 4.0], &[1.5, 2.5, 3.5, 4.5]).unwrap();
        assert!((r.statistic - 0.25).abs() < 1e-15);

        // p reference: scipy kstwobign.sf(sqrt(n1*n2/(n1+n2)) * D), the plain
        // asymptotic Kolmogorov form used here.
        let a: Vec<f64> = (0..50).map(|i| i as f64 / 49.0).collect();
        let b: Vec<f64> = (0..60).map(|i| 0.2 + i as f64 / 59.0).collect();
        let r = ks_two_sample(&a, &b).unwrap();
        assert!((r.statistic - 0.213_333_333_333_333_37).abs() < 1e-12);
        assert!((r.p_value.unwrap() - 0.166_983_502_470_868_27).abs() < 1e-10);
    }

    #[test]
    fn ols_exact_and_hand_cases() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
        let fit = ols_simple(&x, &y).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-14);
        assert!(fit.intercept.abs() < 1e-14);
        assert!((fit.r_squared - 1.0).abs() < 1e-14);

        let y = [5.0, 5.0, 5.0, 5.0];
        let fit = ols_simple(&x, &y).unwrap();
        assert_eq!(fit.slope, 0.0);
        assert_eq!(fit.r_squared, 0.0);

        let fit = ols_simple(&[0.0, 1.0, 2.0], &[0.0, 1.0, 1.0]).unwrap();
        assert!((fit.slope - 0.5).abs() < 1e-14);
        assert!((fit.intercept - 1.0 / 6.0).abs() < 1e-14);
        // scipy linregress stderr reference
        assert!((fit.stderr_slope - 0.288_675_134_594_812_98).abs() < 1e-12);
    }

    #[test]
    fn ols_degenerate_and_mismatch() {
        assert!(matches!(
            ols_simple(&[1.0, 1.0, 1.0], &[0.0, 1.0, 2.0]),
            Err(Error::DegenerateInput(_))
        ));
        assert!(matches!(
            ols_simple(&[1.0, 2.0], &[0.0, 1.0, 2.0]),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn spearman_monotone_and_hand_case() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let up: Vec<f64> = x.iter().map(|v| v * 10.0).collect();
        let down: Vec<f64> = x.iter().map(|v| -v).collect();
        assert_eq!(spearman_rho(&x, &up).unwrap().statistic, 1.0);
        assert_eq!(spearman_rho(&x, &down).unwrap().statistic, -1.0);

        let r = spearman_rho(&[1.0, 2.0, 3.0], &[2.0, 1.0, 3.0]).unwrap();
        assert!((r.statistic - 0.5).abs() < 1e-14);
        assert!((r.p_value.unwrap() - 2.0 / 3.0).abs() < 1e-12);

        let r = spearman_rho(
            &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
            &[2.0, 1.0, 4.0, 3.0, 6.0, 5.0],
        )
        .unwrap();
        assert!((r.statistic - 0.828_571_428_571_428_74).abs() < 1e-12);
        assert!((r.p_value.unwrap() - 0.041_562_682_215_743_343).abs() < 1e-12);

        // tied ranks
        let r = spearman_rho(&[1.0, 2.0, 2.0, 4.0, 5.0], &[1.0, 3.0, 3.0, 2.0, 5.0]).unwrap();
        assert!((r.statistic - 0.684_210_526_315_789_49).abs() < 1e-12);
        assert!((r.p_value.unwrap() - 0.202_630_690_304_203_66).abs() < 1e-12);
    }

    #[test]
    fn spearman_requires_three_pairs() {
        assert!(spearman_rho(&[1.0, 2.0], &[1.0, 2.0]).is_err());
    }
}
