use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rank::RankVector;

/// Two values closer than this relative amount count as tied when comparing
/// orderings.
pub const TIE_TOL: f64 = 1e-9;

/// Fraction of the sorted list, from the top, used by [`power_law_fit`] when
/// no range is given.
pub const DEFAULT_FIT_FRACTION: f64 = 0.5;

const MIN_FIT_POINTS: usize = 5;

fn same_len(a: &RankVector, b: &RankVector) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

/// Inverse participation ratio `1 / sum_i p_i^2`.
pub fn ipr(p: &RankVector) -> Result<f64> {
    p.require_normalized()?;
    Ok(1.0 / p.values().iter().map(|x| x * x).sum::<f64>())
}

/// Bhattacharyya coefficient `sum_i sqrt(p_i q_i)`.
///
/// Both inputs must be normalized. The sum is divided by
/// `sqrt(sum p * sum q)` so that rounding in the inputs cannot push it past 1.
pub fn fidelity(p: &RankVector, q: &RankVector) -> Result<f64> {
    same_len(p, q)?;
    p.require_normalized()?;
    q.require_normalized()?;
    let overlap: f64 = p
        .values()
        .iter()
        .zip(q.values())
        .map(|(a, b)| (a * b).sqrt())
        .sum();
    Ok((overlap / (p.sum() * q.sum()).sqrt()).clamp(0.0, 1.0))
}

fn tied(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_TOL * a.abs().max(b.abs())
}

/// Kendall tau-b between the orderings induced by `a` and `b`.
///
/// If both vectors are constant the orderings agree trivially and the result
/// is 1; if exactly one is constant there is nothing to correlate and the
/// result is 0.
pub fn rank_correlation(a: &RankVector, b: &RankVector) -> Result<f64> {
    same_len(a, b)?;
    let (x, y) = (a.values(), b.values());
    let n = x.len();
    let (mut concordant, mut discordant) = (0i64, 0i64);
    let (mut tied_x, mut tied_y) = (0i64, 0i64);
    for i in 0..n {
        for j in (i + 1)..n {
            let tx = tied(x[i], x[j]);
            let ty = tied(y[i], y[j]);
            if tx {
                tied_x += 1;
            }
            if ty {
                tied_y += 1;
            }
            if tx || ty {
                continue;
            }
            if (x[i] > x[j]) == (y[i] > y[j]) {
                concordant += 1;
            } else {
                discordant += 1;
            }
        }
    }
    let pairs = (n * n.saturating_sub(1) / 2) as i64;
    let (free_x, free_y) = (pairs - tied_x, pairs - tied_y);
    Ok(match (free_x, free_y) {
        (0, 0) => 1.0,
        (0, _) | (_, 0) => 0.0,
        _ => (concordant - discordant) as f64 / ((free_x as f64) * (free_y as f64)).sqrt(),
    })
}

/// 1-based positions in the descending ordering, with tied runs sharing the
/// mean of their positions.
pub fn average_ranks(p: &RankVector) -> Vec<f64> {
    let order = p.ordering();
    let v = p.values();
    let mut ranks = vec![0.0; v.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && tied(v[order[end - 1]], v[order[end]]) {
            end += 1;
        }
        let mean = (start + end + 1) as f64 / 2.0;
        for &node in &order[start..end] {
            ranks[node] = mean;
        }
        start = end;
    }
    ranks
}

/// 1-based positions in the descending ordering. Near-ties are ordered by
/// node index, so tiny rounding differences between tied scores do not
/// reorder them.
pub fn rank_positions(p: &RankVector) -> Vec<usize> {
    let avg = average_ranks(p);
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by(|&a, &b| avg[a].total_cmp(&avg[b]).then(a.cmp(&b)));
    let mut positions = vec![0; p.len()];
    for (k, node) in order.into_iter().enumerate() {
        positions[node] = k + 1;
    }
    positions
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    /// `beta` in `p_k ~ k^(-beta)`.
    pub exponent: f64,
    /// Intercept of the regression line in natural-log coordinates.
    pub intercept: f64,
    pub r_squared: f64,
    /// Half-open index range of the descending sorted list.
    pub fitted_range: Range<usize>,
}

/// Range used by [`power_law_fit`] when none is supplied: the top
/// [`DEFAULT_FIT_FRACTION`] of the sorted list, cut short at the first zero.
pub fn default_fit_range(sorted: &[f64]) -> Range<usize> {
    let positive = sorted.iter().take_while(|v| **v > 0.0).count();
    let head = ((sorted.len() as f64) * DEFAULT_FIT_FRACTION).ceil() as usize;
    0..head.max(MIN_FIT_POINTS).min(positive)
}

/// Least-squares fit of `ln p` against `ln k` on the descending sorted
/// values, with `k` counted from 1.
pub fn power_law_fit(p: &RankVector, range: Option<Range<usize>>) -> Result<PowerLawFit> {
    let sorted = p.sorted_descending();
    let range = match range {
        Some(r) => {
            if r.end > sorted.len() || r.start > r.end {
                return Err(Error::InvalidParameter(format!(
                    "fit range {}..{} outside 0..{}",
                    r.start,
                    r.end,
                    sorted.len()
                )));
            }
            if let Some(k) = r.clone().find(|&k| !(sorted[k] > 0.0)) {
                return Err(Error::ZeroInRange { index: k });
            }
            r
        }
        None => default_fit_range(&sorted),
    };
    if range.len() < MIN_FIT_POINTS {
        return Err(Error::TooFewValues {
            needed: MIN_FIT_POINTS,
            found: range.len(),
        });
    }
    let xs: Vec<f64> = range.clone().map(|k| ((k + 1) as f64).ln()).collect();
    let ys: Vec<f64> = range.clone().map(|k| sorted[k].ln()).collect();
    let (slope, intercept, r_squared) = least_squares(&xs, &ys);
    Ok(PowerLawFit {
        exponent: -slope,
        intercept,
        r_squared,
        fitted_range: range,
    })
}

/// Ordinary least squares `y = slope x + intercept`; returns
/// `(slope, intercept, r^2)`.
pub(crate) fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let r_squared = if syy > 0.0 {
        let ss_res: f64 = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| (y - slope * x - intercept).powi(2))
            .sum();
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    (slope, intercept, r_squared)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegeneracyProfile {
    pub class_count: usize,
    /// Size of the largest class reaching into the lower half of the
    /// ranking.
    pub largest_tail_class: usize,
    /// Class sizes from the most to the least important.
    pub class_sizes: Vec<usize>,
}

/// Groups the descending sorted values into classes, chaining neighbours
/// whose relative difference is below `delta`.
pub fn degeneracy_profile(p: &RankVector, delta: f64) -> Result<DegeneracyProfile> {
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "delta must be positive, got {delta}"
        )));
    }
    let sorted = p.sorted_descending();
    let mut class_sizes = Vec::new();
    let mut current = 0;
    for (k, v) in sorted.iter().enumerate() {
        if k > 0 {
            let prev = sorted[k - 1];
            let scale = prev.abs().max(v.abs());
            if (prev - v).abs() >= delta * scale && scale > 0.0 {
                class_sizes.push(current);
                current = 0;
            }
        }
        current += 1;
    }
    if current > 0 {
        class_sizes.push(current);
    }

    let half = sorted.len() / 2;
    let mut start = 0;
    let mut largest_tail_class = 0;
    for &size in &class_sizes {
        if start + size > half {
            largest_tail_class = largest_tail_class.max(size);
        }
        start += size;
    }
    Ok(DegeneracyProfile {
        class_count: class_sizes.len(),
        largest_tail_class,
        class_sizes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rv(v: &[f64]) -> RankVector {
        RankVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn ipr_limits() {
        assert!((ipr(&RankVector::uniform(40)).unwrap() - 40.0).abs() < 1e-10);
        assert_eq!(ipr(&rv(&[0.0, 1.0, 0.0])).unwrap(), 1.0);
        assert!((ipr(&rv(&[1.0 / 3.0, 2.0 / 3.0])).unwrap() - 1.8).abs() <= 1.8 * f64::EPSILON);
        assert!(matches!(
            ipr(&rv(&[0.5, 0.6])),
            Err(Error::Unnormalized { .. })
        ));
    }

    #[test]
    fn fidelity_cases() {
        let p = rv(&[1.0, 0.0]);
        let q = rv(&[0.5, 0.5]);
        assert!((fidelity(&p, &q).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
        assert_eq!(fidelity(&p, &rv(&[0.0, 1.0])).unwrap(), 0.0);
        assert!((fidelity(&q, &q).unwrap() - 1.0).abs() < 1e-15);
        assert!(fidelity(&p, &RankVector::uniform(3)).is_err());
    }

    #[test]
    fn kendall_extremes() {
        let a = rv(&[0.4, 0.3, 0.2, 0.1]);
        let rev = rv(&[0.1, 0.2, 0.3, 0.4]);
        let doubled = RankVector::new(a.values().iter().map(|v| 2.0 * v).collect()).unwrap();
        assert_eq!(rank_correlation(&a, &a).unwrap(), 1.0);
        assert_eq!(rank_correlation(&a, &rev).unwrap(), -1.0);
        assert_eq!(rank_correlation(&a, &doubled).unwrap(), 1.0);
        let flat = RankVector::uniform(4);
        assert_eq!(rank_correlation(&flat, &flat).unwrap(), 1.0);
        assert_eq!(rank_correlation(&flat, &a).unwrap(), 0.0);
    }

    #[test]
    fn kendall_with_ties_matches_hand_count() {
        // x = (1, 2, 2, 3), y = (1, 3, 2, 4): 5 concordant, 0 discordant,
        // one tie in x only. tau_b = 5 / sqrt(5 * 6).
        let x = rv(&[1.0, 2.0, 2.0, 3.0]);
        let y = rv(&[1.0, 3.0, 2.0, 4.0]);
        let want = 5.0 / 30f64.sqrt();
        assert!((rank_correlation(&x, &y).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn average_ranks_share_ties() {
        let p = rv(&[0.1, 0.4, 0.1, 0.4]);
        assert_eq!(average_ranks(&p), vec![3.5, 1.5, 3.5, 1.5]);
    }

    #[test]
    fn positions_ignore_rounding_noise() {
        let p = rv(&[0.25, 0.25 + 1e-17, 0.5 - 1e-17, 0.0]);
        assert_eq!(rank_positions(&p), vec![2, 3, 1, 4]);
        let q = rv(&[0.1, 0.6, 0.3]);
        assert_eq!(rank_positions(&q), vec![3, 1, 2]);
    }

    #[test]
    fn planted_power_laws() {
        for beta in [0.5, 0.9, 2.0] {
            let v: Vec<f64> = (1..=100).map(|k| (k as f64).powf(-beta)).collect();
            let fit = power_law_fit(&rv(&v), Some(0..100)).unwrap();
            assert!((fit.exponent - beta).abs() < 1e-6);
            assert!(fit.r_squared > 0.999999);
            let head = power_law_fit(&rv(&v), None).unwrap();
            assert_eq!(head.fitted_range, 0..50);
            assert!((head.exponent - beta).abs() < 1e-6);
        }
    }

    #[test]
    fn power_law_errors() {
        assert!(matches!(
            power_law_fit(&rv(&[0.5, 0.3, 0.2]), None),
            Err(Error::TooFewValues {
                needed: 5,
                found: 3
            })
        ));
        let v = rv(&[0.3, 0.3, 0.2, 0.1, 0.1, 0.0]);
        assert!(matches!(
            power_law_fit(&v, Some(0..6)),
            Err(Error::ZeroInRange { index: 5 })
        ));
        assert_eq!(power_law_fit(&v, None).unwrap().fitted_range, 0..5);
    }

    #[test]
    fn degeneracy_extremes() {
        let flat = degeneracy_profile(&RankVector::uniform(9), 1e-4).unwrap();
        assert_eq!(flat.class_count, 1);
        assert_eq!(flat.largest_tail_class, 9);
        let v = rv(&[0.5, 0.25, 0.125, 0.0625]);
        let distinct = degeneracy_profile(&v, 1e-4).unwrap();
        assert_eq!(distinct.class_sizes, vec![1, 1, 1, 1]);
        assert_eq!(degeneracy_profile(&v, 0.6).unwrap().class_count, 1);
        assert!(degeneracy_profile(&v, 0.0).is_err());
    }
}
