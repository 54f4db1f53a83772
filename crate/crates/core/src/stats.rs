// SPDX-License-Identifier: MIT OR Apache-2.0

//! Survey-weighted descriptive statistics.

/// Weighted arithmetic mean; `None` when the total weight is not positive.
pub fn weighted_mean(values: &[(f64, f64)]) -> Option<f64> {
    let total: f64 = values.iter().map(|(_, w)| w).sum();
    if total <= 0.0 {
        return None;
    }
    Some(values.iter().map(|(v, w)| v * w).sum::<f64>() / total)
}

/// Weighted population standard deviation, `sqrt(sum w (x - mean)^2 / sum w)`.
pub fn weighted_sd(values: &[(f64, f64)]) -> Option<f64> {
    let mean = weighted_mean(values)?;
    let total: f64 = values.iter().map(|(_, w)| w).sum();
    let ss: f64 = values.iter().map(|(v, w)| w * (v - mean).powi(2)).sum();
    Some((ss / total).sqrt())
}

/// Smallest value whose cumulative weight reaches `p` of the total weight.
///
/// Values are `(value, weight)`; ties in value keep input order, which does
/// not affect the result.
pub fn weighted_quantile(values: &[(f64, f64)], p: f64) -> Option<f64> {
    let mut sorted: Vec<(f64, f64)> = values.iter().copied().filter(|(_, w)| *w > 0.0).collect();
    if sorted.is_empty() {
        return None;
    }
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = sorted.iter().map(|(_, w)| w).sum();
    let threshold = p.clamp(0.0, 1.0) * total;
    let mut cum = 0.0;
    for (v, w) in &sorted {
        cum += w;
        if cum >= threshold * (1.0 - 1e-12) {
            return Some(*v);
        }
    }
    sorted.last().map(|(v, _)| *v)
}

pub fn weighted_median(values: &[(f64, f64)]) -> Option<f64> {
    weighted_quantile(values, 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_sd() {
        let v = [(10.0, 1.0), (20.0, 3.0)];
        assert_eq!(weighted_mean(&v), Some(17.5));
        // variance = (1*56.25 + 3*6.25) / 4 = 18.75
        assert!((weighted_sd(&v).unwrap() - 18.75f64.sqrt()).abs() < 1e-12);
        assert_eq!(weighted_mean(&[]), None);
    }

    #[test]
    fn median_hand_sorted() {
        // sorted: 1 (w2), 3 (w1), 7 (w4); total 7, half 3.5; cum 2, 3, 7 -> 7
        let v = [(7.0, 4.0), (1.0, 2.0), (3.0, 1.0)];
        assert_eq!(weighted_median(&v), Some(7.0));
        // equal weights: cum 1,2,3 of 3; half 1.5 -> second value
        let e = [(5.0, 1.0), (1.0, 1.0), (3.0, 1.0)];
        assert_eq!(weighted_median(&e), Some(3.0));
        assert_eq!(weighted_quantile(&e, 0.25), Some(1.0));
        assert_eq!(weighted_quantile(&e, 0.75), Some(5.0));
    }

    #[test]
    fn identical_values() {
        let v = [(0.5, 2.0), (0.5, 5.0)];
        assert_eq!(weighted_median(&v), Some(0.5));
        assert_eq!(weighted_mean(&v), Some(0.5));
    }
}
