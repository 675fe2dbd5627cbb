use super::diff::poly_mul;

/// Conditional-sum-of-squares residuals
///
/// ```text
/// e_t = (w_t − μ) − Σ_i φ_i (w_{t−i} − μ) − Σ_j θ_j e_{t−j}
/// ```
///
/// with presample deviations and errors taken as zero. `phi[k]` and
/// `theta[k]` are the coefficients of lag `k + 1`; seasonal models pass
/// their expanded polynomials (see [`expand_ar`] and [`expand_ma`]).
pub fn css_residuals(phi: &[f64], theta: &[f64], intercept: f64, w: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; w.len()];
    let ar_lags: Vec<(usize, f64)> = nonzero_lags(phi);
    let ma_lags: Vec<(usize, f64)> = nonzero_lags(theta);
    for t in 0..w.len() {
        let mut value = w[t] - intercept;
        for &(lag, c) in &ar_lags {
            if lag > t {
                break;
            }
            value -= c * (w[t - lag] - intercept);
        }
        for &(lag, c) in &ma_lags {
            if lag > t {
                break;
            }
            value -= c * e[t - lag];
        }
        e[t] = value;
    }
    e
}

pub(crate) fn nonzero_lags(coefs: &[f64]) -> Vec<(usize, f64)> {
    coefs
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(k, &c)| (k + 1, c))
        .collect()
}

/// Lag coefficients `a` of `(1 − Σφ_i B^i)(1 − ΣΦ_k B^{sk}) = 1 − Σ a_l B^l`.
pub fn expand_ar(phi: &[f64], seasonal_phi: &[f64], period: usize) -> Vec<f64> {
    let regular = lag_poly(phi, 1, -1.0);
    let seasonal = lag_poly(seasonal_phi, period, -1.0);
    poly_mul(&regular, &seasonal)[1..]
        .iter()
        .map(|c| -c)
        .collect()
}

/// Lag coefficients `b` of `(1 + Σθ_j B^j)(1 + ΣΘ_k B^{sk}) = 1 + Σ b_l B^l`.
pub fn expand_ma(theta: &[f64], seasonal_theta: &[f64], period: usize) -> Vec<f64> {
    let regular = lag_poly(theta, 1, 1.0);
    let seasonal = lag_poly(seasonal_theta, period, 1.0);
    poly_mul(&regular, &seasonal)[1..].to_vec()
}

fn lag_poly(coefs: &[f64], stride: usize, sign: f64) -> Vec<f64> {
    let mut poly = vec![0.0; coefs.len() * stride + 1];
    poly[0] = 1.0;
    for (k, c) in coefs.iter().enumerate() {
        poly[(k + 1) * stride] = sign * c;
    }
    poly
}

/// Whether `1 − Σ φ_i z^i` has every root outside the unit circle, decided
/// by the Schur–Cohn step-down recursion (the implied partial
/// autocorrelations must all lie strictly inside (−1, 1)).
pub fn is_stationary(phi: &[f64]) -> bool {
    let mut a: Vec<f64> = phi.to_vec();
    while a.last() == Some(&0.0) {
        a.pop();
    }
    while let Some(&r) = a.last() {
        if !r.is_finite() || r.abs() >= 1.0 {
            return false;
        }
        let k = a.len();
        let denom = 1.0 - r * r;
        let prev: Vec<f64> = (0..k - 1)
            .map(|i| (a[i] + r * a[k - 2 - i]) / denom)
            .collect();
        a = prev;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn white_noise_residuals_are_the_data() {
        let w = [1.5, -2.0, 0.25];
        assert_eq!(css_residuals(&[], &[], 0.0, &w), w.to_vec());
    }

    #[test]
    fn ar1_recursion() {
        assert_eq!(
            css_residuals(&[0.5], &[], 0.0, &[1.0, 1.0, 1.0]),
            vec![1.0, 0.5, 0.5]
        );
    }

    #[test]
    fn ma1_recursion() {
        assert_eq!(
            css_residuals(&[], &[0.5], 0.0, &[1.0, 0.0, 0.0]),
            vec![1.0, -0.5, 0.25]
        );
    }

    #[test]
    fn intercept_shifts_deviations() {
        let e = css_residuals(&[0.5], &[], 10.0, &[11.0, 11.0]);
        assert_eq!(e, vec![1.0, 0.5]);
    }

    #[test]
    fn multiplicative_expansion() {
        // (1 − 0.5B)(1 − 0.2B^4) = 1 − 0.5B − 0.2B^4 + 0.1B^5
        let a = expand_ar(&[0.5], &[0.2], 4);
        assert_eq!(a.len(), 5);
        let want = [0.5, 0.0, 0.0, 0.2, -0.1];
        for (x, y) in a.iter().zip(want) {
            assert!((x - y).abs() < 1e-15);
        }
        // (1 + 0.3B)(1 + 0.4B^2) = 1 + 0.3B + 0.4B^2 + 0.12B^3
        let b = expand_ma(&[0.3], &[0.4], 2);
        let want = [0.3, 0.4, 0.12];
        for (x, y) in b.iter().zip(want) {
            assert!((x - y).abs() < 1e-15);
        }
        assert!(expand_ar(&[], &[], 250).is_empty());
    }

    #[test]
    fn stationarity_region() {
        assert!(is_stationary(&[]));
        assert!(is_stationary(&[0.9]));
        assert!(!is_stationary(&[1.0]));
        assert!(!is_stationary(&[-1.2]));
        // AR(2) triangle: φ2 < 1, φ2 + φ1 < 1, φ2 − φ1 < 1
        assert!(is_stationary(&[0.5, 0.3]));
        assert!(!is_stationary(&[0.5, 0.6]));
        assert!(is_stationary(&[1.6, -0.8]));
        assert!(!is_stationary(&[-0.5, 0.6]));
        assert!(is_stationary(&[0.5, 0.0, 0.0]));
    }
}
