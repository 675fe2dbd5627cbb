mod common;

use proptest::prelude::*;

use common::{normals, rng, simulate_arma};
use tsforge::sarima::special::chi_square_sf;
use tsforge::sarima::{
    acf, auto_fit, css_residuals, difference, fit, forecast, ljung_box, standardized_residuals,
    undifference, OrderSearch, SarimaSpec,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn undifference_inverts_difference(
        values in prop::collection::vec(-1e3f64..1e3, 520..600),
        d in 0usize..=2,
        seasonal_d in 0usize..=1,
        period in prop_oneof![Just(2usize), Just(12), Just(250)],
    ) {
        let lag = d + seasonal_d * period;
        let w = difference(&values, d, seasonal_d, period).unwrap();
        prop_assert_eq!(w.len(), values.len() - lag);
        let back = undifference(&w, &values[..lag], d, seasonal_d, period).unwrap();
        // Rounding in the forward differences is integrated back up, so the
        // tolerance scales with the series.
        let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for (a, b) in back.iter().zip(&values[lag..]) {
            prop_assert!((a - b).abs() <= 1e-10 * scale, "{} vs {}", a, b);
        }
    }

    #[test]
    fn acf_is_bounded_and_starts_at_one(values in prop::collection::vec(-50.0f64..50.0, 10..200)) {
        prop_assume!(values.iter().any(|v| (v - values[0]).abs() > 1e-6));
        let r = acf(&values, 5.min(values.len() - 1)).unwrap();
        prop_assert!((r[0] - 1.0).abs() < 1e-12);
        prop_assert!(r.iter().all(|v| v.abs() <= 1.0 + 1e-12));
    }

    #[test]
    fn chi_square_tail_is_monotone(x in 0.0f64..80.0, dx in 0.01f64..5.0, dof in 1usize..40) {
        let a = chi_square_sf(x, dof).unwrap();
        let b = chi_square_sf(x + dx, dof).unwrap();
        prop_assert!(b <= a);
        prop_assert!((0.0..=1.0).contains(&a));
    }
}

#[test]
fn recovers_ar1() {
    let x = simulate_arma(21, &[0.7], &[], 0.0, 2000);
    let f = fit(SarimaSpec::arima(1, 0, 0), &x).unwrap();
    assert!(f.converged);
    assert!((0.65..=0.75).contains(&f.phi[0]), "phi = {}", f.phi[0]);
}

#[test]
fn white_noise_fit_is_the_sample_moments() {
    let mut r = rng(4);
    let x: Vec<f64> = normals(&mut r, 500)
        .into_iter()
        .map(|v| 3.0 + 2.0 * v)
        .collect();
    let f = fit(SarimaSpec::arima(0, 0, 0), &x).unwrap();
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    assert!(
        (f.intercept - mean).abs() < 1e-6,
        "{} vs {mean}",
        f.intercept
    );
    assert!((f.sigma2 / var - 1.0).abs() < 0.05);
    let pure = css_residuals(&[], &[], mean, &x);
    assert!(pure
        .iter()
        .zip(&x)
        .all(|(e, v)| (e - (v - mean)).abs() < 1e-12));
}

#[test]
fn seasonal_model_uses_post_differencing_points() {
    let x: Vec<f64> = simulate_arma(8, &[0.4], &[], 0.0, 412)
        .iter()
        .scan(1000.0, |s, v| {
            *s += v;
            Some(*s)
        })
        .collect();
    let f = fit(SarimaSpec::default_seasonal(), &x).unwrap();
    assert_eq!(f.differenced.len(), 162);
    assert_eq!(f.residuals.len(), 162);
    assert_eq!(f.phi.len() + f.theta.len(), 4);
    assert!(f.seasonal_phi.is_empty() && f.seasonal_theta.is_empty());
    assert!(f.has_data_warning());
}

#[test]
fn standardized_residuals_have_unit_variance() {
    let x = simulate_arma(3, &[0.5], &[0.2], 10.0, 400);
    let f = fit(SarimaSpec::arima(1, 0, 1), &x).unwrap();
    let z = standardized_residuals(&f).unwrap();
    let var = z.iter().map(|v| v * v).sum::<f64>() / z.len() as f64;
    assert!((0.95..=1.05).contains(&var), "{var}");
}

#[test]
fn white_noise_acf_within_sampling_band() {
    let mut r = rng(77);
    let x = normals(&mut r, 1000);
    let r = acf(&x, 20).unwrap();
    let band = 2.0 / (1000f64).sqrt();
    let inside = r[1..].iter().filter(|v| v.abs() < band).count();
    assert!(inside >= 18, "{inside} of 20 lags inside ±{band}");
}

#[test]
fn ljung_box_rarely_rejects_white_noise() {
    let accepted = (0..20u64)
        .filter(|&seed| {
            let mut r = rng(1000 + seed);
            let x = normals(&mut r, 300);
            ljung_box(&x, 10, 0).unwrap().p_value > 0.05
        })
        .count();
    assert!(accepted >= 18, "{accepted} of 20");
}

#[test]
fn ljung_box_flags_ignored_structure() {
    let mut flagged = 0;
    let mut clean = 0;
    for seed in 0..20u64 {
        let x = simulate_arma(40 + seed, &[0.6], &[], 0.0, 500);
        let white = fit(SarimaSpec::arima(0, 0, 0), &x).unwrap();
        let ar = fit(SarimaSpec::arima(1, 0, 0), &x).unwrap();
        flagged += (ljung_box(&white.residuals, 10, 0).unwrap().p_value < 0.01) as usize;
        clean += (ljung_box(&ar.residuals, 10, 1).unwrap().p_value > 0.05) as usize;
    }
    assert_eq!(flagged, 20);
    assert!(clean >= 17, "{clean} of 20");
}

#[test]
fn order_search_finds_ar2() {
    let search = OrderSearch::up_to(3, 3);
    let hits = (0..20u64)
        .filter(|&seed| {
            let x = simulate_arma(300 + seed, &[0.5, 0.3], &[], 0.0, 500);
            auto_fit(&x, SarimaSpec::arima(0, 0, 0), &search)
                .unwrap()
                .spec
                .p
                >= 2
        })
        .count();
    assert!(hits >= 18, "{hits} of 20");
}

#[test]
fn order_search_prefers_white_noise() {
    let search = OrderSearch::up_to(2, 2);
    let mut counts = std::collections::BTreeMap::new();
    for seed in 0..40u64 {
        let mut r = rng(500 + seed);
        let x = normals(&mut r, 1000);
        let f = auto_fit(&x, SarimaSpec::arima(0, 0, 0), &search).unwrap();
        *counts.entry((f.spec.p, f.spec.q)).or_insert(0) += 1;
    }
    let (&mode, _) = counts.iter().max_by_key(|(_, &c)| c).unwrap();
    assert_eq!(mode, (0, 0), "{counts:?}");
}

#[test]
fn forecast_continues_from_the_last_observation() {
    let x: Vec<f64> = simulate_arma(12, &[0.3], &[], 0.05, 600)
        .iter()
        .scan(100.0, |s, v| {
            *s += v;
            Some(*s)
        })
        .collect();
    let f = fit(SarimaSpec::arima(1, 1, 0), &x).unwrap();
    let fc = forecast(&f, 30).unwrap();
    let last = *x.last().unwrap();
    let scale = f.sigma2.sqrt();
    assert!((fc[0] - last).abs() < 4.0 * scale, "{} vs {last}", fc[0]);
    // Far ahead the differenced forecast settles at the drift.
    let step = fc[29] - fc[28];
    assert!(
        (step - f.intercept).abs() < 1e-6,
        "{step} vs {}",
        f.intercept
    );
}

#[test]
fn fits_are_deterministic() {
    let x = simulate_arma(6, &[0.5], &[0.3], 0.0, 300);
    let a = fit(SarimaSpec::arima(1, 0, 1), &x).unwrap();
    let b = fit(SarimaSpec::arima(1, 0, 1), &x).unwrap();
    assert_eq!(a, b);
}
