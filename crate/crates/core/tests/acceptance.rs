//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use std::fs;
use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use common::{gradient_check, normals, random_params, rng, series, simulate_arma, sine_dataset};
use tsforge::data::{align_calendars, make_windows, AlignedDataset, SplitRule};
use tsforge::eval::{avg_daily_return, build_report, directional_accuracy, rmse};
use tsforge::lstm::{mae_loss, predict, train, PredictMode, TrainConfig};
use tsforge::sarima::special::chi_square_sf;
use tsforge::sarima::{difference, fit, forecast, ljung_box_from_acf, undifference, SarimaSpec};
use tsforge::synth::{generate_synthetic, RegimeParams};

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "1 report schema (no fixed benchmark scores are targeted)",
            report_schema,
        ),
        (
            "2 LSTM RMSE < 0.5 x SARIMA RMSE in >= 8 of 10 seeds",
            ordering,
        ),
        (
            "3 BPTT matches central differences on 50 instances",
            gradients,
        ),
        (
            "4 sine: train MAE < 0.02, one-step test MAE < 0.05",
            sine_learning,
        ),
        (
            "5 ARMA(1,1) recovery within 0.1 in >= 9 of 10 seeds",
            arma_recovery,
        ),
        (
            "6 differencing round trip within 1e-10 on 100 cases",
            round_trip,
        ),
        (
            "7 Ljung-Box hand value and chi-square tail",
            ljung_box_values,
        ),
        ("8 metric identities", metric_identities),
        ("9 CLI reruns are byte-identical", determinism),
        ("10 seasonal production spec on 412 points", production_spec),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let (ok, detail) =
            std::panic::catch_unwind(check).unwrap_or_else(|_| (false, "panicked".into()));
        failed += !ok as usize;
        println!(
            "{} {name}: {detail} [{:.1}s]",
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn synthetic_dataset(seed: u64) -> AlignedDataset {
    let data = generate_synthetic(seed, 501, &RegimeParams::default()).unwrap();
    let table = align_calendars(&data.primary, &data.secondary).unwrap();
    AlignedDataset::from_table(&table, SplitRule::default(), 5).unwrap()
}

/// Scores depend on data, seeds and network size that are not fixed here, so
/// no benchmark numbers are asserted; the report must carry exactly the four
/// tables and their rows.
fn report_schema() -> Outcome {
    let ds = synthetic_dataset(0);
    let samples = make_windows(&ds).unwrap();
    let model = train(
        &TrainConfig {
            epochs: 10,
            ..TrainConfig::default()
        },
        &samples,
    )
    .unwrap();
    let lstm = predict(&model, &ds, PredictMode::OneStep).unwrap();
    let sarima_fit = fit(SarimaSpec::default_seasonal(), ds.train_primary()).unwrap();
    let dates = ds.test_dates().to_vec();
    let sarima = tsforge::data::PriceSeries::forecast(
        "sarima",
        dates.clone(),
        forecast(&sarima_fit, dates.len()).unwrap(),
    )
    .unwrap();
    let actual =
        tsforge::data::PriceSeries::new("actual", dates, ds.test_primary().to_vec()).unwrap();
    let report = build_report(&lstm, &sarima, &actual).unwrap();
    let text = report.tables_text();

    let expected: [(&str, &[&str]); 4] = [
        ("Table 1", &["lstm", "sarima"]),
        ("Table 2", &["lstm", "sarima"]),
        ("Table 3", &["lstm", "sarima", "actual"]),
        ("Table 4", &["lstm", "sarima", "actual"]),
    ];
    let blocks: Vec<&str> = text
        .split("\n\n")
        .map(str::trim)
        .filter(|b| !b.is_empty())
        .collect();
    if blocks.len() != 4 {
        return (false, format!("{} tables", blocks.len()));
    }
    for (block, (title, rows)) in blocks.iter().zip(expected) {
        let lines: Vec<&str> = block.lines().collect();
        let labels: Vec<&str> = lines[2..]
            .iter()
            .filter_map(|l| l.split_whitespace().next())
            .collect();
        if !lines[0].starts_with(title) || labels != rows {
            return (false, format!("{title}: rows {labels:?}"));
        }
    }
    let metrics = report.metrics_text();
    let keys = metrics.lines().filter(|l| l.contains('=')).count();
    (
        keys == 11,
        format!(
            "4 tables with the expected rows, {keys} metric keys; scores themselves not asserted"
        ),
    )
}

fn ordering() -> Outcome {
    let ratios: Vec<(u64, f64, f64)> = (0..10u64)
        .into_par_iter()
        .map(|seed| {
            let ds = synthetic_dataset(seed);
            let samples = make_windows(&ds).unwrap();
            let model = train(
                &TrainConfig {
                    seed,
                    ..TrainConfig::default()
                },
                &samples,
            )
            .unwrap();
            let lstm = predict(&model, &ds, PredictMode::OneStep).unwrap();
            let sarima_fit = fit(SarimaSpec::default_seasonal(), ds.train_primary()).unwrap();
            let fc = forecast(&sarima_fit, ds.test_rows().len()).unwrap();
            let actual = series(ds.test_primary());
            let l = rmse(&series(lstm.closes()), &actual).unwrap();
            let s = rmse(&series(&fc), &actual).unwrap();
            (seed, l, s)
        })
        .collect();
    let wins = ratios.iter().filter(|(_, l, s)| *l < 0.5 * s).count();
    let worst = ratios.iter().map(|(_, l, s)| l / s).fold(0.0, f64::max);
    (
        wins >= 8,
        format!("{wins}/10 seeds, worst ratio {worst:.3}"),
    )
}

fn gradients() -> Outcome {
    let mut r = rng(2024);
    let mut worst = 0.0_f64;
    let mut bad = 0;
    for _ in 0..50 {
        let hidden = r.random_range(1..=4);
        let steps = r.random_range(1..=5);
        let params = random_params(&mut r, hidden, 2, 0.8);
        let window: Vec<f64> = (0..steps * 2).map(|_| r.random_range(-1.0..1.5)).collect();
        let upstream = r.random_range(-2.0..2.0);
        let (w, v) = gradient_check(&params, &window, upstream, 1e-5, 1e-4, 1e-7);
        worst = worst.max(w);
        bad += (v > 0) as usize;
    }
    (
        bad == 0,
        format!("{bad} failing instances, worst relative error {worst:.2e}"),
    )
}

fn sine_learning() -> Outcome {
    let ds = sine_dataset(50.0, 412, 89, 5);
    let samples = make_windows(&ds).unwrap();
    let model = train(&TrainConfig::default(), &samples).unwrap();
    let fitted: Vec<f64> = samples
        .iter()
        .map(|s| model.predict_window(&s.input).unwrap())
        .collect();
    let targets: Vec<f64> = samples.iter().map(|s| s.target).collect();
    let train_mae = mae_loss(&fitted, &targets).unwrap();
    let scaler = ds.primary_scaler();
    let forecast = predict(&model, &ds, PredictMode::OneStep).unwrap();
    let test_mae = mae_loss(
        &scaler.apply_all(forecast.closes()),
        &scaler.apply_all(ds.test_primary()),
    )
    .unwrap();
    (
        train_mae < 0.02 && test_mae < 0.05,
        format!(
            "train MAE {train_mae:.4}, test MAE {test_mae:.4} (scaled units), last epoch {:.4}",
            model.final_mae().unwrap()
        ),
    )
}

fn arma_recovery() -> Outcome {
    let results: Vec<(f64, f64)> = (0..10u64)
        .into_par_iter()
        .map(|seed| {
            let x = simulate_arma(9000 + seed, &[0.5], &[0.3], 0.0, 2000);
            let f = fit(SarimaSpec::arima(1, 0, 1), &x).unwrap();
            (f.phi[0], f.theta[0])
        })
        .collect();
    let hits = results
        .iter()
        .filter(|(p, t)| (p - 0.5).abs() <= 0.1 && (t - 0.3).abs() <= 0.1)
        .count();
    let worst = results
        .iter()
        .map(|(p, t)| (p - 0.5).abs().max((t - 0.3).abs()))
        .fold(0.0, f64::max);
    (
        hits >= 9,
        format!("{hits}/10 seeds, largest deviation {worst:.3}"),
    )
}

/// Unit-scale white noise, three seasons plus up to 40 points, at least 60.
fn round_trip() -> Outcome {
    let mut r = rng(66);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let d = r.random_range(0..=2);
        let seasonal_d = r.random_range(0..=1);
        let period = [2, 12, 250][r.random_range(0..3)];
        let n = (3 * period).max(60) + r.random_range(0..=40);
        let y = normals(&mut r, n);
        let lag = d + seasonal_d * period;
        let w = difference(&y, d, seasonal_d, period).unwrap();
        let back = undifference(&w, &y[..lag], d, seasonal_d, period).unwrap();
        let err = back
            .iter()
            .zip(&y[lag..])
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        worst = worst.max(err);
    }
    (worst <= 1e-10, format!("largest error {worst:.2e}"))
}

fn ljung_box_values() -> Outcome {
    let q = ljung_box_from_acf(&[1.0, 0.1], 100, 1, 0)
        .unwrap()
        .statistic;
    // Upper-tail chi-square probabilities from a 50-digit reference
    // implementation.
    #[allow(clippy::excessive_precision)]
    const REFERENCE: [(f64, usize, f64); 20] = [
        (0.1, 1, 0.75182963404584928),
        (0.5, 1, 0.47950012218695346),
        (1.0, 1, 0.3173105078629141),
        (3.841458820694124, 1, 0.050000000000000057),
        (10.0, 1, 0.0015654022580025497),
        (0.5, 2, 0.77880078307140487),
        (2.0, 2, 0.36787944117144232),
        (5.991464547107979, 2, 0.050000000000000074),
        (1.0, 3, 0.8012519569012008),
        (7.0, 4, 0.13588822540043325),
        (11.070497693516351, 5, 0.050000000000000052),
        (2.0, 7, 0.95984036873010156),
        (15.0, 8, 0.059145459832683954),
        (18.307038053275146, 10, 0.050000000000000007),
        (5.0, 10, 0.89117801891415124),
        (30.0, 10, 0.00085664121077530039),
        (25.0, 15, 0.049943433626428367),
        (40.0, 20, 0.0049954123083075872),
        (12.0, 25, 0.98656781895243162),
        (60.0, 30, 0.00092068239614866626),
    ];
    let worst = REFERENCE
        .iter()
        .map(|&(x, dof, p)| (chi_square_sf(x, dof).unwrap() - p).abs())
        .fold(0.0, f64::max);
    (
        (q - 1.0303).abs() <= 1e-3 && worst <= 1e-6,
        format!("Q = {q:.6}, largest p-value error {worst:.2e} over 20 points"),
    )
}

fn metric_identities() -> Outcome {
    let mut r = rng(88);
    let mut worst_adr = 0.0_f64;
    let mut worst_offset = 0.0_f64;
    let mut perfect = true;
    for _ in 0..100 {
        let n = r.random_range(2..120);
        let a: Vec<f64> = (0..n).map(|_| r.random_range(1.0..1e4)).collect();
        let s = series(&a);
        perfect &= rmse(&s, &s).unwrap() == 0.0 && directional_accuracy(&s, &s).unwrap() == 1.0;
        let c = r.random_range(-100.0..100.0);
        let shifted: Vec<f64> = a.iter().map(|v| v + c).collect();
        worst_offset = worst_offset.max((rmse(&series(&shifted), &s).unwrap() - c.abs()).abs());
        let closed = (a[n - 1] / a[0]).powf(1.0 / (n - 1) as f64) - 1.0;
        worst_adr = worst_adr.max((avg_daily_return(&s).unwrap() - closed).abs());
    }
    (
        perfect && worst_offset <= 1e-9 && worst_adr <= 1e-12,
        format!("perfect forecasts exact: {perfect}, offset error {worst_offset:.1e}, avg daily return error {worst_adr:.1e}"),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_tsforge");
    let run = |args: &[&str]| {
        Command::new(bin)
            .args(args)
            .current_dir(dir.path())
            .output()
            .unwrap()
            .status
            .success()
    };
    if !run(&["generate", "--seed", "17", "--out", "data"]) {
        return (false, "generate failed".into());
    }
    fs::write(
        dir.path().join("run.toml"),
        "seed = 17\nprimary_csv = \"data/primary.csv\"\nsecondary_csv = \"data/secondary.csv\"\n[lstm]\nmode = \"both\"\n",
    )
    .unwrap();
    if !(run(&["run", "--config", "run.toml", "--out", "a"])
        && run(&["run", "--config", "run.toml", "--out", "b"]))
    {
        return (false, "run failed".into());
    }
    let files = [
        "forecast_lstm.csv",
        "forecast_lstm_recursive.csv",
        "forecast_sarima.csv",
        "metrics.txt",
    ];
    let differing: Vec<&str> = files
        .iter()
        .filter(|f| {
            fs::read(dir.path().join("a").join(f)).ok()
                != fs::read(dir.path().join("b").join(f)).ok()
        })
        .copied()
        .collect();
    (
        differing.is_empty(),
        format!("{} files compared, differing: {differing:?}", files.len()),
    )
}

fn production_spec() -> Outcome {
    let ds = synthetic_dataset(3);
    let history = ds.train_primary();
    let f = fit(SarimaSpec::default_seasonal(), history).unwrap();
    let fc = forecast(&f, 89).unwrap();
    let ok = history.len() == 412
        && f.converged
        && f.coefficients().len() == 4
        && f.intercept.is_finite()
        && fc.len() == 89
        && fc.iter().all(|v| v.is_finite())
        && f.has_data_warning();
    let warnings: Vec<String> = f.warnings.iter().map(|w| w.to_string()).collect();
    (
        ok,
        format!(
            "converged in {} iterations, {} coefficients + intercept, {}-step forecast, warnings {warnings:?}",
            f.iterations,
            f.coefficients().len(),
            fc.len()
        ),
    )
}
