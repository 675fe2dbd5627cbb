use chrono::NaiveDate;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::adam::{AdamConfig, AdamState};
use super::cell::{accumulate_gradients, forward_sequence};
use super::params::LstmParams;
use crate::data::{AlignedDataset, PriceSeries, Sample, ScalerParams, DEFAULT_LOOKBACK};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
    pub hidden: usize,
    pub lookback: usize,
    /// Reshuffle sample order each epoch.
    pub shuffle: bool,
    /// Rescale each batch gradient to at most this L2 norm.
    pub clip_norm: Option<f64>,
    pub adam: AdamConfig,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 200,
            batch_size: 200,
            seed: 0,
            hidden: 32,
            lookback: DEFAULT_LOOKBACK,
            shuffle: false,
            clip_norm: None,
            adam: AdamConfig::default(),
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Config(what.to_string()));
        if self.epochs == 0 {
            return bad("epochs must be at least 1");
        }
        if self.batch_size == 0 {
            return bad("batch_size must be at least 1");
        }
        if self.hidden == 0 {
            return bad("hidden must be at least 1");
        }
        if self.lookback == 0 {
            return bad("lookback must be at least 1");
        }
        if self.clip_norm.is_some_and(|c| !(c > 0.0)) {
            return bad("clip_norm must be positive");
        }
        let a = &self.adam;
        if !(a.learning_rate > 0.0)
            || !(0.0..1.0).contains(&a.beta1)
            || !(0.0..1.0).contains(&a.beta2)
            || !(a.epsilon > 0.0)
        {
            return bad("adam hyperparameters out of range");
        }
        Ok(())
    }
}

/// Mean absolute error.
pub fn mae_loss(predictions: &[f64], targets: &[f64]) -> Result<f64> {
    if predictions.is_empty() {
        return Err(Error::Empty("predictions"));
    }
    if predictions.len() != targets.len() {
        return Err(Error::Shape(format!(
            "{} predictions for {} targets",
            predictions.len(),
            targets.len()
        )));
    }
    let total: f64 = predictions
        .iter()
        .zip(targets)
        .map(|(p, t)| (p - t).abs())
        .sum();
    Ok(total / predictions.len() as f64)
}

/// Subgradient of `|residual|`, zero at a tie.
fn abs_grad(residual: f64) -> f64 {
    if residual > 0.0 {
        1.0
    } else if residual < 0.0 {
        -1.0
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LstmModel {
    pub config: TrainConfig,
    pub params: LstmParams,
    pub optimizer: AdamState,
    /// Training MAE of each epoch, averaged over all samples seen in it.
    pub epoch_mae: Vec<f64>,
    /// Feature scalers of the data the model was trained on.
    pub scalers: Vec<ScalerParams>,
}

impl LstmModel {
    pub fn is_trained(&self) -> bool {
        !self.epoch_mae.is_empty()
    }

    pub fn final_mae(&self) -> Option<f64> {
        self.epoch_mae.last().copied()
    }

    pub fn with_scalers(mut self, scalers: &[ScalerParams]) -> Self {
        self.scalers = scalers.to_vec();
        self
    }

    /// Scaled prediction for one row-major window.
    pub fn predict_window(&self, window: &[f64]) -> Result<f64> {
        Ok(forward_sequence(&self.params, window)?.prediction)
    }
}

/// Trains a fresh network on `samples`, in order, one Adam update per batch
/// of at most `batch_size` samples (the last batch of an epoch may be
/// smaller). Batch gradients are averaged over the batch's actual size.
pub fn train(config: &TrainConfig, samples: &[Sample]) -> Result<LstmModel> {
    config.validate()?;
    let first = samples.first().ok_or(Error::Empty("training samples"))?;
    let features = first.features;
    let steps = first.steps();
    if steps != config.lookback {
        return Err(Error::Shape(format!(
            "samples have {steps} steps but lookback is {}",
            config.lookback
        )));
    }
    if samples
        .iter()
        .any(|s| s.features != features || s.input.len() != steps * features)
    {
        return Err(Error::Shape("samples differ in shape".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut params = LstmParams::init_uniform(config.hidden, features, &mut rng);
    // start the read-out at the mean target so updates go to the shape, not the level
    let mean_target = samples.iter().map(|s| s.target).sum::<f64>() / samples.len() as f64;
    params.set_readout_bias(mean_target);
    let mut optimizer = AdamState::for_params(config.adam, &params);
    let mut grads = LstmParams::zeros(config.hidden, features);
    let mut order: Vec<usize> = (0..samples.len()).collect();
    let mut epoch_mae = Vec::with_capacity(config.epochs);

    for epoch in 0..config.epochs {
        if config.shuffle {
            order.shuffle(&mut rng);
        }
        let mut abs_total = 0.0;
        for batch in order.chunks(config.batch_size) {
            grads.fill(0.0);
            let weight = 1.0 / batch.len() as f64;
            for &k in batch {
                let sample = &samples[k];
                let trace = forward_sequence(&params, &sample.input)?;
                let residual = trace.prediction - sample.target;
                abs_total += residual.abs();
                accumulate_gradients(&params, &trace, weight * abs_grad(residual), &mut grads)?;
            }
            if let Some(limit) = config.clip_norm {
                let norm = grads.norm();
                if norm > limit {
                    grads.scale(limit / norm);
                }
            }
            optimizer.step(params.as_mut_slice(), grads.as_slice())?;
        }
        if !params.is_finite() {
            return Err(Error::Numeric(format!(
                "parameters diverged in epoch {}",
                epoch + 1
            )));
        }
        let mae = abs_total / samples.len() as f64;
        log::debug!("epoch {}: training MAE {mae:.6}", epoch + 1);
        epoch_mae.push(mae);
    }

    Ok(LstmModel {
        config: config.clone(),
        params,
        optimizer,
        epoch_mae,
        scalers: Vec::new(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PredictMode {
    /// Every window is built from observed values.
    #[default]
    OneStep,
    /// Test-period primary values in the window are the model's own earlier
    /// predictions.
    Recursive,
}

/// Forecasts every test date of `dataset`, in index points.
pub fn predict(
    model: &LstmModel,
    dataset: &AlignedDataset,
    mode: PredictMode,
) -> Result<PriceSeries> {
    if !model.is_trained() {
        return Err(Error::Untrained);
    }
    let test = dataset.test_rows();
    if test.is_empty() {
        return Err(Error::Empty("test segment"));
    }
    if dataset.n_features() != model.params.input() {
        return Err(Error::Shape(format!(
            "model expects {} features, dataset has {}",
            model.params.input(),
            dataset.n_features()
        )));
    }
    if !model.scalers.is_empty() && model.scalers != dataset.scalers() {
        return Err(Error::Shape(
            "dataset scaling differs from the model's training data".into(),
        ));
    }
    let lookback = model.config.lookback;
    if test.start < lookback {
        return Err(Error::InsufficientData(format!(
            "{} rows precede the test segment, lookback needs {lookback}",
            test.start
        )));
    }

    let features = dataset.n_features();
    let mut primary = dataset.scaled_column(0).to_vec();
    let mut scaled_out = Vec::with_capacity(test.len());
    let mut window = Vec::with_capacity(lookback * features);
    for row in test.clone() {
        window.clear();
        for (r, &value) in primary.iter().enumerate().take(row).skip(row - lookback) {
            window.push(value);
            window.extend((1..features).map(|f| dataset.scaled_column(f)[r]));
        }
        let y = model.predict_window(&window)?;
        if mode == PredictMode::Recursive {
            primary[row] = y;
        }
        scaled_out.push(y);
    }

    let scaler = dataset.primary_scaler();
    let dates: Vec<NaiveDate> = dataset.test_dates().to_vec();
    let name = match mode {
        PredictMode::OneStep => "lstm",
        PredictMode::Recursive => "lstm-recursive",
    };
    PriceSeries::forecast(name, dates, scaler.invert_all(&scaled_out))
}
