//! Single-layer LSTM with a linear read-out, trained on min-max scaled
//! windows with MAE loss and Adam.

mod activation;
mod adam;
mod cell;
mod checkpoint;
mod params;
mod train;

pub use activation::{sigmoid, tanh_act};
pub use adam::{adam_step, AdamConfig, AdamState};
pub use cell::{
    backward_through_time, forward_sequence, lstm_cell_forward, CellState, SequenceTrace, StepCache,
};
pub use checkpoint::{load_checkpoint, save_checkpoint};
pub use params::{Gate, LstmParams};
pub use train::{mae_loss, predict, train, LstmModel, PredictMode, TrainConfig};
