//! Neural-network pipelines: the small softmax classifier with float and
//! bridge-quantized evaluation, its dataset, and the memristive threshold
//! logic unit.

mod dataset;
mod network;
mod tlu;
mod train;

pub use dataset::{scale_feature, Dataset, Label, Sample, Split, FEATURES};
pub use network::{forward, softmax, Activation, NetMode, NetworkSpec};
pub use tlu::{
    adaline_eval, mr2_run, mr2_train, resistance_to_weight, tlu_output, weight_to_resistance, weights_to_resistances,
    AdalineSpec, Gate, Mr2Run, MR2_GROWTH, MR2_INITIAL_STEP, MR2_STALL_LIMIT, TABLE_R_HIGH, TABLE_R_LOW,
};
pub use train::{accuracy, confusion, mean_loss, train, train_report, TrainConfig, TrainReport};
