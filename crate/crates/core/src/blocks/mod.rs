//! Behavioral models of the analog building blocks: the bridge synapse, the
//! current-mode arithmetic cells, the rational tanh chain and the diode
//! max-pool selector.

mod bridge;
mod current;
mod pool;
mod tanh;

pub use bridge::{
    bridge_apply, bridge_weight, max_bridge_weight, plan_weight, program_bridge, program_to_weight, quantize_weight,
    raising_polarity, weight_from_memristances, BridgeSynapse, ProgrammingPlan, WEIGHT_TOLERANCE,
};
pub use current::{
    divider, gain_mirror, multiplier, relu, squarer, summing, BlockMode, BlockNonideality, DEFAULT_I_REF,
};
pub use pool::max_pool_block;
pub use tanh::{
    calibrate_tanh, normalized_fit_error, pade_tanh, tanh_block, tanh_block_structural, tanh_seed, TanhCalibration,
};
