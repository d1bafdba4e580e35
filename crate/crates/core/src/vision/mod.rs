//! Image convolution through the bridge kernel engine, image and signal
//! codecs, and pooling.

mod image;
mod kernel;
mod pool;

pub use image::{ImageGrid, PixelVoltageMap};
pub use kernel::{
    conv_forward, image_to_signals, run_kernel, signals_to_image, KernelSignals, KernelSpec, Realization,
    DEFAULT_DT_PIXEL, DEFAULT_R_LOAD, DEFAULT_TRANSCONDUCTANCE,
};
pub use pool::{pool_image, pooled_len, PoolKind};
