//! Memristor device models, behavioral CMOS-memristor circuit blocks, and the
//! neuromorphic pipelines built from them: a threshold logic unit, a small
//! softmax classifier with bridge-quantized weights, and a 3x3 convolution
//! engine over images.
//!
//! ```
//! use memristive::blocks::{bridge_weight, BridgeSynapse};
//! use memristive::device::DeviceParams;
//!
//! let bridge = BridgeSynapse::from_states(DeviceParams::hp_linear(), [1.0, 0.0, 1.0, 0.0]);
//! assert!((bridge_weight(&bridge) - 80.0 / 82.0).abs() < 1e-12);
//! ```

// `!(x > 0.0)` is deliberate throughout: it rejects NaN along with the range.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blocks;
pub mod device;
mod error;
pub mod formats;
mod integrate;
pub mod nn;
pub mod vision;

pub use error::{Error, Location, Result};
pub use integrate::rk4_step;

/// Library version, recorded in run metadata by the command-line tool.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// The guide under `book/` runs its listings as doc-tests through these modules.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/devices.md")]
    mod devices {}
    #[doc = include_str!("../../../book/src/bridge.md")]
    mod bridge {}
    #[doc = include_str!("../../../book/src/blocks.md")]
    mod blocks {}
    #[doc = include_str!("../../../book/src/tlu.md")]
    mod tlu {}
    #[doc = include_str!("../../../book/src/classifier.md")]
    mod classifier {}
    #[doc = include_str!("../../../book/src/vision.md")]
    mod vision {}
    #[doc = include_str!("../../../book/src/formats.md")]
    mod formats {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
