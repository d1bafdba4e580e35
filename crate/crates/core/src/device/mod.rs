//! Memristor constitutive models, window functions and state integration.

mod model;
mod params;
mod simulate;
mod window;

pub use model::{memristance, state_derivative, step_state, MemristorState, Polarity};
pub(crate) use model::{advance, advance_pair, memristance_unchecked};
pub use params::{DeviceParams, LinearDrift, Model, NonlinearDrift, Team, TeamVariant};
pub use simulate::{simulate_drive, simulate_fn, SimSample, SimTrace, Waveform, DEFAULT_DT};
pub use window::{window_value, Window};
