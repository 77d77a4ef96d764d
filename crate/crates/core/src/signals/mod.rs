//! Waveform synthesis: constellations, pulse shapes, single-carrier and OFDM
//! interference, the LFM signal of interest, noise, and composed scenarios.

mod constellation;
mod modulate;
mod pulse;
mod scenario;

pub use constellation::{make_constellation, Constellation};
pub use modulate::{
    apply_waveform_params, awgn, demodulate_ofdm, lfm_soi, modulate_ofdm, modulate_single_carrier,
    OfdmConfig,
};
pub use pulse::{rrc_pulse, PulseShape};
pub use scenario::{compose_scenario, InterferenceKind, Scenario, ScenarioConfig, SoiConfig};
