//! Construction data for Fedosov quantization on a chart, its validation,
//! the adaptedness conditions for `L = {p = 0}`, and the config format.

mod adaptedness;
pub mod config;
mod setup;

pub use adaptedness::{check_adapted_data, AdaptednessReport, ConditionVerdict};
pub use config::{parse_config, ConfigError, ConfigFile, ConfigLine};
pub use setup::{darboux_form, validate_setup, QuantizationSetup, RawSetup, ValidationError, Violation, S_BUDGET};
