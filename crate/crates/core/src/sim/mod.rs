//! Gaussian MAC simulation: relay decoding, Monte Carlo error rates,
//! modulo-lattice equivalence checks, empirical secrecy statistics, and the
//! power-rate bookkeeping.

pub mod channel;
pub mod rates;
pub mod secrecy;

pub use channel::{
    decode_received, error_rate, error_rate_noise_only, mac_round, mlan_equivalence_check,
    noiseless_decode_failures, trial_rng, wilson_interval, ChannelConfig, MacRound, MlanReport,
    SimResult,
};
pub use rates::{achievable_rate, power_ratio_to_asymptote, power_rate_sweep, target_point, SweepConfig, SweepRow};
pub use secrecy::{secrecy_empirical, ConditionOn, SecrecyEmpiricalReport};
