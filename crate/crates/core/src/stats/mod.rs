//! Statistical properties of generated channels.

pub mod correlation;
pub mod fit;
pub mod psd;
pub mod spread;

pub use correlation::{acf, ccf, correlation, fcf, CorrelationResult, Estimator, LagAxis};
pub use fit::{fit_parameter, Bound, FitOptions, FitResult};
pub use psd::{delay_psd, psd_correlation, stationary_extent, stationary_intervals, DelayPsd, StationaryAxis, StationarySearch};
pub use spread::{empirical_cdf, ks_gaussian, rms_delay_spread, AngleDim};
