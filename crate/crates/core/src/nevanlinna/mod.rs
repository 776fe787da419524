//! Numerical Nevanlinna theory on the projective line: exhaustion functions
//! with poles on a divisor, harmonic measures on their level curves, growth
//! functionals and order-of-growth fits.

pub mod exhaustion;
pub mod functionals;
pub mod maps;

pub use exhaustion::{DivisorPoint, ExhaustionFunction, LevelConvention, LevelCurve, LevelSample};
pub use functionals::{
    characteristic, characteristic_profile, counting, growth_order_fit, log_grid, nevanlinna_suite, pairing_log_abs_at,
    proximity, two_point_estimate_check, NevanlinnaReport, NevanlinnaRow, TwoPointInputs, TwoPointReport,
};
pub use maps::AnalyticMap;
