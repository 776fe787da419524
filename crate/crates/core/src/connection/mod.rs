//! Linear differential systems over `Q(z)`: series solutions at ordinary
//! points, polynomial sections of the dual bundle with their derivative, the
//! pairing with germs and symmetric powers.

pub mod section;
pub mod symmetric;
pub mod system;

pub use section::{derivative_tower, dual_derivative, local_solution_basis, pair, PolySection};
pub use symmetric::{monomial_exponents, monomial_lift, solves_system, symmetric_power_system};
pub use system::{DerivationField, DifferentialSystem, PoleEntry, PolePoint, SystemDocument};
