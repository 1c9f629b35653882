//! Compiles Hamiltonian time evolution into stochastic Zassenhaus expansion
//! circuits and Suzuki-Trotter product formulas, counts their gate costs,
//! and verifies error scaling against exact dense evolution at desk scale.

pub mod dense;
pub mod error;
pub mod models;
pub mod partition;
pub mod pauli;
pub mod plan;
pub mod series;
pub mod sim;
pub mod stochastic;

pub use error::{SzeError, SzeResult};
