//! Well-balanced finite-volume solvers for balance laws on a Schwarzschild
//! background: the relativistic Burgers equation (orders 1 to 3) and the
//! isothermal relativistic Euler system (orders 1 and 2).

pub mod burgers;
pub mod config;
pub mod driver;
pub mod error;
pub mod euler;
pub mod experiments;
pub mod grid;
pub mod limiters;
pub mod roots;
pub mod time;

pub use config::RunConfig;
pub use error::{Result, SolverError};
pub use grid::Grid;
