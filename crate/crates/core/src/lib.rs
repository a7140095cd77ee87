pub mod cli;
pub mod dynamics;
pub mod error;
pub mod fock;
pub mod logical;
pub mod model;
pub mod scalar;
pub mod topology;
pub mod twolevel;
pub mod wigner;

pub use error::{Error, Result};

pub type C64 = scalar::Cplx<f64>;
pub type Operator = fock::Operator<f64>;
pub type StateVector = fock::StateVector<f64>;
pub type LogicalFrame = logical::LogicalFrame<f64>;
