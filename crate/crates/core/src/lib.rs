pub mod cli;
pub mod conformal;
pub mod connection;
pub mod curvature;
pub mod error;
pub mod jet;
pub mod metric;
pub mod report;
pub mod sampling;
pub mod tensor;
pub mod warped;
pub mod zoo;
