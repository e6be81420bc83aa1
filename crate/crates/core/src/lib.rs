pub mod cli;
pub mod error;
pub mod estimation;
pub mod linalg;
pub mod models;
pub mod sweep;
