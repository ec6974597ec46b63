//! Verification engine comparing Floer-theoretic and sheaf-theoretic
//! computations for nodal curves against explicit algebra presentations.

pub mod bside;
pub mod cech;
pub mod cli;
pub mod compare;
pub mod curve;
pub mod error;
pub mod exact_linalg;
pub mod floer;
pub mod limit;
pub mod model;
pub mod poly;
pub mod presentation;
pub mod ratfun;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
