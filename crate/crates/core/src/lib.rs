//! Construction and exact verification of hardness gadgets for the
//! ℓ_p-shortest-path problem on series-parallel graphs.

pub mod bell;
pub mod cli;
pub mod error;
pub mod io;
pub mod math;
pub mod report;
pub mod label_cover;
pub mod modified_vs;
pub mod reduction;
pub mod tensor;
pub mod trees;
pub mod vector_systems;

pub use error::{Error, Result};
