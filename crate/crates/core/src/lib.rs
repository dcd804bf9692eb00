#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod crease_pattern;
pub mod double_line;
mod error;
pub mod fold3d;
pub mod geom;
pub mod kinematics;
pub mod patterns;
pub mod symmetric;
pub mod thickening;

pub use error::{Error, Result};
