// `!(x < y)` is used on purpose so that NaN lands on the error path.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod aaa;
pub mod barycentric;
pub mod cli;
pub mod config;
pub mod error;
pub mod fieldmap;
pub mod geometry;
pub mod lawson;
pub mod linalg;
pub mod presets;
pub mod report;
pub mod zolotarev;

pub use error::{Error, Result};
