#![no_std]
// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod econometrics;
pub mod error;
pub mod estimation;
pub mod evaluation;
pub mod linalg;
pub mod macro_vars;
pub mod model;
pub mod series;
pub mod special;
