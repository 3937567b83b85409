//! Storage, products, reflectors and rotations.

pub mod blas;
pub mod givens;
pub mod householder;
pub mod matrix;

pub use blas::{gemm, gemv, triangular_solve, Side, Trans};
pub use givens::{givens_generate, rotate_columns, GivensRotation};
pub use householder::{householder_generate, HouseholderReflector};
pub use matrix::{Mat, MatMut, MatRef};
