//! Exact-arithmetic engine for truncated bivariate series of
//! quasi-modular and quasi-Jacobi forms, with certification and
//! table-extraction utilities on top.

pub mod certify;
pub mod cli;
pub mod jacobi;
pub mod linalg;
pub mod modular;
pub mod rational;
pub mod series;
pub mod tables;
pub mod verify;
pub mod ycoords;
