//! Exact stratified computations for curved Koszul duality of algebras over
//! binary unital operads.

pub mod graded;
pub mod bar_cobar;
pub mod curved_coalgebra;
pub mod enveloping;
pub mod facthom;
pub mod koszul_dual;
pub mod operad_core;
pub mod qlinalg;
pub mod symplectic_poisson;
