//! Exact analysis of birational dynamics on the Néron–Severi lattice of a
//! Calabi–Yau threefold.
//!
//! The pipeline runs bottom-up through the modules: intersection numbers
//! of a complete intersection in a product of projective spaces
//! ([`chow`]), the lattice of divisor and curve classes with its
//! cone-exclusion certificates ([`lattice`]), synthesis of the integer
//! matrices of fiberwise translations ([`translation`]), exact root
//! isolation for dynamical degrees ([`roots`]) and finally the primitivity
//! criterion ([`primitivity`]). Everything is exact; [`linalg`] supplies
//! rational matrices and polynomials.

pub mod chow;
pub mod lattice;
pub mod linalg;
pub mod primitivity;
pub mod roots;
pub mod translation;
