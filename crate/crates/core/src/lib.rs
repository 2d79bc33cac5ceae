//! Pentagonal quasigroups: linear forms over `Z_n`, automorphism-induced
//! forms over finite Abelian groups, translatability and parastrophes.

pub mod abelian;
pub mod arith;
pub mod cayley;
pub mod cli;
pub mod enumerate;
pub mod error;
pub mod parastro;
pub mod pentagon;
pub mod translat;

pub use error::{Error, Result};
