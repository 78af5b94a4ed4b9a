//! States and measures on EMV-algebras.

pub mod algebra;
pub mod gen;
pub mod measures;
pub mod states;
pub mod structure;
