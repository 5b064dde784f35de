//! SMT-LIB frontend for the covering engine, with a sampling QE verifier
//! and a naive CAD oracle for testing.

pub mod oracle;
pub mod parse;
pub mod print;
pub mod random;
pub mod run;
pub mod verify;
