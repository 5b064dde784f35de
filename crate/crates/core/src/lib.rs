//! Exact decision procedure and quantifier elimination for non-linear real
//! arithmetic based on cylindrical algebraic coverings.

pub mod poly;
pub mod ralg;
pub mod formula;
pub mod implicants;
pub mod cells;
pub mod engine;
