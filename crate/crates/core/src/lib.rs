//! Exact invariants and looseness certificates for Legendrian and transverse
//! knots in contact 3-manifolds.

pub mod calculus;
pub mod certify;
pub mod diagram;
pub mod knotdata;
pub mod linalg;
pub mod rational;
pub mod surgery;
