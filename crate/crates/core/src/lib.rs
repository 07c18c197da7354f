pub mod chain;
pub mod codes;
pub mod galois;
pub mod random;
pub mod sring;
pub mod torsion;
pub mod weights;
