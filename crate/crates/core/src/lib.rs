//! Exact equivariant quantum cohomology of the Hilbert scheme of points in
//! the plane, built from the operator of quantum multiplication by the
//! divisor on Fock space.

pub mod exact;
pub mod fock;
pub mod partitions;
pub mod operators;
pub mod jack;
pub mod invariants;
pub mod qde;
pub mod verify;
