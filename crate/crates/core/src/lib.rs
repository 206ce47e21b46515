//! Exact-arithmetic library for deciding and constructing quadratic descent
//! of quadratic forms, systems of quadratic forms, and hermitian forms over
//! division algebras with involution of the first kind, across separable
//! quadratic field extensions, in arbitrary characteristic.
//!
//! The decision engines are three-valued: `yes` ships with a verified
//! certificate, `no` ships with an independently recomputable obstruction,
//! and searches that run out of budget report `undecided` rather than guess.

pub mod cli;
pub mod descent;
pub mod error;
pub mod fields;
pub mod linalg;
pub mod oracle;
pub mod quadforms;
pub mod report;
pub mod hermitian;
pub mod quaternion;
pub mod scenario;
pub mod search;
pub mod selftest;

pub use error::{Decision, Error, Result};
pub use fields::{Elem, Field, FieldTower};

#[cfg(test)]
mod thread_safety {
    // field descriptors, elements and forms are immutable value types and
    // must stay shareable across threads
    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn core_types_are_send_and_sync() {
        assert_send_sync::<crate::fields::Field>();
        assert_send_sync::<crate::fields::Elem>();
        assert_send_sync::<crate::quadforms::QuadraticForm>();
        assert_send_sync::<crate::quadforms::QuadraticSystem>();
        assert_send_sync::<crate::quaternion::AlgebraWithInvolution>();
        assert_send_sync::<crate::hermitian::HermitianForm>();
        assert_send_sync::<crate::descent::DescentVerdict>();
    }
}
