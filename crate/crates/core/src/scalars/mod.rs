//! Exact coefficient arithmetic: involutive fields, the Laurent ring
//! K[x, x⁻¹] and its fraction field K(x).

mod field;
mod laurent;
mod ratfun;

use std::fmt;

pub use field::{check_positive_definite, parse_scalar, Definiteness, FieldKind, Scalar};
pub use laurent::Laurent;
pub use ratfun::RatFun;

/// A commutative ring with involution, as used for matrix entries.
pub trait Ring: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// The ring involution (an automorphism of order two here, since the
    /// entry rings are commutative).
    fn involve(&self) -> Self;
    fn from_scalar(c: Scalar) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

pub trait Field: Ring {
    fn inv(&self) -> Option<Self>;
}

macro_rules! forward_ops {
    ($($t:ty),*) => {$(
        impl std::ops::Add for &$t {
            type Output = $t;
            fn add(self, rhs: Self) -> $t { Ring::add(self, rhs) }
        }
        impl std::ops::Sub for &$t {
            type Output = $t;
            fn sub(self, rhs: Self) -> $t { Ring::sub(self, rhs) }
        }
        impl std::ops::Mul for &$t {
            type Output = $t;
            fn mul(self, rhs: Self) -> $t { Ring::mul(self, rhs) }
        }
        impl std::ops::Neg for &$t {
            type Output = $t;
            fn neg(self) -> $t { Ring::neg(self) }
        }
    )*};
}

forward_ops!(Scalar, Laurent, RatFun);
