//! Coefficient types shared by the spin factor and Clifford kernels.
//!
//! Two arithmetic modes are supported: exact `i64` coefficients for identity
//! checks and `f64` for everything that needs division or square roots.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + AddAssign
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const ZERO: Self;
    const ONE: Self;
    /// True when arithmetic in this type is exact.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;
    fn to_f64(self) -> f64;

    /// Equality used by identity checks: exact for integers, relative
    /// tolerance `rel` (scaled by `1 + scale`) for floats.
    fn close(self, other: Self, rel: f64, scale: f64) -> bool;
}

impl Scalar for i64 {
    const ZERO: Self = 0;
    const ONE: Self = 1;
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        v
    }

    fn to_f64(self) -> f64 {
        self as f64
    }

    fn close(self, other: Self, _rel: f64, _scale: f64) -> bool {
        self == other
    }
}

impl Scalar for f64 {
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn close(self, other: Self, rel: f64, scale: f64) -> bool {
        (self - other).abs() <= rel * (1.0 + scale.abs())
    }
}
