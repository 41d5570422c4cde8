//! Floating-point scalar abstraction.
//!
//! All learner state is parameterized over [`Scalar`] so the whole
//! pipeline can run in `f64` (the default everywhere) or in `f32` for
//! numerical-stability studies. Only these two types implement the trait.

use num_traits::Float;

/// Scalar type usable as learner state.
pub trait Scalar: Float + std::fmt::Debug + std::fmt::Display + Default + 'static {
    /// Relative pivot tolerance below which a hyperbolic rotation is
    /// declared broken down: `a² − b² < tol · max(1, a²)`.
    fn breakdown_tol() -> Self;

    /// Bound on entries that the rotations annihilate structurally,
    /// checked in debug builds.
    fn trailing_zero_tol() -> Self;

    fn from_f64(v: f64) -> Self;
    fn to_f64(self) -> f64;
}

impl Scalar for f64 {
    fn breakdown_tol() -> Self {
        1e-14
    }

    fn trailing_zero_tol() -> Self {
        1e-8
    }

    fn from_f64(v: f64) -> Self {
        v
    }

    fn to_f64(self) -> f64 {
        self
    }
}

impl Scalar for f32 {
    // Same multiple of machine epsilon as the f64 tolerance.
    fn breakdown_tol() -> Self {
        5.4e-6
    }

    fn trailing_zero_tol() -> Self {
        1e-2
    }

    fn from_f64(v: f64) -> Self {
        v as f32
    }

    fn to_f64(self) -> f64 {
        self as f64
    }
}
