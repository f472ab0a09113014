//! Floating point scalar abstraction shared by the statevector kernels.

use std::fmt::Debug;
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real scalar type the Pauli kernels are generic over: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + Default + Debug + Send + Sync + 'static
{
    /// Largest tolerated deviation of a state norm from one before a kernel
    /// reports drift.
    fn norm_tolerance() -> Self;

    /// Threshold below which round-off residues (imaginary parts of Hermitian
    /// expectation values, tiny negative variances) are discarded.
    fn residue_tolerance() -> Self;

    fn from_f64_lossy(value: f64) -> Self {
        Self::from_f64(value).expect("f64 always converts to a float type")
    }
}

impl Real for f32 {
    fn norm_tolerance() -> Self {
        1e-4
    }

    fn residue_tolerance() -> Self {
        1e-5
    }
}

impl Real for f64 {
    fn norm_tolerance() -> Self {
        1e-8
    }

    fn residue_tolerance() -> Self {
        1e-12
    }
}
