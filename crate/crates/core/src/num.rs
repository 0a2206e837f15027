//! Floating-point scalar abstraction.
//!
//! Counts are always exact `u64`. Everything real-valued (modeled time,
//! clustering coefficients, approximate estimates, geometric coordinates) is
//! generic over [`Real`] so both `f32` and `f64` pipelines can be built.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    fn of_u64(v: u64) -> Self {
        <Self as FromPrimitive>::from_u64(v).unwrap()
    }

    fn of_f64(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).unwrap()
    }

    fn as_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap()
    }
}

impl Real for f32 {}
impl Real for f64 {}
