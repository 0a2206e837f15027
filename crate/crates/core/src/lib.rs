//! Exact and approximate triangle counting on a simulated distributed-memory
//! machine.

pub mod dist;
pub mod driver;
pub mod gen;
pub mod graph;
pub mod num;
pub mod routing;
pub mod runtime;
pub mod seq;

pub use num::Real;

pub type CostModelF64 = runtime::CostModel<f64>;
pub type CostModelF32 = runtime::CostModel<f32>;
pub type CostReportF64 = runtime::CostReport<f64>;
pub type CostReportF32 = runtime::CostReport<f32>;
pub type TriangleResultF64 = dist::TriangleResult<f64>;
pub type TriangleResultF32 = dist::TriangleResult<f32>;
pub type RunReportF64 = driver::RunReport<f64>;
pub type RunReportF32 = driver::RunReport<f32>;
pub type GeometricGraphF64 = gen::GeometricGraph<f64>;
pub type GeometricGraphF32 = gen::GeometricGraph<f32>;
