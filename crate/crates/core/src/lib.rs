//! Exact exponent calculus and empirical tooling for Hardy-Littlewood
//! type inequalities on sequence spaces.
//!
//! The crate splits into five layers:
//! - [`scalar`]: exact rationals extended with `inf`, with the conventions
//!   `1/inf = 0` and `1/0 = inf`.
//! - [`instance`] and [`exponents`]: problem instances, regime
//!   classification and the exponent tuples of the known theorems,
//!   all in exact arithmetic.
//! - [`tensor`]: dense coefficient tensors, nested mixed norms and
//!   reproducible random sign forms.
//! - [`norm`]: operator norms over products of `l_p` balls, by alternating
//!   dual ascent (lower bounds) or extreme-point enumeration (exact).
//! - [`lab`]: growth experiments, slope fits, perturbation scans and
//!   region classification grids.

pub mod error;
pub mod exponents;
pub mod instance;
pub mod lab;
pub mod norm;
pub mod scalar;
pub mod tensor;

pub use error::{ExponentError, LabError, NormError, TensorError};
pub use exponents::{Admissibility, ExponentTuple, PowerOfTwo, TupleSource};
pub use instance::{HLInstance, RegimeClass};
pub use lab::{GrowthExperiment, GrowthReport, GrowthVerdict, NormMethod, RegionSample};
pub use norm::{BallSpec, NormEstimate};
pub use scalar::{parse_scalar_list, ExtScalar, Rat};
pub use tensor::{CoefficientTensor, MixedNormSpec};
