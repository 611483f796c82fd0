//! Coherent pairs of orthogonal polynomial sequences and the semiclassical
//! character of their functionals.

pub mod coherence;
pub mod combinat;
pub mod error;
pub mod functional;
pub mod griffin;
pub mod matrix;
pub mod ops;
pub mod poly;
pub mod scalar;
pub mod semiclassical;

pub use coherence::{compute_band, minimal_index, verify_coherence, Band, CoherencePair, Verdict, Violation};
pub use error::{AlgebraError, CoherenceError, FunctionalError, GriffinError, OpsError, SemiclassicalError};
pub use griffin::{end_to_end_verify, GriffinInput, GriffinReport, WeightSpec};
pub use functional::{MomentFunctional, MomentResidual};
pub use ops::{expand_in_basis, MonicOps};
pub use matrix::PolyMatrix;
pub use poly::{Dilation, Polynomial};
pub use scalar::{FloatContext, HpFloat, Rational, Scalar};
