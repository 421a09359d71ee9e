//! Exact symbolic workbench for quantized enveloping algebras of classical
//! type, their l-functionals and the FRT coordinate algebra.

pub mod coorddouble;
pub mod lfun;
pub mod linalg;
pub mod rootdata;
pub mod scalar;
pub mod uqg;
pub mod verify;

pub use rootdata::{LieType, RootDatum, RootTable, RootVec, Weight};
pub use num_traits::{One, Zero};
pub use scalar::{EvalQ, QField, RatFunc, ScalarError, ScalarQ};
pub use uqg::{BraidConvention, Mono, Tensor, UElem, Uqg, UqgError};

pub type Scalar = ScalarQ;
pub type Element = UElem<ScalarQ>;
pub type TensorElem = Tensor<ScalarQ>;
pub type Uq = Uqg<ScalarQ>;
pub type PbwElem = uqg::pbw::PbwElement<ScalarQ>;
pub type LFunctionals = lfun::Lfun<ScalarQ>;
pub type RMatrix = lfun::RMatrixVV<ScalarQ>;
pub type Coord = coorddouble::CoordElement<ScalarQ>;
pub type Double = coorddouble::DoubleElement<ScalarQ>;
