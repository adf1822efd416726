//! Hilbert bases, support hyperplanes and Hilbert series of rational cones,
//! with monomial-algebra and file-protocol frontends.

pub mod cone;
pub mod error;
pub mod grading;
pub mod hilbert;
pub mod input;
pub mod io;
pub mod linalg;
pub mod ring;

pub use cone::Cone;
pub use error::{Error, Result};
pub use grading::{Grading, HilbertSeriesData};
pub use hilbert::{ConeProblem, HilbertBasisResult};
pub use input::{
    compute_cone, ComputationMode, ComputationOptions, InputItem, InputSystem, InputType, InvValue, RationalCone,
};
pub use linalg::{IntMatrix, IntVector, LatticeBasis};
pub use ring::{BinomialIdealInput, MonomialIdealInput, MonomialSubalgebra, RingDescriptor};
