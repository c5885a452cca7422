//! Exact computational algebra for noncommutative filtrations, étale lifting,
//! microlocalization and a finite-group model of Fourier–Mukai kernels.
//!
//! Everything here works over exact fields: the rationals for the
//! noncommutative side and cyclotomic fields `Q(ζ_e)` for the kernel side.
//! Identity checks are equalities, never tolerances.

pub mod cyclotomic;
pub mod dsl;
pub mod error;
pub mod etale;
pub mod fmkernel;
pub mod linalg;
pub mod microloc;
pub mod oracle;
pub mod ncalg;
pub mod rational;
pub mod report;

pub use cyclotomic::{Cyclotomic, CyclotomicField};
pub use error::{Error, Result};
pub use etale::{AlgebraMorphism, CentralExtension, EtaleDiagram};
pub use fmkernel::{FiniteAbGroup, GradedModule, Kernel, QuasiSpecialAlgebra, TransKernel};
pub use linalg::{Echelon, SparseVec, Subspace};
pub use microloc::{FilteredAlgebra, MicroGraded, TAdicModule};
pub use ncalg::{Element, LieAlgebroidPresentation, NcPoly, Presentation, TruncatedAlgebra, Word};
pub use rational::Q;
pub use report::Report;
