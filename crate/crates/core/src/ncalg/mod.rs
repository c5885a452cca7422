//! Truncated noncommutative algebras: presentations, normal forms, the
//! NC-filtration and enveloping algebras of Lie algebroids.

pub mod algebra;
pub mod envelope;
pub mod filtration;
pub mod poly;
pub mod presentation;

pub use algebra::{Element, TruncatedAlgebra};
pub use envelope::{
    enveloping_presentation, pbw_dimension_check, weight_filtration, BracketEntry, LieAlgebroidPresentation,
    PbwReport,
};
pub use filtration::{abelianization, lcs_term, nc_filtration, quotient_rd, rd_presentation, NcFiltration};
pub use poly::{JsonTerm, NcPoly, Word};
pub use presentation::{build_truncated, normal_form, Generator, Presentation, Rewriter, WordSpace};

/// `[a, b] = ab - ba`.
pub fn commutator(a: &NcPoly, b: &NcPoly) -> NcPoly {
    a.commutator(b)
}
