//! Exact tropical Hilbert functions, independence certificates and degree
//! bounds for one-dimensional min-plus prevarieties.

pub mod commands;
pub mod degree;
pub mod envelope;
pub mod error;
pub mod fm;
pub mod hilbert;
pub mod independence;
pub mod linalg;
pub mod model;
pub mod poly;
pub mod prevariety;
pub mod report;
pub mod scalar;

pub use error::{Error, Result};
pub use poly::{eval, eval_poly, poly_degree, restrict_to_segment, Monomial, Point, TropPoly};
pub use prevariety::{
    decompose_equations, star_to_prevariety, Branch, Halfspace, ParamBound, Polyhedron,
    Prevariety, Relation, Segment, Star,
};
pub use scalar::{ExtRat, PerturbedScalar, Q};
