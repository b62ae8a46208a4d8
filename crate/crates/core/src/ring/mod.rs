//! Finite-dimensional graded commutative rings with a top-degree integral.

mod bundle;
mod expr;
mod model;
mod relations;
mod subring;
mod torus;

pub use bundle::{ProductWithP1, ProjectiveBundle};
pub use expr::{eval_in, monomial_text, parse_expr, parse_monomial, Expr};
pub use model::{Model, MultTable, RingElement, RingModel, SparseVec};
pub use relations::{free_ring, relation_ring, GeneratorSpec, IntegralSpec, IntegrationSpec, RelationSpec, RingSpec};
pub use subring::{subring, subring_with_tolerance, Subring};
pub use torus::{torus_element, torus_element_with_tolerance, torus_form, torus_ring};
