//! Constant-coefficient differential forms on `ℂ^d`: the pointwise model for
//! positivity on tori and for the linear-algebra arguments on Kähler manifolds.

mod form;
mod real;

pub use form::{subsets, Form, Mask, PPForm};
pub use real::{
    extend_hat, form_from_hermitian, form_from_real_coordinates, hermitian_from_11, hermitian_verdict,
    positivity_dminus1, random_hermitian_pd, random_kahler, real_basis, real_coordinates, restrict_to_plane,
    HermitianMatrix, KAHLER_SHIFT,
};

pub(crate) use form::indices_of;
