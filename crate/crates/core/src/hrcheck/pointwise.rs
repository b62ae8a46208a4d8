use super::pair::is_hr_pair;
use crate::error::{Error, Result};
use crate::exterior::{hermitian_from_11, hermitian_verdict, Form};
use crate::ring::{torus_element_with_tolerance, torus_ring, Model};
use crate::scalar::Scalar;
use crate::verdict::Verdict;

/// Pointwise Hodge–Riemann pair test of forms on `ℂ^d`: the algebraic test
/// in the torus ring with `h = ω`, which also covers the side conditions
/// `∫Ω_{d−2}∧ω² > 0` and `∫Ω_{d−1}∧ω > 0`.
pub fn pointwise_hr_pair<F: Scalar>(omega1: &Form<F>, omega2: &Form<F>, omega: &Form<F>, tol: f64) -> Result<Verdict> {
    let model = torus_ring::<F>(omega.dim())?;
    pointwise_hr_pair_in(&model, omega1, omega2, omega, tol)
}

/// As [`pointwise_hr_pair`] with a prebuilt [`torus_ring`] of matching
/// dimension.
pub fn pointwise_hr_pair_in<F: Scalar>(
    model: &Model<F>,
    omega1: &Form<F>,
    omega2: &Form<F>,
    omega: &Form<F>,
    tol: f64,
) -> Result<Verdict> {
    let d = model.dim();
    for f in [omega1, omega2, omega] {
        if f.dim() != d {
            return Err(Error::DimensionMismatch {
                left: d,
                right: f.dim(),
            });
        }
    }
    let pd = hermitian_verdict(&hermitian_from_11(omega, tol)?, tol);
    if !pd.is_pass() {
        return Err(Error::Precondition("ω is not positive definite".into()));
    }
    let e1 = torus_element_with_tolerance(model, omega1, tol)?;
    let e2 = torus_element_with_tolerance(model, omega2, tol)?;
    let h = torus_element_with_tolerance(model, omega, tol)?;
    Ok(is_hr_pair(&e1, &e2, &h, tol)?.with_check("omega-positive", true, true))
}
