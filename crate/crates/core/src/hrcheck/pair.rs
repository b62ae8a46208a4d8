use super::gram::{gram, GramForm};
use crate::error::{Error, Result};
use crate::linalg::{inertia, nullspace, solve_unique, Matrix};
use crate::ring::RingElement;
use crate::scalar::{is_positive, Scalar};
use crate::verdict::{Outcome, Verdict};

fn strs<F: Scalar>(v: &[F]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn check_degree<F: Scalar>(el: &RingElement<F>, expected: usize) -> Result<()> {
    if el.degree() != expected {
        return Err(Error::DegreeMismatch {
            expected,
            found: el.degree(),
        });
    }
    Ok(())
}

/// Hodge–Riemann property of `η` (degree `d − 2`) with respect to `h`:
/// `∫h²η > 0` and `Q_η` negative definite on the `Q`-orthogonal complement of
/// `h`, i.e. signature `(1, 0, n − 1)`.
///
/// A degenerate form gives [`Outcome::Degenerate`] with a kernel vector as
/// witness. A failure carries either `h` itself (when `∫h²η ≤ 0`) or a
/// nonzero `α` with `Q(α, h) = 0` and `Q(α, α) ≥ 0`.
pub fn has_hr_property<F: Scalar>(eta: &RingElement<F>, h: &RingElement<F>, tol: f64) -> Result<Verdict> {
    let q = gram(eta)?;
    hr_property_of(&q, h, tol)
}

pub(crate) fn hr_property_of<F: Scalar>(q: &GramForm<F>, h: &RingElement<F>, tol: f64) -> Result<Verdict> {
    check_degree(h, 1)?;
    let n = q.dim();
    let (sig, cong, eig) = inertia(&q.matrix, tol);
    let qhh = q.eval(h, h)?;
    let scale = q.matrix.max_abs() * h.max_abs().powi(2);
    let qhh_ok = is_positive(&qhh, scale, tol);
    let v = Verdict::new(Outcome::Pass, &sig, eig, F::EXACT, tol).with_check("h^2*eta", &qhh, qhh_ok);
    let col = |i: usize| cong.basis.column(i);
    let diag_scale = cong.diag.iter().map(Scalar::abs_f64).fold(0.0, f64::max);
    if sig.zero > 0 {
        let k = (0..n).find(|&i| cong.diag[i].negligible(diag_scale, tol)).expect("a zero pivot");
        return Ok(Verdict {
            outcome: Outcome::Degenerate,
            ..v
        }
        .with_witness("kernel", strs(&col(k))));
    }
    if !qhh_ok {
        return Ok(Verdict {
            outcome: Outcome::Fail,
            ..v
        }
        .with_witness("h", strs(h.coeffs())));
    }
    if sig.positive == 1 && sig.negative == n - 1 {
        return Ok(v);
    }
    // two Q-orthogonal positive directions span a plane meeting h^⊥ positively
    let pos: Vec<usize> = (0..n).filter(|&i| cong.diag[i] > F::zero()).take(2).collect();
    let (p1, p2) = (col(pos[0]), col(pos[1]));
    let a = q.matrix.bilinear(&p2, h.coeffs());
    let b = q.matrix.bilinear(&p1, h.coeffs());
    let alpha: Vec<F> = if a.is_zero() && b.is_zero() {
        p1
    } else {
        p1.iter().zip(&p2).map(|(x, y)| a.clone() * x.clone() - b.clone() * y.clone()).collect()
    };
    Ok(Verdict {
        outcome: Outcome::Fail,
        ..v
    }
    .with_witness("h-orthogonal-nonnegative", strs(&alpha)))
}

/// The degree-1 class `β` with `β·η = γ`.
pub fn divide<F: Scalar>(gamma: &RingElement<F>, eta: &RingElement<F>, tol: f64) -> Result<RingElement<F>> {
    let model = eta.model();
    if !std::sync::Arc::ptr_eq(gamma.model(), model) {
        return Err(Error::ModelMismatch);
    }
    let d = model.dim();
    check_degree(eta, d.saturating_sub(2))?;
    check_degree(gamma, d - 1)?;
    let n = model.rank(1);
    let cols: Vec<RingElement<F>> = (0..n)
        .map(|a| RingElement::basis(model, 1, a).try_mul(eta))
        .collect::<Result<_>>()?;
    let m = Matrix::from_fn(model.rank(d - 1), n, |i, j| cols[j].coeffs()[i].clone());
    let x = solve_unique(&m, gamma.coeffs(), tol)?;
    RingElement::from_coeffs(model, 1, x)
}

/// Hodge–Riemann pair test of `(η_{d−1}, η_{d−2})` certified by `h`:
/// (1) the HR property of `η_{d−2}` for `h`, (2) `∫h·η_{d−1} > 0` and
/// (3) `∫η_{d−2}·β² > 0` for `β = η_{d−1}/η_{d−2}`.
///
/// When (2) holds the verdict is compared with the kernel characterization
/// (`Q` negative definite on `{α : ∫α·η_{d−1} = 0}`), recorded as the checks
/// `kernel-negative-definite` and `kernel-agrees`.
pub fn is_hr_pair<F: Scalar>(
    eta1: &RingElement<F>,
    eta2: &RingElement<F>,
    h: &RingElement<F>,
    tol: f64,
) -> Result<Verdict> {
    let model = eta2.model();
    for el in [eta1, h] {
        if !std::sync::Arc::ptr_eq(el.model(), model) {
            return Err(Error::ModelMismatch);
        }
    }
    check_degree(eta1, model.dim() - 1)?;
    let q = gram(eta2)?;
    let mut v = hr_property_of(&q, h, tol)?;
    let c2 = h.try_mul(eta1)?.integrate()?;
    let c2_ok = is_positive(&c2, h.max_abs() * eta1.max_abs(), tol);
    v = v.with_check("h*eta1", &c2, c2_ok);
    if v.outcome == Outcome::Degenerate {
        return Ok(v);
    }
    let hr_ok = v.outcome == Outcome::Pass;
    let beta = divide(eta1, eta2, tol)?;
    let c3 = q.eval(&beta, &beta)?;
    let c3_ok = is_positive(&c3, q.matrix.max_abs() * beta.max_abs().powi(2), tol);
    v = v.with_check("eta2*beta^2", &c3, c3_ok);
    let pass = hr_ok && c2_ok && c3_ok;
    if c2_ok {
        let kernel_nd = kernel_negative_definite(&q, eta1, tol)?;
        v = v
            .with_check("kernel-negative-definite", kernel_nd, kernel_nd)
            .with_check("kernel-agrees", kernel_nd == pass, kernel_nd == pass);
    }
    if pass {
        v.outcome = Outcome::Pass;
    } else {
        v.outcome = Outcome::Fail;
        if hr_ok {
            let w = if c2_ok { beta.coeffs() } else { h.coeffs() };
            v.witness = None;
            v = v.with_witness(if c2_ok { "quotient" } else { "h" }, strs(w));
        }
    }
    Ok(v)
}

/// `Q` restricted to `{α : ∫α·η_{d−1} = 0}` is negative definite.
pub fn kernel_negative_definite<F: Scalar>(q: &GramForm<F>, eta1: &RingElement<F>, tol: f64) -> Result<bool> {
    let n = q.dim();
    let ell: Vec<F> = (0..n)
        .map(|a| RingElement::basis(&q.model, 1, a).try_mul(eta1)?.integrate())
        .collect::<Result<_>>()?;
    let basis = nullspace(&Matrix::from_rows(vec![ell]), tol);
    let k = basis.len();
    let r = Matrix::from_fn(k, k, |i, j| q.matrix.bilinear(&basis[i], &basis[j]));
    let (sig, _, _) = inertia(&r, tol);
    Ok(sig.negative == k)
}

/// Membership of `β` in `Pos_η`: `∫β·η·h > 0` and `∫β²·η > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PosConeReport<F> {
    pub contains: bool,
    pub beta_eta_h: F,
    pub beta_sq_eta: F,
}

pub fn pos_cone_contains<F: Scalar>(
    beta: &RingElement<F>,
    eta: &RingElement<F>,
    h: &RingElement<F>,
    tol: f64,
) -> Result<PosConeReport<F>> {
    let q = gram(eta)?;
    let bh = q.eval(beta, h)?;
    let bb = q.eval(beta, beta)?;
    let s = q.matrix.max_abs() * beta.max_abs();
    let contains = is_positive(&bh, s * h.max_abs(), tol) && is_positive(&bb, s * beta.max_abs(), tol);
    Ok(PosConeReport {
        contains,
        beta_eta_h: bh,
        beta_sq_eta: bb,
    })
}

/// First candidate `h` that certifies the pair, with its index and verdict.
pub fn find_certifying_h<F: Scalar>(
    eta1: &RingElement<F>,
    eta2: &RingElement<F>,
    candidates: &[RingElement<F>],
    tol: f64,
) -> Result<Option<(usize, Verdict)>> {
    for (i, h) in candidates.iter().enumerate() {
        let v = is_hr_pair(eta1, eta2, h, tol)?;
        if v.is_pass() {
            return Ok(Some((i, v)));
        }
    }
    Ok(None)
}
