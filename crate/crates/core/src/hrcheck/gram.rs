use crate::error::{Error, Result};
use crate::linalg::{inertia, Congruence, Inertia, Matrix};
use crate::ring::{Model, RingElement};
use crate::scalar::Scalar;

/// The intersection form `Q(α, α') = ∫ α·η·α'` on degree 1, for `η` of
/// degree `d − 2`.
#[derive(Debug, Clone)]
pub struct GramForm<F> {
    pub model: Model<F>,
    pub eta: RingElement<F>,
    pub matrix: Matrix<F>,
}

pub fn gram<F: Scalar>(eta: &RingElement<F>) -> Result<GramForm<F>> {
    let model = eta.model().clone();
    let d = model.dim();
    if d < 2 || eta.degree() != d - 2 {
        return Err(Error::DegreeMismatch {
            expected: d.saturating_sub(2),
            found: eta.degree(),
        });
    }
    let n = model.rank(1);
    let basis: Vec<RingElement<F>> = (0..n).map(|a| RingElement::basis(&model, 1, a)).collect();
    let mut m = Matrix::zeros(n, n);
    for a in 0..n {
        let left = basis[a].try_mul(eta)?;
        for b in a..n {
            let v = left.pair(&basis[b])?;
            m[(b, a)] = v.clone();
            m[(a, b)] = v;
        }
    }
    Ok(GramForm {
        model,
        eta: eta.clone(),
        matrix: m,
    })
}

impl<F: Scalar> GramForm<F> {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `Q(x, y)` for degree-1 elements of the same model.
    pub fn eval(&self, x: &RingElement<F>, y: &RingElement<F>) -> Result<F> {
        for el in [x, y] {
            if !std::sync::Arc::ptr_eq(el.model(), &self.model) {
                return Err(Error::ModelMismatch);
            }
            if el.degree() != 1 {
                return Err(Error::DegreeMismatch {
                    expected: 1,
                    found: el.degree(),
                });
            }
        }
        Ok(self.matrix.bilinear(x.coeffs(), y.coeffs()))
    }
}

/// Sylvester inertia of a symmetric matrix. The exact backend ignores `tol`.
pub fn signature<F: Scalar>(q: &Matrix<F>, tol: f64) -> Inertia {
    inertia(q, tol).0
}

/// Inertia plus its congruence and eigenvalue evidence.
pub fn signature_with_evidence<F: Scalar>(q: &Matrix<F>, tol: f64) -> (Inertia, Congruence<F>, Vec<f64>) {
    inertia(q, tol)
}

/// `min|λ| / max|λ|` over the eigenvalues of `q`.
pub fn relative_gap(eigenvalues: &[f64]) -> f64 {
    let max = eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max == 0.0 {
        return 0.0;
    }
    eigenvalues.iter().fold(f64::INFINITY, |m, x| m.min(x.abs())) / max
}
