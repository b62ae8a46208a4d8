use num::Complex;
use rand::Rng;

use super::curvature::{random_complex, random_one_form, CurvatureMatrix};
use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::scalar::Scalar;

/// A constant matrix `N` and a `(1,0)`-form `φ`, standing for `N ⊗ φ`.
pub type TensorTerm<F> = (Vec<Vec<Complex<F>>>, Form<F>);

/// An `r × r` matrix of `(1,0)`-forms with `θ∧θ = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct HiggsField<F> {
    entries: Vec<Vec<Form<F>>>,
}

impl<F: Scalar> HiggsField<F> {
    /// Checks `Σ_k θ_{ik}∧θ_{kj} = 0` for all `i, j`.
    pub fn new(entries: Vec<Vec<Form<F>>>, tol: f64) -> Result<Self> {
        let r = entries.len();
        if r == 0 {
            return Err(Error::Precondition("rank must be at least 1".into()));
        }
        let d = entries[0].first().map_or(0, Form::dim);
        for row in &entries {
            if row.len() != r {
                return Err(Error::Precondition("Higgs field is not square".into()));
            }
            for f in row {
                if f.dim() != d {
                    return Err(Error::DimensionMismatch { left: d, right: f.dim() });
                }
                if f.bidegree() != (1, 0) && !f.is_zero() {
                    return Err(Error::BidegreeMismatch {
                        expected: (1, 0),
                        found: f.bidegree(),
                    });
                }
            }
        }
        let entries: Vec<Vec<Form<F>>> = entries
            .into_iter()
            .map(|row| row.into_iter().map(|f| if f.is_zero() { Form::zero(d, 1, 0) } else { f }).collect())
            .collect();
        let scale = entries.iter().flatten().map(Form::max_abs).fold(0.0, f64::max).powi(2).max(1.0);
        for i in 0..r {
            for j in 0..r {
                let mut s = Form::zero(d, 2, 0);
                for k in 0..r {
                    s = &s + &entries[i][k].wedge(&entries[k][j])?;
                }
                if !s.is_negligible(scale, tol) {
                    return Err(Error::Precondition(format!("θ∧θ ≠ 0 at entry ({}, {})", i + 1, j + 1)));
                }
            }
        }
        Ok(HiggsField { entries })
    }

    pub fn zero(r: usize, d: usize) -> Self {
        HiggsField {
            entries: vec![vec![Form::zero(d, 1, 0); r]; r],
        }
    }

    /// `Σ_a N_a ⊗ φ_a`; `θ∧θ = 0` holds when the `N_a` commute.
    pub fn from_tensors(terms: &[TensorTerm<F>], tol: f64) -> Result<Self> {
        let Some((n0, phi0)) = terms.first() else {
            return Err(Error::Precondition("need at least one tensor term".into()));
        };
        let (r, d) = (n0.len(), phi0.dim());
        let mut entries = vec![vec![Form::zero(d, 1, 0); r]; r];
        for (n, phi) in terms {
            for i in 0..r {
                for j in 0..r {
                    entries[i][j] = &entries[i][j] + &phi.scale(&n[i][j]);
                }
            }
        }
        Self::new(entries, tol)
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Form<F> {
        &self.entries[i][j]
    }
}

/// `[θ, θ̄] = θ∧θ̄ + θ̄∧θ` with `θ̄_{ij} = conj(θ_{ji})`; anti-selfadjoint.
pub fn higgs_curvature_term<F: Scalar>(theta: &HiggsField<F>) -> Result<CurvatureMatrix<F>> {
    let r = theta.rank();
    let d = theta.entries[0][0].dim();
    let bar = |i: usize, j: usize| theta.entries[j][i].conj();
    let mut entries = vec![vec![Form::zero(d, 1, 1); r]; r];
    for (i, row) in entries.iter_mut().enumerate() {
        for (j, out) in row.iter_mut().enumerate() {
            for k in 0..r {
                *out = &*out + &theta.entries[i][k].wedge(&bar(k, j))?;
                *out = &*out + &bar(i, k).wedge(&theta.entries[k][j])?;
            }
        }
    }
    CurvatureMatrix::new(entries)
}

/// Trace-free part of the Hitchin–Simpson curvature `F_h + [θ, θ̄]`.
pub fn hitchin_simpson<F: Scalar>(fh: &CurvatureMatrix<F>, theta: &HiggsField<F>) -> Result<CurvatureMatrix<F>> {
    Ok(fh.try_add(&higgs_curvature_term(theta)?)?.trace_free())
}

/// `θ = N⊗φ₁ + N²⊗φ₂ + …` with `N` strictly upper triangular with complex
/// Gaussian entries; the powers of `N` commute, so `θ∧θ = 0`.
pub fn random_higgs<R: Rng + ?Sized>(r: usize, d: usize, rng: &mut R) -> HiggsField<f64> {
    let zero = Complex::new(0.0, 0.0);
    let mut n = vec![vec![zero; r]; r];
    for (i, row) in n.iter_mut().enumerate() {
        for x in row.iter_mut().skip(i + 1) {
            *x = random_complex(rng);
        }
    }
    let mul = |a: &Vec<Vec<Complex<f64>>>, b: &Vec<Vec<Complex<f64>>>| -> Vec<Vec<Complex<f64>>> {
        (0..r)
            .map(|i| (0..r).map(|j| (0..r).map(|k| a[i][k] * b[k][j]).sum()).collect())
            .collect()
    };
    let mut terms = Vec::new();
    let mut power = n.clone();
    for _ in 1..r.max(2) {
        terms.push((power.clone(), random_one_form(d, rng)));
        power = mul(&power, &n);
    }
    HiggsField::from_tensors(&terms, 1e-9).expect("powers of one nilpotent commute")
}
