use num::Complex;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::hrcheck::pointwise_hr_pair_in;
use crate::ring::{torus_ring, Model};
use crate::scalar::{complex_abs_f64, Scalar};

/// An `r × r` matrix of `(1,1)`-forms on `ℂ^d`, e.g. a curvature in a
/// unitary frame.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureMatrix<F> {
    entries: Vec<Vec<Form<F>>>,
}

fn check_square<F: Scalar>(entries: &[Vec<Form<F>>], bidegree: (usize, usize)) -> Result<usize> {
    let r = entries.len();
    let d = entries.first().and_then(|row| row.first()).map_or(0, Form::dim);
    for row in entries {
        if row.len() != r {
            return Err(Error::Precondition("matrix of forms is not square".into()));
        }
        for f in row {
            if f.dim() != d {
                return Err(Error::DimensionMismatch { left: d, right: f.dim() });
            }
            if f.bidegree() != bidegree && !f.is_zero() {
                return Err(Error::BidegreeMismatch {
                    expected: bidegree,
                    found: f.bidegree(),
                });
            }
        }
    }
    Ok(d)
}

impl<F: Scalar> CurvatureMatrix<F> {
    pub fn new(entries: Vec<Vec<Form<F>>>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Precondition("rank must be at least 1".into()));
        }
        check_square(&entries, (1, 1))?;
        Ok(CurvatureMatrix { entries })
    }

    pub fn zero(r: usize, d: usize) -> Self {
        CurvatureMatrix {
            entries: vec![vec![Form::zero(d, 1, 1); r]; r],
        }
    }

    /// `γ·I`.
    pub fn scalar(r: usize, gamma: &Form<F>) -> Self {
        let mut m = Self::zero(r, gamma.dim());
        for i in 0..r {
            m.entries[i][i] = gamma.clone();
        }
        m
    }

    pub fn diagonal(diag: Vec<Form<F>>) -> Result<Self> {
        let r = diag.len();
        let d = diag.first().map_or(0, Form::dim);
        let mut m = Self::zero(r, d);
        for (i, f) in diag.into_iter().enumerate() {
            m.entries[i][i] = f;
        }
        Self::new(m.entries)
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn dim(&self) -> usize {
        self.entries[0][0].dim()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Form<F> {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<Form<F>>] {
        &self.entries
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.rank() != other.rank() {
            return Err(Error::DimensionMismatch {
                left: self.rank(),
                right: other.rank(),
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.try_add(y)).collect())
            .collect::<Result<_>>()?;
        Ok(CurvatureMatrix { entries })
    }

    pub fn trace(&self) -> Form<F> {
        (0..self.rank()).fold(Form::zero(self.dim(), 1, 1), |acc, i| &acc + &self.entries[i][i])
    }

    /// `F − (tr F / r)·I`.
    pub fn trace_free(&self) -> Self {
        let r = F::from_i64(self.rank() as i64);
        let t = self.trace().scale_real(&(F::one() / r));
        let mut m = self.clone();
        for i in 0..self.rank() {
            m.entries[i][i] = &m.entries[i][i] - &t;
        }
        m
    }

    /// `(F − F^†)/2` with `F^†_{ij} = conj(F_{ji})`.
    pub fn anti_selfadjoint_part(&self) -> Self {
        let half = F::one() / F::from_i64(2);
        let r = self.rank();
        let entries = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| (&self.entries[i][j] - &self.entries[j][i].conj()).scale_real(&half))
                    .collect()
            })
            .collect();
        CurvatureMatrix { entries }
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().flatten().map(Form::max_abs).fold(0.0, f64::max)
    }

    pub fn is_anti_selfadjoint(&self, tol: f64) -> bool {
        let scale = self.max_abs().max(1.0);
        let r = self.rank();
        (0..r).all(|i| (0..r).all(|j| (&self.entries[i][j] + &self.entries[j][i].conj()).is_negligible(scale, tol)))
    }

    /// `tr(F∧F)` as a `(2,2)`-form.
    pub fn trace_square(&self) -> Result<Form<F>> {
        let r = self.rank();
        let mut acc = Form::zero(self.dim(), 2, 2);
        for i in 0..r {
            for j in 0..r {
                acc = &acc + &self.entries[i][j].wedge(&self.entries[j][i])?;
            }
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.entries
                .iter()
                .map(|row| serde_json::Value::Array(row.iter().map(Form::to_json).collect()))
                .collect(),
        )
    }

    pub fn from_json(v: &serde_json::Value, dim: Option<usize>) -> Result<Self> {
        let rows = v.as_array().ok_or_else(|| Error::Json("curvature must be a matrix of forms".into()))?;
        let entries = rows
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| Error::Json("curvature rows must be lists".into()))?
                    .iter()
                    .map(|f| Form::from_json(f, dim))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let entries = entries
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|f| if f.is_zero() { Form::zero(f.dim(), 1, 1) } else { f })
                    .collect()
            })
            .collect();
        Self::new(entries)
    }
}

type Functional<F> = Vec<((usize, usize), Complex<F>)>;

/// `α ↦ ∫α∧Ω_{d−1}` on the coefficients of `dz_j∧dz̄_k`.
fn functional<F: Scalar>(omega1: &Form<F>) -> Result<Functional<F>> {
    let d = omega1.dim();
    let mut w = Vec::with_capacity(d * d);
    for j in 0..d {
        for k in 0..d {
            let basis = Form::monomial(d, &[j], &[k], Complex::new(F::one(), F::zero()))?;
            w.push(((j, k), basis.wedge(omega1)?.integrate_top_complex()?));
        }
    }
    Ok(w)
}

fn apply<F: Scalar>(w: &[((usize, usize), Complex<F>)], alpha: &Form<F>) -> Complex<F> {
    w.iter().fold(Complex::new(F::zero(), F::zero()), |acc, ((j, k), c)| {
        acc + alpha.coefficient(&[*j], &[*k]) * c.clone()
    })
}

/// Projects every entry onto `{α : α∧Ω_{d−1} = 0}` (orthogonally in the
/// coefficients of `dz_j∧dz̄_k`), then takes the anti-selfadjoint part and
/// removes the trace. Each step preserves what the earlier ones achieved.
pub fn constraint_project<F: Scalar>(raw: &CurvatureMatrix<F>, omega1: &Form<F>) -> Result<CurvatureMatrix<F>> {
    let d = raw.dim();
    if omega1.bidegree() != (d - 1, d - 1) || omega1.dim() != d {
        return Err(Error::BidegreeMismatch {
            expected: (d - 1, d - 1),
            found: omega1.bidegree(),
        });
    }
    let w = functional(omega1)?;
    let norm: F = w.iter().fold(F::zero(), |acc, (_, c)| acc + c.norm_sqr());
    if norm.is_zero() {
        return Ok(raw.anti_selfadjoint_part().trace_free());
    }
    let wbar = Form::from_terms(d, 1, 1, w.iter().map(|((j, k), c)| (vec![*j], vec![*k], c.conj())))?;
    let entries = raw
        .entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|a| {
                    let c = apply(&w, a);
                    let c = Complex::new(c.re / norm.clone(), c.im / norm.clone());
                    a - &wbar.scale(&c)
                })
                .collect()
        })
        .collect();
    Ok(CurvatureMatrix { entries }.anti_selfadjoint_part().trace_free())
}

/// Largest `|∫F_{ij}∧Ω_{d−1}|`.
pub fn constraint_residual<F: Scalar>(m: &CurvatureMatrix<F>, omega1: &Form<F>) -> Result<f64> {
    let mut worst = 0.0f64;
    for f in m.entries.iter().flatten() {
        let v = f.wedge(omega1)?.integrate_top_complex()?;
        worst = worst.max(complex_abs_f64(&v));
    }
    Ok(worst)
}

/// The terms `T_{ij} = ∫F_{0,ij}∧F_{0,ji}∧Ω_{d−2}` whose sum is
/// `∫tr(F₀²)∧Ω_{d−2}`, the pointwise discriminant up to `r/4π²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceReport {
    pub terms: Vec<Vec<f64>>,
    pub total: f64,
    pub min_term: f64,
    /// `max(1, Σ|F₀|²)·|Ω_{d−2}|`, the unit of the tolerance.
    pub scale: f64,
    pub tolerance: f64,
    pub nonnegative: bool,
    /// `F₀ = 0` to tolerance: the projectively flat equality case.
    pub projectively_flat: bool,
}

/// Checks the preconditions (anti-selfadjoint, trace-free, `F₀∧Ω_{d−1} = 0`
/// and `(Ω_{d−1}, Ω_{d−2})` a pointwise HR pair for `ω_std`) and reports
/// every term.
pub fn trace_check<F: Scalar>(
    f0: &CurvatureMatrix<F>,
    omega1: &Form<F>,
    omega2: &Form<F>,
    tol: f64,
) -> Result<TraceReport> {
    trace_check_in(&torus_ring(f0.dim())?, f0, omega1, omega2, tol)
}

/// As [`trace_check`] with a prebuilt [`torus_ring`] for the pair test.
pub fn trace_check_in<F: Scalar>(
    model: &Model<F>,
    f0: &CurvatureMatrix<F>,
    omega1: &Form<F>,
    omega2: &Form<F>,
    tol: f64,
) -> Result<TraceReport> {
    let d = f0.dim();
    let r = f0.rank();
    let fscale = f0.max_abs().max(1.0);
    if !f0.is_anti_selfadjoint(tol) {
        return Err(Error::Precondition("F₀ is not anti-selfadjoint".into()));
    }
    if !f0.trace().is_negligible(fscale, tol) {
        return Err(Error::Precondition("F₀ is not trace-free".into()));
    }
    let residual = constraint_residual(f0, omega1)?;
    if residual > tol * fscale * omega1.max_abs().max(1.0) {
        return Err(Error::Precondition(format!("F₀∧Ω_(d−1) ≠ 0 (residual {residual:e})")));
    }
    let pair = pointwise_hr_pair_in(model, omega1, omega2, &Form::kahler_std(d), tol)?;
    if !pair.is_pass() {
        return Err(Error::Precondition(format!(
            "(Ω_(d−1), Ω_(d−2)) is not a pointwise HR pair: {}",
            pair.outcome
        )));
    }
    let mut terms = vec![vec![0.0; r]; r];
    let mut sq = 0.0;
    for i in 0..r {
        for j in 0..r {
            let t = f0.entries[i][j]
                .wedge(&f0.entries[j][i])?
                .wedge(omega2)?
                .integrate_top_complex()?;
            let s = f0.entries[i][j].max_abs().powi(2) * omega2.max_abs();
            if !t.im.negligible(s.max(1.0), tol) {
                return Err(Error::ImaginaryIntegral { imag: t.im.to_f64() });
            }
            terms[i][j] = t.re.to_f64();
            sq += f0.entries[i][j].max_abs().powi(2);
        }
    }
    let scale = sq.max(1.0) * omega2.max_abs().max(1.0);
    let total: f64 = terms.iter().flatten().sum();
    let min_term = terms.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    let floor = -tol * scale;
    Ok(TraceReport {
        nonnegative: min_term >= floor && total >= floor,
        projectively_flat: f0.entries.iter().flatten().all(|f| f.is_negligible(1.0, tol)),
        terms,
        total,
        min_term,
        scale,
        tolerance: tol,
    })
}

/// `c₁ = (i/2π) tr F` and `c₂ = ½((i/2π)²((tr F)² − tr F²))` as forms.
pub fn chern_forms(f: &CurvatureMatrix<f64>) -> Result<(Form<f64>, Form<f64>)> {
    let a = Complex::new(0.0, 1.0 / (2.0 * std::f64::consts::PI));
    let tr = f.trace();
    let c1 = tr.scale(&a);
    let c2 = (&tr.wedge(&tr)? - &f.trace_square()?).scale(&(a * a * 0.5));
    Ok((c1, c2))
}

/// `2r·c₂ − (r−1)·c₁²` of the Chern forms; equals `(r/4π²) tr(F₀²)`.
pub fn discriminant_form(f: &CurvatureMatrix<f64>) -> Result<Form<f64>> {
    let r = f.rank() as f64;
    let (c1, c2) = chern_forms(f)?;
    Ok(&c2.scale_real(&(2.0 * r)) - &c1.wedge(&c1)?.scale_real(&(r - 1.0)))
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex<f64> {
    let n = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("valid normal");
    Complex::new(n.sample(rng), n.sample(rng))
}

/// Entries with independent standard complex Gaussian coefficients.
pub fn random_curvature<R: Rng + ?Sized>(r: usize, d: usize, rng: &mut R) -> CurvatureMatrix<f64> {
    let entries = (0..r)
        .map(|_| {
            (0..r)
                .map(|_| {
                    let terms = (0..d).flat_map(|j| (0..d).map(move |k| (j, k)));
                    let terms: Vec<_> = terms.map(|(j, k)| (vec![j], vec![k], gaussian(rng))).collect();
                    Form::from_terms(d, 1, 1, terms).expect("valid indices")
                })
                .collect()
        })
        .collect();
    CurvatureMatrix { entries }
}

pub(crate) fn random_one_form<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Form<f64> {
    let terms: Vec<_> = (0..d).map(|j| (vec![j], vec![], gaussian(rng))).collect();
    Form::from_terms(d, 1, 0, terms).expect("valid indices")
}

pub(crate) fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex<f64> {
    gaussian(rng)
}
