use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num::traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Rational, Scalar, DEFAULT_TOLERANCE};
use crate::symfunc::GradedAlgebra;

/// Sparse product of two basis elements: `(index, coefficient)` pairs.
pub type SparseVec<F> = Vec<(usize, F)>;

/// `table[p][q][i][j]` is the product of basis element `i` of degree `p` with
/// basis element `j` of degree `q`, for `p + q <= d`.
pub type MultTable<F> = Vec<Vec<Vec<Vec<SparseVec<F>>>>>;

/// Finite graded commutative ring with a top-degree integration functional.
#[derive(Debug, Clone)]
pub struct RingModel<F> {
    dim: usize,
    bases: Vec<Vec<String>>,
    table: MultTable<F>,
    integral: Vec<F>,
    labels: BTreeMap<String, (usize, Vec<F>)>,
    pairings: Vec<Matrix<F>>,
}

pub type Model<F> = Arc<RingModel<F>>;

impl<F: Scalar> RingModel<F> {
    /// Validates shapes, the unit, commutativity and associativity on all
    /// basis pairs and triples, then stores the pairing matrices.
    pub fn from_parts(
        dim: usize,
        bases: Vec<Vec<String>>,
        table: MultTable<F>,
        integral: Vec<F>,
    ) -> Result<Model<F>> {
        Self::from_parts_with_tolerance(dim, bases, table, integral, DEFAULT_TOLERANCE)
    }

    pub fn from_parts_with_tolerance(
        dim: usize,
        bases: Vec<Vec<String>>,
        table: MultTable<F>,
        integral: Vec<F>,
        tol: f64,
    ) -> Result<Model<F>> {
        let bad = |m: String| Err(Error::Construction(m));
        if bases.len() != dim + 1 {
            return bad(format!("expected bases for degrees 0..={dim}, found {}", bases.len()));
        }
        if bases[0].len() != 1 {
            return bad("degree 0 must be spanned by the unit".into());
        }
        if integral.len() != bases[dim].len() {
            return bad("integration functional does not match the top-degree basis".into());
        }
        for p in 0..=dim {
            for q in 0..=dim - p {
                let ok = table.get(p).and_then(|t| t.get(q)).is_some_and(|t| {
                    t.len() == bases[p].len()
                        && t.iter().all(|row| {
                            row.len() == bases[q].len()
                                && row.iter().all(|v| v.iter().all(|(k, _)| *k < bases[p + q].len()))
                        })
                });
                if !ok {
                    return bad(format!("multiplication table ({p},{q}) has the wrong shape"));
                }
            }
        }
        let mut model = RingModel {
            dim,
            bases,
            table,
            integral,
            labels: BTreeMap::new(),
            pairings: Vec::new(),
        };
        model.validate(tol)?;
        model.pairings = (0..=dim).map(|p| model.compute_pairing(p)).collect();
        Ok(Arc::new(model))
    }

    fn dense(&self, deg: usize, v: &SparseVec<F>) -> Vec<F> {
        let mut out = vec![F::zero(); self.bases[deg].len()];
        for (k, c) in v {
            out[*k] = out[*k].clone() + c.clone();
        }
        out
    }

    fn close(&self, a: &[F], b: &[F], tol: f64) -> bool {
        let scale = a.iter().chain(b).map(Scalar::abs_f64).fold(1.0, f64::max);
        a.iter()
            .zip(b)
            .all(|(x, y)| (x.clone() - y.clone()).negligible(scale, tol))
    }

    fn validate(&self, tol: f64) -> Result<()> {
        let d = self.dim;
        for q in 0..=d {
            for j in 0..self.bases[q].len() {
                let v = self.dense(q, &self.table[0][q][0][j]);
                let mut e = vec![F::zero(); self.bases[q].len()];
                e[j] = F::one();
                if !self.close(&v, &e, tol) {
                    return Err(Error::Construction(format!(
                        "basis element 0 of degree 0 does not act as the unit on `{}`",
                        self.bases[q][j]
                    )));
                }
            }
        }
        for p in 1..=d {
            for q in p..=d - p {
                for i in 0..self.bases[p].len() {
                    for j in 0..self.bases[q].len() {
                        let a = self.dense(p + q, &self.table[p][q][i][j]);
                        let b = self.dense(p + q, &self.table[q][p][j][i]);
                        if !self.close(&a, &b, tol) {
                            return Err(Error::Construction(format!(
                                "not commutative on `{}` · `{}`",
                                self.bases[p][i], self.bases[q][j]
                            )));
                        }
                    }
                }
            }
        }
        for p in 1..=d {
            for q in 1..=d - p {
                for r in 1..=d - p - q {
                    for i in 0..self.bases[p].len() {
                        for j in 0..self.bases[q].len() {
                            let ab = &self.table[p][q][i][j];
                            for k in 0..self.bases[r].len() {
                                let left = self.mul_sparse(p + q, ab, r, k);
                                let right = self.mul_sparse(q + r, &self.table[q][r][j][k], p, i);
                                if !self.close(&left, &right, tol) {
                                    return Err(Error::Construction(format!(
                                        "not associative on `{}` · `{}` · `{}`",
                                        self.bases[p][i], self.bases[q][j], self.bases[r][k]
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `(Σ v_a b_a) · b_k` where `v` lives in degree `p` and `b_k` in degree `r`.
    fn mul_sparse(&self, p: usize, v: &SparseVec<F>, r: usize, k: usize) -> Vec<F> {
        let mut out = vec![F::zero(); self.bases[p + r].len()];
        for (a, c) in v {
            for (m, x) in &self.table[p][r][*a][k] {
                out[*m] = out[*m].clone() + c.clone() * x.clone();
            }
        }
        out
    }

    fn compute_pairing(&self, p: usize) -> Matrix<F> {
        let q = self.dim - p;
        Matrix::from_fn(self.bases[p].len(), self.bases[q].len(), |i, j| {
            self.table[p][q][i][j]
                .iter()
                .fold(F::zero(), |acc, (k, c)| acc + c.clone() * self.integral[*k].clone())
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self, degree: usize) -> &[String] {
        self.bases.get(degree).map_or(&[], Vec::as_slice)
    }

    pub fn rank(&self, degree: usize) -> usize {
        self.basis_names(degree).len()
    }

    pub fn integral_vector(&self) -> &[F] {
        &self.integral
    }

    /// Matrix of `(x, y) ↦ ∫ x·y` on degree `p` × degree `d − p`.
    pub fn pairing(&self, p: usize) -> &Matrix<F> {
        &self.pairings[p]
    }

    pub fn product_of_basis(&self, p: usize, i: usize, q: usize, j: usize) -> &[(usize, F)] {
        if p + q > self.dim {
            return &[];
        }
        &self.table[p][q][i][j]
    }

    pub fn label_names(&self) -> impl Iterator<Item = &str> {
        self.labels.keys().map(String::as_str)
    }

    pub(crate) fn label_raw(&self, name: &str) -> Option<&(usize, Vec<F>)> {
        self.labels.get(name)
    }

    /// Attaches named elements; the model must not be shared yet.
    pub fn with_labels(model: Model<F>, labels: impl IntoIterator<Item = (String, RingElement<F>)>) -> Result<Model<F>> {
        let mut inner = Arc::try_unwrap(model).unwrap_or_else(|shared| (*shared).clone());
        for (name, el) in labels {
            if el.model.bases != inner.bases || el.model.dim != inner.dim {
                return Err(Error::ModelMismatch);
            }
            inner.labels.insert(name, (el.degree, el.coeffs));
        }
        Ok(Arc::new(inner))
    }

    pub fn to_f64(&self) -> RingModel<f64> {
        let conv = |v: &SparseVec<F>| v.iter().map(|(k, c)| (*k, c.to_f64())).collect::<SparseVec<f64>>();
        RingModel {
            dim: self.dim,
            bases: self.bases.clone(),
            table: self
                .table
                .iter()
                .map(|t| t.iter().map(|m| m.iter().map(|r| r.iter().map(conv).collect()).collect()).collect())
                .collect(),
            integral: self.integral.iter().map(Scalar::to_f64).collect(),
            labels: self
                .labels
                .iter()
                .map(|(k, (d, v))| (k.clone(), (*d, v.iter().map(Scalar::to_f64).collect())))
                .collect(),
            pairings: self.pairings.iter().map(Matrix::to_f64).collect(),
        }
    }
}

/// Element of a [`RingModel`]: a degree and coordinates over that degree's
/// basis. Elements of degree above `d` are zero with no coordinates.
#[derive(Debug, Clone)]
pub struct RingElement<F> {
    model: Model<F>,
    degree: usize,
    coeffs: Vec<F>,
}

impl<F: Scalar> PartialEq for RingElement<F> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.model, &other.model) && self.degree == other.degree && self.coeffs == other.coeffs
    }
}

impl<F: Scalar> RingElement<F> {
    pub fn zero(model: &Model<F>, degree: usize) -> Self {
        RingElement {
            model: model.clone(),
            degree,
            coeffs: vec![F::zero(); model.rank(degree)],
        }
    }

    pub fn one(model: &Model<F>) -> Self {
        Self::basis(model, 0, 0)
    }

    pub fn constant(model: &Model<F>, c: F) -> Self {
        Self::one(model).scale(&c)
    }

    pub fn basis(model: &Model<F>, degree: usize, index: usize) -> Self {
        let mut e = Self::zero(model, degree);
        e.coeffs[index] = F::one();
        e
    }

    pub fn from_coeffs(model: &Model<F>, degree: usize, coeffs: Vec<F>) -> Result<Self> {
        if coeffs.len() != model.rank(degree) {
            return Err(Error::DimensionMismatch {
                left: model.rank(degree),
                right: coeffs.len(),
            });
        }
        Ok(RingElement {
            model: model.clone(),
            degree,
            coeffs,
        })
    }

    /// Basis element by name, or a label attached to the model.
    pub fn named(model: &Model<F>, name: &str) -> Result<Self> {
        if let Some((deg, v)) = model.label_raw(name) {
            return Self::from_coeffs(model, *deg, v.clone());
        }
        for deg in 0..=model.dim() {
            if let Some(i) = model.basis_names(deg).iter().position(|n| n == name) {
                return Ok(Self::basis(model, deg, i));
            }
        }
        Err(Error::UnknownSymbol(name.to_string()))
    }

    pub fn model(&self) -> &Model<F> {
        &self.model
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_negligible(&self, tol: f64) -> bool {
        let scale = self.max_abs().max(1.0);
        self.coeffs.iter().all(|c| c.negligible(scale, tol))
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(Scalar::abs_f64).fold(0.0, f64::max)
    }

    fn same_model(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.model, &other.model) {
            Ok(())
        } else {
            Err(Error::ModelMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_model(other)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Ok(RingElement {
            model: self.model.clone(),
            degree: self.degree,
            coeffs,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Self {
        self.scale(&-F::one())
    }

    pub fn scale(&self, c: &F) -> Self {
        RingElement {
            model: self.model.clone(),
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_model(other)?;
        let (p, q) = (self.degree, other.degree);
        let mut out = Self::zero(&self.model, p + q);
        if p + q > self.model.dim() {
            return Ok(out);
        }
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a.clone() * b.clone();
                for (k, c) in &self.model.table[p][q][i][j] {
                    out.coeffs[*k] = out.coeffs[*k].clone() + ab.clone() * c.clone();
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: usize) -> Result<Self> {
        let mut acc = Self::one(&self.model);
        for _ in 0..n {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    /// `∫` of a top-degree element.
    pub fn integrate(&self) -> Result<F> {
        if self.degree != self.model.dim() {
            return Err(Error::DegreeMismatch {
                expected: self.model.dim(),
                found: self.degree,
            });
        }
        Ok(self
            .coeffs
            .iter()
            .zip(&self.model.integral)
            .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
    }

    /// `∫ self · other` for complementary degrees.
    pub fn pair(&self, other: &Self) -> Result<F> {
        self.same_model(other)?;
        if self.degree + other.degree != self.model.dim() {
            return Err(Error::DegreeMismatch {
                expected: self.model.dim() - self.degree.min(self.model.dim()),
                found: other.degree,
            });
        }
        Ok(self.model.pairing(self.degree).bilinear(&self.coeffs, &other.coeffs))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(ToString::to_string).collect()
    }
}

impl<F: Scalar> fmt::Display for RingElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.model.basis_names(self.degree);
        let mut wrote = false;
        for (c, name) in self.coeffs.iter().zip(names) {
            if c.is_zero() {
                continue;
            }
            let neg = *c < F::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if wrote {
                f.write_str(if neg { " - " } else { " + " })?;
            } else if neg {
                f.write_str("-")?;
            }
            let unit = name == "1";
            match (mag.is_one(), unit) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{name}")?,
                (false, true) => write!(f, "{mag}")?,
                (false, false) => write!(f, "{mag}*{name}")?,
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl<F: Scalar> Add for &RingElement<F> {
    type Output = RingElement<F>;
    fn add(self, rhs: Self) -> RingElement<F> {
        self.try_add(rhs).expect("adding ring elements of different degree or model")
    }
}

impl<F: Scalar> Sub for &RingElement<F> {
    type Output = RingElement<F>;
    fn sub(self, rhs: Self) -> RingElement<F> {
        self.try_sub(rhs).expect("subtracting ring elements of different degree or model")
    }
}

impl<F: Scalar> Neg for &RingElement<F> {
    type Output = RingElement<F>;
    fn neg(self) -> RingElement<F> {
        self.neg_ref()
    }
}

impl<F: Scalar> Mul for &RingElement<F> {
    type Output = RingElement<F>;
    fn mul(self, rhs: Self) -> RingElement<F> {
        self.try_mul(rhs).expect("multiplying elements of different models")
    }
}

impl<F: Scalar> GradedAlgebra for RingElement<F> {
    fn grade(&self) -> usize {
        self.degree
    }

    fn unit(&self) -> Self {
        Self::one(&self.model)
    }

    fn zero_of_grade(&self, grade: usize) -> Self {
        Self::zero(&self.model, grade)
    }

    fn try_add(&self, other: &Self) -> Result<Self> {
        RingElement::try_add(self, other)
    }

    fn try_mul(&self, other: &Self) -> Result<Self> {
        RingElement::try_mul(self, other)
    }

    fn scaled(&self, c: &Rational) -> Self {
        self.scale(&F::from_rational(c))
    }
}
