use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::traits::{One, Zero};
use num::Complex;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{complex_abs_f64, complex_negligible, i_pow, Rational, Scalar};
use crate::symfunc::GradedAlgebra;

/// Multi-index over `{0..d-1}` stored as a bit mask (`d <= 32`).
pub type Mask = u32;

pub(crate) fn mask_of(indices: &[usize], dim: usize) -> Result<Mask> {
    let mut m: Mask = 0;
    let mut last: Option<usize> = None;
    for &i in indices {
        if i >= dim || last.is_some_and(|l| l >= i) {
            return Err(Error::Precondition(format!(
                "multi-index {indices:?} must be strictly increasing in 0..{dim}"
            )));
        }
        m |= 1 << i;
        last = Some(i);
    }
    Ok(m)
}

pub(crate) fn indices_of(m: Mask) -> Vec<usize> {
    (0..32).filter(|i| m & (1 << i) != 0).collect()
}

/// Sign of sorting the concatenation `a ++ b` of two increasing index lists;
/// `None` when they overlap.
fn merge_sign(a: Mask, b: Mask) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let k = rest.trailing_zeros();
        rest &= rest - 1;
        inversions += (a >> k).count_ones();
    }
    Some(inversions % 2 == 1)
}

/// All `p`-element subsets of `{0..d-1}` in lexicographic order of index lists.
pub fn subsets(dim: usize, p: usize) -> Vec<Mask> {
    fn go(start: usize, dim: usize, left: usize, cur: Mask, out: &mut Vec<Mask>) {
        if left == 0 {
            out.push(cur);
            return;
        }
        for i in start..=dim.saturating_sub(left) {
            go(i + 1, dim, left - 1, cur | (1 << i), out);
        }
    }
    let mut out = Vec::new();
    if p <= dim {
        go(0, dim, p, 0, &mut out);
    }
    out
}

/// Constant-coefficient complex differential form `Σ c_{I,J} dz_I ∧ dz̄_J` of
/// bidegree `(p, q)` on `ℂ^d`, with `I` and `J` strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct Form<F> {
    dim: usize,
    p: usize,
    q: usize,
    coeffs: BTreeMap<(Mask, Mask), Complex<F>>,
}

/// A `(p,p)`-form; reality is a property checked by [`Form::is_real`], not a
/// separate type.
pub type PPForm<F> = Form<F>;

impl<F: Scalar> Form<F> {
    pub fn zero(dim: usize, p: usize, q: usize) -> Self {
        assert!(dim <= 32, "forms support at most 32 complex dimensions");
        Form {
            dim,
            p,
            q,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Complex<F>) -> Self {
        let mut f = Self::zero(dim, 0, 0);
        f.insert(0, 0, c);
        f
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Complex::one())
    }

    /// `c · dz_I ∧ dz̄_J` with 0-based indices.
    pub fn monomial(dim: usize, i: &[usize], j: &[usize], c: Complex<F>) -> Result<Self> {
        let mut f = Self::zero(dim, i.len(), j.len());
        f.insert(mask_of(i, dim)?, mask_of(j, dim)?, c);
        Ok(f)
    }

    /// `c · dz_j` (0-based).
    pub fn dz(dim: usize, j: usize, c: Complex<F>) -> Self {
        Self::monomial(dim, &[j], &[], c).expect("index in range")
    }

    /// `c · dz̄_j` (0-based).
    pub fn dzbar(dim: usize, j: usize, c: Complex<F>) -> Self {
        Self::monomial(dim, &[], &[j], c).expect("index in range")
    }

    /// `i dz_j ∧ dz̄_k` (0-based).
    pub fn i_dz_dzbar(dim: usize, j: usize, k: usize) -> Self {
        Self::monomial(dim, &[j], &[k], i_pow(1)).expect("index in range")
    }

    /// The standard Kähler form `Σ_j i dz_j ∧ dz̄_j`.
    pub fn kahler_std(dim: usize) -> Self {
        (0..dim).fold(Self::zero(dim, 1, 1), |acc, j| &acc + &Self::i_dz_dzbar(dim, j, j))
    }

    /// The volume form `Π_j (i dz_j ∧ dz̄_j) = i^{d²} dz_{1..d} ∧ dz̄_{1..d}`.
    pub fn volume(dim: usize) -> Self {
        let full: Mask = if dim == 32 { Mask::MAX } else { (1 << dim) - 1 };
        let mut f = Self::zero(dim, dim, dim);
        f.insert(full, full, i_pow(dim * dim));
        f
    }

    pub fn from_terms(
        dim: usize,
        p: usize,
        q: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, Vec<usize>, Complex<F>)>,
    ) -> Result<Self> {
        let mut f = Self::zero(dim, p, q);
        for (i, j, c) in terms {
            if i.len() != p || j.len() != q {
                return Err(Error::BidegreeMismatch {
                    expected: (p, q),
                    found: (i.len(), j.len()),
                });
            }
            f.insert(mask_of(&i, dim)?, mask_of(&j, dim)?, c);
        }
        Ok(f)
    }

    fn insert(&mut self, i: Mask, j: Mask, c: Complex<F>) {
        let entry = self.coeffs.entry((i, j)).or_insert_with(Complex::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.coeffs.remove(&(i, j));
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `dz_I ∧ dz̄_J` (0-based index lists).
    pub fn coefficient(&self, i: &[usize], j: &[usize]) -> Complex<F> {
        match (mask_of(i, self.dim), mask_of(j, self.dim)) {
            (Ok(a), Ok(b)) => self.coeffs.get(&(a, b)).cloned().unwrap_or_else(Complex::zero),
            _ => Complex::zero(),
        }
    }

    pub(crate) fn coefficient_mask(&self, i: Mask, j: Mask) -> Complex<F> {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(Complex::zero)
    }

    /// Stored terms as `(I, J, c)` with 0-based index lists.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, Vec<usize>, &Complex<F>)> {
        self.coeffs
            .iter()
            .map(|((i, j), c)| (indices_of(*i), indices_of(*j), c))
    }

    pub(crate) fn mask_terms(&self) -> impl Iterator<Item = (Mask, Mask, &Complex<F>)> {
        self.coeffs.iter().map(|((i, j), c)| (*i, *j, c))
    }

    /// Largest coefficient modulus, used as the scale of float zero tests.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(complex_abs_f64).fold(0.0, f64::max)
    }

    pub fn is_negligible(&self, scale: f64, tol: f64) -> bool {
        self.coeffs.values().all(|c| complex_negligible(c, scale, tol))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.bidegree() != other.bidegree() {
            return Err(Error::BidegreeMismatch {
                expected: self.bidegree(),
                found: other.bidegree(),
            });
        }
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.insert(k.0, k.1, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Complex<F>) -> Self {
        let mut out = Self::zero(self.dim, self.p, self.q);
        for (k, v) in &self.coeffs {
            out.insert(k.0, k.1, v.clone() * c.clone());
        }
        out
    }

    pub fn scale_real(&self, c: &F) -> Self {
        self.scale(&Complex::new(c.clone(), F::zero()))
    }

    /// Exterior product. Total degree beyond `d` gives the zero form.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.dim, self.p + other.p, self.q + other.q);
        if out.p > self.dim || out.q > self.dim {
            return Ok(out);
        }
        // moving dz_K past dz̄_J costs (-1)^{|J||K|}
        let cross = (self.q * other.p) % 2 == 1;
        for ((i, j), a) in &self.coeffs {
            for ((k, l), b) in &other.coeffs {
                let (Some(s1), Some(s2)) = (merge_sign(*i, *k), merge_sign(*j, *l)) else {
                    continue;
                };
                let prod = a.clone() * b.clone();
                let prod = if cross ^ s1 ^ s2 { -prod } else { prod };
                out.insert(i | k, j | l, prod);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: usize) -> Result<Self> {
        let mut acc = Self::one(self.dim);
        for _ in 0..n {
            acc = acc.wedge(self)?;
        }
        Ok(acc)
    }

    /// Complex conjugate: `conj(c dz_I ∧ dz̄_J) = conj(c) (-1)^{pq} dz_J ∧ dz̄_I`.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero(self.dim, self.q, self.p);
        let negate = (self.p * self.q) % 2 == 1;
        for ((i, j), c) in &self.coeffs {
            let v = c.conj();
            out.insert(*j, *i, if negate { -v } else { v });
        }
        out
    }

    /// Reality `conj(φ) = φ`, exact on the exact backend and to `tol`
    /// relative to the largest coefficient otherwise.
    pub fn is_real(&self, tol: f64) -> bool {
        if self.p != self.q {
            return self.is_zero();
        }
        let scale = self.max_abs();
        let diff = self - &self.conj();
        diff.is_negligible(scale, tol)
    }

    /// `φ / vol` for a top-degree form.
    pub fn integrate_top_complex(&self) -> Result<Complex<F>> {
        if self.bidegree() != (self.dim, self.dim) {
            return Err(Error::BidegreeMismatch {
                expected: (self.dim, self.dim),
                found: self.bidegree(),
            });
        }
        let full: Mask = if self.dim == 32 { Mask::MAX } else { (1 << self.dim) - 1 };
        let c = self.coefficient_mask(full, full);
        Ok(c * i_pow::<F>(self.dim * self.dim).conj())
    }

    /// Real integral with `∫ Π_j (i dz_j ∧ dz̄_j) = 1`; a non-vanishing
    /// imaginary part signals a reality violation upstream.
    pub fn integrate_top(&self, tol: f64) -> Result<F> {
        let z = self.integrate_top_complex()?;
        let scale = complex_abs_f64(&z).max(1.0);
        if !z.im.negligible(scale, tol) {
            return Err(Error::ImaginaryIntegral { imag: z.im.to_f64() });
        }
        Ok(z.re)
    }

    /// Pullback along the projection `ℂ^{n} → ℂ^{d}` onto the first `d` coordinates.
    pub fn pullback(&self, new_dim: usize) -> Result<Self> {
        if new_dim < self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: new_dim,
            });
        }
        Ok(Form {
            dim: new_dim,
            p: self.p,
            q: self.q,
            coeffs: self.coeffs.clone(),
        })
    }

    pub fn map_scalar<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Form<G> {
        let mut out = Form::<G>::zero(self.dim, self.p, self.q);
        for ((i, j), c) in &self.coeffs {
            out.insert(*i, *j, Complex::new(f(&c.re), f(&c.im)));
        }
        out
    }

    pub fn to_f64(&self) -> Form<f64> {
        self.map_scalar(Scalar::to_f64)
    }

    /// Records `{I, J, re, im}` with 1-based indices, wrapped with dimension
    /// and bidegree.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms()
            .map(|(i, j, c)| {
                json!({
                    "I": i.iter().map(|x| x + 1).collect::<Vec<_>>(),
                    "J": j.iter().map(|x| x + 1).collect::<Vec<_>>(),
                    "re": c.re.to_json(),
                    "im": c.im.to_json(),
                })
            })
            .collect();
        json!({ "dim": self.dim, "bidegree": [self.p, self.q], "terms": terms })
    }

    /// Accepts the object written by [`Form::to_json`] or a bare record list,
    /// in which case `dim` must be supplied.
    pub fn from_json(v: &Value, dim: Option<usize>) -> Result<Self> {
        let (dim, bidegree, records) = match v {
            Value::Array(a) => (dim, None, a),
            Value::Object(o) => {
                let d = o.get("dim").and_then(Value::as_u64).map(|x| x as usize).or(dim);
                let b = o.get("bidegree").and_then(Value::as_array).and_then(|b| {
                    Some((b.first()?.as_u64()? as usize, b.get(1)?.as_u64()? as usize))
                });
                let t = o
                    .get("terms")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Json("form object needs a `terms` array".into()))?;
                (d, b, t)
            }
            _ => return Err(Error::Json("a form is an object or a list of records".into())),
        };
        let dim = dim.ok_or_else(|| Error::Json("form dimension is missing".into()))?;
        let mut parsed = Vec::new();
        for (n, r) in records.iter().enumerate() {
            let idx = |key: &str| -> Result<Vec<usize>> {
                r.get(key)
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Json(format!("record {n}: missing `{key}`")))?
                    .iter()
                    .map(|x| match x.as_u64() {
                        Some(k) if k >= 1 => Ok(k as usize - 1),
                        _ => Err(Error::Json(format!("record {n}: indices are 1-based integers"))),
                    })
                    .collect()
            };
            let part = |key: &str| -> Result<F> { r.get(key).map_or(Ok(F::zero()), F::from_json) };
            parsed.push((idx("I")?, idx("J")?, Complex::new(part("re")?, part("im")?)));
        }
        let (p, q) = match (bidegree, parsed.first()) {
            (Some(b), _) => b,
            (None, Some((i, j, _))) => (i.len(), j.len()),
            (None, None) => return Err(Error::Json("cannot infer the bidegree of an empty record list".into())),
        };
        Self::from_terms(dim, p, q, parsed)
    }
}

fn fmt_index(m: Mask) -> String {
    indices_of(m)
        .iter()
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl<F: Scalar> fmt::Display for Form<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|((i, j), c)| {
                let mut s = format!("({} + {}i)", c.re, c.im);
                if *i != 0 {
                    s.push_str(&format!(" dz[{}]", fmt_index(*i)));
                }
                if *j != 0 {
                    s.push_str(&format!(" dzb[{}]", fmt_index(*j)));
                }
                s
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl<F: Scalar> Add for &Form<F> {
    type Output = Form<F>;
    fn add(self, rhs: Self) -> Form<F> {
        self.try_add(rhs).expect("adding forms of different shape")
    }
}

impl<F: Scalar> Sub for &Form<F> {
    type Output = Form<F>;
    fn sub(self, rhs: Self) -> Form<F> {
        self.try_add(&-rhs).expect("subtracting forms of different shape")
    }
}

impl<F: Scalar> Neg for &Form<F> {
    type Output = Form<F>;
    fn neg(self) -> Form<F> {
        self.scale(&-Complex::<F>::one())
    }
}

/// Exterior product; panics on a dimension mismatch.
impl<F: Scalar> Mul for &Form<F> {
    type Output = Form<F>;
    fn mul(self, rhs: Self) -> Form<F> {
        self.wedge(rhs).expect("wedging forms on different spaces")
    }
}

impl<F: Scalar> GradedAlgebra for Form<F> {
    fn grade(&self) -> usize {
        self.p
    }

    fn unit(&self) -> Self {
        Self::one(self.dim)
    }

    fn zero_of_grade(&self, grade: usize) -> Self {
        Self::zero(self.dim, grade, grade)
    }

    fn try_add(&self, other: &Self) -> Result<Self> {
        Form::try_add(self, other)
    }

    fn try_mul(&self, other: &Self) -> Result<Self> {
        self.wedge(other)
    }

    fn scaled(&self, c: &Rational) -> Self {
        self.scale_real(&F::from_rational(c))
    }
}
