use serde_json::Value;

use crate::error::{Error, Result};
use crate::ring::{eval_in, Model, RingElement};
use crate::scalar::{binomial, Scalar};

/// Numerical data `(r, c₁, c₂)` of a torsion-free sheaf.
#[derive(Debug, Clone)]
pub struct SheafClassData<F> {
    rank: usize,
    c1: RingElement<F>,
    c2: RingElement<F>,
}

impl<F: Scalar> SheafClassData<F> {
    pub fn new(rank: usize, c1: RingElement<F>, c2: RingElement<F>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Precondition("rank must be at least 1".into()));
        }
        if !std::sync::Arc::ptr_eq(c1.model(), c2.model()) {
            return Err(Error::ModelMismatch);
        }
        for (el, k) in [(&c1, 1), (&c2, 2)] {
            if el.degree() != k {
                return Err(Error::DegreeMismatch {
                    expected: k,
                    found: el.degree(),
                });
            }
        }
        Ok(SheafClassData { rank, c1, c2 })
    }

    /// A line class: `(1, a, 0)`.
    pub fn line(a: &RingElement<F>) -> Result<Self> {
        Self::new(1, a.clone(), RingElement::zero(a.model(), 2))
    }

    /// Parses `{rank, c1, c2}` where each class is either a coefficient list
    /// over the model's basis or an expression in its names.
    pub fn from_json(model: &Model<F>, v: &Value) -> Result<Self> {
        let rank = v
            .get("rank")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Json("`rank` must be a positive integer".into()))? as usize;
        let class = |key: &str, k: usize| -> Result<RingElement<F>> {
            match v.get(key) {
                None => Ok(RingElement::zero(model, k)),
                Some(Value::String(src)) => {
                    let x = eval_in(model, src)?;
                    // a bare `0` parses in degree 0
                    Ok(if x.is_zero() { RingElement::zero(model, k) } else { x })
                }
                Some(Value::Array(xs)) => {
                    let coeffs = xs.iter().map(F::from_json).collect::<Result<Vec<_>>>()?;
                    RingElement::from_coeffs(model, k, coeffs)
                }
                Some(other) => Err(Error::Json(format!("`{key}` must be a list or an expression, got {other}"))),
            }
        };
        Self::new(rank, class("c1", 1)?, class("c2", 2)?)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn c1(&self) -> &RingElement<F> {
        &self.c1
    }

    pub fn c2(&self) -> &RingElement<F> {
        &self.c2
    }

    pub fn model(&self) -> &Model<F> {
        self.c1.model()
    }

    fn r(&self) -> F {
        F::from_i64(self.rank as i64)
    }

    /// `Δ = 2r·c₂ − (r−1)·c₁²`.
    pub fn discriminant(&self) -> Result<RingElement<F>> {
        let a = self.c2.scale(&F::from_i64(2 * self.rank as i64));
        let b = self.c1.pow(2)?.scale(&F::from_i64(self.rank as i64 - 1));
        a.try_sub(&b)
    }

    /// Tensor with a line class `x`:
    /// `c₁ + r·x`, `c₂ + (r−1)·c₁x + C(r,2)·x²`.
    pub fn twist(&self, x: &RingElement<F>) -> Result<Self> {
        let r = self.rank as i64;
        let c1 = self.c1.try_add(&x.scale(&self.r()))?;
        let c2 = self
            .c2
            .try_add(&self.c1.try_mul(x)?.scale(&F::from_i64(r - 1)))?
            .try_add(&x.pow(2)?.scale(&F::from_rational(&binomial(r, 2))))?;
        Self::new(self.rank, c1, c2)
    }

    /// Whitney sum data of an extension `0 → F → E → G → 0`.
    pub fn extension(f: &Self, g: &Self) -> Result<Self> {
        let c1 = f.c1.try_add(&g.c1)?;
        let c2 = f.c2.try_add(&g.c2)?.try_add(&f.c1.try_mul(&g.c1)?)?;
        Self::new(f.rank + g.rank, c1, c2)
    }
}

/// `μ(E) = ∫c₁(E)·η_{d−1} / r`.
pub fn slope<F: Scalar>(e: &SheafClassData<F>, eta1: &RingElement<F>) -> Result<F> {
    let d = e.model().dim();
    if eta1.degree() + 1 != d {
        return Err(Error::DegreeMismatch {
            expected: d - 1,
            found: eta1.degree(),
        });
    }
    Ok(e.c1.try_mul(eta1)?.integrate()? / e.r())
}

pub fn discriminant<F: Scalar>(e: &SheafClassData<F>) -> Result<RingElement<F>> {
    e.discriminant()
}

/// `∫Δ(E)·η_{d−2}`.
pub fn bogomolov_value<F: Scalar>(e: &SheafClassData<F>, eta2: &RingElement<F>) -> Result<F> {
    let d = e.model().dim();
    if eta2.degree() + 2 != d {
        return Err(Error::DegreeMismatch {
            expected: d.saturating_sub(2),
            found: eta2.degree(),
        });
    }
    e.discriminant()?.try_mul(eta2)?.integrate()
}

/// Both sides of
/// `−(r_F r_G / r_E)·ξ² = Δ(E)/r_E − Δ(F)/r_F − Δ(G)/r_G`,
/// `ξ = c₁(F)/r_F − c₁(G)/r_G`, for the extension `E` of `G` by `F`.
#[derive(Debug, Clone)]
pub struct ExtensionIdentity<F> {
    pub xi: RingElement<F>,
    pub lhs: RingElement<F>,
    pub rhs: RingElement<F>,
    pub residual: RingElement<F>,
}

pub fn extension_identity<F: Scalar>(f: &SheafClassData<F>, g: &SheafClassData<F>) -> Result<ExtensionIdentity<F>> {
    let e = SheafClassData::extension(f, g)?;
    let (rf, rg, re) = (f.r(), g.r(), e.r());
    let xi = f.c1.scale(&(F::one() / rf.clone())).try_sub(&g.c1.scale(&(F::one() / rg.clone())))?;
    let lhs = xi.pow(2)?.scale(&(-(rf.clone() * rg.clone() / re.clone())));
    let rhs = e
        .discriminant()?
        .scale(&(F::one() / re))
        .try_sub(&f.discriminant()?.scale(&(F::one() / rf)))?
        .try_sub(&g.discriminant()?.scale(&(F::one() / rg)))?;
    let residual = lhs.try_sub(&rhs)?;
    Ok(ExtensionIdentity { xi, lhs, rhs, residual })
}
