use num::traits::One;

use super::algebra::{sum_all, GradedAlgebra};
use crate::error::{Error, Result};
use crate::scalar::{binomial, Rational};

/// Total Chern class `c_0 = 1, c_1, ..., c_e` of a rank-`e` bundle, with
/// values in any graded algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct ChernVector<T> {
    classes: Vec<T>,
}

impl<T: GradedAlgebra> ChernVector<T> {
    /// `classes` are `c_1, ..., c_e`; `c_0 = 1` is prepended.
    pub fn new(classes: Vec<T>) -> Result<Self> {
        let Some(first) = classes.first() else {
            return Err(Error::Precondition("a Chern vector needs rank at least 1".into()));
        };
        let mut all = vec![first.unit()];
        all.extend(classes);
        Self::from_total(all)
    }

    /// `classes` are `c_0, ..., c_e` with `c_0` required to be the unit.
    pub fn from_total(classes: Vec<T>) -> Result<Self> {
        for (k, c) in classes.iter().enumerate() {
            if c.grade() != k {
                return Err(Error::DegreeMismatch {
                    expected: k,
                    found: c.grade(),
                });
            }
        }
        Ok(ChernVector { classes })
    }

    pub fn rank(&self) -> usize {
        self.classes.len() - 1
    }

    /// `c_k`, zero above the rank.
    pub fn class(&self, k: usize) -> T {
        self.classes
            .get(k)
            .cloned()
            .unwrap_or_else(|| self.classes[0].zero_of_grade(k))
    }

    pub fn classes(&self) -> &[T] {
        &self.classes
    }
}

/// Chern classes of the ℝ-twisted bundle `A<t h>`:
/// `c_p = sum_{k=0}^{p} C(e-k, p-k) c_k(A) (t h)^{p-k}`.
pub fn twist_chern<T: GradedAlgebra>(c: &ChernVector<T>, t: &Rational, h: &T) -> Result<ChernVector<T>> {
    if h.grade() != 1 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            found: h.grade(),
        });
    }
    let e = c.rank() as i64;
    let th = h.scaled(t);
    let powers: Vec<T> = std::iter::successors(Some(th.unit()), |p| p.try_mul(&th).ok())
        .take(c.rank() + 1)
        .collect();
    let classes = (0..=c.rank())
        .map(|p| {
            let terms = (0..=p)
                .map(|k| {
                    let coeff = binomial(e - k as i64, (p - k) as i64);
                    c.class(k).try_mul(&powers[p - k]).map(|x| x.scaled(&coeff))
                })
                .collect::<Result<Vec<T>>>()?;
            sum_all(h, p, terms)
        })
        .collect::<Result<Vec<T>>>()?;
    ChernVector::from_total(classes)
}

/// Inverse of the total class: `s_0 = 1`, `s_k = -sum_{i=1}^{k} c_i s_{k-i}`,
/// returned for `k = 0..=trunc`.
pub fn invert_total_class<T: GradedAlgebra>(c: &ChernVector<T>, trunc: usize) -> Result<Vec<T>> {
    let one = c.classes[0].clone();
    let mut s: Vec<T> = vec![one.clone()];
    for k in 1..=trunc {
        let terms = (1..=k.min(c.rank()))
            .map(|i| c.class(i).try_mul(&s[k - i]))
            .collect::<Result<Vec<T>>>()?;
        let sum = sum_all(&one, k, terms)?;
        s.push(sum.scaled(&-Rational::one()));
    }
    Ok(s)
}

/// Segre classes normalized so that `s_k` is the complete homogeneous
/// polynomial in the Chern roots (so `s_1 = c_1`). This is the pushforward
/// convention `π_*(ξ^{e-1+k}) = s_k` on the projective bundle of quotients,
/// and equals `(-1)^k` times the inverse total class.
pub fn segre_classes<T: GradedAlgebra>(c: &ChernVector<T>, trunc: usize) -> Result<Vec<T>> {
    Ok(invert_total_class(c, trunc)?
        .into_iter()
        .enumerate()
        .map(|(k, s)| {
            if k % 2 == 1 {
                s.scaled(&-Rational::one())
            } else {
                s
            }
        })
        .collect())
}
