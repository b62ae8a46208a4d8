//! The graded-algebra abstraction symmetric polynomials are evaluated in.

use num::traits::One;

use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Commutative graded algebra with rational scalars, concentrated in even
/// real degree. `grade` counts complex codimension: a `(p,p)`-form or a
/// codimension-`p` class has grade `p`.
pub trait GradedAlgebra: Clone {
    fn grade(&self) -> usize;
    /// The unit of the algebra `self` lives in.
    fn unit(&self) -> Self;
    fn zero_of_grade(&self, grade: usize) -> Self;
    fn try_add(&self, other: &Self) -> Result<Self>;
    fn try_mul(&self, other: &Self) -> Result<Self>;
    fn scaled(&self, c: &Rational) -> Self;

    fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scaled(&-Rational::one()))
    }

    fn try_pow(&self, n: usize) -> Result<Self> {
        let mut acc = self.unit();
        for _ in 0..n {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }
}

/// Elementary symmetric sums `e_1, ..., e_n` of `vars` (each of grade 1),
/// computed as the graded pieces of `prod (1 + v_i)`.
pub fn elementary_values<T: GradedAlgebra>(vars: &[T]) -> Result<Vec<T>> {
    let Some(first) = vars.first() else {
        return Ok(Vec::new());
    };
    let n = vars.len();
    let mut e: Vec<T> = (0..=n).map(|k| first.zero_of_grade(k)).collect();
    e[0] = first.unit();
    for (i, v) in vars.iter().enumerate() {
        if v.grade() != 1 {
            return Err(Error::DegreeMismatch {
                expected: 1,
                found: v.grade(),
            });
        }
        for k in (1..=i + 1).rev() {
            e[k] = e[k].try_add(&e[k - 1].try_mul(v)?)?;
        }
    }
    e.remove(0);
    Ok(e)
}

pub(crate) fn sum_all<T: GradedAlgebra>(template: &T, grade: usize, items: impl IntoIterator<Item = T>) -> Result<T> {
    items
        .into_iter()
        .try_fold(template.zero_of_grade(grade), |acc, x| acc.try_add(&x))
}
