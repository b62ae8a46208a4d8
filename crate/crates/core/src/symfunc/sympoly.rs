use std::collections::BTreeMap;
use std::fmt;

use num::traits::{One, Signed, Zero};

use super::algebra::GradedAlgebra;
use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Homogeneous symmetric polynomial in `num_vars` variables, stored in the
/// elementary-symmetric basis: each key is the exponent vector of
/// `e_1^{a_1} ... e_n^{a_n}`, where `e_k` has weight `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymPoly {
    num_vars: usize,
    weight: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

fn monomial_weight(exps: &[u32]) -> usize {
    exps.iter()
        .enumerate()
        .map(|(k, &a)| (k + 1) * a as usize)
        .sum()
}

impl SymPoly {
    pub fn zero(num_vars: usize, weight: usize) -> Self {
        SymPoly {
            num_vars,
            weight,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, Rational::one())
    }

    pub fn constant(num_vars: usize, c: Rational) -> Self {
        let mut p = Self::zero(num_vars, 0);
        if !c.is_zero() {
            p.terms.insert(vec![0; num_vars], c);
        }
        p
    }

    /// The elementary symmetric polynomial `e_k`; zero when `k > num_vars`.
    pub fn elementary(num_vars: usize, k: usize) -> Self {
        if k == 0 {
            return Self::one(num_vars);
        }
        let mut p = Self::zero(num_vars, k);
        if k <= num_vars {
            let mut exps = vec![0; num_vars];
            exps[k - 1] = 1;
            p.terms.insert(exps, Rational::one());
        }
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; all
    /// monomials must share one weight.
    pub fn from_terms(num_vars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Result<Self> {
        let mut out: Option<SymPoly> = None;
        for (exps, c) in terms {
            if exps.len() != num_vars {
                return Err(Error::VariableMismatch {
                    left: num_vars,
                    right: exps.len(),
                });
            }
            let w = monomial_weight(&exps);
            let mut mono = SymPoly::zero(num_vars, w);
            if !c.is_zero() {
                mono.terms.insert(exps, c);
            }
            out = Some(match out {
                None => mono,
                Some(acc) => acc.try_add(&mono)?,
            });
        }
        out.ok_or_else(|| Error::Construction("empty term list has no weight".into()))
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// The rational constant of a weight-zero polynomial.
    pub fn as_constant(&self) -> Option<Rational> {
        (self.weight == 0).then(|| self.coefficient(&vec![0; self.num_vars]))
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.num_vars != other.num_vars {
            return Err(Error::VariableMismatch {
                left: self.num_vars,
                right: other.num_vars,
            });
        }
        Ok(())
    }

    /// Evaluates at numeric values of `e_1, ..., e_n`.
    pub fn eval_numeric(&self, e: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(exps, c)| {
                exps.iter()
                    .zip(e)
                    .fold(c.clone(), |acc, (&a, x)| acc * num::pow(x.clone(), a as usize))
            })
            .fold(Rational::zero(), |a, b| a + b)
    }
}

impl GradedAlgebra for SymPoly {
    fn grade(&self) -> usize {
        self.weight
    }

    fn unit(&self) -> Self {
        SymPoly::one(self.num_vars)
    }

    fn zero_of_grade(&self, grade: usize) -> Self {
        SymPoly::zero(self.num_vars, grade)
    }

    fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        if self.weight != other.weight {
            return Err(Error::DegreeMismatch {
                expected: self.weight,
                found: other.weight,
            });
        }
        let mut out = self.clone();
        for (k, v) in &other.terms {
            let entry = out.terms.entry(k.clone()).or_insert_with(Rational::zero);
            *entry += v;
            if entry.is_zero() {
                out.terms.remove(k);
            }
        }
        Ok(out)
    }

    fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = SymPoly::zero(self.num_vars, self.weight + other.weight);
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                let k: Vec<u32> = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                let entry = out.terms.entry(k).or_insert_with(Rational::zero);
                *entry += va * vb;
            }
        }
        out.terms.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    fn scaled(&self, c: &Rational) -> Self {
        let mut out = SymPoly::zero(self.num_vars, self.weight);
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect();
        }
        out
    }
}

/// Canonical text form: monomials in descending lexicographic order of
/// their exponent vectors, e.g. `e1^2 - e2`.
impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (exps, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(|(k, &a)| {
                    if a == 1 {
                        format!("e{}", k + 1)
                    } else {
                        format!("e{}^{a}", k + 1)
                    }
                })
                .collect();
            let negative = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "{mag}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

/// Polynomial in a formal parameter `t` with [`SymPoly`] coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct TPoly {
    coeffs: Vec<SymPoly>,
}

impl TPoly {
    pub fn constant(p: SymPoly) -> Self {
        TPoly { coeffs: vec![p] }
    }

    pub fn coefficients(&self) -> &[SymPoly] {
        &self.coeffs
    }

    pub fn coefficient(&self, i: usize) -> Option<&SymPoly> {
        self.coeffs.get(i)
    }

    fn truncated(mut self, max_order: usize) -> Self {
        self.coeffs.truncate(max_order + 1);
        self
    }

    pub fn try_mul(&self, other: &Self, max_order: usize) -> Result<Self> {
        let n = (self.coeffs.len() + other.coeffs.len() - 1).min(max_order + 1);
        let w = self.coeffs[0].weight() + other.coeffs[0].weight();
        let vars = self.coeffs[0].num_vars();
        let mut out: Vec<SymPoly> = (0..n).map(|i| SymPoly::zero(vars, w.saturating_sub(i))).collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j < n {
                    out[i + j] = out[i + j].try_add(&a.try_mul(b)?)?;
                }
            }
        }
        Ok(TPoly { coeffs: out })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = long.clone();
        for (i, c) in short.coeffs.iter().enumerate() {
            out.coeffs[i] = out.coeffs[i].try_add(c)?;
        }
        Ok(out)
    }
}

/// `e_k(x_1 + t, ..., x_n + t) = sum_j C(n - j, k - j) e_j t^{k - j}`.
fn shifted_elementary(num_vars: usize, k: usize) -> TPoly {
    let coeffs = (0..=k)
        .map(|i| {
            let j = k - i;
            let c = crate::scalar::binomial(num_vars as i64 - j as i64, i as i64);
            SymPoly::elementary(num_vars, j).scaled(&c)
        })
        .collect();
    TPoly { coeffs }
}

/// Expands `p(x_1 + t, ..., x_n + t) = sum_i t^i p^{(i)}`, truncated after `t^max_order`.
pub fn shift(p: &SymPoly, max_order: usize) -> Result<TPoly> {
    let n = p.num_vars();
    let mut total = TPoly::constant(SymPoly::zero(n, p.weight()));
    let shifted: Vec<TPoly> = (1..=n).map(|k| shifted_elementary(n, k)).collect();
    for (exps, c) in p.terms() {
        let mut term = TPoly::constant(SymPoly::constant(n, c.clone()));
        for (k, &a) in exps.iter().enumerate() {
            for _ in 0..a {
                term = term.try_mul(&shifted[k], max_order)?;
            }
        }
        total = total.try_add(&term)?;
    }
    let len = (p.weight() + 1).min(max_order + 1);
    while total.coeffs.len() < len {
        let i = total.coeffs.len();
        total.coeffs.push(SymPoly::zero(n, p.weight() - i));
    }
    Ok(total.truncated(max_order))
}

/// The derived polynomial `p^{(i)}`: the coefficient of `t^i` in `p(x + t)`.
pub fn derived(p: &SymPoly, order: usize) -> Result<SymPoly> {
    if order > p.weight() {
        return Err(Error::OrderOutOfRange {
            order,
            weight: p.weight(),
        });
    }
    Ok(shift(p, order)?.coeffs.swap_remove(order))
}

/// Evaluates `p` by substituting `args[k-1]` for `e_k`. Each `args[k-1]`
/// must have grade `k`.
pub fn evaluate<T: GradedAlgebra>(p: &SymPoly, args: &[T]) -> Result<T> {
    if args.len() != p.num_vars() {
        return Err(Error::VariableMismatch {
            left: p.num_vars(),
            right: args.len(),
        });
    }
    let Some(first) = args.first() else {
        return Err(Error::Precondition("evaluation needs at least one variable".into()));
    };
    for (k, a) in args.iter().enumerate() {
        if a.grade() != k + 1 {
            return Err(Error::DegreeMismatch {
                expected: k + 1,
                found: a.grade(),
            });
        }
    }
    let mut acc = first.zero_of_grade(p.weight());
    for (exps, c) in p.terms() {
        let mut term = first.unit().scaled(c);
        for (k, &a) in exps.iter().enumerate() {
            for _ in 0..a {
                term = term.try_mul(&args[k])?;
            }
        }
        acc = acc.try_add(&term)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rint;

    #[test]
    fn canonical_text() {
        let e1 = SymPoly::elementary(3, 1);
        let e2 = SymPoly::elementary(3, 2);
        let p = e1.try_mul(&e1).unwrap().try_sub(&e2).unwrap();
        assert_eq!(p.to_string(), "e1^2 - e2");
        let q = e1.try_mul(&e2).unwrap().scaled(&crate::scalar::rational(-3, 2));
        assert_eq!(q.to_string(), "-3/2*e1*e2");
        assert_eq!(SymPoly::zero(2, 3).to_string(), "0");
        assert_eq!(SymPoly::constant(4, rint(4)).to_string(), "4");
    }

    #[test]
    fn shift_examples() {
        let e1 = SymPoly::elementary(4, 1);
        let s = shift(&e1, 5).unwrap();
        assert_eq!(s.coefficients().len(), 2);
        assert_eq!(s.coefficients()[0], e1);
        assert_eq!(s.coefficients()[1].as_constant(), Some(rint(4)));

        let e2 = SymPoly::elementary(2, 2);
        let s = shift(&e2, 2).unwrap();
        assert_eq!(s.coefficients()[0], e2);
        assert_eq!(s.coefficients()[1], SymPoly::elementary(2, 1));
        assert_eq!(s.coefficients()[2].as_constant(), Some(rint(1)));
    }

    #[test]
    fn derived_out_of_range() {
        let e2 = SymPoly::elementary(2, 2);
        assert_eq!(derived(&e2, 0).unwrap(), e2);
        assert_eq!(derived(&e2, 2).unwrap().as_constant(), Some(rint(1)));
        assert!(matches!(derived(&e2, 3), Err(Error::OrderOutOfRange { .. })));
    }

    #[test]
    fn evaluate_checks_degrees() {
        let p = SymPoly::elementary(2, 1);
        let bad = vec![SymPoly::elementary(2, 1), SymPoly::elementary(2, 1)];
        assert!(matches!(evaluate(&p, &bad), Err(Error::DegreeMismatch { .. })));
    }
}
