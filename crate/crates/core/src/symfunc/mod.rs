//! Exact symmetric-function calculus in the elementary-symmetric basis:
//! Schur polynomials, derived polynomials, twisted Chern classes and
//! total-class inversion.

mod algebra;
mod chern;
mod partition;
mod schur;
mod sympoly;

pub use algebra::{elementary_values, GradedAlgebra};
pub use chern::{invert_total_class, segre_classes, twist_chern, ChernVector};
pub use partition::Partition;
pub use schur::schur;
pub use sympoly::{derived, evaluate, shift, SymPoly, TPoly};

/// `(s_λ, s'_λ)` evaluated on grade-1 elements, i.e. on the Chern roots
/// `vars`.
pub fn schur_pair<T: GradedAlgebra>(lambda: &Partition, vars: &[T]) -> crate::error::Result<(T, T)> {
    let s = schur(lambda, vars.len());
    let ds = derived(&s, 1)?;
    let e = elementary_values(vars)?;
    Ok((evaluate(&s, &e)?, evaluate(&ds, &e)?))
}

/// Complete homogeneous polynomial `h_k` expressed in the `e`-basis.
pub fn complete_homogeneous(num_vars: usize, k: usize) -> SymPoly {
    let c = ChernVector::new((1..=num_vars).map(|j| SymPoly::elementary(num_vars, j)).collect())
        .expect("elementary polynomials have matching grades");
    segre_classes(&c, k).expect("same variable count").swap_remove(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, rint, Rational};
    use num::traits::{One, Zero};
    use proptest::prelude::*;

    fn det(mut m: Vec<Vec<Rational>>) -> Rational {
        let n = m.len();
        let mut d = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                m.swap(p, c);
                d = -d;
            }
            d *= m[c][c].clone();
            for r in c + 1..n {
                let f = m[r][c].clone() / m[c][c].clone();
                for j in c..n {
                    let v = m[c][j].clone() * f.clone();
                    m[r][j] -= v;
                }
            }
        }
        d
    }

    /// Bialternant formula `det(x_i^{λ_j + n - j}) / det(x_i^{n - j})`.
    fn bialternant(lambda: &Partition, x: &[Rational]) -> Rational {
        let n = x.len();
        let parts: Vec<usize> = (0..n).map(|j| lambda.parts().get(j).copied().unwrap_or(0)).collect();
        let num = det((0..n)
            .map(|i| (0..n).map(|j| num::pow(x[i].clone(), parts[j] + n - 1 - j)).collect())
            .collect());
        let den = det((0..n)
            .map(|i| (0..n).map(|j| num::pow(x[i].clone(), n - 1 - j)).collect())
            .collect());
        num / den
    }

    /// `e_k(x)` by summing over all `k`-subsets.
    fn elementary_numeric(x: &[Rational]) -> Vec<Rational> {
        let n = x.len();
        let mut e = vec![Rational::zero(); n];
        for mask in 1u32..(1 << n) {
            let k = mask.count_ones() as usize;
            let prod = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .fold(Rational::one(), |a, i| a * x[i].clone());
            e[k - 1] += prod;
        }
        e
    }

    fn samples(n: usize) -> Vec<Vec<Rational>> {
        let base = [rint(2), rational(-1, 3), rint(5), rational(7, 2), rint(-4), rational(1, 5)];
        (0..3)
            .map(|s| (0..n).map(|i| base[(i + 2 * s) % base.len()].clone() + rint(s as i64)).collect())
            .collect()
    }

    #[test]
    fn schur_examples() {
        assert_eq!(schur(&"1,1".parse().unwrap(), 3), SymPoly::elementary(3, 2));
        let e1 = SymPoly::elementary(3, 1);
        let expected = e1.try_mul(&e1).unwrap().try_sub(&SymPoly::elementary(3, 2)).unwrap();
        assert_eq!(schur(&"2".parse().unwrap(), 3), expected);
        for e in 1..5 {
            assert_eq!(schur(&"1".parse().unwrap(), e), SymPoly::elementary(e, 1));
        }
        assert_eq!(schur(&Partition::empty(), 3), SymPoly::one(3));
        assert!(schur(&"1,1,1".parse().unwrap(), 2).is_zero());
    }

    #[test]
    fn schur_matches_bialternant() {
        for e in 1..=4 {
            for w in 1..=5 {
                for lambda in Partition::all_of(w) {
                    let s = schur(&lambda, e);
                    assert_eq!(s.weight(), w);
                    for x in samples(e) {
                        let expected = if lambda.len() > e { Rational::zero() } else { bialternant(&lambda, &x) };
                        assert_eq!(s.eval_numeric(&elementary_numeric(&x)), expected, "λ={lambda}, e={e}");
                    }
                }
            }
        }
    }

    #[test]
    fn jacobi_trudi_consistency() {
        for e in 1..=5 {
            for w in 0..=5 {
                for lambda in Partition::all_of(w) {
                    let n = lambda.len();
                    let entry = |i: usize, j: usize| -> Option<SymPoly> {
                        let k = lambda.parts()[i] as isize - i as isize + j as isize;
                        (k >= 0).then(|| complete_homogeneous(e, k as usize))
                    };
                    let via_h = if n == 0 {
                        SymPoly::one(e)
                    } else {
                        schur::jacobi_trudi_det(n, &entry, e, w).unwrap()
                    };
                    assert_eq!(schur(&lambda, e), via_h, "λ={lambda}, e={e}");
                }
            }
        }
    }

    #[test]
    fn derived_of_schur_one() {
        for e in 1..6 {
            let d = derived(&schur(&"1".parse().unwrap(), e), 1).unwrap();
            assert_eq!(d.as_constant(), Some(rint(e as i64)));
        }
    }

    #[test]
    fn shift_matches_numeric_substitution() {
        // p(x + t) evaluated directly vs sum t^i p^{(i)}(x)
        let lambda: Partition = "2,1".parse().unwrap();
        for e in 2..=4 {
            let p = schur(&lambda, e);
            let tp = shift(&p, p.weight()).unwrap();
            for x in samples(e) {
                let t = rational(3, 7);
                let xt: Vec<Rational> = x.iter().map(|v| v + &t).collect();
                let direct = p.eval_numeric(&elementary_numeric(&xt));
                let ex = elementary_numeric(&x);
                let series = tp
                    .coefficients()
                    .iter()
                    .enumerate()
                    .fold(Rational::zero(), |acc, (i, c)| acc + c.eval_numeric(&ex) * num::pow(t.clone(), i));
                assert_eq!(direct, series);
            }
        }
    }

    #[test]
    fn invert_examples() {
        let e = 2;
        let c = ChernVector::new(vec![SymPoly::elementary(e, 1), SymPoly::elementary(e, 2)]).unwrap();
        let s = invert_total_class(&c, 3).unwrap();
        let e1 = SymPoly::elementary(e, 1);
        let e2 = SymPoly::elementary(e, 2);
        assert_eq!(s[1], e1.scaled(&rint(-1)));
        assert_eq!(s[2], e1.try_mul(&e1).unwrap().try_sub(&e2).unwrap());

        let line = ChernVector::new(vec![SymPoly::elementary(1, 1)]).unwrap();
        let s = invert_total_class(&line, 4).unwrap();
        for (k, sk) in s.iter().enumerate() {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(*sk, SymPoly::elementary(1, 1).try_pow(k).unwrap().scaled(&rint(sign)));
        }

        let trivial = ChernVector::new(vec![SymPoly::zero(2, 1), SymPoly::zero(2, 2)]).unwrap();
        let s = invert_total_class(&trivial, 3).unwrap();
        assert_eq!(s[0], SymPoly::one(2));
        assert!(s[1..].iter().all(SymPoly::is_zero));
    }

    fn small_poly(e: usize, weight: usize, seed: &[i64]) -> SymPoly {
        // all monomials of the given weight with coefficients drawn from seed
        fn monomials(e: usize, k: usize, w: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if k == e {
                if w == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            for a in 0..=(w / (k + 1)) {
                cur.push(a as u32);
                monomials(e, k + 1, w - a * (k + 1), cur, out);
                cur.pop();
            }
        }
        let mut ms = Vec::new();
        monomials(e, 0, weight, &mut Vec::new(), &mut ms);
        let terms = ms.into_iter().enumerate().map(|(i, m)| (m, rint(seed[i % seed.len()])));
        SymPoly::from_terms(e, terms).unwrap_or_else(|_| SymPoly::zero(e, weight))
    }

    #[test]
    fn twist_matches_shifted_roots() {
        use crate::ring::{eval_in, free_ring};
        let m = free_ring(&[("x1", 1), ("x2", 1), ("x3", 1), ("h", 1)], 3).unwrap();
        let el = |s: &str| eval_in(&m, s).unwrap();
        let roots = [el("x1"), el("x2"), el("x3")];
        let c = ChernVector::new(elementary_values(&roots).unwrap()).unwrap();
        for t in [rint(0), rint(2), rational(-3, 4)] {
            let twisted = twist_chern(&c, &t, &el("h")).unwrap();
            let moved: Vec<_> = roots.iter().map(|x| x + &el("h").scale(&t)).collect();
            let expect = elementary_values(&moved).unwrap();
            for k in 1..=3 {
                assert_eq!(twisted.class(k), expect[k - 1], "t = {t}, c_{k}");
            }
        }
    }

    proptest! {
        #[test]
        fn shift_is_multiplicative(e in 1usize..4, wa in 0usize..4, wb in 0usize..4,
                                   sa in proptest::collection::vec(-3i64..4, 1..5),
                                   sb in proptest::collection::vec(-3i64..4, 1..5)) {
            let a = small_poly(e, wa, &sa);
            let b = small_poly(e, wb, &sb);
            let full = wa + wb;
            let lhs = shift(&a.try_mul(&b).unwrap(), full).unwrap();
            let rhs = shift(&a, full).unwrap().try_mul(&shift(&b, full).unwrap(), full).unwrap();
            prop_assert_eq!(lhs.coefficients().len(), rhs.coefficients().len());
            for (x, y) in lhs.coefficients().iter().zip(rhs.coefficients()) {
                prop_assert_eq!(x, y);
            }
            for (i, c) in lhs.coefficients().iter().enumerate() {
                prop_assert_eq!(c.weight(), full - i);
            }
        }

        #[test]
        fn twists_compose(a in -4i64..5, b in 1i64..4, c in -4i64..5, d in 1i64..4,
                          cs in proptest::collection::vec(-5i64..6, 3)) {
            use crate::ring::{eval_in, free_ring};
            let m = free_ring(&[("c1", 1), ("c2", 2), ("c3", 3), ("h", 1)], 4).unwrap();
            let el = |s: &str| eval_in(&m, s).unwrap();
            let classes = vec![el("c1").scale(&rint(cs[0])), el("c2").scale(&rint(cs[1])), el("c3").scale(&rint(cs[2]))];
            let cv = ChernVector::new(classes).unwrap();
            let (s, t) = (rational(a, b), rational(c, d));
            let h = el("h");
            let twice = twist_chern(&twist_chern(&cv, &s, &h).unwrap(), &t, &h).unwrap();
            let once = twist_chern(&cv, &(s + t), &h).unwrap();
            for k in 0..=3 {
                prop_assert_eq!(twice.class(k), once.class(k));
            }
        }
    }
}
