//! Slopes, discriminants, the extension identity and pointwise curvature
//! checks behind the Bogomolov inequality.

mod curvature;
mod harness;
mod higgs;
mod sheaf;

pub use curvature::{
    chern_forms, constraint_project, constraint_residual, discriminant_form, random_curvature, trace_check,
    trace_check_in, CurvatureMatrix, TraceReport,
};
pub use harness::{curvature_instance, curvature_trials, CurvatureConfig, CurvatureSummary};
pub use higgs::{higgs_curvature_term, hitchin_simpson, random_higgs, HiggsField, TensorTerm};
pub use sheaf::{bogomolov_value, discriminant, extension_identity, slope, ExtensionIdentity, SheafClassData};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demo::delv_subring;
    use crate::error::Error;
    use crate::exterior::{form_from_hermitian, random_kahler, Form};
    use crate::parallel::Execution;
    use crate::ring::{eval_in, free_ring, torus_element, torus_ring, RingElement};
    use crate::scalar::{rational, rint, Rational};
    use crate::symfunc::{schur_pair, Partition};
    use num::Complex;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn slopes() {
        let m = free_ring(&[("h", 1)], 2).unwrap();
        let h = eval_in(&m, "h").unwrap();
        let e = SheafClassData::new(2, h.scale(&rint(6)), RingElement::zero(&m, 2)).unwrap();
        assert_eq!(slope(&e, &h).unwrap(), rint(3));
        let zero = SheafClassData::new(3, RingElement::zero(&m, 1), RingElement::zero(&m, 2)).unwrap();
        assert_eq!(slope(&zero, &h).unwrap(), rint(0));
        let s = delv_subring().unwrap();
        let dm = s.model();
        let e = SheafClassData::new(2, eval_in(dm, "theta1").unwrap(), RingElement::zero(dm, 2)).unwrap();
        let eta = eval_in(dm, "theta1^2*theta2 + theta1*theta2^2").unwrap();
        assert_eq!(slope(&e, &eta).unwrap(), rint(2));
        assert!(SheafClassData::new(0, h.clone(), RingElement::zero(&m, 2)).is_err());
    }

    #[test]
    fn discriminants() {
        let m = free_ring(&[("a", 1), ("b", 1), ("x", 2)], 4).unwrap();
        let el = |s: &str| eval_in(&m, s).unwrap();
        let line = SheafClassData::line(&el("a")).unwrap();
        assert!(line.discriminant().unwrap().is_zero());
        let e = SheafClassData::new(2, RingElement::zero(&m, 1), el("x")).unwrap();
        assert_eq!(discriminant(&e).unwrap(), el("4*x"));
        let a = SheafClassData::line(&el("a")).unwrap();
        let b = SheafClassData::line(&el("b")).unwrap();
        let ext = SheafClassData::extension(&a, &b).unwrap();
        assert_eq!(ext.discriminant().unwrap(), el("-(a-b)^2"));
    }

    #[test]
    fn discriminant_is_twist_invariant() {
        let m = free_ring(&[("c1", 1), ("c2", 2), ("x", 1)], 4).unwrap();
        let el = |s: &str| eval_in(&m, s).unwrap();
        for r in 1..6 {
            let e = SheafClassData::new(r, el("c1"), el("c2")).unwrap();
            let t = e.twist(&el("x")).unwrap();
            assert_eq!(t.discriminant().unwrap(), e.discriminant().unwrap(), "rank {r}");
            assert_eq!(t.c2(), &el(&format!("c2 + {}*c1*x + {}*x^2", r - 1, r * (r - 1) / 2)));
        }
    }

    #[test]
    fn bogomolov_values() {
        let m = free_ring(&[("h", 1), ("k", 2)], 2).unwrap();
        let el = |s: &str| eval_in(&m, s).unwrap();
        let one = RingElement::one(&m);
        let line = SheafClassData::line(&el("h")).unwrap();
        assert_eq!(bogomolov_value(&line, &one).unwrap(), rint(0));
        let e = SheafClassData::new(2, RingElement::zero(&m, 1), el("k")).unwrap();
        assert_eq!(bogomolov_value(&e, &one).unwrap(), rint(4));
        assert!(matches!(bogomolov_value(&e, &el("h")), Err(Error::DegreeMismatch { .. })));
    }

    fn random_real_11(d: usize, rng: &mut ChaCha8Rng) -> Form<Rational> {
        let h: Vec<Vec<Complex<Rational>>> = {
            let mut h = vec![vec![Complex::new(rint(0), rint(0)); d]; d];
            for j in 0..d {
                h[j][j] = Complex::new(rint(rng.random_range(-5..6)), rint(0));
                for k in j + 1..d {
                    let z = Complex::new(rint(rng.random_range(-5..6)), rint(rng.random_range(-5..6)));
                    h[k][j] = z.conj();
                    h[j][k] = z;
                }
            }
            h
        };
        form_from_hermitian(&h, 0.0).unwrap()
    }

    #[test]
    fn rank_two_extensions_on_a_threefold() {
        let t = torus_ring::<Rational>(3).unwrap();
        let w = RingElement::named(&t, "omega").unwrap();
        let w2 = w.pow(2).unwrap();
        let w3 = w.pow(3).unwrap().integrate().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let b = torus_element(&t, &random_real_11(3, &mut rng)).unwrap();
            let delta = torus_element(&t, &random_real_11(3, &mut rng)).unwrap();
            let shift = (&delta * &w2).integrate().unwrap() / w3.clone();
            let delta = &delta - &w.scale(&shift);
            let a = &b + &delta;
            let e = SheafClassData::extension(&SheafClassData::line(&a).unwrap(), &SheafClassData::line(&b).unwrap())
                .unwrap();
            let v = bogomolov_value(&e, &w).unwrap();
            assert_eq!(v, -(&delta.pow(2).unwrap() * &w).integrate().unwrap());
            assert!(v >= rint(0));
        }
    }

    #[test]
    fn extension_identity_holds() {
        let m = free_ring(&[("a", 1), ("b", 1)], 2).unwrap();
        let el = |s: &str| eval_in(&m, s).unwrap();
        let f = SheafClassData::line(&el("a")).unwrap();
        let g = SheafClassData::line(&el("b")).unwrap();
        let id = extension_identity(&f, &g).unwrap();
        assert!(id.residual.is_zero());
        assert_eq!(id.lhs, el("(a-b)^2").scale(&rational(-1, 2)));
        assert_eq!(id.rhs, id.lhs);
        let same = extension_identity(&f, &f).unwrap();
        assert!(same.xi.is_zero());
        assert!(same.residual.is_zero());

        let s = delv_subring().unwrap();
        let dm = s.model();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let data = |rng: &mut ChaCha8Rng| {
            let mut q = || rational(rng.random_range(-9..10), rng.random_range(1..7));
            let c1 = RingElement::from_coeffs(dm, 1, (0..dm.rank(1)).map(|_| q()).collect()).unwrap();
            let c2 = RingElement::from_coeffs(dm, 2, (0..dm.rank(2)).map(|_| q()).collect()).unwrap();
            SheafClassData::new(rng.random_range(1..5), c1, c2).unwrap()
        };
        for _ in 0..50 {
            let (f, g) = (data(&mut rng), data(&mut rng));
            assert!(extension_identity(&f, &g).unwrap().residual.is_zero());
        }
    }

    fn kahler_pair(d: usize, e: usize, rng: &mut ChaCha8Rng) -> (Form<f64>, Form<f64>) {
        let forms: Vec<Form<f64>> = (0..e).map(|_| random_kahler(d, rng)).collect();
        schur_pair(&Partition::row(d - 1), &forms).unwrap()
    }

    #[test]
    fn projection_makes_admissible() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (o1, _) = kahler_pair(3, 2, &mut rng);
        let raw = random_curvature(3, 3, &mut rng);
        let p = constraint_project(&raw, &o1).unwrap();
        assert!(p.is_anti_selfadjoint(1e-12));
        assert!(p.trace().is_negligible(p.max_abs(), 1e-12));
        assert!(constraint_residual(&p, &o1).unwrap() < 1e-12 * p.max_abs() * o1.max_abs());
        let again = constraint_project(&p, &o1).unwrap();
        for (x, y) in again.entries().iter().flatten().zip(p.entries().iter().flatten()) {
            assert!((x - y).is_negligible(p.max_abs(), 1e-12));
        }
        let scalar = CurvatureMatrix::scalar(3, &Form::kahler_std(3).scale(&c(0.0, 1.0)));
        let zero = constraint_project(&scalar, &o1).unwrap();
        assert!(zero.entries().iter().flatten().all(|f| f.is_negligible(1.0, 1e-12)));
    }

    #[test]
    fn trace_terms_follow_the_sign_bookkeeping() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let (o1, o2) = kahler_pair(3, 3, &mut rng);
        let f0 = constraint_project(&random_curvature(2, 3, &mut rng), &o1).unwrap();
        let rep = trace_check(&f0, &o1, &o2, 1e-9).unwrap();
        assert!(rep.nonnegative);
        assert!(!rep.projectively_flat);
        assert!(rep.total > 0.0);
        let integral = |x: &Form<f64>| x.wedge(&o2).unwrap().integrate_top(1e-9).unwrap();
        // diagonal entries are iγ with γ real: T_ii = −∫γ²∧Ω_{d−2}
        for i in 0..2 {
            let gamma = f0.entry(i, i).scale(&c(0.0, -1.0));
            assert!(gamma.is_real(1e-12));
            let expect = -integral(&gamma.wedge(&gamma).unwrap());
            assert!((rep.terms[i][i] - expect).abs() < 1e-9 * rep.scale);
        }
        // off-diagonal F_01 = a + ib: T_01 + T_10 = −2∫(a² + b²)∧Ω_{d−2}
        let f = f0.entry(0, 1);
        let a = (f + &f.conj()).scale_real(&0.5);
        let b = (f - &f.conj()).scale(&c(0.0, -0.5));
        assert!(a.is_real(1e-12) && b.is_real(1e-12));
        let expect = -2.0 * (integral(&a.wedge(&a).unwrap()) + integral(&b.wedge(&b).unwrap()));
        assert!((rep.terms[0][1] + rep.terms[1][0] - expect).abs() < 1e-9 * rep.scale);
        // the total is the integral of tr(F₀²)
        let tr = integral(&f0.trace_square().unwrap());
        assert!((rep.total - tr).abs() < 1e-9 * rep.scale);
    }

    #[test]
    fn trace_check_edge_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (o1, o2) = kahler_pair(3, 2, &mut rng);
        let rep = trace_check(&CurvatureMatrix::zero(2, 3), &o1, &o2, 1e-9).unwrap();
        assert!(rep.projectively_flat && rep.total == 0.0 && rep.nonnegative);
        let raw = random_curvature(2, 3, &mut rng).anti_selfadjoint_part().trace_free();
        assert!(matches!(trace_check(&raw, &o1, &o2, 1e-9), Err(Error::Precondition(_))));
        let f0 = constraint_project(&raw, &o1).unwrap();
        let bad = &o2.scale_real(&-1.0);
        assert!(matches!(trace_check(&f0, &o1, bad, 1e-9), Err(Error::Precondition(_))));
    }

    #[test]
    fn discriminant_form_matches_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for r in 1..4 {
            let f = random_curvature(r, 3, &mut rng).anti_selfadjoint_part();
            let (c1, _) = chern_forms(&f).unwrap();
            assert!(c1.is_real(1e-12));
            let lhs = discriminant_form(&f).unwrap();
            let k = r as f64 / (4.0 * std::f64::consts::PI.powi(2));
            let rhs = f.trace_free().trace_square().unwrap().scale_real(&k);
            assert!((&lhs - &rhs).is_negligible(f.max_abs().powi(2), 1e-12), "rank {r}");
        }
    }

    #[test]
    fn higgs_terms() {
        let d = 3;
        let theta = HiggsField::<f64>::zero(2, d);
        let term = higgs_curvature_term(&theta).unwrap();
        assert!(term.entries().iter().flatten().all(Form::is_zero));
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let phi = super::curvature::random_one_form(d, &mut rng);
        let z = c(0.0, 0.0);
        let n = vec![vec![z, c(1.0, 0.0)], vec![z, z]];
        let theta = HiggsField::from_tensors(&[(n, phi.clone())], 1e-12).unwrap();
        let term = higgs_curvature_term(&theta).unwrap();
        let pp = phi.wedge(&phi.conj()).unwrap();
        // NN* − N*N = diag(1, −1)
        assert!((term.entry(0, 0) - &pp).is_negligible(1.0, 1e-12));
        assert!((term.entry(1, 1) + &pp).is_negligible(1.0, 1e-12));
        assert!(term.entry(0, 1).is_negligible(1.0, 1e-12));
        assert!(term.is_anti_selfadjoint(1e-12));
        let psi = super::curvature::random_one_form(d, &mut rng);
        let e12 = vec![vec![z, c(1.0, 0.0)], vec![z, z]];
        let e21 = vec![vec![z, z], vec![c(1.0, 0.0), z]];
        assert!(matches!(
            HiggsField::from_tensors(&[(e12, phi), (e21, psi)], 1e-12),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn higgs_reduces_to_plain_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let (o1, o2) = kahler_pair(3, 2, &mut rng);
        let f0 = constraint_project(&random_curvature(3, 3, &mut rng), &o1).unwrap();
        let hs = hitchin_simpson(&f0, &HiggsField::zero(3, 3)).unwrap();
        let (a, b) = (trace_check(&hs, &o1, &o2, 1e-9).unwrap(), trace_check(&f0, &o1, &o2, 1e-9).unwrap());
        for (x, y) in a.terms.iter().flatten().zip(b.terms.iter().flatten()) {
            assert!((x - y).abs() < 1e-12 * a.scale);
        }
        let theta = random_higgs(3, 3, &mut rng);
        assert!(higgs_curvature_term(&theta).unwrap().is_anti_selfadjoint(1e-9));
    }

    #[test]
    fn harness_is_deterministic() {
        for higgs in [false, true] {
            let cfg = CurvatureConfig {
                d: 3,
                r: 3,
                e: 2,
                trials: 6,
                seed: 21,
                higgs,
                tolerance: 1e-9,
            };
            let a = curvature_trials(&cfg, Execution::Sequential).unwrap();
            let b = curvature_trials(&cfg, Execution::Parallel).unwrap();
            assert_eq!(a, b);
            assert!(a.all_nonnegative);
            assert!(a.worst_total.unwrap() > 0.0);
        }
    }
}
