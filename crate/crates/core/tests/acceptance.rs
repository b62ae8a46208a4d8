//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Tolerances are pinned below.

use std::process::ExitCode;
use std::time::Instant;

use hrpairs::bogomolov::{curvature_trials, extension_identity, trace_check, CurvatureConfig, CurvatureMatrix, SheafClassData};
use hrpairs::demo::{delv_forms, delv_kernel_form, delv_subring, delv_torus, fulger_lehmann, matrix_text};
use hrpairs::error::Result;
use hrpairs::exterior::{random_kahler, real_basis, Form};
use hrpairs::hrcheck::{gram, is_hr_pair, relative_gap, sample_search, signature, SearchConfig};
use hrpairs::parallel::Execution;
use hrpairs::ring::{eval_in, free_ring, torus_element, torus_ring, Model, ProductWithP1, ProjectiveBundle, RingElement};
use hrpairs::scalar::{rational, rint, Rational};
use hrpairs::symfunc::{derived, evaluate, invert_total_class, schur, segre_classes, twist_chern, ChernVector, Partition};
use hrpairs::verdict::Outcome;
use num::traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Relative zero threshold for float signatures.
const SIGNATURE_TOL: f64 = 1e-9;
/// Lower bound on `min|μ| / max|μ|` for the classical signatures.
const MIN_GAP: f64 = 1e-8;
/// Tolerance handed to the pointwise pair search.
const SEARCH_TOL: f64 = 1e-9;
/// Terms may dip to `−POSITIVITY_TOL · scale`.
const POSITIVITY_TOL: f64 = 1e-9;
const SEED: u64 = 20240917;

type Checked = Result<(bool, String)>;
type Criterion = (&'static str, fn() -> Checked);

fn rat_of(rng: &mut ChaCha8Rng) -> Rational {
    rational(rng.random_range(-9..=9), rng.random_range(1..=7))
}

fn random_element(model: &Model<Rational>, degree: usize, rng: &mut ChaCha8Rng) -> Result<RingElement<Rational>> {
    let coeffs = (0..model.rank(degree)).map(|_| rat_of(rng)).collect();
    RingElement::from_coeffs(model, degree, coeffs)
}

fn c1_delv_gram() -> Checked {
    let s = delv_subring()?;
    let q = gram(&eval_in(s.model(), "theta1*theta2")?)?;
    let expected = [[0, 4, 0], [4, 0, 0], [0, 0, -4]];
    let ring_ok = (0..3).all(|i| (0..3).all(|j| q.matrix.row(i)[j] == rint(expected[i][j])));
    // oracle: integrate the wedge products of the forms directly
    let forms = delv_forms();
    let eta = forms[0].wedge(&forms[1])?;
    let mut form_ok = true;
    for i in 0..3 {
        for j in 0..3 {
            let v = forms[i].wedge(&forms[j])?.wedge(&eta)?.integrate_top(0.0)?;
            form_ok &= v == rint(expected[i][j]);
        }
    }
    Ok((ring_ok && form_ok, format!("gram = {}", matrix_text(&q.matrix))))
}

fn c2_delv_kernel() -> Checked {
    let [t1, t2, _] = delv_forms();
    let eta = t1.wedge(&t2)?;
    let k = delv_kernel_form();
    let wedge_zero = eta.wedge(&k)?.is_zero();
    let m = delv_torus()?;
    let q = gram(&RingElement::named(&m, "eta")?)?;
    let inertia = signature(&q.matrix, 0.0);
    let v = torus_element(&m, &k)?;
    let in_kernel = q.matrix.mul_vec(v.coeffs()).iter().all(Zero::is_zero) && !v.is_zero();
    Ok((
        wedge_zero && q.dim() == 16 && inertia.zero >= 1 && in_kernel,
        format!(
            "eta∧k = 0: {wedge_zero}; dim {}; inertia ({}, {}, {}); k in kernel: {in_kernel}",
            q.dim(),
            inertia.positive,
            inertia.zero,
            inertia.negative
        ),
    ))
}

fn c3_delv_pair() -> Checked {
    let s = delv_subring()?;
    let m = s.model();
    let (eta, h) = (eval_in(m, "theta1*theta2")?, eval_in(m, "theta1+theta2")?);
    let eta_h = &eta * &h;
    let ring_ok = (&eta_h - &h.pow(3)?.scale(&rational(1, 3))).is_zero();
    let [t1, t2, _] = delv_forms();
    let hf = &t1 + &t2;
    let lhs = t1.wedge(&t2)?.wedge(&hf)?;
    let rhs = hf.pow(3)?.scale_real(&rational(1, 3));
    let form_ok = (&lhs - &rhs).is_zero();
    let v = is_hr_pair(&eta_h, &eta, &h, 0.0)?;
    Ok((
        ring_ok && form_ok && v.is_pass(),
        format!("eta*h = h^3/3 (ring {ring_ok}, forms {form_ok}); pair {}", v.outcome),
    ))
}

fn c4_non_hr_limit() -> Checked {
    let m = delv_torus()?;
    let h = RingElement::named(&m, "h")?;
    let eta = RingElement::named(&m, "eta")?;
    let (h2, h3) = (h.pow(2)?, h.pow(3)?);
    let a = is_hr_pair(&h3, &(&eta + &h2.scale(&rational(1, 10))), &h, 0.0)?;
    let b = is_hr_pair(&h3, &eta, &h, 0.0)?;
    Ok((
        m.rank(1) == 16 && a.is_pass() && matches!(b.outcome, Outcome::Degenerate | Outcome::Fail),
        format!("eps=1/10: {} {:?}; eps=0: {} {:?}", a.outcome, a.signature, b.outcome, b.signature),
    ))
}

fn c5_fulger_lehmann() -> Checked {
    let m = fulger_lehmann()?;
    let xi3 = eval_in(&m, "xi^3")?.integrate()?;
    let xi2f = eval_in(&m, "xi^2*f")?.integrate()?;
    let f2_zero = eval_in(&m, "f^2")?.is_zero();
    // oracle: brute-force associativity over all basis triples
    let d = m.dim();
    let mut assoc = true;
    for p in 0..=d {
        for q in 0..=d - p {
            for r in 0..=d - p - q {
                for a in 0..m.rank(p) {
                    for b in 0..m.rank(q) {
                        for c in 0..m.rank(r) {
                            let (x, y, z) = (
                                RingElement::basis(&m, p, a),
                                RingElement::basis(&m, q, b),
                                RingElement::basis(&m, r, c),
                            );
                            assoc &= &(&x * &y) * &z == &x * &(&y * &z);
                        }
                    }
                }
            }
        }
    }
    // oracle: P(O + O + O(-1)) over P^1 built as a projective bundle, f the pulled-back point
    let p1 = free_ring(&[("p", 1)], 1)?;
    let pt = RingElement::named(&p1, "p")?;
    let zero = |k| RingElement::zero(&p1, k);
    let pb = ProjectiveBundle::new(&p1, &ChernVector::new(vec![-&pt, zero(2), zero(3)])?)?;
    let (xi, f) = (pb.xi()?, pb.pullback(&pt)?);
    let bundle_ok = xi.pow(3)?.integrate()? == xi3
        && (&xi.pow(2)? * &f).integrate()? == xi2f
        && f.pow(2)?.is_zero();
    Ok((
        xi3 == rint(-1) && xi2f == rint(1) && f2_zero && assoc && bundle_ok,
        format!("∫xi^3 = {xi3}, ∫xi^2 f = {xi2f}, f^2 = 0: {f2_zero}, associative: {assoc}, bundle oracle: {bundle_ok}"),
    ))
}

fn c6_classical() -> Checked {
    let mut ok = true;
    let mut worst_gap = f64::INFINITY;
    let mut oracle_ok = true;
    for d in 2..=4 {
        let model = torus_ring::<f64>(d)?;
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + d as u64);
        for t in 0..100 {
            let omega = random_kahler(d, &mut rng);
            let eta = torus_element(&model, &omega.pow(d - 2)?)?;
            let q = gram(&eta)?;
            let inertia = signature(&q.matrix, SIGNATURE_TOL);
            let eigs = hrpairs::linalg::symmetric_eigenvalues(&q.matrix);
            let gap = relative_gap(&eigs);
            worst_gap = worst_gap.min(gap);
            ok &= [inertia.positive, inertia.zero, inertia.negative] == [1, 0, d * d - 1] && gap > MIN_GAP;
            if t == 0 {
                // oracle: the Gram matrix straight from wedge products of forms
                let basis: Vec<Form<f64>> = real_basis(d, 1);
                let w = omega.pow(d - 2)?;
                for (i, a) in basis.iter().enumerate() {
                    for (j, b) in basis.iter().enumerate() {
                        let v = a.wedge(b)?.wedge(&w)?.integrate_top(1e-9)?;
                        oracle_ok &= (v - q.matrix.row(i)[j]).abs() <= 1e-9 * q.matrix.max_abs().max(1.0);
                    }
                }
            }
        }
    }
    Ok((ok && oracle_ok, format!("300 forms, worst relative gap {worst_gap:.3e}, form oracle {oracle_ok}")))
}

fn c7_schur_pairs() -> Checked {
    let mut ok = true;
    let mut runs = 0;
    let mut trials = 0;
    let mut worst = f64::INFINITY;
    let mut failures = Vec::new();
    for d in 2..=4usize {
        for e in (d - 1).max(1)..=5 {
            for lambda in Partition::all_of(d - 1) {
                if lambda.len() > e {
                    continue;
                }
                let config = SearchConfig {
                    d,
                    e,
                    partition: lambda.parts().to_vec(),
                    trials: 100,
                    seed: SEED,
                    tolerance: SEARCH_TOL,
                };
                let report = sample_search(&config, Execution::Parallel)?;
                runs += 1;
                trials += config.trials;
                worst = worst.min(report.worst_margin.unwrap_or(f64::INFINITY));
                if !report.all_pass() {
                    ok = false;
                    failures.push(serde_json::to_string(&report.failures).unwrap_or_default());
                }
            }
        }
    }
    for f in &failures {
        println!("  reproduction: {f}");
    }
    Ok((ok, format!("{runs} (d, e, λ) runs, {trials} trials, worst margin {worst:.3e}")))
}

fn c8_hat_trick() -> Checked {
    let mut ok = true;
    let mut count = 0;
    for e in 1..=4usize {
        let gens: Vec<(String, usize)> = (1..=e).map(|k| (format!("c{k}"), k)).collect();
        let refs: Vec<(&str, usize)> = gens.iter().map(|(n, k)| (n.as_str(), *k)).collect();
        let base = free_ring(&refs, 3)?;
        let prod = ProductWithP1::new(&base)?;
        let tau = prod.tau()?;
        let cs: Vec<RingElement<Rational>> =
            gens.iter().map(|(n, _)| prod.pullback(&RingElement::named(&base, n)?)).collect::<Result<_>>()?;
        let c = ChernVector::new(cs.clone())?;
        let hat = twist_chern(&c, &Rational::one(), &tau)?;
        let hat_classes: Vec<_> = (1..=e).map(|k| hat.class(k)).collect();
        for w in 1..=3 {
            for lambda in Partition::all_of(w) {
                let s = schur(&lambda, e);
                let lhs = evaluate(&s, &hat_classes)?;
                let rhs = &evaluate(&s, &cs)? + &(&evaluate(&derived(&s, 1)?, &cs)? * &tau);
                ok &= lhs == rhs;
                count += 1;
            }
        }
    }
    Ok((ok, format!("{count} (e, λ) cases with |λ| ≤ 3, e ≤ 4")))
}

fn c9_segre_pushforward() -> Checked {
    let mut ok = true;
    let mut count = 0;
    for d in 1..=3usize {
        for e in 1..=4usize {
            let mut gens: Vec<(String, usize)> = (1..=e).map(|k| (format!("c{k}"), k)).collect();
            gens.push(("h".into(), 1));
            let refs: Vec<(&str, usize)> = gens.iter().map(|(n, k)| (n.as_str(), *k)).collect();
            let base = free_ring(&refs, d)?;
            let h = RingElement::named(&base, "h")?;
            let c = ChernVector::new((1..=e).map(|k| RingElement::named(&base, &format!("c{k}"))).collect::<Result<_>>()?)?;
            let pb = ProjectiveBundle::new(&base, &c)?;
            let (xi, ph) = (pb.xi()?, pb.pullback(&h)?);
            let n = d + e - 2;
            // both sides have degree ≤ n in t, so n + 1 sample points pin the polynomial
            for t in 0..=n as i64 {
                let t = rational(2 * t - n as i64, 3);
                let xi_t = &xi + &ph.scale(&t);
                let lhs = pb.pushforward(&xi_t.pow(n)?)?;
                let rhs = segre_classes(&twist_chern(&c, &t, &h)?, d - 1)?.swap_remove(d - 1);
                ok &= lhs == rhs;
                count += 1;
            }
        }
    }
    Ok((ok, format!("{count} (d, e, t) evaluations for d ≤ 3, e ≤ 4")))
}

fn c10_extension() -> Checked {
    let s = delv_subring()?;
    let m = s.model();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut ok = true;
    for _ in 0..1000 {
        let sheaf = |rng: &mut ChaCha8Rng| -> Result<SheafClassData<Rational>> {
            let r = rng.random_range(1..=5);
            SheafClassData::new(r, random_element(m, 1, rng)?, random_element(m, 2, rng)?)
        };
        let (f, g) = (sheaf(&mut rng)?, sheaf(&mut rng)?);
        ok &= extension_identity(&f, &g)?.residual.is_zero();
    }
    let ab = free_ring(&[("a", 1), ("b", 1)], 2)?;
    let (a, b) = (eval_in(&ab, "a")?, eval_in(&ab, "b")?);
    let closed = eval_in(&ab, "-(a - b)^2")?;
    let (f, g) = (SheafClassData::line(&a)?, SheafClassData::line(&b)?);
    let e = SheafClassData::extension(&f, &g)?;
    let id = extension_identity(&f, &g)?;
    let half = closed.scale(&rational(1, 2));
    let closed_ok = e.discriminant()? == closed && id.lhs == half && id.rhs == half;
    Ok((ok && closed_ok, format!("1000 random pairs exact, Δ = −(a−b)²: {closed_ok}")))
}

fn curvature_criterion(higgs: bool) -> Checked {
    let mut ok = true;
    let mut worst = f64::INFINITY;
    let mut n = 0;
    for (r, trials) in [(2, 34), (3, 33), (4, 33)] {
        let config = CurvatureConfig {
            d: 3,
            r,
            e: 3,
            trials,
            seed: SEED,
            higgs,
            tolerance: POSITIVITY_TOL,
        };
        let summary = curvature_trials(&config, Execution::Parallel)?;
        for rep in &summary.reports {
            let floor = -POSITIVITY_TOL * rep.scale;
            ok &= rep.min_term >= floor && rep.total >= floor && !rep.projectively_flat;
            worst = worst.min(rep.min_term / rep.scale);
        }
        n += summary.reports.len();
    }
    let mut extra = String::new();
    if !higgs {
        let (_, omega1, omega2) = hrpairs::bogomolov::curvature_instance(
            &CurvatureConfig {
                d: 3,
                r: 2,
                e: 3,
                trials: 1,
                seed: SEED,
                higgs: false,
                tolerance: POSITIVITY_TOL,
            },
            0,
        )?;
        let flat = trace_check(&CurvatureMatrix::zero(2, 3), &omega1, &omega2, POSITIVITY_TOL)?;
        let flagged = flat.projectively_flat && flat.total == 0.0;
        ok &= flagged;
        extra = format!(", F₀ = 0 flagged flat: {flagged}");
    }
    Ok((ok, format!("{n} trials, worst min term / scale {worst:.3e}{extra}")))
}

fn c11_curvature() -> Checked {
    curvature_criterion(false)
}

fn c12_higgs() -> Checked {
    curvature_criterion(true)
}

fn c13_inversion() -> Checked {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let m = free_ring(&[("x", 1), ("y", 1)], 5)?;
    let mut ok = true;
    let mut cases = 0;
    for e in 1..=5 {
        for _ in 0..20 {
            let classes = (1..=e).map(|k| random_element(&m, k, &mut rng)).collect::<Result<Vec<_>>>()?;
            let c = ChernVector::new(classes)?;
            let s = invert_total_class(&c, m.dim())?;
            for k in 0..=m.dim() {
                let mut acc = RingElement::zero(&m, k);
                for i in 0..=k.min(e) {
                    acc = &acc + &(&c.class(i) * &s[k - i]);
                }
                ok &= if k == 0 { acc == RingElement::one(&m) } else { acc.is_zero() };
            }
            cases += 1;
        }
    }
    Ok((ok, format!("{cases} random Chern vectors of rank 1..=5, truncated at degree 5")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("delv Gram matrix", c1_delv_gram),
        ("delv kernel", c2_delv_kernel),
        ("delv HR pair", c3_delv_pair),
        ("non-HR limit boundary", c4_non_hr_limit),
        ("Fulger–Lehmann ring", c5_fulger_lehmann),
        ("classical Hodge–Riemann signatures", c6_classical),
        ("Schur pairs are pointwise HR pairs", c7_schur_pairs),
        ("hat-trick cross-check", c8_hat_trick),
        ("Segre/pushforward cross-validation", c9_segre_pushforward),
        ("extension identity", c10_extension),
        ("Kobayashi–Lübke positivity", c11_curvature),
        ("Higgs variant", c12_higgs),
        ("total-class inversion", c13_inversion),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!pass);
        println!(
            "{} [{:>2}] {name}: {detail} ({:.1}s)",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
