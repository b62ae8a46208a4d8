//! The worked examples: the abelian fourfold with its Lorentzian `N¹`, the
//! Fulger–Lehmann ring, and the non-HR limit of HR pairs.

use crate::error::Result;
use crate::exterior::Form;
use crate::hrcheck::{gram, is_hr_pair};
use crate::linalg::Matrix;
use crate::ring::{eval_in, relation_ring, subring, torus_element, torus_ring, Model, RingElement, RingSpec, Subring};
use crate::scalar::{rational, rint, Rational, Scalar};
use crate::verdict::Outcome;

/// `θ₁ = i dz₁dz̄₁ + i dz₂dz̄₂`, `θ₂ = i dz₃dz̄₃ + i dz₄dz̄₄` and the real
/// representative `λ = i(dz₁dz̄₃ + dz₃dz̄₁ + dz₂dz̄₄ + dz₄dz̄₂)` on `ℂ⁴`.
pub fn delv_forms() -> [Form<Rational>; 3] {
    let t1 = &Form::i_dz_dzbar(4, 0, 0) + &Form::i_dz_dzbar(4, 1, 1);
    let t2 = &Form::i_dz_dzbar(4, 2, 2) + &Form::i_dz_dzbar(4, 3, 3);
    let lam = [(0, 2), (2, 0), (1, 3), (3, 1)]
        .iter()
        .fold(Form::zero(4, 1, 1), |acc, &(a, b)| &acc + &Form::i_dz_dzbar(4, a, b));
    [t1, t2, lam]
}

/// `i dz₁dz̄₂ + i dz₂dz̄₁`, killed by `θ₁θ₂`.
pub fn delv_kernel_form() -> Form<Rational> {
    &Form::i_dz_dzbar(4, 0, 1) + &Form::i_dz_dzbar(4, 1, 0)
}

/// The torus ring of `ℂ⁴` with labels `theta1`, `theta2`, `lambda`, `eta`
/// and `h` attached.
pub fn delv_torus() -> Result<Model<Rational>> {
    let model = torus_ring::<Rational>(4)?;
    let [t1, t2, lam] = delv_forms();
    let (t1, t2, lam) = (
        torus_element(&model, &t1)?,
        torus_element(&model, &t2)?,
        torus_element(&model, &lam)?,
    );
    let eta = &t1 * &t2;
    let h = &t1 + &t2;
    crate::ring::RingModel::with_labels(
        model,
        [
            ("theta1".to_string(), t1),
            ("theta2".to_string(), t2),
            ("lambda".to_string(), lam),
            ("eta".to_string(), eta),
            ("h".to_string(), h),
        ],
    )
}

/// The subring generated by `θ₁, θ₂, λ`, a model of `N^•(A × A)`.
pub fn delv_subring() -> Result<Subring<Rational>> {
    let torus = delv_torus()?;
    let g = |n: &str| RingElement::named(&torus, n);
    subring(&torus, &[("theta1", g("theta1")?), ("theta2", g("theta2")?), ("lambda", g("lambda")?)])
}

pub const FULGER_LEHMANN_SPEC: &str = r#"{
  "dimension": 3,
  "generators": [
    {"name": "xi", "degree": 1},
    {"name": "f", "degree": 1}
  ],
  "relations": [
    {"monomial": "f^2", "rewrite": {}},
    {"monomial": "xi^3", "value": -1}
  ],
  "integration": {"monomial": "xi^2*f", "value": 1}
}"#;

pub fn fulger_lehmann() -> Result<Model<Rational>> {
    relation_ring(&RingSpec::from_json_str(FULGER_LEHMANN_SPEC)?)
}

/// A named reproduction with its printable lines.
#[derive(Debug, Clone)]
pub struct DemoReport {
    pub name: &'static str,
    pub lines: Vec<String>,
    pub pass: bool,
}

pub fn matrix_text<F: Scalar>(m: &Matrix<F>) -> String {
    let rows: Vec<String> = m
        .to_rows()
        .iter()
        .map(|r| format!("[{}]", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", rows.join(","))
}

pub fn demo_delv() -> Result<DemoReport> {
    let s = delv_subring()?;
    let m = s.model();
    let eta = eval_in(m, "theta1*theta2")?;
    let h = eval_in(m, "theta1+theta2")?;
    let q = gram(&eta)?;
    let expected = Matrix::from_rows(vec![
        vec![rint(0), rint(4), rint(0)],
        vec![rint(4), rint(0), rint(0)],
        vec![rint(0), rint(0), rint(-4)],
    ]);
    let eta_h = &eta * &h;
    let third = h.pow(3)?.scale(&rational(1, 3));
    let v = is_hr_pair(&eta_h, &eta, &h, 0.0)?;
    let ok_gram = q.matrix == expected;
    let ok_eta_h = (&eta_h - &third).is_zero();
    let mut lines = vec![
        format!("gram(theta1*theta2) on (theta1, theta2, lambda) = {}", matrix_text(&q.matrix)),
        format!("eta*h == h^3/3: {ok_eta_h}"),
        format!("hr-pair(eta*h, eta; h = theta1 + theta2): {}", v.outcome),
    ];
    let pass = ok_gram && ok_eta_h && v.is_pass();
    lines.push(if pass { "PASS".into() } else { "FAIL".into() });
    Ok(DemoReport {
        name: "delv",
        lines,
        pass,
    })
}

pub fn demo_fulger_lehmann() -> Result<DemoReport> {
    let m = fulger_lehmann()?;
    let mut lines = Vec::new();
    let mut pass = true;
    for (src, want) in [("xi^3", -1), ("xi^2*f", 1), ("xi*f^2", 0), ("f^3", 0)] {
        let got = eval_in(&m, src)?.integrate()?;
        pass &= got == rint(want);
        lines.push(format!("∫ {src} = {got}"));
    }
    let f2 = eval_in(&m, "f^2")?;
    pass &= f2.is_zero();
    lines.push(format!("f^2 = {f2}"));
    lines.push(if pass { "PASS".into() } else { "FAIL".into() });
    Ok(DemoReport {
        name: "fulger-lehmann",
        lines,
        pass,
    })
}

/// `(h³, η + εh²)` on all real `(1,1)`-forms: a pair for `ε = 1/10`, not for
/// `ε = 0`.
pub fn demo_non_hr_limit() -> Result<DemoReport> {
    let m = delv_torus()?;
    let h = RingElement::named(&m, "h")?;
    let eta = RingElement::named(&m, "eta")?;
    let h2 = h.pow(2)?;
    let h3 = h.pow(3)?;
    let mut lines = Vec::new();
    let mut pass = true;
    for (eps, want_pass) in [(rational(1, 10), true), (rint(0), false)] {
        let v = is_hr_pair(&h3, &(&eta + &h2.scale(&eps)), &h, 0.0)?;
        let [p, z, n] = v.signature;
        lines.push(format!("eps = {eps}: signature ({p}, {z}, {n}), {}", v.outcome));
        pass &= v.is_pass() == want_pass;
        if !want_pass {
            pass &= matches!(v.outcome, Outcome::Degenerate | Outcome::Fail);
        }
    }
    lines.push(if pass { "PASS".into() } else { "FAIL".into() });
    Ok(DemoReport {
        name: "non-hr-limit",
        lines,
        pass,
    })
}
