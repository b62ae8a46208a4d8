use std::path::PathBuf;

use hrpairs::demo::{delv_forms, delv_subring, fulger_lehmann};
use hrpairs::exterior::Form;
use hrpairs::hrcheck::{gram, is_hr_pair};
use hrpairs::ring::{eval_in, relation_ring, RingElement, RingSpec};
use hrpairs::scalar::Rational;

fn load(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn delv_fixture_matches_the_subring() {
    let m = relation_ring(&RingSpec::from_json_str(&load("delv.json")).unwrap()).unwrap();
    let s = delv_subring().unwrap();
    let eta = RingElement::named(&m, "eta").unwrap();
    assert_eq!(gram(&eta).unwrap().matrix, gram(&eval_in(s.model(), "theta1*theta2").unwrap()).unwrap().matrix);
    let h = RingElement::named(&m, "h").unwrap();
    assert!(is_hr_pair(&(&eta * &h), &eta, &h, 0.0).unwrap().is_pass());
    for k in 0..=4 {
        assert_eq!(m.rank(k), s.model().rank(k));
    }
}

#[test]
fn form_fixture_matches_the_demo_forms() {
    let v: serde_json::Value = serde_json::from_str(&load("delv-forms.json")).unwrap();
    let [t1, t2, lam] = delv_forms();
    for (key, f) in [("theta1", t1), ("theta2", t2), ("lambda", lam)] {
        assert_eq!(Form::<Rational>::from_json(&v[key], Some(4)).unwrap(), f, "{key}");
    }
}

#[test]
fn fulger_lehmann_fixture_matches() {
    let m = relation_ring(&RingSpec::from_json_str(&load("fulger-lehmann.json")).unwrap()).unwrap();
    let n = fulger_lehmann().unwrap();
    for src in ["xi^3", "xi^2*f", "xi*f^2", "f^3"] {
        assert_eq!(eval_in(&m, src).unwrap().integrate().unwrap(), eval_in(&n, src).unwrap().integrate().unwrap());
    }
}
