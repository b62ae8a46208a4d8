use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::expr::{eval_in, monomial_text, parse_expr, parse_monomial};
use super::model::{Model, MultTable, RingElement, RingModel};
use crate::error::{Error, Result};
use crate::linalg::{solve_unique, Matrix};
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: usize,
}

/// `monomial = rewrite` (a map from monomials to coefficients; empty means
/// zero) or, for top-degree monomials, `∫ monomial = value`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationSpec {
    pub monomial: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rewrite: Option<BTreeMap<String, Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralSpec {
    pub monomial: String,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntegrationSpec {
    One(IntegralSpec),
    Many(Vec<IntegralSpec>),
}

impl IntegrationSpec {
    pub fn entries(&self) -> Vec<&IntegralSpec> {
        match self {
            IntegrationSpec::One(e) => vec![e],
            IntegrationSpec::Many(v) => v.iter().collect(),
        }
    }
}

/// Ring presented by generators, rewrite relations and an integration
/// normalization; the JSON layout of ring-spec files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingSpec {
    pub dimension: usize,
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub relations: Vec<RelationSpec>,
    pub integration: IntegrationSpec,
    #[serde(default)]
    pub labels: BTreeMap<String, String>,
}

impl RingSpec {
    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse {
            position: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("specs serialize")
    }
}

type Mono = Vec<u32>;
type Poly = BTreeMap<Mono, Rational>;

fn weight(m: &Mono, degrees: &[usize]) -> usize {
    m.iter().zip(degrees).map(|(e, d)| *e as usize * d).sum()
}

fn divides(a: &Mono, b: &Mono) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// All exponent vectors of weighted degree `k`, in descending lexicographic order.
pub(crate) fn monomials_of_degree(degrees: &[usize], k: usize) -> Vec<Mono> {
    fn go(degrees: &[usize], idx: usize, left: usize, cur: &mut Mono, out: &mut Vec<Mono>) {
        if idx == degrees.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let d = degrees[idx];
        let max = left.checked_div(d).unwrap_or(0);
        for e in (0..=max).rev() {
            cur.push(e as u32);
            go(degrees, idx + 1, left - e * d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(degrees, 0, k, &mut Vec::new(), &mut out);
    out
}

fn poly_text(p: &Poly, names: &[String]) -> String {
    if p.is_empty() {
        return "0".into();
    }
    p.iter()
        .map(|(m, c)| format!("{c}*{}", monomial_text(m, names)))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn value_of(v: &Value) -> Result<Rational> {
    Rational::from_json(v)
}

struct Reducer<'a> {
    dim: usize,
    degrees: &'a [usize],
    names: &'a [String],
    rules: Vec<(Mono, Poly)>,
    memo: HashMap<Mono, Poly>,
    active: BTreeSet<Mono>,
}

impl Reducer<'_> {
    fn nf(&mut self, m: &Mono) -> Result<Poly> {
        if weight(m, self.degrees) > self.dim {
            return Ok(Poly::new());
        }
        if let Some(p) = self.memo.get(m) {
            return Ok(p.clone());
        }
        if !self.active.insert(m.clone()) {
            return Err(Error::Construction(format!(
                "rewriting cycles through `{}`",
                monomial_text(m, self.names)
            )));
        }
        let applicable: Vec<(Mono, Poly)> = self
            .rules
            .iter()
            .filter(|(lhs, _)| divides(lhs, m))
            .cloned()
            .collect();
        let mut result: Option<Poly> = None;
        if applicable.is_empty() {
            result = Some(Poly::from([(m.clone(), Rational::from_integer(1.into()))]));
        }
        for (lhs, rhs) in applicable {
            let cofactor: Mono = m.iter().zip(&lhs).map(|(a, b)| a - b).collect();
            let mut acc = Poly::new();
            for (t, c) in &rhs {
                let prod: Mono = t.iter().zip(&cofactor).map(|(a, b)| a + b).collect();
                for (u, x) in self.nf(&prod)? {
                    let entry = acc.entry(u).or_insert_with(|| Rational::from_integer(0.into()));
                    *entry += c * x;
                }
            }
            acc.retain(|_, c| *c != Rational::from_integer(0.into()));
            match &result {
                None => result = Some(acc),
                Some(prev) if *prev != acc => {
                    return Err(Error::InconsistentRelations {
                        monomial: monomial_text(m, self.names),
                        first: poly_text(prev, self.names),
                        second: poly_text(&acc, self.names),
                    })
                }
                Some(_) => {}
            }
        }
        self.active.remove(m);
        let p = result.expect("at least one branch");
        self.memo.insert(m.clone(), p.clone());
        Ok(p)
    }
}

/// Builds the ring presented by `spec`. Every monomial of degree at most `d`
/// is reduced along every applicable relation; disagreement is reported as
/// inconsistent relations. The basis of each degree is the set of irreducible
/// monomials.
pub fn relation_ring(spec: &RingSpec) -> Result<Model<Rational>> {
    let d = spec.dimension;
    let names: Vec<String> = spec.generators.iter().map(|g| g.name.clone()).collect();
    let degrees: Vec<usize> = spec.generators.iter().map(|g| g.degree).collect();
    if let Some(g) = spec.generators.iter().find(|g| g.degree == 0) {
        return Err(Error::Construction(format!("generator `{}` has degree 0", g.name)));
    }
    let unique: BTreeSet<&String> = names.iter().collect();
    if unique.len() != names.len() {
        return Err(Error::Construction("duplicate generator names".into()));
    }
    let integration: Vec<(Mono, Rational)> = spec
        .integration
        .entries()
        .into_iter()
        .map(|e| Ok((parse_monomial(&e.monomial, &names)?, value_of(&e.value)?)))
        .collect::<Result<_>>()?;
    for (m, _) in &integration {
        if weight(m, &degrees) != d {
            return Err(Error::Construction(format!(
                "integration monomial `{}` is not of top degree",
                monomial_text(m, &names)
            )));
        }
    }
    let mut rules = Vec::new();
    let mut extra_integrals = Vec::new();
    for r in &spec.relations {
        let lhs = parse_monomial(&r.monomial, &names)?;
        let deg = weight(&lhs, &degrees);
        match (&r.rewrite, &r.value) {
            (Some(map), None) => {
                let mut rhs = Poly::new();
                for (mono, c) in map {
                    let t = parse_monomial(mono, &names)?;
                    if weight(&t, &degrees) != deg {
                        return Err(Error::Construction(format!(
                            "relation for `{}` is not homogeneous",
                            r.monomial
                        )));
                    }
                    *rhs.entry(t).or_insert_with(|| Rational::from_integer(0.into())) += value_of(c)?;
                }
                rhs.retain(|_, c| *c != Rational::from_integer(0.into()));
                rules.push((lhs, rhs));
            }
            (None, Some(v)) => {
                if deg != d {
                    return Err(Error::Construction(format!(
                        "value relation `{}` must be of top degree {d}",
                        r.monomial
                    )));
                }
                let v = value_of(v)?;
                let Some((reference, ref_value)) = integration.first() else {
                    return Err(Error::Construction("value relations need an integration entry".into()));
                };
                if lhs == *reference {
                    extra_integrals.push((lhs, v));
                    continue;
                }
                if *ref_value == Rational::from_integer(0.into()) {
                    return Err(Error::Construction("integration reference has value 0".into()));
                }
                rules.push((lhs, Poly::from([(reference.clone(), v / ref_value)])));
            }
            _ => {
                return Err(Error::Construction(format!(
                    "relation for `{}` needs exactly one of `rewrite` or `value`",
                    r.monomial
                )))
            }
        }
    }
    let mut red = Reducer {
        dim: d,
        degrees: &degrees,
        names: &names,
        rules,
        memo: HashMap::new(),
        active: BTreeSet::new(),
    };
    let mut bases: Vec<Vec<Mono>> = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let mut basis = Vec::new();
        for m in monomials_of_degree(&degrees, k) {
            let p = red.nf(&m)?;
            if p.len() == 1 && p.contains_key(&m) {
                basis.push(m);
            }
        }
        bases.push(basis);
    }
    let index: Vec<HashMap<Mono, usize>> = bases
        .iter()
        .map(|b| b.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect())
        .collect();
    let mut table: MultTable<Rational> = Vec::with_capacity(d + 1);
    for p in 0..=d {
        let mut row = Vec::new();
        for q in 0..=d - p {
            let mut block = Vec::new();
            for a in &bases[p] {
                let mut r = Vec::new();
                for b in &bases[q] {
                    let prod: Mono = a.iter().zip(b).map(|(x, y)| x + y).collect();
                    let nf = red.nf(&prod)?;
                    r.push(nf.into_iter().map(|(m, c)| (index[p + q][&m], c)).collect());
                }
                block.push(r);
            }
            row.push(block);
        }
        table.push(row);
    }
    let top = &bases[d];
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (m, v) in integration.iter().chain(&extra_integrals) {
        let nf = red.nf(m)?;
        let mut row = vec![Rational::from_integer(0.into()); top.len()];
        for (u, c) in nf {
            row[index[d][&u]] = c;
        }
        rows.push(row);
        rhs.push(v.clone());
    }
    if rows.is_empty() && !top.is_empty() {
        return Err(Error::Construction("no integration entry for a nonzero top degree".into()));
    }
    let integral = if top.is_empty() {
        if rhs.iter().any(|v| *v != Rational::from_integer(0.into())) {
            return Err(Error::Construction("nonzero integral of a vanishing top degree".into()));
        }
        Vec::new()
    } else {
        solve_unique(&Matrix::from_rows(rows), &rhs, 0.0).map_err(|e| match e {
            Error::Singular { .. } => Error::Construction("integration entries do not determine ∫ on the top degree".into()),
            _ => Error::Construction("integration entries are inconsistent with the relations".into()),
        })?
    };
    let basis_names: Vec<Vec<String>> = bases
        .iter()
        .map(|b| b.iter().map(|m| monomial_text(m, &names)).collect())
        .collect();
    let model = RingModel::from_parts(d, basis_names.clone(), table, integral)?;

    let mut labels = Vec::new();
    for (i, g) in names.iter().enumerate() {
        let mut m = vec![0u32; names.len()];
        m[i] = 1;
        if basis_names.get(degrees[i]).is_some_and(|b| b.contains(g)) {
            continue;
        }
        let deg = degrees[i];
        let mut el = RingElement::zero(&model, deg);
        if deg <= d {
            let coeffs: Vec<Rational> = {
                let nf = red.nf(&m)?;
                let mut v = vec![Rational::from_integer(0.into()); bases[deg].len()];
                for (u, c) in nf {
                    v[index[deg][&u]] = c;
                }
                v
            };
            el = RingElement::from_coeffs(&model, deg, coeffs)?;
        }
        labels.push((g.clone(), el));
    }
    let model = RingModel::with_labels(model, labels)?;
    let mut defined = Vec::new();
    for (name, src) in &spec.labels {
        parse_expr(src)?;
        defined.push((name.clone(), eval_in(&model, src)?));
    }
    RingModel::with_labels(model, defined)
}

/// Polynomial ring on the given generators truncated above degree `dim`, with
/// every top-degree monomial integrating to 1.
pub fn free_ring(generators: &[(&str, usize)], dim: usize) -> Result<Model<Rational>> {
    let degrees: Vec<usize> = generators.iter().map(|g| g.1).collect();
    let names: Vec<String> = generators.iter().map(|g| g.0.to_string()).collect();
    let entries = monomials_of_degree(&degrees, dim)
        .into_iter()
        .map(|m| IntegralSpec {
            monomial: monomial_text(&m, &names),
            value: Value::from(1),
        })
        .collect();
    relation_ring(&RingSpec {
        dimension: dim,
        generators: generators
            .iter()
            .map(|(n, d)| GeneratorSpec {
                name: n.to_string(),
                degree: *d,
            })
            .collect(),
        relations: Vec::new(),
        integration: IntegrationSpec::Many(entries),
        labels: BTreeMap::new(),
    })
}
