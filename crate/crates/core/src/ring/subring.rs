use std::collections::{BTreeMap, HashMap};

use serde_json::Value;

use super::expr::monomial_text;
use super::model::{Model, MultTable, RingElement, RingModel};
use super::relations::{monomials_of_degree, GeneratorSpec, IntegralSpec, IntegrationSpec, RelationSpec, RingSpec};
use crate::error::{Error, Result};
use crate::linalg::EchelonBasis;
use crate::scalar::Scalar;

type Mono = Vec<u32>;

/// Subring generated by named elements of a parent model, with the maps
/// between the two.
#[derive(Debug, Clone)]
pub struct Subring<F> {
    model: Model<F>,
    parent: Model<F>,
    generators: Vec<GeneratorSpec>,
    standard: Vec<Vec<Mono>>,
    embedding: Vec<Vec<Vec<F>>>,
    echelon: Vec<EchelonBasis<F>>,
    /// Coordinates of every nonstandard monomial over the standard ones.
    rewrites: Vec<(Mono, Vec<F>)>,
}

/// Standard monomials are chosen greedily in increasing lexicographic order
/// with the last generator most significant, so they form an order ideal and
/// the exported relations rewrite every other monomial to smaller ones.
fn ascending(mut ms: Vec<Mono>) -> Vec<Mono> {
    ms.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    ms
}

pub fn subring<F: Scalar>(parent: &Model<F>, gens: &[(&str, RingElement<F>)]) -> Result<Subring<F>> {
    subring_with_tolerance(parent, gens, crate::scalar::DEFAULT_TOLERANCE)
}

pub fn subring_with_tolerance<F: Scalar>(
    parent: &Model<F>,
    gens: &[(&str, RingElement<F>)],
    tol: f64,
) -> Result<Subring<F>> {
    let d = parent.dim();
    for (name, g) in gens {
        if !std::sync::Arc::ptr_eq(g.model(), parent) {
            return Err(Error::ModelMismatch);
        }
        if g.degree() == 0 || g.degree() > d {
            return Err(Error::Construction(format!(
                "generator `{name}` has degree {}, expected 1..={d}",
                g.degree()
            )));
        }
    }
    let names: Vec<String> = gens.iter().map(|(n, _)| n.to_string()).collect();
    let degrees: Vec<usize> = gens.iter().map(|(_, g)| g.degree()).collect();

    let mut values: HashMap<Mono, RingElement<F>> = HashMap::new();
    let mut standard = Vec::new();
    let mut embedding = Vec::new();
    let mut echelon = Vec::new();
    let mut rewrites = Vec::new();
    for k in 0..=d {
        let mut ech = EchelonBasis::with_tolerance(parent.rank(k), tol);
        let mut std_k = Vec::new();
        let mut emb_k = Vec::new();
        let mut nonstd = Vec::new();
        for m in ascending(monomials_of_degree(&degrees, k)) {
            let v = if k == 0 {
                RingElement::one(parent)
            } else {
                let g = m.iter().position(|e| *e > 0).expect("positive degree monomial");
                let mut prev = m.clone();
                prev[g] -= 1;
                values[&prev].try_mul(&gens[g].1)?
            };
            if ech.insert(v.coeffs()) {
                std_k.push(m.clone());
                emb_k.push(v.coeffs().to_vec());
            } else {
                nonstd.push(m.clone());
            }
            values.insert(m, v);
        }
        for m in nonstd {
            let c = ech.coordinates(values[&m].coeffs()).expect("dependent monomial lies in the span");
            rewrites.push((m, c));
        }
        standard.push(std_k);
        embedding.push(emb_k);
        echelon.push(ech);
    }

    let index: Vec<HashMap<Mono, usize>> = standard
        .iter()
        .map(|s| s.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect())
        .collect();
    let mut table: MultTable<F> = Vec::with_capacity(d + 1);
    for p in 0..=d {
        let mut row = Vec::new();
        for q in 0..=d - p {
            let mut block = Vec::new();
            for a in &standard[p] {
                let mut r = Vec::new();
                for b in &standard[q] {
                    let prod: Mono = a.iter().zip(b).map(|(x, y)| x + y).collect();
                    let coords = match index[p + q].get(&prod) {
                        Some(&i) => vec![(i, F::one())],
                        None => echelon[p + q]
                            .coordinates(values[&prod].coeffs())
                            .expect("products of generators stay in the subring")
                            .into_iter()
                            .enumerate()
                            .filter(|(_, c)| !c.is_zero())
                            .collect(),
                    };
                    r.push(coords);
                }
                block.push(r);
            }
            row.push(block);
        }
        table.push(row);
    }
    let integral: Vec<F> = standard[d]
        .iter()
        .map(|m| values[m].integrate())
        .collect::<Result<_>>()?;
    let basis_names = standard
        .iter()
        .map(|s| s.iter().map(|m| monomial_text(m, &names)).collect())
        .collect();
    let model = RingModel::from_parts_with_tolerance(d, basis_names, table, integral, tol)?;
    let mut labels = Vec::new();
    for (i, (name, g)) in gens.iter().enumerate() {
        let mut m = vec![0u32; gens.len()];
        m[i] = 1;
        if index[degrees[i]].contains_key(&m) {
            continue;
        }
        let c = echelon[g.degree()].coordinates(g.coeffs()).expect("generator lies in its subring");
        labels.push((name.to_string(), RingElement::from_coeffs(&model, g.degree(), c)?));
    }
    let model = RingModel::with_labels(model, labels)?;
    Ok(Subring {
        model,
        parent: parent.clone(),
        generators: names
            .into_iter()
            .zip(degrees)
            .map(|(name, degree)| GeneratorSpec { name, degree })
            .collect(),
        standard,
        embedding,
        echelon,
        rewrites,
    })
}

impl<F: Scalar> Subring<F> {
    pub fn model(&self) -> &Model<F> {
        &self.model
    }

    pub fn parent(&self) -> &Model<F> {
        &self.parent
    }

    /// Image of a subring element in the parent.
    pub fn embed(&self, el: &RingElement<F>) -> Result<RingElement<F>> {
        if !std::sync::Arc::ptr_eq(el.model(), &self.model) {
            return Err(Error::ModelMismatch);
        }
        let k = el.degree();
        let mut out = RingElement::zero(&self.parent, k);
        if k > self.model.dim() {
            return Ok(out);
        }
        for (c, row) in el.coeffs().iter().zip(&self.embedding[k]) {
            let b = RingElement::from_coeffs(&self.parent, k, row.clone())?;
            out = &out + &b.scale(c);
        }
        Ok(out)
    }

    /// Preimage of a parent element lying in the subring.
    pub fn restrict(&self, el: &RingElement<F>) -> Result<RingElement<F>> {
        if !std::sync::Arc::ptr_eq(el.model(), &self.parent) {
            return Err(Error::ModelMismatch);
        }
        let k = el.degree();
        if k > self.model.dim() {
            return Ok(RingElement::zero(&self.model, k));
        }
        let c = self.echelon[k]
            .coordinates(el.coeffs())
            .ok_or_else(|| Error::Precondition("element is not in the subring".into()))?;
        RingElement::from_coeffs(&self.model, k, c)
    }

    /// Presentation by generators and relations that rebuilds this subring
    /// with [`super::relation_ring`]; only minimal nonstandard monomials get
    /// a relation.
    pub fn to_spec(&self) -> RingSpec {
        let names: Vec<String> = self.generators.iter().map(|g| g.name.clone()).collect();
        let nonstandard: std::collections::HashSet<&Mono> = self.rewrites.iter().map(|(m, _)| m).collect();
        let minimal = |m: &Mono| {
            (0..m.len()).filter(|&g| m[g] > 0).all(|g| {
                let mut prev = m.clone();
                prev[g] -= 1;
                !nonstandard.contains(&prev)
            })
        };
        let weight = |m: &Mono| -> usize { m.iter().zip(&self.generators).map(|(e, g)| *e as usize * g.degree).sum() };
        let relations = self
            .rewrites
            .iter()
            .filter(|(m, _)| minimal(m))
            .map(|(m, c)| {
                let k = weight(m);
                let rewrite: BTreeMap<String, Value> = self.standard[k]
                    .iter()
                    .zip(c)
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(s, x)| (monomial_text(s, &names), x.to_json()))
                    .collect();
                RelationSpec {
                    monomial: monomial_text(m, &names),
                    rewrite: Some(rewrite),
                    value: None,
                }
            })
            .collect();
        let d = self.model.dim();
        let integration = IntegrationSpec::Many(
            self.standard[d]
                .iter()
                .zip(self.model.integral_vector())
                .map(|(m, v)| IntegralSpec {
                    monomial: monomial_text(m, &names),
                    value: v.to_json(),
                })
                .collect(),
        );
        RingSpec {
            dimension: d,
            generators: self.generators.clone(),
            relations,
            integration,
            labels: BTreeMap::new(),
        }
    }
}
