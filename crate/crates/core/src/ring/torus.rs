use super::model::{Model, MultTable, RingElement, RingModel};
use crate::error::{Error, Result};
use crate::exterior::{form_from_real_coordinates, real_basis, real_coordinates, subsets, Form};
use crate::scalar::{Scalar, DEFAULT_TOLERANCE};

fn basis_names(dim: usize, p: usize) -> Vec<String> {
    let sets = subsets(dim, p);
    let fmt = |m: u32| {
        crate::exterior::indices_of(m)
            .iter()
            .map(|i| (i + 1).to_string())
            .collect::<String>()
    };
    if p == 0 {
        return vec!["1".into()];
    }
    let mut out = Vec::new();
    for (a, &i) in sets.iter().enumerate() {
        for &j in &sets[a..] {
            if i == j {
                out.push(format!("u[{}|{}]", fmt(i), fmt(i)));
            } else {
                out.push(format!("re[{}|{}]", fmt(i), fmt(j)));
                out.push(format!("im[{}|{}]", fmt(i), fmt(j)));
            }
        }
    }
    out
}

/// The ring of constant-coefficient real `(p,p)`-forms on `ℂ^d` with
/// `∫ Π (i dz_j ∧ dz̄_j) = 1`, over the basis of [`real_basis`]. The label
/// `omega` is the standard Kähler form.
pub fn torus_ring<F: Scalar>(dim: usize) -> Result<Model<F>> {
    if dim == 0 {
        return Err(Error::Construction("torus ring needs d >= 1".into()));
    }
    let bases: Vec<Vec<Form<F>>> = (0..=dim).map(|p| real_basis(dim, p)).collect();
    let mut table: MultTable<F> = Vec::with_capacity(dim + 1);
    for p in 0..=dim {
        let mut row = Vec::with_capacity(dim + 1 - p);
        for q in 0..=dim - p {
            let block: Vec<Vec<_>> = bases[p]
                .iter()
                .map(|a| {
                    bases[q]
                        .iter()
                        .map(|b| {
                            let prod = a.wedge(b).expect("same dimension");
                            real_coordinates(&prod)
                                .expect("(p,p) form")
                                .into_iter()
                                .enumerate()
                                .filter(|(_, c)| !c.is_zero())
                                .collect()
                        })
                        .collect()
                })
                .collect();
            row.push(block);
        }
        table.push(row);
    }
    let integral = vec![Form::<F>::volume(dim).integrate_top(0.0)?];
    let names = (0..=dim).map(|p| basis_names(dim, p)).collect();
    let model = RingModel::from_parts(dim, names, table, integral)?;
    let omega = torus_element(&model, &Form::kahler_std(dim))?;
    RingModel::with_labels(model, [("omega".to_string(), omega)])
}

/// A real `(p,p)`-form as an element of [`torus_ring`].
pub fn torus_element<F: Scalar>(model: &Model<F>, form: &Form<F>) -> Result<RingElement<F>> {
    torus_element_with_tolerance(model, form, DEFAULT_TOLERANCE)
}

pub fn torus_element_with_tolerance<F: Scalar>(model: &Model<F>, form: &Form<F>, tol: f64) -> Result<RingElement<F>> {
    if form.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            left: model.dim(),
            right: form.dim(),
        });
    }
    if !form.is_real(tol) {
        return Err(Error::NotReal(format!("{:?}-form", form.bidegree())));
    }
    let coords = real_coordinates(form)?;
    RingElement::from_coeffs(model, form.bidegree().0, coords)
}

/// Inverse of [`torus_element`].
pub fn torus_form<F: Scalar>(el: &RingElement<F>) -> Result<Form<F>> {
    let d = el.model().dim();
    if el.degree() > d {
        return Ok(Form::zero(d, el.degree(), el.degree()));
    }
    form_from_real_coordinates(d, el.degree(), el.coeffs())
}
