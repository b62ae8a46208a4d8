use super::model::{Model, MultTable, RingElement, RingModel};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::symfunc::ChernVector;

/// `(j, offset)` for each block `x·ξ^j` of a given total degree.
type Blocks = Vec<(usize, usize)>;

fn layout<F: Scalar>(base: &Model<F>, k: usize, powers: usize) -> Blocks {
    let mut offset = 0;
    let mut out = Vec::new();
    for j in 0..powers {
        if j <= k && k - j <= base.dim() {
            out.push((j, offset));
            offset += base.rank(k - j);
        }
    }
    out
}

fn block_names<F: Scalar>(base: &Model<F>, k: usize, blocks: &Blocks, var: &str) -> Vec<String> {
    let mut names = Vec::new();
    for (j, _) in blocks {
        for b in base.basis_names(k - j) {
            let power = match j {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{j}"),
            };
            names.push(match (b.as_str(), power.is_empty()) {
                (_, true) => b.clone(),
                ("1", false) => power,
                (_, false) => format!("{b}*{power}"),
            });
        }
    }
    names
}

fn split_blocks<F: Scalar>(base: &Model<F>, el: &RingElement<F>, blocks: &Blocks) -> Vec<(usize, RingElement<F>)> {
    blocks
        .iter()
        .map(|&(j, off)| {
            let deg = el.degree() - j;
            let n = base.rank(deg);
            let coeffs = el.coeffs()[off..off + n].to_vec();
            (j, RingElement::from_coeffs(base, deg, coeffs).expect("block sizes match"))
        })
        .collect()
}

/// Projective bundle `P(A) → X` of a rank-`e` class: `H(X)[ξ]` modulo the
/// Grothendieck relation `ξ^e = Σ_{i=1}^{e} (-1)^{i-1} c_i ξ^{e-i}`, with
/// `π_*` extracting the `ξ^{e-1}` component. Under this convention
/// `π_*(ξ^{e-1+k})` is the complete homogeneous polynomial `h_k` in the Chern
/// roots, so `π_*(ξ^e) = c_1`.
#[derive(Debug, Clone)]
pub struct ProjectiveBundle<F> {
    base: Model<F>,
    model: Model<F>,
    rank: usize,
    c1: RingElement<F>,
    blocks: Vec<Blocks>,
}

impl<F: Scalar> ProjectiveBundle<F> {
    pub fn new(base: &Model<F>, chern: &ChernVector<RingElement<F>>) -> Result<Self> {
        let e = chern.rank();
        for c in chern.classes() {
            if !std::sync::Arc::ptr_eq(c.model(), base) {
                return Err(Error::ModelMismatch);
            }
        }
        let d = base.dim();
        let total = d + e - 1;
        // reduce[m][l]: coefficient of ξ^l in ξ^m, for m < 2e - 1
        let mut reduce: Vec<Vec<RingElement<F>>> = Vec::new();
        for m in 0..(2 * e).max(2) {
            let row = if m < e {
                (0..e)
                    .map(|l| {
                        if l == m {
                            RingElement::one(base)
                        } else {
                            RingElement::zero(base, m.saturating_sub(l))
                        }
                    })
                    .collect()
            } else {
                let prev: &Vec<RingElement<F>> = &reduce[m - 1];
                let top = &prev[e - 1];
                (0..e)
                    .map(|l| {
                        let mut v = if l == 0 {
                            RingElement::zero(base, m)
                        } else {
                            prev[l - 1].clone()
                        };
                        let i = e - l;
                        let term = top.try_mul(&chern.class(i))?;
                        let term = if i % 2 == 1 { term } else { -&term };
                        v = v.try_add(&term)?;
                        Ok(v)
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            reduce.push(row);
        }
        let blocks: Vec<Blocks> = (0..=total).map(|k| layout(base, k, e)).collect();
        let bases: Vec<Vec<String>> = (0..=total).map(|k| block_names(base, k, &blocks[k], "xi")).collect();
        let mut table: MultTable<F> = Vec::with_capacity(total + 1);
        for p in 0..=total {
            let mut row = Vec::new();
            for q in 0..=total - p {
                let mut block = Vec::new();
                for &(i, oi) in &blocks[p] {
                    for a in 0..base.rank(p - i) {
                        let mut r = vec![Vec::new(); bases[q].len()];
                        for &(j, oj) in &blocks[q] {
                            for b in 0..base.rank(q - j) {
                                let xy = RingElement::basis(base, p - i, a).try_mul(&RingElement::basis(base, q - j, b))?;
                                let mut dense = vec![F::zero(); bases[p + q].len()];
                                for &(l, ol) in &blocks[p + q] {
                                    let part = xy.try_mul(&reduce[i + j][l])?;
                                    if part.degree() != p + q - l {
                                        continue;
                                    }
                                    for (t, c) in part.coeffs().iter().enumerate() {
                                        dense[ol + t] = dense[ol + t].clone() + c.clone();
                                    }
                                }
                                r[oj + b] = dense.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
                            }
                        }
                        debug_assert_eq!(oi + a, block.len());
                        block.push(r);
                    }
                }
                row.push(block);
            }
            table.push(row);
        }
        let integral = base.integral_vector().to_vec();
        let model = RingModel::from_parts(total, bases, table, integral)?;
        let bundle = ProjectiveBundle {
            base: base.clone(),
            model,
            rank: e,
            c1: chern.class(1),
            blocks,
        };
        let xi = bundle.xi()?;
        let model = RingModel::with_labels(bundle.model.clone(), [("xi".to_string(), xi)])?;
        Ok(ProjectiveBundle { model, ..bundle })
    }

    pub fn model(&self) -> &Model<F> {
        &self.model
    }

    pub fn base(&self) -> &Model<F> {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn assemble(&self, k: usize, parts: &[(usize, RingElement<F>)]) -> Result<RingElement<F>> {
        let mut coeffs = vec![F::zero(); self.model.rank(k)];
        if k <= self.model.dim() {
            for (j, x) in parts {
                if let Some(&(_, off)) = self.blocks[k].iter().find(|(jj, _)| jj == j) {
                    for (t, c) in x.coeffs().iter().enumerate() {
                        coeffs[off + t] = coeffs[off + t].clone() + c.clone();
                    }
                }
            }
        }
        RingElement::from_coeffs(&self.model, k, coeffs)
    }

    /// The tautological class. For `e = 1` this is `π^* c_1`.
    pub fn xi(&self) -> Result<RingElement<F>> {
        if self.rank >= 2 {
            self.assemble(1, &[(1, RingElement::one(&self.base))])
        } else {
            self.pullback(&self.c1)
        }
    }

    pub fn pullback(&self, x: &RingElement<F>) -> Result<RingElement<F>> {
        if !std::sync::Arc::ptr_eq(x.model(), &self.base) {
            return Err(Error::ModelMismatch);
        }
        self.assemble(x.degree(), &[(0, x.clone())])
    }

    /// Fiber integration: the `ξ^{e-1}` component, of base degree
    /// `deg − (e − 1)`. Elements of degree below `e − 1` push forward to zero,
    /// returned in degree 0.
    pub fn pushforward(&self, el: &RingElement<F>) -> Result<RingElement<F>> {
        if !std::sync::Arc::ptr_eq(el.model(), &self.model) {
            return Err(Error::ModelMismatch);
        }
        let k = el.degree();
        let e = self.rank;
        if k + 1 < e {
            return Ok(RingElement::zero(&self.base, 0));
        }
        if k > self.model.dim() {
            return Ok(RingElement::zero(&self.base, k + 1 - e));
        }
        Ok(split_blocks(&self.base, el, &self.blocks[k])
            .into_iter()
            .find(|(j, _)| *j == e - 1)
            .map(|(_, x)| x)
            .unwrap_or_else(|| RingElement::zero(&self.base, k + 1 - e)))
    }
}

/// `X × ℙ¹`: degree `k` is `X_k ⊕ X_{k-1}·τ` with `τ² = 0` and `∫ x·τ = ∫_X x`.
#[derive(Debug, Clone)]
pub struct ProductWithP1<F> {
    base: Model<F>,
    model: Model<F>,
    blocks: Vec<Blocks>,
}

impl<F: Scalar> ProductWithP1<F> {
    pub fn new(base: &Model<F>) -> Result<Self> {
        let d = base.dim() + 1;
        let blocks: Vec<Blocks> = (0..=d).map(|k| layout(base, k, 2)).collect();
        let bases: Vec<Vec<String>> = (0..=d).map(|k| block_names(base, k, &blocks[k], "tau")).collect();
        let mut table: MultTable<F> = Vec::with_capacity(d + 1);
        for p in 0..=d {
            let mut row = Vec::new();
            for q in 0..=d - p {
                let mut block = Vec::new();
                for &(i, _) in &blocks[p] {
                    for a in 0..base.rank(p - i) {
                        let mut r = vec![Vec::new(); bases[q].len()];
                        for &(j, oj) in &blocks[q] {
                            for b in 0..base.rank(q - j) {
                                if i + j > 1 {
                                    continue;
                                }
                                let target = blocks[p + q]
                                    .iter()
                                    .find(|(l, _)| *l == i + j)
                                    .map(|&(_, off)| off);
                                let Some(off) = target else { continue };
                                r[oj + b] = base
                                    .product_of_basis(p - i, a, q - j, b)
                                    .iter()
                                    .map(|(t, c)| (off + t, c.clone()))
                                    .collect();
                            }
                        }
                        block.push(r);
                    }
                }
                row.push(block);
            }
            table.push(row);
        }
        let integral = base.integral_vector().to_vec();
        let model = RingModel::from_parts(d, bases, table, integral)?;
        let out = ProductWithP1 {
            base: base.clone(),
            model,
            blocks,
        };
        let tau = out.tau()?;
        let model = RingModel::with_labels(out.model.clone(), [("tau".to_string(), tau)])?;
        Ok(ProductWithP1 { model, ..out })
    }

    pub fn model(&self) -> &Model<F> {
        &self.model
    }

    pub fn base(&self) -> &Model<F> {
        &self.base
    }

    fn assemble(&self, k: usize, parts: &[(usize, &RingElement<F>)]) -> Result<RingElement<F>> {
        let mut coeffs = vec![F::zero(); self.model.rank(k)];
        if k <= self.model.dim() {
            for (j, x) in parts {
                if let Some(&(_, off)) = self.blocks[k].iter().find(|(jj, _)| jj == j) {
                    for (t, c) in x.coeffs().iter().enumerate() {
                        coeffs[off + t] = coeffs[off + t].clone() + c.clone();
                    }
                }
            }
        }
        RingElement::from_coeffs(&self.model, k, coeffs)
    }

    pub fn tau(&self) -> Result<RingElement<F>> {
        self.assemble(1, &[(1, &RingElement::one(&self.base))])
    }

    pub fn pullback(&self, x: &RingElement<F>) -> Result<RingElement<F>> {
        if !std::sync::Arc::ptr_eq(x.model(), &self.base) {
            return Err(Error::ModelMismatch);
        }
        self.assemble(x.degree(), &[(0, x)])
    }

    /// `x + y·τ ↦ (x, y)`.
    pub fn split(&self, el: &RingElement<F>) -> Result<(RingElement<F>, RingElement<F>)> {
        if !std::sync::Arc::ptr_eq(el.model(), &self.model) {
            return Err(Error::ModelMismatch);
        }
        let k = el.degree();
        let mut x = RingElement::zero(&self.base, k);
        let mut y = RingElement::zero(&self.base, k.saturating_sub(1));
        if k <= self.model.dim() {
            for (j, part) in split_blocks(&self.base, el, &self.blocks[k]) {
                if j == 0 {
                    x = part;
                } else {
                    y = part;
                }
            }
        }
        Ok((x, y))
    }
}
