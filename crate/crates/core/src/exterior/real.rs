use num::traits::{One, Zero};
use num::Complex;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::form::{subsets, Form, Mask};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, inertia, Matrix};
use crate::scalar::{complex_abs_f64, complex_negligible, i_pow, to_complex_f64, Scalar};
use crate::verdict::{Outcome, Verdict};

pub type HermitianMatrix<F> = Vec<Vec<Complex<F>>>;

/// Real basis of the `(p,p)`-forms on `ℂ^d`. With `u_{IJ} = i^{p²} dz_I ∧ dz̄_J`
/// it lists, for `I ≤ J` in lexicographic order, `u_{II}` when `I = J` and
/// `u_{IJ} + u_{JI}`, `i(u_{IJ} - u_{JI})` when `I < J`.
pub fn real_basis<F: Scalar>(dim: usize, p: usize) -> Vec<Form<F>> {
    let sets = subsets(dim, p);
    let unit: Complex<F> = i_pow(p * p);
    let mono = |i: Mask, j: Mask, c: Complex<F>| {
        let idx = |m: Mask| super::form::indices_of(m);
        Form::monomial(dim, &idx(i), &idx(j), c).expect("valid subsets")
    };
    let mut out = Vec::new();
    for (a, &i) in sets.iter().enumerate() {
        for &j in &sets[a..] {
            if i == j {
                out.push(mono(i, i, unit.clone()));
            } else {
                let iu = unit.clone() * i_pow::<F>(1);
                out.push(&mono(i, j, unit.clone()) + &mono(j, i, unit.clone()));
                out.push(&mono(i, j, iu.clone()) - &mono(j, i, iu));
            }
        }
    }
    out
}

/// Coordinates of a `(p,p)`-form in [`real_basis`]. Only the `I ≤ J`
/// coefficients are read, so the caller is responsible for reality.
pub fn real_coordinates<F: Scalar>(form: &Form<F>) -> Result<Vec<F>> {
    let (p, q) = form.bidegree();
    if p != q {
        return Err(Error::BidegreeMismatch {
            expected: (p, p),
            found: (p, q),
        });
    }
    let sets = subsets(form.dim(), p);
    let inv = i_pow::<F>(p * p).conj();
    let mut out = Vec::new();
    for (a, &i) in sets.iter().enumerate() {
        for &j in &sets[a..] {
            let z = form.coefficient_mask(i, j) * inv.clone();
            if i == j {
                out.push(z.re);
            } else {
                out.push(z.re);
                out.push(z.im);
            }
        }
    }
    Ok(out)
}

pub fn form_from_real_coordinates<F: Scalar>(dim: usize, p: usize, coords: &[F]) -> Result<Form<F>> {
    let basis = real_basis::<F>(dim, p);
    if basis.len() != coords.len() {
        return Err(Error::DimensionMismatch {
            left: basis.len(),
            right: coords.len(),
        });
    }
    Ok(basis
        .iter()
        .zip(coords)
        .filter(|(_, c)| !c.is_zero())
        .fold(Form::zero(dim, p, p), |acc, (b, c)| &acc + &b.scale_real(c)))
}

fn check_hermitian<F: Scalar>(h: &HermitianMatrix<F>, tol: f64) -> Result<()> {
    let n = h.len();
    if h.iter().any(|r| r.len() != n) {
        return Err(Error::NotHermitian);
    }
    let scale = h.iter().flatten().map(complex_abs_f64).fold(0.0, f64::max);
    for j in 0..n {
        for k in 0..n {
            if !complex_negligible(&(h[j][k].clone() - h[k][j].conj()), scale, tol) {
                return Err(Error::NotHermitian);
            }
        }
    }
    Ok(())
}

/// `α = i Σ H_{jk} dz_j ∧ dz̄_k`.
pub fn form_from_hermitian<F: Scalar>(h: &HermitianMatrix<F>, tol: f64) -> Result<Form<F>> {
    check_hermitian(h, tol)?;
    let n = h.len();
    let iu = i_pow::<F>(1);
    let terms = (0..n).flat_map(|j| (0..n).map(move |k| (j, k)));
    Form::from_terms(
        n,
        1,
        1,
        terms.map(|(j, k)| (vec![j], vec![k], h[j][k].clone() * iu.clone())),
    )
}

/// Inverse of [`form_from_hermitian`] on real `(1,1)`-forms.
pub fn hermitian_from_11<F: Scalar>(form: &Form<F>, tol: f64) -> Result<HermitianMatrix<F>> {
    if form.bidegree() != (1, 1) {
        return Err(Error::BidegreeMismatch {
            expected: (1, 1),
            found: form.bidegree(),
        });
    }
    if !form.is_real(tol) {
        return Err(Error::NotReal("(1,1)-form".into()));
    }
    let n = form.dim();
    let minus_i = i_pow::<F>(3);
    Ok((0..n)
        .map(|j| {
            (0..n)
                .map(|k| form.coefficient(&[j], &[k]) * minus_i.clone())
                .collect()
        })
        .collect())
}

/// Real symmetric `2n × 2n` matrix `[[A, -B], [B, A]]` of `H = A + iB`; its
/// inertia is twice that of `H`.
pub(crate) fn realify<F: Scalar>(h: &HermitianMatrix<F>) -> Matrix<F> {
    let n = h.len();
    Matrix::from_fn(2 * n, 2 * n, |r, c| {
        let z = &h[r % n][c % n];
        match (r < n, c < n) {
            (true, true) | (false, false) => z.re.clone(),
            (true, false) => -z.im.clone(),
            (false, true) => z.im.clone(),
        }
    })
}

/// Positive-definiteness verdict for a Hermitian matrix, with exact inertia on
/// the exact backend.
pub fn hermitian_verdict<F: Scalar>(h: &HermitianMatrix<F>, tol: f64) -> Verdict {
    let n = h.len();
    let (mut inert, cong, _) = inertia(&realify(h), tol);
    inert.positive /= 2;
    inert.zero /= 2;
    inert.negative /= 2;
    let h64: Vec<Vec<Complex<f64>>> = h.iter().map(|r| r.iter().map(to_complex_f64).collect()).collect();
    let eig = hermitian_eigenvalues(&h64);
    let outcome = if inert.negative > 0 {
        Outcome::Fail
    } else if inert.zero > 0 {
        Outcome::Degenerate
    } else {
        Outcome::Pass
    };
    let verdict = Verdict::new(outcome, &inert, eig, F::EXACT, tol);
    if outcome.is_pass() {
        return verdict;
    }
    let scale = cong.diag.iter().map(Scalar::abs_f64).fold(0.0, f64::max);
    let bad = (0..2 * n).find(|&k| {
        let d = &cong.diag[k];
        d.negligible(scale, tol) || *d < F::zero()
    });
    match bad {
        Some(k) => {
            let col = cong.basis.column(k);
            let coords = (0..n).map(|j| format!("{}+{}i", col[j], col[j + n])).collect();
            verdict.with_witness("complex-vector", coords)
        }
        None => verdict,
    }
}

/// A `(d−1,d−1)`-form is strictly positive iff
/// `M_{jk} = ∫ Ω ∧ i dz_j ∧ dz̄_k` is positive definite.
pub fn positivity_dminus1<F: Scalar>(omega: &Form<F>, tol: f64) -> Result<Verdict> {
    let d = omega.dim();
    let want = (d.saturating_sub(1), d.saturating_sub(1));
    if d == 0 || omega.bidegree() != want {
        return Err(Error::BidegreeMismatch {
            expected: want,
            found: omega.bidegree(),
        });
    }
    if !omega.is_real(tol) {
        return Err(Error::NotReal("(d-1,d-1)-form".into()));
    }
    let m = positivity_matrix(omega)?;
    Ok(hermitian_verdict(&m, tol))
}

pub(crate) fn positivity_matrix<F: Scalar>(omega: &Form<F>) -> Result<HermitianMatrix<F>> {
    let d = omega.dim();
    (0..d)
        .map(|j| {
            (0..d)
                .map(|k| omega.wedge(&Form::i_dz_dzbar(d, j, k))?.integrate_top_complex())
                .collect()
        })
        .collect()
}

fn complex_det<F: Scalar>(mut m: Vec<Vec<Complex<F>>>) -> Complex<F> {
    let n = m.len();
    let mut det = Complex::<F>::one();
    for c in 0..n {
        let pivot = (c..n).filter(|&r| !m[r][c].is_zero()).max_by(|&a, &b| {
            complex_abs_f64(&m[a][c]).total_cmp(&complex_abs_f64(&m[b][c]))
        });
        let Some(p) = pivot else {
            return Complex::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det = det * m[c][c].clone();
        for r in c + 1..n {
            let f = m[r][c].clone() / m[c][c].clone();
            for j in c..n {
                let v = m[c][j].clone() * f.clone();
                m[r][j] = m[r][j].clone() - v;
            }
        }
    }
    det
}

/// Value of a `(p,p)`-form on the complex `p`-plane spanned by `frame`,
/// as a density against the induced volume: `Ω|_V = value · vol_V`. For
/// an orthonormal frame `ω_std^p / p!` gives 1.
pub fn restrict_to_plane<F: Scalar>(omega: &Form<F>, frame: &[Vec<Complex<F>>], tol: f64) -> Result<F> {
    let p = frame.len();
    let d = omega.dim();
    if omega.bidegree() != (p, p) {
        return Err(Error::BidegreeMismatch {
            expected: (p, p),
            found: omega.bidegree(),
        });
    }
    if let Some(v) = frame.iter().find(|v| v.len() != d) {
        return Err(Error::DimensionMismatch {
            left: d,
            right: v.len(),
        });
    }
    let gram: Vec<Vec<Complex<F>>> = (0..p)
        .map(|a| {
            (0..p)
                .map(|b| {
                    (0..d).fold(Complex::zero(), |acc, i| acc + frame[a][i].conj() * frame[b][i].clone())
                })
                .collect()
        })
        .collect();
    let g = complex_det(gram).re;
    let norms = frame
        .iter()
        .map(|v| v.iter().map(|z| complex_abs_f64(z).powi(2)).sum::<f64>())
        .product::<f64>();
    if g.negligible(norms, tol) {
        return Err(Error::DegenerateFrame);
    }
    let minor = |m: Mask| -> Complex<F> {
        let rows = super::form::indices_of(m);
        complex_det(rows.iter().map(|&i| (0..p).map(|a| frame[a][i].clone()).collect()).collect())
    };
    let mut total = Complex::<F>::zero();
    for (i, j, c) in omega.mask_terms() {
        total = total + c.clone() * minor(i) * minor(j).conj();
    }
    let value = total * i_pow::<F>(p * p).conj();
    let scale = complex_abs_f64(&value).max(norms);
    if !value.im.negligible(scale, tol) {
        return Err(Error::ImaginaryIntegral { imag: value.im.to_f64() });
    }
    Ok(value.re / g)
}

/// Pulls a `(1,1)`-form on `ℂ^d` back to `ℂ^{d+1}` and adds
/// `c · i dz_{d+1} ∧ dz̄_{d+1}`.
pub fn extend_hat<F: Scalar>(phi: &Form<F>, c: &F) -> Result<Form<F>> {
    if phi.bidegree() != (1, 1) {
        return Err(Error::BidegreeMismatch {
            expected: (1, 1),
            found: phi.bidegree(),
        });
    }
    let d = phi.dim();
    let up = phi.pullback(d + 1)?;
    Ok(&up + &Form::i_dz_dzbar(d + 1, d, d).scale_real(c))
}

/// Shift added to `A*A` so sampled Kähler forms are uniformly positive definite.
pub const KAHLER_SHIFT: f64 = 1e-3;

/// Random Hermitian positive definite `A*A + δ I` where `A` has independent
/// standard complex Gaussian entries (real and imaginary parts `N(0, 1/2)`).
pub fn random_hermitian_pd<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianMatrix<f64> {
    let normal = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("valid normal");
    let a: Vec<Vec<Complex<f64>>> = (0..dim)
        .map(|_| (0..dim).map(|_| Complex::new(normal.sample(rng), normal.sample(rng))).collect())
        .collect();
    (0..dim)
        .map(|j| {
            (0..dim)
                .map(|k| {
                    let s: Complex<f64> = (0..dim).map(|l| a[l][j].conj() * a[l][k]).sum();
                    if j == k {
                        s + KAHLER_SHIFT
                    } else {
                        s
                    }
                })
                .collect()
        })
        .collect()
}

/// Random Kähler form drawn as in [`random_hermitian_pd`].
pub fn random_kahler<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Form<f64> {
    form_from_hermitian(&random_hermitian_pd(dim, rng), 1e-12).expect("A*A is Hermitian")
}
