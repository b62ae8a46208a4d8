//! Small dense linear algebra over [`Scalar`] fields.

use std::ops::{Index, IndexMut};

use nalgebra::{DMatrix, SymmetricEigen};
use num::Complex;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, DEFAULT_TOLERANCE};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// `x^T M y`.
    pub fn bilinear(&self, x: &[F], y: &[F]) -> F {
        dot(x, &self.mul_vec(y))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::abs_f64).fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..i).all(|j| (self[(i, j)].clone() - self[(j, i)].clone()).negligible(scale, tol))
            })
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(Scalar::to_f64)
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot<F: Scalar>(a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b)
        .fold(F::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn axpy<F: Scalar>(y: &mut [F], a: &F, x: &[F]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi = yi.clone() + a.clone() * xi.clone();
    }
}

fn max_abs_vec<F: Scalar>(v: &[F]) -> f64 {
    v.iter().map(Scalar::abs_f64).fold(0.0, f64::max)
}

/// Incrementally maintained echelon form that also tracks how each reduced row
/// combines the accepted input vectors.
#[derive(Debug, Clone)]
pub struct EchelonBasis<F> {
    dim: usize,
    tol: f64,
    rows: Vec<(usize, Vec<F>, Vec<F>)>,
    accepted: usize,
}

impl<F: Scalar> EchelonBasis<F> {
    pub fn new(dim: usize) -> Self {
        Self::with_tolerance(dim, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(dim: usize, tol: f64) -> Self {
        EchelonBasis {
            dim,
            tol,
            rows: Vec::new(),
            accepted: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.accepted
    }

    pub fn is_empty(&self) -> bool {
        self.accepted == 0
    }

    fn reduce(&self, v: &[F]) -> (Vec<F>, Vec<F>) {
        assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        let mut comb = vec![F::zero(); self.accepted];
        for (pivot, row, rc) in &self.rows {
            if w[*pivot].is_zero() {
                continue;
            }
            let f = w[*pivot].clone() / row[*pivot].clone();
            axpy(&mut w, &-f.clone(), row);
            for (c, r) in comb.iter_mut().zip(rc) {
                *c = c.clone() + f.clone() * r.clone();
            }
            w[*pivot] = F::zero();
        }
        (w, comb)
    }

    fn is_residual_zero(&self, w: &[F], scale: f64) -> bool {
        w.iter().all(|x| x.negligible(scale, self.tol))
    }

    /// Adds `v` if it is independent of the vectors accepted so far.
    pub fn insert(&mut self, v: &[F]) -> bool {
        let scale = max_abs_vec(v).max(f64::MIN_POSITIVE);
        let (w, comb) = self.reduce(v);
        if self.is_residual_zero(&w, scale) {
            return false;
        }
        let pivot = (0..self.dim)
            .filter(|&i| !w[i].negligible(scale, self.tol))
            .max_by(|&a, &b| w[a].abs_f64().total_cmp(&w[b].abs_f64()))
            .expect("nonzero residual has a pivot");
        // the new row equals v minus the accumulated combination
        let mut rc: Vec<F> = comb.into_iter().map(|c| -c).collect();
        for (_, _, r) in self.rows.iter_mut() {
            r.push(F::zero());
        }
        rc.push(F::one());
        self.rows.push((pivot, w, rc));
        self.accepted += 1;
        true
    }

    /// Coordinates of `v` with respect to the accepted vectors, if `v` lies in their span.
    pub fn coordinates(&self, v: &[F]) -> Option<Vec<F>> {
        let scale = max_abs_vec(v).max(f64::MIN_POSITIVE);
        let (w, comb) = self.reduce(v);
        if self.is_residual_zero(&w, scale) {
            Some(comb)
        } else {
            None
        }
    }
}

/// Row reduction of `a`; returns the pivot columns and the reduced matrix.
fn row_reduce<F: Scalar>(a: &Matrix<F>, tol: f64) -> (Vec<usize>, Matrix<F>) {
    let mut m = a.clone();
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols() {
        if r == m.rows() {
            break;
        }
        let Some(p) = (r..m.rows())
            .filter(|&i| !m[(i, c)].negligible(scale, tol))
            .max_by(|&x, &y| m[(x, c)].abs_f64().total_cmp(&m[(y, c)].abs_f64()))
        else {
            for i in r..m.rows() {
                m[(i, c)] = F::zero();
            }
            continue;
        };
        if p != r {
            for j in 0..m.cols() {
                let tmp = m[(p, j)].clone();
                m[(p, j)] = m[(r, j)].clone();
                m[(r, j)] = tmp;
            }
        }
        let inv = F::one() / m[(r, c)].clone();
        for j in 0..m.cols() {
            m[(r, j)] = m[(r, j)].clone() * inv.clone();
        }
        for i in 0..m.rows() {
            if i != r && !m[(i, c)].is_zero() {
                let f = m[(i, c)].clone();
                for j in 0..m.cols() {
                    m[(i, j)] = m[(i, j)].clone() - f.clone() * m[(r, j)].clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (pivots, m)
}

pub fn rank<F: Scalar>(a: &Matrix<F>, tol: f64) -> usize {
    row_reduce(a, tol).0.len()
}

/// Basis of `{x : A x = 0}`.
pub fn nullspace<F: Scalar>(a: &Matrix<F>, tol: f64) -> Vec<Vec<F>> {
    let (pivots, r) = row_reduce(a, tol);
    let free: Vec<usize> = (0..a.cols()).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![F::zero(); a.cols()];
            x[f] = F::one();
            for (row, &pc) in pivots.iter().enumerate() {
                x[pc] = -r[(row, f)].clone();
            }
            x
        })
        .collect()
}

/// Solves `A x = b` for an injective `A`; errors with a kernel witness when `A`
/// is rank deficient and with a precondition error when `b` is outside the image.
pub fn solve_unique<F: Scalar>(a: &Matrix<F>, b: &[F], tol: f64) -> Result<Vec<F>> {
    assert_eq!(a.rows(), b.len());
    let kernel = nullspace(a, tol);
    if let Some(w) = kernel.first() {
        return Err(Error::Singular {
            witness: w.iter().map(ToString::to_string).collect(),
        });
    }
    let aug = Matrix::from_fn(a.rows(), a.cols() + 1, |i, j| {
        if j < a.cols() {
            a[(i, j)].clone()
        } else {
            b[i].clone()
        }
    });
    let (pivots, r) = row_reduce(&aug, tol);
    if pivots.contains(&a.cols()) {
        return Err(Error::Precondition(
            "right-hand side is not in the image of the map".into(),
        ));
    }
    let mut x = vec![F::zero(); a.cols()];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = r[(row, a.cols())].clone();
    }
    Ok(x)
}

/// Result of a congruence diagonalization: the columns of `basis` are
/// `Q`-orthogonal and `Q(p_i, p_i) = diag[i]`.
#[derive(Debug, Clone)]
pub struct Congruence<F> {
    pub diag: Vec<F>,
    pub basis: Matrix<F>,
}

/// Exact symmetric Gaussian elimination (Sylvester inertia); no tolerance.
pub fn congruence_diagonalize<F: Scalar>(q: &Matrix<F>) -> Congruence<F> {
    let n = q.rows();
    let mut a = q.clone();
    let mut p = Matrix::<F>::identity(n);
    let swap = |a: &mut Matrix<F>, p: &mut Matrix<F>, i: usize, j: usize| {
        for t in 0..n {
            let tmp = a[(i, t)].clone();
            a[(i, t)] = a[(j, t)].clone();
            a[(j, t)] = tmp;
        }
        for t in 0..n {
            let tmp = a[(t, i)].clone();
            a[(t, i)] = a[(t, j)].clone();
            a[(t, j)] = tmp;
            let tmp = p[(t, i)].clone();
            p[(t, i)] = p[(t, j)].clone();
            p[(t, j)] = tmp;
        }
    };
    // x_k <- x_k + f x_j
    let add = |a: &mut Matrix<F>, p: &mut Matrix<F>, k: usize, j: usize, f: F| {
        for t in 0..n {
            let v = a[(k, t)].clone() + f.clone() * a[(j, t)].clone();
            a[(k, t)] = v;
        }
        for t in 0..n {
            let v = a[(t, k)].clone() + f.clone() * a[(t, j)].clone();
            a[(t, k)] = v;
            let v = p[(t, k)].clone() + f.clone() * p[(t, j)].clone();
            p[(t, k)] = v;
        }
    };
    for k in 0..n {
        if a[(k, k)].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[(j, j)].is_zero()) {
                swap(&mut a, &mut p, k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !a[(k, j)].is_zero()) {
                add(&mut a, &mut p, k, j, F::one());
            } else {
                continue;
            }
        }
        let pivot = a[(k, k)].clone();
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let f = -(a[(i, k)].clone() / pivot.clone());
            add(&mut a, &mut p, i, k, f);
        }
    }
    Congruence {
        diag: (0..n).map(|i| a[(i, i)].clone()).collect(),
        basis: p,
    }
}

/// Orthogonal eigendecomposition of a real symmetric matrix.
pub fn eigen_diagonalize(q: &Matrix<f64>) -> Congruence<f64> {
    let n = q.rows();
    let m = DMatrix::from_fn(n, n, |i, j| 0.5 * (q[(i, j)] + q[(j, i)]));
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    Congruence {
        diag: order.iter().map(|&k| eig.eigenvalues[k]).collect(),
        basis: Matrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]),
    }
}

/// Eigenvalues of a real symmetric matrix, descending.
pub fn symmetric_eigenvalues(q: &Matrix<f64>) -> Vec<f64> {
    eigen_diagonalize(q).diag
}

/// Eigenvalues of a complex Hermitian matrix, descending.
pub fn hermitian_eigenvalues(h: &[Vec<Complex<f64>>]) -> Vec<f64> {
    let n = h.len();
    let m = DMatrix::from_fn(n, n, |i, j| (h[i][j] + h[j][i].conj()) * 0.5);
    let eig = SymmetricEigen::new(m);
    let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Sylvester inertia `(n₊, n₀, n₋)` of a symmetric matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub zero: usize,
    pub negative: usize,
}

/// Inertia together with the congruence it was read from and the float
/// eigenvalues (descending) used as evidence.
///
/// The exact backend counts signs of the exact congruence diagonal; the float
/// backend counts eigenvalues with `|λ| <= tol * max|λ|` as zero.
pub fn inertia<F: Scalar>(q: &Matrix<F>, tol: f64) -> (Inertia, Congruence<F>, Vec<f64>) {
    let cong = F::diagonalize(q);
    let eigenvalues = symmetric_eigenvalues(&q.to_f64());
    let scale = cong.diag.iter().map(Scalar::abs_f64).fold(0.0, f64::max);
    let mut out = Inertia {
        positive: 0,
        zero: 0,
        negative: 0,
    };
    for x in &cong.diag {
        if x.negligible(scale, tol) {
            out.zero += 1;
        } else if *x > F::zero() {
            out.positive += 1;
        } else {
            out.negative += 1;
        }
    }
    (out, cong, eigenvalues)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rint, Rational};

    fn q(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rint(x)).collect()).collect())
    }

    #[test]
    fn congruence_handles_zero_diagonal() {
        let m = q(&[&[0, 4, 0], &[4, 0, 0], &[0, 0, -4]]);
        let c = congruence_diagonalize(&m);
        let pos = c.diag.iter().filter(|x| **x > Rational::from_integer(0.into())).count();
        let neg = c.diag.iter().filter(|x| **x < Rational::from_integer(0.into())).count();
        assert_eq!((pos, neg), (1, 2));
        for i in 0..3 {
            for j in 0..3 {
                let v = m.bilinear(&c.basis.column(i), &c.basis.column(j));
                let expect = if i == j { c.diag[i].clone() } else { rint(0) };
                assert_eq!(v, expect);
            }
        }
    }

    #[test]
    fn solve_reports_kernel() {
        let m = q(&[&[1, 2], &[2, 4]]);
        match solve_unique(&m, &[rint(1), rint(2)], 0.0) {
            Err(Error::Singular { witness }) => assert_eq!(witness, vec!["-2", "1"]),
            other => panic!("unexpected {other:?}"),
        }
        let m = q(&[&[2, 1], &[1, 1], &[0, 3]]);
        let x = solve_unique(&m, &[rint(3), rint(2), rint(3)], 0.0).unwrap();
        assert_eq!(x, vec![rint(1), rint(1)]);
    }

    #[test]
    fn echelon_coordinates() {
        let mut b = EchelonBasis::<Rational>::new(3);
        assert!(b.insert(&[rint(1), rint(1), rint(0)]));
        assert!(b.insert(&[rint(0), rint(1), rint(1)]));
        assert!(!b.insert(&[rint(1), rint(2), rint(1)]));
        let c = b.coordinates(&[rint(2), rint(5), rint(3)]).unwrap();
        assert_eq!(c, vec![rint(2), rint(3)]);
        assert!(b.coordinates(&[rint(0), rint(0), rint(1)]).is_none());
    }
}
