use super::algebra::GradedAlgebra;
use super::partition::Partition;
use super::sympoly::SymPoly;
use crate::error::Result;

/// Schur polynomial `s_λ` in `num_vars` variables via the dual Jacobi–Trudi
/// determinant `det(e_{λ'_i - i + j})`.
pub fn schur(lambda: &Partition, num_vars: usize) -> SymPoly {
    if lambda.len() > num_vars {
        return SymPoly::zero(num_vars, lambda.weight());
    }
    let conj = lambda.conjugate();
    let n = conj.len();
    if n == 0 {
        return SymPoly::one(num_vars);
    }
    let entry = |i: usize, j: usize| -> Option<SymPoly> {
        let k = conj.parts()[i] as isize - i as isize + j as isize;
        if k < 0 || k as usize > num_vars {
            None
        } else {
            Some(SymPoly::elementary(num_vars, k as usize))
        }
    };
    jacobi_trudi_det(n, &entry, num_vars, lambda.weight())
        .expect("Jacobi–Trudi entries share one variable count")
}

/// Determinant by cofactor expansion along rows, skipping structurally zero entries.
pub(crate) fn jacobi_trudi_det(
    n: usize,
    entry: &dyn Fn(usize, usize) -> Option<SymPoly>,
    num_vars: usize,
    weight: usize,
) -> Result<SymPoly> {
    fn go(
        row: usize,
        n: usize,
        cols: &mut Vec<usize>,
        entry: &dyn Fn(usize, usize) -> Option<SymPoly>,
        acc: SymPoly,
        out: &mut SymPoly,
    ) -> Result<()> {
        if row == n {
            *out = out.try_add(&acc)?;
            return Ok(());
        }
        for pos in 0..cols.len() {
            let c = cols[pos];
            let Some(e) = entry(row, c) else { continue };
            if e.is_zero() {
                continue;
            }
            let sign = if pos % 2 == 0 { 1 } else { -1 };
            let next = acc.try_mul(&e)?.scaled(&crate::scalar::rint(sign));
            cols.remove(pos);
            go(row + 1, n, cols, entry, next, out)?;
            cols.insert(pos, c);
        }
        Ok(())
    }
    let mut out = SymPoly::zero(num_vars, weight);
    let mut cols: Vec<usize> = (0..n).collect();
    go(0, n, &mut cols, entry, SymPoly::one(num_vars), &mut out)?;
    Ok(out)
}
