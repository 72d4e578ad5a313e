//! Exact dense linear algebra over `Q(ξ_m)(q)`.

use crate::error::{Error, Result};
use crate::scalars::CycRat;

/// Inverts a square matrix by Gauss-Jordan elimination.
///
/// The pivot in each column is the nonzero candidate of least
/// [`CycRat::complexity`], which keeps intermediate degrees in `q` small.
/// Returns `Ok(None)` when the matrix is singular.
pub fn invert(matrix: &[Vec<CycRat>]) -> Result<Option<Vec<Vec<CycRat>>>> {
    let n = matrix.len();
    if matrix.iter().any(|row| row.len() != n) {
        return Err(Error::InvariantViolation("matrix is not square".into()));
    }
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    let field = matrix[0][0].field().clone();
    let mut a: Vec<Vec<CycRat>> = matrix.to_vec();
    let mut inv: Vec<Vec<CycRat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        CycRat::one(&field)
                    } else {
                        CycRat::zero(&field)
                    }
                })
                .collect()
        })
        .collect();

    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .min_by_key(|&r| a[r][col].complexity());
        let Some(pivot) = pivot else {
            return Ok(None);
        };
        a.swap(col, pivot);
        inv.swap(col, pivot);

        let scale = a[col][col].inv()?;
        if !scale.is_one() {
            for x in a[col].iter_mut().chain(inv[col].iter_mut()) {
                if !x.is_zero() {
                    *x = &*x * &scale;
                }
            }
        }

        let (pivot_a, pivot_inv) = (a[col].clone(), inv[col].clone());
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for (x, p) in a[r].iter_mut().zip(&pivot_a) {
                if !p.is_zero() {
                    *x = &*x - &(&factor * p);
                }
            }
            for (x, p) in inv[r].iter_mut().zip(&pivot_inv) {
                if !p.is_zero() {
                    *x = &*x - &(&factor * p);
                }
            }
        }
    }
    Ok(Some(inv))
}

/// Matrix-vector product.
pub fn mat_vec(matrix: &[Vec<CycRat>], v: &[CycRat]) -> Vec<CycRat> {
    matrix
        .iter()
        .map(|row| {
            let field = v.first().map(|x| x.field().clone());
            let mut acc = field.map(|f| CycRat::zero(&f));
            for (a, b) in row.iter().zip(v) {
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                let term = a * b;
                acc = Some(match acc {
                    Some(s) => &s + &term,
                    None => term,
                });
            }
            acc.expect("nonempty vector")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{CyclotomicField, Params};

    #[test]
    fn inverts_symbolic_matrix() {
        let p = Params::symbolic(3).unwrap();
        let q = p.q();
        let m = vec![
            vec![q.clone(), p.one(), p.zero()],
            vec![p.int(2), &q * &q, p.one()],
            vec![p.zero(), p.c(), &q - &p.one()],
        ];
        let inv = invert(&m).unwrap().expect("nonsingular");
        for i in 0..3 {
            let col: Vec<CycRat> = inv.iter().map(|row| row[i].clone()).collect();
            let prod = mat_vec(&m, &col);
            for (j, x) in prod.iter().enumerate() {
                assert_eq!(x.is_one(), i == j);
                assert_eq!(x.is_zero(), i != j);
            }
        }
    }

    #[test]
    fn detects_singular() {
        let f = CyclotomicField::get(2).unwrap();
        let one = CycRat::one(&f);
        let two = CycRat::from_int(&f, 2);
        let m = vec![vec![one.clone(), two.clone()], vec![two.clone(), &two * &two]];
        assert!(invert(&m).unwrap().is_none());
    }
}
