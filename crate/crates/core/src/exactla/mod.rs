//! Exact linear algebra over the Gaussian rationals.
//!
//! Elimination always pivots on the first nonzero entry of the leftmost
//! remaining column, so kernels and solutions come out in a canonical basis.

mod matrix;
mod scalar;

pub use matrix::ExactMatrix;
pub use scalar::Scalar;

use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    Shape {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("ragged rows")]
    Ragged,
    #[error("division by zero")]
    DivisionByZero,
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("matrix is singular")]
    Singular,
    #[error("cannot parse scalar from {0:?}")]
    Parse(String),
}

/// Reduced row echelon form together with the pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub reduced: ExactMatrix,
    pub pivots: Vec<usize>,
}

pub fn rref(m: &ExactMatrix) -> Echelon {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&k| !a.get(k, c).is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let tmp = a.get(p, j).clone();
                a.set(p, j, a.get(r, j).clone());
                a.set(r, j, tmp);
            }
        }
        let inv = a.get(r, c).inv();
        for j in c..cols {
            let v = a.get(r, j) * &inv;
            a.set(r, j, v);
        }
        let pivot_row: Vec<(usize, Scalar)> = (c..cols)
            .filter(|&j| !a.get(r, j).is_zero())
            .map(|j| (j, a.get(r, j).clone()))
            .collect();
        for k in 0..rows {
            if k == r {
                continue;
            }
            let f = a.get(k, c).clone();
            if f.is_zero() {
                continue;
            }
            for (j, v) in &pivot_row {
                let x = a.get(k, *j) - &(&f * v);
                a.set(k, *j, x);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Echelon { reduced: a, pivots }
}

pub fn rank(m: &ExactMatrix) -> usize {
    rref(m).pivots.len()
}

/// Canonical basis of the right null space: one vector per free column,
/// with a one in that column.
pub fn kernel_basis(m: &ExactMatrix) -> Vec<Vec<Scalar>> {
    let Echelon { reduced, pivots } = rref(m);
    let cols = m.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Scalar::zero(); cols];
            v[f] = Scalar::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -reduced.get(row, f);
            }
            v
        })
        .collect()
}

/// One solution of `m x = b` with all free variables set to zero.
pub fn solve_linear(m: &ExactMatrix, b: &[Scalar]) -> Result<Vec<Scalar>, LinAlgError> {
    if b.len() != m.rows() {
        return Err(LinAlgError::Shape {
            op: "solve",
            left: (m.rows(), m.cols()),
            right: (b.len(), 1),
        });
    }
    let mut aug = ExactMatrix::zeros(m.rows(), m.cols() + 1);
    for (r, br) in b.iter().enumerate().take(m.rows()) {
        for c in 0..m.cols() {
            aug.set(r, c, m.get(r, c).clone());
        }
        aug.set(r, m.cols(), br.clone());
    }
    let Echelon { reduced, pivots } = rref(&aug);
    if pivots.last() == Some(&m.cols()) {
        return Err(LinAlgError::Inconsistent);
    }
    let mut x = vec![Scalar::zero(); m.cols()];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = reduced.get(row, m.cols()).clone();
    }
    Ok(x)
}

pub fn inverse(m: &ExactMatrix) -> Result<ExactMatrix, LinAlgError> {
    if !m.is_square() {
        return Err(LinAlgError::Shape {
            op: "inverse",
            left: (m.rows(), m.cols()),
            right: (m.cols(), m.rows()),
        });
    }
    let n = m.rows();
    let mut aug = ExactMatrix::zeros(n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            aug.set(r, c, m.get(r, c).clone());
        }
        aug.set(r, n + r, Scalar::one());
    }
    let Echelon { reduced, pivots } = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(LinAlgError::Singular);
    }
    Ok(ExactMatrix::from_fn(n, n, |r, c| {
        reduced.get(r, n + c).clone()
    }))
}

/// Express `target` in the span of `basis`; `None` when it is not in the span.
pub fn coordinates_in_span(basis: &[Vec<Scalar>], target: &[Scalar]) -> Option<Vec<Scalar>> {
    if basis.is_empty() {
        return target.iter().all(Zero::is_zero).then(Vec::new);
    }
    let m = ExactMatrix::from_columns(basis).ok()?;
    solve_linear(&m, target).ok()
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_ints(rows)
    }

    #[test]
    fn kernel_is_canonical() {
        let m = ints(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 2);
        assert_eq!(k[0], vec![Scalar::from(-2), Scalar::one(), Scalar::zero()]);
        assert_eq!(k[1], vec![Scalar::from(-3), Scalar::zero(), Scalar::one()]);
        for v in &k {
            assert!(is_zero_vec(&m.apply(v)));
        }
    }

    #[test]
    fn solve_and_inverse() {
        let m = ints(&[&[2, 1], &[1, 3]]);
        let x = solve_linear(&m, &[Scalar::from(3), Scalar::from(4)]).unwrap();
        assert_eq!(m.apply(&x), vec![Scalar::from(3), Scalar::from(4)]);
        let inv = inverse(&m).unwrap();
        assert_eq!(&inv * &m, ExactMatrix::identity(2));
        assert_eq!(
            inverse(&ints(&[&[1, 2], &[2, 4]])),
            Err(LinAlgError::Singular)
        );
        assert_eq!(
            solve_linear(&ints(&[&[1, 1], &[1, 1]]), &[Scalar::one(), Scalar::zero()]),
            Err(LinAlgError::Inconsistent)
        );
    }

    #[test]
    fn shape_errors_are_reported() {
        let a = ExactMatrix::zeros(2, 3);
        assert!(a.checked_mul(&a).is_err());
        assert!(a.checked_add(&ExactMatrix::zeros(3, 2)).is_err());
    }

    #[test]
    fn serde_roundtrip() {
        let m = ExactMatrix::from_rows(vec![
            vec![Scalar::complex((1, 2), (3, 4)), Scalar::i()],
            vec![Scalar::ratio(-1, 3), Scalar::zero()],
        ])
        .unwrap();
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, r#"[["1/2+3/4*i","1*i"],["-1/3","0"]]"#);
        let back: ExactMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
    }
}
