//! Square matrices over the tower field and the ball base at the identity of
//! `GL_n`: `B_eps = { A : |A_ij - δ_ij| < eps for all i, j }`, entrywise
//! (Chebyshev) deviation on the `n²` entries.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldElement, FieldError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("row {row} has {len} entries, expected {expected}")]
    Ragged { row: usize, len: usize, expected: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("radius must be positive")]
    NonPositiveRadius,
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<FieldElement>>", into = "Vec<Vec<FieldElement>>")]
pub struct Matrix {
    n: usize,
    entries: Vec<FieldElement>,
}

impl TryFrom<Vec<Vec<FieldElement>>> for Matrix {
    type Error = MatrixError;
    fn try_from(rows: Vec<Vec<FieldElement>>) -> Result<Self, Self::Error> {
        Matrix::from_rows(rows)
    }
}

impl From<Matrix> for Vec<Vec<FieldElement>> {
    fn from(m: Matrix) -> Self {
        m.rows()
    }
}

impl Matrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![FieldElement::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = FieldElement::one();
        }
        Matrix { n, entries }
    }

    /// `I + c·E_ij`.
    pub fn elementary(n: usize, i: usize, j: usize, c: FieldElement) -> Self {
        let mut m = Matrix::identity(n);
        let cur = m.get(i, j).clone();
        m.set(i, j, &cur + &c);
        m
    }

    pub fn from_rows(rows: Vec<Vec<FieldElement>>) -> Result<Self, MatrixError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != n {
                return Err(MatrixError::Ragged { row, len: r.len(), expected: n });
            }
            entries.extend(r);
        }
        Ok(Matrix { n, entries })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.entries[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<FieldElement>> {
        self.entries.chunks(self.n.max(1)).take(self.n).map(<[_]>::to_vec).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &FieldElement)> {
        let n = self.n;
        self.entries.iter().enumerate().map(move |(k, e)| (k / n, k % n, e))
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix, MatrixError> {
        if self.n != rhs.n {
            return Err(MatrixError::DimensionMismatch { left: self.n, right: rhs.n });
        }
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = FieldElement::zero();
                for k in 0..n {
                    let (a, b) = (self.get(i, k), rhs.get(k, j));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * b);
                }
                entries.push(acc);
            }
        }
        Ok(Matrix { n, entries })
    }

    /// Fraction-free (Bareiss) elimination on `[A | I]`, then back
    /// substitution. Returns the inverse and the determinant.
    pub fn inverse_with_det(&self) -> Result<(Matrix, FieldElement), MatrixError> {
        let n = self.n;
        let w = 2 * n;
        let mut m: Vec<Vec<FieldElement>> = (0..n)
            .map(|i| {
                let mut row: Vec<FieldElement> = (0..n).map(|j| self.get(i, j).clone()).collect();
                row.extend((0..n).map(|j| if i == j { FieldElement::one() } else { FieldElement::zero() }));
                row
            })
            .collect();
        let mut prev = FieldElement::one();
        let mut negate = false;
        for k in 0..n {
            let p = (k..n).find(|&r| !m[r][k].is_zero()).ok_or(MatrixError::Singular)?;
            if p != k {
                m.swap(p, k);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..w {
                    let t = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = t.checked_div(&prev)?;
                }
                m[i][k] = FieldElement::zero();
            }
            // rows above the pivot are untouched by this step of Bareiss
            prev = m[k][k].clone();
        }
        let det = if negate { -&prev } else { prev };
        if n == 0 {
            return Ok((Matrix::identity(0), FieldElement::one()));
        }

        let mut inv = Matrix::identity(n);
        for col in 0..n {
            for i in (0..n).rev() {
                let mut acc = m[i][n + col].clone();
                for j in i + 1..n {
                    if !m[i][j].is_zero() {
                        acc = &acc - &(&m[i][j] * inv.get(j, col));
                    }
                }
                inv.set(i, col, acc.checked_div(&m[i][i])?);
            }
        }
        Ok((inv, det))
    }

    pub fn inverse(&self) -> Result<Matrix, MatrixError> {
        Ok(self.inverse_with_det()?.0)
    }

    pub fn determinant(&self) -> FieldElement {
        match self.inverse_with_det() {
            Ok((_, d)) => d,
            Err(_) => FieldElement::zero(),
        }
    }
}

/// `true` iff every entry of `a - I` is strictly below `eps` in absolute value.
pub fn ball_member(a: &Matrix, eps: &FieldElement) -> Result<bool, MatrixError> {
    if eps.sign() != Ordering::Greater {
        return Err(MatrixError::NonPositiveRadius);
    }
    Ok(a.entries().all(|(i, j, e)| {
        let dev = if i == j { e - &FieldElement::one() } else { e.clone() };
        dev.abs() < *eps
    }))
}

/// Radius `δ = min(eps, 1) / (n + 2)`: products of two members of `B_δ` lie
/// in `B_eps`, since each entry of `AB - I` is bounded by `2δ + nδ² ≤ (n+2)δ`.
pub fn shrink_radius(eps: &FieldElement, n: usize) -> Result<FieldElement, MatrixError> {
    if eps.sign() != Ordering::Greater {
        return Err(MatrixError::NonPositiveRadius);
    }
    let one = FieldElement::one();
    let eps = if *eps > one { one } else { eps.clone() };
    Ok(&eps / &FieldElement::from_int(n as i64 + 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(s: &str) -> FieldElement {
        s.parse().unwrap()
    }

    #[test]
    fn identity_inverts_to_itself() {
        let i3 = Matrix::identity(3);
        assert_eq!(i3.inverse().unwrap(), i3);
    }

    #[test]
    fn unipotent_inverse() {
        let a = Matrix::elementary(2, 0, 1, fe("a0"));
        assert_eq!(a.inverse().unwrap(), Matrix::elementary(2, 0, 1, fe("-a0")));
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let m = Matrix::from_rows(vec![vec![fe("a0"), fe("1")], vec![fe("a0^2"), fe("a0")]]).unwrap();
        assert_eq!(m.inverse(), Err(MatrixError::Singular));
        assert!(m.determinant().is_zero());
    }

    #[test]
    fn determinant_with_row_swap() {
        let m = Matrix::from_rows(vec![vec![fe("0"), fe("1")], vec![fe("1"), fe("a1")]]).unwrap();
        let (inv, det) = m.inverse_with_det().unwrap();
        assert_eq!(det, fe("-1"));
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(2));
    }

    #[test]
    fn ball_membership_examples() {
        let a = Matrix::elementary(2, 0, 1, fe("a0"));
        assert!(ball_member(&Matrix::identity(2), &fe("a1")).unwrap());
        assert!(!ball_member(&a, &fe("a0^2")).unwrap());
        assert!(ball_member(&a, &fe("2*a0")).unwrap());
        assert_eq!(ball_member(&a, &fe("0")), Err(MatrixError::NonPositiveRadius));
        assert_eq!(ball_member(&a, &fe("-a0")), Err(MatrixError::NonPositiveRadius));
    }

    #[test]
    fn shrink_radius_examples() {
        assert_eq!(shrink_radius(&fe("1/2"), 2).unwrap(), fe("1/8"));
        assert_eq!(shrink_radius(&fe("a0"), 2).unwrap(), fe("a0/4"));
        assert_eq!(shrink_radius(&fe("1"), 1).unwrap(), fe("1/3"));
        assert_eq!(shrink_radius(&fe("5"), 1).unwrap(), fe("1/3"));
    }

    #[test]
    fn json_round_trip_and_ragged_rejection() {
        let m = Matrix::elementary(2, 1, 0, fe("a0/(1 + a1)"));
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(serde_json::from_str::<Matrix>(&s).unwrap(), m);
        assert!(serde_json::from_str::<Matrix>(r#"[["1","0"],["1"]]"#).is_err());
    }
}
