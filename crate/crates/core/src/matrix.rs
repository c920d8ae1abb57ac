//! Dense matrices over a [`Scalar`] field.
//!
//! Matrices act on column coordinate vectors. Text form is one row per line
//! with entries separated by whitespace, each entry an integer or `p/q`.

use std::fmt;
use std::ops::Mul;

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(MatrixError::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| S::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn diagonal(entries: &[S]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { S::zero() })
    }

    /// The matrix sending basis vector `e_i` to `e_{perm[i]}`.
    ///
    /// # Panics
    ///
    /// If `perm` is not a permutation of `0..perm.len()`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in perm {
            assert!(p < n && !seen[p], "not a permutation: {perm:?}");
            seen[p] = true;
        }
        Self::from_fn(n, n, |i, j| if perm[j] == i { S::one() } else { S::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: S) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j { e.is_one() } else { e.is_zero() }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = S::zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                if !a.is_zero() {
                    acc = acc + a.clone() * rhs.get(k, j).clone();
                }
            }
            acc
        }))
    }

    /// Fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<S, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(S::one());
        }
        let mut m: Vec<Vec<S>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = S::one();
        let mut prev = S::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(S::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[i][j].clone() * m[k][k].clone() - m[i][k].clone() * m[k][j].clone();
                    m[i][j] = num / prev.clone();
                }
            }
            prev = m[k][k].clone();
        }
        Ok(sign * m[n - 1][n - 1].clone())
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Self, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut a: Vec<Vec<S>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut inv: Vec<Vec<S>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect())
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(MatrixError::NotInvertible)?;
            a.swap(pivot, col);
            inv.swap(pivot, col);
            let p = a[col][col].clone();
            for j in 0..n {
                a[col][j] = a[col][j].clone() / p.clone();
                inv[col][j] = inv[col][j].clone() / p.clone();
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col].clone();
                for j in 0..n {
                    let t = factor.clone() * a[col][j].clone();
                    a[r][j] = a[r][j].clone() - t;
                    let t = factor.clone() * inv[col][j].clone();
                    inv[r][j] = inv[r][j].clone() - t;
                }
            }
        }
        Ok(Self { rows: n, cols: n, data: inv.into_iter().flatten().collect() })
    }

    pub fn parse(text: &str) -> Result<Self, MatrixError> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|tok| parse_entry(tok).ok_or_else(|| MatrixError::Syntax {
                    line: lineno + 1,
                    message: format!("bad entry `{tok}`"),
                }))
                .collect::<Result<Vec<S>, _>>()?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(MatrixError::Syntax { line: 0, message: "empty matrix".into() });
        }
        Self::from_rows(rows)
    }
}

fn parse_entry<S: Scalar>(tok: &str) -> Option<S> {
    let (neg, body) = match tok.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, tok),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    let value = match body.split_once('/') {
        Some((p, q)) if digits(p) && digits(q) => {
            let q: S = q.parse().ok()?;
            if q.is_zero() {
                return None;
            }
            p.parse::<S>().ok()? / q
        }
        None if digits(body) => body.parse().ok()?,
        _ => return None,
    };
    Some(if neg { -value } else { value })
}

impl<S: Scalar> fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl<S: Scalar> Mul for &Matrix<S> {
    type Output = Matrix<S>;

    /// # Panics
    ///
    /// On incompatible shapes.
    fn mul(self, rhs: Self) -> Matrix<S> {
        self.checked_mul(rhs).expect("matrix shapes must agree")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;
    use num_traits::One;

    fn q(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    #[test]
    fn determinant_and_inverse() {
        let m = Matrix::from_rows(vec![
            vec![q(2, 1), q(1, 1), q(0, 1)],
            vec![q(1, 1), q(3, 1), q(1, 2)],
            vec![q(0, 1), q(1, 1), q(4, 1)],
        ])
        .unwrap();
        // 2*(12 - 1/2) - 1*(4 - 0) = 19
        assert_eq!(m.determinant().unwrap(), q(19, 1));
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).is_identity());
        assert!((&inv * &m).is_identity());
    }

    #[test]
    fn determinant_with_pivoting() {
        let m = Matrix::from_rows(vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]]).unwrap();
        assert_eq!(m.determinant().unwrap(), q(-1, 1));
        let singular = Matrix::from_rows(vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]]).unwrap();
        assert_eq!(singular.determinant().unwrap(), q(0, 1));
        assert_eq!(singular.inverse(), Err(MatrixError::NotInvertible));
    }

    #[test]
    fn permutation_sends_basis_vectors() {
        // 0 -> 1 -> 2 -> 0
        let p = Matrix::<Rat>::permutation(&[1, 2, 0]);
        assert!(p.get(1, 0).is_one());
        assert!(p.get(2, 1).is_one());
        assert!(p.get(0, 2).is_one());
        assert!((&(&p * &p) * &p).is_identity());
    }

    #[test]
    fn text_round_trip() {
        let m = Matrix::<Rat>::parse("1 -1/2\n0 3\n").unwrap();
        assert_eq!(m.get(0, 1), &q(-1, 2));
        assert_eq!(Matrix::<Rat>::parse(&m.to_string()).unwrap(), m);
        assert!(matches!(Matrix::<Rat>::parse("1 2\n3"), Err(MatrixError::DimensionMismatch(_))));
        assert!(matches!(Matrix::<Rat>::parse("1 x"), Err(MatrixError::Syntax { line: 1, .. })));
        assert!(Matrix::<Rat>::parse("1/0").is_err());
    }
}
