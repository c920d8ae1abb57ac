//! Congruence diagonalization of rational quadratic forms.

use thiserror::Error;

use crate::matrix::Matrix;
use crate::poly::{Monomial, Poly, PolyError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadraticError {
    #[error("form is not a quadratic form in its form variables")]
    NotQuadratic,
    #[error("quadratic form is degenerate")]
    Degenerate,
}

/// Symmetric Gram matrix `G` with `q(u) = uᵀ G u`.
pub fn gram_matrix<S: Scalar>(q: &Poly<S>) -> Result<Matrix<S>, QuadraticError> {
    let space = q.space();
    if space.form_vars().len() != space.len() {
        return Err(QuadraticError::NotQuadratic);
    }
    if q.is_zero() {
        return Err(QuadraticError::Degenerate);
    }
    match q.homogeneous_degree() {
        Ok(2) => {}
        Err(PolyError::ZeroPolynomial) => return Err(QuadraticError::Degenerate),
        _ => return Err(QuadraticError::NotQuadratic),
    }
    let n = space.len();
    let two = S::one() + S::one();
    let mut g = Matrix::zeros(n, n);
    for (m, c) in q.terms() {
        let idx: Vec<usize> = (0..n).filter(|&i| m.exponents()[i] > 0).collect();
        match idx[..] {
            [i] => g.set(i, i, c.clone()),
            [i, j] => {
                let half = c.clone() / two.clone();
                g.set(i, j, half.clone());
                g.set(j, i, half);
            }
            _ => unreachable!("degree-2 monomial"),
        }
    }
    Ok(g)
}

/// Returns `(λ, B)` with `q ∘ B = Σ λ_i v_i²` and every `λ_i ≠ 0`.
///
/// Lagrange's method on the Gram matrix: pick a pivot with nonzero diagonal
/// (swapping, or replacing `e_k` by `e_k + e_j` when every remaining diagonal
/// entry vanishes), then clear its row and column.
pub fn diagonalize_quadratic<S: Scalar>(q: &Poly<S>) -> Result<(Vec<S>, Matrix<S>), QuadraticError> {
    let g = gram_matrix(q)?;
    let n = g.rows();
    let mut b = Matrix::<S>::identity(n);
    let congruent = |b: &Matrix<S>| &(&b.transpose() * &g) * b;
    for k in 0..n {
        let mut m = congruent(&b);
        if m.get(k, k).is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !m.get(j, j).is_zero()) {
                swap_cols(&mut b, k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !m.get(k, j).is_zero()) {
                add_col(&mut b, k, j, &S::one());
            } else {
                return Err(QuadraticError::Degenerate);
            }
            m = congruent(&b);
        }
        let pivot = m.get(k, k).clone();
        for j in k + 1..n {
            let factor = m.get(k, j).clone() / pivot.clone();
            if !factor.is_zero() {
                add_col(&mut b, j, k, &-factor);
            }
        }
    }
    let d = congruent(&b);
    let lambdas: Vec<S> = (0..n).map(|i| d.get(i, i).clone()).collect();
    debug_assert!((0..n).all(|i| (0..n).all(|j| i == j || d.get(i, j).is_zero())));
    Ok((lambdas, b))
}

/// `Σ λ_i v_i²` over the space of `like`.
pub fn diagonal_form<S: Scalar>(lambdas: &[S], like: &Poly<S>) -> Poly<S> {
    let space = like.space();
    let n = space.len();
    Poly::from_terms(
        space,
        lambdas.iter().enumerate().map(|(i, l)| {
            let mut e = vec![0; n];
            e[i] = 2;
            (Monomial::new(e), l.clone())
        }),
    )
}

fn swap_cols<S: Scalar>(b: &mut Matrix<S>, i: usize, j: usize) {
    for r in 0..b.rows() {
        let t = b.get(r, i).clone();
        b.set(r, i, b.get(r, j).clone());
        b.set(r, j, t);
    }
}

/// Column `dst += factor · column src`.
fn add_col<S: Scalar>(b: &mut Matrix<S>, dst: usize, src: usize, factor: &S) {
    for r in 0..b.rows() {
        let v = b.get(r, dst).clone() + factor.clone() * b.get(r, src).clone();
        b.set(r, dst, v);
    }
}
