//! Sparse multivariate polynomials with exact coefficients.
//!
//! A [`Poly`] is a finite map from [`Monomial`] to nonzero coefficients over a
//! shared [`VarSpace`]. Terms are kept in graded-lexicographic order, so two
//! polynomials are equal exactly when their term maps are equal.

mod text;

pub(crate) use text::{parse_sum, write_term};

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials live over different variable spaces")]
    VarSpaceMismatch,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("polynomial is not homogeneous")]
    NonHomogeneous,
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown variable `{name}` at byte {position}")]
    UnknownVariable { name: String, position: usize },
    #[error("invalid variable space: {0}")]
    InvalidSpace(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub weight: u64,
    /// Auxiliary variables are left fixed by linear substitutions.
    pub auxiliary: bool,
}

impl Variable {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), weight: 1, auxiliary: false }
    }

    pub fn weighted(name: impl Into<String>, weight: u64) -> Self {
        Self { name: name.into(), weight, auxiliary: false }
    }

    pub fn auxiliary(mut self) -> Self {
        self.auxiliary = true;
        self
    }
}

/// Ordered, named, weighted variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarSpace {
    vars: Vec<Variable>,
    form_vars: Vec<usize>,
}

impl VarSpace {
    pub fn from_variables(vars: Vec<Variable>) -> Result<Arc<Self>, PolyError> {
        for (i, v) in vars.iter().enumerate() {
            if v.weight == 0 {
                return Err(PolyError::InvalidSpace(format!("variable `{}` has weight 0", v.name)));
            }
            if vars[..i].iter().any(|w| w.name == v.name) {
                return Err(PolyError::InvalidSpace(format!("duplicate variable `{}`", v.name)));
            }
        }
        let form_vars = (0..vars.len()).filter(|&i| !vars[i].auxiliary).collect();
        Ok(Arc::new(Self { vars, form_vars }))
    }

    /// Weight-1 form variables with the given names.
    pub fn new<I, T>(names: I) -> Result<Arc<Self>, PolyError>
    where
        I: IntoIterator<Item = T>,
        T: Into<String>,
    {
        Self::from_variables(names.into_iter().map(Variable::new).collect())
    }

    /// `prefix1, ..., prefixN`.
    pub fn numbered(prefix: &str, n: usize) -> Arc<Self> {
        Self::new((1..=n).map(|i| format!("{prefix}{i}"))).expect("numbered names are distinct")
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn name(&self, i: usize) -> &str {
        &self.vars[i].name
    }

    pub fn weight(&self, i: usize) -> u64 {
        self.vars[i].weight
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    /// Indices of the non-auxiliary variables, in order.
    pub fn form_vars(&self) -> &[usize] {
        &self.form_vars
    }
}

/// Exponent vector aligned with a [`VarSpace`].
///
/// Ordered graded-lexicographically: total degree first, then exponents
/// compared left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Self(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn weighted_degree(&self, space: &VarSpace) -> u64 {
        self.0.iter().enumerate().map(|(i, &e)| u64::from(e) * space.weight(i)).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Every exponent vector of length `nvars` with total degree `degree`,
    /// in decreasing lexicographic order.
    pub fn all_of_degree(nvars: usize, degree: u32) -> Vec<Self> {
        fn rec(rest: usize, degree: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if rest == 1 {
                prefix.push(degree);
                out.push(Monomial(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in (0..=degree).rev() {
                prefix.push(e);
                rec(rest - 1, degree - e, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if degree == 0 {
                out.push(Monomial(Vec::new()));
            }
            return out;
        }
        rec(nvars, degree, &mut Vec::with_capacity(nvars), &mut out);
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        other.divides(self).then(|| Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S> {
    space: Arc<VarSpace>,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> Poly<S> {
    pub fn zero(space: &Arc<VarSpace>) -> Self {
        Self { space: Arc::clone(space), terms: BTreeMap::new() }
    }

    pub fn constant(space: &Arc<VarSpace>, c: S) -> Self {
        Self::from_term(space, Monomial::one(space.len()), c)
    }

    pub fn one(space: &Arc<VarSpace>) -> Self {
        Self::constant(space, S::one())
    }

    pub fn var(space: &Arc<VarSpace>, i: usize) -> Self {
        Self::from_term(space, Monomial::var(space.len(), i), S::one())
    }

    pub fn var_named(space: &Arc<VarSpace>, name: &str) -> Result<Self, PolyError> {
        let i = space
            .index_of(name)
            .ok_or_else(|| PolyError::UnknownVariable { name: name.to_string(), position: 0 })?;
        Ok(Self::var(space, i))
    }

    pub fn from_term(space: &Arc<VarSpace>, m: Monomial, c: S) -> Self {
        assert_eq!(m.0.len(), space.len(), "monomial length must match the variable space");
        let mut p = Self::zero(space);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Sums repeated monomials and drops zeros.
    pub fn from_terms(space: &Arc<VarSpace>, terms: impl IntoIterator<Item = (Monomial, S)>) -> Self {
        let mut p = Self::zero(space);
        for (m, c) in terms {
            assert_eq!(m.0.len(), space.len(), "monomial length must match the variable space");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn space(&self) -> &Arc<VarSpace> {
        &self.space
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &S)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    /// The greatest term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &S)> {
        self.terms.iter().next_back()
    }

    fn same_space(&self, other: &Self) -> Result<(), PolyError> {
        if Arc::ptr_eq(&self.space, &other.space) || self.space == other.space {
            Ok(())
        } else {
            Err(PolyError::VarSpaceMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.same_space(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.same_space(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.same_space(other)?;
        let mut acc: HashMap<Monomial, S> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let prod = ca.clone() * cb.clone();
                acc.entry(ma.mul(mb))
                    .and_modify(|c| *c = c.clone() + prod.clone())
                    .or_insert(prod);
            }
        }
        Ok(Self {
            space: Arc::clone(&self.space),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(&self.space);
        }
        Self {
            space: Arc::clone(&self.space),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a.clone() * c.clone())).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Self {
            space: Arc::clone(&self.space),
            terms: self.terms.iter().map(|(n, c)| (n.mul(m), c.clone())).collect(),
        }
    }

    /// `self^s` by repeated squaring; `p^0 = 1`.
    pub fn pow(&self, s: u32) -> Self {
        let mut result = Self::one(&self.space);
        let mut base = self.clone();
        let mut e = s;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Common weighted degree of all terms.
    pub fn weighted_degree(&self) -> Result<u64, PolyError> {
        let mut degs = self.terms.keys().map(|m| m.weighted_degree(&self.space));
        let first = degs.next().ok_or(PolyError::ZeroPolynomial)?;
        if degs.all(|d| d == first) { Ok(first) } else { Err(PolyError::NonHomogeneous) }
    }

    /// Common plain (unweighted) degree of all terms.
    pub fn homogeneous_degree(&self) -> Result<u64, PolyError> {
        let mut degs = self.terms.keys().map(Monomial::degree);
        let first = degs.next().ok_or(PolyError::ZeroPolynomial)?;
        if degs.all(|d| d == first) { Ok(first) } else { Err(PolyError::NonHomogeneous) }
    }

    /// Largest plain degree of any term, `None` for zero.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Substitutes variable `i` by `images[i]`, which all live in `target`.
    pub fn substitute(&self, target: &Arc<VarSpace>, images: &[Self]) -> Result<Self, PolyError> {
        if images.len() != self.space.len() {
            return Err(PolyError::DimensionMismatch { expected: self.space.len(), found: images.len() });
        }
        if images.iter().any(|p| p.space != *target) {
            return Err(PolyError::VarSpaceMismatch);
        }
        let mut powers: HashMap<(usize, u32), Self> = HashMap::new();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut term = Self::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = powers.entry((i, e)).or_insert_with(|| images[i].pow(e));
                term = &term * pw;
                if term.is_zero() {
                    break;
                }
            }
            for (tm, tc) in term.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }

    /// `q ∘ A`: each form variable `v_i` becomes `Σ_j A[i][j] v_j`, so that
    /// `(q ∘ A)(u) = q(A u)`. Auxiliary variables stay fixed.
    pub fn substitute_linear(&self, a: &Matrix<S>) -> Result<Self, PolyError> {
        let form = self.space.form_vars();
        let n = form.len();
        if a.rows() != n || a.cols() != n {
            return Err(PolyError::DimensionMismatch { expected: n, found: a.rows().max(a.cols()) });
        }
        let nv = self.space.len();
        let mut images: Vec<Self> = (0..nv).map(|i| Self::var(&self.space, i)).collect();
        for (row, &vi) in form.iter().enumerate() {
            images[vi] = Self::from_terms(
                &self.space,
                form.iter().enumerate().map(|(col, &vj)| (Monomial::var(nv, vj), a.get(row, col).clone())),
            );
        }
        let space = Arc::clone(&self.space);
        self.substitute(&space, &images)
    }

    /// Reinterprets the exponent vectors over another space of equal size.
    pub fn rename_space(&self, space: &Arc<VarSpace>) -> Result<Self, PolyError> {
        if space.len() != self.space.len() {
            return Err(PolyError::DimensionMismatch { expected: self.space.len(), found: space.len() });
        }
        Ok(Self { space: Arc::clone(space), terms: self.terms.clone() })
    }

    /// Divides every term by `m`; `None` if some term is not divisible.
    pub fn div_monomial(&self, m: &Monomial) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (n, c) in &self.terms {
            terms.insert(n.checked_div(m)?, c.clone());
        }
        Some(Self { space: Arc::clone(&self.space), terms })
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder.
    pub fn checked_div(&self, divisor: &Self) -> Result<Option<Self>, PolyError> {
        self.same_space(divisor)?;
        let (lm, lc) = match divisor.leading_term() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(PolyError::ZeroPolynomial),
        };
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.space);
        while let Some((m, c)) = rem.leading_term() {
            let Some(qm) = m.checked_div(&lm) else {
                return Ok(None);
            };
            let qc = c.clone() / lc.clone();
            let step = Self::from_term(&self.space, qm, qc);
            rem = &rem - &(&step * divisor);
            quot = &quot + &step;
        }
        Ok(Some(quot))
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            Some((_, c)) => self.scale(&(S::one() / c.clone())),
            None => self.clone(),
        }
    }

    pub fn parse(text: &str, space: &Arc<VarSpace>) -> Result<Self, PolyError> {
        let mut out = Self::zero(space);
        for raw in parse_sum::<S>(text)? {
            let mut m = Monomial::one(space.len());
            for (name, exp, position) in raw.factors {
                let i = space.index_of(&name).ok_or(PolyError::UnknownVariable { name, position })?;
                m.0[i] += exp;
            }
            out.add_term(m, raw.coeff);
        }
        Ok(out)
    }
}

impl<S: Scalar> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let factors = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| (self.space.name(i), e));
            write_term(f, k == 0, c, factors)?;
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<S: Scalar> $trait for &Poly<S> {
            type Output = Poly<S>;

            fn $method(self, rhs: Self) -> Poly<S> {
                self.$checked(rhs).expect("operands must share a variable space")
            }
        }

        impl<S: Scalar> $trait for Poly<S> {
            type Output = Poly<S>;

            fn $method(self, rhs: Self) -> Poly<S> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl<S: Scalar> Neg for &Poly<S> {
    type Output = Poly<S>;

    fn neg(self) -> Poly<S> {
        self.scale(&-S::one())
    }
}

impl<S: Scalar> Neg for Poly<S> {
    type Output = Poly<S>;

    fn neg(self) -> Poly<S> {
        -&self
    }
}
