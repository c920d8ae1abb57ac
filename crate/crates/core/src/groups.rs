//! Finite matrix groups acting on polynomial forms.
//!
//! A group element `g` acts on a polynomial by `(g · p)(u) = p(g⁻¹ u)`, i.e.
//! `act(g, p) = p ∘ g⁻¹`. The orthogonal group of a family of forms is the
//! set of invertible `f` with `q ∘ f = q` for every form `q` in the family.

use std::collections::{HashSet, VecDeque};
use std::hash::Hash;
use std::sync::Arc;

use thiserror::Error;

use crate::matrix::{Matrix, MatrixError};
use crate::poly::{Monomial, Poly, PolyError, VarSpace};
use crate::scalar::Scalar;

/// Default bound on enumerated group orders.
pub const DEFAULT_MAX_ORDER: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("generator {0} is not invertible")]
    NotInvertible(usize),
    #[error("group order exceeds {0}; the group is probably infinite")]
    OrderBoundExceeded(usize),
    #[error("no generators given")]
    NoGenerators,
    #[error("generators have inconsistent dimensions")]
    DimensionMismatch,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("family has no forms")]
    Empty,
    #[error("form {0} is zero")]
    ZeroForm(usize),
    #[error("form {0} is not homogeneous")]
    NonHomogeneous(usize),
    #[error("form {0} lives over a different variable space")]
    SpaceMismatch(usize),
    #[error("forms must use weight-1 form variables only")]
    BadSpace,
}

/// A finite subgroup of `GL_n` with its full element list.
#[derive(Debug, Clone)]
pub struct FiniteMatrixGroup<S> {
    dim: usize,
    generators: Vec<Matrix<S>>,
    elements: Vec<Matrix<S>>,
}

impl<S: Scalar + Eq + Hash> FiniteMatrixGroup<S> {
    /// Breadth-first closure of `generators` under multiplication.
    pub fn closure(generators: Vec<Matrix<S>>, max_order: usize) -> Result<Self, GroupError> {
        let first = generators.first().ok_or(GroupError::NoGenerators)?;
        let dim = first.rows();
        for (i, g) in generators.iter().enumerate() {
            if !g.is_square() || g.rows() != dim {
                return Err(GroupError::DimensionMismatch);
            }
            if g.determinant()?.is_zero() {
                return Err(GroupError::NotInvertible(i));
            }
        }
        let identity = Matrix::identity(dim);
        let mut seen: HashSet<Matrix<S>> = HashSet::new();
        let mut elements = vec![identity.clone()];
        seen.insert(identity.clone());
        let mut queue = VecDeque::from([identity]);
        // For a finite group the monoid generated is already the group, so
        // right-multiplying by generators reaches every element.
        while let Some(h) = queue.pop_front() {
            for g in &generators {
                let next = &h * g;
                if seen.insert(next.clone()) {
                    if elements.len() >= max_order {
                        return Err(GroupError::OrderBoundExceeded(max_order));
                    }
                    elements.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
        Ok(Self { dim, generators, elements })
    }

    pub fn contains(&self, m: &Matrix<S>) -> bool {
        self.elements.contains(m)
    }
}

impl<S: Scalar> FiniteMatrixGroup<S> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Matrix<S>] {
        &self.generators
    }

    pub fn elements(&self) -> &[Matrix<S>] {
        &self.elements
    }

    /// Conjugates every element: `b⁻¹ g b`.
    pub fn conjugate(&self, b: &Matrix<S>) -> Result<Self, GroupError> {
        let b_inv = b.inverse()?;
        let conj = |g: &Matrix<S>| &(&b_inv * g) * b;
        Ok(Self {
            dim: self.dim,
            generators: self.generators.iter().map(conj).collect(),
            elements: self.elements.iter().map(conj).collect(),
        })
    }
}

/// An ordered family of nonzero homogeneous forms over one space of weight-1
/// variables.
#[derive(Debug, Clone, PartialEq)]
pub struct FormFamily<S> {
    forms: Vec<Poly<S>>,
}

impl<S: Scalar> FormFamily<S> {
    pub fn new(forms: Vec<Poly<S>>) -> Result<Self, FamilyError> {
        let first = forms.first().ok_or(FamilyError::Empty)?;
        let space = Arc::clone(first.space());
        if space.variables().iter().any(|v| v.weight != 1 || v.auxiliary) {
            return Err(FamilyError::BadSpace);
        }
        for (i, f) in forms.iter().enumerate() {
            if *f.space() != space {
                return Err(FamilyError::SpaceMismatch(i));
            }
            match f.homogeneous_degree() {
                Ok(_) => {}
                Err(PolyError::ZeroPolynomial) => return Err(FamilyError::ZeroForm(i)),
                Err(_) => return Err(FamilyError::NonHomogeneous(i)),
            }
        }
        Ok(Self { forms })
    }

    pub fn forms(&self) -> &[Poly<S>] {
        &self.forms
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn space(&self) -> &Arc<VarSpace> {
        self.forms[0].space()
    }

    /// Number of variables.
    pub fn nvars(&self) -> usize {
        self.space().len()
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.forms.iter().map(|f| f.homogeneous_degree().expect("forms are homogeneous")).collect()
    }

    /// Applies `q ↦ q ∘ b` to every form.
    pub fn transform(&self, b: &Matrix<S>) -> Result<Self, PolyError> {
        let forms = self.forms.iter().map(|f| f.substitute_linear(b)).collect::<Result<_, _>>()?;
        Ok(Self { forms })
    }

    pub fn into_forms(self) -> Vec<Poly<S>> {
        self.forms
    }
}

/// `g · p = p ∘ g⁻¹`.
pub fn act<S: Scalar>(g: &Matrix<S>, p: &Poly<S>) -> Result<Poly<S>, GroupError> {
    let inv = g.inverse().map_err(|_| GroupError::NotInvertible(0))?;
    Ok(p.substitute_linear(&inv)?)
}

/// Whether `q ∘ f = q` for every form of the family.
///
/// Forms are checked in order of increasing size so that non-members are
/// usually rejected on the cheapest form.
pub fn is_orthogonal<S: Scalar>(f: &Matrix<S>, family: &FormFamily<S>) -> Result<bool, PolyError> {
    let n = family.nvars();
    if f.rows() != n || f.cols() != n {
        return Err(PolyError::DimensionMismatch { expected: n, found: f.rows().max(f.cols()) });
    }
    let mut order: Vec<&Poly<S>> = family.forms().iter().collect();
    order.sort_by_key(|q| (q.total_degree(), q.num_terms()));
    for q in order {
        if q.substitute_linear(f)? != *q {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Unnormalized Reynolds sum `Σ_{g ∈ G} g · p`.
pub fn reynolds<S: Scalar>(group: &FiniteMatrixGroup<S>, p: &Poly<S>) -> Result<Poly<S>, PolyError> {
    // g ranges over the group exactly when g⁻¹ does.
    let mut sum = Poly::zero(p.space());
    for g in group.elements() {
        sum = &sum + &p.substitute_linear(g)?;
    }
    Ok(sum)
}

/// Reynolds averages of every monomial of degree `1..=degree_bound`, keeping
/// the nonzero ones that are pairwise distinct up to a scalar factor.
pub fn invariant_monomials<S: Scalar>(
    group: &FiniteMatrixGroup<S>,
    space: &Arc<VarSpace>,
    degree_bound: u32,
) -> Result<FormFamily<S>, GroupError> {
    let n = group.dim();
    if space.len() != n {
        return Err(GroupError::DimensionMismatch);
    }
    let mut out: Vec<Poly<S>> = Vec::new();
    let mut normalized: Vec<Poly<S>> = Vec::new();
    for degree in 1..=degree_bound {
        for m in Monomial::all_of_degree(n, degree) {
            let avg = reynolds(group, &Poly::from_term(space, m, S::one()))?;
            if avg.is_zero() {
                continue;
            }
            let key = avg.monic();
            if normalized.contains(&key) {
                continue;
            }
            normalized.push(key);
            out.push(avg);
        }
    }
    if out.is_empty() {
        // Only possible when every monomial averages to zero, which cannot
        // happen for degree_bound ≥ 1 and a finite group; keep the error
        // honest anyway.
        return Err(GroupError::Poly(PolyError::ZeroPolynomial));
    }
    Ok(FormFamily::new(out).expect("Reynolds averages of monomials are homogeneous"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, QMatrix, QPoly, Rat};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use num_traits::Zero;

    fn p(text: &str, space: &Arc<VarSpace>) -> QPoly {
        Poly::parse(text, space).unwrap()
    }

    fn sigma3() -> FiniteMatrixGroup<Rat> {
        FiniteMatrixGroup::closure(
            vec![QMatrix::permutation(&[1, 0, 2]), QMatrix::permutation(&[0, 2, 1])],
            DEFAULT_MAX_ORDER,
        )
        .unwrap()
    }

    fn minus_identity(n: usize) -> QMatrix {
        QMatrix::diagonal(&vec![rat(-1, 1); n])
    }

    fn signed_permutations_3() -> Vec<QMatrix> {
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mut out = Vec::new();
        for perm in perms {
            for signs in 0..8u32 {
                let d = QMatrix::diagonal(
                    &(0..3).map(|i| if signs >> i & 1 == 1 { rat(-1, 1) } else { rat(1, 1) }).collect::<Vec<_>>(),
                );
                out.push(&d * &QMatrix::permutation(&perm));
            }
        }
        out
    }

    fn sigma3_family() -> FormFamily<Rat> {
        crate::realizable::symmetric_family(3, None).unwrap().family()
    }

    #[test]
    fn closure_orders() {
        assert_eq!(FiniteMatrixGroup::closure(vec![QMatrix::identity(2)], 10).unwrap().order(), 1);
        assert_eq!(sigma3().order(), 6);
        assert_eq!(FiniteMatrixGroup::closure(vec![minus_identity(2)], 10).unwrap().order(), 2);
    }

    #[test]
    fn closure_errors() {
        let shear = QMatrix::from_rows(vec![vec![rat(1, 1), rat(1, 1)], vec![rat(0, 1), rat(1, 1)]]).unwrap();
        assert_eq!(FiniteMatrixGroup::closure(vec![shear], 50).unwrap_err(), GroupError::OrderBoundExceeded(50));
        let singular = QMatrix::from_rows(vec![vec![rat(1, 1), rat(2, 1)], vec![rat(2, 1), rat(4, 1)]]).unwrap();
        assert_eq!(
            FiniteMatrixGroup::closure(vec![QMatrix::identity(2), singular], 50).unwrap_err(),
            GroupError::NotInvertible(1)
        );
        assert_eq!(FiniteMatrixGroup::<Rat>::closure(vec![], 50).unwrap_err(), GroupError::NoGenerators);
    }

    #[test]
    fn closure_is_closed_under_products_and_inverses() {
        let g = sigma3();
        for a in g.elements() {
            assert!(g.contains(&a.inverse().unwrap()));
            for b in g.elements() {
                assert!(g.contains(&(a * b)));
            }
        }
    }

    #[test]
    fn action_examples() {
        let s = VarSpace::numbered("x", 3);
        let f = p("x1^2*x2 - 3*x3", &s);
        assert_eq!(act(&QMatrix::identity(3), &f).unwrap(), f);
        let e = [p("x1 + x2 + x3", &s), p("x1*x2 + x1*x3 + x2*x3", &s), p("x1*x2*x3", &s)];
        for sigma in sigma3().elements() {
            for ej in &e {
                assert_eq!(&act(sigma, ej).unwrap(), ej);
            }
        }
    }

    #[test]
    fn action_is_a_left_action() {
        let s = VarSpace::numbered("v", 3);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let random_invertible = |rng: &mut ChaCha8Rng| loop {
            let m = QMatrix::from_fn(3, 3, |_, _| rat(rng.gen_range(-3..=3), rng.gen_range(1..=2)));
            if !m.determinant().unwrap().is_zero() {
                return m;
            }
        };
        let f = p("v1^2*v3 - 2*v2*v3^2 + 1/3*v1*v2*v3", &s);
        for _ in 0..10 {
            let g = random_invertible(&mut rng);
            let h = random_invertible(&mut rng);
            let lhs = act(&g, &act(&h, &f).unwrap()).unwrap();
            // direct double substitution: p ∘ h⁻¹ ∘ g⁻¹
            let direct = f
                .substitute_linear(&h.inverse().unwrap())
                .unwrap()
                .substitute_linear(&g.inverse().unwrap())
                .unwrap();
            assert_eq!(lhs, direct);
            assert_eq!(lhs, act(&(&g * &h), &f).unwrap());
        }
    }

    #[test]
    fn orthogonality_examples() {
        let fam = sigma3_family();
        assert!(is_orthogonal(&QMatrix::identity(3), &fam).unwrap());
        for sigma in sigma3().elements() {
            assert!(is_orthogonal(sigma, &fam).unwrap());
        }
        let signed = QMatrix::diagonal(&[rat(-1, 1), rat(1, 1), rat(1, 1)]);
        assert!(!is_orthogonal(&signed, &fam).unwrap());
        assert!(is_orthogonal(&QMatrix::identity(2), &fam).is_err());
    }

    #[test]
    fn brute_force_stabilizer_of_symmetric_family() {
        let fam = sigma3_family();
        let passing: Vec<QMatrix> =
            signed_permutations_3().into_iter().filter(|m| is_orthogonal(m, &fam).unwrap()).collect();
        assert_eq!(passing.len(), 6);
        let g = sigma3();
        assert!(passing.iter().all(|m| g.contains(m)));
    }

    #[test]
    fn orthogonal_group_is_closed() {
        // O({v1^2 + v2^2}) contains rotations by quarter turns and reflections.
        let s = VarSpace::numbered("v", 2);
        let fam = FormFamily::new(vec![p("v1^2 + v2^2", &s)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let members: Vec<QMatrix> = (0..40)
            .map(|_| {
                // rational points of O(2) via the Cayley parametrization
                let t = rat(rng.gen_range(-5..=5), rng.gen_range(1..=5));
                let one = rat(1, 1);
                let den = &one + &t * &t;
                let c = (&one - &t * &t) / &den;
                let s = (rat(2, 1) * &t) / &den;
                let rot = QMatrix::from_rows(vec![vec![c.clone(), -s.clone()], vec![s, c]]).unwrap();
                if rng.gen_bool(0.5) { &rot * &QMatrix::diagonal(&[rat(1, 1), rat(-1, 1)]) } else { rot }
            })
            .collect();
        for a in &members {
            assert!(is_orthogonal(a, &fam).unwrap());
            assert!(is_orthogonal(&a.inverse().unwrap(), &fam).unwrap());
            for b in members.iter().take(5) {
                assert!(is_orthogonal(&(a * b), &fam).unwrap());
            }
        }
    }

    #[test]
    fn reynolds_examples() {
        let s = VarSpace::numbered("x", 3);
        let trivial = FiniteMatrixGroup::closure(vec![QMatrix::identity(3)], 10).unwrap();
        let f = p("x1^3 - x2", &s);
        assert_eq!(reynolds(&trivial, &f).unwrap(), f);
        assert_eq!(
            reynolds(&sigma3(), &p("x1^2 + x2^2 + x3^2", &s)).unwrap(),
            p("6*x1^2 + 6*x2^2 + 6*x3^2", &s)
        );
        let c2 = FiniteMatrixGroup::closure(vec![minus_identity(2)], 10).unwrap();
        let v = VarSpace::numbered("v", 2);
        assert!(reynolds(&c2, &p("v1", &v)).unwrap().is_zero());
    }

    #[test]
    fn invariant_monomial_examples() {
        let v1 = VarSpace::numbered("v", 1);
        let trivial = FiniteMatrixGroup::closure(vec![QMatrix::identity(1)], 10).unwrap();
        let inv = invariant_monomials(&trivial, &v1, 2).unwrap();
        assert_eq!(inv.forms(), &[p("v1", &v1), p("v1^2", &v1)]);

        // hand averages: v1, v2 -> 0; v1^2 -> 2v1^2; v1v2 -> 2v1v2; v2^2 -> 2v2^2
        let v2 = VarSpace::numbered("v", 2);
        let c2 = FiniteMatrixGroup::closure(vec![minus_identity(2)], 10).unwrap();
        let inv = invariant_monomials(&c2, &v2, 2).unwrap();
        let monic: Vec<QPoly> = inv.forms().iter().map(QPoly::monic).collect();
        assert_eq!(monic, vec![p("v1^2", &v2), p("v1*v2", &v2), p("v2^2", &v2)]);

        // Σ2: x1 -> e1, x1^2 -> x1^2 + x2^2, x1x2 -> 2 e2
        let x = VarSpace::numbered("x", 2);
        let s2 = FiniteMatrixGroup::closure(vec![QMatrix::permutation(&[1, 0])], 10).unwrap();
        let inv = invariant_monomials(&s2, &x, 2).unwrap();
        assert_eq!(inv.forms(), &[p("x1 + x2", &x), p("x1^2 + x2^2", &x), p("2*x1*x2", &x)]);
        let e1_sq = p("x1 + x2", &x).pow(2);
        assert_eq!(e1_sq, &inv.forms()[1] + &inv.forms()[2]);
    }

    #[test]
    fn invariant_monomials_are_invariant() {
        let s = VarSpace::numbered("x", 3);
        let g = sigma3();
        let inv = invariant_monomials(&g, &s, 4).unwrap();
        for f in inv.forms() {
            for h in g.elements() {
                assert_eq!(&act(h, f).unwrap(), f);
            }
        }
        // partitions of 1..4 into at most 3 parts: 1 + 2 + 3 + 4
        assert_eq!(inv.len(), 10);
    }
}
