//! Free graded-commutative algebras, differentials and morphisms.
//!
//! An element is a finite sum of monomials over an ordered generator set.
//! A monomial is stored as an exponent vector; the element it denotes is the
//! product of its generators in index order, so odd generators appear at
//! most once and the Koszul sign of any product is absorbed into the
//! coefficient when the product is normalized.

mod text;

pub use text::{parse_cdga, parse_cdga_unchecked, parse_morphism, write_cdga, write_morphism, CdgaFile};

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CdgaError {
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("invalid generator: {0}")]
    BadGenerator(String),
    #[error("d({generator}) has a term of degree {found}, expected {expected}")]
    DegreeMismatch { generator: String, expected: u64, found: u64 },
    #[error("{generator} is sent to an element of degree {found}, expected {expected}")]
    NotDegreePreserving { generator: String, expected: u64, found: u64 },
    #[error("expected {expected} generator images, found {found}")]
    WrongArity { expected: usize, found: usize },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: u64,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u64) -> Self {
        Self { name: name.into(), degree }
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

/// Ordered generators of a free graded-commutative algebra, all of degree at
/// least two.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorSet {
    gens: Vec<Generator>,
}

impl GeneratorSet {
    pub fn new(gens: Vec<Generator>) -> Result<Arc<Self>, CdgaError> {
        for (i, g) in gens.iter().enumerate() {
            if g.degree < 2 {
                return Err(CdgaError::BadGenerator(format!("`{}` has degree {} < 2", g.name, g.degree)));
            }
            if g.name.is_empty() || gens[..i].iter().any(|h| h.name == g.name) {
                return Err(CdgaError::BadGenerator(format!("duplicate or empty name `{}`", g.name)));
            }
        }
        Ok(Arc::new(Self { gens }))
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn get(&self, i: usize) -> &Generator {
        &self.gens[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Generator> {
        self.gens.iter()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn degree(&self, i: usize) -> u64 {
        self.gens[i].degree
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.gens[i].is_odd()
    }
}

/// Exponent vector; odd generators have exponent 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GcaMonomial(Vec<u32>);

impl GcaMonomial {
    pub fn one(ngens: usize) -> Self {
        Self(vec![0; ngens])
    }

    pub fn generator(ngens: usize, i: usize) -> Self {
        let mut e = vec![0; ngens];
        e[i] = 1;
        Self(e)
    }

    /// `None` if an odd generator is repeated.
    pub fn new(exponents: Vec<u32>, gens: &GeneratorSet) -> Option<Self> {
        assert_eq!(exponents.len(), gens.len(), "exponent vector length");
        if exponents.iter().enumerate().any(|(i, &e)| e > 1 && gens.is_odd(i)) {
            return None;
        }
        Some(Self(exponents))
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self, gens: &GeneratorSet) -> u64 {
        self.0.iter().enumerate().map(|(i, &e)| u64::from(e) * gens.degree(i)).sum()
    }

    /// Number of generator factors counted with multiplicity.
    pub fn word_length(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Indices of odd generators present, increasing.
    pub fn odd_word(&self, gens: &GeneratorSet) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] > 0 && gens.is_odd(i)).collect()
    }

    /// Normalized product with its Koszul sign (`true` for `−1`), or `None`
    /// when an odd generator would repeat.
    pub fn mul(&self, other: &Self, gens: &GeneratorSet) -> Option<(Self, bool)> {
        let mut negative = false;
        let mut odd_in_self_after = 0u32;
        // count pairs (i in self, j in other) of odd generators with i > j,
        // scanning from the top index down
        for j in (0..self.0.len()).rev() {
            if !gens.is_odd(j) {
                continue;
            }
            if other.0[j] > 0 {
                if self.0[j] > 0 {
                    return None;
                }
                negative ^= odd_in_self_after % 2 == 1;
            }
            if self.0[j] > 0 {
                odd_in_self_after += 1;
            }
        }
        let e = self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect();
        Some((Self(e), negative))
    }
}

/// An element of a free graded-commutative algebra.
#[derive(Clone, PartialEq, Eq)]
pub struct GcaElement<S: Scalar> {
    gens: Arc<GeneratorSet>,
    terms: BTreeMap<GcaMonomial, S>,
}

impl<S: Scalar> GcaElement<S> {
    pub fn zero(gens: &Arc<GeneratorSet>) -> Self {
        Self { gens: Arc::clone(gens), terms: BTreeMap::new() }
    }

    pub fn constant(gens: &Arc<GeneratorSet>, c: S) -> Self {
        Self::from_term(gens, GcaMonomial::one(gens.len()), c)
    }

    pub fn one(gens: &Arc<GeneratorSet>) -> Self {
        Self::constant(gens, S::one())
    }

    pub fn generator(gens: &Arc<GeneratorSet>, i: usize) -> Self {
        Self::from_term(gens, GcaMonomial::generator(gens.len(), i), S::one())
    }

    pub fn generator_named(gens: &Arc<GeneratorSet>, name: &str) -> Result<Self, CdgaError> {
        let i = gens.index_of(name).ok_or_else(|| CdgaError::UnknownGenerator(name.into()))?;
        Ok(Self::generator(gens, i))
    }

    pub fn from_term(gens: &Arc<GeneratorSet>, m: GcaMonomial, c: S) -> Self {
        let mut out = Self::zero(gens);
        out.add_term(m, c);
        out
    }

    /// Sums the given terms, which must already be normal monomials.
    pub fn from_terms(gens: &Arc<GeneratorSet>, terms: impl IntoIterator<Item = (GcaMonomial, S)>) -> Self {
        let mut out = Self::zero(gens);
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, m: GcaMonomial, c: S) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.0.len(), self.gens.len());
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn gens(&self) -> &Arc<GeneratorSet> {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&GcaMonomial, &S)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &GcaMonomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    /// Common degree of all terms; `None` for zero or mixed degrees.
    pub fn homogeneous_degree(&self) -> Option<u64> {
        let mut degs = self.terms.keys().map(|m| m.degree(&self.gens));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Whether every term has degree `deg` (true for zero).
    pub fn is_homogeneous_of(&self, deg: u64) -> bool {
        self.terms.keys().all(|m| m.degree(&self.gens) == deg)
    }

    fn same_algebra(&self, other: &Self) -> Result<(), CdgaError> {
        if Arc::ptr_eq(&self.gens, &other.gens) || self.gens == other.gens {
            Ok(())
        } else {
            Err(CdgaError::AlgebraMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, CdgaError> {
        self.same_algebra(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, CdgaError> {
        self.same_algebra(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    /// Graded-commutative product.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, CdgaError> {
        self.same_algebra(other)?;
        let mut acc: HashMap<GcaMonomial, S> = HashMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let Some((m, negative)) = a.mul(b, &self.gens) else { continue };
                let c = ca.clone() * cb.clone();
                let c = if negative { -c } else { c };
                let slot = acc.entry(m).or_insert_with(S::zero);
                *slot = slot.clone() + c;
            }
        }
        Ok(Self::from_terms(&self.gens, acc))
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_terms(&self.gens, self.terms.iter().map(|(m, x)| (m.clone(), x.clone() * c.clone())))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(&self.gens);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        out
    }

    /// Terms whose monomial satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&GcaMonomial) -> bool) -> Self {
        Self::from_terms(&self.gens, self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())))
    }
}

impl<S: Scalar> fmt::Debug for GcaElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GcaElement({self})")
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<S: Scalar> $trait for &GcaElement<S> {
            type Output = GcaElement<S>;

            fn $method(self, rhs: Self) -> GcaElement<S> {
                self.$checked(rhs).expect("operands must belong to one algebra")
            }
        }

        impl<S: Scalar> $trait for GcaElement<S> {
            type Output = GcaElement<S>;

            fn $method(self, rhs: Self) -> GcaElement<S> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl<S: Scalar> Neg for &GcaElement<S> {
    type Output = GcaElement<S>;

    fn neg(self) -> GcaElement<S> {
        self.scale(&-S::one())
    }
}

impl<S: Scalar> Neg for GcaElement<S> {
    type Output = GcaElement<S>;

    fn neg(self) -> GcaElement<S> {
        -&self
    }
}

/// A failed identity: the generator where it fails and the nonzero residue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample<S: Scalar> {
    pub generator: String,
    pub residue: GcaElement<S>,
}

impl<S: Scalar> fmt::Display for Counterexample<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: residue with {} terms", self.generator, self.residue.num_terms())
    }
}

/// A term of `d(generator)` whose degree is not `|generator| + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeDefect {
    pub generator: String,
    pub expected: u64,
    pub found: u64,
}

/// A free graded-commutative algebra with a differential given on
/// generators.
#[derive(Clone, PartialEq, Eq)]
pub struct Cdga<S: Scalar> {
    gens: Arc<GeneratorSet>,
    differential: Vec<GcaElement<S>>,
}

impl<S: Scalar> fmt::Debug for Cdga<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Cdga").field("generators", &self.gens.len()).finish()
    }
}

impl<S: Scalar> Cdga<S> {
    /// Requires every term of `d(g)` to have degree `|g| + 1`.
    pub fn new(gens: Arc<GeneratorSet>, differential: Vec<GcaElement<S>>) -> Result<Self, CdgaError> {
        let out = Self::new_unchecked(gens, differential)?;
        if let Some(defect) = out.degree_audit().into_iter().next() {
            return Err(CdgaError::DegreeMismatch {
                generator: defect.generator,
                expected: defect.expected,
                found: defect.found,
            });
        }
        Ok(out)
    }

    /// Skips the degree check; used to study corrupted differentials.
    pub fn new_unchecked(gens: Arc<GeneratorSet>, differential: Vec<GcaElement<S>>) -> Result<Self, CdgaError> {
        if differential.len() != gens.len() {
            return Err(CdgaError::WrongArity { expected: gens.len(), found: differential.len() });
        }
        if differential.iter().any(|e| *e.gens != *gens) {
            return Err(CdgaError::AlgebraMismatch);
        }
        let differential = differential.into_iter().map(|e| GcaElement { gens: Arc::clone(&gens), terms: e.terms }).collect();
        Ok(Self { gens, differential })
    }

    /// All generators closed.
    pub fn trivial(gens: Arc<GeneratorSet>) -> Self {
        let differential = (0..gens.len()).map(|_| GcaElement::zero(&gens)).collect();
        Self { gens, differential }
    }

    pub fn gens(&self) -> &Arc<GeneratorSet> {
        &self.gens
    }

    /// `d` on generator `i`.
    pub fn d_gen(&self, i: usize) -> &GcaElement<S> {
        &self.differential[i]
    }

    pub fn element(&self, text: &str) -> Result<GcaElement<S>, CdgaError> {
        GcaElement::parse(text, &self.gens)
    }

    /// Extends the differential as a degree +1 derivation.
    pub fn d(&self, e: &GcaElement<S>) -> GcaElement<S> {
        let mut acc: HashMap<GcaMonomial, S> = HashMap::new();
        for (m, c) in &e.terms {
            self.d_monomial_into(m, c, &mut acc);
        }
        GcaElement::from_terms(&self.gens, acc)
    }

    pub fn checked_d(&self, e: &GcaElement<S>) -> Result<GcaElement<S>, CdgaError> {
        e.same_algebra(&GcaElement::zero(&self.gens))?;
        Ok(self.d(e))
    }

    fn d_monomial_into(&self, m: &GcaMonomial, c: &S, acc: &mut HashMap<GcaMonomial, S>) {
        let n = self.gens.len();
        let mut odd_before = 0u32;
        for i in 0..n {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let dg = &self.differential[i];
            if !dg.is_zero() {
                // prefix · d(g^e) · suffix; with g even, d(g^e) = e g^{e-1} dg
                let mut prefix = m.0.clone();
                prefix[i..].iter_mut().for_each(|x| *x = 0);
                let mut suffix = m.0.clone();
                suffix[..=i].iter_mut().for_each(|x| *x = 0);
                let mut mid = vec![0; n];
                mid[i] = e - 1;
                let (prefix, suffix, mid) = (GcaMonomial(prefix), GcaMonomial(suffix), GcaMonomial(mid));
                let mut coeff = c.clone() * S::from_int(i64::from(e));
                if odd_before % 2 == 1 {
                    coeff = -coeff;
                }
                for (t, tc) in &dg.terms {
                    let Some((a, s1)) = mid.mul(t, &self.gens) else { continue };
                    let Some((b, s2)) = prefix.mul(&a, &self.gens) else { continue };
                    let Some((r, s3)) = b.mul(&suffix, &self.gens) else { continue };
                    let mut v = coeff.clone() * tc.clone();
                    if s1 ^ s2 ^ s3 {
                        v = -v;
                    }
                    let slot = acc.entry(r).or_insert_with(S::zero);
                    *slot = slot.clone() + v;
                }
            }
            if self.gens.is_odd(i) {
                odd_before += e;
            }
        }
    }

    /// Terms of `d(g)` whose degree is not `|g| + 1`.
    pub fn degree_audit(&self) -> Vec<DegreeDefect> {
        let mut out = Vec::new();
        for (i, g) in self.gens.iter().enumerate() {
            let expected = g.degree + 1;
            for m in self.differential[i].terms.keys() {
                let found = m.degree(&self.gens);
                if found != expected {
                    out.push(DegreeDefect { generator: g.name.clone(), expected, found });
                }
            }
        }
        out
    }

    /// `d(d(g)) = 0` for every generator, or the first failure.
    pub fn check_d_squared(&self) -> Result<(), Counterexample<S>> {
        for (i, g) in self.gens.iter().enumerate() {
            let dd = self.d(&self.differential[i]);
            if !dd.is_zero() {
                return Err(Counterexample { generator: g.name.clone(), residue: dd });
            }
        }
        Ok(())
    }

    /// Every `d(g)` is a sum of words of length at least two.
    pub fn is_minimal(&self) -> bool {
        self.differential.iter().all(|dg| dg.terms.keys().all(|m| m.word_length() >= 2))
    }
}

/// An algebra map given by generator images.
#[derive(Clone, Debug)]
pub struct DgaMorphism<S: Scalar> {
    source: Arc<Cdga<S>>,
    target: Arc<Cdga<S>>,
    images: Vec<GcaElement<S>>,
}

impl<S: Scalar> DgaMorphism<S> {
    /// Requires each image to live in `target` with the generator's degree.
    pub fn new(source: Arc<Cdga<S>>, target: Arc<Cdga<S>>, images: Vec<GcaElement<S>>) -> Result<Self, CdgaError> {
        if images.len() != source.gens.len() {
            return Err(CdgaError::WrongArity { expected: source.gens.len(), found: images.len() });
        }
        for (g, img) in source.gens.iter().zip(&images) {
            if *img.gens != *target.gens {
                return Err(CdgaError::AlgebraMismatch);
            }
            if let Some(m) = img.terms.keys().find(|m| m.degree(&target.gens) != g.degree) {
                return Err(CdgaError::NotDegreePreserving {
                    generator: g.name.clone(),
                    expected: g.degree,
                    found: m.degree(&target.gens),
                });
            }
        }
        let images = images.into_iter().map(|e| GcaElement { gens: Arc::clone(&target.gens), terms: e.terms }).collect();
        Ok(Self { source, target, images })
    }

    pub fn identity(a: Arc<Cdga<S>>) -> Self {
        let images = (0..a.gens.len()).map(|i| GcaElement::generator(&a.gens, i)).collect();
        Self { source: Arc::clone(&a), target: a, images }
    }

    pub fn source(&self) -> &Arc<Cdga<S>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Cdga<S>> {
        &self.target
    }

    pub fn image(&self, i: usize) -> &GcaElement<S> {
        &self.images[i]
    }

    pub fn images(&self) -> &[GcaElement<S>] {
        &self.images
    }

    /// Multiplicative extension.
    pub fn apply(&self, e: &GcaElement<S>) -> GcaElement<S> {
        // powers of generator images, local to this call
        let mut powers: HashMap<(usize, u32), GcaElement<S>> = HashMap::new();
        let mut out = GcaElement::zero(&self.target.gens);
        for (m, c) in &e.terms {
            let mut term = GcaElement::constant(&self.target.gens, c.clone());
            for (i, &k) in m.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let pw = powers.entry((i, k)).or_insert_with(|| self.images[i].pow(k));
                term = &term * pw;
                if term.is_zero() {
                    break;
                }
            }
            for (tm, tc) in term.terms {
                out.add_term(tm, tc);
            }
        }
        out
    }

    /// `f(d g) = d(f g)` on every generator, or the first failure.
    pub fn is_chain_map(&self) -> Result<(), Counterexample<S>> {
        for (i, g) in self.source.gens.iter().enumerate() {
            let lhs = self.apply(self.source.d_gen(i));
            let rhs = self.target.d(&self.images[i]);
            let residue = &lhs - &rhs;
            if !residue.is_zero() {
                return Err(Counterexample { generator: g.name.clone(), residue });
            }
        }
        Ok(())
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Self) -> Result<Self, CdgaError> {
        if *first.target != *self.source {
            return Err(CdgaError::AlgebraMismatch);
        }
        let images = first.images.iter().map(|e| self.apply(&GcaElement { gens: Arc::clone(&self.source.gens), terms: e.terms.clone() })).collect();
        Ok(Self { source: Arc::clone(&first.source), target: Arc::clone(&self.target), images })
    }

    /// Same images on every generator.
    pub fn same_as(&self, other: &Self) -> bool {
        self.images == other.images
    }
}

#[cfg(test)]
mod tests;
