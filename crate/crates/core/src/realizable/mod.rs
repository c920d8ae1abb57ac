//! Realizable form families.
//!
//! A family `{q_0, ..., q_{r+1}}` of forms in `n` variables is
//! *pre-realizable* when
//!
//! 1. `q_{r+1} = q_0^s` with `s ≥ max(n, ⌈deg q_r / deg q_0⌉ + 1)`, and
//! 2. `deg q_{i+1} − deg q_i > 1` for `i = 0..=r`;
//!
//! it is *realizable* when moreover
//!
//! 3. `q_0 = λ_1 v_1^d + ... + λ_n v_n^d` with `d > 1` and every `λ_i ≠ 0`.

mod text;

pub use text::{parse_family, write_family, FamilyFile};

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::groups::{self, FamilyError, GroupError};
use crate::matrix::Matrix;
use crate::poly::{Monomial, PolyError, VarSpace};
use crate::quadratic::{self, QuadraticError};
use crate::{rat, QFormFamily, QMatrix, QMatrixGroup, QPoly, Rat};

/// The first violated condition of a family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Fewer than two forms.
    TooShort,
    /// Condition (1): the last form is not a power of `q_0`.
    NotAPower,
    /// Condition (1): the exponent is below the bound.
    ExponentTooSmall { s: u32, bound: u32 },
    /// Condition (2) fails between forms `index` and `index + 1`.
    Condition2 { index: usize, gap: i64 },
    /// Condition (3): `deg q_0 ≤ 1`.
    DegreeTooSmall { d: u64 },
    /// Condition (3): `q_0` has a mixed monomial or misses a variable.
    NotDiagonal,
}

impl Violation {
    /// Number of the violated condition.
    pub fn condition(&self) -> u8 {
        match self {
            Self::TooShort | Self::NotAPower | Self::ExponentTooSmall { .. } => 1,
            Self::Condition2 { .. } => 2,
            Self::DegreeTooSmall { .. } | Self::NotDiagonal => 3,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::TooShort => write!(f, "condition (1): a family needs at least two forms"),
            Self::NotAPower => write!(f, "condition (1): last form is not a power of q0"),
            Self::ExponentTooSmall { s, bound } => write!(f, "condition (1): s = {s} is below the bound {bound}"),
            Self::Condition2 { index, gap } => {
                write!(f, "condition (2): deg q{} - deg q{index} = {gap} is not > 1", index + 1)
            }
            Self::DegreeTooSmall { d } => write!(f, "condition (3): deg q0 = {d} is not > 1"),
            Self::NotDiagonal => write!(f, "condition (3): q0 is not diagonal with nonzero coefficients"),
        }
    }
}

/// Data certifying the conditions that hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub s: u32,
    pub d: u64,
    /// Coefficients of `q_0`, present when condition (3) holds.
    pub lambdas: Option<Vec<Rat>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizableError {
    #[error("deg p0 = {0} is below 2")]
    DegreeTooSmall(u64),
    #[error("s = {s} is below the bound {bound}")]
    BadS { s: u32, bound: u32 },
    #[error("n = {0} is too small; need n >= 2")]
    BadN(usize),
    #[error("family is not pre-realizable: {0}")]
    NotPrerealizable(Violation),
    #[error("family is not realizable: {0}")]
    NotRealizable(Violation),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Quadratic(#[from] QuadraticError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl fmt::Display for RealizableFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_family(self))
    }
}

/// A pre-realizable family with its witnesses.
#[derive(Debug, Clone, PartialEq)]
pub struct RealizableFamily {
    forms: QFormFamily,
    s: u32,
    d: u64,
    lambdas: Option<Vec<Rat>>,
}

impl RealizableFamily {
    /// Checks pre-realizability and records the witnesses.
    pub fn new(forms: QFormFamily) -> Result<Self, RealizableError> {
        let w = check_prerealizable(&forms).map_err(RealizableError::NotPrerealizable)?;
        Ok(Self { forms, s: w.s, d: w.d, lambdas: w.lambdas })
    }

    pub fn family(&self) -> QFormFamily {
        self.forms.clone()
    }

    pub fn forms(&self) -> &[QPoly] {
        self.forms.forms()
    }

    pub fn space(&self) -> &Arc<VarSpace> {
        self.forms.space()
    }

    pub fn nvars(&self) -> usize {
        self.forms.nvars()
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// Degree of `q_0`.
    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn lambdas(&self) -> Option<&[Rat]> {
        self.lambdas.as_deref()
    }

    pub fn is_realizable(&self) -> bool {
        self.lambdas.is_some()
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.forms.degrees()
    }

    pub fn q0(&self) -> &QPoly {
        &self.forms()[0]
    }
}

/// `max(n, ⌈deg q_r / d⌉ + 1)`.
pub fn s_bound(n: usize, deg_qr: u64, d: u64) -> u32 {
    let ceil = deg_qr.div_ceil(d) + 1;
    u32::try_from(ceil.max(n as u64)).expect("exponent bound fits in u32")
}

/// Checks conditions (1) and (2); condition (3) is reported through
/// [`Witness::lambdas`] but does not fail the check.
pub fn check_prerealizable(family: &QFormFamily) -> Result<Witness, Violation> {
    let forms = family.forms();
    if forms.len() < 2 {
        return Err(Violation::TooShort);
    }
    let degs = family.degrees();
    let d = degs[0];
    let last = *degs.last().expect("nonempty");
    if d == 0 || last % d != 0 {
        return Err(Violation::NotAPower);
    }
    let s = u32::try_from(last / d).map_err(|_| Violation::NotAPower)?;
    if forms[0].pow(s) != *forms.last().expect("nonempty") {
        return Err(Violation::NotAPower);
    }
    let bound = s_bound(family.nvars(), degs[degs.len() - 2], d);
    if s < bound {
        return Err(Violation::ExponentTooSmall { s, bound });
    }
    for (i, w) in degs.windows(2).enumerate() {
        let gap = w[1] as i64 - w[0] as i64;
        if gap <= 1 {
            return Err(Violation::Condition2 { index: i, gap });
        }
    }
    Ok(Witness { s, d, lambdas: diagonal_coefficients(&forms[0]).ok() })
}

/// Conditions (1) to (3).
pub fn check_realizable(family: &QFormFamily) -> Result<Witness, Violation> {
    let w = check_prerealizable(family)?;
    if w.d <= 1 {
        return Err(Violation::DegreeTooSmall { d: w.d });
    }
    if w.lambdas.is_none() {
        return Err(Violation::NotDiagonal);
    }
    Ok(w)
}

/// `λ_i` with `q = Σ λ_i v_i^d`, all nonzero.
fn diagonal_coefficients(q: &QPoly) -> Result<Vec<Rat>, Violation> {
    let d = q.homogeneous_degree().map_err(|_| Violation::NotDiagonal)?;
    if d <= 1 {
        return Err(Violation::DegreeTooSmall { d });
    }
    let n = q.space().len();
    let mut lambdas = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = d as u32;
        let c = q.coefficient(&Monomial::new(e));
        if c == rat(0, 1) {
            return Err(Violation::NotDiagonal);
        }
        lambdas.push(c);
    }
    if q.num_terms() != n {
        return Err(Violation::NotDiagonal);
    }
    Ok(lambdas)
}

/// `q_0 = p_0`, `q_i = p_i q_{i−1} q_0`, `q_{r+1} = q_0^s` with the smallest
/// legal `s`.
pub fn make_prerealizable(p: &QFormFamily) -> Result<RealizableFamily, RealizableError> {
    make_prerealizable_with(p, None)
}

/// As [`make_prerealizable`], with an explicit `s` that must meet the bound.
pub fn make_prerealizable_with(p: &QFormFamily, s: Option<u32>) -> Result<RealizableFamily, RealizableError> {
    let q0 = p.forms()[0].clone();
    let d = q0.homogeneous_degree()?;
    if d < 2 {
        return Err(RealizableError::DegreeTooSmall(d));
    }
    let mut forms = vec![q0.clone()];
    for pi in &p.forms()[1..] {
        let prev = forms.last().expect("q0 present");
        forms.push(&(pi * prev) * &q0);
    }
    let deg_qr = forms.last().expect("q0 present").homogeneous_degree()?;
    let bound = s_bound(p.nvars(), deg_qr, d);
    let s = match s {
        Some(s) if s < bound => return Err(RealizableError::BadS { s, bound }),
        Some(s) => s,
        None => bound,
    };
    forms.push(q0.pow(s));
    RealizableFamily::new(QFormFamily::new(forms)?)
}

/// Output of [`orthogonal_presentation`].
#[derive(Debug, Clone)]
pub struct Presentation {
    pub family: RealizableFamily,
    /// `B` with `q_0^{std} ∘ B` diagonal; `g ↦ B⁻¹ g B` carries `G` into the
    /// orthogonal group of `family`.
    pub basis_change: QMatrix,
    /// Invariants kept after pruning, in the standard basis.
    pub invariants: Vec<QPoly>,
    /// `G` conjugated into the new basis.
    pub group: QMatrixGroup,
}

/// Realizes a finite group as the orthogonal group of a realizable family.
///
/// Invariants are the Reynolds averages of monomials up to degree `|G|`,
/// pruned to those not already in the subalgebra generated by the ones kept
/// before them. Pruning does not change the stabilizer and keeps degrees
/// small.
pub fn orthogonal_presentation(group: &QMatrixGroup) -> Result<Presentation, RealizableError> {
    let n = group.dim();
    let std = VarSpace::numbered("v", n);
    let bound = u32::try_from(group.order()).expect("order bounded by max_order");
    let all = groups::invariant_monomials(group, &std, bound)?;
    let invariants = prune_generated(all.forms());

    let sum_sq = QPoly::from_terms(
        &std,
        (0..n).map(|i| {
            let mut e = vec![0; n];
            e[i] = 2;
            (Monomial::new(e), rat(1, 1))
        }),
    );
    let q0 = groups::reynolds(group, &sum_sq)?;
    let (_, b) = quadratic::diagonalize_quadratic(&q0)?;

    let mut p = vec![q0.substitute_linear(&b)?];
    for inv in &invariants {
        p.push(inv.substitute_linear(&b)?);
    }
    let family = make_prerealizable(&QFormFamily::new(p)?)?;
    let conjugated = group.conjugate(&b)?;
    Ok(Presentation { family, basis_change: b, invariants, group: conjugated })
}

/// Keeps each form unless it is a linear combination of products of the
/// forms kept before it. Input must be sorted by degree.
fn prune_generated(forms: &[QPoly]) -> Vec<QPoly> {
    let mut kept: Vec<QPoly> = Vec::new();
    for f in forms {
        let deg = f.homogeneous_degree().expect("invariants are homogeneous");
        let mut span = EchelonSpan::default();
        for prod in products_of_degree(&kept, deg) {
            span.insert(prod);
        }
        if !span.contains(f) {
            kept.push(f.clone());
        }
    }
    kept
}

/// All products `Π kept[i_j]` (multisets of indices) of total degree `deg`.
fn products_of_degree(kept: &[QPoly], deg: u64) -> Vec<QPoly> {
    fn go(kept: &[QPoly], degs: &[u64], start: usize, left: u64, acc: &QPoly, out: &mut Vec<QPoly>) {
        if left == 0 {
            out.push(acc.clone());
            return;
        }
        for i in start..kept.len() {
            if degs[i] <= left {
                go(kept, degs, i, left - degs[i], &(acc * &kept[i]), out);
            }
        }
    }
    let mut out = Vec::new();
    if let Some(first) = kept.first() {
        let degs: Vec<u64> = kept.iter().map(|k| k.homogeneous_degree().expect("homogeneous")).collect();
        go(kept, &degs, 0, deg, &QPoly::one(first.space()), &mut out);
    }
    out
}

/// Row-echelon basis of a space of polynomials, keyed by leading monomial.
#[derive(Default)]
struct EchelonSpan {
    rows: std::collections::BTreeMap<Monomial, QPoly>,
}

impl EchelonSpan {
    fn reduce(&self, p: &QPoly) -> QPoly {
        let mut r = p.clone();
        let mut out = QPoly::zero(p.space());
        while let Some((m, c)) = r.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            if let Some(row) = self.rows.get(&m) {
                let factor = c / row.coefficient(&m);
                r = &r - &row.scale(&factor);
            } else {
                let t = QPoly::from_term(p.space(), m, c);
                r = &r - &t;
                out = &out + &t;
            }
        }
        out
    }

    fn insert(&mut self, p: QPoly) {
        let r = self.reduce(&p);
        if let Some((m, _)) = r.leading_term() {
            self.rows.insert(m.clone(), r.clone());
        }
    }

    fn contains(&self, p: &QPoly) -> bool {
        self.reduce(p).is_zero()
    }
}

/// The symmetric-group family in `x1..xn`: `q_0 = n! Σ x_i²`,
/// `q_j = e_j q_{j−1} q_0`, `q_{n+1} = q_0^s`.
pub fn symmetric_family(n: usize, s: Option<u32>) -> Result<RealizableFamily, RealizableError> {
    if n < 2 {
        return Err(RealizableError::BadN(n));
    }
    let bound = u32::try_from(((n + 4) * (n + 1)).div_ceil(4) + 1).expect("small n");
    let s = s.unwrap_or(bound);
    if s < bound {
        return Err(RealizableError::BadS { s, bound });
    }
    let space = VarSpace::numbered("x", n);
    let fact: num_bigint::BigInt = (1..=n as u64).map(num_bigint::BigInt::from).product();
    let sq = |i: usize| {
        let mut e = vec![0; n];
        e[i] = 2;
        (Monomial::new(e), Rat::from_integer(fact.clone()))
    };
    let q0 = QPoly::from_terms(&space, (0..n).map(sq));
    let mut forms = vec![q0.clone()];
    for j in 1..=n {
        let ej = elementary_symmetric(&space, j);
        let prev = forms.last().expect("q0 present");
        forms.push(&(&ej * prev) * &q0);
    }
    forms.push(q0.pow(s));
    let family = RealizableFamily::new(QFormFamily::new(forms)?)?;
    if !family.is_realizable() {
        return Err(RealizableError::NotRealizable(Violation::NotDiagonal));
    }
    Ok(family)
}

/// `e_j` in the variables of `space`.
pub fn elementary_symmetric(space: &Arc<VarSpace>, j: usize) -> QPoly {
    let n = space.len();
    let mut terms = Vec::new();
    let mut subset: Vec<usize> = (0..j).collect();
    if j > n {
        return QPoly::zero(space);
    }
    loop {
        let mut e = vec![0; n];
        for &i in &subset {
            e[i] = 1;
        }
        terms.push((Monomial::new(e), rat(1, 1)));
        // next j-subset in lexicographic order
        let Some(pos) = (0..j).rev().find(|&p| subset[p] < n - j + p) else { break };
        subset[pos] += 1;
        for q in pos + 1..j {
            subset[q] = subset[q - 1] + 1;
        }
    }
    QPoly::from_terms(space, terms)
}

/// The seven-variable family built from the split quadratic form and the
/// alternating trilinear form preserved by `G_2`.
#[derive(Debug, Clone)]
pub struct G2Family {
    pub family: RealizableFamily,
    /// `f_0`, `f_1` in `x0, x1, x1p, x2, x2p, x3, x3p`.
    pub original: QFormFamily,
    /// `C` with `x = C v`; the rewritten forms are `f ∘ C`.
    pub change: QMatrix,
    /// `f_0 ∘ C` and `f_1 ∘ C` in `v1..v7`.
    pub rewritten: [QPoly; 2],
}

/// Builds `f_0`, `f_1`, rewrites them through `v_1 = x_0`,
/// `v_{2i} = x_i + x_i'`, `v_{2i+1} = x_i − x_i'`, and makes the result
/// pre-realizable.
///
/// The verbatim triple `{f_0, f_1, f_0^7}` has a degree gap of one between
/// the first two forms, so `q_1 = f_1 f_0²` is used instead; its orthogonal
/// group is the same.
pub fn g2_family() -> Result<G2Family, RealizableError> {
    let xs = VarSpace::new(["x0", "x1", "x1p", "x2", "x2p", "x3", "x3p"])?;
    let f0 = QPoly::parse("-2*x0^2 + x1*x1p + x2*x2p + x3*x3p", &xs)?;
    let f1 = QPoly::parse("x0*x1*x1p + x0*x2*x2p + x0*x3*x3p + x1*x2*x3 + x1p*x2p*x3p", &xs)?;
    let half = rat(1, 2);
    let mut change = Matrix::zeros(7, 7);
    change.set(0, 0, rat(1, 1));
    for i in 1..=3 {
        let (xi, xip) = (2 * i - 1, 2 * i);
        let (even, odd) = (2 * i - 1, 2 * i); // columns of v_{2i}, v_{2i+1}
        change.set(xi, even, half.clone());
        change.set(xi, odd, half.clone());
        change.set(xip, even, half.clone());
        change.set(xip, odd, -half.clone());
    }
    let vs = VarSpace::numbered("v", 7);
    let rewrite = |f: &QPoly| f.substitute_linear(&change).and_then(|g| g.rename_space(&vs));
    let rewritten = [rewrite(&f0)?, rewrite(&f1)?];
    let family = make_prerealizable(&QFormFamily::new(rewritten.to_vec())?)?;
    if !family.is_realizable() {
        return Err(RealizableError::NotRealizable(Violation::NotDiagonal));
    }
    Ok(G2Family { family, original: QFormFamily::new(vec![f0, f1])?, change, rewritten })
}
