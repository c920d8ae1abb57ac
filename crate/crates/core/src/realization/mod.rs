//! The minimal Sullivan model of a realizable family and its automorphisms.
//!
//! For a realizable family `Q = {q_0, ..., q_{r+1}}` in `n` variables with
//! `d = deg q_0` and an integer `k` with `deg q_{r+1} < 2k + d − 1`, the
//! model is free on
//!
//! | generator | degree            | differential   |
//! |-----------|-------------------|----------------|
//! | `x1`      | 8                 | 0              |
//! | `x2`      | 10                | 0              |
//! | `y1`      | 33                | `x1^3 x2`      |
//! | `y2`      | 35                | `x1^2 x2^2`    |
//! | `y3`      | 37                | `x1 x2^3`      |
//! | `v1..vn`  | 40                | 0              |
//! | `z`       | `80k + 40d − 41`  | see below      |
//!
//! ```text
//! d(z) = Σ_{i=1}^{r+1} q_i x1^{10k+5(d−1)−5 deg q_i} + q_0 (x1^{10k−5} + x2^{8k−4})
//!      + x1^{10k+5(d−4)} (y1 y2 x1^4 x2^2 − y1 y3 x1^5 x2 + y2 y3 x1^6)
//!      + x1^{10k+5(d−1)} + x2^{8k+4(d−1)}
//! ```
//!
//! The forms are read in the subring `P = ℚ[x1, x2, v1..vn]` with weights
//! 8, 10 and 40.

mod classify;
mod lemmas;
mod scalars;
mod text;

pub use classify::{classify, ClassificationResult, ProofStep, StepOutcome};
pub use lemmas::{decompose_a, homotopy_witness, lemma_degree, lemma_divisor};
pub use scalars::{scalar_constraints, scalar_constraints_for, ScalarSystem, Scalars};
pub use text::{parse_model, write_model, ModelFile};

use std::sync::Arc;

use thiserror::Error;

use crate::cdga::{CdgaError, DgaMorphism, GcaElement, GcaMonomial, Generator, GeneratorSet};
use crate::groups::is_orthogonal;
use crate::poly::{Monomial, PolyError, VarSpace, Variable};
use crate::realizable::{check_realizable, RealizableError, RealizableFamily, Violation};
use crate::{QCdga, QDgaMorphism, QGcaElement, QMatrix, QPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizationError {
    #[error("family is not realizable: {0}")]
    NotRealizable(Violation),
    #[error("k = {k} violates deg q_i < 2k + d - 1 = {bound} for {}", describe_offenders(.offending))]
    DegreeBoundViolated { k: u64, bound: u64, offending: Vec<(usize, u64)> },
    #[error("k = {0} is too small")]
    BadK(u64),
    #[error("matrix does not preserve the family")]
    NotOrthogonal,
    #[error("element has degree {found}, expected {expected}")]
    WrongDegree { expected: u64, found: u64 },
    #[error("a monomial of A{lemma} is not divisible by the lemma's factor")]
    DivisibilityFailure { lemma: usize },
    #[error("element is not of the form y1 A1 + y2 A2 + y3 A3: {0}")]
    WrongShape(String),
    #[error("element is not closed; d of it has {residue_terms} terms")]
    NotClosed { residue_terms: usize },
    #[error("not a chain map on {generator}; residue has {residue_terms} terms")]
    NotChainMap { generator: String, residue_terms: usize },
    #[error("morphism is not an endomorphism of this model")]
    AlgebraMismatch,
    #[error("scalar system has infinitely many solutions")]
    Underdetermined,
    #[error("model check failed: {0}")]
    ModelCheck(String),
    #[error("model file does not match the model rebuilt from its metadata")]
    ModelMismatch,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("entry {index}: {source}")]
    InList { index: usize, source: Box<RealizationError> },
    #[error(transparent)]
    Cdga(#[from] CdgaError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Realizable(#[from] RealizableError),
}

fn describe_offenders(off: &[(usize, u64)]) -> String {
    off.iter().map(|(i, deg)| format!("q{i} (degree {deg})")).collect::<Vec<_>>().join(", ")
}

/// A realizable family together with an admissible `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    family: RealizableFamily,
    k: u64,
}

impl ModelSpec {
    pub fn new(family: RealizableFamily, k: u64) -> Result<Self, RealizationError> {
        check_realizable(&family.family()).map_err(RealizationError::NotRealizable)?;
        if k < 1 {
            return Err(RealizationError::BadK(k));
        }
        let bound = 2 * k + family.d() - 1;
        let offending: Vec<(usize, u64)> =
            family.degrees().into_iter().enumerate().filter(|&(_, deg)| deg >= bound).collect();
        if !offending.is_empty() {
            return Err(RealizationError::DegreeBoundViolated { k, bound, offending });
        }
        Ok(Self { family, k })
    }

    pub fn family(&self) -> &RealizableFamily {
        &self.family
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn d(&self) -> u64 {
        self.family.d()
    }

    pub fn n(&self) -> usize {
        self.family.nvars()
    }

    pub fn z_degree(&self) -> u64 {
        z_degree(self.k, self.d())
    }

    /// `10k + 5(d−1) − 5 deg q_i` for every form, `q_0` included.
    pub fn x1_exponents(&self) -> Vec<u64> {
        let top = 10 * self.k + 5 * (self.d() - 1);
        self.family.degrees().iter().map(|deg| top - 5 * deg).collect()
    }
}

pub fn z_degree(k: u64, d: u64) -> u64 {
    80 * k + 40 * d - 41
}

/// `x1(8), x2(10), v1..vn(40)`; the `x` are fixed by linear substitutions.
pub fn p_space(n: usize) -> Arc<VarSpace> {
    let mut vars = vec![Variable::weighted("x1", 8).auxiliary(), Variable::weighted("x2", 10).auxiliary()];
    vars.extend((1..=n).map(|j| Variable::weighted(format!("v{j}"), 40)));
    VarSpace::from_variables(vars).expect("distinct names")
}

/// Generator indices.
pub const X1: usize = 0;
pub const X2: usize = 1;
pub const Y: [usize; 3] = [2, 3, 4];
const V0: usize = 5;

fn model_generators(n: usize, k: u64, d: u64) -> Arc<GeneratorSet> {
    let mut gens = vec![
        Generator::new("x1", 8),
        Generator::new("x2", 10),
        Generator::new("y1", 33),
        Generator::new("y2", 35),
        Generator::new("y3", 37),
    ];
    gens.extend((1..=n).map(|j| Generator::new(format!("v{j}"), 40)));
    gens.push(Generator::new("z", z_degree(k, d)));
    GeneratorSet::new(gens).expect("fixed generator names")
}

/// The model with its generator layout and the family read in `P`.
#[derive(Debug, Clone)]
pub struct SullivanModel {
    spec: ModelSpec,
    cdga: Arc<QCdga>,
    pspace: Arc<VarSpace>,
    forms: Vec<QPoly>,
}

/// Builds the model and checks `d² = 0`, minimality and degrees.
pub fn build_model(spec: ModelSpec) -> Result<SullivanModel, RealizationError> {
    let n = spec.n();
    let pspace = p_space(n);
    let forms = forms_in_p(spec.family(), &pspace)?;
    let gens = model_generators(n, spec.k(), spec.d());
    let dz = z_differential(&gens, &pspace, &forms, spec.k(), spec.d())?;
    let mut diffs: Vec<QGcaElement> = (0..gens.len()).map(|_| GcaElement::zero(&gens)).collect();
    diffs[Y[0]] = GcaElement::parse("x1^3*x2", &gens)?;
    diffs[Y[1]] = GcaElement::parse("x1^2*x2^2", &gens)?;
    diffs[Y[2]] = GcaElement::parse("x1*x2^3", &gens)?;
    diffs[V0 + n] = dz;
    let cdga = QCdga::new(gens, diffs)?;
    if let Err(cx) = cdga.check_d_squared() {
        return Err(RealizationError::ModelCheck(format!("d² ≠ 0 on {cx}")));
    }
    if !cdga.is_minimal() {
        return Err(RealizationError::ModelCheck("differential is not decomposable".into()));
    }
    Ok(SullivanModel { spec, cdga: Arc::new(cdga), pspace, forms })
}

/// Builds one model per `k`, stopping at the first failure.
pub fn realize_all(family: &RealizableFamily, ks: &[u64]) -> Result<Vec<SullivanModel>, RealizationError> {
    ks.iter()
        .enumerate()
        .map(|(index, &k)| {
            ModelSpec::new(family.clone(), k)
                .and_then(build_model)
                .map_err(|e| RealizationError::InList { index, source: Box::new(e) })
        })
        .collect()
}

/// Renames the family's variables to `v1..vn` inside `P`.
fn forms_in_p(family: &RealizableFamily, pspace: &Arc<VarSpace>) -> Result<Vec<QPoly>, PolyError> {
    let n = family.nvars();
    let images: Vec<QPoly> = (0..n).map(|j| QPoly::var(pspace, 2 + j)).collect();
    family.forms().iter().map(|q| q.substitute(pspace, &images)).collect()
}

fn x_power(pspace: &Arc<VarSpace>, which: usize, e: u64) -> QPoly {
    let mut exps = vec![0; pspace.len()];
    exps[which] = u32::try_from(e).expect("exponent fits in u32");
    QPoly::from_term(pspace, Monomial::new(exps), crate::rat(1, 1))
}

/// `d(z)` for forms already in `P`. Exponents must be nonnegative.
fn z_differential(
    gens: &Arc<GeneratorSet>,
    pspace: &Arc<VarSpace>,
    forms: &[QPoly],
    k: u64,
    d: u64,
) -> Result<QGcaElement, RealizationError> {
    let (k, d) = (k as i64, d as i64);
    let nonneg = |e: i64| u64::try_from(e).map_err(|_| RealizationError::BadK(k as u64));
    let x1 = |e: u64| x_power(pspace, 0, e);
    let x2 = |e: u64| x_power(pspace, 1, e);
    let mut poly = QPoly::zero(pspace);
    for q in &forms[1..] {
        let deg = q.homogeneous_degree()? as i64;
        poly = &poly + &(q * &x1(nonneg(10 * k + 5 * (d - 1) - 5 * deg)?));
    }
    poly = &poly + &(&forms[0] * &(&x1(nonneg(10 * k - 5)?) + &x2(nonneg(8 * k - 4)?)));
    poly = &poly + &x1(nonneg(10 * k + 5 * (d - 1))?);
    poly = &poly + &x2(nonneg(8 * k + 4 * (d - 1))?);
    let e = nonneg(10 * k + 5 * (d - 4))?;
    let ypart = GcaElement::parse(
        &format!("y1*y2*x1^{}*x2^2 - y1*y3*x1^{}*x2 + y2*y3*x1^{}", e + 4, e + 5, e + 6),
        gens,
    )?;
    Ok(&embed_in(gens, &poly) + &ypart)
}

/// `P` → model, sending `x1, x2, v_j` to the generators of the same name.
fn embed_in(gens: &Arc<GeneratorSet>, p: &QPoly) -> QGcaElement {
    let ng = gens.len();
    GcaElement::from_terms(
        gens,
        p.terms().map(|(m, c)| {
            let mut e = vec![0; ng];
            for (i, &x) in m.exponents().iter().enumerate() {
                e[if i < 2 { i } else { V0 + i - 2 }] = x;
            }
            (GcaMonomial::new(e, gens).expect("even generators only"), c.clone())
        }),
    )
}

impl SullivanModel {
    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn cdga(&self) -> &Arc<QCdga> {
        &self.cdga
    }

    pub fn n(&self) -> usize {
        self.spec.n()
    }

    pub fn z_degree(&self) -> u64 {
        self.spec.z_degree()
    }

    pub fn p_space(&self) -> &Arc<VarSpace> {
        &self.pspace
    }

    /// The family forms in `v1..vn`.
    pub fn forms_in_p(&self) -> &[QPoly] {
        &self.forms
    }

    pub fn v(&self, j: usize) -> usize {
        V0 + j
    }

    pub fn z(&self) -> usize {
        V0 + self.n()
    }

    pub fn dz(&self) -> &QGcaElement {
        self.cdga.d_gen(self.z())
    }

    pub fn element(&self, text: &str) -> Result<QGcaElement, CdgaError> {
        self.cdga.element(text)
    }

    pub fn embed(&self, p: &QPoly) -> QGcaElement {
        embed_in(self.cdga.gens(), p)
    }

    /// Inverse of [`Self::embed`] on elements built from `x1, x2, v_j`.
    pub fn project(&self, e: &QGcaElement) -> Option<QPoly> {
        let z = self.z();
        let mut terms = Vec::with_capacity(e.num_terms());
        for (m, c) in e.terms() {
            let ex = m.exponents();
            if Y.iter().any(|&y| ex[y] > 0) || ex[z] > 0 {
                return None;
            }
            let mut p = vec![ex[X1], ex[X2]];
            p.extend_from_slice(&ex[V0..V0 + self.n()]);
            terms.push((Monomial::new(p), c.clone()));
        }
        Some(QPoly::from_terms(&self.pspace, terms))
    }

    /// The endomorphism fixing every generator except the named ones.
    pub fn morphism(&self, overrides: &[(&str, QGcaElement)]) -> Result<QDgaMorphism, RealizationError> {
        let gens = self.cdga.gens();
        let mut images: Vec<QGcaElement> = (0..gens.len()).map(|i| GcaElement::generator(gens, i)).collect();
        for (name, img) in overrides {
            let i = gens.index_of(name).ok_or_else(|| CdgaError::UnknownGenerator((*name).into()))?;
            images[i] = img.clone();
        }
        Ok(DgaMorphism::new(Arc::clone(&self.cdga), Arc::clone(&self.cdga), images)?)
    }

    /// `f_g`: fixes `x`, `y`, `z` and sends `v_j` to `g · v_j = Σ_k (g⁻¹)_{jk} v_k`.
    pub fn lift_group_element(&self, g: &QMatrix) -> Result<QDgaMorphism, RealizationError> {
        let n = self.n();
        if g.rows() != n || g.cols() != n {
            return Err(RealizationError::NotOrthogonal);
        }
        let family = self.spec.family().family();
        if g.determinant().map_or(true, |det| det == crate::rat(0, 1)) || !is_orthogonal(g, &family)? {
            return Err(RealizationError::NotOrthogonal);
        }
        let inv = g.inverse().map_err(|_| RealizationError::NotOrthogonal)?;
        let gens = self.cdga.gens();
        let mut images: Vec<QGcaElement> = (0..gens.len()).map(|i| GcaElement::generator(gens, i)).collect();
        for j in 0..n {
            images[V0 + j] = GcaElement::from_terms(
                gens,
                (0..n).map(|k| (GcaMonomial::generator(gens.len(), V0 + k), inv.get(j, k).clone())),
            );
        }
        Ok(DgaMorphism::new(Arc::clone(&self.cdga), Arc::clone(&self.cdga), images)?)
    }
}
