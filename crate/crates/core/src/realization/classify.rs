//! Deciding whether an endomorphism of the model is homotopic to some `f_g`.
//!
//! The argument runs in fixed steps; each is checked directly on the
//! generator images and the first failing one is reported.

use std::fmt::{self, Write as _};

use num_traits::Zero;

use crate::cdga::GcaElement;
use crate::groups::is_orthogonal;
use crate::poly::Monomial;
use crate::{QDgaMorphism, QGcaElement, QMatrix, QPoly, Rat};

use super::{homotopy_witness, scalar_constraints, RealizationError, Scalars, SullivanModel, V0, X1, X2, Y};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProofStep {
    /// Images are scalar multiples on `x`, `y`, `z` plus admissible terms, and
    /// the linear part on `v` is invertible.
    Shape,
    /// `b1 = a1^3 a2`, `b2 = a1^2 a2^2`, `b3 = a1 a2^3`.
    YDifferentials,
    /// No `y1 y2 y3` term in `f(z)`.
    DVanishes,
    /// No `x2^4` term in `f(v_j)`.
    A2Vanishes,
    /// No `x1^5` term in `f(v_j)`.
    A1Vanishes,
    /// `y1 A1 + y2 A2 + y3 A3` is closed.
    AClosed,
    /// All scalars are 1.
    Scalars,
    /// The transposed linear part preserves the family.
    FormsPreserved,
    /// `f(z) − z` is exact.
    HomotopyWitness,
}

impl ProofStep {
    pub const ALL: [ProofStep; 9] = [
        ProofStep::Shape,
        ProofStep::YDifferentials,
        ProofStep::DVanishes,
        ProofStep::A2Vanishes,
        ProofStep::A1Vanishes,
        ProofStep::AClosed,
        ProofStep::Scalars,
        ProofStep::FormsPreserved,
        ProofStep::HomotopyWitness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProofStep::Shape => "shape",
            ProofStep::YDifferentials => "y-differentials",
            ProofStep::DVanishes => "D = 0",
            ProofStep::A2Vanishes => "a2(j) = 0",
            ProofStep::A1Vanishes => "a1(j) = 0",
            ProofStep::AClosed => "A closed",
            ProofStep::Scalars => "scalars",
            ProofStep::FormsPreserved => "forms preserved",
            ProofStep::HomotopyWitness => "homotopy witness",
        }
    }

    /// What a failure of this step means.
    pub fn failure(self) -> &'static str {
        match self {
            ProofStep::Shape => "images are not of the expected shape",
            ProofStep::YDifferentials => "b_i differ from the values forced by d(y_i)",
            ProofStep::DVanishes => "D ≠ 0",
            ProofStep::A2Vanishes => "a2(j) ≠ 0",
            ProofStep::A1Vanishes => "a1(j) ≠ 0",
            ProofStep::AClosed => "y1 A1 + y2 A2 + y3 A3 is not closed",
            ProofStep::Scalars => "scalars are not all 1",
            ProofStep::FormsPreserved => "transposed linear part does not preserve the family",
            ProofStep::HomotopyWitness => "f(z) − z is not exact",
        }
    }
}

impl fmt::Display for ProofStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepOutcome {
    pub step: ProofStep,
    pub passed: bool,
    /// Number of offending terms or entries.
    pub residue: usize,
}

#[derive(Debug, Clone)]
pub struct ClassificationResult {
    pub steps: Vec<StepOutcome>,
    pub scalars: Option<Scalars>,
    /// `L` with `f(v_j) = Σ_i L_ij v_i + a1(j) x1^5 + a2(j) x2^4`.
    pub linear_part: Option<QMatrix>,
    pub a1_corrections: Vec<Rat>,
    pub a2_corrections: Vec<Rat>,
    /// Coefficient of `y1 y2 y3` in `f(z)`.
    pub d_part: Option<QPoly>,
    /// `g = (Lᵀ)⁻¹`, present when every step passes.
    pub group_element: Option<QMatrix>,
    /// `m` with `dm = f(z) − f_g(z)`.
    pub homotopy_witness: Option<QGcaElement>,
    /// `None` when `f` commutes with `d`.
    pub chain_map_failure: Option<(String, usize)>,
}

impl ClassificationResult {
    pub fn failed_step(&self) -> Option<ProofStep> {
        self.steps.iter().find(|s| !s.passed).map(|s| s.step)
    }

    pub fn report(&self) -> String {
        let mut out = String::new();
        match &self.chain_map_failure {
            None => writeln!(out, "chain map: yes").unwrap(),
            Some((g, n)) => writeln!(out, "chain map: no (on {g}, residue {n} terms)").unwrap(),
        }
        for s in &self.steps {
            let verdict = if s.passed { "pass" } else { "FAIL" };
            writeln!(out, "step {}: {verdict} (residue {})", s.step, s.residue).unwrap();
        }
        if let Some(sc) = &self.scalars {
            writeln!(out, "scalars: {sc}").unwrap();
        }
        match (self.failed_step(), &self.group_element) {
            (Some(step), _) => writeln!(out, "result: not homotopic to any f_g; {}", step.failure()).unwrap(),
            (None, Some(g)) => {
                writeln!(out, "result: homotopic to f_g with g =").unwrap();
                write!(out, "{g}").unwrap();
                if !out.ends_with('\n') {
                    out.push('\n');
                }
                if let Some(m) = &self.homotopy_witness {
                    writeln!(out, "witness: {m}").unwrap();
                }
            }
            (None, None) => {}
        }
        out
    }
}

struct Parts {
    a1: Rat,
    a2: Rat,
    b: [Rat; 3],
    c: Rat,
    l: QMatrix,
    corr1: Vec<Rat>,
    corr2: Vec<Rat>,
    a: [QPoly; 3],
    dpart: QPoly,
    bad: usize,
}

/// Reads scalars, the linear part and the pieces of `f(z)` off the images.
fn read_parts(f: &QDgaMorphism, model: &SullivanModel) -> Parts {
    let gens = model.cdga().gens();
    let ng = gens.len();
    let n = model.n();
    let z = model.z();
    let mut bad = 0;
    let mut scalar = |i: usize| {
        let img = f.image(i);
        let gm = crate::cdga::GcaMonomial::generator(ng, i);
        bad += img.num_terms() - usize::from(!img.coefficient(&gm).is_zero());
        img.coefficient(&gm)
    };
    let a1 = scalar(X1);
    let a2 = scalar(X2);
    let b = [scalar(Y[0]), scalar(Y[1]), scalar(Y[2])];
    let c = f.image(z).coefficient(&crate::cdga::GcaMonomial::generator(ng, z));

    let mut l = QMatrix::zeros(n, n);
    let mut corr1 = vec![Rat::zero(); n];
    let mut corr2 = vec![Rat::zero(); n];
    for j in 0..n {
        for (m, coef) in f.image(V0 + j).terms() {
            let ex = m.exponents();
            let support: Vec<usize> = (0..ng).filter(|&g| ex[g] > 0).collect();
            match support[..] {
                [g] if g >= V0 && g < V0 + n && ex[g] == 1 => l.set(g - V0, j, coef.clone()),
                [X1] if ex[X1] == 5 => corr1[j] = coef.clone(),
                [X2] if ex[X2] == 4 => corr2[j] = coef.clone(),
                _ => bad += 1,
            }
        }
    }

    let pspace = model.p_space();
    let mut a_terms: [Vec<(Monomial, Rat)>; 3] = Default::default();
    let mut d_terms = Vec::new();
    for (m, coef) in f.image(z).terms() {
        let ex = m.exponents();
        if ex[z] > 0 {
            continue;
        }
        let ys: Vec<usize> = (0..3).filter(|&t| ex[Y[t]] > 0).collect();
        let mut p = vec![ex[X1], ex[X2]];
        p.extend_from_slice(&ex[V0..V0 + n]);
        match ys.len() {
            1 => a_terms[ys[0]].push((Monomial::new(p), coef.clone())),
            3 => d_terms.push((Monomial::new(p), coef.clone())),
            _ => bad += 1,
        }
    }
    // a z term with other factors cannot occur by degree
    bad += f.image(z).terms().filter(|(m, _)| m.exponents()[z] > 0 && m.word_length() > 1).count();
    let a = a_terms.map(|t| QPoly::from_terms(pspace, t));
    let dpart = QPoly::from_terms(pspace, d_terms);
    Parts { a1, a2, b, c, l, corr1, corr2, a, dpart, bad }
}

/// Runs every step in order and stops at the first failure.
///
/// Returns [`RealizationError::NotChainMap`] only when `f` fails to commute
/// with `d` although every step passes.
pub fn classify(f: &QDgaMorphism, model: &SullivanModel) -> Result<ClassificationResult, RealizationError> {
    if **f.source() != **model.cdga() || **f.target() != **model.cdga() {
        return Err(RealizationError::AlgebraMismatch);
    }
    let chain_map_failure = f.is_chain_map().err().map(|cx| (cx.generator, cx.residue.num_terms()));
    let p = read_parts(f, model);
    let gens = model.cdga().gens();
    let mut res = ClassificationResult {
        steps: Vec::new(),
        scalars: None,
        linear_part: None,
        a1_corrections: p.corr1.clone(),
        a2_corrections: p.corr2.clone(),
        d_part: Some(p.dpart.clone()),
        group_element: None,
        homotopy_witness: None,
        chain_map_failure,
    };
    let record = |res: &mut ClassificationResult, step, residue: usize| {
        res.steps.push(StepOutcome { step, passed: residue == 0, residue });
        residue == 0
    };

    let zero_scalars = [&p.a1, &p.a2, &p.b[0], &p.b[1], &p.b[2], &p.c].iter().filter(|x| x.is_zero()).count();
    let singular = usize::from(p.l.determinant().map_or(true, |det| det.is_zero()));
    if !record(&mut res, ProofStep::Shape, p.bad + zero_scalars + singular) {
        return Ok(res);
    }
    res.linear_part = Some(p.l.clone());
    let scalars = Scalars { a1: p.a1.clone(), a2: p.a2.clone(), b: p.b.clone(), c: p.c.clone() };
    res.scalars = Some(scalars.clone());

    let expected_b = [
        p.a1.pow(3) * p.a2.clone(),
        p.a1.pow(2) * p.a2.pow(2),
        p.a1.clone() * p.a2.pow(3),
    ];
    let mismatched = (0..3).filter(|&t| expected_b[t] != p.b[t]).count();
    if !record(&mut res, ProofStep::YDifferentials, mismatched) {
        return Ok(res);
    }
    if !record(&mut res, ProofStep::DVanishes, p.dpart.num_terms()) {
        return Ok(res);
    }
    if !record(&mut res, ProofStep::A2Vanishes, p.corr2.iter().filter(|x| !x.is_zero()).count()) {
        return Ok(res);
    }
    if !record(&mut res, ProofStep::A1Vanishes, p.corr1.iter().filter(|x| !x.is_zero()).count()) {
        return Ok(res);
    }
    let y = |t: usize| GcaElement::generator(gens, Y[t]);
    let mut omega = GcaElement::zero(gens);
    for t in 0..3 {
        omega = &omega + &(&y(t) * &model.embed(&p.a[t]));
    }
    let d_omega = model.cdga().d(&omega);
    if !record(&mut res, ProofStep::AClosed, d_omega.num_terms()) {
        return Ok(res);
    }
    let system = scalar_constraints(model)?;
    let admissible = system.solutions.contains(&scalars) && scalars.is_all_ones();
    if !record(&mut res, ProofStep::Scalars, usize::from(!admissible)) {
        return Ok(res);
    }
    let lt = p.l.transpose();
    let preserved = is_orthogonal(&lt, &model.spec().family().family())?;
    if !record(&mut res, ProofStep::FormsPreserved, usize::from(!preserved)) {
        return Ok(res);
    }
    match homotopy_witness(&omega, model) {
        Ok(m) => {
            record(&mut res, ProofStep::HomotopyWitness, 0);
            res.homotopy_witness = Some(m);
        }
        Err(RealizationError::DivisibilityFailure { .. } | RealizationError::NotClosed { .. }) => {
            record(&mut res, ProofStep::HomotopyWitness, 1);
            return Ok(res);
        }
        Err(e) => return Err(e),
    }
    if let Some((generator, residue_terms)) = &res.chain_map_failure {
        return Err(RealizationError::NotChainMap { generator: generator.clone(), residue_terms: *residue_terms });
    }
    res.group_element = Some(lt.inverse().expect("checked invertible"));
    Ok(res)
}
