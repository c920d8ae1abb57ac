//! Divisibility of the `A_i` and the homotopy witness built from it.
//!
//! In `P` every monomial `x1^a x2^b v^c` of weight `80k + 40d − 72 − 2i`
//! (`i = 1, 2, 3`, `k, d ≥ 2`) is divisible by `x1^{i+1} x2^{4−i}`: the weight
//! forces `4a + 5b ≡ 4 − i (mod 20)`, hence `a` and `b` are at least the
//! exponents of the divisor.

use crate::cdga::GcaElement;
use crate::poly::Monomial;
use crate::{QGcaElement, QPoly};

use super::{RealizationError, SullivanModel, V0, X1, X2, Y};

/// Weight of `A_i` in `f(z) = z + y1 A1 + y2 A2 + y3 A3`.
pub fn lemma_degree(i: usize, k: u64, d: u64) -> u64 {
    80 * k + 40 * d - 72 - 2 * i as u64
}

/// `(a, b)` with `A_i = x1^a x2^b B_i`.
pub fn lemma_divisor(i: usize) -> (u32, u32) {
    (i as u32 + 1, 4 - i as u32)
}

/// Writes `A_i = x1^{i+1} x2^{4−i} B_i` and returns `B_i`, of weight
/// `80k + 40d − 120`. A zero `A_i` gives a zero `B_i`.
pub fn decompose_a(i: usize, a: &QPoly, k: u64, d: u64) -> Result<QPoly, RealizationError> {
    assert!((1..=3).contains(&i), "lemma index is 1, 2 or 3");
    if k < 2 || d < 2 {
        return Err(RealizationError::BadK(k));
    }
    let space = a.space();
    let is_p = space.len() >= 2
        && space.weight(X1) == 8
        && space.weight(X2) == 10
        && (2..space.len()).all(|j| space.weight(j) == 40);
    if !is_p {
        return Err(RealizationError::Poly(crate::poly::PolyError::VarSpaceMismatch));
    }
    if a.is_zero() {
        return Ok(a.clone());
    }
    let expected = lemma_degree(i, k, d);
    for (m, _) in a.terms() {
        let found = m.weighted_degree(space);
        if found != expected {
            return Err(RealizationError::WrongDegree { expected, found });
        }
    }
    let (ea, eb) = lemma_divisor(i);
    let mut e = vec![0; space.len()];
    e[X1] = ea;
    e[X2] = eb;
    a.div_monomial(&Monomial::new(e)).ok_or(RealizationError::DivisibilityFailure { lemma: i })
}

/// For closed `ω = y1 A1 + y2 A2 + y3 A3` of degree `|z|`, returns
/// `m = y1 y2 x2 B2 + y1 y3 x1 B3` with `dm = ω`.
pub fn homotopy_witness(omega: &QGcaElement, model: &SullivanModel) -> Result<QGcaElement, RealizationError> {
    let gens = model.cdga().gens();
    if *omega.gens() != *gens {
        return Err(RealizationError::AlgebraMismatch);
    }
    let z = model.z();
    let mut parts: [Vec<_>; 3] = Default::default();
    for (m, c) in omega.terms() {
        let ex = m.exponents();
        let ys: Vec<usize> = (0..3).filter(|&t| ex[Y[t]] > 0).collect();
        if ys.len() != 1 || ex[z] > 0 {
            return Err(RealizationError::WrongShape(format!("term with {} odd generators", ys.len() + ex[z] as usize)));
        }
        let deg = m.degree(gens);
        if deg != model.z_degree() {
            return Err(RealizationError::WrongDegree { expected: model.z_degree(), found: deg });
        }
        let mut p = vec![ex[X1], ex[X2]];
        p.extend_from_slice(&ex[V0..V0 + model.n()]);
        parts[ys[0]].push((Monomial::new(p), c.clone()));
    }
    let residue = model.cdga().d(omega);
    if !residue.is_zero() {
        return Err(RealizationError::NotClosed { residue_terms: residue.num_terms() });
    }
    let (k, d) = (model.spec().k(), model.spec().d());
    let mut b = Vec::with_capacity(3);
    for (t, terms) in parts.into_iter().enumerate() {
        let a = QPoly::from_terms(model.p_space(), terms);
        b.push(decompose_a(t + 1, &a, k, d)?);
    }
    let x1 = GcaElement::generator(gens, X1);
    let x2 = GcaElement::generator(gens, X2);
    let y = |t: usize| GcaElement::generator(gens, Y[t]);
    let m = &(&(&y(0) * &y(1)) * &(&x2 * &model.embed(&b[1]))) + &(&(&y(0) * &y(2)) * &(&x1 * &model.embed(&b[2])));
    debug_assert_eq!(&model.cdga().d(&m), omega);
    Ok(m)
}
