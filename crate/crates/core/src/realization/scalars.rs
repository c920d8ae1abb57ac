//! The scalar system of a model.
//!
//! An automorphism that is diagonal on `x1, x2, y1, y2, y3, z` with scalars
//! `a1, a2, b1, b2, b3, c` must satisfy multiplicative relations read off
//! `d(y_i)` and `d(z)`: group the terms of `d(z)` by their part in `x1, x2, y`;
//! a group whose `v`-part is constant gives `s(μ) = c`, and two groups with
//! equal `v`-parts have equal scalars. Eliminating `b_i` and `c` leaves
//! relations `a1^p a2^q = 1`. When these span a rank 2 lattice, `a1` and `a2`
//! are rational roots of unity, so only `±1` need be tried.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::cdga::GcaElement;
use crate::{QCdga, Rat};

use super::{model_generators, p_space, z_differential, RealizationError, SullivanModel, X1, X2, Y};

const NAMES: [&str; 6] = ["a1", "a2", "b1", "b2", "b3", "c"];
const C: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scalars {
    pub a1: Rat,
    pub a2: Rat,
    pub b: [Rat; 3],
    pub c: Rat,
}

impl Scalars {
    pub fn ones() -> Self {
        let one = Rat::one();
        Self { a1: one.clone(), a2: one.clone(), b: [one.clone(), one.clone(), one.clone()], c: one }
    }

    fn as_array(&self) -> [&Rat; 6] {
        [&self.a1, &self.a2, &self.b[0], &self.b[1], &self.b[2], &self.c]
    }

    pub fn is_all_ones(&self) -> bool {
        self.as_array().iter().all(|x| x.is_one())
    }
}

impl fmt::Display for Scalars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, v)) in NAMES.iter().zip(self.as_array()).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{name} = {v}")?;
        }
        Ok(())
    }
}

/// Relations as exponent vectors over `(a1, a2, b1, b2, b3, c)`, each meaning
/// `Π unknown^e = 1`, and every rational solution.
#[derive(Debug, Clone)]
pub struct ScalarSystem {
    pub relations: Vec<[i64; 6]>,
    /// What is left on `(a1, a2)` after eliminating `b_i` and `c`.
    pub reduced: Vec<[i64; 2]>,
    pub solutions: Vec<Scalars>,
}

pub fn scalar_constraints(model: &SullivanModel) -> Result<ScalarSystem, RealizationError> {
    solve(relations_of(model.cdga()))
}

/// The system for given `k` and `d`. Only the shape of `d(z)` matters, so the
/// family `{v1^d, v1^{2d}}` stands in for any realizable family; requires
/// `2k ≥ d + 1` so every exponent is nonnegative.
pub fn scalar_constraints_for(k: u64, d: u64) -> Result<ScalarSystem, RealizationError> {
    if d < 2 || 2 * k < d + 1 {
        return Err(RealizationError::BadK(k));
    }
    let pspace = p_space(1);
    let v = crate::QPoly::var(&pspace, 2);
    let forms = [v.pow(d as u32), v.pow(2 * d as u32)];
    let gens = model_generators(1, k, d);
    let dz = z_differential(&gens, &pspace, &forms, k, d)?;
    let mut diffs: Vec<_> = (0..gens.len()).map(|_| GcaElement::zero(&gens)).collect();
    diffs[Y[0]] = GcaElement::parse("x1^3*x2", &gens)?;
    diffs[Y[1]] = GcaElement::parse("x1^2*x2^2", &gens)?;
    diffs[Y[2]] = GcaElement::parse("x1*x2^3", &gens)?;
    let z = gens.len() - 1;
    diffs[z] = dz;
    solve(relations_of(&QCdga::new(gens, diffs)?))
}

fn relations_of(cdga: &QCdga) -> Vec<[i64; 6]> {
    let gens = cdga.gens();
    let diag = [X1, X2, Y[0], Y[1], Y[2]];
    let z = gens.len() - 1;
    let scalar_of = |ex: &[u32]| {
        let mut r = [0i64; 6];
        for (t, &g) in diag.iter().enumerate() {
            r[t] = ex[g] as i64;
        }
        r
    };
    let sub = |a: [i64; 6], b: [i64; 6]| {
        let mut r = [0; 6];
        for t in 0..6 {
            r[t] = a[t] - b[t];
        }
        r
    };
    let mut rels = Vec::new();
    for t in 0..3 {
        let mut e = [0; 6];
        e[2 + t] = 1;
        for (m, _) in cdga.d_gen(Y[t]).terms() {
            rels.push(sub(scalar_of(m.exponents()), e));
        }
    }
    let mut groups: BTreeMap<Vec<u32>, BTreeMap<Vec<u32>, Rat>> = BTreeMap::new();
    for (m, c) in cdga.d_gen(z).terms() {
        let ex = m.exponents();
        let mu: Vec<u32> = diag.iter().map(|&g| ex[g]).collect();
        let rest: Vec<u32> = (0..gens.len()).filter(|g| !diag.contains(g)).map(|g| ex[g]).collect();
        groups.entry(mu).or_default().insert(rest, c.clone());
    }
    let mut c_unit = [0; 6];
    c_unit[C] = 1;
    let full = |mu: &[u32]| {
        let mut ex = vec![0; gens.len()];
        for (t, &g) in diag.iter().enumerate() {
            ex[g] = mu[t];
        }
        scalar_of(&ex)
    };
    let entries: Vec<_> = groups.iter().collect();
    for (i, (mu, vpart)) in entries.iter().enumerate() {
        if vpart.len() == 1 && vpart.keys().next().unwrap().iter().all(|&e| e == 0) {
            rels.push(sub(full(mu), c_unit));
        }
        for (mu2, vpart2) in &entries[i + 1..] {
            if vpart == vpart2 {
                rels.push(sub(full(mu), full(mu2)));
            }
        }
    }
    rels
}

fn solve(relations: Vec<[i64; 6]>) -> Result<ScalarSystem, RealizationError> {
    let mut rest = relations.clone();
    let mut pivots: Vec<(usize, [i64; 6])> = Vec::new();
    for var in 2..6 {
        let Some(p) = rest.iter().position(|r| r[var].abs() == 1) else {
            return Err(RealizationError::Underdetermined);
        };
        let pivot = rest.swap_remove(p);
        for r in &mut rest {
            let f = r[var] * pivot[var];
            for t in 0..6 {
                r[t] -= f * pivot[t];
            }
        }
        pivots.push((var, pivot));
    }
    let reduced: Vec<[i64; 2]> = rest.iter().map(|r| [r[0], r[1]]).filter(|r| *r != [0, 0]).collect();
    let rank2 = reduced.iter().enumerate().any(|(i, p)| reduced[i + 1..].iter().any(|q| p[0] * q[1] - p[1] * q[0] != 0));
    if !rank2 {
        return Err(RealizationError::Underdetermined);
    }
    let sign = |x: i64, e: i64| if x < 0 && e.rem_euclid(2) == 1 { -1 } else { 1 };
    let mut solutions = Vec::new();
    for a1 in [1i64, -1] {
        for a2 in [1i64, -1] {
            if reduced.iter().any(|r| sign(a1, r[0]) * sign(a2, r[1]) != 1) {
                continue;
            }
            let mut vals: [Rat; 6] = std::array::from_fn(|_| Rat::one());
            vals[0] = Rat::from_integer(a1.into());
            vals[1] = Rat::from_integer(a2.into());
            for (var, rel) in pivots.iter().rev() {
                // x_var = Π_{t≠var} x_t^{−rel[t]·rel[var]}
                let mut v = Rat::one();
                for t in 0..6 {
                    if t != *var && rel[t] != 0 {
                        v *= vals[t].pow(i32::try_from(-rel[t] * rel[*var]).expect("small exponent"));
                    }
                }
                vals[*var] = v;
            }
            let [a1, a2, b1, b2, b3, c] = vals;
            solutions.push(Scalars { a1, a2, b: [b1, b2, b3], c });
        }
    }
    Ok(ScalarSystem { relations, reduced, solutions })
}
