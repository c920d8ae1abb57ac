//! Text forms of elements, algebras and morphisms.
//!
//! Elements use the polynomial grammar; within a term the order of odd
//! generators matters (`y2*y1 = -y1*y2`). Output writes odd generators first
//! in generator order, then even ones.
//!
//! An algebra file is an optional block of `key: value` metadata lines, then
//! `generators:` followed by `name degree` lines, then `d(name) = element`
//! lines (omitted generators are closed). A morphism file has one
//! `f(name) = element` line per generator.

use std::fmt::{self, Write as _};
use std::sync::Arc;

use super::{Cdga, CdgaError, DgaMorphism, GcaElement, GcaMonomial, Generator, GeneratorSet};
use crate::poly::{parse_sum, write_term, PolyError};
use crate::scalar::Scalar;

impl<S: Scalar> GcaElement<S> {
    pub fn parse(text: &str, gens: &Arc<GeneratorSet>) -> Result<Self, CdgaError> {
        let raw = parse_sum::<S>(text).map_err(|e| syntax(0, e))?;
        let mut out = Self::zero(gens);
        'terms: for t in raw {
            let mut exps = vec![0u32; gens.len()];
            let mut odd_seq = Vec::new();
            for (name, e, position) in t.factors {
                let i = gens.index_of(&name).ok_or(CdgaError::Syntax {
                    line: 0,
                    message: format!("unknown generator `{name}` at byte {position}"),
                })?;
                if e == 0 {
                    continue;
                }
                if gens.is_odd(i) {
                    if e > 1 || exps[i] > 0 {
                        continue 'terms;
                    }
                    odd_seq.push(i);
                }
                exps[i] += e;
            }
            // sign of the permutation sorting the odd factors
            let inversions = (0..odd_seq.len())
                .map(|a| (a + 1..odd_seq.len()).filter(|&b| odd_seq[a] > odd_seq[b]).count())
                .sum::<usize>();
            let c = if inversions % 2 == 1 { -t.coeff } else { t.coeff };
            out.add_term(GcaMonomial(exps), c);
        }
        Ok(out)
    }
}

fn syntax(line: usize, e: PolyError) -> CdgaError {
    CdgaError::Syntax { line, message: e.to_string() }
}

impl<S: Scalar> fmt::Display for GcaElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let gens = &self.gens;
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let present = |odd: bool| {
                m.0.iter()
                    .enumerate()
                    .filter(move |&(i, &e)| e > 0 && gens.is_odd(i) == odd)
                    .map(|(i, &e)| (gens.get(i).name.as_str(), e))
            };
            write_term(f, k == 0, c, present(true).chain(present(false)))?;
        }
        Ok(())
    }
}

/// A parsed algebra file.
#[derive(Debug, Clone)]
pub struct CdgaFile<S: Scalar> {
    /// `key: value` lines before `generators:`, in order.
    pub metadata: Vec<(String, String)>,
    pub cdga: Cdga<S>,
}

pub fn write_cdga<S: Scalar>(a: &Cdga<S>, metadata: &[(String, String)]) -> String {
    let mut out = String::new();
    for (k, v) in metadata {
        writeln!(out, "{k}: {v}").unwrap();
    }
    writeln!(out, "generators:").unwrap();
    for g in a.gens.iter() {
        writeln!(out, "{} {}", g.name, g.degree).unwrap();
    }
    for (i, g) in a.gens.iter().enumerate() {
        if !a.differential[i].is_zero() {
            writeln!(out, "d({}) = {}", g.name, a.differential[i]).unwrap();
        }
    }
    out
}

/// Parses an algebra file; the degree check of [`Cdga::new`] applies.
pub fn parse_cdga<S: Scalar>(text: &str) -> Result<CdgaFile<S>, CdgaError> {
    parse_cdga_with(text, true)
}

/// As [`parse_cdga`] but keeps differentials of the wrong degree, so they can
/// be reported by [`Cdga::degree_audit`].
pub fn parse_cdga_unchecked<S: Scalar>(text: &str) -> Result<CdgaFile<S>, CdgaError> {
    parse_cdga_with(text, false)
}

fn parse_cdga_with<S: Scalar>(text: &str, checked: bool) -> Result<CdgaFile<S>, CdgaError> {
    let err = |line: usize, message: String| CdgaError::Syntax { line, message };
    let mut metadata = Vec::new();
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let mut gens = Vec::new();
    let mut saw_header = false;
    let mut diffs: Vec<(usize, &str, &str)> = Vec::new();
    for (lineno, line) in lines.by_ref() {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            if line == "generators:" {
                saw_header = true;
                continue;
            }
            let (k, v) = line.split_once(':').ok_or_else(|| err(lineno, format!("expected `key: value`, got `{line}`")))?;
            metadata.push((k.trim().to_string(), v.trim().to_string()));
            continue;
        }
        if let Some(rest) = line.strip_prefix("d(") {
            let (name, rhs) = rest.split_once(')').ok_or_else(|| err(lineno, "unclosed `d(`".into()))?;
            let rhs = rhs.trim_start().strip_prefix('=').ok_or_else(|| err(lineno, "expected `=`".into()))?;
            diffs.push((lineno, name.trim(), rhs));
            continue;
        }
        if !diffs.is_empty() {
            return Err(err(lineno, "generator line after differentials".into()));
        }
        let mut toks = line.split_whitespace();
        let (Some(name), Some(deg), None) = (toks.next(), toks.next(), toks.next()) else {
            return Err(err(lineno, format!("expected `name degree`, got `{line}`")));
        };
        let degree = deg.parse().map_err(|_| err(lineno, format!("bad degree `{deg}`")))?;
        gens.push(Generator::new(name, degree));
    }
    if !saw_header {
        return Err(err(0, "missing `generators:` line".into()));
    }
    let gens = GeneratorSet::new(gens)?;
    let mut differential: Vec<GcaElement<S>> = (0..gens.len()).map(|_| GcaElement::zero(&gens)).collect();
    let mut seen = vec![false; gens.len()];
    for (lineno, name, rhs) in diffs {
        let i = gens.index_of(name).ok_or_else(|| err(lineno, format!("unknown generator `{name}`")))?;
        if std::mem::replace(&mut seen[i], true) {
            return Err(err(lineno, format!("d({name}) given twice")));
        }
        differential[i] = GcaElement::parse(rhs, &gens).map_err(|e| relabel(e, lineno))?;
    }
    let cdga = if checked { Cdga::new(gens, differential)? } else { Cdga::new_unchecked(gens, differential)? };
    Ok(CdgaFile { metadata, cdga })
}

fn relabel(e: CdgaError, line: usize) -> CdgaError {
    match e {
        CdgaError::Syntax { message, .. } => CdgaError::Syntax { line, message },
        other => other,
    }
}

pub fn write_morphism<S: Scalar>(f: &DgaMorphism<S>) -> String {
    let mut out = String::new();
    for (g, img) in f.source.gens.iter().zip(&f.images) {
        writeln!(out, "f({}) = {}", g.name, img).unwrap();
    }
    out
}

/// Parses `f(name) = element` lines; every generator must be assigned.
pub fn parse_morphism<S: Scalar>(
    text: &str,
    source: Arc<Cdga<S>>,
    target: Arc<Cdga<S>>,
) -> Result<DgaMorphism<S>, CdgaError> {
    let err = |line: usize, message: String| CdgaError::Syntax { line, message };
    let n = source.gens.len();
    let mut images: Vec<Option<GcaElement<S>>> = vec![None; n];
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let rest = line.strip_prefix("f(").ok_or_else(|| err(lineno, format!("expected `f(name) = ...`, got `{line}`")))?;
        let (name, rhs) = rest.split_once(')').ok_or_else(|| err(lineno, "unclosed `f(`".into()))?;
        let rhs = rhs.trim_start().strip_prefix('=').ok_or_else(|| err(lineno, "expected `=`".into()))?;
        let idx = source.gens.index_of(name.trim()).ok_or_else(|| err(lineno, format!("unknown generator `{}`", name.trim())))?;
        if images[idx].is_some() {
            return Err(err(lineno, format!("f({}) given twice", name.trim())));
        }
        images[idx] = Some(GcaElement::parse(rhs, &target.gens).map_err(|e| relabel(e, lineno))?);
    }
    let images = images
        .into_iter()
        .enumerate()
        .map(|(i, img)| img.ok_or_else(|| err(0, format!("no image for `{}`", source.gens.get(i).name))))
        .collect::<Result<Vec<_>, _>>()?;
    DgaMorphism::new(source, target, images)
}
