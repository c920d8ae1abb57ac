//! Family files.
//!
//! ```text
//! vars: v1 v2 v3
//! 6*v1^2 + 6*v2^2 + 6*v3^2
//! ...
//! s: 8  d: 2
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. The trailer is
//! optional on input; when present it must agree with the forms.

use std::fmt::Write as _;

use super::{RealizableError, RealizableFamily};
use crate::groups::FormFamily;
use crate::poly::VarSpace;
use crate::{QFormFamily, QPoly};

/// A parsed family file: the forms plus the trailer, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyFile {
    pub forms: QFormFamily,
    pub s: Option<u32>,
    pub d: Option<u64>,
}

impl FamilyFile {
    /// Checks pre-realizability and that the trailer matches.
    pub fn into_family(self) -> Result<RealizableFamily, RealizableError> {
        let fam = RealizableFamily::new(self.forms)?;
        if let Some(s) = self.s.filter(|&s| s != fam.s()) {
            return Err(RealizableError::Syntax { line: 0, message: format!("trailer s: {s} but forms give {}", fam.s()) });
        }
        if let Some(d) = self.d.filter(|&d| d != fam.d()) {
            return Err(RealizableError::Syntax { line: 0, message: format!("trailer d: {d} but forms give {}", fam.d()) });
        }
        Ok(fam)
    }
}

pub fn write_family(family: &RealizableFamily) -> String {
    let mut out = String::new();
    let names: Vec<&str> = (0..family.nvars()).map(|i| family.space().name(i)).collect();
    writeln!(out, "vars: {}", names.join(" ")).unwrap();
    for q in family.forms() {
        writeln!(out, "{q}").unwrap();
    }
    writeln!(out, "s: {}  d: {}", family.s(), family.d()).unwrap();
    out
}

pub fn parse_family(text: &str) -> Result<FamilyFile, RealizableError> {
    let syntax = |line: usize, message: String| RealizableError::Syntax { line, message };
    let mut space = None;
    let mut forms = Vec::new();
    let mut s = None;
    let mut d = None;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("vars:") {
            if space.is_some() {
                return Err(syntax(lineno, "duplicate vars line".into()));
            }
            let names: Vec<&str> = rest.split_whitespace().collect();
            if names.is_empty() {
                return Err(syntax(lineno, "no variables".into()));
            }
            space = Some(VarSpace::new(names).map_err(|e| syntax(lineno, e.to_string()))?);
            continue;
        }
        if line.starts_with("s:") {
            (s, d) = parse_trailer(line).ok_or_else(|| syntax(lineno, format!("bad trailer `{line}`")))?;
            continue;
        }
        if s.is_some() {
            return Err(syntax(lineno, "form after trailer".into()));
        }
        let space = space.as_ref().ok_or_else(|| syntax(lineno, "missing vars line".into()))?;
        forms.push(QPoly::parse(line, space).map_err(|e| syntax(lineno, e.to_string()))?);
    }
    if space.is_none() {
        return Err(syntax(0, "missing vars line".into()));
    }
    let forms = FormFamily::new(forms)?;
    Ok(FamilyFile { forms, s, d })
}

/// `s: <int>  d: <int>`.
fn parse_trailer(line: &str) -> Option<(Option<u32>, Option<u64>)> {
    let mut toks = line.split_whitespace();
    let mut s = None;
    let mut d = None;
    while let Some(key) = toks.next() {
        let value = toks.next()?;
        match key {
            "s:" => s = Some(value.parse().ok()?),
            "d:" => d = Some(value.parse().ok()?),
            _ => return None,
        }
    }
    Some((s, d))
}
