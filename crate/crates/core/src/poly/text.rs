//! Text grammar shared by polynomials and graded-commutative elements.
//!
//! ```text
//! sum    := [sign] term { sign term }
//! term   := factor { "*" factor }
//! factor := int [ "/" int ] | name [ "^" int ]
//! ```
//!
//! Whitespace is insignificant. Names start with a letter or `_` and may
//! continue with letters, digits, `_` and `'`.

use std::fmt;

use crate::scalar::Scalar;

use super::PolyError;

/// A parsed term before variable names are resolved.
#[derive(Clone, Debug)]
pub(crate) struct RawTerm<S> {
    pub coeff: S,
    /// `(name, exponent, byte offset)` in source order.
    pub factors: Vec<(String, u32, usize)>,
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn err(&self, message: impl Into<String>) -> PolyError {
        PolyError::Syntax { position: self.pos, message: message.into() }
    }

    fn digits(&mut self) -> Result<&'a str, PolyError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(&self.src[start..self.pos])
    }

    fn ident(&mut self) -> &'a str {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_' || c == '\'') {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }
}

fn scalar_from_digits<S: Scalar>(digits: &str, at: usize) -> Result<S, PolyError> {
    digits
        .parse::<S>()
        .map_err(|_| PolyError::Syntax { position: at, message: format!("bad number `{digits}`") })
}

fn parse_term<S: Scalar>(cur: &mut Cursor<'_>) -> Result<RawTerm<S>, PolyError> {
    let mut coeff = S::one();
    let mut factors = Vec::new();
    loop {
        cur.skip_ws();
        let at = cur.pos;
        match cur.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num: S = scalar_from_digits(cur.digits()?, at)?;
                cur.skip_ws();
                let value = if cur.peek() == Some('/') {
                    cur.bump();
                    cur.skip_ws();
                    let den_at = cur.pos;
                    let den: S = scalar_from_digits(cur.digits()?, den_at)?;
                    if den.is_zero() {
                        return Err(PolyError::Syntax { position: den_at, message: "zero denominator".into() });
                    }
                    num / den
                } else {
                    num
                };
                coeff = coeff * value;
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let name = cur.ident().to_string();
                cur.skip_ws();
                let mut exp = 1u32;
                if cur.peek() == Some('^') {
                    cur.bump();
                    cur.skip_ws();
                    let exp_at = cur.pos;
                    let digits = cur.digits()?;
                    exp = digits.parse().map_err(|_| PolyError::Syntax {
                        position: exp_at,
                        message: format!("exponent `{digits}` out of range"),
                    })?;
                }
                factors.push((name, exp, at));
            }
            Some(c) => return Err(cur.err(format!("unexpected `{c}`"))),
            None => return Err(cur.err("unexpected end of input")),
        }
        cur.skip_ws();
        if cur.peek() == Some('*') {
            cur.bump();
        } else {
            return Ok(RawTerm { coeff, factors });
        }
    }
}

/// Parses a signed sum of terms.
pub(crate) fn parse_sum<S: Scalar>(src: &str) -> Result<Vec<RawTerm<S>>, PolyError> {
    let mut cur = Cursor { src, pos: 0 };
    let mut terms = Vec::new();
    cur.skip_ws();
    let mut negative = false;
    match cur.peek() {
        Some('-') => {
            cur.bump();
            negative = true;
        }
        Some('+') => {
            cur.bump();
        }
        _ => {}
    }
    loop {
        let mut term = parse_term::<S>(&mut cur)?;
        if negative {
            term.coeff = -term.coeff;
        }
        terms.push(term);
        cur.skip_ws();
        match cur.bump() {
            Some('+') => negative = false,
            Some('-') => negative = true,
            None => return Ok(terms),
            Some(c) => {
                cur.pos -= c.len_utf8();
                return Err(cur.err(format!("unexpected `{c}`")));
            }
        }
    }
}

/// Writes one term of a sum. `factors` yields `(name, exponent)` pairs with
/// nonzero exponents.
pub(crate) fn write_term<'n, S: Scalar>(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    coeff: &S,
    factors: impl Iterator<Item = (&'n str, u32)>,
) -> fmt::Result {
    let negative = coeff.is_negative();
    match (first, negative) {
        (true, true) => f.write_str("-")?,
        (true, false) => {}
        (false, true) => f.write_str(" - ")?,
        (false, false) => f.write_str(" + ")?,
    }
    let abs = coeff.abs();
    let mut factors = factors.peekable();
    let mut need_star = false;
    if factors.peek().is_none() || !abs.is_one() {
        write!(f, "{abs}")?;
        need_star = true;
    }
    for (name, exp) in factors {
        if need_star {
            f.write_str("*")?;
        }
        need_star = true;
        if exp == 1 {
            f.write_str(name)?;
        } else {
            write!(f, "{name}^{exp}")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    #[test]
    fn parses_rational_coefficients() {
        let terms = parse_sum::<Rat>("3/2*v1^2*v2 - v3").unwrap();
        assert_eq!(terms.len(), 2);
        assert_eq!(terms[0].coeff, Rat::new(3.into(), 2.into()));
        assert_eq!(terms[0].factors.len(), 2);
        assert_eq!(terms[1].coeff, Rat::from_integer((-1).into()));
    }

    #[test]
    fn reports_error_position() {
        match parse_sum::<Rat>("v1 + * v2") {
            Err(PolyError::Syntax { position, .. }) => assert_eq!(position, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_sum::<Rat>("1/0"), Err(PolyError::Syntax { position: 2, .. })));
        assert!(parse_sum::<Rat>("").is_err());
        assert!(parse_sum::<Rat>("v1 v2").is_err());
    }
}
