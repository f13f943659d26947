//! Reading rational forms written the way they are usually typeset:
//! `(1 + qt)(1 + qt + q^2t^2)` over `(1-t)(1-q^2t)(1-q^3t^2)`.
//! Juxtaposition multiplies; `^` takes a nonnegative integer exponent.

use super::{BiPoly, KernelError, RatFun2};
use num_bigint::BigInt;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
#[error("cannot parse `{input}` at byte {at}: {msg}")]
pub struct ParseError {
    pub input: String,
    pub at: usize,
    pub msg: String,
}

struct Parser<'a> {
    s: &'a [u8],
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { s: src.as_bytes(), src, pos: 0 }
    }

    fn err(&self, msg: &str) -> ParseError {
        ParseError { input: self.src.to_string(), at: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && (self.s[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.src[start..self.pos].parse().map_err(|_| self.err("expected integer"))
    }

    fn expr(&mut self) -> Result<BiPoly, ParseError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.scale(&BigInt::from(-1))
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<BiPoly, ParseError> {
        let mut acc = self.power()?;
        while let Some(c) = self.peek() {
            if c == b'*' {
                self.pos += 1;
            } else if !(c.is_ascii_digit() || c == b'q' || c == b't' || c == b'(') {
                break;
            }
            acc = acc.mul(&self.power()?);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<BiPoly, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let braced = self.peek() == Some(b'{');
            if braced {
                self.pos += 1;
            }
            let e: u32 = self.number()?.try_into().map_err(|_| self.err("exponent too large"))?;
            if braced {
                if self.peek() != Some(b'}') {
                    return Err(self.err("expected `}`"));
                }
                self.pos += 1;
            }
            let mut out = BiPoly::one();
            for _ in 0..e {
                out = out.mul(&base);
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<BiPoly, ParseError> {
        match self.peek() {
            Some(b'q') => {
                self.pos += 1;
                Ok(BiPoly::monomial(1, 0, 1))
            }
            Some(b't') => {
                self.pos += 1;
                Ok(BiPoly::monomial(1, 1, 0))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                let mut p = BiPoly::zero();
                p.add_term(0, 0, n);
                Ok(p)
            }
            _ => Err(self.err("expected q, t, integer or `(`")),
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if self.peek().is_some() {
            Err(self.err("trailing input"))
        } else {
            Ok(())
        }
    }
}

/// Polynomial in `t`, `q` from text.
pub fn parse_bipoly(s: &str) -> Result<BiPoly, ParseError> {
    let mut p = Parser::new(s);
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// A product of factors each of the form `(1 - q^a t^b)`, optionally with
/// an outer exponent. Returns the `(b, a)` list.
pub fn parse_denominator(s: &str) -> Result<Vec<(u32, u32)>, ParseError> {
    let mut p = Parser::new(s);
    let mut out = Vec::new();
    while p.peek().is_some() {
        if p.peek() == Some(b'*') {
            p.pos += 1;
        }
        let f = p.power()?;
        let (b, a) = match f.terms().filter(|(t, q, _)| (*t, *q) != (0, 0)).min_by_key(|(t, q, _)| (*t, *q)) {
            Some((t, q, c)) if *c < BigInt::from(0) && t >= 0 && q >= 0 => (t as u32, q as u32),
            _ => return Err(p.err("factor is not of the form (1 - q^a t^b)^k")),
        };
        let unit = BiPoly::factor(b, a);
        let mut pow = unit.clone();
        let mut k = 1;
        while pow != f {
            if k == 16 {
                return Err(p.err("factor is not of the form (1 - q^a t^b)^k"));
            }
            pow = pow.mul(&unit);
            k += 1;
        }
        out.extend(std::iter::repeat_n((b, a), k));
    }
    Ok(out)
}

/// Numerator and denominator strings to a rational form.
pub fn parse_ratfun(num: &str, den: &str) -> Result<RatFun2, ParseError> {
    let n = parse_bipoly(num)?;
    let d = parse_denominator(den)?;
    RatFun2::new(n, d).map_err(|e: KernelError| ParseError { input: den.to_string(), at: 0, msg: e.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials() {
        assert_eq!(parse_bipoly("1 + qt").unwrap(), BiPoly::from_terms(&[(0, 0, 1), (1, 1, 1)]));
        assert_eq!(
            parse_bipoly("(1 + qt)^2").unwrap(),
            BiPoly::from_terms(&[(0, 0, 1), (1, 1, 2), (2, 2, 1)])
        );
        assert_eq!(
            parse_bipoly("1 + qt - q^2t^2 - q^3t^2").unwrap(),
            BiPoly::from_terms(&[(0, 0, 1), (1, 1, 1), (2, 2, -1), (2, 3, -1)])
        );
        assert_eq!(parse_bipoly("1+t(q+q^2)").unwrap(), BiPoly::from_terms(&[(0, 0, 1), (1, 1, 1), (1, 2, 1)]));
        assert_eq!(parse_bipoly("2q^{10}t^4").unwrap(), BiPoly::from_terms(&[(4, 10, 2)]));
        assert_eq!(parse_bipoly("-q").unwrap(), BiPoly::from_terms(&[(0, 1, -1)]));
        assert!(parse_bipoly("1 + ").is_err());
        assert!(parse_bipoly("(1 + q").is_err());
        assert!(parse_bipoly("x").is_err());
    }

    #[test]
    fn denominators() {
        assert_eq!(parse_denominator("(1-t)(1-q^2t)(1-q^3t^2)").unwrap(), vec![(1, 0), (1, 2), (2, 3)]);
        assert_eq!(parse_denominator("(1 - t)(1 - q^2t)^2").unwrap(), vec![(1, 0), (1, 2), (1, 2)]);
        assert_eq!(parse_denominator("(1-tq^7)").unwrap(), vec![(1, 7)]);
        assert!(parse_denominator("(1+t)").is_err());
        assert!(parse_denominator("(1-t-q)").is_err());
    }

    #[test]
    fn forms() {
        let r = parse_ratfun("1 + qt", "(1-t)(1-qt)(1-q^2t)").unwrap();
        let s = r.expand(2).unwrap();
        assert_eq!(s.coeff(1), &crate::kernel::QPoly::from_i64(&[1, 2, 1]));
    }
}
