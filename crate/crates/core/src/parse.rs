//! Parser for polynomial strings such as `(k-1)*(k+1)/(k^4*q-1)*x1 + x2`.
//!
//! Identifiers: `q`, `k`, `k_sh`, `g1`, `g2_sh`, ..., the sign `eps` (substituted by a
//! given ±1), and `x1`..`xr`. Division is allowed only by expressions free of x, or by
//! a single x-monomial.

use crate::error::{Error, Result};
use crate::grouplalg::Laurent;
use crate::poly::var_by_name;
use crate::scalars::{Coeff, Scalar};
use crate::weight::Weight;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let v = text.parse().map_err(|_| Error::Parse(format!("number too large: {text}")))?;
            out.push(Tok::Num(v));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    rank: usize,
    eps: Option<i8>,
    src: &'a str,
}

type L = Laurent<Scalar>;

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at token {} in {:?}", self.pos, self.src))
    }

    fn expr(&mut self) -> Result<L> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<L> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                acc = self.divide(&acc, &d)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn divide(&self, a: &L, d: &L) -> Result<L> {
        if d.len() != 1 {
            return Err(self.err("division by a sum involving x"));
        }
        let (w, c) = d.terms().next().map(|(w, c)| (*w, c.clone())).ok_or(Error::DivisionByZero)?;
        let inv = c.inv()?;
        Ok(a.mul_monomial(&w.neg(), &inv))
    }

    fn unary(&mut self) -> Result<L> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        let paren = !neg && self.eat('(');
        let neg = neg || (paren && self.eat('-'));
        let v = match self.peek() {
            Some(Tok::Num(v)) => *v,
            _ => return Err(self.err("expected integer exponent")),
        };
        self.pos += 1;
        if paren && !self.eat(')') {
            return Err(self.err("expected )"));
        }
        Ok(if neg { -v } else { v })
    }

    fn power(&mut self) -> Result<L> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = self.signed_int()?;
        let e = i32::try_from(e).map_err(|_| self.err("exponent out of range"))?;
        if e >= 0 {
            return Ok(base.pow(e as u32));
        }
        let inv = self.divide(&Laurent::one(self.rank), &base)?;
        Ok(inv.pow((-e) as u32))
    }

    fn atom(&mut self) -> Result<L> {
        let tok = self.peek().cloned().ok_or_else(|| self.err("unexpected end"))?;
        self.pos += 1;
        match tok {
            Tok::Num(v) => Ok(Laurent::constant(self.rank, Scalar::from_i64(v))),
            Tok::Op('(') => {
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected )"));
                }
                Ok(e)
            }
            Tok::Ident(name) => self.ident(&name),
            Tok::Op(c) => Err(self.err(&format!("unexpected {c:?}"))),
        }
    }

    fn ident(&self, name: &str) -> Result<L> {
        if name == "eps" || name == "epsilon" {
            let e = self.eps.ok_or_else(|| self.err("eps appears but no sign was given"))?;
            return Ok(Laurent::constant(self.rank, Scalar::from_i64(e as i64)));
        }
        if let Some(idx) = name.strip_prefix('x').and_then(|d| d.parse::<usize>().ok()) {
            if idx == 0 || idx > self.rank {
                return Err(self.err(&format!("variable {name} outside x1..x{}", self.rank)));
            }
            return Ok(Laurent::x(Weight::unit(self.rank, idx - 1)));
        }
        let v = var_by_name(name).ok_or_else(|| self.err(&format!("unknown identifier {name}")))?;
        Ok(Laurent::constant(self.rank, Scalar::var(v)))
    }
}

/// Parses a Laurent polynomial in x1..x_rank with rational-function coefficients.
pub fn parse_laurent(s: &str, rank: usize, eps: Option<i8>) -> Result<Laurent<Scalar>> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, rank, eps, src: s };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

/// Parses a coefficient expression (no x variables).
pub fn parse_scalar(s: &str, eps: Option<i8>) -> Result<Scalar> {
    let l = parse_laurent(s, 0, eps)?;
    Ok(l.as_constant().unwrap_or_else(Scalar::zero))
}

/// Parses a weight written as `1,0,-2` or `(1,0,-2)`.
pub fn parse_weight(s: &str) -> Result<Weight> {
    let t = s.trim().trim_start_matches('(').trim_end_matches(')');
    let coords: Vec<i32> = t
        .split(',')
        .map(|c| c.trim().parse::<i32>().map_err(|_| Error::Parse(format!("bad weight {s:?}"))))
        .collect::<Result<_>>()?;
    if coords.is_empty() || coords.len() > crate::weight::MAX_COORDS {
        return Err(Error::Parse(format!("bad weight length in {s:?}")));
    }
    Ok(Weight::new(&coords))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{var_g_lg, VAR_K_LG, VAR_Q};

    #[test]
    fn parses_table_style() {
        let e = parse_laurent("(k-1)*(k+1)/(k^4*q-1)*x1 + x2", 3, None).unwrap();
        let k = Scalar::var(VAR_K_LG);
        let q = Scalar::var(VAR_Q);
        let c = k.mul(&k).sub(&Scalar::one()).div(&k.pow(4).unwrap().mul(&q).sub(&Scalar::one())).unwrap();
        let mut expect = Laurent::x(Weight::new(&[0, 1, 0]));
        expect.add_term(Weight::new(&[1, 0, 0]), c);
        assert_eq!(e, expect);
    }

    #[test]
    fn eps_and_negatives() {
        let a = parse_laurent("-(k-1)/(k*(k+eps*q^2))*x1^2", 3, Some(-1)).unwrap();
        let b = parse_laurent("(1-k)/(k^2-k*q^2)*x1^2", 3, None).unwrap();
        assert_eq!(a, b);
        assert!(parse_laurent("eps", 1, None).is_err());
        let c = parse_scalar("k^-2*g1^(-1)", None).unwrap();
        assert_eq!(c, Scalar::var_pow(VAR_K_LG, -2).div(&Scalar::var(var_g_lg(1))).unwrap());
        assert_eq!(parse_laurent("x1^-1*x2", 2, None).unwrap(), Laurent::x(Weight::new(&[-1, 1])));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_laurent("x4", 3, None).is_err());
        assert!(parse_laurent("1/(x1+x2)", 3, None).is_err());
        assert!(parse_laurent("k +", 3, None).is_err());
        assert!(parse_laurent("zz", 3, None).is_err());
        assert!(parse_weight("1,a").is_err());
        assert_eq!(parse_weight("(1,0,-2)").unwrap(), Weight::new(&[1, 0, -2]));
    }

    #[test]
    fn display_round_trip() {
        let e = parse_laurent("(k-1)*(k+1)*g1^2/(k^2*g1^3*q^3+1)*x1 - 1/2*q^-1*x3^2 + 3", 3, None).unwrap();
        let back = parse_laurent(&e.to_string(), 3, None).unwrap();
        assert_eq!(e, back);
    }
}
