//! A tiny evaluator for bound formulas written as text, e.g.
//! `sum(i=0..d, [n,i]) - q^(d*(d+1))*[n-d-1,d] + 1`.
//!
//! Gaussian brackets `[a,b]` are computed with the q-Pascal recurrence
//! rather than the product formula, so a formula string evaluated here is a
//! second, independent route to every bound value.
//!
//! Grammar: `+ - * /` (exact division only), right-associative `^`, unary
//! minus, integer literals, identifiers bound in the environment,
//! `[a,b]`, `sum(v=lo..hi, body)`, `max(x, y)`, `min(x, y)`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("syntax error at byte {0}: {1}")]
    Syntax(usize, String),
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("inexact or zero division")]
    Division,
    #[error("exponent out of range")]
    Exponent,
}

pub fn evaluate(src: &str, env: &HashMap<String, i64>) -> Result<BigInt, ExprError> {
    let q = *env.get("q").ok_or_else(|| ExprError::Unbound("q".into()))?;
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        env: env.iter().map(|(k, &v)| (k.clone(), BigInt::from(v))).collect(),
        q: BigInt::from(q),
        memo: HashMap::new(),
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    env: HashMap<String, BigInt>,
    q: BigInt,
    memo: HashMap<(i64, i64), BigInt>,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> ExprError {
        ExprError::Syntax(self.pos, msg.to_string())
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            && !(self.pos == start && self.src[self.pos].is_ascii_digit())
        {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into())
    }

    fn expr(&mut self) -> Result<BigInt, ExprError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc += self.term()?;
            } else if self.eat(b'-') {
                acc -= self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<BigInt, ExprError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc *= self.unary()?;
            } else if self.eat(b'/') {
                let d = self.unary()?;
                if d.is_zero() || !(&acc % &d).is_zero() {
                    return Err(ExprError::Division);
                }
                acc /= d;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<BigInt, ExprError> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let e = self.unary()?;
            let e = e.to_u32().ok_or(ExprError::Exponent)?;
            return Ok(num_traits::pow(base, e as usize));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<BigInt, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(b'[') => {
                self.pos += 1;
                let top = self.expr()?;
                self.expect(b',')?;
                let bottom = self.expr()?;
                self.expect(b']')?;
                Ok(self.gauss(&top, &bottom))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(s.parse().unwrap())
            }
            Some(_) => {
                let name = self.ident().ok_or_else(|| self.err("expected a term"))?;
                match name.as_str() {
                    "sum" => self.sum(),
                    "max" | "min" => {
                        self.expect(b'(')?;
                        let a = self.expr()?;
                        self.expect(b',')?;
                        let b = self.expr()?;
                        self.expect(b')')?;
                        Ok(if (name == "max") == (a >= b) { a } else { b })
                    }
                    _ => self
                        .env
                        .get(&name)
                        .cloned()
                        .ok_or(ExprError::Unbound(name)),
                }
            }
            None => Err(self.err("unexpected end of input")),
        }
    }

    /// `sum(v=lo..hi, body)`: the body is re-parsed once per index value.
    fn sum(&mut self) -> Result<BigInt, ExprError> {
        self.expect(b'(')?;
        let var = self.ident().ok_or_else(|| self.err("expected index variable"))?;
        self.expect(b'=')?;
        let lo = self.expr()?;
        self.expect(b'.')?;
        self.expect(b'.')?;
        let hi = self.expr()?;
        self.expect(b',')?;
        let body_start = self.pos;
        let saved = self.env.get(&var).cloned();
        let mut acc = BigInt::zero();
        let mut i = lo.clone();
        let mut body_end = None;
        // parse once even for an empty range, to find where the body ends
        self.env.insert(var.clone(), lo.clone());
        if i > hi {
            self.expr()?;
            body_end = Some(self.pos);
        }
        while i <= hi {
            self.pos = body_start;
            self.env.insert(var.clone(), i.clone());
            acc += self.expr()?;
            body_end = Some(self.pos);
            i += 1;
        }
        self.pos = body_end.unwrap_or(body_start);
        match saved {
            Some(v) => self.env.insert(var, v),
            None => self.env.remove(&var),
        };
        self.expect(b')')?;
        Ok(acc)
    }

    /// `[a, k]_q` via `[a,k] = q^{a−k} [a−1,k−1] + [a−1,k]`.
    fn gauss(&mut self, a: &BigInt, k: &BigInt) -> BigInt {
        if a.is_negative() || k.is_negative() || k > a {
            return BigInt::zero();
        }
        let (a, k) = (a.to_i64().unwrap(), k.to_i64().unwrap());
        self.gauss_rec(a, k)
    }

    fn gauss_rec(&mut self, a: i64, k: i64) -> BigInt {
        if k == 0 || k == a {
            return BigInt::one();
        }
        if let Some(v) = self.memo.get(&(a, k)) {
            return v.clone();
        }
        let v = num_traits::pow(self.q.clone(), (a - k) as usize) * self.gauss_rec(a - 1, k - 1)
            + self.gauss_rec(a - 1, k);
        self.memo.insert((a, k), v.clone());
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(pairs: &[(&str, i64)]) -> HashMap<String, i64> {
        pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
    }

    #[test]
    fn arithmetic_and_brackets() {
        let e = env(&[("q", 2), ("n", 4)]);
        assert_eq!(evaluate("[n,2]", &e).unwrap(), BigInt::from(35));
        assert_eq!(evaluate("2^3^2", &e).unwrap(), BigInt::from(512));
        assert_eq!(evaluate("-2^2 + 10/5*3", &e).unwrap(), BigInt::from(2));
        assert_eq!(evaluate("[2,3] + [n,0]", &e).unwrap(), BigInt::from(1));
        assert_eq!(evaluate("max(3, 7) - min(3, 7)", &e).unwrap(), BigInt::from(4));
        assert_eq!(evaluate("(-1)^3", &e).unwrap(), BigInt::from(-1));
    }

    #[test]
    fn sums() {
        let e = env(&[("q", 2), ("n", 6), ("d", 1)]);
        assert_eq!(evaluate("sum(i=0..d, [n,i]) + [n-1,d]", &e).unwrap(), BigInt::from(95));
        assert_eq!(evaluate("sum(i=1..0, 5) + 1", &e).unwrap(), BigInt::from(1));
        assert_eq!(
            evaluate("sum(i=0..2, sum(j=0..i, 1))", &e).unwrap(),
            BigInt::from(6)
        );
    }

    #[test]
    fn errors() {
        let e = env(&[("q", 2)]);
        assert_eq!(evaluate("x + 1", &e), Err(ExprError::Unbound("x".into())));
        assert_eq!(evaluate("3/2", &e), Err(ExprError::Division));
        assert!(matches!(evaluate("(1", &e), Err(ExprError::Syntax(..))));
        assert!(matches!(evaluate("1 1", &e), Err(ExprError::Syntax(..))));
        assert!(evaluate("1", &HashMap::new()).is_err());
    }
}
