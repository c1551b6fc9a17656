//! Countable ordinals below epsilon_0 in Cantor normal form.
//!
//! An ordinal is a list of `(exponent, coefficient)` terms with strictly
//! decreasing exponents and positive coefficients; the empty list is 0.
//! Only addition and successor are available as runtime operations.
//! Products and powers exist only as literals in the text syntax
//! (`w^2*3`, `w^(w+1)`).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Maximum exponent nesting accepted by the parser.
///
/// Every ordinal built in this crate is far below this; the cap keeps the
/// representation strictly below epsilon_0 and bounds parser recursion.
pub const MAX_NESTING: usize = 16;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<(Ordinal, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("zero coefficient at position {pos}")]
    ZeroCoefficient { pos: usize },
    #[error("exponent nesting deeper than {MAX_NESTING} levels at position {pos}; only ordinals well below epsilon_0 are supported")]
    TooDeep { pos: usize },
    #[error("coefficient overflow")]
    Overflow,
    #[error("supremum of an empty list")]
    EmptySup,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::nat(1)
    }

    pub fn omega() -> Self {
        Self::term(Self::one(), 1)
    }

    pub fn nat(n: u64) -> Self {
        Self::term(Self::zero(), n)
    }

    /// `w^exp * coeff`; a zero coefficient gives 0.
    pub fn term(exp: Ordinal, coeff: u64) -> Self {
        if coeff == 0 {
            Self::zero()
        } else {
            Ordinal {
                terms: vec![(exp, coeff)],
            }
        }
    }

    pub fn terms(&self) -> &[(Ordinal, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff nonzero with no finite part. 0 is neither limit nor successor.
    pub fn is_limit(&self) -> bool {
        match self.terms.last() {
            Some((e, _)) => !e.is_zero(),
            None => false,
        }
    }

    pub fn is_successor(&self) -> bool {
        matches!(self.terms.last(), Some((e, _)) if e.is_zero())
    }

    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(e, c)] if e.is_zero() => Some(*c),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_finite().is_some()
    }

    pub fn successor(&self) -> Ordinal {
        let mut terms = self.terms.clone();
        match terms.last_mut() {
            Some((e, c)) if e.is_zero() => *c += 1,
            _ => terms.push((Ordinal::zero(), 1)),
        }
        Ordinal { terms }
    }

    pub fn predecessor(&self) -> Option<Ordinal> {
        if !self.is_successor() {
            return None;
        }
        let mut terms = self.terms.clone();
        let last = terms.last_mut().unwrap();
        last.1 -= 1;
        if last.1 == 0 {
            terms.pop();
        }
        Some(Ordinal { terms })
    }

    /// Ordinal sum `self + other`.
    pub fn add(&self, other: &Ordinal) -> Ordinal {
        let Some((lead, lead_c)) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<(Ordinal, u64)> =
            Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut merged = *lead_c;
        for (e, c) in &self.terms {
            match e.cmp(lead) {
                Ordering::Greater => terms.push((e.clone(), *c)),
                Ordering::Equal => merged += c,
                Ordering::Less => break,
            }
        }
        terms.push((lead.clone(), merged));
        terms.extend(other.terms[1..].iter().cloned());
        Ordinal { terms }
    }

    /// `self + n` for a natural `n`.
    pub fn add_nat(&self, n: u64) -> Ordinal {
        self.add(&Ordinal::nat(n))
    }

    /// Largest element of a nonempty list.
    pub fn sup_finite(xs: &[Ordinal]) -> Result<Ordinal, OrdinalError> {
        xs.iter().max().cloned().ok_or(OrdinalError::EmptySup)
    }

    /// Exponent nesting depth: 0 for 0, otherwise one more than the deepest exponent.
    pub fn depth(&self) -> usize {
        self.terms
            .iter()
            .map(|(e, _)| 1 + e.depth())
            .max()
            .unwrap_or(0)
    }

    /// The n-th element of the canonical fundamental sequence of a limit ordinal.
    ///
    /// For `b + w^e*c` this is `b + w^e*(c-1) + x` where `x = w^p * n` if
    /// `e = p+1`, and `x = w^(e[n])` if `e` is itself a limit.
    pub fn fundamental(&self, n: u64) -> Option<Ordinal> {
        if !self.is_limit() {
            return None;
        }
        let (base, e) = self.split_last_unit();
        let tail = match e.predecessor() {
            Some(p) => Ordinal::term(p, n),
            None => Ordinal::term(e.fundamental(n)?, 1),
        };
        Some(base.add(&tail))
    }

    /// The fundamental sequence as an expression in `n`, evaluable with
    /// [`eval_pattern`]. Returns `None` for non-limits.
    pub fn fundamental_pattern(&self) -> Option<String> {
        if !self.is_limit() {
            return None;
        }
        let (base, e) = self.split_last_unit();
        let tail = match e.predecessor() {
            Some(p) if p.is_zero() => "n".to_string(),
            Some(p) if p == Ordinal::one() => "w*n".to_string(),
            Some(p) => format!("w^({p})*n"),
            None => format!("w^({})", e.fundamental_pattern()?),
        };
        if base.is_zero() {
            Some(tail)
        } else {
            Some(format!("{base}+{tail}"))
        }
    }

    /// Splits `b + w^e*c` into `(b + w^e*(c-1), e)`.
    fn split_last_unit(&self) -> (Ordinal, Ordinal) {
        let mut terms = self.terms.clone();
        let (e, c) = terms.pop().expect("nonzero ordinal");
        if c > 1 {
            terms.push((e.clone(), c - 1));
        }
        (Ordinal { terms }, e)
    }

    pub fn parse(text: &str) -> Result<Ordinal, OrdinalError> {
        Parser::new(text, false).parse_all()
    }
}

/// Evaluates an ordinal expression pattern in which the identifier `n`
/// stands for a natural number. Zero coefficients are allowed here, so that
/// patterns such as `w*n` make sense at `n = 0`.
pub fn eval_pattern(pattern: &str, n: u64) -> Result<Ordinal, OrdinalError> {
    let text = pattern.replace('n', &n.to_string());
    Parser::new(&text, true).parse_all()
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let ord = a.0.cmp(&b.0).then(a.1.cmp(&b.1));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::nat(n)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if e.is_zero() {
                write!(f, "{c}")?;
                continue;
            }
            match e.as_finite() {
                Some(1) => write!(f, "w")?,
                Some(k) => write!(f, "w^{k}")?,
                None if *e == Ordinal::omega() => write!(f, "w^w")?,
                None => write!(f, "w^({e})")?,
            }
            if *c > 1 {
                write!(f, "*{c}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ordinal({self})")
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ordinal::parse(s)
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Ordinal::parse(&s).map_err(serde::de::Error::custom)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    allow_zero: bool,
    nesting: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, allow_zero: bool) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            allow_zero,
            nesting: 0,
        }
    }

    fn parse_all(mut self) -> Result<Ordinal, OrdinalError> {
        let v = self.expr()?;
        self.skip_ws();
        if self.pos < self.src.len() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(v)
    }

    fn err(&self, msg: &str) -> OrdinalError {
        OrdinalError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
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

    fn eat(&mut self, ch: u8) -> bool {
        if self.peek() == Some(ch) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Ordinal, OrdinalError> {
        let mut acc = self.term()?;
        while self.eat(b'+') {
            let t = self.term()?;
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Ordinal, OrdinalError> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                let exp = if self.eat(b'^') {
                    self.atom()?
                } else {
                    Ordinal::one()
                };
                let coeff = if self.eat(b'*') {
                    self.coefficient()?
                } else {
                    1
                };
                Ok(Ordinal::term(exp, coeff))
            }
            Some(c) if c.is_ascii_digit() => Ok(Ordinal::nat(self.nat()?)),
            Some(_) => Err(self.err("expected 'w' or a natural number")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn atom(&mut self) -> Result<Ordinal, OrdinalError> {
        self.nesting += 1;
        if self.nesting > MAX_NESTING {
            return Err(OrdinalError::TooDeep { pos: self.pos });
        }
        let v = match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                Ordinal::omega()
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                v
            }
            Some(c) if c.is_ascii_digit() => Ordinal::nat(self.nat()?),
            _ => return Err(self.err("expected exponent")),
        };
        self.nesting -= 1;
        Ok(v)
    }

    fn coefficient(&mut self) -> Result<u64, OrdinalError> {
        self.skip_ws();
        let start = self.pos;
        let c = self.nat()?;
        if c == 0 && !self.allow_zero {
            return Err(OrdinalError::ZeroCoefficient { pos: start });
        }
        Ok(c)
    }

    fn nat(&mut self) -> Result<u64, OrdinalError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a natural number"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        digits.parse().map_err(|_| OrdinalError::Overflow)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        Ordinal::parse(s).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(o("0"), Ordinal::zero());
        assert_eq!(o("w+3").to_string(), "w+3");
        assert_eq!(o("3+w"), Ordinal::omega());
        assert_eq!(o("w^2*3 + w*2 + 7").to_string(), "w^2*3+w*2+7");
        assert_eq!(o("w^w").to_string(), "w^w");
        assert_eq!(o("w^(w+1)*2").to_string(), "w^(w+1)*2");
        assert_eq!(o("w^0"), Ordinal::one());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            Ordinal::parse("w*0"),
            Err(OrdinalError::ZeroCoefficient { pos: 2 })
        ));
        assert!(matches!(
            Ordinal::parse("w+"),
            Err(OrdinalError::Syntax { .. })
        ));
        assert!(matches!(
            Ordinal::parse("w^(w"),
            Err(OrdinalError::Syntax { .. })
        ));
        assert!(matches!(
            Ordinal::parse("x"),
            Err(OrdinalError::Syntax { pos: 0, .. })
        ));
        let deep = format!(
            "{}1{}",
            "w^(".repeat(MAX_NESTING + 1),
            ")".repeat(MAX_NESTING + 1)
        );
        assert!(matches!(
            Ordinal::parse(&deep),
            Err(OrdinalError::TooDeep { .. })
        ));
        let ok = format!("{}1{}", "w^(".repeat(MAX_NESTING), ")".repeat(MAX_NESTING));
        assert!(Ordinal::parse(&ok).is_ok());
    }

    #[test]
    fn compare_examples() {
        assert!(Ordinal::omega() > Ordinal::nat(5));
        assert_eq!(o("w+1").cmp(&o("w+1")), Ordering::Equal);
        assert!(o("w*2") > o("w+9"));
    }

    #[test]
    fn successor_examples() {
        assert_eq!(Ordinal::zero().successor(), Ordinal::one());
        assert_eq!(Ordinal::omega().successor(), o("w+1"));
        assert_eq!(o("w*2+4").successor(), o("w*2+5"));
    }

    #[test]
    fn add_examples() {
        assert_eq!(Ordinal::one().add(&Ordinal::omega()), Ordinal::omega());
        assert_eq!(Ordinal::omega().add(&Ordinal::one()), o("w+1"));
        assert_eq!(o("w+2").add(&o("w*3")), o("w*4"));
    }

    #[test]
    fn sup_examples() {
        assert_eq!(Ordinal::sup_finite(&[o("0")]).unwrap(), o("0"));
        assert_eq!(
            Ordinal::sup_finite(&[o("w"), o("4"), o("w+1")]).unwrap(),
            o("w+1")
        );
        assert_eq!(
            Ordinal::sup_finite(&[o("3"), o("3"), o("3")]).unwrap(),
            o("3")
        );
        assert_eq!(Ordinal::sup_finite(&[]), Err(OrdinalError::EmptySup));
    }

    #[test]
    fn limit_examples() {
        assert!(Ordinal::omega().is_limit());
        assert!(!o("w+1").is_limit());
        assert!(!Ordinal::zero().is_limit());
        assert!(!Ordinal::zero().is_successor());
    }

    #[test]
    fn fundamental_sequences() {
        assert_eq!(o("w").fundamental(5), Some(o("5")));
        assert_eq!(o("w*2").fundamental(3), Some(o("w+3")));
        assert_eq!(o("w^2").fundamental(3), Some(o("w*3")));
        assert_eq!(o("w^2").fundamental(0), Some(o("0")));
        assert_eq!(o("w^w").fundamental(3), Some(o("w^3")));
        assert_eq!(o("w^(w*2)").fundamental(2), Some(o("w^(w+2)")));
        assert_eq!(o("w+1").fundamental(2), None);
    }

    #[test]
    fn fundamental_pattern_matches_sequence() {
        for s in [
            "w",
            "w*2",
            "w^2",
            "w^2*3+w*5",
            "w^w",
            "w^(w*2)",
            "w^(w^2)",
            "w^(w+1)*2",
        ] {
            let a = o(s);
            let pat = a.fundamental_pattern().unwrap();
            for n in 0..8 {
                assert_eq!(
                    eval_pattern(&pat, n).unwrap(),
                    a.fundamental(n).unwrap(),
                    "{s} at {n}"
                );
            }
        }
    }

    #[test]
    fn json_is_canonical_string() {
        let v = serde_json::to_string(&o("3+w*2+1")).unwrap();
        assert_eq!(v, "\"w*2+1\"");
        let back: Ordinal = serde_json::from_str(&v).unwrap();
        assert_eq!(back, o("w*2+1"));
    }
}
