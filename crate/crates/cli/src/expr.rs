//! Lattice expressions such as `E8(-1)^2 + U^2 + gen(-4)`.
//!
//! ```text
//! expr := term (('+' | '⊕') term)*
//! term := atom ('^' UINT)?
//! atom := IDENT ('(' INT (',' INT)* ')')? | '(' expr ')'
//! ```
//!
//! For `U`, `E8`, `An`, `LambdaSharp` and `LambdaK3` a parenthesised integer
//! is a twist (the Gram matrix is multiplied by it); `gen(k)` is `⟨k⟩` and
//! `Lambda2d(d)` takes `d`. Offsets in errors count characters.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use quadlat::{Error, Lattice, Standard};

/// Largest rank an expression may evaluate to.
pub const MAX_RANK: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprError {
    Parse { offset: usize, message: String },
    UnknownAtom { offset: usize, name: String },
    Lattice(Error),
}

impl ExprError {
    pub fn code(&self) -> &'static str {
        match self {
            ExprError::Parse { .. } => "ParseError",
            ExprError::UnknownAtom { .. } => "UnknownAtom",
            ExprError::Lattice(e) => e.code(),
        }
    }
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprError::Parse { offset, message } => write!(f, "at offset {offset}: {message}"),
            ExprError::UnknownAtom { offset, name } => write!(f, "unknown lattice {name:?} at offset {offset}"),
            ExprError::Lattice(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for ExprError {}

impl From<Error> for ExprError {
    fn from(e: Error) -> Self {
        ExprError::Lattice(e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AtomKind {
    U,
    E8,
    A(usize),
    Gen,
    Lambda2d,
    LambdaSharp,
    LambdaK3,
}

impl AtomKind {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "U" => AtomKind::U,
            "E8" => AtomKind::E8,
            "gen" => AtomKind::Gen,
            "Lambda2d" => AtomKind::Lambda2d,
            "LambdaSharp" => AtomKind::LambdaSharp,
            "LambdaK3" => AtomKind::LambdaK3,
            _ => {
                let digits = name.strip_prefix('A')?;
                if digits.is_empty() || digits.starts_with('0') || !digits.bytes().all(|b| b.is_ascii_digit()) {
                    return None;
                }
                AtomKind::A(digits.parse().ok()?)
            }
        })
    }

    fn base_rank(&self) -> usize {
        match self {
            AtomKind::U => 2,
            AtomKind::E8 => 8,
            AtomKind::A(n) => *n,
            AtomKind::Gen => 1,
            AtomKind::Lambda2d => 21,
            AtomKind::LambdaSharp => 28,
            AtomKind::LambdaK3 => 22,
        }
    }
}

impl fmt::Display for AtomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomKind::U => f.write_str("U"),
            AtomKind::E8 => f.write_str("E8"),
            AtomKind::A(n) => write!(f, "A{n}"),
            AtomKind::Gen => f.write_str("gen"),
            AtomKind::Lambda2d => f.write_str("Lambda2d"),
            AtomKind::LambdaSharp => f.write_str("LambdaSharp"),
            AtomKind::LambdaK3 => f.write_str("LambdaK3"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeExpr {
    Atom { kind: AtomKind, params: Vec<BigInt> },
    Power(Box<LatticeExpr>, u32),
    Sum(Vec<LatticeExpr>),
}

impl LatticeExpr {
    /// Rank of the value, saturating; no lattice is built.
    pub fn rank(&self) -> usize {
        match self {
            LatticeExpr::Atom { kind, .. } => kind.base_rank(),
            LatticeExpr::Power(inner, k) => inner.rank().saturating_mul(*k as usize),
            LatticeExpr::Sum(terms) => terms.iter().fold(0usize, |acc, t| acc.saturating_add(t.rank())),
        }
    }

    pub fn eval(&self) -> Result<Lattice, ExprError> {
        let rank = self.rank();
        if rank > MAX_RANK {
            return Err(Error::BadParameter(format!("expression has rank {rank}, limit is {MAX_RANK}")).into());
        }
        self.eval_unchecked()
    }

    fn eval_unchecked(&self) -> Result<Lattice, ExprError> {
        match self {
            LatticeExpr::Atom { kind, params } => eval_atom(kind, params),
            LatticeExpr::Power(inner, k) => {
                if *k == 0 {
                    return Err(Error::BadParameter("exponent must be positive".into()).into());
                }
                Ok(inner.eval_unchecked()?.power(*k as usize))
            }
            LatticeExpr::Sum(terms) => {
                let mut acc = terms[0].eval_unchecked()?;
                for t in &terms[1..] {
                    acc = acc.direct_sum(&t.eval_unchecked()?);
                }
                Ok(acc)
            }
        }
    }
}

fn eval_atom(kind: &AtomKind, params: &[BigInt]) -> Result<Lattice, ExprError> {
    let one_param = |what: &str| -> Result<&BigInt, ExprError> {
        match params {
            [p] => Ok(p),
            _ => Err(Error::BadParameter(format!("{kind} takes exactly one {what}")).into()),
        }
    };
    let plain = match kind {
        AtomKind::Gen => return Ok(Lattice::standard(&Standard::Gen(one_param("integer")?.clone()))?),
        AtomKind::Lambda2d => return Ok(Lattice::standard(&Standard::Lambda2d(one_param("integer d")?.clone()))?),
        AtomKind::U => Standard::U,
        AtomKind::E8 => Standard::E8,
        AtomKind::A(n) => Standard::A(*n),
        AtomKind::LambdaSharp => Standard::LambdaSharp,
        AtomKind::LambdaK3 => Standard::LambdaK3,
    };
    let base = Lattice::standard(&plain)?;
    if params.is_empty() {
        return Ok(base);
    }
    Ok(base.rescale(one_param("twist")?)?)
}

fn fmt_atom(f: &mut fmt::Formatter<'_>, kind: &AtomKind, params: &[BigInt]) -> fmt::Result {
    write!(f, "{kind}")?;
    if !params.is_empty() {
        let list: Vec<String> = params.iter().map(ToString::to_string).collect();
        write!(f, "({})", list.join(","))?;
    }
    Ok(())
}

impl fmt::Display for LatticeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeExpr::Atom { kind, params } => fmt_atom(f, kind, params),
            LatticeExpr::Power(inner, k) => match **inner {
                LatticeExpr::Atom { .. } => write!(f, "{inner}^{k}"),
                _ => write!(f, "({inner})^{k}"),
            },
            LatticeExpr::Sum(terms) => {
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    match t {
                        LatticeExpr::Sum(_) => write!(f, "({t})")?,
                        _ => write!(f, "{t}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

impl FromStr for LatticeExpr {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, ExprError> {
        parse_lattice_expr(s)
    }
}

pub fn parse_lattice_expr(text: &str) -> Result<LatticeExpr, ExprError> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected {:?}", p.chars[p.pos])));
    }
    Ok(e)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn error(&self, message: impl Into<String>) -> ExprError {
        ExprError::Parse { offset: self.pos, message: message.into() }
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => Err(self.error(format!("expected {c:?}, found {x:?}"))),
            None => Err(self.error(format!("expected {c:?}, found end of input"))),
        }
    }

    fn expr(&mut self) -> Result<LatticeExpr, ExprError> {
        let mut terms = vec![self.term()?];
        while matches!(self.peek(), Some('+' | '⊕')) {
            self.pos += 1;
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 { terms.pop().expect("one term") } else { LatticeExpr::Sum(terms) })
    }

    fn term(&mut self) -> Result<LatticeExpr, ExprError> {
        let atom = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(atom);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.error("expected an exponent"));
        }
        let k = digits
            .parse::<u32>()
            .map_err(|_| ExprError::Parse { offset: start, message: "exponent too large".into() })?;
        Ok(LatticeExpr::Power(Box::new(atom), k))
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn atom(&mut self) -> Result<LatticeExpr, ExprError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|c| c.is_alphanumeric() || *c == '_') {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                let kind =
                    AtomKind::from_name(&name).ok_or(ExprError::UnknownAtom { offset: start, name: name.clone() })?;
                let params = if self.peek() == Some('(') { self.params()? } else { Vec::new() };
                Ok(LatticeExpr::Atom { kind, params })
            }
            Some(c) => Err(self.error(format!("expected a lattice, found {c:?}"))),
            None => Err(self.error("expected a lattice, found end of input")),
        }
    }

    fn params(&mut self) -> Result<Vec<BigInt>, ExprError> {
        self.expect('(')?;
        let mut out = vec![self.int()?];
        loop {
            match self.peek() {
                Some(',') => {
                    self.pos += 1;
                    out.push(self.int()?);
                }
                _ => {
                    self.expect(')')?;
                    return Ok(out);
                }
            }
        }
    }

    fn int(&mut self) -> Result<BigInt, ExprError> {
        self.skip_ws();
        let negative = match self.chars.get(self.pos) {
            Some('-' | '−') => {
                self.pos += 1;
                true
            }
            Some('+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        self.skip_ws();
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.error("expected an integer"));
        }
        let n: BigInt = digits.parse().expect("ascii digits");
        Ok(if negative { -n } else { n })
    }
}

/// Parses `"p,m"` or `"(p,m)"`.
pub fn parse_signature(text: &str) -> Result<quadlat::Signature, ExprError> {
    let t = text.trim();
    let t = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')).unwrap_or(t);
    let bad = || ExprError::Parse { offset: 0, message: format!("signature must look like \"2,26\", got {text:?}") };
    let (p, m) = t.split_once(',').ok_or_else(bad)?;
    let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    Ok(quadlat::Signature::new(parse(p)?, parse(m)?))
}

/// Helper for callers holding a `BigInt` that must fit a machine word.
pub fn small(n: &BigInt, what: &str) -> Result<u64, ExprError> {
    if n.is_negative() || n.is_zero() {
        return Err(Error::BadParameter(format!("{what} must be positive")).into());
    }
    n.to_u64().ok_or_else(|| Error::BadParameter(format!("{what} is too large")).into())
}
