//! Sparse multivariate polynomials with exact rational coefficients,
//! truncated above a fixed total degree.
//!
//! Degrees are counted in "weight degree": one per variable power. The
//! corresponding cohomological degree is twice that, since every class in
//! play lives in even degree.
//!
//! Term order is pinned once and for all (graded, then lexicographic with
//! earlier variables dominant) so that rendered output is byte-stable.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{rat_int, Rational};

/// Exponent vector. Ordered graded-lexicographically: lower total degree
/// first, then with earlier variables dominant within a degree.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shared variable context: an ordered list of symbols and the truncation
/// degree. Two polynomials interoperate only when their contexts agree.
#[derive(Debug, PartialEq, Eq)]
pub struct PolyContext {
    pub vars: Vec<String>,
    pub cap: usize,
}

impl PolyContext {
    pub fn new(vars: Vec<String>, cap: usize) -> Arc<Self> {
        Arc::new(PolyContext { vars, cap })
    }

    /// Context with variables `x1..xr`.
    pub fn weight_vars(rank: usize, cap: usize) -> Arc<Self> {
        Self::new((1..=rank).map(|i| format!("x{i}")).collect(), cap)
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

/// A truncated polynomial over a shared context. No stored term exceeds the
/// context cap and no zero coefficients are kept. Immutable in spirit: all
/// operations return fresh values.
#[derive(Clone, Debug)]
pub struct GradedPoly {
    pub ctx: Arc<PolyContext>,
    pub terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for GradedPoly {
    fn eq(&self, other: &Self) -> bool {
        *self.ctx == *other.ctx && self.terms == other.terms
    }
}

impl Eq for GradedPoly {}

impl GradedPoly {
    pub fn zero(ctx: &Arc<PolyContext>) -> Self {
        GradedPoly {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: &Arc<PolyContext>, c: Rational) -> Self {
        let mut p = Self::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ctx.nvars()), c);
        }
        p
    }

    pub fn one(ctx: &Arc<PolyContext>) -> Self {
        Self::constant(ctx, rat_int(1))
    }

    pub fn var(ctx: &Arc<PolyContext>, i: usize) -> Self {
        let mut p = Self::zero(ctx);
        if ctx.cap >= 1 {
            p.terms.insert(Monomial::var(ctx.nvars(), i), rat_int(1));
        }
        p
    }

    /// Linear form with the given coordinates.
    pub fn linear(ctx: &Arc<PolyContext>, coords: &[Rational]) -> Self {
        let mut p = Self::zero(ctx);
        if ctx.cap == 0 {
            return p;
        }
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                p.terms.insert(Monomial::var(ctx.nvars(), i), c.clone());
            }
        }
        p
    }

    pub fn linear_int(ctx: &Arc<PolyContext>, coords: &[i64]) -> Self {
        let coords: Vec<Rational> = coords.iter().map(|&c| rat_int(c)).collect();
        Self::linear(ctx, &coords)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one(self.ctx.nvars()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Total degree of the lowest nonzero term, or `None` for 0.
    pub fn order(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.degree()).min()
    }

    /// Total degree of the highest nonzero term, or `None` for 0.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// The homogeneous component of total degree `d`.
    pub fn component(&self, d: usize) -> Self {
        let mut p = Self::zero(&self.ctx);
        for (m, c) in &self.terms {
            if m.degree() == d {
                p.terms.insert(m.clone(), c.clone());
            }
        }
        p
    }

    pub fn is_homogeneous_of(&self, d: usize) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    fn insert_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() || m.degree() > self.ctx.cap {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn assert_ctx(&self, other: &GradedPoly) {
        assert!(
            Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx,
            "mismatched variable context"
        );
    }

    pub fn checked_add(&self, other: &GradedPoly) -> Result<GradedPoly> {
        if !(Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx) {
            return Err(Error::ContextMismatch(format!(
                "{:?} vs {:?}",
                self.ctx.vars, other.ctx.vars
            )));
        }
        Ok(self.add(other))
    }

    pub fn checked_mul(&self, other: &GradedPoly) -> Result<GradedPoly> {
        if !(Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx) {
            return Err(Error::ContextMismatch(format!(
                "{:?} vs {:?}",
                self.ctx.vars, other.ctx.vars
            )));
        }
        Ok(self.mul(other))
    }

    pub fn add(&self, other: &GradedPoly) -> GradedPoly {
        self.assert_ctx(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &GradedPoly) -> GradedPoly {
        self.assert_ctx(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> GradedPoly {
        let mut out = Self::zero(&self.ctx);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> GradedPoly {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        let mut out = Self::zero(&self.ctx);
        for (m, k) in &self.terms {
            out.terms.insert(m.clone(), k * c);
        }
        out
    }

    pub fn mul(&self, other: &GradedPoly) -> GradedPoly {
        self.assert_ctx(other);
        let cap = self.ctx.cap;
        let mut out = Self::zero(&self.ctx);
        for (m1, c1) in &self.terms {
            let d1 = m1.degree();
            if d1 > cap {
                continue;
            }
            for (m2, c2) in &other.terms {
                if d1 + m2.degree() > cap {
                    continue;
                }
                out.insert_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> GradedPoly {
        let mut acc = Self::one(&self.ctx);
        for _ in 0..e {
            acc = acc.mul(self);
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    /// Truncated exponential `sum_k f^k / k!`. Requires a zero constant term.
    pub fn trunc_exp(&self) -> Result<GradedPoly> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut acc = Self::one(&self.ctx);
        let mut term = Self::one(&self.ctx);
        for k in 1..=self.ctx.cap {
            term = term.mul(self).scale(&Rational::new(1.into(), k.into()));
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Exact quotient by a nonzero homogeneous linear form. Errors when the
    /// division is not exact (which upstream signals a reflection bug).
    pub fn divide_exact(&self, linear: &GradedPoly) -> Result<GradedPoly> {
        if !linear.is_homogeneous_of(1) || linear.is_zero() {
            return Err(Error::NonDivisible(
                "divisor must be a nonzero homogeneous linear form".into(),
            ));
        }
        self.exact_div_any(linear)
    }

    /// Exact division by an arbitrary nonzero polynomial, via single-divisor
    /// reduction in the pinned monomial order.
    pub(crate) fn exact_div_any(&self, g: &GradedPoly) -> Result<GradedPoly> {
        self.assert_ctx(g);
        if g.is_zero() {
            return Err(Error::NonDivisible("division by zero".into()));
        }
        let (glead_m, glead_c) = g.terms.iter().next_back().expect("nonzero");
        let mut rem = self.clone();
        let mut q = Self::zero(&self.ctx);
        while let Some((m, c)) = rem.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone()))
        {
            if !glead_m.divides(&m) {
                return Err(Error::NonDivisible(format!(
                    "remainder term {} not divisible",
                    render_monomial(&self.ctx, &m)
                )));
            }
            let tm = m.div(glead_m);
            let tc = &c / glead_c;
            // rem -= t*g
            for (gm, gc) in &g.terms {
                rem.insert_term(tm.mul(gm), -(&tc * gc));
            }
            q.insert_term(tm, tc);
        }
        Ok(q)
    }

    /// Multiplicative inverse of a series with nonzero constant term.
    pub fn series_inverse(&self) -> Result<GradedPoly> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::SeriesQuotient);
        }
        // u = 1 - f/c0 has zero constant term; 1/f = (1/c0) * sum u^k.
        let u = Self::one(&self.ctx).sub(&self.scale(&c0.recip()));
        let mut acc = Self::one(&self.ctx);
        let mut term = Self::one(&self.ctx);
        loop {
            term = term.mul(&u);
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term);
        }
        Ok(acc.scale(&c0.recip()))
    }

    /// Power-series quotient `num/den`, after the canonical removal of the
    /// shared vanishing order: while the denominator has no constant term its
    /// lowest homogeneous component must be linear, and that linear form is
    /// divided out of both operands exactly. The result is truncated at the
    /// context cap; trailing degrees reflect the inputs exactly as given.
    pub fn series_quotient(num: &GradedPoly, den: &GradedPoly) -> Result<GradedPoly> {
        num.assert_ctx(den);
        if den.is_zero() {
            return Err(Error::SeriesQuotient);
        }
        if num.is_zero() {
            return Ok(Self::zero(&num.ctx));
        }
        let mut num = num.clone();
        let mut den = den.clone();
        while den.constant_term().is_zero() {
            let ord = den.order().ok_or(Error::SeriesQuotient)?;
            if ord != 1 {
                return Err(Error::SeriesQuotient);
            }
            let ell = den.component(1);
            num = num.divide_exact(&ell).map_err(|_| Error::SeriesQuotient)?;
            den = den.divide_exact(&ell).map_err(|_| Error::SeriesQuotient)?;
        }
        Ok(num.mul(&den.series_inverse()?))
    }

    /// Substitute each variable by the corresponding (typically linear)
    /// polynomial of the same context.
    pub fn substitute(&self, images: &[GradedPoly]) -> GradedPoly {
        assert_eq!(images.len(), self.ctx.nvars());
        let mut out = Self::zero(&self.ctx);
        // memoized powers per variable, grown on demand
        let mut pows: Vec<Vec<GradedPoly>> = images
            .iter()
            .map(|f| vec![Self::one(&self.ctx), f.clone()])
            .collect();
        for (m, c) in &self.terms {
            let mut acc = Self::constant(&self.ctx, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while pows[i].len() <= e as usize {
                    let next = pows[i].last().unwrap().mul(&images[i]);
                    pows[i].push(next);
                }
                acc = acc.mul(&pows[i][e as usize]);
                if acc.is_zero() {
                    break;
                }
            }
            out = out.add(&acc);
        }
        out
    }

    /// Parse an integer/rational polynomial expression over the context
    /// variables. Supports `+ - * ^ ( )`, rational literals like `-7/12`,
    /// and implicit multiplication by juxtaposition (`3 x1`).
    pub fn parse(ctx: &Arc<PolyContext>, input: &str) -> Result<GradedPoly> {
        let tokens = tokenize(input)?;
        let mut p = Parser {
            ctx: ctx.clone(),
            tokens,
            pos: 0,
        };
        let poly = p.expr(0)?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse(format!(
                "unexpected trailing token at position {}",
                p.pos
            )));
        }
        Ok(poly)
    }
}

fn render_monomial(ctx: &PolyContext, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        if e == 1 {
            parts.push(ctx.vars[i].clone());
        } else if e > 1 {
            parts.push(format!("{}^{}", ctx.vars[i], e));
        }
    }
    parts.join("*")
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let mono = render_monomial(&self.ctx, m);
            let abs = c.abs();
            let body = if mono.is_empty() {
                abs.to_string()
            } else if abs.is_one() {
                mono
            } else {
                format!("{abs}*{mono}")
            };
            if first {
                if c.is_negative() {
                    write!(f, "-{body}")?;
                } else {
                    write!(f, "{body}")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - {body}")?;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Open,
    Close,
}

const MAX_LITERAL_LEN: usize = 4096;

fn tokenize(input: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let b = input.as_bytes();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        match c {
            ' ' | '\t' | '\r' | '\n' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            '(' => {
                out.push(Token::Open);
                i += 1;
            }
            ')' => {
                out.push(Token::Close);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                if i - start > MAX_LITERAL_LEN {
                    return Err(Error::Parse("numeric literal too long".into()));
                }
                let num: num_bigint::BigInt = input[start..i].parse().unwrap();
                // optional denominator
                if i < b.len() && b[i] == b'/' {
                    let dstart = i + 1;
                    let mut j = dstart;
                    while j < b.len() && b[j].is_ascii_digit() {
                        j += 1;
                    }
                    if j == dstart {
                        return Err(Error::Parse("expected denominator digits after '/'".into()));
                    }
                    if j - dstart > MAX_LITERAL_LEN {
                        return Err(Error::Parse("numeric literal too long".into()));
                    }
                    let den: num_bigint::BigInt = input[dstart..j].parse().unwrap();
                    if den.is_zero() {
                        return Err(Error::Parse("zero denominator".into()));
                    }
                    out.push(Token::Num(Rational::new(num, den)));
                    i = j;
                } else {
                    out.push(Token::Num(Rational::from_integer(num)));
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < b.len()
                    && (b[i].is_ascii_alphanumeric() || b[i] == b'_' || b[i] == b'.')
                {
                    i += 1;
                }
                out.push(Token::Ident(input[start..i].to_string()));
            }
            _ => return Err(Error::Parse(format!("unexpected character '{c}'"))),
        }
    }
    Ok(out)
}

struct Parser {
    ctx: Arc<PolyContext>,
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn expr(&mut self, depth: usize) -> Result<GradedPoly> {
        if depth > 64 {
            return Err(Error::Parse("expression nested too deeply".into()));
        }
        let mut negate = false;
        if let Some(Token::Minus) = self.peek() {
            self.pos += 1;
            negate = true;
        } else if let Some(Token::Plus) = self.peek() {
            self.pos += 1;
        }
        let mut acc = self.term(depth)?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    let t = self.term(depth)?;
                    acc = acc.add(&t);
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    let t = self.term(depth)?;
                    acc = acc.sub(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self, depth: usize) -> Result<GradedPoly> {
        let mut acc = self.factor(depth)?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    let f = self.factor(depth)?;
                    acc = acc.mul(&f);
                }
                // implicit multiplication by juxtaposition
                Some(Token::Num(_)) | Some(Token::Ident(_)) | Some(Token::Open) => {
                    let f = self.factor(depth)?;
                    acc = acc.mul(&f);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self, depth: usize) -> Result<GradedPoly> {
        let base = self.atom(depth)?;
        if let Some(Token::Caret) = self.peek() {
            self.pos += 1;
            let e = match self.peek() {
                Some(Token::Num(r)) if r.is_integer() && !r.numer().is_negative() => {
                    let v = r.to_integer();
                    if v > num_bigint::BigInt::from(u16::MAX) {
                        return Err(Error::Parse("exponent too large".into()));
                    }
                    let digits: u16 = v.try_into().unwrap();
                    self.pos += 1;
                    digits
                }
                _ => return Err(Error::Parse("expected nonnegative integer exponent".into())),
            };
            return Ok(base.pow(e as usize));
        }
        Ok(base)
    }

    fn atom(&mut self, depth: usize) -> Result<GradedPoly> {
        match self.peek().cloned() {
            Some(Token::Num(r)) => {
                self.pos += 1;
                Ok(GradedPoly::constant(&self.ctx, r))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                match self.ctx.var_index(&name) {
                    Some(i) => Ok(GradedPoly::var(&self.ctx, i)),
                    None => Err(Error::Parse(format!("unknown variable '{name}'"))),
                }
            }
            Some(Token::Open) => {
                self.pos += 1;
                let inner = self.expr(depth + 1)?;
                match self.peek() {
                    Some(Token::Close) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(Error::Parse("expected ')'".into())),
                }
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}
