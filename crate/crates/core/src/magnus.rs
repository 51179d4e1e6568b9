//! Free pro-p group words and their Magnus expansion.
//!
//! `x_i` maps to `1 + X_i` in `F_p<<X_1..X_d>>`. The Zassenhaus degree of a
//! word `w` is the valuation of `phi(w) - 1`, and its highest term is the
//! largest monomial of `phi(w) - 1`.
//!
//! Word grammar (whitespace is ignored):
//!
//! ```text
//! word      := term { '*' term }
//! term      := atom [ '^' integer ]
//! atom      := generator | '[' word ',' word ']' | '(' word ')'
//! generator := 'x' digits
//! integer   := ['-'] digits
//! ```
//!
//! `[a, b]` denotes `a^-1 b^-1 a b`.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::series::{check_odd_prime, parse_index, Letter, Monomial, TruncatedSeries, Valuation};

/// Default truncation degree for expansions.
pub const DEFAULT_TRUNCATION: usize = 12;

/// Maximum bracket/parenthesis nesting accepted by the parser.
pub const MAX_NESTING: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupWord {
    Generator(Letter),
    Inverse(Box<GroupWord>),
    Product(Vec<GroupWord>),
    Power(Box<GroupWord>, BigInt),
    Commutator(Box<GroupWord>, Box<GroupWord>),
}

impl GroupWord {
    pub fn generator(i: Letter) -> Self {
        GroupWord::Generator(i)
    }

    pub fn inverse(w: GroupWord) -> Self {
        GroupWord::Inverse(Box::new(w))
    }

    pub fn product(ws: Vec<GroupWord>) -> Self {
        GroupWord::Product(ws)
    }

    pub fn power(w: GroupWord, e: BigInt) -> Self {
        GroupWord::Power(Box::new(w), e)
    }

    pub fn commutator(a: GroupWord, b: GroupWord) -> Self {
        GroupWord::Commutator(Box::new(a), Box::new(b))
    }

    /// `g w g^-1`.
    pub fn conjugate(w: GroupWord, g: GroupWord) -> Self {
        GroupWord::Product(vec![g.clone(), w, GroupWord::inverse(g)])
    }

    /// Largest generator index, 0 for the empty product.
    pub fn max_generator(&self) -> Letter {
        match self {
            GroupWord::Generator(i) => *i,
            GroupWord::Inverse(w) | GroupWord::Power(w, _) => w.max_generator(),
            GroupWord::Product(ws) => ws.iter().map(GroupWord::max_generator).max().unwrap_or(0),
            GroupWord::Commutator(a, b) => a.max_generator().max(b.max_generator()),
        }
    }

    fn check_generators(&self, d: usize) -> Result<()> {
        match self {
            GroupWord::Generator(i) => {
                if *i == 0 || *i as usize > d {
                    Err(Error::usage(format!("generator x{i} outside [1, {d}]")))
                } else {
                    Ok(())
                }
            }
            GroupWord::Inverse(w) | GroupWord::Power(w, _) => w.check_generators(d),
            GroupWord::Product(ws) => ws.iter().try_for_each(|w| w.check_generators(d)),
            GroupWord::Commutator(a, b) => {
                a.check_generators(d)?;
                b.check_generators(d)
            }
        }
    }

    fn is_atom(&self) -> bool {
        matches!(self, GroupWord::Generator(_) | GroupWord::Commutator(..))
    }
}

impl fmt::Display for GroupWord {
    /// Prints in the parser's grammar; `parse(display(w)) == w` for any word
    /// without `Inverse` nodes.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupWord::Generator(i) => write!(f, "x{i}"),
            GroupWord::Commutator(a, b) => write!(f, "[{a},{b}]"),
            GroupWord::Inverse(w) => {
                if w.is_atom() {
                    write!(f, "{w}^-1")
                } else {
                    write!(f, "({w})^-1")
                }
            }
            GroupWord::Power(w, e) => {
                if w.is_atom() {
                    write!(f, "{w}^{e}")
                } else {
                    write!(f, "({w})^{e}")
                }
            }
            GroupWord::Product(ws) => {
                if ws.is_empty() {
                    // the empty product has no spelling in the grammar; x1^0 is
                    // the closest equivalent
                    return f.write_str("x1^0");
                }
                for (k, w) in ws.iter().enumerate() {
                    if k > 0 {
                        f.write_str("*")?;
                    }
                    if matches!(w, GroupWord::Product(_)) {
                        write!(f, "({w})")?;
                    } else {
                        write!(f, "{w}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl FromStr for GroupWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parser = WordParser {
            bytes: s.as_bytes(),
            pos: 0,
            depth: 0,
        };
        let w = parser.word()?;
        parser.skip_ws();
        if parser.pos != parser.bytes.len() {
            return Err(Error::parse(parser.pos, "trailing input"));
        }
        Ok(w)
    }
}

struct WordParser<'a> {
    bytes: &'a [u8],
    pos: usize,
    depth: usize,
}

impl WordParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected `{}`", c as char)))
        }
    }

    fn word(&mut self) -> Result<GroupWord> {
        let mut terms = vec![self.term()?];
        while self.peek() == Some(b'*') {
            self.pos += 1;
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            GroupWord::Product(terms)
        })
    }

    fn term(&mut self) -> Result<GroupWord> {
        let atom = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.integer()?;
            return Ok(GroupWord::power(atom, e));
        }
        Ok(atom)
    }

    fn nested<T>(&mut self, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return Err(Error::parse(self.pos, "nesting too deep"));
        }
        let out = f(self);
        self.depth -= 1;
        out
    }

    fn atom(&mut self) -> Result<GroupWord> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                let start = self.pos;
                let digits = self.digits();
                let text = std::str::from_utf8(&self.bytes[start..start + digits]).unwrap_or("");
                Ok(GroupWord::Generator(parse_index(text, start)?))
            }
            Some(b'[') => {
                self.pos += 1;
                self.nested(|p| {
                    let a = p.word()?;
                    p.expect(b',')?;
                    let b = p.word()?;
                    p.expect(b']')?;
                    Ok(GroupWord::commutator(a, b))
                })
            }
            Some(b'(') => {
                self.pos += 1;
                self.nested(|p| {
                    let w = p.word()?;
                    p.expect(b')')?;
                    Ok(w)
                })
            }
            Some(c) => Err(Error::parse(
                self.pos,
                format!("unexpected `{}`", c as char),
            )),
            None => Err(Error::parse(self.pos, "unexpected end of input")),
        }
    }

    /// Counts ASCII digits at the cursor and advances past them (no whitespace skip).
    fn digits(&mut self) -> usize {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.pos - start
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        let negative = self.bytes.get(self.pos) == Some(&b'-');
        if negative {
            self.pos += 1;
        }
        let digit_start = self.pos;
        if self.digits() == 0 {
            return Err(Error::parse(start, "expected an integer exponent"));
        }
        let text = std::str::from_utf8(&self.bytes[digit_start..self.pos]).unwrap();
        let magnitude: BigInt = text
            .parse()
            .map_err(|_| Error::parse(start, "bad integer"))?;
        Ok(if negative { -magnitude } else { magnitude })
    }
}

/// Binomial coefficients `C(e, k) mod p` for `k < n`: the coefficients of
/// `(1 + X)^e`.
///
/// Uses Lucas' theorem for `e >= 0`; for `e < 0`,
/// `C(e, k) = (-1)^k C(k - e - 1, k)`.
pub fn generator_power_series(e: &BigInt, p: u64, n: usize) -> Result<Vec<u32>> {
    let p = check_odd_prime(p)? as u64;
    let out = (0..n as u64)
        .map(|k| {
            if e.sign() == Sign::Minus {
                let top = BigUint::from(k) + e.magnitude() - 1u32;
                let c = lucas(&top, k, p);
                if k % 2 == 1 {
                    ((p - c) % p) as u32
                } else {
                    c as u32
                }
            } else {
                lucas(e.magnitude(), k, p) as u32
            }
        })
        .collect();
    Ok(out)
}

/// `C(n, k) mod p` by Lucas' theorem.
fn lucas(n: &BigUint, mut k: u64, p: u64) -> u64 {
    let mut n = n.clone();
    let pb = BigUint::from(p);
    let mut acc = 1u64;
    while k > 0 {
        if n.is_zero() {
            return 0;
        }
        let (q, r) = n.div_rem(&pb);
        let ni = r.to_u64().unwrap();
        let ki = k % p;
        if ki > ni {
            return 0;
        }
        acc = acc * small_binomial(ni, ki, p) % p;
        n = q;
        k /= p;
    }
    acc
}

/// `C(n, k) mod p` for `0 <= k <= n < p`.
fn small_binomial(n: u64, k: u64, p: u64) -> u64 {
    let (mut num, mut den) = (1u64, 1u64);
    for i in 0..k {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * crate::arithmetic::pow_mod(den, p - 2, p) % p
}

/// Parameters of an expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Expansion {
    pub p: u64,
    pub d: usize,
    pub trunc: usize,
}

impl Expansion {
    pub fn new(p: u64, d: usize, trunc: usize) -> Result<Self> {
        check_odd_prime(p)?;
        if trunc < 2 {
            return Err(Error::usage("truncation degree must be at least 2"));
        }
        TruncatedSeries::zero(d, p, trunc)?;
        Ok(Expansion { p, d, trunc })
    }

    fn one(&self) -> TruncatedSeries {
        TruncatedSeries::one(self.d, self.p, self.trunc).expect("validated parameters")
    }

    /// `(1 + X_i)^e`.
    fn generator_power(&self, i: Letter, e: &BigInt) -> Result<TruncatedSeries> {
        let coeffs = generator_power_series(e, self.p, self.trunc)?;
        TruncatedSeries::from_terms(
            self.d,
            self.p,
            self.trunc,
            coeffs
                .into_iter()
                .enumerate()
                .map(|(k, c)| (Monomial::power(i, k), c as i64)),
        )
    }

    /// Smallest `p^m >= trunc`. Any series `1 + Y` with `omega(Y) >= 1`
    /// satisfies `(1 + Y)^(p^m) = 1 + Y^(p^m) = 1` below `trunc`, so exponents
    /// only matter modulo this value.
    fn exponent_period(&self) -> BigInt {
        let mut q = BigInt::one();
        while q < BigInt::from(self.trunc) {
            q *= self.p;
        }
        q
    }

    /// `s^e` for `s` with constant term 1 and `e >= 0`, by binary powering.
    fn series_power(&self, s: &TruncatedSeries, e: &BigInt) -> Result<TruncatedSeries> {
        debug_assert!(!e.is_negative());
        let mut acc = self.one();
        let mut base = s.clone();
        let mut e = e.clone();
        while !e.is_zero() {
            if e.is_odd() {
                acc = acc.checked_mul(&base)?;
            }
            e >>= 1;
            if !e.is_zero() {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// `phi(w)` if `inverted` is false, `phi(w^-1)` otherwise. Inverses are
    /// pushed to the leaves: `(uv)^-1 = v^-1 u^-1`, `[a, b]^-1 = [b, a]`.
    fn eval(&self, w: &GroupWord, inverted: bool) -> Result<TruncatedSeries> {
        match w {
            GroupWord::Generator(i) => {
                let e = if inverted {
                    -BigInt::one()
                } else {
                    BigInt::one()
                };
                self.generator_power(*i, &e)
            }
            GroupWord::Inverse(inner) => self.eval(inner, !inverted),
            GroupWord::Product(ws) => {
                let mut acc = self.one();
                if inverted {
                    for w in ws.iter().rev() {
                        acc = acc.checked_mul(&self.eval(w, true)?)?;
                    }
                } else {
                    for w in ws {
                        acc = acc.checked_mul(&self.eval(w, false)?)?;
                    }
                }
                Ok(acc)
            }
            GroupWord::Power(inner, e) => {
                let e = if inverted { -e.clone() } else { e.clone() };
                if let GroupWord::Generator(i) = **inner {
                    return self.generator_power(i, &e);
                }
                let reduced = e.mod_floor(&self.exponent_period());
                let base = self.eval(inner, false)?;
                self.series_power(&base, &reduced)
            }
            GroupWord::Commutator(a, b) => {
                let (a, b) = if inverted { (b, a) } else { (a, b) };
                self.commutator(a, b)
            }
        }
    }

    /// `phi([a, b]) = 1 + phi(a)^-1 phi(b)^-1 (UV - VU)` with `U = phi(a) - 1`,
    /// `V = phi(b) - 1`.
    fn commutator(&self, a: &GroupWord, b: &GroupWord) -> Result<TruncatedSeries> {
        let one = self.one();
        let u = self.eval(a, false)?.checked_sub(&one)?;
        let v = self.eval(b, false)?.checked_sub(&one)?;
        let bracket = u.checked_mul(&v)?.checked_sub(&v.checked_mul(&u)?)?;
        let low = match bracket.valuation() {
            Valuation::Finite(k) => k,
            // exact zero or zero below trunc: the commutator is 1 here
            _ => {
                return Ok(if bracket.is_exact() {
                    one
                } else {
                    one.checked_add(&bracket)?
                })
            }
        };
        // terms of the inverses at degree >= trunc - low only reach degree >= trunc
        let room = self.trunc - low;
        let a_inv = self.eval_at(a, true, room)?;
        let b_inv = self.eval_at(b, true, room)?;
        let left = a_inv.checked_mul(&b_inv)?.relabel_truncation(self.trunc);
        one.checked_add(&left.checked_mul(&bracket)?)
    }

    fn eval_at(&self, w: &GroupWord, inverted: bool, trunc: usize) -> Result<TruncatedSeries> {
        if trunc == self.trunc {
            return self.eval(w, inverted);
        }
        Expansion { trunc, ..*self }.eval(w, inverted)
    }

    /// The Magnus image `phi(w)` truncated below `trunc`.
    pub fn expand(&self, w: &GroupWord) -> Result<TruncatedSeries> {
        w.check_generators(self.d)?;
        self.eval(w, false)
    }

    /// `phi(w) - 1`.
    pub fn augmentation(&self, w: &GroupWord) -> Result<TruncatedSeries> {
        self.expand(w)?.checked_sub(&self.one())
    }

    /// Lowest-degree part of `phi(w) - 1`, found by raising the truncation
    /// one degree at a time up to `trunc`. The lowest nonzero component is
    /// already exact at the first truncation that sees it.
    fn leading_augmentation(&self, w: &GroupWord) -> Result<Option<TruncatedSeries>> {
        w.check_generators(self.d)?;
        for trunc in 2..=self.trunc {
            let y = self
                .eval_at(w, false, trunc)?
                .checked_sub(&self.one().truncated(trunc))?;
            if !y.is_zero() {
                return Ok(Some(y));
            }
        }
        Ok(None)
    }

    pub fn zassenhaus_degree(&self, w: &GroupWord) -> Result<ZassenhausDegree> {
        Ok(match self.leading_augmentation(w)?.map(|y| y.valuation()) {
            Some(Valuation::Finite(k)) => ZassenhausDegree::Exact(k),
            _ => ZassenhausDegree::AtLeast(self.trunc),
        })
    }

    /// Highest term of `phi(w) - 1`.
    pub fn word_hat(&self, w: &GroupWord) -> Result<Monomial> {
        match self.leading_augmentation(w)? {
            Some(y) => y.highest_term(),
            None => Err(Error::Inconclusive {
                truncation: self.trunc,
                message: format!(
                    "{w} expands to 1 below degree {}; raise the truncation",
                    self.trunc
                ),
            }),
        }
    }
}

/// `phi(w)` at truncation `trunc`.
pub fn expand(w: &GroupWord, p: u64, d: usize, trunc: usize) -> Result<TruncatedSeries> {
    Expansion::new(p, d, trunc)?.expand(w)
}

/// `deg(x) = omega(phi(x) - 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZassenhausDegree {
    Exact(usize),
    /// `phi(w) - 1` vanishes below the truncation; the identity word reports
    /// this at every truncation.
    AtLeast(usize),
}

impl fmt::Display for ZassenhausDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZassenhausDegree::Exact(k) => write!(f, "{k}"),
            ZassenhausDegree::AtLeast(n) => write!(f, ">= {n} (truncation-limited)"),
        }
    }
}

pub fn zassenhaus_degree(
    w: &GroupWord,
    p: u64,
    d: usize,
    trunc: usize,
) -> Result<ZassenhausDegree> {
    Expansion::new(p, d, trunc)?.zassenhaus_degree(w)
}

pub fn word_hat(w: &GroupWord, p: u64, d: usize, trunc: usize) -> Result<Monomial> {
    Expansion::new(p, d, trunc)?.word_hat(w)
}

/// `f_{x_outer} o f_{x_inner}^n (x_base)` with `f_x(y) = [x, y]`.
///
/// For `outer < inner < base` its highest term is `X_base X_inner^n X_outer`.
pub fn iterated_commutator(outer: Letter, inner: Letter, base: Letter, n: usize) -> GroupWord {
    let mut w = GroupWord::generator(base);
    for _ in 0..n {
        w = GroupWord::commutator(GroupWord::generator(inner), w);
    }
    GroupWord::commutator(GroupWord::generator(outer), w)
}
