//! Truncated noncommutative power series over `F_p`.
//!
//! Elements of `E = F_p<<X_1, ..., X_d>>` are stored modulo the ideal of
//! monomials of degree `>= N`. Every series carries its own truncation degree
//! `N` and remembers whether any nonzero term was ever discarded, so that a
//! series which is zero below `N` can be reported as "valuation `>= N`"
//! instead of a false `+inf`.
//!
//! Monomials are ordered as follows: a monomial of smaller degree is
//! *greater*; monomials of equal degree are compared lexicographically from
//! the left with `X_1 < X_2 < ... < X_d`. Every letter has degree one, so two
//! monomials of equal degree have equal length and the lexicographic
//! comparison never has to decide between a word and one of its prefixes.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::arithmetic::is_prime;
use crate::error::{Error, Result};

/// Generator index, 1-based.
pub type Letter = u16;

/// Checks that `p` is an odd prime small enough for `u32` coefficients.
pub fn check_odd_prime(p: u64) -> Result<u32> {
    if p < 3 || p > u32::MAX as u64 || !is_prime(p) {
        return Err(Error::usage(format!("modulus {p} is not an odd prime")));
    }
    Ok(p as u32)
}

/// An element of `F_p` for an odd prime `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    p: u32,
}

impl FieldElement {
    pub fn new(value: i64, p: u32) -> Self {
        FieldElement {
            value: value.rem_euclid(p as i64) as u32,
            p,
        }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn add(self, other: Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        FieldElement {
            value: add_mod(self.value, other.value, self.p),
            p: self.p,
        }
    }

    pub fn neg(self) -> Self {
        FieldElement {
            value: neg_mod(self.value, self.p),
            p: self.p,
        }
    }

    pub fn mul(self, other: Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        FieldElement {
            value: mul_mod(self.value, other.value, self.p),
            p: self.p,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        let v = crate::arithmetic::pow_mod(self.value as u64, self.p as u64 - 2, self.p as u64);
        Some(FieldElement {
            value: v as u32,
            p: self.p,
        })
    }
}

#[inline]
fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 + b as u64) % p as u64) as u32
}

#[inline]
fn neg_mod(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

#[inline]
fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

/// A word `X_{a_1} ... X_{a_n}` in the generators; the empty word is `1`.
///
/// The derived `Ord` is the monomial order of the algebra (lower degree is
/// greater). Ambient generator counts live on the containers; use
/// [`compare_in`] to compare with an ambient check.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[Letter; 8]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn letter(i: Letter) -> Self {
        Monomial(SmallVec::from_slice(&[i]))
    }

    /// `X_i^n`.
    pub fn power(i: Letter, n: usize) -> Self {
        Monomial(std::iter::repeat_n(i, n).collect())
    }

    /// Builds a monomial, rejecting the index 0.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Result<Self> {
        let letters: SmallVec<[Letter; 8]> = letters.into_iter().collect();
        if letters.contains(&0) {
            return Err(Error::usage("generator indices are 1-based"));
        }
        Ok(Monomial(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn max_letter(&self) -> Letter {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn concat(&self, other: &Monomial) -> Monomial {
        let mut v = SmallVec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Monomial(v)
    }

    /// Rejects letters outside `[1, d]`.
    pub fn check_ambient(&self, d: usize) -> Result<()> {
        match self.0.iter().find(|&&l| l == 0 || l as usize > d) {
            Some(l) => Err(Error::usage(format!("index X{l} outside [1, {d}]"))),
            None => Ok(()),
        }
    }

    /// Prints as `X5.X4^n.X1`-style compressed text, collapsing runs.
    pub fn to_compact_string(&self) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == l {
                j += 1;
            }
            if j - i > 1 {
                parts.push(format!("X{l}^{}", j - i));
            } else {
                parts.push(format!("X{l}"));
            }
            i = j;
        }
        parts.join(".")
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The monomial order: `Greater` means `a > b`.
pub fn monomial_compare(a: &Monomial, b: &Monomial) -> Ordering {
    a.cmp(b)
}

/// [`monomial_compare`] for monomials declared over ambient counts `da` and
/// `db`. Different ambient counts are rejected rather than coerced.
pub fn compare_in(a: &Monomial, da: usize, b: &Monomial, db: usize) -> Result<Ordering> {
    if da != db {
        return Err(Error::usage(format!(
            "cannot compare monomials over {da} and {db} generators"
        )));
    }
    a.check_ambient(da)?;
    b.check_ambient(db)?;
    Ok(a.cmp(b))
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            write!(f, "X{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Monomial {
    type Err = Error;

    /// Accepts `1`, `X3.X2.X1`, and run shorthand `X4^3`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "1" {
            return Ok(Monomial::one());
        }
        if t.is_empty() {
            return Err(Error::parse(0, "empty monomial"));
        }
        let mut letters = SmallVec::new();
        let mut offset = s.len() - s.trim_start().len();
        for factor in t.split('.') {
            let (idx, count) = parse_factor(factor.trim(), offset)?;
            letters.extend(std::iter::repeat_n(idx, count));
            offset += factor.len() + 1;
        }
        Ok(Monomial(letters))
    }
}

/// Parses `X<k>` or `X<k>^<m>`.
fn parse_factor(factor: &str, offset: usize) -> Result<(Letter, usize)> {
    let body = factor
        .strip_prefix('X')
        .ok_or_else(|| Error::parse(offset, format!("expected `X<index>`, found `{factor}`")))?;
    let (idx, exp) = match body.split_once('^') {
        Some((i, e)) => (i, Some(e)),
        None => (body, None),
    };
    let idx = parse_index(idx, offset + 1)?;
    let count = match exp {
        None => 1,
        Some(e) => e
            .parse::<usize>()
            .ok()
            .filter(|&c| c <= MAX_RUN)
            .ok_or_else(|| Error::parse(offset, format!("bad exponent `{e}`")))?,
    };
    Ok((idx, count))
}

const MAX_RUN: usize = 4096;

pub(crate) fn parse_index(s: &str, offset: usize) -> Result<Letter> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(offset, format!("bad generator index `{s}`")));
    }
    match s.parse::<Letter>() {
        Ok(0) | Err(_) => Err(Error::parse(
            offset,
            format!("generator index `{s}` out of range"),
        )),
        Ok(v) => Ok(v),
    }
}

/// The valuation `omega` of a truncated series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Finite(usize),
    /// The series is exactly zero.
    Infinite,
    /// Zero below the truncation degree, but nonzero terms were discarded:
    /// the true valuation is only known to be `>= N`.
    AtLeast(usize),
}

/// An element of `F_p<<X_1..X_d>>` modulo monomials of degree `>= trunc`.
#[derive(Clone)]
pub struct TruncatedSeries {
    d: usize,
    p: u32,
    trunc: usize,
    /// Nonzero coefficients in `[1, p)`, keyed by monomials of degree < trunc.
    terms: BTreeMap<Monomial, u32>,
    /// No nonzero term has been dropped by truncation.
    exact: bool,
}

impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d
            && self.p == other.p
            && self.trunc == other.trunc
            && self.terms == other.terms
    }
}

impl Eq for TruncatedSeries {}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedSeries(d={}, p={}, {})", self.d, self.p, self)
    }
}

impl TruncatedSeries {
    fn validate_params(d: usize, p: u64, trunc: usize) -> Result<u32> {
        let p = check_odd_prime(p)?;
        if d == 0 || d > Letter::MAX as usize {
            return Err(Error::usage(format!("generator count {d} out of range")));
        }
        if trunc == 0 {
            return Err(Error::usage("truncation degree must be at least 1"));
        }
        Ok(p)
    }

    pub fn zero(d: usize, p: u64, trunc: usize) -> Result<Self> {
        let p = Self::validate_params(d, p, trunc)?;
        Ok(TruncatedSeries {
            d,
            p,
            trunc,
            terms: BTreeMap::new(),
            exact: true,
        })
    }

    pub fn one(d: usize, p: u64, trunc: usize) -> Result<Self> {
        Self::monomial(d, p, trunc, 1, Monomial::one())
    }

    pub fn monomial(d: usize, p: u64, trunc: usize, coeff: i64, m: Monomial) -> Result<Self> {
        Self::from_terms(d, p, trunc, [(m, coeff)])
    }

    /// Sums the given terms; repeated monomials accumulate. Terms of degree
    /// `>= trunc` are dropped and the result is marked inexact.
    pub fn from_terms(
        d: usize,
        p: u64,
        trunc: usize,
        terms: impl IntoIterator<Item = (Monomial, i64)>,
    ) -> Result<Self> {
        let mut s = Self::zero(d, p, trunc)?;
        for (m, c) in terms {
            m.check_ambient(d)?;
            let c = FieldElement::new(c, s.p).value();
            s.accumulate(m, c);
        }
        Ok(s)
    }

    /// `1 + X_i`, the Magnus image of the generator `x_i`.
    pub fn generator(d: usize, p: u64, trunc: usize, i: Letter) -> Result<Self> {
        Self::from_terms(
            d,
            p,
            trunc,
            [(Monomial::one(), 1), (Monomial::letter(i), 1)],
        )
    }

    fn accumulate(&mut self, m: Monomial, c: u32) {
        if c == 0 {
            return;
        }
        if m.degree() >= self.trunc {
            self.exact = false;
            return;
        }
        let p = self.p;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = add_mod(*e.get(), c, p);
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn generators(&self) -> usize {
        self.d
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn truncation(&self) -> usize {
        self.trunc
    }

    /// True when no nonzero term was dropped by truncation.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coefficient(&Monomial::one()) == 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient in `[0, p)`.
    pub fn coefficient(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    /// Terms in ascending monomial order (highest degree first).
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, u32)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn constant_term(&self) -> u32 {
        self.coefficient(&Monomial::one())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.d != other.d || self.p != other.p {
            return Err(Error::usage(format!(
                "incompatible series: (d={}, p={}) vs (d={}, p={})",
                self.d, self.p, other.d, other.p
            )));
        }
        Ok(())
    }

    /// Drops all terms of degree `>= trunc` (no-op if `trunc` is not lower).
    pub fn truncated(&self, trunc: usize) -> Self {
        if trunc >= self.trunc {
            return self.clone();
        }
        let trunc = trunc.max(1);
        let mut exact = self.exact;
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| {
                let keep = m.degree() < trunc;
                exact &= keep;
                keep
            })
            .map(|(m, &c)| (m.clone(), c))
            .collect();
        TruncatedSeries {
            d: self.d,
            p: self.p,
            trunc,
            terms,
            exact,
        }
    }

    /// Raises the truncation label without adding terms. The caller must
    /// guarantee that the unknown terms in between cannot matter; the result
    /// is marked inexact.
    pub(crate) fn relabel_truncation(mut self, trunc: usize) -> Self {
        if trunc > self.trunc {
            self.trunc = trunc;
            self.exact = false;
        }
        self
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let trunc = self.trunc.min(other.trunc);
        let mut out = self.truncated(trunc);
        out.exact &= other.exact;
        for (m, &c) in &other.terms {
            out.accumulate(m.clone(), c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = neg_mod(*c, self.p);
        }
        out
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn scale(&self, c: i64) -> Self {
        let c = FieldElement::new(c, self.p).value();
        let mut out = TruncatedSeries {
            terms: BTreeMap::new(),
            ..self.clone()
        };
        for (m, &v) in &self.terms {
            out.accumulate(m.clone(), mul_mod(v, c, self.p));
        }
        out
    }

    /// Noncommutative product, truncated at `min(N_s, N_t)`.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let trunc = self.trunc.min(other.trunc);
        let mut exact = self.exact && other.exact;
        // Right factors by increasing degree so the inner loop can stop early.
        let right: Vec<(&Monomial, u32)> = other.terms.iter().rev().map(|(m, &c)| (m, c)).collect();
        let mut acc: HashMap<Monomial, u64> = HashMap::new();
        let p = self.p as u64;
        for (a, &ca) in self.terms.iter().rev() {
            let da = a.degree();
            if da >= trunc {
                exact = false;
                continue;
            }
            for &(b, cb) in &right {
                if da + b.degree() >= trunc {
                    exact = false;
                    break;
                }
                let e = acc.entry(a.concat(b)).or_insert(0);
                *e = (*e + ca as u64 * cb as u64) % p;
            }
        }
        let terms = acc
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|(m, c)| (m, c as u32))
            .collect();
        Ok(TruncatedSeries {
            d: self.d,
            p: self.p,
            trunc,
            terms,
            exact,
        })
    }

    /// Multiplicative inverse of a series with nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = FieldElement::new(self.constant_term() as i64, self.p)
            .inv()
            .ok_or_else(|| Error::domain("series with zero constant term is not invertible"))?;
        // s = c0^{-1} (1 + y); s^{-1} = c0 * sum_k (-y)^k.
        let normalized = self.scale(c0.value() as i64);
        let one = Self::one(self.d, self.p as u64, self.trunc)?;
        let minus_y = normalized.checked_sub(&one)?.neg();
        let mut inv = one.clone();
        // Horner: inv <- 1 + (-y) * inv; valuation of y >= 1 so trunc rounds suffice.
        for _ in 0..self.trunc {
            inv = one.checked_add(&minus_y.checked_mul(&inv)?)?;
        }
        Ok(inv.scale(c0.value() as i64))
    }

    pub fn valuation(&self) -> Valuation {
        match self.terms.keys().next_back() {
            Some(m) => Valuation::Finite(m.degree()),
            None if self.exact => Valuation::Infinite,
            None => Valuation::AtLeast(self.trunc),
        }
    }

    /// The largest monomial with nonzero coefficient.
    pub fn highest_term(&self) -> Result<Monomial> {
        self.terms
            .keys()
            .next_back()
            .cloned()
            .ok_or_else(|| Error::domain("zero series has no highest term"))
    }

    /// Homogeneous component of degree `k`.
    pub fn homogeneous_part(&self, k: usize) -> Self {
        TruncatedSeries {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, &c)| (m.clone(), c))
                .collect(),
            exact: true,
            ..self.clone()
        }
    }

    /// The homogeneous component of lowest degree.
    pub fn initial_form(&self) -> Result<Self> {
        match self.valuation() {
            Valuation::Finite(k) => Ok(self.homogeneous_part(k)),
            _ => Err(Error::domain("zero series has no initial form")),
        }
    }

    /// Parses the text form `2*X3.X2 + 1*X2.X3 + O(>=6)`.
    ///
    /// Terms are `c*MONO`, a bare constant `c`, or a bare monomial; `c` may be
    /// negative. Without an `O(>=N)` marker the truncation is one more than
    /// the largest term degree, or `default_trunc` when given.
    pub fn parse(text: &str, d: usize, p: u64, default_trunc: Option<usize>) -> Result<Self> {
        let mut trunc: Option<usize> = None;
        let mut parsed: Vec<(Monomial, i64)> = Vec::new();
        let mut offset = 0;
        for raw in text.split('+') {
            let term = raw.trim();
            let here = offset + (raw.len() - raw.trim_start().len());
            offset += raw.len() + 1;
            if term.is_empty() {
                return Err(Error::parse(here, "empty term"));
            }
            if let Some(rest) = term.strip_prefix("O(>=") {
                let n = rest
                    .strip_suffix(')')
                    .and_then(|n| n.trim().parse::<usize>().ok())
                    .ok_or_else(|| Error::parse(here, format!("bad truncation marker `{term}`")))?;
                if trunc.replace(n).is_some() {
                    return Err(Error::parse(here, "repeated truncation marker"));
                }
                continue;
            }
            if trunc.is_some() {
                return Err(Error::parse(here, "terms after the truncation marker"));
            }
            let (coeff, mono) = match term.split_once('*') {
                Some((c, m)) => (parse_coeff(c.trim(), here)?, m.trim().parse::<Monomial>()?),
                None if looks_like_integer(term) => (parse_coeff(term, here)?, Monomial::one()),
                None => (1, term.parse::<Monomial>()?),
            };
            parsed.push((mono, coeff));
        }
        let max_deg = parsed.iter().map(|(m, _)| m.degree()).max().unwrap_or(0);
        let trunc = match (trunc, default_trunc) {
            (Some(n), _) => {
                if !parsed.is_empty() && max_deg >= n {
                    return Err(Error::usage(format!(
                        "term of degree {max_deg} not below truncation degree {n}"
                    )));
                }
                n
            }
            (None, Some(n)) => n.max(max_deg + 1),
            (None, None) => max_deg + 1,
        };
        Self::from_terms(d, p, trunc, parsed)
    }
}

fn looks_like_integer(s: &str) -> bool {
    let body = s.strip_prefix('-').unwrap_or(s);
    !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
}

fn parse_coeff(s: &str, offset: usize) -> Result<i64> {
    if !looks_like_integer(s) {
        return Err(Error::parse(offset, format!("bad coefficient `{s}`")));
    }
    s.parse::<i64>()
        .map_err(|_| Error::parse(offset, format!("coefficient `{s}` out of range")))
}

impl fmt::Display for TruncatedSeries {
    /// Terms in descending monomial order, then the truncation marker.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            f.write_str("0")?;
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        write!(f, " + O(>={})", self.trunc)
    }
}
