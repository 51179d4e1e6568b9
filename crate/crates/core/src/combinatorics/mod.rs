//! Monomial families: combinatorial freeness, cut pairs, and normal-word
//! counting.
//!
//! A family may contain parametric members `P . X_r^n . S` standing for one
//! monomial per `n` in a range of positive integers.

mod automaton;
mod cut;
mod freeness;

use std::fmt;
use std::str::FromStr;

pub use automaton::count_normal_words;
pub use cut::{
    certify_family_with_cut, choose_cut_pair, cut_bound, extended_cut_search, infer_split,
    CutFamily, CutPair,
};
pub use freeness::{
    has_overlap, is_combinatorially_free, is_submonomial, FreenessOptions, FreenessVerdict,
    MemberRef, Policy, ViolationKind, Witness,
};

use crate::error::{Error, Result};
use crate::series::{parse_index, Letter, Monomial};

/// `prefix . X_repeated^n . suffix` for `n` in `[min_n, max_n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamMonomial {
    prefix: Monomial,
    repeated: Letter,
    suffix: Monomial,
    min_n: usize,
    max_n: Option<usize>,
}

impl ParamMonomial {
    /// All `n >= 1`. Prefix and suffix must be nonempty.
    pub fn new(prefix: Monomial, repeated: Letter, suffix: Monomial) -> Result<Self> {
        Self::with_range(prefix, repeated, suffix, 1, None)
    }

    pub fn with_range(
        prefix: Monomial,
        repeated: Letter,
        suffix: Monomial,
        min_n: usize,
        max_n: Option<usize>,
    ) -> Result<Self> {
        if prefix.is_one() || suffix.is_one() {
            return Err(Error::usage(
                "parametric members need a nonempty prefix and suffix",
            ));
        }
        if repeated == 0 {
            return Err(Error::usage("generator indices are 1-based"));
        }
        if min_n == 0 {
            return Err(Error::usage("parametric range starts at n = 1 or later"));
        }
        if max_n.is_some_and(|m| m < min_n) {
            return Err(Error::usage("empty parametric range"));
        }
        Ok(ParamMonomial {
            prefix,
            repeated,
            suffix,
            min_n,
            max_n,
        })
    }

    /// `X_lead . X_repeated^n . X_tail`.
    pub fn anchored(lead: Letter, repeated: Letter, tail: Letter) -> Result<Self> {
        Self::new(Monomial::letter(lead), repeated, Monomial::letter(tail))
    }

    pub fn prefix(&self) -> &Monomial {
        &self.prefix
    }

    pub fn repeated(&self) -> Letter {
        self.repeated
    }

    pub fn suffix(&self) -> &Monomial {
        &self.suffix
    }

    pub fn min_n(&self) -> usize {
        self.min_n
    }

    pub fn max_n(&self) -> Option<usize> {
        self.max_n
    }

    pub fn contains_n(&self, n: usize) -> bool {
        n >= self.min_n && self.max_n.is_none_or(|m| n <= m)
    }

    /// The member for a given `n` (not checked against the range).
    pub fn instantiate(&self, n: usize) -> Monomial {
        self.prefix
            .concat(&Monomial::power(self.repeated, n))
            .concat(&self.suffix)
    }

    /// Degree of the member for `n`.
    pub fn degree_at(&self, n: usize) -> usize {
        self.prefix.degree() + n + self.suffix.degree()
    }

    /// The `n` in range with member degree `<= max_degree`.
    pub fn n_values_up_to_degree(&self, max_degree: usize) -> std::ops::RangeInclusive<usize> {
        let fixed = self.prefix.degree() + self.suffix.degree();
        let top = max_degree.saturating_sub(fixed);
        let top = self.max_n.map_or(top, |m| m.min(top));
        self.min_n..=top
    }

    fn max_letter(&self) -> Letter {
        self.prefix
            .max_letter()
            .max(self.repeated)
            .max(self.suffix.max_letter())
    }
}

impl fmt::Display for ParamMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.X{}^n.{}", self.prefix, self.repeated, self.suffix)?;
        match (self.min_n, self.max_n) {
            (1, None) => Ok(()),
            (lo, None) => write!(f, " n>={lo}"),
            (lo, Some(hi)) => write!(f, " n={lo}..{hi}"),
        }
    }
}

impl FromStr for ParamMonomial {
    type Err = Error;

    /// `X5.X4^n.X1`, optionally followed by ` n>=3` or ` n=2..9`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let (body, range) = match t.split_once(char::is_whitespace) {
            Some((b, r)) => (b, Some(r.trim())),
            None => (t, None),
        };
        let factors: Vec<&str> = body.split('.').collect();
        let slots: Vec<usize> = factors
            .iter()
            .enumerate()
            .filter(|(_, f)| f.ends_with("^n"))
            .map(|(k, _)| k)
            .collect();
        if slots.len() != 1 {
            return Err(Error::parse(
                0,
                "a parametric member has exactly one `X<k>^n` factor",
            ));
        }
        let k = slots[0];
        let factor = factors[k];
        let offset = factors[..k].iter().map(|f| f.len() + 1).sum::<usize>();
        let repeated = factor
            .strip_prefix('X')
            .and_then(|f| f.strip_suffix("^n"))
            .ok_or_else(|| Error::parse(offset, format!("bad parametric factor `{factor}`")))?;
        let repeated = parse_index(repeated, offset + 1)?;
        let side = |parts: &[&str]| -> Result<Monomial> {
            if parts.is_empty() {
                return Ok(Monomial::one());
            }
            parts.join(".").parse()
        };
        let prefix = side(&factors[..k])?;
        let suffix = side(&factors[k + 1..])?;
        let (min_n, max_n) = match range {
            None => (1, None),
            Some(r) => parse_range(r, body.len() + 1)?,
        };
        ParamMonomial::with_range(prefix, repeated, suffix, min_n, max_n)
    }
}

fn parse_range(r: &str, offset: usize) -> Result<(usize, Option<usize>)> {
    let bad = || Error::parse(offset, format!("bad parametric range `{r}`"));
    if let Some(lo) = r.strip_prefix("n>=") {
        return Ok((lo.parse().map_err(|_| bad())?, None));
    }
    let (lo, hi) = r
        .strip_prefix("n=")
        .and_then(|x| x.split_once(".."))
        .ok_or_else(bad)?;
    Ok((
        lo.parse().map_err(|_| bad())?,
        Some(hi.parse().map_err(|_| bad())?),
    ))
}

/// Fixed monomials plus parametric members over `d` generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialFamily {
    d: usize,
    fixed: Vec<Monomial>,
    parametric: Vec<ParamMonomial>,
}

impl MonomialFamily {
    pub fn new(d: usize, fixed: Vec<Monomial>, parametric: Vec<ParamMonomial>) -> Result<Self> {
        if d == 0 || d > Letter::MAX as usize {
            return Err(Error::usage(format!("generator count {d} out of range")));
        }
        for m in &fixed {
            if m.is_one() {
                return Err(Error::usage(
                    "the trivial monomial 1 cannot be a family member",
                ));
            }
            m.check_ambient(d)?;
        }
        for q in &parametric {
            if q.max_letter() as usize > d {
                return Err(Error::usage(format!("member {q} uses an index above {d}")));
            }
        }
        Ok(MonomialFamily {
            d,
            fixed,
            parametric,
        })
    }

    pub fn fixed_only(d: usize, fixed: Vec<Monomial>) -> Result<Self> {
        Self::new(d, fixed, Vec::new())
    }

    pub fn generators(&self) -> usize {
        self.d
    }

    pub fn fixed(&self) -> &[Monomial] {
        &self.fixed
    }

    pub fn parametric(&self) -> &[ParamMonomial] {
        &self.parametric
    }

    /// Every member of degree `<= max_degree`, parametric ones instantiated.
    pub fn members_up_to(&self, max_degree: usize) -> Vec<Monomial> {
        let mut out: Vec<Monomial> = self
            .fixed
            .iter()
            .filter(|m| m.degree() <= max_degree)
            .cloned()
            .collect();
        for q in &self.parametric {
            out.extend(
                q.n_values_up_to_degree(max_degree)
                    .map(|n| q.instantiate(n)),
            );
        }
        out
    }

    /// Member degrees `<= max_degree`, one entry per member.
    pub fn degrees_up_to(&self, max_degree: usize) -> Vec<usize> {
        self.members_up_to(max_degree)
            .iter()
            .map(Monomial::degree)
            .collect()
    }

    /// One member per line; `#` starts a comment. Parametric members use the
    /// literal `^n` exponent.
    pub fn parse(text: &str, d: usize) -> Result<Self> {
        let mut fixed = Vec::new();
        let mut parametric = Vec::new();
        let mut offset = 0;
        for line in text.split_inclusive('\n') {
            let content = line.split('#').next().unwrap_or("").trim();
            if !content.is_empty() {
                let lead = line.len() - line.trim_start().len();
                let relocate = |e: Error| match e {
                    Error::Parse { offset: o, message } => Error::Parse {
                        offset: offset + lead + o,
                        message,
                    },
                    other => other,
                };
                if content.contains("^n") {
                    parametric.push(content.parse::<ParamMonomial>().map_err(relocate)?);
                } else {
                    fixed.push(content.parse::<Monomial>().map_err(relocate)?);
                }
            }
            offset += line.len();
        }
        Self::new(d, fixed, parametric)
    }
}

impl fmt::Display for MonomialFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.fixed {
            writeln!(f, "{m}")?;
        }
        for q in &self.parametric {
            writeln!(f, "{q}")?;
        }
        Ok(())
    }
}
