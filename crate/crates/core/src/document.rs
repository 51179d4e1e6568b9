//! Line-oriented presentation documents.
//!
//! ```text
//! # Koch relations for p = 3
//! p=3
//! d=5
//! labels=q31,q19,q13,q337,q7
//! primes=31,19,13,337,7
//! rel=x1^30*[x1,x4]*[x1,x5]
//! form=1*X5.X3 + 2*X3.X5 + O(>=3)
//! ```
//!
//! `p` and `d` must precede the relations. `rel=` takes a word in the group
//! word grammar, `form=` an explicit initial form in the series syntax.
//! `#` starts a comment; blank lines are ignored.

use std::fmt;
use std::str::FromStr;

use crate::arithmetic::{
    koch_word, parse_prime_list, relation_initial_form, LinkingMatrix, TamePrime,
};
use crate::error::{Error, Result};
use crate::magnus::GroupWord;
use crate::series::{check_odd_prime, TruncatedSeries};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    Word(GroupWord),
    Form(TruncatedSeries),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationDocument {
    pub p: u64,
    pub d: usize,
    pub labels: Vec<String>,
    /// Source primes when the relations come from a linking matrix.
    pub primes: Vec<u64>,
    pub relations: Vec<Relation>,
}

/// How [`PresentationDocument::from_linking`] writes each relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationStyle {
    Words,
    Forms,
}

impl PresentationDocument {
    pub fn new(p: u64, d: usize) -> Result<Self> {
        check_odd_prime(p)?;
        TruncatedSeries::zero(d, p, 1)?;
        Ok(PresentationDocument {
            p,
            d,
            labels: Vec::new(),
            primes: Vec::new(),
            relations: Vec::new(),
        })
    }

    /// One relation per prime: the Koch word or its degree-two initial form.
    /// Forms of zero rows are written as the zero series.
    pub fn from_linking(matrix: &LinkingMatrix, style: RelationStyle) -> Result<Self> {
        let mut doc = Self::new(matrix.p() as u64, matrix.size())?;
        doc.primes = matrix.primes().to_vec();
        for i in 1..=matrix.size() {
            doc.relations.push(match style {
                RelationStyle::Words => Relation::Word(koch_word(i, matrix)?),
                RelationStyle::Forms => Relation::Form(relation_initial_form(i, matrix)?.form),
            });
        }
        Ok(doc)
    }

    fn validate(&self) -> Result<()> {
        if !self.labels.is_empty() && self.labels.len() != self.d {
            return Err(Error::usage(format!(
                "{} labels for {} generators",
                self.labels.len(),
                self.d
            )));
        }
        if !self.primes.is_empty() && self.primes.len() != self.d {
            return Err(Error::usage(format!(
                "{} source primes for {} generators",
                self.primes.len(),
                self.d
            )));
        }
        for &ell in &self.primes {
            TamePrime::new(ell, self.p)?;
        }
        Ok(())
    }
}

impl fmt::Display for PresentationDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p={}", self.p)?;
        writeln!(f, "d={}", self.d)?;
        if !self.labels.is_empty() {
            writeln!(f, "labels={}", self.labels.join(","))?;
        }
        if !self.primes.is_empty() {
            let ps: Vec<String> = self.primes.iter().map(u64::to_string).collect();
            writeln!(f, "primes={}", ps.join(","))?;
        }
        for r in &self.relations {
            match r {
                Relation::Word(w) => writeln!(f, "rel={w}")?,
                Relation::Form(s) => writeln!(f, "form={s}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for PresentationDocument {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut p: Option<u64> = None;
        let mut d: Option<usize> = None;
        let mut labels = Vec::new();
        let mut primes = Vec::new();
        let mut relations = Vec::new();
        let mut offset = 0;
        for raw in text.split_inclusive('\n') {
            let line_start = offset;
            offset += raw.len();
            let line = raw.split('#').next().unwrap_or("");
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let at = line_start + (line.len() - line.trim_start().len());
            let (key, value) = trimmed
                .split_once('=')
                .ok_or_else(|| Error::parse(at, "expected `key=value`"))?;
            let value_at = at + key.len() + 1 + (value.len() - value.trim_start().len());
            let relocate = |e: Error| match e {
                Error::Parse { offset, message } => Error::parse(value_at + offset, message),
                other => other,
            };
            let value = value.trim();
            let header = |seen: bool| {
                if seen || !relations.is_empty() {
                    Err(Error::parse(
                        at,
                        format!("`{}` must appear once, before relations", key.trim()),
                    ))
                } else {
                    Ok(())
                }
            };
            match key.trim() {
                "p" => {
                    header(p.is_some())?;
                    let v = value.parse().map_err(|_| Error::parse(value_at, "bad p"))?;
                    check_odd_prime(v)?;
                    p = Some(v);
                }
                "d" => {
                    header(d.is_some())?;
                    d = Some(value.parse().map_err(|_| Error::parse(value_at, "bad d"))?);
                }
                "labels" => {
                    header(!labels.is_empty())?;
                    labels = value.split(',').map(|s| s.trim().to_string()).collect();
                    if labels.iter().any(String::is_empty) {
                        return Err(Error::parse(value_at, "empty label"));
                    }
                }
                "primes" => {
                    header(!primes.is_empty())?;
                    primes = parse_prime_list(value).map_err(relocate)?;
                }
                "rel" | "form" => {
                    let (Some(p), Some(d)) = (p, d) else {
                        return Err(Error::parse(at, "`p` and `d` must precede relations"));
                    };
                    relations.push(if key.trim() == "rel" {
                        let w: GroupWord = value.parse().map_err(relocate)?;
                        if w.max_generator() as usize > d {
                            return Err(Error::usage(format!(
                                "relation {w} uses a generator above x{d}"
                            )));
                        }
                        Relation::Word(w)
                    } else {
                        Relation::Form(TruncatedSeries::parse(value, d, p, None).map_err(relocate)?)
                    });
                }
                other => return Err(Error::parse(at, format!("unknown key `{other}`"))),
            }
        }
        let p = p.ok_or_else(|| Error::parse(text.len(), "missing `p=`"))?;
        let d = d.ok_or_else(|| Error::parse(text.len(), "missing `d=`"))?;
        let mut doc = PresentationDocument::new(p, d)?;
        doc.labels = labels;
        doc.primes = primes;
        doc.relations = relations;
        doc.validate()?;
        Ok(doc)
    }
}
