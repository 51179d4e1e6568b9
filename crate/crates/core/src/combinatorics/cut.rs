use std::collections::BTreeSet;
use std::fmt;

use super::{
    is_combinatorially_free, FreenessOptions, FreenessVerdict, MonomialFamily, ParamMonomial,
};
use crate::error::{Error, Result};
use crate::series::{Letter, Monomial};

/// Indices with `1 < i0 <= c < j0 <= d`; the cut member is `X_j0 X_i0^n X_1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CutPair {
    pub i0: Letter,
    pub j0: Letter,
}

impl CutPair {
    pub fn family(self) -> CutFamily {
        CutFamily {
            lead: self.j0,
            repeated: self.i0,
            tail: 1,
        }
    }
}

impl fmt::Display for CutPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(i0, j0) = ({}, {})", self.i0, self.j0)
    }
}

/// The parametric member `X_lead X_repeated^n X_tail`, `n >= 1`, with
/// `tail < repeated < lead`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CutFamily {
    pub lead: Letter,
    pub repeated: Letter,
    pub tail: Letter,
}

impl CutFamily {
    pub fn member(self) -> ParamMonomial {
        ParamMonomial::anchored(self.lead, self.repeated, self.tail).expect("nonzero letters")
    }

    fn check(self, d: usize) -> Result<()> {
        if !(1 <= self.tail && self.tail < self.repeated && self.repeated < self.lead)
            || self.lead as usize > d
        {
            return Err(Error::usage(format!(
                "cut member {} needs 1 <= tail < repeated < lead <= {d}",
                self.member()
            )));
        }
        Ok(())
    }
}

impl From<CutPair> for CutFamily {
    fn from(c: CutPair) -> Self {
        c.family()
    }
}

impl fmt::Display for CutFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.member())
    }
}

/// Size of the candidate grid, `(d - c)(c - 1)`.
pub fn cut_bound(d: usize, c: usize) -> usize {
    d.saturating_sub(c) * c.saturating_sub(1)
}

/// The smallest `c` with `s <= c < t` for every pair `(t, s)`.
pub fn infer_split(pairs: &[(Letter, Letter)]) -> Result<usize> {
    let max_s = pairs.iter().map(|&(_, s)| s).max();
    let min_t = pairs.iter().map(|&(t, _)| t).min();
    match (max_s, min_t) {
        (Some(s), Some(t)) if s < t => Ok(s as usize),
        (Some(s), Some(t)) => Err(Error::usage(format!(
            "hat pairs do not split: largest second index {s} is not below smallest first index {t}"
        ))),
        _ => Err(Error::usage(
            "cannot infer the split from an empty hat list; pass it explicitly",
        )),
    }
}

fn validate_pairs(pairs: &[(Letter, Letter)], c: usize, d: usize) -> Result<()> {
    if c < 2 || c >= d {
        return Err(Error::usage(format!(
            "split c = {c} must satisfy 2 <= c < d = {d}"
        )));
    }
    let mut seen = BTreeSet::new();
    for &(t, s) in pairs {
        if s == 0 || s as usize > c || t as usize <= c || t as usize > d {
            return Err(Error::usage(format!(
                "pair X{t}.X{s} does not satisfy 1 <= s <= {c} < t <= {d}"
            )));
        }
        if !seen.insert((t, s)) {
            return Err(Error::usage(format!("pair X{t}.X{s} listed twice")));
        }
    }
    Ok(())
}

/// First grid cell `(i0, j0)`, `1 < i0 <= c < j0 <= d`, with `X_j0 X_i0`
/// not among the hats; smallest `j0` first, then smallest `i0`.
///
/// `pairs` holds `(t, s)` for hats `X_t X_s`. A cell always exists when
/// `pairs.len() < (d - c)(c - 1)`.
pub fn choose_cut_pair(pairs: &[(Letter, Letter)], c: usize, d: usize) -> Result<CutPair> {
    validate_pairs(pairs, c, d)?;
    let taken: BTreeSet<(Letter, Letter)> = pairs.iter().copied().collect();
    for j0 in (c + 1)..=d {
        for i0 in 2..=c {
            let (i0, j0) = (i0 as Letter, j0 as Letter);
            if !taken.contains(&(j0, i0)) {
                return Ok(CutPair { i0, j0 });
            }
        }
    }
    Err(Error::domain(format!(
        "no admissible cut pair: r = {} >= (d - c)(c - 1) = {} and every cell of the grid is a hat",
        pairs.len(),
        cut_bound(d, c)
    )))
}

/// Freeness of `hats` together with the parametric cut member.
pub fn certify_family_with_cut(
    hats: &[Monomial],
    cut: impl Into<CutFamily>,
    d: usize,
) -> Result<FreenessVerdict> {
    let cut = cut.into();
    cut.check(d)?;
    if let Some(h) = hats.iter().find(|h| h.degree() != 2) {
        return Err(Error::usage(format!("hat {h} is not of degree 2")));
    }
    let family = MonomialFamily::new(d, hats.to_vec(), vec![cut.member()])?;
    is_combinatorially_free(&family, FreenessOptions::default())
}

/// Searches all `X_lead X_repeated^n X_tail` with `tail < repeated < lead <= d`
/// (smallest tail, then lead, then repeated) for one whose union with
/// `hats` is free. Covers cut members outside the `(i0, j0)` grid.
pub fn extended_cut_search(hats: &[Monomial], d: usize) -> Result<Option<CutFamily>> {
    for tail in 1..=d {
        for lead in (tail + 2)..=d {
            for repeated in (tail + 1)..lead {
                let cut = CutFamily {
                    lead: lead as Letter,
                    repeated: repeated as Letter,
                    tail: tail as Letter,
                };
                if certify_family_with_cut(hats, cut, d)?.is_free() {
                    return Ok(Some(cut));
                }
            }
        }
    }
    Ok(None)
}
