use std::fmt;

use super::{MonomialFamily, ParamMonomial};
use crate::error::{Error, Result};
use crate::series::{Letter, Monomial};

/// `a` occurs as a contiguous factor of `b`.
pub fn is_submonomial(a: &Monomial, b: &Monomial) -> bool {
    let (a, b) = (a.letters(), b.letters());
    a.is_empty() || b.windows(a.len()).any(|w| w == a)
}

/// Some nontrivial proper prefix of `a` equals a nontrivial proper suffix of `b`.
pub fn has_overlap(a: &Monomial, b: &Monomial) -> bool {
    overlap_part(a, b).is_some()
}

/// The shortest witness for [`has_overlap`].
fn overlap_part(a: &Monomial, b: &Monomial) -> Option<Monomial> {
    let (a, b) = (a.letters(), b.letters());
    let top = a.len().min(b.len());
    (1..top)
        .find(|&k| a[..k] == b[b.len() - k..])
        .map(|k| Monomial::new(a[..k].iter().copied()).expect("letters of a monomial"))
}

/// Which reading of the no-overlap condition to apply.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Policy {
    /// No member is a factor of another, and no nontrivial proper prefix of
    /// a member equals a nontrivial proper suffix of a member.
    #[default]
    Standard,
    /// No member is a factor of another, and no two members share a
    /// nontrivial proper prefix. Stricter: rejects `{X5.X3, X5.X2}`.
    Literal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FreenessOptions {
    pub policy: Policy,
    /// Also test each member against itself for overlaps (`X1.X2.X1`).
    pub self_overlap: bool,
}

impl Default for FreenessOptions {
    fn default() -> Self {
        FreenessOptions {
            policy: Policy::Standard,
            self_overlap: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    Submonomial,
    Overlap,
    Duplicate,
    SharedPrefix,
}

/// A member of a family: a fixed monomial or one instance of a parametric one.
/// Indices are 0-based positions in the family's lists.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MemberRef {
    Fixed(usize),
    Param { index: usize, n: usize },
}

impl fmt::Display for MemberRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MemberRef::Fixed(i) => write!(f, "member {}", i + 1),
            MemberRef::Param { index, n } => write!(f, "parametric member {} at n={n}", index + 1),
        }
    }
}

/// Why a family is not free.
///
/// - `Submonomial`: `first_word` is a factor of `second_word`.
/// - `Duplicate`: the two words are equal.
/// - `Overlap`: `shared` is a proper prefix of `first_word` and a proper
///   suffix of `second_word`.
/// - `SharedPrefix`: both words start with `shared`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub kind: ViolationKind,
    pub first: MemberRef,
    pub first_word: Monomial,
    pub second: MemberRef,
    pub second_word: Monomial,
    pub shared: Monomial,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = (&self.first_word, &self.second_word);
        let refs = format!("({}; {})", self.first, self.second);
        match self.kind {
            ViolationKind::Submonomial => write!(f, "submonomial: {a} is a factor of {b} {refs}"),
            ViolationKind::Duplicate => write!(f, "duplicate: {a} occurs twice {refs}"),
            ViolationKind::Overlap => write!(
                f,
                "overlap: {} is a proper prefix of {a} and a proper suffix of {b} {refs}",
                self.shared
            ),
            ViolationKind::SharedPrefix => {
                write!(
                    f,
                    "shared prefix: {a} and {b} both begin with {} {refs}",
                    self.shared
                )
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FreenessVerdict {
    Free,
    NotFree(Witness),
}

impl FreenessVerdict {
    pub fn is_free(&self) -> bool {
        matches!(self, FreenessVerdict::Free)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            FreenessVerdict::Free => None,
            FreenessVerdict::NotFree(w) => Some(w),
        }
    }
}

impl fmt::Display for FreenessVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreenessVerdict::Free => f.write_str("combinatorially free"),
            FreenessVerdict::NotFree(w) => write!(f, "not free: {w}"),
        }
    }
}

struct Member<'a> {
    r: MemberRef,
    word: &'a Monomial,
}

/// Tests one pair of members. `same` marks a member paired with itself.
fn check_pair(a: Member, b: Member, same: bool, opts: FreenessOptions) -> Option<Witness> {
    let witness = |kind, first: &Member, second: &Member, shared: Monomial| Witness {
        kind,
        first: first.r,
        first_word: first.word.clone(),
        second: second.r,
        second_word: second.word.clone(),
        shared,
    };
    if !same {
        if a.word == b.word {
            return Some(witness(ViolationKind::Duplicate, &a, &b, a.word.clone()));
        }
        if is_submonomial(a.word, b.word) {
            return Some(witness(ViolationKind::Submonomial, &a, &b, a.word.clone()));
        }
        if is_submonomial(b.word, a.word) {
            return Some(witness(ViolationKind::Submonomial, &b, &a, b.word.clone()));
        }
    }
    match opts.policy {
        Policy::Standard => {
            if same && !opts.self_overlap {
                return None;
            }
            if let Some(s) = overlap_part(a.word, b.word) {
                return Some(witness(ViolationKind::Overlap, &a, &b, s));
            }
            if !same {
                if let Some(s) = overlap_part(b.word, a.word) {
                    return Some(witness(ViolationKind::Overlap, &b, &a, s));
                }
            }
            None
        }
        Policy::Literal => {
            let shares = !same
                && a.word.degree() >= 2
                && b.word.degree() >= 2
                && a.word.first() == b.word.first();
            shares.then(|| {
                let head = Monomial::letter(a.word.first().expect("nonempty"));
                witness(ViolationKind::SharedPrefix, &a, &b, head)
            })
        }
    }
}

/// Letters at positions after the first, over all instances of `q`.
fn letters_after_start(q: &ParamMonomial) -> Vec<Letter> {
    let mut v: Vec<Letter> = q.prefix().letters()[1..].to_vec();
    v.push(q.repeated());
    v.extend_from_slice(q.suffix().letters());
    v
}

/// Letters at positions before the last, over all instances of `q`.
fn letters_before_end(q: &ParamMonomial) -> Vec<Letter> {
    let s = q.suffix().letters();
    let mut v: Vec<Letter> = q.prefix().letters().to_vec();
    v.push(q.repeated());
    v.extend_from_slice(&s[..s.len() - 1]);
    v
}

/// The first letter of every instance of `a` occurs in instances of `b`
/// only at the start, and its last letter only at the end.
fn anchored_in(a: &ParamMonomial, b: &ParamMonomial) -> bool {
    let first = a.prefix().first().expect("nonempty prefix");
    let last = a.suffix().last().expect("nonempty suffix");
    !letters_after_start(b).contains(&first) && !letters_before_end(b).contains(&last)
}

/// Decides combinatorial freeness, returning the first violation found.
///
/// Fixed members are compared pairwise. A fixed member `m` of degree `L`
/// against `P X_r^n S` is compared for `n` up to `L + 2`: a factor or
/// overlap of length at most `L` sees at most `L` copies of `X_r`, so the
/// outcome no longer changes past that point. Two parametric members are
/// compared in closed form when each one's first letter occurs in the
/// other's instances only at the start and its last letter only at the end;
/// then no proper prefix of one can be a suffix of the other, and a factor
/// must span the whole word, so only equality remains, which is eventually
/// periodic in `n` and checked by enumeration. Other parametric shapes are
/// rejected as unsupported.
pub fn is_combinatorially_free(
    f: &MonomialFamily,
    opts: FreenessOptions,
) -> Result<FreenessVerdict> {
    let fixed = f.fixed();
    let params = f.parametric();

    for (i, a) in fixed.iter().enumerate() {
        for (j, b) in fixed.iter().enumerate().skip(i) {
            let found = check_pair(
                Member {
                    r: MemberRef::Fixed(i),
                    word: a,
                },
                Member {
                    r: MemberRef::Fixed(j),
                    word: b,
                },
                i == j,
                opts,
            );
            if let Some(w) = found {
                return Ok(FreenessVerdict::NotFree(w));
            }
        }
    }

    for (i, m) in fixed.iter().enumerate() {
        for (k, q) in params.iter().enumerate() {
            let cutoff = q.min_n().max(m.degree() + 2);
            let top = q.max_n().map_or(cutoff, |hi| hi.min(cutoff));
            for n in q.min_n()..=top {
                let word = q.instantiate(n);
                let found = check_pair(
                    Member {
                        r: MemberRef::Fixed(i),
                        word: m,
                    },
                    Member {
                        r: MemberRef::Param { index: k, n },
                        word: &word,
                    },
                    false,
                    opts,
                );
                if let Some(w) = found {
                    return Ok(FreenessVerdict::NotFree(w));
                }
            }
        }
    }

    for (k, a) in params.iter().enumerate() {
        for (l, b) in params.iter().enumerate().skip(k) {
            if !anchored_in(a, b) || !anchored_in(b, a) {
                return Err(Error::usage(format!(
                    "unsupported parametric pair {a} / {b}: first and last letters must not recur inside the other member"
                )));
            }
            if let Some(w) = param_pair_violation(k, a, l, b, opts) {
                return Ok(FreenessVerdict::NotFree(w));
            }
        }
    }
    Ok(FreenessVerdict::Free)
}

/// Violations between two anchored parametric members (`k == l` compares
/// distinct instances of one member).
fn param_pair_violation(
    k: usize,
    a: &ParamMonomial,
    l: usize,
    b: &ParamMonomial,
    opts: FreenessOptions,
) -> Option<Witness> {
    let refs = |na: usize, nb: usize| {
        (
            MemberRef::Param { index: k, n: na },
            MemberRef::Param { index: l, n: nb },
        )
    };
    if opts.policy == Policy::Literal && a.prefix().first() == b.prefix().first() {
        let (na, nb) = if k == l {
            let second = a.min_n() + 1;
            if !a.contains_n(second) {
                return None;
            }
            (a.min_n(), second)
        } else {
            (a.min_n(), b.min_n())
        };
        let (first, second) = refs(na, nb);
        return Some(Witness {
            kind: ViolationKind::SharedPrefix,
            first,
            first_word: a.instantiate(na),
            second,
            second_word: b.instantiate(nb),
            shared: Monomial::letter(a.prefix().first().expect("nonempty")),
        });
    }
    if k == l {
        // instances differ in degree, and anchoring rules out factors and overlaps
        return None;
    }
    let ends = a.prefix().degree() + a.suffix().degree();
    let ends_b = b.prefix().degree() + b.suffix().degree();
    let cutoff = a.min_n().max(ends + ends_b + 2) + 1;
    let top = a.max_n().map_or(cutoff, |hi| hi.min(cutoff));
    for na in a.min_n()..=top {
        let total = ends + na;
        let Some(nb) = total.checked_sub(ends_b) else {
            continue;
        };
        if !b.contains_n(nb) {
            continue;
        }
        let (wa, wb) = (a.instantiate(na), b.instantiate(nb));
        if wa == wb {
            let (first, second) = refs(na, nb);
            return Some(Witness {
                kind: ViolationKind::Duplicate,
                first,
                first_word: wa.clone(),
                second,
                second_word: wb,
                shared: wa,
            });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> Monomial {
        s.parse().unwrap()
    }

    fn family(d: usize, text: &str) -> MonomialFamily {
        MonomialFamily::parse(text, d).unwrap()
    }

    fn verdict(d: usize, text: &str) -> FreenessVerdict {
        is_combinatorially_free(&family(d, text), FreenessOptions::default()).unwrap()
    }

    #[test]
    fn submonomial_examples() {
        assert!(is_submonomial(&m("X4.X3"), &m("X5.X4.X3.X1")));
        assert!(!is_submonomial(&m("X4.X3"), &m("X4.X1.X3")));
        assert!(is_submonomial(&m("X2.X1"), &m("X2.X1")));
        assert!(is_submonomial(&Monomial::one(), &m("X1")));
        assert!(!is_submonomial(&m("X1.X1"), &m("X1")));
    }

    #[test]
    fn overlap_examples() {
        assert!(has_overlap(&m("X1.X2"), &m("X3.X1")));
        assert!(!has_overlap(&m("X5.X3"), &m("X5.X2")));
        assert!(!has_overlap(&m("X1"), &m("X2")));
        assert!(!has_overlap(&m("X1"), &m("X1")));
        assert!(has_overlap(&m("X1.X2.X1"), &m("X1.X2.X1")));
        assert_eq!(
            overlap_part(&m("X1.X2.X3"), &m("X3.X1.X2")),
            Some(m("X1.X2"))
        );
    }

    #[test]
    fn example_family_with_parametric_member_is_free() {
        let text = "X5.X3\nX4.X2\nX4.X3\nX5.X2\nX5.X1\nX5.X4^n.X1\n";
        assert!(verdict(5, text).is_free());
    }

    #[test]
    fn simple_failures() {
        let v = verdict(2, "X1\nX1.X2\n");
        let w = v.witness().unwrap();
        assert_eq!(w.kind, ViolationKind::Submonomial);
        assert_eq!(w.first_word, m("X1"));

        let v = verdict(2, "X1.X2\nX2.X1\n");
        let w = v.witness().unwrap();
        assert_eq!(w.kind, ViolationKind::Overlap);
        assert_eq!(w.shared.degree(), 1);

        let v = verdict(2, "X1.X2\nX1.X2\n");
        assert_eq!(v.witness().unwrap().kind, ViolationKind::Duplicate);
    }

    #[test]
    fn self_overlap_switch() {
        let f = family(2, "X1.X2.X1\n");
        assert!(!is_combinatorially_free(&f, FreenessOptions::default())
            .unwrap()
            .is_free());
        let off = FreenessOptions {
            self_overlap: false,
            ..Default::default()
        };
        assert!(is_combinatorially_free(&f, off).unwrap().is_free());
    }

    #[test]
    fn literal_policy_rejects_shared_prefix() {
        let f = family(5, "X5.X3\nX4.X2\nX4.X3\nX5.X2\nX5.X1\nX5.X4^n.X1\n");
        let literal = FreenessOptions {
            policy: Policy::Literal,
            ..Default::default()
        };
        let v = is_combinatorially_free(&f, literal).unwrap();
        assert_eq!(v.witness().unwrap().kind, ViolationKind::SharedPrefix);
        assert!(is_combinatorially_free(&f, FreenessOptions::default())
            .unwrap()
            .is_free());
        // a single-member parametric family shares prefixes between its own instances
        let g = family(5, "X5.X4^n.X1\n");
        assert!(!is_combinatorially_free(&g, literal).unwrap().is_free());
        let h = family(5, "X5.X4^n.X1 n=3..3\n");
        assert!(is_combinatorially_free(&h, literal).unwrap().is_free());
    }

    #[test]
    fn cut_square_inside_hats_is_rejected() {
        let v = verdict(5, "X5.X4\nX5.X4^n.X1\n");
        let w = v.witness().unwrap();
        assert_eq!(w.kind, ViolationKind::Submonomial);
        assert_eq!(w.second, MemberRef::Param { index: 0, n: 1 });
    }

    #[test]
    fn parametric_only_families() {
        assert!(verdict(5, "X5.X4^n.X1\n").is_free());
        assert!(verdict(5, "X5.X4^n.X1\nX3.X2^n.X1\n").is_free());
        // X3.X2^n.X1 ends in X1, X1.X2^n.X3 starts with X1: outside the closed form
        let f = family(3, "X3.X2^n.X1\nX1.X2^n.X3\n");
        assert!(is_combinatorially_free(&f, FreenessOptions::default()).is_err());
    }

    #[test]
    fn parametric_overlap_with_fixed_member() {
        // X1.X3 overlaps the X3 that begins every instance
        let w = verdict(3, "X1.X3\nX3.X2^n.X1\n");
        assert_eq!(w.witness().unwrap().kind, ViolationKind::Overlap);
        // a fixed member equal to an instance far out in the range
        let v = verdict(3, "X3.X2.X2.X2.X2.X2.X2.X1\nX3.X2^n.X1 n>=2\n");
        let w = v.witness().unwrap();
        assert_eq!(w.kind, ViolationKind::Duplicate);
        assert_eq!(w.second, MemberRef::Param { index: 0, n: 6 });
    }

    #[test]
    fn equal_parametric_members_are_duplicates() {
        let v = verdict(5, "X5.X4^n.X1\nX5.X4.X4^n.X1 n>=1\n");
        let w = v.witness().unwrap();
        assert_eq!(w.kind, ViolationKind::Duplicate);
        assert_eq!(w.first, MemberRef::Param { index: 0, n: 2 });
        // disjoint ranges never meet
        assert!(verdict(5, "X5.X4^n.X1 n=1..3\nX5.X4.X4^n.X1 n>=3\n").is_free());
    }

    #[test]
    fn unsupported_parametric_shapes() {
        let f = family(3, "X1.X1^n.X2\n");
        assert!(matches!(
            is_combinatorially_free(&f, FreenessOptions::default()),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn parametric_agrees_with_enumeration() {
        let text = "X5.X3\nX4.X2\nX4.X3\nX5.X2\nX5.X1\n";
        let fixed = family(5, text);
        let mut members = fixed.fixed().to_vec();
        members.extend((1..=64).map(|n| ParamMonomial::anchored(5, 4, 1).unwrap().instantiate(n)));
        let f = MonomialFamily::fixed_only(5, members).unwrap();
        assert!(is_combinatorially_free(&f, FreenessOptions::default())
            .unwrap()
            .is_free());
    }
}
