use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::Zero;

use super::MonomialFamily;
use crate::series::Monomial;

/// Aho-Corasick automaton over the alphabet `1..=d` recognizing words that
/// end with a forbidden factor.
struct FactorAutomaton {
    /// `next[state][letter - 1]`.
    next: Vec<Vec<usize>>,
    /// Some forbidden word is a suffix of the state's label.
    dead: Vec<bool>,
}

impl FactorAutomaton {
    fn build(d: usize, words: &[Monomial]) -> Self {
        let mut goto: Vec<Vec<Option<usize>>> = vec![vec![None; d]];
        let mut dead = vec![false];
        for w in words {
            let mut s = 0;
            for &l in w.letters() {
                let k = l as usize - 1;
                s = match goto[s][k] {
                    Some(t) => t,
                    None => {
                        goto.push(vec![None; d]);
                        dead.push(false);
                        let t = goto.len() - 1;
                        goto[s][k] = Some(t);
                        t
                    }
                };
            }
            dead[s] = true;
        }

        let n = goto.len();
        let mut next = vec![vec![0usize; d]; n];
        let mut fail = vec![0usize; n];
        let mut queue = VecDeque::new();
        for k in 0..d {
            match goto[0][k] {
                Some(t) => {
                    next[0][k] = t;
                    queue.push_back(t);
                }
                None => next[0][k] = 0,
            }
        }
        while let Some(s) = queue.pop_front() {
            dead[s] = dead[s] || dead[fail[s]];
            for k in 0..d {
                match goto[s][k] {
                    Some(t) => {
                        fail[t] = next[fail[s]][k];
                        next[s][k] = t;
                        queue.push_back(t);
                    }
                    None => next[s][k] = next[fail[s]][k],
                }
            }
        }
        FactorAutomaton { next, dead }
    }
}

/// Number of degree-`n` monomials, `n = 0..=upto`, that contain no member of
/// the family as a factor. Parametric members are instantiated up to degree
/// `upto`.
pub fn count_normal_words(family: &MonomialFamily, upto: usize) -> Vec<BigInt> {
    let d = family.generators();
    let words = family.members_up_to(upto);
    let automaton = FactorAutomaton::build(d, &words);
    let states = automaton.next.len();

    let mut current = vec![BigInt::zero(); states];
    current[0] = BigInt::from(1);
    let mut out = Vec::with_capacity(upto + 1);
    for degree in 0..=upto {
        out.push(current.iter().sum());
        if degree == upto {
            break;
        }
        let mut following = vec![BigInt::zero(); states];
        for (s, count) in current.iter().enumerate() {
            if count.is_zero() {
                continue;
            }
            for &t in &automaton.next[s] {
                if !automaton.dead[t] {
                    following[t] += count;
                }
            }
        }
        current = following;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(d: usize, text: &str, upto: usize) -> Vec<i64> {
        let f = MonomialFamily::parse(text, d).unwrap();
        count_normal_words(&f, upto)
            .into_iter()
            .map(|c| i64::try_from(c).unwrap())
            .collect()
    }

    /// Counts by listing every word.
    fn brute(d: usize, text: &str, upto: usize) -> Vec<i64> {
        let f = MonomialFamily::parse(text, d).unwrap();
        let members = f.members_up_to(upto);
        let mut out = vec![1i64];
        let mut layer: Vec<Vec<u16>> = vec![Vec::new()];
        for _ in 1..=upto {
            let mut grown = Vec::new();
            for w in &layer {
                for l in 1..=d as u16 {
                    let mut v = w.clone();
                    v.push(l);
                    let m = Monomial::new(v.iter().copied()).unwrap();
                    if !members.iter().any(|f| super::super::is_submonomial(f, &m)) {
                        grown.push(v);
                    }
                }
            }
            out.push(grown.len() as i64);
            layer = grown;
        }
        out
    }

    #[test]
    fn examples() {
        assert_eq!(counts(2, "", 5), [1, 2, 4, 8, 16, 32]);
        assert_eq!(counts(1, "X1.X1\n", 4), [1, 1, 0, 0, 0]);
        assert_eq!(counts(3, "X2\n", 3), [1, 2, 4, 8]);
    }

    #[test]
    fn matches_brute_force() {
        for (d, text) in [
            (2, "X1.X2\nX2.X1\n"),
            (3, "X1.X2.X1\nX3.X3\n"),
            (3, "X2.X1\nX3.X2^n.X1\n"),
            (2, "X1.X1.X2\nX1.X2\n"),
            (5, "X5.X3\nX4.X2\nX4.X3\nX5.X2\nX5.X1\nX5.X4^n.X1\n"),
        ] {
            assert_eq!(counts(d, text, 6), brute(d, text, 6), "{text}");
        }
    }
}
