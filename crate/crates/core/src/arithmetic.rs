//! Number-theoretic front end over `Q`.
//!
//! For an odd prime `p` and tame primes `l_1, ..., l_d` (each `l_i = 1 mod p`)
//! the linking number `a_j(i)` is the index of `l_i` with respect to a
//! primitive root mod `l_j`, reduced mod `p`. It vanishes exactly when `l_i`
//! is a `p`-th power residue mod `l_j`. Only that zero pattern is canonical:
//! another primitive root rescales each column by a nonzero constant.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::magnus::GroupWord;
use crate::series::{check_odd_prime, Letter, Monomial, TruncatedSeries};

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut b = base as u128 % m128;
    let mut acc: u128 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = (x as u128 * x as u128 % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            out.push(f);
            while n.is_multiple_of(f) {
                n /= f;
            }
        }
        f += if f == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_primitive_root(g: u64, ell: u64) -> bool {
    !g.is_multiple_of(ell)
        && distinct_prime_factors(ell - 1)
            .iter()
            .all(|&q| pow_mod(g, (ell - 1) / q, ell) != 1)
}

/// Smallest primitive root modulo the prime `ell`.
pub fn smallest_primitive_root(ell: u64) -> u64 {
    (1..ell)
        .find(|&g| is_primitive_root(g, ell))
        .expect("a prime has a primitive root")
}

/// A prime `ell = 1 mod p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TamePrime {
    ell: u64,
    p: u32,
}

impl TamePrime {
    pub fn new(ell: u64, p: u64) -> Result<Self> {
        if !is_tame(ell, p)? {
            return Err(Error::usage(format!(
                "{ell} is not tame for p = {p} ({ell} mod {p} = {})",
                ell % p
            )));
        }
        Ok(TamePrime { ell, p: p as u32 })
    }

    pub fn ell(self) -> u64 {
        self.ell
    }

    pub fn p(self) -> u32 {
        self.p
    }
}

/// `ell = 1 mod p`; both must be prime and `p` odd.
pub fn is_tame(ell: u64, p: u64) -> Result<bool> {
    check_odd_prime(p)?;
    if !is_prime(ell) {
        return Err(Error::usage(format!("{ell} is not prime")));
    }
    Ok(ell % p == 1)
}

/// Whether `a` is a `p`-th power residue mod the tame prime `ell`, i.e.
/// `a^((ell-1)/p) = 1 mod ell`.
pub fn pth_power_residue(a: i64, ell: u64, p: u64) -> Result<bool> {
    TamePrime::new(ell, p)?;
    let r = (a as i128).rem_euclid(ell as i128) as u64;
    if r == 0 {
        return Err(Error::usage(format!("{a} is divisible by {ell}")));
    }
    Ok(pow_mod(r, (ell - 1) / p, ell) == 1)
}

/// `ind_g(x) mod p`, computed inside the subgroup of order `p`:
/// `x^((l-1)/p) = (g^((l-1)/p))^k` determines `k = ind_g(x) mod p`.
fn index_mod_p(x: u64, ell: u64, g: u64, p: u64) -> u32 {
    let e = (ell - 1) / p;
    let zeta = pow_mod(g, e, ell);
    let target = pow_mod(x, e, ell);
    let mut acc = 1;
    for k in 0..p {
        if acc == target {
            return k as u32;
        }
        acc = (acc as u128 * zeta as u128 % ell as u128) as u64;
    }
    unreachable!("x^((l-1)/p) lies in the subgroup generated by zeta")
}

/// Linking numbers `a_j(i)` of an ordered tame prime set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkingMatrix {
    p: u32,
    primes: Vec<u64>,
    roots: Vec<u64>,
    /// `entries[i][j] = a_{j+1}(i+1)`; `None` on the diagonal.
    entries: Vec<Vec<Option<u32>>>,
}

impl LinkingMatrix {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn roots(&self) -> &[u64] {
        &self.roots
    }

    pub fn size(&self) -> usize {
        self.primes.len()
    }

    /// `a_j(i)` with 1-based `i`, `j`; `None` when `i == j` or out of range.
    pub fn entry(&self, i: usize, j: usize) -> Option<u32> {
        self.entries
            .get(i.checked_sub(1)?)?
            .get(j.checked_sub(1)?)
            .copied()
            .flatten()
    }

    /// Row `i` (1-based) as `(j, a_j(i))` pairs with nonzero entries.
    pub fn support(&self, i: usize) -> Vec<(usize, u32)> {
        (1..=self.size())
            .filter_map(|j| self.entry(i, j).filter(|&a| a != 0).map(|a| (j, a)))
            .collect()
    }

    /// Zero/nonzero pattern: `pattern()[i][j]` is true when `a_{j+1}(i+1) != 0`.
    pub fn pattern(&self) -> Vec<Vec<bool>> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| matches!(e, Some(a) if *a != 0))
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for LinkingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "linking numbers a_j(i) mod {} (row i, column j):",
            self.p
        )?;
        write!(f, "{:>8}", "")?;
        for ell in &self.primes {
            write!(f, "{ell:>8}")?;
        }
        writeln!(f)?;
        for (i, row) in self.entries.iter().enumerate() {
            write!(f, "{:>8}", self.primes[i])?;
            for e in row {
                match e {
                    Some(a) => write!(f, "{a:>8}")?,
                    None => write!(f, "{:>8}", "-")?,
                }
            }
            writeln!(f)?;
        }
        let roots: Vec<String> = self.roots.iter().map(u64::to_string).collect();
        writeln!(f, "primitive roots: {}", roots.join(","))?;
        write!(
            f,
            "note: entries depend on the primitive roots up to a nonzero scalar per column; the zero pattern does not"
        )
    }
}

fn validate_prime_set(p: u64, primes: &[u64]) -> Result<()> {
    check_odd_prime(p)?;
    if primes.is_empty() {
        return Err(Error::usage("empty prime set"));
    }
    if primes.len() > Letter::MAX as usize {
        return Err(Error::usage("too many primes"));
    }
    for (k, &ell) in primes.iter().enumerate() {
        TamePrime::new(ell, p)?;
        if primes[..k].contains(&ell) {
            return Err(Error::usage(format!("prime {ell} listed twice")));
        }
    }
    Ok(())
}

/// Linking matrix with respect to the smallest primitive root mod each prime.
pub fn linking_matrix(p: u64, primes: &[u64]) -> Result<LinkingMatrix> {
    validate_prime_set(p, primes)?;
    let roots: Vec<u64> = primes.iter().map(|&l| smallest_primitive_root(l)).collect();
    linking_matrix_with_roots(p, primes, &roots)
}

/// Linking matrix with caller-chosen primitive roots (one per prime).
pub fn linking_matrix_with_roots(p: u64, primes: &[u64], roots: &[u64]) -> Result<LinkingMatrix> {
    validate_prime_set(p, primes)?;
    if roots.len() != primes.len() {
        return Err(Error::usage("one primitive root per prime is required"));
    }
    for (&g, &ell) in roots.iter().zip(primes) {
        if !is_primitive_root(g, ell) {
            return Err(Error::usage(format!(
                "{g} is not a primitive root mod {ell}"
            )));
        }
    }
    let entries = primes
        .iter()
        .enumerate()
        .map(|(i, &li)| {
            primes
                .iter()
                .enumerate()
                .map(|(j, &lj)| (i != j).then(|| index_mod_p(li % lj, lj, roots[j], p)))
                .collect()
        })
        .collect();
    Ok(LinkingMatrix {
        p: p as u32,
        primes: primes.to_vec(),
        roots: roots.to_vec(),
        entries,
    })
}

/// Degree-two initial form of the Koch relation of generator `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationForm {
    pub index: usize,
    /// `sum_{j != i} a_j(i) (X_i X_j - X_j X_i)`, truncated above degree 2.
    pub form: TruncatedSeries,
    /// The row of `i` is zero: the relation lies deeper in the Zassenhaus
    /// filtration and its initial form is not determined here.
    pub zero_row: bool,
}

pub fn relation_initial_form(i: usize, matrix: &LinkingMatrix) -> Result<RelationForm> {
    let d = matrix.size();
    if i == 0 || i > d {
        return Err(Error::usage(format!("relation index {i} outside [1, {d}]")));
    }
    let xi = i as Letter;
    let mut terms = Vec::new();
    for (j, a) in matrix.support(i) {
        let xj = j as Letter;
        terms.push((Monomial::new([xi, xj])?, a as i64));
        terms.push((Monomial::new([xj, xi])?, -(a as i64)));
    }
    let form = TruncatedSeries::from_terms(d, matrix.p as u64, 3, terms)?;
    Ok(RelationForm {
        index: i,
        zero_row: form.is_zero(),
        form,
    })
}

/// The literal word `x_i^(l_i - 1) * prod_{j != i} [x_i, x_j]^(a_j(i))`.
pub fn koch_word(i: usize, matrix: &LinkingMatrix) -> Result<GroupWord> {
    let d = matrix.size();
    if i == 0 || i > d {
        return Err(Error::usage(format!("relation index {i} outside [1, {d}]")));
    }
    let xi = GroupWord::generator(i as Letter);
    let mut factors = vec![GroupWord::power(
        xi.clone(),
        (matrix.primes[i - 1] - 1).into(),
    )];
    for (j, a) in matrix.support(i) {
        let c = GroupWord::commutator(xi.clone(), GroupWord::generator(j as Letter));
        factors.push(if a == 1 {
            c
        } else {
            GroupWord::power(c, a.into())
        });
    }
    Ok(if factors.len() == 1 {
        factors.pop().expect("one factor")
    } else {
        GroupWord::product(factors)
    })
}

/// Relation initial forms and their highest terms for a tame prime set.
#[derive(Clone, Debug)]
pub struct PresentationSketch {
    pub p: u32,
    pub d: usize,
    pub matrix: LinkingMatrix,
    pub relations: Vec<RelationForm>,
    /// Highest term per relation; `None` for zero rows.
    pub hats: Vec<Option<Monomial>>,
}

impl PresentationSketch {
    /// Indices (1-based) of relations with zero rows.
    pub fn zero_rows(&self) -> Vec<usize> {
        self.relations
            .iter()
            .filter(|r| r.zero_row)
            .map(|r| r.index)
            .collect()
    }

    /// Unordered index pairs `{i, j}` of the hats, sorted within each pair.
    pub fn unordered_pairs(&self) -> Vec<Option<(Letter, Letter)>> {
        self.hats
            .iter()
            .map(|h| {
                h.as_ref().map(|m| {
                    let l = m.letters();
                    (l[0].min(l[1]), l[0].max(l[1]))
                })
            })
            .collect()
    }

    /// All hats, or the first zero row as an error.
    pub fn complete_hats(&self) -> Result<Vec<Monomial>> {
        match self.zero_rows().first() {
            Some(&i) => Err(Error::Inconclusive {
                truncation: 3,
                message: format!(
                    "relation {i} has a zero linking row; its initial form has degree > 2 and is not determined"
                ),
            }),
            None => Ok(self.hats.iter().flatten().cloned().collect()),
        }
    }
}

pub fn presentation_hats(p: u64, primes: &[u64]) -> Result<PresentationSketch> {
    sketch_from_matrix(linking_matrix(p, primes)?)
}

pub fn sketch_from_matrix(matrix: LinkingMatrix) -> Result<PresentationSketch> {
    let d = matrix.size();
    let relations = (1..=d)
        .map(|i| relation_initial_form(i, &matrix))
        .collect::<Result<Vec<_>>>()?;
    let hats = relations
        .iter()
        .map(|r| r.form.highest_term().ok())
        .collect();
    Ok(PresentationSketch {
        p: matrix.p,
        d,
        matrix,
        relations,
        hats,
    })
}

/// Inputs of Shafarevich's rank formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct RankInputs {
    pub size_s: u64,
    pub r1: u64,
    pub r2: u64,
    pub size_t: u64,
    /// 1 when `K` contains the `p`-th roots of unity.
    pub delta: u8,
    pub dim_v: u64,
}

/// `|S| - (r1 + r2) - 1 - |T| + delta + dim V`, returned as is (may be negative).
pub fn shafarevich_rank(inp: RankInputs) -> Result<i64> {
    if inp.delta > 1 {
        return Err(Error::usage("delta must be 0 or 1"));
    }
    Ok(
        inp.size_s as i64 - (inp.r1 + inp.r2) as i64 - 1 - inp.size_t as i64
            + inp.delta as i64
            + inp.dim_v as i64,
    )
}

/// `3 + 2 sqrt(2 + r1 + r2 + |T|)`.
pub fn alpha_bound(r1: u64, r2: u64, size_t: u64) -> f64 {
    3.0 + 2.0 * ((2 + r1 + r2 + size_t) as f64).sqrt()
}

/// Brute-force check of `d + r1 + r2 + |T| - 1 < (d - c)(c - 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    pub d: u64,
    /// `d > alpha_bound(r1, r2, |T|)`.
    pub hypothesis_met: bool,
    /// Values of `c` in `[2, d - 1]` where the inequality fails.
    pub failures: Vec<u64>,
    /// The endpoint `c = d`, where the right side is 0, always fails; it is
    /// reported separately and excluded from `failures`.
    pub endpoint_fails: bool,
    /// Values of `c` in `[2, d - 1]` where the inequality holds.
    pub window: Vec<u64>,
}

impl LemmaReport {
    /// The conclusion holds for every `c` in `[2, d - 1]`.
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn lemma_easy_check(d: u64, r1: u64, r2: u64, size_t: u64) -> Result<LemmaReport> {
    if d < 4 {
        return Err(Error::usage("the lemma check needs d >= 4"));
    }
    let lhs = (d + r1 + r2 + size_t) as i128 - 1;
    let holds = |c: u64| lhs < (d as i128 - c as i128) * (c as i128 - 1);
    let (window, failures) = (2..d).partition(|&c| holds(c));
    Ok(LemmaReport {
        d,
        hypothesis_met: (d as f64) > alpha_bound(r1, r2, size_t),
        failures,
        endpoint_fails: !holds(d),
        window,
    })
}

/// Which residue symbol a [`Constraint`] tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// The candidate `q` is (not) a `p`-th power mod the existing prime.
    NewModExisting,
    /// The existing prime is (not) a `p`-th power mod the candidate `q`.
    ExistingModNew,
}

/// `residue:<l>:<yes|no>:<new-mod-old|old-mod-new>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub ell: u64,
    pub direction: Direction,
    pub want_residue: bool,
}

impl FromStr for Constraint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::parse(0, format!("malformed constraint `{s}`; expected residue:<prime>:<yes|no>:<new-mod-old|old-mod-new>"))
        };
        let parts: Vec<&str> = s.trim().split(':').collect();
        let [kind, ell, want, dir] = parts.as_slice() else {
            return Err(bad());
        };
        if *kind != "residue" {
            return Err(bad());
        }
        let ell = ell.parse::<u64>().map_err(|_| bad())?;
        let want_residue = match *want {
            "yes" => true,
            "no" => false,
            _ => return Err(bad()),
        };
        let direction = match *dir {
            "new-mod-old" => Direction::NewModExisting,
            "old-mod-new" => Direction::ExistingModNew,
            _ => return Err(bad()),
        };
        Ok(Constraint {
            ell,
            direction,
            want_residue,
        })
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "residue:{}:{}:{}",
            self.ell,
            if self.want_residue { "yes" } else { "no" },
            match self.direction {
                Direction::NewModExisting => "new-mod-old",
                Direction::ExistingModNew => "old-mod-new",
            }
        )
    }
}

/// Comma-separated prime list; order is kept.
pub fn parse_prime_list(s: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in s.split(',') {
        let t = part.trim();
        let v = t
            .parse::<u64>()
            .map_err(|_| Error::parse(offset, format!("bad prime `{t}`")))?;
        out.push(v);
        offset += part.len() + 1;
    }
    Ok(out)
}

fn satisfies(q: u64, p: u64, constraints: &[Constraint]) -> bool {
    constraints.iter().all(|c| {
        if c.ell == q {
            return false;
        }
        let is_residue = match c.direction {
            Direction::NewModExisting => pow_mod(q, (c.ell - 1) / p, c.ell) == 1,
            Direction::ExistingModNew => pow_mod(c.ell, (q - 1) / p, q) == 1,
        };
        is_residue == c.want_residue
    })
}

/// Smallest prime `q <= bound`, `q = 1 mod p`, satisfying every constraint.
///
/// The scan may be split over disjoint ranges; the answer is the minimum over
/// the pieces and therefore independent of the split.
pub fn find_prime(p: u64, constraints: &[Constraint], bound: u64) -> Result<Option<u64>> {
    find_prime_in(p, constraints, 2, bound)
}

/// [`find_prime`] restricted to `[lo, hi]`.
pub fn find_prime_in(p: u64, constraints: &[Constraint], lo: u64, hi: u64) -> Result<Option<u64>> {
    check_odd_prime(p)?;
    for c in constraints {
        TamePrime::new(c.ell, p)?;
    }
    // first q >= lo with q = 1 mod p
    let start = lo.max(2);
    let first = start + (p + 1 - start % p) % p;
    let mut q = first;
    while q <= hi {
        if is_prime(q) && satisfies(q, p, constraints) {
            return Ok(Some(q));
        }
        q = match q.checked_add(p) {
            Some(v) => v,
            None => break,
        };
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIVE_PRIMES: [u64; 5] = [31, 19, 13, 337, 7];

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            small,
            [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
        assert!(is_prime(18_446_744_073_709_551_557));
    }

    #[test]
    fn tameness_examples() {
        assert!(is_tame(7, 3).unwrap());
        assert!(!is_tame(11, 3).unwrap());
        assert!(is_tame(337, 3).unwrap());
        assert!(is_tame(15, 3).is_err());
        assert!(is_tame(7, 4).is_err());
    }

    #[test]
    fn residue_examples() {
        assert_eq!(pow_mod(7, 4, 13), 9);
        assert!(!pth_power_residue(7, 13, 3).unwrap());
        assert!(pth_power_residue(1, 13, 3).unwrap());
        assert!(pth_power_residue(8, 13, 3).unwrap());
        assert!(pth_power_residue(26, 13, 3).is_err());
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(smallest_primitive_root(7), 3);
        assert_eq!(smallest_primitive_root(13), 2);
        assert_eq!(smallest_primitive_root(31), 3);
        assert!(!is_primitive_root(4, 13));
    }

    #[test]
    fn linking_small_pair() {
        let m = linking_matrix(3, &[7, 13]).unwrap();
        assert!(m.entry(1, 2).unwrap() != 0);
        assert_eq!(m.entry(1, 1), None);
        let single = linking_matrix(3, &[7]).unwrap();
        assert_eq!(single.size(), 1);
        assert_eq!(single.entry(1, 1), None);
    }

    #[test]
    fn linking_rejects_bad_sets() {
        assert!(linking_matrix(3, &[7, 11]).is_err());
        assert!(linking_matrix(3, &[7, 7]).is_err());
        assert!(linking_matrix(3, &[]).is_err());
    }

    #[test]
    fn zero_pattern_is_residue_pattern() {
        let m = linking_matrix(3, &FIVE_PRIMES).unwrap();
        for (i, &li) in FIVE_PRIMES.iter().enumerate() {
            for (j, &lj) in FIVE_PRIMES.iter().enumerate() {
                if i != j {
                    let zero = m.entry(i + 1, j + 1) == Some(0);
                    assert_eq!(zero, pth_power_residue(li as i64, lj, 3).unwrap());
                }
            }
        }
    }

    #[test]
    fn initial_form_substitution() {
        // one row of the five-prime set, checked by hand
        let m = linking_matrix(3, &FIVE_PRIMES).unwrap();
        let r = relation_initial_form(4, &m).unwrap();
        // 337 is a non-cube only mod 19.
        let a = m.entry(4, 2).unwrap() as i64;
        let expected = TruncatedSeries::from_terms(
            5,
            3,
            3,
            [
                (Monomial::new([4, 2]).unwrap(), a),
                (Monomial::new([2, 4]).unwrap(), -a),
            ],
        )
        .unwrap();
        assert_eq!(r.form, expected);
        assert_eq!(
            r.form.highest_term().unwrap(),
            Monomial::new([4, 2]).unwrap()
        );
    }

    #[test]
    fn initial_form_coefficients_mod_p() {
        // a single row with support {3}, coefficient 2, at i = 1
        let m = LinkingMatrix {
            p: 3,
            primes: vec![7, 13, 19],
            roots: vec![3, 2, 2],
            entries: vec![
                vec![None, Some(0), Some(2)],
                vec![Some(0), None, Some(0)],
                vec![Some(0), Some(0), None],
            ],
        };
        let r = relation_initial_form(1, &m).unwrap();
        assert_eq!(r.form.to_string(), "1*X3.X1 + 2*X1.X3 + O(>=3)");
        let zero = relation_initial_form(2, &m).unwrap();
        assert!(zero.zero_row && zero.form.is_zero());
        let sketch = sketch_from_matrix(m).unwrap();
        assert_eq!(sketch.zero_rows(), [2, 3]);
        assert!(matches!(
            sketch.complete_hats(),
            Err(Error::Inconclusive { .. })
        ));
    }

    #[test]
    fn rank_formula() {
        let base = RankInputs {
            size_s: 4,
            r1: 1,
            ..Default::default()
        };
        assert_eq!(shafarevich_rank(base).unwrap(), 2);
        let s = RankInputs {
            size_s: 9,
            r2: 1,
            delta: 1,
            ..Default::default()
        };
        assert_eq!(shafarevich_rank(s).unwrap(), 8);
        assert_eq!(shafarevich_rank(RankInputs::default()).unwrap(), -1);
        assert!(shafarevich_rank(RankInputs {
            delta: 2,
            ..Default::default()
        })
        .is_err());
        // coordinate bumps
        let v0 = shafarevich_rank(base).unwrap();
        let bump = |f: fn(&mut RankInputs)| {
            let mut x = base;
            f(&mut x);
            shafarevich_rank(x).unwrap() - v0
        };
        assert_eq!(bump(|x| x.size_s += 1), 1);
        assert_eq!(bump(|x| x.r1 += 1), -1);
        assert_eq!(bump(|x| x.r2 += 1), -1);
        assert_eq!(bump(|x| x.size_t += 1), -1);
        assert_eq!(bump(|x| x.delta += 1), 1);
        assert_eq!(bump(|x| x.dim_v += 1), 1);
    }

    #[test]
    fn alpha_values() {
        assert!((alpha_bound(1, 0, 0) - 6.4641).abs() < 1e-4);
        assert!((alpha_bound(0, 0, 0) - (3.0 + 2.0 * 2f64.sqrt())).abs() < 1e-12);
        assert_eq!(alpha_bound(1, 2, 4), 9.0);
    }

    #[test]
    fn lemma_reports() {
        let r = lemma_easy_check(5, 1, 0, 0).unwrap();
        assert!(!r.hypothesis_met);
        let r = lemma_easy_check(7, 1, 0, 0).unwrap();
        assert!(r.hypothesis_met);
        assert!(r.endpoint_fails);
        // brute force: lhs = 7, (7-c)(c-1) for c = 2..6 is 5, 8, 9, 8, 5
        assert_eq!(r.window, [3, 4, 5]);
        assert_eq!(r.failures, [2, 6]);
        assert!(lemma_easy_check(3, 0, 0, 0).is_err());
    }

    #[test]
    fn constraint_parsing() {
        let c: Constraint = "residue:7:no:old-mod-new".parse().unwrap();
        assert_eq!(
            c,
            Constraint {
                ell: 7,
                direction: Direction::ExistingModNew,
                want_residue: false
            }
        );
        assert_eq!(c.to_string(), "residue:7:no:old-mod-new");
        for bad in [
            "",
            "residue:7:no",
            "residue:x:no:old-mod-new",
            "res:7:no:old-mod-new",
            "residue:7:maybe:old-mod-new",
        ] {
            assert!(bad.parse::<Constraint>().is_err(), "{bad}");
        }
        assert_eq!(parse_prime_list("31, 19,13").unwrap(), [31, 19, 13]);
        assert!(parse_prime_list("31,,13").is_err());
    }

    #[test]
    fn prime_search() {
        assert_eq!(find_prime(3, &[], 10).unwrap(), Some(7));
        let c: Constraint = "residue:7:no:old-mod-new".parse().unwrap();
        // independent scan
        let expected = (8..1000u64)
            .find(|&q| q % 3 == 1 && (2..q).all(|k| q % k != 0) && pow_mod(7, (q - 1) / 3, q) != 1);
        assert_eq!(find_prime(3, &[c], 1000).unwrap(), expected);
        assert_eq!(expected, Some(13));
        let yes: Constraint = "residue:7:yes:old-mod-new".parse().unwrap();
        assert_eq!(find_prime(3, &[c, yes], 100).unwrap(), None);
        assert!(find_prime(3, &["residue:11:no:old-mod-new".parse().unwrap()], 100).is_err());
    }

    #[test]
    fn prime_search_partition_independent() {
        let c: Constraint = "residue:13:no:new-mod-old".parse().unwrap();
        let whole = find_prime(3, &[c], 5000).unwrap();
        let pieces = [(2, 1000), (1001, 2500), (2501, 5000)];
        let split = pieces
            .iter()
            .filter_map(|&(lo, hi)| find_prime_in(3, &[c], lo, hi).unwrap())
            .min();
        assert_eq!(whole, split);
    }
}
