//! Exact integer power series and the Poincare series of mild quotients.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// `c_0 + c_1 t + ... + c_N t^N (mod t^(N+1))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSeries {
    coeffs: Vec<BigInt>,
}

impl IntSeries {
    /// At least one coefficient is required.
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::usage("a series needs at least one coefficient"));
        }
        Ok(IntSeries { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `1 + 0 t + ... + 0 t^n`.
    pub fn one(n: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[0] = BigInt::one();
        IntSeries { coeffs }
    }

    /// Highest stored degree `N`.
    pub fn precision(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coefficient(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// Product truncated to the lower of the two precisions.
    pub fn mul(&self, other: &IntSeries) -> IntSeries {
        let n = self.precision().min(other.precision());
        let coeffs = (0..=n)
            .map(|k| {
                (0..=k)
                    .map(|i| &self.coeffs[i] * &other.coeffs[k - i])
                    .sum()
            })
            .collect();
        IntSeries { coeffs }
    }
}

impl fmt::Display for IntSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, " (mod t^{})", self.coeffs.len())
    }
}

/// Inverse of a series with constant term 1, by the convolution recurrence
/// `u_k = -sum_{i=1..k} s_i u_{k-i}`.
pub fn invert_unit_series(s: &IntSeries) -> Result<IntSeries> {
    if !s.coeffs[0].is_one() {
        return Err(Error::domain(format!(
            "constant term is {}, not 1",
            s.coeffs[0]
        )));
    }
    let n = s.precision();
    let mut u: Vec<BigInt> = Vec::with_capacity(n + 1);
    u.push(BigInt::one());
    for k in 1..=n {
        let acc: BigInt = (1..=k).map(|i| &s.coeffs[i] * &u[k - i]).sum();
        u.push(-acc);
    }
    Ok(IntSeries { coeffs: u })
}

/// Relation degrees: a finite multiset plus, optionally, one relation in
/// every degree `>= tail_from`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DegreeSpec {
    finite: Vec<usize>,
    tail_from: Option<usize>,
}

impl DegreeSpec {
    pub fn new(finite: Vec<usize>, tail_from: Option<usize>) -> Result<Self> {
        if let Some(&bad) = finite.iter().find(|&&n| n < 2) {
            return Err(Error::usage(format!("relation degree {bad} is below 2")));
        }
        if let Some(m) = tail_from.filter(|&m| m < 2) {
            return Err(Error::usage(format!("tail start {m} is below 2")));
        }
        Ok(DegreeSpec { finite, tail_from })
    }

    pub fn finite(&self) -> &[usize] {
        &self.finite
    }

    pub fn tail_from(&self) -> Option<usize> {
        self.tail_from
    }

    /// `1 - d t + sum_i t^{n_i} + sum_{k >= m} t^k` through degree `n`.
    pub fn denominator(&self, d: usize, n: usize) -> IntSeries {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[0] = BigInt::one();
        if n >= 1 {
            coeffs[1] -= d;
        }
        for &k in &self.finite {
            if k <= n {
                coeffs[k] += 1;
            }
        }
        if let Some(m) = self.tail_from {
            for c in coeffs.iter_mut().skip(m) {
                *c += 1;
            }
        }
        IntSeries { coeffs }
    }
}

impl FromStr for DegreeSpec {
    type Err = Error;

    /// Comma-separated degrees, optionally ending in `m+` for the tail:
    /// `2,2,2,2,2,3+`. The empty string is the empty spec.
    fn from_str(s: &str) -> Result<Self> {
        let mut finite = Vec::new();
        let mut tail = None;
        let mut offset = 0;
        for part in s.split(',') {
            let t = part.trim();
            if !t.is_empty() {
                if tail.is_some() {
                    return Err(Error::parse(offset, "the tail `m+` must come last"));
                }
                let bad = || Error::parse(offset, format!("bad degree `{t}`"));
                match t.strip_suffix('+') {
                    Some(m) => tail = Some(m.trim().parse().map_err(|_| bad())?),
                    None => finite.push(t.parse().map_err(|_| bad())?),
                }
            } else if s.trim().contains(',') {
                return Err(Error::parse(offset, "empty degree"));
            }
            offset += part.len() + 1;
        }
        DegreeSpec::new(finite, tail)
    }
}

/// Coefficients through `t^n` of `(1 - d t + sum_i t^{n_i} + sum_{k>=m} t^k)^{-1}`.
pub fn mild_poincare(d: usize, spec: &DegreeSpec, n: usize) -> IntSeries {
    invert_unit_series(&spec.denominator(d, n)).expect("denominator has constant term 1")
}

/// Coefficients through `t^n` of `(1 - d t + r t^2 + t^3 / (1 - t))^{-1}`.
///
/// Computed as `(1 - t) / Q` with
/// `Q = 1 - (d+1) t + (d+r) t^2 + (1-r) t^3`, so the infinite tail never
/// has to be materialized.
pub fn theorem_main_series(d: usize, r: usize, n: usize) -> Result<IntSeries> {
    if d == 0 {
        return Err(Error::usage("the generator count must be at least 1"));
    }
    let q1 = BigInt::from(d + 1);
    let q2 = BigInt::from(d + r);
    let q3 = BigInt::from(1) - BigInt::from(r);
    let mut c: Vec<BigInt> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        // Q * P = 1 - t
        let mut v = match k {
            0 => BigInt::one(),
            1 => -BigInt::one(),
            _ => BigInt::zero(),
        };
        if k >= 1 {
            v += &q1 * &c[k - 1];
        }
        if k >= 2 {
            v -= &q2 * &c[k - 2];
        }
        if k >= 3 {
            v -= &q3 * &c[k - 3];
        }
        c.push(v);
    }
    Ok(IntSeries { coeffs: c })
}

/// Index of the first negative coefficient.
pub fn check_nonnegative(s: &IntSeries) -> Option<usize> {
    s.coeffs.iter().position(|c| c.is_negative())
}
