//! Closed-form counts for the tree refinement and the summation identities
//! tying them together.
//!
//! `tree_count_*` functions compute the number of rooted labeled trees on
//! `{0,..,n}` whose maximal decreasing subtree has `k+1` vertices, by four
//! independent routes; `function_count_*` compute the equinumerous family of
//! maps `[n] -> [n]` whose image contains `{1,..,k}`. All arithmetic is
//! arbitrary precision and exact.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::trees;

/// `base^exp` with the convention `0^0 = 1`.
pub fn big_pow(base: &BigInt, exp: usize) -> BigInt {
    if exp == 0 {
        BigInt::one()
    } else {
        Pow::pow(base, exp)
    }
}

/// `n!` as an exact integer.
pub fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// Binomial coefficient; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 1..=k {
        acc = acc * (n - k + j) / j;
    }
    acc
}

/// Stirling number of the second kind: partitions of an `m`-set into `k`
/// nonempty blocks, via `S(m,k) = k*S(m-1,k) + S(m-1,k-1)`.
pub fn stirling2(m: usize, k: usize) -> BigInt {
    if k > m {
        return BigInt::zero();
    }
    // row-by-row table; row i holds S(i, 0..=k)
    let mut row = vec![BigInt::zero(); k + 1];
    row[0] = BigInt::one();
    for i in 1..=m {
        let mut prev_diag = row[0].clone();
        row[0] = BigInt::zero();
        for j in 1..=k.min(i) {
            let current = &row[j] * j + &prev_diag;
            prev_diag = std::mem::replace(&mut row[j], current);
        }
    }
    row[k].clone()
}

/// Number of rooted forests on a `vertices`-element set with a designated
/// `roots`-element root set: `roots * vertices^(vertices-roots-1)`, with the
/// degenerate cases `1` when `vertices == roots` and `0` when
/// `roots == 0 < vertices`.
pub fn forest_count(vertices: usize, roots: usize) -> Result<BigInt> {
    if roots > vertices {
        return Err(Error::DomainError(format!(
            "forest root set of size {roots} exceeds vertex set of size {vertices}"
        )));
    }
    if vertices == roots {
        return Ok(BigInt::one());
    }
    if roots == 0 {
        return Ok(BigInt::zero());
    }
    Ok(BigInt::from(roots) * big_pow(&BigInt::from(vertices), vertices - roots - 1))
}

fn check_k_le_n(n: usize, k: usize) -> Result<()> {
    if k > n {
        return Err(Error::DomainError(format!("k={k} exceeds n={n}")));
    }
    Ok(())
}

/// Tree count via the Stirling-number expansion over the size of the
/// decreasing subtree together with its frontier of children.
pub fn tree_count_stirling(n: usize, k: usize) -> Result<BigInt> {
    check_k_le_n(n, k)?;
    let k_fact = factorial(k);
    let mut total = BigInt::zero();
    for m in k..=n {
        total += binomial(n + 1, m + 1)
            * stirling2(m + 1, k + 1)
            * &k_fact
            * forest_count(n - k, m - k)?;
    }
    Ok(total)
}

/// Count of maps `[n] -> [n]` covering `{1,..,k}`, by splitting off the
/// preimage of `{1,..,k}` as a surjection.
pub fn function_count_stirling(n: usize, k: usize) -> Result<BigInt> {
    check_k_le_n(n, k)?;
    let k_fact = factorial(k);
    let rest = BigInt::from(n - k);
    let mut total = BigInt::zero();
    for m in k..=n {
        total += binomial(n, m) * stirling2(m, k) * &k_fact * big_pow(&rest, n - m);
    }
    Ok(total)
}

/// The same count by inclusion-exclusion over which of `1,..,k` are missing
/// from the image.
pub fn function_count_inclusion_exclusion(n: usize, k: usize) -> Result<BigInt> {
    check_k_le_n(n, k)?;
    let mut total = BigInt::zero();
    for i in 0..=k {
        let term = binomial(k, i) * big_pow(&BigInt::from(n - i), n);
        if i % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total)
}

/// Iterates weak compositions of `total` into `parts` parts in
/// colexicographic order, starting from `(total, 0, .., 0)`.
struct Compositions {
    parts: Vec<usize>,
    started: bool,
}

impl Compositions {
    fn new(total: usize, parts: usize) -> Self {
        assert!(parts >= 1);
        let mut v = vec![0usize; parts];
        v[0] = total;
        Compositions {
            parts: v,
            started: false,
        }
    }

    fn advance(&mut self) -> Option<&[usize]> {
        if !self.started {
            self.started = true;
            return Some(&self.parts);
        }
        // move one unit from the prefix into the first position that can grow
        let mut prefix = 0usize;
        for j in 1..self.parts.len() {
            prefix += self.parts[j - 1];
            if prefix > 0 {
                self.parts[j] += 1;
                self.parts[0] = prefix - 1;
                for p in &mut self.parts[1..j] {
                    *p = 0;
                }
                return Some(&self.parts);
            }
        }
        None
    }
}

/// Tree count via the decomposition into `k+1` local minimum trees: a sum of
/// multinomials over weak compositions of `n-k`, divided by `k+1` at the end.
/// The division is asserted to be exact.
pub fn tree_count_decomposition(n: usize, k: usize) -> Result<BigInt> {
    check_k_le_n(n, k)?;
    let mut factorials = Vec::with_capacity(n + 2);
    factorials.push(BigInt::one());
    for i in 1..=n + 1 {
        factorials.push(&factorials[i - 1] * i);
    }
    let self_powers: Vec<BigInt> = (0..=n - k)
        .map(|i| big_pow(&BigInt::from(i), i))
        .collect();

    let mut total = BigInt::zero();
    let mut compositions = Compositions::new(n - k, k + 1);
    while let Some(parts) = compositions.advance() {
        let mut term = factorials[n + 1].clone();
        for &p in parts {
            term /= &factorials[p + 1];
        }
        for &p in parts {
            term *= &self_powers[p];
        }
        total += term;
    }
    let divisor = BigInt::from(k + 1);
    let quotient = &total / &divisor;
    assert!(
        (total % divisor).is_zero(),
        "decomposition sum for n={n}, k={k} is not divisible by k+1"
    );
    Ok(quotient)
}

/// Tree count as a signed double sum of binomials against the power sequence
/// `(n+1+l)^n`, the entrywise form of the inverse-matrix identity.
pub fn tree_count_inverse_matrix(n: usize, k: usize) -> Result<BigInt> {
    check_k_le_n(n, k)?;
    let powers: Vec<BigInt> = (0..=n)
        .map(|l| big_pow(&BigInt::from(n + 1 + l), n))
        .collect();
    let mut total = BigInt::zero();
    for m in k..=n {
        let row_binom = binomial(m, k);
        for l in 0..=m {
            let term = &row_binom * binomial(m, l) * &powers[l];
            if (k + l) % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
    }
    Ok(total)
}

/// How a triangle row was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Enumerate,
    Stirling,
    InclusionExclusion,
    Decomposition,
    InverseMatrix,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Enumerate,
        Method::Stirling,
        Method::InclusionExclusion,
        Method::Decomposition,
        Method::InverseMatrix,
    ];

    /// The non-enumerative methods, usable at any `n`.
    pub const CLOSED_FORM: [Method; 4] = [
        Method::Stirling,
        Method::InclusionExclusion,
        Method::Decomposition,
        Method::InverseMatrix,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Enumerate => "enumerate",
            Method::Stirling => "stirling",
            Method::InclusionExclusion => "inclusion_exclusion",
            Method::Decomposition => "decomposition",
            Method::InverseMatrix => "inverse_matrix",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "enumerate" => Ok(Method::Enumerate),
            "stirling" => Ok(Method::Stirling),
            "inclusion_exclusion" | "inclusion-exclusion" => Ok(Method::InclusionExclusion),
            "decomposition" => Ok(Method::Decomposition),
            "inverse_matrix" | "inverse-matrix" => Ok(Method::InverseMatrix),
            other => Err(format!("unknown method `{other}`")),
        }
    }
}

/// One row of the refinement triangle: the counts for `k = 0..=n`, tagged
/// with the method that produced them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleRow {
    n: usize,
    values: Vec<BigInt>,
    method: Method,
}

impl TriangleRow {
    pub fn new(n: usize, values: Vec<BigInt>, method: Method) -> Self {
        assert_eq!(values.len(), n + 1, "row length must be n+1");
        assert!(
            values.iter().all(|v| !v.is_negative()),
            "row entries must be nonnegative"
        );
        TriangleRow { n, values, method }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "method": self.method.name(),
            "values": self.values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        })
    }

    /// CSV lines `n,k,value,method`, one per entry, no header.
    pub fn csv_lines(&self) -> Vec<String> {
        self.values
            .iter()
            .enumerate()
            .map(|(k, v)| format!("{},{},{},{}", self.n, k, v, self.method.name()))
            .collect()
    }
}

/// Computes a full triangle row by the requested method. `enum_cap` bounds
/// the exhaustive method only.
pub fn triangle_row(n: usize, method: Method, enum_cap: usize) -> Result<TriangleRow> {
    match method {
        Method::Enumerate => trees::brute_force_triangle(n, enum_cap),
        Method::Stirling => {
            let values = (0..=n)
                .map(|k| tree_count_stirling(n, k))
                .collect::<Result<_>>()?;
            Ok(TriangleRow::new(n, values, method))
        }
        Method::InclusionExclusion => {
            let values = (0..=n)
                .map(|k| function_count_inclusion_exclusion(n, k))
                .collect::<Result<_>>()?;
            Ok(TriangleRow::new(n, values, method))
        }
        Method::Decomposition => {
            let values = (0..=n)
                .map(|k| tree_count_decomposition(n, k))
                .collect::<Result<_>>()?;
            Ok(TriangleRow::new(n, values, method))
        }
        Method::InverseMatrix => {
            let values = (0..=n)
                .map(|k| tree_count_inverse_matrix(n, k))
                .collect::<Result<_>>()?;
            Ok(TriangleRow::new(n, values, method))
        }
    }
}

/// Outcome of one summation-identity check, with both sides kept for
/// reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub identity: &'static str,
    pub n: usize,
    pub alpha: Option<usize>,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

impl IdentityCheck {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "identity": self.identity,
            "n": self.n,
            "alpha": self.alpha,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "pass": self.pass,
        })
    }
}

fn stirling_row_values(n: usize) -> Vec<BigInt> {
    (0..=n)
        .map(|k| tree_count_stirling(n, k).expect("k <= n"))
        .collect()
}

/// Row sum: the counts over all k add up to `(n+1)^n`.
pub fn check_row_sum(n: usize) -> IdentityCheck {
    let lhs: BigInt = stirling_row_values(n).into_iter().sum();
    let rhs = big_pow(&BigInt::from(n + 1), n);
    IdentityCheck {
        identity: "row_sum",
        n,
        alpha: None,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        pass: lhs == rhs,
    }
}

/// Weighted sum: `sum (k+1)*count = (n+2)^n`.
pub fn check_weighted_sum(n: usize) -> IdentityCheck {
    let lhs: BigInt = stirling_row_values(n)
        .into_iter()
        .enumerate()
        .map(|(k, v)| v * (k + 1))
        .sum();
    let rhs = big_pow(&BigInt::from(n + 2), n);
    IdentityCheck {
        identity: "weighted_sum",
        n,
        alpha: None,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        pass: lhs == rhs,
    }
}

/// Binomial-weighted sum: `sum C(k+alpha, alpha)*count = (n+1+alpha)^n`.
pub fn check_alpha_sum(n: usize, alpha: usize) -> IdentityCheck {
    let lhs: BigInt = stirling_row_values(n)
        .into_iter()
        .enumerate()
        .map(|(k, v)| v * binomial(k + alpha, alpha))
        .sum();
    let rhs = big_pow(&BigInt::from(n + 1 + alpha), n);
    IdentityCheck {
        identity: "alpha_sum",
        n,
        alpha: Some(alpha),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        pass: lhs == rhs,
    }
}

/// Harmonic-weighted sum in exact rationals: `sum_{k>=1} count/k = n^n`.
/// Requires `n >= 1`.
pub fn check_harmonic_sum(n: usize) -> Result<IdentityCheck> {
    if n == 0 {
        return Err(Error::DomainError(
            "harmonic identity requires n >= 1".into(),
        ));
    }
    let mut lhs = BigRational::zero();
    for (k, v) in stirling_row_values(n).into_iter().enumerate().skip(1) {
        lhs += BigRational::new(v, BigInt::from(k));
    }
    let rhs = BigRational::from_integer(big_pow(&BigInt::from(n), n));
    Ok(IdentityCheck {
        identity: "harmonic_sum",
        n,
        alpha: None,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        pass: lhs == rhs,
    })
}
