//! Truncated bivariate generating-function arithmetic over exact rationals.
//!
//! A [`TruncatedSeries`] keeps, for each power of `x` up to a fixed order,
//! a polynomial in the marker variable `t`. Everything is exact; there is no
//! tolerance anywhere in this module. The three generating-function
//! identities verified here equate the triangle-weighted series with
//! `exp`, `1/(1-..)` and `-ln(1-..)` of `t` times the local-minimum-tree
//! series.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::json;

use crate::counting::{self, big_pow, factorial, Method, TriangleRow};
use crate::error::{Error, Result};

/// A polynomial in `t` with exact rational coefficients; index = degree.
/// Trailing zero coefficients are trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TPoly {
    coeffs: Vec<BigRational>,
}

impl TPoly {
    pub fn zero() -> Self {
        TPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        TPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = TPoly { coeffs: vec![c] };
        p.trim();
        p
    }

    /// `c * t^degree`.
    pub fn monomial(degree: usize, c: BigRational) -> Self {
        let mut coeffs = vec![BigRational::zero(); degree + 1];
        coeffs[degree] = c;
        let mut p = TPoly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, degree: usize) -> BigRational {
        self.coeffs.get(degree).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn add(&self, other: &TPoly) -> TPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(len);
        for d in 0..len {
            coeffs.push(self.coeff(d) + other.coeff(d));
        }
        let mut p = TPoly { coeffs };
        p.trim();
        p
    }

    pub fn sub(&self, other: &TPoly) -> TPoly {
        self.add(&other.scale(&-BigRational::one()))
    }

    /// Product truncated at `t^t_cap`.
    pub fn mul_capped(&self, other: &TPoly, t_cap: usize) -> TPoly {
        if self.is_zero() || other.is_zero() {
            return TPoly::zero();
        }
        let len = (self.coeffs.len() + other.coeffs.len() - 1).min(t_cap + 1);
        let mut coeffs = vec![BigRational::zero(); len];
        for (da, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || da > t_cap {
                continue;
            }
            for (db, b) in other.coeffs.iter().enumerate() {
                if da + db > t_cap {
                    break;
                }
                coeffs[da + db] += a * b;
            }
        }
        let mut p = TPoly { coeffs };
        p.trim();
        p
    }

    pub fn scale(&self, c: &BigRational) -> TPoly {
        let mut p = TPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        };
        p.trim();
        p
    }

    /// Value at `t = 1`: the sum of the coefficients.
    pub fn eval_at_one(&self) -> BigRational {
        self.coeffs.iter().sum()
    }

    /// Multiply by `t`, truncating at the cap.
    pub fn shift_up(&self, t_cap: usize) -> TPoly {
        if self.is_zero() {
            return TPoly::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(BigRational::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        coeffs.truncate(t_cap + 1);
        let mut p = TPoly { coeffs };
        p.trim();
        p
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match d {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{d}")?,
            }
        }
        Ok(())
    }
}

/// A series in `x` truncated at `x^order`, with [`TPoly`] coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    order: usize,
    t_cap: usize,
    coeffs: Vec<TPoly>,
}

impl TruncatedSeries {
    pub fn zero(order: usize, t_cap: usize) -> Self {
        TruncatedSeries {
            order,
            t_cap,
            coeffs: vec![TPoly::zero(); order + 1],
        }
    }

    pub fn one(order: usize, t_cap: usize) -> Self {
        let mut s = TruncatedSeries::zero(order, t_cap);
        s.coeffs[0] = TPoly::one();
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn t_cap(&self) -> usize {
        self.t_cap
    }

    pub fn coeff(&self, degree: usize) -> &TPoly {
        &self.coeffs[degree]
    }

    pub fn set_coeff(&mut self, degree: usize, p: TPoly) {
        self.coeffs[degree] = p;
    }

    fn check_order(&self, other: &TruncatedSeries) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_order(other)?;
        Ok(TruncatedSeries {
            order: self.order,
            t_cap: self.t_cap,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_order(other)?;
        Ok(TruncatedSeries {
            order: self.order,
            t_cap: self.t_cap,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.sub(b))
                .collect(),
        })
    }

    /// Cauchy product truncated at `x^order` and `t^t_cap`.
    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_order(other)?;
        let mut result = TruncatedSeries::zero(self.order, self.t_cap);
        for (da, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (db, b) in other.coeffs.iter().enumerate() {
                if da + db > self.order {
                    break;
                }
                let product = a.mul_capped(b, self.t_cap);
                result.coeffs[da + db] = result.coeffs[da + db].add(&product);
            }
        }
        Ok(result)
    }

    pub fn scale(&self, c: &BigRational) -> TruncatedSeries {
        TruncatedSeries {
            order: self.order,
            t_cap: self.t_cap,
            coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Multiply by the marker `t`.
    pub fn times_t(&self) -> TruncatedSeries {
        TruncatedSeries {
            order: self.order,
            t_cap: self.t_cap,
            coeffs: self.coeffs.iter().map(|p| p.shift_up(self.t_cap)).collect(),
        }
    }

    /// `exp` of a series with zero constant term: `sum a^j / j!`.
    pub fn exp(&self) -> Result<TruncatedSeries> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut result = TruncatedSeries::one(self.order, self.t_cap);
        let mut power = TruncatedSeries::one(self.order, self.t_cap);
        for j in 1..=self.order {
            power = power.mul(self)?;
            let inv_fact = BigRational::new(BigInt::one(), factorial(j));
            result = result.add(&power.scale(&inv_fact))?;
        }
        Ok(result)
    }

    /// Multiplicative inverse of a series with constant term exactly 1.
    pub fn reciprocal(&self) -> Result<TruncatedSeries> {
        if self.coeffs[0] != TPoly::one() {
            return Err(Error::BadConstantTerm);
        }
        let mut inverse = TruncatedSeries::zero(self.order, self.t_cap);
        inverse.coeffs[0] = TPoly::one();
        for d in 1..=self.order {
            let mut acc = TPoly::zero();
            for i in 1..=d {
                acc = acc.add(&self.coeffs[i].mul_capped(&inverse.coeffs[d - i], self.t_cap));
            }
            inverse.coeffs[d] = acc.scale(&-BigRational::one());
        }
        Ok(inverse)
    }

    /// `-ln(1 - a)` for a series `a` with zero constant term: `sum a^j / j`.
    pub fn neg_log_one_minus(&self) -> Result<TruncatedSeries> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut result = TruncatedSeries::zero(self.order, self.t_cap);
        let mut power = TruncatedSeries::one(self.order, self.t_cap);
        for j in 1..=self.order {
            power = power.mul(self)?;
            let inv = BigRational::new(BigInt::one(), BigInt::from(j));
            result = result.add(&power.scale(&inv))?;
        }
        Ok(result)
    }

    /// Formal derivative in `x`; the order drops by one.
    pub fn derivative(&self) -> TruncatedSeries {
        assert!(self.order >= 1, "cannot differentiate an order-0 series");
        let coeffs = (1..=self.order)
            .map(|d| {
                self.coeffs[d].scale(&BigRational::from_integer(BigInt::from(d)))
            })
            .collect();
        TruncatedSeries {
            order: self.order - 1,
            t_cap: self.t_cap,
            coeffs,
        }
    }

    /// Drops terms above `new_order`.
    pub fn truncated(&self, new_order: usize) -> TruncatedSeries {
        assert!(new_order <= self.order);
        TruncatedSeries {
            order: new_order,
            t_cap: self.t_cap,
            coeffs: self.coeffs[..=new_order].to_vec(),
        }
    }

    /// Coefficient list after substituting `t = 1`.
    pub fn eval_t_at_one(&self) -> Vec<BigRational> {
        self.coeffs.iter().map(|p| p.eval_at_one()).collect()
    }

    /// `[(degree, [rational coefficients in t]), ..]` for reporting.
    pub fn to_json(&self) -> serde_json::Value {
        let items: Vec<serde_json::Value> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(d, p)| {
                let cs: Vec<String> = p.coeffs().iter().map(|c| c.to_string()).collect();
                json!([d, cs])
            })
            .collect();
        json!(items)
    }
}

/// The series `sum_m (m-1)^(m-1) x^m / m!` whose `x^(n+1)` coefficient is
/// the local-minimum-tree count `n^n` over `(n+1)!` (convention `0^0 = 1`).
pub fn local_minimum_tree_series(order: usize, t_cap: usize) -> TruncatedSeries {
    let mut series = TruncatedSeries::zero(order, t_cap);
    for m in 1..=order {
        let count = big_pow(&BigInt::from(m - 1), m - 1);
        let coeff = BigRational::new(count, factorial(m));
        series.set_coeff(m, TPoly::constant(coeff));
    }
    series
}

/// Which of the three generating-function identities to build or verify.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenIdentity {
    /// `t`-weight `t^(k+1)/k!`; right side `exp(t*G)`.
    Exp,
    /// `t`-weight `(k+1) t^(k+1)`; right side `1/(1 - t*G)`.
    Geometric,
    /// `t`-weight `t^(k+1)`, no leading 1; right side `-ln(1 - t*G)`.
    Log,
}

impl GenIdentity {
    pub const ALL: [GenIdentity; 3] = [GenIdentity::Exp, GenIdentity::Geometric, GenIdentity::Log];

    pub fn name(&self) -> &'static str {
        match self {
            GenIdentity::Exp => "gen1",
            GenIdentity::Geometric => "gen2",
            GenIdentity::Log => "gen3",
        }
    }
}

impl fmt::Display for GenIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GenIdentity {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "gen1" | "exp" => Ok(GenIdentity::Exp),
            "gen2" | "geometric" | "reciprocal" => Ok(GenIdentity::Geometric),
            "gen3" | "log" => Ok(GenIdentity::Log),
            other => Err(format!("unknown generating identity `{other}`")),
        }
    }
}

/// Assembles the triangle-weighted left-hand series from precomputed rows
/// (`rows[n]` must be the row for that `n`, for `n < order`).
pub fn triangle_series(which: GenIdentity, order: usize, t_cap: usize, rows: &[TriangleRow]) -> TruncatedSeries {
    let mut series = TruncatedSeries::zero(order, t_cap);
    if which != GenIdentity::Log {
        series.set_coeff(0, TPoly::one());
    }
    for n in 0..order {
        let row = &rows[n];
        assert_eq!(row.n(), n, "row {n} out of place");
        let x_denominator = factorial(n + 1);
        let mut poly = TPoly::zero();
        for (k, count) in row.values().iter().enumerate() {
            if k + 1 > t_cap {
                break;
            }
            let weight = match which {
                GenIdentity::Exp => BigRational::new(count.clone(), factorial(k)),
                GenIdentity::Geometric => {
                    BigRational::from_integer(count * BigInt::from(k + 1))
                }
                GenIdentity::Log => BigRational::from_integer(count.clone()),
            };
            poly = poly.add(&TPoly::monomial(
                k + 1,
                weight / BigRational::from_integer(x_denominator.clone()),
            ));
        }
        series.set_coeff(n + 1, poly);
    }
    series
}

/// Builds the matching right-hand series from `t` times the
/// local-minimum-tree series.
pub fn reference_series(which: GenIdentity, order: usize, t_cap: usize) -> Result<TruncatedSeries> {
    let marked = local_minimum_tree_series(order, t_cap).times_t();
    match which {
        GenIdentity::Exp => marked.exp(),
        GenIdentity::Geometric => TruncatedSeries::one(order, t_cap).sub(&marked)?.reciprocal(),
        GenIdentity::Log => marked.neg_log_one_minus(),
    }
}

/// Outcome of one generating-identity comparison.
#[derive(Debug, Clone)]
pub struct SeriesCheck {
    pub which: GenIdentity,
    pub order: usize,
    pub pass: bool,
    /// First differing x-degree, if any.
    pub first_mismatch: Option<usize>,
}

impl SeriesCheck {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "identity": self.which.name(),
            "order": self.order,
            "pass": self.pass,
            "first_mismatch": self.first_mismatch,
        })
    }
}

/// Verifies one generating identity through `x^order` with `t`-degrees up
/// to `order`, building the triangle side from the Stirling-form counts.
pub fn verify_generating_identity(which: GenIdentity, order: usize) -> SeriesCheck {
    let rows: Vec<TriangleRow> = (0..order)
        .map(|n| counting::triangle_row(n, Method::Stirling, 0).expect("closed form"))
        .collect();
    let lhs = triangle_series(which, order, order, &rows);
    let rhs = reference_series(which, order, order).expect("well-formed argument");
    let first_mismatch = (0..=order).find(|&d| lhs.coeff(d) != rhs.coeff(d));
    SeriesCheck {
        which,
        order,
        pass: first_mismatch.is_none(),
        first_mismatch,
    }
}
