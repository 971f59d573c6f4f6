//! Function spaces equinumerous to the tree refinement, and the bijections
//! between them.
//!
//! Three families of maps are modeled as dense value arrays:
//! endofunctions `[n] -> [n]`, shifted maps `[n] -> {0,..,n}`, and
//! alpha-extended maps `[n] -> {-alpha,..,n}`. The bijections here shift
//! values at or below a threshold down by one (`shift_down`/`shift_up`) and
//! relabel a codomain through an order-preserving embedding that skips a
//! chosen missing set (`encode_alpha`/`decode_alpha`).

use std::collections::BTreeSet;

use serde_json::json;

use crate::error::{Error, Result};

/// Default bound on `n` for exhaustive endofunction enumeration (`n^n`
/// functions are visited).
pub const DEFAULT_FUNCTION_ENUM_CAP: usize = 7;

/// Default bound on the number of maps visited by the alpha-extended
/// exhaustive count.
pub const DEFAULT_SPACE_LIMIT: u64 = 20_000_000;

/// A map `[n] -> [n]` with `[n] = {1,..,n}`; `n = 0` is the empty function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndoFunction {
    n: usize,
    values: Vec<usize>,
}

impl EndoFunction {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        let n = values.len();
        for &v in &values {
            if v < 1 || v > n {
                return Err(Error::BadLabelRange { label: v, max: n });
            }
        }
        Ok(EndoFunction { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `f(i)` for `i` in `1..=n`.
    pub fn get(&self, i: usize) -> usize {
        self.values[i - 1]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn image(&self) -> BTreeSet<usize> {
        self.values.iter().copied().collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "n": self.n, "values": self.values })
    }
}

/// A map `[n] -> {0,..,n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftedFunction {
    n: usize,
    values: Vec<usize>,
}

impl ShiftedFunction {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        let n = values.len();
        for &v in &values {
            if v > n {
                return Err(Error::BadLabelRange { label: v, max: n });
            }
        }
        Ok(ShiftedFunction { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn image(&self) -> BTreeSet<usize> {
        self.values.iter().copied().collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "n": self.n, "values": self.values })
    }
}

/// A map `[n] -> {-alpha,..,n}`, stored with signed values so the worked
/// fixtures read literally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaFunction {
    n: usize,
    alpha: usize,
    values: Vec<i64>,
}

impl AlphaFunction {
    pub fn new(values: Vec<i64>, alpha: usize) -> Result<Self> {
        let n = values.len();
        for &v in &values {
            if v < -(alpha as i64) || v > n as i64 {
                return Err(Error::DomainError(format!(
                    "value {v} outside -{alpha}..={n}"
                )));
            }
        }
        Ok(AlphaFunction { n, alpha, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn image(&self) -> BTreeSet<i64> {
        self.values.iter().copied().collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "n": self.n, "alpha": self.alpha, "values": self.values })
    }
}

/// A strictly increasing set of `alpha` values inside `{-alpha,..,k-1}`,
/// marking which codomain labels the order embedding skips.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MissingSet {
    elements: Vec<i64>,
}

impl MissingSet {
    /// Checks the size and range constraints against `alpha` and `k`.
    pub fn new(mut elements: Vec<i64>, alpha: usize, k: usize) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if elements.len() != alpha {
            return Err(Error::DomainError(format!(
                "missing set must have {alpha} distinct elements, got {}",
                elements.len()
            )));
        }
        for &a in &elements {
            if a < -(alpha as i64) || a >= k as i64 {
                return Err(Error::DomainError(format!(
                    "missing-set element {a} outside -{alpha}..={}",
                    k as i64 - 1
                )));
            }
        }
        Ok(MissingSet { elements })
    }

    pub fn alpha(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[i64] {
        &self.elements
    }
}

/// True when the image of `f` contains `{1,..,k}`.
pub fn covers_prefix(f: &EndoFunction, k: usize) -> Result<bool> {
    if k > f.n() {
        return Err(Error::DomainError(format!("k={k} exceeds n={}", f.n())));
    }
    let image = f.image();
    Ok((1..=k).all(|j| image.contains(&j)))
}

/// Shifts every value `<= k` down by one, sending a map covering `{1,..,k}`
/// to a map covering `{0,..,k-1}` and missing `k`.
pub fn shift_down(f: &EndoFunction, k: usize) -> Result<ShiftedFunction> {
    if !covers_prefix(f, k)? {
        return Err(Error::NotMember(format!(
            "image does not contain 1..={k}"
        )));
    }
    let values = f
        .values()
        .iter()
        .map(|&v| if v <= k { v - 1 } else { v })
        .collect();
    Ok(ShiftedFunction {
        n: f.n(),
        values,
    })
}

/// True when `g` covers `{0,..,k-1}` but misses `k`.
pub fn is_shifted_member(g: &ShiftedFunction, k: usize) -> Result<bool> {
    if k > g.n() {
        return Err(Error::DomainError(format!("k={k} exceeds n={}", g.n())));
    }
    let image = g.image();
    Ok((0..k).all(|j| image.contains(&j)) && !image.contains(&k))
}

/// Inverse of [`shift_down`]: shifts every value `< k` up by one.
pub fn shift_up(g: &ShiftedFunction, k: usize) -> Result<EndoFunction> {
    if !is_shifted_member(g, k)? {
        return Err(Error::NotMember(format!(
            "image does not contain 0..{k} or contains {k}"
        )));
    }
    let values = g
        .values()
        .iter()
        .map(|&v| if v < k { v + 1 } else { v })
        .collect();
    Ok(EndoFunction {
        n: g.n(),
        values,
    })
}

/// The unique `k` such that `g` covers `{0,..,k-1}` and misses `k`: the
/// smallest value of `{0,..,n}` absent from the image.
pub fn classify_shifted(g: &ShiftedFunction) -> usize {
    let image = g.image();
    (0..=g.n())
        .find(|j| !image.contains(j))
        .expect("n values cannot cover n+1 labels")
}

/// The order-preserving bijection `{0,..,n} -> {-alpha,..,n} \ missing`,
/// returned as a lookup table.
pub fn order_embedding(missing: &MissingSet, n: usize, alpha: usize) -> Vec<i64> {
    let skip: BTreeSet<i64> = missing.elements.iter().copied().collect();
    (-(alpha as i64)..=n as i64)
        .filter(|v| !skip.contains(v))
        .collect()
}

/// Composes the shifted form of `f` with the order embedding that skips
/// `missing`, producing a map into `{-alpha,..,n}`.
pub fn encode_alpha(
    missing: &MissingSet,
    f: &EndoFunction,
    k: usize,
    alpha: usize,
) -> Result<AlphaFunction> {
    if missing.alpha() != alpha {
        return Err(Error::DomainError(format!(
            "missing set has {} elements, expected {alpha}",
            missing.alpha()
        )));
    }
    for &a in missing.elements() {
        if a >= k as i64 {
            return Err(Error::NotMember(format!(
                "missing-set element {a} not below k={k}"
            )));
        }
    }
    let g = shift_down(f, k)?;
    let table = order_embedding(missing, f.n(), alpha);
    let values = g.values().iter().map(|&v| table[v]).collect();
    Ok(AlphaFunction {
        n: f.n(),
        alpha,
        values,
    })
}

/// Inverts [`encode_alpha`]: recovers the threshold `k` (the
/// `(alpha+1)`-st smallest absent codomain value), the skipped set, and the
/// original endofunction.
pub fn decode_alpha(h: &AlphaFunction) -> (usize, MissingSet, EndoFunction) {
    let n = h.n();
    let alpha = h.alpha();
    let image = h.image();
    let absent: Vec<i64> = (-(alpha as i64)..=n as i64)
        .filter(|v| !image.contains(v))
        .collect();
    // the domain is alpha+1 short of the codomain, so absent has at least
    // alpha+1 elements
    let k = absent[alpha];
    debug_assert!(k >= 0);
    let k = k as usize;
    let elements: Vec<i64> = absent[..alpha].to_vec();
    let missing = MissingSet { elements };
    let table = order_embedding(&missing, n, alpha);
    let values = h
        .values()
        .iter()
        .map(|&v| table.binary_search(&v).expect("value not skipped"))
        .collect();
    let g = ShiftedFunction { n, values };
    let f = shift_up(&g, k).expect("decoded map covers 0..k and misses k");
    (k, missing, f)
}

/// Odometer over all value tuples of length `n` drawn from `lo..=hi`.
fn for_each_tuple(n: usize, lo: i64, hi: i64, mut visit: impl FnMut(&[i64])) {
    let mut values = vec![lo; n];
    if n == 0 {
        visit(&values);
        return;
    }
    loop {
        visit(&values);
        let mut pos = n;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            if values[pos] < hi {
                values[pos] += 1;
                break;
            }
            values[pos] = lo;
        }
    }
}

/// Visits every endofunction on `[n]` in odometer order.
pub fn for_each_endofunction(n: usize, cap: usize, mut visit: impl FnMut(&EndoFunction)) -> Result<()> {
    if n > cap {
        return Err(Error::LimitExceeded { n, cap });
    }
    for_each_tuple(n, 1, n as i64, |values| {
        let values = values.iter().map(|&v| v as usize).collect();
        visit(&EndoFunction { n, values });
    });
    Ok(())
}

/// Exhaustively counts endofunctions on `[n]` whose image contains
/// `{1,..,k}`.
pub fn count_covering_functions(n: usize, k: usize, cap: usize) -> Result<u64> {
    if k > n {
        return Err(Error::DomainError(format!("k={k} exceeds n={n}")));
    }
    if n > cap {
        return Err(Error::LimitExceeded { n, cap });
    }
    let mut count = 0u64;
    for_each_tuple(n, 1, n as i64, |values| {
        let hit = |j: usize| values.contains(&(j as i64));
        if (1..=k).all(hit) {
            count += 1;
        }
    });
    Ok(count)
}

/// Exhaustively counts maps `[n] -> {-alpha,..,n}` that skip exactly
/// `alpha` values of `{-alpha,..,k-1}` and also skip `k`. With `alpha = 0`
/// this is the shifted family.
pub fn count_alpha_functions(n: usize, k: usize, alpha: usize, limit: u64) -> Result<u64> {
    if k > n {
        return Err(Error::DomainError(format!("k={k} exceeds n={n}")));
    }
    let space = (n as u64 + 1 + alpha as u64).checked_pow(n as u32);
    match space {
        Some(size) if size <= limit => {}
        _ => {
            return Err(Error::LimitExceeded {
                n,
                cap: limit as usize,
            })
        }
    }
    let k = k as i64;
    let mut count = 0u64;
    for_each_tuple(n, -(alpha as i64), n as i64, |values| {
        let absent_below_k = (-(alpha as i64)..k).filter(|v| !values.contains(v)).count();
        if absent_below_k == alpha && !values.contains(&k) {
            count += 1;
        }
    });
    Ok(count)
}

/// Runs the alpha encoding on one input, inverts it, and reports both
/// directions as a single JSON record. The decoded triple must reproduce the
/// input.
pub fn bijection_record(
    f: &EndoFunction,
    k: usize,
    alpha: usize,
    missing: &MissingSet,
) -> Result<serde_json::Value> {
    let g = shift_down(f, k)?;
    let h = encode_alpha(missing, f, k, alpha)?;
    let (k_back, missing_back, f_back) = decode_alpha(&h);
    let round_trip = k_back == k && &missing_back == missing && &f_back == f;
    Ok(json!({
        "f": f.values(),
        "k": k,
        "alpha": alpha,
        "A": missing.elements(),
        "g": g.values(),
        "h": h.values(),
        "recovered": {
            "k": k_back,
            "A": missing_back.elements(),
            "f": f_back.values(),
        },
        "round_trip": round_trip,
    }))
}
