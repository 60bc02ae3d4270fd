//! Finite sets of exact rationals, the convex function catalog, and the
//! sum, difference and product set constructions.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::scalar::Scalar;
use crate::scaled::{pair_values, PairOp};

/// A finite set of rationals, stored strictly increasing.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct NumberSet {
    elems: Vec<Scalar>,
}

impl<'de> Deserialize<'de> for NumberSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<Scalar>::deserialize(d)?;
        let n = raw.len();
        let set = NumberSet::from_vec(raw);
        if set.len() != n {
            return Err(serde::de::Error::custom("duplicate element in set"));
        }
        Ok(set)
    }
}

impl NumberSet {
    pub fn empty() -> Self {
        NumberSet { elems: Vec::new() }
    }

    /// Sorts and removes duplicates.
    pub fn from_vec(mut elems: Vec<Scalar>) -> Self {
        elems.sort_unstable();
        elems.dedup();
        NumberSet { elems }
    }

    pub fn from_ints<I: IntoIterator<Item = i64>>(it: I) -> Self {
        Self::from_vec(it.into_iter().map(Scalar::from_int).collect())
    }

    pub fn singleton(x: Scalar) -> Self {
        NumberSet { elems: vec![x] }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn as_slice(&self) -> &[Scalar] {
        &self.elems
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Scalar> {
        self.elems.iter()
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        self.elems.binary_search(x).is_ok()
    }

    pub fn index_of(&self, x: &Scalar) -> Option<usize> {
        self.elems.binary_search(x).ok()
    }

    pub fn first(&self) -> Option<&Scalar> {
        self.elems.first()
    }

    pub fn last(&self) -> Option<&Scalar> {
        self.elems.last()
    }

    /// `-A`.
    pub fn negate(&self) -> NumberSet {
        NumberSet {
            elems: self.elems.iter().rev().map(|x| -x).collect(),
        }
    }

    pub fn all_positive(&self) -> bool {
        self.elems.iter().all(Scalar::is_positive)
    }

    /// Strictly increasing consecutive gaps: `a_i - a_{i-1} < a_{i+1} - a_i`.
    pub fn is_convex(&self) -> bool {
        let gaps: Vec<Scalar> = self.elems.windows(2).map(|w| &w[1] - &w[0]).collect();
        gaps.windows(2).all(|g| g[0] < g[1])
    }

    pub fn is_arithmetic_progression(&self) -> bool {
        let gaps: Vec<Scalar> = self.elems.windows(2).map(|w| &w[1] - &w[0]).collect();
        gaps.windows(2).all(|g| g[0] == g[1])
    }

    /// Parses the set file format: one scalar per line (`1.25` or `5/4`),
    /// `#` comments and blank lines ignored. Duplicate values are rejected.
    pub fn parse_text(text: &str) -> Result<NumberSet> {
        let mut elems = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let x: Scalar = line.parse().map_err(|e: crate::scalar::ParseScalarError| Error::Parse {
                line: i + 1,
                message: e.0,
            })?;
            elems.push((x, i + 1));
        }
        elems.sort();
        if let Some(w) = elems.windows(2).find(|w| w[0].0 == w[1].0) {
            let (first, second) = (w[0].1.min(w[1].1), w[0].1.max(w[1].1));
            return Err(Error::Parse {
                line: second,
                message: format!("duplicate element {} (first seen on line {first})", w[0].0),
            });
        }
        Ok(NumberSet {
            elems: elems.into_iter().map(|(x, _)| x).collect(),
        })
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<NumberSet> {
        Self::parse_text(&std::fs::read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for x in &self.elems {
            out.push_str(&x.to_string());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for NumberSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.elems.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl<'a> IntoIterator for &'a NumberSet {
    type Item = &'a Scalar;
    type IntoIter = std::slice::Iter<'a, Scalar>;
    fn into_iter(self) -> Self::IntoIter {
        self.elems.iter()
    }
}

/// How a catalog function can be evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exactness {
    ExactOnRationals,
    /// Rational output only at integer inputs (`2^x`).
    ExactOnIntegers,
    /// Never evaluated; `f(A)+f(A)` is represented by `A*A`.
    ProductSetEquivalent,
}

/// Catalog of strictly convex / concave functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConvexFn {
    Square,
    /// `x^k`, `k >= 2`.
    Power(u32),
    Reciprocal,
    /// `2^x`.
    ExpLike,
    /// `log x`, handled through product sets only.
    LogLike,
}

const EXP_LIMIT: i64 = 1 << 16;

impl ConvexFn {
    pub fn exactness(self) -> Exactness {
        match self {
            ConvexFn::Square | ConvexFn::Power(_) | ConvexFn::Reciprocal => Exactness::ExactOnRationals,
            ConvexFn::ExpLike => Exactness::ExactOnIntegers,
            ConvexFn::LogLike => Exactness::ProductSetEquivalent,
        }
    }

    /// Whether `t` lies on the branch used for curves: an interval on which
    /// the function is strictly convex (or concave) and monotone. Translates
    /// of the graph over this branch meet pairwise at most once, and a point
    /// lies on at most one translate per vertical or horizontal shift.
    pub fn convex_domain_contains(self, t: &Scalar) -> bool {
        match self {
            ConvexFn::ExpLike => true,
            ConvexFn::Square | ConvexFn::Power(_) => !t.is_negative(),
            ConvexFn::Reciprocal | ConvexFn::LogLike => t.is_positive(),
        }
    }

    /// Exact value, or `None` where the function is undefined or irrational.
    pub fn eval(self, t: &Scalar) -> Option<Scalar> {
        match self {
            ConvexFn::Square => Some(t * t),
            ConvexFn::Power(k) => Some(t.pow(k)),
            ConvexFn::Reciprocal => (!t.is_zero()).then(|| t.recip()),
            ConvexFn::ExpLike => {
                if !t.is_integer() {
                    return None;
                }
                let e = t.numer().to_i64().filter(|e| e.abs() <= EXP_LIMIT)?;
                let p = BigInt::one() << e.unsigned_abs();
                Some(if e >= 0 {
                    Scalar::new(p, BigInt::one())
                } else {
                    Scalar::new(BigInt::one(), p)
                })
            }
            ConvexFn::LogLike => None,
        }
    }

    fn check_domain(self, t: &Scalar) -> Result<Scalar> {
        let err = || Error::Domain {
            fn_name: self.to_string(),
            value: t.to_string(),
        };
        match self {
            ConvexFn::LogLike => Err(Error::LogEvaluation),
            ConvexFn::ExpLike if t.numer().abs() > BigInt::from(EXP_LIMIT) => Err(err()),
            _ => self.eval(t).ok_or_else(err),
        }
    }
}

impl fmt::Display for ConvexFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConvexFn::Square => f.write_str("square"),
            ConvexFn::Power(k) => write!(f, "power:{k}"),
            ConvexFn::Reciprocal => f.write_str("reciprocal"),
            ConvexFn::ExpLike => f.write_str("exp2"),
            ConvexFn::LogLike => f.write_str("log-as-product"),
        }
    }
}

impl FromStr for ConvexFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square" => Ok(ConvexFn::Square),
            "reciprocal" => Ok(ConvexFn::Reciprocal),
            "exp2" | "exp-like" => Ok(ConvexFn::ExpLike),
            "log-as-product" | "log" | "log-like" => Ok(ConvexFn::LogLike),
            _ => {
                let k = s
                    .strip_prefix("power:")
                    .and_then(|k| k.parse::<u32>().ok())
                    .ok_or_else(|| Error::InvalidParameter(format!("unknown function {s:?}")))?;
                if k < 2 {
                    return Err(Error::InvalidParameter(format!("power exponent must be >= 2, got {k}")));
                }
                Ok(if k == 2 { ConvexFn::Square } else { ConvexFn::Power(k) })
            }
        }
    }
}

impl Serialize for ConvexFn {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ConvexFn {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

fn nonempty(a: &NumberSet, b: &NumberSet) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        Err(Error::EmptyInput)
    } else {
        Ok(())
    }
}

fn combined(a: &NumberSet, b: &NumberSet, op: PairOp, exec: Exec) -> Result<NumberSet> {
    nonempty(a, b)?;
    let pv = pair_values(a.as_slice(), b.as_slice(), op, exec);
    let (keys, _) = pv.grouped();
    Ok(NumberSet {
        elems: keys.to_scalars(&pv.denom),
    })
}

fn combined_size(a: &NumberSet, b: &NumberSet, op: PairOp, exec: Exec) -> Result<usize> {
    nonempty(a, b)?;
    Ok(pair_values(a.as_slice(), b.as_slice(), op, exec).distinct_count())
}

/// `A + B`.
pub fn sumset(a: &NumberSet, b: &NumberSet) -> Result<NumberSet> {
    sumset_with(a, b, Exec::default())
}

pub fn sumset_with(a: &NumberSet, b: &NumberSet, exec: Exec) -> Result<NumberSet> {
    combined(a, b, PairOp::Add, exec)
}

/// `A - B`.
pub fn difference_set(a: &NumberSet, b: &NumberSet) -> Result<NumberSet> {
    difference_set_with(a, b, Exec::default())
}

pub fn difference_set_with(a: &NumberSet, b: &NumberSet, exec: Exec) -> Result<NumberSet> {
    combined(a, b, PairOp::Sub, exec)
}

/// `A * B`.
pub fn product_set(a: &NumberSet, b: &NumberSet) -> Result<NumberSet> {
    product_set_with(a, b, Exec::default())
}

pub fn product_set_with(a: &NumberSet, b: &NumberSet, exec: Exec) -> Result<NumberSet> {
    combined(a, b, PairOp::Mul, exec)
}

/// `A * B` where the caller stands in for `log(A) + log(B)`: every element
/// must be strictly positive.
pub fn product_set_for_log(a: &NumberSet, b: &NumberSet) -> Result<NumberSet> {
    require_positive(a)?;
    require_positive(b)?;
    product_set(a, b)
}

pub(crate) fn require_positive(a: &NumberSet) -> Result<()> {
    match a.iter().find(|x| !x.is_positive()) {
        Some(x) => Err(Error::NonPositive(x.to_string())),
        None => Ok(()),
    }
}

/// Cardinalities without materializing the sets: `|A+B|`, `|A-B|`, `|A*B|`.
pub fn sumset_size(a: &NumberSet, b: &NumberSet, exec: Exec) -> Result<usize> {
    combined_size(a, b, PairOp::Add, exec)
}

pub fn difference_set_size(a: &NumberSet, b: &NumberSet, exec: Exec) -> Result<usize> {
    combined_size(a, b, PairOp::Sub, exec)
}

pub fn product_set_size(a: &NumberSet, b: &NumberSet, exec: Exec) -> Result<usize> {
    combined_size(a, b, PairOp::Mul, exec)
}

/// `f(A)`, exactly. Fails on domain violations, on any attempt to evaluate
/// the log-like entry, and when `f` is not injective on `A` (e.g. squaring a
/// set containing both `x` and `-x`).
pub fn apply_fn(f: ConvexFn, a: &NumberSet) -> Result<NumberSet> {
    let mut pairs = Vec::with_capacity(a.len());
    for x in a {
        pairs.push((f.check_domain(x)?, x));
    }
    pairs.sort();
    if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(Error::NonInjective {
            fn_name: f.to_string(),
            left: w[0].1.to_string(),
            right: w[1].1.to_string(),
        });
    }
    Ok(NumberSet {
        elems: pairs.into_iter().map(|(y, _)| y).collect(),
    })
}

/// Domain check used by the audit pipelines: the inputs must lie where `f`
/// is strictly convex and injective. Square and power additionally require
/// positive inputs.
pub fn require_audit_domain(f: ConvexFn, a: &NumberSet) -> Result<()> {
    match f {
        ConvexFn::LogLike => require_positive(a),
        ConvexFn::Square | ConvexFn::Power(_) | ConvexFn::Reciprocal => require_positive(a),
        ConvexFn::ExpLike => apply_fn(f, a).map(|_| ()),
    }
}
