//! Exact sums of square roots, `sum_d c_d * sqrt(d)`.
//!
//! Radicands are kept squarefree so every value has one representation.
//! Sign determination for integer combinations splits off one prime `p` at a
//! time, writing the value as `P + Q*sqrt(p)` and recursing on `P^2 - p*Q^2`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;

/// Splits `n` into `(s, m)` with `n = s^2 * m` and `m` squarefree.
pub fn squarefree_split(n: &BigUint) -> (BigUint, BigUint) {
    if n.is_zero() {
        return (BigUint::zero(), BigUint::one());
    }
    if let Some(v) = n.to_u64() {
        let (s, m) = squarefree_split_u64(v);
        return (BigUint::from(s), BigUint::from(m));
    }
    let mut rest = n.clone();
    let mut s = BigUint::one();
    let mut m = BigUint::one();
    let mut p = BigUint::from(2u32);
    while &p * &p <= rest {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            s *= num_traits::pow(p.clone(), (e / 2) as usize);
            if e % 2 == 1 {
                m *= &p;
            }
        }
        p += 1u32;
    }
    m *= rest;
    (s, m)
}

fn squarefree_split_u64(mut n: u64) -> (u64, u64) {
    let (mut s, mut m) = (1u64, 1u64);
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= p;
        }
        if e % 2 == 1 {
            m *= p;
        }
        p += 1;
    }
    (s, m * n)
}

fn smallest_prime_factor(n: &BigUint) -> BigUint {
    let mut p = BigUint::from(2u32);
    while &p * &p <= *n {
        if (n % &p).is_zero() {
            return p;
        }
        p += 1u32;
    }
    n.clone()
}

/// `sqrt(a) * sqrt(b) = g * sqrt(a' b')` for squarefree `a = g a'`, `b = g b'`.
fn mul_radicands(a: &BigUint, b: &BigUint) -> (BigUint, BigUint) {
    let g = a.gcd(b);
    let r = (a / &g) * (b / &g);
    (g, r)
}

/// Nonnegative sum of square roots with natural-number coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RadicalSum {
    terms: BTreeMap<BigUint, BigUint>,
}

impl RadicalSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_integer(n: impl Into<BigUint>) -> Self {
        let mut r = Self::zero();
        r.add_term(n.into(), BigUint::one());
        r
    }

    /// `coeff * sqrt(radicand)`; the radicand need not be squarefree.
    pub fn term(coeff: impl Into<BigUint>, radicand: impl Into<BigUint>) -> Self {
        let mut r = Self::zero();
        r.add_term(coeff.into(), radicand.into());
        r
    }

    pub fn add_term(&mut self, coeff: BigUint, radicand: BigUint) {
        if coeff.is_zero() || radicand.is_zero() {
            return;
        }
        let (s, m) = squarefree_split(&radicand);
        *self.terms.entry(m).or_default() += coeff * s;
    }

    /// Adds `mult^{3/2}` = `mult * sqrt(mult)`.
    pub fn add_three_halves(&mut self, mult: u64) {
        self.add_term(BigUint::from(mult), BigUint::from(mult));
    }

    /// `(squarefree radicand, coefficient)` pairs in ascending radicand order.
    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &BigUint)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_integer(&self) -> Option<BigUint> {
        match self.terms.len() {
            0 => Some(BigUint::zero()),
            1 => self.terms.get(&BigUint::one()).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, other: &RadicalSum) -> RadicalSum {
        let mut out = self.clone();
        for (d, c) in &other.terms {
            *out.terms.entry(d.clone()).or_default() += c;
        }
        out
    }

    pub fn mul(&self, other: &RadicalSum) -> RadicalSum {
        let mut out = RadicalSum::zero();
        for (d1, c1) in &self.terms {
            for (d2, c2) in &other.terms {
                let (g, r) = mul_radicands(d1, d2);
                *out.terms.entry(r).or_default() += c1 * c2 * g;
            }
        }
        out
    }

    pub fn scale(&self, k: &BigUint) -> RadicalSum {
        if k.is_zero() {
            return RadicalSum::zero();
        }
        RadicalSum {
            terms: self.terms.iter().map(|(d, c)| (d.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> RadicalSum {
        let mut acc = RadicalSum::from_integer(1u32);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn to_signed(&self) -> SignedRadical {
        SignedRadical {
            terms: self
                .terms
                .iter()
                .map(|(d, c)| (d.clone(), BigInt::from_biguint(Sign::Plus, c.clone())))
                .collect(),
        }
    }

    /// Enclosure at `prec` fractional bits.
    pub fn to_interval(&self, prec: u32) -> Interval {
        let mut acc = Interval::exact_int(&BigInt::zero(), prec);
        for (d, c) in &self.terms {
            let c = BigInt::from(c.clone());
            let root = if d.is_one() {
                Interval::exact_int(&BigInt::one(), prec)
            } else {
                Interval::sqrt_int(&BigInt::from(d.clone()), prec)
            };
            acc = acc.add(&root.mul(&Interval::exact_int(&c, prec)));
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(d, c)| c.to_f64().unwrap_or(f64::INFINITY) * d.to_f64().unwrap_or(f64::INFINITY).sqrt())
            .sum()
    }

    /// Exact order between two radical sums.
    pub fn cmp_exact(&self, other: &RadicalSum, term_limit: usize) -> Result<Ordering> {
        self.to_signed().sub(&other.to_signed()).sign(term_limit)
    }
}

impl fmt::Display for RadicalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        let irr = self.terms.iter().filter(|(d, _)| !d.is_one());
        let rat = self.terms.iter().filter(|(d, _)| d.is_one());
        for (d, c) in irr.chain(rat) {
            if !first {
                f.write_str("+")?;
            }
            first = false;
            match (d.is_one(), c.is_one()) {
                (true, _) => write!(f, "{c}")?,
                (false, true) => write!(f, "√{d}")?,
                (false, false) => write!(f, "{c}√{d}")?,
            }
        }
        Ok(())
    }
}

/// Serialized as `{radicand: coefficient}` with decimal-string values.
impl Serialize for RadicalSum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.terms.len()))?;
        for (d, c) in &self.terms {
            map.serialize_entry(&d.to_string(), &c.to_string())?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for RadicalSum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(d)?;
        let mut out = RadicalSum::zero();
        for (k, v) in raw {
            let k: BigUint = k.parse().map_err(serde::de::Error::custom)?;
            let v: BigUint = v.parse().map_err(serde::de::Error::custom)?;
            out.add_term(v, k);
        }
        Ok(out)
    }
}

/// Integer combination of square roots of squarefree radicands.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignedRadical {
    terms: BTreeMap<BigUint, BigInt>,
}

impl SignedRadical {
    fn normalize(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        self
    }

    pub fn sub(&self, other: &SignedRadical) -> SignedRadical {
        let mut out = self.clone();
        for (d, c) in &other.terms {
            *out.terms.entry(d.clone()).or_default() -= c;
        }
        out.normalize()
    }

    fn mul(&self, other: &SignedRadical) -> SignedRadical {
        let mut out = SignedRadical::default();
        for (d1, c1) in &self.terms {
            for (d2, c2) in &other.terms {
                let (g, r) = mul_radicands(d1, d2);
                *out.terms.entry(r).or_default() += c1 * c2 * BigInt::from(g);
            }
        }
        out.normalize()
    }

    /// Sign of the value. Fails with [`Error::Undecided`] if an intermediate
    /// expansion exceeds `term_limit` terms.
    pub fn sign(&self, term_limit: usize) -> Result<Ordering> {
        let t = self.clone().normalize();
        if t.terms.len() > term_limit {
            return Err(Error::Undecided(format!(
                "radical expansion with {} terms exceeds limit {term_limit}",
                t.terms.len()
            )));
        }
        if t.terms.is_empty() {
            return Ok(Ordering::Equal);
        }
        let pos = t.terms.values().all(|c| c.is_positive());
        let neg = t.terms.values().all(|c| c.is_negative());
        if pos {
            return Ok(Ordering::Greater);
        }
        if neg {
            return Ok(Ordering::Less);
        }
        // mixed signs imply at least two terms, so some radicand exceeds 1
        let largest = t.terms.keys().next_back().expect("nonempty");
        let p = smallest_prime_factor(largest);
        let mut rational_part = SignedRadical::default();
        let mut root_part = SignedRadical::default();
        for (d, c) in &t.terms {
            let (q, r) = d.div_rem(&p);
            if r.is_zero() {
                root_part.terms.insert(q, c.clone());
            } else {
                rational_part.terms.insert(d.clone(), c.clone());
            }
        }
        let sp = rational_part.sign(term_limit)?;
        let sq = root_part.sign(term_limit)?;
        if sq == Ordering::Equal || sp == sq {
            return Ok(sp);
        }
        if sp == Ordering::Equal {
            return Ok(sq);
        }
        // P and Q*sqrt(p) have opposite signs: compare P^2 with p*Q^2
        let p_sq = rational_part.mul(&rational_part);
        let mut q_sq = root_part.mul(&root_part);
        let pb = BigInt::from(p);
        for c in q_sq.terms.values_mut() {
            *c *= &pb;
        }
        let t = p_sq.sub(&q_sq).sign(term_limit)?;
        Ok(if sp == Ordering::Greater { t } else { t.reverse() })
    }
}
