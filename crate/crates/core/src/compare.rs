//! Products of rational powers of integers, rationals and radical sums, and
//! their exact comparison.
//!
//! [`compare`] evaluates both sides as intervals on a precision ladder
//! (128, 256, ... 4096 bits). If the enclosures never separate, both sides
//! are raised to the least common multiple of the exponent denominators,
//! denominators are cleared, and the resulting radical sums are compared
//! algebraically.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::radical::RadicalSum;

pub const START_PRECISION: u32 = 128;
pub const MAX_PRECISION: u32 = 4096;
/// Cap on intermediate radical expansions in the exact fallback.
pub const TERM_LIMIT: usize = 1 << 14;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Base {
    Rational(BigRational),
    Radical(RadicalSum),
    /// `log2(n)`; only interval evaluation is available for this base.
    Log2(BigUint),
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Factor {
    base: Base,
    num: i64,
    den: u64,
}

/// `prod_i base_i ^ (num_i / den_i)`, with nonnegative bases.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PowerExpr {
    factors: Vec<Factor>,
}

impl PowerExpr {
    pub fn one() -> Self {
        Self::default()
    }

    fn single(base: Base) -> Self {
        PowerExpr {
            factors: vec![Factor { base, num: 1, den: 1 }],
        }
    }

    pub fn int(n: impl Into<BigInt>) -> Self {
        Self::single(Base::Rational(BigRational::from_integer(n.into())))
    }

    pub fn rational(r: BigRational) -> Self {
        Self::single(Base::Rational(r))
    }

    pub fn radical(r: RadicalSum) -> Self {
        Self::single(Base::Radical(r))
    }

    pub fn log2(n: impl Into<BigUint>) -> Self {
        Self::single(Base::Log2(n.into()))
    }

    /// Raises the whole product to `num/den`.
    pub fn pow(mut self, num: i64, den: u64) -> Self {
        assert!(den >= 1);
        for f in &mut self.factors {
            let n = f.num * num;
            let d = f.den * den;
            let g = (n.unsigned_abs()).gcd(&d).max(1);
            f.num = n / g as i64;
            f.den = d / g;
        }
        self.factors.retain(|f| f.num != 0);
        self
    }

    pub fn times(mut self, other: PowerExpr) -> Self {
        self.factors.extend(other.factors);
        self
    }

    pub fn over(self, other: PowerExpr) -> Self {
        self.times(other.pow(-1, 1))
    }

    /// Merges factors with identical bases and drops trivial ones, so that
    /// e.g. `log2(n) * log2(n)^-1` cancels to `1`.
    pub fn simplified(self) -> Self {
        let mut out: Vec<Factor> = Vec::new();
        for f in self.factors {
            match out.iter_mut().find(|g| g.base == f.base) {
                Some(g) => {
                    let n = g.num as i128 * f.den as i128 + f.num as i128 * g.den as i128;
                    let d = g.den as i128 * f.den as i128;
                    let k = n.unsigned_abs().gcd(&(d as u128)).max(1) as i128;
                    g.num = i64::try_from(n / k).expect("exponent overflow");
                    g.den = u64::try_from(d / k).expect("exponent overflow");
                }
                None => out.push(f),
            }
        }
        out.retain(|f| f.num != 0 && !matches!(&f.base, Base::Rational(r) if r.is_one()));
        PowerExpr { factors: out }
    }

    pub fn has_log(&self) -> bool {
        self.factors.iter().any(|f| matches!(f.base, Base::Log2(_)))
    }

    /// Enclosure at `prec` fractional bits; `None` when a zero base is
    /// raised to a negative power.
    pub fn eval(&self, prec: u32) -> Option<Interval> {
        let mut acc = Interval::exact_int(&BigInt::one(), prec);
        for f in &self.factors {
            let b = match &f.base {
                Base::Rational(r) => {
                    assert!(!r.is_negative(), "negative base in power expression");
                    Interval::from_rational(r.numer(), r.denom(), prec)
                }
                Base::Radical(r) => r.to_interval(prec),
                Base::Log2(n) => Interval::log2_int(n, prec),
            };
            acc = acc.mul(&b.pow_rational(f.num, f.den)?);
        }
        Some(acc)
    }

    /// Enclosure whose relative width is below `10^-digits`, refining the
    /// working precision as needed.
    pub fn eval_resolved(&self, digits: u32) -> Option<Interval> {
        let mut prec = START_PRECISION.max(digits * 4 + 64);
        loop {
            let iv = self.eval(prec)?;
            if iv.resolves(digits) || prec >= 4 * MAX_PRECISION {
                return Some(iv);
            }
            prec *= 2;
        }
    }

    pub fn decimal(&self, sig: usize) -> String {
        match self.eval_resolved(sig as u32 + 2) {
            Some(iv) => iv.mid_decimal(sig),
            None => "inf".to_string(),
        }
    }

    pub fn upper_decimal(&self, sig: usize) -> String {
        match self.eval_resolved(sig as u32 + 2) {
            Some(iv) => iv.upper_decimal(sig),
            None => "inf".to_string(),
        }
    }

    /// Splits into `(numerator, denominator)` radical sums after raising to
    /// the integer power `lcm`.
    fn clear_to_integer_power(&self, lcm: u64, num_side: &mut RadicalSum, den_side: &mut RadicalSum) -> Result<()> {
        for f in &self.factors {
            let k = f.num * (lcm / f.den) as i64;
            let e = u32::try_from(k.unsigned_abs())
                .map_err(|_| Error::Undecided(format!("exponent {k} too large for exact fallback")))?;
            let (top, bottom) = match &f.base {
                Base::Rational(r) => (
                    RadicalSum::from_integer(r.numer().to_biguint().expect("nonnegative")),
                    RadicalSum::from_integer(r.denom().to_biguint().expect("positive")),
                ),
                Base::Radical(r) => (r.clone(), RadicalSum::from_integer(1u32)),
                Base::Log2(_) => {
                    return Err(Error::Undecided("no exact form for log2 factors".into()));
                }
            };
            if k > 0 {
                *num_side = num_side.mul(&top.pow(e));
                *den_side = den_side.mul(&bottom.pow(e));
            } else {
                if top.is_zero() {
                    return Err(Error::Undecided("zero raised to a negative power".into()));
                }
                *num_side = num_side.mul(&bottom.pow(e));
                *den_side = den_side.mul(&top.pow(e));
            }
            if num_side.len() > TERM_LIMIT || den_side.len() > TERM_LIMIT {
                return Err(Error::Undecided("radical expansion exceeds term limit".into()));
            }
        }
        Ok(())
    }
}

impl fmt::Display for PowerExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, fac) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("·")?;
            }
            let needs_paren = match &fac.base {
                Base::Radical(r) => r.len() > 1 || r.terms().any(|(d, c)| !d.is_one() && !c.is_one()),
                Base::Rational(r) => !r.is_integer(),
                Base::Log2(_) => false,
            };
            let body = match &fac.base {
                Base::Rational(r) => r.to_string(),
                Base::Radical(r) => r.to_string(),
                Base::Log2(n) => format!("log2({n})"),
            };
            if needs_paren {
                write!(f, "({body})")?;
            } else {
                f.write_str(&body)?;
            }
            match (fac.num, fac.den) {
                (1, 1) => {}
                (n, 1) => write!(f, "^{n}")?,
                (n, d) => write!(f, "^({n}/{d})")?,
            }
        }
        Ok(())
    }
}

impl Serialize for PowerExpr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Exact three-way comparison of two power expressions.
pub fn compare(x: &PowerExpr, y: &PowerExpr) -> Result<Ordering> {
    let mut prec = START_PRECISION;
    while prec <= MAX_PRECISION {
        match (x.eval(prec), y.eval(prec)) {
            (Some(a), Some(b)) => {
                if let Some(o) = a.separated(&b) {
                    return Ok(o);
                }
            }
            _ => return Err(Error::Undecided("zero raised to a negative power".into())),
        }
        prec *= 2;
    }
    compare_exact(x, y)
}

/// The algebraic route alone, without the interval ladder.
pub fn compare_exact(x: &PowerExpr, y: &PowerExpr) -> Result<Ordering> {
    let lcm = x
        .factors
        .iter()
        .chain(&y.factors)
        .fold(1u64, |acc, f| acc.lcm(&f.den));
    let one = || RadicalSum::from_integer(1u32);
    let (mut xn, mut xd, mut yn, mut yd) = (one(), one(), one(), one());
    x.clear_to_integer_power(lcm, &mut xn, &mut xd)?;
    y.clear_to_integer_power(lcm, &mut yn, &mut yd)?;
    // x^L = xn/xd, y^L = yn/yd with positive denominators
    let lhs = xn.mul(&yd);
    let rhs = yn.mul(&xd);
    lhs.cmp_exact(&rhs, TERM_LIMIT)
}

/// Ratio `x / y` as a decimal with `sig` significant digits.
pub fn ratio_decimal(x: &PowerExpr, y: &PowerExpr, sig: usize) -> String {
    x.clone().over(y.clone()).decimal(sig)
}
