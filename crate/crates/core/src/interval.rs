//! Outward-rounded interval arithmetic on fixed-point dyadic numbers.
//!
//! An [`Interval`] at precision `p` encloses a real value in
//! `[lo / 2^p, hi / 2^p]`. Every operation rounds its lower endpoint down
//! and its upper endpoint up, so the true value is always enclosed.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

fn pow2(k: u32) -> BigInt {
    BigInt::one() << k
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn floor_root(n: &BigInt, k: u32) -> BigInt {
    debug_assert!(!n.is_negative());
    n.nth_root(k)
}

fn ceil_root(n: &BigInt, k: u32) -> BigInt {
    let r = floor_root(n, k);
    if &num_traits::pow(r.clone(), k as usize) == n {
        r
    } else {
        r + 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
    Nearest,
}

impl Interval {
    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn exact_int(n: &BigInt, prec: u32) -> Self {
        let v = n << prec;
        Interval { lo: v.clone(), hi: v, prec }
    }

    pub fn from_u64(n: u64, prec: u32) -> Self {
        Self::exact_int(&BigInt::from(n), prec)
    }

    pub fn from_rational(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        assert!(den.is_positive(), "denominator must be positive");
        let scaled = num << prec;
        Interval {
            lo: scaled.div_floor(den),
            hi: ceil_div(&scaled, den),
            prec,
        }
    }

    /// Enclosure of `sqrt(n)` for a natural number `n`.
    pub fn sqrt_int(n: &BigInt, prec: u32) -> Self {
        let scaled = n << (2 * prec);
        Interval {
            lo: floor_root(&scaled, 2),
            hi: ceil_root(&scaled, 2),
            prec,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn add(&self, o: &Interval) -> Interval {
        assert_eq!(self.prec, o.prec);
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
            prec: self.prec,
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
            prec: self.prec,
        }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        assert_eq!(self.prec, o.prec);
        let cands = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let min = cands.iter().min().unwrap();
        let max = cands.iter().max().unwrap();
        let s = pow2(self.prec);
        Interval {
            lo: min.div_floor(&s),
            hi: ceil_div(max, &s),
            prec: self.prec,
        }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// `1/x`; `None` if the interval contains zero.
    pub fn recip(&self) -> Option<Interval> {
        if self.contains_zero() {
            return None;
        }
        let num = pow2(2 * self.prec);
        Some(Interval {
            lo: num.div_floor(&self.hi),
            hi: ceil_div(&num, &self.lo),
            prec: self.prec,
        })
    }

    pub fn div(&self, o: &Interval) -> Option<Interval> {
        o.recip().map(|r| self.mul(&r))
    }

    fn clamp_nonneg(&self) -> Interval {
        Interval {
            lo: self.lo.clone().max(BigInt::zero()),
            hi: self.hi.clone().max(BigInt::zero()),
            prec: self.prec,
        }
    }

    pub fn powi(&self, k: u32) -> Interval {
        let mut acc = Interval::exact_int(&BigInt::one(), self.prec);
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

    /// `x^{1/k}` for nonnegative `x`.
    pub fn root(&self, k: u32) -> Interval {
        assert!(k >= 1);
        let x = self.clamp_nonneg();
        let shift = self.prec * (k - 1);
        Interval {
            lo: floor_root(&(&x.lo << shift), k),
            hi: ceil_root(&(&x.hi << shift), k),
            prec: self.prec,
        }
    }

    /// `x^{num/den}` for nonnegative `x`. `None` for a negative power of an
    /// interval touching zero.
    pub fn pow_rational(&self, num: i64, den: u64) -> Option<Interval> {
        assert!(den >= 1);
        let den = u32::try_from(den).expect("exponent denominator fits u32");
        let mag = u32::try_from(num.unsigned_abs()).expect("exponent numerator fits u32");
        let r = self.clamp_nonneg().powi(mag).root(den);
        if num < 0 {
            r.recip()
        } else {
            Some(r)
        }
    }

    /// Enclosure of `log2(n)` for a positive integer `n`.
    pub fn log2_int(n: &BigUint, prec: u32) -> Interval {
        assert!(!n.is_zero(), "log2 of zero");
        let k = n.bits() - 1;
        let guard = prec + 16;
        let m = BigInt::from(n.clone());
        let base = pow2(k as u32);
        // ln(n / 2^k) and ln 2, both via 2 atanh(z), z <= 1/3
        let (ylo, yhi) = ln_atanh(&(&m - &base), &(&m + &base), guard);
        let (llo, lhi) = ln_atanh(&BigInt::one(), &BigInt::from(3), guard);
        let frac = Interval { lo: ylo, hi: yhi, prec: guard }
            .div(&Interval { lo: llo, hi: lhi, prec: guard })
            .expect("ln 2 is positive");
        let shift = pow2(guard - prec);
        let frac = Interval {
            lo: frac.lo.div_floor(&shift),
            hi: ceil_div(&frac.hi, &shift),
            prec,
        };
        frac.add(&Interval::exact_int(&BigInt::from(k), prec))
    }

    /// Strict order when the enclosures are disjoint, `Equal` when both are
    /// the same exact point, `None` otherwise.
    pub fn separated(&self, o: &Interval) -> Option<Ordering> {
        assert_eq!(self.prec, o.prec);
        if self.hi < o.lo {
            Some(Ordering::Less)
        } else if self.lo > o.hi {
            Some(Ordering::Greater)
        } else if self.is_exact() && o.is_exact() && self.lo == o.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Whether the relative width is below `10^-digits`.
    pub fn resolves(&self, digits: u32) -> bool {
        let width = &self.hi - &self.lo;
        let mag = self.lo.abs().min(self.hi.abs());
        if mag.is_zero() {
            return width.is_zero();
        }
        width * num_traits::pow(BigInt::from(10), digits as usize) < mag
    }

    pub fn lower_decimal(&self, sig: usize) -> String {
        dyadic_to_decimal(&self.lo, self.prec, sig, Rounding::Down)
    }

    pub fn upper_decimal(&self, sig: usize) -> String {
        dyadic_to_decimal(&self.hi, self.prec, sig, Rounding::Up)
    }

    pub fn mid_decimal(&self, sig: usize) -> String {
        let mid = &self.lo + &self.hi;
        dyadic_to_decimal(&mid, self.prec + 1, sig, Rounding::Nearest)
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid_decimal(20).parse().unwrap_or(f64::NAN)
    }

    pub fn lo_scaled(&self) -> &BigInt {
        &self.lo
    }

    pub fn hi_scaled(&self) -> &BigInt {
        &self.hi
    }
}

/// `2 atanh(u/v)` enclosure at `g` fractional bits, for `0 <= u/v <= 1/3`.
fn ln_atanh(u: &BigInt, v: &BigInt, g: u32) -> (BigInt, BigInt) {
    if u.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let scale = pow2(g);
    let (u2, v2) = (u * u, v * v);
    let (mut num, mut den) = (u.clone(), v.clone());
    let mut sum = BigInt::zero();
    let mut terms = 0u64;
    let mut j = 1u64;
    loop {
        let t = (&scale * &num).div_floor(&(&den * BigInt::from(j)));
        if t.is_zero() {
            break;
        }
        sum += t;
        terms += 1;
        num *= &u2;
        den *= &v2;
        j += 2;
    }
    // each floor loses < 1 ulp; the tail after the first zero term is < 1 ulp
    let lo = &sum * 2;
    let hi = (sum + BigInt::from(terms + 1)) * 2;
    (lo, hi)
}

/// Decimal string with `sig` significant digits of `v / 2^prec`, rounded
/// as requested. Trailing fractional zeros are dropped; magnitudes outside
/// `[1e-6, 1e sig)` use exponent notation.
pub fn dyadic_to_decimal(v: &BigInt, prec: u32, sig: usize, mode: Rounding) -> String {
    assert!(sig >= 1);
    if v.is_zero() {
        return "0".to_string();
    }
    if v.is_negative() {
        let flipped = match mode {
            Rounding::Down => Rounding::Up,
            Rounding::Up => Rounding::Down,
            Rounding::Nearest => Rounding::Nearest,
        };
        return format!("-{}", dyadic_to_decimal(&-v, prec, sig, flipped));
    }
    let ten = BigInt::from(10);
    let denom = pow2(prec);
    // exponent e with 10^e <= x < 10^{e+1}
    let approx = ((v.bits() as f64 - 1.0 - prec as f64) * std::f64::consts::LOG10_2).floor() as i64;
    let ge_pow10 = |e: i64| -> bool {
        if e >= 0 {
            v >= &(num_traits::pow(ten.clone(), e as usize) * &denom)
        } else {
            v * num_traits::pow(ten.clone(), (-e) as usize) >= denom
        }
    };
    let mut e = approx;
    while !ge_pow10(e) {
        e -= 1;
    }
    while ge_pow10(e + 1) {
        e += 1;
    }
    let shift = sig as i64 - 1 - e;
    let (num, den) = if shift >= 0 {
        (v * num_traits::pow(ten.clone(), shift as usize), denom)
    } else {
        (v.clone(), denom * num_traits::pow(ten.clone(), (-shift) as usize))
    };
    let (q, r) = num.div_rem(&den);
    let mut digits = match mode {
        Rounding::Down => q,
        Rounding::Up => {
            if r.is_zero() {
                q
            } else {
                q + 1
            }
        }
        Rounding::Nearest => {
            if &r * 2 >= den {
                q + 1
            } else {
                q
            }
        }
    };
    if digits == num_traits::pow(ten.clone(), sig) {
        digits /= &ten;
        e += 1;
    }
    let ds = digits.to_string();
    debug_assert_eq!(ds.len(), sig);
    let trim = |int: &str, frac: &str| -> String {
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            int.to_string()
        } else {
            format!("{int}.{frac}")
        }
    };
    if e >= 0 && (e as usize) < sig {
        let split = e as usize + 1;
        trim(&ds[..split], &ds[split..])
    } else if (-6..0).contains(&e) {
        let zeros = "0".repeat((-e - 1) as usize);
        trim("0", &format!("{zeros}{ds}"))
    } else {
        format!("{}e{e}", trim(&ds[..1], &ds[1..]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn sqrt_encloses() {
        let s = Interval::sqrt_int(&bi(2), 128);
        assert!(s.lower_decimal(20).starts_with("1.414213562373095048"));
        assert!(s.resolves(30));
        let four = Interval::sqrt_int(&bi(4), 64);
        assert!(four.is_exact());
    }

    #[test]
    fn log2_matches_known_values() {
        let l = Interval::log2_int(&BigUint::from(3u32), 160);
        // log2(3) = 1.584962500721156181453738943947816508759814407692...
        assert_eq!(l.mid_decimal(30), "1.58496250072115618145373894395");
        assert!(l.resolves(35));
        let l8 = Interval::log2_int(&BigUint::from(8u32), 128);
        assert!(l8.is_exact());
        assert_eq!(l8.mid_decimal(30), "3");
        let l1 = Interval::log2_int(&BigUint::from(1u32), 128);
        assert_eq!(l1.mid_decimal(5), "0");
    }

    #[test]
    fn rational_powers() {
        // 10^{2/3} = 4.641588833612778892410076350919446...
        let x = Interval::exact_int(&bi(10), 128).pow_rational(2, 3).unwrap();
        assert_eq!(x.mid_decimal(25), "4.641588833612778892410076");
        let inv = Interval::exact_int(&bi(4), 64).pow_rational(-1, 2).unwrap();
        assert!(inv.is_exact());
        assert_eq!(inv.mid_decimal(5), "0.5");
    }

    #[test]
    fn decimal_formatting() {
        let p = 64;
        let third = Interval::from_rational(&bi(1), &bi(3), p);
        assert_eq!(third.lower_decimal(5), "0.33333");
        assert_eq!(third.upper_decimal(5), "0.33334");
        assert_eq!(dyadic_to_decimal(&(bi(15) << p), p, 30, Rounding::Up), "15");
        assert_eq!(dyadic_to_decimal(&(bi(99999) << p), p, 3, Rounding::Up), "1e5");
        assert_eq!(dyadic_to_decimal(&(bi(-5) << (p - 1)), p, 3, Rounding::Down), "-2.5");
        assert_eq!(dyadic_to_decimal(&bi(1), 40, 3, Rounding::Nearest), "9.09e-13");
    }

    #[test]
    fn separation() {
        let p = 128;
        let a = Interval::sqrt_int(&bi(2), p);
        let b = Interval::from_rational(&bi(1414213), &bi(1000000), p);
        assert_eq!(a.separated(&b), Some(Ordering::Greater));
        assert_eq!(b.separated(&a), Some(Ordering::Less));
        assert_eq!(Interval::exact_int(&bi(3), p).separated(&Interval::exact_int(&bi(3), p)), Some(Ordering::Equal));
    }
}
