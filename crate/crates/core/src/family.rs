//! Structured set families and growth scans.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::interval::Interval;
use crate::scalar::Scalar;
use crate::set::{
    apply_fn, difference_set_size, product_set_size, sumset_size, ConvexFn, NumberSet,
};

pub const MAX_SCAN_SIZE: usize = 4096;

/// Bits of working precision for logarithms and slopes.
const SLOPE_PREC: u32 = 256;

/// Distribution of the gap increments of a random convex set: each gap
/// exceeds the previous one by `j / den` with `j` uniform in `lo..=hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GapDist {
    pub lo: u64,
    pub hi: u64,
    pub den: u64,
}

impl Default for GapDist {
    fn default() -> Self {
        GapDist { lo: 1, hi: 8, den: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// `{0, 1, ..., n-1}`.
    Ap,
    /// `{1, 4, ..., n^2}`.
    Squares,
    /// `{1, 2^k, ..., n^k}`.
    Powers(u32),
    /// `{1, r, ..., r^{n-1}}`.
    Geometric(Scalar),
    /// Starts at 1 with strictly increasing gaps.
    RandomConvex(GapDist),
    /// Distinct rationals `p/q` with `|p| <= max_num`; denominators come
    /// from a small per-set pool drawn from `1..=max_den`.
    RandomUniform { max_num: u64, max_den: u64, positive: bool },
}

impl FamilyKind {
    pub fn is_convex(&self) -> bool {
        match self {
            FamilyKind::Powers(k) => *k >= 2,
            FamilyKind::Squares | FamilyKind::Geometric(_) | FamilyKind::RandomConvex(_) => true,
            FamilyKind::Ap | FamilyKind::RandomUniform { .. } => false,
        }
    }

    pub fn is_random(&self) -> bool {
        matches!(self, FamilyKind::RandomConvex(_) | FamilyKind::RandomUniform { .. })
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        match self {
            FamilyKind::Powers(0) => bad("powers exponent must be at least 1".into()),
            FamilyKind::Geometric(r) if !r.is_positive() || *r == Scalar::one() => {
                bad(format!("geometric ratio must be positive and not 1, got {r}"))
            }
            FamilyKind::RandomConvex(g) if g.lo == 0 || g.lo > g.hi || g.den == 0 => {
                bad(format!("gap increments need 1 <= lo <= hi and den >= 1, got {}:{}:{}", g.lo, g.hi, g.den))
            }
            FamilyKind::RandomUniform { max_num, max_den, .. } if *max_num == 0 || *max_den == 0 => {
                bad("random-uniform bounds must be positive".into())
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyKind::Ap => f.write_str("ap"),
            FamilyKind::Squares => f.write_str("squares"),
            FamilyKind::Powers(k) => write!(f, "powers:{k}"),
            FamilyKind::Geometric(r) => write!(f, "geometric:{r}"),
            FamilyKind::RandomConvex(g) => write!(f, "random-convex:{}:{}:{}", g.lo, g.hi, g.den),
            FamilyKind::RandomUniform { max_num, max_den, positive } => {
                write!(f, "random-uniform:{max_num}:{max_den}")?;
                if *positive {
                    f.write_str(":positive")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for FamilyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::InvalidParameter(format!("unknown family {s:?}"));
        let num = |i: usize| -> Result<u64> { parts[i].parse().map_err(|_| bad()) };
        let kind = match (parts[0].to_ascii_lowercase().as_str(), parts.len()) {
            ("ap", 1) => FamilyKind::Ap,
            ("squares", 1) => FamilyKind::Squares,
            ("powers", 2) => FamilyKind::Powers(u32::try_from(num(1)?).map_err(|_| bad())?),
            ("geometric", 1) => FamilyKind::Geometric(Scalar::from_int(2)),
            ("geometric", 2) => FamilyKind::Geometric(parts[1].parse().map_err(|_| bad())?),
            ("random-convex", 1) => FamilyKind::RandomConvex(GapDist::default()),
            ("random-convex", 3) => FamilyKind::RandomConvex(GapDist { lo: num(1)?, hi: num(2)?, den: 1 }),
            ("random-convex", 4) => FamilyKind::RandomConvex(GapDist { lo: num(1)?, hi: num(2)?, den: num(3)? }),
            ("random-uniform", 1) => FamilyKind::RandomUniform { max_num: 1_000_000, max_den: 1_000_000, positive: false },
            ("random-uniform", 3) => FamilyKind::RandomUniform { max_num: num(1)?, max_den: num(2)?, positive: false },
            ("random-uniform", 4) if parts[3] == "positive" => {
                FamilyKind::RandomUniform { max_num: num(1)?, max_den: num(2)?, positive: true }
            }
            _ => return Err(bad()),
        };
        kind.validate()?;
        Ok(kind)
    }
}

impl Serialize for FamilyKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FamilyKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
}

/// Splits one seed into independent sub-seeds: `splitmix64(seed + (i+1)·γ)`.
pub fn derive_seed(seed: u64, i: u64) -> u64 {
    let mut z = seed.wrapping_add(i.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn generate(spec: &FamilySpec) -> Result<NumberSet> {
    if spec.n == 0 {
        return Err(Error::InvalidParameter("family size must be at least 1".into()));
    }
    spec.kind.validate()?;
    let n = spec.n as i64;
    let mut rng = rng_from_seed(spec.seed);
    let set = match &spec.kind {
        FamilyKind::Ap => NumberSet::from_ints(0..n),
        FamilyKind::Squares => NumberSet::from_ints((1..=n).map(|i| i * i)),
        FamilyKind::Powers(k) => NumberSet::from_vec((1..=n).map(|i| Scalar::from_int(i).pow(*k)).collect()),
        FamilyKind::Geometric(r) => {
            let mut v = Vec::with_capacity(spec.n);
            let mut x = Scalar::one();
            for _ in 0..spec.n {
                v.push(x.clone());
                x = &x * r;
            }
            NumberSet::from_vec(v)
        }
        FamilyKind::RandomConvex(g) => {
            let step = |rng: &mut ChaCha8Rng| Scalar::new(BigInt::from(rng.gen_range(g.lo..=g.hi)), BigInt::from(g.den));
            let mut x = Scalar::one();
            let mut gap = step(&mut rng);
            let mut v = Vec::with_capacity(spec.n);
            for _ in 0..spec.n {
                v.push(x.clone());
                x = &x + &gap;
                gap = &gap + &step(&mut rng);
            }
            NumberSet::from_vec(v)
        }
        FamilyKind::RandomUniform { max_num, max_den, positive } => random_uniform(&mut rng, spec.n, *max_num, *max_den, *positive)?,
    };
    debug_assert_eq!(set.len(), spec.n);
    Ok(set)
}

/// `n` distinct rationals. Each set draws 1 to 3 denominators up front so
/// that pair sums share a manageable common denominator.
pub fn random_uniform<R: Rng>(rng: &mut R, n: usize, max_num: u64, max_den: u64, positive: bool) -> Result<NumberSet> {
    let pool: Vec<u64> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(1..=max_den)).collect();
    let lo = if positive { 1 } else { -(max_num as i64) };
    let mut seen = BTreeSet::new();
    let mut attempts = 0usize;
    while seen.len() < n {
        attempts += 1;
        if attempts > 64 * n + 1024 {
            return Err(Error::InvalidParameter(format!(
                "cannot draw {n} distinct elements with numerators up to {max_num}"
            )));
        }
        let p = rng.gen_range(lo..=max_num as i64);
        let q = pool[rng.gen_range(0..pool.len())];
        seen.insert(Scalar::new(BigInt::from(p), BigInt::from(q)));
    }
    Ok(NumberSet::from_vec(seen.into_iter().collect()))
}

/// One line of a growth scan.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanRow {
    pub n: usize,
    pub sumset: usize,
    pub diffset: usize,
    /// Only for sets of positive elements.
    pub prodset: Option<usize>,
    /// `None` for the log-like entry.
    pub a_plus_fa: Option<usize>,
    /// Slopes against the previous row, `[sum, diff, prod, a+f(a)]`.
    pub slopes: [Option<String>; 4],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanTable {
    pub kind: FamilyKind,
    #[serde(rename = "fn")]
    pub f: ConvexFn,
    pub seed: u64,
    pub precision: usize,
    pub rows: Vec<ScanRow>,
    /// Least-squares log2-log2 slopes over all rows, `[sum, diff, prod, a+f(a)]`.
    pub fitted_slopes: [Option<String>; 4],
    /// `min_n min(|A+A|, |A-A|) / n^{3/2}` over the rows (convex kinds only).
    pub min_growth_ratio: Option<String>,
}

pub const SCAN_COLUMNS: [&str; 4] = ["sumset", "diffset", "prodset", "a_plus_fa"];

impl ScanTable {
    fn column(&self, c: usize) -> Vec<Option<usize>> {
        self.rows
            .iter()
            .map(|r| match c {
                0 => Some(r.sumset),
                1 => Some(r.diffset),
                2 => r.prodset,
                _ => r.a_plus_fa,
            })
            .collect()
    }

    pub fn fitted_slope(&self, column: &str) -> Option<f64> {
        let c = SCAN_COLUMNS.iter().position(|x| *x == column)?;
        self.fitted_slopes[c].as_ref()?.parse().ok()
    }

    pub fn to_tsv(&self) -> String {
        let mut out = format!("# seed={} precision={} fn={}\n", self.seed, self.precision, self.f);
        out.push_str("kind\tn\tsumset\tdiffset\tprodset\ta_plus_fa\tslope_sumset\tslope_diffset\tslope_prodset\tslope_a_plus_fa\n");
        let opt = |v: &Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
        for r in &self.rows {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}",
                self.kind,
                r.n,
                r.sumset,
                r.diffset,
                opt(&r.prodset),
                opt(&r.a_plus_fa)
            ));
            for s in &r.slopes {
                out.push('\t');
                out.push_str(s.as_deref().unwrap_or("-"));
            }
            out.push('\n');
        }
        for (name, s) in SCAN_COLUMNS.iter().zip(&self.fitted_slopes) {
            out.push_str(&format!("# fitted_slope_{name}={}\n", s.as_deref().unwrap_or("-")));
        }
        if let Some(m) = &self.min_growth_ratio {
            out.push_str(&format!("# min_growth_ratio={m}\n"));
        }
        out
    }
}

fn log2(n: usize) -> Interval {
    Interval::log2_int(&BigUint::from(n), SLOPE_PREC)
}

fn two_point_slope(n0: usize, s0: usize, n1: usize, s1: usize) -> Option<Interval> {
    log2(s1).sub(&log2(s0)).div(&log2(n1).sub(&log2(n0)))
}

/// Least squares slope of `log2 s` against `log2 n`.
pub fn fitted_slope(points: &[(usize, usize)]) -> Option<Interval> {
    if points.len() < 2 {
        return None;
    }
    let k = Interval::from_u64(points.len() as u64, SLOPE_PREC);
    let zero = Interval::from_u64(0, SLOPE_PREC);
    let (mut sx, mut sy, mut sxx, mut sxy) = (zero.clone(), zero.clone(), zero.clone(), zero);
    for &(n, s) in points {
        let (x, y) = (log2(n), log2(s));
        sx = sx.add(&x);
        sy = sy.add(&y);
        sxx = sxx.add(&x.mul(&x));
        sxy = sxy.add(&x.mul(&y));
    }
    let num = k.mul(&sxy).sub(&sx.mul(&sy));
    let den = k.mul(&sxx).sub(&sx.mul(&sx));
    num.div(&den)
}

/// Growth table of one family over increasing sizes. Random kinds use
/// `derive_seed(seed, i)` for the `i`-th size.
pub fn growth_scan(kind: &FamilyKind, f: ConvexFn, sizes: &[usize], seed: u64, digits: usize, exec: Exec) -> Result<ScanTable> {
    if sizes.is_empty() {
        return Err(Error::EmptyInput);
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) || sizes[0] == 0 {
        return Err(Error::InvalidParameter("sizes must be positive and strictly increasing".into()));
    }
    if let Some(&n) = sizes.iter().find(|&&n| n > MAX_SCAN_SIZE) {
        return Err(Error::InvalidParameter(format!("size {n} exceeds {MAX_SCAN_SIZE}")));
    }
    let mut rows: Vec<ScanRow> = Vec::with_capacity(sizes.len());
    let mut min_ratio: Option<Interval> = None;
    for (i, &n) in sizes.iter().enumerate() {
        let a = generate(&FamilySpec {
            kind: kind.clone(),
            n,
            seed: derive_seed(seed, i as u64),
        })?;
        let sumset = sumset_size(&a, &a, exec)?;
        let diffset = difference_set_size(&a, &a, exec)?;
        let prodset = if a.all_positive() { Some(product_set_size(&a, &a, exec)?) } else { None };
        let a_plus_fa = match f {
            ConvexFn::LogLike => None,
            _ => Some(sumset_size(&a, &apply_fn(f, &a)?, exec)?),
        };
        let mut slopes: [Option<String>; 4] = Default::default();
        if let Some(prev) = rows.last() {
            let pairs = [
                (Some(prev.sumset), Some(sumset)),
                (Some(prev.diffset), Some(diffset)),
                (prev.prodset, prodset),
                (prev.a_plus_fa, a_plus_fa),
            ];
            for (slot, pair) in slopes.iter_mut().zip(pairs) {
                if let (Some(s0), Some(s1)) = pair {
                    *slot = two_point_slope(prev.n, s0, n, s1).map(|x| x.mid_decimal(digits));
                }
            }
        }
        if kind.is_convex() {
            let r = Interval::from_u64(sumset.min(diffset) as u64, SLOPE_PREC)
                .div(&Interval::from_u64(n as u64, SLOPE_PREC).pow_rational(3, 2).expect("positive base"))
                .expect("nonzero");
            if min_ratio.as_ref().is_none_or(|m| r.mid_f64() < m.mid_f64()) {
                min_ratio = Some(r);
            }
        }
        rows.push(ScanRow {
            n,
            sumset,
            diffset,
            prodset,
            a_plus_fa,
            slopes,
        });
    }
    let mut table = ScanTable {
        kind: kind.clone(),
        f,
        seed,
        precision: digits,
        rows,
        fitted_slopes: Default::default(),
        min_growth_ratio: min_ratio.map(|m| m.mid_decimal(digits)),
    };
    for c in 0..4 {
        let col = table.column(c);
        if col.iter().all(Option::is_some) {
            let pts: Vec<(usize, usize)> = sizes.iter().zip(&col).map(|(&n, s)| (n, s.unwrap())).collect();
            table.fitted_slopes[c] = fitted_slope(&pts).map(|x| x.mid_decimal(digits));
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(kind: &str, n: usize, seed: u64) -> NumberSet {
        generate(&FamilySpec {
            kind: kind.parse().unwrap(),
            n,
            seed,
        })
        .unwrap()
    }

    #[test]
    fn fixed_families() {
        assert_eq!(gen("squares", 4, 0), NumberSet::from_ints([1, 4, 9, 16]));
        assert_eq!(gen("ap", 5, 0), NumberSet::from_ints(0..5));
        assert_eq!(gen("powers:3", 3, 0), NumberSet::from_ints([1, 8, 27]));
        assert_eq!(gen("geometric:3", 3, 0), NumberSet::from_ints([1, 3, 9]));
        assert_eq!(gen("geometric:1/2", 3, 0).to_string(), "{1/4, 1/2, 1}");
    }

    #[test]
    fn random_convex_is_convex_and_deterministic() {
        let a = gen("random-convex", 16, 7);
        assert_eq!(a.len(), 16);
        assert!(a.is_convex());
        assert_eq!(a, gen("random-convex", 16, 7));
        assert_ne!(a, gen("random-convex", 16, 8));
        assert!(gen("random-convex:1:5:3", 20, 1).is_convex());
    }

    #[test]
    fn random_uniform_sizes() {
        let a = gen("random-uniform", 64, 3);
        assert_eq!(a.len(), 64);
        assert!(gen("random-uniform:40:5:positive", 12, 3).all_positive());
        let err = generate(&FamilySpec {
            kind: "random-uniform:2:1".parse().unwrap(),
            n: 10,
            seed: 0,
        });
        assert!(err.is_err());
    }

    #[test]
    fn kind_round_trip_and_errors() {
        for s in ["ap", "squares", "powers:4", "geometric:3/2", "random-convex:1:8:1", "random-uniform:100:7:positive"] {
            assert_eq!(s.parse::<FamilyKind>().unwrap().to_string(), s);
        }
        for s in ["geometric:1", "geometric:-2", "powers:0", "random-convex:0:3", "cubes"] {
            assert!(s.parse::<FamilyKind>().is_err(), "{s}");
        }
        assert!(generate(&FamilySpec { kind: FamilyKind::Ap, n: 0, seed: 0 }).is_err());
    }

    #[test]
    fn ap_scan() {
        let t = growth_scan(&FamilyKind::Ap, ConvexFn::Square, &[4, 8, 16, 32, 64], 0, 30, Exec::Sequential).unwrap();
        for r in &t.rows {
            assert_eq!(r.sumset, 2 * r.n - 1);
            assert_eq!(r.diffset, 2 * r.n - 1);
            assert_eq!(r.prodset, None);
        }
        let s = t.fitted_slope("sumset").unwrap();
        assert!((s - 1.0).abs() < 0.05, "{s}");
        assert!(t.min_growth_ratio.is_none());
        let tsv = t.to_tsv();
        assert!(tsv.starts_with("# seed=0 precision=30 fn=square\nkind\tn\tsumset"));
    }

    #[test]
    fn geometric_products() {
        let t = growth_scan(&"geometric:2".parse().unwrap(), ConvexFn::Square, &[4, 9, 17], 0, 30, Exec::Sequential).unwrap();
        for r in &t.rows {
            assert_eq!(r.prodset, Some(2 * r.n - 1));
        }
    }

    #[test]
    fn slope_is_exact_for_powers() {
        // log2(n^2) against log2 n has slope exactly 2
        let s = fitted_slope(&[(3, 9), (5, 25), (11, 121)]).unwrap();
        assert!(s.mid_decimal(30).starts_with("2"), "{}", s.mid_decimal(30));
        assert!((s.mid_f64() - 2.0).abs() < 1e-60);
    }

    #[test]
    fn scan_rejects_bad_sizes() {
        assert!(growth_scan(&FamilyKind::Ap, ConvexFn::Square, &[8, 4], 0, 30, Exec::Sequential).is_err());
        assert!(growth_scan(&FamilyKind::Ap, ConvexFn::Square, &[8192], 0, 30, Exec::Sequential).is_err());
        assert!(growth_scan(&FamilyKind::Ap, ConvexFn::Reciprocal, &[4], 0, 30, Exec::Sequential).is_err());
    }
}
