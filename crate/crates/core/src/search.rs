//! Simulated annealing over finite sets, minimizing a normalized growth
//! objective. Everything is reproducible from the seed.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::compare::{compare, PowerExpr};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::family::{derive_seed, generate, rng_from_seed, FamilyKind, FamilySpec};
use crate::scalar::Scalar;
use crate::set::{
    apply_fn, difference_set_size, product_set_size, require_audit_domain, require_positive, sumset_size, ConvexFn,
    NumberSet,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Objective {
    /// `|f(A)+f(A)|^6 |A-A|^5 log^2|A| / |A|^14`.
    #[serde(rename = "T1ratio")]
    ImageDifference,
    /// `|f(A)+f(A)|^10 |A+A|^9 log^2|A| / |A|^24`.
    #[serde(rename = "T2ratio")]
    ImageSum,
    /// `max(|A·A|, |A-A|) log^{2/11}|A| / |A|^{14/11}`.
    #[serde(rename = "diffProdRatio")]
    DiffProd,
    /// `max(|A·A|, |A+A|) log^{2/19}|A| / |A|^{24/19}`.
    #[serde(rename = "sumProdRatio")]
    SumProd,
}

impl Objective {
    pub const ALL: [Objective; 4] = [
        Objective::ImageDifference,
        Objective::ImageSum,
        Objective::DiffProd,
        Objective::SumProd,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Objective::ImageDifference => "T1ratio",
            Objective::ImageSum => "T2ratio",
            Objective::DiffProd => "diffProdRatio",
            Objective::SumProd => "sumProdRatio",
        }
    }

    fn needs_positive(self) -> bool {
        matches!(self, Objective::DiffProd | Objective::SumProd)
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Objective {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Objective::ALL
            .into_iter()
            .find(|o| o.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown objective {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Move {
    /// Replace one element by a simple rational between its neighbours.
    ElementReplace,
    /// Stretch or shrink one gap, shifting everything to its right.
    GapPerturb,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Temperature {
    pub initial: f64,
    /// Multiplied in after every step.
    pub decay: f64,
}

impl Default for Temperature {
    fn default() -> Self {
        Temperature {
            initial: 0.05,
            decay: 0.995,
        }
    }
}

fn default_fn() -> ConvexFn {
    ConvexFn::Square
}

fn default_moves() -> Vec<Move> {
    vec![Move::ElementReplace, Move::GapPerturb]
}

fn default_restarts() -> usize {
    1
}

fn default_digits() -> usize {
    30
}

fn default_init() -> FamilyKind {
    FamilyKind::RandomConvex(Default::default())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SearchConfig {
    pub objective: Objective,
    #[serde(rename = "fn", default = "default_fn")]
    pub f: ConvexFn,
    pub set_size: usize,
    pub iterations: usize,
    #[serde(default)]
    pub temperature: Temperature,
    #[serde(default)]
    pub seed: u64,
    #[serde(rename = "moveSet", alias = "moves", default = "default_moves")]
    pub moves: Vec<Move>,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    /// Family of the starting set (seeded per restart).
    #[serde(default = "default_init")]
    pub init: FamilyKind,
    /// Explicit starting set; overrides `init`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<NumberSet>,
    #[serde(default = "default_digits")]
    pub precision: usize,
}

impl SearchConfig {
    pub fn new(objective: Objective, set_size: usize, iterations: usize, seed: u64) -> Self {
        SearchConfig {
            objective,
            f: default_fn(),
            set_size,
            iterations,
            temperature: Temperature::default(),
            seed,
            moves: default_moves(),
            restarts: 1,
            init: default_init(),
            initial: None,
            precision: default_digits(),
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        if self.set_size < 4 {
            return bad("setSize must be at least 4");
        }
        if self.moves.is_empty() {
            return bad("moveSet must not be empty");
        }
        if self.restarts == 0 {
            return bad("restarts must be at least 1");
        }
        if !(self.temperature.initial >= 0.0) || !(self.temperature.decay > 0.0 && self.temperature.decay <= 1.0) {
            return bad("temperature needs initial >= 0 and 0 < decay <= 1");
        }
        if self.f == ConvexFn::LogLike && matches!(self.objective, Objective::ImageDifference | Objective::ImageSum) {
            return Err(Error::LogEvaluation);
        }
        if let Some(a) = &self.initial {
            if a.len() != self.set_size {
                return bad("initial set size differs from setSize");
            }
        }
        Ok(())
    }
}

/// Objective value of `a`, as an exact expression.
pub fn objective_expr(obj: Objective, f: ConvexFn, a: &NumberSet, exec: Exec) -> Result<PowerExpr> {
    if a.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = a.len();
    let size = |k: usize| PowerExpr::int(k as u64);
    let log = if n <= 1 { PowerExpr::one() } else { PowerExpr::log2(n as u64) };
    Ok(match obj {
        Objective::ImageDifference | Objective::ImageSum => {
            require_audit_domain(f, a)?;
            let fa = apply_fn(f, a)?;
            let x = sumset_size(&fa, &fa, exec)?;
            let (other, p, q, r) = match obj {
                Objective::ImageDifference => (difference_set_size(a, a, exec)?, 6, 5, 14),
                _ => (sumset_size(a, a, exec)?, 10, 9, 24),
            };
            size(x)
                .pow(p, 1)
                .times(size(other).pow(q, 1))
                .times(log.pow(2, 1))
                .over(size(n).pow(r, 1))
        }
        Objective::DiffProd | Objective::SumProd => {
            require_positive(a)?;
            let prod = product_set_size(a, a, exec)?;
            let (other, e) = match obj {
                Objective::DiffProd => (difference_set_size(a, a, exec)?, 11),
                _ => (sumset_size(a, a, exec)?, 19),
            };
            let top = prod.max(other);
            let num = if obj == Objective::DiffProd { 14 } else { 24 };
            size(top).times(log.pow(2, e)).over(size(n).pow(num, e))
        }
    })
}

/// One trace line per iteration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceLine {
    pub restart: usize,
    pub iteration: usize,
    /// Objective of the proposed set, or `null` if the move was infeasible.
    pub objective: Option<String>,
    pub accepted: bool,
    pub best: String,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchResult {
    pub best: NumberSet,
    pub objective: String,
    pub objective_expr: PowerExpr,
    pub best_restart: usize,
    pub trace: Vec<TraceLine>,
}

pub const SEED_RULE: &str = "restart i uses splitmix64(seed + (i+1)*0x9e3779b97f4a7c15)";

impl SearchResult {
    /// JSON-lines: a header object followed by one line per trace entry.
    pub fn trace_jsonl(&self, cfg: &SearchConfig) -> String {
        let header = serde_json::json!({
            "objective": cfg.objective,
            "fn": cfg.f,
            "seed": cfg.seed,
            "precision": cfg.precision,
            "restarts": cfg.restarts,
            "seedRule": SEED_RULE,
        });
        let mut out = header.to_string();
        out.push('\n');
        for t in &self.trace {
            out.push_str(&serde_json::to_string(t).expect("trace serializes"));
            out.push('\n');
        }
        out
    }
}

fn rat(x: &Scalar) -> BigRational {
    x.as_ratio().clone()
}

fn scalar(r: BigRational) -> Scalar {
    Scalar::new(r.numer().clone(), r.denom().clone())
}

/// Simplest rational (smallest denominator, then smallest magnitude)
/// strictly inside `(lo, hi)`; `hi = None` means unbounded.
pub fn simplest_between(lo: &BigRational, hi: Option<&BigRational>) -> BigRational {
    if hi.is_none() && lo.is_negative() {
        return BigRational::zero();
    }
    if let Some(h) = hi {
        assert!(lo < h, "empty interval");
        if lo.is_negative() && h.is_positive() {
            return BigRational::zero();
        }
        if !h.is_positive() {
            return -simplest_between(&-h, Some(&-lo));
        }
    }
    // here 0 <= lo
    let n = lo.floor();
    let next = &n + BigRational::one();
    match hi {
        None => next,
        Some(h) if &next < h => next,
        Some(h) => {
            // (lo, h) lies inside [n, n+1]
            let a = lo - &n;
            let b = h - &n;
            let inner_lo = b.recip();
            let inner_hi = (!a.is_zero()).then(|| a.recip());
            n + simplest_between(&inner_lo, inner_hi.as_ref()).recip()
        }
    }
}

struct Walker<'a> {
    cfg: &'a SearchConfig,
    exec: Exec,
}

struct Candidate {
    set: NumberSet,
    expr: PowerExpr,
    value: f64,
}

fn lex_cmp(a: &NumberSet, b: &NumberSet) -> Ordering {
    a.as_slice().cmp(b.as_slice())
}

/// Strictly better: smaller objective, ties broken by the lexicographically
/// smaller set.
fn better(x: &Candidate, y: &Candidate) -> Result<bool> {
    // the log factors cancel when sizes agree
    let q = x.expr.clone().over(y.expr.clone()).simplified();
    Ok(match compare(&q, &PowerExpr::one())? {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => lex_cmp(&x.set, &y.set) == Ordering::Less,
    })
}

impl Walker<'_> {
    fn evaluate(&self, set: NumberSet) -> Result<Candidate> {
        let expr = objective_expr(self.cfg.objective, self.cfg.f, &set, self.exec)?;
        let value = expr.eval(128).map(|i| i.mid_f64()).ok_or_else(|| Error::Undecided("objective".into()))?;
        Ok(Candidate { set, expr, value })
    }

    fn initial(&self, restart: usize) -> Result<NumberSet> {
        if let Some(a) = &self.cfg.initial {
            return Ok(a.clone());
        }
        generate(&FamilySpec {
            kind: self.cfg.init.clone(),
            n: self.cfg.set_size,
            seed: derive_seed(self.cfg.seed, restart as u64),
        })
    }

    fn propose<R: Rng>(&self, rng: &mut R, a: &NumberSet) -> Option<NumberSet> {
        let mv = self.cfg.moves[rng.gen_range(0..self.cfg.moves.len())];
        let v: Vec<BigRational> = a.iter().map(rat).collect();
        let n = v.len();
        let floor_zero = self.cfg.objective.needs_positive() || self.cfg.f != ConvexFn::ExpLike && a.all_positive();
        match mv {
            Move::ElementReplace => {
                let i = rng.gen_range(0..n);
                let left = if i > 0 {
                    v[i - 1].clone()
                } else {
                    let l = &v[0] - (&v[1] - &v[0]);
                    if floor_zero && !l.is_positive() {
                        BigRational::zero()
                    } else {
                        l
                    }
                };
                let right = if i + 1 < n {
                    v[i + 1].clone()
                } else {
                    &v[n - 1] + (&v[n - 1] - &v[n - 2])
                };
                let m: i64 = rng.gen_range(2..=8);
                let k: i64 = rng.gen_range(0..m);
                let w = &right - &left;
                let lo = &left + &w * BigRational::new(k.into(), m.into());
                let hi = &left + &w * BigRational::new((k + 1).into(), m.into());
                let x = simplest_between(&lo, Some(&hi));
                if x == v[i] {
                    return None;
                }
                let mut out = v;
                out[i] = x;
                Some(NumberSet::from_vec(out.into_iter().map(scalar).collect()))
            }
            Move::GapPerturb => {
                let i = rng.gen_range(1..n);
                const FACTORS: [(i64, i64); 4] = [(1, 2), (2, 3), (3, 2), (2, 1)];
                let (p, q) = FACTORS[rng.gen_range(0..FACTORS.len())];
                let gap = &v[i] - &v[i - 1];
                let shift = &gap * BigRational::new(p.into(), q.into()) - gap;
                let out: Vec<Scalar> = v
                    .into_iter()
                    .enumerate()
                    .map(|(j, x)| scalar(if j >= i { x + &shift } else { x }))
                    .collect();
                Some(NumberSet::from_vec(out))
            }
        }
    }

    fn run(&self, restart: usize) -> Result<(Candidate, Vec<TraceLine>)> {
        let cfg = self.cfg;
        let digits = cfg.precision;
        let start = self.initial(restart)?;
        if start.len() != cfg.set_size {
            return Err(Error::InvalidParameter("initial set has the wrong size".into()));
        }
        let mut current = self.evaluate(start)?;
        let mut best = Candidate {
            set: current.set.clone(),
            expr: current.expr.clone(),
            value: current.value,
        };
        let mut best_dec = best.expr.decimal(digits);
        let mut rng = rng_from_seed(derive_seed(cfg.seed, restart as u64) ^ 0x5eed);
        let mut temp = cfg.temperature.initial;
        let mut trace = Vec::with_capacity(cfg.iterations);
        for iteration in 1..=cfg.iterations {
            let proposal = self.propose(&mut rng, &current.set);
            let u: f64 = rng.gen();
            let cand = proposal.and_then(|s| self.evaluate(s).ok());
            let mut line = TraceLine {
                restart,
                iteration,
                objective: cand.as_ref().map(|c| c.expr.decimal(digits)),
                accepted: false,
                best: String::new(),
            };
            if let Some(c) = cand {
                let delta = (c.value - current.value) / current.value;
                let accept = delta <= 0.0 || (temp > 0.0 && u < (-delta / temp).exp());
                if accept {
                    line.accepted = true;
                    if better(&c, &best)? {
                        best = Candidate {
                            set: c.set.clone(),
                            expr: c.expr.clone(),
                            value: c.value,
                        };
                        best_dec = best.expr.decimal(digits);
                    }
                    current = c;
                }
            }
            line.best = best_dec.clone();
            trace.push(line);
            temp *= cfg.temperature.decay;
        }
        Ok((best, trace))
    }
}

/// Runs `cfg.restarts` independent walks (in parallel under `exec`) and
/// keeps the best set found.
pub fn extremal_search(cfg: &SearchConfig, exec: Exec) -> Result<SearchResult> {
    cfg.validate()?;
    let walker = Walker {
        cfg,
        exec: Exec::Sequential,
    };
    let restarts: Vec<usize> = (0..cfg.restarts).collect();
    let runs = exec.map(&restarts, |&r| walker.run(r));
    let mut trace = Vec::new();
    let mut best: Option<(usize, Candidate)> = None;
    for (r, run) in runs.into_iter().enumerate() {
        let (cand, t) = run?;
        trace.extend(t);
        let replace = match &best {
            None => true,
            Some((_, b)) => better(&cand, b)?,
        };
        if replace {
            best = Some((r, cand));
        }
    }
    let (best_restart, best) = best.expect("at least one restart");
    Ok(SearchResult {
        objective: best.expr.decimal(cfg.precision),
        objective_expr: best.expr,
        best: best.set,
        best_restart,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn simplest_rationals() {
        assert_eq!(simplest_between(&r(1, 3), Some(&r(1, 2))), r(2, 5));
        assert_eq!(simplest_between(&r(1, 2), Some(&r(5, 2))), r(1, 1));
        assert_eq!(simplest_between(&r(-1, 2), Some(&r(1, 3))), r(0, 1));
        assert_eq!(simplest_between(&r(-3, 4), Some(&r(-2, 3))), r(-5, 7));
        assert_eq!(simplest_between(&r(0, 1), Some(&r(1, 100))), r(1, 101));
        assert_eq!(simplest_between(&r(7, 2), None), r(4, 1));
        assert_eq!(simplest_between(&r(3, 1), Some(&r(4, 1))), r(7, 2));
    }

    #[test]
    fn simplest_is_inside_and_minimal() {
        // brute force over small denominators
        for (p1, q1, p2, q2) in [(1, 7, 2, 9), (5, 11, 6, 11), (13, 17, 7, 9), (-9, 4, -2, 1)] {
            let (lo, hi) = (r(p1, q1), r(p2, q2));
            let s = simplest_between(&lo, Some(&hi));
            assert!(lo < s && s < hi);
            let q = s.denom().clone();
            for d in 1..q.to_string().parse::<i64>().unwrap() {
                for num in -100..100 {
                    let c = r(num, d);
                    assert!(!(lo < c && c < hi), "{c} beats {s}");
                }
            }
        }
    }

    #[test]
    fn zero_budget_returns_initial() {
        let mut cfg = SearchConfig::new(Objective::DiffProd, 8, 0, 1);
        cfg.init = "geometric:2".parse().unwrap();
        let res = extremal_search(&cfg, Exec::Sequential).unwrap();
        assert_eq!(res.best, NumberSet::from_ints([1, 2, 4, 8, 16, 32, 64, 128]));
        assert!(res.trace.is_empty());
        let direct = objective_expr(Objective::DiffProd, ConvexFn::Square, &res.best, Exec::Sequential).unwrap();
        assert_eq!(direct.decimal(30), res.objective);
    }

    #[test]
    fn best_is_monotone_and_reevaluates() {
        let mut cfg = SearchConfig::new(Objective::SumProd, 8, 150, 5);
        cfg.init = FamilyKind::Ap;
        cfg.initial = Some(NumberSet::from_ints(1..=8));
        let res = extremal_search(&cfg, Exec::Sequential).unwrap();
        let bests: Vec<f64> = res.trace.iter().map(|t| t.best.parse().unwrap()).collect();
        assert!(bests.windows(2).all(|w| w[1] <= w[0]));
        assert!(res.best.all_positive());
        assert_eq!(res.best.len(), 8);
        let direct = objective_expr(Objective::SumProd, ConvexFn::Square, &res.best, Exec::Sequential).unwrap();
        assert_eq!(direct.decimal(30), res.objective);
    }

    #[test]
    fn restarts_agree_across_exec_modes() {
        let mut cfg = SearchConfig::new(Objective::ImageDifference, 6, 40, 9);
        cfg.restarts = 3;
        let a = extremal_search(&cfg, Exec::Sequential).unwrap();
        let b = extremal_search(&cfg, Exec::Parallel).unwrap();
        assert_eq!(a.trace_jsonl(&cfg), b.trace_jsonl(&cfg));
        assert_eq!(a.best, b.best);
    }

    #[test]
    fn config_errors() {
        assert!(extremal_search(&SearchConfig::new(Objective::DiffProd, 3, 10, 0), Exec::Sequential).is_err());
        let mut cfg = SearchConfig::new(Objective::ImageSum, 8, 10, 0);
        cfg.f = ConvexFn::LogLike;
        assert!(extremal_search(&cfg, Exec::Sequential).is_err());
        let json = r#"{"objective":"diffProdRatio","setSize":8,"iterations":5,"seed":3}"#;
        let parsed: SearchConfig = serde_json::from_str(json).unwrap();
        assert_eq!(parsed.moves.len(), 2);
        assert!(serde_json::from_str::<SearchConfig>(r#"{"objective":"x","setSize":8,"iterations":1}"#).is_err());
    }
}
