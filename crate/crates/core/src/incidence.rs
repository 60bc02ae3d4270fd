//! Incidences between a point grid and translates of a convex graph.
//!
//! Points are `P = (A+B) x (f(A)+C)`, curves are `L_{b,c} = G(f) + (b, c)`
//! for `(b, c)` in `B x C`. Two translates of a strictly convex graph meet
//! at most once, so the incidence count obeys
//! `I(P, L) <= 4 (|P||L|)^{2/3} + 4|P| + |L|`.
//!
//! `G(f)` is the graph over the monotone convex branch (`t >= 0` for
//! squares and powers). On the full parabola a point can sit on two
//! translates with the same vertical shift: with `A = {1}`, `B = {0, 2}`,
//! `C = {0}` the point `(1, 1)` lies on both curves.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::compare::{compare, PowerExpr};
use crate::energy::{level_set_count, rep_function, RepMode};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::interval::Interval;
use crate::scalar::Scalar;
use crate::set::{apply_fn, sumset, ConvexFn, Exactness, NumberSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointGrid {
    pub xs: NumberSet,
    pub ys: NumberSet,
}

impl PointGrid {
    pub fn len(&self) -> usize {
        self.xs.len() * self.ys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Curves `{(t + b, f(t) + c) : t in the convex domain of f}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveFamily {
    pub f: ConvexFn,
    pub shifts: Vec<(Scalar, Scalar)>,
}

impl CurveFamily {
    pub fn len(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shifts.is_empty()
    }

    /// The `y` value of curve `i` above `x`, if `x - b` is in the domain.
    pub fn value_at(&self, i: usize, x: &Scalar) -> Option<Scalar> {
        let (b, c) = &self.shifts[i];
        let t = x - b;
        if !self.f.convex_domain_contains(&t) {
            return None;
        }
        self.f.eval(&t).map(|v| v + c.clone())
    }
}

fn require_exact(f: ConvexFn) -> Result<()> {
    if f.exactness() == Exactness::ProductSetEquivalent {
        Err(Error::LogEvaluation)
    } else {
        Ok(())
    }
}

pub fn build_instance(f: ConvexFn, a: &NumberSet, b: &NumberSet, c: &NumberSet) -> Result<(PointGrid, CurveFamily)> {
    require_exact(f)?;
    if a.is_empty() || b.is_empty() || c.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(t) = a.iter().find(|t| !f.convex_domain_contains(t)) {
        return Err(Error::Domain {
            fn_name: f.to_string(),
            value: t.to_string(),
        });
    }
    let xs = sumset(a, b)?;
    let ys = sumset(&apply_fn(f, a)?, c)?;
    let shifts = b
        .iter()
        .flat_map(|bv| c.iter().map(move |cv| (bv.clone(), cv.clone())))
        .collect();
    Ok((PointGrid { xs, ys }, CurveFamily { f, shifts }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct IncidenceReport {
    pub incidences: u64,
    pub points: u64,
    pub curves: u64,
    /// `4(|P||L|)^{2/3} + 4|P| + |L|`, rounded up.
    pub st_bound_decimal: String,
    /// Exact verdict of `incidences <= bound`.
    pub st_holds: bool,
    pub rich_points: BTreeMap<u64, u64>,
    pub max_curves_through_point: u64,
}

pub fn count_incidences(p: &PointGrid, l: &CurveFamily, taus: &[u64]) -> Result<IncidenceReport> {
    count_incidences_with(p, l, taus, Exec::default(), 30)
}

pub fn count_incidences_with(
    p: &PointGrid,
    l: &CurveFamily,
    taus: &[u64],
    exec: Exec,
    digits: usize,
) -> Result<IncidenceReport> {
    if taus.contains(&0) {
        return Err(Error::InvalidTau);
    }
    let indices: Vec<usize> = (0..l.len()).collect();
    // per-curve hits, concatenated in curve order
    let hits: Vec<(u32, u32)> = exec.flat_map(&indices, |&i| {
        p.xs.iter()
            .enumerate()
            .filter_map(|(xi, x)| {
                let y = l.value_at(i, x)?;
                p.ys.index_of(&y).map(|yi| (xi as u32, yi as u32))
            })
            .collect::<Vec<_>>()
    });
    let incidences = hits.len() as u64;
    let mut per_point: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    for h in hits {
        *per_point.entry(h).or_default() += 1;
    }
    let rich_points = taus
        .iter()
        .map(|&t| (t, per_point.values().filter(|&&c| c >= t).count() as u64))
        .collect();
    let (np, nl) = (p.len() as u64, l.len() as u64);
    Ok(IncidenceReport {
        incidences,
        points: np,
        curves: nl,
        st_bound_decimal: st_bound_upper_decimal(np, nl, digits),
        st_holds: st_bound_holds(incidences, np, nl)?,
        rich_points,
        max_curves_through_point: per_point.values().copied().max().unwrap_or(0),
    })
}

/// Exact `incidences <= 4 (PL)^{2/3} + 4P + L`. The integer part is moved to
/// the left; what remains is compared as power expressions.
pub fn st_bound_holds(incidences: u64, points: u64, curves: u64) -> Result<bool> {
    let excess = BigInt::from(incidences) - BigInt::from(4 * points as u128 + curves as u128);
    if excess <= BigInt::from(0) {
        return Ok(true);
    }
    let pl = BigInt::from(points as u128 * curves as u128);
    let rhs = PowerExpr::int(4).times(PowerExpr::int(pl).pow(2, 3));
    Ok(compare(&PowerExpr::int(excess), &rhs)? != Ordering::Greater)
}

pub fn st_bound_upper_decimal(points: u64, curves: u64, digits: usize) -> String {
    let prec = 64 + 4 * digits as u32;
    let pl = BigInt::from(points as u128 * curves as u128);
    let lin = BigInt::from(4 * points as u128 + curves as u128);
    let bound = Interval::exact_int(&pl, prec)
        .pow_rational(2, 3)
        .expect("nonnegative base")
        .mul(&Interval::exact_int(&BigInt::from(4), prec))
        .add(&Interval::exact_int(&lin, prec));
    bound.upper_decimal(digits)
}

/// Level-set bound check, reported as a ratio since the implied constant
/// is unknown.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LevelSetRatio {
    pub name: String,
    pub tau: u64,
    pub lhs: u64,
    /// Exact rational right-hand side without the implied constant.
    pub rhs: String,
    pub ratio: String,
    /// `|B||C| >= |A|^2`.
    pub hypothesis_ok: bool,
}

fn ratio_report(name: &str, tau: u64, lhs: u64, rhs_num: BigInt, rhs_den: BigInt, hyp: bool, digits: usize) -> LevelSetRatio {
    let rhs = Scalar::new(rhs_num.clone(), rhs_den.clone());
    let ratio = if lhs == 0 {
        "0".to_string()
    } else {
        let prec = 64 + 4 * digits as u32;
        Interval::from_rational(&(BigInt::from(lhs) * rhs_den), &rhs_num, prec).mid_decimal(digits)
    };
    LevelSetRatio {
        name: name.to_string(),
        tau,
        lhs,
        rhs: rhs.to_string(),
        ratio,
        hypothesis_ok: hyp,
    }
}

fn hypothesis(a: &NumberSet, b: &NumberSet, c: &NumberSet) -> bool {
    (b.len() as u128) * (c.len() as u128) >= (a.len() as u128).pow(2)
}

/// `|{x : sigma_{f(A),C}(x) >= tau}|` against `|A+B|^2 |C|^2 / (|B| tau^3)`.
pub fn lemma_st1_ratio(f: ConvexFn, a: &NumberSet, b: &NumberSet, c: &NumberSet, tau: u64) -> Result<LevelSetRatio> {
    if tau < 1 {
        return Err(Error::InvalidTau);
    }
    require_exact(f)?;
    let fa = apply_fn(f, a)?;
    let lhs = level_set_count(&rep_function(&fa, c, RepMode::Sum)?, tau)? as u64;
    let apb = sumset(a, b)?.len() as u128;
    let num = BigInt::from(apb * apb) * BigInt::from((c.len() as u128).pow(2));
    let den = BigInt::from(b.len() as u128) * BigInt::from((tau as u128).pow(3));
    Ok(ratio_report("ST1", tau, lhs, num, den, hypothesis(a, b, c), 30))
}

/// `|{y : sigma_{A,B}(y) >= tau}|` against `|f(A)+C|^2 |B|^2 / (|C| tau^3)`.
pub fn lemma_st2_ratio(f: ConvexFn, a: &NumberSet, b: &NumberSet, c: &NumberSet, tau: u64) -> Result<LevelSetRatio> {
    if tau < 1 {
        return Err(Error::InvalidTau);
    }
    require_exact(f)?;
    let fa = apply_fn(f, a)?;
    let lhs = level_set_count(&rep_function(a, b, RepMode::Sum)?, tau)? as u64;
    let fac = sumset(&fa, c)?.len() as u128;
    let num = BigInt::from(fac * fac) * BigInt::from((b.len() as u128).pow(2));
    let den = BigInt::from(c.len() as u128) * BigInt::from((tau as u128).pow(3));
    Ok(ratio_report("ST2", tau, lhs, num, den, hypothesis(a, b, c), 30))
}
