//! Inequality audits.
//!
//! Constant-free inequalities (Hölder, Cauchy–Schwarz, the three-halves
//! energy lemma, the chain identities) get an exact PASS/FAIL verdict.
//! Bounds that only hold up to an unspecified constant are recorded as
//! REPORT_ONLY ratios `lhs / rhs`.
//!
//! Conventions: logarithms are base 2; `log|A|` is replaced by 1 when
//! `|A| = 1` (flagged); `|A| ≈ |C|` means `1/2 <= |A|/|C| <= 2`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::compare::{compare, PowerExpr};
use crate::energy::{rep_function_with, RepMode};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::radical::RadicalSum;
use crate::set::{
    apply_fn, difference_set_with, product_set_with, require_audit_domain, require_positive, sumset_with, ConvexFn,
    NumberSet,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    ReportOnly,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AuditReport {
    pub name: String,
    pub lhs: PowerExpr,
    pub rhs: PowerExpr,
    pub lhs_decimal: String,
    pub rhs_decimal: String,
    pub verdict: Verdict,
    /// `lhs / rhs`.
    pub ratio: String,
    pub hypothesis_flags: Vec<String>,
    /// Set contents, present only on FAIL.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<BTreeMap<String, String>>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }

    pub fn ratio_f64(&self) -> f64 {
        self.ratio.parse().unwrap_or(f64::NAN)
    }
}

/// Which growth statement a chain replays.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Theorem {
    /// `|f(A)+C|^6 |A-A|^5 >> |A|^14 / log^2|A|`.
    #[serde(rename = "T1")]
    ImageDifference,
    /// `|f(A)+C|^10 |A+A|^9 >> |A|^24 / log^2|A|`.
    #[serde(rename = "T2")]
    ImageSum,
    /// `|A+f(A)| >> |A|^{24/19} / log^{2/19}|A|`.
    #[serde(rename = "T3")]
    MixedSum,
    /// `|A·A|^6 |A-A|^5 >> |A|^14 / log^2|A|` (image difference with `f = log`).
    #[serde(rename = "C_diffprod")]
    ProductDifference,
    /// `|A·A|^10 |A+A|^9 >> |A|^24 / log^2|A|`.
    #[serde(rename = "C_sumprod")]
    ProductSum,
}

impl Theorem {
    pub const ALL: [Theorem; 5] = [
        Theorem::ImageDifference,
        Theorem::ImageSum,
        Theorem::MixedSum,
        Theorem::ProductDifference,
        Theorem::ProductSum,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Theorem::ImageDifference => "T1",
            Theorem::ImageSum => "T2",
            Theorem::MixedSum => "T3",
            Theorem::ProductDifference => "C_diffprod",
            Theorem::ProductSum => "C_sumprod",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Theorem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown theorem {s:?} (expected T1, T2, T3, C_diffprod, C_sumprod)")))
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ChainReport {
    pub theorem: Theorem,
    #[serde(rename = "fn")]
    pub f: String,
    pub set_size: usize,
    pub steps: Vec<AuditReport>,
    /// E.g. `|f(A)+C|^6 |A-A|^5 log^2|A| / |A|^14`.
    pub final_expr: PowerExpr,
    pub final_exponent_ratio: String,
    pub hypothesis_flags: Vec<String>,
    /// False if a constant-free step failed; the chain stops at that step.
    pub passed: bool,
}

impl ChainReport {
    /// `(step name, ratio)` for every REPORT_ONLY step plus `final`.
    pub fn ratios(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = self
            .steps
            .iter()
            .filter(|s| s.verdict == Verdict::ReportOnly)
            .map(|s| (s.name.clone(), s.ratio.clone()))
            .collect();
        out.push(("final".to_string(), self.final_exponent_ratio.clone()));
        out
    }
}

#[derive(Clone, Debug)]
pub enum CsMode {
    Sum,
    Difference,
    Cross(NumberSet),
}

/// Audit settings: decimal digits in reports and execution mode.
#[derive(Clone, Copy, Debug)]
pub struct Auditor {
    pub digits: usize,
    pub exec: Exec,
}

impl Default for Auditor {
    fn default() -> Self {
        Auditor {
            digits: 30,
            exec: Exec::default(),
        }
    }
}

fn int(n: impl Into<BigInt>) -> PowerExpr {
    PowerExpr::int(n)
}

fn size(n: usize) -> PowerExpr {
    int(n as u64)
}

fn dump(sets: &[(&str, &NumberSet)]) -> BTreeMap<String, String> {
    sets.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

/// `log2 |A|`, or 1 with a flag when `|A| = 1`.
fn log_factor(n: usize, flags: &mut Vec<String>) -> PowerExpr {
    if n <= 1 {
        let flag = "log|A| = 0 replaced by 1".to_string();
        if !flags.contains(&flag) {
            flags.push(flag);
        }
        int(1)
    } else {
        PowerExpr::log2(n as u64)
    }
}

struct Moments {
    e: u128,
    e3: u128,
    e15: RadicalSum,
}

impl Auditor {
    fn moments(&self, a: &NumberSet) -> Result<Moments> {
        let d = rep_function_with(a, a, RepMode::Difference, self.exec)?;
        Ok(Moments {
            e: d.sum_of_squares(),
            e3: d.sum_of_cubes(),
            e15: d.three_halves_moment(),
        })
    }

    fn energy(&self, a: &NumberSet, b: &NumberSet) -> Result<u128> {
        Ok(rep_function_with(a, b, RepMode::Difference, self.exec)?.sum_of_squares())
    }

    fn exact(&self, name: &str, lhs: PowerExpr, rhs: PowerExpr, sets: &[(&str, &NumberSet)]) -> Result<AuditReport> {
        let verdict = match compare(&lhs, &rhs)? {
            Ordering::Greater => Verdict::Fail,
            _ => Verdict::Pass,
        };
        Ok(self.report(name, lhs, rhs, verdict, Vec::new(), (verdict == Verdict::Fail).then(|| dump(sets))))
    }

    fn report_only(&self, name: &str, lhs: PowerExpr, rhs: PowerExpr, flags: Vec<String>) -> AuditReport {
        self.report(name, lhs, rhs, Verdict::ReportOnly, flags, None)
    }

    fn report(
        &self,
        name: &str,
        lhs: PowerExpr,
        rhs: PowerExpr,
        verdict: Verdict,
        hypothesis_flags: Vec<String>,
        counterexample: Option<BTreeMap<String, String>>,
    ) -> AuditReport {
        let ratio = lhs.clone().over(rhs.clone()).simplified().decimal(self.digits);
        AuditReport {
            name: name.to_string(),
            lhs_decimal: lhs.decimal(self.digits),
            rhs_decimal: rhs.decimal(self.digits),
            lhs,
            rhs,
            verdict,
            ratio,
            hypothesis_flags,
            counterexample,
        }
    }

    /// `E_{3/2}(A)^2 |B|^2 <= E_3(A)^{2/3} E_3(B)^{1/3} E(A, A+B)`.
    pub fn lemma_e15(&self, a: &NumberSet, b: &NumberSet) -> Result<AuditReport> {
        self.lemma_e15_named("threehalves_lemma", a, b)
    }

    fn lemma_e15_named(&self, name: &str, a: &NumberSet, b: &NumberSet) -> Result<AuditReport> {
        let ma = self.moments(a)?;
        let e3b = if a == b { ma.e3 } else { self.moments(b)?.e3 };
        let apb = sumset_with(a, b, self.exec)?;
        let cross = self.energy(a, &apb)?;
        let lhs = PowerExpr::radical(ma.e15).pow(2, 1).times(size(b.len()).pow(2, 1));
        let rhs = int(ma.e3)
            .pow(2, 3)
            .times(int(e3b).pow(1, 3))
            .times(int(cross));
        self.exact(name, lhs, rhs, &[("A", a), ("B", b)])
    }

    /// `|A|^6 <= E_{3/2}(A)^2 |A-A|`.
    pub fn holder(&self, a: &NumberSet) -> Result<AuditReport> {
        let m = self.moments(a)?;
        let d = difference_set_with(a, a, self.exec)?.len();
        let lhs = size(a.len()).pow(6, 1);
        let rhs = PowerExpr::radical(m.e15).pow(2, 1).times(size(d));
        self.exact("holder", lhs, rhs, &[("A", a)])
    }

    /// Cauchy–Schwarz lower bounds on additive energy.
    /// `Sum`/`Difference`: `|A|^4 <= E(A,A) |A±A|`.
    /// `Cross(F)`: `(|A||F|)^2 <= E(A,F) |A+F|` and `E(A,F)^2 <= E(A,A) E(F,F)`.
    pub fn cauchy_schwarz(&self, a: &NumberSet, mode: &CsMode) -> Result<Vec<AuditReport>> {
        if a.is_empty() {
            return Err(Error::EmptyInput);
        }
        let e_aa = self.energy(a, a)?;
        match mode {
            CsMode::Sum | CsMode::Difference => {
                let (name, combined) = match mode {
                    CsMode::Sum => ("cauchy_schwarz_sum", sumset_with(a, a, self.exec)?),
                    _ => ("cauchy_schwarz_difference", difference_set_with(a, a, self.exec)?),
                };
                let lhs = size(a.len()).pow(4, 1);
                let rhs = int(e_aa).times(size(combined.len()));
                Ok(vec![self.exact(name, lhs, rhs, &[("A", a)])?])
            }
            CsMode::Cross(f) => {
                let e_af = self.energy(a, f)?;
                let e_ff = self.energy(f, f)?;
                let apf = sumset_with(a, f, self.exec)?.len();
                let sets = [("A", a), ("F", f)];
                let first = self.exact(
                    "cauchy_schwarz_cross_sum",
                    size(a.len()).times(size(f.len())).pow(2, 1),
                    int(e_af).times(size(apf)),
                    &sets,
                )?;
                let second = self.exact(
                    "cauchy_schwarz_energy",
                    int(e_af).pow(2, 1),
                    int(e_aa).times(int(e_ff)),
                    &sets,
                )?;
                Ok(vec![first, second])
            }
        }
    }

    /// The six energy bounds that follow from the level-set lemma, as
    /// ratio reports. `X = |f(A)+C|`, `Y = |A+C|`, `L = log2|A|`:
    /// `E(A,A) vs E_{3/2}(A)^{2/3} X^{2/3} |A|^{1/3}`, `E(A,F) vs X |F|^{3/2}`,
    /// `E_3(A) vs X^2 |A| L`, and the same three for `f(A)` with `Y`.
    pub fn corollary_ratios(&self, f: ConvexFn, a: &NumberSet, c: &NumberSet, fset: &NumberSet) -> Result<Vec<AuditReport>> {
        if a.is_empty() || c.is_empty() || fset.is_empty() {
            return Err(Error::EmptyInput);
        }
        let fa = apply_fn(f, a)?;
        let mut flags = Vec::new();
        let (na, nc) = (a.len(), c.len());
        if 2 * na < nc || 2 * nc < na {
            flags.push(format!("|A|≈|C| violated: |A|={na}, |C|={nc}"));
        }
        if nc > fset.len() {
            flags.push(format!("|C| <= |F| violated: |C|={nc}, |F|={}", fset.len()));
        }
        let log = log_factor(na, &mut flags);
        let x = sumset_with(&fa, c, self.exec)?.len();
        let y = sumset_with(a, c, self.exec)?.len();
        let ma = self.moments(a)?;
        let mf = self.moments(&fa)?;
        let e_af = self.energy(a, fset)?;
        let e_faf = self.energy(&fa, fset)?;
        let nf = fset.len();
        let mut out = Vec::with_capacity(6);
        for (prefix, m, g, e_cross) in [("", &ma, x, e_af), ("image_", &mf, y, e_faf)] {
            out.push(self.report_only(
                &format!("{prefix}energy_from_threehalves"),
                int(m.e),
                PowerExpr::radical(m.e15.clone())
                    .pow(2, 3)
                    .times(size(g).pow(2, 3))
                    .times(size(na).pow(1, 3)),
                flags.clone(),
            ));
            out.push(self.report_only(
                &format!("{prefix}cross_energy_bound"),
                int(e_cross),
                size(g).times(size(nf).pow(3, 2)),
                flags.clone(),
            ));
            out.push(self.report_only(
                &format!("{prefix}third_energy_bound"),
                int(m.e3),
                size(g).pow(2, 1).times(size(na)).times(log.clone()),
                flags.clone(),
            ));
        }
        // order: A-side bounds then image-side bounds, each (from_threehalves, cross, third)
        Ok(out)
    }

    /// Replays a growth chain step by step. `c` defaults to `f(A)`; it is
    /// ignored for [`Theorem::MixedSum`]. The product variants ignore `f`.
    pub fn theorem(&self, which: Theorem, f: ConvexFn, a: &NumberSet, c: Option<&NumberSet>) -> Result<ChainReport> {
        if a.is_empty() {
            return Err(Error::EmptyInput);
        }
        let f = match which {
            Theorem::ProductDifference | Theorem::ProductSum => ConvexFn::LogLike,
            _ => f,
        };
        require_audit_domain(f, a)?;
        match which {
            Theorem::ImageDifference | Theorem::ProductDifference => self.chain_difference(which, f, a, c),
            Theorem::ImageSum | Theorem::ProductSum => self.chain_sum(which, f, a, c),
            Theorem::MixedSum => self.chain_mixed(f, a),
        }
    }

    /// `(|f(A)+C|, flags)`; with `f = log` and `C = f(A)` this is `|A·A|`.
    fn image_plus_c(&self, f: ConvexFn, a: &NumberSet, c: Option<&NumberSet>) -> Result<(usize, Vec<String>)> {
        let mut flags = Vec::new();
        if f == ConvexFn::LogLike {
            if c.is_some() {
                return Err(Error::LogEvaluation);
            }
            require_positive(a)?;
            return Ok((product_set_with(a, a, self.exec)?.len(), flags));
        }
        let fa = apply_fn(f, a)?;
        let c = c.unwrap_or(&fa);
        if c.is_empty() {
            return Err(Error::EmptyInput);
        }
        let (na, nc) = (a.len(), c.len());
        if 2 * na < nc || 2 * nc < na {
            flags.push(format!("|A|≈|C| violated: |A|={na}, |C|={nc}"));
        }
        Ok((sumset_with(&fa, c, self.exec)?.len(), flags))
    }

    fn finish(
        &self,
        which: Theorem,
        f: ConvexFn,
        a: &NumberSet,
        mut steps: Vec<AuditReport>,
        final_expr: PowerExpr,
        consistency: PowerExpr,
        flags: Vec<String>,
    ) -> Result<ChainReport> {
        let consistency = consistency.simplified();
        let verdict = match compare(&int(1), &consistency)? {
            Ordering::Greater => Verdict::Fail,
            _ => Verdict::Pass,
        };
        let ce = (verdict == Verdict::Fail).then(|| dump(&[("A", a)]));
        steps.push(self.report("chain_consistency", int(1), consistency, verdict, Vec::new(), ce));
        Ok(self.chain(which, f, a, steps, final_expr, flags))
    }

    fn chain(
        &self,
        which: Theorem,
        f: ConvexFn,
        a: &NumberSet,
        steps: Vec<AuditReport>,
        final_expr: PowerExpr,
        hypothesis_flags: Vec<String>,
    ) -> ChainReport {
        let passed = steps.iter().all(AuditReport::passed);
        ChainReport {
            theorem: which,
            f: f.to_string(),
            set_size: a.len(),
            steps,
            final_exponent_ratio: final_expr.clone().simplified().decimal(self.digits),
            final_expr,
            hypothesis_flags,
            passed,
        }
    }

    /// Ratio expression of a REPORT_ONLY step, `lhs / rhs`.
    fn step_ratio(step: &AuditReport) -> PowerExpr {
        step.lhs.clone().over(step.rhs.clone())
    }

    fn chain_difference(&self, which: Theorem, f: ConvexFn, a: &NumberSet, c: Option<&NumberSet>) -> Result<ChainReport> {
        let (x, mut flags) = self.image_plus_c(f, a, c)?;
        let log = log_factor(a.len(), &mut flags);
        let na = a.len();
        let diff = difference_set_with(a, a, self.exec)?;
        let nd = diff.len();
        let m = self.moments(a)?;
        let final_expr = size(x)
            .pow(6, 1)
            .times(size(nd).pow(5, 1))
            .times(log.clone().pow(2, 1))
            .over(size(na).pow(14, 1));

        let mut steps = vec![self.holder(a)?];
        steps.push(self.lemma_e15_named("threehalves_lemma", a, &a.negate())?);
        let e_ad = self.energy(a, &diff)?;
        steps.push(self.exact(
            "combined_lower_bound",
            size(na).pow(8, 1),
            int(m.e3).times(int(e_ad)).times(size(nd)),
            &[("A", a)],
        )?);
        if steps.iter().any(|s| !s.passed()) {
            return Ok(self.chain(which, f, a, steps, final_expr, flags));
        }
        let third = self.report_only(
            "third_energy_bound",
            int(m.e3),
            size(x).pow(2, 1).times(size(na)).times(log.clone()),
            flags.clone(),
        );
        let cross = self.report_only(
            "cross_energy_bound[F=A-A]",
            int(e_ad),
            size(x).times(size(nd).pow(3, 2)),
            flags.clone(),
        );
        let consistency = final_expr
            .clone()
            .times(Self::step_ratio(&third).times(Self::step_ratio(&cross)).pow(2, 1));
        steps.push(third);
        steps.push(cross);
        self.finish(which, f, a, steps, final_expr, consistency, flags)
    }

    fn chain_sum(&self, which: Theorem, f: ConvexFn, a: &NumberSet, c: Option<&NumberSet>) -> Result<ChainReport> {
        let (x, mut flags) = self.image_plus_c(f, a, c)?;
        let log = log_factor(a.len(), &mut flags);
        let na = a.len();
        let sum = sumset_with(a, a, self.exec)?;
        let ns = sum.len();
        let m = self.moments(a)?;
        let final_expr = size(x)
            .pow(10, 1)
            .times(size(ns).pow(9, 1))
            .times(log.clone().pow(2, 1))
            .over(size(na).pow(24, 1));

        let mut steps = self.cauchy_schwarz(a, &CsMode::Sum)?;
        let from_e15 = self.report_only(
            "energy_from_threehalves",
            int(m.e),
            PowerExpr::radical(m.e15.clone())
                .pow(2, 3)
                .times(size(x).pow(2, 3))
                .times(size(na).pow(1, 3)),
            flags.clone(),
        );
        steps.push(from_e15.clone());
        steps.push(self.lemma_e15_named("threehalves_lemma", a, a)?);
        if steps.iter().any(|s| !s.passed()) {
            return Ok(self.chain(which, f, a, steps, final_expr, flags));
        }
        let e_as = self.energy(a, &sum)?;
        let third = self.report_only(
            "third_energy_bound",
            int(m.e3),
            size(x).pow(2, 1).times(size(na)).times(log.clone()),
            flags.clone(),
        );
        let cross = self.report_only(
            "cross_energy_bound[F=A+A]",
            int(e_as),
            size(x).times(size(ns).pow(3, 2)),
            flags.clone(),
        );
        let r = Self::step_ratio(&from_e15)
            .pow(3, 1)
            .times(Self::step_ratio(&third))
            .times(Self::step_ratio(&cross));
        let consistency = final_expr.clone().times(r.pow(2, 1));
        steps.push(third);
        steps.push(cross);
        self.finish(which, f, a, steps, final_expr, consistency, flags)
    }

    fn chain_mixed(&self, f: ConvexFn, a: &NumberSet) -> Result<ChainReport> {
        if f == ConvexFn::LogLike {
            return Err(Error::LogEvaluation);
        }
        let which = Theorem::MixedSum;
        let mut flags = Vec::new();
        let log = log_factor(a.len(), &mut flags);
        let na = a.len();
        let fa = apply_fn(f, a)?;
        let mixed = sumset_with(a, &fa, self.exec)?;
        let x = mixed.len();
        let final_expr = size(x)
            .times(log.clone().pow(2, 19))
            .over(size(na).pow(24, 19));

        let mut steps = self.cauchy_schwarz(a, &CsMode::Cross(fa.clone()))?;
        let ma = self.moments(a)?;
        let mf = self.moments(&fa)?;
        let from_e15 = |name: &str, m: &Moments| {
            self.report_only(
                name,
                int(m.e),
                PowerExpr::radical(m.e15.clone())
                    .pow(2, 3)
                    .times(size(x).pow(2, 3))
                    .times(size(na).pow(1, 3)),
                flags.clone(),
            )
        };
        let r_a = from_e15("energy_from_threehalves[C=A]", &ma);
        let r_f = from_e15("image_energy_from_threehalves[C=f(A)]", &mf);
        steps.push(r_a.clone());
        steps.push(r_f.clone());
        steps.push(self.lemma_e15_named("threehalves_lemma[B=f(A)]", a, &fa)?);
        steps.push(self.lemma_e15_named("image_threehalves_lemma[B=A]", &fa, a)?);
        if steps.iter().any(|s| !s.passed()) {
            return Ok(self.chain(which, f, a, steps, final_expr, flags));
        }
        let third = |name: &str, m: &Moments| {
            self.report_only(
                name,
                int(m.e3),
                size(x).pow(2, 1).times(size(na)).times(log.clone()),
                flags.clone(),
            )
        };
        let t_a = third("third_energy_bound[C=A]", &ma);
        let t_f = third("image_third_energy_bound[C=f(A)]", &mf);
        let cross = |name: &str, e: u128| {
            self.report_only(name, int(e), size(x).times(size(x).pow(3, 2)), flags.clone())
        };
        let c_a = cross("cross_energy_bound[C=A,F=A+f(A)]", self.energy(a, &mixed)?);
        let c_f = cross("image_cross_energy_bound[C=f(A),F=A+f(A)]", self.energy(&fa, &mixed)?);
        let r = Self::step_ratio(&r_a)
            .pow(3, 1)
            .times(Self::step_ratio(&r_f).pow(3, 1))
            .times(Self::step_ratio(&t_a))
            .times(Self::step_ratio(&t_f))
            .times(Self::step_ratio(&c_a))
            .times(Self::step_ratio(&c_f));
        let consistency = final_expr.clone().pow(19, 1).times(r);
        steps.extend([t_a, t_f, c_a, c_f]);
        self.finish(which, f, a, steps, final_expr, consistency, flags)
    }
}

pub fn check_lemma_e15(a: &NumberSet, b: &NumberSet) -> Result<AuditReport> {
    Auditor::default().lemma_e15(a, b)
}

pub fn check_holder(a: &NumberSet) -> Result<AuditReport> {
    Auditor::default().holder(a)
}

pub fn check_cauchy_schwarz(a: &NumberSet, mode: &CsMode) -> Result<Vec<AuditReport>> {
    Auditor::default().cauchy_schwarz(a, mode)
}

pub fn corollary_e3a_ratios(f: ConvexFn, a: &NumberSet, c: &NumberSet, fset: &NumberSet) -> Result<Vec<AuditReport>> {
    Auditor::default().corollary_ratios(f, a, c, fset)
}

pub fn audit_theorem(which: Theorem, f: ConvexFn, a: &NumberSet, c: Option<&NumberSet>) -> Result<ChainReport> {
    Auditor::default().theorem(which, f, a, c)
}

/// Audits every `(id, set)` input independently; output is sorted by id.
pub fn audit_corpus(
    auditor: &Auditor,
    which: Theorem,
    f: ConvexFn,
    inputs: &[(String, NumberSet)],
) -> Vec<(String, Result<ChainReport>)> {
    let inner = Auditor {
        exec: Exec::Sequential,
        ..*auditor
    };
    let mut out = auditor
        .exec
        .map(inputs, |(id, a)| (id.clone(), inner.theorem(which, f, a, None)));
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}
