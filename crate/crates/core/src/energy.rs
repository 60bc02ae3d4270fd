//! Representation functions and additive energies.
//!
//! `delta_{A,B}(s)` counts ordered pairs with `a - b = s`, `sigma_{A,B}(s)`
//! those with `a + b = s`. The energy `E(A,B)` is the sum of the squares of
//! either one; `E_3` and `E_{3/2}` are the third and three-halves moments of
//! `delta_A`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::radical::RadicalSum;
use crate::scalar::Scalar;
use crate::scaled::{pair_values, Nums, PairOp};
use crate::set::NumberSet;

use num_bigint::BigInt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RepMode {
    Difference,
    Sum,
}

/// Multiplicity map `s -> #{(a, b) : a ∓ b = s}` over the support.
#[derive(Clone, Debug)]
pub struct RepFunction {
    mode: RepMode,
    denom: BigInt,
    keys: Nums,
    counts: Vec<u64>,
    total_pairs: u64,
}

pub fn rep_function(a: &NumberSet, b: &NumberSet, mode: RepMode) -> Result<RepFunction> {
    rep_function_with(a, b, mode, Exec::default())
}

pub fn rep_function_with(a: &NumberSet, b: &NumberSet, mode: RepMode, exec: Exec) -> Result<RepFunction> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput);
    }
    let op = match mode {
        RepMode::Difference => PairOp::Sub,
        RepMode::Sum => PairOp::Add,
    };
    let pv = pair_values(a.as_slice(), b.as_slice(), op, exec);
    let total_pairs = pv.total() as u64;
    let (keys, counts) = pv.grouped();
    Ok(RepFunction {
        mode,
        denom: pv.denom,
        keys,
        counts,
        total_pairs,
    })
}

impl RepFunction {
    pub fn mode(&self) -> RepMode {
        self.mode
    }

    pub fn total_pairs(&self) -> u64 {
        self.total_pairs
    }

    pub fn support_len(&self) -> usize {
        self.counts.len()
    }

    /// Multiplicities in ascending order of the support element.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn multiplicity(&self, s: &Scalar) -> u64 {
        self.keys
            .position(s, &self.denom)
            .map_or(0, |i| self.counts[i])
    }

    pub fn max_multiplicity(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    /// `(s, multiplicity)` in ascending order of `s`.
    pub fn iter(&self) -> impl Iterator<Item = (Scalar, u64)> + '_ {
        (0..self.counts.len()).map(move |i| (self.keys.to_scalar(i, &self.denom), self.counts[i]))
    }

    pub fn support(&self) -> NumberSet {
        NumberSet::from_vec(self.keys.to_scalars(&self.denom))
    }

    pub fn sum_of_squares(&self) -> u128 {
        self.counts.iter().map(|&c| (c as u128) * (c as u128)).sum()
    }

    pub fn sum_of_cubes(&self) -> u128 {
        self.counts.iter().map(|&c| (c as u128).pow(3)).sum()
    }

    pub fn three_halves_moment(&self) -> RadicalSum {
        let mut r = RadicalSum::zero();
        for &c in &self.counts {
            r.add_three_halves(c);
        }
        r
    }
}

/// Number of support elements with multiplicity at least `tau`.
pub fn level_set_count(r: &RepFunction, tau: u64) -> Result<usize> {
    if tau < 1 {
        return Err(Error::InvalidTau);
    }
    Ok(r.counts.iter().filter(|&&c| c >= tau).count())
}

/// Support points with multiplicity in `[lower, 2 * lower)`, `lower = 2^j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicBand {
    pub j: u32,
    pub lower: u64,
    pub count: u64,
    pub mass: u64,
}

/// Dyadic bands anchored at 1, in increasing `j`; empty bands are omitted.
pub fn dyadic_profile(r: &RepFunction) -> Vec<DyadicBand> {
    let mut bands: Vec<DyadicBand> = Vec::new();
    for &c in &r.counts {
        let j = 63 - c.leading_zeros();
        if bands.len() <= j as usize {
            bands.extend((bands.len() as u32..=j).map(|j| DyadicBand {
                j,
                lower: 1 << j,
                count: 0,
                mass: 0,
            }));
        }
        let band = &mut bands[j as usize];
        band.count += 1;
        band.mass += c;
    }
    bands.retain(|b| b.count > 0);
    bands
}

/// `E(A,B) = sum_s delta_{A,B}(s)^2`.
pub fn energy(a: &NumberSet, b: &NumberSet) -> Result<u128> {
    energy_with(a, b, Exec::default())
}

pub fn energy_with(a: &NumberSet, b: &NumberSet, exec: Exec) -> Result<u128> {
    Ok(rep_function_with(a, b, RepMode::Difference, exec)?.sum_of_squares())
}

/// `E(A,B) = sum_s sigma_{A,B}(s)^2`.
pub fn energy_via_sums(a: &NumberSet, b: &NumberSet) -> Result<u128> {
    Ok(rep_function(a, b, RepMode::Sum)?.sum_of_squares())
}

/// `E(A,B) = sum_s delta_A(s) delta_B(s)`.
pub fn energy_via_autocorrelation(a: &NumberSet, b: &NumberSet) -> Result<u128> {
    let da: Vec<(Scalar, u64)> = rep_function(a, a, RepMode::Difference)?.iter().collect();
    let db: Vec<(Scalar, u64)> = rep_function(b, b, RepMode::Difference)?.iter().collect();
    let (mut i, mut j, mut total) = (0, 0, 0u128);
    while i < da.len() && j < db.len() {
        match da[i].0.cmp(&db[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                total += da[i].1 as u128 * db[j].1 as u128;
                i += 1;
                j += 1;
            }
        }
    }
    Ok(total)
}

/// `E_3(A) = sum_s delta_A(s)^3`.
pub fn energy_third(a: &NumberSet) -> Result<u128> {
    Ok(rep_function(a, a, RepMode::Difference)?.sum_of_cubes())
}

/// `E_{3/2}(A) = sum_s delta_A(s)^{3/2}`, exactly.
pub fn energy_threehalves(a: &NumberSet) -> Result<RadicalSum> {
    Ok(rep_function(a, a, RepMode::Difference)?.three_halves_moment())
}

mod decimal_u128 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u128, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u128, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

mod decimal_u64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u64, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// The three energy moments of one set. Integers serialize as decimal
/// strings; `E15` as `{radicand: coefficient}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnergyReport {
    #[serde(rename = "E", with = "decimal_u128")]
    pub e: u128,
    #[serde(rename = "E3", with = "decimal_u128")]
    pub e3: u128,
    #[serde(rename = "E15")]
    pub e15: RadicalSum,
    #[serde(rename = "maxMult", with = "decimal_u64")]
    pub max_mult: u64,
}

pub fn energy_report(a: &NumberSet) -> Result<EnergyReport> {
    energy_report_with(a, Exec::default())
}

pub fn energy_report_with(a: &NumberSet, exec: Exec) -> Result<EnergyReport> {
    let d = rep_function_with(a, a, RepMode::Difference, exec)?;
    Ok(EnergyReport {
        e: d.sum_of_squares(),
        e3: d.sum_of_cubes(),
        e15: d.three_halves_moment(),
        max_mult: d.max_multiplicity(),
    })
}
