//! Portfolio-level machinery: weight vectors on the open simplex, subset
//! weights, the per-(risk, subset-weight) condition report, the global
//! threshold `t(θ)` and the region `ℛ(θ)`.
//!
//! The dominance conditions quantify over every risk index `i` and every
//! strict nonempty subset `μ ⊊ [n]` containing `i`; the full index set is
//! excluded because its subset weight would be 1, outside the open interval.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeSet;

use crate::dist::Risk;
use crate::error::{Error, Result};
use crate::rational::{to_f64, Rat};
use crate::subscale::{
    check_theta_subscalable, r_region, t_threshold, RegionReport, ScalingFactor,
    SubscalabilityVerdict, Threshold,
};

/// Subset enumeration is 2^n; anything larger than this is refused.
pub const MAX_RISKS: usize = 20;

const WEIGHT_SUM_TOL: f64 = 1e-12;

/// A weight vector in the open simplex: all entries strictly positive,
/// summing to one (exactly in rational mode, renormalized in binary64 mode).
#[derive(Debug, Clone)]
pub struct WeightVector {
    values: Vec<f64>,
    exact: Option<Vec<Rat>>,
    approximate: bool,
}

impl WeightVector {
    /// Exact rational weights; must be positive and sum to exactly one.
    pub fn from_rationals(weights: Vec<Rat>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::InvalidWeights("need at least two weights".into()));
        }
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::InvalidWeights(
                "every weight must be strictly positive".into(),
            ));
        }
        let total: Rat = weights.iter().cloned().sum();
        if !total.is_one() {
            return Err(Error::InvalidWeights(format!(
                "weights must sum to 1 exactly, got {}",
                total
            )));
        }
        Ok(WeightVector {
            values: weights.iter().map(to_f64).collect(),
            exact: Some(weights),
            approximate: false,
        })
    }

    /// Binary64 weights; must sum to one within 1e-12, then renormalized.
    /// The result is flagged approximate: knife-edge membership claims are
    /// unavailable for it.
    pub fn from_f64s(weights: Vec<f64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::InvalidWeights("need at least two weights".into()));
        }
        if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidWeights(
                "every weight must be strictly positive".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidWeights(format!(
                "weights must sum to 1 within {WEIGHT_SUM_TOL}, got {total}"
            )));
        }
        Ok(WeightVector {
            values: weights.iter().map(|w| w / total).collect(),
            exact: None,
            approximate: true,
        })
    }

    /// Equal weights `1/n`, exact.
    pub fn equal(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidWeights("need at least two weights".into()));
        }
        Self::from_rationals(vec![Rat::new(1.into(), (n as i64).into()); n])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn exact(&self) -> Option<&[Rat]> {
        self.exact.as_deref()
    }

    pub fn is_approximate(&self) -> bool {
        self.approximate
    }

    /// The weight of component `i` as a scaling factor.
    pub fn component(&self, i: usize) -> ScalingFactor {
        match &self.exact {
            Some(rs) => ScalingFactor::from_ratio(rs[i].clone()).expect("simplex weight"),
            None => ScalingFactor::from_f64(self.values[i]).expect("simplex weight"),
        }
    }
}

/// A portfolio: `n ≥ 2` mutually independent risks plus simplex weights.
#[derive(Debug, Clone)]
pub struct PortfolioSpec {
    risks: Vec<Risk>,
    weights: WeightVector,
}

impl PortfolioSpec {
    pub fn new(risks: Vec<Risk>, weights: WeightVector) -> Result<Self> {
        if risks.len() != weights.len() {
            return Err(Error::InvalidWeights(format!(
                "{} risks but {} weights",
                risks.len(),
                weights.len()
            )));
        }
        Ok(PortfolioSpec { risks, weights })
    }

    /// n iid copies of one risk with equal weights.
    pub fn iid(risk: Risk, n: usize) -> Result<Self> {
        Self::new(vec![risk; n], WeightVector::equal(n)?)
    }

    pub fn n(&self) -> usize {
        self.risks.len()
    }

    pub fn risks(&self) -> &[Risk] {
        &self.risks
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }
}

/// Deduplicated subset weights `θ_μ` per risk: for risk `i`, the set of
/// `Σ_{j∈μ} θ_j` over all nonempty strict subsets `μ ⊊ [n]` with `i ∈ μ`.
pub fn subset_weights(weights: &WeightVector) -> Result<Vec<Vec<ScalingFactor>>> {
    let n = weights.len();
    if n > MAX_RISKS {
        return Err(Error::TooManyRisks { n, cap: MAX_RISKS });
    }
    match weights.exact() {
        Some(exact) => {
            let mut per_risk: Vec<BTreeSet<Rat>> = vec![BTreeSet::new(); n];
            for mask in 1u32..((1u32 << n) - 1) {
                let mut sum = Rat::zero();
                for (j, w) in exact.iter().enumerate() {
                    if mask & (1 << j) != 0 {
                        sum += w;
                    }
                }
                for (j, set) in per_risk.iter_mut().enumerate() {
                    if mask & (1 << j) != 0 {
                        set.insert(sum.clone());
                    }
                }
            }
            Ok(per_risk
                .into_iter()
                .map(|set| {
                    set.into_iter()
                        .map(|r| ScalingFactor::from_ratio(r).expect("strict subset weight"))
                        .collect()
                })
                .collect())
        }
        None => {
            let values = weights.values();
            let mut per_risk: Vec<BTreeSet<u64>> = vec![BTreeSet::new(); n];
            for mask in 1u32..((1u32 << n) - 1) {
                let sum: f64 = values
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| mask & (1 << j) != 0)
                    .map(|(_, w)| w)
                    .sum();
                for (j, set) in per_risk.iter_mut().enumerate() {
                    if mask & (1 << j) != 0 {
                        set.insert(sum.to_bits());
                    }
                }
            }
            Ok(per_risk
                .into_iter()
                .map(|set| {
                    set.into_iter()
                        .map(|bits| {
                            ScalingFactor::from_f64(f64::from_bits(bits))
                                .expect("strict subset weight")
                        })
                        .collect()
                })
                .collect())
        }
    }
}

/// One row of the condition report: risk index, subset weight, verdict.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionEntry {
    pub risk_index: usize,
    pub theta_mu: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_mu_exact: Option<String>,
    pub verdict: SubscalabilityVerdict,
}

/// Verdict table for the dominance conditions of a portfolio.
///
/// `all_satisfied` is true only when every entry is CERTIFIED: UNDECIDED
/// entries block satisfaction (a finite scan cannot stand in for a claim
/// about all x ≥ 0) but are reported distinctly from refutations.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub entries: Vec<ConditionEntry>,
    pub all_satisfied: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_entry: Option<FailingEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FailingEntry {
    pub risk_index: usize,
    pub theta_mu: f64,
    pub witness_x: f64,
}

/// Evaluate the dominance condition for every (risk, subset weight) pair.
///
/// Entries are independent and evaluated concurrently; assembly is a
/// deterministic ordered reduction (ascending risk index, then θ_μ).
pub fn check_onebasket_conditions(
    portfolio: &PortfolioSpec,
    horizon: f64,
) -> Result<ConditionReport> {
    let per_risk = subset_weights(portfolio.weights())?;
    let mut jobs: Vec<(usize, ScalingFactor)> = Vec::new();
    for (i, thetas) in per_risk.into_iter().enumerate() {
        for theta in thetas {
            jobs.push((i, theta));
        }
    }
    let entries: Vec<ConditionEntry> = jobs
        .into_par_iter()
        .map(|(i, theta)| {
            let verdict = check_theta_subscalable(&portfolio.risks()[i], &theta, horizon)?;
            Ok(ConditionEntry {
                risk_index: i,
                theta_mu: theta.value(),
                theta_mu_exact: theta.exact().map(crate::rational::format_ratio),
                verdict,
            })
        })
        .collect::<Result<_>>()?;

    let all_satisfied = entries.iter().all(|e| e.verdict.is_certified());
    let failing_entry = entries
        .iter()
        .filter(|e| e.verdict.is_refuted())
        .min_by(|a, b| {
            a.verdict
                .witness_x
                .partial_cmp(&b.verdict.witness_x)
                .unwrap()
        })
        .map(|e| FailingEntry {
            risk_index: e.risk_index,
            theta_mu: e.theta_mu,
            witness_x: e.verdict.witness_x.unwrap_or(f64::NAN),
        });
    Ok(ConditionReport {
        entries,
        all_satisfied,
        failing_entry,
    })
}

/// The global threshold `t(θ)`: minimum of the per-entry first-failure
/// points. Strictly positive; `BeyondHorizon` when every entry holds up to
/// the horizon.
pub fn global_threshold(portfolio: &PortfolioSpec, horizon: f64) -> Result<Threshold> {
    let per_risk = subset_weights(portfolio.weights())?;
    let mut best: Option<f64> = None;
    for (i, thetas) in per_risk.into_iter().enumerate() {
        for theta in thetas {
            if let Threshold::FailsAt(t) = t_threshold(&portfolio.risks()[i], &theta, horizon)? {
                best = Some(match best {
                    Some(b) => b.min(t),
                    None => t,
                });
            }
        }
    }
    Ok(match best {
        Some(t) => Threshold::FailsAt(t),
        None => Threshold::BeyondHorizon(horizon),
    })
}

/// The region `ℛ(θ)`: intersection of `r_i(θ_μ)` over all condition pairs.
/// Always contains `[0, t(θ))`.
pub fn region_r(portfolio: &PortfolioSpec, horizon: f64) -> Result<RegionReport> {
    let per_risk = subset_weights(portfolio.weights())?;
    let mut acc: Option<RegionReport> = None;
    for (i, thetas) in per_risk.into_iter().enumerate() {
        for theta in thetas {
            let region = r_region(&portfolio.risks()[i], &theta, horizon)?;
            acc = Some(match acc {
                None => region,
                Some(current) => intersect_regions(&current, &region),
            });
        }
    }
    acc.ok_or_else(|| Error::PreconditionFailed("portfolio has no condition pairs".into()))
}

fn intersect_regions(a: &RegionReport, b: &RegionReport) -> RegionReport {
    let mut intervals = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.intervals.len() && j < b.intervals.len() {
        let (alo, ahi) = a.intervals[i];
        let (blo, bhi) = b.intervals[j];
        let lo = alo.max(blo);
        let hi = ahi.min(bhi);
        if lo < hi {
            intervals.push((lo, hi));
        }
        if ahi <= bhi {
            i += 1;
        } else {
            j += 1;
        }
    }
    RegionReport {
        intervals,
        complete: a.complete && b.complete,
    }
}

/// Survival of the concentrated portfolio: `Σ θᵢ·F̄ᵢ(x)`.
pub fn concentrated_survival(portfolio: &PortfolioSpec, x: f64) -> f64 {
    portfolio
        .risks()
        .iter()
        .zip(portfolio.weights().values())
        .map(|(r, w)| w * r.survival(x))
        .sum()
}

/// Exact concentrated survival; needs exact weights and lattice-exact risks.
pub fn concentrated_survival_exact(portfolio: &PortfolioSpec, x: &Rat) -> Option<Rat> {
    let weights = portfolio.weights().exact()?;
    let mut total = Rat::zero();
    for (r, w) in portfolio.risks().iter().zip(weights) {
        total += w * r.survival_exact(x)?;
    }
    Some(total)
}
