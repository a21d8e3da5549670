//! Dominance verdict orchestration.
//!
//! The question is always the same: does the concentrated portfolio's
//! survival stay at or below the diversified portfolio's survival at every
//! threshold? Lattice portfolios get exact interval comparisons backed by
//! rational convolution; continuous ones get seeded Monte Carlo with
//! conservative confidence bounds (statistics can refute but never certify).
//! On top of the two verifiers sit counterexample hunting, the two-sided
//! reinsurance check, transformed iid dominance, convex-order consistency,
//! the threshold-event partition check, and exact desk-scale reproduction of
//! the iid induction claims.

use num_traits::Zero;
use serde::{Serialize, Serializer};
use std::collections::BTreeSet;

use crate::convolve::weighted_sum_pmf;
use crate::dist::{ConvexTransform, Risk};
use crate::error::{Error, Result};
use crate::montecarlo::{
    estimate_convex_gap, estimate_diversified_survival_at, ConvexGapEstimate, ConvexTestFunction,
    DEFAULT_CONFIDENCE,
};
use crate::onebasket::{
    check_onebasket_conditions, concentrated_survival, concentrated_survival_exact, PortfolioSpec,
    WeightVector,
};
use crate::rational::{format_ratio, from_f64_exact, to_f64, Rat};
use crate::subscale::{
    check_theta_subscalable, log_grid, ScalingFactor, SubscalabilityVerdict,
};

/// Outcome of a dominance comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DominanceStatus {
    /// Exact lower bound of the diversified survival meets or exceeds the
    /// concentrated survival at every grid point.
    #[serde(rename = "CERTIFIED_ON_GRID")]
    CertifiedOnGrid,
    #[serde(rename = "REFUTED")]
    Refuted,
    /// No grid point contradicts dominance at the stated confidence.
    #[serde(rename = "STATISTICALLY_CONSISTENT")]
    StatisticallyConsistent,
    #[serde(rename = "UNDECIDED")]
    Undecided,
}

impl DominanceStatus {
    /// Process exit code contract: 0 pass, 2 refuted, 3 undecided.
    pub fn exit_code(&self) -> i32 {
        match self {
            DominanceStatus::CertifiedOnGrid | DominanceStatus::StatisticallyConsistent => 0,
            DominanceStatus::Refuted => 2,
            DominanceStatus::Undecided => 3,
        }
    }
}

fn serialize_opt_rat<S: Serializer>(v: &Option<Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_some(&format_ratio(r)),
        None => s.serialize_none(),
    }
}

/// A located dominance violation.
#[derive(Debug, Clone, Serialize)]
pub struct Refutation {
    pub x: f64,
    /// Exact shortfall `concentrated − diversified_upper` at the witness
    /// (exact mode only).
    #[serde(serialize_with = "serialize_opt_rat")]
    pub exact_gap: Option<Rat>,
    /// Standardized exceedance of the concentrated survival over the
    /// estimate (statistical mode only).
    pub z_score: Option<f64>,
}

/// Grid-wise dominance comparison result.
#[derive(Debug, Clone, Serialize)]
pub struct DominanceVerdict {
    pub status: DominanceStatus,
    pub grid: Vec<f64>,
    pub refutation: Option<Refutation>,
    /// Provenance of the bounds used (truncation, samples, confidence).
    pub notes: String,
}

impl DominanceVerdict {
    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }
}

/// Options for the exact verifier.
#[derive(Debug, Clone)]
pub struct ExactOptions {
    /// Truncation doubling stops at this bound.
    pub truncate_budget: u64,
    /// When set, truncation also doubles until the enclosure width (the
    /// exact tail mass) drops to the target.
    pub width_target: Option<f64>,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions {
            truncate_budget: 1 << 26,
            width_target: None,
        }
    }
}

/// Default exact grid: the union of survival breakpoints of both portfolios
/// within `[support floor, max_x]`. Both sides are right-continuous step
/// functions that only change at these points, so certifying on this grid
/// certifies the whole interval up to `max_x`.
pub fn default_exact_grid(
    portfolio: &PortfolioSpec,
    max_x: f64,
    truncate_at: u64,
) -> Result<Vec<Rat>> {
    let cap = from_f64_exact(max_x)
        .ok_or_else(|| Error::PreconditionFailed(format!("bad grid max {max_x}")))?;
    let weights = portfolio
        .weights()
        .exact()
        .ok_or_else(|| Error::ExactnessRequired("exact grid needs rational weights".into()))?;
    let pmf = weighted_sum_pmf(portfolio.risks(), weights, truncate_at, Some(&cap))?;
    let mut points: BTreeSet<Rat> = BTreeSet::new();
    points.insert(Rat::zero());
    for (v, _) in pmf.iter_atoms() {
        if v <= cap {
            points.insert(v);
        }
    }
    for risk in portfolio.risks() {
        if let Some(bps) = risk.step_breakpoints(&cap) {
            for b in bps {
                if b <= cap {
                    points.insert(b);
                }
            }
        }
    }
    Ok(points.into_iter().collect())
}

/// Default statistical grid: log-spaced points from the smallest support
/// minimum up to `max_x`.
pub fn default_mc_grid(portfolio: &PortfolioSpec, max_x: f64, points: usize) -> Vec<f64> {
    let smin = portfolio
        .risks()
        .iter()
        .map(|r| r.support_min())
        .fold(f64::INFINITY, f64::min);
    let lo = if smin > 1e-3 { smin } else { 1e-3 };
    let mut grid = log_grid(lo.min(max_x / 2.0), max_x, 1);
    let n = points.max(2);
    let (llo, lhi) = (grid[0].ln(), max_x.ln());
    grid = (0..n)
        .map(|i| (llo + (lhi - llo) * i as f64 / (n - 1) as f64).exp())
        .collect();
    grid
}

/// Exact dominance comparison on a rational grid.
///
/// At each grid point the exact enclosure of the diversified survival is
/// compared against the exact concentrated survival. An upper bound below
/// the concentrated value refutes dominance outright (smallest witness
/// reported, with the exact gap); enclosures that straddle trigger automatic
/// truncation doubling before the point is declared undecided.
pub fn verify_dominance_exact(
    portfolio: &PortfolioSpec,
    grid: &[Rat],
    truncate_at: u64,
    opts: &ExactOptions,
) -> Result<DominanceVerdict> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let weights = portfolio
        .weights()
        .exact()
        .ok_or_else(|| Error::ExactnessRequired("exact mode needs rational weights".into()))?
        .to_vec();
    let mut points: Vec<Rat> = grid.to_vec();
    points.sort();
    points.dedup();
    let cap = points.last().cloned().expect("non-empty grid");

    let concentrated: Vec<Rat> = points
        .iter()
        .map(|x| {
            concentrated_survival_exact(portfolio, x).ok_or_else(|| {
                Error::ExactnessRequired("exact mode needs lattice-exact risks".into())
            })
        })
        .collect::<Result<_>>()?;

    // Below the weighted support minimum the diversified sum exceeds x almost
    // surely, so the point is supported regardless of truncation.
    let mins: Vec<Rat> = portfolio
        .risks()
        .iter()
        .map(|risk| {
            risk.support_min_exact().ok_or_else(|| {
                Error::ExactnessRequired("exact mode needs lattice-exact risks".into())
            })
        })
        .collect::<Result<_>>()?;
    let support_sum: Rat = mins.iter().zip(&weights).map(|(m, w)| m * w).sum();

    let mut truncate = truncate_at.max(2);
    loop {
        let pmf = weighted_sum_pmf(portfolio.risks(), &weights, truncate, Some(&cap))?;
        // Any outcome with component i above the truncation point has a
        // weighted sum above wᵢ·T plus the other components' minimum
        // contribution. Queries at or below that force threshold count the
        // tail mass fully, which makes the survival value exact there.
        let truncate_rat = crate::rational::rat_u64(truncate);
        let force_threshold = (0..weights.len())
            .map(|i| {
                let mut v = &weights[i] * &truncate_rat;
                for (j, (m, w)) in mins.iter().zip(&weights).enumerate() {
                    if j != i {
                        v += m * w;
                    }
                }
                v
            })
            .min()
            .expect("portfolio is non-empty");

        let mut straddle: Option<f64> = None;
        let mut refutation: Option<Refutation> = None;
        let mut all_supported = true;
        for (x, conc) in points.iter().zip(&concentrated) {
            if *x < support_sum {
                continue;
            }
            let bounds = pmf.survival_bounds(x)?;
            let forced = *x <= force_threshold;
            if bounds.upper < *conc {
                refutation = Some(Refutation {
                    x: to_f64(x),
                    exact_gap: Some(conc - &bounds.upper),
                    z_score: None,
                });
                all_supported = false;
                break;
            }
            let effective_lower = if forced { &bounds.upper } else { &bounds.lower };
            if effective_lower < conc {
                all_supported = false;
                if straddle.is_none() {
                    straddle = Some(to_f64(x));
                }
            }
        }
        let width_ok = match opts.width_target {
            Some(w) => to_f64(pmf.tail_mass()) <= w,
            None => true,
        };
        let notes = format!(
            "exact enclosure; truncate_at={truncate}; tail_mass={:.3e}",
            to_f64(pmf.tail_mass())
        );
        if let Some(r) = refutation {
            return Ok(DominanceVerdict {
                status: DominanceStatus::Refuted,
                grid: points.iter().map(to_f64).collect(),
                refutation: Some(r),
                notes,
            });
        }
        if all_supported && width_ok {
            return Ok(DominanceVerdict {
                status: DominanceStatus::CertifiedOnGrid,
                grid: points.iter().map(to_f64).collect(),
                refutation: None,
                notes,
            });
        }
        if truncate >= opts.truncate_budget {
            return Ok(DominanceVerdict {
                status: DominanceStatus::Undecided,
                grid: points.iter().map(to_f64).collect(),
                refutation: None,
                notes: format!(
                    "{notes}; enclosure straddles at x={:?} with truncation budget exhausted",
                    straddle
                ),
            });
        }
        truncate = (truncate * 2).min(opts.truncate_budget);
    }
}

/// Statistical dominance comparison: Monte Carlo estimates of the
/// diversified survival against the exact concentrated survival.
///
/// REFUTED when some grid point's upper confidence bound falls below the
/// concentrated survival (reported with a z-score); otherwise the data are
/// consistent with dominance. Sampling never certifies: points where the
/// confidence interval straddles the concentrated value — including exact
/// ties such as the left grid edge, where both survivals equal one — count
/// as consistent, and the strong (lower bound above) count goes in `notes`.
pub fn verify_dominance_mc(
    portfolio: &PortfolioSpec,
    grid: &[f64],
    samples: u64,
    seed: u64,
    confidence: f64,
) -> Result<DominanceVerdict> {
    if samples < 10_000 {
        return Err(Error::PreconditionFailed(format!(
            "statistical verification needs at least 10^4 samples, got {samples}"
        )));
    }
    let estimates = estimate_diversified_survival_at(portfolio, grid, samples, seed, confidence)?;
    let mut refutation: Option<Refutation> = None;
    let mut strong = 0usize;
    for (x, est) in grid.iter().zip(&estimates) {
        let conc = concentrated_survival(portfolio, *x);
        if est.upper() < conc {
            let p = est.point_estimate;
            let se = (p * (1.0 - p) / samples as f64).sqrt().max(1e-12);
            let z = (conc - p) / se;
            if refutation.is_none() {
                refutation = Some(Refutation {
                    x: *x,
                    exact_gap: None,
                    z_score: Some(z),
                });
            }
        } else if est.lower() >= conc {
            strong += 1;
        }
    }
    let notes = format!(
        "monte carlo; samples={samples}; seed={seed}; confidence={confidence}; \
         strong_support={strong}/{} grid points",
        grid.len()
    );
    Ok(match refutation {
        Some(r) => DominanceVerdict {
            status: DominanceStatus::Refuted,
            grid: grid.to_vec(),
            refutation: Some(r),
            notes,
        },
        None => DominanceVerdict {
            status: DominanceStatus::StatisticallyConsistent,
            grid: grid.to_vec(),
            refutation: None,
            notes,
        },
    })
}

/// Counterexample search strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStrategy {
    /// Exact scan of the breakpoint grid in ascending order.
    BreakpointScan,
    /// Statistical coarse scan followed by bisection refinement.
    Bisection,
}

/// Search budget and instrumentation for counterexample hunting.
#[derive(Debug, Clone)]
pub struct HuntBudget {
    pub max_x: f64,
    pub truncate_at: u64,
    pub samples: u64,
    pub seed: u64,
    pub confidence: f64,
}

impl Default for HuntBudget {
    fn default() -> Self {
        HuntBudget {
            max_x: 100.0,
            truncate_at: 10_000,
            samples: 200_000,
            seed: 0x0B5E55ED,
            confidence: DEFAULT_CONFIDENCE,
        }
    }
}

/// Smallest-x witness where the concentrated survival provably (exact mode)
/// or significantly (statistical mode) exceeds the diversified survival.
pub fn hunt_counterexample(
    portfolio: &PortfolioSpec,
    strategy: SearchStrategy,
    budget: &HuntBudget,
) -> Result<Option<Refutation>> {
    if !(budget.max_x > 0.0) || budget.samples == 0 {
        return Err(Error::PreconditionFailed("empty hunt budget".into()));
    }
    match strategy {
        SearchStrategy::BreakpointScan => {
            let grid = default_exact_grid(portfolio, budget.max_x, budget.truncate_at)?;
            let verdict = verify_dominance_exact(
                portfolio,
                &grid,
                budget.truncate_at,
                &ExactOptions::default(),
            )?;
            Ok(verdict.refutation)
        }
        SearchStrategy::Bisection => {
            let grid = default_mc_grid(portfolio, budget.max_x, 64);
            let verdict = verify_dominance_mc(
                portfolio,
                &grid,
                budget.samples,
                budget.seed,
                budget.confidence,
            )?;
            let coarse = match verdict.refutation {
                Some(r) => r,
                None => return Ok(None),
            };
            // Bisect between the last non-refuting grid point and the coarse
            // witness; every probe is a fresh (deterministically reseeded)
            // estimate, and the final witness must itself refute.
            let mut lo = grid
                .iter()
                .filter(|x| **x < coarse.x)
                .cloned()
                .fold(0.0f64, f64::max);
            let mut hi = coarse.x;
            let mut best = coarse;
            for round in 0..12 {
                if hi - lo <= 1e-3 * hi.abs().max(1.0) {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                let est = estimate_diversified_survival_at(
                    portfolio,
                    &[mid],
                    budget.samples,
                    budget.seed ^ (round + 1),
                    budget.confidence,
                )?;
                let conc = concentrated_survival(portfolio, mid);
                if est[0].upper() < conc {
                    let p = est[0].point_estimate;
                    let se = (p * (1.0 - p) / budget.samples as f64).sqrt().max(1e-12);
                    best = Refutation {
                        x: mid,
                        exact_gap: None,
                        z_score: Some((conc - p) / se),
                    };
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            Ok(Some(best))
        }
    }
}

/// Two-sided randomized-reinsurance check: the ceded share θ and the
/// retained share 1−θ must both be subscalable for the randomized scheme to
/// dominate for both parties.
pub fn reinsurance_check(
    dist: &Risk,
    theta: &ScalingFactor,
    horizon: f64,
) -> Result<(SubscalabilityVerdict, SubscalabilityVerdict)> {
    let ceded = check_theta_subscalable(dist, theta, horizon)?;
    let retained = check_theta_subscalable(dist, &theta.complement(), horizon)?;
    Ok((ceded, retained))
}

/// Verification mode for transformed iid dominance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    Exact,
    MonteCarlo,
}

/// Budget for [`iid_transform_dominance`].
#[derive(Debug, Clone)]
pub struct TransformBudget {
    pub horizon: f64,
    pub truncate_at: u64,
    pub grid_max: f64,
    pub samples: u64,
    pub seed: u64,
}

impl Default for TransformBudget {
    fn default() -> Self {
        TransformBudget {
            horizon: 1_000.0,
            truncate_at: 10_000,
            grid_max: 50.0,
            samples: 200_000,
            seed: 0x0B5E55ED,
        }
    }
}

/// Check that dominance survives an increasing convex transform of an iid
/// portfolio: when `X ≤st Σθᵢ·Xᵢ` holds, so must `f(X) ≤st Σθᵢ·f(Xᵢ)`.
///
/// The base relation is a checked precondition (certified conditions, or
/// exact grid certification for lattice risks). Shifts with negative offsets
/// produce supports below zero; the exact grid simply extends below zero in
/// that case and the comparison proceeds cell by cell as usual.
pub fn iid_transform_dominance(
    dist: &Risk,
    weights: &WeightVector,
    f: &ConvexTransform,
    mode: VerifyMode,
    budget: &TransformBudget,
) -> Result<DominanceVerdict> {
    let base = PortfolioSpec::new(vec![dist.clone(); weights.len()], weights.clone())?;
    let conditions = check_onebasket_conditions(&base, budget.horizon)?;
    if !conditions.all_satisfied {
        // Fall back to direct certification of the base relation.
        let certified = dist.lattice_exact()
            && matches!(
                verify_dominance_exact(
                    &base,
                    &default_exact_grid(&base, budget.grid_max, budget.truncate_at)?,
                    budget.truncate_at,
                    &ExactOptions::default(),
                )?
                .status,
                DominanceStatus::CertifiedOnGrid
            );
        if !certified {
            return Err(Error::PreconditionFailed(
                "base iid dominance relation is neither certified nor exactly verified".into(),
            ));
        }
    }

    let transformed = Risk::transformed(dist.clone(), f.clone())?;
    let portfolio = PortfolioSpec::new(vec![transformed.clone(); weights.len()], weights.clone())?;
    match mode {
        VerifyMode::Exact => {
            if !transformed.lattice_exact() || weights.exact().is_none() {
                return Err(Error::ExactnessRequired(
                    "exact transform verification needs a lattice-preserving transform".into(),
                ));
            }
            let grid = default_exact_grid(&portfolio, budget.grid_max, budget.truncate_at)?;
            verify_dominance_exact(
                &portfolio,
                &grid,
                budget.truncate_at,
                &ExactOptions::default(),
            )
        }
        VerifyMode::MonteCarlo => {
            let grid = default_mc_grid(&portfolio, budget.grid_max.max(1.0), 64);
            verify_dominance_mc(
                &portfolio,
                &grid,
                budget.samples.max(10_000),
                budget.seed,
                DEFAULT_CONFIDENCE,
            )
        }
    }
}

/// Per-test-function outcome of the convex-order consistency check.
#[derive(Debug, Clone, Serialize)]
pub struct ConvexOrderOutcome {
    pub function: ConvexTestFunction,
    pub gap: ConvexGapEstimate,
    /// Consistent iff the paired difference interval for
    /// `E[c(P_D)] − E[c(P_C)]` does not lie strictly above zero.
    pub consistent: bool,
}

/// Paired-sampling convex-order check across a list of test functions.
pub fn convex_order_check(
    portfolio: &PortfolioSpec,
    cs: &[ConvexTestFunction],
    samples: u64,
    seed: u64,
    clip_cap: f64,
    confidence: f64,
) -> Result<Vec<ConvexOrderOutcome>> {
    cs.iter()
        .map(|c| {
            let gap = estimate_convex_gap(portfolio, c, samples, seed, clip_cap, confidence)?;
            let consistent = gap.difference.hoeffding_interval.0 <= 0.0;
            Ok(ConvexOrderOutcome {
                function: *c,
                gap,
                consistent,
            })
        })
        .collect()
}

/// A finite fixture for the threshold-event partition property.
///
/// Thresholds are indexed by nonempty subsets of `{0, …, n−1}` (bitmask − 1)
/// and must satisfy `u_μ ≥ u_λ` whenever `μ ⊂ λ`. The joint support is the
/// n-fold product of `axis_values`.
#[derive(Debug, Clone)]
pub struct PartitionFixture {
    pub n: usize,
    pub thresholds: Vec<f64>,
    pub axis_values: Vec<f64>,
}

impl PartitionFixture {
    pub fn new(n: usize, thresholds: Vec<f64>, axis_values: Vec<f64>) -> Result<Self> {
        if n == 0 || n > 16 {
            return Err(Error::PreconditionFailed("partition fixture needs 1 <= n <= 16".into()));
        }
        let masks = (1usize << n) - 1;
        if thresholds.len() != masks {
            return Err(Error::PreconditionFailed(format!(
                "need {masks} thresholds (one per nonempty subset), got {}",
                thresholds.len()
            )));
        }
        let fixture = PartitionFixture {
            n,
            thresholds,
            axis_values,
        };
        fixture.check_monotone()?;
        Ok(fixture)
    }

    fn threshold(&self, mask: usize) -> f64 {
        self.thresholds[mask - 1]
    }

    fn check_monotone(&self) -> Result<()> {
        let full = 1usize << self.n;
        for mu in 1..full {
            for lambda in 1..full {
                if mu != lambda && (mu & lambda) == mu && self.threshold(mu) < self.threshold(lambda)
                {
                    return Err(Error::ThresholdsNotMonotone {
                        smaller: format!("{mu:b}"),
                        larger: format!("{lambda:b}"),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Exhaustively verify that the events "μ is exactly the maximal subset
/// whose components all exceed their threshold" partition the outcome space:
/// every joint outcome must land in exactly one such event (the empty set
/// catches outcomes exceeding no threshold family).
pub fn partition_property_check(fixture: &PartitionFixture) -> Result<bool> {
    let n = fixture.n;
    let full = 1usize << n;
    let axis = &fixture.axis_values;
    if axis.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut outcome = vec![0usize; n];
    loop {
        // Membership of A_mu(u_mu) for each nonempty mu.
        let mut hits = 0usize;
        for mu in 1..full {
            let u = fixture.threshold(mu);
            let a_mu = (0..n).all(|i| mu & (1 << i) == 0 || axis[outcome[i]] > u);
            if a_mu {
                // B_mu additionally requires that no strict superset fires.
                let b_mu = ((mu + 1)..full)
                    .filter(|l| l & mu == mu)
                    .all(|l| !(0..n).all(|i| l & (1 << i) == 0 || axis[outcome[i]] > fixture.threshold(l)));
                if b_mu {
                    hits += 1;
                }
            }
        }
        // The empty set fires iff no A_mu does.
        let any_a = (1..full).any(|mu| {
            (0..n).all(|i| mu & (1 << i) == 0 || axis[outcome[i]] > fixture.threshold(mu))
        });
        if !any_a {
            hits += 1;
        }
        if hits != 1 {
            return Ok(false);
        }
        // Next outcome in the product space.
        let mut carry = true;
        for slot in outcome.iter_mut() {
            *slot += 1;
            if *slot == axis.len() {
                *slot = 0;
            } else {
                carry = false;
                break;
            }
        }
        if carry {
            break;
        }
    }
    Ok(true)
}

/// One verified case of the iid induction reproductions.
#[derive(Debug, Clone, Serialize)]
pub struct InductionCase {
    pub label: String,
    pub n: usize,
    pub status: DominanceStatus,
    pub max_width: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct InductionReport {
    pub cases: Vec<InductionCase>,
    pub all_certified: bool,
}

/// Exact desk-scale certification of `X ≤st X̄ₙ`:
///
/// * discrete Pareto for n = 2..n_max on the breakpoint grid in
///   `[0, grid_max]`, truncation adaptive until the enclosure width meets
///   `width_target`;
/// * the St. Petersburg lottery for n ∈ {2, 4} (and 8 when requested) on the
///   dyadic breakpoint grid;
/// * the two-block convolution-closure step used by the induction (weights
///   `(⌊n/2⌋/n, (n−⌊n/2⌋)/n)` over two iid risks), checked directly.
pub fn reproduce_inductions(
    n_max: usize,
    grid_max: f64,
    width_target: f64,
    include_st_petersburg_eight: bool,
) -> Result<InductionReport> {
    if !(2..=6).contains(&n_max) {
        return Err(Error::PreconditionFailed(
            "induction reproduction is guarded to 2 <= n_max <= 6".into(),
        ));
    }
    let mut cases = Vec::new();
    let opts = ExactOptions {
        truncate_budget: 1 << 26,
        width_target: Some(width_target),
    };

    for n in 2..=n_max {
        let portfolio = PortfolioSpec::iid(Risk::DiscretePareto, n)?;
        let grid = default_exact_grid(&portfolio, grid_max, 1_000)?;
        let verdict = verify_dominance_exact(&portfolio, &grid, 1_000, &opts)?;
        cases.push(InductionCase {
            label: format!("discrete-pareto-average-n{n}"),
            n,
            status: verdict.status,
            max_width: width_from_notes(&verdict.notes),
        });
    }

    let mut st_ns = vec![2usize, 4];
    if include_st_petersburg_eight {
        st_ns.push(8);
    }
    let st_opts = ExactOptions {
        truncate_budget: 1 << 26,
        width_target: Some(1e-3),
    };
    for n in st_ns {
        let portfolio = PortfolioSpec::iid(Risk::StPetersburg, n)?;
        let grid = default_exact_grid(&portfolio, 1024.0, 1 << 12)?;
        let verdict = verify_dominance_exact(&portfolio, &grid, 1 << 12, &st_opts)?;
        cases.push(InductionCase {
            label: format!("st-petersburg-average-n{n}"),
            n,
            status: verdict.status,
            max_width: width_from_notes(&verdict.notes),
        });
    }

    // Convolution-closure step: the mixed two-block portfolio with weights
    // (m/n, (n-m)/n) must itself be dominated by the pair average.
    for n in 4..=n_max {
        let m = n / 2;
        let weights = WeightVector::from_rationals(vec![
            Rat::new((m as i64).into(), (n as i64).into()),
            Rat::new(((n - m) as i64).into(), (n as i64).into()),
        ])?;
        let portfolio = PortfolioSpec::new(vec![Risk::DiscretePareto; 2], weights)?;
        let grid = default_exact_grid(&portfolio, grid_max, 1_000)?;
        let verdict = verify_dominance_exact(&portfolio, &grid, 1_000, &opts)?;
        cases.push(InductionCase {
            label: format!("two-block-split-n{n}"),
            n,
            status: verdict.status,
            max_width: width_from_notes(&verdict.notes),
        });
    }

    let all_certified = cases
        .iter()
        .all(|c| c.status == DominanceStatus::CertifiedOnGrid);
    Ok(InductionReport {
        cases,
        all_certified,
    })
}

fn width_from_notes(notes: &str) -> f64 {
    notes
        .split("tail_mass=")
        .nth(1)
        .and_then(|s| s.split(|c: char| c == ';' || c.is_whitespace()).next())
        .and_then(|s| s.parse().ok())
        .unwrap_or(f64::NAN)
}

/// Quadrature oracle for the survival of the sum of two iid finite-mean
/// Pareto risks: `P(X₁ + X₂ > s)` via Simpson integration of
/// `∫ f(x)·F(s−x) dx`. Test support for statistical refutation checks.
pub fn pareto_pair_sum_survival_oracle(alpha: f64, rho: f64, s: f64) -> f64 {
    if s <= 2.0 * rho {
        return 1.0;
    }
    let f = |x: f64| alpha * rho.powf(alpha) * x.powf(-alpha - 1.0);
    let cdf = |y: f64| {
        if y < rho {
            0.0
        } else {
            1.0 - (rho / y).powf(alpha)
        }
    };
    let (lo, hi) = (rho, s - rho);
    let n = 40_000;
    let h = (hi - lo) / n as f64;
    let mut acc = 0.0;
    for i in 0..n {
        let a = lo + i as f64 * h;
        let b = a + h;
        let m = 0.5 * (a + b);
        acc += (f(a) * cdf(s - a) + 4.0 * f(m) * cdf(s - m) + f(b) * cdf(s - b)) * h / 6.0;
    }
    1.0 - acc
}
