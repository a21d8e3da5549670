//! Exact rational convolution of weighted lattice risks.
//!
//! All arithmetic in this module is exact: atom probabilities are big-integer
//! rationals and no floating point enters any mass computation. A weighted
//! sum `Σ θᵢ·Xᵢ` of lattice-valued risks with rational weights lives on the
//! lattice `ℤ/q` with `q` the least common multiple of the scaled-value
//! denominators. Truncating every marginal at `truncate_at` leaves an exactly
//! tracked tail mass `1 − Π P(Xᵢ ≤ truncate_at)`, which turns every survival
//! query into a rigorous two-sided enclosure.
//!
//! Atoms above a query cap can be pooled without losing exactness for
//! queries at or below the cap: pooled mass is guaranteed to exceed any such
//! query point. This keeps atom counts small when the truncation point is
//! large, which is what drives the enclosure width.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::io::Write;

use crate::dist::Risk;
use crate::error::{Error, Result};
use crate::onebasket::PortfolioSpec;
use crate::rational::{floor_int, lcm_bigint, rat_u64, to_f64, Rat};

/// Pairwise-product budget for one convolution call.
const MAX_PAIR_PRODUCTS: u64 = 50_000_000;
/// Per-marginal atom budget.
const MAX_MARGINAL_ATOMS: u64 = 4_000_000;

/// Brute-force oracle guards.
const ORACLE_MAX_N: usize = 4;
const ORACLE_MAX_TRUNCATE: u64 = 1_000;

/// Exact pmf of a weighted sum on the lattice `ℤ/q`, conditioned on every
/// marginal lying at or below the truncation point.
///
/// Invariant: `Σ atoms + above_cap + tail_mass = 1` exactly. In uncapped
/// mode `above_cap = 0` and the atoms are the complete conditional pmf.
#[derive(Debug, Clone)]
pub struct LatticePmf {
    scale_denominator: BigInt,
    atoms: BTreeMap<i64, Rat>,
    above_cap: Rat,
    cap: Option<Rat>,
    tail_mass: Rat,
}

/// Exact two-sided enclosure of a survival probability.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundedSurvival {
    pub lower: Rat,
    pub upper: Rat,
}

impl BoundedSurvival {
    pub fn lower_f64(&self) -> f64 {
        to_f64(&self.lower)
    }

    pub fn upper_f64(&self) -> f64 {
        to_f64(&self.upper)
    }

    pub fn width(&self) -> Rat {
        &self.upper - &self.lower
    }

    pub fn contains(&self, p: &Rat) -> bool {
        self.lower <= *p && *p <= self.upper
    }
}

impl LatticePmf {
    pub fn scale_denominator(&self) -> &BigInt {
        &self.scale_denominator
    }

    pub fn tail_mass(&self) -> &Rat {
        &self.tail_mass
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    /// Probability mass at an exact lattice value, if an atom sits there.
    pub fn atom_at(&self, value: &Rat) -> Option<&Rat> {
        let scaled = value * Rat::from_integer(self.scale_denominator.clone());
        if !scaled.denom().is_one() {
            return None;
        }
        self.atoms.get(&scaled.to_integer().to_i64()?)
    }

    /// Iterate `(value, probability)` in ascending value order.
    pub fn iter_atoms(&self) -> impl Iterator<Item = (Rat, &Rat)> + '_ {
        self.atoms.iter().map(|(k, p)| {
            (
                Rat::new(BigInt::from(*k), self.scale_denominator.clone()),
                p,
            )
        })
    }

    /// Exact enclosure of `P(Σ θᵢXᵢ > x)`: the lower bound sums retained
    /// mass strictly above `x`, the upper bound adds the truncation tail.
    pub fn survival_bounds(&self, x: &Rat) -> Result<BoundedSurvival> {
        if let Some(cap) = &self.cap {
            if x > cap {
                return Err(Error::QueryBeyondCap {
                    x: to_f64(x),
                    cap: to_f64(cap),
                });
            }
        }
        let threshold = floor_int(&(x * Rat::from_integer(self.scale_denominator.clone())));
        let mut lower = self.above_cap.clone();
        if let Some(t) = threshold.to_i64() {
            for (_, p) in self.atoms.range(t.saturating_add(1)..) {
                lower += p;
            }
        }
        let upper = &lower + &self.tail_mass;
        Ok(BoundedSurvival { lower, upper })
    }

    /// Total retained mass (atoms plus pooled above-cap mass).
    pub fn retained_mass(&self) -> Rat {
        self.atoms.values().cloned().sum::<Rat>() + &self.above_cap
    }

    /// Debug CSV dump: `index,value,numerator,denominator`. Not a stable format.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "index,value,prob_numerator,prob_denominator")?;
        for (k, p) in &self.atoms {
            let value = Rat::new(BigInt::from(*k), self.scale_denominator.clone());
            writeln!(w, "{},{},{},{}", k, to_f64(&value), p.numer(), p.denom())?;
        }
        Ok(())
    }
}

/// One marginal, already scaled by its weight, split into retained atoms,
/// pooled above-cap mass, and truncation tail.
struct ScaledMarginal {
    atoms: Vec<(Rat, Rat)>,
    above: Rat,
    tail: Rat,
}

/// Exact pmf of `Σ θᵢ·Xᵢ` restricted to every `Xᵢ ≤ truncate_at`.
///
/// `cap` limits the retained atom range: atoms of the sum strictly above the
/// cap are pooled, keeping survival queries at points `≤ cap` exact while
/// bounding the atom count. `None` retains everything (the full conditional
/// pmf), which is only tractable for small truncation points.
pub fn weighted_sum_pmf(
    risks: &[Risk],
    weights: &[Rat],
    truncate_at: u64,
    cap: Option<&Rat>,
) -> Result<LatticePmf> {
    if risks.is_empty() || risks.len() != weights.len() {
        return Err(Error::InvalidWeights(format!(
            "{} risks with {} weights",
            risks.len(),
            weights.len()
        )));
    }
    for w in weights {
        if !w.is_positive() {
            return Err(Error::InvalidWeights(
                "convolution weights must be positive rationals".into(),
            ));
        }
    }
    let truncate = rat_u64(truncate_at);

    // Pooling margin: a pooled partial sum can later shrink by at most the
    // total negative support, so retain atoms up to cap + margin.
    let effective_cap = match cap {
        Some(c) => {
            let mut margin = Rat::zero();
            for (risk, w) in risks.iter().zip(weights) {
                let smin = risk.support_min_exact().ok_or_else(|| {
                    Error::ExactnessRequired(format!("{risk:?} has no exact support minimum"))
                })?;
                let scaled = w * smin;
                if scaled.is_negative() {
                    margin -= scaled;
                }
            }
            Some(c + margin)
        }
        None => None,
    };

    let mut marginals = Vec::with_capacity(risks.len());
    for (risk, w) in risks.iter().zip(weights) {
        marginals.push(scaled_marginal(risk, w, &truncate, effective_cap.as_ref())?);
    }

    // Ascending support size keeps intermediate atom counts small.
    let mut order: Vec<usize> = (0..marginals.len()).collect();
    order.sort_by_key(|&i| (marginals[i].atoms.len(), i));

    let q = marginals
        .iter()
        .flat_map(|m| m.atoms.iter())
        .fold(BigInt::one(), |acc, (v, _)| lcm_bigint(&acc, v.denom()));

    let first = &marginals[order[0]];
    let mut acc_atoms = index_atoms(&first.atoms, &q)?;
    let mut acc_above = first.above.clone();
    let cap_index: Option<BigInt> = effective_cap
        .as_ref()
        .map(|c| floor_int(&(c * Rat::from_integer(q.clone()))));
    let mut cost: u64 = 0;

    for &i in &order[1..] {
        let m = &marginals[i];
        let b_atoms = index_atoms(&m.atoms, &q)?;
        cost = cost.saturating_add((acc_atoms.len() as u64).saturating_mul(b_atoms.len() as u64));
        if cost > MAX_PAIR_PRODUCTS {
            return Err(Error::ConvolutionTooLarge(cost));
        }

        let a_mass: Rat = acc_atoms.values().cloned().sum();
        let b_mass: Rat = b_atoms.values().cloned().sum();
        let mut next: BTreeMap<i64, Rat> = BTreeMap::new();
        let mut next_above = &acc_above * (&b_mass + &m.above) + &a_mass * &m.above;

        let cap_i64 = cap_index.as_ref().and_then(|c| c.to_i64());
        for (&ka, pa) in &acc_atoms {
            for (&kb, pb) in &b_atoms {
                let k = ka.checked_add(kb).ok_or(Error::ConvolutionTooLarge(cost))?;
                let p = pa * pb;
                let keep = match (&cap_index, cap_i64) {
                    (None, _) => true,
                    (Some(_), Some(c)) => k <= c,
                    (Some(_), None) => true,
                };
                if keep {
                    *next.entry(k).or_insert_with(Rat::zero) += p;
                } else {
                    next_above += p;
                }
            }
        }
        acc_atoms = next;
        acc_above = next_above;
    }

    let kept: Rat = marginals
        .iter()
        .map(|m| Rat::one() - &m.tail)
        .product::<Rat>();
    let tail_mass = Rat::one() - kept;

    Ok(LatticePmf {
        scale_denominator: q,
        atoms: acc_atoms,
        above_cap: acc_above,
        cap: cap.cloned(),
        tail_mass,
    })
}

fn scaled_marginal(
    risk: &Risk,
    weight: &Rat,
    truncate: &Rat,
    effective_cap: Option<&Rat>,
) -> Result<ScaledMarginal> {
    if !risk.lattice_exact() {
        return Err(Error::ExactnessRequired(format!(
            "{risk:?} is not lattice-exact"
        )));
    }
    // Enumeration stops at the smaller of the truncation point and the cap
    // translated into this risk's own value space.
    let value_cutoff = match effective_cap {
        Some(c) => {
            let own = c / weight;
            if own < *truncate {
                own
            } else {
                truncate.clone()
            }
        }
        None => truncate.clone(),
    };
    let (raw_atoms, tail_at_cutoff) = risk.exact_atoms(&value_cutoff).ok_or_else(|| {
        Error::ExactnessRequired(format!("{risk:?} cannot enumerate exact atoms"))
    })?;
    if raw_atoms.len() as u64 > MAX_MARGINAL_ATOMS {
        return Err(Error::ConvolutionTooLarge(raw_atoms.len() as u64));
    }
    let tail = risk
        .survival_exact(truncate)
        .ok_or_else(|| Error::ExactnessRequired(format!("{risk:?} has no exact survival")))?;
    // Mass between the cap cutoff and the truncation point is pooled.
    let above = &tail_at_cutoff - &tail;
    let atoms: Vec<(Rat, Rat)> = raw_atoms
        .into_iter()
        .map(|(v, p)| (weight * v, p))
        .collect();
    Ok(ScaledMarginal { atoms, above, tail })
}

fn index_atoms(atoms: &[(Rat, Rat)], q: &BigInt) -> Result<BTreeMap<i64, Rat>> {
    let mut out = BTreeMap::new();
    for (v, p) in atoms {
        let scaled = v * Rat::from_integer(q.clone());
        debug_assert!(scaled.denom().is_one());
        let k = scaled
            .to_integer()
            .to_i64()
            .ok_or(Error::ConvolutionTooLarge(u64::MAX))?;
        *out.entry(k).or_insert_with(Rat::zero) += p;
    }
    Ok(out)
}

/// Independent oracle: `P(Σ θᵢXᵢ > x, all Xᵢ ≤ truncate_at)` by direct
/// nested enumeration over the joint support. Probabilities come from
/// survival differences, not pmf formulas, and no convolution code runs.
pub fn brute_force_survival(
    portfolio: &PortfolioSpec,
    x: &Rat,
    truncate_at: u64,
) -> Result<BoundedSurvival> {
    let n = portfolio.n();
    if n > ORACLE_MAX_N || truncate_at > ORACLE_MAX_TRUNCATE {
        return Err(Error::BruteForceGuard {
            max_n: ORACLE_MAX_N,
            max_truncate: ORACLE_MAX_TRUNCATE,
        });
    }
    let weights = portfolio
        .weights()
        .exact()
        .ok_or_else(|| Error::ExactnessRequired("oracle needs exact rational weights".into()))?;
    let truncate = rat_u64(truncate_at);

    // Per-risk support values and survival-difference probabilities.
    let mut supports: Vec<Vec<(Rat, Rat)>> = Vec::with_capacity(n);
    let mut kept_mass: Vec<Rat> = Vec::with_capacity(n);
    for risk in portfolio.risks() {
        let values = risk.support_points_upto(&truncate).ok_or_else(|| {
            Error::ExactnessRequired(format!("{risk:?} cannot enumerate support"))
        })?;
        let mut pairs = Vec::with_capacity(values.len());
        let mut prev: Option<Rat> = None;
        for v in values {
            // Survival is constant between consecutive support points, so the
            // value just left of v is the survival at any point in the gap.
            let left = match &prev {
                Some(p) => (p + &v) / rat_u64(2),
                None => &v - Rat::one(),
            };
            let p = risk.survival_exact(&left).unwrap() - risk.survival_exact(&v).unwrap();
            pairs.push((v.clone(), p));
            prev = Some(v);
        }
        kept_mass.push(Rat::one() - risk.survival_exact(&truncate).unwrap());
        supports.push(pairs);
    }

    // Suffix products of kept mass and suffix maxima of scaled values enable
    // exact subtree short-circuits.
    let scaled: Vec<Vec<(Rat, Rat)>> = supports
        .iter()
        .zip(weights)
        .map(|(pairs, w)| pairs.iter().map(|(v, p)| (w * v, p.clone())).collect())
        .collect();
    let mut suffix_mass = vec![Rat::one(); n + 1];
    for i in (0..n).rev() {
        suffix_mass[i] = &suffix_mass[i + 1] * &kept_mass[i];
    }
    let mut suffix_max = vec![Rat::zero(); n + 1];
    for i in (0..n).rev() {
        let m = scaled[i]
            .last()
            .map(|(v, _)| v.clone())
            .unwrap_or_else(Rat::zero);
        suffix_max[i] = &suffix_max[i + 1] + m;
    }

    fn recurse(
        level: usize,
        partial_sum: &Rat,
        partial_prob: &Rat,
        x: &Rat,
        scaled: &[Vec<(Rat, Rat)>],
        suffix_mass: &[Rat],
        suffix_max: &[Rat],
        acc: &mut Rat,
    ) {
        if partial_sum > x {
            // Every completion exceeds x (remaining values cannot decrease
            // the sum when supports are positive; negative-shift supports are
            // handled by the suffix-max pruning never firing below).
            *acc += partial_prob * &suffix_mass[level];
            return;
        }
        if level == scaled.len() {
            return;
        }
        if &(partial_sum + &suffix_max[level]) <= x {
            return;
        }
        for (v, p) in &scaled[level] {
            let sum = partial_sum + v;
            let prob = partial_prob * p;
            recurse(
                level + 1,
                &sum,
                &prob,
                x,
                scaled,
                suffix_mass,
                suffix_max,
                acc,
            );
        }
    }

    // With negative supports the early-exit above is unsound, so only use it
    // when every scaled support is non-negative.
    let any_negative = scaled
        .iter()
        .any(|pairs| pairs.first().is_some_and(|(v, _)| v.is_negative()));

    let mut lower = Rat::zero();
    if any_negative {
        enumerate_plain(&scaled, x, &mut lower);
    } else {
        recurse(
            0,
            &Rat::zero(),
            &Rat::one(),
            x,
            &scaled,
            &suffix_mass,
            &suffix_max,
            &mut lower,
        );
    }

    let tail = Rat::one() - suffix_mass[0].clone();
    let upper = &lower + &tail;
    Ok(BoundedSurvival { lower, upper })
}

/// Pruning-free joint enumeration, used when negative supports are present.
fn enumerate_plain(scaled: &[Vec<(Rat, Rat)>], x: &Rat, acc: &mut Rat) {
    fn walk(level: usize, sum: &Rat, prob: &Rat, x: &Rat, scaled: &[Vec<(Rat, Rat)>], acc: &mut Rat) {
        if level == scaled.len() {
            if sum > x {
                *acc += prob;
            }
            return;
        }
        for (v, p) in &scaled[level] {
            walk(level + 1, &(sum + v), &(prob * p), x, scaled, acc);
        }
    }
    walk(0, &Rat::zero(), &Rat::one(), x, scaled, acc);
}
