//! Catalog of risk distributions.
//!
//! Every risk is positive (support in `[0, ∞)`) unless it was shifted by a
//! convex transform. A risk exposes its survival function `F̄(x) = P(X > x)`
//! in binary64 always, and exactly (as a rational) when the distribution is a
//! right-continuous step function on a known lattice. Samplers are
//! inverse-transform and take the random stream explicitly, so all catalog
//! values are immutable and freely shareable across workers.

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::rational::{floor_int, from_f64_exact, rat_int, Rat};

/// Whether the mean of a risk is finite, decided analytically per family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeanFiniteness {
    Finite,
    Infinite,
    Unknown,
}

/// An increasing convex function used to transform risks.
///
/// Piecewise-linear data must start at `x = 0`, have non-negative slopes
/// (increasing) and non-decreasing slopes (convex). Plateaus are allowed; the
/// generalized inverse is taken right-continuous so transformed survival
/// functions stay right-continuous.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexTransform {
    Identity,
    /// `g(x) = x + a`, convex for any real `a`; anchored only when `a = 0`.
    Shift(Rat),
    /// `g(x) = eˣ − 1`, increasing convex and anchored at zero.
    ExpM1,
    /// Breakpoints `(x, g(x))`; extended past the last point with the last slope.
    PiecewiseLinear(Vec<(Rat, Rat)>),
}

/// Exact generalized inverse of a transform at a query point.
#[derive(Debug, Clone, PartialEq)]
pub enum ExactInverse {
    /// The query lies below the range: no `x` has `g(x) ≤ y`.
    BelowRange,
    Value(Rat),
    /// Every `x` satisfies `g(x) ≤ y` (bounded transform).
    AboveRange,
}

impl ConvexTransform {
    pub fn shift_f64(a: f64) -> Result<Self> {
        let a = from_f64_exact(a).ok_or(Error::InvalidTransform(format!(
            "non-finite shift offset {a}"
        )))?;
        Ok(ConvexTransform::Shift(a))
    }

    /// Build a validated piecewise-linear transform from `(x, y)` breakpoints.
    pub fn piecewise_linear(points: Vec<(Rat, Rat)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidTransform(
                "need at least two breakpoints".into(),
            ));
        }
        if !points[0].0.is_zero() {
            return Err(Error::InvalidTransform(
                "piecewise-linear transform must start at x = 0".into(),
            ));
        }
        let mut prev_slope: Option<Rat> = None;
        for w in points.windows(2) {
            let dx = &w[1].0 - &w[0].0;
            let dy = &w[1].1 - &w[0].1;
            if !dx.is_positive() {
                return Err(Error::InvalidTransform(
                    "breakpoint x-values must be strictly increasing".into(),
                ));
            }
            if dy.is_negative() {
                return Err(Error::InvalidTransform(
                    "slopes must be non-negative (increasing function)".into(),
                ));
            }
            let slope = dy / dx;
            if let Some(p) = &prev_slope {
                if &slope < p {
                    return Err(Error::InvalidTransform(
                        "slopes must be non-decreasing (convex function)".into(),
                    ));
                }
            }
            prev_slope = Some(slope);
        }
        Ok(ConvexTransform::PiecewiseLinear(points))
    }

    /// True iff `g(0) = 0` exactly, as required for subscalability closure.
    pub fn is_anchored(&self) -> bool {
        match self {
            ConvexTransform::Identity | ConvexTransform::ExpM1 => true,
            ConvexTransform::Shift(a) => a.is_zero(),
            ConvexTransform::PiecewiseLinear(pts) => pts[0].1.is_zero(),
        }
    }

    /// True when forward and inverse evaluation stay inside the rationals.
    pub fn preserves_exactness(&self) -> bool {
        !matches!(self, ConvexTransform::ExpM1)
    }

    pub fn apply_f64(&self, x: f64) -> f64 {
        match self {
            ConvexTransform::Identity => x,
            ConvexTransform::Shift(a) => x + a.to_f64().unwrap(),
            ConvexTransform::ExpM1 => x.exp_m1(),
            ConvexTransform::PiecewiseLinear(_) => {
                let xr = match from_f64_exact(x) {
                    Some(v) => v,
                    None => return f64::NAN,
                };
                self.apply_exact(&xr).map(|v| v.to_f64().unwrap()).unwrap()
            }
        }
    }

    pub fn apply_exact(&self, x: &Rat) -> Option<Rat> {
        match self {
            ConvexTransform::Identity => Some(x.clone()),
            ConvexTransform::Shift(a) => Some(x + a),
            ConvexTransform::ExpM1 => None,
            ConvexTransform::PiecewiseLinear(pts) => {
                if pts.len() == 1 {
                    return Some(pts[0].1.clone());
                }
                // Locate the segment containing x; extrapolate final slope.
                let mut i = pts.len() - 1;
                while i > 0 && pts[i].0 > *x {
                    i -= 1;
                }
                let (seg, next) = if i + 1 < pts.len() {
                    (&pts[i], &pts[i + 1])
                } else {
                    (&pts[i - 1], &pts[i])
                };
                let slope = (&next.1 - &seg.1) / (&next.0 - &seg.0);
                Some(&seg.1 + slope * (x - &seg.0))
            }
        }
    }

    /// Right-continuous generalized inverse `sup { x : g(x) ≤ y }` in binary64.
    ///
    /// Returns `-∞` when the query is below the range (survival 1 upstream)
    /// and `+∞` when the transform is bounded by the query (survival 0).
    pub fn inverse_f64(&self, y: f64) -> f64 {
        match self {
            ConvexTransform::Identity => y,
            ConvexTransform::Shift(a) => y - a.to_f64().unwrap(),
            ConvexTransform::ExpM1 => {
                if y <= -1.0 {
                    f64::NEG_INFINITY
                } else {
                    y.ln_1p()
                }
            }
            ConvexTransform::PiecewiseLinear(_) => {
                let yr = match from_f64_exact(y) {
                    Some(v) => v,
                    None => return f64::NAN,
                };
                match self.inverse_exact(&yr).unwrap() {
                    ExactInverse::BelowRange => f64::NEG_INFINITY,
                    ExactInverse::AboveRange => f64::INFINITY,
                    ExactInverse::Value(v) => v.to_f64().unwrap(),
                }
            }
        }
    }

    /// Exact generalized inverse; `None` when the form is not rational.
    pub fn inverse_exact(&self, y: &Rat) -> Option<ExactInverse> {
        match self {
            ConvexTransform::Identity => Some(ExactInverse::Value(y.clone())),
            ConvexTransform::Shift(a) => Some(ExactInverse::Value(y - a)),
            ConvexTransform::ExpM1 => None,
            ConvexTransform::PiecewiseLinear(pts) => {
                if *y < pts[0].1 {
                    return Some(ExactInverse::BelowRange);
                }
                // Largest breakpoint with value <= y.
                let mut i = pts.len() - 1;
                while pts[i].1 > *y {
                    i -= 1;
                }
                if i + 1 < pts.len() {
                    let slope = (&pts[i + 1].1 - &pts[i].1) / (&pts[i + 1].0 - &pts[i].0);
                    // i is the last index with value <= y, so this slope is positive.
                    Some(ExactInverse::Value(&pts[i].0 + (y - &pts[i].1) / slope))
                } else {
                    let last_slope = if pts.len() >= 2 {
                        let j = pts.len() - 2;
                        (&pts[i].1 - &pts[j].1) / (&pts[i].0 - &pts[j].0)
                    } else {
                        Rat::zero()
                    };
                    if last_slope.is_zero() {
                        Some(ExactInverse::AboveRange)
                    } else {
                        Some(ExactInverse::Value(&pts[i].0 + (y - &pts[i].1) / last_slope))
                    }
                }
            }
        }
    }
}

/// A positive risk from the catalog, possibly convex-transformed.
#[derive(Debug, Clone, PartialEq)]
pub enum Risk {
    /// Survival `(ρ/x)^α` for `x ≥ ρ`, 1 otherwise. Infinite mean iff `α ≤ 1`.
    Pareto { alpha: f64, rho: f64 },
    /// Survival `(⌊x⌋ + 2)⁻¹` for `x ≥ 0`; pmf `P(X = k) = 1/((k+1)(k+2))`.
    DiscretePareto,
    /// Payoff `2^m` with probability `2^{-m}`; survival `2^{-⌊log₂ x⌋}` for `x ≥ 2`.
    StPetersburg,
    /// Survival `1 − e^{-1/x}` for `x > 0`, with value 1 at `x = 0`.
    Frechet1,
    /// Survival `1/(x ln x)` for `x ≥ e`, 1 below; infinite mean but nowhere
    /// subscalable.
    LogHarmonic,
    /// Almost surely zero.
    Trivial,
    Transformed {
        base: Box<Risk>,
        transform: ConvexTransform,
    },
}

impl Risk {
    pub fn pareto(alpha: f64, rho: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "shape must be positive",
            });
        }
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::InvalidParameter {
                name: "rho",
                value: rho,
                reason: "scale must be positive",
            });
        }
        Ok(Risk::Pareto { alpha, rho })
    }

    pub fn transformed(base: Risk, transform: ConvexTransform) -> Result<Self> {
        if let ConvexTransform::Identity = transform {
            return Ok(base);
        }
        Ok(Risk::Transformed {
            base: Box::new(base),
            transform,
        })
    }

    /// Essential infimum of the support.
    pub fn support_min(&self) -> f64 {
        match self {
            Risk::Pareto { rho, .. } => *rho,
            Risk::DiscretePareto | Risk::Frechet1 | Risk::Trivial => 0.0,
            Risk::StPetersburg => 2.0,
            Risk::LogHarmonic => std::f64::consts::E,
            Risk::Transformed { base, transform } => transform.apply_f64(base.support_min()),
        }
    }

    /// Exact essential infimum, available for lattice-exact risks.
    pub fn support_min_exact(&self) -> Option<Rat> {
        match self {
            Risk::DiscretePareto | Risk::Trivial => Some(Rat::zero()),
            Risk::StPetersburg => Some(rat_int(2)),
            Risk::Transformed { base, transform } => {
                transform.apply_exact(&base.support_min_exact()?)
            }
            _ => None,
        }
    }

    /// True when the survival function is an exactly evaluable step function.
    pub fn lattice_exact(&self) -> bool {
        match self {
            Risk::DiscretePareto | Risk::StPetersburg | Risk::Trivial => true,
            Risk::Transformed { base, transform } => {
                base.lattice_exact() && transform.preserves_exactness()
            }
            _ => false,
        }
    }

    pub fn mean_finite(&self) -> MeanFiniteness {
        match self {
            Risk::Pareto { alpha, .. } => {
                if *alpha > 1.0 {
                    MeanFiniteness::Finite
                } else {
                    MeanFiniteness::Infinite
                }
            }
            Risk::DiscretePareto | Risk::StPetersburg | Risk::Frechet1 | Risk::LogHarmonic => {
                MeanFiniteness::Infinite
            }
            Risk::Trivial => MeanFiniteness::Finite,
            Risk::Transformed { base, transform } => match transform {
                ConvexTransform::Identity => base.mean_finite(),
                ConvexTransform::Shift(_) => base.mean_finite(),
                ConvexTransform::ExpM1 => match base.mean_finite() {
                    // e^x - 1 >= x on [0, inf), so infinite means stay infinite.
                    MeanFiniteness::Infinite => MeanFiniteness::Infinite,
                    _ => MeanFiniteness::Unknown,
                },
                ConvexTransform::PiecewiseLinear(pts) => {
                    let bounded = pts.len() < 2 || {
                        let j = pts.len() - 2;
                        pts[pts.len() - 1].1 == pts[j].1
                    };
                    if bounded {
                        return MeanFiniteness::Finite;
                    }
                    // Unbounded piecewise-linear growth is linear, so the
                    // transformed mean is finite exactly when the base mean is.
                    base.mean_finite()
                }
            },
        }
    }

    /// Survival function `P(X > x)` in binary64.
    pub fn survival(&self, x: f64) -> f64 {
        match self {
            Risk::Pareto { alpha, rho } => {
                if x < *rho {
                    1.0
                } else {
                    (rho / x).powf(*alpha)
                }
            }
            Risk::DiscretePareto => {
                if x < 0.0 {
                    1.0
                } else {
                    1.0 / (x.floor() + 2.0)
                }
            }
            Risk::StPetersburg => {
                if x < 2.0 {
                    1.0
                } else {
                    (-x.log2().floor()).exp2()
                }
            }
            Risk::Frechet1 => {
                if x < 0.0 {
                    1.0
                } else if x == 0.0 {
                    1.0
                } else {
                    -(-1.0 / x).exp_m1()
                }
            }
            Risk::LogHarmonic => {
                if x < std::f64::consts::E {
                    1.0
                } else {
                    1.0 / (x * x.ln())
                }
            }
            Risk::Trivial => {
                if x < 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Risk::Transformed { base, transform } => {
                let pre = transform.inverse_f64(x);
                if pre == f64::NEG_INFINITY {
                    1.0
                } else if pre == f64::INFINITY {
                    0.0
                } else {
                    base.survival(pre)
                }
            }
        }
    }

    /// Exact survival at a rational point, when the risk is lattice-exact.
    pub fn survival_exact(&self, x: &Rat) -> Option<Rat> {
        match self {
            Risk::DiscretePareto => {
                if x.is_negative() {
                    Some(Rat::one())
                } else {
                    Some(Rat::new(1.into(), floor_int(x) + 2))
                }
            }
            Risk::StPetersburg => {
                let two = rat_int(2);
                if *x < two {
                    Some(Rat::one())
                } else {
                    // Find m with 2^m <= x < 2^(m+1).
                    let mut p = two.clone();
                    while &p * &two <= *x {
                        p *= &two;
                    }
                    Some(p.recip())
                }
            }
            Risk::Trivial => Some(if x.is_negative() { Rat::one() } else { Rat::zero() }),
            Risk::Transformed { base, transform } => match transform.inverse_exact(x)? {
                ExactInverse::BelowRange => Some(Rat::one()),
                ExactInverse::AboveRange => Some(Rat::zero()),
                ExactInverse::Value(v) => base.survival_exact(&v),
            },
            _ => None,
        }
    }

    /// One inverse-transform draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Risk::Pareto { alpha, rho } => {
                let u: f64 = rng.random();
                rho * (1.0 - u).powf(-1.0 / alpha)
            }
            Risk::DiscretePareto => {
                let u: f64 = rng.random();
                // Smallest integer k >= 0 with survival(k) < 1 - u.
                let t = 1.0 / (1.0 - u);
                ((t - 2.0).floor() + 1.0).max(0.0)
            }
            Risk::StPetersburg => {
                let u: f64 = rng.random();
                let s = 1.0 - u;
                let mut m = 1u32;
                while 0.5f64.powi(m as i32) >= s {
                    m += 1;
                }
                2.0f64.powi(m as i32)
            }
            Risk::Frechet1 => {
                let u: f64 = rng.random();
                if u == 0.0 {
                    0.0
                } else {
                    -1.0 / u.ln()
                }
            }
            Risk::LogHarmonic => {
                let u: f64 = rng.random();
                let s = 1.0 - u;
                let e = std::f64::consts::E;
                if s >= 1.0 / e {
                    e
                } else {
                    // Solve x ln x = 1/s for x >= e by Newton iteration.
                    let c = 1.0 / s;
                    let mut x = (c / c.ln().max(1.0)).max(e);
                    for _ in 0..64 {
                        let f = x * x.ln() - c;
                        let step = f / (x.ln() + 1.0);
                        x -= step;
                        if step.abs() <= 1e-13 * x.abs() {
                            break;
                        }
                    }
                    x.max(e)
                }
            }
            Risk::Trivial => 0.0,
            Risk::Transformed { base, transform } => transform.apply_f64(base.sample(rng)),
        }
    }

    /// Atoms `(value, probability)` with value ≤ `cutoff` plus the exact tail
    /// mass `P(X > cutoff)`. `None` when the risk is not exactly enumerable.
    pub fn exact_atoms(&self, cutoff: &Rat) -> Option<(Vec<(Rat, Rat)>, Rat)> {
        match self {
            Risk::Trivial => {
                if cutoff.is_negative() {
                    Some((vec![], Rat::one()))
                } else {
                    Some((vec![(Rat::zero(), Rat::one())], Rat::zero()))
                }
            }
            Risk::DiscretePareto => {
                if cutoff.is_negative() {
                    return Some((vec![], Rat::one()));
                }
                let kmax = floor_int(cutoff).to_u64()?;
                let mut atoms = Vec::with_capacity(kmax as usize + 1);
                for k in 0..=kmax {
                    let p = Rat::new(1.into(), ((k + 1) * (k + 2)).into());
                    atoms.push((Rat::from_integer(k.into()), p));
                }
                Some((atoms, Rat::new(1.into(), (kmax + 2).into())))
            }
            Risk::StPetersburg => {
                let two = rat_int(2);
                if *cutoff < two {
                    return Some((vec![], Rat::one()));
                }
                let mut atoms = Vec::new();
                let mut value = two.clone();
                let mut prob = Rat::new(1.into(), 2.into());
                while value <= *cutoff {
                    atoms.push((value.clone(), prob.clone()));
                    value *= &two;
                    prob /= &two;
                }
                Some((atoms, self.survival_exact(cutoff)?))
            }
            Risk::Transformed { base, transform } => {
                let inv = transform.inverse_exact(cutoff)?;
                let base_cutoff = match inv {
                    ExactInverse::BelowRange => return Some((vec![], Rat::one())),
                    ExactInverse::AboveRange => return None,
                    ExactInverse::Value(v) => v,
                };
                let (base_atoms, tail) = base.exact_atoms(&base_cutoff)?;
                // Plateaus can merge several base atoms onto one value.
                let mut merged: std::collections::BTreeMap<Rat, Rat> =
                    std::collections::BTreeMap::new();
                for (v, p) in base_atoms {
                    let image = transform.apply_exact(&v)?;
                    *merged.entry(image).or_insert_with(Rat::zero) += p;
                }
                Some((merged.into_iter().collect(), tail))
            }
            _ => None,
        }
    }

    /// Support values up to `cutoff`, enumerated directly from the family
    /// definition. Used by the brute-force oracle, which derives probabilities
    /// from survival differences rather than pmf formulas.
    pub fn support_points_upto(&self, cutoff: &Rat) -> Option<Vec<Rat>> {
        match self {
            Risk::Trivial => Some(if cutoff.is_negative() {
                vec![]
            } else {
                vec![Rat::zero()]
            }),
            Risk::DiscretePareto => {
                if cutoff.is_negative() {
                    return Some(vec![]);
                }
                let kmax = floor_int(cutoff).to_u64()?;
                Some((0..=kmax).map(|k| Rat::from_integer(k.into())).collect())
            }
            Risk::StPetersburg => {
                let two = rat_int(2);
                let mut points = Vec::new();
                let mut v = two.clone();
                while v <= *cutoff {
                    points.push(v.clone());
                    v *= &two;
                }
                Some(points)
            }
            Risk::Transformed { base, transform } => {
                let base_cutoff = match transform.inverse_exact(cutoff)? {
                    ExactInverse::BelowRange => return Some(vec![]),
                    ExactInverse::AboveRange => return None,
                    ExactInverse::Value(v) => v,
                };
                let pts = base.support_points_upto(&base_cutoff)?;
                let mut out: Vec<Rat> = Vec::with_capacity(pts.len());
                for v in pts {
                    let image = transform.apply_exact(&v)?;
                    if out.last() != Some(&image) {
                        out.push(image);
                    }
                }
                Some(out)
            }
            _ => None,
        }
    }

    /// Jump locations of the survival function inside `[min, max_x]`, for
    /// step-function risks.
    pub fn step_breakpoints(&self, max_x: &Rat) -> Option<Vec<Rat>> {
        match self {
            Risk::Trivial | Risk::DiscretePareto | Risk::StPetersburg => {
                self.support_points_upto(max_x)
            }
            Risk::Transformed { .. } => self.support_points_upto(max_x),
            _ => None,
        }
    }
}
