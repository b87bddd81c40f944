//! Correlation density functions and their product rule.
//!
//! Given a joint observable `J` of `A₁, A₂` and a state `μ`, three measures
//! on the product outcome space compete: `A₁μ ⊠ A₂μ` (the correlation-free
//! reference), `(A₁⊠A₂)μ` (the product joint observable measured at `μ`),
//! and `Jμ`. The classical density compares the second to the first and
//! captures correlation coded in the mixedness of the state; the
//! entanglement density compares the third to the second and captures
//! correlation introduced by the choice of a non-product joint; the total
//! density compares the third to the first and factors exactly as
//! `total = classical · entanglement` wherever the entanglement density is
//! defined.
//!
//! In the finite setting the required absolute continuities always hold
//! (the marginals of each numerator are `A₁μ` and `A₂μ`), so a failure
//! inside this module is a library bug, not a user error, and panics.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::measures::{Density, Point, ProbabilityMeasure, Side};
use crate::observables::{JointObservable, Observable};

/// Which of the two departures — classical and entanglement — are present
/// at a given `(J, μ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// `Jμ = (A₁⊠A₂)μ = A₁μ⊠A₂μ`: no correlation of either kind.
    Independent,
    /// Only the state carries correlation: `(A₁⊠A₂)μ ≠ A₁μ⊠A₂μ`, `Jμ = (A₁⊠A₂)μ`.
    ClassicalOnly,
    /// Only the pairing carries correlation: `Jμ ≠ (A₁⊠A₂)μ`, `(A₁⊠A₂)μ = A₁μ⊠A₂μ`.
    EntangledOnly,
    /// Both departures present.
    Both,
}

impl Classification {
    fn from_flags(classical: bool, entangled: bool) -> Self {
        match (classical, entangled) {
            (false, false) => Classification::Independent,
            (true, false) => Classification::ClassicalOnly,
            (false, true) => Classification::EntangledOnly,
            (true, true) => Classification::Both,
        }
    }

    pub fn is_classical(&self) -> bool {
        matches!(self, Classification::ClassicalOnly | Classification::Both)
    }

    pub fn is_entangled(&self) -> bool {
        matches!(self, Classification::EntangledOnly | Classification::Both)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Independent => "independent",
            Classification::ClassicalOnly => "classical_only",
            Classification::EntangledOnly => "entangled_only",
            Classification::Both => "both",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Everything `classify` learns about one `(J, μ)` pair: the three measures,
/// the three densities, and the resulting classification.
#[derive(Debug, Clone)]
pub struct CorrelationReport {
    pub state: ProbabilityMeasure,
    pub joint: JointObservable,
    pub classification: Classification,
    /// Density of `(A₁⊠A₂)μ` w.r.t. `A₁μ⊠A₂μ`; constant 1 iff no classical
    /// correlation.
    pub classical: Density,
    /// Density of `Jμ` w.r.t. `(A₁⊠A₂)μ`; constant 1 iff no entanglement.
    pub entanglement: Density,
    /// Density of `Jμ` w.r.t. `A₁μ⊠A₂μ`; the product of the other two on
    /// their common domain.
    pub total: Density,
    /// `A₁μ ⊠ A₂μ`.
    pub outcome_product: ProbabilityMeasure,
    /// `(A₁⊠A₂)μ`.
    pub product_joint_outcome: ProbabilityMeasure,
    /// `Jμ`.
    pub joint_outcome: ProbabilityMeasure,
}

fn density_or_bug(
    numerator: &ProbabilityMeasure,
    reference: &ProbabilityMeasure,
    what: &str,
) -> Density {
    numerator
        .as_measure()
        .radon_nikodym(reference.as_measure())
        .unwrap_or_else(|e| {
            panic!("internal: {what} must exist for finite discrete measures, but: {e}")
        })
}

/// `A₁μ ⊠ A₂μ`: the product of the two outcome measures.
fn outcome_product(j: &JointObservable, mu: &ProbabilityMeasure) -> Result<ProbabilityMeasure> {
    let left = j.left().apply(mu)?;
    let right = j.right().apply(mu)?;
    Ok(left.product(&right))
}

/// `(A₁⊠A₂)μ`: the product joint observable measured at `μ`.
fn product_joint_outcome(
    j: &JointObservable,
    mu: &ProbabilityMeasure,
) -> Result<ProbabilityMeasure> {
    Observable::product_joint(j.left(), j.right())?.apply(mu)
}

/// True iff `A₁` and `A₂` are independent at `μ` relative to `J`, i.e.
/// `Jμ = A₁μ ⊠ A₂μ` as an exact measure equality.
pub fn independent_at(j: &JointObservable, mu: &ProbabilityMeasure) -> Result<bool> {
    Ok(j.apply(mu)? == outcome_product(j, mu)?)
}

/// The classical-correlation density: `(A₁⊠A₂)μ` relative to `A₁μ⊠A₂μ`.
/// Constant 1 exactly when the state introduces no correlation, which in
/// particular holds at every pure state.
pub fn classical_correlation_density(
    a1: &Observable,
    a2: &Observable,
    mu: &ProbabilityMeasure,
) -> Result<Density> {
    let numerator = Observable::product_joint(a1, a2)?.apply(mu)?;
    let reference = a1.apply(mu)?.product(&a2.apply(mu)?);
    Ok(density_or_bug(
        &numerator,
        &reference,
        "the classical-correlation density",
    ))
}

/// The entanglement density: `Jμ` relative to `(A₁⊠A₂)μ`. Constant 1
/// exactly when `J` behaves like the product pairing at `μ`.
pub fn entanglement_density(j: &JointObservable, mu: &ProbabilityMeasure) -> Result<Density> {
    let numerator = j.apply(mu)?;
    let reference = product_joint_outcome(j, mu)?;
    Ok(density_or_bug(
        &numerator,
        &reference,
        "the entanglement density",
    ))
}

/// The total-correlation density: `Jμ` relative to `A₁μ⊠A₂μ`.
pub fn total_correlation_density(
    j: &JointObservable,
    mu: &ProbabilityMeasure,
) -> Result<Density> {
    let numerator = j.apply(mu)?;
    let reference = outcome_product(j, mu)?;
    Ok(density_or_bug(
        &numerator,
        &reference,
        "the total-correlation density",
    ))
}

/// Compute the three measures and three densities at `(J, μ)` and classify
/// the correlation: the classical flag is `(A₁⊠A₂)μ ≠ A₁μ⊠A₂μ`, the
/// entanglement flag is `Jμ ≠ (A₁⊠A₂)μ`.
pub fn classify(j: &JointObservable, mu: &ProbabilityMeasure) -> Result<CorrelationReport> {
    let outcome_product = outcome_product(j, mu)?;
    let product_joint_outcome = product_joint_outcome(j, mu)?;
    let joint_outcome = j.apply(mu)?;

    let classical_flag = product_joint_outcome != outcome_product;
    let entangled_flag = joint_outcome != product_joint_outcome;

    let classical = density_or_bug(
        &product_joint_outcome,
        &outcome_product,
        "the classical-correlation density",
    );
    let entanglement = density_or_bug(
        &joint_outcome,
        &product_joint_outcome,
        "the entanglement density",
    );
    let total = density_or_bug(&joint_outcome, &outcome_product, "the total-correlation density");

    Ok(CorrelationReport {
        state: mu.clone(),
        joint: j.clone(),
        classification: Classification::from_flags(classical_flag, entangled_flag),
        classical,
        entanglement,
        total,
        outcome_product,
        product_joint_outcome,
        joint_outcome,
    })
}

/// The exact ingredients of the classical correlation coefficient
/// `cov/(σ₁σ₂)` of a measure on a product space under given numeric values
/// for the outcomes. The coefficient itself involves a square root, so it is
/// kept as the pair (covariance, σ₁²·σ₂²), both exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrelationCoefficient {
    pub covariance: BigRational,
    /// `σ₁² · σ₂²`; the coefficient is undefined when this vanishes.
    pub variance_product: BigRational,
}

impl CorrelationCoefficient {
    pub fn is_defined(&self) -> bool {
        !self.variance_product.is_zero()
    }

    /// `cov² / (σ₁²σ₂²)`, the square of the coefficient, exact.
    pub fn squared(&self) -> Result<BigRational> {
        if !self.is_defined() {
            return Err(Error::UndefinedCoefficient);
        }
        let cov2 = &self.covariance * &self.covariance;
        Ok(cov2 / &self.variance_product)
    }

    /// Signed decimal approximation `sign(cov)·sqrt(cov²/(σ₁²σ₂²))`.
    pub fn approx(&self) -> Result<f64> {
        let squared = self.squared()?;
        let root = squared.to_f64().unwrap_or(f64::NAN).sqrt();
        Ok(if self.covariance.is_negative() {
            -root
        } else {
            root
        })
    }
}

/// Covariance and variance product of a measure on `Ξ₁×Ξ₂` under total
/// value maps for the two factors. Independence forces covariance 0; the
/// converse fails, which is why this is only a coarse summary of
/// correlation.
pub fn correlation_coefficient(
    nu: &ProbabilityMeasure,
    left_values: &BTreeMap<Point, BigRational>,
    right_values: &BTreeMap<Point, BigRational>,
) -> Result<CorrelationCoefficient> {
    let space = nu.space();
    let (left_space, right_space) = space.factors().ok_or_else(|| Error::NotProductSpace {
        space: space.id().to_string(),
    })?;
    for (factor, values, side) in [
        (left_space, left_values, "left"),
        (right_space, right_values, "right"),
    ] {
        for p in factor.points() {
            if !values.contains_key(p) {
                return Err(Error::Validation {
                    object: format!("{side} value map"),
                    reason: format!("no value for point `{p}`"),
                });
            }
        }
    }

    let moments = |side: Side, values: &BTreeMap<Point, BigRational>| -> (BigRational, BigRational) {
        let marginal = nu.as_measure().marginal(side).expect("space is a product");
        let mut mean = BigRational::zero();
        let mut second = BigRational::zero();
        for (p, w) in marginal.entries() {
            let v = &values[p];
            mean += v * w;
            second += v * v * w;
        }
        let variance = second - &mean * &mean;
        (mean, variance)
    };
    let (mean_left, var_left) = moments(Side::Left, left_values);
    let (mean_right, var_right) = moments(Side::Right, right_values);

    let mut mean_product = BigRational::zero();
    for (p, w) in nu.entries() {
        let (l, r) = p.split().expect("points of a product space are pairs");
        mean_product += &left_values[l] * &right_values[r] * w;
    }

    Ok(CorrelationCoefficient {
        covariance: mean_product - mean_left * mean_right,
        variance_product: var_left * var_right,
    })
}
