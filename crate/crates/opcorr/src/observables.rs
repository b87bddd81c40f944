//! Observables as stochastic kernels over a finite phase space.
//!
//! An observable stores one outcome measure per pure state (its kernel
//! rows); the action on a mixed state is always the affine combination of
//! the rows, which is the defining property of an observable here. Two
//! observables with the same rows are the same observable, so equality is
//! extensional over the kernel and ignores the id.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::measures::{FiniteSpace, Point, ProbabilityMeasure, Side};

/// A stochastic kernel: one probability measure on the outcome space per
/// point of the phase space.
#[derive(Debug, Clone)]
pub struct Observable {
    id: String,
    phase_space: Arc<FiniteSpace>,
    outcome_space: Arc<FiniteSpace>,
    kernel: BTreeMap<Point, ProbabilityMeasure>,
}

impl PartialEq for Observable {
    /// Extensional equality: same spaces and same kernel rows; the id does
    /// not participate.
    fn eq(&self, other: &Self) -> bool {
        self.phase_space == other.phase_space
            && self.outcome_space == other.outcome_space
            && self.kernel == other.kernel
    }
}

impl Eq for Observable {}

impl Observable {
    /// Build an observable from its kernel rows. Every phase point must
    /// have a row and every row must be a probability measure on
    /// `outcome_space`.
    pub fn new(
        id: impl Into<String>,
        phase_space: Arc<FiniteSpace>,
        outcome_space: Arc<FiniteSpace>,
        kernel: BTreeMap<Point, ProbabilityMeasure>,
    ) -> Result<Self> {
        let id = id.into();
        for omega in phase_space.points() {
            let row = kernel.get(omega).ok_or_else(|| Error::Validation {
                object: format!("observable `{id}`"),
                reason: format!("kernel has no row for phase point `{omega}`"),
            })?;
            if row.space().as_ref() != outcome_space.as_ref() {
                return Err(Error::SpaceMismatch {
                    expected: outcome_space.id().to_string(),
                    actual: row.space().id().to_string(),
                });
            }
        }
        for omega in kernel.keys() {
            if !phase_space.contains(omega) {
                return Err(Error::UnknownPoint {
                    space: phase_space.id().to_string(),
                    point: omega.to_string(),
                });
            }
        }
        Ok(Observable {
            id,
            phase_space,
            outcome_space,
            kernel,
        })
    }

    /// An observable whose every row is the same measure.
    pub fn constant(
        id: impl Into<String>,
        phase_space: Arc<FiniteSpace>,
        row: ProbabilityMeasure,
    ) -> Result<Self> {
        let kernel = phase_space
            .points()
            .iter()
            .map(|omega| (omega.clone(), row.clone()))
            .collect();
        let outcome_space = Arc::clone(row.space());
        Observable::new(id, phase_space, outcome_space, kernel)
    }

    /// The classical random variable for `f`: rows are Dirac measures at
    /// `f(ω)`.
    pub fn deterministic(
        id: impl Into<String>,
        phase_space: Arc<FiniteSpace>,
        outcome_space: Arc<FiniteSpace>,
        f: impl Fn(&Point) -> Point,
    ) -> Result<Self> {
        let mut kernel = BTreeMap::new();
        for omega in phase_space.points() {
            let row = ProbabilityMeasure::dirac(Arc::clone(&outcome_space), f(omega))?;
            kernel.insert(omega.clone(), row);
        }
        Observable::new(id, phase_space, outcome_space, kernel)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn phase_space(&self) -> &Arc<FiniteSpace> {
        &self.phase_space
    }

    pub fn outcome_space(&self) -> &Arc<FiniteSpace> {
        &self.outcome_space
    }

    /// The outcome measure at the pure state `δω`.
    pub fn row(&self, omega: &Point) -> Result<&ProbabilityMeasure> {
        self.kernel.get(omega).ok_or_else(|| Error::UnknownPoint {
            space: self.phase_space.id().to_string(),
            point: omega.to_string(),
        })
    }

    pub fn rows(&self) -> impl Iterator<Item = (&Point, &ProbabilityMeasure)> {
        self.kernel.iter()
    }

    /// The outcome measure at an arbitrary state: the affine combination
    /// `Σ_ω μ(ω)·(kernel row at ω)`, computed exactly.
    pub fn apply(&self, state: &ProbabilityMeasure) -> Result<ProbabilityMeasure> {
        if state.space().as_ref() != self.phase_space.as_ref() {
            return Err(Error::SpaceMismatch {
                expected: self.phase_space.id().to_string(),
                actual: state.space().id().to_string(),
            });
        }
        let mut weights: BTreeMap<Point, BigRational> = BTreeMap::new();
        for (omega, mass) in state.entries() {
            let row = self.row(omega)?;
            for (x, w) in row.entries() {
                *weights.entry(x.clone()).or_insert_with(BigRational::zero) += mass * w;
            }
        }
        ProbabilityMeasure::new(Arc::clone(&self.outcome_space), weights)
    }

    /// True iff every kernel row is a Dirac measure, i.e. the observable
    /// shows no dispersion on pure states.
    pub fn is_deterministic(&self) -> bool {
        self.kernel.values().all(ProbabilityMeasure::is_dirac)
    }

    /// The product joint observable `A₁ ⊠ A₂`: its row at `ω` is the
    /// product of the factors' rows at `ω`. It exists for every pair of
    /// observables over a common phase space and is the correlation-free
    /// way of pairing them.
    pub fn product_joint(a1: &Observable, a2: &Observable) -> Result<JointObservable> {
        if a1.phase_space.as_ref() != a2.phase_space.as_ref() {
            return Err(Error::SpaceMismatch {
                expected: a1.phase_space.id().to_string(),
                actual: a2.phase_space.id().to_string(),
            });
        }
        let rows: BTreeMap<Point, ProbabilityMeasure> = a1
            .kernel
            .iter()
            .map(|(omega, row1)| {
                let row2 = &a2.kernel[omega];
                (omega.clone(), row1.product(row2))
            })
            .collect();
        JointObservable::new(
            format!("{}*{}", a1.id, a2.id),
            a1.clone(),
            a2.clone(),
            rows,
        )
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} -> {}",
            self.id,
            self.phase_space.id(),
            self.outcome_space.id()
        )
    }
}

/// An observable into a declared product outcome space together with the
/// two observables it is a joint of. Construction validates, row by row,
/// that the marginals of the joint rows reproduce the factor rows exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointObservable {
    base: Observable,
    left: Observable,
    right: Observable,
}

impl JointObservable {
    /// Wrap explicit rows as a joint observable of `left` and `right`.
    ///
    /// Every row must live on the product of the two outcome spaces and
    /// marginalize exactly to the corresponding rows of `left` and `right`;
    /// otherwise the constructor reports the phase point, the side, and the
    /// two unequal measures.
    pub fn new(
        id: impl Into<String>,
        left: Observable,
        right: Observable,
        rows: BTreeMap<Point, ProbabilityMeasure>,
    ) -> Result<Self> {
        if left.phase_space().as_ref() != right.phase_space().as_ref() {
            return Err(Error::SpaceMismatch {
                expected: left.phase_space().id().to_string(),
                actual: right.phase_space().id().to_string(),
            });
        }
        let product_space =
            FiniteSpace::product(left.outcome_space(), right.outcome_space());
        let base = Observable::new(
            id,
            Arc::clone(left.phase_space()),
            product_space,
            rows,
        )?;
        for (omega, row) in base.rows() {
            for (side, factor) in [(Side::Left, &left), (Side::Right, &right)] {
                let got = row.marginal(side)?;
                let expected = factor.row(omega)?;
                if &got != expected {
                    return Err(Error::MarginalMismatch {
                        omega: omega.to_string(),
                        side: side.to_string(),
                        expected: expected.to_string(),
                        actual: got.to_string(),
                    });
                }
            }
        }
        Ok(JointObservable { base, left, right })
    }

    pub fn id(&self) -> &str {
        self.base.id()
    }

    /// The underlying observable into the product outcome space.
    pub fn base(&self) -> &Observable {
        &self.base
    }

    pub fn left(&self) -> &Observable {
        &self.left
    }

    pub fn right(&self) -> &Observable {
        &self.right
    }

    pub fn phase_space(&self) -> &Arc<FiniteSpace> {
        self.base.phase_space()
    }

    /// The joint outcome measure at a state.
    pub fn apply(&self, state: &ProbabilityMeasure) -> Result<ProbabilityMeasure> {
        self.base.apply(state)
    }

    /// The marginal observable `Πᵢ ∘ J`. By the construction invariant this
    /// equals the stored factor observable exactly, so that is what is
    /// returned.
    pub fn marginal_observable(&self, side: Side) -> &Observable {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }
}

impl fmt::Display for JointObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (joint of {}, {})",
            self.base.id(),
            self.left.id(),
            self.right.id()
        )
    }
}
