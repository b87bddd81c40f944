//! Exact-arithmetic operational probability over finite spaces.
//!
//! States are probability measures on a finite phase space, observables are
//! stochastic kernels acting affinely on states, and a joint observable
//! pairs two observables into a common product outcome space. Because a
//! pair of indeterministic observables admits many joint observables, the
//! correlation carried by a joint measurement splits into a classical part
//! (attributable to the mixedness of the state) and an entanglement part
//! (attributable to the choice of joint observable). The [`correlation`]
//! module computes the three correlation density functions and their exact
//! product rule; [`couplings`] enumerates the per-state rows a joint
//! observable can have; [`simulate`] cross-checks everything by seeded
//! Monte Carlo.
//!
//! All weights are arbitrary-precision rationals, so every identity in this
//! crate is checked by exact equality, never by tolerance.
//!
//! ```
//! use opcorr::{FiniteSpace, Point, ProbabilityMeasure, Observable, JointObservable};
//! use opcorr::correlation::{classify, Classification};
//! use std::sync::Arc;
//!
//! # fn main() -> opcorr::Result<()> {
//! let phase = FiniteSpace::new("phase", ["w"])?;
//! let bits = FiniteSpace::new("bits", ["0", "1"])?;
//!
//! // Two maximally dispersed observables over a single pure state.
//! let rows = |id: &str| Observable::constant(
//!     id, Arc::clone(&phase), ProbabilityMeasure::uniform(Arc::clone(&bits)));
//! let (a1, a2) = (rows("A1")?, rows("A2")?);
//!
//! // Pair them through the perfectly correlated diagonal row.
//! let diagonal = ProbabilityMeasure::new(
//!     FiniteSpace::product(&bits, &bits),
//!     [("0", "0"), ("1", "1")].map(|(x, y)| {
//!         (Point::pair(Point::atom(x), Point::atom(y)), "1/2".parse().unwrap())
//!     }),
//! )?;
//! let joint = JointObservable::new(
//!     "J", a1, a2, [(Point::atom("w"), diagonal)].into_iter().collect())?;
//!
//! // At a pure state all correlation is entanglement, never classical.
//! let state = ProbabilityMeasure::dirac(phase, Point::atom("w"))?;
//! let report = classify(&joint, &state)?;
//! assert_eq!(report.classification, Classification::EntangledOnly);
//! # Ok(())
//! # }
//! ```

pub mod correlation;
pub mod couplings;
mod error;
pub mod measures;
pub mod observables;
pub mod report;
pub mod simulate;
pub mod system;

pub use error::{Error, Result};
pub use measures::{Density, FiniteSpace, Measure, Point, ProbabilityMeasure, Side};
pub use observables::{JointObservable, Observable};

#[cfg(test)]
pub(crate) mod testutil {
    use std::sync::Arc;

    use num_rational::BigRational;

    use crate::measures::{FiniteSpace, Point, ProbabilityMeasure};

    pub fn rat(s: &str) -> BigRational {
        s.parse().unwrap()
    }

    pub fn space(id: &str, labels: &[&str]) -> Arc<FiniteSpace> {
        FiniteSpace::new(id, labels.iter().copied()).unwrap()
    }

    pub fn pt(label: &str) -> Point {
        Point::atom(label)
    }

    pub fn pair(l: &str, r: &str) -> Point {
        Point::pair(Point::atom(l), Point::atom(r))
    }

    /// A probability measure from integer weights, normalized by their sum.
    pub fn measure_from_counts(
        space: &Arc<FiniteSpace>,
        counts: &[u32],
    ) -> ProbabilityMeasure {
        assert_eq!(counts.len(), space.len());
        let total: u32 = counts.iter().sum();
        assert!(total > 0);
        let total = BigRational::from_integer(total.into());
        let weights: Vec<(Point, BigRational)> = space
            .points()
            .iter()
            .zip(counts)
            .map(|(p, c)| {
                (
                    p.clone(),
                    BigRational::from_integer((*c).into()) / &total,
                )
            })
            .collect();
        ProbabilityMeasure::new(Arc::clone(space), weights).unwrap()
    }
}
