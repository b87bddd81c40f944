//! Finite measurable spaces and exact probability measures.
//!
//! Every weight in this module is a [`BigRational`], so normalization,
//! absolute continuity, and Radon–Nikodym reconstruction are decidable
//! equalities instead of tolerance checks. A space is a finite ordered list
//! of labelled points; its measurable sets are all subsets, so "measurable"
//! never needs checking. Zero weights are dropped from storage, which makes
//! the support of a measure exactly the key set of its weight map and
//! absolute continuity a subset check.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A point of a finite space: either an atomic label or an ordered pair of
/// points of the factor spaces.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Atom(String),
    Pair(Box<Point>, Box<Point>),
}

impl Point {
    pub fn atom(label: impl Into<String>) -> Self {
        Point::Atom(label.into())
    }

    pub fn pair(left: Point, right: Point) -> Self {
        Point::Pair(Box::new(left), Box::new(right))
    }

    /// The two components of a pair point, or `None` for an atom.
    pub fn split(&self) -> Option<(&Point, &Point)> {
        match self {
            Point::Atom(_) => None,
            Point::Pair(l, r) => Some((l, r)),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Atom(s) => write!(f, "{s}"),
            Point::Pair(l, r) => write!(f, "({l},{r})"),
        }
    }
}

/// Which factor of a product space an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Left => write!(f, "left"),
            Side::Right => write!(f, "right"),
        }
    }
}

/// A named finite set of points, optionally a declared product of two other
/// spaces.
///
/// Spaces are immutable and shared behind [`Arc`]; equality is structural
/// (same id, same points in the same declared order), so two independently
/// constructed products of equal factors are interchangeable. The declared
/// point order is the tie-breaking and output order everywhere in the crate.
#[derive(Debug)]
pub struct FiniteSpace {
    id: String,
    points: Vec<Point>,
    positions: BTreeMap<Point, usize>,
    product_of: Option<(Arc<FiniteSpace>, Arc<FiniteSpace>)>,
}

impl PartialEq for FiniteSpace {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && self.points == other.points
    }
}

impl Eq for FiniteSpace {}

impl FiniteSpace {
    /// A space of atomic points. Labels must be nonempty and pairwise
    /// distinct.
    pub fn new(
        id: impl Into<String>,
        labels: impl IntoIterator<Item = impl Into<String>>,
    ) -> Result<Arc<Self>> {
        let id = id.into();
        let points: Vec<Point> = labels.into_iter().map(Point::atom).collect();
        Self::from_points(id, points, None)
    }

    /// The product of two spaces: points are all ordered pairs, left factor
    /// varying slowest, matching the factors' declared orders.
    pub fn product(left: &Arc<FiniteSpace>, right: &Arc<FiniteSpace>) -> Arc<Self> {
        let id = format!("{}*{}", left.id, right.id);
        let mut points = Vec::with_capacity(left.len() * right.len());
        for l in &left.points {
            for r in &right.points {
                points.push(Point::pair(l.clone(), r.clone()));
            }
        }
        Self::from_points(id, points, Some((Arc::clone(left), Arc::clone(right))))
            .expect("product points of valid spaces are distinct and nonempty")
    }

    fn from_points(
        id: String,
        points: Vec<Point>,
        product_of: Option<(Arc<FiniteSpace>, Arc<FiniteSpace>)>,
    ) -> Result<Arc<Self>> {
        if points.is_empty() {
            return Err(Error::Validation {
                object: format!("space `{id}`"),
                reason: "a space needs at least one point".into(),
            });
        }
        let mut positions = BTreeMap::new();
        for (i, p) in points.iter().enumerate() {
            if matches!(p, Point::Atom(s) if s.is_empty()) {
                return Err(Error::Validation {
                    object: format!("space `{id}`"),
                    reason: "point labels must be nonempty".into(),
                });
            }
            if positions.insert(p.clone(), i).is_some() {
                return Err(Error::Validation {
                    object: format!("space `{id}`"),
                    reason: format!("point `{p}` is declared twice"),
                });
            }
        }
        Ok(Arc::new(FiniteSpace {
            id,
            points,
            positions,
            product_of,
        }))
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// Points in declared order.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, point: &Point) -> bool {
        self.positions.contains_key(point)
    }

    /// Position of a point in the declared order.
    pub fn position(&self, point: &Point) -> Option<usize> {
        self.positions.get(point).copied()
    }

    /// The declared factors, if this space is a product.
    pub fn factors(&self) -> Option<(&Arc<FiniteSpace>, &Arc<FiniteSpace>)> {
        self.product_of.as_ref().map(|(l, r)| (l, r))
    }

    pub fn factor(&self, side: Side) -> Option<&Arc<FiniteSpace>> {
        self.factors().map(|(l, r)| match side {
            Side::Left => l,
            Side::Right => r,
        })
    }
}

fn same_space(a: &FiniteSpace, b: &FiniteSpace) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::SpaceMismatch {
            expected: a.id.clone(),
            actual: b.id.clone(),
        })
    }
}

/// A nonnegative exact measure on a finite space. Points with zero weight
/// are not stored, so the support is the key set of the weight map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measure {
    space: Arc<FiniteSpace>,
    weights: BTreeMap<Point, BigRational>,
}

impl Measure {
    /// Build a measure, rejecting unknown points and negative weights and
    /// dropping zero weights.
    pub fn new(
        space: Arc<FiniteSpace>,
        weights: impl IntoIterator<Item = (Point, BigRational)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (point, weight) in weights {
            if !space.contains(&point) {
                return Err(Error::UnknownPoint {
                    space: space.id().to_string(),
                    point: point.to_string(),
                });
            }
            if weight < BigRational::zero() {
                return Err(Error::NegativeWeight {
                    point: point.to_string(),
                    weight,
                });
            }
            if !weight.is_zero() {
                *map.entry(point).or_insert_with(BigRational::zero) += weight;
            }
        }
        // Repeated entries accumulate; re-drop anything that cancelled to 0.
        map.retain(|_, w| !w.is_zero());
        Ok(Measure {
            space,
            weights: map,
        })
    }

    pub fn zero(space: Arc<FiniteSpace>) -> Self {
        Measure {
            space,
            weights: BTreeMap::new(),
        }
    }

    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    /// The weight of one point (zero off the support).
    pub fn weight(&self, point: &Point) -> BigRational {
        self.weights
            .get(point)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Points of strictly positive weight.
    pub fn support(&self) -> impl Iterator<Item = &Point> {
        self.weights.keys()
    }

    pub fn support_size(&self) -> usize {
        self.weights.len()
    }

    /// Support entries; iteration order is the `Ord` order of points, not
    /// the declared order. Use [`Measure::entries_declared`] for output.
    pub fn entries(&self) -> impl Iterator<Item = (&Point, &BigRational)> {
        self.weights.iter()
    }

    /// `(point, weight)` pairs over the whole space in declared point order,
    /// zeros included.
    pub fn entries_declared(&self) -> impl Iterator<Item = (&Point, BigRational)> {
        self.space.points().iter().map(|p| (p, self.weight(p)))
    }

    pub fn total(&self) -> BigRational {
        self.weights.values().sum()
    }

    /// Measure of a subset given as an iterator of points (duplicates count
    /// once).
    pub fn mass_of<'a>(&self, points: impl IntoIterator<Item = &'a Point>) -> BigRational {
        let set: BTreeSet<&Point> = points.into_iter().collect();
        set.iter().map(|p| self.weight(p)).sum()
    }

    /// True iff `support(self) ⊆ support(reference)`, which for finite
    /// measures is exactly absolute continuity.
    pub fn is_absolutely_continuous(&self, reference: &Measure) -> Result<bool> {
        same_space(&reference.space, &self.space)?;
        Ok(self
            .weights
            .keys()
            .all(|p| reference.weights.contains_key(p)))
    }

    /// The discrete Radon–Nikodym derivative of `self` w.r.t. `reference`.
    ///
    /// The result is defined on the support of `reference` (value
    /// `self(p)/reference(p)`, possibly zero) and undefined elsewhere. The
    /// reconstruction identity `self(X) = Σ_{p∈X} d(p)·reference(p)` then
    /// holds exactly for every subset `X`.
    pub fn radon_nikodym(&self, reference: &Measure) -> Result<Density> {
        same_space(&reference.space, &self.space)?;
        if let Some(witness) = self
            .weights
            .keys()
            .find(|p| !reference.weights.contains_key(p))
        {
            return Err(Error::NotAbsolutelyContinuous {
                witness: witness.to_string(),
            });
        }
        let values = reference
            .weights
            .iter()
            .map(|(p, w)| (p.clone(), self.weight(p) / w))
            .collect();
        Ok(Density {
            space: Arc::clone(&self.space),
            values,
        })
    }

    /// Marginal onto one factor of a declared product space.
    pub fn marginal(&self, side: Side) -> Result<Measure> {
        let factor = self
            .space
            .factor(side)
            .ok_or_else(|| Error::NotProductSpace {
                space: self.space.id().to_string(),
            })?;
        let mut weights: BTreeMap<Point, BigRational> = BTreeMap::new();
        for (point, w) in &self.weights {
            let (l, r) = point
                .split()
                .expect("points of a product space are pairs");
            let key = match side {
                Side::Left => l.clone(),
                Side::Right => r.clone(),
            };
            *weights.entry(key).or_insert_with(BigRational::zero) += w.clone();
        }
        weights.retain(|_, w| !w.is_zero());
        Ok(Measure {
            space: Arc::clone(factor),
            weights,
        })
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for (p, w) in self.entries_declared() {
            if w.is_zero() {
                continue;
            }
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "{p}: {w}")?;
            first = false;
        }
        write!(f, "}}")
    }
}

/// A [`Measure`] whose weights sum to exactly 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbabilityMeasure(Measure);

impl ProbabilityMeasure {
    /// Build a probability measure; the weights must sum to exactly 1.
    pub fn new(
        space: Arc<FiniteSpace>,
        weights: impl IntoIterator<Item = (Point, BigRational)>,
    ) -> Result<Self> {
        let measure = Measure::new(space, weights)?;
        let sum = measure.total();
        if !sum.is_one() {
            return Err(Error::NotNormalized { sum });
        }
        Ok(ProbabilityMeasure(measure))
    }

    /// The Dirac measure concentrated at `point`.
    pub fn dirac(space: Arc<FiniteSpace>, point: Point) -> Result<Self> {
        ProbabilityMeasure::new(space, [(point, BigRational::one())])
    }

    /// Equal weight on every point of the space.
    pub fn uniform(space: Arc<FiniteSpace>) -> Self {
        let n = BigRational::from_integer(space.len().into());
        let weights: Vec<(Point, BigRational)> = space
            .points()
            .iter()
            .map(|p| (p.clone(), n.recip()))
            .collect();
        ProbabilityMeasure::new(space, weights).expect("uniform weights sum to 1")
    }

    /// Pointwise convex combination `Σ λᵢ·μᵢ`. The mixing weights must be
    /// nonnegative and sum to exactly 1, and all components must share one
    /// space.
    pub fn mix(components: &[(BigRational, ProbabilityMeasure)]) -> Result<Self> {
        let Some(((_, first), _)) = components.split_first() else {
            return Err(Error::WeightsNotConvex {
                reason: "empty component list".into(),
            });
        };
        let mut sum = BigRational::zero();
        for (lambda, component) in components {
            if lambda < &BigRational::zero() {
                return Err(Error::WeightsNotConvex {
                    reason: format!("weight {lambda} is negative"),
                });
            }
            same_space(first.space(), component.space())?;
            sum += lambda;
        }
        if !sum.is_one() {
            return Err(Error::WeightsNotConvex {
                reason: format!("weights sum to {sum}, expected exactly 1"),
            });
        }
        let mut weights: BTreeMap<Point, BigRational> = BTreeMap::new();
        for (lambda, component) in components {
            for (p, w) in component.entries() {
                *weights.entry(p.clone()).or_insert_with(BigRational::zero) +=
                    lambda * w;
            }
        }
        ProbabilityMeasure::new(Arc::clone(first.space()), weights)
    }

    /// The product measure `ν₁ ⊠ ν₂` on the product of the two spaces:
    /// weight `ν₁(x)·ν₂(y)` at `(x,y)`.
    pub fn product(&self, other: &ProbabilityMeasure) -> ProbabilityMeasure {
        let space = FiniteSpace::product(self.space(), other.space());
        let mut weights = Vec::with_capacity(self.0.support_size() * other.0.support_size());
        for (l, wl) in self.entries() {
            for (r, wr) in other.entries() {
                weights.push((Point::pair(l.clone(), r.clone()), wl * wr));
            }
        }
        ProbabilityMeasure::new(space, weights)
            .expect("product of probability measures is a probability measure")
    }

    /// Marginal onto one factor of a declared product space.
    pub fn marginal(&self, side: Side) -> Result<ProbabilityMeasure> {
        let m = self.0.marginal(side)?;
        debug_assert!(m.total().is_one());
        Ok(ProbabilityMeasure(m))
    }

    pub fn as_measure(&self) -> &Measure {
        &self.0
    }

    pub fn into_measure(self) -> Measure {
        self.0
    }

    /// True iff the measure is concentrated at a single point.
    pub fn is_dirac(&self) -> bool {
        self.0.support_size() == 1
    }
}

impl std::ops::Deref for ProbabilityMeasure {
    type Target = Measure;

    fn deref(&self) -> &Measure {
        &self.0
    }
}

impl fmt::Display for ProbabilityMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A partial rational-valued function on a space: the value map is exact on
/// its domain (the support of the reference measure it was derived from) and
/// *undefined* — not zero — outside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Density {
    space: Arc<FiniteSpace>,
    values: BTreeMap<Point, BigRational>,
}

impl Density {
    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    /// The value at a point, or `None` where the density is undefined.
    /// A `Some(0)` is a genuine zero inside the domain.
    pub fn value(&self, point: &Point) -> Option<&BigRational> {
        self.values.get(point)
    }

    pub fn is_defined_at(&self, point: &Point) -> bool {
        self.values.contains_key(point)
    }

    pub fn domain(&self) -> impl Iterator<Item = &Point> {
        self.values.keys()
    }

    pub fn domain_size(&self) -> usize {
        self.values.len()
    }

    /// Defined `(point, value)` pairs in point `Ord` order.
    pub fn entries(&self) -> impl Iterator<Item = (&Point, &BigRational)> {
        self.values.iter()
    }

    /// True iff the density equals 1 everywhere on its domain.
    pub fn is_constant_one(&self) -> bool {
        self.values.values().all(BigRational::is_one)
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for p in self.space.points() {
            let Some(v) = self.value(p) else { continue };
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "{p}: {v}")?;
            first = false;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{rat, space};

    fn uniform2() -> (Arc<FiniteSpace>, ProbabilityMeasure) {
        let s = space("s", &["a", "b"]);
        let m = ProbabilityMeasure::uniform(Arc::clone(&s));
        (s, m)
    }

    #[test]
    fn uniform_measure_from_weights() {
        let s = space("s", &["a", "b"]);
        let m = ProbabilityMeasure::new(
            Arc::clone(&s),
            [
                (Point::atom("a"), rat("1/2")),
                (Point::atom("b"), rat("1/2")),
            ],
        )
        .unwrap();
        assert_eq!(m.weight(&Point::atom("a")), rat("1/2"));
        assert_eq!(m, ProbabilityMeasure::uniform(s));
    }

    #[test]
    fn not_normalized_reports_exact_sum() {
        let s = space("s", &["a", "b"]);
        let err = ProbabilityMeasure::new(
            s,
            [
                (Point::atom("a"), rat("1/3")),
                (Point::atom("b"), rat("1/3")),
            ],
        )
        .unwrap_err();
        assert_eq!(err, Error::NotNormalized { sum: rat("2/3") });
    }

    #[test]
    fn dirac_on_singleton() {
        let s = space("s", &["a"]);
        let m = ProbabilityMeasure::new(s, [(Point::atom("a"), rat("1"))]).unwrap();
        assert!(m.is_dirac());
    }

    #[test]
    fn negative_weight_rejected() {
        let s = space("s", &["a", "b"]);
        let err =
            Measure::new(s, [(Point::atom("a"), rat("-1/2"))]).unwrap_err();
        assert!(matches!(err, Error::NegativeWeight { .. }));
    }

    #[test]
    fn dirac_places_unit_mass() {
        let s = space("s", &["w1", "w2"]);
        let d = ProbabilityMeasure::dirac(Arc::clone(&s), Point::atom("w1")).unwrap();
        assert_eq!(d.weight(&Point::atom("w1")), rat("1"));
        assert_eq!(d.weight(&Point::atom("w2")), rat("0"));
        assert_eq!(d.support_size(), 1);
    }

    #[test]
    fn dirac_unknown_point() {
        let s = space("s", &["w1", "w2"]);
        let err = ProbabilityMeasure::dirac(s, Point::atom("w3")).unwrap_err();
        assert_eq!(
            err,
            Error::UnknownPoint {
                space: "s".into(),
                point: "w3".into()
            }
        );
    }

    #[test]
    fn zero_weights_are_dropped() {
        let s = space("s", &["a", "b"]);
        let m = ProbabilityMeasure::new(
            s,
            [
                (Point::atom("a"), rat("1")),
                (Point::atom("b"), rat("0")),
            ],
        )
        .unwrap();
        assert_eq!(m.support().collect::<Vec<_>>(), vec![&Point::atom("a")]);
    }

    #[test]
    fn mix_identity_on_single_component() {
        let s = space("s", &["w1", "w2"]);
        let d = ProbabilityMeasure::dirac(s, Point::atom("w1")).unwrap();
        let m = ProbabilityMeasure::mix(&[(rat("1"), d.clone())]).unwrap();
        assert_eq!(m, d);
    }

    #[test]
    fn mix_of_diracs() {
        let s = space("s", &["w1", "w2"]);
        let d1 = ProbabilityMeasure::dirac(Arc::clone(&s), Point::atom("w1")).unwrap();
        let d2 = ProbabilityMeasure::dirac(Arc::clone(&s), Point::atom("w2")).unwrap();
        let m = ProbabilityMeasure::mix(&[(rat("1/2"), d1), (rat("1/2"), d2)]).unwrap();
        assert_eq!(m, ProbabilityMeasure::uniform(s));
    }

    #[test]
    fn mix_is_idempotent() {
        let s = space("s", &["a", "b"]);
        let d = ProbabilityMeasure::dirac(s, Point::atom("a")).unwrap();
        let quarters: Vec<_> = (0..4).map(|_| (rat("1/4"), d.clone())).collect();
        assert_eq!(ProbabilityMeasure::mix(&quarters).unwrap(), d);
    }

    #[test]
    fn mix_exact_rational_arithmetic() {
        // 1/3·{a:1/2,b:1/2} + 2/3·δa = {a:5/6, b:1/6}
        let (s, u) = uniform2();
        let d = ProbabilityMeasure::dirac(Arc::clone(&s), Point::atom("a")).unwrap();
        let m = ProbabilityMeasure::mix(&[(rat("1/3"), u), (rat("2/3"), d)]).unwrap();
        assert_eq!(m.weight(&Point::atom("a")), rat("5/6"));
        assert_eq!(m.weight(&Point::atom("b")), rat("1/6"));
    }

    #[test]
    fn mix_rejects_nonconvex_weights() {
        let (_, u) = uniform2();
        let err = ProbabilityMeasure::mix(&[(rat("1/2"), u.clone()), (rat("1/4"), u)])
            .unwrap_err();
        assert!(matches!(err, Error::WeightsNotConvex { .. }));
    }

    #[test]
    fn mix_rejects_space_mismatch() {
        let (_, u) = uniform2();
        let other = ProbabilityMeasure::uniform(space("t", &["x", "y"]));
        let err =
            ProbabilityMeasure::mix(&[(rat("1/2"), u), (rat("1/2"), other)]).unwrap_err();
        assert!(matches!(err, Error::SpaceMismatch { .. }));
    }

    #[test]
    fn product_multiplies_weights() {
        let m1 = ProbabilityMeasure::uniform(space("s", &["a", "b"]));
        let m2 = ProbabilityMeasure::new(
            space("t", &["x", "y"]),
            [
                (Point::atom("x"), rat("1/3")),
                (Point::atom("y"), rat("2/3")),
            ],
        )
        .unwrap();
        let p = m1.product(&m2);
        let at = |a: &str, b: &str| p.weight(&Point::pair(Point::atom(a), Point::atom(b)));
        assert_eq!(at("a", "x"), rat("1/6"));
        assert_eq!(at("a", "y"), rat("1/3"));
        assert_eq!(at("b", "x"), rat("1/6"));
        assert_eq!(at("b", "y"), rat("1/3"));
    }

    #[test]
    fn product_of_diracs_is_dirac_on_pair() {
        let s = space("s", &["a", "b"]);
        let t = space("t", &["x", "y"]);
        let d1 = ProbabilityMeasure::dirac(s, Point::atom("a")).unwrap();
        let d2 = ProbabilityMeasure::dirac(t, Point::atom("y")).unwrap();
        let p = d1.product(&d2);
        assert!(p.is_dirac());
        assert_eq!(
            p.weight(&Point::pair(Point::atom("a"), Point::atom("y"))),
            rat("1")
        );
    }

    #[test]
    fn product_of_uniforms_is_uniform() {
        let (_, u1) = uniform2();
        let u2 = ProbabilityMeasure::uniform(space("t", &["x", "y"]));
        let p = u1.product(&u2);
        assert!(p.entries().all(|(_, w)| *w == rat("1/4")));
        assert_eq!(p.support_size(), 4);
    }

    #[test]
    fn marginals_recover_factors() {
        let m1 = ProbabilityMeasure::uniform(space("s", &["a", "b"]));
        let m2 = ProbabilityMeasure::new(
            space("t", &["x", "y"]),
            [
                (Point::atom("x"), rat("1/6")),
                (Point::atom("y"), rat("5/6")),
            ],
        )
        .unwrap();
        let p = m1.product(&m2);
        assert_eq!(p.marginal(Side::Left).unwrap(), m1);
        assert_eq!(p.marginal(Side::Right).unwrap(), m2);
    }

    #[test]
    fn marginal_of_pair_dirac() {
        let s = space("s", &["a", "b"]);
        let t = space("t", &["x", "y"]);
        let d1 = ProbabilityMeasure::dirac(s, Point::atom("b")).unwrap();
        let d2 = ProbabilityMeasure::dirac(Arc::clone(&t), Point::atom("x")).unwrap();
        let p = d1.product(&d2);
        assert_eq!(
            p.marginal(Side::Right).unwrap(),
            ProbabilityMeasure::dirac(t, Point::atom("x")).unwrap()
        );
    }

    #[test]
    fn marginal_requires_product_space() {
        let (_, u) = uniform2();
        let err = u.marginal(Side::Left).unwrap_err();
        assert!(matches!(err, Error::NotProductSpace { .. }));
    }

    #[test]
    fn absolute_continuity_is_support_inclusion() {
        let s = space("s", &["a", "b"]);
        let dirac = Measure::new(Arc::clone(&s), [(Point::atom("a"), rat("1"))]).unwrap();
        let uniform = ProbabilityMeasure::uniform(s).into_measure();
        assert!(dirac.is_absolutely_continuous(&uniform).unwrap());
        assert!(!uniform.is_absolutely_continuous(&dirac).unwrap());
    }

    #[test]
    fn radon_nikodym_identity_is_constant_one() {
        let (_, u) = uniform2();
        let d = u.radon_nikodym(&u).unwrap();
        assert!(d.is_constant_one());
        assert_eq!(d.domain_size(), 2);
    }

    #[test]
    fn radon_nikodym_ratio_with_zero_in_domain() {
        let s = space("s", &["a", "b"]);
        let num = Measure::new(Arc::clone(&s), [(Point::atom("a"), rat("1"))]).unwrap();
        let den = ProbabilityMeasure::uniform(s);
        let d = num.radon_nikodym(&den).unwrap();
        assert_eq!(d.value(&Point::atom("a")), Some(&rat("2")));
        // b is in the domain (denominator support) with a genuine zero.
        assert_eq!(d.value(&Point::atom("b")), Some(&rat("0")));
    }

    #[test]
    fn radon_nikodym_undefined_outside_domain() {
        let s = space("s", &["a", "b"]);
        let num = Measure::new(Arc::clone(&s), [(Point::atom("a"), rat("1"))]).unwrap();
        let den = Measure::new(s, [(Point::atom("a"), rat("1/2"))]).unwrap();
        let d = num.radon_nikodym(&den).unwrap();
        assert_eq!(d.value(&Point::atom("b")), None);
        assert!(!d.is_defined_at(&Point::atom("b")));
    }

    #[test]
    fn radon_nikodym_reports_witness() {
        let s = space("s", &["a", "b"]);
        let num = ProbabilityMeasure::uniform(Arc::clone(&s)).into_measure();
        let den = Measure::new(s, [(Point::atom("a"), rat("1"))]).unwrap();
        let err = num.radon_nikodym(&den).unwrap_err();
        assert_eq!(
            err,
            Error::NotAbsolutelyContinuous {
                witness: "b".into()
            }
        );
    }

    #[test]
    fn space_rejects_duplicate_points() {
        assert!(FiniteSpace::new("s", ["a", "a"]).is_err());
        assert!(FiniteSpace::new("s", Vec::<String>::new()).is_err());
    }

    #[test]
    fn product_space_points_in_factor_order() {
        let s = space("s", &["a", "b"]);
        let t = space("t", &["x", "y"]);
        let p = FiniteSpace::product(&s, &t);
        let labels: Vec<String> = p.points().iter().map(|p| p.to_string()).collect();
        assert_eq!(labels, vec!["(a,x)", "(a,y)", "(b,x)", "(b,y)"]);
        assert_eq!(p.factor(Side::Left).unwrap().id(), "s");
    }
}
