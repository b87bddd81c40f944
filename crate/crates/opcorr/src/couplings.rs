//! Couplings: measures on a product space with prescribed marginals.
//!
//! A coupling is one row `Jδω` of a joint observable, so the constructors
//! here are the building blocks for non-product joints: the product row,
//! the greedy monotone (northwest-corner) row, the extreme points of the
//! transportation polytope `{c ≥ 0 : marginals = ν₁, ν₂}`, and the vertex
//! farthest in total variation from a reference row.
//!
//! Vertex enumeration walks all spanning trees of the complete bipartite
//! support graph and keeps the trees whose uniquely determined flow is
//! nonnegative; this is exact, dependency-free, and fine at the bounded
//! cell counts enforced by callers. Results are ordered by support position
//! in the declared point order, which is also the tie-breaking order.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::measures::{FiniteSpace, Point, ProbabilityMeasure, Side};

/// Default cell-count cap for vertex enumeration; the CLI can override it
/// through the `OPCORR_ENUM_BOUND` environment variable.
pub const DEFAULT_ENUMERATION_BOUND: usize = 16;

/// A probability measure on `Ξ₁×Ξ₂` together with the two marginals it is
/// guaranteed (by construction) to have.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coupling {
    measure: ProbabilityMeasure,
    left: ProbabilityMeasure,
    right: ProbabilityMeasure,
}

impl Coupling {
    /// Wrap a measure as a coupling of `left` and `right`, validating both
    /// marginals exactly.
    pub fn new(
        measure: ProbabilityMeasure,
        left: ProbabilityMeasure,
        right: ProbabilityMeasure,
    ) -> Result<Self> {
        for (side, target) in [(Side::Left, &left), (Side::Right, &right)] {
            let got = measure.marginal(side)?;
            if &got != *target {
                return Err(Error::MarginalMismatch {
                    omega: "-".into(),
                    side: side.to_string(),
                    expected: target.to_string(),
                    actual: got.to_string(),
                });
            }
        }
        Ok(Coupling {
            measure,
            left,
            right,
        })
    }

    pub fn measure(&self) -> &ProbabilityMeasure {
        &self.measure
    }

    pub fn left(&self) -> &ProbabilityMeasure {
        &self.left
    }

    pub fn right(&self) -> &ProbabilityMeasure {
        &self.right
    }

    /// Total-variation distance `Σ|c(p) − other(p)|/2`, exact.
    pub fn total_variation(&self, other: &ProbabilityMeasure) -> Result<BigRational> {
        if self.measure.space() != other.space() {
            return Err(Error::SpaceMismatch {
                expected: self.measure.space().id().to_string(),
                actual: other.space().id().to_string(),
            });
        }
        let mut sum = BigRational::zero();
        for p in self.measure.space().points() {
            sum += (self.measure.weight(p) - other.weight(p)).abs();
        }
        Ok(sum / BigRational::from_integer(2.into()))
    }

    /// Support as positions in the declared order of the product space.
    /// Couplings with acyclic support are uniquely determined by it, so this
    /// doubles as the deterministic tie-breaking key.
    pub fn support_positions(&self) -> Vec<usize> {
        let space = self.measure.space();
        let mut positions: Vec<usize> = self
            .measure
            .support()
            .map(|p| space.position(p).expect("support point is in the space"))
            .collect();
        positions.sort_unstable();
        positions
    }
}

/// The product coupling `ν₁ ⊠ ν₂`, the correlation-free row.
pub fn product_coupling(nu1: &ProbabilityMeasure, nu2: &ProbabilityMeasure) -> Coupling {
    Coupling {
        measure: nu1.product(nu2),
        left: nu1.clone(),
        right: nu2.clone(),
    }
}

/// The greedy monotone coupling along the two given total orders
/// (northwest-corner rule): masses are matched in order, so the support is
/// a monotone staircase and the result is the unique maximally aligned
/// coupling for those orders.
pub fn comonotone_coupling(
    nu1: &ProbabilityMeasure,
    nu2: &ProbabilityMeasure,
    order1: &[Point],
    order2: &[Point],
) -> Result<Coupling> {
    for (nu, order, side) in [(nu1, order1, "left"), (nu2, order2, "right")] {
        let declared: BTreeSet<&Point> = nu.space().points().iter().collect();
        let given: BTreeSet<&Point> = order.iter().collect();
        if declared != given || order.len() != nu.space().len() {
            return Err(Error::Validation {
                object: format!("{side} order"),
                reason: format!(
                    "must be a permutation of the points of `{}`",
                    nu.space().id()
                ),
            });
        }
    }

    let space = FiniteSpace::product(nu1.space(), nu2.space());
    let mut entries: Vec<(Point, BigRational)> = Vec::new();
    let (mut i, mut j) = (0, 0);
    let mut rem1 = nu1.weight(&order1[0]);
    let mut rem2 = nu2.weight(&order2[0]);
    loop {
        if rem1.is_zero() {
            i += 1;
            if i == order1.len() {
                break;
            }
            rem1 = nu1.weight(&order1[i]);
            continue;
        }
        if rem2.is_zero() {
            j += 1;
            if j == order2.len() {
                break;
            }
            rem2 = nu2.weight(&order2[j]);
            continue;
        }
        let take = rem1.clone().min(rem2.clone());
        entries.push((
            Point::pair(order1[i].clone(), order2[j].clone()),
            take.clone(),
        ));
        rem1 -= &take;
        rem2 -= take;
    }

    let measure = ProbabilityMeasure::new(space, entries)
        .expect("greedy matching distributes exactly the unit mass");
    Coupling::new(measure, nu1.clone(), nu2.clone())
}

/// Support entries of a measure in declared point order.
fn positive_entries(nu: &ProbabilityMeasure) -> Vec<(Point, BigRational)> {
    nu.space()
        .points()
        .iter()
        .filter_map(|p| {
            let w = nu.weight(p);
            (!w.is_zero()).then(|| (p.clone(), w))
        })
        .collect()
}

struct DisjointSets(Vec<usize>);

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let root = self.find(self.0[x]);
            self.0[x] = root;
        }
        self.0[x]
    }

    /// Returns false if `a` and `b` were already connected.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

/// Solve for the unique flow on a spanning tree of the bipartite graph
/// (row nodes `0..m`, column nodes `m..m+n`) by repeatedly assigning the
/// whole remaining mass of a leaf node to its single incident edge.
/// Returns `None` if any edge would have to carry negative mass.
fn solve_tree(
    edges: &[(usize, usize)],
    row_mass: &[BigRational],
    col_mass: &[BigRational],
) -> Option<Vec<BigRational>> {
    let m = row_mass.len();
    let nodes = m + col_mass.len();
    let mut remaining: Vec<BigRational> = row_mass.iter().chain(col_mass).cloned().collect();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    for (e, &(i, j)) in edges.iter().enumerate() {
        incident[i].push(e);
        incident[m + j].push(e);
    }
    let mut degree: Vec<usize> = incident.iter().map(Vec::len).collect();
    let mut done = vec![false; edges.len()];
    let mut values = vec![BigRational::zero(); edges.len()];
    let mut leaves: Vec<usize> = (0..nodes).filter(|&v| degree[v] == 1).collect();

    while let Some(v) = leaves.pop() {
        let Some(&e) = incident[v].iter().find(|&&e| !done[e]) else {
            continue;
        };
        let (i, j) = edges[e];
        let other = if v == i { m + j } else { i };
        let mass = remaining[v].clone();
        if mass.is_negative() {
            return None;
        }
        values[e] = mass.clone();
        remaining[v] = BigRational::zero();
        remaining[other] -= mass;
        done[e] = true;
        degree[v] -= 1;
        degree[other] -= 1;
        if degree[other] == 1 {
            leaves.push(other);
        }
    }

    if values.iter().any(|v| v.is_negative()) {
        return None;
    }
    Some(values)
}

/// All extreme points of the transportation polytope of `(ν₁, ν₂)`.
///
/// Every vertex is a basic feasible solution, so its support is a spanning
/// forest of the bipartite support graph and has at most
/// `|supp ν₁|+|supp ν₂|−1` cells. The enumeration tries every spanning tree,
/// keeps the nonnegative solutions, and deduplicates degenerate trees that
/// determine the same measure. The list is ordered by support position in
/// the declared point order and is duplicate-free.
pub fn vertex_couplings(
    nu1: &ProbabilityMeasure,
    nu2: &ProbabilityMeasure,
    bound: usize,
) -> Result<Vec<Coupling>> {
    let cells = nu1.space().len() * nu2.space().len();
    if cells > bound {
        return Err(Error::EnumerationBoundExceeded { cells, bound });
    }

    let rows = positive_entries(nu1);
    let cols = positive_entries(nu2);
    let (m, n) = (rows.len(), cols.len());
    let row_mass: Vec<BigRational> = rows.iter().map(|(_, w)| w.clone()).collect();
    let col_mass: Vec<BigRational> = cols.iter().map(|(_, w)| w.clone()).collect();
    let space = FiniteSpace::product(nu1.space(), nu2.space());

    let all_edges: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .collect();
    let tree_size = m + n - 1;

    let mut seen: BTreeSet<BTreeMap<(usize, usize), BigRational>> = BTreeSet::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(tree_size);
    let mut stack: Vec<(usize, usize)> = vec![(0, 0)]; // (next edge index, chosen len)

    // Depth-first over increasing edge-index subsets of size m+n-1,
    // rejecting any subset that closes a cycle before it is complete.
    fn explore(
        start: usize,
        all_edges: &[(usize, usize)],
        m: usize,
        tree_size: usize,
        chosen: &mut Vec<usize>,
        row_mass: &[BigRational],
        col_mass: &[BigRational],
        seen: &mut BTreeSet<BTreeMap<(usize, usize), BigRational>>,
    ) {
        if chosen.len() == tree_size {
            let edges: Vec<(usize, usize)> = chosen.iter().map(|&e| all_edges[e]).collect();
            // Re-check acyclicity of the full subset: the incremental check
            // below already guarantees it, so this solve cannot see a cycle.
            if let Some(values) = solve_tree(&edges, row_mass, col_mass) {
                let support: BTreeMap<(usize, usize), BigRational> = edges
                    .iter()
                    .zip(values)
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(&e, v)| (e, v))
                    .collect();
                seen.insert(support);
            }
            return;
        }
        let remaining_needed = tree_size - chosen.len();
        for e in start..=(all_edges.len().saturating_sub(remaining_needed)) {
            // Cheap cycle check over the chosen prefix plus `e`.
            let mut sets = DisjointSets::new(m + col_mass.len());
            let mut acyclic = true;
            for &c in chosen.iter().chain(std::iter::once(&e)) {
                let (i, j) = all_edges[c];
                if !sets.union(i, m + j) {
                    acyclic = false;
                    break;
                }
            }
            if !acyclic {
                continue;
            }
            chosen.push(e);
            explore(
                e + 1,
                all_edges,
                m,
                tree_size,
                chosen,
                row_mass,
                col_mass,
                seen,
            );
            chosen.pop();
        }
    }
    stack.clear();
    explore(
        0,
        &all_edges,
        m,
        tree_size,
        &mut chosen,
        &row_mass,
        &col_mass,
        &mut seen,
    );

    let mut result: Vec<Coupling> = seen
        .into_iter()
        .map(|support| {
            let entries: Vec<(Point, BigRational)> = support
                .into_iter()
                .map(|((i, j), w)| {
                    (Point::pair(rows[i].0.clone(), cols[j].0.clone()), w)
                })
                .collect();
            let measure = ProbabilityMeasure::new(Arc::clone(&space), entries)
                .expect("vertex solution distributes exactly the unit mass");
            Coupling::new(measure, nu1.clone(), nu2.clone())
                .expect("vertex solution satisfies both marginals by construction")
        })
        .collect();
    result.sort_by_key(Coupling::support_positions);
    Ok(result)
}

/// Among the vertex couplings of `(ν₁, ν₂)`, the one farthest in total
/// variation from `reference`; ties are broken by the lexicographically
/// smallest support in declared point order. Total variation is convex, so
/// restricting the search to vertices loses nothing.
pub fn most_entangling_row(
    nu1: &ProbabilityMeasure,
    nu2: &ProbabilityMeasure,
    reference: &Coupling,
    bound: usize,
) -> Result<Coupling> {
    let vertices = vertex_couplings(nu1, nu2, bound)?;
    let mut best: Option<(BigRational, Coupling)> = None;
    for vertex in vertices {
        let distance = vertex.total_variation(reference.measure())?;
        let better = match &best {
            None => true,
            Some((best_distance, _)) => distance > *best_distance,
        };
        if better {
            best = Some((distance, vertex));
        }
    }
    Ok(best.expect("the transportation polytope is nonempty").1)
}
