//! Structure of penalty models: interaction graphs, the zero-penalty witness
//! forced by a missing coupling, and averaging over permutation groups.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::bits::Bitstring;
use crate::enumerate::{default_workers, ground_set, weight_profile, EnumerationError};
use crate::model::{Coefficients, PenaltyModel, Qubo};
use crate::rational::Rational;

/// Largest group closure [`PermutationGroup::closure`] will materialize.
pub const CLOSURE_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("group acts on {group} points but the model has {model} variables")]
    DegreeMismatch { group: usize, model: usize },
    #[error("generator {index} is not a permutation of 0..{n}")]
    InvalidGenerator { index: usize, n: usize },
    #[error("group closure exceeds {limit} elements")]
    ClosureOverflow { limit: usize },
    #[error("interaction graph is complete; no missing coupling to exploit")]
    CompleteGraph,
    #[error("model does not vanish on every weight-{r} string")]
    NotVanishing { r: usize },
    #[error("weight {r} must satisfy 1 <= r <= n-1 for n = {n}")]
    Weight { r: usize, n: usize },
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
}

/// Graph with an edge for each nonzero quadratic coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InteractionGraph {
    pub n: usize,
    pub edges: BTreeSet<(usize, usize)>,
}

impl InteractionGraph {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n * (self.n - 1) / 2
    }

    pub fn missing_edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|j| (j + 1..self.n).map(move |k| (j, k)))
            .filter(|e| !self.edges.contains(e))
            .collect()
    }
}

pub fn interaction_graph<M: PenaltyModel>(model: &M) -> InteractionGraph {
    let c = model.coefficients();
    InteractionGraph {
        n: c.n(),
        edges: c.quadratic().keys().copied().collect(),
    }
}

/// A string next to the weight-`r` class whose value is not positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroWitness {
    pub bitstring: Bitstring,
    pub value: Rational,
    /// The model is nonnegative everywhere, in which case `value` is zero.
    pub nonnegative: bool,
}

/// For a QUBO that vanishes on the weight-`r` class but misses some coupling,
/// finds a string of weight `r - 1` or `r + 1` with value at most zero.
///
/// Taking a missing pair `(u, v)` and `S` of size `r - 1` avoiding both, the
/// strings `S+u` (weight `r`) and `S+v+u` (weight `r + 1`) bound the minimum
/// `m` over the two neighbouring classes by `2m <= c_uv = 0`. The returned
/// string is the lexicographically smallest minimizer over both classes.
pub fn sparse_zero_witness(q: &Qubo, r: usize) -> Result<ZeroWitness, AnalysisError> {
    let n = q.n();
    if r == 0 || r >= n {
        return Err(AnalysisError::Weight { r, n });
    }
    if interaction_graph(q).is_complete() {
        return Err(AnalysisError::CompleteGraph);
    }
    let profile = weight_profile(q, default_workers())?;
    if !profile.class_is_constant(r, &Rational::zero()) {
        return Err(AnalysisError::NotVanishing { r });
    }
    let w = [r - 1, r + 1]
        .into_iter()
        .min_by(|&a, &b| {
            (&profile.minima[a], profile.witnesses[a])
                .cmp(&(&profile.minima[b], profile.witnesses[b]))
        })
        .expect("two candidates");
    Ok(ZeroWitness {
        bitstring: profile.witnesses[w],
        value: profile.minima[w].clone(),
        nonnegative: !profile.global_minimum().is_negative(),
    })
}

/// Permutation of `0..n` in one-line notation: `j` maps to `self[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return None;
            }
        }
        Some(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn image(&self, j: usize) -> usize {
        self.0[j]
    }

    /// `self` after `other`: `j -> self(other(j))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&j| self.0[j]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (j, &i) in self.0.iter().enumerate() {
            inv[i] = j;
        }
        Permutation(inv)
    }

    /// Moves the bit at position `j` to position `self(j)`.
    pub fn act(&self, x: &Bitstring) -> Bitstring {
        let mask = x.support().fold(0u64, |m, j| m | 1u64 << self.0[j]);
        Bitstring::new(x.len(), mask).expect("same length")
    }
}

/// A permutation group given by generators, or the full symmetric group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationGroup {
    n: usize,
    generators: Vec<Permutation>,
    full_symmetric: bool,
}

impl PermutationGroup {
    /// The symmetric group on `n` points, generated by `(0 1)` and the `n`-cycle.
    pub fn symmetric(n: usize) -> Self {
        let mut generators = Vec::new();
        if n >= 2 {
            let mut swap: Vec<usize> = (0..n).collect();
            swap.swap(0, 1);
            generators.push(Permutation(swap));
        }
        if n >= 3 {
            generators.push(Permutation((0..n).map(|j| (j + 1) % n).collect()));
        }
        PermutationGroup {
            n,
            generators,
            full_symmetric: true,
        }
    }

    pub fn trivial(n: usize) -> Self {
        PermutationGroup {
            n,
            generators: Vec::new(),
            full_symmetric: n <= 1,
        }
    }

    pub fn from_generators(n: usize, generators: Vec<Vec<usize>>) -> Result<Self, AnalysisError> {
        let generators = generators
            .into_iter()
            .enumerate()
            .map(|(index, images)| {
                if images.len() != n {
                    return Err(AnalysisError::InvalidGenerator { index, n });
                }
                Permutation::new(images).ok_or(AnalysisError::InvalidGenerator { index, n })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PermutationGroup {
            n,
            generators,
            full_symmetric: n <= 1,
        })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Whether this group was declared as the full symmetric group.
    pub fn is_full_symmetric(&self) -> bool {
        self.full_symmetric
    }

    /// Every group element, by breadth-first products of generators.
    pub fn closure(&self, limit: usize) -> Result<Vec<Permutation>, AnalysisError> {
        let identity = Permutation::identity(self.n);
        let mut seen: HashSet<Permutation> = HashSet::from([identity.clone()]);
        let mut order = vec![identity.clone()];
        let mut queue = VecDeque::from([identity]);
        while let Some(element) = queue.pop_front() {
            for g in &self.generators {
                let next = g.compose(&element);
                if seen.insert(next.clone()) {
                    if seen.len() > limit {
                        return Err(AnalysisError::ClosureOverflow { limit });
                    }
                    order.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
        Ok(order)
    }

    /// Orbits of points, each sorted, listed by smallest member.
    pub fn point_orbits(&self) -> Vec<Vec<usize>> {
        let mut sets = DisjointSets::new(self.n);
        for g in &self.generators {
            for j in 0..self.n {
                sets.union(j, g.image(j));
            }
        }
        sets.groups()
    }

    /// Orbits of unordered pairs `(j, k)`, `j < k`.
    pub fn pair_orbits(&self) -> Vec<Vec<(usize, usize)>> {
        let pairs: Vec<(usize, usize)> = (0..self.n)
            .flat_map(|j| (j + 1..self.n).map(move |k| (j, k)))
            .collect();
        let index = |j: usize, k: usize| {
            let (j, k) = (j.min(k), j.max(k));
            // position of (j, k) in row-major strict upper triangle
            j * (2 * self.n - j - 1) / 2 + (k - j - 1)
        };
        let mut sets = DisjointSets::new(pairs.len());
        for g in &self.generators {
            for &(j, k) in &pairs {
                sets.union(index(j, k), index(g.image(j), g.image(k)));
            }
        }
        sets.groups()
            .into_iter()
            .map(|group| group.into_iter().map(|p| pairs[p]).collect())
            .collect()
    }
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn groups(mut self) -> Vec<Vec<usize>> {
        let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for x in 0..self.parent.len() {
            let root = self.find(x);
            by_root.entry(root).or_default().push(x);
        }
        by_root.into_values().collect()
    }
}

fn mean<'a>(values: impl Iterator<Item = &'a Rational>, count: usize) -> Rational {
    values.sum::<Rational>() / Rational::from(count as i64)
}

/// Group average `(1/|G|) sum_g g.H`, with the offset left unchanged.
///
/// Averaging over `G` gives each coefficient the mean over its orbit, so the
/// work is done on point and pair orbits without enumerating `G`. For the
/// full symmetric group all biases and all couplings collapse to their means.
pub fn symmetrize<M: PenaltyModel>(
    model: &M,
    group: &PermutationGroup,
) -> Result<M, AnalysisError> {
    let c = model.coefficients();
    let n = c.n();
    if group.degree() != n {
        return Err(AnalysisError::DegreeMismatch {
            group: group.degree(),
            model: n,
        });
    }
    let mut linear = vec![Rational::zero(); n];
    let mut quadratic = Vec::new();
    if group.is_full_symmetric() {
        let bias = mean(c.linear().iter(), n);
        linear.iter_mut().for_each(|h| *h = bias.clone());
        let slots = n * (n - 1) / 2;
        if slots > 0 {
            let coupling = mean(c.quadratic().values(), slots);
            quadratic.extend(
                (0..n)
                    .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
                    .map(|p| (p, coupling.clone())),
            );
        }
    } else {
        for orbit in group.point_orbits() {
            let avg = mean(orbit.iter().map(|&j| &c.linear()[j]), orbit.len());
            for &j in &orbit {
                linear[j] = avg.clone();
            }
        }
        for orbit in group.pair_orbits() {
            let values: Vec<Rational> = orbit.iter().map(|&(j, k)| c.coupling(j, k)).collect();
            let avg = mean(values.iter(), orbit.len());
            quadratic.extend(orbit.into_iter().map(|p| (p, avg.clone())));
        }
    }
    let coefficients =
        Coefficients::new(n, c.offset().clone(), linear, quadratic).expect("shape preserved");
    Ok(M::from_coefficients(coefficients))
}

/// Group average computed literally over the materialized closure.
pub fn average_over_closure<M: PenaltyModel>(
    model: &M,
    group: &PermutationGroup,
    limit: usize,
) -> Result<M, AnalysisError> {
    let c = model.coefficients();
    if group.degree() != c.n() {
        return Err(AnalysisError::DegreeMismatch {
            group: group.degree(),
            model: c.n(),
        });
    }
    let elements = group.closure(limit)?;
    let n = c.n();
    let count = Rational::from(elements.len() as i64);
    let mut linear = vec![Rational::zero(); n];
    let mut quad = std::collections::BTreeMap::<(usize, usize), Rational>::new();
    for g in &elements {
        let moved = c.permuted(g.images());
        for (acc, v) in linear.iter_mut().zip(moved.linear()) {
            *acc += v;
        }
        for (&p, v) in moved.quadratic() {
            *quad.entry(p).or_default() += v;
        }
    }
    let linear = linear.into_iter().map(|v| v / &count).collect();
    let quad = quad.into_iter().map(|(p, v)| (p, v / &count));
    let coefficients =
        Coefficients::new(n, c.offset().clone(), linear, quad).expect("shape preserved");
    Ok(M::from_coefficients(coefficients))
}

/// Whether every generator maps the exact ground set onto itself.
pub fn check_ground_invariance<M: PenaltyModel>(
    model: &M,
    group: &PermutationGroup,
) -> Result<bool, AnalysisError> {
    let n = model.coefficients().n();
    if group.degree() != n {
        return Err(AnalysisError::DegreeMismatch {
            group: group.degree(),
            model: n,
        });
    }
    let ground = ground_set(model, default_workers())?;
    Ok(group
        .generators()
        .iter()
        .all(|g| ground.iter().all(|x| ground.contains(&g.act(&x)))))
}
