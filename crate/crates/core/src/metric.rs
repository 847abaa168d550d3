//! The weight of a column mapping and the exact distance between relations.
//!
//! The weight of a mapping `g` from `r1` into `r2` charges (A) every target
//! column missed by the image, plus (B) the worst per-feature count of
//! source columns whose relation to that feature flips under `g`. The
//! distance is the larger of the two directional minima of weight over all
//! total column mappings; it is a pseudometric on relations sharing a
//! feature axis.
//!
//! Minimization is an exhaustive search in mapping-image order with branch
//! pruning, so results and witnesses are deterministic: the returned
//! witness is the lexicographically smallest minimizer. When both relations
//! have the same number of columns, only bijections are enumerated; some
//! bijection always attains the unrestricted minimum, and the search space
//! shrinks from `n^n` to `n!`.

use crate::error::Error;
use crate::partitions::PartitionedRelation;
use crate::relation::{ColumnMapping, Relation};

/// Default cap on the number of mappings one directional search may visit.
pub const DEFAULT_EXACT_BUDGET: u64 = 10_000_000;

/// The weight of one mapping, with the quantities that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightBreakdown {
    /// Target columns outside the mapping's image.
    pub term_a: usize,
    /// For each feature, the count of source columns whose relation to it
    /// flips under the mapping.
    pub per_x_disagreements: Vec<usize>,
    /// Maximum of the per-feature counts (0 for an empty feature axis).
    pub term_b: usize,
    /// First feature index attaining `term_b`, when the axis is nonempty.
    pub x_hat: Option<usize>,
    /// `term_a + term_b`.
    pub weight: usize,
}

fn breakdown_from_parts(term_a: usize, per_x: Vec<usize>) -> WeightBreakdown {
    let (x_hat, term_b) = per_x
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map_or((None, 0), |(i, &v)| (Some(i), v));
    WeightBreakdown {
        term_a,
        per_x_disagreements: per_x,
        term_b,
        x_hat,
        weight: term_a + term_b,
    }
}

fn unmatched_targets(g: &ColumnMapping) -> usize {
    let mut hit = vec![false; g.target_size()];
    for &t in g.image() {
        hit[t] = true;
    }
    g.target_size() - hit.iter().filter(|&&h| h).count()
}

/// Weight of `g : r1 -> r2`, computed column by column.
pub fn weight(g: &ColumnMapping, r1: &Relation, r2: &Relation) -> Result<WeightBreakdown, Error> {
    r1.same_x(r2)?;
    g.check_shape(r1, r2)?;
    let mut per_x = vec![0usize; r1.x_count()];
    for (j, &t) in g.image().iter().enumerate() {
        for x in r1.column(j).symmetric_difference(r2.column(t)) {
            per_x[x] += 1;
        }
    }
    Ok(breakdown_from_parts(unmatched_targets(g), per_x))
}

/// Weight of `g : r1 -> r2`, computed through the two relations' column
/// partitions instead of their columns.
///
/// Each source partition's columns are bucketed by the target partition
/// they land in; a disagreeing bucket of size `n` charges `n` to every
/// feature on which the two patterns differ. Always equal to [`weight`].
pub fn weight_partition_form(
    g: &ColumnMapping,
    r1: &Relation,
    r2: &Relation,
) -> Result<WeightBreakdown, Error> {
    r1.same_x(r2)?;
    g.check_shape(r1, r2)?;
    let p1 = PartitionedRelation::new(r1);
    let p2 = PartitionedRelation::new(r2);
    let mut bucket_counts =
        std::collections::HashMap::<(usize, usize), usize>::new();
    for (j, &t) in g.image().iter().enumerate() {
        let s = p1.partition_of(j);
        let d = p2.partition_of(t);
        *bucket_counts.entry((s, d)).or_insert(0) += 1;
    }
    let mut per_x = vec![0usize; r1.x_count()];
    for (&(s, d), &count) in &bucket_counts {
        let sigma = &p1.partitions()[s].sigma;
        let tau = &p2.partitions()[d].sigma;
        for x in sigma.symmetric_difference(tau) {
            per_x[x] += count;
        }
    }
    Ok(breakdown_from_parts(unmatched_targets(g), per_x))
}

/// A directional minimum with one mapping attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinWeight {
    pub weight: usize,
    /// The lexicographically smallest minimizing mapping.
    pub witness: ColumnMapping,
}

/// Minimum weight over all mappings `r1 -> r2`, under the default budget.
pub fn min_weight_exact(r1: &Relation, r2: &Relation) -> Result<MinWeight, Error> {
    min_weight_exact_with_budget(r1, r2, DEFAULT_EXACT_BUDGET)
}

/// Minimum weight over all mappings `r1 -> r2`.
///
/// Fails with [`Error::BudgetExceeded`] when the search space (`n2^n1`
/// mappings, or `n1!` when the column counts are equal) exceeds `budget`,
/// and with [`Error::NoMappingExists`] when `r2` has no columns to map a
/// nonempty `r1` into.
pub fn min_weight_exact_with_budget(
    r1: &Relation,
    r2: &Relation,
    budget: u64,
) -> Result<MinWeight, Error> {
    r1.same_x(r2)?;
    let n1 = r1.y_count();
    let n2 = r2.y_count();
    if n2 == 0 {
        if n1 == 0 {
            return Ok(MinWeight {
                weight: 0,
                witness: ColumnMapping::new(0, 0, Vec::new())?,
            });
        }
        return Err(Error::NoMappingExists);
    }
    let space = search_space(n1, n2);
    if space > budget as u128 {
        return Err(Error::BudgetExceeded {
            mappings: space,
            budget,
        });
    }
    let search = if n1 == n2 {
        Searcher::run(r1, r2, true)
    } else {
        Searcher::run(r1, r2, false)
    };
    let (weight, image) = search;
    Ok(MinWeight {
        weight,
        witness: ColumnMapping::new(n1, n2, image)?,
    })
}

/// Number of mappings an exact search must consider.
pub fn search_space(n1: usize, n2: usize) -> u128 {
    const CAP: u128 = u128::MAX / 2;
    if n1 == n2 {
        let mut space: u128 = 1;
        for k in 2..=n1 as u128 {
            space = space.saturating_mul(k).min(CAP);
        }
        space
    } else {
        let mut space: u128 = 1;
        for _ in 0..n1 {
            space = space.saturating_mul(n2 as u128).min(CAP);
        }
        space
    }
}

/// Depth-first enumeration of mapping images in lexicographic order with
/// lower-bound pruning. Strict improvement plus in-order traversal makes
/// the recorded witness the lexicographically smallest minimizer.
struct Searcher<'a> {
    r1: &'a Relation,
    r2: &'a Relation,
    bijective: bool,
    image: Vec<usize>,
    per_x: Vec<usize>,
    max_b: usize,
    used_counts: Vec<usize>,
    distinct_used: usize,
    best: usize,
    best_image: Vec<usize>,
}

impl<'a> Searcher<'a> {
    fn run(r1: &'a Relation, r2: &'a Relation, bijective: bool) -> (usize, Vec<usize>) {
        let n1 = r1.y_count();
        let n2 = r2.y_count();
        let mut s = Searcher {
            r1,
            r2,
            bijective,
            image: Vec::with_capacity(n1),
            per_x: vec![0; r1.x_count()],
            max_b: 0,
            used_counts: vec![0; n2],
            distinct_used: 0,
            best: usize::MAX,
            best_image: Vec::new(),
        };
        s.descend();
        (s.best, s.best_image)
    }

    fn descend(&mut self) {
        let n1 = self.r1.y_count();
        let n2 = self.r2.y_count();
        let depth = self.image.len();
        if depth == n1 {
            let w = (n2 - self.distinct_used) + self.max_b;
            if w < self.best {
                self.best = w;
                self.best_image = self.image.clone();
            }
            return;
        }
        let remaining = n1 - depth - 1;
        for t in 0..n2 {
            if self.bijective && self.used_counts[t] > 0 {
                continue;
            }
            let saved_max_b = self.max_b;
            let source = self.r1.column(depth);
            for x in source.symmetric_difference(self.r2.column(t)) {
                self.per_x[x] += 1;
                self.max_b = self.max_b.max(self.per_x[x]);
            }
            self.used_counts[t] += 1;
            if self.used_counts[t] == 1 {
                self.distinct_used += 1;
            }
            self.image.push(t);

            let a_floor = n2.saturating_sub(self.distinct_used + remaining);
            if a_floor + self.max_b < self.best {
                self.descend();
            }

            self.image.pop();
            if self.used_counts[t] == 1 {
                self.distinct_used -= 1;
            }
            self.used_counts[t] -= 1;
            for x in source.symmetric_difference(self.r2.column(t)) {
                self.per_x[x] -= 1;
            }
            self.max_b = saved_max_b;
        }
    }
}

/// Exact distance: the larger of the two directional minimum weights, under
/// the default budget.
///
/// ```
/// use relmetric::{distance_exact, Relation};
///
/// let r1 = Relation::from_rows(&[vec![1]]).unwrap();
/// let r2 = Relation::from_rows(&[vec![0]]).unwrap();
/// assert_eq!(distance_exact(&r1, &r2).unwrap(), 1);
/// assert_eq!(distance_exact(&r1, &r1).unwrap(), 0);
/// ```
pub fn distance_exact(r1: &Relation, r2: &Relation) -> Result<usize, Error> {
    distance_exact_with_budget(r1, r2, DEFAULT_EXACT_BUDGET)
}

/// Exact distance with an explicit per-direction search budget.
///
/// A direction into a columnless relation admits no mappings and is skipped;
/// the distance between two columnless relations is 0.
pub fn distance_exact_with_budget(
    r1: &Relation,
    r2: &Relation,
    budget: u64,
) -> Result<usize, Error> {
    let forward = directional_min(r1, r2, budget)?;
    let backward = directional_min(r2, r1, budget)?;
    Ok(forward.max(backward).unwrap_or(0))
}

fn directional_min(
    source: &Relation,
    target: &Relation,
    budget: u64,
) -> Result<Option<usize>, Error> {
    match min_weight_exact_with_budget(source, target, budget) {
        Ok(min) => Ok(Some(min.weight)),
        Err(Error::NoMappingExists) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Minimum weight over relation-preserving mappings `r1 -> r2`:
/// `max(n1, n2) - n1` when a morphism exists, absent otherwise.
pub fn min_morphism_weight(r1: &Relation, r2: &Relation) -> Result<Option<usize>, Error> {
    if r1.morphism_exists(r2)? {
        Ok(Some(r1.y_count().max(r2.y_count()) - r1.y_count()))
    } else {
        Ok(None)
    }
}
