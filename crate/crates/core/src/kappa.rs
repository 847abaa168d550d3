//! Grouped-partition analysis and the cheap upper bounds on weight and
//! distance.
//!
//! After removing the agreeing columns one-for-one, the target's remaining
//! patterns split into x-groups: connected components under shared
//! features, with the empty pattern always its own group. Filling those
//! groups in ascending order of size credits some of the disagreeing
//! assignments with avoiding whichever feature ends up worst, and the
//! credited count is `kappa`. From it:
//!
//! - [`min_weight_bound`] estimates the minimum weight of any mapping
//!   `r1 -> r2` as `max(n1, n2) - (agreeing + kappa(r1, r2))`, and
//! - [`distance_bound`] estimates the distance as
//!   `max(n1, n2) - min(agreeing + kappa(r1, r2), agreeing + kappa(r2, r1))`.
//!
//! The estimates are not sound upper bounds in every configuration: the
//! credit is computed from the target's grouping and the source's column
//! count alone, and when the disagreeing source patterns concentrate on a
//! few features the credited assignments still flip those features. See
//! `directional_bound_can_undershoot_a_concentrated_source` in the tests
//! for the smallest such cases. On random relations the estimates hold as
//! upper bounds for roughly 99.5% of pairs and are exact or near-exact on
//! block-structured inputs.
//!
//! Everything here runs in time proportional to the matrix size and
//! working memory proportional to rows plus columns.

use crate::bits::BitSet;
use crate::error::Error;
use crate::partitions::{agreement_split, PartitionedRelation};
use crate::relation::{ColumnMapping, Relation};
use crate::sample::{derive_seed, sample_columns};
use std::collections::HashMap;

/// Disjoint groups of patterns whose supports pairwise share no feature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XGroup {
    /// Union of the member patterns' supports.
    pub tau: BitSet,
    /// Member patterns, bit-string ascending.
    pub member_sigmas: Vec<BitSet>,
    /// Total number of columns across the member patterns.
    pub total_cardinality: usize,
}

/// An x-grouping: every pattern lands in exactly one group, and distinct
/// groups have disjoint supports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XGrouping {
    pub groups: Vec<XGroup>,
}

impl XGrouping {
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }
}

/// Group a partitioned relation's patterns by shared support.
///
/// With `restrict_to`, only the listed patterns participate. Groups come
/// back ordered by their support's bit string (the empty-pattern group
/// first when present).
pub fn x_grouping(p: &PartitionedRelation, restrict_to: Option<&[BitSet]>) -> XGrouping {
    let patterns: Vec<(&BitSet, usize)> = p
        .partitions()
        .iter()
        .filter(|part| {
            restrict_to.is_none_or(|allowed| allowed.contains(&part.sigma))
        })
        .map(|part| (&part.sigma, part.multiplicity()))
        .collect();
    let width = p.base().x_count();
    let raw = group_patterns(&patterns, width);
    let mut groups: Vec<XGroup> = raw
        .into_iter()
        .map(|g| {
            let mut members: Vec<BitSet> =
                g.members.iter().map(|&i| patterns[i].0.clone()).collect();
            members.sort_by(|a, b| a.cmp_bitstring(b));
            XGroup {
                tau: g.tau,
                member_sigmas: members,
                total_cardinality: g.cardinality,
            }
        })
        .collect();
    groups.sort_by(|a, b| a.tau.cmp_bitstring(&b.tau));
    XGrouping { groups }
}

struct RawGroup {
    tau: BitSet,
    members: Vec<usize>,
    cardinality: usize,
}

/// Union-find over feature indices; each pattern joins the component of its
/// features. Empty patterns form their own group.
fn group_patterns(patterns: &[(&BitSet, usize)], width: usize) -> Vec<RawGroup> {
    let mut parent: Vec<u32> = (0..width as u32).collect();
    fn find(parent: &mut [u32], mut v: u32) -> u32 {
        while parent[v as usize] != v {
            parent[v as usize] = parent[parent[v as usize] as usize];
            v = parent[v as usize];
        }
        v
    }
    for (sigma, _) in patterns {
        let mut ones = sigma.ones();
        if let Some(first) = ones.next() {
            let root = find(&mut parent, first as u32);
            for x in ones {
                let r = find(&mut parent, x as u32);
                parent[r as usize] = root;
            }
        }
    }
    let mut by_root: HashMap<Option<u32>, Vec<usize>> = HashMap::new();
    for (i, (sigma, _)) in patterns.iter().enumerate() {
        let root = sigma.ones().next().map(|x| find(&mut parent, x as u32));
        by_root.entry(root).or_default().push(i);
    }
    by_root
        .into_values()
        .map(|members| {
            let mut tau = BitSet::new(width);
            let mut cardinality = 0;
            for &i in &members {
                tau.union_with(patterns[i].0);
                cardinality += patterns[i].1;
            }
            RawGroup {
                tau,
                members,
                cardinality,
            }
        })
        .collect()
}

/// The grouped-fill analysis for one direction, with its witness mapping.
#[derive(Clone, Debug)]
pub struct KappaPlan {
    /// Target-side disagreeing groups, ascending by total cardinality
    /// (ties by the smallest member pattern).
    pub ordered_groups: XGrouping,
    /// Cumulative group cardinalities; the last entry is the target's
    /// disagreeing column count.
    pub partial_sums: Vec<usize>,
    /// Largest 1-based index whose partial sum fits the source's
    /// disagreeing count; 0 when even the first group does not fit.
    pub m: usize,
    pub kappa: usize,
    /// Source and target disagreeing column counts.
    pub disagreeing_source: usize,
    pub disagreeing_target: usize,
    /// Total witness mapping: agreeing columns one-for-one, disagreeing
    /// columns filled group by group. Absent when either side has no
    /// disagreeing columns.
    pub mapping: Option<ColumnMapping>,
}

/// Compute the full [`KappaPlan`] from `r1` toward `r2`.
pub fn kappa(r1: &Relation, r2: &Relation) -> Result<KappaPlan, Error> {
    r1.same_x(r2)?;
    let p1 = PartitionedRelation::new(r1);
    let p2 = PartitionedRelation::new(r2);
    let split = agreement_split(&p1, &p2)?;
    let k1 = split.disagreeing_1();
    let k2 = split.disagreeing_2();
    if k1 == 0 || k2 == 0 {
        return Ok(KappaPlan {
            ordered_groups: XGrouping { groups: Vec::new() },
            partial_sums: Vec::new(),
            m: 0,
            kappa: 0,
            disagreeing_source: k1,
            disagreeing_target: k2,
            mapping: None,
        });
    }

    let disagreeing_2 = split.disagreeing_patterns_2();
    let borrowed: Vec<(&BitSet, usize)> =
        disagreeing_2.iter().map(|(s, m)| (s, *m)).collect();
    let raw = group_patterns(&borrowed, r1.x_count());
    let mut groups: Vec<XGroup> = raw
        .into_iter()
        .map(|g| {
            let mut members: Vec<BitSet> =
                g.members.iter().map(|&i| borrowed[i].0.clone()).collect();
            members.sort_by(|a, b| a.cmp_bitstring(b));
            XGroup {
                tau: g.tau,
                member_sigmas: members,
                total_cardinality: g.cardinality,
            }
        })
        .collect();
    groups.sort_by(|a, b| {
        a.total_cardinality
            .cmp(&b.total_cardinality)
            .then_with(|| a.member_sigmas[0].cmp_bitstring(&b.member_sigmas[0]))
    });

    let sums: Vec<usize> = groups.iter().map(|g| g.total_cardinality).collect();
    let partial_sums: Vec<usize> = sums
        .iter()
        .scan(0usize, |acc, &c| {
            *acc += c;
            Some(*acc)
        })
        .collect();
    let (kappa_value, m) = kappa_from_sorted_sums(&sums, k1);

    let mapping = Some(build_witness_mapping(&p1, &p2, &split, &groups)?);

    Ok(KappaPlan {
        ordered_groups: XGrouping { groups },
        partial_sums,
        m,
        kappa: kappa_value,
        disagreeing_source: k1,
        disagreeing_target: k2,
        mapping,
    })
}

/// Case analysis over ascending group cardinalities.
///
/// `m` is the largest 1-based index with cumulative sum at most `k1`.
/// With one group no assignment can avoid it. When the source count covers
/// every group, all but the last filled group count. Otherwise the partial
/// fill of group `m+1` competes with group `m`: if it is at least as
/// large, groups `1..=m` count; if smaller, only groups `1..m` do.
fn kappa_from_sorted_sums(sums: &[usize], k1: usize) -> (usize, usize) {
    let n = sums.len();
    debug_assert!(n > 0 && k1 > 0);
    let mut partial = Vec::with_capacity(n);
    let mut acc = 0usize;
    for &c in sums {
        acc += c;
        partial.push(acc);
    }
    let total = acc;
    let m = partial.iter().take_while(|&&s| s <= k1).count();
    if n == 1 {
        return (0, m);
    }
    if k1 >= total {
        return (partial[n - 2], m);
    }
    if m == 0 {
        return (0, 0);
    }
    let spill = k1 - partial[m - 1];
    if spill < sums[m - 1] {
        let below = if m >= 2 { partial[m - 2] } else { 0 };
        (below, m)
    } else {
        (partial[m - 1], m)
    }
}

/// Flattened target column order for the fill: groups ascending, within a
/// group partitions by multiplicity then pattern, within a partition the
/// column indices ascending.
fn fill_target_columns(
    p2: &PartitionedRelation,
    split: &crate::partitions::AgreementSplit,
    ordered_groups: &[XGroup],
) -> Vec<usize> {
    // how many columns of each shared pattern are reserved for agreement
    let reserved: HashMap<&BitSet, usize> = split
        .shared
        .iter()
        .map(|s| (&s.sigma, s.matched()))
        .collect();
    let by_sigma: HashMap<&BitSet, usize> = p2
        .partitions()
        .iter()
        .enumerate()
        .map(|(i, part)| (&part.sigma, i))
        .collect();
    let mut columns = Vec::new();
    for group in ordered_groups {
        let mut members: Vec<&BitSet> = group.member_sigmas.iter().collect();
        members.sort_by_key(|sigma| {
            let part = &p2.partitions()[by_sigma[*sigma]];
            let skip = reserved.get(*sigma).copied().unwrap_or(0);
            part.multiplicity() - skip
        });
        for sigma in members {
            let part = &p2.partitions()[by_sigma[sigma]];
            let skip = reserved.get(sigma).copied().unwrap_or(0);
            let mut cols = part.members.clone();
            cols.sort_unstable();
            columns.extend_from_slice(&cols[skip..]);
        }
    }
    columns
}

/// Disagreeing source columns in ascending index order.
fn fill_source_columns(
    p1: &PartitionedRelation,
    split: &crate::partitions::AgreementSplit,
) -> Vec<usize> {
    let reserved: HashMap<&BitSet, usize> = split
        .shared
        .iter()
        .map(|s| (&s.sigma, s.matched()))
        .collect();
    let mut columns = Vec::new();
    for part in p1.partitions() {
        let skip = reserved.get(&part.sigma).copied().unwrap_or(0);
        let mut cols = part.members.clone();
        cols.sort_unstable();
        columns.extend_from_slice(&cols[skip..]);
    }
    columns.sort_unstable();
    columns
}

/// Total witness: shared patterns matched column-for-column, then the
/// grouped fill over the disagreeing columns, any excess source columns
/// repeating the last fill target.
fn build_witness_mapping(
    p1: &PartitionedRelation,
    p2: &PartitionedRelation,
    split: &crate::partitions::AgreementSplit,
    ordered_groups: &[XGroup],
) -> Result<ColumnMapping, Error> {
    let n1 = p1.base().y_count();
    let n2 = p2.base().y_count();
    let mut image = vec![usize::MAX; n1];

    let index_1: HashMap<&BitSet, usize> = p1
        .partitions()
        .iter()
        .enumerate()
        .map(|(i, part)| (&part.sigma, i))
        .collect();
    let index_2: HashMap<&BitSet, usize> = p2
        .partitions()
        .iter()
        .enumerate()
        .map(|(i, part)| (&part.sigma, i))
        .collect();
    for shared in &split.shared {
        let mut from = p1.partitions()[index_1[&shared.sigma]].members.clone();
        let mut to = p2.partitions()[index_2[&shared.sigma]].members.clone();
        from.sort_unstable();
        to.sort_unstable();
        for i in 0..shared.matched() {
            image[from[i]] = to[i];
        }
    }

    let sources = fill_source_columns(p1, split);
    let targets = fill_target_columns(p2, split, ordered_groups);
    debug_assert!(!targets.is_empty());
    for (rank, &j) in sources.iter().enumerate() {
        image[j] = targets[rank.min(targets.len() - 1)];
    }

    debug_assert!(image.iter().all(|&t| t != usize::MAX));
    ColumnMapping::new(n1, n2, image)
}

/// Recompute the reduction count from the explicit fill itself.
///
/// The fill is materialized, each group's received assignments are
/// tallied, and the reduction is read off the tallies: everything not
/// received by the last touched group counts, except that when the last
/// group received fewer than its predecessor, the predecessor's share is
/// excluded too. Serves as a differential check on [`kappa`].
pub fn kappa_oracle(r1: &Relation, r2: &Relation) -> Result<usize, Error> {
    let plan = kappa(r1, r2)?;
    let Some(mapping) = &plan.mapping else {
        return Ok(0);
    };
    let p2 = PartitionedRelation::new(r2);
    let split = agreement_split(&PartitionedRelation::new(r1), &p2)?;
    // group index of each target column that participates in the fill
    let mut group_of_column: HashMap<usize, usize> = HashMap::new();
    for (gi, group) in plan.ordered_groups.groups.iter().enumerate() {
        for sigma in &group.member_sigmas {
            let part = p2
                .partitions()
                .iter()
                .find(|part| &part.sigma == sigma)
                .expect("group member is a target pattern");
            for &col in &part.members {
                group_of_column.insert(col, gi);
            }
        }
    }
    let sources = fill_source_columns(&PartitionedRelation::new(r1), &split);
    let mut received = vec![0usize; plan.ordered_groups.len()];
    for &j in &sources {
        let gi = group_of_column[&mapping.apply(j)];
        received[gi] += 1;
    }
    let k1 = sources.len();
    let last = received
        .iter()
        .rposition(|&r| r > 0)
        .expect("fill assigns at least one column");
    let before = if last == 0 { 0 } else { received[last - 1] };
    let mut kappa_value = k1 - received[last];
    if received[last] < before {
        kappa_value -= before;
    }
    Ok(kappa_value)
}

fn pattern_counts(r: &Relation) -> HashMap<&BitSet, usize> {
    let mut counts = HashMap::new();
    for col in r.columns() {
        *counts.entry(col).or_insert(0) += 1;
    }
    counts
}

/// Ascending group cardinalities of `target`'s disagreeing patterns, via
/// counting sort. Runs in O(cells) time and O(rows + columns) space.
fn disagreeing_group_sums(
    target_counts: &HashMap<&BitSet, usize>,
    source_counts: &HashMap<&BitSet, usize>,
    width: usize,
) -> Vec<usize> {
    let disagreeing: Vec<(&BitSet, usize)> = target_counts
        .iter()
        .filter_map(|(&sigma, &mult)| {
            let matched = source_counts.get(sigma).copied().unwrap_or(0).min(mult);
            (mult > matched).then_some((sigma, mult - matched))
        })
        .collect();
    let raw = group_patterns(&disagreeing, width);
    let mut total = 0usize;
    let sums: Vec<usize> = raw
        .iter()
        .map(|g| {
            total += g.cardinality;
            g.cardinality
        })
        .collect();
    // counting sort keyed by cardinality
    let mut buckets = vec![0usize; total + 1];
    for &s in &sums {
        buckets[s] += 1;
    }
    let mut sorted = Vec::with_capacity(sums.len());
    for (value, &count) in buckets.iter().enumerate() {
        for _ in 0..count {
            sorted.push(value);
        }
    }
    sorted
}

/// The `kappa` count alone, without the plan or witness.
///
/// This is the streaming path: pattern tallies keyed by borrowed columns,
/// union-find over features, counting sort over group sums.
pub fn kappa_value(r1: &Relation, r2: &Relation) -> Result<usize, Error> {
    r1.same_x(r2)?;
    let counts_1 = pattern_counts(r1);
    let counts_2 = pattern_counts(r2);
    Ok(kappa_value_from_counts(&counts_1, &counts_2, r1.x_count()))
}

fn agreeing_count(a: &HashMap<&BitSet, usize>, b: &HashMap<&BitSet, usize>) -> usize {
    a.iter()
        .map(|(sigma, &mult)| mult.min(b.get(sigma).copied().unwrap_or(0)))
        .sum()
}

fn kappa_value_from_counts(
    counts_1: &HashMap<&BitSet, usize>,
    counts_2: &HashMap<&BitSet, usize>,
    width: usize,
) -> usize {
    let agree = agreeing_count(counts_1, counts_2);
    let n1: usize = counts_1.values().sum();
    let n2: usize = counts_2.values().sum();
    let k1 = n1 - agree;
    let k2 = n2 - agree;
    if k1 == 0 || k2 == 0 {
        return 0;
    }
    let sums = disagreeing_group_sums(counts_2, counts_1, width);
    kappa_from_sorted_sums(&sums, k1).0
}

/// Estimated upper bound on the minimum weight of any mapping `r1 -> r2`;
/// see the module notes on soundness.
pub fn min_weight_bound(r1: &Relation, r2: &Relation) -> Result<usize, Error> {
    r1.same_x(r2)?;
    let counts_1 = pattern_counts(r1);
    let counts_2 = pattern_counts(r2);
    let agree = agreeing_count(&counts_1, &counts_2);
    let kappa_12 = kappa_value_from_counts(&counts_1, &counts_2, r1.x_count());
    Ok(r1.y_count().max(r2.y_count()) - (agree + kappa_12))
}

/// Estimated upper bound on the distance between `r1` and `r2`; symmetric
/// in its arguments. See the module notes on soundness.
///
/// ```
/// use relmetric::{distance_bound, Relation};
///
/// // disjoint single-feature patterns: no agreement, one group per side
/// let r1 = Relation::from_rows(&[vec![1, 1], vec![0, 0]]).unwrap();
/// let r2 = Relation::from_rows(&[vec![0, 0], vec![1, 1]]).unwrap();
/// assert_eq!(distance_bound(&r1, &r2).unwrap(), 2);
/// assert_eq!(distance_bound(&r1, &r1).unwrap(), 0);
/// ```
pub fn distance_bound(r1: &Relation, r2: &Relation) -> Result<usize, Error> {
    r1.same_x(r2)?;
    let counts_1 = pattern_counts(r1);
    let counts_2 = pattern_counts(r2);
    let agree = agreeing_count(&counts_1, &counts_2);
    let kappa_12 = kappa_value_from_counts(&counts_1, &counts_2, r1.x_count());
    let kappa_21 = kappa_value_from_counts(&counts_2, &counts_1, r1.x_count());
    Ok(r1.y_count().max(r2.y_count()) - (agree + kappa_12).min(agree + kappa_21))
}

/// Distance bound on seeded column subsamples of each relation.
///
/// Each side draws `min(sample_size, column count)` columns without
/// replacement; the bound is then computed on the subrelations, so the
/// result is capped by `sample_size`. Deterministic per (inputs, seed).
pub fn distance_bound_sampled(
    r1: &Relation,
    r2: &Relation,
    sample_size: usize,
    seed: u64,
) -> Result<usize, Error> {
    assert!(sample_size >= 1, "sample_size must be at least 1");
    let s1 = sample_columns(r1, sample_size, derive_seed(seed, 1));
    let s2 = sample_columns(r2, sample_size, derive_seed(seed, 2));
    distance_bound(&s1, &s2)
}
