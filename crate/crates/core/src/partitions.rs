//! The column-multiset view of a relation.
//!
//! Every column is classified by its feature pattern; columns with equal
//! patterns form one partition. Two relations over the same feature axis are
//! compared pattern-by-pattern: patterns present on both sides "agree" and
//! are matched one-for-one up to the smaller multiplicity, everything else
//! disagrees.

use crate::bits::BitSet;
use crate::error::Error;
use crate::relation::Relation;
use std::collections::HashMap;

/// One pattern class: the pattern and the columns that carry it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub sigma: BitSet,
    pub members: Vec<usize>,
}

impl Partition {
    pub fn multiplicity(&self) -> usize {
        self.members.len()
    }
}

/// A relation together with its column partitions.
///
/// Partitions are kept in a canonical order (multiplicity ascending, ties
/// by the pattern's bit string), so downstream constructions and fixtures
/// are reproducible regardless of input column order.
#[derive(Clone, Debug)]
pub struct PartitionedRelation {
    base: Relation,
    partitions: Vec<Partition>,
    column_to_partition: Vec<usize>,
}

impl PartitionedRelation {
    pub fn new(relation: &Relation) -> Self {
        let mut buckets: HashMap<&BitSet, Vec<usize>> = HashMap::new();
        for (j, col) in relation.columns().iter().enumerate() {
            buckets.entry(col).or_default().push(j);
        }
        let mut partitions: Vec<Partition> = buckets
            .into_iter()
            .map(|(sigma, members)| Partition {
                sigma: sigma.clone(),
                members,
            })
            .collect();
        partitions.sort_by(|a, b| {
            a.multiplicity()
                .cmp(&b.multiplicity())
                .then_with(|| a.sigma.cmp_bitstring(&b.sigma))
        });
        let mut column_to_partition = vec![0; relation.y_count()];
        for (p, part) in partitions.iter().enumerate() {
            for &j in &part.members {
                column_to_partition[j] = p;
            }
        }
        PartitionedRelation {
            base: relation.clone(),
            partitions,
            column_to_partition,
        }
    }

    pub fn base(&self) -> &Relation {
        &self.base
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    /// Index into [`partitions`](Self::partitions) for a column.
    pub fn partition_of(&self, column: usize) -> usize {
        self.column_to_partition[column]
    }

    /// Multiplicity of an exact pattern, 0 when absent.
    pub fn multiplicity(&self, sigma: &BitSet) -> usize {
        self.partitions
            .iter()
            .find(|p| &p.sigma == sigma)
            .map_or(0, Partition::multiplicity)
    }

    /// Largest multiplicity over all partitions; 0 for a relation without
    /// columns.
    pub fn height(&self) -> usize {
        self.partitions
            .iter()
            .map(Partition::multiplicity)
            .max()
            .unwrap_or(0)
    }
}

/// A pattern present in both relations, with its multiplicity on each side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharedPattern {
    pub sigma: BitSet,
    pub multiplicity_1: usize,
    pub multiplicity_2: usize,
}

impl SharedPattern {
    /// Columns matched one-for-one between the two sides.
    pub fn matched(&self) -> usize {
        self.multiplicity_1.min(self.multiplicity_2)
    }
}

/// The agreeing/disagreeing decomposition of two relations' patterns.
///
/// Agreeing columns are matched one-for-one, so both sides report the same
/// agreeing count; a shared pattern's excess multiplicity counts as
/// disagreeing on the larger side.
#[derive(Clone, Debug)]
pub struct AgreementSplit {
    pub shared: Vec<SharedPattern>,
    pub only_1: Vec<(BitSet, usize)>,
    pub only_2: Vec<(BitSet, usize)>,
    columns_1: usize,
    columns_2: usize,
}

impl AgreementSplit {
    /// Count of columns matched to an equal pattern on the other side.
    /// Identical for both relations by construction.
    pub fn agreeing(&self) -> usize {
        self.shared.iter().map(SharedPattern::matched).sum()
    }

    pub fn disagreeing_1(&self) -> usize {
        self.columns_1 - self.agreeing()
    }

    pub fn disagreeing_2(&self) -> usize {
        self.columns_2 - self.agreeing()
    }

    /// Disagreeing patterns of side 1 with multiplicities: patterns only on
    /// side 1, plus the excess of shared patterns that side 1 holds.
    pub fn disagreeing_patterns_1(&self) -> Vec<(BitSet, usize)> {
        let mut out = self.only_1.clone();
        for s in &self.shared {
            if s.multiplicity_1 > s.multiplicity_2 {
                out.push((s.sigma.clone(), s.multiplicity_1 - s.multiplicity_2));
            }
        }
        out.sort_by(|a, b| a.0.cmp_bitstring(&b.0));
        out
    }

    pub fn disagreeing_patterns_2(&self) -> Vec<(BitSet, usize)> {
        let mut out = self.only_2.clone();
        for s in &self.shared {
            if s.multiplicity_2 > s.multiplicity_1 {
                out.push((s.sigma.clone(), s.multiplicity_2 - s.multiplicity_1));
            }
        }
        out.sort_by(|a, b| a.0.cmp_bitstring(&b.0));
        out
    }
}

/// Intersect two partitioned relations' pattern sets.
pub fn agreement_split(
    p1: &PartitionedRelation,
    p2: &PartitionedRelation,
) -> Result<AgreementSplit, Error> {
    p1.base().same_x(p2.base())?;
    let index_2: HashMap<&BitSet, usize> = p2
        .partitions()
        .iter()
        .enumerate()
        .map(|(i, p)| (&p.sigma, i))
        .collect();
    let mut shared = Vec::new();
    let mut only_1 = Vec::new();
    let mut matched_in_2 = vec![false; p2.partitions().len()];
    for part in p1.partitions() {
        match index_2.get(&part.sigma) {
            Some(&i) => {
                matched_in_2[i] = true;
                shared.push(SharedPattern {
                    sigma: part.sigma.clone(),
                    multiplicity_1: part.multiplicity(),
                    multiplicity_2: p2.partitions()[i].multiplicity(),
                });
            }
            None => only_1.push((part.sigma.clone(), part.multiplicity())),
        }
    }
    let mut only_2: Vec<(BitSet, usize)> = p2
        .partitions()
        .iter()
        .zip(&matched_in_2)
        .filter(|(_, &hit)| !hit)
        .map(|(p, _)| (p.sigma.clone(), p.multiplicity()))
        .collect();
    shared.sort_by(|a, b| a.sigma.cmp_bitstring(&b.sigma));
    only_1.sort_by(|a, b| a.0.cmp_bitstring(&b.0));
    only_2.sort_by(|a, b| a.0.cmp_bitstring(&b.0));
    Ok(AgreementSplit {
        shared,
        only_1,
        only_2,
        columns_1: p1.base().y_count(),
        columns_2: p2.base().y_count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(rows: &[&[u8]]) -> Relation {
        Relation::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn sigma(width: usize, indices: &[usize]) -> BitSet {
        BitSet::from_indices(width, indices)
    }

    /// Pattern/multiplicity pairs in canonical order, as index lists.
    fn summary(p: &PartitionedRelation) -> Vec<(Vec<usize>, usize)> {
        p.partitions()
            .iter()
            .map(|part| (part.sigma.ones().collect(), part.multiplicity()))
            .collect()
    }

    #[test]
    fn four_distinct_patterns() {
        let r = rel(&[
            &[1, 1, 1, 0],
            &[1, 0, 0, 0],
            &[0, 1, 1, 1],
            &[0, 0, 1, 1],
        ]);
        let p = PartitionedRelation::new(&r);
        assert_eq!(
            summary(&p),
            vec![
                (vec![2, 3], 1),
                (vec![0, 2], 1),
                (vec![0, 2, 3], 1),
                (vec![0, 1], 1),
            ]
        );
        assert_eq!(p.height(), 1);
    }

    #[test]
    fn merged_relation_has_height_two() {
        // two relations side by side; (a,b) and (a,c,d) then occur twice
        let r = rel(&[
            &[1, 1, 1, 0, 1, 1, 0],
            &[1, 0, 0, 0, 1, 0, 1],
            &[0, 1, 1, 1, 0, 1, 0],
            &[0, 0, 1, 1, 0, 1, 1],
        ]);
        let p = PartitionedRelation::new(&r);
        assert_eq!(
            summary(&p),
            vec![
                (vec![2, 3], 1),
                (vec![1, 3], 1),
                (vec![0, 2], 1),
                (vec![0, 2, 3], 2),
                (vec![0, 1], 2),
            ]
        );
        assert_eq!(p.height(), 2);
    }

    #[test]
    fn all_zero_columns_form_one_empty_class() {
        let r = rel(&[&[0, 0], &[0, 0], &[0, 0]]);
        let p = PartitionedRelation::new(&r);
        assert_eq!(summary(&p), vec![(vec![], 2)]);
        assert_eq!(p.height(), 2);
    }

    #[test]
    fn empty_relation_has_height_zero() {
        let r = Relation::from_rows(&[]).unwrap();
        let p = PartitionedRelation::new(&r);
        assert!(p.partitions().is_empty());
        assert_eq!(p.height(), 0);
    }

    #[test]
    fn members_partition_the_columns() {
        let r = rel(&[&[1, 0, 1, 0], &[0, 0, 0, 0], &[1, 1, 1, 1]]);
        let p = PartitionedRelation::new(&r);
        let mut seen: Vec<usize> = p
            .partitions()
            .iter()
            .flat_map(|part| part.members.iter().copied())
            .collect();
        seen.sort_unstable();
        assert_eq!(seen, vec![0, 1, 2, 3]);
        for part in p.partitions() {
            for &j in &part.members {
                assert_eq!(r.column(j), &part.sigma);
                assert_eq!(p.partition_of(j), p.partitions().iter().position(|q| q == part).unwrap());
            }
        }
    }

    #[test]
    fn split_against_self_has_no_disagreements() {
        let r = rel(&[&[1, 0, 1], &[0, 1, 1]]);
        let p = PartitionedRelation::new(&r);
        let split = agreement_split(&p, &p).unwrap();
        assert!(split.only_1.is_empty());
        assert!(split.only_2.is_empty());
        assert_eq!(split.agreeing(), 3);
        assert_eq!(split.disagreeing_1(), 0);
        assert_eq!(split.disagreeing_2(), 0);
    }

    #[test]
    fn split_with_no_common_patterns() {
        // source columns: {b}, {a,c}, {a,b,c}, {a,d}, {a,b,d}
        let r1 = rel(&[
            &[0, 1, 1, 1, 1],
            &[1, 0, 1, 0, 1],
            &[0, 1, 1, 0, 0],
            &[0, 0, 0, 1, 1],
        ]);
        // target columns: {}, {a}, {a,b}x2, {c}x2, {d}x4
        let r2 = rel(&[
            &[0, 1, 1, 1, 0, 0, 0, 0, 0, 0],
            &[0, 0, 1, 1, 0, 0, 0, 0, 0, 0],
            &[0, 0, 0, 0, 1, 1, 0, 0, 0, 0],
            &[0, 0, 0, 0, 0, 0, 1, 1, 1, 1],
        ]);
        let split = agreement_split(
            &PartitionedRelation::new(&r1),
            &PartitionedRelation::new(&r2),
        )
        .unwrap();
        assert!(split.shared.is_empty());
        assert_eq!(split.agreeing(), 0);
        assert_eq!(split.disagreeing_1(), 5);
        assert_eq!(split.disagreeing_2(), 10);
    }

    #[test]
    fn shared_excess_counts_as_disagreement() {
        // r1 patterns: {a}:2, {b}:1; r2 patterns: {a}:1, {c}:2
        let r1 = rel(&[&[1, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let r2 = rel(&[&[1, 0, 0], &[0, 0, 0], &[0, 1, 1]]);
        let split = agreement_split(
            &PartitionedRelation::new(&r1),
            &PartitionedRelation::new(&r2),
        )
        .unwrap();
        assert_eq!(split.agreeing(), 1);
        assert_eq!(split.disagreeing_1(), 2);
        assert_eq!(split.disagreeing_2(), 2);
        assert_eq!(
            split.disagreeing_patterns_1(),
            vec![(sigma(3, &[1]), 1), (sigma(3, &[0]), 1)]
        );
        assert_eq!(split.disagreeing_patterns_2(), vec![(sigma(3, &[2]), 2)]);
    }

    #[test]
    fn split_requires_shared_features() {
        let r1 = rel(&[&[1]]);
        let r2 = Relation::from_matrix(&[vec![1]], vec!["other".into()], vec!["y0".into()]).unwrap();
        let err = agreement_split(
            &PartitionedRelation::new(&r1),
            &PartitionedRelation::new(&r2),
        );
        assert!(matches!(err, Err(Error::XLabelMismatch)));
    }

    #[test]
    fn reconstruction_preserves_column_multiset() {
        let r = rel(&[&[1, 0, 1, 1], &[0, 0, 1, 0], &[1, 1, 1, 1]]);
        let p = PartitionedRelation::new(&r);
        let mut rebuilt: Vec<BitSet> = p
            .partitions()
            .iter()
            .flat_map(|part| std::iter::repeat_n(part.sigma.clone(), part.multiplicity()))
            .collect();
        let mut original: Vec<BitSet> = r.columns().to_vec();
        rebuilt.sort_by(|a, b| a.cmp_bitstring(b));
        original.sort_by(|a, b| a.cmp_bitstring(b));
        assert_eq!(rebuilt, original);
    }
}
