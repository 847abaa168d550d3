//! Seeded generators for synthetic relations, shared by tests and benches.

use crate::bits::BitSet;
use crate::relation::Relation;
use crate::sample::SplitMix64;

/// A relation whose cells are independently 1 with probability `density`,
/// with generated labels.
pub fn random_relation(
    x_count: usize,
    y_count: usize,
    density: f64,
    rng: &mut SplitMix64,
) -> Relation {
    let columns: Vec<BitSet> = (0..y_count)
        .map(|_| {
            let mut col = BitSet::new(x_count);
            for i in 0..x_count {
                if rng.unit() < density {
                    col.insert(i);
                }
            }
            col
        })
        .collect();
    Relation::from_columns(
        (0..x_count).map(|i| format!("x{i}")).collect(),
        (0..y_count).map(|j| format!("y{j}")).collect(),
        columns,
    )
    .expect("generated labels are distinct")
}

/// A pool of distinct sparse patterns, usable as a column vocabulary.
pub fn pattern_pool(
    width: usize,
    pool_size: usize,
    bits_per_pattern: usize,
    rng: &mut SplitMix64,
) -> Vec<BitSet> {
    let mut pool: Vec<BitSet> = Vec::with_capacity(pool_size);
    while pool.len() < pool_size {
        let mut pattern = BitSet::new(width);
        for _ in 0..bits_per_pattern {
            pattern.insert(rng.below(width as u64) as usize);
        }
        if !pool.contains(&pattern) {
            pool.push(pattern);
        }
    }
    pool
}

/// A relation whose columns are drawn uniformly from a pattern pool.
/// Column labels are prefixed so multiple corpora can share an axis.
pub fn relation_from_pool(
    x_count: usize,
    y_count: usize,
    pool: &[BitSet],
    label_prefix: &str,
    rng: &mut SplitMix64,
) -> Relation {
    let columns: Vec<BitSet> = (0..y_count)
        .map(|_| pool[rng.below(pool.len() as u64) as usize].clone())
        .collect();
    Relation::from_columns(
        (0..x_count).map(|i| format!("x{i}")).collect(),
        (0..y_count).map(|j| format!("{label_prefix}{j}")).collect(),
        columns,
    )
    .expect("generated labels are distinct")
}
