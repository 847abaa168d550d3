//! Comparison machinery for labeled binary relations that share a feature
//! axis.
//!
//! A relation is a boolean matrix: rows are features, columns are
//! observations. This crate measures how far apart two such relations are:
//!
//! - [`metric`]: the weight of a column mapping and the exact distance,
//!   found by pruned exhaustive search: a pseudometric, and a true metric
//!   on column multisets.
//! - [`kappa`](mod@kappa): upper bounds on minimum weight and distance
//!   computed from pattern tallies alone, in time linear in the matrix
//!   size, plus seeded column subsampling for large inputs.
//! - [`partitions`]: the column-multiset view (patterns, multiplicities,
//!   agreement between two relations).
//! - [`dowker`]: the simplicial-complex view with total and differential
//!   weights per simplex.
//!
//! All values are immutable after construction and safe to share across
//! threads.
//!
//! ```
//! use relmetric::{distance_bound, distance_exact, Relation};
//!
//! // two features, observed three ways on the left and two on the right
//! let left = Relation::from_rows(&[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
//! let right = Relation::from_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
//!
//! let d = distance_exact(&left, &right).unwrap();
//! assert_eq!(d, 1);
//! // the tally-based estimate never beats the exact search here
//! assert!(distance_bound(&left, &right).unwrap() >= d);
//! ```

pub mod bits;
pub mod dowker;
pub mod error;
pub mod kappa;
pub mod metric;
pub mod partitions;
pub mod relation;
pub mod sample;
pub mod synth;

pub use bits::BitSet;
pub use dowker::{weight_bound_check, weight_bound_check_capped, DowkerComplex, VertexMap};
pub use error::Error;
pub use kappa::{
    distance_bound, distance_bound_sampled, kappa, kappa_oracle, kappa_value, min_weight_bound,
    x_grouping, KappaPlan, XGroup, XGrouping,
};
pub use metric::{
    distance_exact, distance_exact_with_budget, min_morphism_weight, min_weight_exact,
    min_weight_exact_with_budget, weight, weight_partition_form, MinWeight, WeightBreakdown,
    DEFAULT_EXACT_BUDGET,
};
pub use partitions::{agreement_split, AgreementSplit, Partition, PartitionedRelation, SharedPattern};
pub use relation::{ColumnMapping, Relation};
pub use sample::{sample_columns, SplitMix64};
