//! The simplicial-complex view of a relation.
//!
//! Each column's feature pattern spans a simplex on the feature vertices;
//! the complex is generated by the maximal patterns. Weights stay attached
//! to the distinct patterns, so nothing is ever expanded to the full face
//! lattice: the total weight of a face is summed on demand over the
//! patterns containing it.

use crate::bits::BitSet;
use crate::error::Error;
use crate::relation::Relation;
use std::collections::{HashMap, HashSet};

/// Dimension cap used by [`weight_bound_check`] when the feature axis is too
/// wide to enumerate every face.
pub const DEFAULT_DIMENSION_CAP: usize = 3;

const EXHAUSTIVE_VERTEX_LIMIT: usize = 20;

/// The Dowker complex of a relation, with per-simplex weights.
#[derive(Clone, Debug)]
pub struct DowkerComplex {
    vertex_labels: Vec<String>,
    /// Distinct column patterns with multiplicities (the empty pattern
    /// included when present).
    patterns: Vec<(BitSet, usize)>,
    /// Maximal nonempty patterns in bit-string order.
    maximal: Vec<BitSet>,
    column_count: usize,
}

impl DowkerComplex {
    pub fn new(relation: &Relation) -> Self {
        let mut buckets: HashMap<&BitSet, usize> = HashMap::new();
        for col in relation.columns() {
            *buckets.entry(col).or_insert(0) += 1;
        }
        let mut patterns: Vec<(BitSet, usize)> = buckets
            .into_iter()
            .map(|(sigma, mult)| (sigma.clone(), mult))
            .collect();
        patterns.sort_by(|a, b| a.0.cmp_bitstring(&b.0));

        // widest first, so every later pattern only needs checking against
        // already-accepted maximals
        let mut candidates: Vec<&BitSet> = patterns
            .iter()
            .map(|(s, _)| s)
            .filter(|s| !s.is_empty())
            .collect();
        candidates.sort_by_key(|s| std::cmp::Reverse(s.count_ones()));
        let mut maximal: Vec<BitSet> = Vec::new();
        for cand in candidates {
            if !maximal.iter().any(|m| cand.is_subset(m)) {
                maximal.push(cand.clone());
            }
        }
        maximal.sort_by(|a, b| a.cmp_bitstring(b));

        DowkerComplex {
            vertex_labels: relation.x_labels().to_vec(),
            patterns,
            maximal,
            column_count: relation.y_count(),
        }
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertex_labels
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn maximal_simplices(&self) -> &[BitSet] {
        &self.maximal
    }

    pub fn column_count(&self) -> usize {
        self.column_count
    }

    /// True when the complex has no simplices at all (the relation had no
    /// columns).
    pub fn is_empty(&self) -> bool {
        self.column_count == 0
    }

    /// Simplex membership. The empty simplex belongs to every complex built
    /// from at least one column.
    pub fn contains(&self, sigma: &BitSet) -> bool {
        if sigma.is_empty() {
            return self.column_count > 0;
        }
        self.maximal.iter().any(|m| sigma.is_subset(m))
    }

    /// Count of columns whose pattern contains `sigma`. Zero when `sigma`
    /// is not a simplex; the column count itself for the empty simplex.
    pub fn total_weight(&self, sigma: &BitSet) -> usize {
        self.patterns
            .iter()
            .filter(|(tau, _)| sigma.is_subset(tau))
            .map(|&(_, mult)| mult)
            .sum()
    }

    /// Count of columns whose pattern equals `sigma` exactly.
    pub fn differential_weight(&self, sigma: &BitSet) -> usize {
        self.patterns
            .iter()
            .find(|(tau, _)| tau == sigma)
            .map_or(0, |&(_, mult)| mult)
    }

    /// Every nonempty face of every maximal simplex, restricted to
    /// `popcount <= max_vertices` when given. Unordered.
    pub fn faces(&self, max_vertices: Option<usize>) -> Vec<BitSet> {
        let mut seen: HashSet<BitSet> = HashSet::new();
        for m in &self.maximal {
            let vertices: Vec<usize> = m.ones().collect();
            let cap = max_vertices.unwrap_or(vertices.len()).min(vertices.len());
            let mut stack: Vec<usize> = Vec::new();
            subsets_up_to(
                &vertices,
                cap,
                &mut stack,
                &mut |subset: &[usize]| {
                    seen.insert(BitSet::from_indices(self.vertex_count(), subset));
                },
            );
        }
        seen.into_iter().collect()
    }
}

/// Visit every nonempty subset of `items` with at most `cap` elements.
fn subsets_up_to(
    items: &[usize],
    cap: usize,
    stack: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    for (i, &item) in items.iter().enumerate() {
        stack.push(item);
        visit(stack);
        if stack.len() < cap {
            subsets_up_to(&items[i + 1..], cap, stack, visit);
        }
        stack.pop();
    }
}

/// A total function between the vertex sets of two complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexMap {
    image: Vec<usize>,
    target_count: usize,
}

impl VertexMap {
    pub fn new(source_count: usize, target_count: usize, image: Vec<usize>) -> Result<Self, Error> {
        if image.len() != source_count {
            return Err(Error::MappingShape {
                expected_source: source_count,
                expected_target: target_count,
            });
        }
        for (index, &value) in image.iter().enumerate() {
            if value >= target_count {
                return Err(Error::MappingRange {
                    index,
                    value,
                    target_size: target_count,
                });
            }
        }
        Ok(VertexMap {
            image,
            target_count,
        })
    }

    pub fn identity(count: usize) -> Self {
        VertexMap {
            image: (0..count).collect(),
            target_count: count,
        }
    }

    pub fn apply(&self, vertex: usize) -> usize {
        self.image[vertex]
    }

    /// True when the image of every maximal simplex of `source`, after
    /// removing duplicate vertices, is a simplex of `target`.
    pub fn is_simplicial_map(&self, source: &DowkerComplex, target: &DowkerComplex) -> Result<bool, Error> {
        if self.image.len() != source.vertex_count() || self.target_count != target.vertex_count() {
            return Err(Error::MappingShape {
                expected_source: source.vertex_count(),
                expected_target: target.vertex_count(),
            });
        }
        for m in source.maximal_simplices() {
            let mut image_simplex = BitSet::new(target.vertex_count());
            for v in m.ones() {
                image_simplex.insert(self.image[v]);
            }
            if !target.contains(&image_simplex) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Verify that the weight difference of every nonempty face in either
/// complex is bounded by `d_value * (dim + 1)`, for both total and
/// differential weights. `d_value` is the distance between the two
/// relations. The empty face carries no slack and is outside the claim.
///
/// Exhaustive while the feature axis has at most 20 vertices; above that,
/// faces are enumerated up to [`DEFAULT_DIMENSION_CAP`].
pub fn weight_bound_check(r1: &Relation, r2: &Relation, d_value: usize) -> Result<bool, Error> {
    weight_bound_check_capped(r1, r2, d_value, DEFAULT_DIMENSION_CAP)
}

/// [`weight_bound_check`] with an explicit dimension cap for wide axes.
pub fn weight_bound_check_capped(
    r1: &Relation,
    r2: &Relation,
    d_value: usize,
    dimension_cap: usize,
) -> Result<bool, Error> {
    r1.same_x(r2)?;
    if r1.y_count() != r2.y_count() {
        return Err(Error::MappingShape {
            expected_source: r1.y_count(),
            expected_target: r2.y_count(),
        });
    }
    let c1 = DowkerComplex::new(r1);
    let c2 = DowkerComplex::new(r2);
    let max_vertices = if r1.x_count() <= EXHAUSTIVE_VERTEX_LIMIT {
        None
    } else {
        Some(dimension_cap + 1)
    };
    let mut faces: HashSet<BitSet> = c1.faces(max_vertices).into_iter().collect();
    faces.extend(c2.faces(max_vertices));
    for sigma in &faces {
        let slack = d_value * sigma.count_ones();
        let dt = c1.total_weight(sigma).abs_diff(c2.total_weight(sigma));
        let dd = c1
            .differential_weight(sigma)
            .abs_diff(c2.differential_weight(sigma));
        if dt > slack || dd > slack {
            return Ok(false);
        }
    }
    Ok(true)
}
