//! Labeled binary relations and total column mappings between them.
//!
//! A [`Relation`] is a boolean matrix with rows indexed by an ordered list of
//! feature labels (the shared axis) and columns indexed by observation
//! labels. Storage is column-major: each observation carries the
//! [`BitSet`] of features it relates to, so comparing two columns' patterns
//! is a word-wise operation.

use crate::bits::BitSet;
use crate::error::Error;
use std::fmt;

/// A binary relation between an ordered feature axis and an ordered
/// observation axis.
///
/// Values are immutable after construction; every accessor borrows.
#[derive(Clone, PartialEq, Eq)]
pub struct Relation {
    x_labels: Vec<String>,
    y_labels: Vec<String>,
    columns: Vec<BitSet>,
}

impl Relation {
    /// Build a relation from 0/1 rows in feature-major order.
    ///
    /// `rows[i][j]` is 1 exactly when feature `i` relates to observation `j`.
    pub fn from_matrix(
        rows: &[Vec<u8>],
        x_labels: Vec<String>,
        y_labels: Vec<String>,
    ) -> Result<Relation, Error> {
        let x_count = rows.len();
        let y_count = rows.first().map_or(0, Vec::len);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != y_count {
                return Err(Error::RaggedMatrix {
                    row: i,
                    expected: y_count,
                    found: row.len(),
                });
            }
        }
        if x_labels.len() != x_count {
            return Err(Error::LabelCount {
                axis: "row",
                labels: x_labels.len(),
                dimension: x_count,
            });
        }
        if y_labels.len() != y_count {
            return Err(Error::LabelCount {
                axis: "column",
                labels: y_labels.len(),
                dimension: y_count,
            });
        }
        let mut columns = vec![BitSet::new(x_count); y_count];
        for (i, row) in rows.iter().enumerate() {
            for (j, &cell) in row.iter().enumerate() {
                match cell {
                    0 => {}
                    1 => columns[j].insert(i),
                    _ => return Err(Error::NonBinaryEntry { row: i, col: j }),
                }
            }
        }
        Self::check_labels(&x_labels, "row")?;
        Self::check_labels(&y_labels, "column")?;
        Ok(Relation {
            x_labels,
            y_labels,
            columns,
        })
    }

    /// [`from_matrix`](Self::from_matrix) with generated labels `x0..`, `y0..`.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Relation, Error> {
        let x_count = rows.len();
        let y_count = rows.first().map_or(0, Vec::len);
        Self::from_matrix(
            rows,
            (0..x_count).map(|i| format!("x{i}")).collect(),
            (0..y_count).map(|j| format!("y{j}")).collect(),
        )
    }

    /// Build a relation directly from column patterns.
    ///
    /// Every pattern must have width `x_labels.len()`.
    pub fn from_columns(
        x_labels: Vec<String>,
        y_labels: Vec<String>,
        columns: Vec<BitSet>,
    ) -> Result<Relation, Error> {
        if y_labels.len() != columns.len() {
            return Err(Error::LabelCount {
                axis: "column",
                labels: y_labels.len(),
                dimension: columns.len(),
            });
        }
        for (j, col) in columns.iter().enumerate() {
            if col.width() != x_labels.len() {
                return Err(Error::ColumnWidth {
                    column: j,
                    expected: x_labels.len(),
                    found: col.width(),
                });
            }
        }
        Self::check_labels(&x_labels, "row")?;
        Self::check_labels(&y_labels, "column")?;
        Ok(Relation {
            x_labels,
            y_labels,
            columns,
        })
    }

    fn check_labels(labels: &[String], axis: &'static str) -> Result<(), Error> {
        let mut seen = std::collections::HashSet::with_capacity(labels.len());
        for label in labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::DuplicateLabel {
                    axis,
                    label: label.clone(),
                });
            }
        }
        Ok(())
    }

    pub fn x_count(&self) -> usize {
        self.x_labels.len()
    }

    pub fn y_count(&self) -> usize {
        self.y_labels.len()
    }

    pub fn x_labels(&self) -> &[String] {
        &self.x_labels
    }

    pub fn y_labels(&self) -> &[String] {
        &self.y_labels
    }

    pub fn column(&self, j: usize) -> &BitSet {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[BitSet] {
        &self.columns
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.columns[y].contains(x)
    }

    /// Emit the relation back as 0/1 rows, inverse to [`from_matrix`](Self::from_matrix).
    pub fn to_matrix(&self) -> Vec<Vec<u8>> {
        (0..self.x_count())
            .map(|i| {
                self.columns
                    .iter()
                    .map(|c| u8::from(c.contains(i)))
                    .collect()
            })
            .collect()
    }

    /// True when the matrix has no all-zero row and no all-zero column.
    pub fn is_rel_plus(&self) -> bool {
        if self.columns.iter().any(BitSet::is_empty) {
            return false;
        }
        let mut covered = BitSet::new(self.x_count());
        for col in &self.columns {
            covered.union_with(col);
        }
        covered.count_ones() == self.x_count()
    }

    /// Check that `other` has the same feature axis, in the same order.
    pub fn same_x(&self, other: &Relation) -> Result<(), Error> {
        if self.x_labels == other.x_labels {
            Ok(())
        } else {
            Err(Error::XLabelMismatch)
        }
    }

    /// True when some column mapping into `other` sends every column to a
    /// superset pattern, i.e. a relation-preserving map exists.
    pub fn morphism_exists(&self, other: &Relation) -> Result<bool, Error> {
        self.same_x(other)?;
        Ok(self
            .columns
            .iter()
            .all(|c| other.columns.iter().any(|t| c.is_subset(t))))
    }

    /// New relation keeping only the selected columns, in the given order.
    /// Panics if an index is out of range or selected twice (labels must
    /// stay distinct).
    pub fn select_columns(&self, indices: &[usize]) -> Relation {
        let y_labels: Vec<String> = indices.iter().map(|&j| self.y_labels[j].clone()).collect();
        Self::check_labels(&y_labels, "column").expect("column selected twice");
        Relation {
            x_labels: self.x_labels.clone(),
            y_labels,
            columns: indices.iter().map(|&j| self.columns[j].clone()).collect(),
        }
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Relation {}x{} [", self.x_count(), self.y_count())?;
        for row in self.to_matrix() {
            write!(f, "  ")?;
            for cell in row {
                write!(f, "{cell} ")?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// A total function from the columns of one relation to the columns of
/// another. Not required to preserve relations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ColumnMapping {
    source_size: usize,
    target_size: usize,
    image: Vec<usize>,
}

impl ColumnMapping {
    pub fn new(source_size: usize, target_size: usize, image: Vec<usize>) -> Result<Self, Error> {
        if image.len() != source_size {
            return Err(Error::MappingShape {
                expected_source: source_size,
                expected_target: target_size,
            });
        }
        for (index, &value) in image.iter().enumerate() {
            if value >= target_size {
                return Err(Error::MappingRange {
                    index,
                    value,
                    target_size,
                });
            }
        }
        Ok(ColumnMapping {
            source_size,
            target_size,
            image,
        })
    }

    pub fn identity(size: usize) -> Self {
        ColumnMapping {
            source_size: size,
            target_size: size,
            image: (0..size).collect(),
        }
    }

    pub fn source_size(&self) -> usize {
        self.source_size
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    pub fn apply(&self, j: usize) -> usize {
        self.image[j]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// Check the mapping's dimensions against a concrete pair of relations.
    pub fn check_shape(&self, source: &Relation, target: &Relation) -> Result<(), Error> {
        if self.source_size != source.y_count() || self.target_size != target.y_count() {
            return Err(Error::MappingShape {
                expected_source: source.y_count(),
                expected_target: target.y_count(),
            });
        }
        Ok(())
    }

    /// True when every source column's pattern is contained in its image
    /// column's pattern, i.e. the mapping preserves relations.
    pub fn is_morphism(&self, source: &Relation, target: &Relation) -> Result<bool, Error> {
        source.same_x(target)?;
        self.check_shape(source, target)?;
        Ok(self
            .image
            .iter()
            .enumerate()
            .all(|(j, &t)| source.column(j).is_subset(target.column(t))))
    }
}
