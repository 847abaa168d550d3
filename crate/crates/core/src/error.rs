//! Error type shared by the relation operations.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A matrix row had a different length than the first row.
    RaggedMatrix { row: usize, expected: usize, found: usize },
    /// A matrix entry was neither 0 nor 1.
    NonBinaryEntry { row: usize, col: usize },
    /// A column pattern's width does not match the feature axis.
    ColumnWidth { column: usize, expected: usize, found: usize },
    /// Label list length does not match the matrix dimension.
    LabelCount { axis: &'static str, labels: usize, dimension: usize },
    /// The same label appears twice on one axis.
    DuplicateLabel { axis: &'static str, label: String },
    /// Two relations that must share feature labels do not.
    XLabelMismatch,
    /// A column mapping's dimensions do not fit the relations it is applied to.
    MappingShape { expected_source: usize, expected_target: usize },
    /// A column mapping entry points past the target's column count.
    MappingRange { index: usize, value: usize, target_size: usize },
    /// The exact search space exceeds the configured budget.
    BudgetExceeded { mappings: u128, budget: u64 },
    /// No column mapping exists (the target has no columns but the source does).
    NoMappingExists,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::RaggedMatrix { row, expected, found } => {
                write!(f, "row {row} has {found} entries, expected {expected}")
            }
            Error::NonBinaryEntry { row, col } => {
                write!(f, "entry at row {row}, column {col} is not 0 or 1")
            }
            Error::ColumnWidth { column, expected, found } => {
                write!(f, "column {column} has width {found}, expected {expected}")
            }
            Error::LabelCount { axis, labels, dimension } => {
                write!(f, "{labels} {axis} labels for {dimension} {axis} entries")
            }
            Error::DuplicateLabel { axis, label } => {
                write!(f, "duplicate {axis} label {label:?}")
            }
            Error::XLabelMismatch => write!(f, "relations do not share feature labels"),
            Error::MappingShape { expected_source, expected_target } => {
                write!(
                    f,
                    "column mapping does not match relations with {expected_source} source and {expected_target} target columns"
                )
            }
            Error::MappingRange { index, value, target_size } => {
                write!(
                    f,
                    "mapping entry {index} points to column {value}, but the target has {target_size} columns"
                )
            }
            Error::BudgetExceeded { mappings, budget } => {
                write!(
                    f,
                    "exact search over {mappings} mappings exceeds the budget of {budget}; use the distance bound instead"
                )
            }
            Error::NoMappingExists => {
                write!(f, "no column mapping exists into a relation with no columns")
            }
        }
    }
}

impl std::error::Error for Error {}
