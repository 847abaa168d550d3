//! Report structures emitted on standard output.

use relmetric::DowkerComplex;
use serde::Serialize;

/// The pairwise matrix report. `version` is bumped on any schema change.
///
/// In exact mode the matrix is symmetric with a zero diagonal. In the bound
/// modes every cell is computed independently and reported as calculated;
/// in particular a sampled bound on the diagonal can be positive, and
/// sampled cells need not be symmetric.
#[derive(Debug, Serialize)]
pub struct DistanceReport {
    pub version: u32,
    pub mode: String,
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl DistanceReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&join_csv_row(
            std::iter::once(String::new()).chain(self.labels.iter().cloned()),
        ));
        out.push('\n');
        for (label, row) in self.labels.iter().zip(&self.matrix) {
            out.push_str(&join_csv_row(
                std::iter::once(label.clone()).chain(row.iter().map(u64::to_string)),
            ));
            out.push('\n');
        }
        out
    }
}

fn join_csv_row(fields: impl Iterator<Item = String>) -> String {
    fields
        .map(|f| {
            if f.contains(',') || f.contains('"') || f.contains('\n') || f.contains('\r') {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// Weights of one simplex, labels sorted.
#[derive(Debug, Serialize)]
pub struct SimplexWeights {
    pub simplex: Vec<String>,
    pub total: u64,
    pub differential: u64,
}

/// The complex report: maximal simplices, and per-face weights on request.
#[derive(Debug, Serialize)]
pub struct DowkerReport {
    pub version: u32,
    pub relation: String,
    pub maximal_simplices: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<SimplexWeights>>,
}

impl DowkerReport {
    pub fn new(relation_name: &str, complex: &DowkerComplex, with_weights: bool) -> Self {
        let mut maximal: Vec<Vec<String>> = complex
            .maximal_simplices()
            .iter()
            .map(|s| simplex_labels(complex, s))
            .collect();
        maximal.sort();
        let weights = with_weights.then(|| {
            // wide axes get the same face cap as the bound checker
            let cap = (complex.vertex_count() > 20)
                .then_some(relmetric::dowker::DEFAULT_DIMENSION_CAP + 1);
            let mut faces = complex.faces(cap);
            faces.sort_by(|a, b| a.cmp_bitstring(b));
            let mut rows: Vec<SimplexWeights> = faces
                .iter()
                .map(|sigma| SimplexWeights {
                    simplex: simplex_labels(complex, sigma),
                    total: complex.total_weight(sigma) as u64,
                    differential: complex.differential_weight(sigma) as u64,
                })
                .collect();
            rows.sort_by(|a, b| {
                (a.simplex.len(), &a.simplex).cmp(&(b.simplex.len(), &b.simplex))
            });
            rows
        });
        DowkerReport {
            version: 1,
            relation: relation_name.to_string(),
            maximal_simplices: maximal,
            weights,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match &self.weights {
            Some(rows) => {
                out.push_str("simplex,total,differential\n");
                for row in rows {
                    out.push_str(&join_csv_row(
                        [
                            row.simplex.join(" "),
                            row.total.to_string(),
                            row.differential.to_string(),
                        ]
                        .into_iter(),
                    ));
                    out.push('\n');
                }
            }
            None => {
                out.push_str("maximal_simplex\n");
                for simplex in &self.maximal_simplices {
                    out.push_str(&join_csv_row(std::iter::once(simplex.join(" "))));
                    out.push('\n');
                }
            }
        }
        out
    }
}

fn simplex_labels(complex: &DowkerComplex, sigma: &relmetric::BitSet) -> Vec<String> {
    let mut labels: Vec<String> = sigma
        .ones()
        .map(|i| complex.vertex_labels()[i].clone())
        .collect();
    labels.sort();
    labels
}
