//! Similar-relation detection: how close is a link's anchor text to the
//! user's keywords? Both phrases are normalized to sorted lemma lists, a
//! pairwise word-similarity matrix is built, each keyword contributes its
//! best match, and the total is divided by the longer list's length. The
//! resulting probability in [0, 1] is compared against a threshold
//! (inclusive).

use serde::Serialize;
use thiserror::Error;

use crate::resources::ResourceSet;
use crate::text::{normalize, TokenList};
use crate::wordsim::{token_similarity, Ontology, SimilarityTable};

#[derive(Debug, Error, PartialEq)]
pub enum MatrixError {
    #[error("cell count {cells} does not match {rows} rows x {cols} cols")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        cells: usize,
    },
    #[error("cell ({row}, {col}) value {value} is outside [0, 1]")]
    CellOutOfRange {
        row: usize,
        col: usize,
        value: f64,
    },
}

/// Row-major word-similarity matrix. Rows are the user's lemmas, columns
/// the anchor's. Every cell is in [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarityMatrix {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    cells: Vec<f64>,
}

impl SimilarityMatrix {
    pub fn from_cells(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        cells: Vec<f64>,
    ) -> Result<SimilarityMatrix, MatrixError> {
        let (rows, cols) = (row_labels.len(), col_labels.len());
        if cells.len() != rows * cols {
            return Err(MatrixError::ShapeMismatch {
                rows,
                cols,
                cells: cells.len(),
            });
        }
        for (i, value) in cells.iter().enumerate() {
            if !(0.0..=1.0).contains(value) {
                return Err(MatrixError::CellOutOfRange {
                    row: i / cols.max(1),
                    col: i % cols.max(1),
                    value: *value,
                });
            }
        }
        Ok(SimilarityMatrix {
            row_labels,
            col_labels,
            cells,
        })
    }

    pub fn rows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.cells[row * self.col_labels.len() + col]
    }

    /// Best match for one keyword; 0.0 when there are no columns.
    pub fn row_max(&self, row: usize) -> f64 {
        let cols = self.col_labels.len();
        self.cells[row * cols..(row + 1) * cols]
            .iter()
            .copied()
            .fold(0.0, f64::max)
    }

    pub fn row_maxima(&self) -> Vec<f64> {
        (0..self.rows()).map(|r| self.row_max(r)).collect()
    }

    /// Rows as nested vectors, convenient for serialization and display.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        let cols = self.col_labels.len();
        (0..self.rows())
            .map(|r| self.cells[r * cols..(r + 1) * cols].to_vec())
            .collect()
    }
}

/// Scores every (user lemma, anchor lemma) pair. Works on any token
/// lists; the engine passes normalized (sorted) ones.
pub fn build_matrix(
    user: &TokenList,
    anchor: &TokenList,
    table: &SimilarityTable,
    ontology: Option<&Ontology>,
) -> SimilarityMatrix {
    let mut cells = Vec::with_capacity(user.len() * anchor.len());
    for u in user.iter() {
        for a in anchor.iter() {
            cells.push(token_similarity(u, a, table, ontology).clamp(0.0, 1.0));
        }
    }
    SimilarityMatrix {
        row_labels: user.lemmas(),
        col_labels: anchor.lemmas(),
        cells,
    }
}

/// Sums the row maxima and divides by the longer side. Empty phrases
/// score 0.0.
pub fn sentence_similarity(matrix: &SimilarityMatrix) -> (f64, f64) {
    let total: f64 = matrix.row_maxima().iter().sum();
    let divisor = matrix.rows().max(matrix.cols());
    let probability = if divisor == 0 {
        0.0
    } else {
        total / divisor as f64
    };
    (total, probability)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarVerdict {
    pub probability: f64,
    pub total: f64,
    pub row_maxima: Vec<f64>,
    pub passes: bool,
}

/// Scores two normalized token lists against a threshold (inclusive).
pub fn detect_similar(
    user: &TokenList,
    anchor: &TokenList,
    table: &SimilarityTable,
    ontology: Option<&Ontology>,
    threshold: f64,
) -> SimilarVerdict {
    let matrix = build_matrix(user, anchor, table, ontology);
    let row_maxima = matrix.row_maxima();
    let (total, probability) = sentence_similarity(&matrix);
    SimilarVerdict {
        probability,
        total,
        row_maxima,
        passes: probability >= threshold,
    }
}

/// Everything the `similarity` command and the C API report about one
/// phrase pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarityReport {
    pub phrase_a: String,
    pub phrase_b: String,
    pub a_normalized: Vec<String>,
    pub b_normalized: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
    pub row_maxima: Vec<f64>,
    pub total: f64,
    pub probability: f64,
    pub threshold: f64,
    pub passes: bool,
}

pub fn similarity_report(
    phrase_a: &str,
    phrase_b: &str,
    resources: &ResourceSet,
    threshold: f64,
) -> SimilarityReport {
    let a = normalize(phrase_a, &resources.lexical);
    let b = normalize(phrase_b, &resources.lexical);
    let matrix = build_matrix(&a, &b, &resources.table, resources.ontology.as_ref());
    let row_maxima = matrix.row_maxima();
    let (total, probability) = sentence_similarity(&matrix);
    SimilarityReport {
        phrase_a: phrase_a.to_string(),
        phrase_b: phrase_b.to_string(),
        a_normalized: a.lemmas(),
        b_normalized: b.lemmas(),
        matrix: matrix.to_rows(),
        row_maxima,
        total,
        probability,
        threshold,
        passes: probability >= threshold,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{tokenize, Token, TokenList};
    use crate::wordsim::SimilarityTable;

    fn example_table() -> SimilarityTable {
        let mut t = SimilarityTable::new();
        for (a, b, s) in [
            ("book", "computer", 0.1),
            ("book", "good", 0.1),
            ("book", "operating system", 0.1),
            ("good", "computer", 0.1),
            ("operating system", "computer", 0.2),
        ] {
            t.insert(a, b, s).unwrap();
        }
        t
    }

    fn list(lemmas: &[&str]) -> TokenList {
        TokenList::new(lemmas.iter().map(|l| Token::new(*l, *l)).collect())
    }

    #[test]
    fn matrix_reproduces_book_query_scores() {
        let table = example_table();
        let user = list(&["book", "good", "operating system"]);
        let anchor = list(&[
            "book",
            "computer",
            "fundamental",
            "good",
            "learn",
            "operating system",
        ]);
        let matrix = build_matrix(&user, &anchor, &table, None);
        let expected = [
            [1.0, 0.1, 0.0, 0.1, 0.0, 0.1],
            [0.1, 0.1, 0.0, 1.0, 0.0, 0.0],
            [0.1, 0.2, 0.0, 0.0, 0.0, 1.0],
        ];
        assert_eq!(matrix.to_rows(), expected);
        assert_eq!(matrix.row_maxima(), vec![1.0, 1.0, 1.0]);
        let (total, probability) = sentence_similarity(&matrix);
        assert_eq!(total, 3.0);
        assert_eq!(probability, 0.5);
    }

    #[test]
    fn matrix_reproduces_complete_book_scores() {
        let table = example_table();
        let user = list(&["book", "good", "operating system"]);
        let anchor = list(&["book", "complete", "good", "operating system"]);
        let matrix = build_matrix(&user, &anchor, &table, None);
        let expected = [
            [1.0, 0.0, 0.1, 0.1],
            [0.1, 0.0, 1.0, 0.0],
            [0.1, 0.0, 0.0, 1.0],
        ];
        assert_eq!(matrix.to_rows(), expected);
        let (total, probability) = sentence_similarity(&matrix);
        assert_eq!(total, 3.0);
        assert_eq!(probability, 0.75);
    }

    #[test]
    fn threshold_is_inclusive() {
        let table = example_table();
        let user = list(&["book", "good", "operating system"]);
        let anchor = list(&["book", "complete", "good", "operating system"]);
        let v = detect_similar(&user, &anchor, &table, None, 0.75);
        assert!(v.passes);
        let v = detect_similar(&user, &anchor, &table, None, 0.76);
        assert!(!v.passes);
    }

    #[test]
    fn empty_phrases_score_zero() {
        let table = example_table();
        let v = detect_similar(&list(&[]), &list(&["book"]), &table, None, 0.7);
        assert_eq!(v.probability, 0.0);
        assert!(!v.passes);
        let v = detect_similar(&list(&["book"]), &list(&[]), &table, None, 0.7);
        assert_eq!(v.probability, 0.0);
        let v = detect_similar(&list(&[]), &list(&[]), &table, None, 0.0);
        assert_eq!(v.probability, 0.0);
        // An all-zero threshold still passes: 0.0 >= 0.0.
        assert!(v.passes);
    }

    #[test]
    fn identical_distinct_lemma_lists_score_one() {
        let table = example_table();
        let user = list(&["book", "good"]);
        let v = detect_similar(&user, &user.clone(), &table, None, 1.0);
        assert_eq!(v.probability, 1.0);
        assert!(v.passes);
    }

    #[test]
    fn probability_never_leaves_unit_interval() {
        let table = example_table();
        let phrases: [&[&str]; 4] = [
            &["book"],
            &["book", "book", "book"],
            &["book", "good", "operating system"],
            &[],
        ];
        for a in phrases {
            for b in phrases {
                let v = detect_similar(&list(a), &list(b), &table, None, 0.7);
                assert!((0.0..=1.0).contains(&v.probability), "{a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn from_cells_validates_shape_and_range() {
        let ok = SimilarityMatrix::from_cells(
            vec!["a".into(), "b".into()],
            vec!["x".into()],
            vec![0.5, 1.0],
        );
        assert!(ok.is_ok());
        let bad_shape = SimilarityMatrix::from_cells(
            vec!["a".into()],
            vec!["x".into()],
            vec![0.5, 1.0],
        );
        assert!(matches!(bad_shape, Err(MatrixError::ShapeMismatch { .. })));
        let bad_cell =
            SimilarityMatrix::from_cells(vec!["a".into()], vec!["x".into()], vec![1.5]);
        assert!(matches!(bad_cell, Err(MatrixError::CellOutOfRange { .. })));
    }

    #[test]
    fn tokenized_input_works_unsorted() {
        // build_matrix does not require sorted lists; scores are the same
        // set either way.
        let table = example_table();
        let unsorted = tokenize("good book");
        let m = build_matrix(&unsorted, &unsorted, &table, None);
        assert_eq!(m.get(0, 0), 1.0);
        assert_eq!(m.get(0, 1), 0.1);
    }
}
