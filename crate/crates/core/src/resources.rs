//! Loading and validating the data files the engine runs on: stop words,
//! irregular lemmas, the word-similarity table, the ontology and the
//! number lexicon. A curated copy of each ships inside the binary;
//! callers can override any of them with files of the same format.

use std::collections::{HashMap, HashSet};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::sequential::NumberLexicon;
use crate::text::{lemmatize, tokenize, CompoundVocabulary, LexicalResources};
use crate::wordsim::{Ontology, OntologyError, SimilarityTable, TableError};

pub const BUNDLED_STOPWORDS: &str = include_str!("../resources/stopwords.txt");
pub const BUNDLED_LEMMAS: &str = include_str!("../resources/lemmas.tsv");
pub const BUNDLED_SIMTABLE: &str = include_str!("../resources/simtable.tsv");
pub const BUNDLED_ONTOLOGY: &str = include_str!("../resources/ontology.tsv");

#[derive(Debug, Error)]
pub enum ResourceError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: expected {expected}, got {got:?}")]
    MalformedLine {
        line: usize,
        expected: &'static str,
        got: String,
    },
    #[error("line {line}: {source}")]
    BadScore {
        line: usize,
        #[source]
        source: TableError,
    },
    #[error("lemma map entry {surface:?} -> {lemma:?} is not a fixed point (re-lemmatizes to {relemma:?})")]
    UnstableLemma {
        surface: String,
        lemma: String,
        relemma: String,
    },
    #[error("ontology: {0}")]
    Ontology(#[from] OntologyError),
}

/// Data lines of a resource file: comments (#) and blanks skipped,
/// 1-based line numbers preserved for error reporting.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'))
}

pub fn parse_stopwords(text: &str) -> HashSet<String> {
    data_lines(text)
        .map(|(_, line)| line.to_lowercase())
        .collect()
}

/// Two tab-separated columns: surface form, lemma. Every lemma must
/// itself lemmatize to itself, otherwise lemmatization would not be
/// idempotent; such rows are rejected here rather than misbehaving later.
pub fn parse_lemma_map(text: &str) -> Result<HashMap<String, String>, ResourceError> {
    let mut map = HashMap::new();
    for (line, content) in data_lines(text) {
        let mut fields = content.split('\t');
        let (Some(surface), Some(lemma), None) = (fields.next(), fields.next(), fields.next())
        else {
            return Err(ResourceError::MalformedLine {
                line,
                expected: "surface<TAB>lemma",
                got: content.to_string(),
            });
        };
        map.insert(
            surface.trim().to_lowercase(),
            lemma.trim().to_lowercase(),
        );
    }
    for (surface, lemma) in &map {
        let relemma = lemmatize(tokenize(lemma), &map).lemmas().join(" ");
        if relemma != *lemma {
            return Err(ResourceError::UnstableLemma {
                surface: surface.clone(),
                lemma: lemma.clone(),
                relemma,
            });
        }
    }
    Ok(map)
}

/// Three tab-separated columns: lemma, lemma, score in [0, 1]. Repeated
/// pairs overwrite. A stored 0.0 is meaningful (blocks ontology fallback).
pub fn parse_simtable(text: &str) -> Result<SimilarityTable, ResourceError> {
    let mut table = SimilarityTable::new();
    for (line, content) in data_lines(text) {
        let mut fields = content.split('\t');
        let (Some(a), Some(b), Some(score), None) =
            (fields.next(), fields.next(), fields.next(), fields.next())
        else {
            return Err(ResourceError::MalformedLine {
                line,
                expected: "lemma<TAB>lemma<TAB>score",
                got: content.to_string(),
            });
        };
        let score: f64 = score.trim().parse().map_err(|_| ResourceError::MalformedLine {
            line,
            expected: "a number in the score column",
            got: score.to_string(),
        })?;
        table
            .insert(a.trim(), b.trim(), score)
            .map_err(|source| ResourceError::BadScore { line, source })?;
    }
    Ok(table)
}

/// Two tab-separated columns: child, parent. Must form a single-rooted
/// acyclic tree.
pub fn parse_ontology(text: &str) -> Result<Ontology, ResourceError> {
    let mut edges = Vec::new();
    for (line, content) in data_lines(text) {
        let mut fields = content.split('\t');
        let (Some(child), Some(parent), None) = (fields.next(), fields.next(), fields.next())
        else {
            return Err(ResourceError::MalformedLine {
                line,
                expected: "child<TAB>parent",
                got: content.to_string(),
            });
        };
        edges.push((child.trim().to_string(), parent.trim().to_string()));
    }
    Ok(Ontology::from_edges(edges)?)
}

/// Two tab-separated columns: number word, value. Extends the built-in
/// one..twenty lexicon.
pub fn parse_numbers(text: &str) -> Result<NumberLexicon, ResourceError> {
    let mut entries = Vec::new();
    for (line, content) in data_lines(text) {
        let mut fields = content.split('\t');
        let (Some(word), Some(value), None) = (fields.next(), fields.next(), fields.next())
        else {
            return Err(ResourceError::MalformedLine {
                line,
                expected: "word<TAB>value",
                got: content.to_string(),
            });
        };
        let value: u64 = value.trim().parse().map_err(|_| ResourceError::MalformedLine {
            line,
            expected: "an unsigned integer in the value column",
            got: value.to_string(),
        })?;
        entries.push((word.trim().to_string(), value));
    }
    Ok(NumberLexicon::from_entries(entries))
}

/// Optional overrides for each bundled resource file.
#[derive(Debug, Clone, Default)]
pub struct ResourcePaths {
    pub stopwords: Option<PathBuf>,
    pub lemmas: Option<PathBuf>,
    pub simtable: Option<PathBuf>,
    pub ontology: Option<PathBuf>,
    pub numbers: Option<PathBuf>,
}

/// Everything the engine consults at runtime.
#[derive(Debug, Clone)]
pub struct ResourceSet {
    pub lexical: LexicalResources,
    pub table: SimilarityTable,
    pub ontology: Option<Ontology>,
    pub numbers: NumberLexicon,
}

impl ResourceSet {
    /// The curated in-binary resources. These are covered by tests, so
    /// parsing them cannot fail at runtime.
    pub fn bundled() -> ResourceSet {
        ResourceSet::from_texts(
            BUNDLED_STOPWORDS,
            BUNDLED_LEMMAS,
            BUNDLED_SIMTABLE,
            Some(BUNDLED_ONTOLOGY),
            None,
        )
        .expect("bundled resources are valid")
    }

    pub fn from_texts(
        stopwords: &str,
        lemmas: &str,
        simtable: &str,
        ontology: Option<&str>,
        numbers: Option<&str>,
    ) -> Result<ResourceSet, ResourceError> {
        let stopwords = parse_stopwords(stopwords);
        let lemma_map = parse_lemma_map(lemmas)?;
        let table = parse_simtable(simtable)?;
        let ontology = ontology.map(parse_ontology).transpose()?;
        let numbers = numbers
            .map(parse_numbers)
            .transpose()?
            .unwrap_or_default();
        Ok(ResourceSet::assemble(stopwords, lemma_map, table, ontology, numbers))
    }

    /// Loads with per-file overrides; unset paths fall back to the
    /// bundled data (no bundled numbers file: the built-in lexicon).
    pub fn load(paths: &ResourcePaths) -> Result<ResourceSet, ResourceError> {
        let stopwords = match &paths.stopwords {
            Some(p) => parse_stopwords(&read(p)?),
            None => parse_stopwords(BUNDLED_STOPWORDS),
        };
        let lemma_map = match &paths.lemmas {
            Some(p) => parse_lemma_map(&read(p)?)?,
            None => parse_lemma_map(BUNDLED_LEMMAS)?,
        };
        let table = match &paths.simtable {
            Some(p) => parse_simtable(&read(p)?)?,
            None => parse_simtable(BUNDLED_SIMTABLE)?,
        };
        let ontology = match &paths.ontology {
            Some(p) => Some(parse_ontology(&read(p)?)?),
            None => Some(parse_ontology(BUNDLED_ONTOLOGY)?),
        };
        let numbers = match &paths.numbers {
            Some(p) => parse_numbers(&read(p)?)?,
            None => NumberLexicon::default(),
        };
        Ok(ResourceSet::assemble(stopwords, lemma_map, table, ontology, numbers))
    }

    /// The compound vocabulary is not a separate file: every multi-word
    /// lemma mentioned by the table or the ontology is a known compound.
    fn assemble(
        stopwords: HashSet<String>,
        lemma_map: HashMap<String, String>,
        table: SimilarityTable,
        ontology: Option<Ontology>,
        numbers: NumberLexicon,
    ) -> ResourceSet {
        let mut multiword: Vec<String> = Vec::new();
        for (a, b) in table_lemmas(&table) {
            multiword.push(a);
            multiword.push(b);
        }
        if let Some(ont) = &ontology {
            multiword.extend(ontology_nodes(ont));
        }
        let compounds = CompoundVocabulary::from_lemmas(multiword);
        ResourceSet {
            lexical: LexicalResources::new(stopwords, lemma_map, compounds),
            table,
            ontology,
            numbers,
        }
    }
}

fn read(path: &Path) -> Result<String, ResourceError> {
    std::fs::read_to_string(path).map_err(|source| ResourceError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn table_lemmas(table: &SimilarityTable) -> Vec<(String, String)> {
    table.pairs().map(|((a, b), _)| (a.clone(), b.clone())).collect()
}

fn ontology_nodes(ontology: &Ontology) -> Vec<String> {
    ontology.nodes().map(str::to_string).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::normalize;

    #[test]
    fn bundled_resources_load() {
        let rs = ResourceSet::bundled();
        assert!(rs.lexical.stopwords().contains("the"));
        assert!(!rs.lexical.stopwords().contains("next"));
        assert!(!rs.lexical.stopwords().contains("one"));
        assert_eq!(rs.table.get("book", "computer"), Some(0.1));
        assert_eq!(rs.table.get("operating system", "computer"), Some(0.2));
        // Zero rows are present, not absent.
        assert_eq!(rs.table.get("good", "learn"), Some(0.0));
        let ont = rs.ontology.as_ref().unwrap();
        assert_eq!(ont.root(), "entity");
        assert!(ont.contains("book"));
        assert!(rs.lexical.compounds().contains("operating system"));
    }

    #[test]
    fn bundled_normalization_matches_fixtures() {
        let rs = ResourceSet::bundled();
        let a = normalize("what is the best books on operating system", &rs.lexical);
        assert_eq!(a.lemmas(), vec!["book", "good", "operating system"]);
        let b = normalize(
            "what is a good book to learn fundamentals of computer operating system",
            &rs.lexical,
        );
        assert_eq!(
            b.lemmas(),
            vec!["book", "computer", "fundamental", "good", "learn", "operating system"]
        );
        let c = normalize("A complete book for good operating system", &rs.lexical);
        assert_eq!(c.lemmas(), vec!["book", "complete", "good", "operating system"]);
    }

    #[test]
    fn lemma_map_rejects_unstable_entries() {
        // "walking" lemmatizes to "walk", so it is no fixed point.
        let err = parse_lemma_map("strolls\twalking\n").unwrap_err();
        assert!(matches!(err, ResourceError::UnstableLemma { .. }));
        // Mapping onto another map key that moves again is also unstable.
        let err = parse_lemma_map("a\tb\nb\tc\nc\tc\n").unwrap_err();
        assert!(matches!(err, ResourceError::UnstableLemma { .. }));
        // A self-consistent chain is fine.
        parse_lemma_map("best\tgood\nbetter\tgood\n").unwrap();
    }

    #[test]
    fn simtable_parser_validates() {
        assert!(parse_simtable("a\tb\t0.5\n").is_ok());
        assert!(matches!(
            parse_simtable("a\tb\t1.5\n"),
            Err(ResourceError::BadScore { line: 1, .. })
        ));
        assert!(matches!(
            parse_simtable("a\tb\n"),
            Err(ResourceError::MalformedLine { line: 1, .. })
        ));
        assert!(matches!(
            parse_simtable("a\tb\tx\n"),
            Err(ResourceError::MalformedLine { line: 1, .. })
        ));
    }

    #[test]
    fn comments_and_blanks_are_skipped_with_line_numbers_kept() {
        let err = parse_simtable("# header\n\na\tb\toops\n").unwrap_err();
        match err {
            ResourceError::MalformedLine { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn missing_file_is_an_io_error() {
        let paths = ResourcePaths {
            stopwords: Some(PathBuf::from("/nonexistent/stopwords.txt")),
            ..ResourcePaths::default()
        };
        assert!(matches!(
            ResourceSet::load(&paths),
            Err(ResourceError::Io { .. })
        ));
    }

    #[test]
    fn numbers_file_extends_the_lexicon() {
        let lex = parse_numbers("twenty-one\t21\nhundred\t100\n").unwrap();
        assert_eq!(lex.value("twenty-one"), Some(21));
        assert_eq!(lex.value("hundred"), Some(100));
        assert_eq!(lex.value("three"), Some(3));
        assert!(matches!(
            parse_numbers("x\tnot-a-number\n"),
            Err(ResourceError::MalformedLine { .. })
        ));
    }
}
