//! Word-level relatedness: a curated similarity table backed by a rooted
//! is-a ontology. The table is consulted first; only pairs absent from it
//! fall through to the ontology's dice measure; pairs unknown to both
//! score 0.0.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::text::Token;

#[derive(Debug, Error, PartialEq)]
pub enum OntologyError {
    #[error("node {0:?} appears as a child twice")]
    DuplicateChild(String),
    #[error("ontology has no root (every node has a parent)")]
    NoRoot,
    #[error("ontology has multiple roots: {0:?} and {1:?}")]
    MultipleRoots(String, String),
    #[error("cycle detected at node {0:?}")]
    Cycle(String),
    #[error("node {0:?} not found in ontology")]
    NodeNotFound(String),
}

#[derive(Debug, Error, PartialEq)]
pub enum TableError {
    #[error("similarity score {score} for pair {a:?}/{b:?} is outside [0, 1]")]
    InvalidScore { a: String, b: String, score: f64 },
}

/// A rooted tree of is-a edges. Depths are precomputed at construction,
/// which also validates single-rootedness and acyclicity.
#[derive(Debug, Clone)]
pub struct Ontology {
    parent: HashMap<String, String>,
    depth: HashMap<String, u32>,
    root: String,
}

impl Ontology {
    /// Builds from (child, parent) edges. Node labels are matched
    /// case-insensitively by storing them lowercase.
    pub fn from_edges<I>(edges: I) -> Result<Ontology, OntologyError>
    where
        I: IntoIterator<Item = (String, String)>,
    {
        let mut parent: HashMap<String, String> = HashMap::new();
        let mut nodes: HashSet<String> = HashSet::new();
        for (child, par) in edges {
            let child = child.trim().to_lowercase();
            let par = par.trim().to_lowercase();
            nodes.insert(child.clone());
            nodes.insert(par.clone());
            if parent.insert(child.clone(), par).is_some() {
                return Err(OntologyError::DuplicateChild(child));
            }
        }

        let mut root: Option<String> = None;
        for node in &nodes {
            if !parent.contains_key(node) {
                match root {
                    None => root = Some(node.clone()),
                    Some(existing) => {
                        let (a, b) = if existing < *node {
                            (existing, node.clone())
                        } else {
                            (node.clone(), existing)
                        };
                        return Err(OntologyError::MultipleRoots(a, b));
                    }
                }
            }
        }
        let root = root.ok_or(OntologyError::NoRoot)?;

        // Walking every node to the root both detects cycles and yields
        // depths; paths are memoized through `depth`.
        let mut depth: HashMap<String, u32> = HashMap::new();
        depth.insert(root.clone(), 0);
        for node in &nodes {
            let mut path = Vec::new();
            let mut current = node.clone();
            let mut seen: HashSet<String> = HashSet::new();
            while !depth.contains_key(&current) {
                if !seen.insert(current.clone()) {
                    return Err(OntologyError::Cycle(current));
                }
                path.push(current.clone());
                current = parent
                    .get(&current)
                    .cloned()
                    .ok_or_else(|| OntologyError::NodeNotFound(current.clone()))?;
            }
            let mut d = depth[&current];
            for hop in path.into_iter().rev() {
                d += 1;
                depth.insert(hop, d);
            }
        }

        Ok(Ontology {
            parent,
            depth,
            root,
        })
    }

    pub fn root(&self) -> &str {
        &self.root
    }

    pub fn contains(&self, node: &str) -> bool {
        self.depth.contains_key(&node.to_lowercase())
    }

    pub fn node_count(&self) -> usize {
        self.depth.len()
    }

    /// All node labels, in no particular order.
    pub fn nodes(&self) -> impl Iterator<Item = &str> {
        self.depth.keys().map(String::as_str)
    }

    /// Edge distance from the root; the root has depth 0.
    pub fn depth(&self, node: &str) -> Result<u32, OntologyError> {
        let node = node.to_lowercase();
        self.depth
            .get(&node)
            .copied()
            .ok_or(OntologyError::NodeNotFound(node))
    }

    /// Lowest common ancestor: deepest node lying on both root paths.
    pub fn lca(&self, a: &str, b: &str) -> Result<String, OntologyError> {
        let a = a.to_lowercase();
        let b = b.to_lowercase();
        if !self.depth.contains_key(&a) {
            return Err(OntologyError::NodeNotFound(a));
        }
        if !self.depth.contains_key(&b) {
            return Err(OntologyError::NodeNotFound(b));
        }
        let mut ancestors: HashSet<&str> = HashSet::new();
        let mut current = a.as_str();
        loop {
            ancestors.insert(current);
            match self.parent.get(current) {
                Some(p) => current = p,
                None => break,
            }
        }
        let mut current = b.as_str();
        loop {
            if ancestors.contains(current) {
                return Ok(current.to_string());
            }
            match self.parent.get(current) {
                Some(p) => current = p,
                None => break,
            }
        }
        // Unreachable on a validated single-root tree.
        Ok(self.root.clone())
    }

    /// Dice similarity over tree depths: identical nodes score 1.0, any
    /// other pair scores 2*depth(lca) / (depth(a) + depth(b)). Two
    /// distinct nodes are never both at depth 0, so the division is safe.
    pub fn dice_similarity(&self, a: &str, b: &str) -> Result<f64, OntologyError> {
        let a = a.to_lowercase();
        let b = b.to_lowercase();
        if a == b {
            if !self.depth.contains_key(&a) {
                return Err(OntologyError::NodeNotFound(a));
            }
            return Ok(1.0);
        }
        let da = self.depth(&a)?;
        let db = self.depth(&b)?;
        let lca = self.lca(&a, &b)?;
        let dl = self.depth(&lca)?;
        Ok(2.0 * f64::from(dl) / (f64::from(da) + f64::from(db)))
    }
}

/// Symmetric lemma-pair scores. Pairs are stored under a canonical
/// ordering so insert/get are orientation-free.
#[derive(Debug, Clone, Default)]
pub struct SimilarityTable {
    scores: HashMap<(String, String), f64>,
}

impl SimilarityTable {
    pub fn new() -> SimilarityTable {
        SimilarityTable::default()
    }

    fn key(a: &str, b: &str) -> (String, String) {
        let a = a.to_lowercase();
        let b = b.to_lowercase();
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// Inserting an already-present pair overwrites its score.
    pub fn insert(&mut self, a: &str, b: &str, score: f64) -> Result<(), TableError> {
        if !(0.0..=1.0).contains(&score) {
            return Err(TableError::InvalidScore {
                a: a.to_string(),
                b: b.to_string(),
                score,
            });
        }
        self.scores.insert(Self::key(a, b), score);
        Ok(())
    }

    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        self.scores.get(&Self::key(a, b)).copied()
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// All stored pairs with their scores, in no particular order.
    pub fn pairs(&self) -> impl Iterator<Item = (&(String, String), f64)> {
        self.scores.iter().map(|(k, v)| (k, *v))
    }
}

/// Relatedness of two tokens by lemma: 1.0 for equal lemmas, then the
/// table, then the ontology, else 0.0.
pub fn token_similarity(
    a: &Token,
    b: &Token,
    table: &SimilarityTable,
    ontology: Option<&Ontology>,
) -> f64 {
    if a.lemma() == b.lemma() {
        return 1.0;
    }
    if let Some(score) = table.get(a.lemma(), b.lemma()) {
        return score;
    }
    if let Some(ont) = ontology {
        if let Ok(score) = ont.dice_similarity(a.lemma(), b.lemma()) {
            return score;
        }
    }
    0.0
}
