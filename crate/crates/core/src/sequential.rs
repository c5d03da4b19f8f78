//! Sequential-relation detection: does a link lead to the "next" page of
//! the one the user asked for? Two signals, both gated on the link
//! sharing its parent URL with the current page:
//!
//! * a short anchor carrying a pagination marker ("next", ">", ">>");
//! * anchor tokens that mirror the keywords position by position except
//!   for at least one numeric token that is the successor of the
//!   keyword's ("part 1" -> "part 2", "one" -> "2").

use std::collections::HashMap;

use crate::text::{Token, TokenList};

/// Lemmas that flag a pagination link on their own.
const NEXT_MARKERS: [&str; 3] = ["next", ">", ">>"];

/// Anchors longer than this are not treated as marker links; a long
/// sentence that happens to contain ">" is prose, not pagination.
const MARKER_TOKEN_LIMIT: usize = 3;

const NUMBER_WORDS: [&str; 20] = [
    "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven",
    "twelve", "thirteen", "fourteen", "fifteen", "sixteen", "seventeen", "eighteen", "nineteen",
    "twenty",
];

/// Maps number tokens (digit strings or spelled-out words) to values so
/// that "1"/"one" and "2"/"two" compare as equals across spellings.
#[derive(Debug, Clone)]
pub struct NumberLexicon {
    words: HashMap<String, u64>,
}

impl NumberLexicon {
    /// Word forms for 1..=bound; spelled-out words above twenty are not
    /// generated (digit tokens are unbounded regardless).
    pub fn with_bound(bound: u64) -> NumberLexicon {
        let mut words = HashMap::new();
        for (i, word) in NUMBER_WORDS.iter().enumerate() {
            let value = i as u64 + 1;
            if value > bound {
                break;
            }
            words.insert((*word).to_string(), value);
        }
        NumberLexicon { words }
    }

    /// Extends or overrides the default lexicon with (word, value) rows.
    pub fn from_entries<I>(entries: I) -> NumberLexicon
    where
        I: IntoIterator<Item = (String, u64)>,
    {
        let mut lex = NumberLexicon::with_bound(20);
        for (word, value) in entries {
            lex.words.insert(word.trim().to_lowercase(), value);
        }
        lex
    }

    /// Numeric value of a token lemma, if it has one.
    pub fn value(&self, lemma: &str) -> Option<u64> {
        if !lemma.is_empty() && lemma.bytes().all(|b| b.is_ascii_digit()) {
            return lemma.parse().ok();
        }
        self.words.get(lemma).copied()
    }
}

impl Default for NumberLexicon {
    fn default() -> NumberLexicon {
        NumberLexicon::with_bound(20)
    }
}

/// True when `b` denotes exactly `a` + 1, in either spelling.
pub fn is_successor(a: &Token, b: &Token, numbers: &NumberLexicon) -> bool {
    match (numbers.value(a.lemma()), numbers.value(b.lemma())) {
        (Some(va), Some(vb)) => vb == va.wrapping_add(1) && vb != 0,
        _ => false,
    }
}

/// True when the anchor is short and carries a pagination marker.
pub fn is_next_marker(anchor_tokens: &TokenList) -> bool {
    anchor_tokens.len() <= MARKER_TOKEN_LIMIT
        && anchor_tokens
            .iter()
            .any(|t| NEXT_MARKERS.contains(&t.lemma()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SequentialReason {
    NextMarker,
    SuccessorTokens,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct SequentialVerdict {
    pub is_sequential: bool,
    pub reason: Option<SequentialReason>,
}

impl SequentialVerdict {
    fn no() -> SequentialVerdict {
        SequentialVerdict {
            is_sequential: false,
            reason: None,
        }
    }

    fn yes(reason: SequentialReason) -> SequentialVerdict {
        SequentialVerdict {
            is_sequential: true,
            reason: Some(reason),
        }
    }
}

/// Decides whether an anchor is the sequel of the user's phrase. Both
/// token lists are raw tokenizer output (stop words intact) so positions
/// line up the way they appear on the page. `parents_match` is the
/// caller's verdict on parent-URL equality; nothing is sequential across
/// different sections of a site.
///
/// The positional branch requires equal lengths, every position equal or
/// a numeric successor, and at least one actual successor: a link whose
/// text merely repeats the keywords points at the same page, not the
/// next one.
pub fn detect_sequential(
    user_tokens: &TokenList,
    anchor_tokens: &TokenList,
    parents_match: bool,
    numbers: &NumberLexicon,
) -> SequentialVerdict {
    if !parents_match {
        return SequentialVerdict::no();
    }
    if is_next_marker(anchor_tokens) {
        return SequentialVerdict::yes(SequentialReason::NextMarker);
    }
    if user_tokens.len() != anchor_tokens.len() || user_tokens.is_empty() {
        return SequentialVerdict::no();
    }
    let mut successors = 0;
    for (u, a) in user_tokens.iter().zip(anchor_tokens.iter()) {
        if u.lemma() == a.lemma() {
            continue;
        }
        if is_successor(u, a, numbers) {
            successors += 1;
            continue;
        }
        return SequentialVerdict::no();
    }
    if successors == 0 {
        return SequentialVerdict::no();
    }
    SequentialVerdict::yes(SequentialReason::SuccessorTokens)
}
