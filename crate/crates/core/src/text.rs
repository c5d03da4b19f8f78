//! Lexical pipeline for anchor texts and user keywords: tokenization,
//! stop-word removal, lemmatization and compound detection.
//!
//! The pipeline is deterministic and idempotent: running [`normalize`] on
//! its own (re-joined) output yields the same token list.

use std::collections::{HashMap, HashSet};

/// Tokens that pass through tokenization untouched even though they are
/// pure punctuation. They mark paginated "next page" links and the
/// sequential detector needs to see them.
const MARKER_TOKENS: [&str; 2] = [">", ">>"];

/// A single token. `surface` preserves the original spelling, `lemma` is
/// the lowercase normalized form used for all matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    surface: String,
    lemma: String,
}

impl Token {
    /// Invariant: `lemma` is non-empty, trimmed and lowercase. The
    /// constructor enforces this rather than trusting callers.
    pub fn new(surface: impl Into<String>, lemma: impl Into<String>) -> Token {
        let lemma = lemma.into().trim().to_lowercase();
        debug_assert!(!lemma.is_empty(), "token lemma must be non-empty");
        Token {
            surface: surface.into(),
            lemma,
        }
    }

    pub fn surface(&self) -> &str {
        &self.surface
    }

    pub fn lemma(&self) -> &str {
        &self.lemma
    }

    /// Compounds are multi-word lemmas produced by [`detect_compounds`].
    pub fn is_compound(&self) -> bool {
        self.lemma.contains(' ')
    }
}

/// An ordered list of tokens plus a flag recording whether it has been
/// through the sort step.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenList {
    tokens: Vec<Token>,
    sorted: bool,
}

impl TokenList {
    pub fn new(tokens: Vec<Token>) -> TokenList {
        TokenList {
            tokens,
            sorted: false,
        }
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn is_sorted(&self) -> bool {
        self.sorted
    }

    pub fn lemmas(&self) -> Vec<String> {
        self.tokens.iter().map(|t| t.lemma.clone()).collect()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Token> {
        self.tokens.iter()
    }
}

/// Vocabulary of known multi-word lemmas, stored as space-joined strings.
#[derive(Debug, Clone, Default)]
pub struct CompoundVocabulary {
    joined: HashSet<String>,
    max_pieces: usize,
}

impl CompoundVocabulary {
    /// Builds the vocabulary from lemmas; single-word entries are ignored.
    pub fn from_lemmas<I, S>(lemmas: I) -> CompoundVocabulary
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut vocab = CompoundVocabulary::default();
        for lemma in lemmas {
            let pieces: Vec<&str> = lemma.as_ref().split_whitespace().collect();
            if pieces.len() < 2 {
                continue;
            }
            vocab.max_pieces = vocab.max_pieces.max(pieces.len());
            vocab.joined.insert(pieces.join(" "));
        }
        vocab
    }

    pub fn contains(&self, joined: &str) -> bool {
        self.joined.contains(joined)
    }

    pub fn max_pieces(&self) -> usize {
        self.max_pieces
    }

    pub fn is_empty(&self) -> bool {
        self.joined.is_empty()
    }
}

/// Everything the lexical pipeline needs: stop words, irregular lemma
/// mappings and the compound vocabulary.
#[derive(Debug, Clone, Default)]
pub struct LexicalResources {
    stopwords: HashSet<String>,
    lemma_map: HashMap<String, String>,
    compounds: CompoundVocabulary,
}

impl LexicalResources {
    pub fn new(
        stopwords: HashSet<String>,
        lemma_map: HashMap<String, String>,
        compounds: CompoundVocabulary,
    ) -> LexicalResources {
        LexicalResources {
            stopwords,
            lemma_map,
            compounds,
        }
    }

    pub fn stopwords(&self) -> &HashSet<String> {
        &self.stopwords
    }

    pub fn lemma_map(&self) -> &HashMap<String, String> {
        &self.lemma_map
    }

    pub fn compounds(&self) -> &CompoundVocabulary {
        &self.compounds
    }
}

/// Splits on whitespace, strips punctuation from token edges and
/// lowercases the lemma. Interior punctuation ("it's", "a.b.c") is kept.
/// The pagination markers ">" and ">>" survive as standalone tokens.
pub fn tokenize(text: &str) -> TokenList {
    let mut tokens = Vec::new();
    for raw in text.split_whitespace() {
        if MARKER_TOKENS.contains(&raw) {
            tokens.push(Token::new(raw, raw));
            continue;
        }
        let stripped = raw
            .trim_start_matches(|c: char| !c.is_alphanumeric())
            .trim_end_matches(|c: char| !c.is_alphanumeric());
        if stripped.is_empty() {
            continue;
        }
        tokens.push(Token::new(stripped, stripped.to_lowercase()));
    }
    TokenList::new(tokens)
}

/// Drops every token whose lemma is a stop word. Preserves order and the
/// sorted flag.
pub fn remove_stopwords(list: TokenList, stopwords: &HashSet<String>) -> TokenList {
    let sorted = list.sorted;
    let tokens = list
        .tokens
        .into_iter()
        .filter(|t| !stopwords.contains(&t.lemma))
        .collect();
    TokenList { tokens, sorted }
}

/// Maps each token lemma to its base form: the irregular map wins, then a
/// light suffix stripper, then the map again on the stripped form (so
/// "bests" -> "best" -> "good"). Idempotent as long as every map value is
/// itself a fixed point, which the resource loader validates.
pub fn lemmatize(list: TokenList, lemma_map: &HashMap<String, String>) -> TokenList {
    let tokens = list
        .tokens
        .into_iter()
        .map(|t| {
            let lemma = lemma_of(&t.lemma, lemma_map);
            Token {
                surface: t.surface,
                lemma,
            }
        })
        .collect();
    TokenList {
        tokens,
        sorted: false,
    }
}

fn lemma_of(lemma: &str, lemma_map: &HashMap<String, String>) -> String {
    if let Some(mapped) = lemma_map.get(lemma) {
        return mapped.clone();
    }
    let stemmed = stem(lemma);
    match lemma_map.get(&stemmed) {
        Some(mapped) => mapped.clone(),
        None => stemmed,
    }
}

/// Light English suffix stripper covering plurals, "-ing" and "-ed".
/// Applied to a fixed point so that stemming is idempotent.
pub fn stem(word: &str) -> String {
    let mut current = word.to_string();
    loop {
        let next = stem_once(&current);
        if next == current {
            return current;
        }
        current = next;
    }
}

fn stem_once(word: &str) -> String {
    // The rules below slice by byte offset, and stripping a suffix from a
    // token with interior punctuation ("it's") would expose that
    // punctuation at the edge, where a later tokenize pass removes it.
    // Plain alphabetic words only.
    if !word.bytes().all(|b| b.is_ascii_alphabetic()) {
        return word.to_string();
    }
    let n = word.len();

    if n >= 5 {
        if let Some(base) = word.strip_suffix("ies") {
            return format!("{base}y");
        }
    }
    if n >= 4 && word.ends_with("es") {
        let base = &word[..n - 2];
        if base.ends_with('s')
            || base.ends_with('x')
            || base.ends_with('z')
            || base.ends_with("ch")
            || base.ends_with("sh")
        {
            return base.to_string();
        }
    }
    if n >= 4
        && word.ends_with('s')
        && !word.ends_with("ss")
        && !word.ends_with("us")
        && !word.ends_with("is")
    {
        return word[..n - 1].to_string();
    }
    // "-eed" words keep their stem vowel: "agreed" -> "agree" but "need"
    // and "speed" stay put. Checked before the plain "-ed" rule.
    if word.ends_with("eed") {
        if n >= 6 {
            return word[..n - 1].to_string();
        }
        return word.to_string();
    }
    if n >= 4 && word.ends_with("ed") {
        let base = &word[..n - 2];
        if has_vowel(base) {
            return undouble(base);
        }
    }
    if n >= 5 && word.ends_with("ing") {
        let base = &word[..n - 3];
        if has_vowel(base) {
            return undouble(base);
        }
    }
    word.to_string()
}

fn has_vowel(s: &str) -> bool {
    s.bytes().any(|b| matches!(b, b'a' | b'e' | b'i' | b'o' | b'u' | b'y'))
}

/// "stopp" -> "stop", "runn" -> "run"; final "l", "s" and "z" stay doubled.
fn undouble(s: &str) -> String {
    let bytes = s.as_bytes();
    let n = bytes.len();
    if n >= 2 && bytes[n - 1] == bytes[n - 2] {
        let c = bytes[n - 1] as char;
        if c.is_ascii_alphabetic()
            && !matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
            && !matches!(c, 'l' | 's' | 'z')
        {
            return s[..n - 1].to_string();
        }
    }
    s.to_string()
}

/// Greedy left-to-right merge of adjacent tokens whose joined lemmas form
/// a known multi-word term; the longest window wins at each position.
/// Expects lemmatized input. Merging adjacent entries of a sorted list
/// keeps it sorted, since the joined lemma starts with its first piece.
pub fn detect_compounds(list: TokenList, vocab: &CompoundVocabulary) -> TokenList {
    if vocab.is_empty() {
        return list;
    }
    let sorted = list.sorted;
    let tokens = list.tokens;
    let n = tokens.len();
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        let upper = vocab.max_pieces().min(n - i);
        let mut matched = None;
        for len in (2..=upper).rev() {
            let joined = tokens[i..i + len]
                .iter()
                .map(Token::lemma)
                .collect::<Vec<_>>()
                .join(" ");
            if vocab.contains(&joined) {
                matched = Some((len, joined));
                break;
            }
        }
        match matched {
            Some((len, joined)) => {
                let surface = tokens[i..i + len]
                    .iter()
                    .map(Token::surface)
                    .collect::<Vec<_>>()
                    .join(" ");
                out.push(Token::new(surface, joined));
                i += len;
            }
            None => {
                out.push(tokens[i].clone());
                i += 1;
            }
        }
    }
    TokenList {
        tokens: out,
        sorted,
    }
}

/// Sorts ascending by lemma (surface as a deterministic tiebreak).
pub fn sort(mut list: TokenList) -> TokenList {
    list.tokens
        .sort_by(|a, b| a.lemma.cmp(&b.lemma).then_with(|| a.surface.cmp(&b.surface)));
    list.sorted = true;
    list
}

/// Full pipeline: tokenize, drop stop words, lemmatize, drop stop words
/// again (lemmatization can land on a stop word, e.g. "beings" -> "be"),
/// sort, then merge compounds. Sorting before the merge makes the result
/// a canonical function of the lemma multiset, which in turn makes
/// normalize idempotent on its own output; the final sort restores the
/// sorted invariant in the rare case a merge perturbs it.
pub fn normalize(text: &str, resources: &LexicalResources) -> TokenList {
    let list = tokenize(text);
    let list = remove_stopwords(list, &resources.stopwords);
    let list = lemmatize(list, &resources.lemma_map);
    let list = remove_stopwords(list, &resources.stopwords);
    let list = sort(list);
    let list = detect_compounds(list, &resources.compounds);
    sort(list)
}
