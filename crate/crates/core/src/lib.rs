//! Client-side semantic web prefetching.
//!
//! Given the keywords a user searched for and the page they are reading,
//! the engine scores every hyperlink on the page for two relations:
//!
//! * **sequential**: the link leads to the next page of the same thing
//!   (pagination markers, or anchor text that repeats the keywords with
//!   a numeric token incremented);
//! * **similar**: the anchor text means roughly what the keywords mean,
//!   measured by a word-similarity matrix over normalized lemmas.
//!
//! Related links are assembled into a bounded, priority-ordered prefetch
//! list (sequential before similar, higher scores first), pulled into an
//! LRU cache, and later navigation requests are served from that cache.
//! A trace simulator replays recorded browsing sessions and reports hit
//! rate and fetch precision.
//!
//! ```
//! use semfetch_core::engine::{analyze_page, EngineConfig};
//! use semfetch_core::page::PageSnapshot;
//! use semfetch_core::resources::ResourceSet;
//!
//! let html = r#"<a href="os-book.html">A complete book for good operating system</a>"#;
//! let page = PageSnapshot::from_html("http://shop.test/books/index.html", html).unwrap();
//! let report = analyze_page(
//!     &page,
//!     "what is the best books on operating system",
//!     &ResourceSet::bundled(),
//!     &EngineConfig::default(),
//! );
//! assert_eq!(report.prefetch.len(), 1);
//! assert!((report.prefetch[0].score - 0.75).abs() < 1e-9);
//! ```

pub mod cache;
pub mod engine;
pub mod fetch;
pub mod page;
pub mod resources;
pub mod sequential;
pub mod similar;
pub mod simulator;
pub mod text;
pub mod wordsim;

pub use cache::PrefetchCache;
pub use engine::{
    analyze_page, evaluate_page, AnalysisReport, EngineConfig, PrefetchDecision, PrefetchEngine,
    PrefetchList, Relation, RequestOutcome,
};
pub use fetch::{Fetcher, HttpFetcher, MemoryFetcher};
pub use page::{extract_anchors, normalize_url, parent_url, AnchorLink, PageSnapshot};
pub use resources::{ResourcePaths, ResourceSet};
pub use sequential::{detect_sequential, NumberLexicon, SequentialVerdict};
pub use similar::{
    build_matrix, detect_similar, sentence_similarity, similarity_report, SimilarVerdict,
    SimilarityMatrix, SimilarityReport,
};
pub use simulator::{parse_trace, run_trace, SimulationReport, TraceEvent, TraceLink};
pub use text::{normalize, tokenize, LexicalResources, Token, TokenList};
pub use wordsim::{token_similarity, Ontology, SimilarityTable};
