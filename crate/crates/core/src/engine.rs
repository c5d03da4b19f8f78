//! The prefetch engine: scores a page's links against the user's
//! keywords, assembles a bounded priority-ordered prefetch list, pulls
//! those pages into the cache and answers subsequent requests from it.

use serde::Serialize;

use crate::cache::PrefetchCache;
use crate::fetch::Fetcher;
use crate::page::{normalize_url, parent_url, AnchorLink, PageSnapshot};
use crate::resources::ResourceSet;
use crate::sequential::{detect_sequential, SequentialReason};
use crate::similar::{detect_similar, SimilarVerdict};
use crate::text::{normalize, tokenize};

/// Semantic link relations in priority order. Detection currently
/// produces `Sequential` and `Similar`; the remaining variants complete
/// the ranking for analyzers that can recognize them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Sequential,
    Similar,
    CauseEffect,
    Implication,
    SuperTypeSubType,
    Instance,
    Reference,
}

impl Relation {
    /// Lower rank prefetches first.
    pub fn priority_rank(self) -> u8 {
        match self {
            Relation::Sequential => 0,
            Relation::Similar => 1,
            Relation::CauseEffect => 2,
            Relation::Implication => 3,
            Relation::SuperTypeSubType => 4,
            Relation::Instance => 5,
            Relation::Reference => 6,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Relation::Sequential => "sequential",
            Relation::Similar => "similar",
            Relation::CauseEffect => "cause_effect",
            Relation::Implication => "implication",
            Relation::SuperTypeSubType => "super_type_sub_type",
            Relation::Instance => "instance",
            Relation::Reference => "reference",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineConfig {
    /// Minimum probability (inclusive) for the similar relation.
    pub threshold: f64,
    /// Upper bound on the prefetch list per page visit.
    pub max_prefetch: usize,
    pub cache_capacity: usize,
}

impl Default for EngineConfig {
    fn default() -> EngineConfig {
        EngineConfig {
            threshold: 0.7,
            max_prefetch: 5,
            cache_capacity: 100,
        }
    }
}

/// Why a link was (or was not) selected.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionDetail {
    Sequential { reason: SequentialReason },
    Similar { verdict: SimilarVerdict },
    /// Scored below the threshold; the verdict is kept for diagnostics.
    Unrelated { verdict: SimilarVerdict },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrefetchDecision {
    pub link: AnchorLink,
    pub relation: Option<Relation>,
    /// Sequential links score a flat 1.0; similar links their
    /// probability.
    pub score: f64,
    pub detail: DecisionDetail,
}

/// Scores every link of a page. Links with empty anchor text carry no
/// evidence and are skipped. The keywords are matched twice per link:
/// raw token positions for the sequential check, normalized lemmas for
/// the similar check.
pub fn evaluate_page(
    snapshot: &PageSnapshot,
    keywords: &str,
    resources: &ResourceSet,
    config: &EngineConfig,
) -> Vec<PrefetchDecision> {
    let user_raw = tokenize(keywords);
    let user_norm = normalize(keywords, &resources.lexical);
    let page_parent = parent_url(&snapshot.url).ok();

    let mut decisions = Vec::new();
    for link in &snapshot.links {
        if link.anchor_text.trim().is_empty() {
            continue;
        }
        let anchor_raw = tokenize(&link.anchor_text);
        let link_parent = parent_url(&link.href).ok();
        let parents_match = match (&page_parent, &link_parent) {
            (Some(a), Some(b)) => a.eq_ignore_ascii_case(b),
            _ => false,
        };

        let sequential =
            detect_sequential(&user_raw, &anchor_raw, parents_match, &resources.numbers);
        if sequential.is_sequential {
            decisions.push(PrefetchDecision {
                link: link.clone(),
                relation: Some(Relation::Sequential),
                score: 1.0,
                detail: DecisionDetail::Sequential {
                    reason: sequential.reason.expect("sequential verdicts carry a reason"),
                },
            });
            continue;
        }

        let anchor_norm = normalize(&link.anchor_text, &resources.lexical);
        let verdict = detect_similar(
            &user_norm,
            &anchor_norm,
            &resources.table,
            resources.ontology.as_ref(),
            config.threshold,
        );
        let (relation, detail) = if verdict.passes {
            (Some(Relation::Similar), DecisionDetail::Similar { verdict: verdict.clone() })
        } else {
            (None, DecisionDetail::Unrelated { verdict: verdict.clone() })
        };
        decisions.push(PrefetchDecision {
            link: link.clone(),
            relation,
            score: verdict.probability,
            detail,
        });
    }
    decisions
}

/// The bounded, priority-ordered selection for one page visit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrefetchList {
    entries: Vec<PrefetchDecision>,
}

impl PrefetchList {
    /// Keeps related links only, orders them by relation priority and
    /// score (descending) with document order as the stable tiebreak,
    /// drops later duplicates of the same URL, and truncates to
    /// `max_prefetch`.
    pub fn assemble(decisions: Vec<PrefetchDecision>, config: &EngineConfig) -> PrefetchList {
        let mut entries: Vec<PrefetchDecision> = decisions
            .into_iter()
            .filter(|d| d.relation.is_some())
            .collect();
        entries.sort_by(|a, b| {
            let ra = a.relation.expect("filtered above").priority_rank();
            let rb = b.relation.expect("filtered above").priority_rank();
            ra.cmp(&rb).then(
                b.score
                    .partial_cmp(&a.score)
                    .expect("scores are never NaN"),
            )
        });
        let mut seen = std::collections::HashSet::new();
        entries.retain(|d| seen.insert(cache_key(&d.link.href)));
        entries.truncate(config.max_prefetch);
        PrefetchList { entries }
    }

    pub fn entries(&self) -> &[PrefetchDecision] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn urls(&self) -> Vec<String> {
        self.entries.iter().map(|d| d.link.href.clone()).collect()
    }
}

fn cache_key(url: &str) -> String {
    normalize_url(url).unwrap_or_else(|_| url.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrefetchOutcome {
    /// Fetched and stored in the cache.
    Fetched,
    /// Already cached; no fetch was issued.
    AlreadyCached,
    /// The fetch failed; nothing was stored.
    Failed { error: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrefetchRecord {
    pub url: String,
    pub outcome: PrefetchOutcome,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RequestOutcome {
    Hit,
    Miss,
}

/// Stateful wrapper tying resources, configuration and the cache
/// together for a browsing session.
pub struct PrefetchEngine {
    resources: ResourceSet,
    config: EngineConfig,
    cache: PrefetchCache,
}

impl PrefetchEngine {
    pub fn new(resources: ResourceSet, config: EngineConfig) -> PrefetchEngine {
        let cache = PrefetchCache::new(config.cache_capacity);
        PrefetchEngine {
            resources,
            config,
            cache,
        }
    }

    pub fn resources(&self) -> &ResourceSet {
        &self.resources
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn cache(&self) -> &PrefetchCache {
        &self.cache
    }

    pub fn evaluate(&self, snapshot: &PageSnapshot, keywords: &str) -> Vec<PrefetchDecision> {
        evaluate_page(snapshot, keywords, &self.resources, &self.config)
    }

    pub fn plan(&self, snapshot: &PageSnapshot, keywords: &str) -> PrefetchList {
        PrefetchList::assemble(self.evaluate(snapshot, keywords), &self.config)
    }

    /// Pulls the listed pages into the cache in list order. URLs already
    /// cached are skipped without touching the fetcher; failed fetches
    /// are recorded and do not enter the cache.
    pub fn prefetch(&mut self, list: &PrefetchList, fetcher: &mut dyn Fetcher) -> Vec<PrefetchRecord> {
        let mut records = Vec::with_capacity(list.len());
        for decision in list.entries() {
            let key = cache_key(&decision.link.href);
            if self.cache.contains(&key) {
                records.push(PrefetchRecord {
                    url: key,
                    outcome: PrefetchOutcome::AlreadyCached,
                });
                continue;
            }
            match fetcher.fetch(&decision.link.href) {
                Ok(_body) => {
                    self.cache.insert(key.clone());
                    records.push(PrefetchRecord {
                        url: key,
                        outcome: PrefetchOutcome::Fetched,
                    });
                }
                Err(err) => {
                    records.push(PrefetchRecord {
                        url: key,
                        outcome: PrefetchOutcome::Failed {
                            error: err.to_string(),
                        },
                    });
                }
            }
        }
        records
    }

    /// Serves a navigation request from the cache. A hit refreshes the
    /// entry's recency; a miss changes nothing (the demand fetch happens
    /// outside the prefetch cache).
    pub fn handle_request(&mut self, url: &str) -> RequestOutcome {
        if self.cache.get(&cache_key(url)) {
            RequestOutcome::Hit
        } else {
            RequestOutcome::Miss
        }
    }
}

/// Flat per-link view used by the CLI and the C API.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecisionView {
    pub anchor_text: String,
    pub href: String,
    pub relation: String,
    pub score: f64,
}

impl DecisionView {
    fn from_decision(d: &PrefetchDecision) -> DecisionView {
        DecisionView {
            anchor_text: d.link.anchor_text.clone(),
            href: d.link.href.clone(),
            relation: d
                .relation
                .map(Relation::label)
                .unwrap_or("unrelated")
                .to_string(),
            score: d.score,
        }
    }
}

/// One page visit, fully analyzed: the ordered prefetch list plus the
/// links that did not make it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub page: String,
    pub keywords: String,
    pub threshold: f64,
    pub max_prefetch: usize,
    pub prefetch: Vec<DecisionView>,
    pub rejected: Vec<DecisionView>,
}

pub fn analyze_page(
    snapshot: &PageSnapshot,
    keywords: &str,
    resources: &ResourceSet,
    config: &EngineConfig,
) -> AnalysisReport {
    let decisions = evaluate_page(snapshot, keywords, resources, config);
    let list = PrefetchList::assemble(decisions.clone(), config);
    let selected: std::collections::HashSet<&str> = list
        .entries()
        .iter()
        .map(|d| d.link.href.as_str())
        .collect();
    let rejected = decisions
        .iter()
        .filter(|d| !selected.contains(d.link.href.as_str()))
        .map(DecisionView::from_decision)
        .collect();
    AnalysisReport {
        page: snapshot.url.clone(),
        keywords: keywords.to_string(),
        threshold: config.threshold,
        max_prefetch: config.max_prefetch,
        prefetch: list.entries().iter().map(DecisionView::from_decision).collect(),
        rejected,
    }
}
