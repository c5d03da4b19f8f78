//! Trace-driven simulation: replays a browsing log (one JSON event per
//! line) through the engine and reports cache effectiveness.

use serde::{Deserialize, Serialize};
use thiserror::Error;
use url::Url;

use crate::engine::{EngineConfig, PrefetchEngine, PrefetchOutcome, RequestOutcome};
use crate::fetch::Fetcher;
use crate::page::{AnchorLink, PageSnapshot};
use crate::resources::ResourceSet;

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("line {line}: invalid trace event: {source}")]
    Parse {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceLink {
    pub text: String,
    pub href: String,
}

/// One page visit. `keywords`, when present, replaces the active query
/// from this event on. `next_click` is the URL the user navigates to
/// after this page (absolute or relative to `page_url`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEvent {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub keywords: Option<String>,
    pub page_url: String,
    #[serde(default)]
    pub links: Vec<TraceLink>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub next_click: Option<String>,
}

/// Strict JSONL parsing: any line that is not a valid event fails the
/// whole trace. Blank lines are allowed.
pub fn parse_trace(text: &str) -> Result<Vec<TraceEvent>, TraceError> {
    let mut events = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let event: TraceEvent =
            serde_json::from_str(line).map_err(|source| TraceError::Parse {
                line: i + 1,
                source,
            })?;
        events.push(event);
    }
    Ok(events)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationReport {
    /// Navigation requests issued (events with a `next_click`).
    pub requests: u64,
    pub hits: u64,
    pub misses: u64,
    /// hits / requests; 0.0 when no requests were made.
    pub hit_rate: f64,
    /// Pages fetched into the cache by the prefetcher.
    pub prefetched: u64,
    /// Distinct prefetched pages that later served a hit.
    pub used: u64,
    /// used / prefetched; 0.0 when nothing was prefetched.
    pub precision: f64,
    pub wasted_fetches: u64,
    /// Events dropped because their URLs could not be parsed.
    pub skipped_events: u64,
}

/// Replays `events` against a fresh engine. Events whose `page_url` or
/// `next_click` cannot be parsed are skipped whole and counted; the
/// keywords persist across events until an event replaces them.
pub fn run_trace(
    events: &[TraceEvent],
    resources: &ResourceSet,
    config: &EngineConfig,
    fetcher: &mut dyn Fetcher,
) -> SimulationReport {
    let mut engine = PrefetchEngine::new(resources.clone(), *config);
    let mut keywords = String::new();
    let mut requests = 0u64;
    let mut hits = 0u64;
    let mut misses = 0u64;
    let mut prefetched = 0u64;
    let mut skipped = 0u64;
    let mut used: std::collections::HashSet<String> = std::collections::HashSet::new();

    for event in events {
        let Ok(base) = Url::parse(&event.page_url) else {
            skipped += 1;
            continue;
        };
        let next_click = match &event.next_click {
            Some(raw) => match base.join(raw) {
                Ok(mut url) => {
                    url.set_fragment(None);
                    Some(url.to_string())
                }
                Err(_) => {
                    skipped += 1;
                    continue;
                }
            },
            None => None,
        };
        if let Some(kw) = &event.keywords {
            keywords = kw.clone();
        }

        let links = event
            .links
            .iter()
            .filter_map(|l| {
                let mut url = base.join(&l.href).ok()?;
                url.set_fragment(None);
                Some(AnchorLink {
                    anchor_text: l.text.clone(),
                    href: url.to_string(),
                })
            })
            .collect();
        let snapshot = PageSnapshot {
            url: {
                let mut url = base.clone();
                url.set_fragment(None);
                url.to_string()
            },
            links,
        };

        let list = engine.plan(&snapshot, &keywords);
        for record in engine.prefetch(&list, fetcher) {
            if record.outcome == PrefetchOutcome::Fetched {
                prefetched += 1;
            }
        }

        if let Some(url) = next_click {
            requests += 1;
            match engine.handle_request(&url) {
                RequestOutcome::Hit => {
                    hits += 1;
                    used.insert(url);
                }
                RequestOutcome::Miss => misses += 1,
            }
        }
    }

    let used = used.len() as u64;
    SimulationReport {
        requests,
        hits,
        misses,
        hit_rate: ratio(hits, requests),
        prefetched,
        used,
        precision: ratio(used, prefetched),
        wasted_fetches: prefetched - used,
        skipped_events: skipped,
    }
}

fn ratio(numerator: u64, denominator: u64) -> f64 {
    if denominator == 0 {
        0.0
    } else {
        numerator as f64 / denominator as f64
    }
}
