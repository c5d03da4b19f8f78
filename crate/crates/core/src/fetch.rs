//! Page retrieval behind a trait so the engine and simulator can run
//! against live HTTP or canned pages interchangeably.

use std::collections::HashMap;
use std::time::Duration;

use thiserror::Error;

use crate::page::normalize_url;

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("request for {url} failed: {source}")]
    Http {
        url: String,
        #[source]
        source: reqwest::Error,
    },
    #[error("no page stored for {0}")]
    NotFound(String),
}

pub trait Fetcher {
    /// Retrieves the page body for `url`.
    fn fetch(&mut self, url: &str) -> Result<String, FetchError>;
}

/// Blocking HTTP fetcher used by the CLI's live mode.
pub struct HttpFetcher {
    client: reqwest::blocking::Client,
}

impl HttpFetcher {
    pub fn new(timeout: Duration) -> Result<HttpFetcher, reqwest::Error> {
        let client = reqwest::blocking::Client::builder()
            .timeout(timeout)
            .build()?;
        Ok(HttpFetcher { client })
    }
}

impl Fetcher for HttpFetcher {
    fn fetch(&mut self, url: &str) -> Result<String, FetchError> {
        let wrap = |source| FetchError::Http {
            url: url.to_string(),
            source,
        };
        self.client
            .get(url)
            .send()
            .and_then(|r| r.error_for_status())
            .and_then(|r| r.text())
            .map_err(wrap)
    }
}

/// In-memory fetcher for tests and trace simulation. Pages are keyed by
/// normalized URL. With `synthesize_missing` set, unknown URLs return an
/// empty page instead of failing, which is what trace runs want: the
/// trace names pages but does not carry their bodies.
#[derive(Debug, Default, Clone)]
pub struct MemoryFetcher {
    pages: HashMap<String, String>,
    synthesize_missing: bool,
    fetch_counts: HashMap<String, u64>,
}

impl MemoryFetcher {
    pub fn new() -> MemoryFetcher {
        MemoryFetcher::default()
    }

    pub fn synthesizing() -> MemoryFetcher {
        MemoryFetcher {
            synthesize_missing: true,
            ..MemoryFetcher::default()
        }
    }

    fn key(url: &str) -> String {
        normalize_url(url).unwrap_or_else(|_| url.to_string())
    }

    pub fn insert(&mut self, url: &str, body: impl Into<String>) {
        self.pages.insert(Self::key(url), body.into());
    }

    /// How many times `url` has been fetched; the engine's cached-skip
    /// behavior is asserted through this.
    pub fn fetch_count(&self, url: &str) -> u64 {
        self.fetch_counts.get(&Self::key(url)).copied().unwrap_or(0)
    }

    pub fn total_fetches(&self) -> u64 {
        self.fetch_counts.values().sum()
    }
}

impl Fetcher for MemoryFetcher {
    fn fetch(&mut self, url: &str) -> Result<String, FetchError> {
        let key = Self::key(url);
        *self.fetch_counts.entry(key.clone()).or_insert(0) += 1;
        match self.pages.get(&key) {
            Some(body) => Ok(body.clone()),
            None if self.synthesize_missing => Ok(String::new()),
            None => Err(FetchError::NotFound(url.to_string())),
        }
    }
}
