//! Page model: pulling scoreable hyperlinks out of HTML and the URL
//! arithmetic the relation detectors need.

use scraper::{Html, Selector};
use serde::Serialize;
use thiserror::Error;
use url::Url;

#[derive(Debug, Error, PartialEq)]
pub enum PageError {
    #[error("invalid URL {url:?}: {reason}")]
    InvalidUrl { url: String, reason: String },
}

fn invalid(url: &str, reason: impl ToString) -> PageError {
    PageError::InvalidUrl {
        url: url.to_string(),
        reason: reason.to_string(),
    }
}

/// One hyperlink: collapsed anchor text plus the absolute href it
/// resolves to (fragment stripped).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnchorLink {
    pub anchor_text: String,
    pub href: String,
}

/// A fetched page reduced to what the engine scores: its normalized URL
/// and its links in document order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PageSnapshot {
    pub url: String,
    pub links: Vec<AnchorLink>,
}

impl PageSnapshot {
    pub fn from_html(url: &str, html: &str) -> Result<PageSnapshot, PageError> {
        Ok(PageSnapshot {
            url: normalize_url(url)?,
            links: extract_anchors(html, url)?,
        })
    }
}

/// Collects `<a href>` elements, resolving relative hrefs against
/// `base_url`. Skipped: empty hrefs, pure fragments, links that do not
/// resolve, and non-fetchable schemes (mailto:, javascript:, ...).
/// Anchor text is the element's text with whitespace collapsed; links
/// wrapping an image fall back to the image's alt text.
pub fn extract_anchors(html: &str, base_url: &str) -> Result<Vec<AnchorLink>, PageError> {
    let base = Url::parse(base_url).map_err(|e| invalid(base_url, e))?;
    let document = Html::parse_document(html);
    let anchors = Selector::parse("a").expect("static selector");
    let images = Selector::parse("img").expect("static selector");

    let mut links = Vec::new();
    for element in document.select(&anchors) {
        let Some(href) = element.value().attr("href") else {
            continue;
        };
        let href = href.trim();
        if href.is_empty() || href.starts_with('#') {
            continue;
        }
        let Ok(mut resolved) = base.join(href) else {
            continue;
        };
        if !resolved.has_host() && resolved.scheme() != "file" {
            continue;
        }
        resolved.set_fragment(None);

        let mut text = collapse_whitespace(&element.text().collect::<String>());
        if text.is_empty() {
            text = element
                .select(&images)
                .find_map(|img| img.value().attr("alt"))
                .map(collapse_whitespace)
                .unwrap_or_default();
        }
        links.push(AnchorLink {
            anchor_text: text,
            href: resolved.to_string(),
        });
    }
    Ok(links)
}

fn collapse_whitespace(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// The URL one path level up, with query and fragment dropped and no
/// trailing slash. Two pages are "siblings" when their parents compare
/// equal.
pub fn parent_url(url: &str) -> Result<String, PageError> {
    let mut parsed = Url::parse(url).map_err(|e| invalid(url, e))?;
    if parsed.cannot_be_a_base() {
        return Err(invalid(url, "URL has no path hierarchy"));
    }
    parsed.set_query(None);
    parsed.set_fragment(None);
    {
        let mut segments = parsed
            .path_segments_mut()
            .map_err(|_| invalid(url, "URL has no path segments"))?;
        segments.pop_if_empty();
        segments.pop();
    }
    Ok(parsed.to_string().trim_end_matches('/').to_string())
}

/// Canonical form used as the cache key: parsed, fragment dropped,
/// scheme/host lowercased and default port removed by the parser.
pub fn normalize_url(url: &str) -> Result<String, PageError> {
    let mut parsed = Url::parse(url).map_err(|e| invalid(url, e))?;
    parsed.set_fragment(None);
    Ok(parsed.to_string())
}
