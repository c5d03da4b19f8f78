//! C bindings for the prefetching engine.
//!
//! The engine is exposed as an opaque handle. Fallible calls return a
//! [`SemfetchStatus`]; results come back through out-parameters. Strings
//! returned by `*_json` functions are heap-allocated and must be
//! released with [`semfetch_string_free`].

use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;

use semfetch_core::engine::{analyze_page, EngineConfig};
use semfetch_core::page::PageSnapshot;
use semfetch_core::resources::{ResourcePaths, ResourceSet};
use semfetch_core::similar::similarity_report;

/// Result of a call into the library.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemfetchStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// An argument was out of range or otherwise unusable.
    InvalidArgument = 3,
    /// A resource file or document could not be loaded or parsed.
    ParseFailed = 4,
}

/// Opaque engine handle: the loaded resources plus the configuration.
pub struct SemfetchEngine {
    resources: ResourceSet,
    config: EngineConfig,
}

/// Borrows a C string as UTF-8.
///
/// # Safety
///
/// `ptr`, when non-null, must point to a NUL-terminated string that
/// stays valid for the duration of the call.
unsafe fn cstr<'a>(ptr: *const c_char) -> Result<&'a str, SemfetchStatus> {
    if ptr.is_null() {
        return Err(SemfetchStatus::NullArgument);
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| SemfetchStatus::InvalidUtf8)
}

/// Like [`cstr`] but treats null as absent.
///
/// # Safety
///
/// Same contract as [`cstr`].
unsafe fn opt_path(ptr: *const c_char) -> Result<Option<PathBuf>, SemfetchStatus> {
    if ptr.is_null() {
        return Ok(None);
    }
    cstr(ptr).map(|s| Some(PathBuf::from(s)))
}

/// Hands a Rust string to the caller. JSON output never contains NUL
/// bytes, so the conversion cannot fail for the strings produced here.
fn give_string(text: String, out: *mut *mut c_char) -> SemfetchStatus {
    match CString::new(text) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            SemfetchStatus::Ok
        }
        Err(_) => SemfetchStatus::InvalidArgument,
    }
}

/// Creates an engine with the built-in resources and default
/// configuration. Never fails; release with [`semfetch_engine_free`].
#[no_mangle]
pub extern "C" fn semfetch_engine_new() -> *mut SemfetchEngine {
    Box::into_raw(Box::new(SemfetchEngine {
        resources: ResourceSet::bundled(),
        config: EngineConfig::default(),
    }))
}

/// Creates an engine from resource files. Each path may be null to keep
/// the built-in data for that slot. On success `*out_engine` owns the
/// new engine; on failure it is left untouched.
///
/// # Safety
///
/// Path arguments must be null or valid NUL-terminated strings.
/// `out_engine` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn semfetch_engine_open(
    stopwords: *const c_char,
    lemmas: *const c_char,
    simtable: *const c_char,
    ontology: *const c_char,
    numbers: *const c_char,
    out_engine: *mut *mut SemfetchEngine,
) -> SemfetchStatus {
    if out_engine.is_null() {
        return SemfetchStatus::NullArgument;
    }
    let paths = ResourcePaths {
        stopwords: match opt_path(stopwords) {
            Ok(p) => p,
            Err(status) => return status,
        },
        lemmas: match opt_path(lemmas) {
            Ok(p) => p,
            Err(status) => return status,
        },
        simtable: match opt_path(simtable) {
            Ok(p) => p,
            Err(status) => return status,
        },
        ontology: match opt_path(ontology) {
            Ok(p) => p,
            Err(status) => return status,
        },
        numbers: match opt_path(numbers) {
            Ok(p) => p,
            Err(status) => return status,
        },
    };
    match ResourceSet::load(&paths) {
        Ok(resources) => {
            *out_engine = Box::into_raw(Box::new(SemfetchEngine {
                resources,
                config: EngineConfig::default(),
            }));
            SemfetchStatus::Ok
        }
        Err(_) => SemfetchStatus::ParseFailed,
    }
}

/// Releases an engine. Null is a no-op.
///
/// # Safety
///
/// `engine` must be null or a pointer obtained from
/// [`semfetch_engine_new`] or [`semfetch_engine_open`] that has not
/// been freed already.
#[no_mangle]
pub unsafe extern "C" fn semfetch_engine_free(engine: *mut SemfetchEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// Sets the similar-relation threshold (inclusive, within 0..=1).
///
/// # Safety
///
/// `engine` must be a valid engine pointer.
#[no_mangle]
pub unsafe extern "C" fn semfetch_engine_set_threshold(
    engine: *mut SemfetchEngine,
    threshold: f64,
) -> SemfetchStatus {
    let Some(engine) = engine.as_mut() else {
        return SemfetchStatus::NullArgument;
    };
    if !(0.0..=1.0).contains(&threshold) {
        return SemfetchStatus::InvalidArgument;
    }
    engine.config.threshold = threshold;
    SemfetchStatus::Ok
}

/// Sets the maximum number of links prefetched per page visit.
///
/// # Safety
///
/// `engine` must be a valid engine pointer.
#[no_mangle]
pub unsafe extern "C" fn semfetch_engine_set_max_prefetch(
    engine: *mut SemfetchEngine,
    max_prefetch: usize,
) -> SemfetchStatus {
    let Some(engine) = engine.as_mut() else {
        return SemfetchStatus::NullArgument;
    };
    engine.config.max_prefetch = max_prefetch;
    SemfetchStatus::Ok
}

/// Scores two phrases; writes the probability to `out_probability`.
///
/// # Safety
///
/// `engine` must be a valid engine pointer, `phrase_a` and `phrase_b`
/// valid NUL-terminated strings, `out_probability` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn semfetch_similarity(
    engine: *const SemfetchEngine,
    phrase_a: *const c_char,
    phrase_b: *const c_char,
    out_probability: *mut f64,
) -> SemfetchStatus {
    let Some(engine) = engine.as_ref() else {
        return SemfetchStatus::NullArgument;
    };
    if out_probability.is_null() {
        return SemfetchStatus::NullArgument;
    }
    let (a, b) = match (cstr(phrase_a), cstr(phrase_b)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(status), _) | (_, Err(status)) => return status,
    };
    let report = similarity_report(a, b, &engine.resources, engine.config.threshold);
    *out_probability = report.probability;
    SemfetchStatus::Ok
}

/// Scores two phrases and returns the full report as a JSON string in
/// `*out_json` (normalized phrases, matrix, total, probability,
/// verdict). Free it with [`semfetch_string_free`].
///
/// # Safety
///
/// Same contract as [`semfetch_similarity`], with `out_json` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn semfetch_similarity_json(
    engine: *const SemfetchEngine,
    phrase_a: *const c_char,
    phrase_b: *const c_char,
    out_json: *mut *mut c_char,
) -> SemfetchStatus {
    let Some(engine) = engine.as_ref() else {
        return SemfetchStatus::NullArgument;
    };
    if out_json.is_null() {
        return SemfetchStatus::NullArgument;
    }
    let (a, b) = match (cstr(phrase_a), cstr(phrase_b)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(status), _) | (_, Err(status)) => return status,
    };
    let report = similarity_report(a, b, &engine.resources, engine.config.threshold);
    match serde_json::to_string(&report) {
        Ok(text) => give_string(text, out_json),
        Err(_) => SemfetchStatus::ParseFailed,
    }
}

/// Scores a page's links against the keywords and returns the analysis
/// as a JSON string in `*out_json`: the ordered prefetch list plus the
/// rejected links. Relative links resolve against `base_url`. Free the
/// string with [`semfetch_string_free`].
///
/// # Safety
///
/// `engine` must be a valid engine pointer, the string arguments valid
/// NUL-terminated strings and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn semfetch_analyze_json(
    engine: *const SemfetchEngine,
    html: *const c_char,
    base_url: *const c_char,
    keywords: *const c_char,
    out_json: *mut *mut c_char,
) -> SemfetchStatus {
    let Some(engine) = engine.as_ref() else {
        return SemfetchStatus::NullArgument;
    };
    if out_json.is_null() {
        return SemfetchStatus::NullArgument;
    }
    let (html, base_url, keywords) = match (cstr(html), cstr(base_url), cstr(keywords)) {
        (Ok(h), Ok(u), Ok(k)) => (h, u, k),
        (Err(status), _, _) | (_, Err(status), _) | (_, _, Err(status)) => return status,
    };
    let snapshot = match PageSnapshot::from_html(base_url, html) {
        Ok(snapshot) => snapshot,
        Err(_) => return SemfetchStatus::InvalidArgument,
    };
    let report = analyze_page(&snapshot, keywords, &engine.resources, &engine.config);
    match serde_json::to_string(&report) {
        Ok(text) => give_string(text, out_json),
        Err(_) => SemfetchStatus::ParseFailed,
    }
}

/// Releases a string returned by this library. Null is a no-op.
///
/// # Safety
///
/// `text` must be null or a pointer returned by one of the `*_json`
/// functions that has not been freed already.
#[no_mangle]
pub unsafe extern "C" fn semfetch_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// The library version as a static string; do not free it.
#[no_mangle]
pub extern "C" fn semfetch_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}
