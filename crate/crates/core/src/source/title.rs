use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TitleError {
    #[error("empty title (input {0:?})")]
    Empty(String),
}

/// Canonical wiki title form: spaces become underscores, runs of
/// whitespace/underscores collapse, the `#fragment` is dropped and the first
/// letter is upper-cased.
pub fn normalize_title(raw: &str) -> Result<String, TitleError> {
    let without_fragment = raw.split('#').next().unwrap_or("");
    let mut out = String::with_capacity(without_fragment.len());
    let mut pending_sep = false;
    for c in without_fragment.chars() {
        if c == '_' || c.is_whitespace() {
            pending_sep = !out.is_empty();
            continue;
        }
        if pending_sep {
            out.push('_');
            pending_sep = false;
        }
        if out.is_empty() {
            out.extend(c.to_uppercase());
        } else {
            out.push(c);
        }
    }
    if out.is_empty() {
        return Err(TitleError::Empty(raw.to_string()));
    }
    Ok(out)
}

/// A title lives outside the article namespace when a ':' appears before
/// the first '/'.
pub fn is_namespaced(title: &str) -> bool {
    let head = title.split('/').next().unwrap_or("");
    head.contains(':')
}
