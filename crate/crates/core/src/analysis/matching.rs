//! Case-insensitive, word-bounded phrase matching over folded char buffers.
//!
//! A word boundary is any character that is neither a letter nor a digit,
//! or the edge of the text. Only pattern ends that are themselves
//! alphanumeric need a boundary: "A." may be followed by anything.

pub(crate) fn fold(text: &str) -> Vec<char> {
    text.chars().flat_map(char::to_lowercase).collect()
}

/// Folded, de-duplicated, non-empty patterns, longest first.
#[derive(Debug, Clone)]
pub(crate) struct PhraseSet {
    phrases: Vec<Vec<char>>,
}

impl PhraseSet {
    pub(crate) fn new<'a>(phrases: impl IntoIterator<Item = &'a str>) -> Self {
        let mut folded: Vec<Vec<char>> = phrases
            .into_iter()
            .map(|p| fold(p.trim()))
            .filter(|p| !p.is_empty())
            .collect();
        folded.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        folded.dedup();
        PhraseSet { phrases: folded }
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.phrases.is_empty()
    }

    /// Length of the longest phrase matching at `at`, if any.
    fn longest_at(&self, text: &[char], at: usize) -> Option<usize> {
        if at > 0 && text[at - 1].is_alphanumeric() {
            // Only phrases starting with punctuation could match here.
            return self
                .phrases
                .iter()
                .filter(|p| !p[0].is_alphanumeric())
                .find(|p| matches_at(text, at, p))
                .map(Vec::len);
        }
        self.phrases
            .iter()
            .find(|p| matches_at(text, at, p))
            .map(Vec::len)
    }

    /// Leftmost-longest, non-overlapping occurrence count.
    pub(crate) fn count(&self, text: &[char]) -> u64 {
        let mut hits = 0;
        let mut at = 0;
        while at < text.len() {
            match self.longest_at(text, at) {
                Some(len) => {
                    hits += 1;
                    at += len;
                }
                None => at += 1,
            }
        }
        hits
    }

    pub(crate) fn any_in(&self, text: &[char]) -> bool {
        (0..text.len()).any(|at| self.longest_at(text, at).is_some())
    }
}

fn matches_at(text: &[char], at: usize, phrase: &[char]) -> bool {
    let end = at + phrase.len();
    if end > text.len() || text[at..end] != *phrase {
        return false;
    }
    let first_ok = at == 0 || !phrase[0].is_alphanumeric() || !text[at - 1].is_alphanumeric();
    let last_ok = end == text.len()
        || !phrase[phrase.len() - 1].is_alphanumeric()
        || !text[end].is_alphanumeric();
    first_ok && last_ok
}
