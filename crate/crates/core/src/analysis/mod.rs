//! Turning raw page markup into links, body text and bibliography sections,
//! and matching an author's name against them.

mod html;
mod matching;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::source::{is_namespaced, FixturePageRecord, PageRef, RawPage};
use matching::{fold, PhraseSet};

/// Bibliography headings recognized unless configured otherwise.
pub const DEFAULT_SECTIONS: [&str; 5] = [
    "Publications",
    "References",
    "Further reading",
    "Bibliography",
    "Works",
];

pub fn default_sections() -> Vec<String> {
    DEFAULT_SECTIONS.iter().map(|s| s.to_string()).collect()
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("empty markup for {0}")]
    Empty(String),
    #[error("markup for {0} is neither HTML nor a page record")]
    Unrecognized(String),
    #[error("malformed page record for {title}: {reason}")]
    Record { title: String, reason: String },
}

#[derive(Debug, Error)]
pub enum PatternError {
    #[error("short name must be non-empty")]
    EmptyShortName,
    #[error("short name {short:?} is not a word of full name {full:?}")]
    ShortNameNotInFullName { short: String, full: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BibSection {
    pub section: String,
    pub text: String,
}

/// The analysable content of one article.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PageContent {
    pub page: PageRef,
    pub body_text: String,
    /// Internal article links, first-occurrence order, no duplicates, no self-link.
    pub links: Vec<PageRef>,
    pub bibliography: Vec<BibSection>,
}

/// How an author is recognized in page bodies and bibliographies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorPatterns {
    pub full_name: String,
    pub short_name: String,
    pub initials_forms: Vec<String>,
    /// Key terms that also qualify a page as in-domain.
    pub anchor_terms: Vec<String>,
    pub match_bare_surname_in_bib: bool,
}

impl AuthorPatterns {
    /// Builds patterns with the default initials forms
    /// (`"A. Einstein"`, `"Einstein, A."`) and bare-surname matching off.
    /// `short_name` defaults to the last word of `full_name`.
    pub fn new(full_name: &str, short_name: Option<&str>) -> Result<Self, PatternError> {
        let full_name = full_name.split_whitespace().collect::<Vec<_>>().join(" ");
        let short_name = match short_name {
            Some(s) => s.trim().to_string(),
            None => full_name
                .split_whitespace()
                .last()
                .unwrap_or_default()
                .to_string(),
        };
        let patterns = AuthorPatterns {
            initials_forms: default_initials_forms(&full_name, &short_name),
            full_name,
            short_name,
            anchor_terms: Vec::new(),
            match_bare_surname_in_bib: false,
        };
        patterns.validate()?;
        Ok(patterns)
    }

    pub fn with_anchors<I, S>(mut self, anchors: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.anchor_terms = anchors.into_iter().map(Into::into).collect();
        self
    }

    pub fn validate(&self) -> Result<(), PatternError> {
        if self.short_name.trim().is_empty() {
            return Err(PatternError::EmptyShortName);
        }
        let short = PhraseSet::new([self.short_name.as_str()]);
        if !short.any_in(&fold(&self.full_name)) {
            return Err(PatternError::ShortNameNotInFullName {
                short: self.short_name.clone(),
                full: self.full_name.clone(),
            });
        }
        Ok(())
    }

    fn bibliography_phrases(&self) -> PhraseSet {
        let mut phrases: Vec<&str> = vec![self.full_name.as_str()];
        phrases.extend(self.initials_forms.iter().map(String::as_str));
        if self.match_bare_surname_in_bib {
            phrases.push(self.short_name.as_str());
        }
        PhraseSet::new(phrases)
    }

    fn anchor_phrases(&self) -> PhraseSet {
        let mut phrases: Vec<&str> = vec![self.short_name.as_str()];
        phrases.extend(self.anchor_terms.iter().map(String::as_str));
        PhraseSet::new(phrases)
    }
}

/// `"<Initial>. <Surname>"` and `"<Surname>, <Initial>."` from the first
/// given name, when the full name has one.
pub fn default_initials_forms(full_name: &str, short_name: &str) -> Vec<String> {
    let first = full_name
        .split_whitespace()
        .find(|w| !w.eq_ignore_ascii_case(short_name));
    let initial = match first.and_then(|w| w.chars().find(|c| c.is_alphabetic())) {
        Some(c) => c.to_uppercase().collect::<String>(),
        None => return Vec::new(),
    };
    vec![
        format!("{initial}. {short_name}"),
        format!("{short_name}, {initial}."),
    ]
}

pub(crate) fn heading_matches(heading: &str, recognized: &[String]) -> bool {
    let h = html::collapse_ws(heading).to_lowercase();
    recognized
        .iter()
        .any(|r| html::collapse_ws(r).to_lowercase() == h)
}

enum Markup {
    Record(FixturePageRecord),
    Html,
}

fn classify(raw: &RawPage) -> Result<Markup, ParseError> {
    let trimmed = raw.markup.trim_start();
    if trimmed.is_empty() {
        return Err(ParseError::Empty(raw.page.title().to_string()));
    }
    if trimmed.starts_with('{') {
        let rec = serde_json::from_str(trimmed).map_err(|e| ParseError::Record {
            title: raw.page.title().to_string(),
            reason: e.to_string(),
        })?;
        return Ok(Markup::Record(rec));
    }
    if trimmed.starts_with('<') {
        return Ok(Markup::Html);
    }
    Err(ParseError::Unrecognized(raw.page.title().to_string()))
}

/// Where a redirect stub points, for both page records and rendered HTML.
pub fn redirect_target(markup: &str) -> Option<PageRef> {
    let trimmed = markup.trim_start();
    if trimmed.starts_with('{') {
        let rec: FixturePageRecord = serde_json::from_str(trimmed).ok()?;
        return rec.redirect.as_deref().and_then(|t| PageRef::new(t).ok());
    }
    html::redirect_target(markup)
}

fn clean_links(own: &PageRef, links: impl IntoIterator<Item = PageRef>) -> Vec<PageRef> {
    let mut seen = std::collections::HashSet::new();
    links
        .into_iter()
        .filter(|l| l.title() != own.title() && !is_namespaced(l.title()))
        .filter(|l| seen.insert(l.title().to_string()))
        .collect()
}

/// Parses a page record or rendered HTML into [`PageContent`].
///
/// `recognized` lists the bibliography headings to keep (case-insensitive).
pub fn parse_page(raw: &RawPage, recognized: &[String]) -> Result<PageContent, ParseError> {
    match classify(raw)? {
        Markup::Record(rec) => {
            let links = rec.links.iter().filter_map(|l| PageRef::new(l).ok());
            Ok(PageContent {
                page: raw.page.clone(),
                body_text: rec.body_text,
                links: clean_links(&raw.page, links),
                bibliography: rec
                    .bibliography
                    .into_iter()
                    .filter(|b| heading_matches(&b.section, recognized))
                    .map(|b| BibSection {
                        section: b.section,
                        text: b.text,
                    })
                    .collect(),
            })
        }
        Markup::Html => {
            let ex = html::extract(&raw.markup, recognized);
            Ok(PageContent {
                page: raw.page.clone(),
                body_text: ex.body_text,
                links: clean_links(&raw.page, ex.links),
                bibliography: ex.bibliography,
            })
        }
    }
}

/// Sections under recognized headings, in document order. Unparseable
/// markup yields no sections.
pub fn extract_bibliography(raw: &RawPage, recognized: &[String]) -> Vec<BibSection> {
    parse_page(raw, recognized)
        .map(|c| c.bibliography)
        .unwrap_or_default()
}

/// True iff the body mentions the short name or any anchor term as a whole word.
pub fn contains_anchor(content: &PageContent, patterns: &AuthorPatterns) -> bool {
    let phrases = patterns.anchor_phrases();
    !phrases.is_empty() && phrases.any_in(&fold(&content.body_text))
}

/// Non-overlapping author mentions across all bibliography sections.
pub fn count_mentions(bibliography: &[BibSection], patterns: &AuthorPatterns) -> u64 {
    let phrases = patterns.bibliography_phrases();
    bibliography
        .iter()
        .map(|s| phrases.count(&fold(&s.text)))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn raw(title: &str, markup: &str) -> RawPage {
        RawPage {
            page: PageRef::new(title).unwrap(),
            markup: markup.to_string(),
            fetched_at: None,
            from_cache: false,
        }
    }

    fn einstein() -> AuthorPatterns {
        AuthorPatterns::new("Albert Einstein", Some("Einstein"))
            .unwrap()
            .with_anchors(["physics", "relativity"])
    }

    fn content(body: &str) -> PageContent {
        PageContent {
            page: PageRef::new("X").unwrap(),
            body_text: body.into(),
            links: vec![],
            bibliography: vec![],
        }
    }

    fn bib(text: &str) -> Vec<BibSection> {
        vec![BibSection {
            section: "References".into(),
            text: text.into(),
        }]
    }

    #[test]
    fn record_links_keep_order() {
        let r = raw(
            "Albert_Einstein",
            r#"{"title":"Albert_Einstein","body_text":"b","links":["Ulm","German Empire","Physics"]}"#,
        );
        let c = parse_page(&r, &default_sections()).unwrap();
        let titles: Vec<_> = c.links.iter().map(|l| l.title()).collect();
        assert_eq!(titles, ["Ulm", "German_Empire", "Physics"]);
    }

    #[test]
    fn record_with_no_links() {
        let r = raw("Ulm", r#"{"title":"Ulm","body_text":"city"}"#);
        assert!(parse_page(&r, &default_sections()).unwrap().links.is_empty());
    }

    #[test]
    fn record_links_are_cleaned() {
        let r = raw(
            "Ulm",
            r#"{"title":"Ulm","links":["Bern","Ulm","bern","Category:Cities","Bern#History"]}"#,
        );
        let c = parse_page(&r, &default_sections()).unwrap();
        let titles: Vec<_> = c.links.iter().map(|l| l.title()).collect();
        assert_eq!(titles, ["Bern"]);
    }

    #[test]
    fn html_repeated_and_category_links() {
        let html = r#"<div class="mw-parser-output">
            <p><a href="/wiki/Ulm">Ulm</a> then <a href="/wiki/Physics">physics</a>,
            again <a href="/wiki/Ulm">Ulm</a> and <a href="/wiki/Ulm#History">Ulm history</a>.</p>
            <p><a href="/wiki/Category:X">Category X</a>
               <a href="https://www.example.org/">ext</a>
               <a href="/wiki/Albert_Einstein">self</a></p></div>"#;
        let c = parse_page(&raw("Albert_Einstein", html), &default_sections()).unwrap();
        let titles: Vec<_> = c.links.iter().map(|l| l.title()).collect();
        assert_eq!(titles, ["Ulm", "Physics"]);
    }

    #[test]
    fn unrecognizable_markup() {
        assert!(matches!(
            parse_page(&raw("X", "just words"), &default_sections()),
            Err(ParseError::Unrecognized(_))
        ));
        assert!(matches!(
            parse_page(&raw("X", "{not json"), &default_sections()),
            Err(ParseError::Record { .. })
        ));
        assert!(matches!(
            parse_page(&raw("X", "   "), &default_sections()),
            Err(ParseError::Empty(_))
        ));
    }

    #[test]
    fn bibliography_in_document_order() {
        let html = r#"<h2>Life</h2><p>text</p>
            <h2>References</h2><p>Einstein, A. (1905)</p>
            <h2>Further reading</h2><p>Pais, A. Subtle is the Lord</p>
            <h2>External links</h2><p>A. Einstein archive</p>"#;
        let secs = extract_bibliography(&raw("X", html), &default_sections());
        let names: Vec<_> = secs.iter().map(|s| s.section.as_str()).collect();
        assert_eq!(names, ["References", "Further reading"]);
        assert_eq!(secs[0].text, "Einstein, A. (1905)");
    }

    #[test]
    fn no_recognized_headings() {
        let html = "<h2>Life</h2><p>text</p><h2>See also</h2>";
        assert!(extract_bibliography(&raw("X", html), &default_sections()).is_empty());
    }

    #[test]
    fn uppercase_heading_matches() {
        let html = "<h2>REFERENCES</h2><p>A. Einstein</p>";
        let secs = extract_bibliography(&raw("X", html), &default_sections());
        assert_eq!(secs.len(), 1);
        assert_eq!(secs[0].section, "REFERENCES");
    }

    #[test]
    fn external_links_opt_in() {
        let html = "<h2>External links</h2><p>A. Einstein archive</p>";
        let mut sections = default_sections();
        assert!(extract_bibliography(&raw("X", html), &sections).is_empty());
        sections.push("External links".into());
        assert_eq!(extract_bibliography(&raw("X", html), &sections).len(), 1);
    }

    #[test]
    fn record_sections_are_filtered() {
        let r = raw(
            "X",
            r#"{"title":"X","bibliography":[{"section":"See also","text":"A. Einstein"},
                {"section":"references","text":"A. Einstein"}]}"#,
        );
        let c = parse_page(&r, &default_sections()).unwrap();
        assert_eq!(c.bibliography.len(), 1);
        assert_eq!(c.bibliography[0].section, "references");
    }

    #[test]
    fn anchor_detection() {
        let p = einstein();
        assert!(contains_anchor(&content("…Einstein's theory…"), &p));
        assert!(!contains_anchor(&content(""), &p));
        assert!(contains_anchor(&content("general relativity only"), &p));
        assert!(!contains_anchor(&content("Einsteinium is an element"), &p));
        assert!(!contains_anchor(&content("astrophysics"), &p));
    }

    #[test]
    fn mention_examples() {
        let mut p = AuthorPatterns::new("Albert Einstein", Some("Einstein")).unwrap();
        assert_eq!(count_mentions(&[], &p), 0);
        p.initials_forms = vec!["A. Einstein".into(), "Einstein, A.".into()];
        assert_eq!(count_mentions(&bib("A. Einstein and Einstein, A."), &p), 2);
        // Bare surname only when enabled.
        assert_eq!(count_mentions(&bib("Einstein wrote"), &p), 0);
        p.match_bare_surname_in_bib = true;
        assert_eq!(count_mentions(&bib("Einstein wrote"), &p), 1);
        // Full name absorbs the overlapping surname hit.
        assert_eq!(count_mentions(&bib("Albert Einstein"), &p), 1);
    }

    #[test]
    fn default_patterns() {
        let p = AuthorPatterns::new("Albert Einstein", None).unwrap();
        assert_eq!(p.short_name, "Einstein");
        assert_eq!(p.initials_forms, ["A. Einstein", "Einstein, A."]);
        assert!(!p.match_bare_surname_in_bib);
        assert!(AuthorPatterns::new("Albert Einstein", Some("Bohr")).is_err());
        assert!(AuthorPatterns::new("Albert Einstein", Some(" ")).is_err());
        assert!(AuthorPatterns::new("Einstein", None).unwrap().initials_forms.is_empty());
    }

    proptest! {
        #[test]
        fn one_more_occurrence_adds_exactly_one(
            prefix in "[a-z ,.]{0,60}",
            n in 0usize..5,
        ) {
            let p = einstein();
            let base: String = std::iter::repeat_n(" A. Einstein;", n).collect::<String>() + &prefix;
            let before = count_mentions(&bib(&base), &p);
            let after = count_mentions(&bib(&format!("{base} Einstein, A.")), &p);
            prop_assert_eq!(after, before + 1);
        }

        #[test]
        fn empty_bibliography_counts_zero(full in "[A-Z][a-z]{1,8} [A-Z][a-z]{1,8}") {
            let p = AuthorPatterns::new(&full, None).unwrap();
            prop_assert_eq!(count_mentions(&[], &p), 0);
        }

        #[test]
        fn no_shared_letters_means_no_anchor(body in "[0-9 ,.;:!?bdfgjkmoquwxz]{0,80}") {
            let p = einstein();
            prop_assert!(!contains_anchor(&content(&body), &p));
        }

        #[test]
        fn link_order_is_a_function_of_markup(
            titles in proptest::collection::vec("[A-Z][a-z]{1,6}", 0..12)
        ) {
            let html: String = titles.iter().map(|t| format!("<a href=\"/wiki/{t}\">{t}</a> ")).collect();
            let page = raw("Zzzz", &format!("<p>{html}</p>"));
            let a = parse_page(&page, &default_sections()).unwrap();
            let b = parse_page(&page, &default_sections()).unwrap();
            prop_assert_eq!(&a.links, &b.links);
            let mut expected: Vec<String> = Vec::new();
            for t in &titles {
                if !expected.contains(t) { expected.push(t.clone()); }
            }
            let got: Vec<String> = a.links.iter().map(|l| l.title().to_string()).collect();
            prop_assert_eq!(got, expected);
        }
    }
}
