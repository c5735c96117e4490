//! Extraction from rendered MediaWiki HTML.

use percent_encoding::percent_decode_str;
use scraper::{ElementRef, Html, Node, Selector};

use super::{heading_matches, BibSection};
use crate::source::{is_namespaced, PageRef};

/// Article path prefixes recognized as internal links: classic
/// (`/wiki/Title`) and Parsoid (`./Title`) output.
const ARTICLE_PREFIXES: [&str; 2] = ["/wiki/", "./"];

const SKIPPED_ELEMENTS: [&str; 4] = ["script", "style", "noscript", "template"];
const SKIPPED_CLASSES: [&str; 1] = ["mw-editsection"];
const BLOCK_ELEMENTS: [&str; 22] = [
    "p", "div", "li", "ul", "ol", "dl", "dd", "dt", "br", "table", "tr", "td", "th", "h1", "h2",
    "h3", "h4", "h5", "h6", "section", "blockquote", "pre",
];

pub(super) struct Extracted {
    pub body_text: String,
    pub links: Vec<PageRef>,
    pub bibliography: Vec<BibSection>,
}

struct OpenSection {
    level: u8,
    name: String,
    text: String,
}

struct Walker<'r> {
    recognized: &'r [String],
    body: String,
    links: Vec<PageRef>,
    open: Option<OpenSection>,
    done: Vec<BibSection>,
}

/// Resolves an `href` to an article title, if it points at one.
pub(super) fn internal_link_title(href: &str) -> Option<PageRef> {
    let rest = ARTICLE_PREFIXES
        .iter()
        .find_map(|prefix| href.strip_prefix(prefix))?;
    let rest = rest.split(['?', '#']).next().unwrap_or("");
    let decoded = percent_decode_str(rest).decode_utf8().ok()?;
    let page = PageRef::new(&decoded).ok()?;
    if is_namespaced(page.title()) {
        return None;
    }
    Some(page)
}

fn heading_level(name: &str) -> Option<u8> {
    match name {
        "h1" => Some(1),
        "h2" => Some(2),
        "h3" => Some(3),
        "h4" => Some(4),
        "h5" => Some(5),
        "h6" => Some(6),
        _ => None,
    }
}

fn is_skipped(el: &ElementRef<'_>) -> bool {
    let v = el.value();
    SKIPPED_ELEMENTS.contains(&v.name()) || v.classes().any(|c| SKIPPED_CLASSES.contains(&c))
}

fn visible_text(el: ElementRef<'_>, out: &mut String) {
    for child in el.children() {
        match child.value() {
            Node::Text(t) => out.push_str(t),
            Node::Element(_) => {
                let child_el = ElementRef::wrap(child).expect("element node");
                if !is_skipped(&child_el) {
                    visible_text(child_el, out);
                }
            }
            _ => {}
        }
    }
}

pub(super) fn collapse_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

impl<'r> Walker<'r> {
    fn push_text(&mut self, t: &str) {
        self.body.push_str(t);
        if let Some(open) = &mut self.open {
            open.text.push_str(t);
        }
    }

    fn close_section(&mut self) {
        if let Some(open) = self.open.take() {
            self.done.push(BibSection {
                section: open.name,
                text: collapse_ws(&open.text),
            });
        }
    }

    fn heading(&mut self, level: u8, el: ElementRef<'_>) {
        let mut raw = String::new();
        visible_text(el, &mut raw);
        let name = collapse_ws(&raw);
        if self.open.as_ref().is_some_and(|o| level <= o.level) {
            self.close_section();
        }
        if self.open.is_none() && heading_matches(&name, self.recognized) {
            self.body.push(' ');
            self.body.push_str(&name);
            self.body.push(' ');
            self.open = Some(OpenSection {
                level,
                name,
                text: String::new(),
            });
            return;
        }
        self.push_text(" ");
        self.push_text(&name);
        self.push_text(" ");
    }

    fn walk(&mut self, el: ElementRef<'_>) {
        for child in el.children() {
            match child.value() {
                Node::Text(t) => self.push_text(t),
                Node::Element(e) => {
                    let child_el = ElementRef::wrap(child).expect("element node");
                    if is_skipped(&child_el) {
                        continue;
                    }
                    if let Some(level) = heading_level(e.name()) {
                        self.heading(level, child_el);
                        continue;
                    }
                    if e.name() == "a" {
                        if let Some(page) = e.attr("href").and_then(internal_link_title) {
                            self.links.push(page);
                        }
                    }
                    let block = BLOCK_ELEMENTS.contains(&e.name());
                    if block {
                        self.push_text(" ");
                    }
                    self.walk(child_el);
                    if block {
                        self.push_text(" ");
                    }
                }
                _ => {}
            }
        }
    }
}

pub(super) fn extract(markup: &str, recognized: &[String]) -> Extracted {
    let doc = Html::parse_document(markup);
    let mut walker = Walker {
        recognized,
        body: String::new(),
        links: Vec::new(),
        open: None,
        done: Vec::new(),
    };
    walker.walk(doc.root_element());
    walker.close_section();
    Extracted {
        body_text: collapse_ws(&walker.body),
        links: walker.links,
        bibliography: walker.done,
    }
}

/// Target of a rendered redirect page (`<div class="redirectMsg">`).
pub(super) fn redirect_target(markup: &str) -> Option<PageRef> {
    if !markup.contains("redirectMsg") && !markup.contains("redirectText") {
        return None;
    }
    let doc = Html::parse_document(markup);
    let sel = Selector::parse(".redirectMsg a[href], .redirectText a[href]").expect("static selector");
    doc.select(&sel)
        .find_map(|a| a.value().attr("href").and_then(internal_link_title))
}
