//! Just enough XML for our own graph documents: escaping on the way out and
//! a tiny element tree on the way in.

use quick_xml::events::Event;
use quick_xml::Reader;

use super::ExportError;

pub(super) fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

#[derive(Debug, Default)]
pub(super) struct Element {
    pub name: String,
    pub attrs: Vec<(String, String)>,
    pub children: Vec<Element>,
    pub text: String,
}

impl Element {
    pub fn attr(&self, key: &str) -> Option<&str> {
        self.attrs
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn child(&self, name: &str) -> Option<&Element> {
        self.children.iter().find(|c| c.name == name)
    }

    pub fn children_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Element> + 'a {
        self.children.iter().filter(move |c| c.name == name)
    }
}

fn local_name(raw: &[u8]) -> String {
    let s = String::from_utf8_lossy(raw);
    match s.rsplit_once(':') {
        Some((_, local)) => local.to_string(),
        None => s.into_owned(),
    }
}

fn element_from(e: &quick_xml::events::BytesStart<'_>) -> Result<Element, ExportError> {
    let mut el = Element {
        name: local_name(e.name().as_ref()),
        ..Element::default()
    };
    for a in e.attributes() {
        let a = a.map_err(|err| ExportError::Malformed(err.to_string()))?;
        let value = a
            .unescape_value()
            .map_err(|err| ExportError::Malformed(err.to_string()))?;
        el.attrs.push((local_name(a.key.as_ref()), value.into_owned()));
    }
    Ok(el)
}

/// Parses a document into its root element.
pub(super) fn parse(text: &str) -> Result<Element, ExportError> {
    let mut reader = Reader::from_str(text);
    let mut stack: Vec<Element> = vec![Element::default()];
    loop {
        match reader
            .read_event()
            .map_err(|e| ExportError::Malformed(e.to_string()))?
        {
            Event::Start(e) => stack.push(element_from(&e)?),
            Event::Empty(e) => {
                let el = element_from(&e)?;
                stack.last_mut().expect("root").children.push(el);
            }
            Event::End(_) => {
                let done = stack.pop().expect("balanced");
                match stack.last_mut() {
                    Some(parent) => parent.children.push(done),
                    None => return Err(ExportError::Malformed("unbalanced end tag".into())),
                }
            }
            Event::Text(t) => {
                let s = t
                    .unescape()
                    .map_err(|e| ExportError::Malformed(e.to_string()))?;
                if let Some(top) = stack.last_mut() {
                    top.text.push_str(&s);
                }
            }
            Event::CData(t) => {
                if let Some(top) = stack.last_mut() {
                    top.text.push_str(&String::from_utf8_lossy(&t));
                }
            }
            Event::Eof => break,
            _ => {}
        }
    }
    if stack.len() != 1 {
        return Err(ExportError::Malformed("unclosed element".into()));
    }
    let mut doc = stack.pop().expect("document");
    doc.children
        .pop()
        .ok_or_else(|| ExportError::Malformed("empty document".into()))
        .inspect(|_root| {
            doc.children.clear();
        })
}
