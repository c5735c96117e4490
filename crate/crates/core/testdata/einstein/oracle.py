#!/usr/bin/env python3
"""Reference probe over the fixture corpus, written without looking at the
Rust code paths: plain regexes for matching, html.parser for HTML pages and
a direct queue walk. Writes golden/einstein.trace and golden/expected.json.

    python3 oracle.py            # rewrite the goldens
    python3 oracle.py --check    # exit 1 if the goldens are stale
"""

import json
import math
import os
import re
import sys
from collections import deque
from html.parser import HTMLParser
from urllib.parse import unquote

HERE = os.path.dirname(os.path.abspath(__file__))

FULL_NAME = "Albert Einstein"
SHORT_NAME = "Einstein"
ANCHORS = ["physics", "relativity"]
SEED = "Albert Einstein"
SECTIONS = ["publications", "references", "further reading", "bibliography", "works"]


def norm(title):
    title = title.split("#", 1)[0]
    parts = [p for p in re.split(r"[\s_]+", title) if p]
    if not parts:
        return None
    t = "_".join(parts)
    return t[0].upper() + t[1:]


def namespaced(title):
    return ":" in title.split("/", 1)[0]


def phrase_regex(phrases):
    alts = []
    for p in sorted(phrases, key=len, reverse=True):
        alt = re.escape(p)
        if p[0].isalnum():
            alt = r"(?<![^\W_])" + alt
        if p[-1].isalnum():
            alt = alt + r"(?![^\W_])"
        alts.append(alt)
    return re.compile("|".join(alts), re.IGNORECASE)


BIB_RE = phrase_regex([FULL_NAME, "A. Einstein", "Einstein, A."])
ANCHOR_RE = phrase_regex([SHORT_NAME] + ANCHORS)


class Html(HTMLParser):
    SKIP = {"script", "style", "noscript", "template"}
    HEADINGS = {"h1": 1, "h2": 2, "h3": 3, "h4": 4, "h5": 5, "h6": 6}

    def __init__(self):
        super().__init__()
        self.body = []
        self.links = []
        self.sections = []
        self.current = None  # (level, heading, [text])
        self.heading = None  # (level, [text])
        self.skip_depth = 0
        self.stack = []

    def handle_starttag(self, tag, attrs):
        attrs = dict(attrs)
        classes = (attrs.get("class") or "").split()
        skipping = tag in self.SKIP or "mw-editsection" in classes
        self.stack.append((tag, skipping))
        if skipping:
            self.skip_depth += 1
            return
        if self.skip_depth:
            return
        if tag in self.HEADINGS:
            self.heading = (self.HEADINGS[tag], [])
        self.text(" ")
        if tag == "a":
            href = attrs.get("href") or ""
            if href.startswith("/wiki/"):
                t = norm(unquote(href[len("/wiki/"):]))
                if t:
                    self.links.append(t)

    def handle_endtag(self, tag):
        while self.stack:
            t, skipping = self.stack.pop()
            if skipping:
                self.skip_depth -= 1
            if t == tag:
                break
        if self.skip_depth:
            return
        if tag in self.HEADINGS and self.heading:
            level, words = self.heading
            self.heading = None
            name = " ".join("".join(words).split())
            if self.current and level <= self.current[0]:
                self.close()
            if name.lower() in SECTIONS:
                self.current = (level, name, [])
        self.text(" ")

    def handle_data(self, data):
        if self.skip_depth:
            return
        if self.heading:
            self.heading[1].append(data)
            return
        self.text(data)

    def text(self, s):
        if self.current:
            self.current[2].append(s)
        else:
            self.body.append(s)

    def close(self):
        level, name, words = self.current
        self.sections.append((name, " ".join("".join(words).split())))
        self.current = None

    def finish(self):
        if self.current:
            self.close()
        return " ".join("".join(self.body).split())


def load():
    with open(os.path.join(HERE, "index.json"), encoding="utf-8") as fh:
        manifest = json.load(fh)["pages"]
    pages = {}
    for key, rel in manifest.items():
        with open(os.path.join(HERE, rel), encoding="utf-8") as fh:
            pages[norm(key)] = fh.read()
    return pages


def analyse(title, markup):
    """(redirect, body, links, bibliography texts)"""
    stripped = markup.lstrip()
    if stripped.startswith("{"):
        rec = json.loads(stripped)
        if rec.get("redirect"):
            return norm(rec["redirect"]), None, None, None
        links = [norm(l) for l in rec.get("links", [])]
        bib = [b["text"] for b in rec.get("bibliography", []) if b["section"].lower() in SECTIONS]
        body = rec.get("body_text", "")
    else:
        p = Html()
        p.feed(markup)
        body = p.finish()
        links = p.links
        bib = [text for _, text in p.sections]
    out, seen = [], set()
    for l in links:
        if l and l != title and not namespaced(l) and l not in seen:
            seen.add(l)
            out.append(l)
    return None, body, out, bib


def probe(pages):
    def fetch(title):
        hops = 0
        while True:
            if title not in pages:
                return None, None
            redirect, body, links, bib = analyse(title, pages[title])
            if redirect is None:
                return title, (body, links, bib)
            hops += 1
            if hops > 3:
                return None, None
            title = redirect

    nodes = {}   # title -> dict
    order = []   # titles in discovery order
    edges = []   # [from, to, kind]
    aliases = {}
    fetched = set()
    queue = deque()
    events = []
    warnings = 0
    counter = [0]

    def add_node(t, status):
        nodes[t] = {"title": t, "discovery_index": counter[0], "status": status, "mentions": None}
        order.append(t)
        counter[0] += 1

    def add_edge(a, b, kind):
        if a == b or any(e[0] == a and e[1] == b for e in edges):
            return
        edges.append([a, b, kind])

    def expand(src, links):
        for l in links:
            t = aliases.get(l, l)
            if t == src:
                continue
            if t in nodes:
                add_edge(src, t, "back")
            else:
                add_node(t, "undiscovered_page")
                add_edge(src, t, "forward")
                queue.append(t)

    seed, (body, links, bib) = fetch(norm(SEED))
    seed_mentions = sum(len(BIB_RE.findall(s)) for s in bib)
    add_node(seed, "seed")
    nodes[seed]["mentions"] = seed_mentions
    fetched.add(seed)
    expand(seed, links)

    while queue:
        req = queue.popleft()
        if req in fetched:
            continue
        fetched.add(req)
        canonical, content = fetch(req)
        if canonical is None:
            warnings += 1
            nodes[req].update(status="leaf", mentions=None)
            events.append((req, "-"))
            continue
        title = req
        if canonical != req:
            aliases[req] = canonical
            if canonical in nodes:
                del nodes[req]
                order.remove(req)
                old = edges[:]
                edges.clear()
                for a, b, k in old:
                    if a == req:
                        a, k = canonical, "back"
                    if b == req:
                        b, k = canonical, "back"
                    add_edge(a, b, k)
                if canonical in fetched:
                    continue
            else:
                nodes[canonical] = nodes.pop(req)
                nodes[canonical]["title"] = canonical
                order[order.index(req)] = canonical
                for e in edges:
                    e[0] = canonical if e[0] == req else e[0]
                    e[1] = canonical if e[1] == req else e[1]
            fetched.add(canonical)
            title = canonical
        body, links, bib = content
        if not ANCHOR_RE.search(body):
            nodes[title].update(status="leaf", mentions=None)
            events.append((title, "-"))
            continue
        m = sum(len(BIB_RE.findall(s)) for s in bib)
        if m >= 1:
            nodes[title].update(status="expanded", mentions=m)
            events.append((title, "+"))
            expand(title, links)
        else:
            nodes[title].update(status="endnote", mentions=0)
            events.append((title, "-"))

    return seed, seed_mentions, [nodes[t] for t in order], edges, events, warnings


def main():
    pages = load()
    seed, seed_mentions, nodes, edges, events, warnings = probe(pages)
    trace = f"1: {seed}\nSCI Links (1): {seed_mentions}\n"
    trace += "".join(f"{i} Rd {s}: {t}\n" for i, (t, s) in enumerate(events))

    rs = [(n["title"], n["mentions"]) for n in nodes
          if n["status"] in ("seed", "expanded") and n["mentions"]]
    # Oracle for WH: direct scan over the sorted counts.
    counts = sorted((m for _, m in rs), reverse=True)
    wh = max([i for i in range(1, len(counts) + 1) if counts[i - 1] >= i], default=0)
    n = len(counts)
    wi_raw = wh * math.sqrt(n)
    expected = {
        "seed": seed,
        "seed_mentions": seed_mentions,
        "nodes": nodes,
        "edges": edges,
        "ref_table": sorted(rs, key=lambda p: (-p[1], p[0])),
        "N": n,
        "WH": wh,
        "WI_raw": wi_raw,
        "WI": int(math.floor(wi_raw + 0.5)),
        "pages_fetched": len(events),
        "plus_events": sum(1 for _, s in events if s == "+"),
        "warnings": warnings,
    }
    golden = os.path.join(HERE, "golden")
    outputs = {
        "einstein.trace": trace,
        "expected.json": json.dumps(expected, ensure_ascii=False, indent=2) + "\n",
    }
    if "--check" in sys.argv:
        stale = [name for name, text in outputs.items()
                 if open(os.path.join(golden, name), encoding="utf-8").read() != text]
        if stale:
            print("stale:", ", ".join(stale))
            sys.exit(1)
        print("goldens up to date")
        return
    os.makedirs(golden, exist_ok=True)
    for name, text in outputs.items():
        with open(os.path.join(golden, name), "w", encoding="utf-8") as fh:
            fh.write(text)
    print(trace, end="")
    print(f"N={n} WH={wh} WI={expected['WI']} ({wi_raw:.4f})")


if __name__ == "__main__":
    main()
