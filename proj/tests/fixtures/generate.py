#!/usr/bin/env python3
"""Regenerates the offline fixture corpus.

Provider SERPs come from the published SERP feature tables (Google and Bing,
two queries). One HTML page is written per merged URL, built so that the
feature extractor should measure exactly the vector recorded in
manifest.json. The manifest is written by this script alone and serves as
the oracle for the C++ extractor.

Run from anywhere: python3 tests/fixtures/generate.py
"""

import json
import os
import shutil
from urllib.parse import urlsplit, urlunsplit

HERE = os.path.dirname(os.path.abspath(__file__))

# rank, url, title, description, keywords, snippet, expires, content, img_alt, sitemap, links
ALCOHOLISM_GOOGLE = [
    (1, "http://alcoholism.about.com/", 1, 13, 203, 6, 1, 29, 9, 1, 142),
    (2, "http://alcoholism.about.com/od/about/a/symptoms.htm", 1, 11, 338, 3, 1, 23, 18, 1, 280),
    (3, "http://www.patient.co.uk/health/Alcoholism-and-Problem-Drinking.htm", 1, 6, 178, 5, 1, 21, 18, 1, 280),
    (4, "http://www.blackwellpublishing.com/journal.asp?ref=0145-6008", 1, 9, 212, 3, 1, 31, 4, 1, 74),
    (5, "http://www.netdoctor.co.uk/health_advice/facts/alcoholism.htm", 1, 3, 123, 3, 1, 25, 9, 1, 201),
    (6, "http://www.medicinenet.com/alcohol_abuse_and_alcoholism/article.htm", 1, 10, 150, 6, 1, 31, 18, 1, 370),
    (7, "http://www.alcoholics-anonymous.org.uk/newcomers/?PageID=69", 1, 5, 63, 3, 1, 16, 3, 1, 26),
    (8, "http://www.tandf.co.uk/journals/titles/07347324.asp", 1, 7, 110, 2, 1, 12, 10, 1, 60),
    (9, "http://www.nhs.uk/news/2012/03march/Pages/lsd-acid-alcoholism-treatment.aspx", 1, 5, 79, 4, 1, 10, 19, 1, 209),
]

ALCOHOLISM_BING = [
    (1, "http://alcoholism.about.com/", 1, 13, 203, 6, 1, 29, 9, 1, 142),
    (2, "http://medical-dictionary.thefreedictionary.com/alcoholism", 1, 7, 112, 4, 1, 21, 15, 1, 213),
    (3, "http://alcoholism.about.com/od/about/a/symptoms.htm", 1, 11, 338, 3, 1, 23, 18, 1, 143),
    (4, "http://www.ncbi.nlm.nih.gov/pubmedhealth/PMH0001940/", 1, 21, 122, 2, 1, 12, 2, 1, 146),
    (5, "http://www.nlm.nih.gov/medlineplus/alcoholism.html", 1, 23, 211, 1, 1, 21, 3, 1, 128),
    (6, "http://encyclopedia2.thefreedictionary.com/alcoholism", 1, 15, 200, 1, 1, 32, 7, 1, 21),
    (7, "http://adam.about.net/reports/Alcoholism.htm", 1, 9, 142, 5, 1, 21, 12, 1, 123),
    (8, "http://www.netdoctor.co.uk/health_advice/facts/alcoholism.htm", 1, 12, 132, 1, 1, 13, 2, 1, 21),
    (9, "http://www.patient.co.uk/health/Alcoholism-and-Problem-Drinking.htm", 1, 6, 178, 5, 1, 21, 18, 1, 280),
]

SHOP_GOOGLE = [
    (1, "http://uk.local.yahoo.com/United_Kingdom/Computer_Shops/uk10000082-s-23424975.html", 1, 21, 5, 2, 1, 12, 3, 1, 170),
    (2, "http://www.pzccomputers.com/pzc/index.html", 1, 12, 4, 1, 1, 10, 4, 1, 78),
    (3, "http://www.heapsofpcs.com/", 1, 11, 4, 1, 1, 12, 0, 1, 7),
    (4, "http://www.tricomputers.co.uk/Index.php", 1, 12, 3, 2, 1, 5, 0, 1, 7),
    (5, "http://www.which.co.uk/technology/computing/guides/computer-repair-top-tips/", 1, 10, 3, 1, 1, 9, 0, 1, 12),
    (6, "http://www.pcadvisor.co.uk/forums/2/consumerswatch/125700/local-computer-shop-and-innocent-customer/", 1, 10, 3, 2, 1, 2, 0, 1, 79),
    (7, "http://localpcs.co.uk/", 1, 9, 3, 1, 1, 6, 0, 1, 322),
    (8, "http://yourlocalcomputerguy.co.uk/", 1, 23, 3, 1, 1, 2, 2, 1, 20),
    (9, "http://www.abiko.co.uk/", 1, 11, 2, 1, 1, 20, 1, 1, 66),
    (10, "http://www.mumsnet.com/Talk/geeky_stuff/591841-so-my-local-computer-shop-has-my-laptop-for-repair/AllOnOnePage", 1, 1, 2, 2, 1, 14, 21, 1, 241),
]

SHOP_BING = [
    (1, "http://uk.local.yahoo.com/United_Kingdom/Computer_Shops/uk10000082-s-23424975.html", 1, 21, 5, 2, 1, 12, 3, 1, 170),
    (2, "http://www.localpcs.co.uk/", 1, 15, 7, 1, 1, 11, 2, 1, 1),
    (3, "http://yourlocalcomputerstore.com/", 1, 20, 4, 2, 1, 4, 1, 1, 1),
    (4, "http://www.mylocalcomputershop.com/", 1, 11, 3, 1, 1, 5, 1, 1, 5),
    (5, "http://www.pzccomputers.com/pzc/index.html", 1, 16, 5, 3, 1, 11, 1, 1, 7),
    (6, "http://ipatter.com/anglianinternet/local-computer-shops-in-norfolk-13808", 1, 32, 5, 2, 1, 4, 3, 1, 142),
    (7, "http://javea-computer-club.wikidot.com/suppliers", 1, 11, 3, 1, 1, 9, 1, 1, 153),
    (8, "http://local.yahoo.com/info-33045872-local-computer-shop-grapevine", 1, 21, 2, 2, 1, 14, 1, 1, 67),
    (9, "http://www.dtechcomputers.co.uk/", 1, 12, 1, 1, 1, 2, 1, 1, 7),
    (10, "http://accessplace.com/computer-system/west-midlands/dudley.htm", 1, 17, 1, 1, 1, 12, 1, 1, 78),
]

QUERIES = {
    "alcoholism": {"stem": "alcoholism", "google": ALCOHOLISM_GOOGLE, "bing": ALCOHOLISM_BING,
                   "terms": ["alcoholism"]},
    "local computer shop": {"stem": "local-computer-shop", "google": SHOP_GOOGLE, "bing": SHOP_BING,
                            "terms": ["local", "computer", "shop"]},
}

SYNONYMS = {
    "alcoholism": ["alcohol dependence", "drinking problem"],
    "computer": ["pc", "personal computer"],
    "shop": ["store"],
}

PARAMS = ["title_match", "meta_description", "meta_keyword", "snippet", "meta_expires",
          "meta_content", "image_alt", "sitemap", "links_present"]

FILLER = ["help", "guide", "facts", "advice", "support", "services", "overview", "resources",
          "information", "answers", "options", "reviews", "research", "updates", "articles"]

def canonical(url):
    parts = urlsplit(url)
    host = parts.hostname.lower()
    if host.startswith("www.") and len(host) > 4:
        host = host[4:]
    port = parts.port
    netloc = host if port in (None, 80 if parts.scheme == "http" else 443) else f"{host}:{port}"
    path = parts.path
    if path.endswith("/"):
        path = path[:-1]
    return urlunsplit((parts.scheme.lower(), netloc, path, parts.query, ""))


def fnv1a64(data):
    h = 0xcbf29ce484222325
    for b in data.encode("utf-8"):
        h ^= b
        h = (h * 0x100000001b3) & 0xFFFFFFFFFFFFFFFF
    return h


def merged_order(google, bing):
    """Round-robin interleave with first-wins dedupe, as the merge step does."""
    slots = []
    for i in range(max(len(google), len(bing))):
        if i < len(google):
            slots.append(("google", google[i]))
        if i < len(bing):
            slots.append(("bing", bing[i]))
    seen = set()
    out = []
    for provider, row in slots:
        c = canonical(row[1])
        if c in seen:
            continue
        seen.add(c)
        out.append((provider, row))
    return out[:50]


def term_cycle(terms, n, offset=0):
    return [terms[(offset + i) % len(terms)] for i in range(n)]


def hit_text(terms, n, offset, capitalize=True):
    """A sentence sequence with exactly n whole-token query hits."""
    parts = []
    for i, term in enumerate(term_cycle(terms, n, offset)):
        word = term.capitalize() if capitalize and i % 3 == 0 else term
        parts.append(f"{word} {FILLER[(offset + i) % len(FILLER)]}")
    if not parts:
        return "General " + FILLER[offset % len(FILLER)] + " and " + FILLER[(offset + 1) % len(FILLER)]
    return ", ".join(parts) + "."


def snippet_html(terms, n, offset):
    """Google-style htmlSnippet: hits in <b>, an entity, returns (html, plain)."""
    words_html = []
    words_plain = []
    for i, term in enumerate(term_cycle(terms, n, offset)):
        filler = FILLER[(offset + 2 * i) % len(FILLER)]
        words_html.append(f"<b>{term}</b> {filler}")
        words_plain.append(f"{term} {filler}")
    tail_html = "news &amp; views"
    tail_plain = "news & views"
    if not words_html:
        return f"Read our {tail_html}.", f"Read our {tail_plain}."
    return "; ".join(words_html) + f" ... {tail_html}.", "; ".join(words_plain) + f" ... {tail_plain}."


def site_name(url):
    host = urlsplit(url).hostname
    if host.startswith("www."):
        host = host[4:]
    return host


def keywords_content(terms, n, offset):
    entries = []
    for i, term in enumerate(term_cycle(terms, n, offset)):
        entries.append(f"{term} {FILLER[(offset + i) % len(FILLER)]}")
    if not entries:
        entries = ["general information"]
    return ", ".join(entries)


def build_page(url, row, terms, index, result_urls):
    """Renders a page whose measurable features equal the table row."""
    _, _, title, desc, kw, _snip, expires, content, img_alt, sitemap, links = row
    head = ['<!DOCTYPE html>', '<html lang="en">', '<head>', '<meta charset="utf-8">']
    name = site_name(url)
    if title:
        head.append(f"<title>{terms[0].capitalize()} {FILLER[index % len(FILLER)]} | {name}</title>")
    else:
        head.append(f"<title>Welcome | {name}</title>")

    metas = [f'<meta name="description" content="{hit_text(terms, desc, index)}">',
             f'<meta name="keywords" content="{keywords_content(terms, kw, index + 1)}">']
    if expires:
        metas.append('<meta http-equiv="expires" content="Tue, 31 Dec 2030 23:59:59 GMT">')
    else:
        metas.append('<meta http-equiv="expires" content="0">')
    extras = ["robots|index, follow", "author|Editorial team", "copyright|All rights reserved",
              "language|en-GB", "revisit-after|7 days", "distribution|global", "viewport|width=device-width",
              "generator|static"]
    k = 0
    while len(metas) < content:
        if k < len(extras):
            key, value = extras[k].split("|", 1)
        else:
            key, value = f"x-meta-{k}", f"value {k}"
        metas.append(f'<meta name="{key}" content="{value}">')
        k += 1
    head.extend(metas)

    # Distinct link targets, in order: sitemap, cross-links to other results,
    # then internal pages. Rendered with a few duplicates and non-http refs,
    # none of which add to the distinct count.
    targets = []
    if sitemap:
        targets.append(("/sitemap.xml", "Sitemap"))
    others = [u for u in result_urls if canonical(u) != canonical(url)]
    for j in range(min(3, len(others))):
        if len(targets) >= links:
            break
        targets.append((others[(index * 5 + j * 7) % len(others)], FILLER[(index + j) % len(FILLER)].capitalize()))
    # The same page can be picked twice above; keep targets distinct.
    uniq = []
    seen = set()
    for t in targets:
        if t[0] not in seen:
            seen.add(t[0])
            uniq.append(t)
    targets = uniq
    p = 0
    while len(targets) < links:
        targets.append((f"/p/{FILLER[p % len(FILLER)]}-{p}.html", f"{FILLER[p % len(FILLER)].capitalize()} {p}"))
        p += 1

    link_elems = []
    anchors = list(targets)
    if len(anchors) >= 3:
        css = anchors.pop(2)
        link_elems.append(f'<link rel="stylesheet" href="{css[0]}">')
    head.extend(link_elems)
    head.append("</head>")

    body = ["<body>", '<nav class="breadcrumb"><a href="#top">Top</a></nav>',
            f"<h1>{' '.join(t.capitalize() for t in terms)}</h1>",
            f"<p>{body_text(terms, index)}</p>"]
    for i in range(img_alt):
        body.append(f'<img src="/img/{i}.png" alt="Illustration {i}">')
    body.append('<img src="/img/spacer.gif">')
    body.append('<img src="/img/blank.gif" alt="">')
    body.append("<ul>")
    for i, (href, label) in enumerate(anchors):
        body.append(f'<li><a href="{href}">{label}</a></li>')
        if i % 10 == 0:
            body.append(f'<li><a href="{href}#section">{label} (section)</a></li>')
    body.append("</ul>")
    body.append('<p><a href="mailto:info@example.org">Contact</a> <a href="javascript:void(0)">Print</a></p>')
    body.append("</body>")
    body.append("</html>")
    html = "\n".join(head + body) + "\n"
    expected = [title, count_hits(hit_text(terms, desc, index), terms),
                count_hits(keywords_content(terms, kw, index + 1), terms), None,
                expires, len(metas), img_alt, sitemap, len(targets)]
    return html, expected


def body_text(terms, index):
    phrase = " ".join(terms)
    filler = FILLER[index % len(FILLER)]
    sentences = [
        f"This page collects {filler} about {phrase}.",
        f"Readers asked about {terms[-1]} and {terms[0]} {filler} in {2010 + index % 3}.",
        f"See the {phrase} {FILLER[(index + 4) % len(FILLER)]} below.",
    ]
    return " ".join(sentences[: 1 + index % 3])


def count_hits(text, terms):
    """Whole-token count, splitting on whitespace, commas and semicolons."""
    tokens = []
    for raw in text.replace(",", " ").replace(";", " ").split():
        tok = raw.strip("!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~").lower()
        if tok:
            tokens.append(tok)
    return sum(tokens.count(t) for t in terms)


def google_body(rows, terms, stem):
    items = []
    plains = {}
    for idx, row in enumerate(rows):
        html, plain = snippet_html(terms, row[5], idx)
        plains[row[1]] = plain
        items.append({
            "kind": "customsearch#result",
            "title": f"{terms[0].capitalize()} {FILLER[idx % len(FILLER)]} - {site_name(row[1])}",
            "htmlTitle": f"<b>{terms[0].capitalize()}</b> {FILLER[idx % len(FILLER)]} - {site_name(row[1])}",
            "link": row[1],
            "displayLink": urlsplit(row[1]).hostname,
            "snippet": plain,
            "htmlSnippet": html,
        })
    return {"kind": "customsearch#search", "queries": {"request": [{"searchTerms": stem}]}, "items": items}, plains


def bing_body(rows, terms):
    results = []
    plains = {}
    for idx, row in enumerate(rows):
        _, plain = snippet_html(terms, row[5], idx + 3)
        plains[row[1]] = plain
        results.append({
            "Title": f"{terms[0].capitalize()} {FILLER[(idx + 3) % len(FILLER)]} - {site_name(row[1])}",
            "Description": plain,
            "Url": row[1],
            "DisplayUrl": row[1].split("://", 1)[1].rstrip("/"),
        })
    return {"SearchResponse": {"Version": "2.2", "Web": {"Total": len(results), "Offset": 0, "Results": results}}}, plains


def write_json(path, data):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, ensure_ascii=False)
        f.write("\n")


def write_text(path, text):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def feature_table_csv(rows):
    lines = ["rank,website," + ",".join(PARAMS)]
    for r in rows:
        site = r[1].split("://", 1)[1]
        vals = ["yes" if r[2] else "no", str(r[3]), str(r[4]), str(r[5]), "yes" if r[6] else "no",
                str(r[7]), str(r[8]), "yes" if r[9] else "no", str(r[10])]
        lines.append(f"{r[0]},{site}," + ",".join(vals))
    return "\n".join(lines) + "\n"


def main():
    pages_dir = os.path.join(HERE, "pages")
    shutil.rmtree(pages_dir, ignore_errors=True)
    os.makedirs(pages_dir)
    manifest = {}
    for query, cfg in QUERIES.items():
        terms = cfg["terms"]
        gbody, gplain = google_body(cfg["google"], terms, cfg["stem"])
        bbody, bplain = bing_body(cfg["bing"], terms)
        write_json(os.path.join(HERE, "serps", "google", cfg["stem"] + ".json"), gbody)
        write_json(os.path.join(HERE, "serps", "bing", cfg["stem"] + ".json"), bbody)

        merged = merged_order(cfg["google"], cfg["bing"])
        result_urls = [row[1] for _, row in merged]
        entries = []
        for index, (provider, row) in enumerate(merged):
            html, expected = build_page(row[1], row, terms, index, result_urls)
            snippet = (gplain if provider == "google" else bplain)[row[1]]
            expected[3] = count_hits(snippet, terms)
            assert expected[3] == row[5], (row, snippet)
            canon = canonical(row[1])
            h = f"{fnv1a64(canon):016x}"
            write_text(os.path.join(pages_dir, h + ".html"), html)
            published = list(row[2:])
            entries.append({
                "link": row[1],
                "canonical": canon,
                "hash": h,
                "provider": provider,
                "provider_rank": row[0],
                "snippet": snippet,
                "features": expected,
                "published": published,
            })
        manifest[query] = entries

    # A 40-record Google-shape SERP: the alcoholism Google URLs repeated with distinct ranks.
    items = []
    for i in range(40):
        row = ALCOHOLISM_GOOGLE[i % len(ALCOHOLISM_GOOGLE)]
        items.append({"title": f"Result {i + 1}", "link": row[1], "htmlSnippet": f"entry <b>{i + 1}</b>",
                      "displayLink": urlsplit(row[1]).hostname})
    write_json(os.path.join(HERE, "serps", "google40.json"), {"items": items})

    write_json(os.path.join(HERE, "manifest.json"), manifest)
    write_json(os.path.join(HERE, "kb", "synonyms.json"), SYNONYMS)

    write_text(os.path.join(HERE, "feature_tables", "google-alcoholism.csv"), feature_table_csv(ALCOHOLISM_GOOGLE))
    write_text(os.path.join(HERE, "feature_tables", "bing-alcoholism.csv"), feature_table_csv(ALCOHOLISM_BING))
    write_text(os.path.join(HERE, "feature_tables", "google-local-computer-shop.csv"), feature_table_csv(SHOP_GOOGLE))
    write_text(os.path.join(HERE, "feature_tables", "bing-local-computer-shop.csv"), feature_table_csv(SHOP_BING))

    write_text(os.path.join(HERE, "judgments.csv"), "\n".join([
        "engine,query,total_retrieved,evaluated,more,less,irrelevant,reported_precision,reported_recall",
        'Google,Alcoholism,"34,100,000",50,22,19,9,0.44,0.51',
        'Google,local computer shop,"266,000,000",50,19,16,15,0.40,0.466667',
        'Bing,Alcoholism,"33,100,000",50,16,22,12,0.31,0.49',
        'Bing,local computer shop,"304,000,000",50,12,23,15,0.24,0.533333',
        "iral,Alcoholism,50,50,24,20,6,0.48,0.00000074",
        "iral,local computer shop,50,50,18,19,13,0.37,0.000000008",
    ]) + "\n")

    write_json(os.path.join(HERE, "offline.json"), {
        "offline": True,
        "providers": [
            {"name": "google", "kind": "fixture", "endpoint_or_dir": "serps/google"},
            {"name": "bing", "kind": "fixture", "endpoint_or_dir": "serps/bing"},
        ],
        "synonyms": {"file": "kb/synonyms.json"},
        "pages": {"dir": "pages"},
        "reference_time": "2012-05-04",
        "damping": 0.85,
        "tolerance": 1e-9,
        "max_iter": 200,
        "formula_variant": "appendix3",
    })


if __name__ == "__main__":
    main()
