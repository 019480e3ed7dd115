"""Two-level slide assembly.

Selected sentences become level-2 bullets; their noun phrases (from a
self-contained lexicon + suffix POS tagger and a DT? JJ* NN+ chunker)
become level-1 bullets. Slides take the heading of the section containing
their first sentence as a title, hold at most four sentences, and follow
document order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .docmodel import Document, Sentence, Token
from .errors import MalformedInput

MAX_SENTENCES_PER_SLIDE = 4
TITLE_TOKEN_LIMIT = 5
MIN_PHRASE_WORDS = 2
MAX_PHRASE_WORDS = 10
MAX_DOCUMENT_FREQUENCY = 10

# Closed-class words and frequent research verbs; everything else falls
# through to the suffix rules, defaulting to NN.
DEFAULT_LEXICON: dict[str, str] = {}
DEFAULT_LEXICON.update(dict.fromkeys(
    "the a an this that these those each every some any no all both such".split(), "DT"))
DEFAULT_LEXICON.update(dict.fromkeys(
    "of in on at by for with from to into over under between through during against "
    "about as than via per within without across after before above below upon".split(), "IN"))
DEFAULT_LEXICON.update(dict.fromkeys("and or but nor yet so".split(), "CC"))
DEFAULT_LEXICON.update(dict.fromkeys(
    "we i you he she it they them us him her our your their its my his hers who which what".split(), "PR"))
DEFAULT_LEXICON.update(dict.fromkeys(
    "is are was were be been being am do does did done have has had having "
    "can could will would shall should may might must".split(), "VB"))
DEFAULT_LEXICON.update(dict.fromkeys(
    "show shows use uses propose proposes present presents describe describes "
    "demonstrate demonstrates evaluate evaluates achieve achieves outperform outperforms "
    "predict predicts apply applies improve improves introduce introduces provide provides "
    "compare compares consist consists contain contains require requires generate generates "
    "produce produces perform performs obtain obtains run runs ran walk walks see make makes "
    "take takes give gives find finds found".split(), "VB"))
DEFAULT_LEXICON.update(dict.fromkeys(
    "not very also only more most less least well often usually however therefore thus "
    "then here there when where how why".split(), "RB"))

_ADJ_SUFFIXES = ("al", "ive", "ous", "ic", "ful", "less", "able", "ible")
_VERB_SUFFIXES = ("ing", "ed")


class RuleTagger:
    """Lexicon lookup with suffix-heuristic fallback; default tag NN.

    Passing an explicit ``lexicon`` replaces the built-in one, which is
    how tests pin down tagging exactly.
    """

    def __init__(self, lexicon: dict[str, str] | None = None):
        self.lexicon = DEFAULT_LEXICON if lexicon is None else dict(lexicon)

    def tag(self, token: str) -> str:
        tok = str(token)
        if not any(ch.isalnum() for ch in tok):
            return "PUNCT"
        hit = self.lexicon.get(tok)
        if hit is not None:
            return hit
        if any(ch.isdigit() for ch in tok):
            return "CD"
        if len(tok) > 4 and tok.endswith("ly"):
            return "RB"
        for suf in _ADJ_SUFFIXES:
            if len(tok) >= len(suf) + 2 and tok.endswith(suf):
                return "JJ"
        for suf in _VERB_SUFFIXES:
            if len(tok) >= len(suf) + 2 and tok.endswith(suf):
                return "VB"
        return "NN"

    def tag_sentence(self, tokens) -> list[str]:
        return [self.tag(t) for t in tokens]


_DEFAULT_TAGGER = RuleTagger()


@dataclass(frozen=True)
class NounPhrase:
    tokens: tuple[Token, ...]
    word_len: int
    source_sentence: int

    @property
    def text(self) -> str:
        return " ".join(self.tokens)


@dataclass(frozen=True)
class SlideItem:
    """One level-2 sentence bullet with its level-1 noun phrases."""

    phrases: tuple[NounPhrase, ...]
    sentence: Sentence


@dataclass(frozen=True)
class Slide:
    title: str
    items: tuple[SlideItem, ...]


@dataclass(frozen=True)
class SlideDeck:
    doc_id: str
    slides: tuple[Slide, ...] = field(default_factory=tuple)


def extract_noun_phrases(sent: Sentence, tagger: RuleTagger | None = None) -> list[NounPhrase]:
    """Maximal left-to-right, non-overlapping DT? JJ* NN+ chunks."""
    tagger = tagger or _DEFAULT_TAGGER
    tags = tagger.tag_sentence(sent.tokens)
    out: list[NounPhrase] = []
    i = 0
    n = len(tags)
    while i < n:
        j = i
        if tags[j] == "DT":
            j += 1
        while j < n and tags[j] == "JJ":
            j += 1
        k = j
        while k < n and tags[k] == "NN":
            k += 1
        if k > j:
            out.append(
                NounPhrase(
                    tokens=tuple(sent.tokens[i:k]),
                    word_len=k - i,
                    source_sentence=sent.position,
                )
            )
            i = k
        else:
            i += 1
    return out


def phrase_key(phrase: NounPhrase) -> str:
    return " ".join(phrase.tokens)


def filter_phrases(phrases, df_index: dict[str, int] | None = None) -> list[NounPhrase]:
    """Length filter (2..10 words), optional document-frequency filter
    (df > 10 dropped), order-preserving exact-duplicate removal."""
    out: list[NounPhrase] = []
    seen: set[tuple[Token, ...]] = set()
    for ph in phrases:
        if not MIN_PHRASE_WORDS <= ph.word_len <= MAX_PHRASE_WORDS:
            continue
        if df_index is not None and df_index.get(phrase_key(ph), 0) > MAX_DOCUMENT_FREQUENCY:
            continue
        if ph.tokens in seen:
            continue
        seen.add(ph.tokens)
        out.append(ph)
    return out


def slide_title(first_sentence: Sentence, doc: Document) -> str:
    """Heading of the section holding the slide's first sentence, original
    casing, truncated to its first five whitespace tokens; empty headings
    fall back to the document title."""
    heading = doc.sections[doc.section_index_of(first_sentence.position)].heading
    source = heading if heading.strip() else doc.title
    return " ".join(source.split()[:TITLE_TOKEN_LIMIT])


def _split_sizes(group_len: int) -> list[int]:
    """Even split into ceil(g/4) slides, earlier slides never smaller."""
    k = math.ceil(group_len / MAX_SENTENCES_PER_SLIDE)
    base, rem = divmod(group_len, k)
    return [base + 1] * rem + [base] * (k - rem)


def build_deck(selected, doc: Document, df_index: dict[str, int] | None = None,
               tagger: RuleTagger | None = None) -> SlideDeck:
    """Assemble the deck from selected sentences (document order).

    Consecutive selected sentences from the same section form a group;
    each group is split into slides of at most four sentences. Phrases
    repeated within one slide appear once.
    """
    selected = list(selected)
    for prev, cur in zip(selected, selected[1:]):
        if cur.position <= prev.position:
            raise ValueError("selected sentences must be in document order")

    groups: list[list[Sentence]] = []
    last_section = None
    for sent in selected:
        sec = doc.section_index_of(sent.position)
        if sec != last_section:
            groups.append([])
            last_section = sec
        groups[-1].append(sent)

    slides: list[Slide] = []
    for group in groups:
        start = 0
        for size in _split_sizes(len(group)):
            chunk = group[start : start + size]
            start += size
            seen: set[tuple[Token, ...]] = set()
            items = []
            for sent in chunk:
                phrases = filter_phrases(extract_noun_phrases(sent, tagger), df_index)
                fresh = tuple(ph for ph in phrases if ph.tokens not in seen)
                seen.update(ph.tokens for ph in fresh)
                items.append(SlideItem(phrases=fresh, sentence=sent))
            slides.append(Slide(title=slide_title(chunk[0], doc), items=tuple(items)))
    return SlideDeck(doc_id=doc.id, slides=tuple(slides))


def render(deck: SlideDeck, fmt: str = "markdown") -> bytes:
    """Deterministic markdown or JSON bytes for a deck."""
    if fmt == "markdown":
        lines = [f"<!-- deck {deck.doc_id}: {len(deck.slides)} slides -->"]
        for slide in deck.slides:
            lines.append("")
            lines.append(f"## {slide.title}")
            for item in slide.items:
                for ph in item.phrases:
                    lines.append(f"- {ph.text}")
                lines.append(f"  - {item.sentence.text}")
        return ("\n".join(lines) + "\n").encode("utf-8")
    if fmt == "json":
        obj = {
            "doc_id": deck.doc_id,
            "slides": [
                {
                    "title": slide.title,
                    "items": [
                        {
                            "phrases": [list(ph.tokens) for ph in item.phrases],
                            "sentence": {
                                "position": item.sentence.position,
                                "tokens": list(item.sentence.tokens),
                            },
                        }
                        for item in slide.items
                    ],
                }
                for slide in deck.slides
            ],
        }
        return json.dumps(obj, ensure_ascii=False, indent=2).encode("utf-8")
    raise ValueError(f"unknown render format: {fmt}")


def parse_deck(data) -> SlideDeck:
    """Inverse of the JSON rendering."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid deck JSON: {exc}") from exc
    slides = []
    for s in obj["slides"]:
        items = []
        for item in s["items"]:
            sent = Sentence.build(item["sentence"]["tokens"], item["sentence"]["position"])
            phrases = tuple(
                NounPhrase(
                    tokens=tuple(Token(t) for t in toks),
                    word_len=len(toks),
                    source_sentence=sent.position,
                )
                for toks in item["phrases"]
            )
            items.append(SlideItem(phrases=phrases, sentence=sent))
        slides.append(Slide(title=s["title"], items=tuple(items)))
    return SlideDeck(doc_id=obj["doc_id"], slides=tuple(slides))


def validate_deck(deck: SlideDeck, doc: Document | None = None) -> list[str]:
    """Structural constraint violations; empty list means the deck is valid."""
    problems: list[str] = []
    prev_first = -1
    for idx, slide in enumerate(deck.slides):
        if len(slide.items) > MAX_SENTENCES_PER_SLIDE:
            problems.append(f"slide {idx}: {len(slide.items)} sentences > {MAX_SENTENCES_PER_SLIDE}")
        if len(slide.title.split()) > TITLE_TOKEN_LIMIT:
            problems.append(f"slide {idx}: title longer than {TITLE_TOKEN_LIMIT} tokens")
        for item in slide.items:
            for ph in item.phrases:
                if not MIN_PHRASE_WORDS <= ph.word_len <= MAX_PHRASE_WORDS:
                    problems.append(f"slide {idx}: phrase {ph.text!r} has {ph.word_len} words")
        if slide.items:
            first = slide.items[0].sentence.position
            if first <= prev_first:
                problems.append(f"slide {idx}: out of document order")
            prev_first = first
    return problems


def build_df_index(docs, tagger: RuleTagger | None = None) -> dict[str, int]:
    """Document frequency of length-filtered noun phrases over a corpus."""
    df: dict[str, int] = {}
    for doc in docs:
        keys = set()
        for sent in doc.sentences:
            for ph in extract_noun_phrases(sent, tagger):
                if MIN_PHRASE_WORDS <= ph.word_len <= MAX_PHRASE_WORDS:
                    keys.add(phrase_key(ph))
        for key in keys:
            df[key] = df.get(key, 0) + 1
    return df
