"""Deterministic text processing and I/O.

Covers sentence splitting, tokenization, vocabulary construction,
pretrained-embedding loading, and the JSON document/slide formats. This
replaces the PDF/OCR/CoreNLP preprocessing stack of the original system:
documents arrive as structured JSON and lemmatization is reduced to
lowercasing.
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .docmodel import Document, ReferenceSlides, Section, Sentence, Token
from .errors import DimensionMismatch, EmptyDocument, MalformedInput

PAD = "<pad>"
UNK = "<unk>"

# Abbreviations that never terminate a sentence, matched case-sensitively
# against the text ending at the candidate period.
_ABBREVIATIONS = ("e.g.", "i.e.", "et al.", "Fig.", "Eq.")


def tokenize(text: str) -> list[Token]:
    """Lowercase and split into tokens.

    Splits on whitespace and at every boundary between alphanumeric and
    punctuation characters; each punctuation run becomes one token.
    """
    out: list[Token] = []
    for chunk in text.lower().split():
        buf: list[str] = []
        prev_alnum: bool | None = None
        for ch in chunk:
            alnum = ch.isalnum()
            if prev_alnum is not None and alnum != prev_alnum:
                out.append(Token("".join(buf)))
                buf = []
            buf.append(ch)
            prev_alnum = alnum
        if buf:
            out.append(Token("".join(buf)))
    return out


def tokenize_case_preserving(text: str) -> list[str]:
    """Whitespace tokens with original casing, used for slide titles."""
    return text.split()


def split_sentences(text: str) -> list[str]:
    """Split text into sentence strings.

    A split happens at '.', '!' or '?' followed by whitespace and an
    uppercase letter or digit, unless the text so far ends with a known
    abbreviation. Results are trimmed; empties are dropped.
    """
    sentences: list[str] = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        if text[i] in ".!?":
            j = i + 1
            while j < n and text[j].isspace():
                j += 1
            next_starts = j > i + 1 and j < n and (text[j].isupper() or text[j].isdigit())
            if next_starts and not text[start : i + 1].endswith(_ABBREVIATIONS):
                piece = text[start : i + 1].strip()
                if piece:
                    sentences.append(piece)
                start = j
                i = j
                continue
        i += 1
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise MalformedInput(msg)


def slides_from_pages(pages, doc_id: str = "") -> ReferenceSlides:
    """Build ReferenceSlides from pages of text lines."""
    norm = tuple(tuple(str(line) for line in page) for page in pages)
    flat: list[Token] = []
    for page in norm:
        for line in page:
            flat.extend(tokenize(line))
    return ReferenceSlides(pages=norm, flat_tokens=tuple(flat), id=doc_id)


def parse_document(data, fmt: str = "json") -> Document:
    """Parse a document from bytes/str in the JSON document format.

    Each section carries exactly one of ``text`` (split and tokenized
    here) or ``sentences`` (pre-tokenized, honored verbatim apart from
    lowercasing). Global sentence positions are assigned across sections.
    """
    if fmt != "json":
        raise MalformedInput(f"unsupported format: {fmt}")
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from exc

    _require(isinstance(obj, dict), "document must be a JSON object")
    _require(isinstance(obj.get("id"), str), "missing string field 'id'")
    _require(isinstance(obj.get("title"), str), "missing string field 'title'")
    _require(isinstance(obj.get("sections"), list), "missing list field 'sections'")

    sections: list[Section] = []
    pos = 0
    for sec in obj["sections"]:
        _require(isinstance(sec, dict), "section must be an object")
        heading = sec.get("heading", "")
        _require(isinstance(heading, str), "section heading must be a string")
        has_text = "text" in sec
        has_sents = "sentences" in sec
        _require(has_text != has_sents, "section needs exactly one of 'text' or 'sentences'")

        token_lists: list[list[Token]] = []
        if has_text:
            _require(isinstance(sec["text"], str), "'text' must be a string")
            for raw in split_sentences(sec["text"]):
                toks = tokenize(raw)
                if toks:
                    token_lists.append(toks)
        else:
            _require(isinstance(sec["sentences"], list), "'sentences' must be a list")
            for item in sec["sentences"]:
                _require(
                    isinstance(item, dict) and isinstance(item.get("tokens"), list),
                    "each sentence needs a 'tokens' list",
                )
                toks = []
                for t in item["tokens"]:
                    _require(isinstance(t, str), "tokens must be strings")
                    try:
                        toks.append(Token(t.lower()))
                    except ValueError as exc:
                        raise MalformedInput(str(exc)) from exc
                _require(len(toks) > 0, "sentence token list must be non-empty")
                token_lists.append(toks)

        sents = []
        for toks in token_lists:
            sents.append(Sentence.build(toks, pos))
            pos += 1
        sections.append(Section(heading=heading, sentences=tuple(sents)))

    if pos == 0:
        raise EmptyDocument(f"document {obj['id']!r} has no sentences")
    return Document(id=obj["id"], title=obj["title"], sections=tuple(sections))


def serialize_document(doc: Document) -> bytes:
    """Serialize to the same JSON schema, pre-tokenized form."""
    obj = {
        "id": doc.id,
        "title": doc.title,
        "sections": [
            {
                "heading": sec.heading,
                "sentences": [{"tokens": list(s.tokens)} for s in sec.sentences],
            }
            for sec in doc.sections
        ],
    }
    return json.dumps(obj, ensure_ascii=False).encode("utf-8")


def parse_slides(data, fmt: str = "json") -> ReferenceSlides:
    """Parse reference slides: ``{"id": str, "pages": [[str]]}``."""
    if fmt != "json":
        raise MalformedInput(f"unsupported format: {fmt}")
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from exc

    _require(isinstance(obj, dict), "slides must be a JSON object")
    _require(isinstance(obj.get("pages"), list), "missing list field 'pages'")
    doc_id = obj.get("id", "")
    _require(isinstance(doc_id, str), "'id' must be a string")
    for page in obj["pages"]:
        _require(isinstance(page, list), "each page must be a list of lines")
        for line in page:
            _require(isinstance(line, str), "each line must be a string")
    return slides_from_pages(obj["pages"], doc_id=doc_id)


def serialize_slides(slides: ReferenceSlides) -> bytes:
    obj = {"id": slides.id, "pages": [list(p) for p in slides.pages]}
    return json.dumps(obj, ensure_ascii=False).encode("utf-8")


class Vocab:
    """Token-to-id mapping with reserved PAD (0) and UNK (1) ids."""

    PAD_ID = 0
    UNK_ID = 1

    def __init__(self, tokens):
        """``tokens`` are the real vocabulary entries for ids 2, 3, ..."""
        self._id_to_token = [PAD, UNK, *tokens]
        self._token_to_id = {t: i for i, t in enumerate(self._id_to_token)}
        if len(self._token_to_id) != len(self._id_to_token):
            raise ValueError("duplicate tokens in vocabulary")

    def id(self, token: str) -> int:
        return self._token_to_id.get(token, self.UNK_ID)

    def token(self, idx: int) -> str:
        return self._id_to_token[idx]

    def __contains__(self, token: str) -> bool:
        return token in self._token_to_id

    def __len__(self) -> int:
        return len(self._id_to_token)

    @property
    def tokens(self) -> list[str]:
        """Real tokens in id order (excludes PAD and UNK)."""
        return self._id_to_token[2:]


def build_vocab(corpus, min_count: int = 1) -> Vocab:
    """Vocabulary over a document corpus.

    Tokens with frequency >= min_count get ids in descending frequency,
    ties broken lexicographically, so ids are stable across runs.
    """
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    freq: Counter[str] = Counter()
    for doc in corpus:
        for sent in doc.sentences:
            freq.update(str(t) for t in sent.tokens)
    kept = [t for t, c in freq.items() if c >= min_count]
    kept.sort(key=lambda t: (-freq[t], t))
    return Vocab(kept)


@dataclass(frozen=True)
class EmbeddingMatrix:
    """Dense rows aligned with vocabulary ids; PAD row is all zeros."""

    rows: np.ndarray

    def __post_init__(self):
        if not np.all(np.isfinite(self.rows)):
            raise ValueError("embedding rows must be finite")
        if np.any(self.rows[Vocab.PAD_ID] != 0.0):
            raise ValueError("PAD row must be zero")


def _hash_seed(token: str) -> int:
    digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def _seeded_row(token: str, d: int) -> np.ndarray:
    rng = np.random.default_rng(_hash_seed(token))
    return rng.uniform(-0.1, 0.1, size=d)


def load_embeddings(path, vocab: Vocab, d: int) -> EmbeddingMatrix:
    """Load a whitespace-separated embedding file into vocab order.

    Tokens missing from the file get a reproducible pseudo-random row
    seeded from a stable hash of the token; the PAD row stays zero.
    """
    rows = np.zeros((len(vocab), d), dtype=np.float64)
    rows[Vocab.UNK_ID] = _seeded_row(UNK, d)
    for idx in range(2, len(vocab)):
        rows[idx] = _seeded_row(vocab.token(idx), d)

    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            token, values = parts[0], parts[1:]
            if len(values) != d:
                raise DimensionMismatch(
                    f"line {lineno}: expected {d} values, got {len(values)}"
                )
            idx = vocab.id(token)
            if idx >= 2:
                rows[idx] = [float(v) for v in values]
    return EmbeddingMatrix(rows=rows)
