"""Core domain types: documents, reference slides, label and score vectors.

Everything here is immutable after construction and safe to share across
threads. Parsing and serialization live in :mod:`deckgen.ingest`.
"""

from __future__ import annotations

from dataclasses import dataclass


class Token(str):
    """A single lowercased token. Non-empty, contains no whitespace."""

    __slots__ = ()

    def __new__(cls, text: str) -> "Token":
        if not text:
            raise ValueError("token must be non-empty")
        if any(ch.isspace() for ch in text):
            raise ValueError(f"token contains whitespace: {text!r}")
        return super().__new__(cls, text)

    @property
    def is_punct(self) -> bool:
        """True when the token has no alphanumeric character."""
        return not any(ch.isalnum() for ch in self)


@dataclass(frozen=True)
class Sentence:
    """One sentence with its global 0-based position in the document.

    ``length_words`` counts tokens excluding pure-punctuation ones; it is
    the sentence length used by the word budget of the selector.
    """

    tokens: tuple[Token, ...]
    position: int
    length_words: int

    @classmethod
    def build(cls, tokens, position: int) -> "Sentence":
        toks = tuple(t if isinstance(t, Token) else Token(t) for t in tokens)
        if not toks:
            raise ValueError("sentence must have at least one token")
        words = sum(1 for t in toks if not t.is_punct)
        return cls(toks, position, words)

    @property
    def text(self) -> str:
        return " ".join(self.tokens)


@dataclass(frozen=True)
class Section:
    heading: str
    sentences: tuple[Sentence, ...]


@dataclass(frozen=True)
class Document:
    """An ordered sequence of sections; sentence positions are global."""

    id: str
    title: str
    sections: tuple[Section, ...]

    def __post_init__(self):
        pos = 0
        for sec in self.sections:
            for sent in sec.sentences:
                if sent.position != pos:
                    raise ValueError(
                        f"sentence position {sent.position} != expected {pos}"
                    )
                pos += 1

    @property
    def n(self) -> int:
        return sum(len(sec.sentences) for sec in self.sections)

    @property
    def sentences(self) -> tuple[Sentence, ...]:
        """All sentences flattened across sections, in position order."""
        return tuple(s for sec in self.sections for s in sec.sentences)

    def section_index_of(self, position: int) -> int:
        """Index of the section containing the sentence at ``position``."""
        seen = 0
        for i, sec in enumerate(self.sections):
            seen += len(sec.sentences)
            if position < seen:
                return i
        raise IndexError(f"position {position} out of range")


@dataclass(frozen=True)
class ReferenceSlides:
    """Ground-truth slides as pages of text lines.

    ``flat_tokens`` is the tokenization of all lines concatenated in page
    then line order; it is derived at construction time by the ingest
    tokenizer and treated as a single flat token sequence everywhere.
    """

    pages: tuple[tuple[str, ...], ...]
    flat_tokens: tuple[Token, ...]
    id: str = ""


@dataclass(frozen=True)
class LabelVector:
    """Binary oracle labels, one per document sentence."""

    labels: tuple[int, ...]

    def __post_init__(self):
        if any(y not in (0, 1) for y in self.labels):
            raise ValueError("labels must be 0 or 1")

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __getitem__(self, i):
        return self.labels[i]


@dataclass(frozen=True)
class ScoreVector:
    """Predicted probabilities p(y_i = 1), one per scored sentence."""

    scores: tuple[float, ...]

    def __post_init__(self):
        if any(not (0.0 <= s <= 1.0) for s in self.scores):
            raise ValueError("scores must lie in [0, 1]")

    def __len__(self) -> int:
        return len(self.scores)

    def __iter__(self):
        return iter(self.scores)

    def __getitem__(self, i):
        return self.scores[i]


def word_count(doc: Document) -> int:
    """Total countable words in the document (punctuation excluded)."""
    return sum(s.length_words for sec in doc.sections for s in sec.sentences)


def flatten_reference(slides: ReferenceSlides) -> list[Token]:
    """Reference slide text as one flat token list, page then line order."""
    return list(slides.flat_tokens)
