"""Extractive oracle labeling by windowed greedy ROUGE-1 improvement.

The flattened sentence list is partitioned into consecutive windows of w
sentences. Inside each window, sentences are labeled positive greedily as
long as adding one strictly increases the ROUGE-1 recall of the cumulative
selection against the reference slides. The cumulative selection carries
across windows, so tokens already covered earn no further credit.
"""

from __future__ import annotations

import warnings
from collections import Counter
from dataclasses import dataclass

from . import rouge
from .docmodel import Document, LabelVector, ReferenceSlides
from .parallel import parallel_map


@dataclass
class WindowConfig:
    """Window size in sentences; ``max_per_window`` caps positives per
    window (None = any number of strictly-improving sentences)."""

    w: int = 10
    max_per_window: int | None = None

    def __post_init__(self):
        if self.w < 1:
            raise ValueError("window size must be >= 1")
        if self.max_per_window is not None and self.max_per_window < 1:
            raise ValueError("max_per_window must be >= 1 or None")


def label_document(doc: Document, slides: ReferenceSlides, cfg: WindowConfig) -> LabelVector:
    """Binary oracle labels for every sentence of ``doc``.

    An empty reference yields all-zero labels and a warning rather than an
    exception.
    """
    n = doc.n
    remaining = Counter(str(t) for t in slides.flat_tokens)
    if sum(remaining.values()) == 0:
        warnings.warn(f"empty reference slides for document {doc.id!r}; all labels 0")
        return LabelVector(labels=(0,) * n)

    sentences = doc.sentences
    sent_counts = [Counter(str(t) for t in s.tokens) for s in sentences]
    labels = [0] * n

    for win_start in range(0, n, cfg.w):
        window = range(win_start, min(win_start + cfg.w, n))
        picked = 0
        while cfg.max_per_window is None or picked < cfg.max_per_window:
            best_gain = 0
            best_idx = -1
            for i in window:
                if labels[i]:
                    continue
                gain = sum(
                    min(c, remaining[g]) for g, c in sent_counts[i].items() if remaining[g] > 0
                )
                if gain > best_gain:  # ties keep the smaller position
                    best_gain = gain
                    best_idx = i
            if best_idx < 0:
                break
            assert best_gain > 0, "per-step ROUGE recall must strictly increase"
            labels[best_idx] = 1
            picked += 1
            for g, c in sent_counts[best_idx].items():
                if remaining[g] > 0:
                    remaining[g] -= min(c, remaining[g])
    return LabelVector(labels=tuple(labels))


def oracle_summary(doc: Document, labels: LabelVector) -> list[list]:
    """Token lists of positively labeled sentences, in position order."""
    if len(labels) != doc.n:
        raise ValueError(f"label length {len(labels)} != document n {doc.n}")
    return [list(s.tokens) for s, y in zip(doc.sentences, labels) if y == 1]


@dataclass(frozen=True)
class SweepRow:
    w: int
    rouge_1: float
    rouge_2: float
    rouge_l: float


def _oracle_rouge(doc: Document, slides: ReferenceSlides, w: int) -> tuple[float, float, float]:
    labels = label_document(doc, slides, WindowConfig(w=w))
    summary = oracle_summary(doc, labels)
    flat = [t for sent in summary for t in sent]
    ref = list(slides.flat_tokens)
    r1 = rouge.rouge_n(flat, ref, 1).recall
    r2 = rouge.rouge_n(flat, ref, 2).recall
    rl = rouge.rouge_l(summary, [ref]).recall
    return r1, r2, rl


def sweep_window_sizes(corpus, sizes) -> list[SweepRow]:
    """Mean corpus ROUGE recall of oracle summaries per window size.

    ``corpus`` is a sequence of (Document, ReferenceSlides) pairs. Rows
    come back in the order of ``sizes``; scores are fractions in [0, 1].
    """
    sizes = list(sizes)
    if not sizes:
        raise ValueError("sizes must be non-empty")
    pairs = list(corpus)
    rows = []
    for w in sizes:
        triples = parallel_map(lambda pair: _oracle_rouge(pair[0], pair[1], w), pairs)
        count = max(1, len(triples))
        rows.append(
            SweepRow(
                w=w,
                rouge_1=sum(t[0] for t in triples) / count,
                rouge_2=sum(t[1] for t in triples) / count,
                rouge_l=sum(t[2] for t in triples) / count,
            )
        )
    return rows
