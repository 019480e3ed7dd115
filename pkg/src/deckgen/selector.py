"""Sentence selection under a word budget.

Two strategies over the same objective sum(l_i * x_i * p_i) subject to
the strict budget sum(l_i * x_i) < max_len: score-greedy, and an exact
0/1 knapsack dynamic program (the integer word lengths make the optimum
directly computable, no ILP solver needed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .docmodel import Document, Sentence, word_count
from .errors import ProblemTooLarge

# Guards for the exact DP: item count, budget, and table size.
_MAX_ITEMS = 10_000
_MAX_LEN = 1_000_000
_MAX_TABLE = 50_000_000


@dataclass(frozen=True)
class SelectionProblem:
    """Integer sentence lengths, scores in [0, 1], and the word budget."""

    lengths: tuple[int, ...]
    scores: tuple[float, ...]
    max_len: int

    def __post_init__(self):
        if len(self.lengths) != len(self.scores):
            raise ValueError("lengths and scores must have equal size")
        if self.max_len < 1:
            raise ValueError("max_len must be >= 1")
        if any(l < 1 for l in self.lengths):
            raise ValueError("every length must be a positive integer")
        if any(not 0.0 <= s <= 1.0 for s in self.scores):
            raise ValueError("scores must lie in [0, 1]")

    def __len__(self) -> int:
        return len(self.lengths)

    def objective(self, decision) -> float:
        return sum(l * s for l, s, x in zip(self.lengths, self.scores, decision) if x)


def budget(doc: Document, fraction: float = 0.20) -> int:
    """Word budget: floor(fraction * total words), at least 1."""
    if not 0.0 < fraction <= 1.0:
        raise ValueError("fraction must be in (0, 1]")
    return max(1, math.floor(fraction * word_count(doc)))


def select_greedy(p: SelectionProblem, stop_on_overflow: bool = False) -> list[int]:
    """Add sentences in descending score order while the budget holds.

    Ties go to the smaller index. By default a sentence that would
    overflow is skipped and later ones are still considered; with
    ``stop_on_overflow`` the scan halts at the first overflow.
    """
    order = sorted(range(len(p)), key=lambda i: (-p.scores[i], i))
    decision = [0] * len(p)
    total = 0
    for i in order:
        if total + p.lengths[i] < p.max_len:
            decision[i] = 1
            total += p.lengths[i]
        elif stop_on_overflow:
            break
    return decision


def select_exact(p: SelectionProblem) -> list[int]:
    """Exact optimum of the selection objective via 0/1 knapsack DP.

    The strict budget becomes capacity max_len - 1 on integers. Among
    optima the lexicographically smallest index set is returned, by
    preferring inclusion during reconstruction over a suffix table.
    """
    n = len(p)
    cap = p.max_len - 1
    if n > _MAX_ITEMS or p.max_len > _MAX_LEN or (n + 1) * (cap + 1) > _MAX_TABLE:
        raise ProblemTooLarge(f"knapsack instance too large: n={n}, max_len={p.max_len}")
    if n == 0:
        return []

    lengths = np.array(p.lengths, dtype=np.int64)
    values = lengths * np.array(p.scores, dtype=np.float64)

    # best[i][c] = optimal value using items i.. with capacity c
    best = np.zeros((n + 1, cap + 1), dtype=np.float64)
    for i in range(n - 1, -1, -1):
        best[i] = best[i + 1]
        li = int(lengths[i])
        if li <= cap:
            take = values[i] + best[i + 1, : cap + 1 - li]
            best[i, li:] = np.maximum(best[i + 1, li:], take)

    decision = [0] * n
    c = cap
    for i in range(n):
        li = int(lengths[i])
        # same float expression as in the fill, so equality is bit-exact
        if li <= c and values[i] + best[i + 1, c - li] == best[i, c]:
            decision[i] = 1
            c -= li
    return decision


def selected_sentences(doc: Document, decision) -> list[Sentence]:
    """Sentences marked 1, in original document order."""
    sentences = doc.sentences
    decision = list(decision)
    if len(decision) != len(sentences):
        raise ValueError(f"decision length {len(decision)} != document n {len(sentences)}")
    return [s for s, x in zip(sentences, decision) if x]


def problem_from_doc(doc: Document, scores, max_len: int) -> tuple[SelectionProblem, list[int]]:
    """Build a selection problem over the scored, selectable sentences.

    Sentences without countable words are excluded. Returns the problem
    plus the document positions of its items; ``scores`` may be shorter
    than the document when scoring was truncated.
    """
    scores = list(scores)
    positions: list[int] = []
    lengths: list[int] = []
    probs: list[float] = []
    for sent, score in zip(doc.sentences, scores):
        if sent.length_words >= 1:
            positions.append(sent.position)
            lengths.append(sent.length_words)
            probs.append(float(score))
    problem = SelectionProblem(lengths=tuple(lengths), scores=tuple(probs), max_len=max_len)
    return problem, positions


def expand_decision(positions, decision, n: int) -> list[int]:
    """Lift an item-space decision back to a full document decision."""
    full = [0] * n
    for pos, x in zip(positions, decision):
        if x:
            full[pos] = 1
    return full
