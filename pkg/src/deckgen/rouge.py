"""ROUGE-1/2/L metrics with clipped n-gram counts and summary-level LCS."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass


@dataclass(frozen=True)
class RougeScore:
    recall: float
    precision: float
    f1: float

    @classmethod
    def from_counts(cls, match: float, cand_total: int, ref_total: int) -> "RougeScore":
        r = match / ref_total if ref_total > 0 else 0.0
        p = match / cand_total if cand_total > 0 else 0.0
        f = 2.0 * p * r / (p + r) if p + r > 0 else 0.0
        return cls(recall=r, precision=p, f1=f)


def ngram_counts(tokens, n: int) -> Counter:
    """Multiset of n-grams as tuples."""
    toks = [str(t) for t in tokens]
    return Counter(tuple(toks[i : i + n]) for i in range(len(toks) - n + 1))


def rouge_n(candidate, reference, n: int) -> RougeScore:
    """Clipped n-gram overlap between two token sequences, n in {1, 2}."""
    if n not in (1, 2):
        raise ValueError(f"n must be 1 or 2, got {n}")
    cand = ngram_counts(candidate, n)
    ref = ngram_counts(reference, n)
    match = sum(min(c, ref[g]) for g, c in cand.items())
    return RougeScore.from_counts(match, sum(cand.values()), sum(ref.values()))


def lcs_length(a, b) -> int:
    """Length of the longest common subsequence of two token sequences."""
    a = [str(t) for t in a]
    b = [str(t) for t in b]
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0] * (len(b) + 1)
        for j, y in enumerate(b, start=1):
            if x == y:
                cur[j] = prev[j - 1] + 1
            else:
                cur[j] = max(prev[j], cur[j - 1])
        prev = cur
    return prev[-1]


def _lcs_ref_positions(cand, ref) -> set[int]:
    """Reference indices participating in one LCS of (cand, ref)."""
    la, lb = len(cand), len(ref)
    dp = [[0] * (lb + 1) for _ in range(la + 1)]
    for i in range(la):
        for j in range(lb):
            if cand[i] == ref[j]:
                dp[i + 1][j + 1] = dp[i][j] + 1
            else:
                dp[i + 1][j + 1] = max(dp[i][j + 1], dp[i + 1][j])
    hits: set[int] = set()
    i, j = la, lb
    while i > 0 and j > 0:
        if cand[i - 1] == ref[j - 1] and dp[i][j] == dp[i - 1][j - 1] + 1:
            hits.add(j - 1)
            i -= 1
            j -= 1
        elif dp[i - 1][j] >= dp[i][j - 1]:
            i -= 1
        else:
            j -= 1
    return hits


def rouge_l(candidate_sents, reference_sents) -> RougeScore:
    """Summary-level ROUGE-L.

    For each reference sentence, the union of LCS matches against all
    candidate sentences is credited, with every credited token clipped
    against the candidate token multiset so a candidate token counts at
    most once across the whole union.
    """
    cand_sents = [[str(t) for t in s] for s in candidate_sents]
    ref_sents = [[str(t) for t in s] for s in reference_sents]
    cand_total = sum(len(s) for s in cand_sents)
    ref_total = sum(len(s) for s in ref_sents)

    cand_budget = Counter(t for s in cand_sents for t in s)
    match = 0
    for ref in ref_sents:
        union: set[int] = set()
        for cand in cand_sents:
            union |= _lcs_ref_positions(cand, ref)
        for j in sorted(union):
            tok = ref[j]
            if cand_budget[tok] > 0:
                cand_budget[tok] -= 1
                match += 1
    return RougeScore.from_counts(match, cand_total, ref_total)
