"""Sentence scoring head and the weighted cross-entropy loss.

Each sentence logit sums a positional term, a content term, a salience
bilinear form against the document embedding, and a novelty bilinear form
against the running summary state (the probability-weighted sum of the
embeddings of previously scored sentences).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .docmodel import ScoreVector
from .errors import LengthMismatch, TooManySentences
from .encoder import DocumentEmbedding, EncoderConfig, SentenceEmbedding
from .neuralcore import (
    ParamStore,
    Tensor,
    add,
    as_tensor,
    clamp,
    constant,
    glorot_uniform,
    log,
    lookup,
    matmul,
    mul,
    sigmoid,
    transpose,
)

_PROB_FLOOR = 1e-7


@dataclass
class LossWeights:
    """Class weights for the imbalanced labels (positives are rare)."""

    positive_weight: float = 85.0
    negative_weight: float = 2.0

    def __post_init__(self):
        if self.positive_weight <= 0 or self.negative_weight <= 0:
            raise ValueError("loss weights must be > 0")


def init_ranker_params(store: ParamStore, cfg: EncoderConfig, seed: int = 1) -> None:
    """Add the scoring-head parameters to an encoder parameter store.

    The positional lookup table has ``max_sentences`` rows and starts at
    zero, like the biases.
    """
    rng = np.random.default_rng(seed)
    width = 2 * cfg.d
    store.add("rank.W_pos", glorot_uniform(rng, width, 1, (width, 1)))
    store.add("rank.W_content", glorot_uniform(rng, width, 1, (width, 1)))
    store.add("rank.W_salience", glorot_uniform(rng, width, width, (width, width)))
    store.add("rank.W_novelty", glorot_uniform(rng, width, width, (width, width)))
    store.add("rank.pos_table", np.zeros((cfg.max_sentences, width)))


def score_sentences(sent_embs, doc_emb: DocumentEmbedding, params: ParamStore) -> list[Tensor]:
    """Probabilities p(y_i = 1) in sentence order, as scalar graph nodes.

    The summary state for sentence i sums p_j * E_j over j < i, so scores
    depend only on the sentences at or before their own position.
    """
    n = len(sent_embs)
    max_rows = params.value("rank.pos_table").shape[0]
    if n > max_rows:
        raise TooManySentences(f"{n} sentences > positional table size {max_rows}")

    pos_table = params.leaf("rank.pos_table")
    w_pos = params.leaf("rank.W_pos")
    w_content = params.leaf("rank.W_content")
    w_salience = params.leaf("rank.W_salience")
    w_novelty = params.leaf("rank.W_novelty")

    width = params.value("rank.pos_table").shape[1]
    summary = constant(np.zeros((1, width)))
    probs: list[Tensor] = []
    for i, se in enumerate(sent_embs):
        e = se.vector
        pos = matmul(lookup(pos_table, [i]), w_pos)
        content = matmul(e, w_content)
        salience = matmul(matmul(doc_emb.vector, w_salience), transpose(e))
        novelty = matmul(matmul(summary, w_novelty), transpose(e))
        p = sigmoid(add(add(pos, content), add(salience, novelty)))
        probs.append(p)
        summary = add(summary, mul(p, e))
    return probs


def scores_to_vector(probs) -> ScoreVector:
    return ScoreVector(scores=tuple(p.item() if isinstance(p, Tensor) else float(p) for p in probs))


def weighted_loss(scores, labels, w: LossWeights) -> Tensor:
    """Weighted cross-entropy, summed over sentences.

    Probabilities are clamped to [1e-7, 1 - 1e-7] before the logarithms.
    Accepts graph nodes or plain floats for the scores.
    """
    scores = list(scores)
    labels = list(labels)
    if len(scores) != len(labels):
        raise LengthMismatch(f"{len(scores)} scores vs {len(labels)} labels")
    total = constant(np.zeros((1, 1)))
    for p, y in zip(scores, labels):
        pc = clamp(as_tensor(p), _PROB_FLOOR, 1.0 - _PROB_FLOOR)
        if y == 1:
            total = add(total, mul(as_tensor(-w.positive_weight), log(pc)))
        else:
            total = add(total, mul(as_tensor(-w.negative_weight), log(add(as_tensor(1.0), mul(as_tensor(-1.0), pc)))))
    return total
