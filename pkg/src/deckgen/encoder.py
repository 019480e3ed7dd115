"""Sentence and document embeddings.

Sentences are encoded by a BiLSTM whose hidden size per direction equals
the word dimension d, so sentence embeddings have width 2d. In ``simple``
mode the sentence embedding concatenates the two final hidden states and
the document embedding is ReLU(W * mean + b); in ``attention`` mode both
levels aggregate hidden states with a k-row self-attention and average
the k context rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .docmodel import Document
from .errors import EmptySentence
from .ingest import Vocab
from .neuralcore import (
    ParamStore,
    Tensor,
    concat,
    constant,
    glorot_uniform,
    lookup,
    matmul,
    mean,
    mul,
    relu,
    add,
    sigmoid,
    softmax,
    tanh,
    transpose,
)

_GATES = ("i", "f", "g", "o")


@dataclass
class EncoderConfig:
    d: int = 50
    k: int = 100
    max_tokens: int = 50
    max_sentences: int = 500
    mode: str = "simple"

    def __post_init__(self):
        if min(self.d, self.k, self.max_tokens, self.max_sentences) < 1:
            raise ValueError("all encoder dimensions must be positive")
        if self.mode not in ("simple", "attention"):
            raise ValueError(f"mode must be 'simple' or 'attention', got {self.mode!r}")

    @property
    def hidden(self) -> int:
        """LSTM hidden size per direction equals the word dimension."""
        return self.d


@dataclass
class SentenceEmbedding:
    """Width-2d sentence vector; per-token hidden matrix (m x 2d) is
    retained in attention mode."""

    vector: Tensor
    hidden: Tensor | None
    length: int


@dataclass
class DocumentEmbedding:
    vector: Tensor


def init_params(cfg: EncoderConfig, vocab: Vocab, embeddings=None, seed: int = 0) -> ParamStore:
    """Fresh parameter store for the encoder (ranker params added separately).

    Matrices are Glorot-uniform, biases zero except the LSTM forget gate
    bias at 1.0. Word embeddings copy ``embeddings`` when given.
    """
    rng = np.random.default_rng(seed)
    store = ParamStore()
    d, h, k = cfg.d, cfg.hidden, cfg.k

    if embeddings is not None:
        rows = np.asarray(embeddings.rows, dtype=np.float64)
        if rows.shape != (len(vocab), d):
            raise ValueError(f"embedding shape {rows.shape} != ({len(vocab)}, {d})")
        store.add("word_emb", rows)
    else:
        rows = glorot_uniform(rng, len(vocab), d, (len(vocab), d))
        rows[Vocab.PAD_ID] = 0.0
        store.add("word_emb", rows)

    for direction in ("fw", "bw"):
        for gate in _GATES:
            store.add(f"lstm_{direction}.{gate}.W", glorot_uniform(rng, d, h, (d, h)))
            store.add(f"lstm_{direction}.{gate}.U", glorot_uniform(rng, h, h, (h, h)))
            bias = np.ones((1, h)) if gate == "f" else np.zeros((1, h))
            store.add(f"lstm_{direction}.{gate}.b", bias)

    if cfg.mode == "simple":
        store.add("doc.W", glorot_uniform(rng, 2 * d, 2 * d, (2 * d, 2 * d)))
        store.add("doc.b", np.zeros((1, 2 * d)))
    else:
        store.add("attn_word.W", glorot_uniform(rng, 2 * d, k, (k, 2 * d)))
        store.add("attn_sent.W", glorot_uniform(rng, 2 * d, k, (k, 2 * d)))
    return store


def _lstm_states(xs: list[Tensor], direction: str, params: ParamStore, h: int) -> list[Tensor]:
    """Hidden states over ``xs`` (each 1 x d), in input order."""
    W = {g: params.leaf(f"lstm_{direction}.{g}.W") for g in _GATES}
    U = {g: params.leaf(f"lstm_{direction}.{g}.U") for g in _GATES}
    b = {g: params.leaf(f"lstm_{direction}.{g}.b") for g in _GATES}
    h_t = constant(np.zeros((1, h)))
    c_t = constant(np.zeros((1, h)))
    states = []
    for x in xs:
        gi = sigmoid(add(add(matmul(x, W["i"]), matmul(h_t, U["i"])), b["i"]))
        gf = sigmoid(add(add(matmul(x, W["f"]), matmul(h_t, U["f"])), b["f"]))
        gg = tanh(add(add(matmul(x, W["g"]), matmul(h_t, U["g"])), b["g"]))
        go = sigmoid(add(add(matmul(x, W["o"]), matmul(h_t, U["o"])), b["o"]))
        c_t = add(mul(gf, c_t), mul(gi, gg))
        h_t = mul(go, tanh(c_t))
        states.append(h_t)
    return states


def _attend(hidden: Tensor, weight: Tensor) -> Tensor:
    """k-row attention over the rows of ``hidden``; mean of the k context
    rows, shape (1, width)."""
    scores = matmul(weight, transpose(hidden))
    attn = softmax(scores, axis=1)
    context = matmul(attn, hidden)
    return mean(context, axis=0)


def encode_sentence(tokens, cfg: EncoderConfig, params: ParamStore, vocab: Vocab) -> SentenceEmbedding:
    """Encode one sentence. Tokens beyond ``max_tokens`` are dropped and
    PAD ids are masked out of the recurrence entirely."""
    ids = [vocab.id(str(t)) for t in tokens[: cfg.max_tokens]]
    ids = [i for i in ids if i != Vocab.PAD_ID]
    if not ids:
        raise EmptySentence("sentence has no encodable tokens")

    emb = params.leaf("word_emb")
    xs = [lookup(emb, [i]) for i in ids]
    fw = _lstm_states(xs, "fw", params, cfg.hidden)
    bw_rev = _lstm_states(list(reversed(xs)), "bw", params, cfg.hidden)
    bw = list(reversed(bw_rev))  # bw[t] is the backward state at token t

    if cfg.mode == "simple":
        vector = concat([fw[-1], bw[0]], axis=1)
        return SentenceEmbedding(vector=vector, hidden=None, length=len(ids))

    rows = [concat([fw[t], bw[t]], axis=1) for t in range(len(ids))]
    hidden = concat(rows, axis=0) if len(rows) > 1 else rows[0]
    vector = _attend(hidden, params.leaf("attn_word.W"))
    return SentenceEmbedding(vector=vector, hidden=hidden, length=len(ids))


def simple_doc_embedding(sents, params: ParamStore) -> DocumentEmbedding:
    """ReLU(W x mean of sentence embeddings + b)."""
    if not sents:
        raise ValueError("need at least one sentence")
    stacked = concat([s.vector for s in sents], axis=0) if len(sents) > 1 else sents[0].vector
    mu = mean(stacked, axis=0)
    out = relu(add(matmul(mu, params.leaf("doc.W")), params.leaf("doc.b")))
    return DocumentEmbedding(vector=out)


def attention_doc_embedding(sents, params: ParamStore) -> DocumentEmbedding:
    """Sentence-level attention over sentence embeddings, mean of k rows."""
    if not sents:
        raise ValueError("need at least one sentence")
    stacked = concat([s.vector for s in sents], axis=0) if len(sents) > 1 else sents[0].vector
    return DocumentEmbedding(vector=_attend(stacked, params.leaf("attn_sent.W")))


def encode_document(doc: Document, cfg: EncoderConfig, params: ParamStore,
                    vocab: Vocab) -> tuple[list[SentenceEmbedding], DocumentEmbedding]:
    """Sentence embeddings (up to ``max_sentences``) plus the document
    embedding for the configured mode."""
    sents = [
        encode_sentence(s.tokens, cfg, params, vocab)
        for s in doc.sentences[: cfg.max_sentences]
    ]
    if cfg.mode == "simple":
        doc_emb = simple_doc_embedding(sents, params)
    else:
        doc_emb = attention_doc_embedding(sents, params)
    return sents, doc_emb
