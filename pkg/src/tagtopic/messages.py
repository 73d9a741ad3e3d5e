"""Per-(word, document) topic messages and their count-weighted aggregates.

One message vector is stored per distinct word index per document (not per
token); integer counts enter only as multiplicative weights in the cached
sums.  Aggregates are maintained incrementally during a sweep and refreshed
from scratch at every sweep boundary to bound floating-point drift.
"""

from __future__ import annotations

import numpy as np

from .exceptions import ConfigError, ValidationError

__all__ = [
    "MessageState",
    "init_messages",
    "recompute_aggregates",
    "neighbor_sums",
    "commit_message",
    "save_checkpoint",
    "load_checkpoint",
]

NORMALIZATION_ATOL = 1e-9


class MessageState:
    """Message vectors mu(z_{w,d}) plus cached count-weighted sums.

    Attributes
    ----------
    messages : (nnz, J) array, each row a distribution over topics
    doc_totals : (D, J) array, sum_w n_{w,d} * mu(z_{w,d})
    word_totals : (W, J) array, sum_d n_{w,d} * mu(z_{w,d})
    global_totals : (J,) array, sum over all entries of n * mu
    """

    def __init__(self, corpus, n_topics, messages, rng_seed):
        self.corpus = corpus
        self.n_topics = int(n_topics)
        self.messages = messages
        self.rng_seed = int(rng_seed)
        self.doc_totals = None
        self.word_totals = None
        self.global_totals = None
        refresh_aggregates(self)

    def copy(self):
        dup = MessageState.__new__(MessageState)
        dup.corpus = self.corpus
        dup.n_topics = self.n_topics
        dup.messages = self.messages.copy()
        dup.rng_seed = self.rng_seed
        dup.doc_totals = self.doc_totals.copy()
        dup.word_totals = self.word_totals.copy()
        dup.global_totals = self.global_totals.copy()
        return dup


def init_messages(corpus, n_topics, seed):
    """Seeded uniform-random messages, normalized per entry."""
    if n_topics < 1:
        raise ConfigError("n_topics must be >= 1")
    rng = np.random.default_rng(seed)
    raw = rng.random((corpus.nnz, n_topics))
    raw /= raw.sum(axis=1, keepdims=True)
    return MessageState(corpus, n_topics, raw, seed)


def recompute_aggregates(corpus, messages):
    """From-scratch aggregate sums; the single source of truth for refresh,
    checkpoint reload, and drift checks."""
    n_topics = messages.shape[1]
    weighted = messages * corpus.counts[:, None]
    doc_totals = np.zeros((corpus.num_docs, n_topics))
    np.add.at(doc_totals, corpus.doc_ids, weighted)
    word_totals = np.zeros((corpus.num_vocab, n_topics))
    np.add.at(word_totals, corpus.word_ids, weighted)
    global_totals = weighted.sum(axis=0)
    return doc_totals, word_totals, global_totals


def refresh_aggregates(state):
    state.doc_totals, state.word_totals, state.global_totals = \
        recompute_aggregates(state.corpus, state.messages)


def neighbor_sums(state, w, d):
    """Count-weighted message sums excluding the current entry.

    Returns (mu_minus_w, mu_minus_d): the document-side sum over the other
    words of d, and the word-side sum over the other documents containing
    w.  Tiny negative components from incremental float drift clamp to 0.
    """
    i = state.corpus.entry_index(d, w)
    contrib = state.corpus.counts[i] * state.messages[i]
    mu_minus_w = np.maximum(state.doc_totals[d] - contrib, 0.0)
    mu_minus_d = np.maximum(state.word_totals[w] - contrib, 0.0)
    return mu_minus_w, mu_minus_d


def commit_message(state, w, d, new_mu):
    """Replace one message and adjust the aggregates incrementally."""
    new_mu = np.asarray(new_mu, dtype=np.float64)
    if new_mu.shape != (state.n_topics,):
        raise ValidationError(
            f"message must have shape ({state.n_topics},)")
    if abs(new_mu.sum() - 1.0) > NORMALIZATION_ATOL or (new_mu < 0).any():
        raise ValidationError("message must be a distribution (sum 1, >= 0)")
    i = state.corpus.entry_index(d, w)
    delta = state.corpus.counts[i] * (new_mu - state.messages[i])
    state.messages[i] = new_mu
    state.doc_totals[d] += delta
    state.word_totals[w] += delta
    state.global_totals += delta


def check_aggregates(state, atol=1e-6):
    """Raise if the incremental aggregates drifted from scratch recompute."""
    doc, word, glob = recompute_aggregates(state.corpus, state.messages)
    for name, a, b in (("doc_totals", state.doc_totals, doc),
                       ("word_totals", state.word_totals, word),
                       ("global_totals", state.global_totals, glob)):
        err = np.max(np.abs(a - b)) if a.size else 0.0
        if err > atol:
            raise ValidationError(f"{name} drift {err:.3e} exceeds {atol}")


# ---------------------------------------------------------------------------
# checkpoints
#
# A checkpoint stores J, the init seed, the iteration index, and all message
# vectors in normalized entry order, plus any engine-specific extras (TTM
# credit and tag messages).  Aggregates are recomputed on load with the same
# function used at sweep boundaries, so resuming reproduces sequential
# training bit-identically.
# ---------------------------------------------------------------------------

def save_checkpoint(path, state, iteration, kind="lda", extras=None):
    payload = {
        "kind": np.array(kind),
        "n_topics": np.array(state.n_topics, dtype=np.int64),
        "rng_seed": np.array(state.rng_seed, dtype=np.int64),
        "iteration": np.array(iteration, dtype=np.int64),
        "messages": state.messages,
        "corpus_shape": np.array(
            [state.corpus.num_docs, state.corpus.num_vocab,
             state.corpus.nnz], dtype=np.int64),
    }
    for key, val in (extras or {}).items():
        payload["extra_" + key] = val
    np.savez(path, **payload)


def load_checkpoint(path, corpus):
    """Restore (state, iteration, kind, extras) against the given corpus."""
    with np.load(path, allow_pickle=False) as data:
        shape = data["corpus_shape"]
        if (corpus.num_docs, corpus.num_vocab, corpus.nnz) != tuple(shape):
            raise ValidationError(
                "checkpoint was written for a different corpus "
                f"(expected D,W,nnz = {tuple(int(x) for x in shape)})")
        state = MessageState(corpus, int(data["n_topics"]),
                             data["messages"].copy(),
                             int(data["rng_seed"]))
        extras = {k[len("extra_"):]: data[k].copy()
                  for k in data.files if k.startswith("extra_")}
        return state, int(data["iteration"]), str(data["kind"]), extras
