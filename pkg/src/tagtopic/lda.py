"""Belief-propagation inference and parameter estimation for plain LDA.

The message update multiplies two normalized fractions, one per factor
side: the document side sums the other word messages of the document plus
the alpha pseudo-count, the word side sums the other documents' messages
for the word plus beta, with the word-side denominator taken over the
whole vocabulary.  Held-out documents are folded in by fixing the topic-
word distributions and iterating the document side only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from . import _sweeps
from .exceptions import ConfigError, ValidationError
from .messages import (MessageState, init_messages, refresh_aggregates)
from .validation import as_corpus, check_is_fitted

__all__ = [
    "TrainConfig",
    "ModelParams",
    "lda_update",
    "lda_sweep",
    "estimate_theta",
    "estimate_phi",
    "train_lda",
    "fold_in",
    "perplexity",
    "LdaBeliefPropagation",
]

SCHEDULES = ("sequential", "synchronous")


@dataclass
class TrainConfig:
    """Training knobs.  alpha defaults to 50/J and beta to 0.01."""

    n_topics: int
    alpha: float | None = None
    beta: float = 0.01
    max_iter: int = 500
    tol: float = 1e-4
    schedule: str = "sequential"
    seed: int = 0

    def __post_init__(self):
        if self.n_topics < 1:
            raise ConfigError("n_topics must be >= 1")
        if self.alpha is None:
            self.alpha = 50.0 / self.n_topics
        if self.alpha <= 0 or self.beta <= 0:
            raise ConfigError("alpha and beta must be positive")
        if self.max_iter < 1:
            raise ConfigError("max_iter must be >= 1")
        if self.tol < 0:
            raise ConfigError("tol must be >= 0")
        if self.schedule not in SCHEDULES:
            raise ConfigError(f"schedule must be one of {SCHEDULES}")


@dataclass
class ModelParams:
    """Estimated document-topic and topic-word distributions."""

    n_topics: int
    alpha: float
    beta: float
    theta: np.ndarray   # D x J, rows sum to 1
    phi: np.ndarray     # J x W, rows sum to 1

    def validate(self):
        if not np.allclose(self.theta.sum(axis=1), 1.0, atol=1e-9):
            raise ValidationError("theta rows must sum to 1")
        if not np.allclose(self.phi.sum(axis=1), 1.0, atol=1e-9):
            raise ValidationError("phi rows must sum to 1")
        if self.alpha > 0 and self.beta > 0:
            if (self.theta <= 0).any() or (self.phi <= 0).any():
                raise ValidationError(
                    "positive hyperparameters imply strictly positive params")


@dataclass
class TrainResult:
    params: ModelParams
    state: MessageState
    trace: list[tuple[int, float, float]]  # (iteration, max_delta, perplexity)
    n_iter: int
    extras: dict = field(default_factory=dict)


def _fractions(state, alpha, beta, i):
    """The two normalized update fractions for entry i (no commit)."""
    corpus = state.corpus
    d = corpus.doc_ids[i]
    w = corpus.word_ids[i]
    contrib = corpus.counts[i] * state.messages[i]
    excl_doc = np.maximum(state.doc_totals[d] - contrib, 0.0)
    excl_word = np.maximum(state.word_totals[w] - contrib, 0.0)
    excl_glob = np.maximum(state.global_totals - contrib, 0.0)
    doc_frac = (excl_doc + alpha) / (excl_doc + alpha).sum()
    word_frac = (excl_word + beta) / (excl_glob + corpus.num_vocab * beta)
    return doc_frac, word_frac


def lda_update(state, config, w, d):
    """New message for entry (w, d): the normalized product of the
    document-side and word-side fractions.  Does not commit."""
    i = state.corpus.entry_index(d, w)
    doc_frac, word_frac = _fractions(state, config.alpha, config.beta, i)
    new = doc_frac * word_frac
    s = new.sum()
    if s <= 0.0:
        return np.full(state.n_topics, 1.0 / state.n_topics)
    return new / s


def _neutral_blend(corpus, n_topics):
    D = corpus.num_docs
    return (np.ones(D), np.zeros(D), np.zeros(D),
            np.zeros((D, n_topics)), np.zeros((D, n_topics)))


def run_sweep(state, alpha, beta, schedule, blend=None):
    """One full sweep over all entries; refreshes aggregates at the barrier.

    ``blend`` is the per-document (w_theta, w_gamma, w_delta, gamma_sum,
    delta_msg) tuple; None means the tag-free model.
    """
    corpus = state.corpus
    if blend is None:
        blend = _neutral_blend(corpus, state.n_topics)
    w_theta, w_gamma, w_delta, gamma_sum, delta_msg = blend
    if schedule == "sequential":
        max_delta = _sweeps.sweep_sequential(
            corpus.doc_ids, corpus.word_ids, corpus.counts,
            state.messages, state.doc_totals, state.word_totals,
            state.global_totals, alpha, beta, corpus.num_vocab,
            w_theta, w_gamma, w_delta, gamma_sum, delta_msg)
    elif schedule == "synchronous":
        out = np.empty_like(state.messages)
        max_delta = _sweeps.sweep_synchronous(
            corpus.doc_ids, corpus.word_ids, corpus.counts,
            state.messages, out, state.doc_totals, state.word_totals,
            state.global_totals, alpha, beta, corpus.num_vocab,
            w_theta, w_gamma, w_delta, gamma_sum, delta_msg)
        state.messages[:] = out
    else:
        raise ConfigError(f"unknown schedule {schedule!r}")
    refresh_aggregates(state)
    return float(max_delta)


def lda_sweep(state, config):
    """One tag-free sweep; returns the max L-inf message change."""
    return run_sweep(state, config.alpha, config.beta, config.schedule)


def estimate_theta(state, config):
    """Document-topic proportions from the cached document sums."""
    theta = state.doc_totals + config.alpha
    theta /= theta.sum(axis=1, keepdims=True)
    return theta


def estimate_phi(state, config):
    """Topic-word distributions, normalized over the vocabulary."""
    phi = (state.word_totals + config.beta).T
    phi /= (state.global_totals + state.corpus.num_vocab * config.beta)[:, None]
    return phi


def perplexity(theta, phi, corpus):
    """exp(- mean per-token log predictive probability) on the corpus."""
    if corpus.nnz == 0 or corpus.total_tokens == 0:
        raise ValidationError("perplexity of an empty corpus is undefined")
    if theta.shape[0] < corpus.num_docs:
        raise ValidationError("theta has fewer rows than corpus documents")
    if phi.shape[1] < corpus.num_vocab:
        raise ValidationError("phi has fewer columns than the vocabulary")
    p = np.einsum("ij,ij->i", theta[corpus.doc_ids],
                  phi[:, corpus.word_ids].T)
    if (p <= 0).any():
        raise ValidationError("zero predictive probability for a present word")
    total = corpus.counts.sum()
    return float(np.exp(-(corpus.counts * np.log(p)).sum() / total))


def train_lda(corpus, config, initial_state=None, start_iteration=0):
    """Run sweeps until the max message change drops below tol or the
    iteration budget is spent; returns estimates, state, and the per-
    iteration (iteration, max_delta, perplexity) trace."""
    state = initial_state if initial_state is not None else \
        init_messages(corpus, config.n_topics, config.seed)
    trace = []
    n_iter = start_iteration
    for it in range(start_iteration + 1, config.max_iter + 1):
        max_delta = lda_sweep(state, config)
        theta = estimate_theta(state, config)
        phi = estimate_phi(state, config)
        trace.append((it, max_delta, perplexity(theta, phi, corpus)))
        n_iter = it
        if max_delta < config.tol:
            break
    theta = estimate_theta(state, config)
    phi = estimate_phi(state, config)
    params = ModelParams(config.n_topics, config.alpha, config.beta,
                         theta, phi)
    return TrainResult(params, state, trace, n_iter)


def fold_in(test_corpus, phi, config):
    """Infer document-topic proportions for held-out documents.

    The topic-word side is frozen to ``phi``; sweeps update only the
    document-side fraction.  Vocabulary must be shared with training.
    """
    phi = np.asarray(phi, dtype=np.float64)
    if phi.shape[0] != config.n_topics:
        raise ConfigError("phi row count must equal n_topics")
    if test_corpus.nnz and test_corpus.word_ids.max() >= phi.shape[1]:
        raise ValidationError(
            "test corpus contains word ids outside the training vocabulary")
    state = init_messages(test_corpus, config.n_topics, config.seed)
    for _ in range(config.max_iter):
        max_delta = _sweeps.foldin_sweep(
            test_corpus.doc_ids, test_corpus.word_ids, test_corpus.counts,
            state.messages, state.doc_totals, phi, config.alpha)
        refresh_aggregates(state)
        if max_delta < config.tol:
            break
    return estimate_theta(state, config)


class LdaBeliefPropagation(BaseEstimator, TransformerMixin):
    """LDA trained by sparse loopy belief propagation.

    Accepts a Corpus or any document x vocabulary count matrix (dense or
    scipy sparse).  After ``fit``, ``components_`` holds the topic-word
    rows and ``doc_topic_`` the training document proportions;
    ``transform`` folds held-out documents in against the fixed topics.

    Parameters
    ----------
    n_topics : int, number of topics J.
    alpha, beta : Dirichlet pseudo-counts; alpha=None means 50/J.
    max_iter, tol : sweep budget and L-inf convergence threshold.
    schedule : "sequential" (reference, deterministic) or "synchronous"
        (barrier commits, parallelizable).
    random_state : seed for message initialization.
    """

    def __init__(self, n_topics=10, alpha=None, beta=0.01, max_iter=500,
                 tol=1e-4, schedule="sequential", random_state=0):
        self.n_topics = n_topics
        self.alpha = alpha
        self.beta = beta
        self.max_iter = max_iter
        self.tol = tol
        self.schedule = schedule
        self.random_state = random_state

    def _make_config(self):
        return TrainConfig(n_topics=self.n_topics, alpha=self.alpha,
                           beta=self.beta, max_iter=self.max_iter,
                           tol=self.tol, schedule=self.schedule,
                           seed=self.random_state)

    def fit(self, X, y=None):
        corpus = as_corpus(X)
        config = self._make_config()
        result = train_lda(corpus, config)
        self.config_ = config
        self.corpus_ = corpus
        self.components_ = result.params.phi
        self.doc_topic_ = result.params.theta
        self.params_ = result.params
        self.message_state_ = result.state
        self.trace_ = result.trace
        self.n_iter_ = result.n_iter
        return self

    def transform(self, X):
        check_is_fitted(self, "components_")
        return fold_in(as_corpus(X, num_vocab=self.components_.shape[1]),
                       self.components_, self.config_)

    def perplexity(self, X, doc_topic=None):
        check_is_fitted(self, "components_")
        corpus = as_corpus(X, num_vocab=self.components_.shape[1])
        if doc_topic is None:
            doc_topic = fold_in(corpus, self.components_, self.config_)
        return perplexity(doc_topic, self.components_, corpus)

    def score(self, X, y=None):
        """Mean per-token predictive log-likelihood (higher is better)."""
        return -float(np.log(self.perplexity(X)))
