"""Tag-topic model: message passing on the factor hypergraph.

Tags attach factor nodes to the documents they cover; a per-document
hyperedge couples the document's tag factors.  Word messages are blended
with tag-side messages by a convex combination with weights (omega1,
omega2); setting both to zero reduces the engine to plain LDA exactly.

All relation enumeration (document pairs per tag, cross-tag document
tuples) is explicit, so per-iteration cost grows linearly with the number
of relations; a seeded uniform subsample caps runaway enumerations for
popular tags (disable with tuple_cap=None for exact results).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .exceptions import ConfigError, ValidationError
from .lda import (ModelParams, TrainConfig, TrainResult, _fractions,
                  estimate_phi, estimate_theta, perplexity, run_sweep,
                  LdaBeliefPropagation)
from .messages import init_messages
from .validation import as_corpus, as_tag_graph

__all__ = [
    "TtmConfig",
    "TtmState",
    "RelationIndex",
    "init_ttm_state",
    "doc_tag_message",
    "update_credit",
    "pairwise_factor",
    "hyper_factor",
    "gamma_message",
    "delta_message",
    "ttm_update",
    "train_ttm",
    "TagTopicModel",
]

_SEED_MASK = 0xFFFF_FFFF_FFFF_FFFF
_CREDIT_STREAM = 0xC4ED
_TUPLE_STREAM = 0x7057


def _entropy(seed):
    return int(seed) & _SEED_MASK


@dataclass
class TtmConfig(TrainConfig):
    """Training knobs plus the tag-side blend weights.

    omega1 weighs the per-tag pairwise messages, omega2 the hyperedge
    message; omega1 + omega2 <= 1 with the remainder on the document
    factor.  ``order`` picks pairwise (2) or triple (3) enumeration for
    the hyperedge factor.  ``joint_neighbors`` switches the cross-tag
    neighbor sets to the intersection reading (documents carrying all
    tags of the subset) instead of the per-tag cross product.
    """

    omega1: float = 0.0
    omega2: float = 0.0
    order: int = 3
    tuple_cap: int | None = 10_000
    joint_neighbors: bool = False

    def __post_init__(self):
        super().__post_init__()
        if self.omega1 < 0 or self.omega2 < 0:
            raise ConfigError("omega weights must be >= 0")
        if self.omega1 + self.omega2 > 1.0:
            raise ConfigError("omega1 + omega2 must be <= 1")
        if self.order not in (2, 3):
            raise ConfigError("order must be 2 or 3")
        if self.tuple_cap is not None and self.tuple_cap < 1:
            raise ConfigError("tuple_cap must be positive or None")


class RelationIndex:
    """Enumerable relations of the tag graph.

    Per tag: the unordered document pairs sharing it.  Per document: the
    tag subsets of its tag set (pairs, plus triples at order 3) together
    with the cross-neighbor document sets those subsets induce.  ``L`` is
    the total relation count before any subsampling cap.
    """

    def __init__(self, tags, order=3, joint_neighbors=False):
        if order not in (2, 3):
            raise ConfigError("order must be 2 or 3")
        self.tags = tags
        self.order = order
        self.joint_neighbors = joint_neighbors
        self.tag_pair_counts = [math.comb(len(ds), 2)
                                for ds in tags.tag_docs]
        self.doc_tag_pairs = [list(combinations(ts, 2))
                              for ts in tags.doc_tags]
        if order == 3:
            self.doc_tag_subsets = [list(combinations(ts, 3))
                                    for ts in tags.doc_tags]
        else:
            self.doc_tag_subsets = self.doc_tag_pairs
        self.hyper_tuple_counts = [
            sum(self.cross_tuple_count(subset)
                for subset in self.doc_tag_subsets[d])
            for d in range(tags.num_docs)]
        self.pairwise_relations = int(sum(self.tag_pair_counts))
        self.hyper_relations = int(sum(self.hyper_tuple_counts))
        self.L = self.pairwise_relations + self.hyper_relations

    def tag_doc_pairs(self, t):
        """Unordered document pairs {d, d'} sharing tag t."""
        return list(combinations(self.tags.tag_docs[t], 2))

    def cross_doc_sets(self, subset):
        """Per-position document id arrays for a tag subset."""
        if self.joint_neighbors:
            joint = set(self.tags.tag_docs[subset[0]])
            for t in subset[1:]:
                joint &= set(self.tags.tag_docs[t])
            shared = np.array(sorted(joint), dtype=np.int64)
            return tuple(shared for _ in subset)
        return tuple(np.array(self.tags.tag_docs[t], dtype=np.int64)
                     for t in subset)

    def cross_tuple_count(self, subset):
        """Number of all-distinct ordered document tuples for the subset."""
        sets = [set(self.tags.tag_docs[t]) for t in subset]
        if self.joint_neighbors:
            s = len(set.intersection(*sets))
            n = 1
            for k in range(len(subset)):
                n *= max(s - k, 0)
            return n
        if len(subset) == 2:
            a, b = sets
            return len(a) * len(b) - len(a & b)
        a, b, c = sets
        return (len(a) * len(b) * len(c)
                - len(a & b) * len(c) - len(a & c) * len(b)
                - len(b & c) * len(a) + 2 * len(a & b & c))


class TtmState:
    """Credit distributions, document-tag messages, and factor vectors.

    credit[d] is a (distinct words in d) x |ne(d)| matrix of tag credit
    rows; doc_tag_msgs[d] and gamma_msgs[d] are |ne(d)| x J.  Factor
    vectors default to uniform 1/J wherever a tag or document offers no
    structural evidence.
    """

    def __init__(self, corpus, tags, config):
        self.corpus = corpus
        self.tags = tags
        self.n_topics = config.n_topics
        self.omega1 = config.omega1
        self.omega2 = config.omega2
        self.order = config.order
        self.tuple_cap = config.tuple_cap
        self.relations = RelationIndex(tags, config.order,
                                       config.joint_neighbors)
        self.tag_pos = [{t: k for k, t in enumerate(ts)}
                        for ts in tags.doc_tags]
        J = config.n_topics
        D = corpus.num_docs
        uniform = 1.0 / J
        self.credit = []
        self.doc_tag_msgs = []
        for d in range(D):
            n_words = corpus.doc_offsets[d + 1] - corpus.doc_offsets[d]
            n_tags = len(tags.doc_tags[d])
            self.credit.append(np.zeros((n_words, n_tags)))
            self.doc_tag_msgs.append(np.full((n_tags, J), uniform))
        self.pairwise_factors = np.full((tags.num_tags, J), uniform)
        self.hyper_factors = np.full((D, J), uniform)
        self.gamma_msgs = None          # set after the first refresh
        self.delta_msgs = np.full((D, J), uniform)

    def validate_credit(self, atol=1e-9):
        for d, rows in enumerate(self.credit):
            if rows.size == 0:
                continue
            if (rows < 0).any() or \
                    np.abs(rows.sum(axis=1) - 1.0).max() > atol:
                raise ValidationError(
                    f"credit rows of document {d} are not distributions")


def init_ttm_state(corpus, tags, config):
    """Fresh state with seeded uniform-random normalized credit rows."""
    state = TtmState(corpus, tags, config)
    rng = np.random.default_rng([_entropy(config.seed), _CREDIT_STREAM])
    for d in range(corpus.num_docs):
        rows = state.credit[d]
        if rows.size == 0:
            continue
        raw = rng.random(rows.shape)
        rows[:] = raw / raw.sum(axis=1, keepdims=True)
    return state


def _uniform(n_topics):
    return np.full(n_topics, 1.0 / n_topics)


def _mu_bar(ttm, d, t):
    return ttm.doc_tag_msgs[d][ttm.tag_pos[d][t]]


def _tag_matrix(ttm, t):
    """Stacked doc-tag messages of every document carrying tag t."""
    docs = ttm.tags.tag_docs[t]
    if not docs:
        return np.zeros((0, ttm.n_topics))
    return np.vstack([_mu_bar(ttm, m, t) for m in docs])


# ---------------------------------------------------------------------------
# single-relation operations
# ---------------------------------------------------------------------------

def doc_tag_message(state, ttm, d, t):
    """Credit-weighted mean of document d's word messages w.r.t. tag t."""
    if t not in ttm.tag_pos[d]:
        raise ValidationError(f"tag {t} is not attached to document {d}")
    corpus = state.corpus
    sl = corpus.doc_slice(d)
    if sl.stop == sl.start:
        return _uniform(state.n_topics)
    p = ttm.credit[d][:, ttm.tag_pos[d][t]]
    weights = corpus.counts[sl] * p
    denom = weights.sum()
    if denom <= 0.0:
        return _uniform(state.n_topics)
    return (weights[:, None] * state.messages[sl]).sum(axis=0) / denom


def update_credit(state, ttm, w, d):
    """Credit row for word w of document d: similarity between the word
    message and each attached tag's factor message, normalized over the
    document's tag set.  Documents without tags yield an empty row (the
    operation is skipped for them during training)."""
    ts = ttm.tags.doc_tags[d]
    if not ts:
        return np.zeros(0)
    if ttm.gamma_msgs is None:
        raise ValidationError(
            "credit update requires tag messages; run a refresh first")
    i = state.corpus.entry_index(d, w)
    raw = ttm.gamma_msgs[d] @ state.messages[i]
    s = raw.sum()
    if s <= 0.0:
        return np.full(len(ts), 1.0 / len(ts))
    return raw / s


def _sample_pairs(n_a, n_b, cap, rng):
    """Uniform ordered index pairs, used when enumeration exceeds the cap."""
    ii = rng.integers(0, n_a, size=cap)
    jj = rng.integers(0, n_b, size=cap)
    return ii, jj


def pairwise_factor(ttm, t, rng=None):
    """Average Hadamard product of doc-tag messages over all document
    pairs sharing tag t; uniform when the tag covers fewer than two
    documents or the average degenerates to the zero vector."""
    docs = ttm.tags.tag_docs[t]
    K = len(docs)
    if K < 2:
        return _uniform(ttm.n_topics)
    U = _tag_matrix(ttm, t)
    n_pairs = K * (K - 1) // 2
    cap = ttm.tuple_cap
    if cap is not None and n_pairs > cap:
        if rng is None:
            rng = np.random.default_rng([_TUPLE_STREAM, t])
        ii, jj = _sample_pairs(K, K, cap, rng)
        keep = ii != jj
        ii, jj = ii[keep], jj[keep]
        if ii.size == 0:
            return _uniform(ttm.n_topics)
        f = (U[ii] * U[jj]).mean(axis=0)
    else:
        ii, jj = np.triu_indices(K, k=1)
        f = (U[ii] * U[jj]).mean(axis=0)
    if f.sum() <= 0.0:
        return _uniform(ttm.n_topics)
    return f


def _cross_hadamard(ttm, d, subset, rng):
    """Sum and count of Hadamard products over all-distinct ordered
    document tuples drawn from the subset's neighbor sets."""
    doc_sets = ttm.relations.cross_doc_sets(subset)
    mats = []
    for t, ids in zip(subset, doc_sets):
        if ids.size == 0:
            return np.zeros(ttm.n_topics), 0
        mats.append(np.vstack([_mu_bar(ttm, int(m), t) for m in ids]))
    cap = ttm.tuple_cap
    total = 1
    for ids in doc_sets:
        total *= ids.size
    if cap is not None and total > cap:
        idx = [rng.integers(0, ids.size, size=cap) for ids in doc_sets]
        chosen = [ids[ix] for ids, ix in zip(doc_sets, idx)]
        keep = np.ones(cap, dtype=bool)
        for a in range(len(chosen)):
            for b in range(a + 1, len(chosen)):
                keep &= chosen[a] != chosen[b]
        if not keep.any():
            return np.zeros(ttm.n_topics), 0
        prod = mats[0][idx[0][keep]]
        for m, ix in zip(mats[1:], idx[1:]):
            prod = prod * m[ix[keep]]
        return prod.sum(axis=0), int(keep.sum())
    if len(subset) == 2:
        A, B = doc_sets
        mask = A[:, None] != B[None, :]
        prod = mats[0][:, None, :] * mats[1][None, :, :]
        return (prod * mask[:, :, None]).sum(axis=(0, 1)), int(mask.sum())
    A, B, C = doc_sets
    mask = ((A[:, None, None] != B[None, :, None])
            & (A[:, None, None] != C[None, None, :])
            & (B[None, :, None] != C[None, None, :]))
    prod = (mats[0][:, None, None, :] * mats[1][None, :, None, :]
            * mats[2][None, None, :, :])
    return (prod * mask[..., None]).sum(axis=(0, 1, 2)), int(mask.sum())


def hyper_factor(ttm, d, order=None, rng=None):
    """Average Hadamard product over the cross-neighbor document tuples of
    every ``order``-sized tag subset of ne(d); uniform when the document
    has too few tags or no qualifying tuple exists."""
    order = ttm.order if order is None else order
    if order not in (2, 3):
        raise ConfigError("order must be 2 or 3")
    ts = ttm.tags.doc_tags[d]
    if len(ts) < order:
        return _uniform(ttm.n_topics)
    if rng is None:
        rng = np.random.default_rng([_TUPLE_STREAM, d])
    total = np.zeros(ttm.n_topics)
    count = 0
    for subset in combinations(ts, order):
        s, c = _cross_hadamard(ttm, d, subset, rng)
        total += s
        count += c
    if count == 0 or total.sum() <= 0.0:
        return _uniform(ttm.n_topics)
    return total / count


def gamma_message(state, ttm, t, d):
    """Message from tag t's factor to document d's word variables: the
    pairwise factor gated by the summed doc-tag messages of the other
    documents sharing the tag."""
    others = [m for m in ttm.tags.tag_docs[t] if m != d]
    if not others:
        return _uniform(state.n_topics)
    s = np.zeros(state.n_topics)
    for m in others:
        s += _mu_bar(ttm, m, t)
    v = ttm.pairwise_factors[t] * s
    z = v.sum()
    if z <= 0.0:
        return _uniform(state.n_topics)
    return v / z


def delta_message(state, ttm, d, rng=None):
    """Message from document d's hyperedge: the hyper factor gated by the
    summed cross-tag neighbor messages (sum substitution of the product
    to avoid underflow), over all tag pairs of ne(d)."""
    ts = ttm.tags.doc_tags[d]
    J = state.n_topics
    if len(ts) < 2:
        return _uniform(J)
    if rng is None:
        rng = np.random.default_rng([_TUPLE_STREAM, d, 1])
    total = np.zeros(J)
    found = False
    for t, t2 in combinations(ts, 2):
        doc_sets = ttm.relations.cross_doc_sets((t, t2))
        A = doc_sets[0][doc_sets[0] != d]
        B = doc_sets[1][doc_sets[1] != d]
        if A.size == 0 or B.size == 0:
            continue
        MA = np.vstack([_mu_bar(ttm, int(m), t) for m in A])
        MB = np.vstack([_mu_bar(ttm, int(m), t2) for m in B])
        cap = ttm.tuple_cap
        if cap is not None and A.size * B.size > cap:
            ii, jj = _sample_pairs(A.size, B.size, cap, rng)
            keep = A[ii] != B[jj]
            if not keep.any():
                continue
            total += (MA[ii[keep]] + MB[jj[keep]]).sum(axis=0)
            found = True
        else:
            mask = A[:, None] != B[None, :]
            if not mask.any():
                continue
            terms = MA[:, None, :] + MB[None, :, :]
            total += (terms * mask[:, :, None]).sum(axis=(0, 1))
            found = True
    if not found:
        return _uniform(J)
    v = ttm.hyper_factors[d] * total
    z = v.sum()
    if z <= 0.0:
        return _uniform(J)
    return v / z


def ttm_update(state, ttm, config, w, d):
    """Blended message update for entry (w, d): convex combination of the
    document factor, summed tag messages, and the hyperedge message, all
    gated by the word factor.  Untagged documents reduce to the plain
    update exactly."""
    i = state.corpus.entry_index(d, w)
    doc_frac, word_frac = _fractions(state, config.alpha, config.beta, i)
    ts = ttm.tags.doc_tags[d]
    if not ts or (config.omega1 == 0.0 and config.omega2 == 0.0):
        blend = doc_frac
    else:
        gamma_sum = (ttm.gamma_msgs[d].sum(axis=0)
                     if ttm.gamma_msgs is not None
                     else np.zeros(state.n_topics))
        blend = ((1.0 - config.omega1 - config.omega2) * doc_frac
                 + config.omega1 * gamma_sum
                 + config.omega2 * ttm.delta_msgs[d])
    new = blend * word_frac
    s = new.sum()
    if s <= 0.0:
        return _uniform(state.n_topics)
    return new / s


# ---------------------------------------------------------------------------
# bulk refresh (one pass per training iteration)
# ---------------------------------------------------------------------------

def refresh_credit(state, ttm):
    """Credit rows for every entry of every tagged document."""
    corpus = state.corpus
    for d in range(corpus.num_docs):
        rows = ttm.credit[d]
        if rows.size == 0:
            continue
        sl = corpus.doc_slice(d)
        raw = state.messages[sl] @ ttm.gamma_msgs[d].T
        sums = raw.sum(axis=1, keepdims=True)
        bad = (sums <= 0.0).ravel()
        if bad.any():
            raw[bad] = 1.0
            sums = raw.sum(axis=1, keepdims=True)
        rows[:] = raw / sums


def refresh_doc_tag_msgs(state, ttm):
    corpus = state.corpus
    J = state.n_topics
    for d in range(corpus.num_docs):
        out = ttm.doc_tag_msgs[d]
        if out.shape[0] == 0:
            continue
        sl = corpus.doc_slice(d)
        if sl.stop == sl.start:
            out[:] = 1.0 / J
            continue
        weights = corpus.counts[sl][:, None] * ttm.credit[d]   # W_d x T_d
        denom = weights.sum(axis=0)                            # T_d
        num = weights.T @ state.messages[sl]                   # T_d x J
        for k in range(out.shape[0]):
            if denom[k] <= 0.0:
                out[k] = 1.0 / J
            else:
                out[k] = num[k] / denom[k]


def refresh_pairwise_factors(ttm, rng):
    for t in range(ttm.tags.num_tags):
        ttm.pairwise_factors[t] = pairwise_factor(ttm, t, rng)


def refresh_hyper_factors(ttm, rng):
    for d in range(ttm.tags.num_docs):
        ttm.hyper_factors[d] = hyper_factor(ttm, d, rng=rng)


def refresh_gamma_msgs(state, ttm):
    if ttm.gamma_msgs is None:
        ttm.gamma_msgs = [np.zeros((len(ts), state.n_topics))
                          for ts in ttm.tags.doc_tags]
    for d, ts in enumerate(ttm.tags.doc_tags):
        for k, t in enumerate(ts):
            ttm.gamma_msgs[d][k] = gamma_message(state, ttm, t, d)


def refresh_delta_msgs(state, ttm, rng):
    for d in range(ttm.tags.num_docs):
        ttm.delta_msgs[d] = delta_message(state, ttm, d, rng)


def _blend_arrays(ttm, config):
    """Per-document kernel inputs; untagged documents keep full weight on
    the document factor so they train as plain LDA documents."""
    D = ttm.corpus.num_docs
    J = ttm.n_topics
    w_theta = np.ones(D)
    w_gamma = np.zeros(D)
    w_delta = np.zeros(D)
    gamma_sum = np.zeros((D, J))
    delta_msg = np.zeros((D, J))
    for d, ts in enumerate(ttm.tags.doc_tags):
        if not ts:
            continue
        w_theta[d] = 1.0 - config.omega1 - config.omega2
        w_gamma[d] = config.omega1
        w_delta[d] = config.omega2
        if ttm.gamma_msgs is not None:
            gamma_sum[d] = ttm.gamma_msgs[d].sum(axis=0)
        delta_msg[d] = ttm.delta_msgs[d]
    return w_theta, w_gamma, w_delta, gamma_sum, delta_msg


def ttm_refresh(state, ttm, config, iteration):
    """One tag-side refresh pass: credit, doc-tag messages, factors, then
    factor messages, in dependency order."""
    rng = np.random.default_rng(
        [_entropy(config.seed), _TUPLE_STREAM, iteration])
    if ttm.gamma_msgs is not None:
        refresh_credit(state, ttm)
    refresh_doc_tag_msgs(state, ttm)
    refresh_pairwise_factors(ttm, rng)
    refresh_gamma_msgs(state, ttm)
    if config.omega2 > 0.0:
        refresh_hyper_factors(ttm, rng)
        refresh_delta_msgs(state, ttm, rng)


def train_ttm(corpus, tags, config, initial_state=None, initial_ttm=None,
              start_iteration=0):
    """Fused training loop: per iteration, refresh the tag machinery once,
    sweep all word messages, then re-estimate the distributions."""
    tags = as_tag_graph(tags, corpus.num_docs)
    state = initial_state if initial_state is not None else \
        init_messages(corpus, config.n_topics, config.seed)
    ttm = initial_ttm if initial_ttm is not None else \
        init_ttm_state(corpus, tags, config)
    trace = []
    n_iter = start_iteration
    for it in range(start_iteration + 1, config.max_iter + 1):
        ttm_refresh(state, ttm, config, it)
        blend = _blend_arrays(ttm, config)
        max_delta = run_sweep(state, config.alpha, config.beta,
                              config.schedule, blend)
        theta = estimate_theta(state, config)
        phi = estimate_phi(state, config)
        trace.append((it, max_delta, perplexity(theta, phi, corpus)))
        n_iter = it
        if max_delta < config.tol:
            break
    params = ModelParams(config.n_topics, config.alpha, config.beta,
                         estimate_theta(state, config),
                         estimate_phi(state, config))
    return TrainResult(params, state, trace, n_iter, extras={"ttm": ttm})


# ---------------------------------------------------------------------------
# checkpoint flattening
# ---------------------------------------------------------------------------

def ttm_extras(ttm):
    """Flatten the iterated tag-side state for a checkpoint."""
    credit_flat = (np.concatenate([c.ravel() for c in ttm.credit])
                   if any(c.size for c in ttm.credit) else np.zeros(0))
    out = {"credit": credit_flat,
           "has_gamma": np.array(1 if ttm.gamma_msgs is not None else 0)}
    if ttm.gamma_msgs is not None:
        out["gamma"] = (np.concatenate(
            [g.ravel() for g in ttm.gamma_msgs])
            if any(g.size for g in ttm.gamma_msgs) else np.zeros(0))
    return out


def ttm_from_extras(corpus, tags, config, extras):
    """Rebuild tag-side state from checkpoint extras."""
    ttm = TtmState(corpus, tags, config)
    pos = 0
    flat = extras["credit"]
    for d in range(corpus.num_docs):
        size = ttm.credit[d].size
        if size:
            ttm.credit[d][:] = flat[pos:pos + size].reshape(
                ttm.credit[d].shape)
            pos += size
    if int(extras.get("has_gamma", 0)):
        ttm.gamma_msgs = [np.zeros((len(ts), config.n_topics))
                          for ts in tags.doc_tags]
        flat = extras["gamma"]
        pos = 0
        for d in range(corpus.num_docs):
            size = ttm.gamma_msgs[d].size
            if size:
                ttm.gamma_msgs[d][:] = flat[pos:pos + size].reshape(
                    ttm.gamma_msgs[d].shape)
                pos += size
    return ttm


def credit_rows(ttm, corpus, top_k=None):
    """Yield (doc, word, tag, credit) rows, strongest tags first."""
    for d in range(corpus.num_docs):
        ts = ttm.tags.doc_tags[d]
        if not ts:
            continue
        sl = corpus.doc_slice(d)
        words = corpus.word_ids[sl]
        for r, w in enumerate(words):
            row = ttm.credit[d][r]
            order = np.argsort(-row, kind="stable")
            if top_k is not None:
                order = order[:top_k]
            for k in order:
                yield int(d), int(w), int(ts[k]), float(row[k])


class TagTopicModel(LdaBeliefPropagation):
    """Tag-topic model with pairwise and hyperedge relation smoothing.

    A drop-in extension of LdaBeliefPropagation: pass the tag graph (or a
    per-document list of tag-id lists) to ``fit``.  omega1/omega2 follow
    the pairwise-only and pairwise+higher-order presets (0.2, 0) and
    (0.1, 0.05); with both at zero the model is exactly plain LDA.
    """

    def __init__(self, n_topics=10, alpha=None, beta=0.01, max_iter=500,
                 tol=1e-4, schedule="sequential", random_state=0,
                 omega1=0.2, omega2=0.0, order=3, tuple_cap=10_000,
                 joint_neighbors=False):
        super().__init__(n_topics=n_topics, alpha=alpha, beta=beta,
                         max_iter=max_iter, tol=tol, schedule=schedule,
                         random_state=random_state)
        self.omega1 = omega1
        self.omega2 = omega2
        self.order = order
        self.tuple_cap = tuple_cap
        self.joint_neighbors = joint_neighbors

    def _make_config(self):
        return TtmConfig(n_topics=self.n_topics, alpha=self.alpha,
                         beta=self.beta, max_iter=self.max_iter,
                         tol=self.tol, schedule=self.schedule,
                         seed=self.random_state, omega1=self.omega1,
                         omega2=self.omega2, order=self.order,
                         tuple_cap=self.tuple_cap,
                         joint_neighbors=self.joint_neighbors)

    def fit(self, X, tags=None):
        corpus = as_corpus(X)
        graph = as_tag_graph(tags, corpus.num_docs)
        config = self._make_config()
        result = train_ttm(corpus, graph, config)
        self.config_ = config
        self.corpus_ = corpus
        self.tag_graph_ = graph
        self.components_ = result.params.phi
        self.doc_topic_ = result.params.theta
        self.params_ = result.params
        self.message_state_ = result.state
        self.ttm_state_ = result.extras["ttm"]
        self.trace_ = result.trace
        self.n_iter_ = result.n_iter
        return self
