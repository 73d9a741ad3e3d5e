"""Corpora, tag graphs, and synthetic data generation.

A corpus is a sparse document x vocabulary count matrix stored as parallel
arrays of (doc_id, word_id, count) triples, normalized to (doc ascending,
word ascending) order.  Tags live in a separate bipartite graph keyed by
the same document ids.  Both structures are immutable after construction
and safe for concurrent reads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConfigError, CorpusFormatError, ValidationError

__all__ = [
    "Corpus",
    "TagGraph",
    "SyntheticTruth",
    "SplitResult",
    "load_corpus",
    "save_corpus",
    "load_tags",
    "save_tags",
    "load_doc_labels",
    "generate_synthetic",
    "split_corpus",
]


@dataclass(frozen=True)
class CorpusStats:
    avg_tokens_per_doc: float       # I_d
    avg_distinct_words_per_doc: float  # W_d


class Corpus:
    """Sparse bag-of-words counts with one entry per distinct (doc, word).

    Parameters
    ----------
    num_docs, num_vocab : int
        Matrix dimensions D and W.  Documents and words are 0-indexed.
    doc_ids, word_ids, counts : array-like of int
        Parallel triple arrays.  Counts must be >= 1; (doc, word) pairs
        must be unique.  Entries are re-sorted to (doc asc, word asc).
    doc_labels : dict[int, str], optional
        Class label per document for feature-export workflows.
    """

    def __init__(self, num_docs, num_vocab, doc_ids, word_ids, counts,
                 doc_labels=None):
        if num_docs < 0 or num_vocab < 0:
            raise ValidationError("num_docs and num_vocab must be >= 0")
        d = np.asarray(doc_ids, dtype=np.int64).ravel()
        w = np.asarray(word_ids, dtype=np.int64).ravel()
        n = np.asarray(counts, dtype=np.int64).ravel()
        if not (d.shape == w.shape == n.shape):
            raise ValidationError("triple arrays must have equal length")
        if d.size:
            if d.min() < 0 or d.max() >= num_docs:
                raise ValidationError("doc id out of range [0, D)")
            if w.min() < 0 or w.max() >= num_vocab:
                raise ValidationError("word id out of range [0, W)")
            if n.min() < 1:
                raise ValidationError("all counts must be >= 1")
        order = np.lexsort((w, d))
        d, w, n = d[order], w[order], n[order]
        if d.size > 1:
            same = (d[1:] == d[:-1]) & (w[1:] == w[:-1])
            if same.any():
                i = int(np.flatnonzero(same)[0])
                raise ValidationError(
                    f"duplicate entry for (doc={d[i]}, word={w[i]})")
        self.num_docs = int(num_docs)
        self.num_vocab = int(num_vocab)
        self.doc_ids = d
        self.word_ids = w
        self.counts = n
        self.doc_labels = dict(doc_labels) if doc_labels else None

        # contiguous per-document slices: entries of doc d live in
        # [doc_offsets[d], doc_offsets[d+1])
        self.doc_offsets = np.zeros(self.num_docs + 1, dtype=np.int64)
        np.add.at(self.doc_offsets, d + 1, 1)
        np.cumsum(self.doc_offsets, out=self.doc_offsets)
        self.doc_token_counts = np.zeros(self.num_docs, dtype=np.int64)
        np.add.at(self.doc_token_counts, d, n)
        self._index = {(int(di), int(wi)): i
                       for i, (di, wi) in enumerate(zip(d, w))}

    @property
    def nnz(self):
        return int(self.doc_ids.size)

    @property
    def total_tokens(self):
        return int(self.counts.sum())

    @property
    def stats(self):
        D = max(self.num_docs, 1)
        return CorpusStats(self.total_tokens / D, self.nnz / D)

    def entries(self):
        """Iterate (doc_id, word_id, count) in normalized order."""
        for d, w, n in zip(self.doc_ids, self.word_ids, self.counts):
            yield int(d), int(w), int(n)

    def entry_index(self, d, w):
        """Position of entry (d, w), or raise EntryLookupError."""
        from .exceptions import EntryLookupError
        try:
            return self._index[(int(d), int(w))]
        except KeyError:
            raise EntryLookupError(
                f"(doc={d}, word={w}) is not a corpus entry") from None

    def doc_slice(self, d):
        """slice of the entry arrays covering document d."""
        return slice(int(self.doc_offsets[d]), int(self.doc_offsets[d + 1]))

    def to_dense(self):
        m = np.zeros((self.num_docs, self.num_vocab), dtype=np.int64)
        m[self.doc_ids, self.word_ids] = self.counts
        return m

    @classmethod
    def from_dense(cls, matrix, doc_labels=None):
        m = np.asarray(matrix)
        d, w = np.nonzero(m)
        return cls(m.shape[0], m.shape[1], d, w, m[d, w],
                   doc_labels=doc_labels)

    def subset(self, doc_ids):
        """New corpus of the given documents, renumbered 0..len-1.

        Vocabulary is shared (num_vocab unchanged).
        """
        doc_ids = list(int(x) for x in doc_ids)
        parts_d, parts_w, parts_n = [], [], []
        for new_d, old_d in enumerate(doc_ids):
            sl = self.doc_slice(old_d)
            parts_d.append(np.full(sl.stop - sl.start, new_d, dtype=np.int64))
            parts_w.append(self.word_ids[sl])
            parts_n.append(self.counts[sl])
        labels = None
        if self.doc_labels is not None:
            labels = {i: self.doc_labels[old]
                      for i, old in enumerate(doc_ids)
                      if old in self.doc_labels}
        cat = (lambda ps: np.concatenate(ps) if ps
               else np.zeros(0, dtype=np.int64))
        return Corpus(len(doc_ids), self.num_vocab, cat(parts_d),
                      cat(parts_w), cat(parts_n), doc_labels=labels)

    def __repr__(self):
        return (f"Corpus(D={self.num_docs}, W={self.num_vocab}, "
                f"nnz={self.nnz})")


class TagGraph:
    """Bipartite tag-document adjacency with both directions indexed.

    ``doc_tags[d]`` is the ordered tag set ne(d); ``tag_docs[t]`` the
    ordered document set ne(t).  Documents may carry zero tags.
    """

    def __init__(self, num_tags, doc_tags, num_docs=None):
        if num_tags < 0:
            raise ValidationError("num_tags must be >= 0")
        self.num_tags = int(num_tags)
        clean = []
        for d, ts in enumerate(doc_tags):
            ts = [int(t) for t in ts]
            if len(set(ts)) != len(ts):
                raise ValidationError(f"duplicate tag on document {d}")
            for t in ts:
                if not (0 <= t < self.num_tags):
                    raise ValidationError(
                        f"tag id {t} out of range [0, {self.num_tags})")
            clean.append(tuple(sorted(ts)))
        if num_docs is not None:
            if len(clean) > num_docs:
                raise ValidationError("more tagged documents than num_docs")
            clean.extend([()] * (num_docs - len(clean)))
        self.doc_tags = tuple(clean)
        inv = [[] for _ in range(self.num_tags)]
        for d, ts in enumerate(self.doc_tags):
            for t in ts:
                inv[t].append(d)
        self.tag_docs = tuple(tuple(ds) for ds in inv)

    @property
    def num_docs(self):
        return len(self.doc_tags)

    @property
    def stats(self):
        D = max(self.num_docs, 1)
        total = sum(len(ts) for ts in self.doc_tags)
        return {"avg_tags_per_doc": total / D}

    def tags_for_doc(self, d):
        return self.doc_tags[d]

    def docs_for_tag(self, t):
        return self.tag_docs[t]

    def subset(self, doc_ids):
        """Graph restricted to the given documents, renumbered 0..len-1."""
        return TagGraph(self.num_tags,
                        [self.doc_tags[d] for d in doc_ids])

    def __repr__(self):
        return f"TagGraph(T={self.num_tags}, D={self.num_docs})"


@dataclass
class SyntheticTruth:
    """Ground truth retained by the synthetic generator for oracle tests."""

    true_theta: np.ndarray          # D x J, rows sum to 1
    true_phi: np.ndarray            # J x W, rows sum to 1
    tag_topic_map: dict[int, int]   # tag -> dominant topic
    origin_counts: np.ndarray = field(default=None)  # D x J token origins

    def validate(self):
        if not np.allclose(self.true_theta.sum(axis=1), 1.0, atol=1e-12):
            raise ValidationError("true_theta rows must sum to 1")
        if not np.allclose(self.true_phi.sum(axis=1), 1.0, atol=1e-12):
            raise ValidationError("true_phi rows must sum to 1")


# ---------------------------------------------------------------------------
# file formats
#
# Corpus: UTF-8 text, header "D W nnz", then nnz lines "d w n".
# Tags:   one line per tagged document, "d t1 t2 ...".
# Labels: one line per labeled document, "d label".
# ---------------------------------------------------------------------------

def load_corpus(path):
    """Read a sparse-triples corpus file."""
    with open(path, "r", encoding="utf-8") as f:
        header = f.readline()
        parts = header.split()
        if len(parts) != 3:
            raise CorpusFormatError("header must be 'D W nnz'", path, 1)
        try:
            D, W, nnz = (int(p) for p in parts)
        except ValueError:
            raise CorpusFormatError("non-integer header field", path, 1)
        ds, ws, ns = [], [], []
        for lineno, line in enumerate(f, start=2):
            if not line.strip():
                continue
            cols = line.split()
            if len(cols) != 3:
                raise CorpusFormatError("expected 'd w n'", path, lineno)
            try:
                d, w, n = (int(c) for c in cols)
            except ValueError:
                raise CorpusFormatError("non-integer field", path, lineno)
            ds.append(d)
            ws.append(w)
            ns.append(n)
    if len(ds) != nnz:
        raise CorpusFormatError(
            f"header declares {nnz} entries, file has {len(ds)}", path)
    return Corpus(D, W, ds, ws, ns)


def save_corpus(corpus, path):
    """Write a corpus in normalized entry order."""
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"{corpus.num_docs} {corpus.num_vocab} {corpus.nnz}\n")
        for d, w, n in corpus.entries():
            f.write(f"{d} {w} {n}\n")


def load_tags(path, num_docs):
    """Read a tag file: lines 'doc_id tag_id ... tag_id'.

    Documents absent from the file get empty tag sets.  The tag count is
    1 + the largest tag id seen.
    """
    doc_tags = [[] for _ in range(num_docs)]
    max_tag = -1
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            cols = line.split()
            try:
                vals = [int(c) for c in cols]
            except ValueError:
                raise CorpusFormatError("non-integer field", path, lineno)
            d, ts = vals[0], vals[1:]
            if not (0 <= d < num_docs):
                raise ValidationError(
                    f"{path}:{lineno}: doc id {d} out of range [0, {num_docs})")
            if len(set(ts)) != len(ts):
                raise ValidationError(
                    f"{path}:{lineno}: duplicate tag on document {d}")
            doc_tags[d].extend(ts)
            if ts:
                max_tag = max(max_tag, max(ts))
    return TagGraph(max_tag + 1, doc_tags)


def save_tags(tags, path):
    with open(path, "w", encoding="utf-8") as f:
        for d, ts in enumerate(tags.doc_tags):
            if ts:
                f.write(" ".join(str(x) for x in (d, *ts)) + "\n")


def load_doc_labels(path, num_docs):
    """Read 'd label' lines into a dict; missing documents stay unlabeled."""
    labels = {}
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            cols = line.split(maxsplit=1)
            if len(cols) != 2:
                raise CorpusFormatError("expected 'd label'", path, lineno)
            try:
                d = int(cols[0])
            except ValueError:
                raise CorpusFormatError("non-integer doc id", path, lineno)
            if not (0 <= d < num_docs):
                raise ValidationError(
                    f"{path}:{lineno}: doc id {d} out of range")
            labels[d] = cols[1].strip()
    return labels


# ---------------------------------------------------------------------------
# synthetic corpora
# ---------------------------------------------------------------------------

_PHI_CONCENTRATION = 0.1    # symmetric Dirichlet for topic-word rows
_THETA_FLOOR = 0.1          # off-tag pseudo-mass in the theta prior


def generate_synthetic(n_topics, num_docs, num_vocab, num_tags,
                       tags_per_doc, tokens_per_doc, topic_concentration,
                       seed):
    """Sample a tag-correlated corpus with known topic structure.

    Each tag is mapped to a dominant topic (tag t -> topic t mod J).  A
    document's topic proportions are drawn from a Dirichlet whose mass
    concentrates on the topics of its tags, so documents sharing tags have
    correlated proportions.  Tokens are drawn from the standard mixture
    p(w|d) = sum_j theta_d(j) phi_j(w); per-topic token origins are kept
    in the returned truth for oracle tests.

    Returns (Corpus, TagGraph, SyntheticTruth); deterministic given seed.
    """
    if min(n_topics, num_docs, num_vocab, num_tags,
           tags_per_doc, tokens_per_doc) < 1:
        raise ConfigError("all counts must be positive")
    if topic_concentration <= 0:
        raise ConfigError("topic_concentration must be positive")
    if n_topics > num_tags:
        raise ConfigError("need n_topics <= num_tags so every topic has a tag")
    if tags_per_doc > num_tags:
        raise ConfigError("tags_per_doc cannot exceed num_tags")

    rng = np.random.default_rng(seed)
    tag_topic_map = {t: t % n_topics for t in range(num_tags)}

    doc_tags = []
    for _ in range(num_docs):
        ts = rng.choice(num_tags, size=tags_per_doc, replace=False)
        doc_tags.append(sorted(int(t) for t in ts))
    tags = TagGraph(num_tags, doc_tags)

    true_phi = rng.dirichlet(
        np.full(num_vocab, _PHI_CONCENTRATION), size=n_topics)

    prior = np.full((num_docs, n_topics), _THETA_FLOOR)
    for d, ts in enumerate(doc_tags):
        for t in ts:
            prior[d, tag_topic_map[t]] += topic_concentration / len(ts)
    true_theta = np.vstack([rng.dirichlet(prior[d])
                            for d in range(num_docs)])

    origin_counts = np.zeros((num_docs, n_topics), dtype=np.int64)
    rows_d, rows_w, rows_n = [], [], []
    for d in range(num_docs):
        by_topic = rng.multinomial(tokens_per_doc, true_theta[d])
        origin_counts[d] = by_topic
        word_counts = np.zeros(num_vocab, dtype=np.int64)
        for j in range(n_topics):
            if by_topic[j]:
                word_counts += rng.multinomial(by_topic[j], true_phi[j])
        w_idx = np.flatnonzero(word_counts)
        rows_d.append(np.full(w_idx.size, d, dtype=np.int64))
        rows_w.append(w_idx)
        rows_n.append(word_counts[w_idx])

    corpus = Corpus(num_docs, num_vocab,
                    np.concatenate(rows_d), np.concatenate(rows_w),
                    np.concatenate(rows_n))
    truth = SyntheticTruth(true_theta, true_phi, tag_topic_map,
                           origin_counts)
    truth.validate()
    return corpus, tags, truth


@dataclass
class SplitResult:
    train: Corpus
    test: Corpus
    train_tags: TagGraph
    test_tags: TagGraph
    train_doc_ids: list[int]
    test_doc_ids: list[int]


def split_corpus(corpus, tags, test_fraction, seed):
    """Seeded shuffle split into train/test corpora with shared vocabulary.

    Documents are renumbered within each side; the original ids are
    returned.  Test tags are kept only as evaluation ground truth.
    """
    if not (0.0 < test_fraction < 1.0):
        raise ConfigError("test_fraction must be in (0, 1)")
    if tags is not None and tags.num_docs != corpus.num_docs:
        raise ValidationError("tag graph and corpus disagree on num_docs")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(corpus.num_docs)
    n_test = max(1, int(math.floor(corpus.num_docs * test_fraction)))
    if n_test >= corpus.num_docs:
        raise ConfigError("split leaves no training documents")
    test_ids = sorted(int(x) for x in perm[:n_test])
    train_ids = sorted(int(x) for x in perm[n_test:])
    if tags is None:
        tags = TagGraph(0, [()] * corpus.num_docs)
    return SplitResult(
        train=corpus.subset(train_ids),
        test=corpus.subset(test_ids),
        train_tags=tags.subset(train_ids),
        test_tags=tags.subset(test_ids),
        train_doc_ids=train_ids,
        test_doc_ids=test_ids,
    )
