"""Evaluation surface: topic tables, feature export, tag recommendation.

Classifier training is out of scope; link and document features are
written as CSV for external classifiers, and tag-recommendation scores
come back in as whitespace 'd t score' triples.  Tie-breaking is always
ascending id so every ranking is deterministic.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field

import numpy as np

from .corpus import TagGraph
from .exceptions import ConfigError, CorpusFormatError, ValidationError

__all__ = [
    "top_words",
    "export_link_features",
    "export_doc_features",
    "TagRecScores",
    "TagRecResult",
    "load_scores",
    "save_scores",
    "fuse_tagrec_scores",
    "tagrec_metrics",
    "write_tagrec_report",
]

DEFAULT_TOP_TAGS = 5        # suggestions per query document
DEFAULT_MIX_WEIGHT = 0.25   # weight on the first score source


def top_words(phi, k, vocab=None):
    """Per topic, the k words with the largest probability.

    Returns a list of (word, probability) lists; ties break toward the
    smaller word id.  ``vocab`` maps ids to tokens when given.
    """
    phi = np.asarray(phi)
    n_topics, n_words = phi.shape
    if k > n_words:
        raise ConfigError(f"k={k} exceeds vocabulary size {n_words}")
    tables = []
    for j in range(n_topics):
        order = np.lexsort((np.arange(n_words), -phi[j]))[:k]
        row = [(int(w) if vocab is None else vocab[int(w)],
                float(phi[j, w])) for w in order]
        tables.append(row)
    return tables


def _open_feature_writer(path, n_topics):
    f = open(path, "w", encoding="utf-8", newline="")
    writer = csv.writer(f)
    writer.writerow([f"topic_{j}" for j in range(n_topics)] + ["label"])
    return f, writer


def export_link_features(theta, pairs, path):
    """Write one row per document pair: the elementwise product of the two
    topic-proportion rows, then the pair's label."""
    theta = np.asarray(theta)
    f, writer = _open_feature_writer(path, theta.shape[1])
    with f:
        for d, d2, label in pairs:
            if d == d2:
                raise ValidationError(
                    f"link feature requires two distinct documents, got "
                    f"({d}, {d2})")
            if not (0 <= d < theta.shape[0] and 0 <= d2 < theta.shape[0]):
                raise ValidationError(f"document id out of range: ({d}, {d2})")
            feat = theta[d] * theta[d2]
            writer.writerow([repr(float(x)) for x in feat] + [label])
    return len(pairs)


def export_doc_features(theta, labels, path):
    """Write one row per labeled document: its topic proportions plus the
    class label.  Unlabeled documents are skipped with a warning.

    Returns (rows_written, rows_skipped).
    """
    theta = np.asarray(theta)
    written = skipped = 0
    f, writer = _open_feature_writer(path, theta.shape[1])
    with f:
        for d in range(theta.shape[0]):
            label = labels.get(d) if hasattr(labels, "get") else labels[d]
            if label is None:
                skipped += 1
                continue
            writer.writerow([repr(float(x)) for x in theta[d]] + [label])
            written += 1
    if skipped:
        warnings.warn(f"skipped {skipped} documents without labels")
    return written, skipped


def parse_feature_file(path):
    """Read a feature CSV back into (features array, labels list)."""
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader)
        n = len(header) - 1
        feats, labels = [], []
        for row in reader:
            feats.append([float(x) for x in row[:n]])
            labels.append(row[n])
    return np.array(feats).reshape(len(labels), n), labels


# ---------------------------------------------------------------------------
# tag recommendation
# ---------------------------------------------------------------------------

@dataclass
class TagRecScores:
    """External classifier likelihoods for every (document, tag) pair to
    rank: ``svm1`` from the content classifier, ``svm2`` from the
    connected-tag refiner, both keyed by (doc, tag)."""

    svm1: dict[tuple[int, int], float]
    svm2: dict[tuple[int, int], float]
    mix_weight: float = DEFAULT_MIX_WEIGHT

    def __post_init__(self):
        if not (0.0 <= self.mix_weight <= 1.0):
            raise ConfigError("mix_weight must be in [0, 1]")
        if set(self.svm1) != set(self.svm2):
            raise ValidationError(
                "both score sources must cover the same (doc, tag) pairs")
        for name, scores in (("svm1", self.svm1), ("svm2", self.svm2)):
            for key, s in scores.items():
                if not (0.0 <= s <= 1.0):
                    raise ValidationError(
                        f"{name} score {s} for {key} outside [0, 1]")


@dataclass
class TagRecResult:
    per_tag: dict[int, dict]    # tag -> {n_truth, n_suggested, n_correct,
                                #         recall, precision}
    mean_recall: float
    mean_precision: float
    rate_positive: float
    tags_in_test: int = 0


def load_scores(path):
    """Read whitespace 'd t score' triples."""
    scores = {}
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            cols = line.split()
            if len(cols) != 3:
                raise CorpusFormatError("expected 'd t score'", path, lineno)
            try:
                d, t, s = int(cols[0]), int(cols[1]), float(cols[2])
            except ValueError:
                raise CorpusFormatError("bad field types", path, lineno)
            scores[(d, t)] = s
    return scores


def save_scores(scores, path):
    with open(path, "w", encoding="utf-8") as f:
        for (d, t), s in sorted(scores.items()):
            f.write(f"{d} {t} {repr(float(s))}\n")


def fuse_tagrec_scores(scores, top_k=DEFAULT_TOP_TAGS):
    """Rank tags per document by the mixed likelihood
    y = w * svm1 + (1 - w) * svm2 and keep the top k.

    Returns {doc: [(tag, y), ...]} sorted by y descending, ties toward
    the smaller tag id.
    """
    w = scores.mix_weight
    by_doc = {}
    for (d, t), p1 in scores.svm1.items():
        y = w * p1 + (1.0 - w) * scores.svm2[(d, t)]
        by_doc.setdefault(d, []).append((t, y))
    out = {}
    for d, items in by_doc.items():
        items.sort(key=lambda ty: (-ty[1], ty[0]))
        out[d] = items[:top_k]
    return out


def tagrec_metrics(suggestions, ground_truth):
    """Per-tag recall/precision and the positive-recall coverage rate.

    ``suggestions`` maps each test document to its ranked (tag, score)
    list; ``ground_truth`` is the tag graph over the same documents.  For
    each tag, n_truth counts documents carrying it, n_suggested documents
    where the system proposed it, n_correct their overlap.  Recall is
    absent when n_truth = 0 and precision absent when n_suggested = 0;
    the coverage rate divides tags with positive recall by the tags
    present in the test set (n_truth >= 1).
    """
    if not isinstance(ground_truth, TagGraph):
        raise ValidationError("ground_truth must be a TagGraph")
    missing = [d for d in range(ground_truth.num_docs)
               if ground_truth.doc_tags[d] and d not in suggestions]
    if missing:
        raise ValidationError(
            f"suggestions missing for tagged test documents {missing[:5]}")
    n_truth = {t: len(ds) for t, ds in enumerate(ground_truth.tag_docs)}
    n_suggested = dict.fromkeys(n_truth, 0)
    n_correct = dict.fromkeys(n_truth, 0)
    for d, items in suggestions.items():
        truth = set(ground_truth.doc_tags[d]) if d < ground_truth.num_docs \
            else set()
        for t, _ in items:
            if t not in n_suggested:
                n_suggested[t] = 0
                n_correct[t] = 0
                n_truth[t] = 0
            n_suggested[t] += 1
            if t in truth:
                n_correct[t] += 1
    per_tag = {}
    recalls, precisions = [], []
    present = positive = 0
    for t in sorted(n_truth):
        h, s, c = n_truth[t], n_suggested[t], n_correct[t]
        recall = c / h if h > 0 else None
        precision = c / s if s > 0 else None
        per_tag[t] = {"n_truth": h, "n_suggested": s, "n_correct": c,
                      "recall": recall, "precision": precision}
        if recall is not None:
            recalls.append(recall)
        if precision is not None:
            precisions.append(precision)
        if h > 0:
            present += 1
            if c > 0:
                positive += 1
    return TagRecResult(
        per_tag=per_tag,
        mean_recall=float(np.mean(recalls)) if recalls else 0.0,
        mean_precision=float(np.mean(precisions)) if precisions else 0.0,
        rate_positive=positive / present if present else 0.0,
        tags_in_test=present,
    )


def write_tagrec_report(result, path):
    """Per-tag CSV plus a summary line (mean recall, mean precision,
    positive-recall rate)."""
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["tag", "n_truth", "n_suggested", "n_correct",
                         "recall", "precision"])
        for t, row in sorted(result.per_tag.items()):
            writer.writerow([
                t, row["n_truth"], row["n_suggested"], row["n_correct"],
                "" if row["recall"] is None else repr(row["recall"]),
                "" if row["precision"] is None else repr(row["precision"]),
            ])
        writer.writerow(["summary", "", "", "",
                         repr(result.mean_recall),
                         repr(result.mean_precision)])
        writer.writerow(["rate_positive", "", "", "",
                         repr(result.rate_positive), ""])
