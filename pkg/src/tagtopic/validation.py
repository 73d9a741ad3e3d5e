"""Input adapters so the estimators accept ecosystem-native containers."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .corpus import Corpus, TagGraph
from .exceptions import ValidationError

__all__ = ["as_corpus", "as_tag_graph", "check_is_fitted"]


def as_corpus(X, num_vocab=None):
    """Coerce a Corpus, dense array, or scipy sparse matrix of counts.

    ``num_vocab`` widens (never narrows) the vocabulary so fold-in inputs
    align with a trained model's columns.
    """
    if isinstance(X, Corpus):
        if num_vocab is not None and X.num_vocab > num_vocab:
            raise ValidationError(
                f"corpus vocabulary {X.num_vocab} exceeds model "
                f"vocabulary {num_vocab}")
        return X
    if sp.issparse(X):
        coo = X.tocoo()
        data = np.asarray(coo.data)
        if not np.allclose(data, np.round(data)):
            raise ValidationError("counts must be integers")
        keep = data != 0
        W = num_vocab if num_vocab is not None else coo.shape[1]
        return Corpus(coo.shape[0], W, coo.row[keep], coo.col[keep],
                      np.round(data[keep]).astype(np.int64))
    arr = np.asarray(X)
    if arr.ndim != 2:
        raise ValidationError("expected a 2-d document x word count matrix")
    if not np.allclose(arr, np.round(arr)):
        raise ValidationError("counts must be integers")
    arr = np.round(arr).astype(np.int64)
    d, w = np.nonzero(arr)
    W = num_vocab if num_vocab is not None else arr.shape[1]
    return Corpus(arr.shape[0], W, d, w, arr[d, w])


def as_tag_graph(tags, num_docs):
    """Coerce a TagGraph or a per-document list of tag-id lists."""
    if tags is None:
        return TagGraph(0, [()] * num_docs)
    if isinstance(tags, TagGraph):
        if tags.num_docs != num_docs:
            raise ValidationError(
                f"tag graph covers {tags.num_docs} documents, corpus has "
                f"{num_docs}")
        return tags
    doc_tags = [list(ts) for ts in tags]
    if len(doc_tags) != num_docs:
        raise ValidationError("need one tag list per document")
    num_tags = 1 + max((max(ts) for ts in doc_tags if ts), default=-1)
    return TagGraph(num_tags, doc_tags)


def check_is_fitted(estimator, attr):
    if not hasattr(estimator, attr):
        raise ValidationError(
            f"{type(estimator).__name__} is not fitted yet; call fit first")
