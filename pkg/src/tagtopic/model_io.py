"""Text dumps for trained models and training traces.

A model dump directory holds theta.txt (one row per document), phi.txt
(one row per topic), model.json with the hyperparameters, trace.csv, and
the training checkpoint.  Floats are written at full round-trip precision.
"""

from __future__ import annotations

import csv
import json
import os

import numpy as np

from .exceptions import CorpusFormatError
from .lda import ModelParams

__all__ = [
    "save_matrix",
    "load_matrix",
    "save_trace",
    "load_trace",
    "save_model_dump",
    "load_model_dump",
]

THETA_FILE = "theta.txt"
PHI_FILE = "phi.txt"
META_FILE = "model.json"
TRACE_FILE = "trace.csv"
CHECKPOINT_FILE = "checkpoint.npz"


def save_matrix(matrix, path):
    np.savetxt(path, np.asarray(matrix), fmt="%.17g")


def load_matrix(path):
    try:
        return np.loadtxt(path, ndmin=2)
    except ValueError as exc:
        raise CorpusFormatError(str(exc), path)


def save_trace(trace, path):
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["iteration", "max_delta", "train_perplexity"])
        for it, delta, perp in trace:
            writer.writerow([it, repr(float(delta)), repr(float(perp))])


def load_trace(path):
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        next(reader)
        for row in reader:
            rows.append((int(row[0]), float(row[1]), float(row[2])))
    return rows


def save_model_dump(out_dir, params, config, trace, model_kind,
                    extra_meta=None):
    os.makedirs(out_dir, exist_ok=True)
    save_matrix(params.theta, os.path.join(out_dir, THETA_FILE))
    save_matrix(params.phi, os.path.join(out_dir, PHI_FILE))
    save_trace(trace, os.path.join(out_dir, TRACE_FILE))
    meta = {
        "model": model_kind,
        "n_topics": config.n_topics,
        "alpha": config.alpha,
        "beta": config.beta,
        "max_iter": config.max_iter,
        "tol": config.tol,
        "schedule": config.schedule,
        "seed": config.seed,
        "num_docs": int(params.theta.shape[0]),
        "num_vocab": int(params.phi.shape[1]),
    }
    for key in ("omega1", "omega2", "order", "tuple_cap", "joint_neighbors"):
        if hasattr(config, key):
            meta[key] = getattr(config, key)
    meta.update(extra_meta or {})
    with open(os.path.join(out_dir, META_FILE), "w", encoding="utf-8") as f:
        json.dump(meta, f, indent=2, sort_keys=True)
        f.write("\n")
    return meta


def load_model_dump(model_dir):
    """Return (meta, theta, phi) from a dump directory."""
    with open(os.path.join(model_dir, META_FILE), encoding="utf-8") as f:
        meta = json.load(f)
    theta = load_matrix(os.path.join(model_dir, THETA_FILE))
    phi = load_matrix(os.path.join(model_dir, PHI_FILE))
    return meta, theta, phi
