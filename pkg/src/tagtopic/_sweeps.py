"""Compiled word-sweep kernels.

One kernel serves both the plain model and the tag-augmented one: the
per-document blend weights (w_theta, w_gamma, w_delta) and the per-document
tag message vectors are inputs.  The plain model passes w_theta = 1 and
zero tag weights, which makes the tag-free reduction exact at the bit
level because both engines execute the identical instruction stream.

Sequential kernels commit each message immediately (exclusion counts see
all earlier updates of the same sweep, Gibbs-style); the synchronous kernel
reads frozen state and writes into a separate buffer committed at the
barrier, which makes it safe to parallelize over entries.
"""

import numpy as np
from numba import njit, prange

__all__ = ["sweep_sequential", "sweep_synchronous", "foldin_sweep"]


@njit(cache=True)
def sweep_sequential(doc_ids, word_ids, counts, messages,
                     doc_totals, word_totals, global_totals,
                     alpha, beta, num_vocab,
                     w_theta, w_gamma, w_delta, gamma_sum, delta_msg):
    nnz, J = messages.shape
    wbeta = num_vocab * beta
    max_delta = 0.0
    new = np.empty(J)
    for i in range(nnz):
        d = doc_ids[i]
        w = word_ids[i]
        n = counts[i]
        denom_doc = 0.0
        for j in range(J):
            ed = doc_totals[d, j] - n * messages[i, j]
            if ed < 0.0:
                ed = 0.0
            denom_doc += ed + alpha
        s = 0.0
        for j in range(J):
            contrib = n * messages[i, j]
            ed = doc_totals[d, j] - contrib
            if ed < 0.0:
                ed = 0.0
            ew = word_totals[w, j] - contrib
            if ew < 0.0:
                ew = 0.0
            eg = global_totals[j] - contrib
            if eg < 0.0:
                eg = 0.0
            doc_frac = (ed + alpha) / denom_doc
            word_frac = (ew + beta) / (eg + wbeta)
            blend = (w_theta[d] * doc_frac
                     + w_gamma[d] * gamma_sum[d, j]
                     + w_delta[d] * delta_msg[d, j])
            v = blend * word_frac
            new[j] = v
            s += v
        if s <= 0.0:
            for j in range(J):
                new[j] = 1.0 / J
        else:
            for j in range(J):
                new[j] /= s
        for j in range(J):
            diff = new[j] - messages[i, j]
            if diff < 0.0:
                if -diff > max_delta:
                    max_delta = -diff
            elif diff > max_delta:
                max_delta = diff
            inc = n * diff
            doc_totals[d, j] += inc
            word_totals[w, j] += inc
            global_totals[j] += inc
            messages[i, j] = new[j]
    return max_delta


@njit(cache=True, parallel=True)
def sweep_synchronous(doc_ids, word_ids, counts, messages, out,
                      doc_totals, word_totals, global_totals,
                      alpha, beta, num_vocab,
                      w_theta, w_gamma, w_delta, gamma_sum, delta_msg):
    nnz, J = messages.shape
    wbeta = num_vocab * beta
    max_delta = 0.0
    for i in prange(nnz):
        d = doc_ids[i]
        w = word_ids[i]
        n = counts[i]
        denom_doc = 0.0
        for j in range(J):
            ed = doc_totals[d, j] - n * messages[i, j]
            if ed < 0.0:
                ed = 0.0
            denom_doc += ed + alpha
        s = 0.0
        for j in range(J):
            contrib = n * messages[i, j]
            ed = doc_totals[d, j] - contrib
            if ed < 0.0:
                ed = 0.0
            ew = word_totals[w, j] - contrib
            if ew < 0.0:
                ew = 0.0
            eg = global_totals[j] - contrib
            if eg < 0.0:
                eg = 0.0
            doc_frac = (ed + alpha) / denom_doc
            word_frac = (ew + beta) / (eg + wbeta)
            v = (w_theta[d] * doc_frac
                 + w_gamma[d] * gamma_sum[d, j]
                 + w_delta[d] * delta_msg[d, j]) * word_frac
            out[i, j] = v
            s += v
        local = 0.0
        if s <= 0.0:
            for j in range(J):
                out[i, j] = 1.0 / J
                diff = abs(out[i, j] - messages[i, j])
                if diff > local:
                    local = diff
        else:
            for j in range(J):
                out[i, j] /= s
                diff = abs(out[i, j] - messages[i, j])
                if diff > local:
                    local = diff
        max_delta = max(max_delta, local)
    return max_delta


@njit(cache=True)
def foldin_sweep(doc_ids, word_ids, counts, messages, doc_totals,
                 phi, alpha):
    """Held-out sweep: document factor only, word factor fixed to phi."""
    nnz, J = messages.shape
    max_delta = 0.0
    new = np.empty(J)
    for i in range(nnz):
        d = doc_ids[i]
        w = word_ids[i]
        n = counts[i]
        denom_doc = 0.0
        for j in range(J):
            ed = doc_totals[d, j] - n * messages[i, j]
            if ed < 0.0:
                ed = 0.0
            denom_doc += ed + alpha
        s = 0.0
        for j in range(J):
            ed = doc_totals[d, j] - n * messages[i, j]
            if ed < 0.0:
                ed = 0.0
            v = ((ed + alpha) / denom_doc) * phi[j, w]
            new[j] = v
            s += v
        if s <= 0.0:
            for j in range(J):
                new[j] = 1.0 / J
        else:
            for j in range(J):
                new[j] /= s
        for j in range(J):
            diff = new[j] - messages[i, j]
            if diff < 0.0:
                if -diff > max_delta:
                    max_delta = -diff
            elif diff > max_delta:
                max_delta = diff
            doc_totals[d, j] += n * diff
            messages[i, j] = new[j]
    return max_delta
