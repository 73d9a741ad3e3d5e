import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import tagtopic as tt
from tagtopic.corpus import Corpus
from tagtopic.exceptions import ConfigError, ValidationError
from tagtopic.messages import (check_aggregates, commit_message,
                               init_messages, neighbor_sums,
                               recompute_aggregates)


class TestInit:
    def test_single_topic_forces_one(self, tiny_corpus):
        state = init_messages(tiny_corpus, 1, seed=5)
        np.testing.assert_array_equal(state.messages,
                                      np.ones((tiny_corpus.nnz, 1)))

    def test_deterministic(self, tiny_corpus):
        a = init_messages(tiny_corpus, 3, seed=5)
        b = init_messages(tiny_corpus, 3, seed=5)
        assert np.array_equal(a.messages, b.messages)
        assert np.array_equal(a.doc_totals, b.doc_totals)

    def test_aggregates_weight_by_counts(self):
        corpus = Corpus(1, 1, [0], [0], [4])
        state = init_messages(corpus, 3, seed=9)
        np.testing.assert_allclose(state.doc_totals[0],
                                   4 * state.messages[0], atol=1e-15)
        np.testing.assert_allclose(state.word_totals[0],
                                   4 * state.messages[0], atol=1e-15)

    def test_zero_topics_rejected(self, tiny_corpus):
        with pytest.raises(ConfigError):
            init_messages(tiny_corpus, 0, seed=1)

    def test_rows_normalized(self, tiny_corpus):
        state = init_messages(tiny_corpus, 4, seed=2)
        np.testing.assert_allclose(state.messages.sum(axis=1), 1.0,
                                   atol=1e-9)
        assert (state.messages >= 0).all()


class TestNeighborSums:
    def test_single_entry_document_excludes_to_zero(self, tiny_corpus):
        state = init_messages(tiny_corpus, 2, seed=3)
        mu_minus_w, _ = neighbor_sums(state, 1, 1)  # doc 1 has only word 1
        np.testing.assert_allclose(mu_minus_w, 0.0, atol=1e-12)

    def test_word_in_one_document_excludes_to_zero(self, tiny_corpus):
        state = init_messages(tiny_corpus, 2, seed=3)
        _, mu_minus_d = neighbor_sums(state, 0, 0)  # word 0 only in doc 0
        np.testing.assert_allclose(mu_minus_d, 0.0, atol=1e-12)

    def test_hand_value_two_entry_document(self, two_entry_doc):
        # doc 0: word 0 (count 1, mu=[.3,.7]) and word 1 (count 2,
        # mu=[.6,.4]); excluding word 0 leaves 2*[.6,.4] = [1.2,.8]
        state = init_messages(two_entry_doc, 2, seed=0)
        commit_message(state, 0, 0, np.array([0.3, 0.7]))
        commit_message(state, 1, 0, np.array([0.6, 0.4]))
        mu_minus_w, _ = neighbor_sums(state, 0, 0)
        np.testing.assert_allclose(mu_minus_w, [1.2, 0.8], atol=1e-12)

    def test_lookup_error(self, tiny_corpus):
        state = init_messages(tiny_corpus, 2, seed=3)
        with pytest.raises(tt.EntryLookupError):
            neighbor_sums(state, 1, 0)

    def test_clamped_non_negative(self, tiny_corpus):
        state = init_messages(tiny_corpus, 3, seed=8)
        for d, w, _ in tiny_corpus.entries():
            a, b = neighbor_sums(state, w, d)
            assert (a >= 0).all() and (b >= 0).all()


class TestCommit:
    def test_identity_commit_leaves_aggregates(self, tiny_corpus):
        state = init_messages(tiny_corpus, 3, seed=1)
        before = state.doc_totals.copy()
        commit_message(state, 0, 0, state.messages[0].copy())
        np.testing.assert_allclose(state.doc_totals, before, atol=1e-12)

    def test_onehot_swap_shifts_by_count(self):
        corpus = Corpus(1, 1, [0], [0], [3])
        state = init_messages(corpus, 2, seed=0)
        commit_message(state, 0, 0, np.array([0.0, 1.0]))
        before = state.doc_totals[0].copy()
        commit_message(state, 0, 0, np.array([1.0, 0.0]))
        np.testing.assert_allclose(state.doc_totals[0] - before, [3.0, -3.0],
                                   atol=1e-12)

    def test_unnormalized_rejected(self, tiny_corpus):
        state = init_messages(tiny_corpus, 2, seed=0)
        with pytest.raises(ValidationError):
            commit_message(state, 0, 0, np.array([0.5, 0.2]))
        with pytest.raises(ValidationError):
            commit_message(state, 0, 0, np.array([-0.2, 1.2]))

    def test_random_commit_sequence_matches_scratch(self, tiny_corpus):
        state = init_messages(tiny_corpus, 3, seed=4)
        rng = np.random.default_rng(11)
        entries = list(tiny_corpus.entries())
        for _ in range(100):
            d, w, _ = entries[rng.integers(len(entries))]
            mu = rng.random(3)
            commit_message(state, w, d, mu / mu.sum())
        doc, word, glob = recompute_aggregates(tiny_corpus, state.messages)
        np.testing.assert_allclose(state.doc_totals, doc, atol=1e-6)
        np.testing.assert_allclose(state.word_totals, word, atol=1e-6)
        np.testing.assert_allclose(state.global_totals, glob, atol=1e-6)
        check_aggregates(state)

    @given(ops=st.lists(st.tuples(st.integers(0, 2), st.floats(0.01, 1.0),
                                  st.floats(0.01, 1.0)), max_size=40))
    @settings(max_examples=30, deadline=None)
    def test_commit_property(self, ops):
        corpus = Corpus(2, 3, [0, 0, 1], [0, 2, 1], [2, 1, 5])
        state = init_messages(corpus, 2, seed=6)
        entries = list(corpus.entries())
        for idx, a, b in ops:
            d, w, _ = entries[idx]
            mu = np.array([a, b])
            commit_message(state, w, d, mu / mu.sum())
        check_aggregates(state)


class TestConservation:
    def test_doc_totals_sum_to_token_counts(self, tiny_corpus):
        state = init_messages(tiny_corpus, 4, seed=7)
        np.testing.assert_allclose(state.doc_totals.sum(axis=1),
                                   tiny_corpus.doc_token_counts, atol=1e-6)


class TestCheckpoint:
    def test_round_trip(self, tiny_corpus, tmp_path):
        state = init_messages(tiny_corpus, 3, seed=12)
        path = tmp_path / "ck.npz"
        tt.save_checkpoint(path, state, iteration=5, kind="lda")
        loaded, it, kind, extras = tt.load_checkpoint(path, tiny_corpus)
        assert it == 5
        assert kind == "lda"
        assert extras == {}
        assert np.array_equal(loaded.messages, state.messages)
        assert np.array_equal(loaded.doc_totals, state.doc_totals)

    def test_corpus_mismatch_rejected(self, tiny_corpus, tmp_path):
        state = init_messages(tiny_corpus, 3, seed=12)
        path = tmp_path / "ck.npz"
        tt.save_checkpoint(path, state, iteration=1)
        other = Corpus(1, 1, [0], [0], [1])
        with pytest.raises(ValidationError, match="different corpus"):
            tt.load_checkpoint(path, other)
