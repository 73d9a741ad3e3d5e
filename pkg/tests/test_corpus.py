import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import tagtopic as tt
from tagtopic.corpus import Corpus, TagGraph
from tagtopic.exceptions import (ConfigError, CorpusFormatError,
                                 ValidationError)


class TestCorpusLoad:
    def test_direct_echo(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_text("2 3 3\n0 0 2\n0 2 1\n1 1 5\n")
        corpus = tt.load_corpus(path)
        assert corpus.num_docs == 2
        assert corpus.num_vocab == 3
        assert corpus.nnz == 3
        assert list(corpus.entries()) == [(0, 0, 2), (0, 2, 1), (1, 1, 5)]

    def test_empty_entry_list(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_text("1 1 0\n")
        corpus = tt.load_corpus(path)
        assert corpus.nnz == 0
        assert corpus.num_docs == 1

    def test_duplicate_entry_rejected(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_text("2 3 2\n0 0 2\n0 0 2\n")
        with pytest.raises(ValidationError, match="duplicate"):
            tt.load_corpus(path)

    def test_malformed_line_reports_lineno(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_text("1 2 1\n0 zero 1\n")
        with pytest.raises(CorpusFormatError, match=":2"):
            tt.load_corpus(path)

    def test_id_out_of_range(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_text("1 2 1\n0 5 1\n")
        with pytest.raises(ValidationError, match="out of range"):
            tt.load_corpus(path)

    def test_header_count_mismatch(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_text("1 2 5\n0 1 1\n")
        with pytest.raises(CorpusFormatError, match="declares 5"):
            tt.load_corpus(path)

    def test_entries_normalized_to_sorted_order(self):
        corpus = Corpus(2, 3, [1, 0, 0], [1, 2, 0], [5, 1, 2])
        assert list(corpus.entries()) == [(0, 0, 2), (0, 2, 1), (1, 1, 5)]

    def test_zero_count_rejected(self):
        with pytest.raises(ValidationError, match=">= 1"):
            Corpus(1, 1, [0], [0], [0])


class TestCorpusRoundTrip:
    def test_save_load_byte_identical(self, tmp_path):
        corpus = Corpus(3, 4, [2, 0, 1, 0], [3, 1, 2, 0], [1, 7, 2, 4])
        p1 = tmp_path / "a.txt"
        p2 = tmp_path / "b.txt"
        tt.save_corpus(corpus, p1)
        tt.save_corpus(tt.load_corpus(p1), p2)
        assert p1.read_bytes() == p2.read_bytes()

    @given(entries=st.lists(
        st.tuples(st.integers(0, 5), st.integers(0, 7), st.integers(1, 9)),
        max_size=20, unique_by=lambda e: (e[0], e[1])))
    @settings(max_examples=40, deadline=None)
    def test_round_trip_random(self, entries):
        import tempfile
        corpus = Corpus(6, 8, [e[0] for e in entries],
                        [e[1] for e in entries], [e[2] for e in entries])
        with tempfile.TemporaryDirectory() as tmp:
            p1 = f"{tmp}/a.txt"
            tt.save_corpus(corpus, p1)
            again = tt.load_corpus(p1)
        assert list(again.entries()) == list(corpus.entries())


class TestCorpusStats:
    def test_stats_match_recomputation(self, tiny_corpus):
        stats = tiny_corpus.stats
        assert stats.avg_tokens_per_doc == tiny_corpus.total_tokens / 2
        assert stats.avg_distinct_words_per_doc == tiny_corpus.nnz / 2

    def test_doc_slices(self, tiny_corpus):
        sl = tiny_corpus.doc_slice(0)
        assert list(tiny_corpus.word_ids[sl]) == [0, 2]
        assert tiny_corpus.doc_token_counts.tolist() == [3, 5]

    def test_entry_index_lookup(self, tiny_corpus):
        assert tiny_corpus.entry_index(1, 1) == 2
        with pytest.raises(tt.EntryLookupError):
            tiny_corpus.entry_index(1, 0)


class TestTagGraph:
    def test_direct_construction(self, tmp_path):
        path = tmp_path / "t.txt"
        path.write_text("0 5 7\n1 5\n")
        tags = tt.load_tags(path, 2)
        assert tags.docs_for_tag(5) == (0, 1)
        assert tags.tags_for_doc(0) == (5, 7)

    def test_empty_file_all_untagged(self, tmp_path):
        path = tmp_path / "t.txt"
        path.write_text("")
        tags = tt.load_tags(path, 3)
        assert tags.num_tags == 0
        assert all(ts == () for ts in tags.doc_tags)

    def test_duplicate_tag_rejected(self, tmp_path):
        path = tmp_path / "t.txt"
        path.write_text("0 5 5\n")
        with pytest.raises(ValidationError, match="duplicate"):
            tt.load_tags(path, 1)

    def test_doc_id_out_of_range(self, tmp_path):
        path = tmp_path / "t.txt"
        path.write_text("9 1\n")
        with pytest.raises(ValidationError, match="out of range"):
            tt.load_tags(path, 2)

    @given(st.lists(st.sets(st.integers(0, 6), max_size=5), min_size=1,
                    max_size=12))
    @settings(max_examples=50, deadline=None)
    def test_inverse_index_property(self, doc_tag_sets):
        tags = TagGraph(7, [sorted(ts) for ts in doc_tag_sets])
        for d, ts in enumerate(tags.doc_tags):
            for t in range(7):
                assert (d in tags.tag_docs[t]) == (t in ts)

    def test_round_trip(self, tmp_path):
        tags = TagGraph(4, [(0, 2), (), (1, 2, 3)])
        path = tmp_path / "t.txt"
        tt.save_tags(tags, path)
        again = tt.load_tags(path, 3)
        assert again.doc_tags == tags.doc_tags


class TestGenerateSynthetic:
    def test_tagged_docs_draw_from_their_topic(self):
        corpus, tags, truth = tt.generate_synthetic(
            2, 4, 10, 2, 1, 50, 10.0, seed=7)
        # token origins from the generator trace: docs tagged t should owe
        # >= 80% of their tokens to topic t's word distribution
        for d in range(4):
            t = tags.doc_tags[d][0]
            topic = truth.tag_topic_map[t]
            share = truth.origin_counts[d, topic] / 50
            assert share >= 0.8, (d, share)

    def test_deterministic(self):
        a = tt.generate_synthetic(2, 4, 10, 2, 1, 50, 10.0, seed=7)
        b = tt.generate_synthetic(2, 4, 10, 2, 1, 50, 10.0, seed=7)
        assert np.array_equal(a[0].to_dense(), b[0].to_dense())
        assert a[1].doc_tags == b[1].doc_tags
        assert np.array_equal(a[2].true_theta, b[2].true_theta)
        assert np.array_equal(a[2].true_phi, b[2].true_phi)

    def test_topic_count_bound(self):
        with pytest.raises(ConfigError):
            tt.generate_synthetic(3, 4, 10, 2, 1, 50, 10.0, seed=7)
        corpus, tags, truth = tt.generate_synthetic(
            2, 4, 10, 3, 1, 50, 10.0, seed=7)
        assert sorted(set(truth.tag_topic_map.values())) == [0, 1]

    def test_token_totals_exact(self):
        corpus, _, _ = tt.generate_synthetic(3, 7, 20, 3, 2, 13, 5.0, seed=1)
        assert corpus.total_tokens == 7 * 13

    def test_truth_rows_are_distributions(self):
        _, _, truth = tt.generate_synthetic(3, 5, 15, 4, 2, 20, 3.0, seed=2)
        np.testing.assert_allclose(truth.true_theta.sum(axis=1), 1.0,
                                   atol=1e-12)
        np.testing.assert_allclose(truth.true_phi.sum(axis=1), 1.0,
                                   atol=1e-12)


class TestSplit:
    def test_split_partitions_documents(self):
        corpus, tags, _ = tt.generate_synthetic(2, 10, 12, 2, 1, 20, 5.0,
                                                seed=3)
        sp = tt.split_corpus(corpus, tags, 0.2, seed=4)
        assert sp.train.num_docs == 8
        assert sp.test.num_docs == 2
        assert sorted(sp.train_doc_ids + sp.test_doc_ids) == list(range(10))
        assert sp.train.num_vocab == sp.test.num_vocab == 12
        # content preserved under renumbering
        dense = corpus.to_dense()
        np.testing.assert_array_equal(sp.test.to_dense(),
                                      dense[sp.test_doc_ids])

    def test_split_deterministic(self):
        corpus, tags, _ = tt.generate_synthetic(2, 10, 12, 2, 1, 20, 5.0,
                                                seed=3)
        a = tt.split_corpus(corpus, tags, 0.2, seed=4)
        b = tt.split_corpus(corpus, tags, 0.2, seed=4)
        assert a.test_doc_ids == b.test_doc_ids

    def test_bad_fraction(self):
        corpus, tags, _ = tt.generate_synthetic(2, 4, 6, 2, 1, 5, 5.0, seed=0)
        with pytest.raises(ConfigError):
            tt.split_corpus(corpus, tags, 0.0, seed=1)
