"""Sparse loopy belief propagation for LDA and tag-topic models."""

from .corpus import (Corpus, TagGraph, SyntheticTruth, SplitResult,
                     load_corpus, save_corpus, load_tags, save_tags,
                     load_doc_labels, generate_synthetic, split_corpus)
from .exceptions import (TagTopicError, CorpusFormatError, ValidationError,
                         ConfigError, EntryLookupError)
from .messages import (MessageState, init_messages, neighbor_sums,
                       commit_message, recompute_aggregates,
                       save_checkpoint, load_checkpoint)
from .lda import (TrainConfig, ModelParams, lda_update, lda_sweep,
                  estimate_theta, estimate_phi, train_lda, fold_in,
                  perplexity, LdaBeliefPropagation)
from .ttm import (TtmConfig, TtmState, RelationIndex, init_ttm_state,
                  doc_tag_message, update_credit, pairwise_factor,
                  hyper_factor, gamma_message, delta_message, ttm_update,
                  train_ttm, TagTopicModel)
from .evaluate import (top_words, export_link_features, export_doc_features,
                       TagRecScores, TagRecResult, fuse_tagrec_scores,
                       tagrec_metrics, load_scores, save_scores)
from .validation import as_corpus, as_tag_graph

__version__ = "0.1.0"
