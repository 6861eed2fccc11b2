// SPDX-License-Identifier: Apache-2.0

//! Byte-pair-encoding vocabularies over whitespace-split IR text, and
//! corpus token counts at several vocabulary sizes.

pub mod bpe;
pub mod corpus;

pub use bpe::{tokenize_count, train_bpe, train_bpe_from_counts, BpeModel, Encoder, Pretokenizer};
pub use corpus::{
    corpus_token_count, count_texts, draw_training_sample, train_for_sizes, SampleDescription, TokenCountReport,
    VocabCount,
};
