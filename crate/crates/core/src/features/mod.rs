// SPDX-License-Identifier: Apache-2.0

//! Function-property vectors, deterministic sampling, histograms and CSV
//! export for external dimensionality reduction.

pub mod export;
pub mod histogram;
pub mod sample;
pub mod vector;

pub use export::export_feature_table;
pub use histogram::{histogram, log2_edges, Histogram};
pub use sample::{sample_functions, sample_indices, sample_parsed, FeatureSample, FunctionRef};
pub use vector::{extract_features, FeatureVector, FEATURE_COUNT, FEATURE_NAMES};
