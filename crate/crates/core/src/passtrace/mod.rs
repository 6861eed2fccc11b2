// SPDX-License-Identifier: Apache-2.0

//! Per-pass mutation frequencies from the optimizer's `-print-changed`
//! output, computed live or from recorded logs.

pub mod banner;
pub mod table;
pub mod trace;

pub use banner::{parse_print_changed, PassEvent, PassStatus};
pub use table::{mutation_frequency, LanguagePassStat, MutationRow, MutationTable, TargetEvents};
pub use trace::{replay_corpus, replay_logs, run_opt_trace, trace_corpus, Granularity, OptRun, TraceOptions, TraceOutcome};
