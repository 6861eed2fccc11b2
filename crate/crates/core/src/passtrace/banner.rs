// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PassStatus {
    Changed,
    Unchanged,
    Ignored,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PassEvent {
    pub pass_name: String,
    /// Function name, `[module]`, an SCC like `(f)`, or a loop description.
    pub target: String,
    pub status: PassStatus,
}

const DUMP_AFTER: &str = "*** IR Dump After ";
const IR_PASS: &str = "*** IR Pass ";
const CLOSE: &str = " ***";
const NO_CHANGE: &str = " omitted because no change";
const FILTERED: &str = " filtered out";
const IGNORED: &str = " ignored";

/// Extract pass events from `-print-changed` output. Lines that are not
/// banners (the IR dumps themselves, diagnostics, noise) are skipped, so
/// this never fails.
///
/// Recognized banners:
/// `*** IR Dump After <pass> on <target> ***` (changed),
/// `... on <target> omitted because no change ***` (unchanged),
/// `... on <target> filtered out ***` and
/// `*** IR Pass <pass> on <target> ignored ***` (ignored).
pub fn parse_print_changed(log: &str) -> Vec<PassEvent> {
    log.lines().filter_map(parse_banner).collect()
}

pub fn parse_banner(line: &str) -> Option<PassEvent> {
    let line = line.trim_end_matches('\r');
    let inner = line.strip_suffix(CLOSE)?;
    let (body, status) = if let Some(rest) = inner.strip_prefix(DUMP_AFTER) {
        if let Some(b) = rest.strip_suffix(NO_CHANGE) {
            (b, PassStatus::Unchanged)
        } else if let Some(b) = rest.strip_suffix(FILTERED) {
            (b, PassStatus::Ignored)
        } else {
            (rest, PassStatus::Changed)
        }
    } else {
        let rest = inner.strip_prefix(IR_PASS)?;
        (rest.strip_suffix(IGNORED)?, PassStatus::Ignored)
    };
    let (pass, target) = split_on(body)?;
    (!pass.is_empty() && !target.is_empty()).then(|| PassEvent {
        pass_name: pass.to_string(),
        target: target.to_string(),
        status,
    })
}

/// Split `<pass> on <target>` at the first ` on ` outside template angle
/// brackets, since pass names like `RequireAnalysisPass<A, B>` contain
/// spaces.
fn split_on(body: &str) -> Option<(&str, &str)> {
    let bytes = body.as_bytes();
    let mut depth = 0i32;
    for i in 0..bytes.len() {
        match bytes[i] {
            b'<' => depth += 1,
            b'>' => depth -= 1,
            b' ' if depth == 0 && body[i..].starts_with(" on ") => {
                return Some((&body[..i], &body[i + 4..]));
            }
            _ => {}
        }
    }
    None
}
