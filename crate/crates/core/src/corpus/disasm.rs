// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::process::Command;

use rayon::prelude::*;

use super::manifest::{textual_sibling, CorpusManifest, Encoding, ModuleRecord};
use crate::error::{Error, IoContext, Result};

/// Run an `llvm-dis`-compatible tool: `<dis> <input> -o <output>`.
pub fn disassemble_file(dis: &Path, input: &Path, output: &Path) -> Result<()> {
    let out = Command::new(dis)
        .arg(input)
        .arg("-o")
        .arg(output)
        .output()
        .map_err(|e| Error::ToolUnavailable {
            tool: dis.display().to_string(),
            reason: e.to_string(),
        })?;
    if !out.status.success() {
        let _ = std::fs::remove_file(output);
        return Err(Error::Tool {
            tool: dis.display().to_string(),
            diagnostic: String::from_utf8_lossy(&out.stderr).trim().to_string(),
        });
    }
    Ok(())
}

/// Textual IR of a record. Bitcode is disassembled next to the `.bc` file
/// and the record's `text_size` updated; textual records pass through.
pub fn disassemble(root: &Path, record: &mut ModuleRecord, dis: Option<&Path>) -> Result<String> {
    if record.artifact.encoding == Encoding::Textual {
        let path = root.join(&record.artifact.path);
        return std::fs::read_to_string(&path).at(path);
    }
    let dis = dis.ok_or_else(|| Error::ToolUnavailable {
        tool: "disassembler".into(),
        reason: "no disassembler configured (IRFORGE_DIS)".into(),
    })?;
    let input = root.join(&record.artifact.path);
    let output = root.join(textual_sibling(&record.artifact.path));
    disassemble_file(dis, &input, &output)?;
    let text = std::fs::read_to_string(&output).at(&output)?;
    record.text_size = Some(text.len() as u64);
    Ok(text)
}

/// Disassemble every bitcode record in parallel. Failures leave the record
/// untouched and are returned alongside its path.
pub fn disassemble_corpus(
    manifest: &CorpusManifest,
    root: &Path,
    dis: Option<&Path>,
) -> (CorpusManifest, Vec<(String, Error)>) {
    let results: Vec<(ModuleRecord, Option<Error>)> = manifest
        .records
        .par_iter()
        .map(|r| {
            let mut rec = r.clone();
            match disassemble(root, &mut rec, dis) {
                Ok(_) => (rec, None),
                Err(e) => (r.clone(), Some(e)),
            }
        })
        .collect();
    let mut out = manifest.clone();
    let mut errors = Vec::new();
    out.records = Vec::with_capacity(results.len());
    for (rec, err) in results {
        if let Some(e) = err {
            errors.push((rec.artifact.path.clone(), e));
        }
        out.records.push(rec);
    }
    (out, errors)
}
