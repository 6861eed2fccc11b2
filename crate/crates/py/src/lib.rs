// SPDX-License-Identifier: Apache-2.0

//! Python bindings. Structured results (reports, tables, feature vectors)
//! cross the boundary as plain dicts and lists.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyFileNotFoundError, PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;
use serde::Serialize;

use irforge::corpus::{CorpusManifest, Toolchain, DEFAULT_SECTION_NAMES};
use irforge::hashdedup::HashMode;
use irforge::irparse::Cfg;
use irforge::passtrace::PassStatus;
use irforge::tokenizer::BpeModel as CoreBpe;
use irforge::{Error, LanguageTag};

create_exception!(irforge_py, IrForgeError, PyException, "Errors raised by irforge.");

fn err(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::Parse { .. } | Error::Validation(_) => PyValueError::new_err(msg),
        Error::NotFound(_) => PyFileNotFoundError::new_err(msg),
        Error::Io { .. } => PyOSError::new_err(msg),
        _ => IrForgeError::new_err(msg),
    }
}

fn to_py<'py, T: Serialize + ?Sized>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| IrForgeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn mode(s: &str) -> PyResult<HashMode> {
    s.parse().map_err(err)
}

/// A parsed textual IR module.
#[pyclass(module = "irforge_py", name = "Module")]
struct Module {
    inner: irforge::irparse::IrModule,
}

#[pymethods]
impl Module {
    #[getter]
    fn source_filename(&self) -> Option<String> {
        self.inner.source_filename.clone()
    }

    #[getter]
    fn target_triple(&self) -> Option<String> {
        self.inner.target_triple.clone()
    }

    /// Names of defined functions, in source order.
    fn definitions(&self) -> Vec<String> {
        self.inner.definitions().map(|f| f.name.clone()).collect()
    }

    /// Names of declared-only functions.
    fn declarations(&self) -> Vec<String> {
        self.inner.declarations.clone()
    }

    fn global_names(&self) -> Vec<String> {
        self.inner.globals.iter().map(|g| g.name.clone()).collect()
    }

    /// Structural hash of the module as 16 hex digits.
    #[pyo3(signature = (mode = "coarse"))]
    fn hash(&self, mode: &str) -> PyResult<String> {
        Ok(format!("{:016x}", irforge::hashdedup::hash_module(&self.inner, self::mode(mode)?).value))
    }

    /// `{name: hex hash}` for every defined function.
    #[pyo3(signature = (mode = "coarse"))]
    fn function_hashes(&self, mode: &str) -> PyResult<BTreeMap<String, String>> {
        let m = self::mode(mode)?;
        Ok(self
            .inner
            .definitions()
            .map(|f| (f.name.clone(), format!("{:016x}", irforge::hashdedup::hash_function(f, m).value)))
            .collect())
    }

    /// Opcode mnemonic to count, debug intrinsics excluded.
    fn opcode_counts(&self) -> BTreeMap<String, u64> {
        irforge::stats::count_opcodes(&self.inner, LanguageTag::Other).counts
    }

    /// Feature vector of one defined function, as a dict.
    fn features<'py>(&self, py: Python<'py>, function: &str) -> PyResult<Bound<'py, PyAny>> {
        let f = self
            .inner
            .definitions()
            .find(|f| f.name == function)
            .ok_or_else(|| PyValueError::new_err(format!("no definition named {function:?}")))?;
        to_py(py, &irforge::features::extract_features(f).map_err(err)?)
    }

    fn __len__(&self) -> usize {
        self.inner.definitions().count()
    }

    fn __repr__(&self) -> String {
        format!(
            "Module(definitions={}, declarations={}, globals={})",
            self.inner.definitions().count(),
            self.inner.declarations.len(),
            self.inner.globals.len()
        )
    }
}

#[pyfunction]
fn parse_module(text: &str) -> PyResult<Module> {
    Ok(Module { inner: irforge::irparse::parse_module(text).map_err(err)? })
}

/// Standalone module holding one function and what it references.
#[pyfunction]
fn extract_function(text: &str, name: &str) -> PyResult<String> {
    irforge::corpus::extract_function(text, name).map_err(err)
}

/// Bitcode payload of an ELF object's embedded section.
#[pyfunction]
#[pyo3(signature = (data, sections = None))]
fn extract_embedded_bitcode<'py>(
    py: Python<'py>,
    data: &[u8],
    sections: Option<Vec<String>>,
) -> PyResult<Bound<'py, PyBytes>> {
    let names: Vec<String> = sections.unwrap_or_else(|| DEFAULT_SECTION_NAMES.iter().map(|s| s.to_string()).collect());
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let payload = irforge::corpus::extract_embedded_bitcode(data, &refs).map_err(err)?;
    Ok(PyBytes::new(py, &payload))
}

/// Immediate dominators of a graph given as `n` nodes and `(from, to)`
/// edges with node 0 as entry. The entry maps to itself; unreachable
/// nodes map to `None`.
#[pyfunction]
fn dominators(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Vec<Option<usize>>> {
    check_edges(n, &edges)?;
    Ok(irforge::irparse::compute_dominators(&Cfg::from_edges(n, &edges)).idom)
}

/// Natural loops as dicts with `header`, `body`, `latches` and `depth`.
#[pyfunction]
fn natural_loops<'py>(py: Python<'py>, n: usize, edges: Vec<(usize, usize)>) -> PyResult<Bound<'py, PyAny>> {
    check_edges(n, &edges)?;
    let cfg = Cfg::from_edges(n, &edges);
    let forest = irforge::irparse::find_natural_loops(&cfg, &irforge::irparse::compute_dominators(&cfg));
    to_py(py, &forest.loops)
}

fn check_edges(n: usize, edges: &[(usize, usize)]) -> PyResult<()> {
    if n == 0 {
        return Err(PyValueError::new_err("a graph needs at least the entry node"));
    }
    match edges.iter().find(|(a, b)| *a >= n || *b >= n) {
        Some(e) => Err(PyValueError::new_err(format!("edge {e:?} leaves the {n} nodes"))),
        None => Ok(()),
    }
}

/// `(pass, target, status)` for every banner in `-print-changed` output.
#[pyfunction]
fn parse_print_changed(log: &str) -> Vec<(String, String, &'static str)> {
    irforge::passtrace::parse_print_changed(log)
        .into_iter()
        .map(|e| {
            let status = match e.status {
                PassStatus::Changed => "changed",
                PassStatus::Unchanged => "unchanged",
                PassStatus::Ignored => "ignored",
            };
            (e.pass_name, e.target, status)
        })
        .collect()
}

/// Mutation-frequency table from recorded logs laid out as
/// `<dir>/<language>/<target>.log`.
#[pyfunction]
#[pyo3(signature = (log_dir, per_occurrence = false, exclude = Vec::new()))]
fn replay_pass_logs<'py>(
    py: Python<'py>,
    log_dir: PathBuf,
    per_occurrence: bool,
    exclude: Vec<String>,
) -> PyResult<Bound<'py, PyAny>> {
    let exclude: BTreeSet<LanguageTag> = exclude.iter().map(|s| s.parse()).collect::<Result<_, _>>().map_err(err)?;
    to_py(py, &irforge::passtrace::replay_corpus(&log_dir, &exclude, per_occurrence).map_err(err)?)
}

/// Byte-pair-encoding model over whitespace-separated words.
#[pyclass(module = "irforge_py", name = "BpeModel")]
struct BpeModel {
    inner: CoreBpe,
}

#[pymethods]
impl BpeModel {
    #[staticmethod]
    fn train(texts: Vec<String>, vocab_size: usize) -> PyResult<BpeModel> {
        Ok(BpeModel { inner: irforge::tokenizer::train_bpe(texts.iter().map(String::as_str), vocab_size).map_err(err)? })
    }

    /// Load a merges file body (`left right` per line).
    #[staticmethod]
    fn from_merges(text: &str, vocab_size: usize) -> PyResult<BpeModel> {
        Ok(BpeModel { inner: CoreBpe::from_merges_text(text, vocab_size).map_err(err)? })
    }

    #[getter]
    fn merges(&self) -> Vec<(String, String)> {
        self.inner.merges.clone()
    }

    #[getter]
    fn vocab_size(&self) -> usize {
        self.inner.vocab_size_target
    }

    fn merges_text(&self) -> String {
        self.inner.merges_text()
    }

    /// The same model cut down to a smaller vocabulary.
    fn truncated(&self, vocab_size: usize) -> PyResult<BpeModel> {
        Ok(BpeModel { inner: self.inner.truncated(vocab_size).map_err(err)? })
    }

    /// Tokens of a single word; they concatenate back to it.
    fn tokenize_word(&self, word: &str) -> Vec<String> {
        self.inner.encoder().tokenize_word(word)
    }

    /// Tokens of a whole text, word by word.
    fn tokenize(&self, text: &str) -> Vec<String> {
        let enc = self.inner.encoder();
        irforge::tokenizer::bpe::pretokenize(text).flat_map(|w| enc.tokenize_word(w)).collect()
    }

    fn count(&self, text: &str) -> u64 {
        irforge::tokenizer::tokenize_count(&self.inner, text)
    }

    fn __repr__(&self) -> String {
        format!("BpeModel(vocab_size={}, merges={})", self.inner.vocab_size_target, self.inner.merges.len())
    }
}

/// A corpus directory holding `manifest.json`.
#[pyclass(module = "irforge_py", name = "Corpus")]
struct Corpus {
    root: PathBuf,
    manifest: CorpusManifest,
}

#[pymethods]
impl Corpus {
    #[new]
    fn open(root: PathBuf) -> PyResult<Corpus> {
        let manifest = CorpusManifest::load_from(&root).map_err(err)?;
        Ok(Corpus { root, manifest })
    }

    #[getter]
    fn root(&self) -> PathBuf {
        self.root.clone()
    }

    fn records<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.manifest.records)
    }

    /// Record count per language tag.
    fn count_by_language(&self) -> BTreeMap<String, usize> {
        self.manifest.count_by_language().into_iter().map(|(l, n)| (l.to_string(), n)).collect()
    }

    /// Module-level dedup. Statuses are updated and saved to the manifest;
    /// the report comes back as a dict.
    #[pyo3(signature = (mode = "coarse"))]
    fn dedup<'py>(&mut self, py: Python<'py>, mode: &str) -> PyResult<Bound<'py, PyAny>> {
        let (m, report) = irforge::hashdedup::dedup_corpus(&self.manifest, &self.root, self::mode(mode)?);
        m.save_to(&self.root).map_err(err)?;
        self.manifest = m;
        to_py(py, &report)
    }

    /// Function-level duplicate counts; nothing is removed.
    #[pyo3(signature = (mode = "coarse"))]
    fn function_dedup<'py>(&self, py: Python<'py>, mode: &str) -> PyResult<Bound<'py, PyAny>> {
        let m = self::mode(mode)?;
        let index = irforge::hashdedup::function_hash_index(&self.manifest, &self.root, m);
        to_py(py, &irforge::hashdedup::function_dedup_report(&index, m))
    }

    #[pyo3(signature = (top = 10))]
    fn opcode_distribution<'py>(&self, py: Python<'py>, top: usize) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &irforge::stats::opcode_distribution(&self.manifest, &self.root, top))
    }

    #[pyo3(signature = (mode = "coarse"))]
    fn duplication_heatmap<'py>(&self, py: Python<'py>, mode: &str) -> PyResult<Bound<'py, PyAny>> {
        let index = irforge::hashdedup::function_hash_index(&self.manifest, &self.root, self::mode(mode)?);
        to_py(py, &irforge::stats::duplication_heatmap(&index))
    }

    /// Per-language function sample with feature vectors.
    #[pyo3(signature = (per_language, seed = 0))]
    fn sample_features<'py>(&self, py: Python<'py>, per_language: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &irforge::features::sample_functions(&self.manifest, &self.root, per_language, seed))
    }

    /// Train per vocabulary size on a per-language sample and count tokens
    /// over every live module.
    #[pyo3(signature = (vocab_sizes, sample_per_language = 400, seed = 0))]
    fn token_counts<'py>(
        &self,
        py: Python<'py>,
        vocab_sizes: Vec<usize>,
        sample_per_language: usize,
        seed: u64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let (report, _) =
            irforge::tokenizer::corpus_token_count(&self.manifest, &self.root, &vocab_sizes, sample_per_language, seed)
                .map_err(err)?;
        to_py(py, &report)
    }

    fn size_report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &irforge::corpus::corpus_size_report(&self.manifest))
    }

    fn __len__(&self) -> usize {
        self.manifest.records.len()
    }
}

/// Which external tools are reachable (from `IRFORGE_*` and `PATH`).
#[pyfunction]
fn probe<'py>(py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &irforge::cli::probe_toolchain(&Toolchain::from_env()))
}

/// Run the command-line interface with `args` (without the program name)
/// and return its exit code.
#[pyfunction]
fn run_cli(py: Python<'_>, args: Vec<String>) -> i32 {
    let argv: Vec<String> = std::iter::once("ir-forge".to_string()).chain(args).collect();
    py.detach(|| irforge::cli::main_with_args(argv))
}

#[pymodule]
pub fn irforge_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("IrForgeError", m.py().get_type::<IrForgeError>())?;
    m.add("FEATURE_NAMES", irforge::features::FEATURE_NAMES.to_vec())?;
    m.add_class::<Module>()?;
    m.add_class::<BpeModel>()?;
    m.add_class::<Corpus>()?;
    m.add_function(wrap_pyfunction!(parse_module, m)?)?;
    m.add_function(wrap_pyfunction!(extract_function, m)?)?;
    m.add_function(wrap_pyfunction!(extract_embedded_bitcode, m)?)?;
    m.add_function(wrap_pyfunction!(dominators, m)?)?;
    m.add_function(wrap_pyfunction!(natural_loops, m)?)?;
    m.add_function(wrap_pyfunction!(parse_print_changed, m)?)?;
    m.add_function(wrap_pyfunction!(replay_pass_logs, m)?)?;
    m.add_function(wrap_pyfunction!(probe, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
