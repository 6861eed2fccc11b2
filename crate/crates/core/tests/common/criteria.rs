// SPDX-License-Identifier: Apache-2.0

//! One function per acceptance criterion. Each returns a short detail line
//! on success and a reason on failure; the `acceptance` target prints them
//! and the topical test files assert them.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::time::{Duration, Instant};

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use irforge::corpus::manifest::MANIFEST_FILE;
use irforge::corpus::{
    corpus_size_report, disassemble_corpus, harvest_with, BitcodeArtifact, CorpusManifest, DedupStatus, Encoding,
    ExtractionStrategy, HarvestOptions, ModuleRecord, DEFAULT_SECTION_NAMES,
};
use irforge::features::extract_features;
use irforge::hashdedup::{dedup_corpus, hash_function, hash_module, HashMode};
use irforge::irparse::{compute_dominators, find_natural_loops, parse_module, Cfg, IrModule};
use irforge::passtrace::{parse_print_changed, replay_corpus, replay_logs, MutationTable};
use irforge::tokenizer::{count_texts, train_for_sizes};
use irforge::LanguageTag;

use super::graph::{brute_dominators, brute_idoms, brute_loops, random_graph, reaches_within};
use super::mutate::{
    alpha_rename, edit_metadata, function_spans, insert_attributes, join_lines, rename_callee, split_lines,
};
use super::stub::{clang_available, read_tree, run_pipeline, stub_dir, toolchain_dir};
use super::synth::{render, Names, Program};
use super::{fixtures_dir, ir_fixtures, scan_opcodes};

pub type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<f64, String> {
    let secs = start.elapsed().as_secs_f64();
    ensure!(start.elapsed() < limit, "{what} took {secs:.1}s, limit {}s", limit.as_secs());
    Ok(secs)
}

fn mnemonic_counts(m: &IrModule) -> BTreeMap<String, usize> {
    let mut c = BTreeMap::new();
    for f in m.definitions() {
        for i in f.instructions() {
            *c.entry(i.opcode.mnemonic().to_string()).or_default() += 1;
        }
    }
    c
}

/// Parsed opcode histograms equal the line scanner on every fixture,
/// including the two-line `sum` of the compilation table.
pub fn parser_oracle() -> Outcome {
    let start = Instant::now();
    let fixtures = ir_fixtures();
    ensure!(fixtures.len() >= 20, "only {} fixtures", fixtures.len());
    ensure!(fixtures.iter().any(|(n, _)| n == "table1_sum.ll"), "table1_sum.ll missing");
    let mut total = 0;
    for (name, text) in &fixtures {
        let m = parse_module(text).map_err(|e| format!("{name}: {e}"))?;
        let got = mnemonic_counts(&m);
        let want = scan_opcodes(text);
        ensure!(got == want, "{name}: parser {got:?} vs scanner {want:?}");
        total += got.values().sum::<usize>();
    }
    let table = parse_module(&super::read_fixture("table1_sum.ll")).map_err(|e| e.to_string())?;
    let ops: Vec<&str> = table.function("sum").unwrap().instructions().map(|i| i.opcode.mnemonic()).collect();
    ensure!(ops == ["add", "ret"], "optimized sum: {ops:?}");
    let o0 = parse_module(&super::read_fixture("sum.O0.ll")).map_err(|e| e.to_string())?;
    let c = {
        let mut c = BTreeMap::new();
        for i in o0.function("sum").unwrap().instructions() {
            *c.entry(i.opcode.mnemonic()).or_insert(0) += 1;
        }
        c
    };
    ensure!(
        c.values().sum::<usize>() == 8 && c["store"] == 2 && c["ret"] == 1,
        "unoptimized sum: {c:?}"
    );
    let secs = within(start, Duration::from_secs(5), "parsing")?;
    Ok(format!("{} modules, {total} instructions, {secs:.2}s", fixtures.len()))
}

struct Parsed {
    name: String,
    lines: Vec<String>,
    module: IrModule,
}

fn parsed_fixtures() -> Vec<Parsed> {
    ir_fixtures()
        .into_iter()
        .map(|(name, text)| Parsed { module: parse_module(&text).unwrap(), lines: split_lines(&text), name })
        .collect()
}

fn hashes(m: &IrModule, func: &str) -> [u64; 4] {
    let f = m.function(func).expect("function survives mutation");
    [
        hash_function(f, HashMode::Coarse).value,
        hash_function(f, HashMode::Detailed).value,
        hash_module(m, HashMode::Coarse).value,
        hash_module(m, HashMode::Detailed).value,
    ]
}

/// Renamings, attributes and metadata never move a hash; callee renames
/// move every detailed hash and no coarse one.
pub fn hash_invariance(trials: usize, seed: u64) -> Outcome {
    let start = Instant::now();
    let fixtures = parsed_fixtures();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let pool: Vec<(usize, usize)> = fixtures
        .iter()
        .enumerate()
        .flat_map(|(i, p)| (0..function_spans(&p.lines).len()).map(move |s| (i, s)))
        .collect();
    ensure!(!pool.is_empty(), "no mutable functions");
    let mut changed = Vec::new();
    let mut renamed_values = 0;
    for t in 0..trials {
        let &(fi, si) = pool.choose(&mut rng).unwrap();
        let p = &fixtures[fi];
        let span = function_spans(&p.lines)[si].clone();
        let mut lines = p.lines.clone();
        renamed_values += alpha_rename(&mut lines, &span, &mut rng);
        insert_attributes(&mut lines, &span, &mut rng);
        edit_metadata(&mut lines, &span, &mut rng, 900_000 + t);
        ensure!(lines != p.lines, "trial {t} did not change the text");
        let text = join_lines(&lines);
        let m = parse_module(&text).map_err(|e| format!("trial {t} (@{}): {e}", span.name))?;
        let (after, before) = (hashes(&m, &span.name), hashes(&p.module, &span.name));
        if after != before {
            let which: Vec<usize> = (0..4).filter(|&k| after[k] != before[k]).collect();
            changed.push(format!("{} @{} (hashes {which:?})", p.name, span.name));
        }
    }
    ensure!(changed.is_empty(), "{}/{trials} invariance trials changed a hash: {}", changed.len(), changed.join(", "));

    // callees that are plain declared functions
    let mut callee_pool = Vec::new();
    for (fi, p) in fixtures.iter().enumerate() {
        for (si, span) in function_spans(&p.lines).iter().enumerate() {
            let f = p.module.function(&span.name).unwrap();
            let callees: BTreeSet<&str> = f
                .instructions()
                .filter_map(|i| i.callee.as_deref())
                .filter(|c| !c.starts_with("llvm.") && p.module.declarations.iter().any(|d| d == c))
                .filter(|c| c.chars().all(|ch| ch.is_ascii_alphanumeric() || "._$".contains(ch)))
                .collect();
            for c in callees {
                callee_pool.push((fi, si, c.to_string()));
            }
        }
    }
    ensure!(!callee_pool.is_empty(), "no declared callees in the fixtures");
    let (mut detailed_moved, mut coarse_moved) = (0, 0);
    for t in 0..trials {
        let (fi, si, callee) = callee_pool.choose(&mut rng).unwrap().clone();
        let p = &fixtures[fi];
        let span = function_spans(&p.lines)[si].clone();
        let mut lines = p.lines.clone();
        ensure!(rename_callee(&mut lines, &span, &callee, &format!("{callee}_renamed{t}")), "rename of @{callee} failed");
        let m = parse_module(&join_lines(&lines)).map_err(|e| format!("callee trial {t}: {e}"))?;
        let before = hashes(&p.module, &span.name);
        let after = hashes(&m, &span.name);
        detailed_moved += usize::from(before[1] != after[1]);
        coarse_moved += usize::from(before[0] != after[0]);
    }
    ensure!(
        detailed_moved == trials && coarse_moved == 0,
        "callee renames moved {detailed_moved}/{trials} detailed and {coarse_moved}/{trials} coarse hashes"
    );
    let secs = within(start, Duration::from_secs(10), "hash suite")?;
    Ok(format!(
        "{trials} mutations ({renamed_values} values renamed): 0 changes; {trials} callee renames: detailed {detailed_moved}/{trials}, coarse {coarse_moved}/{trials}; {secs:.2}s"
    ))
}

/// Write 33 distinct modules plus 10 verbatim and 7 renamed copies, in
/// shuffled order. Returns the manifest and each record's group.
pub fn planted_corpus(root: &Path, seed: u64) -> (CorpusManifest, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lens: Vec<usize> = (1..=33).collect();
    lens.shuffle(&mut rng);
    let programs: Vec<Program> = lens.iter().map(|&l| Program::random(&mut rng, l)).collect();
    let mut items: Vec<(usize, String)> =
        programs.iter().enumerate().map(|(g, p)| (g, render(p, &Names::plain(g)))).collect();
    let picks = index::sample(&mut rng, 33, 17).into_vec();
    for (k, &g) in picks.iter().enumerate() {
        let text = if k < 10 { items[g].1.clone() } else { render(&programs[g], &Names::random(&mut rng)) };
        items.push((g, text));
    }
    items.shuffle(&mut rng);
    let mut records = Vec::new();
    let mut groups = Vec::new();
    for (i, (g, text)) in items.iter().enumerate() {
        let rel = format!("m{i:02}.ll");
        std::fs::write(root.join(&rel), text).unwrap();
        records.push(ModuleRecord::new(
            BitcodeArtifact {
                origin_package: "planted".into(),
                path: rel,
                encoding: Encoding::Textual,
                byte_size: text.len() as u64,
                extraction_strategy: ExtractionStrategy::RawFile,
            },
            LanguageTag::C,
        ));
        groups.push(*g);
    }
    // the manifest sorts by path, which is the order written
    (CorpusManifest::new(records), groups)
}

pub fn planted_dedup(seed: u64) -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (manifest, groups) = planted_corpus(dir.path(), seed);
    let mut details = Vec::new();
    for mode in [HashMode::Coarse, HashMode::Detailed] {
        let (out, report) = dedup_corpus(&manifest, dir.path(), mode);
        ensure!(report.removed == 17 && report.kept == 33, "{mode}: removed {} kept {}", report.removed, report.kept);
        let mut kept_per_group: BTreeMap<usize, usize> = BTreeMap::new();
        for (r, g) in out.records.iter().zip(&groups) {
            if r.dedup_status == DedupStatus::Kept {
                *kept_per_group.entry(*g).or_default() += 1;
            }
        }
        ensure!(
            kept_per_group.len() == 33 && kept_per_group.values().all(|&n| n == 1),
            "{mode}: groups do not keep exactly one module each"
        );
        let (again, report2) = dedup_corpus(&out, dir.path(), mode);
        ensure!(again.records == out.records && report2 == report, "{mode}: rerun is not idempotent");
        details.push(format!("{mode}: removed {} kept {}", report.removed, report.kept));
    }
    Ok(format!("{}; idempotent", details.join(", ")))
}

pub fn dominators_and_loops(graphs: usize, max_nodes: usize) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut loops_checked = 0;
    for g in 0..graphs {
        let (n, edges) = random_graph(&mut rng, max_nodes);
        let cfg = Cfg::from_edges(n, &edges);
        let dom = compute_dominators(&cfg);
        let want = brute_idoms(n, &edges);
        ensure!(dom.idom == want, "graph {g} {edges:?}: idom {:?} vs oracle {want:?}", dom.idom);
        let doms = brute_dominators(n, &edges);
        let forest = find_natural_loops(&cfg, &dom);
        for l in &forest.loops {
            ensure!(l.body.iter().all(|&b| doms[b].contains(&l.header)), "graph {g}: header {} does not dominate body", l.header);
            for &latch in &l.latches {
                ensure!(edges.contains(&(latch, l.header)), "graph {g}: latch {latch} has no back edge");
                ensure!(reaches_within(&edges, l.header, latch, &l.body), "graph {g}: latch {latch} unreachable in body");
            }
            loops_checked += 1;
        }
        let mut got: Vec<(usize, BTreeSet<usize>)> = forest.loops.iter().map(|l| (l.header, l.body.clone())).collect();
        got.sort();
        ensure!(got == brute_loops(n, &edges), "graph {g}: loop bodies differ from oracle");
    }
    let secs = within(start, Duration::from_secs(30), "dominator oracle")?;
    Ok(format!("{graphs} graphs (<= {max_nodes} nodes), {loops_checked} loops, {secs:.2}s"))
}

/// Interleave lines that are not banners and add CRLF endings now and then.
pub fn inject_noise(log: &str, seed: u64) -> String {
    const NOISE: [&str; 9] = [
        "warning: overriding the module target triple with x86_64-pc-linux-gnu [-Woverride-module]",
        "1 warning generated.",
        "",
        "*** IR Dump After",
        "*** IR Dump Before InstCombinePass on f ***",
        "; *** IR Dump After GVNPass on f ***",
        "remark: loops.c:12:3: loop not vectorized [-Rpass-missed=loop-vectorize]",
        "**** IR Dump After SROAPass on g ****",
        "*** IR Pass   on ***",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let crlf = rng.gen_bool(0.5);
    let mut out = String::new();
    for line in log.lines() {
        while rng.gen_bool(0.15) {
            out.push_str(NOISE.choose(&mut rng).unwrap());
            out.push_str(if crlf { "\r\n" } else { "\n" });
        }
        out.push_str(line);
        out.push_str(if crlf { "\r\n" } else { "\n" });
    }
    out
}

fn banner_lines(log: &str) -> usize {
    log.lines().filter(|l| l.starts_with("*** IR Dump After ") || l.starts_with("*** IR Pass ")).count()
}

type Row = (String, Vec<(LanguageTag, usize, usize, Option<f64>)>);

fn rows(t: &MutationTable) -> Vec<Row> {
    t.rows
        .iter()
        .map(|r| {
            (
                r.pass_name.clone(),
                r.per_language.iter().map(|(l, s)| (*l, s.targets_seen, s.targets_changed, s.frequency)).collect(),
            )
        })
        .collect()
}

/// The mutation tables of the `hand` log set, worked out by hand.
pub fn hand_tables() -> (Vec<Row>, Vec<Row>) {
    use LanguageTag::{Cpp, C};
    let r = |p: &str, c: (usize, usize, Option<f64>), x: (usize, usize, Option<f64>)| {
        (p.to_string(), vec![(C, c.0, c.1, c.2), (Cpp, x.0, x.1, x.2)])
    };
    let aggregate = vec![
        r("InstCombinePass", (3, 1, Some(1.0 / 3.0)), (1, 1, Some(1.0))),
        r("LICMPass", (0, 0, None), (1, 1, Some(1.0))),
        r("SROAPass", (3, 2, Some(2.0 / 3.0)), (2, 1, Some(0.5))),
        r("SimplifyCFGPass", (2, 1, Some(0.5)), (0, 0, None)),
    ];
    let per_occurrence = vec![
        r("InstCombinePass#2", (2, 0, Some(0.0)), (1, 1, Some(1.0))),
        r("LICMPass#1", (0, 0, None), (1, 1, Some(1.0))),
        r("SROAPass#1", (3, 2, Some(2.0 / 3.0)), (2, 1, Some(0.5))),
        r("SimplifyCFGPass#1", (2, 1, Some(0.5)), (0, 0, None)),
        r("InstCombinePass#1", (3, 1, Some(1.0 / 3.0)), (1, 0, Some(0.0))),
    ];
    (aggregate, per_occurrence)
}

pub fn pass_logs() -> Outcome {
    let recorded = fixtures_dir().join("passlogs/recorded");
    let targets = replay_logs(&recorded).map_err(|e| e.to_string())?;
    let langs: BTreeSet<LanguageTag> = targets.iter().map(|t| t.language).collect();
    ensure!(langs.len() >= 2 && targets.len() >= 4, "recorded set too small: {} targets", targets.len());
    let mut events = 0;
    for (k, t) in targets.iter().enumerate() {
        let path = recorded.join(t.language.as_str()).join(format!("{}.log", t.target));
        let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        ensure!(t.events.len() == banner_lines(&text), "{}: {} events for {} banner lines", t.target, t.events.len(), banner_lines(&text));
        for s in 0..3 {
            let noisy = parse_print_changed(&inject_noise(&text, (k * 10 + s) as u64));
            ensure!(noisy == t.events, "{}: noise changed the event list", t.target);
        }
        events += t.events.len();
    }
    let hand = fixtures_dir().join("passlogs/hand");
    let (want_agg, want_occ) = hand_tables();
    let agg = replay_corpus(&hand, &BTreeSet::new(), false).map_err(|e| e.to_string())?;
    ensure!(rows(&agg) == want_agg, "aggregate table {:?}", rows(&agg));
    let occ = replay_corpus(&hand, &BTreeSet::new(), true).map_err(|e| e.to_string())?;
    ensure!(rows(&occ) == want_occ, "per-occurrence table {:?}", rows(&occ));
    Ok(format!(
        "{} recorded targets, {events} events, identical under noise; hand tables match ({} + {} rows)",
        targets.len(),
        want_agg.len(),
        want_occ.len()
    ))
}

/// Fixture IR repeated up to exactly 1 MiB, cut at a line boundary.
pub fn one_mib_corpus() -> String {
    let texts: Vec<String> = ir_fixtures().into_iter().map(|(_, t)| t).collect();
    let mut out = String::new();
    'fill: loop {
        for t in &texts {
            for line in t.lines() {
                if out.len() + line.len() + 1 > 1 << 20 {
                    break 'fill;
                }
                out.push_str(line);
                out.push('\n');
            }
        }
    }
    out
}

pub fn random_word<R: Rng>(rng: &mut R) -> String {
    const EXTRA: [char; 6] = ['λ', 'é', '字', '€', '\u{1F600}', 'ß'];
    let alphabet: Vec<char> = ('!'..='~').chain(EXTRA).collect();
    let len = rng.gen_range(1..=40);
    (0..len)
        .map(|_| if rng.gen_bool(0.6) { *b"%@iadlstore0123_".choose(rng).unwrap() as char } else { *alphabet.choose(rng).unwrap() })
        .collect()
}

pub fn bpe_monotone() -> Outcome {
    let start = Instant::now();
    let corpus = vec![one_mib_corpus()];
    let sizes = [300, 1000, 3000];
    let models = train_for_sizes(&corpus, &sizes).map_err(|e| e.to_string())?;
    let counts: Vec<u64> = models.iter().map(|m| count_texts(m, &corpus)).collect();
    ensure!(counts.windows(2).all(|w| w[1] <= w[0]), "token counts increase: {counts:?}");
    let enc = models[2].encoder();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for k in 0..10_000 {
        let w = random_word(&mut rng);
        let toks = enc.tokenize_word(&w);
        ensure!(toks.concat() == w, "string {k} {w:?} detokenized to {:?}", toks.concat());
    }
    let secs = within(start, Duration::from_secs(60), "BPE")?;
    let pretty: Vec<String> = sizes.iter().zip(&counts).map(|(s, c)| format!("{s}: {c}")).collect();
    Ok(format!("{} bytes; tokens {}; 10000 strings lossless; {secs:.1}s", corpus[0].len(), pretty.join(", ")))
}

fn text_ratio(out: &Path, tree: &Path, strategy: ExtractionStrategy, dis: &Path) -> Result<f64, String> {
    let options = HarvestOptions {
        strategy,
        section_names: DEFAULT_SECTION_NAMES.iter().map(|s| s.to_string()).collect(),
        include_textual: false,
    };
    let records = harvest_with("fixture", LanguageTag::C, tree, &options, out).map_err(|e| e.to_string())?;
    ensure!(!records.is_empty(), "no bitcode found in {}", tree.display());
    let (m, errors) = disassemble_corpus(&CorpusManifest::new(records), out, Some(dis));
    ensure!(errors.is_empty(), "disassembly failed: {errors:?}");
    let report = corpus_size_report(&m);
    report.total.text_to_bitcode_ratio.ok_or_else(|| "no ratio reported".to_string())
}

pub fn text_expansion() -> Outcome {
    let stub_out = tempfile::tempdir().map_err(|e| e.to_string())?;
    let stub = text_ratio(
        stub_out.path(),
        &stub_dir().join("objects"),
        ExtractionStrategy::EmbeddedSection,
        &stub_dir().join("stub-dis"),
    )?;
    ensure!(stub > 1.0, "embedded objects: text/bitcode {stub:.2} <= 1");
    let live = if clang_available() {
        let bc = tempfile::tempdir().map_err(|e| e.to_string())?;
        let src = fixtures_dir().join("src");
        let mut sources: Vec<_> = std::fs::read_dir(&src).unwrap().filter_map(|e| e.ok()).map(|e| e.path()).collect();
        sources.sort();
        for s in sources.iter().filter(|p| p.extension().is_some_and(|x| x == "c")) {
            let out = bc.path().join(s.file_stem().unwrap()).with_extension("bc");
            let st = std::process::Command::new("clang")
                .args(["-O0", "-c", "-emit-llvm"])
                .arg(s)
                .arg("-o")
                .arg(&out)
                .status()
                .map_err(|e| e.to_string())?;
            ensure!(st.success(), "clang failed on {}", s.display());
        }
        let out = tempfile::tempdir().map_err(|e| e.to_string())?;
        let r = text_ratio(out.path(), bc.path(), ExtractionStrategy::RawFile, &toolchain_dir().join("clang-dis"))?;
        ensure!(r > 1.0, "clang bitcode: text/bitcode {r:.2} <= 1");
        format!("{r:.2}")
    } else {
        "skipped (no clang)".to_string()
    };
    Ok(format!(
        "text/bitcode: embedded objects {stub:.2}, clang-built {live}; reference {} (reported, not asserted)",
        irforge::corpus::size::REFERENCE_TEXT_TO_BITCODE_RATIO
    ))
}

pub fn end_to_end() -> Outcome {
    let start = Instant::now();
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    run_pipeline(a.path())?;
    run_pipeline(b.path())?;
    let m = CorpusManifest::load(&a.path().join(MANIFEST_FILE)).map_err(|e| e.to_string())?;
    ensure!(m.records.len() >= 3, "manifest has {} records", m.records.len());
    ensure!(a.path().join("dedup_report.json").is_file(), "no dedup report");
    let ra = read_tree(&a.path().join("reports"));
    let rb = read_tree(&b.path().join("reports"));
    ensure!(ra.keys().any(|k| k.ends_with(".svg")) && ra.keys().any(|k| k.ends_with(".json")), "reports missing: {:?}", ra.keys());
    ensure!(ra == rb, "reports differ between runs");
    let ma = std::fs::read(a.path().join(MANIFEST_FILE)).unwrap();
    let mb = std::fs::read(b.path().join(MANIFEST_FILE)).unwrap();
    ensure!(ma == mb, "manifests differ between runs");
    let secs = within(start, Duration::from_secs(60), "two pipeline runs")?;
    let removed = m.records.iter().filter(|r| r.dedup_status == DedupStatus::RemovedDuplicate).count();
    Ok(format!(
        "{} records ({removed} duplicate), {} report files identical across runs, {secs:.1}s",
        m.records.len(),
        ra.len()
    ))
}

pub fn right_skew() -> Outcome {
    let mut sizes: Vec<f64> = Vec::new();
    for (name, text) in ir_fixtures() {
        let m = parse_module(&text).map_err(|e| format!("{name}: {e}"))?;
        for f in m.definitions() {
            let fv = extract_features(f).map_err(|e| format!("{name} @{}: {e}", f.name))?;
            sizes.push(fv.get("total_instructions").unwrap());
        }
    }
    ensure!(sizes.len() >= 200, "only {} functions", sizes.len());
    sizes.sort_by(f64::total_cmp);
    let n = sizes.len();
    let median = if n % 2 == 1 { sizes[n / 2] } else { (sizes[n / 2 - 1] + sizes[n / 2]) / 2.0 };
    let mean = sizes.iter().sum::<f64>() / n as f64;
    ensure!(median < mean, "median {median} >= mean {mean:.2}");
    Ok(format!("{n} functions: median {median} < mean {mean:.2}"))
}
