// SPDX-License-Identifier: Apache-2.0

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, IoContext, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pretokenizer {
    #[default]
    Whitespace,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BpeModel {
    /// In training order; rank = index.
    pub merges: Vec<(String, String)>,
    /// Base characters (sorted) first, then one entry per merge.
    pub vocab: BTreeMap<String, u32>,
    pub vocab_size_target: usize,
    pub pretokenizer: Pretokenizer,
}

pub fn pretokenize(text: &str) -> impl Iterator<Item = &str> {
    text.split_whitespace()
}

type Pair = (u32, u32);

struct Trainer {
    symbols: Vec<String>,
    words: Vec<Vec<u32>>,
    freqs: Vec<u64>,
    counts: HashMap<Pair, u64>,
    /// Words that contained the pair at some point (may be stale).
    occurs: HashMap<Pair, HashSet<usize>>,
    heap: BinaryHeap<(u64, Reverse<(String, String)>, Pair)>,
}

impl Trainer {
    fn add_word_pairs(&mut self, w: usize, sign: i64, touched: &mut BTreeSet<Pair>) {
        let f = self.freqs[w];
        for win in self.words[w].windows(2) {
            let p = (win[0], win[1]);
            let c = self.counts.entry(p).or_default();
            if sign > 0 {
                *c += f;
                self.occurs.entry(p).or_default().insert(w);
            } else {
                *c -= f;
            }
            touched.insert(p);
        }
    }

    fn push(&mut self, p: Pair) {
        let c = self.counts.get(&p).copied().unwrap_or(0);
        if c >= 2 {
            let key = (self.symbols[p.0 as usize].clone(), self.symbols[p.1 as usize].clone());
            self.heap.push((c, Reverse(key), p));
        }
    }

    /// Most frequent pair with count >= 2; lexicographically smallest on ties.
    fn best(&mut self) -> Option<Pair> {
        while let Some((c, _, p)) = self.heap.pop() {
            if self.counts.get(&p).copied() == Some(c) {
                return Some(p);
            }
        }
        None
    }

    fn merge(&mut self, p: Pair, new_id: u32) {
        let affected: Vec<usize> = {
            let mut v: Vec<usize> = self.occurs.remove(&p).unwrap_or_default().into_iter().collect();
            v.sort_unstable();
            v
        };
        let mut touched = BTreeSet::new();
        for w in affected {
            if !self.words[w].windows(2).any(|x| (x[0], x[1]) == p) {
                continue;
            }
            self.add_word_pairs(w, -1, &mut touched);
            self.words[w] = merge_word(&self.words[w], p, new_id);
            self.add_word_pairs(w, 1, &mut touched);
        }
        self.counts.retain(|_, c| *c > 0);
        for t in touched {
            self.push(t);
        }
    }
}

fn merge_word(word: &[u32], p: Pair, new_id: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(word.len());
    let mut i = 0;
    while i < word.len() {
        if i + 1 < word.len() && (word[i], word[i + 1]) == p {
            out.push(new_id);
            i += 2;
        } else {
            out.push(word[i]);
            i += 1;
        }
    }
    out
}

/// Word frequencies after pre-tokenization.
pub fn word_counts<'a>(texts: impl IntoIterator<Item = &'a str>) -> HashMap<String, u64> {
    let mut counts = HashMap::new();
    for t in texts {
        for w in pretokenize(t) {
            *counts.entry(w.to_string()).or_default() += 1;
        }
    }
    counts
}

/// Train on raw texts.
pub fn train_bpe<'a>(texts: impl IntoIterator<Item = &'a str>, vocab_size: usize) -> Result<BpeModel> {
    train_bpe_from_counts(&word_counts(texts), vocab_size)
}

/// Classic BPE over character symbols: repeatedly merge the most frequent
/// adjacent pair (ties broken by lexicographic pair order) until the vocab
/// reaches `vocab_size` or no pair occurs at least twice.
pub fn train_bpe_from_counts(words: &HashMap<String, u64>, vocab_size: usize) -> Result<BpeModel> {
    let alphabet: BTreeSet<char> = words.keys().flat_map(|w| w.chars()).collect();
    if vocab_size < alphabet.len() {
        return Err(Error::Validation(format!(
            "vocabulary size {vocab_size} is smaller than the base alphabet ({} symbols)",
            alphabet.len()
        )));
    }
    let symbols: Vec<String> = alphabet.iter().map(|c| c.to_string()).collect();
    let char_id: HashMap<char, u32> = alphabet.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect();

    // sorted word order keeps every tie and iteration deterministic
    let mut sorted: Vec<(&String, &u64)> = words.iter().collect();
    sorted.sort();
    let mut t = Trainer {
        symbols,
        words: sorted.iter().map(|(w, _)| w.chars().map(|c| char_id[&c]).collect()).collect(),
        freqs: sorted.iter().map(|(_, &f)| f).collect(),
        counts: HashMap::new(),
        occurs: HashMap::new(),
        heap: BinaryHeap::new(),
    };
    let mut touched = BTreeSet::new();
    for w in 0..t.words.len() {
        t.add_word_pairs(w, 1, &mut touched);
    }
    for p in touched {
        t.push(p);
    }

    let mut merges = Vec::new();
    while t.symbols.len() < vocab_size {
        let Some(p) = t.best() else { break };
        let left = t.symbols[p.0 as usize].clone();
        let right = t.symbols[p.1 as usize].clone();
        let new_id = t.symbols.len() as u32;
        t.symbols.push(format!("{left}{right}"));
        merges.push((left, right));
        t.merge(p, new_id);
    }
    Ok(BpeModel::from_parts(alphabet.into_iter().map(String::from).collect(), merges, vocab_size))
}

impl BpeModel {
    fn from_parts(base: Vec<String>, merges: Vec<(String, String)>, vocab_size_target: usize) -> Self {
        let mut vocab = BTreeMap::new();
        let mut next = 0u32;
        for s in base.into_iter().chain(merges.iter().map(|(l, r)| format!("{l}{r}"))) {
            vocab.entry(s).or_insert_with(|| {
                next += 1;
                next - 1
            });
        }
        BpeModel { merges, vocab, vocab_size_target, pretokenizer: Pretokenizer::Whitespace }
    }

    pub fn base_symbols(&self) -> Vec<String> {
        let merged: HashSet<String> = self.merges.iter().map(|(l, r)| format!("{l}{r}")).collect();
        let mut base: Vec<(u32, String)> =
            self.vocab.iter().filter(|(s, _)| !merged.contains(*s)).map(|(s, &id)| (id, s.clone())).collect();
        base.sort();
        base.into_iter().map(|(_, s)| s).collect()
    }

    /// The model training would have produced with a smaller target: the
    /// same merges, cut to fit.
    pub fn truncated(&self, vocab_size: usize) -> Result<BpeModel> {
        let base = self.base_symbols();
        if vocab_size < base.len() {
            return Err(Error::Validation(format!(
                "vocabulary size {vocab_size} is smaller than the base alphabet ({} symbols)",
                base.len()
            )));
        }
        let keep = (vocab_size - base.len()).min(self.merges.len());
        Ok(BpeModel::from_parts(base, self.merges[..keep].to_vec(), vocab_size))
    }

    /// Merges file: one `left right` pair per line, in rank order.
    pub fn merges_text(&self) -> String {
        self.merges.iter().map(|(l, r)| format!("{l} {r}\n")).collect()
    }

    pub fn save_merges(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.merges_text()).at(path)
    }

    /// Rebuild from a merges file. Base symbols are the characters the
    /// merges mention; anything else tokenizes to single characters anyway.
    pub fn from_merges_text(text: &str, vocab_size_target: usize) -> Result<BpeModel> {
        let mut merges = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let (l, r) = line
                .split_once(' ')
                .filter(|(l, r)| !l.is_empty() && !r.is_empty() && !r.contains(' '))
                .ok_or_else(|| Error::parse(i + 1, format!("expected `left right`, found {line:?}")))?;
            merges.push((l.to_string(), r.to_string()));
        }
        let base: BTreeSet<String> = merges.iter().flat_map(|(l, r)| l.chars().chain(r.chars())).map(String::from).collect();
        Ok(BpeModel::from_parts(base.into_iter().collect(), merges, vocab_size_target))
    }

    pub fn encoder(&self) -> Encoder<'_> {
        Encoder::new(self)
    }
}

/// Applies a model's merges. Keeps a per-word cache, so reuse one encoder
/// per thread for large inputs.
pub struct Encoder<'a> {
    model: &'a BpeModel,
    ranks: HashMap<(&'a str, &'a str), usize>,
    cache: HashMap<String, usize>,
}

impl<'a> Encoder<'a> {
    pub fn new(model: &'a BpeModel) -> Self {
        let ranks = model.merges.iter().enumerate().map(|(i, (l, r))| ((l.as_str(), r.as_str()), i)).collect();
        Encoder { model, ranks, cache: HashMap::new() }
    }

    /// Byte ranges of the tokens of one pre-tokenized word. Merges apply
    /// lowest rank first, which reproduces training order.
    pub fn word_spans(&self, word: &str) -> Vec<(usize, usize)> {
        let mut spans: Vec<(usize, usize)> = word.char_indices().map(|(i, c)| (i, i + c.len_utf8())).collect();
        if self.model.merges.is_empty() {
            return spans;
        }
        loop {
            let best = spans
                .windows(2)
                .enumerate()
                .filter_map(|(i, w)| {
                    let l = &word[w[0].0..w[0].1];
                    let r = &word[w[1].0..w[1].1];
                    self.ranks.get(&(l, r)).map(|&rank| (rank, i))
                })
                .min();
            let Some((rank, _)) = best else { break };
            let (l, r) = &self.model.merges[rank];
            let mut out = Vec::with_capacity(spans.len());
            let mut i = 0;
            while i < spans.len() {
                if i + 1 < spans.len() && &word[spans[i].0..spans[i].1] == l && &word[spans[i + 1].0..spans[i + 1].1] == r {
                    out.push((spans[i].0, spans[i + 1].1));
                    i += 2;
                } else {
                    out.push(spans[i]);
                    i += 1;
                }
            }
            spans = out;
        }
        spans
    }

    pub fn tokenize_word(&self, word: &str) -> Vec<String> {
        self.word_spans(word).into_iter().map(|(a, b)| word[a..b].to_string()).collect()
    }

    pub fn count_word(&mut self, word: &str) -> usize {
        if let Some(&n) = self.cache.get(word) {
            return n;
        }
        let n = self.word_spans(word).len();
        self.cache.insert(word.to_string(), n);
        n
    }

    pub fn count(&mut self, text: &str) -> u64 {
        pretokenize(text).map(|w| self.count_word(w) as u64).sum()
    }
}

/// Number of tokens `model` splits `text` into.
pub fn tokenize_count(model: &BpeModel, text: &str) -> u64 {
    model.encoder().count(text)
}
