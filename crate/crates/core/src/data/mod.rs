//! Dataset ingestion and preparation: SemEval/MAMS markup, conflict removal,
//! hard test sets, parse attachment, vocabulary, pretrained vectors and
//! padded batches.

mod batch;
mod embeddings;
mod semeval;
pub mod toy;
mod vocab;

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use batch::{batchify, encode_examples, EncodedExample};
pub use embeddings::{load_pretrained_embeddings, Coverage};
pub use semeval::{
    load_category_mapping, load_semeval, merge_datasets, LoadReport, Loaded, Schema,
};
pub use vocab::{build_vocab, Vocab, PAD, PAD_ID, UNK, UNK_ID};

use crate::error::{Error, Result};
use crate::treebank::{parse_bracketed_lines, ParseTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
    Neutral,
}

impl Polarity {
    pub const ALL: [Polarity; 3] = [Polarity::Positive, Polarity::Negative, Polarity::Neutral];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Polarity> {
        Self::ALL.get(i).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
            Polarity::Neutral => "neutral",
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Polarity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "positive" => Ok(Polarity::Positive),
            "negative" => Ok(Polarity::Negative),
            "neutral" => Ok(Polarity::Neutral),
            other => Err(Error::Schema(format!("unknown polarity `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Label {
    pub category: String,
    pub polarity: Polarity,
}

/// One sentence with its category-level sentiment labels. `tokens` and
/// `parse` stay empty until parses are attached.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Example {
    pub id: String,
    pub text: String,
    pub tokens: Vec<String>,
    pub parse: String,
    pub labels: Vec<Label>,
}

impl Example {
    pub fn polarity_of(&self, category: &str) -> Option<Polarity> {
        self.labels
            .iter()
            .find(|l| l.category == category)
            .map(|l| l.polarity)
    }

    pub fn has_parse(&self) -> bool {
        !self.parse.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.labels.is_empty() {
            return Err(Error::Schema(format!("example {} has no labels", self.id)));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = self.labels.iter().find(|l| !seen.insert(&l.category)) {
            return Err(Error::Schema(format!(
                "example {} labels category `{}` twice",
                self.id, dup.category
            )));
        }
        if self.has_parse() {
            let tree = crate::treebank::parse_bracketed(&self.parse)?;
            if tree.leaves() != self.tokens {
                return Err(Error::Alignment(format!(
                    "example {}: tokens differ from the parse leaves",
                    self.id
                )));
            }
        }
        Ok(())
    }
}

/// Category-instance counts per polarity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarityCounts {
    pub positive: usize,
    pub negative: usize,
    pub neutral: usize,
}

impl PolarityCounts {
    pub fn new(positive: usize, negative: usize, neutral: usize) -> Self {
        PolarityCounts {
            positive,
            negative,
            neutral,
        }
    }

    pub fn of(examples: &[Example]) -> Self {
        let mut c = PolarityCounts::default();
        for l in examples.iter().flat_map(|e| &e.labels) {
            c.add(l.polarity, 1);
        }
        c
    }

    pub fn get(&self, p: Polarity) -> usize {
        match p {
            Polarity::Positive => self.positive,
            Polarity::Negative => self.negative,
            Polarity::Neutral => self.neutral,
        }
    }

    fn add(&mut self, p: Polarity, k: usize) {
        match p {
            Polarity::Positive => self.positive += k,
            Polarity::Negative => self.negative += k,
            Polarity::Neutral => self.neutral += k,
        }
    }

    pub fn total(&self) -> usize {
        self.positive + self.negative + self.neutral
    }

    fn fits_within(&self, other: &PolarityCounts) -> bool {
        Polarity::ALL.iter().all(|&p| self.get(p) <= other.get(p))
    }
}

impl fmt::Display for PolarityCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.positive, self.negative, self.neutral)
    }
}

/// Splits and label inventory of one dataset.
#[derive(Clone, Debug, PartialEq)]
pub struct DatasetBundle {
    pub name: String,
    pub train: Vec<Example>,
    pub dev: Vec<Example>,
    pub test: Vec<Example>,
    pub categories: Vec<String>,
    pub polarities: Vec<Polarity>,
}

impl DatasetBundle {
    pub fn validate(&self) -> Result<()> {
        let cats: HashSet<&str> = self.categories.iter().map(String::as_str).collect();
        for e in self.train.iter().chain(&self.dev).chain(&self.test) {
            e.validate()?;
            if let Some(l) = e.labels.iter().find(|l| !cats.contains(l.category.as_str())) {
                return Err(Error::Schema(format!(
                    "example {} uses unknown category `{}`",
                    e.id, l.category
                )));
            }
        }
        Ok(())
    }
}

/// Keeps the sentences with at least two categories whose polarities are
/// not all the same.
pub fn build_hard_test(test: &[Example]) -> Vec<Example> {
    test.iter()
        .filter(|e| {
            e.labels.len() >= 2 && e.labels.iter().any(|l| l.polarity != e.labels[0].polarity)
        })
        .cloned()
        .collect()
}

/// Fills `tokens` and `parse` from a file body holding one bracketed tree
/// per example, in order.
pub fn attach_parses(examples: &[Example], trees: &str) -> Result<Vec<Example>> {
    let trees = parse_bracketed_lines(trees)?;
    if trees.len() != examples.len() {
        return Err(Error::Alignment(format!(
            "{} examples but {} trees; the tree file needs one bracketed tree per example line",
            examples.len(),
            trees.len()
        )));
    }
    Ok(examples
        .iter()
        .zip(&trees)
        .map(|(e, t)| with_parse(e, t))
        .collect())
}

fn with_parse(e: &Example, tree: &ParseTree) -> Example {
    Example {
        tokens: tree.leaves().into_iter().map(str::to_string).collect(),
        parse: tree.to_string(),
        ..e.clone()
    }
}

/// Moves a seeded random subset of `examples` whose category counts match
/// `target` into a development split. Sentences are visited in shuffled
/// order and taken whenever they still fit under every per-polarity target,
/// so the result can fall short of `target` when no remaining sentence fits.
pub fn stratified_dev_split(
    examples: &[Example],
    target: PolarityCounts,
    seed: u64,
) -> (Vec<Example>, Vec<Example>) {
    let mut order: Vec<usize> = (0..examples.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut taken = vec![false; examples.len()];
    let mut got = PolarityCounts::default();
    for i in order {
        if got == target {
            break;
        }
        let mut next = got;
        for l in &examples[i].labels {
            next.add(l.polarity, 1);
        }
        if next.fits_within(&target) {
            got = next;
            taken[i] = true;
        }
    }
    if got != target {
        log::warn!("dev split reached {got}, short of the {target} target");
    }
    let (mut train, mut dev) = (Vec::new(), Vec::new());
    for (e, t) in examples.iter().zip(taken) {
        if t {
            dev.push(e.clone())
        } else {
            train.push(e.clone())
        }
    }
    (train, dev)
}

pub fn write_jsonl(path: &Path, examples: &[Example]) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for e in examples {
        serde_json::to_writer(&mut w, e)?;
        w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_jsonl(path: &Path) -> Result<Vec<Example>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let e: Example = serde_json::from_str(&line).map_err(|err| Error::Format {
            line: i + 1,
            message: err.to_string(),
        })?;
        out.push(e);
    }
    Ok(out)
}

/// Default category inventory for the known dataset families.
pub fn default_categories(schema: Schema) -> Vec<String> {
    let cats: &[&str] = match schema {
        Schema::Semeval2014 | Schema::Semeval2016 => &[
            "food",
            "service",
            "price",
            "ambience",
            "anecdotes/miscellaneous",
        ],
        Schema::Mams => &[
            "food",
            "service",
            "staff",
            "price",
            "ambience",
            "menu",
            "place",
            "miscellaneous",
        ],
    };
    cats.iter().map(|s| s.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn ex(id: &str, labels: &[(&str, Polarity)]) -> Example {
        Example {
            id: id.into(),
            text: format!("sentence {id}"),
            tokens: vec![],
            parse: String::new(),
            labels: labels
                .iter()
                .map(|(c, p)| Label {
                    category: c.to_string(),
                    polarity: *p,
                })
                .collect(),
        }
    }

    use Polarity::*;

    #[test]
    fn hard_test_keeps_mixed_sentences_only() {
        let test = vec![
            ex("a", &[("food", Positive), ("service", Negative)]),
            ex("b", &[("food", Positive)]),
            ex("c", &[("food", Positive), ("service", Positive)]),
            ex("d", &[("food", Neutral), ("price", Neutral), ("service", Negative)]),
        ];
        let hard = build_hard_test(&test);
        let ids: Vec<_> = hard.iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids, ["a", "d"]);
        assert_eq!(build_hard_test(&hard), hard);
    }

    #[test]
    fn attach_parses_aligns_or_fails() {
        let exs = vec![
            ex("1", &[("food", Positive)]),
            ex("2", &[("food", Negative)]),
            ex("3", &[("service", Neutral)]),
        ];
        let trees = "(S (NP good) (NN food))\n(S bad food)\n(S (NP ok))\n";
        let out = attach_parses(&exs, trees).unwrap();
        assert_eq!(out.len(), 3);
        assert_eq!(out[0].tokens, ["good", "food"]);
        assert_eq!(out[2].parse, "(S (NP ok))");
        for e in &out {
            e.validate().unwrap();
        }
        let err = attach_parses(&exs, "(S a)\n(S b)\n").unwrap_err();
        assert!(matches!(err, Error::Alignment(_)));
    }

    #[test]
    fn dev_split_hits_targets() {
        let mut exs = Vec::new();
        for i in 0..40 {
            let p = Polarity::ALL[i % 3];
            exs.push(ex(&i.to_string(), &[("food", p)]));
        }
        exs.push(ex("x", &[("food", Positive), ("service", Negative)]));
        let target = PolarityCounts::new(4, 3, 2);
        let (train, dev) = stratified_dev_split(&exs, target, 11);
        assert_eq!(PolarityCounts::of(&dev), target);
        assert_eq!(train.len() + dev.len(), exs.len());
        let (_, again) = stratified_dev_split(&exs, target, 11);
        assert_eq!(again, dev);
    }

    #[test]
    fn jsonl_round_trip_is_byte_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.jsonl");
        let exs = attach_parses(
            &[ex("1", &[("food", Positive), ("price", Negative)])],
            "(S (NP \"quoted\") (VP é))",
        )
        .unwrap();
        write_jsonl(&path, &exs).unwrap();
        let bytes = fs::read(&path).unwrap();
        let back = read_jsonl(&path).unwrap();
        assert_eq!(back, exs);
        write_jsonl(&path, &back).unwrap();
        assert_eq!(fs::read(&path).unwrap(), bytes);
        let line = String::from_utf8(bytes).unwrap();
        assert!(line.starts_with(r#"{"id":"1","text":"#), "{line}");
    }

    #[test]
    fn duplicate_category_is_invalid() {
        let e = ex("1", &[("food", Positive), ("food", Negative)]);
        assert!(e.validate().is_err());
        assert!(ex("2", &[]).validate().is_err());
    }
}
