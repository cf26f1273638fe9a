use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Example, Label, Polarity, PolarityCounts};
use crate::error::{Error, Result};

/// Markup flavour of a raw dataset file.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schema {
    /// SemEval-2014 restaurants: `sentence/text/aspectCategories/aspectCategory`.
    Semeval2014,
    /// MAMS-ACSA, same element names as 2014.
    Mams,
    /// SemEval-2015/2016 restaurants: `sentence/text/Opinions/Opinion` with
    /// `ENTITY#ATTRIBUTE` categories, mapped through a category table.
    Semeval2016,
}

impl FromStr for Schema {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "semeval2014" => Ok(Schema::Semeval2014),
            "mams" => Ok(Schema::Mams),
            "semeval2016" | "semeval2015" => Ok(Schema::Semeval2016),
            other => Err(Error::Config(format!("unknown schema `{other}`"))),
        }
    }
}

/// What the loader kept and dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadReport {
    pub sentences_read: usize,
    pub sentences_kept: usize,
    /// (sentence, category) pairs dropped for conflict polarity.
    pub conflict_pairs_dropped: usize,
    /// Sentences dropped because no label survived.
    pub empty_sentences_dropped: usize,
    /// Opinions whose category has no mapping (2015/16 markup only).
    pub unmapped_opinions: usize,
    pub counts: PolarityCounts,
}

#[derive(Clone, Debug)]
pub struct Loaded {
    pub examples: Vec<Example>,
    pub report: LoadReport,
}

/// Raw label before conflict resolution.
#[derive(Clone, Copy, PartialEq, Eq)]
enum RawPolarity {
    Known(Polarity),
    Conflict,
}

fn raw_polarity(s: &str) -> Option<RawPolarity> {
    match s {
        "conflict" => Some(RawPolarity::Conflict),
        other => Polarity::from_str(other).ok().map(RawPolarity::Known),
    }
}

/// Loads one raw file. Conflict labels are removed per (sentence, category)
/// and sentences left without labels are dropped. `mapping` is required for
/// [`Schema::Semeval2016`] and ignored otherwise.
pub fn load_semeval(
    path: &Path,
    schema: Schema,
    mapping: Option<&BTreeMap<String, String>>,
) -> Result<Loaded> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let prefix = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("sentence");
    let loaded = parse_markup(&text, schema, mapping, prefix)?;
    let r = &loaded.report;
    log::info!(
        "{}: read {} sentences, kept {} ({}), dropped {} conflict pairs and {} empty sentences",
        path.display(),
        r.sentences_read,
        r.sentences_kept,
        r.counts,
        r.conflict_pairs_dropped,
        r.empty_sentences_dropped
    );
    Ok(loaded)
}

pub(crate) fn parse_markup(
    text: &str,
    schema: Schema,
    mapping: Option<&BTreeMap<String, String>>,
    id_prefix: &str,
) -> Result<Loaded> {
    let doc = roxmltree::Document::parse(text).map_err(|e| Error::Markup {
        line: e.pos().row,
        message: e.to_string(),
    })?;
    if schema == Schema::Semeval2016 && mapping.is_none() {
        return Err(Error::Config(
            "2015/2016 markup needs a category mapping table".into(),
        ));
    }
    let line_of = |node: roxmltree::Node| doc.text_pos_at(node.range().start).row;

    let mut report = LoadReport::default();
    let mut examples = Vec::new();
    for (index, sentence) in doc
        .descendants()
        .filter(|n| n.has_tag_name("sentence"))
        .enumerate()
    {
        report.sentences_read += 1;
        let text = sentence
            .children()
            .find(|n| n.has_tag_name("text"))
            .and_then(|n| n.text())
            .ok_or_else(|| Error::Markup {
                line: line_of(sentence),
                message: "sentence without a <text> element".into(),
            })?
            .trim()
            .to_string();
        let id = sentence
            .attribute("id")
            .map(str::to_string)
            .unwrap_or_else(|| format!("{id_prefix}-{index}"));

        let (container, item) = match schema {
            Schema::Semeval2014 | Schema::Mams => ("aspectCategories", "aspectCategory"),
            Schema::Semeval2016 => ("Opinions", "Opinion"),
        };
        // category -> every raw polarity seen for it, in document order
        let mut seen: Vec<(String, Vec<RawPolarity>)> = Vec::new();
        for node in sentence
            .children()
            .filter(|n| n.has_tag_name(container))
            .flat_map(|c| c.children().filter(|n| n.has_tag_name(item)))
        {
            let missing = |attr: &str| Error::Markup {
                line: line_of(node),
                message: format!("<{item}> without a `{attr}` attribute"),
            };
            let raw_cat = node.attribute("category").ok_or_else(|| missing("category"))?;
            let pol_str = node.attribute("polarity").ok_or_else(|| missing("polarity"))?;
            let pol = raw_polarity(pol_str).ok_or_else(|| {
                Error::Schema(format!(
                    "line {}: unknown polarity `{pol_str}`",
                    line_of(node)
                ))
            })?;
            let category = match (schema, mapping) {
                (Schema::Semeval2016, Some(map)) => match map.get(raw_cat) {
                    Some(c) => c.clone(),
                    None => {
                        report.unmapped_opinions += 1;
                        continue;
                    }
                },
                _ => raw_cat.to_string(),
            };
            match seen.iter_mut().find(|(c, _)| *c == category) {
                Some((_, pols)) => pols.push(pol),
                None => seen.push((category, vec![pol])),
            }
        }

        let mut labels = Vec::new();
        for (category, pols) in seen {
            match resolve(&pols) {
                Some(polarity) => labels.push(Label { category, polarity }),
                None => report.conflict_pairs_dropped += 1,
            }
        }
        if labels.is_empty() {
            report.empty_sentences_dropped += 1;
            continue;
        }
        examples.push(Example {
            id,
            text,
            tokens: Vec::new(),
            parse: String::new(),
            labels,
        });
    }
    report.sentences_kept = examples.len();
    report.counts = PolarityCounts::of(&examples);
    Ok(Loaded { examples, report })
}

/// Collapses the polarities a category received in one sentence. Positive
/// together with negative, or an explicit conflict, yields `None`. A neutral
/// alongside one non-neutral polarity defers to the non-neutral one.
fn resolve(pols: &[RawPolarity]) -> Option<Polarity> {
    let mut set = HashSet::new();
    for p in pols {
        match p {
            RawPolarity::Conflict => return None,
            RawPolarity::Known(k) => {
                set.insert(*k);
            }
        }
    }
    let pos = set.contains(&Polarity::Positive);
    let neg = set.contains(&Polarity::Negative);
    match (pos, neg) {
        (true, true) => None,
        (true, false) => Some(Polarity::Positive),
        (false, true) => Some(Polarity::Negative),
        (false, false) => Some(Polarity::Neutral),
    }
}

/// Reads a `RAW#CATEGORY=target` table. Blank lines and `#`-prefixed lines
/// are skipped; the key may itself contain `#`.
pub fn load_category_mapping(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Format {
            line: i + 1,
            message: format!("expected key=value, got `{line}`"),
        })?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(Error::Format {
                line: i + 1,
                message: "empty key or value".into(),
            });
        }
        if map.insert(k.to_string(), v.to_string()).is_some() {
            return Err(Error::Format {
                line: i + 1,
                message: format!("duplicate key `{k}`"),
            });
        }
    }
    Ok(map)
}

/// Concatenates several loaded splits, keeping the first occurrence of each
/// sentence text. Labels of later duplicates are discarded.
pub fn merge_datasets(parts: &[Vec<Example>]) -> Vec<Example> {
    let mut seen: HashMap<String, ()> = HashMap::new();
    let mut out = Vec::new();
    for e in parts.iter().flatten() {
        let key = e.text.split_whitespace().collect::<Vec<_>>().join(" ");
        if seen.insert(key, ()).is_none() {
            out.push(e.clone());
        }
    }
    out
}
