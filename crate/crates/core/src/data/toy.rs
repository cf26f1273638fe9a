//! A hand-parsed eight-sentence restaurant corpus for smoke tests and the
//! overfitting probe.

use super::{DatasetBundle, Example, Label, Polarity};

/// Text, parse and gold labels of one sentence.
type ToySentence = (&'static str, &'static str, &'static [(&'static str, Polarity)]);

const SENTENCES: [ToySentence; 8] = [
    (
        "Great food but the service was dreadful",
        "(S (S (NP (JJ Great) (NN food))) (CC but) (S (NP (DT the) (NN service)) (VP (VBD was) (ADJP (JJ dreadful)))))",
        &[("food", Polarity::Positive), ("service", Polarity::Negative)],
    ),
    (
        "The food was bland",
        "(S (NP (DT The) (NN food)) (VP (VBD was) (ADJP (JJ bland))))",
        &[("food", Polarity::Negative)],
    ),
    (
        "Friendly staff and fast service",
        "(NP (NP (JJ Friendly) (NN staff)) (CC and) (NP (JJ fast) (NN service)))",
        &[("service", Polarity::Positive)],
    ),
    (
        "The prices are reasonable",
        "(S (NP (DT The) (NNS prices)) (VP (VBP are) (ADJP (JJ reasonable))))",
        &[("price", Polarity::Positive)],
    ),
    (
        "The pasta was awful but cheap",
        "(S (NP (DT The) (NN pasta)) (VP (VBD was) (ADJP (JJ awful) (CC but) (JJ cheap))))",
        &[("food", Polarity::Negative), ("price", Polarity::Positive)],
    ),
    (
        "The service was okay",
        "(S (NP (DT The) (NN service)) (VP (VBD was) (ADJP (JJ okay))))",
        &[("service", Polarity::Neutral)],
    ),
    (
        "Delicious dishes at outrageous prices",
        "(NP (NP (JJ Delicious) (NNS dishes)) (PP (IN at) (NP (JJ outrageous) (NNS prices))))",
        &[("food", Polarity::Positive), ("price", Polarity::Negative)],
    ),
    (
        "We ordered the soup",
        "(S (NP (PRP We)) (VP (VBD ordered) (NP (DT the) (NN soup))))",
        &[("food", Polarity::Neutral)],
    ),
];

pub fn categories() -> Vec<String> {
    ["food", "service", "price"].map(String::from).to_vec()
}

pub fn examples() -> Vec<Example> {
    SENTENCES
        .iter()
        .enumerate()
        .map(|(i, (text, parse, labels))| {
            let tree = crate::treebank::parse_bracketed(parse).expect("toy parses are valid");
            Example {
                id: format!("toy-{i}"),
                text: text.to_string(),
                tokens: tree.leaves().into_iter().map(str::to_string).collect(),
                parse: tree.to_string(),
                labels: labels
                    .iter()
                    .map(|(c, p)| Label {
                        category: c.to_string(),
                        polarity: *p,
                    })
                    .collect(),
            }
        })
        .collect()
}

/// The toy corpus with every split set to the same eight sentences.
pub fn corpus() -> DatasetBundle {
    let exs = examples();
    DatasetBundle {
        name: "toy".into(),
        train: exs.clone(),
        dev: exs.clone(),
        test: exs,
        categories: categories(),
        polarities: Polarity::ALL.to_vec(),
    }
}
