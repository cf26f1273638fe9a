//! Binary checkpoint container.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! magic        8 bytes   "SCANCKPT"
//! version      u32       FORMAT_VERSION
//! header_len   u64
//! header       JSON      CheckpointHeader, header_len bytes
//! payload      f64 LE    every tensor of TENSOR_NAMES, in that order
//! ```
//!
//! The header records the model config, the vocabulary, the category list
//! and a SHA-256 hash over the three. Loading recomputes the hash and
//! refuses a file whose header does not match it.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::data::Vocab;
use crate::error::{Error, Result};
use crate::model::{ModelConfig, ModelParams, Scan, Variant, TENSOR_NAMES};

pub const MAGIC: &[u8; 8] = b"SCANCKPT";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorEntry {
    pub name: String,
    pub len: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckpointHeader {
    pub config: ModelConfig,
    pub variant: Variant,
    pub keep_preterminals: bool,
    pub vocab: Vocab,
    pub categories: Vec<String>,
    pub config_hash: String,
    pub tensors: Vec<TensorEntry>,
}

/// A trained model with everything needed to run it on new sentences.
#[derive(Clone, Debug, PartialEq)]
pub struct Checkpoint {
    pub model: Scan,
    pub variant: Variant,
    pub keep_preterminals: bool,
    pub vocab: Vocab,
    pub categories: Vec<String>,
}

/// Hex SHA-256 over the canonical JSON of config, vocabulary and categories.
pub fn config_hash(config: &ModelConfig, vocab: &Vocab, categories: &[String]) -> String {
    let canonical = serde_json::to_vec(&(config, vocab, categories))
        .expect("config, vocabulary and categories serialize");
    Sha256::digest(&canonical)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

impl Checkpoint {
    pub fn config_hash(&self) -> String {
        config_hash(&self.model.config, &self.vocab, &self.categories)
    }

    /// Refuses to pair this checkpoint with a different vocabulary or
    /// category list.
    pub fn check_compatible(&self, vocab: &Vocab, categories: &[String]) -> Result<()> {
        let theirs = config_hash(&self.model.config, vocab, categories);
        if theirs != self.config_hash() {
            return Err(Error::Checkpoint(format!(
                "vocabulary/config hash mismatch: checkpoint {} vs supplied {theirs}",
                self.config_hash()
            )));
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let header = CheckpointHeader {
            config: self.model.config.clone(),
            variant: self.variant,
            keep_preterminals: self.keep_preterminals,
            vocab: self.vocab.clone(),
            categories: self.categories.clone(),
            config_hash: self.config_hash(),
            tensors: self
                .model
                .params
                .tensors()
                .iter()
                .map(|(name, t)| TensorEntry {
                    name: name.to_string(),
                    len: t.len(),
                })
                .collect(),
        };
        let json = serde_json::to_vec(&header).expect("header serializes");
        let mut out = Vec::with_capacity(20 + json.len() + 8 * self.model.params.num_parameters());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        out.extend_from_slice(&(json.len() as u64).to_le_bytes());
        out.extend_from_slice(&json);
        for (_, t) in self.model.params.tensors() {
            for x in t {
                out.extend_from_slice(&x.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Checkpoint> {
        let bad = |m: &str| Error::Checkpoint(m.to_string());
        if bytes.len() < 20 || &bytes[..8] != MAGIC {
            return Err(bad("not a checkpoint file (bad magic)"));
        }
        let version = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
        if version != FORMAT_VERSION {
            return Err(Error::Checkpoint(format!(
                "unsupported checkpoint version {version} (expected {FORMAT_VERSION})"
            )));
        }
        let header_len = u64::from_le_bytes(bytes[12..20].try_into().unwrap()) as usize;
        let body = &bytes[20..];
        if body.len() < header_len {
            return Err(bad("truncated header"));
        }
        let header: CheckpointHeader = serde_json::from_slice(&body[..header_len])
            .map_err(|e| Error::Checkpoint(format!("bad header: {e}")))?;
        let expected = config_hash(&header.config, &header.vocab, &header.categories);
        if expected != header.config_hash {
            return Err(Error::Checkpoint(format!(
                "config hash mismatch: header says {}, contents hash to {expected}",
                header.config_hash
            )));
        }
        header.config.validate()?;
        if header.vocab.len() != header.config.vocab_size
            || header.categories.len() != header.config.num_categories
        {
            return Err(bad("vocabulary or category count disagrees with the config"));
        }

        let mut params = ModelParams::zeros(&header.config);
        let payload = &body[header_len..];
        if header.tensors.len() != TENSOR_NAMES.len() {
            return Err(bad("wrong number of tensors"));
        }
        let total: usize = header.tensors.iter().map(|t| t.len).sum();
        if payload.len() != 8 * total {
            return Err(Error::Checkpoint(format!(
                "payload has {} bytes, expected {}",
                payload.len(),
                8 * total
            )));
        }
        let mut chunks = payload.chunks_exact(8);
        for ((name, dst), entry) in params.tensors_mut().into_iter().zip(&header.tensors) {
            if entry.name != name || entry.len != dst.len() {
                return Err(Error::Checkpoint(format!(
                    "tensor `{}` ({} values) does not fit `{name}` ({} values)",
                    entry.name,
                    entry.len,
                    dst.len()
                )));
            }
            for d in dst.iter_mut() {
                *d = f64::from_le_bytes(chunks.next().unwrap().try_into().unwrap());
            }
        }
        Ok(Checkpoint {
            model: Scan::from_parts(header.config, params)?,
            variant: header.variant,
            keep_preterminals: header.keep_preterminals,
            vocab: header.vocab,
            categories: header.categories,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Checkpoint> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Checkpoint::from_bytes(&bytes)
    }
}
