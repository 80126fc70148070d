//! Line-delimited JSON manifests.
//!
//! Input:
//!
//! ```text
//! {"version":1,"classes":5}
//! {"image":"cat_001.png","label":3,"mask":"masks/cat_001.png"}
//! {"image":"dog_007.png","label":[0.0,0.9,0.1,0.0,0.0]}
//! ```
//!
//! The first record is the header. Blank lines and lines starting with `#`
//! are skipped. Relative paths resolve against the manifest's directory.
//! The output manifest starts with an [`OutputHeader`] followed by one
//! [`OutputRecord`] per input item, in input order.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{Mode, PipelineError, Result};
use crate::cutmix::CutBox;
use crate::freq::PhaseSource;
use crate::label::SoftLabel;

pub const MANIFEST_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHeader {
    version: u32,
    classes: usize,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawLabel {
    Index(usize),
    Soft(Vec<f64>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    image: PathBuf,
    label: RawLabel,
    #[serde(default)]
    mask: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub image_path: PathBuf,
    pub label: SoftLabel,
    pub mask_path: Option<PathBuf>,
    /// 1-based line in the manifest file.
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub classes: usize,
    pub entries: Vec<ManifestEntry>,
}

fn records(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Parses manifest text without touching the filesystem.
pub fn parse_manifest(text: &str, base_dir: &Path) -> Result<Manifest> {
    let mut lines = records(text);
    let (header_line, header) = lines
        .next()
        .ok_or(PipelineError::Parse { line: 1, message: "manifest is empty".into() })?;
    let header: RawHeader = serde_json::from_str(header)
        .map_err(|e| PipelineError::Parse { line: header_line, message: format!("bad header: {e}") })?;
    if header.version != MANIFEST_VERSION {
        return Err(PipelineError::Validation {
            line: header_line,
            message: format!("unsupported manifest version {}", header.version),
        });
    }
    if header.classes == 0 {
        return Err(PipelineError::Validation { line: header_line, message: "class count must be positive".into() });
    }

    let resolve = |p: PathBuf| if p.is_absolute() { p } else { base_dir.join(p) };
    let mut entries = Vec::new();
    for (line, record) in lines {
        let raw: RawEntry = serde_json::from_str(record)
            .map_err(|e| PipelineError::Parse { line, message: e.to_string() })?;
        let label = match raw.label {
            RawLabel::Index(k) if k >= header.classes => {
                return Err(PipelineError::Validation {
                    line,
                    message: format!("label index {k} is not below the class count {}", header.classes),
                })
            }
            RawLabel::Index(k) => SoftLabel::one_hot(k, header.classes),
            RawLabel::Soft(p) if p.len() != header.classes => {
                return Err(PipelineError::Validation {
                    line,
                    message: format!("soft label has {} entries, expected {}", p.len(), header.classes),
                })
            }
            RawLabel::Soft(p) => SoftLabel::new(p),
        }
        .map_err(|e| PipelineError::Validation { line, message: e.to_string() })?;
        entries.push(ManifestEntry {
            image_path: resolve(raw.image),
            label,
            mask_path: raw.mask.map(resolve),
            line,
        });
    }
    if entries.is_empty() {
        return Err(PipelineError::Validation { line: header_line, message: "manifest lists no images".into() });
    }
    Ok(Manifest { classes: header.classes, entries })
}

/// Reads and parses a manifest and checks that every referenced file exists.
pub fn load_manifest(path: &Path) -> Result<Manifest> {
    let text = fs::read_to_string(path).map_err(|e| PipelineError::io(path, e))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let manifest = parse_manifest(&text, base)?;
    for entry in &manifest.entries {
        for file in std::iter::once(&entry.image_path).chain(entry.mask_path.as_ref()) {
            fs::metadata(file).map_err(|e| PipelineError::io(file, e))?;
        }
    }
    Ok(manifest)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputHeader {
    pub version: u32,
    pub classes: usize,
    pub mode: Mode,
    pub seed: u64,
    pub beta: f64,
    pub alpha: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub phase_source: Option<PhaseSource>,
    pub items: usize,
}

/// One line of the output manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub index: usize,
    pub partner: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub image: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda_v: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda_delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t: Option<f64>,
    /// Realized share of the first image (CutMix only).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda_actual: Option<f64>,
    #[serde(rename = "box", skip_serializing_if = "Option::is_none", default)]
    pub cut: Option<CutBox>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub label: Option<SoftLabel>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

impl OutputRecord {
    pub(crate) fn failed(index: usize, partner: usize, error: String) -> Self {
        Self {
            index,
            partner,
            image: None,
            lambda_v: None,
            lambda_delta: None,
            alpha: None,
            t: None,
            lambda_actual: None,
            cut: None,
            label: None,
            error: Some(error),
        }
    }
}
