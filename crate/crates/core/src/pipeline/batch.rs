use std::fs;
use std::time::Instant;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::{render_grid, GridOptions};
use super::imageio::{load_image, load_mask, save_image};
use super::manifest::{Manifest, OutputHeader, OutputRecord, MANIFEST_VERSION};
use super::{Mode, PipelineError, Result, RunConfig};
use crate::context::{cd_mixup, MaskTensor};
use crate::cutmix::{cutmix, CutBox};
use crate::error::MixError;
use crate::freq::{fd_mixup, PhaseSource};
use crate::label::SoftLabel;
use crate::mix::{convex_mix, mix_labels};
use crate::params::MixParams;
use crate::rng::RngStream;
use crate::style::style_mixup;
use crate::tensor::ImageTensor;

/// Counter of the stream used for pairing; item `i` uses counter `i + 1`.
const PAIRING_COUNTER: u64 = 0;

/// A seeded permutation: item `i` is mixed with item `π(i)`.
pub fn pair_items(n: usize, rng: &mut RngStream) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixOutcome {
    pub image: ImageTensor,
    pub label: SoftLabel,
    pub cut: Option<CutBox>,
    pub lambda_actual: Option<f64>,
}

/// Runs one operator on a pair. Context mode treats a missing mask as all
/// foreground; CutMix draws its box from `rng`.
#[allow(clippy::too_many_arguments)]
pub fn apply_mode(
    mode: Mode,
    x_i: &ImageTensor,
    x_j: &ImageTensor,
    masks: (Option<&MaskTensor>, Option<&MaskTensor>),
    y_i: &SoftLabel,
    y_j: &SoftLabel,
    params: &MixParams,
    phase_source: PhaseSource,
    rng: &mut RngStream,
) -> std::result::Result<MixOutcome, MixError> {
    let plain = |(image, label)| MixOutcome { image, label, cut: None, lambda_actual: None };
    match mode {
        Mode::Mixup => Ok(plain((
            convex_mix(x_i, x_j, params.lambda_v)?,
            mix_labels(y_i, y_j, params.lambda_v)?,
        ))),
        Mode::Cutmix => {
            let out = cutmix(x_i, x_j, y_i, y_j, params.lambda_v, rng)?;
            Ok(MixOutcome {
                image: out.image,
                label: out.label,
                cut: Some(out.cut),
                lambda_actual: Some(out.lambda_actual),
            })
        }
        Mode::Fd => fd_mixup(x_i, x_j, y_i, y_j, params, phase_source).map(plain),
        Mode::Cd => {
            let ones = MaskTensor::ones(x_i.height(), x_i.width());
            let m_i = masks.0.unwrap_or(&ones);
            let m_j = masks.1.unwrap_or(&ones);
            cd_mixup(x_i, m_i, x_j, m_j, y_i, y_j, params).map(plain)
        }
        Mode::Style => style_mixup(x_i, x_j, y_i, y_j, params).map(plain),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemFailure {
    pub index: usize,
    pub error: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub items: usize,
    pub succeeded: usize,
    pub failed: Vec<ItemFailure>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub grid: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub grid_error: Option<String>,
}

impl RunReport {
    pub fn all_succeeded(&self) -> bool {
        self.failed.is_empty() && self.grid_error.is_none()
    }
}

struct Pair {
    x_i: ImageTensor,
    x_j: ImageTensor,
    m_i: Option<MaskTensor>,
    m_j: Option<MaskTensor>,
}

fn load_pair(manifest: &Manifest, i: usize, j: usize, want_masks: bool) -> Result<Pair> {
    let (a, b) = (&manifest.entries[i], &manifest.entries[j]);
    let (mut x_i, mut x_j) = (load_image(&a.image_path)?, load_image(&b.image_path)?);
    if x_i.channels() != x_j.channels() {
        x_i = x_i.to_rgb();
        x_j = x_j.to_rgb();
    }
    let mask = |p: &Option<std::path::PathBuf>| -> Result<Option<MaskTensor>> {
        match p {
            Some(path) if want_masks => load_mask(path).map(Some),
            _ => Ok(None),
        }
    };
    Ok(Pair { m_i: mask(&a.mask_path)?, m_j: mask(&b.mask_path)?, x_i, x_j })
}

fn process_item(
    config: &RunConfig,
    manifest: &Manifest,
    index: usize,
    partner: usize,
) -> (OutputRecord, Vec<String>) {
    let mut warnings = Vec::new();
    let result = (|| -> Result<OutputRecord> {
        let mut rng = RngStream::new(config.seed, index as u64 + 1);
        let params = MixParams::sample(
            &mut rng,
            config.beta_shape,
            config.alpha,
            config.fixed_lambda_v,
            config.fixed_lambda_delta,
        )?;
        let pair = load_pair(manifest, index, partner, config.mode == Mode::Cd)?;
        if config.mode == Mode::Cd {
            for (k, m) in [(index, &pair.m_i), (partner, &pair.m_j)] {
                if m.is_none() {
                    warnings.push(format!(
                        "item {index}: no mask for {}, using all-foreground",
                        manifest.entries[k].image_path.display()
                    ));
                }
            }
        }
        let outcome = apply_mode(
            config.mode,
            &pair.x_i,
            &pair.x_j,
            (pair.m_i.as_ref(), pair.m_j.as_ref()),
            &manifest.entries[index].label,
            &manifest.entries[partner].label,
            &params,
            config.phase_source,
            &mut rng,
        )?;
        let name = format!("images/{index:06}.{}", config.format.extension());
        save_image(&outcome.image, &config.output_dir.join(&name), config.format)?;

        let decoupled = matches!(config.mode, Mode::Fd | Mode::Cd | Mode::Style);
        Ok(OutputRecord {
            index,
            partner,
            image: Some(name),
            lambda_v: Some(params.lambda_v),
            lambda_delta: decoupled.then_some(params.lambda_delta),
            alpha: decoupled.then_some(params.alpha),
            t: (config.mode == Mode::Style).then_some(params.style_t),
            lambda_actual: outcome.lambda_actual,
            cut: outcome.cut,
            label: Some(outcome.label),
            error: None,
        })
    })();
    let record = result.unwrap_or_else(|e| OutputRecord::failed(index, partner, e.to_string()));
    (record, warnings)
}

fn write_lines<T: Serialize>(items: impl IntoIterator<Item = T>) -> String {
    let mut out = String::new();
    for item in items {
        out.push_str(&serde_json::to_string(&item).expect("records serialize"));
        out.push('\n');
    }
    out
}

fn render_config_grid(config: &RunConfig, manifest: &Manifest, partner: usize) -> Result<String> {
    let spec = config.grid.as_ref().expect("grid configured");
    let pair = load_pair(manifest, 0, partner, config.mode == Mode::Cd)?;
    let options = GridOptions {
        lambda_delta: config.fixed_lambda_delta.unwrap_or(1.0),
        phase_source: config.phase_source,
        mask_i: pair.m_i,
        mask_j: pair.m_j,
        seed: config.seed,
        ..GridOptions::default()
    };
    let grid = render_grid(&pair.x_i, &pair.x_j, &spec.lambdas, &spec.alphas, config.mode, &options)?;
    let name = format!("grid.{}", config.format.extension());
    save_image(&grid, &config.output_dir.join(&name), config.format)?;
    Ok(name)
}

/// Mixes every manifest item with its partner and writes `images/`,
/// `manifest.jsonl`, `report.json` and, when requested, the grid image.
///
/// Per-item failures are recorded rather than raised. The returned error
/// covers invalid configuration and output-directory problems only.
pub fn run_batch(config: &RunConfig, manifest: &Manifest) -> Result<RunReport> {
    config.validate()?;
    let n = manifest.entries.len();
    if n == 0 {
        return Err(PipelineError::Config("manifest lists no images".into()));
    }
    let images_dir = config.output_dir.join("images");
    fs::create_dir_all(&images_dir).map_err(|e| PipelineError::io(&images_dir, e))?;

    let started = Instant::now();
    let partners = pair_items(n, &mut RngStream::new(config.seed, PAIRING_COUNTER));
    let work = || -> Vec<(OutputRecord, Vec<String>)> {
        (0..n)
            .into_par_iter()
            .map(|i| process_item(config, manifest, i, partners[i]))
            .collect()
    };
    let results = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| PipelineError::Config(format!("thread pool: {e}")))?
        .install(work);

    let mut report = RunReport { items: n, ..RunReport::default() };
    for (record, warnings) in &results {
        match &record.error {
            Some(err) => {
                log::warn!("item {} failed: {err}", record.index);
                report.failed.push(ItemFailure { index: record.index, error: err.clone() });
            }
            None => report.succeeded += 1,
        }
        for w in warnings {
            log::warn!("{w}");
        }
        report.warnings.extend(warnings.iter().cloned());
    }

    if config.grid.is_some() {
        match render_config_grid(config, manifest, partners[0]) {
            Ok(name) => report.grid = Some(name),
            Err(e) => {
                log::warn!("grid rendering failed: {e}");
                report.grid_error = Some(e.to_string());
            }
        }
    }

    let header = OutputHeader {
        version: MANIFEST_VERSION,
        classes: manifest.classes,
        mode: config.mode,
        seed: config.seed,
        beta: config.beta_shape,
        alpha: config.alpha,
        phase_source: (config.mode == Mode::Fd).then_some(config.phase_source),
        items: n,
    };
    let mut text = write_lines([header]);
    text.push_str(&write_lines(results.iter().map(|(r, _)| r)));
    let manifest_path = config.output_dir.join("manifest.jsonl");
    fs::write(&manifest_path, text).map_err(|e| PipelineError::io(&manifest_path, e))?;

    let report_path = config.output_dir.join("report.json");
    let report_text = serde_json::to_string_pretty(&report).expect("report serializes");
    fs::write(&report_path, report_text + "\n").map_err(|e| PipelineError::io(&report_path, e))?;

    log::info!(
        "{} mode: {}/{} items in {:.2?}",
        config.mode,
        report.succeeded,
        n,
        started.elapsed()
    );
    Ok(report)
}
