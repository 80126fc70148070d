//! Style-based decoupled mixing built on adaptive instance normalization.
//!
//! The operators work on any `C`-channel tensor. Here they are applied to
//! images directly; in a network they would act on feature maps.

use crate::error::{check_unit, MixError, Result};
use crate::label::SoftLabel;
use crate::mix::decoupled_label;
use crate::params::MixParams;
use crate::tensor::ImageTensor;

/// Added to the content standard deviation before dividing. Small enough
/// that `adain(u, u)` stays within 1e-5 of `u` and statistics transfer within
/// 1e-4 whenever every content channel has σ > 1e-3.
pub const ADAIN_EPSILON: f64 = 1e-8;

/// Per-channel spatial mean and population standard deviation.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelStats {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

pub fn channel_stats(u: &ImageTensor) -> ChannelStats {
    let n = u.plane_len() as f64;
    let (mean, std) = (0..u.channels())
        .map(|c| {
            let plane = u.plane(c);
            let mean = plane.iter().sum::<f64>() / n;
            let var = plane.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
            (mean, var.sqrt())
        })
        .unzip();
    ChannelStats { mean, std }
}

/// Content of `u_i` rendered with the per-channel statistics of `u_j`.
pub fn adain(u_i: &ImageTensor, u_j: &ImageTensor) -> Result<ImageTensor> {
    u_i.ensure_same_shape(u_j)?;
    let content = channel_stats(u_i);
    let style = channel_stats(u_j);
    let (h, w, c) = u_i.shape();
    let mut out = Vec::with_capacity(u_i.data().len());
    for ch in 0..c {
        let gain = style.std[ch] / (content.std[ch] + ADAIN_EPSILON);
        let (mu_c, mu_s) = (content.mean[ch], style.mean[ch]);
        out.extend(u_i.plane(ch).iter().map(|v| gain * (v - mu_c) + mu_s));
    }
    ImageTensor::new(h, w, c, out)
}

/// The four content/style combinations of a pair. `ij` carries the content
/// of `u_i` and the style of `u_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct StyleFeatures {
    pub ii: ImageTensor,
    pub jj: ImageTensor,
    pub ij: ImageTensor,
    pub ji: ImageTensor,
}

pub fn style_features(u_i: &ImageTensor, u_j: &ImageTensor) -> Result<StyleFeatures> {
    u_i.ensure_same_shape(u_j)?;
    Ok(StyleFeatures {
        ii: adain(u_i, u_i)?,
        jj: adain(u_j, u_j)?,
        ij: adain(u_i, u_j)?,
        ji: adain(u_j, u_i)?,
    })
}

/// `t·u_ii + (λ_v − t)·u_ij + (1 − λ_v)·u_jj`.
pub fn style_common(f: &StyleFeatures, lambda_v: f64, t: f64) -> Result<ImageTensor> {
    check_unit("lambda_v", lambda_v)?;
    if !(0.0..=lambda_v).contains(&t) {
        return Err(MixError::Parameter(format!("style t must lie in [0, {lambda_v}], got {t}")));
    }
    let (h, w, c) = f.ii.shape();
    let data = f
        .ii
        .data()
        .iter()
        .zip(f.ij.data())
        .zip(f.jj.data())
        .map(|((ii, ij), jj)| t * ii + (lambda_v - t) * ij + (1.0 - lambda_v) * jj)
        .collect();
    ImageTensor::new(h, w, c, data)
}

/// Style residual `u_ji − u_jj`.
pub fn style_noise(f: &StyleFeatures) -> Result<ImageTensor> {
    f.ji.zip_map(&f.jj, |a, b| a - b)
}

/// Mix of the noise-prone parts. Both operands equal the same residual, so
/// the result is that residual whatever `lambda_delta` is.
pub fn style_noise_mix(f: &StyleFeatures, lambda_delta: f64) -> Result<ImageTensor> {
    check_unit("lambda_delta", lambda_delta)?;
    style_noise(f)
}

/// Unclamped output `common + (1 − α)·noise`.
pub fn style_compose(u_i: &ImageTensor, u_j: &ImageTensor, params: &MixParams) -> Result<ImageTensor> {
    params.validate()?;
    let f = style_features(u_i, u_j)?;
    let common = style_common(&f, params.lambda_v, params.style_t)?;
    if params.alpha == 1.0 {
        return Ok(common);
    }
    let noise = style_noise_mix(&f, params.lambda_delta)?;
    let keep = 1.0 - params.alpha;
    common.zip_map(&noise, |a, d| a + keep * d)
}

pub fn style_mixup(
    u_i: &ImageTensor,
    u_j: &ImageTensor,
    y_i: &SoftLabel,
    y_j: &SoftLabel,
    params: &MixParams,
) -> Result<(ImageTensor, SoftLabel)> {
    let label = decoupled_label(y_i, y_j, params.lambda_v, params.lambda_delta, params.alpha)?;
    let image = style_compose(u_i, u_j, params)?.clamped();
    Ok((image, label))
}
