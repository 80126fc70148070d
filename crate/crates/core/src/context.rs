//! Context-aware decoupled mixing: foreground and background are mixed
//! with separate ratios using soft saliency masks.

use crate::error::{MixError, Result};
use crate::label::SoftLabel;
use crate::mix::{decoupled_label, weights};
use crate::params::MixParams;
use crate::tensor::ImageTensor;

/// How far outside `[0, 1]` a mask value may stray and still be clamped.
pub const MASK_CLAMP_TOLERANCE: f64 = 1e-3;

/// Soft foreground mask; 1 marks foreground, the background weight is `1 − m`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskTensor {
    height: usize,
    width: usize,
    values: Vec<f64>,
}

impl MaskTensor {
    /// Accepts any finite values; range checks happen in [`validate_mask`].
    pub fn new(height: usize, width: usize, values: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 || values.len() != height * width {
            return Err(MixError::Mask(format!(
                "mask {height}x{width} needs {} values, got {}",
                height * width,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(MixError::Mask("mask holds a non-finite value".into()));
        }
        Ok(Self { height, width, values })
    }

    /// All-foreground mask.
    pub fn ones(height: usize, width: usize) -> Self {
        Self { height, width, values: vec![1.0; height * width] }
    }

    pub fn zeros(height: usize, width: usize) -> Self {
        Self { height, width, values: vec![0.0; height * width] }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Checks a mask against its image, clamping values that stray by at most
/// [`MASK_CLAMP_TOLERANCE`].
pub fn validate_mask(m: MaskTensor, x: &ImageTensor) -> Result<MaskTensor> {
    if (m.height, m.width) != (x.height(), x.width()) {
        return Err(MixError::Mask(format!(
            "mask is {}x{} but image is {}x{}",
            m.height,
            m.width,
            x.height(),
            x.width()
        )));
    }
    let mut m = m;
    for (i, v) in m.values.iter_mut().enumerate() {
        if *v < -MASK_CLAMP_TOLERANCE || *v > 1.0 + MASK_CLAMP_TOLERANCE {
            return Err(MixError::Mask(format!("mask value {v} at pixel {i} is outside [0, 1]")));
        }
        *v = v.clamp(0.0, 1.0);
    }
    Ok(m)
}

/// The composite before clamping:
/// `[λ_v·m_i⊙x_i + (1−λ_v)·m_j⊙x_j] + [λ_δ·(1−m_i)⊙x_i + (1−λ_δ)·(1−m_j)⊙x_j]`.
pub fn cd_compose(
    x_i: &ImageTensor,
    m_i: &MaskTensor,
    x_j: &ImageTensor,
    m_j: &MaskTensor,
    params: &MixParams,
) -> Result<ImageTensor> {
    x_i.ensure_same_shape(x_j)?;
    params.validate()?;
    let m_i = validate_mask(m_i.clone(), x_i)?;
    let m_j = validate_mask(m_j.clone(), x_j)?;
    let (vi, vj) = weights(params.lambda_v);
    let (di, dj) = weights(params.lambda_delta);
    let plane = x_i.plane_len();
    let (h, w, c) = x_i.shape();
    let mut out = Vec::with_capacity(plane * c);
    for ch in 0..c {
        let (pi, pj) = (x_i.plane(ch), x_j.plane(ch));
        for k in 0..plane {
            let (fi, fj) = (m_i.values[k], m_j.values[k]);
            let fore = vi * (fi * pi[k]) + vj * (fj * pj[k]);
            let back = di * ((1.0 - fi) * pi[k]) + dj * ((1.0 - fj) * pj[k]);
            out.push(fore + back);
        }
    }
    ImageTensor::new(h, w, c, out)
}

/// Context-aware decoupled mixup. Labels follow
/// [`decoupled_label`]`(y_i, y_j, λ_v, λ_δ, α)`.
pub fn cd_mixup(
    x_i: &ImageTensor,
    m_i: &MaskTensor,
    x_j: &ImageTensor,
    m_j: &MaskTensor,
    y_i: &SoftLabel,
    y_j: &SoftLabel,
    params: &MixParams,
) -> Result<(ImageTensor, SoftLabel)> {
    let label = decoupled_label(y_i, y_j, params.lambda_v, params.lambda_delta, params.alpha)?;
    let image = cd_compose(x_i, m_i, x_j, m_j, params)?.clamped();
    Ok((image, label))
}
