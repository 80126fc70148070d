//! Parameter-sweep tiling: rows vary `lambda_v`, columns vary `alpha`.

use super::batch::apply_mode;
use super::Mode;
use crate::context::MaskTensor;
use crate::error::{MixError, Result};
use crate::freq::PhaseSource;
use crate::label::SoftLabel;
use crate::params::MixParams;
use crate::rng::RngStream;
use crate::tensor::ImageTensor;

/// Separator thickness in pixels, around and between tiles.
pub const GRID_SEPARATOR: usize = 2;

/// Separator intensity (mid gray).
pub const GRID_SEPARATOR_VALUE: f64 = 0.5;

/// Everything a tile needs besides its `(lambda_v, alpha)`.
#[derive(Debug, Clone)]
pub struct GridOptions {
    pub lambda_delta: f64,
    pub phase_source: PhaseSource,
    /// Style mode uses `t = style_t_fraction · lambda_v`.
    pub style_t_fraction: f64,
    pub mask_i: Option<MaskTensor>,
    pub mask_j: Option<MaskTensor>,
    /// CutMix boxes are drawn from `(seed, row)`.
    pub seed: u64,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            lambda_delta: 1.0,
            phase_source: PhaseSource::First,
            style_t_fraction: 0.5,
            mask_i: None,
            mask_j: None,
            seed: 0,
        }
    }
}

pub fn render_grid(
    x_i: &ImageTensor,
    x_j: &ImageTensor,
    lambdas: &[f64],
    alphas: &[f64],
    mode: Mode,
    options: &GridOptions,
) -> Result<ImageTensor> {
    if lambdas.is_empty() || alphas.is_empty() {
        return Err(MixError::Parameter("grid needs at least one lambda and one alpha".into()));
    }
    x_i.ensure_same_shape(x_j)?;
    let (h, w, c) = x_i.shape();
    let s = GRID_SEPARATOR;
    let (rows, cols) = (lambdas.len(), alphas.len());
    let (gh, gw) = (rows * h + (rows + 1) * s, cols * w + (cols + 1) * s);
    let mut canvas = ImageTensor::filled(gh, gw, c, GRID_SEPARATOR_VALUE)?;
    let label = SoftLabel::one_hot(0, 1)?;

    for (r, &lambda_v) in lambdas.iter().enumerate() {
        for (col, &alpha) in alphas.iter().enumerate() {
            let params = MixParams::new(lambda_v, options.lambda_delta, alpha)?
                .with_style_t(options.style_t_fraction.clamp(0.0, 1.0) * lambda_v)?;
            let mut rng = RngStream::new(options.seed, r as u64);
            let tile = apply_mode(
                mode,
                x_i,
                x_j,
                (options.mask_i.as_ref(), options.mask_j.as_ref()),
                &label,
                &label,
                &params,
                options.phase_source,
                &mut rng,
            )?
            .image;
            let (top, left) = (s + r * (h + s), s + col * (w + s));
            for ch in 0..c {
                for y in 0..h {
                    for x in 0..w {
                        canvas.set(ch, top + y, left + x, tile.get(ch, y, x));
                    }
                }
            }
        }
    }
    Ok(canvas)
}
