//! CutMix baseline: paste a rectangle of one image into another.

use serde::{Deserialize, Serialize};

use crate::error::{check_unit, Result};
use crate::label::SoftLabel;
use crate::mix::mix_labels;
use crate::rng::RngStream;
use crate::tensor::ImageTensor;

/// Half-open pixel rectangle `[top, bottom) × [left, right)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutBox {
    pub top: usize,
    pub left: usize,
    pub bottom: usize,
    pub right: usize,
}

impl CutBox {
    pub fn area(&self) -> usize {
        (self.bottom - self.top) * (self.right - self.left)
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        (self.top..self.bottom).contains(&row) && (self.left..self.right).contains(&col)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutMixOutput {
    pub image: ImageTensor,
    pub label: SoftLabel,
    pub cut: CutBox,
    /// Share of the output still taken from the first image.
    pub lambda_actual: f64,
}

/// Samples a box covering roughly `1 - lambda` of an `height × width` image.
///
/// Side lengths are `round(dim · sqrt(1 − λ))`; the centre is uniform over the
/// pixel grid and the box is clipped to the image bounds.
pub fn sample_box(height: usize, width: usize, lambda: f64, rng: &mut RngStream) -> Result<CutBox> {
    check_unit("lambda", lambda)?;
    let ratio = (1.0 - lambda).sqrt();
    let cut_h = (height as f64 * ratio).round() as usize;
    let cut_w = (width as f64 * ratio).round() as usize;
    let cy = rng.index(height);
    let cx = rng.index(width);
    Ok(CutBox {
        top: cy.saturating_sub(cut_h / 2),
        left: cx.saturating_sub(cut_w / 2),
        bottom: (cy + cut_h - cut_h / 2).min(height),
        right: (cx + cut_w - cut_w / 2).min(width),
    })
}

/// Copies `cut` from `x_j` into `x_i` and mixes labels by the realized area ratio.
pub fn cutmix_with_box(
    x_i: &ImageTensor,
    x_j: &ImageTensor,
    y_i: &SoftLabel,
    y_j: &SoftLabel,
    cut: CutBox,
) -> Result<CutMixOutput> {
    x_i.ensure_same_shape(x_j)?;
    let (h, w, c) = x_i.shape();
    let cut = CutBox {
        top: cut.top.min(h),
        left: cut.left.min(w),
        bottom: cut.bottom.clamp(cut.top.min(h), h),
        right: cut.right.clamp(cut.left.min(w), w),
    };
    let mut image = x_i.clone();
    for ch in 0..c {
        for row in cut.top..cut.bottom {
            for col in cut.left..cut.right {
                image.set(ch, row, col, x_j.get(ch, row, col));
            }
        }
    }
    let lambda_actual = 1.0 - cut.area() as f64 / (h * w) as f64;
    let label = mix_labels(y_i, y_j, lambda_actual)?;
    Ok(CutMixOutput { image, label, cut, lambda_actual })
}

pub fn cutmix(
    x_i: &ImageTensor,
    x_j: &ImageTensor,
    y_i: &SoftLabel,
    y_j: &SoftLabel,
    lambda: f64,
    rng: &mut RngStream,
) -> Result<CutMixOutput> {
    x_i.ensure_same_shape(x_j)?;
    y_i.ensure_same_len(y_j)?;
    let cut = sample_box(x_i.height(), x_i.width(), lambda, rng)?;
    cutmix_with_box(x_i, x_j, y_i, y_j, cut)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::MixError;

    fn pair(h: usize, w: usize) -> (ImageTensor, ImageTensor) {
        (
            ImageTensor::filled(h, w, 3, 0.25).unwrap(),
            ImageTensor::filled(h, w, 3, 0.75).unwrap(),
        )
    }

    fn labels() -> (SoftLabel, SoftLabel) {
        (SoftLabel::one_hot(0, 2).unwrap(), SoftLabel::one_hot(1, 2).unwrap())
    }

    #[test]
    fn lambda_one_is_identity() {
        let (a, b) = pair(8, 8);
        let (ya, yb) = labels();
        let out = cutmix(&a, &b, &ya, &yb, 1.0, &mut RngStream::new(1, 1)).unwrap();
        assert_eq!(out.image, a);
        assert_eq!(out.label, ya);
        assert_eq!(out.cut.area(), 0);
    }

    #[test]
    fn full_box_gives_second_image() {
        let (a, b) = pair(6, 5);
        let (ya, yb) = labels();
        let full = CutBox { top: 0, left: 0, bottom: 6, right: 5 };
        let out = cutmix_with_box(&a, &b, &ya, &yb, full).unwrap();
        assert_eq!(out.image, b);
        assert_eq!(out.label, yb);
        // a 1x1 image at lambda = 0 always gets the full box
        let (a, b) = pair(1, 1);
        let out = cutmix(&a, &b, &ya, &yb, 0.0, &mut RngStream::new(3, 0)).unwrap();
        assert_eq!(out.image, b);
    }

    #[test]
    fn label_weight_equals_area_complement() {
        let (a, b) = pair(13, 17);
        let (ya, yb) = labels();
        let mut rng = RngStream::new(99, 4);
        for _ in 0..100 {
            let lam = rng.uniform();
            let out = cutmix(&a, &b, &ya, &yb, lam, &mut rng).unwrap();
            let c = out.cut;
            let area = (c.bottom - c.top) * (c.right - c.left);
            let expected = 1.0 - area as f64 / (13.0 * 17.0);
            assert_eq!(out.lambda_actual, expected);
            assert_eq!(out.label.probs()[0], expected);
            // pixels inside the box come from b, outside from a
            for row in 0..13 {
                for col in 0..17 {
                    let v = out.image.get(1, row, col);
                    assert_eq!(v, if c.contains(row, col) { 0.75 } else { 0.25 });
                }
            }
        }
    }

    #[test]
    fn shape_mismatch() {
        let (a, _) = pair(4, 4);
        let (_, b) = pair(4, 5);
        let (ya, yb) = labels();
        assert!(matches!(
            cutmix(&a, &b, &ya, &yb, 0.5, &mut RngStream::new(0, 0)),
            Err(MixError::Dimension(_))
        ));
    }
}
