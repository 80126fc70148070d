//! The generic "decouple, mix, suppress" combinators.

use crate::error::{check_unit, Result};
use crate::label::SoftLabel;
use crate::tensor::ImageTensor;

/// Weights `(w_first, w_second)` for a convex combination at ratio `lambda`.
///
/// The weight at or above one half is formed first and its complement is
/// then exact, so `weights(1 - λ)` is exactly `weights(λ)` reversed. This
/// makes `convex_mix(a, b, λ) == convex_mix(b, a, 1 - λ)` bit for bit.
pub(crate) fn weights(lambda: f64) -> (f64, f64) {
    if lambda > 0.5 {
        (lambda, 1.0 - lambda)
    } else {
        let second = 1.0 - lambda;
        (1.0 - second, second)
    }
}

/// `λ·x_i + (1 − λ)·x_j`, elementwise.
pub fn convex_mix(x_i: &ImageTensor, x_j: &ImageTensor, lambda: f64) -> Result<ImageTensor> {
    check_unit("lambda", lambda)?;
    let (a, b) = weights(lambda);
    x_i.zip_map(x_j, |p, q| a * p + b * q)
}

/// `λ·y_i + (1 − λ)·y_j`.
pub fn mix_labels(y_i: &SoftLabel, y_j: &SoftLabel, lambda: f64) -> Result<SoftLabel> {
    check_unit("lambda", lambda)?;
    y_i.ensure_same_len(y_j)?;
    let (a, b) = weights(lambda);
    Ok(SoftLabel::from_parts(
        y_i.probs().iter().zip(y_j.probs()).map(|(p, q)| a * p + b * q).collect(),
    ))
}

/// Mixes common patterns with `lambda_v` and noise-prone parts with
/// `lambda_delta`, then sums the two without clamping.
pub fn decoupled_compose(
    v_i: &ImageTensor,
    delta_i: &ImageTensor,
    v_j: &ImageTensor,
    delta_j: &ImageTensor,
    lambda_v: f64,
    lambda_delta: f64,
) -> Result<ImageTensor> {
    check_unit("lambda_v", lambda_v)?;
    check_unit("lambda_delta", lambda_delta)?;
    v_i.ensure_same_shape(delta_i)?;
    v_i.ensure_same_shape(v_j)?;
    v_i.ensure_same_shape(delta_j)?;
    let (av, bv) = weights(lambda_v);
    let (ad, bd) = weights(lambda_delta);
    let data = v_i
        .data()
        .iter()
        .zip(v_j.data())
        .zip(delta_i.data().iter().zip(delta_j.data()))
        .map(|((vi, vj), (di, dj))| (av * vi + bv * vj) + (ad * di + bd * dj))
        .collect();
    let (h, w, c) = v_i.shape();
    Ok(ImageTensor::from_parts(h, w, c, data))
}

/// [`decoupled_compose`] followed by clamping into `[0, 1]`.
pub fn decoupled_mix(
    v_i: &ImageTensor,
    delta_i: &ImageTensor,
    v_j: &ImageTensor,
    delta_j: &ImageTensor,
    lambda_v: f64,
    lambda_delta: f64,
) -> Result<ImageTensor> {
    Ok(decoupled_compose(v_i, delta_i, v_j, delta_j, lambda_v, lambda_delta)?.clamped())
}

/// `α·M_{λ_v}(y_i, y_j) + (1 − α)·M_{λ_δ}(y_i, y_j)`.
pub fn decoupled_label(
    y_i: &SoftLabel,
    y_j: &SoftLabel,
    lambda_v: f64,
    lambda_delta: f64,
    alpha: f64,
) -> Result<SoftLabel> {
    check_unit("alpha", alpha)?;
    let common = mix_labels(y_i, y_j, lambda_v)?;
    let noise = mix_labels(y_i, y_j, lambda_delta)?;
    let (a, b) = weights(alpha);
    Ok(SoftLabel::from_parts(
        common.probs().iter().zip(noise.probs()).map(|(p, q)| a * p + b * q).collect(),
    ))
}
