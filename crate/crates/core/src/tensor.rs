//! Planar floating-point image storage.

use crate::error::{MixError, Result};

/// An `height × width × channels` image with values nominally in `[0, 1]`.
///
/// Data is stored channel-major: plane `c` occupies
/// `data[c * height * width .. (c + 1) * height * width]`, and each plane is
/// row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageTensor {
    height: usize,
    width: usize,
    channels: usize,
    data: Vec<f64>,
}

impl ImageTensor {
    pub fn new(height: usize, width: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(MixError::Dimension(format!(
                "image must be at least 1x1, got {height}x{width}"
            )));
        }
        if channels != 1 && channels != 3 {
            return Err(MixError::Dimension(format!(
                "image must have 1 or 3 channels, got {channels}"
            )));
        }
        if data.len() != height * width * channels {
            return Err(MixError::Dimension(format!(
                "expected {} values for {height}x{width}x{channels}, got {}",
                height * width * channels,
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(MixError::InvalidValue(format!("non-finite value at index {i}")));
        }
        Ok(Self { height, width, channels, data })
    }

    /// An image with every element equal to `value`.
    pub fn filled(height: usize, width: usize, channels: usize, value: f64) -> Result<Self> {
        Self::new(height, width, channels, vec![value; height * width * channels])
    }

    /// Builds an image by evaluating `f(channel, row, col)` at every element.
    pub fn from_fn(
        height: usize,
        width: usize,
        channels: usize,
        mut f: impl FnMut(usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(height * width * channels);
        for c in 0..channels {
            for h in 0..height {
                for w in 0..width {
                    data.push(f(c, h, w));
                }
            }
        }
        Self::new(height, width, channels, data)
    }

    /// Internal constructor for buffers produced by arithmetic on valid images.
    pub(crate) fn from_parts(height: usize, width: usize, channels: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), height * width * channels);
        Self { height, width, channels, data }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.height, self.width, self.channels)
    }

    /// Number of pixels in a single plane.
    pub fn plane_len(&self) -> usize {
        self.height * self.width
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn plane(&self, channel: usize) -> &[f64] {
        let n = self.plane_len();
        &self.data[channel * n..(channel + 1) * n]
    }

    pub fn get(&self, channel: usize, row: usize, col: usize) -> f64 {
        self.data[channel * self.plane_len() + row * self.width + col]
    }

    pub(crate) fn set(&mut self, channel: usize, row: usize, col: usize, value: f64) {
        let n = self.plane_len();
        self.data[channel * n + row * self.width + col] = value;
    }

    pub fn ensure_same_shape(&self, other: &ImageTensor) -> Result<()> {
        if self.shape() == other.shape() {
            Ok(())
        } else {
            Err(MixError::Dimension(format!(
                "shape mismatch: {:?} vs {:?}",
                self.shape(),
                other.shape()
            )))
        }
    }

    /// Clamps every element into `[0, 1]`.
    pub fn clamped(mut self) -> Self {
        for v in &mut self.data {
            *v = v.clamp(0.0, 1.0);
        }
        self
    }

    /// Replicates a single-channel image into three channels. Three-channel
    /// images are returned unchanged.
    pub fn to_rgb(&self) -> ImageTensor {
        if self.channels == 3 {
            return self.clone();
        }
        let mut data = Vec::with_capacity(self.data.len() * 3);
        for _ in 0..3 {
            data.extend_from_slice(&self.data);
        }
        Self::from_parts(self.height, self.width, 3, data)
    }

    /// Largest absolute elementwise difference between two equally shaped images.
    pub fn max_abs_diff(&self, other: &ImageTensor) -> Result<f64> {
        self.ensure_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Applies `f` elementwise across two equally shaped images.
    pub(crate) fn zip_map(
        &self,
        other: &ImageTensor,
        mut f: impl FnMut(f64, f64) -> f64,
    ) -> Result<ImageTensor> {
        self.ensure_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self::from_parts(self.height, self.width, self.channels, data))
    }
}
