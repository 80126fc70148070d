//! 8-bit image files. Floats are quantized with `round(v·255)` only here.

use std::fs;
use std::io::Cursor;
use std::path::Path;

use image::{DynamicImage, GenericImageView, ImageReader};
use serde::{Deserialize, Serialize};

use super::{PipelineError, Result};
use crate::context::MaskTensor;
use crate::tensor::ImageTensor;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ImageFormat {
    #[default]
    Png,
    /// Binary `P6` pixmap.
    Ppm,
}

impl ImageFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ImageFormat::Png => "png",
            ImageFormat::Ppm => "ppm",
        }
    }
}

impl std::str::FromStr for ImageFormat {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "png" => Ok(ImageFormat::Png),
            "ppm" => Ok(ImageFormat::Ppm),
            other => Err(PipelineError::Config(format!("unknown image format '{other}'"))),
        }
    }
}

fn decode(path: &Path) -> Result<DynamicImage> {
    let bad = |message: String| PipelineError::Image { path: path.to_path_buf(), message };
    ImageReader::open(path)
        .map_err(|e| PipelineError::io(path, e))?
        .with_guessed_format()
        .map_err(|e| PipelineError::io(path, e))?
        .decode()
        .map_err(|e| bad(e.to_string()))
}

fn quantize(v: f64) -> u8 {
    (v * 255.0).round().clamp(0.0, 255.0) as u8
}

/// Loads a PNG or PNM file. Grayscale files give one channel, everything
/// else is converted to RGB.
pub fn load_image(path: &Path) -> Result<ImageTensor> {
    let img = decode(path)?;
    let (w, h) = img.dimensions();
    let (w, h) = (w as usize, h as usize);
    let (channels, bytes) = if img.color().has_color() {
        (3, img.to_rgb8().into_raw())
    } else {
        (1, img.to_luma8().into_raw())
    };
    let mut data = vec![0.0; h * w * channels];
    for (i, b) in bytes.iter().enumerate() {
        let (pixel, c) = (i / channels, i % channels);
        data[c * h * w + pixel] = f64::from(*b) / 255.0;
    }
    Ok(ImageTensor::new(h, w, channels, data)?)
}

/// Loads a mask as 8-bit grayscale, mapping `value / 255` into `[0, 1]`.
pub fn load_mask(path: &Path) -> Result<MaskTensor> {
    let img = decode(path)?.to_luma8();
    let (w, h) = img.dimensions();
    let values = img.into_raw().into_iter().map(|b| f64::from(b) / 255.0).collect();
    Ok(MaskTensor::new(h as usize, w as usize, values)?)
}

/// Interleaved 8-bit samples, replicating gray into RGB when `rgb` is set.
fn interleave(img: &ImageTensor, rgb: bool) -> Vec<u8> {
    let (h, w, c) = img.shape();
    let out_c = if rgb { 3 } else { c };
    let mut bytes = Vec::with_capacity(h * w * out_c);
    for pixel in 0..h * w {
        for ch in 0..out_c {
            let src = if c == 1 { 0 } else { ch };
            bytes.push(quantize(img.data()[src * h * w + pixel]));
        }
    }
    bytes
}

/// Encodes an image to bytes in the requested format.
pub fn encode_image(img: &ImageTensor, format: ImageFormat) -> Result<Vec<u8>> {
    let (h, w, c) = img.shape();
    match format {
        ImageFormat::Ppm => {
            let mut out = format!("P6\n{w} {h}\n255\n").into_bytes();
            out.extend(interleave(img, true));
            Ok(out)
        }
        ImageFormat::Png => {
            let bytes = interleave(img, false);
            let color = if c == 1 { image::ExtendedColorType::L8 } else { image::ExtendedColorType::Rgb8 };
            let mut out = Cursor::new(Vec::new());
            image::write_buffer_with_format(&mut out, &bytes, w as u32, h as u32, color, image::ImageFormat::Png)
                .map_err(|e| PipelineError::Config(format!("png encoding failed: {e}")))?;
            Ok(out.into_inner())
        }
    }
}

pub fn save_image(img: &ImageTensor, path: &Path, format: ImageFormat) -> Result<()> {
    let bytes = encode_image(img, format)?;
    fs::write(path, bytes).map_err(|e| PipelineError::io(path, e))
}
