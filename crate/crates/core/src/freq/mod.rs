//! Frequency-domain decomposition: 2D DFT, amplitude and phase, and the
//! low/high frequency partition.

mod fft;
mod mixing;

pub use mixing::{fd_compose, fd_mixup, PhaseSource, MIXED_IMAG_TOLERANCE};

use num_complex::Complex64;

use crate::error::{check_unit, MixError, Result};
use crate::tensor::ImageTensor;
use fft::{Direction, Plan};

/// Largest imaginary residue [`idft2`] tolerates before refusing to drop it.
pub const INVERSE_IMAG_TOLERANCE: f64 = 1e-6;

/// Complex `height × width × channels` planes, laid out like [`ImageTensor`].
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    height: usize,
    width: usize,
    channels: usize,
    real: Vec<f64>,
    imag: Vec<f64>,
}

impl Spectrum {
    pub fn new(height: usize, width: usize, channels: usize, real: Vec<f64>, imag: Vec<f64>) -> Result<Self> {
        let n = height * width * channels;
        if n == 0 || real.len() != n || imag.len() != n {
            return Err(MixError::Dimension(format!(
                "spectrum {height}x{width}x{channels} needs {n} real and imaginary values, got {} and {}",
                real.len(),
                imag.len()
            )));
        }
        if real.iter().chain(&imag).any(|v| !v.is_finite()) {
            return Err(MixError::InvalidValue("spectrum holds a non-finite value".into()));
        }
        Ok(Self { height, width, channels, real, imag })
    }

    /// Rebuilds a spectrum from per-bin magnitude and angle.
    pub fn from_polar(
        height: usize,
        width: usize,
        channels: usize,
        amplitude: &[f64],
        phase: &[f64],
    ) -> Result<Self> {
        if amplitude.len() != phase.len() {
            return Err(MixError::Dimension("amplitude and phase lengths differ".into()));
        }
        let (real, imag) = amplitude
            .iter()
            .zip(phase)
            .map(|(a, p)| (a * p.cos(), a * p.sin()))
            .unzip();
        Self::new(height, width, channels, real, imag)
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

    pub fn real(&self) -> &[f64] {
        &self.real
    }

    pub fn imag(&self) -> &[f64] {
        &self.imag
    }

    pub fn index(&self, channel: usize, u: usize, v: usize) -> usize {
        channel * self.height * self.width + u * self.width + v
    }

    pub fn bin(&self, channel: usize, u: usize, v: usize) -> (f64, f64) {
        let i = self.index(channel, u, v);
        (self.real[i], self.imag[i])
    }

    /// Index of the conjugate partner `((H − u) mod H, (W − v) mod W)`.
    pub fn mirror_index(&self, channel: usize, u: usize, v: usize) -> usize {
        self.index(channel, (self.height - u) % self.height, (self.width - v) % self.width)
    }

    /// `a·self + b·other`.
    pub fn linear_combination(&self, a: f64, other: &Spectrum, b: f64) -> Result<Spectrum> {
        if self.shape() != other.shape() {
            return Err(MixError::Dimension(format!(
                "spectrum shape mismatch: {:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let comb = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| a * p + b * q).collect();
        Ok(Spectrum {
            real: comb(&self.real, &other.real),
            imag: comb(&self.imag, &other.imag),
            ..*self
        })
    }

    /// Projects onto conjugate-symmetric spectra: `(S(u) + conj(S(−u))) / 2`.
    ///
    /// A spectrum of a real image is already symmetric up to rounding; the
    /// projection makes the symmetry exact.
    pub fn hermitian_part(&self) -> Spectrum {
        let mut real = vec![0.0; self.real.len()];
        let mut imag = vec![0.0; self.imag.len()];
        for c in 0..self.channels {
            for u in 0..self.height {
                for v in 0..self.width {
                    let i = self.index(c, u, v);
                    let m = self.mirror_index(c, u, v);
                    real[i] = 0.5 * (self.real[i] + self.real[m]);
                    imag[i] = 0.5 * (self.imag[i] - self.imag[m]);
                }
            }
        }
        Spectrum { real, imag, ..*self }
    }

    /// Largest deviation from conjugate symmetry over all bins.
    pub fn symmetry_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for c in 0..self.channels {
            for u in 0..self.height {
                for v in 0..self.width {
                    let i = self.index(c, u, v);
                    let m = self.mirror_index(c, u, v);
                    worst = worst
                        .max((self.real[i] - self.real[m]).abs())
                        .max((self.imag[i] + self.imag[m]).abs());
                }
            }
        }
        worst
    }
}

fn transform(
    height: usize,
    width: usize,
    channels: usize,
    mut buf: Vec<Complex64>,
    direction: Direction,
) -> Vec<Complex64> {
    let row_plan = Plan::new(width);
    let col_plan = Plan::new(height);
    let mut scratch = Vec::new();
    let mut column = vec![Complex64::new(0.0, 0.0); col_plan.len()];
    for plane in buf.chunks_mut(height * width) {
        for row in plane.chunks_mut(width) {
            row_plan.process(row, &mut scratch, direction);
        }
        for v in 0..width {
            for (u, slot) in column.iter_mut().enumerate() {
                *slot = plane[u * width + v];
            }
            col_plan.process(&mut column, &mut scratch, direction);
            for (u, value) in column.iter().enumerate() {
                plane[u * width + v] = *value;
            }
        }
    }
    debug_assert_eq!(buf.len(), height * width * channels);
    buf
}

/// Per-channel unnormalized forward transform with kernel
/// `exp(−2πi·(h·u/H + w·v/W))`.
pub fn dft2(x: &ImageTensor) -> Spectrum {
    let (h, w, c) = x.shape();
    let buf = x.data().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let out = transform(h, w, c, buf, Direction::Forward);
    let (real, imag) = out.iter().map(|z| (z.re, z.im)).unzip();
    Spectrum { height: h, width: w, channels: c, real, imag }
}

/// Inverse transform with `1/(H·W)` normalization, keeping the complex result.
pub fn idft2_complex(s: &Spectrum) -> Spectrum {
    let (h, w, c) = s.shape();
    let buf = s.real.iter().zip(&s.imag).map(|(&re, &im)| Complex64::new(re, im)).collect();
    let out = transform(h, w, c, buf, Direction::Inverse);
    let scale = 1.0 / (h * w) as f64;
    let (real, imag) = out.iter().map(|z| (z.re * scale, z.im * scale)).unzip();
    Spectrum { height: h, width: w, channels: c, real, imag }
}

/// Takes the real part of the inverse, or returns the largest imaginary
/// residue when it exceeds `tolerance`.
pub(crate) fn real_inverse(s: &Spectrum, tolerance: f64) -> std::result::Result<ImageTensor, f64> {
    let field = idft2_complex(s);
    let residue = field.imag.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if residue > tolerance {
        return Err(residue);
    }
    Ok(ImageTensor::from_parts(s.height, s.width, s.channels, field.real))
}

/// Inverse transform back to an (unclamped) image.
///
/// The imaginary part is discarded; it must stay below
/// [`INVERSE_IMAG_TOLERANCE`], otherwise the spectrum did not come from a
/// real image and a numerical-integrity error is returned.
pub fn idft2(s: &Spectrum) -> Result<ImageTensor> {
    let image = real_inverse(s, INVERSE_IMAG_TOLERANCE).map_err(|residue| {
        MixError::NumericalIntegrity(format!(
            "inverse transform left an imaginary residue of {residue:e}"
        ))
    })?;
    let (h, w, c) = image.shape();
    ImageTensor::new(h, w, c, image.into_data())
}

/// Per-bin magnitude `sqrt(R² + I²)`.
pub fn amplitude(s: &Spectrum) -> Vec<f64> {
    s.real.iter().zip(&s.imag).map(|(re, im)| re.hypot(*im)).collect()
}

/// Per-bin angle `atan2(I, R)` in `(−π, π]`.
pub fn phase(s: &Spectrum) -> Vec<f64> {
    s.real.iter().zip(&s.imag).map(|(re, im)| im.atan2(*re)).collect()
}

/// Partition of the frequency plane into a low-frequency (common pattern)
/// region and its high-frequency complement.
///
/// The low region is a rectangle of `round(α·H) × round(α·W)` bins centred
/// on DC once the plane is shifted by half a period (DC moved to
/// `(H/2, W/2)`). Storage uses the natural, unshifted DFT order.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyMask {
    height: usize,
    width: usize,
    low: Vec<bool>,
}

/// Half-open range of shifted indices covered by a centred run of `len` bins.
fn centered_run(dim: usize, len: usize) -> std::ops::Range<usize> {
    let start = dim / 2 - len / 2;
    start..start + len
}

impl FrequencyMask {
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Whether natural-order bin `(u, v)` is low frequency.
    pub fn is_low(&self, u: usize, v: usize) -> bool {
        self.low[u * self.width + v]
    }

    /// Whether bin `(su, sv)` of the half-period-shifted plane is low frequency.
    pub fn is_low_shifted(&self, su: usize, sv: usize) -> bool {
        let u = (su + self.height - self.height / 2) % self.height;
        let v = (sv + self.width - self.width / 2) % self.width;
        self.is_low(u, v)
    }

    pub fn low_count(&self) -> usize {
        self.low.iter().filter(|b| **b).count()
    }

    /// Weight of the low band at `(u, v)`, averaged with the conjugate bin.
    ///
    /// Mixing with this weight keeps a mixed spectrum conjugate-symmetric and
    /// equals mixing with the raw mask and then keeping the real part of the
    /// inverse. Values are 0, ½ or 1; ½ only occurs on the edge of an
    /// even-sized band.
    pub fn symmetric_weight(&self, u: usize, v: usize) -> f64 {
        let mu = (self.height - u) % self.height;
        let mv = (self.width - v) % self.width;
        match (self.is_low(u, v), self.is_low(mu, mv)) {
            (true, true) => 1.0,
            (false, false) => 0.0,
            _ => 0.5,
        }
    }
}

pub fn low_freq_mask(height: usize, width: usize, alpha: f64) -> Result<FrequencyMask> {
    check_unit("alpha", alpha)?;
    if height == 0 || width == 0 {
        return Err(MixError::Dimension("frequency plane must be at least 1x1".into()));
    }
    let rows = centered_run(height, (alpha * height as f64).round() as usize);
    let cols = centered_run(width, (alpha * width as f64).round() as usize);
    let mut low = vec![false; height * width];
    for su in rows {
        let u = (su + height - height / 2) % height;
        for sv in cols.clone() {
            let v = (sv + width - width / 2) % width;
            low[u * width + v] = true;
        }
    }
    Ok(FrequencyMask { height, width, low })
}
