//! Frequency-aware decoupled mixing: mix amplitude spectra band by band and
//! invert with one operand's phase.

use serde::{Deserialize, Serialize};

use super::{amplitude, dft2, low_freq_mask, phase, real_inverse, Spectrum};
use crate::error::{MixError, Result};
use crate::label::SoftLabel;
use crate::mix::{mix_labels, weights};
use crate::params::MixParams;
use crate::tensor::ImageTensor;

/// Largest imaginary residue accepted after inverting a mixed spectrum.
pub const MIXED_IMAG_TOLERANCE: f64 = 1e-3;

/// Which operand lends its phase to the mixed amplitude.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseSource {
    #[default]
    First,
    Second,
}

impl PhaseSource {
    pub fn swapped(self) -> Self {
        match self {
            PhaseSource::First => PhaseSource::Second,
            PhaseSource::Second => PhaseSource::First,
        }
    }
}

impl std::str::FromStr for PhaseSource {
    type Err = MixError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first" => Ok(PhaseSource::First),
            "second" => Ok(PhaseSource::Second),
            other => Err(MixError::Parameter(format!("unknown phase source '{other}'"))),
        }
    }
}

/// The mixed image before clamping.
///
/// Amplitudes are mixed with `lambda_v` inside the centred low band of
/// fraction `alpha` and with `lambda_delta` outside it. Both input spectra
/// are projected onto exact conjugate symmetry first, so the mixed spectrum
/// inverts to a real image up to rounding.
pub fn fd_compose(
    x_i: &ImageTensor,
    x_j: &ImageTensor,
    params: &MixParams,
    phase_source: PhaseSource,
) -> Result<ImageTensor> {
    x_i.ensure_same_shape(x_j)?;
    params.validate()?;
    let (h, w, c) = x_i.shape();
    let spec_i = dft2(x_i).hermitian_part();
    let spec_j = dft2(x_j).hermitian_part();
    let amp_i = amplitude(&spec_i);
    let amp_j = amplitude(&spec_j);
    let angle = match phase_source {
        PhaseSource::First => phase(&spec_i),
        PhaseSource::Second => phase(&spec_j),
    };
    let band = low_freq_mask(h, w, params.alpha)?;
    let (vi, vj) = weights(params.lambda_v);
    let (di, dj) = weights(params.lambda_delta);

    let plane = h * w;
    let mut mixed = vec![0.0; plane * c];
    for u in 0..h {
        for v in 0..w {
            let (lo, hi) = weights(band.symmetric_weight(u, v));
            for ch in 0..c {
                let k = ch * plane + u * w + v;
                let common = vi * amp_i[k] + vj * amp_j[k];
                let noise = di * amp_i[k] + dj * amp_j[k];
                mixed[k] = lo * common + hi * noise;
            }
        }
    }
    let spectrum = Spectrum::from_polar(h, w, c, &mixed, &angle)?;
    real_inverse(&spectrum, MIXED_IMAG_TOLERANCE).map_err(|residue| {
        MixError::NumericalIntegrity(format!(
            "mixed spectrum inverted with imaginary residue {residue:e}"
        ))
    })
}

/// Frequency-aware decoupled mixup. The label follows the common-pattern
/// ratio: `mix_labels(y_i, y_j, lambda_v)`.
pub fn fd_mixup(
    x_i: &ImageTensor,
    x_j: &ImageTensor,
    y_i: &SoftLabel,
    y_j: &SoftLabel,
    params: &MixParams,
    phase_source: PhaseSource,
) -> Result<(ImageTensor, SoftLabel)> {
    let label = mix_labels(y_i, y_j, params.lambda_v)?;
    let image = fd_compose(x_i, x_j, params, phase_source)?.clamped();
    Ok((image, label))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn random_image(rng: &mut RngStream, h: usize, w: usize, c: usize) -> ImageTensor {
        ImageTensor::from_fn(h, w, c, |_, _, _| rng.uniform()).unwrap()
    }

    fn labels() -> (SoftLabel, SoftLabel) {
        (SoftLabel::one_hot(0, 3).unwrap(), SoftLabel::one_hot(2, 3).unwrap())
    }

    #[test]
    fn full_ratio_returns_first_image() {
        let mut rng = RngStream::new(20, 0);
        let (ya, yb) = labels();
        for (h, w) in [(16, 16), (12, 9)] {
            let a = random_image(&mut rng, h, w, 3);
            let b = random_image(&mut rng, h, w, 3);
            for alpha in [0.0, 0.2, 0.6, 1.0] {
                let p = MixParams::new(1.0, 1.0, alpha).unwrap();
                let (out, y) = fd_mixup(&a, &b, &ya, &yb, &p, PhaseSource::First).unwrap();
                assert!(out.max_abs_diff(&a).unwrap() < 1e-5);
                assert_eq!(y, ya);
            }
        }
    }

    #[test]
    fn identical_operands_are_fixed_points() {
        let mut rng = RngStream::new(21, 0);
        let a = random_image(&mut rng, 8, 12, 3);
        let (ya, _) = labels();
        for _ in 0..20 {
            let p = MixParams::new(rng.uniform(), rng.uniform(), rng.uniform()).unwrap();
            let src = if rng.uniform() < 0.5 { PhaseSource::First } else { PhaseSource::Second };
            let (out, y) = fd_mixup(&a, &a, &ya, &ya, &p, src).unwrap();
            assert!(out.max_abs_diff(&a).unwrap() < 1e-5);
            assert_eq!(y, ya);
        }
    }

    #[test]
    fn full_band_half_ratio_mixes_amplitude_and_keeps_phase() {
        let mut rng = RngStream::new(22, 0);
        let a = random_image(&mut rng, 16, 16, 1);
        let b = random_image(&mut rng, 16, 16, 1);
        let p = MixParams::new(0.5, 0.3, 1.0).unwrap();
        let pre = fd_compose(&a, &b, &p, PhaseSource::First).unwrap();
        let out = dft2(&pre);
        let (amp_out, amp_a, amp_b) = (amplitude(&out), amplitude(&dft2(&a)), amplitude(&dft2(&b)));
        let (ph_out, ph_a) = (phase(&out), phase(&dft2(&a)));
        for k in 0..256 {
            assert!((amp_out[k] - (0.5 * amp_a[k] + 0.5 * amp_b[k])).abs() < 1e-6);
            if amp_out[k] > 1e-9 {
                let d = (ph_out[k] - ph_a[k]).rem_euclid(2.0 * PI);
                assert!(d.min(2.0 * PI - d) < 1e-6, "bin {k}");
            }
        }
    }

    #[test]
    fn low_band_only_keeps_high_frequencies_of_first() {
        // lambda_delta = 1 keeps x_i's high band; lambda_v = 0 takes x_j's low band amplitude
        let mut rng = RngStream::new(23, 0);
        let a = random_image(&mut rng, 8, 8, 1);
        let b = random_image(&mut rng, 8, 8, 1);
        let p = MixParams::new(0.0, 1.0, 0.25).unwrap();
        let out = dft2(&fd_compose(&a, &b, &p, PhaseSource::First).unwrap());
        let amp = amplitude(&out);
        let (amp_a, amp_b) = (amplitude(&dft2(&a)), amplitude(&dft2(&b)));
        let band = low_freq_mask(8, 8, 0.25).unwrap();
        for u in 0..8 {
            for v in 0..8 {
                let k = u * 8 + v;
                match band.symmetric_weight(u, v) {
                    1.0 => assert!((amp[k] - amp_b[k]).abs() < 1e-9),
                    0.0 => assert!((amp[k] - amp_a[k]).abs() < 1e-9),
                    _ => assert!((amp[k] - 0.5 * (amp_a[k] + amp_b[k])).abs() < 1e-9),
                }
            }
        }
    }

    #[test]
    fn constant_phase_source_does_not_trip_integrity_check() {
        let mut rng = RngStream::new(24, 0);
        let flat = ImageTensor::filled(16, 16, 3, 0.4).unwrap();
        let busy = random_image(&mut rng, 16, 16, 3);
        let p = MixParams::new(0.3, 0.7, 0.6).unwrap();
        let (out, _) = fd_mixup(&flat, &busy, &labels().0, &labels().1, &p, PhaseSource::First).unwrap();
        assert!(out.data().iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn shape_mismatch() {
        let a = ImageTensor::filled(4, 4, 1, 0.1).unwrap();
        let b = ImageTensor::filled(4, 4, 3, 0.1).unwrap();
        let p = MixParams::new(0.5, 0.5, 0.5).unwrap();
        assert!(matches!(fd_compose(&a, &b, &p, PhaseSource::First), Err(MixError::Dimension(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn swap_symmetry_and_range(
            seed in any::<u64>(),
            lv in 0.0f64..=1.0,
            ld in 0.0f64..=1.0,
            alpha in 0.0f64..=1.0,
            h in 1usize..12,
            w in 1usize..12,
            first in any::<bool>(),
        ) {
            let mut rng = RngStream::new(seed, 0);
            let a = random_image(&mut rng, h, w, 3);
            let b = random_image(&mut rng, h, w, 3);
            let (ya, yb) = labels();
            let src = if first { PhaseSource::First } else { PhaseSource::Second };
            let p = MixParams::new(lv, ld, alpha).unwrap();
            let q = MixParams::new(1.0 - lv, 1.0 - ld, alpha).unwrap();
            let (out, _) = fd_mixup(&a, &b, &ya, &yb, &p, src).unwrap();
            let (swapped, _) = fd_mixup(&b, &a, &yb, &ya, &q, src.swapped()).unwrap();
            prop_assert!(out.max_abs_diff(&swapped).unwrap() < 1e-6);
            prop_assert!(out.data().iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }
}
