//! Decoupled Mixup: Mixup-family image augmentation that splits each image
//! into a common pattern and a noise-prone part and mixes the two with
//! different ratios.
//!
//! Decompositions provided:
//!
//! * [`style`]: content vs. style via adaptive instance normalization,
//! * [`context`]: foreground vs. background via soft saliency masks,
//! * [`freq`]: low vs. high frequencies of the amplitude spectrum.
//!
//! Plain Mixup and the CutMix baseline live alongside the generic
//! combinators in [`mix`] and [`cutmix`]. [`pipeline`] drives them over a
//! manifest of image files.

pub mod context;
pub mod cutmix;
pub mod error;
pub mod freq;
pub mod label;
pub mod mix;
pub mod params;
pub mod pipeline;
pub mod rng;
pub mod style;
pub mod tensor;

pub use context::{cd_mixup, validate_mask, MaskTensor};
pub use cutmix::{cutmix, CutBox, CutMixOutput};
pub use error::{MixError, Result};
pub use freq::{amplitude, dft2, fd_mixup, idft2, low_freq_mask, phase, FrequencyMask, PhaseSource, Spectrum};
pub use label::SoftLabel;
pub use mix::{convex_mix, decoupled_label, decoupled_mix, mix_labels};
pub use params::{sample_lambda, MixParams};
pub use rng::RngStream;
pub use style::{adain, channel_stats, style_features, style_mixup, ChannelStats};
pub use tensor::ImageTensor;
