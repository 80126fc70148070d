use serde::{Deserialize, Serialize};

use crate::error::{MixError, Result};

/// Tolerance on the total mass of a probability vector.
pub const SIMPLEX_TOLERANCE: f64 = 1e-6;

/// A probability vector over `K` classes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SoftLabel {
    probs: Vec<f64>,
}

impl SoftLabel {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(MixError::InvalidValue("label must have at least one class".into()));
        }
        if let Some((k, p)) = probs.iter().enumerate().find(|(_, p)| !p.is_finite() || **p < 0.0) {
            return Err(MixError::InvalidValue(format!("label entry {k} is {p}")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOLERANCE {
            return Err(MixError::InvalidValue(format!("label sums to {sum}, expected 1")));
        }
        Ok(Self { probs })
    }

    /// The one-hot vector `e_class` over `classes` entries.
    pub fn one_hot(class: usize, classes: usize) -> Result<Self> {
        if class >= classes {
            return Err(MixError::InvalidValue(format!(
                "class index {class} out of range for {classes} classes"
            )));
        }
        let mut probs = vec![0.0; classes];
        probs[class] = 1.0;
        Ok(Self { probs })
    }

    pub(crate) fn from_parts(probs: Vec<f64>) -> Self {
        debug_assert!((probs.iter().sum::<f64>() - 1.0).abs() <= SIMPLEX_TOLERANCE);
        Self { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn classes(&self) -> usize {
        self.probs.len()
    }

    pub fn ensure_same_len(&self, other: &SoftLabel) -> Result<()> {
        if self.classes() == other.classes() {
            Ok(())
        } else {
            Err(MixError::Dimension(format!(
                "label length mismatch: {} vs {}",
                self.classes(),
                other.classes()
            )))
        }
    }
}

impl TryFrom<Vec<f64>> for SoftLabel {
    type Error = MixError;

    fn try_from(probs: Vec<f64>) -> Result<Self> {
        Self::new(probs)
    }
}

impl From<SoftLabel> for Vec<f64> {
    fn from(label: SoftLabel) -> Self {
        label.probs
    }
}
