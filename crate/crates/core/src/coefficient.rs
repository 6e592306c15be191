use std::fmt;

use serde::{Serialize, Serializer};

/// Denominators at or below this magnitude make a ratio undefined.
pub const DENOMINATOR_FLOOR: f64 = 1e-14;

/// An absorption coefficient, which is undefined when the input carries no
/// intensity or no coherence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coefficient {
    Defined(f64),
    Undefined,
}

impl Coefficient {
    pub fn ratio(numerator: f64, denominator: f64) -> Self {
        if denominator.abs() <= DENOMINATOR_FLOOR || !denominator.is_finite() {
            Coefficient::Undefined
        } else {
            Coefficient::Defined(numerator / denominator)
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            Coefficient::Defined(v) => Some(v),
            Coefficient::Undefined => None,
        }
    }

    pub fn is_defined(self) -> bool {
        matches!(self, Coefficient::Defined(_))
    }

    pub fn map(self, f: impl FnOnce(f64) -> f64) -> Self {
        match self {
            Coefficient::Defined(v) => Coefficient::Defined(f(v)),
            Coefficient::Undefined => Coefficient::Undefined,
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Defined(v) => write!(f, "{v}"),
            Coefficient::Undefined => f.write_str("undefined"),
        }
    }
}

impl Serialize for Coefficient {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Coefficient::Defined(v) => serializer.serialize_f64(*v),
            Coefficient::Undefined => serializer.serialize_str("undefined"),
        }
    }
}

/// Intensity and coherence absorption of a two-mode input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AbsorptionCoefficients {
    pub intensity: Coefficient,
    pub coherence: Coefficient,
}

impl AbsorptionCoefficients {
    /// From input first moments, intensities and the cross moment `⟨a_k† a_-k⟩`.
    ///
    /// The absorbed intensity is that of the cosine wave,
    /// `I_in/2 + Re⟨a_k† a_-k⟩`, and the absorbed coherence
    /// `|⟨a_k⟩ + ⟨a_-k⟩|^2 / 2 = C_in/2 + Re(⟨a_k⟩* ⟨a_-k⟩)`.
    pub fn from_moments(
        mean_k: num_complex::Complex64,
        mean_mk: num_complex::Complex64,
        intensity_k: f64,
        intensity_mk: f64,
        cross: num_complex::Complex64,
    ) -> Self {
        let i_in = intensity_k + intensity_mk;
        let c_in = mean_k.norm_sqr() + mean_mk.norm_sqr();
        let coherent_cross = (mean_k.conj() * mean_mk).re;
        AbsorptionCoefficients {
            intensity: Coefficient::ratio(i_in / 2.0 + cross.re, i_in),
            coherence: Coefficient::ratio(c_in / 2.0 + coherent_cross, c_in),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_denominator_is_undefined() {
        assert_eq!(Coefficient::ratio(0.0, 0.0), Coefficient::Undefined);
        assert_eq!(Coefficient::ratio(1.0, 2.0), Coefficient::Defined(0.5));
        assert_eq!(
            serde_json::to_string(&Coefficient::Undefined).unwrap(),
            "\"undefined\""
        );
    }
}
