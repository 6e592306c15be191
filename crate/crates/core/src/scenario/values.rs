use std::f64::consts::PI;

use num_complex::Complex64;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

/// Parses a radian value: a plain number, or a multiple of pi such as
/// `pi`, `-pi`, `0.5pi`, `2*pi`.
pub fn parse_angle(text: &str) -> Option<f64> {
    let t = text.trim();
    if let Some(coef) = t.strip_suffix("pi") {
        let coef = coef.trim().trim_end_matches('*').trim();
        let c = match coef {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other.parse::<f64>().ok()?,
        };
        return Some(c * PI).filter(|v| v.is_finite());
    }
    t.parse::<f64>().ok().filter(|v| v.is_finite())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AngleRepr {
    Number(f64),
    Text(String),
}

fn angle_from_repr<E: de::Error>(repr: AngleRepr) -> Result<f64, E> {
    match repr {
        AngleRepr::Number(v) => Ok(v),
        AngleRepr::Text(s) => parse_angle(&s)
            .ok_or_else(|| E::custom(format!("invalid angle `{s}`; use a number or a multiple of pi like `0.5pi`"))),
    }
}

pub fn de_angle<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    angle_from_repr(AngleRepr::deserialize(d)?)
}

/// A complex amplitude. Accepts `1.5`, `[re, im]`, `{"re": .., "im": ..}`
/// or `{"abs": .., "arg": ..}`; serializes as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Amplitude(pub Complex64);

#[derive(Deserialize)]
#[serde(untagged)]
enum AmplitudeRepr {
    Real(f64),
    Pair([f64; 2]),
    Cartesian { re: f64, #[serde(default)] im: f64 },
    Polar { abs: f64, #[serde(default)] arg: Option<AngleRepr> },
}

impl<'de> Deserialize<'de> for Amplitude {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = AmplitudeRepr::deserialize(d).map_err(|_| {
            de::Error::custom("expected an amplitude: number, [re, im], {re, im} or {abs, arg}")
        })?;
        let z = match repr {
            AmplitudeRepr::Real(x) => Complex64::new(x, 0.0),
            AmplitudeRepr::Pair([re, im]) => Complex64::new(re, im),
            AmplitudeRepr::Cartesian { re, im } => Complex64::new(re, im),
            AmplitudeRepr::Polar { abs, arg } => {
                let arg = match arg {
                    Some(a) => angle_from_repr(a)?,
                    None => 0.0,
                };
                Complex64::from_polar(abs, arg)
            }
        };
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(de::Error::custom("amplitude must be finite"));
        }
        Ok(Amplitude(z))
    }
}

impl Serialize for Amplitude {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.0.re, self.0.im].serialize(s)
    }
}

/// Rounds to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Fixed textual form used in CSV cells.
pub fn format_number(x: f64) -> String {
    let r = round_sig(x);
    if r == 0.0 {
        "0".to_string()
    } else {
        format!("{r}")
    }
}

/// Rounds every float in a JSON tree in place.
pub fn round_json(value: &mut serde_json::Value) {
    match value {
        serde_json::Value::Number(n) => {
            if n.is_f64() {
                if let Some(x) = n.as_f64() {
                    if let Some(r) = serde_json::Number::from_f64(round_sig(x)) {
                        *n = r;
                    }
                }
            }
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(round_json),
        serde_json::Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}
