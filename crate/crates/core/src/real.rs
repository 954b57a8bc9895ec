//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating-point scalar the inference routines are generic over.
///
/// Implemented for `f32` and `f64`. Tolerances quoted in the test suites
/// (1e-12 and tighter) only hold for `f64`.
pub trait Real:
    Float + FloatConst + Sum + Debug + Display + Default + Send + Sync + Serialize + DeserializeOwned + 'static
{
    /// Converts an `f64` literal, rounding when `Self` is narrower.
    fn lit(x: f64) -> Self;

    fn from_count(n: u64) -> Self;

    fn as_f64(self) -> f64;
}

macro_rules! impl_real {
    ($t:ty) => {
        impl Real for $t {
            #[inline]
            fn lit(x: f64) -> Self {
                x as $t
            }

            #[inline]
            fn from_count(n: u64) -> Self {
                n as $t
            }

            #[inline]
            fn as_f64(self) -> f64 {
                self as f64
            }
        }
    };
}

impl_real!(f32);
impl_real!(f64);

/// Serde adapter for scalars that may legitimately be infinite (open interval
/// ends, surprisals of zero P-values). JSON has no infinity literal, so
/// non-finite values travel as the strings `"inf"`, `"-inf"` and `"nan"`.
pub mod extended {
    use super::Real;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Real, S: Serializer>(x: &T, s: S) -> Result<S::Ok, S::Error> {
        let v = x.as_f64();
        if v.is_finite() {
            s.serialize_f64(v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, T: Real, D: Deserializer<'de>>(d: D) -> Result<T, D::Error> {
        let v = match Repr::deserialize(d)? {
            Repr::Num(v) => v,
            Repr::Text(s) => match s.as_str() {
                "inf" => f64::INFINITY,
                "-inf" => f64::NEG_INFINITY,
                "nan" => f64::NAN,
                other => return Err(D::Error::custom(format!("unexpected scalar `{other}`"))),
            },
        };
        Ok(T::lit(v))
    }
}
