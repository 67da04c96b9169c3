//! Exact densities `|subset| / |group|`.
//!
//! Verdicts in this crate never touch floating point. The fraction type is
//! generic over the integer scalar; the crate root fixes `i64` as the working
//! type, which is signed because some lower bounds go negative.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::FromPrimitive;

/// Reduced fraction with positive denominator.
pub type DensityFraction<T> = Ratio<T>;

/// `count / total` in lowest terms.
pub fn ratio_of<T>(count: usize, total: usize) -> DensityFraction<T>
where
    T: Clone + Integer + FromPrimitive,
{
    let num = T::from_usize(count).expect("count fits the scalar type");
    let den = T::from_usize(total).expect("total fits the scalar type");
    Ratio::new(num, den)
}

/// Always `p/q`, including `1/1` and `0/1`.
pub fn fraction_string<T: Clone + Integer + std::fmt::Display>(value: &DensityFraction<T>) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn parse_fraction<T>(text: &str) -> Option<DensityFraction<T>>
where
    T: Clone + Integer + std::str::FromStr,
{
    let (p, q) = text.split_once('/')?;
    let p: T = p.trim().parse().ok()?;
    let q: T = q.trim().parse().ok()?;
    if q.is_zero() {
        return None;
    }
    Some(Ratio::new(p, q))
}

/// Serde adapter writing densities as `"p/q"` strings.
pub mod as_string {
    use num_rational::Ratio;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Ratio<i64>, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&super::fraction_string(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Ratio<i64>, D::Error> {
        let text = String::deserialize(de)?;
        super::parse_fraction(&text).ok_or_else(|| serde::de::Error::custom(format!("bad fraction `{text}`")))
    }
}

/// Same as [`as_string`] for optional values.
pub mod opt_as_string {
    use num_rational::Ratio;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Option<Ratio<i64>>, ser: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) => ser.serialize_str(&super::fraction_string(v)),
            None => ser.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Option<Ratio<i64>>, D::Error> {
        let text = Option::<String>::deserialize(de)?;
        text.map(|t| super::parse_fraction(&t).ok_or_else(|| serde::de::Error::custom(format!("bad fraction `{t}`"))))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_and_formatted() {
        let d: DensityFraction<i64> = ratio_of(6, 8);
        assert_eq!(fraction_string(&d), "3/4");
        let one: DensityFraction<u32> = ratio_of(5, 5);
        assert_eq!(fraction_string(&one), "1/1");
        assert_eq!(parse_fraction::<i64>("3/4"), Some(d));
        assert_eq!(parse_fraction::<i64>("3/0"), None);
    }
}
