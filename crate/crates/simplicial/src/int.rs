//! Arbitrary-precision integer helpers.
//!
//! Small values stay inline inside [`IBig`], so the elimination loops only pay
//! for heap storage when entries actually grow.

use ibig::ops::{Abs, RemEuclid};
pub use ibig::IBig as Int;

#[inline]
pub fn int(v: i64) -> Int {
    Int::from(v)
}

#[inline]
pub fn is_zero(x: &Int) -> bool {
    x.signum() == Int::from(0u8)
}

#[inline]
pub fn is_one(x: &Int) -> bool {
    *x == Int::from(1u8)
}

#[inline]
pub fn abs(x: &Int) -> Int {
    x.abs()
}

/// Non-negative gcd; `gcd(0, 0) = 0`.
pub fn gcd(a: &Int, b: &Int) -> Int {
    if is_zero(a) && is_zero(b) {
        return Int::from(0u8);
    }
    a.gcd(b)
}

/// Least non-negative residue. A zero modulus leaves the value untouched.
pub fn reduce(x: &Int, modulus: &Int) -> Int {
    if is_zero(modulus) {
        x.clone()
    } else {
        x.rem_euclid(modulus)
    }
}

pub fn is_even(x: &Int) -> bool {
    is_zero(&reduce(x, &Int::from(2u8)))
}

/// `x mod 2` as a bit.
pub fn parity(x: &Int) -> bool {
    !is_even(x)
}

/// Converts to `i64` when it fits.
pub fn to_i64(x: &Int) -> Option<i64> {
    i64::try_from(x).ok()
}

pub fn pow2(j: u32) -> Int {
    Int::from(1u8) << (j as usize)
}

/// Serde adapter: integers are written as JSON numbers when they fit in `i64`
/// and as decimal strings otherwise.
pub mod serde_int {
    use super::Int;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Int, s: S) -> Result<S::Ok, S::Error> {
        match super::to_i64(x) {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&x.to_string()),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(i64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Int, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Int::from(v)),
            Raw::Str(s) => s
                .trim()
                .parse::<Int>()
                .map_err(|e| de::Error::custom(format!("invalid integer {s:?}: {e}"))),
        }
    }

    pub mod vec {
        use super::Int;
        use serde::{ser::SerializeSeq, Deserialize, Deserializer, Serializer};

        #[derive(Deserialize)]
        struct Wrapped(#[serde(with = "super")] Int);

        pub fn serialize<S: Serializer>(xs: &[Int], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(xs.len()))?;
            for x in xs {
                match crate::int::to_i64(x) {
                    Some(v) => seq.serialize_element(&v)?,
                    None => seq.serialize_element(&x.to_string())?,
                }
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Int>, D::Error> {
            let raw: Vec<Wrapped> = Vec::deserialize(d)?;
            Ok(raw.into_iter().map(|w| w.0).collect())
        }
    }

    pub mod mat {
        use super::Int;
        use serde::{ser::SerializeSeq, Deserialize, Deserializer, Serializer};

        #[derive(Deserialize)]
        struct Row(#[serde(with = "super::vec")] Vec<Int>);

        struct RowRef<'a>(&'a [Int]);

        impl serde::Serialize for RowRef<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                super::vec::serialize(self.0, s)
            }
        }

        pub fn serialize<S: Serializer>(rows: &[Vec<Int>], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(rows.len()))?;
            for r in rows {
                seq.serialize_element(&RowRef(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Int>>, D::Error> {
            let raw: Vec<Row> = Vec::deserialize(d)?;
            Ok(raw.into_iter().map(|r| r.0).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residues_are_non_negative() {
        assert_eq!(reduce(&int(-3), &int(4)), int(1));
        assert_eq!(reduce(&int(7), &int(0)), int(7));
        assert!(parity(&int(-1)));
        assert!(is_even(&int(-4)));
    }

    #[test]
    fn gcd_sign() {
        assert_eq!(gcd(&int(-6), &int(4)), int(2));
        assert_eq!(gcd(&int(0), &int(0)), int(0));
    }

    #[test]
    fn big_values_serialize_as_strings() {
        #[derive(serde::Serialize, serde::Deserialize, PartialEq, Debug)]
        struct W(#[serde(with = "serde_int")] Int);
        let big = pow2(80);
        let s = serde_json::to_string(&W(big.clone())).unwrap();
        assert_eq!(s, "\"1208925819614629174706176\"");
        assert_eq!(serde_json::from_str::<W>(&s).unwrap(), W(big));
        assert_eq!(serde_json::from_str::<W>("-5").unwrap(), W(int(-5)));
    }
}
