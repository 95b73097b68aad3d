//! JSON encoding of the exact types.
//!
//! * `ExactScalar`: the string `"p/q"`.
//! * `APoly`: an object `{"<a-exponent>": "p/q", ...}`.
//! * `ZLoop`: an object `{"<z-exponent>": APoly, ...}`.
//! * `BiSeries`: `{"truncation": N, "terms": [{"n": .., "m": .., "coeff": ZLoop}]}`.
//!
//! Keys and terms are emitted in increasing exponent order, so equal values
//! always serialize to identical bytes.

use std::fmt;
use std::marker::PhantomData;

use serde::de::{self, MapAccess, Visitor};
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::apoly::APoly;
use super::biseries::BiSeries;
use super::scalar::ExactScalar;
use super::zloop::ZLoop;

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

impl Serialize for APoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.len()))?;
        for (k, c) in self.terms() {
            map.serialize_entry(&k.to_string(), c)?;
        }
        map.end()
    }
}

impl Serialize for ZLoop {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        for (k, p) in self.terms() {
            map.serialize_entry(&k.to_string(), p)?;
        }
        map.end()
    }
}

/// Reads `{"<int>": V}` objects into `(exponent, V)` pairs.
struct ExponentMap<V>(PhantomData<V>);

impl<'de, V: Deserialize<'de>> Visitor<'de> for ExponentMap<V> {
    type Value = Vec<(i32, V)>;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "an object keyed by integer exponents")
    }

    fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
        let mut out = Vec::new();
        while let Some((k, v)) = access.next_entry::<String, V>()? {
            let k: i32 = k
                .parse()
                .map_err(|_| de::Error::custom(format!("bad exponent key {k:?}")))?;
            out.push((k, v));
        }
        Ok(out)
    }
}

impl<'de> Deserialize<'de> for APoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs = d.deserialize_map(ExponentMap::<ExactScalar>(PhantomData))?;
        Ok(APoly::from_terms(pairs))
    }
}

impl<'de> Deserialize<'de> for ZLoop {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs = d.deserialize_map(ExponentMap::<APoly>(PhantomData))?;
        Ok(ZLoop::from_terms(pairs))
    }
}

#[derive(Serialize)]
struct TermRef<'a> {
    n: u32,
    m: u32,
    coeff: &'a ZLoop,
}

#[derive(Deserialize)]
struct TermOwned {
    n: u32,
    m: u32,
    coeff: ZLoop,
}

impl Serialize for BiSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<TermRef> = self
            .terms()
            .map(|((n, m), coeff)| TermRef { n, m, coeff })
            .collect();
        let mut st = s.serialize_struct("BiSeries", 2)?;
        st.serialize_field("truncation", &self.truncation())?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for BiSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            truncation: u32,
            terms: Vec<TermOwned>,
        }
        let raw = Raw::deserialize(d)?;
        if let Some(t) = raw.terms.iter().find(|t| t.n + t.m > raw.truncation) {
            return Err(de::Error::custom(format!(
                "term ({}, {}) exceeds truncation {}",
                t.n, t.m, raw.truncation
            )));
        }
        Ok(BiSeries::from_terms(
            raw.truncation,
            raw.terms.into_iter().map(|t| ((t.n, t.m), t.coeff)),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::rat;

    #[test]
    fn biseries_json_shape() {
        let s = BiSeries::from_terms(
            2,
            [
                ((1, 0), ZLoop::term(-2, 0, rat(1, 1))),
                ((0, 0), ZLoop::term(0, 1, rat(-3, 4))),
            ],
        );
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(
            text,
            r#"{"truncation":2,"terms":[{"n":0,"m":0,"coeff":{"0":{"1":"-3/4"}}},{"n":1,"m":0,"coeff":{"-2":{"0":"1/1"}}}]}"#
        );
        let back: BiSeries = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn keys_are_numerically_ordered() {
        let p = APoly::from_terms([(10, rat(1, 1)), (2, rat(1, 1)), (-1, rat(1, 1))]);
        assert_eq!(
            serde_json::to_string(&p).unwrap(),
            r#"{"-1":"1/1","2":"1/1","10":"1/1"}"#
        );
    }

    #[test]
    fn rejects_terms_beyond_truncation() {
        let bad = r#"{"truncation":1,"terms":[{"n":1,"m":1,"coeff":{"0":{"0":"1"}}}]}"#;
        assert!(serde_json::from_str::<BiSeries>(bad).is_err());
    }
}
