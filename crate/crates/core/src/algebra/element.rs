use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Map, Value};

/// An element of a carrier, always in canonical form.
///
/// Finite carriers use [`Element::Index`]; the symbolic families use the
/// remaining payloads. Equality of elements is equality of payloads, so every
/// constructor below canonicalizes.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    /// Position in a finite carrier.
    Index(usize),
    /// Sorted, duplicate-free finite subset of the naturals.
    Set(Vec<u64>),
    /// Finitely supported map from naturals to levels; no zero levels stored.
    Map(BTreeMap<u64, u32>),
    /// `(0, m)` when `b == 0`, `(1, -m)` when `b == 1`.
    Lex { b: u8, m: u64 },
    /// Image of an element of the embedded algebra.
    Direct(Box<Element>),
    /// Top-complement of an element of the embedded algebra.
    Complement(Box<Element>),
}

impl Element {
    pub fn set<I: IntoIterator<Item = u64>>(items: I) -> Self {
        let mut v: Vec<u64> = items.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Element::Set(v)
    }

    pub fn map<I: IntoIterator<Item = (u64, u32)>>(items: I) -> Self {
        let mut m = BTreeMap::new();
        for (i, level) in items {
            if level != 0 {
                m.insert(i, level);
            }
        }
        Element::Map(m)
    }

    pub fn lex(b: u8, m: u64) -> Self {
        Element::Lex { b, m }
    }

    pub fn direct(x: Element) -> Self {
        Element::Direct(Box::new(x))
    }

    pub fn complement(x: Element) -> Self {
        Element::Complement(Box::new(x))
    }

    pub fn to_json(&self) -> Value {
        match self {
            Element::Index(i) => json!(i),
            Element::Set(s) => json!(s),
            Element::Map(m) => {
                let obj: Map<String, Value> =
                    m.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
                Value::Object(obj)
            }
            Element::Lex { b, m } => json!({ "b": b, "m": m }),
            Element::Direct(x) => json!({ "direct": x.to_json() }),
            Element::Complement(x) => json!({ "complement": x.to_json() }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self, String> {
        match v {
            Value::Number(n) => n
                .as_u64()
                .map(|i| Element::Index(i as usize))
                .ok_or_else(|| format!("element index must be a natural number: {v}")),
            Value::Array(items) => {
                let mut out = Vec::with_capacity(items.len());
                for it in items {
                    out.push(
                        it.as_u64()
                            .ok_or_else(|| format!("set members must be naturals: {v}"))?,
                    );
                }
                Ok(Element::set(out))
            }
            Value::Object(obj) => {
                if let Some(inner) = obj.get("direct") {
                    if obj.len() == 1 {
                        return Ok(Element::direct(Element::from_json(inner)?));
                    }
                }
                if let Some(inner) = obj.get("complement") {
                    if obj.len() == 1 {
                        return Ok(Element::complement(Element::from_json(inner)?));
                    }
                }
                if obj.len() == 2 && obj.contains_key("b") && obj.contains_key("m") {
                    let b = obj["b"]
                        .as_u64()
                        .filter(|b| *b <= 1)
                        .ok_or_else(|| format!("lex flag must be 0 or 1: {v}"))?;
                    let m = obj["m"]
                        .as_u64()
                        .ok_or_else(|| format!("lex magnitude must be a natural: {v}"))?;
                    return Ok(Element::lex(b as u8, m));
                }
                let mut pairs = Vec::with_capacity(obj.len());
                for (k, level) in obj {
                    let idx: u64 = k
                        .parse()
                        .map_err(|_| format!("map keys must be naturals: {v}"))?;
                    let level = level
                        .as_u64()
                        .and_then(|l| u32::try_from(l).ok())
                        .ok_or_else(|| format!("map levels must be naturals: {v}"))?;
                    pairs.push((idx, level));
                }
                Ok(Element::map(pairs))
            }
            _ => Err(format!("unrecognized element encoding: {v}")),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(deserializer)?;
        Element::from_json(&v).map_err(serde::de::Error::custom)
    }
}
