use serde::{Deserialize, Serialize};

/// Truncation window: homological degrees `0..=hdeg_max`, internal degrees
/// `0..=ideg_max`. Everything reported inside the window is exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub hdeg_max: u32,
    pub ideg_max: u32,
}

impl Window {
    pub const fn new(hdeg_max: u32, ideg_max: u32) -> Self {
        Window { hdeg_max, ideg_max }
    }

    pub fn contains(&self, hdeg: u32, ideg: u32) -> bool {
        hdeg <= self.hdeg_max && ideg <= self.ideg_max
    }
}

impl Default for Window {
    fn default() -> Self {
        Window::new(6, 12)
    }
}

/// Largest basis a single bidegree may reach before a build gives up.
pub const DEFAULT_BASIS_LIMIT: usize = 250_000;

/// Serializes bidegree-keyed counts as a list of `{hdeg, ideg, value}` records.
pub(crate) mod bigraded_entries {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Entry {
        hdeg: u32,
        ideg: u32,
        value: u64,
    }

    pub fn serialize<S: Serializer>(map: &BTreeMap<(u32, u32), u64>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(map.iter().map(|(&(hdeg, ideg), &value)| Entry { hdeg, ideg, value }))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<(u32, u32), u64>, D::Error> {
        let entries = Vec::<Entry>::deserialize(d)?;
        Ok(entries.into_iter().filter(|e| e.value != 0).map(|e| ((e.hdeg, e.ideg), e.value)).collect())
    }
}

/// `i128` values as JSON numbers when they fit in `i64`, as decimal strings
/// otherwise. Plain `i128` does not survive serde's buffering of tagged enums.
pub(crate) mod wide_int {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Wire {
        Small(i64),
        Unsigned(u64),
        Text(String),
    }

    fn to_wire(v: i128) -> Wire {
        i64::try_from(v).map_or_else(|_| Wire::Text(v.to_string()), Wire::Small)
    }

    fn from_wire<E: serde::de::Error>(w: Wire) -> Result<i128, E> {
        match w {
            Wire::Small(v) => Ok(v.into()),
            Wire::Unsigned(v) => Ok(v.into()),
            Wire::Text(s) => s.parse().map_err(|_| E::custom(format!("`{s}` is not an integer"))),
        }
    }

    pub fn serialize<S: Serializer>(v: &i128, s: S) -> Result<S::Ok, S::Error> {
        to_wire(*v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<i128, D::Error> {
        from_wire(Wire::deserialize(d)?)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[i128], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(|x| to_wire(*x)))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<i128>, D::Error> {
            Vec::<Wire>::deserialize(d)?.into_iter().map(from_wire::<D::Error>).collect()
        }
    }
}
