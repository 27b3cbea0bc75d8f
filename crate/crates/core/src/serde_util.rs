//! Serialization of big integers as decimal strings.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::ser::SerializeMap;
use serde::Serializer;

pub fn biguint<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn biguint_map<S: Serializer>(m: &BTreeMap<u64, BigUint>, s: S) -> Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(k, &v.to_string())?;
    }
    map.end()
}
