//! JSON interchange formats.
//!
//! Family: `{"n": 4, "sets": [[1, 2], [3, 4]]}` with 1-based ascending
//! elements and sets ordered by mask value. Pair:
//! `{"n": 4, "c": 1, "d": 2, "A": <family>, "B": <family>}`.
//! Serialization is canonical, so equal values always produce equal bytes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{CrossPair, Fraction, SetFamily};
use crate::gf2::mask_elements;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyJson {
    pub n: usize,
    pub sets: Vec<Vec<usize>>,
}

impl From<SetFamily> for FamilyJson {
    fn from(f: SetFamily) -> Self {
        Self {
            n: f.n(),
            sets: f.masks().iter().map(|&m| mask_elements(m)).collect(),
        }
    }
}

impl TryFrom<FamilyJson> for SetFamily {
    type Error = Error;

    fn try_from(j: FamilyJson) -> Result<Self> {
        SetFamily::from_element_lists(j.n, &j.sets)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairJson {
    pub n: usize,
    pub c: u32,
    pub d: u32,
    #[serde(rename = "A")]
    pub a: FamilyJson,
    #[serde(rename = "B")]
    pub b: FamilyJson,
}

impl From<CrossPair> for PairJson {
    fn from(p: CrossPair) -> Self {
        Self {
            n: p.n(),
            c: p.frac().c(),
            d: p.frac().d(),
            a: p.a().clone().into(),
            b: p.b().clone().into(),
        }
    }
}

impl TryFrom<PairJson> for CrossPair {
    type Error = Error;

    fn try_from(j: PairJson) -> Result<Self> {
        for found in [j.a.n, j.b.n] {
            if found != j.n {
                return Err(Error::SizeMismatch {
                    expected: j.n,
                    found,
                });
            }
        }
        let frac = Fraction::new(j.c, j.d)?;
        CrossPair::new(frac, j.a.try_into()?, j.b.try_into()?)
    }
}

/// Canonical single-line JSON.
pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("in-memory values always serialize")
}

pub fn family_from_json(s: &str) -> Result<SetFamily> {
    Ok(serde_json::from_str(s)?)
}

pub fn pair_from_json(s: &str) -> Result<CrossPair> {
    Ok(serde_json::from_str(s)?)
}
