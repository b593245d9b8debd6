//! JSON inputs: tuples, radii and subset systems.

use num_rational::BigRational;
use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::periodic::PeriodicTuple;
use crate::scalar::parse_rational;
use crate::sums::{RadiusTuple, SubsetCollectionSystem};

#[derive(Deserialize)]
struct TupleFile {
    values: Vec<Value>,
}

#[derive(Deserialize)]
struct RadiiFile {
    radii: Vec<usize>,
}

#[derive(Deserialize)]
struct SubsetFile {
    collections: Vec<Vec<Vec<usize>>>,
}

fn entry_text(v: &Value, k: usize) -> Result<String> {
    match v {
        // With arbitrary precision enabled this is the literal from the file.
        Value::Number(num) => Ok(num.to_string()),
        Value::String(s) => Ok(s.clone()),
        _ => Err(Error::InvalidInput(format!("entry {} is not a number or \"p/q\" string", k + 1))),
    }
}

fn parse_entries(text: &str) -> Result<Vec<BigRational>> {
    let file: TupleFile = serde_json::from_str(text)?;
    file.values
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let t = entry_text(v, k)?;
            parse_rational(&t)
                .ok_or_else(|| Error::InvalidInput(format!("entry {} ({t}) is not a number", k + 1)))
        })
        .collect()
}

/// `{"values": [...]}` read exactly: decimals and `"p/q"` strings become rationals.
pub fn parse_tuple_exact(text: &str) -> Result<PeriodicTuple<BigRational>> {
    PeriodicTuple::new(parse_entries(text)?)
}

/// `{"values": [...]}` in floating point.
pub fn parse_tuple_f64(text: &str) -> Result<PeriodicTuple<f64>> {
    let values = parse_entries(text)?
        .iter()
        .map(crate::scalar::Scalar::to_f64)
        .collect();
    PeriodicTuple::new(values)
}

pub fn parse_radii(text: &str) -> Result<RadiusTuple> {
    let file: RadiiFile = serde_json::from_str(text)?;
    RadiusTuple::new(file.radii)
}

pub fn parse_subsets(text: &str, n: usize) -> Result<SubsetCollectionSystem> {
    let file: SubsetFile = serde_json::from_str(text)?;
    SubsetCollectionSystem::new(n, file.collections)
}
