//! JSON descriptors for spaces and lattices.
//!
//! ```text
//! {"kind":"lp","p":2}
//! {"kind":"lpq","p":2,"q":"inf"}
//! {"kind":"lorentz","q":2,"weights":{"form":"power","theta":0.25}}
//! {"kind":"orlicz","orlicz":{"form":"power_log","p":2,"a":0.5}}
//! {"kind":"ex","base":{"kind":"lp","p":2}}
//! {"kind":"wlq","q":2,"mu":{"form":"geometric","ratio":1.5}}
//! {"kind":"un","orlicz":{"form":"power","p":3}}
//! ```
//! Numbers may be written as `"inf"` where infinity is allowed.

use std::sync::Arc;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::lattices::{LatticeSpec, LatticeWeights};
use crate::spaces::{OrliczFn, SpaceSpec, WeightSeq};

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Spec(format!("malformed JSON: {e}")))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Spec(format!("missing field '{key}' in {v}")))
}

fn number(v: &Value, key: &str) -> Result<f64> {
    match field(v, key)? {
        Value::Number(n) => n.as_f64().ok_or_else(|| Error::Spec(format!("'{key}' is not a number"))),
        Value::String(s) if matches!(s.to_ascii_lowercase().as_str(), "inf" | "infinity") => Ok(f64::INFINITY),
        other => Err(Error::Spec(format!("'{key}' must be a number, got {other}"))),
    }
}

fn text<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    field(v, key)?.as_str().ok_or_else(|| Error::Spec(format!("'{key}' must be a string")))
}

fn values(v: &Value) -> Result<Vec<f64>> {
    field(v, "values")?
        .as_array()
        .ok_or_else(|| Error::Spec("'values' must be an array".into()))?
        .iter()
        .map(|x| x.as_f64().ok_or_else(|| Error::Spec(format!("non-numeric value {x}"))))
        .collect()
}

fn weights(v: &Value) -> Result<WeightSeq> {
    match text(v, "form")? {
        "power" => WeightSeq::power(number(v, "theta")?),
        "constant" => Ok(WeightSeq::constant()),
        "array" => WeightSeq::array(values(v)?),
        other => Err(Error::UnknownKind(format!("weight form '{other}'"))),
    }
}

fn orlicz(v: &Value) -> Result<OrliczFn> {
    match text(v, "form")? {
        "power" => OrliczFn::power(number(v, "p")?),
        "power_log" => OrliczFn::power_log(number(v, "p")?, number(v, "a")?),
        other => Err(Error::UnknownKind(format!("orlicz form '{other}'"))),
    }
}

pub fn space_from_value(v: &Value) -> Result<SpaceSpec> {
    match text(v, "kind")? {
        "lp" => SpaceSpec::lp(number(v, "p")?),
        "lpq" => SpaceSpec::lpq(number(v, "p")?, number(v, "q")?),
        "lorentz" => SpaceSpec::lorentz(number(v, "q")?, weights(field(v, "weights")?)?),
        "orlicz" => Ok(SpaceSpec::orlicz(orlicz(field(v, "orlicz")?)?)),
        other => Err(Error::UnknownKind(format!("space kind '{other}'"))),
    }
}

pub fn lattice_from_value(v: &Value) -> Result<LatticeSpec> {
    let lat = match text(v, "kind")? {
        "ex" => LatticeSpec::EX { base: space_from_value(field(v, "base")?)? },
        "wlq" => {
            let mu = field(v, "mu")?;
            let mu = match text(mu, "form")? {
                "geometric" => LatticeWeights::Geometric { ratio: number(mu, "ratio")? },
                "lorentz" => LatticeWeights::LorentzSamples { w: weights(field(mu, "weights")?)? },
                "array" => LatticeWeights::Array(Arc::from(values(mu)?)),
                other => return Err(Error::UnknownKind(format!("mu form '{other}'"))),
            };
            LatticeSpec::WeightedLq { q: number(v, "q")?, mu }
        }
        "un" => LatticeSpec::UN { n: orlicz(field(v, "orlicz")?)? },
        other => return Err(Error::UnknownKind(format!("lattice kind '{other}'"))),
    };
    lat.validate()?;
    Ok(lat)
}

pub fn parse_space(text: &str) -> Result<SpaceSpec> {
    space_from_value(&parse_json(text)?)
}

pub fn parse_lattice(text: &str) -> Result<LatticeSpec> {
    lattice_from_value(&parse_json(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spaces_parse() {
        assert!(matches!(parse_space(r#"{"kind":"lp","p":2}"#).unwrap(), SpaceSpec::Lp { p } if p == 2.0));
        assert!(matches!(parse_space(r#"{"kind":"lp","p":"inf"}"#).unwrap(), SpaceSpec::Lp { p } if p.is_infinite()));
        assert!(parse_space(r#"{"kind":"lorentz","q":2,"weights":{"form":"power","theta":0.25}}"#).is_ok());
        assert!(parse_space(r#"{"kind":"orlicz","orlicz":{"form":"power_log","p":2,"a":0.5}}"#).is_ok());
        assert!(parse_space(r#"{"kind":"lorentz","q":1,"weights":{"form":"array","values":[1,0.5]}}"#).is_ok());
    }

    #[test]
    fn errors_are_distinct() {
        assert!(matches!(parse_space("{"), Err(Error::Spec(_))));
        assert!(matches!(parse_space(r#"{"kind":"marcinkiewicz"}"#), Err(Error::UnknownKind(_))));
        assert!(matches!(parse_space(r#"{"kind":"lp","p":0.5}"#), Err(Error::ParameterRange(_))));
        assert!(matches!(parse_space(r#"{"kind":"lp"}"#), Err(Error::Spec(_))));
    }

    #[test]
    fn lattices_parse() {
        assert!(parse_lattice(r#"{"kind":"ex","base":{"kind":"lp","p":2}}"#).is_ok());
        assert!(parse_lattice(r#"{"kind":"wlq","q":2,"mu":{"form":"geometric","ratio":1.5}}"#).is_ok());
        assert!(parse_lattice(
            r#"{"kind":"wlq","q":2,"mu":{"form":"lorentz","weights":{"form":"power","theta":0.25}}}"#
        )
        .is_ok());
        assert!(parse_lattice(r#"{"kind":"un","orlicz":{"form":"power","p":3}}"#).is_ok());
        assert!(matches!(parse_lattice(r#"{"kind":"wlq","q":0.5,"mu":{"form":"geometric","ratio":1}}"#), Err(Error::ParameterRange(_))));
    }
}
