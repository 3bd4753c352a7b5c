//! JSON file formats: origamis, surface weights and Busemann points.

use std::collections::BTreeSet;
use std::path::Path;
use std::sync::Arc;

use horogeo_core::{BusemannSpec, Coeff, CoreId, Origami, Rational, Side, WeightedSurface};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::fmt;

/// `{"squares": 3, "h": [2,1,3], "v": [3,2,1]}` with one-based images.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrigamiFile {
    pub squares: usize,
    pub h: Vec<usize>,
    pub v: Vec<usize>,
}

impl OrigamiFile {
    pub fn of(o: &Origami) -> Self {
        Self {
            squares: o.squares(),
            h: o.h_one_based(),
            v: o.v_one_based(),
        }
    }

    pub fn build(&self) -> Result<Origami, CliError> {
        if self.h.len() != self.squares || self.v.len() != self.squares {
            return Err(CliError::input(format!(
                "origami: \"squares\" is {} but h has {} and v has {} entries",
                self.squares,
                self.h.len(),
                self.v.len()
            )));
        }
        Ok(Origami::from_one_based(&self.h, &self.v)?)
    }
}

/// A weight or coefficient as written in a file: `"3/2"` and `"2"` are exact,
/// decimal strings and bare JSON numbers are approximate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Text(String),
    Number(f64),
}

impl Scalar {
    pub fn to_coeff(&self) -> Result<Coeff, CliError> {
        match self {
            Scalar::Number(x) => Ok(Coeff::Approx(*x)),
            Scalar::Text(s) => {
                let s = s.trim();
                let rational_syntax = !s.is_empty()
                    && s.chars()
                        .all(|c| c.is_ascii_digit() || c == '/' || c == '-');
                if rational_syntax {
                    s.parse::<Rational>()
                        .map(Coeff::Exact)
                        .map_err(|e| CliError::input(format!("bad rational {s:?}: {e}")))
                } else {
                    s.parse::<f64>()
                        .map(Coeff::Approx)
                        .map_err(|_| CliError::input(format!("bad number {s:?}")))
                }
            }
        }
    }

    pub fn of(c: &Coeff) -> Self {
        match c {
            Coeff::Exact(q) => Scalar::Text(q.to_string()),
            Coeff::Approx(x) => Scalar::Text(fmt::exact(*x)),
        }
    }
}

/// `{"heights": {"A1": "1", …}, "widths": {"B1": "1", …}}`
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsFile {
    pub heights: Map<String, Value>,
    pub widths: Map<String, Value>,
}

fn parse_id(key: &str) -> Result<CoreId, CliError> {
    key.parse::<CoreId>().map_err(CliError::input)
}

fn scalar(v: &Value) -> Result<Scalar, CliError> {
    serde_json::from_value::<Scalar>(v.clone())
        .map_err(|_| CliError::input(format!("expected a number, got {v}")))
}

fn dense(o: &Origami, side: Side, map: &Map<String, Value>) -> Result<Vec<f64>, CliError> {
    let count = o.cylinder_count(side);
    let mut out = vec![None; count];
    for (key, v) in map {
        let id = parse_id(key)?;
        if id.side != side || id.index >= count {
            return Err(CliError::input(format!(
                "{key} is not a {side} cylinder of this origami"
            )));
        }
        out[id.index] = Some(scalar(v)?.to_coeff()?.value());
    }
    out.into_iter()
        .enumerate()
        .map(|(i, w)| {
            w.ok_or_else(|| {
                CliError::input(format!("missing weight for {}", CoreId { side, index: i }))
            })
        })
        .collect()
}

impl WeightsFile {
    pub fn build(&self, o: Arc<Origami>) -> Result<WeightedSurface, CliError> {
        let h = dense(&o, Side::Horizontal, &self.heights)?;
        let w = dense(&o, Side::Vertical, &self.widths)?;
        Ok(WeightedSurface::new(o, h, w)?)
    }
}

/// `{"side": "vertical", "coeffs": [["B1", "1"], ["B2", "3/2"]]}`. Decimal
/// strings need `"approx": true`; `side` may be omitted.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BusemannFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<String>,
    pub coeffs: Vec<(String, Scalar)>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub approx: bool,
}

impl BusemannFile {
    pub fn of(spec: &BusemannSpec) -> Self {
        let coeffs = spec
            .coeffs()
            .iter()
            .map(|(i, c)| {
                (
                    CoreId {
                        side: spec.side(),
                        index: *i,
                    }
                    .to_string(),
                    Scalar::of(c),
                )
            })
            .collect();
        Self {
            side: Some(spec.side().as_str().into()),
            coeffs,
            approx: !spec.is_exact(),
        }
    }

    pub fn build(&self, o: Arc<Origami>) -> Result<BusemannSpec, CliError> {
        let mut sides = BTreeSet::new();
        let mut coeffs = Vec::new();
        for (key, v) in &self.coeffs {
            let id = parse_id(key)?;
            sides.insert(id.side);
            let c = v.to_coeff()?;
            if !c.is_exact() && !self.approx {
                return Err(CliError::input(format!(
                    "{key}: inexact coefficient in a spec without \"approx\": true"
                )));
            }
            coeffs.push((id.index, c));
        }
        let side = match sides.len() {
            0 => return Err(CliError::input("Busemann point has no components")),
            1 => *sides.iter().next().expect("one side"),
            _ => {
                return Err(CliError::input(
                    "Busemann point mixes horizontal and vertical cylinders",
                ))
            }
        };
        if let Some(d) = &self.side {
            let d: Side = d.parse().map_err(CliError::input)?;
            if d != side {
                return Err(CliError::input(format!(
                    "declared side {d} but cylinders are {side}"
                )));
            }
        }
        Ok(BusemannSpec::new(o, side, coeffs)?)
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

pub fn read_origami(path: &Path) -> Result<Origami, CliError> {
    read_json::<OrigamiFile>(path)?.build()
}

pub fn read_busemann(path: &Path, o: Arc<Origami>) -> Result<BusemannSpec, CliError> {
    read_json::<BusemannFile>(path)?.build(o)
}

pub fn read_weights(path: &Path, o: Arc<Origami>) -> Result<WeightedSurface, CliError> {
    read_json::<WeightsFile>(path)?.build(o)
}

/// Weights of a surface, in the weights-file layout, at 15 significant digits.
pub fn weights_json(x: &WeightedSurface) -> Value {
    let map = |side: Side, ws: &[f64]| -> Value {
        Value::Object(
            ws.iter()
                .enumerate()
                .map(|(i, w)| {
                    (
                        CoreId { side, index: i }.to_string(),
                        Value::String(fmt::sig15(*w)),
                    )
                })
                .collect(),
        )
    };
    json!({
        "heights": map(Side::Horizontal, x.heights()),
        "widths": map(Side::Vertical, x.widths()),
    })
}
