//! Instance files: one JSON document, schema version 1.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "points": [{"id": "6", "value": 6}, {"id": "p", "value": [0.0, 1.0]}],
//!   "metric": {"kind": "absolute"},
//!   "A": ["6"], "B": ["3"], "T": [["6", "3"]],
//!   "theta": {"name": "exp"},
//!   "phi": {"name": "pow", "parameters": {"k": 0.5}},
//!   "params": {"a": 1, "b": 0, "c": 0, "h": 0},
//!   "tolerances": {"tol": 1e-9, "eps_conv": 1e-10, "max_iter": 200}
//! }
//! ```
//!
//! `metric.kind` is `absolute`, `euclidean`, or `explicit` with a `matrix`
//! whose rows follow the order of `points`. Point values may be omitted only
//! for explicit metrics.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::contraction::ContractionParams;
use crate::error::{Error, Result};
use crate::functions::{FunctionRecord, PhiSpec, ThetaSpec};
use crate::metric::{FiniteInstance, MetricSpec, Point, PointValue};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueRecord {
    Scalar(f64),
    Tuple(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointRecord {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<ValueRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum MetricRecord {
    Absolute,
    Euclidean,
    Explicit { matrix: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsRecord {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub h: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_conv: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub format_version: u32,
    pub points: Vec<PointRecord>,
    pub metric: MetricRecord,
    #[serde(rename = "A")]
    pub a: Vec<String>,
    #[serde(rename = "B")]
    pub b: Vec<String>,
    #[serde(rename = "T")]
    pub t: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<FunctionRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<FunctionRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
}

impl InstanceFile {
    pub fn from_instance(inst: &FiniteInstance) -> Self {
        let points = inst
            .points()
            .iter()
            .map(|p| PointRecord {
                id: p.id.clone(),
                value: p.value.as_ref().map(|v| match v {
                    PointValue::Scalar(x) => ValueRecord::Scalar(*x),
                    PointValue::Tuple(xs) => ValueRecord::Tuple(xs.clone()),
                }),
            })
            .collect();
        let metric = match inst.metric() {
            MetricSpec::Absolute => MetricRecord::Absolute,
            MetricSpec::Euclidean => MetricRecord::Euclidean,
            MetricSpec::Explicit(m) => MetricRecord::Explicit { matrix: m.clone() },
        };
        let ids = |xs: &[usize]| xs.iter().map(|&i| inst.id(i).to_string()).collect();
        InstanceFile {
            format_version: FORMAT_VERSION,
            points,
            metric,
            a: ids(inst.a()),
            b: ids(inst.b()),
            t: inst
                .mapping()
                .map(|(u, v)| (inst.id(u).to_string(), inst.id(v).to_string()))
                .collect(),
            theta: None,
            phi: None,
            params: None,
            tolerances: None,
        }
    }

    pub fn instance(&self) -> Result<FiniteInstance> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::schema(
                "format_version",
                format!("unsupported version {}, expected {FORMAT_VERSION}", self.format_version),
            ));
        }
        let points = self
            .points
            .iter()
            .map(|p| Point {
                id: p.id.clone(),
                value: p.value.as_ref().map(|v| match v {
                    ValueRecord::Scalar(x) => PointValue::Scalar(*x),
                    ValueRecord::Tuple(xs) => PointValue::Tuple(xs.clone()),
                }),
            })
            .collect();
        let metric = match &self.metric {
            MetricRecord::Absolute => MetricSpec::Absolute,
            MetricRecord::Euclidean => MetricSpec::Euclidean,
            MetricRecord::Explicit { matrix } => MetricSpec::Explicit(matrix.clone()),
        };
        let a: Vec<&str> = self.a.iter().map(String::as_str).collect();
        let b: Vec<&str> = self.b.iter().map(String::as_str).collect();
        let t: Vec<(&str, &str)> = self.t.iter().map(|(x, y)| (x.as_str(), y.as_str())).collect();
        FiniteInstance::new(points, metric, &a, &b, &t).map_err(|e| match e {
            Error::UnknownId(id) => Error::integrity(format!("dangling id `{id}`")),
            other => other,
        })
    }

    pub fn theta(&self) -> Result<Option<ThetaSpec>> {
        self.theta.as_ref().map(ThetaSpec::from_record).transpose()
    }

    pub fn phi(&self) -> Result<Option<PhiSpec>> {
        self.phi.as_ref().map(PhiSpec::from_record).transpose()
    }

    pub fn params(&self) -> Result<Option<ContractionParams>> {
        self.params
            .map(|p| ContractionParams::new(p.a, p.b, p.c, p.h))
            .transpose()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance files always serialize");
        s.push('\n');
        s
    }
}

/// Parses a document, mapping syntax errors to [`Error::Parse`] and shape
/// errors to [`Error::Schema`] with the offending field path.
pub fn parse_instance_file(text: &str) -> Result<InstanceFile> {
    let mut de = serde_json::Deserializer::from_str(text);
    let parsed: InstanceFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        match inner.classify() {
            serde_json::error::Category::Data => Error::schema(path, inner.to_string()),
            _ => Error::Parse(inner.to_string()),
        }
    })?;
    de.end().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(parsed)
}

pub fn read_instance_file(path: &Path) -> Result<InstanceFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_instance_file(&text)
}

pub fn load_instance(path: &Path) -> Result<FiniteInstance> {
    read_instance_file(path)?.instance()
}

pub fn save_instance(inst: &FiniteInstance, path: &Path) -> Result<()> {
    std::fs::write(path, InstanceFile::from_instance(inst).to_json()).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}
