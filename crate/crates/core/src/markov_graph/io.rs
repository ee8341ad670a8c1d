//! JSON graph and decomposition files.
//!
//! ```json
//! {"vertices": [0, 1, 2], "edges": [{"src": 0, "dst": 1, "w": "1/2"}, ...]}
//! {"cycles": [{"vertices": [0, 1, 2, 0], "weight": "1/3"}]}
//! ```
//!
//! Weights given as fraction strings load exactly; any float weight makes the
//! whole file load as `f64`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Cycle, CycleDecomposition, GraphError, Kernel, Measure};
use crate::weight::{format_rational, parse_rational, Rational, Weight};

/// Vertex label: an integer or a string.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Int(i64),
    Str(String),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(i) => write!(f, "{i}"),
            Label::Str(s) => f.write_str(s),
        }
    }
}

impl From<i64> for Label {
    fn from(i: i64) -> Self {
        Label::Int(i)
    }
}

/// A weight as written in a file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightLit {
    Exact(String),
    Float(f64),
}

impl WeightLit {
    fn exact(&self) -> Result<Rational, GraphError> {
        match self {
            WeightLit::Exact(s) => parse_rational(s).map_err(GraphError::Format),
            WeightLit::Float(x) => Err(GraphError::Format(format!("float weight {x} in an exact file"))),
        }
    }

    fn float(&self) -> Result<f64, GraphError> {
        match self {
            WeightLit::Exact(s) => parse_rational(s).map(|r| r.to_f64()).map_err(GraphError::Format),
            WeightLit::Float(x) => Ok(*x),
        }
    }

    pub fn from_rational(r: &Rational) -> Self {
        WeightLit::Exact(format_rational(r))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub src: Label,
    pub dst: Label,
    pub w: WeightLit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureRecord {
    pub vertex: Label,
    pub m: WeightLit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<Label>,
    pub edges: Vec<EdgeRecord>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub killed: bool,
    /// Extra boundary vertices (in-neighbours outside the file).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub boundary: Vec<Label>,
    /// Missing means counting measure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<Vec<MeasureRecord>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleRecord {
    pub vertices: Vec<Label>,
    pub weight: WeightLit,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub generalized: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionFile {
    pub cycles: Vec<CycleRecord>,
}

/// A loaded graph in whichever arithmetic its file calls for.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyGraph {
    Exact(Kernel<Label, Rational>, Measure<Label, Rational>),
    Float(Kernel<Label, f64>, Measure<Label, f64>),
}

impl GraphFile {
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        serde_json::from_str(text).map_err(|e| GraphError::Format(e.to_string()))
    }

    /// All weights (edges and measure) are fraction strings.
    pub fn is_exact(&self) -> bool {
        let edges = self.edges.iter().all(|e| matches!(e.w, WeightLit::Exact(_)));
        let measure = self.measure.iter().flatten().all(|m| matches!(m.m, WeightLit::Exact(_)));
        edges && measure
    }

    pub fn load(&self) -> Result<AnyGraph, GraphError> {
        if self.is_exact() {
            let (k, m) = self.build(WeightLit::exact)?;
            Ok(AnyGraph::Exact(k, m))
        } else {
            let (k, m) = self.build(WeightLit::float)?;
            Ok(AnyGraph::Float(k, m))
        }
    }

    pub fn build<W: Weight>(
        &self,
        conv: impl Fn(&WeightLit) -> Result<W, GraphError>,
    ) -> Result<(Kernel<Label, W>, Measure<Label, W>), GraphError> {
        let mut b = Kernel::builder();
        for v in &self.vertices {
            b.vertex(v.clone());
        }
        for e in &self.edges {
            if !self.vertices.contains(&e.src) {
                return Err(GraphError::UnknownVertex(e.src.to_string()));
            }
            b.edge(e.src.clone(), e.dst.clone(), conv(&e.w)?);
        }
        for v in &self.boundary {
            b.flag_boundary(v.clone());
        }
        b.killed(self.killed);
        let m = match &self.measure {
            None => Measure::counting(),
            Some(recs) => {
                let mut values = BTreeMap::new();
                for rec in recs {
                    values.insert(rec.vertex.clone(), conv(&rec.m)?);
                }
                Measure::from_values(values)?
            }
        };
        Ok((b.build()?, m))
    }

    pub fn from_kernel(k: &Kernel<Label, Rational>) -> Self {
        Self {
            vertices: k.window().cloned().collect(),
            edges: k
                .edges()
                .map(|(x, y, w)| EdgeRecord { src: x.clone(), dst: y.clone(), w: WeightLit::from_rational(w) })
                .collect(),
            killed: k.is_killed(),
            boundary: Vec::new(),
            measure: None,
        }
    }
}

impl DecompositionFile {
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        serde_json::from_str(text).map_err(|e| GraphError::Format(e.to_string()))
    }

    pub fn build<W: Weight>(
        &self,
        conv: impl Fn(&WeightLit) -> Result<W, GraphError>,
    ) -> Result<CycleDecomposition<Label, W>, GraphError> {
        let mut entries = Vec::with_capacity(self.cycles.len());
        for c in &self.cycles {
            let cycle = if c.generalized {
                Cycle::generalized(c.vertices.clone())?
            } else {
                Cycle::new(c.vertices.clone())?
            };
            entries.push((cycle, conv(&c.weight)?));
        }
        CycleDecomposition::new(entries)
    }

    pub fn build_exact(&self) -> Result<CycleDecomposition<Label, Rational>, GraphError> {
        self.build(WeightLit::exact)
    }

    pub fn build_float(&self) -> Result<CycleDecomposition<Label, f64>, GraphError> {
        self.build(WeightLit::float)
    }

    pub fn from_exact<V: Ord + Clone + fmt::Debug + Into<Label>>(dec: &CycleDecomposition<V, Rational>) -> Self {
        Self {
            cycles: dec
                .entries()
                .iter()
                .map(|(c, w)| CycleRecord {
                    vertices: c.vertices().iter().cloned().map(Into::into).collect(),
                    weight: WeightLit::from_rational(w),
                    generalized: c.is_generalized(),
                })
                .collect(),
        }
    }

    pub fn from_float<V: Ord + Clone + fmt::Debug + Into<Label>>(dec: &CycleDecomposition<V, f64>) -> Self {
        Self {
            cycles: dec
                .entries()
                .iter()
                .map(|(c, w)| CycleRecord {
                    vertices: c.vertices().iter().cloned().map(Into::into).collect(),
                    weight: WeightLit::Float(*w),
                    generalized: c.is_generalized(),
                })
                .collect(),
        }
    }
}
