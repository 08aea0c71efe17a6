//! File formats and report serialization.
//!
//! Every value is a JSON document with a `kind` discriminator. Complex
//! entries are `[re, im]` pairs of IEEE-754 doubles. Reports are emitted
//! through a canonical writer: keys sorted, floats at 17 significant digits,
//! so identical inputs produce byte-identical output.

use crate::error::{Error, Result};
use crate::frobenius::{classical_algebra, Ssfa};
use crate::qfun::{ProjectorFamily, QuantumFunction};
use crate::qgraph::{ClassicalGraph, QuantumGraph};
use crate::qrel::{OperatorSystemProjector, QuantumRelation};
use crate::tensor::{CMatrix, Tolerance};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::InvalidArgument(format!("malformed document: {e}"))
}

pub type Entry = [f64; 2];

fn matrix_to_rows(m: &CMatrix) -> Vec<Vec<Entry>> {
    (0..m.rows)
        .map(|i| (0..m.cols).map(|j| [m.get(i, j).re, m.get(i, j).im]).collect())
        .collect()
}

fn rows_to_matrix(rows: &[Vec<Entry>]) -> Result<CMatrix> {
    let r = rows.len();
    let c = rows.first().map(|row| row.len()).unwrap_or(0);
    if rows.iter().any(|row| row.len() != c) {
        return Err(Error::InvalidArgument("ragged matrix rows".into()));
    }
    CMatrix::new(
        r,
        c,
        rows.iter()
            .flatten()
            .map(|e| Complex64::new(e[0], e[1]))
            .collect(),
    )
}

fn vector_to_pairs(m: &CMatrix) -> Vec<Entry> {
    (0..m.rows).map(|i| [m.get(i, 0).re, m.get(i, 0).im]).collect()
}

fn pairs_to_vector(pairs: &[Entry]) -> CMatrix {
    CMatrix::from_fn(pairs.len(), 1, |i, _| Complex64::new(pairs[i][0], pairs[i][1]))
}

/// Algebra document: dimension, multiplication tensor rows, unit vector.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub kind: String,
    pub dim: usize,
    pub mult: Vec<Vec<Entry>>,
    pub unit: Vec<Entry>,
}

impl AlgebraDoc {
    pub fn from_ssfa(a: &Ssfa) -> Self {
        AlgebraDoc {
            kind: "algebra".into(),
            dim: a.dim(),
            mult: matrix_to_rows(a.mult()),
            unit: vector_to_pairs(a.unit()),
        }
    }

    pub fn to_ssfa(&self, tol: &Tolerance) -> Result<Ssfa> {
        Ssfa::new(self.dim, rows_to_matrix(&self.mult)?, pairs_to_vector(&self.unit), tol)
    }

    /// Raw multiplication tensor, without validating the axioms.
    pub fn mult_matrix(&self) -> Result<CMatrix> {
        rows_to_matrix(&self.mult)
    }

    /// Raw unit vector, without validating the axioms.
    pub fn unit_vector(&self) -> CMatrix {
        pairs_to_vector(&self.unit)
    }
}

/// Source or target of a quantum function: a classical set shorthand
/// "classical:n" or an inline algebra.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EndpointDoc {
    Classical(String),
    Inline(AlgebraDoc),
}

impl EndpointDoc {
    pub fn from_ssfa(a: &Ssfa, tol: &Tolerance) -> Self {
        if a.is_classical(tol) {
            EndpointDoc::Classical(format!("classical:{}", a.dim()))
        } else {
            EndpointDoc::Inline(AlgebraDoc::from_ssfa(a))
        }
    }

    pub fn to_ssfa(&self, tol: &Tolerance) -> Result<Ssfa> {
        match self {
            EndpointDoc::Classical(s) => {
                let n = s
                    .strip_prefix("classical:")
                    .and_then(|v| v.parse::<usize>().ok())
                    .ok_or_else(|| {
                        Error::InvalidArgument(format!("bad classical endpoint {s:?}"))
                    })?;
                classical_algebra(n)
            }
            EndpointDoc::Inline(doc) => doc.to_ssfa(tol),
        }
    }
}

/// Quantum function document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QfunDoc {
    pub kind: String,
    pub source: EndpointDoc,
    pub target: EndpointDoc,
    pub h_dim: usize,
    pub matrix: Vec<Vec<Entry>>,
}

impl QfunDoc {
    pub fn from_qfun(f: &QuantumFunction, tol: &Tolerance) -> Self {
        QfunDoc {
            kind: "qfun".into(),
            source: EndpointDoc::from_ssfa(&f.source, tol),
            target: EndpointDoc::from_ssfa(&f.target, tol),
            h_dim: f.h_dim,
            matrix: matrix_to_rows(&f.matrix),
        }
    }

    pub fn to_qfun(&self, tol: &Tolerance) -> Result<QuantumFunction> {
        QuantumFunction::new(
            self.source.to_ssfa(tol)?,
            self.target.to_ssfa(tol)?,
            self.h_dim,
            rows_to_matrix(&self.matrix)?,
        )
    }
}

/// Projector-family document: nested grid, projectors[x][y] a d x d matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyDoc {
    pub kind: String,
    pub x_size: usize,
    pub y_size: usize,
    pub h_dim: usize,
    pub projectors: Vec<Vec<Vec<Vec<Entry>>>>,
}

impl FamilyDoc {
    pub fn from_family(p: &ProjectorFamily) -> Self {
        FamilyDoc {
            kind: "family".into(),
            x_size: p.x_size,
            y_size: p.y_size,
            h_dim: p.h_dim,
            projectors: p
                .projectors
                .iter()
                .map(|row| row.iter().map(matrix_to_rows).collect())
                .collect(),
        }
    }

    pub fn to_family(&self) -> Result<ProjectorFamily> {
        let grid = self
            .projectors
            .iter()
            .map(|row| row.iter().map(|m| rows_to_matrix(m)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        ProjectorFamily::new(grid)
    }
}

/// Classical graph document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphDoc {
    pub kind: String,
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub reflexive: bool,
}

impl GraphDoc {
    pub fn from_graph(g: &ClassicalGraph) -> Self {
        GraphDoc {
            kind: "graph".into(),
            vertices: g.vertices,
            edges: g.edges().to_vec(),
            reflexive: g.reflexive,
        }
    }

    pub fn to_graph(&self) -> Result<ClassicalGraph> {
        ClassicalGraph::new(self.vertices, self.edges.clone(), self.reflexive)
    }
}

/// Quantum graph document: vertex algebra plus adjacency matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QGraphDoc {
    pub kind: String,
    pub algebra: EndpointDoc,
    pub adjacency: Vec<Vec<Entry>>,
}

impl QGraphDoc {
    pub fn from_qgraph(g: &QuantumGraph, tol: &Tolerance) -> Self {
        QGraphDoc {
            kind: "qgraph".into(),
            algebra: EndpointDoc::from_ssfa(&g.algebra, tol),
            adjacency: matrix_to_rows(&g.adjacency),
        }
    }

    pub fn to_qgraph(&self, tol: &Tolerance) -> Result<QuantumGraph> {
        QuantumGraph::new(self.algebra.to_ssfa(tol)?, rows_to_matrix(&self.adjacency)?, tol)
    }
}

/// Quantum relation document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelationDoc {
    pub kind: String,
    pub a: EndpointDoc,
    pub b: EndpointDoc,
    pub matrix: Vec<Vec<Entry>>,
}

impl RelationDoc {
    pub fn from_relation(r: &QuantumRelation, tol: &Tolerance) -> Self {
        RelationDoc {
            kind: "relation".into(),
            a: EndpointDoc::from_ssfa(&r.a, tol),
            b: EndpointDoc::from_ssfa(&r.b, tol),
            matrix: matrix_to_rows(&r.matrix),
        }
    }

    pub fn to_relation(&self, tol: &Tolerance) -> Result<QuantumRelation> {
        QuantumRelation::new(
            self.a.to_ssfa(tol)?,
            self.b.to_ssfa(tol)?,
            rows_to_matrix(&self.matrix)?,
        )
    }
}

/// Projection-form document for a quantum relation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProjectionDoc {
    pub kind: String,
    pub a: EndpointDoc,
    pub b: EndpointDoc,
    pub p: Vec<Entry>,
}

impl ProjectionDoc {
    pub fn new(r: &QuantumRelation, p: &CMatrix, tol: &Tolerance) -> Self {
        ProjectionDoc {
            kind: "projection".into(),
            a: EndpointDoc::from_ssfa(&r.a, tol),
            b: EndpointDoc::from_ssfa(&r.b, tol),
            p: vector_to_pairs(p),
        }
    }
}

/// Operator-system document: explicit projector matrix or a spanning set of
/// d x d operators (orthonormalized on load).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OpsysDoc {
    pub kind: String,
    pub h_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<Entry>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operators: Option<Vec<Vec<Vec<Entry>>>>,
}

impl OpsysDoc {
    pub fn from_opsys(o: &OperatorSystemProjector) -> Self {
        OpsysDoc {
            kind: "opsys".into(),
            h_dim: o.h_dim,
            matrix: Some(matrix_to_rows(&o.matrix)),
            operators: None,
        }
    }

    pub fn to_opsys(&self) -> Result<OperatorSystemProjector> {
        if let Some(m) = &self.matrix {
            return OperatorSystemProjector::new(self.h_dim, rows_to_matrix(m)?);
        }
        if let Some(ops) = &self.operators {
            let mats = ops.iter().map(|m| rows_to_matrix(m)).collect::<Result<Vec<_>>>()?;
            return OperatorSystemProjector::from_span(self.h_dim, &mats);
        }
        Err(Error::InvalidArgument(
            "operator-system document needs either matrix or operators".into(),
        ))
    }
}

/// Any document this library reads or writes.
#[derive(Debug, Clone)]
pub enum Document {
    Algebra(AlgebraDoc),
    Qfun(QfunDoc),
    Family(FamilyDoc),
    Graph(GraphDoc),
    QGraph(QGraphDoc),
    Relation(RelationDoc),
    Projection(ProjectionDoc),
    Opsys(OpsysDoc),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Algebra(_) => "algebra",
            Document::Qfun(_) => "qfun",
            Document::Family(_) => "family",
            Document::Graph(_) => "graph",
            Document::QGraph(_) => "qgraph",
            Document::Relation(_) => "relation",
            Document::Projection(_) => "projection",
            Document::Opsys(_) => "opsys",
        }
    }

    pub fn parse(text: &str) -> Result<Document> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(parse_err)?;
        let kind = value
            .get("kind")
            .and_then(|k| k.as_str())
            .ok_or_else(|| Error::InvalidArgument("document is missing a kind field".into()))?;
        let doc = match kind {
            "algebra" => Document::Algebra(serde_json::from_value(value).map_err(parse_err)?),
            "qfun" => Document::Qfun(serde_json::from_value(value).map_err(parse_err)?),
            "family" => Document::Family(serde_json::from_value(value).map_err(parse_err)?),
            "graph" => Document::Graph(serde_json::from_value(value).map_err(parse_err)?),
            "qgraph" => Document::QGraph(serde_json::from_value(value).map_err(parse_err)?),
            "relation" => Document::Relation(serde_json::from_value(value).map_err(parse_err)?),
            "projection" => Document::Projection(serde_json::from_value(value).map_err(parse_err)?),
            "opsys" => Document::Opsys(serde_json::from_value(value).map_err(parse_err)?),
            other => {
                return Err(Error::InvalidArgument(format!("unknown document kind {other:?}")))
            }
        };
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        let value = match self {
            Document::Algebra(d) => serde_json::to_value(d),
            Document::Qfun(d) => serde_json::to_value(d),
            Document::Family(d) => serde_json::to_value(d),
            Document::Graph(d) => serde_json::to_value(d),
            Document::QGraph(d) => serde_json::to_value(d),
            Document::Relation(d) => serde_json::to_value(d),
            Document::Projection(d) => serde_json::to_value(d),
            Document::Opsys(d) => serde_json::to_value(d),
        }
        .expect("document serialization cannot fail");
        canonical_json(&value)
    }
}

/// Canonical JSON: object keys sorted, floats rendered with 17 significant
/// digits (round-trip exact for doubles), no whitespace dependence on input.
pub fn canonical_json(value: &serde_json::Value) -> String {
    let mut out = String::new();
    write_canonical(value, &mut out);
    out
}

fn write_canonical(value: &serde_json::Value, out: &mut String) {
    match value {
        serde_json::Value::Null => out.push_str("null"),
        serde_json::Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                let f = n.as_f64().unwrap_or(f64::NAN);
                out.push_str(&format_float(f));
            }
        }
        serde_json::Value::String(s) => {
            out.push_str(&serde_json::to_string(s).unwrap());
        }
        serde_json::Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_canonical(item, out);
            }
            out.push(']');
        }
        serde_json::Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(k).unwrap());
                out.push(':');
                write_canonical(&map[*k], out);
            }
            out.push('}');
        }
    }
}

/// 17 significant digits: the smallest count that round-trips every f64.
pub fn format_float(f: f64) -> String {
    if f == f.trunc() && f.abs() < 1e15 {
        // integral values print plainly, negative zero normalized
        let v = if f == 0.0 { 0.0 } else { f };
        return format!("{v:.1}");
    }
    format!("{f:.16e}")
}
