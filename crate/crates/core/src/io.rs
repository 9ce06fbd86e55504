//! Text and JSON interchange formats.
//!
//! Numbers are printed with Rust's shortest round-trip formatting, so every
//! value parses back bit-identically. JSON has no infinity, so infinite
//! values are written as the string `"inf"`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::diagram::{ApproxDiagram, ApproxEntry};
use crate::error::{Error, Result};
use crate::metric::MatrixOracle;
use crate::persistence::{DiagramEntry, PersistenceDiagram};
use crate::sparsify::{Edge, PrecisionProfile, SparseLengthMatrix};

/// Serde adapter for `f64` fields that may be infinite.
pub mod float {
    use serde::de::{self, Deserializer, Visitor};
    use serde::Serializer;
    use std::fmt;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else if x.is_nan() {
            Err(serde::ser::Error::custom("NaN is not representable"))
        } else if *x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    struct FloatVisitor;

    impl Visitor<'_> for FloatVisitor {
        type Value = f64;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a number or \"inf\"")
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
            Ok(v)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
            match v {
                "inf" | "Infinity" => Ok(f64::INFINITY),
                "-inf" | "-Infinity" => Ok(f64::NEG_INFINITY),
                _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
            }
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        d.deserialize_any(FloatVisitor)
    }
}

/// Serde adapter for `[f64; 4]` with possibly infinite entries.
pub mod float_array {
    use serde::ser::SerializeTuple;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Wrapped(#[serde(with = "super::float")] f64);

    pub fn serialize<S: Serializer>(xs: &[f64; 4], s: S) -> Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(4)?;
        for &x in xs {
            t.serialize_element(&Wrapped(x))?;
        }
        t.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[f64; 4], D::Error> {
        let w = <[Wrapped; 4]>::deserialize(d)?;
        Ok(w.map(|Wrapped(x)| x))
    }
}

fn tokens(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty())
}

// Lines with content, numbered from 1; `#` starts a comment.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, line)| (k + 1, line.split('#').next().unwrap_or("")))
        .filter(|(_, line)| !line.trim().is_empty())
}

fn number(token: &str, line: usize) -> Result<f64> {
    token.parse::<f64>().map_err(|_| Error::Parse {
        line,
        msg: format!("not a number: {token:?}"),
    })
}

/// One point per line, coordinates separated by commas and/or whitespace.
pub fn parse_points(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut points: Vec<Vec<f64>> = Vec::new();
    for (line, content) in content_lines(text) {
        let p = tokens(content).map(|t| number(t, line)).collect::<Result<Vec<_>>>()?;
        if let Some(first) = points.first() {
            if first.len() != p.len() {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected {} coordinates, found {}", first.len(), p.len()),
                });
            }
        }
        if let Some(bad) = p.iter().find(|x| !x.is_finite()) {
            return Err(Error::Parse {
                line,
                msg: format!("non-finite coordinate {bad}"),
            });
        }
        points.push(p);
    }
    if points.is_empty() {
        return Err(Error::input("no points"));
    }
    Ok(points)
}

/// Circle positions in `[0, 1)`, one or more per line.
pub fn parse_angles(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (line, content) in content_lines(text) {
        for t in tokens(content) {
            let a = number(t, line)?;
            if !(0.0..1.0).contains(&a) {
                return Err(Error::Parse {
                    line,
                    msg: format!("angle {a} outside [0, 1)"),
                });
            }
            out.push(a);
        }
    }
    if out.is_empty() {
        return Err(Error::input("no points"));
    }
    Ok(out)
}

/// Row-major lower triangle (without diagonal), separated by commas and
/// newlines in any arrangement.
pub fn parse_lower_distance(text: &str) -> Result<MatrixOracle> {
    let mut values = Vec::new();
    for (line, content) in content_lines(text) {
        for t in tokens(content) {
            let x = number(t, line)?;
            if !x.is_finite() || x < 0.0 {
                return Err(Error::Parse {
                    line,
                    msg: format!("distance {x} must be finite and non-negative"),
                });
            }
            values.push(x);
        }
    }
    MatrixOracle::from_lower_triangle(values)
}

pub fn write_points<P: AsRef<[f64]>>(points: &[P]) -> String {
    let mut out = String::new();
    for p in points {
        let row: Vec<String> = p.as_ref().iter().map(|x| x.to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// `i j d` per kept edge.
pub fn write_sparse(matrix: &SparseLengthMatrix) -> String {
    let mut out = String::with_capacity(matrix.edges.len() * 24);
    for e in &matrix.edges {
        out.push_str(&format!("{} {} {}\n", e.i, e.j, e.len));
    }
    out
}

pub fn parse_sparse(text: &str, size: usize) -> Result<Vec<Edge>> {
    let mut edges = Vec::new();
    for (line, content) in content_lines(text) {
        let t: Vec<&str> = tokens(content).collect();
        if t.len() != 3 {
            return Err(Error::Parse {
                line,
                msg: format!("expected \"i j d\", found {} fields", t.len()),
            });
        }
        let index = |s: &str| {
            s.parse::<usize>()
                .ok()
                .filter(|&i| i < size)
                .ok_or_else(|| Error::Parse {
                    line,
                    msg: format!("bad vertex index {s:?} for {size} points"),
                })
        };
        let (i, j) = (index(t[0])?, index(t[1])?);
        let len = number(t[2], line)?;
        if !(len >= 0.0) {
            return Err(Error::Parse {
                line,
                msg: format!("negative length {len}"),
            });
        }
        edges.push(Edge { i, j, len });
    }
    Ok(edges)
}

/// Profile metadata attached to sparse files and diagrams, plus the run
/// configuration that produced them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    /// Retained points.
    pub n: usize,
    /// Points in the input.
    #[serde(rename = "N")]
    pub total: usize,
    pub eps0: f64,
    pub eps1: f64,
    #[serde(rename = "R", with = "float")]
    pub radius: f64,
    #[serde(rename = "T")]
    pub threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub config: Value,
}

impl Meta {
    pub fn new(profile: &PrecisionProfile, config: Value) -> Self {
        Meta {
            n: profile.keep,
            total: profile.n,
            eps0: profile.eps0,
            eps1: profile.eps1,
            radius: profile.radius,
            threshold: profile.threshold,
            config,
        }
    }

    pub fn profile(&self) -> PrecisionProfile {
        PrecisionProfile {
            n: self.total,
            keep: self.n,
            eps0: self.eps0,
            eps1: self.eps1,
            radius: self.radius,
            threshold: self.threshold,
        }
    }
}

pub fn read_sparse(text: &str, meta: &Meta) -> Result<SparseLengthMatrix> {
    let mut edges = parse_sparse(text, meta.n)?;
    for e in edges.iter_mut() {
        if e.i > e.j {
            std::mem::swap(&mut e.i, &mut e.j);
        }
    }
    edges.retain(|e| e.i != e.j);
    edges.sort_by_key(|e| (e.i, e.j));
    Ok(SparseLengthMatrix {
        size: meta.n,
        edges,
        profile: meta.profile(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramFile {
    pub field: u32,
    pub entries: Vec<DiagramEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
}

impl DiagramFile {
    pub fn new(diagram: &PersistenceDiagram, meta: Option<Meta>) -> Self {
        DiagramFile {
            field: diagram.field(),
            entries: diagram.entries().to_vec(),
            meta,
        }
    }

    pub fn diagram(&self) -> PersistenceDiagram {
        PersistenceDiagram::new(self.field, self.entries.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxDiagramFile {
    pub field: u32,
    pub entries: Vec<ApproxEntry>,
    pub meta: Meta,
}

impl ApproxDiagramFile {
    pub fn new(approx: &ApproxDiagram, config: Value) -> Self {
        ApproxDiagramFile {
            field: approx.base.field(),
            entries: approx.entries.clone(),
            meta: Meta::new(&approx.profile, config),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn read_diagram(text: &str) -> Result<DiagramFile> {
    Ok(serde_json::from_str(text)?)
}

/// `dim birth death` per entry, `inf` for essential classes.
pub fn write_pairs(diagram: &PersistenceDiagram) -> String {
    let mut out = String::new();
    for e in diagram.entries() {
        out.push_str(&format!("{} {} {}\n", e.dim, e.birth, e.death));
    }
    out
}

pub fn parse_pairs(text: &str, field: u32) -> Result<PersistenceDiagram> {
    let mut entries = Vec::new();
    for (line, content) in content_lines(text) {
        let t: Vec<&str> = tokens(content).collect();
        if t.len() != 3 {
            return Err(Error::Parse {
                line,
                msg: "expected \"dim birth death\"".into(),
            });
        }
        let dim = t[0].parse::<usize>().map_err(|_| Error::Parse {
            line,
            msg: format!("bad dimension {:?}", t[0]),
        })?;
        entries.push(DiagramEntry {
            dim,
            birth: number(t[1], line)?,
            death: number(t[2], line)?,
        });
    }
    Ok(PersistenceDiagram::new(field, entries))
}
