//! JSON space documents.
//!
//! ```json
//! { "version": 1, "kind": "abstract", "neq": [[0,1],[1,0]], "p": [[0,1],[1,0]] }
//! { "version": 1, "kind": "metric", "dist": [["0","1/2"],["1/2","0"]] }
//! { "version": 1, "kind": "uniform", "entourages": [[[1,0],[0,1]]] }
//! { "version": 1, "kind": "cantor", "depth": 3 }
//! ```
//!
//! Matrix shape and entry errors are raised while parsing, so they carry the
//! line and column of the offending value. Structural invariants (symmetry,
//! `p ⊆ neq`, metric and uniform axioms) are checked by [`SpaceDocument::to_space`].

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::path::Path;
use std::str::FromStr;

use num_rational::BigRational;
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::constructors::{cantor, from_metric, from_uniform, CantorSpec, MetricSpace, UniformBase};
use crate::error::{Error, Result};
use crate::space::{Inequality, Space};

pub const DOCUMENT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Abstract,
    Metric,
    Uniform,
    Cantor,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Abstract => "abstract",
            Kind::Metric => "metric",
            Kind::Uniform => "uniform",
            Kind::Cantor => "cantor",
        })
    }
}

/// A square 0/1 matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolMatrix(pub Vec<Vec<bool>>);

/// A square matrix of exact rationals, written as `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix(pub Vec<Vec<BigRational>>);

struct Bit(bool);

impl<'de> Deserialize<'de> for Bit {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Bit;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("0 or 1")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Bit, E> {
                match v {
                    0 => Ok(Bit(false)),
                    1 => Ok(Bit(true)),
                    _ => Err(E::invalid_value(de::Unexpected::Unsigned(v), &self)),
                }
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Bit, E> {
                Err(E::invalid_value(de::Unexpected::Signed(v), &self))
            }
            fn visit_bool<E: de::Error>(self, v: bool) -> std::result::Result<Bit, E> {
                Ok(Bit(v))
            }
        }
        d.deserialize_any(V)
    }
}

struct Rational(BigRational);

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Rational;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational string \"p/q\" or an integer")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rational, E> {
                BigRational::from_str(v.trim())
                    .map(Rational)
                    .map_err(|_| E::invalid_value(de::Unexpected::Str(v), &self))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rational, E> {
                Ok(Rational(BigRational::from_integer(v.into())))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rational, E> {
                Ok(Rational(BigRational::from_integer(v.into())))
            }
        }
        d.deserialize_any(V)
    }
}

/// Reads a square matrix row by row. A row whose length differs from the
/// first is rejected where it occurs.
struct SquareVisitor<T>(PhantomData<T>);

impl<'de, T: Deserialize<'de>> Visitor<'de> for SquareVisitor<T> {
    type Value = Vec<Vec<T>>;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a square matrix given as an array of rows")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Self::Value, A::Error> {
        let mut rows: Vec<Vec<T>> = Vec::new();
        while let Some(row) = seq.next_element::<Vec<T>>()? {
            let width = rows.first().map_or(row.len(), Vec::len);
            if row.len() != width {
                return Err(de::Error::custom(format!(
                    "matrix row {} has {} entries, expected {width}",
                    rows.len(),
                    row.len()
                )));
            }
            rows.push(row);
        }
        if let Some(first) = rows.first() {
            if first.len() != rows.len() {
                return Err(de::Error::custom(format!(
                    "matrix has {} rows of {} entries and is not square",
                    rows.len(),
                    first.len()
                )));
            }
        }
        Ok(rows)
    }
}

impl<'de> Deserialize<'de> for BoolMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = d.deserialize_seq(SquareVisitor::<Bit>(PhantomData))?;
        Ok(BoolMatrix(m.into_iter().map(|r| r.into_iter().map(|b| b.0).collect()).collect()))
    }
}

impl Serialize for BoolMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<u8>> = self.0.iter().map(|r| r.iter().map(|&b| u8::from(b)).collect()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = d.deserialize_seq(SquareVisitor::<Rational>(PhantomData))?;
        Ok(RationalMatrix(m.into_iter().map(|r| r.into_iter().map(|q| q.0).collect()).collect()))
    }
}

impl Serialize for RationalMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self.0.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
        rows.serialize(s)
    }
}

fn version<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<u32, D::Error> {
    let v = u32::deserialize(d)?;
    if v != DOCUMENT_VERSION {
        return Err(de::Error::custom(format!(
            "unsupported document version {v}, expected {DOCUMENT_VERSION}"
        )));
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDocument {
    #[serde(deserialize_with = "version")]
    pub version: u32,
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub neq: Option<BoolMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<BoolMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dist: Option<RationalMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entourages: Option<Vec<BoolMatrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    /// Free-form annotations, e.g. the point ordering of a product.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

fn missing(kind: Kind, field: &str) -> Error {
    Error::Parse(format!("a {kind} document needs a \"{field}\" field"))
}

impl SpaceDocument {
    fn bare(kind: Kind) -> Self {
        SpaceDocument {
            version: DOCUMENT_VERSION,
            kind,
            neq: None,
            p: None,
            dist: None,
            entourages: None,
            depth: None,
            metadata: BTreeMap::new(),
        }
    }

    /// An abstract document holding both point matrices.
    pub fn from_space(space: &Space) -> Self {
        SpaceDocument {
            neq: Some(BoolMatrix(space.inequality().to_matrix())),
            p: Some(BoolMatrix(space.point_apartness().to_matrix())),
            ..Self::bare(Kind::Abstract)
        }
    }

    pub fn from_metric(m: &MetricSpace) -> Self {
        SpaceDocument {
            dist: Some(RationalMatrix(m.to_matrix())),
            ..Self::bare(Kind::Metric)
        }
    }

    pub fn cantor(depth: usize) -> Self {
        SpaceDocument {
            depth: Some(depth),
            ..Self::bare(Kind::Cantor)
        }
    }

    pub fn with_metadata(mut self, key: &str, value: impl Into<String>) -> Self {
        self.metadata.insert(key.to_owned(), value.into());
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SpaceDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        doc.check_fields()?;
        Ok(doc)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json() + "\n")
            .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))
    }

    /// Rejects fields that do not belong to the document kind, and missing
    /// required ones.
    fn check_fields(&self) -> Result<()> {
        let present = [
            ("neq", self.neq.is_some()),
            ("p", self.p.is_some()),
            ("dist", self.dist.is_some()),
            ("entourages", self.entourages.is_some()),
            ("depth", self.depth.is_some()),
        ];
        let (required, optional): (&[&str], &[&str]) = match self.kind {
            Kind::Abstract => (&["neq", "p"], &[]),
            Kind::Metric => (&["dist"], &[]),
            Kind::Uniform => (&["entourages"], &["neq"]),
            Kind::Cantor => (&["depth"], &[]),
        };
        for (field, is_set) in present {
            if required.contains(&field) && !is_set {
                return Err(missing(self.kind, field));
            }
            if is_set && !required.contains(&field) && !optional.contains(&field) {
                return Err(Error::Parse(format!(
                    "field \"{field}\" does not belong in a {} document",
                    self.kind
                )));
            }
        }
        Ok(())
    }

    /// The metric of a metric or Cantor document.
    pub fn to_metric(&self) -> Result<MetricSpace> {
        self.check_fields()?;
        match self.kind {
            Kind::Metric => MetricSpace::new(self.dist.clone().expect("checked").0),
            Kind::Cantor => cantor(CantorSpec::new(self.depth.expect("checked"))?),
            k => Err(Error::InvalidArgument(format!("a {k} document has no metric"))),
        }
    }

    /// Builds the space, checking every invariant of its kind.
    pub fn to_space(&self) -> Result<Space> {
        self.check_fields()?;
        match self.kind {
            Kind::Abstract => Space::from_matrices(
                &self.neq.as_ref().expect("checked").0,
                &self.p.as_ref().expect("checked").0,
            ),
            Kind::Metric | Kind::Cantor => from_metric(&self.to_metric()?),
            Kind::Uniform => {
                let ents: Vec<Vec<Vec<bool>>> =
                    self.entourages.as_ref().expect("checked").iter().map(|m| m.0.clone()).collect();
                if ents.is_empty() {
                    return Err(Error::invariant("a uniform document needs at least one entourage"));
                }
                let u = UniformBase::from_matrices(&ents)?;
                let ineq = self.neq.as_ref().map(|m| Inequality::from_matrix(&m.0)).transpose()?;
                from_uniform(&u, ineq.as_ref())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abstract_round_trip() {
        let s = Space::from_rows(3, vec![0b110, 0b101, 0b011], vec![0b010, 0b001, 0]).unwrap();
        let doc = SpaceDocument::from_space(&s);
        let back = SpaceDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_space().unwrap(), s);
    }

    #[test]
    fn metric_document_uses_rational_strings() {
        let text = r#"{"version": 1, "kind": "metric",
            "dist": [["0", "1/2", "1"], ["1/2", "0", "1/2"], ["1", "1/2", "0"]]}"#;
        let doc = SpaceDocument::from_json(text).unwrap();
        let m = doc.to_metric().unwrap();
        assert_eq!(m.dist(0, 1), &BigRational::new(1.into(), 2.into()));
        assert!(doc.to_json().contains("\"1/2\""));
        assert_eq!(doc.to_space().unwrap(), Space::discrete(3).unwrap());
    }

    #[test]
    fn ragged_row_reports_its_line() {
        let text = "{\n\"version\": 1,\n\"kind\": \"abstract\",\n\"neq\": [[0, 1],\n[1]],\n\"p\": [[0,0],[0,0]]\n}";
        match SpaceDocument::from_json(text) {
            Err(Error::Parse(msg)) => assert!(msg.contains("line 5"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_entries_and_versions_are_parse_errors() {
        for text in [
            r#"{"version": 1, "kind": "abstract", "neq": [[0,2],[1,0]], "p": [[0,0],[0,0]]}"#,
            r#"{"version": 2, "kind": "cantor", "depth": 2}"#,
            r#"{"kind": "cantor", "depth": 2}"#,
            r#"{"version": 1, "kind": "metric", "dist": [["0","x"],["1","0"]]}"#,
            r#"{"version": 1, "kind": "cantor"}"#,
            r#"{"version": 1, "kind": "cantor", "depth": 2, "p": [[0]]}"#,
            r#"{"version": 1, "kind": "torus", "depth": 2}"#,
        ] {
            assert!(matches!(SpaceDocument::from_json(text), Err(Error::Parse(_))), "{text}");
        }
    }

    #[test]
    fn invariant_errors_surface_on_build() {
        let text = r#"{"version": 1, "kind": "abstract", "neq": [[0,1],[0,0]], "p": [[0,0],[0,0]]}"#;
        let doc = SpaceDocument::from_json(text).unwrap();
        assert!(matches!(doc.to_space(), Err(Error::Invariant(_))));
    }

    #[test]
    fn cantor_and_uniform_documents() {
        let c = SpaceDocument::cantor(2).to_space().unwrap();
        assert_eq!(c, Space::discrete(4).unwrap());
        let text = r#"{"version": 1, "kind": "uniform", "entourages": [[[1,0],[0,1]]]}"#;
        let u = SpaceDocument::from_json(text).unwrap().to_space().unwrap();
        assert_eq!(u, Space::discrete(2).unwrap());
    }
}
