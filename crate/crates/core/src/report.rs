//! Verdicts with failure witnesses.

use std::fmt;

use serde::ser::{Serialize, SerializeMap, Serializer};
use serde::Serialize as DeriveSerialize;

use crate::subset::Subset;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessValue {
    Set(Subset),
    Point(usize),
}

/// A labelled tuple of sets and points that refutes a property.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Witness {
    entries: Vec<(String, WitnessValue)>,
}

impl Witness {
    pub fn new() -> Self {
        Witness::default()
    }

    pub fn set(mut self, label: &str, s: Subset) -> Self {
        self.entries.push((label.to_owned(), WitnessValue::Set(s)));
        self
    }

    pub fn point(mut self, label: &str, x: usize) -> Self {
        self.entries.push((label.to_owned(), WitnessValue::Point(x)));
        self
    }

    pub fn get_set(&self, label: &str) -> Option<Subset> {
        self.entries.iter().find_map(|(l, v)| match v {
            WitnessValue::Set(s) if l == label => Some(*s),
            _ => None,
        })
    }

    pub fn get_point(&self, label: &str) -> Option<usize> {
        self.entries.iter().find_map(|(l, v)| match v {
            WitnessValue::Point(x) if l == label => Some(*x),
            _ => None,
        })
    }

    pub fn entries(&self) -> &[(String, WitnessValue)] {
        &self.entries
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (label, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match v {
                WitnessValue::Set(s) => write!(f, "{label}={s}")?,
                WitnessValue::Point(x) => write!(f, "{label}={x}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.entries.len()))?;
        for (label, v) in &self.entries {
            match v {
                WitnessValue::Set(s) => map.serialize_entry(label, s)?,
                WitnessValue::Point(x) => map.serialize_entry(label, x)?,
            }
        }
        map.end()
    }
}

/// Outcome of deciding one property. A witness is present iff the verdict
/// is false.
#[derive(Clone, Debug, PartialEq, Eq, DeriveSerialize)]
pub struct PropertyReport {
    pub property: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl PropertyReport {
    pub fn pass(property: impl Into<String>) -> Self {
        PropertyReport {
            property: property.into(),
            holds: true,
            witness: None,
            note: None,
        }
    }

    pub fn fail(property: impl Into<String>, witness: Witness) -> Self {
        PropertyReport {
            property: property.into(),
            holds: false,
            witness: Some(witness),
            note: None,
        }
    }

    pub fn from_search(property: impl Into<String>, failure: Option<Witness>) -> Self {
        match failure {
            None => PropertyReport::pass(property),
            Some(w) => PropertyReport::fail(property, w),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<6} {}", self.property, if self.holds { "pass" } else { "FAIL" })?;
        if let Some(w) = &self.witness {
            write!(f, "  witness: {w}")?;
        }
        if let Some(n) = &self.note {
            write!(f, "  ({n})")?;
        }
        Ok(())
    }
}
