//! JSON structure files.
//!
//! ```json
//! {
//!   "kind": "LieConformal",
//!   "rank": 1,
//!   "generators": [{"name": "L", "parity": "even"}],
//!   "parameters": [],
//!   "tables": {"bracket": [{"left": "L", "right": "L", "value": "(T1 + 2*l1)*L"}]}
//! }
//! ```
//!
//! Values are strings in the expression grammar; λ is spelled `l1..lr`.
//! Absent pairs are zero. An optional `"ilinear": i` or `"linear": true`
//! declares the shape of a `LieConformal` bracket.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::parse_mod_value;
use crate::freemod::{Generator, Signature};
use crate::lambda::{Family, ProductTable};
use crate::scalar::Coeff;
use crate::structure::{ShapeDecl, Structure, StructureKind};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub left: String,
    pub right: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub kind: String,
    pub rank: u32,
    pub generators: Vec<Generator>,
    #[serde(default)]
    pub parameters: Vec<String>,
    #[serde(default)]
    pub tables: BTreeMap<String, Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ilinear: Option<u32>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub linear: bool,
}

/// 1-based line of the first occurrence of `needle` in `text`.
fn line_of(text: &str, needle: &str) -> Option<usize> {
    text.find(needle).map(|at| text[..at].matches('\n').count() + 1)
}

impl StructureFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::File(format!("line {}, column {}: {e}", e.line(), e.column()))
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    /// Parses and validates every entry. `source` is the original text, used
    /// only to point errors at a line.
    pub fn to_structure<C: Coeff>(&self, source: Option<&str>) -> Result<Structure<C>> {
        let kind: StructureKind = self.kind.parse()?;
        let sig = Signature::new(self.rank, self.generators.clone(), self.parameters.clone())?;
        let mut tables = BTreeMap::new();
        for (role, entries) in &self.tables {
            let mut tab = ProductTable::new(&sig);
            for (k, e) in entries.iter().enumerate() {
                let locate = |err: Error| {
                    let quoted = serde_json::to_string(&e.value).expect("string serializes");
                    let line = source
                        .and_then(|t| line_of(t, &quoted))
                        .map(|l| format!("line {l}, "))
                        .unwrap_or_default();
                    Error::File(format!("{line}tables.{role}[{k}] ({}, {}): {err}", e.left, e.right))
                };
                let a = sig.find(&e.left).ok_or_else(|| locate(Error::UnknownGenerator(e.left.clone())))?;
                let b = sig.find(&e.right).ok_or_else(|| locate(Error::UnknownGenerator(e.right.clone())))?;
                if tab.get(a, b).is_some() {
                    return Err(locate(Error::InvalidArgument("duplicate entry".into())));
                }
                let v = parse_mod_value(&e.value, &sig).map_err(locate)?;
                tab.set(a, b, v);
            }
            tables.insert(role.clone(), tab);
        }
        let shape = match (self.ilinear, self.linear) {
            (Some(_), true) => {
                return Err(Error::File("`ilinear` and `linear` are mutually exclusive".into()));
            }
            (Some(i), false) => Some(ShapeDecl::ILinear(i)),
            (None, true) => Some(ShapeDecl::Linear),
            (None, false) => None,
        };
        Structure::new(kind, &sig, tables, shape)
    }

    /// Canonical file of a structure: roles in canonical order, entries in
    /// generator order, zero tables kept as empty lists.
    pub fn from_structure<C: Coeff>(s: &Structure<C>) -> Result<Self> {
        let sig = s.signature();
        let mut tables = BTreeMap::new();
        for (role, tab) in s.tables() {
            if tab.family() != Family::Lam {
                return Err(Error::File(format!("table `{role}` is written in μ; files use λ only")));
            }
            let entries = tab
                .entries()
                .map(|((a, b), v)| Entry {
                    left: sig.name(a).to_string(),
                    right: sig.name(b).to_string(),
                    value: v.to_string(),
                })
                .collect();
            tables.insert(role.to_string(), entries);
        }
        let (ilinear, linear) = match s.shape() {
            Some(ShapeDecl::ILinear(i)) => (Some(i), false),
            Some(ShapeDecl::Linear) => (None, true),
            None => (None, false),
        };
        Ok(StructureFile {
            kind: s.kind().tag().to_string(),
            rank: s.rank(),
            generators: sig.generators().to_vec(),
            parameters: sig.parameters().to_vec(),
            tables,
            ilinear,
            linear,
        })
    }
}

pub fn parse_structure<C: Coeff>(text: &str) -> Result<Structure<C>> {
    StructureFile::from_json(text)?.to_structure(Some(text))
}

pub fn print_structure<C: Coeff>(s: &Structure<C>) -> Result<String> {
    Ok(StructureFile::from_structure(s)?.to_json())
}

pub fn load_structure<C: Coeff>(path: &Path) -> Result<Structure<C>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::File(format!("{}: {e}", path.display())))?;
    parse_structure(&text).map_err(|e| match e {
        Error::File(m) => Error::File(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn save_structure<C: Coeff>(s: &Structure<C>, path: &Path) -> Result<()> {
    std::fs::write(path, print_structure(s)?).map_err(|e| Error::File(format!("{}: {e}", path.display())))
}
