//! Structure kinds and validated instances: a signature plus one product
//! table per role of the kind.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::axioms::shape;
use crate::error::{Error, Result};
use crate::freemod::Signature;
use crate::lambda::ProductTable;
use crate::scalar::Coeff;

pub const BRACKET: &str = "bracket";
pub const PRODUCT: &str = "product";
pub const CIRC: &str = "circ";
pub const DOT: &str = "dot";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StructureKind {
    LieConformal,
    NovikovConformalLeft,
    NovikovConformalRight,
    GdConformal,
    LieSuper,
    NovikovSuper,
    CommAssocSuper,
    GdBialgebra,
    NovikovPoisson,
    LiePoisson,
    GdNovikovPoisson,
    GeneralizedGd,
}

impl StructureKind {
    pub const ALL: [StructureKind; 12] = [
        StructureKind::LieConformal,
        StructureKind::NovikovConformalLeft,
        StructureKind::NovikovConformalRight,
        StructureKind::GdConformal,
        StructureKind::LieSuper,
        StructureKind::NovikovSuper,
        StructureKind::CommAssocSuper,
        StructureKind::GdBialgebra,
        StructureKind::NovikovPoisson,
        StructureKind::LiePoisson,
        StructureKind::GdNovikovPoisson,
        StructureKind::GeneralizedGd,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            StructureKind::LieConformal => "LieConformal",
            StructureKind::NovikovConformalLeft => "NovikovConformalLeft",
            StructureKind::NovikovConformalRight => "NovikovConformalRight",
            StructureKind::GdConformal => "GDConformal",
            StructureKind::LieSuper => "LieSuper",
            StructureKind::NovikovSuper => "NovikovSuper",
            StructureKind::CommAssocSuper => "CommAssocSuper",
            StructureKind::GdBialgebra => "GDBialgebra",
            StructureKind::NovikovPoisson => "NovikovPoisson",
            StructureKind::LiePoisson => "LiePoisson",
            StructureKind::GdNovikovPoisson => "GDNovikovPoisson",
            StructureKind::GeneralizedGd => "GeneralizedGD",
        }
    }

    /// Conformal kinds carry `T`/λ-dependent tables; the rest are finite.
    pub fn is_conformal(self) -> bool {
        matches!(
            self,
            StructureKind::LieConformal
                | StructureKind::NovikovConformalLeft
                | StructureKind::NovikovConformalRight
                | StructureKind::GdConformal
        )
    }

    /// Table roles, in canonical order. `GeneralizedGD` has `circ1..circr`.
    pub fn roles(self, rank: u32) -> Vec<String> {
        let fixed: &[&str] = match self {
            StructureKind::LieConformal | StructureKind::LieSuper => &[BRACKET],
            StructureKind::NovikovConformalLeft | StructureKind::NovikovConformalRight => &[PRODUCT],
            StructureKind::GdConformal => &[BRACKET, PRODUCT],
            StructureKind::NovikovSuper => &[CIRC],
            StructureKind::CommAssocSuper => &[DOT],
            StructureKind::GdBialgebra => &[BRACKET, CIRC],
            StructureKind::NovikovPoisson => &[CIRC, DOT],
            StructureKind::LiePoisson => &[BRACKET, DOT],
            StructureKind::GdNovikovPoisson => &[BRACKET, CIRC, DOT],
            StructureKind::GeneralizedGd => {
                let mut v = vec![BRACKET.to_string()];
                v.extend((1..=rank).map(|i| format!("{CIRC}{i}")));
                return v;
            }
        };
        fixed.iter().map(|s| s.to_string()).collect()
    }
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for StructureKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        StructureKind::ALL
            .into_iter()
            .find(|k| k.tag() == s)
            .ok_or_else(|| Error::KindMismatch(format!("unknown structure kind `{s}`")))
    }
}

/// Declared degree shape of a conformal bracket.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShapeDecl {
    ILinear(u32),
    Linear,
}

/// A validated structure instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Structure<C> {
    kind: StructureKind,
    sig: Arc<Signature>,
    tables: BTreeMap<String, ProductTable<C>>,
    shape: Option<ShapeDecl>,
}

impl<C: Coeff> Structure<C> {
    /// Validates roles, variable classes, parity homogeneity and the
    /// declared shape. Missing roles are zero tables.
    pub fn new(
        kind: StructureKind,
        sig: &Arc<Signature>,
        mut tables: BTreeMap<String, ProductTable<C>>,
        shape: Option<ShapeDecl>,
    ) -> Result<Self> {
        let roles = kind.roles(sig.rank());
        if let Some(extra) = tables.keys().find(|k| !roles.contains(k)) {
            return Err(Error::KindMismatch(format!("kind {kind} has no table role `{extra}`")));
        }
        for role in &roles {
            let t = tables
                .entry(role.clone())
                .or_insert_with(|| ProductTable::new(sig));
            if t.signature() != sig {
                return Err(Error::SignatureMismatch);
            }
            t.validate(kind.is_conformal())?;
        }
        if shape.is_some() && kind != StructureKind::LieConformal {
            return Err(Error::KindMismatch(format!(
                "shape declarations apply to LieConformal brackets, not {kind}"
            )));
        }
        if let Some(decl) = shape {
            let bracket = &tables[BRACKET];
            let violations = match decl {
                ShapeDecl::ILinear(i) => {
                    if i == 0 || i > sig.rank() {
                        return Err(Error::Shape(format!("i-linear index {i} outside 1..={}", sig.rank())));
                    }
                    shape::ilinear_violations(bracket, i)
                }
                ShapeDecl::Linear => shape::linear_violations(bracket),
            };
            if let Some((a, b, _)) = violations.first() {
                return Err(Error::Shape(format!(
                    "entry ({}, {}) = {} breaks the declared {:?} shape",
                    sig.name(*a),
                    sig.name(*b),
                    bracket.entry(*a, *b),
                    decl
                )));
            }
        }
        Ok(Structure {
            kind,
            sig: sig.clone(),
            tables,
            shape,
        })
    }

    /// Convenience constructor from `(role, table)` pairs.
    pub fn from_tables<I, S>(kind: StructureKind, sig: &Arc<Signature>, tables: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, ProductTable<C>)>,
        S: Into<String>,
    {
        Self::new(kind, sig, tables.into_iter().map(|(k, v)| (k.into(), v)).collect(), None)
    }

    pub fn kind(&self) -> StructureKind {
        self.kind
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn rank(&self) -> u32 {
        self.sig.rank()
    }

    pub fn shape(&self) -> Option<ShapeDecl> {
        self.shape
    }

    pub fn table(&self, role: &str) -> Result<&ProductTable<C>> {
        self.tables
            .get(role)
            .ok_or_else(|| Error::KindMismatch(format!("kind {} has no table role `{role}`", self.kind)))
    }

    pub fn tables(&self) -> impl Iterator<Item = (&str, &ProductTable<C>)> + '_ {
        self.tables.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn expect_kind(&self, kinds: &[StructureKind]) -> Result<()> {
        if kinds.contains(&self.kind) {
            Ok(())
        } else {
            Err(Error::KindMismatch(format!(
                "expected one of {}, found {}",
                kinds.iter().map(|k| k.tag()).collect::<Vec<_>>().join(", "),
                self.kind
            )))
        }
    }
}
