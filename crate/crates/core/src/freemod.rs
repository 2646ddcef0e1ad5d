//! Parity-graded generators and elements of the free module `C[T] ⊗ V`
//! (with coefficients that may also carry formal λ/μ variables).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Poly, Subst, Var, VarClass};
use crate::scalar::Coeff;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn bit(self) -> u8 {
        self as u8
    }

    pub fn from_bit(bit: u8) -> Parity {
        if bit & 1 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

impl std::ops::Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Koszul sign `(-1)^(p*q)`: true when both are odd.
pub fn koszul(p: Parity, q: Parity) -> bool {
    p.is_odd() && q.is_odd()
}

/// Parity of a module element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParityClass {
    Even,
    Odd,
    Mixed,
    Zero,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub parity: Parity,
}

impl Generator {
    pub fn even(name: &str) -> Generator {
        Generator {
            name: name.to_string(),
            parity: Parity::Even,
        }
    }

    pub fn odd(name: &str) -> Generator {
        Generator {
            name: name.to_string(),
            parity: Parity::Odd,
        }
    }
}

/// Index of a generator within its signature.
pub type GenId = usize;

/// Rank `r`, the homogeneous basis of `V` and the declared parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    rank: u32,
    generators: Vec<Generator>,
    parameters: Vec<String>,
}

fn reserved_variable_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some('T' | 'l' | 'm'))
        && name.len() > 1
        && chars.all(|c| c.is_ascii_digit())
}

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Signature {
    pub fn new(rank: u32, generators: Vec<Generator>, parameters: Vec<String>) -> Result<Arc<Self>> {
        if rank == 0 {
            return Err(Error::InvalidSignature("rank must be at least 1".into()));
        }
        if generators.is_empty() {
            return Err(Error::InvalidSignature("generator list is empty".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for name in generators.iter().map(|g| &g.name).chain(parameters.iter()) {
            if !valid_identifier(name) || reserved_variable_name(name) {
                return Err(Error::InvalidSignature(format!(
                    "`{name}` is not a usable generator or parameter name"
                )));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidSignature(format!("duplicate name `{name}`")));
            }
        }
        Ok(Arc::new(Signature {
            rank,
            generators,
            parameters,
        }))
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn parameters(&self) -> &[String] {
        &self.parameters
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generator(&self, id: GenId) -> &Generator {
        &self.generators[id]
    }

    pub fn parity(&self, id: GenId) -> Parity {
        self.generators[id].parity
    }

    pub fn name(&self, id: GenId) -> &str {
        &self.generators[id].name
    }

    pub fn find(&self, name: &str) -> Option<GenId> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn has_parameter(&self, name: &str) -> bool {
        self.parameters.iter().any(|p| p == name)
    }

    /// Same generators and parameters at a different rank.
    pub fn with_rank(&self, rank: u32) -> Result<Arc<Self>> {
        Signature::new(rank, self.generators.clone(), self.parameters.clone())
    }

    /// Same generators and rank with extra parameters appended (duplicates
    /// skipped).
    pub fn with_parameters<I: IntoIterator<Item = String>>(&self, extra: I) -> Result<Arc<Self>> {
        let mut params = self.parameters.clone();
        for p in extra {
            if !params.contains(&p) {
                params.push(p);
            }
        }
        Signature::new(self.rank, self.generators.clone(), params)
    }

    /// Checks that every variable of `p` is one of the allowed classes, has
    /// index within the rank, and (for parameters) is declared.
    pub fn check_vars<C: Coeff>(&self, p: &Poly<C>, allowed: &[VarClass]) -> Result<()> {
        for v in p.vars() {
            if !allowed.contains(&v.class()) {
                return Err(Error::VariableClass(format!(
                    "variable `{v}` is not allowed here"
                )));
            }
            match &v {
                Var::Param(name) if !self.has_parameter(name) => {
                    return Err(Error::UndeclaredParameter(name.to_string()));
                }
                _ => {}
            }
            if let Some(i) = v.index() {
                if i == 0 || i > self.rank {
                    return Err(Error::VariableClass(format!(
                        "variable `{v}` exceeds rank {}",
                        self.rank
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Finite combination `Σ p_g · g` of generators with polynomial
/// coefficients. Zero components are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModValue<C> {
    sig: Arc<Signature>,
    comps: BTreeMap<GenId, Poly<C>>,
}

impl<C: Coeff> ModValue<C> {
    pub fn zero(sig: &Arc<Signature>) -> Self {
        ModValue {
            sig: sig.clone(),
            comps: BTreeMap::new(),
        }
    }

    pub fn gen(sig: &Arc<Signature>, g: GenId) -> Self {
        Self::term(sig, g, Poly::one())
    }

    pub fn term(sig: &Arc<Signature>, g: GenId, p: Poly<C>) -> Self {
        assert!(g < sig.len(), "generator index out of range");
        let mut comps = BTreeMap::new();
        if !p.is_zero() {
            comps.insert(g, p);
        }
        ModValue {
            sig: sig.clone(),
            comps,
        }
    }

    pub fn from_components<I: IntoIterator<Item = (GenId, Poly<C>)>>(sig: &Arc<Signature>, it: I) -> Self {
        let mut v = Self::zero(sig);
        for (g, p) in it {
            v.add_component(g, &p);
        }
        v
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn component(&self, g: GenId) -> Poly<C> {
        self.comps.get(&g).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn components(&self) -> impl Iterator<Item = (GenId, &Poly<C>)> + '_ {
        self.comps.iter().map(|(g, p)| (*g, p))
    }

    pub fn add_component(&mut self, g: GenId, p: &Poly<C>) {
        assert!(g < self.sig.len(), "generator index out of range");
        if p.is_zero() {
            return;
        }
        let slot = self.comps.entry(g).or_default();
        *slot += p;
        if slot.is_zero() {
            self.comps.remove(&g);
        }
    }

    fn same_signature(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.sig, &other.sig) || self.sig == other.sig
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if !self.same_signature(other) {
            return Err(Error::SignatureMismatch);
        }
        Ok(self + other)
    }

    /// Multiplies every component by `p`.
    pub fn scale(&self, p: &Poly<C>) -> Self {
        Self::from_components(&self.sig, self.comps.iter().map(|(g, q)| (*g, p * q)))
    }

    pub fn scale_coeff(&self, c: &C) -> Self {
        Self::from_components(&self.sig, self.comps.iter().map(|(g, q)| (*g, q.scale(c))))
    }

    pub fn subst(&self, map: &Subst<C>) -> Self {
        Self::from_components(&self.sig, self.comps.iter().map(|(g, q)| (*g, q.subst(map))))
    }

    pub fn map_polys(&self, f: impl Fn(&Poly<C>) -> Poly<C>) -> Self {
        Self::from_components(&self.sig, self.comps.iter().map(|(g, q)| (*g, f(q))))
    }

    /// Moves the value to another signature with the same generator list
    /// (e.g. after a rank change).
    pub fn with_signature(&self, sig: &Arc<Signature>) -> Self {
        assert_eq!(sig.generators(), self.sig.generators());
        ModValue {
            sig: sig.clone(),
            comps: self.comps.clone(),
        }
    }

    pub fn parity(&self) -> ParityClass {
        let mut seen: Option<Parity> = None;
        for g in self.comps.keys() {
            let p = self.sig.parity(*g);
            match seen {
                None => seen = Some(p),
                Some(q) if q != p => return ParityClass::Mixed,
                _ => {}
            }
        }
        match seen {
            None => ParityClass::Zero,
            Some(Parity::Even) => ParityClass::Even,
            Some(Parity::Odd) => ParityClass::Odd,
        }
    }

    pub fn check_vars(&self, allowed: &[VarClass]) -> Result<()> {
        self.comps.values().try_for_each(|p| self.sig.check_vars(p, allowed))
    }
}

impl<C: Coeff> AddAssign<&ModValue<C>> for ModValue<C> {
    fn add_assign(&mut self, rhs: &ModValue<C>) {
        assert!(self.same_signature(rhs), "signature mismatch");
        for (g, p) in &rhs.comps {
            self.add_component(*g, p);
        }
    }
}

impl<C: Coeff> SubAssign<&ModValue<C>> for ModValue<C> {
    fn sub_assign(&mut self, rhs: &ModValue<C>) {
        assert!(self.same_signature(rhs), "signature mismatch");
        for (g, p) in &rhs.comps {
            self.add_component(*g, &-p);
        }
    }
}

impl<C: Coeff> Add for &ModValue<C> {
    type Output = ModValue<C>;
    fn add(self, rhs: &ModValue<C>) -> ModValue<C> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<C: Coeff> Sub for &ModValue<C> {
    type Output = ModValue<C>;
    fn sub(self, rhs: &ModValue<C>) -> ModValue<C> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<C: Coeff> Neg for &ModValue<C> {
    type Output = ModValue<C>;
    fn neg(self) -> ModValue<C> {
        self.map_polys(|p| -p)
    }
}

impl<C: Coeff> fmt::Display for ModValue<C> {
    /// `(T1 + 2*l1)*L - a*M`, in generator order; `0` when empty.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return f.write_str("0");
        }
        for (k, (g, p)) in self.comps.iter().enumerate() {
            let name = self.sig.name(*g);
            if p.len() == 1 {
                let (m, c) = p.leading().expect("nonzero");
                let negative = c.is_negative();
                match (k, negative) {
                    (0, true) => f.write_str("-")?,
                    (0, false) => {}
                    (_, true) => f.write_str(" - ")?,
                    (_, false) => f.write_str(" + ")?,
                }
                let abs = c.abs();
                match (m.is_one(), abs.is_one()) {
                    (true, true) => write!(f, "{name}")?,
                    (true, false) => write!(f, "{abs}*{name}")?,
                    (false, true) => write!(f, "{m}*{name}")?,
                    (false, false) => write!(f, "{abs}*{m}*{name}")?,
                }
            } else {
                if k > 0 {
                    f.write_str(" + ")?;
                }
                write!(f, "({p})*{name}")?;
            }
        }
        Ok(())
    }
}
