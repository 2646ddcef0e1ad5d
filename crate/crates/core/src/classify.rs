//! Constraint extraction for unknown structure constants, and case-split
//! verification of parametrized families.
//!
//! An unknown table is an ordinary finite table whose entries carry
//! parameters (the structure constants). Running a suite on it leaves
//! residuals whose generator components are polynomials in those
//! parameters; each component is one constraint.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::axioms::{Residual, Suite};
use crate::error::{Error, Result};
use crate::ring::{Monomial, Poly, Subst, Var};
use crate::scalar::Content;
use crate::structure::Structure;

/// A normalized list of polynomials in parameters, read as the system
/// "all of these vanish".
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintSet<C> {
    polys: Vec<Poly<C>>,
}

/// Scales `p` to coprime integer coefficients with positive leading
/// coefficient. `None` for the zero polynomial.
pub fn normalize<C: Content>(p: &Poly<C>) -> Option<Poly<C>> {
    let (_, lead) = p.leading()?;
    let coeffs: Vec<C> = p.terms().map(|(_, c)| c.clone()).collect();
    let mut content = C::content(&coeffs);
    if lead.is_negative() {
        content = -content;
    }
    Some(p.scale(&(C::one() / content)))
}

impl<C: Content> ConstraintSet<C> {
    pub fn new<I: IntoIterator<Item = Poly<C>>>(polys: I) -> Self {
        let mut keyed: BTreeMap<String, Poly<C>> = BTreeMap::new();
        for p in polys {
            if let Some(n) = normalize(&p) {
                keyed.entry(n.to_string()).or_insert(n);
            }
        }
        ConstraintSet {
            polys: keyed.into_values().collect(),
        }
    }

    pub fn polys(&self) -> &[Poly<C>] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Membership after normalization.
    pub fn contains(&self, p: &Poly<C>) -> bool {
        match normalize(p) {
            Some(n) => self.polys.contains(&n),
            None => true,
        }
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.polys.iter().flat_map(|p| p.vars()).collect()
    }

    /// The polynomials after substitution, zeros dropped and renormalized.
    pub fn subst(&self, map: &Subst<C>) -> Self {
        Self::new(self.polys.iter().map(|p| p.subst(map)))
    }

    /// True iff every polynomial evaluates to zero at `point`. Variables
    /// missing from the point stay symbolic, so only identically vanishing
    /// polynomials count.
    pub fn vanishes_at(&self, point: &Subst<C>) -> bool {
        self.polys.iter().all(|p| p.subst(point).is_zero())
    }

    /// Reduced row echelon basis of the span when every polynomial has
    /// degree at most one; `None` otherwise. Two linear sets define the same
    /// affine subspace iff their bases are equal.
    pub fn linear_basis(&self) -> Option<Self> {
        if self.polys.iter().any(|p| p.total_degree() > 1) {
            return None;
        }
        let vars: Vec<Var> = self.variables().into_iter().collect();
        let ncols = vars.len() + 1;
        let mut rows: Vec<Vec<C>> = self
            .polys
            .iter()
            .map(|p| {
                let mut row: Vec<C> = vars.iter().map(|v| p.coeff(&Monomial::var(v.clone()))).collect();
                row.push(p.constant_term());
                row
            })
            .collect();
        let mut pivot_row = 0;
        for col in 0..ncols {
            let Some(found) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(pivot_row, found);
            let inv = C::one() / rows[pivot_row][col].clone();
            for x in rows[pivot_row].iter_mut() {
                *x = x.clone() * inv.clone();
            }
            for r in 0..rows.len() {
                if r != pivot_row && !rows[r][col].is_zero() {
                    let f = rows[r][col].clone();
                    let pivot = rows[pivot_row].clone();
                    for (x, p) in rows[r].iter_mut().zip(pivot) {
                        *x = x.clone() - p * f.clone();
                    }
                }
            }
            pivot_row += 1;
        }
        rows.truncate(pivot_row);
        Some(Self::new(rows.into_iter().map(|row| {
            let mut p = Poly::constant(row[vars.len()].clone());
            for (v, c) in vars.iter().zip(row) {
                p.add_term(Monomial::var(v.clone()), c);
            }
            p
        })))
    }

    /// The first point (by position) where exactly one of the two sets
    /// vanishes.
    pub fn disagreement<'a>(&self, other: &Self, points: &'a [Subst<C>]) -> Option<&'a Subst<C>> {
        points.iter().find(|pt| self.vanishes_at(pt) != other.vanishes_at(pt))
    }
}

impl<C: Content> fmt::Display for ConstraintSet<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.polys {
            writeln!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Suites that extract constraints on finite tables.
pub const CONSTRAINT_SUITES: [Suite; 3] = [Suite::GdCompat, Suite::NovikovSuper, Suite::GeneralizedGdPairs];

/// Collects every residual component coefficient of `suite` on `s` as a
/// constraint on the parameters. `unknown` names the table holding the
/// symbolic structure constants; it must be zero or carry at least one
/// parameter.
pub fn symbolic_constraints<C: Content>(s: &Structure<C>, unknown: &str, suite: Suite) -> Result<ConstraintSet<C>> {
    if !CONSTRAINT_SUITES.contains(&suite) {
        return Err(Error::InvalidArgument(format!(
            "suite `{}` does not extract constraints; use one of {}",
            suite.name(),
            CONSTRAINT_SUITES.map(|s| s.name()).join(", ")
        )));
    }
    if s.kind().is_conformal() {
        return Err(Error::KindMismatch(format!("constraints need finite tables, found {}", s.kind())));
    }
    let table = s.table(unknown)?;
    let symbolic = table.is_zero()
        || table
            .entries()
            .any(|(_, v)| v.components().any(|(_, p)| p.vars().iter().any(|x| !x.is_formal())));
    if !symbolic {
        return Err(Error::InvalidArgument(format!("table `{unknown}` has no symbolic entries")));
    }
    let report = suite.run(s)?;
    let mut polys = Vec::new();
    for f in &report.findings {
        match &f.residual {
            Residual::Module(v) => polys.extend(v.components().map(|(_, p)| p.clone())),
            Residual::Formal(sum) => polys.extend(sum.terms().map(|(_, p)| p.clone())),
        }
    }
    if let Some(p) = polys.iter().find(|p| p.vars().iter().any(|x| x.is_formal())) {
        return Err(Error::VariableClass(format!("residual {p} depends on formal variables")));
    }
    Ok(ConstraintSet::new(polys))
}

/// One branch of a case split: a substitution for some of the unknowns.
#[derive(Clone, Debug, PartialEq)]
pub struct Case<C> {
    pub name: String,
    pub subst: BTreeMap<String, Poly<C>>,
}

impl<C: Content> Case<C> {
    pub fn new<I, S>(name: impl Into<String>, subst: I) -> Self
    where
        I: IntoIterator<Item = (S, Poly<C>)>,
        S: Into<String>,
    {
        Case {
            name: name.into(),
            subst: subst.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        }
    }

    fn as_subst(&self) -> Result<Subst<C>> {
        for (bound, p) in &self.subst {
            if let Some(v) = p.vars().into_iter().find(|v| matches!(v, Var::Param(n) if self.subst.contains_key(&**n))) {
                return Err(Error::InvalidArgument(format!(
                    "case `{}`: `{v}` is substituted but also appears in the image of `{bound}`",
                    self.name
                )));
            }
        }
        Ok(self.subst.iter().map(|(k, v)| (Var::param(k), v.clone())).collect())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseResult<C> {
    pub name: String,
    /// Constraints that do not vanish identically after substitution.
    pub residuals: Vec<Poly<C>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyReport<C> {
    pub cases: Vec<CaseResult<C>>,
}

impl<C> FamilyReport<C> {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.residuals.is_empty())
    }
}

/// Substitutes each case into every constraint and records what survives.
pub fn verify_family<C: Content>(constraints: &ConstraintSet<C>, cases: &[Case<C>]) -> Result<FamilyReport<C>> {
    let mut out = Vec::with_capacity(cases.len());
    for case in cases {
        let map = case.as_subst()?;
        let residuals = constraints
            .polys()
            .iter()
            .map(|p| p.subst(&map))
            .filter(|p| !p.is_zero())
            .collect();
        out.push(CaseResult {
            name: case.name.clone(),
            residuals,
        });
    }
    Ok(FamilyReport { cases: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_poly;
    use crate::Rational;

    fn p(s: &str) -> Poly<Rational> {
        parse_poly(s).unwrap()
    }

    #[test]
    fn normalization() {
        let set = ConstraintSet::new([p("-2*c + 4*d"), p("1/3*c - 2/3*d"), p("0"), p("b*d")]);
        assert_eq!(set.to_string(), "b*d\nc - 2*d\n");
        let again = ConstraintSet::new(set.polys().iter().rev().cloned());
        assert_eq!(again, set);
    }

    #[test]
    fn linear_basis_detects_same_span() {
        let a = ConstraintSet::new([p("x - y"), p("y - z")]);
        let b = ConstraintSet::new([p("x - z"), p("2*x - y - z")]);
        assert_eq!(a.linear_basis(), b.linear_basis());
        let c = ConstraintSet::new([p("x - z")]);
        assert_ne!(a.linear_basis(), c.linear_basis());
        assert!(ConstraintSet::new([p("x*y")]).linear_basis().is_none());
    }

    #[test]
    fn family_cases() {
        let set = ConstraintSet::new([p("c*d"), p("b*d")]);
        let cases = [
            Case::new("d=0", [("d", p("0"))]),
            Case::new("b=c=0", [("b", p("0")), ("c", p("0"))]),
        ];
        assert!(verify_family(&set, &cases).unwrap().passed());
        let bad = verify_family(&set, &[Case::new("c=d=1", [("d", p("1")), ("c", p("1"))])]).unwrap();
        assert!(!bad.passed());
        assert!(bad.cases[0].residuals.contains(&p("1")));
        let clash = Case::new("loop", [("d", p("c")), ("c", p("1"))]);
        assert!(verify_family(&set, &[clash]).is_err());
    }
}
