//! Axiom suites as residual producers.
//!
//! Every checker quantifies over generator tuples only: all identities are
//! sesquilinear (or bilinear) in each slot, so vanishing on generators is
//! equivalent to vanishing on the whole module. A structure passes a suite
//! iff every residual is the zero value.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, FailedInstance, Result};
use crate::freemod::{koszul, GenId, ModValue, Signature};
use crate::lambda::{point, product_at, subst_minus_lambda_t, Family, ProductTable};
use crate::liefun::FormalSum;
use crate::ring::Poly;
use crate::scalar::{sign, Coeff};
use crate::structure::{Structure, StructureKind, BRACKET, CIRC, DOT, PRODUCT};

/// A nonzero residual: either a λ-expression value or an element of an
/// annihilation/loop algebra.
#[derive(Clone, Debug, PartialEq)]
pub enum Residual<C> {
    Module(ModValue<C>),
    Formal(FormalSum<C>),
}

impl<C: Coeff> fmt::Display for Residual<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Residual::Module(v) => v.fmt(f),
            Residual::Formal(s) => s.fmt(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Finding<C> {
    pub axiom: String,
    pub tuple: Vec<String>,
    /// Positions of the tuple members in enumeration order; the sort key.
    pub order: Vec<usize>,
    pub residual: Residual<C>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport<C> {
    pub suite: String,
    pub findings: Vec<Finding<C>>,
    /// Axiom instances evaluated.
    pub checked: usize,
    /// Instances skipped (window checks only).
    pub skipped: usize,
}

impl<C: Coeff> CheckReport<C> {
    pub fn new(suite: impl Into<String>) -> Self {
        CheckReport {
            suite: suite.into(),
            findings: Vec::new(),
            checked: 0,
            skipped: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.findings.is_empty()
    }

    /// Counts one instance and keeps its residual if nonzero.
    pub fn record(&mut self, axiom: &str, sig: &Signature, tuple: &[GenId], residual: ModValue<C>) {
        self.checked += 1;
        if !residual.is_zero() {
            self.findings.push(Finding {
                axiom: axiom.to_string(),
                tuple: tuple.iter().map(|g| sig.name(*g).to_string()).collect(),
                order: tuple.to_vec(),
                residual: Residual::Module(residual),
            });
        }
    }

    /// Appends another report, prefixing its axiom ids with its suite name.
    pub fn absorb(&mut self, other: CheckReport<C>) {
        let prefix = other.suite.clone();
        self.checked += other.checked;
        self.skipped += other.skipped;
        self.findings.extend(other.findings.into_iter().map(|mut f| {
            f.axiom = format!("{prefix}/{}", f.axiom);
            f
        }));
    }

    pub fn finish(mut self) -> Self {
        self.findings
            .sort_by(|x, y| x.axiom.cmp(&y.axiom).then_with(|| x.order.cmp(&y.order)));
        self
    }

    pub fn failures(&self) -> Vec<FailedInstance> {
        self.findings
            .iter()
            .map(|f| FailedInstance {
                axiom: f.axiom.clone(),
                tuple: f.tuple.clone(),
                residual: f.residual.to_string(),
            })
            .collect()
    }

    /// `Ok(())` on pass, otherwise a precondition error carrying the findings.
    pub fn require(&self) -> Result<()> {
        if self.passed() {
            Ok(())
        } else {
            Err(Error::Precondition {
                suite: self.suite.clone(),
                failures: self.failures(),
            })
        }
    }
}

fn sgn<C: Coeff>(sig: &Signature, x: GenId, y: GenId) -> C {
    sign(koszul(sig.parity(x), sig.parity(y)))
}

fn gens<C: Coeff>(sig: &std::sync::Arc<Signature>) -> Vec<ModValue<C>> {
    (0..sig.len()).map(|g| ModValue::gen(sig, g)).collect()
}

fn pairs(n: usize) -> impl Iterator<Item = (GenId, GenId)> {
    (0..n).flat_map(move |a| (0..n).map(move |b| (a, b)))
}

fn triples(n: usize) -> impl Iterator<Item = (GenId, GenId, GenId)> {
    (0..n).flat_map(move |a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
}

fn same_signature<C: Coeff>(x: &ProductTable<C>, y: &ProductTable<C>) -> Result<()> {
    if x.signature() == y.signature() {
        Ok(())
    } else {
        Err(Error::SignatureMismatch)
    }
}

// ---------------------------------------------------------------- conformal

/// `[a_λ b] + (-1)^{αβ} [b_{-λ-T} a]`.
pub fn check_skew<C: Coeff>(bracket: &ProductTable<C>) -> Result<CheckReport<C>> {
    bracket.validate(true)?;
    let sig = bracket.signature();
    let mut rep = CheckReport::new("skew");
    for (a, b) in pairs(sig.len()) {
        let ba = subst_minus_lambda_t(&bracket.entry(b, a), bracket.family());
        let res = &bracket.entry(a, b) + &ba.scale_coeff(&sgn(sig, a, b));
        rep.record("skew", sig, &[a, b], res);
    }
    Ok(rep.finish())
}

/// `[a_λ[b_μ c]] - [[a_λ b]_{λ+μ} c] - (-1)^{αβ} [b_μ[a_λ c]]`.
pub fn check_jacobi<C: Coeff>(bracket: &ProductTable<C>) -> Result<CheckReport<C>> {
    bracket.validate(true)?;
    let sig = bracket.signature();
    let r = sig.rank();
    let (lam, mu, lpm) = (point::lam(r), point::mu(r), point::lam_plus_mu(r));
    let g = gens(sig);
    let br = |x: &ModValue<C>, nu: &[Poly<C>], y: &ModValue<C>| product_at(bracket, x, nu, y);
    let mut rep = CheckReport::new("jacobi");
    for (a, b, c) in triples(sig.len()) {
        let lhs = br(&g[a], &lam, &br(&g[b], &mu, &g[c]));
        let mid = br(&br(&g[a], &lam, &g[b]), &lpm, &g[c]);
        let last = br(&g[b], &mu, &br(&g[a], &lam, &g[c]));
        let res = &(&lhs - &mid) - &last.scale_coeff(&sgn(sig, a, b));
        rep.record("jacobi", sig, &[a, b, c], res);
    }
    Ok(rep.finish())
}

/// Skew-symmetry plus Jacobi.
pub fn check_lie_conformal<C: Coeff>(bracket: &ProductTable<C>) -> Result<CheckReport<C>> {
    let mut rep = CheckReport::new("lie-conformal");
    rep.absorb(check_skew(bracket)?);
    rep.absorb(check_jacobi(bracket)?);
    Ok(rep.finish())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chirality {
    Left,
    Right,
}

impl Chirality {
    pub fn suite_name(self) -> &'static str {
        match self {
            Chirality::Left => "novikov-left",
            Chirality::Right => "novikov-right",
        }
    }
}

/// Novikov conformal axioms.
///
/// Left: `(a_λb)_{λ+μ}c - a_λ(b_μc)` is super-symmetric in `a, b`, and
/// `(a_λb)_{λ+μ}c = (-1)^{βγ} (a_λc)_{-μ-T}b`.
///
/// Right: `a_λ(b_μc) - (a_λb)_{λ+μ}c` is super-symmetric in `b, c`, and
/// `a_λ(b_μc) = (-1)^{αβ} b_μ(a_λc)`.
pub fn check_novikov_conformal<C: Coeff>(product: &ProductTable<C>, side: Chirality) -> Result<CheckReport<C>> {
    product.validate(true)?;
    let sig = product.signature();
    let r = sig.rank();
    let (lam, mu, lpm) = (point::lam(r), point::mu(r), point::lam_plus_mu(r));
    let shifted_mu = point::shifted(Family::Mu, r);
    let g = gens(sig);
    let p = |x: &ModValue<C>, nu: &[Poly<C>], y: &ModValue<C>| product_at(product, x, nu, y);
    let outer = |x: GenId, y: GenId, z: GenId| p(&p(&g[x], &lam, &g[y]), &lpm, &g[z]);
    let inner = |x: GenId, y: GenId, z: GenId| p(&g[x], &lam, &p(&g[y], &mu, &g[z]));
    let mut rep = CheckReport::new(side.suite_name());
    for (a, b, c) in triples(sig.len()) {
        match side {
            Chirality::Left => {
                // (b_μa)_{λ+μ}c - b_μ(a_λc), the a↔b swap of the associator
                let swapped = &p(&p(&g[b], &mu, &g[a]), &lpm, &g[c]) - &p(&g[b], &mu, &p(&g[a], &lam, &g[c]));
                let assoc = &outer(a, b, c) - &inner(a, b, c);
                rep.record(
                    "left-symmetric",
                    sig,
                    &[a, b, c],
                    &assoc - &swapped.scale_coeff(&sgn(sig, a, b)),
                );
                let shifted = p(&p(&g[a], &lam, &g[c]), &shifted_mu, &g[b]);
                rep.record(
                    "right-commutative",
                    sig,
                    &[a, b, c],
                    &outer(a, b, c) - &shifted.scale_coeff(&sgn(sig, b, c)),
                );
            }
            Chirality::Right => {
                let assoc = &inner(a, b, c) - &outer(a, b, c);
                let swapped = &p(&g[a], &lam, &p(&g[c], &shifted_mu, &g[b]))
                    - &p(&p(&g[a], &lam, &g[c]), &shifted_mu, &g[b]);
                rep.record(
                    "right-symmetric",
                    sig,
                    &[a, b, c],
                    &assoc - &swapped.scale_coeff(&sgn(sig, b, c)),
                );
                let other = p(&g[b], &mu, &p(&g[a], &lam, &g[c]));
                rep.record(
                    "left-commutative",
                    sig,
                    &[a, b, c],
                    &inner(a, b, c) - &other.scale_coeff(&sgn(sig, a, b)),
                );
            }
        }
    }
    Ok(rep.finish())
}

/// The five-term compatibility between a Lie conformal bracket and a left
/// Novikov conformal product:
///
/// ```text
/// [(a_{-μ-T}b)_{-λ-T}c] + [a_{-μ-T}b]_{-λ-T}c - a_{-λ-μ-T}[b_{-λ-T}c]
///   - (-1)^{βγ} [(a_{-λ-T}c)_{-μ-T}b] - (-1)^{βγ} [a_{-λ-T}c]_{-μ-T}b
/// ```
pub fn check_gd_compat_conformal<C: Coeff>(
    bracket: &ProductTable<C>,
    product: &ProductTable<C>,
) -> Result<CheckReport<C>> {
    same_signature(bracket, product)?;
    bracket.validate(true)?;
    product.validate(true)?;
    let sig = bracket.signature();
    let r = sig.rank();
    let sl = point::shifted(Family::Lam, r);
    let sm = point::shifted(Family::Mu, r);
    let sum = point::shifted_sum(r);
    let g = gens(sig);
    let br = |x: &ModValue<C>, nu: &[Poly<C>], y: &ModValue<C>| product_at(bracket, x, nu, y);
    let p = |x: &ModValue<C>, nu: &[Poly<C>], y: &ModValue<C>| product_at(product, x, nu, y);
    let mut rep = CheckReport::new("compat");
    for (a, b, c) in triples(sig.len()) {
        let t1 = br(&p(&g[a], &sm, &g[b]), &sl, &g[c]);
        let t2 = p(&br(&g[a], &sm, &g[b]), &sl, &g[c]);
        let t3 = p(&g[a], &sum, &br(&g[b], &sl, &g[c]));
        let t4 = br(&p(&g[a], &sl, &g[c]), &sm, &g[b]);
        let t5 = p(&br(&g[a], &sl, &g[c]), &sm, &g[b]);
        let res = &(&(&t1 + &t2) - &t3) - &(&t4 + &t5).scale_coeff(&sgn(sig, b, c));
        rep.record("compat", sig, &[a, b, c], res);
    }
    Ok(rep.finish())
}

/// The same compatibility written for the right Novikov product `∘`:
///
/// ```text
/// [a_λ(b∘_μc)] + a∘_λ[b_μc] - [a_λb]∘_{λ+μ}c
///   - (-1)^{αβ} ([b_μ(a∘_λc)] + b∘_μ[a_λc])
/// ```
pub fn check_gd_compat_right<C: Coeff>(bracket: &ProductTable<C>, circ: &ProductTable<C>) -> Result<CheckReport<C>> {
    same_signature(bracket, circ)?;
    bracket.validate(true)?;
    circ.validate(true)?;
    let sig = bracket.signature();
    let r = sig.rank();
    let (lam, mu, lpm) = (point::lam(r), point::mu(r), point::lam_plus_mu(r));
    let g = gens(sig);
    let br = |x: &ModValue<C>, nu: &[Poly<C>], y: &ModValue<C>| product_at(bracket, x, nu, y);
    let o = |x: &ModValue<C>, nu: &[Poly<C>], y: &ModValue<C>| product_at(circ, x, nu, y);
    let mut rep = CheckReport::new("compat-right");
    for (a, b, c) in triples(sig.len()) {
        let t1 = br(&g[a], &lam, &o(&g[b], &mu, &g[c]));
        let t2 = o(&g[a], &lam, &br(&g[b], &mu, &g[c]));
        let t3 = o(&br(&g[a], &lam, &g[b]), &lpm, &g[c]);
        let t4 = br(&g[b], &mu, &o(&g[a], &lam, &g[c]));
        let t5 = o(&g[b], &mu, &br(&g[a], &lam, &g[c]));
        let res = &(&(&t1 + &t2) - &t3) - &(&t4 + &t5).scale_coeff(&sgn(sig, a, b));
        rep.record("compat-right", sig, &[a, b, c], res);
    }
    Ok(rep.finish())
}

/// Full GD conformal bialgebra suite: Lie conformal bracket, left Novikov
/// conformal product, and their compatibility.
pub fn check_gd_conformal<C: Coeff>(bracket: &ProductTable<C>, product: &ProductTable<C>) -> Result<CheckReport<C>> {
    let mut rep = CheckReport::new("gd-conformal");
    rep.absorb(check_lie_conformal(bracket)?);
    rep.absorb(check_novikov_conformal(product, Chirality::Left)?);
    let compat = check_gd_compat_conformal(bracket, product)?;
    rep.checked += compat.checked;
    rep.findings.extend(compat.findings);
    Ok(rep.finish())
}

/// Degree-shape checks for i-linear and linear brackets.
pub mod shape {
    use super::*;
    use crate::ring::Var;

    /// Entries with a monomial of degree > 1 in `{T_i, λ_i}`, together with
    /// the offending part of the entry.
    pub fn ilinear_violations<C: Coeff>(bracket: &ProductTable<C>, i: u32) -> Vec<(GenId, GenId, ModValue<C>)> {
        let fam = bracket.family();
        violations(bracket, |v| *v == Var::T(i) || *v == fam.var(i))
    }

    /// Entries with a monomial of degree > 1 in all `T`'s and `λ`'s jointly.
    pub fn linear_violations<C: Coeff>(bracket: &ProductTable<C>) -> Vec<(GenId, GenId, ModValue<C>)> {
        violations(bracket, |v| v.is_formal())
    }

    fn violations<C: Coeff>(
        bracket: &ProductTable<C>,
        counted: impl Fn(&Var) -> bool,
    ) -> Vec<(GenId, GenId, ModValue<C>)> {
        let mut out = Vec::new();
        for ((a, b), v) in bracket.entries() {
            let bad = v.map_polys(|p| {
                Poly::from_terms(
                    p.terms()
                        .filter(|(m, _)| m.factors().filter(|(w, _)| counted(w)).map(|(_, e)| e).sum::<u32>() > 1)
                        .map(|(m, c)| (m.clone(), c.clone())),
                )
            });
            if !bad.is_zero() {
                out.push((a, b, bad));
            }
        }
        out
    }

    pub fn check_ilinear<C: Coeff>(bracket: &ProductTable<C>, i: u32) -> Result<CheckReport<C>> {
        let r = bracket.rank();
        if i == 0 || i > r {
            return Err(Error::InvalidArgument(format!("index {i} outside 1..={r}")));
        }
        Ok(report(bracket, "ilinear", ilinear_violations(bracket, i)))
    }

    pub fn check_linear<C: Coeff>(bracket: &ProductTable<C>) -> Result<CheckReport<C>> {
        Ok(report(bracket, "linear", linear_violations(bracket)))
    }

    fn report<C: Coeff>(bracket: &ProductTable<C>, name: &str, bad: Vec<(GenId, GenId, ModValue<C>)>) -> CheckReport<C> {
        let sig = bracket.signature();
        let mut rep = CheckReport::new(name);
        rep.checked = sig.len() * sig.len();
        for (a, b, v) in bad {
            rep.findings.push(Finding {
                axiom: name.to_string(),
                tuple: vec![sig.name(a).to_string(), sig.name(b).to_string()],
                order: vec![a, b],
                residual: Residual::Module(v),
            });
        }
        rep.finish()
    }
}

// ------------------------------------------------------------------- finite

/// Bilinear evaluation of a finite (T- and λ-free) table.
fn fin<C: Coeff>(tab: &ProductTable<C>, x: &ModValue<C>, y: &ModValue<C>) -> ModValue<C> {
    product_at(tab, x, &point::zero(tab.rank()), y)
}

fn finite_tables<C: Coeff>(tabs: &[&ProductTable<C>]) -> Result<()> {
    for t in tabs {
        same_signature(tabs[0], t)?;
        t.validate(false)?;
    }
    Ok(())
}

/// `[a,b] + (-1)^{αβ}[b,a]` and the super Jacobi identity
/// `[a,[b,c]] - [[a,b],c] - (-1)^{αβ}[b,[a,c]]`.
pub fn check_lie_super<C: Coeff>(bracket: &ProductTable<C>) -> Result<CheckReport<C>> {
    finite_tables(&[bracket])?;
    let sig = bracket.signature();
    let g = gens(sig);
    let br = |x: &ModValue<C>, y: &ModValue<C>| fin(bracket, x, y);
    let mut rep = CheckReport::new("lie-super");
    for (a, b) in pairs(sig.len()) {
        let res = &br(&g[a], &g[b]) + &br(&g[b], &g[a]).scale_coeff(&sgn(sig, a, b));
        rep.record("skew", sig, &[a, b], res);
    }
    for (a, b, c) in triples(sig.len()) {
        let res = &(&br(&g[a], &br(&g[b], &g[c])) - &br(&br(&g[a], &g[b]), &g[c]))
            - &br(&g[b], &br(&g[a], &g[c])).scale_coeff(&sgn(sig, a, b));
        rep.record("jacobi", sig, &[a, b, c], res);
    }
    Ok(rep.finish())
}

/// `(a∘b)∘c - (-1)^{βγ}(a∘c)∘b` and
/// `(a∘b)∘c - a∘(b∘c) - (-1)^{αβ}((b∘a)∘c - b∘(a∘c))`.
pub fn check_novikov_super<C: Coeff>(circ: &ProductTable<C>) -> Result<CheckReport<C>> {
    finite_tables(&[circ])?;
    let sig = circ.signature();
    let g = gens(sig);
    let o = |x: &ModValue<C>, y: &ModValue<C>| fin(circ, x, y);
    let mut rep = CheckReport::new("novikov-super");
    for (a, b, c) in triples(sig.len()) {
        let res = &o(&o(&g[a], &g[b]), &g[c]) - &o(&o(&g[a], &g[c]), &g[b]).scale_coeff(&sgn(sig, b, c));
        rep.record("right-commutative", sig, &[a, b, c], res);
        let assoc = |x: GenId, y: GenId| &o(&o(&g[x], &g[y]), &g[c]) - &o(&g[x], &o(&g[y], &g[c]));
        let res = &assoc(a, b) - &assoc(b, a).scale_coeff(&sgn(sig, a, b));
        rep.record("left-symmetric", sig, &[a, b, c], res);
    }
    Ok(rep.finish())
}

/// `a·b - (-1)^{αβ} b·a` and `(a·b)·c - a·(b·c)`.
pub fn check_comm_assoc<C: Coeff>(dot: &ProductTable<C>) -> Result<CheckReport<C>> {
    finite_tables(&[dot])?;
    let sig = dot.signature();
    let g = gens(sig);
    let d = |x: &ModValue<C>, y: &ModValue<C>| fin(dot, x, y);
    let mut rep = CheckReport::new("comm-assoc");
    for (a, b) in pairs(sig.len()) {
        let res = &d(&g[a], &g[b]) - &d(&g[b], &g[a]).scale_coeff(&sgn(sig, a, b));
        rep.record("commutative", sig, &[a, b], res);
    }
    for (a, b, c) in triples(sig.len()) {
        let res = &d(&d(&g[a], &g[b]), &g[c]) - &d(&g[a], &d(&g[b], &g[c]));
        rep.record("associative", sig, &[a, b, c], res);
    }
    Ok(rep.finish())
}

/// The GD compatibility
/// `[a∘b,c] + [a,b]∘c - a∘[b,c] - (-1)^{βγ}[a∘c,b] - (-1)^{βγ}[a,c]∘b`.
pub fn check_gd_compat<C: Coeff>(bracket: &ProductTable<C>, circ: &ProductTable<C>) -> Result<CheckReport<C>> {
    finite_tables(&[bracket, circ])?;
    let sig = bracket.signature();
    let g = gens(sig);
    let br = |x: &ModValue<C>, y: &ModValue<C>| fin(bracket, x, y);
    let o = |x: &ModValue<C>, y: &ModValue<C>| fin(circ, x, y);
    let mut rep = CheckReport::new("gd-compat");
    for (a, b, c) in triples(sig.len()) {
        let lhs = &(&br(&o(&g[a], &g[b]), &g[c]) + &o(&br(&g[a], &g[b]), &g[c])) - &o(&g[a], &br(&g[b], &g[c]));
        let swapped = &br(&o(&g[a], &g[c]), &g[b]) + &o(&br(&g[a], &g[c]), &g[b]);
        let res = &lhs - &swapped.scale_coeff(&sgn(sig, b, c));
        rep.record("compat", sig, &[a, b, c], res);
    }
    Ok(rep.finish())
}

/// Lie superalgebra + Novikov superalgebra + compatibility.
pub fn check_gd_bialgebra<C: Coeff>(bracket: &ProductTable<C>, circ: &ProductTable<C>) -> Result<CheckReport<C>> {
    let mut rep = CheckReport::new("gd-bialgebra");
    rep.absorb(check_lie_super(bracket)?);
    rep.absorb(check_novikov_super(circ)?);
    rep.absorb(check_gd_compat(bracket, circ)?);
    Ok(rep.finish())
}

/// Compatibilities of a Novikov product `∘` with a commutative associative
/// product `·`: `(a∘b)·c - a∘(b·c) - (-1)^{αβ}((b∘a)·c - b∘(a·c))` and
/// `(a·b)∘c - a·(b∘c)`.
pub fn check_np_compat<C: Coeff>(circ: &ProductTable<C>, dot: &ProductTable<C>) -> Result<CheckReport<C>> {
    finite_tables(&[circ, dot])?;
    let sig = circ.signature();
    let g = gens(sig);
    let o = |x: &ModValue<C>, y: &ModValue<C>| fin(circ, x, y);
    let d = |x: &ModValue<C>, y: &ModValue<C>| fin(dot, x, y);
    let mut rep = CheckReport::new("np-compat");
    for (a, b, c) in triples(sig.len()) {
        let part = |x: GenId, y: GenId| &d(&o(&g[x], &g[y]), &g[c]) - &o(&g[x], &d(&g[y], &g[c]));
        let res = &part(a, b) - &part(b, a).scale_coeff(&sgn(sig, a, b));
        rep.record("circ-dot", sig, &[a, b, c], res);
        let res = &o(&d(&g[a], &g[b]), &g[c]) - &d(&g[a], &o(&g[b], &g[c]));
        rep.record("dot-circ", sig, &[a, b, c], res);
    }
    Ok(rep.finish())
}

pub fn check_novikov_poisson<C: Coeff>(circ: &ProductTable<C>, dot: &ProductTable<C>) -> Result<CheckReport<C>> {
    let mut rep = CheckReport::new("novikov-poisson");
    rep.absorb(check_novikov_super(circ)?);
    rep.absorb(check_comm_assoc(dot)?);
    rep.absorb(check_np_compat(circ, dot)?);
    Ok(rep.finish())
}

/// Leibniz rule `[a,b·c] - [a,b]·c - (-1)^{αβ} b·[a,c]`.
pub fn check_leibniz<C: Coeff>(bracket: &ProductTable<C>, dot: &ProductTable<C>) -> Result<CheckReport<C>> {
    finite_tables(&[bracket, dot])?;
    let sig = bracket.signature();
    let g = gens(sig);
    let br = |x: &ModValue<C>, y: &ModValue<C>| fin(bracket, x, y);
    let d = |x: &ModValue<C>, y: &ModValue<C>| fin(dot, x, y);
    let mut rep = CheckReport::new("leibniz");
    for (a, b, c) in triples(sig.len()) {
        let res = &(&br(&g[a], &d(&g[b], &g[c])) - &d(&br(&g[a], &g[b]), &g[c]))
            - &d(&g[b], &br(&g[a], &g[c])).scale_coeff(&sgn(sig, a, b));
        rep.record("leibniz", sig, &[a, b, c], res);
    }
    Ok(rep.finish())
}

pub fn check_lie_poisson<C: Coeff>(bracket: &ProductTable<C>, dot: &ProductTable<C>) -> Result<CheckReport<C>> {
    let mut rep = CheckReport::new("lie-poisson");
    rep.absorb(check_lie_super(bracket)?);
    rep.absorb(check_comm_assoc(dot)?);
    rep.absorb(check_leibniz(bracket, dot)?);
    Ok(rep.finish())
}

/// GD bialgebra, Novikov-Poisson and Lie-Poisson at once.
pub fn check_gd_novikov_poisson<C: Coeff>(
    bracket: &ProductTable<C>,
    circ: &ProductTable<C>,
    dot: &ProductTable<C>,
) -> Result<CheckReport<C>> {
    let mut rep = CheckReport::new("gd-novikov-poisson");
    rep.absorb(check_gd_bialgebra(bracket, circ)?);
    let mut np = check_np_compat(circ, dot)?;
    np.suite = "novikov-poisson".into();
    rep.absorb(check_comm_assoc(dot)?);
    rep.absorb(np);
    let mut lp = check_leibniz(bracket, dot)?;
    lp.suite = "lie-poisson".into();
    rep.absorb(lp);
    Ok(rep.finish())
}

/// Pairwise identities of a family of Novikov operations, for ordered
/// `i ≠ j`:
///
/// ```text
/// a∘i(b∘j c) - (a∘i b)∘j c - (-1)^{αβ}(b∘j(a∘i c) - (b∘j a)∘i c)
/// (c∘i a)∘j b + (c∘j a)∘i b - (-1)^{αβ}((c∘i b)∘j a + (c∘j b)∘i a)
/// ```
pub fn check_circ_pairs<C: Coeff>(circs: &[&ProductTable<C>]) -> Result<CheckReport<C>> {
    let mut rep = CheckReport::new("pairs");
    if circs.is_empty() {
        return Ok(rep);
    }
    finite_tables(circs)?;
    let sig = circs[0].signature();
    let g = gens(sig);
    for i in 0..circs.len() {
        for j in 0..circs.len() {
            if i == j {
                continue;
            }
            let oi = |x: &ModValue<C>, y: &ModValue<C>| fin(circs[i], x, y);
            let oj = |x: &ModValue<C>, y: &ModValue<C>| fin(circs[j], x, y);
            let (t2, t3) = (format!("assoc({},{})", i + 1, j + 1), format!("sym({},{})", i + 1, j + 1));
            for (a, b, c) in triples(sig.len()) {
                let s = sgn(sig, a, b);
                let lhs = &oi(&g[a], &oj(&g[b], &g[c])) - &oj(&oi(&g[a], &g[b]), &g[c]);
                let rhs = &oj(&g[b], &oi(&g[a], &g[c])) - &oi(&oj(&g[b], &g[a]), &g[c]);
                rep.record(&t2, sig, &[a, b, c], &lhs - &rhs.scale_coeff(&s));
                let lhs = &oj(&oi(&g[c], &g[a]), &g[b]) + &oi(&oj(&g[c], &g[a]), &g[b]);
                let rhs = &oj(&oi(&g[c], &g[b]), &g[a]) + &oi(&oj(&g[c], &g[b]), &g[a]);
                rep.record(&t3, sig, &[a, b, c], &lhs - &rhs.scale_coeff(&s));
            }
        }
    }
    Ok(rep.finish())
}

/// Lie superalgebra, every `(bracket, ∘i)` a GD bialgebra, and the pairwise
/// identities.
pub fn check_generalized_gd<C: Coeff>(bracket: &ProductTable<C>, circs: &[&ProductTable<C>]) -> Result<CheckReport<C>> {
    let mut rep = CheckReport::new("generalized-gd");
    rep.absorb(check_lie_super(bracket)?);
    for (i, circ) in circs.iter().enumerate() {
        let mut nov = check_novikov_super(circ)?;
        nov.suite = format!("novikov-super({})", i + 1);
        rep.absorb(nov);
        let mut compat = check_gd_compat(bracket, circ)?;
        compat.suite = format!("gd-compat({})", i + 1);
        rep.absorb(compat);
    }
    rep.absorb(check_circ_pairs(circs)?);
    Ok(rep.finish())
}

// ------------------------------------------------------------------- suites

/// A named suite applicable to some structure kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    LieConformal,
    Skew,
    Jacobi,
    NovikovLeft,
    NovikovRight,
    GdConformal,
    ILinear(u32),
    Linear,
    LieSuper,
    NovikovSuper,
    CommAssoc,
    GdCompat,
    GdBialgebra,
    NovikovPoisson,
    LiePoisson,
    GdNovikovPoisson,
    GeneralizedGd,
    GeneralizedGdPairs,
}

impl Suite {
    pub const NAMES: [&'static str; 18] = [
        "lie-conformal",
        "skew",
        "jacobi",
        "novikov-left",
        "novikov-right",
        "gd-conformal",
        "ilinear",
        "linear",
        "lie-super",
        "novikov-super",
        "comm-assoc",
        "gd-compat",
        "gd-bialgebra",
        "novikov-poisson",
        "lie-poisson",
        "gd-novikov-poisson",
        "generalized-gd",
        "generalized-gd-pairs",
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::LieConformal => "lie-conformal",
            Suite::Skew => "skew",
            Suite::Jacobi => "jacobi",
            Suite::NovikovLeft => "novikov-left",
            Suite::NovikovRight => "novikov-right",
            Suite::GdConformal => "gd-conformal",
            Suite::ILinear(_) => "ilinear",
            Suite::Linear => "linear",
            Suite::LieSuper => "lie-super",
            Suite::NovikovSuper => "novikov-super",
            Suite::CommAssoc => "comm-assoc",
            Suite::GdCompat => "gd-compat",
            Suite::GdBialgebra => "gd-bialgebra",
            Suite::NovikovPoisson => "novikov-poisson",
            Suite::LiePoisson => "lie-poisson",
            Suite::GdNovikovPoisson => "gd-novikov-poisson",
            Suite::GeneralizedGd => "generalized-gd",
            Suite::GeneralizedGdPairs => "generalized-gd-pairs",
        }
    }

    /// Parses a suite name; `ilinear` takes its index separately.
    pub fn parse(name: &str, index: Option<u32>) -> Result<Suite> {
        if name == "ilinear" {
            let i = index.ok_or_else(|| Error::InvalidArgument("suite `ilinear` needs an index".into()))?;
            return Ok(Suite::ILinear(i));
        }
        name.parse()
    }

    /// The suite that fully checks a kind.
    pub fn default_for(kind: StructureKind) -> Suite {
        match kind {
            StructureKind::LieConformal => Suite::LieConformal,
            StructureKind::NovikovConformalLeft => Suite::NovikovLeft,
            StructureKind::NovikovConformalRight => Suite::NovikovRight,
            StructureKind::GdConformal => Suite::GdConformal,
            StructureKind::LieSuper => Suite::LieSuper,
            StructureKind::NovikovSuper => Suite::NovikovSuper,
            StructureKind::CommAssocSuper => Suite::CommAssoc,
            StructureKind::GdBialgebra => Suite::GdBialgebra,
            StructureKind::NovikovPoisson => Suite::NovikovPoisson,
            StructureKind::LiePoisson => Suite::LiePoisson,
            StructureKind::GdNovikovPoisson => Suite::GdNovikovPoisson,
            StructureKind::GeneralizedGd => Suite::GeneralizedGd,
        }
    }

    pub fn applies_to(self, kind: StructureKind) -> bool {
        use StructureKind as K;
        match self {
            Suite::LieConformal | Suite::Skew | Suite::Jacobi | Suite::ILinear(_) | Suite::Linear => {
                kind == K::LieConformal
            }
            Suite::NovikovLeft | Suite::NovikovRight => {
                matches!(kind, K::NovikovConformalLeft | K::NovikovConformalRight)
            }
            Suite::GdConformal => kind == K::GdConformal,
            Suite::LieSuper => matches!(
                kind,
                K::LieSuper | K::GdBialgebra | K::LiePoisson | K::GdNovikovPoisson | K::GeneralizedGd
            ),
            Suite::NovikovSuper => matches!(
                kind,
                K::NovikovSuper | K::GdBialgebra | K::NovikovPoisson | K::GdNovikovPoisson
            ),
            Suite::CommAssoc => matches!(
                kind,
                K::CommAssocSuper | K::NovikovPoisson | K::LiePoisson | K::GdNovikovPoisson
            ),
            Suite::GdCompat | Suite::GdBialgebra => matches!(kind, K::GdBialgebra | K::GdNovikovPoisson),
            Suite::NovikovPoisson => matches!(kind, K::NovikovPoisson | K::GdNovikovPoisson),
            Suite::LiePoisson => matches!(kind, K::LiePoisson | K::GdNovikovPoisson),
            Suite::GdNovikovPoisson => kind == K::GdNovikovPoisson,
            Suite::GeneralizedGd | Suite::GeneralizedGdPairs => kind == K::GeneralizedGd,
        }
    }

    pub fn run<C: Coeff>(self, s: &Structure<C>) -> Result<CheckReport<C>> {
        if !self.applies_to(s.kind()) {
            return Err(Error::KindMismatch(format!(
                "suite `{}` does not apply to kind {}",
                self.name(),
                s.kind()
            )));
        }
        let t = |role: &str| s.table(role);
        let mut rep = match self {
            Suite::LieConformal => check_lie_conformal(t(BRACKET)?),
            Suite::Skew => check_skew(t(BRACKET)?),
            Suite::Jacobi => check_jacobi(t(BRACKET)?),
            Suite::NovikovLeft => check_novikov_conformal(t(PRODUCT)?, Chirality::Left),
            Suite::NovikovRight => check_novikov_conformal(t(PRODUCT)?, Chirality::Right),
            Suite::GdConformal => check_gd_conformal(t(BRACKET)?, t(PRODUCT)?),
            Suite::ILinear(i) => shape::check_ilinear(t(BRACKET)?, i),
            Suite::Linear => shape::check_linear(t(BRACKET)?),
            Suite::LieSuper => check_lie_super(t(BRACKET)?),
            Suite::NovikovSuper => check_novikov_super(t(CIRC)?),
            Suite::CommAssoc => check_comm_assoc(t(DOT)?),
            Suite::GdCompat => check_gd_compat(t(BRACKET)?, t(CIRC)?),
            Suite::GdBialgebra => check_gd_bialgebra(t(BRACKET)?, t(CIRC)?),
            Suite::NovikovPoisson => check_novikov_poisson(t(CIRC)?, t(DOT)?),
            Suite::LiePoisson => check_lie_poisson(t(BRACKET)?, t(DOT)?),
            Suite::GdNovikovPoisson => check_gd_novikov_poisson(t(BRACKET)?, t(CIRC)?, t(DOT)?),
            Suite::GeneralizedGd | Suite::GeneralizedGdPairs => {
                let circs = circ_family(s)?;
                if self == Suite::GeneralizedGd {
                    check_generalized_gd(t(BRACKET)?, &circs)
                } else {
                    check_circ_pairs(&circs)
                }
            }
        }?;
        rep.suite = self.name().to_string();
        Ok(rep)
    }
}

/// `circ1..circr` of a generalized GD structure.
pub fn circ_family<C: Coeff>(s: &Structure<C>) -> Result<Vec<&ProductTable<C>>> {
    (1..=s.rank()).map(|i| s.table(&format!("{CIRC}{i}"))).collect()
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(name: &str) -> Result<Suite> {
        Ok(match name {
            "lie-conformal" => Suite::LieConformal,
            "skew" => Suite::Skew,
            "jacobi" => Suite::Jacobi,
            "novikov-left" => Suite::NovikovLeft,
            "novikov-right" => Suite::NovikovRight,
            "gd-conformal" => Suite::GdConformal,
            "linear" => Suite::Linear,
            "lie-super" => Suite::LieSuper,
            "novikov-super" => Suite::NovikovSuper,
            "comm-assoc" => Suite::CommAssoc,
            "gd-compat" => Suite::GdCompat,
            "gd-bialgebra" => Suite::GdBialgebra,
            "novikov-poisson" => Suite::NovikovPoisson,
            "lie-poisson" => Suite::LiePoisson,
            "gd-novikov-poisson" => Suite::GdNovikovPoisson,
            "generalized-gd" => Suite::GeneralizedGd,
            "generalized-gd-pairs" => Suite::GeneralizedGdPairs,
            "ilinear" => return Err(Error::InvalidArgument("suite `ilinear` needs an index".into())),
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown suite `{other}` (known: {})",
                    Suite::NAMES.join(", ")
                )))
            }
        })
    }
}
