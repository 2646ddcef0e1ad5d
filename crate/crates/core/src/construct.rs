//! Catalog structures and the constructions between structure kinds.
//!
//! Constructions that promise a verified output check their input first and
//! refuse with [`Error::Precondition`] on failure; `force` skips that check
//! so the converse directions can be explored.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::axioms::{self, shape, Chirality, CheckReport};
use crate::error::{Error, Result};
use crate::freemod::{koszul, GenId, Generator, ModValue, Signature};
use crate::lambda::{subst_minus_lambda_t, ProductTable};
use crate::ring::{Monomial, Poly, Var, VarClass};
use crate::scalar::{sign, Coeff};
use crate::structure::{ShapeDecl, Structure, StructureKind, BRACKET, CIRC, DOT, PRODUCT};

fn sgn<C: Coeff>(sig: &Signature, a: GenId, b: GenId) -> C {
    sign(koszul(sig.parity(a), sig.parity(b)))
}

fn precondition<C: Coeff>(report: Result<CheckReport<C>>, force: bool) -> Result<()> {
    let report = report?;
    if force {
        Ok(())
    } else {
        report.require()
    }
}

fn single<C: Coeff>(kind: StructureKind, sig: &Arc<Signature>, role: &str, tab: ProductTable<C>) -> Result<Structure<C>> {
    Structure::from_tables(kind, sig, [(role, tab)])
}

/// Parameter names of `p` that are not yet declared on `sig`.
fn new_params<C: Coeff>(sig: &Signature, polys: &[&Poly<C>]) -> Vec<String> {
    let mut names = BTreeSet::new();
    for p in polys {
        for v in p.vars() {
            match v {
                Var::Param(n) if !sig.has_parameter(&n) => {
                    names.insert(n.to_string());
                }
                _ => {}
            }
        }
    }
    names.into_iter().collect()
}

// ------------------------------------------------------------------ catalog

/// Current Lie conformal superalgebra `[a_λ b] = [a, b]` of rank `r` over
/// a finite Lie superalgebra.
pub fn current<C: Coeff>(lie: &Structure<C>, r: u32, force: bool) -> Result<Structure<C>> {
    lie.expect_kind(&[StructureKind::LieSuper])?;
    precondition(axioms::check_lie_super(lie.table(BRACKET)?), force)?;
    let sig = lie.signature().with_rank(r)?;
    let tab = lie.table(BRACKET)?.with_signature(&sig);
    single(StructureKind::LieConformal, &sig, BRACKET, tab)
}

/// `[L^i_λ L^j] = T_i L^j + λ_i L^j + λ_j L^i`; the generator is `L` for
/// `r = 1` and `L1..Lr` otherwise.
pub fn virasoro<C: Coeff>(r: u32) -> Result<Structure<C>> {
    let names: Vec<String> = if r == 1 {
        vec!["L".into()]
    } else {
        (1..=r).map(|i| format!("L{i}")).collect()
    };
    let sig = Signature::new(r, names.iter().map(|n| Generator::even(n)).collect(), vec![])?;
    let mut tab = ProductTable::new(&sig);
    for i in 0..r as usize {
        for j in 0..r as usize {
            let (ti, li, lj) = (Poly::t(i as u32 + 1), Poly::lam(i as u32 + 1), Poly::lam(j as u32 + 1));
            let v = ModValue::from_components(&sig, [(j, ti + li), (i, lj)]);
            tab.set(i, j, v);
        }
    }
    single(StructureKind::LieConformal, &sig, BRACKET, tab)
}

/// `[L_λ L] = Σ_{i≤s} (λ_{s+i} T_i - λ_i T_{s+i}) L` for `r = 2s`.
pub fn hamiltonian<C: Coeff>(r: u32) -> Result<Structure<C>> {
    if r == 0 || r % 2 == 1 {
        return Err(Error::InvalidArgument(format!("hamiltonian needs an even rank, got {r}")));
    }
    let s = r / 2;
    let sig = Signature::new(r, vec![Generator::even("L")], vec![])?;
    let mut p = Poly::zero();
    for i in 1..=s {
        p += &(Poly::lam(s + i) * Poly::t(i) - Poly::lam(i) * Poly::t(s + i));
    }
    let mut tab = ProductTable::new(&sig);
    tab.set(0, 0, ModValue::term(&sig, 0, p));
    single(StructureKind::LieConformal, &sig, BRACKET, tab)
}

/// The three rank-one Novikov conformal algebras `C[T]x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rank1Case {
    /// `x_λ x = 0`.
    Zero,
    /// `x_λ x = x`.
    Assoc,
    /// `x_λ x = (λ + T + a) x`.
    Va,
}

pub fn rank1_novikov<C: Coeff>(case: Rank1Case) -> Result<Structure<C>> {
    let params = if case == Rank1Case::Va { vec!["a".to_string()] } else { vec![] };
    let sig = Signature::new(1, vec![Generator::even("x")], params)?;
    let mut tab = ProductTable::new(&sig);
    match case {
        Rank1Case::Zero => {}
        Rank1Case::Assoc => tab.set_named("x", "x", &[("x", Poly::one())]),
        Rank1Case::Va => tab.set_named("x", "x", &[("x", Poly::lam(1) + Poly::t(1) + Poly::param("a"))]),
    }
    single(StructureKind::NovikovConformalLeft, &sig, PRODUCT, tab)
}

/// The super Novikov conformal algebra `C[T]a ⊕ C[T]b` (`b` odd) with
/// `a_λa = (λ+T+C1)a`, `a_λb = (λ+T+C1)b`, `b_λa = (λ+T+C2)b`, `b_λb = 0`.
pub fn ex1_super_novikov<C: Coeff>() -> Result<Structure<C>> {
    let sig = Signature::new(
        1,
        vec![Generator::even("a"), Generator::odd("b")],
        vec!["C1".into(), "C2".into()],
    )?;
    let base = Poly::lam(1) + Poly::t(1);
    let (c1, c2) = (Poly::param("C1"), Poly::param("C2"));
    let mut tab = ProductTable::new(&sig);
    tab.set_named("a", "a", &[("a", &base + &c1)]);
    tab.set_named("a", "b", &[("b", &base + &c1)]);
    tab.set_named("b", "a", &[("b", &base + &c2)]);
    single(StructureKind::NovikovConformalLeft, &sig, PRODUCT, tab)
}

fn two_dim_lie_table<C: Coeff>(sig: &Arc<Signature>) -> ProductTable<C> {
    let mut tab = ProductTable::new(sig);
    tab.set_named("e1", "e2", &[("e2", Poly::one())]);
    tab.set_named("e2", "e1", &[("e2", Poly::int(-1))]);
    tab
}

/// The 2-dim Lie algebra `[e1, e2] = e2`.
pub fn two_dim_lie<C: Coeff>() -> Result<Structure<C>> {
    let sig = Signature::new(1, vec![Generator::even("e1"), Generator::even("e2")], vec![])?;
    single(StructureKind::LieSuper, &sig, BRACKET, two_dim_lie_table(&sig))
}

/// `sl2` with `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
pub fn sl2<C: Coeff>() -> Result<Structure<C>> {
    let sig = Signature::new(
        1,
        vec![Generator::even("h"), Generator::even("e"), Generator::even("f")],
        vec![],
    )?;
    let mut tab = ProductTable::new(&sig);
    tab.set_named("h", "e", &[("e", Poly::int(2))]);
    tab.set_named("e", "h", &[("e", Poly::int(-2))]);
    tab.set_named("h", "f", &[("f", Poly::int(-2))]);
    tab.set_named("f", "h", &[("f", Poly::int(2))]);
    tab.set_named("e", "f", &[("h", Poly::one())]);
    tab.set_named("f", "e", &[("h", Poly::int(-1))]);
    single(StructureKind::LieSuper, &sig, BRACKET, tab)
}

fn gd2dim_circ<C: Coeff>(sig: &Arc<Signature>, suffix: &str) -> ProductTable<C> {
    let p = |n: &str| Poly::<C>::param(&format!("{n}{suffix}"));
    let mut circ = ProductTable::new(sig);
    circ.set_named("e1", "e1", &[("e1", p("a")), ("e2", p("b"))]);
    circ.set_named("e1", "e2", &[("e1", -p("d")), ("e2", p("c"))]);
    circ.set_named("e2", "e1", &[("e1", p("d")), ("e2", p("a"))]);
    circ.set_named("e2", "e2", &[("e2", p("d"))]);
    circ
}

fn e1e2() -> Vec<Generator> {
    vec![Generator::even("e1"), Generator::even("e2")]
}

/// `[e1, e2] = e2` with a fully symbolic `∘`: `ei∘ej = cij1 e1 + cij2 e2`.
pub fn gd2dim_unknown<C: Coeff>() -> Result<Structure<C>> {
    let mut names = Vec::new();
    for i in 1..=2 {
        for j in 1..=2 {
            for l in 1..=2 {
                names.push(format!("c{i}{j}{l}"));
            }
        }
    }
    let sig = Signature::new(1, e1e2(), names)?;
    let mut circ = ProductTable::new(&sig);
    for (i, a) in ["e1", "e2"].iter().enumerate() {
        for (j, b) in ["e1", "e2"].iter().enumerate() {
            let c = |l: usize| Poly::param(&format!("c{}{}{l}", i + 1, j + 1));
            circ.set_named(a, b, &[("e1", c(1)), ("e2", c(2))]);
        }
    }
    Structure::from_tables(
        StructureKind::GdBialgebra,
        &sig,
        [(BRACKET, two_dim_lie_table(&sig)), (CIRC, circ)],
    )
}

/// The 2-dim GD bialgebra family on `[e1, e2] = e2` with
/// `e1∘e1 = a e1 + b e2`, `e1∘e2 = -d e1 + c e2`, `e2∘e1 = d e1 + a e2`,
/// `e2∘e2 = d e2`, symbolic in `a, b, c, d`.
pub fn gd2dim_family<C: Coeff>() -> Result<Structure<C>> {
    let sig = Signature::new(1, e1e2(), ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect())?;
    Structure::from_tables(
        StructureKind::GdBialgebra,
        &sig,
        [(BRACKET, two_dim_lie_table(&sig)), (CIRC, gd2dim_circ(&sig, ""))],
    )
}

/// Two copies of the 2-dim family as a rank-2 generalized GD candidate,
/// with parameters `a1..d1` for `∘1` and `a2..d2` for `∘2`.
pub fn generalized_gd2dim_family<C: Coeff>() -> Result<Structure<C>> {
    let mut names = Vec::new();
    for i in 1..=2 {
        for n in ["a", "b", "c", "d"] {
            names.push(format!("{n}{i}"));
        }
    }
    let sig = Signature::new(2, e1e2(), names)?;
    Structure::from_tables(
        StructureKind::GeneralizedGd,
        &sig,
        [
            (BRACKET, two_dim_lie_table(&sig)),
            ("circ1", gd2dim_circ(&sig, "1")),
            ("circ2", gd2dim_circ(&sig, "2")),
        ],
    )
}

/// The rank-2 generalized GD algebra on `[e1, e2] = e2` with
/// `e1∘1 e1 = e2` and `e1∘2 e1 = e1`, `e1∘2 e2 = e2` (all else zero).
pub fn generalized_gd_example<C: Coeff>() -> Result<Structure<C>> {
    let sig = Signature::new(2, e1e2(), vec![])?;
    let mut c1 = ProductTable::new(&sig);
    c1.set_named("e1", "e1", &[("e2", Poly::one())]);
    let mut c2 = ProductTable::new(&sig);
    c2.set_named("e1", "e1", &[("e1", Poly::one())]);
    c2.set_named("e1", "e2", &[("e2", Poly::one())]);
    Structure::from_tables(
        StructureKind::GeneralizedGd,
        &sig,
        [(BRACKET, two_dim_lie_table(&sig)), ("circ1", c1), ("circ2", c2)],
    )
}

/// `C[x]/(x^n)` on the basis `x0..x{n-1}` with the truncated product and
/// `a∘b = a·Db`, `D = x d/dx`; so `x^i ∘ x^j = j x^{i+j}`.
///
/// The plain `d/dx` is not a derivation of the truncated ring, so it would
/// not give a Novikov-Poisson algebra; the Euler operator is.
pub fn truncated_poly_np<C: Coeff>(n: u32) -> Result<Structure<C>> {
    if n == 0 {
        return Err(Error::InvalidArgument("truncated polynomial algebra needs n >= 1".into()));
    }
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let sig = Signature::new(1, names.iter().map(|s| Generator::even(s)).collect(), vec![])?;
    let mut dot = ProductTable::new(&sig);
    let mut circ = ProductTable::new(&sig);
    for i in 0..n as usize {
        for j in 0..n as usize {
            if i + j < n as usize {
                dot.set(i, j, ModValue::gen(&sig, i + j));
                circ.set(i, j, ModValue::term(&sig, i + j, Poly::int(j as i64)));
            }
        }
    }
    Structure::from_tables(StructureKind::NovikovPoisson, &sig, [(CIRC, circ), (DOT, dot)])
}

/// Replaces parameters by polynomials in the remaining ones (and possibly
/// new parameters, which get declared).
pub fn substitute_params<C: Coeff>(s: &Structure<C>, values: &BTreeMap<String, Poly<C>>) -> Result<Structure<C>> {
    let sig = s.signature();
    for name in values.keys() {
        if !sig.has_parameter(name) {
            return Err(Error::UndeclaredParameter(name.clone()));
        }
    }
    let mut params: Vec<String> = sig
        .parameters()
        .iter()
        .filter(|p| !values.contains_key(*p))
        .cloned()
        .collect();
    for p in values.values() {
        for v in p.vars() {
            match v {
                Var::Param(n) if !params.iter().any(|q| **q == *n) => params.push(n.to_string()),
                Var::Param(_) => {}
                other => {
                    return Err(Error::VariableClass(format!(
                        "parameter values must not contain formal variable {other}"
                    )))
                }
            }
        }
    }
    params.sort();
    let new_sig = Signature::new(sig.rank(), sig.generators().to_vec(), params)?;
    let map = values.iter().map(|(k, v)| (Var::param(k), v.clone())).collect();
    let tables: BTreeMap<String, ProductTable<C>> = s
        .tables()
        .map(|(role, t)| {
            let moved = t.with_signature(&new_sig);
            (role.to_string(), moved.map_entries(|_, _, v| v.subst(&map)))
        })
        .collect();
    Structure::new(s.kind(), &new_sig, tables, s.shape())
}

// -------------------------------------------------------------------- lifts

/// `[a_λ b] = a_λ b - (-1)^{αβ} b_{-λ-T} a`.
pub fn novikov_commutator<C: Coeff>(product: &ProductTable<C>) -> ProductTable<C> {
    let sig = product.signature().clone();
    product.map_entries(|a, b, v| {
        let swapped = subst_minus_lambda_t(&product.entry(b, a), product.family());
        v - &swapped.scale_coeff(&sgn(&sig, a, b))
    })
}

/// Commutator bracket of a Novikov conformal superalgebra (either
/// chirality).
pub fn lift_novikov_to_lie<C: Coeff>(nov: &Structure<C>, force: bool) -> Result<Structure<C>> {
    let side = match nov.kind() {
        StructureKind::NovikovConformalLeft => Chirality::Left,
        StructureKind::NovikovConformalRight => Chirality::Right,
        other => {
            return Err(Error::KindMismatch(format!(
                "novikov-to-lie needs a Novikov conformal structure, found {other}"
            )))
        }
    };
    let product = nov.table(PRODUCT)?;
    precondition(axioms::check_novikov_conformal(product, side), force)?;
    single(StructureKind::LieConformal, nov.signature(), BRACKET, novikov_commutator(product))
}

/// The left Novikov conformal product together with its commutator
/// bracket, as a GD conformal structure.
pub fn novikov_gd_pair<C: Coeff>(nov: &Structure<C>, force: bool) -> Result<Structure<C>> {
    nov.expect_kind(&[StructureKind::NovikovConformalLeft])?;
    let product = nov.table(PRODUCT)?;
    precondition(axioms::check_novikov_conformal(product, Chirality::Left), force)?;
    Structure::from_tables(
        StructureKind::GdConformal,
        nov.signature(),
        [(BRACKET, novikov_commutator(product)), (PRODUCT, product.clone())],
    )
}

/// Target of [`lift_np`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NpLift {
    /// `a_λ b = (λ+T)(a·b) + a∘b`.
    NovikovConformal,
    /// The product above with `[a_λ b] = (T+2λ)(a·b) + a∘b - (-1)^{αβ} b∘a`.
    GdConformal,
    /// The product above with
    /// `[a_λ b] = T(b∘a) + λ(b∘a + (-1)^{αβ} a∘b) + [b,a]`;
    /// needs the full Gel'fand-Dorfman Novikov-Poisson data.
    GdNpConformal,
}

/// Rank-one conformal structures from a Novikov-Poisson superalgebra.
pub fn lift_np<C: Coeff>(np: &Structure<C>, mode: NpLift, force: bool) -> Result<Structure<C>> {
    match mode {
        NpLift::GdNpConformal => {
            np.expect_kind(&[StructureKind::GdNovikovPoisson])?;
            precondition(
                axioms::check_gd_novikov_poisson(np.table(BRACKET)?, np.table(CIRC)?, np.table(DOT)?),
                force,
            )?;
        }
        _ => {
            np.expect_kind(&[StructureKind::NovikovPoisson, StructureKind::GdNovikovPoisson])?;
            precondition(axioms::check_novikov_poisson(np.table(CIRC)?, np.table(DOT)?), force)?;
        }
    }
    let sig = np.signature().with_rank(1)?;
    let circ = np.table(CIRC)?.with_signature(&sig);
    let dot = np.table(DOT)?.with_signature(&sig);
    let (lam, t) = (Poly::lam(1), Poly::t(1));
    let product = circ.map_entries(|a, b, v| &dot.entry(a, b).scale(&(&lam + &t)) + v);
    match mode {
        NpLift::NovikovConformal => single(StructureKind::NovikovConformalLeft, &sig, PRODUCT, product),
        NpLift::GdConformal => {
            let two_lam = Poly::int(2) * lam.clone();
            let bracket = circ.map_entries(|a, b, v| {
                let comm = v - &circ.entry(b, a).scale_coeff(&sgn(&sig, a, b));
                &dot.entry(a, b).scale(&(&t + &two_lam)) + &comm
            });
            Structure::from_tables(StructureKind::GdConformal, &sig, [(BRACKET, bracket), (PRODUCT, product)])
        }
        NpLift::GdNpConformal => {
            let lie = np.table(BRACKET)?.with_signature(&sig);
            let bracket = circ.map_entries(|a, b, _| {
                let ba = circ.entry(b, a);
                let star = &ba + &circ.entry(a, b).scale_coeff(&sgn(&sig, a, b));
                &(&ba.scale(&t) + &star.scale(&lam)) + &lie.entry(b, a)
            });
            Structure::from_tables(StructureKind::GdConformal, &sig, [(BRACKET, bracket), (PRODUCT, product)])
        }
    }
}

/// `a ∘_λ b = (-1)^{αβ} b_{-λ-T} a`; exchanges left and right Novikov
/// conformal products and is an involution.
pub fn convert_chirality_table<C: Coeff>(product: &ProductTable<C>) -> ProductTable<C> {
    let sig = product.signature().clone();
    product.map_entries(|a, b, _| {
        subst_minus_lambda_t(&product.entry(b, a), product.family()).scale_coeff(&sgn(&sig, a, b))
    })
}

pub fn convert_chirality<C: Coeff>(nov: &Structure<C>) -> Result<Structure<C>> {
    let kind = match nov.kind() {
        StructureKind::NovikovConformalLeft => StructureKind::NovikovConformalRight,
        StructureKind::NovikovConformalRight => StructureKind::NovikovConformalLeft,
        other => {
            return Err(Error::KindMismatch(format!(
                "convert-chirality needs a Novikov conformal structure, found {other}"
            )))
        }
    };
    single(kind, nov.signature(), PRODUCT, convert_chirality_table(nov.table(PRODUCT)?))
}

// ------------------------------------------------------- i-linear extension

/// Variable index map from rank `r-1` into rank `r`, skipping slot `i`.
fn embed_index(k: u32, i: u32) -> u32 {
    if k < i {
        k
    } else {
        k + 1
    }
}

fn reindex<C: Coeff>(v: &ModValue<C>, sig: &Arc<Signature>, f: impl Fn(u32) -> u32) -> ModValue<C> {
    let map = |w: &Var| match w {
        Var::T(k) => Var::T(f(*k)),
        Var::Lam(k) => Var::Lam(f(*k)),
        Var::Mu(k) => Var::Mu(f(*k)),
        other => other.clone(),
    };
    ModValue::from_components(sig, v.components().map(|(g, p)| (g, p.rename(map))))
}

/// Rank-`r` `i`-linear Lie conformal superalgebra from a rank-`(r-1)` GD
/// conformal bialgebra:
///
/// ```text
/// [a_λ b] = T_i (a∘b) + λ_i (a∘b + a_λ b) + [a_λ b]_old,
/// a ∘_λ b = (-1)^{αβ} b_{-λ-T} a
/// ```
pub fn extend_to_ilinear<C: Coeff>(gd: &Structure<C>, i: u32, force: bool) -> Result<Structure<C>> {
    gd.expect_kind(&[StructureKind::GdConformal])?;
    let old = gd.rank();
    let r = old + 1;
    if i == 0 || i > r {
        return Err(Error::InvalidArgument(format!("index {i} outside 1..={r}")));
    }
    let (bracket, product) = (gd.table(BRACKET)?, gd.table(PRODUCT)?);
    precondition(axioms::check_gd_conformal(bracket, product), force)?;
    let circ = convert_chirality_table(product);
    let sig = gd.signature().with_rank(r)?;
    let (ti, li) = (Poly::t(i), Poly::lam(i));
    let emb = |v: &ModValue<C>| reindex(v, &sig, |k| embed_index(k, i));
    let mut out = ProductTable::new(&sig);
    for a in 0..sig.len() {
        for b in 0..sig.len() {
            let o = emb(&circ.entry(a, b));
            let star = &o + &emb(&product.entry(a, b));
            let v = &(&o.scale(&ti) + &star.scale(&li)) + &emb(&bracket.entry(a, b));
            out.set(a, b, v);
        }
    }
    Structure::new(
        StructureKind::LieConformal,
        &sig,
        [(BRACKET.to_string(), out)].into_iter().collect(),
        Some(ShapeDecl::ILinear(i)),
    )
}

/// Splits an entry into its `T_i`, `λ_i` and remaining parts.
fn split_ilinear<C: Coeff>(v: &ModValue<C>, i: u32) -> (ModValue<C>, ModValue<C>, ModValue<C>) {
    let sig = v.signature();
    let part = |m: Monomial| {
        v.map_polys(|p| p.coeff_of(&m, |w| *w == Var::T(i) || *w == Var::Lam(i)))
    };
    (
        part(Monomial::var(Var::T(i))),
        part(Monomial::var(Var::Lam(i))),
        ModValue::from_components(
            sig,
            v.components()
                .map(|(g, p)| (g, p.coeff_of(&Monomial::one(), |w| *w == Var::T(i) || *w == Var::Lam(i)))),
        ),
    )
}

/// Inverse of [`extend_to_ilinear`]: reads `∘` off the `T_i` coefficients,
/// `∗` off the `λ_i` coefficients and the rank-`(r-1)` bracket off the rest,
/// then checks `a∗b = a∘b + (-1)^{αβ} b∘_{-λ-T}a`.
pub fn decompose_ilinear<C: Coeff>(lca: &Structure<C>, i: u32, force: bool) -> Result<Structure<C>> {
    lca.expect_kind(&[StructureKind::LieConformal])?;
    let r = lca.rank();
    if r < 2 {
        return Err(Error::InvalidArgument("decomposition needs rank at least 2".into()));
    }
    if i == 0 || i > r {
        return Err(Error::InvalidArgument(format!("index {i} outside 1..={r}")));
    }
    let bracket = lca.table(BRACKET)?;
    if let Some((a, b, bad)) = shape::ilinear_violations(bracket, i).into_iter().next() {
        let sig = lca.signature();
        return Err(Error::Shape(format!(
            "entry ({}, {}) has terms {bad} of degree > 1 in T{i}, l{i}",
            sig.name(a),
            sig.name(b)
        )));
    }
    let sig = lca.signature().with_rank(r - 1)?;
    let lower = |k: u32| if k < i { k } else { k - 1 };
    let mut circ = ProductTable::new(&sig);
    let mut star = ProductTable::new(&sig);
    let mut rest = ProductTable::new(&sig);
    for a in 0..sig.len() {
        for b in 0..sig.len() {
            let (o, s, c) = split_ilinear(&bracket.entry(a, b), i);
            circ.set(a, b, reindex(&o, &sig, lower));
            star.set(a, b, reindex(&s, &sig, lower));
            rest.set(a, b, reindex(&c, &sig, lower));
        }
    }
    let product = convert_chirality_table(&circ);
    for a in 0..sig.len() {
        for b in 0..sig.len() {
            let expected = &circ.entry(a, b) + &product.entry(a, b);
            if expected != star.entry(a, b) {
                return Err(Error::Inconsistent(format!(
                    "l{i}-coefficient of ({}, {}) is {} but the T{i}-coefficients force {}",
                    sig.name(a),
                    sig.name(b),
                    star.entry(a, b),
                    expected
                )));
            }
        }
    }
    precondition(axioms::check_gd_conformal(&rest, &product), force)?;
    Structure::from_tables(StructureKind::GdConformal, &sig, [(BRACKET, rest), (PRODUCT, product)])
}

/// Linear Lie conformal superalgebra of a generalized GD algebra:
///
/// ```text
/// [a_λ b] = Σ_i T_i (b∘_i a) + Σ_j λ_j (b∘_j a + (-1)^{αβ} a∘_j b) + [b, a]
/// ```
pub fn build_linear_from_generalized_gd<C: Coeff>(g: &Structure<C>, force: bool) -> Result<Structure<C>> {
    g.expect_kind(&[StructureKind::GeneralizedGd])?;
    let circs = axioms::circ_family(g)?;
    let lie = g.table(BRACKET)?;
    precondition(axioms::check_generalized_gd(lie, &circs), force)?;
    let sig = g.signature();
    let mut out = ProductTable::new(sig);
    for a in 0..sig.len() {
        for b in 0..sig.len() {
            let mut v = lie.entry(b, a);
            for (k, circ) in circs.iter().enumerate() {
                let idx = k as u32 + 1;
                let ba = circ.entry(b, a);
                let star = &ba + &circ.entry(a, b).scale_coeff(&sgn(sig, a, b));
                v += &ba.scale(&Poly::t(idx));
                v += &star.scale(&Poly::lam(idx));
            }
            out.set(a, b, v);
        }
    }
    Structure::new(
        StructureKind::LieConformal,
        sig,
        [(BRACKET.to_string(), out)].into_iter().collect(),
        Some(ShapeDecl::Linear),
    )
}

/// Identities a twisted derivation `d` has to satisfy:
/// `d(uv) = d(u)v + u d(v)` and `d[u,v] = [du,v] + [u,dv] + ξ[u,v]`.
pub fn check_twisted_derivation<C: Coeff>(
    lp: &Structure<C>,
    d: &BTreeMap<GenId, ModValue<C>>,
    xi: &Poly<C>,
) -> Result<CheckReport<C>> {
    let sig = lp.signature();
    let (bracket, dot) = (lp.table(BRACKET)?, lp.table(DOT)?);
    let zero = crate::lambda::point::zero(sig.rank());
    let apply = |tab: &ProductTable<C>, x: &ModValue<C>, y: &ModValue<C>| crate::lambda::product_at(tab, x, &zero, y);
    let dmap = |x: &ModValue<C>| {
        let mut out = ModValue::zero(sig);
        for (g, p) in x.components() {
            if let Some(img) = d.get(&g) {
                out += &img.scale(p);
            }
        }
        out
    };
    let mut rep = CheckReport::new("derivation");
    for u in 0..sig.len() {
        for v in 0..sig.len() {
            let (gu, gv) = (ModValue::gen(sig, u), ModValue::gen(sig, v));
            let res = &(&dmap(&apply(dot, &gu, &gv)) - &apply(dot, &dmap(&gu), &gv)) - &apply(dot, &gu, &dmap(&gv));
            rep.record("product", sig, &[u, v], res);
            let uv = apply(bracket, &gu, &gv);
            let res = &(&(&dmap(&uv) - &apply(bracket, &dmap(&gu), &gv)) - &apply(bracket, &gu, &dmap(&gv)))
                - &uv.scale(xi);
            rep.record("bracket", sig, &[u, v], res);
        }
    }
    Ok(rep.finish())
}

/// GD Novikov-Poisson algebra `(A, [,], ∘, ·)` with `u∘v = u·d(v) + ξ u·v`
/// from a Lie-Poisson algebra and a twisted derivation `d` (given on
/// generators).
pub fn derivation_gd_np<C: Coeff>(
    lp: &Structure<C>,
    d: &BTreeMap<GenId, ModValue<C>>,
    xi: &Poly<C>,
    force: bool,
) -> Result<Structure<C>> {
    lp.expect_kind(&[StructureKind::LiePoisson])?;
    let extra = new_params(lp.signature(), &[xi]);
    let d_polys: Vec<&Poly<C>> = d.values().flat_map(|v| v.components().map(|(_, p)| p)).collect();
    let mut extra_all = extra;
    extra_all.extend(new_params(lp.signature(), &d_polys));
    extra_all.sort();
    extra_all.dedup();
    let sig = lp.signature().with_parameters(extra_all)?;
    for (g, img) in d {
        if img.components().any(|(_, p)| p.vars().iter().any(|v| v.is_formal())) {
            return Err(Error::VariableClass(format!(
                "image of {} under d must be constant",
                sig.name(*g)
            )));
        }
        let expected = sig.parity(*g);
        if let Some(p) = img.components().map(|(h, _)| sig.parity(h)).find(|p| *p != expected) {
            return Err(Error::Parity {
                left: sig.name(*g).into(),
                right: "d".into(),
                expected: expected.to_string(),
                value: format!("{img} ({p})"),
            });
        }
    }
    let lp = Structure::from_tables(
        StructureKind::LiePoisson,
        &sig,
        lp.tables().map(|(r, t)| (r.to_string(), t.with_signature(&sig))),
    )?;
    let d: BTreeMap<GenId, ModValue<C>> = d.iter().map(|(g, v)| (*g, v.with_signature(&sig))).collect();
    precondition(check_twisted_derivation(&lp, &d, xi), force)?;
    let dot = lp.table(DOT)?;
    let zero = crate::lambda::point::zero(sig.rank());
    let circ = dot.map_entries(|u, v, uv| {
        let dv = d.get(&v).cloned().unwrap_or_else(|| ModValue::zero(&sig));
        &crate::lambda::product_at(dot, &ModValue::gen(&sig, u), &zero, &dv) + &uv.scale(xi)
    });
    Structure::from_tables(
        StructureKind::GdNovikovPoisson,
        &sig,
        [(BRACKET, lp.table(BRACKET)?.clone()), (CIRC, circ), (DOT, dot.clone())],
    )
}

/// Generalized GD algebra of rank `k.len() + 1` from a GD bialgebra:
/// `∘_i` is the given operation and `∘_j = k_j ∘` for the other slots, in
/// increasing order of `j`.
pub fn scale_family<C: Coeff>(g: &Structure<C>, i: u32, k: &[Poly<C>], force: bool) -> Result<Structure<C>> {
    g.expect_kind(&[StructureKind::GdBialgebra])?;
    let r = k.len() as u32 + 1;
    if i == 0 || i > r {
        return Err(Error::InvalidArgument(format!("index {i} outside 1..={r}")));
    }
    precondition(axioms::check_gd_bialgebra(g.table(BRACKET)?, g.table(CIRC)?), force)?;
    for p in k {
        if p.vars().iter().any(|v| v.class() != VarClass::Param) {
            return Err(Error::VariableClass(format!("scaling factor {p} must be a constant")));
        }
    }
    let refs: Vec<&Poly<C>> = k.iter().collect();
    let sig = g
        .signature()
        .with_rank(r)?
        .with_parameters(new_params(g.signature(), &refs))?;
    let circ = g.table(CIRC)?.with_signature(&sig);
    let mut tables = vec![(BRACKET.to_string(), g.table(BRACKET)?.with_signature(&sig))];
    let mut ks = k.iter();
    for j in 1..=r {
        let t = if j == i {
            circ.clone()
        } else {
            circ.scale(ks.next().expect("one factor per other slot"))
        };
        tables.push((format!("{CIRC}{j}"), t));
    }
    Structure::from_tables(StructureKind::GeneralizedGd, &sig, tables)
}
