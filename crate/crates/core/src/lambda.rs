//! λ-bracket calculus on finitely generated free modules.
//!
//! A [`ProductTable`] stores `a_λ b` for generator pairs; everything else is
//! obtained by sesquilinear extension:
//!
//! ```text
//! (f(T) a)_ν (g(T) b) = f(-ν) · g(ν + T) · (a_ν b)
//! ```
//!
//! where `ν` is an *evaluation point*: one polynomial per dimension. `ν = λ`
//! gives the plain product, `ν = λ + μ` the outer slot of a Jacobi-type
//! identity, and `ν = -μ - T` the shifted products such as `(a_λ c)_{-μ-T} b`
//! (the `T` there acts on the final result, which for commuting polynomial
//! coefficients is just simultaneous substitution). Left coefficients may
//! themselves depend on λ and μ; only their `T` variables are rewritten.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::freemod::{GenId, ModValue, ParityClass, Signature};
use crate::ring::{minus_family_minus_t, Monomial, Poly, Subst, Var, VarClass};
use crate::scalar::Coeff;

/// Which formal vector names the table entries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Family {
    #[default]
    Lam,
    Mu,
}

impl Family {
    pub fn class(self) -> VarClass {
        match self {
            Family::Lam => VarClass::Lam,
            Family::Mu => VarClass::Mu,
        }
    }

    pub fn var(self, i: u32) -> Var {
        match self {
            Family::Lam => Var::Lam(i),
            Family::Mu => Var::Mu(i),
        }
    }

    pub fn point<C: Coeff>(self, rank: u32) -> Vec<Poly<C>> {
        (1..=rank).map(|i| Poly::var(self.var(i))).collect()
    }
}

/// Outer evaluation slot of [`outer_apply`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum At {
    Lam,
    Mu,
    LamPlusMu,
}

/// Evaluation point helpers.
pub mod point {
    use super::*;

    pub fn lam<C: Coeff>(rank: u32) -> Vec<Poly<C>> {
        Family::Lam.point(rank)
    }

    pub fn mu<C: Coeff>(rank: u32) -> Vec<Poly<C>> {
        Family::Mu.point(rank)
    }

    pub fn lam_plus_mu<C: Coeff>(rank: u32) -> Vec<Poly<C>> {
        (1..=rank).map(|i| Poly::lam(i) + Poly::mu(i)).collect()
    }

    /// `-ν - T` for `ν` the given family.
    pub fn shifted<C: Coeff>(family: Family, rank: u32) -> Vec<Poly<C>> {
        (1..=rank)
            .map(|i| -(Poly::var(family.var(i)) + Poly::t(i)))
            .collect()
    }

    /// `-λ - μ - T`.
    pub fn shifted_sum<C: Coeff>(rank: u32) -> Vec<Poly<C>> {
        (1..=rank)
            .map(|i| -(Poly::lam(i) + Poly::mu(i) + Poly::t(i)))
            .collect()
    }

    pub fn zero<C: Coeff>(rank: u32) -> Vec<Poly<C>> {
        vec![Poly::zero(); rank as usize]
    }
}

/// Generator-level data of a bilinear λ-operation (a bracket or a product).
/// Absent pairs are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductTable<C> {
    sig: Arc<Signature>,
    family: Family,
    entries: BTreeMap<(GenId, GenId), ModValue<C>>,
}

impl<C: Coeff> ProductTable<C> {
    pub fn new(sig: &Arc<Signature>) -> Self {
        ProductTable {
            sig: sig.clone(),
            family: Family::Lam,
            entries: BTreeMap::new(),
        }
    }

    pub fn with_family(sig: &Arc<Signature>, family: Family) -> Self {
        ProductTable {
            family,
            ..Self::new(sig)
        }
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn rank(&self) -> u32 {
        self.sig.rank()
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn set(&mut self, a: GenId, b: GenId, v: ModValue<C>) {
        if v.is_zero() {
            self.entries.remove(&(a, b));
        } else {
            self.entries.insert((a, b), v.with_signature(&self.sig));
        }
    }

    /// Sets `a ⋆ b` to `p · c` for generator names; panics on unknown names,
    /// which is only used by the built-in catalog.
    pub fn set_named(&mut self, a: &str, b: &str, terms: &[(&str, Poly<C>)]) {
        let id = |n: &str| self.sig.find(n).unwrap_or_else(|| panic!("unknown generator {n}"));
        let v = ModValue::from_components(&self.sig, terms.iter().map(|(g, p)| (id(g), p.clone())));
        let (a, b) = (id(a), id(b));
        self.set(a, b, v);
    }

    pub fn get(&self, a: GenId, b: GenId) -> Option<&ModValue<C>> {
        self.entries.get(&(a, b))
    }

    pub fn entry(&self, a: GenId, b: GenId) -> ModValue<C> {
        self.get(a, b).cloned().unwrap_or_else(|| ModValue::zero(&self.sig))
    }

    pub fn entries(&self) -> impl Iterator<Item = ((GenId, GenId), &ModValue<C>)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Rebuilds every entry through `f(a, b, current)`.
    pub fn map_entries(&self, f: impl Fn(GenId, GenId, &ModValue<C>) -> ModValue<C>) -> Self {
        let mut out = Self::with_family(&self.sig, self.family);
        for a in 0..self.sig.len() {
            for b in 0..self.sig.len() {
                let v = f(a, b, &self.entry(a, b));
                out.set(a, b, v);
            }
        }
        out
    }

    /// Moves the table to a compatible signature (same generators).
    pub fn with_signature(&self, sig: &Arc<Signature>) -> Self {
        let mut out = Self::with_family(sig, self.family);
        for ((a, b), v) in &self.entries {
            out.set(*a, *b, v.with_signature(sig));
        }
        out
    }

    pub fn scale(&self, p: &Poly<C>) -> Self {
        self.map_entries(|_, _, v| v.scale(p))
    }

    /// Validates variable classes and parity homogeneity of every entry.
    /// Conformal tables may use `T`, the declared family, and parameters;
    /// finite tables parameters only.
    pub fn validate(&self, conformal: bool) -> Result<()> {
        let allowed: &[VarClass] = if conformal {
            &[VarClass::T, self.family.class(), VarClass::Param]
        } else {
            &[VarClass::Param]
        };
        for ((a, b), v) in &self.entries {
            v.check_vars(allowed).map_err(|e| match e {
                Error::VariableClass(msg) if !conformal => Error::VariableClass(format!(
                    "finite table entry ({}, {}) must be constant: {msg}",
                    self.sig.name(*a),
                    self.sig.name(*b)
                )),
                other => other,
            })?;
            let expected = self.sig.parity(*a) + self.sig.parity(*b);
            let ok = match v.parity() {
                ParityClass::Zero => true,
                ParityClass::Even => expected == crate::Parity::Even,
                ParityClass::Odd => expected == crate::Parity::Odd,
                ParityClass::Mixed => false,
            };
            if !ok {
                return Err(Error::Parity {
                    left: self.sig.name(*a).to_string(),
                    right: self.sig.name(*b).to_string(),
                    expected: expected.to_string(),
                    value: v.to_string(),
                });
            }
        }
        Ok(())
    }
}

/// Sesquilinear evaluation `x_ν y` of a table at an arbitrary point.
pub fn product_at<C: Coeff>(tab: &ProductTable<C>, x: &ModValue<C>, nu: &[Poly<C>], y: &ModValue<C>) -> ModValue<C> {
    let r = tab.rank();
    debug_assert_eq!(nu.len(), r as usize);
    let left: Subst<C> = (1..=r).map(|i| (Var::T(i), -&nu[i as usize - 1])).collect();
    let right: Subst<C> = (1..=r)
        .map(|i| (Var::T(i), &nu[i as usize - 1] + &Poly::t(i)))
        .collect();
    let entry_sub: Subst<C> = (1..=r)
        .map(|i| (tab.family().var(i), nu[i as usize - 1].clone()))
        .collect();

    let ys: Vec<(GenId, Poly<C>)> = y.components().map(|(b, p)| (b, p.subst(&right))).collect();
    let mut cache: BTreeMap<(GenId, GenId), ModValue<C>> = BTreeMap::new();
    let mut out = ModValue::zero(tab.signature());
    for (a, pa) in x.components() {
        let fa = pa.subst(&left);
        for (b, gb) in &ys {
            let Some(e) = tab.get(a, *b) else { continue };
            let e = cache.entry((a, *b)).or_insert_with(|| e.subst(&entry_sub));
            out += &e.scale(&(&fa * gb));
        }
    }
    out
}

fn family_free<C: Coeff>(v: &ModValue<C>, family: Family) -> bool {
    v.components()
        .all(|(_, p)| p.vars().iter().all(|w| w.class() != family.class()))
}

/// `x_λ y` by sesquilinearity in the table's own family.
pub fn extend_bilinear<C: Coeff>(tab: &ProductTable<C>, x: &ModValue<C>, y: &ModValue<C>) -> Result<ModValue<C>> {
    if x.signature() != tab.signature() || y.signature() != tab.signature() {
        return Err(Error::SignatureMismatch);
    }
    if !family_free(x, tab.family()) || !family_free(y, tab.family()) {
        return Err(Error::VariableClass(
            "operands already contain the table's formal variables".into(),
        ));
    }
    Ok(product_at(tab, x, &tab.family().point(tab.rank()), y))
}

/// `λ_i -> -λ_i - T_i` on every component (involution).
pub fn subst_minus_lambda_t<C: Coeff>(v: &ModValue<C>, family: Family) -> ModValue<C> {
    v.subst(&minus_family_minus_t(family.class(), v.signature().rank()))
}

/// `[v_ν c]` with `ν ∈ {λ, μ, λ+μ}`.
pub fn outer_apply<C: Coeff>(tab: &ProductTable<C>, v: &ModValue<C>, at: At, c: &ModValue<C>) -> Result<ModValue<C>> {
    if v.signature() != tab.signature() || c.signature() != tab.signature() {
        return Err(Error::SignatureMismatch);
    }
    let r = tab.rank();
    if c.components().any(|(_, p)| p.vars().iter().any(|w| matches!(w.class(), VarClass::Lam | VarClass::Mu))) {
        return Err(Error::VariableClass("right operand must have T-only coefficients".into()));
    }
    let nu = match at {
        At::Lam => point::lam(r),
        At::Mu => point::mu(r),
        At::LamPlusMu => point::lam_plus_mu(r),
    };
    Ok(product_at(tab, v, &nu, c))
}

fn factorial<C: Coeff>(m: &[u32]) -> C {
    let mut acc = C::one();
    for &k in m {
        for j in 2..=k {
            acc = acc * C::from_int(j as i64);
        }
    }
    acc
}

/// `v_(m)`: `m!` times the coefficient of `family^m`, i.e. the divided-power
/// coefficient in `v = Σ λ^(m) v_(m)`.
pub fn coeff_extract<C: Coeff>(v: &ModValue<C>, family: Family, m: &[u32]) -> ModValue<C> {
    let mono = Monomial::from_pairs(m.iter().enumerate().map(|(i, &e)| (family.var(i as u32 + 1), e)));
    let fact: C = factorial(m);
    let class = family.class();
    v.map_polys(|p| p.coeff_of(&mono, |w| w.class() == class).scale(&fact))
}

/// All nonzero divided-power coefficients `v_(m)`, keyed by `m`.
pub fn divided_expansion<C: Coeff>(v: &ModValue<C>, family: Family) -> BTreeMap<Vec<u32>, ModValue<C>> {
    let r = v.signature().rank();
    let class = family.class();
    let mut out: BTreeMap<Vec<u32>, ModValue<C>> = BTreeMap::new();
    for (g, p) in v.components() {
        for (mono, rest) in p.collect_by(|w| w.class() == class) {
            let m: Vec<u32> = (1..=r).map(|i| mono.exponent(&family.var(i))).collect();
            let fact: C = factorial(&m);
            out.entry(m)
                .or_insert_with(|| ModValue::zero(v.signature()))
                .add_component(g, &rest.scale(&fact));
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freemod::Generator;
    use crate::Rational;

    type P = Poly<Rational>;

    fn virasoro() -> ProductTable<Rational> {
        let sig = Signature::new(1, vec![Generator::even("L")], vec![]).unwrap();
        let mut t = ProductTable::new(&sig);
        t.set_named("L", "L", &[("L", P::t(1) + P::int(2) * P::lam(1))]);
        t
    }

    fn l(t: &ProductTable<Rational>, p: P) -> ModValue<Rational> {
        ModValue::term(t.signature(), 0, p)
    }

    #[test]
    fn extend_left_coefficient() {
        let t = virasoro();
        let v = extend_bilinear(&t, &l(&t, P::t(1)), &l(&t, P::one())).unwrap();
        assert_eq!(v.component(0), -P::lam(1) * (P::t(1) + P::int(2) * P::lam(1)));
    }

    #[test]
    fn extend_right_coefficient() {
        let t = virasoro();
        let v = extend_bilinear(&t, &l(&t, P::one()), &l(&t, P::t(1))).unwrap();
        assert_eq!(
            v.component(0),
            (P::t(1) + P::lam(1)) * (P::t(1) + P::int(2) * P::lam(1))
        );
        let plain = extend_bilinear(&t, &l(&t, P::one()), &l(&t, P::one())).unwrap();
        assert_eq!(plain.component(0), P::t(1) + P::int(2) * P::lam(1));
    }

    #[test]
    fn extend_rejects_family_in_operands() {
        let t = virasoro();
        assert!(extend_bilinear(&t, &l(&t, P::lam(1)), &l(&t, P::one())).is_err());
    }

    #[test]
    fn minus_lambda_t_examples() {
        let t = virasoro();
        let v = l(&t, P::t(1) + P::int(2) * P::lam(1));
        let s = subst_minus_lambda_t(&v, Family::Lam);
        assert_eq!(s.component(0), -(P::t(1) + P::int(2) * P::lam(1)));
        assert_eq!(subst_minus_lambda_t(&s, Family::Lam), v);

        let sig = Signature::new(2, vec![Generator::even("L")], vec![]).unwrap();
        let h = ModValue::term(&sig, 0, P::lam(2) * P::t(1) - P::lam(1) * P::t(2));
        let hs = subst_minus_lambda_t(&h, Family::Lam);
        assert_eq!(hs.component(0), P::lam(1) * P::t(2) - P::lam(2) * P::t(1));
    }

    #[test]
    fn outer_apply_virasoro_middle_term() {
        let t = virasoro();
        let v = l(&t, P::t(1) + P::int(2) * P::lam(1));
        let out = outer_apply(&t, &v, At::LamPlusMu, &l(&t, P::one())).unwrap();
        let expected = (P::lam(1) - P::mu(1))
            * (P::t(1) + P::int(2) * P::lam(1) + P::int(2) * P::mu(1));
        assert_eq!(out.component(0), expected);
        assert!(outer_apply(&t, &ModValue::zero(t.signature()), At::Lam, &l(&t, P::one()))
            .unwrap()
            .is_zero());
        let mu = outer_apply(&t, &l(&t, P::one()), At::Mu, &l(&t, P::t(1))).unwrap();
        assert_eq!(
            mu.component(0),
            (P::t(1) + P::mu(1)) * (P::t(1) + P::int(2) * P::mu(1))
        );
    }

    #[test]
    fn coefficient_extraction() {
        let t = virasoro();
        let v = l(&t, P::t(1) + P::int(2) * P::lam(1));
        assert_eq!(coeff_extract(&v, Family::Lam, &[1]).component(0), P::int(2));
        assert_eq!(coeff_extract(&v, Family::Lam, &[0]).component(0), P::t(1));
        assert!(coeff_extract(&v, Family::Lam, &[2]).is_zero());
        let sq = l(&t, P::int(3) * P::lam(1).pow(2));
        assert_eq!(coeff_extract(&sq, Family::Lam, &[2]).component(0), P::int(6));
    }
}
