//! Annihilation Lie superalgebras `Lie R` and their loop-algebra GD
//! structures, computed on integer-index windows.
//!
//! A λ-table induces an operation on the symbols `a_n` (`n ∈ Z^r`):
//!
//! ```text
//! a_m ⋆ b_n = Σ_j C(m, j) (a_(j) b)_{m+n-j}
//! ```
//!
//! with `C(m, j) = Π m_i (m_i - 1)…(m_i - j_i + 1) / j_i!` and the relation
//! `(T_i g)_k = -k_i g_{k-e_i}` applied eagerly, so sums only mention
//! generator symbols.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::axioms::{CheckReport, Finding, Residual};
use crate::error::{Error, Result};
use crate::freemod::{koszul, GenId, Parity, Signature};
use crate::lambda::{divided_expansion, ProductTable};
use crate::ring::{Poly, VarClass};
use crate::scalar::{sign, Coeff};
use crate::structure::{Structure, StructureKind, BRACKET, PRODUCT};

/// The basis symbol `g_n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexedGen {
    pub gen: GenId,
    pub index: Vec<i64>,
}

impl IndexedGen {
    pub fn new(gen: GenId, index: Vec<i64>) -> Self {
        IndexedGen { gen, index }
    }
}

pub fn format_index(index: &[i64]) -> String {
    index.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")
}

/// Finite linear combination of indexed generators; coefficients are
/// polynomials in the structure parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalSum<C> {
    sig: Arc<Signature>,
    terms: BTreeMap<IndexedGen, Poly<C>>,
}

impl<C: Coeff> FormalSum<C> {
    pub fn zero(sig: &Arc<Signature>) -> Self {
        FormalSum {
            sig: sig.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(sig: &Arc<Signature>, g: IndexedGen) -> Self {
        let mut s = Self::zero(sig);
        s.add_term(g, &Poly::one());
        s
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IndexedGen, &Poly<C>)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, g: &IndexedGen) -> Poly<C> {
        self.terms.get(g).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, g: IndexedGen, c: &Poly<C>) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(g.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&g);
        }
    }

    pub fn add_scaled(&mut self, other: &FormalSum<C>, c: &Poly<C>) {
        for (g, p) in &other.terms {
            self.add_term(g.clone(), &(p * c));
        }
    }

    pub fn scale(&self, c: &Poly<C>) -> Self {
        let mut out = Self::zero(&self.sig);
        out.add_scaled(self, c);
        out
    }

    pub fn parity(&self) -> Option<Parity> {
        let mut ps = self.terms.keys().map(|g| self.sig.parity(g.gen));
        let first = ps.next()?;
        ps.all(|p| p == first).then_some(first)
    }
}

impl<C: Coeff> std::ops::Add for &FormalSum<C> {
    type Output = FormalSum<C>;
    fn add(self, rhs: &FormalSum<C>) -> FormalSum<C> {
        let mut out = self.clone();
        out.add_scaled(rhs, &Poly::one());
        out
    }
}

impl<C: Coeff> std::ops::Sub for &FormalSum<C> {
    type Output = FormalSum<C>;
    fn sub(self, rhs: &FormalSum<C>) -> FormalSum<C> {
        let mut out = self.clone();
        out.add_scaled(rhs, &Poly::int(-1));
        out
    }
}

impl<C: Coeff> fmt::Display for FormalSum<C> {
    /// `-1*L[4] + 2*L[3]`: generators in order, indices descending, every
    /// coefficient written out.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut ordered: Vec<_> = self.terms.iter().collect();
        ordered.sort_by(|(x, _), (y, _)| x.gen.cmp(&y.gen).then_with(|| y.index.cmp(&x.index)));
        for (k, (g, c)) in ordered.into_iter().enumerate() {
            let coeff = if c.len() == 1 {
                c.to_string()
            } else {
                format!("({c})")
            };
            let sym = format!("{}[{}]", self.sig.name(g.gen), format_index(&g.index));
            match (k, coeff.strip_prefix('-')) {
                (0, _) => write!(f, "{coeff}*{sym}")?,
                (_, Some(rest)) => write!(f, " - {rest}*{sym}")?,
                (_, None) => write!(f, " + {coeff}*{sym}")?,
            }
        }
        Ok(())
    }
}

/// Per-dimension inclusive index ranges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    ranges: Vec<(i64, i64)>,
}

impl Window {
    pub fn new(ranges: Vec<(i64, i64)>) -> Result<Self> {
        if ranges.is_empty() {
            return Err(Error::InvalidArgument("window needs at least one dimension".into()));
        }
        if let Some((lo, hi)) = ranges.iter().find(|(lo, hi)| lo > hi) {
            return Err(Error::InvalidArgument(format!("window range {lo}..{hi} is empty")));
        }
        Ok(Window { ranges })
    }

    /// The same range in every one of `rank` dimensions.
    pub fn cube(rank: u32, lo: i64, hi: i64) -> Result<Self> {
        Self::new(vec![(lo, hi); rank as usize])
    }

    pub fn rank(&self) -> usize {
        self.ranges.len()
    }

    pub fn contains(&self, index: &[i64]) -> bool {
        index.len() == self.ranges.len()
            && index.iter().zip(&self.ranges).all(|(k, (lo, hi))| lo <= k && k <= hi)
    }

    /// All index vectors, lexicographically.
    pub fn indices(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for &(lo, hi) in &self.ranges {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (lo..=hi).map(move |k| {
                        let mut v = prefix.clone();
                        v.push(k);
                        v
                    })
                })
                .collect();
        }
        out
    }
}

fn falling<C: Coeff>(m: i64, j: u32) -> C {
    (0..j as i64).fold(C::one(), |acc, t| acc * C::from_int(m - t))
}

/// `C(m, j)` with the falling-factorial convention, valid for negative `m`.
pub fn binomial<C: Coeff>(m: &[i64], j: &[u32]) -> C {
    m.iter().zip(j).fold(C::one(), |acc, (&mi, &ji)| {
        let fact = (2..=ji as i64).fold(C::one(), |f, t| f * C::from_int(t));
        acc * falling::<C>(mi, ji) / fact
    })
}

/// The λ-table read as an operation on indexed generators.
pub fn annihilation_bracket<C: Coeff>(
    tab: &ProductTable<C>,
    a: GenId,
    m: &[i64],
    b: GenId,
    n: &[i64],
) -> Result<FormalSum<C>> {
    let sig = tab.signature();
    let r = sig.rank() as usize;
    if m.len() != r || n.len() != r {
        return Err(Error::InvalidArgument(format!(
            "index vectors must have length {r}, got {} and {}",
            m.len(),
            n.len()
        )));
    }
    let mut out = FormalSum::zero(sig);
    let Some(entry) = tab.get(a, b) else {
        return Ok(out);
    };
    for (j, coeff) in divided_expansion(entry, tab.family()) {
        let binom: C = binomial(m, &j);
        if binom.is_zero() {
            continue;
        }
        let k: Vec<i64> = (0..r).map(|i| m[i] + n[i] - j[i] as i64).collect();
        for (g, p) in coeff.components() {
            for (tmono, rest) in p.collect_by(|v| v.class() == VarClass::T) {
                // (T^p g)_k = Π (-1)^{p_i} k_i (k_i - 1)…(k_i - p_i + 1) g_{k-p}
                let mut factor = binom.clone();
                let mut idx = k.clone();
                for i in 0..r {
                    let e = tmono.exponent(&crate::ring::Var::T(i as u32 + 1));
                    factor = factor * falling::<C>(k[i], e) * sign::<C>(e % 2 == 1);
                    idx[i] -= e as i64;
                }
                if factor.is_zero() {
                    continue;
                }
                out.add_term(IndexedGen::new(g, idx), &rest.scale(&factor));
            }
        }
    }
    Ok(out)
}

/// Bilinear extension of [`annihilation_bracket`] to formal sums.
pub fn apply_sums<C: Coeff>(tab: &ProductTable<C>, x: &FormalSum<C>, y: &FormalSum<C>) -> Result<FormalSum<C>> {
    let mut out = FormalSum::zero(tab.signature());
    for (gx, cx) in x.terms() {
        for (gy, cy) in y.terms() {
            let v = annihilation_bracket(tab, gx.gen, &gx.index, gy.gen, &gy.index)?;
            out.add_scaled(&v, &(cx * cy));
        }
    }
    Ok(out)
}

/// Operations induced on indexed generators by a conformal structure:
/// the bracket of `Lie R` and, for product-carrying kinds, the loop
/// product `a_m ∘ b_n = Σ C(m, j)(a_(j)b)_{m+n-j}`.
#[derive(Clone, Debug)]
pub struct LoopAlgebra<C> {
    sig: Arc<Signature>,
    bracket: Option<ProductTable<C>>,
    circ: Option<ProductTable<C>>,
}

/// Window suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WindowSuite {
    LieSuper,
    NovikovSuper,
    GdCompat,
    /// All three of the above.
    GdBialgebra,
}

impl WindowSuite {
    pub fn name(self) -> &'static str {
        match self {
            WindowSuite::LieSuper => "lie-super",
            WindowSuite::NovikovSuper => "novikov-super",
            WindowSuite::GdCompat => "gd-compat",
            WindowSuite::GdBialgebra => "gd-bialgebra",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "lie-super" | "jacobi" => Ok(WindowSuite::LieSuper),
            "novikov-super" => Ok(WindowSuite::NovikovSuper),
            "gd-compat" => Ok(WindowSuite::GdCompat),
            "gd-bialgebra" => Ok(WindowSuite::GdBialgebra),
            other => Err(Error::InvalidArgument(format!(
                "unknown window suite `{other}` (known: lie-super, novikov-super, gd-compat, gd-bialgebra)"
            ))),
        }
    }
}

/// Lazily memoized pair products restricted to the window.
struct WindowOps<'a, C> {
    tab: &'a ProductTable<C>,
    window: &'a Window,
    cache: BTreeMap<(IndexedGen, IndexedGen), FormalSum<C>>,
}

impl<'a, C: Coeff> WindowOps<'a, C> {
    fn new(tab: &'a ProductTable<C>, window: &'a Window) -> Self {
        WindowOps {
            tab,
            window,
            cache: BTreeMap::new(),
        }
    }

    fn pair(&mut self, x: &IndexedGen, y: &IndexedGen) -> Result<FormalSum<C>> {
        let key = (x.clone(), y.clone());
        if let Some(v) = self.cache.get(&key) {
            return Ok(v.clone());
        }
        let v = annihilation_bracket(self.tab, x.gen, &x.index, y.gen, &y.index)?;
        self.cache.insert(key, v.clone());
        Ok(v)
    }

    /// `x ⋆ y`, or `None` if `x` has a term outside the window.
    fn left(&mut self, x: &FormalSum<C>, y: &IndexedGen) -> Result<Option<FormalSum<C>>> {
        let mut out = FormalSum::zero(self.tab.signature());
        for (g, c) in x.terms() {
            if !self.window.contains(&g.index) {
                return Ok(None);
            }
            out.add_scaled(&self.pair(g, y)?, c);
        }
        Ok(Some(out))
    }

    fn right(&mut self, x: &IndexedGen, y: &FormalSum<C>) -> Result<Option<FormalSum<C>>> {
        let mut out = FormalSum::zero(self.tab.signature());
        for (g, c) in y.terms() {
            if !self.window.contains(&g.index) {
                return Ok(None);
            }
            out.add_scaled(&self.pair(x, g)?, c);
        }
        Ok(Some(out))
    }
}

impl<C: Coeff> LoopAlgebra<C> {
    /// `LieConformal` gives a bracket only; Novikov conformal kinds a loop
    /// product only; `GDConformal` both.
    pub fn from_structure(s: &Structure<C>) -> Result<Self> {
        let (bracket, circ) = match s.kind() {
            StructureKind::LieConformal => (Some(s.table(BRACKET)?.clone()), None),
            StructureKind::NovikovConformalLeft | StructureKind::NovikovConformalRight => {
                (None, Some(s.table(PRODUCT)?.clone()))
            }
            StructureKind::GdConformal => (Some(s.table(BRACKET)?.clone()), Some(s.table(PRODUCT)?.clone())),
            other => {
                return Err(Error::KindMismatch(format!(
                    "loop algebras are built from conformal kinds, not {other}"
                )))
            }
        };
        Ok(LoopAlgebra {
            sig: s.signature().clone(),
            bracket,
            circ,
        })
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn bracket_table(&self) -> Option<&ProductTable<C>> {
        self.bracket.as_ref()
    }

    pub fn circ_table(&self) -> Option<&ProductTable<C>> {
        self.circ.as_ref()
    }

    fn need<'a>(t: &'a Option<ProductTable<C>>, what: &str) -> Result<&'a ProductTable<C>> {
        t.as_ref()
            .ok_or_else(|| Error::KindMismatch(format!("this structure has no {what}")))
    }

    fn basis(&self, window: &Window) -> Result<Vec<IndexedGen>> {
        if window.rank() != self.sig.rank() as usize {
            return Err(Error::InvalidArgument(format!(
                "window has {} dimensions, structure has rank {}",
                window.rank(),
                self.sig.rank()
            )));
        }
        let idx = window.indices();
        Ok((0..self.sig.len())
            .flat_map(|g| idx.iter().map(move |k| IndexedGen::new(g, k.clone())))
            .collect())
    }

    /// Nonzero values of each operation on all in-window input pairs, in
    /// enumeration order. Outputs may leave the window.
    pub fn tables(&self, window: &Window) -> Result<LoopTables<C>> {
        let basis = self.basis(window)?;
        let mut out = LoopTables {
            sig: self.sig.clone(),
            ops: Vec::new(),
        };
        for (name, tab) in [("bracket", &self.bracket), ("circ", &self.circ)] {
            let Some(tab) = tab else { continue };
            let mut rows = Vec::new();
            for x in &basis {
                for y in &basis {
                    let v = annihilation_bracket(tab, x.gen, &x.index, y.gen, &y.index)?;
                    if !v.is_zero() {
                        rows.push((x.clone(), y.clone(), v));
                    }
                }
            }
            out.ops.push((name.to_string(), rows));
        }
        Ok(out)
    }

    /// Runs a finite suite over all in-window tuples whose intermediate
    /// products stay inside the window; the others are skipped and counted.
    pub fn window_check(&self, window: &Window, suite: WindowSuite) -> Result<CheckReport<C>> {
        let basis = self.basis(window)?;
        let mut rep = CheckReport::new(suite.name());
        match suite {
            WindowSuite::LieSuper => self.lie_super(&basis, window, &mut rep)?,
            WindowSuite::NovikovSuper => self.novikov_super(&basis, window, &mut rep)?,
            WindowSuite::GdCompat => self.gd_compat(&basis, window, &mut rep)?,
            WindowSuite::GdBialgebra => {
                for sub in [WindowSuite::LieSuper, WindowSuite::NovikovSuper, WindowSuite::GdCompat] {
                    rep.absorb(self.window_check(window, sub)?);
                }
            }
        }
        Ok(rep.finish())
    }

    fn sgn(&self, x: &IndexedGen, y: &IndexedGen) -> Poly<C> {
        Poly::constant(sign(koszul(self.sig.parity(x.gen), self.sig.parity(y.gen))))
    }

    fn record(&self, rep: &mut CheckReport<C>, axiom: &str, pos: &[usize], tuple: &[&IndexedGen], res: FormalSum<C>) {
        rep.checked += 1;
        if res.is_zero() {
            return;
        }
        rep.findings.push(Finding {
            axiom: axiom.to_string(),
            tuple: tuple
                .iter()
                .map(|g| format!("{}[{}]", self.sig.name(g.gen), format_index(&g.index)))
                .collect(),
            order: pos.to_vec(),
            residual: Residual::Formal(res),
        });
    }

    fn lie_super(&self, basis: &[IndexedGen], window: &Window, rep: &mut CheckReport<C>) -> Result<()> {
        let tab = Self::need(&self.bracket, "bracket")?;
        let mut ops = WindowOps::new(tab, window);
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let res = &ops.pair(a, b)? + &ops.pair(b, a)?.scale(&self.sgn(a, b));
                self.record(rep, "skew", &[i, j], &[a, b], res);
            }
        }
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                for (k, c) in basis.iter().enumerate() {
                    let bc = ops.pair(b, c)?;
                    let ab = ops.pair(a, b)?;
                    let ac = ops.pair(a, c)?;
                    let (Some(t1), Some(t2), Some(t3)) = (ops.right(a, &bc)?, ops.left(&ab, c)?, ops.right(b, &ac)?)
                    else {
                        rep.skipped += 1;
                        continue;
                    };
                    let res = &(&t1 - &t2) - &t3.scale(&self.sgn(a, b));
                    self.record(rep, "jacobi", &[i, j, k], &[a, b, c], res);
                }
            }
        }
        Ok(())
    }

    fn novikov_super(&self, basis: &[IndexedGen], window: &Window, rep: &mut CheckReport<C>) -> Result<()> {
        let tab = Self::need(&self.circ, "product")?;
        let mut ops = WindowOps::new(tab, window);
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                for (k, c) in basis.iter().enumerate() {
                    let ab = ops.pair(a, b)?;
                    let ac = ops.pair(a, c)?;
                    let bc = ops.pair(b, c)?;
                    let ba = ops.pair(b, a)?;
                    let terms = (
                        ops.left(&ab, c)?,
                        ops.left(&ac, b)?,
                        ops.right(a, &bc)?,
                        ops.left(&ba, c)?,
                        ops.right(b, &ac)?,
                    );
                    let (Some(ab_c), Some(ac_b), Some(a_bc), Some(ba_c), Some(b_ac)) = terms else {
                        rep.skipped += 1;
                        continue;
                    };
                    let res = &ab_c - &ac_b.scale(&self.sgn(b, c));
                    self.record(rep, "right-commutative", &[i, j, k], &[a, b, c], res);
                    let res = &(&ab_c - &a_bc) - &(&ba_c - &b_ac).scale(&self.sgn(a, b));
                    self.record(rep, "left-symmetric", &[i, j, k], &[a, b, c], res);
                }
            }
        }
        Ok(())
    }

    fn gd_compat(&self, basis: &[IndexedGen], window: &Window, rep: &mut CheckReport<C>) -> Result<()> {
        let br_tab = Self::need(&self.bracket, "bracket")?;
        let circ_tab = Self::need(&self.circ, "product")?;
        let mut br = WindowOps::new(br_tab, window);
        let mut o = WindowOps::new(circ_tab, window);
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                for (k, c) in basis.iter().enumerate() {
                    let terms = (
                        br.left(&o.pair(a, b)?, c)?,
                        o.left(&br.pair(a, b)?, c)?,
                        o.right(a, &br.pair(b, c)?)?,
                        br.left(&o.pair(a, c)?, b)?,
                        o.left(&br.pair(a, c)?, b)?,
                    );
                    let (Some(t1), Some(t2), Some(t3), Some(t4), Some(t5)) = terms else {
                        rep.skipped += 1;
                        continue;
                    };
                    let res = &(&(&t1 + &t2) - &t3) - &(&t4 + &t5).scale(&self.sgn(b, c));
                    self.record(rep, "compat", &[i, j, k], &[a, b, c], res);
                }
            }
        }
        Ok(())
    }
}

/// One nonzero value `x ⋆ y` of a loop operation.
pub type LoopRow<C> = (IndexedGen, IndexedGen, FormalSum<C>);

/// Structure constants of the loop operations on a window.
#[derive(Clone, Debug)]
pub struct LoopTables<C> {
    sig: Arc<Signature>,
    /// `(operation name, rows)`.
    pub ops: Vec<(String, Vec<LoopRow<C>>)>,
}

impl<C: Coeff> LoopTables<C> {
    pub fn get(&self, op: &str, x: &IndexedGen, y: &IndexedGen) -> Option<&FormalSum<C>> {
        self.ops
            .iter()
            .find(|(name, _)| name == op)?
            .1
            .iter()
            .find(|(a, b, _)| a == x && b == y)
            .map(|(_, _, v)| v)
    }

    /// Tab-separated `gen1 index1 gen2 index2 result`, one line per nonzero
    /// value; each operation is introduced by a `# name` line.
    pub fn export(&self) -> String {
        let mut out = String::new();
        for (name, rows) in &self.ops {
            out.push_str(&format!("# {name}\n"));
            for (x, y, v) in rows {
                out.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\n",
                    self.sig.name(x.gen),
                    format_index(&x.index),
                    self.sig.name(y.gen),
                    format_index(&y.index),
                    v
                ));
            }
        }
        out
    }
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

    #[test]
    fn virasoro_mode_bracket() {
        let t = virasoro();
        let v = annihilation_bracket(&t, 0, &[2], 0, &[3]).unwrap();
        assert_eq!(v.to_string(), "-1*L[4]");
    }

    #[test]
    fn binomial_negative_top() {
        assert_eq!(binomial::<Rational>(&[-2], &[2]), Rational::from_integer(3.into()));
        assert_eq!(binomial::<Rational>(&[1], &[2]), Rational::from_integer(0.into()));
    }

    #[test]
    fn window_indices_are_lexicographic() {
        let w = Window::new(vec![(0, 1), (-1, 0)]).unwrap();
        assert_eq!(w.indices(), vec![vec![0, -1], vec![0, 0], vec![1, -1], vec![1, 0]]);
        assert!(Window::new(vec![(1, 0)]).is_err());
    }

    #[test]
    fn formal_sum_printing() {
        let sig = Signature::new(2, vec![Generator::even("x")], vec!["a".into()]).unwrap();
        let mut s = FormalSum::<Rational>::zero(&sig);
        s.add_term(IndexedGen::new(0, vec![1, -1]), &(P::param("a") + P::one()));
        s.add_term(IndexedGen::new(0, vec![0, 0]), &P::int(-2));
        assert_eq!(s.to_string(), "(a + 1)*x[1,-1] - 2*x[0,0]");
    }
}
