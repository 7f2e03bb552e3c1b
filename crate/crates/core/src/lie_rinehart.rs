//! Lie-Rinehart algebras `(A, L)` with `L` free over `A` on an explicit
//! basis, given by an anchor table and a bracket table.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly};
use crate::quotient::QuotientAlgebra;
use crate::report::Report;
use crate::scalar::Scalar;

/// Element `Σ a_i e_i` of a free module; zero coefficients are not stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LElement<S> {
    coeffs: BTreeMap<usize, Poly<S>>,
}

impl<S: Scalar> Default for LElement<S> {
    fn default() -> Self {
        Self { coeffs: BTreeMap::new() }
    }
}

impl<S: Scalar> LElement<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(i: usize, algebra: &QuotientAlgebra<S>) -> Self {
        Self::single(i, algebra.one())
    }

    pub fn single(i: usize, a: Poly<S>) -> Self {
        let mut out = Self::zero();
        out.add_coeff(i, a);
        out
    }

    pub fn from_coeffs(coeffs: impl IntoIterator<Item = (usize, Poly<S>)>) -> Self {
        let mut out = Self::zero();
        for (i, a) in coeffs {
            out.add_coeff(i, a);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (usize, &Poly<S>)> {
        self.coeffs.iter().map(|(i, a)| (*i, a))
    }

    pub fn coeff(&self, i: usize, nvars: usize) -> Poly<S> {
        self.coeffs.get(&i).cloned().unwrap_or_else(|| Poly::zero(nvars))
    }

    pub fn add_coeff(&mut self, i: usize, a: Poly<S>) {
        if a.is_zero() {
            return;
        }
        let s = match self.coeffs.remove(&i) {
            Some(b) => &b + &a,
            None => a,
        };
        if !s.is_zero() {
            self.coeffs.insert(i, s);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, a) in &other.coeffs {
            out.add_coeff(*i, a.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, a) in &other.coeffs {
            out.add_coeff(*i, -a);
        }
        out
    }

    pub fn scale_scalar(&self, c: &S) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|(i, a)| (*i, a.scale(c))))
    }

    /// `a·x`, normalized in `algebra`.
    pub fn scale(&self, a: &Poly<S>, algebra: &QuotientAlgebra<S>) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|(i, b)| (*i, algebra.mul(a, b))))
    }

    pub fn normalize(&self, algebra: &QuotientAlgebra<S>) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|(i, b)| (*i, algebra.normal_form(b))))
    }

    /// Largest total degree of a coefficient.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.values().filter_map(Poly::degree).max()
    }

    pub fn format(&self, names: &[String], algebra: &QuotientAlgebra<S>) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(i, a)| {
                let c = algebra.format(a);
                if c == "1" {
                    names[*i].clone()
                } else if c == "-1" {
                    format!("-{}", names[*i])
                } else if a.len() == 1 {
                    format!("{c}*{}", names[*i])
                } else {
                    format!("({c})*{}", names[*i])
                }
            })
            .collect();
        parts.join(" + ").replace("+ -", "- ")
    }
}

#[derive(Clone, Debug)]
pub struct LieRinehartAlgebra<S> {
    base: Arc<QuotientAlgebra<S>>,
    basis: Vec<String>,
    anchor: Vec<Derivation<S>>,
    /// Full antisymmetric table, `table[i][j] = [e_i, e_j]`.
    table: Vec<Vec<LElement<S>>>,
}

impl<S: Scalar> LieRinehartAlgebra<S> {
    /// `bracket` lists `[e_i, e_j]` for `i < j`; missing pairs bracket to 0.
    pub fn new(
        base: Arc<QuotientAlgebra<S>>,
        basis: Vec<String>,
        anchor: Vec<Derivation<S>>,
        bracket: BTreeMap<(usize, usize), LElement<S>>,
    ) -> Result<Self> {
        let n = basis.len();
        if anchor.len() != n {
            return Err(Error::Description(format!("{} anchors for {n} basis elements", anchor.len())));
        }
        for (k, d) in anchor.iter().enumerate() {
            d.check_well_defined(&base)
                .map_err(|e| Error::Structure(format!("anchor of {}: {e}", basis[k])))?;
        }
        let mut table = vec![vec![LElement::zero(); n]; n];
        for ((i, j), v) in bracket {
            if i >= n || j >= n {
                return Err(Error::Description(format!("bracket index ({i}, {j}) out of range")));
            }
            if i == j {
                if !v.is_zero() {
                    return Err(Error::Structure(format!("[{0}, {0}] must vanish", basis[i])));
                }
                continue;
            }
            if v.coeffs().any(|(k, _)| k >= n) {
                return Err(Error::Description(format!("bracket value for ({i}, {j}) out of range")));
            }
            let v = v.normalize(&base);
            let (i, j, v) = if i < j { (i, j, v) } else { (j, i, v.scale_scalar(&-S::one())) };
            table[j][i] = v.scale_scalar(&-S::one());
            table[i][j] = v;
        }
        Ok(Self { base, basis, anchor, table })
    }

    /// Coordinate vector fields on a polynomial ring: the Lie-Rinehart
    /// algebra of all derivations.
    pub fn derivations(base: Arc<QuotientAlgebra<S>>) -> Result<Self> {
        let n = base.nvars();
        let basis = base.vars().iter().map(|v| format!("d{v}")).collect();
        let anchor = (0..n).map(|k| Derivation::coordinate(&base, k)).collect();
        Self::new(base, basis, anchor, BTreeMap::new())
    }

    pub fn base(&self) -> &QuotientAlgebra<S> {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<QuotientAlgebra<S>> {
        &self.base
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn anchor(&self, i: usize) -> &Derivation<S> {
        &self.anchor[i]
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> &LElement<S> {
        &self.table[i][j]
    }

    pub fn element(&self, i: usize) -> LElement<S> {
        LElement::basis(i, &self.base)
    }

    /// The derivation `x` acts by.
    pub fn anchor_of(&self, x: &LElement<S>) -> Derivation<S> {
        let mut d = Derivation::zero(&self.base);
        for (i, a) in x.coeffs() {
            d = d.add(&self.anchor[i].scale(a, &self.base));
        }
        d
    }

    /// `x(a) = Σ x_i · e_i(a)`.
    pub fn anchor_eval(&self, x: &LElement<S>, a: &Poly<S>) -> Poly<S> {
        let mut out = self.base.zero();
        for (i, c) in x.coeffs() {
            let ea = self.anchor[i].apply(a, &self.base);
            if !ea.is_zero() {
                out = &out + &(c * &ea);
            }
        }
        self.base.normal_form(&out)
    }

    /// `[Σ a_i e_i, Σ b_j e_j]`, extended from the table by the Leibniz rule.
    pub fn bracket_eval(&self, x: &LElement<S>, y: &LElement<S>) -> LElement<S> {
        let alg = &*self.base;
        let mut out = LElement::zero();
        for (i, a) in x.coeffs() {
            for (j, b) in y.coeffs() {
                let eib = self.anchor[i].apply(b, alg);
                if !eib.is_zero() {
                    out.add_coeff(j, a * &eib);
                }
                let eja = self.anchor[j].apply(a, alg);
                if !eja.is_zero() {
                    out.add_coeff(i, -&(b * &eja));
                }
                let t = &self.table[i][j];
                if !t.is_zero() {
                    let ab = a * b;
                    for (k, c) in t.coeffs() {
                        out.add_coeff(k, &ab * c);
                    }
                }
            }
        }
        out.normalize(alg)
    }

    /// Largest coefficient degree in the anchor and bracket tables.
    pub fn table_degree(&self) -> u32 {
        let a = self.anchor.iter().flat_map(|d| d.images().iter().filter_map(Poly::degree)).max();
        let b = self.table.iter().flatten().filter_map(LElement::degree).max();
        a.unwrap_or(0).max(b.unwrap_or(0))
    }

    /// Same algebra with the basis reordered: new basis element `k` is old
    /// element `perm[k]`.
    pub fn permute_basis(&self, perm: &[usize]) -> Result<Self> {
        let n = self.rank();
        let mut inv = vec![usize::MAX; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        if perm.len() != n || inv.contains(&usize::MAX) {
            return Err(Error::Description("not a permutation of the basis".into()));
        }
        let basis = perm.iter().map(|&o| self.basis[o].clone()).collect();
        let anchor = perm.iter().map(|&o| self.anchor[o].clone()).collect();
        let mut bracket = BTreeMap::new();
        for a in 0..n {
            for b in a + 1..n {
                let v = &self.table[perm[a]][perm[b]];
                bracket.insert((a, b), LElement::from_coeffs(v.coeffs().map(|(k, c)| (inv[k], c.clone()))));
            }
        }
        Self::new(self.base.clone(), basis, anchor, bracket)
    }

    pub fn format_elem(&self, x: &LElement<S>) -> String {
        x.format(&self.basis, &self.base)
    }

    /// Checks the Lie-Rinehart axioms on basis elements times normal-form
    /// monomials of degree at most `deg_bound`.
    pub fn verify(&self, deg_bound: u32) -> Report {
        verify_lie_rinehart(self, deg_bound)
    }
}

fn monomial_poly<S: Scalar>(m: &Monomial) -> Poly<S> {
    Poly::term(m.clone(), S::one())
}

/// Axiom check: Jacobi, the Leibniz rule for the bracket, A-linearity of the
/// anchor, the anchor being a Lie morphism into `Der(A)`, and well-definedness
/// of the anchors on the relations.
pub fn verify_lie_rinehart<S: Scalar>(l: &LieRinehartAlgebra<S>, deg_bound: u32) -> Report {
    let alg = l.base();
    let n = l.rank();
    let mut report = Report::new("lie-rinehart axioms");
    report.note(format!("test monomials up to degree {deg_bound}"));
    if deg_bound < l.table_degree() {
        report.note(format!(
            "degree bound {deg_bound} is below the table degree {}; coverage is partial",
            l.table_degree()
        ));
    }
    let monos: Vec<Poly<S>> = alg.standard_monomials_upto(deg_bound).iter().map(monomial_poly).collect();
    let e = |i: usize| l.element(i);

    for i in 0..n {
        let ok = l.anchor(i).check_well_defined(alg);
        report.check(format!("anchor {} well defined", l.basis()[i]), ok.is_ok(), || ok.unwrap_err().to_string());
    }

    // Jacobi on (a e_i, e_j, e_k)
    let mut jacobi_fail = None;
    let mut jacobi_count = 0;
    'outer: for a in &monos {
        for i in 0..n {
            let x = e(i).scale(a, alg);
            for j in 0..n {
                for k in j + 1..n {
                    jacobi_count += 1;
                    let (y, z) = (e(j), e(k));
                    let t1 = l.bracket_eval(&x, &l.bracket_eval(&y, &z));
                    let t2 = l.bracket_eval(&y, &l.bracket_eval(&z, &x));
                    let t3 = l.bracket_eval(&z, &l.bracket_eval(&x, &y));
                    let s = t1.add(&t2).add(&t3);
                    if !s.is_zero() {
                        jacobi_fail = Some(format!(
                            "Jacobi({}, {}, {}) = {}",
                            l.format_elem(&x),
                            l.basis()[j],
                            l.basis()[k],
                            l.format_elem(&s)
                        ));
                        break 'outer;
                    }
                }
            }
        }
    }
    report.check(format!("Jacobi identity ({jacobi_count} triples)"), jacobi_fail.is_none(), || {
        jacobi_fail.clone().unwrap_or_default()
    });

    // [b e_i, a e_j] = (b e_i)(a) e_j + a [b e_i, e_j]
    let mut leibniz_fail = None;
    'leib: for a in &monos {
        for b in monos.iter().filter(|b| b.degree().unwrap_or(0) + a.degree().unwrap_or(0) <= deg_bound) {
            for i in 0..n {
                let x = e(i).scale(b, alg);
                for j in 0..n {
                    let lhs = l.bracket_eval(&x, &e(j).scale(a, alg));
                    let rhs = e(j)
                        .scale(&l.anchor_eval(&x, a), alg)
                        .add(&l.bracket_eval(&x, &e(j)).scale(a, alg));
                    if lhs != rhs {
                        leibniz_fail = Some(format!(
                            "[{}, ({})*{}]: {} vs {}",
                            l.format_elem(&x),
                            alg.format(a),
                            l.basis()[j],
                            l.format_elem(&lhs),
                            l.format_elem(&rhs)
                        ));
                        break 'leib;
                    }
                }
            }
        }
    }
    report.check("Leibniz rule [x, a y] = x(a) y + a [x, y]", leibniz_fail.is_none(), || {
        leibniz_fail.clone().unwrap_or_default()
    });

    // (a e_i)(b) = a (e_i(b))
    let mut lin_fail = None;
    'lin: for a in &monos {
        for b in &monos {
            for i in 0..n {
                let lhs = l.anchor_eval(&e(i).scale(a, alg), b);
                let rhs = alg.mul(a, &l.anchor_eval(&e(i), b));
                if lhs != rhs {
                    lin_fail = Some(format!("({})*{} applied to {}", alg.format(a), l.basis()[i], alg.format(b)));
                    break 'lin;
                }
            }
        }
    }
    report.check("anchor is A-linear", lin_fail.is_none(), || lin_fail.clone().unwrap_or_default());

    // anchor([a e_i, e_j]) = [a·anchor(e_i), anchor(e_j)]
    let mut morph_fail = None;
    'morph: for a in &monos {
        for i in 0..n {
            let x = e(i).scale(a, alg);
            for j in 0..n {
                let lhs = l.anchor_of(&l.bracket_eval(&x, &e(j)));
                let rhs = l.anchor_of(&x).commutator(l.anchor(j), alg);
                if lhs != rhs {
                    morph_fail = Some(format!(
                        "anchor([{}, {}]) = {} but commutator = {}",
                        l.format_elem(&x),
                        l.basis()[j],
                        lhs.format(alg),
                        rhs.format(alg)
                    ));
                    break 'morph;
                }
            }
        }
    }
    report.check("anchor is a Lie algebra morphism into Der(A)", morph_fail.is_none(), || {
        morph_fail.clone().unwrap_or_default()
    });
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type Q = Rational;

    fn poly_ring(vars: &[&str]) -> Arc<QuotientAlgebra<Q>> {
        Arc::new(QuotientAlgebra::parse(vars, &[]).unwrap())
    }

    #[test]
    fn anchor_on_line() {
        let l = LieRinehartAlgebra::derivations(poly_ring(&["x"])).unwrap();
        let a = l.base().parse_elem("x^2").unwrap();
        assert_eq!(l.base().format(&l.anchor_eval(&l.element(0), &a)), "2*x");
        assert!(l.anchor_eval(&LElement::zero(), &a).is_zero());
    }

    #[test]
    fn vector_field_commutator() {
        // [x ∂y, y ∂x] = x ∂x - y ∂y
        let l = LieRinehartAlgebra::derivations(poly_ring(&["x", "y"])).unwrap();
        let alg = l.base();
        let x = alg.var(0);
        let y = alg.var(1);
        let u = l.element(1).scale(&x, alg);
        let v = l.element(0).scale(&y, alg);
        let w = l.bracket_eval(&u, &v);
        assert_eq!(l.format_elem(&w), "x*dx - y*dy");
        // oracle: apply both composites to the coordinates
        let (du, dv) = (l.anchor_of(&u), l.anchor_of(&v));
        assert_eq!(l.anchor_of(&w), du.commutator(&dv, alg));
    }

    #[test]
    fn self_bracket_vanishes() {
        let l = LieRinehartAlgebra::derivations(poly_ring(&["x", "y"])).unwrap();
        assert!(l.bracket_eval(&l.element(0), &l.element(0)).is_zero());
    }

    #[test]
    fn coordinate_fields_pass() {
        let l = LieRinehartAlgebra::derivations(poly_ring(&["x1", "x2", "x3"])).unwrap();
        let r = l.verify(3);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn rejects_ill_defined_anchor() {
        let base = Arc::new(QuotientAlgebra::<Q>::parse(&["x", "y"], &["x*y"]).unwrap());
        let err = LieRinehartAlgebra::derivations(base).unwrap_err();
        assert!(matches!(err, Error::Structure(_)));
    }
}
