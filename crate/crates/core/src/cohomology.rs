//! The Rinehart algebra `(Alt_A(L, A), d)` and its cohomology, computed
//! exactly on finite-dimensional graded pieces.
//!
//! A cochain `ω` of form degree `p` has weight `w` when each component
//! `ω(e_I)` is homogeneous of polynomial degree `w + Σ_{i∈I} δ_i`, where
//! `δ_i` is the degree shift of the anchor of `e_i`. The differential
//! preserves weight, so the complex splits into pieces indexed by
//! `(p, w)`; `w` is reported as the polynomial degree of 0-cochains.
//! Signs follow the Chevalley-Eilenberg convention
//! `(dω)(α_0..α_p) = Σ (-1)^i α_i(ω(..α̂_i..)) + Σ_{i<j} (-1)^{i+j} ω([α_i, α_j], ..α̂_i..α̂_j..)`.

use std::collections::{BTreeMap, HashMap};
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie_rinehart::LieRinehartAlgebra;
use crate::linalg::{Echelon, SparseVec};
use crate::poly::{Monomial, Poly};
use crate::scalar::Scalar;

/// An `A`-multilinear alternating form on `L`, stored on increasing index
/// tuples of the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AltForm<S> {
    degree: usize,
    components: BTreeMap<Vec<usize>, Poly<S>>,
}

impl<S: Scalar> AltForm<S> {
    pub fn zero(degree: usize) -> Self {
        Self { degree, components: BTreeMap::new() }
    }

    /// A 0-form, i.e. an element of `A`.
    pub fn function(a: Poly<S>) -> Self {
        let mut out = Self::zero(0);
        out.set(Vec::new(), a);
        out
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &Poly<S>)> {
        self.components.iter()
    }

    /// Sets the component on an increasing tuple.
    pub fn set(&mut self, tuple: Vec<usize>, value: Poly<S>) {
        assert_eq!(tuple.len(), self.degree);
        assert!(tuple.windows(2).all(|w| w[0] < w[1]), "tuple must be increasing");
        if value.is_zero() {
            self.components.remove(&tuple);
        } else {
            self.components.insert(tuple, value);
        }
    }

    /// `ω(e_{t_1}, …, e_{t_p})` for an arbitrary index tuple.
    pub fn eval(&self, tuple: &[usize], nvars: usize) -> Poly<S> {
        let mut t = tuple.to_vec();
        let mut sign = false;
        // bubble sort, tracking parity
        for a in 0..t.len() {
            for b in 0..t.len() - 1 - a {
                if t[b] > t[b + 1] {
                    t.swap(b, b + 1);
                    sign = !sign;
                }
            }
        }
        if t.windows(2).any(|w| w[0] == w[1]) {
            return Poly::zero(nvars);
        }
        match self.components.get(&t) {
            Some(v) if sign => -v,
            Some(v) => v.clone(),
            None => Poly::zero(nvars),
        }
    }
}

/// Increasing `k`-tuples from `0..n`.
pub fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in from..n {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}

/// The Rinehart differential.
pub fn rinehart_d<S: Scalar>(omega: &AltForm<S>, l: &LieRinehartAlgebra<S>) -> AltForm<S> {
    let alg = l.base();
    let nv = alg.nvars();
    let p = omega.degree();
    let mut out = AltForm::zero(p + 1);
    if omega.is_zero() {
        return out;
    }
    for tuple in increasing_tuples(l.rank(), p + 1) {
        let mut acc = Poly::zero(nv);
        for i in 0..=p {
            let mut rest = tuple.clone();
            let ai = rest.remove(i);
            let v = omega.eval(&rest, nv);
            if v.is_zero() {
                continue;
            }
            let t = l.anchor(ai).apply(&v, alg);
            acc = if i % 2 == 0 { &acc + &t } else { &acc - &t };
        }
        for i in 0..=p {
            for j in i + 1..=p {
                let br = l.basis_bracket(tuple[i], tuple[j]);
                if br.is_zero() {
                    continue;
                }
                let rest: Vec<usize> =
                    tuple.iter().enumerate().filter(|(k, _)| *k != i && *k != j).map(|(_, v)| *v).collect();
                let mut t = Poly::zero(nv);
                for (k, c) in br.coeffs() {
                    let mut args = vec![k];
                    args.extend(&rest);
                    let v = omega.eval(&args, nv);
                    if !v.is_zero() {
                        t = &t + &(c * &v);
                    }
                }
                acc = if (i + j) % 2 == 0 { &acc + &t } else { &acc - &t };
            }
        }
        out.set(tuple, alg.normal_form(&acc));
    }
    out
}

/// Degree shifts `δ_i` making the differential weight-homogeneous.
///
/// Anchors must send each generator to a homogeneous polynomial of degree
/// `1 + δ_i`, bracket coefficients of `[e_i, e_j]` along `e_k` must be
/// homogeneous of degree `δ_i + δ_j - δ_k`, and the relations homogeneous.
pub fn infer_grading<S: Scalar>(l: &LieRinehartAlgebra<S>) -> Result<Vec<i64>> {
    let alg = l.base();
    let n = l.rank();
    if !alg.is_graded() {
        return Err(Error::Refused("relations are not homogeneous; the degree window is not a subcomplex".into()));
    }
    let mut shift: Vec<Option<i64>> = vec![None; n];
    for (i, s) in shift.iter_mut().enumerate() {
        for img in l.anchor(i).images() {
            if img.is_zero() {
                continue;
            }
            if !img.is_homogeneous() {
                return Err(Error::Refused(format!("anchor of {} is not homogeneous", l.basis()[i])));
            }
            let d = img.degree().unwrap() as i64 - 1;
            match s {
                Some(e) if *e != d => {
                    return Err(Error::Refused(format!(
                        "anchor of {} shifts degree inconsistently",
                        l.basis()[i]
                    )))
                }
                _ => *s = Some(d),
            }
        }
    }
    // bracket constraints δ_i + δ_j = g + δ_k
    let mut constraints = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for (k, c) in l.basis_bracket(i, j).coeffs() {
                if !c.is_homogeneous() {
                    return Err(Error::Refused(format!(
                        "bracket [{}, {}] has an inhomogeneous coefficient",
                        l.basis()[i],
                        l.basis()[j]
                    )));
                }
                constraints.push((i, j, k, c.degree().unwrap() as i64));
            }
        }
    }
    loop {
        let mut progress = true;
        while progress {
            progress = false;
            for &(i, j, k, g) in &constraints {
                let unknown: Vec<usize> = [i, j, k].into_iter().filter(|&x| shift[x].is_none()).collect();
                let mut distinct = unknown.clone();
                distinct.dedup();
                distinct.sort();
                distinct.dedup();
                if distinct.len() != 1 {
                    continue;
                }
                let u = distinct[0];
                // coefficient of δ_u in δ_i + δ_j - δ_k - g = 0
                let coeff = (i == u) as i64 + (j == u) as i64 - (k == u) as i64;
                if coeff == 0 {
                    continue;
                }
                let known: i64 = [(i, 1), (j, 1), (k, -1)]
                    .iter()
                    .filter(|(x, _)| *x != u)
                    .map(|(x, s)| s * shift[*x].unwrap())
                    .sum();
                let rhs = g - known;
                if rhs % coeff != 0 {
                    return Err(Error::Refused("no integral grading fits the bracket table".into()));
                }
                shift[u] = Some(rhs / coeff);
                progress = true;
            }
        }
        match shift.iter().position(Option::is_none) {
            Some(u) => shift[u] = Some(0),
            None => break,
        }
    }
    let shift: Vec<i64> = shift.into_iter().map(Option::unwrap).collect();
    for &(i, j, k, g) in &constraints {
        if shift[i] + shift[j] != g + shift[k] {
            return Err(Error::Refused(format!(
                "bracket [{}, {}] is not homogeneous for any grading",
                l.basis()[i],
                l.basis()[j]
            )));
        }
    }
    Ok(shift)
}

/// Basis of the cochains of form degree `p` and weight `w`.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub form_degree: usize,
    pub weight: i64,
    pub basis: Vec<(Vec<usize>, Monomial)>,
    index: HashMap<(Vec<usize>, Monomial), usize>,
}

impl GradedPiece {
    pub fn new<S: Scalar>(l: &LieRinehartAlgebra<S>, shift: &[i64], p: usize, w: i64) -> Self {
        let mut basis = Vec::new();
        for tuple in increasing_tuples(l.rank(), p) {
            let deg = w + tuple.iter().map(|&i| shift[i]).sum::<i64>();
            if deg < 0 {
                continue;
            }
            for m in l.base().standard_monomials(deg as u32) {
                basis.push((tuple.clone(), m));
            }
        }
        let index = basis.iter().cloned().enumerate().map(|(k, b)| (b, k)).collect();
        Self { form_degree: p, weight: w, basis, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn form<S: Scalar>(&self, k: usize, nvars: usize) -> AltForm<S> {
        let (tuple, m) = &self.basis[k];
        let mut f = AltForm::zero(self.form_degree);
        f.set(tuple.clone(), Poly::term(m.clone(), S::one()));
        debug_assert_eq!(m.nvars(), nvars);
        f
    }

    fn vectorize<S: Scalar>(&self, f: &AltForm<S>) -> Result<SparseVec<S>> {
        let mut v = SparseVec::new();
        for (tuple, a) in f.components() {
            for (m, c) in a.terms() {
                let k = self.index.get(&(tuple.clone(), m.clone())).ok_or_else(|| {
                    Error::Refused("differential leaves the graded piece; grading is inconsistent".into())
                })?;
                v.insert(*k, c.clone());
            }
        }
        Ok(v)
    }

    /// Columns of the differential out of this piece, as vectors in `target`.
    pub fn differential<S: Scalar>(
        &self,
        l: &LieRinehartAlgebra<S>,
        target: &GradedPiece,
    ) -> Result<Vec<SparseVec<S>>> {
        let nv = l.base().nvars();
        (0..self.dim()).map(|k| target.vectorize(&rinehart_d(&self.form(k, nv), l))).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyRow {
    pub form_degree: usize,
    pub poly_degree: i64,
    pub dim_cochains: usize,
    pub dim_z: usize,
    pub dim_b: usize,
    pub dim_h: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyTable {
    pub window: (i64, i64),
    pub form_max: usize,
    pub degree_shifts: Vec<i64>,
    pub rows: Vec<CohomologyRow>,
    /// `d∘d = 0` held on every computed piece.
    pub dd_zero: bool,
}

impl CohomologyTable {
    /// Total `dim H^p` over the window.
    pub fn total(&self, p: usize) -> usize {
        self.rows.iter().filter(|r| r.form_degree == p).map(|r| r.dim_h).sum()
    }

    pub fn totals(&self) -> Vec<usize> {
        (0..=self.form_max).map(|p| self.total(p)).collect()
    }

    pub fn dim_h(&self, p: usize, poly_degree: i64) -> usize {
        self.rows
            .iter()
            .find(|r| r.form_degree == p && r.poly_degree == poly_degree)
            .map_or(0, |r| r.dim_h)
    }

    pub fn format(&self) -> String {
        let mut s = format!(
            "window {}..{}, degree shifts {:?}, d∘d = 0: {}\n{:>4} {:>6} {:>6} {:>6} {:>6} {:>6}\n",
            self.window.0, self.window.1, self.degree_shifts, self.dd_zero, "p", "deg", "dim C", "dim Z", "dim B", "dim H"
        );
        for r in &self.rows {
            s += &format!(
                "{:>4} {:>6} {:>6} {:>6} {:>6} {:>6}\n",
                r.form_degree, r.poly_degree, r.dim_cochains, r.dim_z, r.dim_b, r.dim_h
            );
        }
        s += &format!("totals: {:?}\n", self.totals());
        s
    }
}

/// Checks `D_{p+1} ∘ D_p = 0` given the columns of both differentials.
fn composite_vanishes<S: Scalar>(first: &[SparseVec<S>], second: &[SparseVec<S>]) -> bool {
    first.iter().all(|col| {
        let mut acc: SparseVec<S> = SparseVec::new();
        for (r, a) in col {
            for (k, b) in &second[*r] {
                let v = acc.remove(k).unwrap_or_else(S::zero) + a.clone() * b.clone();
                if !v.is_zero() {
                    acc.insert(*k, v);
                }
            }
        }
        acc.is_empty()
    })
}

fn column_rank<S: Scalar>(cols: &[SparseVec<S>]) -> usize {
    let mut e = Echelon::new();
    for c in cols {
        let _ = e.insert(c.clone());
    }
    e.rank()
}

/// Dimensions of `H^p` for `p ≤ form_max` on each weight of `window`.
pub fn cohomology_dims<S: Scalar>(
    l: &LieRinehartAlgebra<S>,
    form_max: usize,
    window: RangeInclusive<i64>,
) -> Result<CohomologyTable> {
    let shift = infer_grading(l)?;
    let form_max = form_max.min(l.rank());
    let top = (form_max + 1).min(l.rank());
    let weights: Vec<i64> = window.clone().collect();
    let per_weight: Vec<Result<(Vec<CohomologyRow>, bool)>> = weights
        .par_iter()
        .map(|&w| {
            let pieces: Vec<GradedPiece> = (0..=top + 1).map(|p| GradedPiece::new(l, &shift, p, w)).collect();
            // diffs[p]: C^p -> C^{p+1}
            let mut diffs = Vec::new();
            for p in 0..=top {
                if p < l.rank() && p <= form_max + 1 {
                    diffs.push(pieces[p].differential(l, &pieces[p + 1])?);
                } else {
                    diffs.push(vec![SparseVec::new(); pieces[p].dim()]);
                }
            }
            let mut dd = true;
            for p in 0..top {
                dd &= composite_vanishes(&diffs[p], &diffs[p + 1]);
            }
            let ranks: Vec<usize> = diffs.iter().map(|d| column_rank(d)).collect();
            let rows = (0..=form_max)
                .map(|p| {
                    let dim = pieces[p].dim();
                    let dim_z = dim - ranks[p];
                    let dim_b = if p == 0 { 0 } else { ranks[p - 1] };
                    CohomologyRow {
                        form_degree: p,
                        poly_degree: w,
                        dim_cochains: dim,
                        dim_z,
                        dim_b,
                        dim_h: dim_z - dim_b,
                    }
                })
                .collect();
            Ok((rows, dd))
        })
        .collect();
    let mut rows = Vec::new();
    let mut dd_zero = true;
    for r in per_weight {
        let (r, dd) = r?;
        rows.extend(r);
        dd_zero &= dd;
    }
    rows.sort_by_key(|r| (r.form_degree, r.poly_degree));
    Ok(CohomologyTable { window: (*window.start(), *window.end()), form_max, degree_shifts: shift, rows, dd_zero })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_rinehart::LElement;
    use crate::quotient::QuotientAlgebra;
    use crate::scalar::Rational;
    use std::sync::Arc;

    type Q = Rational;

    fn de_rham(vars: &[&str]) -> LieRinehartAlgebra<Q> {
        LieRinehartAlgebra::derivations(Arc::new(QuotientAlgebra::parse(vars, &[]).unwrap())).unwrap()
    }

    #[test]
    fn d_of_function_on_line() {
        let l = de_rham(&["x"]);
        let f = AltForm::function(l.base().parse_elem("x^3 + 2*x").unwrap());
        let df = rinehart_d(&f, &l);
        assert_eq!(l.base().format(&df.eval(&[0], 1)), "3*x^2 + 2");
        assert!(rinehart_d(&df, &l).is_zero());
    }

    #[test]
    fn one_form_on_lie_algebra() {
        // sl2 over Q: dω(x, y) = -ω([x, y])
        let alg = Arc::new(QuotientAlgebra::<Q>::parse(&[], &[]).unwrap());
        let one = alg.one();
        let mut br = BTreeMap::new();
        br.insert((0, 1), LElement::single(2, one.clone()));
        br.insert((0, 2), LElement::single(0, one.scale(&Q::from_integer((-2).into()))));
        br.insert((1, 2), LElement::single(1, one.scale(&Q::from_integer(2.into()))));
        let anchor = vec![crate::derivation::Derivation::zero(&alg); 3];
        let l = LieRinehartAlgebra::new(alg.clone(), vec!["e".into(), "f".into(), "h".into()], anchor, br).unwrap();
        let mut omega = AltForm::zero(1);
        omega.set(vec![2], one.clone());
        let d = rinehart_d(&omega, &l);
        assert_eq!(d.eval(&[0, 1], 0), -&one);
        assert!(d.eval(&[0, 2], 0).is_zero());
    }

    #[test]
    fn alternating_eval() {
        let mut w = AltForm::<Q>::zero(2);
        w.set(vec![0, 1], Poly::one(0));
        assert_eq!(w.eval(&[1, 0], 0), -&Poly::one(0));
        assert!(w.eval(&[1, 1], 0).is_zero());
    }

    #[test]
    fn tuples() {
        assert_eq!(increasing_tuples(3, 2).len(), 3);
        assert_eq!(increasing_tuples(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn grading_of_coordinate_fields() {
        assert_eq!(infer_grading(&de_rham(&["x", "y"])).unwrap(), vec![-1, -1]);
    }

    #[test]
    fn refuses_inhomogeneous_anchor() {
        let alg = Arc::new(QuotientAlgebra::<Q>::parse(&["x"], &[]).unwrap());
        let d = crate::derivation::Derivation::new(vec![alg.parse_elem("x^2 + 1").unwrap()], &alg);
        let l = LieRinehartAlgebra::new(alg, vec!["e".into()], vec![d], BTreeMap::new()).unwrap();
        assert!(matches!(cohomology_dims(&l, 1, 0..=2), Err(Error::Refused(_))));
    }
}
