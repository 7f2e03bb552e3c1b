//! The universal enveloping algebra `U(A, L)` of a Lie-Rinehart algebra with
//! free `L`, represented through Poincaré-Birkhoff-Witt normal forms
//! `Σ a_w · e_{w_1} ⋯ e_{w_k}` with non-decreasing words `w`.

use std::collections::BTreeMap;

use crate::lie_rinehart::{LElement, LieRinehartAlgebra};
use crate::linalg::{Echelon, SparseVec};
use crate::poly::{Monomial, Poly};
use crate::report::Report;
use crate::scalar::Scalar;

/// Element of `U(A, L)` in PBW normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UEElement<S> {
    terms: BTreeMap<Vec<usize>, Poly<S>>,
}

impl<S: Scalar> Default for UEElement<S> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<S: Scalar> UEElement<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Poly<S>)> {
        self.terms.iter()
    }

    pub fn coeff(&self, word: &[usize]) -> Option<&Poly<S>> {
        self.terms.get(word)
    }

    fn add_term(&mut self, word: Vec<usize>, a: Poly<S>) {
        if a.is_zero() {
            return;
        }
        let s = match self.terms.remove(&word) {
            Some(b) => &b + &a,
            None => a,
        };
        if !s.is_zero() {
            self.terms.insert(word, s);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, a) in &other.terms {
            out.add_term(w.clone(), a.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, a) in &other.terms {
            out.add_term(w.clone(), -a);
        }
        out
    }

    pub fn scale_scalar(&self, c: &S) -> Self {
        let mut out = Self::zero();
        for (w, a) in &self.terms {
            out.add_term(w.clone(), a.scale(c));
        }
        out
    }

    /// Filtration degree: the longest word, `None` for zero.
    pub fn filtration_degree(&self) -> Option<usize> {
        self.terms.keys().map(Vec::len).max()
    }

    /// Component of word length exactly `k`, the image in `U_k / U_{k-1}`.
    pub fn graded_part(&self, k: usize) -> Self {
        Self { terms: self.terms.iter().filter(|(w, _)| w.len() == k).map(|(w, a)| (w.clone(), a.clone())).collect() }
    }

    pub fn format(&self, l: &LieRinehartAlgebra<S>) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let alg = l.base();
        let mut parts = Vec::new();
        let mut words: Vec<_> = self.terms.iter().collect();
        words.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.0.cmp(b.0)));
        for (w, a) in words {
            let word: Vec<&str> = w.iter().map(|&i| l.basis()[i].as_str()).collect();
            let c = alg.format(a);
            let c = if a.len() > 1 { format!("({c})") } else { c };
            parts.push(match (w.is_empty(), c.as_str()) {
                (true, _) => c.clone(),
                (false, "1") => word.join("*"),
                (false, "-1") => format!("-{}", word.join("*")),
                _ => format!("{c}*{}", word.join("*")),
            });
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

/// Order in which redexes are rewritten; every choice must give the same
/// normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RewriteStrategy {
    #[default]
    Leftmost,
    Rightmost,
}

#[derive(Clone, Debug)]
enum Token<S> {
    Fun(Poly<S>),
    Letter(usize),
}

/// Straightens a sum of token strings using
/// `e_j · a = a · e_j + e_j(a)` and `e_j · e_i = e_i · e_j + [e_j, e_i]` for `j > i`.
fn straighten<S: Scalar>(
    l: &LieRinehartAlgebra<S>,
    start: Vec<(Poly<S>, Vec<Token<S>>)>,
    strategy: RewriteStrategy,
) -> UEElement<S> {
    let alg = l.base();
    let mut out = UEElement::zero();
    let mut work = start;
    while let Some((mut coeff, mut toks)) = work.pop() {
        // absorb leading functions into the coefficient
        let lead = toks.iter().take_while(|t| matches!(t, Token::Fun(_))).count();
        for t in toks.drain(..lead) {
            if let Token::Fun(f) = t {
                coeff = alg.mul(&coeff, &f);
            }
        }
        if coeff.is_zero() {
            continue;
        }
        let is_redex = |k: usize| match (&toks[k], &toks[k + 1]) {
            (Token::Letter(_), Token::Fun(_)) | (Token::Fun(_), Token::Fun(_)) => true,
            (Token::Letter(j), Token::Letter(i)) => j > i,
            (Token::Fun(_), Token::Letter(_)) => false,
        };
        let pos = match strategy {
            RewriteStrategy::Leftmost => (0..toks.len().saturating_sub(1)).find(|&k| is_redex(k)),
            RewriteStrategy::Rightmost => (0..toks.len().saturating_sub(1)).rev().find(|&k| is_redex(k)),
        };
        let Some(k) = pos else {
            let word = toks
                .iter()
                .map(|t| match t {
                    Token::Letter(i) => *i,
                    Token::Fun(_) => unreachable!("function token in straightened word"),
                })
                .collect();
            out.add_term(word, coeff);
            continue;
        };
        let (head, tail) = (toks[..k].to_vec(), toks[k + 2..].to_vec());
        let splice = |mid: Vec<Token<S>>| {
            let mut v = head.clone();
            v.extend(mid);
            v.extend(tail.iter().cloned());
            v
        };
        match (toks[k].clone(), toks[k + 1].clone()) {
            (Token::Fun(f), Token::Fun(g)) => {
                let fg = alg.mul(&f, &g);
                if !fg.is_zero() {
                    work.push((coeff, splice(vec![Token::Fun(fg)])));
                }
            }
            (Token::Letter(j), Token::Fun(f)) => {
                let ef = l.anchor(j).apply(&f, alg);
                if !ef.is_zero() {
                    work.push((coeff.clone(), splice(vec![Token::Fun(ef)])));
                }
                if !f.is_zero() {
                    work.push((coeff, splice(vec![Token::Fun(f), Token::Letter(j)])));
                }
            }
            (Token::Letter(j), Token::Letter(i)) => {
                for (m, c) in l.basis_bracket(j, i).coeffs() {
                    work.push((coeff.clone(), splice(vec![Token::Fun(c.clone()), Token::Letter(m)])));
                }
                work.push((coeff, splice(vec![Token::Letter(i), Token::Letter(j)])));
            }
            (Token::Fun(_), Token::Letter(_)) => unreachable!(),
        }
    }
    out
}

fn tokens_of<S: Scalar>(u: &UEElement<S>) -> Vec<(Poly<S>, Vec<Token<S>>)> {
    u.terms.iter().map(|(w, a)| (a.clone(), w.iter().map(|&i| Token::Letter(i)).collect())).collect()
}

/// Normal form of the product `a_1 e_{i_1} a_2 e_{i_2} ⋯`.
pub fn pbw_normal_form<S: Scalar>(l: &LieRinehartAlgebra<S>, word: &[(Poly<S>, usize)]) -> UEElement<S> {
    pbw_normal_form_with(l, word, RewriteStrategy::default())
}

pub fn pbw_normal_form_with<S: Scalar>(
    l: &LieRinehartAlgebra<S>,
    word: &[(Poly<S>, usize)],
    strategy: RewriteStrategy,
) -> UEElement<S> {
    let mut toks = Vec::with_capacity(2 * word.len());
    for (a, i) in word {
        toks.push(Token::Fun(a.clone()));
        toks.push(Token::Letter(*i));
    }
    straighten(l, vec![(l.base().one(), toks)], strategy)
}

/// `ι_A(a)`.
pub fn from_function<S: Scalar>(l: &LieRinehartAlgebra<S>, a: &Poly<S>) -> UEElement<S> {
    let mut out = UEElement::zero();
    out.add_term(Vec::new(), l.base().normal_form(a));
    out
}

/// `ι_L(x)`.
pub fn from_element<S: Scalar>(l: &LieRinehartAlgebra<S>, x: &LElement<S>) -> UEElement<S> {
    let mut out = UEElement::zero();
    for (i, a) in x.coeffs() {
        out.add_term(vec![i], l.base().normal_form(a));
    }
    out
}

pub fn ue_one<S: Scalar>(l: &LieRinehartAlgebra<S>) -> UEElement<S> {
    from_function(l, &l.base().one())
}

pub fn ue_multiply<S: Scalar>(l: &LieRinehartAlgebra<S>, u: &UEElement<S>, v: &UEElement<S>) -> UEElement<S> {
    ue_multiply_with(l, u, v, RewriteStrategy::default())
}

pub fn ue_multiply_with<S: Scalar>(
    l: &LieRinehartAlgebra<S>,
    u: &UEElement<S>,
    v: &UEElement<S>,
    strategy: RewriteStrategy,
) -> UEElement<S> {
    let mut start = Vec::new();
    for (a, ta) in tokens_of(u) {
        for (b, tb) in tokens_of(v) {
            let mut toks = ta.clone();
            toks.push(Token::Fun(b));
            toks.extend(tb);
            start.push((a.clone(), toks));
        }
    }
    straighten(l, start, strategy)
}

/// Non-decreasing words of length `k` over `n` letters.
pub fn sorted_words(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in from..n {
            cur.push(i);
            rec(n, k, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}

fn permutations(word: &[usize]) -> Vec<Vec<usize>> {
    if word.len() <= 1 {
        return vec![word.to_vec()];
    }
    let mut out = Vec::new();
    for k in 0..word.len() {
        let mut rest = word.to_vec();
        let x = rest.remove(k);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Symmetrization `(1/k!) Σ_σ e_{w_σ(1)} ⋯ e_{w_σ(k)}` in normal form.
pub fn symmetrize<S: Scalar>(l: &LieRinehartAlgebra<S>, word: &[usize]) -> UEElement<S> {
    let one = l.base().one();
    let perms = permutations(word);
    let mut acc = UEElement::zero();
    for p in &perms {
        let w: Vec<_> = p.iter().map(|&i| (one.clone(), i)).collect();
        acc = acc.add(&pbw_normal_form(l, &w));
    }
    acc.scale_scalar(&S::from_i64(perms.len() as i64).inv())
}

/// Column indexing for vectorizing elements over `(word, monomial)` pairs.
#[derive(Default)]
struct Columns {
    index: BTreeMap<(Vec<usize>, Monomial), usize>,
}

impl Columns {
    fn vectorize<S: Scalar>(&mut self, u: &UEElement<S>) -> SparseVec<S> {
        let mut v = SparseVec::new();
        for (w, a) in u.terms() {
            for (m, c) in a.terms() {
                let next = self.index.len();
                let col = *self.index.entry((w.clone(), m.clone())).or_insert(next);
                v.insert(col, c.clone());
            }
        }
        v
    }
}

/// Windowed check that the associated graded of `U(A, L)` is the symmetric
/// algebra: the symmetrized monomials `a · sym(e_I)` with `|I| ≤ filtration`
/// and `deg a ≤ coeff_degree` are independent in `U_k / U_{k-1}`, and
/// `ι_L` is injective on `A_{≤ coeff_degree} ⊗ L`.
pub fn check_pbw<S: Scalar>(l: &LieRinehartAlgebra<S>, filtration: usize, coeff_degree: u32) -> Report {
    let alg = l.base();
    let n = l.rank();
    let mut report = Report::new("PBW graded isomorphism");
    report.note(format!("window: filtration <= {filtration}, coefficient degree <= {coeff_degree}"));
    let monos: Vec<Poly<S>> =
        alg.standard_monomials_upto(coeff_degree).into_iter().map(|m| Poly::term(m, S::one())).collect();

    // graded commutativity of the letters
    let one = alg.one();
    let mut comm_fail = None;
    for i in 0..n {
        for j in i + 1..n {
            let ij = pbw_normal_form(l, &[(one.clone(), i), (one.clone(), j)]);
            let ji = pbw_normal_form(l, &[(one.clone(), j), (one.clone(), i)]);
            let d = ij.sub(&ji);
            if d.filtration_degree().unwrap_or(0) >= 2 {
                comm_fail.get_or_insert_with(|| format!("e{i} e{j} - e{j} e{i} = {}", d.format(l)));
            }
        }
    }
    report.check("gr U is commutative on generators", comm_fail.is_none(), || comm_fail.clone().unwrap_or_default());

    for k in 0..=filtration {
        let words = sorted_words(n, k);
        let mut cols = Columns::default();
        let mut ech = Echelon::tracking();
        let mut labels = Vec::new();
        let mut witness = None;
        for w in &words {
            let top = symmetrize(l, w).graded_part(k);
            for a in &monos {
                let scaled = UEElement {
                    terms: top.terms.iter().map(|(w, c)| (w.clone(), alg.mul(a, c))).collect(),
                };
                let scaled = UEElement { terms: scaled.terms.into_iter().filter(|(_, c)| !c.is_zero()).collect() };
                let word: Vec<&str> = w.iter().map(|&i| l.basis()[i].as_str()).collect();
                labels.push(format!("({})*sym({})", alg.format(a), word.join(",")));
                if let Err(dep) = ech.insert(cols.vectorize(&scaled)) {
                    if witness.is_none() {
                        let combo: Vec<String> = dep.iter().map(|(idx, c)| format!("{c}·{}", labels[*idx])).collect();
                        witness = Some(format!("vanishing combination in gr_{k}: {} = 0", combo.join(" + ")));
                    }
                }
            }
        }
        let expected = words.len() * monos.len();
        report.check(
            format!("gr_{k}: {expected} symmetrized monomials independent (rank {})", ech.rank()),
            witness.is_none(),
            || witness.clone().unwrap_or_default(),
        );
    }

    // injectivity of ι_L on the window
    let mut cols = Columns::default();
    let mut ech = Echelon::tracking();
    let mut labels = Vec::new();
    let mut witness = None;
    for i in 0..n {
        for a in &monos {
            labels.push(format!("({})*{}", alg.format(a), l.basis()[i]));
            let x = from_element(l, &LElement::single(i, a.clone()));
            if let Err(dep) = ech.insert(cols.vectorize(&x)) {
                if witness.is_none() {
                    let combo: Vec<String> = dep.iter().map(|(idx, c)| format!("{c}·{}", labels[*idx])).collect();
                    witness = Some(format!("ι_L kills {}", combo.join(" + ")));
                }
            }
        }
    }
    report.check("ι_L injective on the window", witness.is_none(), || witness.clone().unwrap_or_default());
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::QuotientAlgebra;
    use crate::scalar::Rational;
    use std::sync::Arc;

    fn weyl() -> LieRinehartAlgebra<Rational> {
        LieRinehartAlgebra::derivations(Arc::new(QuotientAlgebra::parse(&["x"], &[]).unwrap())).unwrap()
    }

    #[test]
    fn defining_relation() {
        let l = weyl();
        let x = l.base().var(0);
        let u = pbw_normal_form(&l, &[(l.base().one(), 0)]);
        assert_eq!(u.format(&l), "dx");
        // ∂ · x = x ∂ + 1
        let d = from_element(&l, &l.element(0));
        let xu = from_function(&l, &x);
        assert_eq!(ue_multiply(&l, &d, &xu).format(&l), "x*dx + 1");
    }

    #[test]
    fn ordered_word_is_fixed() {
        let l = weyl();
        let x = l.base().var(0);
        let u = pbw_normal_form(&l, &[(x.clone(), 0), (l.base().one(), 0)]);
        assert_eq!(u.format(&l), "x*dx*dx");
    }

    #[test]
    fn unit_and_module_relation() {
        let l = weyl();
        let x2 = l.base().parse_elem("x^2").unwrap();
        let xd = from_element(&l, &LElement::single(0, x2.clone()));
        assert_eq!(ue_multiply(&l, &ue_one(&l), &xd), xd);
        assert_eq!(ue_multiply(&l, &from_function(&l, &x2), &from_element(&l, &l.element(0))), xd);
    }

    #[test]
    fn sorted_word_count() {
        assert_eq!(sorted_words(3, 3).len(), 10);
        assert_eq!(sorted_words(0, 0).len(), 1);
        assert_eq!(sorted_words(0, 1).len(), 0);
    }
}
