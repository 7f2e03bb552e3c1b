//! Sparse multivariate polynomials with exact coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Exponent vector. The derived ordering is plain lexicographic with
/// variable 0 most significant; term orders are applied through
/// [`MonomialOrder`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Self(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Self) -> Self {
        Self(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// All monomials of total degree exactly `degree` in `nvars` variables,
    /// in decreasing lexicographic order.
    pub fn all_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
        fn rec(prefix: &mut Vec<u32>, left: usize, degree: u32, out: &mut Vec<Monomial>) {
            if left == 1 {
                prefix.push(degree);
                out.push(Monomial(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in (0..=degree).rev() {
                prefix.push(e);
                rec(prefix, left - 1, degree - e, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if degree == 0 {
                out.push(Monomial(Vec::new()));
            }
            return out;
        }
        rec(&mut Vec::with_capacity(nvars), nvars, degree, &mut out);
        out
    }

    pub fn format(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        for (e, name) in self.0.iter().zip(names) {
            match e {
                0 => {}
                1 => parts.push(name.clone()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// Term order used for leading monomials and rewriting.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    /// Total degree first, ties broken lexicographically.
    #[default]
    Grlex,
    Lex,
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Grlex => a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)),
            MonomialOrder::Lex => a.cmp(b),
        }
    }
}

/// A polynomial in a fixed number of variables. Zero coefficients are never
/// stored, so the zero polynomial has an empty term map.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<S> {
    nvars: usize,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> Poly<S> {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, S::one())
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(Monomial::var(nvars, i), S::one())
    }

    pub fn term(m: Monomial, c: S) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { nvars, terms }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, S)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, S)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    /// The constant term, if the polynomial is constant (zero included).
    pub fn as_constant(&self) -> Option<S> {
        match self.terms.len() {
            0 => Some(S::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Splits into homogeneous components keyed by degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<u32, Poly<S>> {
        let mut out: BTreeMap<u32, Poly<S>> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree())
                .or_insert_with(|| Poly::zero(self.nvars))
                .add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Monomial, &S)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn add_term(&mut self, m: Monomial, c: S) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn remove_term(&mut self, m: &Monomial) -> Option<S> {
        self.terms.remove(m)
    }

    /// `self += c * m * other`.
    pub fn add_scaled(&mut self, c: &S, m: &Monomial, other: &Poly<S>) {
        for (n, d) in &other.terms {
            self.add_term(m.mul(n), c.clone() * d.clone());
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d.clone() * c.clone())).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &S) -> Self {
        let mut out = Self::zero(self.nvars);
        out.add_scaled(c, m, self);
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative in variable `k`.
    pub fn partial(&self, k: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[k];
            if e == 0 {
                continue;
            }
            let mut n = m.clone();
            n.0[k] -= 1;
            out.add_term(n, c.clone() * S::from_i64(e as i64));
        }
        out
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Poly<T> {
        Poly::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Renames variables through `perm[old] = new` into `nvars` variables.
    pub fn permute_vars(&self, perm: &[usize], nvars: usize) -> Self {
        Self::from_terms(
            nvars,
            self.terms.iter().map(|(m, c)| {
                let mut e = vec![0; nvars];
                for (old, &x) in m.0.iter().enumerate() {
                    e[perm[old]] += x;
                }
                (Monomial(e), c.clone())
            }),
        )
    }

    /// Substitutes polynomials for the variables.
    pub fn substitute(&self, images: &[Poly<S>]) -> Poly<S> {
        let nvars = images.first().map_or(0, Poly::nvars);
        let mut out = Poly::zero(nvars);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(nvars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &images[i].pow(e);
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Human-readable form, highest terms first under graded lex.
    pub fn format(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| MonomialOrder::Grlex.cmp(b.0, a.0));
        let mut out = String::new();
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let cs = c.to_string();
            let (neg, body) = match (c.is_compound(), cs.strip_prefix('-')) {
                (false, Some(rest)) => (true, rest.to_string()),
                _ => (false, cs),
            };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let body = if c.is_compound() { format!("({body})") } else { body };
            if m.is_one() {
                out.push_str(&body);
            } else if body == "1" {
                out.push_str(&m.format(names));
            } else {
                let _ = write!(out, "{body}*{}", m.format(names));
            }
        }
        out
    }
}

impl<S: Scalar> Add for &Poly<S> {
    type Output = Poly<S>;
    fn add(self, rhs: &Poly<S>) -> Poly<S> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<S: Scalar> Sub for &Poly<S> {
    type Output = Poly<S>;
    fn sub(self, rhs: &Poly<S>) -> Poly<S> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<S: Scalar> Mul for &Poly<S> {
    type Output = Poly<S>;
    fn mul(self, rhs: &Poly<S>) -> Poly<S> {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_scaled(c, m, rhs);
        }
        out
    }
}

impl<S: Scalar> Neg for &Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Poly<S> {
        self.scale(&-S::one())
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl<S: Scalar> $tr for Poly<S> {
            type Output = Poly<S>;
            fn $f(self, rhs: Poly<S>) -> Poly<S> {
                (&self).$f(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl<S: Scalar> Neg for Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Poly<S> {
        -(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type P = Poly<Rational>;

    fn names() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn zero_has_no_terms() {
        let z = P::zero(2);
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
        assert!(z.leading_term(MonomialOrder::Grlex).is_none());
        assert_eq!(z.format(&names()), "0");
        let x = P::var(2, 0);
        assert!((&x - &x).is_zero());
    }

    #[test]
    fn arithmetic_and_format() {
        let x = P::var(2, 0);
        let y = P::var(2, 1);
        let p = &(&x + &y) * &(&x - &y);
        assert_eq!(p.format(&names()), "x^2 - y^2");
        assert_eq!(p.partial(0).format(&names()), "2*x");
        assert_eq!((&x + &P::one(2)).pow(2).format(&names()), "x^2 + 2*x + 1");
    }

    #[test]
    fn grlex_leading_term() {
        let x = P::var(2, 0);
        let y = P::var(2, 1);
        let p = &x + &y.pow(2);
        let (m, _) = p.leading_term(MonomialOrder::Grlex).unwrap();
        assert_eq!(m, &Monomial(vec![0, 2]));
        let (m, _) = p.leading_term(MonomialOrder::Lex).unwrap();
        assert_eq!(m, &Monomial(vec![1, 0]));
    }

    #[test]
    fn monomials_of_degree() {
        assert_eq!(Monomial::all_of_degree(3, 2).len(), 6);
        assert_eq!(Monomial::all_of_degree(0, 0).len(), 1);
        assert_eq!(Monomial::all_of_degree(0, 1).len(), 0);
    }
}
