//! Finitely presented commutative algebras `k[x_1..x_n] / (relations)` with
//! canonical normal forms.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parse::parse_poly;
use crate::poly::{Monomial, MonomialOrder, Poly};
use crate::scalar::Scalar;

/// `lead -> tail`: occurrences of `lead` are replaced by `tail`, whose terms
/// are all smaller than `lead` in the algebra's term order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule<S> {
    pub lead: Monomial,
    pub tail: Poly<S>,
}

impl<S: Scalar> RewriteRule<S> {
    /// `lead - tail`, the relation this rule encodes.
    pub fn as_poly(&self) -> Poly<S> {
        let mut p = -&self.tail;
        p.add_term(self.lead.clone(), S::one());
        p
    }
}

/// Limits for critical-pair completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CompletionBound {
    pub max_degree: u32,
    pub max_rules: usize,
}

impl Default for CompletionBound {
    fn default() -> Self {
        Self { max_degree: 12, max_rules: 64 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuotientAlgebra<S> {
    vars: Vec<String>,
    order: MonomialOrder,
    relations: Vec<Poly<S>>,
    rules: Vec<RewriteRule<S>>,
}

/// Reduces `p` against `rules` until no rule lead divides any term.
fn reduce<S: Scalar>(p: &Poly<S>, rules: &[RewriteRule<S>], order: MonomialOrder) -> Poly<S> {
    if rules.is_empty() {
        return p.clone();
    }
    let mut work = p.clone();
    let mut out = Poly::zero(p.nvars());
    while let Some((m, c)) = work.leading_term(order).map(|(m, c)| (m.clone(), c.clone())) {
        work.remove_term(&m);
        match rules.iter().find(|r| r.lead.divides(&m)) {
            Some(rule) => {
                let q = rule.lead.quotient_of(&m);
                work.add_scaled(&c, &q, &rule.tail);
            }
            None => out.add_term(m, c),
        }
    }
    out
}

fn monic<S: Scalar>(p: &Poly<S>, order: MonomialOrder) -> Option<RewriteRule<S>> {
    let (lead, lc) = p.leading_term(order)?;
    let lead = lead.clone();
    let inv = lc.inv();
    let mut tail = -&p.scale(&inv);
    tail.add_term(lead.clone(), S::one());
    Some(RewriteRule { lead, tail })
}

/// Critical-pair completion of `relations` into a confluent rewrite system.
///
/// Fails with an explicit report when an S-polynomial beyond
/// `bound.max_degree` is needed or the rule count exceeds `bound.max_rules`.
pub fn complete_relations<S: Scalar>(
    relations: &[Poly<S>],
    order: MonomialOrder,
    bound: CompletionBound,
) -> Result<Vec<RewriteRule<S>>> {
    let mut basis: Vec<RewriteRule<S>> = Vec::new();
    for r in relations {
        let red = reduce(r, &basis, order);
        if let Some(rule) = monic(&red, order) {
            if rule.lead.is_one() {
                return Err(Error::Completion("relations generate the unit ideal".into()));
            }
            basis.push(rule);
        }
    }
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.insert((i, j));
        }
    }
    while let Some(&(i, j)) = pairs.iter().next() {
        pairs.remove(&(i, j));
        let (a, b) = (&basis[i], &basis[j]);
        if a.lead.coprime(&b.lead) {
            continue;
        }
        let l = a.lead.lcm(&b.lead);
        if l.degree() > bound.max_degree {
            return Err(Error::Completion(format!(
                "critical pair ({i}, {j}) at degree {} exceeds the degree bound {}",
                l.degree(),
                bound.max_degree
            )));
        }
        // S-polynomial of lead - tail pairs: (l/la)·tail_a - (l/lb)·tail_b
        let one = S::one();
        let mut s = a.tail.mul_monomial(&a.lead.quotient_of(&l), &one);
        s.add_scaled(&-S::one(), &b.lead.quotient_of(&l), &b.tail);
        let red = reduce(&s, &basis, order);
        if let Some(rule) = monic(&red, order) {
            if rule.lead.is_one() {
                return Err(Error::Completion("relations generate the unit ideal".into()));
            }
            if basis.len() >= bound.max_rules {
                return Err(Error::Completion(format!(
                    "rule count exceeds the size bound {}",
                    bound.max_rules
                )));
            }
            let k = basis.len();
            basis.push(rule);
            for i in 0..k {
                pairs.insert((i, k));
            }
        }
    }
    Ok(interreduce(basis, order))
}

fn interreduce<S: Scalar>(mut basis: Vec<RewriteRule<S>>, order: MonomialOrder) -> Vec<RewriteRule<S>> {
    // drop rules whose lead is divisible by another lead
    let mut keep: Vec<RewriteRule<S>> = Vec::new();
    basis.sort_by(|a, b| order.cmp(&a.lead, &b.lead));
    for r in basis {
        if !keep.iter().any(|k| k.lead.divides(&r.lead)) {
            keep.push(r);
        }
    }
    let mut out = keep.clone();
    for k in 0..out.len() {
        let others: Vec<_> = keep.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, r)| r.clone()).collect();
        out[k].tail = reduce(&keep[k].tail, &others, order);
    }
    out
}

impl<S: Scalar> QuotientAlgebra<S> {
    /// The polynomial ring on `vars`, variable 0 largest.
    pub fn polynomial_ring(vars: Vec<String>) -> Self {
        Self { vars, order: MonomialOrder::Grlex, relations: Vec::new(), rules: Vec::new() }
    }

    /// Builds the quotient by `relations`, completing them within `bound`.
    pub fn new(
        vars: Vec<String>,
        order: MonomialOrder,
        relations: Vec<Poly<S>>,
        bound: CompletionBound,
    ) -> Result<Self> {
        let mut seen = HashSet::new();
        for v in &vars {
            if v == "i" {
                return Err(Error::Description("`i` is reserved for the imaginary unit".into()));
            }
            if !seen.insert(v) {
                return Err(Error::Description(format!("duplicate variable `{v}`")));
            }
        }
        let rules = complete_relations(&relations, order, bound)?;
        Ok(Self { vars, order, relations, rules })
    }

    /// Parses relation strings over `vars`.
    pub fn parse(vars: &[&str], relations: &[&str]) -> Result<Self> {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let rels = relations.iter().map(|r| parse_poly(r, &vars)).collect::<Result<Vec<_>>>()?;
        Self::new(vars, MonomialOrder::Grlex, rels, CompletionBound::default())
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn relations(&self) -> &[Poly<S>] {
        &self.relations
    }

    pub fn rules(&self) -> &[RewriteRule<S>] {
        &self.rules
    }

    pub fn has_relations(&self) -> bool {
        !self.rules.is_empty()
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn var(&self, i: usize) -> Poly<S> {
        Poly::var(self.nvars(), i)
    }

    pub fn zero(&self) -> Poly<S> {
        Poly::zero(self.nvars())
    }

    pub fn one(&self) -> Poly<S> {
        Poly::one(self.nvars())
    }

    pub fn constant(&self, c: S) -> Poly<S> {
        Poly::constant(self.nvars(), c)
    }

    /// Parses and normalizes an element.
    pub fn parse_elem(&self, s: &str) -> Result<Poly<S>> {
        Ok(self.normal_form(&parse_poly(s, &self.vars)?))
    }

    pub fn normal_form(&self, p: &Poly<S>) -> Poly<S> {
        debug_assert_eq!(p.nvars(), self.nvars());
        reduce(p, &self.rules, self.order)
    }

    /// Checked variant: rejects polynomials in the wrong number of variables.
    pub fn try_normal_form(&self, p: &Poly<S>) -> Result<Poly<S>> {
        if p.nvars() != self.nvars() {
            return Err(Error::Description(format!(
                "polynomial in {} variables used in an algebra with {}",
                p.nvars(),
                self.nvars()
            )));
        }
        Ok(self.normal_form(p))
    }

    pub fn mul(&self, a: &Poly<S>, b: &Poly<S>) -> Poly<S> {
        self.normal_form(&(a * b))
    }

    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.rules.iter().any(|r| r.lead.divides(m))
    }

    /// Normal-form monomials of total degree exactly `degree`.
    pub fn standard_monomials(&self, degree: u32) -> Vec<Monomial> {
        Monomial::all_of_degree(self.nvars(), degree)
            .into_iter()
            .filter(|m| self.is_standard(m))
            .collect()
    }

    /// Normal-form monomials of total degree at most `degree`, by degree.
    pub fn standard_monomials_upto(&self, degree: u32) -> Vec<Monomial> {
        (0..=degree).flat_map(|d| self.standard_monomials(d)).collect()
    }

    /// True when every relation is homogeneous, so the algebra is graded by
    /// total degree and normal forms preserve degree.
    pub fn is_graded(&self) -> bool {
        self.rules.iter().all(|r| r.as_poly().is_homogeneous())
    }

    pub fn format(&self, p: &Poly<S>) -> String {
        p.format(&self.vars)
    }

    /// The same algebra with coefficients mapped into another field.
    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> QuotientAlgebra<T> {
        QuotientAlgebra {
            vars: self.vars.clone(),
            order: self.order,
            relations: self.relations.iter().map(|p| p.map_coeffs(f)).collect(),
            rules: self
                .rules
                .iter()
                .map(|r| RewriteRule { lead: r.lead.clone(), tail: r.tail.map_coeffs(f) })
                .collect(),
        }
    }
}
