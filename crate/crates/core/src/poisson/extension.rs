//! The abelian extension `A ⊕ Ω` of the differentials by the functions,
//! twisted by the Poisson cocycle.

use crate::lie_rinehart::LElement;
use crate::poly::Poly;
use crate::report::{Certification, Check, Report};
use crate::scalar::Scalar;

use super::differentials::{DifferentialsModule, Tally};
use super::{FormalDifferential, PoissonAlgebra};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionElement<S> {
    pub function: Poly<S>,
    pub form: FormalDifferential<S>,
}

impl<S: Scalar> ExtensionElement<S> {
    pub fn new(function: Poly<S>, form: FormalDifferential<S>) -> Self {
        Self { function, form }
    }

    pub fn zero(nvars: usize) -> Self {
        Self { function: Poly::zero(nvars), form: LElement::zero() }
    }

    pub fn function(a: Poly<S>) -> Self {
        Self { function: a, form: LElement::zero() }
    }

    pub fn form(nvars: usize, w: FormalDifferential<S>) -> Self {
        Self { function: Poly::zero(nvars), form: w }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { function: &self.function + &other.function, form: self.form.add(&other.form) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { function: &self.function - &other.function, form: self.form.sub(&other.form) }
    }

    pub fn scale(&self, a: &Poly<S>, p: &PoissonAlgebra<S>) -> Self {
        Self { function: p.base().mul(a, &self.function), form: self.form.scale(a, p.base()) }
    }

    pub fn format(&self, p: &PoissonAlgebra<S>) -> String {
        format!("({}, {})", p.base().format(&self.function), p.format_differential(&self.form))
    }
}

/// `ι(a) = (a, da)`.
pub fn iota<S: Scalar>(p: &PoissonAlgebra<S>, a: &Poly<S>) -> ExtensionElement<S> {
    ExtensionElement::new(p.base().normal_form(a), p.differential(a))
}

/// `[(a, ω1), (b, ω2)] = (π♯ω1(b) - π♯ω2(a) - π(ω1, ω2), [ω1, ω2])`.
pub fn extension_bracket<S: Scalar>(
    p: &PoissonAlgebra<S>,
    e1: &ExtensionElement<S>,
    e2: &ExtensionElement<S>,
) -> ExtensionElement<S> {
    let alg = p.base();
    let s1 = p.sharp(&e1.form);
    let s2 = p.sharp(&e2.form);
    let f = &(&s1.apply(&e2.function, alg) - &s2.apply(&e1.function, alg)) - &p.poisson_form(&e1.form, &e2.form);
    ExtensionElement::new(alg.normal_form(&f), super::differentials_bracket(p, &e1.form, &e2.form))
}

fn certify<S: Scalar>(
    m: &DifferentialsModule<S>,
    lhs: &ExtensionElement<S>,
    rhs: &ExtensionElement<S>,
) -> (bool, Certification) {
    let alg = m.poisson().base();
    let same_fn = alg.normal_form(&(&lhs.function - &rhs.function)).is_zero();
    let (same_form, level) = m.certify_equal(&lhs.form, &rhs.form);
    (same_fn && same_form, level)
}

/// Checks the extension bracket: antisymmetry, Jacobi, Leibniz for the
/// anchor `(a, ω) ↦ π♯ω`, centrality of the functions, and that
/// `ι(a) = (a, da)` is a Lie morphism from the Poisson algebra.
pub fn verify_extension<S: Scalar>(p: &PoissonAlgebra<S>, deg_bound: u32) -> Report {
    let alg = p.base();
    let n = alg.nvars();
    let mut report = Report::new("extension of differentials by functions");
    let module = match DifferentialsModule::new(p) {
        Ok(m) => m,
        Err(e) => {
            report.push(Check::fail("anchor kills the differentials of the relations", e.to_string()));
            return report;
        }
    };
    let monos: Vec<Poly<S>> =
        alg.standard_monomials_upto(deg_bound).into_iter().map(|m| Poly::term(m, S::one())).collect();
    let zero_form = LElement::zero;
    let dx = |i: usize| p.generator_differential(i);
    let fmt = |e: &ExtensionElement<S>| e.format(p);
    let br = |a: &ExtensionElement<S>, b: &ExtensionElement<S>| extension_bracket(p, a, b);

    // small generating set and a wider test set
    let mut basic: Vec<ExtensionElement<S>> = vec![ExtensionElement::function(alg.one())];
    basic.extend((0..n).map(|i| ExtensionElement::function(alg.var(i))));
    basic.extend((0..n).map(|i| ExtensionElement::form(n, dx(i))));
    let mut wide: Vec<ExtensionElement<S>> = monos.iter().map(|a| ExtensionElement::function(a.clone())).collect();
    for a in &monos {
        for i in 0..n {
            wide.push(ExtensionElement::form(n, dx(i).scale(a, alg)));
        }
        wide.push(iota(p, a));
    }
    for i in 0..n {
        for j in 0..n {
            wide.push(ExtensionElement::new(alg.var(j), dx(i)));
        }
    }

    let mut anti = Tally::new("antisymmetry");
    for x in &wide {
        for y in &basic {
            let s = br(x, y).add(&br(y, x));
            let zero = ExtensionElement::function(alg.zero());
            let (ok, lvl) = certify(&module, &s, &zero);
            anti.record(ok, lvl, || format!("[{0}, {1}] + [{1}, {0}] = {2}", fmt(x), fmt(y), fmt(&s)));
        }
    }
    report.push(anti.finish());

    let mut jac = Tally::new("Jacobi identity");
    for x in &wide {
        for (iy, y) in basic.iter().enumerate() {
            for z in basic.iter().skip(iy + 1) {
                let s = br(x, &br(y, z)).add(&br(y, &br(z, x))).add(&br(z, &br(x, y)));
                let zero = ExtensionElement::function(alg.zero());
                let (ok, lvl) = certify(&module, &s, &zero);
                jac.record(ok, lvl, || format!("Jacobi({}, {}, {}) = {}", fmt(x), fmt(y), fmt(z), fmt(&s)));
            }
        }
    }
    report.push(jac.finish());

    let mut leib = Tally::new("Leibniz rule for the anchor (a, w) -> anchor(w)");
    for c in &monos {
        for x in &basic {
            for y in &basic {
                let lhs = br(x, &y.scale(c, p));
                let rhs = br(x, y).scale(c, p).add(&y.scale(&module.anchor(&x.form).apply(c, alg), p));
                let (ok, lvl) = certify(&module, &lhs, &rhs);
                leib.record(ok, lvl, || {
                    format!("[{}, ({})*{}]: {} vs {}", fmt(x), alg.format(c), fmt(y), fmt(&lhs), fmt(&rhs))
                });
            }
        }
    }
    report.push(leib.finish());

    let mut central = Tally::new("functions form an abelian ideal acted on by the anchor");
    for a in &monos {
        let fa = ExtensionElement::function(a.clone());
        for y in &wide {
            let lhs = br(&fa, y);
            let rhs = ExtensionElement::new(-&module.anchor(&y.form).apply(a, alg), zero_form());
            let (ok, lvl) = certify(&module, &lhs, &rhs);
            central.record(ok, lvl, || format!("[{}, {}] = {} vs {}", fmt(&fa), fmt(y), fmt(&lhs), fmt(&rhs)));
        }
    }
    report.push(central.finish());

    let mut proj = Tally::new("projection to the differentials is a morphism");
    for x in &wide {
        for y in &basic {
            let lhs = br(x, y).form;
            let rhs = module.bracket(&x.form, &y.form);
            let (ok, lvl) = module.certify_equal(&lhs, &rhs);
            proj.record(ok, lvl, || format!("[{}, {}]", fmt(x), fmt(y)));
        }
    }
    report.push(proj.finish());

    let mut morph = Tally::new("a -> (a, da) is a Lie morphism");
    for a in &monos {
        for b in &monos {
            let lhs = br(&iota(p, a), &iota(p, b));
            let rhs = iota(p, &p.bracket(a, b));
            let (ok, lvl) = certify(&module, &lhs, &rhs);
            morph.record(ok, lvl, || {
                format!("a = {}, b = {}: {} vs {}", alg.format(a), alg.format(b), fmt(&lhs), fmt(&rhs))
            });
        }
    }
    report.push(morph.finish());

    // on exact forms: [(a, du), (b, dv)] = ({u, b} - {v, a} - {u, v}, d{u, v})
    let mut exact = Tally::new("bracket on exact forms");
    let small: Vec<&Poly<S>> = monos.iter().filter(|m| m.degree().unwrap_or(0) <= 1).collect();
    for u in &small {
        for v in &small {
            for a in &small {
                for b in &small {
                    let lhs = br(
                        &ExtensionElement::new((*a).clone(), p.differential(u)),
                        &ExtensionElement::new((*b).clone(), p.differential(v)),
                    );
                    let f = &(&p.bracket(u, b) - &p.bracket(v, a)) - &p.bracket(u, v);
                    let rhs = ExtensionElement::new(f, p.differential(&p.bracket(u, v)));
                    let (ok, lvl) = certify(&module, &lhs, &rhs);
                    exact.record(ok, lvl, || format!("{} vs {}", fmt(&lhs), fmt(&rhs)));
                }
            }
        }
    }
    report.push(exact.finish());
    report
}
