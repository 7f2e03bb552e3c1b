//! Prequantum modules on the trivial line bundle and the quantization
//! operators they induce.
//!
//! Convention: `∇_X = X + i·θ(X)` for a potential `θ = Σ θ_j dx_j`, so that
//! `χ(a, ω) = π♯ω + i·(a + θ(π♯ω))`. With `{q, p} = 1` the potential
//! `θ = p dq` satisfies the Dirac condition; `-p dq` does not.

mod costratified;

pub use costratified::{verify_costratified, CostratifiedSpace, OperatorFamily};

use crate::derivation::Derivation;
use crate::poisson::{extension_bracket, iota, ExtensionElement, FormalDifferential, PoissonAlgebra};
use crate::poly::Poly;
use crate::quotient::QuotientAlgebra;
use crate::report::Report;
use crate::scalar::{ComplexScalar, Scalar};

/// First-order operator `h ↦ D(h) + m·h` on the algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operator<S> {
    pub derivation: Derivation<S>,
    pub multiplier: Poly<S>,
}

impl<S: Scalar> Operator<S> {
    pub fn identity(alg: &QuotientAlgebra<S>) -> Self {
        Self::multiplication(alg.one(), alg)
    }

    pub fn multiplication(m: Poly<S>, alg: &QuotientAlgebra<S>) -> Self {
        Self { derivation: Derivation::zero(alg), multiplier: alg.normal_form(&m) }
    }

    pub fn apply(&self, h: &Poly<S>, alg: &QuotientAlgebra<S>) -> Poly<S> {
        let d = self.derivation.apply(h, alg);
        alg.normal_form(&(&d + &(&self.multiplier * h)))
    }

    pub fn scale_scalar(&self, c: &S) -> Self {
        Self { derivation: self.derivation.scale_scalar(c), multiplier: self.multiplier.scale(c) }
    }

    /// `[D1 + m1, D2 + m2] = [D1, D2] + D1(m2) - D2(m1)`.
    pub fn commutator(&self, other: &Self, alg: &QuotientAlgebra<S>) -> Self {
        let m = &self.derivation.apply(&other.multiplier, alg) - &other.derivation.apply(&self.multiplier, alg);
        Self { derivation: self.derivation.commutator(&other.derivation, alg), multiplier: alg.normal_form(&m) }
    }

    pub fn format(&self, alg: &QuotientAlgebra<S>) -> String {
        format!("{} + ({})", self.derivation.format(alg), alg.format(&self.multiplier))
    }
}

#[derive(Clone, Debug)]
pub struct PrequantumModule<S> {
    poisson: PoissonAlgebra<S>,
    theta: FormalDifferential<S>,
}

impl<S: ComplexScalar> PrequantumModule<S> {
    pub fn new(poisson: PoissonAlgebra<S>, theta: FormalDifferential<S>) -> Self {
        let theta = theta.normalize(poisson.base());
        Self { poisson, theta }
    }

    pub fn poisson(&self) -> &PoissonAlgebra<S> {
        &self.poisson
    }

    pub fn theta(&self) -> &FormalDifferential<S> {
        &self.theta
    }

    fn alg(&self) -> &QuotientAlgebra<S> {
        self.poisson.base()
    }

    /// `θ(X) = Σ θ_j X(x_j)`.
    pub fn theta_pairing(&self, x: &Derivation<S>) -> Poly<S> {
        let mut out = self.alg().zero();
        for (j, t) in self.theta.coeffs() {
            out = &out + &(t * x.image(j));
        }
        self.alg().normal_form(&out)
    }

    /// `χ(a, ω) = π♯ω + i·(a + θ(π♯ω))`.
    pub fn chi(&self, e: &ExtensionElement<S>) -> Operator<S> {
        let x = self.poisson.sharp(&e.form);
        let m = (&e.function + &self.theta_pairing(&x)).scale(&S::i());
        Operator { derivation: x, multiplier: self.alg().normal_form(&m) }
    }

    /// `f̂ = (1/i)·χ(0, df) + f`.
    pub fn quantize(&self, f: &Poly<S>) -> Operator<S> {
        let n = self.alg().nvars();
        let chi = self.chi(&ExtensionElement::form(n, self.poisson.differential(f)));
        let minus_i = -S::i();
        let d = chi.derivation.scale_scalar(&minus_i);
        let m = &chi.multiplier.scale(&minus_i) + f;
        Operator { derivation: d, multiplier: self.alg().normal_form(&m) }
    }

    fn monomials(&self, deg_bound: u32) -> Vec<Poly<S>> {
        self.alg().standard_monomials_upto(deg_bound).into_iter().map(|m| Poly::term(m, S::one())).collect()
    }
}

/// Checks `i[f̂, ĝ] = ({f, g})^` on every monomial of degree `<= deg_bound`.
pub fn check_dirac<S: ComplexScalar>(
    pq: &PrequantumModule<S>,
    f: &Poly<S>,
    g: &Poly<S>,
    deg_bound: u32,
) -> Report {
    let alg = pq.alg();
    let (fh, gh) = (pq.quantize(f), pq.quantize(g));
    let rhs_op = pq.quantize(&pq.poisson().bracket(f, g));
    let i = S::i();
    let mut report = Report::new(format!("Dirac condition for ({}, {})", alg.format(f), alg.format(g)));
    let mut witness = None;
    let tests = pq.monomials(deg_bound);
    for h in &tests {
        let comm = &fh.apply(&gh.apply(h, alg), alg) - &gh.apply(&fh.apply(h, alg), alg);
        let lhs = alg.normal_form(&comm.scale(&i));
        let rhs = rhs_op.apply(h, alg);
        if lhs != rhs {
            witness = Some(format!(
                "on {}: i[f^, g^] gives {} but {{f, g}}^ gives {}",
                alg.format(h),
                alg.format(&lhs),
                alg.format(&rhs)
            ));
            break;
        }
    }
    report.check(
        format!("i[f^, g^] = {{f, g}}^ on {} monomials of degree <= {deg_bound}", tests.len()),
        witness.is_none(),
        || witness.clone().unwrap_or_default(),
    );
    report
}

/// Checks the prequantum module axioms: `χ` is a Lie morphism on extension
/// elements built from generators, `χ(a, 0) = i·a`, `χ` is A-linear with
/// `[χ(e), b] = π♯ω(b)`, and `a ↦ â = -i·χ(ι(a))` satisfies the Dirac
/// condition on generator pairs.
pub fn verify_prequantum<S: ComplexScalar>(pq: &PrequantumModule<S>, deg_bound: u32) -> Report {
    let p = pq.poisson();
    let alg = pq.alg();
    let n = alg.nvars();
    let i = S::i();
    let mut report = Report::new("prequantum module");
    report.note("connection convention: chi(a, w) = anchor(w) + i*(a + theta(anchor(w)))");
    let tests = pq.monomials(deg_bound);
    let small = pq.monomials(deg_bound.min(2));

    let mut gens: Vec<ExtensionElement<S>> = vec![ExtensionElement::function(alg.one())];
    gens.extend((0..n).map(|j| ExtensionElement::function(alg.var(j))));
    gens.extend((0..n).map(|j| ExtensionElement::form(n, p.generator_differential(j))));
    gens.extend((0..n).map(|j| iota(p, &alg.var(j))));
    let fmt = |e: &ExtensionElement<S>| e.format(p);

    let mut scalar = None;
    for a in &small {
        let chi = pq.chi(&ExtensionElement::function(a.clone()));
        if chi != Operator::multiplication(a.scale(&i), alg) && scalar.is_none() {
            scalar = Some(format!("chi({}, 0) = {}", alg.format(a), chi.format(alg)));
        }
    }
    report.check("chi(a, 0) = i a Id", scalar.is_none(), || scalar.clone().unwrap_or_default());

    let mut morph = None;
    let mut count = 0;
    'outer: for (k, e1) in gens.iter().enumerate() {
        for e2 in gens.iter().skip(k + 1) {
            let lhs = pq.chi(&extension_bracket(p, e1, e2));
            let rhs = pq.chi(e1).commutator(&pq.chi(e2), alg);
            for h in &tests {
                count += 1;
                let (l, r) = (lhs.apply(h, alg), rhs.apply(h, alg));
                if l != r {
                    morph = Some(format!(
                        "e1 = {}, e2 = {}, on {}: chi([e1, e2]) gives {} but [chi e1, chi e2] gives {}",
                        fmt(e1),
                        fmt(e2),
                        alg.format(h),
                        alg.format(&l),
                        alg.format(&r)
                    ));
                    break 'outer;
                }
            }
        }
    }
    report.check(format!("chi is a Lie morphism ({count} evaluations)"), morph.is_none(), || {
        morph.clone().unwrap_or_default()
    });

    let mut linear = None;
    'lin: for b in &small {
        for e in &gens {
            let lhs = pq.chi(&e.scale(b, p));
            let c = pq.chi(e);
            let rhs = Operator {
                derivation: c.derivation.scale(b, alg),
                multiplier: alg.mul(b, &c.multiplier),
            };
            let anchor = p.sharp(&e.form);
            for h in &tests {
                let leib = &c.apply(&alg.mul(b, h), alg) - &alg.mul(b, &c.apply(h, alg));
                let expected = alg.mul(&anchor.apply(b, alg), h);
                if lhs.apply(h, alg) != rhs.apply(h, alg) || alg.normal_form(&leib) != expected {
                    linear = Some(format!("b = {}, e = {}, on {}", alg.format(b), fmt(e), alg.format(h)));
                    break 'lin;
                }
            }
        }
    }
    report.check("module action is A-linear with [chi(e), b] = anchor(e)(b)", linear.is_none(), || {
        linear.clone().unwrap_or_default()
    });

    let mut quant = None;
    for a in &small {
        let lhs = pq.quantize(a);
        let rhs = pq.chi(&iota(p, a)).scale_scalar(&-i.clone());
        if lhs != rhs && quant.is_none() {
            quant = Some(format!("a = {}: {} vs {}", alg.format(a), lhs.format(alg), rhs.format(alg)));
        }
    }
    report.check("a^ = -i chi(a, da)", quant.is_none(), || quant.clone().unwrap_or_default());

    let c = alg.constant(S::from_i64(3));
    let ok = pq.quantize(&c) == Operator::multiplication(c.clone(), alg);
    report.check("constants quantize to multiples of the identity", ok, || pq.quantize(&c).format(alg));

    for a in 0..n {
        for b in a + 1..n {
            report.extend(check_dirac(pq, &alg.var(a), &alg.var(b), deg_bound));
        }
    }
    report
}
