//! Poisson algebras given by brackets of generators, their Hamiltonian
//! vector fields, and the Lie-Rinehart structure on formal differentials.

mod differentials;
mod extension;
mod polarization;

pub use differentials::{differentials_bracket, verify_differentials, DifferentialsModule, ModuleRule, ZeroTest};
pub use differentials::parse_differential;
pub use extension::{extension_bracket, iota, verify_extension, ExtensionElement};
pub use polarization::{check_polarization, submodule_contains};

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::lie_rinehart::{LElement, LieRinehartAlgebra};
use crate::poly::Poly;
use crate::quotient::QuotientAlgebra;
use crate::report::{Check, Report};
use crate::scalar::Scalar;

/// Element `Σ a_i dx_i` of the module of formal differentials, represented
/// on the generator differentials. Equality in the module is modulo the
/// submodule generated by the differentials of the relations.
pub type FormalDifferential<S> = LElement<S>;

/// Complex conjugation on the algebra: a variable involution combined with
/// conjugation of coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Involution {
    perm: Vec<usize>,
}

impl Involution {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        if perm.iter().any(|&p| p >= n) || (0..n).any(|i| perm[perm[i]] != i) {
            return Err(Error::Description("conjugation map is not an involution of the variables".into()));
        }
        Ok(Self { perm })
    }

    pub fn image(&self, i: usize) -> usize {
        self.perm[i]
    }

    pub fn apply<S: Scalar>(&self, p: &Poly<S>, algebra: &QuotientAlgebra<S>) -> Poly<S> {
        algebra.normal_form(&p.permute_vars(&self.perm, p.nvars()).map_coeffs(S::conj))
    }
}

#[derive(Clone, Debug)]
pub struct PoissonAlgebra<S> {
    base: Arc<QuotientAlgebra<S>>,
    /// `table[i][j] = {x_i, x_j}`, antisymmetric.
    table: Vec<Vec<Poly<S>>>,
    involution: Option<Involution>,
    module_rules: Vec<ModuleRule<S>>,
}

impl<S: Scalar> PoissonAlgebra<S> {
    /// `brackets` lists `{x_i, x_j}`; pairs may be given in either order,
    /// missing pairs bracket to zero.
    pub fn new(base: Arc<QuotientAlgebra<S>>, brackets: BTreeMap<(usize, usize), Poly<S>>) -> Result<Self> {
        let n = base.nvars();
        let mut table = vec![vec![base.zero(); n]; n];
        for ((i, j), v) in brackets {
            if i >= n || j >= n {
                return Err(Error::Description(format!("bracket index ({i}, {j}) out of range")));
            }
            let v = base.normal_form(&v);
            if i == j {
                if !v.is_zero() {
                    return Err(Error::Structure(format!("{{{0}, {0}}} must vanish", base.vars()[i])));
                }
                continue;
            }
            table[j][i] = -&v;
            table[i][j] = v;
        }
        Ok(Self { base, table, involution: None, module_rules: Vec::new() })
    }

    /// Parses `{"x1,x2": "2*r", ...}`-style entries.
    pub fn parse(base: Arc<QuotientAlgebra<S>>, entries: &[(&str, &str, &str)]) -> Result<Self> {
        let mut brackets = BTreeMap::new();
        for (u, v, val) in entries {
            let (i, j) = (base.var_index(u)?, base.var_index(v)?);
            brackets.insert((i, j), base.parse_elem(val)?);
        }
        Self::new(base, brackets)
    }

    pub fn with_involution(mut self, inv: Involution) -> Result<Self> {
        if inv.perm.len() != self.base.nvars() {
            return Err(Error::Description("conjugation map has the wrong number of variables".into()));
        }
        self.involution = Some(inv);
        Ok(self)
    }

    pub fn with_module_rules(mut self, rules: Vec<ModuleRule<S>>) -> Self {
        self.module_rules = rules;
        self
    }

    /// Extends scalars, e.g. from the rationals to the Gaussian rationals.
    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> PoissonAlgebra<T> {
        let map_elem = |w: &LElement<S>| LElement::from_coeffs(w.coeffs().map(|(i, a)| (i, a.map_coeffs(f))));
        PoissonAlgebra {
            base: Arc::new(self.base.map_scalars(f)),
            table: self.table.iter().map(|row| row.iter().map(|p| p.map_coeffs(f)).collect()).collect(),
            involution: self.involution.clone(),
            module_rules: self
                .module_rules
                .iter()
                .map(|r| ModuleRule { generator: r.generator, lead: r.lead.clone(), tail: map_elem(&r.tail) })
                .collect(),
        }
    }

    pub fn base(&self) -> &QuotientAlgebra<S> {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<QuotientAlgebra<S>> {
        &self.base
    }

    pub fn involution(&self) -> Option<&Involution> {
        self.involution.as_ref()
    }

    pub fn module_rules(&self) -> &[ModuleRule<S>] {
        &self.module_rules
    }

    pub fn generator_bracket(&self, i: usize, j: usize) -> &Poly<S> {
        &self.table[i][j]
    }

    /// Biderivation extension of the generator table, in normal form.
    pub fn bracket(&self, a: &Poly<S>, b: &Poly<S>) -> Poly<S> {
        let n = self.base.nvars();
        let da: Vec<Poly<S>> = (0..n).map(|i| a.partial(i)).collect();
        let db: Vec<Poly<S>> = (0..n).map(|j| b.partial(j)).collect();
        let mut out = self.base.zero();
        for i in 0..n {
            if da[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if i == j || db[j].is_zero() || self.table[i][j].is_zero() {
                    continue;
                }
                out = &out + &(&(&da[i] * &db[j]) * &self.table[i][j]);
            }
        }
        self.base.normal_form(&out)
    }

    /// `du = Σ ∂u/∂x_i dx_i`.
    pub fn differential(&self, u: &Poly<S>) -> FormalDifferential<S> {
        LElement::from_coeffs((0..self.base.nvars()).map(|i| (i, self.base.normal_form(&u.partial(i)))))
    }

    pub fn generator_differential(&self, i: usize) -> FormalDifferential<S> {
        LElement::basis(i, &self.base)
    }

    /// `X_f = {f, -}`.
    pub fn hamiltonian_field(&self, f: &Poly<S>) -> Derivation<S> {
        let images = (0..self.base.nvars()).map(|j| self.bracket(f, &self.base.var(j))).collect();
        Derivation::new(images, &self.base)
    }

    /// `π(Σ a_i dx_i, Σ b_j dx_j) = Σ a_i b_j {x_i, x_j}`.
    pub fn poisson_form(&self, w1: &FormalDifferential<S>, w2: &FormalDifferential<S>) -> Poly<S> {
        let mut out = self.base.zero();
        for (i, a) in w1.coeffs() {
            for (j, b) in w2.coeffs() {
                let t = &self.table[i][j];
                if !t.is_zero() {
                    out = &out + &(&(a * b) * t);
                }
            }
        }
        self.base.normal_form(&out)
    }

    /// Relations are compatible with the bracket: `{R, x_j} = 0` in `A`.
    pub fn relation_defects(&self) -> Vec<(usize, usize, Poly<S>)> {
        let mut out = Vec::new();
        for (r, rel) in self.base.relations().iter().enumerate() {
            for j in 0..self.base.nvars() {
                let v = self.bracket(rel, &self.base.var(j));
                if !v.is_zero() {
                    out.push((r, j, v));
                }
            }
        }
        out
    }

    /// `π♯(Σ a_i dx_i)`: the derivation `x_j ↦ Σ a_i {x_i, x_j}`.
    pub fn anchor_sharp(&self, w: &FormalDifferential<S>) -> Result<Derivation<S>> {
        if let Some((r, j, v)) = self.relation_defects().into_iter().next() {
            return Err(Error::Structure(format!(
                "relation differential d({}) is not killed by the anchor: {{R, {}}} = {}",
                self.base.format(&self.base.relations()[r]),
                self.base.vars()[j],
                self.base.format(&v)
            )));
        }
        Ok(self.sharp(w))
    }

    /// `π♯ω` without checking compatibility with the relations.
    pub fn sharp(&self, w: &FormalDifferential<S>) -> Derivation<S> {
        let n = self.base.nvars();
        let images = (0..n)
            .map(|j| {
                let mut acc = self.base.zero();
                for (i, a) in w.coeffs() {
                    let t = &self.table[i][j];
                    if !t.is_zero() {
                        acc = &acc + &(a * t);
                    }
                }
                acc
            })
            .collect();
        Derivation::new(images, &self.base)
    }

    /// The free module on the generator differentials with anchor `π♯` and
    /// bracket `[dx_i, dx_j] = d{x_i, x_j}`. For relation-free algebras this
    /// is the Lie-Rinehart algebra of formal differentials itself.
    pub fn cotangent(&self) -> Result<LieRinehartAlgebra<S>> {
        let n = self.base.nvars();
        let basis = self.base.vars().iter().map(|v| format!("d{v}")).collect();
        let anchor = (0..n).map(|i| self.sharp(&self.generator_differential(i))).collect();
        let mut bracket = BTreeMap::new();
        for i in 0..n {
            for j in i + 1..n {
                bracket.insert((i, j), self.differential(&self.table[i][j]));
            }
        }
        LieRinehartAlgebra::new(self.base.clone(), basis, anchor, bracket)
    }

    /// The Poisson bivector as a 2-cochain on the generator differentials.
    pub fn poisson_cochain(&self) -> crate::cohomology::AltForm<S> {
        let n = self.base.nvars();
        let mut w = crate::cohomology::AltForm::zero(2);
        for i in 0..n {
            for j in i + 1..n {
                w.set(vec![i, j], self.table[i][j].clone());
            }
        }
        w
    }

    pub fn format_differential(&self, w: &FormalDifferential<S>) -> String {
        let names: Vec<String> = self.base.vars().iter().map(|v| format!("d{v}")).collect();
        w.format(&names, &self.base)
    }

    /// Checks antisymmetry, Jacobi on generators (and on monomials of degree
    /// at most `min(deg_bound, 2)`), compatibility with the relations, and
    /// reality with respect to the conjugation when one is declared.
    pub fn verify(&self, deg_bound: u32) -> Report {
        verify_poisson(self, deg_bound)
    }
}

/// Poisson (Lichnerowicz) cohomology as the cohomology of the cotangent
/// Lie-Rinehart algebra. Refused over algebras with relations, where the free
/// cover does not compute the cohomology of the quotient.
pub fn poisson_cohomology<S: Scalar>(
    p: &PoissonAlgebra<S>,
    form_max: usize,
    window: std::ops::RangeInclusive<i64>,
) -> Result<crate::cohomology::CohomologyTable> {
    if p.base().has_relations() {
        return Err(Error::Refused(
            "Poisson cohomology is only computed for polynomial algebras without relations".into(),
        ));
    }
    crate::cohomology::cohomology_dims(&p.cotangent()?, form_max, window)
}

/// `d π = 0` for the bivector viewed as a 2-cochain on the cotangent cover;
/// equivalent to the Jacobi identity on generators.
pub fn check_pi_cocycle<S: Scalar>(p: &PoissonAlgebra<S>) -> Check {
    let name = "Poisson bivector is a 2-cocycle";
    let cover = match p.cotangent() {
        Ok(c) => c,
        Err(e) => return Check::fail(name, e.to_string()),
    };
    let d = crate::cohomology::rinehart_d(&p.poisson_cochain(), &cover);
    let alg = p.base();
    let bad = d.components().find(|(_, v)| !alg.normal_form(v).is_zero()).map(|(t, v)| (t.clone(), v.clone()));
    match bad {
        None => Check::pass(name),
        Some((t, v)) => Check::fail(name, format!("(d pi){t:?} = {}", alg.format(&v))),
    }
}

pub fn verify_poisson<S: Scalar>(p: &PoissonAlgebra<S>, deg_bound: u32) -> Report {
    let alg = p.base();
    let n = alg.nvars();
    let name = |i: usize| alg.vars()[i].clone();
    let mut report = Report::new("poisson algebra");

    let antisym = (0..n).all(|i| p.table[i][i].is_zero() && (0..n).all(|j| p.table[i][j] == -&p.table[j][i]));
    report.check("bracket table antisymmetric", antisym, || "table is not antisymmetric".into());

    let mut jac = None;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (xi, xj, xk) = (alg.var(i), alg.var(j), alg.var(k));
                let s = &(&p.bracket(&xi, &p.table[j][k]) + &p.bracket(&xj, &p.table[k][i]))
                    + &p.bracket(&xk, &p.table[i][j]);
                if !s.is_zero() && jac.is_none() {
                    jac = Some(format!("Jacobi({}, {}, {}) = {}", name(i), name(j), name(k), alg.format(&s)));
                }
            }
        }
    }
    report.check("Jacobi identity on generators", jac.is_none(), || jac.clone().unwrap_or_default());

    let defects = p.relation_defects();
    report.check("bracket compatible with relations", defects.is_empty(), || {
        let (r, j, v) = &defects[0];
        format!(
            "{{{}, {}}} = {} != 0 modulo the relations",
            alg.format(&alg.relations()[*r]),
            name(*j),
            alg.format(v)
        )
    });

    let small = deg_bound.min(2);
    let monos: Vec<Poly<S>> =
        alg.standard_monomials_upto(small).into_iter().map(|m| Poly::term(m, S::one())).collect();
    let mut jac_m = None;
    'outer: for (ia, a) in monos.iter().enumerate() {
        for (ib, b) in monos.iter().enumerate().skip(ia + 1) {
            for c in monos.iter().skip(ib + 1) {
                let s = &(&p.bracket(a, &p.bracket(b, c)) + &p.bracket(b, &p.bracket(c, a)))
                    + &p.bracket(c, &p.bracket(a, b));
                if !s.is_zero() {
                    jac_m = Some(format!(
                        "Jacobi({}, {}, {}) = {}",
                        alg.format(a),
                        alg.format(b),
                        alg.format(c),
                        alg.format(&s)
                    ));
                    break 'outer;
                }
            }
        }
    }
    report.check(format!("Jacobi identity on monomials of degree <= {small}"), jac_m.is_none(), || {
        jac_m.clone().unwrap_or_default()
    });

    if let Some(inv) = p.involution() {
        let mut bad = None;
        for i in 0..n {
            for j in 0..n {
                let lhs = inv.apply(&p.table[i][j], alg);
                let rhs = &p.table[inv.image(i)][inv.image(j)];
                if &lhs != rhs && bad.is_none() {
                    bad = Some(format!(
                        "conj{{{}, {}}} = {} but {{{}, {}}} = {}",
                        name(i),
                        name(j),
                        alg.format(&lhs),
                        name(inv.image(i)),
                        name(inv.image(j)),
                        alg.format(rhs)
                    ));
                }
            }
        }
        report.check("bracket is real for the declared conjugation", bad.is_none(), || bad.clone().unwrap_or_default());
        let closed = alg.relations().iter().all(|r| alg.normal_form(&inv.apply(r, alg)).is_zero());
        report.check("conjugation preserves the relations", closed, || "conjugate relation is nonzero".into());
    }
    report
}
