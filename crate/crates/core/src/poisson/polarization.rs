//! Involutivity of a submodule of differentials, as for polarizations.

use std::collections::HashMap;

use crate::linalg::{Echelon, SparseVec};
use crate::poly::{Monomial, Poly};
use crate::report::{Check, Report};
use crate::scalar::Scalar;

use super::differentials::DifferentialsModule;
use super::{FormalDifferential, PoissonAlgebra};

/// Whether `v` lies in the submodule generated by `gens` and the relation
/// differentials, searching combinations whose coefficient degree is at most
/// `deg(v) + extra`. Exact for homogeneous data over a graded algebra; for
/// other inputs a positive answer is a proof and a negative one is bounded.
pub fn submodule_contains<S: Scalar>(
    module: &DifferentialsModule<S>,
    gens: &[FormalDifferential<S>],
    v: &FormalDifferential<S>,
    extra: u32,
) -> bool {
    let p = module.poisson();
    let alg = p.base();
    let v = v.normalize(alg);
    if v.is_zero() {
        return true;
    }
    let bound = v.degree().unwrap_or(0) + extra;
    let mut spanning: Vec<FormalDifferential<S>> = gens.to_vec();
    spanning.extend(alg.relations().iter().map(|r| p.differential(r)));
    let mut columns: HashMap<(usize, Monomial), usize> = HashMap::new();
    let mut vectorize = |w: &FormalDifferential<S>| {
        let mut out = SparseVec::new();
        for (i, a) in w.coeffs() {
            for (m, c) in a.terms() {
                let next = columns.len();
                out.insert(*columns.entry((i, m.clone())).or_insert(next), c.clone());
            }
        }
        out
    };
    let mut ech = Echelon::new();
    for g in spanning.iter().filter(|g| !g.is_zero()) {
        let dg = g.degree().unwrap_or(0);
        if dg > bound {
            continue;
        }
        for m in alg.standard_monomials_upto(bound - dg) {
            let _ = ech.insert(vectorize(&g.scale(&Poly::term(m, S::one()), alg)));
        }
    }
    ech.contains(&vectorize(&v))
}

/// Checks that the submodule generated by `gens` is closed under the bracket
/// of differentials, on products `a·g` with monomials `a` of degree at most
/// `deg_bound`.
pub fn check_polarization<S: Scalar>(
    p: &PoissonAlgebra<S>,
    gens: &[FormalDifferential<S>],
    deg_bound: u32,
) -> Report {
    let alg = p.base();
    let mut report = Report::new("polarization involutivity");
    let module = match DifferentialsModule::new(p) {
        Ok(m) => m,
        Err(e) => {
            report.push(Check::fail("anchor kills the differentials of the relations", e.to_string()));
            return report;
        }
    };
    let homogeneous = alg.is_graded()
        && gens.iter().all(|g| g.coeffs().all(|(_, a)| a.is_homogeneous()))
        && gens.iter().all(|g| g.coeffs().map(|(_, a)| a.degree()).collect::<std::collections::BTreeSet<_>>().len() <= 1);
    let extra = gens.iter().filter_map(FormalDifferential::degree).max().unwrap_or(0);
    if !homogeneous {
        report.note(format!(
            "generators are not homogeneous: membership searched up to coefficient degree deg + {extra}"
        ));
    }
    let monos: Vec<Poly<S>> =
        alg.standard_monomials_upto(deg_bound).into_iter().map(|m| Poly::term(m, S::one())).collect();
    let mut failure = None;
    let mut count = 0;
    'outer: for (i, gi) in gens.iter().enumerate() {
        for gj in gens.iter().skip(i) {
            for a in &monos {
                for b in monos.iter().filter(|b| a.degree().unwrap_or(0) + b.degree().unwrap_or(0) <= deg_bound) {
                    count += 1;
                    let (x, y) = (gi.scale(a, alg), gj.scale(b, alg));
                    let v = module.bracket(&x, &y);
                    if !submodule_contains(&module, gens, &v, extra) {
                        failure = Some(format!("[{}, {}] = {}", module.format(&x), module.format(&y), module.format(&v)));
                        break 'outer;
                    }
                }
            }
        }
    }
    report.check(format!("generated submodule is closed under the bracket ({count} cases)"), failure.is_none(), || {
        failure.clone().unwrap_or_default()
    });
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Gaussian, Rational};
    use crate::quotient::QuotientAlgebra;
    use std::sync::Arc;

    #[test]
    fn holomorphic_polarization() {
        let base = Arc::new(QuotientAlgebra::<Gaussian>::parse(&["z", "zb"], &[]).unwrap());
        let p = PoissonAlgebra::parse(base, &[("z", "zb", "-2*i")]).unwrap();
        let rep = check_polarization(&p, &[p.generator_differential(0)], 2);
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn nonintegrable_span_fails() {
        // sl2*: {h, e} = 2e, {h, f} = -2f, {e, f} = h; the span of de, df is not involutive
        let base = Arc::new(QuotientAlgebra::<Rational>::parse(&["h", "e", "f"], &[]).unwrap());
        let p = PoissonAlgebra::parse(base, &[("h", "e", "2*e"), ("h", "f", "-2*f"), ("e", "f", "h")]).unwrap();
        let ok = check_polarization(&p, &[p.generator_differential(1)], 1);
        assert!(ok.passed(), "{ok}");
        let bad = check_polarization(&p, &[p.generator_differential(1), p.generator_differential(2)], 1);
        assert!(!bad.passed());
    }
}
