//! JSON descriptions of algebras, Lie-Rinehart algebras, Poisson algebras and
//! prequantum data.
//!
//! ```json
//! {
//!   "vars": ["r", "x1", "x2"],
//!   "relations": ["x1^2 + x2^2 - r^2"],
//!   "poisson": {"x1,x2": "2*r", "x1,r": "2*x2", "x2,r": "-2*x1"}
//! }
//! ```

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::lie_rinehart::{LElement, LieRinehartAlgebra};
use crate::parse::parse_poly;
use crate::poisson::{parse_differential, Involution, ModuleRule, PoissonAlgebra};
use crate::poly::MonomialOrder;
use crate::prequant::PrequantumModule;
use crate::quotient::{CompletionBound, QuotientAlgebra};
use crate::scalar::{Gaussian, Scalar};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    #[default]
    Rational,
    Gaussian,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Description {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub field: Field,
    pub vars: Vec<String>,
    /// Variable precedence, largest first; defaults to `vars`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub order: Vec<String>,
    #[serde(default)]
    pub monomial_order: MonomialOrder,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub completion: Option<CompletionBound>,

    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub basis: Vec<String>,
    /// `{"e1": {"x": "1"}}`: image of each variable under the anchor of `e1`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub anchor: BTreeMap<String, BTreeMap<String, String>>,
    /// `{"e1,e2": {"e1": "x"}}`: coefficients of `[e1, e2]`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bracket: BTreeMap<String, BTreeMap<String, String>>,

    /// `{"x1,x2": "2*r"}`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub poisson: BTreeMap<String, String>,
    /// `{"r*dr": "x1*dx1 + x2*dx2"}`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub module_rules: BTreeMap<String, String>,
    /// Variable map of the conjugation, e.g. `{"z": "zb", "zb": "z"}`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub involution: BTreeMap<String, String>,
    /// Connection potential, e.g. `{"dq": "p"}`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub theta: BTreeMap<String, String>,
    /// Generators of a polarization, as differentials.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub polarization: Vec<String>,
}

fn split_pair(key: &str) -> Result<(&str, &str)> {
    key.split_once(',')
        .map(|(a, b)| (a.trim(), b.trim()))
        .ok_or_else(|| Error::Description(format!("expected a pair 'a,b', got '{key}'")))
}

impl Description {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Description(e.to_string()))
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Description(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    fn ordered_vars(&self) -> Result<Vec<String>> {
        if self.order.is_empty() {
            return Ok(self.vars.clone());
        }
        let mut a = self.order.clone();
        let mut b = self.vars.clone();
        a.sort();
        b.sort();
        if a != b {
            return Err(Error::Description("\"order\" must be a permutation of \"vars\"".into()));
        }
        Ok(self.order.clone())
    }

    pub fn algebra<S: Scalar>(&self) -> Result<QuotientAlgebra<S>> {
        let vars = self.ordered_vars()?;
        let rels = self.relations.iter().map(|r| parse_poly(r, &vars)).collect::<Result<Vec<_>>>()?;
        QuotientAlgebra::new(vars, self.monomial_order, rels, self.completion.unwrap_or_default())
    }

    fn basis_index(&self, name: &str) -> Result<usize> {
        self.basis
            .iter()
            .position(|b| b == name)
            .ok_or_else(|| Error::Description(format!("unknown basis element '{name}'")))
    }

    pub fn lie_rinehart<S: Scalar>(&self) -> Result<LieRinehartAlgebra<S>> {
        let base = Arc::new(self.algebra::<S>()?);
        let mut anchor: Vec<Derivation<S>> = vec![Derivation::zero(&base); self.basis.len()];
        for (e, images) in &self.anchor {
            let i = self.basis_index(e)?;
            let mut v = vec![base.zero(); base.nvars()];
            for (x, img) in images {
                v[base.var_index(x)?] = base.parse_elem(img)?;
            }
            anchor[i] = Derivation::new(v, &base);
        }
        let mut bracket = BTreeMap::new();
        for (key, coeffs) in &self.bracket {
            let (a, b) = split_pair(key)?;
            let (i, j) = (self.basis_index(a)?, self.basis_index(b)?);
            let mut x = LElement::zero();
            for (e, c) in coeffs {
                x.add_coeff(self.basis_index(e)?, base.parse_elem(c)?);
            }
            bracket.insert((i, j), x);
        }
        LieRinehartAlgebra::new(base, self.basis.clone(), anchor, bracket)
    }

    pub fn poisson_algebra<S: Scalar>(&self) -> Result<PoissonAlgebra<S>> {
        let base = Arc::new(self.algebra::<S>()?);
        let mut brackets = BTreeMap::new();
        for (key, val) in &self.poisson {
            let (a, b) = split_pair(key)?;
            brackets.insert((base.var_index(a)?, base.var_index(b)?), base.parse_elem(val)?);
        }
        let rules = self
            .module_rules
            .iter()
            .map(|(l, r)| ModuleRule::parse(l, r, &base))
            .collect::<Result<Vec<_>>>()?;
        let mut p = PoissonAlgebra::new(base.clone(), brackets)?.with_module_rules(rules);
        if !self.involution.is_empty() {
            let mut perm: Vec<usize> = (0..base.nvars()).collect();
            for (a, b) in &self.involution {
                perm[base.var_index(a)?] = base.var_index(b)?;
            }
            p = p.with_involution(Involution::new(perm)?)?;
        }
        Ok(p)
    }

    pub fn polarization_generators<S: Scalar>(&self, p: &PoissonAlgebra<S>) -> Result<Vec<LElement<S>>> {
        self.polarization.iter().map(|g| parse_differential(g, p.base())).collect()
    }

    /// Prequantum data over the Gaussian rationals.
    pub fn prequantum(&self) -> Result<PrequantumModule<Gaussian>> {
        let p = self.poisson_algebra::<Gaussian>()?;
        let mut theta = LElement::zero();
        for (dx, coeff) in &self.theta {
            let var = dx
                .strip_prefix('d')
                .ok_or_else(|| Error::Description(format!("theta key '{dx}' must be a differential d<var>")))?;
            theta.add_coeff(p.base().var_index(var)?, p.base().parse_elem(coeff)?);
        }
        Ok(PrequantumModule::new(p, theta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    const EXOTIC: &str = r#"{
        "vars": ["r", "x1", "x2"],
        "relations": ["x1^2 + x2^2 - r^2"],
        "poisson": {"x1,x2": "2*r", "x1,r": "2*x2", "x2,r": "-2*x1"}
    }"#;

    #[test]
    fn parses_poisson() {
        let d = Description::from_json(EXOTIC).unwrap();
        let p = d.poisson_algebra::<Rational>().unwrap();
        assert!(p.verify(3).passed());
        let back = Description::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn parses_lie_rinehart() {
        let d = Description::from_json(
            r#"{"vars": ["x"], "basis": ["e"], "anchor": {"e": {"x": "x"}}, "bracket": {}}"#,
        )
        .unwrap();
        let l = d.lie_rinehart::<Rational>().unwrap();
        assert!(l.verify(3).passed());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Description::from_json(r#"{"vars": ["x"], "bogus": 1}"#).is_err());
        let d = Description::from_json(r#"{"vars": ["x", "y"], "order": ["x"]}"#).unwrap();
        assert!(d.algebra::<Rational>().is_err());
        let d = Description::from_json(r#"{"vars": ["x", "y"], "poisson": {"x;y": "1"}}"#).unwrap();
        assert!(d.poisson_algebra::<Rational>().is_err());
        let d = Description::from_json(r#"{"vars": ["x"], "relations": ["x^"]}"#).unwrap();
        assert!(matches!(d.algebra::<Rational>(), Err(Error::Parse { .. })));
    }

    #[test]
    fn order_overrides_precedence() {
        let d = Description::from_json(r#"{"vars": ["x1", "x2", "r"], "order": ["r", "x1", "x2"], "relations": ["x1^2 + x2^2 - r^2"]}"#)
            .unwrap();
        let a = d.algebra::<Rational>().unwrap();
        assert_eq!(a.vars()[0], "r");
        assert_eq!(a.format(&a.parse_elem("r^2").unwrap()), "x1^2 + x2^2");
    }

    #[test]
    fn prequantum_theta() {
        let d = Description::from_json(r#"{"vars": ["q", "p"], "poisson": {"q,p": "1"}, "theta": {"dq": "p"}}"#)
            .unwrap();
        let pq = d.prequantum().unwrap();
        assert!(crate::prequant::verify_prequantum(&pq, 3).passed());
    }
}
