//! Costratified spaces: contravariant functors from a finite poset of strata
//! to finite-dimensional vector spaces, optionally carrying operators.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::report::{Check, Report};
use crate::scalar::{parse_rational, Rational};

/// Operators per stratum, keyed by stratum then operator name.
pub type OperatorFamily = BTreeMap<String, BTreeMap<String, Matrix<Rational>>>;

#[derive(Clone, Debug, PartialEq)]
pub struct CostratifiedSpace {
    pub strata: Vec<String>,
    /// `(lower, upper)` pairs generating the partial order.
    pub order: Vec<(String, String)>,
    pub dims: BTreeMap<String, usize>,
    /// `maps[(from, to)]` is the structure map for `to ≤ from`, a
    /// `dims[to] × dims[from]` matrix.
    pub maps: BTreeMap<(String, String), Matrix<Rational>>,
    pub operators: OperatorFamily,
}

#[derive(Serialize, Deserialize)]
struct Wire {
    strata: Vec<String>,
    order: Vec<[String; 2]>,
    dims: BTreeMap<String, usize>,
    maps: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    operators: BTreeMap<String, BTreeMap<String, Vec<Vec<String>>>>,
}

fn matrix_from_wire(rows: &[Vec<String>], what: &str) -> Result<Matrix<Rational>> {
    let cols = rows.first().map_or(0, Vec::len);
    let parsed = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|s| parse_rational(s).ok_or_else(|| Error::Description(format!("{what}: bad entry '{s}'"))))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(parsed, cols).ok_or_else(|| Error::Description(format!("{what}: ragged matrix")))
}

fn matrix_to_wire(m: &Matrix<Rational>) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}

impl CostratifiedSpace {
    pub fn from_json(text: &str) -> Result<Self> {
        let wire: Wire = serde_json::from_str(text).map_err(|e| Error::Description(e.to_string()))?;
        let mut maps = BTreeMap::new();
        for (key, rows) in &wire.maps {
            let (from, to) = key
                .split_once("->")
                .ok_or_else(|| Error::Description(format!("map key '{key}' is not of the form 'A->B'")))?;
            maps.insert((from.trim().to_string(), to.trim().to_string()), matrix_from_wire(rows, key)?);
        }
        let mut operators = OperatorFamily::new();
        for (stratum, ops) in &wire.operators {
            let entry = operators.entry(stratum.clone()).or_default();
            for (name, rows) in ops {
                entry.insert(name.clone(), matrix_from_wire(rows, name)?);
            }
        }
        let space = Self {
            strata: wire.strata,
            order: wire.order.into_iter().map(|[a, b]| (a, b)).collect(),
            dims: wire.dims,
            maps,
            operators,
        };
        space.check_labels()?;
        Ok(space)
    }

    pub fn to_json(&self) -> String {
        let wire = Wire {
            strata: self.strata.clone(),
            order: self.order.iter().map(|(a, b)| [a.clone(), b.clone()]).collect(),
            dims: self.dims.clone(),
            maps: self.maps.iter().map(|((f, t), m)| (format!("{f}->{t}"), matrix_to_wire(m))).collect(),
            operators: self
                .operators
                .iter()
                .map(|(s, ops)| (s.clone(), ops.iter().map(|(n, m)| (n.clone(), matrix_to_wire(m))).collect()))
                .collect(),
        };
        serde_json::to_string_pretty(&wire).expect("serializable")
    }

    fn check_labels(&self) -> Result<()> {
        let known: BTreeSet<&String> = self.strata.iter().collect();
        if known.len() != self.strata.len() {
            return Err(Error::Description("duplicate stratum label".into()));
        }
        let labels = self
            .order
            .iter()
            .flat_map(|(a, b)| [a, b])
            .chain(self.maps.keys().flat_map(|(a, b)| [a, b]))
            .chain(self.dims.keys())
            .chain(self.operators.keys());
        for l in labels {
            if !known.contains(l) {
                return Err(Error::Description(format!("unknown stratum '{l}'")));
            }
        }
        for s in &self.strata {
            if !self.dims.contains_key(s) {
                return Err(Error::Description(format!("no dimension for stratum '{s}'")));
            }
        }
        Ok(())
    }

    /// Reflexive-transitive closure of the declared order, as `(lower, upper)`.
    pub fn order_closure(&self) -> BTreeSet<(String, String)> {
        let mut le: BTreeSet<(String, String)> = self.order.iter().cloned().collect();
        le.extend(self.strata.iter().map(|s| (s.clone(), s.clone())));
        loop {
            let mut added = Vec::new();
            for (a, b) in &le {
                for (c, d) in &le {
                    if b == c && !le.contains(&(a.clone(), d.clone())) {
                        added.push((a.clone(), d.clone()));
                    }
                }
            }
            if added.is_empty() {
                return le;
            }
            le.extend(added);
        }
    }

    pub fn dim(&self, stratum: &str) -> usize {
        self.dims.get(stratum).copied().unwrap_or(0)
    }
}

fn describe_difference(a: &Matrix<Rational>, b: &Matrix<Rational>) -> String {
    match a.first_difference(b) {
        Some((i, j)) if i < a.nrows() && j < a.ncols() && a.nrows() == b.nrows() && a.ncols() == b.ncols() => {
            format!("entry ({i}, {j}): {} vs {}", a.get(i, j), b.get(i, j))
        }
        _ => format!("shapes {}x{} vs {}x{}", a.nrows(), a.ncols(), b.nrows(), b.ncols()),
    }
}

/// Checks functoriality of the structure maps (identities, composition along
/// every chain `Y'' ≤ Y' ≤ Y`) and, for operator families present on both
/// ends of a map, that the map intertwines them.
pub fn verify_costratified(space: &CostratifiedSpace, extra: Option<&OperatorFamily>) -> Report {
    let mut report = Report::new("costratified space");
    if let Err(e) = space.check_labels() {
        report.push(Check::fail("labels are consistent", e.to_string()));
        return report;
    }
    let le = space.order_closure();
    let antisym = le.iter().find(|(a, b)| a != b && le.contains(&(b.clone(), a.clone())));
    report.check("order is a partial order", antisym.is_none(), || {
        let (a, b) = antisym.unwrap();
        format!("{a} <= {b} and {b} <= {a}")
    });
    if antisym.is_some() {
        return report;
    }

    let mut shape_err = None;
    for ((from, to), m) in &space.maps {
        if !le.contains(&(to.clone(), from.clone())) && shape_err.is_none() {
            shape_err = Some(format!("map {from}->{to} but {to} is not below {from}"));
        }
        if (m.nrows(), m.ncols()) != (space.dim(to), space.dim(from)) && shape_err.is_none() {
            shape_err = Some(format!(
                "map {from}->{to} is {}x{}, expected {}x{}",
                m.nrows(),
                m.ncols(),
                space.dim(to),
                space.dim(from)
            ));
        }
    }
    report.check("structure maps have the right shapes", shape_err.is_none(), || shape_err.clone().unwrap_or_default());
    if shape_err.is_some() {
        return report;
    }

    let mut ident = None;
    for s in &space.strata {
        if let Some(m) = space.maps.get(&(s.clone(), s.clone())) {
            let id = Matrix::identity(space.dim(s));
            if m != &id && ident.is_none() {
                ident = Some(format!("map {s}->{s}: {}", describe_difference(m, &id)));
            }
        }
    }
    report.check("maps on equal strata are identities", ident.is_none(), || ident.clone().unwrap_or_default());

    // complete the declared maps along chains; keep every path for comparison
    let mut maps = space.maps.clone();
    for s in &space.strata {
        maps.entry((s.clone(), s.clone())).or_insert_with(|| Matrix::identity(space.dim(s)));
    }
    loop {
        let mut added = Vec::new();
        for ((y, y1), m1) in &maps {
            for ((z, y2), m2) in &maps {
                if z == y1 && y != y2 && !maps.contains_key(&(y.clone(), y2.clone())) {
                    added.push(((y.clone(), y2.clone()), m2.mul(m1).expect("shapes checked")));
                }
            }
        }
        if added.is_empty() {
            break;
        }
        for (k, m) in added {
            maps.entry(k).or_insert(m);
        }
    }
    let missing = le.iter().find(|(lo, hi)| !maps.contains_key(&(hi.clone(), lo.clone())));
    report.check("every order relation has a structure map", missing.is_none(), || {
        let (lo, hi) = missing.unwrap();
        format!("no map {hi}->{lo}")
    });

    let mut comp = None;
    let mut count = 0;
    'outer: for ((y, y1), m1) in &maps {
        for ((z, y2), m2) in &maps {
            if z != y1 || y == y1 || y1 == y2 {
                continue;
            }
            let Some(direct) = maps.get(&(y.clone(), y2.clone())) else { continue };
            count += 1;
            let composite = m2.mul(m1).expect("shapes checked");
            if &composite != direct {
                comp = Some(format!(
                    "M({y}->{y2}) != M({y1}->{y2}) M({y}->{y1}): {}",
                    describe_difference(direct, &composite)
                ));
                break 'outer;
            }
        }
    }
    report.check(format!("composition is functorial ({count} chains)"), comp.is_none(), || {
        comp.clone().unwrap_or_default()
    });

    let mut family = space.operators.clone();
    if let Some(extra) = extra {
        for (s, ops) in extra {
            family.entry(s.clone()).or_default().extend(ops.clone());
        }
    }
    if !family.is_empty() {
        let mut bad = None;
        let mut count = 0;
        for ((from, to), m) in &space.maps {
            let (Some(a), Some(b)) = (family.get(from), family.get(to)) else { continue };
            for (name, op_from) in a {
                let Some(op_to) = b.get(name) else { continue };
                count += 1;
                let lhs = m.mul(op_from);
                let rhs = op_to.mul(m);
                match (lhs, rhs) {
                    (Some(l), Some(r)) if l == r => {}
                    (Some(l), Some(r)) if bad.is_none() => {
                        bad = Some(format!("operator {name} on {from}->{to}: {}", describe_difference(&l, &r)));
                    }
                    (None, _) | (_, None) if bad.is_none() => {
                        bad = Some(format!("operator {name} has the wrong shape on {from} or {to}"));
                    }
                    _ => {}
                }
            }
        }
        report.check(format!("structure maps intertwine the operators ({count} pairs)"), bad.is_none(), || {
            bad.clone().unwrap_or_default()
        });
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn chain(perturb: bool) -> CostratifiedSpace {
        // Y3 -> Y2 -> Y1 with dims 3, 2, 1
        let a = Matrix::from_rows(vec![vec![q(1), q(0), q(2)], vec![q(0), q(1), q(-1)]], 3).unwrap();
        let b = Matrix::from_rows(vec![vec![q(3), q(1)]], 2).unwrap();
        let mut ba = b.mul(&a).unwrap();
        if perturb {
            ba.set(0, 2, ba.get(0, 2).clone() + Rational::one());
        }
        let s = |x: &str| x.to_string();
        CostratifiedSpace {
            strata: vec![s("Y1"), s("Y2"), s("Y3")],
            order: vec![(s("Y1"), s("Y2")), (s("Y2"), s("Y3"))],
            dims: [(s("Y1"), 1), (s("Y2"), 2), (s("Y3"), 3)].into_iter().collect(),
            maps: [((s("Y3"), s("Y2")), a), ((s("Y2"), s("Y1")), b), ((s("Y3"), s("Y1")), ba)].into_iter().collect(),
            operators: OperatorFamily::new(),
        }
    }

    #[test]
    fn compatible_chain_passes() {
        let rep = verify_costratified(&chain(false), None);
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn perturbed_composite_fails() {
        let rep = verify_costratified(&chain(true), None);
        assert!(!rep.passed());
        assert!(rep.failures().next().unwrap().witness.as_deref().unwrap().contains("entry (0, 2)"));
    }

    #[test]
    fn json_round_trip() {
        let c = chain(false);
        let back = CostratifiedSpace::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        assert!(CostratifiedSpace::from_json(r#"{"strata":["A"],"order":[],"dims":{"B":1},"maps":{}}"#).is_err());
    }

    #[test]
    fn identity_and_intertwining() {
        let s = |x: &str| x.to_string();
        let mut c = CostratifiedSpace {
            strata: vec![s("A"), s("B")],
            order: vec![(s("A"), s("B"))],
            dims: [(s("A"), 2), (s("B"), 2)].into_iter().collect(),
            maps: [((s("B"), s("A")), Matrix::identity(2))].into_iter().collect(),
            operators: OperatorFamily::new(),
        };
        assert!(verify_costratified(&c, None).passed());
        let op = Matrix::from_rows(vec![vec![q(1), q(1)], vec![Rational::zero(), q(2)]], 2).unwrap();
        c.operators.entry(s("A")).or_default().insert(s("h"), op.clone());
        c.operators.entry(s("B")).or_default().insert(s("h"), op);
        assert!(verify_costratified(&c, None).passed());
        let mut family = OperatorFamily::new();
        family.entry(s("B")).or_default().insert(s("h"), Matrix::identity(2));
        assert!(!verify_costratified(&c, Some(&family)).passed());
    }
}
