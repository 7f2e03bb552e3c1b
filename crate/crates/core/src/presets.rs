//! Built-in examples.

use std::collections::BTreeMap;

use crate::description::{Description, Field};

fn map<const N: usize>(entries: [(&str, &str); N]) -> BTreeMap<String, String> {
    entries.into_iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn named(name: &str) -> Description {
    Description { name: Some(name.to_string()), ..Description::default() }
}

/// Polynomial vector fields on `vars` with the coordinate basis `d<var>`.
fn derivations(name: &str, vars: &[String]) -> Description {
    let mut d = named(name);
    d.vars = vars.to_vec();
    for v in vars {
        let e = format!("d{v}");
        d.basis.push(e.clone());
        d.anchor.insert(e, map([(v.as_str(), "1")]));
    }
    d
}

/// `(Q[x1..xn], Der)`: polynomial de Rham complex.
pub fn de_rham(n: usize) -> Description {
    let vars: Vec<String> = if n == 1 { vec!["x".into()] } else { (1..=n).map(|i| format!("x{i}")).collect() };
    derivations(&format!("de-rham:{n}"), &vars)
}

/// Differential operators on `Q[x, y]`: the enveloping algebra is the Weyl algebra.
pub fn weyl() -> Description {
    derivations("weyl", &strings(&["x", "y"]))
}

/// `sl_2` over the ground field: `[h, e] = 2e`, `[h, f] = -2f`, `[e, f] = h`.
pub fn sl2() -> Description {
    let mut d = named("lie:sl2");
    d.basis = strings(&["h", "e", "f"]);
    d.bracket.insert("h,e".into(), map([("e", "2")]));
    d.bracket.insert("h,f".into(), map([("f", "-2")]));
    d.bracket.insert("e,f".into(), map([("h", "1")]));
    d
}

pub fn abelian(n: usize) -> Description {
    let mut d = named(&format!("lie:abelian:{n}"));
    d.basis = (1..=n).map(|i| format!("e{i}")).collect();
    d
}

/// `{q, p} = 1`.
pub fn symplectic_plane() -> Description {
    let mut d = named("poisson:plane");
    d.vars = strings(&["q", "p"]);
    d.poisson = map([("q,p", "1")]);
    d.polarization = strings(&["dq"]);
    d
}

/// The plane as the quotient of a three-dimensional cone by a reflection:
/// `x1^2 + x2^2 = r^2` with the induced bracket.
pub fn exotic_plane() -> Description {
    let mut d = named("exotic-plane");
    d.vars = strings(&["r", "x1", "x2"]);
    d.relations = strings(&["x1^2 + x2^2 - r^2"]);
    d.poisson = map([("x1,x2", "2*r"), ("x1,r", "2*x2"), ("x2,r", "-2*x1")]);
    d.module_rules = map([("r*dr", "x1*dx1 + x2*dx2")]);
    d
}

/// The exotic plane with the sign of `{x2, r}` flipped; not a Poisson algebra.
pub fn exotic_plane_corrupted() -> Description {
    let mut d = exotic_plane();
    d.name = Some("exotic-plane-corrupted".into());
    d.poisson.insert("x2,r".into(), "2*x1".into());
    d
}

pub fn zero_bracket() -> Description {
    let mut d = named("poisson:zero");
    d.vars = strings(&["x", "y"]);
    d
}

/// `{x, y} = x`, degenerate along `x = 0`.
pub fn log_plane() -> Description {
    let mut d = named("poisson:log");
    d.vars = strings(&["x", "y"]);
    d.poisson = map([("x,y", "x")]);
    d
}

/// Linear Poisson structure on the dual of `sl_2`.
pub fn sl2_dual() -> Description {
    let mut d = named("poisson:sl2-dual");
    d.vars = strings(&["h", "e", "f"]);
    d.poisson = map([("h,e", "2*e"), ("h,f", "-2*f"), ("e,f", "h")]);
    d
}

/// `Q(i)[z, zb]` with `{z, zb} = -2i`, conjugation swapping `z` and `zb`.
pub fn complex_plane() -> Description {
    let mut d = named("poisson:complex-plane");
    d.field = Field::Gaussian;
    d.vars = strings(&["z", "zb"]);
    d.poisson = map([("z,zb", "-2*i")]);
    d.involution = map([("z", "zb"), ("zb", "z")]);
    d.polarization = strings(&["dz"]);
    d
}

/// Symplectic plane with the potential `θ = p dq`.
pub fn plane_qp() -> Description {
    let mut d = symplectic_plane();
    d.name = Some("plane-qp".into());
    d.theta = map([("dq", "p")]);
    d
}

/// Same with `θ = -p dq`; fails the Dirac condition.
pub fn plane_qp_wrong_theta() -> Description {
    let mut d = plane_qp();
    d.name = Some("plane-qp-wrong-theta".into());
    d.theta = map([("dq", "-p")]);
    d
}

/// Every well-formed built-in Poisson algebra.
pub fn poisson_presets() -> Vec<Description> {
    vec![symplectic_plane(), exotic_plane(), zero_bracket(), log_plane(), sl2_dual(), complex_plane(), plane_qp()]
}

/// Looks up a preset by name, e.g. `de-rham:2`, `lie:sl2`, `poisson:plane`.
pub fn preset(name: &str) -> Option<Description> {
    if let Some(n) = name.strip_prefix("de-rham:") {
        return n.parse().ok().filter(|&n| n > 0).map(de_rham);
    }
    if let Some(n) = name.strip_prefix("lie:abelian:") {
        return n.parse().ok().map(abelian);
    }
    Some(match name {
        "lie:sl2" => sl2(),
        "weyl" => weyl(),
        "poisson:plane" => symplectic_plane(),
        "poisson:zero" => zero_bracket(),
        "poisson:log" => log_plane(),
        "poisson:sl2-dual" => sl2_dual(),
        "poisson:complex-plane" => complex_plane(),
        "exotic-plane" => exotic_plane(),
        "exotic-plane-corrupted" => exotic_plane_corrupted(),
        "plane-qp" => plane_qp(),
        "plane-qp-wrong-theta" => plane_qp_wrong_theta(),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Gaussian, Rational};

    #[test]
    fn presets_round_trip() {
        for d in poisson_presets().into_iter().chain([de_rham(2), sl2(), weyl(), abelian(2)]) {
            let name = d.name.clone().unwrap();
            assert_eq!(preset(&name).as_ref(), Some(&d), "{name}");
            assert_eq!(Description::from_json(&d.to_json()).unwrap(), d);
        }
        assert!(preset("de-rham:0").is_none());
        assert!(preset("nope").is_none());
    }

    #[test]
    fn poisson_presets_verify() {
        for d in poisson_presets() {
            let rep = match d.field {
                Field::Rational => d.poisson_algebra::<Rational>().unwrap().verify(2),
                Field::Gaussian => d.poisson_algebra::<Gaussian>().unwrap().verify(2),
            };
            assert!(rep.passed(), "{:?}: {rep}", d.name);
        }
        assert!(!exotic_plane_corrupted().poisson_algebra::<Rational>().unwrap().verify(2).passed());
    }

    #[test]
    fn lie_presets_verify() {
        for d in [de_rham(1), de_rham(3), sl2(), weyl(), abelian(3)] {
            assert!(d.lie_rinehart::<Rational>().unwrap().verify(2).passed(), "{:?}", d.name);
        }
    }
}
