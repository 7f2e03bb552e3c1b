//! Cross-checks against computations that do not go through the code under
//! test: operators acting on polynomials, hand-built coboundary matrices,
//! an explicit contracting homotopy, and symbolic minors.

use std::collections::BTreeMap;

use num_traits::Zero;

use lie_rinehart::cohomology::{cohomology_dims, increasing_tuples, rinehart_d, AltForm};
use lie_rinehart::enveloping::{check_pbw, pbw_normal_form};
use lie_rinehart::orbits::{enumerate_hw, hw_weight, weyl_dim};
use lie_rinehart::poisson::poisson_cohomology;
use lie_rinehart::poly::{Monomial, Poly};
use lie_rinehart::presets;
use lie_rinehart::quotient::QuotientAlgebra;
use lie_rinehart::{QAlgebra, QLieRinehart, QPoisson, QPoly, Rational};

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn monomials_upto(nvars: usize, d: u32) -> Vec<QPoly> {
    (0..=d).flat_map(|k| Monomial::all_of_degree(nvars, k)).map(|m| Poly::term(m, q(1))).collect()
}

// --- enveloping algebra -----------------------------------------------------

/// `a_1 ∂_{i_1} a_2 ∂_{i_2} ⋯` applied to `f`, right to left.
fn act_word(word: &[(QPoly, usize)], f: &QPoly) -> QPoly {
    word.iter().rev().fold(f.clone(), |g, (a, i)| a * &g.partial(*i))
}

/// A PBW normal form applied to `f`; coordinate fields commute.
fn act_normal_form(l: &QLieRinehart, word: &[(QPoly, usize)], f: &QPoly) -> QPoly {
    let u = pbw_normal_form(l, word);
    let mut out = QPoly::zero(f.nvars());
    for (w, a) in u.terms() {
        let g = w.iter().fold(f.clone(), |g, &i| g.partial(i));
        out = &out + &(a * &g);
    }
    out
}

#[test]
fn weyl_normal_forms_act_as_differential_operators() {
    let l = presets::weyl().lie_rinehart::<Rational>().unwrap();
    let a = l.base();
    let coeffs: Vec<QPoly> = ["1", "x", "y", "x*y - 2", "y^2"].iter().map(|s| a.parse_elem(s).unwrap()).collect();
    let tests = monomials_upto(2, 4);
    let mut words = Vec::new();
    for (c1, c2) in [(0, 1), (1, 1), (2, 3), (4, 1), (3, 4)] {
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            words.push(vec![(coeffs[c1].clone(), i), (coeffs[c2].clone(), j)]);
            words.push(vec![(coeffs[c2].clone(), j), (coeffs[c1].clone(), i), (coeffs[1].clone(), j)]);
        }
    }
    for word in &words {
        for f in &tests {
            assert_eq!(act_normal_form(&l, word, f), act_word(word, f), "word {word:?} on {f:?}");
        }
    }
}

#[test]
fn euler_operator_squared() {
    let l = presets::de_rham(1).lie_rinehart::<Rational>().unwrap();
    let x = l.base().parse_elem("x").unwrap();
    let u = pbw_normal_form(&l, &[(x.clone(), 0), (x.clone(), 0)]);
    assert_eq!(u.coeff(&[0, 0]), Some(&l.base().parse_elem("x^2").unwrap()));
    assert_eq!(u.coeff(&[0]), Some(&x));
    assert_eq!(u.terms().count(), 2);
}

#[test]
fn pbw_ranks_match_symmetric_algebra() {
    // gr_k U(sl2) ≅ Sym^k(sl2): (k+1)(k+2)/2 independent words.
    let l = presets::sl2().lie_rinehart::<Rational>().unwrap();
    let r = check_pbw(&l, 3, 0);
    assert!(r.passed(), "{r}");
    for k in 0..=3usize {
        let expected = (k + 1) * (k + 2) / 2;
        assert!(r.checks.iter().any(|c| c.name.contains(&format!("gr_{k}:")) && c.name.contains(&format!("(rank {expected})"))));
    }
    let one = l.base().one();
    // f·e = e·f − h
    let u = pbw_normal_form(&l, &[(one.clone(), 2), (one.clone(), 1)]);
    assert_eq!(u.coeff(&[1, 2]), Some(&one));
    assert_eq!(u.coeff(&[0]), Some(&-&one));
}

#[test]
fn weyl_pbw_window_count() {
    // x^a ∂^b with |a| ≤ 4: 15 coefficient monomials per word, (k+1) words of length k.
    let l = presets::weyl().lie_rinehart::<Rational>().unwrap();
    let r = check_pbw(&l, 2, 4);
    assert!(r.passed(), "{r}");
    for k in 0..=2usize {
        assert!(r.checks.iter().any(|c| c.name.contains(&format!("(rank {})", 15 * (k + 1)))));
    }
}

// --- cohomology -------------------------------------------------------------

/// Contraction with the Euler field, divided by the total weight.
fn homotopy(omega: &AltForm<Rational>, weight: u32, nvars: usize) -> AltForm<Rational> {
    let p = omega.degree();
    let mut h = AltForm::zero(p - 1);
    let scale = Rational::new(1.into(), (weight as i64).into());
    for tuple in increasing_tuples(nvars, p - 1) {
        let mut acc = QPoly::zero(nvars);
        for k in 0..nvars {
            let mut full = vec![k];
            full.extend(&tuple);
            acc = &acc + &(&Poly::var(nvars, k) * &omega.eval(&full, nvars));
        }
        h.set(tuple, acc.scale(&scale));
    }
    h
}

fn add_forms(a: &AltForm<Rational>, b: &AltForm<Rational>, nvars: usize) -> AltForm<Rational> {
    let mut out = AltForm::zero(a.degree());
    for tuple in increasing_tuples(nvars, a.degree()) {
        out.set(tuple.clone(), &a.eval(&tuple, nvars) + &b.eval(&tuple, nvars));
    }
    out
}

#[test]
fn polynomial_poincare_lemma() {
    for n in [1usize, 2] {
        let l = presets::de_rham(n).lie_rinehart::<Rational>().unwrap();
        // d h + h d = id on every homogeneous form of positive weight.
        for p in 0..=n {
            for deg in 0..=5u32 {
                if p == 0 && deg == 0 {
                    continue;
                }
                for m in Monomial::all_of_degree(n, deg) {
                    for tuple in increasing_tuples(n, p) {
                        let mut omega = AltForm::zero(p);
                        omega.set(tuple.clone(), Poly::term(m.clone(), q(1)));
                        let w = deg + p as u32;
                        let dh = if p > 0 { rinehart_d(&homotopy(&omega, w, n), &l) } else { AltForm::zero(0) };
                        let d_omega = rinehart_d(&omega, &l);
                        let hd = if p < n { homotopy(&d_omega, w, n) } else { AltForm::zero(p) };
                        let sum = add_forms(&dh, &hd, n);
                        for t in increasing_tuples(n, p) {
                            assert_eq!(sum.eval(&t, n), omega.eval(&t, n), "n={n} p={p} {m:?} {tuple:?}");
                        }
                    }
                }
            }
        }
        // Hence only the constants survive.
        let table = cohomology_dims(&l, n, 0..=6).unwrap();
        assert!(table.dd_zero);
        let mut expected = vec![0; n + 1];
        expected[0] = 1;
        assert_eq!(table.totals(), expected);
        assert_eq!(table.dim_h(0, 0), 1);
    }
}

fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let mut r = 0;
    let cols = rows.first().map_or(0, Vec::len);
    for c in 0..cols {
        let Some(pivot) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, pivot);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone() / rows[r][c].clone();
                for k in 0..cols {
                    let v = rows[r][k].clone() * f.clone();
                    rows[i][k] -= v;
                }
            }
        }
        r += 1;
    }
    r
}

/// Sign of sorting `t`, or `None` with a repeated entry.
fn sort_sign(t: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut v = t.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            } else if v[j] == v[j + 1] {
                return None;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

#[test]
fn sl2_chevalley_eilenberg_brute_force() {
    // h, e, f with [h,e] = 2e, [h,f] = -2f, [e,f] = h.
    let mut c: BTreeMap<(usize, usize), Vec<(usize, i64)>> = BTreeMap::new();
    c.insert((0, 1), vec![(1, 2)]);
    c.insert((0, 2), vec![(2, -2)]);
    c.insert((1, 2), vec![(0, 1)]);
    let bracket = |i: usize, j: usize| -> Vec<(usize, i64)> {
        if i < j {
            c.get(&(i, j)).cloned().unwrap_or_default()
        } else if i > j {
            c.get(&(j, i)).map(|v| v.iter().map(|&(k, a)| (k, -a)).collect()).unwrap_or_default()
        } else {
            Vec::new()
        }
    };
    // Matrix of d: Λ^p → Λ^{p+1}, rows indexed by (p+1)-tuples.
    let coboundary = |p: usize| -> Vec<Vec<Rational>> {
        let src = increasing_tuples(3, p);
        let dst = increasing_tuples(3, p + 1);
        dst.iter()
            .map(|x| {
                let mut row = vec![q(0); src.len()];
                for i in 0..x.len() {
                    for j in i + 1..x.len() {
                        let rest: Vec<usize> = (0..x.len()).filter(|&k| k != i && k != j).map(|k| x[k]).collect();
                        let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                        for (k, a) in bracket(x[i], x[j]) {
                            let mut t = vec![k];
                            t.extend(&rest);
                            if let Some((sorted, s)) = sort_sign(&t) {
                                let col = src.iter().position(|u| *u == sorted).unwrap();
                                row[col] += q(sign * s * a);
                            }
                        }
                    }
                }
                row
            })
            .collect()
    };
    let ranks: Vec<usize> = (0..3).map(|p| rank(coboundary(p))).collect();
    let dims: Vec<usize> = (0..=3)
        .map(|p| {
            let cp = increasing_tuples(3, p).len();
            let out = if p < 3 { ranks[p] } else { 0 };
            let inn = if p > 0 { ranks[p - 1] } else { 0 };
            cp - out - inn
        })
        .collect();
    assert_eq!(dims, vec![1, 0, 0, 1]);
    let l = presets::sl2().lie_rinehart::<Rational>().unwrap();
    assert_eq!(cohomology_dims(&l, 3, 0..=0).unwrap().totals(), dims);
}

#[test]
fn symplectic_poisson_cohomology_is_de_rham() {
    let p: QPoisson = presets::symplectic_plane().poisson_algebra().unwrap();
    // π♯ sends dq, dp to constant multiples of ∂p, ∂q: an isomorphism onto Der.
    let cot = p.cotangent().unwrap();
    let m: Vec<Vec<Rational>> = (0..2)
        .map(|i| cot.anchor(i).images().iter().map(|a| a.as_constant().expect("constant anchor")).collect())
        .collect();
    assert!(!(m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone()).is_zero());
    let poisson = poisson_cohomology(&p, 2, 0..=6).unwrap();
    let de_rham = cohomology_dims(&presets::de_rham(2).lie_rinehart::<Rational>().unwrap(), 2, 0..=6).unwrap();
    assert!(poisson.dd_zero);
    assert_eq!(poisson.totals(), de_rham.totals());
}

#[test]
fn log_plane_casimirs() {
    // {x, f} = {y, f} = 0 solved degree by degree.
    let p: QPoisson = presets::log_plane().poisson_algebra().unwrap();
    let a = p.base();
    let mut casimirs = 0;
    for d in 0..=4u32 {
        let basis: Vec<QPoly> = Monomial::all_of_degree(2, d).into_iter().map(|m| Poly::term(m, q(1))).collect();
        let images: Vec<BTreeMap<(u8, Monomial), Rational>> = basis
            .iter()
            .map(|f| {
                let mut out = BTreeMap::new();
                for (tag, g) in [(0u8, p.bracket(&a.var(0), f)), (1, p.bracket(&a.var(1), f))] {
                    for (m, c) in g.terms() {
                        out.insert((tag, m.clone()), c.clone());
                    }
                }
                out
            })
            .collect();
        let keys: Vec<(u8, Monomial)> = images.iter().flat_map(|m| m.keys().cloned()).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        let rows: Vec<Vec<Rational>> =
            keys.iter().map(|k| images.iter().map(|im| im.get(k).cloned().unwrap_or_else(|| q(0))).collect()).collect();
        let found = basis.len() - rank(rows);
        assert_eq!(poisson_cohomology(&p, 0, d as i64..=d as i64).unwrap().dim_h(0, d as i64), found, "degree {d}");
        casimirs += found;
    }
    assert_eq!(casimirs, 1);
}

// --- Poisson examples -------------------------------------------------------

#[test]
fn line_field_vanishes_on_the_line() {
    let p: QPoisson = presets::exotic_plane().poisson_algebra().unwrap();
    let a = p.base();
    let x = p.hamiltonian_field(&a.parse_elem("(x1 + r)/2").unwrap());
    let r = a.var_index("r").unwrap();
    let x1 = a.var_index("x1").unwrap();
    let x2 = a.var_index("x2").unwrap();
    assert_eq!(x.image(x1), &a.parse_elem("-x2").unwrap());
    assert_eq!(x.image(x2), &a.parse_elem("x1 + r").unwrap());
    // Both images lie in the ideal (x2, x1 + r) of the quotient.
    let line: QAlgebra =
        QuotientAlgebra::parse(&["r", "x1", "x2"], &["x1^2 + x2^2 - r^2", "x2", "x1 + r"]).unwrap();
    for k in [r, x1, x2] {
        assert!(line.normal_form(x.image(k)).is_zero(), "image of {}", a.vars()[k]);
    }
}

#[test]
fn exotic_bracket_two_ways() {
    // {x1, r^2} via Leibniz and via r^2 = x1^2 + x2^2.
    let p: QPoisson = presets::exotic_plane().poisson_algebra().unwrap();
    let a = p.base();
    let x1 = a.parse_elem("x1").unwrap();
    let expected = a.parse_elem("4*x2*r").unwrap();
    assert_eq!(p.bracket(&x1, &a.parse_elem("r^2").unwrap()), a.normal_form(&expected));
    assert_eq!(p.bracket(&x1, &a.parse_elem("x1^2 + x2^2").unwrap()), a.normal_form(&expected));
}

// --- orbits -----------------------------------------------------------------

/// Leading `m × m` minor of the symmetric matrix with entries `x_{ij}`.
fn minor(m: usize, index: &BTreeMap<(usize, usize), usize>) -> QPoly {
    let n = index.len();
    let entry = |i: usize, j: usize| Poly::var(n, index[&(i.min(j), i.max(j))]);
    fn det(rows: &[usize], cols: &[usize], entry: &dyn Fn(usize, usize) -> QPoly, n: usize) -> QPoly {
        if rows.is_empty() {
            return Poly::one(n);
        }
        let mut out = Poly::zero(n);
        for (k, &c) in cols.iter().enumerate() {
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = &entry(rows[0], c) * &det(&rows[1..], &rest, entry, n);
            out = if k % 2 == 0 { &out + &term } else { &out - &term };
        }
        out
    }
    let idx: Vec<usize> = (0..m).collect();
    det(&idx, &idx, &entry, n)
}

#[test]
fn highest_weights_from_minor_expansion() {
    for ell in 1..=3usize {
        let mut index = BTreeMap::new();
        for i in 0..ell {
            for j in i..ell {
                let k = index.len();
                index.insert((i, j), k);
            }
        }
        let minors: Vec<QPoly> = (1..=ell).map(|m| minor(m, &index)).collect();
        for k in 0..=4u32 {
            for mono in enumerate_hw(ell, k) {
                let mut prod = Poly::one(index.len());
                for (j, &e) in mono.iter().enumerate() {
                    prod = &prod * &minors[j].pow(e);
                }
                assert!(!prod.is_zero());
                // The diagonal torus scales x_{ij} by t_i t_j.
                for (m, _) in prod.terms() {
                    let mut w = vec![0u32; ell];
                    for (&(i, j), &v) in &index {
                        let e = m.0[v];
                        w[i] += e;
                        w[j] += e;
                    }
                    assert_eq!(w, hw_weight(&mono, ell), "ell={ell} m={mono:?}");
                }
            }
        }
    }
}

#[test]
fn weyl_dimensions_by_character() {
    // dim of the U(ℓ) module = number of semistandard tableaux, counted by
    // brute force over fillings for small shapes.
    fn ssyt(shape: &[u32], n: u32) -> u64 {
        let cells: Vec<(usize, usize)> =
            shape.iter().enumerate().flat_map(|(r, &len)| (0..len as usize).map(move |c| (r, c))).collect();
        fn go(k: usize, cells: &[(usize, usize)], fill: &mut BTreeMap<(usize, usize), u32>, n: u32) -> u64 {
            if k == cells.len() {
                return 1;
            }
            let (r, c) = cells[k];
            let mut total = 0;
            for v in 1..=n {
                let left_ok = c == 0 || fill[&(r, c - 1)] <= v;
                let up_ok = r == 0 || fill[&(r - 1, c)] < v;
                if left_ok && up_ok {
                    fill.insert((r, c), v);
                    total += go(k + 1, cells, fill, n);
                    fill.remove(&(r, c));
                }
            }
            total
        }
        go(0, &cells, &mut BTreeMap::new(), n)
    }
    for lambda in [vec![4, 0], vec![2, 2], vec![6, 2], vec![4, 2, 0], vec![2, 2, 2], vec![4, 4, 2], vec![6, 0, 0]] {
        assert_eq!(weyl_dim(&lambda), ssyt(&lambda, lambda.len() as u32), "{lambda:?}");
    }
}
