//! Acceptance criteria. Prints one line per criterion with its runtime and
//! exits non-zero if any criterion fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use lie_rinehart::cohomology::cohomology_dims;
use lie_rinehart::enveloping::{check_pbw, pbw_normal_form};
use lie_rinehart::orbits::{emit_costratified, invariant_dim, reduced_dim, restriction_profile};
use lie_rinehart::poisson::{
    check_pi_cocycle, check_polarization, poisson_cohomology, verify_extension, verify_differentials,
};
use lie_rinehart::prequant::{check_dirac, verify_costratified, Operator};
use lie_rinehart::quotient::QuotientAlgebra;
use lie_rinehart::{presets, Check, Description, GPoisson, QAlgebra, QPoisson, Rational, Report};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn lr(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lr")).args(args).output().expect("run lr");
    let text = String::from_utf8_lossy(&out.stdout).into_owned() + &String::from_utf8_lossy(&out.stderr);
    (out.status.code().unwrap_or(-1), text)
}

fn require(report: &Report, what: &str) -> Result<(), String> {
    match report.failures().next() {
        None => Ok(()),
        Some(c) => Err(format!("{what}: {} ({})", c.name, c.witness.as_deref().unwrap_or("no witness"))),
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn levels(report: &Report) -> String {
    let module = report.checks.iter().filter(|c| c.level == Some(lie_rinehart::Certification::Module)).count();
    let anchor = report.checks.iter().filter(|c| c.level == Some(lie_rinehart::Certification::Anchor)).count();
    format!("{module} module-level, {anchor} anchor-level")
}

fn exotic_plane() -> Outcome {
    let p: QPoisson = Description::from_file(data("exotic_plane.json")).map_err(|e| e.to_string())?.poisson_algebra().map_err(|e| e.to_string())?;
    let r = p.verify(3);
    require(&r, "verify_poisson")?;
    let names: Vec<&str> = r.checks.iter().map(|c| c.name.as_str()).collect();
    ensure(names.iter().any(|n| n.contains("Jacobi")) && names.iter().any(|n| n.contains("relations")), || {
        format!("missing checks: {names:?}")
    })?;
    let (code, out) = lr(&["verify", "poisson", data("exotic_plane.json").to_str().unwrap()]);
    ensure(code == 0, || format!("lr exit {code}: {out}"))?;
    Ok(format!("{} checks", r.checks.len()))
}

fn line_field() -> Outcome {
    let p: QPoisson = presets::exotic_plane().poisson_algebra().unwrap();
    let a = p.base();
    let x = p.hamiltonian_field(&a.parse_elem("(x1 + r)/2").unwrap());
    let (x1, x2) = (a.var_index("x1").unwrap(), a.var_index("x2").unwrap());
    ensure(x.image(x1) == &a.parse_elem("-x2").unwrap(), || format!("x1 -> {}", a.format(x.image(x1))))?;
    ensure(x.image(x2) == &a.parse_elem("x1 + r").unwrap(), || format!("x2 -> {}", a.format(x.image(x2))))?;
    let line: QAlgebra = QuotientAlgebra::parse(&["r", "x1", "x2"], &["x1^2 + x2^2 - r^2", "x2", "x1 + r"]).unwrap();
    for k in 0..3 {
        ensure(line.normal_form(x.image(k)).is_zero(), || format!("image of {} not in (x2, x1 + r)", a.vars()[k]))?;
    }
    Ok(format!("X = {}", x.format(a)))
}

fn differentials_and_extension() -> Outcome {
    let mut notes = Vec::new();
    for d in [presets::symplectic_plane(), presets::exotic_plane()] {
        let name = d.name.clone().unwrap();
        let p: QPoisson = d.poisson_algebra().unwrap();
        let r = verify_differentials(&p, 4);
        require(&r, &format!("{name} differentials"))?;
        let e = verify_extension(&p, 4);
        require(&e, &format!("{name} extension"))?;
        notes.push(format!("{name}: {} / {}", levels(&r), levels(&e)));
    }
    Ok(notes.join("; "))
}

fn pbw() -> Outcome {
    let weyl = presets::weyl().lie_rinehart::<Rational>().unwrap();
    let r = check_pbw(&weyl, 2, 4);
    require(&r, "Weyl")?;
    for k in 0..=2usize {
        let want = 15 * (k + 1);
        ensure(r.checks.iter().any(|c| c.name.contains(&format!("gr_{k}:")) && c.name.contains(&format!("(rank {want})"))), || {
            format!("Weyl gr_{k} rank differs from {want}")
        })?;
    }
    // Normal forms act on Q[x, y]_{<=4} as the differential operators they came from.
    let a = weyl.base();
    let x = a.parse_elem("x").unwrap();
    let y = a.parse_elem("y").unwrap();
    let word = [(x.clone(), 0), (y.clone(), 1), (x.clone(), 0)];
    let u = pbw_normal_form(&weyl, &word);
    for deg in 0..=4 {
        for m in lie_rinehart::poly::Monomial::all_of_degree(2, deg) {
            let f = lie_rinehart::poly::Poly::term(m, Rational::from_integer(1.into()));
            let direct = word.iter().rev().fold(f.clone(), |g, (c, i)| c * &g.partial(*i));
            let mut via = a.zero();
            for (w, c) in u.terms() {
                via = &via + &(c * &w.iter().fold(f.clone(), |g, &i| g.partial(i)));
            }
            ensure(via == direct, || format!("operator action differs on {}", a.format(&f)))?;
        }
    }
    let sl2 = presets::sl2().lie_rinehart::<Rational>().unwrap();
    let r = check_pbw(&sl2, 3, 0);
    require(&r, "sl2")?;
    for (k, want) in [1, 3, 6, 10].into_iter().enumerate() {
        ensure(r.checks.iter().any(|c| c.name.contains(&format!("gr_{k}:")) && c.name.contains(&format!("(rank {want})"))), || {
            format!("sl2 gr_{k} rank differs from dim Sym^{k} = {want}")
        })?;
    }
    Ok("Weyl ranks 15/30/45, sl2 ranks 1/3/6/10".into())
}

fn cohomology() -> Outcome {
    let mut dd = true;
    for n in [1usize, 2] {
        let l = presets::de_rham(n).lie_rinehart::<Rational>().unwrap();
        let t = cohomology_dims(&l, n, 0..=6).map_err(|e| e.to_string())?;
        let mut want = vec![0; n + 1];
        want[0] = 1;
        ensure(t.totals() == want && t.dim_h(0, 0) == 1, || format!("de Rham {n}: {:?}", t.totals()))?;
        dd &= t.dd_zero;
    }
    let sl2 = presets::sl2().lie_rinehart::<Rational>().unwrap();
    let t = cohomology_dims(&sl2, 3, 0..=0).map_err(|e| e.to_string())?;
    ensure(t.totals() == vec![1, 0, 0, 1], || format!("sl2: {:?}", t.totals()))?;
    dd &= t.dd_zero;
    let plane: QPoisson = presets::symplectic_plane().poisson_algebra().unwrap();
    let t = poisson_cohomology(&plane, 2, 0..=6).map_err(|e| e.to_string())?;
    ensure(t.totals() == vec![1, 0, 0], || format!("Poisson plane: {:?}", t.totals()))?;
    dd &= t.dd_zero;
    ensure(dd, || "d o d != 0 on some window".into())?;
    let (code, out) = lr(&["cohomology", "--preset", "poisson:plane", "--form-max", "2", "--poly-window", "0..6"]);
    ensure(code == 0 && out.contains("totals: [1, 0, 0]"), || format!("lr cohomology: {out}"))?;
    let mut count = 0;
    for d in presets::poisson_presets() {
        let c: Check = match d.field {
            lie_rinehart::description::Field::Rational => check_pi_cocycle(&d.poisson_algebra::<Rational>().unwrap()),
            lie_rinehart::description::Field::Gaussian => check_pi_cocycle(&d.poisson_algebra::<lie_rinehart::Gaussian>().unwrap()),
        };
        ensure(c.passed(), || format!("{:?}: {}", d.name, c.witness.clone().unwrap_or_default()))?;
        count += 1;
    }
    Ok(format!("de Rham [1,0], [1,0,0]; sl2 [1,0,0,1]; plane [1,0,0]; pi cocycle on {count} algebras"))
}

fn dirac() -> Outcome {
    let pq = Description::from_file(data("plane_qp.json")).unwrap().prequantum().unwrap();
    let a = pq.poisson().base();
    for (f, g) in [("q", "p"), ("q^2", "p"), ("q*p", "p^2")] {
        let r = check_dirac(&pq, &a.parse_elem(f).unwrap(), &a.parse_elem(g).unwrap(), 4);
        require(&r, &format!("({f}, {g})"))?;
    }
    for c in ["1", "-3", "7/2", "2 + i"] {
        let cp = a.parse_elem(c).unwrap();
        ensure(pq.quantize(&cp) == Operator::multiplication(cp.clone(), a), || format!("{c} does not quantize to {c}*Id"))?;
    }
    Ok("3 pairs on monomials of degree <= 4, constants".into())
}

fn reduction_dims() -> Outcome {
    let mut cases = 0;
    for ell in 1..=2usize {
        for s in 1..=ell {
            for k in 1..=3u32 {
                let even = invariant_dim(ell, s, 2 * k).map_err(|e| e.to_string())?;
                let reduced = reduced_dim(ell, s, k);
                ensure(even == reduced, || format!("ell={ell} s={s} k={k}: invariants {even} vs reduced {reduced}"))?;
                let odd = invariant_dim(ell, s, 2 * k - 1).map_err(|e| e.to_string())?;
                ensure(odd == 0, || format!("ell={ell} s={s} degree {}: {odd} odd invariants", 2 * k - 1))?;
                if ell == 2 && s == 1 {
                    ensure(reduced == 2 * k as u64 + 1, || format!("conic sections: {reduced} != {}", 2 * k + 1))?;
                }
                cases += 1;
            }
        }
    }
    ensure(reduced_dim(2, 2, 2) == 6, || "ell=2 s=2 k=2 is not 6".into())?;
    Ok(format!("{cases} cases"))
}

fn restriction() -> Outcome {
    let mut profile = Vec::new();
    for k in 1..=3u32 {
        let (top, low, kernel) = restriction_profile(2, 2, k);
        ensure(low == top - kernel, || format!("k={k}: {low} != {top} - {kernel}"))?;
        let space = emit_costratified(2, k).map_err(|e| e.to_string())?;
        require(&verify_costratified(&space, None), &format!("emitted k={k}"))?;
        profile.push(format!("({top}, {low}, {kernel})"));
    }
    let (top, low, kernel) = restriction_profile(2, 2, 3);
    ensure((top, low, kernel) == (10, 7, 3), || format!("k=3 profile ({top}, {low}, {kernel})"))?;
    Ok(profile.join(" "))
}

fn polarization() -> Outcome {
    let d = presets::complex_plane();
    let p: GPoisson = d.poisson_algebra().unwrap();
    require(&check_polarization(&p, &d.polarization_generators(&p).unwrap(), 3), "{dz}")?;
    let d = presets::symplectic_plane();
    let p: QPoisson = d.poisson_algebra().unwrap();
    require(&check_polarization(&p, &d.polarization_generators(&p).unwrap(), 3), "{dq}")?;
    Ok("{dz} on the complex plane, {dq} on the symplectic plane".into())
}

fn negative_controls() -> Outcome {
    let runs = [
        (vec!["verify", "poisson", "exotic_plane_corrupted.json"], "witness"),
        (vec!["verify", "prequantum", "plane_qp_wrong_theta.json"], "witness"),
        (vec!["costrat", "--file", "costrat_chain_perturbed.json"], "witness"),
    ];
    for (args, marker) in runs {
        let path = data(args.last().unwrap());
        let mut full: Vec<&str> = args[..args.len() - 1].to_vec();
        full.push(path.to_str().unwrap());
        let (code, out) = lr(&full);
        ensure(code == 1, || format!("{} exited {code}", full.join(" ")))?;
        ensure(out.contains(marker), || format!("{} printed no witness", full.join(" ")))?;
    }
    Ok("wrong bracket sign, wrong theta sign, perturbed composite: exit 1 with witness".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("exotic plane is Poisson", Duration::from_secs(1), exotic_plane),
        ("Hamiltonian field of (x1 + r)/2", Duration::from_secs(1), line_field),
        ("differentials and extension brackets", Duration::from_secs(10), differentials_and_extension),
        ("PBW for Weyl and sl2", Duration::from_secs(30), pbw),
        ("cohomology tables", Duration::from_secs(60), cohomology),
        ("Dirac condition", Duration::from_secs(10), dirac),
        ("quantization commutes with reduction", Duration::from_secs(120), reduction_dims),
        ("restriction and kernel profile", Duration::from_secs(5), restriction),
        ("polarization closure", Duration::from_secs(5), polarization),
        ("negative controls", Duration::from_secs(60), negative_controls),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let verdict = match &outcome {
            Ok(_) if elapsed <= *limit => "PASS",
            _ => "FAIL",
        };
        let detail = match outcome {
            Ok(d) if elapsed <= *limit => d,
            Ok(d) => format!("{d}; too slow: limit {:.0} s", limit.as_secs_f64()),
            Err(e) => e,
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("criterion {:>2}: {verdict} {:>9.3} s  {name}: {detail}", i + 1, elapsed.as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
