//! The `lr` command: verifiers and computations driven by JSON descriptions
//! or built-in presets.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage,
//! parse and out-of-range errors.

use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use lie_rinehart::cohomology::{cohomology_dims, CohomologyTable};
use lie_rinehart::description::Field;
use lie_rinehart::enveloping::check_pbw;
use lie_rinehart::orbits::{costrat_summary, emit_costratified, invariant_dim, restriction_profile};
use lie_rinehart::poisson::{
    check_pi_cocycle, check_polarization, poisson_cohomology, verify_extension, verify_differentials, PoissonAlgebra,
};
use lie_rinehart::prequant::{check_dirac, verify_costratified, verify_prequantum, CostratifiedSpace};
use lie_rinehart::scalar::{Gaussian, Scalar};
use lie_rinehart::{presets, Check, Description, Error, Report, Status};

#[derive(Debug, Parser)]
#[command(name = "lr", version, about = "Exact verification of Lie-Rinehart, Poisson and prequantum structures")]
pub struct Cli {
    /// Print the run report as JSON.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the verifier for a structure.
    Verify {
        kind: Kind,
        #[command(flatten)]
        input: Input,
        /// Largest degree of the test monomials.
        #[arg(long, default_value_t = 3)]
        degree: u32,
    },
    /// Dimensions of Rinehart (or Poisson) cohomology on a weight window.
    Cohomology {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 2)]
        form_max: usize,
        /// Weight window `A..B`, inclusive.
        #[arg(long, default_value = "0..4", value_parser = parse_window)]
        poly_window: RangeInclusive<i64>,
    },
    /// Check the Poincaré-Birkhoff-Witt property up to a filtration degree.
    Pbw {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 2)]
        filtration: usize,
        #[arg(long, default_value_t = 2)]
        coeff_degree: u32,
    },
    /// Dirac condition `i[f^, g^] = {f, g}^` for pairs of functions.
    Dirac {
        #[command(flatten)]
        input: Input,
        /// A pair `f,g`; repeatable. Defaults to all pairs of generators.
        #[arg(long = "pair")]
        pairs: Vec<String>,
        #[arg(long, default_value_t = 4)]
        degree: u32,
    },
    /// Reduced quantum space dimensions, or verification of a costratified file.
    Costrat(CostratArgs),
    /// Dimension of orthogonal-group invariants of a symmetric power.
    Invariants {
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        degree: u32,
    },
    /// Print a built-in description as JSON.
    Preset { name: String },
}

#[derive(Debug, Args)]
pub struct CostratArgs {
    #[arg(long, required_unless_present = "file")]
    pub ell: Option<usize>,
    #[arg(long, required_unless_present = "file")]
    pub s: Option<usize>,
    #[arg(long, required_unless_present = "file")]
    pub k: Option<u32>,
    /// Compare with a brute-force count of invariants.
    #[arg(long)]
    pub oracle: bool,
    /// Verify a costratified description instead.
    #[arg(long, conflicts_with_all = ["ell", "s", "k", "oracle"])]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    LieRinehart,
    Poisson,
    Differentials,
    Extension,
    Polarization,
    Prequantum,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Description file (JSON).
    #[arg(required_unless_present = "preset", conflicts_with = "preset")]
    pub file: Option<PathBuf>,
    /// Built-in description, e.g. `exotic-plane`, `de-rham:2`, `lie:sl2`.
    #[arg(long)]
    pub preset: Option<String>,
}

fn parse_window(s: &str) -> Result<RangeInclusive<i64>, String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected A..B, got '{s}'"))?;
    let a: i64 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: i64 = b.trim().parse().map_err(|e| format!("{e}"))?;
    if a > b {
        return Err(format!("empty window {a}..{b}"));
    }
    Ok(a..=b)
}

/// Machine-readable record of one invocation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    /// SHA-256 of the input description (or of the canonical arguments).
    pub inputs_digest: String,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<serde_json::Value>,
    pub wall_time_us: u64,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        !self.checks.iter().any(Check::failed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        let failed = self.checks.iter().filter(|c| c.failed()).count();
        out.push_str(&format!(
            "{}: {} ({} checks, {failed} failed, {:.3} s)\n",
            self.command,
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks.len(),
            self.wall_time_us as f64 / 1e6
        ));
        for c in &self.checks {
            let level = c.level.map(|l| format!(" [{}]", level_name(l))).unwrap_or_default();
            match &c.status {
                Status::Pass => out.push_str(&format!("  pass  {}{level}\n", c.name)),
                Status::Fail => {
                    out.push_str(&format!("  FAIL  {}{level}\n", c.name));
                    if let Some(w) = &c.witness {
                        out.push_str(&format!("        witness: {w}\n"));
                    }
                }
                Status::Skipped(r) => out.push_str(&format!("  skip  {} ({r})\n", c.name)),
            }
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out
    }
}

fn level_name(l: lie_rinehart::Certification) -> &'static str {
    match l {
        lie_rinehart::Certification::Module => "module",
        lie_rinehart::Certification::Anchor => "anchor",
    }
}

/// Result of running a command: exit code and the text for each stream.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn usage_error(e: impl std::fmt::Display) -> Outcome {
    Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") }
}

fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

struct Loaded {
    description: Description,
    digest: String,
}

fn load(input: &Input) -> Result<Loaded, Error> {
    match (&input.file, &input.preset) {
        (_, Some(name)) => {
            let description =
                presets::preset(name).ok_or_else(|| Error::Description(format!("unknown preset '{name}'")))?;
            let digest = digest(description.to_json().as_bytes());
            Ok(Loaded { description, digest })
        }
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Description(format!("cannot read {}: {e}", path.display())))?;
            Ok(Loaded { description: Description::from_json(&text)?, digest: digest(text.as_bytes()) })
        }
        (None, None) => Err(Error::Description("no input given".into())),
    }
}

/// Structural errors are mathematical failures; everything else is misuse.
fn error_outcome(command: &str, digest: String, e: Error, start: Instant) -> Result<RunReport, Outcome> {
    match e {
        Error::Structure(msg) => Ok(RunReport {
            command: command.to_string(),
            inputs_digest: digest,
            checks: vec![Check::fail("structure is well defined", msg)],
            notes: Vec::new(),
            data: None,
            wall_time_us: start.elapsed().as_micros() as u64,
        }),
        other => Err(usage_error(other)),
    }
}

fn finish(command: &str, digest: String, reports: Vec<Report>, data: Option<serde_json::Value>, start: Instant) -> RunReport {
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    for r in reports {
        checks.extend(r.checks);
        notes.extend(r.notes);
    }
    notes.dedup();
    RunReport {
        command: command.to_string(),
        inputs_digest: digest,
        checks,
        notes,
        data,
        wall_time_us: start.elapsed().as_micros() as u64,
    }
}

fn verify_poisson_kind<S: Scalar>(kind: Kind, d: &Description, degree: u32) -> Result<Vec<Report>, Error> {
    let p: PoissonAlgebra<S> = d.poisson_algebra()?;
    Ok(match kind {
        Kind::Poisson => {
            let mut r = p.verify(degree);
            if r.passed() {
                r.push(check_pi_cocycle(&p));
            }
            vec![r]
        }
        Kind::Differentials => vec![verify_differentials(&p, degree)],
        Kind::Extension => vec![verify_differentials(&p, degree), verify_extension(&p, degree)],
        Kind::Polarization => {
            if d.polarization.is_empty() {
                return Err(Error::Description("no \"polarization\" generators in the description".into()));
            }
            let gens = d.polarization_generators(&p)?;
            vec![check_polarization(&p, &gens, degree)]
        }
        Kind::LieRinehart | Kind::Prequantum => unreachable!(),
    })
}

fn cmd_verify(kind: Kind, input: &Input, degree: u32, start: Instant) -> Result<RunReport, Outcome> {
    let command = format!("verify {}", kind.to_possible_value().unwrap().get_name());
    let loaded = load(input).map_err(usage_error)?;
    let d = &loaded.description;
    let reports = match kind {
        Kind::LieRinehart => match d.field {
            Field::Rational => d.lie_rinehart::<lie_rinehart::Rational>().map(|l| vec![l.verify(degree)]),
            Field::Gaussian => d.lie_rinehart::<Gaussian>().map(|l| vec![l.verify(degree)]),
        },
        Kind::Prequantum => d.prequantum().map(|pq| vec![verify_prequantum(&pq, degree)]),
        _ => match d.field {
            Field::Rational => verify_poisson_kind::<lie_rinehart::Rational>(kind, d, degree),
            Field::Gaussian => verify_poisson_kind::<Gaussian>(kind, d, degree),
        },
    };
    match reports {
        Ok(r) => Ok(finish(&command, loaded.digest, r, None, start)),
        Err(e) => error_outcome(&command, loaded.digest, e, start),
    }
}

fn table_report(table: &CohomologyTable) -> Report {
    let mut r = Report::new("cohomology");
    r.check("d o d = 0 on every computed weight", table.dd_zero, || "a composite differential is nonzero".into());
    r
}

fn cohomology_of<S: Scalar>(
    d: &Description,
    form_max: usize,
    window: RangeInclusive<i64>,
) -> Result<(CohomologyTable, Vec<Report>), Error> {
    if d.basis.is_empty() && !d.vars.is_empty() {
        let p: PoissonAlgebra<S> = d.poisson_algebra()?;
        let table = poisson_cohomology(&p, form_max, window)?;
        let mut r = table_report(&table);
        r.push(check_pi_cocycle(&p));
        r.note("Poisson cohomology computed on the cotangent Lie-Rinehart algebra");
        Ok((table, vec![r]))
    } else {
        let l = d.lie_rinehart::<S>()?;
        let table = cohomology_dims(&l, form_max, window)?;
        let r = table_report(&table);
        Ok((table, vec![r]))
    }
}

fn cmd_cohomology(input: &Input, form_max: usize, window: RangeInclusive<i64>, start: Instant) -> Result<(RunReport, String), Outcome> {
    let command = "cohomology";
    let loaded = load(input).map_err(usage_error)?;
    let d = &loaded.description;
    let result = match d.field {
        Field::Rational => cohomology_of::<lie_rinehart::Rational>(d, form_max, window),
        Field::Gaussian => cohomology_of::<Gaussian>(d, form_max, window),
    };
    match result {
        Ok((table, reports)) => {
            let text = table.format();
            let data = serde_json::to_value(&table).ok();
            Ok((finish(command, loaded.digest, reports, data, start), text))
        }
        Err(e) => error_outcome(command, loaded.digest, e, start).map(|r| (r, String::new())),
    }
}

fn cmd_pbw(input: &Input, filtration: usize, coeff_degree: u32, start: Instant) -> Result<RunReport, Outcome> {
    let command = "pbw";
    let loaded = load(input).map_err(usage_error)?;
    let d = &loaded.description;
    let r = match d.field {
        Field::Rational => d.lie_rinehart::<lie_rinehart::Rational>().map(|l| check_pbw(&l, filtration, coeff_degree)),
        Field::Gaussian => d.lie_rinehart::<Gaussian>().map(|l| check_pbw(&l, filtration, coeff_degree)),
    };
    match r {
        Ok(r) => Ok(finish(command, loaded.digest, vec![r], None, start)),
        Err(e) => error_outcome(command, loaded.digest, e, start),
    }
}

fn cmd_dirac(input: &Input, pairs: &[String], degree: u32, start: Instant) -> Result<RunReport, Outcome> {
    let command = "dirac";
    let loaded = load(input).map_err(usage_error)?;
    let pq = match loaded.description.prequantum() {
        Ok(pq) => pq,
        Err(e) => return error_outcome(command, loaded.digest, e, start),
    };
    let alg = pq.poisson().base();
    let mut parsed = Vec::new();
    if pairs.is_empty() {
        for a in 0..alg.nvars() {
            for b in a + 1..alg.nvars() {
                parsed.push((alg.var(a), alg.var(b)));
            }
        }
    }
    for pair in pairs {
        let (f, g) = pair.split_once(',').ok_or_else(|| usage_error(format!("pair '{pair}' is not of the form f,g")))?;
        let f = alg.parse_elem(f).map_err(usage_error)?;
        let g = alg.parse_elem(g).map_err(usage_error)?;
        parsed.push((f, g));
    }
    let mut reports: Vec<Report> = parsed.iter().map(|(f, g)| check_dirac(&pq, f, g, degree)).collect();
    let mut consts = Report::new("constants");
    for c in ["1", "-3", "2/5"] {
        let cp = alg.parse_elem(c).map_err(usage_error)?;
        let op = pq.quantize(&cp);
        let ok = op == lie_rinehart::prequant::Operator::multiplication(cp.clone(), alg);
        consts.check(format!("{c} quantizes to {c}*Id"), ok, || op.format(alg));
    }
    reports.push(consts);
    Ok(finish(command, loaded.digest, reports, None, start))
}

fn cmd_costrat(args: &CostratArgs, start: Instant) -> Result<RunReport, Outcome> {
    if let Some(path) = &args.file {
        let command = "costrat --file";
        let text = std::fs::read_to_string(path).map_err(|e| usage_error(format!("cannot read {}: {e}", path.display())))?;
        let space = CostratifiedSpace::from_json(&text).map_err(usage_error)?;
        let r = verify_costratified(&space, None);
        return Ok(finish(command, digest(text.as_bytes()), vec![r], None, start));
    }
    let (ell, s, k) = (args.ell.unwrap_or(0), args.s.unwrap_or(0), args.k.unwrap_or(0));
    let command = "costrat";
    let canonical = format!("costrat ell={ell} s={s} k={k} oracle={}", args.oracle);
    let summary = costrat_summary(ell, s, k, args.oracle).map_err(usage_error)?;
    let mut r = Report::new("costratified dimensions");
    if let Some(o) = summary.oracle_dim {
        r.check(format!("invariant count {o} equals reduced dimension {}", summary.reduced_dim), o == summary.reduced_dim, || {
            format!("invariants {o} vs reduced {}", summary.reduced_dim)
        });
    }
    if let Some(odd) = summary.odd_oracle_dim {
        r.check("odd-degree invariants vanish", odd == 0, || format!("dimension {odd}"));
    }
    if s >= 2 {
        let (top, low, kernel) = restriction_profile(ell, s, k);
        r.check("restriction: dim lower = dim upper - kernel", low == top - kernel, || format!("{low} vs {top} - {kernel}"));
    }
    if ell <= lie_rinehart::orbits::MAX_EMIT_RANK {
        let space = emit_costratified(ell, k).map_err(usage_error)?;
        r.extend(verify_costratified(&space, None));
    } else {
        r.push(Check::skipped("emitted system is functorial", "rank above the emission limit"));
    }
    let data = serde_json::to_value(&summary).ok();
    Ok(finish(command, digest(canonical.as_bytes()), vec![r], data, start))
}

fn cmd_invariants(ell: usize, s: usize, degree: u32, start: Instant) -> Result<RunReport, Outcome> {
    let dim = invariant_dim(ell, s, degree).map_err(usage_error)?;
    let canonical = format!("invariants ell={ell} s={s} degree={degree}");
    let mut r = Report::new("invariants");
    r.note(format!("dim = {dim}"));
    r.push(Check::pass("invariant dimension computed"));
    let data = serde_json::json!({ "ell": ell, "s": s, "degree": degree, "dim": dim });
    Ok(finish("invariants", digest(canonical.as_bytes()), vec![r], Some(data), start))
}

pub fn run(cli: &Cli) -> Outcome {
    let start = Instant::now();
    let mut extra = String::new();
    let result = match &cli.command {
        Command::Preset { name } => {
            return match presets::preset(name) {
                Some(d) => Outcome { code: 0, stdout: d.to_json() + "\n", stderr: String::new() },
                None => usage_error(format!("unknown preset '{name}'")),
            }
        }
        Command::Verify { kind, input, degree } => cmd_verify(*kind, input, *degree, start),
        Command::Cohomology { input, form_max, poly_window } => {
            cmd_cohomology(input, *form_max, poly_window.clone(), start).map(|(r, t)| {
                extra = t;
                r
            })
        }
        Command::Pbw { input, filtration, coeff_degree } => cmd_pbw(input, *filtration, *coeff_degree, start),
        Command::Dirac { input, pairs, degree } => cmd_dirac(input, pairs, *degree, start),
        Command::Costrat(args) => cmd_costrat(args, start),
        Command::Invariants { ell, s, degree } => cmd_invariants(*ell, *s, *degree, start),
    };
    match result {
        Err(outcome) => outcome,
        Ok(report) => {
            let stdout = if cli.json {
                serde_json::to_string_pretty(&report).expect("serializable") + "\n"
            } else {
                let mut s = report.human();
                if !extra.is_empty() {
                    s.push_str(&extra);
                }
                if let Some(data) = report.data.as_ref().filter(|_| extra.is_empty()) {
                    s.push_str(&format!("{data}\n"));
                }
                s
            };
            Outcome { code: report.exit_code(), stdout, stderr: String::new() }
        }
    }
}
