use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use lusim::generic_sim::{
    decouple_ddim, decouple_qubits, simulate_generic_ddim, ConjugationSchedule, DecoupleSide,
};
use lusim::normal_form::{is_lu_equivalent, normal_form};
use lusim::numerics::{c, frobenius, identity, spectral_norm, CMatrix, Vec3};
use lusim::pauli::{decompose, nonlocal_part_bipartite, partial_trace_a};
use lusim::polyhedron::{optimal_factor, s_majorizes};
use lusim::protocol::{stroboscopic_error, verify_average, SimulationProtocol};
use lusim::strategy::{inversion_strategy, simulation_strategy};
use lusim::wire::{matrix_to_json, schedule_to_json, Hamiltonian, HamiltonianSpec, ProtocolJson};
use lusim::Error;

/// Optimal simulation of two-qubit Hamiltonians under local unitaries.
#[derive(Parser)]
#[command(name = "lusim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pauli coefficients of a two-qubit Hamiltonian.
    Decompose(Single),
    /// Canonical triple and the local unitaries reaching it.
    NormalForm(Single),
    /// Optimal time ratio for simulating TARGET with SOURCE.
    Factor(Pair),
    /// Whether SOURCE simulates TARGET at unit rate, and LU equivalence.
    Check(Pair),
    /// Emit a simulation protocol as JSON.
    Synthesize(Synth),
    /// Recompute a protocol's average-Hamiltonian residual.
    Verify(Verify),
    /// Stroboscopic operator error of a protocol.
    Strobe(Strobe),
    /// Protocol simulating -H with H.
    Invert(Invert),
    /// Twirl that averages a Hamiltonian to a local or scalar operator.
    Decouple(Decouple),
    /// Two-stage Clifford simulation protocol.
    Baseline(Synth),
    /// Simulation schedule for two d-level systems (d <= 4).
    GenericDdim(Generic),
}

#[derive(Args)]
struct Common {
    /// Print a JSON report instead of text.
    #[arg(long)]
    json: bool,
    /// Comparison threshold for pass/fail reports.
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Args)]
struct Single {
    /// Hamiltonian JSON file; standard input when omitted or "-".
    #[arg(long)]
    source: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Pair {
    #[arg(long)]
    source: PathBuf,
    #[arg(long)]
    target: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Synth {
    #[arg(long)]
    source: PathBuf,
    #[arg(long)]
    target: PathBuf,
    /// Construction to use: optimal or baseline.
    #[arg(long, default_value = "optimal")]
    strategy: String,
    /// Write the protocol here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Verify {
    /// Protocol JSON; standard input when omitted or "-".
    #[arg(long)]
    protocol: Option<PathBuf>,
    /// Overrides the source embedded in the protocol.
    #[arg(long)]
    source: Option<PathBuf>,
    /// Overrides the target embedded in the protocol.
    #[arg(long)]
    target: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Strobe {
    #[arg(long)]
    protocol: Option<PathBuf>,
    #[arg(long)]
    source: Option<PathBuf>,
    #[arg(long)]
    target: Option<PathBuf>,
    /// Repetitions of the protocol cycle.
    #[arg(long, default_value_t = 64)]
    cycles: usize,
    /// Total source time; defaults to 1/||H||.
    #[arg(long)]
    time: Option<f64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Invert {
    #[arg(long)]
    source: PathBuf,
    /// optimal or universal.
    #[arg(long, default_value = "optimal")]
    strategy: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Decouple {
    #[arg(long)]
    source: Option<PathBuf>,
    /// Local dimension; inferred from the Hamiltonian when omitted.
    #[arg(long)]
    d: Option<usize>,
    /// Twirl side A only or both sides.
    #[arg(long, default_value = "both")]
    side: String,
    /// Use the Pauli-string twirl on this many qubits per side instead.
    #[arg(long)]
    qubits: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Generic {
    #[arg(long)]
    source: PathBuf,
    #[arg(long)]
    target: PathBuf,
    #[arg(long)]
    d: Option<usize>,
    /// Seed for random pre-rotations of degenerate sources.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// A command failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_) => 2,
            Error::Contract(_) | Error::Capacity(_) => 3,
            Error::Infeasible(_) | Error::Degenerate(_) => 4,
            Error::Numeric { .. } | Error::Geometry(_) => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<Outcome, Failure>;

/// Text to print and whether a pass/fail check passed.
struct Outcome {
    text: String,
    passed: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, passed: true }
    }
}

fn read_input(path: Option<&Path>) -> Result<String, Failure> {
    let mut text = String::new();
    let res = match path {
        None => io::stdin().read_to_string(&mut text).map(|_| ()),
        Some(p) if p == Path::new("-") => io::stdin().read_to_string(&mut text).map(|_| ()),
        Some(p) => fs::read_to_string(p).map(|t| text = t),
    };
    res.map_err(|e| Failure {
        code: 2,
        message: format!(
            "cannot read {}: {e}",
            path.map_or("standard input".into(), |p| p.display().to_string())
        ),
    })?;
    Ok(text)
}

fn load(path: Option<&Path>) -> Result<Hamiltonian, Failure> {
    Ok(HamiltonianSpec::parse(&read_input(path)?)?)
}

fn load_qubits(path: Option<&Path>) -> Result<CMatrix, Failure> {
    let h = load(path)?;
    if h.dims != [2, 2] {
        return Err(Error::Contract(format!("expected a two-qubit Hamiltonian, got dims {:?}", h.dims)).into());
    }
    Ok(h.matrix)
}

fn load_protocol(path: Option<&Path>, source: Option<&Path>, target: Option<&Path>) -> Result<SimulationProtocol, Failure> {
    let doc = ProtocolJson::parse(&read_input(path)?)?;
    let source = source.map(|p| load_qubits(Some(p))).transpose()?;
    let target = target.map(|p| load_qubits(Some(p))).transpose()?;
    Ok(doc.into_protocol(source.as_ref(), target.as_ref())?)
}

fn emit(doc: &ProtocolJson, output: Option<&Path>, summary: String) -> CmdResult {
    let text = doc.to_string_pretty();
    match output {
        None => Ok(Outcome::ok(text)),
        Some(p) => {
            fs::write(p, text + "\n").map_err(|e| Failure {
                code: 1,
                message: format!("cannot write {}: {e}", p.display()),
            })?;
            Ok(Outcome::ok(format!("{summary}\nwrote {}", p.display())))
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

fn triple(v: &Vec3) -> String {
    format!("({:.6}, {:.6}, {:.6})", v[0], v[1], v[2])
}

fn cmd_decompose(a: Single) -> CmdResult {
    let d = decompose(&load_qubits(a.source.as_deref())?)?;
    let rows: Vec<[f64; 3]> = (0..3).map(|i| [d.m[(i, 0)], d.m[(i, 1)], d.m[(i, 2)]]).collect();
    if a.common.json {
        return Ok(Outcome::ok(pretty(&json!({
            "c0": d.c0, "a": [d.a[0], d.a[1], d.a[2]], "b": [d.b[0], d.b[1], d.b[2]], "M": rows,
        }))));
    }
    let mut out = format!("c0 = {:.6}\na  = {}\nb  = {}\nM  =", d.c0, triple(&d.a), triple(&d.b));
    for r in rows {
        out += &format!("\n  [{:>10.6} {:>10.6} {:>10.6}]", r[0], r[1], r[2]);
    }
    Ok(Outcome::ok(out))
}

fn cmd_normal_form(a: Single) -> CmdResult {
    let nf = normal_form(&load_qubits(a.source.as_deref())?)?;
    if a.common.json {
        return Ok(Outcome::ok(pretty(&json!({
            "h": [nf.h[0], nf.h[1], nf.h[2]],
            "U": matrix_to_json(&nf.u),
            "V": matrix_to_json(&nf.v),
        }))));
    }
    let fmt = |m: &CMatrix| {
        (0..2)
            .map(|r| {
                (0..2)
                    .map(|k| format!("{:+.6}{:+.6}i", m[(r, k)].re, m[(r, k)].im))
                    .collect::<Vec<_>>()
                    .join("  ")
            })
            .collect::<Vec<_>>()
            .join("\n     ")
    };
    Ok(Outcome::ok(format!("h = {}\nU =  {}\nV =  {}", triple(&nf.h), fmt(&nf.u), fmt(&nf.v))))
}

fn triples(a: &Pair) -> Result<(Vec3, Vec3), Failure> {
    let nf_h = normal_form(&load_qubits(Some(&a.source))?)?;
    let nf_p = normal_form(&load_qubits(Some(&a.target))?)?;
    if nf_h.is_local() {
        return Err(Error::Infeasible("source Hamiltonian is local".into()).into());
    }
    Ok((nf_h.h, nf_p.h))
}

fn cmd_factor(a: Pair) -> CmdResult {
    let (h, hp) = triples(&a)?;
    if hp.abs().max() <= lusim::normal_form::LOCAL_TOL {
        let text = if a.common.json {
            pretty(&json!({"s": null, "case": null, "tight": [], "note": "target is local"}))
        } else {
            "target is local: any factor is achievable by decoupling".to_string()
        };
        return Ok(Outcome::ok(text));
    }
    let r = optimal_factor(&hp, &h)?;
    let tight: Vec<&str> = r.tight_terms.iter().map(|t| t.name()).collect();
    if a.common.json {
        return Ok(Outcome::ok(pretty(&json!({
            "s": r.s, "case": r.face_case, "tight": tight, "ratios": r.ratios,
        }))));
    }
    Ok(Outcome::ok(format!(
        "s = {:.6}, case {}\ntight: {}\nsource h = {}\ntarget h = {}",
        r.s,
        r.face_case,
        tight.join(", "),
        triple(&h),
        triple(&hp)
    )))
}

fn cmd_check(a: Pair) -> CmdResult {
    let (h, hp) = triples(&a)?;
    let unit = s_majorizes(&hp, &h);
    let eq = is_lu_equivalent(&load_qubits(Some(&a.source))?, &load_qubits(Some(&a.target))?)?;
    if a.common.json {
        return Ok(Outcome::ok(pretty(&json!({
            "unit_rate": unit, "lu_equivalent": eq.equivalent,
            "source": [h[0], h[1], h[2]], "target": [hp[0], hp[1], hp[2]],
        }))));
    }
    let yes = |b: bool| if b { "yes" } else { "no" };
    Ok(Outcome::ok(format!(
        "simulable at unit rate: {}\nLU equivalent: {}",
        yes(unit),
        yes(eq.equivalent)
    )))
}

fn synth_with(a: Synth, strategy: &str) -> CmdResult {
    let h = load_qubits(Some(&a.source))?;
    let hp = load_qubits(Some(&a.target))?;
    let prot = simulation_strategy(strategy)?.simulate(&h, &hp)?;
    let summary = format!("s = {:.6}, {} steps", prot.s, prot.steps.len());
    emit(&ProtocolJson::from(&prot), a.output.as_deref(), summary)
}

fn pass_line(label: &str, value: f64, tol: f64) -> Outcome {
    let passed = value <= tol;
    Outcome {
        text: format!("{label} {value:.1e} ≤ {tol:e}: {}", if passed { "PASS" } else { "FAIL" }),
        passed,
    }
}

fn cmd_verify(a: Verify) -> CmdResult {
    let prot = load_protocol(a.protocol.as_deref(), a.source.as_deref(), a.target.as_deref())?;
    let tol = a.common.tolerance.unwrap_or(1e-8);
    let res = verify_average(&prot)?;
    if a.common.json {
        return Ok(Outcome {
            text: pretty(&json!({"residual": res, "tolerance": tol, "pass": res <= tol})),
            passed: res <= tol,
        });
    }
    Ok(pass_line("residual", res, tol))
}

fn cmd_strobe(a: Strobe) -> CmdResult {
    let prot = match (&a.protocol, &a.source, &a.target) {
        (None, Some(s), Some(t)) => simulation_strategy("optimal")?.simulate(&load_qubits(Some(s))?, &load_qubits(Some(t))?)?,
        _ => load_protocol(a.protocol.as_deref(), a.source.as_deref(), a.target.as_deref())?,
    };
    let time = a.time.unwrap_or_else(|| 1.0 / spectral_norm(&prot.source).max(1e-300));
    let tol = a.common.tolerance.unwrap_or(1e-3);
    let err = stroboscopic_error(&prot, time, a.cycles)?;
    if a.common.json {
        return Ok(Outcome {
            text: pretty(&json!({
                "error": err, "cycles": a.cycles, "time": time, "tolerance": tol, "pass": err <= tol,
            })),
            passed: err <= tol,
        });
    }
    let mut out = pass_line("error", err, tol);
    out.text = format!("t = {time:.6}, N = {}\n{}", a.cycles, out.text);
    Ok(out)
}

fn cmd_invert(a: Invert) -> CmdResult {
    let h = load_qubits(Some(&a.source))?;
    let prot = inversion_strategy(&a.strategy)?.invert(&h)?;
    let summary = format!("s = {:.6}, {} steps", prot.s, prot.steps.len());
    emit(&ProtocolJson::from(&prot), a.output.as_deref(), summary)
}

fn local_dim(h: &Hamiltonian, d: Option<usize>) -> Result<usize, Failure> {
    let d = d.unwrap_or(h.dims[0]);
    if h.dims != [d, d] {
        return Err(Error::Contract(format!("--d {d} does not match dims {:?}", h.dims)).into());
    }
    Ok(d)
}

fn cmd_decouple(a: Decouple) -> CmdResult {
    let h = load(a.source.as_deref())?;
    let side = DecoupleSide::parse(&a.side)
        .ok_or_else(|| Error::Parse(format!("--side must be A or both, got {:?}", a.side)))?;
    let (sch, kind) = match a.qubits {
        Some(n) => (decouple_qubits(&h.matrix, n)?, "decouple-qubits"),
        None => (decouple_ddim(&h.matrix, local_dim(&h, a.d)?, side)?, "decouple"),
    };
    let avg = sch.average(&h.matrix)?;
    let n = h.matrix.nrows();
    let want = match (a.qubits, side) {
        (None, DecoupleSide::A) => {
            let d = h.dims[0];
            lusim::numerics::kron(&identity(d), &(partial_trace_a(&h.matrix, d, d) * c(1.0 / d as f64, 0.0)))
        }
        _ => identity(n) * (h.matrix.trace() / c(n as f64, 0.0)),
    };
    let summary = format!("{} steps, residual {:.1e}", sch.len(), frobenius(&(avg - want)));
    emit(&schedule_to_json(&sch, 1.0, kind, Some(&h.matrix), None), a.output.as_deref(), summary)
}

fn cmd_generic(a: Generic) -> CmdResult {
    let h = load(Some(&a.source))?;
    let hp = load(Some(&a.target))?;
    let d = local_dim(&h, a.d)?;
    local_dim(&hp, Some(d))?;
    let g = simulate_generic_ddim(&h.matrix, &hp.matrix, d, a.seed)?;
    let res = residual(&g.schedule, &h.matrix, &hp.matrix, d, g.s)?;
    let summary = format!("s = {:.6}, {} steps, residual {:.1e}", g.s, g.schedule.len(), res);
    let doc = schedule_to_json(&g.schedule, g.s, "generic-ddim", Some(&h.matrix), Some(&hp.matrix));
    emit(&doc, a.output.as_deref(), summary)
}

fn residual(sch: &ConjugationSchedule, h: &CMatrix, hp: &CMatrix, d: usize, s: f64) -> Result<f64, Failure> {
    let avg = nonlocal_part_bipartite(&sch.average(h)?, d, d)?;
    let want = nonlocal_part_bipartite(hp, d, d)? * c(s, 0.0);
    Ok(frobenius(&(avg - want)))
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Decompose(a) => cmd_decompose(a),
        Command::NormalForm(a) => cmd_normal_form(a),
        Command::Factor(a) => cmd_factor(a),
        Command::Check(a) => cmd_check(a),
        Command::Synthesize(a) => {
            let strategy = a.strategy.clone();
            synth_with(a, &strategy)
        }
        Command::Verify(a) => cmd_verify(a),
        Command::Strobe(a) => cmd_strobe(a),
        Command::Invert(a) => cmd_invert(a),
        Command::Decouple(a) => cmd_decouple(a),
        Command::Baseline(a) => synth_with(a, "baseline"),
        Command::GenericDdim(a) => cmd_generic(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            // A closed pipe downstream is not our failure.
            let _ = writeln!(stdout, "{}", out.text);
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
