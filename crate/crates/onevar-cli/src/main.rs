//! `onevar`: command-line front end for proof search, checking,
//! interpolation, elimination, translation, and the algebra and structure
//! tools.
//!
//! Exit codes: 0 success, holds or proved; 1 refuted, countermodel found or
//! check failure; 2 unknown or budget exhausted; 3 usage or input error.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use onevar::algebra::{
    catalog_entry, countermodel_search, describe_assignment, eval_all, eval_single, expand_from_subalgebra,
    functional_power, load, parse_equation, relatively_complete_subalgebras, subuniverses, AlgError, Algebra, Equation, MLattice,
    Outcome, Profile, Scope, Term, DEFAULT_CAP,
};
use onevar::interpolation::interpolate;
use onevar::modalization::eliminate;
use onevar::proof::{check_derivation, from_json_str, render_tree, to_json, to_json_string, CalculusConfig, FoDerivation, Sequent};
use onevar::search::{prove, Budget, Verdict};
use onevar::semantics::{bounded_fo_countermodel, FoEquation, SemError, SemScope, Structure};
use onevar::syntax::{circle, parse_fo, parse_modal, star, Var};
use onevar::Code;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "onevar", version, about = "Proof search and finite-algebra tools for one-variable substructural logics")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct CalculusArg {
    /// Calculus: fle, flew, flec or flewc.
    #[arg(long, default_value = "fle", value_parser = parse_calculus)]
    calculus: CalculusConfig,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a derivation of a sequent.
    Prove {
        sequent: String,
        #[command(flatten)]
        calc: CalculusArg,
        /// Maximum number of goals expanded.
        #[arg(long)]
        budget: Option<u64>,
        /// Maximum branch length.
        #[arg(long)]
        depth: Option<usize>,
        /// Write the proof as JSON to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Check a derivation file.
    Check {
        proof: PathBuf,
        #[command(flatten)]
        calc: CalculusArg,
    },
    /// Extract an interpolant from a derivation of a partitioned sequent.
    Interp {
        proof: PathBuf,
        /// Antecedent indices of the first part, comma-separated (may be empty).
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        gamma: String,
        #[arg(long)]
        y: Var,
        #[arg(long)]
        z: Var,
        #[command(flatten)]
        calc: CalculusArg,
    },
    /// Turn a one-variable derivation into a modal certificate.
    Modalize {
        proof: PathBuf,
        #[command(flatten)]
        calc: CalculusArg,
    },
    /// Translate between one-variable and modal formulas.
    Translate {
        /// First-order to modal.
        #[arg(long, conflicts_with = "circle", required_unless_present = "circle")]
        star: bool,
        /// Modal to first-order.
        #[arg(long)]
        circle: bool,
        formula: String,
    },
    /// Finite algebra tools.
    #[command(subcommand)]
    Alg(AlgCommand),
    /// Finite first-order structure tools.
    #[command(subcommand)]
    Sem(SemCommand),
}

#[derive(Subcommand)]
enum AlgCommand {
    /// Validate an algebra file (or catalog name) under a profile.
    Validate {
        algebra: String,
        /// LAT, FLE, M-LAT or M-FLE; inferred from the file when omitted.
        #[arg(long)]
        profile: Option<Profile>,
    },
    /// List the relatively complete subalgebras.
    Subalgebras {
        algebra: String,
        /// List every subuniverse, marking the relatively complete ones.
        #[arg(long)]
        all: bool,
    },
    /// The modal expansion determined by a relatively complete subalgebra.
    Expand {
        algebra: String,
        /// Elements of the subalgebra, as indices or labels.
        #[arg(long)]
        sub: String,
    },
    /// The functional power over a `w`-element set.
    Power {
        algebra: String,
        #[arg(long)]
        w: usize,
    },
    /// Evaluate an equation under every assignment, or one given by `--at`.
    Eval {
        algebra: String,
        equation: String,
        /// Evaluate every assignment (the default without `--at`).
        #[arg(long, conflicts_with = "at")]
        all: bool,
        /// A single assignment such as `v0=½,v1=1`.
        #[arg(long)]
        at: Option<String>,
    },
    /// Search a family of m-lattices for a countermodel.
    Hunt {
        equation: String,
        /// Comma-separated: default, catalog, expansions, lattices:N, powers:W.
        #[arg(long, default_value = "default")]
        scope: Scope,
    },
}

#[derive(Subcommand)]
enum SemCommand {
    /// Evaluate a one-variable formula in a structure file.
    Eval { structure: PathBuf, formula: String },
    /// Search catalog structures for a countermodel to an equation.
    Hunt {
        goal: String,
        /// An equation every countermodel must satisfy; repeatable.
        #[arg(long)]
        assume: Vec<String>,
        /// Largest domain size.
        #[arg(long = "maxS", alias = "max-s", default_value_t = 3)]
        max_s: usize,
    },
}

fn parse_calculus(s: &str) -> Result<CalculusConfig, String> {
    CalculusConfig::preset(s).ok_or_else(|| format!("unknown calculus `{s}` (expected fle, flew, flec or flewc)"))
}

/// A failed command: exit status, error code and message.
struct Failure {
    exit: u8,
    code: Option<Code>,
    msg: String,
}

impl Failure {
    fn input(msg: impl Into<String>) -> Self {
        Failure { exit: 3, code: None, msg: msg.into() }
    }

    fn coded(exit: u8, code: Code, msg: impl std::fmt::Display) -> Self {
        Failure { exit, code: Some(code), msg: msg.to_string() }
    }
}

/// Algebra errors met while preparing input are input errors, except that
/// a size cap means the question was too big to answer.
impl From<AlgError> for Failure {
    fn from(e: AlgError) -> Self {
        Failure::coded(if e.code() == Code::Cap { 2 } else { 3 }, e.code(), e)
    }
}

impl From<SemError> for Failure {
    fn from(e: SemError) -> Self {
        Failure::coded(if e.code() == Code::Cap { 2 } else { 3 }, e.code(), e)
    }
}

impl From<onevar::syntax::SyntaxError> for Failure {
    fn from(e: onevar::syntax::SyntaxError) -> Self {
        Failure::coded(3, e.code(), e)
    }
}

/// A finished command: exit status and both renderings of the result.
struct Report {
    exit: u8,
    text: String,
    json: Value,
}

impl Report {
    fn new(exit: u8, text: impl Into<String>, json: Value) -> Self {
        Report { exit, text: text.into(), json }
    }
}

type Res = Result<Report, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn read_proof(path: &Path) -> Result<FoDerivation, Failure> {
    from_json_str(&read(path)?).map_err(|e| Failure::coded(1, e.code(), e))
}

fn cmd_prove(sequent: &str, cfg: &CalculusConfig, budget: Option<u64>, depth: Option<usize>, emit: Option<&Path>) -> Res {
    let s: Sequent<_> = Sequent::parse(sequent)?;
    let mut b = Budget::default();
    if let Some(n) = budget {
        b.max_nodes = n;
    }
    if let Some(d) = depth {
        b.max_depth = d;
    }
    Ok(match prove(&s, cfg, &b) {
        Verdict::Proved(d) => {
            if let Some(path) = emit {
                fs::write(path, to_json_string(&d) + "\n").map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?;
            }
            Report::new(0, format!("proved {s}\n{}", render_tree(&d)), json!({"verdict": "proved", "proof": to_json(&d)}))
        }
        Verdict::Refuted => Report::new(1, format!("refuted {s}: complete search found no derivation"), json!({"verdict": "refuted"})),
        Verdict::Unknown(diag) => {
            let code = diag.code.map(|c| c.as_str());
            let text = format!("unknown {s}: {} after {} nodes{}", diag.reason, diag.nodes, code.map(|c| format!(" ({c})")).unwrap_or_default());
            Report::new(2, text, json!({"verdict": "unknown", "code": code, "nodes": diag.nodes, "reason": diag.reason}))
        }
    })
}

fn cmd_check(path: &Path, cfg: &CalculusConfig) -> Res {
    let d = read_proof(path)?;
    check_derivation(&d, cfg).map_err(|e| Failure::coded(1, e.code, e))?;
    let m = d.metrics();
    Ok(Report::new(
        0,
        format!("ok {} (md {}, ht {})", d.conclusion, m.md, m.ht),
        json!({"status": "ok", "conclusion": d.conclusion.to_string(), "md": m.md, "ht": m.ht}),
    ))
}

fn parse_indices(s: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Failure::input(format!("bad index `{t}`"))))
        .collect()
}

fn cmd_interp(path: &Path, gamma: &str, y: Var, z: Var, cfg: &CalculusConfig) -> Res {
    let d = read_proof(path)?;
    let gamma = parse_indices(gamma)?;
    let r = interpolate(&d, &gamma, y, z, cfg).map_err(|e| Failure::coded(if e.code == Code::Unchecked { 1 } else { 3 }, e.code, e))?;
    let text = format!("chi: {}\nd1: {}\nd2: {}", r.chi, r.d1.conclusion, r.d2.conclusion);
    Ok(Report::new(0, text, json!({"chi": r.chi.to_string(), "d1": to_json(&r.d1), "d2": to_json(&r.d2)})))
}

fn cmd_modalize(path: &Path, cfg: &CalculusConfig) -> Res {
    let d = read_proof(path)?;
    let cert = eliminate(&d, cfg).map_err(|e| Failure::coded(if e.code() == Code::NotOneVar { 3 } else { 1 }, e.code(), e))?;
    Ok(Report::new(0, format!("certificate {}\n{}", cert.conclusion, render_tree(&cert)), to_json(&cert)))
}

fn cmd_translate(to_modal: bool, formula: &str) -> Res {
    let out = if to_modal { star(&parse_fo(formula)?).to_string() } else { circle(&parse_modal(formula)?).to_string() };
    Ok(Report::new(0, out.clone(), json!({"input": formula, "output": out})))
}

/// The JSON text of an algebra given as a file path or a catalog name.
fn algebra_text(spec: &str, base: Option<&Path>) -> Result<String, Failure> {
    let path = match base {
        Some(dir) if Path::new(spec).is_relative() => dir.join(spec),
        _ => PathBuf::from(spec),
    };
    if path.exists() {
        return read(&path);
    }
    let name = spec.strip_suffix(".json").unwrap_or(spec);
    match catalog_entry(name) {
        Some(e) if e.modal => Ok(e.algebra.to_json().to_string()),
        Some(e) => Ok(e.algebra.base.to_json().to_string()),
        None => Err(Failure::input(format!("`{spec}` is neither a file nor a catalog algebra"))),
    }
}

/// Decodes an algebra file and validates it under the profile its contents
/// imply. Returns the m-lattice (identity modalities when none are given)
/// and whether modal tables were present.
fn open_algebra(spec: &str) -> Result<(MLattice, bool), Failure> {
    let text = algebra_text(spec, None)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Failure::coded(3, Code::Schema, format!("{spec}: {e}")))?;
    let (alg, modal) = Algebra::from_json(&v)?;
    let profile = infer_profile(&alg, modal.is_some());
    Ok((load(&text, profile)?, modal.is_some()))
}

fn infer_profile(a: &Algebra, modal: bool) -> Profile {
    match (modal, a.signature().has_fle()) {
        (true, true) => Profile::MFle,
        (true, false) => Profile::MLat,
        (false, true) => Profile::Fle,
        (false, false) => Profile::Lat,
    }
}

fn labels(a: &Algebra, xs: &[usize]) -> Vec<String> {
    xs.iter().map(|&x| a.label(x).to_string()).collect()
}

fn element(a: &Algebra, s: &str) -> Result<usize, Failure> {
    a.element(s)
        .or_else(|| s.parse().ok().filter(|&i: &usize| i < a.size()))
        .ok_or_else(|| Failure::input(format!("`{s}` is not an element of {}", a.name)))
}

fn cmd_validate(spec: &str, profile: Option<Profile>) -> Res {
    let text = algebra_text(spec, None)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Failure::coded(3, Code::Schema, format!("{spec}: {e}")))?;
    let (alg, modal) = Algebra::from_json(&v)?;
    let profile = profile.unwrap_or_else(|| infer_profile(&alg, modal.is_some()));
    let name = profile_name(profile);
    match load(&text, profile) {
        Ok(m) => Ok(Report::new(0, format!("valid {name}: {}", m.base), json!({"valid": true, "profile": name}))),
        Err(AlgError::Violation { condition, witness }) => Ok(Report::new(
            1,
            format!("invalid {name}: condition `{condition}` fails at ({})", witness.join(", ")),
            json!({"valid": false, "profile": name, "condition": condition, "witness": witness}),
        )),
        Err(e) => Err(e.into()),
    }
}

fn profile_name(p: Profile) -> &'static str {
    match p {
        Profile::Lat => "LAT",
        Profile::Fle => "FLE",
        Profile::MLat => "M-LAT",
        Profile::MFle => "M-FLE",
    }
}

fn set_text(a: &Algebra, s: &[usize]) -> String {
    format!("{{{}}}", labels(a, s).join(", "))
}

fn cmd_subalgebras(spec: &str, all: bool) -> Res {
    let (m, _) = open_algebra(spec)?;
    let a = &m.base;
    let complete = relatively_complete_subalgebras(a)?;
    let sets = if all { subuniverses(a)? } else { complete.clone() };
    let mut text = String::new();
    let mut rows = Vec::new();
    for s in &sets {
        let rc = complete.contains(s);
        let mark = if all && rc { "  relatively complete" } else { "" };
        let _ = writeln!(text, "{}{mark}", set_text(a, s));
        rows.push(json!({"elements": labels(a, s), "relatively_complete": rc}));
    }
    Ok(Report::new(0, text.trim_end(), Value::Array(rows)))
}

fn cmd_expand(spec: &str, sub: &str) -> Res {
    let (m, _) = open_algebra(spec)?;
    let a = &m.base;
    let s: Vec<usize> = sub.split(',').map(str::trim).filter(|t| !t.is_empty()).map(|t| element(a, t)).collect::<Result<_, _>>()?;
    match expand_from_subalgebra(a, &s) {
        Ok(e) => {
            let v = e.to_json();
            Ok(Report::new(0, serde_json::to_string_pretty(&v).expect("JSON values serialize"), v))
        }
        Err(e @ AlgError::NotRelComplete(_)) => Err(Failure::coded(1, e.code(), e)),
        Err(e) => Err(e.into()),
    }
}

fn cmd_power(spec: &str, w: usize) -> Res {
    let (m, _) = open_algebra(spec)?;
    if w == 0 {
        return Err(Failure::input("--w must be at least 1"));
    }
    let p = functional_power(&m.base, w)?;
    let v = p.to_json();
    Ok(Report::new(0, serde_json::to_string_pretty(&v).expect("JSON values serialize"), v))
}

fn is_modal(t: &Term) -> bool {
    match t {
        Term::Var(_) => false,
        Term::Op(_, args) => args.iter().any(is_modal),
        Term::Box(_) | Term::Dia(_) => true,
    }
}

fn equation_is_modal(eq: &Equation) -> bool {
    let premise = eq.premise.as_ref().is_some_and(|(l, _, r)| is_modal(l) || is_modal(r));
    premise || is_modal(&eq.lhs) || is_modal(&eq.rhs)
}

fn assignment_text(a: &Algebra, vars: &[u32], values: &[usize]) -> String {
    describe_assignment(a, vars, values).iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(", ")
}

fn cmd_eval(spec: &str, equation: &str, at: Option<&str>) -> Res {
    let (m, modal) = open_algebra(spec)?;
    let eq = parse_equation(equation)?;
    if equation_is_modal(&eq) && !modal {
        return Err(Failure::coded(3, Code::Signature, format!("{} has no modal tables", m.name())));
    }
    let a = &m.base;
    let vars = eq.vars();
    if let Some(at) = at {
        let mut given = std::collections::BTreeMap::new();
        for part in at.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| Failure::input(format!("bad assignment `{part}`")))?;
            let var = k.trim().strip_prefix('v').and_then(|n| n.parse::<u32>().ok()).ok_or_else(|| Failure::input(format!("bad variable `{k}`")))?;
            given.insert(var, element(a, v.trim())?);
        }
        let values: Vec<usize> =
            vars.iter().map(|v| given.get(v).copied().ok_or_else(|| Failure::input(format!("no value for v{v}")))).collect::<Result<_, _>>()?;
        let s = eval_single(&m, &eq, &values)?;
        let text = format!(
            "{} at {}: lhs {}, rhs {}",
            if s.holds { "holds" } else { "fails" },
            assignment_text(a, &vars, &values),
            a.label(s.lhs),
            a.label(s.rhs)
        );
        let j = json!({"holds": s.holds, "premise_holds": s.premise_holds, "lhs": a.label(s.lhs), "rhs": a.label(s.rhs)});
        return Ok(Report::new(if s.holds { 0 } else { 1 }, text, j));
    }
    Ok(match eval_all(&m, &eq, DEFAULT_CAP)? {
        Outcome::Holds => {
            let n = a.size().pow(vars.len() as u32);
            Report::new(0, format!("holds on all {n} assignments in {}", m.name()), json!({"holds": true, "assignments": n}))
        }
        Outcome::Fails { vars, values, lhs, rhs } => Report::new(
            1,
            format!("countermodel {}: {} vs {}", assignment_text(a, &vars, &values), a.label(lhs), a.label(rhs)),
            json!({"holds": false, "assignment": describe_assignment(a, &vars, &values), "lhs": a.label(lhs), "rhs": a.label(rhs)}),
        ),
    })
}

fn cmd_alg_hunt(equation: &str, scope: &Scope) -> Res {
    let eq = parse_equation(equation)?;
    Ok(match countermodel_search(&eq, scope, DEFAULT_CAP)? {
        None => Report::new(0, "no countermodel within scope", json!({"countermodel": null})),
        Some(h) => {
            let a = &h.algebra.base;
            Report::new(
                1,
                format!("countermodel in {}: {}: {} vs {}", h.algebra.name(), assignment_text(a, &h.vars, &h.values), a.label(h.lhs), a.label(h.rhs)),
                json!({"countermodel": {
                    "algebra": h.algebra.name(),
                    "assignment": describe_assignment(a, &h.vars, &h.values),
                    "lhs": a.label(h.lhs),
                    "rhs": a.label(h.rhs),
                    "tables": h.algebra.to_json(),
                }}),
            )
        }
    })
}

fn cmd_sem_eval(path: &Path, formula: &str) -> Res {
    let v: Value = serde_json::from_str(&read(path)?).map_err(|e| Failure::coded(3, Code::Schema, format!("{}: {e}", path.display())))?;
    let dir = path.parent().map(Path::to_path_buf);
    let resolve = |spec: &str| -> Result<Algebra, SemError> {
        let text = algebra_text(spec, dir.as_deref()).map_err(|f| SemError::Format(f.msg))?;
        let v: Value = serde_json::from_str(&text).map_err(|e| SemError::Format(format!("{spec}: {e}")))?;
        let (alg, _) = Algebra::from_json(&v)?;
        alg.validate(alg.signature().has_fle())?;
        Ok(alg)
    };
    let st = Structure::from_json(&v, &resolve)?;
    let phi = parse_fo(formula)?;
    let vals = labels(&st.algebra, &st.eval_fo(&phi)?);
    Ok(Report::new(0, format!("[{}]", vals.join(", ")), json!({"structure": st.describe(), "values": vals})))
}

fn cmd_sem_hunt(goal: &str, assume: &[String], max_s: usize) -> Res {
    let goal = FoEquation::parse(goal)?;
    let theory = assume.iter().map(|t| FoEquation::parse(t)).collect::<Result<Vec<_>, _>>()?;
    let scope = SemScope { max_domain: max_s, ..SemScope::default() };
    Ok(match bounded_fo_countermodel(&theory, &goal, &scope)? {
        None => Report::new(0, format!("no countermodel with |S| <= {max_s}"), json!({"countermodel": null})),
        Some(h) => {
            let a = &h.structure.algebra;
            let (l, r) = (labels(a, &h.lhs), labels(a, &h.rhs));
            Report::new(
                1,
                format!("countermodel {}: lhs [{}] vs rhs [{}]", h.structure.describe(), l.join(", "), r.join(", ")),
                json!({"countermodel": {
                    "algebra": a.name,
                    "S": h.structure.domain,
                    "I": h.structure.interp.iter().map(|(p, v)| (format!("P{p}"), json!(labels(a, v)))).collect::<serde_json::Map<_, _>>(),
                    "lhs": l,
                    "rhs": r,
                }}),
            )
        }
    })
}

fn run(cli: &Cli) -> Res {
    match &cli.command {
        Command::Prove { sequent, calc, budget, depth, emit } => cmd_prove(sequent, &calc.calculus, *budget, *depth, emit.as_deref()),
        Command::Check { proof, calc } => cmd_check(proof, &calc.calculus),
        Command::Interp { proof, gamma, y, z, calc } => cmd_interp(proof, gamma, *y, *z, &calc.calculus),
        Command::Modalize { proof, calc } => cmd_modalize(proof, &calc.calculus),
        Command::Translate { star, formula, .. } => cmd_translate(*star, formula),
        Command::Alg(cmd) => match cmd {
            AlgCommand::Validate { algebra, profile } => cmd_validate(algebra, *profile),
            AlgCommand::Subalgebras { algebra, all } => cmd_subalgebras(algebra, *all),
            AlgCommand::Expand { algebra, sub } => cmd_expand(algebra, sub),
            AlgCommand::Power { algebra, w } => cmd_power(algebra, *w),
            AlgCommand::Eval { algebra, equation, at, .. } => cmd_eval(algebra, equation, at.as_deref()),
            AlgCommand::Hunt { equation, scope } => cmd_alg_hunt(equation, scope),
        },
        Command::Sem(cmd) => match cmd {
            SemCommand::Eval { structure, formula } => cmd_sem_eval(structure, formula),
            SemCommand::Hunt { goal, assume, max_s } => cmd_sem_hunt(goal, assume, *max_s),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let pretty = |v: &Value| serde_json::to_string_pretty(v).expect("JSON values serialize");
    // Write errors (such as a closed pipe) are ignored: the exit code stands.
    match run(&cli) {
        Ok(r) => {
            let out = match cli.format {
                Format::Text => r.text.trim_end().to_string(),
                Format::Json => pretty(&r.json),
            };
            let _ = writeln!(std::io::stdout(), "{out}");
            ExitCode::from(r.exit)
        }
        Err(f) => {
            let code = f.code.map(Code::as_str);
            let _ = match cli.format {
                Format::Text => writeln!(std::io::stderr(), "error: {}{}", code.map(|c| format!("{c}: ")).unwrap_or_default(), f.msg),
                Format::Json => writeln!(std::io::stdout(), "{}", pretty(&json!({"error": {"code": code, "message": f.msg}}))),
            };
            ExitCode::from(f.exit)
        }
    }
}
