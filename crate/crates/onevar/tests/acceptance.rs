//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

mod common;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use onevar::algebra::{
    box_image, builtin, catalog, catalog_entry, eval_all, eval_single, expand_from_subalgebra, expansions, functional_power,
    relatively_complete_subalgebras, small_lattices, Algebra, Equation, MLattice, Outcome, Rel, DEFAULT_CAP,
};
use onevar::gen::Gen;
use onevar::interpolation::interpolate;
use onevar::modalization::{check_modal_derivation, eliminate, ModalDerivation};
use onevar::proof::{check_derivation, from_json_str, CalculusConfig, FoDerivation, FoSequent, Sequent};
use onevar::search::{prove, Budget, Verdict};
use onevar::semantics::{bounded_fo_countermodel, check_bridge_in, modal_term, refute_le, FoEquation, SemError, SemScope, Structure};
use onevar::syntax::{circle, star, Formula, Modal, Var};
use rand::Rng;

use common::{all_fo_rule_names, config, matching_algebras, THEOREMS};

fn report(n: u32, ok: bool, detail: impl std::fmt::Display) {
    println!("criterion {n:>2}: {} {detail}", if ok { "PASS" } else { "FAIL" });
}

fn finish(n: u32, failures: &[String], detail: impl std::fmt::Display) {
    report(n, failures.is_empty(), detail);
    assert!(failures.is_empty(), "criterion {n}:\n{}", failures.join("\n"));
}

fn sequent(text: &str) -> FoSequent {
    Sequent::parse(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn proof_of(text: &str, cfg_name: &str) -> (Verdict, Duration) {
    let start = Instant::now();
    let v = prove(&sequent(text), &config(cfg_name), &Budget::default());
    (v, start.elapsed())
}

#[test]
fn c01_lukasiewicz_counterexample() {
    let start = Instant::now();
    let m = catalog_entry("l3m").expect("l3m").algebra;
    let half = m.base.element("½").expect("½");
    let s = eval_single(&m, &builtin("dia-mul").expect("builtin"), &[half]).expect("evaluates");
    let cd = builtin("constant-domain").expect("builtin");
    let n_vars = cd.vars().len();
    let mut assignments = 0;
    let mut cd_fail = Vec::new();
    let mut values = vec![0; n_vars];
    loop {
        assignments += 1;
        if !eval_single(&m, &cd, &values).expect("evaluates").holds {
            cd_fail.push(values.clone());
        }
        let Some(i) = (0..n_vars).rev().find(|&i| values[i] + 1 < m.size()) else { break };
        values[i] += 1;
        values[i + 1..].iter_mut().for_each(|v| *v = 0);
    }
    let elapsed = start.elapsed();
    let mut failures = Vec::new();
    if (m.base.label(s.lhs), m.base.label(s.rhs)) != ("1", "0") {
        failures.push(format!("<>½*<>½ = {}, <>(½*½) = {}", m.base.label(s.lhs), m.base.label(s.rhs)));
    }
    if assignments != 9 || !cd_fail.is_empty() {
        failures.push(format!("constant-domain: {assignments} assignments, failures {cd_fail:?}"));
    }
    if eval_all(&m, &cd, DEFAULT_CAP).expect("evaluates") != Outcome::Holds {
        failures.push("constant-domain fails under eval_all".into());
    }
    if elapsed >= Duration::from_secs(1) {
        failures.push(format!("took {elapsed:?}"));
    }
    finish(1, &failures, format!("<>½*<>½ = 1, <>(½*½) = 0; constant-domain holds on {assignments} assignments ({elapsed:.2?})"));
}

#[test]
fn c02_translation_round_trip() {
    let start = Instant::now();
    let mut g = Gen::new(2);
    let mut failures = Vec::new();
    for _ in 0..1000 {
        let phi = g.formula(8, &[Var::X]);
        if circle(&star(&phi)) != phi {
            failures.push(format!("circle(star({phi})) = {}", circle(&star(&phi))));
        }
        let alpha = g.modal(8);
        if star(&circle(&alpha)) != alpha {
            failures.push(format!("star(circle({alpha})) = {}", star(&circle(&alpha))));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(5) {
        failures.push(format!("took {elapsed:?}"));
    }
    finish(2, &failures, format!("1000 formulas per direction round-trip ({elapsed:.2?})"));
}

#[derive(serde::Deserialize)]
struct ManifestEntry {
    file: String,
    calculus: String,
    expect: String,
}

#[test]
fn c03_checker_corpus() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/checker");
    let manifest: Vec<ManifestEntry> =
        serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).expect("manifest")).expect("manifest parses");
    let mut failures = Vec::new();
    let (mut accepted, mut rejected) = (0, 0);
    let mut used = BTreeSet::new();
    for entry in &manifest {
        let text = fs::read_to_string(dir.join(&entry.file)).expect("corpus file");
        let outcome = from_json_str::<Formula>(&text)
            .map_err(|e| e.code())
            .and_then(|d| check_derivation(&d, &config(&entry.calculus)).map(|()| d).map_err(|e| e.code));
        match (&outcome, entry.expect.as_str()) {
            (Ok(d), "ok") => {
                accepted += 1;
                used.extend(d.rules().into_iter().map(|r| r.name()));
            }
            (Err(code), want) if code.as_str() == want => rejected += 1,
            (got, want) => failures.push(format!("{}: expected {want}, got {:?}", entry.file, got.as_ref().map(|_| "ok"))),
        }
    }
    let missing: Vec<_> = all_fo_rule_names().into_iter().filter(|r| !used.contains(r)).collect();
    if !missing.is_empty() {
        failures.push(format!("rules not exercised: {missing:?}"));
    }
    if accepted < 20 || rejected < 10 {
        failures.push(format!("{accepted} accepted and {rejected} rejected; need 20 and 10"));
    }
    finish(3, &failures, format!("{accepted} derivations accepted, {rejected} mutants rejected, all 22 rules exercised"));
}

#[test]
fn c04_prover_theorems() {
    let mut failures = Vec::new();
    let required = [
        "forall x (P0(x) -> forall x P1(x)) |- exists x P0(x) -> forall x P1(x)",
        "exists x P0(x) -> forall x P1(x) |- forall x (P0(x) -> forall x P1(x))",
        "forall x (P0(x) & P1(x)) |- forall x P0(x) & forall x P1(x)",
        "forall x P0(x) & forall x P1(x) |- forall x (P0(x) & P1(x))",
        "forall x P0(x) |- exists x P0(x)",
        "P0(x) |- P0(x) * P0(x)",
    ];
    for r in required {
        if !THEOREMS.iter().any(|(t, _)| *t == r) {
            failures.push(format!("corpus lacks {r}"));
        }
    }
    let mut slowest = Duration::ZERO;
    for (text, cfg) in THEOREMS {
        let (v, t) = proof_of(text, cfg);
        slowest = slowest.max(t);
        match v {
            Verdict::Proved(d) => {
                if let Err(e) = check_derivation(&d, &config(cfg)) {
                    failures.push(format!("{text}: proof does not check: {e}"));
                }
                if d.conclusion != sequent(text) {
                    failures.push(format!("{text}: proof concludes {}", d.conclusion));
                }
            }
            other => failures.push(format!("{text} under {cfg}: {other:?}")),
        }
        if t >= Duration::from_secs(5) {
            failures.push(format!("{text}: took {t:?}"));
        }
    }
    let (v, _) = proof_of("P0(x) |- P0(x) * P0(x)", "fle");
    if v != Verdict::Refuted {
        failures.push(format!("FLec-only sequent under fle: {v:?}"));
    }
    finish(4, &failures, format!("{} theorems proved (slowest {slowest:.2?}); P0(x) |- P0(x) * P0(x) refuted under fle", THEOREMS.len()));
}

const CONFIGS: [&str; 4] = ["fle", "flew", "flec", "flewc"];

#[test]
fn c05_interpolation_contract() {
    let mut g = Gen::new(5);
    let pool = [Var::Y(1), Var::Y(2), Var::Y(3)];
    let mut failures = Vec::new();
    let mut done = 0;
    let mut attempts = 0;
    while done < 200 && attempts < 10_000 {
        attempts += 1;
        let cfg = config(CONFIGS[attempts % 4]);
        let d = g.derivation(5, &pool, &cfg);
        let Some((gamma, y, z)) = g.partition(&d.conclusion, &pool) else { continue };
        done += 1;
        let md = d.metrics().md;
        let w: BTreeSet<Var> = d
            .conclusion
            .ante()
            .iter()
            .chain(d.conclusion.succ())
            .flat_map(Formula::free_vars)
            .filter(|v| *v != y && *v != z)
            .collect();
        let what = || format!("{} with gamma {gamma:?}, y {y}, z {z}", d.conclusion);
        match interpolate(&d, &gamma, y, z, &cfg) {
            Ok(i) => {
                if !i.chi.free_vars().is_subset(&w) {
                    failures.push(format!("{}: chi {} escapes {w:?}", what(), i.chi));
                }
                for (k, sub) in [&i.d1, &i.d2].into_iter().enumerate() {
                    if let Err(e) = check_derivation(sub, &cfg) {
                        failures.push(format!("{}: d{} does not check: {e}", what(), k + 1));
                    }
                    if sub.metrics().md > md {
                        failures.push(format!("{}: md(d{}) = {} > {md}", what(), k + 1, sub.metrics().md));
                    }
                }
            }
            Err(e) => failures.push(format!("{}: {e}", what())),
        }
    }
    if done < 200 {
        failures.push(format!("only {done} partitioned sequents generated"));
    }
    finish(5, &failures, format!("{done} partitioned sequents interpolated"));
}

/// Functional powers over one to three points of the catalog algebras
/// matching `cfg`.
fn small_powers(cfg: &CalculusConfig) -> Vec<MLattice> {
    matching_algebras(cfg).into_iter().flat_map(|a| (1..=3).map(move |w| functional_power(&a, w).expect("power"))).collect()
}

/// Proofs of one-variable sequents: the theorem corpus plus search proofs of
/// generated sequents.
fn one_variable_proofs() -> (Vec<(FoDerivation, CalculusConfig)>, usize) {
    let mut out: Vec<(FoDerivation, CalculusConfig)> = Vec::new();
    for (text, cfg) in THEOREMS {
        if let Verdict::Proved(d) = proof_of(text, cfg).0 {
            out.push((d, config(cfg)));
        }
    }
    let corpus = out.len();
    let mut g = Gen::new(6);
    let mut seen = HashSet::new();
    let budget = Budget { max_nodes: 50_000, ..Budget::default() };
    let mut attempts = 0;
    while out.len() < corpus + 100 && attempts < 5_000 {
        attempts += 1;
        let cfg = config(CONFIGS[attempts % 4]);
        let s = g.derivation(4, &[Var::X], &cfg).conclusion;
        if !seen.insert(s.clone()) {
            continue;
        }
        if let Verdict::Proved(d) = prove(&s, &cfg, &budget) {
            out.push((d, cfg));
        }
    }
    (out, corpus)
}

fn fused_equation(s: &Sequent<Modal>) -> Equation {
    let (l, r) = s.fuse();
    Equation::new(modal_term(&l), Rel::Le, modal_term(&r))
}

#[test]
fn c06_elimination_contract() {
    let (proofs, corpus) = one_variable_proofs();
    let mut powers: BTreeMap<String, Vec<MLattice>> = BTreeMap::new();
    let mut failures = Vec::new();
    let mut checked: HashSet<(String, String)> = HashSet::new();
    let mut internal = 0;
    for (d, cfg) in &proofs {
        let key = format!("{cfg:?}");
        let powers = powers.entry(key.clone()).or_insert_with(|| small_powers(cfg));
        let cert: ModalDerivation = match eliminate(d, cfg) {
            Ok(c) => c,
            Err(e) => {
                failures.push(format!("{}: {e}", d.conclusion));
                continue;
            }
        };
        if let Err(e) = check_modal_derivation(&cert, cfg) {
            failures.push(format!("{}: certificate does not check: {e}", d.conclusion));
        }
        let want = Sequent::new(d.conclusion.ante().iter().map(star).collect(), d.conclusion.succ().map(star));
        if cert.conclusion != want {
            failures.push(format!("{}: certificate concludes {}", d.conclusion, cert.conclusion));
        }
        let mut sequents = Vec::new();
        cert.visit(&mut |n| sequents.push(n.conclusion.clone()));
        for s in sequents {
            internal += 1;
            let eq = fused_equation(&s);
            if eq.vars().len() > 3 {
                failures.push(format!("{s}: more than three atoms"));
                continue;
            }
            if !checked.insert((key.clone(), eq.to_string())) {
                continue;
            }
            for m in powers.iter() {
                match eval_all(m, &eq, DEFAULT_CAP) {
                    Ok(Outcome::Holds) => {}
                    other => failures.push(format!("{s} in {}: {other:?}", m.name())),
                }
            }
        }
    }
    if corpus < 30 || proofs.len() < corpus + 100 {
        failures.push(format!("{corpus} corpus proofs and {} search proofs", proofs.len() - corpus));
    }
    finish(
        6,
        &failures,
        format!(
            "{corpus} corpus + {} search proofs eliminated; {internal} internal sequents ({} distinct) valid in every matching functional power",
            proofs.len() - corpus,
            checked.len(),
        ),
    );
}

/// Every pair of box and dia tables with `[]a <= a <= <>a` that passes
/// validation, found by enumerating all candidate tables.
fn brute_force_expansions(a: &Algebra, fle: bool) -> BTreeSet<(Vec<usize>, Vec<usize>)> {
    let n = a.size();
    let below: Vec<Vec<usize>> = (0..n).map(|x| (0..n).filter(|&y| a.le(y, x)).collect()).collect();
    let above: Vec<Vec<usize>> = (0..n).map(|x| (0..n).filter(|&y| a.le(x, y)).collect()).collect();
    let tables = |choices: &[Vec<usize>]| {
        let mut out = vec![Vec::new()];
        for c in choices {
            out = out.iter().flat_map(|t: &Vec<usize>| c.iter().map(move |&v| [t.clone(), vec![v]].concat())).collect();
        }
        out
    };
    let (boxes, dias) = (tables(&below), tables(&above));
    let mut found = BTreeSet::new();
    for b in &boxes {
        for d in &dias {
            let Ok(m) = MLattice::new(a.clone(), b.clone(), d.clone()) else { continue };
            if m.validate(fle).is_ok() {
                found.insert((b.clone(), d.clone()));
            }
        }
    }
    found
}

#[test]
fn c07_correspondence_bijection() {
    let start = Instant::now();
    let mut algebras: Vec<(Algebra, bool)> = small_lattices(5).into_iter().map(|a| (a, false)).collect();
    algebras.extend(catalog().into_iter().map(|e| e.algebra.base).filter(|a| a.signature().has_fle() && a.size() <= 4).map(|a| (a, true)));
    let mut failures = Vec::new();
    let mut total = 0;
    for (a, fle) in &algebras {
        let oracle = brute_force_expansions(a, *fle);
        let exps = expansions(a).expect("expansions");
        let got: BTreeSet<_> = exps.iter().map(|m| (m.box_table().to_vec(), m.dia_table().to_vec())).collect();
        if got != oracle || got.len() != exps.len() {
            failures.push(format!("{}: expansions {got:?}, oracle {oracle:?}", a.name));
        }
        for m in &exps {
            total += 1;
            if let Err(e) = m.validate(*fle) {
                failures.push(format!("{}: {e}", m.name()));
            }
            if let Some(v) = m.derived_violation() {
                failures.push(format!("{}: derived condition {} fails", m.name(), v.condition));
            }
            match box_image(m).and_then(|s| expand_from_subalgebra(a, &s)) {
                Ok(back) if back.box_table() == m.box_table() && back.dia_table() == m.dia_table() => {}
                other => failures.push(format!("{}: expand(box_image) gives {other:?}", m.name())),
            }
        }
        for s in relatively_complete_subalgebras(a).expect("subalgebras") {
            match expand_from_subalgebra(a, &s).and_then(|m| box_image(&m)) {
                Ok(back) if back == s => {}
                other => failures.push(format!("{}: box_image(expand({s:?})) gives {other:?}", a.name)),
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(60) {
        failures.push(format!("took {elapsed:?}"));
    }
    finish(7, &failures, format!("{} algebras, {total} expansions match the brute-force oracle ({elapsed:.2?})", algebras.len()));
}

#[test]
fn c08_bridge_property() {
    let bases: Vec<Algebra> = catalog().into_iter().map(|e| e.algebra.base).collect();
    let mut powers: BTreeMap<(usize, usize), MLattice> = BTreeMap::new();
    let mut g = Gen::new(8);
    let mut failures = Vec::new();
    let mut samples = 0;
    while samples < 500 {
        let ai = g.rng().gen_range(0..bases.len());
        let domain = g.rng().gen_range(1..=3);
        let a = &bases[ai];
        let st: Structure = g.structure(a, domain);
        let phi = g.formula(6, &[Var::X]);
        let power = powers.entry((ai, domain)).or_insert_with(|| functional_power(a, domain).expect("power"));
        match check_bridge_in(&st, power, &phi) {
            Ok(true) => samples += 1,
            Ok(false) => {
                samples += 1;
                failures.push(format!("{}: {phi}", st.describe()));
            }
            // A lattice without the residuated connectives: draw again.
            Err(SemError::Algebra(e)) if e.code() == onevar::Code::Signature => {}
            Err(e) => failures.push(format!("{}: {phi}: {e}", st.describe())),
        }
    }
    finish(8, &failures, format!("{samples} bridge samples agree pointwise"));
}

#[test]
fn c09_soundness_sampling() {
    let (proofs, _) = one_variable_proofs();
    let mut failures = Vec::new();
    let mut structures_per = BTreeMap::new();
    for (d, cfg) in &proofs {
        let algebras = matching_algebras(cfg);
        structures_per.entry(format!("{cfg:?}")).or_insert(algebras.len());
        let scope = SemScope { algebras, max_domain: 3, ..SemScope::default() };
        let (l, r) = d.conclusion.fuse();
        match refute_le(&l, &r, &scope) {
            Ok(None) => {}
            Ok(Some(st)) => failures.push(format!("{} fails in {}", d.conclusion, st.describe())),
            Err(e) => failures.push(format!("{}: {e}", d.conclusion)),
        }
    }
    finish(9, &failures, format!("{} proved sequents valid in every matching catalog structure with |S| <= 3", proofs.len()));
}

#[test]
fn c10_fo_countermodel() {
    let start = Instant::now();
    let goal = FoEquation::parse("exists x P0(x) * exists x P1(x) <= exists x (P0(x) * P1(x))").expect("parses");
    let mut failures = Vec::new();
    let hit = bounded_fo_countermodel(&[], &goal, &SemScope::default()).expect("search runs");
    let elapsed = start.elapsed();
    let default_hit = match &hit {
        Some(h) => {
            let (l, r) = (h.structure.algebra.label(h.lhs[0]), h.structure.algebra.label(h.rhs[0]));
            if (l, r) != ("1", "0") {
                failures.push(format!("default bounds: {} gives {l} vs {r}", h.structure.describe()));
            }
            h.structure.describe()
        }
        None => {
            failures.push("no countermodel under default bounds".into());
            String::new()
        }
    };
    if elapsed >= Duration::from_secs(10) {
        failures.push(format!("took {elapsed:?}"));
    }
    let l3 = catalog_entry("l3m").expect("l3m").algebra.base;
    let scope = SemScope { algebras: vec![l3.clone()], max_domain: 2, ..SemScope::default() };
    match bounded_fo_countermodel(&[], &goal, &scope).expect("search runs") {
        Some(h) if h.structure.domain == 2 => {}
        other => failures.push(format!("no Ł3 countermodel with |S| = 2: {:?}", other.map(|h| h.structure.describe()))),
    }
    let st = Structure::new(l3, 2, BTreeMap::from([(0, vec![2, 0]), (1, vec![0, 2])])).expect("structure");
    let (l, r) = (st.eval_fo(&goal.lhs).expect("evaluates"), st.eval_fo(&goal.rhs).expect("evaluates"));
    if (st.algebra.label(l[0]), st.algebra.label(r[0])) != ("1", "0") {
        failures.push(format!("Ł3 instance gives {:?} vs {:?}", l, r));
    }
    finish(10, &failures, format!("first countermodel {default_hit} ({elapsed:.2?}); Ł3 at |S| = 2 gives 1 vs 0"));
}
