use super::*;

fn entry(name: &str) -> MLattice {
    catalog_entry(name).unwrap().algebra
}

fn l3() -> Algebra {
    entry("l3m").base
}

fn el(a: &Algebra, label: &str) -> usize {
    a.element(label).unwrap()
}

#[test]
fn catalog_validates() {
    let cat = catalog();
    assert_eq!(cat.iter().map(|e| e.name).collect::<Vec<_>>(), CATALOG_NAMES);
    assert_eq!(cat[2].profile, Profile::MFle);
    assert_eq!(cat[3].profile, Profile::Lat);
    for e in &cat {
        let text = serde_json::to_string(&e.algebra.to_json()).unwrap();
        let back = load(&text, if e.profile.fle() { Profile::MFle } else { Profile::MLat }).unwrap();
        assert_eq!(back, e.algebra);
    }
}

#[test]
fn lukasiewicz_tables() {
    let a = l3();
    assert!(a.validate(true).is_ok());
    assert!(entry("l3m").validate(true).is_ok());
    let half = el(&a, "½");
    assert_eq!(a.op("mul", &[half, half]), Some(0));
    assert_eq!(a.op("imp", &[2, half]), Some(half));
}

#[test]
fn corrupted_residuum_is_caught() {
    let a = l3();
    let mut tables = a.tables().to_vec();
    let imp = a.signature().index("imp").unwrap();
    let mut data = tables[imp].data().to_vec();
    data[2 * 3 + 1] = 2;
    tables[imp] = Table::new(2, data);
    let bad = Algebra::new("bad", 3, Some(a.labels().to_vec()), a.signature().clone(), tables).unwrap();
    match bad.validate(true) {
        Err(AlgError::Violation { condition, witness }) => {
            assert_eq!(condition, "residuation");
            assert_eq!(&witness[..2], ["1", "½"]);
        }
        other => panic!("expected a violation, got {other:?}"),
    }
}

#[test]
fn lattice_conditions_are_checked() {
    let a = Algebra::from_fn("not-a-lattice", 2, None, Signature::lat(), |op, t| if op == "and" { t[0] } else { t[1] }).unwrap();
    assert_eq!(a.validate(false).unwrap_err().code(), Code::Violation);
    let text = r#"{"signature": [{"name": "and", "arity": 2}], "size": 1, "tables": {"and": [[0]]}}"#;
    assert_eq!(load(text, Profile::Lat).unwrap_err().code(), Code::Signature);
    let text = r#"{"signature": [{"name": "and", "arity": 2}, {"name": "or", "arity": 2}], "size": 2, "tables": {"and": [[0, 0], [0, 2]], "or": [[0, 1], [1, 1]]}}"#;
    assert_eq!(load(text, Profile::Lat).unwrap_err().code(), Code::Schema);
}

#[test]
fn relatively_complete_examples() {
    let a = l3();
    assert_eq!(relatively_complete_subalgebras(&a).unwrap(), vec![vec![0, 2], vec![0, 1, 2]]);
    assert_eq!(relatively_complete_subalgebras(&entry("2-chain").base).unwrap(), vec![vec![0, 1]]);
    let d = entry("diamond").base;
    let a_elt = el(&d, "a");
    assert!(subuniverses(&d).unwrap().contains(&vec![a_elt]));
    assert!(!relatively_complete_subalgebras(&d).unwrap().contains(&vec![a_elt]));
    assert_eq!(expand_from_subalgebra(&d, &[a_elt]).unwrap_err().code(), Code::NotRelComplete);
}

#[test]
fn expansions_match_the_lemma() {
    let a = l3();
    let m = expand_from_subalgebra(&a, &[0, 2]).unwrap();
    assert_eq!(m.box_table(), [0, 0, 2]);
    assert_eq!(m.dia_table(), [0, 2, 2]);
    assert_eq!(m.box_table(), entry("l3m").box_table());
    assert_eq!(box_image(&m).unwrap(), vec![0, 2]);
    let id = expand_from_subalgebra(&a, &[0, 1, 2]).unwrap();
    assert_eq!(id.box_table(), [0, 1, 2]);
    assert_eq!(box_image(&id).unwrap(), vec![0, 1, 2]);
    let d = entry("diamond").base;
    let m = expand_from_subalgebra(&d, &[0, 3]).unwrap();
    assert_eq!(m.box_table(), [0, 0, 0, 3]);
    assert_eq!(m.dia_table(), [0, 3, 3, 3]);
    assert!(m.validate(false).is_ok());
}

#[test]
fn box_image_rejects_inconsistent_tables() {
    let m = MLattice::new(l3(), vec![0, 0, 2], vec![0, 1, 2]).unwrap();
    assert_eq!(box_image(&m).unwrap_err().code(), Code::Violation);
    assert!(m.validate(true).is_err());
}

#[test]
fn functional_powers() {
    let two = entry("2-chain").base;
    let p = functional_power(&two, 2).unwrap();
    let b = &p.base;
    assert_eq!(b.label(p.boxed(el(b, "(1,0)"))), "(0,0)");
    assert_eq!(b.label(p.dia(el(b, "(1,0)"))), "(1,1)");
    let p1 = functional_power(&two, 1).unwrap();
    assert_eq!(p1.box_table(), [0, 1]);
    let p = functional_power(&l3(), 2).unwrap();
    assert_eq!(p.size(), 9);
    assert!(p.validate(true).is_ok());
    let img = box_image(&p).unwrap();
    let labels: Vec<&str> = img.iter().map(|&i| p.base.label(i)).collect();
    assert_eq!(labels, ["(0,0)", "(½,½)", "(1,1)"]);
}

#[test]
fn terms_round_trip() {
    for text in ["[](v0 -> []v1) ~ <>v0 -> []v1", "v0 <= v1 ==> []v0 <= []v1", "<>(v0 * v0) ~ top", "g(v0, e) & (v1 | v2) ~ v3"] {
        let eq = parse_equation(text).unwrap();
        assert_eq!(eq.to_string(), text);
    }
    assert_eq!(parse_equation("v0 ~").unwrap_err().code(), Code::Syntax);
    assert_eq!(parse_equation("v0 v1").unwrap_err().code(), Code::Syntax);
    for name in builtin_names() {
        assert!(builtin(&name).is_some(), "{name}");
    }
}

#[test]
fn evaluation_examples() {
    let m = entry("l3m");
    let half = el(&m.base, "½");
    let eq = builtin("dia-mul").unwrap();
    let s = eval_single(&m, &eq, &[half]).unwrap();
    assert_eq!((m.base.label(s.lhs), m.base.label(s.rhs), s.holds), ("1", "0", false));
    assert_eq!(eval_all(&m, &eq, DEFAULT_CAP).unwrap(), Outcome::Fails { vars: vec![0], values: vec![half], lhs: 2, rhs: 0 });
    assert_eq!(eval_all(&m, &builtin("constant-domain").unwrap(), DEFAULT_CAP).unwrap(), Outcome::Holds);
    assert_eq!(eval_all(&m, &builtin("L1-box").unwrap(), DEFAULT_CAP).unwrap(), Outcome::Holds);
    let many = parse_equation("v0 & v1 & v2 & v3 ~ v0").unwrap();
    assert_eq!(eval_all(&m, &many, 80).unwrap_err().code(), Code::Cap);
    let d = entry("diamond");
    assert_eq!(eval_all(&d, &eq, DEFAULT_CAP).unwrap_err().code(), Code::Signature);
}

#[test]
fn countermodel_examples() {
    let hit = countermodel_search(&builtin("dia-mul").unwrap(), &Scope::default(), DEFAULT_CAP).unwrap().unwrap();
    assert_eq!(hit.algebra, entry("l3m"));
    assert_eq!(hit.algebra.base.label(hit.values[0]), "½");
    let all: Scope = "default,lattices:4,powers:2".parse().unwrap();
    assert!(countermodel_search(&builtin("L2-box").unwrap(), &all, DEFAULT_CAP).unwrap().is_none());
    assert!(countermodel_search(&builtin("L6-box").unwrap(), &Scope::default(), DEFAULT_CAP).unwrap().is_none());
    assert!("lattices:x".parse::<Scope>().is_err());
}

#[test]
fn lattice_counts() {
    let counts: Vec<usize> = (1..=5).map(|n| small_lattices(5).iter().filter(|a| a.size() == n).count()).collect();
    assert_eq!(counts, [1, 1, 1, 2, 5]);
    for a in small_lattices(5) {
        assert!(a.validate(false).is_ok());
    }
}

#[test]
fn algebraic_forms_of_structural_rules() {
    let g = entry("godel3").base;
    assert!(g.integral() && g.f_is_bottom() && g.contracts(2));
    let l = l3();
    assert!(l.integral() && !l.contracts(2));
    let s = entry("sugihara3").base;
    assert!(!s.integral() && s.contracts(2) && s.contracts(3));
}
