//! Acceptance criteria, one test per criterion. Each prints a single
//! `criterion N: PASS|FAIL ...` line.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sca::derivability::{
    build_figure, closure, closure_with_permutation, equivalence_class, export_dot, query,
    replay_chain, Preset, QueryResult, RuleBase, TheoryContext,
};
use sca::duality::dual;
use sca::formula::{collapse_atom_negations, eval_bounded, Formula, Term};
use sca::generate;
use sca::hierarchy::{classify_prenex, Class, HClass};
use sca::ipc::{prove_classical, prove_ipc, PropFormula, Sequent, Skeletonizer};
use sca::principles::{
    instantiate, node_of, witness_roles, Family, PrincipleId, PrincipleNode, Variant,
};
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

fn node(s: &str) -> PrincipleNode {
    s.parse().unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn report(n: u32, ok: bool, detail: &str, elapsed: Duration) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!(
        "criterion {n}: {verdict} {detail} ({:.2}s)",
        elapsed.as_secs_f64()
    );
}

fn finish(n: u32, failures: &[String], detail: &str, start: Instant, limit: Option<Duration>) {
    let elapsed = start.elapsed();
    let in_time = limit.is_none_or(|l| elapsed < l);
    let ok = failures.is_empty() && in_time;
    report(n, ok, detail, elapsed);
    assert!(
        failures.is_empty(),
        "criterion {n} failures:\n{}",
        failures.join("\n")
    );
    assert!(in_time, "criterion {n} took {elapsed:?}, limit {limit:?}");
}

fn split_prefix(f: &Formula) -> (Vec<(bool, String)>, &Formula) {
    let mut prefix = Vec::new();
    let mut cur = f;
    loop {
        match cur {
            Formula::Exists(x, b) => {
                prefix.push((true, x.clone()));
                cur = b;
            }
            Formula::Forall(x, b) => {
                prefix.push((false, x.clone()));
                cur = b;
            }
            _ => return (prefix, cur),
        }
    }
}

/// Same prefix, and the matrices `m` and `~~m` are equivalent given
/// decidability of every atom, checked by the propositional prover.
fn matrix_double_negation_only(f: &Formula, dd: &Formula) -> bool {
    let (p1, m) = split_prefix(f);
    let (p2, mm) = split_prefix(dd);
    if p1 != p2
        || collapse_atom_negations(mm)
            != collapse_atom_negations(&Formula::not(Formula::not(m.clone())))
    {
        return false;
    }
    let mut sk = Skeletonizer::new();
    let goal = PropFormula::iff(sk.abstract_formula(mm), sk.abstract_formula(m));
    let atoms = goal.atoms();
    let decidable = atoms
        .iter()
        .map(|a| PropFormula::or(PropFormula::atom(a), PropFormula::not(PropFormula::atom(a))));
    prove_ipc(&Sequent::new(decidable.collect(), goal)).is_provable()
}

#[test]
fn criterion_1_dual_laws() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xD0A1);
    let mut failures = Vec::new();
    let (mut syntactic, mut via_decidable) = (0, 0);
    for _ in 0..500 {
        let f = generate::prenex(&mut rng, 5, 4, &["y"]);
        let c = classify_prenex(&f).unwrap();
        let d = dual(&f).unwrap();
        let cd = classify_prenex(&d).unwrap();
        if cd != c.flip() || cd.level != c.level {
            failures.push(format!("{f}: {c} but dual is {cd}"));
        }
        let dd = dual(&d).unwrap();
        if collapse_atom_negations(&dd).alpha_eq(&collapse_atom_negations(&f)) {
            syntactic += 1;
        } else if matrix_double_negation_only(&f, &dd) {
            via_decidable += 1;
        } else {
            failures.push(format!("{f}: double dual {dd}"));
        }
    }
    let detail = format!(
        "500 prenex formulas, involution syntactic in {syntactic}, up to decidable matrix ~~ in {via_decidable}"
    );
    finish(1, &failures, &detail, start, Some(Duration::from_secs(5)));
}

#[test]
fn criterion_2_glivenko() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x611E);
    let atoms = ["p", "q", "r", "s", "t"];
    let mut failures = Vec::new();
    let mut valid = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=atoms.len());
        let size = rng.gen_range(0..=12);
        let f = generate::prop(&mut rng, &atoms[..n], size);
        let classical = prove_classical(&f);
        let nn = PropFormula::not(PropFormula::not(f.clone()));
        if prove_ipc(&Sequent::goal(nn)).is_provable() != classical {
            failures.push(format!("Glivenko disagreement on {f}"));
        }
        if prove_ipc(&Sequent::goal(f.clone())).is_provable() && !classical {
            failures.push(format!(
                "intuitionistically provable but not classically valid: {f}"
            ));
        }
        valid += classical as usize;
    }
    let detail = format!("1000 formulas, {valid} classically valid");
    finish(2, &failures, &detail, start, Some(Duration::from_secs(30)));
}

#[test]
fn criterion_3_verify_rules() {
    let start = Instant::now();
    let out = sca_cli::run(["sca", "--json", "verify-rules"]);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).expect("verify-rules emits JSON");
    let mut failures = Vec::new();
    let verified = v["verified"].as_u64().unwrap_or(0);
    if out.code != 0 {
        failures.push(format!("exit code {}", out.code));
    }
    if verified < 10 {
        failures.push(format!("only {verified} rules verified"));
    }
    if v["failed"].as_u64() != Some(0) {
        failures.push(format!("failed = {}", v["failed"]));
    }
    let required = [
        "lem-dne",
        "peirce-dne",
        "dne-peirce",
        "dml-dneor",
        "dneor-dml",
        "dml-sigma-delta",
        "wlem-dml-top",
        "lembot-lem",
        "lem-dual-lembot",
        "lem-dsig-lem",
    ];
    let rules = v["rules"].as_array().cloned().unwrap_or_default();
    for id in required {
        let status = rules
            .iter()
            .find(|r| r["id"] == id)
            .map(|r| r["status"].clone());
        if status != Some(serde_json::json!("verified")) {
            failures.push(format!("{id}: {status:?}"));
        }
    }
    let detail = format!("{verified} verified, {} failed", v["failed"]);
    finish(3, &failures, &detail, start, Some(Duration::from_secs(10)));
}

fn dot_edges(dot: &str) -> BTreeSet<(String, String, bool)> {
    dot.lines()
        .filter_map(|l| {
            let (lhs, rhs) = l.trim().split_once(" -> ")?;
            let dashed = rhs.contains("style=dashed");
            let to = rhs.split('"').nth(1)?;
            Some((lhs.trim_matches('"').to_string(), to.to_string(), dashed))
        })
        .collect()
}

fn dot_vertices(dot: &str) -> BTreeSet<String> {
    dot.lines()
        .map(str::trim)
        .filter(|l| l.starts_with('"') && !l.contains("->"))
        .map(|l| l.trim_end_matches(';').trim_matches('"').to_string())
        .collect()
}

fn abhk_expected(k: u32) -> BTreeSet<(String, String, bool)> {
    let j = k - 1;
    [
        (format!("LEM:D{k}"), format!("LEM:S{j}")),
        (format!("DNEOR:P{k}:P{k}"), format!("LEM:D{k}")),
        (format!("LEM:P{k}"), format!("DNEOR:P{k}:P{k}")),
        (format!("DNE:S{k}"), format!("LEM:D{k}")),
        (format!("LEM:S{k}"), format!("LEM:P{k}")),
        (format!("LEM:S{k}"), format!("DNE:S{k}")),
    ]
    .into_iter()
    .map(|(a, b)| (a, b, false))
    .collect()
}

fn dns2_expected() -> (BTreeSet<String>, BTreeSet<(String, String, bool)>) {
    let vertices = [
        "DNE:S1",
        "DNEOR:P1:P1",
        "LEM:nS1",
        "LEM:P1",
        "LEM:S1",
        "DML:nD2",
        "DML:D2",
        "DNEOR:D2:D2",
        "LEM:nD2",
        "LEM:D2",
        "DML:P2",
        "DML:S2",
        "DNE:S2",
        "DNEOR:P2:P2",
        "LEM:nS2",
        "LEM:P2",
        "LEM:S2",
    ];
    let solid = [
        ("LEM:S2", "LEM:P2"),
        ("LEM:S2", "DNE:S2"),
        ("LEM:P2", "DNEOR:P2:P2"),
        ("LEM:P2", "LEM:nS2"),
        ("DNE:S2", "LEM:D2"),
        ("DNE:S2", "DML:P2"),
        ("DNEOR:P2:P2", "LEM:D2"),
        ("DNEOR:P2:P2", "DML:P2"),
        ("DNEOR:P2:P2", "DML:S2"),
        ("LEM:nS2", "DML:S2"),
        ("LEM:D2", "DNEOR:D2:D2"),
        ("LEM:D2", "LEM:nD2"),
        ("DNEOR:D2:D2", "LEM:S1"),
        ("DNEOR:D2:D2", "DML:nD2"),
        ("LEM:nD2", "DML:nD2"),
        ("LEM:nD2", "DML:D2"),
        ("LEM:S1", "DNE:S1"),
        ("LEM:S1", "LEM:P1"),
        ("LEM:P1", "DNEOR:P1:P1"),
        ("LEM:P1", "LEM:nS1"),
        ("LEM:nS2", "DML:P2"),
        ("DML:P2", "LEM:nD2"),
        ("DML:S2", "LEM:nD2"),
        ("DML:nD2", "LEM:nS1"),
        ("DML:D2", "LEM:nS1"),
    ];
    let dashed = [
        ("LEM:nS2", "LEM:P2"),
        ("DML:S2", "DNEOR:P2:P2"),
        ("LEM:nD2", "LEM:D2"),
        ("DML:nD2", "DNEOR:D2:D2"),
        ("LEM:nS1", "LEM:S1"),
        ("DML:D2", "DML:nD2"),
    ];
    let edges = solid
        .iter()
        .map(|&(a, b)| (a, b, false))
        .chain(dashed.iter().map(|&(a, b)| (a, b, true)))
        .map(|(a, b, d)| (a.to_string(), b.to_string(), d))
        .collect();
    (vertices.iter().map(|s| s.to_string()).collect(), edges)
}

#[test]
fn criterion_4_figures() {
    let start = Instant::now();
    let rb = RuleBase::shipped();
    let mut failures = Vec::new();
    for k in 1..=4 {
        let dot = export_dot(Preset::Abhk, k, &rb);
        let vertices = dot_vertices(&dot);
        let edges = dot_edges(&dot);
        if vertices.len() != 6 || edges != abhk_expected(k) {
            failures.push(format!(
                "abhk k={k}: {} vertices, edges {edges:?}",
                vertices.len()
            ));
        }
        if !build_figure(Preset::Abhk, k, &rb).missing.is_empty() {
            failures.push(format!("abhk k={k}: edges not derivable"));
        }
        if export_dot(Preset::Abhk, k, &rb) != dot {
            failures.push(format!("abhk k={k}: output not byte-stable"));
        }
    }
    let dot = export_dot(Preset::Dns, 2, &rb);
    let (vertices, edges) = dns2_expected();
    if dot_vertices(&dot) != vertices {
        failures.push(format!("dns k=2 vertices {:?}", dot_vertices(&dot)));
    }
    if dot_edges(&dot) != edges {
        let got = dot_edges(&dot);
        failures.push(format!(
            "dns k=2 edges: missing {:?}, extra {:?}",
            edges.difference(&got).collect::<Vec<_>>(),
            got.difference(&edges).collect::<Vec<_>>()
        ));
    }
    if !build_figure(Preset::Dns, 2, &rb).missing.is_empty() {
        failures.push("dns k=2: edges not derivable".into());
    }
    let a = sca_cli::run(["sca", "graph", "--preset", "dns", "--k", "2"]);
    let b = sca_cli::run(["sca", "graph", "--preset", "dns", "--k", "2"]);
    if a.stdout != b.stdout || a.stdout != dot {
        failures.push("dns k=2: CLI output not byte-stable".into());
    }
    finish(
        4,
        &failures,
        "abhk k=1..4 (6 vertices, 6 edges), dns k=2 (17 vertices, 31 edges)",
        start,
        None,
    );
}

#[test]
fn criterion_5_equivalence_class() {
    let start = Instant::now();
    let rb = RuleBase::shipped();
    let target = node("DNEOR:P2:P2");
    let base = TheoryContext::new([], 5);
    let class = equivalence_class(&target, &base, &rb).unwrap();
    let mut failures = Vec::new();
    for required in ["DNEOR:P2:P2", "DMLBOT:S2", "CD:P2:P2", "COLL:P2"] {
        if !class.contains(&node(required)) {
            failures.push(format!("{required} missing from {class:?}"));
        }
    }
    for m in &class {
        for (from, to) in [(*m, target), (target, *m)] {
            let ctx = TheoryContext::new([from], 5);
            match query(&ctx, &to, &rb).unwrap() {
                QueryResult::Derivable { chain } => {
                    if let Err(e) = replay_chain(&ctx, &chain, &rb) {
                        failures.push(format!("{from} => {to}: replay failed: {e}"));
                    }
                }
                other => failures.push(format!("{from} => {to}: {other:?}")),
            }
        }
    }
    let detail = format!("{} members", class.len());
    finish(5, &failures, &detail, start, None);
}

#[test]
fn criterion_6_separations() {
    let start = Instant::now();
    let rb = RuleBase::shipped();
    let mut failures = Vec::new();
    match query(&TheoryContext::new([], 4), &node("DML:S1"), &rb).unwrap() {
        QueryResult::Separated { cite, .. }
            if !cite.quote.is_empty() && !cite.reference.is_empty() => {}
        other => failures.push(format!("DML:S1 over HA: {other:?}")),
    }
    let ctx = TheoryContext::new([node("DML:S2"), node("DNE:S2")], 4);
    match query(&ctx, &node("LEM:nS2"), &rb).unwrap() {
        QueryResult::Separated { .. } => {}
        other => failures.push(format!("LEM:nS2 over DML:S2 + DNE:S2: {other:?}")),
    }
    let mut audited = 0;
    for s in &rb.separations {
        for k in s.guard.max(1)..=4 {
            let Some((theory, p0)) = s.instance(k) else {
                continue;
            };
            let k_max = theory
                .iter()
                .chain([&p0])
                .map(PrincipleNode::max_level)
                .max()
                .unwrap_or(0)
                + 2;
            if closure(&TheoryContext::new(theory, k_max), &rb).contains(&p0) {
                failures.push(format!("{} at k={k}: closure contains {p0}", s.id));
            }
            audited += 1;
        }
    }
    let detail = format!("{audited} separation instances audited");
    finish(6, &failures, &detail, start, None);
}

fn classical_candidates() -> Vec<(PrincipleId, Vec<Class>)> {
    let mut out = Vec::new();
    let families = [
        Family::Lem,
        Family::Dne,
        Family::Peirce,
        Family::Dml,
        Family::LemBot,
        Family::DmlBot,
    ];
    let variants = [
        Variant::Plain,
        Variant::Delta,
        Variant::DeltaSigma,
        Variant::DeltaPi,
    ];
    for family in families {
        for variant in variants {
            let id = PrincipleId {
                family,
                variant,
                arity: family.arity() as u8,
            };
            for k in 1..=3 {
                let classes = [Class::sigma(k), Class::pi(k), Class::delta(k)];
                let arg_lists: Vec<Vec<Class>> = if family.arity() == 1 {
                    classes.iter().map(|c| vec![*c]).collect()
                } else {
                    classes
                        .iter()
                        .flat_map(|a| classes.iter().map(move |b| vec![*a, *b]))
                        .collect()
                };
                for args in arg_lists {
                    if node_of(id, &args).is_ok() {
                        out.push((id, args));
                    }
                }
            }
        }
    }
    out
}

fn witness_for(rng: &mut ChaCha8Rng, role: &str, args: &[Class], arity: u8) -> Formula {
    let slot = |i: usize| args.get(i).or(args.first()).copied().unwrap();
    let (class, sigma) = match role {
        "phi" => (slot(0), true),
        "phi2" => (slot(0), false),
        "psi" if arity == 1 && slot(0).hclass().is_none() => (slot(0), false),
        "psi" if arity == 1 => return generate::prenex(rng, 2, 2, &["y"]),
        "psi" => (slot(1), true),
        _ => (slot(1), false),
    };
    let h = match class.hclass() {
        Some(h) => h,
        None if sigma => HClass::sigma(class.level),
        None => HClass::pi(class.level),
    };
    generate::prenex_in(rng, h, h.level + 1, &["y"])
}

#[test]
fn criterion_7_classical_sanity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC1A5);
    let candidates = classical_candidates();
    let bound = Term::numeral(6);
    let mut failures = Vec::new();
    let mut families = BTreeSet::new();
    for _ in 0..200 {
        let (id, args) = candidates.choose(&mut rng).unwrap().clone();
        let witnesses: Vec<Formula> = witness_roles(id, &args)
            .iter()
            .map(|r| witness_for(&mut rng, r, &args, id.arity))
            .collect();
        let inst = match instantiate(id, &args, &witnesses) {
            Ok(i) => i,
            Err(e) => {
                failures.push(format!("{id} {args:?}: {e}"));
                continue;
            }
        };
        families.insert(id.family.name());
        let bounded = generate::bound_quantifiers(&inst.rendered, &bound);
        let env = generate::environment(&mut rng, &bounded, 6);
        match eval_bounded(&bounded, &env) {
            Ok(true) => {}
            other => failures.push(format!("{id}: {} evaluates to {other:?}", inst.rendered)),
        }
    }
    let detail = format!("200 instances over {families:?}, bound 6");
    finish(7, &failures, &detail, start, None);
}

#[test]
fn criterion_8_closure_determinism() {
    let start = Instant::now();
    let rb = RuleBase::shipped();
    let ctx = TheoryContext::new([node("LEM:P2"), node("DNE:S2")], 4);
    let reference = closure(&ctx, &rb).facts;
    let mut rng = ChaCha8Rng::seed_from_u64(0x0DE7);
    let mut failures = Vec::new();
    let goal = node("LEM:S2");
    for i in 0..10 {
        let mut perm: Vec<usize> = (0..rb.rules.len()).collect();
        perm.shuffle(&mut rng);
        let c = closure_with_permutation(&ctx, &rb, &perm);
        if c.facts != reference {
            failures.push(format!(
                "order {i}: {} facts vs {}",
                c.facts.len(),
                reference.len()
            ));
        }
        if !c.contains(&goal) {
            failures.push(format!("order {i}: LEM:S2 not derived"));
        }
    }
    let detail = format!("10 orders, {} facts each", reference.len());
    finish(8, &failures, &detail, start, None);
}
