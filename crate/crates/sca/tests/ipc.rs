use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sca::derivability::RuleBase;
use sca::formula::{parse, Formula, Term};
use sca::generate;
use sca::ipc::{
    check_derivation, lemma_library, parse_prop, prove_classical, prove_ipc, skeletonize,
    verify_rule, IpcResult, PropFormula, Sequent, VerifyStatus,
};
use std::collections::BTreeMap;

/// A finite Kripke frame: `le[u][v]` iff `u <= v`.
struct Frame {
    le: Vec<Vec<bool>>,
}

/// Every partial order on `n` labelled worlds.
fn frames(n: usize) -> Vec<Frame> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|(u, v)| u != v)
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for (bit, &(u, v)) in pairs.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                le[u][v] = true;
            }
        }
        let antisymmetric = (0..n).all(|u| (0..n).all(|v| u == v || !(le[u][v] && le[v][u])));
        let transitive =
            (0..n).all(|u| (0..n).all(|v| (0..n).all(|w| !(le[u][v] && le[v][w]) || le[u][w])));
        if antisymmetric && transitive {
            out.push(Frame { le });
        }
    }
    out
}

impl Frame {
    fn upsets(&self) -> Vec<u32> {
        let n = self.le.len();
        (0u32..1 << n)
            .filter(|s| {
                (0..n).all(|u| s >> u & 1 == 0 || (0..n).all(|v| !self.le[u][v] || s >> v & 1 == 1))
            })
            .collect()
    }

    fn forces(&self, w: usize, f: &PropFormula, val: &BTreeMap<String, u32>) -> bool {
        match f {
            PropFormula::Atom(a) => val[a] >> w & 1 == 1,
            PropFormula::Bot => false,
            PropFormula::And(a, b) => self.forces(w, a, val) && self.forces(w, b, val),
            PropFormula::Or(a, b) => self.forces(w, a, val) || self.forces(w, b, val),
            PropFormula::Imp(a, b) => (0..self.le.len())
                .filter(|&v| self.le[w][v])
                .all(|v| !self.forces(v, a, val) || self.forces(v, b, val)),
        }
    }
}

fn assignments(atoms: &[String], upsets: &[u32]) -> Vec<BTreeMap<String, u32>> {
    let mut out = vec![BTreeMap::new()];
    for a in atoms {
        out = out
            .into_iter()
            .flat_map(|m| {
                upsets.iter().map(move |&u| {
                    let mut m = m.clone();
                    m.insert(a.clone(), u);
                    m
                })
            })
            .collect();
    }
    out
}

/// Smallest number of worlds of a countermodel to `s`, searching up to `max_worlds`.
fn countermodel(s: &Sequent, max_worlds: usize) -> Option<usize> {
    let mut atoms: Vec<String> = s.goal.atoms().into_iter().collect();
    for h in &s.hypotheses {
        atoms.extend(h.atoms());
    }
    atoms.sort();
    atoms.dedup();
    for n in 1..=max_worlds {
        for frame in frames(n) {
            let ups = frame.upsets();
            for val in assignments(&atoms, &ups) {
                let refuted = (0..n).any(|w| {
                    s.hypotheses.iter().all(|h| frame.forces(w, h, &val))
                        && !frame.forces(w, &s.goal, &val)
                });
                if refuted {
                    return Some(n);
                }
            }
        }
    }
    None
}

fn goal(src: &str) -> Sequent {
    Sequent::goal(parse_prop(src).unwrap())
}

#[test]
fn frame_counts() {
    assert_eq!(frames(1).len(), 1);
    assert_eq!(frames(2).len(), 3);
    assert_eq!(frames(3).len(), 19);
}

#[test]
fn prover_examples() {
    let provable = [
        "(p \\/ ~p) -> (~~p -> p)",
        "~(p /\\ q) -> ~~(~p \\/ ~q)",
        "~~(~p \\/ ~q) -> ~(p /\\ q)",
        "~~~p -> ~p",
        "~~(p \\/ ~p)",
    ];
    for src in provable {
        let s = goal(src);
        let IpcResult::Provable(d) = prove_ipc(&s) else {
            panic!("{src} should be provable")
        };
        check_derivation(&d).unwrap();
        assert_eq!(countermodel(&s, 3), None, "{src}");
    }
    let peirce = goal("((p -> q) -> p) -> p");
    assert_eq!(prove_ipc(&peirce), IpcResult::Unprovable);
    assert_eq!(countermodel(&peirce, 3), Some(2));
    assert_eq!(prove_ipc(&goal("p \\/ ~p")), IpcResult::Unprovable);
    assert_eq!(countermodel(&goal("p \\/ ~p"), 3), Some(2));
}

#[test]
fn classical_examples() {
    assert!(prove_classical(&parse_prop("((p->q)->p)->p").unwrap()));
    assert!(!prove_classical(&parse_prop("p -> q").unwrap()));
    assert!(prove_classical(
        &parse_prop("~(p/\\q) -> (~p \\/ ~q)").unwrap()
    ));
}

fn prop_formula(seed: u64, atoms: &[&str], size: u32) -> PropFormula {
    generate::prop(&mut ChaCha8Rng::seed_from_u64(seed), atoms, size)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn prover_agrees_with_kripke_semantics(seed in any::<u64>(), size in 0u32..7) {
        let f = prop_formula(seed, &["p", "q"], size);
        let s = Sequent::goal(f.clone());
        match prove_ipc(&s) {
            IpcResult::Provable(d) => {
                prop_assert!(check_derivation(&d).is_ok());
                prop_assert_eq!(&d.conclusion.goal, &f);
                prop_assert_eq!(countermodel(&s, 3), None, "{} has a countermodel", f);
                prop_assert!(prove_classical(&f));
            }
            IpcResult::Unprovable => {
                let witnessed = countermodel(&s, 3).is_some() || !prove_classical(&f);
                prop_assert!(witnessed || size >= 5, "{} unprovable but no small countermodel", f);
            }
        }
    }

    #[test]
    fn glivenko(seed in any::<u64>(), size in 0u32..12) {
        let f = prop_formula(seed, &["p", "q", "r", "s", "t"], size);
        let nn = PropFormula::not(PropFormula::not(f.clone()));
        prop_assert_eq!(prove_ipc(&Sequent::goal(nn)).is_provable(), prove_classical(&f));
    }

    #[test]
    fn sequents_with_hypotheses(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let hyps = vec![generate::prop(&mut rng, &["p", "q"], 3), generate::prop(&mut rng, &["p", "q"], 2)];
        let g = generate::prop(&mut rng, &["p", "q"], 3);
        let s = Sequent::new(hyps, g);
        match prove_ipc(&s) {
            IpcResult::Provable(d) => {
                prop_assert!(check_derivation(&d).is_ok());
                prop_assert_eq!(countermodel(&s, 3), None);
            }
            IpcResult::Unprovable => {}
        }
    }

    #[test]
    fn skeleton_is_alpha_invariant_and_stable(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = generate::prenex(&mut rng, 2, 2, &["y"]);
        let b = generate::prenex(&mut rng, 2, 2, &["y"]);
        let f = Formula::imp(Formula::or(a.clone(), Formula::not(b.clone())), Formula::and(b.clone(), a.clone()));
        let renamed = Formula::imp(
            Formula::or(rename_bound(&a), Formula::not(rename_bound(&b))),
            Formula::and(rename_bound(&b), rename_bound(&a)),
        );
        let sk = skeletonize(&f);
        prop_assert_eq!(skeletonize(&renamed), sk.clone());
        let back = reify(&sk);
        prop_assert_eq!(skeletonize(&back), sk);
    }
}

/// Renames every bound variable `v` to `v_r`.
fn rename_bound(f: &Formula) -> Formula {
    match f {
        Formula::Exists(x, b) | Formula::Forall(x, b) => {
            let fresh = format!("{x}r");
            let body = rename_bound(&b.substitute(x, &Term::var(&fresh)));
            if matches!(f, Formula::Exists(..)) {
                Formula::exists(&fresh, body)
            } else {
                Formula::forall(&fresh, body)
            }
        }
        Formula::And(a, b) => Formula::and(rename_bound(a), rename_bound(b)),
        Formula::Or(a, b) => Formula::or(rename_bound(a), rename_bound(b)),
        Formula::Imp(a, b) => Formula::imp(rename_bound(a), rename_bound(b)),
        g => g.clone(),
    }
}

/// Turns atom `a`, `b`, ... into distinct arithmetic atoms.
fn reify(p: &PropFormula) -> Formula {
    match p {
        PropFormula::Atom(a) => Formula::eq(Term::var(a), Term::Zero),
        PropFormula::Bot => Formula::Bot,
        PropFormula::And(a, b) => Formula::and(reify(a), reify(b)),
        PropFormula::Or(a, b) => Formula::or(reify(a), reify(b)),
        PropFormula::Imp(a, b) => Formula::imp(reify(a), reify(b)),
    }
}

#[test]
fn skeleton_examples() {
    let sk = |s: &str| skeletonize(&parse(s).unwrap());
    assert_eq!(
        sk("(E x.(x=0)) \\/ ~E x.(x=0)"),
        parse_prop("a \\/ ~a").unwrap()
    );
    assert_eq!(
        sk("(A x.~(x=0)) -> ~(E x.(x=0))"),
        parse_prop("a -> ~b").unwrap()
    );
    assert_eq!(sk("((x=0) -> bot) -> bot"), parse_prop("~~a").unwrap());
    assert_eq!(
        sk("(E x.(x=0)) \\/ ~E y.(y=0)"),
        parse_prop("a \\/ ~a").unwrap()
    );
}

#[test]
fn large_inputs_terminate() {
    let atom = |i: usize| PropFormula::atom(&format!("p{i}"));

    let n = 1000;
    let mut hyps = vec![atom(0)];
    hyps.extend((0..n).map(|i| PropFormula::imp(atom(i), atom(i + 1))));
    let chain = Sequent::new(hyps, atom(n));
    let IpcResult::Provable(d) = prove_ipc(&chain) else {
        panic!("chain should be provable")
    };
    check_derivation(&d).unwrap();

    let conj = (1..10_001).fold(atom(0), |acc, i| PropFormula::and(acc, atom(i)));
    let f = PropFormula::imp(conj, atom(10_000));
    assert!(f.connectives() >= 10_000);
    assert!(prove_ipc(&Sequent::goal(f)).is_provable());

    let disj = (0..2500)
        .rev()
        .fold(PropFormula::Bot, |acc, i| PropFormula::or(atom(i), acc));
    let g = PropFormula::imp(atom(2499), disj);
    assert!(prove_ipc(&Sequent::goal(g)).is_provable());

    let conj = (1..1000).fold(atom(0), |acc, i| PropFormula::and(acc, atom(i)));
    let h = PropFormula::imp(conj, atom(1000));
    assert_eq!(prove_ipc(&Sequent::goal(h)), IpcResult::Unprovable);
}

#[test]
fn shipped_rule_verification() {
    let rb = RuleBase::shipped();
    let lib = lemma_library();
    let status = |id: &str| verify_rule(rb.rule(id).unwrap(), &lib).unwrap();
    assert_eq!(status("lem-dne"), VerifyStatus::Verified);
    assert_eq!(status("peirce-dne"), VerifyStatus::Verified);
    assert_eq!(status("dne-peirce"), VerifyStatus::Verified);
    let first_order = rb
        .rules
        .iter()
        .find(|r| r.id.starts_with("dne-dns"))
        .unwrap();
    assert_eq!(
        verify_rule(first_order, &lib).unwrap(),
        VerifyStatus::NeedsFirstOrder
    );
}
