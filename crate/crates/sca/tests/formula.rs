use proptest::prelude::*;
use sca::formula::{collapse_atom_negations, eval_bounded, pair, parse, unpair, Formula, Term};
use sca::generate;
use std::collections::BTreeMap;

const NAMES: [&str; 4] = ["x", "y", "z", "x1"];

fn name() -> impl Strategy<Value = String> {
    prop::sample::select(&NAMES[..]).prop_map(str::to_string)
}

fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![name().prop_map(Term::Var), Just(Term::Zero)];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Term::succ),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::mul(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::pair(a, b)),
            inner.clone().prop_map(Term::proj0),
            inner.prop_map(Term::proj1),
        ]
    })
}

fn formula() -> impl Strategy<Value = Formula> {
    let atom = prop_oneof![
        (term(), term()).prop_map(|(a, b)| Formula::Eq(a, b)),
        (term(), term()).prop_map(|(a, b)| Formula::Lt(a, b)),
        Just(Formula::Bot),
    ];
    atom.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            inner.clone().prop_map(Formula::not),
            (name(), inner.clone()).prop_map(|(x, b)| Formula::exists(&x, b)),
            (name(), inner.clone()).prop_map(|(x, b)| Formula::forall(&x, b)),
            (name(), term(), inner.clone()).prop_map(|(x, t, b)| Formula::exists_below(&x, t, b)),
            (name(), term(), inner).prop_map(|(x, t, b)| Formula::forall_below(&x, t, b)),
        ]
    })
}

fn bounded_sentence() -> impl Strategy<Value = Formula> {
    (formula(), 0u64..3).prop_map(|(f, b)| {
        let mut g = generate::bound_quantifiers(&f, &Term::numeral(b + 1));
        for v in g.free_vars() {
            g = g.substitute(&v, &Term::numeral(b));
        }
        g
    })
}

proptest! {
    #[test]
    fn print_parse_round_trip(f in formula()) {
        let back = parse(&f.to_string()).unwrap();
        prop_assert!(back.alpha_eq(&f), "{} reparsed as {}", f, back);
    }

    #[test]
    fn substitution_free_variables(f in formula(), v in name(), t in term()) {
        let g = f.substitute(&v, &t);
        let mut allowed = f.free_vars();
        allowed.remove(&v);
        allowed.extend(t.free_vars());
        prop_assert!(g.free_vars().is_subset(&allowed));
        if !g.has_free(&v) {
            prop_assert_eq!(g.substitute(&v, &t), g.clone());
        }
    }

    #[test]
    fn collapse_is_idempotent(f in formula()) {
        let once = collapse_atom_negations(&f);
        prop_assert_eq!(collapse_atom_negations(&once), once);
    }

    #[test]
    fn collapse_preserves_truth(f in bounded_sentence()) {
        let env = BTreeMap::new();
        let before = eval_bounded(&f, &env);
        let after = eval_bounded(&collapse_atom_negations(&f), &env);
        match (before, after) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
        }
    }
}

/// Cantor pairing by walking the diagonals.
fn pair_by_enumeration(limit: u64) -> BTreeMap<(u64, u64), u64> {
    let mut out = BTreeMap::new();
    let mut code = 0;
    for d in 0..=2 * limit {
        for b in 0..=d {
            out.insert((d - b, b), code);
            code += 1;
        }
    }
    out
}

#[test]
fn pairing_matches_enumeration_and_inverts() {
    let table = pair_by_enumeration(200);
    for a in 0..=200 {
        for b in 0..=200 {
            let z = pair(a, b).unwrap();
            assert_eq!(z, table[&(a, b)], "pair({a},{b})");
            assert_eq!(unpair(z), (a, b));
        }
    }
    for n in 0..=200 {
        let (a, b) = unpair(n);
        assert_eq!(pair(a, b), Some(n));
    }
}

#[test]
fn parse_examples() {
    let x = || Term::var("x");
    assert_eq!(
        parse("E x. (x = 0)").unwrap(),
        Formula::exists("x", Formula::eq(x(), Term::Zero))
    );
    let y = || Term::var("y");
    let z = || Term::var("z");
    assert_eq!(
        parse("A y < z. (y < z)").unwrap(),
        Formula::forall(
            "y",
            Formula::imp(Formula::lt(y(), z()), Formula::lt(y(), z()))
        )
    );
    assert_eq!(
        parse("~ (x = 0)").unwrap(),
        Formula::imp(Formula::eq(x(), Term::Zero), Formula::Bot)
    );
    assert!(parse("E x. (x = ").is_err());
}

#[test]
fn print_examples() {
    let x = Term::var("x");
    assert_eq!(
        Formula::not(Formula::eq(x.clone(), Term::Zero)).to_string(),
        "~(x = 0)"
    );
    assert_eq!(Formula::Bot.to_string(), "bot");
    let f = Formula::exists(
        "x",
        Formula::and(
            Formula::lt(x.clone(), Term::var("t")),
            Formula::eq(x, Term::Zero),
        ),
    );
    assert_eq!(f.to_string(), "E x < t. (x = 0)");
}

#[test]
fn substitution_examples() {
    let f = parse("x = 0").unwrap();
    assert_eq!(
        f.substitute("x", &Term::succ(Term::Zero)),
        parse("S(0) = 0").unwrap()
    );
    let f = parse("E x. (x = y)").unwrap();
    let g = f.substitute("y", &Term::var("x"));
    let Formula::Exists(bound, body) = &g else {
        panic!("{g}")
    };
    assert_ne!(bound, "x");
    assert_eq!(**body, Formula::eq(Term::var(bound), Term::var("x")));
    let f = parse("A x. (x = 0)").unwrap();
    assert_eq!(f.substitute("x", &Term::succ(Term::Zero)), f);
}

#[test]
fn collapse_examples() {
    let p = |s: &str| parse(s).unwrap();
    assert_eq!(collapse_atom_negations(&p("~~(x=0)")), p("x=0"));
    assert_eq!(collapse_atom_negations(&p("~~~(x=0)")), p("~(x=0)"));
    assert_eq!(collapse_atom_negations(&p("~(A x. x=0)")), p("~(A x. x=0)"));
}

#[test]
fn eval_examples() {
    let p = |s: &str| parse(s).unwrap();
    let env = |pairs: &[(&str, u64)]| {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect::<BTreeMap<_, _>>()
    };
    assert!(eval_bounded(&p("A x < S(S(0)). (x < S(S(0)))"), &env(&[])).unwrap());
    let f = p("E x < z. (x = y)");
    let brute = (0..3).any(|x| x == 5);
    assert_eq!(
        eval_bounded(&f, &env(&[("z", 3), ("y", 5)])).unwrap(),
        brute
    );
    assert!(eval_bounded(&p("p0(pair(x,y)) = x"), &env(&[("x", 2), ("y", 3)])).unwrap());
    assert!(eval_bounded(&p("E x. (x = 0)"), &env(&[])).is_err());
    assert!(eval_bounded(&p("x = 0"), &env(&[])).is_err());
}
