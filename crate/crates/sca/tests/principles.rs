use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sca::formula::{eval_bounded, Formula, Term};
use sca::generate;
use sca::hierarchy::{Class, HClass, Kind};
use sca::principles::{
    catalog, instantiate, node_of, witness_roles, Family, PrincipleId, PrincipleInstance, Variant,
};

fn class_args(id: PrincipleId, k: u32) -> Vec<Vec<Class>> {
    let mut classes = Vec::new();
    for kind in [Kind::Sigma, Kind::Pi, Kind::Delta] {
        for neg in 0..=2 {
            classes.push(Class::new(kind, k, neg));
        }
    }
    classes.push(Class::top());
    classes.sort();
    classes.dedup();
    let lists: Vec<Vec<Class>> = if id.arity == 1 {
        classes.iter().map(|c| vec![*c]).collect()
    } else {
        classes
            .iter()
            .flat_map(|a| classes.iter().map(move |b| vec![*a, *b]))
            .collect()
    };
    lists
        .into_iter()
        .filter(|args| node_of(id, args).is_ok())
        .collect()
}

fn witness(rng: &mut ChaCha8Rng, id: PrincipleId, role: &str, args: &[Class]) -> Formula {
    let second = role.starts_with("psi") && id.arity == 2;
    let c = if second {
        args.get(1).copied().unwrap_or(args[0])
    } else {
        args[0]
    };
    let free: &[&str] = if id.family == Family::Cd && role.starts_with("phi") {
        &["y"]
    } else {
        &["x", "y"]
    };
    if role == "psi" && id.arity == 1 && c.kind != Kind::Delta {
        return generate::prenex(rng, 2, 2, free);
    }
    let partner = role.ends_with('2') || (role == "psi" && id.arity == 1);
    let h = match c.base().hclass() {
        Some(h) => h,
        None if c.is_top() => return generate::prenex(rng, 3, 3, free),
        None if partner => HClass::pi(c.level),
        None => HClass::sigma(c.level),
    };
    generate::prenex_in(rng, h, h.level + 1, free)
}

fn sample(rng: &mut ChaCha8Rng, id: PrincipleId, args: &[Class]) -> Option<PrincipleInstance> {
    (0..20).find_map(|_| {
        let ws: Vec<Formula> = witness_roles(id, args)
            .iter()
            .map(|r| witness(rng, id, r, args))
            .collect();
        instantiate(id, args, &ws).ok()
    })
}

fn is_delta_premise(f: &Formula) -> bool {
    match f {
        Formula::And(a, b) if f.as_iff().is_none() => is_delta_premise(a) && is_delta_premise(b),
        g => g.as_iff().is_some(),
    }
}

#[test]
fn instantiate_is_total_over_the_catalog() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for entry in catalog() {
        for k in 1..=3 {
            let lists = class_args(entry.id, k);
            assert!(!lists.is_empty(), "{} has no nodes at level {k}", entry.id);
            for args in lists {
                assert!(
                    sample(&mut rng, entry.id, &args).is_some(),
                    "{} {args:?}: no accepted witnesses",
                    entry.id
                );
            }
        }
    }
}

#[test]
fn delta_premise_is_outermost_antecedent() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for entry in catalog() {
        for k in 1..=3 {
            for args in class_args(entry.id, k) {
                if !args.iter().any(|c| c.kind == Kind::Delta) {
                    continue;
                }
                let inst = sample(&mut rng, entry.id, &args).unwrap();
                let Formula::Imp(pre, _) = &inst.rendered else {
                    panic!("{}: {}", entry.id, inst.rendered)
                };
                assert!(
                    is_delta_premise(pre),
                    "{} {args:?}: {}",
                    entry.id,
                    inst.rendered
                );
            }
        }
    }
}

#[test]
fn rendered_instances_are_classically_valid() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let bound = Term::numeral(4);
    let mut checked = 0;
    for entry in catalog() {
        if entry.id.family == Family::Coll {
            continue;
        }
        for k in 1..=2 {
            for args in class_args(entry.id, k) {
                for _ in 0..3 {
                    let inst = sample(&mut rng, entry.id, &args).unwrap();
                    let f = generate::bound_quantifiers(&inst.rendered, &bound);
                    let env = generate::environment(&mut rng, &f, 4);
                    assert_eq!(
                        eval_bounded(&f, &env),
                        Ok(true),
                        "{} {args:?}: {}",
                        entry.id,
                        inst.rendered
                    );
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn collection_holds_when_the_outer_bound_covers_the_inner_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let id = PrincipleId {
        family: Family::Coll,
        variant: Variant::Plain,
        arity: 1,
    };
    for _ in 0..30 {
        let level = rng.gen_range(0..=1);
        let args = [Class::pi(level)];
        let w = generate::prenex_in(&mut rng, HClass::pi(level), level + 1, &["y", "z"]);
        let inst = instantiate(id, &args, &[w]).unwrap();
        let Formula::Imp(pre, concl) = &inst.rendered else {
            panic!()
        };
        let pre = generate::bound_quantifiers(pre, &Term::numeral(5));
        let concl = generate::bound_quantifiers(concl, &Term::numeral(4));
        let f = Formula::imp(pre, concl);
        let env = generate::environment(&mut rng, &f, 4);
        assert_eq!(eval_bounded(&f, &env), Ok(true), "{}", inst.rendered);
    }
}
