//! Random terms, formulas and propositional formulas for sampling-based checks.

use crate::formula::{Formula, Term};
use crate::hierarchy::{HClass, Polarity};
use crate::ipc::PropFormula;
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::BTreeMap;

/// A term of depth at most `depth` over `vars`.
pub fn term<R: Rng + ?Sized>(rng: &mut R, vars: &[String], depth: u32) -> Term {
    let leaf = depth == 0 || rng.gen_bool(0.4);
    if leaf {
        return match vars.choose(rng) {
            Some(v) if rng.gen_bool(0.7) => Term::Var(v.clone()),
            _ => Term::numeral(rng.gen_range(0..3)),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..6) {
        0 => Term::succ(term(rng, vars, d)),
        1 => Term::add(term(rng, vars, d), term(rng, vars, d)),
        2 => Term::mul(term(rng, vars, d), term(rng, vars, d)),
        3 => Term::pair(term(rng, vars, d), term(rng, vars, d)),
        4 => Term::proj0(term(rng, vars, d)),
        _ => Term::proj1(term(rng, vars, d)),
    }
}

fn atom<R: Rng + ?Sized>(rng: &mut R, vars: &[String]) -> Formula {
    match rng.gen_range(0..5) {
        0 => Formula::Bot,
        1 | 2 => Formula::eq(term(rng, vars, 2), term(rng, vars, 2)),
        _ => Formula::lt(term(rng, vars, 2), term(rng, vars, 2)),
    }
}

/// A quantifier-free formula of connective depth at most `depth`.
pub fn quantifier_free<R: Rng + ?Sized>(rng: &mut R, vars: &[String], depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        let a = atom(rng, vars);
        return match rng.gen_range(0..4) {
            0 => Formula::not(a),
            1 => Formula::not(Formula::not(a)),
            _ => a,
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..4) {
        0 => Formula::and(quantifier_free(rng, vars, d), quantifier_free(rng, vars, d)),
        1 => Formula::or(quantifier_free(rng, vars, d), quantifier_free(rng, vars, d)),
        2 => Formula::imp(quantifier_free(rng, vars, d), quantifier_free(rng, vars, d)),
        _ => Formula::not(quantifier_free(rng, vars, d)),
    }
}

/// A prenex formula of exactly class `class` with at most `max_quantifiers`
/// quantifiers, free variables drawn from `free`.
///
/// Panics when `max_quantifiers` is below the class level.
pub fn prenex_in<R: Rng + ?Sized>(
    rng: &mut R,
    class: HClass,
    max_quantifiers: u32,
    free: &[&str],
) -> Formula {
    assert!(
        class.level <= max_quantifiers,
        "too few quantifiers for {class}"
    );
    let mut sizes = vec![1u32; class.level as usize];
    for _ in class.level..max_quantifiers {
        if sizes.is_empty() || rng.gen_bool(0.5) {
            break;
        }
        let i = rng.gen_range(0..sizes.len());
        sizes[i] += 1;
    }
    let mut vars: Vec<String> = free.iter().map(|s| s.to_string()).collect();
    let mut prefix = Vec::new();
    let mut exists = class.polarity == Polarity::Sigma;
    for size in sizes {
        for _ in 0..size {
            let name = format!("x{}", prefix.len());
            vars.push(name.clone());
            prefix.push((exists, name));
        }
        exists = !exists;
    }
    let mut f = quantifier_free(rng, &vars, 2);
    for (e, x) in prefix.into_iter().rev() {
        f = if e {
            Formula::exists(&x, f)
        } else {
            Formula::forall(&x, f)
        };
    }
    f
}

/// A prenex formula with at most `depth` quantifiers and level at most `max_level`.
pub fn prenex<R: Rng + ?Sized>(rng: &mut R, depth: u32, max_level: u32, free: &[&str]) -> Formula {
    let level = rng.gen_range(0..=max_level.min(depth));
    let polarity = if rng.gen_bool(0.5) {
        Polarity::Sigma
    } else {
        Polarity::Pi
    };
    prenex_in(rng, HClass::new(polarity, level), depth, free)
}

/// A propositional formula over `atoms` with at most `size` binary connectives.
pub fn prop<R: Rng + ?Sized>(rng: &mut R, atoms: &[&str], size: u32) -> PropFormula {
    if size == 0 {
        return match atoms.choose(rng) {
            Some(a) if rng.gen_bool(0.9) => PropFormula::atom(a),
            _ => PropFormula::Bot,
        };
    }
    let left = rng.gen_range(0..size);
    let right = size - 1 - left;
    let a = prop(rng, atoms, left);
    let b = prop(rng, atoms, right);
    match rng.gen_range(0..5) {
        0 => PropFormula::and(a, b),
        1 => PropFormula::or(a, b),
        2 => PropFormula::imp(a, b),
        3 => PropFormula::not(PropFormula::imp(a, b)),
        _ => PropFormula::imp(PropFormula::not(a), b),
    }
}

/// Replaces every unbounded quantifier `Q x.` by `Q x < bound.`; bounded
/// quantifiers keep their own bound.
pub fn bound_quantifiers(f: &Formula, bound: &Term) -> Formula {
    if let Some((x, t, body)) = f.as_bounded_exists() {
        return Formula::exists_below(x, t.clone(), bound_quantifiers(body, bound));
    }
    if let Some((x, t, body)) = f.as_bounded_forall() {
        return Formula::forall_below(x, t.clone(), bound_quantifiers(body, bound));
    }
    match f {
        Formula::Eq(..) | Formula::Lt(..) | Formula::Bot => f.clone(),
        Formula::And(a, b) => {
            Formula::and(bound_quantifiers(a, bound), bound_quantifiers(b, bound))
        }
        Formula::Or(a, b) => Formula::or(bound_quantifiers(a, bound), bound_quantifiers(b, bound)),
        Formula::Imp(a, b) => {
            Formula::imp(bound_quantifiers(a, bound), bound_quantifiers(b, bound))
        }
        Formula::Exists(x, body) => {
            Formula::exists_below(x, bound.clone(), bound_quantifiers(body, bound))
        }
        Formula::Forall(x, body) => {
            Formula::forall_below(x, bound.clone(), bound_quantifiers(body, bound))
        }
    }
}

/// Assigns every free variable of `f` a value below `max`.
pub fn environment<R: Rng + ?Sized>(rng: &mut R, f: &Formula, max: u64) -> BTreeMap<String, u64> {
    f.free_vars()
        .into_iter()
        .map(|v| (v, rng.gen_range(0..max)))
        .collect()
}
