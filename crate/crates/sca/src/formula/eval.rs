use super::{Formula, Term};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("quantifier over `{0}` is not bounded")]
    UnboundedQuantifier(String),
    #[error("no value assigned to `{0}`")]
    MissingAssignment(String),
    #[error("arithmetic overflow while evaluating `{0}`")]
    Overflow(String),
}

/// Cantor pairing `(a+b)(a+b+1)/2 + b`.
pub fn pair(a: u64, b: u64) -> Option<u64> {
    let s = a.checked_add(b)?;
    let tri = (s as u128) * (s as u128 + 1) / 2;
    u64::try_from(tri + b as u128).ok()
}

/// Inverse of [`pair`]: returns `(p0 z, p1 z)`.
pub fn unpair(z: u64) -> (u64, u64) {
    let z = z as u128;
    let mut w = ((8 * z + 1).isqrt() - 1) / 2;
    while w * (w + 1) / 2 > z {
        w -= 1;
    }
    while (w + 1) * (w + 2) / 2 <= z {
        w += 1;
    }
    let b = z - w * (w + 1) / 2;
    let a = w - b;
    (a as u64, b as u64)
}

pub fn eval_term(t: &Term, env: &BTreeMap<String, u64>) -> Result<u64, EvalError> {
    let overflow = || EvalError::Overflow(t.to_string());
    Ok(match t {
        Term::Var(v) => *env
            .get(v)
            .ok_or_else(|| EvalError::MissingAssignment(v.clone()))?,
        Term::Zero => 0,
        Term::Succ(a) => eval_term(a, env)?.checked_add(1).ok_or_else(overflow)?,
        Term::Add(a, b) => eval_term(a, env)?
            .checked_add(eval_term(b, env)?)
            .ok_or_else(overflow)?,
        Term::Mul(a, b) => eval_term(a, env)?
            .checked_mul(eval_term(b, env)?)
            .ok_or_else(overflow)?,
        Term::Pair(a, b) => pair(eval_term(a, env)?, eval_term(b, env)?).ok_or_else(overflow)?,
        Term::Proj0(a) => unpair(eval_term(a, env)?).0,
        Term::Proj1(a) => unpair(eval_term(a, env)?).1,
    })
}

/// Truth in the standard model, for formulas whose quantifiers are all bounded.
pub fn eval_bounded(f: &Formula, env: &BTreeMap<String, u64>) -> Result<bool, EvalError> {
    let mut env = env.clone();
    eval_in(f, &mut env)
}

fn eval_in(f: &Formula, env: &mut BTreeMap<String, u64>) -> Result<bool, EvalError> {
    if let Some((x, t, body)) = f.as_bounded_exists() {
        let n = eval_term(t, env)?;
        return quantify(x, n, body, env, true);
    }
    if let Some((x, t, body)) = f.as_bounded_forall() {
        let n = eval_term(t, env)?;
        return quantify(x, n, body, env, false);
    }
    match f {
        Formula::Eq(a, b) => Ok(eval_term(a, env)? == eval_term(b, env)?),
        Formula::Lt(a, b) => Ok(eval_term(a, env)? < eval_term(b, env)?),
        Formula::Bot => Ok(false),
        Formula::And(a, b) => Ok(eval_in(a, env)? && eval_in(b, env)?),
        Formula::Or(a, b) => Ok(eval_in(a, env)? || eval_in(b, env)?),
        Formula::Imp(a, b) => Ok(!eval_in(a, env)? || eval_in(b, env)?),
        Formula::Exists(x, _) | Formula::Forall(x, _) => {
            Err(EvalError::UnboundedQuantifier(x.clone()))
        }
    }
}

fn quantify(
    x: &str,
    n: u64,
    body: &Formula,
    env: &mut BTreeMap<String, u64>,
    exists: bool,
) -> Result<bool, EvalError> {
    let saved = env.get(x).copied();
    let mut result = !exists;
    for i in 0..n {
        env.insert(x.to_string(), i);
        let v = eval_in(body, env);
        match v {
            Ok(b) if b == exists => {
                result = exists;
                break;
            }
            Ok(_) => {}
            Err(e) => {
                restore(env, x, saved);
                return Err(e);
            }
        }
    }
    restore(env, x, saved);
    Ok(result)
}

fn restore(env: &mut BTreeMap<String, u64>, x: &str, saved: Option<u64>) {
    match saved {
        Some(v) => {
            env.insert(x.to_string(), v);
        }
        None => {
            env.remove(x);
        }
    }
}
