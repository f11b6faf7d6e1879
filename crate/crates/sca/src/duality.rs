//! The dual of a prenex formula and its basic laws.

use crate::formula::Formula;
use crate::hierarchy::{is_prenex, HierarchyError};

pub fn dual(f: &Formula) -> Result<Formula, HierarchyError> {
    if !is_prenex(f) {
        return Err(HierarchyError::NotPrenex(f.to_string()));
    }
    Ok(dual_unchecked(f))
}

fn dual_unchecked(f: &Formula) -> Formula {
    match f {
        Formula::Exists(x, body) => Formula::forall(x, dual_unchecked(body)),
        Formula::Forall(x, body) => Formula::exists(x, dual_unchecked(body)),
        g => Formula::not(g.clone()),
    }
}

/// `[f^⊥ -> ~f, ~(f /\ f^⊥)]`, used as trusted hypotheses during rule checking.
pub fn dual_law_instances(f: &Formula) -> Result<Vec<Formula>, HierarchyError> {
    let d = dual(f)?;
    Ok(vec![
        Formula::imp(d.clone(), Formula::not(f.clone())),
        Formula::not(Formula::and(f.clone(), d)),
    ])
}
