//! Terms and formulas of first-order arithmetic.
//!
//! Negation, equivalence and bounded quantifiers are sugar: `~f` is `f -> bot`,
//! `f <-> g` is `(f -> g) /\ (g -> f)`, `E x < t. f` is `E x. (x < t /\ f)` and
//! `A x < t. f` is `A x. (x < t -> f)`.

mod eval;
pub(crate) mod parse;
mod print;

use std::collections::BTreeSet;

pub use eval::{eval_bounded, eval_term, pair, unpair, EvalError};
pub use parse::{parse, parse_term, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Zero,
    Succ(Box<Term>),
    Add(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    Proj0(Box<Term>),
    Proj1(Box<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Eq(Term, Term),
    Lt(Term, Term),
    Bot,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn succ(t: Term) -> Term {
        Term::Succ(Box::new(t))
    }

    pub fn add(a: Term, b: Term) -> Term {
        Term::Add(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Box::new(a), Box::new(b))
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Box::new(a), Box::new(b))
    }

    pub fn proj0(t: Term) -> Term {
        Term::Proj0(Box::new(t))
    }

    pub fn proj1(t: Term) -> Term {
        Term::Proj1(Box::new(t))
    }

    /// The numeral `S(S(...0))`.
    pub fn numeral(n: u64) -> Term {
        (0..n).fold(Term::Zero, |t, _| Term::succ(t))
    }

    pub fn vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Zero => {}
            Term::Succ(t) | Term::Proj0(t) | Term::Proj1(t) => t.vars(out),
            Term::Add(a, b) | Term::Mul(a, b) | Term::Pair(a, b) => {
                a.vars(out);
                b.vars(out);
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.vars(&mut out);
        out
    }

    pub fn has_var(&self, v: &str) -> bool {
        match self {
            Term::Var(x) => x == v,
            Term::Zero => false,
            Term::Succ(t) | Term::Proj0(t) | Term::Proj1(t) => t.has_var(v),
            Term::Add(a, b) | Term::Mul(a, b) | Term::Pair(a, b) => a.has_var(v) || b.has_var(v),
        }
    }

    pub fn substitute(&self, v: &str, s: &Term) -> Term {
        match self {
            Term::Var(x) if x == v => s.clone(),
            Term::Var(_) | Term::Zero => self.clone(),
            Term::Succ(t) => Term::succ(t.substitute(v, s)),
            Term::Proj0(t) => Term::proj0(t.substitute(v, s)),
            Term::Proj1(t) => Term::proj1(t.substitute(v, s)),
            Term::Add(a, b) => Term::add(a.substitute(v, s), b.substitute(v, s)),
            Term::Mul(a, b) => Term::mul(a.substitute(v, s), b.substitute(v, s)),
            Term::Pair(a, b) => Term::pair(a.substitute(v, s), b.substitute(v, s)),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Zero => 1,
            Term::Succ(t) | Term::Proj0(t) | Term::Proj1(t) => 1 + t.size(),
            Term::Add(a, b) | Term::Mul(a, b) | Term::Pair(a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl Formula {
    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Eq(a, b)
    }

    pub fn lt(a: Term, b: Term) -> Formula {
        Formula::Lt(a, b)
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn not(a: Formula) -> Formula {
        Formula::imp(a, Formula::Bot)
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    pub fn exists(v: &str, body: Formula) -> Formula {
        Formula::Exists(v.to_string(), Box::new(body))
    }

    pub fn forall(v: &str, body: Formula) -> Formula {
        Formula::Forall(v.to_string(), Box::new(body))
    }

    pub fn exists_below(v: &str, bound: Term, body: Formula) -> Formula {
        Formula::exists(v, Formula::and(Formula::lt(Term::var(v), bound), body))
    }

    pub fn forall_below(v: &str, bound: Term, body: Formula) -> Formula {
        Formula::forall(v, Formula::imp(Formula::lt(Term::var(v), bound), body))
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Eq(..) | Formula::Lt(..) | Formula::Bot)
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Eq(..) | Formula::Lt(..) | Formula::Bot => true,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }

    /// `Some(g)` when the formula is `g -> bot`.
    pub fn as_negation(&self) -> Option<&Formula> {
        match self {
            Formula::Imp(a, b) if **b == Formula::Bot => Some(a),
            _ => None,
        }
    }

    /// Matches `E x. (x < t /\ body)` with `x` not free in `t`.
    pub fn as_bounded_exists(&self) -> Option<(&str, &Term, &Formula)> {
        if let Formula::Exists(x, body) = self {
            if let Formula::And(l, r) = &**body {
                if let Formula::Lt(Term::Var(y), t) = &**l {
                    if y == x && !t.has_var(x) {
                        return Some((x, t, r));
                    }
                }
            }
        }
        None
    }

    /// Matches `A x. (x < t -> body)` with `x` not free in `t`.
    pub fn as_bounded_forall(&self) -> Option<(&str, &Term, &Formula)> {
        if let Formula::Forall(x, body) = self {
            if let Formula::Imp(l, r) = &**body {
                if let Formula::Lt(Term::Var(y), t) = &**l {
                    if y == x && !t.has_var(x) {
                        return Some((x, t, r));
                    }
                }
            }
        }
        None
    }

    /// Matches `(a -> b) /\ (b -> a)`.
    pub fn as_iff(&self) -> Option<(&Formula, &Formula)> {
        if let Formula::And(l, r) = self {
            if let (Formula::Imp(a, b), Formula::Imp(c, d)) = (&**l, &**r) {
                if a == d && b == c {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Eq(a, b) | Formula::Lt(a, b) => {
                for v in a.free_vars().into_iter().chain(b.free_vars()) {
                    if !bound.contains(&v) {
                        out.insert(v);
                    }
                }
            }
            Formula::Bot => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(x, body) | Formula::Forall(x, body) => {
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn has_free(&self, v: &str) -> bool {
        match self {
            Formula::Eq(a, b) | Formula::Lt(a, b) => a.has_var(v) || b.has_var(v),
            Formula::Bot => false,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.has_free(v) || b.has_free(v)
            }
            Formula::Exists(x, body) | Formula::Forall(x, body) => x != v && body.has_free(v),
        }
    }

    /// Every variable name occurring in the formula, free or bound.
    pub fn all_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Eq(a, b) | Formula::Lt(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Formula::Bot => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
            Formula::Exists(x, body) | Formula::Forall(x, body) => {
                out.insert(x.clone());
                body.collect_names(out);
            }
        }
    }

    /// Capture-avoiding substitution of `t` for the free occurrences of `v`.
    pub fn substitute(&self, v: &str, t: &Term) -> Formula {
        let mut avoid = self.all_names();
        t.vars(&mut avoid);
        avoid.insert(v.to_string());
        self.subst_avoiding(v, t, &t.free_vars(), &mut avoid)
    }

    fn subst_avoiding(
        &self,
        v: &str,
        t: &Term,
        tfv: &BTreeSet<String>,
        avoid: &mut BTreeSet<String>,
    ) -> Formula {
        match self {
            Formula::Eq(a, b) => Formula::Eq(a.substitute(v, t), b.substitute(v, t)),
            Formula::Lt(a, b) => Formula::Lt(a.substitute(v, t), b.substitute(v, t)),
            Formula::Bot => Formula::Bot,
            Formula::And(a, b) => Formula::and(
                a.subst_avoiding(v, t, tfv, avoid),
                b.subst_avoiding(v, t, tfv, avoid),
            ),
            Formula::Or(a, b) => Formula::or(
                a.subst_avoiding(v, t, tfv, avoid),
                b.subst_avoiding(v, t, tfv, avoid),
            ),
            Formula::Imp(a, b) => Formula::imp(
                a.subst_avoiding(v, t, tfv, avoid),
                b.subst_avoiding(v, t, tfv, avoid),
            ),
            Formula::Exists(x, body) | Formula::Forall(x, body) => {
                if x == v || !body.has_free(v) {
                    return self.clone();
                }
                let (x2, body2) = if tfv.contains(x) {
                    let fresh = fresh_name(x, avoid);
                    avoid.insert(fresh.clone());
                    let renamed = body.substitute(x, &Term::Var(fresh.clone()));
                    (fresh, renamed)
                } else {
                    (x.clone(), (**body).clone())
                };
                let inner = body2.subst_avoiding(v, t, tfv, avoid);
                match self {
                    Formula::Exists(..) => Formula::Exists(x2, Box::new(inner)),
                    _ => Formula::Forall(x2, Box::new(inner)),
                }
            }
        }
    }

    /// Key identifying the formula up to renaming of bound variables.
    pub fn alpha_key(&self) -> String {
        let mut out = String::new();
        self.write_alpha_key(&mut Vec::new(), &mut out);
        out
    }

    fn write_alpha_key(&self, bound: &mut Vec<String>, out: &mut String) {
        match self {
            Formula::Eq(a, b) | Formula::Lt(a, b) => {
                out.push(if matches!(self, Formula::Eq(..)) {
                    '='
                } else {
                    '<'
                });
                out.push('(');
                write_term_key(a, bound, out);
                out.push(',');
                write_term_key(b, bound, out);
                out.push(')');
            }
            Formula::Bot => out.push('F'),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                out.push(match self {
                    Formula::And(..) => '&',
                    Formula::Or(..) => '|',
                    _ => '>',
                });
                out.push('(');
                a.write_alpha_key(bound, out);
                out.push(',');
                b.write_alpha_key(bound, out);
                out.push(')');
            }
            Formula::Exists(x, body) | Formula::Forall(x, body) => {
                out.push(if matches!(self, Formula::Exists(..)) {
                    'E'
                } else {
                    'A'
                });
                out.push('.');
                bound.push(x.clone());
                body.write_alpha_key(bound, out);
                bound.pop();
            }
        }
    }

    pub fn alpha_eq(&self, other: &Formula) -> bool {
        self.alpha_key() == other.alpha_key()
    }

    /// Number of connectives, quantifiers and atoms.
    pub fn size(&self) -> usize {
        match self {
            Formula::Eq(a, b) | Formula::Lt(a, b) => 1 + a.size() + b.size(),
            Formula::Bot => 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.size() + b.size(),
            Formula::Exists(_, body) | Formula::Forall(_, body) => 1 + body.size(),
        }
    }

    /// Quantifier nesting depth.
    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::Eq(..) | Formula::Lt(..) | Formula::Bot => 0,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.quantifier_depth().max(b.quantifier_depth())
            }
            Formula::Exists(_, body) | Formula::Forall(_, body) => 1 + body.quantifier_depth(),
        }
    }
}

fn write_term_key(t: &Term, bound: &[String], out: &mut String) {
    match t {
        Term::Var(v) => match bound.iter().rposition(|b| b == v) {
            Some(i) => {
                out.push('#');
                out.push_str(&(bound.len() - 1 - i).to_string());
            }
            None => {
                out.push('$');
                out.push_str(v);
            }
        },
        Term::Zero => out.push('0'),
        Term::Succ(a) | Term::Proj0(a) | Term::Proj1(a) => {
            out.push_str(match t {
                Term::Succ(_) => "S(",
                Term::Proj0(_) => "p0(",
                _ => "p1(",
            });
            write_term_key(a, bound, out);
            out.push(')');
        }
        Term::Add(a, b) | Term::Mul(a, b) | Term::Pair(a, b) => {
            out.push_str(match t {
                Term::Add(..) => "+(",
                Term::Mul(..) => "*(",
                _ => "pair(",
            });
            write_term_key(a, bound, out);
            out.push(',');
            write_term_key(b, bound, out);
            out.push(')');
        }
    }
}

/// `base` followed by the smallest numeric suffix that is not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "v" } else { stem };
    (1u64..)
        .map(|n| format!("{stem}{n}"))
        .find(|cand| !avoid.contains(cand))
        .expect("unbounded suffix search")
}

/// Like [`fresh_name`] but returns `base` itself when it is unused.
pub fn fresh_or_base(base: &str, avoid: &BTreeSet<String>) -> String {
    if avoid.contains(base) {
        fresh_name(base, avoid)
    } else {
        base.to_string()
    }
}

/// Rewrites every `~~a` with `a` an atom to `a`.
pub fn collapse_atom_negations(f: &Formula) -> Formula {
    let mut cur = collapse_once(f);
    loop {
        let next = collapse_once(&cur);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

fn collapse_once(f: &Formula) -> Formula {
    match f {
        Formula::Eq(..) | Formula::Lt(..) | Formula::Bot => f.clone(),
        Formula::Imp(a, b) if **b == Formula::Bot => {
            let inner = collapse_once(a);
            if let Some(atom) = inner.as_negation() {
                if atom.is_atom() {
                    return atom.clone();
                }
            }
            Formula::not(inner)
        }
        Formula::And(a, b) => Formula::and(collapse_once(a), collapse_once(b)),
        Formula::Or(a, b) => Formula::or(collapse_once(a), collapse_once(b)),
        Formula::Imp(a, b) => Formula::imp(collapse_once(a), collapse_once(b)),
        Formula::Exists(x, body) => Formula::Exists(x.clone(), Box::new(collapse_once(body))),
        Formula::Forall(x, body) => Formula::Forall(x.clone(), Box::new(collapse_once(body))),
    }
}
