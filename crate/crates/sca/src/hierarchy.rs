//! The arithmetical hierarchy: prenex classification, quantifier-block merging,
//! class expressions and theory-relative classification.

use crate::formula::{fresh_or_base, Formula, Term};
use crate::principles::{Family, PrincipleNode};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HierarchyError {
    #[error("formula is not prenex: {0}")]
    NotPrenex(String),
    #[error("cannot classify subformula {0}")]
    Unclassifiable(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarity {
    Sigma,
    Pi,
}

/// A class `Sigma k` or `Pi k`; level 0 is always stored as `Sigma 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HClass {
    pub polarity: Polarity,
    pub level: u32,
}

impl HClass {
    pub fn new(polarity: Polarity, level: u32) -> HClass {
        if level == 0 {
            HClass {
                polarity: Polarity::Sigma,
                level: 0,
            }
        } else {
            HClass { polarity, level }
        }
    }

    pub fn sigma(level: u32) -> HClass {
        HClass::new(Polarity::Sigma, level)
    }

    pub fn pi(level: u32) -> HClass {
        HClass::new(Polarity::Pi, level)
    }

    pub fn flip(self) -> HClass {
        let p = match self.polarity {
            Polarity::Sigma => Polarity::Pi,
            Polarity::Pi => Polarity::Sigma,
        };
        HClass::new(p, self.level)
    }

    pub fn to_class(self) -> Class {
        let kind = match self.polarity {
            Polarity::Sigma => Kind::Sigma,
            Polarity::Pi => Kind::Pi,
        };
        Class::new(kind, self.level, 0)
    }
}

impl fmt::Display for HClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.polarity {
            Polarity::Sigma => write!(f, "Sigma {}", self.level),
            Polarity::Pi => write!(f, "Pi {}", self.level),
        }
    }
}

/// Inclusion between syntactic classes, closed under transitivity.
pub fn class_subset(a: HClass, b: HClass) -> bool {
    a.level == 0 || a.level < b.level || (a.level == b.level && a.polarity == b.polarity)
}

pub fn is_prenex(f: &Formula) -> bool {
    match f {
        Formula::Exists(_, body) | Formula::Forall(_, body) => is_prenex(body),
        g => g.is_quantifier_free(),
    }
}

fn prefix(f: &Formula) -> Result<(Vec<(bool, String)>, &Formula), HierarchyError> {
    let mut out = Vec::new();
    let mut cur = f;
    loop {
        match cur {
            Formula::Exists(x, body) => {
                out.push((true, x.clone()));
                cur = body;
            }
            Formula::Forall(x, body) => {
                out.push((false, x.clone()));
                cur = body;
            }
            g if g.is_quantifier_free() => return Ok((out, g)),
            _ => return Err(HierarchyError::NotPrenex(f.to_string())),
        }
    }
}

pub fn classify_prenex(f: &Formula) -> Result<HClass, HierarchyError> {
    let (quants, _) = prefix(f)?;
    let Some(&(first, _)) = quants.first() else {
        return Ok(HClass::sigma(0));
    };
    let blocks = 1 + quants.windows(2).filter(|w| w[0].0 != w[1].0).count() as u32;
    Ok(if first {
        HClass::sigma(blocks)
    } else {
        HClass::pi(blocks)
    })
}

/// Contracts every block of like quantifiers into one quantifier over a pair code.
pub fn prenex_merge(f: &Formula) -> Result<Formula, HierarchyError> {
    let (quants, matrix) = prefix(f)?;
    let mut avoid = f.all_names();
    let mut blocks: Vec<(bool, Vec<String>)> = Vec::new();
    for (e, x) in quants {
        match blocks.last_mut() {
            Some((be, vars)) if *be == e => vars.push(x),
            _ => blocks.push((e, vec![x])),
        }
    }
    // substitutions are applied innermost-first to the matrix, so collect them
    let mut chosen: Vec<(bool, String, Vec<(String, Term)>)> = Vec::new();
    for (e, vars) in &blocks {
        if vars.len() == 1 {
            chosen.push((*e, vars[0].clone(), Vec::new()));
            continue;
        }
        let u = fresh_or_base("u", &avoid);
        avoid.insert(u.clone());
        // x1 ... xn encoded as pair(pair(...pair(x1, x2)...), xn)
        let mut code = Term::var(&u);
        let mut assignments = Vec::new();
        for x in vars.iter().skip(1).rev() {
            assignments.push((x.clone(), Term::proj1(code.clone())));
            code = Term::proj0(code);
        }
        assignments.push((vars[0].clone(), code));
        chosen.push((*e, u, assignments));
    }
    let mut body = matrix.clone();
    for (_, _, assignments) in chosen.iter().rev() {
        for (x, t) in assignments {
            body = body.substitute(x, t);
        }
    }
    for (e, v, _) in chosen.iter().rev() {
        body = if *e {
            Formula::exists(v, body)
        } else {
            Formula::forall(v, body)
        };
    }
    Ok(body)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Delta,
    Sigma,
    Pi,
    Top,
}

/// A ground class argument: `Sigma k`, `Pi k`, `Delta k`, their negations and
/// double negations, or `U`, the class of all formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Class {
    pub kind: Kind,
    pub level: u32,
    pub neg: u8,
}

impl Class {
    /// Canonical form: level 0 is quantifier-free, closed under negation.
    pub fn new(kind: Kind, level: u32, neg: u8) -> Class {
        if kind == Kind::Top {
            return Class {
                kind,
                level: 0,
                neg: 0,
            };
        }
        if level == 0 {
            return Class {
                kind: Kind::Sigma,
                level: 0,
                neg: 0,
            };
        }
        let neg = if neg >= 3 { 2 - neg % 2 } else { neg };
        Class { kind, level, neg }
    }

    pub fn sigma(k: u32) -> Class {
        Class::new(Kind::Sigma, k, 0)
    }

    pub fn pi(k: u32) -> Class {
        Class::new(Kind::Pi, k, 0)
    }

    pub fn delta(k: u32) -> Class {
        Class::new(Kind::Delta, k, 0)
    }

    pub fn top() -> Class {
        Class::new(Kind::Top, 0, 0)
    }

    /// `None` for the top class, which has no negation here.
    pub fn negate(self) -> Option<Class> {
        if self.kind == Kind::Top {
            return None;
        }
        Some(Class::new(self.kind, self.level, self.neg + 1))
    }

    pub fn base(self) -> Class {
        Class::new(self.kind, self.level, 0)
    }

    pub fn is_top(self) -> bool {
        self.kind == Kind::Top
    }

    fn sort_key(self) -> (bool, u8, Kind, u32) {
        (self.kind == Kind::Top, self.neg, self.kind, self.level)
    }

    pub fn hclass(self) -> Option<HClass> {
        match (self.kind, self.neg) {
            (Kind::Sigma, 0) => Some(HClass::sigma(self.level)),
            (Kind::Pi, 0) => Some(HClass::pi(self.level)),
            _ => None,
        }
    }

    /// Every class of level at most `kmax`, in canonical order.
    pub fn universe(kmax: u32) -> Vec<Class> {
        let mut out = vec![Class::sigma(0)];
        for neg in 0..3 {
            for level in 1..=kmax {
                for kind in [Kind::Delta, Kind::Sigma, Kind::Pi] {
                    out.push(Class::new(kind, level, neg));
                }
            }
        }
        out.push(Class::top());
        out.sort();
        out
    }
}

impl PartialOrd for Class {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Class {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = match self.kind {
            Kind::Top => return write!(f, "U"),
            Kind::Sigma => "S",
            Kind::Pi => "P",
            Kind::Delta => "D",
        };
        for _ in 0..self.neg {
            write!(f, "n")?;
        }
        write!(f, "{letter}{}", self.level)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad class literal `{0}`")]
pub struct ClassSyntaxError(pub String);

impl FromStr for Class {
    type Err = ClassSyntaxError;

    fn from_str(s: &str) -> Result<Class, ClassSyntaxError> {
        match ClassExpr::from_str(s) {
            Ok(ClassExpr::Lit { kind, level, neg }) if !level.uses_k => {
                if level.offset < 0 {
                    return Err(ClassSyntaxError(s.to_string()));
                }
                Ok(Class::new(kind, level.offset as u32, neg))
            }
            Ok(ClassExpr::Top) => Ok(Class::top()),
            _ => Err(ClassSyntaxError(s.to_string())),
        }
    }
}

/// A level `k + offset`, or the constant `offset` when `uses_k` is false.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelExpr {
    pub uses_k: bool,
    pub offset: i64,
}

impl LevelExpr {
    pub fn at(self, k: u32) -> i64 {
        if self.uses_k {
            k as i64 + self.offset
        } else {
            self.offset
        }
    }
}

impl fmt::Display for LevelExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.uses_k, self.offset) {
            (false, c) => write!(f, "{c}"),
            (true, 0) => write!(f, "k"),
            (true, c) if c > 0 => write!(f, "(k+{c})"),
            (true, c) => write!(f, "(k-{})", -c),
        }
    }
}

/// A class pattern over the level variable `k`, with optional class variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassExpr {
    Lit {
        kind: Kind,
        level: LevelExpr,
        neg: u8,
    },
    Var {
        name: String,
        neg: u8,
    },
    Top,
    Empty,
}

impl ClassExpr {
    /// Ground instance at level `k`: `Ok(None)` is the empty class.
    pub fn ground(&self, k: u32, lookup: &dyn Fn(&str) -> Option<Class>) -> Option<Option<Class>> {
        match self {
            ClassExpr::Lit { kind, level, neg } => {
                let l = level.at(k);
                if l < 0 {
                    Some(None)
                } else {
                    Some(Some(Class::new(*kind, l as u32, *neg)))
                }
            }
            ClassExpr::Var { name, neg } => {
                let mut c = lookup(name)?;
                for _ in 0..*neg {
                    c = c.negate()?;
                }
                Some(Some(c))
            }
            ClassExpr::Top => Some(Some(Class::top())),
            ClassExpr::Empty => Some(None),
        }
    }

    pub fn uses_k(&self) -> bool {
        matches!(self, ClassExpr::Lit { level, .. } if level.uses_k)
    }
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassExpr::Lit { kind, level, neg } => {
                for _ in 0..*neg {
                    write!(f, "n")?;
                }
                let letter = match kind {
                    Kind::Sigma => "S",
                    Kind::Pi => "P",
                    Kind::Delta => "D",
                    Kind::Top => "U",
                };
                write!(f, "{letter}{level}")
            }
            ClassExpr::Var { name, neg } => {
                for _ in 0..*neg {
                    write!(f, "n")?;
                }
                write!(f, "${name}")
            }
            ClassExpr::Top => write!(f, "U"),
            ClassExpr::Empty => write!(f, "EMPTY"),
        }
    }
}

impl FromStr for ClassExpr {
    type Err = ClassSyntaxError;

    fn from_str(src: &str) -> Result<ClassExpr, ClassSyntaxError> {
        let err = || ClassSyntaxError(src.to_string());
        let s = src.trim();
        if s == "U" {
            return Ok(ClassExpr::Top);
        }
        if s == "EMPTY" {
            return Ok(ClassExpr::Empty);
        }
        let neg = s.bytes().take_while(|&b| b == b'n').count();
        if neg > 2 {
            return Err(err());
        }
        let rest = &s[neg..];
        if let Some(name) = rest.strip_prefix('$') {
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric()) {
                return Err(err());
            }
            return Ok(ClassExpr::Var {
                name: name.to_string(),
                neg: neg as u8,
            });
        }
        let mut chars = rest.chars();
        let kind = match chars.next() {
            Some('S') => Kind::Sigma,
            Some('P') => Kind::Pi,
            Some('D') => Kind::Delta,
            _ => return Err(err()),
        };
        let lvl: String = chars.collect::<String>().replace(' ', "");
        let inner = lvl
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .unwrap_or(&lvl);
        let level = if let Some(off) = inner.strip_prefix('k') {
            let offset = if off.is_empty() {
                0
            } else if let Some(n) = off.strip_prefix('+') {
                n.parse::<i64>().map_err(|_| err())?
            } else if let Some(n) = off.strip_prefix('-') {
                -n.parse::<i64>().map_err(|_| err())?
            } else {
                return Err(err());
            };
            LevelExpr {
                uses_k: true,
                offset,
            }
        } else {
            if inner.is_empty() || !inner.chars().all(|c| c.is_ascii_digit()) {
                return Err(err());
            }
            LevelExpr {
                uses_k: false,
                offset: inner.parse::<i64>().map_err(|_| err())?,
            }
        };
        Ok(ClassExpr::Lit {
            kind,
            level,
            neg: neg as u8,
        })
    }
}

/// The principles assumed on top of HA when classifying relative to a theory.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TheoryStrength {
    pub nodes: BTreeSet<PrincipleNode>,
}

impl TheoryStrength {
    pub fn ha() -> TheoryStrength {
        TheoryStrength::default()
    }

    pub fn with_nodes<I: IntoIterator<Item = PrincipleNode>>(nodes: I) -> TheoryStrength {
        TheoryStrength {
            nodes: nodes.into_iter().collect(),
        }
    }

    /// `DNE Sigma_j`; levels at most 0 hold in HA.
    fn dne_sigma(&self, j: i64) -> bool {
        j <= 0
            || (self
                .nodes
                .contains(&PrincipleNode::unary(Family::Dne, Class::sigma(j as u32))))
    }

    /// `DML Sigma_j`; levels at most 0 hold in HA.
    fn dml_sigma(&self, j: i64) -> bool {
        j <= 0
            || (self
                .nodes
                .contains(&PrincipleNode::unary(Family::Dml, Class::sigma(j as u32))))
    }
}

/// Lowest class (ties toward Sigma) justified by the rewrite families over `t`.
pub fn relative_classify(f: &Formula, t: &TheoryStrength) -> Result<HClass, HierarchyError> {
    if f.is_quantifier_free() {
        return Ok(HClass::sigma(0));
    }
    if let Some((_, _, body)) = f.as_bounded_exists() {
        let c = relative_classify(body, t)?;
        return Ok(match c.polarity {
            _ if c.level == 0 => c,
            Polarity::Sigma => c,
            Polarity::Pi => {
                let k = c.level as i64;
                if t.dml_sigma(k) && t.dne_sigma(k - 1) {
                    c
                } else {
                    HClass::sigma(c.level + 1)
                }
            }
        });
    }
    if let Some((_, _, body)) = f.as_bounded_forall() {
        let c = relative_classify(body, t)?;
        return Ok(match c.polarity {
            _ if c.level == 0 => c,
            Polarity::Pi => c,
            Polarity::Sigma => {
                let k = c.level as i64;
                if t.dml_sigma(k - 1) && t.dne_sigma(k - 2) {
                    c
                } else {
                    HClass::pi(c.level + 1)
                }
            }
        });
    }
    match f {
        Formula::Exists(_, body) => {
            let c = relative_classify(body, t)?;
            Ok(match c.polarity {
                Polarity::Sigma if c.level > 0 => c,
                _ => HClass::sigma(c.level + 1),
            })
        }
        Formula::Forall(_, body) => {
            let c = relative_classify(body, t)?;
            Ok(match c.polarity {
                Polarity::Pi => c,
                Polarity::Sigma if c.level > 0 => HClass::pi(c.level + 1),
                Polarity::Sigma => HClass::pi(1),
            })
        }
        Formula::Imp(a, b) if **b == Formula::Bot => {
            let c = relative_classify(a, t)?;
            let k = c.level as i64;
            match c.polarity {
                Polarity::Sigma if t.dne_sigma(k - 1) => Ok(HClass::pi(c.level)),
                Polarity::Pi if t.dne_sigma(k) => Ok(HClass::sigma(c.level)),
                _ => Err(HierarchyError::Unclassifiable(f.to_string())),
            }
        }
        _ => Err(HierarchyError::Unclassifiable(f.to_string())),
    }
}
