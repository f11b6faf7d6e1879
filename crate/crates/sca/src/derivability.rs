//! Level-parametric implication rules between principles, their closure,
//! derivability queries, separation facts and figure export.

use crate::hierarchy::{Class, ClassExpr, Kind};
use crate::ipc::{lemma_library, verify_rule, VerifyStatus};
use crate::principles::{Family, NodeError, PrincipleNode, Variant};
use serde::Deserialize;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

pub const SHIPPED_RULEBASE: &str = include_str!("../data/rulebase.json");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error("schema error: {0}")]
    SchemaError(String),
    #[error("rule `{0}` has no citation quote")]
    MissingCitation(String),
    #[error("unknown principle family `{0}`")]
    UnknownFamily(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("{node} has level {level}, above k_max = {k_max}")]
    LevelOutOfRange {
        node: String,
        level: u32,
        k_max: u32,
    },
}

/// A node over the level variable `k` and class variables, e.g. `DNE:S(k-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodePattern {
    pub family: Family,
    pub variant: Variant,
    pub args: Vec<ClassExpr>,
}

/// Values of the single-letter class variables of a rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Binding([Option<Class>; 26]);

fn var_slot(name: &str) -> Option<usize> {
    match name.as_bytes() {
        [c] if c.is_ascii_uppercase() => Some((c - b'A') as usize),
        _ => None,
    }
}

impl Binding {
    pub fn new() -> Binding {
        Binding::default()
    }

    pub fn get(&self, name: &str) -> Option<Class> {
        var_slot(name).and_then(|i| self.0[i])
    }

    pub fn contains(&self, name: &str) -> bool {
        self.get(name).is_some()
    }

    pub fn insert(&mut self, name: &str, c: Class) {
        if let Some(i) = var_slot(name) {
            self.0[i] = Some(c);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ground {
    Node(PrincipleNode),
    Empty,
    Invalid,
    Unbound,
}

impl NodePattern {
    fn vars(&self) -> BTreeSet<String> {
        self.args
            .iter()
            .filter_map(|a| match a {
                ClassExpr::Var { name, .. } => Some(name.clone()),
                _ => None,
            })
            .collect()
    }

    fn uses_k(&self) -> bool {
        self.args.iter().any(ClassExpr::uses_k)
    }

    pub fn ground(&self, k: u32, bind: &Binding) -> Ground {
        let mut classes = [Class::top(); 2];
        for (i, a) in self.args.iter().enumerate() {
            match a.ground(k, &|n| bind.get(n)) {
                None if matches!(a, ClassExpr::Var { name, .. } if !bind.contains(name)) => {
                    return Ground::Unbound
                }
                None => return Ground::Invalid,
                Some(None) => return Ground::Empty,
                Some(Some(c)) => classes[i] = c,
            }
        }
        match PrincipleNode::new(self.family, self.variant, &classes[..self.args.len()]) {
            Ok(n) => Ground::Node(n),
            Err(_) => Ground::Invalid,
        }
    }

    /// Every extension of `bind` under which this pattern grounds to `node`.
    fn unify(&self, node: &PrincipleNode, k: u32, bind: &Binding) -> Vec<Binding> {
        let mut out = Vec::new();
        if self.family != node.family {
            return out;
        }
        let variant_ok = match self.variant {
            Variant::Plain | Variant::Delta => {
                matches!(node.variant, Variant::Plain | Variant::Delta)
            }
            v => v == node.variant,
        };
        let arity = if node.b.is_some() { 2 } else { 1 };
        let expanded = if self.args.len() == 1 && self.family.arity() == 2 {
            2
        } else {
            self.args.len()
        };
        if !variant_ok || expanded != arity {
            return out;
        }
        let a = [node.a, node.b.unwrap_or(node.a)];
        let swap = arity == 2
            && a[0] != a[1]
            && self.family.symmetric()
            && matches!(node.variant, Variant::Plain | Variant::Delta);
        let p0 = &self.args[0];
        let p1 = self.args.last().expect("pattern has arguments");
        let orders: &[[Class; 2]] = if swap {
            &[[a[0], a[1]], [a[1], a[0]]]
        } else {
            &[[a[0], a[1]]]
        };
        for order in orders {
            match_class(p0, order[0], k, *bind, &mut |b1| {
                let mut finish = |b2: Binding| {
                    if !out.contains(&b2) && self.ground(k, &b2) == Ground::Node(*node) {
                        out.push(b2);
                    }
                };
                if arity == 2 {
                    match_class(p1, order[1], k, b1, &mut finish);
                } else {
                    finish(b1);
                }
            });
        }
        out
    }
}

fn match_class(p: &ClassExpr, c: Class, k: u32, bind: Binding, emit: &mut dyn FnMut(Binding)) {
    match p {
        ClassExpr::Var { name, neg } if !bind.contains(name) => {
            for g_neg in 0..3u8 {
                let g = Class::new(c.kind, c.level, g_neg);
                if g_neg > 0 && g == Class::new(c.kind, c.level, g_neg - 1) {
                    continue;
                }
                let mut x = Some(g);
                for _ in 0..*neg {
                    x = x.and_then(Class::negate);
                }
                if x == Some(c) {
                    let mut b = bind;
                    b.insert(name, g);
                    emit(b);
                }
            }
        }
        _ => {
            if let Some(Some(g)) = p.ground(k, &|n| bind.get(n)) {
                if g == c {
                    emit(bind);
                }
            }
        }
    }
}

/// Levels `k` at which `p` can ground to a node with the classes of `n`.
fn candidate_levels(p: &NodePattern, n: &PrincipleNode, rule: &Rule, k_max: u32) -> Vec<u32> {
    let range = levels(rule, k_max);
    if !rule.uses_k() || !p.uses_k() {
        return range.collect();
    }
    let mut out = Vec::new();
    for e in &p.args {
        if let ClassExpr::Lit { level, .. } = e {
            if level.uses_k {
                for c in n.args() {
                    let k = c.level as i64 - level.offset;
                    if k >= 0 && range.contains(&(k as u32)) && !out.contains(&(k as u32)) {
                        out.push(k as u32);
                    }
                }
            }
        }
    }
    out
}

impl fmt::Display for NodePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family.name())?;
        match self.variant {
            Variant::DeltaSigma => write!(f, ":DSIG")?,
            Variant::DeltaPi => write!(f, ":DPI")?,
            _ => {}
        }
        for a in &self.args {
            write!(f, ":{a}")?;
        }
        Ok(())
    }
}

impl FromStr for NodePattern {
    type Err = LoadError;

    fn from_str(s: &str) -> Result<NodePattern, LoadError> {
        let parts: Vec<&str> = s.trim().split(':').map(str::trim).collect();
        let family = Family::from_name(parts[0])
            .ok_or_else(|| LoadError::UnknownFamily(parts[0].to_string()))?;
        let (variant, rest) = match parts.get(1) {
            Some(&"DSIG") => (Variant::DeltaSigma, &parts[2..]),
            Some(&"DPI") => (Variant::DeltaPi, &parts[2..]),
            _ => (Variant::Plain, &parts[1..]),
        };
        let args = rest
            .iter()
            .map(|a| {
                a.parse::<ClassExpr>()
                    .map_err(|e| LoadError::SchemaError(format!("{s}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let arity_ok = match family.arity() {
            2 => {
                args.len() == 2
                    || (args.len() == 1 && family == Family::Dml)
                    || (args.len() == 1 && family == Family::DmlBot && variant == Variant::Plain)
            }
            n => args.len() == n,
        };
        if !arity_ok {
            return Err(LoadError::SchemaError(format!(
                "{s}: wrong number of class arguments"
            )));
        }
        Ok(NodePattern {
            family,
            variant,
            args,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct Citation {
    #[serde(rename = "ref")]
    pub reference: String,
    pub quote: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyKind {
    Propositional,
    FirstOrder,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifySpec {
    pub kind: VerifyKind,
    pub skeleton: Option<String>,
    pub lemmas: Vec<String>,
    /// One entry per premise and then the conclusion; witness letters are
    /// space separated and `|` separates several instances of one premise.
    pub instances: Vec<String>,
    pub k: Option<u32>,
    pub bind: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub id: String,
    pub premises: Vec<NodePattern>,
    pub conclusion: NodePattern,
    /// Smallest admissible `k`.
    pub guard: u32,
    pub cite: Citation,
    pub verify: VerifySpec,
}

impl Rule {
    fn uses_k(&self) -> bool {
        self.conclusion.uses_k() || self.premises.iter().any(NodePattern::uses_k)
    }

    /// Ground premises and conclusion for a propositional check: `k` from the
    /// verify block (default the guard, at least 2), class variables from
    /// `bind` (default `Sk`).
    pub fn verification_nodes(&self) -> Result<(u32, Vec<Vec<PrincipleNode>>), String> {
        let k = self.verify.k.unwrap_or_else(|| self.guard.max(2));
        let mut bind = Binding::new();
        let mut vars = self.conclusion.vars();
        for p in &self.premises {
            vars.extend(p.vars());
        }
        for v in vars {
            let text = self.verify.bind.get(&v).map(String::as_str).unwrap_or("Sk");
            let e: ClassExpr = text.parse().map_err(|e| format!("bind {v}: {e}"))?;
            match e.ground(k, &|_| None) {
                Some(Some(c)) => {
                    bind.insert(&v, c);
                }
                _ => return Err(format!("bind {v} = {text} is empty at k={k}")),
            }
        }
        let mut out = Vec::new();
        for p in self
            .premises
            .iter()
            .chain(std::iter::once(&self.conclusion))
        {
            match p.ground(k, &bind) {
                Ground::Node(n) => out.push(vec![n]),
                _ => return Err(format!("{p} has no instance at k={k}")),
            }
        }
        Ok((k, out))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inclusion {
    pub sub: ClassExpr,
    pub sup: ClassExpr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationFact {
    pub id: String,
    pub theory: Vec<NodePattern>,
    pub unprovable: NodePattern,
    pub guard: u32,
    pub cite: Citation,
}

impl SeparationFact {
    /// Ground theory and unprovable node at `k`, dropping empty theory members.
    pub fn instance(&self, k: u32) -> Option<(Vec<PrincipleNode>, PrincipleNode)> {
        if k < self.guard || (k != self.guard && !self.uses_k()) {
            return None;
        }
        let b = Binding::new();
        let mut theory = Vec::new();
        for t in &self.theory {
            match t.ground(k, &b) {
                Ground::Node(n) => theory.push(n),
                Ground::Empty => {}
                _ => return None,
            }
        }
        match self.unprovable.ground(k, &b) {
            Ground::Node(n) => Some((theory, n)),
            _ => None,
        }
    }

    fn uses_k(&self) -> bool {
        self.unprovable.uses_k() || self.theory.iter().any(NodePattern::uses_k)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleBase {
    pub rules: Vec<Rule>,
    pub inclusions: Vec<Inclusion>,
    pub separations: Vec<SeparationFact>,
    pub notes: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCite {
    #[serde(rename = "ref")]
    reference: Option<String>,
    quote: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVerify {
    kind: String,
    skeleton: Option<String>,
    #[serde(default)]
    lemmas: Vec<String>,
    #[serde(default)]
    instances: Vec<String>,
    k: Option<u32>,
    #[serde(default)]
    bind: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRule {
    id: String,
    premises: Vec<String>,
    conclusion: String,
    #[serde(default)]
    guard: String,
    cite: Option<RawCite>,
    verify: Option<RawVerify>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInclusion {
    sub: String,
    sup: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSeparation {
    id: String,
    theory: Vec<String>,
    unprovable: String,
    #[serde(default)]
    guard: String,
    cite: Option<RawCite>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRuleBase {
    rules: Vec<RawRule>,
    #[serde(default)]
    inclusions: Vec<RawInclusion>,
    #[serde(default)]
    separations: Vec<RawSeparation>,
    #[serde(default)]
    notes: Vec<String>,
}

fn parse_guard(g: &str) -> Result<u32, LoadError> {
    let s: String = g.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Ok(0);
    }
    s.strip_prefix("k>=")
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| LoadError::SchemaError(format!("unsupported guard `{g}`")))
}

fn cite(id: &str, c: Option<RawCite>) -> Result<Citation, LoadError> {
    let c = c.ok_or_else(|| LoadError::MissingCitation(id.to_string()))?;
    let quote = c.quote.unwrap_or_default();
    let reference = c.reference.unwrap_or_default();
    if quote.trim().is_empty() || reference.trim().is_empty() {
        return Err(LoadError::MissingCitation(id.to_string()));
    }
    Ok(Citation { reference, quote })
}

pub fn load_rulebase(src: &str) -> Result<RuleBase, LoadError> {
    let raw: RawRuleBase =
        serde_json::from_str(src).map_err(|e| LoadError::SchemaError(e.to_string()))?;
    let mut ids = HashSet::new();
    let mut rules = Vec::new();
    for r in raw.rules {
        if !ids.insert(r.id.clone()) {
            return Err(LoadError::SchemaError(format!(
                "duplicate rule id `{}`",
                r.id
            )));
        }
        let premises = r
            .premises
            .iter()
            .map(|p| p.parse())
            .collect::<Result<Vec<NodePattern>, _>>()?;
        let conclusion: NodePattern = r.conclusion.parse()?;
        let bound: BTreeSet<String> = premises.iter().flat_map(NodePattern::vars).collect();
        if let Some(v) = bound
            .iter()
            .chain(&conclusion.vars())
            .find(|v| var_slot(v).is_none())
        {
            return Err(LoadError::SchemaError(format!(
                "rule `{}`: class variable `${v}` must be one capital letter",
                r.id
            )));
        }
        if !conclusion.vars().is_subset(&bound) {
            return Err(LoadError::SchemaError(format!(
                "rule `{}`: conclusion has unbound class variables",
                r.id
            )));
        }
        let verify = match r.verify {
            None => VerifySpec {
                kind: VerifyKind::FirstOrder,
                skeleton: None,
                lemmas: vec![],
                instances: vec![],
                k: None,
                bind: BTreeMap::new(),
            },
            Some(v) => VerifySpec {
                kind: match v.kind.as_str() {
                    "propositional" => VerifyKind::Propositional,
                    "first-order" => VerifyKind::FirstOrder,
                    other => {
                        return Err(LoadError::SchemaError(format!(
                            "unknown verify kind `{other}`"
                        )))
                    }
                },
                skeleton: v.skeleton,
                lemmas: v.lemmas,
                instances: v.instances,
                k: v.k,
                bind: v.bind,
            },
        };
        rules.push(Rule {
            guard: parse_guard(&r.guard)?,
            cite: cite(&r.id, r.cite)?,
            id: r.id,
            premises,
            conclusion,
            verify,
        });
    }
    let inclusions = raw
        .inclusions
        .iter()
        .map(|i| {
            let p = |s: &str| {
                s.parse::<ClassExpr>()
                    .map_err(|e| LoadError::SchemaError(e.to_string()))
            };
            Ok(Inclusion {
                sub: p(&i.sub)?,
                sup: p(&i.sup)?,
            })
        })
        .collect::<Result<Vec<_>, LoadError>>()?;
    let mut separations = Vec::new();
    for s in raw.separations {
        if !ids.insert(s.id.clone()) {
            return Err(LoadError::SchemaError(format!("duplicate id `{}`", s.id)));
        }
        separations.push(SeparationFact {
            theory: s
                .theory
                .iter()
                .map(|p| p.parse())
                .collect::<Result<Vec<_>, _>>()?,
            unprovable: s.unprovable.parse()?,
            guard: parse_guard(&s.guard)?,
            cite: cite(&s.id, s.cite)?,
            id: s.id,
        });
    }
    Ok(RuleBase {
        rules,
        inclusions,
        separations,
        notes: raw.notes,
    })
}

impl RuleBase {
    pub fn shipped() -> RuleBase {
        load_rulebase(SHIPPED_RULEBASE).expect("shipped rule base is valid")
    }

    pub fn empty() -> RuleBase {
        RuleBase {
            rules: vec![],
            inclusions: vec![],
            separations: vec![],
            notes: vec![],
        }
    }

    pub fn rule(&self, id: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.id == id)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TheoryContext {
    pub assumed: BTreeSet<PrincipleNode>,
    pub k_max: u32,
}

impl TheoryContext {
    pub fn new<I: IntoIterator<Item = PrincipleNode>>(assumed: I, k_max: u32) -> TheoryContext {
        TheoryContext {
            assumed: assumed.into_iter().collect(),
            k_max,
        }
    }

    fn check_levels(&self, extra: Option<&PrincipleNode>) -> Result<(), QueryError> {
        for n in self.assumed.iter().chain(extra) {
            if n.max_level() > self.k_max {
                return Err(QueryError::LevelOutOfRange {
                    node: n.to_string(),
                    level: n.max_level(),
                    k_max: self.k_max,
                });
            }
        }
        Ok(())
    }
}

pub const INCLUSION_STEP: &str = "class-inclusion";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    Assumed,
    Rule {
        rule_id: String,
        k: u32,
        premises: Vec<PrincipleNode>,
    },
    Inclusion {
        from: PrincipleNode,
    },
}

#[derive(Debug, Clone)]
pub struct Closure {
    pub facts: BTreeSet<PrincipleNode>,
    pub why: HashMap<PrincipleNode, Justification>,
    pub min_clamped_level: Option<u32>,
}

impl Closure {
    pub fn contains(&self, n: &PrincipleNode) -> bool {
        self.facts.contains(n)
    }

    pub fn clamped(&self) -> bool {
        self.min_clamped_level.is_some()
    }

    /// Steps deriving `goal` from the assumptions, premises first.
    pub fn chain(&self, goal: &PrincipleNode) -> Vec<ChainStep> {
        let mut out = Vec::new();
        let mut done = HashSet::new();
        let mut stack = vec![(*goal, false)];
        while let Some((n, expanded)) = stack.pop() {
            if done.contains(&n) {
                continue;
            }
            let Some(j) = self.why.get(&n) else { continue };
            let premises = match j {
                Justification::Assumed => {
                    done.insert(n);
                    continue;
                }
                Justification::Rule { premises, .. } => premises.clone(),
                Justification::Inclusion { from } => vec![*from],
            };
            if expanded {
                done.insert(n);
                out.push(match j {
                    Justification::Rule {
                        rule_id,
                        k,
                        premises,
                    } => ChainStep {
                        rule_id: rule_id.clone(),
                        k: Some(*k),
                        premises: premises.clone(),
                        conclusion: n,
                    },
                    Justification::Inclusion { from } => ChainStep {
                        rule_id: INCLUSION_STEP.to_string(),
                        k: None,
                        premises: vec![*from],
                        conclusion: n,
                    },
                    Justification::Assumed => unreachable!(),
                });
            } else {
                stack.push((n, true));
                for p in premises.iter().rev() {
                    if !done.contains(p) {
                        stack.push((*p, false));
                    }
                }
            }
        }
        out
    }
}

/// The inclusion order on the classes up to `k_max`, plus the top class.
#[derive(Debug, Clone)]
pub struct Lattice {
    pub universe: Vec<Class>,
    below: HashMap<Class, Vec<Class>>,
}

impl Lattice {
    pub fn new(inclusions: &[Inclusion], k_max: u32) -> Lattice {
        let universe = Class::universe(k_max);
        let index: HashMap<Class, usize> =
            universe.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let n = universe.len();
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
            row[index[&Class::top()]] = true;
        }
        let mut add = |a: Class, b: Class| {
            for neg in 0..3u8 {
                let (mut x, mut y) = (Some(a), Some(b));
                for _ in 0..neg {
                    x = x.and_then(Class::negate);
                    y = y.and_then(Class::negate);
                }
                if let (Some(x), Some(y)) = (x, y) {
                    if let (Some(&i), Some(&j)) = (index.get(&x), index.get(&y)) {
                        le[i][j] = true;
                    }
                }
            }
        };
        for k in 0..=k_max {
            for inc in inclusions {
                let g = |e: &ClassExpr| e.ground(k, &|_| None).flatten();
                if let (Some(a), Some(b)) = (g(&inc.sub), g(&inc.sup)) {
                    add(a, b);
                }
            }
        }
        for m in 0..n {
            for i in 0..n {
                if le[i][m] {
                    for j in 0..n {
                        if le[m][j] {
                            le[i][j] = true;
                        }
                    }
                }
            }
        }
        let mut below = HashMap::new();
        for (j, c) in universe.iter().enumerate() {
            let v: Vec<Class> = (0..n)
                .filter(|&i| le[i][j] && i != j)
                .map(|i| universe[i])
                .collect();
            below.insert(*c, v);
        }
        Lattice { universe, below }
    }

    pub fn subclasses(&self, c: Class) -> &[Class] {
        self.below.get(&c).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_subclass(&self, a: Class, b: Class) -> bool {
        a == b || self.subclasses(b).contains(&a)
    }

    /// Nodes obtained from `n` by shrinking its class arguments.
    pub fn weakenings(&self, n: &PrincipleNode, k_max: u32) -> Vec<PrincipleNode> {
        let mut out = Vec::new();
        let mut stack = vec![*n];
        while let Some(m) = stack.pop() {
            for w in self.single_weakenings(&m, k_max) {
                if w != *n && !out.contains(&w) {
                    out.push(w);
                    stack.push(w);
                }
            }
        }
        out
    }

    /// Nodes obtained from `n` by shrinking one class argument.
    pub fn single_weakenings(&self, n: &PrincipleNode, k_max: u32) -> Vec<PrincipleNode> {
        let mut out = Vec::new();
        let mut push = |args: &[Class]| {
            if let Ok(m) = PrincipleNode::new(n.family, n.variant, args) {
                if m != *n && m.max_level() <= k_max && !out.contains(&m) {
                    out.push(m);
                }
            }
        };
        for a in self.subclasses(n.a) {
            match n.b {
                None => push(&[*a]),
                Some(b) => push(&[*a, b]),
            }
        }
        if let Some(b) = n.b {
            for c in self.subclasses(b) {
                push(&[n.a, *c]);
            }
        }
        out
    }
}

struct Engine<'a> {
    rb: &'a RuleBase,
    k_max: u32,
    lattice: Lattice,
    triggers: Vec<Vec<(usize, usize)>>,
    facts: HashSet<PrincipleNode>,
    by_family: Vec<Vec<PrincipleNode>>,
    why: HashMap<PrincipleNode, Justification>,
    queue: VecDeque<PrincipleNode>,
    min_clamped: Option<u32>,
}

fn family_index(f: Family) -> usize {
    f as usize
}

fn levels(rule: &Rule, k_max: u32) -> std::ops::RangeInclusive<u32> {
    if rule.uses_k() {
        rule.guard..=k_max
    } else {
        rule.guard..=rule.guard
    }
}

impl<'a> Engine<'a> {
    fn new(rb: &'a RuleBase, k_max: u32, order: &[usize]) -> Engine<'a> {
        let mut triggers = vec![Vec::new(); Family::ALL.len()];
        for &ri in order {
            for (pi, p) in rb.rules[ri].premises.iter().enumerate() {
                triggers[family_index(p.family)].push((ri, pi));
            }
        }
        Engine {
            rb,
            k_max,
            lattice: Lattice::new(&rb.inclusions, k_max),
            triggers,
            facts: HashSet::new(),
            by_family: vec![Vec::new(); Family::ALL.len()],
            why: HashMap::new(),
            queue: VecDeque::new(),
            min_clamped: None,
        }
    }

    fn insert(&mut self, n: PrincipleNode, j: Justification) -> bool {
        if !self.facts.insert(n) {
            return false;
        }
        self.by_family[family_index(n.family)].push(n);
        self.why.insert(n, j);
        self.queue.push_back(n);
        true
    }

    fn add(&mut self, n: PrincipleNode, j: Justification) {
        if n.max_level() > self.k_max {
            let l = n.max_level();
            self.min_clamped = Some(self.min_clamped.map_or(l, |m| m.min(l)));
            return;
        }
        if !self.insert(n, j) || !n.family.monotone() {
            return;
        }
        let mut stack = vec![n];
        while let Some(m) = stack.pop() {
            for w in self.lattice.single_weakenings(&m, self.k_max) {
                if self.insert(w, Justification::Inclusion { from: m }) {
                    stack.push(w);
                }
            }
        }
    }

    fn seed(&mut self, order: &[usize]) {
        let empty = Binding::new();
        for &ri in order {
            let rule = &self.rb.rules[ri];
            for k in levels(rule, self.k_max) {
                if rule
                    .premises
                    .iter()
                    .all(|p| p.ground(k, &empty) == Ground::Empty)
                {
                    if let Ground::Node(c) = rule.conclusion.ground(k, &empty) {
                        self.add(
                            c,
                            Justification::Rule {
                                rule_id: rule.id.clone(),
                                k,
                                premises: vec![],
                            },
                        );
                    }
                }
            }
        }
    }

    fn run(&mut self) {
        while let Some(f) = self.queue.pop_front() {
            let mut found = Vec::new();
            for &(ri, pi) in &self.triggers[family_index(f.family)] {
                let rule = &self.rb.rules[ri];
                for k in candidate_levels(&rule.premises[pi], &f, rule, self.k_max) {
                    for b in rule.premises[pi].unify(&f, k, &Binding::new()) {
                        let mut chosen = vec![None; rule.premises.len()];
                        chosen[pi] = Some(f);
                        let store = FactStore {
                            facts: &self.facts,
                            by_family: &self.by_family,
                        };
                        join(
                            &rule.premises,
                            &b,
                            k,
                            &store,
                            &mut chosen,
                            &mut |b, used| {
                                if let Ground::Node(c) = rule.conclusion.ground(k, b) {
                                    found.push((
                                        c,
                                        ri,
                                        k,
                                        used.iter().flatten().copied().collect::<Vec<_>>(),
                                    ));
                                }
                            },
                        );
                    }
                }
            }
            for (c, ri, k, premises) in found {
                if !self.facts.contains(&c) {
                    let rule_id = self.rb.rules[ri].id.clone();
                    self.add(
                        c,
                        Justification::Rule {
                            rule_id,
                            k,
                            premises,
                        },
                    );
                }
            }
        }
    }
}

struct FactStore<'s> {
    facts: &'s HashSet<PrincipleNode>,
    by_family: &'s [Vec<PrincipleNode>],
}

/// Extends `chosen` to every assignment of facts to the open premises.
fn join(
    premises: &[NodePattern],
    bind: &Binding,
    k: u32,
    store: &FactStore<'_>,
    chosen: &mut Vec<Option<PrincipleNode>>,
    emit: &mut dyn FnMut(&Binding, &[Option<PrincipleNode>]),
) {
    let mut open = None;
    for (i, p) in premises.iter().enumerate() {
        if chosen[i].is_some() {
            continue;
        }
        match p.ground(k, bind) {
            Ground::Node(n) => {
                if !store.facts.contains(&n) {
                    return;
                }
                chosen[i] = Some(n);
                join(premises, bind, k, store, chosen, emit);
                chosen[i] = None;
                return;
            }
            Ground::Invalid => return,
            Ground::Empty => {}
            Ground::Unbound => {
                open.get_or_insert(i);
            }
        }
    }
    let Some(i) = open else {
        emit(bind, chosen);
        return;
    };
    for n in &store.by_family[family_index(premises[i].family)] {
        for b in premises[i].unify(n, k, bind) {
            chosen[i] = Some(*n);
            join(premises, &b, k, store, chosen, emit);
            chosen[i] = None;
        }
    }
}

pub fn closure(ctx: &TheoryContext, rb: &RuleBase) -> Closure {
    let order: Vec<usize> = (0..rb.rules.len()).collect();
    closure_in_order(ctx, rb, &order)
}

/// Closure with rules tried in the order given by `perm`, a permutation of
/// the rule indices; the fact set does not depend on it.
pub fn closure_with_permutation(ctx: &TheoryContext, rb: &RuleBase, perm: &[usize]) -> Closure {
    let mut order: Vec<usize> = perm
        .iter()
        .copied()
        .filter(|&i| i < rb.rules.len())
        .collect();
    let seen: HashSet<usize> = order.iter().copied().collect();
    order.extend((0..rb.rules.len()).filter(|i| !seen.contains(i)));
    closure_in_order(ctx, rb, &order)
}

fn closure_in_order(ctx: &TheoryContext, rb: &RuleBase, order: &[usize]) -> Closure {
    let mut e = Engine::new(rb, ctx.k_max, order);
    for n in &ctx.assumed {
        e.add(*n, Justification::Assumed);
    }
    e.seed(order);
    e.run();
    Closure {
        facts: e.facts.into_iter().collect(),
        why: e.why,
        min_clamped_level: e.min_clamped,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainStep {
    pub rule_id: String,
    pub k: Option<u32>,
    pub premises: Vec<PrincipleNode>,
    pub conclusion: PrincipleNode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryResult {
    Derivable {
        chain: Vec<ChainStep>,
    },
    Separated {
        fact_id: String,
        k: u32,
        cite: Citation,
    },
    Unknown {
        boundary_warning: bool,
    },
}

pub fn query(
    ctx: &TheoryContext,
    goal: &PrincipleNode,
    rb: &RuleBase,
) -> Result<QueryResult, QueryError> {
    ctx.check_levels(Some(goal))?;
    let c = closure(ctx, rb);
    if c.contains(goal) {
        return Ok(QueryResult::Derivable {
            chain: c.chain(goal),
        });
    }
    let mut with_goal = ctx.clone();
    with_goal.assumed.insert(*goal);
    let up = closure(&with_goal, rb);
    for s in &rb.separations {
        for k in s.guard..=ctx.k_max {
            let Some((theory, p0)) = s.instance(k) else {
                continue;
            };
            if p0.max_level() > ctx.k_max || theory.iter().any(|t| t.max_level() > ctx.k_max) {
                continue;
            }
            if !up.contains(&p0) {
                continue;
            }
            let t = closure(&TheoryContext::new(theory, ctx.k_max), rb);
            if ctx.assumed.iter().all(|a| t.contains(a)) {
                return Ok(QueryResult::Separated {
                    fact_id: s.id.clone(),
                    k,
                    cite: s.cite.clone(),
                });
            }
        }
    }
    let involved = ctx
        .assumed
        .iter()
        .chain(std::iter::once(goal))
        .map(PrincipleNode::max_level)
        .max()
        .unwrap_or(0);
    let boundary_warning = c
        .min_clamped_level
        .is_some_and(|m| m.saturating_sub(involved) <= 2);
    Ok(QueryResult::Unknown { boundary_warning })
}

/// Checks a chain step by step against the rule base.
pub fn replay_chain(ctx: &TheoryContext, chain: &[ChainStep], rb: &RuleBase) -> Result<(), String> {
    let lattice = Lattice::new(&rb.inclusions, ctx.k_max);
    let mut known: BTreeSet<PrincipleNode> = ctx.assumed.clone();
    for (i, s) in chain.iter().enumerate() {
        for p in &s.premises {
            if !known.contains(p) {
                return Err(format!("step {i}: premise {p} not yet established"));
            }
        }
        if s.rule_id == INCLUSION_STEP {
            let [from] = s.premises.as_slice() else {
                return Err(format!("step {i}: inclusion step needs one premise"));
            };
            if !lattice
                .single_weakenings(from, ctx.k_max)
                .contains(&s.conclusion)
            {
                return Err(format!(
                    "step {i}: {} is not a weakening of {from}",
                    s.conclusion
                ));
            }
        } else {
            let rule = rb
                .rule(&s.rule_id)
                .ok_or_else(|| format!("step {i}: unknown rule {}", s.rule_id))?;
            let k = s.k.ok_or_else(|| format!("step {i}: missing level"))?;
            if k < rule.guard {
                return Err(format!("step {i}: k={k} violates the guard"));
            }
            let facts: HashSet<PrincipleNode> = s.premises.iter().copied().collect();
            let mut by_family = vec![Vec::new(); Family::ALL.len()];
            for f in &facts {
                by_family[family_index(f.family)].push(*f);
            }
            let store = FactStore {
                facts: &facts,
                by_family: &by_family,
            };
            let mut ok = false;
            let mut chosen = vec![None; rule.premises.len()];
            join(
                &rule.premises,
                &Binding::new(),
                k,
                &store,
                &mut chosen,
                &mut |b, used| {
                    if rule.conclusion.ground(k, b) == Ground::Node(s.conclusion)
                        && used.iter().flatten().copied().collect::<HashSet<_>>() == facts
                    {
                        ok = true;
                    }
                },
            );
            if !ok {
                return Err(format!(
                    "step {i}: {} does not yield {} at k={k}",
                    s.rule_id, s.conclusion
                ));
            }
        }
        known.insert(s.conclusion);
    }
    Ok(())
}

/// All nodes inter-derivable with `node` over `base`.
pub fn equivalence_class(
    node: &PrincipleNode,
    base: &TheoryContext,
    rb: &RuleBase,
) -> Result<BTreeSet<PrincipleNode>, QueryError> {
    if node.max_level() + 2 > base.k_max {
        return Err(QueryError::LevelOutOfRange {
            node: node.to_string(),
            level: node.max_level(),
            k_max: base.k_max,
        });
    }
    base.check_levels(None)?;
    let below = closure(base, rb);
    if below.contains(node) {
        return Ok(below.facts);
    }
    let mut with = base.clone();
    with.assumed.insert(*node);
    let up = closure(&with, rb);
    let candidates: Vec<PrincipleNode> = up
        .facts
        .iter()
        .filter(|n| !below.contains(n) && *n != node)
        .copied()
        .collect();
    let threads = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(8);
    let chunk = candidates.len().div_ceil(threads.max(1)).max(1);
    let mut result: BTreeSet<PrincipleNode> = BTreeSet::from([*node]);
    let found: Vec<Vec<PrincipleNode>> = std::thread::scope(|s| {
        let handles: Vec<_> = candidates
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    let mut rejected: HashSet<PrincipleNode> = HashSet::new();
                    let mut keep = Vec::new();
                    for n in part {
                        if rejected.contains(n) {
                            continue;
                        }
                        let mut ctx = base.clone();
                        ctx.assumed.insert(*n);
                        let c = closure(&ctx, rb);
                        if c.contains(node) {
                            keep.push(*n);
                        } else {
                            rejected.extend(c.facts.iter().copied());
                        }
                    }
                    keep
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    for v in found {
        result.extend(v);
    }
    Ok(result)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Abhk,
    Dns,
    Cd,
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Preset, String> {
        match s {
            "abhk" => Ok(Preset::Abhk),
            "dns" => Ok(Preset::Dns),
            "cd" => Ok(Preset::Cd),
            _ => Err(format!("unknown preset `{s}` (expected abhk, dns or cd)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeStyle {
    Solid,
    Dashed,
    DashDot,
}

/// Vertices and drawn edges of a figure, as patterns over `k`.
#[derive(Debug, Clone)]
pub struct FigureSpec {
    pub name: &'static str,
    pub vertices: Vec<&'static str>,
    pub edges: Vec<(&'static str, &'static str, EdgeStyle)>,
    /// Side theory for each style; `None` means the style is unused.
    pub bases: Vec<(EdgeStyle, Vec<&'static str>)>,
}

pub fn figure_spec(preset: Preset) -> FigureSpec {
    use EdgeStyle::*;
    match preset {
        Preset::Abhk => FigureSpec {
            name: "abhk",
            vertices: vec![
                "LEM:S(k-1)",
                "LEM:Dk",
                "DNEOR:Pk:Pk",
                "LEM:Pk",
                "DNE:Sk",
                "LEM:Sk",
            ],
            edges: vec![
                ("LEM:Dk", "LEM:S(k-1)", Solid),
                ("DNEOR:Pk:Pk", "LEM:Dk", Solid),
                ("LEM:Pk", "DNEOR:Pk:Pk", Solid),
                ("DNE:Sk", "LEM:Dk", Solid),
                ("LEM:Sk", "LEM:Pk", Solid),
                ("LEM:Sk", "DNE:Sk", Solid),
            ],
            bases: vec![(Solid, vec![])],
        },
        Preset::Dns => FigureSpec {
            name: "dns",
            vertices: vec![
                "DNE:S(k-1)",
                "DNEOR:P(k-1):P(k-1)",
                "LEM:nS(k-1)",
                "LEM:P(k-1)",
                "LEM:S(k-1)",
                "DML:nDk",
                "DML:Dk",
                "DNEOR:Dk:Dk",
                "LEM:nDk",
                "LEM:Dk",
                "DML:Pk",
                "DML:Sk",
                "DNE:Sk",
                "DNEOR:Pk:Pk",
                "LEM:nSk",
                "LEM:Pk",
                "LEM:Sk",
            ],
            edges: vec![
                ("LEM:Sk", "LEM:Pk", Solid),
                ("LEM:Sk", "DNE:Sk", Solid),
                ("LEM:Pk", "DNEOR:Pk:Pk", Solid),
                ("LEM:Pk", "LEM:nSk", Solid),
                ("DNE:Sk", "LEM:Dk", Solid),
                ("DNE:Sk", "DML:Pk", Solid),
                ("DNEOR:Pk:Pk", "LEM:Dk", Solid),
                ("DNEOR:Pk:Pk", "DML:Pk", Solid),
                ("DNEOR:Pk:Pk", "DML:Sk", Solid),
                ("LEM:nSk", "DML:Sk", Solid),
                ("LEM:Dk", "DNEOR:Dk:Dk", Solid),
                ("LEM:Dk", "LEM:nDk", Solid),
                ("DNEOR:Dk:Dk", "LEM:S(k-1)", Solid),
                ("DNEOR:Dk:Dk", "DML:nDk", Solid),
                ("LEM:nDk", "DML:nDk", Solid),
                ("LEM:nDk", "DML:Dk", Solid),
                ("LEM:S(k-1)", "DNE:S(k-1)", Solid),
                ("LEM:S(k-1)", "LEM:P(k-1)", Solid),
                ("LEM:P(k-1)", "DNEOR:P(k-1):P(k-1)", Solid),
                ("LEM:P(k-1)", "LEM:nS(k-1)", Solid),
                ("LEM:nSk", "DML:Pk", Solid),
                ("DML:Pk", "LEM:nDk", Solid),
                ("DML:Sk", "LEM:nDk", Solid),
                ("DML:nDk", "LEM:nS(k-1)", Solid),
                ("DML:Dk", "LEM:nS(k-1)", Solid),
                ("LEM:nSk", "LEM:Pk", Dashed),
                ("DML:Sk", "DNEOR:Pk:Pk", Dashed),
                ("LEM:nDk", "LEM:Dk", Dashed),
                ("DML:nDk", "DNEOR:Dk:Dk", Dashed),
                ("LEM:nS(k-1)", "LEM:S(k-1)", Dashed),
                ("DML:Dk", "DML:nDk", Dashed),
            ],
            bases: vec![(Solid, vec!["DNS:S(k-1)"]), (Dashed, vec!["DNE:S(k-1)"])],
        },
        Preset::Cd => FigureSpec {
            name: "cd",
            vertices: vec![
                "CD:nDk:nSk",
                "CD:nSk:nSk",
                "CD:nPk:nSk",
                "DML:Dk:Sk",
                "DML:Sk",
                "DML:Sk:Pk",
                "LEM:nDk",
                "LEM:nSk",
                "LEM:nPk",
                "CD:nSk:U",
                "CD:nPk:U",
            ],
            edges: vec![
                ("DML:Dk:Sk", "CD:nDk:nSk", Solid),
                ("CD:nSk:nSk", "CD:nDk:nSk", Solid),
                ("CD:nPk:nSk", "CD:nDk:nSk", Solid),
                ("DML:Sk", "DML:Dk:Sk", Solid),
                ("DML:Sk:Pk", "DML:Dk:Sk", Solid),
                ("DML:Sk", "CD:nSk:nSk", Solid),
                ("DML:Sk:Pk", "CD:nPk:nSk", Solid),
                ("LEM:nDk", "DML:Dk:Sk", Solid),
                ("LEM:nSk", "LEM:nDk", Solid),
                ("LEM:nPk", "LEM:nDk", Solid),
                ("LEM:nSk", "DML:Sk", Solid),
                ("LEM:nSk", "DML:Sk:Pk", Solid),
                ("LEM:nPk", "DML:Sk:Pk", Solid),
                ("CD:nSk:U", "CD:nSk:nSk", Solid),
                ("CD:nPk:U", "CD:nPk:nSk", Solid),
                ("LEM:nSk", "CD:nSk:U", Solid),
                ("LEM:nPk", "CD:nPk:U", Solid),
                ("CD:nDk:nSk", "DML:Dk:Sk", Dashed),
                ("CD:nSk:nSk", "DML:Sk", Dashed),
                ("CD:nPk:nSk", "DML:Sk:Pk", Dashed),
                ("DML:Sk:Pk", "LEM:nSk", DashDot),
                ("DML:Sk:Pk", "LEM:nPk", DashDot),
                ("DML:Dk:Sk", "LEM:nDk", DashDot),
            ],
            bases: vec![
                (Solid, vec![]),
                (Dashed, vec!["DNS:S(k-2)"]),
                (DashDot, vec!["DNS:S(k-1)"]),
            ],
        },
    }
}

fn ground_text(p: &str, k: u32) -> Option<PrincipleNode> {
    let pat: NodePattern = p.parse().ok()?;
    match pat.ground(k, &Binding::new()) {
        Ground::Node(n) => Some(n),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FigureEdge {
    pub from: PrincipleNode,
    pub to: PrincipleNode,
    pub style: EdgeStyle,
    pub base: Vec<PrincipleNode>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Figure {
    pub name: &'static str,
    pub vertices: Vec<PrincipleNode>,
    pub edges: Vec<FigureEdge>,
    /// Drawn edges the rule base could not confirm.
    pub missing: Vec<FigureEdge>,
}

/// Grounds a figure at level `k`, keeping the drawn edges the rule base derives
/// over the side theory of their style.
pub fn build_figure(preset: Preset, k: u32, rb: &RuleBase) -> Figure {
    let spec = figure_spec(preset);
    let k_max = k + 2;
    let mut vertices = Vec::new();
    for v in &spec.vertices {
        if let Some(n) = ground_text(v, k) {
            if !vertices.contains(&n) {
                vertices.push(n);
            }
        }
    }
    let mut edges = Vec::new();
    let mut missing = Vec::new();
    let mut cache: HashMap<(PrincipleNode, Vec<PrincipleNode>), Closure> = HashMap::new();
    for (from, to, style) in &spec.edges {
        let (Some(a), Some(b)) = (ground_text(from, k), ground_text(to, k)) else {
            continue;
        };
        if a == b {
            continue;
        }
        let base: Vec<PrincipleNode> = spec
            .bases
            .iter()
            .find(|(s, _)| s == style)
            .map(|(_, b)| b.iter().filter_map(|p| ground_text(p, k)).collect())
            .unwrap_or_default();
        let c = cache.entry((a, base.clone())).or_insert_with(|| {
            closure(
                &TheoryContext::new(base.iter().copied().chain([a]), k_max),
                rb,
            )
        });
        let e = FigureEdge {
            from: a,
            to: b,
            style: *style,
            base,
        };
        if c.contains(&b) {
            if !edges.iter().any(|x: &FigureEdge| x.from == a && x.to == b) {
                edges.push(e);
            }
        } else {
            missing.push(e);
        }
    }
    Figure {
        name: spec.name,
        vertices,
        edges,
        missing,
    }
}

pub fn export_dot(preset: Preset, k: u32, rb: &RuleBase) -> String {
    let fig = build_figure(preset, k, rb);
    let mut out = format!(
        "digraph {} {{\n  rankdir=BT;\n  node [shape=box];\n",
        fig.name
    );
    for v in &fig.vertices {
        out.push_str(&format!("  \"{v}\";\n"));
    }
    for e in &fig.edges {
        let label = || {
            let names: Vec<String> = e.base.iter().map(|n| n.to_string()).collect();
            format!("HA + {}", names.join(" + "))
        };
        match e.style {
            EdgeStyle::Solid => out.push_str(&format!("  \"{}\" -> \"{}\";\n", e.from, e.to)),
            EdgeStyle::Dashed => out.push_str(&format!(
                "  \"{}\" -> \"{}\" [style=dashed, label=\"{}\"];\n",
                e.from,
                e.to,
                label()
            )),
            EdgeStyle::DashDot => out.push_str(&format!(
                "  \"{}\" -> \"{}\" [style=dotted, label=\"{}\"];\n",
                e.from,
                e.to,
                label()
            )),
        }
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub verified: usize,
    pub failed: usize,
    pub needs_first_order: usize,
    pub per_rule: Vec<(String, VerifyStatus)>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

pub fn verify_rulebase(rb: &RuleBase) -> VerifyReport {
    let library = lemma_library();
    let mut report = VerifyReport::default();
    for r in &rb.rules {
        let status = match verify_rule(r, &library) {
            Ok(s) => s,
            Err(e) => VerifyStatus::Failed(e.to_string()),
        };
        match &status {
            VerifyStatus::Verified => report.verified += 1,
            VerifyStatus::NeedsFirstOrder => report.needs_first_order += 1,
            VerifyStatus::Failed(_) => report.failed += 1,
        }
        report.per_rule.push((r.id.clone(), status));
    }
    report
}

/// Separation facts whose own theory derives their unprovable node.
pub fn separation_conflicts(rb: &RuleBase, k_max: u32) -> Vec<(String, u32)> {
    let mut out = Vec::new();
    for s in &rb.separations {
        for k in s.guard..=k_max {
            let Some((theory, p0)) = s.instance(k) else {
                continue;
            };
            if p0.max_level() > k_max {
                continue;
            }
            if closure(&TheoryContext::new(theory, k_max), rb).contains(&p0) {
                out.push((s.id.clone(), k));
            }
        }
    }
    out
}

impl From<NodeError> for LoadError {
    fn from(e: NodeError) -> LoadError {
        match e {
            NodeError::UnknownFamily(f) => LoadError::UnknownFamily(f),
            other => LoadError::SchemaError(other.to_string()),
        }
    }
}

pub fn is_delta(c: Class) -> bool {
    c.kind == Kind::Delta
}
