//! Intuitionistic propositional logic: a contraction-free sequent prover with
//! checkable traces, truth tables, skeleton extraction and rule verification.

use crate::derivability::{Rule, VerifyKind};
use crate::duality::dual;
use crate::formula::parse::{Cursor, ParseError, Tok};
use crate::formula::Formula;
use crate::hierarchy::{Class, Kind};
use crate::principles::{instantiate, witness_roles, PrincipleNode};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PropFormula {
    Atom(String),
    Bot,
    And(Box<PropFormula>, Box<PropFormula>),
    Or(Box<PropFormula>, Box<PropFormula>),
    Imp(Box<PropFormula>, Box<PropFormula>),
}

impl PropFormula {
    pub fn atom(name: &str) -> PropFormula {
        PropFormula::Atom(name.to_string())
    }

    pub fn and(a: PropFormula, b: PropFormula) -> PropFormula {
        PropFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: PropFormula, b: PropFormula) -> PropFormula {
        PropFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: PropFormula, b: PropFormula) -> PropFormula {
        PropFormula::Imp(Box::new(a), Box::new(b))
    }

    pub fn not(a: PropFormula) -> PropFormula {
        PropFormula::imp(a, PropFormula::Bot)
    }

    pub fn iff(a: PropFormula, b: PropFormula) -> PropFormula {
        PropFormula::and(
            PropFormula::imp(a.clone(), b.clone()),
            PropFormula::imp(b, a),
        )
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            PropFormula::Atom(a) => {
                out.insert(a.clone());
            }
            PropFormula::Bot => {}
            PropFormula::And(a, b) | PropFormula::Or(a, b) | PropFormula::Imp(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Number of connectives.
    pub fn connectives(&self) -> usize {
        match self {
            PropFormula::Atom(_) | PropFormula::Bot => 0,
            PropFormula::And(a, b) | PropFormula::Or(a, b) | PropFormula::Imp(a, b) => {
                1 + a.connectives() + b.connectives()
            }
        }
    }

    fn as_negation(&self) -> Option<&PropFormula> {
        match self {
            PropFormula::Imp(a, b) if **b == PropFormula::Bot => Some(a),
            _ => None,
        }
    }

    fn as_iff(&self) -> Option<(&PropFormula, &PropFormula)> {
        if let PropFormula::And(l, r) = self {
            if let (PropFormula::Imp(a, b), PropFormula::Imp(c, d)) = (&**l, &**r) {
                if a == d && b == c {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn eval(&self, v: &dyn Fn(&str) -> bool) -> bool {
        match self {
            PropFormula::Atom(a) => v(a),
            PropFormula::Bot => false,
            PropFormula::And(a, b) => a.eval(v) && b.eval(v),
            PropFormula::Or(a, b) => a.eval(v) || b.eval(v),
            PropFormula::Imp(a, b) => !a.eval(v) || b.eval(v),
        }
    }
}

fn prec(f: &PropFormula) -> u8 {
    if f.as_negation().is_some() {
        return 4;
    }
    if f.as_iff().is_some() {
        return 0;
    }
    match f {
        PropFormula::Atom(_) | PropFormula::Bot => 4,
        PropFormula::And(..) => 3,
        PropFormula::Or(..) => 2,
        PropFormula::Imp(..) => 1,
    }
}

fn write_prop(g: &PropFormula, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if prec(g) < min {
        write!(f, "(")?;
        write_prop(g, 0, f)?;
        return write!(f, ")");
    }
    if let Some(inner) = g.as_negation() {
        write!(f, "~")?;
        return write_prop(inner, 4, f);
    }
    if let Some((a, b)) = g.as_iff() {
        write_prop(a, 1, f)?;
        write!(f, " <-> ")?;
        return write_prop(b, 1, f);
    }
    match g {
        PropFormula::Atom(a) => write!(f, "{a}"),
        PropFormula::Bot => write!(f, "bot"),
        PropFormula::And(a, b) => {
            write_prop(a, 3, f)?;
            write!(f, " /\\ ")?;
            write_prop(b, 4, f)
        }
        PropFormula::Or(a, b) => {
            write_prop(a, 2, f)?;
            write!(f, " \\/ ")?;
            write_prop(b, 3, f)
        }
        PropFormula::Imp(a, b) => {
            write_prop(a, 2, f)?;
            write!(f, " -> ")?;
            write_prop(b, 1, f)
        }
    }
}

impl fmt::Display for PropFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_prop(self, 0, f)
    }
}

impl FromStr for PropFormula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<PropFormula, ParseError> {
        parse_prop(s)
    }
}

pub fn parse_prop(src: &str) -> Result<PropFormula, ParseError> {
    let mut c = Cursor::new(src)?;
    let f = prop_iff(&mut c)?;
    if !c.at_end() {
        return Err(c.error("unexpected trailing input".into()));
    }
    Ok(f)
}

fn prop_iff(c: &mut Cursor) -> Result<PropFormula, ParseError> {
    let mut lhs = prop_imp(c)?;
    while c.eat(&Tok::Iff) {
        let rhs = prop_imp(c)?;
        lhs = PropFormula::iff(lhs, rhs);
    }
    Ok(lhs)
}

fn prop_imp(c: &mut Cursor) -> Result<PropFormula, ParseError> {
    let lhs = prop_or(c)?;
    if c.eat(&Tok::Arrow) {
        return Ok(PropFormula::imp(lhs, prop_imp(c)?));
    }
    Ok(lhs)
}

fn prop_or(c: &mut Cursor) -> Result<PropFormula, ParseError> {
    let mut lhs = prop_and(c)?;
    while c.eat(&Tok::Or) {
        lhs = PropFormula::or(lhs, prop_and(c)?);
    }
    Ok(lhs)
}

fn prop_and(c: &mut Cursor) -> Result<PropFormula, ParseError> {
    let mut lhs = prop_unary(c)?;
    while c.eat(&Tok::And) {
        lhs = PropFormula::and(lhs, prop_unary(c)?);
    }
    Ok(lhs)
}

fn prop_unary(c: &mut Cursor) -> Result<PropFormula, ParseError> {
    match c.peek().cloned() {
        Some(Tok::Tilde) => {
            c.bump();
            Ok(PropFormula::not(prop_unary(c)?))
        }
        Some(Tok::LParen) => {
            c.bump();
            let f = prop_iff(c)?;
            c.expect(&Tok::RParen, "`)`")?;
            Ok(f)
        }
        Some(Tok::Ident(name)) => {
            c.bump();
            if name == "bot" {
                Ok(PropFormula::Bot)
            } else {
                Ok(PropFormula::Atom(name))
            }
        }
        _ => Err(c.error("expected a propositional formula".into())),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub hypotheses: Vec<PropFormula>,
    pub goal: PropFormula,
}

impl Sequent {
    pub fn new(hypotheses: Vec<PropFormula>, goal: PropFormula) -> Sequent {
        Sequent { hypotheses, goal }
    }

    pub fn goal(goal: PropFormula) -> Sequent {
        Sequent {
            hypotheses: Vec::new(),
            goal,
        }
    }

    fn normalized(&self) -> (BTreeSet<PropFormula>, PropFormula) {
        (self.hypotheses.iter().cloned().collect(), self.goal.clone())
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, h) in self.hypotheses.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{h}")?;
        }
        write!(f, " => {}", self.goal)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum G4Rule {
    Axiom,
    LBot,
    LAnd,
    LOr,
    LImpAtom,
    LImpBot,
    LImpAnd,
    LImpOr,
    LImpImp,
    RAnd,
    RImp,
    ROrLeft,
    ROrRight,
}

impl G4Rule {
    pub fn name(self) -> &'static str {
        match self {
            G4Rule::Axiom => "Ax",
            G4Rule::LBot => "L-bot",
            G4Rule::LAnd => "L-and",
            G4Rule::LOr => "L-or",
            G4Rule::LImpAtom => "L0-imp",
            G4Rule::LImpBot => "L-bot-imp",
            G4Rule::LImpAnd => "L-and-imp",
            G4Rule::LImpOr => "L-or-imp",
            G4Rule::LImpImp => "L-imp-imp",
            G4Rule::RAnd => "R-and",
            G4Rule::RImp => "R-imp",
            G4Rule::ROrLeft => "R-or1",
            G4Rule::ROrRight => "R-or2",
        }
    }
}

/// A derivation tree; hypotheses of every sequent are kept as a sorted set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub rule: G4Rule,
    pub principal: Option<PropFormula>,
    pub conclusion: Sequent,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    /// Indented one-line-per-step rendering.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(0, &mut out);
        out
    }

    fn render_into(&self, depth: usize, out: &mut String) {
        out.push_str(&"  ".repeat(depth));
        out.push_str(&format!("{}  [{}]\n", self.conclusion, self.rule.name()));
        for p in &self.premises {
            p.render_into(depth + 1, out);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IpcResult {
    Provable(Derivation),
    Unprovable,
}

impl IpcResult {
    pub fn is_provable(&self) -> bool {
        matches!(self, IpcResult::Provable(_))
    }
}

type Ctx = BTreeSet<PropFormula>;

fn seq(ctx: &Ctx, goal: &PropFormula) -> Sequent {
    Sequent {
        hypotheses: ctx.iter().cloned().collect(),
        goal: goal.clone(),
    }
}

fn without(ctx: &Ctx, f: &PropFormula, add: &[PropFormula]) -> Ctx {
    let mut c = ctx.clone();
    c.remove(f);
    c.extend(add.iter().cloned());
    c
}

const RED_ZONE: usize = 4 * 1024 * 1024;
const STACK_CHUNK: usize = 32 * 1024 * 1024;

#[derive(Default)]
struct Prover {
    failed: HashSet<(Ctx, PropFormula)>,
}

impl Prover {
    /// Premise of an invertible rule: its failure is the conclusion's failure,
    /// so only branch points are memoised.
    fn prove(&mut self, ctx: Ctx, goal: PropFormula) -> Option<Derivation> {
        stacker::maybe_grow(RED_ZONE, STACK_CHUNK, || self.search(&ctx, &goal))
    }

    fn prove_memo(&mut self, ctx: Ctx, goal: PropFormula) -> Option<Derivation> {
        let key = (ctx, goal);
        if self.failed.contains(&key) {
            return None;
        }
        let r = stacker::maybe_grow(RED_ZONE, STACK_CHUNK, || self.search(&key.0, &key.1));
        if r.is_none() {
            self.failed.insert(key);
        }
        r
    }

    fn node(
        rule: G4Rule,
        principal: Option<PropFormula>,
        ctx: &Ctx,
        goal: &PropFormula,
        premises: Vec<Derivation>,
    ) -> Derivation {
        Derivation {
            rule,
            principal,
            conclusion: seq(ctx, goal),
            premises,
        }
    }

    fn search(&mut self, ctx: &Ctx, goal: &PropFormula) -> Option<Derivation> {
        use PropFormula as P;
        if ctx.contains(&P::Bot) {
            return Some(Self::node(G4Rule::LBot, Some(P::Bot), ctx, goal, vec![]));
        }
        if ctx.contains(goal) {
            return Some(Self::node(
                G4Rule::Axiom,
                Some(goal.clone()),
                ctx,
                goal,
                vec![],
            ));
        }
        for h in ctx {
            match h {
                P::And(a, b) => {
                    let d = self.prove(
                        without(ctx, h, &[(**a).clone(), (**b).clone()]),
                        goal.clone(),
                    )?;
                    return Some(Self::node(
                        G4Rule::LAnd,
                        Some(h.clone()),
                        ctx,
                        goal,
                        vec![d],
                    ));
                }
                P::Or(a, b) => {
                    let d1 = self.prove(without(ctx, h, &[(**a).clone()]), goal.clone())?;
                    let d2 = self.prove(without(ctx, h, &[(**b).clone()]), goal.clone())?;
                    return Some(Self::node(
                        G4Rule::LOr,
                        Some(h.clone()),
                        ctx,
                        goal,
                        vec![d1, d2],
                    ));
                }
                P::Imp(a, b) => {
                    let rest: Option<(G4Rule, Vec<PropFormula>)> = match &**a {
                        P::Atom(_) if ctx.contains(a) => {
                            Some((G4Rule::LImpAtom, vec![(**b).clone()]))
                        }
                        P::Bot => Some((G4Rule::LImpBot, vec![])),
                        P::And(c, d) => Some((
                            G4Rule::LImpAnd,
                            vec![P::imp((**c).clone(), P::imp((**d).clone(), (**b).clone()))],
                        )),
                        P::Or(c, d) => Some((
                            G4Rule::LImpOr,
                            vec![
                                P::imp((**c).clone(), (**b).clone()),
                                P::imp((**d).clone(), (**b).clone()),
                            ],
                        )),
                        _ => None,
                    };
                    if let Some((rule, add)) = rest {
                        let d = self.prove(without(ctx, h, &add), goal.clone())?;
                        return Some(Self::node(rule, Some(h.clone()), ctx, goal, vec![d]));
                    }
                }
                _ => {}
            }
        }
        match goal {
            P::And(a, b) => {
                let d1 = self.prove(ctx.clone(), (**a).clone())?;
                let d2 = self.prove(ctx.clone(), (**b).clone())?;
                return Some(Self::node(G4Rule::RAnd, None, ctx, goal, vec![d1, d2]));
            }
            P::Imp(a, b) => {
                let mut c = ctx.clone();
                c.insert((**a).clone());
                let d = self.prove(c, (**b).clone())?;
                return Some(Self::node(G4Rule::RImp, None, ctx, goal, vec![d]));
            }
            P::Or(a, b) => {
                if let Some(d) = self.prove_memo(ctx.clone(), (**a).clone()) {
                    return Some(Self::node(G4Rule::ROrLeft, None, ctx, goal, vec![d]));
                }
                if let Some(d) = self.prove_memo(ctx.clone(), (**b).clone()) {
                    return Some(Self::node(G4Rule::ROrRight, None, ctx, goal, vec![d]));
                }
            }
            _ => {}
        }
        for h in ctx {
            if let P::Imp(a, b) = h {
                if let P::Imp(_, d) = &**a {
                    let left = without(ctx, h, &[P::imp((**d).clone(), (**b).clone())]);
                    let Some(d1) = self.prove_memo(left, (**a).clone()) else {
                        continue;
                    };
                    let Some(d2) = self.prove_memo(without(ctx, h, &[(**b).clone()]), goal.clone())
                    else {
                        continue;
                    };
                    return Some(Self::node(
                        G4Rule::LImpImp,
                        Some(h.clone()),
                        ctx,
                        goal,
                        vec![d1, d2],
                    ));
                }
            }
        }
        None
    }
}

pub fn prove_ipc(s: &Sequent) -> IpcResult {
    let (ctx, goal) = s.normalized();
    match Prover::default().prove_memo(ctx, goal) {
        Some(d) => IpcResult::Provable(d),
        None => IpcResult::Unprovable,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid {rule} step at `{sequent}`: {reason}")]
pub struct TraceError {
    pub rule: &'static str,
    pub sequent: String,
    pub reason: String,
}

/// Re-validates every step of a derivation against the calculus.
pub fn check_derivation(d: &Derivation) -> Result<(), TraceError> {
    use PropFormula as P;
    let fail = |reason: &str| TraceError {
        rule: d.rule.name(),
        sequent: d.conclusion.to_string(),
        reason: reason.to_string(),
    };
    let (ctx, goal) = d.conclusion.normalized();
    let premises: Vec<(Ctx, PropFormula)> = d
        .premises
        .iter()
        .map(|p| p.conclusion.normalized())
        .collect();
    let principal = || -> Result<&PropFormula, TraceError> {
        let p = d
            .principal
            .as_ref()
            .ok_or_else(|| fail("missing principal formula"))?;
        if ctx.contains(p) {
            Ok(p)
        } else {
            Err(fail("principal formula is not a hypothesis"))
        }
    };
    let expect: Vec<(Ctx, PropFormula)> = match d.rule {
        G4Rule::Axiom => {
            if !ctx.contains(&goal) {
                return Err(fail("goal is not a hypothesis"));
            }
            vec![]
        }
        G4Rule::LBot => {
            if !ctx.contains(&P::Bot) {
                return Err(fail("bot is not a hypothesis"));
            }
            vec![]
        }
        G4Rule::LAnd => match principal()? {
            h @ P::And(a, b) => vec![(
                without(&ctx, h, &[(**a).clone(), (**b).clone()]),
                goal.clone(),
            )],
            _ => return Err(fail("principal is not a conjunction")),
        },
        G4Rule::LOr => match principal()? {
            h @ P::Or(a, b) => vec![
                (without(&ctx, h, &[(**a).clone()]), goal.clone()),
                (without(&ctx, h, &[(**b).clone()]), goal.clone()),
            ],
            _ => return Err(fail("principal is not a disjunction")),
        },
        G4Rule::LImpAtom => match principal()? {
            h @ P::Imp(a, b) if matches!(**a, P::Atom(_)) && ctx.contains(a) => {
                vec![(without(&ctx, h, &[(**b).clone()]), goal.clone())]
            }
            _ => return Err(fail("principal is not an implication from a present atom")),
        },
        G4Rule::LImpBot => match principal()? {
            h @ P::Imp(a, _) if **a == P::Bot => vec![(without(&ctx, h, &[]), goal.clone())],
            _ => return Err(fail("principal is not an implication from bot")),
        },
        G4Rule::LImpAnd => match principal()? {
            h @ P::Imp(a, b) => match &**a {
                P::And(c, e) => vec![(
                    without(
                        &ctx,
                        h,
                        &[P::imp((**c).clone(), P::imp((**e).clone(), (**b).clone()))],
                    ),
                    goal.clone(),
                )],
                _ => return Err(fail("antecedent is not a conjunction")),
            },
            _ => return Err(fail("principal is not an implication")),
        },
        G4Rule::LImpOr => match principal()? {
            h @ P::Imp(a, b) => match &**a {
                P::Or(c, e) => vec![(
                    without(
                        &ctx,
                        h,
                        &[
                            P::imp((**c).clone(), (**b).clone()),
                            P::imp((**e).clone(), (**b).clone()),
                        ],
                    ),
                    goal.clone(),
                )],
                _ => return Err(fail("antecedent is not a disjunction")),
            },
            _ => return Err(fail("principal is not an implication")),
        },
        G4Rule::LImpImp => match principal()? {
            h @ P::Imp(a, b) => match &**a {
                P::Imp(_, e) => vec![
                    (
                        without(&ctx, h, &[P::imp((**e).clone(), (**b).clone())]),
                        (**a).clone(),
                    ),
                    (without(&ctx, h, &[(**b).clone()]), goal.clone()),
                ],
                _ => return Err(fail("antecedent is not an implication")),
            },
            _ => return Err(fail("principal is not an implication")),
        },
        G4Rule::RAnd => match &goal {
            P::And(a, b) => vec![(ctx.clone(), (**a).clone()), (ctx.clone(), (**b).clone())],
            _ => return Err(fail("goal is not a conjunction")),
        },
        G4Rule::RImp => match &goal {
            P::Imp(a, b) => {
                let mut c = ctx.clone();
                c.insert((**a).clone());
                vec![(c, (**b).clone())]
            }
            _ => return Err(fail("goal is not an implication")),
        },
        G4Rule::ROrLeft | G4Rule::ROrRight => match &goal {
            P::Or(a, b) => {
                let side = if d.rule == G4Rule::ROrLeft { a } else { b };
                vec![(ctx.clone(), (**side).clone())]
            }
            _ => return Err(fail("goal is not a disjunction")),
        },
    };
    if expect != premises {
        return Err(fail("premises do not match the rule"));
    }
    d.premises
        .iter()
        .try_for_each(|p| stacker::maybe_grow(RED_ZONE, STACK_CHUNK, || check_derivation(p)))
}

/// Truth-table validity.
pub fn prove_classical(f: &PropFormula) -> bool {
    let atoms: Vec<String> = f.atoms().into_iter().collect();
    let index: HashMap<&str, usize> = atoms
        .iter()
        .enumerate()
        .map(|(i, a)| (a.as_str(), i))
        .collect();
    (0u64..1 << atoms.len()).all(|bits| f.eval(&|a| bits >> index[a] & 1 == 1))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IpcError {
    #[error("malformed skeleton: {0}")]
    MalformedSkeleton(String),
}

pub const ATOM_BUDGET: usize = 12;

/// Abstracts atoms and quantified subformulas into propositional atoms, sharing
/// one atom per alpha-equivalence class across every call.
#[derive(Debug, Default, Clone)]
pub struct Skeletonizer {
    table: BTreeMap<String, String>,
    order: Vec<String>,
}

fn atom_name(i: usize) -> String {
    let letter = (b'a' + (i % 26) as u8) as char;
    if i < 26 {
        letter.to_string()
    } else {
        format!("{letter}{}", i / 26)
    }
}

impl Skeletonizer {
    pub fn new() -> Skeletonizer {
        Skeletonizer::default()
    }

    pub fn atom_count(&self) -> usize {
        self.order.len()
    }

    fn name_for(&mut self, f: &Formula) -> String {
        let key = f.alpha_key();
        if let Some(n) = self.table.get(&key) {
            return n.clone();
        }
        let n = atom_name(self.order.len());
        self.order.push(key.clone());
        self.table.insert(key, n.clone());
        n
    }

    pub fn abstract_formula(&mut self, f: &Formula) -> PropFormula {
        match f {
            Formula::Bot => PropFormula::Bot,
            Formula::And(a, b) => {
                PropFormula::and(self.abstract_formula(a), self.abstract_formula(b))
            }
            Formula::Or(a, b) => {
                PropFormula::or(self.abstract_formula(a), self.abstract_formula(b))
            }
            Formula::Imp(a, b) => {
                PropFormula::imp(self.abstract_formula(a), self.abstract_formula(b))
            }
            g => PropFormula::Atom(self.name_for(g)),
        }
    }
}

pub fn skeletonize(f: &Formula) -> PropFormula {
    Skeletonizer::new().abstract_formula(f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LemmaSchema {
    /// `p^⊥ -> ~p`
    DualNeg,
    /// `~(p /\ p^⊥)`
    DualContra,
    /// `(p^⊥)^⊥ <-> p`
    DualInv,
    /// `p <-> q` for the two sides of a Delta witness
    Delta,
}

impl LemmaSchema {
    pub fn tag(self) -> &'static str {
        match self {
            LemmaSchema::DualNeg => "dual-neg",
            LemmaSchema::DualContra => "dual-contra",
            LemmaSchema::DualInv => "dual-inv",
            LemmaSchema::Delta => "delta",
        }
    }
}

/// The trusted lemmas a propositional rule check may assume.
pub fn lemma_library() -> Vec<LemmaSchema> {
    vec![
        LemmaSchema::DualNeg,
        LemmaSchema::DualContra,
        LemmaSchema::DualInv,
        LemmaSchema::Delta,
    ]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyStatus {
    Verified,
    NeedsFirstOrder,
    Failed(String),
}

/// A prenex formula of exactly class `c` with the free variable `name`.
fn generic_formula(name: &str, c: Class) -> Formula {
    use crate::formula::Term;
    let n = c.level as usize;
    let vars: Vec<String> = (1..=n).map(|i| format!("{name}_{i}")).collect();
    let mut sum = Term::var(name);
    for v in &vars {
        sum = Term::add(sum, Term::var(v));
    }
    let mut f = Formula::eq(sum, Term::Zero);
    let starts_exists = c.kind != Kind::Pi;
    for (i, v) in vars.iter().enumerate().rev() {
        let exists = (i % 2 == 0) == starts_exists;
        f = if exists {
            Formula::exists(v, f)
        } else {
            Formula::forall(v, f)
        };
    }
    f
}

struct Letters {
    k: u32,
    map: BTreeMap<String, Formula>,
}

impl Letters {
    fn resolve(&mut self, text: &str, class: Class) -> Result<Formula, IpcError> {
        let t = text.trim();
        if t == "bot" {
            return Ok(Formula::Bot);
        }
        if let Some(rest) = t.strip_prefix('~') {
            let inner = self.resolve(rest, class)?;
            return Ok(Formula::not(inner));
        }
        if t.is_empty() || !t.chars().all(|c| c.is_ascii_alphanumeric()) {
            return Err(IpcError::MalformedSkeleton(format!(
                "bad witness letter `{t}`"
            )));
        }
        if let Some(f) = self.map.get(t) {
            return Ok(f.clone());
        }
        let c = if class.is_top() {
            Class::sigma(self.k + 1)
        } else {
            class
        };
        let f = generic_formula(t, c);
        self.map.insert(t.to_string(), f.clone());
        Ok(f)
    }

    fn get(&self, t: &str) -> Result<Formula, IpcError> {
        self.map.get(t.trim()).cloned().ok_or_else(|| {
            IpcError::MalformedSkeleton(format!("lemma refers to unused letter `{t}`"))
        })
    }
}

fn slot_classes(node: &PrincipleNode) -> Vec<Class> {
    let mut out = Vec::new();
    for c in node.args() {
        if c.kind == Kind::Delta {
            out.push(Class::sigma(c.level));
            out.push(Class::pi(c.level));
        } else if c.is_top() {
            out.push(c);
        } else {
            out.push(c.base());
        }
    }
    out
}

fn lemma_instances(
    text: &str,
    letters: &Letters,
    library: &[LemmaSchema],
) -> Result<Vec<Formula>, IpcError> {
    let mut parts = text.split(':');
    let tag = parts.next().unwrap_or_default().trim();
    let args: Vec<&str> = parts.collect();
    let schema = library
        .iter()
        .copied()
        .find(|l| l.tag() == tag)
        .ok_or_else(|| {
            IpcError::MalformedSkeleton(format!("lemma `{tag}` is not in the trusted library"))
        })?;
    let need = if schema == LemmaSchema::Delta { 2 } else { 1 };
    if args.len() != need {
        return Err(IpcError::MalformedSkeleton(format!(
            "lemma `{text}` takes {need} letter(s)"
        )));
    }
    let p = letters.get(args[0])?;
    let not_prenex =
        |_| IpcError::MalformedSkeleton(format!("lemma `{text}` needs a prenex witness"));
    Ok(match schema {
        LemmaSchema::DualNeg => vec![Formula::imp(dual(&p).map_err(not_prenex)?, Formula::not(p))],
        LemmaSchema::DualContra => {
            let d = dual(&p).map_err(not_prenex)?;
            vec![Formula::not(Formula::and(p, d))]
        }
        LemmaSchema::DualInv => {
            let dd = dual(&dual(&p).map_err(not_prenex)?).map_err(not_prenex)?;
            vec![Formula::iff(dd, p)]
        }
        LemmaSchema::Delta => vec![Formula::iff(p, letters.get(args[1])?)],
    })
}

/// The sequent a propositional rule check reduces to, before abstraction.
pub fn rule_sequent(
    rule: &Rule,
    library: &[LemmaSchema],
) -> Result<(Vec<Formula>, Formula), IpcError> {
    let v = &rule.verify;
    let (k, _) = rule
        .verification_nodes()
        .map_err(IpcError::MalformedSkeleton)?;
    let nodes: Vec<PrincipleNode> = rule
        .verification_nodes()
        .map_err(IpcError::MalformedSkeleton)?
        .1
        .into_iter()
        .flatten()
        .collect();
    if v.instances.len() != nodes.len() {
        return Err(IpcError::MalformedSkeleton(format!(
            "{} witness lists for {} principles",
            v.instances.len(),
            nodes.len()
        )));
    }
    let mut letters = Letters {
        k,
        map: BTreeMap::new(),
    };
    let mut rendered = Vec::new();
    for (node, groups) in nodes.iter().zip(&v.instances) {
        let roles = witness_roles(node.id(), &node.args());
        let mut classes = slot_classes(node);
        if roles.len() > classes.len() {
            classes.push(Class::top());
        }
        let mut conj: Option<Formula> = None;
        for group in groups.split('|') {
            let ws: Vec<&str> = group.split_whitespace().collect();
            if ws.len() != roles.len() {
                return Err(IpcError::MalformedSkeleton(format!(
                    "{node} takes {} witnesses",
                    roles.len()
                )));
            }
            let formulas = ws
                .iter()
                .zip(&classes)
                .map(|(w, c)| letters.resolve(w, *c))
                .collect::<Result<Vec<_>, _>>()?;
            let inst = instantiate(node.id(), &node.args(), &formulas)
                .map_err(|e| IpcError::MalformedSkeleton(format!("{node}: {e}")))?;
            conj = Some(match conj {
                None => inst.rendered,
                Some(c) => Formula::and(c, inst.rendered),
            });
        }
        rendered.push(
            conj.ok_or_else(|| IpcError::MalformedSkeleton(format!("{node} has no witnesses")))?,
        );
    }
    let goal = rendered.pop().expect("conclusion instance");
    let mut hyps = rendered;
    for l in &v.lemmas {
        hyps.extend(lemma_instances(l, &letters, library)?);
    }
    Ok((hyps, goal))
}

fn curried(hyps: &[PropFormula], goal: PropFormula) -> PropFormula {
    hyps.iter()
        .rev()
        .fold(goal, |acc, h| PropFormula::imp(h.clone(), acc))
}

pub fn verify_rule(rule: &Rule, library: &[LemmaSchema]) -> Result<VerifyStatus, IpcError> {
    let v = &rule.verify;
    if v.kind == VerifyKind::FirstOrder {
        return Ok(VerifyStatus::NeedsFirstOrder);
    }
    let given = match &v.skeleton {
        Some(s) => Some(parse_prop(s).map_err(|e| IpcError::MalformedSkeleton(e.to_string()))?),
        None => None,
    };
    let sequent = if v.instances.is_empty() {
        match given {
            Some(g) => Sequent::goal(g),
            None => {
                return Err(IpcError::MalformedSkeleton(
                    "no witnesses and no skeleton".into(),
                ))
            }
        }
    } else {
        let (hyps, goal) = rule_sequent(rule, library)?;
        let mut sk = Skeletonizer::new();
        let hyps: Vec<PropFormula> = hyps.iter().map(|h| sk.abstract_formula(h)).collect();
        let goal = sk.abstract_formula(&goal);
        if sk.atom_count() > ATOM_BUDGET {
            return Err(IpcError::MalformedSkeleton(format!(
                "{} atoms exceed the budget of {ATOM_BUDGET}",
                sk.atom_count()
            )));
        }
        if let Some(g) = given {
            let computed = curried(&hyps, goal.clone());
            if g != computed {
                return Ok(VerifyStatus::Failed(format!(
                    "skeleton mismatch: computed {computed}"
                )));
            }
        }
        Sequent::new(hyps, goal)
    };
    if sequent.goal.atoms().len() > ATOM_BUDGET {
        return Err(IpcError::MalformedSkeleton(
            "skeleton exceeds the atom budget".into(),
        ));
    }
    Ok(match prove_ipc(&sequent) {
        IpcResult::Provable(_) => VerifyStatus::Verified,
        IpcResult::Unprovable => {
            VerifyStatus::Failed(format!("not intuitionistically provable: {sequent}"))
        }
    })
}
