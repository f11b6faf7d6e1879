//! Principle schemas: identifiers, graph nodes, the catalog and instance rendering.

use crate::duality::dual;
use crate::formula::{Formula, Term};
use crate::hierarchy::{class_subset, relative_classify, Class, HClass, Kind, TheoryStrength};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Lem,
    Dne,
    Dns,
    Dml,
    Cd,
    Coll,
    Ln,
    Peirce,
    Dual,
    Wdual,
    LemBot,
    DmlBot,
    DneOr,
}

impl Family {
    pub const ALL: [Family; 13] = [
        Family::Lem,
        Family::Dne,
        Family::Dns,
        Family::Dml,
        Family::Cd,
        Family::Coll,
        Family::Ln,
        Family::Peirce,
        Family::Dual,
        Family::Wdual,
        Family::LemBot,
        Family::DmlBot,
        Family::DneOr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Lem => "LEM",
            Family::Dne => "DNE",
            Family::Dns => "DNS",
            Family::Dml => "DML",
            Family::Cd => "CD",
            Family::Coll => "COLL",
            Family::Ln => "LN",
            Family::Peirce => "PEIRCE",
            Family::Dual => "DUAL",
            Family::Wdual => "WDUAL",
            Family::LemBot => "LEMBOT",
            Family::DmlBot => "DMLBOT",
            Family::DneOr => "DNEOR",
        }
    }

    pub fn from_name(s: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == s)
    }

    pub fn arity(self) -> usize {
        match self {
            Family::Dml | Family::Cd | Family::DmlBot | Family::DneOr => 2,
            _ => 1,
        }
    }

    pub fn symmetric(self) -> bool {
        matches!(self, Family::Dml | Family::DneOr | Family::DmlBot)
    }

    /// Whether holding at a class implies holding at every subclass.
    pub fn monotone(self) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Plain,
    Delta,
    DeltaSigma,
    DeltaPi,
}

impl Variant {
    fn tag(self) -> Option<&'static str> {
        match self {
            Variant::DeltaSigma => Some("DSIG"),
            Variant::DeltaPi => Some("DPI"),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrincipleId {
    pub family: Family,
    pub variant: Variant,
    pub arity: u8,
}

impl fmt::Display for PrincipleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family.name())?;
        match self.variant {
            Variant::Plain => Ok(()),
            Variant::Delta => write!(f, "[Delta]"),
            v => write!(f, ":{}", v.tag().unwrap_or_default()),
        }?;
        write!(f, "/{}", self.arity)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NodeError {
    #[error("unknown principle family `{0}`")]
    UnknownFamily(String),
    #[error("{family} takes {expected} class argument(s), got {got}")]
    ArityMismatch {
        family: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{0} is not a defined principle")]
    Invalid(String),
    #[error("malformed node `{0}`")]
    Syntax(String),
}

/// A principle at concrete classes, e.g. `DNE:S1` or `DMLBOT:DSIG:D2:S2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrincipleNode {
    pub family: Family,
    pub variant: Variant,
    pub a: Class,
    pub b: Option<Class>,
}

fn sp(c: Class) -> bool {
    c.neg == 0 && matches!(c.kind, Kind::Sigma | Kind::Pi)
}

fn plain_d(c: Class) -> bool {
    c.neg == 0 && c.kind == Kind::Delta
}

impl PrincipleNode {
    /// Canonicalises and checks the shape against the catalog.
    pub fn new(
        family: Family,
        variant: Variant,
        args: &[Class],
    ) -> Result<PrincipleNode, NodeError> {
        let arity = family.arity();
        let mut args: Vec<Class> = args.to_vec();
        if (family == Family::Dml || (family == Family::DmlBot && variant == Variant::Plain))
            && args.len() == 1
        {
            args.push(args[0]);
        }
        if args.len() != arity {
            return Err(NodeError::ArityMismatch {
                family: family.name(),
                expected: arity,
                got: args.len(),
            });
        }
        if family.symmetric() && matches!(variant, Variant::Plain | Variant::Delta) {
            args.sort();
        }
        let variant = match variant {
            Variant::Plain | Variant::Delta => {
                if args.iter().any(|c| c.kind == Kind::Delta) {
                    Variant::Delta
                } else {
                    Variant::Plain
                }
            }
            v => v,
        };
        let node = PrincipleNode {
            family,
            variant,
            a: args[0],
            b: args.get(1).copied(),
        };
        if !node.shape_ok() {
            return Err(NodeError::Invalid(node.to_string()));
        }
        Ok(node)
    }

    pub fn unary(family: Family, c: Class) -> PrincipleNode {
        PrincipleNode::new(family, Variant::Plain, &[c]).expect("valid unary node")
    }

    pub fn binary(family: Family, a: Class, b: Class) -> PrincipleNode {
        PrincipleNode::new(family, Variant::Plain, &[a, b]).expect("valid binary node")
    }

    pub fn args(&self) -> Vec<Class> {
        let mut v = vec![self.a];
        v.extend(self.b);
        v
    }

    pub fn id(&self) -> PrincipleId {
        PrincipleId {
            family: self.family,
            variant: self.variant,
            arity: self.family.arity() as u8,
        }
    }

    pub fn max_level(&self) -> u32 {
        self.args().iter().map(|c| c.level).max().unwrap_or(0)
    }

    fn shape_ok(&self) -> bool {
        use Family::*;
        use Variant::*;
        let a = self.a;
        let b = self.b;
        let tagged = matches!(self.variant, DeltaSigma | DeltaPi);
        match self.family {
            Lem => !a.is_top() && (!tagged || plain_d(a)),
            Dne | Peirce => !a.is_top() && !tagged,
            Dns | Coll | Ln | LemBot => sp(a) && !tagged,
            Dual | Wdual => {
                if tagged {
                    plain_d(a)
                } else {
                    sp(a)
                }
            }
            Dml => !tagged && !a.is_top(),
            Cd => !tagged && !a.is_top(),
            DneOr => !tagged && !a.is_top() && !b.is_some_and(|c| c.is_top()),
            DmlBot => {
                let b = b.expect("binary");
                if tagged {
                    plain_d(a) && sp(b)
                } else {
                    (sp(a) && sp(b)) || (plain_d(a) && a == b)
                }
            }
        }
    }
}

impl fmt::Display for PrincipleNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family.name())?;
        if let Some(t) = self.variant.tag() {
            write!(f, ":{t}")?;
        }
        write!(f, ":{}", self.a)?;
        if let Some(b) = self.b {
            let collapse = b == self.a
                && self.variant != Variant::DeltaSigma
                && self.variant != Variant::DeltaPi
                && matches!(self.family, Family::Dml | Family::DmlBot);
            if !collapse {
                write!(f, ":{b}")?;
            }
        }
        Ok(())
    }
}

/// Splits node text into its parts without canonicalising argument order.
pub fn parse_node_parts(s: &str) -> Result<(Family, Variant, Vec<Class>), NodeError> {
    let parts: Vec<&str> = s.trim().split(':').map(str::trim).collect();
    let family = Family::from_name(parts[0])
        .ok_or_else(|| NodeError::UnknownFamily(parts[0].to_string()))?;
    let mut rest = &parts[1..];
    let mut variant = Variant::Plain;
    match rest.first() {
        Some(&"DSIG") => {
            variant = Variant::DeltaSigma;
            rest = &rest[1..];
        }
        Some(&"DPI") => {
            variant = Variant::DeltaPi;
            rest = &rest[1..];
        }
        _ => {}
    }
    if rest.is_empty() {
        return Err(NodeError::Syntax(s.to_string()));
    }
    let args = rest
        .iter()
        .map(|c| {
            c.parse::<Class>()
                .map_err(|_| NodeError::Syntax(s.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((family, variant, args))
}

impl FromStr for PrincipleNode {
    type Err = NodeError;

    fn from_str(s: &str) -> Result<PrincipleNode, NodeError> {
        let (family, variant, args) = parse_node_parts(s)?;
        PrincipleNode::new(family, variant, &args)
    }
}

/// Parses a comma- or whitespace-separated node list.
pub fn parse_node_list(s: &str) -> Result<Vec<PrincipleNode>, NodeError> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect()
}

pub fn node_of(id: PrincipleId, class_args: &[Class]) -> Result<PrincipleNode, NodeError> {
    let expected = if id.family == Family::Dml
        || (id.family == Family::DmlBot && id.variant == Variant::Plain)
    {
        1..=2
    } else {
        id.arity as usize..=id.arity as usize
    };
    if !expected.contains(&class_args.len()) {
        return Err(NodeError::ArityMismatch {
            family: id.family.name(),
            expected: id.arity as usize,
            got: class_args.len(),
        });
    }
    PrincipleNode::new(id.family, id.variant, class_args)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub id: PrincipleId,
    pub schema: &'static str,
}

pub fn catalog() -> Vec<CatalogEntry> {
    use Family::*;
    use Variant::*;
    let e = |family, variant, schema| CatalogEntry {
        id: PrincipleId {
            family,
            variant,
            arity: Family::arity(family) as u8,
        },
        schema,
    };
    vec![
        e(Lem, Plain, "phi \\/ ~phi"),
        e(Lem, Delta, "(phi <-> psi) -> phi \\/ ~phi"),
        e(Lem, DeltaSigma, "(phi <-> psi) -> phi \\/ phi^"),
        e(Lem, DeltaPi, "(phi <-> psi) -> psi \\/ psi^"),
        e(LemBot, Plain, "phi \\/ phi^"),
        e(Dne, Plain, "~~phi -> phi"),
        e(Dne, Delta, "(phi <-> psi) -> (~~phi -> phi)"),
        e(Dns, Plain, "(A x. ~~phi(x)) -> ~~(A x. phi(x))"),
        e(Dml, Plain, "~(phi /\\ psi) -> ~phi \\/ ~psi"),
        e(
            Dml,
            Delta,
            "(phi <-> phi') [/\\ (psi <-> psi')] -> (~(phi /\\ psi) -> ~phi \\/ ~psi)",
        ),
        e(DmlBot, Plain, "~(phi /\\ psi) -> phi^ \\/ psi^"),
        e(
            DmlBot,
            Delta,
            "(phi <-> phi') /\\ (psi <-> psi') -> (~(phi /\\ psi) -> phi^ \\/ psi^)",
        ),
        e(
            DmlBot,
            DeltaSigma,
            "(phi <-> phi') -> (~(phi /\\ psi) -> phi^ \\/ psi^)",
        ),
        e(
            DmlBot,
            DeltaPi,
            "(phi <-> phi') -> (~(phi /\\ psi) -> phi'^ \\/ psi^)",
        ),
        e(DneOr, Plain, "~~(phi \\/ psi) -> phi \\/ psi"),
        e(
            DneOr,
            Delta,
            "(phi <-> phi') [/\\ (psi <-> psi')] -> (~~(phi \\/ psi) -> phi \\/ psi)",
        ),
        e(
            Cd,
            Plain,
            "(A x. (phi \\/ psi(x))) -> phi \\/ A x. psi(x), x not free in phi",
        ),
        e(
            Cd,
            Delta,
            "(phi <-> phi') -> ((A x. (phi \\/ psi(x))) -> phi \\/ A x. psi(x))",
        ),
        e(
            Coll,
            Plain,
            "(A w. E y < x. A z < w. phi(y, z)) -> E y < x. A z. phi(y, z)",
        ),
        e(
            Ln,
            Plain,
            "(E x. phi(x)) -> E x. (phi(x) /\\ A y < x. ~phi(y))",
        ),
        e(Peirce, Plain, "((phi -> psi) -> phi) -> phi, psi arbitrary"),
        e(
            Peirce,
            Delta,
            "(phi <-> phi') -> (((phi -> psi) -> phi) -> phi)",
        ),
        e(Dual, Plain, "~phi -> phi^"),
        e(Dual, DeltaSigma, "(phi <-> psi) -> (~phi -> phi^)"),
        e(Dual, DeltaPi, "(phi <-> psi) -> (~psi -> psi^)"),
        e(Wdual, Plain, "~phi^ -> ~~phi"),
        e(Wdual, DeltaSigma, "(phi <-> psi) -> (~phi^ -> ~~phi)"),
        e(Wdual, DeltaPi, "(phi <-> psi) -> (~psi^ -> ~~psi)"),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("witness {index} must be in {required}, but is {actual}")]
    ClassMismatch {
        index: usize,
        required: String,
        actual: String,
    },
    #[error("side condition violated: {0}")]
    SideConditionViolated(String),
    #[error("expected {expected} witness formula(s), got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Node(#[from] NodeError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrincipleInstance {
    pub id: PrincipleId,
    pub class_args: Vec<Class>,
    pub witnesses: Vec<Formula>,
    pub rendered: Formula,
}

/// Names of the witness slots, in the order `instantiate` consumes them.
pub fn witness_roles(id: PrincipleId, class_args: &[Class]) -> Vec<&'static str> {
    let mut roles = Vec::new();
    let args = expand_args(id, class_args);
    if args.len() == 1 {
        roles.push("phi");
        if args[0].kind == Kind::Delta {
            roles.push(if id.family == Family::Peirce {
                "phi2"
            } else {
                "psi"
            });
        }
        if id.family == Family::Peirce {
            roles.push("psi");
        }
        return roles;
    }
    roles.push("phi");
    if args[0].kind == Kind::Delta {
        roles.push("phi2");
    }
    roles.push("psi");
    if args.get(1).is_some_and(|c| c.kind == Kind::Delta) {
        roles.push("psi2");
    }
    roles
}

fn expand_args(id: PrincipleId, class_args: &[Class]) -> Vec<Class> {
    let mut v = class_args.to_vec();
    if v.len() == 1 && id.arity == 2 {
        v.push(v[0]);
    }
    v
}

fn negs(f: &Formula, n: u8) -> Formula {
    let mut g = f.clone();
    for _ in 0..n {
        g = Formula::not(g);
    }
    g
}

fn check_class(index: usize, w: &Formula, required: HClass) -> Result<(), InstanceError> {
    let actual =
        relative_classify(w, &TheoryStrength::ha()).map_err(|_| InstanceError::ClassMismatch {
            index,
            required: required.to_string(),
            actual: "unclassifiable".into(),
        })?;
    if class_subset(actual, required) {
        Ok(())
    } else {
        Err(InstanceError::ClassMismatch {
            index,
            required: required.to_string(),
            actual: actual.to_string(),
        })
    }
}

fn dual_of(index: usize, w: &Formula) -> Result<Formula, InstanceError> {
    dual(w).map_err(|_| InstanceError::ClassMismatch {
        index,
        required: "a prenex formula".into(),
        actual: w.to_string(),
    })
}

/// One class argument's witnesses: the formula itself and, for a Delta class,
/// its Pi partner.
struct Slot {
    base: Formula,
    partner: Option<Formula>,
    neg: u8,
}

impl Slot {
    fn value(&self) -> Formula {
        negs(&self.base, self.neg)
    }

    fn premise(&self) -> Option<Formula> {
        self.partner
            .as_ref()
            .map(|p| Formula::iff(self.base.clone(), p.clone()))
    }
}

fn guarded(premises: Vec<Formula>, body: Formula) -> Formula {
    let mut it = premises.into_iter();
    match it.next() {
        None => body,
        Some(first) => Formula::imp(it.fold(first, Formula::and), body),
    }
}

pub fn instantiate(
    id: PrincipleId,
    class_args: &[Class],
    witnesses: &[Formula],
) -> Result<PrincipleInstance, InstanceError> {
    let node = node_of(id, class_args)?;
    let args = expand_args(id, class_args);
    let roles = witness_roles(id, class_args);
    if witnesses.len() != roles.len() {
        return Err(InstanceError::ArityMismatch {
            expected: roles.len(),
            got: witnesses.len(),
        });
    }
    let mut next = 0usize;
    let mut slots = Vec::new();
    for c in &args {
        let i = next;
        let base = witnesses[i].clone();
        next += 1;
        let partner = if c.kind == Kind::Delta {
            check_class(i, &base, HClass::sigma(c.level))?;
            check_class(i + 1, &witnesses[i + 1], HClass::pi(c.level))?;
            next += 1;
            Some(witnesses[i + 1].clone())
        } else {
            if let Some(h) = c.base().hclass() {
                check_class(i, &base, h)?;
            }
            None
        };
        slots.push(Slot {
            base,
            partner,
            neg: c.neg,
        });
    }
    let extra = witnesses.get(next).cloned();
    let rendered = render(node, &slots, extra)?;
    Ok(PrincipleInstance {
        id: node.id(),
        class_args: args,
        witnesses: witnesses.to_vec(),
        rendered,
    })
}

fn render(
    node: PrincipleNode,
    slots: &[Slot],
    extra: Option<Formula>,
) -> Result<Formula, InstanceError> {
    use Family::*;
    let s0 = &slots[0];
    let a = s0.value();
    let premises: Vec<Formula> = slots.iter().filter_map(Slot::premise).collect();
    let tagged_side = |sigma: bool| -> &Formula {
        if sigma {
            &s0.base
        } else {
            s0.partner.as_ref().expect("Delta slot has a partner")
        }
    };
    let body = match node.family {
        Lem if matches!(node.variant, Variant::DeltaSigma | Variant::DeltaPi) => {
            let w = tagged_side(node.variant == Variant::DeltaSigma);
            Formula::or(w.clone(), dual_of(0, w)?)
        }
        Lem => Formula::or(a.clone(), Formula::not(a)),
        LemBot => Formula::or(a.clone(), dual_of(0, &a)?),
        Dne => Formula::imp(Formula::not(Formula::not(a.clone())), a),
        Peirce => {
            let psi = extra.expect("Peirce takes a second witness");
            Formula::imp(Formula::imp(Formula::imp(a.clone(), psi), a.clone()), a)
        }
        Dns => Formula::imp(
            Formula::forall("x", Formula::not(Formula::not(a.clone()))),
            Formula::not(Formula::not(Formula::forall("x", a))),
        ),
        Dual | Wdual => {
            let w = match node.variant {
                Variant::DeltaPi => tagged_side(false),
                _ => &s0.base,
            };
            let d = dual_of(0, w)?;
            if node.family == Dual {
                Formula::imp(Formula::not(w.clone()), d)
            } else {
                Formula::imp(Formula::not(d), Formula::not(Formula::not(w.clone())))
            }
        }
        Dml => {
            let b = slots[1].value();
            Formula::imp(
                Formula::not(Formula::and(a.clone(), b.clone())),
                Formula::or(Formula::not(a), Formula::not(b)),
            )
        }
        DmlBot => {
            let b = slots[1].value();
            let left = if node.variant == Variant::DeltaPi {
                tagged_side(false).clone()
            } else {
                a.clone()
            };
            Formula::imp(
                Formula::not(Formula::and(a, b.clone())),
                Formula::or(dual_of(0, &left)?, dual_of(1, &b)?),
            )
        }
        DneOr => {
            let b = slots[1].value();
            let d = Formula::or(a, b);
            Formula::imp(Formula::not(Formula::not(d.clone())), d)
        }
        Cd => {
            if s0.base.has_free("x") {
                return Err(InstanceError::SideConditionViolated(
                    "x must not be free in phi".into(),
                ));
            }
            let b = slots[1].value();
            Formula::imp(
                Formula::forall("x", Formula::or(a.clone(), b.clone())),
                Formula::or(a, Formula::forall("x", b)),
            )
        }
        Coll => {
            for v in ["x", "w"] {
                if s0.base.has_free(v) {
                    return Err(InstanceError::SideConditionViolated(format!(
                        "{v} must not be free in phi"
                    )));
                }
            }
            let (x, w) = (Term::var("x"), Term::var("w"));
            let lhs = Formula::forall(
                "w",
                Formula::exists_below("y", x.clone(), Formula::forall_below("z", w, a.clone())),
            );
            let rhs = Formula::exists_below("y", x, Formula::forall("z", a));
            Formula::imp(lhs, rhs)
        }
        Ln => {
            if s0.base.has_free("y") {
                return Err(InstanceError::SideConditionViolated(
                    "y must not be free in phi".into(),
                ));
            }
            let ay = a.substitute("x", &Term::var("y"));
            Formula::imp(
                Formula::exists("x", a.clone()),
                Formula::exists(
                    "x",
                    Formula::and(
                        a,
                        Formula::forall_below("y", Term::var("x"), Formula::not(ay)),
                    ),
                ),
            )
        }
    };
    Ok(guarded(premises, body))
}
