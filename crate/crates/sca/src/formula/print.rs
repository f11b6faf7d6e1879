use super::{Formula, Term};
use std::fmt;

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(self, 0, f)
    }
}

// 0 = sum, 1 = product operand, 2 = tight
fn write_term(t: &Term, ctx: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        Term::Var(v) => write!(f, "{v}"),
        Term::Zero => write!(f, "0"),
        Term::Succ(a) => write!(f, "S({a})"),
        Term::Proj0(a) => write!(f, "p0({a})"),
        Term::Proj1(a) => write!(f, "p1({a})"),
        Term::Pair(a, b) => write!(f, "pair({a}, {b})"),
        Term::Add(a, b) => {
            if ctx > 0 {
                write!(f, "(")?;
            }
            write_term(a, 0, f)?;
            write!(f, " + ")?;
            write_term(b, 1, f)?;
            if ctx > 0 {
                write!(f, ")")?;
            }
            Ok(())
        }
        Term::Mul(a, b) => {
            if ctx > 1 {
                write!(f, "(")?;
            }
            write_term(a, 1, f)?;
            write!(f, " * ")?;
            write_term(b, 2, f)?;
            if ctx > 1 {
                write!(f, ")")?;
            }
            Ok(())
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Iff,
    Imp,
    Or,
    And,
    Unary,
}

fn prec_of(g: &Formula) -> Prec {
    if g.as_negation().is_some() || g.is_atom() {
        return Prec::Unary;
    }
    if g.as_iff().is_some() {
        return Prec::Iff;
    }
    match g {
        Formula::And(..) => Prec::And,
        Formula::Or(..) => Prec::Or,
        Formula::Imp(..) => Prec::Imp,
        _ => Prec::Unary,
    }
}

fn is_quant(g: &Formula) -> bool {
    matches!(g, Formula::Exists(..) | Formula::Forall(..))
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, f)
    }
}

fn write_operand(g: &Formula, min: Prec, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if is_quant(g) || prec_of(g) < min {
        write!(f, "(")?;
        write_formula(g, f)?;
        write!(f, ")")
    } else {
        write_formula(g, f)
    }
}

fn write_body(g: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if is_quant(g) || g.as_negation().is_some() {
        write_formula(g, f)
    } else {
        write!(f, "(")?;
        write_formula(g, f)?;
        write!(f, ")")
    }
}

fn write_formula(g: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if let Some(inner) = g.as_negation() {
        write!(f, "~")?;
        if inner.as_negation().is_some() {
            return write_formula(inner, f);
        }
        write!(f, "(")?;
        write_formula(inner, f)?;
        return write!(f, ")");
    }
    if let Some((a, b)) = g.as_iff() {
        write_operand(a, Prec::Imp, f)?;
        write!(f, " <-> ")?;
        return write_operand(b, Prec::Imp, f);
    }
    if let Some((x, t, body)) = g.as_bounded_exists() {
        write!(f, "E {x} < {t}. ")?;
        return write_body(body, f);
    }
    if let Some((x, t, body)) = g.as_bounded_forall() {
        write!(f, "A {x} < {t}. ")?;
        return write_body(body, f);
    }
    match g {
        Formula::Eq(a, b) => write!(f, "{a} = {b}"),
        Formula::Lt(a, b) => write!(f, "{a} < {b}"),
        Formula::Bot => write!(f, "bot"),
        Formula::And(a, b) => {
            write_operand(a, Prec::And, f)?;
            write!(f, " /\\ ")?;
            write_operand(b, Prec::Unary, f)
        }
        Formula::Or(a, b) => {
            write_operand(a, Prec::Or, f)?;
            write!(f, " \\/ ")?;
            write_operand(b, Prec::And, f)
        }
        Formula::Imp(a, b) => {
            write_operand(a, Prec::Or, f)?;
            write!(f, " -> ")?;
            write_operand(b, Prec::Imp, f)
        }
        Formula::Exists(x, body) => {
            write!(f, "E {x}. ")?;
            write_body(body, f)
        }
        Formula::Forall(x, body) => {
            write!(f, "A {x}. ")?;
            write_body(body, f)
        }
    }
}
