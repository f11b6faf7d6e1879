//! Command dispatch for the `sca` binary.

use clap::{Args, Parser, Subcommand};
use sca::derivability::{
    build_figure, closure, equivalence_class, export_dot, load_rulebase, query, ChainStep,
    EdgeStyle, Preset, QueryResult, RuleBase, TheoryContext, SHIPPED_RULEBASE,
};
use sca::duality::dual;
use sca::formula::{parse, Formula};
use sca::hierarchy::{classify_prenex, prenex_merge, relative_classify, HClass, TheoryStrength};
use sca::ipc::{parse_prop, prove_ipc, IpcResult, Sequent, VerifyStatus};
use sca::principles::{
    instantiate, parse_node_list, parse_node_parts, witness_roles, InstanceError, PrincipleId,
    PrincipleNode,
};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

pub const RULEBASE_ENV: &str = "SCA_RULEBASE";

#[derive(Parser, Debug)]
#[command(
    name = "sca",
    version,
    about = "Arithmetical hierarchy tools and a derivability engine for semi-classical principles"
)]
pub struct Cli {
    /// Print a JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Rule base file (default: $SCA_RULEBASE, then data/rulebase.json next to the executable, then the built-in copy).
    #[arg(long, global = true, value_name = "PATH")]
    pub rulebase: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Class of a prenex formula.
    Classify { formula: String },
    /// Dual of a prenex formula.
    Dual { formula: String },
    /// Contract adjacent like quantifiers by pairing.
    Merge { formula: String },
    /// Class of a formula up to equivalence over HA plus the given principles.
    Relclassify {
        formula: String,
        #[arg(long, default_value = "")]
        theory: String,
    },
    /// Render an instance of a principle for the given witnesses.
    Instantiate(InstantiateArgs),
    /// Decide intuitionistic provability of a propositional formula.
    Ipc {
        formula: String,
        #[arg(long)]
        trace: bool,
    },
    /// Check the propositional rules of the rule base.
    VerifyRules,
    /// Everything the rule base derives from a base theory.
    Closure {
        #[arg(long, default_value = "")]
        base: String,
        #[arg(long, default_value_t = 4)]
        kmax: u32,
    },
    /// Decide whether a principle follows from a base theory.
    Query {
        #[arg(long, default_value = "")]
        base: String,
        #[arg(long)]
        goal: String,
        #[arg(long, default_value_t = 4)]
        kmax: u32,
    },
    /// Principles inter-derivable with a node over HA.
    Equiv {
        node: String,
        #[arg(long, default_value = "")]
        base: String,
        #[arg(long, default_value_t = 4)]
        kmax: u32,
    },
    /// Write one of the implication diagrams as a DOT digraph.
    Graph {
        #[arg(long)]
        preset: String,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct InstantiateArgs {
    pub node: String,
    #[arg(long)]
    pub phi: Option<String>,
    #[arg(long)]
    pub psi: Option<String>,
    #[arg(long)]
    pub phi2: Option<String>,
    #[arg(long)]
    pub psi2: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    kind: &'static str,
    message: String,
}

fn fail(kind: &'static str, message: impl ToString) -> Failure {
    Failure {
        kind,
        message: message.to_string(),
    }
}

/// Text and JSON renderings of a successful command.
struct Report {
    text: String,
    json: Value,
    code: i32,
}

fn report(text: String, json: Value) -> Report {
    Report {
        text,
        json,
        code: 0,
    }
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: rendered,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: rendered,
                }
            };
        }
    };
    let json = cli.json;
    match dispatch(&cli) {
        Ok(r) => Outcome {
            code: r.code,
            stdout: if json {
                format!("{}\n", serde_json::to_string_pretty(&r.json).expect("json"))
            } else {
                r.text
            },
            stderr: String::new(),
        },
        Err(f) if json => Outcome {
            code: 1,
            stdout: format!(
                "{}\n",
                serde_json::to_string_pretty(
                    &json!({"error": {"kind": f.kind, "message": f.message}})
                )
                .expect("json")
            ),
            stderr: String::new(),
        },
        Err(f) => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {}: {}\n", f.kind, f.message),
        },
    }
}

fn formula(src: &str) -> Result<Formula, Failure> {
    parse(src).map_err(|e| fail("ParseError", e))
}

fn nodes(src: &str) -> Result<Vec<PrincipleNode>, Failure> {
    parse_node_list(src).map_err(|e| fail("NodeError", e))
}

fn node(src: &str) -> Result<PrincipleNode, Failure> {
    src.parse().map_err(|e| fail("NodeError", e))
}

fn class_json(c: HClass) -> Value {
    json!(c.to_string())
}

fn names(ns: impl IntoIterator<Item = PrincipleNode>) -> Vec<String> {
    ns.into_iter().map(|n| n.to_string()).collect()
}

/// Locates the rule base: explicit path, environment, executable data dir, built-in.
pub fn resolve_rulebase(explicit: Option<&Path>) -> Result<(String, String), String> {
    let read = |p: &Path| std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()));
    if let Some(p) = explicit {
        return Ok((read(p)?, p.display().to_string()));
    }
    if let Some(p) = std::env::var_os(RULEBASE_ENV) {
        let p = PathBuf::from(p);
        return Ok((read(&p)?, p.display().to_string()));
    }
    if let Some(dir) = std::env::current_exe()
        .ok()
        .and_then(|e| e.parent().map(Path::to_path_buf))
    {
        let p = dir.join("data").join("rulebase.json");
        if p.is_file() {
            return Ok((read(&p)?, p.display().to_string()));
        }
    }
    Ok((SHIPPED_RULEBASE.to_string(), "built-in".to_string()))
}

fn rulebase(cli: &Cli) -> Result<RuleBase, Failure> {
    let (src, origin) =
        resolve_rulebase(cli.rulebase.as_deref()).map_err(|e| fail("IoError", e))?;
    load_rulebase(&src).map_err(|e| fail("LoadError", format!("{origin}: {e}")))
}

fn dispatch(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Classify { formula: src } => {
            let f = formula(src)?;
            let c = classify_prenex(&f).map_err(|e| fail("NotPrenex", e))?;
            Ok(report(
                format!("{c}\n"),
                json!({"command": "classify", "input": f.to_string(), "class": class_json(c)}),
            ))
        }
        Command::Dual { formula: src } => {
            let f = formula(src)?;
            let d = dual(&f).map_err(|e| fail("NotPrenex", e))?;
            Ok(report(
                format!("{d}\n"),
                json!({"command": "dual", "input": f.to_string(), "dual": d.to_string()}),
            ))
        }
        Command::Merge { formula: src } => {
            let f = formula(src)?;
            let m = prenex_merge(&f).map_err(|e| fail("NotPrenex", e))?;
            let c = classify_prenex(&m).map_err(|e| fail("NotPrenex", e))?;
            Ok(report(
                format!("{m}\n"),
                json!({"command": "merge", "input": f.to_string(), "merged": m.to_string(), "class": class_json(c)}),
            ))
        }
        Command::Relclassify {
            formula: src,
            theory,
        } => {
            let f = formula(src)?;
            let t = nodes(theory)?;
            let c = relative_classify(&f, &TheoryStrength::with_nodes(t.iter().copied()))
                .map_err(|e| fail("Unclassifiable", e))?;
            Ok(report(
                format!("{c}\n"),
                json!({"command": "relclassify", "input": f.to_string(), "theory": names(t), "class": class_json(c)}),
            ))
        }
        Command::Instantiate(a) => instantiate_cmd(a),
        Command::Ipc {
            formula: src,
            trace,
        } => {
            let f = parse_prop(src).map_err(|e| fail("ParseError", e))?;
            let r = prove_ipc(&Sequent::goal(f.clone()));
            let (verdict, derivation) = match &r {
                IpcResult::Provable(d) => ("PROVABLE", Some(d.render())),
                IpcResult::Unprovable => ("UNPROVABLE", None),
            };
            let mut text = format!("{verdict}\n");
            if *trace {
                if let Some(d) = &derivation {
                    text.push_str(d);
                }
            }
            Ok(report(
                text,
                json!({
                    "command": "ipc",
                    "formula": f.to_string(),
                    "provable": r.is_provable(),
                    "trace": if *trace { json!(derivation) } else { Value::Null },
                }),
            ))
        }
        Command::VerifyRules => {
            let rb = rulebase(cli)?;
            let rep = sca::derivability::verify_rulebase(&rb);
            let mut text = String::new();
            let mut rows = Vec::new();
            for (id, status) in &rep.per_rule {
                let (tag, msg) = match status {
                    VerifyStatus::Verified => ("verified", None),
                    VerifyStatus::NeedsFirstOrder => ("needs-first-order", None),
                    VerifyStatus::Failed(m) => ("failed", Some(m.clone())),
                };
                if !matches!(status, VerifyStatus::NeedsFirstOrder) {
                    match &msg {
                        Some(m) => text.push_str(&format!("{tag:<10} {id}: {m}\n")),
                        None => text.push_str(&format!("{tag:<10} {id}\n")),
                    }
                }
                rows.push(json!({"id": id, "status": tag, "message": msg}));
            }
            text.push_str(&format!(
                "verified: {}, failed: {}, needs-first-order: {}\n",
                rep.verified, rep.failed, rep.needs_first_order
            ));
            Ok(Report {
                text,
                json: json!({
                    "command": "verify-rules",
                    "verified": rep.verified,
                    "failed": rep.failed,
                    "needs_first_order": rep.needs_first_order,
                    "rules": rows,
                }),
                code: if rep.ok() { 0 } else { 1 },
            })
        }
        Command::Closure { base, kmax } => {
            let rb = rulebase(cli)?;
            let ctx = context(base, *kmax)?;
            let c = closure(&ctx, &rb);
            let facts = names(c.facts.iter().copied());
            let mut text: String = facts.iter().map(|f| format!("{f}\n")).collect();
            if let Some(l) = c.min_clamped_level {
                text.push_str(&format!(
                    "note: conclusions at level {l} and above were cut off at k_max = {kmax}\n"
                ));
            }
            Ok(report(
                text,
                json!({
                    "command": "closure",
                    "base": names(ctx.assumed.iter().copied()),
                    "kmax": kmax,
                    "facts": facts,
                    "clamped": c.clamped(),
                }),
            ))
        }
        Command::Query { base, goal, kmax } => {
            let rb = rulebase(cli)?;
            let ctx = context(base, *kmax)?;
            let g = node(goal)?;
            let r = query(&ctx, &g, &rb).map_err(|e| fail("LevelOutOfRange", e))?;
            Ok(query_report(&ctx, &g, &r, &rb))
        }
        Command::Equiv {
            node: src,
            base,
            kmax,
        } => {
            let rb = rulebase(cli)?;
            let n = node(src)?;
            let ctx = context(base, *kmax)?;
            let e = equivalence_class(&n, &ctx, &rb).map_err(|e| fail("LevelOutOfRange", e))?;
            let members = names(e);
            Ok(report(
                members.iter().map(|m| format!("{m}\n")).collect(),
                json!({"command": "equiv", "node": n.to_string(), "kmax": kmax, "members": members}),
            ))
        }
        Command::Graph { preset, k, out } => {
            let p: Preset = preset.parse().map_err(|e: String| fail("UsageError", e))?;
            if *k == 0 {
                return Err(fail("UsageError", "figures are drawn for k >= 1"));
            }
            let rb = rulebase(cli)?;
            let dot = export_dot(p, *k, &rb);
            let fig = build_figure(p, *k, &rb);
            let text = match out {
                Some(path) => {
                    std::fs::write(path, &dot)
                        .map_err(|e| fail("IoError", format!("{}: {e}", path.display())))?;
                    format!(
                        "wrote {}: {} vertices, {} edges\n",
                        path.display(),
                        fig.vertices.len(),
                        fig.edges.len()
                    )
                }
                None => dot.clone(),
            };
            let edges: Vec<Value> = fig
                .edges
                .iter()
                .map(|e| {
                    json!({
                        "from": e.from.to_string(),
                        "to": e.to.to_string(),
                        "style": match e.style {
                            EdgeStyle::Solid => "solid",
                            EdgeStyle::Dashed => "dashed",
                            EdgeStyle::DashDot => "dash-dot",
                        },
                        "base": names(e.base.iter().copied()),
                    })
                })
                .collect();
            Ok(report(
                text,
                json!({
                    "command": "graph",
                    "preset": fig.name,
                    "k": k,
                    "out": out.as_ref().map(|p| p.display().to_string()),
                    "vertices": names(fig.vertices.iter().copied()),
                    "edges": edges,
                }),
            ))
        }
    }
}

fn context(base: &str, kmax: u32) -> Result<TheoryContext, Failure> {
    Ok(TheoryContext::new(nodes(base)?, kmax))
}

fn step_json(s: &ChainStep, rb: &RuleBase) -> Value {
    json!({
        "rule": s.rule_id,
        "k": s.k,
        "premises": names(s.premises.iter().copied()),
        "conclusion": s.conclusion.to_string(),
        "quote": rb.rule(&s.rule_id).map(|r| r.cite.quote.clone()),
    })
}

fn step_text(s: &ChainStep, rb: &RuleBase) -> String {
    let premises = names(s.premises.iter().copied()).join(", ");
    let at = s.k.map(|k| format!(" @ k={k}")).unwrap_or_default();
    let quote = rb
        .rule(&s.rule_id)
        .map(|r| format!("  ({})", r.cite.quote))
        .unwrap_or_default();
    if premises.is_empty() {
        format!("  {}{at}: {}{quote}\n", s.rule_id, s.conclusion)
    } else {
        format!(
            "  {}{at}: {premises} => {}{quote}\n",
            s.rule_id, s.conclusion
        )
    }
}

fn query_report(
    ctx: &TheoryContext,
    goal: &PrincipleNode,
    r: &QueryResult,
    rb: &RuleBase,
) -> Report {
    let base = names(ctx.assumed.iter().copied());
    match r {
        QueryResult::Derivable { chain } => {
            let mut text = String::from("DERIVABLE\n");
            for s in chain {
                text.push_str(&step_text(s, rb));
            }
            report(
                text,
                json!({
                    "command": "query",
                    "base": base,
                    "goal": goal.to_string(),
                    "kmax": ctx.k_max,
                    "result": "derivable",
                    "chain": chain.iter().map(|s| step_json(s, rb)).collect::<Vec<_>>(),
                }),
            )
        }
        QueryResult::Separated { fact_id, k, cite } => report(
            format!("SEPARATED\n  {fact_id} @ k={k}: {}\n", cite.quote),
            json!({
                "command": "query",
                "base": base,
                "goal": goal.to_string(),
                "kmax": ctx.k_max,
                "result": "separated",
                "fact": fact_id,
                "k": k,
                "cite": {"ref": cite.reference, "quote": cite.quote},
            }),
        ),
        QueryResult::Unknown { boundary_warning } => {
            let mut text = String::from("UNKNOWN\n");
            if *boundary_warning {
                text.push_str(
                    "warning: derivations were cut off near k_max; try a larger --kmax\n",
                );
            }
            report(
                text,
                json!({
                    "command": "query",
                    "base": base,
                    "goal": goal.to_string(),
                    "kmax": ctx.k_max,
                    "result": "unknown",
                    "boundary_warning": boundary_warning,
                }),
            )
        }
    }
}

fn instantiate_cmd(a: &InstantiateArgs) -> Result<Report, Failure> {
    let (family, variant, args) = parse_node_parts(&a.node).map_err(|e| fail("NodeError", e))?;
    let id = PrincipleId {
        family,
        variant,
        arity: family.arity() as u8,
    };
    let roles = witness_roles(id, &args);
    let mut witnesses = Vec::new();
    for role in &roles {
        let src = match *role {
            "phi" => &a.phi,
            "psi" => &a.psi,
            "phi2" => &a.phi2,
            _ => &a.psi2,
        };
        let src = src
            .as_ref()
            .ok_or_else(|| fail("UsageError", format!("{} needs --{role}", a.node)))?;
        witnesses.push(formula(src)?);
    }
    let inst = instantiate(id, &args, &witnesses).map_err(|e| {
        let kind = match e {
            InstanceError::ClassMismatch { .. } => "ClassMismatch",
            InstanceError::SideConditionViolated(..) => "SideConditionViolated",
            InstanceError::ArityMismatch { .. } => "ArityMismatch",
            InstanceError::Node(..) => "NodeError",
        };
        fail(kind, e)
    })?;
    Ok(report(
        format!("{}\n", inst.rendered),
        json!({
            "command": "instantiate",
            "node": a.node.trim(),
            "roles": roles,
            "witnesses": inst.witnesses.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            "instance": inst.rendered.to_string(),
        }),
    ))
}
