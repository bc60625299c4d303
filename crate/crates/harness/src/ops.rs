//! Single operations on resolved instances, shared by directives and CLI verbs.

use asymlin::bilinear_ops::{
    adjoint_norm_check, bilin_norm, form_norm, operator_distance, precompact_class, schauder_bilinear_net, sym_norm,
    verify_schauder, ClassVerdict,
};
use asymlin::linear_ops::{dual_norm_of, schauder_linear_check, LinearSchauderOutcome};
use asymlin::precompact::{polyhedron_precompact, PrecompactVerdict};
use asymlin::rational::{format_rational, Rational, Vector};
use asymlin::{Caps, Exec};
use serde::Serialize;

use crate::format::{Arg, Directive, Expectation, FormatError, InstanceFile, Operator, Resolved};

#[derive(Debug, Clone)]
pub struct Context {
    pub caps: Caps,
    pub eps: Rational,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for Context {
    fn default() -> Self {
        Context { caps: Caps::default(), eps: Rational::new(1.into(), 2.into()), seed: 0, exec: Exec::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OpError {
    Input(FormatError),
    Compute(String),
}

impl std::fmt::Display for OpError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OpError::Input(e) => e.fmt(f),
            OpError::Compute(m) => f.write_str(m),
        }
    }
}

impl From<FormatError> for OpError {
    fn from(e: FormatError) -> Self {
        OpError::Input(e)
    }
}

impl From<asymlin::Error> for OpError {
    fn from(e: asymlin::Error) -> Self {
        match e {
            e @ (asymlin::Error::Input(_) | asymlin::Error::Dimension { .. }) => {
                OpError::Input(FormatError::Semantic { key: "arguments".into(), message: e.to_string() })
            }
            other => OpError::Compute(other.to_string()),
        }
    }
}

fn usage(op: &str, message: &str) -> OpError {
    OpError::Input(FormatError::Semantic { key: op.into(), message: message.into() })
}

fn name<'a>(op: &str, args: &'a [Arg], i: usize) -> Result<&'a str, OpError> {
    match args.get(i) {
        Some(Arg::Name(n)) => Ok(n),
        _ => Err(usage(op, &format!("argument {} must be a name", i + 1))),
    }
}

fn vector<'a>(op: &str, args: &'a [Arg], i: usize) -> Result<&'a Vector, OpError> {
    match args.get(i) {
        Some(Arg::Vector(v)) => Ok(v),
        _ => Err(usage(op, &format!("argument {} must be a vector", i + 1))),
    }
}

fn class_word(v: &ClassVerdict) -> &'static str {
    match v {
        ClassVerdict::Certified(_) => "certified",
        ClassVerdict::Refuted(_) => "refuted",
        ClassVerdict::Undetermined(_) => "undetermined",
    }
}

pub const OPERATIONS: &[&str] = &["eval", "norm", "sym-norm", "dual", "adjoint", "precompact", "distance", "net"];

/// Runs one operation and renders its exact outcome.
pub fn run_op(r: &Resolved, op: &str, args: &[Arg], ctx: &Context) -> Result<String, OpError> {
    let (caps, exec) = (&ctx.caps, ctx.exec);
    match op {
        "eval" => {
            let p = r.space(name(op, args, 0)?)?;
            Ok(format_rational(&p.eval(vector(op, args, 1)?)?))
        }
        "norm" => Ok(match r.operator(name(op, args, 0)?)? {
            Operator::Linear(a) => a.norm().value.to_string(),
            Operator::Bilinear(t) => bilin_norm(t, caps, exec)?.to_string(),
            Operator::Form(b) => form_norm(b, caps, exec)?.to_string(),
        }),
        "sym-norm" => Ok(match r.operator(name(op, args, 0)?)? {
            Operator::Linear(a) => a.symmetric_norm().value.to_string(),
            Operator::Bilinear(t) => format_rational(&sym_norm(t, caps, exec)?),
            Operator::Form(b) => format_rational(&b.sym_norm(caps, exec)?),
        }),
        "dual" => {
            let p = r.space(name(op, args, 0)?)?;
            let phi = vector(op, args, 1)?;
            asymlin::error::check_dim(p.dim(), phi.len())?;
            Ok(dual_norm_of(phi, p).to_string())
        }
        "adjoint" => match r.operator(name(op, args, 0)?)? {
            Operator::Linear(a) => {
                let adj = a.adjoint(caps)?.norm();
                if adj != a.norm().value {
                    return Err(OpError::Compute(format!("adjoint norm {adj} differs from {}", a.norm().value)));
                }
                Ok(adj.to_string())
            }
            Operator::Bilinear(t) => {
                let c = adjoint_norm_check(t, caps, exec)?;
                if !c.holds() {
                    return Err(OpError::Compute(format!("adjoint routes disagree: {} vs {}", c.direct, c.via_dual_vertices)));
                }
                Ok(c.via_dual_vertices.to_string())
            }
            Operator::Form(_) => Err(usage(op, "forms have no adjoint here")),
        },
        "precompact" => {
            let n = name(op, args, 0)?;
            if let Ok(poly) = r.polyhedron(n) {
                let q = r.space(name(op, args, 1)?)?;
                return Ok(match polyhedron_precompact(poly, q, &ctx.eps, caps, exec)? {
                    PrecompactVerdict::Precompact { .. } => "precompact".into(),
                    PrecompactVerdict::NotPrecompact(_) => "not-precompact".into(),
                });
            }
            match r.operator(n)? {
                Operator::Bilinear(t) => {
                    let c = precompact_class(t, &ctx.eps, caps, exec, ctx.seed)?;
                    Ok(format!("{} {}", class_word(&c.q), class_word(&c.qs)))
                }
                Operator::Linear(a) => Ok(match schauder_linear_check(a, &ctx.eps, caps, exec, ctx.seed)? {
                    LinearSchauderOutcome::Certified(_) => "certified".into(),
                    LinearSchauderOutcome::Refused(_) => "refuted".into(),
                }),
                Operator::Form(_) => Err(usage(op, "expected a bilinear or linear operator, or a polyhedron and a space")),
            }
        }
        "distance" => {
            let (Operator::Bilinear(a), Operator::Bilinear(b)) = (r.operator(name(op, args, 0)?)?, r.operator(name(op, args, 1)?)?)
            else {
                return Err(usage(op, "expected two bilinear operators"));
            };
            let d = operator_distance(a, b, caps, exec)?;
            Ok(format!("{} {}", d.forward, d.symmetric))
        }
        "net" => match r.operator(name(op, args, 0)?)? {
            Operator::Bilinear(t) => {
                let s = schauder_bilinear_net(t, &ctx.eps, caps, exec, ctx.seed)?;
                if !verify_schauder(t, &s, caps)? {
                    return Err(OpError::Compute("dual net failed re-verification".into()));
                }
                Ok(format!("verified {}", format_rational(&s.dual.measured_radius)))
            }
            Operator::Linear(a) => match schauder_linear_check(a, &ctx.eps, caps, exec, ctx.seed)? {
                LinearSchauderOutcome::Certified(s) => Ok(format!("verified {}", format_rational(&s.dual.measured_radius))),
                LinearSchauderOutcome::Refused(_) => Err(OpError::Compute("image is not q^s-precompact".into())),
            },
            Operator::Form(_) => Err(usage(op, "expected an operator")),
        },
        other => Err(usage(other, &format!("unknown operation (known: {})", OPERATIONS.join(", ")))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectiveStatus {
    Pass,
    Fail,
    Report,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectiveResult {
    pub index: usize,
    pub op: String,
    pub outcome: String,
    pub expected: Option<String>,
    pub status: DirectiveStatus,
}

/// Executes every directive of a resolved file.
pub fn run_directives(file: &InstanceFile, r: &Resolved, ctx: &Context) -> Vec<DirectiveResult> {
    file.directives
        .iter()
        .enumerate()
        .map(|(index, d): (usize, &Directive)| {
            let (outcome, status) = match run_op(r, &d.op, &d.args, ctx) {
                Ok(v) => {
                    let status = match &d.expect {
                        Expectation::Report => DirectiveStatus::Report,
                        Expectation::Value(e) if e == &v => DirectiveStatus::Pass,
                        Expectation::Value(_) => DirectiveStatus::Fail,
                    };
                    (v, status)
                }
                Err(e) => (e.to_string(), DirectiveStatus::Error),
            };
            let expected = match &d.expect {
                Expectation::Report => None,
                Expectation::Value(e) => Some(e.clone()),
            };
            DirectiveResult { index, op: d.op.clone(), outcome, expected, status }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::{parse_instance, resolve, U_SPACE};

    #[test]
    fn u_space_directives_pass() {
        let f = parse_instance(U_SPACE).unwrap();
        let r = resolve(&f, &Caps::default()).unwrap();
        let out = run_directives(&f, &r, &Context::default());
        assert!(out.iter().all(|d| d.status == DirectiveStatus::Pass), "{out:?}");
    }

    #[test]
    fn operations() {
        let text = "asymlin/1
space l 1 [1] [-1]
space u 1 [1] [0]
bilinear T l l u {[1]}
bilinear Z l l u {[0]}
polyhedron P 1 [1 1]
check dual u [2] => 2
check dual u [-1] => inf
check adjoint T => 1
check precompact T => certified certified
check precompact P u => precompact
check precompact P l => not-precompact
check distance Z T => 1 1
check net T => report
check norm Q => 0
";
        let f = parse_instance(text).unwrap();
        let r = resolve(&f, &Caps::default()).unwrap();
        let out = run_directives(&f, &r, &Context::default());
        for d in &out[..7] {
            assert_eq!(d.status, DirectiveStatus::Pass, "{d:?}");
        }
        assert_eq!(out[7].status, DirectiveStatus::Report);
        assert!(out[7].outcome.starts_with("verified"));
        assert_eq!(out[8].status, DirectiveStatus::Error);
    }
}
