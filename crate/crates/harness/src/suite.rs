//! Named invariant suites over seeded corpora, with structured reports.

use std::collections::BTreeMap;
use std::time::Instant;

use asymlin::bilinear_ops::{
    adjoint_norm_check, alaoglu_desk_check, arens_norm_check, bideal_compose_left, bideal_compose_right, bilin_norm,
    closedness_limit_check, contract_target, form_norm, form_sup_lp, operator_distance, precompact_class,
    rank_one_form_tensor, rank_one_norm, rescaling_equivalence_check, schauder_bilinear_net, sym_norm, verify_schauder,
    BallData, BilinearForm, BilinearOp, ClassVerdict, Gauge,
};
use asymlin::linear_ops::{LinearOp, NormWitness};
use asymlin::precompact::{escaping_ray, is_bounded, linf_comparison_constant, polyhedron_precompact, sample_polyhedron, NetLocation, PrecompactVerdict};
use asymlin::rational::{add, dot, format_rational, format_vector, int, neg, ratio, scale, sub, Extended, Matrix, Rational, Vector};
use asymlin::{AsymNorm, Caps, Exec};
use num_traits::{Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::format::{resolve, InstanceFile, Operator, OperatorDef, OperatorKind, PolyhedronDef, Resolved, SpaceDef};
use crate::generate::{random_matrix, random_norm, random_polyhedron, random_vector, rng, NormKind};

pub const SUITES: &[&str] = &[
    "axioms",
    "conjugation",
    "linear-norms",
    "sup-equivalence",
    "rescaling",
    "bilinear-norms",
    "adjoint-norm-equality",
    "schauder-bilinear",
    "bideal",
    "closedness",
    "alaoglu",
    "precompact-decision",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    pub caps: Caps,
    /// Radii used by net-building suites; the first one also drives the polyhedral decision.
    pub eps: Vec<Rational>,
    /// Sampled triples per space in the axiom suites.
    pub samples: usize,
    pub exec: Exec,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: 0, caps: Caps::default(), eps: vec![ratio(1, 2), ratio(1, 4)], samples: 1000, exec: Exec::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Refused,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub tag: String,
    pub instance: String,
    pub status: CheckStatus,
    pub witness: Option<String>,
    pub values: BTreeMap<String, String>,
}

impl CheckRecord {
    fn new(tag: &str, instance: &str) -> Self {
        CheckRecord { tag: tag.into(), instance: instance.into(), status: CheckStatus::Pass, witness: None, values: BTreeMap::new() }
    }

    fn value(mut self, key: &str, v: impl ToString) -> Self {
        self.values.insert(key.into(), v.to_string());
        self
    }

    fn fail(mut self, witness: impl Into<String>) -> Self {
        self.status = CheckStatus::Fail;
        self.witness = Some(witness.into());
        self
    }

    fn refuse(mut self, witness: impl Into<String>) -> Self {
        self.status = CheckStatus::Refused;
        self.witness = Some(witness.into());
        self
    }

    fn require(self, ok: bool, witness: impl FnOnce() -> String) -> Self {
        if ok || self.status == CheckStatus::Fail {
            self
        } else {
            self.fail(witness())
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub refused: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
    pub wall_ms: u128,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    /// Human-readable rendering: one line per non-passing record plus the counts.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in self.records.iter().filter(|r| r.status != CheckStatus::Pass) {
            let status = if r.status == CheckStatus::Fail { "FAIL" } else { "REFUSED" };
            out.push_str(&format!("{status} {} {}: {}\n", r.instance, r.tag, r.witness.as_deref().unwrap_or("")));
        }
        let s = &self.summary;
        out.push_str(&format!(
            "suite {} seed {}: {} checks, {} pass, {} fail, {} refused ({} ms)\n",
            self.suite, self.seed, s.total, s.pass, s.fail, s.refused, self.wall_ms
        ));
        out
    }

    /// The machine format; `wall_ms` is the only run-dependent field.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub id: String,
    pub file: InstanceFile,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownSuite(pub String);

impl std::fmt::Display for UnknownSuite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "unknown suite `{}` (known: {})", self.0, SUITES.join(", "))
    }
}

impl std::error::Error for UnknownSuite {}

fn known(suite: &str) -> Result<(), UnknownSuite> {
    if SUITES.contains(&suite) {
        Ok(())
    } else {
        Err(UnknownSuite(suite.into()))
    }
}

/// Per-instance seed, so a single instance replays without its corpus.
fn instance_seed(seed: u64, id: &str) -> u64 {
    id.bytes().fold(seed ^ 0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

/// Runs `suite` over `corpus`; records are ordered by instance id.
pub fn run_suite(suite: &str, corpus: &[CorpusEntry], opts: &SuiteOptions) -> Result<SuiteReport, UnknownSuite> {
    known(suite)?;
    let start = Instant::now();
    let mut per_instance = opts.exec.map_slice(corpus, |e| (e.id.clone(), check_instance(suite, e, opts).expect("suite known")));
    per_instance.sort_by(|a, b| a.0.cmp(&b.0));
    let records: Vec<CheckRecord> = per_instance.into_iter().flat_map(|(_, r)| r).collect();
    let mut summary = Summary { total: records.len(), ..Summary::default() };
    for r in &records {
        match r.status {
            CheckStatus::Pass => summary.pass += 1,
            CheckStatus::Fail => summary.fail += 1,
            CheckStatus::Refused => summary.refused += 1,
        }
    }
    Ok(SuiteReport { suite: suite.into(), seed: opts.seed, records, summary, wall_ms: start.elapsed().as_millis() })
}

/// The single-check entry point: every record of `suite` for one instance.
pub fn check_instance(suite: &str, entry: &CorpusEntry, opts: &SuiteOptions) -> Result<Vec<CheckRecord>, UnknownSuite> {
    known(suite)?;
    let id = entry.id.as_str();
    let r = match resolve(&entry.file, &opts.caps) {
        Ok(r) => r,
        Err(e) => return Ok(vec![CheckRecord::new("resolve", id).fail(e.to_string())]),
    };
    let ctx = Ctx { id, r: &r, opts, seed: instance_seed(opts.seed, id) };
    let out = match suite {
        "axioms" => ctx.axioms(),
        "conjugation" => ctx.conjugation(),
        "linear-norms" => ctx.linear_norms(),
        "sup-equivalence" => ctx.sup_equivalence(),
        "rescaling" => ctx.rescaling(),
        "bilinear-norms" => ctx.bilinear_norms(),
        "adjoint-norm-equality" => ctx.adjoint_equality(),
        "schauder-bilinear" => ctx.schauder(),
        "bideal" => ctx.bideal(),
        "closedness" => ctx.closedness(),
        "alaoglu" => ctx.alaoglu(),
        "precompact-decision" => ctx.precompact_decision(),
        _ => unreachable!("checked by known"),
    };
    Ok(out.unwrap_or_else(|e| vec![CheckRecord::new(suite, id).fail(e)]))
}

type Checked = Result<Vec<CheckRecord>, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn ext(v: &Extended) -> String {
    v.to_string()
}

struct Ctx<'a> {
    id: &'a str,
    r: &'a Resolved,
    opts: &'a SuiteOptions,
    seed: u64,
}

impl Ctx<'_> {
    fn caps(&self) -> &Caps {
        &self.opts.caps
    }

    fn exec(&self) -> Exec {
        self.opts.exec
    }

    fn record(&self, tag: &str) -> CheckRecord {
        CheckRecord::new(tag, self.id)
    }

    fn linear(&self, name: &str) -> Result<&LinearOp, String> {
        match self.r.operator(name).map_err(err)? {
            Operator::Linear(a) => Ok(a),
            _ => Err(format!("`{name}` is not a linear operator")),
        }
    }

    fn bilinear(&self, name: &str) -> Result<&BilinearOp, String> {
        match self.r.operator(name).map_err(err)? {
            Operator::Bilinear(t) => Ok(t),
            _ => Err(format!("`{name}` is not a bilinear operator")),
        }
    }

    fn form(&self, name: &str) -> Result<&BilinearForm, String> {
        match self.r.operator(name).map_err(err)? {
            Operator::Form(b) => Ok(b),
            _ => Err(format!("`{name}` is not a bilinear form")),
        }
    }

    fn triples(&self, dim: usize, salt: u64) -> Vec<(Vector, Vector, Vector, Rational)> {
        let mut g = rng(self.seed ^ salt);
        (0..self.opts.samples)
            .map(|_| {
                let t = ratio(g.gen_range(0..=12), g.gen_range(1..=4));
                (random_vector(&mut g, dim, 6, 4), random_vector(&mut g, dim, 6, 4), random_vector(&mut g, dim, 6, 4), t)
            })
            .collect()
    }

    fn axioms(&self) -> Checked {
        let mut out = Vec::new();
        for (i, (name, p)) in self.r.spaces.iter().enumerate() {
            let samples = self.triples(p.dim(), i as u64);
            let tag = |t: &str| self.record(&format!("{name}:{t}")).value("samples", samples.len());
            let zero = Rational::from_integer(0.into());
            let find = |f: &dyn Fn(&Vector, &Vector, &Vector, &Rational) -> bool| {
                samples
                    .iter()
                    .find(|(x, y, z, t)| !f(x, y, z, t))
                    .map(|(x, y, z, t)| format!("x={} y={} z={} t={}", format_vector(x), format_vector(y), format_vector(z), format_rational(t)))
            };
            let mut push = |t: &str, w: Option<String>| {
                out.push(match w {
                    Some(w) => tag(t).fail(w),
                    None => tag(t),
                })
            };
            push("nonnegative", find(&|x, _, _, _| p.value(x) >= zero));
            let definite = p.zero_set_trivial();
            let sampled = find(&|x, _, _, _| !(p.value(x).is_zero() && p.value(&neg(x)).is_zero()) || x.iter().all(|c| c.is_zero()));
            push("definite", if definite { sampled } else { Some("p and its conjugate share a nonzero zero".into()) });
            push("homogeneous", find(&|x, _, _, t| p.value(&scale(t, x)) == t * p.value(x)));
            push("subadditive", find(&|x, y, _, _| p.value(&add(x, y)) <= p.value(x) + p.value(y)));
            let d = |a: &Vector, b: &Vector| p.quasi_metric(a, b).expect("dimensions agree");
            push("qm-zero", find(&|x, _, _, _| d(x, x).is_zero()));
            push("qm-separation", find(&|x, y, _, _| !(d(x, y).is_zero() && d(y, x).is_zero()) || x == y));
            push("qm-triangle", find(&|x, y, z, _| d(x, z) <= d(x, y) + d(y, z)));
        }
        Ok(out)
    }

    fn conjugation(&self) -> Checked {
        let mut out = Vec::new();
        for (i, (name, p)) in self.r.spaces.iter().enumerate() {
            let samples = self.triples(p.dim(), i as u64);
            let (pbar, ps) = (p.conjugate(), p.symmetrize());
            let back = pbar.conjugate();
            let tag = |t: &str| self.record(&format!("{name}:{t}")).value("samples", samples.len());
            let d = |q: &AsymNorm, a: &Vector, b: &Vector| q.quasi_metric(a, b).expect("dimensions agree");
            let show = |x: &Vector, y: &Vector| format!("x={} y={}", format_vector(x), format_vector(y));
            let first = |f: &dyn Fn(&Vector, &Vector) -> bool| samples.iter().find(|(x, y, _, _)| !f(x, y)).map(|(x, y, _, _)| show(x, y));
            let mut push = |t: &str, w: Option<String>| out.push(w.map_or_else(|| tag(t), |w| tag(t).fail(w)));
            push("conjugate-distance", first(&|x, y| d(&pbar, x, y) == d(p, y, x)));
            push("symmetrized-distance", first(&|x, y| d(&ps, x, y) == d(p, x, y).max(d(&pbar, x, y))));
            let same_gens = {
                let mut a = back.generators().to_vec();
                let mut b = p.generators().to_vec();
                a.sort();
                b.sort();
                a == b
            };
            let involution = if same_gens { first(&|x, _| back.value(x) == p.value(x)) } else { Some("generator sets differ".into()) };
            push("involution", involution);
        }
        Ok(out)
    }

    fn linear_norms(&self) -> Checked {
        let a = self.linear("A")?;
        let (p, q) = (a.source(), a.target());
        let n = a.norm();
        let base = |t: &str| self.record(t).value("norm", ext(&n.value));
        let conj = a.conjugate_norm().value;
        let adj = a.adjoint(self.caps()).map_err(err)?.norm();
        let sym = a.symmetric_norm().value;
        let mut out = vec![
            base("conjugate-norm").value("conjugate", ext(&conj)).require(conj == n.value, || format!("{} vs {}", ext(&conj), ext(&n.value))),
            base("adjoint-norm").value("adjoint", ext(&adj)).require(adj == n.value, || format!("{} vs {}", ext(&adj), ext(&n.value))),
            base("symmetric-bound").value("symmetric", ext(&sym)).require(sym <= n.value, || ext(&sym)),
        ];
        let one = int(1);
        let mut rec = base("smallest-constant");
        match &n.witness {
            NormWitness::Attained { point, .. } => {
                let v = q.value(&a.apply(point));
                let attained = p.value(point) <= one && Extended::Finite(v.clone()) == n.value;
                rec = rec.require(attained, || format!("point {} gives {}", format_vector(point), format_rational(&v)));
                let beta = n.value.finite().expect("attained norms are finite");
                let mut g = rng(self.seed);
                for _ in 0..64 {
                    let x = random_vector(&mut g, p.dim(), 6, 4);
                    rec = rec.require(a.semi_lipschitz_at(beta, &x), || format!("bound fails at {}", format_vector(&x)));
                }
            }
            NormWitness::Unbounded { ray, .. } => {
                let grows = p.value(ray).is_zero() && q.value(&a.apply(ray)).is_positive();
                rec = rec.require(grows, || format!("ray {} does not escape", format_vector(ray)));
            }
        }
        out.push(rec);
        Ok(out)
    }

    fn sup_equivalence(&self) -> Checked {
        let a = self.linear("A")?;
        let lhs = a.sup_over_conjugate_ball().value;
        let rhs = a.sup_of_conjugate_target().value;
        Ok(vec![self
            .record("sup-equivalence")
            .value("conjugate_ball", ext(&lhs))
            .value("conjugate_target", ext(&rhs))
            .require(lhs == rhs, || format!("{} vs {}", ext(&lhs), ext(&rhs)))])
    }

    fn rescaling(&self) -> Checked {
        let t = self.bilinear("T")?;
        let norm = bilin_norm(t, self.caps(), self.exec()).map_err(err)?;
        let mut out = Vec::new();
        for r in [ratio(1, 2), int(1), int(3)] {
            let r2 = &r * &r;
            let betas = match norm.finite() {
                Some(n) if n.is_positive() => vec![n * &r2 / int(2), n * &r2, int(0)],
                Some(_) => vec![int(0), int(1)],
                None => vec![int(1)],
            };
            for beta in betas {
                let v = rescaling_equivalence_check(t, &beta, &r, self.caps(), self.exec()).map_err(err)?;
                out.push(
                    self.record("rescaling")
                        .value("r", format_rational(&r))
                        .value("beta", format_rational(&beta))
                        .value("condition_i", v.condition_i)
                        .value("condition_ii", v.condition_ii)
                        .value("zero_branch", v.exercises_zero_branch())
                        .require(v.agree(), || format!("conditions disagree: norm {}, scaled sup {}", ext(&v.norm), ext(&v.scaled_sup))),
                );
            }
        }
        Ok(out)
    }

    fn bilinear_norms(&self) -> Checked {
        let t = self.bilinear("T")?;
        let (caps, exec) = (self.caps(), self.exec());
        let norm = bilin_norm(t, caps, exec).map_err(err)?;
        let sym = sym_norm(t, caps, exec).map_err(err)?;
        let gap = !norm.is_finite();
        let base = |tag: &str| self.record(tag).value("norm", ext(&norm)).value("sym_norm", format_rational(&sym)).value("strict_gap", gap);
        let (_, b2) = t.balls(caps).map_err(err)?;
        let (d1, d2, _) = t.dims();
        let lp = t
            .target()
            .generators()
            .iter()
            .map(|g| form_sup_lp(&contract_target(t.tensor(), g, d1, d2), t.source1(), &b2))
            .max()
            .unwrap_or_else(Extended::zero);
        let adj = adjoint_norm_check(t, caps, exec).map_err(err)?;
        let arens = arens_norm_check(t, caps, exec).map_err(err)?;
        Ok(vec![
            base("sym-below-norm").require(Extended::Finite(sym.clone()) <= norm, || "symmetric norm exceeds norm".into()),
            base("norm-routes").value("lp", ext(&lp)).require(lp == norm, || format!("vertex route {} vs LP route {}", ext(&norm), ext(&lp))),
            base("adjoint-norm")
                .value("adjoint", ext(&adj.via_dual_vertices))
                .require(adj.holds(), || format!("{} vs {}", ext(&adj.direct), ext(&adj.via_dual_vertices))),
            base("arens-norm")
                .value("arens", format_rational(&arens.arens_norm))
                .require(arens.holds(), || format!("{} vs {}", format_rational(&arens.sym_norm), format_rational(&arens.arens_norm))),
        ])
    }

    fn adjoint_equality(&self) -> Checked {
        let a = self.linear("A")?;
        let t = self.bilinear("T")?;
        let n = a.norm().value;
        let adj = a.adjoint(self.caps()).map_err(err)?.norm();
        let c = adjoint_norm_check(t, self.caps(), self.exec()).map_err(err)?;
        Ok(vec![
            self.record("linear-adjoint")
                .value("norm", ext(&n))
                .value("adjoint", ext(&adj))
                .require(adj == n, || format!("{} vs {}", ext(&adj), ext(&n))),
            self.record("bilinear-adjoint")
                .value("norm", ext(&c.direct))
                .value("adjoint", ext(&c.via_dual_vertices))
                .require(c.holds(), || format!("{} vs {}", ext(&c.direct), ext(&c.via_dual_vertices))),
        ])
    }

    fn schauder(&self) -> Checked {
        let t = self.bilinear("T")?;
        let mut out = Vec::new();
        for eps in &self.opts.eps {
            let rec = self.record("schauder-net").value("eps", format_rational(eps));
            let s = match schauder_bilinear_net(t, eps, self.caps(), self.exec(), self.seed) {
                Ok(s) => s,
                Err(asymlin::Error::Precondition(m)) => {
                    out.push(rec.refuse(m));
                    continue;
                }
                Err(e) => return Err(err(e)),
            };
            let verified = verify_schauder(t, &s, self.caps()).map_err(err)?;
            let bound = int(3) * eps;
            let radius = s.dual.measured_radius.clone();
            out.push(
                rec.value("image_net", s.image.centers().len())
                    .value("dual_samples", s.dual.samples.len())
                    .value("radius", format_rational(&radius))
                    .require(verified && radius <= bound, || format!("radius {} against bound {}", format_rational(&radius), format_rational(&bound))),
            );
        }
        Ok(out)
    }

    fn bideal(&self) -> Checked {
        let t = self.bilinear("T")?;
        let (caps, exec) = (self.caps(), self.exec());
        let eps = self.opts.eps.first().cloned().unwrap_or_else(|| ratio(1, 2));
        let class = precompact_class(t, &eps, caps, exec, self.seed).map_err(err)?;
        let mut out = Vec::new();
        let r = self.linear("R")?;
        let (s1, s2) = (self.linear("S1")?, self.linear("S2")?);
        for (gauge, verdict, label) in [(Gauge::Asym, &class.q, "asym"), (Gauge::Sym, &class.qs, "sym")] {
            let Some(net) = verdict.net() else {
                out.push(self.record(&format!("left-{label}")).refuse(describe(verdict)));
                out.push(self.record(&format!("right-{label}")).refuse(describe(verdict)));
                continue;
            };
            let left = bideal_compose_left(r, t, gauge, Some(net)).map_err(err)?;
            let rec = self.record(&format!("left-{label}")).value("factor", ext(&left.factor));
            out.push(match &left.certificate {
                Some(c) => match c.verify(&left.op) {
                    Ok(rep) => rec.value("eps", format_rational(c.eps())).value("radius", format_rational(&rep.radius)),
                    Err(f) => rec.fail(format!("{f:?}")),
                },
                None => rec.fail("no certificate transported"),
            });
            let right = bideal_compose_right(t, s1, s2, Some(net), caps, exec, self.seed).map_err(err)?;
            let beta = right.beta.as_ref().map_or("inf".to_string(), format_rational);
            let rec = self.record(&format!("right-{label}")).value("beta", beta).value("inclusion", right.inclusion_verified);
            let rec = rec.require(right.inclusion_verified, || "LP inclusion failed".into());
            out.push(match &right.certificate {
                Some(c) => match c.verify(&right.op) {
                    Ok(rep) => rec.value("eps", format_rational(c.eps())).value("radius", format_rational(&rep.radius)),
                    Err(f) => rec.fail(format!("{f:?}")),
                },
                None => rec.fail("no certificate transported"),
            });
        }
        let phi = self.form("phi")?;
        let z = self.linear("Z")?.apply(&[int(1)]);
        let rank_one = rank_one_form_tensor(phi, &z, t.target().clone()).map_err(err)?;
        let by_formula = rank_one_norm(phi, &z, t.target(), caps, exec).map_err(err)?;
        let direct = bilin_norm(&rank_one, caps, exec).map_err(err)?;
        let c = precompact_class(&rank_one, &eps, caps, exec, self.seed).map_err(err)?;
        let nets_verify = [&c.q, &c.qs].iter().all(|v| v.net().is_some_and(|n| n.verify(&rank_one).is_ok()));
        out.push(
            self.record("rank-one")
                .value("norm", ext(&direct))
                .value("formula", ext(&by_formula))
                .require(direct == by_formula, || format!("{} vs {}", ext(&direct), ext(&by_formula)))
                .require(nets_verify, || format!("q {}, q^s {}", describe(&c.q), describe(&c.qs))),
        );
        Ok(out)
    }

    fn closedness(&self) -> Checked {
        let t = self.bilinear("T")?;
        let e = self.bilinear("E")?;
        let (caps, exec) = (self.caps(), self.exec());
        let seq: Vec<BilinearOp> =
            (1..=CLOSEDNESS_TERMS).map(|n| t.add(&e.scaled(&ratio(1, n as i64)))).collect::<asymlin::Result<_>>().map_err(err)?;
        let v = closedness_limit_check(&seq, t, &self.opts.eps, caps, exec, self.seed).map_err(err)?;
        let mut g = rng(self.seed);
        let pointwise = (0..16).all(|_| {
            let (x, y) = (random_vector(&mut g, t.dims().0, 4, 2), random_vector(&mut g, t.dims().1, 4, 2));
            let gap = sub(&seq[CLOSEDNESS_TERMS - 1].apply(&x, &y), &t.apply(&x, &y));
            gap == scale(&ratio(1, CLOSEDNESS_TERMS as i64), &e.apply(&x, &y))
        });
        let last = v.distances.last().map(ext).unwrap_or_default();
        let rec = self.record("closedness").value("last_distance", last).value("pointwise", pointwise);
        if !v.uniformly_convergent() {
            let missing: Vec<String> = v.steps.iter().filter(|s| s.n0.is_none()).map(|s| format_rational(&s.eps)).collect();
            return Ok(vec![rec.refuse(format!("no uniform tail at eps {}", missing.join(", ")))]);
        }
        let starts: Vec<String> = v.steps.iter().map(|s| s.n0.map_or("-".into(), |n| n.to_string())).collect();
        Ok(vec![rec.value("tails", starts.join(" ")).require(v.certified(t), || "limit certificate failed re-verification".into())])
    }

    fn alaoglu(&self) -> Checked {
        let forms: Vec<&BilinearForm> = (0..ALAOGLU_TERMS).map(|i| self.form(&format!("s{i:02}"))).collect::<Result<_, _>>()?;
        let (p1, p2) = (forms[0].source1(), forms[0].source2());
        let mats: Vec<Matrix> = forms.iter().map(|f| f.matrix().clone()).collect();
        let (b1, b2) = (BallData::of(p1, self.caps()).map_err(err)?, BallData::of(p2, self.caps()).map_err(err)?);
        let mut probes: Vec<(Vector, Vector)> = b1.vertices.iter().flat_map(|x| b2.vertices.iter().map(move |y| (x.clone(), y.clone()))).collect();
        let mut g = rng(self.seed);
        probes.extend((0..32).map(|_| (random_vector(&mut g, p1.dim(), 4, 3), random_vector(&mut g, p2.dim(), 4, 3))));
        let o = alaoglu_desk_check(p1, p2, &mats, &probes, self.caps(), self.exec()).map_err(err)?;
        Ok(vec![self
            .record("alaoglu")
            .value("subsequence", o.indices.len())
            .value("levels", o.levels)
            .value("limit_norm", ext(&o.limit_norm))
            .value("route", format!("{:?}", o.limit_route))
            .value("probes", probes.len())
            .require(o.holds(), || {
                format!("violations {:?}, limit norm {}, bilinear {}", o.bound_violations, ext(&o.limit_norm), o.limit_bilinear)
            })])
    }

    fn precompact_decision(&self) -> Checked {
        let poly = self.r.polyhedron("P").map_err(err)?;
        let q = self.r.space("q").map_err(err)?;
        let eps = self.opts.eps.first().cloned().unwrap_or_else(|| ratio(1, 2));
        let (caps, exec) = (self.caps(), self.exec());
        let bound = is_bounded(poly, q).map_err(err)?;
        let rule = escaping_ray(poly, q).map_err(err)?;
        let mut eps = eps;
        if let Some(v) = poly.v_rep() {
            let l = linf_comparison_constant(q);
            let extent: Vec<Rational> = (0..poly.dim())
                .map(|i| {
                    let xs = v.vertices.iter().map(|x| &x[i]);
                    xs.clone().max().zip(xs.min()).map_or_else(Rational::zero, |(hi, lo)| hi - lo)
                })
                .collect();
            let cells = |eps: &Rational| -> Rational {
                let delta = eps / (int(2) * &l);
                extent.iter().map(|e| (e / &delta).floor() + int(1)).product()
            };
            while cells(&eps) > int(GRID_BUDGET) {
                eps = int(2) * eps;
            }
        }
        let mut verdict = polyhedron_precompact(poly, q, &eps, caps, exec);
        // Grid certificates grow like (1/ε)^dim, so the radius is coarsened to a grid budget;
        // any radius certifies the same verdict.
        for _ in 0..MAX_EPS_DOUBLINGS {
            if !matches!(verdict, Err(asymlin::Error::Capacity(_))) {
                break;
            }
            eps = int(2) * eps;
            verdict = polyhedron_precompact(poly, q, &eps, caps, exec);
        }
        let rec = self.record("decision").value("sup", ext(&bound)).value("eps", format_rational(&eps));
        match verdict.map_err(err)? {
            PrecompactVerdict::Precompact { net, .. } => {
                let rec = rec.value("verdict", "precompact").value("net", net.centers.len());
                let rec = rec.require(rule.is_none(), || "decision disagrees with the escaping-ray rule".into());
                let points = sample_polyhedron(poly, 1000, 50, self.seed).map_err(err)?;
                let rec = match net.certify(points, q, exec) {
                    Ok(c) => {
                        let member = |x: &[Rational]| poly.contains(x);
                        match c.verify(q, NetLocation::Inside, Some(&member)) {
                            Ok(rep) => rec.value("radius", format_rational(&rep.radius)),
                            Err(f) => rec.fail(format!("certificate fails: {f:?}")),
                        }
                    }
                    Err(e) => rec.fail(format!("sample not covered: {e}")),
                };
                Ok(vec![rec.require(bound.is_finite(), || "precompact but unbounded".into())])
            }
            PrecompactVerdict::NotPrecompact(ray) => {
                let rec = rec.value("verdict", "not-precompact").value("ray", format_vector(&ray.ray));
                let rec = rec.require(rule.is_some(), || "decision disagrees with the escaping-ray rule".into());
                let growth = ray.growth(q, 10);
                let qbar_base = q.value(&neg(&ray.base));
                let sample: Vec<Vector> = growth.iter().map(|(t, _)| ray.point(t)).collect();
                let grows = growth.iter().all(|(t, v)| v >= &(t * &ray.q_value - &qbar_base)) && sample.iter().all(|x| poly.contains(x));
                let (_, x) = ray.escape(q, &sample, &eps);
                let escapes = poly.contains(&x) && sample.iter().all(|z| q.value(&sub(&x, z)) > eps);
                let rec = rec
                    .require(grows, || "sampled ray points do not grow".into())
                    .require(escapes, || format!("{} does not escape the sampled centers", format_vector(&x)))
                    .require(!bound.is_finite(), || "escaping ray inside a bounded set".into());
                Ok(vec![rec])
            }
        }
    }
}

fn describe(v: &ClassVerdict) -> String {
    match v {
        ClassVerdict::Certified(_) => "certified".into(),
        ClassVerdict::Refuted(p) => format!("refuted along {}", format_vector(&p.direction)),
        ClassVerdict::Undetermined(m) => format!("undetermined: {m}"),
    }
}

const MAX_EPS_DOUBLINGS: usize = 4;
const GRID_BUDGET: i64 = 4_000;

pub const CLOSEDNESS_TERMS: usize = 32;
pub const ALAOGLU_TERMS: usize = 64;

fn space(name: &str, p: &AsymNorm) -> SpaceDef {
    SpaceDef { name: name.into(), dim: p.dim(), generators: p.generators().to_vec() }
}

fn bilinear_def(name: &str, s1: &str, s2: &str, target: &str, tensor: Vec<Matrix>) -> OperatorDef {
    OperatorDef { name: name.into(), kind: OperatorKind::Bilinear { source1: s1.into(), source2: s2.into(), target: target.into(), tensor } }
}

fn linear_def(name: &str, source: &str, target: &str, matrix: Matrix) -> OperatorDef {
    OperatorDef { name: name.into(), kind: OperatorKind::Linear { source: source.into(), target: target.into(), matrix } }
}

fn form_def(name: &str, s1: &str, s2: &str, matrix: Matrix) -> OperatorDef {
    OperatorDef { name: name.into(), kind: OperatorKind::Form { source1: s1.into(), source2: s2.into(), matrix } }
}

fn any_kind(g: &mut impl Rng) -> NormKind {
    [NormKind::Symmetric, NormKind::Bounded, NormKind::Unbounded][g.gen_range(0..3)]
}

fn bounded_kind(g: &mut impl Rng) -> NormKind {
    if g.gen_bool(0.5) {
        NormKind::Symmetric
    } else {
        NormKind::Bounded
    }
}

fn tensor(g: &mut impl Rng, d1: usize, d2: usize, dz: usize) -> Vec<Matrix> {
    (0..dz).map(|_| random_matrix(g, d1, d2, 3, 2)).collect()
}

fn entry(id: String, spaces: Vec<SpaceDef>, operators: Vec<OperatorDef>, polyhedra: Vec<PolyhedronDef>) -> CorpusEntry {
    CorpusEntry { id, file: InstanceFile { spaces, operators, polyhedra, directives: Vec::new() } }
}

/// `P·M` with `P` the orthogonal projection killing every recession ray of `p`,
/// so `x ↦ xᵀ(PM)y` vanishes along those rays.
fn annihilate_rays(p: &AsymNorm, m: &Matrix, caps: &Caps) -> Matrix {
    let rays = BallData::of(p, caps).expect("generated norms enumerate").rays;
    let d = p.dim();
    let projector: Matrix = match rays.first() {
        None => (0..d).map(|i| (0..d).map(|j| int(i64::from(i == j))).collect()).collect(),
        Some(r) => {
            let parallel = rays.iter().all(|s| (0..d).all(|i| (0..d).all(|j| &s[i] * &r[j] == &s[j] * &r[i])));
            if !parallel || d == 1 {
                vec![vec![int(0); d]; d]
            } else {
                let rr = dot(r, r);
                (0..d).map(|i| (0..d).map(|j| int(i64::from(i == j)) - &r[i] * &r[j] / &rr).collect()).collect()
            }
        }
    };
    projector.iter().map(|row| (0..m[0].len()).map(|b| row.iter().zip(m).map(|(pi, mr)| pi * &mr[b]).sum()).collect()).collect()
}

/// The default corpus of `suite` for `seed`.
pub fn default_corpus(suite: &str, seed: u64) -> Result<Vec<CorpusEntry>, UnknownSuite> {
    known(suite)?;
    let mut g = rng(seed ^ instance_seed(0, suite));
    let caps = Caps::default();
    let corpus = match suite {
        "axioms" | "conjugation" => (0..200)
            .map(|i| {
                let dim = g.gen_range(1..=4);
                let kind = any_kind(&mut g);
                let p = random_norm(&mut g, dim, kind, 8, 4);
                entry(format!("space-{i:03}"), vec![space("p", &p)], vec![], vec![])
            })
            .collect(),
        "linear-norms" | "sup-equivalence" => (0..100)
            .map(|i| {
                let (n, m) = (g.gen_range(1..=3), g.gen_range(1..=3));
                let (kp, kq) = (any_kind(&mut g), any_kind(&mut g));
                let p = random_norm(&mut g, n, kp, 8, 3);
                let q = random_norm(&mut g, m, kq, 8, 3);
                let a = random_matrix(&mut g, m, n, 3, 2);
                entry(format!("linear-{i:03}"), vec![space("p", &p), space("q", &q)], vec![linear_def("A", "p", "q", a)], vec![])
            })
            .collect(),
        "rescaling" => (0..50)
            .map(|i| {
                let degenerate = i % 2 == 0;
                let d1 = if degenerate { 2 } else { g.gen_range(1..=2) };
                let (d2, dz) = (g.gen_range(1..=2), g.gen_range(1..=2));
                let k1 = if degenerate { NormKind::Unbounded } else { any_kind(&mut g) };
                let k2 = if degenerate { bounded_kind(&mut g) } else { any_kind(&mut g) };
                let kq = any_kind(&mut g);
                let p1 = random_norm(&mut g, d1, k1, 6, 3);
                let p2 = random_norm(&mut g, d2, k2, 6, 3);
                let q = random_norm(&mut g, dz, kq, 6, 3);
                let mut t = tensor(&mut g, d1, d2, dz);
                if degenerate {
                    t = t.iter().map(|m| annihilate_rays(&p1, m, &caps)).collect();
                }
                entry(
                    format!("rescaling-{i:02}"),
                    vec![space("p1", &p1), space("p2", &p2), space("q", &q)],
                    vec![bilinear_def("T", "p1", "p2", "q", t)],
                    vec![],
                )
            })
            .collect(),
        "bilinear-norms" => (0..60)
            .map(|i| {
                let (d1, d2, dz) = (g.gen_range(1..=2), g.gen_range(1..=2), g.gen_range(1..=2));
                let kinds: Vec<NormKind> = (0..3).map(|_| any_kind(&mut g)).collect();
                let p1 = random_norm(&mut g, d1, kinds[0], 6, 3);
                let p2 = random_norm(&mut g, d2, kinds[1], 6, 3);
                let q = random_norm(&mut g, dz, kinds[2], 6, 3);
                let t = tensor(&mut g, d1, d2, dz);
                entry(
                    format!("bilinear-{i:02}"),
                    vec![space("p1", &p1), space("p2", &p2), space("q", &q)],
                    vec![bilinear_def("T", "p1", "p2", "q", t)],
                    vec![],
                )
            })
            .collect(),
        "adjoint-norm-equality" => {
            let opts = crate::generate::GenOptions::default();
            crate::generate::generate_instances(seed, crate::generate::Profile::Mixed, 40, &opts)
                .into_iter()
                .enumerate()
                .map(|(i, file)| CorpusEntry { id: format!("mixed-{i:02}"), file })
                .collect()
        }
        "schauder-bilinear" => (0..20)
            .map(|i| {
                let dz = g.gen_range(1..=2);
                let (k1, k2, kq) = (bounded_kind(&mut g), bounded_kind(&mut g), any_kind(&mut g));
                let p1 = random_norm(&mut g, 1, k1, 4, 3);
                let p2 = random_norm(&mut g, 1, k2, 4, 3);
                let q = random_norm(&mut g, dz, kq, 6, 3);
                let t = tensor(&mut g, 1, 1, dz);
                entry(
                    format!("schauder-{i:02}"),
                    vec![space("p1", &p1), space("p2", &p2), space("q", &q)],
                    vec![bilinear_def("T", "p1", "p2", "q", t)],
                    vec![],
                )
            })
            .collect(),
        "bideal" => (0..12)
            .map(|i| {
                let (dz, dz1) = (g.gen_range(1..=2), g.gen_range(1..=2));
                let kinds: Vec<NormKind> = (0..6).map(|_| bounded_kind(&mut g)).collect();
                let p1 = random_norm(&mut g, 1, kinds[0], 4, 3);
                let p2 = random_norm(&mut g, 1, kinds[1], 4, 3);
                let q = random_norm(&mut g, dz, kinds[2], 6, 3);
                let q1 = random_norm(&mut g, dz1, kinds[3], 6, 3);
                let r1 = random_norm(&mut g, 1, kinds[4], 4, 3);
                let r2 = random_norm(&mut g, 1, kinds[5], 4, 3);
                let operators = vec![
                    bilinear_def("T", "p1", "p2", "q", tensor(&mut g, 1, 1, dz)),
                    linear_def("R", "q", "q1", random_matrix(&mut g, dz1, dz, 3, 2)),
                    linear_def("S1", "r1", "p1", random_matrix(&mut g, 1, 1, 3, 2)),
                    linear_def("S2", "r2", "p2", random_matrix(&mut g, 1, 1, 3, 2)),
                    form_def("phi", "p1", "p2", random_matrix(&mut g, 1, 1, 3, 2)),
                    linear_def("Z", "one", "q", random_matrix(&mut g, dz, 1, 3, 2)),
                ];
                let spaces = vec![
                    space("p1", &p1),
                    space("p2", &p2),
                    space("q", &q),
                    space("q1", &q1),
                    space("r1", &r1),
                    space("r2", &r2),
                    space("one", &AsymNorm::l_inf(1)),
                ];
                entry(format!("bideal-{i:02}"), spaces, operators, vec![])
            })
            .collect(),
        "closedness" => (0..15)
            .map(|i| {
                let uniform = i < 10;
                let dz = g.gen_range(1..=2);
                let k1 = if uniform { bounded_kind(&mut g) } else { NormKind::Unbounded };
                let k2 = bounded_kind(&mut g);
                let kq = any_kind(&mut g);
                let p1 = random_norm(&mut g, 1, k1, 4, 3);
                let p2 = random_norm(&mut g, 1, k2, 4, 3);
                let q = random_norm(&mut g, dz, kq, 6, 3);
                let t = tensor(&mut g, 1, 1, dz);
                let mut e = tensor(&mut g, 1, 1, dz);
                if e.iter().all(|m| m[0][0].is_zero()) {
                    e[0][0][0] = int(1);
                }
                if uniform {
                    let op = BilinearOp::new(e.clone(), p1.clone(), p2.clone(), q.clone()).expect("generated shapes agree");
                    let zero = BilinearOp::zero(p1.clone(), p2.clone(), q.clone());
                    let s = operator_distance(&zero, &op, &caps, Exec::Sequential).expect("generated operators").symmetric;
                    if let Extended::Finite(s) = s {
                        if s > int(1) {
                            e = e.iter().map(|m| vec![scale(&(int(1) / &s), &m[0])]).collect();
                        }
                    }
                }
                let id = if uniform { format!("uniform-{i:02}") } else { format!("pointwise-{:02}", i - 10) };
                entry(
                    id,
                    vec![space("p1", &p1), space("p2", &p2), space("q", &q)],
                    vec![bilinear_def("T", "p1", "p2", "q", t), bilinear_def("E", "p1", "p2", "q", e)],
                    vec![],
                )
            })
            .collect(),
        "alaoglu" => (0..20)
            .map(|i| {
                let (d1, d2) = (g.gen_range(1..=2), g.gen_range(1..=2));
                let (k1, k2) = (bounded_kind(&mut g), bounded_kind(&mut g));
                let p1 = random_norm(&mut g, d1, k1, 6, 3);
                let p2 = random_norm(&mut g, d2, k2, 6, 3);
                let basis: Vec<Matrix> = (0..4).map(|_| random_matrix(&mut g, d1, d2, 3, 1)).collect();
                let operators = (0..ALAOGLU_TERMS)
                    .map(|n| {
                        let mut m = vec![vec![int(0); d2]; d1];
                        for b in &basis {
                            let c = ratio(g.gen_range(-4..=4), 4);
                            for (row, brow) in m.iter_mut().zip(b) {
                                *row = add(row, &scale(&c, brow));
                            }
                        }
                        let f = BilinearForm::new(m.clone(), p1.clone(), p2.clone()).expect("generated shapes agree");
                        if let Extended::Finite(v) = form_norm(&f, &caps, Exec::Sequential).expect("bounded balls") {
                            let shrink = ratio(g.gen_range(2..=4), 4);
                            if v.is_positive() {
                                m = m.iter().map(|row| scale(&(&shrink / &v), row)).collect();
                            }
                        }
                        form_def(&format!("s{n:02}"), "p1", "p2", m)
                    })
                    .collect();
                entry(format!("alaoglu-{i:02}"), vec![space("p1", &p1), space("p2", &p2)], operators, vec![])
            })
            .collect(),
        "precompact-decision" => (0..100)
            .map(|i| {
                let dim = g.gen_range(1..=3);
                let bounded = g.gen_bool(0.4);
                let poly = random_polyhedron(&mut g, "P", dim, bounded);
                let kind = any_kind(&mut g);
                let q = random_norm(&mut g, dim, kind, 6, 3);
                entry(format!("polyhedron-{i:03}"), vec![space("q", &q)], vec![], vec![poly])
            })
            .collect(),
        _ => unreachable!("checked by known"),
    };
    Ok(corpus)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_a_usage_error() {
        let e = run_suite("nonexistent", &[], &SuiteOptions::default()).unwrap_err();
        assert!(e.to_string().contains("adjoint-norm-equality"));
        assert!(default_corpus("nonexistent", 0).is_err());
    }

    #[test]
    fn adjoint_suite_passes_and_is_deterministic() {
        let corpus = default_corpus("adjoint-norm-equality", 0).unwrap();
        let opts = SuiteOptions::default();
        let a = run_suite("adjoint-norm-equality", &corpus, &opts).unwrap();
        assert!(a.passed(), "{}", a.to_text());
        assert_eq!(a.summary.total, 80);
        let mut b = run_suite("adjoint-norm-equality", &corpus, &SuiteOptions { exec: Exec::Sequential, ..opts }).unwrap();
        b.wall_ms = a.wall_ms;
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn failures_replay_standalone() {
        let mut corpus = default_corpus("linear-norms", 0).unwrap();
        corpus.truncate(3);
        let opts = SuiteOptions::default();
        let report = run_suite("linear-norms", &corpus, &opts).unwrap();
        assert!(report.passed());
        for e in &corpus {
            let again = check_instance("linear-norms", e, &opts).unwrap();
            let from_report: Vec<_> = report.records.iter().filter(|r| r.instance == e.id).cloned().collect();
            assert_eq!(again, from_report);
        }
    }

    #[test]
    fn mixed_corpus_passes_invariant_suites() {
        let files = crate::generate::generate_instances(0, crate::generate::Profile::Mixed, 100, &Default::default());
        let corpus: Vec<CorpusEntry> =
            files.into_iter().enumerate().map(|(i, file)| CorpusEntry { id: format!("mixed-{i:03}"), file }).collect();
        let opts = SuiteOptions { samples: 100, ..SuiteOptions::default() };
        for suite in ["axioms", "conjugation", "linear-norms", "sup-equivalence", "bilinear-norms", "adjoint-norm-equality"] {
            let report = run_suite(suite, &corpus, &opts).unwrap();
            assert!(report.passed(), "{}", report.to_text());
        }
    }

    #[test]
    fn annihilated_tensors_vanish_on_rays() {
        let caps = Caps::default();
        let mut g = rng(5);
        for _ in 0..10 {
            let p = random_norm(&mut g, 2, NormKind::Unbounded, 6, 3);
            let m = random_matrix(&mut g, 2, 2, 3, 2);
            let pm = annihilate_rays(&p, &m, &caps);
            for r in BallData::of(&p, &caps).unwrap().rays {
                for b in 0..2 {
                    assert!(r.iter().zip(&pm).map(|(ri, row)| ri * &row[b]).sum::<Rational>().is_zero());
                }
            }
        }
    }
}
