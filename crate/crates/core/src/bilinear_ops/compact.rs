//! Precompact bilinear operators: classes, the Schauder dual net, bideal laws and closedness.

use num_traits::{One, Signed, Zero};

use super::{
    contract_target, form_sup, form_sup_lp, gauge_of, gauge_sup, operator_distance, BallData, BilinearForm,
    BilinearOp, PairKind,
};
use crate::asym_space::AsymNorm;
use crate::error::{check_dim, Error, Result};
use crate::exec::Exec;
use crate::linear_ops::{
    barycentric_resolution, build_dual_certificate, dual_ball, op_norm_between, sample_weights, DualNetCertificate,
    LinearOp,
};
use crate::polyhedral::{Caps, LpStatus};
use crate::precompact::{
    bilinear_image_net, certify_cover, find_witnesses, sample_polyhedron, CoverageFailure, CoverageReport,
    EpsNetCertificate, NetLocation, Polytope,
};
use crate::rational::{axpy, int, mat_vec, neg, scale, transpose, zeros, Extended, Matrix, Rational, Vector};

/// Which gauge on the target a certificate is measured in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gauge {
    /// `q`
    Asym,
    /// `q^s`
    Sym,
}

/// An ε-net of `T(B_p1 × B_p2)` with the preimages of its centers.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearNet {
    pub gauge: Gauge,
    /// `(x_k, y_k)` with `T(x_k, y_k) = certificate.net[k]`; empty for outside nets.
    pub preimages: Vec<(Vector, Vector)>,
    pub certificate: EpsNetCertificate,
}

impl BilinearNet {
    pub fn eps(&self) -> &Rational {
        &self.certificate.eps
    }

    pub fn centers(&self) -> &[Vector] {
        &self.certificate.net
    }

    /// Re-verifies every witness distance for `t`. Inside nets must also show
    /// each center as `T(x_k, y_k)` with `p1(x_k) ≤ 1` and `p2(y_k) ≤ 1`.
    pub fn verify(&self, t: &BilinearOp) -> std::result::Result<CoverageReport, CoverageFailure> {
        let d = gauge_of(t.target(), self.gauge);
        match self.certificate.location {
            NetLocation::Inside => {
                if self.preimages.len() != self.certificate.net.len() {
                    return Err(CoverageFailure::Malformed("one preimage per center required".into()));
                }
                let one = Rational::one();
                for (k, (x, y)) in self.preimages.iter().enumerate() {
                    let inside = x.len() == t.source1().dim()
                        && y.len() == t.source2().dim()
                        && t.source1().value(x) <= one
                        && t.source2().value(y) <= one;
                    if !inside || t.apply(x, y) != self.certificate.net[k] {
                        return Err(CoverageFailure::CenterOutside { center: k });
                    }
                }
                let net = &self.certificate.net;
                let member = |z: &[Rational]| net.iter().any(|c| c.as_slice() == z);
                self.certificate.verify(&d, NetLocation::Inside, Some(&member))
            }
            NetLocation::Outside => self.certificate.verify(&d, NetLocation::Outside, None),
        }
    }
}

/// A curve `t ↦ (x0 + t·dx, y0 + t·dy)` in `B_p1 × B_p2` whose image grows along
/// `direction` with positive gauge; `T` of the curve is `T(x0,y0) + t·a + t²·b`.
#[derive(Debug, Clone, PartialEq)]
pub struct EscapingPair {
    pub base: (Vector, Vector),
    pub dx: Vector,
    pub dy: Vector,
    pub kind: PairKind,
    pub direction: Vector,
    pub gauge_value: Rational,
}

impl EscapingPair {
    pub fn point(&self, t: &Rational) -> (Vector, Vector) {
        (axpy(&self.base.0, t, &self.dx), axpy(&self.base.1, t, &self.dy))
    }

    pub fn image(&self, op: &BilinearOp, t: &Rational) -> Vector {
        let (x, y) = self.point(t);
        op.apply(&x, &y)
    }

    /// Doubles `t` until `T(point(t))` is more than `eps` from every center.
    pub fn escape(&self, op: &BilinearOp, gauge: &AsymNorm, centers: &[Vector], eps: &Rational) -> Option<(Rational, Vector)> {
        let mut t = Rational::one();
        for _ in 0..256 {
            let z = self.image(op, &t);
            if centers.iter().all(|c| &gauge.value(&crate::rational::sub(&z, c)) > eps) {
                return Some((t, z));
            }
            t *= int(2);
        }
        None
    }

    /// `(t, gauge(T(point(t))))` for `t = 2^k`.
    pub fn growth(&self, op: &BilinearOp, gauge: &AsymNorm, count: usize) -> Vec<(Rational, Rational)> {
        (0..count)
            .map(|k| {
                let t = Rational::from_integer(num_bigint::BigInt::from(1u8) << k);
                let v = gauge.value(&self.image(op, &t));
                (t, v)
            })
            .collect()
    }
}

/// Cone generators of the convex relaxation `conv T(V1 × V2) + cone{...}` of the image.
fn growth_directions(t: &BilinearOp, b1: &BallData, b2: &BallData) -> Vec<EscapingPair> {
    let x0 = &b1.vertices[0];
    let y0 = &b2.vertices[0];
    let (d1, d2) = (x0.len(), y0.len());
    let mut out = Vec::new();
    let mut push = |base: (Vector, Vector), dx: Vector, dy: Vector, kind: PairKind, direction: Vector| {
        out.push(EscapingPair { base, dx, dy, kind, direction, gauge_value: Rational::zero() })
    };
    for r in &b1.rays {
        for w in &b2.vertices {
            push((x0.clone(), w.clone()), r.clone(), zeros(d2), PairKind::RayVertex, t.apply(r, w));
        }
    }
    for v in &b1.vertices {
        for rho in &b2.rays {
            push((v.clone(), y0.clone()), zeros(d1), rho.clone(), PairKind::VertexRay, t.apply(v, rho));
        }
    }
    for r in &b1.rays {
        for rho in &b2.rays {
            push((x0.clone(), y0.clone()), r.clone(), rho.clone(), PairKind::RayRay, t.apply(r, rho));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClassVerdict {
    Certified(Box<BilinearNet>),
    Refuted(EscapingPair),
    /// The relaxation certified but the sampled image could not be confirmed, or a cap was hit.
    Undetermined(String),
}

impl ClassVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, ClassVerdict::Certified(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, ClassVerdict::Refuted(_))
    }

    pub fn net(&self) -> Option<&BilinearNet> {
        match self {
            ClassVerdict::Certified(n) => Some(n),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrecompactClass {
    pub q: ClassVerdict,
    pub qs: ClassVerdict,
    /// `‖T|_{p1,p2;q}`.
    pub norm: Extended,
    /// `sup q^s(T(B_p1 × B_p2))`.
    pub sym_bound: Extended,
}

impl PrecompactClass {
    /// `q^s`-precompact ⇒ `q`-precompact ⇒ `‖T| < ∞`, and likewise for `q^s`.
    pub fn implications_hold(&self) -> bool {
        (!self.qs.is_certified() || self.q.is_certified())
            && (!self.q.is_certified() || self.norm.is_finite())
            && (!self.qs.is_certified() || self.sym_bound.is_finite())
    }
}

/// Points of `B_p1 × B_p2`: every vertex pair and `count` seeded pairs including ray parts.
pub(crate) fn probe_pairs(p1: &AsymNorm, p2: &AsymNorm, caps: &Caps, count: usize, seed: u64) -> Result<Vec<(Vector, Vector)>> {
    let ball1 = p1.unit_ball().enumerate(caps)?;
    let ball2 = p2.unit_ball().enumerate(caps)?;
    let v1 = &ball1.v_rep().expect("enumerated").vertices;
    let v2 = &ball2.v_rep().expect("enumerated").vertices;
    let mut out: Vec<(Vector, Vector)> = v1.iter().flat_map(|x| v2.iter().map(move |y| (x.clone(), y.clone()))).collect();
    let xs = sample_polyhedron(&ball1, count, 4, seed)?;
    let ys = sample_polyhedron(&ball2, count, 4, seed.wrapping_add(1))?;
    out.extend(xs.into_iter().zip(ys));
    Ok(out)
}

/// Preimage pairs and image points of a net, or why none was built.
type NetParts = std::result::Result<(Vec<(Vector, Vector)>, Vec<Vector>), String>;

const PROBE_COUNT: usize = 48;

/// Box pairs explored before a net is reported as over capacity.
pub const BILINEAR_MAX_LEAVES: usize = 40_000;

/// Decides `q`- and `q^s`-precompactness of `T(B_p1 × B_p2)`.
///
/// The image lies in `conv T(V1 × V2) + cone G` with `G` the images of
/// (ray, vertex), (vertex, ray) and (ray, ray) pairs, and contains a curve
/// growing along each element of `G`. So the image is precompact for a gauge
/// iff the gauge vanishes on `G`. Certificates come from a `q^s`-net of
/// `T(conv V1 × conv V2)`, checked on sampled image points.
pub fn precompact_class(t: &BilinearOp, eps: &Rational, caps: &Caps, exec: Exec, seed: u64) -> Result<PrecompactClass> {
    crate::asym_space::require_positive(eps)?;
    let (b1, b2) = t.balls(caps)?;
    let (d1, d2, _) = t.dims();
    let norm = gauge_sup(t.tensor(), t.target().generators(), &b1, &b2, d1, d2, exec).value;
    let qs = t.target().symmetrize();
    let sym_bound = gauge_sup(t.tensor(), qs.generators(), &b1, &b2, d1, d2, exec).value;
    let directions = growth_directions(t, &b1, &b2);

    let refute = |gauge: &AsymNorm| {
        directions.iter().find_map(|e| {
            let v = gauge.value(&e.direction);
            v.is_positive().then(|| EscapingPair { gauge_value: v, ..e.clone() })
        })
    };
    let ref_q = refute(t.target());
    let ref_qs = refute(&qs);

    let mut shared: Option<NetParts> = None;
    let mut build_net = || -> Result<NetParts> {
        if let Some(s) = &shared {
            return Ok(s.clone());
        }
        let q1 = Polytope::from_vertices(d1, b1.vertices.clone(), caps)?;
        let q2 = Polytope::from_vertices(d2, b2.vertices.clone(), caps)?;
        let s = match bilinear_image_net(t.tensor(), qs.generators(), &q1, &q2, eps, BILINEAR_MAX_LEAVES) {
            Ok(net) => Ok((net.preimages, net.images)),
            Err(Error::Capacity(m)) => Err(m),
            Err(e) => return Err(e),
        };
        shared = Some(s.clone());
        Ok(s)
    };
    let probes = probe_pairs(t.source1(), t.source2(), caps, PROBE_COUNT, seed)?;
    let points: Vec<Vector> = probes.iter().map(|(x, y)| t.apply(x, y)).collect();

    let mut verdict = |refuted: Option<EscapingPair>, gauge: Gauge| -> Result<ClassVerdict> {
        if let Some(e) = refuted {
            return Ok(ClassVerdict::Refuted(e));
        }
        let (preimages, images) = match build_net()? {
            Ok(v) => v,
            Err(m) => return Ok(ClassVerdict::Undetermined(m)),
        };
        let d = gauge_of(t.target(), gauge);
        match certify_cover(images, points.clone(), &d, eps, NetLocation::Inside, exec) {
            Ok(certificate) => Ok(ClassVerdict::Certified(Box::new(BilinearNet { gauge, preimages, certificate }))),
            Err(Error::Precondition(m)) => Ok(ClassVerdict::Undetermined(m)),
            Err(e) => Err(e),
        }
    };
    let q = verdict(ref_q, Gauge::Asym)?;
    let qs_verdict = verdict(ref_qs, Gauge::Sym)?;
    Ok(PrecompactClass { q, qs: qs_verdict, norm, sym_bound })
}

/// A Schauder dual net for `T^♭(B_{q^♭})` in the `‖·|_{p1,p2}` gauge.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearSchauder {
    pub eps: Rational,
    pub image: BilinearNet,
    pub dual: DualNetCertificate,
}

/// From a `q^s` ε-net `(x_k, y_k)` of the image, a barycentric net `ψ_i` of
/// `B_{q^♭}` with `(T^♭ψ − T^♭ψ_i)(x_k, y_k) < ε` for all `k`; every sampled
/// `‖T^♭ψ − T^♭ψ_i|` is then at most `3ε`.
pub fn schauder_bilinear_net(t: &BilinearOp, eps: &Rational, caps: &Caps, exec: Exec, seed: u64) -> Result<BilinearSchauder> {
    let class = precompact_class(t, eps, caps, exec, seed)?;
    let ClassVerdict::Certified(image) = class.qs else {
        return Err(Error::Precondition("operator is not certified q^s-precompact".into()));
    };
    let (b1, b2) = t.balls(caps)?;
    let (d1, d2, _) = t.dims();
    let vertices = dual_ball(t.target(), caps)?.v_rep().expect("enumerated").vertices.clone();
    let distance = |diff: &[Rational]| form_sup(&contract_target(t.tensor(), diff, d1, d2), &b1, &b2, Exec::Sequential).value;
    let weights = sample_weights(vertices.len(), 48, seed ^ 0x5eed);
    let dual = build_dual_certificate(vertices, image.centers(), eps, weights, &distance, exec);
    Ok(BilinearSchauder { eps: eps.clone(), image: *image, dual })
}

/// Independent re-verification: the image net from scratch, and every dual
/// sample recomputed with LP-based form norms.
pub fn verify_schauder(t: &BilinearOp, s: &BilinearSchauder, caps: &Caps) -> Result<bool> {
    let (_, b2) = t.balls(caps)?;
    let (d1, d2, _) = t.dims();
    let values: Vec<Vec<Rational>> = s
        .dual
        .net
        .vertices
        .iter()
        .map(|v| s.image.centers().iter().map(|z| crate::rational::dot(v, z)).collect())
        .collect();
    let (resolution, _) = barycentric_resolution(&values, &s.eps);
    let distance = |diff: &[Rational]| form_sup_lp(&contract_target(t.tensor(), diff, d1, d2), t.source1(), &b2);
    Ok(s.image.verify(t).is_ok()
        && resolution == s.dual.net.resolution
        && s.dual.holds()
        && s.dual.reverify(s.image.centers(), &distance))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeftComposition {
    pub op: BilinearOp,
    /// `‖R|_{q,q1}` for `q` nets, `‖R|_{q^s,q1}` for `q^s` nets.
    pub factor: Extended,
    pub certificate: Option<BilinearNet>,
}

/// `RT`, transporting a net of `T`: centers `R z_k`, radius `‖R|·ε`.
pub fn bideal_compose_left(r: &LinearOp, t: &BilinearOp, gauge: Gauge, net: Option<&BilinearNet>) -> Result<LeftComposition> {
    if r.source() != t.target() {
        return Err(Error::Input("R must act on the target space of T".into()));
    }
    let (d1, d2, _) = t.dims();
    let tensor: Vec<Matrix> = r.matrix().iter().map(|row| contract_target(t.tensor(), row, d1, d2)).collect();
    let op = BilinearOp::new(tensor, t.source1().clone(), t.source2().clone(), r.target().clone())?;
    let factor = match gauge {
        Gauge::Asym => r.norm().value,
        Gauge::Sym => op_norm_between(r.matrix(), &t.target().symmetrize(), r.target()).value,
    };
    let certificate = match (net, &factor) {
        (Some(n), _) if n.gauge != gauge => return Err(Error::Input("net gauge differs from the composition mode".into())),
        (Some(n), Extended::Finite(f)) => {
            let eps = if f.is_positive() { f * n.eps() } else { n.eps().clone() };
            let c = &n.certificate;
            Some(BilinearNet {
                gauge,
                preimages: n.preimages.clone(),
                certificate: EpsNetCertificate {
                    eps,
                    net: c.net.iter().map(|z| r.apply(z)).collect(),
                    covered: c.covered.iter().map(|z| r.apply(z)).collect(),
                    witness: c.witness.clone(),
                    location: c.location,
                },
            })
        }
        _ => None,
    };
    Ok(LeftComposition { op, factor, certificate })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RightComposition {
    pub op: BilinearOp,
    pub beta1: Extended,
    pub beta2: Extended,
    /// `max{β1, β2}` when both are finite.
    pub beta: Option<Rational>,
    /// `sup_{B_{p_i'}} ⟨a, S_i x'⟩ ≤ β` for every generator `a` of `p_i`, by LP.
    pub inclusion_verified: bool,
    pub certificate: Option<BilinearNet>,
}

fn lp_inclusion(s: &LinearOp, beta: &Rational) -> bool {
    let ball = s.source().unit_ball();
    let st = transpose(s.matrix(), s.source().dim());
    s.target().generators().iter().all(|a| {
        let out = ball.solve_lp(&mat_vec(&st, a)).expect("dimensions validated");
        out.status == LpStatus::Optimal && out.optimum.is_some_and(|v| &v <= beta)
    })
}

/// `T ∘ (S1, S2)`. With `β = max{‖S1|, ‖S2|}`, `S(B' × B') ⊆ βB × βB`, so the
/// image lies in `β²·T(B × B)`; a net of `T` scaled by `β²` is an outside net
/// of radius `β²ε`.
#[allow(clippy::too_many_arguments)]
pub fn bideal_compose_right(
    t: &BilinearOp,
    s1: &LinearOp,
    s2: &LinearOp,
    net: Option<&BilinearNet>,
    caps: &Caps,
    exec: Exec,
    seed: u64,
) -> Result<RightComposition> {
    if s1.target() != t.source1() || s2.target() != t.source2() {
        return Err(Error::Input("S1 and S2 must map into the source spaces of T".into()));
    }
    let (d1p, d2p) = (s1.source().dim(), s2.source().dim());
    let tensor: Vec<Matrix> = t
        .tensor()
        .iter()
        .map(|m| {
            (0..d1p)
                .map(|a| {
                    (0..d2p)
                        .map(|b| {
                            let mut acc = Rational::zero();
                            for (i, row) in m.iter().enumerate() {
                                for (j, v) in row.iter().enumerate() {
                                    acc += &s1.matrix()[i][a] * v * &s2.matrix()[j][b];
                                }
                            }
                            acc
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let op = BilinearOp::new(tensor, s1.source().clone(), s2.source().clone(), t.target().clone())?;
    let beta1 = s1.norm().value;
    let beta2 = s2.norm().value;
    let beta = match (&beta1, &beta2) {
        (Extended::Finite(a), Extended::Finite(b)) => Some(a.max(b).clone()),
        _ => None,
    };
    let inclusion_verified = beta.as_ref().is_some_and(|b| lp_inclusion(s1, b) && lp_inclusion(s2, b));
    let certificate = match (net, &beta) {
        (Some(n), Some(b)) => {
            let (factor, eps) = if b.is_positive() { (b * b, b * b * n.eps()) } else { (Rational::zero(), n.eps().clone()) };
            let centers: Vec<Vector> = n.centers().iter().map(|z| scale(&factor, z)).collect();
            let pairs = probe_pairs(op.source1(), op.source2(), caps, PROBE_COUNT, seed)?;
            let points: Vec<Vector> = pairs.iter().map(|(x, y)| op.apply(x, y)).collect();
            let d = gauge_of(op.target(), n.gauge);
            let certificate = certify_cover(centers, points, &d, &eps, NetLocation::Outside, exec)?;
            Some(BilinearNet { gauge: n.gauge, preimages: Vec::new(), certificate })
        }
        _ => None,
    };
    Ok(RightComposition { op, beta1, beta2, beta, inclusion_verified, certificate })
}

/// `(φ ⊗ z)(x, y) = φ(x, y)·z`.
pub fn rank_one_form_tensor(phi: &BilinearForm, z: &[Rational], target: AsymNorm) -> Result<BilinearOp> {
    check_dim(target.dim(), z.len())?;
    let tensor = z.iter().map(|zk| phi.matrix().iter().map(|row| row.iter().map(|a| a * zk).collect()).collect()).collect();
    BilinearOp::new(tensor, phi.source1().clone(), phi.source2().clone(), target)
}

/// `‖φ ⊗ z| = max{‖φ|·q(z), ‖−φ|·q(−z)}` with `0·∞ = 0`.
pub fn rank_one_norm(phi: &BilinearForm, z: &[Rational], q: &AsymNorm, caps: &Caps, exec: Exec) -> Result<Extended> {
    check_dim(q.dim(), z.len())?;
    let up = phi.norm(caps, exec)?.value;
    let down = phi.scaled(&-Rational::one()).norm(caps, exec)?.value;
    let a = up.mul(&Extended::Finite(q.value(z)));
    let b = down.mul(&Extended::Finite(q.value(&neg(z))));
    Ok(a.max(b))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosednessStep {
    pub eps: Rational,
    /// 1-based start of the tail with `d_s(T_n, T) ≤ ε`, within the first half of the prefix.
    pub n0: Option<usize>,
    /// A `3ε` net of `T` rebuilt from the ε-net of `T_{n0}`.
    pub certificate: Option<BilinearNet>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosednessVerdict {
    /// `d_s(T_n, T)` for each term.
    pub distances: Vec<Extended>,
    pub steps: Vec<ClosednessStep>,
}

impl ClosednessVerdict {
    pub fn uniformly_convergent(&self) -> bool {
        self.steps.iter().all(|s| s.n0.is_some())
    }

    /// Every step carries a certificate that re-verifies for `limit` at `3ε`.
    pub fn certified(&self, limit: &BilinearOp) -> bool {
        self.steps.iter().all(|s| {
            s.certificate
                .as_ref()
                .is_some_and(|c| c.eps() == &(int(3) * &s.eps) && c.gauge == Gauge::Sym && c.verify(limit).is_ok())
        })
    }
}

/// Uniform `q^s`-convergence `T_n → T` on `B_p1 × B_p2` and, for each scheduled
/// ε, a `3ε`-net of `T` built from the ε-net of `T_{n0}`:
/// `q^s(T(x,y) − T(x_k,y_k)) ≤ ε + ε + ε`.
pub fn closedness_limit_check(
    seq: &[BilinearOp],
    limit: &BilinearOp,
    eps_schedule: &[Rational],
    caps: &Caps,
    exec: Exec,
    seed: u64,
) -> Result<ClosednessVerdict> {
    if seq.is_empty() {
        return Err(Error::Input("closedness check needs a nonempty sequence".into()));
    }
    let distances: Vec<Extended> =
        seq.iter().map(|tn| operator_distance(tn, limit, caps, exec).map(|d| d.symmetric)).collect::<Result<_>>()?;
    let half = seq.len().div_ceil(2);
    let qs = limit.target().symmetrize();
    let pairs = probe_pairs(limit.source1(), limit.source2(), caps, PROBE_COUNT, seed)?;
    let mut steps = Vec::new();
    for eps in eps_schedule {
        crate::asym_space::require_positive(eps)?;
        let mut start = None;
        for n in (0..seq.len()).rev() {
            if distances[n].le_rational(eps) {
                start = Some(n + 1);
            } else {
                break;
            }
        }
        let n0 = start.filter(|&n| n <= half);
        let Some(n0) = n0 else {
            steps.push(ClosednessStep { eps: eps.clone(), n0: None, certificate: None });
            continue;
        };
        let tn = &seq[n0 - 1];
        let class = precompact_class(tn, eps, caps, exec, seed)?;
        let Some(net) = class.qs.net() else {
            return Err(Error::Input(format!("term {n0} carries no q^s-precompactness certificate")));
        };
        let near: Vec<Vector> = pairs.iter().map(|(x, y)| tn.apply(x, y)).collect();
        let witness = find_witnesses(net.centers(), &near, &qs, eps, exec)
            .map_err(|i| Error::Precondition(format!("probe {i} is not covered by the net of term {n0}")))?;
        let centers: Vec<Vector> = net.preimages.iter().map(|(x, y)| limit.apply(x, y)).collect();
        let covered: Vec<Vector> = pairs.iter().map(|(x, y)| limit.apply(x, y)).collect();
        let certificate = BilinearNet {
            gauge: Gauge::Sym,
            preimages: net.preimages.clone(),
            certificate: EpsNetCertificate { eps: int(3) * eps, net: centers, covered, witness, location: NetLocation::Inside },
        };
        steps.push(ClosednessStep { eps: eps.clone(), n0: Some(n0), certificate: Some(certificate) });
    }
    Ok(ClosednessVerdict { distances, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{ratio, vec_i};

    fn caps() -> Caps {
        Caps::default()
    }

    fn abs1() -> AsymNorm {
        AsymNorm::l_inf(1)
    }

    fn product(p1: AsymNorm, p2: AsymNorm, q: AsymNorm) -> BilinearOp {
        BilinearOp::new(vec![vec![vec_i(&[1])]], p1, p2, q).unwrap()
    }

    fn skew() -> AsymNorm {
        AsymNorm::new(1, vec![vec_i(&[2]), vec_i(&[-1])]).unwrap()
    }

    /// Sources `max(2x, −x)` and `|y|`, target `max(z1, z2, −z1 − z2)`.
    fn cube_op() -> BilinearOp {
        let q = AsymNorm::new(2, vec![vec_i(&[1, 0]), vec_i(&[0, 1]), vec_i(&[-1, -1])]).unwrap();
        BilinearOp::new(vec![vec![vec![ratio(3, 2)]], vec![vec![int(-1)]]], skew(), abs1(), q).unwrap()
    }

    #[test]
    fn classes() {
        let u = AsymNorm::u();
        let z = BilinearOp::zero(u.clone(), u.clone(), u.clone());
        let c = precompact_class(&z, &ratio(1, 2), &caps(), Exec::Sequential, 0).unwrap();
        assert!(c.q.is_certified() && c.qs.is_certified() && c.implications_hold());
        assert_eq!(c.qs.net().unwrap().centers(), &[vec_i(&[0])]);

        let t = product(abs1(), abs1(), u.clone());
        let c = precompact_class(&t, &ratio(1, 2), &caps(), Exec::default(), 0).unwrap();
        assert!(c.qs.is_certified() && c.implications_hold());
        assert!(c.qs.net().unwrap().verify(&t).is_ok());

        let t = product(u.clone(), u.clone(), u.clone());
        let c = precompact_class(&t, &ratio(1, 2), &caps(), Exec::default(), 0).unwrap();
        let ClassVerdict::Refuted(e) = &c.q else { panic!("expected refutation") };
        assert_eq!(e.kind, PairKind::RayRay);
        let (_, far) = e.escape(&t, &u, &[vec_i(&[0]), vec_i(&[5])], &int(1)).unwrap();
        assert!(u.value(&crate::rational::sub(&far, &vec_i(&[5]))) > int(1));
        let g = e.growth(&t, &u, 4);
        assert!(g.windows(2).all(|w| w[1].1 > w[0].1));
        assert!(c.implications_hold());
    }

    #[test]
    fn schauder_examples() {
        let u = AsymNorm::u();
        let z = BilinearOp::zero(abs1(), abs1(), u);
        let s = schauder_bilinear_net(&z, &ratio(1, 2), &caps(), Exec::default(), 1).unwrap();
        assert_eq!(s.dual.measured_radius, Rational::zero());
        assert!(verify_schauder(&z, &s, &caps()).unwrap());

        let t = cube_op();
        let s = schauder_bilinear_net(&t, &ratio(1, 4), &caps(), Exec::default(), 2).unwrap();
        assert!(verify_schauder(&t, &s, &caps()).unwrap());
        assert!(s.dual.measured_radius <= ratio(3, 4));

        let u = AsymNorm::u();
        let bad = product(u.clone(), u.clone(), u);
        assert!(matches!(schauder_bilinear_net(&bad, &ratio(1, 2), &caps(), Exec::default(), 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn left_compositions() {
        let t = cube_op();
        let class = precompact_class(&t, &ratio(1, 2), &caps(), Exec::default(), 3).unwrap();
        let net = class.qs.net().unwrap();
        let id = LinearOp::identity(t.target().clone());
        let c = bideal_compose_left(&id, &t, Gauge::Sym, Some(net)).unwrap();
        assert_eq!(c.op, t);
        assert_eq!(c.certificate.as_ref().unwrap().centers(), net.centers());

        let two = id.scaled(&int(2));
        let c = bideal_compose_left(&two, &t, Gauge::Sym, Some(net)).unwrap();
        let cert = c.certificate.unwrap();
        assert_eq!(cert.eps(), &(int(2) * net.eps()));
        assert!(cert.verify(&c.op).is_ok());

        let zero = id.scaled(&int(0));
        let c = bideal_compose_left(&zero, &t, Gauge::Sym, Some(net)).unwrap();
        assert!(c.certificate.unwrap().centers().iter().all(|z| z.iter().all(Zero::is_zero)));
    }

    #[test]
    fn right_compositions() {
        let t = cube_op();
        let class = precompact_class(&t, &ratio(1, 2), &caps(), Exec::default(), 4).unwrap();
        let net = class.qs.net().unwrap();
        let id1 = LinearOp::identity(skew());
        let id2 = LinearOp::identity(abs1());
        let r = bideal_compose_right(&t, &id1, &id2, Some(net), &caps(), Exec::default(), 5).unwrap();
        assert_eq!(r.op, t);
        assert_eq!(r.beta, Some(int(1)));
        assert!(r.inclusion_verified && r.certificate.unwrap().verify(&t).is_ok());

        let r = bideal_compose_right(&t, &id1.scaled(&ratio(1, 2)), &id2.scaled(&int(3)), Some(net), &caps(), Exec::default(), 6).unwrap();
        assert_eq!(r.beta, Some(int(3)));
        assert!(r.inclusion_verified);
        let cert = r.certificate.unwrap();
        assert_eq!(cert.eps(), &(int(9) * net.eps()));
        assert!(cert.verify(&r.op).is_ok());

        let u = AsymNorm::u();
        let tu = product(u.clone(), abs1(), u.clone());
        let negation = LinearOp::new(vec![vec_i(&[-1])], u.clone(), u).unwrap();
        let r = bideal_compose_right(&tu, &negation, &LinearOp::identity(abs1()), None, &caps(), Exec::default(), 0).unwrap();
        assert_eq!(r.beta1, Extended::Infinite);
        assert!(r.beta.is_none() && !r.inclusion_verified && r.certificate.is_none());
    }

    #[test]
    fn rank_one() {
        let l = AsymNorm::l_inf(2);
        let e = BilinearForm::new(vec![vec_i(&[1, 0]), vec_i(&[0, 0])], l.clone(), l.clone()).unwrap();
        let t = rank_one_form_tensor(&e, &vec_i(&[1, 0]), l.clone()).unwrap();
        assert_eq!(crate::bilinear_ops::bilin_norm(&t, &caps(), Exec::Sequential).unwrap(), Extended::Finite(int(1)));
        assert_eq!(rank_one_norm(&e, &vec_i(&[1, 0]), &l, &caps(), Exec::Sequential).unwrap(), Extended::Finite(int(1)));

        // Along z = −1 in (Q, u) only the negative part of φ is seen.
        let u = AsymNorm::u();
        let phi = BilinearForm::new(vec![vec_i(&[2])], abs1(), abs1()).unwrap();
        let t = rank_one_form_tensor(&phi, &vec_i(&[-1]), u.clone()).unwrap();
        assert_eq!(rank_one_norm(&phi, &vec_i(&[-1]), &u, &caps(), Exec::Sequential).unwrap(), Extended::Finite(int(2)));
        assert_eq!(crate::bilinear_ops::bilin_norm(&t, &caps(), Exec::Sequential).unwrap(), Extended::Finite(int(2)));
        let c = precompact_class(&t, &ratio(1, 2), &caps(), Exec::default(), 0).unwrap();
        assert!(c.q.is_certified() && c.qs.is_certified());
        assert!(c.q.net().unwrap().verify(&t).is_ok());

        // αβ on (Q, u)² is unbounded in both directions, so no z direction rescues it.
        let phi = BilinearForm::new(vec![vec_i(&[1])], u.clone(), u.clone()).unwrap();
        assert_eq!(rank_one_norm(&phi, &vec_i(&[-1]), &u, &caps(), Exec::Sequential).unwrap(), Extended::Infinite);
        let t = rank_one_form_tensor(&phi, &vec_i(&[-1]), u.clone()).unwrap();
        assert!(precompact_class(&t, &ratio(1, 2), &caps(), Exec::default(), 0).unwrap().q.is_refuted());

        let zero = rank_one_form_tensor(&BilinearForm::zero(l.clone(), l.clone()), &vec_i(&[1, 1]), l.clone()).unwrap();
        assert_eq!(zero, BilinearOp::zero(l.clone(), l.clone(), l));
    }

    #[test]
    fn closedness() {
        let t0 = cube_op();
        let eps = [ratio(1, 2), ratio(1, 4)];
        let constant = vec![t0.clone(); 4];
        let v = closedness_limit_check(&constant, &t0, &eps, &caps(), Exec::default(), 7).unwrap();
        assert!(v.uniformly_convergent() && v.certified(&t0));
        assert_eq!(v.steps[0].n0, Some(1));

        let shrinking: Vec<BilinearOp> = (1..=24).map(|n| t0.scaled(&(int(1) - ratio(1, n)))).collect();
        let v = closedness_limit_check(&shrinking, &t0, &eps, &caps(), Exec::default(), 8).unwrap();
        assert!(v.uniformly_convergent() && v.certified(&t0));

        let growing: Vec<BilinearOp> = (1..=12).map(|n| t0.scaled(&int(n))).collect();
        let v = closedness_limit_check(&growing, &t0, &eps, &caps(), Exec::default(), 9).unwrap();
        assert!(!v.uniformly_convergent());
        assert!(v.steps.iter().all(|s| s.certificate.is_none()));
    }
}
