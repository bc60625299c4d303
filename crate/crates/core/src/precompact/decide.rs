use num_traits::{One, Signed, Zero};

use super::cover::{cover_polytope, Polytope};
use super::net::{certify_cover, EpsNetCertificate, NetLocation};
use crate::asym_space::{require_positive, AsymNorm};
use crate::error::{check_dim, Error, Result};
use crate::exec::Exec;
use crate::polyhedral::{Caps, Halfspace, LpStatus, Polyhedron};
use crate::rational::{add, axpy, int, neg, scale, sub, unit, Extended, Rational, Vector};

/// Upper limit on grid points emitted for a certificate.
pub const MAX_NET_POINTS: usize = 200_000;

/// `sup{p(x) : x ∈ P}`, one LP per generator; `∞` iff some LP is unbounded.
pub fn is_bounded(region: &Polyhedron, p: &AsymNorm) -> Result<Extended> {
    check_dim(region.dim(), p.dim())?;
    let mut best: Option<Rational> = None;
    for g in p.generators() {
        let out = region.solve_lp(g)?;
        match out.status {
            LpStatus::Infeasible => return Err(Error::Domain("is_bounded requires a nonempty set".into())),
            LpStatus::Unbounded => return Ok(Extended::Infinite),
            LpStatus::Optimal => {
                let v = out.optimum.expect("optimal outcome carries its value");
                if best.as_ref().is_none_or(|b| &v > b) {
                    best = Some(v);
                }
            }
        }
    }
    Ok(Extended::Finite(best.expect("norms have generators")))
}

/// `sup{p^s(h) : ‖h‖∞ ≤ 1}`, by LP over the cube.
pub fn linf_comparison_constant(p: &AsymNorm) -> Rational {
    let n = p.dim();
    let mut h = Vec::with_capacity(2 * n);
    for i in 0..n {
        let e = unit(n, i);
        h.push(Halfspace::new(neg(&e), Rational::one()));
        h.push(Halfspace::new(e, Rational::one()));
    }
    let cube = Polyhedron::from_h_rep(n, h).expect("dimensions consistent");
    p.symmetrize()
        .generators()
        .iter()
        .map(|g| cube.solve_lp(g).expect("dimensions consistent").optimum.expect("cube is bounded"))
        .max()
        .expect("norms have generators")
}

/// A ray of `P` along which `q` grows, so points of `P` escape every finite family of balls.
#[derive(Debug, Clone, PartialEq)]
pub struct EscapingRay {
    pub base: Vector,
    pub ray: Vector,
    pub q_value: Rational,
}

impl EscapingRay {
    pub fn point(&self, t: &Rational) -> Vector {
        axpy(&self.base, t, &self.ray)
    }

    /// A point of `P` at `q`-distance more than `eps` from every center:
    /// `q(x − z) ≥ t·q(r) − q(z − base)`.
    pub fn escape(&self, q: &AsymNorm, centers: &[Vector], eps: &Rational) -> (Rational, Vector) {
        let reach = centers.iter().map(|z| q.value(&sub(z, &self.base))).max().unwrap_or_else(Rational::zero);
        let t = ((eps + reach) / &self.q_value).floor() + Rational::one();
        let x = self.point(&t);
        (t, x)
    }

    /// Points `base + 2^k·ray` for `k < count`, with `q`-values; the lower bound
    /// `q(x) ≥ t·q(r) − q(−base)` is checked for each.
    pub fn growth(&self, q: &AsymNorm, count: usize) -> Vec<(Rational, Rational)> {
        let qbar_base = q.value(&neg(&self.base));
        (0..count)
            .map(|k| {
                let t = Rational::from_integer(num_bigint::BigInt::from(1u8) << k);
                let v = q.value(&self.point(&t));
                debug_assert!(v >= &t * &self.q_value - &qbar_base);
                (t, v)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolytopeNet {
    pub eps: Rational,
    pub delta: Rational,
    pub comparison: Rational,
    pub centers: Vec<Vector>,
    pub bounded_part: Polytope,
}

impl PolytopeNet {
    /// Covers points of `P` (bounded part plus rays) by the grid centers.
    pub fn certify(&self, points: Vec<Vector>, q: &AsymNorm, exec: Exec) -> Result<EpsNetCertificate> {
        certify_cover(self.centers.clone(), points, q, &self.eps, NetLocation::Inside, exec)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PrecompactVerdict {
    Precompact { net: PolytopeNet, certificate: EpsNetCertificate },
    NotPrecompact(EscapingRay),
}

impl PrecompactVerdict {
    pub fn is_precompact(&self) -> bool {
        matches!(self, PrecompactVerdict::Precompact { .. })
    }
}

/// The decision rule alone: the first V-rep ray with `q(r) > 0`, if any.
pub fn escaping_ray(region: &Polyhedron, q: &AsymNorm) -> Result<Option<EscapingRay>> {
    check_dim(region.dim(), q.dim())?;
    let v = region.v_rep().ok_or_else(|| Error::Input("precompactness decision needs a V-representation".into()))?;
    let Some(base) = v.vertices.first() else {
        return Err(Error::Domain("empty polyhedron".into()));
    };
    for r in &v.rays {
        let qr = q.value(r);
        if qr.is_positive() {
            return Ok(Some(EscapingRay { base: base.clone(), ray: r.clone(), q_value: qr }));
        }
    }
    Ok(None)
}

/// Decides `q`-precompactness of `P = conv V + cone R` and builds the witness.
///
/// Precompact iff `q` vanishes on every ray. The certificate covers the
/// bounded part with an ℓ∞ grid of width `δ = ε/(2L)`, `L = sup{q^s(h) : ‖h‖∞ ≤ 1}`;
/// rays are absorbed since `q(b + ρ − z) ≤ q(b − z) + q(ρ) = q(b − z)`.
pub fn polyhedron_precompact(
    region: &Polyhedron,
    q: &AsymNorm,
    eps: &Rational,
    caps: &Caps,
    exec: Exec,
) -> Result<PrecompactVerdict> {
    require_positive(eps)?;
    if let Some(esc) = escaping_ray(region, q)? {
        return Ok(PrecompactVerdict::NotPrecompact(esc));
    }
    let v = region.v_rep().expect("checked by escaping_ray");
    let bounded_part = Polytope::from_vertices(region.dim(), v.vertices.clone(), caps)?;
    let comparison = linf_comparison_constant(q);
    let delta = eps / (int(2) * &comparison);
    let centers = cover_polytope(&bounded_part, &delta, MAX_NET_POINTS)?;
    let net = PolytopeNet { eps: eps.clone(), delta, comparison, centers, bounded_part };
    let mut probe = v.vertices.clone();
    for b in &v.vertices {
        for r in &v.rays {
            probe.push(add(b, r));
            probe.push(axpy(b, &int(1000), r));
        }
    }
    let certificate = net.certify(probe, q, exec)?;
    Ok(PrecompactVerdict::Precompact { net, certificate })
}

/// Seeded points of `P`: random convex combinations of vertices plus nonnegative ray combinations.
pub fn sample_polyhedron(region: &Polyhedron, count: usize, ray_scale: i64, seed: u64) -> Result<Vec<Vector>> {
    use rand::{Rng, SeedableRng};
    let v = region.v_rep().ok_or_else(|| Error::Input("sampling needs a V-representation".into()))?;
    if v.vertices.is_empty() {
        return Err(Error::Domain("empty polyhedron".into()));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let w: Vec<i64> = v.vertices.iter().map(|_| rng.gen_range(0..=12)).collect();
        let total: i64 = w.iter().sum::<i64>().max(1);
        let mut x = vec![Rational::zero(); region.dim()];
        if w.iter().all(|&a| a == 0) {
            x = v.vertices[0].clone();
        } else {
            for (vert, &a) in v.vertices.iter().zip(&w) {
                x = axpy(&x, &Rational::new(a.into(), total.into()), vert);
            }
        }
        for r in &v.rays {
            let t = Rational::new(rng.gen_range(0..=ray_scale * 8).into(), 8.into());
            x = add(&x, &scale(&t, r));
        }
        out.push(x);
    }
    Ok(out)
}
