//! Schauder-type dual nets: from an ε-net of an image, a 3ε-net of the adjoint image.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};

use super::{dual_ball, DualGauge, LinearOp};
use crate::error::Result;
use crate::exec::Exec;
use crate::polyhedral::{Caps, Polyhedron, VRep};
use crate::precompact::{
    bilinear_image_net, certify_cover, escaping_ray, sample_polyhedron, EpsNetCertificate, EscapingRay, ImageNet,
    NetLocation, Polytope,
};
use crate::rational::{dot, int, is_zero_vec, mat_vec, sub, Extended, Rational, Vector};

const MAX_IMAGE_LEAVES: usize = 400_000;

/// The grid `{Σ (n_l/N) ψ^(l) : n_l ≥ 0, Σ n_l = N}` over the dual-ball vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct BarycentricNet {
    pub vertices: Vec<Vector>,
    pub resolution: usize,
}

impl BarycentricNet {
    /// Number of grid points, `C(N + m − 1, m − 1)`.
    pub fn size(&self) -> BigUint {
        let m = self.vertices.len();
        let n = self.resolution;
        let mut c = BigUint::one();
        for i in 1..m {
            c = c * BigUint::from(n + i) / BigUint::from(i);
        }
        c
    }

    /// Largest-remainder rounding of barycentric weights to counts summing to `N`.
    pub fn round(&self, weights: &[Rational]) -> Vec<usize> {
        let n = int(self.resolution as i64);
        let scaled: Vec<Rational> = weights.iter().map(|w| w * &n).collect();
        let mut counts: Vec<usize> =
            scaled.iter().map(|s| usize::try_from(s.floor().to_integer()).unwrap_or(0)).collect();
        let used: usize = counts.iter().sum();
        let mut order: Vec<usize> = (0..weights.len()).collect();
        order.sort_by(|&a, &b| {
            let ra = &scaled[a] - scaled[a].floor();
            let rb = &scaled[b] - scaled[b].floor();
            rb.cmp(&ra).then(a.cmp(&b))
        });
        for &l in order.iter().take(self.resolution.saturating_sub(used)) {
            counts[l] += 1;
        }
        counts
    }

    pub fn point(&self, counts: &[usize]) -> Vector {
        let dim = self.vertices[0].len();
        let n = int(self.resolution as i64);
        let mut p = vec![Rational::zero(); dim];
        for (v, &c) in self.vertices.iter().zip(counts) {
            if c > 0 {
                let w = int(c as i64) / &n;
                p = crate::rational::axpy(&p, &w, v);
            }
        }
        p
    }
}

/// Smallest power of two `N` with `m·K/N < eps`, where `K` is the largest
/// half-range of the vertex values `values[l][k] = ψ^(l)(z_k)` over `l`.
pub(crate) fn barycentric_resolution(values: &[Vec<Rational>], eps: &Rational) -> (usize, Rational) {
    let m = values.len();
    let n_net = values.first().map_or(0, Vec::len);
    let mut spread = Rational::zero();
    for k in 0..n_net {
        let hi = values.iter().map(|v| &v[k]).max().expect("nonempty");
        let lo = values.iter().map(|v| &v[k]).min().expect("nonempty");
        let h = (hi - lo) / int(2);
        if h > spread {
            spread = h;
        }
    }
    let mut n: usize = 1;
    while int(m as i64) * &spread / int(n as i64) >= *eps {
        n *= 2;
    }
    (n, spread)
}

/// The unit weight vectors followed by `random` seeded convex weights.
pub(crate) fn sample_weights(m: usize, random: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = (0..m).map(|l| crate::rational::unit(m, l)).collect();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random {
        let mut w: Vec<i64> = (0..m).map(|_| rng.gen_range(0..=9)).collect();
        if w.iter().all(|&a| a == 0) {
            w[0] = 1;
        }
        let total: i64 = w.iter().sum();
        out.push(w.iter().map(|&a| Rational::new(a.into(), total.into())).collect());
    }
    out
}

/// One sampled `ψ = Σ λ_l ψ^(l)` and its assigned net point.
#[derive(Debug, Clone, PartialEq)]
pub struct DualSample {
    pub weights: Vec<Rational>,
    pub psi: Vector,
    pub counts: Vec<usize>,
    /// `max_k |(ψ − ψ_i)(z_k)|`; must be below `eps`.
    pub gap: Rational,
    /// Gauge of the adjoint difference; must be at most `3·eps`.
    pub distance: Extended,
}

/// A barycentric net of the dual ball whose adjoint images form a `3ε`-net.
#[derive(Debug, Clone, PartialEq)]
pub struct DualNetCertificate {
    pub eps: Rational,
    pub bound: Rational,
    pub net: BarycentricNet,
    pub spread: Rational,
    pub samples: Vec<DualSample>,
    pub measured_radius: Rational,
}

impl DualNetCertificate {
    pub fn holds(&self) -> bool {
        self.samples.iter().all(|s| s.gap < self.eps && s.distance.le_rational(&self.bound))
    }

    /// Recomputes every sample from its weights with an independent distance oracle.
    pub fn reverify(&self, images: &[Vector], distance: &(dyn Fn(&[Rational]) -> Extended + Sync)) -> bool {
        self.samples.iter().all(|s| {
            let psi = self.net.point_from_weights(&s.weights);
            let counts = self.net.round(&s.weights);
            let psi_i = self.net.point(&counts);
            let diff = sub(&psi, &psi_i);
            let gap = images.iter().map(|z| dot(&diff, z).abs_value()).max().unwrap_or_else(Rational::zero);
            psi == s.psi && counts == s.counts && gap < self.eps && distance(&diff).le_rational(&self.bound)
        })
    }
}

trait AbsValue {
    fn abs_value(&self) -> Rational;
}

impl AbsValue for Rational {
    fn abs_value(&self) -> Rational {
        num_traits::Signed::abs(self)
    }
}

impl BarycentricNet {
    pub fn point_from_weights(&self, weights: &[Rational]) -> Vector {
        let dim = self.vertices[0].len();
        let mut p = vec![Rational::zero(); dim];
        for (v, w) in self.vertices.iter().zip(weights) {
            p = crate::rational::axpy(&p, w, v);
        }
        p
    }
}

/// Builds the dual net for net images `images` and checks each sample.
pub(crate) fn build_dual_certificate(
    vertices: Vec<Vector>,
    images: &[Vector],
    eps: &Rational,
    weights: Vec<Vec<Rational>>,
    distance: &(dyn Fn(&[Rational]) -> Extended + Sync),
    exec: Exec,
) -> DualNetCertificate {
    let values: Vec<Vec<Rational>> = vertices.iter().map(|v| images.iter().map(|z| dot(v, z)).collect()).collect();
    let (resolution, spread) = barycentric_resolution(&values, eps);
    let net = BarycentricNet { vertices, resolution };
    let samples = exec.map(weights.len(), |i| {
        let w = &weights[i];
        let psi = net.point_from_weights(w);
        let counts = net.round(w);
        let diff = sub(&psi, &net.point(&counts));
        let gap = images.iter().map(|z| dot(&diff, z).abs_value()).max().unwrap_or_else(Rational::zero);
        DualSample { weights: w.clone(), psi, counts, gap, distance: distance(&diff) }
    });
    let measured_radius = samples
        .iter()
        .filter_map(|s| s.distance.finite().cloned())
        .max()
        .unwrap_or_else(Rational::zero);
    DualNetCertificate { eps: eps.clone(), bound: int(3) * eps, net, spread, samples, measured_radius }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearSchauder {
    pub eps: Rational,
    pub image_net: ImageNet,
    pub image_certificate: EpsNetCertificate,
    pub dual: DualNetCertificate,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LinearSchauderOutcome {
    Certified(Box<LinearSchauder>),
    /// `A(B_p)` is not `q^s`-precompact; the ray lies in the image.
    Refused(EscapingRay),
}

/// For `A(B_p)` `q^s`-precompact: an ε-net of `A(B_p)` and, from it, a `3ε`-net
/// of `A^♭(B_{q^♭})` in the `p^♭` gauge.
pub fn schauder_linear_check(
    a: &LinearOp,
    eps: &Rational,
    caps: &Caps,
    exec: Exec,
    seed: u64,
) -> Result<LinearSchauderOutcome> {
    crate::asym_space::require_positive(eps)?;
    let p = a.source();
    let qs = a.target().symmetrize();
    let ball = p.unit_ball().enumerate(caps)?;
    let v = ball.v_rep().expect("enumerated");
    let image_vrep = VRep {
        vertices: v.vertices.iter().map(|x| a.apply(x)).collect(),
        rays: v.rays.iter().map(|r| a.apply(r)).filter(|r| !is_zero_vec(r)).collect(),
    };
    let image = Polyhedron::from_v_rep(a.target().dim(), image_vrep, caps)?;
    if let Some(esc) = escaping_ray(&image, &qs)? {
        return Ok(LinearSchauderOutcome::Refused(esc));
    }

    let tensor: Vec<Vec<Vector>> = a.matrix().iter().map(|row| row.iter().map(|x| vec![x.clone()]).collect()).collect();
    let q1 = Polytope::from_vertices(p.dim(), v.vertices.clone(), caps)?;
    let q2 = Polytope::from_vertices(1, vec![vec![Rational::one()]], caps)?;
    let image_net = bilinear_image_net(&tensor, qs.generators(), &q1, &q2, eps, MAX_IMAGE_LEAVES)?;

    let mut points: Vec<Vector> = sample_polyhedron(&ball, 200, 5, seed)?.iter().map(|x| a.apply(x)).collect();
    points.extend(v.vertices.iter().map(|x| a.apply(x)));
    let image_certificate = certify_cover(image_net.images.clone(), points, &qs, eps, NetLocation::Inside, exec)?;

    let dual_vertices = dual_ball(a.target(), caps)?.v_rep().expect("enumerated").vertices.clone();
    let gauge = DualGauge::of(p, caps)?;
    let at = crate::rational::transpose(a.matrix(), p.dim());
    let distance = |diff: &[Rational]| gauge.eval(&mat_vec(&at, diff));
    let weights = sample_weights(dual_vertices.len(), 48, seed ^ 0x5eed);
    let dual = build_dual_certificate(dual_vertices, &image_net.images, eps, weights, &distance, exec);
    Ok(LinearSchauderOutcome::Certified(Box::new(LinearSchauder { eps: eps.clone(), image_net, image_certificate, dual })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asym_space::AsymNorm;
    use crate::rational::{ratio, vec_i};

    #[test]
    fn rounding_sums_to_resolution() {
        let net = BarycentricNet { vertices: vec![vec_i(&[1]), vec_i(&[0]), vec_i(&[-1])], resolution: 4 };
        let c = net.round(&[ratio(1, 3), ratio(1, 3), ratio(1, 3)]);
        assert_eq!(c, vec![2, 1, 1]);
        assert_eq!(net.size(), BigUint::from(15u32));
    }

    #[test]
    fn zero_operator() {
        let l = AsymNorm::l_inf(2);
        let a = LinearOp::new(vec![vec_i(&[0, 0]), vec_i(&[0, 0])], l.clone(), l).unwrap();
        let LinearSchauderOutcome::Certified(s) = schauder_linear_check(&a, &ratio(1, 2), &Caps::default(), Exec::default(), 1).unwrap() else {
            panic!()
        };
        assert_eq!(s.image_net.images, vec![vec_i(&[0, 0])]);
        assert!(s.dual.holds());
        assert_eq!(s.dual.measured_radius, Rational::zero());
    }

    #[test]
    fn identity_on_l_inf() {
        let l = AsymNorm::l_inf(2);
        let a = LinearOp::identity(l.clone());
        let caps = Caps::default();
        let LinearSchauderOutcome::Certified(s) = schauder_linear_check(&a, &ratio(1, 2), &caps, Exec::default(), 3).unwrap() else {
            panic!()
        };
        let member = |x: &[Rational]| l.value(x) <= Rational::one();
        assert!(s.image_certificate.verify(&l, NetLocation::Inside, Some(&member)).is_ok());
        assert!(s.dual.holds());
        let gauge = DualGauge::of(&l, &caps).unwrap();
        assert!(s.dual.reverify(&s.image_net.images, &|d: &[Rational]| gauge.eval(d)));
    }

    #[test]
    fn negation_on_u_is_refused() {
        let u = AsymNorm::u();
        let a = LinearOp::new(vec![vec_i(&[-1])], u.clone(), u).unwrap();
        let out = schauder_linear_check(&a, &ratio(1, 2), &Caps::default(), Exec::default(), 0).unwrap();
        let LinearSchauderOutcome::Refused(esc) = out else { panic!() };
        assert_eq!(esc.ray, vec_i(&[1]));
    }
}
