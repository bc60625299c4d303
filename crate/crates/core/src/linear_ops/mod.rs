//! Linear operators between asymmetric normed spaces, dual cones and adjoints.

mod schauder;

pub use schauder::{
    schauder_linear_check, BarycentricNet, DualNetCertificate, DualSample, LinearSchauder, LinearSchauderOutcome,
};
pub(crate) use schauder::{barycentric_resolution, build_dual_certificate, sample_weights};

use num_traits::Signed;

use crate::asym_space::AsymNorm;
use crate::error::{check_dim, Error, Result};
use crate::polyhedral::{Caps, LpStatus, Polyhedron};
use crate::rational::{dot, mat_vec, scale, transpose, Extended, Matrix, Rational, Vector};

/// How an operator norm value is attained.
#[derive(Debug, Clone, PartialEq)]
pub enum NormWitness {
    /// `point` lies in the source ball and `⟨b_generator, A·point⟩` equals the norm.
    Attained { generator: usize, point: Vector },
    /// `ray` is in the recession cone of the source ball and `⟨b_generator, A·ray⟩ > 0`.
    Unbounded { generator: usize, ray: Vector },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpNorm {
    pub value: Extended,
    pub witness: NormWitness,
}

/// `sup{q(Mx) : p(x) ≤ 1}` as the max over `q`-generators of one LP each.
pub fn op_norm_between(matrix: &[Vector], p: &AsymNorm, q: &AsymNorm) -> OpNorm {
    let ball = p.unit_ball();
    let mt = transpose(matrix, p.dim());
    let mut best: Option<OpNorm> = None;
    for (j, b) in q.generators().iter().enumerate() {
        let c = mat_vec(&mt, b);
        let out = ball.solve_lp(&c).expect("dimensions validated");
        match out.status {
            LpStatus::Unbounded => {
                return OpNorm {
                    value: Extended::Infinite,
                    witness: NormWitness::Unbounded { generator: j, ray: out.witness.expect("ray present") },
                }
            }
            LpStatus::Optimal => {
                let v = out.optimum.expect("optimum present");
                if best.as_ref().is_none_or(|b| Extended::Finite(v.clone()) > b.value) {
                    best = Some(OpNorm {
                        value: Extended::Finite(v),
                        witness: NormWitness::Attained { generator: j, point: out.witness.expect("point present") },
                    });
                }
            }
            LpStatus::Infeasible => unreachable!("unit balls contain 0"),
        }
    }
    best.expect("norms have generators")
}

/// A matrix `A` (target_dim × source_dim) between `(X, p)` and `(Y, q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOp {
    matrix: Matrix,
    source: AsymNorm,
    target: AsymNorm,
}

impl LinearOp {
    pub fn new(matrix: Matrix, source: AsymNorm, target: AsymNorm) -> Result<Self> {
        check_dim(target.dim(), matrix.len())?;
        for row in &matrix {
            check_dim(source.dim(), row.len())?;
        }
        Ok(LinearOp { matrix, source, target })
    }

    pub fn identity(space: AsymNorm) -> Self {
        let n = space.dim();
        let m = (0..n).map(|i| crate::rational::unit(n, i)).collect();
        LinearOp { matrix: m, source: space.clone(), target: space }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn source(&self) -> &AsymNorm {
        &self.source
    }

    pub fn target(&self) -> &AsymNorm {
        &self.target
    }

    pub fn apply(&self, x: &[Rational]) -> Vector {
        mat_vec(&self.matrix, x)
    }

    pub fn scaled(&self, t: &Rational) -> LinearOp {
        LinearOp {
            matrix: self.matrix.iter().map(|r| scale(t, r)).collect(),
            source: self.source.clone(),
            target: self.target.clone(),
        }
    }

    /// `‖A|_{p,q}`.
    pub fn norm(&self) -> OpNorm {
        op_norm_between(&self.matrix, &self.source, &self.target)
    }

    /// `‖A|_{p̄,q̄}`.
    pub fn conjugate_norm(&self) -> OpNorm {
        op_norm_between(&self.matrix, &self.source.conjugate(), &self.target.conjugate())
    }

    /// `‖A|_{p^s,q^s}`.
    pub fn symmetric_norm(&self) -> OpNorm {
        op_norm_between(&self.matrix, &self.source.symmetrize(), &self.target.symmetrize())
    }

    /// `sup{q(Ax) : x ∈ B_{p̄}}`.
    pub fn sup_over_conjugate_ball(&self) -> OpNorm {
        op_norm_between(&self.matrix, &self.source.conjugate(), &self.target)
    }

    /// `sup{q̄(Ax) : x ∈ B_p}`.
    pub fn sup_of_conjugate_target(&self) -> OpNorm {
        op_norm_between(&self.matrix, &self.source, &self.target.conjugate())
    }

    /// Whether `q(Ax) ≤ beta·p(x)`.
    pub fn semi_lipschitz_at(&self, beta: &Rational, x: &[Rational]) -> bool {
        self.target.value(&self.apply(x)) <= beta * self.source.value(x)
    }

    pub fn adjoint(&self, caps: &Caps) -> Result<AdjointOp> {
        adjoint(self, caps)
    }
}

/// A linear functional on `(X, p)` with its cached `p^♭` value.
#[derive(Debug, Clone, PartialEq)]
pub struct Functional {
    vector: Vector,
    space: AsymNorm,
    dual_norm: Extended,
}

impl Functional {
    pub fn new(vector: Vector, space: AsymNorm) -> Result<Self> {
        check_dim(space.dim(), vector.len())?;
        let dual_norm = dual_norm_of(&vector, &space);
        Ok(Functional { vector, space, dual_norm })
    }

    pub fn vector(&self) -> &Vector {
        &self.vector
    }

    pub fn space(&self) -> &AsymNorm {
        &self.space
    }

    /// `p^♭(φ) = sup{φ(x) : p(x) ≤ 1}`.
    pub fn dual_norm(&self) -> &Extended {
        &self.dual_norm
    }

    /// Membership in the dual cone `X^♭_p`.
    pub fn is_bounded(&self) -> bool {
        self.dual_norm.is_finite()
    }

    pub fn apply(&self, x: &[Rational]) -> Rational {
        dot(&self.vector, x)
    }

    /// `‖φ‖* = sup{|φ(x)| : p^s(x) ≤ 1}`, always finite.
    pub fn star_norm(&self) -> Rational {
        match dual_norm_of(&self.vector, &self.space.symmetrize()) {
            Extended::Finite(v) => v,
            Extended::Infinite => unreachable!("symmetrized balls are bounded"),
        }
    }
}

pub fn dual_norm_of(phi: &[Rational], p: &AsymNorm) -> Extended {
    let out = p.unit_ball().solve_lp(phi).expect("dimension checked by caller");
    match out.status {
        LpStatus::Optimal => Extended::Finite(out.optimum.expect("optimum present")),
        _ => Extended::Infinite,
    }
}

pub fn dual_norm(phi: &Functional) -> Extended {
    phi.dual_norm.clone()
}

/// `B_{p^♭}`: the polar of `B_p`, with its vertices enumerated.
pub fn dual_ball(p: &AsymNorm, caps: &Caps) -> Result<Polyhedron> {
    p.unit_ball().enumerate(caps)?.polar()?.enumerate(caps)
}

/// The lowest-index generator of `q` attaining `q(z)`; it has `q^♭ = 1`.
pub fn norming_functional(q: &AsymNorm, z: &[Rational]) -> Result<Functional> {
    check_dim(q.dim(), z.len())?;
    let (j, v) = q.argmax(z);
    if !v.is_positive() {
        return Err(Error::Domain("norming functional needs q(z) > 0".into()));
    }
    let psi = Functional::new(q.generators()[j].clone(), q.clone())?;
    match psi.dual_norm() {
        Extended::Finite(n) if n == &Rational::from_integer(1.into()) => Ok(psi),
        Extended::Finite(n) => {
            let s = n.recip();
            Functional::new(scale(&s, &q.generators()[j]), q.clone())
        }
        Extended::Infinite => unreachable!("q-generators are bounded by q"),
    }
}

/// The gauge `p^♭(φ) = sup_{B_p} φ`, evaluated from the V-rep of `B_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualGauge {
    pub vertices: Vec<Vector>,
    pub rays: Vec<Vector>,
}

impl DualGauge {
    pub fn of(p: &AsymNorm, caps: &Caps) -> Result<Self> {
        let b = p.unit_ball().enumerate(caps)?;
        let v = b.v_rep().expect("enumerated");
        Ok(DualGauge { vertices: v.vertices.clone(), rays: v.rays.clone() })
    }

    pub fn eval(&self, phi: &[Rational]) -> Extended {
        if self.rays.iter().any(|r| dot(phi, r).is_positive()) {
            return Extended::Infinite;
        }
        Extended::Finite(self.vertices.iter().map(|v| dot(phi, v)).max().expect("balls have vertices"))
    }
}

/// `A^♭ψ = ψ ∘ A` from `(Y^♭_q, q^♭)` to `(X^♭_p, p^♭)`, stored as the transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjointOp {
    pub matrix: Matrix,
    pub source_gauge: DualGauge,
    pub target_gauge: DualGauge,
    pub source_ball: Polyhedron,
}

impl AdjointOp {
    pub fn apply(&self, psi: &[Rational]) -> Vector {
        mat_vec(&self.matrix, psi)
    }

    /// `‖A^♭| = max over vertices ψ of B_{q^♭} of p^♭(A^♭ψ)`.
    pub fn norm(&self) -> Extended {
        let v = self.source_ball.v_rep().expect("dual ball enumerated");
        if v.rays.iter().any(|r| self.target_gauge.eval(&self.apply(r)) > Extended::zero()) {
            return Extended::Infinite;
        }
        v.vertices.iter().map(|psi| self.target_gauge.eval(&self.apply(psi))).max().unwrap_or_else(Extended::zero)
    }
}

pub fn adjoint(a: &LinearOp, caps: &Caps) -> Result<AdjointOp> {
    Ok(AdjointOp {
        matrix: transpose(&a.matrix, a.source.dim()),
        source_gauge: DualGauge::of(&a.target, caps)?,
        target_gauge: DualGauge::of(&a.source, caps)?,
        source_ball: dual_ball(&a.target, caps)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, vec_i};
    use num_traits::Zero;

    fn diag(a: i64, b: i64) -> Matrix {
        vec![vec_i(&[a, 0]), vec_i(&[0, b])]
    }

    #[test]
    fn op_norm_examples() {
        let u = AsymNorm::u();
        assert_eq!(LinearOp::identity(u.clone()).norm().value, Extended::Finite(int(1)));
        let neg = LinearOp::new(vec![vec_i(&[-1])], u.clone(), u.clone()).unwrap();
        let n = neg.norm();
        assert_eq!(n.value, Extended::Infinite);
        assert_eq!(n.witness, NormWitness::Unbounded { generator: 0, ray: vec_i(&[-1]) });

        let l = AsymNorm::l_inf(2);
        let a = LinearOp::new(diag(2, 3), l.clone(), l.clone()).unwrap();
        assert_eq!(a.norm().value, Extended::Finite(int(3)));
        assert_eq!(adjoint(&a, &Caps::default()).unwrap().norm(), Extended::Finite(int(3)));

        // 2·I from ℓ∞ to the gauge max(x1 + x2, 0): vertex oracle gives 4 at (1,1).
        let q = AsymNorm::new(2, vec![vec_i(&[1, 1]), vec_i(&[0, 0]), vec_i(&[1, -1]), vec_i(&[-1, 1])]).unwrap();
        let b = LinearOp::new(diag(2, 2), l.clone(), q.clone()).unwrap();
        let oracle = [[1, 1], [1, -1], [-1, 1], [-1, -1]]
            .iter()
            .map(|v| q.value(&b.apply(&vec_i(v))))
            .max()
            .unwrap();
        assert_eq!(b.norm().value, Extended::Finite(oracle));
    }

    #[test]
    fn dual_norm_examples() {
        let u = AsymNorm::u();
        assert_eq!(Functional::new(vec_i(&[3]), u.clone()).unwrap().dual_norm(), &Extended::Finite(int(3)));
        assert_eq!(Functional::new(vec_i(&[-1]), u.clone()).unwrap().dual_norm(), &Extended::Infinite);
        assert_eq!(Functional::new(vec_i(&[0]), u.clone()).unwrap().dual_norm(), &Extended::zero());
        let f = Functional::new(vec_i(&[1, 1]), AsymNorm::l_inf(2)).unwrap();
        assert_eq!(f.dual_norm(), &Extended::Finite(int(2)));
        assert_eq!(f.star_norm(), int(2));
    }

    #[test]
    fn dual_balls() {
        let caps = Caps::default();
        let b = dual_ball(&AsymNorm::u(), &caps).unwrap();
        let mut v = b.v_rep().unwrap().vertices.clone();
        v.sort();
        assert_eq!(v, vec![vec_i(&[0]), vec_i(&[1])]);
        let c = dual_ball(&AsymNorm::l_inf(2), &caps).unwrap();
        assert_eq!(c.v_rep().unwrap().vertices.len(), 4);
        assert!(c.contains(&vec_i(&[0, 0])));
    }

    #[test]
    fn norming_functionals() {
        let u = AsymNorm::u();
        let psi = norming_functional(&u, &vec_i(&[3])).unwrap();
        assert_eq!(psi.vector(), &vec_i(&[1]));
        assert_eq!(psi.apply(&vec_i(&[3])), int(3));
        let l = AsymNorm::l_inf(2);
        let psi = norming_functional(&l, &vec_i(&[1, -2])).unwrap();
        assert_eq!(psi.vector(), &vec_i(&[0, -1]));
        assert_eq!(psi.dual_norm(), &Extended::Finite(int(1)));
        assert!(matches!(norming_functional(&u, &vec_i(&[-2])), Err(Error::Domain(_))));
    }

    #[test]
    fn identity_adjoint_on_u() {
        let a = LinearOp::identity(AsymNorm::u());
        let adj = adjoint(&a, &Caps::default()).unwrap();
        assert_eq!(adj.matrix, vec![vec_i(&[1])]);
        assert_eq!(adj.norm(), Extended::Finite(int(1)));
        assert!(Rational::zero() <= int(1));
    }
}
