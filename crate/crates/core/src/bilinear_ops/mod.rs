//! Bilinear operators `T : X × Y → Z` and bilinear forms on asymmetric normed spaces.
//!
//! A tensor is stored as one `d1 × d2` matrix per output coordinate, so
//! `T(x, y)_k = xᵀ · tensor[k] · y`.

mod compact;
mod convergence;

pub use compact::{
    bideal_compose_left, bideal_compose_right, BILINEAR_MAX_LEAVES, closedness_limit_check, precompact_class, rank_one_form_tensor,
    rank_one_norm, schauder_bilinear_net, verify_schauder, BilinearNet, BilinearSchauder, ClassVerdict,
    ClosednessStep, ClosednessVerdict, EscapingPair, Gauge, LeftComposition, PrecompactClass, RightComposition,
};
pub use convergence::{alaoglu_desk_check, w2_converges, AlaogluOutcome, LimitRoute, ProbeVerdict, W2Report};

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};

use crate::asym_space::AsymNorm;
use crate::error::{check_dim, Error, Result};
use crate::exec::Exec;
use crate::linear_ops::{dual_ball, norming_functional, Functional};
use crate::polyhedral::{Caps, LpStatus};
use crate::rational::{dot, scale, Extended, Matrix, Rational, Vector};

pub type Tensor3 = Vec<Matrix>;

/// `xᵀ F y`.
pub fn eval_form(f: &[Vector], x: &[Rational], y: &[Rational]) -> Rational {
    let mut s = Rational::zero();
    for (xi, row) in x.iter().zip(f) {
        if !xi.is_zero() {
            s += xi * dot(row, y);
        }
    }
    s
}

/// `Σ_k ψ_k · tensor[k]`.
pub fn contract_target(tensor: &[Matrix], psi: &[Rational], d1: usize, d2: usize) -> Matrix {
    let mut f = vec![vec![Rational::zero(); d2]; d1];
    for (m, c) in tensor.iter().zip(psi) {
        if c.is_zero() {
            continue;
        }
        for a in 0..d1 {
            for b in 0..d2 {
                f[a][b] += c * &m[a][b];
            }
        }
    }
    f
}

fn map_matrix(f: &[Vector], g: impl Fn(&Rational) -> Rational) -> Matrix {
    f.iter().map(|row| row.iter().map(&g).collect()).collect()
}

fn zip_matrix(f: &[Vector], h: &[Vector], g: impl Fn(&Rational, &Rational) -> Rational) -> Matrix {
    f.iter().zip(h).map(|(r, s)| r.iter().zip(s).map(|(a, b)| g(a, b)).collect()).collect()
}

/// A unit ball as `conv V + cone R`.
#[derive(Debug, Clone, PartialEq)]
pub struct BallData {
    pub vertices: Vec<Vector>,
    pub rays: Vec<Vector>,
}

impl BallData {
    pub fn of(p: &AsymNorm, caps: &Caps) -> Result<Self> {
        let b = p.unit_ball().enumerate(caps)?;
        let v = b.v_rep().expect("enumerated");
        Ok(BallData { vertices: v.vertices.clone(), rays: v.rays.clone() })
    }

    /// The ball of radius `r`.
    pub fn scaled(&self, r: &Rational) -> Self {
        BallData { vertices: self.vertices.iter().map(|v| scale(r, v)).collect(), rays: self.rays.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    Vertices,
    RayVertex,
    VertexRay,
    RayRay,
}

/// `sup_{x ∈ P1, y ∈ P2} xᵀFy` with the pair attaining it, or a growth direction.
#[derive(Debug, Clone, PartialEq)]
pub struct FormSup {
    pub value: Extended,
    pub kind: PairKind,
    pub x: Vector,
    pub y: Vector,
}

/// Exact supremum of a bilinear function over `P1 × P2`.
///
/// With `x = Σλv + Σsr` and `y = Σμw + Σtρ` the value splits into vertex pairs
/// weighted by `λμ` plus ray terms with nonnegative weights `λt`, `sμ`, `st`.
/// It is `∞` iff some ray term is positive, and otherwise a vertex-pair maximum.
pub fn form_sup(f: &[Vector], b1: &BallData, b2: &BallData, exec: Exec) -> FormSup {
    let cases = [
        (PairKind::RayVertex, &b1.rays, &b2.vertices),
        (PairKind::VertexRay, &b1.vertices, &b2.rays),
        (PairKind::RayRay, &b1.rays, &b2.rays),
    ];
    for (kind, xs, ys) in cases {
        for x in xs {
            for y in ys {
                if eval_form(f, x, y).is_positive() {
                    return FormSup { value: Extended::Infinite, kind, x: x.clone(), y: y.clone() };
                }
            }
        }
    }
    let rows = exec.map(b1.vertices.len(), |i| {
        let x = &b1.vertices[i];
        let fx: Vector = (0..b2.vertices.first().map_or(0, Vec::len))
            .map(|b| x.iter().zip(f).map(|(xa, row)| xa * &row[b]).sum())
            .collect();
        let mut best: Option<(Rational, usize)> = None;
        for (j, y) in b2.vertices.iter().enumerate() {
            let v = dot(&fx, y);
            if best.as_ref().is_none_or(|(bv, _)| &v > bv) {
                best = Some((v, j));
            }
        }
        best.expect("balls have vertices")
    });
    let (i, (v, j)) = rows
        .into_iter()
        .enumerate()
        .reduce(|acc, cur| if cur.1 .0 > acc.1 .0 { cur } else { acc })
        .expect("balls have vertices");
    FormSup { value: Extended::Finite(v), kind: PairKind::Vertices, x: b1.vertices[i].clone(), y: b2.vertices[j].clone() }
}

/// The same supremum by a second route: for each vertex `w` of `P2` an LP over
/// `B_p1`, and for each ray `ρ` of `P2` an LP checking `sup_x xᵀFρ ≤ 0`.
pub fn form_sup_lp(f: &[Vector], p1: &AsymNorm, b2: &BallData) -> Extended {
    let ball = p1.unit_ball();
    let column = |y: &[Rational]| -> Vector { f.iter().map(|row| dot(row, y)).collect() };
    for r in &b2.rays {
        let out = ball.solve_lp(&column(r)).expect("dimensions validated");
        match out.status {
            LpStatus::Unbounded => return Extended::Infinite,
            _ if out.optimum.as_ref().is_some_and(Signed::is_positive) => return Extended::Infinite,
            _ => {}
        }
    }
    let mut best = Extended::zero();
    for w in &b2.vertices {
        let out = ball.solve_lp(&column(w)).expect("dimensions validated");
        match out.status {
            LpStatus::Unbounded => return Extended::Infinite,
            LpStatus::Optimal => best = best.max(Extended::Finite(out.optimum.expect("optimum present"))),
            LpStatus::Infeasible => unreachable!("unit balls contain 0"),
        }
    }
    best
}

/// Norm of a bilinear operator with the attaining generator and pair.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinNorm {
    pub value: Extended,
    pub generator: usize,
    pub sup: FormSup,
}

/// `sup_{P1 × P2} max_j ⟨g_j, T(x, y)⟩`, lowest generator index on ties.
pub fn gauge_sup(tensor: &[Matrix], gens: &[Vector], b1: &BallData, b2: &BallData, d1: usize, d2: usize, exec: Exec) -> BilinNorm {
    let mut best: Option<BilinNorm> = None;
    for (j, g) in gens.iter().enumerate() {
        let s = form_sup(&contract_target(tensor, g, d1, d2), b1, b2, exec);
        let infinite = !s.value.is_finite();
        if best.as_ref().is_none_or(|b| s.value > b.value) {
            best = Some(BilinNorm { value: s.value.clone(), generator: j, sup: s });
        }
        if infinite {
            break;
        }
    }
    best.expect("norms have generators")
}

/// A bilinear operator between `(X, p1) × (Y, p2)` and `(Z, q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearOp {
    tensor: Tensor3,
    source1: AsymNorm,
    source2: AsymNorm,
    target: AsymNorm,
}

impl BilinearOp {
    pub fn new(tensor: Tensor3, source1: AsymNorm, source2: AsymNorm, target: AsymNorm) -> Result<Self> {
        check_dim(target.dim(), tensor.len())?;
        for m in &tensor {
            check_dim(source1.dim(), m.len())?;
            for row in m {
                check_dim(source2.dim(), row.len())?;
            }
        }
        Ok(BilinearOp { tensor, source1, source2, target })
    }

    pub fn zero(source1: AsymNorm, source2: AsymNorm, target: AsymNorm) -> Self {
        let tensor = vec![vec![vec![Rational::zero(); source2.dim()]; source1.dim()]; target.dim()];
        BilinearOp { tensor, source1, source2, target }
    }

    pub fn tensor(&self) -> &Tensor3 {
        &self.tensor
    }

    pub fn source1(&self) -> &AsymNorm {
        &self.source1
    }

    pub fn source2(&self) -> &AsymNorm {
        &self.source2
    }

    pub fn target(&self) -> &AsymNorm {
        &self.target
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.source1.dim(), self.source2.dim(), self.target.dim())
    }

    pub fn apply(&self, x: &[Rational], y: &[Rational]) -> Vector {
        self.tensor.iter().map(|m| eval_form(m, x, y)).collect()
    }

    pub fn same_signature(&self, other: &BilinearOp) -> bool {
        self.source1 == other.source1 && self.source2 == other.source2 && self.target == other.target
    }

    fn check_signature(&self, other: &BilinearOp) -> Result<()> {
        if self.same_signature(other) {
            Ok(())
        } else {
            Err(Error::Input("bilinear operators have different signatures".into()))
        }
    }

    pub fn scaled(&self, t: &Rational) -> BilinearOp {
        BilinearOp { tensor: self.tensor.iter().map(|m| map_matrix(m, |a| a * t)).collect(), ..self.clone() }
    }

    pub fn add(&self, other: &BilinearOp) -> Result<BilinearOp> {
        self.check_signature(other)?;
        let tensor = self.tensor.iter().zip(&other.tensor).map(|(a, b)| zip_matrix(a, b, |x, y| x + y)).collect();
        Ok(BilinearOp { tensor, ..self.clone() })
    }

    pub fn sub(&self, other: &BilinearOp) -> Result<BilinearOp> {
        self.add(&other.scaled(&-Rational::one()))
    }

    /// The same tensor read with another target norm.
    pub fn with_target(&self, target: AsymNorm) -> Result<BilinearOp> {
        BilinearOp::new(self.tensor.clone(), self.source1.clone(), self.source2.clone(), target)
    }

    pub fn balls(&self, caps: &Caps) -> Result<(BallData, BallData)> {
        Ok((BallData::of(&self.source1, caps)?, BallData::of(&self.source2, caps)?))
    }

    /// `‖T|_{p1,p2;q} = sup{q(T(x,y)) : (x,y) ∈ B_p1 × B_p2}`.
    pub fn norm(&self, caps: &Caps, exec: Exec) -> Result<BilinNorm> {
        let (b1, b2) = self.balls(caps)?;
        let (d1, d2, _) = self.dims();
        Ok(gauge_sup(&self.tensor, self.target.generators(), &b1, &b2, d1, d2, exec))
    }

    /// `‖T‖ = sup{q^s(T(x,y)) : p1^s(x) ≤ 1, p2^s(y) ≤ 1}`, always finite.
    pub fn sym_norm(&self, caps: &Caps, exec: Exec) -> Result<BilinNorm> {
        let b1 = BallData::of(&self.source1.symmetrize(), caps)?;
        let b2 = BallData::of(&self.source2.symmetrize(), caps)?;
        let (d1, d2, _) = self.dims();
        Ok(gauge_sup(&self.tensor, self.target.symmetrize().generators(), &b1, &b2, d1, d2, exec))
    }

    /// Seeded spot check of linearity in each argument.
    pub fn bilinearity_spot_check(&self, samples: usize, seed: u64) -> bool {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let (d1, d2, _) = self.dims();
        let mut draw = |n: usize| -> Vector { (0..n).map(|_| Rational::new(rng.gen_range(-6..=6).into(), rng.gen_range(1..=4).into())).collect() };
        (0..samples).all(|_| {
            let (x, x2, y, y2) = (draw(d1), draw(d1), draw(d2), draw(d2));
            let (s, t) = (draw(1).remove(0), draw(1).remove(0));
            let sx: Vector = x.iter().zip(&x2).map(|(a, b)| &s * a + &t * b).collect();
            let sy: Vector = y.iter().zip(&y2).map(|(a, b)| &s * a + &t * b).collect();
            let lin = |u: Vector, v: Vector| -> Vector { u.iter().zip(&v).map(|(a, b)| &s * a + &t * b).collect() };
            self.apply(&sx, &y) == lin(self.apply(&x, &y), self.apply(&x2, &y))
                && self.apply(&x, &sy) == lin(self.apply(&x, &y), self.apply(&x, &y2))
        })
    }
}

/// A bilinear form `b(x, y) = xᵀ M y` on `(X, p1) × (Y, p2)`, valued in `(ℝ, u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearForm {
    matrix: Matrix,
    source1: AsymNorm,
    source2: AsymNorm,
}

impl BilinearForm {
    pub fn new(matrix: Matrix, source1: AsymNorm, source2: AsymNorm) -> Result<Self> {
        check_dim(source1.dim(), matrix.len())?;
        for row in &matrix {
            check_dim(source2.dim(), row.len())?;
        }
        Ok(BilinearForm { matrix, source1, source2 })
    }

    pub fn zero(source1: AsymNorm, source2: AsymNorm) -> Self {
        BilinearForm { matrix: vec![vec![Rational::zero(); source2.dim()]; source1.dim()], source1, source2 }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn source1(&self) -> &AsymNorm {
        &self.source1
    }

    pub fn source2(&self) -> &AsymNorm {
        &self.source2
    }

    pub fn eval(&self, x: &[Rational], y: &[Rational]) -> Rational {
        eval_form(&self.matrix, x, y)
    }

    pub fn scaled(&self, t: &Rational) -> BilinearForm {
        BilinearForm { matrix: map_matrix(&self.matrix, |a| a * t), ..self.clone() }
    }

    pub fn add(&self, other: &BilinearForm) -> Result<BilinearForm> {
        if self.source1 != other.source1 || self.source2 != other.source2 {
            return Err(Error::Input("bilinear forms live on different spaces".into()));
        }
        Ok(BilinearForm { matrix: zip_matrix(&self.matrix, &other.matrix, |a, b| a + b), ..self.clone() })
    }

    pub fn sub(&self, other: &BilinearForm) -> Result<BilinearForm> {
        self.add(&other.scaled(&-Rational::one()))
    }

    /// `‖b|_{p1,p2} = sup{b(x,y) : (x,y) ∈ B_p1 × B_p2}`.
    pub fn norm(&self, caps: &Caps, exec: Exec) -> Result<FormSup> {
        Ok(form_sup(&self.matrix, &BallData::of(&self.source1, caps)?, &BallData::of(&self.source2, caps)?, exec))
    }

    /// `‖b‖ = sup{|b(x,y)| : p1^s(x) ≤ 1, p2^s(y) ≤ 1}`; the balls are symmetric,
    /// so this is the plain supremum of `b`.
    pub fn sym_norm(&self, caps: &Caps, exec: Exec) -> Result<Rational> {
        let b1 = BallData::of(&self.source1.symmetrize(), caps)?;
        let b2 = BallData::of(&self.source2.symmetrize(), caps)?;
        match form_sup(&self.matrix, &b1, &b2, exec).value {
            Extended::Finite(v) => Ok(v),
            Extended::Infinite => unreachable!("symmetrized balls are bounded"),
        }
    }
}

pub fn form_norm(b: &BilinearForm, caps: &Caps, exec: Exec) -> Result<Extended> {
    Ok(b.norm(caps, exec)?.value)
}

/// The quasi-pseudometric `δ(b1, b2)`: `‖b2 − b1|` when `b2 − b1` is a continuous
/// form, `∞` otherwise.
pub fn form_delta(b1: &BilinearForm, b2: &BilinearForm, caps: &Caps, exec: Exec) -> Result<Extended> {
    let diff = b2.sub(b1)?;
    let s = diff.norm(caps, exec)?;
    Ok(if s.value.is_finite() { s.value } else { Extended::Infinite })
}

pub fn bilin_norm(t: &BilinearOp, caps: &Caps, exec: Exec) -> Result<Extended> {
    Ok(t.norm(caps, exec)?.value)
}

pub fn sym_norm(t: &BilinearOp, caps: &Caps, exec: Exec) -> Result<Rational> {
    match t.sym_norm(caps, exec)?.value {
        Extended::Finite(v) => Ok(v),
        Extended::Infinite => unreachable!("symmetrized balls are bounded"),
    }
}

/// A pair with `p1(x)·p2(y) = 0`, where a finite norm forces `q(T(x,y)) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegenerateProbe {
    pub x: Vector,
    pub y: Vector,
    pub p1: Rational,
    pub p2: Rational,
    pub q_value: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RescalingVerdict {
    pub beta: Rational,
    pub r: Rational,
    pub norm: Extended,
    /// `q(T(x,y)) ≤ (β/r²)p1(x)p2(y)` everywhere, i.e. `‖T| ≤ β/r²`.
    pub condition_i: bool,
    pub scaled_sup: Extended,
    /// `q(T(x,y)) ≤ β` on `r·B_p1 × r·B_p2`.
    pub condition_ii: bool,
    pub degenerate: Vec<DegenerateProbe>,
}

impl RescalingVerdict {
    pub fn agree(&self) -> bool {
        self.condition_i == self.condition_ii
            && (!self.condition_ii || self.degenerate.iter().all(|d| d.q_value.is_zero()))
    }

    /// Some probe has `p1(x) = 0` while the bound holds.
    pub fn exercises_zero_branch(&self) -> bool {
        self.condition_ii && self.degenerate.iter().any(|d| d.p1.is_zero())
    }
}

/// Evaluates both sides of the rescaling equivalence exactly.
pub fn rescaling_equivalence_check(
    t: &BilinearOp,
    beta: &Rational,
    r: &Rational,
    caps: &Caps,
    exec: Exec,
) -> Result<RescalingVerdict> {
    if !r.is_positive() {
        return Err(Error::Input("r must be positive".into()));
    }
    if beta.is_negative() {
        return Err(Error::Input("beta must be nonnegative".into()));
    }
    let (b1, b2) = t.balls(caps)?;
    let (d1, d2, _) = t.dims();
    let gens = t.target.generators();
    let norm = gauge_sup(&t.tensor, gens, &b1, &b2, d1, d2, exec).value;
    let bound = beta / (r * r);
    let condition_i = norm.le_rational(&bound);
    let scaled_sup = gauge_sup(&t.tensor, gens, &b1.scaled(r), &b2.scaled(r), d1, d2, exec).value;
    let condition_ii = scaled_sup.le_rational(beta);

    let mut degenerate = Vec::new();
    let mut probe = |x: &Vector, y: &Vector| {
        degenerate.push(DegenerateProbe {
            x: x.clone(),
            y: y.clone(),
            p1: t.source1.value(x),
            p2: t.source2.value(y),
            q_value: t.target.value(&t.apply(x, y)),
        })
    };
    for x in &b1.rays {
        for y in b2.vertices.iter().chain(&b2.rays) {
            probe(x, y);
        }
    }
    for x in &b1.vertices {
        for y in &b2.rays {
            probe(x, y);
        }
    }
    Ok(RescalingVerdict { beta: beta.clone(), r: r.clone(), norm, condition_i, scaled_sup, condition_ii, degenerate })
}

/// `T^♭ψ = ψ ∘ T`.
pub fn bilinear_adjoint(t: &BilinearOp, psi: &Functional) -> Result<BilinearForm> {
    if psi.space() != &t.target {
        return Err(Error::Input("functional does not live on the target space".into()));
    }
    let (d1, d2, _) = t.dims();
    BilinearForm::new(contract_target(&t.tensor, psi.vector(), d1, d2), t.source1.clone(), t.source2.clone())
}

/// Both sides of `‖T^♭|_{q^♭,‖·|} = ‖T|_{p1,p2;q}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjointNormCheck {
    pub direct: Extended,
    /// `max ‖T^♭ψ|` over the vertices `ψ` of `B_{q^♭}`.
    pub via_dual_vertices: Extended,
    /// The norming functional of `T(x,y)` at the attaining pair and `(T^♭ψ)(x,y)`.
    pub norming: Option<(Functional, Rational)>,
}

impl AdjointNormCheck {
    pub fn holds(&self) -> bool {
        let norming_ok = match (&self.norming, &self.direct) {
            (Some((_, v)), Extended::Finite(d)) => v == d,
            (None, Extended::Finite(d)) => d.is_zero(),
            (_, Extended::Infinite) => true,
        };
        self.direct == self.via_dual_vertices && norming_ok
    }
}

pub fn adjoint_norm_check(t: &BilinearOp, caps: &Caps, exec: Exec) -> Result<AdjointNormCheck> {
    let (b1, b2) = t.balls(caps)?;
    let (d1, d2, _) = t.dims();
    let direct = gauge_sup(&t.tensor, t.target.generators(), &b1, &b2, d1, d2, exec);
    let ball = dual_ball(&t.target, caps)?;
    let verts = &ball.v_rep().expect("enumerated").vertices;
    let values = exec.map(verts.len(), |i| form_sup(&contract_target(&t.tensor, &verts[i], d1, d2), &b1, &b2, Exec::Sequential).value);
    let via_dual_vertices = values.into_iter().max().unwrap_or_else(Extended::zero);
    let mut norming = None;
    if direct.value.is_finite() && direct.sup.kind == PairKind::Vertices {
        let z = t.apply(&direct.sup.x, &direct.sup.y);
        if t.target.value(&z).is_positive() {
            let psi = norming_functional(&t.target, &z)?;
            let form = bilinear_adjoint(t, &psi)?;
            let v = form.eval(&direct.sup.x, &direct.sup.y);
            norming = Some((psi, v));
        }
    }
    Ok(AdjointNormCheck { direct: direct.value, via_dual_vertices, norming })
}

/// `T^⋆(ψ, x) = ψ(T(x, ·))`, a functional on `(Y, p2)`.
pub fn arens_adjoint(t: &BilinearOp, psi: &[Rational], x: &[Rational]) -> Result<Functional> {
    let (d1, d2, dz) = t.dims();
    check_dim(dz, psi.len())?;
    check_dim(d1, x.len())?;
    let f = contract_target(&t.tensor, psi, d1, d2);
    let phi: Vector = (0..d2).map(|b| x.iter().zip(&f).map(|(xa, row)| xa * &row[b]).sum()).collect();
    Functional::new(phi, t.source2.clone())
}

/// `‖T^⋆‖ = sup{‖T^⋆(ψ,x)‖* : ψ ∈ B_{(q^s)*}, p1^s(x) ≤ 1}` against `‖T‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArensCheck {
    pub sym_norm: Rational,
    pub arens_norm: Rational,
}

impl ArensCheck {
    pub fn holds(&self) -> bool {
        self.sym_norm == self.arens_norm
    }
}

pub fn arens_norm_check(t: &BilinearOp, caps: &Caps, exec: Exec) -> Result<ArensCheck> {
    let sym = sym_norm(t, caps, exec)?;
    let psis = dual_ball(&t.target.symmetrize(), caps)?.v_rep().expect("enumerated").vertices.clone();
    let xs = BallData::of(&t.source1.symmetrize(), caps)?.vertices;
    let pairs: Vec<(usize, usize)> = (0..psis.len()).flat_map(|i| (0..xs.len()).map(move |j| (i, j))).collect();
    let values = exec.map(pairs.len(), |k| {
        let (i, j) = pairs[k];
        arens_adjoint(t, &psis[i], &xs[j]).map(|f| f.star_norm())
    });
    let mut best = Rational::zero();
    for v in values {
        let v = v?;
        if v > best {
            best = v;
        }
    }
    Ok(ArensCheck { sym_norm: sym, arens_norm: best })
}

/// `d(T1, T2)` under `q` and `d_s(T1, T2)` under `q^s`, both over `B_p1 × B_p2`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorDistance {
    pub forward: Extended,
    pub symmetric: Extended,
}

pub fn operator_distance(t1: &BilinearOp, t2: &BilinearOp, caps: &Caps, exec: Exec) -> Result<OperatorDistance> {
    let diff = t2.sub(t1)?;
    let (b1, b2) = diff.balls(caps)?;
    let (d1, d2, _) = diff.dims();
    let forward = gauge_sup(&diff.tensor, diff.target.generators(), &b1, &b2, d1, d2, exec).value;
    let symmetric = gauge_sup(&diff.tensor, diff.target.symmetrize().generators(), &b1, &b2, d1, d2, exec).value;
    Ok(OperatorDistance { forward, symmetric })
}

/// Vertex-free lower bound on `‖T|` by alternating LP maximization from each
/// vertex of `B_p2`; used only as a cross-check.
pub fn alternating_lower_bound(t: &BilinearOp, caps: &Caps, rounds: usize) -> Result<Extended> {
    let (_, b2) = t.balls(caps)?;
    let (d1, d2, _) = t.dims();
    let ball1 = t.source1.unit_ball();
    let ball2 = t.source2.unit_ball();
    let mut best = Extended::zero();
    for g in t.target.generators() {
        let f = contract_target(&t.tensor, g, d1, d2);
        for start in &b2.vertices {
            let mut y = start.clone();
            for _ in 0..rounds {
                let cx: Vector = f.iter().map(|row| dot(row, &y)).collect();
                let ox = ball1.solve_lp(&cx)?;
                if ox.status == LpStatus::Unbounded {
                    return Ok(Extended::Infinite);
                }
                let x = ox.witness.expect("optimal point");
                let cy: Vector = (0..d2).map(|b| x.iter().zip(&f).map(|(xa, row)| xa * &row[b]).sum()).collect();
                let oy = ball2.solve_lp(&cy)?;
                if oy.status == LpStatus::Unbounded {
                    return Ok(Extended::Infinite);
                }
                y = oy.witness.expect("optimal point");
                best = best.max(Extended::Finite(eval_form(&f, &x, &y)));
            }
        }
    }
    Ok(best)
}

/// `q`-gauge of an image difference; shared by the certificate code.
pub(crate) fn gauge_of(target: &AsymNorm, gauge: compact::Gauge) -> AsymNorm {
    match gauge {
        compact::Gauge::Asym => target.clone(),
        compact::Gauge::Sym => target.symmetrize(),
    }
}
