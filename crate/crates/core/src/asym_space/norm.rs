use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::polyhedral::{Caps, Halfspace, LpStatus, Polyhedron};
use crate::rational::{dot, neg, scale, sub, to_f64_vec, Rational, Vector};

/// A polyhedral asymmetric norm `p(x) = max_i ⟨a_i, x⟩`.
///
/// Construction checks that `0 ∈ conv(a_i)` (so `p ≥ 0`) and that the
/// generators span the space (so `p(x) = p(−x) = 0` forces `x = 0`).
#[derive(Debug, Clone)]
pub struct AsymNorm {
    dim: usize,
    generators: Vec<Vector>,
    approx: Vec<Vec<f64>>,
}

impl PartialEq for AsymNorm {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.generators == other.generators
    }
}

impl Eq for AsymNorm {}

impl AsymNorm {
    pub fn new(dim: usize, generators: Vec<Vector>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Input("norm dimension must be positive".into()));
        }
        if generators.is_empty() {
            return Err(Error::Input("a norm needs at least one generator".into()));
        }
        for g in &generators {
            check_dim(dim, g.len())?;
        }
        if rank(&generators, dim) < dim {
            return Err(Error::Input("generators do not span the space: p(x) = p(-x) = 0 has nonzero solutions".into()));
        }
        if !origin_in_hull(&generators, dim) {
            return Err(Error::Input("0 is not in the convex hull of the generators: p takes negative values".into()));
        }
        Ok(Self::trusted(dim, generators))
    }

    pub(crate) fn trusted(dim: usize, generators: Vec<Vector>) -> Self {
        let approx = generators.iter().map(|g| to_f64_vec(g)).collect();
        AsymNorm { dim, generators, approx }
    }

    /// The sup norm `max_i |x_i|`.
    pub fn l_inf(dim: usize) -> Self {
        let mut gens = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            let e = crate::rational::unit(dim, i);
            gens.push(e.clone());
            gens.push(neg(&e));
        }
        Self::trusted(dim, gens)
    }

    /// The norm `u(α) = max(α, 0)` on `Q`.
    pub fn u() -> Self {
        Self::trusted(1, vec![vec![Rational::one()], vec![Rational::zero()]])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vector] {
        &self.generators
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        check_dim(self.dim, x.len())?;
        Ok(self.value(x))
    }

    /// `p(x)` without the dimension check.
    pub fn value(&self, x: &[Rational]) -> Rational {
        self.argmax(x).1
    }

    /// Lowest-index generator attaining `p(x)`, with the value.
    pub fn argmax(&self, x: &[Rational]) -> (usize, Rational) {
        let mut best = (0, dot(&self.generators[0], x));
        for (i, g) in self.generators.iter().enumerate().skip(1) {
            let v = dot(g, x);
            if v > best.1 {
                best = (i, v);
            }
        }
        best
    }

    pub fn approx_value(&self, x: &[f64]) -> f64 {
        self.approx
            .iter()
            .map(|g| g.iter().zip(x).map(|(a, b)| a * b).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `p̄(x) = p(−x)`.
    pub fn conjugate(&self) -> AsymNorm {
        Self::trusted(self.dim, self.generators.iter().map(|g| neg(g)).collect())
    }

    /// `p^s(x) = max(p(x), p(−x))`.
    pub fn symmetrize(&self) -> AsymNorm {
        let mut gens = self.generators.clone();
        for g in &self.generators {
            let n = neg(g);
            if !gens.contains(&n) {
                gens.push(n);
            }
        }
        Self::trusted(self.dim, gens)
    }

    /// `t·p` for `t > 0`.
    pub fn scaled(&self, t: &Rational) -> Result<AsymNorm> {
        if !t.is_positive() {
            return Err(Error::Input("norm scaling must be positive".into()));
        }
        Ok(Self::trusted(self.dim, self.generators.iter().map(|g| scale(t, g)).collect()))
    }

    /// `d_p(x, y) = p(y − x)`.
    pub fn quasi_metric(&self, x: &[Rational], y: &[Rational]) -> Result<Rational> {
        check_dim(self.dim, x.len())?;
        check_dim(self.dim, y.len())?;
        Ok(self.value(&sub(y, x)))
    }

    /// `B_p = {x : ⟨a_i, x⟩ ≤ 1}`.
    pub fn unit_ball(&self) -> Polyhedron {
        self.ball(&Rational::one())
    }

    /// `{x : p(x) ≤ r}`.
    pub fn ball(&self, r: &Rational) -> Polyhedron {
        let h = self.generators.iter().map(|g| Halfspace::new(g.clone(), r.clone())).collect();
        Polyhedron::from_h_rep(self.dim, h).expect("generator dimensions checked at construction")
    }

    pub fn unit_ball_enumerated(&self, caps: &Caps) -> Result<Polyhedron> {
        self.unit_ball().enumerate(caps)
    }

    /// `{x : p(x) = 0 and p(−x) = 0}` is `{0}`, decided by LP.
    pub fn zero_set_trivial(&self) -> bool {
        let mut h: Vec<Halfspace> =
            self.generators.iter().map(|g| Halfspace::new(g.clone(), Rational::zero())).collect();
        h.extend(self.generators.iter().map(|g| Halfspace::new(neg(g), Rational::zero())));
        let z = Polyhedron::from_h_rep(self.dim, h).expect("dimensions checked");
        (0..self.dim).all(|j| {
            let e = crate::rational::unit(self.dim, j);
            [e.clone(), neg(&e)].iter().all(|c| {
                let out = z.solve_lp(c).expect("dimensions checked");
                out.status == LpStatus::Optimal && out.optimum.as_ref().is_some_and(Zero::is_zero)
            })
        })
    }

    /// True when `p(x) = p(−x)` for all x, i.e. the generator set is symmetric as a gauge.
    pub fn is_symmetric(&self) -> bool {
        let c = self.conjugate();
        self.generators.iter().all(|g| c.dominates_generator(g)) && c.generators.iter().all(|g| self.dominates_generator(g))
    }

    /// `⟨g, x⟩ ≤ p(x)` for all x, i.e. `g ∈ conv(generators)`.
    fn dominates_generator(&self, g: &[Rational]) -> bool {
        if self.generators.iter().any(|a| a.as_slice() == g) {
            return true;
        }
        let shifted: Vec<Vector> = self.generators.iter().map(|a| sub(a, g)).collect();
        origin_in_hull(&shifted, self.dim)
    }
}

fn rank(rows: &[Vector], dim: usize) -> usize {
    let mut m: Vec<Vector> = rows.to_vec();
    let mut r = 0;
    for c in 0..dim {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &pivot;
                let pr = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

/// Feasibility of `λ ≥ 0, Σλ = 1, Σ λ_i g_i = 0`.
pub(crate) fn origin_in_hull(gens: &[Vector], dim: usize) -> bool {
    if gens.iter().any(|g| g.iter().all(Zero::is_zero)) {
        return true;
    }
    let k = gens.len();
    let one = Rational::one();
    let mut h = Vec::with_capacity(2 * dim + k + 2);
    for i in 0..k {
        let mut n = vec![Rational::zero(); k];
        n[i] = -one.clone();
        h.push(Halfspace::new(n, Rational::zero()));
    }
    h.push(Halfspace::new(vec![one.clone(); k], one.clone()));
    h.push(Halfspace::new(vec![-one.clone(); k], -one.clone()));
    for j in 0..dim {
        let row: Vector = gens.iter().map(|g| g[j].clone()).collect();
        h.push(Halfspace::new(neg(&row), Rational::zero()));
        h.push(Halfspace::new(row, Rational::zero()));
    }
    let p = Polyhedron::from_h_rep(k, h).expect("dimensions consistent");
    !p.is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, vec_i};

    fn p3() -> AsymNorm {
        AsymNorm::new(2, vec![vec_i(&[1, 0]), vec_i(&[0, -1]), vec_i(&[-1, 1])]).unwrap()
    }

    #[test]
    fn eval_examples() {
        let u = AsymNorm::u();
        assert_eq!(u.eval(&vec_i(&[3])).unwrap(), int(3));
        assert_eq!(u.eval(&vec_i(&[-5])).unwrap(), int(0));
        assert_eq!(p3().eval(&vec_i(&[0, 0])).unwrap(), int(0));
        assert_eq!(p3().eval(&vec_i(&[1, 2])).unwrap(), int(1));
        assert_eq!(p3().conjugate().eval(&vec_i(&[1, 2])).unwrap(), int(2));
        assert!(matches!(u.eval(&vec_i(&[1, 2])), Err(Error::Dimension { .. })));
    }

    #[test]
    fn conjugate_and_symmetrize_of_u() {
        let u = AsymNorm::u();
        for a in -3..=3 {
            let x = vec_i(&[a]);
            assert_eq!(u.conjugate().value(&x), int((-a).max(0)));
            assert_eq!(u.symmetrize().value(&x), int(a.abs()));
        }
        assert_eq!(u.conjugate().conjugate(), u);
    }

    #[test]
    fn quasi_metric_of_u() {
        let u = AsymNorm::u();
        assert_eq!(u.quasi_metric(&vec_i(&[0]), &vec_i(&[1])).unwrap(), int(1));
        assert_eq!(u.quasi_metric(&vec_i(&[1]), &vec_i(&[0])).unwrap(), int(0));
    }

    #[test]
    fn construction_rejects_bad_generators() {
        // Does not span.
        assert!(AsymNorm::new(2, vec![vec_i(&[1, 0]), vec_i(&[-1, 0])]).is_err());
        // Negative values: 0 not in hull.
        assert!(AsymNorm::new(1, vec![vec_i(&[1]), vec_i(&[2])]).is_err());
        assert!(AsymNorm::new(1, vec![vec_i(&[1]), vec_i(&[-2])]).is_ok());
    }

    #[test]
    fn zero_set_and_symmetry() {
        assert!(p3().zero_set_trivial());
        assert!(AsymNorm::l_inf(2).is_symmetric());
        assert!(!AsymNorm::u().is_symmetric());
        assert!(AsymNorm::u().symmetrize().is_symmetric());
    }

    #[test]
    fn unit_ball_of_u() {
        let b = AsymNorm::u().unit_ball_enumerated(&Caps::default()).unwrap();
        assert_eq!(b.v_rep().unwrap().vertices, vec![vec_i(&[1])]);
        assert_eq!(b.v_rep().unwrap().rays, vec![vec_i(&[-1])]);
    }
}
