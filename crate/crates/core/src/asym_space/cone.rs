use num_traits::Zero;

use super::{AsymNorm, QuasiMetric};
use crate::error::{check_dim, Error, Result};
use crate::polyhedral::{Halfspace, LpStatus, Polyhedron};
use crate::rational::{neg, sub, unit, Extended, Rational, Vector};

/// A polyhedral cone `C = {x : a·x ≤ 0}` with an asymmetric norm restricted to it.
#[derive(Debug, Clone, PartialEq)]
pub struct NormedCone {
    cone: Polyhedron,
    norm: AsymNorm,
    t1: bool,
}

impl NormedCone {
    pub fn new(cone: Polyhedron, norm: AsymNorm) -> Result<Self> {
        check_dim(cone.dim(), norm.dim())?;
        if cone.h_rep().iter().any(|h| !h.offset.is_zero()) {
            return Err(Error::Input("cone inequalities must be homogeneous".into()));
        }
        let t1 = norm_vanishes_only_at_origin(&cone, &norm);
        Ok(NormedCone { cone, norm, t1 })
    }

    pub fn cone(&self) -> &Polyhedron {
        &self.cone
    }

    pub fn norm(&self) -> &AsymNorm {
        &self.norm
    }

    /// Whether `p(x) = 0` forces `x = 0` on the cone.
    pub fn is_t1(&self) -> bool {
        self.t1
    }

    /// `p(y − x)` when `y − x ∈ C`, else `∞`.
    pub fn distance(&self, x: &[Rational], y: &[Rational]) -> Result<Extended> {
        check_dim(self.cone.dim(), x.len())?;
        check_dim(self.cone.dim(), y.len())?;
        Ok(self.dist(x, y))
    }
}

impl QuasiMetric for NormedCone {
    fn dist(&self, x: &[Rational], y: &[Rational]) -> Extended {
        let z = sub(y, x);
        if self.cone.contains(&z) {
            Extended::Finite(self.norm.value(&z))
        } else {
            Extended::Infinite
        }
    }
}

fn norm_vanishes_only_at_origin(cone: &Polyhedron, p: &AsymNorm) -> bool {
    let mut h: Vec<Halfspace> = cone.h_rep().to_vec();
    h.extend(p.generators().iter().map(|g| Halfspace::new(g.clone(), Rational::zero())));
    let z = Polyhedron::from_h_rep(cone.dim(), h).expect("dimensions checked");
    (0..cone.dim()).all(|j| {
        let e = unit(cone.dim(), j);
        [e.clone(), neg(&e)].iter().all(|c| {
            let out = z.solve_lp(c).expect("dimensions checked");
            out.status == LpStatus::Optimal && out.optimum.as_ref().is_some_and(Zero::is_zero)
        })
    })
}

/// Reachability `x ⟶ y ⇔ d(x, y) < ∞` on a finite sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreorderReport {
    pub reach: Vec<Vec<bool>>,
    pub symmetric: bool,
    /// Classes of mutually reachable points, ordered by smallest member.
    pub classes: Vec<Vec<usize>>,
}

impl PreorderReport {
    /// Pairs `(i, j)` with `i ⟶ j` but not `j ⟶ i`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.reach.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.reach[i][j] && !self.reach[j][i] {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

pub fn finiteness_classes(points: &[Vector], dist: &dyn QuasiMetric) -> PreorderReport {
    let n = points.len();
    let reach: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| dist.dist(&points[i], &points[j]).is_finite()).collect())
        .collect();
    let symmetric = (0..n).all(|i| (0..n).all(|j| reach[i][j] == reach[j][i]));
    let mut assigned = vec![false; n];
    let mut classes = Vec::new();
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let class: Vec<usize> = (i..n).filter(|&j| !assigned[j] && reach[i][j] && reach[j][i]).collect();
        for &j in &class {
            assigned[j] = true;
        }
        classes.push(class);
    }
    PreorderReport { reach, symmetric, classes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asym_space::FnMetric;
    use num_traits::Signed;
    use crate::rational::{int, vec_i};

    fn nonneg_reals() -> NormedCone {
        let cone = Polyhedron::from_h_rep(1, vec![Halfspace::new(vec_i(&[-1]), int(0))]).unwrap();
        NormedCone::new(cone, AsymNorm::u()).unwrap()
    }

    #[test]
    fn cone_distance() {
        let c = nonneg_reals();
        assert!(c.is_t1());
        assert_eq!(c.distance(&vec_i(&[1]), &vec_i(&[3])).unwrap(), Extended::Finite(int(2)));
        assert_eq!(c.distance(&vec_i(&[3]), &vec_i(&[1])).unwrap(), Extended::Infinite);
        assert_eq!(c.distance(&vec_i(&[5]), &vec_i(&[5])).unwrap(), Extended::zero());
    }

    #[test]
    fn t1_flag_detects_vanishing_direction() {
        let cone = Polyhedron::from_h_rep(1, vec![Halfspace::new(vec_i(&[1]), int(0))]).unwrap();
        assert!(!NormedCone::new(cone, AsymNorm::u()).unwrap().is_t1());
    }

    #[test]
    fn preorders() {
        let c = nonneg_reals();
        let pts = vec![vec_i(&[1]), vec_i(&[3])];
        let r = finiteness_classes(&pts, &c);
        assert!(!r.symmetric);
        assert_eq!(r.strict_pairs(), vec![(0, 1)]);

        let discrete = FnMetric(|x: &[Rational], y: &[Rational]| {
            if (x[0].clone() - y[0].clone()).abs() < int(5) {
                Extended::Finite((x[0].clone() - y[0].clone()).abs())
            } else {
                Extended::Infinite
            }
        });
        let pts = vec![vec_i(&[0]), vec_i(&[1]), vec_i(&[10]), vec_i(&[12])];
        let r = finiteness_classes(&pts, &discrete);
        assert!(r.symmetric);
        assert_eq!(r.classes, vec![vec![0, 1], vec![2, 3]]);

        let r = finiteness_classes(&[vec_i(&[7])], &c);
        assert_eq!(r.classes, vec![vec![0]]);
    }
}
