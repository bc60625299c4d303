//! Exact rational polyhedra: LP, vertex/ray enumeration, polars and recession cones.

mod dd;
mod lp;

pub use lp::{LpOutcome, LpStatus};

use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::rational::{dot, is_zero_vec, primitive, scale, Rational, Vector};

/// Limits that keep double description at desk scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_dim: usize,
    pub max_generators: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_dim: 6, max_generators: 32 }
    }
}

impl Caps {
    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if dim > self.max_dim {
            return Err(Error::Capacity(format!("dimension {dim} exceeds cap {}", self.max_dim)));
        }
        Ok(())
    }

    pub fn check_generators(&self, n: usize) -> Result<()> {
        if n > self.max_generators {
            return Err(Error::Capacity(format!(
                "{n} generators exceed cap {}",
                self.max_generators
            )));
        }
        Ok(())
    }
}

/// The inequality `normal · x ≤ offset`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Halfspace {
    pub normal: Vector,
    pub offset: Rational,
}

impl Halfspace {
    pub fn new(normal: Vector, offset: Rational) -> Self {
        Halfspace { normal, offset }
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        dot(&self.normal, x) <= self.offset
    }
}

/// `conv(vertices) + cone(rays)`. Lines appear as a pair of opposite rays.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VRep {
    pub vertices: Vec<Vector>,
    pub rays: Vec<Vector>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polyhedron {
    dim: usize,
    h_rep: Vec<Halfspace>,
    v_rep: Option<VRep>,
}

impl Polyhedron {
    pub fn from_h_rep(dim: usize, h_rep: Vec<Halfspace>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Input("polyhedron dimension must be positive".into()));
        }
        for h in &h_rep {
            check_dim(dim, h.normal.len())?;
        }
        Ok(Polyhedron { dim, h_rep, v_rep: None })
    }

    /// Builds a polyhedron from a V-representation, computing its H-representation.
    pub fn from_v_rep(dim: usize, v_rep: VRep, caps: &Caps) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Input("polyhedron dimension must be positive".into()));
        }
        for v in v_rep.vertices.iter().chain(&v_rep.rays) {
            check_dim(dim, v.len())?;
        }
        if v_rep.rays.iter().any(|r| is_zero_vec(r)) {
            return Err(Error::Input("rays must be nonzero".into()));
        }
        let h_rep = hull(dim, &v_rep, caps)?;
        Ok(Polyhedron { dim, h_rep, v_rep: Some(v_rep) })
    }

    /// The whole space `Q^dim`.
    pub fn full(dim: usize) -> Self {
        Polyhedron { dim, h_rep: Vec::new(), v_rep: None }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn h_rep(&self) -> &[Halfspace] {
        &self.h_rep
    }

    pub fn v_rep(&self) -> Option<&VRep> {
        self.v_rep.as_ref()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim && self.h_rep.iter().all(|h| h.contains(x))
    }

    pub fn solve_lp(&self, objective: &[Rational]) -> Result<LpOutcome> {
        check_dim(self.dim, objective.len())?;
        Ok(lp::maximize(objective, &self.h_rep, self.dim))
    }

    pub fn is_empty(&self) -> bool {
        match &self.v_rep {
            Some(v) => v.vertices.is_empty(),
            None => lp::maximize(&vec![Rational::zero(); self.dim], &self.h_rep, self.dim).status
                == LpStatus::Infeasible,
        }
    }

    /// Returns the same set with its V-representation computed by double description.
    pub fn enumerate(&self, caps: &Caps) -> Result<Polyhedron> {
        if self.v_rep.is_some() {
            return Ok(self.clone());
        }
        caps.check_dim(self.dim)?;
        caps.check_generators(self.h_rep.len())?;
        let n = self.dim;
        let mut rows: Vec<Vector> = self
            .h_rep
            .iter()
            .map(|h| {
                let mut r = h.normal.clone();
                r.push(-&h.offset);
                r
            })
            .collect();
        let mut t_row = vec![Rational::zero(); n + 1];
        t_row[n] = -Rational::one();
        rows.push(t_row);
        let g = dd::cone_generators(n + 1, &rows);
        let mut vertices = Vec::new();
        let mut rays = Vec::new();
        for r in g.rays {
            if r[n].is_zero() {
                rays.push(r[..n].to_vec());
            } else {
                let t = r[n].recip();
                vertices.push(scale(&t, &r[..n]));
            }
        }
        if vertices.is_empty() {
            rays.clear();
        } else {
            for l in g.lineality {
                let l = primitive(&l[..n]);
                rays.push(l.iter().map(|x| -x).collect());
                rays.push(l);
            }
        }
        Ok(Polyhedron { dim: n, h_rep: self.h_rep.clone(), v_rep: Some(VRep { vertices, rays }) })
    }

    /// `{r : a·r ≤ 0 for every inequality}`.
    pub fn recession_cone(&self) -> Polyhedron {
        let h_rep = self
            .h_rep
            .iter()
            .map(|h| Halfspace::new(h.normal.clone(), Rational::zero()))
            .collect();
        Polyhedron { dim: self.dim, h_rep, v_rep: None }
    }

    /// `{φ : φ·v ≤ 1 for vertices, φ·r ≤ 0 for rays}`; requires `0` in the set.
    pub fn polar(&self) -> Result<Polyhedron> {
        let v = self
            .v_rep
            .as_ref()
            .ok_or_else(|| Error::Input("polar requires a V-representation".into()))?;
        if !self.contains(&vec![Rational::zero(); self.dim]) {
            return Err(Error::Domain("polar requires 0 in the region".into()));
        }
        let mut h_rep: Vec<Halfspace> =
            v.vertices.iter().map(|x| Halfspace::new(x.clone(), Rational::one())).collect();
        h_rep.extend(v.rays.iter().map(|r| Halfspace::new(r.clone(), Rational::zero())));
        Ok(Polyhedron { dim: self.dim, h_rep, v_rep: None })
    }

    /// Every vertex satisfies the inequalities and every ray lies in the recession cone.
    pub fn representations_consistent(&self) -> bool {
        let Some(v) = &self.v_rep else { return true };
        v.vertices.iter().all(|x| self.contains(x))
            && v.rays.iter().all(|r| {
                !is_zero_vec(r) && self.h_rep.iter().all(|h| !dot(&h.normal, r).is_positive())
            })
    }
}

/// Facet inequalities (and equality pairs) of `conv(V) + cone(R)`.
fn hull(dim: usize, v: &VRep, caps: &Caps) -> Result<Vec<Halfspace>> {
    if v.vertices.is_empty() {
        return Err(Error::Input("V-representation needs at least one vertex".into()));
    }
    caps.check_dim(dim)?;
    caps.check_generators(v.vertices.len() + v.rays.len())?;
    let mut rows: Vec<Vector> = v
        .vertices
        .iter()
        .map(|x| {
            let mut r = x.clone();
            r.push(-Rational::one());
            r
        })
        .collect();
    for r in &v.rays {
        let mut row = r.clone();
        row.push(Rational::zero());
        rows.push(row);
    }
    let g = dd::cone_generators(dim + 1, &rows);
    let mut out = Vec::new();
    for r in g.rays {
        if is_zero_vec(&r[..dim]) {
            continue;
        }
        out.push(Halfspace::new(r[..dim].to_vec(), r[dim].clone()));
    }
    for l in g.lineality {
        out.push(Halfspace::new(l[..dim].iter().map(|x| -x).collect(), -&l[dim]));
        out.push(Halfspace::new(l[..dim].to_vec(), l[dim].clone()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, vec_i};

    fn hs(normal: &[i64], offset: i64) -> Halfspace {
        Halfspace::new(vec_i(normal), int(offset))
    }

    fn square() -> Polyhedron {
        Polyhedron::from_h_rep(2, vec![hs(&[1, 0], 1), hs(&[-1, 0], 1), hs(&[0, 1], 1), hs(&[0, -1], 1)])
            .unwrap()
    }

    fn sorted(mut v: Vec<Vector>) -> Vec<Vector> {
        v.sort();
        v
    }

    #[test]
    fn lp_examples() {
        let p = Polyhedron::from_h_rep(1, vec![hs(&[1], 1)]).unwrap();
        let out = p.solve_lp(&vec_i(&[1])).unwrap();
        assert_eq!((out.status, out.optimum), (LpStatus::Optimal, Some(int(1))));
        let out = p.solve_lp(&vec_i(&[-1])).unwrap();
        assert_eq!((out.status, out.witness), (LpStatus::Unbounded, Some(vec_i(&[-1]))));
        let out = square().solve_lp(&vec_i(&[1, 1])).unwrap();
        assert_eq!(out.optimum, Some(int(2)));
        assert_eq!(out.witness, Some(vec_i(&[1, 1])));
        assert!(matches!(p.solve_lp(&vec_i(&[1, 1])), Err(Error::Dimension { .. })));
    }

    #[test]
    fn enumerate_examples() {
        let caps = Caps::default();
        let p = Polyhedron::from_h_rep(1, vec![hs(&[1], 1)]).unwrap().enumerate(&caps).unwrap();
        let v = p.v_rep().unwrap();
        assert_eq!(v.vertices, vec![vec_i(&[1])]);
        assert_eq!(v.rays, vec![vec_i(&[-1])]);

        let s = square().enumerate(&caps).unwrap();
        let v = s.v_rep().unwrap();
        assert_eq!(
            sorted(v.vertices.clone()),
            vec![vec_i(&[-1, -1]), vec_i(&[-1, 1]), vec_i(&[1, -1]), vec_i(&[1, 1])]
        );
        assert!(v.rays.is_empty());

        let big = Polyhedron::from_h_rep(7, vec![]).unwrap();
        assert!(matches!(big.enumerate(&caps), Err(Error::Capacity(_))));
    }

    #[test]
    fn full_space_and_empty() {
        let caps = Caps::default();
        let f = Polyhedron::full(2).enumerate(&caps).unwrap();
        let v = f.v_rep().unwrap();
        assert_eq!(v.vertices, vec![vec_i(&[0, 0])]);
        assert_eq!(v.rays.len(), 4);
        let e = Polyhedron::from_h_rep(1, vec![hs(&[1], 0), hs(&[-1], -1)]).unwrap();
        assert!(e.is_empty());
        assert!(e.enumerate(&caps).unwrap().v_rep().unwrap().vertices.is_empty());
    }

    #[test]
    fn polar_examples() {
        let caps = Caps::default();
        let half = Polyhedron::from_h_rep(1, vec![hs(&[1], 1)]).unwrap().enumerate(&caps).unwrap();
        let pol = half.polar().unwrap().enumerate(&caps).unwrap();
        assert_eq!(sorted(pol.v_rep().unwrap().vertices.clone()), vec![vec_i(&[0]), vec_i(&[1])]);

        let cross = square().enumerate(&caps).unwrap().polar().unwrap().enumerate(&caps).unwrap();
        assert_eq!(
            sorted(cross.v_rep().unwrap().vertices.clone()),
            vec![vec_i(&[-1, 0]), vec_i(&[0, -1]), vec_i(&[0, 1]), vec_i(&[1, 0])]
        );

        let full = Polyhedron::full(2).enumerate(&caps).unwrap().polar().unwrap().enumerate(&caps).unwrap();
        assert_eq!(full.v_rep().unwrap().vertices, vec![vec_i(&[0, 0])]);
        assert!(full.v_rep().unwrap().rays.is_empty());

        let off = Polyhedron::from_h_rep(1, vec![hs(&[-1], -1)]).unwrap().enumerate(&caps).unwrap();
        assert!(matches!(off.polar(), Err(Error::Domain(_))));
    }

    #[test]
    fn recession_examples() {
        let caps = Caps::default();
        let p = Polyhedron::from_h_rep(2, vec![hs(&[1, 0], 1), hs(&[1, -1], 1)]).unwrap();
        let rc = p.recession_cone().enumerate(&caps).unwrap();
        let rays = &rc.v_rep().unwrap().rays;
        // Generators (0,1) and (-1,-1) per the ray-membership oracle: x + t·r stays feasible.
        assert_eq!(rays.len(), 2);
        for r in rays {
            for t in [1i64, 10, 1000] {
                assert!(p.contains(&crate::rational::axpy(&vec_i(&[0, 0]), &int(t), r)));
            }
        }
        assert!(rays.contains(&vec_i(&[0, 1])) && rays.contains(&vec_i(&[-1, -1])));
        let sq = square().recession_cone().enumerate(&caps).unwrap();
        assert!(sq.v_rep().unwrap().rays.is_empty());
    }

    #[test]
    fn hull_round_trip() {
        let caps = Caps::default();
        let p = Polyhedron::from_h_rep(2, vec![hs(&[1, 0], 1), hs(&[0, -1], 1), hs(&[-1, 1], 1)])
            .unwrap()
            .enumerate(&caps)
            .unwrap();
        assert!(p.representations_consistent());
        let q = Polyhedron::from_v_rep(2, p.v_rep().unwrap().clone(), &caps).unwrap();
        for x in -4..=4 {
            for y in -4..=4 {
                let pt = vec_i(&[x, y]);
                assert_eq!(p.contains(&pt), q.contains(&pt), "{x},{y}");
            }
        }
    }
}
