//! Double description for polyhedral cones `{y : h·y ≤ 0 for every row h}`.

use num_traits::{Signed, Zero};

use crate::rational::{dot, primitive, unit, Rational, Vector};

/// Generators of a cone: `cone = span(lineality) + cone(rays)`, rays extreme
/// modulo the lineality space.
#[derive(Debug, Clone, Default)]
pub(crate) struct ConeGenerators {
    pub lineality: Vec<Vector>,
    pub rays: Vec<Vector>,
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn subset_of(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & !b == 0)
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

struct Ray {
    v: Vector,
    zeros: Bits,
}

pub(crate) fn cone_generators(dim: usize, rows: &[Vector]) -> ConeGenerators {
    let m = rows.len();
    let mut lineality: Vec<Vector> = (0..dim).map(|i| unit(dim, i)).collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (t, h) in rows.iter().enumerate() {
        if let Some(k) = lineality.iter().position(|l| !dot(h, l).is_zero()) {
            let pivot = lineality.swap_remove(k);
            let hp = dot(h, &pivot);
            for l in lineality.iter_mut() {
                let hl = dot(h, l);
                if !hl.is_zero() {
                    let f = &hl / &hp;
                    *l = primitive(&l.iter().zip(&pivot).map(|(a, b)| a - &f * b).collect::<Vector>());
                }
            }
            for r in rays.iter_mut() {
                let hr = dot(h, &r.v);
                if !hr.is_zero() {
                    let f = &hr / &hp;
                    r.v = primitive(&r.v.iter().zip(&pivot).map(|(a, b)| a - &f * b).collect::<Vector>());
                }
                r.zeros.set(t);
            }
            // Every earlier row vanishes on a lineality vector.
            let oriented = if hp.is_positive() { pivot.iter().map(|x| -x).collect() } else { pivot };
            let mut zeros = Bits::new(m);
            for s in 0..t {
                zeros.set(s);
            }
            rays.push(Ray { v: primitive(&oriented), zeros });
            continue;
        }

        let vals: Vec<Rational> = rays.iter().map(|r| dot(h, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        if pos.is_empty() {
            for (r, v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    r.zeros.set(t);
                }
            }
            continue;
        }
        let negs: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        let min_common = dim.saturating_sub(lineality.len()).saturating_sub(2);
        let mut fresh: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &q in &negs {
                let common = rays[p].zeros.and(&rays[q].zeros);
                if common.count() < min_common {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .all(|r| r == p || r == q || !common.subset_of(&rays[r].zeros));
                if !adjacent {
                    continue;
                }
                let v: Vector = rays[q]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(a, b)| &vals[p] * a - &vals[q] * b)
                    .collect();
                let mut zeros = common;
                zeros.set(t);
                fresh.push(Ray { v: primitive(&v), zeros });
            }
        }
        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_positive() {
                continue;
            }
            if vals[i].is_zero() {
                r.zeros.set(t);
            }
            kept.push(r);
        }
        kept.extend(fresh);
        rays = kept;
    }

    ConeGenerators { lineality, rays: rays.into_iter().map(|r| r.v).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::vec_i;

    #[test]
    fn orthant() {
        let rows = vec![vec_i(&[-1, 0]), vec_i(&[0, -1])];
        let g = cone_generators(2, &rows);
        assert!(g.lineality.is_empty());
        let mut rays = g.rays.clone();
        rays.sort();
        assert_eq!(rays, vec![vec_i(&[0, 1]), vec_i(&[1, 0])]);
    }

    #[test]
    fn halfspace_keeps_lineality() {
        let g = cone_generators(3, &[vec_i(&[1, 1, 0])]);
        assert_eq!(g.lineality.len(), 2);
        assert_eq!(g.rays.len(), 1);
        assert!(dot(&vec_i(&[1, 1, 0]), &g.rays[0]).is_negative());
    }

    #[test]
    fn square_cone_has_four_rays() {
        // Homogenized square |x|,|y| ≤ t.
        let rows = vec![
            vec_i(&[1, 0, -1]),
            vec_i(&[-1, 0, -1]),
            vec_i(&[0, 1, -1]),
            vec_i(&[0, -1, -1]),
            vec_i(&[0, 0, -1]),
        ];
        let g = cone_generators(3, &rows);
        assert!(g.lineality.is_empty());
        assert_eq!(g.rays.len(), 4);
    }
}
