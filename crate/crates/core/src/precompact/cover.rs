use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::polyhedral::{Caps, Halfspace, Polyhedron, VRep};
use crate::rational::{dot, int, l1, Matrix, Rational, Vector};

/// A nonempty polytope `conv(vertices)` with its inequalities and bounding box.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    pub dim: usize,
    pub h_rep: Vec<Halfspace>,
    pub vertices: Vec<Vector>,
    pub lo: Vector,
    pub hi: Vector,
}

impl Polytope {
    pub fn from_vertices(dim: usize, vertices: Vec<Vector>, caps: &Caps) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Domain("polytope needs at least one vertex".into()));
        }
        let p = Polyhedron::from_v_rep(dim, VRep { vertices: vertices.clone(), rays: vec![] }, caps)?;
        let lo = (0..dim).map(|i| vertices.iter().map(|v| v[i].clone()).min().unwrap()).collect();
        let hi = (0..dim).map(|i| vertices.iter().map(|v| v[i].clone()).max().unwrap()).collect();
        Ok(Polytope { dim, h_rep: p.h_rep().to_vec(), vertices, lo, hi })
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.h_rep.iter().all(|h| h.contains(x))
    }

    /// A point of the polytope inside the box, if any.
    fn point_in_box(&self, lo: &[Rational], hi: &[Rational]) -> Option<Vector> {
        if self.h_rep.iter().any(|h| box_min(&h.normal, lo, hi) > h.offset) {
            return None;
        }
        let center = midpoint(lo, hi);
        if self.contains(&center) {
            return Some(center);
        }
        let mut rows = self.h_rep.clone();
        for i in 0..self.dim {
            let e = crate::rational::unit(self.dim, i);
            rows.push(Halfspace::new(crate::rational::neg(&e), -&lo[i]));
            rows.push(Halfspace::new(e, hi[i].clone()));
        }
        let p = Polyhedron::from_h_rep(self.dim, rows).ok()?;
        let out = p.solve_lp(&vec![Rational::zero(); self.dim]).ok()?;
        if out.is_optimal() {
            out.witness
        } else {
            None
        }
    }
}

fn box_min(a: &[Rational], lo: &[Rational], hi: &[Rational]) -> Rational {
    a.iter()
        .zip(lo.iter().zip(hi))
        .map(|(c, (l, h))| if c.is_negative() { c * h } else { c * l })
        .sum()
}

fn box_max(a: &[Rational], lo: &[Rational], hi: &[Rational]) -> Rational {
    a.iter()
        .zip(lo.iter().zip(hi))
        .map(|(c, (l, h))| if c.is_negative() { c * l } else { c * h })
        .sum()
}

fn midpoint(lo: &[Rational], hi: &[Rational]) -> Vector {
    let half = Rational::new(1.into(), 2.into());
    lo.iter().zip(hi).map(|(l, h)| (l + h) * &half).collect()
}

fn widest(lo: &[Rational], hi: &[Rational]) -> (usize, Rational) {
    let mut best = (0, &hi[0] - &lo[0]);
    for i in 1..lo.len() {
        let w = &hi[i] - &lo[i];
        if w > best.1 {
            best = (i, w);
        }
    }
    best
}

/// Points of `q` such that every point of `q` is within ℓ∞ distance `delta` of one of them.
///
/// The bounding box is split until a cell is empty, contained in `q` (then a
/// uniform grid of cell centers is emitted), or narrower than `delta` (then an
/// LP picks a point of the cell inside `q`).
pub fn cover_polytope(q: &Polytope, delta: &Rational, max_points: usize) -> Result<Vec<Vector>> {
    if !delta.is_positive() {
        return Err(Error::Input("grid resolution must be positive".into()));
    }
    let mut out: Vec<Vector> = Vec::new();
    let mut stack = vec![(q.lo.clone(), q.hi.clone())];
    while let Some((lo, hi)) = stack.pop() {
        if q.h_rep.iter().any(|h| box_min(&h.normal, &lo, &hi) > h.offset) {
            continue;
        }
        if q.h_rep.iter().all(|h| box_max(&h.normal, &lo, &hi) <= h.offset) {
            emit_grid(&lo, &hi, delta, &mut out);
        } else if widest(&lo, &hi).1 <= *delta {
            if let Some(p) = q.point_in_box(&lo, &hi) {
                out.push(p);
            }
        } else {
            let (i, _) = widest(&lo, &hi);
            let mid = (&lo[i] + &hi[i]) / int(2);
            let mut hi_a = hi.clone();
            hi_a[i] = mid.clone();
            let mut lo_b = lo.clone();
            lo_b[i] = mid;
            stack.push((lo_b, hi));
            stack.push((lo, hi_a));
        }
        if out.len() > max_points {
            return Err(Error::Capacity(format!("polytope cover exceeds {max_points} points")));
        }
    }
    Ok(out)
}

fn emit_grid(lo: &[Rational], hi: &[Rational], delta: &Rational, out: &mut Vec<Vector>) {
    let counts: Vec<usize> = lo
        .iter()
        .zip(hi)
        .map(|(l, h)| {
            let k = ((h - l) / delta).ceil().to_integer();
            usize::try_from(k).unwrap_or(usize::MAX).max(1)
        })
        .collect();
    let mut idx = vec![0usize; lo.len()];
    loop {
        let p: Vector = (0..lo.len())
            .map(|i| {
                let k = int(counts[i] as i64);
                let w = (&hi[i] - &lo[i]) / &k;
                &lo[i] + &w * (int(idx[i] as i64) + Rational::new(1.into(), 2.into()))
            })
            .collect();
        out.push(p);
        let mut i = 0;
        loop {
            if i == lo.len() {
                return;
            }
            idx[i] += 1;
            if idx[i] < counts[i] {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// A net for the image of `Q1 × Q2` under a bilinear map, with preimages.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageNet {
    pub eps: Rational,
    pub preimages: Vec<(Vector, Vector)>,
    pub images: Vec<Vector>,
    /// Number of box pairs accepted before image-space pruning.
    pub leaves: usize,
}

fn corners(lo: &[Rational], hi: &[Rational]) -> Vec<Vector> {
    let mut out: Vec<Vector> = vec![Vec::new()];
    for (l, h) in lo.iter().zip(hi) {
        let mut next = Vec::with_capacity(out.len() * 2);
        for c in &out {
            let mut a = c.clone();
            a.push(l.clone());
            next.push(a);
            if h != l {
                let mut b = c.clone();
                b.push(h.clone());
                next.push(b);
            }
        }
        out = next;
    }
    out
}

fn bilinear_value(m: &Matrix, x: &[Rational], y: &[Rational]) -> Rational {
    let mut s = Rational::zero();
    for (xi, row) in x.iter().zip(m) {
        if !xi.is_zero() {
            s += xi * dot(row, y);
        }
    }
    s
}

/// Builds points `(x_k, y_k) ∈ Q1 × Q2` whose images `T(x_k, y_k)` form an
/// `eps`-net of `T(Q1 × Q2)` for the symmetric polyhedral gauge with
/// generators `gauge`.
///
/// `tensor[k]` is the `d1 × d2` matrix of the k-th output coordinate. Box pairs
/// are split until the exact corner bound on `gauge(T(x,y) − T(r1,r2))` is at
/// most `eps/2`; the surviving images are then thinned on an ℓ∞ grid of width
/// `eps / (2·max‖g‖₁)`, adding at most `eps/2`.
pub fn bilinear_image_net(
    tensor: &[Matrix],
    gauge: &[Vector],
    q1: &Polytope,
    q2: &Polytope,
    eps: &Rational,
    max_leaves: usize,
) -> Result<ImageNet> {
    if !eps.is_positive() {
        return Err(Error::Input("eps must be positive".into()));
    }
    let t = tensor.len();
    let (d1, d2) = (q1.dim, q2.dim);
    let forms: Vec<Matrix> = gauge
        .iter()
        .map(|g| {
            (0..d1)
                .map(|a| (0..d2).map(|b| (0..t).map(|k| &g[k] * &tensor[k][a][b]).sum()).collect())
                .collect()
        })
        .collect();
    let half_eps = eps / int(2);
    let mut leaves: Vec<(Vector, Vector)> = Vec::new();
    let mut stack = vec![(q1.lo.clone(), q1.hi.clone(), q2.lo.clone(), q2.hi.clone())];
    while let Some((lo1, hi1, lo2, hi2)) = stack.pop() {
        let Some(r1) = q1.point_in_box(&lo1, &hi1) else { continue };
        let Some(r2) = q2.point_in_box(&lo2, &hi2) else { continue };
        let c1 = corners(&lo1, &hi1);
        let c2 = corners(&lo2, &hi2);
        let mut err = Rational::zero();
        let mut sens_x = vec![Rational::zero(); d1];
        let mut sens_y = vec![Rational::zero(); d2];
        for f in &forms {
            let base = bilinear_value(f, &r1, &r2);
            let fy: Vec<Vector> = c2.iter().map(|y| f.iter().map(|row| dot(row, y)).collect()).collect();
            for x in &c1 {
                for fyv in &fy {
                    let v = (dot(x, fyv) - &base).abs();
                    if v > err {
                        err = v;
                    }
                }
            }
            for fyv in &fy {
                for a in 0..d1 {
                    let s = fyv[a].abs();
                    if s > sens_x[a] {
                        sens_x[a] = s;
                    }
                }
            }
            for x in &c1 {
                for b in 0..d2 {
                    let s: Rational = (0..d1).map(|a| &x[a] * &f[a][b]).sum::<Rational>().abs();
                    if s > sens_y[b] {
                        sens_y[b] = s;
                    }
                }
            }
        }
        if err <= half_eps {
            leaves.push((r1, r2));
            if leaves.len() > max_leaves {
                return Err(Error::Capacity(format!("image net exceeds {max_leaves} box pairs")));
            }
            continue;
        }
        let mut best: (bool, usize, Rational) = (true, 0, -Rational::one());
        for a in 0..d1 {
            let c = &sens_x[a] * (&hi1[a] - &lo1[a]);
            if c > best.2 {
                best = (true, a, c);
            }
        }
        for b in 0..d2 {
            let c = &sens_y[b] * (&hi2[b] - &lo2[b]);
            if c > best.2 {
                best = (false, b, c);
            }
        }
        let (first, i, _) = best;
        let (lo, hi) = if first { (&lo1, &hi1) } else { (&lo2, &hi2) };
        let mid = (&lo[i] + &hi[i]) / int(2);
        let mut hi_a = hi.clone();
        hi_a[i] = mid.clone();
        let mut lo_b = lo.clone();
        lo_b[i] = mid;
        if first {
            stack.push((lo_b, hi1.clone(), lo2.clone(), hi2.clone()));
            stack.push((lo1, hi_a, lo2, hi2));
        } else {
            stack.push((lo1.clone(), hi1.clone(), lo_b, hi2.clone()));
            stack.push((lo1, hi1, lo2, hi_a));
        }
    }

    let kz = gauge.iter().map(|g| l1(g)).max().unwrap_or_else(Rational::zero);
    let n_leaves = leaves.len();
    let mut preimages = Vec::new();
    let mut images: Vec<Vector> = Vec::new();
    let mut seen: HashMap<Vec<BigInt>, ()> = HashMap::new();
    let width = if kz.is_zero() { None } else { Some(eps / (int(2) * &kz)) };
    for (x, y) in leaves {
        let z: Vector = tensor.iter().map(|m| bilinear_value(m, &x, &y)).collect();
        if let Some(w) = &width {
            let key: Vec<BigInt> = z.iter().map(|v| (v / w).floor().to_integer()).collect();
            if seen.insert(key, ()).is_some() {
                continue;
            }
        } else if !images.is_empty() {
            continue;
        }
        preimages.push((x, y));
        images.push(z);
    }
    Ok(ImageNet { eps: eps.clone(), preimages, images, leaves: n_leaves })
}
