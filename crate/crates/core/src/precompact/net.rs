use std::cmp::Ordering;

use crate::asym_space::{require_positive, QuasiMetric};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::rational::{to_f64_vec, Extended, Rational, Vector};

/// Whether net points must belong to the covered set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetLocation {
    Inside,
    Outside,
}

/// A membership oracle for the covered set.
pub type Membership<'a> = &'a (dyn Fn(&[Rational]) -> bool + Sync);

/// `covered[i]` lies in the ball `B_d(net[witness[i]], eps) = {w : d(z, w) ≤ eps}`.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsNetCertificate {
    pub eps: Rational,
    pub net: Vec<Vector>,
    pub covered: Vec<Vector>,
    pub witness: Vec<usize>,
    pub location: NetLocation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    /// Largest recorded witness distance.
    pub radius: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoverageFailure {
    Malformed(String),
    TooFar { point: usize, center: usize, distance: Extended },
    CenterOutside { center: usize },
}

impl EpsNetCertificate {
    /// Re-evaluates every witness from scratch. `Inside` certificates also need
    /// a membership oracle for the target set.
    pub fn verify(
        &self,
        d: &dyn QuasiMetric,
        location: NetLocation,
        member: Option<Membership<'_>>,
    ) -> std::result::Result<CoverageReport, CoverageFailure> {
        if self.witness.len() != self.covered.len() {
            return Err(CoverageFailure::Malformed("one witness per covered point required".into()));
        }
        if location == NetLocation::Inside {
            let Some(member) = member else {
                return Err(CoverageFailure::Malformed("inside verification needs a membership oracle".into()));
            };
            if self.location != NetLocation::Inside {
                return Err(CoverageFailure::Malformed("certificate does not claim an inside net".into()));
            }
            if let Some(c) = self.net.iter().position(|z| !member(z)) {
                return Err(CoverageFailure::CenterOutside { center: c });
            }
        }
        let mut radius = Rational::from_integer(0.into());
        for (i, (w, &k)) in self.covered.iter().zip(&self.witness).enumerate() {
            let Some(z) = self.net.get(k) else {
                return Err(CoverageFailure::Malformed(format!("witness index {k} out of range")));
            };
            let dist = d.dist(z, w);
            match &dist {
                Extended::Finite(v) if v <= &self.eps => {
                    if v > &radius {
                        radius = v.clone();
                    }
                }
                _ => return Err(CoverageFailure::TooFar { point: i, center: k, distance: dist }),
            }
        }
        Ok(CoverageReport { radius })
    }
}

/// Finds, for each point, a center within `eps`. Float estimates only order the exact search.
pub fn find_witnesses(
    net: &[Vector],
    points: &[Vector],
    d: &dyn QuasiMetric,
    eps: &Rational,
    exec: Exec,
) -> std::result::Result<Vec<usize>, usize> {
    let approx_net: Vec<Vec<f64>> = net.iter().map(|z| to_f64_vec(z)).collect();
    let found = exec.map(points.len(), |i| {
        let w = &points[i];
        let aw = to_f64_vec(w);
        let mut order: Vec<(f64, usize)> = Vec::with_capacity(net.len());
        let mut guided = true;
        for (k, az) in approx_net.iter().enumerate() {
            match d.approx_dist(az, &aw) {
                Some(v) => order.push((v, k)),
                None => {
                    guided = false;
                    break;
                }
            }
        }
        if guided {
            order.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal).then(a.1.cmp(&b.1)));
            for &(_, k) in &order {
                if d.dist(&net[k], w).le_rational(eps) {
                    return Some(k);
                }
            }
            None
        } else {
            (0..net.len()).find(|&k| d.dist(&net[k], w).le_rational(eps))
        }
    });
    found.into_iter().enumerate().map(|(i, k)| k.ok_or(i)).collect()
}

/// Certifies that `net` covers `points` at radius `eps`, or reports an uncovered point.
pub fn certify_cover(
    net: Vec<Vector>,
    points: Vec<Vector>,
    d: &dyn QuasiMetric,
    eps: &Rational,
    location: NetLocation,
    exec: Exec,
) -> Result<EpsNetCertificate> {
    require_positive(eps)?;
    let witness = find_witnesses(&net, &points, d, eps, exec)
        .map_err(|i| Error::Precondition(format!("point {i} is not covered at the requested radius")))?;
    Ok(EpsNetCertificate { eps: eps.clone(), net, covered: points, witness, location })
}

/// Set-cover data: `covers[c]` lists the sample indices within `eps` of candidate `c`.
fn cover_sets(candidates: &[Vector], sample: &[Vector], d: &dyn QuasiMetric, eps: &Rational, exec: Exec) -> Vec<Vec<usize>> {
    exec.map(candidates.len(), |c| {
        (0..sample.len()).filter(|&i| d.dist(&candidates[c], &sample[i]).le_rational(eps)).collect()
    })
}

/// Candidate centers: the sample itself, plus `extra` for outside nets.
fn candidates(sample: &[Vector], extra: &[Vector], inside_only: bool) -> Vec<Vector> {
    let mut c = sample.to_vec();
    if !inside_only {
        c.extend(extra.iter().cloned());
    }
    c
}

fn build(
    sample: &[Vector],
    cands: Vec<Vector>,
    chosen: Vec<usize>,
    sets: &[Vec<usize>],
    eps: &Rational,
    inside_only: bool,
    d: &dyn QuasiMetric,
) -> EpsNetCertificate {
    let net: Vec<Vector> = chosen.iter().map(|&c| cands[c].clone()).collect();
    let mut witness = vec![usize::MAX; sample.len()];
    for (k, &c) in chosen.iter().enumerate() {
        for &i in &sets[c] {
            if witness[i] == usize::MAX {
                witness[i] = k;
            }
        }
    }
    debug_assert!(witness.iter().enumerate().all(|(i, &k)| d.dist(&net[k], &sample[i]).le_rational(eps)));
    EpsNetCertificate {
        eps: eps.clone(),
        net,
        covered: sample.to_vec(),
        witness,
        location: if inside_only { NetLocation::Inside } else { NetLocation::Outside },
    }
}

/// Greedy set cover: repeatedly adds the candidate covering the most uncovered
/// points (lowest index on ties). Inside nets draw candidates from the sample,
/// outside nets may also use `extra` points.
pub fn greedy_eps_net(
    sample: &[Vector],
    d: &dyn QuasiMetric,
    eps: &Rational,
    inside_only: bool,
    extra: &[Vector],
    exec: Exec,
) -> Result<EpsNetCertificate> {
    require_positive(eps)?;
    let cands = candidates(sample, extra, inside_only);
    let sets = cover_sets(&cands, sample, d, eps, exec);
    let mut uncovered = vec![true; sample.len()];
    let mut left = sample.len();
    let mut chosen = Vec::new();
    while left > 0 {
        let (best, gain) = sets
            .iter()
            .enumerate()
            .map(|(c, s)| (c, s.iter().filter(|&&i| uncovered[i]).count()))
            .fold((0, 0), |acc, x| if x.1 > acc.1 { x } else { acc });
        debug_assert!(gain > 0, "every sample point covers itself");
        for &i in &sets[best] {
            if uncovered[i] {
                uncovered[i] = false;
                left -= 1;
            }
        }
        chosen.push(best);
    }
    Ok(build(sample, cands, chosen, &sets, eps, inside_only, d))
}

/// Minimum-size net by exhaustion over subsets of at most 20 candidates.
pub fn exact_min_eps_net(
    sample: &[Vector],
    d: &dyn QuasiMetric,
    eps: &Rational,
    inside_only: bool,
    extra: &[Vector],
) -> Result<EpsNetCertificate> {
    require_positive(eps)?;
    let cands = candidates(sample, extra, inside_only);
    if cands.len() > 20 {
        return Err(Error::Capacity(format!("exact cover limited to 20 candidates, got {}", cands.len())));
    }
    let sets = cover_sets(&cands, sample, d, eps, Exec::Sequential);
    let masks: Vec<u64> = sets.iter().map(|s| s.iter().fold(0u64, |m, &i| m | (1 << i))).collect();
    let full: u64 = if sample.len() == 64 { u64::MAX } else { (1u64 << sample.len()) - 1 };
    if sample.is_empty() {
        return Ok(build(sample, cands, vec![], &sets, eps, inside_only, d));
    }
    let n = cands.len();
    for size in 1..=n {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            if idx.iter().fold(0u64, |m, &c| m | masks[c]) == full {
                return Ok(build(sample, cands, idx, &sets, eps, inside_only, d));
            }
            // Next combination in lexicographic order.
            let mut k = size;
            while k > 0 && idx[k - 1] == n - size + k - 1 {
                k -= 1;
            }
            if k == 0 {
                break;
            }
            idx[k - 1] += 1;
            for j in k..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    Err(Error::Precondition("candidates cannot cover the sample".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asym_space::AsymNorm;
    use crate::rational::{int, vec_i};

    #[test]
    fn asymmetric_covering_of_two_points() {
        let u = AsymNorm::u();
        let sample = vec![vec_i(&[0]), vec_i(&[10])];
        let c = greedy_eps_net(&sample, &u, &int(1), true, &[], Exec::Sequential).unwrap();
        assert_eq!(c.net, vec![vec_i(&[10])]);
        let ubar = u.conjugate();
        let c2 = greedy_eps_net(&sample, &ubar, &int(1), true, &[], Exec::Sequential).unwrap();
        assert_eq!(c2.net, vec![vec_i(&[0])]);
        let member = |x: &[Rational]| sample.iter().any(|s| s.as_slice() == x);
        assert!(c.verify(&u, NetLocation::Inside, Some(&member)).is_ok());
        assert!(c.verify(&u, NetLocation::Outside, None).is_ok());
        assert!(c.verify(&ubar, NetLocation::Outside, None).is_err());
    }

    #[test]
    fn exact_cover_not_larger_than_greedy() {
        let l = AsymNorm::l_inf(1);
        let sample: Vec<Vector> = (0..12).map(|i| vec_i(&[i])).collect();
        let g = greedy_eps_net(&sample, &l, &int(1), true, &[], Exec::Sequential).unwrap();
        let e = exact_min_eps_net(&sample, &l, &int(1), true, &[]).unwrap();
        assert_eq!(e.net.len(), 4);
        assert!(e.net.len() <= g.net.len());
        assert!(e.verify(&l, NetLocation::Outside, None).is_ok());
    }

    #[test]
    fn rejects_nonpositive_eps() {
        let u = AsymNorm::u();
        assert!(greedy_eps_net(&[vec_i(&[0])], &u, &int(0), true, &[], Exec::Sequential).is_err());
    }
}
