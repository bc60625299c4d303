use crate::asym_space::QuasiMetric;
use crate::rational::{Rational, Vector};

#[derive(Debug, Clone, PartialEq)]
pub struct KCauchyVerdict {
    pub eps: Rational,
    /// Least 1-based `n` with `d(x_i, x_j) < eps` for all `n ≤ i ≤ j` in the prefix.
    pub tail_start: usize,
    /// The tail starts within the first half of the prefix.
    pub holds: bool,
}

/// Left K-Cauchy verdicts per `eps` on a finite prefix.
pub fn left_k_cauchy(seq: &[Vector], d: &dyn QuasiMetric, eps_schedule: &[Rational]) -> Vec<KCauchyVerdict> {
    let n = seq.len();
    eps_schedule
        .iter()
        .map(|eps| {
            let mut start = 1;
            for i in (0..n).rev() {
                let bad = (i + 1..n).any(|j| !matches!(d.dist(&seq[i], &seq[j]).finite(), Some(v) if v < eps));
                if bad {
                    start = i + 2;
                    break;
                }
            }
            KCauchyVerdict { eps: eps.clone(), tail_start: start, holds: n > 0 && start <= n.div_ceil(2) }
        })
        .collect()
}

/// Greedy extraction of indices `i_1 < i_2 < …` with `d(x_{i_a}, x_{i_b}) < eps` for `a < b`.
pub fn extract_left_k_cauchy(seq: &[Vector], d: &dyn QuasiMetric, eps: &Rational) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for j in 0..seq.len() {
        let ok = chosen.iter().all(|&i| matches!(d.dist(&seq[i], &seq[j]).finite(), Some(v) if v < eps));
        if ok {
            chosen.push(j);
        }
    }
    chosen
}

/// Sample-scale falsifier for hereditary precompactness: every subsequence
/// `x_{o}, x_{o+s}, …` (strides `1..=max_stride`, all offsets) must contain an
/// extracted left K-Cauchy subsequence of length at least `min_len`.
/// Returns the first failing `(stride, offset)`, if any.
pub fn hereditary_spot_check(
    seq: &[Vector],
    d: &dyn QuasiMetric,
    eps: &Rational,
    max_stride: usize,
    min_len: usize,
) -> Option<(usize, usize)> {
    for s in 1..=max_stride {
        for o in 0..s {
            let sub: Vec<Vector> = seq.iter().skip(o).step_by(s).cloned().collect();
            if extract_left_k_cauchy(&sub, d, eps).len() < min_len.min(sub.len()) {
                return Some((s, o));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asym_space::AsymNorm;
    use crate::rational::{int, ratio, vec_i};

    fn sched() -> Vec<Rational> {
        vec![int(1), ratio(1, 2), ratio(1, 100)]
    }

    #[test]
    fn verdicts() {
        let u = AsymNorm::u();
        let constant = vec![vec_i(&[3]); 10];
        assert!(left_k_cauchy(&constant, &u, &sched()).iter().all(|v| v.holds && v.tail_start == 1));

        let up: Vec<Vector> = (1..=20).map(|n| vec_i(&[n])).collect();
        assert!(left_k_cauchy(&up, &u, &sched()).iter().all(|v| !v.holds && v.tail_start == 20));

        let down: Vec<Vector> = (1..=20).map(|n| vec_i(&[-n])).collect();
        assert!(left_k_cauchy(&down, &u, &sched()).iter().all(|v| v.holds && v.tail_start == 1));
    }

    #[test]
    fn extraction() {
        let u = AsymNorm::u();
        let up: Vec<Vector> = (1..=20).map(|n| vec_i(&[n])).collect();
        assert_eq!(extract_left_k_cauchy(&up, &u, &ratio(1, 2)).len(), 1);
        let zigzag: Vec<Vector> = (1..=20).map(|n| vec_i(&[if n % 2 == 0 { -n } else { 1 }])).collect();
        let ext = extract_left_k_cauchy(&zigzag, &u, &ratio(1, 2));
        assert!(ext.len() >= 10);
        assert!(hereditary_spot_check(&up, &u, &ratio(1, 2), 3, 2).is_some());
        let down: Vec<Vector> = (1..=30).map(|n| vec_i(&[-n])).collect();
        assert!(hereditary_spot_check(&down, &u, &ratio(1, 2), 3, 5).is_none());
    }
}
