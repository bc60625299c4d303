//! Asymmetric norms, quasi-metrics, convergence predicates and normed cones.

mod cone;
mod norm;

pub use cone::{finiteness_classes, NormedCone, PreorderReport};
pub use norm::AsymNorm;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{sub, Extended, Rational, Vector};

/// An extended quasi-metric on `Q^n`: `d(x, x) = 0`, triangle inequality, values in `[0, ∞]`.
pub trait QuasiMetric: Sync {
    fn dist(&self, x: &[Rational], y: &[Rational]) -> Extended;

    /// Optional floating-point estimate used only to order exact searches.
    fn approx_dist(&self, _x: &[f64], _y: &[f64]) -> Option<f64> {
        None
    }
}

impl QuasiMetric for AsymNorm {
    fn dist(&self, x: &[Rational], y: &[Rational]) -> Extended {
        Extended::Finite(self.value(&sub(y, x)))
    }

    fn approx_dist(&self, x: &[f64], y: &[f64]) -> Option<f64> {
        let d: Vec<f64> = y.iter().zip(x).map(|(a, b)| a - b).collect();
        Some(self.approx_value(&d))
    }
}

impl<M: QuasiMetric + ?Sized> QuasiMetric for &M {
    fn dist(&self, x: &[Rational], y: &[Rational]) -> Extended {
        (**self).dist(x, y)
    }

    fn approx_dist(&self, x: &[f64], y: &[f64]) -> Option<f64> {
        (**self).approx_dist(x, y)
    }
}

/// The conjugate quasi-metric `d̄(x, y) = d(y, x)`.
pub struct Conjugate<M>(pub M);

impl<M: QuasiMetric> QuasiMetric for Conjugate<M> {
    fn dist(&self, x: &[Rational], y: &[Rational]) -> Extended {
        self.0.dist(y, x)
    }

    fn approx_dist(&self, x: &[f64], y: &[f64]) -> Option<f64> {
        self.0.approx_dist(y, x)
    }
}

/// Wraps a closure as a quasi-metric oracle.
pub struct FnMetric<F>(pub F);

impl<F> QuasiMetric for FnMetric<F>
where
    F: Fn(&[Rational], &[Rational]) -> Extended + Sync,
{
    fn dist(&self, x: &[Rational], y: &[Rational]) -> Extended {
        (self.0)(x, y)
    }
}

/// A finite prefix `x_1, …, x_n` of a sequence in `Q^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiMetricSample {
    pub points: Vec<Vector>,
}

impl QuasiMetricSample {
    pub fn new(space: &AsymNorm, points: Vec<Vector>) -> Result<Self> {
        for p in &points {
            crate::error::check_dim(space.dim(), p.len())?;
        }
        Ok(QuasiMetricSample { points })
    }
}

/// Least 1-based `N` with `value(n) < eps` for every `n ≥ N` in the prefix.
pub fn tail_index<F: Fn(usize) -> Extended>(len: usize, eps: &Rational, value: F) -> Option<usize> {
    let mut start = None;
    for n in (0..len).rev() {
        match value(n) {
            Extended::Finite(v) if &v < eps => start = Some(n + 1),
            _ => break,
        }
    }
    start
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub eps: Vec<Rational>,
    /// Tail indices for `d(x, x_n) < ε`.
    pub forward_tails: Vec<Option<usize>>,
    /// Tail indices for `d̄(x, x_n) = d(x_n, x) < ε`.
    pub backward_tails: Vec<Option<usize>>,
}

impl ConvergenceReport {
    pub fn d_convergent(&self) -> bool {
        self.forward_tails.iter().all(Option::is_some)
    }

    pub fn conjugate_convergent(&self) -> bool {
        self.backward_tails.iter().all(Option::is_some)
    }
}

/// Finite-prefix convergence verdicts of `x_n → x` for `d_p` and `d̄_p`.
pub fn converges(
    p: &AsymNorm,
    seq: &QuasiMetricSample,
    x: &[Rational],
    eps_schedule: &[Rational],
) -> Result<ConvergenceReport> {
    if seq.points.is_empty() {
        return Err(Error::Input("convergence needs a nonempty sequence".into()));
    }
    crate::error::check_dim(p.dim(), x.len())?;
    let fwd: Vec<Rational> = seq.points.iter().map(|xn| p.value(&sub(xn, x))).collect();
    let bwd: Vec<Rational> = seq.points.iter().map(|xn| p.value(&sub(x, xn))).collect();
    let tails = |vals: &[Rational]| -> Vec<Option<usize>> {
        eps_schedule
            .iter()
            .map(|e| tail_index(vals.len(), e, |n| Extended::Finite(vals[n].clone())))
            .collect()
    };
    Ok(ConvergenceReport {
        eps: eps_schedule.to_vec(),
        forward_tails: tails(&fwd),
        backward_tails: tails(&bwd),
    })
}

pub(crate) fn require_positive(eps: &Rational) -> Result<()> {
    if eps <= &Rational::zero() {
        return Err(Error::Input("eps must be positive".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio, vec_i};

    fn schedule() -> Vec<Rational> {
        vec![ratio(1, 2), ratio(1, 10), ratio(1, 50)]
    }

    #[test]
    fn harmonic_sequence_under_u() {
        let u = AsymNorm::u();
        let pts = (1..=100).map(|n| vec![ratio(1, n)]).collect();
        let s = QuasiMetricSample::new(&u, pts).unwrap();
        let r = converges(&u, &s, &vec_i(&[0]), &schedule()).unwrap();
        assert!(r.d_convergent() && r.conjugate_convergent());
        assert_eq!(r.forward_tails, vec![Some(3), Some(11), Some(51)]);
        assert_eq!(r.backward_tails, vec![Some(1); 3]);
    }

    #[test]
    fn negative_integers_under_u() {
        let u = AsymNorm::u();
        let pts = (1..=20).map(|n| vec![int(-n)]).collect();
        let s = QuasiMetricSample::new(&u, pts).unwrap();
        let r = converges(&u, &s, &vec_i(&[0]), &schedule()).unwrap();
        assert!(r.d_convergent());
        assert!(!r.conjugate_convergent());
    }

    #[test]
    fn constant_sequence() {
        let u = AsymNorm::u();
        let s = QuasiMetricSample::new(&u, vec![vec_i(&[4]); 5]).unwrap();
        let r = converges(&u, &s, &vec_i(&[4]), &schedule()).unwrap();
        assert!(r.d_convergent() && r.conjugate_convergent());
    }

    #[test]
    fn conjugate_metric_swaps_arguments() {
        let u = AsymNorm::u();
        let c = Conjugate(&u);
        assert_eq!(c.dist(&vec_i(&[0]), &vec_i(&[1])), Extended::zero());
        assert_eq!(c.dist(&vec_i(&[1]), &vec_i(&[0])), Extended::Finite(int(1)));
    }
}
