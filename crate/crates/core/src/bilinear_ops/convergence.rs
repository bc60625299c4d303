//! Pointwise (w²) convergence of bilinear forms and the desk-scale Alaoglu extractor.

use num_traits::{One, Signed, Zero};

use super::{eval_form, BilinearForm};
use crate::asym_space::{tail_index, AsymNorm};
use crate::error::{check_dim, Error, Result};
use crate::exec::Exec;
use crate::polyhedral::Caps;
use crate::rational::{format_rational, int, neg, simplest_between, unit, Extended, Matrix, Rational, Vector};

/// Tail indices of `b_i(x,y) → b(x,y)` at one probe, per scheduled `eps`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeVerdict {
    pub x: Vector,
    pub y: Vector,
    /// `u(b_i(x,y) − b(x,y)) < ε`.
    pub u_tails: Vec<Option<usize>>,
    /// The same at `(−x, y)`.
    pub u_tails_reflected: Vec<Option<usize>>,
    /// `|b_i(x,y) − b(x,y)| < ε`.
    pub abs_tails: Vec<Option<usize>>,
}

fn within_half(tails: &[Option<usize>], len: usize) -> bool {
    tails.iter().all(|t| t.is_some_and(|n| n <= len.div_ceil(2)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct W2Report {
    pub eps: Vec<Rational>,
    pub len: usize,
    pub probes: Vec<ProbeVerdict>,
}

impl ProbeVerdict {
    /// u-convergence at both `(x,y)` and `(−x,y)` on the prefix.
    pub fn u_convergent(&self, len: usize) -> bool {
        within_half(&self.u_tails, len) && within_half(&self.u_tails_reflected, len)
    }

    pub fn abs_convergent(&self, len: usize) -> bool {
        within_half(&self.abs_tails, len)
    }
}

impl W2Report {
    pub fn converges(&self) -> bool {
        self.probes.iter().all(|p| p.abs_convergent(self.len))
    }

    /// The symmetrized u-verdict equals the `|·|`-verdict at every probe.
    pub fn verdicts_agree(&self) -> bool {
        self.probes.iter().all(|p| p.u_convergent(self.len) == p.abs_convergent(self.len))
    }
}

/// Finite-prefix w² convergence of `seq` to `b` on a probe set. A tail must
/// start within the first half of the prefix to count as convergence.
pub fn w2_converges(
    seq: &[BilinearForm],
    b: &BilinearForm,
    probes: &[(Vector, Vector)],
    eps_schedule: &[Rational],
) -> Result<W2Report> {
    if seq.is_empty() {
        return Err(Error::Input("w2 convergence needs a nonempty sequence".into()));
    }
    for (x, y) in probes {
        check_dim(b.source1().dim(), x.len())?;
        check_dim(b.source2().dim(), y.len())?;
    }
    let n = seq.len();
    let probes = probes
        .iter()
        .map(|(x, y)| {
            let diffs: Vec<Rational> = seq.iter().map(|bi| bi.eval(x, y) - b.eval(x, y)).collect();
            let tails = |f: &dyn Fn(&Rational) -> Rational| -> Vec<Option<usize>> {
                eps_schedule.iter().map(|e| tail_index(n, e, |i| Extended::Finite(f(&diffs[i])))).collect()
            };
            let u = |a: &Rational| if a.is_positive() { a.clone() } else { Rational::zero() };
            ProbeVerdict {
                x: x.clone(),
                y: y.clone(),
                u_tails: tails(&u),
                u_tails_reflected: tails(&|a: &Rational| u(&-a)),
                abs_tails: tails(&|a: &Rational| a.abs()),
            }
        })
        .collect();
    Ok(W2Report { eps: eps_schedule.to_vec(), len: n, probes })
}

/// Fewest indices kept by one bisection step of the extractor.
const MIN_KEEP: usize = 4;
const MAX_LEVELS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitRoute {
    /// Entrywise simplest rationals in the final box.
    Simplest,
    /// `λ·simplest + (1 − λ)·b_last` with `λ = 2^-k`, the largest such in the ball.
    Blended(u32),
    /// The last selected form itself.
    LastTerm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlaogluOutcome {
    /// Increasing indices of the extracted subsequence.
    pub indices: Vec<usize>,
    /// Final interval per matrix entry (row-major); every selected form lies in it.
    pub final_box: Vec<(Rational, Rational)>,
    pub levels: usize,
    pub limit: BilinearForm,
    pub limit_norm: Extended,
    pub limit_route: LimitRoute,
    /// `(form, probe)` pairs violating `|b(x,y)| ≤ p1^s(x)p2^s(y)`.
    pub bound_violations: Vec<(usize, usize)>,
    /// Linearity of the limit in each argument on the probes.
    pub limit_bilinear: bool,
}

impl AlaogluOutcome {
    pub fn holds(&self) -> bool {
        self.bound_violations.is_empty()
            && self.limit_bilinear
            && self.limit_norm.le_rational(&Rational::one())
            && !self.indices.is_empty()
    }
}

fn entry(m: &Matrix, e: usize, d2: usize) -> &Rational {
    &m[e / d2][e % d2]
}

/// Extracts an entrywise-convergent subsequence from forms in the unit ball
/// `B = {b : ‖b|_{p1,p2} ≤ 1}` and exhibits a limit in `B`.
///
/// Entries start in the intervals `[−p1^s(e_a)p2^s(e_b), p1^s(e_a)p2^s(e_b)]`.
/// Each level halves every entry's interval (nested, entry by entry), keeping
/// the half that holds the last remaining index, and stops once fewer than
/// four indices would survive.
pub fn alaoglu_desk_check(
    p1: &AsymNorm,
    p2: &AsymNorm,
    seq: &[Matrix],
    probes: &[(Vector, Vector)],
    caps: &Caps,
    exec: Exec,
) -> Result<AlaogluOutcome> {
    if seq.is_empty() {
        return Err(Error::Input("extraction needs a nonempty sequence".into()));
    }
    let (d1, d2) = (p1.dim(), p2.dim());
    let forms: Vec<BilinearForm> =
        seq.iter().map(|m| BilinearForm::new(m.clone(), p1.clone(), p2.clone())).collect::<Result<_>>()?;
    let norms = exec.map(forms.len(), |i| forms[i].norm(caps, Exec::Sequential).map(|s| s.value));
    for (i, n) in norms.into_iter().enumerate() {
        let n = n?;
        if !n.le_rational(&Rational::one()) {
            let shown = n.finite().map_or("inf".to_string(), format_rational);
            return Err(Error::Precondition(format!("form {i} has norm {shown} > 1")));
        }
    }

    let (p1s, p2s) = (p1.symmetrize(), p2.symmetrize());
    let mut bound_violations = Vec::new();
    for (i, b) in forms.iter().enumerate() {
        for (k, (x, y)) in probes.iter().enumerate() {
            if b.eval(x, y).abs() > p1s.value(x) * p2s.value(y) {
                bound_violations.push((i, k));
            }
        }
    }

    let entries = d1 * d2;
    let mut boxes: Vec<(Rational, Rational)> = (0..entries)
        .map(|e| {
            let m = p1s.value(&unit(d1, e / d2)) * p2s.value(&unit(d2, e % d2));
            (-m.clone(), m)
        })
        .collect();
    let mut current: Vec<usize> = (0..seq.len()).collect();
    let mut levels = 0;
    'outer: while levels < MAX_LEVELS {
        let mut next = current.clone();
        let mut next_boxes = boxes.clone();
        for e in 0..entries {
            let (lo, hi) = next_boxes[e].clone();
            let mid = (&lo + &hi) / int(2);
            let last = *next.last().expect("nonempty");
            let upper = entry(&seq[last], e, d2) >= &mid;
            let kept: Vec<usize> =
                next.iter().copied().filter(|&i| (entry(&seq[i], e, d2) >= &mid) == upper).collect();
            if kept.len() < MIN_KEEP.min(seq.len()) {
                break 'outer;
            }
            next = kept;
            next_boxes[e] = if upper { (mid, hi) } else { (lo, mid) };
        }
        current = next;
        boxes = next_boxes;
        levels += 1;
    }

    let simplest: Matrix = (0..d1)
        .map(|a| (0..d2).map(|b| simplest_between(&boxes[a * d2 + b].0, &boxes[a * d2 + b].1)).collect())
        .collect();
    let last = &seq[*current.last().expect("nonempty")];
    let mut limit_route = LimitRoute::LastTerm;
    let mut limit = forms[*current.last().expect("nonempty")].clone();
    for k in 0..=20u32 {
        let lambda = Rational::new(1.into(), num_bigint::BigInt::from(1u8) << k);
        let cand: Matrix = simplest
            .iter()
            .zip(last)
            .map(|(r, s)| r.iter().zip(s).map(|(a, b)| &lambda * a + (Rational::one() - &lambda) * b).collect())
            .collect();
        let f = BilinearForm::new(cand, p1.clone(), p2.clone())?;
        if f.norm(caps, exec)?.value.le_rational(&Rational::one()) {
            limit_route = if k == 0 { LimitRoute::Simplest } else { LimitRoute::Blended(k) };
            limit = f;
            break;
        }
    }
    let limit_norm = limit.norm(caps, exec)?.value;
    let limit_bilinear = probes.iter().all(|(x, y)| {
        let two_x: Vector = x.iter().map(|a| a * int(2)).collect();
        let nx = neg(x);
        eval_form(limit.matrix(), &two_x, y) == int(2) * limit.eval(x, y)
            && limit.eval(&nx, y) == -limit.eval(x, y)
            && eval_form(limit.matrix(), x, &neg(y)) == -limit.eval(x, y)
    });
    Ok(AlaogluOutcome { indices: current, final_box: boxes, levels, limit, limit_norm, limit_route, bound_violations, limit_bilinear })
}
