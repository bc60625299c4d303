//! Exact two-phase simplex on a dense tableau with Bland's rule.
//!
//! Solves `max c·x s.t. a_i·x ≤ b_i` over free variables. Free variables are
//! split as `x = x⁺ − x⁻`; every row gets a slack, rows with `b_i < 0` are
//! negated and receive an artificial variable.

use num_traits::{One, Signed, Zero};

use super::Halfspace;
use crate::rational::{Rational, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpOutcome {
    pub status: LpStatus,
    pub optimum: Option<Rational>,
    /// Optimal point, or an improving recession ray when unbounded.
    pub witness: Option<Vector>,
    /// Nonnegative row multipliers `y` with `Aᵀy = c` and `b·y = optimum`.
    pub dual: Option<Vector>,
}

impl LpOutcome {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

struct Tableau {
    rows: Vec<Vector>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.cols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            let inv = p.recip();
            for x in self.rows[r].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = c;
    }

    fn reduced_cost(&self, cost: &[Rational], j: usize) -> Rational {
        let mut d = cost[j].clone();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &cost[self.basis[i]];
            if !cb.is_zero() && !row[j].is_zero() {
                d -= cb * &row[j];
            }
        }
        d
    }

    /// Runs the simplex until optimal (`Ok`) or unbounded (`Err(column)`).
    fn run(&mut self, cost: &[Rational], allowed: usize) -> Result<(), usize> {
        loop {
            let entering = (0..allowed).find(|&j| {
                !self.basis.contains(&j) && self.reduced_cost(cost, j).is_positive()
            });
            let Some(j) = entering else { return Ok(()) };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((k, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*k])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((i, _)) => self.pivot(i, j),
                None => return Err(j),
            }
        }
    }

    fn value(&self, col: usize) -> Rational {
        match self.basis.iter().position(|&b| b == col) {
            Some(i) => self.rhs(i).clone(),
            None => Rational::zero(),
        }
    }
}

/// Maximizes `objective · x` over `{x ∈ Q^dim : a_i·x ≤ b_i}`.
pub(crate) fn maximize(objective: &[Rational], rows: &[Halfspace], dim: usize) -> LpOutcome {
    let n = dim;
    let m = rows.len();
    let flipped: Vec<bool> = rows.iter().map(|h| h.offset.is_negative()).collect();
    let n_art = flipped.iter().filter(|&&f| f).count();
    let cols = 2 * n + m + n_art;
    let mut tab = Tableau { rows: Vec::with_capacity(m), basis: Vec::with_capacity(m), cols };
    let mut art = 2 * n + m;
    for (i, h) in rows.iter().enumerate() {
        let sign = if flipped[i] { -Rational::one() } else { Rational::one() };
        let mut row = vec![Rational::zero(); cols + 1];
        for k in 0..n {
            if !h.normal[k].is_zero() {
                row[k] = &sign * &h.normal[k];
                row[n + k] = -&row[k];
            }
        }
        row[2 * n + i] = sign.clone();
        row[cols] = &sign * &h.offset;
        if flipped[i] {
            row[art] = Rational::one();
            tab.basis.push(art);
            art += 1;
        } else {
            tab.basis.push(2 * n + i);
        }
        tab.rows.push(row);
    }

    if n_art > 0 {
        let mut cost = vec![Rational::zero(); cols];
        for c in cost.iter_mut().skip(2 * n + m) {
            *c = -Rational::one();
        }
        // Phase one is bounded above by 0, so it always terminates optimally.
        let _ = tab.run(&cost, cols);
        let infeasibility: Rational = (2 * n + m..cols).map(|c| tab.value(c)).sum();
        if infeasibility.is_positive() {
            return LpOutcome { status: LpStatus::Infeasible, optimum: None, witness: None, dual: None };
        }
        for i in 0..m {
            if tab.basis[i] >= 2 * n + m {
                if let Some(j) = (0..2 * n + m).find(|&j| !tab.rows[i][j].is_zero()) {
                    tab.pivot(i, j);
                }
            }
        }
    }

    let mut cost = vec![Rational::zero(); cols];
    for k in 0..n {
        cost[k] = objective[k].clone();
        cost[n + k] = -&objective[k];
    }
    match tab.run(&cost, 2 * n + m) {
        Ok(()) => {
            let x: Vector = (0..n).map(|k| tab.value(k) - tab.value(n + k)).collect();
            let optimum = crate::rational::dot(objective, &x);
            let dual: Vector = (0..m).map(|i| -tab.reduced_cost(&cost, 2 * n + i)).collect();
            LpOutcome { status: LpStatus::Optimal, optimum: Some(optimum), witness: Some(x), dual: Some(dual) }
        }
        Err(j) => {
            let mut dir = vec![Rational::zero(); cols];
            dir[j] = Rational::one();
            for (i, row) in tab.rows.iter().enumerate() {
                dir[tab.basis[i]] -= &row[j];
            }
            let ray: Vector = (0..n).map(|k| &dir[k] - &dir[n + k]).collect();
            LpOutcome { status: LpStatus::Unbounded, optimum: None, witness: Some(ray), dual: None }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{dot, int, vec_i};

    fn hs(normal: &[i64], offset: i64) -> Halfspace {
        Halfspace { normal: vec_i(normal), offset: int(offset) }
    }

    fn square() -> Vec<Halfspace> {
        vec![hs(&[1, 0], 1), hs(&[-1, 0], 1), hs(&[0, 1], 1), hs(&[0, -1], 1)]
    }

    fn check_dual(obj: &[Rational], rows: &[Halfspace], out: &LpOutcome) {
        let y = out.dual.as_ref().unwrap();
        assert!(y.iter().all(|v| !v.is_negative()));
        for k in 0..obj.len() {
            let s: Rational = rows.iter().zip(y).map(|(h, yi)| &h.normal[k] * yi).sum();
            assert_eq!(s, obj[k]);
        }
        let by: Rational = rows.iter().zip(y).map(|(h, yi)| &h.offset * yi).sum();
        assert_eq!(&by, out.optimum.as_ref().unwrap());
    }

    #[test]
    fn half_line() {
        let rows = vec![hs(&[1], 1)];
        let out = maximize(&vec_i(&[1]), &rows, 1);
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.optimum, Some(int(1)));
        assert_eq!(out.witness, Some(vec_i(&[1])));
        check_dual(&vec_i(&[1]), &rows, &out);

        let out = maximize(&vec_i(&[-1]), &rows, 1);
        assert_eq!(out.status, LpStatus::Unbounded);
        assert_eq!(out.witness, Some(vec_i(&[-1])));
    }

    #[test]
    fn square_optimum() {
        let rows = square();
        let obj = vec_i(&[1, 1]);
        let out = maximize(&obj, &rows, 2);
        assert_eq!(out.optimum, Some(int(2)));
        assert_eq!(out.witness, Some(vec_i(&[1, 1])));
        check_dual(&obj, &rows, &out);
    }

    #[test]
    fn negative_offsets_and_infeasible() {
        // 1 ≤ x ≤ 3, 2 ≤ y.
        let rows = vec![hs(&[-1, 0], -1), hs(&[1, 0], 3), hs(&[0, -1], -2), hs(&[1, 1], 10)];
        let obj = vec_i(&[-1, -1]);
        let out = maximize(&obj, &rows, 2);
        assert_eq!(out.optimum, Some(int(-3)));
        check_dual(&obj, &rows, &out);

        let rows = vec![hs(&[1], 0), hs(&[-1], -1)];
        assert_eq!(maximize(&vec_i(&[0]), &rows, 1).status, LpStatus::Infeasible);
    }

    #[test]
    fn no_rows() {
        let out = maximize(&vec_i(&[0, -2]), &[], 2);
        assert_eq!(out.status, LpStatus::Unbounded);
        let r = out.witness.unwrap();
        assert!(dot(&vec_i(&[0, -2]), &r).is_positive());
        let out = maximize(&vec_i(&[0, 0]), &[], 2);
        assert_eq!(out.optimum, Some(int(0)));
    }

    #[test]
    fn degenerate_equalities() {
        // x + y = 1 written as two inequalities, x, y ≥ 0, plus a redundant copy.
        let rows = vec![hs(&[1, 1], 1), hs(&[-1, -1], -1), hs(&[-1, 0], 0), hs(&[0, -1], 0), hs(&[1, 1], 1)];
        let obj = vec_i(&[2, 1]);
        let out = maximize(&obj, &rows, 2);
        assert_eq!(out.optimum, Some(int(2)));
        check_dual(&obj, &rows, &out);
    }
}
