//! Dense two-phase tableau simplex over non-negative variables.
//!
//! Entering and leaving variables follow Bland's rule, so the method
//! terminates on degenerate problems. The arithmetic is generic: `f64`
//! compares against `1e-9·scale`, `BigRational` is exact.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Ordered field the simplex can pivot in.
pub trait LpScalar:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;
    /// Comparison slack for a problem whose largest datum is `scale`.
    fn tolerance(scale: &Self) -> Self;
}

impl LpScalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn tolerance(scale: &Self) -> Self {
        1e-9 * scale
    }
}

impl LpScalar for BigRational {
    fn from_f64(x: f64) -> Self {
        <BigRational as num_traits::FromPrimitive>::from_f64(x).expect("finite f64")
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn tolerance(_: &Self) -> Self {
        Self::zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint<S> {
    pub coeffs: Vec<S>,
    pub relation: Relation,
    pub bound: S,
}

/// `min objective·x` subject to the constraints and `x ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram<S> {
    pub variables: usize,
    pub constraints: Vec<Constraint<S>>,
    pub objective: Option<Vec<S>>,
}

impl<S: LpScalar> LinearProgram<S> {
    pub fn new(variables: usize) -> Self {
        Self {
            variables,
            constraints: Vec::new(),
            objective: None,
        }
    }

    pub fn push(&mut self, coeffs: Vec<S>, relation: Relation, bound: S) {
        assert_eq!(coeffs.len(), self.variables, "constraint arity");
        self.constraints.push(Constraint {
            coeffs,
            relation,
            bound,
        });
    }

    pub fn with_objective(mut self, objective: Vec<S>) -> Self {
        assert_eq!(objective.len(), self.variables, "objective arity");
        self.objective = Some(objective);
        self
    }

    /// Largest absolute datum, at least one.
    fn scale(&self) -> S {
        let mut s = S::one();
        for c in &self.constraints {
            for v in c.coeffs.iter().chain(std::iter::once(&c.bound)) {
                let a = v.abs();
                if a > s {
                    s = a;
                }
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<S> {
    Feasible(Vec<S>),
    Infeasible,
    Unbounded,
}

impl<S> LpOutcome<S> {
    pub fn point(self) -> Option<Vec<S>> {
        match self {
            LpOutcome::Feasible(x) => Some(x),
            _ => None,
        }
    }
}

/// Outcome plus the number of pivots spent.
#[derive(Debug, Clone)]
pub struct LpSolve<S> {
    pub outcome: LpOutcome<S>,
    pub pivots: usize,
}

/// Feasibility (phase 1), followed by optimization when an objective is set.
pub fn simplex_feasible<S: LpScalar>(lp: &LinearProgram<S>) -> LpOutcome<S> {
    solve(lp).outcome
}

pub fn solve<S: LpScalar>(lp: &LinearProgram<S>) -> LpSolve<S> {
    let mut t = Tableau::build(lp);
    let mut pivots = 0;
    if !t.phase_one(&mut pivots) {
        return LpSolve {
            outcome: LpOutcome::Infeasible,
            pivots,
        };
    }
    if let Some(obj) = &lp.objective {
        if !t.phase_two(obj, &mut pivots) {
            return LpSolve {
                outcome: LpOutcome::Unbounded,
                pivots,
            };
        }
    }
    LpSolve {
        outcome: LpOutcome::Feasible(t.primal(lp.variables)),
        pivots,
    }
}

/// Rows hold `[coefficients | rhs]`; the last row is the cost row.
struct Tableau<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
    basis: Vec<usize>,
    /// Columns `>= first_artificial` are phase-1 artificials.
    first_artificial: usize,
    tol: S,
}

impl<S: LpScalar> Tableau<S> {
    fn build(lp: &LinearProgram<S>) -> Self {
        let n = lp.variables;
        let m = lp.constraints.len();
        let slack_count = lp
            .constraints
            .iter()
            .filter(|c| c.relation != Relation::Eq)
            .count();
        let first_artificial = n + slack_count;
        let cols = first_artificial + m + 1;
        let rows = m + 1;
        let mut data = vec![S::zero(); rows * cols];
        let mut basis = Vec::with_capacity(m);
        let mut slack = n;
        for (r, c) in lp.constraints.iter().enumerate() {
            let flip = c.bound < S::zero();
            let sign = |v: &S| if flip { -v.clone() } else { v.clone() };
            for (j, a) in c.coeffs.iter().enumerate() {
                data[r * cols + j] = sign(a);
            }
            data[r * cols + cols - 1] = sign(&c.bound);
            let relation = match (c.relation, flip) {
                (Relation::Le, true) => Relation::Ge,
                (Relation::Ge, true) => Relation::Le,
                (rel, _) => rel,
            };
            match relation {
                Relation::Le => {
                    data[r * cols + slack] = S::one();
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    data[r * cols + slack] = -S::one();
                    slack += 1;
                    data[r * cols + first_artificial + r] = S::one();
                    basis.push(first_artificial + r);
                }
                Relation::Eq => {
                    data[r * cols + first_artificial + r] = S::one();
                    basis.push(first_artificial + r);
                }
            }
        }
        let tol = S::tolerance(&lp.scale());
        Self {
            rows,
            cols,
            data,
            basis,
            first_artificial,
            tol,
        }
    }

    #[inline]
    fn at(&self, r: usize, c: usize) -> &S {
        &self.data[r * self.cols + c]
    }

    fn cost_row(&self) -> usize {
        self.rows - 1
    }

    /// Sets the cost row to reduced costs of `cost` for the current basis.
    fn load_costs(&mut self, cost: &[S]) {
        let z = self.cost_row();
        let cols = self.cols;
        for c in 0..cols {
            self.data[z * cols + c] = cost.get(c).cloned().unwrap_or_else(S::zero);
        }
        for r in 0..z {
            let cb = cost.get(self.basis[r]).cloned().unwrap_or_else(S::zero);
            if cb.is_zero() {
                continue;
            }
            for c in 0..cols {
                let v = self.at(r, c).clone();
                self.data[z * cols + c] = self.data[z * cols + c].clone() - cb.clone() * v;
            }
        }
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let cols = self.cols;
        let p = self.at(pr, pc).clone();
        for c in 0..cols {
            let v = self.data[pr * cols + c].clone() / p.clone();
            self.data[pr * cols + c] = v;
        }
        for r in 0..self.rows {
            if r == pr {
                continue;
            }
            let f = self.at(r, pc).clone();
            if f.is_zero() {
                continue;
            }
            for c in 0..cols {
                let v = self.data[pr * cols + c].clone();
                if v.is_zero() {
                    continue;
                }
                self.data[r * cols + c] = self.data[r * cols + c].clone() - f.clone() * v;
            }
        }
        self.basis[pr] = pc;
    }

    /// Minimizes the loaded cost over columns `< allowed`; false if unbounded.
    fn optimize(&mut self, allowed: usize, pivots: &mut usize) -> bool {
        let z = self.cost_row();
        let rhs = self.cols - 1;
        let neg_tol = -self.tol.clone();
        loop {
            let Some(pc) = (0..allowed).find(|&c| *self.at(z, c) < neg_tol) else {
                return true;
            };
            let mut best: Option<(usize, S)> = None;
            for r in 0..z {
                let a = self.at(r, pc);
                if *a > self.tol {
                    let ratio = self.at(r, rhs).clone() / a.clone();
                    let better = match &best {
                        None => true,
                        Some((br, bv)) => {
                            ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br])
                        }
                    };
                    if better {
                        best = Some((r, ratio));
                    }
                }
            }
            let Some((pr, _)) = best else {
                return false;
            };
            self.pivot(pr, pc);
            *pivots += 1;
        }
    }

    fn phase_one(&mut self, pivots: &mut usize) -> bool {
        let m = self.cost_row();
        let mut cost = vec![S::zero(); self.cols - 1];
        for r in 0..m {
            cost[self.first_artificial + r] = S::one();
        }
        self.load_costs(&cost);
        let all = self.cols - 1;
        self.optimize(all, pivots);
        let infeasibility = -self.at(self.cost_row(), self.cols - 1).clone();
        if infeasibility > self.tol {
            return false;
        }
        // drive zero-level artificials out of the basis where possible
        for r in 0..m {
            if self.basis[r] >= self.first_artificial {
                if let Some(pc) =
                    (0..self.first_artificial).find(|&c| self.at(r, c).abs() > self.tol)
                {
                    self.pivot(r, pc);
                    *pivots += 1;
                }
            }
        }
        true
    }

    fn phase_two(&mut self, objective: &[S], pivots: &mut usize) -> bool {
        let mut cost = vec![S::zero(); self.cols - 1];
        cost[..objective.len()].clone_from_slice(objective);
        self.load_costs(&cost);
        let allowed = self.first_artificial;
        self.optimize(allowed, pivots)
    }

    fn primal(&self, n: usize) -> Vec<S> {
        let mut x = vec![S::zero(); n];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < n {
                x[b] = self.at(r, self.cols - 1).clone();
            }
        }
        x
    }
}
