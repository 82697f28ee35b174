//! Branch-and-bound feasibility over conversion-ordering disjunctions, and
//! the bisection on the conversion separation built on top of it.
//!
//! Frequencies are normalized to `x_i = (ω_i − lo)/W` with `W` the band
//! width, and qubits are ordered ascending. A conversion is the difference
//! `x_j − x_i` of an index pair `i < j`. Two conversions whose index
//! intervals are nested (including a shared endpoint) have a known sign
//! difference, so their separation is a plain linear constraint. Every other
//! pair is a disjunction `c_a − c_b ≥ δ  ∨  c_b − c_a ≥ δ`, resolved lazily:
//! the LP relaxation is solved, the most violated disjunction is branched on,
//! and infeasible branches are pruned.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::simplex::{solve, Constraint, LinearProgram, LpOutcome, LpScalar, Relation};
use super::{conversion_frequencies, min_adjacent_gap, AllocationProblem, AllocationResult};
use crate::error::{arg_err, Result};

/// Work counters, reported with every allocation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverStats {
    pub feasibility_calls: usize,
    pub branch_nodes: usize,
    pub lp_solves: usize,
    pub lp_iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FeasibilityOutcome {
    /// Ascending frequencies in Hz.
    Feasible(Vec<f64>),
    Infeasible,
}

impl FeasibilityOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityOutcome::Feasible(_))
    }
}

/// Affine expression `coeffs·x + constant` in normalized units.
#[derive(Debug, Clone, PartialEq)]
struct Expr {
    coeffs: Vec<f64>,
    constant: f64,
}

impl Expr {
    fn conversion(n: usize, i: usize, j: usize) -> Self {
        let mut coeffs = vec![0.0; n];
        coeffs[j] = 1.0;
        coeffs[i] = -1.0;
        Self {
            coeffs,
            constant: 0.0,
        }
    }

    /// `|x_i − s|` for a known side of the SNAIL.
    fn snail_conversion(n: usize, i: usize, snail: f64, above: bool) -> Self {
        let mut coeffs = vec![0.0; n];
        let sign = if above { 1.0 } else { -1.0 };
        coeffs[i] = sign;
        Self {
            coeffs,
            constant: -sign * snail,
        }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + self.constant
    }

    /// `self − other ≥ d` as an LP row.
    fn at_least(&self, other: &Expr, d: f64) -> Constraint<f64> {
        Constraint {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
            relation: Relation::Ge,
            bound: d - (self.constant - other.constant),
        }
    }
}

#[derive(Debug, Clone)]
struct Disjunction {
    a: Expr,
    b: Expr,
    d: f64,
}

impl Disjunction {
    fn side(&self, a_above: bool) -> Constraint<f64> {
        if a_above {
            self.a.at_least(&self.b, self.d)
        } else {
            self.b.at_least(&self.a, self.d)
        }
    }
}

/// Index pairs `(i, j)`, `i < j`, in lexicographic order.
fn index_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

/// For nested intervals `[k,l] ⊂ [i,j]`, the adjacent gaps in `[i,j] \ [k,l]`
/// as a bitmask; `None` when the pair's order is not determined.
fn forced_gap_set(outer: (usize, usize), inner: (usize, usize)) -> Option<u64> {
    let ((i, j), (k, l)) = (outer, inner);
    if outer == inner || !(i <= k && l <= j) {
        return None;
    }
    let mut mask = 0u64;
    for g in (i..k).chain(l..j) {
        mask |= 1 << g;
    }
    Some(mask)
}

/// One feasibility problem at a fixed conversion separation.
struct Instance {
    n: usize,
    base: Vec<Constraint<f64>>,
    disjunctions: Vec<Disjunction>,
    /// Violation slack for disjunction checks.
    tol: f64,
}

fn row(n: usize, entries: &[(usize, f64)], relation: Relation, bound: f64) -> Constraint<f64> {
    let mut coeffs = vec![0.0; n];
    for &(i, a) in entries {
        coeffs[i] += a;
    }
    Constraint {
        coeffs,
        relation,
        bound,
    }
}

/// Builds one instance per feasible SNAIL split (qubits `0..k` below it).
fn instances(problem: &AllocationProblem, delta2: f64) -> Vec<Instance> {
    let n = problem.n;
    let w = problem.band.width();
    let gap_q = problem.delta_q / w;
    let d = delta2 / w;

    let mut base = vec![row(n, &[(n - 1, 1.0)], Relation::Le, 1.0)];
    for i in 0..n - 1 {
        base.push(row(n, &[(i + 1, 1.0), (i, -1.0)], Relation::Ge, gap_q));
    }

    let pairs = index_pairs(n);
    let mut forced: Vec<u64> = Vec::new();
    let mut disjunctions = Vec::new();
    for (x, &p) in pairs.iter().enumerate() {
        for &q in &pairs[x + 1..] {
            if let Some(mask) = forced_gap_set(p, q).or_else(|| forced_gap_set(q, p)) {
                forced.push(mask);
            } else {
                disjunctions.push(Disjunction {
                    a: Expr::conversion(n, p.0, p.1),
                    b: Expr::conversion(n, q.0, q.1),
                    d,
                });
            }
        }
    }
    if d > 0.0 {
        // a gap-sum constraint is implied by any constraint on a subset of its gaps
        forced.sort_by_key(|m| (m.count_ones(), *m));
        forced.dedup();
        let mut kept: Vec<u64> = Vec::new();
        for m in forced {
            if !kept.iter().any(|&k| k & !m == 0) {
                kept.push(m);
            }
        }
        for mask in kept {
            let entries: Vec<(usize, f64)> = (0..n - 1)
                .filter(|g| mask & (1 << g) != 0)
                .flat_map(|g| [(g + 1, 1.0), (g, -1.0)])
                .collect();
            base.push(row(n, &entries, Relation::Ge, d));
        }
    }

    let Some(snail) = &problem.snail else {
        if n >= 3 {
            // mirror symmetry x -> 1 - x: keep the first gap no wider than the last
            base.push(row(
                n,
                &[(1, 1.0), (0, -1.0), (n - 1, -1.0), (n - 2, 1.0)],
                Relation::Le,
                0.0,
            ));
        }
        return vec![Instance {
            n,
            base,
            disjunctions,
            tol: 1e-9,
        }];
    };

    let s = (snail.snail_freq - problem.band.lo) / w;
    let ds = snail.delta_s / w;
    let splits: Vec<usize> = if s < 0.0 {
        vec![0]
    } else if s > 1.0 {
        vec![n]
    } else {
        (0..=n).collect()
    };
    splits
        .into_iter()
        .map(|k| {
            let mut base = base.clone();
            if k > 0 {
                // s − x_{k−1} ≥ ds
                base.push(row(n, &[(k - 1, -1.0)], Relation::Ge, ds - s));
            }
            if k < n {
                base.push(row(n, &[(k, 1.0)], Relation::Ge, ds + s));
            }
            let mut disjunctions = disjunctions.clone();
            if let Some(dc) = snail.delta_s_conv {
                for i in 0..n {
                    let sc = Expr::snail_conversion(n, i, s, i >= k);
                    for &(a, b) in &pairs {
                        disjunctions.push(Disjunction {
                            a: sc.clone(),
                            b: Expr::conversion(n, a, b),
                            d: dc / w,
                        });
                    }
                }
            }
            Instance {
                n,
                base,
                disjunctions,
                tol: 1e-9,
            }
        })
        .collect()
}

/// Feasible leaf: its point and the side every disjunction sits on.
struct Leaf {
    sides: Vec<bool>,
}

impl Instance {
    fn solve_lp(&self, extra: &[Constraint<f64>], stats: &mut SolverStats) -> Option<Vec<f64>> {
        let lp = LinearProgram {
            variables: self.n,
            constraints: self.base.iter().chain(extra).cloned().collect(),
            objective: None,
        };
        let out = solve(&lp);
        stats.lp_solves += 1;
        stats.lp_iterations += out.pivots;
        out.outcome.point()
    }

    fn search(&self, stats: &mut SolverStats) -> Option<Leaf> {
        let mut extra = Vec::new();
        self.dfs(&mut extra, stats)
    }

    fn dfs(&self, extra: &mut Vec<Constraint<f64>>, stats: &mut SolverStats) -> Option<Leaf> {
        stats.branch_nodes += 1;
        let x = self.solve_lp(extra, stats)?;
        let mut worst: Option<(usize, f64, f64)> = None;
        for (idx, dj) in self.disjunctions.iter().enumerate() {
            let diff = dj.a.eval(&x) - dj.b.eval(&x);
            let violation = dj.d - diff.abs();
            if violation > self.tol && worst.is_none_or(|(_, v, _)| violation > v) {
                worst = Some((idx, violation, diff));
            }
        }
        let Some((idx, _, diff)) = worst else {
            let sides = self
                .disjunctions
                .iter()
                .map(|dj| dj.a.eval(&x) >= dj.b.eval(&x))
                .collect();
            return Some(Leaf { sides });
        };
        let first = diff >= 0.0;
        for side in [first, !first] {
            extra.push(self.disjunctions[idx].side(side));
            let found = self.dfs(extra, stats);
            extra.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }

    /// Lexicographically smallest point of the leaf's polytope, solved exactly.
    fn canonical_point(&self, leaf: &Leaf, stats: &mut SolverStats) -> Option<Vec<f64>> {
        let to_exact = |c: &Constraint<f64>| Constraint {
            coeffs: c
                .coeffs
                .iter()
                .map(|&a| <BigRational as LpScalar>::from_f64(a))
                .collect(),
            relation: c.relation,
            bound: <BigRational as LpScalar>::from_f64(c.bound),
        };
        let mut rows: Vec<Constraint<BigRational>> = self
            .base
            .iter()
            .chain(
                self.disjunctions
                    .iter()
                    .zip(&leaf.sides)
                    .map(|(dj, &s)| dj.side(s))
                    .collect::<Vec<_>>()
                    .iter(),
            )
            .map(to_exact)
            .collect();
        let mut point = Vec::with_capacity(self.n);
        for k in 0..self.n {
            let mut objective = vec![<BigRational as num_traits::Zero>::zero(); self.n];
            objective[k] = <BigRational as num_traits::One>::one();
            let lp = LinearProgram {
                variables: self.n,
                constraints: rows.clone(),
                objective: Some(objective),
            };
            let out = solve(&lp);
            stats.lp_solves += 1;
            stats.lp_iterations += out.pivots;
            let LpOutcome::Feasible(x) = out.outcome else {
                return None;
            };
            let mut fix = vec![<BigRational as num_traits::Zero>::zero(); self.n];
            fix[k] = <BigRational as num_traits::One>::one();
            rows.push(Constraint {
                coeffs: fix,
                relation: Relation::Eq,
                bound: x[k].clone(),
            });
            point.push(x[k].clone());
        }
        Some(point.iter().map(LpScalar::to_f64).collect())
    }
}

struct Found {
    instance: usize,
    leaf: Leaf,
}

fn find(instances: &[Instance], stats: &mut SolverStats) -> Option<Found> {
    stats.feasibility_calls += 1;
    instances
        .iter()
        .enumerate()
        .find_map(|(i, inst)| inst.search(stats).map(|leaf| Found { instance: i, leaf }))
}

fn to_hz(problem: &AllocationProblem, x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|&v| problem.band.lo + v * problem.band.width())
        .collect()
}

fn canonical_hz(
    problem: &AllocationProblem,
    instances: &[Instance],
    found: &Found,
    stats: &mut SolverStats,
) -> Vec<f64> {
    let x = instances[found.instance]
        .canonical_point(&found.leaf, stats)
        .expect("a feasible leaf has a feasible polytope");
    to_hz(problem, &x)
}

/// Decides whether an allocation with conversion separation `delta2` exists;
/// on success returns the canonical (lexicographically smallest) witness.
pub fn feasible_at(problem: &AllocationProblem, delta2: f64) -> Result<FeasibilityOutcome> {
    feasible_at_with_stats(problem, delta2, &mut SolverStats::default())
}

pub(crate) fn feasible_at_with_stats(
    problem: &AllocationProblem,
    delta2: f64,
    stats: &mut SolverStats,
) -> Result<FeasibilityOutcome> {
    if !(delta2 >= 0.0 && delta2.is_finite()) {
        return arg_err(format!(
            "conversion separation must be finite and non-negative, got {delta2}"
        ));
    }
    if !problem.fits_band() {
        return Ok(FeasibilityOutcome::Infeasible);
    }
    let inst = instances(problem, delta2);
    Ok(match find(&inst, stats) {
        Some(found) => FeasibilityOutcome::Feasible(canonical_hz(problem, &inst, &found, stats)),
        None => FeasibilityOutcome::Infeasible,
    })
}

/// Largest conversion separation on the `resolution_hz` grid for which an
/// allocation exists, with its canonical witness.
pub fn maximize_delta(problem: &AllocationProblem, resolution_hz: f64) -> Result<AllocationResult> {
    if !(resolution_hz > 0.0 && resolution_hz.is_finite()) {
        return arg_err(format!("resolution must be positive, got {resolution_hz}"));
    }
    let mut stats = SolverStats::default();
    let infeasible = |stats: SolverStats| AllocationResult {
        problem: problem.clone(),
        freqs_hz: Vec::new(),
        conversions_hz: Vec::new(),
        achieved_delta_hz: 0.0,
        searched_delta_hz: 0.0,
        resolution_hz,
        feasible: false,
        stats,
    };
    if !problem.fits_band() {
        return Ok(infeasible(stats));
    }

    let solve_at = |delta: f64, stats: &mut SolverStats| {
        let inst = instances(problem, delta);
        find(&inst, stats).map(|f| (inst, f))
    };
    let Some(mut best) = solve_at(0.0, &mut stats) else {
        return Ok(infeasible(stats));
    };

    let conversions = problem.conversion_count();
    let searched = if conversions < 2 {
        f64::INFINITY
    } else {
        // the smallest conversion is at least delta_q, the largest at most W
        let ub = (problem.band.width() - problem.delta_q) / (conversions - 1) as f64;
        let (mut lo, mut hi) = (0u64, (ub / resolution_hz).floor() as u64 + 1);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            match solve_at(mid as f64 * resolution_hz, &mut stats) {
                Some(found) => {
                    lo = mid;
                    best = found;
                }
                None => hi = mid,
            }
        }
        lo as f64 * resolution_hz
    };

    let (inst, found) = best;
    let freqs_hz = canonical_hz(problem, &inst, &found, &mut stats);
    let conversions_hz = conversion_frequencies(&freqs_hz)?;
    Ok(AllocationResult {
        problem: problem.clone(),
        achieved_delta_hz: min_adjacent_gap(&conversions_hz),
        freqs_hz,
        conversions_hz,
        searched_delta_hz: searched,
        resolution_hz,
        feasible: true,
        stats,
    })
}
