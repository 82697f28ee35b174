//! Reference computations for the integration suites. Nothing here calls
//! into the crate's operator, dynamics or solver code.

#![allow(dead_code)]

use num_complex::Complex64 as C;

pub const MODES: usize = 4;
pub const DIM: usize = 1 << MODES;

/// Row-major `DIM × DIM` operator.
pub type Op = Vec<C>;

fn bit(mode: usize) -> usize {
    // mode 0 is the most significant tensor factor
    1 << (MODES - 1 - mode)
}

/// Nonzero entries `(row, col, value)`.
pub type Sparse = Vec<(usize, usize, C)>;

pub fn lowering(mode: usize) -> Sparse {
    (0..DIM)
        .filter(|s| s & bit(mode) != 0)
        .map(|s| (s ^ bit(mode), s, C::new(1.0, 0.0)))
        .collect()
}

/// `g (a_i† a_j + a_i a_j†)` restricted to one excitation per mode.
pub fn exchange(i: usize, j: usize, g: f64) -> Sparse {
    let mut out = Vec::new();
    for s in 0..DIM {
        let (bi, bj) = (s & bit(i) != 0, s & bit(j) != 0);
        if bj && !bi {
            let t = s ^ bit(i) ^ bit(j);
            out.push((t, s, C::new(g, 0.0)));
            out.push((s, t, C::new(g, 0.0)));
        }
    }
    out
}

pub struct MasterEquation {
    pub hamiltonian: Sparse,
    /// `(γ, mode)` for amplitude damping on each mode.
    pub damping: Vec<(f64, usize)>,
}

impl MasterEquation {
    pub fn gate(rate: f64, spectator_rate: f64, gammas: [f64; MODES]) -> Self {
        let mut hamiltonian = exchange(0, 1, rate);
        hamiltonian.extend(exchange(2, 3, spectator_rate));
        Self {
            hamiltonian,
            damping: gammas.iter().copied().zip(0..MODES).collect(),
        }
    }

    /// `−i[H, ρ] + Σ γ (a ρ a† − ½{a†a, ρ})`.
    pub fn rhs(&self, rho: &Op) -> Op {
        let mut out = vec![C::new(0.0, 0.0); DIM * DIM];
        let mi = C::new(0.0, -1.0);
        for &(r, c, h) in &self.hamiltonian {
            for k in 0..DIM {
                // H ρ and ρ H
                out[r * DIM + k] += mi * h * rho[c * DIM + k];
                out[k * DIM + c] -= mi * rho[k * DIM + r] * h;
            }
        }
        for &(gamma, mode) in &self.damping {
            if gamma == 0.0 {
                continue;
            }
            let a = lowering(mode);
            for &(r1, c1, v1) in &a {
                for &(r2, c2, v2) in &a {
                    out[r1 * DIM + r2] += gamma * v1 * rho[c1 * DIM + c2] * v2.conj();
                }
            }
            let b = bit(mode);
            for r in 0..DIM {
                for c in 0..DIM {
                    let n = ((r & b != 0) as u8 + (c & b != 0) as u8) as f64;
                    out[r * DIM + c] -= 0.5 * gamma * n * rho[r * DIM + c];
                }
            }
        }
        out
    }

    /// Classical fourth-order Runge-Kutta with `steps` equal steps.
    pub fn rk4(&self, rho0: &Op, t: f64, steps: usize) -> Op {
        let h = t / steps as f64;
        let axpy =
            |x: &Op, a: f64, y: &Op| -> Op { x.iter().zip(y).map(|(x, y)| x + a * y).collect() };
        let mut rho = rho0.clone();
        for _ in 0..steps {
            let k1 = self.rhs(&rho);
            let k2 = self.rhs(&axpy(&rho, h / 2.0, &k1));
            let k3 = self.rhs(&axpy(&rho, h / 2.0, &k2));
            let k4 = self.rhs(&axpy(&rho, h, &k3));
            for i in 0..rho.len() {
                rho[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
        rho
    }
}

/// `|ψ⟩⟨ψ|` for a normalized amplitude vector.
pub fn pure(psi: &[C]) -> Op {
    let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut out = vec![C::new(0.0, 0.0); DIM * DIM];
    for r in 0..DIM {
        for c in 0..DIM {
            out[r * DIM + c] = psi[r] * psi[c].conj() / (norm * norm);
        }
    }
    out
}

pub fn outer(r: usize, c: usize) -> Op {
    let mut out = vec![C::new(0.0, 0.0); DIM * DIM];
    out[r * DIM + c] = C::new(1.0, 0.0);
    out
}

pub fn max_abs_diff(a: &[C], b: &[C]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Exhaustive search over allocations whose frequencies sit on
/// `lo + k·step`. Returns the best minimum conversion gap and its allocation.
pub fn lattice_max_delta(
    n: usize,
    lo: f64,
    hi: f64,
    delta_q: f64,
    step: f64,
) -> Option<(f64, Vec<f64>)> {
    let width = ((hi - lo) / step).round() as i64;
    let dq = (delta_q / step).ceil() as i64;
    let mut best: Option<(i64, Vec<i64>)> = None;
    let mut marks = vec![0i64];
    fn recurse(
        n: usize,
        width: i64,
        dq: i64,
        marks: &mut Vec<i64>,
        best: &mut Option<(i64, Vec<i64>)>,
    ) {
        if marks.len() == n {
            let mut conv: Vec<i64> = Vec::new();
            for j in 0..n {
                for i in 0..j {
                    conv.push(marks[j] - marks[i]);
                }
            }
            conv.sort_unstable();
            let gap = conv
                .windows(2)
                .map(|w| w[1] - w[0])
                .min()
                .unwrap_or(i64::MAX);
            if best.as_ref().is_none_or(|(g, _)| gap > *g) {
                *best = Some((gap, marks.clone()));
            }
            return;
        }
        let last = *marks.last().unwrap();
        let remaining = (n - marks.len()) as i64;
        for next in last + dq..=width - (remaining - 1) * dq {
            marks.push(next);
            recurse(n, width, dq, marks, best);
            marks.pop();
        }
    }
    if (n as i64 - 1) * dq > width {
        return None;
    }
    recurse(n, width, dq, &mut marks, &mut best);
    best.map(|(g, m)| {
        (
            g as f64 * step,
            m.iter().map(|&k| lo + k as f64 * step).collect(),
        )
    })
}
