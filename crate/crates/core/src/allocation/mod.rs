//! Discrete qubit-frequency allocation.
//!
//! `n` qubit frequencies are placed in a band, adjacent qubits at least
//! `delta_q` apart, so that the `C(n, 2)` conversion frequencies (pairwise
//! differences) are as far apart from each other as possible. The search
//! bisects on the conversion separation over an exact feasibility test
//! ([`feasible_at`]); [`verify_allocation`] re-checks any candidate without
//! sharing code with the solver.

mod search;
pub mod simplex;

use serde::{Deserialize, Serialize};

pub use search::{feasible_at, maximize_delta, FeasibilityOutcome, SolverStats};
pub use simplex::{simplex_feasible, LinearProgram, LpOutcome, LpScalar, Relation};

use crate::error::{arg_err, Error, Result};
use crate::params::{Band, Config};

/// Optional constraints involving the SNAIL mode frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnailConstraints {
    pub snail_freq: f64,
    /// Minimum |ω_i − ω_s|.
    pub delta_s: f64,
    /// Minimum separation between SNAIL-qubit conversions |ω_i − ω_s| and
    /// qubit-qubit conversions.
    pub delta_s_conv: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllocationProblem {
    pub n: usize,
    pub band: Band,
    pub delta_q: f64,
    pub snail: Option<SnailConstraints>,
}

impl AllocationProblem {
    pub fn new(n: usize, band: Band, delta_q: f64) -> Result<Self> {
        if n < 2 {
            return arg_err(format!("allocation needs at least 2 qubits, got {n}"));
        }
        if !(band.lo > 0.0 && band.lo < band.hi) {
            return arg_err(format!("invalid band [{}, {}]", band.lo, band.hi));
        }
        if !(delta_q > 0.0 && delta_q.is_finite()) {
            return arg_err(format!(
                "minimum qubit separation must be positive, got {delta_q}"
            ));
        }
        Ok(Self {
            n,
            band,
            delta_q,
            snail: None,
        })
    }

    pub fn with_snail(mut self, snail: SnailConstraints) -> Result<Self> {
        if !(snail.snail_freq > 0.0 && snail.delta_s > 0.0)
            || snail.delta_s_conv.is_some_and(|d| d <= 0.0)
        {
            return arg_err("SNAIL constraints must be positive");
        }
        self.snail = Some(snail);
        Ok(self)
    }

    /// Problem described by a config: qubit count, band, `delta_q`, and the
    /// SNAIL constraints when a SNAIL frequency and `delta_s` are both given.
    pub fn from_config(config: &Config) -> Result<Self> {
        let sep = &config.separations;
        if sep.delta4_q.is_some() {
            return Err(Error::NotImplemented(
                "inter-module conversion separation (delta4_q_hz)",
            ));
        }
        let p = Self::new(config.device.n_qubits, config.device.bandwidth, sep.delta_q)?;
        match (config.device.snail_freq, sep.delta_s, sep.delta_s_conv) {
            (Some(f), Some(ds), conv) => p.with_snail(SnailConstraints {
                snail_freq: f,
                delta_s: ds,
                delta_s_conv: conv,
            }),
            (None, None, None) => Ok(p),
            (None, _, _) => arg_err("SNAIL separations given without snail_freq_hz"),
            (Some(_), None, _) => arg_err("snail_freq_hz given without delta_s_hz"),
        }
    }

    /// Number of conversion frequencies, `C(n, 2)`.
    pub fn conversion_count(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    /// Room for `n` qubits at `delta_q` spacing.
    pub fn fits_band(&self) -> bool {
        (self.n - 1) as f64 * self.delta_q <= self.band.width()
    }
}

/// All pairwise differences `f_j − f_i` (`j > i`), ascending.
pub fn conversion_frequencies(freqs: &[f64]) -> Result<Vec<f64>> {
    if freqs.windows(2).any(|w| !(w[0] < w[1])) {
        return arg_err("qubit frequencies must be strictly increasing");
    }
    let mut conv: Vec<f64> = freqs
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| freqs[i + 1..].iter().map(move |&b| b - a))
        .collect();
    conv.sort_by(f64::total_cmp);
    Ok(conv)
}

/// Smallest adjacent gap of a sorted list; `+∞` with fewer than two entries.
pub fn min_adjacent_gap(sorted: &[f64]) -> f64 {
    sorted
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min)
}

/// Relative slack used by [`verify_allocation`], in units of the band's upper edge.
pub const VERIFY_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// Wrong number of frequencies.
    QubitCount { expected: usize, found: usize },
    /// Frequency outside the band; `margin` is the distance outside (Hz).
    OutOfBand {
        qubit: usize,
        freq: f64,
        margin: f64,
    },
    /// Two qubits closer than `delta_q`.
    QubitSeparation {
        a: usize,
        b: usize,
        gap: f64,
        margin: f64,
    },
    /// Two conversions (qubit index pairs) closer than the required separation.
    ConversionSeparation {
        first: (usize, usize),
        second: (usize, usize),
        gap: f64,
        margin: f64,
    },
    /// Qubit closer to the SNAIL than `delta_s`.
    SnailSeparation { qubit: usize, gap: f64, margin: f64 },
    /// SNAIL-qubit conversion too close to a qubit-qubit conversion.
    SnailConversion {
        qubit: usize,
        pair: (usize, usize),
        gap: f64,
        margin: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("verification report serializes")
    }
}

/// Checks a candidate allocation against every constraint, by brute force
/// over all qubit and conversion pairs. Negative margins mark violations.
pub fn verify_allocation(
    freqs: &[f64],
    problem: &AllocationProblem,
    delta2: f64,
) -> VerificationReport {
    let tol = VERIFY_REL_TOL * problem.band.hi.abs().max(problem.band.lo.abs());
    let mut violations = Vec::new();
    if freqs.len() != problem.n {
        violations.push(Violation::QubitCount {
            expected: problem.n,
            found: freqs.len(),
        });
    }
    for (q, &f) in freqs.iter().enumerate() {
        let outside = (problem.band.lo - f).max(f - problem.band.hi);
        if outside > tol || f.is_nan() {
            violations.push(Violation::OutOfBand {
                qubit: q,
                freq: f,
                margin: -outside,
            });
        }
    }
    for a in 0..freqs.len() {
        for b in a + 1..freqs.len() {
            let gap = (freqs[b] - freqs[a]).abs();
            if gap < problem.delta_q - tol {
                violations.push(Violation::QubitSeparation {
                    a,
                    b,
                    gap,
                    margin: gap - problem.delta_q,
                });
            }
        }
    }
    let pairs: Vec<(usize, usize)> = (0..freqs.len())
        .flat_map(|i| (i + 1..freqs.len()).map(move |j| (i, j)))
        .collect();
    let conv = |&(i, j): &(usize, usize)| (freqs[j] - freqs[i]).abs();
    for (x, p) in pairs.iter().enumerate() {
        for q in &pairs[x + 1..] {
            let gap = (conv(p) - conv(q)).abs();
            if gap < delta2 - tol {
                violations.push(Violation::ConversionSeparation {
                    first: *p,
                    second: *q,
                    gap,
                    margin: gap - delta2,
                });
            }
        }
    }
    if let Some(s) = &problem.snail {
        for (q, &f) in freqs.iter().enumerate() {
            let gap = (f - s.snail_freq).abs();
            if gap < s.delta_s - tol {
                violations.push(Violation::SnailSeparation {
                    qubit: q,
                    gap,
                    margin: gap - s.delta_s,
                });
            }
            if let Some(dc) = s.delta_s_conv {
                for p in &pairs {
                    let g = (gap - conv(p)).abs();
                    if g < dc - tol {
                        violations.push(Violation::SnailConversion {
                            qubit: q,
                            pair: *p,
                            gap: g,
                            margin: g - dc,
                        });
                    }
                }
            }
        }
    }
    VerificationReport {
        ok: violations.is_empty(),
        violations,
    }
}

/// Solver output: witness frequencies and the separation they achieve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllocationResult {
    pub problem: AllocationProblem,
    /// Ascending qubit frequencies (Hz); empty when infeasible.
    pub freqs_hz: Vec<f64>,
    /// Ascending conversion frequencies (Hz).
    pub conversions_hz: Vec<f64>,
    /// Smallest adjacent gap of `conversions_hz`; `+∞` with fewer than two conversions.
    pub achieved_delta_hz: f64,
    /// Largest separation on the resolution grid proven feasible.
    pub searched_delta_hz: f64,
    pub resolution_hz: f64,
    pub feasible: bool,
    pub stats: SolverStats,
}

impl AllocationResult {
    pub fn verify(&self) -> VerificationReport {
        verify_allocation(
            &self.freqs_hz,
            &self.problem,
            self.achieved_delta_hz.min(self.searched_delta_hz),
        )
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("allocation result serializes")
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("allocation record: {}", e.message())))
    }
}
