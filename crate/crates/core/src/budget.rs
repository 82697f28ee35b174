//! End-to-end budget: pump amplitude, the conversion separation it needs to
//! reach the target fidelity, and an allocation that provides it.
//!
//! η is ranked by spectator-free fidelity over the config's η axis (the
//! T1-limited optimum comes first). The first η, in that order, whose
//! separation threshold lies inside the config's δ window is used.

use serde::{Deserialize, Serialize};

use crate::allocation::{
    maximize_delta, min_adjacent_gap, verify_allocation, AllocationProblem, AllocationResult,
};
use crate::dynamics::{simulate_gate_with, EvolutionRoute};
use crate::error::{arg_err, Error, Result};
use crate::params::{Config, SpectatorModel};
use crate::sweep::min_delta_for_target;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BudgetOptions {
    /// Use this separation instead of bisecting for it.
    pub min_delta2_override: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetStatus {
    Met,
    AllocationInfeasible,
    FidelityUnreachable,
}

/// One expected-versus-obtained row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub quantity: String,
    pub expected: f64,
    pub obtained: f64,
    /// `obtained` meets or beats `expected`.
    pub meets: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetReport {
    pub status: BudgetStatus,
    pub gate: String,
    pub target_fidelity: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_f_s: Option<f64>,
    /// Fidelity at the chosen η with the spectator removed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectator_free_fidelity: Option<f64>,
    /// Higher-ranked η values passed over because no δ in the window met the target.
    pub eta_skipped: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_delta2_hz: Option<f64>,
    /// `"bisection"` or `"override"`.
    pub min_delta2_source: String,
    pub comparisons: Vec<Comparison>,
    /// Config document the report was produced from.
    pub config: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub allocation: Option<AllocationResult>,
}

impl BudgetReport {
    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("budget report serializes")
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("budget report: {}", e.message())))
    }

    /// Re-checks the allocation against the report's own separations.
    pub fn self_consistent(&self) -> bool {
        let Some(alloc) = &self.allocation else {
            return self.status != BudgetStatus::Met;
        };
        if !alloc.verify().ok {
            return false;
        }
        match (self.status, self.min_delta2_hz) {
            (BudgetStatus::Met, Some(d)) => {
                verify_allocation(&alloc.freqs_hz, &alloc.problem, d).ok
            }
            (BudgetStatus::Met, None) => false,
            _ => true,
        }
    }
}

/// η values of the config's axis with their spectator-free fidelity, best first.
pub fn rank_eta(config: &Config) -> Result<Vec<(f64, f64)>> {
    let mut ranked = config
        .sweep
        .eta_axis()
        .into_iter()
        .map(|eta| {
            simulate_gate_with(
                config,
                eta,
                1.0,
                SpectatorModel::Off,
                EvolutionRoute::Factorized,
            )
            .map(|r| (eta, r.avg_fidelity))
        })
        .collect::<Result<Vec<_>>>()?;
    // stable: equal fidelities keep the axis order
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1));
    Ok(ranked)
}

pub fn run_budget(config: &Config, options: BudgetOptions) -> Result<BudgetReport> {
    let sw = &config.sweep;
    let target = config.gate.target_fidelity;
    if let Some(d) = options.min_delta2_override {
        if !(d > 0.0 && d.is_finite()) {
            return arg_err(format!("separation override must be positive, got {d}"));
        }
    }
    let problem = AllocationProblem::from_config(config)?;

    let mut report = BudgetReport {
        status: BudgetStatus::FidelityUnreachable,
        gate: config.gate.kind.as_str().into(),
        target_fidelity: target,
        eta: None,
        t_f_s: None,
        spectator_free_fidelity: None,
        eta_skipped: 0,
        min_delta2_hz: None,
        min_delta2_source: if options.min_delta2_override.is_some() {
            "override".into()
        } else {
            "bisection".into()
        },
        comparisons: Vec::new(),
        config: config.to_toml_string(),
        allocation: None,
    };

    let mut chosen = None;
    for (rank, (eta, free)) in rank_eta(config)?.into_iter().enumerate() {
        let min_delta = match options.min_delta2_override {
            Some(d) => Some(d),
            None => min_delta_for_target(
                config,
                eta,
                target,
                sw.delta_min_hz,
                sw.delta_max_hz,
                sw.bisect_tol_hz,
            )?,
        };
        if let Some(d) = min_delta {
            chosen = Some((rank, eta, free, d));
            break;
        }
    }
    let Some((rank, eta, free, min_delta)) = chosen else {
        return Ok(report);
    };
    let sched = crate::dynamics::drive_schedule(config, eta, min_delta, config.spectator_model)?;
    report.eta = Some(eta);
    report.t_f_s = Some(sched.t_f);
    report.spectator_free_fidelity = Some(free);
    report.eta_skipped = rank;
    report.min_delta2_hz = Some(min_delta);

    let alloc = maximize_delta(&problem, sw.resolution_hz)?;
    let expected = config.separations.delta2_q;
    report.comparisons.push(Comparison {
        quantity: "min_delta2_hz".into(),
        expected,
        obtained: min_delta,
        meets: min_delta <= expected,
    });
    if alloc.feasible {
        report.comparisons.push(Comparison {
            quantity: "achieved_delta2_hz".into(),
            expected,
            obtained: alloc.achieved_delta_hz,
            meets: alloc.achieved_delta_hz >= expected,
        });
        report.comparisons.push(Comparison {
            quantity: "min_qubit_gap_hz".into(),
            expected: config.separations.delta_q,
            obtained: min_adjacent_gap(&alloc.freqs_hz),
            meets: min_adjacent_gap(&alloc.freqs_hz) >= config.separations.delta_q,
        });
    }
    report.status = if alloc.feasible && alloc.searched_delta_hz >= min_delta {
        BudgetStatus::Met
    } else {
        BudgetStatus::AllocationInfeasible
    };
    report.allocation = Some(alloc);
    if !report.self_consistent() {
        return Err(Error::InvalidArgument(
            "budget report failed its own allocation check".into(),
        ));
    }
    Ok(report)
}
