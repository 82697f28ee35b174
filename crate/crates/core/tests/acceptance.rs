//! Acceptance suite. Each check prints one `PASS`/`FAIL` line, then asserts.
//!
//! Run with `cargo test -p snailbudget --test acceptance -- --nocapture --test-threads 1`.

mod support;

use std::time::{Duration, Instant};

use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use snailbudget::allocation::{
    conversion_frequencies, maximize_delta, min_adjacent_gap, verify_allocation, AllocationProblem,
};
use snailbudget::dynamics::{
    apply_channel, average_gate_fidelity, choi_min_eigenvalue, drive_schedule, ideal_gate,
    simulate_gate, trace_preservation_error,
};
use snailbudget::operators::{CMatrix, HilbertSpace};
use snailbudget::params::log_space;
use snailbudget::sweep::fidelity_grid;
use snailbudget::{Band, ComplexMatrix, Config, GateKind, SpectatorModel};

use support::{lattice_max_delta, MasterEquation, DIM};

const GHZ: f64 = 1e9;
const MHZ: f64 = 1e6;

fn report(id: u32, name: &str, ok: bool, elapsed: Duration, detail: &str) {
    println!(
        "criterion {id} [{name}]: {} ({:.2} s) {detail}",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
}

fn reference_config(kind: GateKind) -> Config {
    let text = match kind {
        GateKind::Iswap => {
            r#"
            n_qubits = 4
            g3_over_2pi_hz = 60e6
            lambda = 0.1
            t1_s = 80e-6
            band_lo_hz = 4.0e9
            band_hi_hz = 5.0e9
            gate = "iswap"
            target_fidelity = 0.99
            delta_q_hz = 180e6
            delta2_q_hz = 150e6
            "#
        }
        GateKind::SqrtIswap => {
            r#"
            n_qubits = 4
            g3_over_2pi_hz = 60e6
            lambda = 0.08
            t1_s = 160e-6
            band_lo_hz = 4.0e9
            band_hi_hz = 6.0e9
            gate = "sqrt_iswap"
            target_fidelity = 0.99
            delta_q_hz = 540e6
            delta2_q_hz = 120e6
            "#
        }
    };
    Config::parse(text).unwrap()
}

/// Printed two-decimal GHz values.
fn two_decimals(hz: &[f64]) -> Vec<i64> {
    hz.iter()
        .map(|f| (f / GHZ * 100.0).round() as i64)
        .collect()
}

fn reference_allocation(
    id: u32,
    name: &str,
    freqs_ghz: &[f64],
    conv_ghz: &[f64],
    band: (f64, f64),
    dq: f64,
    d2: f64,
) {
    let t = Instant::now();
    let freqs: Vec<f64> = freqs_ghz.iter().map(|f| f * GHZ).collect();
    let conv = conversion_frequencies(&freqs).unwrap();
    let want: Vec<i64> = conv_ghz
        .iter()
        .map(|c| (c * 100.0).round() as i64)
        .collect();
    let conv_ok = two_decimals(&conv) == want;
    let problem =
        AllocationProblem::new(4, Band::new(band.0 * GHZ, band.1 * GHZ).unwrap(), dq).unwrap();
    let verify = verify_allocation(&freqs, &problem, d2);
    let elapsed = t.elapsed();
    let ok = conv_ok && verify.ok && elapsed < Duration::from_secs(1);
    report(
        id,
        name,
        ok,
        elapsed,
        &format!(
            "conversions {:?} GHz, min conversion gap {:.0} MHz",
            conv.iter().map(|c| c / GHZ).collect::<Vec<_>>(),
            min_adjacent_gap(&conv) / MHZ
        ),
    );
    assert!(conv_ok, "conversions {conv:?}");
    assert!(verify.ok, "{verify:?}");
    assert!(elapsed < Duration::from_secs(1));
}

#[test]
fn criterion_1_iswap_reference_allocation() {
    reference_allocation(
        1,
        "iSWAP allocation",
        &[4.00, 4.33, 4.81, 4.99],
        &[0.18, 0.33, 0.48, 0.66, 0.81, 0.99],
        (4.0, 5.0),
        180.0 * MHZ,
        150.0 * MHZ,
    );
}

#[test]
fn criterion_2_sqrt_iswap_reference_allocation() {
    reference_allocation(
        2,
        "sqrt-iSWAP allocation",
        &[4.00, 4.78, 5.44, 5.98],
        &[0.54, 0.66, 0.78, 1.20, 1.44, 1.98],
        (4.0, 6.0),
        540.0 * MHZ,
        120.0 * MHZ,
    );
}

#[test]
fn criterion_3_spot_maxima() {
    let band = Band::new(4.0 * GHZ, 6.0 * GHZ).unwrap();
    let mut failures = Vec::new();
    let mut details = Vec::new();
    let t_all = Instant::now();
    for (n, reference) in [(6usize, 120.0 * MHZ), (4, 330.0 * MHZ)] {
        let t = Instant::now();
        let r =
            maximize_delta(&AllocationProblem::new(n, band, 100.0 * MHZ).unwrap(), MHZ).unwrap();
        let elapsed = t.elapsed();
        let achieved = r.achieved_delta_hz;
        details.push(format!(
            "n={n}: achieved {:.3} MHz vs reference {:.0} MHz in {:.2} s",
            achieved / MHZ,
            reference / MHZ,
            elapsed.as_secs_f64()
        ));
        if !(r.feasible && r.verify().ok) {
            failures.push(format!("n={n}: result does not verify"));
        }
        if achieved < reference {
            failures.push(format!(
                "n={n}: achieved {:.3} MHz < {:.0} MHz",
                achieved / MHZ,
                reference / MHZ
            ));
        }
        if elapsed > Duration::from_secs(300) {
            failures.push(format!("n={n}: took {elapsed:?}"));
        }
        if n == 4 {
            let (oracle, _) =
                lattice_max_delta(4, band.lo, band.hi, 100.0 * MHZ, 25.0 * MHZ).unwrap();
            let confirmed =
                oracle <= r.searched_delta_hz && r.searched_delta_hz - oracle <= 25.0 * MHZ;
            details.push(format!("lattice oracle {:.0} MHz", oracle / MHZ));
            if confirmed && (achieved - reference).abs() > 10.0 * MHZ {
                failures.push(format!(
                    "n=4: {:.3} MHz not within 10 MHz of reference",
                    achieved / MHZ
                ));
            }
        }
    }
    let ok = failures.is_empty();
    report(
        3,
        "spot maxima",
        ok,
        t_all.elapsed(),
        &format!("{}; {}", details.join("; "), failures.join("; ")),
    );
    assert!(ok, "{failures:?}");
}

#[test]
fn criterion_4_lattice_oracle() {
    let t = Instant::now();
    let band = Band::new(4.0 * GHZ, 6.0 * GHZ).unwrap();
    let step = 25.0 * MHZ;
    let mut failures = Vec::new();
    let mut details = Vec::new();
    for n in [3usize, 4] {
        for dq in [100.0, 300.0, 500.0] {
            let problem = AllocationProblem::new(n, band, dq * MHZ).unwrap();
            let solver = maximize_delta(&problem, MHZ).unwrap();
            let (oracle, witness) = lattice_max_delta(n, band.lo, band.hi, dq * MHZ, step).unwrap();
            // the lattice optimum must itself check out
            let witness_ok = verify_allocation(&witness, &problem, oracle).ok;
            let witness_tight = !verify_allocation(&witness, &problem, oracle + MHZ).ok;
            let gap = solver.searched_delta_hz - oracle;
            details.push(format!(
                "n={n} dq={dq}: solver {:.0} lattice {:.0}",
                solver.searched_delta_hz / MHZ,
                oracle / MHZ
            ));
            if !(witness_ok && witness_tight && solver.verify().ok && (0.0..=step).contains(&gap)) {
                failures.push(format!("n={n} dq={dq}: gap {:.1} MHz", gap / MHZ));
            }
        }
    }
    let elapsed = t.elapsed();
    if elapsed > Duration::from_secs(600) {
        failures.push(format!("took {elapsed:?}"));
    }
    let ok = failures.is_empty();
    report(
        4,
        "lattice oracle",
        ok,
        elapsed,
        &format!("{}; {}", details.join(", "), failures.join("; ")),
    );
    assert!(ok, "{failures:?}");
}

fn to_matrix(op: &[C]) -> ComplexMatrix {
    CMatrix::from_row_major(DIM, DIM, op.to_vec()).unwrap()
}

fn random_state(rng: &mut ChaCha8Rng) -> Vec<C> {
    (0..DIM)
        .map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

#[test]
fn criterion_5_cptp_and_integrator() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let base = reference_config(GateKind::Iswap);
    let (mut worst_tp, mut worst_eig, mut worst_rk4) = (0.0f64, f64::INFINITY, 0.0f64);
    let mut hermitian = true;
    for _ in 0..50 {
        let eta = log_uniform(&mut rng, 0.05, 4.0);
        let delta2 = log_uniform(&mut rng, 10.0 * MHZ, 1.0 * GHZ);
        let t1 = log_uniform(&mut rng, 10e-6, 500e-6);
        let mut cfg = base.clone();
        cfg.device.t1_per_qubit = vec![t1; 4];
        let result = simulate_gate(&cfg, eta, delta2).unwrap();
        let channel = &result.channel;
        worst_tp = worst_tp.max(trace_preservation_error(channel, DIM));
        worst_eig = worst_eig.min(choi_min_eigenvalue(channel, DIM).unwrap());

        // independent rates: Ω = 6 η λ² 2π g3, t_f = θ/Ω, spectator angle matched over t_f
        let rate = 6.0 * eta * 0.1f64.powi(2) * 2.0 * std::f64::consts::PI * 60e6;
        let t_f = std::f64::consts::FRAC_PI_2 / rate;
        let spectator = 2.0 * rate / (2.0 * std::f64::consts::PI * delta2 * 2f64.ln() * t_f);
        let sched = drive_schedule(&cfg, eta, delta2, SpectatorModel::AngleMatched).unwrap();
        assert!((sched.t_f - t_f).abs() <= 1e-12 * t_f);
        assert!((sched.spectator_rate - spectator).abs() <= 1e-9 * spectator.max(1.0));

        let me = MasterEquation::gate(rate, spectator, [1.0 / t1; 4]);
        let inputs = [
            support::pure(&random_state(&mut rng)),
            support::outer(0b0101, 0b1010),
            support::outer(0b1111, 0b0000),
        ];
        for rho in &inputs {
            let reference = me.rk4(rho, t_f, 1 << 14);
            let out = apply_channel(channel, &to_matrix(rho));
            worst_rk4 = worst_rk4.max(support::max_abs_diff(out.as_slice(), &reference));
        }
        let out = apply_channel(channel, &to_matrix(&inputs[0]));
        hermitian &= out.is_hermitian(1e-12);
    }
    let elapsed = t.elapsed();
    let ok = worst_tp <= 1e-9
        && worst_eig >= -1e-8
        && worst_rk4 <= 1e-8
        && hermitian
        && elapsed < Duration::from_secs(300);
    report(
        5,
        "CPTP suite",
        ok,
        elapsed,
        &format!("trace err {worst_tp:.2e}, Choi min eig {worst_eig:.2e}, integrator diff {worst_rk4:.2e}"),
    );
    assert!(ok);
}

#[test]
fn criterion_6_noiseless_exactness() {
    let t = Instant::now();
    let mut worst = 1.0f64;
    for kind in [GateKind::Iswap, GateKind::SqrtIswap] {
        let mut cfg = reference_config(kind);
        cfg.device.t1_per_qubit = vec![f64::INFINITY; 4];
        cfg.spectator_model = SpectatorModel::Off;
        for eta in [0.05, 0.3, 1.0, 4.0] {
            for delta2 in [10.0 * MHZ, 150.0 * MHZ, 1.0 * GHZ] {
                worst = worst.min(simulate_gate(&cfg, eta, delta2).unwrap().avg_fidelity);
            }
        }
    }
    let ok = worst >= 1.0 - 1e-9;
    report(
        6,
        "noiseless exactness",
        ok,
        t.elapsed(),
        &format!("min F = {worst:.15}"),
    );
    assert!(ok);
}

#[test]
fn criterion_7_analytic_anchors() {
    let t = Instant::now();
    let space = HilbertSpace::four_qubits();
    let u = ideal_gate::<f64>(GateKind::Iswap, &space).unwrap();

    // ρ → Tr(ρ) I/16 is vec(I) vec(I)ᵀ / 16 in column-stacked form
    let depolarizing = CMatrix::from_fn(DIM * DIM, DIM * DIM, |r, c| {
        let (diag_r, diag_c) = (r % (DIM + 1) == 0, c % (DIM + 1) == 0);
        if diag_r && diag_c {
            C::new(1.0 / DIM as f64, 0.0)
        } else {
            C::new(0.0, 0.0)
        }
    });
    let f_dep = average_gate_fidelity(&depolarizing, &u, DIM).unwrap();

    // X on mode 0, scored against the identity
    let x = CMatrix::from_fn(DIM, DIM, |r, c| {
        if r ^ c == 0b1000 {
            C::new(1.0, 0.0)
        } else {
            C::new(0.0, 0.0)
        }
    });
    let pauli_channel = x.conj().kron(&x);
    let f_pauli = average_gate_fidelity(&pauli_channel, &CMatrix::identity(DIM), DIM).unwrap();

    let ok = (f_dep - 1.0 / 16.0).abs() <= 1e-12 && (f_pauli - 1.0 / 17.0).abs() <= 1e-12;
    report(
        7,
        "analytic anchors",
        ok,
        t.elapsed(),
        &format!("depolarizing F = {f_dep:.15}, Pauli F = {f_pauli:.15}"),
    );
    assert!(ok);
}

#[test]
fn criterion_8_two_regimes() {
    let t = Instant::now();
    let cfg = reference_config(GateKind::Iswap);
    let etas = log_space(cfg.sweep.eta_min, cfg.sweep.eta_max, 12);
    let scan: Vec<f64> = etas
        .iter()
        .map(|&eta| simulate_gate(&cfg, eta, 150.0 * MHZ).unwrap().avg_fidelity)
        .collect();
    let (imax, fmax) =
        scan.iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |a, (i, f)| if f > a.1 { (i, f) } else { a },
            );
    let interior =
        imax > 0 && imax < scan.len() - 1 && scan[0] < fmax && scan[scan.len() - 1] < fmax;

    let grid = fidelity_grid(&cfg, &cfg.sweep.eta_axis(), &cfg.sweep.delta_axis()).unwrap();
    let above = grid.values.iter().flatten().filter(|&&f| f >= 0.99).count();
    let below = grid.values.iter().flatten().filter(|&&f| f < 0.99).count();
    let elapsed = t.elapsed();
    let ok = interior && above > 0 && below > 0 && elapsed < Duration::from_secs(600);
    report(
        8,
        "two regimes",
        ok,
        elapsed,
        &format!(
            "peak F {fmax:.5} at η = {:.3} (ends {:.5}, {:.5}); 40x40 grid: {above} points ≥ 0.99, {below} below",
            etas[imax],
            scan[0],
            scan[scan.len() - 1]
        ),
    );
    assert!(ok, "{scan:?}");
}

#[test]
fn criterion_9_monotonicity_ladders() {
    let t = Instant::now();
    let cfg = reference_config(GateKind::Iswap);
    let ladder: Vec<f64> = [150.0, 250.0, 350.0, 450.0, 600.0]
        .iter()
        .map(|&d| simulate_gate(&cfg, 1.0, d * MHZ).unwrap().avg_fidelity)
        .collect();
    let fidelity_ok = ladder.windows(2).all(|w| w[1] >= w[0]);

    let band = Band::new(4.0 * GHZ, 6.0 * GHZ).unwrap();
    let by_n: Vec<f64> = (2..=6)
        .map(|n| {
            let r = maximize_delta(&AllocationProblem::new(n, band, 100.0 * MHZ).unwrap(), MHZ)
                .unwrap();
            assert!(r.verify().ok);
            r.searched_delta_hz
        })
        .collect();
    let n_ok = by_n.windows(2).all(|w| w[1] <= w[0]);

    let by_dq: Vec<f64> = (1..=6)
        .map(|k| {
            let r = maximize_delta(
                &AllocationProblem::new(4, band, k as f64 * 100.0 * MHZ).unwrap(),
                MHZ,
            )
            .unwrap();
            assert!(r.verify().ok);
            r.searched_delta_hz
        })
        .collect();
    let dq_ok = by_dq.windows(2).all(|w| w[1] <= w[0]);

    let ok = fidelity_ok && n_ok && dq_ok;
    let mhz = |v: &[f64]| v.iter().map(|x| x / MHZ).collect::<Vec<_>>();
    report(
        9,
        "monotonicity ladders",
        ok,
        t.elapsed(),
        &format!(
            "F(δ) {ladder:?}; δ*(n) {:?} MHz; δ*(Δ_Q) {:?} MHz",
            mhz(&by_n),
            mhz(&by_dq)
        ),
    );
    assert!(ok);
}
