//! Worst-case target + spectator conversion dynamics under amplitude damping.
//!
//! Superoperators act on column-stacked density matrices: `vec(ρ)[j·d + i] =
//! ρ[i, j]`, so `vec(A ρ B) = (Bᵀ ⊗ A) vec(ρ)` and a unitary `U` acts as
//! `Ū ⊗ U`.
//!
//! The simulated register has four modes. Modes 0 and 1 carry the driven
//! conversion, modes 2 and 3 carry one spectator conversion whose rate
//! absorbs both neighbouring spectators of the target.

use std::f64::consts::LN_2;

use num_traits::{One, Zero};

use crate::error::{arg_err, dim_err, Result};
use crate::operators::{
    expm, hermitian_eigenvalues, hs_inner, lowering_operators, CMatrix, HilbertSpace,
};
use crate::params::{to_angular, Config, GateKind, SpectatorModel};
use crate::scalar::{cx, re, Cx, Real};

/// Conversion drive rate `6·η·g₃·λ²` in rad/s.
pub fn target_rate<T: Real>(eta: T, g3_over_2pi: T, lambda: T) -> T {
    T::lit(6.0) * eta * to_angular(g3_over_2pi) * lambda * lambda
}

/// Time for a conversion at `rate` to accumulate rotation `theta`.
pub fn gate_duration<T: Real>(rate: T, theta: T) -> Result<T> {
    if !(rate > T::zero()) {
        return arg_err(format!("gate rate must be positive, got {rate}"));
    }
    Ok(theta / rate)
}

/// Static spectator rate for conversion separation `delta2` (Hz).
///
/// `AngleMatched` picks the rate whose angle over `t_f` equals the
/// worst-case bound `(2/ln 2)·rate/(2π·delta2)`; `Literal` multiplies the
/// target rate by `2/(δ_MHz·ln 2)`.
pub fn spectator_rate<T: Real>(rate: T, delta2: T, t_f: T, model: SpectatorModel) -> Result<T> {
    if !(delta2 > T::zero()) {
        return arg_err(format!(
            "conversion separation must be positive, got {delta2}"
        ));
    }
    let ln2 = T::lit(LN_2);
    let two = T::lit(2.0);
    match model {
        SpectatorModel::AngleMatched => {
            if !(t_f > T::zero()) {
                return arg_err(format!("gate duration must be positive, got {t_f}"));
            }
            Ok(two * rate / (to_angular(delta2) * ln2 * t_f))
        }
        SpectatorModel::Literal => Ok(rate * two / (delta2 * T::lit(1e-6) * ln2)),
        SpectatorModel::Off => Ok(T::zero()),
    }
}

/// `q_i† q_j + q_i q_j†` on `space`.
pub fn conversion_term<T: Real>(i: usize, j: usize, space: &HilbertSpace) -> Result<CMatrix<T>> {
    let ops = lowering_operators::<T>(space)?;
    let (Some(qi), Some(qj)) = (ops.get(i), ops.get(j)) else {
        return arg_err(format!("modes ({i}, {j}) out of range"));
    };
    let a = qi.adjoint().matmul(qj);
    let b = a.adjoint();
    Ok(&a + &b)
}

/// `rate·(q₀†q₁ + h.c.) + spec_rate·(q₂†q₃ + h.c.)` on a four-mode space.
pub fn build_hamiltonian<T: Real>(
    rate: T,
    spec_rate: T,
    space: &HilbertSpace,
) -> Result<CMatrix<T>> {
    if space.n_modes() != 4 {
        return dim_err(format!(
            "target+spectator Hamiltonian needs 4 modes, got {}",
            space.n_modes()
        ));
    }
    let mut h = conversion_term::<T>(0, 1, space)?.scale_real(rate);
    if !spec_rate.is_zero() {
        h.axpy(re(spec_rate), &conversion_term::<T>(2, 3, space)?);
    }
    Ok(h)
}

/// Lindblad generator with one amplitude-damping channel per mode.
pub fn build_liouvillian<T: Real>(
    h: &CMatrix<T>,
    decay_rates: &[T],
    space: &HilbertSpace,
) -> Result<CMatrix<T>> {
    let d = space.total_dim();
    if h.shape() != (d, d) {
        return dim_err(format!(
            "Hamiltonian {:?} on a space of dimension {d}",
            h.shape()
        ));
    }
    if decay_rates.len() != space.n_modes() {
        return dim_err(format!(
            "{} decay rates for {} modes",
            decay_rates.len(),
            space.n_modes()
        ));
    }
    if let Some(g) = decay_rates.iter().find(|g| !(**g >= T::zero())) {
        return arg_err(format!("decay rates must be non-negative, got {g}"));
    }
    let eye = CMatrix::identity(d);
    let minus_i = cx(T::zero(), -T::one());
    let mut l = eye.kron(h).scale(minus_i);
    l.axpy(-minus_i, &h.transpose().kron(&eye));

    let half = T::lit(0.5);
    for (q, &gamma) in lowering_operators::<T>(space)?.iter().zip(decay_rates) {
        if gamma.is_zero() {
            continue;
        }
        let n = q.adjoint().matmul(q);
        l.axpy(re(gamma), &q.conj().kron(q));
        l.axpy(re(-gamma * half), &eye.kron(&n));
        l.axpy(re(-gamma * half), &n.transpose().kron(&eye));
    }
    Ok(l)
}

/// `exp(L·t)`.
pub fn evolve<T: Real>(liouvillian: &CMatrix<T>, t: T) -> Result<CMatrix<T>> {
    if t < T::zero() {
        return arg_err(format!("evolution time must be non-negative, got {t}"));
    }
    expm(&liouvillian.scale_real(t))
}

/// Ideal gate `exp(−iθ(q₀†q₁ + q₀q₁†))`, identity on the remaining modes.
pub fn ideal_gate<T: Real>(kind: GateKind, space: &HilbertSpace) -> Result<CMatrix<T>> {
    if space.n_modes() < 2 {
        return dim_err("ideal gate needs at least two modes");
    }
    let g = conversion_term::<T>(0, 1, space)?;
    expm(&g.scale(cx(T::zero(), -T::lit(kind.theta()))))
}

/// Column-stacked superoperator of `ρ ↦ UρU†`, i.e. `Ū ⊗ U`.
pub fn unitary_superoperator<T: Real>(u: &CMatrix<T>) -> CMatrix<T> {
    u.conj().kron(u)
}

/// Average gate fidelity `(d·Re F_pro + 1)/(d + 1)` of `channel` against `u`,
/// with `F_pro = Tr(S_U† Λ)/d²`.
pub fn average_gate_fidelity<T: Real>(
    channel: &CMatrix<T>,
    u: &CMatrix<T>,
    dim: usize,
) -> Result<T> {
    if u.shape() != (dim, dim) || channel.shape() != (dim * dim, dim * dim) {
        return dim_err(format!(
            "fidelity of {:?} channel against {:?} unitary at d={dim}",
            channel.shape(),
            u.shape()
        ));
    }
    let f_pro = process_fidelity(channel, u)?;
    let d = T::lit(dim as f64);
    Ok((d * f_pro + T::one()) / (d + T::one()))
}

/// `Re Tr(S_U† Λ)/d²`.
pub fn process_fidelity<T: Real>(channel: &CMatrix<T>, u: &CMatrix<T>) -> Result<T> {
    let d = u.rows();
    let s = unitary_superoperator(u);
    let overlap = hs_inner(&s, channel)?;
    Ok(overlap.re / T::lit((d * d) as f64))
}

/// Maximum deviation of `vec(I)† Λ` from `vec(I)†`.
pub fn trace_preservation_error<T: Real>(channel: &CMatrix<T>, dim: usize) -> T {
    let dd = dim * dim;
    assert_eq!(channel.shape(), (dd, dd), "channel shape");
    (0..dd)
        .map(|m| {
            let s: Cx<T> = (0..dim).map(|k| channel[(k * dim + k, m)]).sum();
            let want = if m % (dim + 1) == 0 {
                Cx::one()
            } else {
                Cx::zero()
            };
            (s - want).norm()
        })
        .fold(T::zero(), T::max)
}

/// Choi matrix `Σ |i⟩⟨j| ⊗ Λ(|i⟩⟨j|)`.
pub fn choi_matrix<T: Real>(channel: &CMatrix<T>, dim: usize) -> CMatrix<T> {
    let dd = dim * dim;
    assert_eq!(channel.shape(), (dd, dd), "channel shape");
    CMatrix::from_fn(dd, dd, |r, c| {
        let (i, k) = (r / dim, r % dim);
        let (j, l) = (c / dim, c % dim);
        channel[(l * dim + k, j * dim + i)]
    })
}

/// Smallest eigenvalue of the Choi matrix; non-negative for CP maps.
pub fn choi_min_eigenvalue<T>(channel: &CMatrix<T>, dim: usize) -> Result<T>
where
    T: Real + nalgebra::RealField,
{
    let ev = hermitian_eigenvalues(&choi_matrix(channel, dim))?;
    Ok(ev[0])
}

/// Applies a column-stacked superoperator to a density matrix.
pub fn apply_channel<T: Real>(channel: &CMatrix<T>, rho: &CMatrix<T>) -> CMatrix<T> {
    let d = rho.rows();
    let v: Vec<Cx<T>> = (0..d * d).map(|m| rho[(m % d, m / d)]).collect();
    let out = channel.mul_vec(&v);
    CMatrix::from_fn(d, d, |i, j| out[j * d + i])
}

/// Superoperator of `Λ_A ⊗ Λ_B` acting on `H_A ⊗ H_B`.
pub fn tensor_channels<T: Real>(
    a: &CMatrix<T>,
    dim_a: usize,
    b: &CMatrix<T>,
    dim_b: usize,
) -> CMatrix<T> {
    assert_eq!(a.shape(), (dim_a * dim_a, dim_a * dim_a), "channel A shape");
    assert_eq!(b.shape(), (dim_b * dim_b, dim_b * dim_b), "channel B shape");
    let d = dim_a * dim_b;
    // split full column-stacked index into (A index, B index)
    let split = |m: usize| {
        let (row, col) = (m % d, m / d);
        let (ra, rb) = (row / dim_b, row % dim_b);
        let (ca, cb) = (col / dim_b, col % dim_b);
        (ca * dim_a + ra, cb * dim_b + rb)
    };
    let parts: Vec<(usize, usize)> = (0..d * d).map(split).collect();
    CMatrix::from_fn(d * d, d * d, |r, c| {
        let (ra, rb) = parts[r];
        let (ca, cb) = parts[c];
        a[(ra, ca)] * b[(rb, cb)]
    })
}

/// Static Lindblad problem: Hamiltonian, per-mode damping, and gate time.
#[derive(Debug, Clone)]
pub struct LindbladModel<T: Real> {
    pub hamiltonian: CMatrix<T>,
    pub collapse_rates: Vec<T>,
    pub space: HilbertSpace,
    pub t_f: T,
}

impl<T: Real> LindbladModel<T> {
    pub fn new(
        hamiltonian: CMatrix<T>,
        collapse_rates: Vec<T>,
        space: HilbertSpace,
        t_f: T,
    ) -> Result<Self> {
        let tol = T::lit(1e-12) * hamiltonian.norm_one().max(T::one());
        if !hamiltonian.is_hermitian(tol) {
            return arg_err("Hamiltonian is not Hermitian");
        }
        if !(t_f > T::zero()) {
            return arg_err(format!("gate duration must be positive, got {t_f}"));
        }
        let _ = build_liouvillian(&hamiltonian, &collapse_rates, &space)?;
        Ok(Self {
            hamiltonian,
            collapse_rates,
            space,
            t_f,
        })
    }

    pub fn liouvillian(&self) -> Result<CMatrix<T>> {
        build_liouvillian(&self.hamiltonian, &self.collapse_rates, &self.space)
    }

    pub fn channel(&self) -> Result<CMatrix<T>> {
        evolve(&self.liouvillian()?, self.t_f)
    }
}

/// How [`simulate_gate_with`] obtains the four-mode channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvolutionRoute {
    /// Exponentiate the full four-mode Liouvillian.
    Full,
    /// Exponentiate the target-pair and spectator-pair generators separately
    /// and take their tensor product. Exact here because no term couples
    /// the two pairs.
    #[default]
    Factorized,
}

#[derive(Debug, Clone)]
pub struct GateResult<T: Real> {
    pub channel: CMatrix<T>,
    pub avg_fidelity: T,
    pub t_f: T,
    pub eta: T,
    /// Conversion separation in Hz.
    pub delta2: T,
    pub spectator_rate: T,
}

/// Rates and duration for one `(η, δ)` point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSchedule<T> {
    pub rate: T,
    pub t_f: T,
    pub spectator_rate: T,
}

pub fn drive_schedule<T: Real>(
    config: &Config,
    eta: T,
    delta2: T,
    model: SpectatorModel,
) -> Result<DriveSchedule<T>> {
    if !(eta > T::zero()) {
        return arg_err(format!("pump amplitude must be positive, got {eta}"));
    }
    let dev = &config.device;
    let rate = target_rate(eta, T::lit(dev.g3_over_2pi), T::lit(dev.lambda));
    let t_f = gate_duration(rate, T::lit(config.gate.theta()))?;
    let spectator_rate = spectator_rate(rate, delta2, t_f, model)?;
    Ok(DriveSchedule {
        rate,
        t_f,
        spectator_rate,
    })
}

/// `f64` gate simulation with the config's spectator model.
pub fn simulate_gate(config: &Config, eta: f64, delta2: f64) -> Result<GateResult<f64>> {
    simulate_gate_with(
        config,
        eta,
        delta2,
        config.spectator_model,
        EvolutionRoute::default(),
    )
}

/// Target + spectator gate under amplitude damping, scored against the ideal gate.
pub fn simulate_gate_with<T: Real>(
    config: &Config,
    eta: T,
    delta2: T,
    model: SpectatorModel,
    route: EvolutionRoute,
) -> Result<GateResult<T>> {
    let sched = drive_schedule(config, eta, delta2, model)?;
    let space = HilbertSpace::four_qubits();
    let rates: Vec<T> = (0..4)
        .map(|k| T::lit(1.0 / config.device.t1_for_mode(k)))
        .collect();

    let channel = match route {
        EvolutionRoute::Full => {
            let h = build_hamiltonian(sched.rate, sched.spectator_rate, &space)?;
            LindbladModel::new(h, rates, space.clone(), sched.t_f)?.channel()?
        }
        EvolutionRoute::Factorized => {
            let pair = HilbertSpace::uniform(2, 2)?;
            let pair_channel = |rate: T, gammas: &[T]| -> Result<CMatrix<T>> {
                let h = conversion_term::<T>(0, 1, &pair)?.scale_real(rate);
                evolve(&build_liouvillian(&h, gammas, &pair)?, sched.t_f)
            };
            let a = pair_channel(sched.rate, &rates[..2])?;
            let b = pair_channel(sched.spectator_rate, &rates[2..])?;
            tensor_channels(&a, 4, &b, 4)
        }
    };
    let u = ideal_gate::<T>(config.gate.kind, &space)?;
    let avg_fidelity = average_gate_fidelity(&channel, &u, space.total_dim())?;
    Ok(GateResult {
        channel,
        avg_fidelity,
        t_f: sched.t_f,
        eta,
        delta2,
        spectator_rate: sched.spectator_rate,
    })
}
