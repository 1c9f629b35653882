//! Dense reference evolution and plan execution.
//!
//! States are a 2^n amplitude vector or a 2^n × 2^n row-major density
//! matrix. Pauli rotations e^{−iθP} are applied by their sparse action: P
//! maps basis index b to b⊕x with phase i^{#Y}(−1)^{popcount(z∧b)}, so one
//! rotation is a single pass pairing amplitudes b and b⊕x. No dense matrix
//! is ever built on the evolution path; dense eigendecompositions appear
//! only in the exact reference and the trace distance.

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

use crate::dense::{hermitian_trace_norm, CMatrix, HermitianEigen};
use crate::error::{SzeError, SzeResult};
use crate::pauli::{PauliSum, PauliTerm};
use crate::plan::{ExpansionPlan, FactorMode};
use crate::stochastic::{build_distribution, sample, theta, RotationDistribution};

pub mod kernel;

/// Dense state: unit vector or density matrix.
#[derive(Debug, Clone)]
pub enum DenseState {
    StateVector { n_qubits: usize, amplitudes: Vec<Complex64> },
    DensityMatrix { n_qubits: usize, elements: Vec<Complex64> },
}

impl DenseState {
    pub fn zero_state(n_qubits: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        DenseState::StateVector { n_qubits, amplitudes }
    }

    pub fn basis_state(n_qubits: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        DenseState::StateVector { n_qubits, amplitudes }
    }

    /// |+⟩^⊗n, the equal superposition.
    pub fn plus_state(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        DenseState::StateVector { n_qubits, amplitudes: vec![amp; dim] }
    }

    pub fn from_amplitudes(n_qubits: usize, amplitudes: Vec<Complex64>) -> SzeResult<Self> {
        if amplitudes.len() != 1 << n_qubits {
            return Err(SzeError::DimensionMismatch);
        }
        Ok(DenseState::StateVector { n_qubits, amplitudes })
    }

    pub fn n_qubits(&self) -> usize {
        match self {
            DenseState::StateVector { n_qubits, .. } => *n_qubits,
            DenseState::DensityMatrix { n_qubits, .. } => *n_qubits,
        }
    }

    pub fn is_density(&self) -> bool {
        matches!(self, DenseState::DensityMatrix { .. })
    }

    /// Promote to a density matrix (outer product for pure states).
    pub fn to_density(&self) -> DenseState {
        match self {
            DenseState::DensityMatrix { .. } => self.clone(),
            DenseState::StateVector { n_qubits, amplitudes } => {
                let dim = amplitudes.len();
                let mut elements = vec![Complex64::new(0.0, 0.0); dim * dim];
                for r in 0..dim {
                    for c in 0..dim {
                        elements[r * dim + c] = amplitudes[r] * amplitudes[c].conj();
                    }
                }
                DenseState::DensityMatrix { n_qubits: *n_qubits, elements }
            }
        }
    }

    pub fn trace(&self) -> Complex64 {
        match self {
            DenseState::StateVector { amplitudes, .. } => {
                amplitudes.iter().map(|a| a * a.conj()).sum()
            }
            DenseState::DensityMatrix { elements, n_qubits } => {
                let dim = 1usize << n_qubits;
                (0..dim).map(|i| elements[i * dim + i]).sum()
            }
        }
    }

    pub fn as_matrix(&self) -> CMatrix {
        match self.to_density() {
            DenseState::DensityMatrix { elements, n_qubits } => {
                let dim = 1usize << n_qubits;
                // row-major storage transposed into nalgebra's column-major
                CMatrix::from_fn(dim, dim, |r, c| elements[r * dim + c])
            }
            DenseState::StateVector { .. } => unreachable!(),
        }
    }

    /// Apply the rotation e^{−i·angle·P} in place. State vectors get one
    /// kernel pass; density matrices are conjugated (columns then rows).
    pub fn apply_rotation(&mut self, term: &PauliTerm, angle: f64) -> SzeResult<()> {
        if term.n_qubits() != self.n_qubits() {
            return Err(SzeError::DimensionMismatch);
        }
        match self {
            DenseState::StateVector { amplitudes, .. } => {
                kernel::rotate_vector(amplitudes, term, angle);
            }
            DenseState::DensityMatrix { elements, n_qubits } => {
                let dim = 1usize << *n_qubits;
                kernel::rotate_density_left(elements, dim, term, angle);
                kernel::rotate_density_right(elements, dim, term, angle);
            }
        }
        Ok(())
    }
}

/// Exact evolution operator exp(−itH) via one reusable Hermitian
/// eigendecomposition; unitaries for any t come from phase reweighting.
pub struct ExactEvolver {
    eigen: HermitianEigen,
    n_qubits: usize,
}

impl ExactEvolver {
    pub fn new(h: &PauliSum) -> SzeResult<Self> {
        Ok(ExactEvolver { eigen: HermitianEigen::of_sum(h)?, n_qubits: h.n_qubits() })
    }

    pub fn unitary(&self, t: f64) -> CMatrix {
        self.eigen.evolution(t)
    }

    /// Evolve a state for time t (pure states stay pure).
    pub fn evolve(&self, state: &DenseState, t: f64) -> SzeResult<DenseState> {
        if state.n_qubits() != self.n_qubits {
            return Err(SzeError::DimensionMismatch);
        }
        match state {
            DenseState::StateVector { n_qubits, amplitudes } => Ok(DenseState::StateVector {
                n_qubits: *n_qubits,
                amplitudes: self.eigen.evolve_vector(amplitudes, t),
            }),
            DenseState::DensityMatrix { n_qubits, .. } => {
                let u = self.unitary(t);
                let rho = state.as_matrix();
                let out = &u * rho * u.adjoint();
                let dim = 1usize << n_qubits;
                let mut elements = vec![Complex64::new(0.0, 0.0); dim * dim];
                for r in 0..dim {
                    for c in 0..dim {
                        elements[r * dim + c] = out[(r, c)];
                    }
                }
                Ok(DenseState::DensityMatrix { n_qubits: *n_qubits, elements })
            }
        }
    }
}

/// Convenience wrapper: dense unitary exp(−itH).
pub fn exact_evolution(h: &PauliSum, t: f64) -> SzeResult<CMatrix> {
    Ok(ExactEvolver::new(h)?.unitary(t))
}

/// Execution mode for stochastic factors.
pub enum ExecMode<'a> {
    /// Apply the exact probability-weighted mixture channel (density only).
    ExactChannel,
    /// Draw one rotation per stochastic factor from the given stream.
    Sampled(&'a mut ChaCha8Rng),
    /// Apply each stochastic factor's target exponential exp(−i t^m H)
    /// exactly: the sampling-free limit, which isolates the truncation
    /// error from the O(|H|₁² t^{2m}) sampling-approximation error.
    ExactFactor,
}

/// Apply one stochastic factor at per-step angle θ(dist, t_step).
pub fn apply_stochastic_factor(
    state: &mut DenseState,
    dist: &RotationDistribution,
    t_step: f64,
    mode: &mut ExecMode<'_>,
) -> SzeResult<()> {
    match mode {
        ExecMode::Sampled(rng) => {
            let draw = sample(dist, t_step, rng);
            state.apply_rotation(&draw.term, draw.angle)?;
            Ok(())
        }
        ExecMode::ExactFactor => {
            // rebuild H = l1 · Σ p_k P'_k and conjugate by its exact unitary
            let h = PauliSum::from_weighted_terms(
                dist.n_qubits(),
                dist.entries()
                    .iter()
                    .map(|(p, term)| (*term, Complex64::new(p * dist.l1(), 0.0))),
            )?;
            let evolver = ExactEvolver::new(&h)?;
            let scaled_t = t_step.powi(dist.time_power() as i32);
            *state = evolver.evolve(state, scaled_t)?;
            Ok(())
        }
        ExecMode::ExactChannel => {
            if dist.entries().len() == 1 {
                let angle = theta(dist, t_step);
                return state.apply_rotation(&dist.entries()[0].1, angle);
            }
            let DenseState::DensityMatrix { n_qubits, elements } = state else {
                return Err(SzeError::ModeMismatch);
            };
            let dim = 1usize << *n_qubits;
            let angle = theta(dist, t_step);
            let mut acc = vec![Complex64::new(0.0, 0.0); elements.len()];
            let mut scratch: Vec<Complex64> = Vec::with_capacity(elements.len());
            for (p, term) in dist.entries() {
                scratch.clear();
                scratch.extend_from_slice(elements);
                kernel::rotate_density_left(&mut scratch, dim, term, angle);
                kernel::rotate_density_right(&mut scratch, dim, term, angle);
                kernel::axpy(&mut acc, &scratch, *p);
            }
            elements.copy_from_slice(&acc);
            Ok(())
        }
    }
}

/// Run `plan` for total time t in r steps from `initial`.
///
/// A Direct factor at order m applies per-term rotations of angle
/// coefficient·(t/r)^m; a Stochastic factor applies its distribution at
/// angle θ(t/r). Deterministic in ExactChannel mode and for a fixed seed in
/// Sampled mode.
pub fn run_plan(
    plan: &ExpansionPlan,
    t: f64,
    r: usize,
    initial: &DenseState,
    mut mode: ExecMode<'_>,
) -> SzeResult<DenseState> {
    if r < 1 {
        return Err(SzeError::InvalidPlan("need r >= 1 steps".into()));
    }
    if initial.n_qubits() != plan.n_qubits {
        return Err(SzeError::DimensionMismatch);
    }
    let mut state = initial.clone();
    let dt = t / r as f64;

    // per-factor machinery is derived once: rotation distributions for the
    // channel/sampled modes, eigendecompositions for the exact-factor mode
    let exact_factors = matches!(mode, ExecMode::ExactFactor);
    let mut dists: Vec<Option<RotationDistribution>> = Vec::with_capacity(plan.factors.len());
    let mut evolvers: Vec<Option<ExactEvolver>> = Vec::with_capacity(plan.factors.len());
    for f in &plan.factors {
        match f.mode {
            FactorMode::Stochastic if exact_factors => {
                dists.push(None);
                evolvers.push(Some(ExactEvolver::new(&f.hamiltonian)?));
            }
            FactorMode::Stochastic => {
                dists.push(Some(build_distribution(&f.hamiltonian, f.time_order)?));
                evolvers.push(None);
            }
            FactorMode::Direct => {
                dists.push(None);
                evolvers.push(None);
            }
        }
    }

    for _ in 0..r {
        // the factor list reads as the operator product left to right, so the
        // last factor acts on the state first
        for (i, f) in plan.factors.iter().enumerate().rev() {
            match f.mode {
                FactorMode::Direct => {
                    let scale = dt.powi(f.time_order as i32);
                    for (term, coeff) in f.hamiltonian.iter_terms() {
                        state.apply_rotation(&term, coeff.re * scale)?;
                    }
                }
                FactorMode::Stochastic if exact_factors => {
                    let scaled_t = dt.powi(f.time_order as i32);
                    state = evolvers[i].as_ref().unwrap().evolve(&state, scaled_t)?;
                }
                FactorMode::Stochastic => {
                    apply_stochastic_factor(&mut state, dists[i].as_ref().unwrap(), dt, &mut mode)?;
                }
            }
        }
    }
    Ok(state)
}

/// Trace distance ½‖ρ−σ‖₁ between two states (coerced to density matrices).
pub fn trace_distance(a: &DenseState, b: &DenseState) -> SzeResult<f64> {
    if a.n_qubits() != b.n_qubits() {
        return Err(SzeError::DimensionMismatch);
    }
    let diff = a.as_matrix() - b.as_matrix();
    Ok(0.5 * hermitian_trace_norm(&diff))
}

/// Result of a log-log least-squares fit.
#[derive(Debug, Clone, Copy)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
    pub points_used: usize,
}

/// Least-squares power-law fit in (log10 x, log10 y); the slope is the
/// power-law exponent.
pub fn fit_powerlaw(points: &[(f64, f64)]) -> SzeResult<FitResult> {
    if points.len() < 2 || points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return Err(SzeError::FitPoints(points.len()));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.log10(), y.log10())).collect();
    let n = logs.len() as f64;
    let sx: f64 = logs.iter().map(|p| p.0).sum();
    let sy: f64 = logs.iter().map(|p| p.1).sum();
    let sxx: f64 = logs.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = logs.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return Err(SzeError::FitPoints(points.len()));
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let residual = (logs
        .iter()
        .map(|&(x, y)| {
            let e = y - (slope * x + intercept);
            e * e
        })
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(FitResult { slope, intercept, residual, points_used: points.len() })
}
