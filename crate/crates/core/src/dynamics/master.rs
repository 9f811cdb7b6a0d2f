//! Master-equation integration, steady states, and correlation functions.

use num_complex::Complex64 as C64;

use crate::dynamics::integrator::{integrate_grid, IntegratorOptions};
use crate::error::{Error, Result};
use crate::hilbert::{DensityMatrix, Operator};
use crate::models::{collapse_operators_jc, jc_hamiltonian, JCParams, ATOM2_E, CAVITY_LABEL};
use crate::{CMatrix, CVector};

/// Result of a Lindblad integration.
#[derive(Debug, Clone)]
pub struct EvolutionResult {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    /// max |tr ρ(t) − 1| over the output grid. Reported, never hidden by
    /// renormalization.
    pub trace_drift: f64,
}

impl EvolutionResult {
    /// Most negative eigenvalue over all stored states (complete-positivity
    /// proxy).
    pub fn min_eigenvalue(&self) -> f64 {
        self.states
            .iter()
            .map(|s| s.eigenvalues()[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// Max Hermiticity deviation over all stored states.
    pub fn max_hermiticity_deviation(&self) -> f64 {
        self.states
            .iter()
            .map(|s| crate::hilbert::hermiticity_deviation(s.matrix()))
            .fold(0.0, f64::max)
    }
}

fn lindblad_rhs(h: &CMatrix, ls: &[(CMatrix, CMatrix)], rho: &CMatrix) -> CMatrix {
    let i = C64::new(0.0, 1.0);
    let mut out = (h * rho - rho * h) * (-i);
    for (l, ldl) in ls {
        out += l * rho * l.adjoint();
        out -= (ldl * rho + rho * ldl) * C64::new(0.5, 0.0);
    }
    out
}

fn check_spaces(rho0: &DensityMatrix, h: &Operator, ls: &[Operator]) -> Result<()> {
    if rho0.space() != h.space() {
        return Err(Error::DimensionMismatch("initial state / Hamiltonian space mismatch".into()));
    }
    for l in ls {
        if l.space() != h.space() {
            return Err(Error::DimensionMismatch("collapse operator space mismatch".into()));
        }
    }
    Ok(())
}

const MAX_TRACE_DRIFT: f64 = 1e-7;

/// Integrates ρ̇ = −i\\[H,ρ\\] + Σ (LρL† − ½{L†L,ρ}) over the output grid,
/// storing the state at every grid time.
pub fn evolve(
    rho0: &DensityMatrix,
    h: &Operator,
    ls: &[Operator],
    t_grid: &[f64],
) -> Result<EvolutionResult> {
    check_spaces(rho0, h, ls)?;
    let lol: Vec<(CMatrix, CMatrix)> = ls
        .iter()
        .map(|l| {
            let m = l.matrix().clone();
            let ldl = m.adjoint() * &m;
            (m, ldl)
        })
        .collect();
    let hm = h.matrix().clone();
    let mut states = Vec::with_capacity(t_grid.len());
    let mut times = Vec::with_capacity(t_grid.len());
    integrate_grid(
        |rho| lindblad_rhs(&hm, &lol, rho),
        rho0.matrix(),
        t_grid,
        &IntegratorOptions::default(),
        |_, t, y| {
            // The exact flow preserves Hermiticity; symmetrize away the
            // integrator's roundoff before storing.
            let herm = (y + y.adjoint()) * C64::new(0.5, 0.0);
            states.push(DensityMatrix::from_matrix_unchecked(rho0.space().clone(), herm));
            times.push(t);
        },
    )?;
    let trace_drift = states
        .iter()
        .map(|s| (s.trace() - C64::new(1.0, 0.0)).norm())
        .fold(0.0, f64::max);
    if trace_drift > MAX_TRACE_DRIFT {
        return Err(Error::IntegrationFailure { achieved: trace_drift });
    }
    Ok(EvolutionResult { times, states, trace_drift })
}

/// Like [`evolve`] but records only the expectation values of the registered
/// observables, not the states.
pub fn evolve_observables(
    rho0: &DensityMatrix,
    h: &Operator,
    ls: &[Operator],
    t_grid: &[f64],
    observables: &[&Operator],
) -> Result<(Vec<f64>, Vec<Vec<C64>>, f64)> {
    check_spaces(rho0, h, ls)?;
    for o in observables {
        if o.space() != h.space() {
            return Err(Error::DimensionMismatch("observable space mismatch".into()));
        }
    }
    let lol: Vec<(CMatrix, CMatrix)> = ls
        .iter()
        .map(|l| {
            let m = l.matrix().clone();
            let ldl = m.adjoint() * &m;
            (m, ldl)
        })
        .collect();
    let hm = h.matrix().clone();
    let mut times = Vec::with_capacity(t_grid.len());
    let mut values: Vec<Vec<C64>> = vec![Vec::with_capacity(t_grid.len()); observables.len()];
    let mut trace_drift: f64 = 0.0;
    integrate_grid(
        |rho| lindblad_rhs(&hm, &lol, rho),
        rho0.matrix(),
        t_grid,
        &IntegratorOptions::default(),
        |_, t, y| {
            times.push(t);
            trace_drift = trace_drift.max((y.trace() - C64::new(1.0, 0.0)).norm());
            for (k, o) in observables.iter().enumerate() {
                values[k].push((o.matrix() * y).trace());
            }
        },
    )?;
    if trace_drift > MAX_TRACE_DRIFT {
        return Err(Error::IntegrationFailure { achieved: trace_drift });
    }
    Ok((times, values, trace_drift))
}

/// Dense Liouvillian superoperator over the column-major vectorized density
/// matrix.
pub fn liouvillian(h: &Operator, ls: &[Operator]) -> Result<CMatrix> {
    for l in ls {
        if l.space() != h.space() {
            return Err(Error::DimensionMismatch("collapse operator space mismatch".into()));
        }
    }
    let d = h.space().dim();
    let id = CMatrix::identity(d, d);
    let i = C64::new(0.0, 1.0);
    let hm = h.matrix();
    let mut sup = (id.kronecker(hm) - hm.transpose().kronecker(&id)) * (-i);
    for l in ls {
        let lm = l.matrix();
        let ldl = lm.adjoint() * lm;
        sup += lm.conjugate().kronecker(lm);
        sup -= (id.kronecker(&ldl) + ldl.transpose().kronecker(&id)) * C64::new(0.5, 0.0);
    }
    Ok(sup)
}

/// Steady state by dense null-space extraction of the Liouvillian
/// (singular-value route). Fails if the null space is degenerate, i.e. the
/// second-smallest singular value is below 1e−8 times the largest.
pub fn steady_state(h_driven: &Operator, ls: &[Operator]) -> Result<DensityMatrix> {
    let sup = liouvillian(h_driven, ls)?;
    let d = h_driven.space().dim();
    let svd = sup.svd(false, true);
    let v_t = svd.v_t.as_ref().expect("requested V^T");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[a].partial_cmp(&svd.singular_values[b]).unwrap()
    });
    let smallest = order[0];
    let second = svd.singular_values[order[1]];
    let largest = svd.singular_values[*order.last().unwrap()];
    if second <= 1e-8 * largest {
        return Err(Error::DegenerateSteadyState { second });
    }
    // Null vector = conjugate of the corresponding row of V^H.
    let row = v_t.row(smallest);
    let vec: CVector = CVector::from_iterator(d * d, row.iter().map(|z| z.conj()));
    let mat = CMatrix::from_column_slice(d, d, vec.as_slice());
    let herm = (&mat + mat.adjoint()) * C64::new(0.5, 0.0);
    let tr = herm.trace();
    if tr.norm() < 1e-12 {
        return Err(Error::DegenerateSteadyState { second });
    }
    let rho = herm / tr;
    // Clip tiny negative eigenvalues are not expected here; validate.
    DensityMatrix::new_with(
        h_driven.space().clone(),
        rho,
        &crate::tol::Tolerances { psd: -1e-7, trace: 1e-7, ..Default::default() },
    )
}

/// Photon emission rate 2κ⟨a†a⟩(t) starting from |e,0⟩.
///
/// The dominant oscillation frequency is √(Δ_ac² + 4g²), the detuned
/// vacuum-Rabi frequency.
pub fn vacuum_rabi_trace(p: &JCParams, t_grid: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let h = jc_hamiltonian(p)?;
    let ls = collapse_operators_jc(p)?;
    let space = p.space();
    let a = Operator::embed(&space, CAVITY_LABEL, &crate::hilbert::matrices::annihilation(p.n_max + 1))?;
    let n_op = a.adjoint().mul(&a)?;
    let rho0 = crate::hilbert::StateVector::basis(space, &[ATOM2_E, 0]).projector();
    let (times, values, _) = evolve_observables(&rho0, &h, &ls, t_grid, &[&n_op])?;
    let kappa = p.rates.kappa();
    let rates = values[0].iter().map(|v| 2.0 * kappa * v.re).collect();
    Ok((times, rates))
}

/// Atomic population decay rate from an exponential fit to P_e(t) starting
/// at |e,0⟩. In the fast-cavity regime (κ ≥ 10 g) this equals
/// 2(γ + γ_c) within a couple of percent, with γ_c the Purcell rate.
pub fn purcell_decay_rate(p: &JCParams) -> Result<f64> {
    let h = jc_hamiltonian(p)?;
    let ls = collapse_operators_jc(p)?;
    let space = p.space();
    let proj_e = Operator::embed(
        &space,
        crate::models::ATOM_LABEL,
        &crate::hilbert::matrices::ketbra(2, ATOM2_E, ATOM2_E),
    )?;
    let rho0 = crate::hilbert::StateVector::basis(space, &[ATOM2_E, 0]).projector();

    let kappa = p.rates.kappa();
    let gamma_c = crate::params::purcell_rate(p.rates.g, kappa, p.rates.delta_ac)?;
    let rate_est = 2.0 * (p.rates.gamma + gamma_c);
    let t_end = 2.5 / rate_est;
    let n_pts = 400;
    let t_grid: Vec<f64> = (0..n_pts).map(|i| i as f64 * t_end / (n_pts - 1) as f64).collect();
    let (times, values, _) = evolve_observables(&rho0, &h, &ls, &t_grid, &[&proj_e])?;

    // Fit ln P_e linearly over the window after the cavity-loading
    // transient.
    let t_lo = 0.3 * t_end;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (t, v) in times.iter().zip(&values[0]) {
        if *t >= t_lo && v.re > 1e-12 {
            xs.push(*t);
            ys.push(v.re.ln());
        }
    }
    if xs.len() < 10 {
        return Err(Error::FitFailure { residual: f64::INFINITY, limit: 0.05 });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (intercept + slope * x)).abs())
        .fold(0.0, f64::max);
    const RESIDUAL_LIMIT: f64 = 0.05;
    if residual > RESIDUAL_LIMIT {
        return Err(Error::FitFailure { residual, limit: RESIDUAL_LIMIT });
    }
    Ok(-slope)
}

/// Population of the top level of a labeled Fock factor; values above
/// ~1e−6 signal that the truncation is biasing the simulation.
pub fn fock_tail_population(rho: &DensityMatrix, cavity_label: &str) -> crate::Result<f64> {
    let space = rho.space();
    let pos = space.position(cavity_label)?;
    let dim = space.factors()[pos].1;
    let top = crate::hilbert::matrices::ketbra(dim, dim - 1, dim - 1);
    let proj = Operator::embed(space, cavity_label, &top)?;
    Ok((proj.matrix() * rho.matrix()).trace().re)
}

/// Normalized second-order correlation g²(τ) of the cavity output via the
/// quantum-regression propagation of the conditioned state a ρ_ss a† /
/// ⟨a†a⟩.
pub fn g2(
    rho_ss: &DensityMatrix,
    a: &Operator,
    h_driven: &Operator,
    ls: &[Operator],
    tau_grid: &[f64],
) -> Result<Vec<f64>> {
    if rho_ss.space() != a.space() || a.space() != h_driven.space() {
        return Err(Error::DimensionMismatch("g2 operand space mismatch".into()));
    }
    let n_op = a.adjoint().mul(a)?;
    let n_ss = (n_op.matrix() * rho_ss.matrix()).trace().re;
    if n_ss <= 0.0 {
        return Err(Error::InvalidParameter(
            "steady-state photon number is zero; g2 undefined".into(),
        ));
    }
    let conditioned = a.matrix() * rho_ss.matrix() * a.matrix().adjoint() / C64::new(n_ss, 0.0);
    let rho_c = DensityMatrix::from_matrix_unchecked(rho_ss.space().clone(), conditioned);
    let (_, values, _) = evolve_observables(&rho_c, h_driven, ls, tau_grid, &[&n_op])?;
    Ok(values[0].iter().map(|v| v.re / n_ss).collect())
}
