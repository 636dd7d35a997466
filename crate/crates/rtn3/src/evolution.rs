//! Initial states and their time evolution under telegraph dephasing.
//!
//! Initial states are Werner-type mixtures r·|ψ⟩⟨ψ| + (1-r)·I₈/8 with |ψ⟩
//! either GHZ or W. Two engines produce ρ(t):
//!
//! * [`evolve_analytic`] — the exact noise-averaged matrices. For each of the
//!   four (family × coupling) scenarios the average has a closed form whose
//!   entries are polynomials in the dephasing factors G₂, G₄, G₆; these are
//!   assembled from small named coefficient functions below.
//! * [`evolve_monte_carlo`] — ensemble average of U ρ(0) U† over sampled
//!   trajectories, with U = U_A ⊗ U_B ⊗ U_C. Local coupling draws three
//!   independent trajectories per sample; common coupling one shared one.
//!
//! The analytic matrices are the production path (exact and fast); Monte
//! Carlo exists to validate them and to support future noise models.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::matrix::{kronecker, ComplexMatrix, DensityMatrix};
use crate::noise::{
    accumulated_phase, dephasing_factor, sample_trajectory, single_qubit_propagator,
    trajectory_rng, NoiseParams,
};
use crate::{Error, Result};

/// Which pure state the Werner mixture is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Ghz,
    W,
}

/// Noise topology: an independent telegraph source per qubit, or one source
/// shared by all three.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coupling {
    Local,
    Common,
}

/// A fully specified physical scenario.
#[derive(Debug, Clone, Copy)]
pub struct ScenarioConfig {
    pub family: Family,
    pub purity: f64,
    pub coupling: Coupling,
    pub noise: NoiseParams,
}

impl ScenarioConfig {
    pub fn new(family: Family, purity: f64, coupling: Coupling, noise: NoiseParams) -> Result<Self> {
        if !(0.0..=1.0).contains(&purity) || !purity.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "purity must lie in [0, 1], got {purity}"
            )));
        }
        Ok(ScenarioConfig {
            family,
            purity,
            coupling,
            noise,
        })
    }
}

/// Monte Carlo ensemble size and seed.
#[derive(Debug, Clone, Copy)]
pub struct EnsembleSpec {
    pub n_trajectories: usize,
    pub seed: u64,
}

/// Samples per reduction chunk. Chunk partial sums are combined in chunk
/// order, so the ensemble mean is bit-identical regardless of how rayon
/// schedules the chunks.
const MC_CHUNK: usize = 1024;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// |GHZ⟩ = (|000⟩ + |111⟩)/√2 as a state vector.
pub fn ghz_state_vector() -> [Complex64; 8] {
    let mut v = [Complex64::ZERO; 8];
    let a = re(std::f64::consts::FRAC_1_SQRT_2);
    v[0] = a;
    v[7] = a;
    v
}

/// |W⟩ = (|001⟩ + |010⟩ + |100⟩)/√3 as a state vector.
pub fn w_state_vector() -> [Complex64; 8] {
    let mut v = [Complex64::ZERO; 8];
    let a = re(1.0 / 3f64.sqrt());
    v[1] = a;
    v[2] = a;
    v[4] = a;
    v
}

/// Basis indices with exactly one excited qubit (|001⟩, |010⟩, |100⟩).
const ONE_EXCITATION: [usize; 3] = [1, 2, 4];
/// Basis indices with exactly two excited qubits (|011⟩, |101⟩, |110⟩).
const TWO_EXCITATIONS: [usize; 3] = [3, 5, 6];

/// Werner-type initial state r·|ψ⟩⟨ψ| + (1-r)·I₈/8.
pub fn initial_state(cfg: &ScenarioConfig) -> DensityMatrix {
    let v = match cfg.family {
        Family::Ghz => ghz_state_vector(),
        Family::W => w_state_vector(),
    };
    let pure = ComplexMatrix::projector(&v);
    let mixed = ComplexMatrix::identity(8).scale((1.0 - cfg.purity) / 8.0);
    DensityMatrix::new(pure.scale(cfg.purity).add(&mixed))
        .expect("Werner mixture is a valid state")
}

/// Coefficients of the X-shaped GHZ/local-noise average: diagonal corners α,
/// inner diagonal θ, anti-diagonal corners σ and inner anti-diagonal β, all
/// functions of r and G₂.
struct GhzLocalCoeffs {
    alpha: f64,
    theta: f64,
    sigma: f64,
    beta: f64,
}

fn ghz_local_coeffs(r: f64, g2: f64) -> GhzLocalCoeffs {
    let g2sq = g2 * g2;
    GhzLocalCoeffs {
        alpha: (1.0 + 3.0 * r * g2sq) / 8.0,
        theta: (1.0 - r * g2sq) / 8.0,
        sigma: r * (1.0 + 3.0 * g2sq) / 8.0,
        beta: r * (1.0 - g2sq) / 8.0,
    }
}

/// Coefficients of the GHZ/common-noise average, where every entry of the
/// matrix is populated: μ drives the diagonal and corners, λ the off-diagonal
/// fill, both functions of r and G₄.
struct GhzCommonCoeffs {
    mu: f64,
    lambda: f64,
}

fn ghz_common_coeffs(r: f64, g4: f64) -> GhzCommonCoeffs {
    GhzCommonCoeffs {
        mu: r * (1.0 + g4) / 16.0,
        lambda: r * (1.0 - g4) / 16.0,
    }
}

/// Coefficients of the W/local-noise average in the one/two-excitation block
/// structure, all functions of r and G₂ (ς carries the white-noise floor).
struct WLocalCoeffs {
    kappa: f64,
    varsigma: f64,
    chi: f64,
    tau: f64,
    iota: f64,
    xi: f64,
    phi: f64,
}

fn w_local_coeffs(r: f64, g2: f64) -> WLocalCoeffs {
    let up = 1.0 + g2;
    let dn = 1.0 - g2;
    WLocalCoeffs {
        kappa: r * up * up * dn,
        varsigma: (1.0 - r) / 8.0,
        chi: r * dn * dn * up,
        tau: r * up * (up * up + 2.0 * dn * dn),
        iota: r * up * (1.0 + g2 * g2),
        xi: r * dn * (2.0 * up * up + dn * dn),
        phi: r * dn * (1.0 + g2 * g2),
    }
}

/// Coefficients of the W/common-noise average; same zero pattern as the
/// local case but with G₂, G₄ and G₆ all appearing.
struct WCommonCoeffs {
    /// |000⟩⟨000| shift
    cap_lambda: f64,
    /// |000⟩ ↔ two-excitation coherences
    cap_xi: f64,
    /// one-excitation diagonal shift
    cap_upsilon: f64,
    /// one-excitation pair coherences
    cap_omega: f64,
    /// one-excitation ↔ |111⟩ coherences
    cap_gamma: f64,
    /// two-excitation diagonal shift
    cap_phi: f64,
    /// two-excitation pair coherences
    cap_delta: f64,
    /// |111⟩⟨111| shift
    cap_psi: f64,
}

fn w_common_coeffs(r: f64, g2: f64, g4: f64, g6: f64) -> WCommonCoeffs {
    WCommonCoeffs {
        cap_lambda: r * (1.0 / 16.0 + 3.0 * g2 / 32.0 - 3.0 * g4 / 16.0 - 3.0 * g6 / 32.0),
        cap_xi: r * (1.0 / 16.0 + 3.0 * g2 / 32.0 - g4 / 16.0 - 3.0 * g6 / 32.0),
        cap_upsilon: r * (-1.0 / 48.0 + 7.0 * g2 / 96.0 + g4 / 16.0 + 3.0 * g6 / 32.0),
        cap_omega: r * (5.0 / 48.0 + 7.0 * g2 / 96.0 + g4 / 16.0 + 3.0 * g6 / 32.0),
        cap_gamma: r * (1.0 / 16.0 - 3.0 * g2 / 32.0 - g4 / 16.0 + 3.0 * g6 / 32.0),
        cap_phi: r * (-1.0 / 48.0 - 7.0 * g2 / 96.0 + g4 / 16.0 - 3.0 * g6 / 32.0),
        cap_delta: r * (5.0 / 48.0 - 7.0 * g2 / 96.0 + g4 / 16.0 - 3.0 * g6 / 32.0),
        cap_psi: r * (1.0 / 16.0 - 3.0 * g2 / 32.0 - 3.0 * g4 / 16.0 + 3.0 * g6 / 32.0),
    }
}

/// Exact noise-averaged state at time t.
pub fn evolve_analytic(cfg: &ScenarioConfig, t: f64) -> Result<DensityMatrix> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "evolution time must be nonnegative and finite, got {t}"
        )));
    }
    let p = &cfg.noise;
    let r = cfg.purity;
    let mut m = ComplexMatrix::zeros(8);
    match (cfg.family, cfg.coupling) {
        (Family::Ghz, Coupling::Local) => {
            let g2 = dephasing_factor(2, p, t)?;
            let c = ghz_local_coeffs(r, g2);
            for i in 0..8 {
                m[(i, i)] = re(c.theta);
                m[(i, 7 - i)] = re(c.beta);
            }
            m[(0, 0)] = re(c.alpha);
            m[(7, 7)] = re(c.alpha);
            m[(0, 7)] = re(c.sigma);
            m[(7, 0)] = re(c.sigma);
        }
        (Family::Ghz, Coupling::Common) => {
            let g4 = dephasing_factor(4, p, t)?;
            let c = ghz_common_coeffs(r, g4);
            for i in 1..7 {
                m[(i, i)] = re(0.125 - c.mu);
                m[(0, i)] = re(-c.lambda);
                m[(i, 0)] = re(-c.lambda);
                m[(i, 7)] = re(-c.lambda);
                m[(7, i)] = re(-c.lambda);
                for j in 1..7 {
                    if i != j {
                        m[(i, j)] = re(c.lambda);
                    }
                }
            }
            m[(0, 0)] = re(0.125 + 3.0 * c.mu);
            m[(7, 7)] = re(0.125 + 3.0 * c.mu);
            m[(0, 7)] = re(r / 8.0 + 3.0 * c.mu);
            m[(7, 0)] = re(r / 8.0 + 3.0 * c.mu);
        }
        (Family::W, Coupling::Local) => {
            let g2 = dephasing_factor(2, p, t)?;
            let c = w_local_coeffs(r, g2);
            m[(0, 0)] = re(c.kappa / 8.0 + c.varsigma);
            m[(7, 7)] = re(c.chi / 8.0 + c.varsigma);
            for &i in &ONE_EXCITATION {
                m[(i, i)] = re(c.tau / 24.0 + c.varsigma);
                m[(i, 7)] = re(c.chi / 12.0);
                m[(7, i)] = re(c.chi / 12.0);
                for &k in &ONE_EXCITATION {
                    if i != k {
                        m[(i, k)] = re(c.iota / 12.0);
                    }
                }
            }
            for &j in &TWO_EXCITATIONS {
                m[(j, j)] = re(c.xi / 24.0 + c.varsigma);
                m[(0, j)] = re(c.kappa / 12.0);
                m[(j, 0)] = re(c.kappa / 12.0);
                for &k in &TWO_EXCITATIONS {
                    if j != k {
                        m[(j, k)] = re(c.phi / 12.0);
                    }
                }
            }
        }
        (Family::W, Coupling::Common) => {
            let g2 = dephasing_factor(2, p, t)?;
            let g4 = dephasing_factor(4, p, t)?;
            let g6 = dephasing_factor(6, p, t)?;
            let c = w_common_coeffs(r, g2, g4, g6);
            m[(0, 0)] = re(0.125 + c.cap_lambda);
            m[(7, 7)] = re(0.125 + c.cap_psi);
            for &i in &ONE_EXCITATION {
                m[(i, i)] = re(0.125 + c.cap_upsilon);
                m[(i, 7)] = re(c.cap_gamma);
                m[(7, i)] = re(c.cap_gamma);
                for &k in &ONE_EXCITATION {
                    if i != k {
                        m[(i, k)] = re(c.cap_omega);
                    }
                }
            }
            for &j in &TWO_EXCITATIONS {
                m[(j, j)] = re(0.125 + c.cap_phi);
                m[(0, j)] = re(c.cap_xi);
                m[(j, 0)] = re(c.cap_xi);
                for &k in &TWO_EXCITATIONS {
                    if j != k {
                        m[(j, k)] = re(c.cap_delta);
                    }
                }
            }
        }
    }
    DensityMatrix::new(m)
}

/// Ensemble-averaged state at time t: mean of U ρ(0) U† over sampled
/// telegraph trajectories.
///
/// Sample k of a run with seed s draws from ChaCha12 streams (3k, 3k+1,
/// 3k+2) under local coupling and stream k under common coupling, so any
/// trajectory is reproducible from (seed, index) alone and the ensemble can
/// be generated in any order. The mean is Hermitized ((M + M†)/2) to cancel
/// antisymmetric rounding accumulation.
pub fn evolve_monte_carlo(
    cfg: &ScenarioConfig,
    t: f64,
    ens: &EnsembleSpec,
) -> Result<DensityMatrix> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "evolution time must be nonnegative and finite, got {t}"
        )));
    }
    if ens.n_trajectories == 0 {
        return Err(Error::InvalidArgument(
            "ensemble needs at least one trajectory".into(),
        ));
    }
    let rho0 = initial_state(cfg).into_matrix();
    if t == 0.0 {
        return DensityMatrix::new(rho0);
    }
    let n = ens.n_trajectories;
    let n_chunks = n.div_ceil(MC_CHUNK);
    let chunk_sums: Vec<Result<ComplexMatrix>> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| -> Result<ComplexMatrix> {
            let lo = chunk * MC_CHUNK;
            let hi = ((chunk + 1) * MC_CHUNK).min(n);
            let mut acc = ComplexMatrix::zeros(8);
            for k in lo..hi {
                let u8 = sample_propagator(cfg, t, ens.seed, k as u64)?;
                let term = u8.mul(&rho0).mul(&u8.dagger());
                acc = acc.add(&term);
            }
            Ok(acc)
        })
        .collect();
    let mut total = ComplexMatrix::zeros(8);
    for s in chunk_sums {
        total = total.add(&s?);
    }
    let mean = total.scale(1.0 / n as f64);
    let herm = mean.add(&mean.dagger()).scale(0.5);
    DensityMatrix::new(herm)
}

/// Three-qubit propagator of one noise realization.
fn sample_propagator(cfg: &ScenarioConfig, t: f64, seed: u64, index: u64) -> Result<ComplexMatrix> {
    let p = &cfg.noise;
    let phis = match cfg.coupling {
        Coupling::Local => {
            let mut phis = [0.0; 3];
            for (q, phi) in phis.iter_mut().enumerate() {
                let mut rng = trajectory_rng(seed, 3 * index + q as u64);
                let traj = sample_trajectory(p, t, &mut rng)?;
                *phi = accumulated_phase(&traj, p, t)?;
            }
            phis
        }
        Coupling::Common => {
            let mut rng = trajectory_rng(seed, index);
            let traj = sample_trajectory(p, t, &mut rng)?;
            let phi = accumulated_phase(&traj, p, t)?;
            [phi, phi, phi]
        }
    };
    let ua = single_qubit_propagator(phis[0]);
    let ub = single_qubit_propagator(phis[1]);
    let uc = single_qubit_propagator(phis[2]);
    Ok(kronecker(&kronecker(&ua, &ub), &uc))
}
