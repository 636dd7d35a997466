//! Random telegraph noise: a classical signal η(t) that flips between -1 and
//! +1 at Poisson rate γ and couples to each qubit with strength ν.
//!
//! A qubit picks up the random phase φ(t) = -ν ∫₀ᵗ η(t′) dt′ and evolves by
//! U(φ) = cos φ · I + i sin φ · σ_x. Averaging the phase factor over the
//! process has the closed form G_n(t) = ⟨cos nφ(t)⟩ with
//!
//! * γ > nν (fast switching, monotonic decay):
//!   G_n = e^{-γt} [cosh(δt) + (γ/δ) sinh(δt)],
//! * γ < nν (slow switching, damped oscillations):
//!   G_n = e^{-γt} [cos(δt) + (γ/δ) sin(δt)],
//!
//! with δ = √|γ² - (nν)²|, while ⟨sin nφ(t)⟩ = 0 by the ± symmetry of η.
//! At γ = nν both branches degenerate to e^{-γt}(1 + γt).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Exp};

use crate::matrix::ComplexMatrix;
use crate::{Error, Result};

/// Relative tolerance at which γ and nν are considered equal and the
/// degenerate closed form is used instead of either branch.
const DEGENERATE_REL_TOL: f64 = 1e-9;

/// Largest harmonic index with a supported dephasing factor. The evolved
/// states only ever need G₂, G₄ and G₆, but G₁…G₆ all come from the same
/// formulas.
pub const MAX_DEPHASING_INDEX: u32 = 6;

/// Telegraph-noise parameters.
///
/// `epsilon` is the bare qubit energy. It enters the propagator only as the
/// global phase e^{-iεt}, which cancels in U ρ U†, so it is fixed at 0 and
/// kept as a documented field rather than a tunable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    pub gamma: f64,
    pub nu: f64,
    pub epsilon: f64,
}

impl NoiseParams {
    pub fn new(gamma: f64, nu: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "switching rate gamma must be positive and finite, got {gamma}"
            )));
        }
        if !(nu.is_finite() && nu > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "coupling nu must be positive and finite, got {nu}"
            )));
        }
        Ok(NoiseParams {
            gamma,
            nu,
            epsilon: 0.0,
        })
    }
}

/// One realization of the telegraph process on [0, t_max]: the sign at t = 0
/// and the ordered times at which it flips.
#[derive(Debug, Clone)]
pub struct RtnTrajectory {
    pub initial_sign: f64,
    pub switch_times: Vec<f64>,
    pub t_max: f64,
}

/// Noise-averaged phase factor G_n(t) = ⟨cos nφ(t)⟩.
///
/// The fast-switching branch is evaluated as a sum of two decaying
/// exponentials, ½(1 ± γ/δ) e^{-(γ ∓ δ)t}, once δt is large enough that
/// cosh would overflow; the result is clamped to [-1, 1] against rounding
/// (the exact average is a mean of cosines and cannot leave that interval).
pub fn dephasing_factor(n: u32, p: &NoiseParams, t: f64) -> Result<f64> {
    if n == 0 || n > MAX_DEPHASING_INDEX {
        return Err(Error::InvalidArgument(format!(
            "harmonic index must be in 1..={MAX_DEPHASING_INDEX}, got {n}"
        )));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "time must be nonnegative and finite, got {t}"
        )));
    }
    let (gamma, x) = (p.gamma, n as f64 * p.nu);
    let g = if (gamma - x).abs() <= DEGENERATE_REL_TOL * gamma.max(x) {
        (-gamma * t).exp() * (1.0 + gamma * t)
    } else if gamma > x {
        let delta = (gamma * gamma - x * x).sqrt();
        let r = gamma / delta;
        if delta * t < 300.0 {
            (-gamma * t).exp() * ((delta * t).cosh() + r * (delta * t).sinh())
        } else {
            0.5 * (1.0 + r) * (-(gamma - delta) * t).exp()
                + 0.5 * (1.0 - r) * (-(gamma + delta) * t).exp()
        }
    } else {
        let delta = (x * x - gamma * gamma).sqrt();
        (-gamma * t).exp() * ((delta * t).cos() + (gamma / delta) * (delta * t).sin())
    };
    Ok(g.clamp(-1.0, 1.0))
}

/// Deterministic per-trajectory RNG: trajectory `index` of a run seeded with
/// `seed` always sees the same stream, independent of generation order or
/// thread count.
pub fn trajectory_rng(seed: u64, index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Sample a telegraph realization on [0, t_max]: the initial sign is ±1 with
/// equal probability (the stationary distribution of the process) and switch
/// times form a Poisson process of rate γ.
pub fn sample_trajectory(p: &NoiseParams, t_max: f64, rng: &mut impl Rng) -> Result<RtnTrajectory> {
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "trajectory horizon must be positive and finite, got {t_max}"
        )));
    }
    let initial_sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
    let exp = Exp::new(p.gamma).expect("gamma validated positive");
    let mut switch_times = Vec::new();
    let mut t = exp.sample(rng);
    while t < t_max {
        switch_times.push(t);
        t += exp.sample(rng);
    }
    Ok(RtnTrajectory {
        initial_sign,
        switch_times,
        t_max,
    })
}

/// Accumulated random phase φ(t) = -ν ∫₀ᵗ η(t′) dt′, evaluated exactly as a
/// signed sum of inter-switch segment lengths.
pub fn accumulated_phase(traj: &RtnTrajectory, p: &NoiseParams, t: f64) -> Result<f64> {
    if !(0.0..=traj.t_max).contains(&t) {
        return Err(Error::InvalidArgument(format!(
            "time {t} outside the trajectory horizon [0, {}]",
            traj.t_max
        )));
    }
    let mut integral = 0.0;
    let mut sign = traj.initial_sign;
    let mut prev = 0.0;
    for &s in &traj.switch_times {
        if s >= t {
            break;
        }
        integral += sign * (s - prev);
        sign = -sign;
        prev = s;
    }
    integral += sign * (t - prev);
    Ok(-p.nu * integral)
}

/// Single-qubit propagator U(φ) = cos φ · I + i sin φ · σ_x.
///
/// This is the exact solution of the dephasing Hamiltonian in the σ_x
/// eigenbasis; the global phase e^{-iεt} is omitted (ε = 0).
pub fn single_qubit_propagator(phi: f64) -> ComplexMatrix {
    let mut u = ComplexMatrix::zeros(2);
    let c = Complex64::new(phi.cos(), 0.0);
    let is = Complex64::new(0.0, phi.sin());
    u[(0, 0)] = c;
    u[(1, 1)] = c;
    u[(0, 1)] = is;
    u[(1, 0)] = is;
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::hermitian_eigenvalues;

    fn params(gamma: f64, nu: f64) -> NoiseParams {
        NoiseParams::new(gamma, nu).unwrap()
    }

    #[test]
    fn dephasing_factor_is_one_at_time_zero() {
        for (gamma, nu) in [(0.1, 1.0), (1.0, 1.0), (10.0, 1.0), (2.0, 1.0)] {
            for n in 1..=6 {
                assert_eq!(dephasing_factor(n, &params(gamma, nu), 0.0).unwrap(), 1.0);
            }
        }
    }

    #[test]
    fn degenerate_point_matches_analytic_limit() {
        // At γ = nν the closed form collapses to e^{-γt}(1 + γt); at t = 1/γ
        // that is 2/e.
        let p = params(2.0, 1.0); // γ = 2ν ⇒ degenerate for n = 2
        let got = dephasing_factor(2, &p, 0.5).unwrap();
        assert!((got - 2.0 * (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn branches_are_continuous_across_the_degenerate_point() {
        // Approaching γ = nν from either side must agree with the degenerate
        // formula to 1e-4 (the limit is smooth; the tolerance covers the
        // cancellation in (cosh + (γ/δ) sinh) for tiny δ).
        for n in [1u32, 2, 4, 6] {
            let x = n as f64; // nν with ν = 1
            for t in [0.3, 1.0, 5.0] {
                let exact = (-x * t).exp() * (1.0 + x * t);
                for side in [1.0 + 1e-6, 1.0 - 1e-6] {
                    let got = dephasing_factor(n, &params(x * side, 1.0), t).unwrap();
                    assert!(
                        (got - exact).abs() < 1e-4,
                        "n={n} t={t} side={side}: {got} vs {exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn dephasing_factor_decays_at_long_times() {
        // G_n → 0 in every branch, but the governing rate differs: the
        // oscillating branch decays under the e^{-γt} envelope, while the
        // fast-switching branch keeps a slow mode at rate γ - δ ≈ (nν)²/2γ.
        // Probe each branch at 50 times its own slowest rate.
        for ratio in [0.1, 10.0] {
            let p = params(ratio, 1.0);
            for n in [2u32, 4, 6] {
                let x = n as f64 * p.nu;
                let rate = if p.gamma > x {
                    p.gamma - (p.gamma * p.gamma - x * x).sqrt()
                } else {
                    p.gamma
                };
                let g = dephasing_factor(n, &p, 50.0 / rate).unwrap();
                assert!(g.abs() < 1e-3, "ratio={ratio} n={n}: {g}");
            }
        }
    }

    #[test]
    fn dephasing_factor_stays_within_unit_interval() {
        for ratio in [0.05, 0.1, 0.9, 1.0, 1.1, 10.0, 100.0] {
            let p = params(ratio, 1.0);
            for n in [1, 2, 4, 6] {
                for k in 0..200 {
                    let t = 0.25 * k as f64 / p.gamma;
                    let g = dephasing_factor(n, &p, t).unwrap();
                    assert!((-1.0..=1.0).contains(&g));
                }
            }
        }
    }

    #[test]
    fn markov_branch_survives_huge_time_arguments() {
        // δt ≈ 550 would overflow cosh; the two-exponential form must not.
        let p = params(10.0, 1.0);
        let g = dephasing_factor(2, &p, 60.0).unwrap();
        assert!(g.is_finite());
        // Slowest mode: ½(1 + γ/δ)e^{-(γ-δ)t} with δ = √(γ²-4).
        let delta = (100.0f64 - 4.0).sqrt();
        let expect = 0.5 * (1.0 + 10.0 / delta) * (-(10.0 - delta) * 60.0).exp();
        assert!((g - expect).abs() < 1e-12);
    }

    #[test]
    fn dephasing_factor_rejects_bad_arguments() {
        let p = params(1.0, 1.0);
        assert!(dephasing_factor(0, &p, 1.0).is_err());
        assert!(dephasing_factor(7, &p, 1.0).is_err());
        assert!(dephasing_factor(2, &p, -0.1).is_err());
        assert!(NoiseParams::new(0.0, 1.0).is_err());
        assert!(NoiseParams::new(1.0, -2.0).is_err());
    }

    #[test]
    fn trajectory_switch_count_matches_poisson_mean() {
        // 10⁴ samples of a rate-γ Poisson count on [0, t]: the sample mean
        // must sit within 5 standard errors of γt.
        let p = params(2.0, 1.0);
        let t_max = 3.0;
        let mut rng = trajectory_rng(11, 0);
        let n = 10_000;
        let mut total = 0usize;
        for _ in 0..n {
            total += sample_trajectory(&p, t_max, &mut rng).unwrap().switch_times.len();
        }
        let mean = total as f64 / n as f64;
        let expect = p.gamma * t_max;
        let se = (expect / n as f64).sqrt(); // Poisson variance = mean
        assert!(
            (mean - expect).abs() < 5.0 * se,
            "mean {mean} vs {expect} (se {se})"
        );
    }

    #[test]
    fn trajectory_times_are_ascending_and_in_range() {
        let p = params(5.0, 1.0);
        let mut rng = trajectory_rng(3, 9);
        for _ in 0..200 {
            let traj = sample_trajectory(&p, 2.0, &mut rng).unwrap();
            assert!(traj.initial_sign == 1.0 || traj.initial_sign == -1.0);
            assert!(traj.switch_times.windows(2).all(|w| w[0] < w[1]));
            assert!(traj.switch_times.iter().all(|&s| (0.0..2.0).contains(&s)));
        }
    }

    /// η evaluated from a trajectory at one instant.
    fn eta_at(traj: &RtnTrajectory, t: f64) -> f64 {
        let flips = traj.switch_times.iter().filter(|&&s| s < t).count();
        if flips % 2 == 0 {
            traj.initial_sign
        } else {
            -traj.initial_sign
        }
    }

    #[test]
    fn telegraph_signal_is_unbiased_and_exponentially_correlated() {
        // ⟨η(t)⟩ = 0 and ⟨η(t)η(t+τ)⟩ = e^{-2γτ} for the stationary process;
        // both estimated over 10⁵ trajectories and compared at 3 standard
        // errors of the empirical means.
        let p = params(1.0, 1.0);
        let (t, tau) = (0.7, 0.4);
        let n = 100_000;
        let (mut sum, mut sum_corr, mut sum_corr_sq) = (0.0, 0.0, 0.0);
        for k in 0..n {
            let mut rng = trajectory_rng(99, k);
            let traj = sample_trajectory(&p, 2.0, &mut rng).unwrap();
            let e1 = eta_at(&traj, t);
            let e2 = eta_at(&traj, t + tau);
            sum += e1;
            sum_corr += e1 * e2;
            sum_corr_sq += (e1 * e2) * (e1 * e2);
        }
        let nf = n as f64;
        let mean = sum / nf;
        assert!(mean.abs() < 3.0 / nf.sqrt(), "⟨η⟩ = {mean}"); // Var(η) = 1
        let corr = sum_corr / nf;
        let var = (sum_corr_sq / nf - corr * corr).max(0.0);
        let se = (var / nf).sqrt();
        let expect = (-2.0 * p.gamma * tau).exp();
        assert!(
            (corr - expect).abs() < 3.0 * se,
            "autocorrelation {corr} vs {expect} (se {se})"
        );
    }

    #[test]
    fn phase_of_switchless_trajectory_is_minus_nu_t() {
        let p = params(1.0, 0.7);
        let traj = RtnTrajectory {
            initial_sign: 1.0,
            switch_times: vec![],
            t_max: 2.0,
        };
        assert_eq!(accumulated_phase(&traj, &p, 1.5).unwrap(), -0.7 * 1.5);
    }

    #[test]
    fn phase_cancels_for_a_midpoint_switch() {
        let p = params(1.0, 1.3);
        let traj = RtnTrajectory {
            initial_sign: -1.0,
            switch_times: vec![1.0],
            t_max: 2.0,
        };
        assert_eq!(accumulated_phase(&traj, &p, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn phase_is_bounded_by_nu_t() {
        let p = params(3.0, 1.9);
        let mut rng = trajectory_rng(5, 2);
        for _ in 0..500 {
            let traj = sample_trajectory(&p, 1.5, &mut rng).unwrap();
            let phi = accumulated_phase(&traj, &p, 1.5).unwrap();
            assert!(phi.abs() <= p.nu * 1.5 + 1e-12);
        }
    }

    #[test]
    fn phase_rejects_times_beyond_the_horizon() {
        let p = params(1.0, 1.0);
        let traj = RtnTrajectory {
            initial_sign: 1.0,
            switch_times: vec![],
            t_max: 1.0,
        };
        assert!(accumulated_phase(&traj, &p, 1.5).is_err());
    }

    #[test]
    fn propagator_special_values() {
        let u0 = single_qubit_propagator(0.0);
        assert!(u0.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
        let u = single_qubit_propagator(std::f64::consts::FRAC_PI_2);
        // i·σ_x
        assert!(u[(0, 0)].norm() < 1e-15);
        assert!((u[(0, 1)] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn propagator_is_unitary() {
        for k in 0..32 {
            let u = single_qubit_propagator(0.37 * k as f64);
            let prod = u.mul(&u.dagger());
            assert!(prod.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-14);
        }
    }

    #[test]
    fn propagator_commutes_with_sigma_x() {
        // U(φ) is diagonal in the σ_x eigenbasis, so σ_x U σ_x = U.
        let mut sx = ComplexMatrix::zeros(2);
        sx[(0, 1)] = Complex64::ONE;
        sx[(1, 0)] = Complex64::ONE;
        let u = single_qubit_propagator(0.83);
        assert!(sx.mul(&u).mul(&sx).max_abs_diff(&u) < 1e-15);
    }

    #[test]
    fn trajectory_rng_is_reproducible_per_index() {
        let p = params(1.5, 1.0);
        let a = sample_trajectory(&p, 4.0, &mut trajectory_rng(42, 7)).unwrap();
        let b = sample_trajectory(&p, 4.0, &mut trajectory_rng(42, 7)).unwrap();
        assert_eq!(a.initial_sign, b.initial_sign);
        assert_eq!(a.switch_times, b.switch_times);
        let c = sample_trajectory(&p, 4.0, &mut trajectory_rng(42, 8)).unwrap();
        assert!(a.switch_times != c.switch_times || a.initial_sign != c.initial_sign);
    }

    #[test]
    fn monte_carlo_mean_of_cos_n_phi_matches_closed_form() {
        // Brute-force oracle for G_n at a non-Markovian point: the sample
        // mean of cos(nφ(t)) over 2·10⁴ trajectories must agree within 3
        // standard errors (the heavier 27-point scan lives in the acceptance
        // suite).
        let p = params(1.0, 0.1); // γ = 1, ν = 0.1 ⇒ fast-switching for n = 2
        let t = 1.0;
        let n_samples = 20_000;
        let (mut sc, mut sc2, mut ss, mut ss2) = (0.0, 0.0, 0.0, 0.0);
        for k in 0..n_samples {
            let mut rng = trajectory_rng(1234, k);
            let traj = sample_trajectory(&p, t, &mut rng).unwrap();
            let phi = accumulated_phase(&traj, &p, t).unwrap();
            let (c, s) = ((2.0 * phi).cos(), (2.0 * phi).sin());
            sc += c;
            sc2 += c * c;
            ss += s;
            ss2 += s * s;
        }
        let nf = n_samples as f64;
        let (mc, ms) = (sc / nf, ss / nf);
        let se_c = ((sc2 / nf - mc * mc).max(0.0) / nf).sqrt();
        let se_s = ((ss2 / nf - ms * ms).max(0.0) / nf).sqrt();
        let g = dephasing_factor(2, &p, t).unwrap();
        assert!((mc - g).abs() < 3.0 * se_c.max(1e-9), "cos: {mc} vs {g} (se {se_c})");
        assert!(ms.abs() < 3.0 * se_s.max(1e-9), "sin: {ms} (se {se_s})");
    }

    #[test]
    fn propagator_entries_have_unit_rank_structure() {
        // The propagator's spectrum is {e^{iφ}, e^{-iφ}} so U + U† = 2cos φ I;
        // check via eigenvalues of the Hermitian part.
        let phi = 0.61;
        let u = single_qubit_propagator(phi);
        let herm = u.add(&u.dagger()).scale(0.5);
        let eigs = hermitian_eigenvalues(&herm).unwrap();
        for e in eigs {
            assert!((e - phi.cos()).abs() < 1e-14);
        }
    }
}
