//! Correlation measures for two- and three-qubit states.
//!
//! This module provides bipartite mutual information, measurement-optimized
//! conditional entropies, the genuine tripartite total/classical/quantum
//! correlations built from them, tripartite negativity, fidelity-based
//! entanglement witnesses, and closed-form reference values for the
//! exactly solvable dephasing scenarios.
//!
//! All entropic quantities are in bits. "Genuine" tripartite correlations
//! are those not attributable to any two-qubit subsystem: the genuine total
//! correlation T3 is the smallest one-vs-two mutual information, the genuine
//! classical correlation J3 is the excess of the best three-qubit classical
//! correlation over the best two-qubit one, and the genuine discord is
//! D3 = T3 − J3.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::evolution::{ghz_state_vector, w_state_vector, Coupling, Family, ScenarioConfig};
use crate::matrix::{
    entropy_from_eigenvalues, hermitian_eigenvalues, partial_trace, partial_transpose,
    von_neumann_entropy, ComplexMatrix, DensityMatrix, Qubit,
};
use crate::noise::dephasing_factor;
use crate::{Error, Result};

/// Entrywise tolerance under qubit swaps below which a state is treated as
/// permutation symmetric, enabling the cheaper symmetric classical path.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Discord values in (−DISCORD_CLAMP_WINDOW, 0) are attributed to optimizer
/// slack and rounded to zero; anything lower is an internal error.
pub const DISCORD_CLAMP_WINDOW: f64 = 1e-6;

/// Measurement outcomes with probability below this contribute nothing to a
/// conditional-entropy average and are skipped.
const OUTCOME_PROBABILITY_FLOOR: f64 = 1e-14;

/// A product of two single-qubit projective measurement bases. Each basis is
/// parameterized by a polar angle θ ∈ [0, π/2] and a phase Φ ∈ [0, 2π):
/// |0̃⟩ = cos θ|0⟩ + e^{iΦ} sin θ|1⟩, |1̃⟩ = e^{−iΦ} sin θ|0⟩ − cos θ|1⟩.
/// The `a` angles act on the lower-labeled measured qubit, the `b` angles on
/// the higher-labeled one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementFrame {
    pub theta_a: f64,
    pub theta_b: f64,
    pub phi_a: f64,
    pub phi_b: f64,
}

impl MeasurementFrame {
    pub fn new(theta_a: f64, theta_b: f64, phi_a: f64, phi_b: f64) -> Self {
        Self {
            theta_a,
            theta_b,
            phi_a,
            phi_b,
        }
    }

    /// Map the angles into the canonical ranges θ ∈ [0, π/2], Φ ∈ [0, 2π).
    /// Outcome relabeling makes (θ, Φ) and (π − θ, Φ + π) the same basis, so
    /// this never changes the measurement, only its label.
    pub fn canonicalized(self) -> Self {
        let (theta_a, phi_a) = canonical_angles(self.theta_a, self.phi_a);
        let (theta_b, phi_b) = canonical_angles(self.theta_b, self.phi_b);
        Self {
            theta_a,
            theta_b,
            phi_a,
            phi_b,
        }
    }
}

fn canonical_angles(theta: f64, phi: f64) -> (f64, f64) {
    let mut theta = theta.rem_euclid(PI);
    let mut phi = phi;
    if theta > FRAC_PI_2 {
        theta = PI - theta;
        phi += PI;
    }
    (theta, phi.rem_euclid(2.0 * PI))
}

/// Settings for the measurement-frame minimizer: a coarse inclusive grid
/// followed by simplex refinement from the best grid points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerSettings {
    pub grid_points_per_angle: usize,
    pub refine_starts: usize,
    /// Refinement stops once the simplex value spread falls below this (bits).
    pub tolerance: f64,
    pub max_refine_iterations: usize,
}

impl OptimizerSettings {
    pub fn new(
        grid_points_per_angle: usize,
        refine_starts: usize,
        tolerance: f64,
        max_refine_iterations: usize,
    ) -> Result<Self> {
        if grid_points_per_angle == 0 || refine_starts == 0 || max_refine_iterations == 0 {
            return Err(Error::InvalidArgument(
                "optimizer settings must all be positive".into(),
            ));
        }
        if tolerance <= 0.0 || !tolerance.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "optimizer tolerance must be positive and finite, got {tolerance}"
            )));
        }
        Ok(Self {
            grid_points_per_angle,
            refine_starts,
            tolerance,
            max_refine_iterations,
        })
    }
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            grid_points_per_angle: 8,
            refine_starts: 5,
            tolerance: 1e-6,
            max_refine_iterations: 400,
        }
    }
}

/// The two entanglement witnesses in use: W_W2 = ½I − P_GHZ detects states
/// close to the GHZ state, W_W1 = ⅔I − P_W detects states close to the W
/// state. Negative expectation certifies tripartite entanglement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    GhzW2,
    WW1,
}

impl WitnessKind {
    /// The witness conventionally paired with each initial-state family.
    pub fn for_family(family: Family) -> Self {
        match family {
            Family::Ghz => WitnessKind::GhzW2,
            Family::W => WitnessKind::WW1,
        }
    }

    /// Stable identifier used in CSV output.
    pub fn label(self) -> &'static str {
        match self {
            WitnessKind::GhzW2 => "GHZ_W2",
            WitnessKind::WW1 => "W_W1",
        }
    }
}

/// One of the two tensor slots of a two-qubit state (the first slot is the
/// more significant basis bit).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSlot {
    First,
    Second,
}

/// A bipartition of a state's qubits for mutual information.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bipartition {
    /// One qubit of a three-qubit state against the remaining pair.
    QubitVsPair(Qubit),
    /// The two qubits of a two-qubit state against each other.
    FirstVsSecond,
}

/// Result of a pair-measurement conditional-entropy minimization.
#[derive(Debug, Clone, Copy)]
pub struct PairMeasurement {
    /// Minimized conditional entropy, in bits.
    pub value: f64,
    /// The minimizing frame, canonicalized.
    pub frame: MeasurementFrame,
    /// False when any simplex refinement hit the iteration cap before
    /// reaching the requested tolerance; the value is still the best found.
    pub converged: bool,
}

/// Genuine tripartite classical correlation J3 together with the pair
/// measurement frame that realized it.
#[derive(Debug, Clone, Copy)]
pub struct ClassicalCorrelations {
    pub classical3: f64,
    pub frame: MeasurementFrame,
    pub converged: bool,
}

/// Genuine tripartite correlation triple; discord3 = total3 − classical3
/// holds identically (tiny optimizer slack is absorbed into classical3).
#[derive(Debug, Clone, Copy)]
pub struct DiscordReport {
    pub total3: f64,
    pub classical3: f64,
    pub discord3: f64,
    pub frame: MeasurementFrame,
    pub converged: bool,
}

/// One fully evaluated sweep point. `None` marks measures that were not
/// requested (rendered as empty CSV fields, never as zero).
#[derive(Debug, Clone, Copy)]
pub struct CorrelationReport {
    /// Time in units of γt.
    pub t: f64,
    /// Purity of the initial Werner-type state.
    pub r: f64,
    pub negativity3: Option<f64>,
    pub witness_value: Option<f64>,
    pub total3: Option<f64>,
    pub classical3: Option<f64>,
    pub discord3: Option<f64>,
    pub optimizer_frame: Option<MeasurementFrame>,
}

/// Orthonormal measurement kets {|0̃⟩, |1̃⟩} for one qubit.
fn frame_kets(theta: f64, phi: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = theta.sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    [
        [Complex64::new(c, 0.0), e * s],
        [e.conj() * s, Complex64::new(-c, 0.0)],
    ]
}

/// p · S(ρ/p) for an unnormalized 2×2 conditional state with weight p = tr ρ,
/// using the closed-form qubit spectrum λ± = (1 ± √(1 − 4 det)) / 2.
fn weighted_outcome_entropy(c: &[[Complex64; 2]; 2]) -> Result<f64> {
    let p = c[0][0].re + c[1][1].re;
    if p < OUTCOME_PROBABILITY_FLOOR {
        return Ok(0.0);
    }
    let det = (c[0][0].re * c[1][1].re - c[0][1].norm_sqr()) / (p * p);
    let disc = (1.0 - 4.0 * det).max(0.0).sqrt();
    let eigs = [(1.0 - disc) / 2.0, (1.0 + disc) / 2.0];
    Ok(p * entropy_from_eigenvalues(&eigs)?)
}

/// Conditional entropy of the unmeasured qubit of a two-qubit state after a
/// projective measurement in the frame (θ, Φ) on the `measured` slot:
/// Σ_m p_m S(ρ_{unmeasured|m}). No minimization is performed.
pub fn measured_conditional_entropy_single_at(
    rho_ij: &DensityMatrix,
    measured: PairSlot,
    theta: f64,
    phi: f64,
) -> Result<f64> {
    if rho_ij.dim() != 4 {
        return Err(Error::InvalidArgument(
            "single-qubit measured conditional entropy needs a two-qubit state".into(),
        ));
    }
    let m = rho_ij.matrix();
    let kets = frame_kets(theta, phi);
    let mut total = 0.0;
    for w in &kets {
        let mut c = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (k, row) in c.iter_mut().enumerate() {
            for (kp, entry) in row.iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..2 {
                    for jp in 0..2 {
                        let (r, col) = match measured {
                            PairSlot::Second => (2 * k + j, 2 * kp + jp),
                            PairSlot::First => (2 * j + k, 2 * jp + kp),
                        };
                        acc += w[j].conj() * m[(r, col)] * w[jp];
                    }
                }
                *entry = acc;
            }
        }
        total += weighted_outcome_entropy(&c)?;
    }
    Ok(total)
}

/// Minimized conditional entropy of one qubit of a two-qubit state given a
/// projective measurement on the other. Returns the minimum (bits) and
/// whether every simplex refinement converged.
pub fn measured_conditional_entropy_single(
    rho_ij: &DensityMatrix,
    measured: PairSlot,
    opt: &OptimizerSettings,
) -> Result<(f64, bool)> {
    if rho_ij.dim() != 4 {
        return Err(Error::InvalidArgument(
            "single-qubit measured conditional entropy needs a two-qubit state".into(),
        ));
    }
    let objective = |p: &[f64; 2]| {
        measured_conditional_entropy_single_at(rho_ij, measured, p[0], p[1])
            .unwrap_or(f64::INFINITY)
    };
    let (value, _, converged) = minimize_over_frames(&objective, opt);
    if !value.is_finite() {
        return Err(Error::Internal(
            "conditional entropy evaluation failed on every measurement frame".into(),
        ));
    }
    Ok((value, converged))
}

fn permutation_placing_last(target: Qubit) -> [usize; 3] {
    match target {
        Qubit::A => [2, 0, 1],
        Qubit::B => [0, 2, 1],
        Qubit::C => [0, 1, 2],
    }
}

/// Core pair-measurement conditional entropy on a matrix already permuted so
/// the target qubit is the least significant slot.
fn pair_conditional_entropy(permuted: &ComplexMatrix, frame: &MeasurementFrame) -> Result<f64> {
    let ka = frame_kets(frame.theta_a, frame.phi_a);
    let kb = frame_kets(frame.theta_b, frame.phi_b);
    let mut total = 0.0;
    for wa in &ka {
        for wb in &kb {
            let w = [wa[0] * wb[0], wa[0] * wb[1], wa[1] * wb[0], wa[1] * wb[1]];
            let mut c = [[Complex64::new(0.0, 0.0); 2]; 2];
            for (k, row) in c.iter_mut().enumerate() {
                for (kp, entry) in row.iter_mut().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for x in 0..4 {
                        for y in 0..4 {
                            acc += w[x].conj() * permuted[(2 * x + k, 2 * y + kp)] * w[y];
                        }
                    }
                    *entry = acc;
                }
            }
            total += weighted_outcome_entropy(&c)?;
        }
    }
    Ok(total)
}

/// Conditional entropy of the target qubit after measuring the other two in
/// the given product frame (angles `a` on the lower-labeled measured qubit,
/// `b` on the higher-labeled one). No minimization is performed.
pub fn measured_conditional_entropy_pair_at(
    rho: &DensityMatrix,
    target: Qubit,
    frame: &MeasurementFrame,
) -> Result<f64> {
    if rho.dim() != 8 {
        return Err(Error::InvalidArgument(
            "pair-measured conditional entropy needs a three-qubit state".into(),
        ));
    }
    let permuted = rho.matrix().permute_qubits(permutation_placing_last(target));
    pair_conditional_entropy(&permuted, frame)
}

/// Minimized conditional entropy of `target` given product projective
/// measurements on the other two qubits, over all frames.
pub fn measured_conditional_entropy_pair(
    rho: &DensityMatrix,
    target: Qubit,
    opt: &OptimizerSettings,
) -> Result<PairMeasurement> {
    if rho.dim() != 8 {
        return Err(Error::InvalidArgument(
            "pair-measured conditional entropy needs a three-qubit state".into(),
        ));
    }
    let permuted = rho.matrix().permute_qubits(permutation_placing_last(target));
    let objective = |p: &[f64; 4]| {
        let frame = MeasurementFrame::new(p[0], p[1], p[2], p[3]);
        pair_conditional_entropy(&permuted, &frame).unwrap_or(f64::INFINITY)
    };
    let (value, params, converged) = minimize_over_frames(&objective, opt);
    if !value.is_finite() {
        return Err(Error::Internal(
            "conditional entropy evaluation failed on every measurement frame".into(),
        ));
    }
    Ok(PairMeasurement {
        value,
        frame: MeasurementFrame::new(params[0], params[1], params[2], params[3]),
        converged,
    })
}

/// Mutual information across a bipartition, in bits.
pub fn mutual_information(rho: &DensityMatrix, cut: Bipartition) -> Result<f64> {
    match cut {
        Bipartition::QubitVsPair(q) => {
            if rho.dim() != 8 {
                return Err(Error::InvalidArgument(
                    "one-vs-pair cut needs a three-qubit state".into(),
                ));
            }
            let single = von_neumann_entropy(&partial_trace(rho, &[q])?)?;
            let pair = von_neumann_entropy(&partial_trace(rho, &q.others())?)?;
            Ok(single + pair - von_neumann_entropy(rho)?)
        }
        Bipartition::FirstVsSecond => {
            if rho.dim() != 4 {
                return Err(Error::InvalidArgument(
                    "first-vs-second cut needs a two-qubit state".into(),
                ));
            }
            let first = von_neumann_entropy(&partial_trace(rho, &[Qubit::A])?)?;
            let second = von_neumann_entropy(&partial_trace(rho, &[Qubit::B])?)?;
            Ok(first + second - von_neumann_entropy(rho)?)
        }
    }
}

/// Genuine tripartite total correlation T3: the smallest mutual information
/// over the three one-vs-two cuts.
pub fn genuine_total_t3(rho: &DensityMatrix) -> Result<f64> {
    let mut min = f64::INFINITY;
    for q in Qubit::ALL {
        let i = mutual_information(rho, Bipartition::QubitVsPair(q))?;
        if i < min {
            min = i;
        }
    }
    Ok(min)
}

/// True when the state is entrywise invariant (within SYMMETRY_TOL) under
/// the qubit swaps that generate the full permutation group.
fn permutation_symmetric(rho: &DensityMatrix) -> bool {
    let m = rho.matrix();
    m.max_abs_diff(&m.permute_qubits([1, 0, 2])) <= SYMMETRY_TOL
        && m.max_abs_diff(&m.permute_qubits([0, 2, 1])) <= SYMMETRY_TOL
}

/// Genuine tripartite classical correlation J3. For permutation-symmetric
/// states this reduces to S(ρ_C) − S(ρ_{C|AB}) and needs a single pair
/// optimization; asymmetric states take the full six-ordering search.
pub fn genuine_classical_j3(
    rho: &DensityMatrix,
    opt: &OptimizerSettings,
) -> Result<ClassicalCorrelations> {
    if rho.dim() != 8 {
        return Err(Error::InvalidArgument(
            "genuine classical correlation needs a three-qubit state".into(),
        ));
    }
    if permutation_symmetric(rho) {
        classical_j3_symmetric(rho, opt)
    } else {
        genuine_classical_j3_general(rho, opt)
    }
}

fn classical_j3_symmetric(
    rho: &DensityMatrix,
    opt: &OptimizerSettings,
) -> Result<ClassicalCorrelations> {
    let s_c = von_neumann_entropy(&partial_trace(rho, &[Qubit::C])?)?;
    let pm = measured_conditional_entropy_pair(rho, Qubit::C, opt)?;
    Ok(ClassicalCorrelations {
        classical3: s_c - pm.value,
        frame: pm.frame,
        converged: pm.converged,
    })
}

/// J3 by the full search, with no symmetry shortcut: J is maximized over the
/// six qubit orderings (I, J, K) of
/// [S(ρ_I) − S(ρ_{I|J})] + [S(ρ_K) − S(ρ_{K|IJ})],
/// the best two-qubit classical correlation J2 is subtracted, and the frame
/// of the winning ordering's pair measurement is reported.
pub fn genuine_classical_j3_general(
    rho: &DensityMatrix,
    opt: &OptimizerSettings,
) -> Result<ClassicalCorrelations> {
    if rho.dim() != 8 {
        return Err(Error::InvalidArgument(
            "genuine classical correlation needs a three-qubit state".into(),
        ));
    }
    let mut converged = true;

    let mut single_entropy = [0.0; 3];
    for q in Qubit::ALL {
        single_entropy[q.position()] = von_neumann_entropy(&partial_trace(rho, &[q])?)?;
    }

    // One-qubit classical correlations J(I|J) = S(ρ_I) − S(ρ_{I|J}) for all
    // six ordered pairs; the measurement acts on J.
    let mut pair_classical = [[0.0; 3]; 3];
    for i in Qubit::ALL {
        for j in Qubit::ALL {
            if i == j {
                continue;
            }
            let keep = if i.position() < j.position() {
                [i, j]
            } else {
                [j, i]
            };
            let rho_ij = partial_trace(rho, &keep)?;
            let measured = if j.position() > i.position() {
                PairSlot::Second
            } else {
                PairSlot::First
            };
            let (value, conv) = measured_conditional_entropy_single(&rho_ij, measured, opt)?;
            pair_classical[i.position()][j.position()] =
                single_entropy[i.position()] - value;
            converged &= conv;
        }
    }

    // Pair-measured correlations J(K|IJ) = S(ρ_K) − S(ρ_{K|IJ}); these only
    // depend on the target K.
    let mut target_classical = [0.0; 3];
    let mut target_frame = [MeasurementFrame::new(0.0, 0.0, 0.0, 0.0); 3];
    for k in Qubit::ALL {
        let pm = measured_conditional_entropy_pair(rho, k, opt)?;
        target_classical[k.position()] = single_entropy[k.position()] - pm.value;
        target_frame[k.position()] = pm.frame;
        converged &= pm.converged;
    }

    let mut best_j2 = f64::NEG_INFINITY;
    for i in Qubit::ALL {
        for j in Qubit::ALL {
            if i != j && pair_classical[i.position()][j.position()] > best_j2 {
                best_j2 = pair_classical[i.position()][j.position()];
            }
        }
    }

    let mut best_j = f64::NEG_INFINITY;
    let mut best_frame = target_frame[0];
    for i in Qubit::ALL {
        for j in Qubit::ALL {
            if i == j {
                continue;
            }
            let k = Qubit::ALL
                .into_iter()
                .find(|q| *q != i && *q != j)
                .expect("three distinct qubits");
            let value =
                pair_classical[i.position()][j.position()] + target_classical[k.position()];
            if value > best_j {
                best_j = value;
                best_frame = target_frame[k.position()];
            }
        }
    }

    Ok(ClassicalCorrelations {
        classical3: best_j - best_j2,
        frame: best_frame,
        converged,
    })
}

/// Genuine tripartite discord D3 = T3 − J3, taking the symmetric fast path
/// for J3 when the state allows it.
pub fn genuine_discord_d3(rho: &DensityMatrix, opt: &OptimizerSettings) -> Result<DiscordReport> {
    discord_from_classical(rho, genuine_classical_j3(rho, opt)?)
}

/// D3 with the classical part forced through the full six-ordering search,
/// bypassing the symmetric shortcut. Used to cross-validate the two paths.
pub fn genuine_discord_d3_general(
    rho: &DensityMatrix,
    opt: &OptimizerSettings,
) -> Result<DiscordReport> {
    discord_from_classical(rho, genuine_classical_j3_general(rho, opt)?)
}

fn discord_from_classical(
    rho: &DensityMatrix,
    classical: ClassicalCorrelations,
) -> Result<DiscordReport> {
    let total3 = genuine_total_t3(rho)?;
    let mut classical3 = classical.classical3;
    let discord = total3 - classical3;
    if discord < -DISCORD_CLAMP_WINDOW {
        return Err(Error::Internal(format!(
            "genuine discord {discord:.3e} is below -{DISCORD_CLAMP_WINDOW:.0e}; the \
             measurement optimization overshot the classical correlation"
        )));
    }
    if discord < 0.0 {
        // Tiny negative excess means the frame search landed a hair above the
        // true classical optimum; absorb it so discord3 = total3 − classical3
        // stays an identity.
        classical3 = total3;
    }
    Ok(DiscordReport {
        total3,
        classical3,
        discord3: total3 - classical3,
        frame: classical.frame,
        converged: classical.converged,
    })
}

/// Tripartite negativity: the geometric mean of the three one-vs-two
/// bipartite negativities, each clamped at zero before the mean.
pub fn tripartite_negativity(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 8 {
        return Err(Error::InvalidArgument(
            "tripartite negativity needs a three-qubit state".into(),
        ));
    }
    let mut product = 1.0;
    for q in Qubit::ALL {
        let transposed = partial_transpose(rho, q)?;
        let eigs = hermitian_eigenvalues(&transposed)?;
        let negativity = eigs.iter().map(|e| e.abs()).sum::<f64>() - 1.0;
        product *= negativity.max(0.0);
    }
    Ok(product.cbrt())
}

/// Expectation value Tr(ρ W) of the chosen witness.
pub fn witness_expectation(rho: &DensityMatrix, kind: WitnessKind) -> Result<f64> {
    if rho.dim() != 8 {
        return Err(Error::InvalidArgument(
            "witness expectation needs a three-qubit state".into(),
        ));
    }
    let (offset, target) = match kind {
        WitnessKind::GhzW2 => (0.5, ghz_state_vector()),
        WitnessKind::WW1 => (2.0 / 3.0, w_state_vector()),
    };
    Ok(offset - rho.matrix().expectation(&target).re)
}

/// Measures with closed-form references available for some scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceMeasure {
    Negativity,
    Witness,
}

/// Closed-form value of the measure for the scenario at time `t`, expressed
/// through the dephasing factors alone. Returns `None` where no compact form
/// exists (the W-family negativity). These formulas are the independent
/// reference the eigenvalue pipeline is validated against.
pub fn closed_form_reference(
    cfg: &ScenarioConfig,
    measure: ReferenceMeasure,
    t: f64,
) -> Result<Option<f64>> {
    let r = cfg.purity;
    match (cfg.family, cfg.coupling, measure) {
        (Family::Ghz, Coupling::Local, ReferenceMeasure::Negativity) => {
            let g2 = dephasing_factor(2, &cfg.noise, t)?;
            Ok(Some(0.25 * (4.0 * r * g2 * g2 - (1.0 - r)).max(0.0)))
        }
        (Family::Ghz, Coupling::Local, ReferenceMeasure::Witness) => {
            let g2 = dephasing_factor(2, &cfg.noise, t)?;
            Ok(Some(-0.25 * (3.0 * r * g2 * g2 - (3.0 - r) / 2.0)))
        }
        (Family::Ghz, Coupling::Common, ReferenceMeasure::Negativity) => {
            let g4 = dephasing_factor(4, &cfg.noise, t)?;
            let root = (2.0 * (g4 * g4 + 1.0)).sqrt();
            Ok(Some(0.25 * (2.0 * r * root - (1.0 - r)).max(0.0)))
        }
        (Family::Ghz, Coupling::Common, ReferenceMeasure::Witness) => {
            let g4 = dephasing_factor(4, &cfg.noise, t)?;
            Ok(Some(-0.5 * (0.75 * r * g4 - (0.75 - r))))
        }
        (Family::W, _, ReferenceMeasure::Negativity) => Ok(None),
        (Family::W, Coupling::Local, ReferenceMeasure::Witness) => {
            let g2 = dephasing_factor(2, &cfg.noise, t)?;
            let poly = 7.0 * g2.powi(3) + 5.0 * g2 * g2 + 5.0 * g2 + 4.0;
            Ok(Some(-(r * poly - 13.0) / 24.0))
        }
        (Family::W, Coupling::Common, ReferenceMeasure::Witness) => {
            let g2 = dephasing_factor(2, &cfg.noise, t)?;
            let g4 = dephasing_factor(4, &cfg.noise, t)?;
            let g6 = dephasing_factor(6, &cfg.noise, t)?;
            let poly = 9.0 * g6 + 6.0 * g4 + 7.0 * g2 + 6.0;
            Ok(Some(-(r / 32.0 * poly - 13.0 / 24.0)))
        }
    }
}

// ---------------------------------------------------------------------------
// Frame minimizer: coarse grid + Nelder–Mead refinement.
//
// Parameter layout: [θ, Φ] for single-qubit frames, [θ_a, θ_b, Φ_a, Φ_b] for
// product frames — θ angles first, so lexicographic comparison of parameter
// vectors matches lexicographic comparison of canonical frames.
// ---------------------------------------------------------------------------

fn theta_grid(n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.0];
    }
    (0..n)
        .map(|i| FRAC_PI_2 * i as f64 / (n - 1) as f64)
        .collect()
}

fn phi_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect()
}

fn compare_candidates<const N: usize>(a: &(f64, [f64; N]), b: &(f64, [f64; N])) -> std::cmp::Ordering {
    a.0.total_cmp(&b.0)
        .then_with(|| a.1.iter().zip(b.1.iter()).fold(std::cmp::Ordering::Equal, |o, (x, y)| o.then(x.total_cmp(y))))
}

fn canonicalize_params<const N: usize>(params: [f64; N]) -> [f64; N] {
    let mut out = params;
    // Angle pairs are (θ_i, Φ_i) = (params[i], params[i + N/2]).
    for i in 0..N / 2 {
        let (theta, phi) = canonical_angles(params[i], params[i + N / 2]);
        out[i] = theta;
        out[i + N / 2] = phi;
    }
    out
}

/// Minimize the objective over frame angles: evaluate the full grid in
/// parallel, then refine from the best `refine_starts` points with a
/// Nelder–Mead simplex. Ties break toward the lexicographically smallest
/// canonical frame, making the result independent of thread scheduling.
fn minimize_over_frames<const N: usize>(
    objective: &(impl Fn(&[f64; N]) -> f64 + Sync),
    opt: &OptimizerSettings,
) -> (f64, [f64; N], bool) {
    let n = opt.grid_points_per_angle;
    let thetas = theta_grid(n);
    let phis = phi_grid(n);
    let axis = |i: usize| -> &[f64] {
        if i < N / 2 {
            &thetas
        } else {
            &phis
        }
    };
    let total = n.pow(N as u32);

    // Flat index decodes most-significant-first, so candidate order is
    // lexicographic in the parameter vector.
    let mut candidates: Vec<(f64, [f64; N])> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut params = [0.0; N];
            let mut rest = flat;
            for i in (0..N).rev() {
                params[i] = axis(i)[rest % n];
                rest /= n;
            }
            (objective(&params), params)
        })
        .collect();
    candidates.sort_unstable_by(compare_candidates);
    candidates.truncate(opt.refine_starts.min(candidates.len()));

    // Initial simplex steps: half a grid cell along each axis.
    let mut steps = [0.0; N];
    for (i, step) in steps.iter_mut().enumerate() {
        *step = if i < N / 2 {
            if n > 1 {
                FRAC_PI_2 / (n - 1) as f64 / 2.0
            } else {
                FRAC_PI_2 / 2.0
            }
        } else {
            PI / n as f64
        };
    }

    let mut best: Option<(f64, [f64; N])> = None;
    let mut all_converged = true;
    for (_, start) in &candidates {
        let (value, params, converged) = nelder_mead(objective, *start, steps, opt);
        all_converged &= converged;
        let candidate = (value, canonicalize_params(params));
        if best
            .as_ref()
            .is_none_or(|b| compare_candidates(&candidate, b) == std::cmp::Ordering::Less)
        {
            best = Some(candidate);
        }
    }
    let (value, params) = best.expect("at least one refinement start");
    (value, params, all_converged)
}

/// Standard Nelder–Mead with reflection 1, expansion 2, contraction 0.5 and
/// shrink 0.5; stops when the simplex value spread drops below the tolerance.
fn nelder_mead<const N: usize>(
    objective: &impl Fn(&[f64; N]) -> f64,
    start: [f64; N],
    steps: [f64; N],
    opt: &OptimizerSettings,
) -> (f64, [f64; N], bool) {
    const ALPHA: f64 = 1.0;
    const GAMMA: f64 = 2.0;
    const RHO: f64 = 0.5;
    const SIGMA: f64 = 0.5;

    let mut simplex: Vec<(f64, [f64; N])> = Vec::with_capacity(N + 1);
    simplex.push((objective(&start), start));
    for i in 0..N {
        let mut v = start;
        v[i] += steps[i];
        simplex.push((objective(&v), v));
    }

    let mut converged = false;
    for _ in 0..opt.max_refine_iterations {
        simplex.sort_unstable_by(compare_candidates);
        if simplex[N].0 - simplex[0].0 < opt.tolerance {
            converged = true;
            break;
        }

        let mut centroid = [0.0; N];
        for (_, v) in &simplex[..N] {
            for (c, x) in centroid.iter_mut().zip(v.iter()) {
                *c += x / N as f64;
            }
        }
        let worst = simplex[N];

        let mut reflected = [0.0; N];
        for i in 0..N {
            reflected[i] = centroid[i] + ALPHA * (centroid[i] - worst.1[i]);
        }
        let f_reflected = objective(&reflected);

        if f_reflected < simplex[0].0 {
            let mut expanded = [0.0; N];
            for i in 0..N {
                expanded[i] = centroid[i] + GAMMA * (reflected[i] - centroid[i]);
            }
            let f_expanded = objective(&expanded);
            simplex[N] = if f_expanded < f_reflected {
                (f_expanded, expanded)
            } else {
                (f_reflected, reflected)
            };
            continue;
        }
        if f_reflected < simplex[N - 1].0 {
            simplex[N] = (f_reflected, reflected);
            continue;
        }

        let mut contracted = [0.0; N];
        for i in 0..N {
            contracted[i] = centroid[i] + RHO * (worst.1[i] - centroid[i]);
        }
        let f_contracted = objective(&contracted);
        if f_contracted < worst.0 {
            simplex[N] = (f_contracted, contracted);
            continue;
        }

        let best = simplex[0].1;
        for entry in simplex.iter_mut().skip(1) {
            for (x, b) in entry.1.iter_mut().zip(best.iter()) {
                *x = b + SIGMA * (*x - b);
            }
            entry.0 = objective(&entry.1);
        }
    }

    simplex.sort_unstable_by(compare_candidates);
    (simplex[0].0, simplex[0].1, converged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::{evolve_analytic, initial_state};
    use crate::matrix::kronecker;
    use crate::noise::NoiseParams;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn dm(m: ComplexMatrix) -> DensityMatrix {
        DensityMatrix::new(m).unwrap()
    }

    fn scenario(family: Family, r: f64, coupling: Coupling, ratio: f64) -> ScenarioConfig {
        ScenarioConfig::new(family, r, coupling, NoiseParams::new(ratio, 1.0).unwrap()).unwrap()
    }

    /// Evolved state at dimensionless time γt for switching ratio γ/ν.
    fn evolved(family: Family, r: f64, coupling: Coupling, ratio: f64, gamma_t: f64) -> DensityMatrix {
        let cfg = scenario(family, r, coupling, ratio);
        evolve_analytic(&cfg, gamma_t / ratio).unwrap()
    }

    fn ghz_pure() -> DensityMatrix {
        initial_state(&scenario(Family::Ghz, 1.0, Coupling::Local, 1.0))
    }

    fn w_pure() -> DensityMatrix {
        initial_state(&scenario(Family::W, 1.0, Coupling::Local, 1.0))
    }

    fn maximally_mixed() -> DensityMatrix {
        dm(ComplexMatrix::identity(8).scale(0.125))
    }

    fn diag_qubit(p: f64) -> ComplexMatrix {
        ComplexMatrix::from_rows(2, &[c(p), c(0.0), c(0.0), c(1.0 - p)])
    }

    /// ½(|00⟩⟨00| + |11⟩⟨11|): perfectly classically correlated pair.
    fn classical_pair() -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(4);
        m[(0, 0)] = c(0.5);
        m[(3, 3)] = c(0.5);
        m
    }

    fn bell_pair() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        dm(ComplexMatrix::projector(&[c(s), c(0.0), c(0.0), c(s)]))
    }

    fn binary_entropy(p: f64) -> f64 {
        -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
    }

    #[test]
    fn canonical_frame_ranges_and_equivalence() {
        let frame = MeasurementFrame::new(2.0, 2.5, 7.0, -1.0);
        let canon = frame.canonicalized();
        for (theta, phi) in [(canon.theta_a, canon.phi_a), (canon.theta_b, canon.phi_b)] {
            assert!((0.0..=FRAC_PI_2).contains(&theta));
            assert!((0.0..2.0 * PI).contains(&phi));
        }
        // Canonicalization relabels outcomes, so the measured entropy is
        // unchanged for any state.
        let rho = evolved(Family::W, 0.8, Coupling::Common, 0.1, 1.0);
        let raw = measured_conditional_entropy_pair_at(&rho, Qubit::B, &frame).unwrap();
        let fixed = measured_conditional_entropy_pair_at(&rho, Qubit::B, &canon).unwrap();
        assert!((raw - fixed).abs() < 1e-12);
    }

    #[test]
    fn optimizer_settings_reject_nonpositive_values() {
        assert!(OptimizerSettings::new(0, 5, 1e-6, 400).is_err());
        assert!(OptimizerSettings::new(8, 0, 1e-6, 400).is_err());
        assert!(OptimizerSettings::new(8, 5, 0.0, 400).is_err());
        assert!(OptimizerSettings::new(8, 5, -1.0, 400).is_err());
        assert!(OptimizerSettings::new(8, 5, 1e-6, 0).is_err());
        assert!(OptimizerSettings::new(8, 5, 1e-6, 400).is_ok());
    }

    #[test]
    fn mutual_information_of_product_states_vanishes() {
        let triple = dm(kronecker(
            &kronecker(&diag_qubit(0.9), &diag_qubit(0.6)),
            &diag_qubit(0.3),
        ));
        for q in Qubit::ALL {
            let i = mutual_information(&triple, Bipartition::QubitVsPair(q)).unwrap();
            assert!(i.abs() < 1e-9, "cut {q:?} gave {i}");
        }
        let pair = dm(kronecker(&diag_qubit(0.7), &diag_qubit(0.4)));
        assert!(mutual_information(&pair, Bipartition::FirstVsSecond)
            .unwrap()
            .abs()
            < 1e-9);
    }

    #[test]
    fn mutual_information_of_maximally_entangled_states() {
        let i = mutual_information(&bell_pair(), Bipartition::FirstVsSecond).unwrap();
        assert!((i - 2.0).abs() < 1e-9);
        for q in Qubit::ALL {
            let i = mutual_information(&ghz_pure(), Bipartition::QubitVsPair(q)).unwrap();
            assert!((i - 2.0).abs() < 1e-9, "cut {q:?} gave {i}");
        }
    }

    #[test]
    fn mutual_information_rejects_mismatched_cuts() {
        assert!(matches!(
            mutual_information(&bell_pair(), Bipartition::QubitVsPair(Qubit::A)),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            mutual_information(&ghz_pure(), Bipartition::FirstVsSecond),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn single_measurement_reveals_nothing_about_a_product_state() {
        // Measuring one factor of a product state leaves the other marginal
        // untouched, whichever slot is measured — a direct probe of the slot
        // bookkeeping.
        let rho = dm(kronecker(&diag_qubit(0.7), &diag_qubit(0.5)));
        let opt = OptimizerSettings::default();
        let (second_measured, _) =
            measured_conditional_entropy_single(&rho, PairSlot::Second, &opt).unwrap();
        assert!((second_measured - binary_entropy(0.7)).abs() < 1e-9);
        let (first_measured, _) =
            measured_conditional_entropy_single(&rho, PairSlot::First, &opt).unwrap();
        assert!((first_measured - 1.0).abs() < 1e-9);
    }

    #[test]
    fn single_measurement_resolves_classical_and_bell_correlations() {
        let opt = OptimizerSettings::default();
        let classical = dm(classical_pair());
        for slot in [PairSlot::First, PairSlot::Second] {
            let (v, converged) = measured_conditional_entropy_single(&classical, slot, &opt).unwrap();
            assert!(v.abs() < 1e-9, "classical pair, slot {slot:?}: {v}");
            assert!(converged);
        }
        let (v, _) = measured_conditional_entropy_single(&bell_pair(), PairSlot::Second, &opt).unwrap();
        assert!(v.abs() < 1e-9, "bell pair: {v}");
    }

    #[test]
    fn pair_measurement_matches_marginal_entropy_on_product_states() {
        // ρ_A ⊗ (classically correlated BC): measuring B and C says nothing
        // about A, while measuring A and B pins C exactly.
        let rho = dm(kronecker(&diag_qubit(0.7), &classical_pair()));
        let opt = OptimizerSettings::default();
        let about_a = measured_conditional_entropy_pair(&rho, Qubit::A, &opt).unwrap();
        assert!((about_a.value - binary_entropy(0.7)).abs() < 1e-9);
        let about_c = measured_conditional_entropy_pair(&rho, Qubit::C, &opt).unwrap();
        assert!(about_c.value.abs() < 1e-9);
    }

    #[test]
    fn pair_measurement_resolves_ghz_in_the_computational_frame() {
        let ghz = ghz_pure();
        let computational = MeasurementFrame::new(0.0, 0.0, 0.0, 0.0);
        let direct = measured_conditional_entropy_pair_at(&ghz, Qubit::C, &computational).unwrap();
        assert!(direct.abs() < 1e-12);
        let opt = OptimizerSettings::default();
        for q in Qubit::ALL {
            let pm = measured_conditional_entropy_pair(&ghz, q, &opt).unwrap();
            assert!(pm.value.abs() < 1e-12, "target {q:?}: {}", pm.value);
        }
    }

    #[test]
    fn pair_measurement_of_maximally_mixed_state_is_flat() {
        let pm = measured_conditional_entropy_pair(
            &maximally_mixed(),
            Qubit::B,
            &OptimizerSettings::default(),
        )
        .unwrap();
        assert!((pm.value - 1.0).abs() < 1e-12);
        assert!(pm.converged);
        assert!((0.0..=FRAC_PI_2).contains(&pm.frame.theta_a));
        assert!((0.0..=FRAC_PI_2).contains(&pm.frame.theta_b));
        assert!((0.0..2.0 * PI).contains(&pm.frame.phi_a));
        assert!((0.0..2.0 * PI).contains(&pm.frame.phi_b));
    }

    #[test]
    fn genuine_total_correlation_anchors() {
        let product = dm(kronecker(
            &kronecker(&diag_qubit(0.9), &diag_qubit(0.6)),
            &diag_qubit(0.3),
        ));
        assert!(genuine_total_t3(&product).unwrap().abs() < 1e-9);
        assert!((genuine_total_t3(&ghz_pure()).unwrap() - 2.0).abs() < 1e-9);
        assert!(genuine_total_t3(&maximally_mixed()).unwrap().abs() < 1e-12);
    }

    #[test]
    fn genuine_classical_correlation_anchors() {
        let opt = OptimizerSettings::default();
        let mixed = genuine_classical_j3(&maximally_mixed(), &opt).unwrap();
        assert!(mixed.classical3.abs() < 1e-9);
        let ghz = genuine_classical_j3(&ghz_pure(), &opt).unwrap();
        assert!((ghz.classical3 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn classical_fast_path_agrees_with_general_search() {
        let opt = OptimizerSettings::default();
        // Symmetric states: the shortcut and the six-ordering search must
        // land on the same value.
        let werner = initial_state(&scenario(Family::Ghz, 0.5, Coupling::Local, 1.0));
        let fast = genuine_classical_j3(&werner, &opt).unwrap();
        let general = genuine_classical_j3_general(&werner, &opt).unwrap();
        assert!(
            (fast.classical3 - general.classical3).abs() < 1e-3,
            "fast {} vs general {}",
            fast.classical3,
            general.classical3
        );
    }

    #[test]
    fn discord_paths_agree_on_evolved_symmetric_states() {
        let opt = OptimizerSettings::default();
        for (family, coupling, r, ratio, gamma_t) in [
            (Family::Ghz, Coupling::Common, 0.8, 0.1, 1.0),
            (Family::W, Coupling::Local, 0.8, 0.1, 1.0),
        ] {
            let rho = evolved(family, r, coupling, ratio, gamma_t);
            let fast = genuine_discord_d3(&rho, &opt).unwrap();
            let general = genuine_discord_d3_general(&rho, &opt).unwrap();
            assert!(
                (fast.discord3 - general.discord3).abs() <= 2e-3,
                "{family:?}/{coupling:?}: fast {} vs general {}",
                fast.discord3,
                general.discord3
            );
        }
    }

    #[test]
    fn discord_anchors() {
        let opt = OptimizerSettings::default();
        let ghz = genuine_discord_d3(&ghz_pure(), &opt).unwrap();
        assert!((ghz.discord3 - 1.0).abs() < 1e-9, "GHZ discord {}", ghz.discord3);
        assert!((ghz.total3 - 2.0).abs() < 1e-9);
        assert!((ghz.classical3 - 1.0).abs() < 1e-9);

        let mixed = genuine_discord_d3(&maximally_mixed(), &opt).unwrap();
        assert!(mixed.discord3.abs() < 1e-6);
        assert!(mixed.discord3 >= 0.0);

        // The report is an identity by construction.
        assert!((ghz.discord3 - (ghz.total3 - ghz.classical3)).abs() < 1e-9);
    }

    #[test]
    fn discord_matches_independent_reference_values() {
        // Expected values computed with an independent implementation of the
        // same definitions (dense linear algebra + the same grid/simplex
        // minimization) and frozen here as regression anchors.
        let cases = [
            (Family::Ghz, Coupling::Local, 0.8, 0.1, 1.0, 0.000987),
            (Family::Ghz, Coupling::Local, 0.5, 10.0, 5.0, 0.286038),
            (Family::Ghz, Coupling::Common, 0.8, 0.1, 1.0, 0.508990),
            (Family::Ghz, Coupling::Common, 0.5, 10.0, 5.0, 0.302646),
            (Family::W, Coupling::Local, 0.8, 0.1, 1.0, 0.011272),
            (Family::W, Coupling::Local, 0.5, 10.0, 5.0, 0.233763),
            (Family::W, Coupling::Common, 0.8, 0.1, 1.0, 0.162727),
            (Family::W, Coupling::Common, 0.5, 10.0, 5.0, 0.156868),
            (Family::Ghz, Coupling::Local, 1.0, 0.1, 2.0, 0.000058),
            (Family::W, Coupling::Common, 1.0, 10.0, 60.0, 0.250078),
        ];
        let opt = OptimizerSettings::default();
        for (family, coupling, r, ratio, gamma_t, expected) in cases {
            let rho = evolved(family, r, coupling, ratio, gamma_t);
            let report = genuine_discord_d3(&rho, &opt).unwrap();
            assert!(
                (report.discord3 - expected).abs() < 5e-4,
                "{family:?}/{coupling:?} r={r} ratio={ratio} γt={gamma_t}: got {}, expected {expected}",
                report.discord3
            );
        }
    }

    #[test]
    fn negativity_anchors() {
        assert!((tripartite_negativity(&ghz_pure()).unwrap() - 1.0).abs() < 1e-9);
        let w = tripartite_negativity(&w_pure()).unwrap();
        assert!((w - 0.9428090415820634).abs() < 1e-9, "W negativity {w}");
        assert!(tripartite_negativity(&maximally_mixed()).unwrap().abs() < 1e-12);
        let product = dm(kronecker(
            &kronecker(&diag_qubit(0.9), &diag_qubit(0.6)),
            &diag_qubit(0.3),
        ));
        assert_eq!(tripartite_negativity(&product).unwrap(), 0.0);
    }

    #[test]
    fn witness_anchors() {
        assert!((witness_expectation(&ghz_pure(), WitnessKind::GhzW2).unwrap() + 0.5).abs() < 1e-12);
        assert!(
            (witness_expectation(&maximally_mixed(), WitnessKind::GhzW2).unwrap() - 0.375).abs()
                < 1e-12
        );
        assert!(
            (witness_expectation(&w_pure(), WitnessKind::WW1).unwrap() + 1.0 / 3.0).abs() < 1e-12
        );
    }

    #[test]
    fn witness_is_linear_in_the_state() {
        let a = ghz_pure();
        let b = maximally_mixed();
        let mixed = dm(a.matrix().scale(0.3).add(&b.matrix().scale(0.7)));
        let direct = witness_expectation(&mixed, WitnessKind::GhzW2).unwrap();
        let combined = 0.3 * witness_expectation(&a, WitnessKind::GhzW2).unwrap()
            + 0.7 * witness_expectation(&b, WitnessKind::GhzW2).unwrap();
        assert!((direct - combined).abs() < 1e-12);
    }

    #[test]
    fn closed_forms_match_eigenvalue_pipeline() {
        // The compact dephasing-factor formulas and the partial-transpose /
        // projector pipeline must agree wherever a formula exists.
        for family in [Family::Ghz, Family::W] {
            for coupling in [Coupling::Local, Coupling::Common] {
                for ratio in [0.1, 10.0] {
                    for i in 0..6 {
                        for j in 0..6 {
                            let r = i as f64 / 5.0;
                            let gamma_t = 8.0 * j as f64 / 5.0;
                            let cfg = scenario(family, r, coupling, ratio);
                            let rho = evolve_analytic(&cfg, gamma_t / ratio).unwrap();
                            if let Some(reference) =
                                closed_form_reference(&cfg, ReferenceMeasure::Negativity, gamma_t / ratio)
                                    .unwrap()
                            {
                                let n3 = tripartite_negativity(&rho).unwrap();
                                assert!(
                                    (n3 - reference).abs() < 1e-9,
                                    "{family:?}/{coupling:?} ratio={ratio} r={r} γt={gamma_t}: \
                                     negativity {n3} vs formula {reference}"
                                );
                            }
                            let kind = WitnessKind::for_family(family);
                            let reference = closed_form_reference(
                                &cfg,
                                ReferenceMeasure::Witness,
                                gamma_t / ratio,
                            )
                            .unwrap()
                            .expect("witness closed form exists for every scenario");
                            let w = witness_expectation(&rho, kind).unwrap();
                            assert!(
                                (w - reference).abs() < 1e-9,
                                "{family:?}/{coupling:?} ratio={ratio} r={r} γt={gamma_t}: \
                                 witness {w} vs formula {reference}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn closed_form_time_zero_and_saturation_anchors() {
        // At t = 0 every dephasing factor is 1 and both couplings coincide.
        for r in [0.0, 0.2, 0.5, 1.0] {
            for coupling in [Coupling::Local, Coupling::Common] {
                let cfg = scenario(Family::Ghz, r, coupling, 1.0);
                let n = closed_form_reference(&cfg, ReferenceMeasure::Negativity, 0.0)
                    .unwrap()
                    .unwrap();
                assert!((n - 0.25 * (5.0 * r - 1.0).max(0.0)).abs() < 1e-12);
                let w = closed_form_reference(&cfg, ReferenceMeasure::Witness, 0.0)
                    .unwrap()
                    .unwrap();
                assert!((w - (3.0 - 7.0 * r) / 8.0).abs() < 1e-12);
            }
            let w_cfg = scenario(Family::W, r, Coupling::Local, 1.0);
            let w = closed_form_reference(&w_cfg, ReferenceMeasure::Witness, 0.0)
                .unwrap()
                .unwrap();
            assert!((w - (13.0 - 21.0 * r) / 24.0).abs() < 1e-12);
        }

        // Common-environment GHZ saturation: once G₄ has decayed, negativity
        // and witness freeze at purity-dependent plateaus.
        for r in [0.5, 0.8, 1.0] {
            let cfg = scenario(Family::Ghz, r, Coupling::Common, 0.1);
            let t = 60.0 / 0.1;
            let n = closed_form_reference(&cfg, ReferenceMeasure::Negativity, t)
                .unwrap()
                .unwrap();
            let plateau = 0.25 * ((2.0 * std::f64::consts::SQRT_2 + 1.0) * r - 1.0).max(0.0);
            assert!((n - plateau).abs() < 1e-9, "r={r}: {n} vs {plateau}");
            let w = closed_form_reference(&cfg, ReferenceMeasure::Witness, t)
                .unwrap()
                .unwrap();
            assert!((-w - (r / 2.0 - 0.375)).abs() < 1e-9, "r={r}: witness {w}");
        }
    }

    #[test]
    fn w_family_negativity_has_no_closed_form() {
        for coupling in [Coupling::Local, Coupling::Common] {
            let cfg = scenario(Family::W, 0.7, coupling, 1.0);
            assert!(closed_form_reference(&cfg, ReferenceMeasure::Negativity, 1.0)
                .unwrap()
                .is_none());
        }
    }

    #[test]
    fn all_measures_invariant_under_qubit_permutation() {
        // An asymmetric mixture exercises the slot bookkeeping of every
        // measure, including the six-ordering classical search.
        let entangled = evolved(Family::W, 1.0, Coupling::Local, 0.1, 0.3);
        let skew = kronecker(
            &kronecker(&diag_qubit(0.9), &diag_qubit(0.6)),
            &diag_qubit(0.3),
        );
        let rho = dm(entangled.matrix().scale(0.8).add(&skew.scale(0.2)));
        let opt = OptimizerSettings::default();

        let n3 = tripartite_negativity(&rho).unwrap();
        let t3 = genuine_total_t3(&rho).unwrap();
        let w = witness_expectation(&rho, WitnessKind::WW1).unwrap();
        let d3 = genuine_discord_d3_general(&rho, &opt).unwrap();

        for perm in [[1, 0, 2], [2, 0, 1]] {
            let permuted = dm(rho.matrix().permute_qubits(perm));
            assert!((tripartite_negativity(&permuted).unwrap() - n3).abs() < 1e-9);
            assert!((genuine_total_t3(&permuted).unwrap() - t3).abs() < 1e-9);
            assert!((witness_expectation(&permuted, WitnessKind::WW1).unwrap() - w).abs() < 1e-12);
            let d3_perm = genuine_discord_d3_general(&permuted, &opt).unwrap();
            assert!(
                (d3_perm.discord3 - d3.discord3).abs() < 5e-6,
                "perm {perm:?}: {} vs {}",
                d3_perm.discord3,
                d3.discord3
            );
        }
    }

    #[test]
    fn widening_angle_ranges_never_improves_the_minimum() {
        // θ ∈ [0, π/2], Φ ∈ [0, 2π) already cover every projective basis up
        // to relabeling; scanning twice the range must not beat the optimum.
        let rho = evolved(Family::W, 0.8, Coupling::Common, 0.1, 1.0);
        let opt = OptimizerSettings::default();
        let pm = measured_conditional_entropy_pair(&rho, Qubit::C, &opt).unwrap();
        let n = 7;
        for ia in 0..n {
            for ib in 0..n {
                for ja in 0..n {
                    for jb in 0..n {
                        let frame = MeasurementFrame::new(
                            PI * ia as f64 / (n - 1) as f64,
                            PI * ib as f64 / (n - 1) as f64,
                            4.0 * PI * ja as f64 / n as f64,
                            4.0 * PI * jb as f64 / n as f64,
                        );
                        let v = measured_conditional_entropy_pair_at(&rho, Qubit::C, &frame).unwrap();
                        assert!(
                            v >= pm.value - opt.tolerance,
                            "wide frame {frame:?} gave {v}, below optimum {}",
                            pm.value
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn repeated_discord_evaluations_are_bit_identical() {
        let rho = evolved(Family::W, 0.8, Coupling::Common, 0.1, 1.0);
        let opt = OptimizerSettings::default();
        let a = genuine_discord_d3(&rho, &opt).unwrap();
        let b = genuine_discord_d3(&rho, &opt).unwrap();
        assert_eq!(a.discord3.to_bits(), b.discord3.to_bits());
        assert_eq!(a.classical3.to_bits(), b.classical3.to_bits());
        assert_eq!(a.frame.theta_a.to_bits(), b.frame.theta_a.to_bits());
        assert_eq!(a.frame.theta_b.to_bits(), b.frame.theta_b.to_bits());
        assert_eq!(a.frame.phi_a.to_bits(), b.frame.phi_a.to_bits());
        assert_eq!(a.frame.phi_b.to_bits(), b.frame.phi_b.to_bits());
    }

    #[test]
    fn measures_reject_wrong_dimensions() {
        let pair = bell_pair();
        assert!(matches!(
            tripartite_negativity(&pair),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            witness_expectation(&pair, WitnessKind::GhzW2),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            measured_conditional_entropy_pair(&pair, Qubit::A, &OptimizerSettings::default()),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            measured_conditional_entropy_single(
                &ghz_pure(),
                PairSlot::First,
                &OptimizerSettings::default()
            ),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            genuine_classical_j3(&pair, &OptimizerSettings::default()),
            Err(Error::InvalidArgument(_))
        ));
    }
}
