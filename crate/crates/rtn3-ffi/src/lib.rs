//! C ABI over the `rtn3` library.
//!
//! Scenarios and evolved states are opaque heap-allocated handles; every
//! constructor has a matching `_free`, every fallible call returns an
//! [`Rtn3Status`] and writes results through out-pointers only on success.
//! The header `include/rtn3.h` is regenerated by the build script.

use std::os::raw::c_char;

use rtn3::correlations::{
    genuine_discord_d3, tripartite_negativity, witness_expectation, OptimizerSettings,
    WitnessKind,
};
use rtn3::evolution::{
    evolve_analytic, evolve_monte_carlo, Coupling, EnsembleSpec, Family, ScenarioConfig,
};
use rtn3::matrix::DensityMatrix;
use rtn3::noise::{dephasing_factor, NoiseParams};
use rtn3::Error;

/// Result of every fallible call. Values match the CLI exit codes where a
/// counterpart exists.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rtn3Status {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Io = 3,
    Internal = 4,
}

/// GHZ initial-state family, `(|000⟩+|111⟩)/√2` mixed with white noise.
pub const RTN3_FAMILY_GHZ: u32 = 0;
/// W initial-state family, `(|001⟩+|010⟩+|100⟩)/√3` mixed with white noise.
pub const RTN3_FAMILY_W: u32 = 1;
/// Each qubit couples to its own independent telegraph fluctuator.
pub const RTN3_COUPLING_LOCAL: u32 = 0;
/// All three qubits couple to one shared telegraph fluctuator.
pub const RTN3_COUPLING_COMMON: u32 = 1;
/// GHZ-class witness `W_W2 = I/2 − |GHZ⟩⟨GHZ|`.
pub const RTN3_WITNESS_GHZ_W2: u32 = 0;
/// W-class witness `W_W1 = 2I/3 − |W⟩⟨W|`.
pub const RTN3_WITNESS_W_W1: u32 = 1;

/// Opaque handle over a scenario (family, purity, coupling, noise rates).
pub struct Rtn3Scenario {
    inner: ScenarioConfig,
}

/// Opaque handle over an evolved three-qubit density matrix.
pub struct Rtn3State {
    inner: DensityMatrix,
}

fn status_of(e: &Error) -> Rtn3Status {
    match e.exit_code() {
        2 => Rtn3Status::InvalidArgument,
        3 => Rtn3Status::Io,
        _ => Rtn3Status::Internal,
    }
}

/// Writes `value` through `out`, or reports the null pointer.
unsafe fn write_out<T>(out: *mut T, value: T) -> Rtn3Status {
    if out.is_null() {
        return Rtn3Status::NullPointer;
    }
    unsafe { out.write(value) };
    Rtn3Status::Ok
}

fn family_of(raw: u32) -> Option<Family> {
    match raw {
        RTN3_FAMILY_GHZ => Some(Family::Ghz),
        RTN3_FAMILY_W => Some(Family::W),
        _ => None,
    }
}

fn coupling_of(raw: u32) -> Option<Coupling> {
    match raw {
        RTN3_COUPLING_LOCAL => Some(Coupling::Local),
        RTN3_COUPLING_COMMON => Some(Coupling::Common),
        _ => None,
    }
}

/// Create a scenario handle.
///
/// `family` is one of the `RTN3_FAMILY_*` constants, `coupling` one of
/// `RTN3_COUPLING_*`; `purity` is the Werner mixing weight in [0, 1];
/// `gamma` and `nu` are the telegraph switching rate and qubit coupling
/// strength (both positive). On success `*out` owns the handle; release it
/// with `rtn3_scenario_free`.
///
/// # Safety
/// `out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn rtn3_scenario_new(
    family: u32,
    coupling: u32,
    purity: f64,
    gamma: f64,
    nu: f64,
    out: *mut *mut Rtn3Scenario,
) -> Rtn3Status {
    let (Some(family), Some(coupling)) = (family_of(family), coupling_of(coupling)) else {
        return Rtn3Status::InvalidArgument;
    };
    let noise = match NoiseParams::new(gamma, nu) {
        Ok(n) => n,
        Err(e) => return status_of(&e),
    };
    match ScenarioConfig::new(family, purity, coupling, noise) {
        Ok(inner) => unsafe {
            write_out(out, Box::into_raw(Box::new(Rtn3Scenario { inner })))
        },
        Err(e) => status_of(&e),
    }
}

/// Release a scenario handle; a null pointer is a no-op.
///
/// # Safety
/// `scenario` must be null or a pointer obtained from `rtn3_scenario_new`
/// that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn rtn3_scenario_free(scenario: *mut Rtn3Scenario) {
    if !scenario.is_null() {
        drop(unsafe { Box::from_raw(scenario) });
    }
}

/// Evolve the scenario's initial state for time `t ≥ 0` (absolute units,
/// 1/ν) using the exact noise-averaged propagator. On success `*out` owns a
/// state handle; release it with `rtn3_state_free`.
///
/// # Safety
/// `scenario` must be a live scenario handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn rtn3_evolve_analytic(
    scenario: *const Rtn3Scenario,
    t: f64,
    out: *mut *mut Rtn3State,
) -> Rtn3Status {
    let Some(scenario) = (unsafe { scenario.as_ref() }) else {
        return Rtn3Status::NullPointer;
    };
    match evolve_analytic(&scenario.inner, t) {
        Ok(inner) => unsafe { write_out(out, Box::into_raw(Box::new(Rtn3State { inner }))) },
        Err(e) => status_of(&e),
    }
}

/// Evolve by averaging `n_trajectories` sampled telegraph trajectories with
/// the given RNG seed. Deterministic for a fixed (seed, n_trajectories).
///
/// # Safety
/// `scenario` must be a live scenario handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn rtn3_evolve_monte_carlo(
    scenario: *const Rtn3Scenario,
    t: f64,
    n_trajectories: usize,
    seed: u64,
    out: *mut *mut Rtn3State,
) -> Rtn3Status {
    let Some(scenario) = (unsafe { scenario.as_ref() }) else {
        return Rtn3Status::NullPointer;
    };
    let ensemble = EnsembleSpec {
        n_trajectories,
        seed,
    };
    match evolve_monte_carlo(&scenario.inner, t, &ensemble) {
        Ok(inner) => unsafe { write_out(out, Box::into_raw(Box::new(Rtn3State { inner }))) },
        Err(e) => status_of(&e),
    }
}

/// Release a state handle; a null pointer is a no-op.
///
/// # Safety
/// `state` must be null or a pointer obtained from an evolve call that has
/// not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn rtn3_state_free(state: *mut Rtn3State) {
    if !state.is_null() {
        drop(unsafe { Box::from_raw(state) });
    }
}

/// Copy the 8×8 density matrix into caller buffers, row-major: entry (i, j)
/// lands at index 8·i + j. Each buffer must hold 64 doubles.
///
/// # Safety
/// `state` must be a live state handle; `re` and `im` must be valid for
/// writing 64 doubles each.
#[no_mangle]
pub unsafe extern "C" fn rtn3_state_elements(
    state: *const Rtn3State,
    re: *mut f64,
    im: *mut f64,
) -> Rtn3Status {
    let Some(state) = (unsafe { state.as_ref() }) else {
        return Rtn3Status::NullPointer;
    };
    if re.is_null() || im.is_null() {
        return Rtn3Status::NullPointer;
    }
    let m = state.inner.matrix();
    for i in 0..8 {
        for j in 0..8 {
            let z = m[(i, j)];
            unsafe {
                re.add(8 * i + j).write(z.re);
                im.add(8 * i + j).write(z.im);
            }
        }
    }
    Rtn3Status::Ok
}

/// Tripartite negativity: geometric mean of the three one-vs-two bipartite
/// negativities.
///
/// # Safety
/// `state` must be a live state handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn rtn3_negativity3(state: *const Rtn3State, out: *mut f64) -> Rtn3Status {
    let Some(state) = (unsafe { state.as_ref() }) else {
        return Rtn3Status::NullPointer;
    };
    match tripartite_negativity(&state.inner) {
        Ok(v) => unsafe { write_out(out, v) },
        Err(e) => status_of(&e),
    }
}

/// Expectation value of an entanglement witness (`RTN3_WITNESS_*`); negative
/// values certify entanglement of the matching class.
///
/// # Safety
/// `state` must be a live state handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn rtn3_witness_expectation(
    state: *const Rtn3State,
    witness: u32,
    out: *mut f64,
) -> Rtn3Status {
    let Some(state) = (unsafe { state.as_ref() }) else {
        return Rtn3Status::NullPointer;
    };
    let kind = match witness {
        RTN3_WITNESS_GHZ_W2 => WitnessKind::GhzW2,
        RTN3_WITNESS_W_W1 => WitnessKind::WW1,
        _ => return Rtn3Status::InvalidArgument,
    };
    match witness_expectation(&state.inner, kind) {
        Ok(v) => unsafe { write_out(out, v) },
        Err(e) => status_of(&e),
    }
}

/// Genuine tripartite total, classical and quantum correlations, in bits.
/// `grid_points_per_angle` controls the measurement-frame search; pass 0 for
/// the default (8). Any of the out-pointers may be null to skip that value.
///
/// # Safety
/// `state` must be a live state handle; non-null out-pointers writable.
#[no_mangle]
pub unsafe extern "C" fn rtn3_discord3(
    state: *const Rtn3State,
    grid_points_per_angle: usize,
    out_total: *mut f64,
    out_classical: *mut f64,
    out_discord: *mut f64,
) -> Rtn3Status {
    let Some(state) = (unsafe { state.as_ref() }) else {
        return Rtn3Status::NullPointer;
    };
    let mut settings = OptimizerSettings::default();
    if grid_points_per_angle > 0 {
        settings = match OptimizerSettings::new(
            grid_points_per_angle,
            settings.refine_starts,
            settings.tolerance,
            settings.max_refine_iterations,
        ) {
            Ok(s) => s,
            Err(e) => return status_of(&e),
        };
    }
    match genuine_discord_d3(&state.inner, &settings) {
        Ok(report) => {
            for (ptr, value) in [
                (out_total, report.total3),
                (out_classical, report.classical3),
                (out_discord, report.discord3),
            ] {
                if !ptr.is_null() {
                    unsafe { ptr.write(value) };
                }
            }
            Rtn3Status::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Noise-averaged dephasing factor ⟨cos nφ(t)⟩ for harmonic `n` in 1..=6 of
/// a telegraph process with switching rate `gamma` and coupling `nu`.
///
/// # Safety
/// `out` must be null or valid for writing one double.
#[no_mangle]
pub unsafe extern "C" fn rtn3_dephasing_factor(
    n: u32,
    gamma: f64,
    nu: f64,
    t: f64,
    out: *mut f64,
) -> Rtn3Status {
    let params = match NoiseParams::new(gamma, nu) {
        Ok(p) => p,
        Err(e) => return status_of(&e),
    };
    match dephasing_factor(n, &params, t) {
        Ok(v) => unsafe { write_out(out, v) },
        Err(e) => status_of(&e),
    }
}

/// Static description of a status code (never null).
#[no_mangle]
pub extern "C" fn rtn3_status_message(status: u32) -> *const c_char {
    let msg: &'static [u8] = match status {
        0 => b"ok\0",
        1 => b"null pointer argument\0",
        2 => b"invalid argument\0",
        3 => b"I/O error\0",
        4 => b"internal numerical error\0",
        _ => b"unknown status code\0",
    };
    msg.as_ptr() as *const c_char
}
