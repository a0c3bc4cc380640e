//! C ABI over `peu-core`.
//!
//! Every fallible function returns a [`PeuStatus`] and writes its result
//! through an out-pointer. On failure the message is available from
//! [`peu_last_error_message`] on the same thread. Handles and strings
//! returned by the library must be released with the matching `*_free`
//! function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use peu_core::commands::{self, Section4Args};
use peu_core::ellsberg::{self, PayoffSchedule, Strategy, UrnComposition};
use peu_core::scenario::{Scenario, ScenarioFile};
use peu_core::sequential::{self, AgentPolicy, DecisionTree, TraceRecord};
use peu_core::social::{compare, peu_value, PeuParams};
use peu_core::{Error, Pessimism};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeuStatus {
    Ok = 0,
    /// A reproduction disagreed with an expected direction; the output is
    /// still written.
    Mismatch = 1,
    /// Malformed input: bad JSON, incoherent chances, unknown section.
    Schema = 2,
    /// A number outside its domain, such as alpha above 1.
    Domain = 3,
    NullPointer = 4,
    IndexOutOfRange = 5,
    InvalidUtf8 = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeuStrategy {
    Rr = 0,
    Aa = 1,
    Ar = 2,
    Ra = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeuAgent {
    Naive = 0,
    Sophisticated = 1,
    Global = 2,
}

/// A validated scenario.
pub struct PeuScenario {
    inner: Scenario,
}

/// The outcome of one simulated run through the two-stage tree.
pub struct PeuTrace {
    inner: TraceRecord,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: PeuStatus, msg: String) -> PeuStatus {
    set_error(msg);
    status
}

impl From<&Error> for PeuStatus {
    fn from(e: &Error) -> Self {
        if e.exit_code() == 2 {
            PeuStatus::Schema
        } else {
            PeuStatus::Domain
        }
    }
}

fn guard(f: impl FnOnce() -> Result<PeuStatus, (PeuStatus, String)>) -> PeuStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err((status, msg))) => fail(status, msg),
        Err(_) => fail(PeuStatus::Panic, "internal panic".into()),
    }
}

fn core<T>(r: peu_core::Result<T>) -> Result<T, (PeuStatus, String)> {
    r.map_err(|e| ((&e).into(), e.to_string()))
}

fn out<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, (PeuStatus, String)> {
    // SAFETY: callers pass either null or a valid, writable pointer.
    unsafe { p.as_mut() }.ok_or_else(|| (PeuStatus::NullPointer, format!("{name} is null")))
}

fn handle<'a, T>(p: *const T, name: &str) -> Result<&'a T, (PeuStatus, String)> {
    // SAFETY: callers pass either null or a live handle from this library.
    unsafe { p.as_ref() }.ok_or_else(|| (PeuStatus::NullPointer, format!("{name} is null")))
}

fn strategy(s: PeuStrategy) -> Strategy {
    match s {
        PeuStrategy::Rr => Strategy::RR,
        PeuStrategy::Aa => Strategy::AA,
        PeuStrategy::Ar => Strategy::AR,
        PeuStrategy::Ra => Strategy::RA,
    }
}

fn peu_strategy(s: Strategy) -> PeuStrategy {
    match s {
        Strategy::RR => PeuStrategy::Rr,
        Strategy::AA => PeuStrategy::Aa,
        Strategy::AR => PeuStrategy::Ar,
        Strategy::RA => PeuStrategy::Ra,
    }
}

fn into_c_string(s: String) -> Result<*mut c_char, (PeuStatus, String)> {
    CString::new(s).map(CString::into_raw).map_err(|_| (PeuStatus::InvalidUtf8, "output contains a nul byte".into()))
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into the library on this thread.
#[no_mangle]
pub extern "C" fn peu_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// The eight built-in treatments with option (4) at shortfall `cost_c`,
/// evaluated under default parameters.
#[no_mangle]
pub extern "C" fn peu_scenario_builtin(cost_c: f64, out_scenario: *mut *mut PeuScenario) -> PeuStatus {
    guard(|| {
        let slot = out(out_scenario, "out_scenario")?;
        let file = core(ScenarioFile::builtin(cost_c, &PeuParams::default()))?;
        let inner = core(file.validate())?;
        *slot = Box::into_raw(Box::new(PeuScenario { inner }));
        Ok(PeuStatus::Ok)
    })
}

/// Parses and validates a scenario from a UTF-8, nul-terminated JSON string.
///
/// # Safety
/// `json` must be null or point to a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn peu_scenario_from_json(json: *const c_char, out_scenario: *mut *mut PeuScenario) -> PeuStatus {
    guard(|| {
        let slot = out(out_scenario, "out_scenario")?;
        if json.is_null() {
            return Err((PeuStatus::NullPointer, "json is null".into()));
        }
        // SAFETY: checked non-null; caller guarantees nul termination.
        let text = unsafe { CStr::from_ptr(json) }
            .to_str()
            .map_err(|e| (PeuStatus::InvalidUtf8, e.to_string()))?;
        let inner = core(ScenarioFile::parse(text).and_then(|f| f.validate()))?;
        *slot = Box::into_raw(Box::new(PeuScenario { inner }));
        Ok(PeuStatus::Ok)
    })
}

/// # Safety
/// `scenario` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn peu_scenario_free(scenario: *mut PeuScenario) {
    if !scenario.is_null() {
        // SAFETY: the handle came from Box::into_raw in this library.
        drop(unsafe { Box::from_raw(scenario) });
    }
}

#[no_mangle]
pub extern "C" fn peu_scenario_option_count(scenario: *const PeuScenario, out_count: *mut usize) -> PeuStatus {
    guard(|| {
        let s = handle(scenario, "scenario")?;
        *out(out_count, "out_count")? = s.inner.options.len();
        Ok(PeuStatus::Ok)
    })
}

/// Social value of option `index` under the scenario's parameters.
#[no_mangle]
pub extern "C" fn peu_scenario_option_value(scenario: *const PeuScenario, index: usize, out_value: *mut f64) -> PeuStatus {
    guard(|| {
        let s = handle(scenario, "scenario")?;
        let slot = out(out_value, "out_value")?;
        let option = s.inner.options.get(index).ok_or_else(|| {
            (PeuStatus::IndexOutOfRange, format!("option {index} out of range for {} options", s.inner.options.len()))
        })?;
        *slot = peu_value(option, &s.inner.params);
        Ok(PeuStatus::Ok)
    })
}

/// Value of option `left` minus value of option `right`. Zero within 1e-9
/// means indifference.
#[no_mangle]
pub extern "C" fn peu_scenario_compare(
    scenario: *const PeuScenario,
    left: usize,
    right: usize,
    out_margin: *mut f64,
) -> PeuStatus {
    guard(|| {
        let s = handle(scenario, "scenario")?;
        let slot = out(out_margin, "out_margin")?;
        let n = s.inner.options.len();
        let pick = |i: usize| {
            s.inner
                .options
                .get(i)
                .ok_or_else(|| (PeuStatus::IndexOutOfRange, format!("option {i} out of range for {n} options")))
        };
        let v = core(compare(pick(left)?, pick(right)?, &s.inner.params))?;
        *slot = v.margin;
        Ok(PeuStatus::Ok)
    })
}

#[no_mangle]
pub extern "C" fn peu_win_probability(plan: PeuStrategy, p: f64, out_probability: *mut f64) -> PeuStatus {
    guard(|| {
        let slot = out(out_probability, "out_probability")?;
        *slot = ellsberg::win_probability(strategy(plan), core(UrnComposition::new(p))?);
        Ok(PeuStatus::Ok)
    })
}

#[no_mangle]
pub extern "C" fn peu_expected_wellbeing(plan: PeuStrategy, p: f64, w_fail: f64, out_value: *mut f64) -> PeuStatus {
    guard(|| {
        let slot = out(out_value, "out_value")?;
        let schedule = core(PayoffSchedule::with_fail(w_fail))?;
        *slot = ellsberg::expected_wellbeing(strategy(plan), core(UrnComposition::new(p))?, &schedule);
        Ok(PeuStatus::Ok)
    })
}

/// Hurwicz value of a plan over every urn composition; `alpha` weights the
/// worst case.
#[no_mangle]
pub extern "C" fn peu_strategy_hurwicz(plan: PeuStrategy, alpha: f64, w_fail: f64, out_value: *mut f64) -> PeuStatus {
    guard(|| {
        let slot = out(out_value, "out_value")?;
        let schedule = core(PayoffSchedule::with_fail(w_fail))?;
        *slot = ellsberg::strategy_hurwicz(strategy(plan), core(Pessimism::new(alpha))?, &schedule);
        Ok(PeuStatus::Ok)
    })
}

#[no_mangle]
pub extern "C" fn peu_monte_carlo(plan: PeuStrategy, p: f64, samples: u64, seed: u64, out_estimate: *mut f64) -> PeuStatus {
    guard(|| {
        let slot = out(out_estimate, "out_estimate")?;
        *slot = core(ellsberg::monte_carlo(strategy(plan), core(UrnComposition::new(p))?, samples, seed))?;
        Ok(PeuStatus::Ok)
    })
}

#[no_mangle]
pub extern "C" fn peu_simulate(
    agent: PeuAgent,
    alpha: f64,
    w_fail: f64,
    p: f64,
    seed: u64,
    out_trace: *mut *mut PeuTrace,
) -> PeuStatus {
    guard(|| {
        let slot = out(out_trace, "out_trace")?;
        let a = core(Pessimism::new(alpha))?;
        let policy = match agent {
            PeuAgent::Naive => AgentPolicy::Naive(a),
            PeuAgent::Sophisticated => AgentPolicy::Sophisticated(a),
            PeuAgent::Global => AgentPolicy::GlobalPlanner(a),
        };
        let tree = DecisionTree::two_stage(core(PayoffSchedule::with_fail(w_fail))?);
        let inner = core(sequential::simulate(policy, &tree, core(UrnComposition::new(p))?, seed))?;
        *slot = Box::into_raw(Box::new(PeuTrace { inner }));
        Ok(PeuStatus::Ok)
    })
}

#[no_mangle]
pub extern "C" fn peu_trace_realized(trace: *const PeuTrace, out_plan: *mut PeuStrategy) -> PeuStatus {
    guard(|| {
        let t = handle(trace, "trace")?;
        *out(out_plan, "out_plan")? = peu_strategy(t.inner.realized);
        Ok(PeuStatus::Ok)
    })
}

#[no_mangle]
pub extern "C" fn peu_trace_won(trace: *const PeuTrace, out_won: *mut bool) -> PeuStatus {
    guard(|| {
        let t = handle(trace, "trace")?;
        *out(out_won, "out_won")? = t.inner.won;
        Ok(PeuStatus::Ok)
    })
}

#[no_mangle]
pub extern "C" fn peu_trace_wellbeing(trace: *const PeuTrace, out_wellbeing: *mut f64) -> PeuStatus {
    guard(|| {
        let t = handle(trace, "trace")?;
        *out(out_wellbeing, "out_wellbeing")? = t.inner.wellbeing;
        Ok(PeuStatus::Ok)
    })
}

/// # Safety
/// `trace` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn peu_trace_free(trace: *mut PeuTrace) {
    if !trace.is_null() {
        // SAFETY: the handle came from Box::into_raw in this library.
        drop(unsafe { Box::from_raw(trace) });
    }
}

/// JSON report for section 3 or 4 under default parameters. Returns
/// `PEU_STATUS_MISMATCH` with the report written when an expected direction
/// fails. Free the string with [`peu_string_free`].
#[no_mangle]
pub extern "C" fn peu_reproduce_json(section: u8, seed: u64, out_json: *mut *mut c_char) -> PeuStatus {
    guard(|| {
        let slot = out(out_json, "out_json")?;
        let params = PeuParams::default();
        let s4 = Section4Args {
            alpha: params.alpha,
            schedule: PayoffSchedule::default(),
            composition: core(UrnComposition::new(0.5))?,
            seed,
        };
        let o = core(commands::reproduce(section, &params, 1.0, 1.0, &s4))?;
        *slot = into_c_string(o.report.to_json())?;
        Ok(if o.mismatch { PeuStatus::Mismatch } else { PeuStatus::Ok })
    })
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn peu_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: the string came from CString::into_raw in this library.
        drop(unsafe { CString::from_raw(s) });
    }
}
