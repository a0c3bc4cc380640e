use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use peu_ffi::*;

fn last_error() -> String {
    let p = peu_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn builtin_scenario_values() {
    let mut s = ptr::null_mut();
    assert_eq!(peu_scenario_builtin(0.0, &mut s), PeuStatus::Ok);
    let mut n = 0;
    assert_eq!(peu_scenario_option_count(s, &mut n), PeuStatus::Ok);
    assert_eq!(n, 8);
    let expected = [107.5, 122.5, 130.0, 130.0, 104.5, 112.0, 112.75, 116.6875];
    for (i, e) in expected.iter().enumerate() {
        let mut v = 0.0;
        assert_eq!(peu_scenario_option_value(s, i, &mut v), PeuStatus::Ok);
        assert!((v - e).abs() < 1e-9, "option {}: {v}", i + 1);
    }
    let mut m = 0.0;
    assert_eq!(peu_scenario_compare(s, 3, 2, &mut m), PeuStatus::Ok);
    assert!(m.abs() < 1e-9);
    assert_eq!(peu_scenario_compare(s, 0, 9, &mut m), PeuStatus::IndexOutOfRange);
    assert!(last_error().contains('9'));
    unsafe { peu_scenario_free(s) };
}

#[test]
fn scenario_json_errors() {
    let bad = CString::new(
        r#"{"version":1,"persons":["Ann","Bea"],"options":[{"name":"reversed","treatments":[
            {"success":80,"failure":50,"chance":{"interval":[0.9,0.2]}},
            {"success":80,"failure":50,"chance":"vacuous"}]}]}"#,
    )
    .unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { peu_scenario_from_json(bad.as_ptr(), &mut s) }, PeuStatus::Schema);
    assert!(s.is_null());
    let msg = last_error();
    assert!(msg.contains("reversed") && msg.contains("0.9"), "{msg}");

    assert_eq!(unsafe { peu_scenario_from_json(ptr::null(), &mut s) }, PeuStatus::NullPointer);
    let garbage = CString::new("{").unwrap();
    assert_eq!(unsafe { peu_scenario_from_json(garbage.as_ptr(), &mut s) }, PeuStatus::Schema);
}

#[test]
fn success_clears_previous_error() {
    let mut v = 0.0;
    assert_eq!(peu_win_probability(PeuStrategy::Aa, 1.5, &mut v), PeuStatus::Domain);
    assert!(!peu_last_error_message().is_null());
    assert_eq!(peu_win_probability(PeuStrategy::Aa, 0.5, &mut v), PeuStatus::Ok);
    assert!(peu_last_error_message().is_null());
    assert_eq!(v, 0.5);
}

#[test]
fn ellsberg_functions() {
    let mut v = 0.0;
    assert_eq!(peu_expected_wellbeing(PeuStrategy::Aa, 0.5, 10.0, &mut v), PeuStatus::Ok);
    assert_eq!(v, 45.0);
    assert_eq!(peu_strategy_hurwicz(PeuStrategy::Aa, 0.8, 10.0, &mut v), PeuStatus::Ok);
    assert!((v - 52.0).abs() < 1e-12);
    assert_eq!(peu_monte_carlo(PeuStrategy::Aa, 1.0, 1000, 1, &mut v), PeuStatus::Ok);
    assert_eq!(v, 1.0);
    assert_eq!(peu_monte_carlo(PeuStrategy::Aa, 0.5, 0, 1, &mut v), PeuStatus::Domain);
    assert_eq!(peu_win_probability(PeuStrategy::Rr, 0.5, ptr::null_mut()), PeuStatus::NullPointer);
}

#[test]
fn traces() {
    for (agent, plan) in [
        (PeuAgent::Naive, PeuStrategy::Rr),
        (PeuAgent::Sophisticated, PeuStrategy::Ar),
        (PeuAgent::Global, PeuStrategy::Aa),
    ] {
        let mut t = ptr::null_mut();
        assert_eq!(peu_simulate(agent, 0.8, 10.0, 0.5, 42, &mut t), PeuStatus::Ok);
        let mut realized = PeuStrategy::Rr;
        let mut won = false;
        let mut w = 0.0;
        assert_eq!(peu_trace_realized(t, &mut realized), PeuStatus::Ok);
        assert_eq!(peu_trace_won(t, &mut won), PeuStatus::Ok);
        assert_eq!(peu_trace_wellbeing(t, &mut w), PeuStatus::Ok);
        assert_eq!(realized, plan);
        assert_eq!(w == 10.0, !won);
        unsafe { peu_trace_free(t) };
    }
    assert_eq!(peu_trace_won(ptr::null(), &mut false), PeuStatus::NullPointer);
}

#[test]
fn reproduce_reports() {
    let mut json = ptr::null_mut();
    assert_eq!(peu_reproduce_json(3, 42, &mut json), PeuStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(unsafe { CStr::from_ptr(json) }.to_str().unwrap()).unwrap();
    assert_eq!(v["tables"][1]["rows"].as_array().unwrap().len(), 12);
    unsafe { peu_string_free(json) };
    assert_eq!(peu_reproduce_json(4, 42, &mut json), PeuStatus::Ok);
    unsafe { peu_string_free(json) };
    assert_eq!(peu_reproduce_json(9, 42, &mut json), PeuStatus::Schema);
}

fn target_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(|d| d.parent()).unwrap().to_path_buf()
}

#[test]
fn header_matches_exports() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/peu.h")).unwrap();
    for name in [
        "peu_last_error_message",
        "peu_scenario_builtin",
        "peu_scenario_from_json",
        "peu_scenario_free",
        "peu_scenario_option_count",
        "peu_scenario_option_value",
        "peu_scenario_compare",
        "peu_win_probability",
        "peu_expected_wellbeing",
        "peu_strategy_hurwicz",
        "peu_monte_carlo",
        "peu_simulate",
        "peu_trace_realized",
        "peu_trace_won",
        "peu_trace_wellbeing",
        "peu_trace_free",
        "peu_reproduce_json",
        "peu_string_free",
    ] {
        assert!(header.contains(&format!("{name}(")), "{name} missing from peu.h");
    }
    assert!(header.contains("typedef struct PeuScenario PeuScenario;"));
}

#[test]
fn c_program_links_against_static_library() {
    let lib = target_dir().join("libpeu_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping: no C compiler or {} not built", lib.display());
        return;
    }
    let dir = env!("CARGO_MANIFEST_DIR");
    let exe = std::env::temp_dir().join(format!("peu_smoke_{}", std::process::id()));
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(format!("{dir}/include"))
        .arg(format!("{dir}/tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "compiling smoke.c failed");
    let out = Command::new(&exe).output().unwrap();
    let _ = std::fs::remove_file(&exe);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
