use std::ffi::CStr;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use chainpair_ffi::*;

fn chain(coords: &[f64], dim: usize, weights: Option<&[f64]>) -> *mut CpChain {
    let mut out = ptr::null_mut();
    let w = weights.map_or(ptr::null(), <[f64]>::as_ptr);
    let status = unsafe { cp_chain_new(coords.as_ptr(), coords.len() / dim, dim, w, &mut out) };
    assert_eq!(status, CpStatus::Ok);
    out
}

fn last_error() -> String {
    let p = cp_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn params(d1: f64, d2: f64, d3: f64) -> CpParams {
    CpParams {
        delta1: d1,
        delta2: d2,
        delta3: d3,
        endpoint_mode: CpEndpointMode::FreeDogs,
        r_cap: 0,
        timeout_seconds: 0.0,
    }
}

const A: [f64; 14] = [0.0, 0.0, 1.0, 0.2, 2.0, -0.1, 3.0, 0.3, 4.0, 0.0, 5.0, 0.1, 6.0, 0.0];
const B: [f64; 10] = [0.0, 0.5, 1.5, 0.4, 3.0, 0.6, 4.5, 0.2, 6.0, 0.4];

fn library_pair() -> (chainpair::Chain, chainpair::Chain) {
    let rows = |c: &[f64]| chainpair::Chain::from_coords(&c.chunks(2).collect::<Vec<_>>()).unwrap();
    (rows(&A), rows(&B))
}

#[test]
fn frechet_matches_core() {
    let (a, b) = (chain(&A, 2, None), chain(&B, 2, None));
    let (la, lb) = library_pair();
    let mut value = 0.0;
    assert_eq!(unsafe { cp_discrete_frechet(a, b, &mut value) }, CpStatus::Ok);
    assert_eq!(value, chainpair::discrete_frechet(&la, &lb).unwrap().value);
    assert!(cp_last_error_message().is_null());
    let mut yes = false;
    assert_eq!(unsafe { cp_frechet_decision(a, b, value, &mut yes) }, CpStatus::Ok);
    assert!(yes);
    assert_eq!(unsafe { cp_frechet_decision(a, b, value * 0.99, &mut yes) }, CpStatus::Ok);
    assert!(!yes);
    assert_eq!(unsafe { cp_chain_len(a) }, 7);
    unsafe {
        cp_chain_free(a);
        cp_chain_free(b);
    }
}

#[test]
fn cps3f_with_indices() {
    let (a, b) = (chain(&A, 2, None), chain(&B, 2, None));
    let p = params(1.5, 1.6, 0.8);
    let mut sol = ptr::null_mut();
    assert_eq!(unsafe { cp_cps3f_min(a, b, &p, true, &mut sol) }, CpStatus::Ok);
    let (la, lb) = library_pair();
    let expected = chainpair::cps3f_min_dp(&la, &lb, &chainpair::CpsParams::new(1.5, 1.6, 0.8), true).unwrap();
    unsafe {
        assert_eq!(cp_solution_k_star(sol), expected.k_star);
        assert!(cp_solution_peak_cells(sol) > 0);
        let n = cp_solution_a_indices(sol, ptr::null_mut(), 0);
        let mut buf = vec![usize::MAX; n];
        assert_eq!(cp_solution_a_indices(sol, buf.as_mut_ptr(), n), n);
        assert_eq!(Some(buf), expected.a_indices);
        let mut short = [0usize; 1];
        let m = cp_solution_b_indices(sol, short.as_mut_ptr(), 1);
        assert_eq!(m, expected.b_indices.as_ref().unwrap().len());
        assert_eq!(short[0], expected.b_indices.unwrap()[0]);
        cp_solution_free(sol);
    }

    let mut yes = false;
    unsafe {
        assert_eq!(cp_cps3f_decision(a, b, &p, expected.k_star, &mut yes), CpStatus::Ok);
        assert!(yes);
        assert_eq!(cp_cps3f_decision(a, b, &p, expected.k_star - 1, &mut yes), CpStatus::Ok);
        assert!(!yes);
        cp_chain_free(a);
        cp_chain_free(b);
    }
}

#[test]
fn status_codes() {
    let (a, b) = (chain(&A, 2, None), chain(&B, 2, None));
    let mut sol = ptr::null_mut();
    unsafe {
        let anchored = CpParams { endpoint_mode: CpEndpointMode::Anchored, ..params(0.0, 0.0, 0.1) };
        assert_eq!(cp_cps3f_min(a, b, &anchored, false, &mut sol), CpStatus::NoSolution);
        assert!(last_error().contains("no feasible"));
        assert!(sol.is_null());

        let capped = CpParams { r_cap: 2, ..params(1.5, 1.6, 0.8) };
        assert_eq!(cp_cps3f_min(a, b, &capped, false, &mut sol), CpStatus::RCapInconclusive);
        assert_eq!(cp_cps3f_min(a, b, &params(-1.0, 1.0, 1.0), false, &mut sol), CpStatus::InvalidArgument);
        assert_eq!(cp_cps3f_min(a, b, ptr::null(), false, &mut sol), CpStatus::NullPointer);
        assert_eq!(cp_cps3f_min(ptr::null(), b, &params(1.0, 1.0, 1.0), false, &mut sol), CpStatus::NullPointer);
        assert_eq!(cp_discrete_frechet(a, b, ptr::null_mut()), CpStatus::NullPointer);

        let c3 = chain(&[0.0, 0.0, 0.0], 3, None);
        let mut v = 0.0;
        assert_eq!(cp_discrete_frechet(a, c3, &mut v), CpStatus::Geometry);
        assert!(last_error().contains("dimension"));

        let mut bad = ptr::null_mut();
        assert_eq!(cp_chain_new(A.as_ptr(), 7, 4, ptr::null(), &mut bad), CpStatus::Geometry);
        assert_eq!(cp_chain_new(A.as_ptr(), 0, 2, ptr::null(), &mut bad), CpStatus::Geometry);
        let nan = [0.0, f64::NAN];
        assert_eq!(cp_chain_new(nan.as_ptr(), 1, 2, ptr::null(), &mut bad), CpStatus::Geometry);
        assert_eq!(cp_chain_new(ptr::null(), 1, 2, ptr::null(), &mut bad), CpStatus::NullPointer);
        assert!(bad.is_null());

        cp_chain_free(c3);
        cp_chain_free(a);
        cp_chain_free(b);
        cp_chain_free(ptr::null_mut());
        cp_solution_free(ptr::null_mut());
        assert_eq!(cp_solution_k_star(ptr::null()), 0);
        assert!(cp_solution_weight(ptr::null()).is_nan());
    }
}

#[test]
fn weighted_and_one_sided() {
    let wa = [2.0, 1.0, 1.0, 1.0, 1.0, 1.0, 3.0];
    let (a, b) = (chain(&A, 2, Some(&wa)), chain(&B, 2, None));
    let p = CpParams { endpoint_mode: CpEndpointMode::Anchored, ..params(1.5, 1.6, 0.8) };
    let (la, lb) = library_pair();
    let lp = chainpair::CpsParams::new(1.5, 1.6, 0.8).with_mode(chainpair::EndpointMode::Anchored);
    let expected = chainpair::wcps3f_min(&la.clone().weighted(wa.to_vec()).unwrap(), &lb, &lp, true).unwrap();
    unsafe {
        let mut sol = ptr::null_mut();
        assert_eq!(cp_wcps3f_min(a, b, &p, true, &mut sol), CpStatus::Ok);
        assert_eq!(cp_solution_weight(sol), expected.k_star_weight);
        let n = cp_solution_a_indices(sol, ptr::null_mut(), 0);
        assert_eq!(n, expected.a_indices.unwrap().len());
        cp_solution_free(sol);

        let mut yes = false;
        assert_eq!(cp_wcps3f_decision(a, b, &p, expected.k_star_weight, &mut yes), CpStatus::Ok);
        assert!(yes);
        assert_eq!(cp_wcps3f_decision(a, b, &p, 0.0, &mut yes), CpStatus::InvalidArgument);

        let one = chainpair::one_sided_cps3f_min(&la, &lb, 1.5, 0.8).unwrap();
        assert_eq!(cp_one_sided_min(a, b, 1.5, 0.8, &mut sol), CpStatus::Ok);
        assert_eq!(cp_solution_k_star(sol), one.len);
        assert_eq!(cp_solution_b_indices(sol, ptr::null_mut(), 0), 0);
        cp_solution_free(sol);

        let min_k = chainpair::simplify_min_k(&la, &lb, 1.0).unwrap();
        assert_eq!(cp_simplify_min_k(a, b, 1.0, &mut sol), CpStatus::Ok);
        let mut buf = vec![0usize; min_k.len];
        cp_solution_a_indices(sol, buf.as_mut_ptr(), buf.len());
        assert_eq!(buf, min_k.indices);
        cp_solution_free(sol);

        let (delta, s) = chainpair::simplify_min_delta(&la, &lb, 2).unwrap();
        let mut got = 0.0;
        assert_eq!(cp_simplify_min_delta(a, b, 2, &mut got, &mut sol), CpStatus::Ok);
        assert_eq!(got, delta);
        assert_eq!(cp_solution_k_star(sol), s.len);
        cp_solution_free(sol);

        cp_chain_free(a);
        cp_chain_free(b);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(cp_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include")
}

fn c_compiler() -> Option<String> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    Command::new(&cc).arg("--version").output().ok().filter(|o| o.status.success()).map(|_| cc)
}

#[test]
fn header_compiles_as_c_and_cpp() {
    assert!(header().join("chainpair.h").exists());
    let Some(cc) = c_compiler() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("probe.c");
    std::fs::write(&src, "#include \"chainpair.h\"\nint main(void) { return CP_STATUS_OK; }\n").unwrap();
    let out = Command::new(&cc)
        .arg("-fsyntax-only")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(header())
        .arg(&src)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out =
        Command::new(&cc).args(["-x", "c++", "-fsyntax-only"]).arg("-I").arg(header()).arg(&src).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

/// Builds and runs a C program against the static library, when both a C
/// compiler and the archive are available.
#[test]
fn c_program_links_and_runs() {
    let Some(cc) = c_compiler() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let exe = std::env::current_exe().unwrap();
    let archive = exe.parent().and_then(Path::parent).map(|d| d.join("libchainpair_ffi.a"));
    let Some(archive) = archive.filter(|p| p.exists()) else {
        eprintln!("static library not found next to the test binary; skipping");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("demo.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include "chainpair.h"

int main(void) {
    const double a[] = {0, 0, 1, 0.2, 2, -0.1, 3, 0.3, 4, 0, 5, 0.1, 6, 0};
    const double b[] = {0, 0.5, 1.5, 0.4, 3, 0.6, 4.5, 0.2, 6, 0.4};
    CpChain *ca = NULL, *cb = NULL;
    if (cp_chain_new(a, 7, 2, NULL, &ca) != CP_STATUS_OK) return 10;
    if (cp_chain_new(b, 5, 2, NULL, &cb) != CP_STATUS_OK) return 11;
    CpParams p = {1.5, 1.6, 0.8, CP_ENDPOINT_MODE_FREE_DOGS, 0, 0.0};
    CpSolution *sol = NULL;
    if (cp_cps3f_min(ca, cb, &p, true, &sol) != CP_STATUS_OK) return 12;
    size_t idx[16];
    size_t n = cp_solution_a_indices(sol, idx, 16);
    printf("k_star %zu a_len %zu first %zu\n", cp_solution_k_star(sol), n, idx[0]);
    p.delta1 = -1;
    CpSolution *bad = NULL;
    CpStatus s = cp_cps3f_min(ca, cb, &p, false, &bad);
    printf("status %d %s\n", (int)s, cp_last_error_message());
    cp_solution_free(sol);
    cp_chain_free(ca);
    cp_chain_free(cb);
    return 0;
}
"#,
    )
    .unwrap();
    let bin = dir.path().join("demo");
    let out = Command::new(&cc)
        .arg("-I")
        .arg(header())
        .arg(&src)
        .arg(&archive)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success());
    let text = String::from_utf8(run.stdout).unwrap();
    assert!(text.contains("k_star 3 a_len 3 first 1"), "{text}");
    assert!(text.contains("status 4 invalid parameter"), "{text}");
}
