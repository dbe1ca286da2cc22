use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use pavls_ffi::*;

const TWO_BLOCS: &str = "pavls 1 6 2
cand 0 a1
cand 1 a2
cand 2 a3
cand 3 b1
cand 4 b2
cand 5 b3
ballot 100: 0 1 2
ballot 40: 3 4 5
";

fn last_error() -> String {
    let p = pavls_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn parse(text: &str) -> *mut PavlsElection {
    let c = CString::new(text).unwrap();
    let mut e = ptr::null_mut();
    assert_eq!(
        unsafe { pavls_election_parse_native(c.as_ptr(), &mut e) },
        PavlsStatus::Ok
    );
    e
}

#[test]
fn parse_score_and_free() {
    let e = parse(TWO_BLOCS);
    unsafe {
        assert_eq!(pavls_election_candidate_count(e), 6);
        assert_eq!(pavls_election_committee_size(e), 2);
        let mut frac = ptr::null_mut();
        let mut approx = 0.0;
        let w = [0usize, 3];
        assert_eq!(
            pavls_score(e, w.as_ptr(), 2, &mut frac, &mut approx),
            PavlsStatus::Ok
        );
        assert_eq!(CStr::from_ptr(frac).to_str().unwrap(), "140/1");
        assert_eq!(approx, 140.0);
        pavls_string_free(frac);

        let mut text = ptr::null_mut();
        assert_eq!(
            pavls_election_serialize_native(e, &mut text),
            PavlsStatus::Ok
        );
        let back = parse(CStr::from_ptr(text).to_str().unwrap());
        assert_eq!(pavls_election_candidate_count(back), 6);
        pavls_string_free(text);
        pavls_election_free(back);
        pavls_election_free(e);
    }
}

#[test]
fn errors_are_reported() {
    let bad = CString::new("pavls 1 2 1\nballot x: 0\n").unwrap();
    let mut e = ptr::null_mut();
    unsafe {
        assert_eq!(
            pavls_election_parse_native(bad.as_ptr(), &mut e),
            PavlsStatus::Parse
        );
        assert!(e.is_null());
        assert!(last_error().starts_with("line 2"), "{}", last_error());
        assert_eq!(
            pavls_election_parse_native(ptr::null(), &mut e),
            PavlsStatus::NullPointer
        );

        let e = parse(TWO_BLOCS);
        let wrong_size = [0usize];
        assert_eq!(
            pavls_score(e, wrong_size.as_ptr(), 1, ptr::null_mut(), ptr::null_mut()),
            PavlsStatus::InvalidArgument
        );
        let mut t = ptr::null_mut();
        let w = [0usize, 1];
        assert_eq!(
            pavls_run(e, w.as_ptr(), 2, 7, 0, &mut t),
            PavlsStatus::InvalidArgument
        );
        assert!(last_error().contains("unknown rule"));
        assert_eq!(
            pavls_election_warmup(1, &mut ptr::null_mut()),
            PavlsStatus::InvalidArgument
        );
        pavls_election_free(e);
        pavls_election_free(ptr::null_mut());
        pavls_trace_free(ptr::null_mut());
        pavls_string_free(ptr::null_mut());
    }
}

#[test]
fn run_and_read_trace() {
    let e = parse(TWO_BLOCS);
    unsafe {
        let start = [3usize, 4];
        let mut t = ptr::null_mut();
        assert_eq!(
            pavls_run(e, start.as_ptr(), 2, PavlsRule::LexBetter as u32, 0, &mut t),
            PavlsStatus::Ok
        );
        assert!(pavls_trace_terminated(t));
        assert_eq!(pavls_trace_swap_count(t), 2);
        let (mut out, mut add) = (0, 0);
        assert_eq!(pavls_trace_swap(t, 0, &mut out, &mut add), PavlsStatus::Ok);
        assert_eq!((out, add), (3, 0));
        assert_eq!(pavls_trace_swap(t, 1, &mut out, &mut add), PavlsStatus::Ok);
        assert_eq!((out, add), (4, 1));
        assert_eq!(
            pavls_trace_swap(t, 2, &mut out, &mut add),
            PavlsStatus::OutOfRange
        );
        // 1 + 2 evaluations to find the two swaps, then 4 · 2 to confirm
        assert_eq!(pavls_trace_comparisons(t), 1 + 2 + 8);
        let mut buf = [0usize; 2];
        assert_eq!(pavls_trace_final_committee(t, ptr::null_mut(), 0), 2);
        assert_eq!(pavls_trace_final_committee(t, buf.as_mut_ptr(), 2), 2);
        assert_eq!(buf, [0, 1]);

        let mut best = ptr::null_mut();
        assert_eq!(
            pavls_run(e, start.as_ptr(), 2, PavlsRule::Best as u32, 1, &mut best),
            PavlsStatus::Ok
        );
        assert_eq!(pavls_trace_swap_count(best), 1);
        assert!(!pavls_trace_terminated(best));
        pavls_trace_free(best);
        pavls_trace_free(t);
        pavls_election_free(e);
    }
}

#[test]
fn warmup_handle() {
    let mut e = ptr::null_mut();
    unsafe {
        assert_eq!(pavls_election_warmup(4, &mut e), PavlsStatus::Ok);
        assert_eq!(pavls_election_candidate_count(e), 8);
        assert_eq!(pavls_election_committee_size(e), 4);
        pavls_election_free(e);
    }
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/pavls.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "pavls_run",
        "pavls_last_error",
        "PavlsElection",
        "PAVLS_STATUS_OK",
        "PAVLS_RULE_BEST",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("probe.c");
    std::fs::write(
        &src,
        "#include \"pavls.h\"\nint main(void) { return pavls_last_error() == 0 ? 0 : 1; }\n",
    )
    .unwrap();
    let include = header.parent().unwrap();
    for (compiler, lang) in [("cc", "c"), ("c++", "c++")] {
        match Command::new(compiler)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang, "-I"])
            .arg(include)
            .arg(&src)
            .output()
        {
            Ok(out) => assert!(
                out.status.success(),
                "{compiler}: {}",
                String::from_utf8_lossy(&out.stderr)
            ),
            Err(e) => eprintln!("skipping {compiler}: {e}"),
        }
    }
}
