//! Exercises the C surface twice: direct unsafe calls from Rust, and a
//! real C program compiled against include/exposk.h and the staticlib.

use exposk_ffi::*;
use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

fn c(text: &str) -> CString {
    CString::new(text).unwrap()
}

/// Takes ownership of a string the library just handed out.
unsafe fn grab(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    exposk_string_free(p);
    s
}

unsafe fn last_error() -> String {
    grab(exposk_last_error())
}

#[test]
fn lifecycle_and_answers() {
    unsafe {
        let mut eq: *mut ExposkEquation = ptr::null_mut();
        let text = c("2^x - 3^y = 0");
        assert_eq!(exposk_parse(text.as_ptr(), &mut eq), ExposkStatus::Ok);

        let mut formatted: *mut c_char = ptr::null_mut();
        assert_eq!(exposk_format(eq, &mut formatted), ExposkStatus::Ok);
        assert_eq!(grab(formatted), "2^x - 3^y = 0");

        // 2 and 3 share the residue 2 mod 5 (at x = 1, y = 3)
        let mut solvable = false;
        let mut cert: *mut c_char = ptr::null_mut();
        assert_eq!(
            exposk_check_mod(eq, 5, &mut solvable, &mut cert),
            ExposkStatus::Ok
        );
        assert!(solvable);
        let doc: serde_json::Value = serde_json::from_str(&grab(cert)).unwrap();
        assert_eq!(doc["status"], "solvable");
        assert_eq!(doc["modulus"], 5);

        // powers of 2 and of 3 differ mod 2; certificate is optional
        assert_eq!(
            exposk_check_mod(eq, 2, &mut solvable, ptr::null_mut()),
            ExposkStatus::Ok
        );
        assert!(!solvable);

        let mut witness = 0u64;
        assert_eq!(
            exposk_find_modulus(eq, 0, 0, &mut witness, ptr::null_mut()),
            ExposkStatus::Ok
        );
        assert_eq!(witness, 2);
        exposk_equation_free(eq);
    }
}

#[test]
fn family_search_and_classify() {
    unsafe {
        let mut eq: *mut ExposkEquation = ptr::null_mut();
        let pattern = c("---");
        assert_eq!(exposk_family(2, pattern.as_ptr(), &mut eq), ExposkStatus::Ok);

        let mut solutions: *mut c_char = ptr::null_mut();
        assert_eq!(
            exposk_search(eq, 1_000_000_000, &mut solutions),
            ExposkStatus::Ok
        );
        let doc: serde_json::Value = serde_json::from_str(&grab(solutions)).unwrap();
        assert_eq!(doc["variables"], serde_json::json!(["x", "y", "z", "w"]));
        assert_eq!(doc["solutions"], serde_json::json!([[5, 1, 1, 2]]));
        exposk_equation_free(eq);

        let mut verdict: *mut c_char = ptr::null_mut();
        assert_eq!(
            exposk_classify(2, pattern.as_ptr(), &mut verdict),
            ExposkStatus::Ok
        );
        let doc: serde_json::Value = serde_json::from_str(&grab(verdict)).unwrap();
        assert_eq!(doc["status"], "known-solutions");
        assert_eq!(doc["complete"], true);
        assert_eq!(doc["citation"], "all-minus-classification");
    }
}

#[test]
fn errors_set_messages_and_statuses() {
    unsafe {
        let mut eq: *mut ExposkEquation = ptr::null_mut();

        let bad = c("3^x");
        assert_eq!(
            exposk_parse(bad.as_ptr(), &mut eq),
            ExposkStatus::ParseError
        );
        assert!(last_error().contains("syntax"));

        assert_eq!(
            exposk_parse(ptr::null(), &mut eq),
            ExposkStatus::NullArgument
        );
        let text = c("2^x - 3^y = 0");
        assert_eq!(
            exposk_parse(text.as_ptr(), ptr::null_mut()),
            ExposkStatus::NullArgument
        );

        // invalid UTF-8 in an argument string
        let junk: [c_char; 2] = [-1i8 as c_char, 0];
        assert_eq!(
            exposk_parse(junk.as_ptr(), &mut eq),
            ExposkStatus::InvalidArgument
        );
        assert!(last_error().contains("UTF-8"));

        let mut verdict: *mut c_char = ptr::null_mut();
        let all_plus = c("+++");
        assert_eq!(
            exposk_classify(5, all_plus.as_ptr(), &mut verdict),
            ExposkStatus::InvalidArgument
        );
        let one = c("---");
        assert_eq!(
            exposk_classify(1, one.as_ptr(), &mut verdict),
            ExposkStatus::InvalidArgument
        );
        assert!(last_error().contains("n >= 2"));

        assert_eq!(exposk_parse(text.as_ptr(), &mut eq), ExposkStatus::Ok);
        let mut solvable = false;
        assert_eq!(
            exposk_check_mod(eq, 1, &mut solvable, ptr::null_mut()),
            ExposkStatus::InvalidArgument
        );
        let mut solutions: *mut c_char = ptr::null_mut();
        assert_eq!(
            exposk_search(eq, 1, &mut solutions),
            ExposkStatus::InvalidArgument
        );

        // every base admits x = y: the ladder cannot prove anything
        let mut sq: *mut ExposkEquation = ptr::null_mut();
        let same = c("2^a - 2^b = 0");
        assert_eq!(exposk_parse(same.as_ptr(), &mut sq), ExposkStatus::Ok);
        let mut witness = 0u64;
        assert_eq!(
            exposk_find_modulus(sq, 100, 10_000, &mut witness, ptr::null_mut()),
            ExposkStatus::NoWitness
        );
        assert!(last_error().contains("admit solutions"));
        exposk_equation_free(sq);
        exposk_equation_free(eq);

        // frees tolerate NULL
        exposk_equation_free(ptr::null_mut());
        exposk_string_free(ptr::null_mut());
    }
}

const C_CLIENT: &str = r#"
#include "exposk.h"
#include <stdio.h>
#include <string.h>

static int fail(const char *what) {
  char *err = exposk_last_error();
  fprintf(stderr, "%s: %s\n", what, err ? err : "(no message)");
  exposk_string_free(err);
  return 1;
}

int main(void) {
  if (strcmp(exposk_version(), "") == 0) return 1;
  if (exposk_schema_version() != 1) return 1;

  ExposkEquation *eq = NULL;
  if (exposk_parse("2^x - 4^y = 0", &eq) != EXPOSK_STATUS_OK)
    return fail("parse");

  char *text = NULL;
  if (exposk_format(eq, &text) != EXPOSK_STATUS_OK) return fail("format");
  if (strcmp(text, "2^x - 4^y = 0") != 0) return 2;
  exposk_string_free(text);

  bool solvable = false;
  if (exposk_check_mod(eq, 7, &solvable, NULL) != EXPOSK_STATUS_OK)
    return fail("check");
  if (!solvable) return 3;
  exposk_equation_free(eq);

  if (exposk_parse("3^p + 5^q - 7^r = 0", &eq) != EXPOSK_STATUS_OK)
    return fail("parse 2");
  uint64_t witness = 0;
  char *cert = NULL;
  if (exposk_find_modulus(eq, 0, 0, &witness, &cert) != EXPOSK_STATUS_OK)
    return fail("find-modulus");
  if (witness != 2) return 4;
  if (strstr(cert, "\"unsolvable\"") == NULL) return 5;
  exposk_string_free(cert);
  exposk_equation_free(eq);

  if (exposk_family(2, "---", &eq) != EXPOSK_STATUS_OK) return fail("family");
  char *solutions = NULL;
  if (exposk_search(eq, 1000000000ULL, &solutions) != EXPOSK_STATUS_OK)
    return fail("search");
  if (strstr(solutions, "[[5,1,1,2]]") == NULL) return 6;
  exposk_string_free(solutions);
  exposk_equation_free(eq);

  char *verdict = NULL;
  if (exposk_classify(7, "---", &verdict) != EXPOSK_STATUS_OK)
    return fail("classify");
  if (strstr(verdict, "no-solution-proved") == NULL) return 7;
  exposk_string_free(verdict);

  /* a parse failure must leave a readable message */
  ExposkEquation *bad = NULL;
  if (exposk_parse("2^", &bad) != EXPOSK_STATUS_PARSE_ERROR) return 8;
  char *err = exposk_last_error();
  if (err == NULL || strlen(err) == 0) return 9;
  exposk_string_free(err);

  puts("c client ok");
  return 0;
}
"#;

#[test]
fn c_client_compiles_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let include = manifest.join("include");
    assert!(
        include.join("exposk.h").is_file(),
        "generated header missing"
    );
    // the staticlib lands two levels above the test executable
    let exe = std::env::current_exe().unwrap();
    let lib = exe
        .parent()
        .and_then(|d| d.parent())
        .map(|d| d.join("libexposk_ffi.a"))
        .unwrap();
    assert!(lib.is_file(), "staticlib missing at {}", lib.display());

    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("client.c");
    let bin = dir.path().join("client");
    std::fs::write(&src, C_CLIENT).unwrap();

    let compile = Command::new("cc")
        .arg("-std=c11")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&bin)
        .output()
        .expect("run cc");
    assert!(
        compile.status.success(),
        "cc failed:\n{}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&bin).output().expect("run client");
    assert_eq!(
        run.status.code(),
        Some(0),
        "client exited {:?}\nstdout: {}\nstderr: {}",
        run.status.code(),
        String::from_utf8_lossy(&run.stdout),
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&run.stdout), "c client ok\n");
}
