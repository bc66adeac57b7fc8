//! Compiles and runs a small C program against the generated header and the
//! static library. Skipped when no C compiler is on PATH.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "gapforge.h"

int main(void) {
    char *s = NULL;
    if (gf_bell(2, 3, &s) != GF_STATUS_OK || strcmp(s, "12") != 0) return 1;
    gf_string_free(s);
    GfVectorSystem *vs = NULL;
    if (gf_vector_system_build(6, 2, 0, false, &vs) != GF_STATUS_UNSUPPORTED) return 2;
    if (vs != NULL || gf_last_error() == NULL) return 3;
    if (gf_vector_system_build(4, 2, 0, false, &vs) != GF_STATUS_OK) return 4;
    bool pass = false;
    if (gf_vector_system_verify(vs, 0, &pass, NULL) != GF_STATUS_OK || !pass) return 5;
    gf_vector_system_free(vs);
    printf("ok %s\n", gf_version());
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let Some(cc) = ["cc", "gcc", "clang"].into_iter().find(|c| Command::new(c).arg("--version").output().is_ok()) else {
        eprintln!("no C compiler; skipping");
        return;
    };
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<this test> -> target/<profile>
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libgapforge_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let tmp = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = tmp.join("abi_smoke.c");
    let exe = tmp.join("abi_smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(manifest.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
