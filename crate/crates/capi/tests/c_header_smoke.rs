//! Compiles `tests/smoke.c` against the generated header and the static
//! library, then runs it.

use std::path::PathBuf;
use std::process::Command;

#[test]
fn c_header_smoke() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let include = manifest.join("include");
    let source = manifest.join("tests/smoke.c");
    // the staticlib lands next to this test binary's deps directory
    let mut lib_dir = std::env::current_exe().unwrap();
    lib_dir.pop();
    if lib_dir.ends_with("deps") {
        lib_dir.pop();
    }
    let staticlib = lib_dir.join("libbunched_capi.a");
    if !staticlib.exists() {
        // `cargo test` links rlibs only; produce the staticlib artifact
        let build = Command::new(env!("CARGO"))
            .args(["build", "-p", "bunched-capi"])
            .current_dir(&manifest)
            .output()
            .expect("cargo must be runnable");
        assert!(
            build.status.success(),
            "building the static library failed:\n{}",
            String::from_utf8_lossy(&build.stderr)
        );
    }
    assert!(
        staticlib.exists(),
        "static library missing at {}",
        staticlib.display()
    );

    let out_dir = std::env::temp_dir().join(format!("bunched-smoke-{}", std::process::id()));
    std::fs::create_dir_all(&out_dir).unwrap();
    let exe = out_dir.join("smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let compile = Command::new(&cc)
        .arg(&source)
        .arg("-I")
        .arg(&include)
        .arg(staticlib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&exe)
        .output()
        .expect("a C compiler must be available");
    assert!(
        compile.status.success(),
        "compilation failed:\n{}",
        String::from_utf8_lossy(&compile.stderr)
    );
    let run = Command::new(&exe).output().unwrap();
    assert!(
        run.status.success(),
        "smoke binary failed:\n{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(String::from_utf8_lossy(&run.stdout).contains("c smoke ok"));
    let _ = std::fs::remove_dir_all(&out_dir);
}
