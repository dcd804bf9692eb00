//! Compiles the C demo against the generated header and, when the static
//! library is present, links and runs it. Skips if no C compiler exists.

use std::path::{Path, PathBuf};
use std::process::Command;

fn compiler() -> Option<String> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    Command::new(&cc).arg("--version").output().ok()?.status.success().then_some(cc)
}

fn target_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_demo_builds_and_runs() {
    let Some(cc) = compiler() else {
        eprintln!("no C compiler, skipping");
        return;
    };
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let include = root.join("include");
    let demo = root.join("examples/c/demo.c");
    let syntax = Command::new(&cc)
        .args(["-std=c11", "-Wall", "-Werror", "-fsyntax-only", "-D_DEFAULT_SOURCE"])
        .arg("-I")
        .arg(&include)
        .arg(&demo)
        .status()
        .unwrap();
    assert!(syntax.success(), "header does not compile");

    let lib = target_dir().join("libdlfold_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built, skipping link", lib.display());
        return;
    }
    let tmp = tempfile::tempdir().unwrap();
    let exe = tmp.path().join("demo");
    let link = Command::new(&cc)
        .args(["-std=c11", "-D_DEFAULT_SOURCE"])
        .arg("-I")
        .arg(&include)
        .arg(&demo)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl"])
        .arg("-o")
        .arg(&exe)
        .status()
        .unwrap();
    assert!(link.success(), "link failed");
    let out = Command::new(&exe).output().unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{stdout}{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout.contains("residual_ok=1 modes=80"), "{stdout}");
}
