//! End-to-end checks of the batch interface: reproducible CSV bytes, header
//! rows, config handling and exit codes.

use std::path::Path;
use std::process::Command;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hypernum"))
}

fn tempdir(tag: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("hypernum-cli-io-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    std::fs::read(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn sweep_output_is_byte_identical_across_runs_and_thread_counts() {
    let a = tempdir("sweep-a");
    let b = tempdir("sweep-b");
    let c = tempdir("sweep-c");
    assert!(binary().args(["sweep", "--out"]).arg(&a).output().unwrap().status.success());
    assert!(binary().args(["sweep", "--out"]).arg(&b).output().unwrap().status.success());
    assert!(binary()
        .args(["sweep", "--out"])
        .arg(&c)
        .env("HYPERNUM_THREADS", "1")
        .output()
        .unwrap()
        .status
        .success());
    for name in ["fvu_stress.csv", "fvu_tangent.csv"] {
        assert_eq!(read(&a, name), read(&b, name), "{name} differs across runs");
        assert_eq!(read(&a, name), read(&c, name), "{name} differs across thread counts");
    }

    let stress = String::from_utf8(read(&a, "fvu_stress.csv")).unwrap();
    assert!(stress.starts_with("path,eps_s,fvu\n"));
    // 3 paths x 16 decades plus the header.
    assert_eq!(stress.lines().count(), 1 + 48);
    // 17 significant digits in scientific notation.
    assert!(stress.lines().nth(1).unwrap().contains("e-"));
}

#[test]
fn element_emits_per_program_tables() {
    let dir = tempdir("element");
    let out = binary()
        .args(["element", "--program", "shear", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    let csv = String::from_utf8(read(&dir, "element_simple-shear.csv")).unwrap();
    assert!(csv.starts_with(
        "increment,lambda_prescribed,sigma_primary_numerical,sigma_primary_analytic,iterations_numerical,iterations_analytic,rel_err\n"
    ));
    assert_eq!(csv.lines().count(), 1 + 20);
}

#[test]
fn inflate_reads_geometry_and_material_files() {
    let dir = tempdir("inflate");
    let material = dir.join("artery.txt");
    std::fs::write(
        &material,
        "material = holzapfel\nc10 = 2.212e4\nd = 1e-6\nk1 = 206\nk2 = 1.465\nfiber_angle_deg = 39.76\n",
    )
    .unwrap();
    let geometry = dir.join("wall.txt");
    std::fs::write(&geometry, "inner_radius = 0.4\nouter_radius = 0.5\n").unwrap();
    let out = binary()
        .args(["inflate", "--pressure", "12.5"])
        .arg("--material")
        .arg(&material)
        .arg("--geometry")
        .arg(&geometry)
        .arg("--out")
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let inflation = String::from_utf8(read(&dir, "inflation.csv")).unwrap();
    assert!(inflation.starts_with("pressure_kPa,inner_radius_mm,outer_radius_mm\n"));
    assert_eq!(inflation.lines().count(), 1 + 5);
    let transmural = String::from_utf8(read(&dir, "transmural.csv")).unwrap();
    assert_eq!(transmural.lines().count(), 1 + 5 * 64);
}

#[test]
fn config_errors_exit_with_code_two() {
    let dir = tempdir("badcfg");
    let material = dir.join("bad.txt");
    std::fs::write(&material, "material = fung\n").unwrap();
    let out = binary()
        .args(["element", "--material"])
        .arg(&material)
        .arg("--out")
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // A material without analytic references cannot drive the sweep.
    let holz = dir.join("holz.txt");
    std::fs::write(
        &holz,
        "material = holzapfel\nc10 = 2.212e4\nd = 1e-6\nk1 = 206\nk2 = 1.465\nfiber_angle_deg = 39.76\n",
    )
    .unwrap();
    let out = binary()
        .args(["sweep", "--material"])
        .arg(&holz)
        .arg("--out")
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn perturbation_overrides_are_validated() {
    let dir = tempdir("eps");
    let out = binary()
        .args(["element", "--eps-s", "2.0", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
