//! Batch entry point for the verification experiments: perturbation sweep,
//! single-element load programs, cylinder inflation, and the built-in
//! invariant checks. Every subcommand reproduces its experiment with zero
//! arguments and writes deterministic CSV output.

mod check;

use clap::{Parser, Subcommand, ValueEnum};
use hypernum::config::{load_geometry, load_material, MaterialConfig};
use hypernum::element::{compare_modes, comparison_csv, LoadProgram, ProgramKind};
use hypernum::inflation::{inflate, inflation_csv, transmural_csv, CylinderGeometry};
use hypernum::sweep::{run_sweep, FvuGrid, GridSpec, PathKind};
use hypernum::{Error, Holzapfel, NeoHookean, PerturbationParams};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "hypernum",
    about = "Stress and consistent tangent from a strain energy function by double numerical differentiation, with verification drivers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PathArg {
    Uniaxial,
    Biaxial,
    Shear,
}

impl PathArg {
    fn kind(self) -> PathKind {
        match self {
            PathArg::Uniaxial => PathKind::UniaxialIsochoric,
            PathArg::Biaxial => PathKind::EquibiaxialIsochoric,
            PathArg::Shear => PathKind::SimpleShear,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ProgramArg {
    Compress,
    Tension,
    Biaxial,
    Shear,
}

impl ProgramArg {
    fn kind(self) -> ProgramKind {
        match self {
            ProgramArg::Compress => ProgramKind::UniaxialCompression,
            ProgramArg::Tension => ProgramKind::UniaxialTension,
            ProgramArg::Biaxial => ProgramKind::EquibiaxialTension,
            ProgramArg::Shear => ProgramKind::SimpleShear,
        }
    }
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Material file (key=value); defaults reproduce the built-in experiment.
    #[arg(long)]
    material: Option<PathBuf>,
    /// Output directory for CSV files.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Stress perturbation magnitude override.
    #[arg(long)]
    eps_s: Option<f64>,
    /// Tangent perturbation magnitude override.
    #[arg(long)]
    eps_c: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the perturbation sizes over 16 decades and score stress and
    /// tangent accuracy by fraction of variance unexplained.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Restrict the report to one load path.
        #[arg(long)]
        path: Option<PathArg>,
    },
    /// Run the single-element load programs in numerical and analytic modes
    /// and compare.
    Element {
        #[command(flatten)]
        common: CommonArgs,
        /// Run a single program instead of all four.
        #[arg(long)]
        program: Option<ProgramArg>,
    },
    /// Inflate the thick-walled cylinder and record pressure-radius and
    /// transmural stress data.
    Inflate {
        #[command(flatten)]
        common: CommonArgs,
        /// Target pressure in kPa.
        #[arg(long, default_value_t = 25.0)]
        pressure: f64,
        /// Geometry file (key=value).
        #[arg(long)]
        geometry: Option<PathBuf>,
    },
    /// Run the built-in invariant suite and report pass/fail.
    Check,
}

fn perturbations(common: &CommonArgs) -> Result<PerturbationParams, Error> {
    let defaults = PerturbationParams::default();
    PerturbationParams::new(
        common.eps_s.unwrap_or(defaults.eps_s),
        common.eps_c.unwrap_or(defaults.eps_c),
    )
    .map_err(|e| Error::Config(e.to_string()))
}

fn neo_hookean_material(common: &CommonArgs, context: &str) -> Result<NeoHookean, Error> {
    match &common.material {
        None => Ok(NeoHookean::default()),
        Some(path) => match load_material(path)? {
            MaterialConfig::NeoHookean(m) => Ok(m),
            MaterialConfig::Holzapfel(_) => Err(Error::Config(format!(
                "{context} needs a material with analytic stress and tangent; use neo-hookean"
            ))),
        },
    }
}

fn holzapfel_material(common: &CommonArgs) -> Result<Holzapfel, Error> {
    match &common.material {
        None => Ok(Holzapfel::artery()),
        Some(path) => match load_material(path)? {
            MaterialConfig::Holzapfel(m) => Ok(m),
            MaterialConfig::NeoHookean(_) => Err(Error::Config(
                "inflation needs the fiber-reinforced holzapfel material".into(),
            )),
        },
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, Error> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Error::Config(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, contents)
        .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

fn print_sweep_summary(grid: &FvuGrid, only: Option<PathKind>) {
    let (overall, overall_fvu) = grid.stress_argmin_mean();
    println!(
        "grid stress optimum across paths: eps_s = 1e-{} (mean FVU {:.3e})",
        overall + 1,
        overall_fvu
    );
    for (p, kind) in grid.paths.iter().enumerate() {
        if let Some(filter) = only {
            if *kind != filter {
                continue;
            }
        }
        let (s_idx, s_fvu) = grid.stress_argmin(p);
        let ((ts, tc), t_fvu) = grid.tangent_argmin(p);
        println!(
            "{:<9} stress optimum: eps_s = 1e-{:<2} (FVU {:.3e})   tangent optimum: eps_s = 1e-{}, eps_c = 1e-{} (FVU {:.3e})",
            kind.label(),
            s_idx + 1,
            s_fvu,
            ts + 1,
            tc + 1,
            t_fvu
        );
    }
}

fn run_sweep_command(common: &CommonArgs, path: Option<PathArg>) -> Result<(), Error> {
    let material = neo_hookean_material(common, "the sweep")?;
    let grid = run_sweep(&material, &GridSpec::default())?;
    write_file(&common.out, "fvu_stress.csv", &grid.stress_csv())?;
    write_file(&common.out, "fvu_tangent.csv", &grid.tangent_csv())?;
    print_sweep_summary(&grid, path.map(PathArg::kind));
    println!(
        "wrote {} and {}",
        common.out.join("fvu_stress.csv").display(),
        common.out.join("fvu_tangent.csv").display()
    );
    Ok(())
}

fn run_element_command(common: &CommonArgs, program: Option<ProgramArg>) -> Result<(), Error> {
    let material = neo_hookean_material(common, "the element comparison")?;
    let params = perturbations(common)?;
    let programs: Vec<ProgramKind> = match program {
        Some(p) => vec![p.kind()],
        None => ProgramKind::ALL.to_vec(),
    };
    println!(
        "{:<22} {:>10} {:>10} {:>14}",
        "program", "iter(num)", "iter(ana)", "stress rel err"
    );
    for kind in programs {
        let program = LoadProgram::standard(kind);
        let cmp = compare_modes(&program, &material, params)?;
        if !(cmp.numerical.converged && cmp.analytic.converged) {
            return Err(Error::InvalidInput {
                what: "element solve",
                why: format!("{} did not converge in 25 iterations", kind.label()),
            });
        }
        let name = format!("element_{}.csv", kind.label());
        write_file(&common.out, &name, &comparison_csv(&program, &cmp))?;
        println!(
            "{:<22} {:>10} {:>10} {:>14.3e}",
            kind.label(),
            cmp.numerical.total_iterations,
            cmp.analytic.total_iterations,
            cmp.relative_error
        );
    }
    Ok(())
}

fn run_inflate_command(
    common: &CommonArgs,
    pressure: f64,
    geometry: Option<&PathBuf>,
) -> Result<(), Error> {
    let material = holzapfel_material(common)?;
    let params = perturbations(common)?;
    let geom = match geometry {
        Some(path) => load_geometry(path)?,
        None => CylinderGeometry::default(),
    };
    let states = inflate(&geom, &material, pressure, 4, params)?;
    write_file(&common.out, "inflation.csv", &inflation_csv(&states))?;
    write_file(&common.out, "transmural.csv", &transmural_csv(&states))?;
    println!(
        "{:>14} {:>18} {:>18}",
        "pressure_kPa", "inner_radius_mm", "outer_radius_mm"
    );
    for s in &states {
        println!(
            "{:>14.4} {:>18.9} {:>18.9}",
            s.pressure_kpa, s.inner_radius, s.outer_radius
        );
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    match &cli.command {
        Command::Sweep { common, path } => run_sweep_command(common, *path),
        Command::Element { common, program } => run_element_command(common, *program),
        Command::Inflate {
            common,
            pressure,
            geometry,
        } => run_inflate_command(common, *pressure, geometry.as_ref()),
        Command::Check => {
            if check::run_all() {
                Ok(())
            } else {
                Err(Error::InvalidInput {
                    what: "invariant suite",
                    why: "one or more checks failed".into(),
                })
            }
        }
    }
}

fn main() -> ExitCode {
    // The only environment variable read: worker thread count for the sweep.
    if let Ok(threads) = std::env::var("HYPERNUM_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Config(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
