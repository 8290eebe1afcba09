//! Homogeneous single-element load programs driven at a material point.
//!
//! Each program prescribes deformation-gradient components on a unit cube in
//! fixed, equal load increments and solves the remaining components by
//! Newton iteration on zero-traction conditions. No mesh exists: the
//! deformation state is homogeneous, so one material point is equivalent to
//! a single element for these load cases.
//!
//! The Newton Jacobian differences the free stress components with respect
//! to the free stretches directly. That stays robust regardless of which
//! objective-rate form a material tangent would use, and converges
//! quadratically to rounding level.

use crate::error::Result;
use crate::kernel::{cauchy_stress, EnergyModel, PerturbationParams};
use crate::materials::AnalyticModel;
use crate::tensor::Tensor2;

/// Residual tolerance: converged when max |sigma_free| <= RTOL * max(1, |sigma|_inf).
const RESIDUAL_RTOL: f64 = 1e-6;
const MAX_ITERATIONS: usize = 25;
/// Step for the finite-difference Jacobian of the traction residual.
const JACOBIAN_STEP: f64 = 1e-6;

/// The four load programs on a 1 x 1 x 1 mm cube.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProgramKind {
    /// 0.75 mm shortening along e1; lateral faces traction-free.
    UniaxialCompression,
    /// 3 mm extension along e1; lateral faces traction-free.
    UniaxialTension,
    /// 3 mm extension along e1 and e2; the e3 faces traction-free.
    EquibiaxialTension,
    /// 1 mm tangential displacement prescribing F_12; all three normal
    /// stretches solved for zero normal traction.
    SimpleShear,
}

impl ProgramKind {
    pub const ALL: [ProgramKind; 4] = [
        ProgramKind::UniaxialCompression,
        ProgramKind::UniaxialTension,
        ProgramKind::EquibiaxialTension,
        ProgramKind::SimpleShear,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            ProgramKind::UniaxialCompression => "uniaxial-compression",
            ProgramKind::UniaxialTension => "uniaxial-tension",
            ProgramKind::EquibiaxialTension => "equibiaxial-tension",
            ProgramKind::SimpleShear => "simple-shear",
        }
    }

    /// Signed target displacement in mm on the unit cube.
    fn standard_displacement(&self) -> f64 {
        match self {
            ProgramKind::UniaxialCompression => -0.75,
            ProgramKind::UniaxialTension => 3.0,
            ProgramKind::EquibiaxialTension => 3.0,
            ProgramKind::SimpleShear => 1.0,
        }
    }

    fn free_count(&self) -> usize {
        match self {
            ProgramKind::UniaxialCompression | ProgramKind::UniaxialTension => 2,
            ProgramKind::EquibiaxialTension => 1,
            ProgramKind::SimpleShear => 3,
        }
    }

    /// Row/column (0-based, equal) of the traction components that must
    /// vanish, one per free variable.
    fn free_axes(&self) -> &'static [usize] {
        match self {
            ProgramKind::UniaxialCompression | ProgramKind::UniaxialTension => &[1, 2],
            ProgramKind::EquibiaxialTension => &[2],
            ProgramKind::SimpleShear => &[0, 1, 2],
        }
    }

    /// Component reported as the program's primary stress (0-based pair).
    pub fn primary_component(&self) -> (usize, usize) {
        match self {
            ProgramKind::SimpleShear => (0, 1),
            _ => (0, 0),
        }
    }

    /// Assembles F from the prescribed load level and the free stretches.
    fn assemble(&self, level: f64, free: &[f64]) -> Tensor2 {
        match self {
            ProgramKind::UniaxialCompression | ProgramKind::UniaxialTension => {
                Tensor2::diagonal(level, free[0], free[1])
            }
            ProgramKind::EquibiaxialTension => Tensor2::diagonal(level, level, free[0]),
            ProgramKind::SimpleShear => {
                Tensor2::diagonal(free[0], free[1], free[2])
                    + Tensor2::unit_dyad(0, 1).scale(level)
            }
        }
    }

    /// Prescribed level at increment k of n: stretch 1 + u k / n for the
    /// stretch programs, shear gamma = u k / n.
    fn level(&self, displacement: f64, k: usize, n: usize) -> f64 {
        let frac = displacement * k as f64 / n as f64;
        match self {
            ProgramKind::SimpleShear => frac,
            _ => 1.0 + frac,
        }
    }
}

/// A load program: kind, signed target displacement in mm, and the number of
/// fixed equal increments.
#[derive(Clone, Copy, Debug)]
pub struct LoadProgram {
    pub kind: ProgramKind,
    pub target_displacement: f64,
    pub increments: usize,
}

impl LoadProgram {
    /// The program with its standard target, in 20 increments.
    pub fn standard(kind: ProgramKind) -> Self {
        Self {
            kind,
            target_displacement: kind.standard_displacement(),
            increments: 20,
        }
    }

    pub fn with_displacement(kind: ProgramKind, displacement: f64, increments: usize) -> Self {
        assert!(increments >= 1, "need at least one increment");
        Self {
            kind,
            target_displacement: displacement,
            increments,
        }
    }
}

/// Which constitutive evaluation drives the solve.
#[derive(Clone, Copy, Debug)]
pub enum StressMode {
    /// Stress from the differencing kernel at the given perturbations.
    Numerical(PerturbationParams),
    /// Closed-form stress of the material.
    Analytic,
}

impl StressMode {
    pub fn label(&self) -> &'static str {
        match self {
            StressMode::Numerical(_) => "numerical",
            StressMode::Analytic => "analytic",
        }
    }
}

/// Outcome of one program run.
#[derive(Clone, Debug)]
pub struct SolveReport {
    /// Newton steps taken at each increment.
    pub iterations: Vec<usize>,
    pub total_iterations: usize,
    pub converged: bool,
    /// Cauchy stress at the last converged increment.
    pub final_stress: Tensor2,
    /// Primary stress component after each increment.
    pub primary_series: Vec<f64>,
    /// Converged free stretches after each increment.
    pub free_series: Vec<Vec<f64>>,
    /// Residual norm at each Newton iterate (including the initial check),
    /// per increment.
    pub residual_history: Vec<Vec<f64>>,
}

fn solve_linear(a: &mut [[f64; 3]; 3], b: &mut [f64; 3], n: usize) -> Option<[f64; 3]> {
    // Gaussian elimination with partial pivoting on an n x n block, n <= 3.
    for col in 0..n {
        let mut pivot = col;
        for r in (col + 1)..n {
            if a[r][col].abs() > a[pivot][col].abs() {
                pivot = r;
            }
        }
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in (col + 1)..n {
            let m = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= m * a[col][c];
            }
            b[r] -= m * b[col];
        }
    }
    let mut x = [0.0; 3];
    for col in (0..n).rev() {
        let mut s = b[col];
        for c in (col + 1)..n {
            s -= a[col][c] * x[c];
        }
        x[col] = s / a[col][col];
    }
    Some(x)
}

fn stress_for_mode<M: EnergyModel + AnalyticModel + ?Sized>(
    model: &M,
    f: &Tensor2,
    mode: StressMode,
) -> Result<Tensor2> {
    match mode {
        StressMode::Numerical(params) => cauchy_stress(model, f, params.eps_s),
        StressMode::Analytic => model.analytic_stress(f),
    }
}

/// Runs one load program. Non-convergence is not an error: the report comes
/// back with `converged == false` and the increments completed so far.
pub fn solve_program<M: EnergyModel + AnalyticModel + ?Sized>(
    program: &LoadProgram,
    model: &M,
    mode: StressMode,
) -> Result<SolveReport> {
    let kind = program.kind;
    let n_free = kind.free_count();
    let axes = kind.free_axes();
    let (pr, pc) = kind.primary_component();

    let mut free = vec![1.0f64; n_free];
    let mut iterations = Vec::with_capacity(program.increments);
    let mut primary_series = Vec::with_capacity(program.increments);
    let mut free_series = Vec::with_capacity(program.increments);
    let mut residual_history = Vec::with_capacity(program.increments);
    let mut final_stress = Tensor2::zero();
    let mut converged_all = true;

    'increments: for k in 1..=program.increments {
        let level = kind.level(program.target_displacement, k, program.increments);
        let residual = |x: &[f64]| -> Result<(Tensor2, [f64; 3])> {
            let f = kind.assemble(level, x);
            let sigma = stress_for_mode(model, &f, mode)?;
            let mut r = [0.0; 3];
            for (idx, &axis) in axes.iter().enumerate() {
                r[idx] = sigma.get(axis, axis);
            }
            Ok((sigma, r))
        };

        let mut iters = 0usize;
        let mut history = Vec::new();
        loop {
            let (sigma, r) = residual(&free)?;
            let r_norm = (0..n_free).fold(0.0f64, |m, i| m.max(r[i].abs()));
            history.push(r_norm);
            let tol = RESIDUAL_RTOL * f64::max(1.0, sigma.norm_inf());
            if r_norm <= tol {
                final_stress = sigma;
                primary_series.push(sigma.get(pr, pc));
                free_series.push(free.clone());
                iterations.push(iters);
                residual_history.push(history);
                break;
            }
            if iters >= MAX_ITERATIONS {
                converged_all = false;
                iterations.push(iters);
                residual_history.push(history);
                break 'increments;
            }

            // Forward-difference Jacobian of the free tractions.
            let mut jac = [[0.0f64; 3]; 3];
            for b in 0..n_free {
                let h = JACOBIAN_STEP * f64::max(1.0, free[b].abs());
                let mut bumped = free.clone();
                bumped[b] += h;
                let (_, rb) = residual(&bumped)?;
                for a in 0..n_free {
                    jac[a][b] = (rb[a] - r[a]) / h;
                }
            }
            let mut rhs = [r[0], r[1], r[2]];
            match solve_linear(&mut jac, &mut rhs, n_free) {
                Some(step) => {
                    for (b, x) in free.iter_mut().enumerate().take(n_free) {
                        *x -= step[b];
                    }
                }
                None => {
                    converged_all = false;
                    iterations.push(iters);
                    residual_history.push(history);
                    break 'increments;
                }
            }
            iters += 1;
        }
    }

    let total_iterations = iterations.iter().sum();
    Ok(SolveReport {
        iterations,
        total_iterations,
        converged: converged_all,
        final_stress,
        primary_series,
        free_series,
        residual_history,
    })
}

/// Paired numerical/analytic run of one program with the final-increment
/// relative error on the primary stress component.
#[derive(Clone, Debug)]
pub struct ModeComparison {
    pub numerical: SolveReport,
    pub analytic: SolveReport,
    pub relative_error: f64,
}

pub fn compare_modes<M: EnergyModel + AnalyticModel + ?Sized>(
    program: &LoadProgram,
    model: &M,
    params: PerturbationParams,
) -> Result<ModeComparison> {
    let numerical = solve_program(program, model, StressMode::Numerical(params))?;
    let analytic = solve_program(program, model, StressMode::Analytic)?;
    let (pr, pc) = program.kind.primary_component();
    let num = numerical.final_stress.get(pr, pc);
    let ana = analytic.final_stress.get(pr, pc);
    let relative_error = (num - ana).abs() / ana.abs();
    Ok(ModeComparison {
        numerical,
        analytic,
        relative_error,
    })
}

/// Per-increment comparison table for one program.
pub fn comparison_csv(program: &LoadProgram, cmp: &ModeComparison) -> String {
    let mut out =
        String::from("increment,lambda_prescribed,sigma_primary_numerical,sigma_primary_analytic,iterations_numerical,iterations_analytic,rel_err\n");
    let n = cmp
        .numerical
        .primary_series
        .len()
        .min(cmp.analytic.primary_series.len());
    for k in 0..n {
        let level = program
            .kind
            .level(program.target_displacement, k + 1, program.increments);
        let num = cmp.numerical.primary_series[k];
        let ana = cmp.analytic.primary_series[k];
        let rel = (num - ana).abs() / ana.abs().max(1e-300);
        out.push_str(&format!(
            "{},{:.16e},{:.16e},{:.16e},{},{},{:.16e}\n",
            k + 1,
            level,
            num,
            ana,
            cmp.numerical.iterations[k],
            cmp.analytic.iterations[k],
            rel
        ));
    }
    out
}
