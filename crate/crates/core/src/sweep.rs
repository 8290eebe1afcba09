//! Perturbation-size sweep: isochoric load paths, fraction-of-variance-
//! unexplained (FVU) metrics, and the full grid search over (eps_s, eps_c).
//!
//! Stress accuracy is scored along whole deformation paths on the primary
//! stress component; tangent accuracy is scored on all components at the
//! largest deformation of each path. Grid cells are independent, so the grid
//! may be filled in parallel; every cell lands in its own slot and the
//! result is bit-identical to a sequential run.

use crate::error::{Error, Result};
use crate::kernel::{cauchy_stress, tangent_jaumann, PerturbationParams};
use crate::materials::AnalyticModel;
use crate::tensor::{BasisDyad, TangentVoigt, Tensor2};
use rayon::prelude::*;

/// The three verification load paths. Each keeps det F = 1 exactly by
/// adjusting the unconstrained components.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathKind {
    /// F = diag(lambda, lambda^-1/2, lambda^-1/2), 0.25 <= lambda <= 4.
    UniaxialIsochoric,
    /// F = diag(lambda, lambda, lambda^-2), 1 <= lambda <= 4.
    EquibiaxialIsochoric,
    /// F = I + gamma e1 (x) e2, 0 <= gamma <= 0.5.
    SimpleShear,
}

impl PathKind {
    pub const ALL: [PathKind; 3] = [
        PathKind::UniaxialIsochoric,
        PathKind::EquibiaxialIsochoric,
        PathKind::SimpleShear,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            PathKind::UniaxialIsochoric => "uniaxial",
            PathKind::EquibiaxialIsochoric => "biaxial",
            PathKind::SimpleShear => "shear",
        }
    }

    /// Stress component scored along the path: sigma_11 for the stretch
    /// paths, sigma_12 for shear.
    pub fn primary_pair(&self) -> BasisDyad {
        match self {
            PathKind::SimpleShear => BasisDyad::new(1, 2),
            _ => BasisDyad::new(1, 1),
        }
    }

    fn parameter_range(&self) -> (f64, f64) {
        match self {
            PathKind::UniaxialIsochoric => (0.25, 4.0),
            PathKind::EquibiaxialIsochoric => (1.0, 4.0),
            PathKind::SimpleShear => (0.0, 0.5),
        }
    }

    fn deformation(&self, level: f64) -> Tensor2 {
        match self {
            PathKind::UniaxialIsochoric => {
                let lat = 1.0 / level.sqrt();
                Tensor2::diagonal(level, lat, lat)
            }
            PathKind::EquibiaxialIsochoric => {
                Tensor2::diagonal(level, level, 1.0 / (level * level))
            }
            PathKind::SimpleShear => {
                Tensor2::identity() + Tensor2::unit_dyad(0, 1).scale(level)
            }
        }
    }
}

/// A sampled deformation path.
#[derive(Clone, Copy, Debug)]
pub struct LoadPath {
    pub kind: PathKind,
    pub samples: usize,
}

impl LoadPath {
    pub fn new(kind: PathKind, samples: usize) -> Self {
        assert!(samples >= 2, "a path needs at least two samples");
        Self { kind, samples }
    }

    /// Uniformly spaced stretch (or shear) levels, endpoints included.
    pub fn levels(&self) -> Vec<f64> {
        let (lo, hi) = self.kind.parameter_range();
        let n = self.samples;
        (0..n)
            .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
            .collect()
    }

    pub fn generate(&self) -> Vec<Tensor2> {
        self.levels()
            .into_iter()
            .map(|level| self.kind.deformation(level))
            .collect()
    }
}

/// Fraction of variance unexplained for a scalar stress series:
/// SS_res / SS_tot against the analytic series and its arithmetic mean.
pub fn fvu_stress(numerical: &[f64], analytical: &[f64]) -> Result<f64> {
    assert_eq!(
        numerical.len(),
        analytical.len(),
        "series lengths must match"
    );
    assert!(analytical.len() >= 2, "need at least two samples");
    let mean = analytical.iter().sum::<f64>() / analytical.len() as f64;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (n, a) in numerical.iter().zip(analytical) {
        ss_res += (n - a) * (n - a);
        ss_tot += (a - mean) * (a - mean);
    }
    if ss_tot < 1e-30 {
        return Err(Error::DegenerateDenominator);
    }
    Ok(ss_res / ss_tot)
}

/// Fraction of variance unexplained for a tangent modulus, summed over all
/// 81 four-index components (the Voigt slots expanded with their symmetry
/// multiplicities) against the analytic tangent and its componentwise mean.
pub fn fvu_tangent(numerical: &TangentVoigt, analytical: &TangentVoigt) -> Result<f64> {
    let mut mean = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    mean += analytical.component(i, j, k, l);
                }
            }
        }
    }
    mean /= 81.0;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let a = analytical.component(i, j, k, l);
                    let n = numerical.component(i, j, k, l);
                    ss_res += (n - a) * (n - a);
                    ss_tot += (a - mean) * (a - mean);
                }
            }
        }
    }
    if ss_tot < 1e-30 {
        return Err(Error::DegenerateDenominator);
    }
    Ok(ss_res / ss_tot)
}

/// Grid specification: decade count and path sampling density.
#[derive(Clone, Copy, Debug)]
pub struct GridSpec {
    /// Number of decades swept, eps = 10^-1 .. 10^-decades.
    pub decades: usize,
    /// Deformation levels per path.
    pub samples_per_path: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            decades: 16,
            samples_per_path: 50,
        }
    }
}

/// Sweep results: stress FVU per (path, eps_s) and tangent FVU per
/// (path, eps_s, eps_c). Cells whose evaluation failed (round-off regimes
/// can produce NaN) hold +Inf.
#[derive(Clone, Debug)]
pub struct FvuGrid {
    pub eps_values: Vec<f64>,
    pub paths: Vec<PathKind>,
    /// stress[p][s] = FVU of the primary stress component on path p at
    /// eps_s = eps_values[s].
    pub stress: Vec<Vec<f64>>,
    /// tangent[p][s][c] = FVU of the full tangent on path p at
    /// (eps_values[s], eps_values[c]), evaluated at the largest deformation.
    pub tangent: Vec<Vec<Vec<f64>>>,
}

impl FvuGrid {
    /// Index and value of the smallest stress FVU on one path.
    pub fn stress_argmin(&self, path_index: usize) -> (usize, f64) {
        let row = &self.stress[path_index];
        let mut best = 0;
        for (s, v) in row.iter().enumerate() {
            if *v < row[best] {
                best = s;
            }
        }
        (best, row[best])
    }

    /// Stress FVU at one eps_s averaged over the load paths, weighting each
    /// load case equally.
    pub fn stress_fvu_mean(&self, eps_index: usize) -> f64 {
        self.stress.iter().map(|row| row[eps_index]).sum::<f64>() / self.stress.len() as f64
    }

    /// Index and value of the smallest path-averaged stress FVU: the single
    /// optimum across the whole grid.
    pub fn stress_argmin_mean(&self) -> (usize, f64) {
        let mut best = 0;
        for s in 0..self.eps_values.len() {
            if self.stress_fvu_mean(s) < self.stress_fvu_mean(best) {
                best = s;
            }
        }
        (best, self.stress_fvu_mean(best))
    }

    /// Indices and value of the smallest tangent FVU on one path.
    pub fn tangent_argmin(&self, path_index: usize) -> ((usize, usize), f64) {
        let plane = &self.tangent[path_index];
        let mut best = (0, 0);
        for (s, row) in plane.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                if *v < plane[best.0][best.1] {
                    best = (s, c);
                }
            }
        }
        (best, plane[best.0][best.1])
    }

    pub fn stress_csv(&self) -> String {
        let mut out = String::from("path,eps_s,fvu\n");
        for (p, kind) in self.paths.iter().enumerate() {
            for (s, eps) in self.eps_values.iter().enumerate() {
                out.push_str(&format!(
                    "{},{:.16e},{:.16e}\n",
                    kind.label(),
                    eps,
                    self.stress[p][s]
                ));
            }
        }
        out
    }

    pub fn tangent_csv(&self) -> String {
        let mut out = String::from("path,eps_s,eps_c,fvu\n");
        for (p, kind) in self.paths.iter().enumerate() {
            for (s, eps_s) in self.eps_values.iter().enumerate() {
                for (c, eps_c) in self.eps_values.iter().enumerate() {
                    out.push_str(&format!(
                        "{},{:.16e},{:.16e},{:.16e}\n",
                        kind.label(),
                        eps_s,
                        eps_c,
                        self.tangent[p][s][c]
                    ));
                }
            }
        }
        out
    }
}

fn stress_series_fvu<M: AnalyticModel + ?Sized>(
    model: &M,
    states: &[Tensor2],
    analytic: &[f64],
    pair: BasisDyad,
    eps_s: f64,
) -> f64 {
    let mut numerical = Vec::with_capacity(states.len());
    for f in states {
        match cauchy_stress(model, f, eps_s) {
            Ok(sigma) => {
                let v = sigma.get(pair.row(), pair.col());
                if !v.is_finite() {
                    return f64::INFINITY;
                }
                numerical.push(v);
            }
            Err(_) => return f64::INFINITY,
        }
    }
    fvu_stress(&numerical, analytic).unwrap_or(f64::INFINITY)
}

fn tangent_cell_fvu<M: AnalyticModel + ?Sized>(
    model: &M,
    f: &Tensor2,
    analytic: &TangentVoigt,
    eps_s: f64,
    eps_c: f64,
) -> f64 {
    let params = match PerturbationParams::new(eps_s, eps_c) {
        Ok(p) => p,
        Err(_) => return f64::INFINITY,
    };
    match tangent_jaumann(model, f, &params) {
        Ok(num) => fvu_tangent(&num, analytic).unwrap_or(f64::INFINITY),
        Err(_) => f64::INFINITY,
    }
}

/// Runs the full sweep for a model with analytic references.
pub fn run_sweep<M: AnalyticModel + Sync + ?Sized>(model: &M, spec: &GridSpec) -> Result<FvuGrid> {
    let eps_values: Vec<f64> = (1..=spec.decades).map(|k| 10f64.powi(-(k as i32))).collect();
    let paths = PathKind::ALL.to_vec();

    let mut stress = Vec::with_capacity(paths.len());
    let mut tangent = Vec::with_capacity(paths.len());

    for kind in &paths {
        let path = LoadPath::new(*kind, spec.samples_per_path);
        let states = path.generate();
        let pair = kind.primary_pair();
        let mut analytic_series = Vec::with_capacity(states.len());
        for f in &states {
            analytic_series.push(model.analytic_stress(f)?.get(pair.row(), pair.col()));
        }

        let stress_row: Vec<f64> = eps_values
            .par_iter()
            .map(|&eps_s| stress_series_fvu(model, &states, &analytic_series, pair, eps_s))
            .collect();

        // Tangent is scored at the largest deformation only.
        let f_last = states.last().expect("path has samples");
        let analytic_tangent = model.analytic_tangent(f_last)?;
        let n = eps_values.len();
        let flat: Vec<f64> = (0..n * n)
            .into_par_iter()
            .map(|idx| {
                let (s, c) = (idx / n, idx % n);
                tangent_cell_fvu(model, f_last, &analytic_tangent, eps_values[s], eps_values[c])
            })
            .collect();
        let plane: Vec<Vec<f64>> = flat.chunks(n).map(|row| row.to_vec()).collect();

        stress.push(stress_row);
        tangent.push(plane);
    }

    Ok(FvuGrid {
        eps_values,
        paths,
        stress,
        tangent,
    })
}
