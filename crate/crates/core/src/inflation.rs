//! Inflation of an incompressible thick-walled cylinder by internal
//! pressure, with the wall material evaluated through the differencing
//! kernel.
//!
//! The tube kinematics enforce det F = 1 pointwise, so only the isochoric
//! part of the wall energy matters: the volumetric response is replaced by
//! the reaction pressure, which cancels in the hoop/radial stress difference
//! that drives radial equilibrium,
//!
//!   P = integral over the wall of (sigma_theta - sigma_r) / r dr.
//!
//! Luminal pressure as a function of inner radius is solved for prescribed
//! pressure levels by safeguarded Newton iteration, and the transmural
//! stress profile is reconstructed from the same equilibrium equation.
//!
//! Basis convention: e1 = radial, e2 = circumferential, e3 = axial.

use crate::error::{Error, Result};
use crate::kernel::{numerical_pk2, EnergyModel, PerturbationParams};
use crate::materials::{richardson_pk2, Holzapfel};
use crate::tensor::{push_forward, Tensor2};

/// Reference geometry of the cylinder wall, radii in mm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CylinderGeometry {
    pub inner_radius: f64,
    pub outer_radius: f64,
    pub axial_stretch: f64,
}

impl CylinderGeometry {
    pub fn new(inner_radius: f64, outer_radius: f64, axial_stretch: f64) -> Result<Self> {
        if !(inner_radius > 0.0 && outer_radius > inner_radius && axial_stretch > 0.0) {
            return Err(Error::InvalidInput {
                what: "cylinder geometry",
                why: format!(
                    "need 0 < inner < outer and axial_stretch > 0, got {inner_radius}, {outer_radius}, {axial_stretch}"
                ),
            });
        }
        Ok(Self {
            inner_radius,
            outer_radius,
            axial_stretch,
        })
    }
}

impl Default for CylinderGeometry {
    /// Placeholder wall sized to small-artery dimensions; configurable, not
    /// ground truth.
    fn default() -> Self {
        Self {
            inner_radius: 0.4,
            outer_radius: 0.5,
            axial_stretch: 1.0,
        }
    }
}

/// Deformation gradient diag(lambda_r, lambda_theta, lambda_z) in the
/// cylindrical basis at reference radius `radius_ref`, for the incompressible
/// mapping r(R) = sqrt(r_i^2 + (R^2 - R_i^2) / lambda_z).
///
/// det F = 1 by construction (to rounding).
pub fn kinematics(
    geometry: &CylinderGeometry,
    inner_radius_current: f64,
    radius_ref: f64,
) -> Tensor2 {
    let slack = 1e-12 * geometry.outer_radius;
    assert!(
        radius_ref >= geometry.inner_radius - slack && radius_ref <= geometry.outer_radius + slack,
        "reference radius {radius_ref} outside the wall"
    );
    let lz = geometry.axial_stretch;
    let ri = geometry.inner_radius;
    let r = (inner_radius_current * inner_radius_current
        + (radius_ref * radius_ref - ri * ri) / lz)
        .sqrt();
    let l_theta = r / radius_ref;
    let l_r = 1.0 / (l_theta * lz);
    Tensor2::diagonal(l_r, l_theta, lz)
}

/// Deformed outer radius for a given deformed inner radius.
pub fn outer_radius_current(geometry: &CylinderGeometry, inner_radius_current: f64) -> f64 {
    let ri = geometry.inner_radius;
    let ro = geometry.outer_radius;
    (inner_radius_current * inner_radius_current + (ro * ro - ri * ri) / geometry.axial_stretch)
        .sqrt()
}

/// Which stress evaluation feeds the wall integrand.
#[derive(Clone, Copy, Debug)]
pub enum WallStress {
    /// One-sided differencing kernel at the given perturbations.
    Kernel(PerturbationParams),
    /// Central-difference Richardson oracle.
    RichardsonOracle,
}

/// Isochoric part of the wall energy; the volumetric term plays no role
/// under the incompressible kinematics.
struct IsochoricWall<'a>(&'a Holzapfel);

impl EnergyModel for IsochoricWall<'_> {
    fn name(&self) -> &str {
        "holzapfel-isochoric"
    }

    fn energy(&self, f: &Tensor2) -> Result<f64> {
        self.0.isochoric_energy(f)
    }
}

/// Wall stress evaluator calibrated so the reference configuration is
/// exactly stress-free: the differencing bias at the identity is evaluated
/// once and subtracted from every state.
struct WallStressField<'a> {
    wall: IsochoricWall<'a>,
    path: WallStress,
    reference_bias: Tensor2,
}

impl<'a> WallStressField<'a> {
    fn new(material: &'a Holzapfel, path: WallStress) -> Result<Self> {
        let wall = IsochoricWall(material);
        let reference_bias = match path {
            WallStress::Kernel(params) => {
                numerical_pk2(&wall, &Tensor2::identity(), params.eps_s)?
            }
            WallStress::RichardsonOracle => richardson_pk2(&wall, &Tensor2::identity())?,
        };
        Ok(Self {
            wall,
            path,
            reference_bias,
        })
    }

    fn cauchy(&self, f: &Tensor2) -> Result<Tensor2> {
        let s = match self.path {
            WallStress::Kernel(params) => numerical_pk2(&self.wall, f, params.eps_s)?,
            WallStress::RichardsonOracle => richardson_pk2(&self.wall, f)?,
        };
        push_forward(&(s - self.reference_bias), f)
    }

    /// sigma_theta - sigma_r at reference radius R; the indeterminate
    /// incompressibility pressure cancels in this difference.
    fn hoop_radial_difference(
        &self,
        geometry: &CylinderGeometry,
        inner_radius_current: f64,
        radius_ref: f64,
    ) -> Result<f64> {
        let f = kinematics(geometry, inner_radius_current, radius_ref);
        let sigma = self.cauchy(&f)?;
        Ok(sigma.get(1, 1) - sigma.get(0, 0))
    }
}

// 8-point Gauss-Legendre rule on [-1, 1].
const GL8: [(f64, f64); 8] = [
    (-0.9602898564975362, 0.10122853629037626),
    (-0.7966664774136267, 0.22238103445337447),
    (-0.525532409916329, 0.3137066458778873),
    (-0.1834346424956498, 0.362683783378362),
    (0.1834346424956498, 0.362683783378362),
    (0.525532409916329, 0.3137066458778873),
    (0.7966664774136267, 0.22238103445337447),
    (0.9602898564975362, 0.10122853629037626),
];

/// Default number of subintervals for the composite rule: 8 x 8 = 64 points
/// across the wall.
pub const DEFAULT_SUBINTERVALS: usize = 8;

/// Number of transmural profile samples.
pub const PROFILE_SAMPLES: usize = 64;

/// Composite Gauss-Legendre integral of (sigma_theta - sigma_r)/r dr over
/// reference radii [r_lo, r_hi], transformed to the reference coordinate:
/// the integrand in R is (sigma_theta - sigma_r) R / (lambda_z r^2).
fn equilibrium_integral(
    field: &WallStressField,
    geometry: &CylinderGeometry,
    inner_radius_current: f64,
    r_lo: f64,
    r_hi: f64,
    subintervals: usize,
) -> Result<f64> {
    let lz = geometry.axial_stretch;
    let ri = geometry.inner_radius;
    let mut total = 0.0;
    for s in 0..subintervals {
        let a = r_lo + (r_hi - r_lo) * s as f64 / subintervals as f64;
        let b = r_lo + (r_hi - r_lo) * (s + 1) as f64 / subintervals as f64;
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        for (node, weight) in GL8 {
            let radius_ref = mid + half * node;
            let diff = field.hoop_radial_difference(geometry, inner_radius_current, radius_ref)?;
            let r_sq = inner_radius_current * inner_radius_current
                + (radius_ref * radius_ref - ri * ri) / lz;
            total += weight * half * diff * radius_ref / (lz * r_sq);
        }
    }
    Ok(total)
}

/// Luminal pressure in kPa balancing the wall at the given deformed inner
/// radius, by radial equilibrium across the whole wall.
pub fn luminal_pressure(
    geometry: &CylinderGeometry,
    material: &Holzapfel,
    inner_radius_current: f64,
    params: PerturbationParams,
) -> Result<f64> {
    luminal_pressure_with(
        geometry,
        material,
        inner_radius_current,
        WallStress::Kernel(params),
        DEFAULT_SUBINTERVALS,
    )
}

/// [`luminal_pressure`] with an explicit stress path and quadrature
/// refinement.
pub fn luminal_pressure_with(
    geometry: &CylinderGeometry,
    material: &Holzapfel,
    inner_radius_current: f64,
    path: WallStress,
    subintervals: usize,
) -> Result<f64> {
    if inner_radius_current < geometry.inner_radius {
        return Err(Error::InvalidInput {
            what: "inner radius",
            why: format!(
                "deformed inner radius {inner_radius_current} below reference {}",
                geometry.inner_radius
            ),
        });
    }
    let field = WallStressField::new(material, path)?;
    let pascals = equilibrium_integral(
        &field,
        geometry,
        inner_radius_current,
        geometry.inner_radius,
        geometry.outer_radius,
        subintervals,
    )?;
    Ok(pascals / 1000.0)
}

/// One converged pressure level.
#[derive(Clone, Debug)]
pub struct InflationState {
    pub pressure_kpa: f64,
    pub inner_radius: f64,
    pub outer_radius: f64,
    /// (normalized radius in [0, 1] from inner to outer wall, max principal
    /// Cauchy stress in Pa), at [`PROFILE_SAMPLES`] stations.
    pub profile: Vec<(f64, f64)>,
}

const RADIUS_TOLERANCE: f64 = 1e-10;
const PRESSURE_TOLERANCE_KPA: f64 = 1e-12;
/// Bracket scan cap: inner circumferential stretch up to 5.
const MAX_INNER_STRETCH: f64 = 5.0;

fn solve_inner_radius(
    geometry: &CylinderGeometry,
    material: &Holzapfel,
    target_kpa: f64,
    params: PerturbationParams,
) -> Result<f64> {
    let objective = |r: f64| -> Result<f64> {
        Ok(luminal_pressure(geometry, material, r, params)? - target_kpa)
    };
    let mut lo = geometry.inner_radius;
    let f_lo = objective(lo)?;
    if f_lo.abs() <= PRESSURE_TOLERANCE_KPA || f_lo > 0.0 {
        // Pressure already reached at the reference radius (target ~ 0).
        return Ok(lo);
    }

    // Expand the bracket until the wall carries more than the target.
    let mut hi = lo;
    let mut f_hi = f_lo;
    let cap = MAX_INNER_STRETCH * geometry.inner_radius;
    loop {
        hi *= 1.15;
        if hi > cap {
            return Err(Error::RootNotBracketed {
                target_kpa,
                max_kpa: f_hi + target_kpa,
                max_radius: hi / 1.15,
            });
        }
        f_hi = objective(hi)?;
        if f_hi > 0.0 {
            break;
        }
        lo = hi;
    }

    // Safeguarded Newton with a forward-difference derivative; any step that
    // leaves the bracket falls back to bisection.
    let mut x = 0.5 * (lo + hi);
    for _ in 0..100 {
        if hi - lo <= RADIUS_TOLERANCE {
            break;
        }
        let fx = objective(x)?;
        if fx.abs() <= PRESSURE_TOLERANCE_KPA {
            break;
        }
        if fx > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let h = 1e-7 * x.max(1.0);
        let d = (objective(x + h)? - fx) / h;
        let mut next = if d != 0.0 { x - fx / d } else { 0.5 * (lo + hi) };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= RADIUS_TOLERANCE {
            x = next;
            break;
        }
        x = next;
    }
    Ok(x)
}

/// Transmural profile of the max principal Cauchy stress at a converged
/// state. Axisymmetry makes (r, theta, z) the principal axes, so the profile
/// takes the largest of the three reconstructed normal stresses.
fn transmural_profile(
    field: &WallStressField,
    geometry: &CylinderGeometry,
    inner_radius_current: f64,
    pressure_pa: f64,
) -> Result<Vec<(f64, f64)>> {
    let ri = geometry.inner_radius;
    let ro = geometry.outer_radius;
    let n = PROFILE_SAMPLES;
    let stations: Vec<f64> = (0..n)
        .map(|k| ri + (ro - ri) * k as f64 / (n - 1) as f64)
        .collect();

    let r_inner = inner_radius_current;
    let r_outer = outer_radius_current(geometry, inner_radius_current);

    let mut profile = Vec::with_capacity(n);
    let mut sigma_rr = -pressure_pa;
    let mut prev_station = ri;
    for &station in &stations {
        if station > prev_station {
            sigma_rr += equilibrium_integral(
                field,
                geometry,
                inner_radius_current,
                prev_station,
                station,
                1,
            )?;
            prev_station = station;
        }
        let f = kinematics(geometry, inner_radius_current, station);
        let sigma_dev = field.cauchy(&f)?;
        let d_theta = sigma_dev.get(1, 1) - sigma_dev.get(0, 0);
        let d_axial = sigma_dev.get(2, 2) - sigma_dev.get(0, 0);
        let max_principal = sigma_rr.max(sigma_rr + d_theta).max(sigma_rr + d_axial);

        let lz = geometry.axial_stretch;
        let r = (r_inner * r_inner + (station * station - ri * ri) / lz).sqrt();
        let normalized = if r_outer > r_inner {
            ((r - r_inner) / (r_outer - r_inner)).clamp(0.0, 1.0)
        } else {
            0.0
        };
        profile.push((normalized, max_principal));
    }
    Ok(profile)
}

/// Inflates the cylinder through `steps` equal pressure levels from zero to
/// `target_pressure_kpa`, solving the inner radius at each level and
/// recording the transmural stress profile.
pub fn inflate(
    geometry: &CylinderGeometry,
    material: &Holzapfel,
    target_pressure_kpa: f64,
    steps: usize,
    params: PerturbationParams,
) -> Result<Vec<InflationState>> {
    if target_pressure_kpa < 0.0 {
        return Err(Error::InvalidInput {
            what: "target pressure",
            why: format!("must be non-negative, got {target_pressure_kpa} kPa"),
        });
    }
    assert!(steps >= 1, "need at least one pressure step");
    let field = WallStressField::new(material, WallStress::Kernel(params))?;
    let mut states = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let level = target_pressure_kpa * k as f64 / steps as f64;
        let inner = solve_inner_radius(geometry, material, level, params)?;
        let profile = transmural_profile(&field, geometry, inner, level * 1000.0)?;
        states.push(InflationState {
            pressure_kpa: level,
            inner_radius: inner,
            outer_radius: outer_radius_current(geometry, inner),
            profile,
        });
    }
    Ok(states)
}

pub fn inflation_csv(states: &[InflationState]) -> String {
    let mut out = String::from("pressure_kPa,inner_radius_mm,outer_radius_mm\n");
    for s in states {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e}\n",
            s.pressure_kpa, s.inner_radius, s.outer_radius
        ));
    }
    out
}

pub fn transmural_csv(states: &[InflationState]) -> String {
    let mut out = String::from("pressure_kPa,normalized_radius,max_principal_stress_Pa\n");
    for s in states {
        for (normalized, stress) in &s.profile {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e}\n",
                s.pressure_kpa, normalized, stress
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinematics_reference_state_is_identity() {
        let geom = CylinderGeometry::default();
        let f = kinematics(&geom, geom.inner_radius, 0.45);
        assert!((f - Tensor2::identity()).norm_inf() < 1e-14);
    }

    #[test]
    fn kinematics_matches_hand_evaluation() {
        let geom = CylinderGeometry::default();
        let f = kinematics(&geom, 0.5, 0.4);
        assert!((f.get(1, 1) - 1.25).abs() < 1e-15);
        assert!((f.get(0, 0) - 0.8).abs() < 1e-15);
        assert!((f.get(2, 2) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn kinematics_is_isochoric_everywhere() {
        let geom = CylinderGeometry::default();
        for &r_i in &[0.4, 0.55, 0.75] {
            for k in 0..10 {
                let radius = geom.inner_radius
                    + (geom.outer_radius - geom.inner_radius) * k as f64 / 9.0;
                let f = kinematics(&geom, r_i, radius);
                assert!((f.det() - 1.0).abs() <= 1e-14);
            }
        }
    }

    #[test]
    fn pressure_vanishes_at_reference_radius() {
        let geom = CylinderGeometry::default();
        let material = Holzapfel::artery();
        let p = luminal_pressure(
            &geom,
            &material,
            geom.inner_radius,
            PerturbationParams::default(),
        )
        .unwrap();
        assert!(p.abs() <= 1e-9, "P(R_i) = {p:e} kPa");
    }

    #[test]
    fn pressure_is_invariant_to_volumetric_compliance() {
        let geom = CylinderGeometry::default();
        let base = Holzapfel::artery();
        let stiffer = Holzapfel { d: base.d / 16.0, ..base };
        let r = 0.6;
        let p0 = luminal_pressure(&geom, &base, r, PerturbationParams::default()).unwrap();
        let p1 = luminal_pressure(&geom, &stiffer, r, PerturbationParams::default()).unwrap();
        assert_eq!(p0, p1);
    }

    #[test]
    fn stiffer_fibers_raise_pressure() {
        let geom = CylinderGeometry::default();
        let base = Holzapfel::artery();
        let stiff = Holzapfel { k1: 2.0 * base.k1, ..base };
        let r = 0.7;
        let p0 = luminal_pressure(&geom, &base, r, PerturbationParams::default()).unwrap();
        let p1 = luminal_pressure(&geom, &stiff, r, PerturbationParams::default()).unwrap();
        assert!(p1 > p0, "{p1} <= {p0}");
    }

    #[test]
    fn pressure_increases_with_inner_radius() {
        let geom = CylinderGeometry::default();
        let material = Holzapfel::artery();
        let params = PerturbationParams::default();
        let mut last = 0.0;
        for k in 1..=8 {
            let r = geom.inner_radius * (1.0 + 0.12 * k as f64);
            let p = luminal_pressure(&geom, &material, r, params).unwrap();
            assert!(p > last, "P({r}) = {p} not above {last}");
            last = p;
        }
    }

    #[test]
    fn in_plane_shear_stress_vanishes_for_balanced_fiber_pair() {
        let geom = CylinderGeometry::default();
        let material = Holzapfel::artery();
        let field =
            WallStressField::new(&material, WallStress::Kernel(PerturbationParams::default()))
                .unwrap();
        let f = kinematics(&geom, 0.65, 0.45);
        let sigma = field.cauchy(&f).unwrap();
        let cap = 10.0 * 1e-6 * material.c10;
        assert!(sigma.get(1, 2).abs() <= cap, "sigma_theta_z = {:e}", sigma.get(1, 2));
    }

    #[test]
    fn inflate_reaches_zero_pressure_at_reference_geometry() {
        let geom = CylinderGeometry::default();
        let material = Holzapfel::artery();
        let states = inflate(&geom, &material, 0.0, 1, PerturbationParams::default()).unwrap();
        for s in &states {
            assert!((s.inner_radius - geom.inner_radius).abs() <= 1e-9);
        }
    }

    #[test]
    fn quadrature_is_converged_at_the_default_refinement() {
        let geom = CylinderGeometry::default();
        let material = Holzapfel::artery();
        let params = PerturbationParams::default();
        let r = 0.62;
        let coarse = luminal_pressure_with(
            &geom,
            &material,
            r,
            WallStress::Kernel(params),
            DEFAULT_SUBINTERVALS,
        )
        .unwrap();
        let fine = luminal_pressure_with(
            &geom,
            &material,
            r,
            WallStress::Kernel(params),
            2 * DEFAULT_SUBINTERVALS,
        )
        .unwrap();
        assert!(
            (coarse - fine).abs() <= 1e-8 * fine.abs(),
            "{coarse} vs {fine}"
        );
    }

    #[test]
    fn unreachable_pressure_reports_bracket_failure() {
        let geom = CylinderGeometry::default();
        // Even exponential fiber stiffening cannot carry this target within
        // the bracket scan's stretch cap.
        let material = Holzapfel::artery();
        match solve_inner_radius(&geom, &material, 1e200, PerturbationParams::default()) {
            Err(Error::RootNotBracketed { .. }) => {}
            Err(Error::ExponentOverflow { .. }) => {} // stiffening blows up first
            other => panic!("expected a bracketing failure, got {other:?}"),
        }
    }
}
