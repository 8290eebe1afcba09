//! Reference constitutive models.
//!
//! The Neo-Hookean model ships with closed-form Cauchy stress and
//! Jaumann-rate tangent and serves as the analytic oracle for the
//! perturbation sweep. The Holzapfel model (two fiber families with
//! exponential stiffening) is defined through its energy only; models without
//! analytic stress are cross-checked against a high-order central-difference
//! oracle with Richardson extrapolation.

use crate::error::{Error, Result};
use crate::kernel::EnergyModel;
use crate::tensor::{push_forward, voigt_unpack, TangentVoigt, Tensor2};

/// Cap on the fiber exponential argument; beyond this `exp` would overflow,
/// so the evaluation fails loudly instead.
pub const FIBER_EXPONENT_CAP: f64 = 700.0;

/// A model that also provides closed-form stress and tangent, usable as an
/// independent reference for the differencing kernel.
pub trait AnalyticModel: EnergyModel {
    /// Closed-form Cauchy stress in Pa.
    fn analytic_stress(&self, f: &Tensor2) -> Result<Tensor2>;

    /// Closed-form Jaumann-rate tangent modulus in Pa.
    fn analytic_tangent(&self, f: &Tensor2) -> Result<TangentVoigt>;
}

fn jacobian(f: &Tensor2) -> Result<f64> {
    let j = f.det();
    if j > 0.0 {
        Ok(j)
    } else {
        Err(Error::NonPositiveJacobian { det: j })
    }
}

/// Compressible Neo-Hookean solid,
/// Psi = C10 (I1_bar - 3) + (1/D)(J - 1)^2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NeoHookean {
    /// Isochoric stiffness, Pa.
    pub c10: f64,
    /// Volumetric compliance, 1/Pa.
    pub d: f64,
}

impl NeoHookean {
    pub fn new(c10: f64, d: f64) -> Result<Self> {
        if c10 > 0.0 && d > 0.0 {
            Ok(Self { c10, d })
        } else {
            Err(Error::InvalidInput {
                what: "Neo-Hookean constants",
                why: format!("c10 and d must be positive, got c10 = {c10}, d = {d}"),
            })
        }
    }

    /// Strain energy density in Pa.
    pub fn energy(&self, f: &Tensor2) -> Result<f64> {
        let j = jacobian(f)?;
        let c = f.transpose() * *f;
        let i1_bar = j.powf(-2.0 / 3.0) * c.trace();
        Ok(self.c10 * (i1_bar - 3.0) + (1.0 / self.d) * (j - 1.0) * (j - 1.0))
    }

    /// Closed-form Cauchy stress,
    /// sigma = (2 C10 / J)(b_bar - tr(b_bar)/3 I) + (2/D)(J - 1) I.
    pub fn stress(&self, f: &Tensor2) -> Result<Tensor2> {
        let j = jacobian(f)?;
        let bb = (*f * f.transpose()).scale(j.powf(-2.0 / 3.0));
        let dev = bb - Tensor2::identity().scale(bb.trace() / 3.0);
        let sigma = dev.scale(2.0 * self.c10 / j)
            + Tensor2::identity().scale((2.0 / self.d) * (j - 1.0));
        Ok(sigma.symmetrized())
    }

    /// Closed-form Jaumann-rate tangent modulus assembled on the Voigt slots.
    pub fn tangent(&self, f: &Tensor2) -> Result<TangentVoigt> {
        let j = jacobian(f)?;
        let bb = (*f * f.transpose()).scale(j.powf(-2.0 / 3.0));
        let tr = bb.trace();
        let c1 = 2.0 * self.c10 / j;
        let vol = (2.0 / self.d) * (2.0 * j - 1.0);
        let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        // Terms are grouped in commuting pairs so that swapping (i,j) with
        // (k,l) reproduces the identical floating-point sum: the assembled
        // matrix is major-symmetric bit for bit.
        Ok(TangentVoigt::from_four_index(|i, jj, k, l| {
            c1 * (0.5
                * ((delta(i, k) * bb.get(jj, l) + bb.get(i, k) * delta(jj, l))
                    + (delta(i, l) * bb.get(jj, k) + bb.get(i, l) * delta(jj, k)))
                - (2.0 / 3.0) * (delta(i, jj) * bb.get(k, l) + bb.get(i, jj) * delta(k, l))
                + (2.0 / 9.0) * delta(i, jj) * delta(k, l) * tr)
                + vol * delta(i, jj) * delta(k, l)
        }))
    }
}

impl Default for NeoHookean {
    /// The constants used throughout the verification experiments:
    /// C10 = 80 kPa, D = 2e-6 1/Pa.
    fn default() -> Self {
        Self {
            c10: 80e3,
            d: 2e-6,
        }
    }
}

impl EnergyModel for NeoHookean {
    fn name(&self) -> &str {
        "neo-hookean"
    }

    fn energy(&self, f: &Tensor2) -> Result<f64> {
        NeoHookean::energy(self, f)
    }
}

impl AnalyticModel for NeoHookean {
    fn analytic_stress(&self, f: &Tensor2) -> Result<Tensor2> {
        self.stress(f)
    }

    fn analytic_tangent(&self, f: &Tensor2) -> Result<TangentVoigt> {
        self.tangent(f)
    }
}

/// Anisotropic artery-wall solid with two fiber families,
///
/// Psi = C10 (I1_bar - 3)
///     + k1/(2 k2) [exp(k2 (I4_bar - 1)^2) - 1 + exp(k2 (I6_bar - 1)^2) - 1]
///     + (1/D) ((J^2 - 1)/2 - ln J)
///
/// with I4_bar = a0 . C_bar a0 and I6_bar = g0 . C_bar g0 the squared fiber
/// stretches. The fiber terms carry no tension-compression switch: both
/// families contribute for I4_bar < 1 as well, which differs from dispersed
/// variants of this model family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Holzapfel {
    /// Ground-matrix stiffness, Pa.
    pub c10: f64,
    /// Volumetric compliance, 1/Pa.
    pub d: f64,
    /// Fiber stiffness, Pa.
    pub k1: f64,
    /// Fiber stiffening exponent, dimensionless.
    pub k2: f64,
    /// First fiber direction in the reference configuration, unit length.
    pub a0: [f64; 3],
    /// Second fiber direction in the reference configuration, unit length.
    pub g0: [f64; 3],
}

impl Holzapfel {
    pub fn new(c10: f64, d: f64, k1: f64, k2: f64, a0: [f64; 3], g0: [f64; 3]) -> Result<Self> {
        if !(c10 > 0.0 && d > 0.0 && k1 >= 0.0 && k2 > 0.0) {
            return Err(Error::InvalidInput {
                what: "Holzapfel constants",
                why: format!("require c10 > 0, d > 0, k1 >= 0, k2 > 0; got c10 = {c10}, d = {d}, k1 = {k1}, k2 = {k2}"),
            });
        }
        for (name, v) in [("a0", a0), ("g0", g0)] {
            let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if (norm - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidInput {
                    what: "fiber direction",
                    why: format!("{name} must be a unit vector, |{name}| = {norm:.15}"),
                });
            }
        }
        Ok(Self {
            c10,
            d,
            k1,
            k2,
            a0,
            g0,
        })
    }

    /// Fibers at +/- `angle_deg` from the circumferential axis e2, in the
    /// circumferential-axial (e2, e3) plane.
    pub fn with_fiber_angle_deg(c10: f64, d: f64, k1: f64, k2: f64, angle_deg: f64) -> Result<Self> {
        let a = angle_deg.to_radians();
        let (s, c) = a.sin_cos();
        Self::new(c10, d, k1, k2, [0.0, c, s], [0.0, c, -s])
    }

    /// The artery-wall parameter set used by the inflation driver:
    /// C10 = 22.12 kPa, D = 1e-6 1/Pa, k1 = 206 Pa, k2 = 1.465, fibers at
    /// +/- 39.76 degrees from the circumferential direction.
    pub fn artery() -> Self {
        Self::with_fiber_angle_deg(2.212e4, 1e-6, 206.0, 1.465, 39.76)
            .expect("artery constants are valid")
    }

    fn invariants(&self, f: &Tensor2) -> Result<(f64, f64, f64, f64)> {
        let j = jacobian(f)?;
        let c_bar = (f.transpose() * *f).scale(j.powf(-2.0 / 3.0));
        let fiber_stretch_sq = |v: &[f64; 3]| {
            let mut w = [0.0; 3];
            for r in 0..3 {
                w[r] = c_bar.get(r, 0) * v[0] + c_bar.get(r, 1) * v[1] + c_bar.get(r, 2) * v[2];
            }
            v[0] * w[0] + v[1] * w[1] + v[2] * w[2]
        };
        Ok((
            j,
            c_bar.trace(),
            fiber_stretch_sq(&self.a0),
            fiber_stretch_sq(&self.g0),
        ))
    }

    /// Isochoric part of the energy: ground matrix plus fibers, no
    /// volumetric term. This is the energy seen by an incompressible
    /// formulation, where the volumetric response is replaced by the
    /// reaction pressure.
    pub fn isochoric_energy(&self, f: &Tensor2) -> Result<f64> {
        let (_, i1_bar, i4_bar, i6_bar) = self.invariants(f)?;
        let fiber_term = |stretch_sq: f64| -> Result<f64> {
            let arg = self.k2 * (stretch_sq - 1.0) * (stretch_sq - 1.0);
            if arg > FIBER_EXPONENT_CAP {
                return Err(Error::ExponentOverflow { exponent: arg });
            }
            Ok(arg.exp() - 1.0)
        };
        // Summed as one commutative pair: exchanging the two fiber families
        // leaves the energy unchanged bit for bit.
        let fibers = fiber_term(i4_bar)? + fiber_term(i6_bar)?;
        Ok(self.c10 * (i1_bar - 3.0) + self.k1 / (2.0 * self.k2) * fibers)
    }

    /// Full strain energy density in Pa.
    pub fn energy(&self, f: &Tensor2) -> Result<f64> {
        let j = jacobian(f)?;
        let iso = self.isochoric_energy(f)?;
        Ok(iso + (1.0 / self.d) * ((j * j - 1.0) / 2.0 - j.ln()))
    }
}

impl EnergyModel for Holzapfel {
    fn name(&self) -> &str {
        "holzapfel"
    }

    fn energy(&self, f: &Tensor2) -> Result<f64> {
        Holzapfel::energy(self, f)
    }
}

// Steps sized so the O(eps^4) truncation stays below 1e-8 relative even at
// the strongest sweep compression (lambda_3 = 1/16, where derivatives of the
// energy in the compressed direction grow like lambda_3^-2 per order) while
// round-off stays negligible.
const RICHARDSON_EPS_COARSE: f64 = 3e-5;
const RICHARDSON_EPS_FINE: f64 = 1.5e-5;

fn central_pk2<M: EnergyModel + ?Sized>(model: &M, f: &Tensor2, eps: f64) -> Result<Tensor2> {
    let mut s = Tensor2::zero();
    for slot in 0..6 {
        let pair = voigt_unpack(slot);
        let plus = crate::kernel::perturb_for_stress(f, pair, eps)?;
        let minus = crate::kernel::perturb_for_stress(f, pair, -eps)?;
        let psi_plus = model.energy(&plus)?;
        let psi_minus = model.energy(&minus)?;
        if !(psi_plus.is_finite() && psi_minus.is_finite()) {
            return Err(Error::NonFiniteEnergy {
                model: model.name().to_string(),
                context: "central-difference oracle",
            });
        }
        let value = (psi_plus - psi_minus) / (2.0 * eps);
        s.set(pair.row(), pair.col(), value);
        s.set(pair.col(), pair.row(), value);
    }
    Ok(s)
}

/// Second Piola-Kirchhoff stress from central differences at two step sizes
/// combined by Richardson extrapolation, error O(eps^4) for smooth energies.
///
/// Independent of the one-sided kernel path; serves as the reference for
/// models without closed-form stress.
pub fn richardson_pk2<M: EnergyModel + ?Sized>(model: &M, f: &Tensor2) -> Result<Tensor2> {
    jacobian(f)?;
    let coarse = central_pk2(model, f, RICHARDSON_EPS_COARSE)?;
    let fine = central_pk2(model, f, RICHARDSON_EPS_FINE)?;
    // Halving the step divides the O(eps^2) leading error by 4.
    Ok((fine.scale(4.0) - coarse).scale(1.0 / 3.0))
}

/// [`richardson_pk2`] pushed forward to Cauchy stress.
pub fn richardson_stress_oracle<M: EnergyModel + ?Sized>(
    model: &M,
    f: &Tensor2,
) -> Result<Tensor2> {
    let s = richardson_pk2(model, f)?;
    push_forward(&s, f)
}
