//! Dense 3x3 second-order tensors and the 6x6 Voigt form of fourth-order
//! tangent moduli.
//!
//! Everything here is plain `f64` arithmetic on fixed-size arrays. The Voigt
//! pairing is fixed to (11, 22, 33, 12, 13, 23); off-diagonal slots carry
//! tensor components directly, with no engineering-shear factor of two,
//! because the tangent is consumed as a matrix of C_ijkl values rather than
//! contracted with engineering strain.

use crate::error::{Error, Result};
use std::ops::{Add, Index, Mul, Sub};

/// Determinant magnitude below which a tensor is treated as singular.
pub const SINGULAR_DET_THRESHOLD: f64 = 1e-14;

/// Index pair (i, j) with 1 <= i <= j <= 3, naming one of the six
/// independent slots of a symmetric second-order tensor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisDyad {
    i: usize,
    j: usize,
}

impl BasisDyad {
    /// Builds the dyad e_i (x) e_j. Indices are 1-based and must satisfy
    /// i <= j; the lower triangle is reached through symmetry.
    pub fn new(i: usize, j: usize) -> Self {
        assert!(
            (1..=3).contains(&i) && (1..=3).contains(&j) && i <= j,
            "basis dyad indices must satisfy 1 <= i <= j <= 3, got ({i}, {j})"
        );
        Self { i, j }
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }

    /// 0-based row index.
    pub fn row(&self) -> usize {
        self.i - 1
    }

    /// 0-based column index.
    pub fn col(&self) -> usize {
        self.j - 1
    }
}

/// The six symmetric slots in Voigt order.
pub const VOIGT_PAIRS: [(usize, usize); 6] = [(1, 1), (2, 2), (3, 3), (1, 2), (1, 3), (2, 3)];

/// Maps a symmetric index pair to its Voigt slot in 0..6.
pub fn voigt_pack(pair: BasisDyad) -> usize {
    match (pair.i, pair.j) {
        (1, 1) => 0,
        (2, 2) => 1,
        (3, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => unreachable!("BasisDyad guarantees 1 <= i <= j <= 3"),
    }
}

/// Inverse of [`voigt_pack`].
pub fn voigt_unpack(slot: usize) -> BasisDyad {
    assert!(slot < 6, "Voigt slot must be in 0..6, got {slot}");
    let (i, j) = VOIGT_PAIRS[slot];
    BasisDyad::new(i, j)
}

/// Voigt slot for an arbitrary 0-based index pair, using symmetry.
pub(crate) fn voigt_slot_unordered(r: usize, c: usize) -> usize {
    let (a, b) = if r <= c { (r, c) } else { (c, r) };
    match (a, b) {
        (0, 0) => 0,
        (1, 1) => 1,
        (2, 2) => 2,
        (0, 1) => 3,
        (0, 2) => 4,
        (1, 2) => 5,
        _ => unreachable!(),
    }
}

/// A 3x3 real tensor in 64-bit precision. Holds deformation gradients,
/// Cauchy-Green tensors, strains and stresses; units depend on context.
///
/// Entries must be finite; construction panics otherwise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tensor2([[f64; 3]; 3]);

impl Tensor2 {
    pub fn new(entries: [[f64; 3]; 3]) -> Self {
        for row in &entries {
            for v in row {
                assert!(v.is_finite(), "tensor entries must be finite, got {v}");
            }
        }
        Self(entries)
    }

    pub fn zero() -> Self {
        Self([[0.0; 3]; 3])
    }

    pub fn identity() -> Self {
        Self::diagonal(1.0, 1.0, 1.0)
    }

    pub fn diagonal(a: f64, b: f64, c: f64) -> Self {
        Self::new([[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]])
    }

    /// The single dyad e_r (x) e_c with 0-based indices.
    pub fn unit_dyad(r: usize, c: usize) -> Self {
        let mut m = [[0.0; 3]; 3];
        m[r][c] = 1.0;
        Self(m)
    }

    pub fn entries(&self) -> &[[f64; 3]; 3] {
        &self.0
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.0[r][c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        assert!(v.is_finite(), "tensor entries must be finite, got {v}");
        self.0[r][c] = v;
    }

    pub fn row(&self, r: usize) -> [f64; 3] {
        self.0[r]
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    /// Exact 3x3 determinant; equals the Jacobian J when the tensor is a
    /// deformation gradient.
    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Self([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }

    /// Adjugate-based inverse. Fails with [`Error::SingularTensor`] when
    /// |det| < 1e-14.
    pub fn inverse(&self) -> Result<Self> {
        let d = self.det();
        if d.abs() < SINGULAR_DET_THRESHOLD {
            return Err(Error::SingularTensor { det: d });
        }
        let m = &self.0;
        let inv_d = 1.0 / d;
        let adj = [
            [
                m[1][1] * m[2][2] - m[1][2] * m[2][1],
                m[0][2] * m[2][1] - m[0][1] * m[2][2],
                m[0][1] * m[1][2] - m[0][2] * m[1][1],
            ],
            [
                m[1][2] * m[2][0] - m[1][0] * m[2][2],
                m[0][0] * m[2][2] - m[0][2] * m[2][0],
                m[0][2] * m[1][0] - m[0][0] * m[1][2],
            ],
            [
                m[1][0] * m[2][1] - m[1][1] * m[2][0],
                m[0][1] * m[2][0] - m[0][0] * m[2][1],
                m[0][0] * m[1][1] - m[0][1] * m[1][0],
            ],
        ];
        let mut out = [[0.0; 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                out[r][c] = adj[r][c] * inv_d;
            }
        }
        Ok(Self::new(out))
    }

    /// (t^-1)^T, the map that pulls perturbation directions back through the
    /// deformation gradient.
    pub fn inverse_transpose(&self) -> Result<Self> {
        Ok(self.inverse()?.transpose())
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.0;
        for row in &mut out {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        Self::new(out)
    }

    pub fn norm_inf(&self) -> f64 {
        let mut n: f64 = 0.0;
        for row in &self.0 {
            for v in row {
                n = n.max(v.abs());
            }
        }
        n
    }

    /// Largest asymmetry |a_ij - a_ji| over the off-diagonal pairs.
    pub fn asymmetry(&self) -> f64 {
        let m = &self.0;
        let mut a: f64 = 0.0;
        for r in 0..3 {
            for c in (r + 1)..3 {
                a = a.max((m[r][c] - m[c][r]).abs());
            }
        }
        a
    }

    pub fn is_symmetric_within(&self, tol: f64) -> bool {
        self.asymmetry() <= tol * f64::max(1.0, self.norm_inf())
    }

    /// (a + a^T) / 2.
    pub fn symmetrized(&self) -> Self {
        let m = &self.0;
        let mut out = [[0.0; 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                out[r][c] = 0.5 * (m[r][c] + m[c][r]);
            }
        }
        Self::new(out)
    }
}

impl Index<(usize, usize)> for Tensor2 {
    type Output = f64;

    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        &self.0[r][c]
    }
}

impl Add for Tensor2 {
    type Output = Tensor2;

    fn add(self, rhs: Tensor2) -> Tensor2 {
        let mut out = self.0;
        for r in 0..3 {
            for c in 0..3 {
                out[r][c] += rhs.0[r][c];
            }
        }
        Tensor2::new(out)
    }
}

impl Sub for Tensor2 {
    type Output = Tensor2;

    fn sub(self, rhs: Tensor2) -> Tensor2 {
        let mut out = self.0;
        for r in 0..3 {
            for c in 0..3 {
                out[r][c] -= rhs.0[r][c];
            }
        }
        Tensor2::new(out)
    }
}

impl Mul for Tensor2 {
    type Output = Tensor2;

    fn mul(self, rhs: Tensor2) -> Tensor2 {
        let a = &self.0;
        let b = &rhs.0;
        let mut out = [[0.0; 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c] + a[r][2] * b[2][c];
            }
        }
        Tensor2::new(out)
    }
}

impl Mul<f64> for Tensor2 {
    type Output = Tensor2;

    fn mul(self, s: f64) -> Tensor2 {
        self.scale(s)
    }
}

/// Push-forward of a second Piola-Kirchhoff stress to Cauchy stress,
/// sigma = J^-1 F S F^T.
///
/// The product of a symmetric S is symmetric up to rounding; the result is
/// checked to be symmetric within 1e-10 of its own magnitude and then
/// symmetrized exactly.
pub fn push_forward(s: &Tensor2, f: &Tensor2) -> Result<Tensor2> {
    let j = f.det();
    if j <= 0.0 {
        return Err(Error::NonPositiveJacobian { det: j });
    }
    debug_assert!(
        s.is_symmetric_within(1e-12),
        "push_forward expects a symmetric stress"
    );
    let raw = (*f * *s * f.transpose()).scale(1.0 / j);
    assert!(
        raw.asymmetry() <= 1e-10 * f64::max(1.0, raw.norm_inf()),
        "push-forward lost symmetry beyond rounding"
    );
    Ok(raw.symmetrized())
}

/// Fourth-order tangent modulus stored on the six symmetric Voigt slots,
/// ordering (11, 22, 33, 12, 13, 23). Entries in Pa.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangentVoigt([[f64; 6]; 6]);

impl TangentVoigt {
    pub fn new(entries: [[f64; 6]; 6]) -> Self {
        for row in &entries {
            for v in row {
                assert!(v.is_finite(), "tangent entries must be finite, got {v}");
            }
        }
        Self(entries)
    }

    pub fn zero() -> Self {
        Self([[0.0; 6]; 6])
    }

    /// Assembles the matrix by evaluating a four-index expression at the
    /// canonical slot pairs. Indices passed to `f` are 0-based.
    pub fn from_four_index<F>(f: F) -> Self
    where
        F: Fn(usize, usize, usize, usize) -> f64,
    {
        let mut m = [[0.0; 6]; 6];
        for (p, row) in m.iter_mut().enumerate() {
            let a = voigt_unpack(p);
            for (q, v) in row.iter_mut().enumerate() {
                let b = voigt_unpack(q);
                *v = f(a.row(), a.col(), b.row(), b.col());
            }
        }
        Self::new(m)
    }

    pub fn entries(&self) -> &[[f64; 6]; 6] {
        &self.0
    }

    pub fn get(&self, p: usize, q: usize) -> f64 {
        self.0[p][q]
    }

    pub fn set(&mut self, p: usize, q: usize, v: f64) {
        assert!(v.is_finite(), "tangent entries must be finite, got {v}");
        self.0[p][q] = v;
    }

    /// Component C_ijkl for arbitrary 0-based indices, through the minor
    /// symmetries of the Voigt packing.
    pub fn component(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.0[voigt_slot_unordered(i, j)][voigt_slot_unordered(k, l)]
    }

    /// (C + C^T) / 2; the result satisfies entries[p][q] == entries[q][p]
    /// exactly.
    pub fn symmetrized(&self) -> Self {
        let m = &self.0;
        let mut out = [[0.0; 6]; 6];
        for p in 0..6 {
            for q in 0..6 {
                out[p][q] = 0.5 * (m[p][q] + m[q][p]);
            }
        }
        Self::new(out)
    }

    pub fn is_symmetric(&self) -> bool {
        for p in 0..6 {
            for q in (p + 1)..6 {
                if self.0[p][q] != self.0[q][p] {
                    return false;
                }
            }
        }
        true
    }

    pub fn max_abs(&self) -> f64 {
        let mut n: f64 = 0.0;
        for row in &self.0 {
            for v in row {
                n = n.max(v.abs());
            }
        }
        n
    }
}

impl Index<(usize, usize)> for TangentVoigt {
    type Output = f64;

    fn index(&self, (p, q): (usize, usize)) -> &f64 {
        &self.0[p][q]
    }
}

impl Add for TangentVoigt {
    type Output = TangentVoigt;

    fn add(self, rhs: TangentVoigt) -> TangentVoigt {
        let mut out = self.0;
        for p in 0..6 {
            for q in 0..6 {
                out[p][q] += rhs.0[p][q];
            }
        }
        TangentVoigt::new(out)
    }
}

impl Sub for TangentVoigt {
    type Output = TangentVoigt;

    fn sub(self, rhs: TangentVoigt) -> TangentVoigt {
        let mut out = self.0;
        for p in 0..6 {
            for q in 0..6 {
                out[p][q] -= rhs.0[p][q];
            }
        }
        TangentVoigt::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_matches_declared_examples() {
        assert_eq!(Tensor2::identity().det(), 1.0);
        let iso = Tensor2::diagonal(2.0, 1.0 / 2f64.sqrt(), 1.0 / 2f64.sqrt());
        assert!((iso.det() - 1.0).abs() < 1e-15);
        let d = Tensor2::diagonal(1.1, 1.0, 1.0);
        assert!((d.det() - 1.1).abs() < 1e-15);
    }

    #[test]
    fn inverse_transpose_of_diagonal() {
        let t = Tensor2::diagonal(2.0, 0.5, 1.0);
        let it = t.inverse_transpose().unwrap();
        assert_eq!(it, Tensor2::diagonal(0.5, 2.0, 1.0));
        assert_eq!(
            Tensor2::identity().inverse_transpose().unwrap(),
            Tensor2::identity()
        );
    }

    #[test]
    fn inverse_transpose_of_simple_shear() {
        // F = I + 0.5 e1 (x) e2; the inverse of the upper 2x2 block is
        // [[1, -0.5], [0, 1]], so F^-T is lower triangular with -0.5 at (2,1).
        let f = Tensor2::identity() + Tensor2::unit_dyad(0, 1).scale(0.5);
        let it = f.inverse_transpose().unwrap();
        assert!((it.get(1, 0) - (-0.5)).abs() < 1e-15);
        assert!((it.get(0, 1)).abs() < 1e-15);
        // residual check: F * F^-1 = I
        let resid = f * it.transpose() - Tensor2::identity();
        assert!(resid.norm_inf() < 1e-13);
    }

    #[test]
    fn inverse_rejects_singular() {
        let t = Tensor2::diagonal(1.0, 1.0, 0.0);
        match t.inverse() {
            Err(Error::SingularTensor { .. }) => {}
            other => panic!("expected SingularTensor, got {other:?}"),
        }
    }

    #[test]
    fn push_forward_examples() {
        let f = Tensor2::diagonal(2.0, 1.0 / 2f64.sqrt(), 1.0 / 2f64.sqrt());
        let zero = push_forward(&Tensor2::zero(), &f).unwrap();
        assert_eq!(zero, Tensor2::zero());

        let s = Tensor2::new([[3.0, 1.0, 0.5], [1.0, -2.0, 0.0], [0.5, 0.0, 4.0]]);
        assert_eq!(push_forward(&s, &Tensor2::identity()).unwrap(), s);

        // J = 1 and only S_11 nonzero: sigma_11 = F_11^2 S_11 = 4
        let s = Tensor2::diagonal(1.0, 0.0, 0.0);
        let sigma = push_forward(&s, &f).unwrap();
        assert!((sigma.get(0, 0) - 4.0).abs() < 1e-12);
        assert!(sigma.get(1, 1).abs() < 1e-15 && sigma.get(2, 2).abs() < 1e-15);
    }

    #[test]
    fn push_forward_rejects_inverted_configuration() {
        let f = Tensor2::diagonal(-1.0, 1.0, 1.0);
        match push_forward(&Tensor2::zero(), &f) {
            Err(Error::NonPositiveJacobian { .. }) => {}
            other => panic!("expected NonPositiveJacobian, got {other:?}"),
        }
    }

    #[test]
    fn voigt_ordering_is_the_declared_one() {
        assert_eq!(voigt_pack(BasisDyad::new(1, 1)), 0);
        assert_eq!(voigt_pack(BasisDyad::new(1, 2)), 3);
        assert_eq!(voigt_unpack(5), BasisDyad::new(2, 3));
        for slot in 0..6 {
            assert_eq!(voigt_pack(voigt_unpack(slot)), slot);
        }
    }

    #[test]
    #[should_panic(expected = "finite")]
    fn non_finite_entries_are_rejected() {
        Tensor2::new([[f64::NAN, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
    }

    #[test]
    fn voigt_symmetrization_is_exact() {
        let mut m = TangentVoigt::zero();
        m.set(0, 3, 7.25);
        m.set(3, 0, 1.5);
        m.set(2, 5, -0.625);
        let s = m.symmetrized();
        assert!(s.is_symmetric());
        assert_eq!(s.get(0, 3), s.get(3, 0));
    }
}
