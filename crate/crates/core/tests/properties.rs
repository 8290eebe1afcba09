//! Property tests for the tensor layer, the kernel outputs and the metrics.

use hypernum::sweep::{fvu_stress, LoadPath, PathKind};
use hypernum::{
    numerical_pk2, push_forward, tangent_jaumann, voigt_pack, voigt_unpack, EnergyModel,
    Holzapfel, NeoHookean, PerturbationParams, Tensor2,
};
use proptest::prelude::*;

/// Random tensor bounded away from singularity: dominant positive diagonal
/// with small off-diagonal entries.
fn well_conditioned() -> impl Strategy<Value = Tensor2> {
    let diag = prop::array::uniform3(0.7f64..1.6);
    let off = prop::array::uniform6(-0.25f64..0.25);
    (diag, off).prop_map(|(d, o)| {
        Tensor2::new([
            [d[0], o[0], o[1]],
            [o[2], d[1], o[3]],
            [o[4], o[5], d[2]],
        ])
    })
}

fn symmetric() -> impl Strategy<Value = Tensor2> {
    let diag = prop::array::uniform3(-2.0f64..2.0);
    let off = prop::array::uniform3(-2.0f64..2.0);
    (diag, off).prop_map(|(d, o)| {
        Tensor2::new([
            [d[0], o[0], o[1]],
            [o[0], d[1], o[2]],
            [o[1], o[2], d[2]],
        ])
    })
}

proptest! {
    #[test]
    fn determinant_is_multiplicative(a in well_conditioned(), b in well_conditioned()) {
        let lhs = (a * b).det();
        let rhs = a.det() * b.det();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
    }

    #[test]
    fn push_forward_through_identity_is_exact(s in symmetric()) {
        let out = push_forward(&s, &Tensor2::identity()).unwrap();
        prop_assert_eq!(out, s);
    }

    #[test]
    fn inverse_transpose_satisfies_residual_bound(t in well_conditioned()) {
        let it = t.inverse_transpose().unwrap();
        let residual = t * it.transpose() - Tensor2::identity();
        prop_assert!(residual.norm_inf() <= 1e-13);
    }

    #[test]
    fn fvu_unchanged_by_binary_scaling(
        values in prop::collection::vec(-10.0f64..10.0, 4..20),
        noise in prop::collection::vec(-0.1f64..0.1, 4..20),
    ) {
        let n = values.len().min(noise.len());
        let analytical = &values[..n];
        if analytical.iter().all(|v| (v - analytical[0]).abs() < 1e-9) {
            return Ok(()); // constant series is rejected by contract
        }
        let numerical: Vec<f64> = analytical
            .iter()
            .zip(&noise[..n])
            .map(|(a, e)| a + e)
            .collect();
        let base = fvu_stress(&numerical, analytical).unwrap();
        let scaled_a: Vec<f64> = analytical.iter().map(|v| v * 1024.0).collect();
        let scaled_n: Vec<f64> = numerical.iter().map(|v| v * 1024.0).collect();
        prop_assert_eq!(fvu_stress(&scaled_n, &scaled_a).unwrap(), base);
    }

    #[test]
    fn kernel_pk2_is_symmetric_by_construction(f in well_conditioned()) {
        let nh = NeoHookean::default();
        let s = numerical_pk2(&nh, &f, 1e-6).unwrap();
        prop_assert_eq!(s.asymmetry(), 0.0);
    }

    #[test]
    fn kernel_tangent_voigt_is_symmetric(f in well_conditioned()) {
        let nh = NeoHookean::default();
        let c = tangent_jaumann(&nh, &f, &PerturbationParams::default()).unwrap();
        prop_assert!(c.is_symmetric());
    }

    #[test]
    fn holzapfel_energy_is_invariant_under_fiber_swap(f in well_conditioned()) {
        let m = Holzapfel::artery();
        let swapped = Holzapfel::new(m.c10, m.d, m.k1, m.k2, m.g0, m.a0).unwrap();
        prop_assert_eq!(m.energy(&f).unwrap(), swapped.energy(&f).unwrap());
    }
}

#[test]
fn voigt_round_trip_covers_all_slots() {
    for slot in 0..6 {
        assert_eq!(voigt_pack(voigt_unpack(slot)), slot);
    }
}

#[test]
fn neo_hookean_energy_nonnegative_along_sweep_paths() {
    let nh = NeoHookean::default();
    for kind in PathKind::ALL {
        for f in LoadPath::new(kind, 50).generate() {
            let psi = EnergyModel::energy(&nh, &f).unwrap();
            assert!(psi >= 0.0, "{}: psi = {psi}", kind.label());
        }
    }
}
