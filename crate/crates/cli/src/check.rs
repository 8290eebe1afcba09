//! Built-in invariant suite behind `hypernum check`.
//!
//! Each check prints one PASS/FAIL line; the runner returns whether all of
//! them passed.

use hypernum::sweep::{LoadPath, PathKind};
use hypernum::{
    cauchy_stress, jaumann_to_oldroyd, numerical_pk2, oldroyd_to_jaumann, tangent_jaumann, Error,
    Holzapfel, NeoHookean, PerturbationParams, Tensor2,
};

struct Outcome {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Outcome {
    Outcome {
        name,
        passed,
        detail,
    }
}

fn identity_stress() -> Vec<Outcome> {
    let params = PerturbationParams::default();
    let mut out = Vec::new();

    let nh = NeoHookean::default();
    let sigma = cauchy_stress(&nh, &Tensor2::identity(), params.eps_s).unwrap();
    out.push(check(
        "identity stress (neo-hookean)",
        sigma.norm_inf() <= 1e-4 * nh.c10,
        format!("|sigma| = {:.3e} Pa, cap {:.3e} Pa", sigma.norm_inf(), 1e-4 * nh.c10),
    ));

    let hz = Holzapfel::artery();
    let sigma = cauchy_stress(&hz, &Tensor2::identity(), params.eps_s).unwrap();
    out.push(check(
        "identity stress (holzapfel)",
        sigma.norm_inf() <= 1e-4 * hz.c10,
        format!("|sigma| = {:.3e} Pa, cap {:.3e} Pa", sigma.norm_inf(), 1e-4 * hz.c10),
    ));
    out
}

fn symmetry() -> Vec<Outcome> {
    let params = PerturbationParams::default();
    let nh = NeoHookean::default();
    let f = Tensor2::diagonal(1.7, 0.9, 0.71) + Tensor2::unit_dyad(0, 1).scale(0.2);
    let mut out = Vec::new();

    let s = numerical_pk2(&nh, &f, params.eps_s).unwrap();
    out.push(check(
        "pk2 stress symmetric",
        s.asymmetry() == 0.0,
        format!("asymmetry {:.3e}", s.asymmetry()),
    ));

    let sigma = cauchy_stress(&nh, &f, params.eps_s).unwrap();
    out.push(check(
        "cauchy stress symmetric",
        sigma.asymmetry() == 0.0,
        format!("asymmetry {:.3e}", sigma.asymmetry()),
    ));

    let c = tangent_jaumann(&nh, &f, &params).unwrap();
    out.push(check(
        "tangent Voigt matrix symmetric",
        c.is_symmetric(),
        "entrywise exact".into(),
    ));
    out
}

fn oracle_equivalence() -> Vec<Outcome> {
    let params = PerturbationParams::default();
    let nh = NeoHookean::default();
    let mut out = Vec::new();

    let c = tangent_jaumann(&nh, &Tensor2::identity(), &params).unwrap();
    let c1111 = 2.0 * nh.c10 * (4.0 / 3.0) + 2.0 / nh.d;
    let c1212 = 2.0 * nh.c10;
    let err = ((c.get(0, 0) - c1111) / c1111)
        .abs()
        .max(((c.get(3, 3) - c1212) / c1212).abs());
    out.push(check(
        "tangent matches closed form at identity",
        err <= 1e-3,
        format!("worst relative error {err:.3e}"),
    ));

    let f = Tensor2::diagonal(2.0, 1.0 / 2f64.sqrt(), 1.0 / 2f64.sqrt());
    let num = cauchy_stress(&nh, &f, params.eps_s).unwrap();
    let ana = nh.stress(&f).unwrap();
    let rel = (num - ana).norm_inf() / ana.norm_inf();
    out.push(check(
        "stress matches closed form at stretch 2",
        rel <= 1e-4,
        format!("relative error {rel:.3e}"),
    ));
    out
}

fn rate_round_trip() -> Outcome {
    let params = PerturbationParams::default();
    let nh = NeoHookean::default();

    // At zero stress the correction vanishes and the conversion must be the
    // identity bit for bit.
    let cj = tangent_jaumann(&nh, &Tensor2::identity(), &params).unwrap();
    let zero = Tensor2::zero();
    let identity_ok = oldroyd_to_jaumann(&jaumann_to_oldroyd(&cj, &zero), &zero) == cj;

    // At general stress, subtract-then-add in f64 can legitimately round by
    // one bit per operation; the restore must stay inside that envelope.
    let f = Tensor2::diagonal(1.5, 0.9, 0.75);
    let sigma = cauchy_stress(&nh, &f, params.eps_s).unwrap();
    let cj = tangent_jaumann(&nh, &f, &params).unwrap();
    let back = oldroyd_to_jaumann(&jaumann_to_oldroyd(&cj, &sigma), &sigma);
    let mut worst_ulps: f64 = 0.0;
    for p in 0..6 {
        for q in 0..6 {
            let x = cj.get(p, q);
            let ulp = (x.abs() * f64::EPSILON).max(f64::MIN_POSITIVE);
            worst_ulps = worst_ulps.max((back.get(p, q) - x).abs() / ulp);
        }
    }
    check(
        "rate conversion round trip",
        identity_ok && worst_ulps <= 4.0,
        format!("exact at zero stress; worst restore error {worst_ulps:.2} ulp at general stress"),
    )
}

fn path_jacobians() -> Outcome {
    let mut worst: f64 = 0.0;
    for kind in PathKind::ALL {
        for f in LoadPath::new(kind, 50).generate() {
            worst = worst.max((f.det() - 1.0).abs());
        }
    }
    check(
        "unit Jacobian on all load paths",
        worst <= 1e-12,
        format!("worst |det - 1| = {worst:.3e}"),
    )
}

fn fiber_swap() -> Outcome {
    let m = Holzapfel::artery();
    let swapped = Holzapfel::new(m.c10, m.d, m.k1, m.k2, m.g0, m.a0).unwrap();
    let f = Tensor2::new([[1.02, 0.0, 0.0], [0.0, 1.3, 0.12], [0.0, 0.05, 0.76]]);
    let a = m.energy(&f).unwrap();
    let b = swapped.energy(&f).unwrap();
    check(
        "fiber-swap symmetry",
        a == b,
        format!("{a:.12e} vs {b:.12e}"),
    )
}

fn exponent_cap() -> Outcome {
    let m = Holzapfel::artery();
    let f = Tensor2::diagonal(0.01, 10.0, 10.0);
    let outcome = m.energy(&f);
    let passed = matches!(outcome, Err(Error::ExponentOverflow { .. }));
    check(
        "fiber exponent cap raises an error",
        passed,
        format!("{outcome:?}"),
    )
}

/// Runs every invariant check, printing one line each. Returns true when all
/// pass.
pub fn run_all() -> bool {
    let mut outcomes = Vec::new();
    outcomes.extend(identity_stress());
    outcomes.extend(symmetry());
    outcomes.extend(oracle_equivalence());
    outcomes.push(rate_round_trip());
    outcomes.push(path_jacobians());
    outcomes.push(fiber_swap());
    outcomes.push(exponent_cap());

    let mut all = true;
    for o in &outcomes {
        println!(
            "{} {} ({})",
            if o.passed { "PASS" } else { "FAIL" },
            o.name,
            o.detail
        );
        all &= o.passed;
    }
    all
}
