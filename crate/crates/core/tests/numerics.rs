use cartograph::numerics::{
    adaptive_quad, effective_potential, mc_fiber_volume, pendulum_action, potential_minimum, turning_points,
    EndpointSingularity, QuadratureSpec,
};
use cartograph::region::ExtendedReal;
use cartograph::systems::{make_system, SystemParams};
use proptest::prelude::*;
use std::f64::consts::PI;

fn sqrt_spec() -> QuadratureSpec {
    QuadratureSpec::with_singularity(EndpointSingularity::InverseSqrt)
}

fn midpoint(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    (0..n).map(|i| f(a + (i as f64 + 0.5) * h)).sum::<f64>() * h
}

fn root(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (f(m) > 0.0) == (fa > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[test]
fn quadrature_examples() {
    let spec = QuadratureSpec::default();
    assert!((adaptive_quad(|x| x, 0.0, 1.0, &spec).unwrap() - 0.5).abs() < 1e-14);
    assert!((adaptive_quad(|x: f64| x.powf(-0.5), 0.0, 1.0, &sqrt_spec()).unwrap() - 2.0).abs() < 1e-10);
    let oracle = midpoint(f64::sin, 0.0, PI, 200_000);
    let v = adaptive_quad(f64::sin, 0.0, PI, &spec).unwrap();
    assert!((v - 2.0).abs() < 1e-10 && (v - oracle).abs() < 1e-10);
}

#[test]
fn quadrature_reports_non_convergence() {
    let spec = QuadratureSpec {
        abs_tol: 1e-15,
        rel_tol: 1e-15,
        max_depth: 1,
        endpoint_singularity: EndpointSingularity::None,
    };
    assert!(adaptive_quad(|x: f64| x.abs().sqrt() * (40.0 * x).cos(), -1.0, 1.3, &spec).is_err());
    let bad = QuadratureSpec {
        abs_tol: 0.0,
        ..QuadratureSpec::default()
    };
    assert!(adaptive_quad(|x| x, 0.0, 1.0, &bad).is_err());
}

#[test]
fn quadrature_is_deterministic() {
    let f = |x: f64| (x * 7.0).cos() / (1.0 + x * x);
    let a = adaptive_quad(f, -3.0, 3.0, &QuadratureSpec::default()).unwrap();
    let b = adaptive_quad(f, -3.0, 3.0, &QuadratureSpec::default()).unwrap();
    assert_eq!(a.to_bits(), b.to_bits());
}

#[test]
fn turning_point_examples() {
    let (theta0, u0) = potential_minimum(0.5);
    let o = turning_points(0.5, u0).unwrap();
    assert!(o.is_degenerate() || (o.turning_hi - o.turning_lo) < 1e-6);
    assert!((o.turning_lo - theta0).abs() < 1e-6);

    let o = turning_points(0.5, 1.5).unwrap();
    assert!(o.turning_lo < theta0 && theta0 < o.turning_hi);
    for t in [o.turning_lo, o.turning_hi] {
        assert!((effective_potential(0.5, t) - 1.5).abs() < 1e-10);
    }
    let lo = root(|t| effective_potential(0.5, t) - 1.5, 1e-6, theta0);
    let hi = root(|t| effective_potential(0.5, t) - 1.5, theta0, PI - 1e-9);
    assert!((lo - o.turning_lo).abs() < 1e-10 && (hi - o.turning_hi).abs() < 1e-10);

    assert!(turning_points(0.5, u0 - 0.1).is_err());
}

#[test]
fn action_against_a_fine_midpoint_rule() {
    let (ell, energy) = (0.3, 0.5);
    let (theta0, _) = potential_minimum(ell);
    let g = |t: f64| energy - effective_potential(ell, t);
    let lo = root(g, 1e-9, theta0);
    let hi = root(g, theta0, PI - 1e-12);
    let oracle = midpoint(|t| (2.0 * g(t)).max(0.0).sqrt(), lo, hi, 1_000_000) / PI;
    let a = pendulum_action(ell, energy, &sqrt_spec()).unwrap();
    assert!((a - oracle).abs() < 1e-8, "{a} vs {oracle}");
}

#[test]
fn action_vanishes_at_the_minimum() {
    for ell in [-1.0, 0.3, 2.0] {
        let (_, u0) = potential_minimum(ell);
        assert!(pendulum_action(ell, u0, &sqrt_spec()).unwrap().abs() < 1e-9);
    }
    assert!(pendulum_action(0.0, 1.0, &sqrt_spec()).is_err());
}

#[test]
fn monte_carlo_examples() {
    let toric = make_system("toric_s2s2", &SystemParams::default()).unwrap();
    let e = mc_fiber_volume(&toric, 0.0, ExtendedReal::POS_INF, 40_000, 5).unwrap();
    assert!(e.agrees_with(2.0, 3.0), "{e:?}");

    let m = make_system("coupled_m", &SystemParams::default()).unwrap();
    let e = mc_fiber_volume(&m, -0.5, ExtendedReal::POS_INF, 40_000, 6).unwrap();
    assert!(e.agrees_with(2.0, 3.0), "{e:?}");
    let e = mc_fiber_volume(&m, -0.5, ExtendedReal::ZERO, 40_000, 7).unwrap();
    assert!(e.agrees_with(1.0, 3.0), "{e:?}");

    let again = mc_fiber_volume(&m, -0.5, ExtendedReal::ZERO, 40_000, 7).unwrap();
    assert_eq!(e, again);

    let p = make_system("spherical_pendulum", &SystemParams::default()).unwrap();
    assert!(mc_fiber_volume(&p, 0.5, ExtendedReal::POS_INF, 40_000, 1).is_err());
    assert!(mc_fiber_volume(&m, -0.5, ExtendedReal::POS_INF, 100, 1).is_err());
}

#[test]
fn monte_carlo_matches_reduced_volume_on_compact_fibers() {
    for name in ["toric_s2s2", "coupled_m", "coupled_n"] {
        let s = make_system(name, &SystemParams::default()).unwrap();
        for (i, x) in [-0.7, -0.3, 0.4, 0.8].into_iter().enumerate() {
            let v = s.reduced_volume(x).unwrap().value();
            let e = mc_fiber_volume(&s, x, ExtendedReal::POS_INF, 20_000, 100 + i as u64).unwrap();
            assert!(e.agrees_with(v, 3.0), "{name} at {x}: {e:?} vs {v}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn action_increases_with_energy(ell in 0.05f64..1.5, excess in 0.05f64..0.8) {
        let (_, u0) = potential_minimum(ell);
        let e = u0 + excess;
        let h = 1e-4;
        let up = pendulum_action(ell, e + h, &sqrt_spec()).unwrap();
        let down = pendulum_action(ell, e - h, &sqrt_spec()).unwrap();
        prop_assert!(up - down > 0.0);
    }

    #[test]
    fn action_is_even_in_ell(ell in 0.05f64..1.5, excess in 0.01f64..0.8) {
        let (_, u0) = potential_minimum(ell);
        let e = u0 + excess;
        let a = pendulum_action(ell, e, &sqrt_spec()).unwrap();
        let b = pendulum_action(-ell, e, &sqrt_spec()).unwrap();
        prop_assert!((a - b).abs() < 1e-8);
    }
}
