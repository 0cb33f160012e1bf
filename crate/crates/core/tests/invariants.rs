//! Checks that tie several modules together.

use fueter_core::chart::{self, AngularWeight};
use fueter_core::dirac::{self, FnField, Side, StencilSpec};
use fueter_core::lift::LiftedSolution;
use fueter_core::sampling::{self, Admissibility};
use fueter_core::singular::{self, Box4, Locus};
use fueter_core::{Quaternion, RationalSeed};

fn seed(s: &str) -> RationalSeed {
    s.parse().unwrap()
}

#[test]
fn operator_is_linear() {
    let f = FnField(|q: Quaternion| q * q * Quaternion::J);
    let g = FnField(|q: Quaternion| Quaternion::new(q.x * q.y, q.t, q.z * q.z, 1.0));
    let fg = FnField(|q: Quaternion| q * q * Quaternion::J + Quaternion::new(q.x * q.y, q.t, q.z * q.z, 1.0));
    let mut rng = sampling::rng(4);
    for _ in 0..20 {
        let q = sampling::uniform_point(&mut rng, -2.0, 2.0);
        let s = StencilSpec::default_at(q);
        for side in [Side::Left, Side::Right] {
            let lhs = dirac::apply(&fg, q, s, side).unwrap();
            let rhs = dirac::apply(&f, q, s, side).unwrap() + dirac::apply(&g, q, s, side).unwrap();
            assert!((lhs - rhs).norm() <= 1e-10, "{lhs:?} {rhs:?}");
        }
    }
}

#[test]
fn analytic_operator_matches_stencil_and_rhs() {
    for s in ["z^3", "z^2+1", "(z^2+1)*(z^2+4)", "(z^2+1)/z"] {
        let f = LiftedSolution::new(seed(s));
        let mut rng = sampling::rng(5);
        for q in sampling::admissible_points(f.seed(), &mut rng, -2.0, 2.0, 25, Admissibility::default()) {
            let exact = dirac::analytic_operator(&f, q).unwrap();
            let fd = dirac::apply_left(&f, q, StencilSpec::default_at(q)).unwrap();
            let rhs = dirac::rhs(&f, q).unwrap();
            assert!((exact - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()), "{s} {q:?}");
            assert!((fd - exact).norm() <= 1e-5 * (1.0 + exact.norm()), "{s} {q:?}");
        }
    }
}

#[test]
fn chart_residuals_and_operator_residual_vanish_together() {
    for s in ["z", "z^2+1", "1/z"] {
        let f = LiftedSolution::new(seed(s));
        let mut rng = sampling::rng(6);
        for q in sampling::admissible_points(f.seed(), &mut rng, -2.0, 2.0, 25, Admissibility::default()) {
            let c = q.to_chart().unwrap();
            if c.beta.sin() < 0.05 {
                continue;
            }
            let p = chart::chart_partials_analytic(&f, c).unwrap();
            let e = chart::cr_residuals(&p, AngularWeight::InverseSquare).unwrap();
            assert_eq!(e.max_abs(), 0.0);
            let d = dirac::analytic_operator(&f, q).unwrap() - dirac::rhs(&f, q).unwrap();
            assert!(d.norm() <= 1e-12 * (1.0 + f.eval(q).unwrap().norm()));
        }
    }
}

#[test]
fn projection_is_invariant_under_automorphisms() {
    let f = LiftedSolution::new(seed("(z^2+1)/z"));
    let mut rng = sampling::rng(7);
    for q in sampling::admissible_points(f.seed(), &mut rng, -2.0, 2.0, 50, Admissibility::default()) {
        let a = sampling::unit_quaternion(&mut rng);
        let (u1, v1) = f.project(q).unwrap();
        let (u2, v2) = f.project(Quaternion::automorph(a, q).unwrap()).unwrap();
        assert!((u1 - u2).abs() + (v1 - v2).abs() <= 1e-12 * (1.0 + u1.abs() + v1.abs()));
    }
}

#[test]
fn jacobian_paths_agree_on_assorted_seeds() {
    for s in ["z^2 - z + 3", "2*z^3 - 1/2", "(z - 1)/(z^2 + 2)", "z^4 + z"] {
        let f = LiftedSolution::new(seed(s));
        let mut rng = sampling::rng(8);
        for q in sampling::admissible_points(f.seed(), &mut rng, -1.5, 1.5, 25, Admissibility::default()) {
            let j = singular::jacobian(&f, q, StencilSpec::new(4, 2e-3).unwrap()).unwrap();
            let tol = 1e-5 * (1.0 + j.det_analytic.abs());
            assert!((j.det_fd - j.det_analytic).abs() <= tol, "{s} {q:?} {} {}", j.det_fd, j.det_analytic);
        }
    }
}

#[test]
fn locus_inclusions_hold_on_scans() {
    for s in ["z^2+1", "(z^2+1)*(z^2+4)", "z^2", "z^3 - 3*z"] {
        let f = LiftedSolution::new(seed(s));
        let result = singular::scan(&f, Box4::uniform(-2.0, 2.0), 9, None).unwrap();
        for x in &result.samples {
            if x.on_zero_set() {
                assert!(x.on_real_locus());
            }
            if x.on_real_locus() {
                assert!(x.is_singular());
                assert_ne!(x.locus, Locus::Regular);
            }
            if x.locus == Locus::Regular {
                assert!(x.det_analytic.abs() > 1e-10);
            }
        }
        let zeros = result.samples.iter().filter(|x| x.locus == Locus::Zero).count();
        let n = f.seed().component_count().unwrap();
        assert_eq!(zeros > 0, n > 1, "{s}");
    }
}

#[test]
fn component_count_matches_ray_crossings() {
    for (s, n) in [("z", 1), ("z^2+1", 2), ("(z^2+1)*(z^2+4)", 3), ("(z^2+1)^2", 2), ("z^2+1/4", 2)] {
        let f = LiftedSolution::new(seed(s));
        let radii = f.seed().zero_radii().unwrap();
        assert_eq!(radii.len() + 1, n, "{s}");
        let mut rng = sampling::rng(9);
        let d = sampling::unit_direction(&mut rng);
        let found = singular::ray_zeros(&f, d, singular::ray_extent(&radii));
        assert_eq!(found.len(), n - 1, "{s}: {found:?}");
    }
}
