//! Acceptance suite. Each test covers one criterion, prints a single
//! PASS/FAIL line with the measured value and its tolerance, and asserts.

use std::f64::consts::{PI, TAU};

use fueter_core::chart::{self, AngularWeight, ChartPair};
use fueter_core::dirac::{self, ConjugateField, FnField, Side, StencilOrder, StencilSpec};
use fueter_core::lift::{self, scale_of, LiftedSolution};
use fueter_core::sampling::{self, Admissibility, Rng};
use fueter_core::seed::poly::{rational, RealPoly};
use fueter_core::singular::{self, Dichotomy};
use fueter_core::{parse_seed, ChartPoint, Quaternion, RationalSeed};
use rand::Rng as _;

const REGRESSION: [&str; 7] = ["z", "z^2", "z^3", "z^2+1", "1/z", "(z^2+1)*(z^2+4)", "(z^2+1)/z"];

fn seed(s: &str) -> RationalSeed {
    parse_seed(s).unwrap()
}

fn lift(s: &str) -> LiftedSolution {
    LiftedSolution::new(seed(s))
}

fn report(id: u32, name: &str, measured: f64, tol: f64, pass: bool) {
    println!(
        "criterion {id:>2} [{}] {name}: measured {measured:.3e}, tolerance {tol:.1e}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id} ({name}) failed: measured {measured:e}, tolerance {tol:e}");
}

fn admissible(s: &RationalSeed, rng: &mut Rng, n: usize) -> Vec<Quaternion> {
    sampling::admissible_points(s, rng, -2.0, 2.0, n, Admissibility::default())
}

fn max_left_residual(f: &LiftedSolution, points: &[Quaternion]) -> f64 {
    points
        .iter()
        .map(|&q| dirac::residual(f, q, StencilSpec::default_at(q), Side::Left).unwrap())
        .fold(0.0, f64::max)
}

#[test]
fn c01_solution_law() {
    let mut worst = 0.0f64;
    for s in REGRESSION {
        let f = lift(s);
        let mut rng = sampling::rng(0);
        let pts = admissible(f.seed(), &mut rng, 100);
        let m = max_left_residual(&f, &pts);
        let fixed = pts
            .iter()
            .map(|&q| dirac::residual(&f, q, StencilSpec::new(4, 1e-2).unwrap(), Side::Left).unwrap())
            .fold(0.0, f64::max);
        println!("    {s:<18} max |D_left f + 2v/r| = {m:.3e} (h = 1e-2 fixed: {fixed:.3e})");
        worst = worst.max(m);
    }
    report(1, "solution law over regression seeds", worst, 1e-6, worst <= 1e-6);
}

#[test]
fn c02_hand_derived_anchors() {
    let q = Quaternion::new(1.0, 2.0, 1.0, 0.0);
    let s = StencilSpec::new(4, 1e-2).unwrap();
    let e1 = (dirac::apply_left(&lift("z"), q, s).unwrap() - Quaternion::real(-2.0)).norm();

    let sq = lift("z^2");
    let mut rng = sampling::rng(0);
    let mut e2 = 0.0f64;
    for _ in 0..10 {
        let q = sampling::uniform_point(&mut rng, -2.0, 2.0);
        let d = dirac::apply_left(&sq, q, StencilSpec::default_at(q)).unwrap();
        e2 = e2.max((d - Quaternion::real(-4.0 * q.t)).norm());
    }

    let mut e3 = 0.0f64;
    for q in admissible(&RationalSeed::var(), &mut rng, 10) {
        let r = dirac::residual(&ConjugateField, q, StencilSpec::default_at(q), Side::Left).unwrap();
        e3 = e3.max((r - 2.0).abs());
    }
    println!("    |D lift(z) + 2| = {e1:.3e}; max |D lift(z^2) + 4t| = {e2:.3e}; max |res(conj) - 2| = {e3:.3e}");
    let pass = e1 <= 1e-8 && e2 <= 1e-6 && e3 <= 1e-8;
    report(2, "hand-derived operator anchors", e1.max(e3).max(e2 * 1e-2), 1e-8, pass);
}

#[test]
fn c03_ring_closure_through_the_operator() {
    let pairs = [("z^2+1", "z^2+4"), ("z", "1/z")];
    let mut eq1 = 0.0f64;
    let mut commutator = 0.0f64;
    let mut inverse = 0.0f64;
    for (a, b) in pairs {
        let (fa, fb) = (seed(a), seed(b));
        for combined in [&fa + &fb, &fa * &fb] {
            let f = LiftedSolution::new(combined);
            let mut rng = sampling::rng(0);
            let pts = admissible(f.seed(), &mut rng, 100);
            eq1 = eq1.max(max_left_residual(&f, &pts));
        }
        let mut rng = sampling::rng(1);
        let product = &fa * &fb;
        let mut checked = 0;
        while checked < 1000 {
            let q = sampling::uniform_point(&mut rng, -2.0, 2.0);
            let adm = Admissibility { min_r: 1e-6, min_pole_distance: 0.2 };
            if ![&fa, &fb, &product].iter().all(|s| adm.admits(s, q)) {
                continue;
            }
            let p = lift::product_consistency_residual(&fa, &fb, q).unwrap();
            commutator = commutator.max(p.commutator / p.scale);
            checked += 1;
        }
    }
    for s in REGRESSION.iter().chain(["z^2+4", "(z^2+1)*(z^2+4) + z"].iter()) {
        let f = seed(s);
        if f.is_zero() {
            continue;
        }
        let mut rng = sampling::rng(2);
        let inv = f.localize().unwrap().inverse;
        let adm = Admissibility { min_r: 1e-6, min_pole_distance: 0.2 };
        let mut n = 0;
        while n < 100 {
            let q = sampling::uniform_point(&mut rng, -2.0, 2.0);
            if !adm.admits(&f, q) || !adm.admits(&inv, q) {
                continue;
            }
            if let Some(r) = lift::inverse_consistency_residual(&f, q, 1e-3).unwrap() {
                inverse = inverse.max(r);
                n += 1;
            }
        }
    }
    println!("    operator residual on sums/products {eq1:.3e} (<= 1e-6); commutator {commutator:.3e} (<= 1e-12); inverse {inverse:.3e} (<= 1e-10)");
    let pass = eq1 <= 1e-6 && commutator <= 1e-12 && inverse <= 1e-10;
    report(3, "ring closure, commutation, inverse", eq1, 1e-6, pass);
}

#[test]
fn c04_equivariance() {
    let mut worst = 0.0f64;
    for s in REGRESSION {
        let f = lift(s);
        let mut rng = sampling::rng(0);
        for q in admissible(f.seed(), &mut rng, 100) {
            let a = sampling::unit_quaternion(&mut rng);
            let res = f.equivariance_residual(a, q).unwrap();
            let scale = scale_of(&[f.eval(q).unwrap()]);
            worst = worst.max(res / scale);
        }
    }
    report(4, "automorphism equivariance (relative)", worst, 1e-9, worst <= 1e-9);
}

#[test]
fn c05_radial_symmetry() {
    let mut worst = 0.0f64;
    for s in REGRESSION {
        let f = lift(s);
        let mut rng = sampling::rng(0);
        for _ in 0..100 {
            let r = rng.random_range(0.25..2.0);
            let (d1, d2) = (sampling::unit_direction(&mut rng), sampling::unit_direction(&mut rng));
            let (q1, q2) = (d1 * r, d2 * r);
            let res = f.radial_symmetry_residual(q1, q2).unwrap();
            let scale = scale_of(&[f.eval(q1).unwrap(), f.eval(q2).unwrap()]);
            worst = worst.max(res / scale);
        }
    }
    report(5, "radial symmetry on the imaginary slice (relative)", worst, 1e-12, worst <= 1e-12);
}

fn random_chart_points(s: &RationalSeed, rng: &mut Rng, n: usize) -> Vec<ChartPoint> {
    let mut out = Vec::new();
    while out.len() < n {
        let c = ChartPoint::new(
            rng.random_range(-2.0..2.0),
            rng.random_range(0.1..2.0),
            rng.random_range(0.0..TAU),
            rng.random_range(0.1..PI - 0.1),
        );
        if Admissibility::default().admits(s, c.to_quaternion()) {
            out.push(c);
        }
    }
    out
}

#[test]
fn c06_chart_equations() {
    let mut analytic = 0.0f64;
    let mut fd = 0.0f64;
    for s in REGRESSION {
        let f = lift(s);
        let mut rng = sampling::rng(0);
        for c in random_chart_points(f.seed(), &mut rng, 100) {
            let a = chart::chart_partials_analytic(&f, c).unwrap();
            analytic = analytic.max(chart::cr_residuals(&a, AngularWeight::InverseSquare).unwrap().max_abs());
            let d = chart::chart_partials_fd(&f, c, chart::chart_stencil()).unwrap();
            fd = fd.max(chart::cr_residuals(&d, AngularWeight::InverseSquare).unwrap().max_abs());
        }
    }
    let conj = ChartPair { u: |c: ChartPoint| c.t, v: |c: ChartPoint| -c.r };
    let c = ChartPoint::new(0.3, 0.8, 1.0, 1.2);
    let e = chart::cr_residuals(&chart::chart_partials_fd(&conj, c, chart::chart_stencil()).unwrap(), AngularWeight::InverseSquare).unwrap();
    let conj_err = (e.e3 - 2.0).abs();
    println!("    analytic max {analytic:e} (== 0); FD max {fd:.3e} (<= 1e-6); conjugate |e3 - 2| = {conj_err:.3e} (<= 1e-8)");
    let pass = analytic == 0.0 && fd <= 1e-6 && conj_err <= 1e-8;
    report(6, "chiral Cauchy-Riemann equations in the chart", fd, 1e-6, pass);
}

#[test]
fn c07_components_and_invariance() {
    let mut ok = true;
    let mut worst_radius = 0.0f64;
    for (s, n) in [("z", 1), ("z^2+1", 2), ("(z^2+1)*(z^2+4)", 3)] {
        let f = seed(s);
        let count = f.component_count().unwrap();
        let mut rng = sampling::rng(0);
        let rep = singular::component_report(&f, &mut rng).unwrap();
        let autos: Vec<_> = (0..10).map(|_| sampling::unit_quaternion(&mut rng)).collect();
        let invariant = singular::invariance_check(&f, &autos, &mut rng).unwrap();
        println!(
            "    {s:<18} n = {count} (want {n}), radii {:?}, sampled {} (max err {:.1e}), invariant under 10 automorphisms: {invariant}",
            rep.radii.radii(),
            rep.verified_by_sampling,
            rep.max_radius_error
        );
        worst_radius = worst_radius.max(rep.max_radius_error);
        ok &= count == n && rep.n == n && rep.verified_by_sampling && invariant;
    }
    report(7, "component invariant n and its automorphism invariance", worst_radius, 1e-9, ok && worst_radius <= 1e-9);
}

#[test]
fn c08_jacobian_oracle() {
    let mut worst = 0.0f64;
    for s in REGRESSION {
        let f = lift(s);
        let mut rng = sampling::rng(0);
        for q in admissible(f.seed(), &mut rng, 100) {
            let j = singular::jacobian(&f, q, StencilSpec::default_at(q)).unwrap();
            worst = worst.max((j.det_fd - j.det_analytic).abs() / (1.0 + j.det_analytic.abs()));
        }
    }
    let q = Quaternion::new(0.3, -0.4, 0.8, 0.2);
    let d1 = singular::jacobian(&lift("z"), q, StencilSpec::default_at(q)).unwrap().det_fd;
    let q = Quaternion::new(1.0, 1.0, 0.0, 0.0);
    let d2 = singular::jacobian(&lift("z^2"), q, StencilSpec::default_at(q)).unwrap().det_fd;
    println!("    det(lift z) = {d1}, det(lift z^2)(1+i) = {d2}");
    let pass = worst <= 1e-5 && (d1 - 1.0).abs() <= 1e-8 && (d2 - 32.0).abs() <= 1e-3;
    report(8, "FD Jacobian vs closed-form determinant (relative)", worst, 1e-5, pass);
}

#[test]
fn c09_dichotomy() {
    let mut ok = true;
    let mut min_fraction = 1.0f64;
    for s in ["3", "-7/2", "0"] {
        let r = singular::dichotomy_verdict(&seed(s), &mut sampling::rng(0), 1000).unwrap();
        ok &= r.verdict == Dichotomy::TotallyDegenerate;
    }
    for s in REGRESSION {
        match singular::dichotomy_verdict(&seed(s), &mut sampling::rng(0), 1000) {
            Ok(r) => {
                ok &= r.verdict == Dichotomy::DiffeoAlmostEverywhere;
                min_fraction = min_fraction.min(r.nonsingular_fraction);
            }
            Err(e) => {
                println!("    {s}: {e}");
                ok = false;
            }
        }
    }
    report(9, "dichotomy: min non-singular fraction", min_fraction, 0.99, ok && min_fraction >= 0.99);
}

#[test]
fn c10_chirality() {
    let mut worst = 0.0f64;
    for s in REGRESSION {
        let f = lift(s);
        let mut rng = sampling::rng(0);
        for q in admissible(f.seed(), &mut rng, 100) {
            let (l, r) = dirac::apply_both(&f, q, StencilSpec::default_at(q)).unwrap();
            worst = worst.max((l - r).norm());
        }
    }
    let xj = FnField(|q: Quaternion| Quaternion::J * q.x);
    let q = Quaternion::new(0.4, -0.2, 1.1, 0.7);
    let (l, r) = dirac::apply_both(&xj, q, StencilSpec::new(4, 1e-2).unwrap()).unwrap();
    let gap = ((l - r).norm() - 2.0).abs();
    println!("    lifts: max |L - R| = {worst:.3e} (<= 1e-6); x*j: ||L - R| - 2| = {gap:.3e} (<= 1e-8)");
    report(10, "left/right agreement on lifts and separation on x*j", worst, 1e-6, worst <= 1e-6 && gap <= 1e-8);
}

#[test]
fn c11_stencil_convergence() {
    let f = lift("z^3");
    let q = Quaternion::new(0.5, 0.7, -0.3, 0.2);
    let hs = [1e-1, 5e-2, 2.5e-2];
    let (c2, e2) = dirac::convergence_order_lift(&f, q, Side::Left, StencilOrder::Second, &hs).unwrap();
    let (c4, e4) = dirac::convergence_order_lift(&f, q, Side::Left, StencilOrder::Fourth, &hs).unwrap();
    println!("    order 2: {c2:?}, errors {e2:?}");
    println!("    order 4: {c4:?}, errors {e4:?}");
    let ok2 = (c2.slope() - 2.0).abs() <= 0.2;
    let ok4 = (c4.slope() - 4.0).abs() <= 0.3;
    report(11, "measured stencil order on lift(z^3) (order 2 | order 4)", c4.slope(), 0.3, ok2 && ok4);
}

fn random_poly(rng: &mut Rng, nonzero: bool) -> RealPoly {
    loop {
        let deg = rng.random_range(0..=4);
        let p = RealPoly::from_coeffs(
            (0..=deg)
                .map(|_| rational(rng.random_range(-5..=5), rng.random_range(1..=4)))
                .collect(),
        );
        if !nonzero || !p.is_zero() {
            return p;
        }
    }
}

fn random_seed(rng: &mut Rng) -> RationalSeed {
    RationalSeed::new(random_poly(rng, false), random_poly(rng, true)).unwrap()
}

#[test]
fn c12_exact_algebra() {
    let mut rng = sampling::rng(0);
    let mut failures = 0usize;
    for _ in 0..100 {
        let (f, g, h) = (random_seed(&mut rng), random_seed(&mut rng), random_seed(&mut rng));
        let checks = [
            &(&f + &g) + &h == &f + &(&g + &h),
            &(&f * &g) * &h == &f * &(&g * &h),
            &f + &g == &g + &f,
            &f * &g == &g * &f,
            &f * &(&g + &h) == &(&f * &g) + &(&f * &h),
            (&f * &g).derivative() == &(&f.derivative() * &g) + &(&f * &g.derivative()),
            f.is_zero() || &f.localize().unwrap().inverse * &f == RationalSeed::one(),
        ];
        failures += checks.iter().filter(|ok| !**ok).count();
        let text = f.to_string();
        let reparsed = parse_seed(&text).unwrap();
        if reparsed != f || reparsed.to_string() != text {
            failures += 1;
        }
    }
    report(12, "ring axioms, Leibniz, localization, parser round trip (failures)", failures as f64, 0.0, failures == 0);
}
