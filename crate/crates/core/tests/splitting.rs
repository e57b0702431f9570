mod common;

use common::*;
use relsplit::exterior::{Meta, Slot, Valued, ALL_AXES};
use relsplit::fields::{self, d, lie, random_vector, retag, FieldExt};
use relsplit::splitting::{integrate_g, SplittingStructure, Transition};

const TOL: f64 = 1e-10;

#[test]
fn sigma_star_inverts_pi_star() {
    let mut r = rng(1);
    let s = random_structure(&mut r);
    let pts = points(&mut r, 20, 0.8);
    for deg in 0..=3 {
        let a = scalar_form(&mut r, BASE, deg);
        let back = s.sigma_star(&s.pi_star(&a).unwrap()).unwrap();
        assert!(rel_dist(&a, &back, &pts) < 1e-12, "degree {deg}");
    }
}

#[test]
fn split_and_unsplit_are_inverse() {
    let mut r = rng(2);
    let s = random_structure(&mut r);
    let pts = points(&mut r, 20, 0.8);
    for deg in 0..=4 {
        let g = scalar_form(&mut r, ALL_AXES, deg);
        let (a, b) = s.split(&g).unwrap();
        let back = s.unsplit(&a, &b).unwrap();
        assert!(rel_dist(&g, &back, &pts) < 1e-12, "degree {deg}");
        if deg > 0 && deg < 4 {
            let b2 = coalg_form(&mut r, deg - 1);
            let a2 = scalar_form(&mut r, BASE, deg);
            let (a3, b3) = s.split(&s.unsplit(&a2, &b2).unwrap()).unwrap();
            assert!(rel_dist(&a2, &a3, &pts) < 1e-12);
            assert!(rel_dist(&b2, &b3, &pts) < 1e-12);
        }
    }
}

#[test]
fn split_of_dt_with_natural_structure() {
    let s = SplittingStructure::natural(ALL_AXES, 0, Slot::G);
    let dt = fields::constant(relsplit::Form64::unit(ALL_AXES, 1, 1.0).unwrap());
    let (a, b) = s.split(&dt).unwrap();
    let x = [0.1, 0.2, 0.3, 0.4];
    assert_eq!(a.at(x).max_abs(), 0.0);
    assert_eq!(b.at(x).get(0), 1.0);
    assert_eq!(b.meta().valued, Valued::COALG);
}

#[test]
fn vector_split_round_trip_and_pi_sigma() {
    let mut r = rng(3);
    let s = random_structure(&mut r);
    let pts = points(&mut r, 20, 0.8);
    for deg in 1..=3 {
        let v = random_vector(&mut r, Meta::new(ALL_AXES, deg), poly_spec()).unwrap();
        let (k, l) = s.split_vec(&v).unwrap();
        let back = s.unsplit_vec(&k, &l).unwrap();
        assert!(rel_dist(&v, &back, &pts) < 1e-12);
        let (k2, _) = s.split_vec(&s.unsplit_vec(&k, &fields::null()).unwrap()).unwrap();
        assert!(rel_dist(&k, &k2, &pts) < 1e-12);
    }
}

#[test]
fn d_matrix_matches_direct_route() {
    let mut r = rng(4);
    let s = random_structure(&mut r);
    let pts = points(&mut r, 25, 0.8);
    for deg in 1..=2 {
        let a = scalar_form(&mut r, BASE, deg);
        let b = coalg_form(&mut r, deg - 1);
        let (da, db) = s.d_matrix(&a, &b).unwrap();
        let (ea, eb) = s.split(&d(&s.unsplit(&a, &b).unwrap())).unwrap();
        assert!(rel_dist(&da, &ea, &pts) < TOL, "degree {deg}");
        assert!(rel_dist(&db, &eb, &pts) < TOL, "degree {deg}");
        let (fa, fb) = s.d_matrix_factorized(&a, &b).unwrap();
        assert!(rel_dist(&da, &fa, &pts) < TOL);
        assert!(rel_dist(&db, &fb, &pts) < TOL);
    }
}

#[test]
fn d_matrix_on_natural_structure_is_plain() {
    let mut r = rng(5);
    let s = SplittingStructure::natural(ALL_AXES, 0, Slot::G);
    let pts = points(&mut r, 10, 0.8);
    let a = scalar_form(&mut r, BASE, 1);
    let (da, db) = s.d_matrix(&a, &fields::null()).unwrap();
    assert!(rel_dist(&da, &d(&a), &pts) < 1e-12);
    assert!(rel_dist(&db, &s.partial_g(&a), &pts) < 1e-12);
}

#[test]
fn covariant_derivative_identities() {
    let mut r = rng(6);
    let s = random_structure(&mut r);
    let pts = points(&mut r, 25, 0.8);
    let om = s.curvature().unwrap();
    let chi = s.chi();
    for deg in 0..=1 {
        let a = scalar_form(&mut r, BASE, deg);
        let comm = fields::sub(&s.cov_d(&s.partial_g(&a)).unwrap(), &s.partial_g(&s.cov_d(&a).unwrap())).unwrap();
        let rhs = fields::wedge(&chi, &s.partial_g(&a)).unwrap();
        assert!(rel_dist(&comm, &rhs, &pts) < TOL);
        let dd = s.cov_d(&s.cov_d(&a).unwrap()).unwrap();
        let rhs = fields::neg(&fields::wedge(&om, &s.partial_g(&a)).unwrap());
        assert!(rel_dist(&dd, &rhs, &pts) < TOL);
    }
    let g = s.partial_g(&s.partial_g(&scalar_form(&mut r, BASE, 1)));
    assert!(g.meta().is_null());
}

#[test]
fn curvature_and_variance_cross_checks() {
    let mut r = rng(7);
    let s = random_structure(&mut r);
    let pts = points(&mut r, 25, 0.8);
    let om = s.curvature().unwrap();
    let chi = s.chi();
    assert_eq!(om.meta().valued, Valued::ALG);
    assert_eq!(chi.meta().valued, Valued::TENSOR);
    let alt = fields::sub(&d(&s.gamma), &fields::wedge(&s.gamma, &chi).unwrap()).unwrap();
    assert!(rel_dist(&om, &alt, &pts) < TOL);
    let (o2, c2) = s.split(&d(&s.omega())).unwrap();
    assert!(rel_dist(&om, &o2, &pts) < TOL);
    assert!(rel_dist(&chi, &c2, &pts) < TOL);
    let (ca, cb) = s.anholonomity().unwrap();
    assert!(rel_dist(&om, &ca, &pts) < TOL);
    assert!(rel_dist(&chi, &cb, &pts) < TOL);
    let (b1, b2) = s.bianchi().unwrap();
    assert!(fields::max_abs(&b1, &pts) < TOL);
    assert!(fields::max_abs(&b2, &pts) < TOL);
}

#[test]
fn polynomial_variance() {
    let g =
        fields::form(Meta::new(BASE, 1).valued(Valued::ALG), |p| vec![p[0] * p[1], p[0] * 0.0, p[0] * 0.0]).unwrap();
    let s = SplittingStructure::new(ALL_AXES, 0, Slot::G, g).unwrap();
    let c = s.chi().at([0.5, 0.7, 0.0, 0.0]);
    assert!((c.get(0b0010) - 0.7).abs() < 1e-15);
    assert_eq!(c.valued(), Valued::TENSOR);
}

#[test]
fn natural_structure_classifies_holonomic() {
    let mut r = rng(8);
    let pts = points(&mut r, 10, 0.8);
    let f = SplittingStructure::natural(ALL_AXES, 0, Slot::G).classify(&pts, 1e-9).unwrap();
    assert!(f.natural && f.holonomic && f.flat && f.principal);
    let f = random_structure(&mut r).classify(&pts, 1e-9).unwrap();
    assert!(!f.natural && !f.flat && !f.principal && !f.holonomic);
}

#[test]
fn rejects_malformed_christoffel_form() {
    let g = fields::form(Meta::new(BASE, 1), |p| vec![p[1], p[2], p[3]]).unwrap();
    assert!(SplittingStructure::new(ALL_AXES, 0, Slot::G, g).is_err());
}

#[test]
fn change_of_connection_matches_resplitting() {
    let mut r = rng(9);
    let s1 = random_structure(&mut r);
    let s2 = random_structure(&mut r);
    let pts = points(&mut r, 20, 0.8);
    let g = scalar_form(&mut r, ALL_AXES, 2);
    let (a1, b1) = s1.split(&g).unwrap();
    let (a2, b2) = s2.split(&g).unwrap();
    let (c, e) = s1.change_connection(&s2, &a1, &b1).unwrap();
    assert!(rel_dist(&c, &a2, &pts) < 1e-12);
    assert!(rel_dist(&e, &b2, &pts) < 1e-12);
    let (c2, e2) = s2.change_connection(&s1, &c, &e).unwrap();
    assert!(rel_dist(&c2, &a1, &pts) < 1e-12);
    assert!(rel_dist(&e2, &b1, &pts) < 1e-12);
}

#[test]
fn operator_matrices_match_direct_route() {
    let mut r = rng(10);
    let s = random_structure(&mut r);
    let pts = points(&mut r, 20, 0.8);
    let k = random_vector(&mut r, Meta::new(BASE, 1), poly_spec()).unwrap();
    let l = random_vector(&mut r, Meta::new(BASE, 0).valued(Valued::ALG), poly_spec()).unwrap();
    let v = s.unsplit_vec(&k, &l).unwrap();
    assert!(fields::max_dist(&v, &s.unsplit_vec(&k, &fields::null()).unwrap(), &pts) > 1e-3);
    let a = scalar_form(&mut r, BASE, 2);
    let b = coalg_form(&mut r, 1);
    let g = s.unsplit(&a, &b).unwrap();

    let (ia, ib) = s.interior_matrix(&k, &l, &a, &b).unwrap();
    let (ja, jb) = s.split(&fields::interior(&v, &g).unwrap()).unwrap();
    assert!(rel_dist(&ia, &ja, &pts) < TOL);
    assert!(rel_dist(&ib, &jb, &pts) < TOL);

    let (la, lb) = s.lie_matrix(&k, &l, &a, &b).unwrap();
    let (ma, mb) = s.split(&lie(&v, &g).unwrap()).unwrap();
    assert!(rel_dist(&la, &ma, &pts) < TOL);
    assert!(rel_dist(&lb, &mb, &pts) < TOL);

    let p = scalar_form(&mut r, ALL_AXES, 1);
    let (pa, pb) = s.split(&p).unwrap();
    let (wa, wb) = s.wedge_matrix(&pa, &pb, &a, &b).unwrap();
    let (xa, xb) = s.split(&fields::wedge(&p, &g).unwrap()).unwrap();
    assert!(rel_dist(&wa, &xa, &pts) < TOL);
    assert!(rel_dist(&wb, &xb, &pts) < TOL);
}

fn transitions() -> Vec<(&'static str, Transition, bool)> {
    vec![
        ("affine", Transition::new(ALL_AXES, 0, Slot::G, |p| p[0] * 1.5 + p[1].powi(3) * 0.4 - 0.1), true),
        ("shift", Transition::new(ALL_AXES, 0, Slot::G, |p| p[0] + (p[1]).sin() * 0.3 + p[2] * p[3] * 0.2), true),
        ("nonlinear", Transition::new(ALL_AXES, 0, Slot::G, |p| p[0] + (p[0] + p[1]).sin() * 0.15 + p[2] * 0.2), false),
    ]
}

#[test]
fn transitions_commute_with_splitting() {
    let mut r = rng(11);
    let si = random_structure(&mut r);
    let pts = points(&mut r, 20, 0.7);
    for (name, t, _) in transitions() {
        t.check_monotone(&pts).unwrap();
        let sj = t.structure(&si).unwrap();
        for deg in 1..=3 {
            let g = scalar_form(&mut r, ALL_AXES, deg);
            let (ai, bi) = si.split(&g).unwrap();
            let (aj, bj) = sj.split(&t.pull_4d(&g).unwrap()).unwrap();
            assert!(rel_dist(&t.pull(&ai), &aj, &pts) < 1e-11, "{name} degree {deg}");
            assert!(rel_dist(&t.pull(&bi), &bj, &pts) < 1e-11, "{name} degree {deg}");
        }
        let om_i = si.curvature().unwrap();
        assert!(rel_dist(&t.pull(&om_i), &sj.curvature().unwrap(), &pts) < TOL, "{name}");
        let tau = t.tau().unwrap();
        assert!(rel_dist(&t.pull(&si.gamma), &fields::add(&sj.gamma, &tau).unwrap(), &pts) < 1e-12);
    }
}

#[test]
fn variance_rule_for_transitions_affine_in_time() {
    let mut r = rng(12);
    let si = random_structure(&mut r);
    let pts = points(&mut r, 20, 0.7);
    for (name, t, affine) in transitions() {
        let sj = t.structure(&si).unwrap();
        let lhs = t.pull(&si.chi());
        let rhs = fields::add(&sj.chi(), &sj.partial_g(&t.tau().unwrap())).unwrap();
        let err = rel_dist(&lhs, &rhs, &pts);
        if affine {
            assert!(err < TOL, "{name}: {err}");
        } else {
            assert!(err > 1e-6, "{name}: the second fiber derivative should contribute");
        }
    }
}

#[test]
fn transitions_intertwine_d_matrices() {
    let mut r = rng(13);
    let si = random_structure(&mut r);
    let pts = points(&mut r, 15, 0.7);
    let a = scalar_form(&mut r, BASE, 1);
    let b = coalg_form(&mut r, 0);
    for (name, t, _) in transitions() {
        let sj = t.structure(&si).unwrap();
        let (ja, jb) = sj.d_matrix(&t.pull(&a), &t.pull(&b)).unwrap();
        let (ia, ib) = si.d_matrix(&a, &b).unwrap();
        assert!(rel_dist(&ja, &t.pull(&ia), &pts) < TOL, "{name}");
        assert!(rel_dist(&jb, &t.pull(&ib), &pts) < TOL, "{name}");
    }
}

#[test]
fn identity_transition_changes_nothing() {
    let mut r = rng(14);
    let si = random_structure(&mut r);
    let pts = points(&mut r, 10, 0.7);
    let t = Transition::identity(ALL_AXES, 0, Slot::G);
    let sj = t.structure(&si).unwrap();
    assert!(rel_dist(&si.gamma, &sj.gamma, &pts) < 1e-15);
    let b = coalg_form(&mut r, 1);
    assert!(rel_dist(&b, &t.pull(&b), &pts) < 1e-15);
}

#[test]
fn constant_shift_keeps_variance() {
    let mut r = rng(15);
    let si = random_structure(&mut r);
    let pts = points(&mut r, 10, 0.7);
    let t = Transition::new(ALL_AXES, 0, Slot::G, |p| p[0] + 0.25);
    let sj = t.structure(&si).unwrap();
    assert!(fields::max_abs(&sj.partial_g(&t.tau().unwrap()), &pts) < 1e-15);
    assert!(rel_dist(&t.pull(&si.chi()), &sj.chi(), &pts) < 1e-12);
}

#[test]
fn fiber_integrals_are_chart_independent() {
    let mut r = rng(16);
    let a = coalg_form(&mut r, 1);
    for (name, t, _) in transitions() {
        for x in points(&mut r, 3, 0.5) {
            let (lo, hi) = (-0.4, 0.6);
            let mut ya = x;
            ya[0] = lo;
            let mut yb = x;
            yb[0] = hi;
            let (pa, pb) = (t.map_point(ya)[0], t.map_point(yb)[0]);
            let i = integrate_g(&a, 0, Slot::G, x, pa, pb, 1e-12).unwrap();
            let j = integrate_g(&t.pull(&a), 0, Slot::G, x, lo, hi, 1e-12).unwrap();
            assert!(i.dist(&j) < 1e-10, "{name}");
        }
    }
}

#[test]
fn fiber_integral_of_group_derivative() {
    let mut r = rng(17);
    let s = random_structure(&mut r);
    let f = scalar_form(&mut r, BASE, 0);
    let df = s.partial_g(&f);
    for x in points(&mut r, 5, 0.5) {
        let v = integrate_g(&df, 0, Slot::G, x, -0.3, 0.8, 1e-12).unwrap();
        let exact = f.at([0.8, x[1], x[2], x[3]]).get(0) - f.at([-0.3, x[1], x[2], x[3]]).get(0);
        assert!((v.get(0) - exact).abs() < 1e-9);
    }
}

#[test]
fn fiber_integral_is_basis_independent() {
    let mut r = rng(18);
    let a = coalg_form(&mut r, 0);
    let lambda = 3.0;
    let t = Transition::new(ALL_AXES, 0, Slot::G, move |p| p[0] * lambda);
    let rebased = t.pull(&a);
    let x = [0.0, 0.2, -0.1, 0.3];
    let i = integrate_g(&a, 0, Slot::G, x, 0.0, 0.9, 1e-12).unwrap();
    let j = integrate_g(&rebased, 0, Slot::G, x, 0.0, 0.9 / lambda, 1e-12).unwrap();
    assert!(i.dist(&j) < 1e-10);
    let e = a.at([0.5, 0.2, -0.1, 0.3]).rebase(Slot::G, lambda);
    assert!((e.get(0) - rebased.at([0.5 / lambda, 0.2, -0.1, 0.3]).get(0)).abs() < 1e-14);
    let _ = retag(&a, Valued::SCALAR);
}
