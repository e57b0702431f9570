use relsplit::em::{self, MaxwellFields};
use relsplit::exterior::{Meta, Valued, ALL_AXES};
use relsplit::fields::{self, max_abs, FieldExt};
use relsplit::metric::tensor_at;
use relsplit::scenarios::{self, Chart, Order, Params};
use relsplit::Hyper;

const POINTS: usize = 100;

fn check_oracles(s: &scenarios::Scenario, pts: &[[f64; 4]], tol: f64) {
    for o in &s.oracles {
        let r = o.residual(pts);
        assert!(r < tol, "{} {}: {r:e}", s.name, o.name);
        assert!(o.tags_match(), "{} {} tags", s.name, o.name);
    }
}

#[test]
fn minkowski_oracles_and_flags() {
    let s = scenarios::minkowski_rest(Params::default()).unwrap();
    let pts = s.sample(POINTS, 1);
    check_oracles(&s, &pts, 1e-12);
    assert_eq!(s.ms.classify(&pts, 1e-10).unwrap(), s.flags);
}

#[test]
fn rotating_oracles_and_flags() {
    let s = scenarios::rotating(Params::default()).unwrap();
    let pts = s.sample(POINTS, 2);
    check_oracles(&s, &pts, 1e-11);
    assert_eq!(s.ms.classify(&pts, 1e-10).unwrap(), s.flags);
}

#[test]
fn expanding_oracles_and_flags() {
    let s = scenarios::expanding(Params::default()).unwrap();
    let pts = s.sample(POINTS, 3);
    check_oracles(&s, &pts, 1e-11);
    assert_eq!(s.ms.classify(&pts, 1e-10).unwrap(), s.flags);
}

#[test]
fn schiff_oracles_and_flags() {
    let p = Params::default();
    let s = scenarios::schiff_natural(p).unwrap();
    let pts = s.sample(POINTS, 4);
    check_oracles(&s, &pts, 1e-11);
    assert_eq!(s.ms.classify(&pts, 1e-10).unwrap(), s.flags);
}

#[test]
fn schiff_metric_components() {
    let p = Params { omega: 0.5, ..Params::default() };
    let g = tensor_at(&scenarios::schiff_metric(&p), [0.0, 0.3, 0.0, 0.0]);
    assert!((g.at(0, 0) - 0.9775).abs() < 1e-15);
    assert!((g.at(0, 2) + 0.15).abs() < 1e-15);
    assert_eq!(g.at(0, 1), 0.0);
}

#[test]
fn slow_rotation_approaches_rest_frame() {
    let p = Params { omega: 1e-8, ..Params::default() };
    let s = scenarios::rotating(p).unwrap();
    let x = [0.2, 1.5, 0.4, -0.3];
    assert!((s.ms.lapse().at(x).get(0) - 1.0).abs() < 1e-12);
    assert!(s.ms.s.curvature().unwrap().at(x).max_abs() < 1e-7);
    let h = tensor_at(&s.ms.h_sigma(), x);
    assert!((h.at(1, 1) - 1.5 * 1.5).abs() < 1e-12);
}

fn gaussian_rho(r: Hyper, z: Hyper) -> Hyper {
    (-(r * r + z * z)).exp() * (r * 0.5 + 1.0)
}

#[test]
fn rest_frame_charge_splits_into_charge_and_convection_current() {
    let p = Params::default();
    let s = scenarios::rotating(p).unwrap();
    let pts = s.sample(40, 5);
    let j = scenarios::rest_charge(&p, gaussian_rho);
    let (rho, jt) = s.ms.s.split(&j).unwrap();
    let nat = relsplit::splitting::SplittingStructure::natural(ALL_AXES, 0, relsplit::Slot::G);
    let (rho0, _) = nat.split(&j).unwrap();
    let (er, ej) = scenarios::rest_charge_split(&p, &rho0).unwrap();
    assert!(fields::max_dist(&rho, &er, &pts) < 1e-12 * (1.0 + max_abs(&er, &pts)));
    let jt = fields::neg(&jt);
    assert_eq!(jt.meta(), ej.meta());
    assert!(fields::max_dist(&jt, &ej, &pts) < 1e-12);
    assert!(max_abs(&ej, &pts) > 1e-3);
}

#[test]
fn axial_reduction_of_sphere_fields_matches_exact_solution() {
    let p = Params::default();
    let s = scenarios::rotating(p).unwrap();
    let sol = scenarios::schiff_solution(p).unwrap();
    let pts = s.smooth_points(POINTS, 6);
    let x = em::split_em(&s.ms.s, s.fields.as_ref().unwrap()).unwrap();
    let ax = scenarios::axial_reduce(&x, &pts, 1e-10).unwrap();
    for f in &ax.trivial {
        assert!(max_abs(f, &pts) < 1e-12);
    }
    let exact = sol.fields(Order::Exact).unwrap();
    let scale = sol.max_field(&exact, &pts);
    assert!(scale > 1e-2);
    for (name, a, b) in [("e", &ax.e, &exact.e), ("b", &ax.b, &exact.b), ("h", &ax.h, &exact.h), ("d", &ax.d, &exact.d)]
    {
        let dd = fields::max_dist(a, b, &pts) / scale;
        assert!(dd < 1e-10, "{name}: {dd:e}");
        assert_eq!(a.meta(), b.meta(), "{name}");
    }
}

#[test]
fn exact_solution_satisfies_reduced_equations() {
    let p = Params::default();
    let sol = scenarios::schiff_solution(p).unwrap();
    let s = scenarios::rotating(p).unwrap();
    let pts = s.smooth_points(POINTS, 7);
    let f = sol.fields(Order::Exact).unwrap();
    for r in scenarios::reduced_residuals(&sol.omega_bar, &f).unwrap() {
        assert!(max_abs(&r, &pts) < 1e-9);
    }
    for r in sol.constitutive_residuals(&f).unwrap() {
        assert!(max_abs(&r, &pts) < 1e-10);
    }
    let zeroth = sol.fields(Order::Zeroth).unwrap();
    let res = scenarios::reduced_residuals(&sol.omega_bar, &zeroth).unwrap();
    assert!(max_abs(&res[1], &pts) < 1e-9);
    let first = sol.fields(Order::First).unwrap();
    let res = scenarios::reduced_residuals(&sol.omega_bar, &first).unwrap();
    assert!(max_abs(&res[0], &pts) > 1e-6, "first order is not exact");
}

#[test]
fn fields_vanish_outside_the_outer_sphere() {
    let p = Params::default();
    let sol = scenarios::schiff_solution(p).unwrap();
    let s = scenarios::rotating(p).unwrap();
    let outside: Vec<_> = s.smooth_points(400, 8).into_iter().filter(|x| x[1].hypot(x[3]) > p.r2 * 1.01).collect();
    assert!(outside.len() > 20);
    for o in [Order::Zeroth, Order::First, Order::Exact] {
        assert_eq!(sol.max_field(&sol.fields(o).unwrap(), &outside), 0.0);
    }
    let x = em::split_em(&s.ms.s, s.fields.as_ref().unwrap()).unwrap();
    for f in [&x.e, &x.b, &x.d, &x.h] {
        assert_eq!(max_abs(f, &outside), 0.0);
    }
}

#[test]
fn reduction_rejects_non_axisymmetric_fields() {
    let p = Params::default();
    let s = scenarios::rotating(p).unwrap();
    let pts = s.sample(10, 9);
    let a = fields::form(Meta::new(ALL_AXES, 1).dim(relsplit::dims::pd::F), |x| {
        vec![x[2].sin(), Hyper::constant(0.0), Hyper::constant(0.0), Hyper::constant(0.0)]
    })
    .unwrap();
    let m = MaxwellFields::vacuum(&s.ms.g, a, p.z0).unwrap();
    let x = em::split_em(&s.ms.s, &m).unwrap();
    assert!(matches!(scenarios::axial_reduce(&x, &pts, 1e-10), Err(relsplit::Error::Param(_))));
}

#[test]
fn schiff_charges_vanish_and_currents_cancel() {
    let p = Params::default();
    let s = scenarios::schiff_natural(p).unwrap();
    let pts = s.sample(POINTS, 10);
    let m = scenarios::static_fields(Chart::Cartesian, &s.ms.g, &p, scenarios::gaussian(1.0, 0.5)).unwrap();
    let x = em::split_em(&s.ms.s, &m).unwrap();
    let sf = em::schiff_star_fields(&s.ms, p.z0, &x).unwrap();
    assert!(max_abs(&sf.rho_s, &pts) < 1e-9);
    let sum = fields::add(&x.j, &sf.j_s).unwrap();
    assert!(max_abs(&sum, &pts) < 1e-9);
    assert!(max_abs(&x.j, &pts) > 1e-3);
    let (pc, mc) = em::schiff_couplings(&s.ms, p.z0, &x).unwrap();
    assert!(fields::max_dist(&pc, &sf.p_s, &pts) < 1e-10);
    assert!(fields::max_dist(&mc, &sf.m_s, &pts) < 1e-10);
}

#[test]
fn schiff_couplings_hold_for_general_fields() {
    let p = Params::default();
    let s = scenarios::schiff_natural(p).unwrap();
    let pts = s.sample(30, 11);
    let mut r = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(11);
    let a = fields::random_form(
        &mut r,
        Meta::new(ALL_AXES, 1).dim(relsplit::dims::pd::F),
        fields::PolySpec { degree: 3, scale: 0.5 },
    )
    .unwrap();
    let m = MaxwellFields::vacuum(&s.ms.g, a, p.z0).unwrap();
    let x = em::split_em(&s.ms.s, &m).unwrap();
    let sf = em::schiff_star_fields(&s.ms, p.z0, &x).unwrap();
    let (pc, mc) = em::schiff_couplings(&s.ms, p.z0, &x).unwrap();
    let e1 = fields::max_dist(&pc, &sf.p_s, &pts);
    let e2 = fields::max_dist(&mc, &sf.m_s, &pts);
    assert!(e1 < 1e-10 && e2 < 1e-10);
}

#[test]
fn body_force_vanishes_for_rotating_killing_fields() {
    let p = Params::default();
    let s = scenarios::rotating(p).unwrap();
    let pts = s.sample(30, 12);
    let m = scenarios::static_fields(Chart::Cylindrical, &s.ms.g, &p, scenarios::gaussian(1.0, 2.0)).unwrap();
    for axis in [0u8, 2, 3] {
        let mut v = relsplit::MultiVec64::zero(Meta::new(ALL_AXES, 1)).unwrap();
        v.set(1 << axis, 1.0);
        let n = fields::constant(v);
        assert!(em::killing_defect(&s.ms.g, &n, &pts).unwrap() < 1e-12);
        assert!(max_abs(&m.body_force(&n).unwrap(), &pts) < 1e-10);
    }
    assert!(
        max_abs(
            &m.stress_energy(&fields::constant({
                let mut v = relsplit::MultiVec64::zero(Meta::new(ALL_AXES, 1)).unwrap();
                v.set(1, 1.0);
                v
            }))
            .unwrap(),
            &pts
        ) > 1e-6
    );
}

#[test]
fn kinematic_relations_on_scenarios() {
    for s in [scenarios::rotating(Params::default()).unwrap(), scenarios::expanding(Params::default()).unwrap()] {
        let pts = s.sample(40, 13);
        let ms = &s.ms;
        let rel = |a: &fields::FormRef, b: &fields::FormRef| fields::max_dist(a, b, &pts) / (1.0 + max_abs(b, &pts));
        assert!(rel(&ms.acceleration().unwrap(), &ms.acceleration_structure().unwrap()) < 1e-10);
        let eta2 = fields::scale(&ms.vorticity().unwrap(), 2.0);
        assert!(rel(&eta2, &fields::scale(&ms.vorticity_structure().unwrap(), 2.0)) < 1e-10);
        let d = relsplit::metric::tensor_max_dist(&ms.expansion().unwrap(), &ms.expansion_structure().unwrap(), &pts);
        assert!(d < 1e-10, "{} {d:e}", s.name);
        let k3 = ms.kappa3().unwrap();
        let lhs = ms.proper_time_d(&k3).unwrap();
        let rhs = fields::times(&ms.expansion_scalar().unwrap(), &k3).unwrap();
        assert!(rel(&lhs, &rhs) < 1e-10, "{}", s.name);
    }
}

#[test]
fn invalid_parameters_are_rejected() {
    for p in [
        Params { omega: 2.0, ..Params::default() },
        Params { r1: 0.5, ..Params::default() },
        Params { c0: 0.0, ..Params::default() },
    ] {
        assert!(scenarios::schiff_solution(p).is_err());
        assert!(scenarios::by_name("schiff", p).is_err());
    }
    assert!(scenarios::by_name("nosuch", Params::default()).is_err());
    let v = Valued::ALG;
    assert_ne!(v, Valued::COALG);
}

#[test]
fn reduced_equations_are_dimensionally_homogeneous() {
    let sol = scenarios::schiff_solution(Params::default()).unwrap();
    let audit = sol.audit().unwrap();
    assert_eq!(audit.len(), 6);
    for a in audit {
        a.check().unwrap_or_else(|e| panic!("{}: {e}", a.id));
    }
}
