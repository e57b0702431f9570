mod common;

use common::*;
use relsplit::dims::pd;
use relsplit::exterior::{Meta, Slot, Valued, ALL_AXES};
use relsplit::fields::{self, constant_tensor, lie, random_vector, riesz, FieldExt, FormRef, VecRef};
use relsplit::metric::{tensor_at, tensor_max_dist, Basis, MetricSplitting};
use relsplit::splitting::SplittingStructure;
use relsplit::{Dim, Form64, MultiVec64};

const TOL: f64 = 1e-10;
const C0: f64 = 1.3;

fn nonregular(seed: u64) -> (MetricSplitting, Vec<[f64; 4]>, rand_chacha::ChaCha8Rng) {
    let mut r = rng(seed);
    let gamma = relsplit::fields::random_form(
        &mut r,
        Meta::new(BASE, 1).valued(Valued::ALG),
        relsplit::fields::PolySpec { degree: 2, scale: 0.2 },
    )
    .unwrap();
    let s = SplittingStructure::new(ALL_AXES, 0, Slot::G, gamma).unwrap();
    let g = random_metric(&mut r, 0.1);
    let pts = points(&mut r, 12, 0.5);
    (MetricSplitting::new(s, g, C0).unwrap(), pts, r)
}

fn regular(seed: u64) -> (MetricSplitting, Vec<[f64; 4]>, rand_chacha::ChaCha8Rng) {
    let mut r = rng(seed);
    let gamma = relsplit::fields::random_form(
        &mut r,
        Meta::new(BASE, 1).valued(Valued::ALG),
        relsplit::fields::PolySpec { degree: 2, scale: 0.3 },
    )
    .unwrap();
    let s = SplittingStructure::new(ALL_AXES, 0, Slot::G, gamma).unwrap();
    let (n, h) = random_lapse_and_h(&mut r, 0.1);
    let g = regular_metric(&s, n, h);
    let pts = points(&mut r, 12, 0.5);
    (MetricSplitting::new(s, g, C0).unwrap(), pts, r)
}

fn split_vector(r: &mut rand_chacha::ChaCha8Rng, deg: u8) -> (VecRef, VecRef) {
    let k = if deg == 4 { fields::null() } else { random_vector(r, Meta::new(BASE, deg), poly_spec()).unwrap() };
    let l = if deg == 0 {
        fields::null()
    } else {
        random_vector(r, Meta::new(BASE, deg - 1).valued(Valued::ALG), poly_spec()).unwrap()
    };
    (k, l)
}

fn split_form(r: &mut rand_chacha::ChaCha8Rng, deg: u8) -> (FormRef, FormRef) {
    let a = if deg == 4 { fields::null() } else { scalar_form(r, BASE, deg) };
    let b = if deg == 0 { fields::null() } else { coalg_form(r, deg - 1) };
    (a, b)
}

fn close<K: relsplit::exterior::Kind>(
    x: &(std::sync::Arc<dyn fields::Field<K>>, std::sync::Arc<dyn fields::Field<K>>),
    y: &(std::sync::Arc<dyn fields::Field<K>>, std::sync::Arc<dyn fields::Field<K>>),
    pts: &[[f64; 4]],
) -> f64 {
    rel_dist(&x.0, &y.0, pts).max(rel_dist(&x.1, &y.1, pts))
}

#[test]
fn nonregular_riesz_split_matches_direct_route() {
    for seed in [11, 12] {
        let (ms, pts, mut r) = nonregular(seed);
        for deg in 0..=4 {
            let (k, l) = split_vector(&mut r, deg);
            let direct = ms.riesz_direct(&k, &l).unwrap();
            for b in [Basis::Sigma, Basis::Pi] {
                let m = ms.riesz_split(b, &k, &l).unwrap();
                assert!(close(&m, &direct, &pts) < TOL, "{b:?} degree {deg}");
                assert_eq!(m.1.meta(), direct.1.meta());
            }
        }
    }
}

#[test]
fn nonregular_inverse_riesz_split_matches_direct_route() {
    let (ms, pts, mut r) = nonregular(13);
    for deg in 0..=4 {
        let (a, b) = split_form(&mut r, deg);
        let direct = ms.riesz_inv_direct(&a, &b).unwrap();
        for basis in [Basis::Sigma, Basis::Pi] {
            let m = ms.riesz_inv_split(basis, &a, &b).unwrap();
            assert!(close(&m, &direct, &pts) < TOL, "{basis:?} degree {deg}");
        }
    }
}

#[test]
fn nonregular_hodge_split_three_way_agreement() {
    let (ms, pts, mut r) = nonregular(14);
    for deg in 0..=4 {
        let (a, b) = split_form(&mut r, deg);
        let direct = ms.hodge_direct(&a, &b).unwrap();
        let sig = ms.hodge_split(Basis::Sigma, &a, &b).unwrap();
        let pi = ms.hodge_split(Basis::Pi, &a, &b).unwrap();
        assert!(close(&sig, &direct, &pts) < TOL, "sigma degree {deg}");
        assert!(close(&pi, &direct, &pts) < TOL, "pi degree {deg}");
        assert!(close(&sig, &pi, &pts) < TOL, "sigma vs pi degree {deg}");
        if !direct.0.meta().is_null() {
            assert!(sig.0.meta().twist_x);
        }
    }
}

#[test]
fn volume_form_splits() {
    let (ms, pts, _) = nonregular(15);
    let direct = ms.kappa_direct().unwrap();
    for b in [Basis::Sigma, Basis::Pi] {
        let k = ms.kappa_split(b).unwrap();
        assert!(rel_dist(&k.1, &direct.1, &pts) < TOL, "{b:?}");
        assert!(fields::max_abs(&direct.0, &pts) < 1e-14);
    }
    let (ms, pts, _) = regular(16);
    let direct = ms.kappa_direct().unwrap();
    let k = ms.kappa_split(Basis::Regular).unwrap();
    assert!(rel_dist(&k.1, &direct.1, &pts) < TOL);
}

#[test]
fn reciprocal_fields_and_shift_relations() {
    let (ms, pts, _) = nonregular(17);
    for x in &pts {
        let o = ms.observer_at(*x).unwrap();
        let fr = &o.frame;
        let om = fr.omega();
        let iw = relsplit::exterior::interior(&o.w_dag, &om).unwrap();
        assert!((iw.get(0) - 1.0).abs() < 1e-12);
        let iw2 = relsplit::exterior::interior(&fr.w(), &o.omega_dag).unwrap();
        assert!((iw2.get(0) - 1.0).abs() < 1e-12);
        let recon = fr.sigma(&o.shift).unwrap().try_add(&o.w_dag).unwrap();
        assert!(recon.dist(&fr.w()) < 1e-12);
        let recon = fr.pi_star(&o.nu).unwrap().try_add(&o.omega_dag).unwrap();
        assert!(recon.dist(&om) < 1e-12);
        // ν = N⁻² h_Σ(N⃗) = N⁻†² h_Π(N⃗)
        let hs = o.h_sigma.riesz(&o.shift).unwrap().scale(o.n_inv.get(0).powi(2));
        let hp = o.h_pi.riesz(&o.shift).unwrap().scale(o.n_inv_dag.get(0).powi(2));
        assert!(hs.dist(&o.nu) < 1e-12);
        assert!(hp.dist(&o.nu) < 1e-12);
        assert!(o.shift.max_abs() > 1e-4, "test metric should be nonregular");
        assert!(o.xi < 1.0 && o.xi > 0.0, "ξ = {}", o.xi);
        assert!((o.xi - o.n.get(0) / o.n_dag.get(0)).abs() < 1e-14);
    }
}

#[test]
fn observer_tags() {
    let (ms, _, _) = nonregular(18);
    assert_eq!(ms.lapse().meta().dim, Dim::L);
    assert_eq!(ms.lapse().meta().valued, Valued::COALG);
    assert_eq!(ms.lapse_inv().meta().valued, Valued::ALG);
    assert_eq!(ms.lapse_dag().meta().dim, Dim::L);
    assert_eq!(ms.lapse_inv_dag().meta().dim, Dim::L.inv());
    assert_eq!(ms.xi().meta().valued, Valued::SCALAR);
    assert_eq!(ms.shift().meta().valued, Valued::COALG);
    assert_eq!(ms.shift().meta().dim, Dim::NONE);
    assert_eq!(ms.shift_form().meta().valued, Valued::ALG);
    assert_eq!(ms.h_sigma().dim(), Dim::L.pow(2));
    assert_eq!(ms.four_velocity().meta().dim, pd::VELOCITY);
}

#[test]
fn tilted_connection_on_minkowski_gives_reciprocal_lorentz_factor() {
    // ω = dt - v dx: |ω|² = 1 - v², N = 1, so ξ = √(1 - v²).
    let v = 0.6;
    let mut gm = Form64::zero(Meta::new(BASE, 1).valued(Valued::ALG)).unwrap();
    gm.set(0b0010, -v);
    let s = SplittingStructure::new(ALL_AXES, 0, Slot::G, fields::constant(gm)).unwrap();
    let g = constant_tensor(relsplit::exterior::Tensor2::from_fn(ALL_AXES, Dim::L.pow(2), |i, j| {
        if i != j {
            0.0
        } else if i == 0 {
            1.0
        } else {
            -1.0
        }
    }));
    let ms = MetricSplitting::new(s, g, 1.0).unwrap();
    let o = ms.observer_at([0.0, 0.1, 0.2, 0.3]).unwrap();
    assert!((o.xi - (1.0 - v * v).sqrt()).abs() < 1e-15);
    assert!((o.n.get(0) - 1.0).abs() < 1e-15);
    // h_Σ along x: -g(∂x + v∂t, ∂x + v∂t) = 1 - v².
    assert!((o.h_sigma.g.at(0, 0) - (1.0 - v * v)).abs() < 1e-15);
    // h_Π is the Euclidean metric: the spatial block of g⁻¹ is untouched.
    assert!((o.h_pi.g.at(0, 0) - 1.0).abs() < 1e-15);
}

#[test]
fn regular_splitting_reduces_all_variants() {
    let (ms, pts, mut r) = regular(19);
    assert!(ms.check_regular(&pts, 1e-12).is_ok());
    assert!(tensor_max_dist(&ms.h_sigma(), &ms.h_pi(), &pts) < 1e-12);
    for x in &pts {
        let o = ms.observer_at(*x).unwrap();
        assert!((o.xi - 1.0).abs() < 1e-12);
        assert!(o.nu.max_abs() < 1e-12);
    }
    for deg in 0..=4 {
        let (k, l) = split_vector(&mut r, deg);
        let direct = ms.riesz_direct(&k, &l).unwrap();
        let (a, b) = split_form(&mut r, deg);
        let hdirect = ms.hodge_direct(&a, &b).unwrap();
        let idirect = ms.riesz_inv_direct(&a, &b).unwrap();
        for basis in [Basis::Regular, Basis::Sigma, Basis::Pi] {
            assert!(close(&ms.riesz_split(basis, &k, &l).unwrap(), &direct, &pts) < TOL);
            assert!(close(&ms.hodge_split(basis, &a, &b).unwrap(), &hdirect, &pts) < TOL);
            assert!(close(&ms.riesz_inv_split(basis, &a, &b).unwrap(), &idirect, &pts) < TOL);
        }
    }
    let (nr, pts2, _) = nonregular(20);
    assert!(nr.check_regular(&pts2, 1e-9).is_err());
}

#[test]
fn regular_matrices_are_diagonal() {
    let (ms, pts, mut r) = regular(21);
    let (k, _) = split_vector(&mut r, 2);
    let (_, l) = split_vector(&mut r, 2);
    let only_k = ms.riesz_split(Basis::Regular, &k, &fields::null()).unwrap();
    let only_l = ms.riesz_split(Basis::Regular, &fields::null(), &l).unwrap();
    assert!(fields::max_abs(&only_k.1, &pts) == 0.0);
    assert!(fields::max_abs(&only_l.0, &pts) == 0.0);
    let direct = ms.riesz_direct(&k, &fields::null()).unwrap();
    assert!(fields::max_abs(&direct.1, &pts) < 1e-12);
}

#[test]
fn degenerate_or_spacelike_fields_are_rejected() {
    let g = constant_tensor(relsplit::exterior::Tensor2::from_fn(ALL_AXES, Dim::L.pow(2), |i, j| {
        if i != j {
            0.0
        } else if i == 1 {
            1.0
        } else {
            -1.0
        }
    }));
    let s = SplittingStructure::natural(ALL_AXES, 0, Slot::G);
    let ms = MetricSplitting::new(s.clone(), g.clone(), 1.0).unwrap();
    assert!(ms.observer_at([0.0; 4]).is_err());
    assert!(MetricSplitting::new(s, g, -1.0).is_err());
}

#[test]
fn kinematic_cross_relations_on_regular_splitting() {
    let (ms, pts, mut r) = regular(22);
    let u = ms.four_velocity();
    let mu = ms.mu().unwrap();
    for x in &pts {
        let n2 = relsplit::exterior::interior(&u.at(*x), &mu.at(*x)).unwrap().get(0);
        assert!((n2 - C0 * C0).abs() < 1e-12, "|u|² = {n2}");
    }
    let acc = ms.acceleration().unwrap();
    assert!(rel_dist(&acc, &ms.acceleration_structure().unwrap(), &pts) < TOL);
    assert_eq!(acc.meta().valued, Valued::COALG);
    let eta = ms.vorticity().unwrap();
    assert!(rel_dist(&eta, &ms.vorticity_structure().unwrap(), &pts) < TOL);
    let (two_eta, delta) = ms.dmu_split().unwrap();
    assert!(rel_dist(&two_eta, &fields::scale(&eta, 2.0), &pts) < TOL);
    assert!(rel_dist(&delta, &acc, &pts) < TOL);
    let lam = ms.expansion().unwrap();
    assert!(tensor_max_dist(&lam, &ms.expansion_structure().unwrap(), &pts) < TOL);
    assert!(relsplit::metric::tensor_max_abs(&lam, &pts) > 1e-3);
    let sigma = ms.shear().unwrap();
    for x in &pts {
        let o = ms.observer_at(*x).unwrap();
        let tr = o.h_sigma.ginv.trace_with(&tensor_at(&sigma, *x));
        assert!(tr.abs() < 1e-12);
    }
    let dk = ms.proper_time_d(&ms.kappa3().unwrap()).unwrap();
    let lk = fields::times(&ms.expansion_scalar().unwrap(), &ms.kappa3().unwrap()).unwrap();
    assert!(rel_dist(&dk, &lk, &pts) < TOL);
    let a = scalar_form(&mut r, BASE, 2);
    let dt = ms.proper_time_d(&a).unwrap();
    for x in &pts {
        let o = ms.observer_at(*x).unwrap();
        let f = C0 / o.n.get(0);
        let fd = fields::fd_partial(a.as_ref(), *x, 0, 1e-5).scale(f);
        assert!(dt.at(*x).dist(&fd) < 1e-7);
    }
}

#[test]
fn expanding_metric_expansion_scalar() {
    // g = diag(L², -e^{2at}, -e^{2at}, -e^{2at}): √det h = e^{3at}, ∂_τ = (c₀/L)∂_t.
    let (a, l) = (0.7, 2.0);
    let g = relsplit::fields::closure_tensor(ALL_AXES, Dim::L.pow(2), false, move |p| {
        let e = (p[0] * (2.0 * a)).exp();
        let z = relsplit::Hyper::constant(0.0);
        let mut m = vec![z; 16];
        m[0] = relsplit::Hyper::constant(l * l);
        for i in 1..4 {
            m[i * 5] = -e;
        }
        m
    })
    .unwrap();
    let ms = MetricSplitting::new(SplittingStructure::natural(ALL_AXES, 0, Slot::G), g, C0).unwrap();
    let mut r = rng(23);
    let pts = points(&mut r, 10, 0.5);
    let ls = ms.expansion_scalar().unwrap();
    for x in &pts {
        assert!((ls.at(*x).get(0) - 3.0 * a * C0 / l).abs() < 1e-12);
    }
    let dk = ms.proper_time_d(&ms.kappa3().unwrap()).unwrap();
    let lk = fields::times(&ls, &ms.kappa3().unwrap()).unwrap();
    assert!(rel_dist(&dk, &lk, &pts) < 1e-12);
    assert!(tensor_max_dist(&ms.expansion().unwrap(), &ms.expansion_structure().unwrap(), &pts) < 1e-12);
}

#[test]
fn proxy_map_round_trips_and_conjugates_d_matrix() {
    let (ms, pts, mut r) = regular(24);
    for deg in 1..=3 {
        let (a, b) = split_form(&mut r, deg);
        let (pa, pb) = ms.proxy(&a, &b).unwrap();
        assert_eq!(pb.meta().valued, Valued::SCALAR);
        let back = ms.proxy_inv(&pa, &pb).unwrap();
        assert!(rel_dist(&back.1, &b, &pts) < 1e-12);
        let (da, db) = ms.s.d_matrix(&a, &b).unwrap();
        let want = ms.proxy(&da, &db).unwrap();
        let got = ms.proxy_d_matrix(&pa, &pb).unwrap();
        assert!(close(&got, &want, &pts) < TOL, "degree {deg}");
    }
    // (2η̄, δ̄) is the proxy split of dμ.
    let (two_eta, delta) = ms.dmu_split().unwrap();
    let p = ms.proxy(&two_eta, &delta).unwrap();
    assert!(rel_dist(&p.0, &ms.eta2_bar().unwrap(), &pts) < TOL);
    assert!(rel_dist(&p.1, &ms.delta_bar().unwrap(), &pts) < TOL);
}

#[test]
fn proxy_d_matrix_reduces_for_constant_lapse_natural_structure() {
    let g = constant_tensor(relsplit::exterior::Tensor2::from_fn(ALL_AXES, Dim::L.pow(2), |i, j| {
        if i != j {
            0.0
        } else if i == 0 {
            4.0
        } else {
            -1.0
        }
    }));
    let ms = MetricSplitting::new(SplittingStructure::natural(ALL_AXES, 0, Slot::G), g, C0).unwrap();
    let mut r = rng(25);
    let pts = points(&mut r, 8, 0.5);
    let a = scalar_form(&mut r, BASE, 1);
    let b = scalar_form(&mut r, BASE, 0);
    let b = fields::scale_dim(&b, 1.0, pd::VELOCITY);
    let (t, u) = ms.proxy_d_matrix(&a, &b).unwrap();
    assert!(rel_dist(&t, &fields::d(&a), &pts) < 1e-12);
    let want = fields::sub(&ms.proper_time_d(&a).unwrap(), &fields::d(&b)).unwrap();
    assert!(rel_dist(&u, &want, &pts) < 1e-12);
}

#[test]
fn proxy_lie_matrix_matches_direct_route() {
    let (ms, pts, mut r) = regular(26);
    let k = random_vector(&mut r, Meta::new(BASE, 1), poly_spec()).unwrap();
    let l = fields::vector(Meta::new(BASE, 0).dim(Dim::T), |p| vec![p[1] * 0.3 + p[0] * p[2]]).unwrap();
    let (k2, lt) = ms.proxy_vec_inv(&k, &l).unwrap();
    assert_eq!(lt.meta().valued, Valued::ALG);
    let v = ms.s.unsplit_vec(&k2, &lt).unwrap();
    for deg in 1..=3 {
        let (a, b) = split_form(&mut r, deg);
        let gamma = ms.s.unsplit(&a, &b).unwrap();
        let (da, db) = ms.s.split(&lie(&v, &gamma).unwrap()).unwrap();
        let want = ms.proxy(&da, &db).unwrap();
        let (pa, pb) = ms.proxy(&a, &b).unwrap();
        let got = ms.proxy_lie_matrix(&k, &l, &pa, &pb).unwrap();
        assert!(rel_dist(&got.0, &want.0, &pts) < TOL, "top degree {deg}");
        assert!(rel_dist(&got.1, &want.1, &pts) < TOL, "bottom degree {deg}");
    }
}

#[test]
fn proxy_metric_splits_match_conjugated_routes() {
    for (ms, pts, mut r, basis) in [
        {
            let (a, b, c) = regular(27);
            (a, b, c, Basis::Regular)
        },
        {
            let (a, b, c) = nonregular(28);
            (a, b, c, Basis::Sigma)
        },
    ] {
        for deg in 0..=4 {
            let (k, l) = split_vector(&mut r, deg);
            let (pk, pl) = ms.proxy_vec(&k, &l).unwrap();
            let want = ms.riesz_split(Basis::Sigma, &k, &l).unwrap();
            let want = ms.proxy(&want.0, &want.1).unwrap();
            assert!(close(&ms.riesz_proxy(basis, &pk, &pl).unwrap(), &want, &pts) < TOL, "riesz {basis:?} {deg}");

            let (a, b) = split_form(&mut r, deg);
            let (pa, pb) = ms.proxy(&a, &b).unwrap();
            let want = ms.riesz_inv_split(Basis::Sigma, &a, &b).unwrap();
            let want = ms.proxy_vec(&want.0, &want.1).unwrap();
            assert!(close(&ms.riesz_inv_proxy(basis, &pa, &pb).unwrap(), &want, &pts) < TOL, "inverse {basis:?} {deg}");

            let want = ms.hodge_split(Basis::Sigma, &a, &b).unwrap();
            let want = ms.proxy(&want.0, &want.1).unwrap();
            assert!(close(&ms.hodge_proxy(basis, &pa, &pb).unwrap(), &want, &pts) < TOL, "hodge {basis:?} {deg}");
        }
        assert!(ms.hodge_proxy(Basis::Pi, &fields::null(), &fields::null()).is_err());
    }
}

#[test]
fn classification_with_metric() {
    let mink = constant_tensor(relsplit::exterior::Tensor2::from_fn(ALL_AXES, Dim::L.pow(2), |i, j| {
        if i != j {
            0.0
        } else if i == 0 {
            1.0
        } else {
            -1.0
        }
    }));
    let ms = MetricSplitting::new(SplittingStructure::natural(ALL_AXES, 0, Slot::G), mink, 1.0).unwrap();
    let mut r = rng(29);
    let pts = points(&mut r, 6, 0.5);
    let f = ms.classify(&pts, 1e-9).unwrap();
    assert!(f.premetric.natural && f.premetric.holonomic && f.regular && f.metric && f.standard && f.stationary);

    // Time-independent regular principal structure: stationary, and not
    // metric because the lapse varies in space.
    let gamma =
        fields::form(Meta::new(BASE, 1).valued(Valued::ALG), |p| vec![p[2] * 0.3, -p[1] * 0.3, p[3] * 0.0]).unwrap();
    let s = SplittingStructure::new(ALL_AXES, 0, Slot::G, gamma).unwrap();
    let n = |p: &relsplit::fields::Pt| p[1] * 0.2 + 1.5;
    let h = |p: &relsplit::fields::Pt| {
        let z = relsplit::Hyper::constant(0.0);
        let o = relsplit::Hyper::constant(1.0);
        [[o, z, z], [z, p[1] * p[1] * 0.1 + 1.0, z], [z, z, o]]
    };
    let ms = MetricSplitting::new(s.clone(), regular_metric(&s, n, h), 1.0).unwrap();
    let f = ms.classify(&pts, 1e-9).unwrap();
    assert!(f.regular && f.stationary && f.premetric.principal && !f.metric && !f.premetric.flat);

    // A time-dependent lapse breaks stationarity and the equivalent conditions.
    let n2 = |p: &relsplit::fields::Pt| p[0] * 0.2 + 1.5;
    let ms = MetricSplitting::new(s.clone(), regular_metric(&s, n2, h), 1.0).unwrap();
    let f = ms.classify(&pts, 1e-9).unwrap();
    assert!(f.regular && !f.stationary);
    assert!(fields::max_abs(&ms.s.partial_g(&ms.lapse_inv()), &pts) > 1e-3);

    let (nr, pts2, _) = nonregular(30);
    assert!(!nr.classify(&pts2, 1e-9).unwrap().regular);
}

#[test]
fn riesz_on_minkowski_lowers_with_signature() {
    let mink = constant_tensor(relsplit::exterior::Tensor2::from_fn(ALL_AXES, Dim::L.pow(2), |i, j| {
        if i != j {
            0.0
        } else if i == 0 {
            1.0
        } else {
            -1.0
        }
    }));
    let dt = fields::constant(MultiVec64::unit(ALL_AXES, 1, 1.0).unwrap());
    let dx = fields::constant(MultiVec64::unit(ALL_AXES, 2, 1.0).unwrap());
    let x = [0.0; 4];
    assert_eq!(riesz(&mink, &dt).unwrap().at(x).get(1), 1.0);
    assert_eq!(riesz(&mink, &dx).unwrap().at(x).get(2), -1.0);
    assert_eq!(riesz(&mink, &dx).unwrap().meta().dim, Dim::L.pow(2));
}
