//! Bodies of the verification suites.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{
    coalg_form, pair_dist, poly_spec, random_lapse_and_h, random_metric, random_structure, regular_metric, rel_dist,
    scalar_form, Run, BASE,
};
use crate::dims::{pd, Dim};
use crate::em::{self, MaxwellFields};
use crate::error::{Error, Result};
use crate::exterior::{self, Co, CoForm, Contra, Ext, Kind, Meta, Metric, MultiVec, Slot, Tensor2, Valued, ALL_AXES};
use crate::fields::{
    self, add, d, lie, max_abs, partial, random_form, random_vector, FieldExt, FormRef, PolySpec, TensorRef, VecRef,
};
use crate::hyper::Hyper;
use crate::metric::{tensor_max_dist, Basis, MetricSplitting};
use crate::scenarios::{self, Chart, Order, Params, Scenario};
use crate::splitting::{integrate_g, SplittingStructure, Transition};

/// Speed of light of the synthetic metrics.
const C0: f64 = 1.3;
/// Vacuum impedance of the synthetic fields.
const Z0: f64 = 2.7;
/// Relative tolerance of the identity checks.
const TOL: f64 = 1e-10;
/// Relative tolerance of the splitting bijection.
const EXACT: f64 = 1e-12;

fn rand_ext<K: Kind>(rng: &mut ChaCha8Rng, axes: u8, deg: u8) -> Result<Ext<f64, K>> {
    let meta = Meta::new(axes, deg);
    Ext::from_vec(meta, (0..meta.len()).map(|_| rng.random_range(-1.0..1.0)).collect())
}

fn sign(k: u32) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Random symmetric matrix `base + eps·R` on the given axes.
fn rand_metric(rng: &mut ChaCha8Rng, axes: u8, base: &[f64], eps: f64) -> Result<Metric<f64>> {
    let n = base.len();
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = eps * rng.random_range(-1.0..1.0) + if i == j { base[i] } else { 0.0 };
            m[i * n + j] = v;
            m[j * n + i] = v;
        }
    }
    Metric::new(Tensor2 { axes, m, dim: Dim::L.pow(2), upper: false, valued: Valued::SCALAR })
}

/// Pointwise exterior and interior algebra.
pub(crate) fn algebra(run: &mut Run, rng: &mut ChaCha8Rng) {
    let n = run.points();
    let degs = |max: u8| (0..=max).flat_map(move |p| (0..=max - p).map(move |q| (p, q)));
    run.below("wedge-associativity", "exterior product is associative", EXACT, || {
        let mut w = 0.0f64;
        for _ in 0..n {
            for (p, q) in degs(4) {
                for r in 0..=4 - p - q {
                    let a = rand_ext::<Co>(rng, ALL_AXES, p)?;
                    let b = rand_ext::<Co>(rng, ALL_AXES, q)?;
                    let c = rand_ext::<Co>(rng, ALL_AXES, r)?;
                    let l = exterior::wedge(&exterior::wedge(&a, &b)?, &c)?;
                    let rr = exterior::wedge(&a, &exterior::wedge(&b, &c)?)?;
                    w = w.max(l.dist(&rr));
                }
            }
        }
        Ok(w)
    });
    run.below("graded-commutativity", "a∧b = (-1)^(pq) b∧a", EXACT, || {
        let mut w = 0.0f64;
        for _ in 0..n {
            for (p, q) in degs(4) {
                let a = rand_ext::<Co>(rng, ALL_AXES, p)?;
                let b = rand_ext::<Co>(rng, ALL_AXES, q)?;
                let ab = exterior::wedge(&a, &b)?;
                let ba = exterior::wedge(&b, &a)?.scale(sign(u32::from(p * q)));
                w = w.max(ab.dist(&ba));
            }
        }
        Ok(w)
    });
    run.below("interior-antiderivation", "interior product is an antiderivation", EXACT, || {
        let mut w = 0.0f64;
        for _ in 0..n {
            for (p, q) in degs(4).filter(|(p, q)| *p >= 1 && *q >= 1) {
                let v = rand_ext::<Contra>(rng, ALL_AXES, 1)?;
                let a = rand_ext::<Co>(rng, ALL_AXES, p)?;
                let b = rand_ext::<Co>(rng, ALL_AXES, q)?;
                let l = exterior::interior(&v, &exterior::wedge(&a, &b)?)?;
                let r1 = exterior::wedge(&exterior::interior(&v, &a)?, &b)?;
                let r2 = exterior::wedge(&a, &exterior::interior(&v, &b)?)?.scale(sign(u32::from(p)));
                w = w.max(l.dist(&r1.try_add(&r2)?));
            }
        }
        Ok(w)
    });
    run.below("interior-nilpotent", "contracting twice with one vector vanishes", EXACT, || {
        let mut w = 0.0f64;
        for _ in 0..n {
            for p in 2..=4 {
                let v = rand_ext::<Contra>(rng, ALL_AXES, 1)?;
                let a = rand_ext::<Co>(rng, ALL_AXES, p)?;
                w = w.max(exterior::interior(&v, &exterior::interior(&v, &a)?)?.max_abs());
            }
        }
        Ok(w)
    });
    run.below("contraction-pairing", "a 1-form applied to a vector is the component sum", EXACT, || {
        let mut w = 0.0f64;
        for _ in 0..n {
            let v = rand_ext::<Contra>(rng, ALL_AXES, 1)?;
            let a = rand_ext::<Co>(rng, ALL_AXES, 1)?;
            let sum: f64 = (0..4).map(|i| v.get(1 << i) * a.get(1 << i)).sum();
            w = w.max((exterior::interior(&v, &a)?.get(0) - sum).abs());
        }
        Ok(w)
    });
    run.below("riesz-round-trip", "inverse Riesz map undoes the Riesz map", EXACT, || {
        let mut w = 0.0f64;
        for _ in 0..n {
            let g = rand_metric(rng, ALL_AXES, &[2.0, -1.0, -1.0, -1.0], 0.2)?;
            for p in 1..=3 {
                let v = rand_ext::<Contra>(rng, ALL_AXES, p)?;
                w = w.max(g.riesz_inv(&g.riesz(&v)?)?.dist(&v));
            }
        }
        Ok(w)
    });
    run.below("hodge-involution", "double Hodge star is sign(det g)(-1)^(p(n-p))", EXACT, || {
        let mut w = 0.0f64;
        for _ in 0..n {
            for (axes, base) in [(BASE, &[1.0, 1.0, 1.0][..]), (ALL_AXES, &[2.0, -1.0, -1.0, -1.0][..])] {
                let g = rand_metric(rng, axes, base, 0.2)?;
                let nn = base.len() as u32;
                let s = if base[0] < 0.0 || nn == 4 { -1.0 } else { 1.0 };
                for p in 0..=nn as u8 {
                    let a = rand_ext::<Co>(rng, axes, p)?;
                    let hh = g.hodge(&g.hodge(&a)?)?;
                    let k = u32::from(p) * (nn - u32::from(p));
                    w = w.max(hh.dist(&a.scale(s * sign(k))));
                }
            }
        }
        Ok(w)
    });
    run.below("hodge-inner-product", "a∧*b equals the metric pairing times the volume form", EXACT, || {
        let mut w = 0.0f64;
        for _ in 0..n {
            let g = rand_metric(rng, ALL_AXES, &[2.0, -1.0, -1.0, -1.0], 0.2)?;
            let a = rand_ext::<Co>(rng, ALL_AXES, 1)?;
            let b = rand_ext::<Co>(rng, ALL_AXES, 1)?;
            let lhs = exterior::wedge(&a, &g.hodge(&b)?)?;
            let ip = exterior::interior(&g.riesz_inv(&b)?, &a)?.get(0);
            w = w.max(lhs.dist(&g.kappa().scale(ip)));
        }
        Ok(w)
    });
    run.below("value-pairing", "algebra and coalgebra values pair to scalars", 0.0, || {
        let a = rand_ext::<Co>(rng, BASE, 1)?.with_valued(Valued::ALG);
        let b = rand_ext::<Co>(rng, BASE, 1)?.with_valued(Valued::COALG);
        let ok = exterior::wedge(&a, &b)?.valued() == Valued::SCALAR && exterior::wedge(&a, &a)?.is_null();
        Ok(if ok { 0.0 } else { 1.0 })
    });
}

/// Exterior derivative, Lie derivative and exactness of derivatives.
pub(crate) fn derivative_identities(run: &mut Run, rng: &mut ChaCha8Rng) {
    let pts = run.cube(run.points(), 0.8);
    let pts = &pts;
    run.below("d-squared", "dd = 0", TOL, || {
        let mut w = 0.0f64;
        for deg in 0..=2 {
            w = w.max(max_abs(&d(&d(&scalar_form(rng, ALL_AXES, deg)?)), pts));
        }
        Ok(w)
    });
    run.below("leibniz", "d(a∧b) = da∧b + (-1)^p a∧db", TOL, || {
        let mut w = 0.0f64;
        for (p, q) in [(0, 1), (1, 1), (1, 2), (2, 1), (0, 3)] {
            let a = scalar_form(rng, ALL_AXES, p)?;
            let b = scalar_form(rng, ALL_AXES, q)?;
            let lhs = d(&fields::wedge(&a, &b)?);
            let r1 = fields::wedge(&d(&a), &b)?;
            let r2 = fields::scale(&fields::wedge(&a, &d(&b))?, sign(u32::from(p)));
            w = w.max(rel_dist(&lhs, &add(&r1, &r2)?, pts));
        }
        Ok(w)
    });
    run.below("lie-scalar", "Lie derivative of a function is its directional derivative", TOL, || {
        let v = random_vector(rng, Meta::new(ALL_AXES, 1), poly_spec())?;
        let f = scalar_form(rng, ALL_AXES, 0)?;
        let l = lie(&v, &f)?;
        let df: Vec<_> = (0..4).map(|j| partial(&f, j)).collect();
        Ok(pts.iter().fold(0.0, |w, x| {
            let vx = v.at(*x);
            let want: f64 = (0..4).map(|j| vx.get(1 << j) * df[j].at(*x).get(0)).sum();
            w.max((l.at(*x).get(0) - want).abs() / (1.0 + want.abs()))
        }))
    });
    run.below("lie-one-form", "Lie derivative of a 1-form in coordinates", TOL, || {
        let v = random_vector(rng, Meta::new(ALL_AXES, 1), poly_spec())?;
        let a = scalar_form(rng, ALL_AXES, 1)?;
        let l = lie(&v, &a)?;
        let da: Vec<_> = (0..4).map(|j| partial(&a, j)).collect();
        let dv: Vec<_> = (0..4).map(|j| partial(&v, j)).collect();
        Ok(pts.iter().fold(0.0, |mut w, x| {
            let (vx, ax, lx) = (v.at(*x), a.at(*x), l.at(*x));
            let (dax, dvx): (Vec<_>, Vec<_>) = (0..4).map(|j| (da[j].at(*x), dv[j].at(*x))).unzip();
            for i in 0..4 {
                let want: f64 =
                    (0..4).map(|j| vx.get(1 << j) * dax[j].get(1 << i) + ax.get(1 << j) * dvx[i].get(1 << j)).sum();
                w = w.max((lx.get(1 << i) - want).abs() / (1.0 + want.abs()));
            }
            w
        }))
    });
    run.below("finite-difference", "exact partials agree with a fourth-order difference", 1e-8, || {
        let a = scalar_form(rng, ALL_AXES, 2)?;
        let mut w = 0.0f64;
        for axis in 0..4 {
            let p = partial(&a, axis);
            for x in pts.iter().take(20) {
                w = w.max(p.at(*x).dist(&fields::fd_partial(a.as_ref(), *x, axis, 1e-3)));
            }
        }
        Ok(w)
    });
    run.below("analytic-derivatives", "first and mixed second partials of sin(tx)e^y + z^3", EXACT, || {
        let f = fields::scalar(ALL_AXES, Dim::NONE, |p| (p[0] * p[1]).sin() * p[2].exp() + p[3].powi(3));
        let ft = partial(&f, 0);
        let (ftx, fty, fzz) = (partial(&ft, 1), partial(&ft, 2), partial(&partial(&f, 3), 3));
        Ok(pts.iter().fold(0.0, |w, x| {
            let [t, xx, y, z] = *x;
            let (s, c, e) = ((t * xx).sin(), (t * xx).cos(), y.exp());
            let want = [xx * c * e, c * e - t * xx * s * e, xx * c * e, 6.0 * z];
            let got = [ft.at(*x).get(0), ftx.at(*x).get(0), fty.at(*x).get(0), fzz.at(*x).get(0)];
            (0..4).fold(w, |w, k| w.max((got[k] - want[k]).abs()))
        }))
    });
}

fn split_form(rng: &mut ChaCha8Rng, deg: u8) -> Result<(FormRef, FormRef)> {
    let a = if deg == 4 { fields::null() } else { scalar_form(rng, BASE, deg)? };
    let b = if deg == 0 { fields::null() } else { coalg_form(rng, deg - 1)? };
    Ok((a, b))
}

fn split_vector(rng: &mut ChaCha8Rng, deg: u8) -> Result<(VecRef, VecRef)> {
    let k = if deg == 4 { fields::null() } else { random_vector(rng, Meta::new(BASE, deg), poly_spec())? };
    let l = if deg == 0 {
        fields::null()
    } else {
        random_vector(rng, Meta::new(BASE, deg - 1).valued(Valued::ALG), poly_spec())?
    };
    Ok((k, l))
}

fn constant_gamma(c: [f64; 3]) -> Result<SplittingStructure> {
    let g = CoForm::from_vec(Meta::new(BASE, 1).valued(Valued::ALG), c.to_vec())?;
    SplittingStructure::new(ALL_AXES, 0, Slot::G, fields::constant(g))
}

fn closure_gamma(f: impl Fn(&fields::Pt) -> Vec<Hyper> + Send + Sync + 'static) -> Result<SplittingStructure> {
    SplittingStructure::new(ALL_AXES, 0, Slot::G, fields::form(Meta::new(BASE, 1).valued(Valued::ALG), f)?)
}

/// Premetric families with their expected `(flat, principal, holonomic, natural)` flags.
fn structure_families() -> Result<Vec<(&'static str, SplittingStructure, [bool; 4])>> {
    // Γ = d_x f with f = 0.3xy + 0.2xz² + sin y.
    let exact = |p: &fields::Pt| vec![p[2] * 0.3 + p[3] * p[3] * 0.2, p[1] * 0.3 + p[2].cos(), p[1] * p[3] * 0.4];
    Ok(vec![
        ("natural", SplittingStructure::natural(ALL_AXES, 0, Slot::G), [true, true, true, true]),
        ("constant", constant_gamma([0.3, -0.2, 0.5])?, [true, true, true, false]),
        ("exact", closure_gamma(exact)?, [true, true, true, false]),
        (
            "exact-times-t",
            closure_gamma(move |p| exact(p).into_iter().map(|g| g * p[0]).collect())?,
            [true, false, false, false],
        ),
        ("rotation", closure_gamma(|p| vec![p[2] * -0.3, p[1] * 0.3, p[0] * 0.0])?, [false, true, false, false]),
    ])
}

/// Splitting maps, split derivative and operator identities.
pub(crate) fn splitting(run: &mut Run, rng: &mut ChaCha8Rng) {
    let pts = run.cube(run.points(), 0.8);
    let pts = &pts;
    let few = &pts[..pts.len().min(2)];
    let s = match random_structure(rng, poly_spec()) {
        Ok(s) => s,
        Err(e) => return run.below("structure", "random Christoffel form is admissible", 0.0, || Err(e)),
    };
    let s = &s;
    for deg in 0..=4u8 {
        run.below(
            format!("bijection.degree-{deg}"),
            "splitting then unsplitting is the identity (200 forms)",
            EXACT,
            || {
                let mut w = 0.0f64;
                for _ in 0..200 {
                    let g = scalar_form(rng, ALL_AXES, deg)?;
                    let (a, b) = s.split(&g)?;
                    w = w.max(rel_dist(&g, &s.unsplit(&a, &b)?, few));
                }
                Ok(w)
            },
        );
        run.below(
            format!("bijection-split.degree-{deg}"),
            "unsplitting then splitting is the identity (200 pairs)",
            EXACT,
            || {
                let mut w = 0.0f64;
                for _ in 0..200 {
                    let x = split_form(rng, deg)?;
                    let y = s.split(&s.unsplit(&x.0, &x.1)?)?;
                    w = w.max(pair_dist(&x, &y, few));
                }
                Ok(w)
            },
        );
    }
    let gammas: Vec<(&str, Result<SplittingStructure>)> = vec![
        ("zero", Ok(SplittingStructure::natural(ALL_AXES, 0, Slot::G))),
        ("constant", constant_gamma([0.4, -0.3, 0.25])),
        ("polynomial", Ok(s.clone())),
    ];
    for (name, st) in gammas {
        for deg in 0..=3u8 {
            run.below(
                format!("d-matrix.{name}.degree-{deg}"),
                "split exterior derivative matrix equals S⁻* d S*",
                TOL,
                || {
                    let st = st.clone()?;
                    let (a, b) = split_form(rng, deg)?;
                    let m = st.d_matrix(&a, &b)?;
                    let direct = st.split(&d(&st.unsplit(&a, &b)?))?;
                    Ok(pair_dist(&m, &direct, pts).max(pair_dist(&st.d_matrix_factorized(&a, &b)?, &direct, pts)))
                },
            );
        }
    }
    run.below("commutator-d-dg", "[D, ∂_G] = χ∧∂_G", TOL, || {
        let chi = s.chi();
        let mut w = 0.0f64;
        for deg in 0..=2 {
            let a = scalar_form(rng, BASE, deg)?;
            let lhs = fields::sub(&s.cov_d(&s.partial_g(&a))?, &s.partial_g(&s.cov_d(&a)?))?;
            w = w.max(rel_dist(&lhs, &fields::wedge(&chi, &s.partial_g(&a))?, pts));
        }
        Ok(w)
    });
    run.below("d-squared-curvature", "D² = -Ω∧∂_G", TOL, || {
        let om = s.curvature()?;
        let mut w = 0.0f64;
        for deg in 0..=1 {
            let a = scalar_form(rng, BASE, deg)?;
            let dd = s.cov_d(&s.cov_d(&a)?)?;
            w = w.max(rel_dist(&dd, &fields::neg(&fields::wedge(&om, &s.partial_g(&a))?), pts));
        }
        Ok(w)
    });
    run.below("bianchi-variance", "∂_G Ω = Dχ", TOL, || Ok(max_abs(&s.bianchi()?.0, pts)));
    run.below("bianchi-curvature", "DΩ + Ω∧χ = 0", TOL, || Ok(max_abs(&s.bianchi()?.1, pts)));
    run.below("curvature-formula", "Ω = dΓ - Γ∧χ", TOL, || {
        let alt = fields::sub(&d(&s.gamma), &fields::wedge(&s.gamma, &s.chi())?)?;
        Ok(rel_dist(&s.curvature()?, &alt, pts))
    });
    run.below("split-of-d-omega", "(Ω, χ) is the split of dω", TOL, || {
        Ok(pair_dist(&(s.curvature()?, s.chi()), &s.split(&d(&s.omega()))?, pts))
    });
    run.below("anholonomity", "(Ω, χ) equal the anholonomity of the adapted frame", TOL, || {
        Ok(pair_dist(&(s.curvature()?, s.chi()), &s.anholonomity()?, pts))
    });
    run.below("change-of-connection", "connection change matches resplitting", EXACT, || {
        let s2 = random_structure(rng, poly_spec())?;
        let g = scalar_form(rng, ALL_AXES, 2)?;
        let (a1, b1) = s.split(&g)?;
        Ok(pair_dist(&s.change_connection(&s2, &a1, &b1)?, &s2.split(&g)?, pts))
    });
    run.below("operator-matrices", "split interior, Lie and wedge matrices match the direct route", TOL, || {
        let k = random_vector(rng, Meta::new(BASE, 1), poly_spec())?;
        let l = random_vector(rng, Meta::new(BASE, 0).valued(Valued::ALG), poly_spec())?;
        let v = s.unsplit_vec(&k, &l)?;
        let (a, b) = (scalar_form(rng, BASE, 2)?, coalg_form(rng, 1)?);
        let g = s.unsplit(&a, &b)?;
        let p = scalar_form(rng, ALL_AXES, 1)?;
        let (pa, pb) = s.split(&p)?;
        Ok(pair_dist(&s.interior_matrix(&k, &l, &a, &b)?, &s.split(&fields::interior(&v, &g)?)?, pts)
            .max(pair_dist(&s.lie_matrix(&k, &l, &a, &b)?, &s.split(&lie(&v, &g)?)?, pts))
            .max(pair_dist(&s.wedge_matrix(&pa, &pb, &a, &b)?, &s.split(&fields::wedge(&p, &g)?)?, pts)))
    });
    run.below("classification.families", "premetric flags of the reference structures", 0.0, || {
        let mut bad = 0;
        for (_, st, want) in structure_families()? {
            let f = st.classify(pts, 1e-9)?;
            bad += usize::from([f.flat, f.principal, f.holonomic, f.natural] != want);
        }
        Ok(bad as f64)
    });
    run.below("classification.implications", "natural ⇒ holonomic ⇒ flat and principal", 0.0, || {
        let mut structures: Vec<_> = structure_families()?.into_iter().map(|f| f.1).collect();
        for i in 0..12 {
            let degree = (i % 3) as u32;
            structures.push(random_structure(rng, PolySpec { degree, scale: 0.3 })?);
        }
        let mut bad = 0;
        for st in structures {
            let f = st.classify(pts, 1e-9)?;
            bad += usize::from((f.natural && !f.holonomic) || (f.holonomic && !(f.flat && f.principal)));
        }
        Ok(bad as f64)
    });
}

/// Reparametrizations `t_i = φ(x, t_j)`, flagged when affine in time.
pub fn transition_maps() -> Vec<(&'static str, Transition, bool)> {
    vec![
        ("affine", Transition::new(ALL_AXES, 0, Slot::G, |p| p[0] * 1.5 + p[1].powi(3) * 0.4 - 0.1), true),
        ("shift", Transition::new(ALL_AXES, 0, Slot::G, |p| p[0] + p[1].sin() * 0.3 + p[2] * p[3] * 0.2), true),
        ("nonlinear", Transition::new(ALL_AXES, 0, Slot::G, |p| p[0] + (p[0] + p[1]).sin() * 0.15 + p[2] * 0.2), false),
    ]
}

/// Variance-rule residual `|Φ*χ_i - χ_j - ∂_G τ_j|` for one transition.
pub fn variance_rule_residual(si: &SplittingStructure, t: &Transition, pts: &[[f64; 4]]) -> Result<f64> {
    let sj = t.structure(si)?;
    let rhs = add(&sj.chi(), &sj.partial_g(&t.tau()?))?;
    Ok(rel_dist(&t.pull(&si.chi()), &rhs, pts))
}

/// Changes of fiber chart.
pub(crate) fn transitions(run: &mut Run, rng: &mut ChaCha8Rng) {
    let pts = run.cube(run.points(), 0.7);
    let pts = &pts;
    let si = match random_structure(rng, poly_spec()) {
        Ok(s) => s,
        Err(e) => return run.below("structure", "random Christoffel form is admissible", 0.0, || Err(e)),
    };
    let si = &si;
    for (name, t, affine) in transition_maps() {
        let t = &t;
        run.below(format!("{name}.monotone"), "transition increases along the fiber", 0.0, || {
            t.check_monotone(pts)?;
            Ok(0.0)
        });
        run.below(format!("{name}.split-commutes"), "Φ* commutes with splitting", TOL, || {
            let sj = t.structure(si)?;
            let mut w = 0.0f64;
            for deg in 1..=3 {
                let g = scalar_form(rng, ALL_AXES, deg)?;
                let (ai, bi) = si.split(&g)?;
                let (aj, bj) = sj.split(&t.pull_4d(&g)?)?;
                w = w.max(rel_dist(&t.pull(&ai), &aj, pts)).max(rel_dist(&t.pull(&bi), &bj, pts));
            }
            Ok(w)
        });
        run.below(format!("{name}.curvature"), "Φ* preserves the curvature", TOL, || {
            Ok(rel_dist(&t.pull(&si.curvature()?), &t.structure(si)?.curvature()?, pts))
        });
        run.below(format!("{name}.christoffel"), "Φ*Γ_i = Γ_j + τ_j", TOL, || {
            let sj = t.structure(si)?;
            Ok(rel_dist(&t.pull(&si.gamma), &add(&sj.gamma, &t.tau()?)?, pts))
        });
        run.below(format!("{name}.d-matrix"), "Φ* intertwines the split derivative matrices", TOL, || {
            let sj = t.structure(si)?;
            let (a, b) = (scalar_form(rng, BASE, 1)?, coalg_form(rng, 0)?);
            let (ja, jb) = sj.d_matrix(&t.pull(&a), &t.pull(&b))?;
            let (ia, ib) = si.d_matrix(&a, &b)?;
            Ok(pair_dist(&(ja, jb), &(t.pull(&ia), t.pull(&ib)), pts))
        });
        if affine {
            run.below(format!("{name}.variance"), "Φ*χ_i = χ_j + ∂_G τ_j", TOL, || {
                variance_rule_residual(si, t, pts)
            });
        } else {
            run.above(
                format!("{name}.variance-departs"),
                "a time-nonlinear map leaves the affine variance rule",
                1e-6,
                || variance_rule_residual(si, t, pts),
            );
        }
        run.below(format!("{name}.fiber-integral"), "fiber integrals are chart independent", TOL, || {
            let a = coalg_form(rng, 1)?;
            let mut w = 0.0f64;
            for x in pts.iter().take(3) {
                let (lo, hi) = (-0.4, 0.6);
                let pa = t.map_point([lo, x[1], x[2], x[3]])[0];
                let pb = t.map_point([hi, x[1], x[2], x[3]])[0];
                let i = integrate_g(&a, 0, Slot::G, *x, pa, pb, 1e-12)?;
                let j = integrate_g(&t.pull(&a), 0, Slot::G, *x, lo, hi, 1e-12)?;
                w = w.max(i.dist(&j));
            }
            Ok(w)
        });
    }
}

fn nonregular_ms(rng: &mut ChaCha8Rng) -> Result<MetricSplitting> {
    let gamma = random_form(rng, Meta::new(BASE, 1).valued(Valued::ALG), PolySpec { degree: 2, scale: 0.2 })?;
    let s = SplittingStructure::new(ALL_AXES, 0, Slot::G, gamma)?;
    MetricSplitting::new(s, random_metric(rng, 0.1)?, C0)
}

fn regular_ms(rng: &mut ChaCha8Rng) -> Result<MetricSplitting> {
    let gamma = random_form(rng, Meta::new(BASE, 1).valued(Valued::ALG), PolySpec { degree: 2, scale: 0.3 })?;
    let s = SplittingStructure::new(ALL_AXES, 0, Slot::G, gamma)?;
    let (n, h) = random_lapse_and_h(rng, 0.1);
    let g = regular_metric(&s, n, h)?;
    MetricSplitting::new(s, g, C0)
}

fn basis_name(b: Basis) -> &'static str {
    match b {
        Basis::Regular => "regular",
        Basis::Sigma => "connection-induced",
        Basis::Pi => "fiber-induced",
    }
}

/// Split Riesz and Hodge operators on regular and nonregular splittings.
pub(crate) fn metric(run: &mut Run, rng: &mut ChaCha8Rng) {
    let pts = run.cube(run.points(), 0.5);
    let pts = &pts;
    let (nr, rg) = match (nonregular_ms(rng), regular_ms(rng)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            return run.below("setup", "random metric splittings are admissible", 0.0, || Err(e))
        }
    };
    let cases = [
        ("nonregular", &nr, &[Basis::Sigma, Basis::Pi][..]),
        ("regular", &rg, &[Basis::Regular, Basis::Sigma, Basis::Pi][..]),
    ];
    for (case, ms, bases) in cases {
        for &b in bases {
            let bn = basis_name(b);
            run.below(format!("{case}.riesz.{bn}"), "split Riesz matrix equals S⁻* g S⁻¹", TOL, || {
                let mut w = 0.0f64;
                for deg in 0..=4 {
                    let (k, l) = split_vector(rng, deg)?;
                    w = w.max(pair_dist(&ms.riesz_split(b, &k, &l)?, &ms.riesz_direct(&k, &l)?, pts));
                }
                Ok(w)
            });
            run.below(
                format!("{case}.riesz-inverse.{bn}"),
                "split inverse Riesz matrix equals S g⁻¹ S*",
                TOL,
                || {
                    let mut w = 0.0f64;
                    for deg in 0..=4 {
                        let (a, c) = split_form(rng, deg)?;
                        w = w.max(pair_dist(&ms.riesz_inv_split(b, &a, &c)?, &ms.riesz_inv_direct(&a, &c)?, pts));
                    }
                    Ok(w)
                },
            );
            run.below(format!("{case}.hodge.{bn}"), "split Hodge matrix equals S⁻* *₄ S*", TOL, || {
                let mut w = 0.0f64;
                for deg in 0..=4 {
                    let (a, c) = split_form(rng, deg)?;
                    w = w.max(pair_dist(&ms.hodge_split(b, &a, &c)?, &ms.hodge_direct(&a, &c)?, pts));
                }
                Ok(w)
            });
            run.below(format!("{case}.volume.{bn}"), "split volume form equals the direct split", TOL, || {
                let direct = ms.kappa_direct()?;
                Ok(pair_dist(&ms.kappa_split(b)?, &direct, pts))
            });
        }
    }
    run.below("regular.variants-reduce", "nonregular matrices reduce to the regular ones without shift", TOL, || {
        let mut w = 0.0f64;
        for deg in 0..=4 {
            let (k, l) = split_vector(rng, deg)?;
            let (a, c) = split_form(rng, deg)?;
            let r = rg.riesz_split(Basis::Regular, &k, &l)?;
            let h = rg.hodge_split(Basis::Regular, &a, &c)?;
            for b in [Basis::Sigma, Basis::Pi] {
                w = w.max(pair_dist(&rg.riesz_split(b, &k, &l)?, &r, pts));
                w = w.max(pair_dist(&rg.hodge_split(b, &a, &c)?, &h, pts));
            }
        }
        Ok(w.max(tensor_max_dist(&rg.h_sigma(), &rg.h_pi(), pts)))
    });
    run.below("regular.shift-vanishes", "regular splitting has ν = 0 and ξ = 1", EXACT, || {
        let mut w = 0.0f64;
        for x in pts {
            let o = rg.observer_at(*x)?;
            w = w.max(o.nu.max_abs()).max((o.xi - 1.0).abs());
        }
        Ok(w)
    });
    run.below("nonregular.xi-bound", "0 < ξ < 1 off the regular case", 0.0, || {
        let mut bad = 0;
        for x in pts {
            let o = nr.observer_at(*x)?;
            bad += usize::from(!(o.xi > 0.0 && o.xi < 1.0));
        }
        Ok(bad as f64)
    });
    run.below("nonregular.reciprocal-fields", "ω(w†) = 1, ω†(w) = 1 and w = Σ N⃗ + w†", EXACT, || {
        let mut w = 0.0f64;
        for x in pts {
            let o = nr.observer_at(*x)?;
            let fr = &o.frame;
            w = w.max((exterior::interior(&o.w_dag, &fr.omega())?.get(0) - 1.0).abs());
            w = w.max((exterior::interior(&fr.w(), &o.omega_dag)?.get(0) - 1.0).abs());
            w = w.max(fr.sigma(&o.shift)?.try_add(&o.w_dag)?.dist(&fr.w()));
            w = w.max(fr.pi_star(&o.nu)?.try_add(&o.omega_dag)?.dist(&fr.omega()));
        }
        Ok(w)
    });
    run.below("tilted-minkowski.xi", "ω = dt - v dx on Minkowski space gives ξ = √(1 - v²)", EXACT, || {
        let v = 0.6;
        let s = constant_gamma([-v, 0.0, 0.0])?;
        let ms = MetricSplitting::new(s, minkowski(1.0), 1.0)?;
        let o = ms.observer_at([0.0, 0.1, 0.2, 0.3])?;
        Ok((o.xi - (1.0 - v * v).sqrt()).abs().max((o.h_pi.g.at(0, 0) - 1.0).abs()))
    });
    for (case, ms, basis) in [("regular", &rg, Basis::Regular), ("nonregular", &nr, Basis::Sigma)] {
        run.below(
            format!("{case}.proxy-operators"),
            "proxy Riesz and Hodge operators conjugate the split ones",
            TOL,
            || {
                let mut w = 0.0f64;
                for deg in 0..=4 {
                    let (k, l) = split_vector(rng, deg)?;
                    let (pk, pl) = ms.proxy_vec(&k, &l)?;
                    let want = ms.riesz_split(Basis::Sigma, &k, &l)?;
                    w = w.max(pair_dist(&ms.riesz_proxy(basis, &pk, &pl)?, &ms.proxy(&want.0, &want.1)?, pts));
                    let (a, b) = split_form(rng, deg)?;
                    let (pa, pb) = ms.proxy(&a, &b)?;
                    let want = ms.hodge_split(Basis::Sigma, &a, &b)?;
                    w = w.max(pair_dist(&ms.hodge_proxy(basis, &pa, &pb)?, &ms.proxy(&want.0, &want.1)?, pts));
                }
                Ok(w)
            },
        );
    }
}

/// `diag(l², -1, -1, -1)`.
fn minkowski(l: f64) -> TensorRef {
    let mut m = vec![0.0; 16];
    m[0] = l * l;
    for i in 1..4 {
        m[i * 5] = -1.0;
    }
    fields::constant_tensor(Tensor2 { axes: ALL_AXES, m, dim: Dim::L.pow(2), upper: false, valued: Valued::SCALAR })
}

/// Relative distance with the second argument as the scale.
fn rel_to(a: &FormRef, b: &FormRef, pts: &[[f64; 4]]) -> f64 {
    fields::max_dist(a, b, pts) / (1.0 + max_abs(b, pts))
}

/// Kinematic parameters against their structure formulas.
pub(crate) fn kinematics(run: &mut Run, rng: &mut ChaCha8Rng) {
    let p = run.params();
    let n = run.points();
    let seed = run.sobol_seed();
    let mut cases: Vec<(&str, Result<MetricSplitting>, Vec<[f64; 4]>)> = Vec::new();
    for s in [scenarios::rotating(p), scenarios::expanding(p)] {
        match s {
            Ok(s) => cases.push((s.name, Ok(s.ms.clone()), s.sample(n, seed))),
            Err(e) => cases.push(("scenario", Err(e), Vec::new())),
        }
    }
    cases.push(("random-regular", regular_ms(rng), run.cube(n, 0.5)));
    for (name, ms, pts) in cases {
        let pts = &pts;
        run.below(format!("{name}.acceleration"), "δ̃ = c₀N(χ - N⁻¹DN)", TOL, || {
            let ms = ms.clone()?;
            Ok(rel_to(&ms.acceleration()?, &ms.acceleration_structure()?, pts))
        });
        run.below(format!("{name}.vorticity"), "2η = c₀NΩ", TOL, || {
            let ms = ms.clone()?;
            Ok(rel_to(&fields::scale(&ms.vorticity()?, 2.0), &fields::scale(&ms.vorticity_structure()?, 2.0), pts))
        });
        run.below(format!("{name}.expansion"), "2λ = ∂_τ h", TOL, || {
            let ms = ms.clone()?;
            Ok(tensor_max_dist(&ms.expansion()?, &ms.expansion_structure()?, pts))
        });
        run.below(format!("{name}.volume-rate"), "∂_τ κ₃ = λ κ₃", TOL, || {
            let ms = ms.clone()?;
            let k3 = ms.kappa3()?;
            Ok(rel_to(&ms.proper_time_d(&k3)?, &fields::times(&ms.expansion_scalar()?, &k3)?, pts))
        });
        run.below(format!("{name}.dmu-split"), "the split of dμ is (2η, δ̃)", TOL, || {
            let ms = ms.clone()?;
            let (two_eta, delta) = ms.dmu_split()?;
            Ok(rel_to(&two_eta, &fields::scale(&ms.vorticity()?, 2.0), pts).max(rel_to(
                &delta,
                &ms.acceleration()?,
                pts,
            )))
        });
    }
}

fn potential(rng: &mut ChaCha8Rng) -> Result<FormRef> {
    random_form(rng, Meta::new(ALL_AXES, 1).dim(pd::F), PolySpec { degree: 3, scale: 0.5 })
}

fn flat_with(gamma: FormRef, rng: &mut ChaCha8Rng) -> Result<(MetricSplitting, MaxwellFields)> {
    let s = SplittingStructure::new(ALL_AXES, 0, Slot::G, gamma)?;
    let g = minkowski(1.0);
    let m = MaxwellFields::vacuum(&g, potential(rng)?, Z0)?;
    Ok((MetricSplitting::new(s, g, C0)?, m))
}

fn const_vec(c: [f64; 4]) -> VecRef {
    fields::vector(Meta::new(ALL_AXES, 1), move |_| c.iter().map(|x| Hyper::constant(*x)).collect())
        .expect("degree one")
}

fn axis_vec(axis: u8) -> VecRef {
    let mut c = [0.0; 4];
    c[axis as usize] = 1.0;
    const_vec(c)
}

fn rotation() -> VecRef {
    fields::vector(Meta::new(ALL_AXES, 1), |p| vec![Hyper::constant(0.0), -p[2], p[1], Hyper::constant(0.0)])
        .expect("degree one")
}

fn dilation() -> VecRef {
    fields::vector(Meta::new(ALL_AXES, 1), |p| {
        vec![Hyper::constant(0.0), p[1], Hyper::constant(0.0), Hyper::constant(0.0)]
    })
    .expect("degree one")
}

fn worst(fs: &[FormRef], pts: &[[f64; 4]]) -> f64 {
    fs.iter().map(|f| max_abs(f, pts)).fold(0.0, f64::max)
}

/// Body force `X_n` for the stationary Killing fields `∂_t`, `∂_φ`, `∂_z` of
/// the rotating scenario, with a smooth rest-frame potential.
pub fn rotating_body_force(p: Params, pts: &[[f64; 4]]) -> Result<Vec<(&'static str, f64, f64)>> {
    let s = scenarios::rotating(p)?;
    let m = scenarios::static_fields(Chart::Cylindrical, &s.ms.g, &p, scenarios::gaussian(1.0, 2.0))?;
    let mut out = Vec::new();
    for (name, axis) in [("t", 0u8), ("phi", 2), ("z", 3)] {
        let n = axis_vec(axis);
        out.push((name, em::killing_defect(&s.ms.g, &n, pts)?, max_abs(&m.body_force(&n)?, pts)));
    }
    Ok(out)
}

/// Maxwell equations, energy-momentum and balance laws.
pub(crate) fn em(run: &mut Run, rng: &mut ChaCha8Rng) {
    let pts = run.cube(run.points(), 0.5);
    let pts = &pts;
    let setup = (|| -> Result<_> {
        let ms = nonregular_ms(rng)?;
        let m = MaxwellFields::vacuum(&ms.g, potential(rng)?, Z0)?;
        let x = em::split_em(&ms.s, &m)?;
        Ok((ms, m, x))
    })();
    let (ms, m, x) = match setup {
        Ok(v) => v,
        Err(e) => return run.below("setup", "random vacuum fields are admissible", 0.0, || Err(e)),
    };
    let (ms, m, x) = (&ms, &m, &x);
    let res = em::maxwell_residuals(&ms.s, x);
    for (i, law) in em::MAXWELL_LAWS.iter().enumerate() {
        run.below(
            format!("split.{}", law.replace(' ', "-")),
            "split Maxwell equation with D, ∂_G, Ω and χ",
            TOL,
            || Ok(max_abs(&res.clone()?[i], pts)),
        );
    }
    run.below("plain-d", "Maxwell equations in plain-d form by two routes", TOL, || {
        let a = em::maxwell_residuals_alt(&ms.s, x)?;
        let b = em::maxwell_residuals_alt_via_connection(&ms.s, x)?;
        Ok(worst(&a, pts).max(worst(&b, pts)))
    });
    run.below("proxy", "proxy Maxwell equations", TOL, || {
        let px = x.to_proxy(ms)?;
        Ok(worst(&em::proxy_maxwell_residuals(ms, &px)?, pts))
    });
    run.above("wrong-charge-detected", "a perturbed charge violates Gauss's law", 1e-3, || {
        let mut y = x.clone();
        let extra = fields::retwist(&fields::scale_dim(&scalar_form(rng, BASE, 3)?, 1.0, pd::H), true, false);
        y.rho = add(&y.rho, &extra)?;
        Ok(max_abs(&em::maxwell_residuals(&ms.s, &y)?[2], pts))
    });
    run.below("round-trip", "split fields reassemble and proxies invert", TOL, || {
        let back = x.unsplit(&ms.s)?;
        let mut w = 0.0f64;
        for (u, v) in [(&m.a, &back.a), (&m.f, &back.f), (&m.h, &back.h), (&m.j, &back.j)] {
            w = w.max(rel_dist(u, v, pts));
        }
        let p = x.to_proxy(ms)?.from_proxy(ms)?;
        Ok(w.max(rel_dist(&p.e, &x.e, pts)).max(rel_dist(&p.j, &x.j, pts)))
    });
    run.below("constitutive.regular", "regular constitutive relations match the space-time Hodge star", TOL, || {
        let rs = regular_ms(rng)?;
        let mr = MaxwellFields::vacuum(&rs.g, potential(rng)?, Z0)?;
        let xr = em::split_em(&rs.s, &mr)?;
        let (dd, hh) = em::constitutive_regular(&rs, Z0, &xr.e, &xr.b, pts, 1e-12)?;
        let mut w = rel_dist(&dd, &xr.d, pts).max(rel_dist(&hh, &xr.h, pts));
        for p in pts.iter().take(5) {
            let (dc, hc) = em::constitutive_components(&rs, Z0, *p, &xr.e.at(*p), &xr.b.at(*p))?;
            w = w.max(dc.dist(&xr.d.at(*p))).max(hc.dist(&xr.h.at(*p)));
        }
        let px = xr.to_proxy(&rs)?;
        let (dp, hp) = em::constitutive_proxy(&rs, Z0, &px.e, &px.b)?;
        Ok(w.max(rel_dist(&dp, &px.d, pts)).max(rel_dist(&hp, &px.h, pts)))
    });
    run.below("energy-momentum.matrix", "split energy-momentum matrix equals the direct split of T_n", TOL, || {
        let k = random_vector(rng, Meta::new(BASE, 1), poly_spec())?;
        let l = random_vector(rng, Meta::new(BASE, 0).valued(Valued::ALG), poly_spec())?;
        let mut w = 0.0f64;
        for (k, l) in [(k.clone(), fields::null()), (fields::null(), l.clone()), (k, l)] {
            let mat = em::energy_momentum(x, &k, &l)?.matrix()?;
            w = w.max(pair_dist(&mat, &em::energy_momentum_direct(&ms.s, m, &k, &l)?, pts));
            let ff = em::four_force(x, &k, &l)?;
            let fd = em::four_force_direct(&ms.s, m, &k, &l)?;
            w = w.max(max_abs(&fd.0, pts)).max(rel_dist(&add(&ff.f, &ff.r)?, &fd.1, pts));
        }
        Ok(w)
    });
    run.below("force-balance", "R_n - dT_n - X_n = 0", TOL, || {
        let n = random_vector(rng, Meta::new(ALL_AXES, 1), poly_spec())?;
        Ok(max_abs(&m.force_balance(&n)?, pts))
    });
    let p = run.params();
    let rpts = match scenarios::rotating(p) {
        Ok(s) => s.sample(run.points(), run.sobol_seed()),
        Err(_) => Vec::new(),
    };
    let body = rotating_body_force(p, &rpts);
    for (i, axis) in ["t", "phi", "z"].iter().enumerate() {
        run.below(
            format!("body-force.rotating.{axis}"),
            "X_n vanishes for Killing n on the rotating scenario",
            TOL,
            || {
                let b = body.clone()?;
                Ok(b[i].1.max(b[i].2))
            },
        );
    }
    run.above("body-force.dilation-detected", "X_n is nonzero for a dilation", 1e-3, || {
        let mf = MaxwellFields::vacuum(&minkowski(1.0), potential(rng)?, Z0)?;
        Ok(max_abs(&mf.body_force(&dilation())?, pts))
    });
    run.below("hodge-commutator", "[L_n, *] = Θ̄_n - ½ tr Θ_n for non-Killing n", 1e-9, || {
        let n = random_vector(rng, Meta::new(ALL_AXES, 1), poly_spec())?;
        let mut w = 0.0f64;
        for a in [m.f.clone(), m.a.clone(), scalar_form(rng, ALL_AXES, 3)?] {
            let (lhs, rhs) = em::hodge_commutator(&ms.g, &n, &a)?;
            w = w.max(rel_dist(&lhs, &rhs, pts));
        }
        Ok(w)
    });
    run.below("balance.killing", "momentum and energy balances sum to zero for Killing n", TOL, || {
        let gamma = random_form(rng, Meta::new(BASE, 1).valued(Valued::ALG), PolySpec { degree: 2, scale: 0.3 })?;
        let (fs, fm) = flat_with(gamma, rng)?;
        let fx = em::split_em(&fs.s, &fm)?;
        let mut w = 0.0f64;
        for n in [const_vec([0.7, 1.0, -0.4, 0.2]), rotation()] {
            let (k, l) = fs.s.split_vec(&n)?;
            let b = em::balance_residuals(&fs, &fx, &k, &l, pts, 1e-9)?;
            w = w.max(max_abs(&add(&b.momentum, &b.energy)?, pts));
        }
        Ok(w)
    });
    run.below("balance.separate", "momentum and energy balances hold separately for constant Γ", TOL, || {
        let (fs, fm) = flat_with(
            fields::constant(CoForm::from_vec(Meta::new(BASE, 1).valued(Valued::ALG), vec![0.2, -0.1, 0.3])?),
            rng,
        )?;
        let fx = em::split_em(&fs.s, &fm)?;
        let k = fields::constant(MultiVec::from_vec(Meta::new(BASE, 1), vec![1.0, -0.5, 0.25])?);
        let l = fields::constant(MultiVec::from_vec(Meta::new(BASE, 0).valued(Valued::ALG), vec![1.0])?);
        let bm = em::balance_residuals(&fs, &fx, &k, &fields::null(), pts, 1e-9)?;
        let be = em::balance_residuals(&fs, &fx, &fields::null(), &l, pts, 1e-9)?;
        Ok(max_abs(&bm.momentum, pts).max(max_abs(&be.energy, pts)))
    });
    run.below("proxy-balance", "proxy momentum and energy balances for a static observer", TOL, || {
        let (fs, fm) = flat_with(
            fields::constant(CoForm::from_vec(Meta::new(BASE, 1).valued(Valued::ALG), vec![0.2, -0.1, 0.3])?),
            rng,
        )?;
        let px = em::split_em(&fs.s, &fm)?.to_proxy(&fs)?;
        let k = fields::constant(MultiVec::from_vec(Meta::new(BASE, 1), vec![0.3, 1.0, 0.0])?);
        let b = em::proxy_balance_residuals(&fs, &px, &k, pts, 1e-9)?;
        Ok(max_abs(&b.momentum, pts).max(max_abs(&b.energy, pts)))
    });
    run.below("proxy-radiation", "proxy balance source term is r = -e∧j", TOL, || {
        let (fs, fm) = flat_with(
            fields::constant(CoForm::from_vec(Meta::new(BASE, 1).valued(Valued::ALG), vec![0.2, -0.1, 0.3])?),
            rng,
        )?;
        let px = em::split_em(&fs.s, &fm)?.to_proxy(&fs)?;
        let r_direct = em::four_force_proxy(&px, &fields::null())?.r;
        let xs = px.from_proxy(&fs)?;
        let one = fields::constant(MultiVec::from_vec(Meta::new(BASE, 0), vec![1.0])?);
        let (_, u) = fs.proxy_vec_inv(&fields::null(), &one)?;
        let rt = em::four_force(&xs, &fields::null(), &u)?.r;
        let (_, rp) = fs.proxy(&rt, &rt)?;
        let e_j = fields::neg(&fields::wedge(&px.e, &px.j)?);
        Ok(rel_dist(&r_direct, &rp, pts).max(rel_dist(&e_j, &rp, pts)))
    });
    run.below("lagrangian-split", "the Lagrangian splits into ½(e∧d - b∧h)", TOL, || {
        let (top, l) = ms.s.split(&m.lagrangian()?)?;
        let oracle = fields::scale(&fields::sub(&fields::wedge(&x.e, &x.d)?, &fields::wedge(&x.b, &x.h)?)?, 0.5);
        let t = if top.meta().is_null() { 0.0 } else { max_abs(&top, pts) };
        Ok(rel_dist(&l, &oracle, pts).max(t))
    });
}

fn oracle_tol(name: &str) -> f64 {
    if name == "minkowski" {
        1e-12
    } else {
        1e-11
    }
}

/// Schiff natural splitting checks: charges, current cancellation and couplings.
pub fn schiff_checks(p: Params, pts: &[[f64; 4]]) -> Result<[(&'static str, f64); 4]> {
    let s = scenarios::schiff_natural(p)?;
    let m = scenarios::static_fields(Chart::Cartesian, &s.ms.g, &p, scenarios::gaussian(1.0, 0.5))?;
    let x = em::split_em(&s.ms.s, &m)?;
    let sf = em::schiff_star_fields(&s.ms, p.z0, &x)?;
    let (pc, mc) = em::schiff_couplings(&s.ms, p.z0, &x)?;
    Ok([
        ("rho-s", max_abs(&sf.rho_s, pts)),
        ("current-cancels", max_abs(&add(&x.j, &sf.j_s)?, pts) / (1.0 + max_abs(&x.j, pts))),
        ("polarization", fields::max_dist(&pc, &sf.p_s, pts)),
        ("magnetization", fields::max_dist(&mc, &sf.m_s, pts)),
    ])
}

/// Built-in scenarios against their closed forms.
pub(crate) fn scenarios(run: &mut Run, _rng: &mut ChaCha8Rng) {
    let p = run.params();
    let (n, seed) = (run.points(), run.sobol_seed());
    for name in scenarios::NAMES {
        let sc: Result<Scenario> = scenarios::by_name(name, p);
        let (sc, pts) = match sc {
            Ok(s) => {
                let pts = s.sample(n, seed);
                (s, pts)
            }
            Err(e) => {
                run.below(format!("{name}.build"), "scenario parameters are admissible", 0.0, || Err(e));
                continue;
            }
        };
        let pts = &pts;
        for o in &sc.oracles {
            run.below(
                format!("{name}.oracle.{}", o.name.replace(' ', "-")),
                "derived field matches its closed form",
                oracle_tol(name),
                || {
                    if !o.tags_match() {
                        return Err(Error::Operand(format!("tags of {} differ from the closed form", o.name)));
                    }
                    Ok(o.residual(pts))
                },
            );
        }
        run.below(format!("{name}.flags"), "classification flags as stated for the scenario", 0.0, || {
            Ok(if sc.ms.classify(pts, 1e-10)? == sc.flags { 0.0 } else { 1.0 })
        });
    }
    run.below("schiff.metric-components", "rotating chart metric at (0.3, 0) for ω = 0.5", 1e-15, || {
        let q = Params { omega: 0.5, c0: 1.0, l: 1.0, ..p };
        let g = crate::metric::tensor_at(&scenarios::schiff_metric(&q), [0.0, 0.3, 0.0, 0.0]);
        Ok((g.at(0, 0) - 0.9775).abs().max((g.at(0, 2) + 0.15).abs()).max(g.at(0, 1).abs()))
    });
    let spts = scenarios::schiff_natural(p).map(|s| s.sample(n, seed)).unwrap_or_default();
    let sc = schiff_checks(p, &spts);
    for (i, (id, tol, anchor)) in [
        ("rho-s", 1e-9, "Schiff charge vanishes"),
        ("current-cancels", 1e-9, "Schiff current cancels the convection current"),
        ("polarization", 1e-10, "Schiff polarization equals its closed form"),
        ("magnetization", 1e-10, "Schiff magnetization equals its closed form"),
    ]
    .into_iter()
    .enumerate()
    {
        run.below(format!("schiff.{id}"), anchor, tol, || Ok(sc.clone()?[i].1));
    }
    let setup = (|| -> Result<_> {
        let s = scenarios::rotating(p)?;
        let sol = scenarios::schiff_solution(p)?;
        let pts = s.smooth_points(n, seed);
        Ok((s, sol, pts))
    })();
    let (rot, sol, smooth) = match setup {
        Ok(v) => v,
        Err(e) => return run.below("sphere-pair.setup", "sphere pair parameters are admissible", 0.0, || Err(e)),
    };
    let (rot, sol, smooth) = (&rot, &sol, &smooth);
    let rpts = rot.sample(n.min(40), seed);
    run.below(
        "rotating.rest-charge-split",
        "rest-frame charge splits into (γ²ρ₀, -βΛ⁻¹ι ρ₀)",
        EXACT,
        || {
            let j = scenarios::rest_charge(&p, |r, z| (-(r * r + z * z)).exp() * (r * 0.5 + 1.0));
            let (rho, jt) = rot.ms.s.split(&j)?;
            let nat = SplittingStructure::natural(ALL_AXES, 0, Slot::G);
            let (rho0, _) = nat.split(&j)?;
            let (er, ej) = scenarios::rest_charge_split(&p, &rho0)?;
            Ok(rel_to(&rho, &er, &rpts).max(rel_to(&fields::neg(&jt), &ej, &rpts)))
        },
    );
    run.below("sphere-pair.axial-pipeline", "axially reduced sphere-pair fields equal the exact solution", TOL, || {
        let x = em::split_em(&rot.ms.s, rot.fields.as_ref().ok_or_else(|| Error::Operand("no fields".into()))?)?;
        let ax = scenarios::axial_reduce(&x, smooth, 1e-10)?;
        let exact = sol.fields(Order::Exact)?;
        let scale = sol.max_field(&exact, smooth).max(1e-300);
        let mut w = worst(&ax.trivial, smooth) / scale;
        for (a, b) in [(&ax.e, &exact.e), (&ax.b, &exact.b), (&ax.h, &exact.h), (&ax.d, &exact.d)] {
            if a.meta() != b.meta() {
                return Err(Error::Operand("reduced field tags differ".into()));
            }
            w = w.max(fields::max_dist(a, b, smooth) / scale);
        }
        Ok(w)
    });
    let exact = sol.fields(Order::Exact);
    let reduced = exact.clone().and_then(|f| scenarios::reduced_residuals(&sol.omega_bar, &f));
    for (i, law) in scenarios::REDUCED_LAWS.iter().enumerate() {
        run.below(
            format!("sphere-pair.{}", law.replace(' ', "-")),
            "exact solution satisfies the reduced equations",
            1e-9,
            || Ok(max_abs(&reduced.clone()?[i], smooth)),
        );
    }
    run.below("sphere-pair.constitutive", "d̄ = Z₀⁻¹γ²Λ*₂ē and its magnetic counterpart", TOL, || {
        Ok(worst(&sol.constitutive_residuals(&exact.clone()?)?, smooth))
    });
    run.below("sphere-pair.sources", "reduced source is (γ², -βΛ⁻¹)ρ̄₀", 0.0, || {
        let (rho, j) = sol.sources(Order::Exact)?;
        Ok(max_abs(&rho, smooth).max(max_abs(&j, smooth)))
    });
    run.below("sphere-pair.closed-coupling", "d(βΛ⁻¹) = 0", EXACT, || {
        Ok(max_abs(&d(&scenarios::RotatingOracle { p }.beta_lambda_inv()), smooth))
    });
    run.above("sphere-pair.first-order-inexact", "the first-order fields miss the γ² factors", 1e-6, || {
        let r = scenarios::reduced_residuals(&sol.omega_bar, &sol.fields(Order::First)?)?;
        Ok(max_abs(&r[0], smooth))
    });
    let outside: Vec<_> =
        rot.smooth_points(4 * n, seed).into_iter().filter(|x| x[1].hypot(x[3]) > p.r2 * 1.01).collect();
    let outside = &outside;
    for order in [Order::Zeroth, Order::First, Order::Exact] {
        let name = format!("{order:?}").to_lowercase();
        run.below(format!("sphere-pair.outside.{name}"), "all fields vanish outside the outer sphere", 0.0, || {
            if outside.is_empty() {
                return Err(Error::Param("no samples outside the outer sphere".into()));
            }
            Ok(sol.max_field(&sol.fields(order)?, outside))
        });
    }
    run.below("sphere-pair.outside.split", "split space-time fields vanish outside the outer sphere", 0.0, || {
        let x = em::split_em(&rot.ms.s, rot.fields.as_ref().ok_or_else(|| Error::Operand("no fields".into()))?)?;
        Ok(worst(&[x.e, x.b, x.d, x.h], outside))
    });
}

/// Equations whose summands are audited for dimensional homogeneity.
pub fn audits(p: Params, seed: u64) -> Result<Vec<em::Audit>> {
    let mut rng = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    let ms = nonregular_ms(&mut rng)?;
    let m = MaxwellFields::vacuum(&ms.g, potential(&mut rng)?, Z0)?;
    let n = random_vector(&mut rng, Meta::new(ALL_AXES, 1), poly_spec())?;
    let mut out = em::audit(&ms, Z0, &m, &n)?;
    out.extend(scenarios::schiff_solution(p)?.audit()?);
    Ok(out)
}

/// Dimensional homogeneity of every implemented equation.
pub(crate) fn dims(run: &mut Run, rng: &mut ChaCha8Rng) {
    let seed = rng.random();
    match audits(run.params(), seed) {
        Ok(list) => {
            for a in list {
                let id = format!("audit.{}", a.id.replace(' ', "-"));
                run.below(id, "all summands share one dimension", 0.0, || {
                    Ok(if a.check().is_ok() { 0.0 } else { 1.0 })
                });
            }
        }
        Err(e) => run.below("audit", "audited equations can be assembled", 0.0, || Err(e)),
    }
    run.above("injection.sum", "a flux plus an excitation is rejected", 0.5, || {
        let f = fields::scale_dim(&scalar_form(rng, ALL_AXES, 2)?, 1.0, pd::F);
        let h = fields::scale_dim(&scalar_form(rng, ALL_AXES, 2)?, 1.0, pd::H);
        let detected = em::Audit::of("injected", &[f.clone(), h.clone()]).check().is_err() && add(&f, &h).is_err();
        Ok(if detected { 1.0 } else { 0.0 })
    });
    run.above("injection.charge", "a charge of the wrong dimension is rejected by Gauss's law", 0.5, || {
        let ms = nonregular_ms(rng)?;
        let m = MaxwellFields::vacuum(&ms.g, potential(rng)?, Z0)?;
        let mut x = em::split_em(&ms.s, &m)?;
        x.rho = fields::scale_dim(&x.rho, 1.0, pd::Z0);
        Ok(match em::maxwell_residuals(&ms.s, &x) {
            Err(Error::Dim(_)) => 1.0,
            _ => 0.0,
        })
    });
    run.above("injection.potential", "a potential of the wrong dimension is rejected", 0.5, || {
        let g = minkowski(1.0);
        let wrong = fields::scale_dim(&potential(rng)?, 1.0, pd::Z0);
        Ok(if MaxwellFields::vacuum(&g, wrong, Z0).is_err() { 1.0 } else { 0.0 })
    });
}
