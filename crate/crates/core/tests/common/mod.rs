//! Shared helpers for integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relsplit::exterior::{Meta, Slot, Valued, ALL_AXES};
use relsplit::fields::{self, random_form, FieldExt, FormRef, PolySpec};
use relsplit::splitting::SplittingStructure;

/// Base axes of the standard 3+1 chart with time on axis 0.
pub const BASE: u8 = ALL_AXES & !1;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform points in `[-r, r]^4`.
pub fn points(rng: &mut ChaCha8Rng, n: usize, r: f64) -> Vec<[f64; 4]> {
    (0..n).map(|_| std::array::from_fn(|_| rng.random_range(-r..r))).collect()
}

pub fn poly_spec() -> PolySpec {
    PolySpec { degree: 3, scale: 0.5 }
}

/// Splitting structure with a random time-dependent Christoffel form.
pub fn random_structure(rng: &mut ChaCha8Rng) -> SplittingStructure {
    let g = random_form(rng, Meta::new(BASE, 1).valued(Valued::ALG), poly_spec()).unwrap();
    SplittingStructure::new(ALL_AXES, 0, Slot::G, g).unwrap()
}

pub fn scalar_form(rng: &mut ChaCha8Rng, axes: u8, deg: u8) -> FormRef {
    random_form(rng, Meta::new(axes, deg), poly_spec()).unwrap()
}

pub fn coalg_form(rng: &mut ChaCha8Rng, deg: u8) -> FormRef {
    random_form(rng, Meta::new(BASE, deg).valued(Valued::COALG), poly_spec()).unwrap()
}

/// Relative distance of two fields over sample points.
pub fn rel_dist<K: relsplit::exterior::Kind>(
    a: &std::sync::Arc<dyn fields::Field<K>>,
    b: &std::sync::Arc<dyn fields::Field<K>>,
    pts: &[[f64; 4]],
) -> f64 {
    let mut worst: f64 = 0.0;
    for x in pts {
        let (u, v) = (a.at(*x), b.at(*x));
        let s = 1.0 + u.max_abs().max(v.max_abs());
        worst = worst.max(u.dist(&v) / s);
    }
    worst
}

/// Random Lorentzian metric near `diag(2, -1, -1, -1)`, dimension `L²`.
pub fn random_metric(rng: &mut ChaCha8Rng, eps: f64) -> relsplit::fields::TensorRef {
    use relsplit::fields::{closure_tensor, random_poly, PolySpec};
    let polys: Vec<_> = (0..10).map(|_| random_poly(rng, PolySpec { degree: 2, scale: eps })).collect();
    closure_tensor(ALL_AXES, relsplit::Dim::L.pow(2), false, move |p| {
        let mut m = vec![relsplit::Hyper::constant(0.0); 16];
        let mut k = 0;
        for i in 0..4 {
            for j in i..4 {
                let diag = if i != j {
                    0.0
                } else if i == 0 {
                    2.0
                } else {
                    -1.0
                };
                let v = polys[k](p) + diag;
                m[i * 4 + j] = v;
                m[j * 4 + i] = v;
                k += 1;
            }
        }
        m
    })
    .unwrap()
}

/// Metric `N²ω⊗ω - Π*h` that makes the given structure regular.
///
/// `n` and `h` are closures for the lapse and a positive-definite base metric
/// over the sorted base axes.
pub fn regular_metric(
    s: &SplittingStructure,
    n: impl Fn(&relsplit::fields::Pt) -> relsplit::Hyper + Send + Sync + 'static,
    h: impl Fn(&relsplit::fields::Pt) -> [[relsplit::Hyper; 3]; 3] + Send + Sync + 'static,
) -> relsplit::fields::TensorRef {
    use relsplit::fields::closure_tensor;
    let gamma = s.gamma.clone();
    closure_tensor(ALL_AXES, relsplit::Dim::L.pow(2), false, move |p| {
        let g = gamma.eval(p);
        let om = [relsplit::Hyper::constant(1.0), g.get(0b0010), g.get(0b0100), g.get(0b1000)];
        let nn = n(p);
        let hh = h(p);
        let mut m = vec![relsplit::Hyper::constant(0.0); 16];
        for i in 0..4 {
            for j in 0..4 {
                let mut v = nn * nn * om[i] * om[j];
                if i > 0 && j > 0 {
                    v -= hh[i - 1][j - 1];
                }
                m[i * 4 + j] = v;
            }
        }
        m
    })
    .unwrap()
}

/// Random positive-definite base metric closure and lapse closure.
#[allow(clippy::type_complexity)]
pub fn random_lapse_and_h(
    rng: &mut ChaCha8Rng,
    eps: f64,
) -> (
    impl Fn(&relsplit::fields::Pt) -> relsplit::Hyper + Send + Sync + Clone + 'static,
    impl Fn(&relsplit::fields::Pt) -> [[relsplit::Hyper; 3]; 3] + Send + Sync + Clone + 'static,
) {
    use relsplit::fields::{random_poly, PolySpec};
    let np = random_poly(rng, PolySpec { degree: 2, scale: eps });
    let hp: Vec<_> = (0..6).map(|_| random_poly(rng, PolySpec { degree: 2, scale: eps })).collect();
    let n = move |p: &relsplit::fields::Pt| np(p) + 1.5;
    let h = move |p: &relsplit::fields::Pt| {
        let mut m = [[relsplit::Hyper::constant(0.0); 3]; 3];
        let mut k = 0;
        for i in 0..3 {
            for j in i..3 {
                let v = hp[k](p) + if i == j { 1.0 } else { 0.0 };
                m[i][j] = v;
                m[j][i] = v;
                k += 1;
            }
        }
        m
    };
    (n, h)
}
