//! Verification suites shared by the command-line driver and the acceptance
//! test.
//!
//! Each suite evaluates a family of identities on seeded random fields or on
//! the built-in scenarios and returns one [`Check`] per identity. Spatial
//! samples come from a scrambled Sobol sequence; polynomial coefficients from
//! one seeded generator per suite.

mod suites;

pub use suites::{audits, rotating_body_force, schiff_checks, transition_maps, variance_rule_residual};

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dims::Dim;
use crate::error::{Error, Result};
use crate::exterior::{Kind, Meta, Slot, Valued, ALL_AXES};
use crate::fields::{self, closure_tensor, random_form, random_poly, FieldExt, FormRef, PolySpec, Pt, TensorRef};
use crate::hyper::Hyper;
use crate::scenarios::Params;
use crate::splitting::SplittingStructure;

/// Names of the available suites, in execution order.
pub const SUITES: [&str; 9] =
    ["algebra", "derivative-identities", "splitting", "transitions", "metric", "kinematics", "em", "scenarios", "dims"];

/// Base axes of the standard chart with time on axis 0.
pub const BASE: u8 = ALL_AXES & !1;

/// Direction in which a residual is compared with its tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    /// The residual must not exceed the tolerance.
    Below,
    /// The residual must exceed the tolerance; used for negative tests.
    Above,
}

/// Outcome of one identity check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub suite: String,
    pub id: String,
    /// Human-readable statement of the identity.
    pub anchor: String,
    /// Largest residual over the samples, absent if evaluation failed.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub expect: Expect,
    /// Evaluation error, if any.
    pub error: Option<String>,
    /// Wall time in milliseconds.
    pub wall_ms: f64,
}

impl Check {
    /// True if the residual lies on the required side of the tolerance.
    pub fn passed(&self) -> bool {
        match (self.residual, self.expect) {
            (Some(r), Expect::Below) => r <= self.tolerance,
            (Some(r), Expect::Above) => r > self.tolerance,
            (None, _) => false,
        }
    }
}

/// Inputs shared by all suites.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Settings {
    pub seed: u64,
    /// Number of sample points per check.
    pub points: usize,
    /// Scenario parameters.
    pub params: Params,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { seed: 0, points: 100, params: Params::default() }
    }
}

impl Settings {
    /// Rejects an empty sample or invalid scenario parameters.
    pub fn validate(&self) -> Result<()> {
        if self.points == 0 {
            return Err(Error::Param("points must be at least 1".into()));
        }
        self.params.validate()
    }
}

/// Runs one suite by name.
pub fn run(suite: &str, settings: &Settings) -> Result<Vec<Check>> {
    settings.validate()?;
    let idx = SUITES
        .iter()
        .position(|s| *s == suite)
        .ok_or_else(|| Error::Param(format!("unknown suite {suite:?}; valid suites: {}", SUITES.join(", "))))?;
    let mix = (idx as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut run = Run {
        suite: SUITES[idx],
        settings: *settings,
        sobol: (settings.seed ^ mix ^ (mix >> 32)) as u32,
        out: Vec::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed ^ mix);
    match idx {
        0 => suites::algebra(&mut run, &mut rng),
        1 => suites::derivative_identities(&mut run, &mut rng),
        2 => suites::splitting(&mut run, &mut rng),
        3 => suites::transitions(&mut run, &mut rng),
        4 => suites::metric(&mut run, &mut rng),
        5 => suites::kinematics(&mut run, &mut rng),
        6 => suites::em(&mut run, &mut rng),
        7 => suites::scenarios(&mut run, &mut rng),
        _ => suites::dims(&mut run, &mut rng),
    }
    Ok(run.out)
}

/// Collector of checks for one suite.
pub(crate) struct Run {
    suite: &'static str,
    settings: Settings,
    sobol: u32,
    out: Vec<Check>,
}

impl Run {
    fn push(&mut self, id: String, anchor: &str, tol: f64, expect: Expect, f: impl FnOnce() -> Result<f64>) {
        let t = Instant::now();
        let (residual, error) = match f() {
            Ok(r) => (Some(r), None),
            Err(e) => (None, Some(e.to_string())),
        };
        self.out.push(Check {
            suite: self.suite.into(),
            id,
            anchor: anchor.into(),
            residual,
            tolerance: tol,
            expect,
            error,
            wall_ms: t.elapsed().as_secs_f64() * 1e3,
        });
    }

    /// Records a check that passes when the residual is at most `tol`.
    pub(crate) fn below(&mut self, id: impl Into<String>, anchor: &str, tol: f64, f: impl FnOnce() -> Result<f64>) {
        self.push(id.into(), anchor, tol, Expect::Below, f);
    }

    /// Records a negative check that passes when the residual exceeds `tol`.
    pub(crate) fn above(&mut self, id: impl Into<String>, anchor: &str, tol: f64, f: impl FnOnce() -> Result<f64>) {
        self.push(id.into(), anchor, tol, Expect::Above, f);
    }

    pub(crate) fn points(&self) -> usize {
        self.settings.points
    }

    pub(crate) fn params(&self) -> Params {
        self.settings.params
    }

    pub(crate) fn sobol_seed(&self) -> u32 {
        self.sobol
    }

    /// Sobol points in the cube `[-r, r]^4`.
    pub(crate) fn cube(&self, n: usize, r: f64) -> Vec<[f64; 4]> {
        cube(n, r, self.sobol)
    }
}

/// `n` scrambled Sobol points in the cube `[-r, r]^4`.
pub fn cube(n: usize, r: f64, seed: u32) -> Vec<[f64; 4]> {
    (0..n as u32)
        .map(|i| std::array::from_fn(|d| r * (2.0 * f64::from(sobol_burley::sample(i, d as u32, seed)) - 1.0)))
        .collect()
}

/// Coefficient shape of the random test fields.
pub fn poly_spec() -> PolySpec {
    PolySpec { degree: 3, scale: 0.5 }
}

/// Largest pointwise distance relative to `1 + max(|a|, |b|)`.
pub fn rel_dist<K: Kind>(a: &Arc<dyn fields::Field<K>>, b: &Arc<dyn fields::Field<K>>, pts: &[[f64; 4]]) -> f64 {
    pts.iter().fold(0.0, |worst, x| {
        let (u, v) = (a.at(*x), b.at(*x));
        worst.max(u.dist(&v) / (1.0 + u.max_abs().max(v.max_abs())))
    })
}

/// [`rel_dist`] of two split pairs.
pub fn pair_dist<K: Kind>(
    x: &(Arc<dyn fields::Field<K>>, Arc<dyn fields::Field<K>>),
    y: &(Arc<dyn fields::Field<K>>, Arc<dyn fields::Field<K>>),
    pts: &[[f64; 4]],
) -> f64 {
    rel_dist(&x.0, &y.0, pts).max(rel_dist(&x.1, &y.1, pts))
}

/// Splitting structure with a random polynomial Christoffel form.
pub fn random_structure<R: Rng>(rng: &mut R, spec: PolySpec) -> Result<SplittingStructure> {
    let g = random_form(rng, Meta::new(BASE, 1).valued(Valued::ALG), spec)?;
    SplittingStructure::new(ALL_AXES, 0, Slot::G, g)
}

/// Random scalar form on the given axes.
pub fn scalar_form<R: Rng>(rng: &mut R, axes: u8, deg: u8) -> Result<FormRef> {
    random_form(rng, Meta::new(axes, deg), poly_spec())
}

/// Random coalgebra-valued base form.
pub fn coalg_form<R: Rng>(rng: &mut R, deg: u8) -> Result<FormRef> {
    random_form(rng, Meta::new(BASE, deg).valued(Valued::COALG), poly_spec())
}

/// Random Lorentzian metric near `diag(2, -1, -1, -1)`, dimension `L²`.
pub fn random_metric<R: Rng>(rng: &mut R, eps: f64) -> Result<TensorRef> {
    let polys: Vec<_> = (0..10).map(|_| random_poly(rng, PolySpec { degree: 2, scale: eps })).collect();
    closure_tensor(ALL_AXES, Dim::L.pow(2), false, move |p| {
        let mut m = vec![Hyper::constant(0.0); 16];
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
}

/// Lapse closure.
pub type LapseFn = Arc<dyn Fn(&Pt) -> Hyper + Send + Sync>;
/// Positive-definite base metric closure over the three base axes.
pub type BaseMetricFn = Arc<dyn Fn(&Pt) -> [[Hyper; 3]; 3] + Send + Sync>;

/// Metric `N²ω⊗ω - Π*h` for which the structure is regular.
pub fn regular_metric(s: &SplittingStructure, n: LapseFn, h: BaseMetricFn) -> Result<TensorRef> {
    let gamma = s.gamma.clone();
    closure_tensor(ALL_AXES, Dim::L.pow(2), false, move |p| {
        let g = gamma.eval(p);
        let om = [Hyper::constant(1.0), g.get(0b0010), g.get(0b0100), g.get(0b1000)];
        let (nn, hh) = (n(p), h(p));
        let mut m = vec![Hyper::constant(0.0); 16];
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
}

/// Random lapse near 1.5 and base metric near the identity.
pub fn random_lapse_and_h<R: Rng>(rng: &mut R, eps: f64) -> (LapseFn, BaseMetricFn) {
    let np = random_poly(rng, PolySpec { degree: 2, scale: eps });
    let hp: Vec<_> = (0..6).map(|_| random_poly(rng, PolySpec { degree: 2, scale: eps })).collect();
    let n: LapseFn = Arc::new(move |p| np(p) + 1.5);
    let h: BaseMetricFn = Arc::new(move |p| {
        let mut m = [[Hyper::constant(0.0); 3]; 3];
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
    });
    (n, h)
}
