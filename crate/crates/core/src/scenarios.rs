//! Analytic scenarios with closed-form oracles: an inertial observer, a
//! rotating observer, an expanding universe, the natural splitting of a
//! rotating chart, the axial reduction and the exact field of two charged
//! concentric spheres seen by a rotating observer.
//!
//! Charts use axis 0 for time. The rotating chart is `(t, r, φ, z)`, the
//! others are Cartesian `(t, x, y, z)`.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dims::{pd, Dim};
use crate::em::MaxwellFields;
use crate::error::{Error, Result};
use crate::exterior::{position, Co, CoForm, Ext, Meta, Slot, Tensor2, Valued, ALL_AXES};
use crate::fields::{
    self, closure_tensor, constant_tensor, hodge, interior, neg, scale_dim, sub, times, wedge, FormRef, Pt, TensorRef,
    VecRef,
};
use crate::hyper::Hyper;
use crate::metric::{tensor_max_abs, tensor_max_dist, MetricFlags, MetricSplitting};
use crate::splitting::{PremetricFlags, SplittingStructure};

/// Base axes of every scenario chart.
pub const BASE: u8 = ALL_AXES & !1;
/// Meridian axes `(r, z)` of the rotating chart.
pub const MERIDIAN: u8 = 0b1010;
/// Axial fiber `φ` of the rotating chart.
pub const AXIAL_FIBER: u8 = 2;

/// Scenario parameters in program units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    /// Speed of light `c₀`.
    pub c0: f64,
    /// Chart scale `L` of the time coordinate.
    pub l: f64,
    /// Angular velocity `ω`.
    pub omega: f64,
    /// Charge `Q` of the inner sphere.
    pub q: f64,
    /// Inner sphere radius.
    pub r1: f64,
    /// Outer sphere radius.
    pub r2: f64,
    /// Domain radius.
    pub r: f64,
    /// Vacuum impedance `Z₀`.
    pub z0: f64,
}

impl Default for Params {
    fn default() -> Self {
        Params { c0: 1.0, l: 1.0, omega: 0.3, q: 1.0, r1: 0.2, r2: 0.4, r: 0.8, z0: 1.0 }
    }
}

impl Params {
    /// Checks positivity, `R₁ < R₂ < R` and `ωR < c₀`.
    pub fn validate(&self) -> Result<()> {
        let pos = [("c0", self.c0), ("L", self.l), ("omega", self.omega), ("Z0", self.z0), ("R1", self.r1)];
        for (name, v) in pos {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Param(format!("{name} must be positive, got {v}")));
            }
        }
        if !self.q.is_finite() {
            return Err(Error::Param(format!("Q must be finite, got {}", self.q)));
        }
        if !(self.r1 < self.r2 && self.r2 < self.r) {
            return Err(Error::Param(format!("need R1 < R2 < R, got {} {} {}", self.r1, self.r2, self.r)));
        }
        if self.omega * self.r >= self.c0 {
            return Err(Error::Param(format!(
                "omega*R = {} must stay below c0 = {}; the domain reaches the light cylinder",
                self.omega * self.r,
                self.c0
            )));
        }
        Ok(())
    }

    /// Angular velocity in chart time, `ωL/c₀`, equal to `βΛ⁻¹`.
    pub fn omega_chart(&self) -> f64 {
        self.omega * self.l / self.c0
    }

    /// `ε₀ = 1/(Z₀c₀)`.
    pub fn eps0(&self) -> f64 {
        1.0 / (self.z0 * self.c0)
    }

    /// Coulomb field strength between the spheres at spherical radius `s`.
    pub fn coulomb_e(&self, s: Hyper) -> Hyper {
        let k = self.q / (4.0 * PI * self.eps0());
        if s.re() > self.r1 && s.re() < self.r2 {
            k / (s * s)
        } else {
            Hyper::constant(0.0)
        }
    }

    /// Coulomb potential of the sphere pair, zero outside the outer sphere.
    pub fn coulomb_v(&self, s: Hyper) -> Hyper {
        let k = self.q / (4.0 * PI * self.eps0());
        if s.re() <= self.r1 {
            Hyper::constant(k * (1.0 / self.r1 - 1.0 / self.r2))
        } else if s.re() < self.r2 {
            (s.recip() - 1.0 / self.r2) * k
        } else {
            Hyper::constant(0.0)
        }
    }

    /// `(β, γ)` at cylindrical radius `r`.
    pub fn beta_gamma(&self, r: Hyper) -> (Hyper, Hyper) {
        let b = r * (self.omega / self.c0);
        (b, (Hyper::constant(1.0) - b * b).sqrt().recip())
    }
}

/// Shape of a static potential `V(s)` of the spherical radius.
pub type Potential = Arc<dyn Fn(Hyper) -> Hyper + Send + Sync>;

/// Coulomb potential of the charged sphere pair.
pub fn coulomb(p: Params) -> Potential {
    Arc::new(move |s| p.coulomb_v(s))
}

/// Smooth potential `V₀ exp(-s²/w²)` of a distributed charge.
pub fn gaussian(v0: f64, width: f64) -> Potential {
    Arc::new(move |s| (-(s * s) / (width * width)).exp() * v0)
}

/// Coordinate chart of a scenario.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Chart {
    /// `(t, x, y, z)`.
    Cartesian,
    /// `(t, r, φ, z)`.
    Cylindrical,
}

impl Chart {
    /// Coordinate names.
    pub fn names(self) -> [&'static str; 4] {
        match self {
            Chart::Cartesian => ["t", "x", "y", "z"],
            Chart::Cylindrical => ["t", "r", "phi", "z"],
        }
    }

    /// Spherical radius at a point.
    pub fn radius(self, p: &Pt) -> Hyper {
        match self {
            Chart::Cartesian => (p[1] * p[1] + p[2] * p[2] + p[3] * p[3]).sqrt(),
            Chart::Cylindrical => (p[1] * p[1] + p[3] * p[3]).sqrt(),
        }
    }

    /// Cylindrical radius at a plain point.
    pub fn axis_distance(self, x: &[f64; 4]) -> f64 {
        match self {
            Chart::Cartesian => x[1].hypot(x[2]),
            Chart::Cylindrical => x[1].abs(),
        }
    }
}

/// A derived quantity paired with its closed form.
#[derive(Clone)]
pub enum Pair {
    Form(FormRef, FormRef),
    Vector(VecRef, VecRef),
    Tensor(TensorRef, TensorRef),
}

/// Named oracle comparison.
#[derive(Clone)]
pub struct Oracle {
    pub name: &'static str,
    pub pair: Pair,
}

impl Oracle {
    fn form(name: &'static str, derived: FormRef, expected: FormRef) -> Self {
        Oracle { name, pair: Pair::Form(derived, expected) }
    }

    fn tensor(name: &'static str, derived: TensorRef, expected: TensorRef) -> Self {
        Oracle { name, pair: Pair::Tensor(derived, expected) }
    }

    /// Largest deviation relative to the largest oracle value; absolute when
    /// the oracle vanishes.
    pub fn residual(&self, pts: &[[f64; 4]]) -> f64 {
        let (dist, size) = match &self.pair {
            Pair::Form(a, b) => (fields::max_dist(a, b, pts), fields::max_abs(b, pts)),
            Pair::Vector(a, b) => (fields::max_dist(a, b, pts), fields::max_abs(b, pts)),
            Pair::Tensor(a, b) => (tensor_max_dist(a, b, pts), tensor_max_abs(b, pts)),
        };
        if size > 0.0 {
            dist / size
        } else {
            dist
        }
    }

    /// True if the derived and expected tags agree.
    pub fn tags_match(&self) -> bool {
        match &self.pair {
            Pair::Form(a, b) => a.meta() == b.meta(),
            Pair::Vector(a, b) => a.meta() == b.meta(),
            Pair::Tensor(a, b) => a.axes() == b.axes() && a.dim() == b.dim() && a.upper() == b.upper(),
        }
    }
}

/// Built-in scenario.
#[derive(Clone)]
pub struct Scenario {
    pub name: &'static str,
    pub chart: Chart,
    /// Description of the excluded set.
    pub singular: &'static str,
    pub params: Params,
    pub ms: MetricSplitting,
    /// Electromagnetic fields of a static charge at rest in the inertial frame.
    pub fields: Option<MaxwellFields>,
    pub oracles: Vec<Oracle>,
    /// Classification stated for the scenario.
    pub flags: MetricFlags,
}

fn sparse(meta: Meta, f: impl Fn(&Pt) -> Vec<(u8, Hyper)> + Send + Sync + 'static) -> FormRef {
    let (axes, n) = (meta.axes, meta.len());
    fields::form(meta, move |p| {
        let mut c = vec![Hyper::constant(0.0); n];
        for (mask, v) in f(p) {
            c[position(axes, mask)] = v;
        }
        c
    })
    .expect("valid meta")
}

fn zero_form(meta: Meta) -> FormRef {
    fields::constant(CoForm::zero(meta).expect("valid meta"))
}

fn zero_tensor(axes: u8, dim: Dim) -> TensorRef {
    let n = axes.count_ones() as usize;
    constant_tensor(Tensor2 { axes, m: vec![0.0; n * n], dim, upper: false, valued: Valued::SCALAR })
}

fn diag_tensor(axes: u8, dim: Dim, f: impl Fn(&Pt) -> Vec<Hyper> + Send + Sync + 'static) -> TensorRef {
    let n = axes.count_ones() as usize;
    closure_tensor(axes, dim, false, move |p| {
        let d = f(p);
        let mut m = vec![Hyper::constant(0.0); n * n];
        for i in 0..n {
            m[i * n + i] = d[i];
        }
        m
    })
    .expect("square tensor")
}

/// `G`-valued tags combined with `U`-valued tags.
fn tags(g: Valued, u: Valued) -> Valued {
    g.with_slot(Slot::U, u.slot(Slot::U))
}

const fn flags(
    flat: bool,
    principal: bool,
    natural: bool,
    regular: bool,
    metric: bool,
    stationary: bool,
) -> MetricFlags {
    MetricFlags {
        premetric: PremetricFlags { flat, principal, holonomic: flat && principal, natural },
        regular,
        metric,
        standard: natural && metric,
        stationary,
    }
}

/// Static fields `A = -(L/c₀)V(s) dt`, `F = dA`, `H = Z₀⁻¹*₄F`, `J = dH`
/// of a charge at rest in the inertial frame.
pub fn static_fields(chart: Chart, g: &TensorRef, p: &Params, v: Potential) -> Result<MaxwellFields> {
    let k = -p.l / p.c0;
    let a = sparse(Meta::new(ALL_AXES, 1).dim(pd::F), move |x| vec![(1, v(chart.radius(x)) * k)]);
    MaxwellFields::vacuum(g, a, p.z0)
}

/// Observer at rest, `g = diag(L², -1, -1, -1)`, `Γ = 0`.
pub fn minkowski_rest(p: Params) -> Result<Scenario> {
    p.validate()?;
    let l = p.l;
    let g = diag_tensor(ALL_AXES, pd::G, move |_| {
        vec![Hyper::constant(l * l), (-1.0).into(), (-1.0).into(), (-1.0).into()]
    });
    let s = SplittingStructure::natural(ALL_AXES, 0, Slot::G);
    let ms = MetricSplitting::new(s, g.clone(), p.c0)?;
    let oracles = vec![
        Oracle::form(
            "lapse",
            ms.lapse(),
            fields::constant(CoForm::scalar(BASE, l).with_valued(Valued::COALG).with_dim(pd::LAPSE)),
        ),
        Oracle::form(
            "acceleration",
            ms.acceleration()?,
            zero_form(Meta::new(BASE, 1).valued(Valued::COALG).dim(pd::ACCEL)),
        ),
        Oracle::form("vorticity", ms.vorticity()?, zero_form(Meta::new(BASE, 2).dim(pd::ACCEL))),
        Oracle::tensor("expansion", ms.expansion()?, zero_tensor(BASE, ms.expansion()?.dim())),
        Oracle::tensor("observer metric", ms.h_sigma(), diag_tensor(BASE, pd::G, |_| vec![1.0.into(); 3])),
    ];
    let fields = Some(static_fields(Chart::Cartesian, &g, &p, coulomb(p))?);
    Ok(Scenario {
        name: "minkowski",
        chart: Chart::Cartesian,
        singular: "none",
        params: p,
        ms,
        fields,
        oracles,
        flags: flags(true, true, true, true, true, true),
    })
}

/// Rotating metric on `(t, r, φ, z)`.
pub fn rotating_metric(p: &Params) -> TensorRef {
    let p = *p;
    closure_tensor(ALL_AXES, pd::G, false, move |x| {
        let r = x[1];
        let (b, gm) = p.beta_gamma(r);
        let z = Hyper::constant(0.0);
        let gtp = -(b * r) * p.l;
        vec![
            (gm * gm).recip() * (p.l * p.l),
            z,
            gtp,
            z,
            z,
            (-1.0).into(),
            z,
            z,
            gtp,
            z,
            -(r * r),
            z,
            z,
            z,
            z,
            (-1.0).into(),
        ]
    })
    .expect("square tensor")
}

/// Christoffel form of the rotating observer, `-(ω/(c₀L))(γr)² dφ`.
pub fn rotating_gamma(p: &Params) -> FormRef {
    let p = *p;
    sparse(Meta::new(BASE, 1).valued(Valued::ALG), move |x| {
        let (_, gm) = p.beta_gamma(x[1]);
        let gr = gm * x[1];
        vec![(0b0100, -(gr * gr) * (p.omega / (p.c0 * p.l)))]
    })
}

/// Closed forms of the rotating observer.
pub struct RotatingOracle {
    pub p: Params,
}

impl RotatingOracle {
    fn bg(&self, x: &Pt) -> (Hyper, Hyper) {
        self.p.beta_gamma(x[1])
    }

    /// `N = L/γ`.
    pub fn lapse(&self) -> FormRef {
        let o = RotatingOracle { p: self.p };
        sparse(Meta::new(BASE, 0).valued(Valued::COALG).dim(pd::LAPSE), move |x| vec![(0, o.bg(x).1.recip() * o.p.l)])
    }

    /// `ω = dt - γ²βr/L dφ`.
    pub fn connection_form(&self) -> FormRef {
        let o = RotatingOracle { p: self.p };
        sparse(Meta::new(ALL_AXES, 1).valued(Valued::ALG), move |x| {
            let (b, g) = o.bg(x);
            vec![(0b0001, 1.0.into()), (0b0100, -(g * g * b * x[1]) / o.p.l)]
        })
    }

    /// `Ω = -2βγ⁴L⁻¹ dr∧dφ`.
    pub fn curvature(&self) -> FormRef {
        let o = RotatingOracle { p: self.p };
        sparse(Meta::new(BASE, 2).valued(Valued::ALG), move |x| {
            let (b, g) = o.bg(x);
            vec![(0b0110, -(b * g.powi(4)) * (2.0 / o.p.l))]
        })
    }

    /// `δ̃ = βγωL dr`.
    pub fn acceleration(&self) -> FormRef {
        let o = RotatingOracle { p: self.p };
        sparse(Meta::new(BASE, 1).valued(Valued::COALG).dim(pd::ACCEL), move |x| {
            let (b, g) = o.bg(x);
            vec![(0b0010, b * g * (o.p.omega * o.p.l))]
        })
    }

    /// `η = -γ³ωr dr∧dφ`.
    pub fn vorticity(&self) -> FormRef {
        let o = RotatingOracle { p: self.p };
        sparse(Meta::new(BASE, 2).dim(pd::ACCEL), move |x| {
            let (_, g) = o.bg(x);
            vec![(0b0110, -(g.powi(3) * x[1]) * o.p.omega)]
        })
    }

    /// Observer metric `h = dr² + (γr)²dφ² + dz²`.
    pub fn observer_metric(&self) -> TensorRef {
        let p = self.p;
        diag_tensor(BASE, pd::G, move |x| {
            let (_, g) = p.beta_gamma(x[1]);
            vec![1.0.into(), (g * x[1]).powi(2), 1.0.into()]
        })
    }

    /// `g(∂_t) = γ⁻²L² dt - βrL dφ`.
    pub fn riesz_dt(&self) -> FormRef {
        let o = RotatingOracle { p: self.p };
        sparse(Meta::new(ALL_AXES, 1).dim(pd::G), move |x| {
            let (b, g) = o.bg(x);
            vec![(0b0001, (g * g).recip() * (o.p.l * o.p.l)), (0b0100, -(b * x[1]) * o.p.l)]
        })
    }

    /// Axial lapse `N̊ = γr`.
    pub fn axial_lapse(&self) -> FormRef {
        let o = RotatingOracle { p: self.p };
        sparse(Meta::new(BASE, 0).valued(Valued::U_COALG).dim(Dim::L), move |x| vec![(0, o.bg(x).1 * x[1])])
    }

    /// `Λ = r/L`, valued in `u* ⊗ g`.
    pub fn lambda(&self) -> FormRef {
        let l = self.p.l;
        sparse(Meta::new(BASE, 0).valued(tags(Valued::ALG, Valued::U_COALG)), move |x| vec![(0, x[1] / l)])
    }

    /// `Λ⁻¹ = L/r`, valued in `u ⊗ g*`.
    pub fn lambda_inv(&self) -> FormRef {
        let l = self.p.l;
        sparse(Meta::new(BASE, 0).valued(tags(Valued::COALG, Valued::U_ALG)), move |x| vec![(0, x[1].recip() * l)])
    }

    /// `βΛ⁻¹ = ωL/c₀`, a constant valued in `u ⊗ g*`.
    pub fn beta_lambda_inv(&self) -> FormRef {
        let w = self.p.omega_chart();
        sparse(Meta::new(BASE, 0).valued(tags(Valued::COALG, Valued::U_ALG)), move |_| vec![(0, w.into())])
    }

    /// `Γ̄ = -βγ²Λ`.
    pub fn gamma_bar(&self) -> FormRef {
        let o = RotatingOracle { p: self.p };
        sparse(Meta::new(MERIDIAN, 0).valued(tags(Valued::ALG, Valued::U_COALG)), move |x| {
            let (b, g) = o.bg(x);
            vec![(0, -(b * g * g * x[1]) / o.p.l)]
        })
    }

    /// `Ω̄ = 2βγ⁴L⁻¹ dr`.
    pub fn omega_bar(&self) -> FormRef {
        let o = RotatingOracle { p: self.p };
        sparse(Meta::new(MERIDIAN, 1).valued(tags(Valued::ALG, Valued::U_COALG)), move |x| {
            let (b, g) = o.bg(x);
            vec![(0b0010, b * g.powi(4) * (2.0 / o.p.l))]
        })
    }

    /// `γ²` on the meridian plane.
    pub fn gamma2(&self) -> FormRef {
        let o = RotatingOracle { p: self.p };
        sparse(Meta::new(MERIDIAN, 0), move |x| {
            let g = o.bg(x).1;
            vec![(0, g * g)]
        })
    }
}

/// Axial splitting structure of the rotating chart.
pub fn axial_structure() -> SplittingStructure {
    SplittingStructure::natural(BASE, AXIAL_FIBER, Slot::U)
}

/// Rotating observer on `(t, r, φ, z)` with a regular principal splitting.
pub fn rotating(p: Params) -> Result<Scenario> {
    p.validate()?;
    let g = rotating_metric(&p);
    let s = SplittingStructure::new(ALL_AXES, 0, Slot::G, rotating_gamma(&p))?;
    let ms = MetricSplitting::new(s.clone(), g.clone(), p.c0)?;
    let o = RotatingOracle { p };
    let h = ms.h_sigma();
    let hr = h.clone();
    let n_ring =
        sparse(Meta::new(BASE, 0).valued(Valued::U_COALG).dim(Dim::L), move |x| vec![(0, hr.eval(x).at(1, 1).sqrt())]);
    let ax = axial_structure();
    let gm2 = {
        let o = RotatingOracle { p };
        sparse(Meta::new(BASE, 0), move |x| {
            let g = o.bg(x).1;
            vec![(0, (g * g).recip())]
        })
    };
    let lambda = times(&gm2, &times(&n_ring, &ms.lapse_inv())?)?;
    let w_ring = {
        let mut v = Ext::<f64, crate::exterior::Contra>::zero(Meta::new(BASE, 1).valued(Valued::U_COALG))?;
        v.set(1 << AXIAL_FIBER, 1.0);
        fields::constant(v)
    };
    let oracles = vec![
        Oracle::form("lapse", ms.lapse(), o.lapse()),
        Oracle::form("connection form", s.omega(), o.connection_form()),
        Oracle::form("variance", s.chi(), zero_form(Meta::new(BASE, 1).valued(Valued::TENSOR))),
        Oracle::form("curvature", s.curvature()?, o.curvature()),
        Oracle::form("acceleration", ms.acceleration()?, o.acceleration()),
        Oracle::form("vorticity", ms.vorticity()?, o.vorticity()),
        Oracle::tensor("observer metric", h, o.observer_metric()),
        Oracle::tensor("expansion", ms.expansion()?, zero_tensor(BASE, ms.expansion()?.dim())),
        Oracle::form("riesz of time", fields::riesz(&g, &const_vec(ALL_AXES, 0, Valued::SCALAR))?, o.riesz_dt()),
        Oracle::form("axial lapse", n_ring, o.axial_lapse()),
        Oracle::form("axial ratio", lambda, o.lambda()),
        Oracle { name: "axial fundamental field", pair: Pair::Vector(ax.w(), w_ring) },
        Oracle::form("axial Christoffel", ax.split(&s.gamma)?.1, o.gamma_bar()),
        Oracle::form("axial curvature", ax.split(&s.curvature()?)?.1, o.omega_bar()),
    ];
    let fields = Some(static_fields(Chart::Cylindrical, &g, &p, coulomb(p))?);
    Ok(Scenario {
        name: "rotating",
        chart: Chart::Cylindrical,
        singular: "axis r = 0 and light cylinder r >= c0/omega",
        params: p,
        ms,
        fields,
        oracles,
        flags: flags(false, true, false, true, false, true),
    })
}

fn const_vec(axes: u8, axis: u8, v: Valued) -> VecRef {
    let mut e = Ext::<f64, crate::exterior::Contra>::zero(Meta::new(axes, 1).valued(v)).expect("degree one");
    e.set(1 << axis, 1.0);
    fields::constant(e)
}

/// Scale factor `a(t) = 1 + t/5 + t²/10` of the expanding scenario.
fn scale_factor(t: Hyper) -> Hyper {
    t * t * 0.1 + t * 0.2 + 1.0
}

/// Spatially flat expanding universe `g = L²dt² - a(t)²(dx² + dy² + dz²)`.
pub fn expanding(p: Params) -> Result<Scenario> {
    p.validate()?;
    let l = p.l;
    let g = diag_tensor(ALL_AXES, pd::G, move |x| {
        let a2 = -scale_factor(x[0]).powi(2);
        vec![Hyper::constant(l * l), a2, a2, a2]
    });
    let s = SplittingStructure::natural(ALL_AXES, 0, Slot::G);
    let ms = MetricSplitting::new(s, g.clone(), p.c0)?;
    let lam_dim = ms.expansion()?.dim();
    let c0 = p.c0;
    let lambda = diag_tensor(BASE, lam_dim, move |x| {
        let t = x[0];
        let a = scale_factor(t);
        let da = t * 0.2 + 0.2;
        vec![a * da * (c0 / l); 3]
    });
    let theta = sparse(Meta::new(BASE, 0).dim(lam_dim * pd::G.inv()), move |x| {
        let t = x[0];
        vec![(0, (t * 0.2 + 0.2) / scale_factor(t) * (3.0 * c0 / l))]
    });
    let oracles = vec![
        Oracle::tensor("expansion", ms.expansion()?, lambda),
        Oracle::form("expansion scalar", ms.expansion_scalar()?, theta),
        Oracle::form(
            "acceleration",
            ms.acceleration()?,
            zero_form(Meta::new(BASE, 1).valued(Valued::COALG).dim(pd::ACCEL)),
        ),
        Oracle::form("vorticity", ms.vorticity()?, zero_form(Meta::new(BASE, 2).dim(pd::ACCEL))),
    ];
    Ok(Scenario {
        name: "expanding",
        chart: Chart::Cartesian,
        singular: "none",
        params: p,
        ms,
        fields: None,
        oracles,
        flags: flags(true, true, true, true, true, false),
    })
}

/// Metric of the rotating Cartesian chart `(t, x, y, z)`, in which the
/// rest-frame angle is `φ + (ωL/c₀)t`.
pub fn schiff_metric(p: &Params) -> TensorRef {
    let (l, w) = (p.l, p.omega_chart());
    closure_tensor(ALL_AXES, pd::G, false, move |x| {
        let (xx, yy) = (x[1], x[2]);
        let z = Hyper::constant(0.0);
        let gtt = -(xx * xx + yy * yy) * (w * w) + l * l;
        let (gtx, gty) = (yy * w, -xx * w);
        let m1 = Hyper::constant(-1.0);
        #[rustfmt::skip]
        let m = vec![
            gtt, gtx, gty, z,
            gtx, m1,  z,   z,
            gty, z,   m1,  z,
            z,   z,   z,   m1,
        ];
        m
    })
    .expect("square tensor")
}

/// Natural splitting of the rotating Cartesian chart.
pub fn schiff_natural(p: Params) -> Result<Scenario> {
    p.validate()?;
    let g = schiff_metric(&p);
    let s = SplittingStructure::natural(ALL_AXES, 0, Slot::G);
    let ms = MetricSplitting::new(s, g.clone(), p.c0)?;
    let inv_gamma = sparse(Meta::new(BASE, 0), move |x| {
        let (_, g) = p.beta_gamma((x[1] * x[1] + x[2] * x[2]).sqrt());
        vec![(0, g.recip())]
    });
    let l = p.l;
    let oracles = vec![
        Oracle::form("lapse ratio", ms.xi(), inv_gamma),
        Oracle::tensor("observer metric", ms.h_sigma(), diag_tensor(BASE, pd::G, |_| vec![1.0.into(); 3])),
        Oracle::form(
            "inverse reciprocal lapse",
            ms.lapse_inv_dag(),
            sparse(Meta::new(BASE, 0).valued(Valued::ALG).dim(pd::LAPSE.inv()), move |_| vec![(0, (1.0 / l).into())]),
        ),
    ];
    let fields = Some(static_fields(Chart::Cartesian, &g, &p, coulomb(p))?);
    Ok(Scenario {
        name: "schiff",
        chart: Chart::Cartesian,
        singular: "surfaces of both spheres",
        params: p,
        ms,
        fields,
        oracles,
        flags: flags(true, true, true, false, false, true),
    })
}

/// Scenario by name: `minkowski`, `rotating`, `expanding` or `schiff`.
pub fn by_name(name: &str, p: Params) -> Result<Scenario> {
    match name {
        "minkowski" => minkowski_rest(p),
        "rotating" => rotating(p),
        "expanding" => expanding(p),
        "schiff" => schiff_natural(p),
        _ => Err(Error::Param(format!("unknown scenario {name:?}; expected one of {NAMES:?}"))),
    }
}

/// Names accepted by [`by_name`].
pub const NAMES: [&str; 4] = ["minkowski", "rotating", "expanding", "schiff"];

fn sobol(n: usize, seed: u32, dims: usize) -> impl Iterator<Item = Vec<f64>> {
    (0..)
        .map(move |i: u32| (0..dims as u32).map(|d| f64::from(sobol_burley::sample(i, d, seed))).collect::<Vec<_>>())
        .take(n)
}

impl Scenario {
    /// `n` Sobol points inside the scenario's sampling region.
    ///
    /// The rotating chart uses the box `r ∈ [0.1, 0.8]·c₀/ω`, `z ∈ [-1, 1]`;
    /// Cartesian charts use `|x|, |y|, |z| ≤ R/√3` so that `ωr < c₀`. Time
    /// ranges over `[-1, 1]`.
    pub fn sample(&self, n: usize, seed: u32) -> Vec<[f64; 4]> {
        let p = self.params;
        match self.chart {
            Chart::Cylindrical => {
                let rc = p.c0 / p.omega;
                sobol(n, seed, 4)
                    .map(|u| [2.0 * u[0] - 1.0, rc * (0.1 + 0.7 * u[1]), 2.0 * PI * u[2], 2.0 * u[3] - 1.0])
                    .collect()
            }
            Chart::Cartesian => {
                let h = p.r / 3f64.sqrt();
                sobol(n, seed, 4)
                    .map(|u| [2.0 * u[0] - 1.0, h * (2.0 * u[1] - 1.0), h * (2.0 * u[2] - 1.0), h * (2.0 * u[3] - 1.0)])
                    .collect()
            }
        }
    }

    /// Points avoiding tubes of radius `0.02·R₁` around both spheres and
    /// inside the domain radius `R`, drawn from the scenario sampler.
    pub fn smooth_points(&self, n: usize, seed: u32) -> Vec<[f64; 4]> {
        let p = self.params;
        let rc = p.c0 / p.omega;
        let mut out = Vec::with_capacity(n);
        let mut batch = 0u32;
        while out.len() < n {
            let cand = match self.chart {
                Chart::Cylindrical => sobol(4 * n, seed.wrapping_add(batch), 4)
                    .map(|u| [2.0 * u[0] - 1.0, p.r * (0.05 + 0.95 * u[1]), 2.0 * PI * u[2], p.r * (2.0 * u[3] - 1.0)])
                    .collect::<Vec<_>>(),
                Chart::Cartesian => self.sample(4 * n, seed.wrapping_add(batch)),
            };
            for x in cand {
                let s = self.chart.radius(&fields::pt(x)).re();
                let band = 0.02 * p.r1;
                if s < p.r && (s - p.r1).abs() > band && (s - p.r2).abs() > band && self.chart.axis_distance(&x) < rc {
                    out.push(x);
                    if out.len() == n {
                        break;
                    }
                }
            }
            batch += 1;
        }
        out
    }

    /// Worst oracle residual and the name of the offending oracle.
    pub fn worst_oracle(&self, pts: &[[f64; 4]]) -> (f64, &'static str) {
        self.oracles.iter().map(|o| (o.residual(pts), o.name)).fold((0.0, "none"), |a, b| if b.0 > a.0 { b } else { a })
    }
}

/// Fields of the axial splitting, tagged by the `U` slot.
#[derive(Clone)]
pub struct AxialFields {
    /// `ē` from `ẽ → (ē, ·)`.
    pub e: FormRef,
    /// `b̄` from `b → (·, b̄)`.
    pub b: FormRef,
    /// `h̄` from `h̃ → (h̄, ·)`.
    pub h: FormRef,
    /// `d̄` from `d → (·, d̄)`.
    pub d: FormRef,
    /// `ȷ̄` from `ȷ̃ → (ȷ̄, ·)`.
    pub j: FormRef,
    /// `ρ̄` from `ρ → (·, ρ̄)`.
    pub rho: FormRef,
    /// Components of the trivial system, zero for azimuthal currents and
    /// meridional electric fields.
    pub trivial: Vec<FormRef>,
}

/// Reduces axisymmetric split fields of the rotating chart to the meridian
/// plane. Rejects fields that depend on `φ` at the sample points.
pub fn axial_reduce(x: &crate::em::SplitEm, pts: &[[f64; 4]], tol: f64) -> Result<AxialFields> {
    let ax = axial_structure();
    for (name, f) in [("e", &x.e), ("b", &x.b), ("h", &x.h), ("d", &x.d), ("j", &x.j), ("rho", &x.rho)] {
        let dphi = fields::max_abs(&ax.partial_g(f), pts);
        if dphi > tol {
            return Err(Error::Param(format!("field {name} is not axisymmetric (|∂_φ| = {dphi:e})")));
        }
    }
    let (e, e2) = ax.split(&x.e)?;
    let (b1, b) = ax.split(&x.b)?;
    let (h, h2) = ax.split(&x.h)?;
    let (d1, d) = ax.split(&x.d)?;
    let (j, j2) = ax.split(&x.j)?;
    let (rho1, rho) = ax.split(&x.rho)?;
    Ok(AxialFields { e, b, h, d, j, rho, trivial: vec![e2, b1, h2, d1, j2, rho1] })
}

/// Summands of the dimensionally reduced static equations.
pub fn reduced_terms(omega_bar: &FormRef, f: &AxialFields) -> Result<[Vec<FormRef>; 4]> {
    Ok([
        vec![fields::d(&f.b), wedge(omega_bar, &f.e)?],
        vec![fields::d(&f.d), f.rho.clone(), neg(&wedge(omega_bar, &f.h)?)],
        vec![fields::d(&f.e)],
        vec![fields::d(&f.h), neg(&f.j)],
    ])
}

/// Names of the reduced equations in the order of [`reduced_residuals`].
pub const REDUCED_LAWS: [&str; 4] = ["reduced Faraday", "reduced Gauss", "reduced electrostatic", "reduced Ampere"];

/// Residuals `d b̄ + Ω̄∧ē`, `d d̄ + ρ̄ - Ω̄∧h̄`, `d ē`, `d h̄ - ȷ̄` of the
/// dimensionally reduced static equations.
pub fn reduced_residuals(omega_bar: &FormRef, f: &AxialFields) -> Result<[FormRef; 4]> {
    let t = reduced_terms(omega_bar, f)?;
    Ok([fields::sum(&t[0])?, fields::sum(&t[1])?, fields::sum(&t[2])?, fields::sum(&t[3])?])
}

/// Order of the perturbation solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Order {
    /// Electrostatic field, no magnetic part.
    Zeroth,
    /// First order in `β`.
    First,
    /// Exact solution.
    Exact,
}

/// Closed-form axial fields of the charged sphere pair seen by the rotating
/// observer.
#[derive(Clone)]
pub struct SchiffSolution {
    pub params: Params,
    /// Zeroth-order `ē₀ = (L/c₀)E dρ_s` on the meridian plane.
    pub e0: FormRef,
    /// Zeroth-order `d̄₀ = Z₀⁻¹Λ*₂ē₀`.
    pub d0: FormRef,
    /// Zeroth-order charge, zero away from the sphere surfaces.
    pub rho0: FormRef,
    /// `Ω̄`.
    pub omega_bar: FormRef,
    /// `Λ`.
    pub lambda: FormRef,
    /// `γ²`.
    pub gamma2: FormRef,
    /// Euclidean metric of the meridian plane.
    pub meridian: TensorRef,
}

/// Closed-form solution for the sphere pair.
pub fn schiff_solution(p: Params) -> Result<SchiffSolution> {
    p.validate()?;
    let o = RotatingOracle { p };
    let ecoef = move |x: &Pt| {
        let s = (x[1] * x[1] + x[3] * x[3]).sqrt();
        p.coulomb_e(s) / s * (p.l / p.c0)
    };
    let e0 = sparse(Meta::new(MERIDIAN, 1).valued(Valued::COALG).dim(pd::F), move |x| {
        let c = ecoef(x);
        vec![(0b0010, c * x[1]), (0b1000, c * x[3])]
    });
    let dm = Meta::new(MERIDIAN, 1).valued(Valued::U_COALG).twisted(true).dim(pd::H);
    let d0 = sparse(dm, move |x| {
        let c = ecoef(x) * x[1] / (p.l * p.z0);
        vec![(0b0010, -(c * x[3])), (0b1000, c * x[1])]
    });
    let rho0 = zero_form(Meta::new(MERIDIAN, 2).valued(Valued::U_COALG).twisted(true).dim(pd::H));
    let meridian = diag_tensor(MERIDIAN, pd::G, |_| vec![1.0.into(); 2]);
    Ok(SchiffSolution {
        params: p,
        e0,
        d0,
        rho0,
        omega_bar: o.omega_bar(),
        lambda: restrict0(&o.lambda()),
        gamma2: o.gamma2(),
        meridian,
    })
}

fn restrict0(a: &FormRef) -> FormRef {
    fields::restrict(a, MERIDIAN).expect("degree zero restricts")
}

impl SchiffSolution {
    fn beta_lambda_inv(&self) -> FormRef {
        restrict0(&RotatingOracle { p: self.params }.beta_lambda_inv())
    }

    fn beta_gamma2_lambda(&self) -> Result<FormRef> {
        let p = self.params;
        let f = sparse(Meta::new(MERIDIAN, 0), move |x| {
            let (b, g) = p.beta_gamma(x[1]);
            vec![(0, b * g * g)]
        });
        times(&f, &self.lambda)
    }

    /// First-order magnetic pair `(b̄₁, h̄₁) = β(-Λē₀, Λ⁻¹d̄₀)`.
    pub fn first_order(&self) -> Result<(FormRef, FormRef)> {
        let p = self.params;
        let beta = sparse(Meta::new(MERIDIAN, 0), move |x| vec![(0, p.beta_gamma(x[1]).0)]);
        let b1 = neg(&times(&beta, &times(&self.lambda, &self.e0)?)?);
        let h1 = times(&self.beta_lambda_inv(), &self.d0)?;
        Ok((b1, h1))
    }

    /// Reduced fields and sources at the given order.
    pub fn fields(&self, order: Order) -> Result<AxialFields> {
        let (b1, h1) = self.first_order()?;
        let zb = zero_form(b1.meta());
        let zh = zero_form(h1.meta());
        let (d, b, h) = match order {
            Order::Zeroth => (self.d0.clone(), zb, zh),
            Order::First => (self.d0.clone(), b1, h1),
            Order::Exact => (times(&self.gamma2, &self.d0)?, neg(&times(&self.beta_gamma2_lambda()?, &self.e0)?), h1),
        };
        let (rho, j) = self.sources(order)?;
        Ok(AxialFields { e: self.e0.clone(), b, h, d, j, rho, trivial: vec![] })
    }

    /// Sources `(ρ̄, ȷ̄)`: `(γ², -βΛ⁻¹)ρ̄₀` for the exact solution.
    pub fn sources(&self, order: Order) -> Result<(FormRef, FormRef)> {
        let j = neg(&times(&self.beta_lambda_inv(), &self.rho0)?);
        Ok(match order {
            Order::Zeroth => (self.rho0.clone(), zero_form(j.meta())),
            Order::First => (self.rho0.clone(), j),
            Order::Exact => (times(&self.gamma2, &self.rho0)?, j),
        })
    }

    /// Residuals of the reduced constitutive relations
    /// `d̄ = Z₀⁻¹γ²Λ*₂ē` and `b̄ = Z₀γ²Λ*₂h̄`.
    pub fn constitutive_residuals(&self, f: &AxialFields) -> Result<[FormRef; 2]> {
        let [(d, dd), (b, bb)] = self.constitutive_pairs(f)?;
        Ok([sub(&d, &dd)?, sub(&b, &bb)?])
    }

    fn constitutive_pairs(&self, f: &AxialFields) -> Result<[(FormRef, FormRef); 2]> {
        let z0 = self.params.z0;
        let gl = times(&self.gamma2, &self.lambda)?;
        let dd = scale_dim(&times(&gl, &hodge(&self.meridian, &f.e)?)?, 1.0 / z0, pd::Z0.inv());
        let bb = scale_dim(&times(&gl, &hodge(&self.meridian, &f.h)?)?, z0, pd::Z0);
        Ok([(f.d.clone(), dd), (f.b.clone(), fields::retwist(&bb, false, false))])
    }

    /// Dimension audit of the reduced equations and constitutive relations.
    pub fn audit(&self) -> Result<Vec<crate::em::Audit>> {
        use crate::em::Audit;
        let f = self.fields(Order::Exact)?;
        let mut out: Vec<Audit> =
            REDUCED_LAWS.iter().zip(reduced_terms(&self.omega_bar, &f)?).map(|(n, t)| Audit::of(*n, &t)).collect();
        let [(d, dd), (b, bb)] = self.constitutive_pairs(&f)?;
        out.push(Audit::of("reduced electric constitutive", &[d, dd]));
        out.push(Audit::of("reduced magnetic constitutive", &[b, bb]));
        Ok(out)
    }

    /// Largest field component over the sample points.
    pub fn max_field(&self, f: &AxialFields, pts: &[[f64; 4]]) -> f64 {
        [&f.e, &f.b, &f.h, &f.d].iter().map(|a| fields::max_abs(a, pts)).fold(0.0, f64::max)
    }
}

/// Charge `ρ₀` at rest in the inertial frame, seen in the rotating chart:
/// `J = ρ₀ dr∧(dφ + (ωL/c₀)dt)∧dz` with `ρ₀` a function of `(r, z)`.
pub fn rest_charge(p: &Params, rho0: impl Fn(Hyper, Hyper) -> Hyper + Send + Sync + 'static) -> FormRef {
    let w = p.omega_chart();
    sparse(Meta::new(ALL_AXES, 3).twisted(true).dim(pd::H), move |x| {
        let v = rho0(x[1], x[3]);
        // dr∧dt∧dz = -dt∧dr∧dz
        vec![(0b1110, v), (0b1011, -(v * w))]
    })
}

/// Expected split `(γ²ρ₀, -βΛ⁻¹ι_ẘρ₀)` of a rest-frame charge, where `ρ₀` is
/// the charge of the natural splitting.
pub fn rest_charge_split(p: &Params, natural_rho: &FormRef) -> Result<(FormRef, FormRef)> {
    let o = RotatingOracle { p: *p };
    let g2 = {
        let p = *p;
        sparse(Meta::new(BASE, 0), move |x| {
            let g = p.beta_gamma(x[1]).1;
            vec![(0, g * g)]
        })
    };
    let w_ring = const_vec(BASE, AXIAL_FIBER, Valued::U_COALG);
    let j = neg(&times(&o.beta_lambda_inv(), &interior::<Co>(&w_ring, natural_rho)?)?);
    Ok((times(&g2, natural_rho)?, j))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        Params::default().validate().unwrap();
    }

    #[test]
    fn light_cylinder_is_rejected() {
        let p = Params { omega: 1.3, ..Params::default() };
        assert!(matches!(p.validate(), Err(Error::Param(_))));
    }

    #[test]
    fn coulomb_potential_is_continuous() {
        let p = Params::default();
        for r in [p.r1, p.r2] {
            let a = p.coulomb_v(Hyper::constant(r * (1.0 - 1e-12))).re();
            let b = p.coulomb_v(Hyper::constant(r * (1.0 + 1e-12))).re();
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn sampler_stays_off_axis() {
        let s = rotating(Params::default()).unwrap();
        let rc = 1.0 / 0.3;
        for x in s.sample(64, 1) {
            assert!(x[1] >= 0.1 * rc && x[1] <= 0.8 * rc);
        }
    }
}
