//! Changes of fiber chart and integrals along the fiber.

use std::num::NonZeroUsize;
use std::sync::{Arc, OnceLock};

use gauss_quad::legendre::GaussLegendre;

use crate::error::{Error, Result};
use crate::exterior::{linear_substitute, Co, Ext, Kind, Lie, Meta, Slot, Valued};
use crate::fields::{self, d, partial, restrict, retag, FormRef, Pt};
use crate::fields::{Field, FieldExt};
use crate::hyper::Hyper;

use super::SplittingStructure;

/// Fiber reparametrization `t_i = φ(x, t_j)` between two adapted charts.
///
/// Objects given in chart `i` are pulled back to chart `j`. Values in the
/// algebra scale with `1/φ'` and values in the dual with `φ'`, where `φ'`
/// is the fiber derivative, assumed positive.
#[derive(Clone)]
pub struct Transition {
    /// Axes of the total space.
    pub bundle: u8,
    /// Fiber axis label.
    pub fiber: u8,
    /// Algebra whose values are transported.
    pub slot: Slot,
    phi: FormRef,
    dphi: FormRef,
}

struct Pull<K: Kind> {
    a: Arc<dyn Field<K>>,
    t: Transition,
    meta: Meta,
}

impl<K: Kind> Field<K> for Pull<K> {
    fn meta(&self) -> Meta {
        self.meta
    }
    fn eval(&self, p: &Pt) -> Ext<Hyper, K> {
        let (q, f) = self.t.mapped(p);
        let x = self.a.eval(&q);
        let w = self.meta.valued.weight(self.t.slot);
        x.scale(f.powi(w))
    }
}

struct Pull4 {
    a: FormRef,
    t: Transition,
    meta: Meta,
}

impl Field<Co> for Pull4 {
    fn meta(&self) -> Meta {
        self.meta
    }
    fn eval(&self, p: &Pt) -> Ext<Hyper, Co> {
        let (q, f) = self.t.mapped(p);
        let dphi = d(&self.t.phi).eval(p);
        let bundle = self.t.bundle;
        let mut img: [Option<Ext<Hyper, Co>>; 4] = Default::default();
        for a in 0..4u8 {
            if bundle >> a & 1 == 1 {
                img[a as usize] = Some(if a == self.t.fiber {
                    dphi.clone()
                } else {
                    Ext::unit(bundle, 1 << a, Hyper::constant(1.0)).expect("bundle axis")
                });
            }
        }
        let x = linear_substitute(&self.a.eval(&q), &img, bundle).expect("same axes");
        let w = self.meta.valued.weight(self.t.slot);
        x.scale(f.powi(w))
    }
}

impl Transition {
    /// Transition from a closure `φ(x, t_j)`.
    pub fn new(bundle: u8, fiber: u8, slot: Slot, phi: impl Fn(&Pt) -> Hyper + Send + Sync + 'static) -> Self {
        let phi = fields::scalar(bundle, crate::dims::Dim::NONE, phi);
        let dphi = partial(&phi, fiber as usize);
        Transition { bundle, fiber, slot, phi, dphi }
    }

    /// Identity transition.
    pub fn identity(bundle: u8, fiber: u8, slot: Slot) -> Self {
        Transition::new(bundle, fiber, slot, move |p| p[fiber as usize])
    }

    /// Rejects sample points where `φ'` is not positive.
    pub fn check_monotone(&self, pts: &[[f64; 4]]) -> Result<()> {
        for x in pts {
            let f = self.dphi.at(*x).get(0);
            if !(f > 0.0) {
                return Err(Error::Param(format!("fiber map not increasing at {x:?} (derivative {f})")));
            }
        }
        Ok(())
    }

    fn mapped(&self, p: &Pt) -> (Pt, Hyper) {
        let mut q = *p;
        q[self.fiber as usize] = self.phi.eval(p).get(0);
        (q, self.dphi.eval(p).get(0))
    }

    /// Image of a point of chart `j` in chart `i`.
    pub fn map_point(&self, x: [f64; 4]) -> [f64; 4] {
        let mut y = x;
        y[self.fiber as usize] = self.phi.at(x).get(0);
        y
    }

    /// Transition map `Φ*` on parametric fields and multivectors.
    pub fn pull<K: Kind>(&self, a: &Arc<dyn Field<K>>) -> Arc<dyn Field<K>> {
        Arc::new(Pull { a: a.clone(), t: self.clone(), meta: a.meta() })
    }

    /// Pullback of a form on the total space, values transported.
    pub fn pull_4d(&self, g: &FormRef) -> Result<FormRef> {
        let m = g.meta();
        if !m.is_null() && m.axes != self.bundle {
            return Err(Error::Axes(m.axes, self.bundle));
        }
        Ok(Arc::new(Pull4 { a: g.clone(), t: self.clone(), meta: m }))
    }

    /// Affine form `τ_j = -(∂ₖφ / φ') dxᵏ` in chart `j`.
    pub fn tau(&self) -> Result<FormRef> {
        let base = self.bundle & !(1 << self.fiber);
        let dx = retag(&restrict(&d(&self.phi), base)?, Valued::alg(self.slot));
        let dphi = self.dphi.clone();
        let inv = fields::scalar(self.bundle, crate::dims::Dim::NONE, move |p| -dphi.eval(p).get(0).recip());
        fields::times(&retag(&inv, Valued::SCALAR), &dx)
    }

    /// Splitting structure in chart `j`: `Γ_j = Φ*Γ_i - τ_j`.
    pub fn structure(&self, s: &SplittingStructure) -> Result<SplittingStructure> {
        if s.bundle != self.bundle || s.fiber != self.fiber || s.slot != self.slot {
            return Err(Error::Axes(s.bundle, self.bundle));
        }
        let g = fields::sub(&self.pull(&s.gamma), &self.tau()?)?;
        SplittingStructure::new(s.bundle, s.fiber, s.slot, g)
    }
}

const GL_ORDER: usize = 10;
const MAX_BISECT: u32 = 40;

fn rule() -> &'static GaussLegendre {
    static R: OnceLock<GaussLegendre> = OnceLock::new();
    R.get_or_init(|| GaussLegendre::new(NonZeroUsize::new(GL_ORDER).expect("positive order")))
}

fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let l = rule().integrate(a, m, f);
    let r = rule().integrate(m, b, f);
    if (l + r - whole).abs() <= tol || depth >= MAX_BISECT {
        l + r
    } else {
        adaptive(f, a, m, l, 0.5 * tol, depth + 1) + adaptive(f, m, b, r, 0.5 * tol, depth + 1)
    }
}

/// Integral of a dual-valued parametric form along the fiber over `[t0, t1]`.
///
/// The base point is `x`; its fiber coordinate is ignored. The result is real
/// valued with absolute accuracy `tol` per component.
pub fn integrate_g(
    a: &FormRef,
    fiber: u8,
    slot: Slot,
    x: [f64; 4],
    t0: f64,
    t1: f64,
    tol: f64,
) -> Result<Ext<f64, Co>> {
    let m = a.meta();
    if m.is_null() {
        return Ok(Ext::null());
    }
    if m.valued.slot(slot) != (Lie { up: 0, down: 1 }) {
        return Err(Error::Valued(m.valued.to_string(), Valued::coalg(slot).to_string()));
    }
    if t0 > t1 {
        return Err(Error::Param(format!("integration interval reversed: {t0} > {t1}")));
    }
    let meta = Meta { valued: m.valued.with_slot(slot, Lie { up: 0, down: 0 }), ..m };
    let mut out = Ext::zero(meta)?;
    let comps: Vec<u8> = a.at(x).iter().map(|(k, _)| k).collect();
    for k in comps {
        let f = |t: f64| {
            let mut y = x;
            y[fiber as usize] = t;
            a.at(y).get(k)
        };
        let whole = rule().integrate(t0, t1, f);
        out.set(k, adaptive(&f, t0, t1, whole, tol, 0));
    }
    Ok(out)
}
