//! Splitting structures: a fiber coordinate, a Christoffel form and the
//! operators they induce on parametric fields.
//!
//! The same machinery serves the relativistic splitting (time fiber, `g`
//! algebra) and the axial reduction of a rotationally symmetric problem
//! (azimuth fiber, `u` algebra).

mod frame;
mod transition;

use std::sync::Arc;

use serde::Serialize;

pub use frame::Frame;
pub use transition::{integrate_g, Transition};

use crate::error::{Error, Result};
use crate::exterior::{basis, rank, Co, Contra, Ext, Lie, Meta, Slot, Valued};
use crate::fields::{self, add, d, embed, interior, neg, partial, retag, sub, wedge, zip, Field, FormRef, Pt, VecRef};
use crate::hyper::Hyper;

/// Fiber coordinate plus Christoffel form on a chart.
#[derive(Clone)]
pub struct SplittingStructure {
    /// Axes of the total space.
    pub bundle: u8,
    /// Fiber axis label.
    pub fiber: u8,
    /// Algebra of the fiber group.
    pub slot: Slot,
    /// Christoffel form: base 1-form, algebra valued, dimensionless.
    pub gamma: FormRef,
}

/// Pre-metric classification of a splitting structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PremetricFlags {
    /// Curvature vanishes.
    pub flat: bool,
    /// Variance vanishes.
    pub principal: bool,
    /// Flat and principal.
    pub holonomic: bool,
    /// Christoffel form vanishes.
    pub natural: bool,
}

impl SplittingStructure {
    /// Builds a structure after validating the Christoffel form's tags.
    pub fn new(bundle: u8, fiber: u8, slot: Slot, gamma: FormRef) -> Result<Self> {
        if bundle >> fiber & 1 == 0 {
            return Err(Error::Axes(1 << fiber, bundle));
        }
        let base = bundle & !(1 << fiber);
        let m = gamma.meta();
        let want = Meta::new(base, 1).valued(Valued::alg(slot));
        if m != want {
            return Err(Error::Operand(format!("Christoffel form must be {want}, got {m}")));
        }
        Ok(SplittingStructure { bundle, fiber, slot, gamma })
    }

    /// Structure with vanishing Christoffel form.
    pub fn natural(bundle: u8, fiber: u8, slot: Slot) -> Self {
        let base = bundle & !(1 << fiber);
        let z = Ext::<f64, Co>::zero(Meta::new(base, 1).valued(Valued::alg(slot))).expect("degree one");
        SplittingStructure { bundle, fiber, slot, gamma: fields::constant(z) }
    }

    /// Base axes.
    pub fn base(&self) -> u8 {
        self.bundle & !(1 << self.fiber)
    }

    /// Connection data at a point.
    pub fn frame_at(&self, p: &Pt) -> Frame<Hyper> {
        Frame {
            bundle: self.bundle,
            fiber: self.fiber,
            slot: self.slot,
            gamma: self.gamma.eval(p).components().to_vec(),
        }
    }

    fn with_frame<K: crate::exterior::Kind, L: crate::exterior::Kind>(
        &self,
        a: &Arc<dyn Field<K>>,
        f: impl Fn(&Frame<Hyper>, &Ext<Hyper, K>) -> Result<Ext<Hyper, L>> + Send + Sync + 'static,
    ) -> Result<Arc<dyn Field<L>>> {
        let (bundle, fiber, slot) = (self.bundle, self.fiber, self.slot);
        zip(&self.gamma, a, move |g, x| {
            let fr = Frame { bundle, fiber, slot, gamma: g.components().to_vec() };
            f(&fr, &x)
        })
    }

    /// Connection form `ω` as a field on the total space.
    pub fn omega(&self) -> FormRef {
        let one = fields::constant(Ext::<f64, Co>::scalar(self.bundle, 1.0));
        self.with_frame(&one, |fr, _| Ok(fr.omega())).expect("connection form")
    }

    /// Fundamental field `w`.
    pub fn w(&self) -> VecRef {
        let mut w =
            Ext::<f64, Contra>::zero(Meta::new(self.bundle, 1).valued(Valued::coalg(self.slot))).expect("degree one");
        w.set(1 << self.fiber, 1.0);
        fields::constant(w)
    }

    /// Parametric pullback `Σ*`.
    pub fn sigma_star(&self, g: &FormRef) -> Result<FormRef> {
        self.with_frame(g, |fr, x| fr.sigma_star(x))
    }

    /// Projection pullback `Π*`.
    pub fn pi_star(&self, a: &FormRef) -> Result<FormRef> {
        embed(a, self.bundle)
    }

    /// Splitting `S⁻*γ = (α, β̃)`.
    pub fn split(&self, g: &FormRef) -> Result<(FormRef, FormRef)> {
        let a = self.with_frame(g, |fr, x| Ok(fr.split(x)?.0))?;
        let b = self.with_frame(g, |fr, x| Ok(fr.split(x)?.1))?;
        Ok((a, b))
    }

    /// Inverse splitting `S*(α, β̃)`.
    pub fn unsplit(&self, a: &FormRef, b: &FormRef) -> Result<FormRef> {
        let pb = self.pi_star(b)?;
        add(&self.pi_star(a)?, &wedge(&self.omega(), &pb)?)
    }

    /// Splitting of a multivector field `S v = (k, ℓ̃)`.
    pub fn split_vec(&self, v: &VecRef) -> Result<(VecRef, VecRef)> {
        let k = self.with_frame(v, |fr, x| Ok(fr.split_vec(x)?.0))?;
        let l = self.with_frame(v, |fr, x| Ok(fr.split_vec(x)?.1))?;
        Ok((k, l))
    }

    /// Inverse splitting of multivector fields.
    pub fn unsplit_vec(&self, k: &VecRef, l: &VecRef) -> Result<VecRef> {
        let sk = self.with_frame(k, |fr, x| fr.sigma(x))?;
        let sl = self.with_frame(l, |fr, x| fr.sigma(x))?;
        fields::add(&sk, &fields::wedge(&self.w(), &sl)?)
    }

    /// Group derivative `∂_G`: fiber partial tensored with the dual basis.
    ///
    /// Defined on real and algebra valued fields; it is the zero map on
    /// dual-valued and endomorphism-valued fields.
    pub fn partial_g(&self, a: &FormRef) -> FormRef {
        let m = a.meta();
        if m.is_null() {
            return fields::null();
        }
        let l = m.valued.slot(self.slot);
        let target = match (l.up, l.down) {
            (0, 0) => Lie { up: 0, down: 1 },
            (1, 0) => Lie { up: 1, down: 1 },
            _ => return fields::null(),
        };
        retag(&partial(a, self.fiber as usize), m.valued.with_slot(self.slot, target))
    }

    /// Covariant exterior derivative `D = d - Γ ∧̄ ∂_t` on parametric fields.
    pub fn cov_d(&self, a: &FormRef) -> Result<FormRef> {
        let m = a.meta();
        if m.is_null() {
            return Ok(fields::null());
        }
        if m.axes != self.base() {
            return Err(Error::Axes(m.axes, self.base()));
        }
        if m.deg >= rank(m.axes) {
            return Ok(fields::null());
        }
        let graw = retag(&self.gamma, Valued::SCALAR);
        sub(&d(a), &wedge(&graw, &partial(a, self.fiber as usize))?)
    }

    /// Variance `χ = ∂_G Γ`.
    pub fn chi(&self) -> FormRef {
        self.partial_g(&self.gamma)
    }

    /// Curvature `Ω = DΓ`.
    pub fn curvature(&self) -> Result<FormRef> {
        self.cov_d(&self.gamma)
    }

    /// Split exterior derivative `[[D, ε_Ω], [∂_G, ε_χ - D]]`.
    pub fn d_matrix(&self, a: &FormRef, b: &FormRef) -> Result<(FormRef, FormRef)> {
        let om = self.curvature()?;
        let chi = self.chi();
        let top = add(&self.cov_d(a)?, &wedge(&om, b)?)?;
        let bot = add(&self.partial_g(a), &sub(&wedge(&chi, b)?, &self.cov_d(b)?)?)?;
        Ok((top, bot))
    }

    /// Same matrix through the factorization through the natural structure.
    pub fn d_matrix_factorized(&self, a: &FormRef, b: &FormRef) -> Result<(FormRef, FormRef)> {
        let a1 = add(a, &wedge(&self.gamma, b)?)?;
        let b1 = b.clone();
        let a2 = d(&a1);
        let b2 = sub(&self.partial_g(&a1), &d(&b1))?;
        let a3 = sub(&a2, &wedge(&self.gamma, &b2)?)?;
        Ok((a3, b2))
    }

    /// Change of connection `[[Id, ε_{Γ_self - Γ_other}], [0, Id]]`.
    pub fn change_connection(
        &self,
        other: &SplittingStructure,
        a: &FormRef,
        b: &FormRef,
    ) -> Result<(FormRef, FormRef)> {
        if other.bundle != self.bundle || other.fiber != self.fiber {
            return Err(Error::Axes(other.bundle, self.bundle));
        }
        let dg = sub(&self.gamma, &other.gamma)?;
        Ok((add(a, &wedge(&dg, b)?)?, b.clone()))
    }

    /// Lie derivative `L_k = Dι_k + ι_k D` on parametric fields.
    pub fn lie_k(&self, k: &VecRef, a: &FormRef) -> Result<FormRef> {
        add(&self.cov_d(&interior::<Co>(k, a)?)?, &interior::<Co>(k, &self.cov_d(a)?)?)
    }

    /// Split Lie derivative along `S⁻¹(k, ℓ̃)` applied to `(α, β̃)`.
    pub fn lie_matrix(&self, k: &VecRef, l: &VecRef, a: &FormRef, b: &FormRef) -> Result<(FormRef, FormRef)> {
        let lf = scalar_of(l)?;
        let om = self.curvature()?;
        let chi = self.chi();
        let top = fields::sum(&[
            self.lie_k(k, a)?,
            fields::times(&lf, &self.partial_g(a))?,
            wedge(&self.cov_d(&lf)?, b)?,
            fields::times(&lf, &wedge(&chi, b)?)?,
            wedge(&interior::<Co>(k, &om)?, b)?,
        ])?;
        let comm = sub(&self.partial_g(&interior::<Co>(k, a)?), &interior::<Co>(k, &self.partial_g(a))?)?;
        let bot = fields::sum(&[
            comm,
            self.lie_k(k, b)?,
            self.partial_g(&fields::times(&lf, b)?),
            neg(&wedge(&interior::<Co>(k, &chi)?, b)?),
        ])?;
        Ok((top, bot))
    }

    /// Split interior product along `S⁻¹(k, ℓ̃)`: `[[ι_k, ι_ℓ̃], [0, ι_{n(k)}]]`.
    pub fn interior_matrix(&self, k: &VecRef, l: &VecRef, a: &FormRef, b: &FormRef) -> Result<(FormRef, FormRef)> {
        let lf = scalar_of(l)?;
        let top = add(&interior::<Co>(k, a)?, &fields::times(&lf, b)?)?;
        let bot = interior::<Co>(&fields::sign_n(k), b)?;
        Ok((top, bot))
    }

    /// Split exterior product by the split pair `(φa, φb)`: `[[ε_φa, 0], [ε_φb, ε_{n(φa)}]]`.
    pub fn wedge_matrix(&self, pa: &FormRef, pb: &FormRef, a: &FormRef, b: &FormRef) -> Result<(FormRef, FormRef)> {
        let top = wedge(pa, a)?;
        let bot = add(&wedge(pb, a)?, &wedge(&fields::sign_n(pa), b)?)?;
        Ok((top, bot))
    }

    /// Anholonomity components `(C_ij⁰, C_0j⁰)` from the adapted frame.
    ///
    /// Computed by contracting `dε⁰` with the adapted frame vectors, which is
    /// independent of the splitting maps.
    pub fn anholonomity(&self) -> Result<(FormRef, FormRef)> {
        let de0 = d(&retag(&self.omega(), Valued::SCALAR));
        let base = self.base();
        let (bundle, fiber) = (self.bundle, self.fiber);
        let g = self.gamma.clone();
        let de = de0.clone();
        let nb = rank(base) as usize;
        let om = fields::form(Meta::new(base, 2).valued(Valued::alg(self.slot)), move |p| {
            let f = frame_vectors(&g, p, bundle, fiber);
            let w = de.eval(p);
            basis(base, 2)
                .iter()
                .map(|&m| {
                    let ij: Vec<usize> = bits(m).iter().map(|a| pos(base, *a)).collect();
                    pair2(&w, &f[1 + ij[0]], &f[1 + ij[1]])
                })
                .collect()
        })?;
        let g2 = self.gamma.clone();
        let chi = fields::form(Meta::new(base, 1).valued(Valued::tensor_of(self.slot)), move |p| {
            let f = frame_vectors(&g2, p, bundle, fiber);
            let w = de0.eval(p);
            (0..nb).map(|j| pair2(&w, &f[0], &f[1 + j])).collect()
        })?;
        Ok((om, chi))
    }

    /// Samples the defining conditions of the pre-metric classes.
    pub fn classify(&self, pts: &[[f64; 4]], tol: f64) -> Result<PremetricFlags> {
        let flat = fields::max_abs(&self.curvature()?, pts) < tol;
        let principal = fields::max_abs(&self.chi(), pts) < tol;
        let natural = fields::max_abs(&self.gamma, pts) < tol;
        Ok(PremetricFlags { flat, principal, holonomic: flat && principal, natural })
    }

    /// Bianchi residuals `(∂_G Ω - Dχ, DΩ + Ω ∧ χ)`.
    pub fn bianchi(&self) -> Result<(FormRef, FormRef)> {
        let om = self.curvature()?;
        let chi = self.chi();
        let r1 = sub(&self.partial_g(&om), &self.cov_d(&chi)?)?;
        let r2 = add(&self.cov_d(&om)?, &wedge(&om, &chi)?)?;
        Ok((r1, r2))
    }
}

fn bits(m: u8) -> Vec<u8> {
    (0..8).filter(|a| m >> a & 1 == 1).collect()
}

fn pos(axes: u8, a: u8) -> usize {
    (axes & ((1u8 << a) - 1)).count_ones() as usize
}

/// Adapted frame `e_0 = ∂_t`, `e_i = ∂_i - Γ_i ∂_t` as plain multivectors.
fn frame_vectors(g: &FormRef, p: &Pt, bundle: u8, fiber: u8) -> Vec<Ext<Hyper, Contra>> {
    let gam = g.eval(p);
    let mut out = Vec::new();
    out.push(Ext::unit(bundle, 1 << fiber, Hyper::constant(1.0)).expect("fiber axis"));
    for (m, gi) in gam.iter() {
        let mut e = Ext::unit(bundle, m, Hyper::constant(1.0)).expect("base axis");
        e.set(1 << fiber, -gi);
        out.push(e);
    }
    out
}

fn pair2(w: &Ext<Hyper, Co>, a: &Ext<Hyper, Contra>, b: &Ext<Hyper, Contra>) -> Hyper {
    let x = crate::exterior::interior(a, w).expect("same axes");
    crate::exterior::interior(b, &x).expect("same axes").get(0)
}

/// Views a degree-zero multivector field as a function.
pub fn scalar_of(l: &VecRef) -> Result<FormRef> {
    let m = l.meta();
    if m.is_null() {
        return Ok(fields::null());
    }
    if m.deg != 0 {
        return Err(Error::Degree(m.deg, 0));
    }
    let l = l.clone();
    let meta = Meta { deg: 0, ..m };
    let f = fields::form(meta, move |p| vec![l.eval(p).get(0)])?;
    Ok(f)
}

/// Views a dimensionless function as a degree-zero multivector field.
pub fn vector_of(f: &FormRef) -> Result<VecRef> {
    let m = f.meta();
    if m.deg != 0 {
        return Err(Error::Degree(m.deg, 0));
    }
    let f = f.clone();
    fields::vector(m, move |p| vec![f.eval(p).get(0)])
}

/// Splits a form at one point and returns plain components.
pub fn split_at(s: &SplittingStructure, g: &FormRef, x: [f64; 4]) -> Result<(Ext<f64, Co>, Ext<f64, Co>)> {
    let p = fields::pt(x);
    let fr = s.frame_at(&p);
    let (a, b) = fr.split(&g.eval(&p))?;
    Ok((a.map(|h| h.re()), b.map(|h| h.re())))
}
