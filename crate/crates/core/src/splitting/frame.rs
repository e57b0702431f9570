//! Pointwise splitting maps for a given connection value.

use crate::error::{Error, Result};
use crate::exterior::{
    basis, interior, interior_tensor, linear_substitute, wedge, Co, Contra, Ext, Meta, Slot, Valued,
};
use crate::scalar::Real;

/// Connection data at one point: fiber axis and Christoffel components.
#[derive(Clone, Debug)]
pub struct Frame<T> {
    /// Axes of the total space.
    pub bundle: u8,
    /// Fiber axis label.
    pub fiber: u8,
    /// Algebra acting along the fiber.
    pub slot: Slot,
    /// Christoffel form on the base axes, real coefficients of `dxⁱ ⊗ ∂_t`.
    pub gamma: Vec<T>,
}

impl<T: Real> Frame<T> {
    /// Base axes.
    pub fn base(&self) -> u8 {
        self.bundle & !(1 << self.fiber)
    }

    fn fbit(&self) -> u8 {
        1 << self.fiber
    }

    fn gamma_at(&self, axis: u8) -> T {
        let pos = (self.base() & ((1u8 << axis) - 1)).count_ones() as usize;
        self.gamma[pos]
    }

    /// Christoffel form as a real-valued base 1-form.
    pub fn gamma_form(&self) -> Ext<T, Co> {
        Ext::from_vec(Meta::new(self.base(), 1), self.gamma.clone()).expect("one component per base axis")
    }

    /// Connection form `ω = (dx^f + Γᵢ dxⁱ) ⊗ ∂_t` on the total space.
    pub fn omega(&self) -> Ext<T, Co> {
        let mut w = Ext::zero(Meta::new(self.bundle, 1).valued(Valued::alg(self.slot))).expect("degree one");
        w.set(self.fbit(), T::one());
        for &m in basis(self.base(), 1) {
            w.set(m, self.gamma_at(m.trailing_zeros() as u8));
        }
        w
    }

    /// Fundamental field `w = ∂_f ⊗ dt`.
    pub fn w(&self) -> Ext<T, Contra> {
        let mut w = Ext::zero(Meta::new(self.bundle, 1).valued(Valued::coalg(self.slot))).expect("degree one");
        w.set(self.fbit(), T::one());
        w
    }

    fn sigma_images(&self) -> [Option<Ext<T, Co>>; 4] {
        let base = self.base();
        let mut img: [Option<Ext<T, Co>>; 4] = Default::default();
        for a in 0..4u8 {
            if self.bundle >> a & 1 == 0 {
                continue;
            }
            img[a as usize] = Some(if a == self.fiber {
                -self.gamma_form()
            } else {
                Ext::unit(base, 1 << a, T::one()).expect("base axis")
            });
        }
        img
    }

    /// Parametric pullback `Σ*`: `dx^f ↦ -Γᵢ dxⁱ`, `dxⁱ ↦ dxⁱ`.
    pub fn sigma_star(&self, g: &Ext<T, Co>) -> Result<Ext<T, Co>> {
        if !g.is_null() && g.axes() != self.bundle {
            return Err(Error::Axes(g.axes(), self.bundle));
        }
        linear_substitute(g, &self.sigma_images(), self.base())
    }

    /// Horizontal lift on multivectors `Σ`: `∂ᵢ ↦ ∂ᵢ - Γᵢ ∂_f`.
    pub fn sigma(&self, k: &Ext<T, Contra>) -> Result<Ext<T, Contra>> {
        if !k.is_null() && k.axes() != self.base() {
            return Err(Error::Axes(k.axes(), self.base()));
        }
        let mut img: [Option<Ext<T, Contra>>; 4] = Default::default();
        for &m in basis(self.base(), 1) {
            let a = m.trailing_zeros() as u8;
            let mut e = Ext::zero(Meta::new(self.bundle, 1))?;
            e.set(m, T::one());
            e.set(self.fbit(), -self.gamma_at(a));
            img[a as usize] = Some(e);
        }
        linear_substitute(k, &img, self.bundle)
    }

    /// Projection `Π` on multivectors: drops components along the fiber.
    pub fn pi(&self, v: &Ext<T, Contra>) -> Result<Ext<T, Contra>> {
        if !v.is_null() && v.deg() > crate::exterior::rank(self.base()) {
            return Ok(Ext::null());
        }
        v.restrict(self.base())
    }

    /// Projection pullback `Π*` on forms: embeds base forms.
    pub fn pi_star(&self, a: &Ext<T, Co>) -> Result<Ext<T, Co>> {
        a.embed(self.bundle)
    }

    /// Horizontal part of a multivector, `ι_ω(w ∧ v)`.
    pub fn hor(&self, v: &Ext<T, Contra>) -> Result<Ext<T, Contra>> {
        interior(&self.omega(), &wedge(&self.w(), v)?)
    }

    /// Vertical part of a multivector, `w ∧ ι_ω v`.
    pub fn ver(&self, v: &Ext<T, Contra>) -> Result<Ext<T, Contra>> {
        wedge(&self.w(), &interior(&self.omega(), v)?)
    }

    /// Splitting of forms `S⁻*γ = (Σ*γ, Σ*ι_w γ)`.
    pub fn split(&self, g: &Ext<T, Co>) -> Result<(Ext<T, Co>, Ext<T, Co>)> {
        let a = self.sigma_star(g)?;
        let iw = interior_tensor(&self.w(), g)?;
        let b = if iw.is_null() { Ext::null() } else { self.sigma_star(&iw)? };
        Ok((a, b))
    }

    /// Inverse splitting `S*(α, β̃) = Π*α + ω ∧ Π*β̃`.
    pub fn unsplit(&self, a: &Ext<T, Co>, b: &Ext<T, Co>) -> Result<Ext<T, Co>> {
        let pa = self.pi_star(a)?;
        let pb = self.pi_star(b)?;
        let wb = wedge(&self.omega(), &pb)?;
        pa.try_add(&wb)
    }

    /// Splitting of multivectors `S v = (Πv, Π ι_ω v)`.
    pub fn split_vec(&self, v: &Ext<T, Contra>) -> Result<(Ext<T, Contra>, Ext<T, Contra>)> {
        let k = self.pi(v)?;
        let iw = interior_tensor(&self.omega(), v)?;
        let l = if iw.is_null() { Ext::null() } else { self.pi(&iw)? };
        Ok((k, l))
    }

    /// Inverse splitting of multivectors `S⁻¹(k, ℓ̃) = Σk + w ∧ Σℓ̃`.
    pub fn unsplit_vec(&self, k: &Ext<T, Contra>, l: &Ext<T, Contra>) -> Result<Ext<T, Contra>> {
        let sk = self.sigma(k)?;
        let sl = self.sigma(l)?;
        let wl = wedge(&self.w(), &sl)?;
        sk.try_add(&wl)
    }
}
