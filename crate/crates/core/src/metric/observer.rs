//! Pointwise observer data: lapse, shift, base metrics and split metric operators.

use crate::dims::{pd, Dim};
use crate::error::{Error, Result};
use crate::exterior::{
    interior, rank, scalar_mul, wedge, Co, CoForm, Contra, Ext, Meta, Metric, MultiVec, Tensor2, Valued,
};
use crate::scalar::Real;
use crate::splitting::Frame;

/// Which base metric a nonregular operator splitting is expressed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Basis {
    /// Diagonal matrices; valid only when the shift vanishes.
    Regular,
    /// Connection-induced metric `h_Σ`.
    Sigma,
    /// Fiber-induced metric `h_Π`.
    Pi,
}

/// Metric data of a splitting at one point.
#[derive(Clone)]
pub struct Observer<T> {
    /// Connection data.
    pub frame: Frame<T>,
    /// Space-time metric.
    pub g: Metric<T>,
    /// Lapse `N = |w|`, dual valued.
    pub n: CoForm<T>,
    /// `N⁻¹`, algebra valued.
    pub n_inv: CoForm<T>,
    /// Reciprocal lapse `N† = |ω|⁻¹`, dual valued.
    pub n_dag: CoForm<T>,
    /// `N⁻† = |ω|`, algebra valued.
    pub n_inv_dag: CoForm<T>,
    /// `ξ = N N⁻†`, real.
    pub xi: T,
    /// Reciprocal fundamental field `w†`.
    pub w_dag: MultiVec<T>,
    /// Reciprocal connection form `ω†`.
    pub omega_dag: CoForm<T>,
    /// Shift vector field `N⃗ = -Π w†`.
    pub shift: MultiVec<T>,
    /// Shift 1-form `ν = -Σ* ω†`.
    pub nu: CoForm<T>,
    /// Connection-induced metric `h_Σ = -Σ* g`.
    pub h_sigma: Metric<T>,
    /// Fiber-induced metric, `h_Π⁻¹ = -Π g⁻¹`.
    pub h_pi: Metric<T>,
    /// Vacuum speed of light as a dimensioned constant.
    pub c0: CoForm<T>,
}

type Pair<K, T> = (Ext<T, K>, Ext<T, K>);

fn mul<T: Real, K: crate::exterior::Kind>(f: &CoForm<T>, x: &Ext<T, K>) -> Result<Ext<T, K>> {
    scalar_mul(f, x)
}

fn sum<T: Real, K: crate::exterior::Kind>(xs: &[Ext<T, K>]) -> Result<Ext<T, K>> {
    let mut out = Ext::null();
    for x in xs {
        out = out.try_add(x)?;
    }
    Ok(out)
}

fn recip_dim<T: Real>(f: &CoForm<T>, valued: Valued) -> CoForm<T> {
    f.map(|x| x.recip()).with_valued(valued).with_dim(f.dim().inv())
}

impl<T: Real> Observer<T> {
    /// Observer data from the metric components and the connection at a point.
    ///
    /// Fails if `w` is not time-like or the horizontal subspace is not space-like.
    pub fn new(g: Tensor2<T>, frame: Frame<T>, c0: T) -> Result<Self> {
        let bundle = frame.bundle;
        if g.axes != bundle {
            return Err(Error::Axes(g.axes, bundle));
        }
        let base = frame.base();
        let slot = frame.slot;
        let g = Metric::new(g)?;
        let nb = rank(bundle) as usize;
        let fp = (bundle & ((1u8 << frame.fiber) - 1)).count_ones() as usize;
        let len = g.g.dim.sqrt().unwrap_or(Dim::L);

        let gff = g.g.at(fp, fp);
        if !(gff > T::zero()) {
            return Err(Error::Param("fundamental field is not time-like".into()));
        }
        let omega = frame.omega();
        let om: Vec<T> = (0..4u8).filter(|a| bundle >> a & 1 == 1).map(|a| omega.get(1 << a)).collect();
        let mut gi_om = vec![T::zero(); nb];
        for (a, x) in gi_om.iter_mut().enumerate() {
            for (b, o) in om.iter().enumerate() {
                *x = *x + g.ginv.at(a, b) * *o;
            }
        }
        let om2 = gi_om.iter().zip(&om).fold(T::zero(), |s, (x, o)| s + *x * *o);
        if !(om2 > T::zero()) {
            return Err(Error::Param("horizontal subspace is not space-like".into()));
        }

        let zero0 = |v: Valued, d: Dim, x: T| Ext::scalar(base, x).with_valued(v).with_dim(d);
        let nval = gff.sqrt();
        let n = zero0(Valued::coalg(slot), len, nval);
        let n_inv = recip_dim(&n, Valued::alg(slot));
        let n_inv_dag = zero0(Valued::alg(slot), len.inv(), om2.sqrt());
        let n_dag = recip_dim(&n_inv_dag, Valued::coalg(slot));
        let xi = nval * om2.sqrt();

        let ndag2 = om2.recip();
        let w_dag = Ext::from_vec(
            Meta::new(bundle, 1).valued(Valued::coalg(slot)),
            gi_om.iter().map(|x| *x * ndag2).collect(),
        )?;
        let omega_dag = Ext::from_vec(
            Meta::new(bundle, 1).valued(Valued::alg(slot)),
            (0..nb).map(|a| g.g.at(fp, a) / gff).collect(),
        )?;
        let shift = -frame.pi(&w_dag)?;
        let nu = -frame.sigma_star(&omega_dag)?;

        let rows = Self::sigma_rows(&frame);
        let h_sigma = Metric::new(g.g.transform(base, &rows).scale(-T::one()))?;
        let bpos: Vec<usize> = (0..nb).filter(|&a| a != fp).collect();
        let hpi_inv = Tensor2 {
            axes: base,
            m: bpos.iter().flat_map(|&a| bpos.iter().map(move |&b| (a, b))).map(|(a, b)| -g.ginv.at(a, b)).collect(),
            dim: g.ginv.dim,
            upper: true,
            valued: Valued::SCALAR,
        };
        let h_pi = Metric::new(hpi_inv.inverse()?)?;
        let c0 = zero0(Valued::SCALAR, pd::C0, c0);
        Ok(Observer { frame, g, n, n_inv, n_dag, n_inv_dag, xi, w_dag, omega_dag, shift, nu, h_sigma, h_pi, c0 })
    }

    /// Components of `Σ∂ᵢ = ∂ᵢ - Γᵢ∂_t` over the sorted bundle axes.
    pub fn sigma_rows(frame: &Frame<T>) -> Vec<Vec<T>> {
        let bundle = frame.bundle;
        let axes: Vec<u8> = (0..4u8).filter(|a| bundle >> a & 1 == 1).collect();
        let base: Vec<u8> = axes.iter().copied().filter(|&a| a != frame.fiber).collect();
        base.iter()
            .enumerate()
            .map(|(i, &b)| {
                axes.iter()
                    .map(|&a| {
                        if a == b {
                            T::one()
                        } else if a == frame.fiber {
                            -frame.gamma[i]
                        } else {
                            T::zero()
                        }
                    })
                    .collect()
            })
            .collect()
    }

    fn c0_inv(&self) -> CoForm<T> {
        recip_dim(&self.c0, Valued::SCALAR)
    }

    /// Shift matrix `[[Id, -ε_ν], [ι_v, s Id - ι_v ε_ν]]` applied to `(A, B)`.
    fn shift_sigma(&self, v: &MultiVec<T>, nu: &CoForm<T>, s: T, a: &CoForm<T>, b: &CoForm<T>) -> Result<Pair<Co, T>> {
        let nb = wedge(nu, b)?;
        let top = a.try_sub(&nb)?;
        let bot = sum(&[interior(v, a)?, b.scale(s), -interior(v, &nb)?])?;
        Ok((top, bot))
    }

    /// Shift matrix `[[Id - ε_ν ι_v, -ε_ν], [ι_v, Id]]` applied to `(A, B)`.
    fn shift_pi(&self, v: &MultiVec<T>, nu: &CoForm<T>, a: &CoForm<T>, b: &CoForm<T>) -> Result<Pair<Co, T>> {
        let c = interior(v, a)?.try_add(b)?;
        let top = a.try_sub(&wedge(nu, &c)?)?;
        Ok((top, c))
    }

    /// Split Riesz operator `S⁻* g S⁻¹` applied to a split multivector `(k, ℓ̃)`.
    pub fn riesz_split(&self, basis: Basis, k: &MultiVec<T>, l: &MultiVec<T>) -> Result<Pair<Co, T>> {
        let (h, f) = match basis {
            Basis::Regular | Basis::Sigma => (&self.h_sigma, &self.n),
            Basis::Pi => (&self.h_pi, &self.n_dag),
        };
        let a = h.riesz(&k.sign_n())?;
        let b = mul(f, &mul(f, &h.riesz(&l.sign_n())?)?)?;
        match basis {
            Basis::Regular => Ok((a, b)),
            Basis::Sigma => self.shift_sigma(&self.shift, &self.nu, self.xi.powi(-2), &a, &b),
            Basis::Pi => {
                let x2 = self.xi * self.xi;
                let (top, bot) = self.shift_pi(&self.shift.scale(x2), &self.nu, &a, &b.scale(x2))?;
                Ok((top, bot))
            }
        }
    }

    /// Split inverse Riesz operator `S g⁻¹ S*` applied to a split form `(α, β̃)`.
    pub fn riesz_inv_split(&self, basis: Basis, a: &CoForm<T>, b: &CoForm<T>) -> Result<Pair<Contra, T>> {
        let (a1, b1) = match basis {
            Basis::Regular => (a.clone(), b.clone()),
            Basis::Sigma => {
                let x2 = self.xi * self.xi;
                let c = b.try_sub(&interior(&self.shift, a)?)?.scale(x2);
                (a.try_add(&wedge(&self.nu, &c)?)?, c)
            }
            Basis::Pi => {
                let nb = wedge(&self.nu, b)?;
                let b1 = sum(&[-interior(&self.shift, a)?, b.scale(self.xi.powi(-2)), -interior(&self.shift, &nb)?])?;
                (a.try_add(&nb)?, b1)
            }
        };
        let (h, f) = match basis {
            Basis::Regular | Basis::Sigma => (&self.h_sigma, &self.n_inv),
            Basis::Pi => (&self.h_pi, &self.n_inv_dag),
        };
        let top = h.riesz_inv(&a1.sign_n())?;
        let bot = mul(f, &mul(f, &h.riesz_inv(&b1.sign_n())?)?)?;
        Ok((top, bot))
    }

    /// Split Hodge operator `S⁻* *₄ S*` applied to a split form `(α, β̃)`.
    pub fn hodge_split(&self, basis: Basis, a: &CoForm<T>, b: &CoForm<T>) -> Result<Pair<Co, T>> {
        let (h, fi, f) = match basis {
            Basis::Regular | Basis::Sigma => (&self.h_sigma, &self.n_inv, &self.n),
            Basis::Pi => (&self.h_pi, &self.n_inv_dag, &self.n_dag),
        };
        let ha = mul(fi, &h.hodge(&b.sign_n())?)?;
        let hb = mul(f, &h.hodge(a)?)?;
        match basis {
            Basis::Regular => Ok((ha, hb)),
            Basis::Sigma => {
                let (t, u) = self.shift_sigma(&self.shift, &self.nu, self.xi.powi(-2), &ha, &hb)?;
                Ok((t.scale(self.xi), u.scale(self.xi)))
            }
            Basis::Pi => {
                let x2 = self.xi * self.xi;
                let (t, u) = self.shift_pi(&self.shift.scale(x2), &self.nu, &ha.scale(self.xi.powi(-2)), &hb)?;
                Ok((t.scale(self.xi), u.scale(self.xi)))
            }
        }
    }

    /// Split of the unit space-time volume form.
    pub fn kappa_split(&self, basis: Basis) -> Result<Pair<Co, T>> {
        let k = match basis {
            Basis::Regular => mul(&self.n, &self.h_sigma.kappa())?,
            Basis::Sigma => mul(&self.n_dag, &self.h_sigma.kappa())?,
            Basis::Pi => mul(&self.n, &self.h_pi.kappa())?,
        };
        Ok((Ext::null(), k))
    }

    /// Proxy shift vector `v̄ = c₀N⁻¹N⃗`.
    pub fn shift_proxy(&self) -> Result<MultiVec<T>> {
        mul(&self.c0, &mul(&self.n_inv, &self.shift)?)
    }

    /// Proxy shift form `υ = c₀⁻¹Nν`.
    pub fn nu_proxy(&self) -> Result<CoForm<T>> {
        mul(&self.c0_inv(), &mul(&self.n, &self.nu)?)
    }

    /// Proxy map on split forms: `(α, β̃) ↦ (α, c₀N⁻¹β̃)`.
    pub fn proxy(&self, a: &CoForm<T>, b: &CoForm<T>) -> Result<Pair<Co, T>> {
        Ok((a.clone(), mul(&self.c0, &mul(&self.n_inv, b)?)?))
    }

    /// Inverse proxy map on split forms.
    pub fn proxy_inv(&self, a: &CoForm<T>, b: &CoForm<T>) -> Result<Pair<Co, T>> {
        Ok((a.clone(), mul(&self.c0_inv(), &mul(&self.n, b)?)?))
    }

    /// Proxy map on split multivectors: `(k, ℓ̃) ↦ (k, c₀⁻¹Nℓ̃)`.
    pub fn proxy_vec(&self, k: &MultiVec<T>, l: &MultiVec<T>) -> Result<Pair<Contra, T>> {
        Ok((k.clone(), mul(&self.c0_inv(), &mul(&self.n, l)?)?))
    }

    /// Inverse proxy map on split multivectors.
    pub fn proxy_vec_inv(&self, k: &MultiVec<T>, l: &MultiVec<T>) -> Result<Pair<Contra, T>> {
        Ok((k.clone(), mul(&self.c0, &mul(&self.n_inv, l)?)?))
    }

    /// Riesz operator on proxy pairs; `Basis::Pi` is not available.
    pub fn riesz_proxy(&self, basis: Basis, k: &MultiVec<T>, l: &MultiVec<T>) -> Result<Pair<Co, T>> {
        let h = &self.h_sigma;
        let a = h.riesz(&k.sign_n())?;
        let b = mul(&self.c0, &mul(&self.c0, &h.riesz(&l.sign_n())?)?)?;
        match basis {
            Basis::Regular => Ok((a, b)),
            Basis::Sigma => self.shift_sigma(&self.shift_proxy()?, &self.nu_proxy()?, self.xi.powi(-2), &a, &b),
            Basis::Pi => Err(Error::Operand("proxy splittings use the connection-induced metric".into())),
        }
    }

    /// Inverse Riesz operator on proxy pairs.
    pub fn riesz_inv_proxy(&self, basis: Basis, a: &CoForm<T>, b: &CoForm<T>) -> Result<Pair<Contra, T>> {
        let (a1, b1) = match basis {
            Basis::Regular => (a.clone(), b.clone()),
            Basis::Sigma => {
                let x2 = self.xi * self.xi;
                let c = b.try_sub(&interior(&self.shift_proxy()?, a)?)?.scale(x2);
                (a.try_add(&wedge(&self.nu_proxy()?, &c)?)?, c)
            }
            Basis::Pi => return Err(Error::Operand("proxy splittings use the connection-induced metric".into())),
        };
        let ci = self.c0_inv();
        let h = &self.h_sigma;
        Ok((h.riesz_inv(&a1.sign_n())?, mul(&ci, &mul(&ci, &h.riesz_inv(&b1.sign_n())?)?)?))
    }

    /// Hodge operator on proxy pairs.
    pub fn hodge_proxy(&self, basis: Basis, a: &CoForm<T>, b: &CoForm<T>) -> Result<Pair<Co, T>> {
        let h = &self.h_sigma;
        let ha = mul(&self.c0_inv(), &h.hodge(&b.sign_n())?)?;
        let hb = mul(&self.c0, &h.hodge(a)?)?;
        match basis {
            Basis::Regular => Ok((ha, hb)),
            Basis::Sigma => {
                let (t, u) = self.shift_sigma(&self.shift_proxy()?, &self.nu_proxy()?, self.xi.powi(-2), &ha, &hb)?;
                Ok((t.scale(self.xi), u.scale(self.xi)))
            }
            Basis::Pi => Err(Error::Operand("proxy splittings use the connection-induced metric".into())),
        }
    }
}
