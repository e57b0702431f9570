//! Electromagnetic fields on a split space-time: splitting of potential,
//! field strength, excitation and current, Maxwell residuals, vacuum
//! constitutive relations, energy-momentum and force densities.
//!
//! The vacuum impedance `Z₀` is passed as a plain number and tagged with
//! [`pd::Z0`].

use std::sync::Arc;

use crate::dims::pd;
use crate::error::{Error, Result};
use crate::exterior::{tuple, Co, CoForm, Ext, Meta, Valued};
use crate::fields::{
    self, add, d, hodge, interior, lie, lie_metric, metric_at, neg, retag, scale, scale_dim, sub, sum, times, wedge,
    Field, FormRef, Pt, TensorRef, VecRef,
};
use crate::hyper::Hyper;
use crate::metric::{tensor_max_abs, MetricSplitting};
use crate::scalar::Real;
use crate::splitting::{integrate_g, scalar_of, SplittingStructure};

/// Names of the seven split Maxwell residuals, in the order returned by
/// [`maxwell_residuals`].
pub const MAXWELL_LAWS: [&str; 7] = [
    "magnetic Gauss",
    "Faraday",
    "Gauss",
    "Ampere-Maxwell",
    "magnetic potential",
    "electric potential",
    "charge continuity",
];

/// Names of the four residuals of [`maxwell_residuals_alt`].
pub const ALT_LAWS: [&str; 4] = ["magnetic Gauss", "Faraday", "Gauss", "Ampere-Maxwell"];

/// Space-time electromagnetic fields on the bundle chart.
#[derive(Clone)]
pub struct MaxwellFields {
    /// Potential 1-form, dimension `UT`.
    pub a: FormRef,
    /// Field strength 2-form, dimension `UT`.
    pub f: FormRef,
    /// Twisted excitation 2-form, dimension `IT`.
    pub h: FormRef,
    /// Twisted current 3-form, dimension `IT`.
    pub j: FormRef,
}

/// Parametric fields `S⁻*A = (a, -φ̃)`, `S⁻*F = (b, -ẽ)`, `S⁻*H = (d, h̃)`,
/// `S⁻*J = (ρ, -ȷ̃)`.
///
/// The same container holds the proxies `(a, φ)`, `(b, e)`, `(d, h)`,
/// `(ρ, j)` returned by [`SplitEm::to_proxy`].
#[derive(Clone)]
pub struct SplitEm {
    pub a: FormRef,
    pub phi: FormRef,
    pub b: FormRef,
    pub e: FormRef,
    pub d: FormRef,
    pub h: FormRef,
    pub rho: FormRef,
    pub j: FormRef,
}

/// Densities of the split energy-momentum tensor for a split generator `(k, ℓ̃)`.
#[derive(Clone)]
pub struct EnergyMomentum {
    /// Momentum density `p(k)`.
    pub p: FormRef,
    /// Energy density `w̃(ℓ̃)`.
    pub w: FormRef,
    /// Momentum flux density `m̃(k)`.
    pub m: FormRef,
    /// Energy flux density `s̃(ℓ̃)`.
    pub s: FormRef,
}

/// Split force densities `(f̃(k), r̃(ℓ̃))`.
#[derive(Clone)]
pub struct FourForce {
    pub f: FormRef,
    pub r: FormRef,
}

/// Momentum and energy balance residuals.
#[derive(Clone)]
pub struct Balance {
    pub momentum: FormRef,
    pub energy: FormRef,
}

/// Auxiliary fields of the natural nonregular splitting of a rotating chart.
#[derive(Clone)]
pub struct SchiffFields {
    /// `d* = Z₀⁻¹N⁻†*_Σ ẽ`.
    pub d_star: FormRef,
    /// `h* = Z₀⁻¹N†*_Σ b`.
    pub h_star: FormRef,
    /// Polarization `p_S = d - d*`.
    pub p_s: FormRef,
    /// Magnetization `m̃_S = h* - h̃`.
    pub m_s: FormRef,
    /// Charge `ρ_S = -d p_S`.
    pub rho_s: FormRef,
    /// Current `ȷ̃_S = d m̃_S + ∂_G p_S`.
    pub j_s: FormRef,
}

fn z_scale(a: &FormRef, z0: f64, k: i32) -> FormRef {
    scale_dim(a, z0.powi(k), pd::Z0.pow(k as i8))
}

fn c_scale(a: &FormRef, c0: f64, k: i32) -> FormRef {
    scale_dim(a, c0.powi(k), pd::C0.pow(k as i8))
}

fn check_z0(z0: f64) -> Result<()> {
    if z0 > 0.0 && z0.is_finite() {
        Ok(())
    } else {
        Err(Error::Param(format!("vacuum impedance must be positive, got {z0}")))
    }
}

fn expect(a: &FormRef, what: &str, deg: u8, twisted: bool, dim: crate::Dim) -> Result<()> {
    let m = a.meta();
    if m.is_null() {
        return Ok(());
    }
    if m.deg != deg || m.twist_x != twisted || m.valued != Valued::SCALAR {
        return Err(Error::Operand(format!("{what} must be a real {deg}-form (twisted: {twisted}), got {m}")));
    }
    crate::pd_check(&[dim, m.dim])?;
    Ok(())
}

impl MaxwellFields {
    /// Fields from a potential and an excitation: `F = dA`, `J = dH`.
    pub fn from_potentials(a: FormRef, h: FormRef) -> Result<Self> {
        expect(&a, "potential", 1, false, pd::F)?;
        expect(&h, "excitation", 2, true, pd::H)?;
        Ok(MaxwellFields { f: d(&a), j: d(&h), a, h })
    }

    /// Vacuum fields of a potential: `H = Z₀⁻¹*₄dA`, `J = dH`.
    pub fn vacuum(g: &TensorRef, a: FormRef, z0: f64) -> Result<Self> {
        check_z0(z0)?;
        let h = z_scale(&hodge(g, &d(&a))?, z0, -1);
        Self::from_potentials(a, h)
    }

    /// Lagrangian density `-½F∧H`, a twisted 4-form of dimension `A`.
    pub fn lagrangian(&self) -> Result<FormRef> {
        Ok(scale(&wedge(&self.f, &self.h)?, -0.5))
    }

    /// Energy-momentum 3-form `T_n = ½(ι_nH∧F - ι_nF∧H)`.
    pub fn stress_energy(&self, n: &VecRef) -> Result<FormRef> {
        let a = wedge(&interior::<Co>(n, &self.h)?, &self.f)?;
        let b = wedge(&interior::<Co>(n, &self.f)?, &self.h)?;
        Ok(scale(&sub(&a, &b)?, 0.5))
    }

    /// Four-force density `R_n = ι_nF∧J`.
    pub fn force_density(&self, n: &VecRef) -> Result<FormRef> {
        wedge(&interior::<Co>(n, &self.f)?, &self.j)
    }

    /// Body force `X_n = -½(F∧L_nH - H∧L_nF)`.
    pub fn body_force(&self, n: &VecRef) -> Result<FormRef> {
        let a = wedge(&self.f, &lie(n, &self.h)?)?;
        let b = wedge(&self.h, &lie(n, &self.f)?)?;
        Ok(scale(&sub(&a, &b)?, -0.5))
    }

    /// Residual of `R_n = dT_n + X_n`.
    pub fn force_balance(&self, n: &VecRef) -> Result<FormRef> {
        sub(&self.force_density(n)?, &add(&d(&self.stress_energy(n)?), &self.body_force(n)?)?)
    }
}

/// Splits the space-time fields.
pub fn split_em(s: &SplittingStructure, m: &MaxwellFields) -> Result<SplitEm> {
    let (a, pa) = s.split(&m.a)?;
    let (b, pf) = s.split(&m.f)?;
    let (dd, h) = s.split(&m.h)?;
    let (rho, pj) = s.split(&m.j)?;
    Ok(SplitEm { a, phi: neg(&pa), b, e: neg(&pf), d: dd, h, rho, j: neg(&pj) })
}

impl SplitEm {
    /// Reassembles the space-time fields.
    pub fn unsplit(&self, s: &SplittingStructure) -> Result<MaxwellFields> {
        Ok(MaxwellFields {
            a: s.unsplit(&self.a, &neg(&self.phi))?,
            f: s.unsplit(&self.b, &neg(&self.e))?,
            h: s.unsplit(&self.d, &self.h)?,
            j: s.unsplit(&self.rho, &neg(&self.j))?,
        })
    }

    /// Proxy fields: the second member of every pair is multiplied by `c₀N⁻¹`.
    pub fn to_proxy(&self, ms: &MetricSplitting) -> Result<SplitEm> {
        let px = |x: &FormRef| -> Result<FormRef> { Ok(ms.proxy(x, x)?.1) };
        Ok(SplitEm {
            a: self.a.clone(),
            phi: px(&self.phi)?,
            b: self.b.clone(),
            e: px(&self.e)?,
            d: self.d.clone(),
            h: px(&self.h)?,
            rho: self.rho.clone(),
            j: px(&self.j)?,
        })
    }

    /// Inverse of [`SplitEm::to_proxy`].
    pub fn from_proxy(&self, ms: &MetricSplitting) -> Result<SplitEm> {
        let px = |x: &FormRef| -> Result<FormRef> { Ok(ms.proxy_inv(x, x)?.1) };
        Ok(SplitEm {
            a: self.a.clone(),
            phi: px(&self.phi)?,
            b: self.b.clone(),
            e: px(&self.e)?,
            d: self.d.clone(),
            h: px(&self.h)?,
            rho: self.rho.clone(),
            j: px(&self.j)?,
        })
    }
}

/// Dimension audit of one equation: the dimensions of its summands.
#[derive(Clone, Debug)]
pub struct Audit {
    /// Equation name.
    pub id: String,
    /// Dimension of every summand.
    pub terms: Vec<crate::Dim>,
}

impl Audit {
    /// Collects the summand dimensions, ignoring structural zeros.
    pub fn of(id: impl Into<String>, terms: &[FormRef]) -> Self {
        let terms = terms.iter().map(|t| t.meta()).filter(|m| !m.is_null()).map(|m| m.dim).collect();
        Audit { id: id.into(), terms }
    }

    /// Common dimension of the summands.
    pub fn check(&self) -> std::result::Result<crate::Dim, crate::DimError> {
        crate::pd_check(&self.terms)
    }
}

fn total<const N: usize>(terms: [Vec<FormRef>; N]) -> Result<[FormRef; N]> {
    let v = terms.iter().map(|t| sum(t)).collect::<Result<Vec<_>>>()?;
    Ok(v.try_into().unwrap_or_else(|_| unreachable!("length preserved")))
}

/// Summands of the split Maxwell, potential and continuity equations.
pub fn maxwell_terms(s: &SplittingStructure, x: &SplitEm) -> Result<[Vec<FormRef>; 7]> {
    let om = s.curvature()?;
    let chi = s.chi();
    let dd = |a: &FormRef| s.cov_d(a);
    Ok([
        vec![dd(&x.b)?, neg(&wedge(&om, &x.e)?)],
        vec![dd(&x.e)?, s.partial_g(&x.b), neg(&wedge(&chi, &x.e)?)],
        vec![dd(&x.d)?, neg(&x.rho), wedge(&om, &x.h)?],
        vec![dd(&x.h)?, neg(&x.j), neg(&s.partial_g(&x.d)), neg(&wedge(&chi, &x.h)?)],
        vec![dd(&x.a)?, neg(&x.b), neg(&wedge(&om, &x.phi)?)],
        vec![dd(&x.phi)?, x.e.clone(), s.partial_g(&x.a), neg(&wedge(&chi, &x.phi)?)],
        vec![dd(&x.j)?, s.partial_g(&x.rho), neg(&wedge(&chi, &x.j)?)],
    ])
}

/// Residuals of the split Maxwell, potential and continuity equations,
/// named by [`MAXWELL_LAWS`].
pub fn maxwell_residuals(s: &SplittingStructure, x: &SplitEm) -> Result<[FormRef; 7]> {
    total(maxwell_terms(s, x)?)
}

/// Summands of the plain-`d` formulation.
pub fn maxwell_terms_alt(s: &SplittingStructure, x: &SplitEm) -> Result<[Vec<FormRef>; 4]> {
    let g = &s.gamma;
    let bb = sub(&x.b, &wedge(g, &x.e)?)?;
    let db = add(&x.d, &wedge(g, &x.h)?)?;
    Ok([
        vec![d(&bb)],
        vec![d(&x.e), s.partial_g(&bb)],
        vec![d(&db), neg(&x.rho), wedge(g, &x.j)?],
        vec![d(&x.h), neg(&x.j), neg(&s.partial_g(&db))],
    ])
}

/// Residuals of the plain-`d` formulation on the shifted combinations
/// `b - Γ∧ẽ` and `d + Γ∧h̃`, named by [`ALT_LAWS`].
pub fn maxwell_residuals_alt(s: &SplittingStructure, x: &SplitEm) -> Result<[FormRef; 4]> {
    total(maxwell_terms_alt(s, x)?)
}

/// The residuals of [`maxwell_residuals_alt`] obtained by changing to the
/// natural connection and applying its split exterior derivative.
pub fn maxwell_residuals_alt_via_connection(s: &SplittingStructure, x: &SplitEm) -> Result<[FormRef; 4]> {
    let nat = SplittingStructure::natural(s.bundle, s.fiber, s.slot);
    let (f1, f2) = s.change_connection(&nat, &x.b, &neg(&x.e))?;
    let (h1, h2) = s.change_connection(&nat, &x.d, &x.h)?;
    let (j1, j2) = s.change_connection(&nat, &x.rho, &neg(&x.j))?;
    let (tf, bf) = nat.d_matrix(&f1, &f2)?;
    let (th, bh) = nat.d_matrix(&h1, &h2)?;
    Ok([tf, bf, sub(&th, &j1)?, neg(&sub(&bh, &j2)?)])
}

/// Summands of the proxy Maxwell equations.
pub fn proxy_maxwell_terms(ms: &MetricSplitting, x: &SplitEm) -> Result<[Vec<FormRef>; 7]> {
    let s = &ms.s;
    let e2 = c_scale(&ms.eta2_bar()?, ms.c0, -2);
    let dl = c_scale(&ms.delta_bar()?, ms.c0, -2);
    let dd = |a: &FormRef| s.cov_d(a);
    let dt = |a: &FormRef| ms.proper_time_d(a);
    Ok([
        vec![dd(&x.b)?, neg(&wedge(&e2, &x.e)?)],
        vec![dd(&x.e)?, dt(&x.b)?, neg(&wedge(&dl, &x.e)?)],
        vec![dd(&x.d)?, neg(&x.rho), wedge(&e2, &x.h)?],
        vec![dd(&x.h)?, neg(&x.j), neg(&dt(&x.d)?), neg(&wedge(&dl, &x.h)?)],
        vec![dd(&x.a)?, neg(&x.b), neg(&wedge(&e2, &x.phi)?)],
        vec![dd(&x.phi)?, x.e.clone(), dt(&x.a)?, neg(&wedge(&dl, &x.phi)?)],
        vec![dd(&x.j)?, dt(&x.rho)?, neg(&wedge(&dl, &x.j)?)],
    ])
}

/// Residuals of the Maxwell equations in proxy form, named by [`MAXWELL_LAWS`].
pub fn proxy_maxwell_residuals(ms: &MetricSplitting, x: &SplitEm) -> Result<[FormRef; 7]> {
    total(proxy_maxwell_terms(ms, x)?)
}

/// Vacuum constitutive relations of a regular splitting,
/// `d = Z₀⁻¹N⁻¹*₃ẽ` and `h̃ = Z₀⁻¹N*₃b`.
///
/// Regularity is checked at the sample points `pts`.
pub fn constitutive_regular(
    ms: &MetricSplitting,
    z0: f64,
    e: &FormRef,
    b: &FormRef,
    pts: &[[f64; 4]],
    tol: f64,
) -> Result<(FormRef, FormRef)> {
    check_z0(z0)?;
    ms.check_regular(pts, tol)?;
    let h3 = ms.h_sigma();
    let dd = z_scale(&times(&ms.lapse_inv(), &hodge(&h3, e)?)?, z0, -1);
    let hh = z_scale(&times(&ms.lapse(), &hodge(&h3, b)?)?, z0, -1);
    Ok((dd, hh))
}

/// Vacuum constitutive relations for proxies, `d = ε₀*₃e` and `h = μ₀⁻¹*₃b`.
pub fn constitutive_proxy(ms: &MetricSplitting, z0: f64, e: &FormRef, b: &FormRef) -> Result<(FormRef, FormRef)> {
    check_z0(z0)?;
    let h3 = ms.h_sigma();
    let eps0 = c_scale(&z_scale(&hodge(&h3, e)?, z0, -1), ms.c0, -1);
    let mu0i = c_scale(&z_scale(&hodge(&h3, b)?, z0, -1), ms.c0, 1);
    Ok((eps0, mu0i))
}

fn levi(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Component form of the regular vacuum relations at one point,
/// `d_ij = Z₀⁻¹g₀₀^{-1/2}√|h| ε̂_ij^k ẽ_k` and
/// `h̃_i = ½Z₀⁻¹g₀₀^{1/2}√|h| ε̂_i^{kl} b_kl`.
///
/// `e` and `b` are plain components at `x` over the sorted base axes.
pub fn constitutive_components(
    ms: &MetricSplitting,
    z0: f64,
    x: [f64; 4],
    e: &CoForm<f64>,
    b: &CoForm<f64>,
) -> Result<(CoForm<f64>, CoForm<f64>)> {
    check_z0(z0)?;
    let o = ms.observer_at(x)?;
    let base = ms.s.base();
    let ax = tuple(base);
    if ax.len() != 3 {
        return Err(Error::Operand("component relations need a three-dimensional base".into()));
    }
    let g00 = o.n.get(0).powi(2);
    let h = &o.h_sigma;
    let sq = h.sqrt_det;
    let hi = |a: usize, b: usize| h.ginv.at(a, b);
    let ec: Vec<f64> = ax.iter().map(|a| e.get(1 << a)).collect();
    let bc = |k: usize, l: usize| -> f64 {
        if k == l {
            return 0.0;
        }
        let v = b.get(1 << ax[k] | 1 << ax[l]);
        if k < l {
            v
        } else {
            -v
        }
    };
    let dmeta = Meta::new(base, 2).twisted(true).dim(pd::H);
    let mut dd = CoForm::zero(dmeta)?;
    for i in 0..3 {
        for j in i + 1..3 {
            let mut s = 0.0;
            for k in 0..3 {
                for l in 0..3 {
                    s += levi(i, j, l) * hi(l, k) * ec[k];
                }
            }
            dd.set(1 << ax[i] | 1 << ax[j], s * sq / g00.sqrt() / z0);
        }
    }
    let hmeta = Meta::new(base, 1).valued(Valued::coalg(ms.s.slot)).twisted(true).dim(pd::H);
    let mut hh = CoForm::zero(hmeta)?;
    for i in 0..3 {
        let mut s = 0.0;
        for m in 0..3 {
            for n in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        s += levi(i, m, n) * hi(m, k) * hi(n, l) * bc(k, l);
                    }
                }
            }
        }
        hh.set(1 << ax[i], 0.5 * s * sq * g00.sqrt() / z0);
    }
    Ok((dd, hh))
}

/// Split energy-momentum densities for the split generator `(k, ℓ̃)`.
///
/// `k` is a base vector field, `ℓ̃` an algebra-valued function given as a
/// degree-zero multivector field; either may be null.
pub fn energy_momentum(x: &SplitEm, k: &VecRef, l: &VecRef) -> Result<EnergyMomentum> {
    let lf = scalar_of(l)?;
    let ik = |a: &FormRef| interior::<Co>(k, a);
    let p = wedge(&ik(&x.b)?, &x.d)?;
    let w = scale(&times(&lf, &add(&wedge(&x.e, &x.d)?, &wedge(&x.h, &x.b)?)?)?, 0.5);
    let half = scale(&ik(&add(&wedge(&x.d, &x.e)?, &wedge(&x.b, &x.h)?)?)?, 0.5);
    let m = sum(&[neg(&wedge(&ik(&x.d)?, &x.e)?), neg(&wedge(&ik(&x.b)?, &x.h)?), half])?;
    let s = scale(&add(&wedge(&times(&lf, &x.e)?, &x.h)?, &wedge(&x.e, &times(&lf, &x.h)?)?)?, 0.5);
    Ok(EnergyMomentum { p, w, m, s })
}

impl EnergyMomentum {
    /// Split of `T_n`: `(-p(k) + w̃(ℓ̃), -m̃(k) - s̃(ℓ̃))`.
    pub fn matrix(&self) -> Result<(FormRef, FormRef)> {
        Ok((sub(&self.w, &self.p)?, neg(&add(&self.m, &self.s)?)))
    }
}

/// Direct split of `T_n` with `n = S⁻¹(k, ℓ̃)`.
pub fn energy_momentum_direct(
    s: &SplittingStructure,
    m: &MaxwellFields,
    k: &VecRef,
    l: &VecRef,
) -> Result<(FormRef, FormRef)> {
    s.split(&m.stress_energy(&s.unsplit_vec(k, l)?)?)
}

/// Split force densities `f̃(k) = ι_kẽ∧ρ + ι_kb∧ȷ̃` and
/// `r̃(ℓ̃) = -½(ι_ℓ̃ẽ∧ȷ̃ + ẽ∧ι_ℓ̃ȷ̃)`.
pub fn four_force(x: &SplitEm, k: &VecRef, l: &VecRef) -> Result<FourForce> {
    let lf = scalar_of(l)?;
    let f = add(&wedge(&interior::<Co>(k, &x.e)?, &x.rho)?, &wedge(&interior::<Co>(k, &x.b)?, &x.j)?)?;
    let r = scale(&add(&wedge(&times(&lf, &x.e)?, &x.j)?, &wedge(&x.e, &times(&lf, &x.j)?)?)?, -0.5);
    Ok(FourForce { f, r })
}

/// Direct split of `R_n` with `n = S⁻¹(k, ℓ̃)`.
pub fn four_force_direct(
    s: &SplittingStructure,
    m: &MaxwellFields,
    k: &VecRef,
    l: &VecRef,
) -> Result<(FormRef, FormRef)> {
    s.split(&m.force_density(&s.unsplit_vec(k, l)?)?)
}

/// Largest component of `L_n g` over the sample points.
pub fn killing_defect(g: &TensorRef, n: &VecRef, pts: &[[f64; 4]]) -> Result<f64> {
    Ok(tensor_max_abs(&lie_metric(&retag(n, Valued::SCALAR), g)?, pts))
}

fn require_killing(g: &TensorRef, n: &VecRef, pts: &[[f64; 4]], tol: f64) -> Result<()> {
    if n.meta().is_null() {
        return Ok(());
    }
    let defect = killing_defect(g, n, pts)?;
    if defect > tol {
        return Err(Error::Param(format!("generator is not a Killing field (|L_n g| = {defect:e})")));
    }
    Ok(())
}

/// Momentum and energy balance residuals for the split generator `(k, ℓ̃)`:
/// `f̃(k) + ∂_G p(k) + (ε_χ - D)m̃(k)` and `r̃(ℓ̃) - ∂_G w̃(ℓ̃) + (ε_χ - D)s̃(ℓ̃)`.
///
/// Requires `n = S⁻¹(k, ℓ̃)` to be a Killing field at the sample points; then
/// the two residuals sum to zero. Each vanishes on its own when the other
/// argument is null.
pub fn balance_residuals(
    ms: &MetricSplitting,
    x: &SplitEm,
    k: &VecRef,
    l: &VecRef,
    pts: &[[f64; 4]],
    tol: f64,
) -> Result<Balance> {
    require_killing(&ms.g, &ms.s.unsplit_vec(k, l)?, pts, tol)?;
    let [momentum, energy] = total(balance_terms(&ms.s, x, k, l)?)?;
    Ok(Balance { momentum, energy })
}

/// Summands of the momentum and energy balance.
pub fn balance_terms(s: &SplittingStructure, x: &SplitEm, k: &VecRef, l: &VecRef) -> Result<[Vec<FormRef>; 2]> {
    let em = energy_momentum(x, k, l)?;
    let ff = four_force(x, k, l)?;
    let chi = s.chi();
    Ok([
        vec![ff.f, s.partial_g(&em.p), wedge(&chi, &em.m)?, neg(&s.cov_d(&em.m)?)],
        vec![ff.r, neg(&s.partial_g(&em.w)), wedge(&chi, &em.s)?, neg(&s.cov_d(&em.s)?)],
    ])
}

/// Proxy energy-momentum densities `p(k)`, `w`, `m(k)`, `s` from proxy fields.
pub fn energy_momentum_proxy(x: &SplitEm, k: &VecRef) -> Result<EnergyMomentum> {
    let ik = |a: &FormRef| interior::<Co>(k, a);
    let p = wedge(&ik(&x.b)?, &x.d)?;
    let w = scale(&add(&wedge(&x.e, &x.d)?, &wedge(&x.h, &x.b)?)?, 0.5);
    let half = scale(&ik(&add(&wedge(&x.d, &x.e)?, &wedge(&x.b, &x.h)?)?)?, 0.5);
    let m = sum(&[neg(&wedge(&ik(&x.d)?, &x.e)?), neg(&wedge(&ik(&x.b)?, &x.h)?), half])?;
    let s = wedge(&x.e, &x.h)?;
    Ok(EnergyMomentum { p, w, m, s })
}

/// Proxy force densities `f(k) = ι_ke∧ρ + ι_kb∧j` and `r = -e∧j`.
pub fn four_force_proxy(x: &SplitEm, k: &VecRef) -> Result<FourForce> {
    let f = add(&wedge(&interior::<Co>(k, &x.e)?, &x.rho)?, &wedge(&interior::<Co>(k, &x.b)?, &x.j)?)?;
    Ok(FourForce { f, r: neg(&wedge(&x.e, &x.j)?) })
}

/// Proxy balance residuals `f(k) + ∂_τp(k) + (c₀⁻²ε_δ̄ - D)m(k)` and
/// `r - ∂_τw + (c₀⁻²ε_δ̄ - D)s`.
///
/// The momentum residual needs `S⁻¹(k, 0)` to be a Killing field, the energy
/// residual needs `N⁻¹w`, the normalized four-velocity, to be one. Both are
/// checked at the sample points.
pub fn proxy_balance_residuals(
    ms: &MetricSplitting,
    x: &SplitEm,
    k: &VecRef,
    pts: &[[f64; 4]],
    tol: f64,
) -> Result<Balance> {
    let s = &ms.s;
    require_killing(&ms.g, &s.unsplit_vec(k, &fields::null())?, pts, tol)?;
    let u = times(&ms.lapse_inv(), &s.w())?;
    require_killing(&ms.g, &u, pts, tol)?;
    let [momentum, energy] = total(proxy_balance_terms(ms, x, k)?)?;
    Ok(Balance { momentum, energy })
}

/// Summands of the proxy momentum and energy balance.
pub fn proxy_balance_terms(ms: &MetricSplitting, x: &SplitEm, k: &VecRef) -> Result<[Vec<FormRef>; 2]> {
    let s = &ms.s;
    let em = energy_momentum_proxy(x, k)?;
    let ff = four_force_proxy(x, k)?;
    let dl = c_scale(&ms.delta_bar()?, ms.c0, -2);
    Ok([
        vec![ff.f, ms.proper_time_d(&em.p)?, wedge(&dl, &em.m)?, neg(&s.cov_d(&em.m)?)],
        vec![ff.r, neg(&ms.proper_time_d(&em.w)?), wedge(&dl, &em.s)?, neg(&s.cov_d(&em.s)?)],
    ])
}

struct ThetaTrace {
    g: TensorRef,
    lg: TensorRef,
}

impl Field<Co> for ThetaTrace {
    fn meta(&self) -> Meta {
        Meta::new(self.g.axes(), 0).dim(self.lg.dim() / self.g.dim())
    }
    fn eval(&self, p: &Pt) -> Ext<Hyper, Co> {
        let g = metric_at(self.g.as_ref(), p).expect("metric non-degenerate on the sampled region");
        let t = g.ginv.trace_with(&self.lg.eval(p));
        Ext::scalar(self.g.axes(), t).with_dim(self.meta().dim)
    }
}

struct ThetaBar {
    g: TensorRef,
    lg: TensorRef,
    a: FormRef,
}

/// Applies the degree-zero derivation induced by `e^c ↦ Σ_a m[a][c] e^a`.
fn derivation<T: Real>(x: &CoForm<T>, m: &[T]) -> Result<CoForm<T>> {
    if x.is_null() {
        return Ok(CoForm::null());
    }
    let axes = x.axes();
    let ax = tuple(axes);
    let n = ax.len();
    let pos = |a: u8| ax.iter().position(|&b| b == a).expect("axis in set");
    let mut out = CoForm::zero(*x.meta())?;
    for (mask, c) in x.iter() {
        if c.is_zero() {
            continue;
        }
        let idx = tuple(mask);
        for j in 0..idx.len() {
            for (ia, &a) in ax.iter().enumerate() {
                let coef = m[ia * n + pos(idx[j])];
                if coef.is_zero() {
                    continue;
                }
                let mut prod = CoForm::scalar(axes, c * coef);
                for (q, &b) in idx.iter().enumerate() {
                    let f = if q == j { a } else { b };
                    prod = crate::exterior::wedge(&prod, &CoForm::unit(axes, 1 << f, T::one())?)?;
                }
                for (mm, v) in prod.iter() {
                    out.add_at(mm, v);
                }
            }
        }
    }
    Ok(out)
}

impl Field<Co> for ThetaBar {
    fn meta(&self) -> Meta {
        self.a.meta()
    }
    fn eval(&self, p: &Pt) -> Ext<Hyper, Co> {
        let g = metric_at(self.g.as_ref(), p).expect("metric non-degenerate on the sampled region");
        let lg = self.lg.eval(p);
        let n = lg.n();
        let mut m = vec![Hyper::constant(0.0); n * n];
        for a in 0..n {
            for c in 0..n {
                let mut s = Hyper::constant(0.0);
                for b in 0..n {
                    s += lg.at(a, b) * g.ginv.at(b, c);
                }
                m[a * n + c] = s;
            }
        }
        derivation(&self.a.eval(p), &m).expect("tags checked at construction")
    }
}

/// Trace `Θ_n = Tr(g⁻¹L_n g)`.
pub fn theta_trace(g: &TensorRef, n: &VecRef) -> Result<FormRef> {
    let lg = lie_metric(n, g)?;
    Ok(Arc::new(ThetaTrace { g: g.clone(), lg }))
}

/// Dual operation `Θ̄_n = -g∘L_n g⁻¹` acting on a form as a derivation.
pub fn theta_bar(g: &TensorRef, n: &VecRef, a: &FormRef) -> Result<FormRef> {
    let lg = lie_metric(n, g)?;
    let m = a.meta();
    if !m.is_null() && m.axes != g.axes() {
        return Err(Error::Axes(m.axes, g.axes()));
    }
    if lg.dim() != g.dim() {
        return Err(Error::Operand("generator must be dimensionless".into()));
    }
    Ok(Arc::new(ThetaBar { g: g.clone(), lg, a: a.clone() }))
}

/// Both sides of `[L_n, *₄]α = (Θ̄_n - ½Θ_n)*₄α`.
pub fn hodge_commutator(g: &TensorRef, n: &VecRef, a: &FormRef) -> Result<(FormRef, FormRef)> {
    let ha = hodge(g, a)?;
    let lhs = sub(&lie(n, &ha)?, &hodge(g, &lie(n, a)?)?)?;
    let rhs = sub(&theta_bar(g, n, &ha)?, &scale(&times(&theta_trace(g, n)?, &ha)?, 0.5))?;
    Ok((lhs, rhs))
}

/// Schiff polarization, magnetization, charges and currents of a
/// nonregular splitting.
pub fn schiff_star_fields(ms: &MetricSplitting, z0: f64, x: &SplitEm) -> Result<SchiffFields> {
    check_z0(z0)?;
    let s = &ms.s;
    let h3 = ms.h_sigma();
    let d_star = z_scale(&times(&ms.lapse_inv_dag(), &hodge(&h3, &x.e)?)?, z0, -1);
    let h_star = z_scale(&times(&ms.lapse_dag(), &hodge(&h3, &x.b)?)?, z0, -1);
    let p_s = sub(&x.d, &d_star)?;
    let m_s = sub(&h_star, &x.h)?;
    let rho_s = neg(&s.cov_d(&p_s)?);
    let j_s = add(&s.cov_d(&m_s)?, &s.partial_g(&p_s))?;
    Ok(SchiffFields { d_star, h_star, p_s, m_s, rho_s, j_s })
}

/// Nonregular vacuum couplings `Z₀⁻¹N⁻†*_Σ ι_N⃗ b` and `-ι_N⃗ d`, the closed
/// forms of the Schiff polarization and magnetization.
pub fn schiff_couplings(ms: &MetricSplitting, z0: f64, x: &SplitEm) -> Result<(FormRef, FormRef)> {
    check_z0(z0)?;
    let nv = ms.shift();
    let p = z_scale(&times(&ms.lapse_inv_dag(), &hodge(&ms.h_sigma(), &interior::<Co>(&nv, &x.b)?)?)?, z0, -1);
    let m = neg(&interior::<Co>(&nv, &x.d)?);
    Ok((p, m))
}

/// Time integral of a dual-valued parametric form over `[t0, t1]` at the
/// base point of `x`, such as the voltage impulse of `ẽ` or the charge flow
/// of `ȷ̃`.
pub fn time_integral(
    s: &SplittingStructure,
    a: &FormRef,
    x: [f64; 4],
    t0: f64,
    t1: f64,
    tol: f64,
) -> Result<CoForm<f64>> {
    integrate_g(a, s.fiber, s.slot, x, t0, t1, tol)
}

/// Dimension audit of every implemented field equation, evaluated on the
/// given fields and generator `n`.
pub fn audit(ms: &MetricSplitting, z0: f64, m: &MaxwellFields, n: &VecRef) -> Result<Vec<Audit>> {
    check_z0(z0)?;
    let s = &ms.s;
    let x = split_em(s, m)?;
    let px = x.to_proxy(ms)?;
    let mut out = Vec::new();
    for (name, t) in MAXWELL_LAWS.iter().zip(maxwell_terms(s, &x)?) {
        out.push(Audit::of(format!("split {name}"), &t));
    }
    for (name, t) in ALT_LAWS.iter().zip(maxwell_terms_alt(s, &x)?) {
        out.push(Audit::of(format!("plain-d {name}"), &t));
    }
    for (name, t) in MAXWELL_LAWS.iter().zip(proxy_maxwell_terms(ms, &px)?) {
        out.push(Audit::of(format!("proxy {name}"), &t));
    }
    let h4 = z_scale(&hodge(&ms.g, &m.f)?, z0, -1);
    out.push(Audit::of("vacuum excitation", &[m.h.clone(), h4]));
    let h3 = ms.h_sigma();
    let dr = z_scale(&times(&ms.lapse_inv(), &hodge(&h3, &x.e)?)?, z0, -1);
    let hr = z_scale(&times(&ms.lapse(), &hodge(&h3, &x.b)?)?, z0, -1);
    out.push(Audit::of("regular electric constitutive", &[x.d.clone(), dr]));
    out.push(Audit::of("regular magnetic constitutive", &[x.h.clone(), hr]));
    let (dp, hp) = constitutive_proxy(ms, z0, &px.e, &px.b)?;
    out.push(Audit::of("proxy electric constitutive", &[px.d.clone(), dp]));
    out.push(Audit::of("proxy magnetic constitutive", &[px.h.clone(), hp]));
    let t1 = wedge(&interior::<Co>(n, &m.h)?, &m.f)?;
    let t2 = wedge(&interior::<Co>(n, &m.f)?, &m.h)?;
    out.push(Audit::of("energy-momentum tensor", &[t1, t2]));
    let t = m.stress_energy(n)?;
    out.push(Audit::of("force balance", &[m.force_density(n)?, d(&t), m.body_force(n)?]));
    out.push(Audit::of("lagrangian", &[m.lagrangian()?, wedge(&m.f, &m.h)?]));
    let (k, l) = s.split_vec(n)?;
    let [bm, be] = balance_terms(s, &x, &k, &l)?;
    out.push(Audit::of("momentum balance", &bm));
    out.push(Audit::of("energy balance", &be));
    let [pm, pe] = proxy_balance_terms(ms, &px, &k)?;
    out.push(Audit::of("proxy momentum balance", &pm));
    out.push(Audit::of("proxy energy balance", &pe));
    let tm = energy_momentum(&x, &k, &l)?;
    out.push(Audit::of("split energy-momentum", &[tm.p.clone(), tm.w.clone()]));
    out.push(Audit::of("split energy-momentum flux", &[tm.m.clone(), tm.s.clone()]));
    let sf = schiff_star_fields(ms, z0, &x)?;
    out.push(Audit::of("nonregular polarization", &[x.d.clone(), sf.d_star.clone()]));
    out.push(Audit::of("nonregular magnetization", &[sf.h_star.clone(), x.h.clone()]));
    out.push(Audit::of("nonregular current", &[s.cov_d(&sf.m_s)?, s.partial_g(&sf.p_s)]));
    Ok(out)
}
