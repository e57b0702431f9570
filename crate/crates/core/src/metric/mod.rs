//! Lorentzian metric on a split space-time: lapse and shift, base metrics,
//! split Riesz and Hodge operators, kinematic parameters and proxies.

mod observer;

use std::sync::Arc;

use serde::Serialize;

pub use observer::{Basis, Observer};

use crate::dims::{pd, Dim};
use crate::error::{Error, Result};
use crate::exterior::{rank, Co, CoForm, Ext, Kind, Meta, MultiVec, Tensor2, Valued};
use crate::fields::{
    self, add, interior, lie, lie_metric, retag, scale_dim, sub, tensor_partial, times, wedge, Field, FormRef, Pt,
    TensorField, TensorRef, VecRef,
};
use crate::hyper::Hyper;
use crate::splitting::{scalar_of, PremetricFlags, SplittingStructure};

/// Splitting structure together with a space-time metric.
#[derive(Clone)]
pub struct MetricSplitting {
    /// Underlying splitting structure.
    pub s: SplittingStructure,
    /// Space-time metric on the bundle chart, covariant, dimension `L²`.
    pub g: TensorRef,
    /// Value of `c₀` in program units.
    pub c0: f64,
}

/// Classification of a splitting with respect to a metric.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MetricFlags {
    #[serde(flatten)]
    pub premetric: PremetricFlags,
    /// Shift vanishes.
    pub regular: bool,
    /// Regular with `DN⁻¹ = 0` and `∂_G N⁻¹ = 0`.
    pub metric: bool,
    /// Natural and metric.
    pub standard: bool,
    /// `w` is a Killing field.
    pub stationary: bool,
}

/// Pointwise values of the inputs of an observer operation.
pub struct Vals<'a> {
    pub f: &'a [CoForm<Hyper>],
    pub v: &'a [MultiVec<Hyper>],
    pub t: &'a [Tensor2<Hyper>],
}

type ObsFn<L> = dyn Fn(&Observer<Hyper>, &Vals<'_>) -> Result<Ext<Hyper, L>> + Send + Sync;
type ObsTFn = dyn Fn(&Observer<Hyper>, &[Tensor2<Hyper>]) -> Result<Tensor2<Hyper>> + Send + Sync;

#[derive(Clone, Default)]
struct Inputs {
    f: Vec<FormRef>,
    v: Vec<VecRef>,
    t: Vec<TensorRef>,
}

impl Inputs {
    fn forms(f: &[&FormRef]) -> Self {
        Inputs { f: f.iter().map(|x| (*x).clone()).collect(), ..Default::default() }
    }
    fn vecs(v: &[&VecRef]) -> Self {
        Inputs { v: v.iter().map(|x| (*x).clone()).collect(), ..Default::default() }
    }
    fn tensors(t: &[&TensorRef]) -> Self {
        Inputs { t: t.iter().map(|x| (*x).clone()).collect(), ..Default::default() }
    }
}

fn proto_ext<K: Kind>(m: Meta) -> Ext<Hyper, K> {
    if m.is_null() {
        Ext::null()
    } else {
        Ext::zero(m).expect("valid meta")
    }
}

fn proto_tensor(t: &TensorRef) -> Tensor2<Hyper> {
    let n = rank(t.axes()) as usize;
    Tensor2 {
        axes: t.axes(),
        m: vec![Hyper::constant(0.0); n * n],
        dim: t.dim(),
        upper: t.upper(),
        valued: Valued::SCALAR,
    }
}

struct ObsField<L: Kind> {
    ms: MetricSplitting,
    inp: Inputs,
    f: Arc<ObsFn<L>>,
    meta: Meta,
}

impl<L: Kind> Field<L> for ObsField<L> {
    fn meta(&self) -> Meta {
        self.meta
    }
    fn eval(&self, p: &Pt) -> Ext<Hyper, L> {
        let o = self.ms.observer(p).expect("metric admissible at the sampled point");
        let f: Vec<_> = self.inp.f.iter().map(|a| a.eval(p)).collect();
        let v: Vec<_> = self.inp.v.iter().map(|a| a.eval(p)).collect();
        let t: Vec<_> = self.inp.t.iter().map(|a| a.eval(p)).collect();
        (self.f)(&o, &Vals { f: &f, v: &v, t: &t }).expect("shape checked at construction")
    }
}

struct ObsTensor {
    ms: MetricSplitting,
    inp: Vec<TensorRef>,
    f: Arc<ObsTFn>,
    axes: u8,
    dim: Dim,
    upper: bool,
}

impl TensorField for ObsTensor {
    fn axes(&self) -> u8 {
        self.axes
    }
    fn dim(&self) -> Dim {
        self.dim
    }
    fn upper(&self) -> bool {
        self.upper
    }
    fn eval(&self, p: &Pt) -> Tensor2<Hyper> {
        let o = self.ms.observer(p).expect("metric admissible at the sampled point");
        let t: Vec<_> = self.inp.iter().map(|a| a.eval(p)).collect();
        (self.f)(&o, &t).expect("shape checked at construction")
    }
}

type FPair = (FormRef, FormRef);
type VPair = (VecRef, VecRef);

impl MetricSplitting {
    /// Pairs a splitting structure with a metric; `c0` must be positive.
    pub fn new(s: SplittingStructure, g: TensorRef, c0: f64) -> Result<Self> {
        if g.axes() != s.bundle {
            return Err(Error::Axes(g.axes(), s.bundle));
        }
        if g.upper() {
            return Err(Error::Operand("metric must be covariant".into()));
        }
        if !(c0 > 0.0 && c0.is_finite()) {
            return Err(Error::Param(format!("c0 must be positive, got {c0}")));
        }
        Ok(MetricSplitting { s, g, c0 })
    }

    /// Observer data at a point.
    pub fn observer(&self, p: &Pt) -> Result<Observer<Hyper>> {
        Observer::new(self.g.eval(p), self.s.frame_at(p), Hyper::constant(self.c0))
    }

    /// Observer data at a plain point, real parts only.
    pub fn observer_at(&self, x: [f64; 4]) -> Result<Observer<f64>> {
        let p = fields::pt(x);
        let g = self.g.eval(&p).map(|h| h.re());
        let fr = self.s.frame_at(&p);
        let fr = crate::splitting::Frame {
            bundle: fr.bundle,
            fiber: fr.fiber,
            slot: fr.slot,
            gamma: fr.gamma.iter().map(|h| h.re()).collect(),
        };
        Observer::new(g, fr, self.c0)
    }

    fn proto(&self) -> Observer<Hyper> {
        let bundle = self.s.bundle;
        let fiber = self.s.fiber;
        let g = Tensor2 {
            axes: bundle,
            m: {
                let n = rank(bundle) as usize;
                let fp = (bundle & ((1u8 << fiber) - 1)).count_ones() as usize;
                (0..n * n)
                    .map(|k| {
                        let (i, j) = (k / n, k % n);
                        Hyper::constant(if i != j {
                            0.0
                        } else if i == fp {
                            1.0
                        } else {
                            -1.0
                        })
                    })
                    .collect()
            },
            dim: self.g.dim(),
            upper: false,
            valued: Valued::SCALAR,
        };
        let fr = crate::splitting::Frame {
            bundle,
            fiber,
            slot: self.s.slot,
            gamma: vec![Hyper::constant(0.0); rank(self.s.base()) as usize],
        };
        Observer::new(g, fr, Hyper::constant(self.c0)).expect("Minkowski prototype")
    }

    fn op<L: Kind>(
        &self,
        inp: Inputs,
        f: impl Fn(&Observer<Hyper>, &Vals<'_>) -> Result<Ext<Hyper, L>> + Send + Sync + 'static,
    ) -> Result<Arc<dyn Field<L>>> {
        let o = self.proto();
        let pf: Vec<_> = inp.f.iter().map(|a| proto_ext(a.meta())).collect();
        let pv: Vec<_> = inp.v.iter().map(|a| proto_ext(a.meta())).collect();
        let pt: Vec<_> = inp.t.iter().map(proto_tensor).collect();
        let meta = *f(&o, &Vals { f: &pf, v: &pv, t: &pt })?.meta();
        Ok(Arc::new(ObsField { ms: self.clone(), inp, f: Arc::new(f), meta }))
    }

    #[allow(clippy::type_complexity)]
    fn op2<L: Kind>(
        &self,
        inp: Inputs,
        f: impl Fn(&Observer<Hyper>, &Vals<'_>) -> Result<(Ext<Hyper, L>, Ext<Hyper, L>)> + Send + Sync + 'static,
    ) -> Result<(Arc<dyn Field<L>>, Arc<dyn Field<L>>)> {
        let f = Arc::new(f);
        let g = f.clone();
        Ok((self.op(inp.clone(), move |o, x| Ok(f(o, x)?.0))?, self.op(inp, move |o, x| Ok(g(o, x)?.1))?))
    }

    fn op_tensor(
        &self,
        inp: Vec<TensorRef>,
        axes: u8,
        dim: Dim,
        upper: bool,
        f: impl Fn(&Observer<Hyper>, &[Tensor2<Hyper>]) -> Result<Tensor2<Hyper>> + Send + Sync + 'static,
    ) -> TensorRef {
        Arc::new(ObsTensor { ms: self.clone(), inp, f: Arc::new(f), axes, dim, upper })
    }

    fn scalar_field(&self, f: fn(&Observer<Hyper>) -> CoForm<Hyper>) -> FormRef {
        self.op(Inputs::default(), move |o, _| Ok(f(o))).expect("degree-zero field")
    }

    /// Lapse `N`.
    pub fn lapse(&self) -> FormRef {
        self.scalar_field(|o| o.n.clone())
    }

    /// `N⁻¹`.
    pub fn lapse_inv(&self) -> FormRef {
        self.scalar_field(|o| o.n_inv.clone())
    }

    /// Reciprocal lapse `N†`.
    pub fn lapse_dag(&self) -> FormRef {
        self.scalar_field(|o| o.n_dag.clone())
    }

    /// `N⁻†`.
    pub fn lapse_inv_dag(&self) -> FormRef {
        self.scalar_field(|o| o.n_inv_dag.clone())
    }

    /// `ξ = N N⁻†`.
    pub fn xi(&self) -> FormRef {
        self.scalar_field(|o| Ext::scalar(o.frame.base(), o.xi))
    }

    /// Shift vector field `N⃗`.
    pub fn shift(&self) -> VecRef {
        self.op(Inputs::default(), |o, _| Ok(o.shift.clone())).expect("vector field")
    }

    /// Shift 1-form `ν`.
    pub fn shift_form(&self) -> FormRef {
        self.op(Inputs::default(), |o, _| Ok(o.nu.clone())).expect("1-form field")
    }

    /// Reciprocal fundamental field `w†`.
    pub fn w_dag(&self) -> VecRef {
        self.op(Inputs::default(), |o, _| Ok(o.w_dag.clone())).expect("vector field")
    }

    /// Reciprocal connection form `ω†`.
    pub fn omega_dag(&self) -> FormRef {
        self.op(Inputs::default(), |o, _| Ok(o.omega_dag.clone())).expect("1-form field")
    }

    /// Connection-induced metric `h_Σ = -Σ*g`.
    pub fn h_sigma(&self) -> TensorRef {
        self.op_tensor(vec![], self.s.base(), self.g.dim(), false, |o, _| Ok(o.h_sigma.g.clone()))
    }

    /// Fiber-induced metric `h_Π`.
    pub fn h_pi(&self) -> TensorRef {
        self.op_tensor(vec![], self.s.base(), self.g.dim(), false, |o, _| Ok(o.h_pi.g.clone()))
    }

    /// Rejects sample points with a nonvanishing shift.
    pub fn check_regular(&self, pts: &[[f64; 4]], tol: f64) -> Result<()> {
        for x in pts {
            let s = self.observer_at(*x)?.shift.max_abs();
            if s > tol {
                return Err(Error::Param(format!("splitting is not regular at {x:?} (shift {s:e})")));
            }
        }
        Ok(())
    }

    /// Split Riesz operator applied to a split multivector field.
    pub fn riesz_split(&self, b: Basis, k: &VecRef, l: &VecRef) -> Result<FPair> {
        self.op2(Inputs::vecs(&[k, l]), move |o, x| o.riesz_split(b, &x.v[0], &x.v[1]))
    }

    /// Split inverse Riesz operator applied to a split form field.
    pub fn riesz_inv_split(&self, b: Basis, a: &FormRef, bt: &FormRef) -> Result<VPair> {
        self.op2(Inputs::forms(&[a, bt]), move |o, x| o.riesz_inv_split(b, &x.f[0], &x.f[1]))
    }

    /// Split Hodge operator applied to a split form field.
    pub fn hodge_split(&self, b: Basis, a: &FormRef, bt: &FormRef) -> Result<FPair> {
        self.op2(Inputs::forms(&[a, bt]), move |o, x| o.hodge_split(b, &x.f[0], &x.f[1]))
    }

    /// Split of the space-time volume form.
    pub fn kappa_split(&self, b: Basis) -> Result<FPair> {
        self.op2(Inputs::default(), move |o, _| o.kappa_split(b))
    }

    /// Direct route `S⁻* g S⁻¹`.
    pub fn riesz_direct(&self, k: &VecRef, l: &VecRef) -> Result<FPair> {
        self.s.split(&fields::riesz(&self.g, &self.s.unsplit_vec(k, l)?)?)
    }

    /// Direct route `S g⁻¹ S*`.
    pub fn riesz_inv_direct(&self, a: &FormRef, b: &FormRef) -> Result<VPair> {
        self.s.split_vec(&fields::riesz_inv(&self.g, &self.s.unsplit(a, b)?)?)
    }

    /// Direct route `S⁻* *₄ S*`.
    pub fn hodge_direct(&self, a: &FormRef, b: &FormRef) -> Result<FPair> {
        self.s.split(&fields::hodge(&self.g, &self.s.unsplit(a, b)?)?)
    }

    /// Direct split of the space-time volume form.
    pub fn kappa_direct(&self) -> Result<FPair> {
        self.s.split(&fields::kappa(&self.g)?)
    }

    fn c0_dim(&self, a: &FormRef, k: i32) -> FormRef {
        scale_dim(a, self.c0.powi(k), pd::C0.pow(k as i8))
    }

    /// Four-velocity `u = c₀N⁻¹w`.
    pub fn four_velocity(&self) -> VecRef {
        self.op(Inputs::default(), |o, _| {
            let w = o.frame.w();
            crate::exterior::scalar_mul(&o.c0, &crate::exterior::scalar_mul(&o.n_inv, &w)?)
        })
        .expect("vector field")
    }

    /// Four-velocity form `μ = g u`.
    pub fn mu(&self) -> Result<FormRef> {
        fields::riesz(&self.g, &self.four_velocity())
    }

    /// Proper time derivative `∂_τ = c₀N⁻¹∂_G`.
    pub fn proper_time_d(&self, a: &FormRef) -> Result<FormRef> {
        Ok(self.c0_dim(&times(&self.lapse_inv(), &self.s.partial_g(a))?, 1))
    }

    /// Acceleration `δ̃ = c₀⁻¹N Σ* L_u μ`.
    pub fn acceleration(&self) -> Result<FormRef> {
        let lu = self.s.sigma_star(&lie(&self.four_velocity(), &self.mu()?)?)?;
        Ok(self.c0_dim(&times(&self.lapse(), &lu)?, -1))
    }

    /// Acceleration from the structure, `c₀(Nχ - DN)`.
    pub fn acceleration_structure(&self) -> Result<FormRef> {
        let n = self.lapse();
        let a = sub(&times(&n, &self.s.chi())?, &self.s.cov_d(&n)?)?;
        Ok(self.c0_dim(&a, 1))
    }

    /// Vorticity `η = ½Σ*dμ`.
    pub fn vorticity(&self) -> Result<FormRef> {
        Ok(fields::scale(&self.s.sigma_star(&fields::d(&self.mu()?))?, 0.5))
    }

    /// Vorticity from the structure, `½c₀NΩ`.
    pub fn vorticity_structure(&self) -> Result<FormRef> {
        let a = times(&self.lapse(), &self.s.curvature()?)?;
        Ok(fields::scale(&self.c0_dim(&a, 1), 0.5))
    }

    /// Split of `dμ`, equal to `(2η, δ̃)`.
    pub fn dmu_split(&self) -> Result<FPair> {
        self.s.split(&fields::d(&self.mu()?))
    }

    /// Expansion tensor `λ = -½Σ*L_u g`.
    pub fn expansion(&self) -> Result<TensorRef> {
        let lg = lie_metric(&self.four_velocity(), &self.g)?;
        let dim = lg.dim();
        Ok(self.op_tensor(vec![lg], self.s.base(), dim, false, |o, t| {
            Ok(t[0].transform(o.frame.base(), &Observer::sigma_rows(&o.frame)).scale(Hyper::constant(-0.5)))
        }))
    }

    /// Expansion from the structure, `½∂_τh_Σ`.
    pub fn expansion_structure(&self) -> Result<TensorRef> {
        let dh = tensor_partial(&self.h_sigma(), self.s.fiber as usize);
        let dim = dh.dim() * pd::C0 * Dim::L.inv();
        Ok(self.op_tensor(vec![dh], self.s.base(), dim, false, |o, t| {
            let f = o.c0.get(0) * o.n_inv.get(0) * Hyper::constant(0.5);
            let mut out = t[0].scale(f);
            out.dim = out.dim * o.c0.dim() * o.n_inv.dim();
            Ok(out)
        }))
    }

    /// Expansion scalar `Tr(h⁻¹λ)`.
    pub fn expansion_scalar(&self) -> Result<FormRef> {
        let lam = self.expansion()?;
        let h = self.h_sigma();
        let dim = lam.dim() * h.dim().inv();
        let base = self.s.base();
        self.op(Inputs::tensors(&[&lam]), move |o, x| {
            Ok(Ext::scalar(base, o.h_sigma.ginv.trace_with(&x.t[0])).with_dim(dim))
        })
    }

    /// Shear `σ = λ - (λ_s/(n-1)) h`.
    pub fn shear(&self) -> Result<TensorRef> {
        let lam = self.expansion()?;
        let dim = lam.dim();
        let nb = rank(self.s.base()) as f64;
        Ok(self.op_tensor(vec![lam], self.s.base(), dim, false, move |o, t| {
            let ls = o.h_sigma.ginv.trace_with(&t[0]);
            let mut h = o.h_sigma.g.scale(-ls / Hyper::constant(nb));
            h.dim = t[0].dim;
            t[0].try_add(&h)
        }))
    }

    /// Base volume form `κ₃` of `h_Σ`.
    pub fn kappa3(&self) -> Result<FormRef> {
        fields::kappa(&self.h_sigma())
    }

    /// Proxy map `(α, β̃) ↦ (α, c₀N⁻¹β̃)`.
    pub fn proxy(&self, a: &FormRef, b: &FormRef) -> Result<FPair> {
        Ok((a.clone(), self.c0_dim(&times(&self.lapse_inv(), b)?, 1)))
    }

    /// Inverse proxy map.
    pub fn proxy_inv(&self, a: &FormRef, b: &FormRef) -> Result<FPair> {
        Ok((a.clone(), self.c0_dim(&times(&self.lapse(), b)?, -1)))
    }

    /// Proxy map on split multivectors `(k, ℓ̃) ↦ (k, c₀⁻¹Nℓ̃)`.
    pub fn proxy_vec(&self, k: &VecRef, l: &VecRef) -> Result<VPair> {
        let c = self.c0_dim(&self.lapse(), -1);
        Ok((k.clone(), times(&c, l)?))
    }

    /// Inverse proxy map on split multivectors.
    pub fn proxy_vec_inv(&self, k: &VecRef, l: &VecRef) -> Result<VPair> {
        let c = self.c0_dim(&self.lapse_inv(), 1);
        Ok((k.clone(), times(&c, l)?))
    }

    /// Proxy acceleration `δ̄ = c₀²N⁻¹(χ - D)N`.
    pub fn delta_bar(&self) -> Result<FormRef> {
        let n = self.lapse();
        let a = sub(&times(&n, &self.s.chi())?, &self.s.cov_d(&n)?)?;
        Ok(self.c0_dim(&times(&self.lapse_inv(), &a)?, 2))
    }

    /// Proxy vorticity `2η̄ = c₀NΩ`.
    pub fn eta2_bar(&self) -> Result<FormRef> {
        Ok(self.c0_dim(&times(&self.lapse(), &self.s.curvature()?)?, 1))
    }

    /// Proxy exterior derivative `[[D, c₀⁻²ε_{2η̄}], [∂_τ, c₀⁻²ε_δ̄ - D]]`.
    pub fn proxy_d_matrix(&self, a: &FormRef, b: &FormRef) -> Result<FPair> {
        let e = self.c0_dim(&self.eta2_bar()?, -2);
        let dl = self.c0_dim(&self.delta_bar()?, -2);
        let top = add(&self.s.cov_d(a)?, &wedge(&e, b)?)?;
        let bot = fields::sum(&[self.proper_time_d(a)?, wedge(&dl, b)?, fields::neg(&self.s.cov_d(b)?)])?;
        Ok((top, bot))
    }

    /// Proxy Lie derivative along `(P S)⁻¹(k, ℓ)` applied to a proxy pair.
    pub fn proxy_lie_matrix(&self, k: &VecRef, l: &VecRef, a: &FormRef, b: &FormRef) -> Result<FPair> {
        let s = &self.s;
        let lf = scalar_of(l)?;
        let e = self.c0_dim(&self.eta2_bar()?, -2);
        let dl = self.c0_dim(&self.delta_bar()?, -2);
        let top = fields::sum(&[
            s.lie_k(k, a)?,
            times(&lf, &self.proper_time_d(a)?)?,
            wedge(&s.cov_d(&lf)?, b)?,
            times(&lf, &wedge(&dl, b)?)?,
            wedge(&interior::<Co>(k, &e)?, b)?,
        ])?;
        let comm = sub(&self.proper_time_d(&interior::<Co>(k, a)?)?, &interior::<Co>(k, &self.proper_time_d(a)?)?)?;
        let bot = fields::sum(&[
            comm,
            s.lie_k(k, b)?,
            self.proper_time_d(&times(&lf, b)?)?,
            fields::neg(&wedge(&interior::<Co>(k, &dl)?, b)?),
        ])?;
        Ok((top, bot))
    }

    /// Riesz operator on proxy pairs.
    pub fn riesz_proxy(&self, b: Basis, k: &VecRef, l: &VecRef) -> Result<FPair> {
        self.op2(Inputs::vecs(&[k, l]), move |o, x| o.riesz_proxy(b, &x.v[0], &x.v[1]))
    }

    /// Inverse Riesz operator on proxy pairs.
    pub fn riesz_inv_proxy(&self, b: Basis, a: &FormRef, bt: &FormRef) -> Result<VPair> {
        self.op2(Inputs::forms(&[a, bt]), move |o, x| o.riesz_inv_proxy(b, &x.f[0], &x.f[1]))
    }

    /// Hodge operator on proxy pairs.
    pub fn hodge_proxy(&self, b: Basis, a: &FormRef, bt: &FormRef) -> Result<FPair> {
        self.op2(Inputs::forms(&[a, bt]), move |o, x| o.hodge_proxy(b, &x.f[0], &x.f[1]))
    }

    /// Classification against the metric at sample points.
    pub fn classify(&self, pts: &[[f64; 4]], tol: f64) -> Result<MetricFlags> {
        let premetric = self.s.classify(pts, tol)?;
        let regular = fields::max_abs(&self.shift(), pts) <= tol;
        let ni = self.lapse_inv();
        let metric = regular
            && fields::max_abs(&self.s.cov_d(&ni)?, pts) <= tol
            && fields::max_abs(&self.s.partial_g(&ni), pts) <= tol;
        let lw = lie_metric(&retag(&self.s.w(), Valued::SCALAR), &self.g)?;
        let stationary = tensor_max_abs(&lw, pts) <= tol;
        Ok(MetricFlags { premetric, regular, metric, standard: premetric.natural && metric, stationary })
    }
}

/// Largest absolute component of a tensor field over sample points.
pub fn tensor_max_abs(t: &TensorRef, pts: &[[f64; 4]]) -> f64 {
    pts.iter().map(|x| t.eval(&fields::pt(*x)).max_abs()).fold(0.0, f64::max)
}

/// Largest componentwise distance between two tensor fields over sample points.
pub fn tensor_max_dist(a: &TensorRef, b: &TensorRef, pts: &[[f64; 4]]) -> f64 {
    pts.iter().map(|x| a.eval(&fields::pt(*x)).dist(&b.eval(&fields::pt(*x)))).fold(0.0, f64::max)
}

/// Value of a tensor field at a plain point.
pub fn tensor_at(t: &TensorRef, x: [f64; 4]) -> Tensor2<f64> {
    t.eval(&fields::pt(x)).map(|h| h.re())
}
