//! Smooth fields over a chart and the operators acting on them.
//!
//! A field is evaluated at a chart point whose coordinates are [`Hyper`]
//! numbers. Derivative operators seed a fresh generator on one coordinate and
//! read back its coefficient, so arbitrarily nested operators stay exact.
//! Every builder validates tags against zero prototypes and returns a
//! [`Result`]; evaluation of a successfully built field does not fail.

mod deriv;
mod random;
mod tensor;

use std::sync::Arc;

pub use deriv::{d, fd_partial, lie, partial, partial_depth};
pub use random::{random_form, random_poly, random_vector, PolySpec};
pub use tensor::{
    closure_tensor, constant_tensor, hodge, kappa, lie_metric, metric_at, riesz, riesz_inv, tensor_partial,
    TensorField, TensorRef,
};

use crate::dims::Dim;
use crate::error::Result;
use crate::exterior::{self, Co, Contra, Ext, Kind, Meta, Valued};
use crate::hyper::Hyper;

/// Chart point with derivative-carrying coordinates.
pub type Pt = [Hyper; 4];

/// Lifts a plain point to a constant [`Pt`].
pub fn pt(x: [f64; 4]) -> Pt {
    x.map(Hyper::constant)
}

/// Smooth exterior-valued field.
pub trait Field<K: Kind = Co>: Send + Sync {
    /// Tags of every value.
    fn meta(&self) -> Meta;
    /// Value at a point.
    fn eval(&self, p: &Pt) -> Ext<Hyper, K>;
}

/// Shared form field.
pub type FormRef = Arc<dyn Field<Co>>;
/// Shared multivector field.
pub type VecRef = Arc<dyn Field<Contra>>;

/// Evaluation with plain coordinates and plain components.
pub trait FieldExt<K: Kind> {
    /// Value at a plain point, real parts only.
    fn at(&self, x: [f64; 4]) -> Ext<f64, K>;
}

impl<K: Kind, F: Field<K> + ?Sized> FieldExt<K> for F {
    fn at(&self, x: [f64; 4]) -> Ext<f64, K> {
        self.eval(&pt(x)).map(|h| h.re())
    }
}

struct Closure<K, F> {
    meta: Meta,
    f: F,
    _k: std::marker::PhantomData<fn() -> K>,
}

impl<K: Kind, F> Field<K> for Closure<K, F>
where
    F: Fn(&Pt) -> Vec<Hyper> + Send + Sync,
{
    fn meta(&self) -> Meta {
        self.meta
    }
    fn eval(&self, p: &Pt) -> Ext<Hyper, K> {
        Ext::from_vec(self.meta, (self.f)(p)).expect("closure returned wrong component count")
    }
}

/// Field from a component function in storage order.
pub fn closure<K: Kind>(
    meta: Meta,
    f: impl Fn(&Pt) -> Vec<Hyper> + Send + Sync + 'static,
) -> Result<Arc<dyn Field<K>>> {
    Ext::<f64, K>::zero(meta)?;
    let n = meta.len();
    let probe = f(&pt([0.1, 0.2, 0.3, 0.4]));
    if probe.len() != n {
        return Err(crate::Error::Components { expected: n, found: probe.len() });
    }
    Ok(Arc::new(Closure { meta, f, _k: std::marker::PhantomData }))
}

/// Form field from a component function.
pub fn form(meta: Meta, f: impl Fn(&Pt) -> Vec<Hyper> + Send + Sync + 'static) -> Result<FormRef> {
    closure::<Co>(meta, f)
}

/// Multivector field from a component function.
pub fn vector(meta: Meta, f: impl Fn(&Pt) -> Vec<Hyper> + Send + Sync + 'static) -> Result<VecRef> {
    closure::<Contra>(meta, f)
}

/// Scalar (degree zero) field.
pub fn scalar(axes: u8, dim: Dim, f: impl Fn(&Pt) -> Hyper + Send + Sync + 'static) -> FormRef {
    form(Meta::new(axes, 0).dim(dim), move |p| vec![f(p)]).expect("scalar field")
}

/// Constant field.
pub fn constant<K: Kind>(value: Ext<f64, K>) -> Arc<dyn Field<K>> {
    let meta = *value.meta();
    let v = value.map(Hyper::constant);
    struct Const<K>(Meta, Ext<Hyper, K>);
    impl<K: Kind> Field<K> for Const<K> {
        fn meta(&self) -> Meta {
            self.0
        }
        fn eval(&self, _: &Pt) -> Ext<Hyper, K> {
            self.1.clone()
        }
    }
    Arc::new(Const(meta, v))
}

/// Structural zero field.
pub fn null<K: Kind>() -> Arc<dyn Field<K>> {
    constant(Ext::<f64, K>::null())
}

type Op1<K, L> = dyn Fn(Ext<Hyper, K>) -> Result<Ext<Hyper, L>> + Send + Sync;
type Op2<A, B, L> = dyn Fn(Ext<Hyper, A>, Ext<Hyper, B>) -> Result<Ext<Hyper, L>> + Send + Sync;

struct Map1<K: Kind, L: Kind> {
    a: Arc<dyn Field<K>>,
    f: Box<Op1<K, L>>,
    meta: Meta,
}

impl<K: Kind, L: Kind> Field<L> for Map1<K, L> {
    fn meta(&self) -> Meta {
        self.meta
    }
    fn eval(&self, p: &Pt) -> Ext<Hyper, L> {
        (self.f)(self.a.eval(p)).expect("shape checked at construction")
    }
}

struct Map2<A: Kind, B: Kind, L: Kind> {
    a: Arc<dyn Field<A>>,
    b: Arc<dyn Field<B>>,
    f: Box<Op2<A, B, L>>,
    meta: Meta,
}

impl<A: Kind, B: Kind, L: Kind> Field<L> for Map2<A, B, L> {
    fn meta(&self) -> Meta {
        self.meta
    }
    fn eval(&self, p: &Pt) -> Ext<Hyper, L> {
        (self.f)(self.a.eval(p), self.b.eval(p)).expect("shape checked at construction")
    }
}

fn proto<K: Kind>(m: Meta) -> Ext<Hyper, K> {
    if m.is_null() {
        Ext::null()
    } else {
        Ext::zero(m).expect("valid meta")
    }
}

/// Pointwise unary operation; tags are derived from a zero prototype.
pub fn map<K: Kind, L: Kind>(
    a: &Arc<dyn Field<K>>,
    f: impl Fn(Ext<Hyper, K>) -> Result<Ext<Hyper, L>> + Send + Sync + 'static,
) -> Result<Arc<dyn Field<L>>> {
    let meta = *f(proto(a.meta()))?.meta();
    Ok(Arc::new(Map1 { a: a.clone(), f: Box::new(f), meta }))
}

/// Pointwise binary operation; tags are derived from zero prototypes.
pub fn zip<A: Kind, B: Kind, L: Kind>(
    a: &Arc<dyn Field<A>>,
    b: &Arc<dyn Field<B>>,
    f: impl Fn(Ext<Hyper, A>, Ext<Hyper, B>) -> Result<Ext<Hyper, L>> + Send + Sync + 'static,
) -> Result<Arc<dyn Field<L>>> {
    let meta = *f(proto(a.meta()), proto(b.meta()))?.meta();
    Ok(Arc::new(Map2 { a: a.clone(), b: b.clone(), f: Box::new(f), meta }))
}

/// Sum of two fields with tag checking.
pub fn add<K: Kind>(a: &Arc<dyn Field<K>>, b: &Arc<dyn Field<K>>) -> Result<Arc<dyn Field<K>>> {
    zip(a, b, |x, y| x.try_add(&y))
}

/// Difference of two fields with tag checking.
pub fn sub<K: Kind>(a: &Arc<dyn Field<K>>, b: &Arc<dyn Field<K>>) -> Result<Arc<dyn Field<K>>> {
    zip(a, b, |x, y| x.try_sub(&y))
}

/// Sum of several fields.
pub fn sum<K: Kind>(terms: &[Arc<dyn Field<K>>]) -> Result<Arc<dyn Field<K>>> {
    let mut acc = terms.first().cloned().unwrap_or_else(null);
    for t in terms.iter().skip(1) {
        acc = add(&acc, t)?;
    }
    Ok(acc)
}

/// Negation.
pub fn neg<K: Kind>(a: &Arc<dyn Field<K>>) -> Arc<dyn Field<K>> {
    map(a, |x| Ok(-x)).expect("negation keeps tags")
}

/// Multiplication by a dimensionless constant.
pub fn scale<K: Kind>(a: &Arc<dyn Field<K>>, s: f64) -> Arc<dyn Field<K>> {
    map(a, move |x| Ok(x.scale(Hyper::constant(s)))).expect("scaling keeps tags")
}

/// Multiplication by a dimensioned constant.
pub fn scale_dim<K: Kind>(a: &Arc<dyn Field<K>>, s: f64, dim: Dim) -> Arc<dyn Field<K>> {
    map(a, move |x| Ok(x.scale_dim(Hyper::constant(s), dim))).expect("scaling keeps degree")
}

/// Grading operator `(-1)^deg`.
pub fn sign_n<K: Kind>(a: &Arc<dyn Field<K>>) -> Arc<dyn Field<K>> {
    map(a, |x| Ok(x.sign_n())).expect("grading keeps tags")
}

/// Exterior product with paired values.
pub fn wedge<K: Kind>(a: &Arc<dyn Field<K>>, b: &Arc<dyn Field<K>>) -> Result<Arc<dyn Field<K>>> {
    zip(a, b, |x, y| exterior::wedge(&x, &y))
}

/// Exterior product with uncontracted values.
pub fn wedge_tensor<K: Kind>(a: &Arc<dyn Field<K>>, b: &Arc<dyn Field<K>>) -> Result<Arc<dyn Field<K>>> {
    zip(a, b, |x, y| exterior::wedge_tensor(&x, &y))
}

/// Interior product `ι_a b` with paired values.
pub fn interior<K: Kind>(a: &Arc<dyn Field<K::Dual>>, b: &Arc<dyn Field<K>>) -> Result<Arc<dyn Field<K>>> {
    zip(a, b, |x, y| exterior::interior(&x, &y))
}

/// Interior product with uncontracted values.
pub fn interior_tensor<K: Kind>(a: &Arc<dyn Field<K::Dual>>, b: &Arc<dyn Field<K>>) -> Result<Arc<dyn Field<K>>> {
    zip(a, b, |x, y| exterior::interior_tensor(&x, &y))
}

/// Replaces the value type, keeping components.
pub fn retag<K: Kind>(a: &Arc<dyn Field<K>>, v: Valued) -> Arc<dyn Field<K>> {
    map(a, move |x| Ok(x.with_valued(v))).expect("retagging keeps degree")
}

/// Replaces the twist flags, keeping components.
pub fn retwist<K: Kind>(a: &Arc<dyn Field<K>>, x: bool, g: bool) -> Arc<dyn Field<K>> {
    map(a, move |e| Ok(e.with_twist(x, g))).expect("retwisting keeps degree")
}

/// Reinterprets on a larger axis set.
pub fn embed<K: Kind>(a: &Arc<dyn Field<K>>, axes: u8) -> Result<Arc<dyn Field<K>>> {
    map(a, move |x| x.embed(axes))
}

/// Keeps only components on a smaller axis set.
pub fn restrict<K: Kind>(a: &Arc<dyn Field<K>>, axes: u8) -> Result<Arc<dyn Field<K>>> {
    map(a, move |x| x.restrict(axes))
}

/// Pointwise product with a scalar function, values paired.
pub fn times<K: Kind>(s: &FormRef, a: &Arc<dyn Field<K>>) -> Result<Arc<dyn Field<K>>> {
    zip(s, a, |f, x| crate::exterior::scalar_mul(&f, &x))
}

/// Largest componentwise distance between two fields over sample points.
pub fn max_dist<K: Kind>(a: &Arc<dyn Field<K>>, b: &Arc<dyn Field<K>>, pts: &[[f64; 4]]) -> f64 {
    pts.iter().map(|x| a.at(*x).dist(&b.at(*x))).fold(0.0, f64::max)
}

/// Largest absolute component of a field over sample points.
pub fn max_abs<K: Kind>(a: &Arc<dyn Field<K>>, pts: &[[f64; 4]]) -> f64 {
    pts.iter().map(|x| a.at(*x).max_abs()).fold(0.0, f64::max)
}
