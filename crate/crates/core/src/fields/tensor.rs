//! Rank-two tensor fields, metrics and metric-dependent form operators.

use std::sync::Arc;

use crate::dims::Dim;
use crate::error::{Error, Result};
use crate::exterior::{rank, Co, Contra, Ext, Meta, Metric, Tensor2, Valued};
use crate::hyper::{Hyper, MAX_DEPTH};

use super::{partial_depth, pt, Field, FormRef, Pt, VecRef};

/// Smooth rank-two tensor field.
pub trait TensorField: Send + Sync {
    /// Axis set of both indices.
    fn axes(&self) -> u8;
    /// Dimension tag.
    fn dim(&self) -> Dim;
    /// Contravariant if true.
    fn upper(&self) -> bool {
        false
    }
    /// Value at a point.
    fn eval(&self, p: &Pt) -> Tensor2<Hyper>;
}

/// Shared tensor field.
pub type TensorRef = Arc<dyn TensorField>;

struct ClosureT<F> {
    axes: u8,
    dim: Dim,
    upper: bool,
    f: F,
}

impl<F: Fn(&Pt) -> Vec<Hyper> + Send + Sync> TensorField for ClosureT<F> {
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
        let m = (self.f)(p);
        Tensor2 { axes: self.axes, m, dim: self.dim, upper: self.upper, valued: Valued::SCALAR }
    }
}

/// Tensor field from a row-major component function over sorted axes.
pub fn closure_tensor(
    axes: u8,
    dim: Dim,
    upper: bool,
    f: impl Fn(&Pt) -> Vec<Hyper> + Send + Sync + 'static,
) -> Result<TensorRef> {
    let n = rank(axes) as usize;
    let found = f(&pt([0.1, 0.2, 0.3, 0.4])).len();
    if found != n * n {
        return Err(Error::Components { expected: n * n, found });
    }
    Ok(Arc::new(ClosureT { axes, dim, upper, f }))
}

/// Constant tensor field.
pub fn constant_tensor(t: Tensor2<f64>) -> TensorRef {
    let (axes, dim, upper) = (t.axes, t.dim, t.upper);
    let m: Vec<Hyper> = t.m.iter().map(|x| Hyper::constant(*x)).collect();
    Arc::new(ClosureT { axes, dim, upper, f: move |_: &Pt| m.clone() })
}

fn eval_tensor_partial(g: &dyn TensorField, p: &Pt, axis: usize) -> Tensor2<Hyper> {
    let k = partial_depth(p);
    assert!(k < MAX_DEPTH, "derivative nesting exceeds {MAX_DEPTH}");
    let mut q = *p;
    q[axis] = q[axis].seed(k);
    g.eval(&q).map(|x| x.part(k))
}

struct PartialT {
    g: TensorRef,
    axis: usize,
}

impl TensorField for PartialT {
    fn axes(&self) -> u8 {
        self.g.axes()
    }
    fn dim(&self) -> Dim {
        self.g.dim()
    }
    fn upper(&self) -> bool {
        self.g.upper()
    }
    fn eval(&self, p: &Pt) -> Tensor2<Hyper> {
        eval_tensor_partial(self.g.as_ref(), p, self.axis)
    }
}

/// Componentwise partial derivative of a tensor field.
pub fn tensor_partial(g: &TensorRef, axis: usize) -> TensorRef {
    Arc::new(PartialT { g: g.clone(), axis })
}

/// Metric with inverse and volume factor at a point.
pub fn metric_at(g: &dyn TensorField, p: &Pt) -> Result<Metric<Hyper>> {
    Metric::new(g.eval(p))
}

struct LieMetric {
    v: VecRef,
    g: TensorRef,
}

fn axis_list(axes: u8) -> Vec<usize> {
    (0..4).filter(|a| axes >> a & 1 == 1).collect()
}

impl TensorField for LieMetric {
    fn axes(&self) -> u8 {
        self.g.axes()
    }
    fn dim(&self) -> Dim {
        self.g.dim() * self.v.meta().dim
    }
    fn upper(&self) -> bool {
        self.g.upper()
    }
    fn eval(&self, p: &Pt) -> Tensor2<Hyper> {
        let axes = self.g.axes();
        let ax = axis_list(axes);
        let n = ax.len();
        let g = self.g.eval(p);
        let v = self.v.eval(p);
        let vc: Vec<Hyper> = ax.iter().map(|&a| v.get(1 << a)).collect();
        let dg: Vec<Tensor2<Hyper>> = ax.iter().map(|&a| eval_tensor_partial(self.g.as_ref(), p, a)).collect();
        let dv: Vec<Vec<Hyper>> = ax
            .iter()
            .map(|&a| {
                let k = partial_depth(p);
                let mut q = *p;
                q[a] = q[a].seed(k);
                let e = self.v.eval(&q);
                ax.iter().map(|&b| e.get(1 << b).part(k)).collect()
            })
            .collect();
        let mut m = vec![Hyper::constant(0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Hyper::constant(0.0);
                for r in 0..n {
                    s += vc[r] * dg[r].at(i, j);
                    if g.upper {
                        s -= g.at(r, j) * dv[r][i] + g.at(i, r) * dv[r][j];
                    } else {
                        s += g.at(r, j) * dv[i][r] + g.at(i, r) * dv[j][r];
                    }
                }
                m[i * n + j] = s;
            }
        }
        Tensor2 { axes, m, dim: self.dim(), upper: g.upper, valued: g.valued }
    }
}

/// Lie derivative of a rank-two tensor field along a vector field.
pub fn lie_metric(v: &VecRef, g: &TensorRef) -> Result<TensorRef> {
    let vm = v.meta();
    if vm.deg != 1 || vm.axes != g.axes() {
        return Err(Error::Operand("Lie derivative needs a vector field on the tensor's axes".into()));
    }
    if vm.valued != Valued::SCALAR {
        return Err(Error::Valued(vm.valued.to_string(), "R".into()));
    }
    Ok(Arc::new(LieMetric { v: v.clone(), g: g.clone() }))
}

fn proto_metric(axes: u8, dim: Dim) -> Metric<Hyper> {
    Metric::new(Tensor2::from_fn(axes, dim, |i, j| Hyper::constant(if i == j { 1.0 } else { 0.0 })))
        .expect("identity is invertible")
}

struct MetricOp<K: crate::exterior::Kind, L: crate::exterior::Kind> {
    g: TensorRef,
    a: Arc<dyn Field<K>>,
    f: fn(&Metric<Hyper>, &Ext<Hyper, K>) -> Result<Ext<Hyper, L>>,
    meta: Meta,
}

impl<K: crate::exterior::Kind, L: crate::exterior::Kind> Field<L> for MetricOp<K, L> {
    fn meta(&self) -> Meta {
        self.meta
    }
    fn eval(&self, p: &Pt) -> Ext<Hyper, L> {
        let m = metric_at(self.g.as_ref(), p).expect("metric non-degenerate on the sampled region");
        (self.f)(&m, &self.a.eval(p)).expect("shape checked at construction")
    }
}

fn metric_op<K: crate::exterior::Kind, L: crate::exterior::Kind>(
    g: &TensorRef,
    a: &Arc<dyn Field<K>>,
    f: fn(&Metric<Hyper>, &Ext<Hyper, K>) -> Result<Ext<Hyper, L>>,
) -> Result<Arc<dyn Field<L>>> {
    if g.upper() {
        return Err(Error::Operand("metric must be covariant".into()));
    }
    let pm = proto_metric(g.axes(), g.dim());
    let am = a.meta();
    let proto = if am.is_null() { Ext::null() } else { Ext::zero(am)? };
    let meta = *f(&pm, &proto)?.meta();
    Ok(Arc::new(MetricOp { g: g.clone(), a: a.clone(), f, meta }))
}

/// Riesz map of a multivector field.
pub fn riesz(g: &TensorRef, v: &VecRef) -> Result<FormRef> {
    metric_op::<Contra, Co>(g, v, |m, x| m.riesz(x))
}

/// Inverse Riesz map of a form field.
pub fn riesz_inv(g: &TensorRef, a: &FormRef) -> Result<VecRef> {
    metric_op::<Co, Contra>(g, a, |m, x| m.riesz_inv(x))
}

/// Hodge operator of a form field.
pub fn hodge(g: &TensorRef, a: &FormRef) -> Result<FormRef> {
    metric_op::<Co, Co>(g, a, |m, x| m.hodge(x))
}

/// Twisted volume form of a metric.
pub fn kappa(g: &TensorRef) -> Result<FormRef> {
    let one = super::constant(Ext::<f64, Co>::scalar(g.axes(), 1.0));
    metric_op::<Co, Co>(g, &one, |m, _| Ok(m.kappa()))
}

#[cfg(test)]
mod tests {
    use super::super::vector;
    use super::*;
    use crate::exterior::ALL_AXES;

    #[test]
    fn lie_derivative_of_flat_metric_along_dilation() {
        let g = constant_tensor(Tensor2::from_fn(ALL_AXES, Dim::L.pow(2), |i, j| {
            if i != j {
                0.0
            } else if i == 0 {
                1.0
            } else {
                -1.0
            }
        }));
        let v = vector(Meta::new(ALL_AXES, 1), |p| {
            vec![Hyper::constant(0.0), p[1], Hyper::constant(0.0), Hyper::constant(0.0)]
        })
        .unwrap();
        let l = lie_metric(&v, &g).unwrap().eval(&pt([0.0, 0.5, 0.0, 0.0])).map(|x| x.re());
        assert_eq!(l.at(1, 1), -2.0);
        assert_eq!(l.at(0, 0), 0.0);
        assert_eq!(l.at(2, 2), 0.0);
    }
}
