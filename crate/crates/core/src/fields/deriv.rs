//! Exact partial, exterior and Lie derivatives of fields.

use std::sync::Arc;

use crate::error::Result;
use crate::exterior::{rank, wedge_sign, Co, Ext, Kind, Meta};
use crate::hyper::{Hyper, MAX_DEPTH};

use super::{add, interior, Field, FieldExt, FormRef, Pt, VecRef};

/// Derivative nesting already present in a point.
pub fn partial_depth(p: &Pt) -> usize {
    p.iter().map(|x| x.depth()).max().unwrap_or(0)
}

/// Evaluates `a` at `p` and returns the exact partial along `axis`.
fn eval_partial<K: Kind>(a: &dyn Field<K>, p: &Pt, axis: usize) -> Ext<Hyper, K> {
    let k = partial_depth(p);
    assert!(k < MAX_DEPTH, "derivative nesting exceeds {MAX_DEPTH}");
    let mut q = *p;
    q[axis] = q[axis].seed(k);
    a.eval(&q).map(|x| x.part(k))
}

struct Partial<K: Kind> {
    a: Arc<dyn Field<K>>,
    axis: usize,
}

impl<K: Kind> Field<K> for Partial<K> {
    fn meta(&self) -> Meta {
        self.a.meta()
    }
    fn eval(&self, p: &Pt) -> Ext<Hyper, K> {
        eval_partial(self.a.as_ref(), p, self.axis)
    }
}

/// Componentwise partial derivative along a chart axis; tags unchanged.
pub fn partial<K: Kind>(a: &Arc<dyn Field<K>>, axis: usize) -> Arc<dyn Field<K>> {
    Arc::new(Partial { a: a.clone(), axis })
}

struct ExtD {
    a: FormRef,
    meta: Meta,
}

impl Field<Co> for ExtD {
    fn meta(&self) -> Meta {
        self.meta
    }
    fn eval(&self, p: &Pt) -> Ext<Hyper, Co> {
        let axes = self.meta.axes;
        let mut out = Ext::zero(self.meta).expect("valid meta");
        for axis in 0..4u8 {
            if axes >> axis & 1 == 0 {
                continue;
            }
            let da = eval_partial(self.a.as_ref(), p, axis as usize);
            let bit = 1u8 << axis;
            for (m, x) in da.iter() {
                let s = wedge_sign(bit, m);
                if s != 0 {
                    out.add_at(bit | m, if s > 0 { x } else { -x });
                }
            }
        }
        out
    }
}

/// Exterior derivative over the field's own axes.
///
/// Coordinates outside the axis set act as parameters.
pub fn d(a: &FormRef) -> FormRef {
    let m = a.meta();
    if m.is_null() || m.deg >= rank(m.axes) {
        return super::null();
    }
    let mut meta = m;
    meta.deg += 1;
    Arc::new(ExtD { a: a.clone(), meta })
}

/// Lie derivative of a form along a vector field, by Cartan's formula.
pub fn lie(v: &VecRef, a: &FormRef) -> Result<FormRef> {
    add(&interior::<Co>(v, &d(a))?, &d(&interior::<Co>(v, a)?))
}

/// Central finite-difference partial of a field, as an independent oracle.
pub fn fd_partial<K: Kind>(a: &dyn Field<K>, x: [f64; 4], axis: usize, h: f64) -> Ext<f64, K> {
    let mut xp = x;
    let mut xm = x;
    xp[axis] += h;
    xm[axis] -= h;
    let mut xp2 = x;
    let mut xm2 = x;
    xp2[axis] += 2.0 * h;
    xm2[axis] -= 2.0 * h;
    let (fp, fm, fp2, fm2) = (a.at(xp), a.at(xm), a.at(xp2), a.at(xm2));
    let mut out = fp.clone();
    for (i, c) in out.components_mut().iter_mut().enumerate() {
        let p1 = fp.components()[i];
        let m1 = fm.components()[i];
        let p2 = fp2.components()[i];
        let m2 = fm2.components()[i];
        *c = (8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * h);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::{form, scalar};
    use super::*;
    use crate::dims::Dim;
    use crate::exterior::{basis, ALL_AXES};

    #[test]
    fn d_of_function_matches_gradient() {
        let f = scalar(ALL_AXES, Dim::NONE, |p| p[0] * p[1].sin() + p[3] * p[3] * p[2]);
        let df = d(&f).at([0.3, 0.5, -0.2, 0.7]);
        assert!((df.get(0b0001) - 0.5f64.sin()).abs() < 1e-15);
        assert!((df.get(0b0010) - 0.3 * 0.5f64.cos()).abs() < 1e-15);
        assert!((df.get(0b0100) - 0.49).abs() < 1e-15);
        assert!((df.get(0b1000) - 2.0 * 0.7 * -0.2).abs() < 1e-15);
    }

    #[test]
    fn dd_vanishes_exactly() {
        let a = form(Meta::new(ALL_AXES, 1), |p| {
            vec![p[1] * p[2].exp(), p[0] * p[0] * p[3], (p[1] * p[3]).sin(), p[2].cos() * p[0]]
        })
        .unwrap();
        let dda = d(&d(&a));
        assert!(dda.at([0.1, 0.2, 0.3, 0.4]).max_abs() < 1e-15);
    }

    #[test]
    fn exact_partial_agrees_with_finite_difference() {
        let a = form(Meta::new(ALL_AXES, 2), |p| {
            basis(ALL_AXES, 2).iter().map(|&m| (p[0] + 0.1 * m as f64 * p[1]).sin() * p[2].exp() + p[3]).collect()
        })
        .unwrap();
        let x = [0.2, -0.4, 0.1, 0.6];
        for axis in 0..4 {
            let exact = partial(&a, axis).at(x);
            let fd = fd_partial(a.as_ref(), x, axis, 1e-3);
            assert!(exact.dist(&fd) < 1e-9);
        }
    }

    #[test]
    fn d_respects_parameter_axes() {
        let f = scalar(0b1110, Dim::NONE, |p| p[0] * p[1]);
        let df = d(&f).at([2.0, 3.0, 0.0, 0.0]);
        assert_eq!(df.axes(), 0b1110);
        assert_eq!(df.get(0b0010), 2.0);
    }
}
