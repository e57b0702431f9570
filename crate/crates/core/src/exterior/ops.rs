//! Exterior and interior products, Riesz maps and the Hodge operator.

use crate::dims::Dim;
use crate::error::{Error, Result};
use crate::scalar::Real;

use super::linalg::{det, inverse};
use super::{basis, rank, tuple, wedge_sign, CoForm, Ext, Kind, Meta, MultiVec, Valued};

fn product_meta(a: &Meta, b: &Meta, deg: u8, valued: Valued) -> Meta {
    Meta {
        deg,
        axes: a.axes,
        valued,
        twist_x: a.twist_x ^ b.twist_x,
        twist_g: a.twist_g ^ b.twist_g,
        dim: a.dim * b.dim,
    }
}

fn wedge_impl<T: Real, K: Kind>(a: &Ext<T, K>, b: &Ext<T, K>, valued: Valued) -> Result<Ext<T, K>> {
    if a.is_null() || b.is_null() || valued.null {
        return Ok(Ext::null());
    }
    if a.axes() != b.axes() {
        return Err(Error::Axes(a.axes(), b.axes()));
    }
    let deg = a.deg() + b.deg();
    if deg > rank(a.axes()) {
        return Ok(Ext::null());
    }
    let mut out = Ext::zero(product_meta(a.meta(), b.meta(), deg, valued))?;
    for (i, x) in a.iter() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter() {
            let s = wedge_sign(i, j);
            if s != 0 {
                let v = x * y;
                out.add_at(i | j, if s > 0 { v } else { -v });
            }
        }
    }
    Ok(out)
}

/// Exterior product; values are combined by pairing.
pub fn wedge<T: Real, K: Kind>(a: &Ext<T, K>, b: &Ext<T, K>) -> Result<Ext<T, K>> {
    wedge_impl(a, b, a.valued().pair(b.valued()))
}

/// Exterior product with an uncontracted tensor product of values.
pub fn wedge_tensor<T: Real, K: Kind>(a: &Ext<T, K>, b: &Ext<T, K>) -> Result<Ext<T, K>> {
    wedge_impl(a, b, a.valued().tensor(b.valued()))
}

/// Sign and remainder of contracting `e_J` into `e_I`, lowest index of `J` first.
fn contract_sign(j: u8, i: u8) -> Option<(i32, u8)> {
    if j & !i != 0 {
        return None;
    }
    let mut m = i;
    let mut s = 1;
    for a in tuple(j) {
        if (m & ((1u8 << a) - 1)).count_ones() % 2 == 1 {
            s = -s;
        }
        m &= !(1u8 << a);
    }
    Some((s, m))
}

fn interior_impl<T: Real, K: Kind>(a: &Ext<T, K::Dual>, b: &Ext<T, K>, valued: Valued) -> Result<Ext<T, K>> {
    if a.is_null() || b.is_null() || valued.null || a.deg() > b.deg() {
        return Ok(Ext::null());
    }
    if a.axes() != b.axes() {
        return Err(Error::Axes(a.axes(), b.axes()));
    }
    let ma = a.meta();
    let mb = b.meta();
    let meta = Meta {
        deg: mb.deg - ma.deg,
        axes: mb.axes,
        valued,
        twist_x: ma.twist_x ^ mb.twist_x,
        twist_g: ma.twist_g ^ mb.twist_g,
        dim: ma.dim * mb.dim,
    };
    let mut out = Ext::zero(meta)?;
    for (j, x) in a.iter() {
        if x.is_zero() {
            continue;
        }
        for (i, y) in b.iter() {
            if let Some((s, m)) = contract_sign(j, i) {
                let v = x * y;
                out.add_at(m, if s > 0 { v } else { -v });
            }
        }
    }
    Ok(out)
}

/// Interior product `ι_a b`; values are combined by pairing.
///
/// For a multi-index `a = e_{j1} ∧ e_{j2} ∧ …` the contractions are applied
/// in the order `j1, j2, …`.
pub fn interior<T: Real, K: Kind>(a: &Ext<T, K::Dual>, b: &Ext<T, K>) -> Result<Ext<T, K>> {
    interior_impl(a, b, a.valued().pair(b.valued()))
}

/// Interior product with an uncontracted tensor product of values.
pub fn interior_tensor<T: Real, K: Kind>(a: &Ext<T, K::Dual>, b: &Ext<T, K>) -> Result<Ext<T, K>> {
    interior_impl(a, b, a.valued().tensor(b.valued()))
}

/// Product with a degree-zero form, values paired.
pub fn scalar_mul<T: Real, K: Kind>(f: &CoForm<T>, x: &Ext<T, K>) -> Result<Ext<T, K>> {
    if f.is_null() || x.is_null() {
        return Ok(Ext::null());
    }
    if f.deg() != 0 {
        return Err(Error::Degree(f.deg(), 0));
    }
    let v = f.valued().pair(x.valued());
    if v.null {
        return Ok(Ext::null());
    }
    let mut meta = *x.meta();
    meta.valued = v;
    meta.dim = meta.dim * f.dim();
    meta.twist_x ^= f.meta().twist_x;
    meta.twist_g ^= f.meta().twist_g;
    Ok(x.scale(f.get(0)).with_meta(meta))
}

/// Algebra homomorphism induced by linear images of the degree-one basis.
///
/// `img[a]` is the image of the basis element on chart axis `a`; components
/// are multiplied out with the exterior product.
pub fn linear_substitute<T: Real, K: Kind>(x: &Ext<T, K>, img: &[Option<Ext<T, K>>; 4], axes: u8) -> Result<Ext<T, K>> {
    if x.is_null() {
        return Ok(Ext::null());
    }
    let mut meta = *x.meta();
    meta.axes = axes;
    if meta.deg > rank(axes) {
        return Ok(Ext::null());
    }
    let mut out = Ext::zero(meta)?;
    for (i, c) in x.iter() {
        if c.is_zero() {
            continue;
        }
        let mut prod = Ext::<T, K>::scalar(axes, c);
        for a in tuple(i) {
            let Some(e) = &img[a as usize] else {
                return Err(Error::Axes(i, axes));
            };
            prod = wedge(&prod, e)?;
            if prod.is_null() {
                break;
            }
        }
        if prod.is_null() {
            continue;
        }
        for (m, v) in prod.iter() {
            out.add_at(m, v);
        }
    }
    Ok(out)
}

/// Volume form `s · dx^{a1} ∧ … ∧ dx^{an}` over sorted axes, twisted.
pub fn kappa<T: Real>(axes: u8, s: T, dim: Dim) -> CoForm<T> {
    let meta = Meta::new(axes, rank(axes)).twisted(true).dim(dim);
    let mut k = CoForm::zero(meta).expect("top degree fits");
    k.set(axes, s);
    k
}

/// Rank-two tensor over an axis set, stored row-major over sorted axes.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor2<T> {
    pub axes: u8,
    pub m: Vec<T>,
    pub dim: Dim,
    /// Contravariant indices if true, covariant otherwise.
    pub upper: bool,
    pub valued: Valued,
}

impl<T: Real> Tensor2<T> {
    /// Covariant tensor from a component function over sorted axis positions.
    pub fn from_fn(axes: u8, dim: Dim, f: impl Fn(usize, usize) -> T) -> Self {
        let n = rank(axes) as usize;
        let m = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Tensor2 { axes, m, dim, upper: false, valued: Valued::SCALAR }
    }

    /// Number of axes.
    pub fn n(&self) -> usize {
        rank(self.axes) as usize
    }

    /// Component by sorted axis positions.
    pub fn at(&self, i: usize, j: usize) -> T {
        self.m[i * self.n() + j]
    }

    /// Component by chart axis labels.
    pub fn at_axes(&self, a: u8, b: u8) -> T {
        let pos = |x: u8| (self.axes & ((1u8 << x) - 1)).count_ones() as usize;
        self.at(pos(a), pos(b))
    }

    /// Converts components.
    pub fn map<U: Real>(&self, f: impl Fn(T) -> U) -> Tensor2<U> {
        Tensor2 {
            axes: self.axes,
            m: self.m.iter().map(|x| f(*x)).collect(),
            dim: self.dim,
            upper: self.upper,
            valued: self.valued,
        }
    }

    /// Multiplies every component by `s`.
    pub fn scale(&self, s: T) -> Self {
        self.map(|x| x * s)
    }

    /// Componentwise sum; tags must agree.
    pub fn try_add(&self, o: &Self) -> Result<Self> {
        if self.axes != o.axes {
            return Err(Error::Axes(self.axes, o.axes));
        }
        if self.dim != o.dim {
            return Err(crate::dims::DimError { index: 1, expected: self.dim, found: o.dim }.into());
        }
        if self.upper != o.upper || self.valued != o.valued {
            return Err(Error::Operand("tensor index type".into()));
        }
        let mut out = self.clone();
        for (x, y) in out.m.iter_mut().zip(&o.m) {
            *x = *x + *y;
        }
        Ok(out)
    }

    /// Largest absolute component difference.
    pub fn dist(&self, o: &Self) -> f64 {
        self.m.iter().zip(&o.m).map(|(a, b)| (*a - *b).re64().abs()).fold(0.0, f64::max)
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.m.iter().map(|a| a.re64().abs()).fold(0.0, f64::max)
    }

    /// Determinant of the component matrix.
    pub fn det(&self) -> T {
        det(&self.m, self.n())
    }

    /// Inverse tensor with opposite index type.
    pub fn inverse(&self) -> Result<Self> {
        let m = inverse(&self.m, self.n()).ok_or(Error::Degenerate)?;
        Ok(Tensor2 { axes: self.axes, m, dim: self.dim.inv(), upper: !self.upper, valued: self.valued })
    }

    /// Full contraction `T^{ij} S_{ij}` with a tensor of opposite type.
    pub fn trace_with(&self, o: &Self) -> T {
        let mut s = T::zero();
        for (a, b) in self.m.iter().zip(&o.m) {
            s = s + *a * *b;
        }
        s
    }

    /// Determinant of the minor with rows `rows` and columns `cols` (axis masks).
    fn minor(&self, rows: u8, cols: u8) -> T {
        let pos = |x: u8| (self.axes & ((1u8 << x) - 1)).count_ones() as usize;
        let r: Vec<usize> = tuple(rows).into_iter().map(pos).collect();
        let c: Vec<usize> = tuple(cols).into_iter().map(pos).collect();
        let k = r.len();
        let mut sub = Vec::with_capacity(k * k);
        for &i in &r {
            for &j in &c {
                sub.push(self.at(i, j));
            }
        }
        det(&sub, k)
    }

    fn induced<K: Kind, L: Kind>(&self, x: &Ext<T, K>) -> Result<Ext<T, L>> {
        if x.is_null() {
            return Ok(Ext::null());
        }
        if x.axes() != self.axes {
            return Err(Error::Axes(x.axes(), self.axes));
        }
        let k = x.deg();
        let mut meta = *x.meta();
        meta.dim = meta.dim * self.dim.pow(k as i8);
        meta.valued = self.valued.pair(meta.valued);
        let mut out = Ext::zero(meta)?;
        for &i in basis(self.axes, k) {
            let mut s = T::zero();
            for (j, v) in x.iter() {
                if !v.is_zero() {
                    s = s + self.minor(i, j) * v;
                }
            }
            out.set(i, s);
        }
        Ok(out)
    }

    /// Lowers every index of a multivector (covariant tensor required).
    pub fn lower(&self, v: &MultiVec<T>) -> Result<CoForm<T>> {
        if self.upper {
            return Err(Error::Operand("lowering needs a covariant tensor".into()));
        }
        self.induced(v)
    }

    /// Raises every index of a form (contravariant tensor required).
    pub fn raise(&self, f: &CoForm<T>) -> Result<MultiVec<T>> {
        if !self.upper {
            return Err(Error::Operand("raising needs a contravariant tensor".into()));
        }
        self.induced(f)
    }

    /// Pullback or pushforward by a linear map given as rows `e_i ↦ Σ_a p[i][a] e_a`.
    ///
    /// `basis_rows[i]` expresses the `i`-th new basis vector over the old
    /// sorted axes; the result lives on `axes`.
    pub fn transform(&self, axes: u8, basis_rows: &[Vec<T>]) -> Self {
        let n_old = self.n();
        let n = basis_rows.len();
        let mut m = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = T::zero();
                for a in 0..n_old {
                    for b in 0..n_old {
                        s = s + basis_rows[i][a] * self.at(a, b) * basis_rows[j][b];
                    }
                }
                m[i * n + j] = s;
            }
        }
        Tensor2 { axes, m, dim: self.dim, upper: self.upper, valued: self.valued }
    }
}

/// Metric at a point with its inverse and volume factor.
#[derive(Clone, Debug)]
pub struct Metric<T> {
    pub g: Tensor2<T>,
    pub ginv: Tensor2<T>,
    pub sqrt_det: T,
}

impl<T: Real> Metric<T> {
    /// Builds from a covariant non-degenerate tensor.
    pub fn new(g: Tensor2<T>) -> Result<Self> {
        if g.upper {
            return Err(Error::Operand("metric must be covariant".into()));
        }
        let d = g.det();
        if d.re64() == 0.0 || !d.re64().is_finite() {
            return Err(Error::Degenerate);
        }
        let ginv = g.inverse()?;
        Ok(Metric { sqrt_det: d.abs().sqrt(), g, ginv })
    }

    /// Axis set.
    pub fn axes(&self) -> u8 {
        self.g.axes
    }

    /// Riesz map on multivectors.
    pub fn riesz(&self, v: &MultiVec<T>) -> Result<CoForm<T>> {
        self.g.lower(v)
    }

    /// Inverse Riesz map on forms.
    pub fn riesz_inv(&self, f: &CoForm<T>) -> Result<MultiVec<T>> {
        self.ginv.raise(f)
    }

    /// Twisted volume form.
    pub fn kappa(&self) -> CoForm<T> {
        let n = rank(self.axes()) as i8;
        let d = self.g.dim.sqrt().unwrap_or(Dim::L).pow(n);
        kappa(self.axes(), self.sqrt_det, d)
    }

    /// Hodge operator `*γ = ι_{g⁻¹γ} κ`.
    pub fn hodge(&self, f: &CoForm<T>) -> Result<CoForm<T>> {
        if f.is_null() {
            return Ok(CoForm::null());
        }
        interior(&self.riesz_inv(f)?, &self.kappa())
    }
}
