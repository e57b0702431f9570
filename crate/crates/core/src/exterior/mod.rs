//! Pointwise exterior algebra on charts of dimension at most four.
//!
//! Axes are bits of a `u8` mask. A multi-index is a submask; components of a
//! degree-`k` object are stored in lexicographic order of ascending index
//! tuples over its axis set.

mod linalg;
mod ops;
mod valued;

use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

pub use linalg::{det, inverse};
pub use ops::{interior, interior_tensor, kappa, linear_substitute, scalar_mul, wedge, wedge_tensor, Metric, Tensor2};
pub use valued::{Lie, Slot, Valued};

use crate::dims::{Dim, DimError};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Number of chart axes.
pub const CHART_DIM: usize = 4;
/// Mask of all chart axes.
pub const ALL_AXES: u8 = 0b1111;

struct Table {
    lists: Vec<Vec<Vec<u8>>>,
    pos: Vec<[u8; 16]>,
}

fn table() -> &'static Table {
    static T: OnceLock<Table> = OnceLock::new();
    T.get_or_init(|| {
        let mut lists = Vec::with_capacity(16);
        let mut pos = Vec::with_capacity(16);
        for axes in 0u8..16 {
            let mut by_deg = vec![Vec::new(); CHART_DIM + 1];
            let mut p = [u8::MAX; 16];
            for m in 0u8..16 {
                if m & !axes == 0 {
                    by_deg[m.count_ones() as usize].push(m);
                }
            }
            for list in by_deg.iter_mut() {
                list.sort_by_key(|m| tuple(*m));
                for (i, m) in list.iter().enumerate() {
                    p[*m as usize] = i as u8;
                }
            }
            lists.push(by_deg);
            pos.push(p);
        }
        Table { lists, pos }
    })
}

/// Ascending axis tuple of a mask.
pub fn tuple(mask: u8) -> Vec<u8> {
    (0..8).filter(|a| mask >> a & 1 == 1).collect()
}

/// Basis multi-indices of degree `deg` over `axes`, in storage order.
pub fn basis(axes: u8, deg: u8) -> &'static [u8] {
    &table().lists[axes as usize & 15][deg as usize]
}

/// Storage position of `mask` within its degree over `axes`.
pub fn position(axes: u8, mask: u8) -> usize {
    table().pos[axes as usize & 15][mask as usize & 15] as usize
}

/// Number of axes in a mask.
pub fn rank(axes: u8) -> u8 {
    axes.count_ones() as u8
}

/// Sign of `e_I ∧ e_J` relative to `e_{I∪J}`, or zero if they overlap.
pub fn wedge_sign(i: u8, j: u8) -> i32 {
    if i & j != 0 {
        return 0;
    }
    let mut inv = 0;
    for a in tuple(j) {
        inv += (i >> (a + 1)).count_ones();
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Covariant (form) or contravariant (multivector) index position.
pub trait Kind: Copy + Clone + Send + Sync + fmt::Debug + PartialEq + 'static {
    type Dual: Kind<Dual = Self>;
    const NAME: &'static str;
}

/// Marker for differential forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Co;
/// Marker for multivectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Contra;

impl Kind for Co {
    type Dual = Contra;
    const NAME: &'static str = "form";
}
impl Kind for Contra {
    type Dual = Co;
    const NAME: &'static str = "multivector";
}

/// Tags carried by every exterior object.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Meta {
    pub deg: u8,
    pub axes: u8,
    pub valued: Valued,
    /// Twisted with respect to orientation of the underlying manifold.
    pub twist_x: bool,
    /// Twisted with respect to orientation of the structure group.
    pub twist_g: bool,
    pub dim: Dim,
}

impl Meta {
    /// Untwisted, dimensionless, real-valued tags.
    pub const fn new(axes: u8, deg: u8) -> Meta {
        Meta { deg, axes, valued: Valued::SCALAR, twist_x: false, twist_g: false, dim: Dim::NONE }
    }

    /// Sets the value type.
    pub const fn valued(mut self, v: Valued) -> Meta {
        self.valued = v;
        self
    }

    /// Sets the dimension.
    pub const fn dim(mut self, d: Dim) -> Meta {
        self.dim = d;
        self
    }

    /// Sets the manifold twist.
    pub const fn twisted(mut self, t: bool) -> Meta {
        self.twist_x = t;
        self
    }

    /// Sets the structure-group twist.
    pub const fn twisted_g(mut self, t: bool) -> Meta {
        self.twist_g = t;
        self
    }

    /// Number of stored components.
    pub fn len(&self) -> usize {
        basis(self.axes, self.deg).len()
    }

    /// True if no components are stored.
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Tags of a structural zero.
    pub fn null() -> Meta {
        Meta::new(0, 0).valued(Valued::NULL)
    }

    /// True for a structural zero.
    pub fn is_null(&self) -> bool {
        self.valued.null
    }

    /// Checks that two tag sets may be added.
    pub fn check_add(&self, o: &Meta) -> Result<()> {
        if self.is_null() || o.is_null() {
            return Ok(());
        }
        if self.axes != o.axes {
            return Err(Error::Axes(self.axes, o.axes));
        }
        if self.deg != o.deg {
            return Err(Error::Degree(self.deg, o.deg));
        }
        if self.valued != o.valued {
            return Err(Error::Valued(self.valued.to_string(), o.valued.to_string()));
        }
        if self.twist_x != o.twist_x || self.twist_g != o.twist_g {
            return Err(Error::Twist);
        }
        if self.dim != o.dim {
            return Err(DimError { index: 1, expected: self.dim, found: o.dim }.into());
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        if self.deg > rank(self.axes) {
            return Err(Error::DegreeTooHigh { deg: self.deg, n: rank(self.axes) });
        }
        Ok(())
    }
}

impl fmt::Display for Meta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_null() {
            return f.write_str("0");
        }
        write!(f, "deg {} on {:?}, {}-valued, [{}]", self.deg, tuple(self.axes), self.valued, self.dim)?;
        if self.twist_x {
            f.write_str(", twisted")?;
        }
        if self.twist_g {
            f.write_str(", g-twisted")?;
        }
        Ok(())
    }
}

/// Homogeneous exterior object: a `deg`-form or `deg`-vector.
#[derive(Clone, PartialEq)]
pub struct Ext<T, K> {
    meta: Meta,
    c: Vec<T>,
    _k: PhantomData<K>,
}

/// Differential form at a point.
pub type CoForm<T> = Ext<T, Co>;
/// Multivector at a point.
pub type MultiVec<T> = Ext<T, Contra>;

impl<T: Real, K: Kind> Ext<T, K> {
    /// Zero object with the given tags.
    pub fn zero(meta: Meta) -> Result<Self> {
        meta.validate()?;
        Ok(Ext { meta, c: vec![T::zero(); meta.len()], _k: PhantomData })
    }

    /// Structural zero.
    pub fn null() -> Self {
        Ext { meta: Meta::null(), c: vec![T::zero()], _k: PhantomData }
    }

    /// Object from components in storage order.
    pub fn from_vec(meta: Meta, c: Vec<T>) -> Result<Self> {
        meta.validate()?;
        if c.len() != meta.len() {
            return Err(Error::Components { expected: meta.len(), found: c.len() });
        }
        Ok(Ext { meta, c, _k: PhantomData })
    }

    /// Scalar (degree zero) object.
    pub fn scalar(axes: u8, x: T) -> Self {
        Ext { meta: Meta::new(axes, 0), c: vec![x], _k: PhantomData }
    }

    /// Object with a single component `x` on multi-index `mask`.
    pub fn unit(axes: u8, mask: u8, x: T) -> Result<Self> {
        if mask & !axes != 0 {
            return Err(Error::Axes(mask, axes));
        }
        let mut e = Self::zero(Meta::new(axes, rank(mask)))?;
        e.set(mask, x);
        Ok(e)
    }

    /// Tags.
    pub fn meta(&self) -> &Meta {
        &self.meta
    }

    /// Degree.
    pub fn deg(&self) -> u8 {
        self.meta.deg
    }

    /// Axis mask.
    pub fn axes(&self) -> u8 {
        self.meta.axes
    }

    /// Value type.
    pub fn valued(&self) -> Valued {
        self.meta.valued
    }

    /// Dimension.
    pub fn dim(&self) -> Dim {
        self.meta.dim
    }

    /// True for a structural zero.
    pub fn is_null(&self) -> bool {
        self.meta.is_null()
    }

    /// Components in storage order.
    pub fn components(&self) -> &[T] {
        &self.c
    }

    /// Mutable components in storage order.
    pub fn components_mut(&mut self) -> &mut [T] {
        &mut self.c
    }

    /// Pairs of multi-index and component.
    pub fn iter(&self) -> impl Iterator<Item = (u8, T)> + '_ {
        let b: &[u8] = if self.is_null() { &[] } else { basis(self.meta.axes, self.meta.deg) };
        b.iter().copied().zip(self.c.iter().copied())
    }

    /// Component on multi-index `mask`; zero if absent.
    pub fn get(&self, mask: u8) -> T {
        if self.is_null() || mask & !self.meta.axes != 0 || rank(mask) != self.meta.deg {
            return T::zero();
        }
        self.c[position(self.meta.axes, mask)]
    }

    /// Sets the component on multi-index `mask`.
    ///
    /// # Panics
    /// Panics if `mask` is not a degree-`deg` subset of the axes.
    pub fn set(&mut self, mask: u8, x: T) {
        assert!(mask & !self.meta.axes == 0 && rank(mask) == self.meta.deg, "index outside object");
        let p = position(self.meta.axes, mask);
        self.c[p] = x;
    }

    /// Adds to the component on multi-index `mask`.
    pub fn add_at(&mut self, mask: u8, x: T) {
        let p = position(self.meta.axes, mask);
        self.c[p] = self.c[p] + x;
    }

    /// Replaces the tags, keeping degree and axes.
    pub fn with_meta(mut self, meta: Meta) -> Self {
        debug_assert!(meta.deg == self.meta.deg && meta.axes == self.meta.axes);
        self.meta = meta;
        self
    }

    /// Sets the value type.
    pub fn with_valued(mut self, v: Valued) -> Self {
        if !self.is_null() {
            self.meta.valued = v;
        }
        self
    }

    /// Sets the dimension.
    pub fn with_dim(mut self, d: Dim) -> Self {
        self.meta.dim = d;
        self
    }

    /// Sets both twist flags.
    pub fn with_twist(mut self, x: bool, g: bool) -> Self {
        self.meta.twist_x = x;
        self.meta.twist_g = g;
        self
    }

    /// Converts every component.
    pub fn map<U: Real>(&self, f: impl Fn(T) -> U) -> Ext<U, K> {
        Ext { meta: self.meta, c: self.c.iter().map(|x| f(*x)).collect(), _k: PhantomData }
    }

    /// Multiplies every component by `s`.
    pub fn scale(&self, s: T) -> Self {
        self.map(|x| x * s)
    }

    /// Multiplies by `s` and by the dimension `d`.
    pub fn scale_dim(&self, s: T, d: Dim) -> Self {
        let mut out = self.scale(s);
        out.meta.dim = out.meta.dim * d;
        out
    }

    /// The grading sign operator `n = (-1)^deg`.
    pub fn sign_n(&self) -> Self {
        if self.meta.deg % 2 == 1 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Rescales the basis of an algebra slot by `λ`.
    ///
    /// Components scale by `λ^(down-up)`; a negative `λ` reverses orientation
    /// of the group and toggles the group twist of the structure slot.
    pub fn rebase(&self, slot: Slot, lambda: T) -> Self {
        let w = self.meta.valued.weight(slot);
        let mut out = self.scale(lambda.powi(w));
        if slot == Slot::G && lambda < T::zero() && w % 2 != 0 {
            out.meta.twist_g = !out.meta.twist_g;
        }
        out
    }

    /// Sum with tag checking.
    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.meta.check_add(&o.meta)?;
        if self.is_null() {
            return Ok(o.clone());
        }
        if o.is_null() {
            return Ok(self.clone());
        }
        let c = self.c.iter().zip(&o.c).map(|(a, b)| *a + *b).collect();
        Ok(Ext { meta: self.meta, c, _k: PhantomData })
    }

    /// Difference with tag checking.
    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.try_add(&-o.clone())
    }

    /// Largest absolute component (real part).
    pub fn max_abs(&self) -> f64 {
        self.c.iter().map(|x| x.re64().abs()).fold(0.0, f64::max)
    }

    /// Largest absolute componentwise difference, ignoring tags.
    pub fn dist(&self, o: &Self) -> f64 {
        if self.is_null() {
            return o.max_abs();
        }
        if o.is_null() {
            return self.max_abs();
        }
        let mut m = 0.0f64;
        for (mask, x) in self.iter() {
            m = m.max((x - o.get(mask)).re64().abs());
        }
        for (mask, x) in o.iter() {
            if mask & !self.meta.axes != 0 {
                m = m.max(x.re64().abs());
            }
        }
        m
    }

    /// Reinterprets on a larger axis set (pullback along a projection).
    pub fn embed(&self, axes: u8) -> Result<Self> {
        if self.is_null() {
            return Ok(self.clone());
        }
        if self.meta.axes & !axes != 0 {
            return Err(Error::Axes(self.meta.axes, axes));
        }
        let mut meta = self.meta;
        meta.axes = axes;
        let mut out = Self::zero(meta)?;
        for (m, x) in self.iter() {
            out.set(m, x);
        }
        Ok(out)
    }

    /// Keeps only components on `axes` (pullback along an inclusion).
    pub fn restrict(&self, axes: u8) -> Result<Self> {
        if self.is_null() {
            return Ok(self.clone());
        }
        let mut meta = self.meta;
        meta.axes = axes;
        let mut out = Self::zero(meta)?;
        for (m, x) in self.iter() {
            if m & !axes == 0 {
                out.set(m, x);
            }
        }
        Ok(out)
    }
}

impl<T: Real, K: Kind> fmt::Debug for Ext<T, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}) {{", K::NAME, self.meta)?;
        for (m, x) in self.iter() {
            write!(f, " {:?}: {:?}", tuple(m), x)?;
        }
        f.write_str(" }")
    }
}

impl<T: Real, K: Kind> Add for Ext<T, K> {
    type Output = Self;
    /// # Panics
    /// Panics on incompatible tags; use [`Ext::try_add`] to handle them.
    fn add(self, o: Self) -> Self {
        self.try_add(&o).expect("incompatible exterior objects")
    }
}

impl<T: Real, K: Kind> Sub for Ext<T, K> {
    type Output = Self;
    /// # Panics
    /// Panics on incompatible tags; use [`Ext::try_sub`] to handle them.
    fn sub(self, o: Self) -> Self {
        self.try_sub(&o).expect("incompatible exterior objects")
    }
}

impl<T: Real, K: Kind> Neg for Ext<T, K> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|x| -x)
    }
}

impl<T: Real, K: Kind> Mul<T> for Ext<T, K> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        self.scale(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_is_lexicographic() {
        let b: Vec<Vec<u8>> = basis(ALL_AXES, 2).iter().map(|m| tuple(*m)).collect();
        assert_eq!(b, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        let b: Vec<Vec<u8>> = basis(0b1110, 2).iter().map(|m| tuple(*m)).collect();
        assert_eq!(b, vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        for axes in 0u8..16 {
            let total: usize = (0..=rank(axes)).map(|k| basis(axes, k).len()).sum();
            assert_eq!(total, 1 << rank(axes));
        }
    }

    #[test]
    fn wedge_sign_counts_inversions() {
        assert_eq!(wedge_sign(0b0001, 0b0010), 1);
        assert_eq!(wedge_sign(0b0010, 0b0001), -1);
        assert_eq!(wedge_sign(0b0110, 0b0001), 1);
        assert_eq!(wedge_sign(0b0100, 0b0011), 1);
        assert_eq!(wedge_sign(0b0010, 0b0101), -1);
        assert_eq!(wedge_sign(0b0011, 0b0001), 0);
    }

    #[test]
    fn addition_checks_tags() {
        let a = CoForm::<f64>::unit(ALL_AXES, 0b0011, 1.0).unwrap();
        let b = a.clone().with_dim(Dim::L);
        assert!(matches!(a.try_add(&b), Err(Error::Dim(_))));
        let c = a.clone().with_twist(true, false);
        assert_eq!(a.try_add(&c), Err(Error::Twist));
        let n = CoForm::<f64>::null();
        assert_eq!(a.try_add(&n).unwrap(), a);
    }

    #[test]
    fn rebase_scales_by_weight() {
        let a = CoForm::<f64>::scalar(ALL_AXES, 2.0).with_valued(Valued::COALG);
        assert_eq!(a.rebase(Slot::G, 3.0).get(0), 6.0);
        let v = a.clone().with_valued(Valued::ALG);
        assert_eq!(v.rebase(Slot::G, 2.0).get(0), 1.0);
        assert!(a.rebase(Slot::G, -1.0).meta().twist_g);
        let t = a.with_valued(Valued::TENSOR);
        assert_eq!(t.rebase(Slot::G, -5.0).get(0), 2.0);
    }
}
