//! Truncated multivariate hyper-dual numbers.
//!
//! A [`Hyper`] carries one coefficient for every subset of up to
//! [`MAX_DEPTH`] nilpotent generators `e_k` with `e_k * e_k = 0`. Seeding a
//! coordinate with a fresh generator and reading the coefficient of that
//! generator yields an exact partial derivative, and nesting generators yields
//! exact mixed partials. Field operators rely on this to differentiate
//! without step-size error.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::num::FpCategory;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign};

use num_traits::{Float, FromPrimitive, Num, NumCast, One, ToPrimitive, Zero};

/// Maximum number of nested derivative generators.
pub const MAX_DEPTH: usize = 4;
const CAP: usize = 1 << MAX_DEPTH;

/// Number with exact nested derivative parts.
///
/// Coefficients are indexed by generator subsets encoded as bitmasks. Entries
/// at or above `1 << depth` are always zero.
#[derive(Clone, Copy)]
pub struct Hyper {
    depth: u8,
    c: [f64; CAP],
}

impl Hyper {
    /// Constant with no derivative parts.
    pub const fn constant(x: f64) -> Self {
        let mut c = [0.0; CAP];
        c[0] = x;
        Hyper { depth: 0, c }
    }

    /// Real part.
    #[inline]
    pub fn re(&self) -> f64 {
        self.c[0]
    }

    /// Number of active generators.
    #[inline]
    pub fn depth(&self) -> usize {
        self.depth as usize
    }

    #[inline]
    fn len(&self) -> usize {
        1 << self.depth
    }

    /// Coefficient of the generator subset `mask`.
    pub fn coeff(&self, mask: usize) -> f64 {
        if mask < CAP {
            self.c[mask]
        } else {
            0.0
        }
    }

    /// Returns `self + e_k` with generator `k` newly activated.
    ///
    /// # Panics
    /// Panics if `k >= MAX_DEPTH`.
    pub fn seed(self, k: usize) -> Self {
        assert!(k < MAX_DEPTH, "derivative nesting exceeds {MAX_DEPTH}");
        let mut out = self;
        out.depth = out.depth.max(k as u8 + 1);
        out.c[1 << k] += 1.0;
        out
    }

    /// Coefficient of `e_k` viewed as a number in the remaining generators.
    ///
    /// The result has depth `k`, so generators above `k` are discarded.
    pub fn part(self, k: usize) -> Self {
        let bit = 1usize << k;
        let mut out = Hyper::constant(0.0);
        out.depth = k as u8;
        if k < self.depth() {
            for m in 0..bit {
                out.c[m] = self.c[m | bit];
            }
        }
        out
    }

    /// Truncates to the first `k` generators.
    pub fn truncate(self, k: usize) -> Self {
        let mut out = Hyper::constant(0.0);
        let d = k.min(self.depth());
        out.depth = d as u8;
        out.c[..1 << d].copy_from_slice(&self.c[..1 << d]);
        out
    }

    fn with_depth(depth: u8) -> Self {
        Hyper { depth, c: [0.0; CAP] }
    }

    /// Applies a function given its scaled Taylor coefficients `f^(j)(a)/j!`.
    fn taylor(self, t: &[f64]) -> Self {
        let d = self.depth();
        let mut out = Hyper::constant(t[0]);
        if d == 0 {
            return out;
        }
        let mut delta = self;
        delta.c[0] = 0.0;
        let mut pow = Hyper::constant(1.0);
        for tj in t.iter().take(d + 1).skip(1) {
            pow *= delta;
            out += pow * *tj;
        }
        out
    }

    fn map_taylor(self, coeffs: impl Fn(f64, usize) -> Vec<f64>) -> Self {
        let t = coeffs(self.re(), self.depth());
        self.taylor(&t)
    }
}

macro_rules! inherent {
    ($($name:ident),*) => {
        /// Elementary functions, callable without importing [`Float`].
        impl Hyper {
            $(
                #[inline]
                pub fn $name(self) -> Self {
                    Float::$name(self)
                }
            )*
            /// Power with a constant real exponent.
            #[inline]
            pub fn powf(self, p: f64) -> Self {
                Float::powf(self, Hyper::constant(p))
            }
            /// Integer power.
            #[inline]
            pub fn powi(self, n: i32) -> Self {
                Float::powi(self, n)
            }
            /// Four-quadrant arctangent of `self / x`.
            #[inline]
            pub fn atan2(self, x: Self) -> Self {
                Float::atan2(self, x)
            }
        }
    };
}
inherent!(sin, cos, tan, exp, ln, sqrt, abs, atan, asin, acos, recip, sinh, cosh, tanh);

/// Truncated power series in one variable used to build Taylor coefficients.
fn series_pow(q: &[f64], alpha: f64) -> Vec<f64> {
    let n = q.len();
    let mut p = vec![0.0; n];
    p[0] = q[0].powf(alpha);
    for k in 1..n {
        let mut s = 0.0;
        for j in 1..=k {
            let qj = if j < n { q[j] } else { 0.0 };
            s += ((alpha + 1.0) * j as f64 - k as f64) * qj * p[k - j];
        }
        p[k] = s / (k as f64 * q[0]);
    }
    p
}

/// Integrates a derivative series: returns `[f0, s0/1, s1/2, ...]`.
fn integrate_series(f0: f64, s: &[f64], n: usize) -> Vec<f64> {
    let mut t = vec![f0];
    for j in 1..=n {
        t.push(s[j - 1] / j as f64);
    }
    t
}

fn factorials(n: usize) -> Vec<f64> {
    let mut f = vec![1.0; n + 1];
    for j in 1..=n {
        f[j] = f[j - 1] * j as f64;
    }
    f
}

impl Default for Hyper {
    fn default() -> Self {
        Hyper::constant(0.0)
    }
}

impl fmt::Debug for Hyper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.depth == 0 {
            write!(f, "{:?}", self.c[0])
        } else {
            write!(f, "Hyper{:?}", &self.c[..self.len()])
        }
    }
}

impl fmt::Display for Hyper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.c[0], f)
    }
}

impl From<f64> for Hyper {
    fn from(x: f64) -> Self {
        Hyper::constant(x)
    }
}

impl PartialEq for Hyper {
    fn eq(&self, other: &Self) -> bool {
        self.c[0] == other.c[0]
    }
}

impl PartialOrd for Hyper {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.c[0].partial_cmp(&other.c[0])
    }
}

impl Add for Hyper {
    type Output = Hyper;
    #[inline]
    fn add(self, rhs: Hyper) -> Hyper {
        let d = self.depth.max(rhs.depth);
        let mut out = Hyper::with_depth(d);
        for i in 0..1usize << d {
            out.c[i] = self.c[i] + rhs.c[i];
        }
        out
    }
}

impl Sub for Hyper {
    type Output = Hyper;
    #[inline]
    fn sub(self, rhs: Hyper) -> Hyper {
        let d = self.depth.max(rhs.depth);
        let mut out = Hyper::with_depth(d);
        for i in 0..1usize << d {
            out.c[i] = self.c[i] - rhs.c[i];
        }
        out
    }
}

impl Mul for Hyper {
    type Output = Hyper;
    #[inline]
    fn mul(self, rhs: Hyper) -> Hyper {
        if self.depth == 0 {
            return rhs * self.c[0];
        }
        if rhs.depth == 0 {
            return self * rhs.c[0];
        }
        let d = self.depth.max(rhs.depth);
        let mut out = Hyper::with_depth(d);
        for m in 0..1usize << d {
            let mut acc = 0.0;
            let mut s = m;
            loop {
                acc += self.c[s] * rhs.c[m ^ s];
                if s == 0 {
                    break;
                }
                s = (s - 1) & m;
            }
            out.c[m] = acc;
        }
        out
    }
}

impl Div for Hyper {
    type Output = Hyper;
    #[inline]
    fn div(self, rhs: Hyper) -> Hyper {
        if rhs.depth == 0 {
            return self * (1.0 / rhs.c[0]);
        }
        self * rhs.recip()
    }
}

impl Rem for Hyper {
    type Output = Hyper;
    fn rem(self, rhs: Hyper) -> Hyper {
        self - rhs * (self / rhs).trunc()
    }
}

impl Neg for Hyper {
    type Output = Hyper;
    #[inline]
    fn neg(self) -> Hyper {
        let mut out = self;
        for i in 0..self.len() {
            out.c[i] = -out.c[i];
        }
        out
    }
}

impl Add<f64> for Hyper {
    type Output = Hyper;
    #[inline]
    fn add(mut self, rhs: f64) -> Hyper {
        self.c[0] += rhs;
        self
    }
}

impl Sub<f64> for Hyper {
    type Output = Hyper;
    #[inline]
    fn sub(mut self, rhs: f64) -> Hyper {
        self.c[0] -= rhs;
        self
    }
}

impl Mul<f64> for Hyper {
    type Output = Hyper;
    #[inline]
    fn mul(mut self, rhs: f64) -> Hyper {
        for i in 0..self.len() {
            self.c[i] *= rhs;
        }
        self
    }
}

impl Div<f64> for Hyper {
    type Output = Hyper;
    #[inline]
    fn div(self, rhs: f64) -> Hyper {
        self * (1.0 / rhs)
    }
}

impl Add<Hyper> for f64 {
    type Output = Hyper;
    fn add(self, rhs: Hyper) -> Hyper {
        rhs + self
    }
}

impl Sub<Hyper> for f64 {
    type Output = Hyper;
    fn sub(self, rhs: Hyper) -> Hyper {
        -rhs + self
    }
}

impl Mul<Hyper> for f64 {
    type Output = Hyper;
    fn mul(self, rhs: Hyper) -> Hyper {
        rhs * self
    }
}

impl Div<Hyper> for f64 {
    type Output = Hyper;
    fn div(self, rhs: Hyper) -> Hyper {
        rhs.recip() * self
    }
}

macro_rules! assign_ops {
    ($($tr:ident $m:ident $op:tt),*) => {$(
        impl $tr for Hyper {
            fn $m(&mut self, rhs: Hyper) { *self = *self $op rhs; }
        }
        impl $tr<f64> for Hyper {
            fn $m(&mut self, rhs: f64) { *self = *self $op rhs; }
        }
    )*};
}
assign_ops!(AddAssign add_assign +, SubAssign sub_assign -, MulAssign mul_assign *, DivAssign div_assign /);

impl RemAssign for Hyper {
    fn rem_assign(&mut self, rhs: Hyper) {
        *self = *self % rhs;
    }
}

impl Sum for Hyper {
    fn sum<I: Iterator<Item = Hyper>>(iter: I) -> Hyper {
        iter.fold(Hyper::constant(0.0), |a, b| a + b)
    }
}

impl Product for Hyper {
    fn product<I: Iterator<Item = Hyper>>(iter: I) -> Hyper {
        iter.fold(Hyper::constant(1.0), |a, b| a * b)
    }
}

impl Zero for Hyper {
    fn zero() -> Self {
        Hyper::constant(0.0)
    }
    fn is_zero(&self) -> bool {
        self.c[..self.len()].iter().all(|x| *x == 0.0)
    }
}

impl One for Hyper {
    fn one() -> Self {
        Hyper::constant(1.0)
    }
}

impl Num for Hyper {
    type FromStrRadixErr = <f64 as Num>::FromStrRadixErr;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        f64::from_str_radix(s, radix).map(Hyper::constant)
    }
}

impl ToPrimitive for Hyper {
    fn to_i64(&self) -> Option<i64> {
        self.c[0].to_i64()
    }
    fn to_u64(&self) -> Option<u64> {
        self.c[0].to_u64()
    }
    fn to_f64(&self) -> Option<f64> {
        Some(self.c[0])
    }
}

impl NumCast for Hyper {
    fn from<T: ToPrimitive>(n: T) -> Option<Self> {
        n.to_f64().map(Hyper::constant)
    }
}

impl FromPrimitive for Hyper {
    fn from_i64(n: i64) -> Option<Self> {
        Some(Hyper::constant(n as f64))
    }
    fn from_u64(n: u64) -> Option<Self> {
        Some(Hyper::constant(n as f64))
    }
    fn from_f64(n: f64) -> Option<Self> {
        Some(Hyper::constant(n))
    }
}

impl Float for Hyper {
    fn nan() -> Self {
        Hyper::constant(f64::NAN)
    }
    fn infinity() -> Self {
        Hyper::constant(f64::INFINITY)
    }
    fn neg_infinity() -> Self {
        Hyper::constant(f64::NEG_INFINITY)
    }
    fn neg_zero() -> Self {
        Hyper::constant(-0.0)
    }
    fn min_value() -> Self {
        Hyper::constant(f64::MIN)
    }
    fn min_positive_value() -> Self {
        Hyper::constant(f64::MIN_POSITIVE)
    }
    fn epsilon() -> Self {
        Hyper::constant(f64::EPSILON)
    }
    fn max_value() -> Self {
        Hyper::constant(f64::MAX)
    }
    fn is_nan(self) -> bool {
        self.c[..self.len()].iter().any(|x| x.is_nan())
    }
    fn is_infinite(self) -> bool {
        self.c[0].is_infinite()
    }
    fn is_finite(self) -> bool {
        self.c[..self.len()].iter().all(|x| x.is_finite())
    }
    fn is_normal(self) -> bool {
        self.c[0].is_normal()
    }
    fn classify(self) -> FpCategory {
        self.c[0].classify()
    }
    fn floor(self) -> Self {
        Hyper::constant(self.c[0].floor())
    }
    fn ceil(self) -> Self {
        Hyper::constant(self.c[0].ceil())
    }
    fn round(self) -> Self {
        Hyper::constant(self.c[0].round())
    }
    fn trunc(self) -> Self {
        Hyper::constant(self.c[0].trunc())
    }
    fn fract(self) -> Self {
        self - self.trunc()
    }
    fn abs(self) -> Self {
        if self.c[0] < 0.0 {
            -self
        } else {
            self
        }
    }
    fn signum(self) -> Self {
        Hyper::constant(self.c[0].signum())
    }
    fn is_sign_positive(self) -> bool {
        self.c[0].is_sign_positive()
    }
    fn is_sign_negative(self) -> bool {
        self.c[0].is_sign_negative()
    }
    fn mul_add(self, a: Self, b: Self) -> Self {
        self * a + b
    }
    fn recip(self) -> Self {
        self.map_taylor(|a, n| {
            let r = 1.0 / a;
            let mut t = vec![r];
            for j in 1..=n {
                t.push(-t[j - 1] * r);
            }
            t
        })
    }
    fn powi(self, n: i32) -> Self {
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut out = Hyper::constant(1.0);
        let mut base = self;
        let mut k = n as u32;
        while k > 0 {
            if k & 1 == 1 {
                out *= base;
            }
            base = base * base;
            k >>= 1;
        }
        out
    }
    fn powf(self, n: Self) -> Self {
        if n.depth == 0 {
            let p = n.c[0];
            return self.map_taylor(|a, d| {
                let mut t = vec![a.powf(p)];
                let mut binom = 1.0;
                for j in 1..=d {
                    binom *= (p - (j - 1) as f64) / j as f64;
                    t.push(binom * a.powf(p - j as f64));
                }
                t
            });
        }
        (n * self.ln()).exp()
    }
    fn sqrt(self) -> Self {
        Float::powf(self, Hyper::constant(0.5))
    }
    fn exp(self) -> Self {
        self.map_taylor(|a, n| {
            let e = a.exp();
            factorials(n).iter().map(|f| e / f).collect()
        })
    }
    fn exp2(self) -> Self {
        (self * std::f64::consts::LN_2).exp()
    }
    fn ln(self) -> Self {
        self.map_taylor(|a, n| {
            let mut t = vec![a.ln()];
            for j in 1..=n {
                let s = if j % 2 == 1 { 1.0 } else { -1.0 };
                t.push(s / (j as f64 * a.powi(j as i32)));
            }
            t
        })
    }
    fn log(self, base: Self) -> Self {
        self.ln() / base.ln()
    }
    fn log2(self) -> Self {
        self.ln() / std::f64::consts::LN_2
    }
    fn log10(self) -> Self {
        self.ln() / std::f64::consts::LN_10
    }
    fn max(self, other: Self) -> Self {
        if other.c[0] > self.c[0] || self.c[0].is_nan() {
            other
        } else {
            self
        }
    }
    fn min(self, other: Self) -> Self {
        if other.c[0] < self.c[0] || self.c[0].is_nan() {
            other
        } else {
            self
        }
    }
    fn abs_sub(self, other: Self) -> Self {
        (self - other).max(Hyper::constant(0.0))
    }
    fn cbrt(self) -> Self {
        if self.c[0] < 0.0 {
            -Float::powf(-self, Hyper::constant(1.0 / 3.0))
        } else {
            Float::powf(self, Hyper::constant(1.0 / 3.0))
        }
    }
    fn hypot(self, other: Self) -> Self {
        (self * self + other * other).sqrt()
    }
    fn sin(self) -> Self {
        self.map_taylor(|a, n| {
            let (s, c) = a.sin_cos();
            let cyc = [s, c, -s, -c];
            let f = factorials(n);
            (0..=n).map(|j| cyc[j % 4] / f[j]).collect()
        })
    }
    fn cos(self) -> Self {
        self.map_taylor(|a, n| {
            let (s, c) = a.sin_cos();
            let cyc = [c, -s, -c, s];
            let f = factorials(n);
            (0..=n).map(|j| cyc[j % 4] / f[j]).collect()
        })
    }
    fn tan(self) -> Self {
        self.sin() / self.cos()
    }
    fn asin(self) -> Self {
        self.map_taylor(|a, n| {
            let q = [1.0 - a * a, -2.0 * a, -1.0];
            let mut qq = q.to_vec();
            qq.resize(n.max(1), 0.0);
            let s = series_pow(&qq, -0.5);
            integrate_series(a.asin(), &s, n)
        })
    }
    fn acos(self) -> Self {
        -self.asin() + std::f64::consts::FRAC_PI_2
    }
    fn atan(self) -> Self {
        self.map_taylor(|a, n| {
            let mut q = vec![1.0 + a * a, 2.0 * a, 1.0];
            q.resize(n.max(3), 0.0);
            q.truncate(n.max(1));
            let s = series_pow(&q, -1.0);
            integrate_series(a.atan(), &s, n)
        })
    }
    fn atan2(self, other: Self) -> Self {
        let theta = self.c[0].atan2(other.c[0]);
        let (y0, x0) = (self.c[0], other.c[0]);
        let z = (self * x0 - other * y0) / (other * x0 + self * y0);
        z.atan() + theta
    }
    fn sin_cos(self) -> (Self, Self) {
        (self.sin(), self.cos())
    }
    fn exp_m1(self) -> Self {
        self.map_taylor(|a, n| {
            let e = a.exp();
            let mut t: Vec<f64> = factorials(n).iter().map(|f| e / f).collect();
            t[0] = a.exp_m1();
            t
        })
    }
    fn ln_1p(self) -> Self {
        let mut t = (self + 1.0).ln();
        t.c[0] = self.c[0].ln_1p();
        t
    }
    fn sinh(self) -> Self {
        let e = self.exp();
        (e - e.recip()) * 0.5
    }
    fn cosh(self) -> Self {
        let e = self.exp();
        (e + e.recip()) * 0.5
    }
    fn tanh(self) -> Self {
        self.sinh() / self.cosh()
    }
    fn asinh(self) -> Self {
        (self + (self * self + 1.0).sqrt()).ln()
    }
    fn acosh(self) -> Self {
        (self + (self * self - 1.0).sqrt()).ln()
    }
    fn atanh(self) -> Self {
        ((self + 1.0) / (-self + 1.0)).ln() * 0.5
    }
    fn integer_decode(self) -> (u64, i16, i8) {
        self.c[0].integer_decode()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d1(f: impl Fn(Hyper) -> Hyper, x: f64) -> f64 {
        f(Hyper::constant(x).seed(0)).coeff(1)
    }

    fn d2(f: impl Fn(Hyper) -> Hyper, x: f64) -> f64 {
        f(Hyper::constant(x).seed(0).seed(1)).coeff(3)
    }

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol * (1.0 + b.abs()), "{a} vs {b}");
    }

    #[test]
    fn product_rule_and_mixed_partials() {
        let x = Hyper::constant(1.3).seed(0);
        let y = Hyper::constant(-0.7).seed(1);
        let f = x * x * y + y.sin() * x;
        close(f.re(), 1.69 * -0.7 + (-0.7f64).sin() * 1.3, 1e-15);
        close(f.coeff(1), 2.0 * 1.3 * -0.7 + (-0.7f64).sin(), 1e-15);
        close(f.coeff(2), 1.69 + (-0.7f64).cos() * 1.3, 1e-15);
        close(f.coeff(3), 2.0 * 1.3 + (-0.7f64).cos(), 1e-15);
    }

    #[test]
    fn elementary_first_derivatives() {
        let x = 0.37;
        close(d1(|h| h.exp(), x), x.exp(), 1e-15);
        close(d1(|h| h.ln(), x), 1.0 / x, 1e-15);
        close(d1(|h| h.sqrt(), x), 0.5 / x.sqrt(), 1e-15);
        close(d1(|h| h.atan(), x), 1.0 / (1.0 + x * x), 1e-15);
        close(d1(|h| h.asin(), x), 1.0 / (1.0 - x * x).sqrt(), 1e-15);
        close(d1(|h| h.acos(), x), -1.0 / (1.0 - x * x).sqrt(), 1e-15);
        close(d1(|h| h.tanh(), x), 1.0 - x.tanh().powi(2), 1e-14);
        close(d1(|h| h.recip(), x), -1.0 / (x * x), 1e-15);
        close(d1(|h| h.powf(2.5), x), 2.5 * x.powf(1.5), 1e-15);
        close(d1(|h| h.cbrt(), -x), (1.0 / 3.0) * x.powf(-2.0 / 3.0), 1e-14);
    }

    #[test]
    fn elementary_second_derivatives() {
        let x = 0.41;
        close(d2(|h| h.sin(), x), -x.sin(), 1e-15);
        close(d2(|h| h.ln(), x), -1.0 / (x * x), 1e-14);
        close(d2(|h| h.atan(), x), -2.0 * x / (1.0 + x * x).powi(2), 1e-14);
        close(d2(|h| h.asin(), x), x / (1.0 - x * x).powf(1.5), 1e-14);
        close(d2(|h| h.recip(), x), 2.0 / x.powi(3), 1e-14);
        close(d2(|h| h.powi(5), x), 20.0 * x.powi(3), 1e-14);
        close(d2(|h| h.sqrt(), x), -0.25 * x.powf(-1.5), 1e-14);
    }

    #[test]
    fn atan2_matches_atan_away_from_axis() {
        let y = Hyper::constant(0.8).seed(0);
        let x = Hyper::constant(-0.3);
        let a = y.atan2(x);
        close(a.re(), 0.8f64.atan2(-0.3), 1e-15);
        close(a.coeff(1), -0.3 / (0.64 + 0.09), 1e-14);
    }

    #[test]
    fn part_extracts_nested_derivative() {
        let x = Hyper::constant(2.0).seed(0).seed(1);
        let f = x.powi(3);
        let p = f.part(1);
        assert_eq!(p.depth(), 1);
        close(p.re(), 12.0, 1e-15);
        close(p.coeff(1), 12.0, 1e-15);
    }
}
