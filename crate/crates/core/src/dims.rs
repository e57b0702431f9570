//! Physical dimensions over the base `(length, time, mass, current)`.
//!
//! Coordinates are plain numbers, so a dimension tag belongs to a whole
//! object (form, vector, metric, constant) rather than to its components.

use std::fmt;
use std::ops::{Div, Mul};

use serde::Serialize;
use thiserror::Error;

/// Exponent vector over `L, T, M, I`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, Serialize)]
pub struct Dim {
    pub l: i8,
    pub t: i8,
    pub m: i8,
    pub i: i8,
}

impl Dim {
    /// Builds a dimension from its exponents.
    pub const fn new(l: i8, t: i8, m: i8, i: i8) -> Self {
        Dim { l, t, m, i }
    }

    /// Dimensionless.
    pub const NONE: Dim = Dim::new(0, 0, 0, 0);
    /// Length.
    pub const L: Dim = Dim::new(1, 0, 0, 0);
    /// Time.
    pub const T: Dim = Dim::new(0, 1, 0, 0);
    /// Mass.
    pub const M: Dim = Dim::new(0, 0, 1, 0);
    /// Current.
    pub const I: Dim = Dim::new(0, 0, 0, 1);
    /// Voltage, `L^2 T^-3 M I^-1`.
    pub const U: Dim = Dim::new(2, -3, 1, -1);
    /// Action, `U I T^2`.
    pub const A: Dim = Dim::new(2, -1, 1, 0);

    /// Integer power.
    pub const fn pow(self, k: i8) -> Dim {
        Dim::new(self.l * k, self.t * k, self.m * k, self.i * k)
    }

    /// Multiplicative inverse.
    pub const fn inv(self) -> Dim {
        self.pow(-1)
    }

    /// Square root, if every exponent is even.
    pub fn sqrt(self) -> Option<Dim> {
        let all_even = [self.l, self.t, self.m, self.i].iter().all(|e| e % 2 == 0);
        all_even.then(|| Dim::new(self.l / 2, self.t / 2, self.m / 2, self.i / 2))
    }

    /// True for the dimensionless tag.
    pub fn is_none(self) -> bool {
        self == Dim::NONE
    }
}

impl Mul for Dim {
    type Output = Dim;
    fn mul(self, o: Dim) -> Dim {
        Dim::new(self.l + o.l, self.t + o.t, self.m + o.m, self.i + o.i)
    }
}

impl Div for Dim {
    type Output = Dim;
    fn div(self, o: Dim) -> Dim {
        self * o.inv()
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_none() {
            return f.write_str("1");
        }
        let mut first = true;
        for (sym, e) in [("L", self.l), ("T", self.t), ("M", self.m), ("I", self.i)] {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if e == 1 {
                f.write_str(sym)?;
            } else {
                write!(f, "{sym}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Dimension disagreement between two terms of a sum.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("dimension mismatch: term {index} has [{found}], expected [{expected}]")]
pub struct DimError {
    pub index: usize,
    pub expected: Dim,
    pub found: Dim,
}

/// Checks that every term of a sum carries the same dimension.
pub fn pd_check(terms: &[Dim]) -> Result<Dim, DimError> {
    let Some(&first) = terms.first() else {
        return Ok(Dim::NONE);
    };
    for (index, &found) in terms.iter().enumerate().skip(1) {
        if found != first {
            return Err(DimError { index, expected: first, found });
        }
    }
    Ok(first)
}

/// Dimension tags of the named quantities.
pub mod pd {
    use super::Dim;

    /// Metric tensor.
    pub const G: Dim = Dim::L.pow(2);
    /// Lapse and its variants.
    pub const LAPSE: Dim = Dim::L;
    /// Speed of light.
    pub const C0: Dim = Dim::new(1, -1, 0, 0);
    /// Vacuum impedance.
    pub const Z0: Dim = Dim::new(2, -3, 1, -2);
    /// Potential, field strength and their split parts.
    pub const F: Dim = Dim::new(2, -2, 1, -1);
    /// Excitation, current and their split parts.
    pub const H: Dim = Dim::new(0, 1, 0, 1);
    /// Energy-momentum and force forms.
    pub const T: Dim = Dim::A;
    /// Four-velocity.
    pub const VELOCITY: Dim = Dim::new(0, -1, 0, 0);
    /// Covariant four-velocity.
    pub const MU: Dim = Dim::new(2, -1, 0, 0);
    /// Acceleration and vorticity forms.
    pub const ACCEL: Dim = Dim::new(2, -1, 0, 0);

    /// Hodge operator in `n` dimensions on `k`-forms.
    pub const fn hodge(n: i8, k: i8) -> Dim {
        Dim::L.pow(n - 2 * k)
    }

    /// Riesz map on `k`-vectors.
    pub const fn riesz(k: i8) -> Dim {
        Dim::L.pow(2 * k)
    }
}
