//! Lie-algebra valuedness of forms and multivectors.
//!
//! Two one-dimensional algebras occur: the structure algebra of the
//! space-time bundle (`g`) and the axial algebra of a rotational reduction
//! (`u`). For each, a value type is the tensor power `g^up ⊗ g*^down`.
//! Because the algebras are one dimensional, products only need to track
//! these counts.

use std::fmt;

use serde::Serialize;

/// Tensor counts `up` (algebra) and `down` (dual) for one algebra.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, Serialize)]
pub struct Lie {
    pub up: u8,
    pub down: u8,
}

impl Lie {
    const S: Lie = Lie { up: 0, down: 0 };

    /// Pairing product: dual factors contract against algebra factors.
    ///
    /// Returns `None` where the product of two like factors is forced to
    /// vanish (the exterior product of one-dimensional algebra values).
    fn pair(self, o: Lie) -> Option<Lie> {
        if self == Lie::S {
            return Some(o);
        }
        if o == Lie::S {
            return Some(self);
        }
        let (u, d) = (self.up + o.up, self.down + o.down);
        let c = u.min(d);
        let tensor = Lie { up: 1, down: 1 };
        if self == tensor && o == tensor {
            return Some(tensor);
        }
        if self == tensor || o == tensor {
            return Some(if self == tensor { o } else { self });
        }
        if c == 0 {
            return None;
        }
        Some(Lie { up: u - c, down: d - c })
    }

    fn tensor(self, o: Lie) -> Lie {
        Lie { up: self.up + o.up, down: self.down + o.down }
    }

    fn weight(self) -> i32 {
        self.down as i32 - self.up as i32
    }
}

/// Which algebra an operation refers to.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum Slot {
    /// Structure algebra of the space-time bundle.
    G,
    /// Axial algebra of a rotational reduction.
    U,
}

/// Value type of a form or multivector.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, Serialize)]
pub struct Valued {
    pub g: Lie,
    pub u: Lie,
    /// Structural zero, compatible with every other value type.
    pub null: bool,
}

impl Valued {
    const fn mk(gu: u8, gd: u8, uu: u8, ud: u8) -> Valued {
        Valued { g: Lie { up: gu, down: gd }, u: Lie { up: uu, down: ud }, null: false }
    }

    /// Real valued.
    pub const SCALAR: Valued = Valued::mk(0, 0, 0, 0);
    /// `g` valued.
    pub const ALG: Valued = Valued::mk(1, 0, 0, 0);
    /// `g*` valued.
    pub const COALG: Valued = Valued::mk(0, 1, 0, 0);
    /// `g* ⊗ g` valued.
    pub const TENSOR: Valued = Valued::mk(1, 1, 0, 0);
    /// `u` valued.
    pub const U_ALG: Valued = Valued::mk(0, 0, 1, 0);
    /// `u*` valued.
    pub const U_COALG: Valued = Valued::mk(0, 0, 0, 1);
    /// Structural zero.
    pub const NULL: Valued = Valued { g: Lie::S, u: Lie::S, null: true };

    /// Counts for one slot.
    pub fn slot(self, s: Slot) -> Lie {
        match s {
            Slot::G => self.g,
            Slot::U => self.u,
        }
    }

    /// Replaces the counts of one slot.
    pub fn with_slot(mut self, s: Slot, l: Lie) -> Valued {
        match s {
            Slot::G => self.g = l,
            Slot::U => self.u = l,
        }
        self
    }

    /// Algebra factor `t` (or `∂_t`) for a slot.
    pub fn alg(s: Slot) -> Valued {
        Valued::SCALAR.with_slot(s, Lie { up: 1, down: 0 })
    }

    /// Dual factor `dt` for a slot.
    pub fn coalg(s: Slot) -> Valued {
        Valued::SCALAR.with_slot(s, Lie { up: 0, down: 1 })
    }

    /// Endomorphism factor `dt ⊗ ∂_t` for a slot.
    pub fn tensor_of(s: Slot) -> Valued {
        Valued::SCALAR.with_slot(s, Lie { up: 1, down: 1 })
    }

    /// Product used by the exterior and interior products.
    pub fn pair(self, o: Valued) -> Valued {
        if self.null || o.null {
            return Valued::NULL;
        }
        match (self.g.pair(o.g), self.u.pair(o.u)) {
            (Some(g), Some(u)) => Valued { g, u, null: false },
            _ => Valued::NULL,
        }
    }

    /// Uncontracted tensor product of value types.
    pub fn tensor(self, o: Valued) -> Valued {
        if self.null || o.null {
            return Valued::NULL;
        }
        Valued { g: self.g.tensor(o.g), u: self.u.tensor(o.u), null: false }
    }

    /// Exponent of `λ` picked up when the basis of a slot is rescaled by `λ`.
    pub fn weight(self, s: Slot) -> i32 {
        self.slot(s).weight()
    }

    /// Weight of the structure algebra: `-1` for `g`, `1` for `g*`, `0` otherwise.
    pub fn lie_weight(self) -> i32 {
        self.weight(Slot::G)
    }

    /// True for an endomorphism of the structure algebra.
    pub fn is_tensor(self) -> bool {
        self.g == Lie { up: 1, down: 1 }
    }

    /// True if two values may be added.
    pub fn compatible(self, o: Valued) -> bool {
        self.null || o.null || self == o
    }
}

fn fmt_lie(l: Lie, a: &str, out: &mut Vec<String>) {
    for _ in 0..l.down {
        out.push(format!("{a}*"));
    }
    for _ in 0..l.up {
        out.push(a.to_string());
    }
}

impl fmt::Display for Valued {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.null {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        fmt_lie(self.g, "g", &mut parts);
        fmt_lie(self.u, "u", &mut parts);
        if parts.is_empty() {
            f.write_str("R")
        } else {
            f.write_str(&parts.join("⊗"))
        }
    }
}
