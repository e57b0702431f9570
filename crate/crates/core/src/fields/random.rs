//! Seeded random polynomial fields for identity checks.

use rand::Rng;

use crate::error::Result;
use crate::exterior::Meta;
use crate::hyper::Hyper;

use super::{form, vector, FormRef, Pt, VecRef};

/// Shape of random polynomial components.
#[derive(Clone, Copy, Debug)]
pub struct PolySpec {
    /// Maximal total degree.
    pub degree: u32,
    /// Coefficients are uniform in `[-scale, scale]`.
    pub scale: f64,
}

impl Default for PolySpec {
    fn default() -> Self {
        PolySpec { degree: 3, scale: 1.0 }
    }
}

fn monomials(degree: u32) -> Vec<[i32; 4]> {
    let mut out = Vec::new();
    let d = degree as i32;
    for a in 0..=d {
        for b in 0..=d - a {
            for c in 0..=d - a - b {
                for e in 0..=d - a - b - c {
                    out.push([a, b, c, e]);
                }
            }
        }
    }
    out
}

/// Random polynomial in the four chart coordinates.
pub fn random_poly<R: Rng>(rng: &mut R, spec: PolySpec) -> impl Fn(&Pt) -> Hyper + Send + Sync + Clone + 'static {
    let terms: Vec<([i32; 4], f64)> =
        monomials(spec.degree).into_iter().map(|m| (m, rng.random_range(-spec.scale..=spec.scale))).collect();
    move |p: &Pt| {
        let mut s = Hyper::constant(0.0);
        for (m, c) in &terms {
            let mut t = Hyper::constant(*c);
            for (x, e) in p.iter().zip(m) {
                if *e > 0 {
                    t *= x.powi(*e);
                }
            }
            s += t;
        }
        s
    }
}

/// Form field with independent random polynomial components.
pub fn random_form<R: Rng>(rng: &mut R, meta: Meta, spec: PolySpec) -> Result<FormRef> {
    let comps: Vec<_> = (0..meta.len()).map(|_| random_poly(rng, spec)).collect();
    form(meta, move |p| comps.iter().map(|f| f(p)).collect())
}

/// Multivector field with independent random polynomial components.
pub fn random_vector<R: Rng>(rng: &mut R, meta: Meta, spec: PolySpec) -> Result<VecRef> {
    let comps: Vec<_> = (0..meta.len()).map(|_| random_poly(rng, spec)).collect();
    vector(meta, move |p| comps.iter().map(|f| f(p)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn monomial_count_matches_binomial() {
        assert_eq!(monomials(3).len(), 35);
        assert_eq!(monomials(2).len(), 15);
    }

    #[test]
    fn same_seed_same_field() {
        let f = random_poly(&mut ChaCha8Rng::seed_from_u64(7), PolySpec::default());
        let g = random_poly(&mut ChaCha8Rng::seed_from_u64(7), PolySpec::default());
        let p = super::super::pt([0.1, 0.2, 0.3, 0.4]);
        assert_eq!(f(&p).re(), g(&p).re());
    }
}
