//! Dense determinant and inverse for small matrices over a generic scalar.

use crate::scalar::Real;

/// Determinant of a row-major `n × n` matrix by pivoted elimination.
pub fn det<T: Real>(m: &[T], n: usize) -> T {
    let mut a = m.to_vec();
    let mut d = T::one();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i * n + col].re64().abs().total_cmp(&a[j * n + col].re64().abs()))
            .unwrap_or(col);
        if a[piv * n + col].re64() == 0.0 {
            return T::zero();
        }
        if piv != col {
            for k in 0..n {
                a.swap(piv * n + k, col * n + k);
            }
            d = -d;
        }
        let p = a[col * n + col];
        d = d * p;
        for r in col + 1..n {
            let f = a[r * n + col] / p;
            for k in col..n {
                a[r * n + k] = a[r * n + k] - f * a[col * n + k];
            }
        }
    }
    d
}

/// Inverse of a row-major `n × n` matrix, or `None` if singular.
pub fn inverse<T: Real>(m: &[T], n: usize) -> Option<Vec<T>> {
    let mut a = m.to_vec();
    let mut inv = vec![T::zero(); n * n];
    for i in 0..n {
        inv[i * n + i] = T::one();
    }
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i * n + col].re64().abs().total_cmp(&a[j * n + col].re64().abs()))
            .unwrap_or(col);
        if a[piv * n + col].re64() == 0.0 {
            return None;
        }
        for k in 0..n {
            a.swap(piv * n + k, col * n + k);
            inv.swap(piv * n + k, col * n + k);
        }
        let p = a[col * n + col];
        for k in 0..n {
            a[col * n + k] = a[col * n + k] / p;
            inv[col * n + k] = inv[col * n + k] / p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r * n + col];
            for k in 0..n {
                a[r * n + k] = a[r * n + k] - f * a[col * n + k];
                inv[r * n + k] = inv[r * n + k] - f * inv[col * n + k];
            }
        }
    }
    Some(inv)
}
