//! Square matrices over [`SymReal`] entries. Multiplication is partial: it
//! succeeds when every entry product stays inside the declared span.

use std::sync::Arc;

use crate::exactreal::{Rat, SymReal, SymbolBasis};
use crate::Error;

#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    n: usize,
    entries: Vec<SymReal>,
}

impl SymMatrix {
    pub fn zero(basis: &Arc<SymbolBasis>, n: usize) -> Self {
        SymMatrix {
            n,
            entries: vec![SymReal::zero(basis); n * n],
        }
    }

    pub fn identity(basis: &Arc<SymbolBasis>, n: usize) -> Self {
        let mut m = Self::zero(basis, n);
        for i in 0..n {
            *m.get_mut(i, i) = SymReal::one(basis);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> SymReal) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        SymMatrix { n, entries }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &Arc<SymbolBasis> {
        self.entries[0].basis()
    }

    pub fn get(&self, i: usize, j: usize) -> &SymReal {
        &self.entries[i * self.n + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut SymReal {
        &mut self.entries[i * self.n + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Exact product, when every entry product is representable.
    pub fn try_mul(&self, other: &SymMatrix) -> Option<SymMatrix> {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let basis = self.basis();
        let mut out = SymMatrix::zero(basis, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = SymReal::zero(basis);
                for k in 0..n {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = &acc + &a.try_mul(b)?;
                }
                *out.get_mut(i, j) = acc;
            }
        }
        Some(out)
    }

    pub fn sub(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, other.n);
        SymMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, q: &Rat) -> SymMatrix {
        SymMatrix {
            n: self.n,
            entries: self.entries.iter().map(|e| e.scale(q)).collect(),
        }
    }

    pub fn to_float(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).eval()).collect())
            .collect()
    }

    /// Reinterprets every entry over an extended basis.
    pub fn extended_to(&self, wider: &Arc<SymbolBasis>) -> Result<SymMatrix, Error> {
        Ok(SymMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|e| e.extended_to(wider))
                .collect::<Result<_, _>>()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactreal::rat_int;

    #[test]
    fn identity_multiplication() {
        let b = SymbolBasis::sqrt_primes(2);
        let i = SymMatrix::identity(&b, 3);
        let mut m = SymMatrix::zero(&b, 3);
        *m.get_mut(0, 1) = SymReal::term(&b, 1, rat_int(2));
        *m.get_mut(2, 2) = SymReal::from_int(&b, 5);
        assert_eq!(i.try_mul(&m).unwrap(), m);
        assert_eq!(m.try_mul(&i).unwrap(), m);
    }

    #[test]
    fn unrepresentable_product() {
        let b = SymbolBasis::sqrt_primes(2); // no sqrt6 declared
        let mut a = SymMatrix::identity(&b, 1);
        *a.get_mut(0, 0) = SymReal::term(&b, 1, rat_int(1));
        let mut c = SymMatrix::identity(&b, 1);
        *c.get_mut(0, 0) = SymReal::term(&b, 2, rat_int(1));
        assert!(a.try_mul(&c).is_none());
    }
}
